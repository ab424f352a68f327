//! Simplicial complexes, cochains, cup products, star covers and pullbacks.

pub mod cochain;
pub mod cohomology;
pub mod complex;
pub mod cover;
pub mod maps;

pub use cochain::{Coefficients, GradedCochain};
pub use cohomology::cohomology;
pub use complex::{faces, standard, validate, Simplex, SimplicialComplex};
pub use cover::{cone_contraction, cone_operator, star_cover, StarCover};
pub use maps::{pullback, SimplicialMap};
