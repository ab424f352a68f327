//! Matric Massey products over graded backends.
//!
//! A backend is a family of cochain complexes `C(w)` indexed by a weight,
//! with a product `C(w) ⊗ C(w') -> C(w + w' + ε)`: `ε = 0` for simplicial
//! cochains and finite DGAs, `ε = 1` for Deligne cochains (weight `w` is
//! level `w + 1`).
//!
//! Sign conventions: the twist is `ā = (-1)^(q+1) a` in degree `q`, the
//! band equation is `d a_(s,t) = Σ ā_(s,i) ∪ a_(i+1,t)` and the curvature is
//! `μ(A) = dA - Ā·A`. With this twist the product of matrices obeys
//! `d(AB) = dA·B - Ā·dB`.

pub mod backend;
pub mod checks;
pub mod cohomology;
pub mod connection;
pub mod product;
pub mod search;

pub use backend::{BackendKind, Dga, DgaBackend, DifferentialBackend, Element, GradedBackend, SimplicialBackend};
pub use checks::{
    check_naturality, check_slide, forget_i, forget_system, perturb_homotopies, slide_system, twisted_corner_prediction, twisted_mc_defect, DefectReport, ForgetVerdict, NaturalityVerdict,
    SlideVerdict,
};
pub use cohomology::{class_report, cohomology_basis, cohomology_generators, cohomology_group, ClassReport};
pub use connection::{is_formal_connection, mc_curvature, twist, CochainMatrix, ConnectionReport, FormalConnectionMatrix};
pub use product::{flat_image, flatness, massey_product, triple_indeterminacy, Flatness, Indeterminacy, MasseyResult};
pub use search::{find_defining_system, SearchOptions};
