//! Finitely presented abelian groups, Smith normal form and exact solves.

pub mod group;
pub mod matrix;
pub mod mixed;
pub mod snf;

pub use group::{
    class_coordinates, homology_at, integer_kernel, solve_preimage, solve_with_snf, subgroup_membership,
    AbelianGroupPresentation, Ring,
};
pub use matrix::{Matrix, Scalar, SparseRow};
pub use mixed::{rational_kernel, solve_mixed, Echelon, Hermite, MixedGroup, MixedSolver, MixedSubgroup};
pub use snf::{smith_normal_form, SnfDecomposition};
