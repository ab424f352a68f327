//! Exact computations with differential cohomology on finite simplicial
//! complexes: Deligne–Beilinson cochains, cup products and Massey products.

pub mod abelian;
pub mod deligne;
pub mod doldkan;
pub mod error;
pub mod massey;
pub mod simplicial;

pub use error::{Error, Result};

pub type Int = num_bigint::BigInt;
pub type Rat = num_rational::BigRational;
pub type IntMatrix = abelian::Matrix<Int>;
pub type RatMatrix = abelian::Matrix<Rat>;
