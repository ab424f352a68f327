//! Čech–Deligne cochains over the star cover, the Deligne–Beilinson product,
//! curvature and integration maps, and the differential cohomology hexagon.
//!
//! Grading: level `n` has slot `q = 0` holding integers and slot `q = j`
//! (`1 <= j <= n`) holding rational `(j-1)`-cochains on stars. A component
//! `(p, q)` sits in total degree `p + q`, and differential cohomology of
//! degree `n` is the cohomology of level `n` at total degree `n`.

pub mod cohomology;
pub mod complex;
pub mod cup;
pub mod hexagon;
pub mod maps;

pub use cohomology::{deligne_cohomology, DeligneCohomology};
pub use complex::{build_deligne, DeligneBase, DeligneCochain, DeligneComplex};
pub use cup::db_cup;
pub use hexagon::{hexagon_check, HexagonReport, Junction};
pub use maps::{connection_form, curvature_r, de_rham_image, flat_lift, include_a, include_flat_j, integrate_i};
