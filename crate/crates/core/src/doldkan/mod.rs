//! Dold–Kan correspondence for bounded complexes of finitely generated
//! abelian groups, truncated at an explicit simplicial level.
//!
//! Level `n` of `dk(C)` is `⊕ C_k` over the surjections `[n] -> [k]`, with
//! surjections in lexicographic order. The normalized Moore complex uses
//! `N_n = ∩_(i<n) ker d_i` and differential `(-1)^n d_n`; with this sign the
//! identity-summand projection `N(dk C) -> C` is a chain isomorphism.

mod complex;
mod dk;
mod moore;

pub use complex::BoundedChainComplex;
pub use dk::{dk, enumerate_surjections, label_simplex_check, DKTruncation, LabelVerdict, Summand};
pub use moore::{counit_check, homotopy_groups, moore_normalize, moore_with_inclusions, presented_map_is_iso, CounitVerdict, MooreComplex};
