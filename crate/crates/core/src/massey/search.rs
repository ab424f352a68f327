use serde::{Deserialize, Serialize};

use super::backend::{Element, GradedBackend};
use super::cohomology::cohomology_generators;
use super::connection::FormalConnectionMatrix;
use crate::error::{Error, Result};
use crate::Rat;

/// Options for [`find_defining_system`].
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SearchOptions {
    /// When the greedy pass is obstructed, try up to this many shifts of the
    /// lower bands by cohomology generators (coefficients -1, 0, 1).
    pub max_enum: usize,
}

/// Fills the bands of a defining system for `classes` with canonical
/// solutions of `d a_(s,t) = Σ ā_(s,i) ∪ a_(i+1,t)`, band by band.
///
/// Returns `None` when some band equation has no solution. With
/// `max_enum > 0` an obstructed greedy pass is retried with homotopy slots
/// shifted by combinations of cohomology generators.
pub fn find_defining_system(backend: &dyn GradedBackend, classes: &[Element], options: &SearchOptions) -> Result<Option<FormalConnectionMatrix>> {
    let a = FormalConnectionMatrix::new(backend, classes)?;
    for (i, c) in classes.iter().enumerate() {
        if !backend.is_closed(c)? {
            return Err(Error::NotACocycle(format!("class {} is not closed", i + 1)));
        }
    }
    if let Some(done) = greedy(backend, &a, &Shifts::default())? {
        return Ok(Some(done));
    }
    if options.max_enum == 0 {
        return Ok(None);
    }
    // Slots that can be shifted: every non-diagonal entry below the top band.
    let mut slots = Vec::new();
    for p in 1..a.l.saturating_sub(1) {
        for s in 1..=a.l - p {
            let t = s + p;
            if a.is_masked(s, t) {
                continue;
            }
            let (w, d) = a.grading(s, t)?;
            for g in cohomology_generators(backend, w, d)? {
                slots.push(((s, t), g));
            }
        }
    }
    let mut tried = 0usize;
    for combo in Combinations::new(slots.len()) {
        if tried >= options.max_enum {
            break;
        }
        tried += 1;
        let mut shifts = Shifts::default();
        for (k, c) in combo {
            let ((s, t), g) = &slots[k];
            shifts.0.push(((*s, *t), g.scale(&Rat::from_integer(c.into()))));
        }
        if let Some(done) = greedy(backend, &a, &shifts)? {
            return Ok(Some(done));
        }
    }
    Ok(None)
}

#[derive(Default)]
struct Shifts(Vec<((usize, usize), Element)>);

fn greedy(backend: &dyn GradedBackend, start: &FormalConnectionMatrix, shifts: &Shifts) -> Result<Option<FormalConnectionMatrix>> {
    let mut a = start.clone();
    for p in 1..a.l {
        for s in 1..=a.l - p {
            let t = s + p;
            if a.is_masked(s, t) {
                continue;
            }
            let rhs = a.band_rhs(backend, s, t)?;
            let Some(mut x) = backend.solve(&rhs)? else { return Ok(None) };
            for (slot, g) in &shifts.0 {
                if *slot == (s, t) {
                    x = x.add(g)?;
                }
            }
            a.set(s, t, x)?;
        }
    }
    Ok(Some(a))
}

/// Coefficient vectors in `{-1, 0, 1}^n` by increasing support size, as
/// sparse `(index, coefficient)` lists; the empty vector is skipped.
struct Combinations {
    n: usize,
    support: usize,
    indices: Vec<usize>,
    signs: u64,
    fresh: bool,
}

impl Combinations {
    fn new(n: usize) -> Self {
        Combinations { n, support: 1, indices: vec![0], signs: 0, fresh: true }
    }

    fn advance_indices(&mut self) -> bool {
        let k = self.indices.len();
        for i in (0..k).rev() {
            if self.indices[i] < self.n - (k - i) {
                self.indices[i] += 1;
                for j in i + 1..k {
                    self.indices[j] = self.indices[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for Combinations {
    type Item = Vec<(usize, i64)>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.n == 0 || self.support > self.n.min(60) {
            return None;
        }
        if self.fresh {
            self.fresh = false;
        } else if self.signs + 1 < (1u64 << self.support) {
            self.signs += 1;
        } else {
            self.signs = 0;
            if !self.advance_indices() {
                self.support += 1;
                if self.support > self.n.min(60) {
                    return None;
                }
                self.indices = (0..self.support).collect();
            }
        }
        Some(self.indices.iter().enumerate().map(|(b, &i)| (i, if self.signs >> b & 1 == 1 { -1 } else { 1 })).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::super::backend::{Dga, DgaBackend};
    use super::*;

    #[test]
    fn combinations_enumerate_sign_patterns() {
        let all: Vec<_> = Combinations::new(2).collect();
        assert_eq!(all.len(), 8);
        assert_eq!(all[0], vec![(0, 1)]);
        assert_eq!(all[4], vec![(0, 1), (1, 1)]);
    }

    #[test]
    fn heisenberg_triple_has_canonical_system() {
        let dga = Dga::heisenberg();
        let b = DgaBackend::new(dga.clone());
        let x = dga.element(1, &[(1, &["x"])]).unwrap();
        let y = dga.element(1, &[(1, &["y"])]).unwrap();
        let z = dga.element(1, &[(1, &["z"])]).unwrap();
        let a = find_defining_system(&b, &[x.clone(), x, y], &SearchOptions::default()).unwrap().unwrap();
        assert!(a.entry(1, 2).unwrap().is_zero());
        assert_eq!(a.entry(2, 3).unwrap(), &z);
    }

    #[test]
    fn nonvanishing_cup_obstructs() {
        let dga = Dga::heisenberg();
        let b = DgaBackend::new(dga.clone());
        let x = dga.element(1, &[(1, &["x"])]).unwrap();
        let xz = b.cup(&x, &dga.element(1, &[(1, &["z"])]).unwrap()).unwrap();
        // y ∪ xz = -xyz is not exact.
        let y = dga.element(1, &[(1, &["y"])]).unwrap();
        assert!(find_defining_system(&b, &[y.clone(), xz.clone(), y], &SearchOptions { max_enum: 10 }).unwrap().is_none());
        let not_closed = dga.element(1, &[(1, &["z"])]).unwrap();
        assert!(find_defining_system(&b, &[not_closed, x.clone(), x], &SearchOptions::default()).is_err());
    }
}
