use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use super::backend::{BackendKind, Element, GradedBackend};
use crate::error::{Error, Result};
use crate::Rat;

/// Strictly upper triangular matrix of cochains, 1-based slots `(i, j)` with
/// `i < j`; absent slots are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainMatrix {
    pub size: usize,
    pub entries: BTreeMap<(usize, usize), Element>,
}

fn add_into(slot: &mut Option<Element>, x: Element) -> Result<()> {
    *slot = Some(match slot.take() {
        None => x,
        Some(y) => y.add(&x)?,
    });
    Ok(())
}

impl CochainMatrix {
    pub fn new(size: usize) -> Self {
        CochainMatrix { size, entries: BTreeMap::new() }
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&Element> {
        self.entries.get(&(i, j))
    }

    pub fn set(&mut self, i: usize, j: usize, x: Element) -> Result<()> {
        if !(1 <= i && i < j && j <= self.size) {
            return Err(Error::DimensionMismatch(format!("slot ({i}, {j}) is not strictly upper triangular in size {}", self.size)));
        }
        self.entries.insert((i, j), x);
        Ok(())
    }

    /// Entrywise differential.
    pub fn d(&self, backend: &dyn GradedBackend) -> Result<Self> {
        let entries = self.entries.iter().map(|(&k, x)| Ok((k, backend.d(x)?))).collect::<Result<_>>()?;
        Ok(CochainMatrix { size: self.size, entries })
    }

    /// Entrywise twist `ā = (-1)^(q+1) a`.
    pub fn twist(&self) -> Self {
        CochainMatrix { size: self.size, entries: self.entries.iter().map(|(&k, x)| (k, x.twist())).collect() }
    }

    pub fn neg(&self) -> Self {
        CochainMatrix { size: self.size, entries: self.entries.iter().map(|(&k, x)| (k, x.neg())).collect() }
    }

    /// Matrix product with the backend cup. Terms summed into one slot must
    /// share weight and degree.
    pub fn product(&self, other: &Self, backend: &dyn GradedBackend) -> Result<Self> {
        if self.size != other.size {
            return Err(Error::DimensionMismatch(format!("sizes {} and {}", self.size, other.size)));
        }
        let mut out: BTreeMap<(usize, usize), Option<Element>> = BTreeMap::new();
        for (&(i, k), x) in &self.entries {
            for (&(_, j), y) in other.entries.range((k, 0)..(k + 1, 0)) {
                add_into(out.entry((i, j)).or_default(), backend.cup(x, y)?)?;
            }
        }
        Ok(CochainMatrix { size: self.size, entries: out.into_iter().filter_map(|(k, v)| v.map(|v| (k, v))).collect() })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out: BTreeMap<(usize, usize), Option<Element>> = self.entries.iter().map(|(&k, v)| (k, Some(v.clone()))).collect();
        for (&k, v) in &other.entries {
            add_into(out.entry(k).or_default(), v.clone())?;
        }
        Ok(CochainMatrix { size: self.size.max(other.size), entries: out.into_iter().filter_map(|(k, v)| v.map(|v| (k, v))).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// `μ(A) = dA - Ā·A`.
    pub fn curvature(&self, backend: &dyn GradedBackend) -> Result<Self> {
        self.d(backend)?.sub(&self.twist().product(self, backend)?)
    }

    /// Slots holding a nonzero entry.
    pub fn support(&self) -> Vec<(usize, usize)> {
        self.entries.iter().filter(|(_, x)| !x.is_zero()).map(|(&k, _)| k).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.support().is_empty()
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self.entries.iter().map(|(&(i, j), x)| json!({ "row": i, "col": j, "cochain": x.to_json() })).collect();
        json!({ "size": self.size, "entries": entries })
    }
}

/// Defining-system shaped matrix for an `l`-fold product: entry `a_(s,t)`
/// for `1 <= s <= t <= l` sits in slot `(s, t + 1)` of an `(l + 1)`-square
/// matrix, with `a_(i,i)` the given classes.
///
/// Entry `a_(s,t)` has weight `Σ w_i + (t - s) ε` and degree `Σ m_i - (t - s)`
/// over `i = s..=t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalConnectionMatrix {
    pub l: usize,
    pub kind: BackendKind,
    pub epsilon: usize,
    pub weights: Vec<usize>,
    pub degrees: Vec<usize>,
    pub entries: BTreeMap<(usize, usize), Element>,
    /// Pairs `(s, t)` exempt from the Maurer–Cartan equation.
    pub corner_mask: BTreeSet<(usize, usize)>,
}

impl FormalConnectionMatrix {
    /// Matrix with the classes on the superdiagonal and zeros elsewhere.
    pub fn new(backend: &dyn GradedBackend, classes: &[Element]) -> Result<Self> {
        let l = classes.len();
        if l < 2 {
            return Err(Error::DimensionMismatch("a Massey product needs at least two classes".into()));
        }
        let mut a = FormalConnectionMatrix {
            l,
            kind: backend.kind(),
            epsilon: backend.epsilon(),
            weights: classes.iter().map(|c| c.weight).collect(),
            degrees: classes.iter().map(|c| c.degree).collect(),
            entries: BTreeMap::new(),
            corner_mask: [(1, l)].into_iter().collect(),
        };
        for (i, c) in classes.iter().enumerate() {
            backend.check_element(c)?;
            a.entries.insert((i + 1, i + 1), c.clone());
        }
        for p in 1..l {
            for s in 1..=l - p {
                let t = s + p;
                if a.is_masked(s, t) {
                    continue;
                }
                let (w, d) = a.grading(s, t)?;
                a.entries.insert((s, t), Element::zero(backend, w, d)?);
            }
        }
        Ok(a)
    }

    pub fn is_masked(&self, s: usize, t: usize) -> bool {
        self.corner_mask.contains(&(s, t))
    }

    /// `(weight, degree)` of `a_(s,t)`.
    pub fn grading(&self, s: usize, t: usize) -> Result<(usize, usize)> {
        if !(1 <= s && s <= t && t <= self.l) {
            return Err(Error::DimensionMismatch(format!("no entry a_({s},{t}) in an {}-fold product", self.l)));
        }
        let w: usize = self.weights[s - 1..t].iter().sum::<usize>() + (t - s) * self.epsilon;
        let m: usize = self.degrees[s - 1..t].iter().sum();
        let d = m.checked_sub(t - s).ok_or_else(|| Error::GradingMismatch(format!("a_({s},{t}) would have negative degree")))?;
        Ok((w, d))
    }

    /// `(weight, degree)` of the Massey representative.
    pub fn corner_grading(&self) -> Result<(usize, usize)> {
        let (w, d) = self.grading(1, self.l)?;
        Ok((w, d + 1))
    }

    pub fn entry(&self, s: usize, t: usize) -> Option<&Element> {
        self.entries.get(&(s, t))
    }

    pub fn class(&self, i: usize) -> &Element {
        &self.entries[&(i, i)]
    }

    pub fn set(&mut self, s: usize, t: usize, x: Element) -> Result<()> {
        let (w, d) = self.grading(s, t)?;
        if (x.weight, x.degree) != (w, d) {
            return Err(Error::GradingMismatch(format!("a_({s},{t}) must have weight {w} and degree {d}, got {} and {}", x.weight, x.degree)));
        }
        self.entries.insert((s, t), x);
        Ok(())
    }

    /// Square matrix form, with masked slots left empty.
    pub fn to_matrix(&self) -> CochainMatrix {
        let mut m = CochainMatrix::new(self.l + 1);
        for (&(s, t), x) in &self.entries {
            if !self.is_masked(s, t) {
                m.entries.insert((s, t + 1), x.clone());
            }
        }
        m
    }

    /// `Σ_(i=s)^(t-1) ā_(s,i) ∪ a_(i+1,t)`, the right side of the band
    /// equation for `a_(s,t)`.
    pub fn band_rhs(&self, backend: &dyn GradedBackend, s: usize, t: usize) -> Result<Element> {
        let (w, d) = self.grading(s, t)?;
        let mut total = Element::zero(backend, w, d + 1)?;
        for i in s..t {
            let (Some(x), Some(y)) = (self.entry(s, i), self.entry(i + 1, t)) else { continue };
            if self.is_masked(s, i) || self.is_masked(i + 1, t) {
                continue;
            }
            total = total.add(&backend.cup(&x.twist(), y)?)?;
        }
        Ok(total)
    }

    /// The Massey representative `Σ ā_(1,i) ∪ a_(i+1,l)`.
    pub fn corner(&self, backend: &dyn GradedBackend) -> Result<Element> {
        self.band_rhs(backend, 1, self.l)
    }

    /// Applies `f` to every stored entry.
    pub fn map_entries(&self, kind: BackendKind, epsilon: usize, mut f: impl FnMut(usize, usize, &Element) -> Result<Element>) -> Result<Self> {
        let entries = self.entries.iter().map(|(&(s, t), x)| Ok(((s, t), f(s, t, x)?))).collect::<Result<BTreeMap<_, _>>>()?;
        let mut out = FormalConnectionMatrix { entries: BTreeMap::new(), kind, epsilon, ..self.clone() };
        out.weights = (1..=self.l).map(|i| entries[&(i, i)].weight).collect();
        out.degrees = (1..=self.l).map(|i| entries[&(i, i)].degree).collect();
        for ((s, t), x) in entries {
            out.set(s, t, x)?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self.entries.iter().map(|(&(s, t), x)| json!({ "s": s, "t": t, "cochain": x.to_json() })).collect();
        let mask: Vec<Value> = self.corner_mask.iter().map(|&(s, t)| json!([s, t])).collect();
        json!({
            "l": self.l,
            "backend": self.kind,
            "weights": self.weights,
            "degrees": self.degrees,
            "corner_mask": mask,
            "entries": entries,
        })
    }

    pub fn from_json(backend: &dyn GradedBackend, v: &Value) -> Result<Self> {
        let l = v.get("l").and_then(Value::as_u64).ok_or_else(|| Error::Parse("defining system needs l".into()))? as usize;
        let mut entries = BTreeMap::new();
        for e in v.get("entries").and_then(Value::as_array).ok_or_else(|| Error::Parse("defining system needs entries".into()))? {
            let s = e.get("s").and_then(Value::as_u64).ok_or_else(|| Error::Parse("entry needs s".into()))? as usize;
            let t = e.get("t").and_then(Value::as_u64).ok_or_else(|| Error::Parse("entry needs t".into()))? as usize;
            let x = Element::from_json(e.get("cochain").ok_or_else(|| Error::Parse("entry needs a cochain".into()))?)?;
            entries.insert((s, t), x);
        }
        let classes = (1..=l)
            .map(|i| entries.get(&(i, i)).cloned().ok_or_else(|| Error::Parse(format!("missing class a_({i},{i})"))))
            .collect::<Result<Vec<_>>>()?;
        let mut a = FormalConnectionMatrix::new(backend, &classes)?;
        if let Some(mask) = v.get("corner_mask").and_then(Value::as_array) {
            a.corner_mask = mask
                .iter()
                .map(|p| {
                    let pair = p.as_array().filter(|p| p.len() == 2).ok_or_else(|| Error::Parse("mask entries are pairs".into()))?;
                    let get = |i: usize| pair[i].as_u64().map(|x| x as usize).ok_or_else(|| Error::Parse("mask entries are integers".into()));
                    Ok((get(0)?, get(1)?))
                })
                .collect::<Result<_>>()?;
        }
        for ((s, t), x) in entries {
            backend.check_element(&x)?;
            a.set(s, t, x)?;
        }
        Ok(a)
    }
}

/// `ā = (-1)^(q+1) a`.
pub fn twist(a: &Element) -> Element {
    a.twist()
}

/// Entries of `μ(A) = dA - Ā·A`, indexed like `A`: `μ_(s,t)` is
/// `d a_(s,t) - Σ ā_(s,i) ∪ a_(i+1,t)`, with masked entries taken as zero.
pub fn mc_curvature(backend: &dyn GradedBackend, a: &FormalConnectionMatrix) -> Result<BTreeMap<(usize, usize), Element>> {
    let mut out = BTreeMap::new();
    for s in 1..=a.l {
        for t in s..=a.l {
            let (w, d) = a.grading(s, t)?;
            let da = match a.entry(s, t) {
                Some(x) if !a.is_masked(s, t) => {
                    if (x.weight, x.degree) != (w, d) {
                        return Err(Error::GradingMismatch(format!("a_({s},{t}) has weight {} degree {}, expected {w} and {d}", x.weight, x.degree)));
                    }
                    backend.d(x)?
                }
                _ => Element::zero(backend, w, d + 1)?,
            };
            out.insert((s, t), da.sub(&a.band_rhs(backend, s, t)?)?);
        }
    }
    Ok(out)
}

/// Verdict of [`is_formal_connection`]: offending matrix slots `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionReport {
    pub formal: bool,
    pub violations: Vec<(usize, usize)>,
}

/// Whether `μ(A)` vanishes off the corner mask; violations are reported in
/// matrix slots `(s, t + 1)`.
pub fn is_formal_connection(backend: &dyn GradedBackend, a: &FormalConnectionMatrix) -> Result<ConnectionReport> {
    let mu = mc_curvature(backend, a)?;
    let violations: Vec<(usize, usize)> = mu.iter().filter(|(&(s, t), x)| !a.is_masked(s, t) && !x.is_zero()).map(|(&(s, t), _)| (s, t + 1)).collect();
    Ok(ConnectionReport { formal: violations.is_empty(), violations })
}

/// Scales every entry by a rational.
pub fn scale_entries(a: &FormalConnectionMatrix, k: &Rat) -> FormalConnectionMatrix {
    FormalConnectionMatrix { entries: a.entries.iter().map(|(&key, x)| (key, x.scale(k))).collect(), ..a.clone() }
}
