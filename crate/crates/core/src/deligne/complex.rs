use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::abelian::group::mul_int_rat;
use crate::abelian::Matrix;
use crate::error::{Error, Result};
use crate::simplicial::{Coefficients, GradedCochain, SimplicialComplex, StarCover};
use crate::{Int, IntMatrix, Rat};

/// Čech–Deligne data shared by all levels over one base complex: the star
/// cover, its coface table and a cache of built levels.
pub struct DeligneBase {
    cover: StarCover,
    /// `cofaces[p][σ]` lists `(τ, i)` with `σ` the `i`-th face of `τ`.
    cofaces: Vec<Vec<Vec<(usize, usize)>>>,
    levels: Mutex<BTreeMap<usize, Arc<DeligneComplex>>>,
}

impl fmt::Debug for DeligneBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DeligneBase({:?})", self.cover.base().to_json())
    }
}

impl DeligneBase {
    pub fn new(k: &Arc<SimplicialComplex>) -> Result<Arc<Self>> {
        let cover = StarCover::new(k)?;
        let top = (k.dimension() + 1) as usize;
        let mut cofaces: Vec<Vec<Vec<(usize, usize)>>> = (0..top).map(|p| vec![Vec::new(); k.count(p)]).collect();
        for p in 1..top {
            for (t, s) in k.simplices(p).iter().enumerate() {
                for (i, f) in crate::simplicial::faces(s).iter().enumerate() {
                    cofaces[p - 1][k.index_of(f).expect("closed under faces")].push((t, i));
                }
            }
        }
        Ok(Arc::new(DeligneBase { cover, cofaces, levels: Mutex::new(BTreeMap::new()) }))
    }

    pub fn cover(&self) -> &StarCover {
        &self.cover
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        self.cover.base()
    }

    /// The level-`n` Deligne complex, built once and cached.
    pub fn level(self: &Arc<Self>, n: usize) -> Result<Arc<DeligneComplex>> {
        if n == 0 {
            return Err(Error::InvalidComplex("Deligne level must be at least 1".into()));
        }
        if let Some(c) = self.levels.lock().expect("cache lock").get(&n) {
            return Ok(c.clone());
        }
        let built = Arc::new(DeligneComplex::build(self.clone(), n)?);
        Ok(self.levels.lock().expect("cache lock").entry(n).or_insert(built).clone())
    }
}

/// Bigraded block `(p, q)` inside one total degree: Čech degree `p`, slot
/// `q` (`q = 0` the integers, `q = j >= 1` the `(j-1)`-cochains on stars).
#[derive(Clone, Debug)]
pub struct Block {
    pub p: usize,
    pub q: usize,
    pub offset: usize,
    /// `(offset, len)` of the slot over each Čech `p`-simplex.
    pub slots: Vec<(usize, usize)>,
}

/// Coordinate layout of one total degree.
#[derive(Clone, Debug, Default)]
pub struct Layout {
    pub blocks: Vec<Block>,
    pub dim: usize,
    pub integral: Vec<bool>,
}

impl Layout {
    pub fn block(&self, p: usize, q: usize) -> Option<&Block> {
        self.blocks.iter().find(|b| b.p == p && b.q == q)
    }
}

/// Total complex of the Čech–Deligne double complex of level `n`, with
/// `D = d + (-1)^q δ` on the block `(p, q)`.
pub struct DeligneComplex {
    base: Arc<DeligneBase>,
    level: usize,
    layouts: Vec<Layout>,
    /// `d[k]`: total degree `k` to `k + 1`.
    d: Vec<IntMatrix>,
}

impl fmt::Debug for DeligneComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<usize> = self.layouts.iter().map(|l| l.dim).collect();
        write!(f, "DeligneComplex(level {}, dims {:?})", self.level, dims)
    }
}

/// Builds the level-`n` Deligne complex over the star cover of `k`.
pub fn build_deligne(k: &Arc<SimplicialComplex>, n: usize) -> Result<Arc<DeligneComplex>> {
    DeligneBase::new(k)?.level(n)
}

impl DeligneComplex {
    fn build(base: Arc<DeligneBase>, level: usize) -> Result<Self> {
        let k = base.complex().clone();
        let top_p = (k.dimension() + 1) as usize;
        let max_degree = top_p + level;
        let mut layouts = Vec::with_capacity(max_degree + 2);
        for deg in 0..=max_degree + 1 {
            let mut layout = Layout::default();
            for p in 0..top_p {
                if p > deg || deg - p > level {
                    continue;
                }
                let q = deg - p;
                let offset = layout.dim;
                let mut slots = Vec::with_capacity(k.count(p));
                for s in 0..k.count(p) {
                    let len = if q == 0 { 1 } else { base.cover.star(p, s).count(q - 1) };
                    slots.push((layout.dim, len));
                    layout.dim += len;
                    layout.integral.extend(std::iter::repeat(q == 0).take(len));
                }
                layout.blocks.push(Block { p, q, offset, slots });
            }
            layouts.push(layout);
        }
        let mut complex = DeligneComplex { base, level, layouts, d: Vec::new() };
        complex.d = (0..=max_degree).map(|deg| complex.assemble(deg)).collect();
        for deg in 1..complex.d.len() {
            if !complex.d[deg].mul(&complex.d[deg - 1]).is_zero() {
                return Err(Error::InvalidComplex(format!("D∘D is nonzero at total degree {deg}")));
            }
        }
        Ok(complex)
    }

    fn assemble(&self, deg: usize) -> IntMatrix {
        let (src, dst) = (&self.layouts[deg], &self.layouts[deg + 1]);
        let cover = &self.base.cover;
        let mut triplets: Vec<(usize, usize, Int)> = Vec::new();
        for b in &src.blocks {
            let (p, q) = (b.p, b.q);
            // Form direction.
            if q < self.level {
                let target = dst.block(p, q + 1).expect("form target block");
                for (s, &(off, len)) in b.slots.iter().enumerate() {
                    let star = cover.star(p, s);
                    let toff = target.slots[s].0;
                    if q == 0 {
                        for v in 0..star.count(0) {
                            triplets.push((toff + v, off, Int::one()));
                        }
                    } else {
                        for (i, j, x) in star.coboundary_matrix(q - 1).entries() {
                            debug_assert!(j < len);
                            triplets.push((toff + i, off + j, x));
                        }
                    }
                }
            }
            // Čech direction with sign (-1)^q.
            if let Some(target) = dst.block(p + 1, q) {
                let q_sign = if q % 2 == 0 { 1 } else { -1 };
                for (s, &(off, len)) in b.slots.iter().enumerate() {
                    for &(t, i) in &self.base.cofaces[p][s] {
                        let sign = Int::from(if i % 2 == 0 { q_sign } else { -q_sign });
                        let toff = target.slots[t].0;
                        if q == 0 {
                            triplets.push((toff, off, sign.clone()));
                            continue;
                        }
                        let (from, to) = (cover.star(p, s), cover.star(p + 1, t));
                        for (j, simplex) in from.simplices(q - 1).iter().enumerate().take(len) {
                            if let Some(r) = to.index_of(simplex) {
                                triplets.push((toff + r, off + j, sign.clone()));
                            }
                        }
                    }
                }
            }
        }
        Matrix::from_triplets(dst.dim, src.dim, triplets)
    }

    pub fn base(&self) -> &Arc<DeligneBase> {
        &self.base
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        self.base.complex()
    }

    pub fn layout(&self, deg: usize) -> &Layout {
        static EMPTY: Layout = Layout { blocks: Vec::new(), dim: 0, integral: Vec::new() };
        self.layouts.get(deg).unwrap_or(&EMPTY)
    }

    pub fn dim(&self, deg: usize) -> usize {
        self.layout(deg).dim
    }

    /// Matrix of `D` from total degree `deg` to `deg + 1`.
    pub fn differential(&self, deg: usize) -> IntMatrix {
        self.d
            .get(deg)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim(deg + 1), self.dim(deg)))
    }

    /// Matrix of `D` into total degree `deg` (zero for `deg = 0`).
    pub fn differential_into(&self, deg: usize) -> IntMatrix {
        if deg == 0 {
            Matrix::zeros(self.dim(0), 0)
        } else {
            self.differential(deg - 1)
        }
    }
}

/// A cochain of the total Deligne complex, stored as coordinates in the
/// layout of its total degree.
#[derive(Clone)]
pub struct DeligneCochain {
    complex: Arc<DeligneComplex>,
    degree: usize,
    coords: Vec<Rat>,
}

fn same_base(a: &DeligneComplex, b: &DeligneComplex) -> bool {
    Arc::ptr_eq(&a.base, &b.base)
}

impl DeligneCochain {
    pub fn zero(complex: &Arc<DeligneComplex>, degree: usize) -> Self {
        DeligneCochain { complex: complex.clone(), degree, coords: vec![Rat::zero(); complex.dim(degree)] }
    }

    pub fn from_vector(complex: &Arc<DeligneComplex>, degree: usize, coords: Vec<Rat>) -> Result<Self> {
        let layout = complex.layout(degree);
        if coords.len() != layout.dim {
            return Err(Error::DimensionMismatch(format!("{} coordinates for dimension {}", coords.len(), layout.dim)));
        }
        if let Some(i) = (0..coords.len()).find(|&i| layout.integral[i] && !coords[i].is_integer()) {
            return Err(Error::GradingMismatch(format!("integer slot {i} holds {}", coords[i])));
        }
        Ok(DeligneCochain { complex: complex.clone(), degree, coords })
    }

    pub fn complex(&self) -> &Arc<DeligneComplex> {
        &self.complex
    }

    pub fn level(&self) -> usize {
        self.complex.level
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if !same_base(&self.complex, &other.complex) || self.level() != other.level() {
            return Err(Error::BaseMismatch);
        }
        if self.degree != other.degree {
            return Err(Error::GradingMismatch(format!("degrees {} and {}", self.degree, other.degree)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(DeligneCochain { coords, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        DeligneCochain { coords: self.coords.iter().map(|x| -x.clone()).collect(), ..self.clone() }
    }

    /// Integer multiple.
    pub fn scale(&self, k: &Int) -> Self {
        let k = Rat::from_integer(k.clone());
        DeligneCochain { coords: self.coords.iter().map(|x| x * &k).collect(), ..self.clone() }
    }

    /// `D` applied to `self`.
    pub fn differential(&self) -> Self {
        let d = self.complex.differential(self.degree);
        DeligneCochain { complex: self.complex.clone(), degree: self.degree + 1, coords: mul_int_rat(&d, &self.coords) }
    }

    pub fn is_closed(&self) -> bool {
        self.differential().is_zero()
    }

    /// Integer in the `(p, 0)` slot over Čech simplex `s`.
    pub fn integer(&self, p: usize, s: usize) -> Int {
        match self.complex.layout(self.degree).block(p, 0) {
            Some(b) => self.coords[b.slots[s].0].to_integer(),
            None => Int::zero(),
        }
    }

    /// The `(p, q)` component over Čech simplex `s`, as a cochain on the star
    /// of `s` (`q >= 1`).
    pub fn form(&self, p: usize, q: usize, s: usize) -> GradedCochain {
        assert!(q >= 1, "slot 0 holds integers");
        let star = self.complex.base.cover.star(p, s);
        match self.complex.layout(self.degree).block(p, q) {
            Some(b) => {
                let (off, len) = b.slots[s];
                GradedCochain::from_vector(star, q - 1, Coefficients::Rat, &self.coords[off..off + len])
            }
            None => GradedCochain::zero(star, q - 1, Coefficients::Rat),
        }
    }

    /// Adds `x` into the `(p, q)` component over Čech simplex `s`.
    pub fn add_form(&mut self, p: usize, q: usize, s: usize, x: &GradedCochain) -> Result<()> {
        let block = self
            .complex
            .layout(self.degree)
            .block(p, q)
            .ok_or_else(|| Error::GradingMismatch(format!("no block ({p}, {q}) in degree {}", self.degree)))?;
        let (off, _) = block.slots[s];
        if q == 0 {
            if x.degree() != 0 {
                return Err(Error::GradingMismatch("integer slot takes a constant".into()));
            }
            let v = x.to_vector().into_iter().next().unwrap_or_else(Rat::zero);
            if !v.is_integer() {
                return Err(Error::GradingMismatch("integer slot takes an integer".into()));
            }
            self.coords[off] += v;
            return Ok(());
        }
        let star = self.complex.base.cover.star(p, s);
        if x.degree() != q - 1 {
            return Err(Error::GradingMismatch(format!("slot {q} holds degree {} cochains", q - 1)));
        }
        for (simplex, v) in x.values() {
            let i = star.index_of(simplex).ok_or(Error::ComplexMismatch)?;
            self.coords[off + i] += v;
        }
        Ok(())
    }

    pub fn add_integer(&mut self, p: usize, s: usize, v: &Int) -> Result<()> {
        let block = self
            .complex
            .layout(self.degree)
            .block(p, 0)
            .ok_or_else(|| Error::GradingMismatch(format!("no integer block at Čech degree {p}")))?;
        let off = block.slots[s].0;
        self.coords[off] += Rat::from_integer(v.clone());
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let k = self.complex.complex();
        let mut components = Vec::new();
        for b in &self.complex.layout(self.degree).blocks {
            let mut values = Vec::new();
            for (s, &(off, len)) in b.slots.iter().enumerate() {
                if self.coords[off..off + len].iter().all(Zero::is_zero) {
                    continue;
                }
                let simplex = &k.simplices(b.p)[s];
                if b.q == 0 {
                    values.push(json!([simplex, self.coords[off].to_string()]));
                } else {
                    values.push(json!([simplex, self.form(b.p, b.q, s).to_json()]));
                }
            }
            if !values.is_empty() {
                components.push(json!({ "cech": b.p, "form": b.q, "cochain": { "values": values } }));
            }
        }
        json!({ "level": self.level(), "total_degree": self.degree, "components": components })
    }

    pub fn from_json(base: &Arc<DeligneBase>, v: &Value) -> Result<Self> {
        let get = |key: &str| {
            v.get(key)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| Error::Parse(format!("Deligne cochain needs '{key}'")))
        };
        let complex = base.level(get("level")?)?;
        let mut out = Self::zero(&complex, get("total_degree")?);
        let k = base.complex();
        for c in v.get("components").and_then(Value::as_array).into_iter().flatten() {
            let p = c.get("cech").and_then(Value::as_u64).ok_or_else(|| Error::Parse("component needs 'cech'".into()))? as usize;
            let q = c.get("form").and_then(Value::as_u64).ok_or_else(|| Error::Parse("component needs 'form'".into()))? as usize;
            let values = c.pointer("/cochain/values").and_then(Value::as_array).cloned().unwrap_or_default();
            for e in values {
                let pair = e.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::Parse("value must be [simplex, data]".into()))?;
                let simplex: Vec<usize> = serde_json::from_value(pair[0].clone()).map_err(|e| Error::Parse(e.to_string()))?;
                let s = k.index_of(&simplex).ok_or_else(|| Error::Parse(format!("{simplex:?} is not a Čech simplex")))?;
                if q == 0 {
                    let x: Int = crate::abelian::matrix::parse_scalar(&pair[1])?;
                    out.add_integer(p, s, &x)?;
                } else {
                    let star = base.cover().star(p, s);
                    let x = GradedCochain::from_json(star, &pair[1])?;
                    out.add_form(p, q, s, &x)?;
                }
            }
        }
        Ok(out)
    }
}

impl PartialEq for DeligneCochain {
    fn eq(&self, other: &Self) -> bool {
        same_base(&self.complex, &other.complex)
            && self.level() == other.level()
            && self.degree == other.degree
            && self.coords == other.coords
    }
}

impl Eq for DeligneCochain {}

impl fmt::Debug for DeligneCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DeligneCochain(level {}, degree {}, {})", self.level(), self.degree, self.to_json()["components"])
    }
}
