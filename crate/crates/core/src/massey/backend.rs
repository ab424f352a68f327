use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::abelian::group::mul_int_rat;
use crate::abelian::{Matrix, MixedSolver, MixedSubgroup};
use crate::deligne::{DeligneBase, DeligneCochain, DeligneComplex};
use crate::error::{Error, Result};
use crate::simplicial::{Coefficients, GradedCochain, SimplicialComplex};
use crate::{Int, IntMatrix, Rat};

/// Which family of cochain complexes a backend models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    /// Integer simplicial cochains.
    Singular,
    /// Rational simplicial cochains.
    DeRham,
    /// Deligne cochains over the star cover.
    Differential,
    /// A finite exterior DGA given by generators and differentials.
    Dga,
}

impl BackendKind {
    pub fn name(self) -> &'static str {
        match self {
            BackendKind::Singular => "singular",
            BackendKind::DeRham => "derham",
            BackendKind::Differential => "differential",
            BackendKind::Dga => "dga",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "singular" => Ok(BackendKind::Singular),
            "derham" | "de-rham" | "de_rham" => Ok(BackendKind::DeRham),
            "differential" => Ok(BackendKind::Differential),
            "dga" => Ok(BackendKind::Dga),
            other => Err(Error::UnknownName(format!("backend {other}"))),
        }
    }
}

/// A homogeneous cochain of a backend: coordinates in the basis of
/// `C^degree(weight)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub weight: usize,
    pub degree: usize,
    pub coords: Vec<Rat>,
}

impl Element {
    pub fn new(weight: usize, degree: usize, coords: Vec<Rat>) -> Self {
        Element { weight, degree, coords }
    }

    pub fn zero(backend: &dyn GradedBackend, weight: usize, degree: usize) -> Result<Self> {
        Ok(Element { weight, degree, coords: vec![Rat::zero(); backend.dim(weight, degree)?] })
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if (self.weight, self.degree) != (other.weight, other.degree) || self.coords.len() != other.coords.len() {
            return Err(Error::GradingMismatch(format!(
                "cannot add weight {} degree {} to weight {} degree {}",
                self.weight, self.degree, other.weight, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(Element { coords, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Element { coords: self.coords.iter().map(|a| -a).collect(), ..self.clone() }
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Element { coords: self.coords.iter().map(|a| a * k).collect(), ..self.clone() }
    }

    /// `ā = (-1)^(q+1) a` in degree `q`.
    pub fn twist(&self) -> Self {
        if self.degree % 2 == 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "weight": self.weight,
            "degree": self.degree,
            "coords": self.coords.iter().map(Rat::to_string).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| v.get(k).and_then(Value::as_u64).map(|x| x as usize).ok_or_else(|| Error::Parse(format!("element needs integer field {k}")));
        let coords = v
            .get("coords")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("element needs coords".into()))?
            .iter()
            .map(crate::abelian::matrix::parse_scalar::<Rat>)
            .collect::<Result<Vec<_>>>()?;
        Ok(Element { weight: field("weight")?, degree: field("degree")?, coords })
    }
}

/// Memoised linear algebra per `(weight, degree)`.
#[derive(Default)]
pub struct Caches {
    solvers: Mutex<HashMap<(usize, usize), Arc<MixedSolver>>>,
    cocycles: Mutex<HashMap<(usize, usize), Arc<MixedSubgroup>>>,
    boundaries: Mutex<HashMap<(usize, usize), Arc<MixedSubgroup>>>,
}

/// A family of cochain complexes `C(w)` indexed by weight, with products
/// `C(w) ⊗ C(w') -> C(w + w' + ε)`.
pub trait GradedBackend: Send + Sync {
    fn kind(&self) -> BackendKind;

    /// Weight shift of the product: 1 for Deligne cochains, else 0.
    fn epsilon(&self) -> usize {
        0
    }

    fn dim(&self, weight: usize, degree: usize) -> Result<usize>;

    /// Which coordinates are constrained to integers.
    fn integral(&self, weight: usize, degree: usize) -> Result<Vec<bool>>;

    /// Matrix of the differential from `degree` to `degree + 1`.
    fn differential(&self, weight: usize, degree: usize) -> Result<IntMatrix>;

    fn cup(&self, x: &Element, y: &Element) -> Result<Element>;

    /// The underlying simplicial complex, for simplicial backends.
    fn complex(&self) -> Option<&Arc<SimplicialComplex>> {
        None
    }

    fn caches(&self) -> &Caches;

    fn describe(&self) -> Value;

    fn as_differential(&self) -> Option<&DifferentialBackend> {
        None
    }

    /// Whether `x` has integers in its integral coordinates.
    fn check_element(&self, x: &Element) -> Result<()> {
        let integral = self.integral(x.weight, x.degree)?;
        if integral.len() != x.coords.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates in weight {} degree {} of dimension {}",
                x.coords.len(),
                x.weight,
                x.degree,
                integral.len()
            )));
        }
        if let Some(i) = (0..integral.len()).find(|&i| integral[i] && !x.coords[i].is_integer()) {
            return Err(Error::GradingMismatch(format!("coordinate {i} must be an integer, got {}", x.coords[i])));
        }
        Ok(())
    }

    fn d(&self, x: &Element) -> Result<Element> {
        let m = self.differential(x.weight, x.degree)?;
        if m.cols() != x.coords.len() {
            return Err(Error::DimensionMismatch(format!("{} coordinates for a differential on dimension {}", x.coords.len(), m.cols())));
        }
        Ok(Element { weight: x.weight, degree: x.degree + 1, coords: mul_int_rat(&m, &x.coords) })
    }

    fn is_closed(&self, x: &Element) -> Result<bool> {
        Ok(self.d(x)?.is_zero())
    }

    /// Canonical `y` with `dy = rhs` and integers in integral slots.
    fn solve(&self, rhs: &Element) -> Result<Option<Element>> {
        if rhs.degree == 0 {
            return Err(Error::GradingMismatch("nothing maps into degree 0".into()));
        }
        let (w, deg) = (rhs.weight, rhs.degree - 1);
        let solver = {
            let cached = self.caches().solvers.lock().expect("cache lock").get(&(w, deg)).cloned();
            match cached {
                Some(s) => s,
                None => {
                    let s = Arc::new(MixedSolver::new(&self.differential(w, deg)?, &self.integral(w, deg)?));
                    self.caches().solvers.lock().expect("cache lock").insert((w, deg), s.clone());
                    s
                }
            }
        };
        Ok(solver.solve(&rhs.coords).map(|coords| Element::new(w, deg, coords)))
    }

    /// Cocycles of `C^degree(weight)` as a subgroup of the coordinate space.
    fn cocycles(&self, weight: usize, degree: usize) -> Result<Arc<MixedSubgroup>> {
        if let Some(z) = self.caches().cocycles.lock().expect("cache lock").get(&(weight, degree)) {
            return Ok(z.clone());
        }
        let d = self.differential(weight, degree)?.map(|x| Rat::from_integer(x.clone()));
        let z = MixedSubgroup::standard(&self.integral(weight, degree)?).preimage(&d, &MixedSubgroup::zero(d.rows()));
        let z = Arc::new(z);
        self.caches().cocycles.lock().expect("cache lock").insert((weight, degree), z.clone());
        Ok(z)
    }

    /// Coboundaries in `C^degree(weight)`.
    fn boundaries(&self, weight: usize, degree: usize) -> Result<Arc<MixedSubgroup>> {
        if let Some(b) = self.caches().boundaries.lock().expect("cache lock").get(&(weight, degree)) {
            return Ok(b.clone());
        }
        let b = if degree == 0 {
            MixedSubgroup::zero(self.dim(weight, 0)?)
        } else {
            let d = self.differential(weight, degree - 1)?.map(|x| Rat::from_integer(x.clone()));
            MixedSubgroup::standard(&self.integral(weight, degree - 1)?).image(&d)
        };
        let b = Arc::new(b);
        self.caches().boundaries.lock().expect("cache lock").insert((weight, degree), b.clone());
        Ok(b)
    }

    /// Whether `x` is a coboundary.
    fn is_exact(&self, x: &Element) -> Result<bool> {
        Ok(self.boundaries(x.weight, x.degree)?.contains(&x.coords))
    }
}

/// Simplicial cochains with Alexander–Whitney cup: integers (singular) or
/// rationals (de Rham model). Weights carry no data.
pub struct SimplicialBackend {
    complex: Arc<SimplicialComplex>,
    rational: bool,
    caches: Caches,
}

impl SimplicialBackend {
    pub fn singular(complex: &Arc<SimplicialComplex>) -> Self {
        SimplicialBackend { complex: complex.clone(), rational: false, caches: Caches::default() }
    }

    pub fn de_rham(complex: &Arc<SimplicialComplex>) -> Self {
        SimplicialBackend { complex: complex.clone(), rational: true, caches: Caches::default() }
    }

    fn coefficients(&self) -> Coefficients {
        if self.rational {
            Coefficients::Rat
        } else {
            Coefficients::Int
        }
    }

    pub fn cochain(&self, x: &Element) -> GradedCochain {
        GradedCochain::from_vector(&self.complex, x.degree, self.coefficients(), &x.coords)
    }

    pub fn element(&self, weight: usize, c: &GradedCochain) -> Element {
        Element::new(weight, c.degree(), c.to_vector())
    }
}

impl GradedBackend for SimplicialBackend {
    fn kind(&self) -> BackendKind {
        if self.rational {
            BackendKind::DeRham
        } else {
            BackendKind::Singular
        }
    }

    fn dim(&self, _weight: usize, degree: usize) -> Result<usize> {
        Ok(self.complex.count(degree))
    }

    fn integral(&self, weight: usize, degree: usize) -> Result<Vec<bool>> {
        Ok(vec![!self.rational; self.dim(weight, degree)?])
    }

    fn differential(&self, _weight: usize, degree: usize) -> Result<IntMatrix> {
        if degree as isize > self.complex.dimension() {
            return Ok(Matrix::zeros(0, self.complex.count(degree)));
        }
        Ok(self.complex.coboundary_matrix(degree))
    }

    fn cup(&self, x: &Element, y: &Element) -> Result<Element> {
        let product = self.cochain(x).cup(&self.cochain(y))?;
        Ok(Element::new(x.weight + y.weight, x.degree + y.degree, product.to_vector()))
    }

    fn complex(&self) -> Option<&Arc<SimplicialComplex>> {
        Some(&self.complex)
    }

    fn caches(&self) -> &Caches {
        &self.caches
    }

    fn describe(&self) -> Value {
        json!({ "kind": self.kind(), "complex": self.complex.to_json() })
    }
}

/// Deligne cochains; weight `w` is the level `w + 1` complex, so products
/// land in weight `w + w' + 1`.
pub struct DifferentialBackend {
    base: Arc<DeligneBase>,
    caches: Caches,
}

impl DifferentialBackend {
    pub fn new(complex: &Arc<SimplicialComplex>) -> Result<Self> {
        Ok(DifferentialBackend { base: DeligneBase::new(complex)?, caches: Caches::default() })
    }

    pub fn base(&self) -> &Arc<DeligneBase> {
        &self.base
    }

    pub fn level(&self, weight: usize) -> Result<Arc<DeligneComplex>> {
        self.base.level(weight + 1)
    }

    pub fn cochain(&self, x: &Element) -> Result<DeligneCochain> {
        DeligneCochain::from_vector(&self.level(x.weight)?, x.degree, x.coords.clone())
    }

    pub fn element(&self, x: &DeligneCochain) -> Element {
        Element::new(x.level() - 1, x.degree(), x.coords().to_vec())
    }
}

impl GradedBackend for DifferentialBackend {
    fn kind(&self) -> BackendKind {
        BackendKind::Differential
    }

    fn epsilon(&self) -> usize {
        1
    }

    fn dim(&self, weight: usize, degree: usize) -> Result<usize> {
        Ok(self.level(weight)?.dim(degree))
    }

    fn integral(&self, weight: usize, degree: usize) -> Result<Vec<bool>> {
        Ok(self.level(weight)?.layout(degree).integral.clone())
    }

    fn differential(&self, weight: usize, degree: usize) -> Result<IntMatrix> {
        Ok(self.level(weight)?.differential(degree))
    }

    fn cup(&self, x: &Element, y: &Element) -> Result<Element> {
        let product = crate::deligne::db_cup(&self.cochain(x)?, &self.cochain(y)?)?;
        Ok(self.element(&product))
    }

    fn complex(&self) -> Option<&Arc<SimplicialComplex>> {
        Some(self.base.complex())
    }

    fn caches(&self) -> &Caches {
        &self.caches
    }

    fn describe(&self) -> Value {
        json!({ "kind": self.kind(), "complex": self.base.complex().to_json() })
    }

    fn as_differential(&self) -> Option<&DifferentialBackend> {
        Some(self)
    }
}

/// Polynomial in the exterior algebra: monomial bitmask to coefficient.
type Polynomial = BTreeMap<u64, Int>;

/// Finite graded-commutative DGA: the exterior algebra on odd-degree
/// generators with a differential given on generators, over the integers.
#[derive(Clone, Debug)]
pub struct Dga {
    pub name: String,
    generators: Vec<(String, usize)>,
    d_generators: Vec<Polynomial>,
    /// Monomials (bitmasks) of each degree, in increasing order.
    basis: Vec<Vec<u64>>,
}

impl Dga {
    /// Builds the DGA and checks `d` raises degree by one and squares to zero.
    pub fn new(name: &str, generators: Vec<(String, usize)>, differentials: Vec<(String, Vec<(Int, Vec<String>)>)>) -> Result<Self> {
        if generators.len() > 20 {
            return Err(Error::InvalidComplex("at most 20 generators".into()));
        }
        if let Some((g, _)) = generators.iter().find(|(_, d)| d % 2 == 0) {
            return Err(Error::InvalidComplex(format!("generator {g} must have odd degree")));
        }
        let index = |n: &str| generators.iter().position(|(g, _)| g == n).ok_or_else(|| Error::UnknownName(format!("generator {n}")));
        let mut d_generators = vec![Polynomial::new(); generators.len()];
        for (g, terms) in differentials {
            let i = index(&g)?;
            for (c, factors) in terms {
                let mut mono: Polynomial = [(0u64, Int::one())].into_iter().collect();
                for f in factors {
                    let j = index(&f)?;
                    mono = multiply_poly(&generators, &mono, &[(1u64 << j, Int::one())].into_iter().collect());
                }
                for (m, x) in mono {
                    *d_generators[i].entry(m).or_insert_with(Int::zero) += &c * x;
                }
            }
            d_generators[i].retain(|_, x| !x.is_zero());
        }
        let top: usize = generators.iter().map(|(_, d)| d).sum();
        let mut basis = vec![Vec::new(); top + 1];
        for mask in 0..(1u64 << generators.len()) {
            basis[mask_degree(&generators, mask)].push(mask);
        }
        let dga = Dga { name: name.to_string(), generators, d_generators, basis };
        for (i, dg) in dga.d_generators.iter().enumerate() {
            if let Some(m) = dg.keys().find(|&&m| mask_degree(&dga.generators, m) != dga.generators[i].1 + 1) {
                return Err(Error::InvalidComplex(format!("d{} has a term {} of the wrong degree", dga.generators[i].0, dga.monomial_name(*m))));
            }
            if !dga.d_poly(dg).is_empty() {
                return Err(Error::NotAComplex(format!("d^2 {} is nonzero", dga.generators[i].0)));
            }
        }
        Ok(dga)
    }

    /// JSON: `{"name", "generators": [{"name", "degree"}], "differential":
    /// {"z": [{"coefficient": 1, "factors": ["x", "y"]}]}}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let name = v.get("name").and_then(Value::as_str).unwrap_or("dga");
        let generators = v
            .get("generators")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("dga needs generators".into()))?
            .iter()
            .map(|g| {
                let n = g.get("name").and_then(Value::as_str).ok_or_else(|| Error::Parse("generator needs a name".into()))?;
                let d = g.get("degree").and_then(Value::as_u64).ok_or_else(|| Error::Parse("generator needs a degree".into()))?;
                Ok((n.to_string(), d as usize))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut differentials = Vec::new();
        if let Some(map) = v.get("differential").and_then(Value::as_object) {
            for (g, terms) in map {
                let terms = terms
                    .as_array()
                    .ok_or_else(|| Error::Parse(format!("d{g} must be a list of terms")))?
                    .iter()
                    .map(|t| {
                        let c = t.get("coefficient").map(crate::abelian::matrix::parse_scalar::<Int>).transpose()?.unwrap_or_else(Int::one);
                        let factors = t
                            .get("factors")
                            .and_then(Value::as_array)
                            .ok_or_else(|| Error::Parse("term needs factors".into()))?
                            .iter()
                            .map(|f| f.as_str().map(str::to_string).ok_or_else(|| Error::Parse("factor must be a name".into())))
                            .collect::<Result<Vec<_>>>()?;
                        Ok((c, factors))
                    })
                    .collect::<Result<Vec<_>>>()?;
                differentials.push((g.clone(), terms));
            }
        }
        Dga::new(name, generators, differentials)
    }

    pub fn to_json(&self) -> Value {
        let gens: Vec<Value> = self.generators.iter().map(|(n, d)| json!({ "name": n, "degree": d })).collect();
        let mut diff = serde_json::Map::new();
        for (i, p) in self.d_generators.iter().enumerate() {
            if p.is_empty() {
                continue;
            }
            let terms: Vec<Value> = p
                .iter()
                .map(|(m, c)| json!({ "coefficient": c.to_string(), "factors": self.factors(*m) }))
                .collect();
            diff.insert(self.generators[i].0.clone(), Value::Array(terms));
        }
        json!({ "name": self.name, "generators": gens, "differential": diff })
    }

    /// `Λ(x, y, z)`, all of degree 1, with `dz = x y`.
    pub fn heisenberg() -> Self {
        let gens = ["x", "y", "z"].iter().map(|n| (n.to_string(), 1)).collect();
        Dga::new("heisenberg", gens, vec![("z".into(), vec![(Int::one(), vec!["x".into(), "y".into()])])]).expect("valid DGA")
    }

    /// `Λ(e1, …, en)` in degree 1 with `d e_k = e1 e_(k-1)` for `k >= 3`.
    pub fn filiform(n: usize) -> Result<Self> {
        let gens = (1..=n).map(|i| (format!("e{i}"), 1)).collect();
        let diffs = (3..=n).map(|k| (format!("e{k}"), vec![(Int::one(), vec!["e1".to_string(), format!("e{}", k - 1)])])).collect();
        Dga::new(&format!("filiform{n}"), gens, diffs)
    }

    fn factors(&self, mask: u64) -> Vec<String> {
        (0..self.generators.len()).filter(|i| mask >> i & 1 == 1).map(|i| self.generators[i].0.clone()).collect()
    }

    pub fn monomial_name(&self, mask: u64) -> String {
        if mask == 0 {
            "1".into()
        } else {
            self.factors(mask).join("")
        }
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn top_degree(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn basis(&self, degree: usize) -> &[u64] {
        self.basis.get(degree).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Element of the given degree from named monomials, e.g. `[(1, "xz")]`
    /// with generator names concatenated (single-letter names only) or a
    /// list of factors.
    pub fn generator_degree(&self, name: &str) -> Option<usize> {
        self.generators.iter().find(|(g, _)| g == name).map(|(_, d)| *d)
    }

    pub fn element(&self, degree: usize, terms: &[(i64, &[&str])]) -> Result<Element> {
        let mut coords = vec![Rat::zero(); self.basis(degree).len()];
        for (c, factors) in terms {
            let mut p: Polynomial = [(0u64, Int::from(*c))].into_iter().collect();
            for f in *factors {
                let j = self.generators.iter().position(|(g, _)| g == f).ok_or_else(|| Error::UnknownName(format!("generator {f}")))?;
                p = multiply_poly(&self.generators, &p, &[(1u64 << j, Int::one())].into_iter().collect());
            }
            for (m, x) in p {
                let i = self.position(degree, m).ok_or_else(|| Error::GradingMismatch(format!("monomial {} is not of degree {degree}", self.monomial_name(m))))?;
                coords[i] += Rat::from_integer(x);
            }
        }
        Ok(Element::new(0, degree, coords))
    }

    fn position(&self, degree: usize, mask: u64) -> Option<usize> {
        self.basis(degree).binary_search(&mask).ok()
    }

    fn d_poly(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::new();
        for (&m, c) in p {
            for (dm, x) in self.d_monomial(m) {
                *out.entry(dm).or_insert_with(Int::zero) += c * x;
            }
        }
        out.retain(|_, x| !x.is_zero());
        out
    }

    fn d_monomial(&self, mask: u64) -> Polynomial {
        let mut out = Polynomial::new();
        let mut prefix = 0u64;
        for i in 0..self.generators.len() {
            if mask >> i & 1 == 0 {
                continue;
            }
            let suffix = mask & !((1u64 << (i + 1)) - 1);
            let sign = if mask_degree(&self.generators, prefix) % 2 == 0 { Int::one() } else { -Int::one() };
            let left: Polynomial = [(prefix, sign)].into_iter().collect();
            let right: Polynomial = [(suffix, Int::one())].into_iter().collect();
            let term = multiply_poly(&self.generators, &multiply_poly(&self.generators, &left, &self.d_generators[i]), &right);
            for (m, x) in term {
                *out.entry(m).or_insert_with(Int::zero) += x;
            }
            prefix |= 1u64 << i;
        }
        out.retain(|_, x| !x.is_zero());
        out
    }

    fn poly_of(&self, x: &Element) -> Polynomial {
        self.basis(x.degree)
            .iter()
            .zip(&x.coords)
            .filter(|(_, c)| !c.is_zero())
            .map(|(&m, c)| (m, c.to_integer()))
            .collect()
    }
}

fn mask_degree(generators: &[(String, usize)], mask: u64) -> usize {
    (0..generators.len()).filter(|i| mask >> i & 1 == 1).map(|i| generators[i].1).sum()
}

/// Product of monomials in the exterior algebra on odd generators.
fn multiply_monomials(a: u64, b: u64) -> Option<(u64, bool)> {
    if a & b != 0 {
        return None;
    }
    // Each generator of `b` passes every larger generator of `a`.
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let i = rest.trailing_zeros();
        swaps += (a >> (i + 1)).count_ones();
        rest &= rest - 1;
    }
    Some((a | b, swaps % 2 == 1))
}

fn multiply_poly(_generators: &[(String, usize)], p: &Polynomial, q: &Polynomial) -> Polynomial {
    let mut out = Polynomial::new();
    for (&a, x) in p {
        for (&b, y) in q {
            if let Some((m, negative)) = multiply_monomials(a, b) {
                let v = x * y;
                let e = out.entry(m).or_insert_with(Int::zero);
                if negative {
                    *e -= v;
                } else {
                    *e += v;
                }
            }
        }
    }
    out.retain(|_, x| !x.is_zero());
    out
}

/// A [`Dga`] as a backend over the integers (single weight).
pub struct DgaBackend {
    dga: Dga,
    caches: Caches,
}

impl DgaBackend {
    pub fn new(dga: Dga) -> Self {
        DgaBackend { dga, caches: Caches::default() }
    }

    pub fn dga(&self) -> &Dga {
        &self.dga
    }
}

impl GradedBackend for DgaBackend {
    fn kind(&self) -> BackendKind {
        BackendKind::Dga
    }

    fn dim(&self, _weight: usize, degree: usize) -> Result<usize> {
        Ok(self.dga.basis(degree).len())
    }

    fn integral(&self, weight: usize, degree: usize) -> Result<Vec<bool>> {
        Ok(vec![true; self.dim(weight, degree)?])
    }

    fn differential(&self, _weight: usize, degree: usize) -> Result<IntMatrix> {
        let src = self.dga.basis(degree);
        let mut triplets = Vec::new();
        for (j, &m) in src.iter().enumerate() {
            for (dm, x) in self.dga.d_monomial(m) {
                let i = self.dga.position(degree + 1, dm).expect("d raises degree by one");
                triplets.push((i, j, x));
            }
        }
        Ok(Matrix::from_triplets(self.dga.basis(degree + 1).len(), src.len(), triplets))
    }

    fn cup(&self, x: &Element, y: &Element) -> Result<Element> {
        if x.coords.iter().chain(&y.coords).any(|c| !c.is_integer()) {
            return Err(Error::GradingMismatch("DGA elements have integer coordinates".into()));
        }
        let p = multiply_poly(&self.dga.generators, &self.dga.poly_of(x), &self.dga.poly_of(y));
        let degree = x.degree + y.degree;
        let mut coords = vec![Rat::zero(); self.dga.basis(degree).len()];
        for (m, c) in p {
            let i = self.dga.position(degree, m).expect("degree of a product");
            coords[i] = Rat::from_integer(c);
        }
        Ok(Element::new(x.weight + y.weight, degree, coords))
    }

    fn caches(&self) -> &Caches {
        &self.caches
    }

    fn describe(&self) -> Value {
        json!({ "kind": self.kind(), "dga": self.dga.to_json() })
    }
}
