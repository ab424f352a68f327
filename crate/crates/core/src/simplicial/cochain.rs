use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::complex::{faces, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::{Int, Rat};

/// Coefficient kind of a cochain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coefficients {
    Int,
    Rat,
    /// Rationals modulo the integers, stored in `[0, 1)`.
    RatModInt,
}

impl Coefficients {
    pub fn name(self) -> &'static str {
        match self {
            Coefficients::Int => "Int",
            Coefficients::Rat => "Rat",
            Coefficients::RatModInt => "RatModInt",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "Int" => Ok(Coefficients::Int),
            "Rat" => Ok(Coefficients::Rat),
            "RatModInt" => Ok(Coefficients::RatModInt),
            _ => Err(Error::Parse(format!("unknown coefficient kind '{s}'"))),
        }
    }

    /// Coefficients of a cup product, if the pairing makes sense.
    pub fn product(self, other: Self) -> Option<Self> {
        use Coefficients::*;
        match (self, other) {
            (Int, x) | (x, Int) => Some(x),
            (Rat, Rat) => Some(Rat),
            _ => None,
        }
    }

    fn normalize(self, x: Rat) -> Rat {
        match self {
            Coefficients::RatModInt => {
                let f = x.floor();
                x - f
            }
            _ => x,
        }
    }

    fn admits(self, x: &Rat) -> bool {
        self != Coefficients::Int || x.is_integer()
    }
}

/// A cochain of fixed degree on a simplicial complex, stored sparsely by
/// simplex index.
#[derive(Clone)]
pub struct GradedCochain {
    complex: Arc<SimplicialComplex>,
    degree: usize,
    coefficients: Coefficients,
    values: BTreeMap<usize, Rat>,
}

fn same_complex(a: &Arc<SimplicialComplex>, b: &Arc<SimplicialComplex>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl GradedCochain {
    pub fn zero(complex: &Arc<SimplicialComplex>, degree: usize, coefficients: Coefficients) -> Self {
        GradedCochain { complex: complex.clone(), degree, coefficients, values: BTreeMap::new() }
    }

    /// Cochain with the given values; fails on simplices of the wrong degree
    /// or values outside the coefficient kind.
    pub fn from_values<I>(complex: &Arc<SimplicialComplex>, degree: usize, coefficients: Coefficients, values: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Simplex, Rat)>,
    {
        let mut c = Self::zero(complex, degree, coefficients);
        for (s, x) in values {
            if s.len() != degree + 1 {
                return Err(Error::DimensionMismatch(format!("{s:?} is not a {degree}-simplex")));
            }
            let i = complex
                .index_of(&s)
                .ok_or_else(|| Error::InvalidComplex(format!("{s:?} is not a simplex of the complex")))?;
            if !coefficients.admits(&x) {
                return Err(Error::Parse(format!("value {x} is not an integer")));
            }
            let cur = c.values.remove(&i).unwrap_or_else(Rat::zero);
            c.insert(i, cur + x);
        }
        Ok(c)
    }

    /// Cochain from a dense vector in the canonical simplex order.
    pub fn from_vector(complex: &Arc<SimplicialComplex>, degree: usize, coefficients: Coefficients, v: &[Rat]) -> Self {
        assert_eq!(v.len(), complex.count(degree), "vector has the wrong length");
        let mut c = Self::zero(complex, degree, coefficients);
        for (i, x) in v.iter().enumerate() {
            assert!(coefficients.admits(x), "value {x} is not an integer");
            c.insert(i, x.clone());
        }
        c
    }

    pub fn from_int_vector(complex: &Arc<SimplicialComplex>, degree: usize, v: &[Int]) -> Self {
        let v: Vec<Rat> = v.iter().cloned().map(Rat::from_integer).collect();
        Self::from_vector(complex, degree, Coefficients::Int, &v)
    }

    /// The constant 0-cochain.
    pub fn constant(complex: &Arc<SimplicialComplex>, coefficients: Coefficients, x: Rat) -> Self {
        let v = vec![x; complex.count(0)];
        Self::from_vector(complex, 0, coefficients, &v)
    }

    fn insert(&mut self, i: usize, x: Rat) {
        let x = self.coefficients.normalize(x);
        if x.is_zero() {
            self.values.remove(&i);
        } else {
            self.values.insert(i, x);
        }
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> Coefficients {
        self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, s: &[usize]) -> Rat {
        self.complex
            .index_of(s)
            .and_then(|i| self.values.get(&i).cloned())
            .unwrap_or_else(Rat::zero)
    }

    pub fn get_index(&self, i: usize) -> Rat {
        self.values.get(&i).cloned().unwrap_or_else(Rat::zero)
    }

    /// Nonzero values by simplex.
    pub fn values(&self) -> impl Iterator<Item = (&Simplex, &Rat)> {
        let simplices = self.complex.simplices(self.degree);
        self.values.iter().map(move |(&i, x)| (&simplices[i], x))
    }

    pub fn to_vector(&self) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.complex.count(self.degree)];
        for (&i, x) in &self.values {
            v[i] = x.clone();
        }
        v
    }

    /// Integer values, if every value is integral.
    pub fn to_int_vector(&self) -> Option<Vec<Int>> {
        self.to_vector().into_iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
    }

    /// Same values read with other coefficients (reducing mod 1 if needed).
    pub fn with_coefficients(&self, coefficients: Coefficients) -> Result<Self> {
        let mut c = Self::zero(&self.complex, self.degree, coefficients);
        for (&i, x) in &self.values {
            if !coefficients.admits(x) {
                return Err(Error::Parse(format!("value {x} is not an integer")));
            }
            c.insert(i, x.clone());
        }
        Ok(c)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if !same_complex(&self.complex, &other.complex) {
            return Err(Error::ComplexMismatch);
        }
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch(format!("degrees {} and {}", self.degree, other.degree)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coefficients = self.coefficients.max(other.coefficients);
        let mut c = self.with_coefficients(coefficients)?;
        for (&i, x) in &other.values {
            let cur = c.values.remove(&i).unwrap_or_else(Rat::zero);
            c.insert(i, cur + x);
        }
        Ok(c)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&Rat::from_integer(-Int::one()))
    }

    /// Multiplies every value by `k`; `k` must be an integer on Int cochains.
    pub fn scale(&self, k: &Rat) -> Self {
        let mut c = Self::zero(&self.complex, self.degree, self.coefficients);
        for (&i, x) in &self.values {
            c.insert(i, x * k);
        }
        c
    }

    /// `(δc)(σ) = Σ (-1)^i c(σ without vertex i)`.
    pub fn coboundary(&self) -> Self {
        let k = &self.complex;
        let mut c = Self::zero(k, self.degree + 1, self.coefficients);
        if self.values.is_empty() {
            return c;
        }
        for (row, s) in k.simplices(self.degree + 1).iter().enumerate() {
            let mut acc = Rat::zero();
            for (i, f) in faces(s).iter().enumerate() {
                if let Some(x) = k.index_of(f).and_then(|j| self.values.get(&j)) {
                    if i % 2 == 0 {
                        acc += x;
                    } else {
                        acc -= x;
                    }
                }
            }
            c.insert(row, acc);
        }
        c
    }

    /// Alexander–Whitney cup product: front face of `self`, back face of `other`.
    pub fn cup(&self, other: &Self) -> Result<Self> {
        if !same_complex(&self.complex, &other.complex) {
            return Err(Error::ComplexMismatch);
        }
        let coefficients = self
            .coefficients
            .product(other.coefficients)
            .ok_or_else(|| Error::GradingMismatch(format!("cannot cup {} with {}", self.coefficients.name(), other.coefficients.name())))?;
        let (p, q) = (self.degree, other.degree);
        let k = &self.complex;
        let mut c = Self::zero(k, p + q, coefficients);
        if self.is_zero() || other.is_zero() {
            return Ok(c);
        }
        for (row, s) in k.simplices(p + q).iter().enumerate() {
            let a = self.get(&s[..=p]);
            if a.is_zero() {
                continue;
            }
            let b = other.get(&s[p..]);
            c.insert(row, a * b);
        }
        Ok(c)
    }

    /// Restriction to a subcomplex (values on simplices it contains).
    pub fn restrict(&self, sub: &Arc<SimplicialComplex>) -> Self {
        let mut c = Self::zero(sub, self.degree, self.coefficients);
        for (s, x) in self.values() {
            if let Some(i) = sub.index_of(s) {
                c.insert(i, x.clone());
            }
        }
        c
    }

    /// Extension by zero from a subcomplex to `ambient`.
    pub fn extend(&self, ambient: &Arc<SimplicialComplex>) -> Result<Self> {
        let mut c = Self::zero(ambient, self.degree, self.coefficients);
        for (s, x) in self.values() {
            let i = ambient.index_of(s).ok_or_else(|| Error::InvalidComplex(format!("{s:?} is not in the ambient complex")))?;
            c.insert(i, x.clone());
        }
        Ok(c)
    }

    pub fn to_json(&self) -> Value {
        let values: Vec<Value> = self.values().map(|(s, x)| json!([s, x.to_string()])).collect();
        json!({ "degree": self.degree, "coefficients": self.coefficients.name(), "values": values })
    }

    pub fn from_json(complex: &Arc<SimplicialComplex>, v: &Value) -> Result<Self> {
        let degree = v
            .get("degree")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("cochain needs an integer 'degree'".into()))? as usize;
        let coefficients = Coefficients::parse(v.get("coefficients").and_then(Value::as_str).unwrap_or("Int"))?;
        let mut values = Vec::new();
        for e in v.get("values").and_then(Value::as_array).into_iter().flatten() {
            let pair = e.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::Parse("value must be [simplex, number]".into()))?;
            let mut s: Simplex = pair[0]
                .as_array()
                .ok_or_else(|| Error::Parse("simplex must be an array".into()))?
                .iter()
                .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| Error::Parse("vertex must be an integer".into())))
                .collect::<Result<_>>()?;
            let x: Rat = crate::abelian::matrix::parse_scalar(&pair[1])?;
            // Unsorted input carries the sign of the sorting permutation.
            let sign = sort_with_sign(&mut s);
            values.push((s, if sign { x } else { -x }));
        }
        Self::from_values(complex, degree, coefficients, values)
    }
}

/// Sorts `s` in place; returns `true` when the permutation is even.
pub fn sort_with_sign(s: &mut [usize]) -> bool {
    let mut even = true;
    for i in 1..s.len() {
        let mut j = i;
        while j > 0 && s[j - 1] > s[j] {
            s.swap(j - 1, j);
            even = !even;
            j -= 1;
        }
    }
    even
}

impl PartialEq for GradedCochain {
    fn eq(&self, other: &Self) -> bool {
        same_complex(&self.complex, &other.complex)
            && self.degree == other.degree
            && self.coefficients == other.coefficients
            && self.values == other.values
    }
}

impl Eq for GradedCochain {}

impl fmt::Debug for GradedCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C^{}<{}>{{", self.degree, self.coefficients.name())?;
        for (n, (s, x)) in self.values().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s:?}: {x}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::super::complex::standard;
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    #[test]
    fn indicator_coboundary_sign() {
        let k = SimplicialComplex::simplex(1).into_arc();
        let c = GradedCochain::from_values(&k, 0, Coefficients::Int, [(vec![0], r(1))]).unwrap();
        assert_eq!(c.coboundary().get(&[0, 1]), r(-1));
        let one = GradedCochain::constant(&k, Coefficients::Int, r(1));
        assert!(one.coboundary().is_zero());
    }

    #[test]
    fn unit_and_zero_for_cup() {
        let k = standard::torus().into_arc();
        let one = GradedCochain::constant(&k, Coefficients::Int, r(1));
        assert_eq!(one.cup(&one).unwrap(), one);
        let z = GradedCochain::zero(&k, 1, Coefficients::Int);
        let e = GradedCochain::from_values(&k, 1, Coefficients::Int, [(vec![0, 1], r(3))]).unwrap();
        assert!(e.cup(&z).unwrap().is_zero());
        assert_eq!(one.cup(&e).unwrap(), e);
    }

    #[test]
    fn mod_one_normalization() {
        let k = standard::circle().into_arc();
        let c = GradedCochain::from_values(&k, 1, Coefficients::RatModInt, [(vec![0, 1], Rat::new(7.into(), 3.into()))]).unwrap();
        assert_eq!(c.get(&[0, 1]), Rat::new(1.into(), 3.into()));
        assert!(c.scale(&r(3)).is_zero());
    }

    #[test]
    fn json_round_trip_and_orientation() {
        let k = standard::circle().into_arc();
        let v = json!({"degree": 1, "coefficients": "Rat", "values": [[[1, 0], "1/2"]]});
        let c = GradedCochain::from_json(&k, &v).unwrap();
        assert_eq!(c.get(&[0, 1]), Rat::new((-1).into(), 2.into()));
        assert_eq!(GradedCochain::from_json(&k, &c.to_json()).unwrap(), c);
    }

    #[test]
    fn mismatched_complexes_are_rejected() {
        let a = GradedCochain::zero(&standard::circle().into_arc(), 0, Coefficients::Int);
        let b = GradedCochain::zero(&standard::sphere().into_arc(), 0, Coefficients::Int);
        assert_eq!(a.cup(&b).unwrap_err(), Error::ComplexMismatch);
    }
}
