use std::sync::Arc;

use num_traits::Zero;
use serde_json::Value;

use super::cochain::{sort_with_sign, GradedCochain};
use super::complex::SimplicialComplex;
use crate::error::{Error, Result};

/// A vertex map sending simplices to simplices.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    source: Arc<SimplicialComplex>,
    target: Arc<SimplicialComplex>,
    vertex_map: Vec<usize>,
}

impl SimplicialMap {
    pub fn new(source: &Arc<SimplicialComplex>, target: &Arc<SimplicialComplex>, vertex_map: Vec<usize>) -> Result<Self> {
        if vertex_map.len() != source.vertex_count() {
            return Err(Error::MapInvalid(format!(
                "{} images for {} vertices",
                vertex_map.len(),
                source.vertex_count()
            )));
        }
        for s in source.all_simplices() {
            let mut image: Vec<usize> = s.iter().map(|&v| vertex_map[v]).collect();
            image.sort_unstable();
            image.dedup();
            if !target.contains(&image) {
                return Err(Error::MapInvalid(format!("{s:?} maps to {image:?}, which is not a simplex")));
            }
        }
        Ok(SimplicialMap { source: source.clone(), target: target.clone(), vertex_map })
    }

    pub fn identity(k: &Arc<SimplicialComplex>) -> Self {
        Self::new(k, k, (0..k.vertex_count()).collect()).expect("identity is simplicial")
    }

    pub fn constant(source: &Arc<SimplicialComplex>, target: &Arc<SimplicialComplex>, v: usize) -> Result<Self> {
        Self::new(source, target, vec![v; source.vertex_count()])
    }

    pub fn source(&self) -> &Arc<SimplicialComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SimplicialComplex> {
        &self.target
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    /// Whether vertex order is weakly preserved on every simplex; cup
    /// products commute with pullback on the nose exactly for such maps.
    pub fn is_order_preserving(&self) -> bool {
        self.source.simplices(1).iter().all(|e| self.vertex_map[e[0]] <= self.vertex_map[e[1]])
    }

    pub fn compose(&self, after: &SimplicialMap) -> Result<SimplicialMap> {
        if *self.target != *after.source {
            return Err(Error::MapInvalid("maps are not composable".into()));
        }
        let vm = self.vertex_map.iter().map(|&v| after.vertex_map[v]).collect();
        SimplicialMap::new(&self.source, &after.target, vm)
    }

    /// `(f*c)(σ) = ± c(f(σ))`, zero when `f` is not injective on `σ`; the
    /// sign is that of sorting the image vertices.
    pub fn pullback(&self, c: &GradedCochain) -> Result<GradedCochain> {
        if **c.complex() != *self.target {
            return Err(Error::ComplexMismatch);
        }
        let mut values = Vec::new();
        for s in self.source.simplices(c.degree()) {
            let mut image: Vec<usize> = s.iter().map(|&v| self.vertex_map[v]).collect();
            let even = sort_with_sign(&mut image);
            if image.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            let x = c.get(&image);
            if !x.is_zero() {
                values.push((s.clone(), if even { x } else { -x }));
            }
        }
        GradedCochain::from_values(&self.source, c.degree(), c.coefficients(), values)
    }

    pub fn from_json(source: &Arc<SimplicialComplex>, target: &Arc<SimplicialComplex>, v: &Value) -> Result<Self> {
        let vm = v
            .as_array()
            .ok_or_else(|| Error::Parse("vertex map must be an array".into()))?
            .iter()
            .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| Error::Parse("vertex image must be an integer".into())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, vm)
    }
}

/// Pullback of `c` along `f`.
pub fn pullback(f: &SimplicialMap, c: &GradedCochain) -> Result<GradedCochain> {
    f.pullback(c)
}
