//! Parametric estimator `ζ` and the weighted finite element estimator `η_FE`.
//!
//! `ζ_{i,I} = max_{z ∈ Θ} ‖Δ^{m(i)}(a ∇ Σ_{j ∈ J_{i,I}} Δ^{m(j)} S_I[U])(z)‖_{L²(D)}`
//! with the spatial norm replaced by the root mean square over `Π`.
//!
//! Evaluation: on the tensor points `p` of level `i`, the field is
//! `a(p, ·) Σ_y c_y(p) ∇U_y`, with `c(p)` the coefficients of the inner
//! surplus sum over collocation values. Splitting `Π` by subdomain label `ℓ`
//! (where `a(p, ·)` is a constant `a(p, ℓ)`), and writing `G_ℓ = Q_ℓ R_ℓ` for
//! the matrix of gradient samples of all collocation solutions on label `ℓ`,
//!
//! `‖field(z)‖² = Σ_ℓ ‖R_ℓ Σ_p w_p(z) a(p, ℓ) c(p)‖²`.
//!
//! One QR per label serves every margin index.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fem::DiffusionCoefficient;
use crate::mesh::{Point, PointLocator, Triangulation};
use crate::multiindex::{backward_neighbors, MultiIndex, MultiIndexSet};
use crate::sparse_grid::{keys_to_coords, surplus_weights, tensor_grid_keys, ParamSampleSet, SparseGrid};

/// Monte Carlo points in the open unit square.
#[derive(Clone, Debug)]
pub struct SpatialSampleSet {
    points: Vec<Point>,
    seed: u64,
}

impl SpatialSampleSet {
    pub fn uniform(count: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut coord = || loop {
            let v: f64 = rng.gen();
            if v > 0.0 {
                return v;
            }
        };
        let points = (0..count).map(|_| [coord(), coord()]).collect();
        Self { points, seed }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Subdomain label at every sample, read off a labelled mesh.
    pub fn labels(&self, mesh: &Triangulation) -> Result<Vec<u16>> {
        let locator = PointLocator::new(mesh);
        self.points
            .iter()
            .map(|&p| {
                locator
                    .locate(p)
                    .map(|t| mesh.labels()[t])
                    .ok_or(Error::PointOutsideDomain(p[0], p[1]))
            })
            .collect()
    }
}

/// `J_{i,I}`: backward neighbours of the margin index `i` inside `I`.
pub fn neighbors_j(i: &MultiIndex, set: &MultiIndexSet) -> Result<Vec<MultiIndex>> {
    backward_neighbors(i, set)
}

/// Pre-factored gradient data of the collocation solutions on `Π`.
pub struct ZetaContext<'a> {
    grid: &'a SparseGrid,
    coefficient: &'a DiffusionCoefficient,
    /// (label, R factor) for labels present in Π
    factors: Vec<(u16, DMatrix<f64>)>,
    n_samples: usize,
}

impl<'a> ZetaContext<'a> {
    /// `gradients[y][π]` is `∇U_y` at the `π`-th spatial sample, in collocation
    /// point order; `labels[π]` the subdomain label of that sample.
    pub fn new(
        grid: &'a SparseGrid,
        coefficient: &'a DiffusionCoefficient,
        labels: &[u16],
        gradients: &[Vec<[f64; 2]>],
    ) -> Result<Self> {
        if gradients.len() != grid.len() {
            return Err(Error::MissingValue(format!(
                "gradient samples for {} of {} collocation points",
                gradients.len(),
                grid.len()
            )));
        }
        if let Some(g) = gradients.iter().find(|g| g.len() != labels.len()) {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                found: g.len(),
            });
        }
        let mut present: Vec<u16> = labels.to_vec();
        present.sort_unstable();
        present.dedup();
        let h = grid.len();
        let factors = present
            .par_iter()
            .map(|&l| {
                let rows: Vec<usize> = (0..labels.len()).filter(|&k| labels[k] == l).collect();
                let m = DMatrix::from_fn(2 * rows.len(), h, |r, y| gradients[y][rows[r / 2]][r % 2]);
                (l, m.qr().r())
            })
            .collect();
        Ok(Self {
            grid,
            coefficient,
            factors,
            n_samples: labels.len(),
        })
    }

    pub fn grid(&self) -> &SparseGrid {
        self.grid
    }

    /// `max_{z ∈ Θ} ‖Δ^{m(i)}(a ∇ Σ_y c_y(·) U_y)(z)‖` for a caller-supplied
    /// coefficient map `c`, given in collocation point order.
    pub fn surplus_norm<C>(&self, i: &MultiIndex, theta: &ParamSampleSet, coefficients: C) -> Result<f64>
    where
        C: Fn(&[f64]) -> Result<Vec<f64>>,
    {
        if i.dim() != self.grid.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.grid.dim(),
                found: i.dim(),
            });
        }
        if self.n_samples == 0 {
            return Ok(0.0);
        }
        let tensor: Vec<Vec<f64>> = tensor_grid_keys(i).iter().map(|k| keys_to_coords(k)).collect();
        let cols: Vec<Vec<f64>> = tensor.iter().map(|p| coefficients(p)).collect::<Result<_>>()?;
        let h = self.grid.len();
        let support: Vec<usize> = (0..h).filter(|&y| cols.iter().any(|c| c[y] != 0.0)).collect();
        if support.is_empty() {
            return Ok(0.0);
        }
        let c = DMatrix::from_fn(support.len(), tensor.len(), |r, p| cols[p][support[r]]);
        let blocks: Vec<DMatrix<f64>> = self
            .factors
            .iter()
            .map(|(l, r)| {
                let rsub = r.select_columns(support.iter());
                let mut m = rsub * &c;
                for (p, y) in tensor.iter().enumerate() {
                    let a = self.coefficient.value(*l, y);
                    m.column_mut(p).scale_mut(a);
                }
                m
            })
            .collect();
        let mut best = 0.0f64;
        for z in theta.points() {
            let w = nalgebra::DVector::from_vec(surplus_weights(i, z));
            let mut s = 0.0;
            for b in &blocks {
                s += (b * &w).norm_squared();
            }
            best = best.max(s);
        }
        Ok((best / self.n_samples as f64).sqrt())
    }

    /// `ζ_{i,I}` via the backward-neighbour simplification.
    pub fn zeta_pointwise(&self, i: &MultiIndex, theta: &ParamSampleSet) -> Result<f64> {
        let set = self.grid.index_set();
        let js = neighbors_j(i, set)?;
        let id_lists: Vec<Vec<usize>> = js
            .iter()
            .map(|j| {
                tensor_grid_keys(j)
                    .iter()
                    .map(|k| {
                        self.grid
                            .id_of_key(k)
                            .ok_or_else(|| Error::MissingValue(format!("collocation point {k:?}")))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let h = self.grid.len();
        self.surplus_norm(i, theta, |p| {
            let mut c = vec![0.0; h];
            for (j, ids) in js.iter().zip(&id_lists) {
                for (&id, w) in ids.iter().zip(surplus_weights(j, p)) {
                    c[id] += w;
                }
            }
            Ok(c)
        })
    }

    /// `ζ_{i,I}` for every margin index (lexicographic) and their sum.
    pub fn zeta_total(&self, theta: &ParamSampleSet) -> Result<(BTreeMap<MultiIndex, f64>, f64)> {
        let set = self.grid.index_set();
        let margin = set.margin();
        if margin.is_empty() && set.dim() > 0 {
            return Err(Error::EmptyMargin);
        }
        let values: Vec<f64> = margin
            .indices()
            .par_iter()
            .map(|i| self.zeta_pointwise(i, theta))
            .collect::<Result<_>>()?;
        let mut map = BTreeMap::new();
        let mut total = 0.0;
        for (i, v) in margin.indices().iter().zip(values) {
            total += v;
            map.insert(i.clone(), v);
        }
        Ok((map, total))
    }
}

/// `η_FE = Σ_y η_y ‖L_y‖`, summed in collocation point order.
pub fn eta_total(eta: &[f64], weights: &[f64]) -> Result<f64> {
    if eta.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            expected: weights.len(),
            found: eta.len(),
        });
    }
    Ok(eta.iter().zip(weights).map(|(e, w)| e * w).sum())
}

/// All estimator quantities of one evaluation.
#[derive(Clone, Debug)]
pub struct EstimatorReport {
    pub zeta: BTreeMap<MultiIndex, f64>,
    pub zeta_sc: f64,
    pub eta: Vec<f64>,
    pub weights: Vec<f64>,
    pub eta_fe: f64,
    pub total: f64,
    pub theta_size: usize,
    pub theta_seed: Option<u64>,
    pub pi_size: usize,
    pub pi_seed: u64,
}

impl EstimatorReport {
    /// Squared point weights `η_y² ‖L_y‖` used for collocation marking.
    pub fn point_marking_weights(&self) -> Vec<f64> {
        self.eta.iter().zip(&self.weights).map(|(e, w)| e * e * w).collect()
    }
}
