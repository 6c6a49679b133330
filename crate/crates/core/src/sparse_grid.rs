//! Clenshaw–Curtis sparse grids.
//!
//! Nodes are identified by integer keys on a dyadic scale so that nested
//! levels share bitwise identical coordinates; deduplication of collocation
//! points is exact. Interpolation uses the combination technique, and the
//! hierarchical surplus of a single index is evaluated as a tensor product of
//! 1D detail operators.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::multiindex::{doubling_m, rectangle_indices, MultiIndex, MultiIndexSet};

const KEY_BITS: u32 = 30;
const MID_KEY: u32 = 1 << (KEY_BITS - 1);
const MAX_LEVEL: u32 = 20;

/// Position of a 1D node on the dyadic scale `[0, 2^30]`.
pub type NodeKey = u32;

/// Coordinate in `[-1, 1]` of a node key: `-cos(pi t) = sin(pi (t - 1/2))`.
pub fn key_coordinate(key: NodeKey) -> f64 {
    let n = key as i64 - MID_KEY as i64;
    (PI * n as f64 / (1u64 << KEY_BITS) as f64).sin()
}

/// Level at which a node key first appears.
pub fn key_level(key: NodeKey) -> u32 {
    match key {
        MID_KEY => 1,
        0 => 2,
        k if k == 1 << KEY_BITS => 2,
        k => KEY_BITS + 1 - k.trailing_zeros(),
    }
}

struct LevelNodes {
    keys: Vec<NodeKey>,
    coords: Vec<f64>,
    bary: Vec<f64>,
    /// index of each node in the previous level, if present there
    parent: Vec<Option<usize>>,
}

fn build_level(level: u32) -> LevelNodes {
    let keys: Vec<NodeKey> = match level {
        0 => vec![],
        1 => vec![MID_KEY],
        l => {
            let k = l - 1;
            (0..=(1u32 << k)).map(|j| j << (KEY_BITS - k)).collect()
        }
    };
    let m = keys.len();
    let coords = keys.iter().map(|&k| key_coordinate(k)).collect();
    // barycentric weights of the Chebyshev extreme points
    let bary = (0..m)
        .map(|j| {
            let s = if j % 2 == 0 { 1.0 } else { -1.0 };
            if m > 1 && (j == 0 || j == m - 1) {
                0.5 * s
            } else {
                s
            }
        })
        .collect();
    let parent = (0..m)
        .map(|j| match level {
            0 | 1 => None,
            2 => (j == 1).then_some(0),
            _ => (j % 2 == 0).then_some(j / 2),
        })
        .collect();
    LevelNodes {
        keys,
        coords,
        bary,
        parent,
    }
}

fn level_nodes(level: u32) -> &'static LevelNodes {
    #[allow(clippy::declare_interior_mutable_const)]
    const EMPTY: OnceLock<LevelNodes> = OnceLock::new();
    static CACHE: [OnceLock<LevelNodes>; MAX_LEVEL as usize + 1] = [EMPTY; MAX_LEVEL as usize + 1];
    assert!(level <= MAX_LEVEL, "interpolation level {level} exceeds {MAX_LEVEL}");
    CACHE[level as usize].get_or_init(|| build_level(level))
}

/// Sorted Clenshaw–Curtis abscissae for `m ∈ {0, 1, 3, 5, 9, ...}` nodes.
pub fn cc_nodes(m: usize) -> Result<Vec<f64>> {
    let level = match m {
        0 => 0,
        1 => 1,
        m if m >= 3 && (m - 1).is_power_of_two() => (m - 1).trailing_zeros() + 1,
        _ => return Err(Error::UnsupportedNodeCount(m)),
    };
    if level > MAX_LEVEL {
        return Err(Error::UnsupportedNodeCount(m));
    }
    Ok(level_nodes(level).coords.clone())
}

/// Node keys of a level, in ascending coordinate order.
pub fn level_keys(level: u32) -> &'static [NodeKey] {
    &level_nodes(level).keys
}

/// Values of the Lagrange basis of a level at `z`.
pub fn lagrange_basis(level: u32, z: f64) -> Vec<f64> {
    let nodes = level_nodes(level);
    let m = nodes.keys.len();
    let mut out = vec![0.0; m];
    if m == 0 {
        return out;
    }
    if m == 1 {
        out[0] = 1.0;
        return out;
    }
    if let Some(k) = nodes.coords.iter().position(|&x| x == z) {
        out[k] = 1.0;
        return out;
    }
    let mut denom = 0.0;
    for k in 0..m {
        let t = nodes.bary[k] / (z - nodes.coords[k]);
        out[k] = t;
        denom += t;
    }
    for v in &mut out {
        *v /= denom;
    }
    out
}

/// Values of the 1D detail operator `U^{m(l)} - U^{m(l-1)}` basis, indexed by
/// the nodes of level `l`.
pub fn detail_basis(level: u32, z: f64) -> Vec<f64> {
    let mut out = lagrange_basis(level, z);
    if level >= 2 {
        let coarse = lagrange_basis(level - 1, z);
        for (k, p) in level_nodes(level).parent.iter().enumerate() {
            if let Some(p) = p {
                out[k] -= coarse[*p];
            }
        }
    }
    out
}

/// Sampled Lebesgue constant `max_z sum_k |l_k(z)|` of a level.
pub fn sampled_lebesgue_constant(level: u32, samples: &[f64]) -> f64 {
    samples
        .iter()
        .map(|&z| lagrange_basis(level, z).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Tensor product of 1D factors, last factor fastest.
pub fn tensor_product(factors: &[Vec<f64>]) -> Vec<f64> {
    let mut out = vec![1.0];
    for f in factors {
        let mut next = Vec::with_capacity(out.len() * f.len());
        for &a in &out {
            for &b in f {
                next.push(a * b);
            }
        }
        out = next;
    }
    out
}

/// Keys of the points of the tensor grid of index `i`, lexicographic order.
pub fn tensor_grid_keys(i: &MultiIndex) -> Vec<Vec<NodeKey>> {
    let mut out: Vec<Vec<NodeKey>> = vec![Vec::with_capacity(i.dim())];
    for &l in i.entries() {
        let keys = level_keys(l);
        let mut next = Vec::with_capacity(out.len() * keys.len());
        for p in &out {
            for &k in keys {
                let mut q = p.clone();
                q.push(k);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Tensor Lagrange interpolation weights of index `i` at `z`, aligned with
/// [`tensor_grid_keys`].
pub fn tensor_interpolation_weights(i: &MultiIndex, z: &[f64]) -> Vec<f64> {
    let f: Vec<Vec<f64>> = i
        .entries()
        .iter()
        .zip(z)
        .map(|(&l, &zn)| lagrange_basis(l, zn))
        .collect();
    tensor_product(&f)
}

/// Hierarchical surplus weights of index `i` at `z`, aligned with
/// [`tensor_grid_keys`]: `Δ^{m(i)} g (z) = sum_p w_p g(p)`.
pub fn surplus_weights(i: &MultiIndex, z: &[f64]) -> Vec<f64> {
    let f: Vec<Vec<f64>> = i.entries().iter().zip(z).map(|(&l, &zn)| detail_basis(l, zn)).collect();
    tensor_product(&f)
}

pub fn keys_to_coords(key: &[NodeKey]) -> Vec<f64> {
    key.iter().map(|&k| key_coordinate(k)).collect()
}

/// Evaluates `Δ^{m(i)} g` at `z` from samples of `g` on the tensor grid of `i`.
pub fn surplus_apply<F>(i: &MultiIndex, samples: F, z: &[f64]) -> Result<f64>
where
    F: Fn(&[f64]) -> Option<f64>,
{
    if z.len() != i.dim() {
        return Err(Error::DimensionMismatch {
            expected: i.dim(),
            found: z.len(),
        });
    }
    let w = surplus_weights(i, z);
    let mut acc = 0.0;
    for (key, wk) in tensor_grid_keys(i).iter().zip(&w) {
        let y = keys_to_coords(key);
        let v = samples(&y).ok_or_else(|| Error::MissingValue(format!("sample at {y:?}")))?;
        acc += wk * v;
    }
    Ok(acc)
}

/// `c_i = sum_{j ∈ {0,1}^N, i+j ∈ I} (-1)^{|j|}` for every `i ∈ I`.
pub fn combination_coefficients(set: &MultiIndexSet) -> BTreeMap<MultiIndex, i64> {
    let dim = set.dim();
    let mut out = BTreeMap::new();
    for i in set.iter() {
        let mut c = 0i64;
        for mask in 0u32..(1u32 << dim) {
            let mut e = i.entries().to_vec();
            for (n, en) in e.iter_mut().enumerate() {
                if mask & (1 << n) != 0 {
                    *en += 1;
                }
            }
            let shifted = MultiIndex::new(e).expect("entries stay positive");
            if set.contains(&shifted) {
                c += if mask.count_ones() % 2 == 0 { 1 } else { -1 };
            }
        }
        out.insert(i.clone(), c);
    }
    out
}

/// A collocation point of a sparse grid.
#[derive(Clone, Debug)]
pub struct GridPoint {
    pub key: Vec<NodeKey>,
    pub coords: Vec<f64>,
    /// The point belongs to the tensor grid of `i` iff `first_level <= i`.
    pub first_level: MultiIndex,
}

#[derive(Clone, Debug)]
struct CombinationTerm {
    index: MultiIndex,
    coeff: f64,
    point_ids: Vec<usize>,
}

/// The sparse grid `H_I` with its combination-technique representation.
#[derive(Clone, Debug)]
pub struct SparseGrid {
    set: MultiIndexSet,
    points: Vec<GridPoint>,
    lookup: HashMap<Vec<NodeKey>, usize>,
    coefficients: BTreeMap<MultiIndex, i64>,
    terms: Vec<CombinationTerm>,
}

impl SparseGrid {
    pub fn new(set: &MultiIndexSet) -> Self {
        let mut grid = Self {
            set: MultiIndexSet::new(set.dim(), std::iter::empty()).expect("empty set"),
            points: Vec::new(),
            lookup: HashMap::new(),
            coefficients: BTreeMap::new(),
            terms: Vec::new(),
        };
        grid.extend(set);
        grid
    }

    /// Grows the grid to a larger index set. Existing points keep their ids;
    /// new points are appended in lexicographic index order. Returns the ids of
    /// the added points.
    pub fn extend(&mut self, set: &MultiIndexSet) -> Vec<usize> {
        let first_new = self.points.len();
        for i in set.iter() {
            for key in tensor_grid_keys(i) {
                if !self.lookup.contains_key(&key) {
                    let first_level =
                        MultiIndex::new(key.iter().map(|&k| key_level(k)).collect()).expect("levels are positive");
                    self.lookup.insert(key.clone(), self.points.len());
                    self.points.push(GridPoint {
                        coords: keys_to_coords(&key),
                        key,
                        first_level,
                    });
                }
            }
        }
        self.set = set.clone();
        self.coefficients = combination_coefficients(set);
        self.terms = self
            .coefficients
            .iter()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| CombinationTerm {
                index: i.clone(),
                coeff: c as f64,
                point_ids: tensor_grid_keys(i).iter().map(|k| self.lookup[k]).collect(),
            })
            .collect();
        (first_new..self.points.len()).collect()
    }

    pub fn index_set(&self) -> &MultiIndexSet {
        &self.set
    }

    pub fn dim(&self) -> usize {
        self.set.dim()
    }

    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn coefficients(&self) -> &BTreeMap<MultiIndex, i64> {
        &self.coefficients
    }

    pub fn id_of_key(&self, key: &[NodeKey]) -> Option<usize> {
        self.lookup.get(key).copied()
    }

    /// Id of the point with exactly these coordinates.
    pub fn find(&self, coords: &[f64]) -> Option<usize> {
        self.points.iter().position(|p| p.coords == coords)
    }

    /// `L_y(z)` for every collocation point `y`, in point order.
    pub fn lagrange_weights(&self, z: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.points.len()];
        for term in &self.terms {
            let w = tensor_interpolation_weights(&term.index, z);
            for (&id, wk) in term.point_ids.iter().zip(&w) {
                out[id] += term.coeff * wk;
            }
        }
        out
    }

    fn check_z(&self, z: &[f64]) -> Result<()> {
        if z.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: z.len(),
            });
        }
        Ok(())
    }

    /// `S_I[v](z)` for scalar values given in point order.
    pub fn interpolate(&self, values: &[f64], z: &[f64]) -> Result<f64> {
        self.check_z(z)?;
        if values.len() != self.points.len() {
            return Err(Error::MissingValue(format!(
                "{} values for {} collocation points",
                values.len(),
                self.points.len()
            )));
        }
        let mut acc = 0.0;
        for term in &self.terms {
            let w = tensor_interpolation_weights(&term.index, z);
            let mut t = 0.0;
            for (&id, wk) in term.point_ids.iter().zip(&w) {
                t += wk * values[id];
            }
            acc += term.coeff * t;
        }
        Ok(acc)
    }

    /// `S_I[v](z)` for vector-valued data (e.g. nodal coefficient arrays).
    pub fn interpolate_fields<V: AsRef<[f64]>>(&self, values: &[V], z: &[f64]) -> Result<Vec<f64>> {
        self.check_z(z)?;
        if values.len() != self.points.len() {
            return Err(Error::MissingValue(format!(
                "{} values for {} collocation points",
                values.len(),
                self.points.len()
            )));
        }
        let len = values.first().map_or(0, |v| v.as_ref().len());
        let w = self.lagrange_weights(z);
        let mut out = vec![0.0; len];
        for (v, wk) in values.iter().zip(&w) {
            let v = v.as_ref();
            if v.len() != len {
                return Err(Error::MissingValue("ragged value arrays".into()));
            }
            if *wk != 0.0 {
                for (o, x) in out.iter_mut().zip(v) {
                    *o += wk * x;
                }
            }
        }
        Ok(out)
    }

    /// Sup-norm of every Lagrange basis function over `theta`, in point order.
    pub fn lagrange_sup_norms(&self, theta: &ParamSampleSet) -> Vec<f64> {
        let mut out = vec![0.0f64; self.points.len()];
        for z in theta.points() {
            for (o, w) in out.iter_mut().zip(self.lagrange_weights(z)) {
                *o = o.max(w.abs());
            }
        }
        out
    }
}

/// `H_I` for a downward-closed set.
pub fn collocation_points(set: &MultiIndexSet) -> SparseGrid {
    SparseGrid::new(set)
}

/// `max_{z ∈ Θ} |L_y(z)|` for the collocation point `y`.
pub fn lagrange_sup_norm(grid: &SparseGrid, y: &[f64], theta: &ParamSampleSet) -> Result<f64> {
    let id = grid.find(y).ok_or_else(|| Error::NotAGridPoint(y.to_vec()))?;
    Ok(theta
        .points()
        .iter()
        .map(|z| grid.lagrange_weights(z)[id].abs())
        .fold(0.0, f64::max))
}

/// How a parameter sample set was generated.
#[derive(Clone, Debug, PartialEq)]
pub enum SampleDescriptor {
    Uniform { count: usize, seed: u64 },
    TensorOvergrid { level: u32 },
    Explicit,
}

/// Finite set `Θ ⊂ Γ` standing in for the parameter domain in sup-norms.
#[derive(Clone, Debug)]
pub struct ParamSampleSet {
    points: Vec<Vec<f64>>,
    descriptor: SampleDescriptor,
}

impl ParamSampleSet {
    /// `count` i.i.d. uniform points on `[-1, 1]^dim`.
    pub fn uniform(dim: usize, count: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = (0..count)
            .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect())
            .collect();
        Self {
            points,
            descriptor: SampleDescriptor::Uniform { count, seed },
        }
    }

    /// The full tensor Clenshaw–Curtis grid of the given level.
    pub fn tensor_overgrid(dim: usize, level: u32) -> Self {
        let corner = MultiIndex::new(vec![level; dim]).expect("level >= 1");
        let points = tensor_grid_keys(&corner).iter().map(|k| keys_to_coords(k)).collect();
        Self {
            points,
            descriptor: SampleDescriptor::TensorOvergrid { level },
        }
    }

    pub fn from_points(points: Vec<Vec<f64>>) -> Self {
        Self {
            points,
            descriptor: SampleDescriptor::Explicit,
        }
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn descriptor(&self) -> &SampleDescriptor {
        &self.descriptor
    }
}

/// All indices `j <= i` (used to enumerate the backward cone of an index).
pub fn backward_cone(i: &MultiIndex) -> Vec<MultiIndex> {
    rectangle_indices(i)
}

/// Number of 1D nodes of every direction of the tensor grid of `i`.
pub fn tensor_grid_size(i: &MultiIndex) -> usize {
    i.entries().iter().map(|&l| doubling_m(l)).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::new(e.to_vec()).unwrap()
    }

    #[test]
    fn cc_node_examples() {
        assert_eq!(cc_nodes(0).unwrap(), Vec::<f64>::new());
        assert_eq!(cc_nodes(1).unwrap(), vec![0.0]);
        assert_eq!(cc_nodes(3).unwrap(), vec![-1.0, 0.0, 1.0]);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let five = cc_nodes(5).unwrap();
        let expected = [-1.0, -h, 0.0, h, 1.0];
        for (a, b) in five.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15, "{a} vs {b}");
        }
        assert!(matches!(cc_nodes(4), Err(Error::UnsupportedNodeCount(4))));
        assert!(cc_nodes(2).is_err());
    }

    #[test]
    fn nodes_match_cosine_formula() {
        for m in [3usize, 5, 9, 17, 33] {
            let nodes = cc_nodes(m).unwrap();
            for (j, x) in nodes.iter().enumerate() {
                let reference = -(PI * j as f64 / (m - 1) as f64).cos();
                assert!((x - reference).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn nodes_are_nested_and_symmetric_bitwise() {
        for level in 1..=6u32 {
            let coarse = cc_nodes(doubling_m(level)).unwrap();
            let fine = cc_nodes(doubling_m(level + 1)).unwrap();
            for x in &coarse {
                assert!(fine.iter().any(|y| y.to_bits() == x.to_bits()));
            }
            for (a, b) in fine.iter().zip(fine.iter().rev()) {
                assert!(*a == -*b);
            }
        }
    }

    #[test]
    fn key_levels() {
        for level in 1..=8u32 {
            let keys = level_keys(level);
            let new: Vec<_> = keys.iter().filter(|&&k| key_level(k) == level).collect();
            let expected = doubling_m(level) - doubling_m(level - 1);
            assert_eq!(new.len(), expected, "level {level}");
            assert!(keys.iter().all(|&k| key_level(k) <= level));
        }
    }

    #[test]
    fn combination_coefficient_examples() {
        let unit = MultiIndexSet::unit(2);
        let c = combination_coefficients(&unit);
        assert_eq!(c[&mi(&[1, 1])], 1);

        let r22 = MultiIndexSet::rectangle(&mi(&[2, 2]));
        let c = combination_coefficients(&r22);
        assert_eq!(c[&mi(&[2, 2])], 1);
        assert_eq!(c[&mi(&[1, 1])], 0);
        assert_eq!(c[&mi(&[1, 2])], 0);
        assert_eq!(c[&mi(&[2, 1])], 0);

        let cross = MultiIndexSet::new(2, vec![mi(&[1, 1]), mi(&[2, 1]), mi(&[1, 2])]).unwrap();
        let c = combination_coefficients(&cross);
        assert_eq!(c[&mi(&[1, 1])], -1);
        assert_eq!(c[&mi(&[2, 1])], 1);
        assert_eq!(c[&mi(&[1, 2])], 1);
        assert_eq!(c.values().sum::<i64>(), 1);
    }

    #[test]
    fn collocation_point_examples() {
        let g = collocation_points(&MultiIndexSet::unit(2));
        assert_eq!(g.len(), 1);
        assert_eq!(g.points()[0].coords, vec![0.0, 0.0]);

        let line = MultiIndexSet::new(1, vec![mi(&[1]), mi(&[2])]).unwrap();
        let g = collocation_points(&line);
        let mut xs: Vec<f64> = g.points().iter().map(|p| p.coords[0]).collect();
        xs.sort_by(f64::total_cmp);
        assert_eq!(xs, vec![-1.0, 0.0, 1.0]);

        let cross = MultiIndexSet::new(2, vec![mi(&[1, 1]), mi(&[2, 1]), mi(&[1, 2])]).unwrap();
        let g = collocation_points(&cross);
        assert_eq!(g.len(), 5);
        for p in [[0.0, 0.0], [1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]] {
            assert!(g.find(&p).is_some(), "{p:?}");
        }
    }

    #[test]
    fn interpolation_reproduces_constants_and_nodes() {
        let set = MultiIndexSet::new(2, vec![mi(&[1, 1]), mi(&[2, 1]), mi(&[1, 2]), mi(&[3, 1])]).unwrap();
        let g = SparseGrid::new(&set);
        let constant = vec![2.5; g.len()];
        assert!((g.interpolate(&constant, &[0.3, -0.7]).unwrap() - 2.5).abs() < 1e-14);
        let vals: Vec<f64> = (0..g.len()).map(|k| k as f64 * 0.37 - 1.0).collect();
        for (k, p) in g.points().iter().enumerate() {
            assert_eq!(g.interpolate(&vals, &p.coords).unwrap(), vals[k]);
        }
        assert!(g.interpolate(&vals[1..], &[0.0, 0.0]).is_err());
    }

    #[test]
    fn surplus_examples() {
        let z = [0.123, -0.456];
        // all-ones surplus reproduces constants
        let v = surplus_apply(&mi(&[1, 1]), |_| Some(3.0), &z).unwrap();
        assert!((v - 3.0).abs() < 1e-15);
        // data vanishing on the tensor grid gives zero
        let v = surplus_apply(&mi(&[3, 2]), |y| Some(y[0] * (1.0 - y[0] * y[0]) * y[1] * 0.0), &z).unwrap();
        assert_eq!(v, 0.0);
        // polynomial from P_{R_i \ {i}} is annihilated: i = (2,2), g = y0 (in P_(2,1))
        let v = surplus_apply(&mi(&[2, 2]), |y| Some(1.0 + y[0] + y[0] * y[0]), &z).unwrap();
        assert!(v.abs() < 1e-14);
        assert!(surplus_apply(&mi(&[2, 2]), |_| None, &z).is_err());
    }

    #[test]
    fn lagrange_sup_norm_examples() {
        let g = SparseGrid::new(&MultiIndexSet::unit(2));
        let theta = ParamSampleSet::uniform(2, 50, 3);
        assert_eq!(lagrange_sup_norm(&g, &[0.0, 0.0], &theta).unwrap(), 1.0);

        let line = MultiIndexSet::new(1, vec![mi(&[1]), mi(&[2])]).unwrap();
        let g = SparseGrid::new(&line);
        let theta = ParamSampleSet::from_points((0..101).map(|k| vec![-1.0 + 0.02 * k as f64]).collect());
        let n = lagrange_sup_norm(&g, &[0.0], &theta).unwrap();
        assert!((n - 1.0).abs() < 1e-12);
        assert!(lagrange_sup_norm(&g, &[0.5], &theta).is_err());
    }

    #[test]
    fn uniform_samples_are_reproducible() {
        let a = ParamSampleSet::uniform(3, 20, 7);
        let b = ParamSampleSet::uniform(3, 20, 7);
        assert_eq!(a.points(), b.points());
        assert!(a.points().iter().flatten().all(|x| (-1.0..=1.0).contains(x)));
        assert_eq!(ParamSampleSet::tensor_overgrid(2, 3).len(), 25);
    }
}
