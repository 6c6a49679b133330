#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use scfem::fem::DiffusionCoefficient;
use scfem::multiindex::{reduced_set, MultiIndex, MultiIndexSet};
use scfem::sparse_grid::{keys_to_coords, surplus_weights, tensor_grid_keys, SparseGrid};

pub fn mi(v: &[u32]) -> MultiIndex {
    MultiIndex::new(v.to_vec()).unwrap()
}

/// Grows `{1}` by random admissible additions until it has at least `size` members
/// (or would exceed `max_size`).
pub fn random_downward_closed<R: Rng>(rng: &mut R, dim: usize, size: usize, max_size: usize) -> MultiIndexSet {
    let mut set = MultiIndexSet::unit(dim);
    while set.len() < size && dim > 0 {
        let margin = set.margin().indices().to_vec();
        let i = margin.choose(rng).unwrap();
        let added = reduced_set(i, &set).unwrap();
        if set.len() + added.len() > max_size {
            // fall back to a single-step addition, always admissible for some margin member
            let singles: Vec<_> = margin
                .iter()
                .filter(|m| reduced_set(m, &set).unwrap().len() == 1)
                .cloned()
                .collect();
            match singles.choose(rng) {
                Some(s) if set.len() < max_size => set = set.union(std::slice::from_ref(s)).unwrap(),
                _ => break,
            }
            continue;
        }
        set = set.union(&added).unwrap();
    }
    set
}

/// Brute force `max_z sqrt(mean_π |Σ_p w_p(z) F(p)(π)|²)` with `w` the
/// surplus weights of `i` and `F(p)` the full field (coefficient included)
/// sampled at the spatial points.
pub fn brute_surplus_norm(i: &MultiIndex, zs: &[Vec<f64>], field: impl Fn(&[f64]) -> Vec<[f64; 2]>) -> f64 {
    let fields: Vec<Vec<[f64; 2]>> = tensor_grid_keys(i).iter().map(|k| field(&keys_to_coords(k))).collect();
    let n = fields[0].len();
    let mut best = 0.0f64;
    for z in zs {
        let w = surplus_weights(i, z);
        let mut s = 0.0;
        for k in 0..n {
            let mut g = [0.0; 2];
            for (f, wp) in fields.iter().zip(&w) {
                g[0] += wp * f[k][0];
                g[1] += wp * f[k][1];
            }
            s += g[0] * g[0] + g[1] * g[1];
        }
        best = best.max(s / n as f64);
    }
    best.sqrt()
}

/// `ζ_{i,I}` straight from its definition `Δ^{m(i)}(a ∇ S_I[U])`, with
/// `S_I` evaluated through the Lagrange basis of the whole grid.
pub fn direct_zeta(
    grid: &SparseGrid,
    coefficient: &DiffusionCoefficient,
    labels: &[u16],
    gradients: &[Vec<[f64; 2]>],
    i: &MultiIndex,
    zs: &[Vec<f64>],
) -> f64 {
    brute_surplus_norm(i, zs, |p| {
        let l = grid.lagrange_weights(p);
        (0..labels.len())
            .map(|k| {
                let a = coefficient.value(labels[k], p);
                let mut g = [0.0; 2];
                for (ly, gy) in l.iter().zip(gradients) {
                    g[0] += ly * gy[k][0];
                    g[1] += ly * gy[k][1];
                }
                [a * g[0], a * g[1]]
            })
            .collect()
    })
}

/// A random elliptic coefficient with `labels` subdomains and `n` parameters.
pub fn random_coefficient<R: Rng>(rng: &mut R, labels: usize, n: usize) -> DiffusionCoefficient {
    let base: Vec<f64> = (0..labels).map(|_| rng.gen_range(2.0..3.0)).collect();
    let terms = (0..n)
        .map(|_| (0..labels).map(|_| rng.gen_range(-0.9..0.9)).collect())
        .collect();
    DiffusionCoefficient::new(base, terms, 1.0).unwrap()
}

pub fn random_gradients<R: Rng>(rng: &mut R, points: usize, samples: usize) -> Vec<Vec<[f64; 2]>> {
    (0..points)
        .map(|_| {
            (0..samples)
                .map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
                .collect()
        })
        .collect()
}

/// Known sufficient conditions for `Δ^{m(i)}(a ∇ Δ^{m(j)} ·) ≡ 0`:
/// some `i_n < j_n`, or `j + e_n ≤ i` with `j + e_n ≠ i` for every `n`.
pub fn surplus_product_vanishes(i: &MultiIndex, j: &MultiIndex) -> bool {
    let (a, b) = (i.entries(), j.entries());
    if a.iter().zip(b).any(|(x, y)| x < y) {
        return true;
    }
    (0..a.len()).all(|n| {
        let shifted = j.forward(n);
        shifted.is_dominated_by(i) && &shifted != i
    })
}
