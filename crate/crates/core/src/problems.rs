//! Problem presets: the inclusion benchmarks and a manufactured Poisson problem.
//!
//! Inclusion geometry on the unit square (all coordinates are multiples of
//! 1/32, so every mesh built from `unit_square(32)` resolves it exactly):
//!
//! | label | region |
//! |---|---|
//! | 1 | C1 = [0.125, 0.375]²  |
//! | 2 | C2 = [0.625, 0.875] × [0.125, 0.375] |
//! | 3 | C3 = [0.625, 0.875]² |
//! | 4 | C4 = [0.125, 0.375] × [0.625, 0.875] |
//! | 5 | F = [0.375, 0.625]², support of the forcing |
//! | 0 | everything else |
//!
//! The figure this layout reconstructs is not dimensioned; only the
//! arrangement (four corner squares, central forcing region) is fixed.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fem::{DiffusionCoefficient, SpatialField};
use crate::mesh::{Point, Triangulation};

/// Axis-aligned boxes `[x0, x1] × [y0, y1]` for C1..C4.
pub const INCLUSIONS: [[f64; 4]; 4] = [
    [0.125, 0.375, 0.125, 0.375],
    [0.625, 0.875, 0.125, 0.375],
    [0.625, 0.875, 0.625, 0.875],
    [0.125, 0.375, 0.625, 0.875],
];
pub const FORCING_REGION: [f64; 4] = [0.375, 0.625, 0.375, 0.625];
pub const FORCING_LABEL: u16 = 5;
pub const N_LABELS: usize = 6;

pub const BASE_COEFFICIENT: f64 = 1.1;
pub const GAMMA: [f64; 4] = [0.9, 0.6, 0.3, 0.1];
pub const FORCING_VALUE: f64 = 100.0;
/// Parameters range over (-0.99, 0.99); collocation works on [-1, 1].
pub const PARAM_SCALE: f64 = 0.99;

fn inside(b: &[f64; 4], p: Point) -> bool {
    p[0] > b[0] && p[0] < b[1] && p[1] > b[2] && p[1] < b[3]
}

/// Subdomain label of a point strictly inside one element.
pub fn classify(p: Point) -> u16 {
    for (k, b) in INCLUSIONS.iter().enumerate() {
        if inside(b, p) {
            return k as u16 + 1;
        }
    }
    if inside(&FORCING_REGION, p) {
        FORCING_LABEL
    } else {
        0
    }
}

/// A parametric diffusion problem on the unit square.
#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub name: String,
    pub coefficient: DiffusionCoefficient,
    pub forcing: SpatialField,
    /// divisions per side of the initial uniform mesh
    pub initial_divisions: usize,
    pub exact: Option<ExactSolution>,
}

/// Closed-form solution for manufactured problems.
#[derive(Clone, Copy, Debug)]
pub struct ExactSolution {
    pub value: fn(Point) -> f64,
    pub gradient: fn(Point) -> [f64; 2],
}

impl ProblemSpec {
    pub fn n_params(&self) -> usize {
        self.coefficient.n_params()
    }

    /// Parameter interval per direction, after scaling.
    pub fn parameter_range(&self) -> (f64, f64) {
        (-PARAM_SCALE, PARAM_SCALE)
    }

    pub fn initial_mesh(&self) -> Triangulation {
        Triangulation::unit_square(self.initial_divisions).with_labels(classify)
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "inclusion4d" => Ok(inclusion_4d()),
            "inclusion2d" => inclusion_reduced(2),
            "inclusion1d" => inclusion_reduced(1),
            "manufactured" => Ok(manufactured_poisson()),
            other => Err(Error::InvalidProblem(format!("unknown preset '{other}'"))),
        }
    }
}

fn inclusion(n: usize) -> Result<ProblemSpec> {
    let base = vec![BASE_COEFFICIENT; N_LABELS];
    let terms = (0..n)
        .map(|k| {
            let mut t = vec![0.0; N_LABELS];
            t[k + 1] = GAMMA[k];
            t
        })
        .collect();
    let mut forcing = vec![0.0; N_LABELS];
    forcing[FORCING_LABEL as usize] = FORCING_VALUE;
    Ok(ProblemSpec {
        name: format!("inclusion{n}d"),
        coefficient: DiffusionCoefficient::new(base, terms, PARAM_SCALE)?,
        forcing: SpatialField::PerLabel(forcing),
        initial_divisions: 32,
        exact: None,
    })
}

/// Four inclusions with anisotropic weights, forcing on the central square.
pub fn inclusion_4d() -> ProblemSpec {
    inclusion(4).expect("benchmark coefficient is elliptic")
}

/// The benchmark restricted to the first `n` inclusions, `n ∈ {1, 2}`.
pub fn inclusion_reduced(n: usize) -> Result<ProblemSpec> {
    if !(1..=2).contains(&n) {
        return Err(Error::InvalidProblem(format!(
            "reduced inclusion problem needs 1 or 2 parameters, got {n}"
        )));
    }
    inclusion(n)
}

fn sine_solution(p: Point) -> f64 {
    (PI * p[0]).sin() * (PI * p[1]).sin()
}

fn sine_gradient(p: Point) -> [f64; 2] {
    [
        PI * (PI * p[0]).cos() * (PI * p[1]).sin(),
        PI * (PI * p[0]).sin() * (PI * p[1]).cos(),
    ]
}

fn sine_forcing(p: Point) -> f64 {
    2.0 * PI * PI * sine_solution(p)
}

/// `a ≡ 1`, `u = sin(πx) sin(πy)`, no parameters.
pub fn manufactured_poisson() -> ProblemSpec {
    ProblemSpec {
        name: "manufactured".into(),
        coefficient: DiffusionCoefficient::constant(1.0).expect("positive constant"),
        forcing: SpatialField::Function(sine_forcing),
        initial_divisions: 4,
        exact: Some(ExactSolution {
            value: sine_solution,
            gradient: sine_gradient,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_values() {
        let p = inclusion_4d();
        let y0 = [0.0; 4];
        for label in 0..N_LABELS as u16 {
            assert_eq!(p.coefficient.value(label, &y0), 1.1);
        }
        let y = [1.0, 0.0, 0.0, 0.0];
        assert!((p.coefficient.value(1, &y) - 1.991).abs() < 1e-14);
        assert_eq!(p.coefficient.value(0, &y), 1.1);
        assert_eq!(p.coefficient.value(5, &y), 1.1);
        let (lo, _) = p.coefficient.bounds();
        assert!((lo - 0.209).abs() < 1e-14);
    }

    #[test]
    fn initial_mesh_counts_and_alignment() {
        let p = inclusion_4d();
        let mesh = p.initial_mesh();
        assert_eq!(mesh.n_triangles(), 2048);
        assert_eq!(mesh.n_vertices(), 1089);
        let mut area = [0.0; N_LABELS];
        for t in 0..mesh.n_triangles() {
            area[mesh.labels()[t] as usize] += mesh.area(t);
        }
        for a in &area[1..] {
            assert!((a - 0.0625).abs() < 1e-12);
        }
        // every triangle lies entirely inside its label's region
        for t in 0..mesh.n_triangles() {
            let l = mesh.labels()[t];
            for c in mesh.corners(t) {
                let shrunk = [
                    c[0] + 1e-9 * (mesh.centroid(t)[0] - c[0]),
                    c[1] + 1e-9 * (mesh.centroid(t)[1] - c[1]),
                ];
                assert_eq!(classify(shrunk), l);
            }
        }
    }

    #[test]
    fn reduced_variants() {
        assert_eq!(inclusion_reduced(1).unwrap().n_params(), 1);
        let p = inclusion_reduced(2).unwrap();
        assert_eq!(p.n_params(), 2);
        assert!((p.coefficient.bounds().0 - 0.209).abs() < 1e-14);
        assert!(inclusion_reduced(3).is_err());
        assert!(ProblemSpec::by_name("nope").is_err());
        assert_eq!(ProblemSpec::by_name("manufactured").unwrap().n_params(), 0);
    }
}
