use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scfem::adaptive::dorfler_select;
use scfem::estimators::SpatialSampleSet;
use scfem::fem::{
    assemble_and_solve, element_gradients, gradient_at_points, h1_seminorm_error, residual_estimator,
    DiffusionCoefficient, FESolution, SpatialField,
};
use scfem::mesh::{Point, Triangulation};
use scfem::problems::{inclusion_reduced, manufactured_poisson};

/// Gradient of the linear interpolant through three corner values, from
/// the 2x2 system `[p1-p0; p2-p0] g = [u1-u0; u2-u0]`.
fn plane_gradient(c: [Point; 3], u: [f64; 3]) -> [f64; 2] {
    let (a, b) = (c[1][0] - c[0][0], c[1][1] - c[0][1]);
    let (d, e) = (c[2][0] - c[0][0], c[2][1] - c[0][1]);
    let (r1, r2) = (u[1] - u[0], u[2] - u[0]);
    let det = a * e - b * d;
    [(r1 * e - b * r2) / det, (a * r2 - r1 * d) / det]
}

/// Residual indicators by walking every triangle's edges and searching all
/// other triangles for the neighbor.
fn brute_indicators(mesh: &Triangulation, sol: &FESolution, a: &DiffusionCoefficient, f: f64) -> Vec<f64> {
    let tris = mesh.triangles();
    let flux: Vec<[f64; 2]> = (0..tris.len())
        .map(|t| {
            let u = tris[t].map(|v| sol.values[v as usize]);
            let g = plane_gradient(mesh.corners(t), u);
            let av = a.value(mesh.labels()[t], &sol.y);
            [av * g[0], av * g[1]]
        })
        .collect();
    (0..tris.len())
        .map(|t| {
            let c = mesh.corners(t);
            let mut h: f64 = 0.0;
            for k in 0..3 {
                let (p, q) = (c[k], c[(k + 1) % 3]);
                h = h.max((p[0] - q[0]).hypot(p[1] - q[1]));
            }
            let mut eta2 = h * h * f * f * mesh.area(t);
            for k in 0..3 {
                let (va, vb) = (tris[t][k], tris[t][(k + 1) % 3]);
                let other = (0..tris.len()).find(|&s| s != t && tris[s].contains(&va) && tris[s].contains(&vb));
                let Some(s) = other else { continue };
                let (p, q) = (mesh.vertices()[va as usize], mesh.vertices()[vb as usize]);
                let len = (q[0] - p[0]).hypot(q[1] - p[1]);
                let n = [(q[1] - p[1]) / len, (p[0] - q[0]) / len];
                let jump = (flux[t][0] - flux[s][0]) * n[0] + (flux[t][1] - flux[s][1]) * n[1];
                eta2 += len * len * 0.25 * jump * jump;
            }
            eta2
        })
        .collect()
}

#[test]
fn jump_terms_match_edge_walk() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for refinements in 0..3 {
        let mesh = Triangulation::unit_square(2)
            .refine_uniform(refinements)
            .unwrap()
            .with_labels(|p| if p[0] < 0.5 { 0 } else { 1 });
        let a = DiffusionCoefficient::new(vec![1.0, 3.0], vec![vec![0.2, -0.7]], 1.0).unwrap();
        let boundary = mesh.boundary_vertex_flags();
        let values = boundary
            .iter()
            .map(|&b| if b { 0.0 } else { rng.gen_range(-1.0..1.0) })
            .collect();
        let sol = FESolution {
            values,
            y: vec![rng.gen_range(-1.0..1.0)],
        };
        let f = 2.5;
        let got = residual_estimator(&mesh, &sol, &a, &SpatialField::Constant(f)).unwrap();
        let want = brute_indicators(&mesh, &sol, &a, f);
        for (g, w) in got.per_element.iter().zip(&want) {
            assert!((g - w).abs() <= 1e-13 * w.max(1.0), "{g} vs {w}");
        }
        let total: f64 = want.iter().sum::<f64>().sqrt();
        assert!((got.total - total).abs() <= 1e-13 * total);
    }
}

#[test]
fn element_gradients_match_plane_fit() {
    let mesh = Triangulation::unit_square(3);
    let values: Vec<f64> = mesh.vertices().iter().map(|p| 2.0 * p[0] - 3.0 * p[1] + 0.5).collect();
    for g in element_gradients(&mesh, &values) {
        assert!((g[0] - 2.0).abs() < 1e-12 && (g[1] + 3.0).abs() < 1e-12);
    }
}

#[test]
fn estimator_efficiency_band() {
    let p = manufactured_poisson();
    let exact = p.exact.unwrap();
    let mut mesh = p.initial_mesh();
    for _ in 0..4 {
        let sol = assemble_and_solve(&mesh, &p.coefficient, &[], &p.forcing).unwrap();
        let eta = residual_estimator(&mesh, &sol, &p.coefficient, &p.forcing)
            .unwrap()
            .total;
        let err = h1_seminorm_error(&mesh, &sol.values, exact.gradient);
        let ratio = eta / err;
        assert!((1.0..=20.0).contains(&ratio), "η/|e| = {ratio}");
        mesh = mesh.refine_uniform(2).unwrap();
    }
}

fn energy(mesh: &Triangulation, sol: &FESolution, a: &DiffusionCoefficient) -> f64 {
    element_gradients(mesh, &sol.values)
        .iter()
        .enumerate()
        .map(|(t, g)| a.value(mesh.labels()[t], &sol.y) * (g[0] * g[0] + g[1] * g[1]) * mesh.area(t))
        .sum()
}

#[test]
fn discrete_energy_grows_under_bisection() {
    let p = inclusion_reduced(2).unwrap();
    let y = [0.3, -0.8];
    let mut mesh = p.initial_mesh();
    let mut previous = 0.0;
    for _ in 0..6 {
        let sol = assemble_and_solve(&mesh, &p.coefficient, &y, &p.forcing).unwrap();
        let e = energy(&mesh, &sol, &p.coefficient);
        assert!(e >= previous * (1.0 - 1e-9), "energy dropped from {previous} to {e}");
        previous = e;
        let ind = residual_estimator(&mesh, &sol, &p.coefficient, &p.forcing).unwrap();
        let marked = dorfler_select(&ind.per_element, 0.3).unwrap();
        mesh = mesh.refine_nvb(&marked).unwrap().mesh;
    }
}

/// For a constant coefficient `κ` the flux `κ ∇U` does not depend on `κ`,
/// so neither does the estimator on a given mesh.
#[test]
fn adaptive_loop_contracts_for_any_scale() {
    let scales = [0.01, 0.1, 1.0];
    let coefficients: Vec<_> = scales
        .iter()
        .map(|&k| DiffusionCoefficient::constant(k).unwrap())
        .collect();
    let f = SpatialField::Constant(1.0);
    let mut mesh = Triangulation::unit_square(4);
    let mut etas = vec![Vec::new(); scales.len()];
    for _ in 0..10 {
        let mut marking = Vec::new();
        for (k, a) in coefficients.iter().enumerate() {
            let sol = assemble_and_solve(&mesh, a, &[], &f).unwrap();
            let ind = residual_estimator(&mesh, &sol, a, &f).unwrap();
            etas[k].push(ind.total);
            marking = ind.per_element;
        }
        let marked = dorfler_select(&marking, 0.25).unwrap();
        mesh = mesh.refine_nvb(&marked).unwrap().mesh;
    }
    for (k, e) in etas.iter().enumerate() {
        assert!(e.last().unwrap() < &(0.5 * e[0]), "κ={}: {e:?}", scales[k]);
        for (x, y) in e.iter().zip(&etas[2]) {
            assert!((x - y).abs() <= 1e-8 * y, "{x} vs {y}");
        }
    }
}

#[test]
fn sampled_gradient_norm_tracks_quadrature() {
    let p = manufactured_poisson();
    let mesh = p.initial_mesh().refine_uniform(4).unwrap();
    let sol = assemble_and_solve(&mesh, &p.coefficient, &[], &p.forcing).unwrap();
    let exact = h1_seminorm_error(&mesh, &sol.values, |_| [0.0, 0.0]);
    let seeds = 0..8u64;
    let n = seeds.clone().count() as f64;
    let mean: f64 = seeds
        .map(|seed| {
            let pi = SpatialSampleSet::uniform(4096, seed);
            let g = gradient_at_points(&mesh, &sol, pi.points()).unwrap();
            (g.iter().map(|v| v[0] * v[0] + v[1] * v[1]).sum::<f64>() / g.len() as f64).sqrt()
        })
        .sum::<f64>()
        / n;
    let rel = (mean - exact).abs() / exact;
    assert!(rel <= 0.03, "sampled {mean} vs quadrature {exact}");
}

#[test]
fn solution_vanishes_on_boundary() {
    let p = inclusion_reduced(1).unwrap();
    let mesh = p.initial_mesh();
    let sol = assemble_and_solve(&mesh, &p.coefficient, &[0.5], &p.forcing).unwrap();
    for (v, b) in sol.values.iter().zip(mesh.boundary_vertex_flags()) {
        if b {
            assert_eq!(*v, 0.0);
        }
    }
    assert!(
        sol.values.iter().all(|v| *v >= -1e-12),
        "unit forcing gives a nonnegative solution"
    );
}
