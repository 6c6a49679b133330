//! P1 finite elements for `-div(a grad u) = f` with homogeneous Dirichlet data.

use crate::error::{Error, Result};
use crate::mesh::{EdgeTable, Point, PointLocator, Triangulation};

/// A scalar field on the domain, constant per subdomain label or smooth.
#[derive(Clone, Debug)]
pub enum SpatialField {
    Constant(f64),
    PerLabel(Vec<f64>),
    Function(fn(Point) -> f64),
}

impl SpatialField {
    pub fn value(&self, label: u16, x: Point) -> f64 {
        match self {
            SpatialField::Constant(c) => *c,
            SpatialField::PerLabel(v) => v.get(label as usize).copied().unwrap_or(0.0),
            SpatialField::Function(f) => f(x),
        }
    }

    fn is_elementwise_constant(&self) -> bool {
        !matches!(self, SpatialField::Function(_))
    }
}

/// `a(y, x) = a_0(x) + sum_n a_n(x) s y_n`, each field constant per label,
/// with `s` the scaling from the reference box `[-1,1]^N` to the parameter range.
#[derive(Clone, Debug)]
pub struct DiffusionCoefficient {
    base: Vec<f64>,
    terms: Vec<Vec<f64>>,
    param_scale: f64,
    min: f64,
    max: f64,
}

impl DiffusionCoefficient {
    /// Checks uniform ellipticity on all `2^N` corners of the parameter box;
    /// affinity in `y` makes the corners extremal.
    pub fn new(base: Vec<f64>, terms: Vec<Vec<f64>>, param_scale: f64) -> Result<Self> {
        for t in &terms {
            if t.len() != base.len() {
                return Err(Error::DimensionMismatch {
                    expected: base.len(),
                    found: t.len(),
                });
            }
        }
        let n = terms.len();
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for mask in 0u64..(1u64 << n) {
            let corner: Vec<f64> = (0..n).map(|k| if mask & (1 << k) != 0 { 1.0 } else { -1.0 }).collect();
            for label in 0..base.len() {
                let v = base[label]
                    + terms
                        .iter()
                        .zip(&corner)
                        .map(|(t, y)| t[label] * param_scale * y)
                        .sum::<f64>();
                if v <= 0.0 {
                    return Err(Error::EllipticityViolated { min: v, corner });
                }
                min = min.min(v);
                max = max.max(v);
            }
        }
        Ok(Self {
            base,
            terms,
            param_scale,
            min,
            max,
        })
    }

    pub fn constant(value: f64) -> Result<Self> {
        Self::new(vec![value], vec![], 1.0)
    }

    pub fn n_params(&self) -> usize {
        self.terms.len()
    }

    pub fn n_labels(&self) -> usize {
        self.base.len()
    }

    /// `(a_min, a_max)` over the parameter box.
    pub fn bounds(&self) -> (f64, f64) {
        (self.min, self.max)
    }

    pub fn value(&self, label: u16, y: &[f64]) -> f64 {
        let l = (label as usize).min(self.base.len() - 1);
        let mut v = self.base[l];
        for (t, yn) in self.terms.iter().zip(y) {
            v += t[l] * self.param_scale * yn;
        }
        v
    }
}

/// A finite element solution at one parameter value. Nodal values cover all
/// vertices; boundary entries are exactly zero.
#[derive(Clone, Debug, PartialEq)]
pub struct FESolution {
    pub values: Vec<f64>,
    pub y: Vec<f64>,
}

impl FESolution {
    pub fn zero(mesh: &Triangulation, y: &[f64]) -> Self {
        Self {
            values: vec![0.0; mesh.n_vertices()],
            y: y.to_vec(),
        }
    }

    fn check(&self, mesh: &Triangulation) -> Result<()> {
        if self.values.len() != mesh.n_vertices() {
            return Err(Error::MismatchedSolution(format!(
                "{} values for {} vertices",
                self.values.len(),
                mesh.n_vertices()
            )));
        }
        Ok(())
    }
}

/// Degree-5 seven-point rule: barycentric coordinates and weights (sum 1).
const QUAD7: [([f64; 3], f64); 7] = {
    const A1: f64 = 0.059_715_871_789_769_82;
    const B1: f64 = 0.470_142_064_105_115_1;
    const A2: f64 = 0.797_426_985_353_087_3;
    const B2: f64 = 0.101_286_507_323_456_34;
    const W1: f64 = 0.132_394_152_788_506_18;
    const W2: f64 = 0.125_939_180_544_827_15;
    [
        ([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 0.225),
        ([A1, B1, B1], W1),
        ([B1, A1, B1], W1),
        ([B1, B1, A1], W1),
        ([A2, B2, B2], W2),
        ([B2, A2, B2], W2),
        ([B2, B2, A2], W2),
    ]
};

fn bary_point(c: &[Point; 3], l: &[f64; 3]) -> Point {
    [
        l[0] * c[0][0] + l[1] * c[1][0] + l[2] * c[2][0],
        l[0] * c[0][1] + l[1] * c[1][1] + l[2] * c[2][1],
    ]
}

/// Gradients of the three barycentric coordinates and the area.
fn shape_gradients(c: &[Point; 3]) -> ([[f64; 2]; 3], f64) {
    let area = 0.5 * ((c[1][0] - c[0][0]) * (c[2][1] - c[0][1]) - (c[2][0] - c[0][0]) * (c[1][1] - c[0][1]));
    let inv = 1.0 / (2.0 * area);
    let mut g = [[0.0; 2]; 3];
    for k in 0..3 {
        let (p, q) = (c[(k + 1) % 3], c[(k + 2) % 3]);
        g[k] = [(p[1] - q[1]) * inv, (q[0] - p[0]) * inv];
    }
    (g, area)
}

/// `∫_T f λ_k` for the three vertices of `T`.
fn element_load(f: &SpatialField, label: u16, c: &[Point; 3], area: f64) -> [f64; 3] {
    if f.is_elementwise_constant() {
        let v = f.value(label, c[0]) * area / 3.0;
        return [v; 3];
    }
    let mut out = [0.0; 3];
    for (l, w) in QUAD7 {
        let fx = f.value(label, bary_point(c, &l));
        for k in 0..3 {
            out[k] += w * area * fx * l[k];
        }
    }
    out
}

/// Compressed sparse row matrix.
#[derive(Clone, Debug)]
pub struct CsrMatrix {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<u32>,
    pub vals: Vec<f64>,
}

impl CsrMatrix {
    pub fn mul(&self, x: &[f64], out: &mut [f64]) {
        for i in 0..self.n {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.vals[k] * x[self.cols[k] as usize];
            }
            out[i] = s;
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[range.clone()].binary_search(&(j as u32)) {
            Ok(k) => self.vals[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }
}

/// Assembled Dirichlet system on the free (interior) vertices.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    /// vertex id of every unknown
    pub free: Vec<usize>,
}

pub fn assemble(mesh: &Triangulation, a: &DiffusionCoefficient, y: &[f64], f: &SpatialField) -> Result<LinearSystem> {
    if mesh.n_triangles() == 0 {
        return Err(Error::EmptyMesh);
    }
    let on_boundary = mesh.boundary_vertex_flags();
    let mut dof = vec![u32::MAX; mesh.n_vertices()];
    let mut free = Vec::new();
    for (v, &b) in on_boundary.iter().enumerate() {
        if !b {
            dof[v] = free.len() as u32;
            free.push(v);
        }
    }
    let n = free.len();
    let mut rows: Vec<Vec<(u32, f64)>> = vec![Vec::with_capacity(7); n];
    let mut rhs = vec![0.0; n];
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let c = mesh.corners(t);
        let label = mesh.labels()[t];
        let (g, area) = shape_gradients(&c);
        let coef = a.value(label, y) * area;
        let load = element_load(f, label, &c, area);
        for k in 0..3 {
            let dk = dof[tri[k] as usize];
            if dk == u32::MAX {
                continue;
            }
            rhs[dk as usize] += load[k];
            for l in 0..3 {
                let dl = dof[tri[l] as usize];
                if dl == u32::MAX {
                    continue;
                }
                rows[dk as usize].push((dl, coef * (g[k][0] * g[l][0] + g[k][1] * g[l][1])));
            }
        }
    }
    let mut row_ptr = Vec::with_capacity(n + 1);
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    row_ptr.push(0);
    for mut row in rows {
        row.sort_by_key(|e| e.0);
        let mut last = u32::MAX;
        for (c, v) in row {
            if c == last {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                vals.push(v);
                last = c;
            }
        }
        row_ptr.push(cols.len());
    }
    Ok(LinearSystem {
        matrix: CsrMatrix { n, row_ptr, cols, vals },
        rhs,
        free,
    })
}

/// Jacobi-preconditioned conjugate gradients to `‖b - Ax‖ <= tol ‖b‖`.
pub fn pcg(matrix: &CsrMatrix, b: &[f64], x: &mut [f64], tol: f64) -> Result<usize> {
    let n = matrix.n;
    let bnorm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(0);
    }
    let diag = matrix.diagonal();
    if diag.iter().any(|&d| d <= 0.0) {
        return Err(Error::Solver("non-positive diagonal entry".into()));
    }
    let mut r = vec![0.0; n];
    matrix.mul(x, &mut r);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    let mut z: Vec<f64> = r.iter().zip(&diag).map(|(r, d)| r / d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let max_iter = 10 * n + 100;
    for it in 0..max_iter {
        let rnorm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if rnorm <= tol * bnorm {
            return Ok(it);
        }
        matrix.mul(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if pap <= 0.0 || !pap.is_finite() {
            return Err(Error::Solver("matrix is not positive definite".into()));
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for i in 0..n {
            z[i] = r[i] / diag[i];
        }
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::Solver(format!("no convergence in {max_iter} iterations")))
}

pub const SOLVER_TOLERANCE: f64 = 1e-10;

/// Solves the discrete problem at parameter `y`.
pub fn assemble_and_solve(
    mesh: &Triangulation,
    a: &DiffusionCoefficient,
    y: &[f64],
    f: &SpatialField,
) -> Result<FESolution> {
    solve_with_guess(mesh, a, y, f, None)
}

/// As [`assemble_and_solve`], starting the iteration from `guess` (nodal values).
pub fn solve_with_guess(
    mesh: &Triangulation,
    a: &DiffusionCoefficient,
    y: &[f64],
    f: &SpatialField,
    guess: Option<&[f64]>,
) -> Result<FESolution> {
    let sys = assemble(mesh, a, y, f)?;
    if sys.free.is_empty() {
        return Err(Error::Solver("no interior vertices".into()));
    }
    let mut x: Vec<f64> = match guess {
        Some(g) if g.len() == mesh.n_vertices() => sys.free.iter().map(|&v| g[v]).collect(),
        _ => vec![0.0; sys.free.len()],
    };
    pcg(&sys.matrix, &sys.rhs, &mut x, SOLVER_TOLERANCE)?;
    let mut values = vec![0.0; mesh.n_vertices()];
    for (k, &v) in sys.free.iter().enumerate() {
        values[v] = x[k];
    }
    Ok(FESolution { values, y: y.to_vec() })
}

/// Constant gradient of the discrete solution on every triangle.
pub fn element_gradients(mesh: &Triangulation, values: &[f64]) -> Vec<[f64; 2]> {
    mesh.triangles()
        .iter()
        .enumerate()
        .map(|(t, tri)| {
            let (g, _) = shape_gradients(&mesh.corners(t));
            let mut out = [0.0; 2];
            for k in 0..3 {
                let u = values[tri[k] as usize];
                out[0] += u * g[k][0];
                out[1] += u * g[k][1];
            }
            out
        })
        .collect()
}

/// Element residual indicators `η²_T` and their root sum `η`.
#[derive(Clone, Debug)]
pub struct ResidualIndicators {
    pub per_element: Vec<f64>,
    pub total: f64,
}

/// `η²_T = h_T² ‖f + div(a grad U)‖²_T + sum_{e ⊂ ∂T interior} h_e ‖½[a grad U · n]‖²_e`.
///
/// The coefficient is constant on every element, so the divergence term
/// vanishes inside elements.
pub fn residual_estimator(
    mesh: &Triangulation,
    sol: &FESolution,
    a: &DiffusionCoefficient,
    f: &SpatialField,
) -> Result<ResidualIndicators> {
    sol.check(mesh)?;
    let grads = element_gradients(mesh, &sol.values);
    let flux: Vec<[f64; 2]> = grads
        .iter()
        .zip(mesh.labels())
        .map(|(g, &l)| {
            let av = a.value(l, &sol.y);
            [av * g[0], av * g[1]]
        })
        .collect();
    let mut eta2 = vec![0.0; mesh.n_triangles()];
    for (t, e2) in eta2.iter_mut().enumerate() {
        let c = mesh.corners(t);
        let label = mesh.labels()[t];
        let area = mesh.area(t);
        let f2 = if f.is_elementwise_constant() {
            f.value(label, c[0]).powi(2) * area
        } else {
            QUAD7
                .iter()
                .map(|(l, w)| w * f.value(label, bary_point(&c, l)).powi(2))
                .sum::<f64>()
                * area
        };
        let h = mesh.element_diameter(t)?;
        *e2 = h * h * f2;
    }
    let table = EdgeTable::new(mesh);
    let verts = mesh.vertices();
    for (e, adj) in table.adjacent.iter().enumerate() {
        let (Some(t1), Some(t2)) = (adj[0], adj[1]) else {
            continue;
        };
        let [a_id, b_id] = table.edges[e];
        let (p, q) = (verts[a_id as usize], verts[b_id as usize]);
        let he = (q[0] - p[0]).hypot(q[1] - p[1]);
        let n = [(q[1] - p[1]) / he, -(q[0] - p[0]) / he];
        let (s1, s2) = (flux[t1 as usize], flux[t2 as usize]);
        let jump = (s1[0] - s2[0]) * n[0] + (s1[1] - s2[1]) * n[1];
        let contrib = he * he * 0.25 * jump * jump;
        eta2[t1 as usize] += contrib;
        eta2[t2 as usize] += contrib;
    }
    let total = eta2.iter().sum::<f64>().sqrt();
    Ok(ResidualIndicators {
        per_element: eta2,
        total,
    })
}

/// Gradient of the solution at each point. Points on shared edges take the
/// lowest-numbered containing triangle.
pub fn gradient_at_points(mesh: &Triangulation, sol: &FESolution, points: &[Point]) -> Result<Vec<[f64; 2]>> {
    sol.check(mesh)?;
    let locator = PointLocator::new(mesh);
    let tris = mesh.triangles();
    points
        .iter()
        .map(|&p| {
            let t = locator.locate(p).ok_or(Error::PointOutsideDomain(p[0], p[1]))?;
            let (g, _) = shape_gradients(&mesh.corners(t));
            let tri = tris[t];
            let mut out = [0.0; 2];
            for k in 0..3 {
                let u = sol.values[tri[k] as usize];
                out[0] += u * g[k][0];
                out[1] += u * g[k][1];
            }
            Ok(out)
        })
        .collect()
}

/// Nodal interpolant of a function, zero on the Dirichlet boundary.
pub fn interpolate_nodal(mesh: &Triangulation, u: impl Fn(Point) -> f64) -> Vec<f64> {
    let on_boundary = mesh.boundary_vertex_flags();
    mesh.vertices()
        .iter()
        .zip(on_boundary)
        .map(|(&p, b)| if b { 0.0 } else { u(p) })
        .collect()
}

/// `‖u - U‖_{L²}` by seven-point quadrature.
pub fn l2_error(mesh: &Triangulation, values: &[f64], exact: impl Fn(Point) -> f64) -> f64 {
    let tris = mesh.triangles();
    let mut acc = 0.0;
    for (t, tri) in tris.iter().enumerate() {
        let c = mesh.corners(t);
        let area = mesh.area(t);
        for (l, w) in QUAD7 {
            let uh = l[0] * values[tri[0] as usize] + l[1] * values[tri[1] as usize] + l[2] * values[tri[2] as usize];
            acc += w * area * (exact(bary_point(&c, &l)) - uh).powi(2);
        }
    }
    acc.sqrt()
}

/// `‖grad(u - U)‖_{L²}` by seven-point quadrature.
pub fn h1_seminorm_error(mesh: &Triangulation, values: &[f64], exact_grad: impl Fn(Point) -> [f64; 2]) -> f64 {
    let grads = element_gradients(mesh, values);
    let mut acc = 0.0;
    for (t, g) in grads.iter().enumerate() {
        let c = mesh.corners(t);
        let area = mesh.area(t);
        for (l, w) in QUAD7 {
            let e = exact_grad(bary_point(&c, &l));
            acc += w * area * ((e[0] - g[0]).powi(2) + (e[1] - g[1]).powi(2));
        }
    }
    acc.sqrt()
}

/// Number of free vertices.
pub fn dof_count(mesh: &Triangulation) -> usize {
    mesh.boundary_vertex_flags().iter().filter(|&&b| !b).count()
}
