//! Conforming triangulations with newest-vertex bisection.
//!
//! Every triangle is stored as an ordered vertex triple `[v0, v1, v2]` with
//! positive orientation. The edge `(v0, v1)` opposite the newest vertex `v2`
//! is the refinement edge.

use std::collections::HashMap;
use std::io::Write;

use crate::error::{Error, Result};

pub type Point = [f64; 2];

#[derive(Clone, Debug, PartialEq)]
pub struct Triangulation {
    vertices: Vec<Point>,
    triangles: Vec<[u32; 3]>,
    labels: Vec<u16>,
    /// Dirichlet boundary edges.
    boundary: Vec<[u32; 2]>,
}

/// Result of a refinement: the new mesh and the parent of every new triangle.
#[derive(Clone, Debug)]
pub struct Refined {
    pub mesh: Triangulation,
    pub parent: Vec<usize>,
    /// endpoints of the bisected edge for every appended vertex, in order
    pub new_vertex_edges: Vec<[u32; 2]>,
}

impl Refined {
    /// Linear interpolation of nodal values onto the refined mesh.
    pub fn prolongate(&self, values: &[f64]) -> Vec<f64> {
        let mut out = values.to_vec();
        for [a, b] in &self.new_vertex_edges {
            out.push(0.5 * (out[*a as usize] + out[*b as usize]));
        }
        out
    }
}

fn signed_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

fn dist2(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

fn edge_key(a: u32, b: u32) -> (u32, u32) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Unique edges with their incident triangles.
#[derive(Clone, Debug)]
pub struct EdgeTable {
    /// endpoints, smaller id first
    pub edges: Vec<[u32; 2]>,
    /// `tri_edges[t][k]` is the edge between local vertices `k` and `k+1`
    pub tri_edges: Vec<[u32; 3]>,
    /// incident triangles; the second is `None` on the boundary
    pub adjacent: Vec<[Option<u32>; 2]>,
    lookup: HashMap<(u32, u32), u32>,
}

impl EdgeTable {
    pub fn new(mesh: &Triangulation) -> Self {
        let mut lookup = HashMap::with_capacity(mesh.triangles.len() * 2);
        let mut edges = Vec::new();
        let mut adjacent: Vec<[Option<u32>; 2]> = Vec::new();
        let mut tri_edges = Vec::with_capacity(mesh.triangles.len());
        for (t, tri) in mesh.triangles.iter().enumerate() {
            let mut te = [0u32; 3];
            for k in 0..3 {
                let key = edge_key(tri[k], tri[(k + 1) % 3]);
                let id = *lookup.entry(key).or_insert_with(|| {
                    edges.push([key.0, key.1]);
                    adjacent.push([None, None]);
                    (edges.len() - 1) as u32
                });
                let adj = &mut adjacent[id as usize];
                if adj[0].is_none() {
                    adj[0] = Some(t as u32);
                } else {
                    adj[1] = Some(t as u32);
                }
                te[k] = id;
            }
            tri_edges.push(te);
        }
        Self {
            edges,
            tri_edges,
            adjacent,
            lookup,
        }
    }

    pub fn find(&self, a: u32, b: u32) -> Option<u32> {
        self.lookup.get(&edge_key(a, b)).copied()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

impl Triangulation {
    /// Builds a mesh, orienting triangles counterclockwise and choosing the
    /// longest edge as refinement edge (ties: smallest opposite vertex id).
    pub fn new(
        vertices: Vec<Point>,
        triangles: Vec<[u32; 3]>,
        labels: Vec<u16>,
        boundary: Vec<[u32; 2]>,
    ) -> Result<Self> {
        if triangles.is_empty() {
            return Err(Error::EmptyMesh);
        }
        if labels.len() != triangles.len() {
            return Err(Error::InvalidProblem("one label per triangle required".into()));
        }
        let nv = vertices.len();
        let mut oriented = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            if tri.iter().any(|&v| v as usize >= nv) {
                return Err(Error::InvalidId {
                    kind: "triangle",
                    id: t,
                });
            }
            let [a, b, c] = *tri;
            let mut tri = if signed_area(vertices[a as usize], vertices[b as usize], vertices[c as usize]) < 0.0 {
                [a, c, b]
            } else {
                [a, b, c]
            };
            // choose the refinement edge: position k means edge (tri[k], tri[k+1])
            let mut best = 0;
            let mut best_len = -1.0;
            let mut best_opp = u32::MAX;
            for k in 0..3 {
                let len = dist2(vertices[tri[k] as usize], vertices[tri[(k + 1) % 3] as usize]);
                let opp = tri[(k + 2) % 3];
                if len > best_len || (len == best_len && opp < best_opp) {
                    best = k;
                    best_len = len;
                    best_opp = opp;
                }
            }
            tri.rotate_left(best);
            oriented.push(tri);
        }
        Ok(Self {
            vertices,
            triangles: oriented,
            labels,
            boundary,
        })
    }

    /// Structured mesh of `[0,1]^2`: `divisions^2` squares cut along the
    /// diagonal through their lower-left corner.
    pub fn unit_square(divisions: usize) -> Self {
        let n = divisions.max(1);
        let idx = |i: usize, j: usize| (j * (n + 1) + i) as u32;
        let h = 1.0 / n as f64;
        let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
        for j in 0..=n {
            for i in 0..=n {
                vertices.push([i as f64 * h, j as f64 * h]);
            }
        }
        let mut triangles = Vec::with_capacity(2 * n * n);
        for j in 0..n {
            for i in 0..n {
                let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
                triangles.push([a, b, c]);
                triangles.push([a, c, d]);
            }
        }
        let mut boundary = Vec::with_capacity(4 * n);
        for i in 0..n {
            boundary.push([idx(i, 0), idx(i + 1, 0)]);
            boundary.push([idx(n, i), idx(n, i + 1)]);
            boundary.push([idx(i + 1, n), idx(i, n)]);
            boundary.push([idx(0, i + 1), idx(0, i)]);
        }
        let labels = vec![0; triangles.len()];
        Self::new(vertices, triangles, labels, boundary).expect("structured mesh is valid")
    }

    /// Relabels every triangle by classifying its centroid.
    pub fn with_labels(mut self, classify: impl Fn(Point) -> u16) -> Self {
        for t in 0..self.triangles.len() {
            self.labels[t] = classify(self.centroid(t));
        }
        self
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[u32; 3]] {
        &self.triangles
    }

    pub fn labels(&self) -> &[u16] {
        &self.labels
    }

    pub fn boundary_edges(&self) -> &[[u32; 2]] {
        &self.boundary
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn corners(&self, t: usize) -> [Point; 3] {
        let tri = self.triangles[t];
        [
            self.vertices[tri[0] as usize],
            self.vertices[tri[1] as usize],
            self.vertices[tri[2] as usize],
        ]
    }

    pub fn centroid(&self, t: usize) -> Point {
        let [a, b, c] = self.corners(t);
        [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]
    }

    pub fn area(&self, t: usize) -> f64 {
        let [a, b, c] = self.corners(t);
        signed_area(a, b, c)
    }

    pub fn total_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.area(t)).sum()
    }

    /// Longest edge length `h_T`.
    pub fn element_diameter(&self, t: usize) -> Result<f64> {
        if t >= self.triangles.len() {
            return Err(Error::InvalidId {
                kind: "triangle",
                id: t,
            });
        }
        let [a, b, c] = self.corners(t);
        Ok(dist2(a, b).max(dist2(b, c)).max(dist2(c, a)).sqrt())
    }

    /// Length `h_e` of the edge between two vertices.
    pub fn edge_length(&self, a: usize, b: usize) -> Result<f64> {
        let nv = self.vertices.len();
        if a >= nv {
            return Err(Error::InvalidId { kind: "vertex", id: a });
        }
        if b >= nv {
            return Err(Error::InvalidId { kind: "vertex", id: b });
        }
        Ok(dist2(self.vertices[a], self.vertices[b]).sqrt())
    }

    pub fn boundary_vertex_flags(&self) -> Vec<bool> {
        let mut flags = vec![false; self.vertices.len()];
        for e in &self.boundary {
            flags[e[0] as usize] = true;
            flags[e[1] as usize] = true;
        }
        flags
    }

    /// Interior angles of every triangle, in radians.
    pub fn angles(&self, t: usize) -> [f64; 3] {
        let p = self.corners(t);
        let mut out = [0.0; 3];
        for k in 0..3 {
            let (a, b, c) = (p[k], p[(k + 1) % 3], p[(k + 2) % 3]);
            let u = [b[0] - a[0], b[1] - a[1]];
            let v = [c[0] - a[0], c[1] - a[1]];
            let cos = (u[0] * v[0] + u[1] * v[1]) / ((u[0].hypot(u[1])) * (v[0].hypot(v[1])));
            out[k] = cos.clamp(-1.0, 1.0).acos();
        }
        out
    }

    pub fn min_angle(&self) -> f64 {
        (0..self.triangles.len())
            .flat_map(|t| self.angles(t))
            .fold(f64::INFINITY, f64::min)
    }

    /// Every interior edge has two incident triangles, and every edge with a
    /// single incident triangle is a registered boundary edge.
    pub fn is_conforming(&self) -> bool {
        let table = EdgeTable::new(self);
        let mut on_boundary = vec![false; table.len()];
        for e in &self.boundary {
            match table.find(e[0], e[1]) {
                Some(id) => on_boundary[id as usize] = true,
                None => return false,
            }
        }
        table.adjacent.iter().zip(&on_boundary).all(|(adj, &b)| {
            let count = adj.iter().flatten().count();
            if b {
                count == 1
            } else {
                count == 2
            }
        })
    }

    /// Newest-vertex bisection of the marked triangles plus closure.
    pub fn refine_nvb(&self, marked: &[usize]) -> Result<Refined> {
        if self.triangles.is_empty() {
            return Err(Error::EmptyMesh);
        }
        let table = EdgeTable::new(self);
        let mut edge_marked = vec![false; table.len()];
        let mut stack = Vec::new();
        for &t in marked {
            if t >= self.triangles.len() {
                return Err(Error::InvalidId {
                    kind: "triangle",
                    id: t,
                });
            }
            let e = table.tri_edges[t][0] as usize;
            if !edge_marked[e] {
                edge_marked[e] = true;
                stack.push(e);
            }
        }
        // closure: a triangle with any marked edge must bisect its refinement edge
        while let Some(e) = stack.pop() {
            for t in table.adjacent[e].iter().flatten() {
                let r = table.tri_edges[*t as usize][0] as usize;
                if !edge_marked[r] {
                    edge_marked[r] = true;
                    stack.push(r);
                }
            }
        }

        let mut vertices = self.vertices.clone();
        let mut midpoint = vec![u32::MAX; table.len()];
        let mut new_vertex_edges = Vec::new();
        for (e, &m) in edge_marked.iter().enumerate() {
            if m {
                let [a, b] = table.edges[e];
                new_vertex_edges.push([a, b]);
                let (pa, pb) = (self.vertices[a as usize], self.vertices[b as usize]);
                midpoint[e] = vertices.len() as u32;
                vertices.push([0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])]);
            }
        }
        let mid_of = |a: u32, b: u32| -> Option<u32> {
            let e = table.find(a, b)? as usize;
            edge_marked[e].then(|| midpoint[e])
        };

        fn bisect(tri: [u32; 3], mid_of: &dyn Fn(u32, u32) -> Option<u32>, out: &mut Vec<[u32; 3]>) {
            match mid_of(tri[0], tri[1]) {
                Some(m) => {
                    bisect([tri[2], tri[0], m], mid_of, out);
                    bisect([tri[1], tri[2], m], mid_of, out);
                }
                None => out.push(tri),
            }
        }

        let mut triangles = Vec::with_capacity(self.triangles.len() + 2 * marked.len());
        let mut labels = Vec::with_capacity(triangles.capacity());
        let mut parent = Vec::with_capacity(triangles.capacity());
        let mut scratch = Vec::with_capacity(4);
        for (t, &tri) in self.triangles.iter().enumerate() {
            scratch.clear();
            bisect(tri, &mid_of, &mut scratch);
            for &child in &scratch {
                triangles.push(child);
                labels.push(self.labels[t]);
                parent.push(t);
            }
        }
        let mut boundary = Vec::with_capacity(self.boundary.len());
        for &[a, b] in &self.boundary {
            match mid_of(a, b) {
                Some(m) => {
                    boundary.push([a, m]);
                    boundary.push([m, b]);
                }
                None => boundary.push([a, b]),
            }
        }
        Ok(Refined {
            mesh: Triangulation {
                vertices,
                triangles,
                labels,
                boundary,
            },
            parent,
            new_vertex_edges,
        })
    }

    /// Bisects every triangle `generations` times.
    pub fn refine_uniform(&self, generations: usize) -> Result<Triangulation> {
        let mut mesh = self.clone();
        for _ in 0..generations {
            let all: Vec<usize> = (0..mesh.n_triangles()).collect();
            mesh = mesh.refine_nvb(&all)?.mesh;
        }
        Ok(mesh)
    }

    /// Writes `vertices <n> triangles <m>`, then `x y` lines, then
    /// `v1 v2 v3 label` lines.
    pub fn write_snapshot<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "vertices {} triangles {}", self.vertices.len(), self.triangles.len())?;
        for p in &self.vertices {
            writeln!(w, "{} {}", p[0], p[1])?;
        }
        for (tri, label) in self.triangles.iter().zip(&self.labels) {
            writeln!(w, "{} {} {} {}", tri[0], tri[1], tri[2], label)?;
        }
        Ok(())
    }
}

/// Bucket grid for point location.
pub struct PointLocator<'a> {
    mesh: &'a Triangulation,
    origin: Point,
    cell: [f64; 2],
    dims: [usize; 2],
    buckets: Vec<Vec<u32>>,
}

impl<'a> PointLocator<'a> {
    pub fn new(mesh: &'a Triangulation) -> Self {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in &mesh.vertices {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let side = ((mesh.triangles.len() as f64).sqrt().ceil() as usize).max(1);
        let dims = [side, side];
        let cell = [
            ((hi[0] - lo[0]) / side as f64).max(f64::MIN_POSITIVE),
            ((hi[1] - lo[1]) / side as f64).max(f64::MIN_POSITIVE),
        ];
        let mut loc = Self {
            mesh,
            origin: lo,
            cell,
            dims,
            buckets: vec![Vec::new(); side * side],
        };
        for t in 0..mesh.triangles.len() {
            let c = mesh.corners(t);
            let (mut bl, mut bh) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
            for p in c {
                for k in 0..2 {
                    bl[k] = bl[k].min(p[k]);
                    bh[k] = bh[k].max(p[k]);
                }
            }
            let (i0, j0) = loc.cell_of(bl);
            let (i1, j1) = loc.cell_of(bh);
            for j in j0..=j1 {
                for i in i0..=i1 {
                    loc.buckets[j * dims[0] + i].push(t as u32);
                }
            }
        }
        loc
    }

    fn cell_of(&self, p: Point) -> (usize, usize) {
        let f = |k: usize| {
            let x = ((p[k] - self.origin[k]) / self.cell[k]).floor();
            (x.max(0.0) as usize).min(self.dims[k] - 1)
        };
        (f(0), f(1))
    }

    /// Triangle containing `p`; on shared edges the lowest id wins.
    pub fn locate(&self, p: Point) -> Option<usize> {
        let (i, j) = self.cell_of(p);
        const TOL: f64 = 1e-12;
        self.buckets[j * self.dims[0] + i]
            .iter()
            .map(|&t| t as usize)
            .find(|&t| {
                let [a, b, c] = self.mesh.corners(t);
                let area = signed_area(a, b, c);
                let l0 = signed_area(p, b, c) / area;
                let l1 = signed_area(a, p, c) / area;
                let l2 = signed_area(a, b, p) / area;
                l0 >= -TOL && l1 >= -TOL && l2 >= -TOL
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_counts() {
        let m = Triangulation::unit_square(1);
        assert_eq!((m.n_triangles(), m.n_vertices()), (2, 4));
        let m = Triangulation::unit_square(2);
        assert_eq!((m.n_triangles(), m.n_vertices()), (8, 9));
        let m = Triangulation::unit_square(32);
        assert_eq!((m.n_triangles(), m.n_vertices()), (2048, 1089));
        assert!(m.is_conforming());
        assert!((0..m.n_triangles()).all(|t| m.area(t) > 0.0));
        assert_eq!(m.boundary_edges().len(), 128);
    }

    #[test]
    fn refinement_edge_is_longest() {
        let m = Triangulation::unit_square(3);
        for t in 0..m.n_triangles() {
            let tri = m.triangles()[t];
            let h = m.edge_length(tri[0] as usize, tri[1] as usize).unwrap();
            assert_eq!(h, m.element_diameter(t).unwrap());
        }
    }

    #[test]
    fn empty_marking_is_identity() {
        let m = Triangulation::unit_square(2);
        let r = m.refine_nvb(&[]).unwrap();
        assert_eq!(r.mesh, m);
        assert_eq!(r.parent, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn refine_all_of_two_triangle_square() {
        let m = Triangulation::unit_square(1);
        let r = m.refine_nvb(&[0, 1]).unwrap();
        assert!(r.mesh.n_triangles() >= 4);
        assert!(r.mesh.is_conforming());
        assert!((r.mesh.total_area() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn single_mark_triggers_closure() {
        let m = Triangulation::unit_square(4);
        let mut mesh = m.clone();
        for step in 0..6 {
            let t = (step * 7) % mesh.n_triangles();
            mesh = mesh.refine_nvb(&[t]).unwrap().mesh;
            assert!(mesh.is_conforming(), "step {step}");
            assert!((mesh.total_area() - 1.0).abs() < 1e-13);
        }
        assert!(mesh.n_triangles() > m.n_triangles());
    }

    #[test]
    fn diameter_and_edge_length() {
        let m = Triangulation::new(
            vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            vec![[0, 1, 2]],
            vec![0],
            vec![[0, 1], [1, 2], [2, 0]],
        )
        .unwrap();
        assert!((m.element_diameter(0).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        let r = m.refine_nvb(&[0]).unwrap().mesh;
        assert_eq!(r.n_triangles(), 2);
        for t in 0..2 {
            assert!((r.element_diameter(t).unwrap() - 1.0).abs() < 1e-15);
        }
        let e = Triangulation::new(
            vec![[0.0, 0.0], [0.5, 0.0], [0.0, 1.0]],
            vec![[0, 1, 2]],
            vec![0],
            vec![],
        )
        .unwrap();
        assert_eq!(e.edge_length(0, 1).unwrap(), 0.5);
        assert!(e.element_diameter(3).is_err());
        assert!(e.edge_length(0, 9).is_err());
    }

    #[test]
    fn labels_inherited() {
        let m = Triangulation::unit_square(4).with_labels(|c| if c[0] < 0.5 { 1 } else { 2 });
        let r = m.refine_nvb(&[0, 5, 9]).unwrap();
        for (t, &p) in r.parent.iter().enumerate() {
            assert_eq!(r.mesh.labels()[t], m.labels()[p]);
        }
    }

    #[test]
    fn locator_finds_containing_triangle() {
        let m = Triangulation::unit_square(8).refine_nvb(&[3, 17, 40]).unwrap().mesh;
        let loc = PointLocator::new(&m);
        for p in [[0.01, 0.02], [0.5, 0.5], [0.999, 0.3], [0.33, 0.77]] {
            let t = loc.locate(p).unwrap();
            let [a, b, c] = m.corners(t);
            assert!(signed_area(p, b, c) >= -1e-14 && signed_area(a, p, c) >= -1e-14 && signed_area(a, b, p) >= -1e-14);
        }
        assert!(loc.locate([1.5, 0.5]).is_none());
    }

    #[test]
    fn snapshot_format() {
        let m = Triangulation::unit_square(1);
        let mut buf = Vec::new();
        m.write_snapshot(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "vertices 4 triangles 2");
        assert_eq!(lines.len(), 1 + 4 + 2);
        assert_eq!(lines[5].split_whitespace().count(), 4);
    }
}
