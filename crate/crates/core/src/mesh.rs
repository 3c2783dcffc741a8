//! Conforming simplicial meshes (intervals in 1D, triangles in 2D) and their
//! facet skeletons.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Physical point; only the first `dim` coordinates are meaningful.
pub type Point = [f64; 2];

/// Description of a built-in domain and its triangulation.
#[derive(Clone, Debug, PartialEq)]
pub enum MeshSpec {
    /// `[a, b]` split into `n` equal elements.
    Interval { a: f64, b: f64, n: usize },
    /// `[x0, x1] x [y0, y1]` with `nx * ny` cells, each cut into four
    /// triangles through its centre (criss-cross).
    Rectangle {
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
        nx: usize,
        ny: usize,
    },
    /// Polygonal approximation of the disk of given radius, built from
    /// `rings` concentric rings of triangles (ring `i` carries `6 i` vertices).
    Disk { radius: f64, rings: usize },
}

impl MeshSpec {
    pub fn dim(&self) -> usize {
        match self {
            MeshSpec::Interval { .. } => 1,
            _ => 2,
        }
    }

    /// Measure of the polygonal domain the triangulation covers.
    pub fn domain_measure(&self) -> f64 {
        match *self {
            MeshSpec::Interval { a, b, .. } => b - a,
            MeshSpec::Rectangle { x0, x1, y0, y1, .. } => (x1 - x0) * (y1 - y0),
            MeshSpec::Disk { radius, rings } => {
                let n = (6 * rings) as f64;
                0.5 * n * radius * radius * (2.0 * PI / n).sin()
            }
        }
    }

    /// Measure of the domain boundary (point count in 1D).
    pub fn boundary_measure(&self) -> f64 {
        match *self {
            MeshSpec::Interval { .. } => 2.0,
            MeshSpec::Rectangle { x0, x1, y0, y1, .. } => 2.0 * ((x1 - x0) + (y1 - y0)),
            MeshSpec::Disk { radius, rings } => {
                let n = (6 * rings) as f64;
                n * 2.0 * radius * (PI / n).sin()
            }
        }
    }
}

impl fmt::Display for MeshSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeshSpec::Interval { a, b, n } => write!(f, "interval {a} {b} {n}"),
            MeshSpec::Rectangle {
                x0,
                x1,
                y0,
                y1,
                nx,
                ny,
            } => write!(f, "rectangle {x0} {x1} {y0} {y1} {nx} {ny}"),
            MeshSpec::Disk { radius, rings } => write!(f, "disk {radius} {rings}"),
        }
    }
}

impl FromStr for MeshSpec {
    type Err = String;

    /// Parses `interval a b n`, `rectangle x0 x1 y0 y1 nx ny` or `disk r rings`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut parts = s.split_whitespace();
        let kind = parts.next().ok_or("empty mesh description")?;
        let rest: Vec<&str> = parts.collect();
        let real = |i: usize| -> std::result::Result<f64, String> {
            rest.get(i)
                .ok_or_else(|| format!("mesh `{kind}`: missing argument {}", i + 1))?
                .parse::<f64>()
                .map_err(|e| format!("mesh `{kind}`: {e}"))
        };
        let count = |i: usize| -> std::result::Result<usize, String> {
            rest.get(i)
                .ok_or_else(|| format!("mesh `{kind}`: missing argument {}", i + 1))?
                .parse::<usize>()
                .map_err(|e| format!("mesh `{kind}`: {e}"))
        };
        let (spec, arity) = match kind {
            "interval" => (
                MeshSpec::Interval {
                    a: real(0)?,
                    b: real(1)?,
                    n: count(2)?,
                },
                3,
            ),
            "rectangle" => (
                MeshSpec::Rectangle {
                    x0: real(0)?,
                    x1: real(1)?,
                    y0: real(2)?,
                    y1: real(3)?,
                    nx: count(4)?,
                    ny: count(5)?,
                },
                6,
            ),
            "disk" => (
                MeshSpec::Disk {
                    radius: real(0)?,
                    rings: count(1)?,
                },
                2,
            ),
            other => return Err(format!("unknown mesh kind `{other}`")),
        };
        if rest.len() != arity {
            return Err(format!("mesh `{kind}` takes {arity} arguments"));
        }
        Ok(spec)
    }
}

/// A (d-1)-dimensional face of the triangulation.
#[derive(Clone, Debug)]
pub struct Facet {
    /// Vertex indices; one entry in 1D, two in 2D.
    pub vertices: Vec<usize>,
    /// First adjacent element; the stored normal points out of it.
    pub k1: usize,
    /// Second adjacent element for interior facets.
    pub k2: Option<usize>,
    /// Unit normal, outward from `k1`.
    pub normal: Point,
    /// Length in 2D, 1 in 1D.
    pub measure: f64,
}

impl Facet {
    pub fn is_boundary(&self) -> bool {
        self.k2.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct Mesh {
    dim: usize,
    vertices: Vec<Point>,
    elements: Vec<[usize; 3]>,
    facets: Vec<Facet>,
    interior: Vec<usize>,
    boundary: Vec<usize>,
    element_facets: Vec<[usize; 3]>,
    diameters: Vec<f64>,
    volumes: Vec<f64>,
    label: String,
}

impl Mesh {
    /// Builds one of the built-in triangulations.
    pub fn build(spec: &MeshSpec) -> Result<Mesh> {
        let mesh = match *spec {
            MeshSpec::Interval { a, b, n } => {
                if !(a < b) {
                    return Err(Error::InvalidSpec(format!("interval bounds {a} >= {b}")));
                }
                if n == 0 {
                    return Err(Error::InvalidSpec("interval needs at least one element".into()));
                }
                let pts: Vec<f64> = (0..=n)
                    .map(|i| if i == n { b } else { a + (b - a) * i as f64 / n as f64 })
                    .collect();
                Mesh::from_interval_points(&pts)?
            }
            MeshSpec::Rectangle {
                x0,
                x1,
                y0,
                y1,
                nx,
                ny,
            } => {
                if !(x0 < x1) || !(y0 < y1) {
                    return Err(Error::InvalidSpec(format!(
                        "rectangle bounds [{x0},{x1}]x[{y0},{y1}] are degenerate"
                    )));
                }
                if nx == 0 || ny == 0 {
                    return Err(Error::InvalidSpec("rectangle needs at least one cell".into()));
                }
                criss_cross(x0, x1, y0, y1, nx, ny)?
            }
            MeshSpec::Disk { radius, rings } => {
                if !(radius > 0.0) {
                    return Err(Error::InvalidSpec(format!("disk radius {radius} must be positive")));
                }
                if rings == 0 {
                    return Err(Error::InvalidSpec("disk needs at least one ring".into()));
                }
                ring_disk(radius, rings)?
            }
        };
        let mut mesh = mesh;
        mesh.label = spec.to_string();
        let total: f64 = mesh.volumes.iter().sum();
        let expected = spec.domain_measure();
        if ((total - expected) / expected).abs() > 1e-12 {
            return Err(Error::Conformity(format!(
                "element measures sum to {total}, domain measure is {expected}"
            )));
        }
        Ok(mesh)
    }

    /// 1D mesh with the given strictly increasing vertex coordinates.
    pub fn from_interval_points(points: &[f64]) -> Result<Mesh> {
        if points.len() < 2 {
            return Err(Error::InvalidSpec("need at least two points".into()));
        }
        if points.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidSpec("interval points must increase strictly".into()));
        }
        let vertices = points.iter().map(|&x| [x, 0.0]).collect();
        let elements = (0..points.len() - 1).map(|i| [i, i + 1, usize::MAX]).collect();
        Mesh::from_simplices(1, vertices, elements)
    }

    /// Generic constructor from vertex coordinates and simplices. Triangles
    /// are reoriented counter-clockwise; the skeleton is computed and
    /// conformity checked.
    pub fn from_simplices(dim: usize, vertices: Vec<Point>, mut elements: Vec<[usize; 3]>) -> Result<Mesh> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidSpec(format!("dimension {dim} is not supported")));
        }
        let nv = dim + 1;
        let mut volumes = Vec::with_capacity(elements.len());
        let mut diameters = Vec::with_capacity(elements.len());
        for (k, el) in elements.iter_mut().enumerate() {
            if el[..nv].iter().any(|&v| v >= vertices.len()) {
                return Err(Error::InvalidSpec(format!("element {k} references a missing vertex")));
            }
            let vol = signed_volume(dim, &vertices, &el[..nv]);
            if vol < 0.0 {
                el.swap(0, 1);
            }
            let vol = vol.abs();
            if !(vol > 0.0) {
                return Err(Error::InvalidSpec(format!("element {k} is degenerate")));
            }
            volumes.push(vol);
            let mut h: f64 = 0.0;
            for i in 0..nv {
                for j in i + 1..nv {
                    h = h.max(dist(&vertices[el[i]], &vertices[el[j]]));
                }
            }
            diameters.push(h);
        }
        let (facets, element_facets) = compute_skeleton(dim, &vertices, &elements)?;
        let interior = (0..facets.len()).filter(|&f| !facets[f].is_boundary()).collect();
        let boundary = (0..facets.len()).filter(|&f| facets[f].is_boundary()).collect();
        Ok(Mesh {
            dim,
            vertices,
            elements,
            facets,
            interior,
            boundary,
            element_facets,
            diameters,
            volumes,
            label: String::from("custom"),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i]
    }

    /// Vertex indices of element `k` (`dim + 1` entries).
    pub fn element(&self, k: usize) -> &[usize] {
        &self.elements[k][..self.dim + 1]
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn facet(&self, f: usize) -> &Facet {
        &self.facets[f]
    }

    /// Indices of interior facets (the skeleton proper).
    pub fn interior_facets(&self) -> &[usize] {
        &self.interior
    }

    pub fn boundary_facets(&self) -> &[usize] {
        &self.boundary
    }

    /// Facets of element `k` (`dim + 1` entries).
    pub fn element_facets(&self, k: usize) -> &[usize] {
        &self.element_facets[k][..self.dim + 1]
    }

    /// Elements sharing a facet with `k`.
    pub fn neighbours(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        self.element_facets(k).iter().filter_map(move |&f| {
            let facet = &self.facets[f];
            match facet.k2 {
                Some(k2) if facet.k1 == k => Some(k2),
                Some(_) => Some(facet.k1),
                None => None,
            }
        })
    }

    /// Diameter `h_K` of element `k`.
    pub fn diameter(&self, k: usize) -> f64 {
        self.diameters[k]
    }

    pub fn volume(&self, k: usize) -> f64 {
        self.volumes[k]
    }

    pub fn total_volume(&self) -> f64 {
        self.volumes.iter().sum()
    }

    pub fn max_diameter(&self) -> f64 {
        self.diameters.iter().cloned().fold(0.0, f64::max)
    }

    /// Meshsize on a facet: the larger diameter of the adjacent elements.
    pub fn facet_meshsize(&self, f: usize) -> f64 {
        let facet = &self.facets[f];
        let h1 = self.diameters[facet.k1];
        facet.k2.map_or(h1, |k2| h1.max(self.diameters[k2]))
    }

    pub fn centroid(&self, k: usize) -> Point {
        let el = self.element(k);
        let mut c = [0.0; 2];
        for &v in el {
            c[0] += self.vertices[v][0];
            c[1] += self.vertices[v][1];
        }
        let n = el.len() as f64;
        [c[0] / n, c[1] / n]
    }

    /// `h(x) = max { h_K : x in closure(K) }`.
    pub fn meshsize_at(&self, x: &[f64]) -> Result<f64> {
        let p = [x[0], if self.dim > 1 { x[1] } else { 0.0 }];
        let mut best: Option<f64> = None;
        for k in 0..self.elements.len() {
            if self.contains(k, &p) {
                let h = self.diameters[k];
                best = Some(best.map_or(h, |b: f64| b.max(h)));
            }
        }
        best.ok_or_else(|| Error::OutOfDomain(x.to_vec()))
    }

    /// Whether `p` lies in the closure of element `k` (up to roundoff).
    pub fn contains(&self, k: usize, p: &Point) -> bool {
        let tol = 1e-12;
        let el = self.element(k);
        if self.dim == 1 {
            let (a, b) = (self.vertices[el[0]][0], self.vertices[el[1]][0]);
            let (lo, hi) = (a.min(b), a.max(b));
            let s = tol * (hi - lo).max(1.0);
            p[0] >= lo - s && p[0] <= hi + s
        } else {
            let bary = barycentric(&self.vertices[el[0]], &self.vertices[el[1]], &self.vertices[el[2]], p);
            bary.iter().all(|&l| l >= -tol)
        }
    }

    /// Plain-text dump: vertex table then element table (0-based indices).
    pub fn write_text<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# dim {}", self.dim)?;
        writeln!(w, "# vertices {}", self.vertices.len())?;
        for v in &self.vertices {
            if self.dim == 1 {
                writeln!(w, "{}", v[0])?;
            } else {
                writeln!(w, "{} {}", v[0], v[1])?;
            }
        }
        writeln!(w, "# elements {}", self.elements.len())?;
        for k in 0..self.elements.len() {
            let line: Vec<String> = self.element(k).iter().map(|v| v.to_string()).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

fn dist(a: &Point, b: &Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

fn signed_volume(dim: usize, vertices: &[Point], el: &[usize]) -> f64 {
    if dim == 1 {
        vertices[el[1]][0] - vertices[el[0]][0]
    } else {
        let (a, b, c) = (vertices[el[0]], vertices[el[1]], vertices[el[2]]);
        0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
    }
}

fn barycentric(a: &Point, b: &Point, c: &Point, p: &Point) -> [f64; 3] {
    let det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
    let l1 = ((p[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (p[1] - a[1])) / det;
    let l2 = ((b[0] - a[0]) * (p[1] - a[1]) - (p[0] - a[0]) * (b[1] - a[1])) / det;
    [1.0 - l1 - l2, l1, l2]
}

/// Enumerates every (d-1)-subsimplex once, records adjacency and the normal
/// outward from the first adjacent element.
fn compute_skeleton(
    dim: usize,
    vertices: &[Point],
    elements: &[[usize; 3]],
) -> Result<(Vec<Facet>, Vec<[usize; 3]>)> {
    let nv = dim + 1;
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut facets: Vec<Facet> = Vec::new();
    let mut element_facets = vec![[usize::MAX; 3]; elements.len()];

    for (k, el) in elements.iter().enumerate() {
        for local in 0..nv {
            // facet opposite local vertex `local`
            let verts: Vec<usize> = (0..nv).filter(|&i| i != local).map(|i| el[i]).collect();
            let mut key = verts.clone();
            key.sort_unstable();
            match index.get(&key) {
                Some(&f) => {
                    let facet = &mut facets[f];
                    if facet.k2.is_some() {
                        return Err(Error::Conformity(format!(
                            "facet {key:?} is shared by more than two elements"
                        )));
                    }
                    facet.k2 = Some(k);
                    element_facets[k][local] = f;
                }
                None => {
                    let opposite = vertices[el[local]];
                    let (normal, measure) = if dim == 1 {
                        let x = vertices[verts[0]][0];
                        ([if x > opposite[0] { 1.0 } else { -1.0 }, 0.0], 1.0)
                    } else {
                        let (a, b) = (vertices[verts[0]], vertices[verts[1]]);
                        let len = dist(&a, &b);
                        let mut n = [(b[1] - a[1]) / len, -(b[0] - a[0]) / len];
                        // flip towards the outside of k
                        if (a[0] - opposite[0]) * n[0] + (a[1] - opposite[1]) * n[1] < 0.0 {
                            n = [-n[0], -n[1]];
                        }
                        (n, len)
                    };
                    index.insert(key, facets.len());
                    element_facets[k][local] = facets.len();
                    facets.push(Facet {
                        vertices: verts,
                        k1: k,
                        k2: None,
                        normal,
                        measure,
                    });
                }
            }
        }
    }

    if dim == 2 {
        // A hanging vertex shows up as a boundary facet whose interior contains
        // another mesh vertex.
        for facet in facets.iter().filter(|f| f.is_boundary()) {
            let (a, b) = (vertices[facet.vertices[0]], vertices[facet.vertices[1]]);
            let len2 = (b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2);
            for (i, p) in vertices.iter().enumerate() {
                if facet.vertices.contains(&i) {
                    continue;
                }
                let cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
                if cross.abs() > 1e-12 * len2 {
                    continue;
                }
                let t = ((p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1])) / len2;
                if t > 1e-12 && t < 1.0 - 1e-12 {
                    return Err(Error::Conformity(format!(
                        "vertex {i} hangs on facet {:?}",
                        facet.vertices
                    )));
                }
            }
        }
    }
    Ok((facets, element_facets))
}

fn criss_cross(x0: f64, x1: f64, y0: f64, y1: f64, nx: usize, ny: usize) -> Result<Mesh> {
    let coord = |lo: f64, hi: f64, n: usize, i: usize| if i == n { hi } else { lo + (hi - lo) * i as f64 / n as f64 };
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1) + nx * ny);
    for j in 0..=ny {
        for i in 0..=nx {
            vertices.push([coord(x0, x1, nx, i), coord(y0, y1, ny, j)]);
        }
    }
    let corner = |i: usize, j: usize| j * (nx + 1) + i;
    let mut elements = Vec::with_capacity(4 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let c = vertices.len();
            let (a, b) = (vertices[corner(i, j)], vertices[corner(i + 1, j + 1)]);
            vertices.push([0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]);
            let (sw, se, ne, nw) = (corner(i, j), corner(i + 1, j), corner(i + 1, j + 1), corner(i, j + 1));
            elements.push([sw, se, c]);
            elements.push([se, ne, c]);
            elements.push([ne, nw, c]);
            elements.push([nw, sw, c]);
        }
    }
    Mesh::from_simplices(2, vertices, elements)
}

fn ring_disk(radius: f64, rings: usize) -> Result<Mesh> {
    let mut vertices = vec![[0.0, 0.0]];
    // ring_start[i] = index of the first vertex of ring i (ring 0 is the centre)
    let mut ring_start = vec![0usize];
    for i in 1..=rings {
        ring_start.push(vertices.len());
        let n = 6 * i;
        let r = radius * i as f64 / rings as f64;
        for j in 0..n {
            let theta = 2.0 * PI * j as f64 / n as f64;
            vertices.push([r * theta.cos(), r * theta.sin()]);
        }
    }
    let mut elements = Vec::with_capacity(6 * rings * rings);
    for j in 0..6 {
        elements.push([0, 1 + j, 1 + (j + 1) % 6]);
    }
    for i in 2..=rings {
        let (n0, n1) = (6 * (i - 1), 6 * i);
        let (s0, s1) = (ring_start[i - 1], ring_start[i]);
        let angle = |j: usize, n: usize| j as f64 / n as f64;
        // merge the two angular sequences
        let (mut p0, mut p1) = (0usize, 0usize);
        while p0 < n0 || p1 < n1 {
            let next0 = angle(p0 + 1, n0);
            let next1 = angle(p1 + 1, n1);
            if p1 < n1 && (p0 >= n0 || next1 <= next0) {
                elements.push([s0 + p0 % n0, s1 + p1, s1 + (p1 + 1) % n1]);
                p1 += 1;
            } else {
                elements.push([s0 + p0, s1 + p1 % n1, s0 + (p0 + 1) % n0]);
                p0 += 1;
            }
        }
    }
    Mesh::from_simplices(2, vertices, elements)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interval(a: f64, b: f64, n: usize) -> Mesh {
        Mesh::build(&MeshSpec::Interval { a, b, n }).unwrap()
    }

    #[test]
    fn interval_counts() {
        let m = interval(-1.0, 1.0, 4);
        assert_eq!(m.num_elements(), 4);
        assert_eq!(m.num_vertices(), 5);
        assert_eq!(m.interior_facets().len(), 3);
        assert_eq!(m.boundary_facets().len(), 2);
        let single = interval(0.0, 1.0, 1);
        assert_eq!(single.diameter(0), 1.0);
    }

    #[test]
    fn interval_interior_normal_points_right_from_left_element() {
        let m = interval(-1.0, 1.0, 2);
        let f = m.facet(m.interior_facets()[0]);
        assert_eq!(m.vertex(f.vertices[0])[0], 0.0);
        assert_eq!(f.k1, 0);
        assert_eq!(f.k2, Some(1));
        assert_eq!(f.normal[0], 1.0);
    }

    #[test]
    fn criss_cross_unit_square() {
        let spec = MeshSpec::Rectangle {
            x0: 0.0,
            x1: 1.0,
            y0: 0.0,
            y1: 1.0,
            nx: 2,
            ny: 2,
        };
        let m = Mesh::build(&spec).unwrap();
        assert_eq!(m.num_elements(), 16);
        // each triangle: half the cell times half its height = 1/16
        for k in 0..16 {
            assert!((m.volume(k) - 1.0 / 16.0).abs() < 1e-15);
        }
        assert!((m.total_volume() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn single_cell_skeleton() {
        let spec = MeshSpec::Rectangle {
            x0: 0.0,
            x1: 1.0,
            y0: 0.0,
            y1: 1.0,
            nx: 1,
            ny: 1,
        };
        let m = Mesh::build(&spec).unwrap();
        assert_eq!(m.interior_facets().len(), 4);
        assert_eq!(m.boundary_facets().len(), 4);
        for &f in m.interior_facets() {
            // every diagonal half ends at the centre vertex (index 4)
            assert!(m.facet(f).vertices.contains(&4));
        }
    }

    #[test]
    fn incidences_and_boundary_measure() {
        let specs = [
            MeshSpec::Interval { a: -1.0, b: 1.0, n: 7 },
            MeshSpec::Rectangle {
                x0: -1.0,
                x1: 1.0,
                y0: -2.0,
                y1: 2.0,
                nx: 3,
                ny: 5,
            },
            MeshSpec::Disk { radius: 1.0, rings: 4 },
        ];
        for spec in &specs {
            let m = Mesh::build(spec).unwrap();
            let incidences: usize = m.facets().iter().map(|f| 1 + f.k2.is_some() as usize).sum();
            assert_eq!(incidences, m.num_elements() * (m.dim() + 1), "{spec}");
            let bmeasure: f64 = m.boundary_facets().iter().map(|&f| m.facet(f).measure).sum();
            assert!(((bmeasure - spec.boundary_measure()) / spec.boundary_measure()).abs() < 1e-12);
            for f in m.facets() {
                let n = f.normal;
                assert!((n[0].hypot(n[1]) - 1.0).abs() < 1e-14);
                // outward from k1: points away from k1's centroid
                let c = m.centroid(f.k1);
                let p = m.vertex(f.vertices[0]);
                assert!((p[0] - c[0]) * n[0] + (p[1] - c[1]) * n[1] > 0.0);
                if let Some(k2) = f.k2 {
                    let c2 = m.centroid(k2);
                    assert!((p[0] - c2[0]) * n[0] + (p[1] - c2[1]) * n[1] < 0.0);
                }
            }
        }
    }

    #[test]
    fn disk_has_six_r_squared_triangles() {
        let m = Mesh::build(&MeshSpec::Disk { radius: 1.0, rings: 3 }).unwrap();
        assert_eq!(m.num_elements(), 54);
        assert_eq!(m.boundary_facets().len(), 18);
    }

    #[test]
    fn meshsize_function() {
        let m = interval(-1.0, 1.0, 4);
        assert_eq!(m.meshsize_at(&[0.3]).unwrap(), 0.5);
        let graded = Mesh::from_interval_points(&[0.0, 0.2, 1.0]).unwrap();
        assert!((graded.meshsize_at(&[0.2]).unwrap() - 0.8).abs() < 1e-15);
        assert!((graded.meshsize_at(&[0.1]).unwrap() - 0.2).abs() < 1e-15);
        assert!(matches!(graded.meshsize_at(&[1.5]), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn degenerate_specs_rejected() {
        assert!(matches!(
            Mesh::build(&MeshSpec::Interval { a: 1.0, b: 1.0, n: 3 }),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            Mesh::build(&MeshSpec::Rectangle {
                x0: 0.0,
                x1: 1.0,
                y0: 2.0,
                y1: 1.0,
                nx: 1,
                ny: 1
            }),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn hanging_vertex_detected() {
        // two triangles on the left, one big triangle on the right whose left
        // edge carries the midpoint vertex (0,0.5)
        let vertices = vec![[0.0, 0.0], [0.0, 1.0], [0.0, 0.5], [-1.0, 0.5], [1.0, 0.5]];
        let elements = vec![[3, 0, 2], [3, 2, 1], [0, 4, 1]];
        assert!(matches!(
            Mesh::from_simplices(2, vertices, elements),
            Err(Error::Conformity(_))
        ));
    }

    #[test]
    fn spec_round_trips_through_text() {
        let spec = MeshSpec::Rectangle {
            x0: -1.0,
            x1: 1.0,
            y0: -2.0,
            y1: 2.0,
            nx: 4,
            ny: 8,
        };
        assert_eq!(spec.to_string().parse::<MeshSpec>().unwrap(), spec);
        assert!("disk 1".parse::<MeshSpec>().is_err());
    }

    #[test]
    fn text_dump_lists_vertices_then_elements() {
        let m = interval(0.0, 1.0, 2);
        let mut buf = Vec::new();
        m.write_text(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "# dim 1\n# vertices 3\n0\n0.5\n1\n# elements 2\n0 1\n1 2\n");
    }
}
