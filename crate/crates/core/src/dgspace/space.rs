use std::sync::Arc;

use super::basis::ReferenceBasis;
use super::quadrature::{quadrature_rule, QuadDomain, QuadRule};
use crate::error::{Error, Result};
use crate::mesh::{Mesh, Point};

/// Quadrature degree used for every volume and facet integral of the scheme.
pub fn scheme_quadrature_degree(p: usize) -> usize {
    (4 * p).max(2 * p + 2)
}

/// Basis values and physical gradients at a fixed set of points of one element.
#[derive(Clone, Debug)]
pub struct Tabulation {
    /// physical quadrature weights (reference weight times measure)
    pub weights: Vec<f64>,
    pub points: Vec<Point>,
    /// `values[q * nb + i]`
    pub values: Vec<f64>,
    /// `grads[q * nb + i]`
    pub grads: Vec<Point>,
}

impl Tabulation {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

#[derive(Clone, Copy, Debug)]
struct Affine {
    origin: Point,
    jac: [[f64; 2]; 2],
    inv: [[f64; 2]; 2],
    scale: f64,
}

impl Affine {
    fn to_reference(&self, x: &Point) -> Point {
        let d = [x[0] - self.origin[0], x[1] - self.origin[1]];
        [
            self.inv[0][0] * d[0] + self.inv[0][1] * d[1],
            self.inv[1][0] * d[0] + self.inv[1][1] * d[1],
        ]
    }

    fn to_physical(&self, xi: &Point) -> Point {
        [
            self.origin[0] + self.jac[0][0] * xi[0] + self.jac[0][1] * xi[1],
            self.origin[1] + self.jac[1][0] * xi[0] + self.jac[1][1] * xi[1],
        ]
    }

    /// `B^{-T} g`
    fn push_gradient(&self, g: &Point) -> Point {
        [
            self.inv[0][0] * g[0] + self.inv[1][0] * g[1],
            self.inv[0][1] * g[0] + self.inv[1][1] * g[1],
        ]
    }
}

/// `V_h = P^p(T)` with an orthonormal modal basis on every element.
#[derive(Debug)]
pub struct DgSpace {
    mesh: Arc<Mesh>,
    degree: usize,
    basis: ReferenceBasis,
    volume_rule: QuadRule,
    facet_rule: QuadRule,
    affine: Vec<Affine>,
    volume: Vec<Tabulation>,
    /// one tabulation per adjacent element, `k1` first
    facet: Vec<Vec<Tabulation>>,
}

impl DgSpace {
    /// Space of degree `p` with quadrature sized for the scheme.
    pub fn new(mesh: Arc<Mesh>, p: usize) -> Result<Arc<DgSpace>> {
        DgSpace::with_quadrature(mesh, p, scheme_quadrature_degree(p))
    }

    pub fn with_quadrature(mesh: Arc<Mesh>, p: usize, quad_degree: usize) -> Result<Arc<DgSpace>> {
        if p == 0 {
            return Err(Error::Domain("polynomial degree must be at least 1".into()));
        }
        let dim = mesh.dim();
        let basis = ReferenceBasis::new(dim, p);
        let volume_rule = quadrature_rule(if dim == 1 { QuadDomain::Interval } else { QuadDomain::Triangle }, quad_degree)?;
        let facet_rule = quadrature_rule(QuadDomain::Facet { dim }, quad_degree)?;

        let affine: Vec<Affine> = (0..mesh.num_elements()).map(|k| element_affine(&mesh, k)).collect();
        let nb = basis.len();
        let tabulate = |k: usize, refs: &[Point], weights: Vec<f64>| -> Tabulation {
            let map = &affine[k];
            let mut values = vec![0.0; refs.len() * nb];
            let mut grads = vec![[0.0; 2]; refs.len() * nb];
            let (mut v, mut g) = (vec![0.0; nb], vec![[0.0; 2]; nb]);
            for (q, xi) in refs.iter().enumerate() {
                basis.tabulate(xi, &mut v, &mut g);
                for i in 0..nb {
                    values[q * nb + i] = v[i] / map.scale;
                    let pg = map.push_gradient(&g[i]);
                    grads[q * nb + i] = [pg[0] / map.scale, pg[1] / map.scale];
                }
            }
            Tabulation {
                weights,
                points: refs.iter().map(|xi| map.to_physical(xi)).collect(),
                values,
                grads,
            }
        };

        let volume = (0..mesh.num_elements())
            .map(|k| {
                let w = volume_rule.weights.iter().map(|w| w * mesh.volume(k) * if dim == 1 { 1.0 } else { 2.0 }).collect();
                tabulate(k, &volume_rule.points, w)
            })
            .collect();

        let facet = mesh
            .facets()
            .iter()
            .map(|f| {
                let phys: Vec<Point> = if dim == 1 {
                    vec![mesh.vertex(f.vertices[0])]
                } else {
                    let (a, b) = (mesh.vertex(f.vertices[0]), mesh.vertex(f.vertices[1]));
                    facet_rule.points.iter().map(|s| [a[0] + s[0] * (b[0] - a[0]), a[1] + s[0] * (b[1] - a[1])]).collect()
                };
                let w: Vec<f64> = facet_rule.weights.iter().map(|w| w * f.measure).collect();
                std::iter::once(f.k1)
                    .chain(f.k2)
                    .map(|k| {
                        let refs: Vec<Point> = phys.iter().map(|x| affine[k].to_reference(x)).collect();
                        let mut t = tabulate(k, &refs, w.clone());
                        t.points = phys.clone();
                        t
                    })
                    .collect()
            })
            .collect();

        Ok(Arc::new(DgSpace {
            mesh,
            degree: p,
            basis,
            volume_rule,
            facet_rule,
            affine,
            volume,
            facet,
        }))
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn dim(&self) -> usize {
        self.mesh.dim()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dofs_per_element(&self) -> usize {
        self.basis.len()
    }

    pub fn num_elements(&self) -> usize {
        self.mesh.num_elements()
    }

    /// Scalar dofs: elements times dofs per element.
    pub fn num_dofs(&self) -> usize {
        self.num_elements() * self.dofs_per_element()
    }

    pub fn volume_rule(&self) -> &QuadRule {
        &self.volume_rule
    }

    pub fn facet_rule(&self) -> &QuadRule {
        &self.facet_rule
    }

    pub fn reference_basis(&self) -> &ReferenceBasis {
        &self.basis
    }

    /// Quadrature tabulation of element `k`.
    pub fn volume_tab(&self, k: usize) -> &Tabulation {
        &self.volume[k]
    }

    /// Facet tabulations, `[k1]` or `[k1, k2]`.
    pub fn facet_tabs(&self, f: usize) -> &[Tabulation] {
        &self.facet[f]
    }

    pub fn to_reference(&self, k: usize, x: &Point) -> Point {
        self.affine[k].to_reference(x)
    }

    pub fn to_physical(&self, k: usize, xi: &Point) -> Point {
        self.affine[k].to_physical(xi)
    }

    pub fn same_as(&self, other: &DgSpace) -> bool {
        std::ptr::eq(self, other)
    }
}

fn element_affine(mesh: &Mesh, k: usize) -> Affine {
    let el = mesh.element(k);
    let x0 = mesh.vertex(el[0]);
    if mesh.dim() == 1 {
        let l = mesh.vertex(el[1])[0] - x0[0];
        Affine {
            origin: x0,
            jac: [[l, 0.0], [0.0, 1.0]],
            inv: [[1.0 / l, 0.0], [0.0, 1.0]],
            scale: l.abs().sqrt(),
        }
    } else {
        let (x1, x2) = (mesh.vertex(el[1]), mesh.vertex(el[2]));
        let jac = [[x1[0] - x0[0], x2[0] - x0[0]], [x1[1] - x0[1], x2[1] - x0[1]]];
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        let inv = [[jac[1][1] / det, -jac[0][1] / det], [-jac[1][0] / det, jac[0][0] / det]];
        Affine {
            origin: x0,
            jac,
            inv,
            scale: det.abs().sqrt(),
        }
    }
}

/// Values and physical gradients of every basis function of element `k` at the
/// reference point `xi`.
pub fn basis_eval(space: &DgSpace, k: usize, xi: &Point) -> (Vec<f64>, Vec<Point>) {
    let nb = space.dofs_per_element();
    let (mut v, mut g) = (vec![0.0; nb], vec![[0.0; 2]; nb]);
    space.basis.tabulate(xi, &mut v, &mut g);
    let map = &space.affine[k];
    for i in 0..nb {
        v[i] /= map.scale;
        let pg = map.push_gradient(&g[i]);
        g[i] = [pg[0] / map.scale, pg[1] / map.scale];
    }
    (v, g)
}

/// Coefficients of a scalar (`ncomp = 1`) or vector field in a [`DgSpace`],
/// stored element-major, then component, then mode.
#[derive(Clone, Debug)]
pub struct FieldCoeffs {
    space: Arc<DgSpace>,
    ncomp: usize,
    data: Vec<f64>,
}

impl FieldCoeffs {
    pub fn zeros(space: &Arc<DgSpace>, ncomp: usize) -> FieldCoeffs {
        FieldCoeffs {
            space: space.clone(),
            ncomp,
            data: vec![0.0; ncomp * space.num_dofs()],
        }
    }

    pub fn from_vec(space: &Arc<DgSpace>, ncomp: usize, data: Vec<f64>) -> Result<FieldCoeffs> {
        if data.len() != ncomp * space.num_dofs() {
            return Err(Error::Shape(format!(
                "expected {} coefficients, got {}",
                ncomp * space.num_dofs(),
                data.len()
            )));
        }
        Ok(FieldCoeffs {
            space: space.clone(),
            ncomp,
            data,
        })
    }

    pub fn space(&self) -> &Arc<DgSpace> {
        &self.space
    }

    pub fn ncomp(&self) -> usize {
        self.ncomp
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    /// Modes of component `c` on element `k`.
    pub fn modes(&self, k: usize, c: usize) -> &[f64] {
        let nb = self.space.dofs_per_element();
        let start = (k * self.ncomp + c) * nb;
        &self.data[start..start + nb]
    }

    pub fn modes_mut(&mut self, k: usize, c: usize) -> &mut [f64] {
        let nb = self.space.dofs_per_element();
        let start = (k * self.ncomp + c) * nb;
        &mut self.data[start..start + nb]
    }

    /// Values and gradients of all components at quadrature point `q` of a tabulation.
    pub fn eval_tab(&self, k: usize, tab: &Tabulation, q: usize, values: &mut [f64], grads: &mut [Point]) {
        let nb = self.space.dofs_per_element();
        let vals = &tab.values[q * nb..(q + 1) * nb];
        let gr = &tab.grads[q * nb..(q + 1) * nb];
        for c in 0..self.ncomp {
            let m = self.modes(k, c);
            let (mut v, mut g) = (0.0, [0.0; 2]);
            for i in 0..nb {
                v += m[i] * vals[i];
                g[0] += m[i] * gr[i][0];
                g[1] += m[i] * gr[i][1];
            }
            values[c] = v;
            grads[c] = g;
        }
    }

    fn check_same(&self, other: &FieldCoeffs) -> Result<()> {
        if !self.space.same_as(&other.space) || self.ncomp != other.ncomp {
            return Err(Error::Shape("fields live in different spaces".into()));
        }
        Ok(())
    }

    /// `self + alpha * other`
    pub fn axpy(&self, alpha: f64, other: &FieldCoeffs) -> Result<FieldCoeffs> {
        self.check_same(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + alpha * b).collect();
        Ok(FieldCoeffs {
            space: self.space.clone(),
            ncomp: self.ncomp,
            data,
        })
    }

    /// Largest absolute coefficient difference.
    pub fn max_abs_diff(&self, other: &FieldCoeffs) -> Result<f64> {
        self.check_same(other)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }
}

/// Elementwise `L^2` projection of `f`, which writes `ncomp` values at a point.
pub fn l2_project<F>(space: &Arc<DgSpace>, ncomp: usize, f: F) -> FieldCoeffs
where
    F: Fn(&Point, &mut [f64]),
{
    let mut out = FieldCoeffs::zeros(space, ncomp);
    let nb = space.dofs_per_element();
    let mut val = vec![0.0; ncomp];
    for k in 0..space.num_elements() {
        let tab = space.volume_tab(k);
        for q in 0..tab.len() {
            f(&tab.points[q], &mut val);
            for c in 0..ncomp {
                let wv = tab.weights[q] * val[c];
                let m = out.modes_mut(k, c);
                for i in 0..nb {
                    m[i] += wv * tab.values[q * nb + i];
                }
            }
        }
    }
    out
}

/// Values and gradients of every component of `coeffs` at reference point `xi` of element `k`.
pub fn eval_field(coeffs: &FieldCoeffs, k: usize, xi: &Point) -> Result<(Vec<f64>, Vec<Point>)> {
    if k >= coeffs.space.num_elements() {
        return Err(Error::Shape(format!("element {k} out of range")));
    }
    let (v, g) = basis_eval(&coeffs.space, k, xi);
    let mut values = vec![0.0; coeffs.ncomp];
    let mut grads = vec![[0.0; 2]; coeffs.ncomp];
    for c in 0..coeffs.ncomp {
        for (i, m) in coeffs.modes(k, c).iter().enumerate() {
            values[c] += m * v[i];
            grads[c][0] += m * g[i][0];
            grads[c][1] += m * g[i][1];
        }
    }
    Ok((values, grads))
}

/// Average and jump of a field at one facet point.
///
/// Scalar fields: `avg` has one entry and `jump` is the vector `v1 n1 + v2 n2`.
/// Vector fields: `avg` has `d` entries and `jump` is the scalar `v1.n1 + v2.n2`.
/// On the boundary `avg = v` and `jump = v n`.
#[derive(Clone, Debug, PartialEq)]
pub struct FacetTraces {
    pub avg: Vec<f64>,
    pub jump: Vec<f64>,
}

fn side_values(coeffs: &FieldCoeffs, f: usize, s: f64) -> Vec<(Vec<f64>, Point)> {
    let space = &coeffs.space;
    let mesh = space.mesh();
    let facet = mesh.facet(f);
    let x: Point = if mesh.dim() == 1 {
        mesh.vertex(facet.vertices[0])
    } else {
        let (a, b) = (mesh.vertex(facet.vertices[0]), mesh.vertex(facet.vertices[1]));
        [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]
    };
    let n = facet.normal;
    std::iter::once((facet.k1, n))
        .chain(facet.k2.map(|k| (k, [-n[0], -n[1]])))
        .map(|(k, nk)| {
            let xi = space.to_reference(k, &x);
            (eval_field(coeffs, k, &xi).expect("element in range").0, nk)
        })
        .collect()
}

/// Traces at the point with parameter `s` in `[0, 1]` along the facet (ignored in 1D).
pub fn facet_traces(coeffs: &FieldCoeffs, f: usize, s: f64) -> Result<FacetTraces> {
    let d = coeffs.space.dim();
    if coeffs.ncomp != 1 && coeffs.ncomp != d {
        return Err(Error::Shape(format!("{} components is neither scalar nor vector", coeffs.ncomp)));
    }
    let sides = side_values(coeffs, f, s);
    let weight = if sides.len() == 2 { 0.5 } else { 1.0 };
    let mut avg = vec![0.0; coeffs.ncomp];
    let mut jump = vec![0.0; if coeffs.ncomp == 1 { d } else { 1 }];
    for (v, n) in &sides {
        for c in 0..coeffs.ncomp {
            avg[c] += weight * v[c];
        }
        if coeffs.ncomp == 1 {
            for j in 0..d {
                jump[j] += v[0] * n[j];
            }
        } else {
            jump[0] += (0..d).map(|j| v[j] * n[j]).sum::<f64>();
        }
    }
    Ok(FacetTraces { avg, jump })
}

/// Tensor jump `v1 (x) n1 + v2 (x) n2` of a vector field (`v (x) n` on the boundary).
/// In 1D scalar and vector fields coincide.
pub fn tensor_jump(coeffs: &FieldCoeffs, f: usize, s: f64) -> Result<[[f64; 2]; 2]> {
    let d = coeffs.space.dim();
    if coeffs.ncomp != d {
        return Err(Error::Shape("tensor jump needs a vector field".into()));
    }
    let mut t = [[0.0; 2]; 2];
    for (v, n) in side_values(coeffs, f, s) {
        for i in 0..d {
            for j in 0..d {
                t[i][j] += v[i] * n[j];
            }
        }
    }
    Ok(t)
}
