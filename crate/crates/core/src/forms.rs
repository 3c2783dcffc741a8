//! Symmetric interior penalty forms: the scalar Laplacian `A1`, the vector
//! Laplacian `A2` and the Navier-Stokes tensor variant.
//!
//! All forms are evaluated from pointwise integrands on traces, once for field
//! pairs and once per basis pair when a dense matrix is requested.

use std::sync::Arc;

use crate::dgspace::{DgSpace, FieldCoeffs, Tabulation};
use crate::error::{Error, Result};

/// Default penalty `10 (p + 1)^2`.
pub fn min_penalty(p: usize) -> f64 {
    10.0 * ((p + 1) * (p + 1)) as f64
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FormKind {
    /// scalar Laplacian, facet terms on interior facets
    A1,
    /// vector Laplacian, facet terms on interior and boundary facets
    A2,
    /// Navier-Stokes tensor with bulk `eta1` and shear `eta2`
    A2Tensor { eta1: f64, eta2: f64 },
}

impl FormKind {
    fn components(&self, d: usize) -> usize {
        match self {
            FormKind::A1 => 1,
            _ => d,
        }
    }

    fn uses_boundary(&self) -> bool {
        !matches!(self, FormKind::A1)
    }
}

/// Value and gradient of up to two components at a point.
#[derive(Clone, Copy, Debug, Default)]
pub struct Trace {
    pub val: [f64; 2],
    /// `grad[c][j] = d_j u_c`
    pub grad: [[f64; 2]; 2],
}

/// Volume integrand of `kind` for the pair `(u, w)`.
pub fn volume_integrand(kind: FormKind, d: usize, u: &Trace, w: &Trace) -> f64 {
    match kind {
        FormKind::A1 => -(0..d).map(|j| u.grad[0][j] * w.grad[0][j]).sum::<f64>(),
        FormKind::A2 => -(0..d).flat_map(|i| (0..d).map(move |j| (i, j))).map(|(i, j)| u.grad[i][j] * w.grad[i][j]).sum::<f64>(),
        FormKind::A2Tensor { eta1, eta2 } => {
            let bulk = eta1 - 2.0 * eta2 / d as f64;
            let div: f64 = (0..d).map(|i| u.grad[i][i]).sum();
            let mut s = 0.0;
            for i in 0..d {
                s += bulk * div * w.grad[i][i];
                for j in 0..d {
                    s += eta2 * (u.grad[i][j] + u.grad[j][i]) * w.grad[i][j];
                }
            }
            -s
        }
    }
}

/// Facet integrand. `us`/`ws` hold one trace per side with the side's outward
/// normal; a single side means a boundary facet.
pub fn facet_integrand(kind: FormKind, d: usize, us: &[(Trace, [f64; 2])], ws: &[(Trace, [f64; 2])], penalty: f64) -> f64 {
    let alpha = if us.len() == 2 { 0.5 } else { 1.0 };
    let nc = kind.components(d);
    // tensor jumps and averaged gradients
    let tjump = |s: &[(Trace, [f64; 2])]| {
        let mut t = [[0.0; 2]; 2];
        for (tr, n) in s {
            for c in 0..nc {
                for j in 0..d {
                    t[c][j] += tr.val[c] * n[j];
                }
            }
        }
        t
    };
    let avg_grad = |s: &[(Trace, [f64; 2])]| {
        let mut g = [[0.0; 2]; 2];
        for (tr, _) in s {
            for c in 0..nc {
                for j in 0..d {
                    g[c][j] += alpha * tr.grad[c][j];
                }
            }
        }
        g
    };
    let (tu, tw) = (tjump(us), tjump(ws));
    let (gu, gw) = (avg_grad(us), avg_grad(ws));
    let frob = |a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]| -> f64 {
        let mut s = 0.0;
        for c in 0..nc {
            for j in 0..d {
                s += a[c][j] * b[c][j];
            }
        }
        s
    };
    match kind {
        FormKind::A1 | FormKind::A2 => frob(&gw, &tu) + frob(&gu, &tw) - penalty * frob(&tu, &tw),
        FormKind::A2Tensor { eta1, eta2 } => {
            let bulk = eta1 - 2.0 * eta2 / d as f64;
            let trace = |t: &[[f64; 2]; 2]| (0..d).map(|i| t[i][i]).sum::<f64>();
            let sym = |t: &[[f64; 2]; 2]| {
                let mut s = [[0.0; 2]; 2];
                for i in 0..d {
                    for j in 0..d {
                        s[i][j] = t[i][j] + t[j][i];
                    }
                }
                s
            };
            bulk * (trace(&tu) * trace(&gw) + trace(&gu) * trace(&tw)) + eta2 * (frob(&sym(&tu), &gw) + frob(&tw, &sym(&gu)))
                - penalty * frob(&tu, &tw)
        }
    }
}

/// Penalty parameter and the space the forms act on.
#[derive(Clone, Debug)]
pub struct FormContext {
    space: Arc<DgSpace>,
    sigma: f64,
}

impl FormContext {
    pub fn new(space: &Arc<DgSpace>, sigma: f64) -> FormContext {
        FormContext {
            space: space.clone(),
            sigma,
        }
    }

    /// Context with the default penalty for the space's degree.
    pub fn with_default_penalty(space: &Arc<DgSpace>) -> FormContext {
        FormContext::new(space, min_penalty(space.degree()))
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn space(&self) -> &Arc<DgSpace> {
        &self.space
    }

    fn check(&self, kind: FormKind, fields: [&FieldCoeffs; 2]) -> Result<()> {
        let nc = kind.components(self.space.dim());
        for f in fields {
            if !f.space().same_as(&self.space) || f.ncomp() != nc {
                return Err(Error::Shape(format!("form expects {nc}-component fields on the context space")));
            }
        }
        Ok(())
    }

    fn trace(f: &FieldCoeffs, k: usize, tab: &Tabulation, q: usize) -> Trace {
        let (mut v, mut g) = ([0.0; 2], [[0.0; 2]; 2]);
        f.eval_tab(k, tab, q, &mut v[..f.ncomp()], &mut g[..f.ncomp()]);
        Trace { val: v, grad: g }
    }

    /// `kind(u, w)`
    pub fn evaluate(&self, kind: FormKind, u: &FieldCoeffs, w: &FieldCoeffs) -> Result<f64> {
        self.check(kind, [u, w])?;
        let d = self.space.dim();
        let mesh = self.space.mesh();
        let mut total = 0.0;
        for k in 0..mesh.num_elements() {
            let tab = self.space.volume_tab(k);
            for q in 0..tab.len() {
                total += tab.weights[q] * volume_integrand(kind, d, &Self::trace(u, k, tab, q), &Self::trace(w, k, tab, q));
            }
        }
        for (f, facet) in mesh.facets().iter().enumerate() {
            if facet.is_boundary() && !kind.uses_boundary() {
                continue;
            }
            let tabs = self.space.facet_tabs(f);
            let elems: Vec<usize> = std::iter::once(facet.k1).chain(facet.k2).collect();
            let n = facet.normal;
            let normals = [n, [-n[0], -n[1]]];
            let pen = self.sigma / mesh.facet_meshsize(f);
            for q in 0..tabs[0].len() {
                let us: Vec<_> = elems.iter().enumerate().map(|(s, &k)| (Self::trace(u, k, &tabs[s], q), normals[s])).collect();
                let ws: Vec<_> = elems.iter().enumerate().map(|(s, &k)| (Self::trace(w, k, &tabs[s], q), normals[s])).collect();
                total += tabs[0].weights[q] * facet_integrand(kind, d, &us, &ws, pen);
            }
        }
        Ok(total)
    }

    pub fn a1(&self, a: &FieldCoeffs, chi: &FieldCoeffs) -> Result<f64> {
        self.evaluate(FormKind::A1, a, chi)
    }

    pub fn a2(&self, v: &FieldCoeffs, xi: &FieldCoeffs) -> Result<f64> {
        self.evaluate(FormKind::A2, v, xi)
    }

    pub fn a2_ns(&self, eta1: f64, eta2: f64, v: &FieldCoeffs, xi: &FieldCoeffs) -> Result<f64> {
        self.evaluate(FormKind::A2Tensor { eta1, eta2 }, v, xi)
    }

    /// Dense matrix `M[i][j] = kind(e_j, e_i)` in the field coefficient layout.
    pub fn matrix(&self, kind: FormKind) -> Vec<Vec<f64>> {
        let d = self.space.dim();
        let nc = kind.components(d);
        let nb = self.space.dofs_per_element();
        let mesh = self.space.mesh();
        let n = nc * self.space.num_dofs();
        let mut mat = vec![vec![0.0; n]; n];
        let unit = |tab: &Tabulation, q: usize, c: usize, i: usize| {
            let mut t = Trace::default();
            t.val[c] = tab.values[q * nb + i];
            t.grad[c] = tab.grads[q * nb + i];
            t
        };
        let idx = |k: usize, c: usize, i: usize| (k * nc + c) * nb + i;
        for k in 0..mesh.num_elements() {
            let tab = self.space.volume_tab(k);
            for q in 0..tab.len() {
                for (cu, iu) in (0..nc).flat_map(|c| (0..nb).map(move |i| (c, i))) {
                    let u = unit(tab, q, cu, iu);
                    for (cw, iw) in (0..nc).flat_map(|c| (0..nb).map(move |i| (c, i))) {
                        let w = unit(tab, q, cw, iw);
                        mat[idx(k, cw, iw)][idx(k, cu, iu)] += tab.weights[q] * volume_integrand(kind, d, &u, &w);
                    }
                }
            }
        }
        for (f, facet) in mesh.facets().iter().enumerate() {
            if facet.is_boundary() && !kind.uses_boundary() {
                continue;
            }
            let tabs = self.space.facet_tabs(f);
            let elems: Vec<usize> = std::iter::once(facet.k1).chain(facet.k2).collect();
            let nrm = facet.normal;
            let normals = [nrm, [-nrm[0], -nrm[1]]];
            let pen = self.sigma / mesh.facet_meshsize(f);
            for q in 0..tabs[0].len() {
                let sided = |s: usize, c: usize, i: usize| -> Vec<(Trace, [f64; 2])> {
                    (0..elems.len())
                        .map(|t| (if t == s { unit(&tabs[t], q, c, i) } else { Trace::default() }, normals[t]))
                        .collect()
                };
                for su in 0..elems.len() {
                    for (cu, iu) in (0..nc).flat_map(|c| (0..nb).map(move |i| (c, i))) {
                        let us = sided(su, cu, iu);
                        for sw in 0..elems.len() {
                            for (cw, iw) in (0..nc).flat_map(|c| (0..nb).map(move |i| (c, i))) {
                                let ws = sided(sw, cw, iw);
                                mat[idx(elems[sw], cw, iw)][idx(elems[su], cu, iu)] += tabs[0].weights[q] * facet_integrand(kind, d, &us, &ws, pen);
                            }
                        }
                    }
                }
            }
        }
        mat
    }
}

/// Terms of the elementwise integration identity for a vector field `p` and a
/// scalar `phi`:
/// `sum_K int_K div(p) phi`, `sum_K int_K p . grad(phi)`,
/// `int_E [[p]] {phi}` over interior facets and `int_{E, boundary} [[phi]] . {p}`.
/// The first two sum to the last two.
pub fn elementwise_integration_terms(p: &FieldCoeffs, phi: &FieldCoeffs) -> Result<[f64; 4]> {
    let space = p.space();
    let d = space.dim();
    if p.ncomp() != d || phi.ncomp() != 1 || !phi.space().same_as(space) {
        return Err(Error::Shape("expected a vector and a scalar field on one space".into()));
    }
    let mut t = [0.0; 4];
    for k in 0..space.num_elements() {
        let tab = space.volume_tab(k);
        for q in 0..tab.len() {
            let (u, w) = (FormContext::trace(p, k, tab, q), FormContext::trace(phi, k, tab, q));
            let div: f64 = (0..d).map(|c| u.grad[c][c]).sum();
            t[0] += tab.weights[q] * div * w.val[0];
            t[1] += tab.weights[q] * (0..d).map(|c| u.val[c] * w.grad[0][c]).sum::<f64>();
        }
    }
    let mesh = space.mesh();
    for (f, facet) in mesh.facets().iter().enumerate() {
        let tabs = space.facet_tabs(f);
        let elems: Vec<usize> = std::iter::once(facet.k1).chain(facet.k2).collect();
        let n = facet.normal;
        let normals = [n, [-n[0], -n[1]]];
        let weight = 1.0 / elems.len() as f64;
        for q in 0..tabs[0].len() {
            let (mut jump_p, mut avg_phi, mut jump_phi_avg_p) = (0.0, 0.0, 0.0);
            let sides: Vec<(Trace, Trace)> = elems
                .iter()
                .enumerate()
                .map(|(s, &k)| (FormContext::trace(p, k, &tabs[s], q), FormContext::trace(phi, k, &tabs[s], q)))
                .collect();
            for (s, (u, w)) in sides.iter().enumerate() {
                let un: f64 = (0..d).map(|c| u.val[c] * normals[s][c]).sum();
                jump_p += un;
                avg_phi += weight * w.val[0];
                for (u2, _) in &sides {
                    let u2n: f64 = (0..d).map(|c| u2.val[c] * normals[s][c]).sum();
                    jump_phi_avg_p += weight * w.val[0] * u2n;
                }
            }
            t[3] += tabs[0].weights[q] * jump_phi_avg_p;
            if !facet.is_boundary() {
                t[2] += tabs[0].weights[q] * jump_p * avg_phi;
            }
        }
    }
    Ok(t)
}

/// Largest eigenvalue of a symmetric dense matrix.
pub fn max_eigenvalue(mat: &[Vec<f64>]) -> f64 {
    let n = mat.len();
    let m = nalgebra::DMatrix::from_fn(n, n, |i, j| 0.5 * (mat[i][j] + mat[j][i]));
    m.symmetric_eigenvalues().iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

/// Semidefiniteness diagnostic: `max eig <= 1e-10 * ||M||_max`.
pub fn is_negative_semidefinite(mat: &[Vec<f64>]) -> bool {
    let scale = mat.iter().flatten().fold(0.0f64, |a, b| a.max(b.abs()));
    max_eigenvalue(mat) <= 1e-10 * scale.max(1.0)
}
