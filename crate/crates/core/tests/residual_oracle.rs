//! Direct 1D transcription of the fully discrete equations, evaluated with a
//! high-order quadrature and compared with the assembled residual.

use std::sync::Arc;

use nsk_dg::dgspace::{basis_eval, quadrature_rule, DgSpace, QuadDomain};
use nsk_dg::mesh::Mesh;
use nsk_dg::model::{density_of_phase, mixture_constants, well_difference_quotient, ModelParams, Viscosity, Well};
use nsk_dg::scheme::{Assembler, Mode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PHI: usize = 0;
const V: usize = 1;
const LAM: usize = 2;
const A: usize = 3;
const B: usize = 4;
const Q: usize = 5;
const NC: usize = 6;

struct Oracle<'a> {
    space: &'a Arc<DgSpace>,
    params: &'a ModelParams,
    old: &'a [f64],
    new: &'a [f64],
    k: f64,
    /// quadrature degree; `None` uses the scheme's own rule
    degree: Option<usize>,
}

/// Values and derivatives of all components at reference point `xi` of element `e`.
struct Point1 {
    val_old: [f64; NC],
    val_new: [f64; NC],
    der_old: [f64; NC],
    der_new: [f64; NC],
    basis: Vec<f64>,
    dbasis: Vec<f64>,
}

impl Oracle<'_> {
    fn nb(&self) -> usize {
        self.space.dofs_per_element()
    }

    fn at(&self, e: usize, xi: f64) -> Point1 {
        let nb = self.nb();
        let (b, g) = basis_eval(self.space, e, &[xi, 0.0]);
        let mut p = Point1 {
            val_old: [0.0; NC],
            val_new: [0.0; NC],
            der_old: [0.0; NC],
            der_new: [0.0; NC],
            basis: b.clone(),
            dbasis: g.iter().map(|g| g[0]).collect(),
        };
        for c in 0..NC {
            for i in 0..nb {
                let idx = (e * NC + c) * nb + i;
                p.val_old[c] += self.old[idx] * b[i];
                p.val_new[c] += self.new[idx] * b[i];
                p.der_old[c] += self.old[idx] * g[i][0];
                p.der_new[c] += self.new[idx] * g[i][0];
            }
        }
        p
    }

    /// Midpoint values: averages for phi, v, q and the new values for lambda, a, b.
    fn mid(p: &Point1) -> ([f64; NC], [f64; NC]) {
        let mut m = [0.0; NC];
        let mut dm = [0.0; NC];
        for c in 0..NC {
            if matches!(c, LAM | A | B) {
                m[c] = p.val_new[c];
                dm[c] = p.der_new[c];
            } else {
                m[c] = 0.5 * (p.val_old[c] + p.val_new[c]);
                dm[c] = 0.5 * (p.der_old[c] + p.der_new[c]);
            }
        }
        (m, dm)
    }

    fn residual(&self) -> Vec<f64> {
        let prm = self.params;
        let (cp, cm) = mixture_constants(prm);
        let eta = match prm.viscosity {
            Viscosity::Simplified { eta } => eta,
            Viscosity::Tensor { .. } => unreachable!(),
        };
        let nb = self.nb();
        let mesh = self.space.mesh();
        let ne = mesh.num_elements();
        let mut r = vec![0.0; ne * NC * nb];
        let row = |e: usize, c: usize, i: usize| (e * NC + c) * nb + i;
        let rule = match self.degree {
            Some(q) => quadrature_rule(QuadDomain::Interval, q).unwrap(),
            None => self.space.volume_rule().clone(),
        };
        for e in 0..ne {
            let len = mesh.volume(e);
            for (xi, w) in rule.points.iter().zip(&rule.weights) {
                let p = self.at(e, xi[0]);
                let (m, dm) = Self::mid(&p);
                let w = w * len;
                let rho = density_of_phase(prm, m[PHI]);
                let dphi = (p.val_new[PHI] - p.val_old[PHI]) / self.k;
                let dv = (p.val_new[V] - p.val_old[V]) / self.k;
                let div_phiv = dm[PHI] * m[V] + m[PHI] * dm[V];
                let quot: f64 = well_difference_quotient(prm, p.val_old[PHI], p.val_new[PHI]);
                let vsum = p.val_new[V].powi(2) + p.val_old[V].powi(2);
                for i in 0..nb {
                    let (chi, dchi) = (p.basis[i], p.dbasis[i]);
                    r[row(e, PHI, i)] += w * ((dphi + div_phiv + cp * prm.m_r * m[A]) * chi + cp * prm.m_j * dm[A] * dchi);
                    // the 1D convective terms cancel pointwise
                    r[row(e, V, i)] += w * ((rho * dv + dm[B] + m[PHI] / cp * (dm[A] - cm * dm[B])) * chi + eta * dm[V] * dchi);
                    r[row(e, LAM, i)] += w * (dm[V] - cm / cp * dphi - cm / cp * div_phiv) * chi;
                    r[row(e, A, i)] += w * (m[A] - cp * quot - cm * m[LAM] + cp * prm.gamma * dm[Q]) * chi;
                    r[row(e, B, i)] += w * (m[B] - m[LAM] - (prm.rho1 + prm.rho2) / 8.0 * vsum) * chi;
                    r[row(e, Q, i)] += w * (m[Q] - dm[PHI]) * chi;
                }
            }
        }
        let sigma = prm.penalty(self.space.degree());
        for (f, facet) in mesh.facets().iter().enumerate() {
            let x = mesh.vertex(facet.vertices[0]);
            let sides: Vec<(usize, f64)> = std::iter::once((facet.k1, facet.normal[0])).chain(facet.k2.map(|k| (k, -facet.normal[0]))).collect();
            let interior = sides.len() == 2;
            let alpha = 1.0 / sides.len() as f64;
            let pts: Vec<(Point1, [f64; NC], [f64; NC], f64)> = sides
                .iter()
                .map(|&(e, n)| {
                    let xi = self.space.to_reference(e, &x)[0];
                    let p = self.at(e, xi);
                    let (m, dm) = Self::mid(&p);
                    (p, m, dm, n)
                })
                .collect();
            let jump = |g: &dyn Fn(&[f64; NC]) -> f64| pts.iter().map(|(_, m, _, n)| g(m) * n).sum::<f64>();
            let avg = |g: &dyn Fn(&[f64; NC], &[f64; NC]) -> f64| pts.iter().map(|(_, m, dm, _)| alpha * g(m, dm)).sum::<f64>();
            let j_phiv = jump(&|m| m[PHI] * m[V]);
            let j_v = jump(&|m| m[V]);
            let j_q = jump(&|m| m[Q]);
            let j_phi = jump(&|m| m[PHI]);
            let j_a = jump(&|m| m[A]);
            let j_b = jump(&|m| m[B]);
            let j_v2 = jump(&|m| m[V] * m[V]);
            let avg_da = avg(&|_, dm| dm[A]);
            let avg_dv = avg(&|_, dm| dm[V]);
            let avg_rhov = avg(&|m, _| density_of_phase(prm, m[PHI]) * m[V]);
            let pen = sigma / mesh.facet_meshsize(f);
            for ((e, n), (p, m, _, _)) in sides.iter().zip(&pts) {
                let rho = density_of_phase(prm, m[PHI]);
                for i in 0..nb {
                    let (chi, dchi) = (p.basis[i], p.dbasis[i]);
                    let (avg_chi, jump_chi, avg_dchi) = (alpha * chi, chi * n, alpha * dchi);
                    let mut rp = -j_phiv * avg_chi;
                    let mut rv = 0.0;
                    if interior {
                        // -c+ m_j A1 facet part
                        rp -= cp * prm.m_j * (avg_dchi * j_a + jump_chi * avg_da - pen * j_a * jump_chi);
                        rv += -avg_chi * avg_rhov * j_v + 0.5 * j_v2 * alpha * rho * chi - j_b * avg_chi - (j_a - cm * j_b) / cp * alpha * m[PHI] * chi;
                    }
                    // -eta A2 facet part, boundary included
                    rv -= eta * (avg_dchi * j_v + jump_chi * avg_dv - pen * j_v * jump_chi);
                    r[row(*e, PHI, i)] += rp;
                    r[row(*e, V, i)] += rv;
                    r[row(*e, LAM, i)] += (cm / cp * j_phiv - j_v) * avg_chi;
                    r[row(*e, A, i)] -= cp * prm.gamma * j_q * avg_chi;
                    if interior {
                        r[row(*e, Q, i)] += j_phi * avg_chi;
                    }
                }
            }
        }
        r
    }
}

fn compare(spec: &str, p: usize, params: ModelParams, seed: u64) {
    // the penalty part of the modified well is only piecewise polynomial
    let degree = match params.well {
        Well::Quartic => Some(4 * p + 12),
        Well::Modified { .. } => None,
    };
    let space = DgSpace::new(Arc::new(Mesh::build(&spec.parse().unwrap()).unwrap()), p).unwrap();
    let n = NC * space.num_dofs();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let old: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.6..0.6)).collect();
    let new: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.6..0.6)).collect();
    let k = 0.05;
    let asm = Assembler::new(&space, &params, None, false);
    let got = asm.residual(Mode::Step { k }, &old, &new).unwrap();
    let want = Oracle {
        space: &space,
        params: &params,
        old: &old,
        new: &new,
        k,
        degree,
    }
    .residual();
    let scale = want.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    for (i, (g, w)) in got.iter().zip(&want).enumerate() {
        assert!((g - w).abs() <= 1e-12 * scale, "{spec} p={p} row {i}: assembled {g}, oracle {w}");
    }
}

#[test]
fn quartic_well_linear_elements() {
    compare("interval -1 0.5 3", 1, ModelParams::default(), 1);
}

#[test]
fn quartic_well_quadratic_elements_nonuniform_density() {
    let params = ModelParams {
        rho1: 0.7,
        rho2: 3.0,
        m_j: 0.2,
        m_r: 0.3,
        gamma: 0.05,
        viscosity: Viscosity::Simplified { eta: 0.1 },
        ..ModelParams::default()
    };
    compare("interval 0 2 4", 2, params, 2);
}

#[test]
fn modified_well_cubic_elements() {
    let params = ModelParams {
        rho2: 10.0,
        well: Well::Modified { a: 100.0 },
        sigma: Some(77.0),
        ..ModelParams::default()
    };
    compare("interval -1 1 3", 3, params, 3);
}
