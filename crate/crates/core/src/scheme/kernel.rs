//! Pointwise integrands of the six-field system.
//!
//! Every equation is written as `f0 * T + f1 . grad T` for the volume part and
//! `g0 * T + g1 . grad T` per facet side, where `T` is the test function of the
//! row. Rows follow the unknown layout `[phi, v.., lambda, a, b, q..]`: the
//! phase equation tests with the `phi` slot, momentum with `v`, the divergence
//! constraint with `lambda`, the `a` and `b` relations with their own slots and
//! the gradient relation with `q`.

use crate::ad::Scalar;
use crate::model::{density_of_phase, well_difference_quotient, well_eval, ModelParams, Viscosity};

pub const MAX_COMP: usize = 8;

pub fn num_components(dim: usize) -> usize {
    4 + 2 * dim
}

pub const PHI: usize = 0;
pub const V: usize = 1;

pub fn lam(d: usize) -> usize {
    1 + d
}
pub fn acomp(d: usize) -> usize {
    2 + d
}
pub fn bcomp(d: usize) -> usize {
    3 + d
}
pub fn qcomp(d: usize) -> usize {
    4 + d
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mode {
    /// One midpoint step of length `k`; the unknowns are the new level.
    Step { k: f64 },
    /// Semidiscrete system at `t = 0`: the `phi` and `v` slots carry time
    /// derivatives, the remaining slots the fields themselves.
    Initial,
}

/// Constants shared by all integrands.
#[derive(Clone, Debug)]
pub struct KernelCtx {
    pub params: ModelParams,
    pub dim: usize,
    pub mode: Mode,
    pub cp: f64,
    pub cm: f64,
    pub sigma: f64,
}

impl KernelCtx {
    pub fn new(params: &ModelParams, dim: usize, degree: usize, mode: Mode) -> KernelCtx {
        let (cp, cm) = crate::model::mixture_constants(params);
        KernelCtx {
            params: params.clone(),
            dim,
            mode,
            cp,
            cm,
            sigma: params.penalty(degree),
        }
    }
}

/// The quantities entering the equations at one point: midpoint values
/// (`lambda, a, b` are unknown midpoint values themselves), time differences, the well quotient and the kinetic weighting.
#[derive(Clone, Copy, Debug)]
pub struct Mid<S> {
    pub phi: S,
    pub gphi: [S; 2],
    pub v: [S; 2],
    /// `gv[i][j] = d_j v_i`
    pub gv: [[S; 2]; 2],
    pub lam: S,
    pub a: S,
    pub ga: [S; 2],
    pub b: S,
    pub gb: [S; 2],
    pub q: [S; 2],
    pub div_q: S,
    pub dphi: S,
    pub dv: [S; 2],
    pub quot: S,
    pub vsum: S,
}

/// Builds [`Mid`] from unknown values/gradients `u, g` and given ones `uo, go`.
pub fn midpoint<S: Scalar>(ctx: &KernelCtx, u: &[S], g: &[[S; 2]], uo: &[f64], go: &[[f64; 2]]) -> Mid<S> {
    let d = ctx.dim;
    let z = S::zero();
    let (l, a, b, q) = (lam(d), acomp(d), bcomp(d), qcomp(d));
    let c = S::cst;
    let mut m = Mid {
        phi: z,
        gphi: [z; 2],
        v: [z; 2],
        gv: [[z; 2]; 2],
        lam: z,
        a: z,
        ga: [z; 2],
        b: z,
        gb: [z; 2],
        q: [z; 2],
        div_q: z,
        dphi: z,
        dv: [z; 2],
        quot: z,
        vsum: z,
    };
    match ctx.mode {
        Mode::Step { k } => {
            let half = |x: S, y: f64| (x + y) * 0.5;
            m.phi = half(u[PHI], uo[PHI]);
            m.dphi = (u[PHI] - uo[PHI]) * (1.0 / k);
            m.quot = well_difference_quotient(&ctx.params, uo[PHI], u[PHI]);
            m.lam = u[l];
            m.a = u[a];
            m.b = u[b];
            for j in 0..d {
                m.gphi[j] = half(g[PHI][j], go[PHI][j]);
                m.ga[j] = g[a][j];
                m.gb[j] = g[b][j];
            }
            for i in 0..d {
                m.v[i] = half(u[V + i], uo[V + i]);
                m.dv[i] = (u[V + i] - uo[V + i]) * (1.0 / k);
                m.vsum += u[V + i].sq() + uo[V + i] * uo[V + i];
                m.q[i] = half(u[q + i], uo[q + i]);
                m.div_q += half(g[q + i][i], go[q + i][i]);
                for j in 0..d {
                    m.gv[i][j] = half(g[V + i][j], go[V + i][j]);
                }
            }
        }
        Mode::Initial => {
            m.phi = c(uo[PHI]);
            m.dphi = u[PHI];
            m.quot = c(well_eval(&ctx.params, uo[PHI]).1);
            m.lam = u[l];
            m.a = u[a];
            m.b = u[b];
            for j in 0..d {
                m.gphi[j] = c(go[PHI][j]);
                m.ga[j] = g[a][j];
                m.gb[j] = g[b][j];
            }
            for i in 0..d {
                m.v[i] = c(uo[V + i]);
                m.dv[i] = u[V + i];
                m.vsum += c(2.0 * uo[V + i] * uo[V + i]);
                m.q[i] = u[q + i];
                m.div_q += g[q + i][i];
                for j in 0..d {
                    m.gv[i][j] = c(go[V + i][j]);
                }
            }
        }
    }
    m
}

fn div_v<S: Scalar>(m: &Mid<S>, d: usize) -> S {
    let mut s = S::zero();
    for i in 0..d {
        s += m.gv[i][i];
    }
    s
}

/// Volume integrand. `pi` is the discrete body-force potential at the point.
pub fn volume<S: Scalar>(ctx: &KernelCtx, m: &Mid<S>, pi: f64, f0: &mut [S; MAX_COMP], f1: &mut [[S; 2]; MAX_COMP]) {
    let d = ctx.dim;
    let p = &ctx.params;
    let (cp, cm) = (ctx.cp, ctx.cm);
    let (l, a, b, q) = (lam(d), acomp(d), bcomp(d), qcomp(d));
    *f0 = [S::zero(); MAX_COMP];
    *f1 = [[S::zero(); 2]; MAX_COMP];

    let div = div_v(m, d);
    let mut transport = m.phi * div;
    for j in 0..d {
        transport += m.gphi[j] * m.v[j];
    }
    let rho = density_of_phase(p, m.phi);

    f0[PHI] = m.dphi + transport + m.a * (cp * p.m_r);
    for j in 0..d {
        f1[PHI][j] = m.ga[j] * (cp * p.m_j);
    }

    for i in 0..d {
        let mut r = rho * m.dv[i] + m.gb[i] + m.phi * (m.ga[i] - m.gb[i] * cm) * (1.0 / cp);
        for j in 0..d {
            r += rho * (m.v[j] * m.gv[i][j] - m.v[j] * m.gv[j][i]);
        }
        f0[V + i] = r;
        match p.viscosity {
            Viscosity::Simplified { eta } => {
                for j in 0..d {
                    f1[V + i][j] = m.gv[i][j] * eta;
                }
            }
            Viscosity::Tensor { eta1, eta2 } => {
                let bulk = eta1 - 2.0 * eta2 / d as f64;
                for j in 0..d {
                    f1[V + i][j] = (m.gv[i][j] + m.gv[j][i]) * eta2;
                }
                f1[V + i][i] += div * bulk;
            }
        }
    }
    if d == 2 && p.omega != 0.0 {
        let w = rho * (2.0 * p.omega);
        f0[V] -= w * m.v[1];
        f0[V + 1] += w * m.v[0];
    }
    if pi != 0.0 {
        let s = 0.5 * (p.rho1 + p.rho2) * pi;
        for i in 0..d {
            f0[V + i] += m.gphi[i] * (s * cm / cp);
            f1[V + i][i] += (m.phi * (cm / cp) - 1.0) * s;
        }
    }

    f0[l] = div - (m.dphi + transport) * (cm / cp);
    f0[a] = m.a - m.quot * cp - m.lam * cm + m.div_q * (cp * p.gamma);
    f0[b] = m.b - m.lam - m.vsum * ((p.rho1 + p.rho2) / 8.0);
    for i in 0..d {
        f0[q + i] = m.q[i] - m.gphi[i];
    }
}

/// Data of one facet side.
#[derive(Clone, Copy, Debug)]
pub struct Side<S> {
    pub mid: Mid<S>,
    pub pi: f64,
    /// outward normal of this side's element
    pub n: [f64; 2],
}

/// Facet integrand for each side: `g0[s]`, `g1[s]` multiply the test function of side `s`.
pub fn facet<S: Scalar>(ctx: &KernelCtx, sides: &[Side<S>], h: f64, g0: &mut [[S; MAX_COMP]; 2], g1: &mut [[[S; 2]; MAX_COMP]; 2]) {
    let d = ctx.dim;
    let p = &ctx.params;
    let (cp, cm) = (ctx.cp, ctx.cm);
    let (l, a, q) = (lam(d), acomp(d), qcomp(d));
    let z = S::zero();
    *g0 = [[z; MAX_COMP]; 2];
    *g1 = [[[z; 2]; MAX_COMP]; 2];
    let interior = sides.len() == 2;
    let alpha = if interior { 0.5 } else { 1.0 };
    let pen = ctx.sigma / h;

    // jumps and averages of the midpoint quantities
    let mut j_phiv = z;
    let mut j_v = z;
    let mut j_q = z;
    let mut j_phi = [z; 2];
    let mut j_a = [z; 2];
    let mut j_b = [z; 2];
    let mut j_amb = [z; 2];
    let mut j_v2 = [z; 2];
    let mut tj = [[z; 2]; 2];
    let mut avg_ga = [z; 2];
    let mut avg_gv = [[z; 2]; 2];
    let mut avg_sym = [[z; 2]; 2];
    let mut avg_div = z;
    let mut avg_rhov = [z; 2];
    let mut avg_pi = 0.0;
    for s in sides {
        let m = &s.mid;
        let n = s.n;
        let mut vv = z;
        let rho = density_of_phase(p, m.phi);
        for i in 0..d {
            j_phiv += m.phi * m.v[i] * n[i];
            j_v += m.v[i] * n[i];
            j_q += m.q[i] * n[i];
            vv += m.v[i].sq();
            avg_ga[i] += m.ga[i] * alpha;
            avg_rhov[i] += rho * m.v[i] * alpha;
            avg_div += m.gv[i][i] * alpha;
            for j in 0..d {
                tj[i][j] += m.v[i] * n[j];
                avg_gv[i][j] += m.gv[i][j] * alpha;
                avg_sym[i][j] += (m.gv[i][j] + m.gv[j][i]) * alpha;
            }
        }
        for i in 0..d {
            j_phi[i] += m.phi * n[i];
            j_a[i] += m.a * n[i];
            j_b[i] += m.b * n[i];
            j_amb[i] += (m.a - m.b * cm) * n[i];
            j_v2[i] += vv * n[i];
        }
        avg_pi += alpha * s.pi;
    }

    for (si, s) in sides.iter().enumerate() {
        let m = &s.mid;
        let n = s.n;
        let (o0, o1) = (&mut g0[si], &mut g1[si]);

        // phase equation
        o0[PHI] -= j_phiv * alpha;
        if interior {
            let cj = cp * p.m_j;
            for j in 0..d {
                o0[PHI] += (j_a[j] * pen - avg_ga[j]) * (cj * n[j]);
                o1[PHI][j] -= j_a[j] * (cj * alpha);
            }
        }

        // momentum: viscous part over interior and boundary facets
        match p.viscosity {
            Viscosity::Simplified { eta } => {
                for i in 0..d {
                    for j in 0..d {
                        o0[V + i] -= (avg_gv[i][j] - tj[i][j] * pen) * (eta * n[j]);
                        o1[V + i][j] -= tj[i][j] * (eta * alpha);
                    }
                }
            }
            Viscosity::Tensor { eta1, eta2 } => {
                let bulk = eta1 - 2.0 * eta2 / d as f64;
                for i in 0..d {
                    o1[V + i][i] -= j_v * (bulk * alpha);
                    o0[V + i] -= avg_div * (bulk * n[i]);
                    for j in 0..d {
                        o1[V + i][j] -= (tj[i][j] + tj[j][i]) * (eta2 * alpha);
                        o0[V + i] -= avg_sym[i][j] * (eta2 * n[j]);
                        o0[V + i] += tj[i][j] * (pen * n[j]);
                    }
                }
            }
        }
        // momentum: convective and pressure-like fluxes on interior facets
        if interior {
            let rho = density_of_phase(p, m.phi);
            for i in 0..d {
                let mut r = rho * j_v2[i] * 0.25 - j_b[i] * 0.5 - m.phi * j_amb[i] * (0.5 / cp);
                for j in 0..d {
                    r -= avg_rhov[j] * tj[i][j] * 0.5;
                }
                o0[V + i] += r;
            }
        }
        // momentum: body-force potential
        if p.has_body_force() {
            let s = -0.5 * (p.rho1 + p.rho2) * avg_pi;
            for i in 0..d {
                o0[V + i] += (m.phi * (cm / cp) - 1.0) * (s * n[i]);
            }
        }

        // divergence constraint
        o0[l] += (j_phiv * (cm / cp) - j_v) * alpha;
        // a relation
        o0[a] -= j_q * (cp * p.gamma * alpha);
        // gradient relation on interior facets
        if interior {
            for i in 0..d {
                o0[q + i] += j_phi[i] * 0.5;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skew_convection_vanishes_against_velocity() {
        // (v.grad)v.v - 1/2 grad|v|^2 . v = 0 for any v, grad v
        let ctx = KernelCtx::new(&ModelParams::default(), 2, 1, Mode::Step { k: 1.0 });
        let uo = [0.0; 8];
        let go = [[0.0; 2]; 8];
        let mut u = [0.0; 8];
        let mut g = [[0.0; 2]; 8];
        u[V] = 0.7;
        u[V + 1] = -1.3;
        g[V] = [0.2, 3.1];
        g[V + 1] = [-0.4, 1.7];
        let m = midpoint(&ctx, &u, &g, &uo, &go);
        let mut s = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                s += (m.v[j] * m.gv[i][j] - m.v[j] * m.gv[j][i]) * m.v[i];
            }
        }
        assert!(s.abs() < 1e-15);
    }
}
