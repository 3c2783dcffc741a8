//! Gauss rules on the reference interval `[0, 1]` and the reference triangle
//! `{(x, y) : x, y >= 0, x + y <= 1}` (collapsed-coordinate product rule).

use crate::error::{Error, Result};

/// Highest polynomial degree any rule here is built for.
pub const MAX_DEGREE: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadDomain {
    Interval,
    Triangle,
    /// The facet of a `dim`-dimensional element: a point in 1D, an interval in 2D.
    Facet { dim: usize },
}

#[derive(Clone, Debug)]
pub struct QuadRule {
    pub points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

impl QuadRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Rule exact for polynomials up to `degree` on the requested reference domain.
pub fn quadrature_rule(domain: QuadDomain, degree: usize) -> Result<QuadRule> {
    if degree > MAX_DEGREE {
        return Err(Error::Capability(format!(
            "quadrature degree {degree} exceeds the supported maximum {MAX_DEGREE}"
        )));
    }
    Ok(match domain {
        QuadDomain::Interval | QuadDomain::Facet { dim: 2 } => {
            let (x, w) = gauss_legendre(degree / 2 + 1);
            QuadRule {
                points: x.iter().map(|&x| [x, 0.0]).collect(),
                weights: w,
                degree,
            }
        }
        QuadDomain::Facet { dim: 1 } => QuadRule {
            points: vec![[0.0, 0.0]],
            weights: vec![1.0],
            degree,
        },
        QuadDomain::Facet { dim } => {
            return Err(Error::Capability(format!("no facet rule in {dim}D")));
        }
        QuadDomain::Triangle => {
            // the collapse Jacobian (1 - t) raises the degree in t by one
            let n = (degree + 2).div_ceil(2);
            let (x, w) = gauss_legendre(n);
            let mut points = Vec::with_capacity(n * n);
            let mut weights = Vec::with_capacity(n * n);
            for (&t, &wt) in x.iter().zip(&w) {
                for (&s, &ws) in x.iter().zip(&w) {
                    points.push([s * (1.0 - t), t]);
                    weights.push(ws * wt * (1.0 - t));
                }
            }
            QuadRule {
                points,
                weights,
                degree,
            }
        }
    })
}

/// `n`-point Gauss-Legendre nodes and weights on `[0, 1]`.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Newton on P_n starting from the Chebyshev-like guess
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        let weight = 2.0 / ((1.0 - z * z) * dp * dp);
        // map [-1, 1] -> [0, 1]
        x[i] = 0.5 * (1.0 - z);
        x[n - 1 - i] = 0.5 * (1.0 + z);
        w[i] = 0.5 * weight;
        w[n - 1 - i] = 0.5 * weight;
    }
    (x, w)
}

/// Legendre polynomial `P_n(z)` and its derivative on `[-1, 1]`.
pub(crate) fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, z);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = if (1.0 - z * z).abs() < 1e-300 {
        0.5 * nf * (nf + 1.0) * z.powi(n as i32 + 1)
    } else {
        nf * (z * p1 - p0) / (z * z - 1.0)
    };
    (p1, d)
}
