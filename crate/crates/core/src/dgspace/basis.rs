//! Orthonormal modal bases on the reference simplices: scaled Legendre
//! polynomials on `[0, 1]`, and on the reference triangle a Dubiner-type basis
//! obtained by Gram-Schmidt on monomials ordered by total degree (so every
//! leading block spans the polynomials of that degree).

use super::quadrature::{legendre_with_derivative, quadrature_rule, QuadDomain};

#[derive(Clone, Debug)]
pub enum ReferenceBasis {
    Interval { degree: usize },
    Triangle {
        degree: usize,
        /// monomial exponents `(a, b)` for `x^a y^b`
        exponents: Vec<(i32, i32)>,
        /// row `i` holds the monomial coefficients of mode `i`
        coeffs: Vec<Vec<f64>>,
    },
}

impl ReferenceBasis {
    pub fn new(dim: usize, degree: usize) -> ReferenceBasis {
        match dim {
            1 => ReferenceBasis::Interval { degree },
            2 => triangle_basis(degree),
            _ => unreachable!("only 1D and 2D reference bases exist"),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            ReferenceBasis::Interval { degree } => degree + 1,
            ReferenceBasis::Triangle { degree, .. } => (degree + 1) * (degree + 2) / 2,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Values and reference gradients of every mode at `xi`.
    pub fn tabulate(&self, xi: &[f64; 2], values: &mut [f64], grads: &mut [[f64; 2]]) {
        match self {
            ReferenceBasis::Interval { degree } => {
                let z = 2.0 * xi[0] - 1.0;
                for n in 0..=*degree {
                    let (p, dp) = legendre_with_derivative(n, z);
                    let s = (2.0 * n as f64 + 1.0).sqrt();
                    values[n] = s * p;
                    grads[n] = [2.0 * s * dp, 0.0];
                }
            }
            ReferenceBasis::Triangle { exponents, coeffs, .. } => {
                let (x, y) = (xi[0], xi[1]);
                let mono: Vec<(f64, f64, f64)> = exponents
                    .iter()
                    .map(|&(a, b)| {
                        let v = x.powi(a) * y.powi(b);
                        let dx = if a > 0 { a as f64 * x.powi(a - 1) * y.powi(b) } else { 0.0 };
                        let dy = if b > 0 { b as f64 * x.powi(a) * y.powi(b - 1) } else { 0.0 };
                        (v, dx, dy)
                    })
                    .collect();
                for (i, row) in coeffs.iter().enumerate() {
                    let (mut v, mut gx, mut gy) = (0.0, 0.0, 0.0);
                    for (c, m) in row.iter().zip(&mono) {
                        v += c * m.0;
                        gx += c * m.1;
                        gy += c * m.2;
                    }
                    values[i] = v;
                    grads[i] = [gx, gy];
                }
            }
        }
    }
}

fn triangle_basis(degree: usize) -> ReferenceBasis {
    let mut exponents = Vec::new();
    for total in 0..=degree as i32 {
        for b in 0..=total {
            exponents.push((total - b, b));
        }
    }
    let n = exponents.len();
    let rule = quadrature_rule(QuadDomain::Triangle, 2 * degree).expect("degree within table");
    // monomial values at the quadrature points
    let table: Vec<Vec<f64>> = exponents
        .iter()
        .map(|&(a, b)| rule.points.iter().map(|p| p[0].powi(a) * p[1].powi(b)).collect())
        .collect();
    let inner = |u: &[f64], v: &[f64]| -> f64 { u.iter().zip(v).zip(&rule.weights).map(|((a, b), w)| a * b * w).sum() };

    let mut coeffs: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut samples: Vec<Vec<f64>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut c = vec![0.0; n];
        c[i] = 1.0;
        let mut s = table[i].clone();
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for j in 0..i {
                let proj = inner(&s, &samples[j]);
                for (ck, cj) in c.iter_mut().zip(&coeffs[j]) {
                    *ck -= proj * cj;
                }
                for (sk, sj) in s.iter_mut().zip(&samples[j]) {
                    *sk -= proj * sj;
                }
            }
        }
        let norm = inner(&s, &s).sqrt();
        c.iter_mut().for_each(|v| *v /= norm);
        s.iter_mut().for_each(|v| *v /= norm);
        coeffs.push(c);
        samples.push(s);
    }
    ReferenceBasis::Triangle {
        degree,
        exponents,
        coeffs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_mass_matrix_is_identity() {
        for (dim, domain) in [(1, QuadDomain::Interval), (2, QuadDomain::Triangle)] {
            for p in 0..=4 {
                let basis = ReferenceBasis::new(dim, p);
                let n = basis.len();
                let rule = quadrature_rule(domain, 2 * p).unwrap();
                let mut mass = vec![vec![0.0; n]; n];
                let (mut v, mut g) = (vec![0.0; n], vec![[0.0; 2]; n]);
                for (x, w) in rule.points.iter().zip(&rule.weights) {
                    basis.tabulate(x, &mut v, &mut g);
                    for i in 0..n {
                        for j in 0..n {
                            mass[i][j] += w * v[i] * v[j];
                        }
                    }
                }
                for i in 0..n {
                    for j in 0..n {
                        let e = if i == j { 1.0 } else { 0.0 };
                        assert!((mass[i][j] - e).abs() < 1e-12, "dim {dim} p {p} ({i},{j})");
                    }
                }
            }
        }
    }

    #[test]
    fn triangle_gradients_match_finite_differences() {
        let basis = ReferenceBasis::new(2, 3);
        let n = basis.len();
        let x = [0.23, 0.41];
        let (mut v, mut g) = (vec![0.0; n], vec![[0.0; 2]; n]);
        basis.tabulate(&x, &mut v, &mut g);
        let eps = 1e-6;
        for d in 0..2 {
            let (mut vp, mut vm, mut gg) = (vec![0.0; n], vec![0.0; n], vec![[0.0; 2]; n]);
            let mut xp = x;
            xp[d] += eps;
            basis.tabulate(&xp, &mut vp, &mut gg);
            let mut xm = x;
            xm[d] -= eps;
            basis.tabulate(&xm, &mut vm, &mut gg);
            for i in 0..n {
                let fd = (vp[i] - vm[i]) / (2.0 * eps);
                assert!((fd - g[i][d]).abs() < 1e-7 * (1.0 + fd.abs()));
            }
        }
    }
}
