//! Nested-dissection multifrontal LU for the element-block Jacobian.
//!
//! Elements are ordered by recursive coordinate bisection of their centroids.
//! Each tree node eliminates one separator (or leaf) of elements in a dense
//! front, pivoting partially among the separator rows. The dense kernels are
//! faer's.

use faer::linalg::matmul::matmul;
use faer::linalg::solvers::{PartialPivLu, Solve};
use faer::{Accum, Mat, Par};

use super::assembly::{Pattern, SparseJacobian};
use crate::error::{Error, Result};
use crate::mesh::Mesh;

/// Leaf size of the dissection, in elements.
const LEAF: usize = 2;
/// Relative pivot size below which a front is reported singular.
const PIVOT_TOL: f64 = 1e-14;

#[derive(Debug)]
struct Node {
    /// elements eliminated here
    pivots: Vec<usize>,
    /// later elements coupled to this subtree
    update: Vec<usize>,
    children: Vec<usize>,
}

/// Elimination tree of the element graph; nodes are in postorder.
#[derive(Debug)]
pub struct Dissection {
    nodes: Vec<Node>,
}

fn bisect(mesh: &Mesh, rows_of: &[Vec<usize>], elems: Vec<usize>, in_set: &mut [bool], nodes: &mut Vec<Node>) -> Option<usize> {
    if elems.is_empty() {
        return None;
    }
    if elems.len() <= LEAF {
        nodes.push(Node {
            pivots: elems,
            update: Vec::new(),
            children: Vec::new(),
        });
        return Some(nodes.len() - 1);
    }
    let c: Vec<[f64; 2]> = elems.iter().map(|&k| mesh.centroid(k)).collect();
    let extent = |i: usize| {
        let (lo, hi) = c.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p[i]), hi.max(p[i])));
        hi - lo
    };
    let axis = if mesh.dim() == 2 && extent(1) > extent(0) { 1 } else { 0 };
    let mut order: Vec<usize> = (0..elems.len()).collect();
    order.sort_by(|&a, &b| c[a][axis].total_cmp(&c[b][axis]).then(elems[a].cmp(&elems[b])));
    let half = elems.len() / 2;
    let left: Vec<usize> = order[..half].iter().map(|&i| elems[i]).collect();
    let right: Vec<usize> = order[half..].iter().map(|&i| elems[i]).collect();
    for &k in &right {
        in_set[k] = true;
    }
    let (sep, rest): (Vec<usize>, Vec<usize>) = left.into_iter().partition(|&k| rows_of[k].iter().any(|&r| in_set[r]));
    for &k in &right {
        in_set[k] = false;
    }
    let children: Vec<usize> = [rest, right].into_iter().filter_map(|part| bisect(mesh, rows_of, part, in_set, nodes)).collect();
    nodes.push(Node {
        pivots: sep,
        update: Vec::new(),
        children,
    });
    Some(nodes.len() - 1)
}

impl Dissection {
    pub fn new(mesh: &Mesh, rows_of: &[Vec<usize>]) -> Dissection {
        let ne = rows_of.len();
        let mut nodes = Vec::new();
        let mut in_set = vec![false; ne];
        bisect(mesh, rows_of, (0..ne).collect(), &mut in_set, &mut nodes);
        let mut owner = vec![usize::MAX; ne];
        for (i, node) in nodes.iter().enumerate() {
            for &k in &node.pivots {
                owner[k] = i;
            }
        }
        for i in 0..nodes.len() {
            let mut update: Vec<usize> = nodes[i].pivots.iter().flat_map(|&k| rows_of[k].iter().copied()).collect();
            for &ch in &nodes[i].children {
                update.extend_from_slice(&nodes[ch].update);
            }
            update.retain(|&k| owner[k] > i);
            update.sort_unstable();
            update.dedup();
            nodes[i].update = update;
        }
        Dissection { nodes }
    }

    /// Largest front, in elements.
    pub fn max_front(&self) -> usize {
        self.nodes.iter().map(|n| n.pivots.len() + n.update.len()).max().unwrap_or(0)
    }
}

#[derive(Debug)]
struct FrontFactor {
    lu: PartialPivLu<f64>,
    /// `A11^{-1} A12`
    x: Mat<f64>,
    a21: Mat<f64>,
}

/// Numeric factorisation of one Jacobian.
#[derive(Debug)]
pub struct Factorization {
    m: usize,
    n: usize,
    fronts: Vec<FrontFactor>,
}

fn dofs(elems: &[usize], m: usize) -> impl Iterator<Item = usize> + '_ {
    elems.iter().flat_map(move |&k| k * m..(k + 1) * m)
}

impl Factorization {
    pub fn new(tree: &Dissection, pattern: &Pattern, jac: &SparseJacobian) -> Result<Factorization> {
        let m = pattern.m;
        let ne = pattern.n / m;
        let mut pos = vec![usize::MAX; ne];
        let mut stamp = vec![usize::MAX; ne];
        let mut pivot_here = vec![false; ne];
        let mut pending: Vec<Option<Mat<f64>>> = (0..tree.nodes.len()).map(|_| None).collect();
        let mut fronts = Vec::with_capacity(tree.nodes.len());
        for (i, node) in tree.nodes.iter().enumerate() {
            let np = node.pivots.len();
            let elems: Vec<usize> = node.pivots.iter().chain(&node.update).copied().collect();
            for (j, &k) in elems.iter().enumerate() {
                pos[k] = j;
                stamp[k] = i;
            }
            for &k in &node.pivots {
                pivot_here[k] = true;
            }
            let f = elems.len() * m;
            let mut front = Mat::<f64>::zeros(f, f);
            for &l in &elems {
                let cl = pos[l] * m;
                for (b, &k) in pattern.rows_of(l).iter().enumerate() {
                    if stamp[k] != i || !(pivot_here[k] || pivot_here[l]) {
                        continue;
                    }
                    let rk = pos[k] * m;
                    for j in 0..m {
                        let start = pattern.col_ptr[l * m + j] + b * m;
                        let dst = &mut front.col_as_slice_mut(cl + j)[rk..rk + m];
                        for (d, v) in dst.iter_mut().zip(&jac.values[start..start + m]) {
                            *d += v;
                        }
                    }
                }
            }
            for &ch in &node.children {
                let s = pending[ch].take().expect("children precede parents");
                let upd = &tree.nodes[ch].update;
                for (bj, &l) in upd.iter().enumerate() {
                    for j in 0..m {
                        let src = s.col_as_slice(bj * m + j);
                        let dst = front.col_as_slice_mut(pos[l] * m + j);
                        for (bi, &k) in upd.iter().enumerate() {
                            let rk = pos[k] * m;
                            for (d, v) in dst[rk..rk + m].iter_mut().zip(&src[bi * m..(bi + 1) * m]) {
                                *d += v;
                            }
                        }
                    }
                }
            }
            let p = np * m;
            let a11 = front.as_ref().submatrix(0, 0, p, p);
            let scale = (0..p).flat_map(|c| (0..p).map(move |r| (r, c))).fold(0.0f64, |a, (r, c)| a.max(a11[(r, c)].abs()));
            let lu = PartialPivLu::new(a11);
            let u = lu.U();
            let min_pivot = (0..p).fold(f64::INFINITY, |a, d| a.min(u[(d, d)].abs()));
            if !(min_pivot > PIVOT_TOL * scale) {
                return Err(Error::Singular(format!("front {i}: pivot {min_pivot:.3e} against scale {scale:.3e}")));
            }
            let mut x = front.as_ref().submatrix(0, p, p, f - p).to_owned();
            lu.solve_in_place(x.as_mut());
            let a21 = front.as_ref().submatrix(p, 0, f - p, p).to_owned();
            let mut s = front.as_ref().submatrix(p, p, f - p, f - p).to_owned();
            matmul(s.as_mut(), Accum::Add, a21.as_ref(), x.as_ref(), -1.0, Par::Seq);
            pending[i] = Some(s);
            for &k in &node.pivots {
                pivot_here[k] = false;
            }
            fronts.push(FrontFactor { lu, x, a21 });
        }
        Ok(Factorization { m, n: pattern.n, fronts })
    }

    pub fn solve(&self, tree: &Dissection, rhs: &[f64]) -> Vec<f64> {
        assert_eq!(rhs.len(), self.n);
        let m = self.m;
        let mut b = rhs.to_vec();
        for (node, fr) in tree.nodes.iter().zip(&self.fronts) {
            let mut y = Mat::from_fn(node.pivots.len() * m, 1, |_, _| 0.0);
            for (i, g) in dofs(&node.pivots, m).enumerate() {
                y[(i, 0)] = b[g];
            }
            fr.lu.solve_in_place(y.as_mut());
            for (i, g) in dofs(&node.pivots, m).enumerate() {
                b[g] = y[(i, 0)];
            }
            if !node.update.is_empty() {
                let mut t = Mat::<f64>::zeros(node.update.len() * m, 1);
                matmul(t.as_mut(), Accum::Replace, fr.a21.as_ref(), y.as_ref(), 1.0, Par::Seq);
                for (i, g) in dofs(&node.update, m).enumerate() {
                    b[g] -= t[(i, 0)];
                }
            }
        }
        for (node, fr) in tree.nodes.iter().zip(&self.fronts).rev() {
            if node.update.is_empty() {
                continue;
            }
            let idx: Vec<usize> = dofs(&node.update, m).collect();
            let xu = Mat::from_fn(idx.len(), 1, |i, _| b[idx[i]]);
            let mut t = Mat::<f64>::zeros(node.pivots.len() * m, 1);
            matmul(t.as_mut(), Accum::Replace, fr.x.as_ref(), xu.as_ref(), 1.0, Par::Seq);
            for (i, g) in dofs(&node.pivots, m).enumerate() {
                b[g] -= t[(i, 0)];
            }
        }
        b
    }
}
