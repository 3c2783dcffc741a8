//! Global residual and Jacobian assembly.
//!
//! Unknown vectors are element-major, then component `[phi, v.., lambda, a, b, q..]`,
//! then mode. Local contributions are computed in parallel and summed in a
//! fixed order, so results do not depend on the thread count.

use std::sync::{Arc, Mutex, OnceLock};

use faer::sparse::linalg::solvers::{Lu, SymbolicLu};
use faer::sparse::{SparseColMatRef, SymbolicSparseColMat};
use faer::Mat;
use faer::prelude::*;
use rayon::prelude::*;

use super::multifrontal::{Dissection, Factorization};
use super::kernel::{self, facet, midpoint, num_components, volume, KernelCtx, Mode, Side, MAX_COMP};
use crate::ad::{Dual, Scalar};

use crate::dgspace::{DgSpace, FieldCoeffs, Tabulation};
use crate::error::{Error, Result};
use crate::mesh::Point;
use crate::model::ModelParams;

const BATCH: usize = 512;

/// Block sparsity of the Jacobian: element `K` couples to itself and its facet neighbours.
#[derive(Debug)]
pub struct Pattern {
    pub n: usize,
    /// dofs per element block
    pub m: usize,
    pub col_ptr: Vec<usize>,
    pub row_idx: Vec<usize>,
    /// sorted row elements of every column element
    rows_of: Vec<Vec<usize>>,
    symbolic: SymbolicSparseColMat<usize>,
}

impl Pattern {
    fn new(space: &DgSpace, m: usize) -> Pattern {
        let mesh = space.mesh();
        let ne = mesh.num_elements();
        let rows_of: Vec<Vec<usize>> = (0..ne)
            .map(|l| {
                let mut r: Vec<usize> = std::iter::once(l).chain(mesh.neighbours(l)).collect();
                r.sort_unstable();
                r.dedup();
                r
            })
            .collect();
        let n = ne * m;
        let mut col_ptr = Vec::with_capacity(n + 1);
        let mut row_idx = Vec::new();
        col_ptr.push(0);
        for rows in &rows_of {
            for _ in 0..m {
                for &k in rows {
                    row_idx.extend(k * m..(k + 1) * m);
                }
                col_ptr.push(row_idx.len());
            }
        }
        let symbolic = SymbolicSparseColMat::new_checked(n, n, col_ptr.clone(), None, row_idx.clone());
        Pattern {
            n,
            m,
            col_ptr,
            row_idx,
            rows_of,
            symbolic,
        }
    }

    /// Position of block `(k, l)` within the columns of element `l`.
    fn block(&self, k: usize, l: usize) -> usize {
        self.rows_of[l].iter().position(|&r| r == k).expect("blocks couple only neighbours")
    }

    /// Sorted row elements of the columns of element `l`.
    pub fn rows_of(&self, l: usize) -> &[usize] {
        &self.rows_of[l]
    }

    pub fn nnz(&self) -> usize {
        self.row_idx.len()
    }

    /// Whether global entry `(row, col)` is structurally present.
    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.row_idx[self.col_ptr[col]..self.col_ptr[col + 1]].binary_search(&row).is_ok()
    }
}

/// Sparse Jacobian sharing its pattern with the assembler.
#[derive(Clone, Debug)]
pub struct SparseJacobian {
    pub pattern: Arc<Pattern>,
    pub values: Vec<f64>,
}

impl SparseJacobian {
    pub fn nrows(&self) -> usize {
        self.pattern.n
    }

    /// `J x`
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let p = &self.pattern;
        let mut y = vec![0.0; p.n];
        for c in 0..p.n {
            for idx in p.col_ptr[c]..p.col_ptr[c + 1] {
                y[p.row_idx[idx]] += self.values[idx] * x[c];
            }
        }
        y
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        let p = &self.pattern;
        let range = p.col_ptr[col]..p.col_ptr[col + 1];
        match p.row_idx[range.clone()].binary_search(&row) {
            Ok(i) => self.values[range.start + i],
            Err(_) => 0.0,
        }
    }

    /// Row-major dense copy; for small systems only.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.pattern.n;
        let mut d = vec![vec![0.0; n]; n];
        for c in 0..n {
            for idx in self.pattern.col_ptr[c]..self.pattern.col_ptr[c + 1] {
                d[self.pattern.row_idx[idx]][c] = self.values[idx];
            }
        }
        d
    }
}

/// Assembles residuals and Jacobians of the scheme on one space.
pub struct Assembler {
    space: Arc<DgSpace>,
    params: ModelParams,
    nc: usize,
    nb: usize,
    pattern: Arc<Pattern>,
    potential: Option<FieldCoeffs>,
    pinned_row: Option<usize>,
    dissection: OnceLock<Dissection>,
    symbolic_lu: Mutex<Option<SymbolicLu<usize>>>,
}

impl std::fmt::Debug for Assembler {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Assembler").field("n", &self.pattern.n).field("pinned", &self.pinned_row).finish()
    }
}

fn gather(
    vec: &[f64],
    base: usize,
    nc: usize,
    nb: usize,
    tab: &Tabulation,
    q: usize,
    u: &mut [f64; MAX_COMP],
    g: &mut [[f64; 2]; MAX_COMP],
) {
    let vals = &tab.values[q * nb..(q + 1) * nb];
    let grads = &tab.grads[q * nb..(q + 1) * nb];
    for c in 0..nc {
        let m = &vec[base + c * nb..base + (c + 1) * nb];
        let (mut v, mut gr) = (0.0, [0.0; 2]);
        for i in 0..nb {
            v += m[i] * vals[i];
            gr[0] += m[i] * grads[i][0];
            gr[1] += m[i] * grads[i][1];
        }
        u[c] = v;
        g[c] = gr;
    }
}

impl Assembler {
    /// `potential` is the projected body-force potential, if any. With
    /// `pin_lambda` the divergence row of the first element's mean is replaced by
    /// `lambda_{0,0} = 0`.
    pub fn new(space: &Arc<DgSpace>, params: &ModelParams, potential: Option<FieldCoeffs>, pin_lambda: bool) -> Assembler {
        let d = space.dim();
        let nc = num_components(d);
        let nb = space.dofs_per_element();
        let pattern = Arc::new(Pattern::new(space, nc * nb));
        Assembler {
            space: space.clone(),
            params: params.clone(),
            nc,
            nb,
            pattern,
            potential,
            pinned_row: pin_lambda.then_some(kernel::lam(d) * nb),
            dissection: OnceLock::new(),
            symbolic_lu: Mutex::new(None),
        }
    }

    pub fn space(&self) -> &Arc<DgSpace> {
        &self.space
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.pattern.n
    }

    pub fn is_empty(&self) -> bool {
        self.pattern.n == 0
    }

    pub fn pattern(&self) -> &Arc<Pattern> {
        &self.pattern
    }

    pub fn potential(&self) -> Option<&FieldCoeffs> {
        self.potential.as_ref()
    }

    pub fn pinned_row(&self) -> Option<usize> {
        self.pinned_row
    }

    pub fn ctx(&self, mode: Mode) -> KernelCtx {
        KernelCtx::new(&self.params, self.space.dim(), self.space.degree(), mode)
    }

    fn pi_at(&self, k: usize, tab: &Tabulation, q: usize) -> f64 {
        match &self.potential {
            None => 0.0,
            Some(p) => {
                let nb = self.nb;
                p.modes(k, 0).iter().zip(&tab.values[q * nb..(q + 1) * nb]).map(|(a, b)| a * b).sum()
            }
        }
    }

    fn check(&self, old: &[f64], new: &[f64]) -> Result<()> {
        if old.len() != self.pattern.n || new.len() != self.pattern.n {
            return Err(Error::Shape(format!(
                "state vectors of length {} and {}, expected {}",
                old.len(),
                new.len(),
                self.pattern.n
            )));
        }
        if !new.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("state"));
        }
        Ok(())
    }

    fn element_residual(&self, ctx: &KernelCtx, k: usize, old: &[f64], new: &[f64], out: &mut [f64]) {
        let (nc, nb, d) = (self.nc, self.nb, ctx.dim);
        let tab = self.space.volume_tab(k);
        let base = k * nc * nb;
        let (mut u, mut g, mut uo, mut go) = ([0.0; MAX_COMP], [[0.0; 2]; MAX_COMP], [0.0; MAX_COMP], [[0.0; 2]; MAX_COMP]);
        let (mut f0, mut f1) = ([0.0; MAX_COMP], [[0.0; 2]; MAX_COMP]);
        for q in 0..tab.len() {
            gather(new, base, nc, nb, tab, q, &mut u, &mut g);
            gather(old, base, nc, nb, tab, q, &mut uo, &mut go);
            let m = midpoint(ctx, &u, &g, &uo, &go);
            volume(ctx, &m, self.pi_at(k, tab, q), &mut f0, &mut f1);
            let w = tab.weights[q];
            for r in 0..nc {
                for i in 0..nb {
                    let t = tab.values[q * nb + i];
                    let gt = tab.grads[q * nb + i];
                    let mut s = f0[r] * t;
                    for j in 0..d {
                        s += f1[r][j] * gt[j];
                    }
                    out[r * nb + i] += w * s;
                }
            }
        }
    }

    fn facet_residual(&self, ctx: &KernelCtx, f: usize, old: &[f64], new: &[f64], out: &mut [Vec<f64>]) {
        let (nc, nb, d) = (self.nc, self.nb, ctx.dim);
        let mesh = self.space.mesh();
        let facet_data = mesh.facet(f);
        let tabs = self.space.facet_tabs(f);
        let elems: Vec<usize> = std::iter::once(facet_data.k1).chain(facet_data.k2).collect();
        let h = mesh.facet_meshsize(f);
        let n = facet_data.normal;
        let normals = [n, [-n[0], -n[1]]];
        let (mut g0, mut g1) = ([[0.0; MAX_COMP]; 2], [[[0.0; 2]; MAX_COMP]; 2]);
        let (mut u, mut g, mut uo, mut go) = ([0.0; MAX_COMP], [[0.0; 2]; MAX_COMP], [0.0; MAX_COMP], [[0.0; 2]; MAX_COMP]);
        for q in 0..tabs[0].len() {
            let sides: Vec<Side<f64>> = elems
                .iter()
                .enumerate()
                .map(|(s, &k)| {
                    let base = k * nc * nb;
                    gather(new, base, nc, nb, &tabs[s], q, &mut u, &mut g);
                    gather(old, base, nc, nb, &tabs[s], q, &mut uo, &mut go);
                    Side {
                        mid: midpoint(ctx, &u, &g, &uo, &go),
                        pi: self.pi_at(k, &tabs[s], q),
                        n: normals[s],
                    }
                })
                .collect();
            facet(ctx, &sides, h, &mut g0, &mut g1);
            let w = tabs[0].weights[q];
            for s in 0..elems.len() {
                let tab = &tabs[s];
                for r in 0..nc {
                    for i in 0..nb {
                        let t = tab.values[q * nb + i];
                        let gt = tab.grads[q * nb + i];
                        let mut v = g0[s][r] * t;
                        for j in 0..d {
                            v += g1[s][r][j] * gt[j];
                        }
                        out[s][r * nb + i] += w * v;
                    }
                }
            }
        }
    }

    /// Galerkin residual of the system in `mode`; `old` is the previous level
    /// (the initial data for [`Mode::Initial`]) and `new` the unknown vector.
    pub fn residual(&self, mode: Mode, old: &[f64], new: &[f64]) -> Result<Vec<f64>> {
        self.check(old, new)?;
        let ctx = self.ctx(mode);
        let mesh = self.space.mesh();
        let m = self.nc * self.nb;
        let ne = mesh.num_elements();
        let nf = mesh.facets().len();
        let mut res = vec![0.0; self.pattern.n];

        for start in (0..ne).step_by(BATCH) {
            let locals: Vec<Vec<f64>> = (start..(start + BATCH).min(ne))
                .into_par_iter()
                .map(|k| {
                    let mut out = vec![0.0; m];
                    self.element_residual(&ctx, k, old, new, &mut out);
                    out
                })
                .collect();
            for (k, loc) in (start..).zip(locals) {
                for (r, v) in res[k * m..(k + 1) * m].iter_mut().zip(loc) {
                    *r += v;
                }
            }
        }
        for start in (0..nf).step_by(BATCH) {
            let locals: Vec<Vec<Vec<f64>>> = (start..(start + BATCH).min(nf))
                .into_par_iter()
                .map(|f| {
                    let sides = if mesh.facet(f).is_boundary() { 1 } else { 2 };
                    let mut out = vec![vec![0.0; m]; sides];
                    self.facet_residual(&ctx, f, old, new, &mut out);
                    out
                })
                .collect();
            for (f, loc) in (start..).zip(locals) {
                let facet_data = mesh.facet(f);
                for (k, side) in std::iter::once(facet_data.k1).chain(facet_data.k2).zip(loc) {
                    for (r, v) in res[k * m..(k + 1) * m].iter_mut().zip(side) {
                        *r += v;
                    }
                }
            }
        }
        if let Some(row) = self.pinned_row {
            res[row] = new[row];
        }
        if !res.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("residual"));
        }
        Ok(res)
    }

    /// Exact derivative of [`Assembler::residual`] with respect to `new`.
    pub fn jacobian(&self, mode: Mode, old: &[f64], new: &[f64]) -> Result<SparseJacobian> {
        self.check(old, new)?;
        match self.space.dim() {
            1 => self.jacobian_impl::<12, 24>(mode, old, new),
            2 => self.jacobian_impl::<24, 48>(mode, old, new),
            d => Err(Error::UnsupportedDimension("assembly", d)),
        }
    }

    fn seed<const N: usize>(&self, offset: usize, u: &[f64], g: &[[f64; 2]], su: &mut [Dual<N>; MAX_COMP], sg: &mut [[Dual<N>; 2]; MAX_COMP]) {
        let d = self.space.dim();
        for c in 0..self.nc {
            let b = offset + c * (1 + d);
            su[c] = Dual::var(u[c], b);
            for j in 0..2 {
                sg[c][j] = if j < d { Dual::var(g[c][j], b + 1 + j) } else { Dual::cst(0.0) };
            }
        }
    }

    /// Adds `w * (f0 T + f1 . grad T)` differentiated with respect to the trial
    /// variables starting at `offset` into the dense block (row-major).
    #[allow(clippy::too_many_arguments)]
    fn contract<const N: usize>(
        &self,
        w: f64,
        f0: &[Dual<N>; MAX_COMP],
        f1: &[[Dual<N>; 2]; MAX_COMP],
        test: (&Tabulation, usize),
        trial: (&Tabulation, usize),
        offset: usize,
        block: &mut [f64],
    ) {
        let (nc, nb, d) = (self.nc, self.nb, self.space.dim());
        let m = nc * nb;
        let (tt, q) = test;
        let (tr, q2) = trial;
        let tv = &tt.values[q * nb..(q + 1) * nb];
        let tg = &tt.grads[q * nb..(q + 1) * nb];
        let bv = &tr.values[q2 * nb..(q2 + 1) * nb];
        let bg = &tr.grads[q2 * nb..(q2 + 1) * nb];
        let mut a = vec![0.0; nb];
        let mut ag = [vec![0.0; nb], vec![0.0; nb]];
        for r in 0..nc {
            for c in 0..nc {
                let base = offset + c * (1 + d);
                let lin = |x: &Dual<N>, j: usize| -> f64 {
                    let mut s = x.eps[base] * bv[j];
                    for l in 0..d {
                        s += x.eps[base + 1 + l] * bg[j][l];
                    }
                    s
                };
                let mut any = false;
                for j in 0..nb {
                    a[j] = lin(&f0[r], j);
                    any |= a[j] != 0.0;
                    for l in 0..d {
                        ag[l][j] = lin(&f1[r][l], j);
                        any |= ag[l][j] != 0.0;
                    }
                }
                if !any {
                    continue;
                }
                for i in 0..nb {
                    let row = (r * nb + i) * m + c * nb;
                    for j in 0..nb {
                        let mut s = tv[i] * a[j];
                        for l in 0..d {
                            s += tg[i][l] * ag[l][j];
                        }
                        block[row + j] += w * s;
                    }
                }
            }
        }
    }

    fn element_jacobian<const N: usize>(&self, ctx: &KernelCtx, k: usize, old: &[f64], new: &[f64]) -> Vec<f64> {
        let (nc, nb) = (self.nc, self.nb);
        let m = nc * nb;
        let mut block = vec![0.0; m * m];
        let tab = self.space.volume_tab(k);
        let base = k * m;
        let (mut u, mut g, mut uo, mut go) = ([0.0; MAX_COMP], [[0.0; 2]; MAX_COMP], [0.0; MAX_COMP], [[0.0; 2]; MAX_COMP]);
        let mut su = [Dual::<N>::cst(0.0); MAX_COMP];
        let mut sg = [[Dual::<N>::cst(0.0); 2]; MAX_COMP];
        let mut f0 = [Dual::<N>::cst(0.0); MAX_COMP];
        let mut f1 = [[Dual::<N>::cst(0.0); 2]; MAX_COMP];
        for q in 0..tab.len() {
            gather(new, base, nc, nb, tab, q, &mut u, &mut g);
            gather(old, base, nc, nb, tab, q, &mut uo, &mut go);
            self.seed(0, &u, &g, &mut su, &mut sg);
            let mid = midpoint(ctx, &su, &sg, &uo, &go);
            volume(ctx, &mid, self.pi_at(k, tab, q), &mut f0, &mut f1);
            self.contract(tab.weights[q], &f0, &f1, (tab, q), (tab, q), 0, &mut block);
        }
        block
    }

    /// Blocks `[(s_test, s_trial)]` of one facet, row-major, indexed `s_test * sides + s_trial`.
    fn facet_jacobian<const N: usize, const N2: usize>(&self, ctx: &KernelCtx, f: usize, old: &[f64], new: &[f64]) -> Vec<Vec<f64>> {
        let (nc, nb, d) = (self.nc, self.nb, ctx.dim);
        let m = nc * nb;
        let mesh = self.space.mesh();
        let facet_data = mesh.facet(f);
        let tabs = self.space.facet_tabs(f);
        let elems: Vec<usize> = std::iter::once(facet_data.k1).chain(facet_data.k2).collect();
        let ns = elems.len();
        let h = mesh.facet_meshsize(f);
        let n = facet_data.normal;
        let normals = [n, [-n[0], -n[1]]];
        let mut blocks = vec![vec![0.0; m * m]; ns * ns];
        let (mut u, mut g, mut uo, mut go) = ([0.0; MAX_COMP], [[0.0; 2]; MAX_COMP], [0.0; MAX_COMP], [[0.0; 2]; MAX_COMP]);
        let mut su = [Dual::<N2>::cst(0.0); MAX_COMP];
        let mut sg = [[Dual::<N2>::cst(0.0); 2]; MAX_COMP];
        let mut g0 = [[Dual::<N2>::cst(0.0); MAX_COMP]; 2];
        let mut g1 = [[[Dual::<N2>::cst(0.0); 2]; MAX_COMP]; 2];
        let side_vars = nc * (1 + d);
        debug_assert!(side_vars == N);
        for q in 0..tabs[0].len() {
            let mut sides = Vec::with_capacity(2);
            for (s, &k) in elems.iter().enumerate() {
                let base = k * m;
                gather(new, base, nc, nb, &tabs[s], q, &mut u, &mut g);
                gather(old, base, nc, nb, &tabs[s], q, &mut uo, &mut go);
                self.seed(s * side_vars, &u, &g, &mut su, &mut sg);
                sides.push(Side {
                    mid: midpoint(ctx, &su, &sg, &uo, &go),
                    pi: self.pi_at(k, &tabs[s], q),
                    n: normals[s],
                });
            }
            facet(ctx, &sides, h, &mut g0, &mut g1);
            let w = tabs[0].weights[q];
            for st in 0..ns {
                for sr in 0..ns {
                    self.contract(w, &g0[st], &g1[st], (&tabs[st], q), (&tabs[sr], q), sr * side_vars, &mut blocks[st * ns + sr]);
                }
            }
        }
        blocks
    }

    fn scatter(&self, values: &mut [f64], k: usize, l: usize, block: &[f64]) {
        let p = &self.pattern;
        let m = p.m;
        let pos = p.block(k, l);
        let skip = if k == 0 { self.pinned_row } else { None };
        for c in 0..m {
            let start = p.col_ptr[l * m + c] + pos * m;
            for r in 0..m {
                if Some(r) == skip {
                    continue;
                }
                values[start + r] += block[r * m + c];
            }
        }
    }

    fn jacobian_impl<const N: usize, const N2: usize>(&self, mode: Mode, old: &[f64], new: &[f64]) -> Result<SparseJacobian> {
        let ctx = self.ctx(mode);
        let mesh = self.space.mesh();
        let ne = mesh.num_elements();
        let nf = mesh.facets().len();
        let mut values = vec![0.0; self.pattern.nnz()];
        for start in (0..ne).step_by(BATCH) {
            let blocks: Vec<Vec<f64>> = (start..(start + BATCH).min(ne))
                .into_par_iter()
                .map(|k| self.element_jacobian::<N>(&ctx, k, old, new))
                .collect();
            for (k, b) in (start..).zip(blocks) {
                self.scatter(&mut values, k, k, &b);
            }
        }
        for start in (0..nf).step_by(BATCH) {
            let blocks: Vec<Vec<Vec<f64>>> = (start..(start + BATCH).min(nf))
                .into_par_iter()
                .map(|f| self.facet_jacobian::<N, N2>(&ctx, f, old, new))
                .collect();
            for (f, b) in (start..).zip(blocks) {
                let facet_data = mesh.facet(f);
                let elems: Vec<usize> = std::iter::once(facet_data.k1).chain(facet_data.k2).collect();
                let ns = elems.len();
                for st in 0..ns {
                    for sr in 0..ns {
                        self.scatter(&mut values, elems[st], elems[sr], &b[st * ns + sr]);
                    }
                }
            }
        }
        if let Some(row) = self.pinned_row {
            let idx = self.pattern.col_ptr[row] + self.pattern.block(0, 0) * self.pattern.m + row;
            values[idx] = 1.0;
        }
        if !values.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("jacobian"));
        }
        Ok(SparseJacobian {
            pattern: self.pattern.clone(),
            values,
        })
    }

    /// Elimination tree of the multifrontal solver, built on first use.
    pub fn dissection(&self) -> &Dissection {
        self.dissection.get_or_init(|| Dissection::new(self.space.mesh(), &self.pattern.rows_of))
    }

    /// Solves `J x = rhs` by the multifrontal LU with iterative refinement,
    /// falling back to a general sparse LU when a front has no acceptable pivot.
    pub fn solve(&self, jac: &SparseJacobian, rhs: &[f64]) -> Result<Vec<f64>> {
        let tree = self.dissection();
        let out = match Factorization::new(tree, &self.pattern, jac) {
            Ok(f) => {
                let mut x = f.solve(tree, rhs);
                for _ in 0..REFINEMENT_STEPS {
                    let r: Vec<f64> = jac.matvec(&x).iter().zip(rhs).map(|(a, b)| b - a).collect();
                    for (xi, d) in x.iter_mut().zip(f.solve(tree, &r)) {
                        *xi += d;
                    }
                }
                x
            }
            Err(e) => {
                log::debug!("multifrontal factorisation failed ({e}); using sparse LU");
                self.solve_sparse_lu(jac, rhs)?
            }
        };
        if !out.iter().all(|v| v.is_finite()) {
            return Err(Error::Singular("LU solve produced non-finite values".into()));
        }
        Ok(out)
    }

    /// Solves `J x = rhs` by faer's sparse LU; the symbolic factorisation is reused.
    pub fn solve_sparse_lu(&self, jac: &SparseJacobian, rhs: &[f64]) -> Result<Vec<f64>> {
        let symbolic = {
            let mut guard = self.symbolic_lu.lock().expect("solver lock");
            if guard.is_none() {
                let sym = SymbolicLu::try_new(self.pattern.symbolic.as_ref()).map_err(|e| Error::Singular(format!("{e:?}")))?;
                *guard = Some(sym);
            }
            guard.clone().expect("just set")
        };
        let mat = SparseColMatRef::new(self.pattern.symbolic.as_ref(), &jac.values);
        let lu = Lu::try_new_with_symbolic(symbolic, mat).map_err(|e| Error::Singular(format!("{e:?}")))?;
        let b = Mat::from_fn(rhs.len(), 1, |i, _| rhs[i]);
        let x = lu.solve(&b);
        Ok((0..rhs.len()).map(|i| x[(i, 0)]).collect())
    }
}

const REFINEMENT_STEPS: usize = 2;

/// Evaluates all components of a global vector at a point of element `k`.
pub fn eval_vector(space: &DgSpace, vec: &[f64], k: usize, xi: &Point) -> (Vec<f64>, Vec<Point>) {
    let d = space.dim();
    let nc = num_components(d);
    let nb = space.dofs_per_element();
    let (v, g) = crate::dgspace::basis_eval(space, k, xi);
    let mut vals = vec![0.0; nc];
    let mut grads = vec![[0.0; 2]; nc];
    for c in 0..nc {
        for i in 0..nb {
            let coef = vec[(k * nc + c) * nb + i];
            vals[c] += coef * v[i];
            grads[c][0] += coef * g[i][0];
            grads[c][1] += coef * g[i][1];
        }
    }
    (vals, grads)
}
