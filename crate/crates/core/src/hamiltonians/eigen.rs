//! Lowest eigenpairs of real-symmetric matrices.
//!
//! The matrix is first split into the connected components of its sparsity
//! graph. Exactly conserved quantities (parity in the cusp at `v = 0`, the
//! Dicke and LMG models) then produce separate blocks, and eigenvectors come
//! out with a definite quantum number even when the splitting between the
//! two parity sectors is far below machine precision. Small blocks go to a
//! dense symmetric QR solver; large ones to Lanczos with full
//! reorthogonalization.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::{inf_norm, HamiltonianMatrix};
use crate::{Error, Result};

/// Blocks up to this size are diagonalized densely.
const DENSE_LIMIT: usize = 500;
const LANCZOS_MAX_KRYLOV: usize = 400;
const LANCZOS_MAX_RESTARTS: usize = 40;

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub energy: f64,
    pub vector: DVector<f64>,
}

/// The `k` lowest eigenpairs of `h`, ascending in energy.
///
/// Each pair satisfies `||H v - E v||_inf <= tol ||H||_inf`; vectors are
/// orthonormal and their first non-negligible coefficient is positive.
pub fn lowest_eigenpairs(h: &HamiltonianMatrix, tol: f64, k: usize) -> Result<Vec<Eigenpair>> {
    lowest_eigenpairs_dense(&h.matrix, tol, k)
}

/// Same as [`lowest_eigenpairs`] on a bare matrix.
pub fn lowest_eigenpairs_dense(m: &DMatrix<f64>, tol: f64, k: usize) -> Result<Vec<Eigenpair>> {
    assert!(m.is_square(), "eigensolver needs a square matrix");
    if k == 0 || !(tol > 0.0) {
        return Err(Error::InvalidParams(format!(
            "eigensolver needs k >= 1 and tol > 0 (got k = {k}, tol = {tol})"
        )));
    }
    let dim = m.nrows();
    let k = k.min(dim);
    let norm = inf_norm(m);
    let bound = tol * norm.max(f64::MIN_POSITIVE);

    let mut candidates: Vec<(f64, usize, DVector<f64>)> = Vec::new();
    for (order, comp) in components(m).into_iter().enumerate() {
        let want = k.min(comp.len());
        let sub = DMatrix::from_fn(comp.len(), comp.len(), |a, b| m[(comp[a], comp[b])]);
        let pairs = if comp.len() <= DENSE_LIMIT {
            dense_lowest(&sub, want)?
        } else {
            lanczos_lowest(&sub, want, norm, bound)?
        };
        for (e, v) in pairs {
            let mut full = DVector::zeros(dim);
            for (a, &idx) in comp.iter().enumerate() {
                full[idx] = v[a];
            }
            candidates.push((e, order, full));
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    candidates.truncate(k);

    let mut out = Vec::with_capacity(k);
    for (energy, _, mut vector) in candidates {
        fix_sign(&mut vector);
        let residual = (m * &vector - &vector * energy).amax();
        if residual > bound {
            return Err(Error::EigenConvergence { residual });
        }
        out.push(Eigenpair { energy, vector });
    }
    Ok(out)
}

/// First coefficient above `1e-10 * max|c|` made positive.
fn fix_sign(v: &mut DVector<f64>) {
    let scale = v.amax();
    if let Some(first) = v.iter().find(|c| c.abs() > 1e-10 * scale) {
        if *first < 0.0 {
            v.neg_mut();
        }
    }
}

/// Connected components of the nonzero pattern, each sorted, ordered by
/// smallest index.
fn components(m: &DMatrix<f64>) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for j in 0..n {
        for i in 0..j {
            if m[(i, j)] != 0.0 || m[(j, i)] != 0.0 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

fn dense_lowest(m: &DMatrix<f64>, k: usize) -> Result<Vec<(f64, DVector<f64>)>> {
    if m.nrows() == 1 {
        return Ok(vec![(m[(0, 0)], DVector::from_element(1, 1.0))]);
    }
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 10_000)
        .ok_or(Error::EigenConvergence { residual: f64::INFINITY })?;
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    Ok(order
        .into_iter()
        .take(k)
        .map(|c| (eig.eigenvalues[c], eig.eigenvectors.column(c).into_owned()))
        .collect())
}

/// Compressed rows for matrix-vector products.
struct Csr {
    row_start: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl Csr {
    fn from_dense(m: &DMatrix<f64>) -> Self {
        let mut row_start = vec![0];
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let v = m[(i, j)];
                if v != 0.0 {
                    cols.push(j);
                    vals.push(v);
                }
            }
            row_start.push(cols.len());
        }
        Csr {
            row_start,
            cols,
            vals,
        }
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for p in self.row_start[i]..self.row_start[i + 1] {
                acc += self.vals[p] * x[self.cols[p]];
            }
            *yi = acc;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Restarted Lanczos with full reorthogonalization. Restarts keep the
/// current Ritz vectors of interest folded into a single start vector.
fn lanczos_lowest(
    m: &DMatrix<f64>,
    k: usize,
    norm: f64,
    bound: f64,
) -> Result<Vec<(f64, DVector<f64>)>> {
    let n = m.nrows();
    let op = Csr::from_dense(m);
    let krylov = LANCZOS_MAX_KRYLOV.min(n);

    // Deterministic start vector with support on every index.
    let mut start: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i as f64 + 1.0) * 0.7548776662).sin()).collect();
    let mut best = f64::INFINITY;
    let mut locked: Vec<Vec<f64>> = Vec::new();
    let mut locked_vals: Vec<f64> = Vec::new();

    for _ in 0..LANCZOS_MAX_RESTARTS {
        // Deflate converged vectors out of the start vector.
        for q in &locked {
            let c = dot(q, &start);
            start.iter_mut().zip(q).for_each(|(s, qi)| *s -= c * qi);
        }
        let snorm = dot(&start, &start).sqrt();
        start.iter_mut().for_each(|s| *s /= snorm);

        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alpha: Vec<f64> = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut w = vec![0.0; n];
        let steps_left = krylov.saturating_sub(locked.len()).max(1);
        let mut ritz: Option<(DVector<f64>, DMatrix<f64>)> = None;
        for step in 0..steps_left {
            op.apply(&basis[step], &mut w);
            let a = dot(&w, &basis[step]);
            alpha.push(a);
            // Full reorthogonalization (twice) against locked and Krylov vectors.
            for _ in 0..2 {
                for q in locked.iter().chain(basis.iter()) {
                    let c = dot(q, &w);
                    w.iter_mut().zip(q).for_each(|(wi, qi)| *wi -= c * qi);
                }
            }
            let b = dot(&w, &w).sqrt();
            let invariant = b <= 1e-13 * norm;
            let last = step + 1 == steps_left || invariant;
            if step % 10 == 9 || last {
                let t = tridiag(&alpha, &beta);
                let eig = SymmetricEigen::new(t);
                let want = (k - locked.len()).min(alpha.len());
                let mut order: Vec<usize> = (0..alpha.len()).collect();
                order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
                let worst = order
                    .iter()
                    .take(want)
                    .map(|&c| (b * eig.eigenvectors[(alpha.len() - 1, c)]).abs())
                    .fold(0.0, f64::max);
                best = best.min(worst);
                ritz = Some((eig.eigenvalues.clone(), eig.eigenvectors.clone()));
                if worst <= 0.1 * bound || last {
                    break;
                }
            }
            beta.push(b);
            basis.push(w.iter().map(|x| x / b).collect());
        }
        let (vals, vecs) = ritz.expect("at least one Ritz evaluation");
        let steps = alpha.len();
        let mut order: Vec<usize> = (0..steps).collect();
        order.sort_by(|&x, &y| vals[x].total_cmp(&vals[y]));
        let want = (k - locked.len()).min(steps);

        let mut next_start = vec![0.0; n];
        for &c in order.iter().take(want) {
            let mut v = vec![0.0; n];
            for (j, q) in basis.iter().take(steps).enumerate() {
                let s = vecs[(j, c)];
                v.iter_mut().zip(q).for_each(|(vi, qi)| *vi += s * qi);
            }
            let nv = dot(&v, &v).sqrt();
            v.iter_mut().for_each(|x| *x /= nv);
            let mut hv = vec![0.0; n];
            op.apply(&v, &mut hv);
            let res = hv
                .iter()
                .zip(&v)
                .map(|(h, x)| (h - vals[c] * x).abs())
                .fold(0.0, f64::max);
            if res <= 0.5 * bound && locked.len() < k {
                locked.push(v);
                locked_vals.push(vals[c]);
            } else {
                next_start.iter_mut().zip(&v).for_each(|(s, x)| *s += x);
                best = best.min(res);
            }
        }
        if locked.len() >= k {
            let mut pairs: Vec<(f64, DVector<f64>)> = locked_vals
                .into_iter()
                .zip(locked)
                .map(|(e, v)| (e, DVector::from_vec(v)))
                .collect();
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
            return Ok(pairs);
        }
        if next_start.iter().all(|x| *x == 0.0) {
            next_start = start.clone();
        }
        start = next_start;
    }
    Err(Error::EigenConvergence { residual: best })
}

fn tridiag(alpha: &[f64], beta: &[f64]) -> DMatrix<f64> {
    let n = alpha.len();
    let mut t = DMatrix::zeros(n, n);
    for i in 0..n {
        t[(i, i)] = alpha[i];
        if i + 1 < n {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    t
}
