//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Output is canonical: eigenvalues descend, eigenvectors inside a degenerate
//! cluster are rebuilt from the standard basis by Gram–Schmidt, and every
//! eigenvector's first non-negligible component is real and positive. Two
//! calls on matrices that agree to rounding therefore return the same basis.

use ndarray::{Array2, ArrayView2, Axis};

use crate::error::{Error, Result};
use crate::scalar::{re, Real, C};

const MAX_SWEEPS: usize = 100;

/// Eigenpairs of a Hermitian matrix; column `n` of `vectors` belongs to
/// `values[n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    pub vectors: Array2<C<T>>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn vector(&self, n: usize) -> Vec<C<T>> {
        self.vectors.column(n).to_vec()
    }

    /// max_n ‖A v_n − λ_n v_n‖
    pub fn max_residual(&self, a: ArrayView2<C<T>>) -> T {
        let av = a.dot(&self.vectors);
        let mut worst = T::zero();
        for (n, &lambda) in self.values.iter().enumerate() {
            let r = av
                .column(n)
                .iter()
                .zip(self.vectors.column(n))
                .map(|(x, v)| (x - v.scale(lambda)).norm_sqr())
                .sum::<T>()
                .sqrt();
            worst = worst.max(r);
        }
        worst
    }

    /// max |V^H V − I|
    pub fn orthonormality_error(&self) -> T {
        max_identity_deviation(&adjoint(&self.vectors).dot(&self.vectors))
    }
}

pub(crate) fn adjoint<T: Real>(m: &Array2<C<T>>) -> Array2<C<T>> {
    m.t().mapv(|x| x.conj())
}

pub(crate) fn max_identity_deviation<T: Real>(m: &Array2<C<T>>) -> T {
    m.indexed_iter()
        .map(|((i, j), x)| {
            let target = if i == j { re(T::one()) } else { C::default() };
            (x - target).norm()
        })
        .fold(T::zero(), T::max)
}

/// max |A − A^H|
pub fn hermitian_deviation<T: Real>(m: ArrayView2<C<T>>) -> T {
    m.indexed_iter()
        .map(|((i, j), x)| (x - m[[j, i]].conj()).norm())
        .fold(T::zero(), T::max)
}

/// Eigendecomposition of a Hermitian matrix with descending eigenvalues and
/// canonical eigenvectors.
pub fn eig_hermitian<T: Real>(m: ArrayView2<C<T>>) -> Result<HermitianEigen<T>> {
    let (rows, cols) = m.dim();
    if rows != cols {
        return Err(Error::Shape(format!("matrix is {rows}x{cols}, not square")));
    }
    let tol = T::tolerances();
    let scale = m.iter().map(|x| x.norm()).fold(T::one(), T::max);
    let deviation = hermitian_deviation(m);
    if !(deviation <= tol.hermitian * scale) {
        return Err(Error::NonHermitian {
            deviation: deviation.to_f64().unwrap_or(f64::NAN),
        });
    }

    let half = T::half();
    let mut a = Array2::from_shape_fn((rows, rows), |(i, j)| {
        (m[[i, j]] + m[[j, i]].conj()).scale(half)
    });
    let mut v = Array2::from_shape_fn((rows, rows), |(i, j)| {
        if i == j {
            re(T::one())
        } else {
            C::default()
        }
    });
    jacobi_sweeps(&mut a, &mut v);

    let diag: Vec<T> = (0..rows).map(|i| a[[i, i]].re).collect();
    let mut order: Vec<usize> = (0..rows).collect();
    order.sort_by(|&x, &y| diag[y].partial_cmp(&diag[x]).unwrap_or(std::cmp::Ordering::Equal));
    let values: Vec<T> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = v.select(Axis(1), &order);

    canonicalize(&values, &mut vectors);
    Ok(HermitianEigen { values, vectors })
}

fn off_diagonal_norm<T: Real>(a: &Array2<C<T>>) -> T {
    a.indexed_iter()
        .filter(|((i, j), _)| i != j)
        .map(|(_, x)| x.norm_sqr())
        .sum::<T>()
        .sqrt()
}

fn jacobi_sweeps<T: Real>(a: &mut Array2<C<T>>, v: &mut Array2<C<T>>) {
    let n = a.nrows();
    let frob = a.iter().map(|x| x.norm_sqr()).sum::<T>().sqrt();
    if frob == T::zero() {
        return;
    }
    let target = T::epsilon() * frob;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(a) <= target {
            return;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[[p, q]];
                let mag = apq.norm();
                if mag == T::zero() {
                    continue;
                }
                let w = apq / re(mag);
                let theta = (a[[q, q]].re - a[[p, p]].re) / (T::two() * mag);
                let t = theta.signum() / (theta.abs() + theta.hypot(T::one()));
                let cs = (t * t + T::one()).sqrt().recip();
                let sn = t * cs;
                let sw = w.scale(sn);
                let swc = sw.conj();
                for k in 0..n {
                    let (akp, akq) = (a[[k, p]], a[[k, q]]);
                    a[[k, p]] = akp.scale(cs) - akq * swc;
                    a[[k, q]] = akp * sw + akq.scale(cs);
                }
                for k in 0..n {
                    let (apk, aqk) = (a[[p, k]], a[[q, k]]);
                    a[[p, k]] = apk.scale(cs) - aqk * sw;
                    a[[q, k]] = apk * swc + aqk.scale(cs);
                }
                a[[p, q]] = C::default();
                a[[q, p]] = C::default();
                a[[p, p]] = re(a[[p, p]].re);
                a[[q, q]] = re(a[[q, q]].re);
                for k in 0..n {
                    let (vkp, vkq) = (v[[k, p]], v[[k, q]]);
                    v[[k, p]] = vkp.scale(cs) - vkq * swc;
                    v[[k, q]] = vkp * sw + vkq.scale(cs);
                }
            }
        }
    }
}

fn canonicalize<T: Real>(values: &[T], vectors: &mut Array2<C<T>>) {
    let n = values.len();
    let tol = T::tolerances();
    let mut start = 0;
    while start < n {
        let mut end = start;
        while end + 1 < n && values[end] - values[end + 1] < tol.degenerate {
            end += 1;
        }
        if end > start {
            rebuild_cluster(vectors, start, end + 1);
        }
        start = end + 1;
    }
    for col in 0..n {
        fix_phase(vectors, col, tol.phase);
    }
}

/// Replaces columns `lo..hi` with the Gram–Schmidt orthonormalization of the
/// standard basis vectors projected onto their span, taken in index order.
fn rebuild_cluster<T: Real>(vectors: &mut Array2<C<T>>, lo: usize, hi: usize) {
    let n = vectors.nrows();
    let m = hi - lo;
    let accept = T::tolerances().degenerate.sqrt();
    let span: Vec<Vec<C<T>>> = (lo..hi).map(|c| vectors.column(c).to_vec()).collect();
    let mut basis: Vec<Vec<C<T>>> = Vec::with_capacity(m);
    for k in 0..n {
        if basis.len() == m {
            break;
        }
        // P e_k = Σ_c u_c conj(u_c[k])
        let mut cand = vec![C::<T>::default(); n];
        for u in &span {
            let coeff = u[k].conj();
            for (x, ui) in cand.iter_mut().zip(u) {
                *x += ui * coeff;
            }
        }
        for _ in 0..2 {
            for b in &basis {
                let proj: C<T> = b.iter().zip(&cand).map(|(bi, xi)| bi.conj() * xi).sum();
                for (x, bi) in cand.iter_mut().zip(b) {
                    *x -= bi * proj;
                }
            }
        }
        let norm = cand.iter().map(|x| x.norm_sqr()).sum::<T>().sqrt();
        if norm > accept {
            let inv = norm.recip();
            basis.push(cand.into_iter().map(|x| x.scale(inv)).collect());
        }
    }
    // The projector has rank m, so the loop above always finds m directions;
    // keep the solver's own vectors if rounding ever says otherwise.
    if basis.len() == m {
        for (offset, b) in basis.into_iter().enumerate() {
            for (i, x) in b.into_iter().enumerate() {
                vectors[[i, lo + offset]] = x;
            }
        }
    }
}

fn fix_phase<T: Real>(vectors: &mut Array2<C<T>>, col: usize, threshold: T) {
    let mut column = vectors.column_mut(col);
    let Some(pivot) = column.iter().position(|x| x.norm() > threshold) else {
        return;
    };
    let p = column[pivot];
    let w = p.conj() / re(p.norm());
    column.mapv_inplace(|x| x * w);
    column[pivot] = re(column[pivot].re);
}
