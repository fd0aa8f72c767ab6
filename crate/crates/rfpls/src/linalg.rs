//! Small dense linear-algebra kernels.
//!
//! The systems solved in this crate are tiny (at most `K + 1` unknowns for a
//! basis of size `K`), so plain Gaussian elimination and a cyclic Jacobi
//! eigensolver are used instead of an external LAPACK backend. All kernels
//! are deterministic and generic over [`Scalar`].

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Solve `a x = b` by Gaussian elimination with partial pivoting.
///
/// `a` is consumed as workspace. Fails with [`Error::SingularFit`] when a
/// pivot falls below a scale-relative tolerance.
pub fn solve<F: Scalar>(mut a: Array2<F>, b: &Array1<F>) -> Result<Array1<F>, F> {
    let n = a.nrows();
    if a.ncols() != n || b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "solve expects square system, got {}x{} with rhs {}",
            a.nrows(),
            a.ncols(),
            b.len()
        )));
    }
    let mut x = b.clone();
    // Relative pivot tolerance based on the largest entry of the matrix.
    let scale = a.iter().fold(F::zero(), |m, v| m.max(v.abs()));
    let tol = scale.max(F::one()) * F::c(1e-13) * F::c(f64::from(n as u32));

    for k in 0..n {
        let mut piv = k;
        let mut piv_val = a[(k, k)].abs();
        for i in (k + 1)..n {
            if a[(i, k)].abs() > piv_val {
                piv = i;
                piv_val = a[(i, k)].abs();
            }
        }
        if piv_val <= tol {
            return Err(Error::SingularFit(format!(
                "pivot {piv_val} at column {k} below tolerance"
            )));
        }
        if piv != k {
            for j in 0..n {
                let tmp = a[(k, j)];
                a[(k, j)] = a[(piv, j)];
                a[(piv, j)] = tmp;
            }
            x.swap(k, piv);
        }
        for i in (k + 1)..n {
            let factor = a[(i, k)] / a[(k, k)];
            if factor != F::zero() {
                for j in k..n {
                    let akj = a[(k, j)];
                    a[(i, j)] -= factor * akj;
                }
                let xk = x[k];
                x[i] -= factor * xk;
            }
        }
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for j in (i + 1)..n {
            s -= a[(i, j)] * x[j];
        }
        x[i] = s / a[(i, i)];
    }
    Ok(x)
}

/// Invert a square matrix by Gauss-Jordan elimination with partial pivoting.
pub fn inverse<F: Scalar>(a: &Array2<F>) -> Result<Array2<F>, F> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "inverse expects square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let mut work = a.clone();
    let mut inv = Array2::<F>::eye(n);
    let scale = a.iter().fold(F::zero(), |m, v| m.max(v.abs()));
    let tol = scale.max(F::one()) * F::c(1e-13) * F::c(f64::from(n as u32));

    for k in 0..n {
        let mut piv = k;
        let mut piv_val = work[(k, k)].abs();
        for i in (k + 1)..n {
            if work[(i, k)].abs() > piv_val {
                piv = i;
                piv_val = work[(i, k)].abs();
            }
        }
        if piv_val <= tol {
            return Err(Error::SingularFit(format!(
                "pivot {piv_val} at column {k} below tolerance"
            )));
        }
        if piv != k {
            for j in 0..n {
                work.swap((k, j), (piv, j));
                inv.swap((k, j), (piv, j));
            }
        }
        let d = work[(k, k)];
        for j in 0..n {
            work[(k, j)] /= d;
            inv[(k, j)] /= d;
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = work[(i, k)];
            if f != F::zero() {
                for j in 0..n {
                    let wkj = work[(k, j)];
                    let ikj = inv[(k, j)];
                    work[(i, j)] -= f * wkj;
                    inv[(i, j)] -= f * ikj;
                }
            }
        }
    }
    Ok(inv)
}

/// Eigendecomposition of a symmetric matrix by the cyclic Jacobi method.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvalues sorted in
/// nonincreasing order and eigenvectors as the corresponding columns.
pub fn sym_eigen<F: Scalar>(a: &Array2<F>) -> Result<(Array1<F>, Array2<F>), F> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "sym_eigen expects square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let mut m = a.clone();
    // Symmetrize defensively; callers pass matrices symmetric up to rounding.
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = (m[(i, j)] + m[(j, i)]) / F::c(2.0);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
    let mut v = Array2::<F>::eye(n);
    let eps = F::epsilon() * F::c(4.0);

    for _sweep in 0..100 {
        let mut off = F::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                off += m[(i, j)] * m[(i, j)];
            }
        }
        let norm = m.iter().fold(F::zero(), |s, x| s + *x * *x).sqrt();
        if off.sqrt() <= eps * norm.max(F::one()) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.abs() <= eps * norm.max(F::one()) {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                let theta = (aqq - app) / (F::c(2.0) * apq);
                // Stable rotation: t = sign(theta) / (|theta| + sqrt(theta^2 + 1)).
                let t = if theta >= F::zero() {
                    F::one() / (theta + (theta * theta + F::one()).sqrt())
                } else {
                    -F::one() / (-theta + (theta * theta + F::one()).sqrt())
                };
                let c = F::one() / (t * t + F::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        m[(j, j)]
            .partial_cmp(&m[(i, i)])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let eigvals = Array1::from_iter(order.iter().map(|&i| m[(i, i)]));
    let mut eigvecs = Array2::<F>::zeros((n, n));
    for (new_j, &old_j) in order.iter().enumerate() {
        for i in 0..n {
            eigvecs[(i, new_j)] = v[(i, old_j)];
        }
    }
    Ok((eigvals, eigvecs))
}

/// Symmetric square root `a^(1/2)` via the eigendecomposition.
///
/// Eigenvalues below `jitter` are floored at `jitter`; the returned flag
/// reports whether flooring happened.
pub fn sym_sqrt<F: Scalar>(a: &Array2<F>, jitter: F) -> Result<(Array2<F>, bool), F> {
    let (vals, vecs) = sym_eigen(a)?;
    let mut regularized = false;
    let n = a.nrows();
    let mut sqrt_vals = Array1::<F>::zeros(n);
    for i in 0..n {
        let v = if vals[i] < jitter {
            regularized = true;
            jitter
        } else {
            vals[i]
        };
        sqrt_vals[i] = v.sqrt();
    }
    let mut out = Array2::<F>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            let mut s = F::zero();
            for k in 0..n {
                s += vecs[(i, k)] * sqrt_vals[k] * vecs[(j, k)];
            }
            out[(i, j)] = s;
        }
    }
    Ok((out, regularized))
}

/// Column means of a matrix.
pub fn column_means<F: Scalar>(a: &Array2<F>) -> Array1<F> {
    let n = F::c(a.nrows() as f64);
    let mut out = Array1::<F>::zeros(a.ncols());
    for (j, col) in a.columns().into_iter().enumerate() {
        out[j] = col.iter().copied().sum::<F>() / n;
    }
    out
}
