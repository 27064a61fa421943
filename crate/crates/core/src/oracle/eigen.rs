//! Cyclic Jacobi rotations for small dense real symmetric matrices.
//!
//! Robust on degenerate spectra and independent of every closed-form
//! expression in the crate; this is the reference path the closed forms are
//! checked against.

use serde::Serialize;

use super::Matrix;
use crate::{Error, Result, Scalar};

/// Largest dimension the dense routines accept.
pub const MAX_DIM: usize = 16;

/// Hard cap on Jacobi sweeps; exceeding it is reported as an error.
pub const MAX_SWEEPS: usize = 100;

/// Input must be symmetric to this absolute tolerance (scaled by `max(1, ‖M‖∞)`).
const SYMMETRY_TOL: f64 = 1e-12;

/// Rotate while `|a_pq| > ROTATION_TOL · max_i |a_ii|`.
const ROTATION_TOL: f64 = 1e-14;

/// Eigenvalues ascending, eigenvectors as the matching columns of `vectors`.
#[derive(Debug, Clone, Serialize)]
pub struct EigenDecomposition<S> {
    pub values: Vec<S>,
    pub vectors: Matrix<S>,
}

impl<S: Scalar> EigenDecomposition<S> {
    /// Column `i` of the eigenvector matrix.
    pub fn vector(&self, i: usize) -> Vec<S> {
        (0..self.vectors.dim())
            .map(|r| self.vectors[(r, i)])
            .collect()
    }

    /// `V · diag(values) · Vᵀ`.
    pub fn reconstruct(&self) -> Matrix<S> {
        self.vectors
            .matmul(&Matrix::diagonal(&self.values))
            .matmul(&self.vectors.transpose())
    }

    /// `max |VᵀV − I|`.
    pub fn orthonormality_error(&self) -> S {
        let n = self.vectors.dim();
        self.vectors
            .transpose()
            .matmul(&self.vectors)
            .sub(&Matrix::identity(n))
            .max_abs()
    }
}

fn check_square_symmetric<S: Scalar>(m: &Matrix<S>) -> Result<()> {
    let dim = m.dim();
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::Dimension { dim, max: MAX_DIM });
    }
    let scale = S::one().max(m.max_abs());
    let deviation = m.asymmetry();
    if !deviation.within(S::tol(SYMMETRY_TOL) * scale) {
        return Err(Error::NotSymmetric {
            deviation: deviation.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// Returns the plane rotation `(c, s)` that annihilates the pivot.
///
/// `theta = (a_qq - a_pp) / (2 a_pq)`; the smaller root of
/// `t² + 2θt − 1 = 0` keeps the rotation angle below π/4.
fn rotation<S: Scalar>(app: S, aqq: S, apq: S) -> (S, S) {
    let two = S::lit(2.0);
    let theta = (aqq - app) / (two * apq);
    let t = if theta.abs() > S::lit(1e150).min(S::max_value().sqrt()) {
        S::one() / (two * theta)
    } else {
        theta.signum() / (theta.abs() + (theta * theta + S::one()).sqrt())
    };
    let c = S::one() / (t * t + S::one()).sqrt();
    (c, t * c)
}

/// Full eigendecomposition of a real symmetric matrix.
///
/// The input is symmetrized (`(M + Mᵀ)/2`) after the symmetry check, so tiny
/// asymmetries from upstream arithmetic do not leak into the result. Output
/// is deterministic: eigenpairs are sorted ascending with a stable sort.
pub fn eigh_symmetric<S: Scalar>(m: &Matrix<S>) -> Result<EigenDecomposition<S>> {
    check_square_symmetric(m)?;
    let n = m.dim();
    let half = S::lit(0.5);
    let mut a = m.clone();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = half * (m[(i, j)] + m[(j, i)]);
            a[(i, j)] = avg;
            a[(j, i)] = avg;
        }
    }
    let mut v = Matrix::identity(n);
    let rel = S::tol(ROTATION_TOL);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let scale = (0..n).fold(S::zero(), |acc, i| acc.max(a[(i, i)].abs()));
        let threshold = rel * scale;
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == S::zero() || apq.abs() <= threshold {
                    continue;
                }
                rotated = true;
                let (c, s) = rotation(a[(p, p)], a[(q, q)], apq);
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = S::zero();
                a[(q, p)] = S::zero();
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NotConverged {
            routine: "jacobi eigensolver",
            sweeps: MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .partial_cmp(&a[(j, j)])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = Matrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, col)] = v[(r, src)];
        }
    }
    Ok(EigenDecomposition { values, vectors })
}

/// Singular values of a square matrix, descending.
///
/// One-sided (Hestenes) Jacobi: columns are orthogonalized pairwise and the
/// singular values are the final column norms. Small singular values come
/// out with absolute error of order `ε‖A‖`, with no square-root
/// amplification as happens when going through `AᵀA`.
pub fn singular_values<S: Scalar>(m: &Matrix<S>) -> Result<Vec<S>> {
    let n = m.dim();
    if n == 0 || n > MAX_DIM {
        return Err(Error::Dimension {
            dim: n,
            max: MAX_DIM,
        });
    }
    let mut a = m.clone();
    let eps = S::epsilon();
    let two = S::lit(2.0);
    // rounding in γ reaches n·ε·√(αβ); columns below ε‖A‖ are at the floor
    let threshold = eps * S::lit(n as f64);
    let floor = (eps * m.frobenius_norm()).powi(2);
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (mut alpha, mut beta, mut gamma) = (S::zero(), S::zero(), S::zero());
                for k in 0..n {
                    alpha = alpha + a[(k, p)] * a[(k, p)];
                    beta = beta + a[(k, q)] * a[(k, q)];
                    gamma = gamma + a[(k, p)] * a[(k, q)];
                }
                if gamma == S::zero()
                    || alpha.min(beta) <= floor
                    || gamma.abs() <= threshold * alpha.sqrt() * beta.sqrt()
                {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (two * gamma);
                let t = zeta.signum() / (zeta.abs() + (S::one() + zeta * zeta).sqrt());
                let c = S::one() / (S::one() + t * t).sqrt();
                let s = c * t;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NotConverged {
            routine: "one-sided jacobi svd",
            sweeps: MAX_SWEEPS,
        });
    }
    let mut sv: Vec<S> = (0..n)
        .map(|j| {
            (0..n)
                .fold(S::zero(), |acc, k| acc + a[(k, j)] * a[(k, j)])
                .sqrt()
        })
        .collect();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    Ok(sv)
}
