//! Exact-size complex linear algebra for 4x4 Hermitian matrices.
//!
//! Everything the spectral concurrence path needs: a cyclic Jacobi
//! eigensolver and the positive-semidefinite matrix square root. The
//! problem size is fixed at 4, so all storage is inline and all
//! operations are pure functions on values.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// A complex 4-vector (state amplitudes or an eigenvector).
pub type Vec4 = [C64; 4];

/// Hermiticity tolerance accepted by [`herm_eigen`].
pub const HERMITICITY_TOL: f64 = 1e-9;

/// Eigenvalues above `-PSD_TOL` are treated as numerically nonnegative.
pub const PSD_TOL: f64 = 1e-10;

/// Jacobi sweep convergence threshold on off-diagonal magnitudes.
const OFF_DIAGONAL_TOL: f64 = 1e-13;

const MAX_SWEEPS: usize = 64;

/// Inner product `<a|b>` (conjugate-linear in the first argument).
pub fn inner(a: &Vec4, b: &Vec4) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Euclidean norm of a complex 4-vector.
pub fn norm(v: &Vec4) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Scales a vector by a complex factor.
pub fn scale(v: &Vec4, s: C64) -> Vec4 {
    [v[0] * s, v[1] * s, v[2] * s, v[3] * s]
}

/// Outer product `|a><b|`.
pub fn outer(a: &Vec4, b: &Vec4) -> Mat4 {
    let mut m = Mat4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            m[(i, j)] = a[i] * b[j].conj();
        }
    }
    m
}

/// A dense 4x4 complex matrix with value semantics.
///
/// Rows and columns are indexed by the computational two-qubit basis
/// order `|00>, |01>, |10>, |11>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat4 {
    e: [[C64; 4]; 4],
}

impl Mat4 {
    pub fn zeros() -> Self {
        Mat4 {
            e: [[C64::new(0.0, 0.0); 4]; 4],
        }
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            m.e[i][i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: [[C64; 4]; 4]) -> Self {
        Mat4 { e: rows }
    }

    pub fn diag(d: [f64; 4]) -> Self {
        let mut m = Self::zeros();
        for (i, val) in d.into_iter().enumerate() {
            m.e[i][i] = C64::new(val, 0.0);
        }
        m
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.e[i][j] = self.e[j][i].conj();
            }
        }
        m
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        let mut m = *self;
        for row in m.e.iter_mut() {
            for z in row.iter_mut() {
                *z = z.conj();
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        self.e[0][0] + self.e[1][1] + self.e[2][2] + self.e[3][3]
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut m = *self;
        for row in m.e.iter_mut() {
            for z in row.iter_mut() {
                *z *= s;
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &Vec4) -> Vec4 {
        let mut out = [C64::new(0.0, 0.0); 4];
        for (row, acc) in self.e.iter().zip(out.iter_mut()) {
            for (m_ij, v_j) in row.iter().zip(v) {
                *acc += m_ij * v_j;
            }
        }
        out
    }

    /// Largest entrywise magnitude.
    pub fn max_abs(&self) -> f64 {
        self.e
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise magnitude of `self - other`.
    pub fn max_abs_diff(&self, other: &Mat4) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.e[i][j] - other.e[i][j]).norm());
            }
        }
        worst
    }

    /// Largest magnitude of `M - M'`, zero for exactly Hermitian input.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.e[i][j] - self.e[j][i].conj()).norm());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.e
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<(usize, usize)> for Mat4 {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.e[i][j]
    }
}

impl IndexMut<(usize, usize)> for Mat4 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.e[i][j]
    }
}

impl Add for Mat4 {
    type Output = Mat4;
    fn add(self, rhs: Mat4) -> Mat4 {
        let mut m = self;
        for i in 0..4 {
            for j in 0..4 {
                m.e[i][j] += rhs.e[i][j];
            }
        }
        m
    }
}

impl Sub for Mat4 {
    type Output = Mat4;
    fn sub(self, rhs: Mat4) -> Mat4 {
        let mut m = self;
        for i in 0..4 {
            for j in 0..4 {
                m.e[i][j] -= rhs.e[i][j];
            }
        }
        m
    }
}

impl Mul for Mat4 {
    type Output = Mat4;
    fn mul(self, rhs: Mat4) -> Mat4 {
        let mut m = Mat4::zeros();
        for i in 0..4 {
            for k in 0..4 {
                let a = self.e[i][k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..4 {
                    m.e[i][j] += a * rhs.e[k][j];
                }
            }
        }
        m
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are real and sorted descending (stable on ties);
/// `eigenvectors[k]` is the orthonormal eigenvector paired with
/// `eigenvalues[k]`.
#[derive(Clone, Copy, Debug)]
pub struct HermEigenResult {
    pub eigenvalues: [f64; 4],
    pub eigenvectors: [Vec4; 4],
}

impl HermEigenResult {
    /// Rebuilds `sum_k lambda_k |v_k><v_k|`.
    pub fn reconstruct(&self) -> Mat4 {
        let mut m = Mat4::zeros();
        for k in 0..4 {
            m = m + outer(&self.eigenvectors[k], &self.eigenvectors[k]).scale(self.eigenvalues[k]);
        }
        m
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Each rotation annihilates one off-diagonal pair with a unitary plane
/// rotation; sweeps repeat until every off-diagonal magnitude is below
/// 1e-13. Deterministic and dependency-free for the fixed 4x4 case.
pub fn herm_eigen(m: &Mat4) -> Result<HermEigenResult> {
    let dev = m.hermiticity_deviation();
    if dev.is_nan() || dev > HERMITICITY_TOL {
        return Err(Error::NotHermitian { max_deviation: dev });
    }

    // Symmetrize once so rounding drift in the input cannot accumulate.
    let mut a = Mat4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            a[(i, j)] = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
        }
    }
    let mut v = Mat4::identity();

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..3 {
            for q in (p + 1)..4 {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off <= OFF_DIAGONAL_TOL {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }

    // Sort descending, stable in the original index on ties.
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| {
        a[(j, j)]
            .re
            .partial_cmp(&a[(i, i)].re)
            .unwrap()
            .then(i.cmp(&j))
    });

    let mut eigenvalues = [0.0f64; 4];
    let mut eigenvectors = [[C64::new(0.0, 0.0); 4]; 4];
    for (k, &c) in order.iter().enumerate() {
        eigenvalues[k] = a[(c, c)].re;
        for r in 0..4 {
            eigenvectors[k][r] = v[(r, c)];
        }
    }
    Ok(HermEigenResult {
        eigenvalues,
        eigenvectors,
    })
}

/// One Jacobi rotation zeroing `a[(p, q)]`, accumulating into `v`.
fn jacobi_rotate(a: &mut Mat4, v: &mut Mat4, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r < 1e-300 {
        a[(p, q)] = C64::new(0.0, 0.0);
        a[(q, p)] = C64::new(0.0, 0.0);
        return;
    }

    // Write a_pq = r e^{i phi}; a rotation with angle t = tan(theta) and
    // phase s = sin(theta) e^{-i phi} zeroes the pair when
    // (1 - t^2) r = t (a_pp - a_qq).
    let tau = (a[(p, p)].re - a[(q, q)].re) / (2.0 * r);
    let t = if tau == 0.0 {
        1.0
    } else {
        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let phase = apq / r;
    let s = phase.conj() * (t * c);

    let mut rot = Mat4::identity();
    rot[(p, p)] = C64::new(c, 0.0);
    rot[(q, q)] = C64::new(c, 0.0);
    rot[(p, q)] = -s.conj();
    rot[(q, p)] = s;

    *a = rot.adjoint() * *a * rot;
    *v = *v * rot;
    // Pin the annihilated pair against rounding residue.
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
}

/// Square root of a positive-semidefinite Hermitian matrix.
///
/// Eigenvalues in `[-1e-10, 0)` are clamped to zero before the square
/// root; anything more negative is rejected as not PSD.
pub fn sqrt_psd(m: &Mat4) -> Result<Mat4> {
    let eig = herm_eigen(m)?;
    let min_ev = eig.eigenvalues[3];
    if min_ev < -PSD_TOL {
        return Err(Error::NotPsd {
            min_eigenvalue: min_ev,
        });
    }
    let mut s = Mat4::zeros();
    for k in 0..4 {
        let ev = eig.eigenvalues[k].max(0.0);
        s = s + outer(&eig.eigenvectors[k], &eig.eigenvectors[k]).scale(ev.sqrt());
    }
    Ok(s)
}
