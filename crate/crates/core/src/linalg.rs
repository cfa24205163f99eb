//! Spectral factorizations for small dense matrices.
//!
//! `hermitian_eig` is a cyclic complex Jacobi method; `svd` is built on top of
//! it from the eigendecomposition of `M*M`. Both are meant for n ≤ 4 where
//! Jacobi converges in a handful of sweeps and is deterministic.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{inner, vec_norm, ComplexMatrix, ONE, ZERO};

const MAX_SWEEPS: usize = 100;

/// Relative Hermiticity tolerance accepted by [`hermitian_eig`].
pub const HERMITIAN_INPUT_TOL: f64 = 1e-9;

/// Eigenvalues sorted descending; eigenvectors are the matching columns.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianEigenResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigenResult {
    /// `V Λ V*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let lambda: Vec<Complex64> = self.eigenvalues.iter().map(|&l| Complex64::new(l, 0.0)).collect();
        let v = &self.eigenvectors;
        &(v * &ComplexMatrix::from_diagonal(&lambda)) * &v.adjoint()
    }
}

/// `left · diag(singular_values) · right*`.
#[derive(Clone, Debug, PartialEq)]
pub struct SvdResult {
    pub left: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub right: ComplexMatrix,
}

impl SvdResult {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let s: Vec<Complex64> = self.singular_values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        &(&self.left * &ComplexMatrix::from_diagonal(&s)) * &self.right.adjoint()
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Ordering is deterministic: eigenvalues descending (stable for exact ties),
/// and each eigenvector is rephased so its first non-negligible component is
/// real and positive.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEigenResult> {
    if !m.is_square() {
        return Err(Error::Dimension {
            op: "hermitian_eig",
            lhs: m.shape(),
            rhs: (m.cols(), m.rows()),
        });
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_INPUT_TOL * m.max_abs().max(1.0) {
        return Err(Error::Domain(format!("matrix is not Hermitian (defect {defect:e})")));
    }

    let n = m.rows();
    let mut a = (m + &m.adjoint()).scale_real(0.5);
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * 1e-2 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(y, y)].re.total_cmp(&a[(x, x)].re));

    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = v.column(src);
        fix_phase(&mut col);
        eigenvectors.set_column(dst, &col);
    }
    Ok(HermitianEigenResult {
        eigenvalues,
        eigenvectors,
    })
}

/// One complex Jacobi rotation annihilating `a[p][q]`.
///
/// The rotation is `J = D·P` where `D = diag(1, e^{-iθ})` on `(p, q)` makes
/// the pivot real and `P` is the classical real Jacobi rotation.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase_conj = (apq / mag).conj();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let j_pp = Complex64::new(c, 0.0);
    let j_pq = Complex64::new(s, 0.0);
    let j_qp = phase_conj * (-s);
    let j_qq = phase_conj * c;

    let n = a.rows();
    // A ← A J
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * j_pp + akq * j_qp;
        a[(k, q)] = akp * j_pq + akq * j_qq;
    }
    // A ← J* A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
    // V ← V J
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}

fn fix_phase(col: &mut [Complex64]) {
    if let Some(&lead) = col.iter().find(|z| z.norm() > 1e-12) {
        let rot = (lead / lead.norm()).conj();
        for z in col.iter_mut() {
            *z *= rot;
        }
    }
}

/// Singular value decomposition of a square matrix.
///
/// Right singular vectors come from `hermitian_eig(M*M)`; singular values are
/// recomputed as `‖M v_k‖`, and the left vectors are `M v_k / σ_k`
/// re-orthogonalized, completed to a unitary where `σ_k` vanishes.
pub fn svd(m: &ComplexMatrix) -> Result<SvdResult> {
    if !m.is_square() {
        return Err(Error::Dimension {
            op: "svd",
            lhs: m.shape(),
            rhs: (m.cols(), m.rows()),
        });
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = m.rows();
    let gram = &m.adjoint() * m;
    let eig = hermitian_eig(&gram)?;

    let mut pairs: Vec<(f64, Vec<Complex64>, Vec<Complex64>)> = (0..n)
        .map(|k| {
            let vk = eig.eigenvectors.column(k);
            let mv = m.mul_vec(&vk).expect("square");
            (vec_norm(&mv), vk, mv)
        })
        .collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));

    let sigma_max = pairs.first().map_or(0.0, |p| p.0);
    let cutoff = sigma_max * f64::EPSILON * 16.0;

    let mut left: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut right = ComplexMatrix::zeros(n, n);
    let mut singular_values = Vec::with_capacity(n);
    for (k, (sigma, vk, mv)) in pairs.into_iter().enumerate() {
        right.set_column(k, &vk);
        singular_values.push(sigma);
        let u = if sigma > cutoff && sigma > 0.0 {
            orthonormalize(mv, &left)
        } else {
            None
        };
        left.push(u.unwrap_or_else(|| complete_basis(&left, n)));
    }

    let mut left_m = ComplexMatrix::zeros(n, n);
    for (k, col) in left.iter().enumerate() {
        left_m.set_column(k, col);
    }
    Ok(SvdResult {
        left: left_m,
        singular_values,
        right,
    })
}

/// Gram–Schmidt `v` against `basis` (two passes); `None` if it collapses.
fn orthonormalize(mut v: Vec<Complex64>, basis: &[Vec<Complex64>]) -> Option<Vec<Complex64>> {
    let start = vec_norm(&v);
    for _ in 0..2 {
        for b in basis {
            let proj = inner(b, &v);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= proj * y;
            }
        }
    }
    let norm = vec_norm(&v);
    if norm <= start * 1e-8 || norm == 0.0 {
        return None;
    }
    Some(v.into_iter().map(|z| z / norm).collect())
}

fn complete_basis(basis: &[Vec<Complex64>], n: usize) -> Vec<Complex64> {
    (0..n)
        .filter_map(|j| {
            let mut e = vec![ZERO; n];
            e[j] = ONE;
            orthonormalize(e, basis)
        })
        .next()
        .expect("basis has fewer than n vectors")
}

/// Truncated exponential series `Σ_{k<terms} m^k / k!`.
///
/// No scaling and squaring: this is a brute-force reference, not a
/// production exponential. Use ≥ 40 terms for arguments of norm ~2π.
pub fn expm_taylor(m: &ComplexMatrix, terms: usize) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::Dimension {
            op: "expm_taylor",
            lhs: m.shape(),
            rhs: (m.cols(), m.rows()),
        });
    }
    let n = m.rows();
    let mut sum = ComplexMatrix::zeros(n, n);
    let mut term = ComplexMatrix::identity(n);
    for k in 0..terms {
        sum = &sum + &term;
        term = (&term * m).scale_real(1.0 / (k + 1) as f64);
    }
    Ok(sum)
}
