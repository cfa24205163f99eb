//! Qubit channels in Kraus and Choi form.
//!
//! Besides application and CPTP checks this module decides whether a channel
//! has a CPTP inverse (Choi rank 1) and, when it does, reduces a possibly
//! redundant Kraus set to the single unitary it conjugates by. The reduction
//! goes through the Gram matrix `β_{a′a}` defined by `A_{a′}* A_a = β_{a′a} I`:
//! diagonalize `β = V Γ V*`, remix `C_c = Σ_a V_{ac} A_a` so that
//! `C_{c′}* C_c = γ_c δ_{c′c} I`, and read `U` off the SVD of the surviving
//! `C_c = √γ_c U`.

use num_complex::Complex64;

use crate::bloch::DensityOperator;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, svd};
use crate::matrix::{ComplexMatrix, ONE, ZERO};
use crate::pauli::{pauli_traces, paulis};
use crate::DEFAULT_TOL;

/// Kraus operators with Frobenius norm below this are dropped on ingestion.
pub const ZERO_OPERATOR_NORM: f64 = 1e-12;

/// Choi eigenvalues below this fraction of the largest one count as zero.
pub const RANK_RELATIVE_THRESHOLD: f64 = 1e-7;

const DIM: usize = 2;

/// A nonempty list of 2×2 Kraus operators.
///
/// Trace preservation is *not* enforced here so that non-CPTP sets can still
/// be inspected by [`is_cptp`] and [`classify`]; operations that need it
/// check it themselves.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausSet {
    operators: Vec<ComplexMatrix>,
}

impl KrausSet {
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        if let Some(bad) = operators.iter().find(|a| a.shape() != (DIM, DIM)) {
            return Err(Error::InvalidChannel(format!(
                "Kraus operators must be 2x2, got {:?}",
                bad.shape()
            )));
        }
        if operators.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFinite);
        }
        let operators: Vec<_> = operators
            .into_iter()
            .filter(|a| a.frobenius_norm() >= ZERO_OPERATOR_NORM)
            .collect();
        if operators.is_empty() {
            return Err(Error::InvalidChannel("no nonzero Kraus operators".into()));
        }
        Ok(Self { operators })
    }

    /// `{U}`
    pub fn from_unitary(u: &ComplexMatrix) -> Result<Self> {
        Self::new(vec![u.clone()])
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// `Σ_a A_a* A_a`
    pub fn completeness_sum(&self) -> ComplexMatrix {
        self.operators
            .iter()
            .fold(ComplexMatrix::zeros(DIM, DIM), |acc, a| &acc + &(&a.adjoint() * a))
    }

    /// `max |(Σ_a A_a* A_a − I)_ij|`
    pub fn tp_defect(&self) -> f64 {
        self.completeness_sum().max_abs_diff(&ComplexMatrix::identity(DIM))
    }

    /// `A′_a = Σ_i W_{ia} A_i` for a unitary `W`; describes the same channel.
    pub fn remix(&self, w: &ComplexMatrix) -> Result<KrausSet> {
        let m = self.len();
        if w.shape() != (m, m) {
            return Err(Error::Dimension {
                op: "remix",
                lhs: (m, m),
                rhs: w.shape(),
            });
        }
        if !w.is_unitary(DEFAULT_TOL) {
            return Err(Error::Domain("mixing matrix is not unitary".into()));
        }
        let ops = (0..m)
            .map(|a| {
                self.operators
                    .iter()
                    .enumerate()
                    .fold(ComplexMatrix::zeros(DIM, DIM), |acc, (i, op)| {
                        &acc + &op.scale(w[(i, a)])
                    })
            })
            .collect();
        KrausSet::new(ops)
    }

    /// `Σ_a A_a X A_a*` on an arbitrary 2×2 operator.
    pub fn act(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.operators.iter().fold(ComplexMatrix::zeros(DIM, DIM), |acc, a| {
            &acc + &(&(a * x) * &a.adjoint())
        })
    }
}

/// The 4×4 Choi matrix `J(Φ) = Σ_ij Φ(E_ij) ⊗ E_ij` (trace 2).
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix {
    matrix: ComplexMatrix,
}

impl ChoiMatrix {
    /// Validates Hermiticity, positivity and `Tr_out J = I`.
    pub fn new(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        if matrix.shape() != (DIM * DIM, DIM * DIM) {
            return Err(Error::InvalidChannel(format!(
                "Choi matrix must be 4x4, got {:?}",
                matrix.shape()
            )));
        }
        if !matrix.is_finite() {
            return Err(Error::NonFinite);
        }
        let herm = matrix.hermiticity_defect();
        if herm > tol {
            return Err(Error::InvalidChannel(format!(
                "Choi matrix not Hermitian (defect {herm:e})"
            )));
        }
        let choi = Self { matrix };
        let min = *choi.eigenvalues().last().expect("4 eigenvalues");
        if min < -tol {
            return Err(Error::InvalidChannel(format!(
                "Choi matrix not PSD (eigenvalue {min:e})"
            )));
        }
        let tp = choi.partial_trace_output().max_abs_diff(&ComplexMatrix::identity(DIM));
        if tp > tol {
            return Err(Error::InvalidChannel(format!("partial trace differs from I by {tp:e}")));
        }
        Ok(choi)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eig(&self.matrix)
            .expect("Choi matrix is Hermitian")
            .eigenvalues
    }

    pub fn rank(&self) -> usize {
        numerical_rank(&self.eigenvalues())
    }

    /// Trace over the first (output) tensor factor.
    pub fn partial_trace_output(&self) -> ComplexMatrix {
        partial_trace_first(&self.matrix)
    }

    /// Minimal Kraus set from the eigendecomposition `J = Σ λ_k |v_k⟩⟨v_k|`,
    /// with `(A_k)_{ri} = √λ_k (v_k)_{2r+i}`.
    pub fn to_kraus(&self) -> KrausSet {
        let eig = hermitian_eig(&self.matrix).expect("Choi matrix is Hermitian");
        let rank = numerical_rank(&eig.eigenvalues);
        let ops = (0..rank)
            .map(|k| {
                let scale = eig.eigenvalues[k].max(0.0).sqrt();
                let v = eig.eigenvectors.column(k);
                ComplexMatrix::from_vec(DIM, DIM, v.iter().map(|z| z * scale).collect()).expect("2x2")
            })
            .collect();
        KrausSet::new(ops).expect("rank >= 1 for a trace-2 Choi matrix")
    }
}

fn numerical_rank(eigenvalues: &[f64]) -> usize {
    let max = eigenvalues.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return 0;
    }
    eigenvalues
        .iter()
        .filter(|&&l| l > RANK_RELATIVE_THRESHOLD * max)
        .count()
}

fn partial_trace_first(j: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(DIM, DIM);
    for i in 0..DIM {
        for k in 0..DIM {
            out[(i, k)] = (0..DIM).map(|r| j[(DIM * r + i, DIM * r + k)]).sum();
        }
    }
    out
}

fn matrix_unit(i: usize, j: usize) -> ComplexMatrix {
    let mut e = ComplexMatrix::zeros(DIM, DIM);
    e[(i, j)] = ONE;
    e
}

fn choi_raw(k: &KrausSet) -> ComplexMatrix {
    let mut j = ComplexMatrix::zeros(DIM * DIM, DIM * DIM);
    for a in 0..DIM {
        for b in 0..DIM {
            let e = matrix_unit(a, b);
            j = &j + &k.act(&e).kron(&e);
        }
    }
    j
}

/// `Φ(ρ) = Σ_a A_a ρ A_a*`; fails if the set is not trace preserving.
pub fn apply_channel(k: &KrausSet, rho: &DensityOperator) -> Result<DensityOperator> {
    let defect = k.tp_defect();
    if defect > DEFAULT_TOL {
        return Err(Error::InvalidChannel(format!("Σ A*A differs from I by {defect:e}")));
    }
    Ok(DensityOperator::from_matrix_unchecked(k.act(rho.matrix())))
}

/// Choi matrix of a trace-preserving Kraus set.
pub fn choi_of(k: &KrausSet) -> Result<ChoiMatrix> {
    let defect = k.tp_defect();
    if defect > DEFAULT_TOL {
        return Err(Error::InvalidChannel(format!("Σ A*A differs from I by {defect:e}")));
    }
    Ok(ChoiMatrix { matrix: choi_raw(k) })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CptpReport {
    pub cptp: bool,
    /// `max |(Σ A*A − I)_ij|`
    pub tp_defect: f64,
    /// Smallest eigenvalue of the Choi matrix.
    pub min_choi_eigenvalue: f64,
    pub choi_eigenvalues: Vec<f64>,
}

/// TP via the completeness sum, CP via positivity of the Choi matrix.
pub fn is_cptp(k: &KrausSet, tol: f64) -> CptpReport {
    let tp_defect = k.tp_defect();
    let choi_eigenvalues = hermitian_eig(&choi_raw(k))
        .expect("Choi matrix is Hermitian")
        .eigenvalues;
    let min_choi_eigenvalue = *choi_eigenvalues.last().expect("4 eigenvalues");
    CptpReport {
        cptp: tp_defect <= tol && min_choi_eigenvalue >= -tol,
        tp_defect,
        min_choi_eigenvalue,
        choi_eigenvalues,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelKind {
    /// Choi rank 1: `Φ(ρ) = U ρ U*`, which is exactly the case with a CPTP inverse.
    UnitaryConjugation,
    CptpNotInvertible,
    NotCptp,
}

impl ChannelKind {
    pub fn has_cptp_inverse(self) -> bool {
        self == ChannelKind::UnitaryConjugation
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ChannelKind::UnitaryConjugation => "UnitaryConjugation",
            ChannelKind::CptpNotInvertible => "CptpNotInvertible",
            ChannelKind::NotCptp => "NotCptp",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChannelClassification {
    pub kind: ChannelKind,
    pub choi_rank: usize,
    /// Present for unitary conjugations; defined up to global phase, fixed so
    /// the largest-magnitude entry is real positive. Not normalized to det 1.
    pub extracted_unitary: Option<ComplexMatrix>,
    pub diagnostics: CptpReport,
}

pub fn classify(k: &KrausSet, tol: f64) -> ChannelClassification {
    let diagnostics = is_cptp(k, tol);
    let choi_rank = numerical_rank(&diagnostics.choi_eigenvalues);
    let (kind, extracted_unitary) = if !diagnostics.cptp {
        (ChannelKind::NotCptp, None)
    } else if choi_rank == 1 {
        match extract_unitary_via_gram(k, tol) {
            Ok((u, _)) => (ChannelKind::UnitaryConjugation, Some(u)),
            // rank 1 but not reducible within tol: treat as not invertible
            Err(_) => (ChannelKind::CptpNotInvertible, None),
        }
    } else {
        (ChannelKind::CptpNotInvertible, None)
    };
    ChannelClassification {
        kind,
        choi_rank,
        extracted_unitary,
        diagnostics,
    }
}

/// Intermediate data of the Gram-matrix reduction.
#[derive(Clone, Debug, PartialEq)]
pub struct GramData {
    /// `β_{a′a}` with `A_{a′}* A_a = β_{a′a} I`.
    pub beta: ComplexMatrix,
    /// Eigenvalues of `β`, descending.
    pub gamma: Vec<f64>,
    /// Columns are the eigenvectors of `β`: `β = V diag(γ) V*`.
    pub mixing: ComplexMatrix,
}

/// Reduces a Kraus set of a unitary conjugation to its single unitary.
///
/// Fails with [`Error::NotUnitaryConjugation`] naming the worst `(a′, a)` pair
/// if some `A_{a′}* A_a` is not a multiple of the identity within `tol`.
pub fn extract_unitary_via_gram(k: &KrausSet, tol: f64) -> Result<(ComplexMatrix, GramData)> {
    let defect = k.tp_defect();
    if defect > tol {
        return Err(Error::InvalidChannel(format!("Σ A*A differs from I by {defect:e}")));
    }
    let ops = k.operators();
    let m = ops.len();
    let id = ComplexMatrix::identity(DIM);

    let mut beta = ComplexMatrix::zeros(m, m);
    let mut worst = (0, 0, 0.0);
    for (ap, a_prime) in ops.iter().enumerate() {
        let a_prime_adj = a_prime.adjoint();
        for (a, op) in ops.iter().enumerate() {
            let prod = &a_prime_adj * op;
            let b = prod.trace()? / DIM as f64;
            let residual = prod.max_abs_diff(&id.scale(b));
            if residual > worst.2 {
                worst = (ap, a, residual);
            }
            beta[(ap, a)] = b;
        }
    }
    if worst.2 > tol {
        return Err(Error::NotUnitaryConjugation {
            row: worst.0,
            col: worst.1,
            residual: worst.2,
        });
    }

    let eig = hermitian_eig(&beta)?;
    let gamma: Vec<f64> = eig.eigenvalues.iter().map(|&g| g.max(0.0)).collect();
    let mixing = eig.eigenvectors;

    let g_max = gamma[0];
    let support: Vec<usize> = (0..m).filter(|&c| gamma[c] > RANK_RELATIVE_THRESHOLD * g_max).collect();

    let mut branches = Vec::with_capacity(support.len());
    for &c in &support {
        let cc = ops
            .iter()
            .enumerate()
            .fold(ComplexMatrix::zeros(DIM, DIM), |acc, (a, op)| {
                &acc + &op.scale(mixing[(a, c)])
            });
        // C_c = √γ_c Y U_c*: both singular values must equal √γ_c.
        let s = svd(&cc)?;
        let root = gamma[c].sqrt();
        let spread = s.singular_values.iter().map(|sv| (sv - root).abs()).fold(0.0, f64::max);
        if spread > tol {
            return Err(Error::NotUnitaryConjugation {
                row: c,
                col: c,
                residual: spread,
            });
        }
        branches.push((c, &s.left * &s.right.adjoint()));
    }

    let (c0, u) = branches[0].clone();
    for (c, uc) in &branches[1..] {
        let residual = phase_aligned_distance(&u, uc);
        if residual > tol {
            return Err(Error::NotUnitaryConjugation {
                row: c0,
                col: *c,
                residual,
            });
        }
    }

    Ok((fix_global_phase(&u), GramData { beta, gamma, mixing }))
}

/// Rephases `m` so that its largest-magnitude entry (first in row-major order,
/// within 1e-12) is real and positive.
pub fn fix_global_phase(m: &ComplexMatrix) -> ComplexMatrix {
    let max = m.max_abs();
    match m.as_slice().iter().find(|z| z.norm() >= max - 1e-12) {
        Some(&lead) if lead != ZERO => m.scale((lead / lead.norm()).conj()),
        _ => m.clone(),
    }
}

/// `min_θ max |a − e^{iθ} b|`, using the phase of `Tr(b* a)`.
pub fn phase_aligned_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let overlap = (&b.adjoint() * a).trace().unwrap_or(ZERO);
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        ONE
    };
    a.max_abs_diff(&b.scale(phase))
}

#[derive(Clone, Debug, PartialEq)]
pub struct InversePairReport {
    pub is_inverse: bool,
    /// `α_{ba}` with `B_b A_a = α_{ba} I`; rows index the inverse set.
    pub alpha: ComplexMatrix,
    /// `Σ_{a,b} |α_{ba}|²`
    pub alpha_norm_sq: f64,
    /// Worst `max |B_b A_a − α_{ba} I|`.
    pub max_residual: f64,
}

/// Checks that `{B_b}` undoes `{A_a}`: every `B_b A_a` must be a multiple of
/// the identity with `Σ |α_{ba}|² = 1`.
pub fn verify_inverse_pair(fwd: &KrausSet, inv: &KrausSet, tol: f64) -> InversePairReport {
    let id = ComplexMatrix::identity(DIM);
    let mut alpha = ComplexMatrix::zeros(inv.len(), fwd.len());
    let mut max_residual: f64 = 0.0;
    for (b, bb) in inv.operators().iter().enumerate() {
        for (a, aa) in fwd.operators().iter().enumerate() {
            let prod = bb * aa;
            let coeff = prod.trace().expect("2x2") / DIM as f64;
            max_residual = max_residual.max(prod.max_abs_diff(&id.scale(coeff)));
            alpha[(b, a)] = coeff;
        }
    }
    let alpha_norm_sq = alpha.as_slice().iter().map(Complex64::norm_sqr).sum::<f64>();
    InversePairReport {
        is_inverse: max_residual <= tol && (alpha_norm_sq - 1.0).abs() <= tol,
        alpha,
        alpha_norm_sq,
        max_residual,
    }
}

/// `{U*}` for a unitary conjugation `{U}` (in any redundant form).
pub fn invert(k: &KrausSet, tol: f64) -> Result<KrausSet> {
    let class = classify(k, tol);
    match class.extracted_unitary {
        Some(u) if class.kind == ChannelKind::UnitaryConjugation => KrausSet::from_unitary(&u.adjoint()),
        _ => Err(Error::NotInvertible {
            kind: class.kind,
            choi_rank: class.choi_rank,
        }),
    }
}

/// Action on Bloch vectors: `r ↦ M r + t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineAction {
    pub matrix: [[f64; 3]; 3],
    pub translation: [f64; 3],
}

impl AffineAction {
    pub fn apply(&self, r: [f64; 3]) -> [f64; 3] {
        std::array::from_fn(|k| (0..3).map(|j| self.matrix[k][j] * r[j]).sum::<f64>() + self.translation[k])
    }

    /// `MᵀM = I` and `t = 0` within `tol`.
    pub fn is_isometry(&self, tol: f64) -> bool {
        crate::so3::orthogonality_defect(&self.matrix) <= tol && self.translation.iter().all(|t| t.abs() <= tol)
    }
}

/// `M_kj = ½ Tr(σ_k Φ(σ_j))`, `t_k = ½ Tr(σ_k Φ(I))`.
pub fn bloch_affine_action(k: &KrausSet) -> Result<AffineAction> {
    let report = is_cptp(k, DEFAULT_TOL);
    if !report.cptp {
        return Err(Error::InvalidChannel(format!(
            "channel is not CPTP (TP defect {:e}, min Choi eigenvalue {:e})",
            report.tp_defect, report.min_choi_eigenvalue
        )));
    }
    let mut matrix = [[0.0; 3]; 3];
    for (j, sigma_j) in paulis().iter().enumerate() {
        let t = pauli_traces(&k.act(sigma_j));
        for row in 0..3 {
            matrix[row][j] = t[row].re / 2.0 + 0.0;
        }
    }
    let t = pauli_traces(&k.act(&ComplexMatrix::identity(DIM)));
    Ok(AffineAction {
        matrix,
        translation: t.map(|z| z.re / 2.0 + 0.0),
    })
}

/// `Φ(ρ) = p ρ + (1 − p) I/2` with Kraus operators
/// `{√(1 − 3q/4) I, √(q/4) σ_x, √(q/4) σ_y, √(q/4) σ_z}`, `q = 1 − p`.
pub fn make_depolarizing(p: f64) -> Result<KrausSet> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("depolarizing parameter {p} outside [0, 1]")));
    }
    let q = 1.0 - p;
    let mut ops = vec![ComplexMatrix::identity(DIM).scale_real((1.0 - 0.75 * q).sqrt())];
    ops.extend(paulis().iter().map(|s| s.scale_real((q / 4.0).sqrt())));
    KrausSet::new(ops)
}

/// `{[[1, 0], [0, √(1−g)]], [[0, √g], [0, 0]]}`
pub fn make_amplitude_damping(g: f64) -> Result<KrausSet> {
    if !(0.0..=1.0).contains(&g) {
        return Err(Error::Domain(format!("damping parameter {g} outside [0, 1]")));
    }
    let a0 = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, (1.0 - g).sqrt()])?;
    let a1 = ComplexMatrix::from_real(2, 2, &[0.0, g.sqrt(), 0.0, 0.0])?;
    KrausSet::new(vec![a0, a1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{bloch_to_density, density_to_bloch, BlochVector};
    use crate::isomorphism::phi_inverse;
    use crate::sampling;
    use crate::so3::AxisAngle;
    use crate::su2::{conjugate, normalize_phase, unitary_from_axis_angle, Unitary2};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unitary(axis: [f64; 3], angle: f64) -> Unitary2 {
        unitary_from_axis_angle(&AxisAngle::new(axis, angle).unwrap())
    }

    /// `A_a = Σ_c W_{ca} √w_c U`: every operator is a multiple `b_a U`.
    fn redundant_unitary(rng: &mut sampling::SeededRng, u: &ComplexMatrix, m: usize) -> (KrausSet, Vec<Complex64>) {
        let weights = sampling::probability_vector(rng, m);
        let w = sampling::unitary_matrix(rng, m);
        let b: Vec<Complex64> = (0..m)
            .map(|a| (0..m).map(|c| w[(c, a)] * weights[c].sqrt()).sum())
            .collect();
        let ops = b.iter().map(|&ba| u.scale(ba)).collect();
        (KrausSet::new(ops).unwrap(), b)
    }

    #[test]
    fn identity_channel() {
        let k = KrausSet::from_unitary(&ComplexMatrix::identity(2)).unwrap();
        let rho = bloch_to_density(BlochVector::new(0.1, 0.5, -0.2)).unwrap();
        assert_eq!(apply_channel(&k, &rho).unwrap(), rho);
        assert!(is_cptp(&k, 1e-9).cptp);
    }

    #[test]
    fn full_depolarizing_maximally_mixes() {
        let k = make_depolarizing(0.0).unwrap();
        for r in [BlochVector::new(0.0, 0.0, 1.0), BlochVector::new(0.6, 0.0, -0.8)] {
            let out = apply_channel(&k, &bloch_to_density(r).unwrap()).unwrap();
            assert!(out
                .matrix()
                .approx_eq(&ComplexMatrix::identity(2).scale_real(0.5), 1e-15));
        }
    }

    #[test]
    fn depolarizing_limits() {
        let k = make_depolarizing(1.0).unwrap();
        assert_eq!(k.operators(), &[ComplexMatrix::identity(2)]);
        assert!(make_depolarizing(1.5).is_err());
        assert!(make_depolarizing(-0.1).is_err());
        for p in [0.0, 0.25, 0.5, 0.99] {
            assert!(is_cptp(&make_depolarizing(p).unwrap(), 1e-12).cptp);
        }
    }

    #[test]
    fn single_unitary_channel_is_conjugation() {
        let u = unitary([0.0, 0.6, 0.8], 1.1);
        let k = KrausSet::from_unitary(u.matrix()).unwrap();
        let rho = bloch_to_density(BlochVector::new(0.3, 0.3, 0.3)).unwrap();
        let out = apply_channel(&k, &rho).unwrap();
        assert!(out.matrix().approx_eq(conjugate(&u, &rho).matrix(), 1e-15));
    }

    #[test]
    fn non_tp_channel_rejected_by_apply() {
        let k = KrausSet::new(vec![ComplexMatrix::identity(2).scale_real(2.0)]).unwrap();
        let rho = bloch_to_density(BlochVector::ORIGIN).unwrap();
        assert!(matches!(apply_channel(&k, &rho), Err(Error::InvalidChannel(_))));
        assert!(choi_of(&k).is_err());
    }

    #[test]
    fn kraus_set_ingestion() {
        assert!(KrausSet::new(vec![]).is_err());
        assert!(KrausSet::new(vec![ComplexMatrix::zeros(2, 2)]).is_err());
        assert!(KrausSet::new(vec![ComplexMatrix::identity(3)]).is_err());
        let k = KrausSet::new(vec![
            ComplexMatrix::identity(2),
            ComplexMatrix::zeros(2, 2).scale_real(1e-13),
        ])
        .unwrap();
        assert_eq!(k.len(), 1);
    }

    #[test]
    fn choi_of_identity_is_omega_projector() {
        let j = choi_of(&KrausSet::from_unitary(&ComplexMatrix::identity(2)).unwrap()).unwrap();
        let mut expected = ComplexMatrix::zeros(4, 4);
        for (r, cidx) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            expected[(r, cidx)] = ONE;
        }
        assert_eq!(j.matrix(), &expected);
        assert_eq!(j.rank(), 1);
        assert_eq!(j.matrix().trace().unwrap(), c(2.0, 0.0));
        assert!(j.partial_trace_output().approx_eq(&ComplexMatrix::identity(2), 1e-15));
    }

    #[test]
    fn depolarizing_choi_has_full_rank() {
        for p in [0.1, 0.5, 0.9] {
            let j = choi_of(&make_depolarizing(p).unwrap()).unwrap();
            assert_eq!(j.rank(), 4);
            // eigenvalues (1+3p)/2 and (1-p)/2 (x3)
            let eig = j.eigenvalues();
            assert!((eig[0] - (1.0 + 3.0 * p) / 2.0).abs() < 1e-14);
            for l in &eig[1..] {
                assert!((l - (1.0 - p) / 2.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn choi_round_trips_through_kraus() {
        let mut rng = sampling::seeded_rng(3);
        for k in [make_depolarizing(0.3).unwrap(), make_amplitude_damping(0.4).unwrap()] {
            let j = choi_of(&k).unwrap();
            let validated = ChoiMatrix::new(j.matrix().clone(), 1e-12).unwrap();
            let back = validated.to_kraus();
            assert_eq!(back.len(), j.rank());
            for _ in 0..10 {
                let rho = sampling::density(&mut rng);
                let lhs = apply_channel(&k, &rho).unwrap();
                let rhs = apply_channel(&back, &rho).unwrap();
                assert!(lhs.matrix().approx_eq(rhs.matrix(), 1e-12));
            }
        }
    }

    #[test]
    fn choi_validation() {
        assert!(ChoiMatrix::new(ComplexMatrix::identity(4), 1e-9).is_err());
        assert!(ChoiMatrix::new(ComplexMatrix::identity(2), 1e-9).is_err());
        assert!(ChoiMatrix::new(ComplexMatrix::identity(4).scale_real(0.5), 1e-9).is_ok());
    }

    #[test]
    fn remixing_preserves_choi_rank() {
        let mut rng = sampling::seeded_rng(4);
        for base in [make_depolarizing(0.4).unwrap(), make_amplitude_damping(0.7).unwrap()] {
            let w = sampling::unitary_matrix(&mut rng, base.len());
            let remixed = base.remix(&w).unwrap();
            assert_eq!(choi_of(&base).unwrap().rank(), choi_of(&remixed).unwrap().rank());
        }
    }

    #[test]
    fn cptp_examples() {
        let id = KrausSet::from_unitary(&ComplexMatrix::identity(2)).unwrap();
        assert!(is_cptp(&id, 1e-9).cptp);

        let h = 0.5f64.sqrt();
        let bit_flip = KrausSet::new(vec![
            ComplexMatrix::identity(2).scale_real(h),
            crate::pauli::sigma(0).scale_real(h),
        ])
        .unwrap();
        let report = is_cptp(&bit_flip, 1e-9);
        assert!(report.cptp);
        assert!(report.tp_defect < 1e-15);

        let doubled = KrausSet::new(vec![ComplexMatrix::identity(2).scale_real(2.0)]).unwrap();
        let report = is_cptp(&doubled, 1e-9);
        assert!(!report.cptp);
        assert!((report.tp_defect - 3.0).abs() < 1e-15);
    }

    #[test]
    fn classify_examples() {
        let u = unitary([0.0, 0.0, 1.0], PI / 3.0);
        let class = classify(&KrausSet::from_unitary(u.matrix()).unwrap(), 1e-9);
        assert_eq!(class.kind, ChannelKind::UnitaryConjugation);
        assert_eq!(class.choi_rank, 1);
        assert!(phase_aligned_distance(class.extracted_unitary.as_ref().unwrap(), u.matrix()) < 1e-12);

        let class = classify(&make_depolarizing(0.5).unwrap(), 1e-9);
        assert_eq!(class.kind, ChannelKind::CptpNotInvertible);
        assert_eq!(class.choi_rank, 4);

        let class = classify(&make_amplitude_damping(0.3).unwrap(), 1e-9);
        assert_eq!(class.kind, ChannelKind::CptpNotInvertible);
        assert_eq!(class.choi_rank, 2);

        let class = classify(
            &KrausSet::new(vec![ComplexMatrix::identity(2).scale_real(2.0)]).unwrap(),
            1e-9,
        );
        assert_eq!(class.kind, ChannelKind::NotCptp);
        assert!(class.extracted_unitary.is_none());
    }

    #[test]
    fn classify_recovers_unitary_from_redundant_set() {
        let mut rng = sampling::seeded_rng(8);
        let u = sampling::su2(&mut rng);
        let base = KrausSet::new(vec![
            u.matrix().scale_real(0.4f64.sqrt()),
            u.matrix().scale_real(0.6f64.sqrt()),
        ])
        .unwrap();
        let k = base.remix(&sampling::unitary_matrix(&mut rng, 2)).unwrap();
        let class = classify(&k, 1e-9);
        assert_eq!(class.kind, ChannelKind::UnitaryConjugation);
        assert!(phase_aligned_distance(class.extracted_unitary.as_ref().unwrap(), u.matrix()) < 1e-9);
    }

    #[test]
    fn extract_identity() {
        let (u, gram) =
            extract_unitary_via_gram(&KrausSet::from_unitary(&ComplexMatrix::identity(2)).unwrap(), 1e-9).unwrap();
        assert_eq!(u, ComplexMatrix::identity(2));
        assert_eq!(gram.beta, ComplexMatrix::identity(1));
        assert_eq!(gram.gamma, vec![1.0]);
    }

    #[test]
    fn extract_phased_single_operator() {
        let u = unitary([1.0, 0.0, 0.0], 1.1);
        let phased = u.matrix().scale(Complex64::from_polar(1.0, PI / 7.0));
        let (v, gram) = extract_unitary_via_gram(&KrausSet::from_unitary(&phased).unwrap(), 1e-9).unwrap();
        assert!(phase_aligned_distance(&v, u.matrix()) < 1e-14);
        assert!((gram.gamma[0] - 1.0).abs() < 1e-15);
        // largest entry is real positive
        let lead = v
            .as_slice()
            .iter()
            .copied()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap();
        assert!(lead.im.abs() < 1e-15 && lead.re > 0.0);
    }

    #[test]
    fn extract_three_element_redundant_set() {
        let mut rng = sampling::seeded_rng(9);
        for _ in 0..50 {
            let u = sampling::su2(&mut rng);
            let (k, b) = redundant_unitary(&mut rng, u.matrix(), 3);
            let (v, gram) = extract_unitary_via_gram(&k, 1e-9).unwrap();
            assert!(phase_aligned_distance(&v, u.matrix()) < 1e-9);
            // β = conj(b) bᵀ has spectrum {Σ|b|², 0, 0}
            let expected = [b.iter().map(|z| z.norm_sqr()).sum::<f64>(), 0.0, 0.0];
            for (g, e) in gram.gamma.iter().zip(expected) {
                assert!((g - e).abs() < 1e-10);
            }
            assert!(gram.beta.is_hermitian(1e-12));
            assert!((gram.beta.trace().unwrap() - 1.0).norm() < 1e-10);
            assert!(gram.mixing.is_unitary(1e-12));
        }
    }

    #[test]
    fn extract_rejects_non_unitary_channels() {
        let err = extract_unitary_via_gram(&make_depolarizing(0.5).unwrap(), 1e-9).unwrap_err();
        let Error::NotUnitaryConjugation { row, col, residual } = err else {
            panic!("{err:?}")
        };
        assert_ne!(row, col);
        assert!(residual > 0.1);
        assert!(matches!(
            extract_unitary_via_gram(
                &KrausSet::new(vec![ComplexMatrix::identity(2).scale_real(2.0)]).unwrap(),
                1e-9
            ),
            Err(Error::InvalidChannel(_))
        ));
    }

    #[test]
    fn inverse_pair_examples() {
        let u = unitary([0.0, 1.0, 0.0], 0.8);
        let fwd = KrausSet::from_unitary(u.matrix()).unwrap();
        let inv = KrausSet::from_unitary(&u.matrix().adjoint()).unwrap();
        let rep = verify_inverse_pair(&fwd, &inv, 1e-9);
        assert!(rep.is_inverse);
        assert!((rep.alpha[(0, 0)] - ONE).norm() < 1e-15);

        let v = unitary([1.0, 0.0, 0.0], 0.8);
        let wrong = KrausSet::from_unitary(&v.matrix().adjoint()).unwrap();
        assert!(!verify_inverse_pair(&fwd, &wrong, 1e-9).is_inverse);

        let mut rng = sampling::seeded_rng(10);
        let (f, _) = redundant_unitary(&mut rng, u.matrix(), 3);
        let (i, _) = redundant_unitary(&mut rng, &u.matrix().adjoint(), 2);
        let rep = verify_inverse_pair(&f, &i, 1e-9);
        assert!(rep.is_inverse);
        assert!((rep.alpha_norm_sq - 1.0).abs() < 1e-10);
        assert_eq!(rep.alpha.shape(), (2, 3));
    }

    #[test]
    fn invert_examples() {
        let id = KrausSet::from_unitary(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(invert(&id, 1e-9).unwrap(), id);

        let u = unitary([0.0, 0.0, 1.0], PI / 2.0);
        let k = KrausSet::from_unitary(u.matrix()).unwrap();
        let inv = invert(&k, 1e-9).unwrap();
        assert!(phase_aligned_distance(&inv.operators()[0], &u.matrix().adjoint()) < 1e-15);
        let mut rng = sampling::seeded_rng(12);
        for _ in 0..20 {
            let rho = sampling::density(&mut rng);
            let back = apply_channel(&inv, &apply_channel(&k, &rho).unwrap()).unwrap();
            assert!(back.matrix().approx_eq(rho.matrix(), 1e-12));
        }

        let err = invert(&make_depolarizing(0.5).unwrap(), 1e-9).unwrap_err();
        assert_eq!(
            err,
            Error::NotInvertible {
                kind: ChannelKind::CptpNotInvertible,
                choi_rank: 4
            }
        );
    }

    #[test]
    fn affine_action_examples() {
        let u = unitary([0.0, 0.6, 0.8], 2.2);
        let phased = u.matrix().scale(Complex64::from_polar(1.0, 0.4));
        let action = bloch_affine_action(&KrausSet::from_unitary(&phased).unwrap()).unwrap();
        let r = phi_inverse(&normalize_phase(&phased).unwrap()).unwrap();
        for j in 0..3 {
            for k in 0..3 {
                assert!((action.matrix[j][k] - r.matrix()[j][k]).abs() < 1e-12);
            }
        }
        assert!(action.is_isometry(1e-12));

        let p = 0.35;
        let action = bloch_affine_action(&make_depolarizing(p).unwrap()).unwrap();
        for j in 0..3 {
            for k in 0..3 {
                let expected = if j == k { p } else { 0.0 };
                assert!((action.matrix[j][k] - expected).abs() < 1e-12);
            }
        }
        assert_eq!(action.translation, [0.0; 3]);

        let g = 0.3;
        let action = bloch_affine_action(&make_amplitude_damping(g).unwrap()).unwrap();
        let s = (1.0 - g).sqrt();
        let expected = [[s, 0.0, 0.0], [0.0, s, 0.0], [0.0, 0.0, 1.0 - g]];
        for (row, expected_row) in action.matrix.iter().zip(&expected) {
            for (x, e) in row.iter().zip(expected_row) {
                assert!((x - e).abs() < 1e-15);
            }
        }
        assert!((action.translation[2] - g).abs() < 1e-15);
        assert!(!action.is_isometry(1e-9));

        let doubled = KrausSet::new(vec![ComplexMatrix::identity(2).scale_real(2.0)]).unwrap();
        assert!(bloch_affine_action(&doubled).is_err());
    }

    proptest! {
        #[test]
        fn channel_output_is_a_state(seed in any::<u64>(), p in 0.0f64..=1.0, g in 0.0f64..=1.0) {
            let mut rng = sampling::seeded_rng(seed);
            let rho = sampling::density(&mut rng);
            for k in [make_depolarizing(p).unwrap(), make_amplitude_damping(g).unwrap()] {
                let out = apply_channel(&k, &rho).unwrap();
                prop_assert!(DensityOperator::with_tolerance(out.matrix().clone(), 1e-10).is_ok());
            }
        }

        #[test]
        fn remixing_leaves_action_unchanged(seed in any::<u64>(), p in 0.0f64..1.0) {
            let mut rng = sampling::seeded_rng(seed);
            let k = make_depolarizing(p).unwrap();
            let remixed = k.remix(&sampling::unitary_matrix(&mut rng, k.len())).unwrap();
            let rho = sampling::density(&mut rng);
            let a = apply_channel(&k, &rho).unwrap();
            let b = apply_channel(&remixed, &rho).unwrap();
            prop_assert!(a.matrix().approx_eq(b.matrix(), 1e-11));
        }

        #[test]
        fn affine_action_predicts_channel_output(seed in any::<u64>(), g in 0.0f64..=1.0) {
            let mut rng = sampling::seeded_rng(seed);
            let k = make_amplitude_damping(g).unwrap()
                .remix(&sampling::unitary_matrix(&mut rng, 2)).unwrap();
            let action = bloch_affine_action(&k).unwrap();
            let r = sampling::bloch_in_ball(&mut rng);
            let direct = density_to_bloch(&apply_channel(&k, &bloch_to_density(r).unwrap()).unwrap());
            prop_assert!(BlochVector::from_array(action.apply(r.to_array())).max_abs_diff(direct) <= 1e-12);
        }

        #[test]
        fn rank_one_iff_extraction_succeeds(seed in any::<u64>(), m in 1usize..=4) {
            let mut rng = sampling::seeded_rng(seed);
            let u = sampling::su2(&mut rng);
            let (k, _) = redundant_unitary(&mut rng, u.matrix(), m);
            let class = classify(&k, 1e-9);
            prop_assert_eq!(class.choi_rank, 1);
            let (v, _) = extract_unitary_via_gram(&k, 1e-9).unwrap();
            let inv = invert(&k, 1e-9).unwrap();
            prop_assert!(is_cptp(&inv, 1e-10).cptp);
            let rho = sampling::density(&mut rng);
            let via_u = conjugate(&normalize_phase(&v).unwrap(), &rho);
            let via_k = apply_channel(&k, &rho).unwrap();
            prop_assert!(via_u.matrix().approx_eq(via_k.matrix(), 1e-10));
            let back = apply_channel(&inv, &via_k).unwrap();
            prop_assert!(back.matrix().approx_eq(rho.matrix(), 1e-10));
        }
    }
}
