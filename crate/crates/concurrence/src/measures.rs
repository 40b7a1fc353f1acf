//! Entanglement quantities for two-qubit states.
//!
//! Pure-state concurrences (computational and magic-basis forms), the
//! spin-flip spectral concurrence for arbitrary mixed states, the
//! rank-2 closed form expressed through eigenstate concurrences and
//! their combinations, the corollary branch classifier with its bounds,
//! and the binary-entropy entanglement measure.

use crate::error::{Error, Result};
use crate::linalg::{herm_eigen, sqrt_psd, Mat4, C64};
use crate::states::{magic_basis_state, DensityMatrix, PureState, Rank2Decomposition};
use serde::{Deserialize, Serialize};

/// Default tolerance for corollary branch detection.
pub const BRANCH_TOL: f64 = 1e-9;

/// Eigenvalues of the spin-flip product below this are treated as the
/// zero eigenvalues of a rank-deficient matrix; clamping them before
/// the square root keeps eigensolver noise out of the lambda spectrum.
const LAMBDA_CLAMP: f64 = 1e-12;

/// Complex concurrences of a rank-2 eigenstate pair.
///
/// `c1`, `c2` are the unmodulated bilinears `2(a_i d_i - b_i c_i)` of
/// the eigenstates; `cplus`/`cminus` are the bilinears of the equal
/// combinations `(psi1 +- psi2)/sqrt(2)`.
#[derive(Clone, Copy, Debug)]
pub struct ComplexConcurrences {
    pub c1: C64,
    pub c2: C64,
    pub cplus: C64,
    pub cminus: C64,
}

impl ComplexConcurrences {
    /// The combination difference `cplus - cminus`
    /// `= 2 (a1 d2 + a2 d1 - b1 c2 - b2 c1)`.
    pub fn cross_diff(&self) -> C64 {
        self.cplus - self.cminus
    }
}

/// Intermediates of the closed form: the nonzero eigenvalues of the
/// spin-flip product are `omega_{+-} = x +- sqrt(y)`.
#[derive(Clone, Copy, Debug)]
pub struct ClosedFormIntermediates {
    pub x: f64,
    pub y: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
}

/// How a concurrence value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Spectral,
    ClosedForm,
}

/// Structural branch of the closed form detected for a decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    General,
    Corollary2Upper,
    Corollary2Mid,
    Corollary2Lower,
    Corollary3,
    Corollary4,
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::General => "general",
            Branch::Corollary2Upper => "corollary2_upper",
            Branch::Corollary2Mid => "corollary2_mid",
            Branch::Corollary2Lower => "corollary2_lower",
            Branch::Corollary3 => "corollary3",
            Branch::Corollary4 => "corollary4",
        }
    }
}

/// Branch classification plus the branch's predicted squared
/// concurrence (absent for the general branch).
#[derive(Clone, Copy, Debug)]
pub struct BranchReport {
    pub branch: Branch,
    pub predicted_sq: Option<f64>,
}

/// Full analysis result for one state.
///
/// `lambdas` is the descending spectrum whose alternating sum gives the
/// concurrence. `branch` and the bounds are present only when a rank-2
/// decomposition backed the computation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConcurrenceReport {
    pub lambdas: [f64; 4],
    pub concurrence: f64,
    pub concurrence_sq: f64,
    pub method: Method,
    pub branch: Option<Branch>,
    pub lower_bound: Option<f64>,
    pub upper_bound: Option<f64>,
    pub we_entropy: f64,
}

/// Pure-state concurrence `C = 2 |ad - bc|`.
pub fn pure_concurrence(psi: &PureState) -> f64 {
    complex_concurrence(psi).norm().min(1.0)
}

/// The unmodulated complex concurrence `2 (ad - bc)`; its norm is the
/// concurrence and it picks up `e^{2 i theta}` under a global phase.
pub fn complex_concurrence(psi: &PureState) -> C64 {
    let [a, b, c, d] = *psi.amplitudes();
    (a * d - b * c) * 2.0
}

/// Concurrence as `|sum_k alpha_k^2|` over the magic-basis expansion;
/// agrees with [`pure_concurrence`] to machine precision.
pub fn magic_concurrence(psi: &PureState) -> f64 {
    let mut sum = C64::new(0.0, 0.0);
    for k in 1..=4 {
        let e = magic_basis_state(k).expect("k in range");
        let alpha = e.inner(psi);
        sum += alpha * alpha;
    }
    sum.norm()
}

/// Which qubit to reduce onto.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Pauli expectation vector of the reduced one-qubit state,
/// `rho_red = (I + xi . sigma) / 2`. For pure two-qubit states
/// `|xi|^2 = 1 - C^2`.
pub fn polarized_vector(psi: &PureState, subsystem: Subsystem) -> [f64; 3] {
    let amp = psi.amplitudes();
    // Reduced 2x2 matrix: trace out the other qubit.
    let mut red = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                red[i][j] += match subsystem {
                    Subsystem::A => amp[2 * i + k] * amp[2 * j + k].conj(),
                    Subsystem::B => amp[2 * k + i] * amp[2 * k + j].conj(),
                };
            }
        }
    }
    // tr(rho sigma_x), tr(rho sigma_y), tr(rho sigma_z) for Hermitian rho.
    [
        2.0 * red[0][1].re,
        -2.0 * red[0][1].im,
        red[0][0].re - red[1][1].re,
    ]
}

/// Spin flip `(sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y)` in the
/// computational basis; an involution preserving Hermiticity, trace and
/// positivity.
pub fn spin_flip(rho: &DensityMatrix) -> Mat4 {
    // sigma_y (x) sigma_y is the antidiagonal (-1, 1, 1, -1), so the
    // conjugated matrix is index-reversed with sign pattern s_i s_j.
    const SIGN: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
    let m = rho.matrix();
    let mut out = Mat4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            out[(i, j)] = m[(3 - i, 3 - j)].conj() * (SIGN[i] * SIGN[j]);
        }
    }
    out
}

/// The Hermitian product `rho^{1/2} rho~ rho^{1/2}` whose spectrum
/// carries the mixed-state concurrence.
pub fn wootters_matrix(rho: &DensityMatrix) -> Result<Mat4> {
    let s = sqrt_psd(rho.matrix())?;
    Ok(s * spin_flip(rho) * s)
}

/// Descending square roots of the eigenvalues of
/// `rho^{1/2} rho~ rho^{1/2}`.
pub fn wootters_lambdas(rho: &DensityMatrix) -> Result<[f64; 4]> {
    let m = wootters_matrix(rho)?;
    let eig = herm_eigen(&m)?;
    let mut lambdas = [0.0f64; 4];
    for (l, ev) in lambdas.iter_mut().zip(eig.eigenvalues) {
        *l = if ev < LAMBDA_CLAMP { 0.0 } else { ev.sqrt() };
    }
    // Clamping cannot disturb the descending order.
    Ok(lambdas)
}

/// Spectral concurrence `C = max(l1 - l2 - l3 - l4, 0)` for a mixed
/// state of any rank.
pub fn spectral_concurrence(rho: &DensityMatrix) -> Result<ConcurrenceReport> {
    let lambdas = wootters_lambdas(rho)?;
    let concurrence = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0);
    Ok(ConcurrenceReport {
        lambdas,
        concurrence,
        concurrence_sq: concurrence * concurrence,
        method: Method::Spectral,
        branch: None,
        lower_bound: None,
        upper_bound: None,
        we_entropy: entanglement_of_concurrence(concurrence)?,
    })
}

/// Complex concurrences of the eigenstates and of their equal
/// combinations `(psi1 +- psi2)/sqrt(2)`.
pub fn combo_concurrences(d: &Rank2Decomposition) -> ComplexConcurrences {
    let [a1, b1, c1, d1] = *d.psi1().amplitudes();
    let [a2, b2, c2, d2] = *d.psi2().amplitudes();
    ComplexConcurrences {
        c1: (a1 * d1 - b1 * c1) * 2.0,
        c2: (a2 * d2 - b2 * c2) * 2.0,
        cplus: (a1 + a2) * (d1 + d2) - (b1 + b2) * (c1 + c2),
        cminus: (a1 - a2) * (d1 - d2) - (b1 - b2) * (c1 - c2),
    }
}

/// Closed-form eigenvalues of the spin-flip product for a rank-2 state:
/// `omega_{+-} = x +- sqrt(y)` with
/// `x = (v1^2 C1^2 + v2^2 C2^2)/2 + (v1 v2 / 4) |c+ - c-|^2` and
/// `y = x^2 - (v1 v2 / 4)^2 |(c+ - c-)^2 - 4 c1 c2|^2`.
pub fn closed_form_xy(d: &Rank2Decomposition) -> ClosedFormIntermediates {
    let cc = combo_concurrences(d);
    let (v1, v2) = (d.v1(), d.v2());
    let diff = cc.cross_diff();
    let x = 0.5 * (v1 * v1 * cc.c1.norm_sqr() + v2 * v2 * cc.c2.norm_sqr())
        + 0.25 * v1 * v2 * diff.norm_sqr();
    let cross = diff * diff - cc.c1 * cc.c2 * 4.0;
    let y_raw = x * x - (v1 * v1 * v2 * v2 / 16.0) * cross.norm_sqr();
    // y is a difference of squared norms: mathematically >= 0, allowed
    // to dip below by rounding only.
    assert!(
        y_raw >= -1e-12,
        "closed-form discriminant out of range: y = {y_raw:e}"
    );
    let y = y_raw.max(0.0);
    let root = y.sqrt();
    ClosedFormIntermediates {
        x,
        y,
        omega_plus: x + root,
        omega_minus: (x - root).max(0.0),
    }
}

/// Corollary One bounds on the squared concurrence:
/// `(v1 C1 - v2 C2)^2 <= C^2 <= (v1 C1 + v2 C2)^2`.
pub fn concurrence_bounds(d: &Rank2Decomposition) -> (f64, f64) {
    let cc = combo_concurrences(d);
    let t1 = d.v1() * cc.c1.norm();
    let t2 = d.v2() * cc.c2.norm();
    ((t1 - t2) * (t1 - t2), (t1 + t2) * (t1 + t2))
}

/// Classifies which structural corollary applies to a decomposition and
/// predicts the squared concurrence for the firing branch.
///
/// Checked in order of specificity:
/// - a separable eigenstate (`|c1|` or `|c2| <= tol`) pins
///   `C^2 = v2^2 C2^2` or `v1^2 C1^2`;
/// - vanishing combination difference (`|c+ - c-| <= tol`) pins the
///   lower bound `(v1 C1 - v2 C2)^2`;
/// - all-real amplitudes select upper / intermediate / lower forms by
///   the signs of the real concurrences.
///
/// Firing branches always agree with the full closed form, so ties
/// between guards are harmless.
pub fn corollary_branch(d: &Rank2Decomposition, tol: f64) -> BranchReport {
    let cc = combo_concurrences(d);
    let (v1, v2) = (d.v1(), d.v2());
    let (n1, n2) = (cc.c1.norm(), cc.c2.norm());

    if n1 <= tol {
        return BranchReport {
            branch: Branch::Corollary4,
            predicted_sq: Some(v2 * v2 * n2 * n2),
        };
    }
    if n2 <= tol {
        return BranchReport {
            branch: Branch::Corollary4,
            predicted_sq: Some(v1 * v1 * n1 * n1),
        };
    }

    let diff = cc.cross_diff();
    if diff.norm() <= tol {
        let lower = v1 * n1 - v2 * n2;
        return BranchReport {
            branch: Branch::Corollary3,
            predicted_sq: Some(lower * lower),
        };
    }

    let all_real = d
        .psi1()
        .amplitudes()
        .iter()
        .chain(d.psi2().amplitudes())
        .all(|z| z.im.abs() <= tol);
    if all_real {
        // Signed real concurrences drive the sub-branch selection.
        let c1r = cc.c1.re;
        let c2r = cc.c2.re;
        let dr = diff.re;
        let (branch, predicted) = if c1r * c2r <= 0.0 {
            let lower = v1 * n1 - v2 * n2;
            (Branch::Corollary2Lower, lower * lower)
        } else if dr * dr >= 4.0 * c1r * c2r {
            let upper = v1 * n1 + v2 * n2;
            (Branch::Corollary2Upper, upper * upper)
        } else {
            let lower = v1 * n1 - v2 * n2;
            (Branch::Corollary2Mid, lower * lower + v1 * v2 * dr * dr)
        };
        return BranchReport {
            branch,
            predicted_sq: Some(predicted),
        };
    }

    BranchReport {
        branch: Branch::General,
        predicted_sq: None,
    }
}

/// Squared concurrence of a rank-2 state from its eigenstate
/// concurrences alone:
/// `C^2 = v1^2 C1^2 + v2^2 C2^2 + (v1 v2 / 2) |c+ - c-|^2
///        - (v1 v2 / 2) |(c+ - c-)^2 - 4 c1 c2|`.
pub fn closed_form_concurrence_sq(d: &Rank2Decomposition) -> f64 {
    let cc = combo_concurrences(d);
    let (v1, v2) = (d.v1(), d.v2());
    let diff = cc.cross_diff();
    let cross = diff * diff - cc.c1 * cc.c2 * 4.0;
    v1 * v1 * cc.c1.norm_sqr() + v2 * v2 * cc.c2.norm_sqr()
        + 0.5 * v1 * v2 * diff.norm_sqr()
        - 0.5 * v1 * v2 * cross.norm()
}

/// Full closed-form report for a rank-2 decomposition, including the
/// corollary branch and the Corollary One bounds.
pub fn closed_form_concurrence(d: &Rank2Decomposition) -> ConcurrenceReport {
    let concurrence_sq = closed_form_concurrence_sq(d);
    let concurrence = concurrence_sq.max(0.0).sqrt().min(1.0);
    let xy = closed_form_xy(d);
    let (lower, upper) = concurrence_bounds(d);
    let branch = corollary_branch(d, BRANCH_TOL).branch;
    ConcurrenceReport {
        lambdas: [xy.omega_plus.sqrt(), xy.omega_minus.sqrt(), 0.0, 0.0],
        concurrence,
        concurrence_sq,
        method: Method::ClosedForm,
        branch: Some(branch),
        lower_bound: Some(lower),
        upper_bound: Some(upper),
        we_entropy: entanglement_of_concurrence(concurrence)
            .expect("concurrence is clamped to [0, 1]"),
    }
}

fn check_unit_interval(value: f64) -> Result<f64> {
    if !value.is_finite() || !(-1e-12..=1.0 + 1e-12).contains(&value) {
        return Err(Error::Domain { value });
    }
    Ok(value.clamp(0.0, 1.0))
}

/// Binary entropy `H(z) = -z log2 z - (1 - z) log2(1 - z)` in ebits,
/// with `0 log 0 = 0`. Inputs may stray from `[0, 1]` by at most 1e-12.
pub fn binary_entropy(zval: f64) -> Result<f64> {
    let z = check_unit_interval(zval)?;
    let mut h = 0.0;
    for p in [z, 1.0 - z] {
        if p > 0.0 {
            h -= p * p.log2();
        }
    }
    Ok(h)
}

/// Entropy argument `z = (1 + sqrt(1 - C^2)) / 2`.
pub fn z_of_concurrence(concurrence: f64) -> Result<f64> {
    let c = check_unit_interval(concurrence)?;
    Ok((1.0 + (1.0 - c * c).max(0.0).sqrt()) / 2.0)
}

/// The entanglement measure `H(z(C))`: 0 at `C = 0`, 1 ebit at `C = 1`,
/// strictly increasing in between.
pub fn entanglement_of_concurrence(concurrence: f64) -> Result<f64> {
    binary_entropy(z_of_concurrence(concurrence)?)
}

/// Average eigenstate entanglement `v1 H(z(C1)) + v2 H(z(C2))`; an upper
/// reference for the decomposition-minimized entanglement of formation.
pub fn eigen_average_entanglement(d: &Rank2Decomposition) -> f64 {
    let cc = combo_concurrences(d);
    let e1 = entanglement_of_concurrence(cc.c1.norm().min(1.0)).expect("norm in [0, 1]");
    let e2 = entanglement_of_concurrence(cc.c2.norm().min(1.0)).expect("norm in [0, 1]");
    d.v1() * e1 + d.v2() * e2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{
        bell_mixture, bell_state, departure_diag, eigen_rank2, random_pure, random_rank2,
        to_density, BellKind, DEFAULT_RANK_TOL,
    };

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn decomposition(v1: f64, psi1: PureState, psi2: PureState) -> Rank2Decomposition {
        Rank2Decomposition::new(v1, psi1, 1.0 - v1, psi2).unwrap()
    }

    #[test]
    fn pure_concurrence_reference_points() {
        assert!((pure_concurrence(&bell_state(BellKind::PhiPlus)) - 1.0).abs() <= 1e-15);
        let sep = PureState::new([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(pure_concurrence(&sep) <= 1e-15);
        let plus =
            PureState::new([c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)]).unwrap();
        assert!(pure_concurrence(&plus) <= 1e-15);
    }

    #[test]
    fn complex_concurrence_signs_and_phase() {
        assert!((complex_concurrence(&bell_state(BellKind::PhiMinus)) - c(-1.0, 0.0)).norm()
            <= 1e-15);
        assert!((complex_concurrence(&bell_state(BellKind::PsiPlus)) - c(-1.0, 0.0)).norm()
            <= 1e-15);
        // e2 = i phi-: the phases square to flip the sign back to +1.
        assert!(
            (complex_concurrence(&magic_basis_state(2).unwrap()) - c(1.0, 0.0)).norm() <= 1e-14
        );
        // Global phase covariance: cc(e^{i t} psi) = e^{2 i t} cc(psi).
        let psi = random_pure(5);
        let theta = 0.83;
        let rotated = complex_concurrence(&psi.phase_rotated(theta));
        let expect = complex_concurrence(&psi) * C64::from_polar(1.0, 2.0 * theta);
        assert!((rotated - expect).norm() <= 1e-14);
    }

    #[test]
    fn magic_concurrence_matches_bilinear_form() {
        assert!((magic_concurrence(&bell_state(BellKind::PhiPlus)) - 1.0).abs() <= 1e-14);
        let sep = PureState::new([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(magic_concurrence(&sep) <= 1e-14);
        for seed in 0..1000 {
            let psi = random_pure(seed);
            assert!((magic_concurrence(&psi) - pure_concurrence(&psi)).abs() <= 1e-12);
        }
    }

    #[test]
    fn polarized_vector_identities() {
        let ket00 = PureState::new([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let xi = polarized_vector(&ket00, Subsystem::B);
        assert!((xi[0]).abs() <= 1e-15 && (xi[1]).abs() <= 1e-15);
        assert!((xi[2] - 1.0).abs() <= 1e-15);

        let xi = polarized_vector(&bell_state(BellKind::PhiPlus), Subsystem::A);
        assert!(xi.iter().all(|t| t.abs() <= 1e-15));

        for seed in 0..500 {
            let psi = random_pure(seed);
            for sub in [Subsystem::A, Subsystem::B] {
                let xi = polarized_vector(&psi, sub);
                let xi_sq: f64 = xi.iter().map(|t| t * t).sum();
                let csq = pure_concurrence(&psi).powi(2);
                assert!((xi_sq + csq - 1.0).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn spin_flip_fixed_points_and_involution() {
        let singlet = DensityMatrix::from_pure(&bell_state(BellKind::PsiMinus));
        assert!(spin_flip(&singlet).max_abs_diff(singlet.matrix()) <= 1e-15);

        let mixed = DensityMatrix::new(Mat4::identity().scale(0.25)).unwrap();
        assert!(spin_flip(&mixed).max_abs_diff(mixed.matrix()) <= 1e-15);

        let ket00 = PureState::new([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let flipped = spin_flip(&DensityMatrix::from_pure(&ket00));
        let ket11 = PureState::new([c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(flipped.max_abs_diff(&ket11.projector()) <= 1e-15);

        for seed in 0..50 {
            let rho = to_density(&random_rank2(seed));
            let twice = spin_flip(&DensityMatrix::new_unchecked(spin_flip(&rho)));
            assert!(twice.max_abs_diff(rho.matrix()) <= 1e-12);
        }
    }

    #[test]
    fn lambdas_for_pure_and_maximally_mixed() {
        for seed in 0..100 {
            let psi = random_pure(seed);
            let lam = wootters_lambdas(&DensityMatrix::from_pure(&psi)).unwrap();
            assert!((lam[0] - pure_concurrence(&psi)).abs() <= 1e-10);
            assert!(lam[1].abs() <= 1e-10 && lam[2].abs() <= 1e-10 && lam[3].abs() <= 1e-10);
        }
        let lam =
            wootters_lambdas(&DensityMatrix::new(Mat4::identity().scale(0.25)).unwrap()).unwrap();
        for l in lam {
            assert!((l - 0.25).abs() <= 1e-12);
        }
    }

    #[test]
    fn lambdas_for_bell_mixture_are_the_weights() {
        for g in [0.1, 0.3, 0.5, 0.8] {
            let rho = bell_mixture(BellKind::PhiPlus, BellKind::PhiMinus, g).unwrap();
            let lam = wootters_lambdas(&rho).unwrap();
            assert!((lam[0] - g.max(1.0 - g)).abs() <= 1e-10);
            assert!((lam[1] - g.min(1.0 - g)).abs() <= 1e-10);
            assert!(lam[2].abs() <= 1e-10 && lam[3].abs() <= 1e-10);
        }
    }

    #[test]
    fn spectral_concurrence_reference_points() {
        let rho = bell_mixture(BellKind::PhiPlus, BellKind::PsiMinus, 0.25).unwrap();
        let rep = spectral_concurrence(&rho).unwrap();
        assert!((rep.concurrence - 0.5).abs() <= 1e-10);
        assert_eq!(rep.method, Method::Spectral);
        assert!(rep.branch.is_none());

        let mixed = DensityMatrix::new(Mat4::identity().scale(0.25)).unwrap();
        assert!(spectral_concurrence(&mixed).unwrap().concurrence <= 1e-12);
    }

    #[test]
    fn spectral_concurrence_werner_states() {
        // w P(psi-) + (1 - w) I/4 has concurrence max((3w - 1)/2, 0).
        for (w, expect) in [(0.6, 0.4), (0.2, 0.0)] {
            let mat = bell_state(BellKind::PsiMinus).projector().scale(w)
                + Mat4::identity().scale((1.0 - w) / 4.0);
            let rho = DensityMatrix::new(mat).unwrap();
            let rep = spectral_concurrence(&rho).unwrap();
            assert!(
                (rep.concurrence - expect).abs() <= 1e-10,
                "w = {w}: C = {}",
                rep.concurrence
            );
        }
    }

    #[test]
    fn combo_concurrences_for_bell_pairs() {
        let d = decomposition(
            0.5,
            bell_state(BellKind::PhiPlus),
            bell_state(BellKind::PhiMinus),
        );
        let cc = combo_concurrences(&d);
        assert!(cc.cplus.norm() <= 1e-15 && cc.cminus.norm() <= 1e-15);

        let d = decomposition(
            0.5,
            bell_state(BellKind::PhiPlus),
            bell_state(BellKind::PsiMinus),
        );
        let cc = combo_concurrences(&d);
        assert!((cc.cplus - c(1.0, 0.0)).norm() <= 1e-14);
        assert!((cc.cminus - c(1.0, 0.0)).norm() <= 1e-14);

        let d = decomposition(
            0.5,
            bell_state(BellKind::PhiMinus),
            bell_state(BellKind::PsiPlus),
        );
        let cc = combo_concurrences(&d);
        assert!((cc.cplus - c(-1.0, 0.0)).norm() <= 1e-14);
        assert!((cc.cminus - c(-1.0, 0.0)).norm() <= 1e-14);
    }

    #[test]
    fn cross_diff_identity_holds() {
        for seed in 0..200 {
            let d = random_rank2(seed);
            let cc = combo_concurrences(&d);
            let [a1, b1, c1, d1] = *d.psi1().amplitudes();
            let [a2, b2, c2, d2] = *d.psi2().amplitudes();
            let direct = (a1 * d2 + a2 * d1 - b1 * c2 - b2 * c1) * 2.0;
            assert!((cc.cross_diff() - direct).norm() <= 1e-12);
            // Physical norms: |c_i| <= 1, |c+ - c-| <= 2.
            assert!(cc.c1.norm() <= 1.0 + 1e-12);
            assert!(cc.c2.norm() <= 1.0 + 1e-12);
            assert!(cc.cross_diff().norm() <= 2.0 + 1e-12);
        }
    }

    #[test]
    fn closed_form_xy_pure_limit_and_bell_pair() {
        let d = decomposition(
            1.0,
            bell_state(BellKind::PhiPlus),
            bell_state(BellKind::PsiMinus),
        );
        let xy = closed_form_xy(&d);
        assert!((xy.x - 0.5).abs() <= 1e-14);
        assert!((xy.y - 0.25).abs() <= 1e-14);
        assert!((xy.omega_plus - 1.0).abs() <= 1e-14);
        assert!(xy.omega_minus.abs() <= 1e-14);

        // (0.3, phi+, 0.7, phi-): x = 0.29, y = 0.04, omega = 0.49/0.09.
        let d = decomposition(
            0.3,
            bell_state(BellKind::PhiPlus),
            bell_state(BellKind::PhiMinus),
        );
        let xy = closed_form_xy(&d);
        assert!((xy.x - 0.29).abs() <= 1e-14);
        assert!((xy.y - 0.04).abs() <= 1e-14);
        assert!((xy.omega_plus - 0.49).abs() <= 1e-14);
        assert!((xy.omega_minus - 0.09).abs() <= 1e-14);
        let rep = closed_form_concurrence(&d);
        assert!((rep.concurrence - 0.4).abs() <= 1e-14);
    }

    #[test]
    fn closed_form_omegas_match_spectral_product() {
        for seed in 0..200 {
            let d = random_rank2(seed);
            let xy = closed_form_xy(&d);
            let m = wootters_matrix(&to_density(&d)).unwrap();
            let eig = herm_eigen(&m).unwrap();
            assert!((xy.omega_plus - eig.eigenvalues[0]).abs() <= 1e-9);
            assert!((xy.omega_minus - eig.eigenvalues[1]).abs() <= 1e-9);
            assert!(eig.eigenvalues[2].abs() <= 1e-10);
            assert!(eig.eigenvalues[3].abs() <= 1e-10);
        }
    }

    #[test]
    fn closed_form_matches_bell_mixture_law() {
        for g in [0.0f64, 0.2, 0.5, 0.75, 1.0] {
            let d = decomposition(
                g.max(1.0 - g),
                if g >= 0.5 {
                    bell_state(BellKind::PhiPlus)
                } else {
                    bell_state(BellKind::PsiPlus)
                },
                if g >= 0.5 {
                    bell_state(BellKind::PsiPlus)
                } else {
                    bell_state(BellKind::PhiPlus)
                },
            );
            let rep = closed_form_concurrence(&d);
            let expect = (1.0 - 2.0 * g.min(1.0 - g)).powi(2);
            assert!(
                (rep.concurrence_sq - expect).abs() <= 1e-12,
                "g = {g}: {} vs {expect}",
                rep.concurrence_sq
            );
        }
    }

    #[test]
    fn closed_form_pure_limit_is_eigenstate_concurrence() {
        for seed in 0..50 {
            let d = random_rank2(seed);
            let pure = Rank2Decomposition::new(1.0, *d.psi1(), 0.0, *d.psi2()).unwrap();
            let rep = closed_form_concurrence(&pure);
            let expect = pure_concurrence(d.psi1()).powi(2);
            assert!((rep.concurrence_sq - expect).abs() <= 1e-12);
        }
    }

    #[test]
    fn closed_form_agrees_with_spectral_oracle() {
        let mut worst = 0.0f64;
        for seed in 0..1000 {
            let d = random_rank2(seed);
            let closed = closed_form_concurrence_sq(&d);
            let spectral = spectral_concurrence(&to_density(&d)).unwrap().concurrence_sq;
            worst = worst.max((closed - spectral).abs());
        }
        assert!(worst <= 1e-9, "max |closed - spectral| = {worst:e}");
    }

    #[test]
    fn bounds_bracket_the_closed_form() {
        for seed in 0..500 {
            let d = random_rank2(seed);
            let (lower, upper) = concurrence_bounds(&d);
            assert!(lower <= upper);
            assert!((0.0..=1.0 + 1e-12).contains(&lower));
            assert!((0.0..=1.0 + 1e-12).contains(&upper));
            let csq = closed_form_concurrence_sq(&d);
            assert!(csq >= lower - 1e-12 && csq <= upper + 1e-12);
        }
        // C1 = C2 = 1: bounds ((2g-1)^2, 1).
        let d = decomposition(
            0.7,
            bell_state(BellKind::PhiPlus),
            bell_state(BellKind::PhiMinus),
        );
        let (lower, upper) = concurrence_bounds(&d);
        assert!((lower - 0.16).abs() <= 1e-14);
        assert!((upper - 1.0).abs() <= 1e-14);

        // Pure limit: both bounds collapse onto C1^2.
        let d = Rank2Decomposition::new(
            1.0,
            bell_state(BellKind::PhiPlus),
            0.0,
            bell_state(BellKind::PsiMinus),
        )
        .unwrap();
        let (lower, upper) = concurrence_bounds(&d);
        assert!((lower - 1.0).abs() <= 1e-14);
        assert!((upper - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn branch_detection_for_constructed_families() {
        // Bell pair: combination difference vanishes.
        let d = decomposition(
            0.7,
            bell_state(BellKind::PhiPlus),
            bell_state(BellKind::PsiMinus),
        );
        let br = corollary_branch(&d, BRANCH_TOL);
        assert_eq!(br.branch, Branch::Corollary3);
        assert!((br.predicted_sq.unwrap() - 0.16).abs() <= 1e-12);

        // Separable second eigenstate.
        let ket00 = PureState::new([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let d = decomposition(0.3, bell_state(BellKind::PsiMinus), ket00);
        let br = corollary_branch(&d, BRANCH_TOL);
        assert_eq!(br.branch, Branch::Corollary4);
        assert!((br.predicted_sq.unwrap() - 0.09).abs() <= 1e-12);

        // Departure towards |01>: real eigenvectors with opposite-sign
        // concurrences select the lower branch, predicting p^2.
        let p = 0.6;
        let d = eigen_rank2(&departure_diag(2, p).unwrap(), DEFAULT_RANK_TOL).unwrap();
        let br = corollary_branch(&d, BRANCH_TOL);
        assert_eq!(br.branch, Branch::Corollary2Lower);
        assert!((br.predicted_sq.unwrap() - p * p).abs() <= 1e-10);
    }

    #[test]
    fn real_amplitude_pairs_cover_all_corollary2_subbranches() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xC2);
        let mut seen = [false; 3];
        for _ in 0..500 {
            // Random real orthonormal pair.
            let a: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let b: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
            let a: [f64; 4] = std::array::from_fn(|i| a[i] / na);
            let ov: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
            let r: [f64; 4] = std::array::from_fn(|i| b[i] - ov * a[i]);
            let nr = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            if nr < 1e-3 {
                continue;
            }
            let psi1 = PureState::new_unchecked(std::array::from_fn(|i| c(a[i], 0.0)));
            let psi2 = PureState::new_unchecked(std::array::from_fn(|i| c(r[i] / nr, 0.0)));
            let v: f64 = rng.random_range(0.5..1.0);
            let d = Rank2Decomposition::new(v, psi1, 1.0 - v, psi2).unwrap();
            let br = corollary_branch(&d, BRANCH_TOL);
            match br.branch {
                Branch::Corollary2Upper => seen[0] = true,
                Branch::Corollary2Mid => seen[1] = true,
                Branch::Corollary2Lower => seen[2] = true,
                Branch::General => panic!("real pair classified as general"),
                _ => {}
            }
            let pred = br.predicted_sq.expect("real pairs always predict");
            assert!((pred - closed_form_concurrence_sq(&d)).abs() <= 1e-8);
        }
        assert!(
            seen.iter().all(|&s| s),
            "sub-branch coverage: upper={} mid={} lower={}",
            seen[0],
            seen[1],
            seen[2]
        );
    }

    #[test]
    fn branch_predictions_match_closed_form() {
        let mut fired = 0;
        for seed in 0..500 {
            let d = random_rank2(seed);
            let br = corollary_branch(&d, BRANCH_TOL);
            if let Some(pred) = br.predicted_sq {
                fired += 1;
                assert!((pred - closed_form_concurrence_sq(&d)).abs() <= 1e-8);
            }
        }
        // Random complex decompositions are generic.
        assert!(fired <= 5);
    }

    #[test]
    fn entropy_reference_values() {
        assert!((binary_entropy(0.5).unwrap() - 1.0).abs() == 0.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.9).unwrap() - 0.4689955935892811).abs() <= 1e-15);

        assert!((z_of_concurrence(1.0).unwrap() - 0.5).abs() == 0.0);
        assert!((z_of_concurrence(0.0).unwrap() - 1.0).abs() == 0.0);
        assert!((z_of_concurrence(0.6).unwrap() - 0.9).abs() <= 1e-15);

        assert!((entanglement_of_concurrence(1.0).unwrap() - 1.0).abs() == 0.0);
        assert_eq!(entanglement_of_concurrence(0.0).unwrap(), 0.0);
        assert!(
            (entanglement_of_concurrence(0.6).unwrap() - 0.4689955935892811).abs() <= 1e-15
        );

        assert!(matches!(binary_entropy(1.5), Err(Error::Domain { .. })));
        assert!(matches!(
            z_of_concurrence(-0.1),
            Err(Error::Domain { .. })
        ));
        // Values inside the 1e-12 slack clamp instead of failing.
        assert!(binary_entropy(1.0 + 5e-13).unwrap().abs() <= 1e-15);
    }

    #[test]
    fn entanglement_is_monotone_on_grid() {
        let mut prev = -1.0;
        for i in 0..=1000 {
            let cval = i as f64 / 1000.0;
            let e = entanglement_of_concurrence(cval).unwrap();
            assert!(e >= prev - 1e-15, "dip at C = {cval}");
            prev = e;
        }
    }

    #[test]
    fn eigen_average_reference_points() {
        // A separable eigenstate orthogonal to phi+.
        let ket01 = PureState::new([c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let d = decomposition(0.1, bell_state(BellKind::PhiPlus), ket01);
        assert!((eigen_average_entanglement(&d) - 0.1).abs() <= 1e-14);
        let ket00 = PureState::new([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();

        let ket11 = PureState::new([c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let d = decomposition(0.4, ket00, ket11);
        assert!(eigen_average_entanglement(&d) <= 1e-14);

        // Never below the spectral entanglement of the same state.
        for seed in 0..100 {
            let d = random_rank2(seed);
            let we = spectral_concurrence(&to_density(&d)).unwrap().we_entropy;
            assert!(eigen_average_entanglement(&d) >= we - 1e-9);
        }
    }

    #[test]
    fn gauge_and_degeneracy_invariance_of_closed_form() {
        for seed in 0..100 {
            let d = random_rank2(seed);
            let base = closed_form_concurrence(&d);
            let theta = (seed as f64) * 0.063 + 0.01;
            let rotated = closed_form_concurrence(&d.with_psi2_phase(theta));
            assert!((base.concurrence_sq - rotated.concurrence_sq).abs() <= 1e-12);
            for k in 0..4 {
                assert!((base.lambdas[k] - rotated.lambdas[k]).abs() <= 1e-12);
            }
            assert!((base.lower_bound.unwrap() - rotated.lower_bound.unwrap()).abs() <= 1e-12);
            assert!((base.upper_bound.unwrap() - rotated.upper_bound.unwrap()).abs() <= 1e-12);
            assert!((base.we_entropy - rotated.we_entropy).abs() <= 1e-12);
        }

        // Equal weights: any unitary remix of the eigenbasis leaves the
        // state, and so the closed form, unchanged.
        for seed in 0..100 {
            let d = random_rank2(seed);
            let half = Rank2Decomposition::new(0.5, *d.psi1(), 0.5, *d.psi2()).unwrap();
            let base = closed_form_concurrence_sq(&half);
            let (alpha, beta) = (0.4 + 0.003 * seed as f64, 1.9 - 0.007 * seed as f64);
            let (ca, sa) = (alpha.cos(), alpha.sin());
            let ph = C64::from_polar(1.0, beta);
            let mut m1 = [C64::new(0.0, 0.0); 4];
            let mut m2 = [C64::new(0.0, 0.0); 4];
            for i in 0..4 {
                let a = half.psi1().amplitudes()[i];
                let b = half.psi2().amplitudes()[i];
                m1[i] = a * ca + b * sa * ph;
                m2[i] = -a * sa * ph.conj() + b * ca;
            }
            let mixed = Rank2Decomposition::new(
                0.5,
                PureState::new(m1).unwrap(),
                0.5,
                PureState::new(m2).unwrap(),
            )
            .unwrap();
            assert!((closed_form_concurrence_sq(&mixed) - base).abs() <= 1e-9);
        }
    }
}
