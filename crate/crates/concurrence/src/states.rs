//! Two-qubit state model: pure and mixed states with validation, the
//! standard state families, rank-2 eigendecomposition, seeded random
//! generation, and the JSON state-file format.
//!
//! The computational basis order `|00>, |01>, |10>, |11>` is fixed
//! everywhere, including serialization.

use crate::error::{Error, Result};
use crate::linalg::{self, herm_eigen, Mat4, Vec4, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Default threshold on the third eigenvalue below which a density
/// matrix is accepted as rank <= 2.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

const NORM_TOL: f64 = 1e-10;
const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// The four Bell states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PhiMinus,
        BellKind::PsiPlus,
        BellKind::PsiMinus,
    ];
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BellKind::PhiPlus => "phi+",
            BellKind::PhiMinus => "phi-",
            BellKind::PsiPlus => "psi+",
            BellKind::PsiMinus => "psi-",
        };
        f.write_str(s)
    }
}

impl FromStr for BellKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "phi+" | "phip" | "phiplus" => Ok(BellKind::PhiPlus),
            "phi-" | "phim" | "phiminus" => Ok(BellKind::PhiMinus),
            "psi+" | "psip" | "psiplus" => Ok(BellKind::PsiPlus),
            "psi-" | "psim" | "psiminus" => Ok(BellKind::PsiMinus),
            other => Err(Error::Parse(format!(
                "unknown Bell state {other:?} (expected phi+, phi-, psi+ or psi-)"
            ))),
        }
    }
}

/// A normalized two-qubit pure state `a|00> + b|01> + c|10> + d|11>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureState {
    amp: Vec4,
}

impl PureState {
    /// Validates finiteness and unit norm (within 1e-10).
    pub fn new(amp: Vec4) -> Result<Self> {
        if !amp.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvariantViolation(
                "amplitudes must be finite".into(),
            ));
        }
        let n = linalg::norm(&amp);
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(PureState { amp })
    }

    /// Normalizes an arbitrary nonzero amplitude vector.
    pub fn from_unnormalized(amp: Vec4) -> Result<Self> {
        let n = linalg::norm(&amp);
        if !n.is_finite() || n < 1e-12 {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(PureState {
            amp: linalg::scale(&amp, c(1.0 / n, 0.0)),
        })
    }

    pub(crate) fn new_unchecked(amp: Vec4) -> Self {
        PureState { amp }
    }

    pub fn amplitudes(&self) -> &Vec4 {
        &self.amp
    }

    /// Overlap `<self|other>`.
    pub fn inner(&self, other: &PureState) -> C64 {
        linalg::inner(&self.amp, &other.amp)
    }

    /// The rank-1 projector `|psi><psi|`.
    pub fn projector(&self) -> Mat4 {
        linalg::outer(&self.amp, &self.amp)
    }

    /// The same ray with a global phase `e^{i theta}` applied.
    pub fn phase_rotated(&self, theta: f64) -> PureState {
        PureState {
            amp: linalg::scale(&self.amp, C64::from_polar(1.0, theta)),
        }
    }
}

/// A validated two-qubit density matrix: Hermitian, unit trace,
/// positive semidefinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: Mat4,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-9), trace one (1e-9) and positivity
    /// (eigenvalues >= -1e-10).
    pub fn new(mat: Mat4) -> Result<Self> {
        if !mat.is_finite() {
            return Err(Error::InvariantViolation("entries must be finite".into()));
        }
        let dev = mat.hermiticity_deviation();
        if dev > 1e-9 {
            return Err(Error::InvariantViolation(format!(
                "not Hermitian (max |M - M'| = {dev:.3e})"
            )));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
            return Err(Error::InvariantViolation(format!(
                "trace = {} + {}i (expected 1)",
                tr.re, tr.im
            )));
        }
        let eig = herm_eigen(&mat)?;
        if eig.eigenvalues[3] < -linalg::PSD_TOL {
            return Err(Error::InvariantViolation(format!(
                "not positive semidefinite (min eigenvalue {:.3e})",
                eig.eigenvalues[3]
            )));
        }
        Ok(DensityMatrix { mat })
    }

    pub(crate) fn new_unchecked(mat: Mat4) -> Self {
        DensityMatrix { mat }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        DensityMatrix {
            mat: psi.projector(),
        }
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.mat
    }
}

/// Spectral decomposition of a rank <= 2 state: weights `v1 >= v2`
/// summing to one and an orthonormal eigenvector pair.
#[derive(Clone, Copy, Debug)]
pub struct Rank2Decomposition {
    v1: f64,
    v2: f64,
    psi1: PureState,
    psi2: PureState,
}

impl Rank2Decomposition {
    /// Builds a decomposition, swapping the pair if needed so that
    /// `v1 >= v2`. The weights must be probabilities summing to one and
    /// the states orthogonal within 1e-9.
    pub fn new(v1: f64, psi1: PureState, v2: f64, psi2: PureState) -> Result<Self> {
        for v in [v1, v2] {
            if !(0.0..=1.0 + 1e-12).contains(&v) {
                return Err(Error::BadProbability { value: v });
            }
        }
        if ((v1 + v2) - 1.0).abs() > NORM_TOL {
            return Err(Error::InvariantViolation(format!(
                "weights sum to {} (expected 1)",
                v1 + v2
            )));
        }
        let overlap = psi1.inner(&psi2).norm();
        if overlap > 1e-9 {
            return Err(Error::InvariantViolation(format!(
                "eigenvectors not orthogonal (|<psi1|psi2>| = {overlap:.3e})"
            )));
        }
        if v1 >= v2 {
            Ok(Rank2Decomposition { v1, v2, psi1, psi2 })
        } else {
            Ok(Rank2Decomposition {
                v1: v2,
                v2: v1,
                psi1: psi2,
                psi2: psi1,
            })
        }
    }

    pub fn v1(&self) -> f64 {
        self.v1
    }

    pub fn v2(&self) -> f64 {
        self.v2
    }

    pub fn psi1(&self) -> &PureState {
        &self.psi1
    }

    pub fn psi2(&self) -> &PureState {
        &self.psi2
    }

    /// The same decomposition with `psi2` phase-rotated; the mixed state
    /// it describes is unchanged.
    pub fn with_psi2_phase(&self, theta: f64) -> Rank2Decomposition {
        Rank2Decomposition {
            psi2: self.psi2.phase_rotated(theta),
            ..*self
        }
    }
}

/// Bell state amplitude vector.
pub fn bell_state(kind: BellKind) -> PureState {
    let h = FRAC_1_SQRT_2;
    let amp = match kind {
        BellKind::PhiPlus => [c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)],
        BellKind::PhiMinus => [c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-h, 0.0)],
        BellKind::PsiPlus => [c(0.0, 0.0), c(h, 0.0), c(h, 0.0), c(0.0, 0.0)],
        BellKind::PsiMinus => [c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)],
    };
    PureState::new_unchecked(amp)
}

/// Magic-basis state `e_k` (`k` in 1..=4): the Bell states with the
/// phases that make a pure state's concurrence `|sum_i alpha_i^2|`.
pub fn magic_basis_state(k: usize) -> Result<PureState> {
    let h = FRAC_1_SQRT_2;
    let amp = match k {
        1 => return Ok(bell_state(BellKind::PhiPlus)),
        2 => [c(0.0, h), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -h)],
        3 => [c(0.0, 0.0), c(0.0, h), c(0.0, h), c(0.0, 0.0)],
        4 => return Ok(bell_state(BellKind::PsiMinus)),
        index => return Err(Error::BadIndex { index }),
    };
    Ok(PureState::new_unchecked(amp))
}

fn check_probability(p: f64) -> Result<()> {
    if p.is_finite() && (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::BadProbability { value: p })
    }
}

/// Mixture `g |first><first| + (1 - g) |second><second|` of two distinct
/// Bell states.
pub fn bell_mixture(first: BellKind, second: BellKind, g: f64) -> Result<DensityMatrix> {
    if first == second {
        return Err(Error::SameState);
    }
    check_probability(g)?;
    let mat = bell_state(first).projector().scale(g)
        + bell_state(second).projector().scale(1.0 - g);
    Ok(DensityMatrix::new_unchecked(mat))
}

/// Computational basis state `|i>` for `i` in 1..=4.
fn diag_basis_state(i: usize) -> Result<PureState> {
    if !(1..=4).contains(&i) {
        return Err(Error::BadIndex { index: i });
    }
    let mut amp = [c(0.0, 0.0); 4];
    amp[i - 1] = c(1.0, 0.0);
    Ok(PureState::new_unchecked(amp))
}

/// Departure from the singlet towards a computational basis state:
/// `p |psi-><psi-| + (1 - p) |i><i|` with `|i>` running over
/// `|00>, |01>, |10>, |11>` for `i = 1..=4`. Rank <= 2 for every `i`.
pub fn departure_diag(i: usize, p: f64) -> Result<DensityMatrix> {
    let basis = diag_basis_state(i)?;
    check_probability(p)?;
    let mat = bell_state(BellKind::PsiMinus).projector().scale(p)
        + basis.projector().scale(1.0 - p);
    Ok(DensityMatrix::new_unchecked(mat))
}

/// Departure from the singlet towards an orthogonal symmetric state:
/// `q |psi-><psi-| + (1 - q) |chi><chi|` with
/// `|chi> = x1|00> + (x2/sqrt(2))(|01> + |10>) + x4|11>`.
///
/// `|x1|^2 + |x2|^2 + |x4|^2` must be one; `<psi-|chi>` vanishes by the
/// symmetry of `|chi>`, so the two projectors already form an
/// eigendecomposition.
pub fn departure_orth(q: f64, x1: C64, x2: C64, x4: C64) -> Result<DensityMatrix> {
    check_probability(q)?;
    let n = (x1.norm_sqr() + x2.norm_sqr() + x4.norm_sqr()).sqrt();
    if (n - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm: n });
    }
    let chi = symmetric_chi(x1, x2, x4);
    let mat = bell_state(BellKind::PsiMinus).projector().scale(q)
        + chi.projector().scale(1.0 - q);
    Ok(DensityMatrix::new_unchecked(mat))
}

/// The symmetric state `x1|00> + (x2/sqrt(2))(|01> + |10>) + x4|11>`.
pub fn symmetric_chi(x1: C64, x2: C64, x4: C64) -> PureState {
    let h = x2 * FRAC_1_SQRT_2;
    PureState::new_unchecked([x1, h, h, x4])
}

/// Coefficients `(x1, x2, x4)` for which `chi` is the product state
/// `u(theta) (x) u(theta)` with `u = (cos theta, sin theta)`.
pub fn product_chi_coefficients(theta: f64) -> (C64, C64, C64) {
    let (s, co) = theta.sin_cos();
    (
        c(co * co, 0.0),
        c(std::f64::consts::SQRT_2 * co * s, 0.0),
        c(s * s, 0.0),
    )
}

fn draw_pure(rng: &mut ChaCha8Rng) -> PureState {
    loop {
        let amp: Vec4 = std::array::from_fn(|_| {
            c(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let n = linalg::norm(&amp);
        if n > 1e-6 {
            return PureState::new_unchecked(linalg::scale(&amp, c(1.0 / n, 0.0)));
        }
    }
}

/// Haar-uniform random pure state: independent standard complex
/// Gaussian amplitudes, normalized. Deterministic for a given seed.
pub fn random_pure(seed: u64) -> PureState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    draw_pure(&mut rng)
}

/// Random rank-2 decomposition: two Haar draws orthonormalized by
/// Gram-Schmidt, weights `(v, 1 - v)` with `v` uniform on `[1/2, 1]`.
pub fn random_rank2(seed: u64) -> Rank2Decomposition {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let psi1 = draw_pure(&mut rng);
    let psi2 = loop {
        let cand = draw_pure(&mut rng);
        let ov = psi1.inner(&cand);
        if ov.norm() > 1.0 - 1e-6 {
            continue;
        }
        let mut amp = *cand.amplitudes();
        for (a, b) in amp.iter_mut().zip(psi1.amplitudes()) {
            *a -= ov * b;
        }
        let n = linalg::norm(&amp);
        break PureState::new_unchecked(linalg::scale(&amp, c(1.0 / n, 0.0)));
    };
    let v1: f64 = rng.random_range(0.5..1.0);
    Rank2Decomposition {
        v1,
        v2: 1.0 - v1,
        psi1,
        psi2,
    }
}

/// Assembles `v1 |psi1><psi1| + v2 |psi2><psi2|`.
pub fn to_density(d: &Rank2Decomposition) -> DensityMatrix {
    let mat = d.psi1.projector().scale(d.v1) + d.psi2.projector().scale(d.v2);
    DensityMatrix::new_unchecked(mat)
}

/// Fixes the phase so the first amplitude above 1e-12 in basis order is
/// real positive.
fn gauge_fix(v: &Vec4) -> Vec4 {
    for z in v {
        if z.norm() > 1e-12 {
            return linalg::scale(v, z.conj() / z.norm());
        }
    }
    *v
}

/// Rank-2 eigendecomposition of a density matrix.
///
/// Fails with `RankTooHigh` when the third eigenvalue exceeds
/// `rank_tol`; such states must use the spectral concurrence path.
/// Eigenvector phases are gauge-fixed (first nonzero amplitude real
/// positive) and the two retained weights are renormalized to sum to
/// one. `v2 = 0` is allowed (pure states).
pub fn eigen_rank2(rho: &DensityMatrix, rank_tol: f64) -> Result<Rank2Decomposition> {
    let eig = herm_eigen(rho.matrix())?;
    if eig.eigenvalues[2] > rank_tol {
        return Err(Error::RankTooHigh {
            third_eigenvalue: eig.eigenvalues[2],
            tolerance: rank_tol,
        });
    }
    let mut v1 = eig.eigenvalues[0];
    let mut v2 = eig.eigenvalues[1].max(0.0);
    let sum = v1 + v2;
    v1 /= sum;
    v2 /= sum;
    Ok(Rank2Decomposition {
        v1,
        v2,
        psi1: PureState::new_unchecked(gauge_fix(&eig.eigenvectors[0])),
        psi2: PureState::new_unchecked(gauge_fix(&eig.eigenvectors[1])),
    })
}

/// A parsed state file: either a pure state or a density matrix.
#[derive(Clone, Copy, Debug)]
pub enum StateData {
    Pure(PureState),
    Density(DensityMatrix),
}

impl StateData {
    /// View as a density matrix (projector for pure inputs).
    pub fn density(&self) -> DensityMatrix {
        match self {
            StateData::Pure(psi) => DensityMatrix::from_pure(psi),
            StateData::Density(rho) => *rho,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct StateFileRepr {
    kind: String,
    basis: String,
    data: Vec<[f64; 2]>,
}

/// Parses the JSON state-file format:
/// `{"kind": "pure" | "density", "basis": "comp", "data": [[re, im], ...]}`
/// with 4 amplitude pairs (pure) or 16 row-major entries (density).
/// All state invariants are validated after decoding.
pub fn parse_state(text: &str) -> Result<StateData> {
    let repr: StateFileRepr =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if repr.basis != "comp" {
        return Err(Error::Parse(format!(
            "unsupported basis {:?} (expected \"comp\")",
            repr.basis
        )));
    }
    match repr.kind.as_str() {
        "pure" => {
            if repr.data.len() != 4 {
                return Err(Error::Parse(format!(
                    "pure state needs 4 amplitudes, got {}",
                    repr.data.len()
                )));
            }
            let amp: Vec4 = std::array::from_fn(|i| c(repr.data[i][0], repr.data[i][1]));
            Ok(StateData::Pure(PureState::new(amp)?))
        }
        "density" => {
            if repr.data.len() != 16 {
                return Err(Error::Parse(format!(
                    "density matrix needs 16 entries, got {}",
                    repr.data.len()
                )));
            }
            let mut mat = Mat4::zeros();
            for i in 0..4 {
                for j in 0..4 {
                    let [re, im] = repr.data[4 * i + j];
                    mat[(i, j)] = c(re, im);
                }
            }
            Ok(StateData::Density(DensityMatrix::new(mat)?))
        }
        other => Err(Error::Parse(format!(
            "unknown kind {other:?} (expected \"pure\" or \"density\")"
        ))),
    }
}

/// Writes the JSON state-file format; floats round-trip exactly.
pub fn write_state(state: &StateData) -> String {
    let repr = match state {
        StateData::Pure(psi) => StateFileRepr {
            kind: "pure".into(),
            basis: "comp".into(),
            data: psi.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        },
        StateData::Density(rho) => {
            let mut data = Vec::with_capacity(16);
            for i in 0..4 {
                for j in 0..4 {
                    let z = rho.matrix()[(i, j)];
                    data.push([z.re, z.im]);
                }
            }
            StateFileRepr {
                kind: "density".into(),
                basis: "comp".into(),
                data,
            }
        }
    };
    serde_json::to_string_pretty(&repr).expect("state file serialization cannot fail")
}
