//! Randomized self-verification suites.
//!
//! Each suite draws seeded trials, measures a worst-case error against
//! a stated tolerance, and reports failing trial seeds verbatim so any
//! counterexample can be replayed. The suites cover the closed-form /
//! spectral equivalence, the omega spectrum, bounds, branch
//! consistency, gauge and degeneracy freedom, the pure-state
//! identities, and the decomposition-search oracle.

use crate::linalg::herm_eigen;
use crate::measures::{
    closed_form_concurrence, closed_form_concurrence_sq, closed_form_xy, combo_concurrences,
    corollary_branch, entanglement_of_concurrence, magic_concurrence, polarized_vector,
    pure_concurrence, spectral_concurrence, spin_flip, wootters_matrix, Branch, Subsystem,
    BRANCH_TOL,
};
use crate::oracle::{
    apply_isometry, average_entanglement, minimize_ef, IsometryParams, MinimizeOptions,
};
use crate::par::map_indexed;
use crate::seed::derive_seed;
use crate::states::{
    bell_state, departure_diag, eigen_rank2, random_pure, random_rank2, symmetric_chi,
    to_density, write_state, BellKind, DensityMatrix, PureState, Rank2Decomposition, StateData,
    DEFAULT_RANK_TOL,
};
use crate::{Error, Result, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Configuration shared by all suites.
#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    /// Trials per randomized suite.
    pub trials: u64,
    /// Master seed; trial `t` of suite `s` uses a seed derived from
    /// `(seed, s, t)`.
    pub seed: u64,
    /// Tolerance for the closed-form / spectral comparisons.
    pub tol: f64,
    /// Rank threshold handed to the eigendecomposition.
    pub rank_tol: f64,
    /// Fan trials out over the rayon pool when available.
    pub parallel: bool,
    /// Deliberately corrupt the closed form (sign flip on its cross
    /// term) to demonstrate the harness detects a broken identity.
    pub inject_fault: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            trials: 1000,
            seed: 42,
            tol: 1e-9,
            rank_tol: DEFAULT_RANK_TOL,
            parallel: true,
            inject_fault: false,
        }
    }
}

/// One failing trial: the seed reproduces it, the detail dumps the
/// state.
#[derive(Clone, Debug, Serialize)]
pub struct TrialFailure {
    pub trial: u64,
    pub seed: u64,
    pub error: f64,
    pub detail: String,
}

/// Outcome of one suite.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub trials: u64,
    pub tolerance: f64,
    pub max_error: f64,
    pub failures: Vec<TrialFailure>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Names of all suites, in execution order.
pub const SUITE_NAMES: [&str; 15] = [
    "closed_vs_spectral",
    "omega_spectrum",
    "corollary1_bounds",
    "gauge_invariance",
    "degeneracy_invariance",
    "pure_eq_magic",
    "pure_bloch_identity",
    "pure_spectral_match",
    "spin_flip_involution",
    "entropy_monotone",
    "corollary_consistency",
    "isometry_lower_bound",
    "isometry_reconstruction",
    "minimize_vs_eigen_avg",
    "minimize_wootters_gap",
];

/// Runs every suite. Fails fast only on configuration errors; suite
/// failures are returned in the results.
pub fn run_all(cfg: &VerifyConfig) -> Result<Vec<SuiteResult>> {
    validate(cfg)?;
    Ok(SUITE_NAMES
        .iter()
        .map(|name| run_suite(cfg, name).expect("listed suite exists"))
        .collect())
}

/// Runs a single suite by name; `None` for an unknown name.
pub fn run_suite(cfg: &VerifyConfig, name: &str) -> Option<SuiteResult> {
    if validate(cfg).is_err() {
        return None;
    }
    let suite = match name {
        "closed_vs_spectral" => closed_vs_spectral(cfg),
        "omega_spectrum" => omega_spectrum(cfg),
        "corollary1_bounds" => corollary1_bounds(cfg),
        "gauge_invariance" => gauge_invariance(cfg),
        "degeneracy_invariance" => degeneracy_invariance(cfg),
        "pure_eq_magic" => pure_eq_magic(cfg),
        "pure_bloch_identity" => pure_bloch_identity(cfg),
        "pure_spectral_match" => pure_spectral_match(cfg),
        "spin_flip_involution" => spin_flip_involution(cfg),
        "entropy_monotone" => entropy_monotone(),
        "corollary_consistency" => corollary_consistency(cfg),
        "isometry_lower_bound" => isometry_suites(cfg).0,
        "isometry_reconstruction" => isometry_suites(cfg).1,
        "minimize_vs_eigen_avg" => minimize_suites(cfg).0,
        "minimize_wootters_gap" => minimize_suites(cfg).1,
        _ => return None,
    };
    Some(suite)
}

fn validate(cfg: &VerifyConfig) -> Result<()> {
    if cfg.trials == 0 {
        return Err(Error::BadParameter("trials must be >= 1".into()));
    }
    if cfg.tol.is_nan() || cfg.tol <= 0.0 {
        return Err(Error::BadParameter(format!(
            "tol must be > 0, got {}",
            cfg.tol
        )));
    }
    Ok(())
}

/// Seed namespace per suite so suites draw independent streams.
fn suite_seed(cfg: &VerifyConfig, suite_index: u64, trial: u64) -> u64 {
    derive_seed(derive_seed(cfg.seed, 0x5EED_0000 + suite_index), trial)
}

fn dump(d: &Rank2Decomposition) -> String {
    format!(
        "v1 = {:.17e}, v2 = {:.17e}, state = {}",
        d.v1(),
        d.v2(),
        write_state(&StateData::Density(to_density(d)))
    )
}

/// Collects per-trial errors into a suite result.
fn collect<F>(name: &'static str, cfg: &VerifyConfig, suite_index: u64, tol: f64, f: F) -> SuiteResult
where
    F: Fn(u64, u64) -> (f64, String) + Sync + Send,
{
    let rows = map_indexed(cfg.trials, cfg.parallel, |t| {
        let seed = suite_seed(cfg, suite_index, t);
        let (err, detail) = f(t, seed);
        (t, seed, err, detail)
    });
    let mut max_error = 0.0f64;
    let mut failures = Vec::new();
    for (trial, seed, error, detail) in rows {
        max_error = max_error.max(error);
        if error > tol {
            failures.push(TrialFailure {
                trial,
                seed,
                error,
                detail,
            });
        }
    }
    SuiteResult {
        name,
        trials: cfg.trials,
        tolerance: tol,
        max_error,
        failures,
    }
}

/// Closed form evaluated with an optional deliberate sign flip on the
/// cross term, used to prove the harness notices a corrupted identity.
fn closed_sq_maybe_faulted(d: &Rank2Decomposition, fault: bool) -> f64 {
    if !fault {
        return closed_form_concurrence_sq(d);
    }
    let cc = combo_concurrences(d);
    let (v1, v2) = (d.v1(), d.v2());
    let diff = cc.cross_diff();
    let cross = diff * diff - cc.c1 * cc.c2 * 4.0;
    v1 * v1 * cc.c1.norm_sqr() + v2 * v2 * cc.c2.norm_sqr()
        + 0.5 * v1 * v2 * diff.norm_sqr()
        + 0.5 * v1 * v2 * cross.norm()
}

/// |closed-form C^2 - spectral C^2| on random rank-2 states.
fn closed_vs_spectral(cfg: &VerifyConfig) -> SuiteResult {
    let fault = cfg.inject_fault;
    collect("closed_vs_spectral", cfg, 1, cfg.tol, move |_, seed| {
        let d = random_rank2(seed);
        let closed = closed_sq_maybe_faulted(&d, fault);
        let spectral = spectral_concurrence(&to_density(&d))
            .expect("generated state is valid")
            .concurrence_sq;
        ((closed - spectral).abs(), dump(&d))
    })
}

/// The closed-form omegas match the spectrum of the spin-flip product;
/// the other two eigenvalues vanish.
fn omega_spectrum(cfg: &VerifyConfig) -> SuiteResult {
    collect("omega_spectrum", cfg, 2, cfg.tol, |_, seed| {
        let d = random_rank2(seed);
        let xy = closed_form_xy(&d);
        let m = wootters_matrix(&to_density(&d)).expect("valid state");
        let eig = herm_eigen(&m).expect("product is Hermitian");
        let err = (xy.omega_plus - eig.eigenvalues[0])
            .abs()
            .max((xy.omega_minus - eig.eigenvalues[1]).abs())
            .max(if eig.eigenvalues[2].abs() > 1e-10 {
                eig.eigenvalues[2].abs()
            } else {
                0.0
            })
            .max(if eig.eigenvalues[3].abs() > 1e-10 {
                eig.eigenvalues[3].abs()
            } else {
                0.0
            });
        (err, dump(&d))
    })
}

/// Lower and upper bounds bracket the closed form. The inequalities are
/// exact algebra; only rounding slack is tolerated.
fn corollary1_bounds(cfg: &VerifyConfig) -> SuiteResult {
    collect("corollary1_bounds", cfg, 3, 1e-12, |_, seed| {
        let d = random_rank2(seed);
        let rep = closed_form_concurrence(&d);
        let violation = (rep.lower_bound.unwrap() - rep.concurrence_sq)
            .max(rep.concurrence_sq - rep.upper_bound.unwrap())
            .max(0.0);
        (violation, dump(&d))
    })
}

/// A global phase on psi2 changes no report field.
fn gauge_invariance(cfg: &VerifyConfig) -> SuiteResult {
    collect("gauge_invariance", cfg, 4, 1e-12, |_, seed| {
        let d = random_rank2(seed);
        let theta = ChaCha8Rng::seed_from_u64(derive_seed(seed, 1))
            .random_range(0.0..std::f64::consts::TAU);
        let a = closed_form_concurrence(&d);
        let b = closed_form_concurrence(&d.with_psi2_phase(theta));
        let mut err = (a.concurrence - b.concurrence)
            .abs()
            .max((a.concurrence_sq - b.concurrence_sq).abs())
            .max((a.we_entropy - b.we_entropy).abs())
            .max((a.lower_bound.unwrap() - b.lower_bound.unwrap()).abs())
            .max((a.upper_bound.unwrap() - b.upper_bound.unwrap()).abs());
        for k in 0..4 {
            err = err.max((a.lambdas[k] - b.lambdas[k]).abs());
        }
        if a.branch != b.branch {
            err = err.max(1.0);
        }
        (err, format!("theta = {theta}, {}", dump(&d)))
    })
}

/// At v1 = v2 = 1/2 the eigenbasis is free; remixing it must not move
/// the squared concurrence.
fn degeneracy_invariance(cfg: &VerifyConfig) -> SuiteResult {
    collect("degeneracy_invariance", cfg, 5, cfg.tol, |_, seed| {
        let d = random_rank2(seed);
        let half = Rank2Decomposition::new(0.5, *d.psi1(), 0.5, *d.psi2())
            .expect("weights are valid");
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 2));
        let alpha: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let beta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let (sa, ca) = alpha.sin_cos();
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
            PureState::new_unchecked(m1),
            0.5,
            PureState::new_unchecked(m2),
        )
        .expect("unitary remix stays orthonormal");
        let err =
            (closed_form_concurrence_sq(&half) - closed_form_concurrence_sq(&mixed)).abs();
        (err, dump(&half))
    })
}

/// Bilinear and magic-basis concurrences agree on pure states.
fn pure_eq_magic(cfg: &VerifyConfig) -> SuiteResult {
    collect("pure_eq_magic", cfg, 6, 1e-12, |_, seed| {
        let psi = random_pure(seed);
        let err = (pure_concurrence(&psi) - magic_concurrence(&psi)).abs();
        (err, write_state(&StateData::Pure(psi)))
    })
}

/// |xi|^2 + C^2 = 1 on both subsystems.
fn pure_bloch_identity(cfg: &VerifyConfig) -> SuiteResult {
    collect("pure_bloch_identity", cfg, 7, 1e-10, |_, seed| {
        let psi = random_pure(seed);
        let csq = pure_concurrence(&psi).powi(2);
        let mut err = 0.0f64;
        for sub in [Subsystem::A, Subsystem::B] {
            let xi = polarized_vector(&psi, sub);
            let xi_sq: f64 = xi.iter().map(|t| t * t).sum();
            err = err.max((xi_sq + csq - 1.0).abs());
        }
        (err, write_state(&StateData::Pure(psi)))
    })
}

/// The spectral route reduces to the pure-state concurrence on
/// projectors.
fn pure_spectral_match(cfg: &VerifyConfig) -> SuiteResult {
    collect("pure_spectral_match", cfg, 8, 1e-10, |_, seed| {
        let psi = random_pure(seed);
        let spectral = spectral_concurrence(&DensityMatrix::from_pure(&psi))
            .expect("projector is valid")
            .concurrence;
        let err = (spectral - pure_concurrence(&psi)).abs();
        (err, write_state(&StateData::Pure(psi)))
    })
}

/// Spin flip is an involution preserving trace, Hermiticity and
/// positivity.
fn spin_flip_involution(cfg: &VerifyConfig) -> SuiteResult {
    collect("spin_flip_involution", cfg, 9, 1e-12, |_, seed| {
        let rho = to_density(&random_rank2(seed));
        let flipped = spin_flip(&rho);
        let twice = spin_flip(&DensityMatrix::new_unchecked(flipped));
        let mut err = twice.max_abs_diff(rho.matrix());
        err = err.max((flipped.trace().re - 1.0).abs());
        err = err.max(flipped.trace().im.abs());
        err = err.max(flipped.hermiticity_deviation());
        let eig = herm_eigen(&flipped).expect("flipped state is Hermitian");
        if eig.eigenvalues[3] < -1e-10 {
            err = err.max(-eig.eigenvalues[3]);
        }
        (err, write_state(&StateData::Density(rho)))
    })
}

/// H(z(C)) is nondecreasing on a 1001-point grid.
fn entropy_monotone() -> SuiteResult {
    let mut max_dip = 0.0f64;
    let mut failures = Vec::new();
    let mut prev = 0.0f64;
    for i in 0..=1000u64 {
        let cval = i as f64 / 1000.0;
        let e = entanglement_of_concurrence(cval).expect("grid in range");
        if i > 0 {
            let dip = prev - e;
            max_dip = max_dip.max(dip);
            if dip > 1e-15 {
                failures.push(TrialFailure {
                    trial: i,
                    seed: 0,
                    error: dip,
                    detail: format!("H(z(C)) dips at C = {cval}"),
                });
            }
        }
        prev = e;
    }
    SuiteResult {
        name: "entropy_monotone",
        trials: 1001,
        tolerance: 1e-15,
        max_error: max_dip,
        failures,
    }
}

/// Constructed families must fire their declared branch and the
/// branch prediction must reproduce the closed form.
fn corollary_consistency(cfg: &VerifyConfig) -> SuiteResult {
    collect("corollary_consistency", cfg, 10, 1e-8, |t, seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (d, expected, label): (Rank2Decomposition, &[Branch], &str) = match t % 5 {
            0 => {
                // Mixture of two distinct Bell states.
                let i = rng.random_range(0..4usize);
                let j = (i + 1 + rng.random_range(0..3usize)) % 4;
                let g: f64 = rng.random_range(0.01..0.99);
                let d = Rank2Decomposition::new(
                    g,
                    bell_state(BellKind::ALL[i]),
                    1.0 - g,
                    bell_state(BellKind::ALL[j]),
                )
                .expect("distinct Bell states are orthonormal");
                (d, &[Branch::Corollary3], "bell pair")
            }
            1 => {
                // One separable eigenstate.
                let angles: [f64; 4] =
                    std::array::from_fn(|_| rng.random_range(0.0..std::f64::consts::TAU));
                let u = [
                    C64::from_polar(angles[0].cos().abs(), angles[1]),
                    C64::from_polar(
                        (1.0 - angles[0].cos().powi(2)).max(0.0).sqrt(),
                        angles[2],
                    ),
                ];
                let w = [
                    C64::from_polar(angles[3].cos().abs(), angles[1] * 0.7),
                    C64::from_polar(
                        (1.0 - angles[3].cos().powi(2)).max(0.0).sqrt(),
                        angles[2] * 1.3,
                    ),
                ];
                let product = PureState::new_unchecked([
                    u[0] * w[0],
                    u[0] * w[1],
                    u[1] * w[0],
                    u[1] * w[1],
                ]);
                // Orthonormalize a random partner against it.
                let cand = random_pure(derive_seed(seed, 3));
                let ov = product.inner(&cand);
                let mut amp = *cand.amplitudes();
                for (a, b) in amp.iter_mut().zip(product.amplitudes()) {
                    *a -= ov * b;
                }
                let partner = PureState::from_unnormalized(amp).expect("independent draw");
                let v: f64 = rng.random_range(0.5..0.99);
                let d = Rank2Decomposition::new(v, product, 1.0 - v, partner)
                    .expect("orthonormal pair");
                (d, &[Branch::Corollary4], "separable eigenstate")
            }
            2 => {
                // Departure towards |01> / |10>.
                let i = 2 + rng.random_range(0..2usize);
                let p: f64 = rng.random_range(0.05..0.95);
                let rho = departure_diag(i, p).expect("valid family");
                let d = eigen_rank2(&rho, cfg.rank_tol).expect("rank 2 by construction");
                (
                    d,
                    &[Branch::Corollary2Lower],
                    "diagonal departure",
                )
            }
            3 => {
                // Departure towards a generic symmetric orthogonal state.
                let raw: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
                let n = (raw[0] * raw[0] + raw[1] * raw[1] + raw[2] * raw[2]).sqrt();
                let chi = symmetric_chi(
                    C64::new(raw[0] / n, 0.0),
                    C64::new(raw[1] / n, 0.0),
                    C64::new(raw[2] / n, 0.0),
                );
                let q: f64 = rng.random_range(0.01..0.99);
                let d =
                    Rank2Decomposition::new(q, bell_state(BellKind::PsiMinus), 1.0 - q, chi)
                        .expect("chi is orthogonal to the singlet");
                // A separable chi upgrades the branch to corollary 4;
                // both predictions coincide there.
                (
                    d,
                    &[Branch::Corollary3, Branch::Corollary4],
                    "orthogonal departure",
                )
            }
            _ => {
                // Random real-amplitude pair: some corollary always
                // applies (any of the three real-case forms, or a more
                // specific one on knife edges).
                let d = random_real_rank2(&mut rng);
                (
                    d,
                    &[
                        Branch::Corollary2Upper,
                        Branch::Corollary2Mid,
                        Branch::Corollary2Lower,
                        Branch::Corollary3,
                        Branch::Corollary4,
                    ],
                    "real amplitudes",
                )
            }
        };
        let br = corollary_branch(&d, BRANCH_TOL);
        if !expected.contains(&br.branch) {
            return (
                f64::INFINITY,
                format!(
                    "{label}: expected {:?}, classified {:?}; {}",
                    expected,
                    br.branch,
                    dump(&d)
                ),
            );
        }
        let err = (br.predicted_sq.expect("non-general branch predicts")
            - closed_form_concurrence_sq(&d))
        .abs();
        (err, format!("{label}: {}", dump(&d)))
    })
}

/// Orthonormal pair with real amplitudes and a random weight split.
fn random_real_rank2(rng: &mut ChaCha8Rng) -> Rank2Decomposition {
    loop {
        let a: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let b: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        if na < 1e-3 {
            continue;
        }
        let a: [f64; 4] = std::array::from_fn(|i| a[i] / na);
        let ov: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        let mut r: [f64; 4] = std::array::from_fn(|i| b[i] - ov * a[i]);
        let nr = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nr < 1e-3 {
            continue;
        }
        for x in r.iter_mut() {
            *x /= nr;
        }
        let v: f64 = rng.random_range(0.5..1.0);
        let psi1 = PureState::new_unchecked(std::array::from_fn(|i| C64::new(a[i], 0.0)));
        let psi2 = PureState::new_unchecked(std::array::from_fn(|i| C64::new(r[i], 0.0)));
        return Rank2Decomposition::new(v, psi1, 1.0 - v, psi2)
            .expect("orthonormal real pair");
    }
}

/// Trial counts for the two isometry suites and the minimizer suites.
fn oracle_trials(cfg: &VerifyConfig) -> u64 {
    (cfg.trials / 50).clamp(2, 20)
}

/// Random decompositions through random isometries: the average
/// entanglement never undercuts the spectral measure, and the members
/// rebuild the state.
fn isometry_suites(cfg: &VerifyConfig) -> (SuiteResult, SuiteResult) {
    let sub_cfg = VerifyConfig {
        trials: cfg.trials,
        ..*cfg
    };
    let rows = map_indexed(sub_cfg.trials, cfg.parallel, |t| {
        let seed = suite_seed(cfg, 11, t);
        let d = random_rank2(seed);
        let rho = to_density(&d);
        let we = spectral_concurrence(&rho).expect("valid state").we_entropy;
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 4));
        let m = 2 + (t % 3) as usize;
        let u = IsometryParams::random(m, &mut rng);
        let dec = apply_isometry(&d, &u);
        let avg = average_entanglement(&dec);
        (t, seed, we - avg, dec.residual(&rho), dump(&d))
    });
    let mut lower = SuiteResult {
        name: "isometry_lower_bound",
        trials: sub_cfg.trials,
        tolerance: 1e-9,
        max_error: 0.0,
        failures: Vec::new(),
    };
    let mut recon = SuiteResult {
        name: "isometry_reconstruction",
        trials: sub_cfg.trials,
        tolerance: 1e-8,
        max_error: 0.0,
        failures: Vec::new(),
    };
    for (trial, seed, undercut, residual, detail) in rows {
        lower.max_error = lower.max_error.max(undercut.max(0.0));
        if undercut > lower.tolerance {
            lower.failures.push(TrialFailure {
                trial,
                seed,
                error: undercut,
                detail: detail.clone(),
            });
        }
        recon.max_error = recon.max_error.max(residual);
        if residual > recon.tolerance {
            recon.failures.push(TrialFailure {
                trial,
                seed,
                error: residual,
                detail,
            });
        }
    }
    (lower, recon)
}

/// The minimizer never exceeds the eigendecomposition average and lands
/// on the spectral measure (its optimality gap stays inside 1e-3).
fn minimize_suites(cfg: &VerifyConfig) -> (SuiteResult, SuiteResult) {
    let trials = oracle_trials(cfg);
    let rows = map_indexed(trials, cfg.parallel, |t| {
        let seed = suite_seed(cfg, 12, t);
        let d = random_rank2(seed);
        let rho = to_density(&d);
        let we = spectral_concurrence(&rho).expect("valid state").we_entropy;
        let eigen_avg = crate::measures::eigen_average_entanglement(&d);
        let opts = MinimizeOptions {
            restarts: 8,
            seed: derive_seed(seed, 5),
            parallel: false,
            ..Default::default()
        };
        let res = minimize_ef(&rho, &opts).expect("rank 2 by construction");
        (t, seed, res.value - eigen_avg, res.value, we, dump(&d))
    });
    let mut vs_eigen = SuiteResult {
        name: "minimize_vs_eigen_avg",
        trials,
        tolerance: 1e-9,
        max_error: 0.0,
        failures: Vec::new(),
    };
    let mut gap = SuiteResult {
        name: "minimize_wootters_gap",
        trials,
        tolerance: 1e-3,
        max_error: 0.0,
        failures: Vec::new(),
    };
    for (trial, seed, excess, value, we, detail) in rows {
        vs_eigen.max_error = vs_eigen.max_error.max(excess.max(0.0));
        if excess > vs_eigen.tolerance {
            vs_eigen.failures.push(TrialFailure {
                trial,
                seed,
                error: excess,
                detail: detail.clone(),
            });
        }
        // Within 1e-3 above the measure, never more than 1e-6 below it.
        let g = (value - we).abs();
        gap.max_error = gap.max_error.max(g);
        if g > gap.tolerance || value < we - 1e-6 {
            gap.failures.push(TrialFailure {
                trial,
                seed,
                error: g,
                detail,
            });
        }
    }
    (vs_eigen, gap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_cfg() -> VerifyConfig {
        VerifyConfig {
            trials: 60,
            seed: 42,
            ..Default::default()
        }
    }

    #[test]
    fn all_suites_pass_on_a_quick_run() {
        let results = run_all(&quick_cfg()).unwrap();
        assert_eq!(results.len(), SUITE_NAMES.len());
        for r in &results {
            assert!(
                r.passed(),
                "suite {} failed: max error {:e} > {:e}\n{:?}",
                r.name,
                r.max_error,
                r.tolerance,
                r.failures.first()
            );
        }
    }

    #[test]
    fn injected_fault_is_detected() {
        let cfg = VerifyConfig {
            inject_fault: true,
            ..quick_cfg()
        };
        let suite = run_suite(&cfg, "closed_vs_spectral").unwrap();
        assert!(!suite.passed(), "fault injection went unnoticed");
    }

    #[test]
    fn sequential_matches_parallel() {
        let cfg = VerifyConfig {
            trials: 40,
            parallel: false,
            ..Default::default()
        };
        let seq = run_suite(&cfg, "closed_vs_spectral").unwrap();
        let par = run_suite(
            &VerifyConfig {
                parallel: true,
                ..cfg
            },
            "closed_vs_spectral",
        )
        .unwrap();
        assert_eq!(seq.max_error, par.max_error);
    }

    #[test]
    fn rejects_bad_config() {
        assert!(run_all(&VerifyConfig {
            trials: 0,
            ..Default::default()
        })
        .is_err());
        assert!(run_suite(
            &VerifyConfig {
                tol: 0.0,
                ..Default::default()
            },
            "closed_vs_spectral"
        )
        .is_none());
        assert!(run_suite(&VerifyConfig::default(), "no_such_suite").is_none());
    }
}
