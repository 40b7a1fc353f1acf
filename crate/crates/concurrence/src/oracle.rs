//! Brute-force minimization of the average pure-state entanglement over
//! decompositions of a rank-2 state.
//!
//! Every decomposition of `rho = v1 |v1><v1| + v2 |v2><v2|` into at most
//! `m` pure states is reached by an `m x 2` matrix with orthonormal
//! columns acting on the weighted eigenvectors,
//! `|w_k> = sum_j U_kj sqrt(v_j) |v_j>`. The minimizer runs seeded
//! random restarts over that Stiefel manifold, each refined by
//! golden-section sweeps over left Givens rotations, and reduces
//! deterministically by `(value, restart index)`.

use crate::error::{Error, Result};
use crate::linalg::{self, Vec4, C64};
use crate::measures::{entanglement_of_concurrence, spectral_concurrence};
use crate::par::map_indexed;
use crate::seed::derive_seed;
use crate::states::{eigen_rank2, DensityMatrix, PureState, Rank2Decomposition, DEFAULT_RANK_TOL};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::f64::consts::FRAC_PI_2;

/// Members with squared norm below this are dropped from a
/// decomposition.
const MEMBER_EPS: f64 = 1e-14;

const GOLDEN_RATIO: f64 = 0.618_033_988_749_894_9;
const GOLDEN_ITERS: usize = 44;

/// A pure-state decomposition `rho = sum_k p_k |psi_k><psi_k|`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    members: Vec<(f64, PureState)>,
}

impl Decomposition {
    pub fn members(&self) -> &[(f64, PureState)] {
        &self.members
    }

    /// Sum of the weighted projectors.
    pub fn reconstruction(&self) -> crate::linalg::Mat4 {
        let mut m = crate::linalg::Mat4::zeros();
        for (p, psi) in &self.members {
            m = m + psi.projector().scale(*p);
        }
        m
    }

    /// Largest entrywise deviation from `rho`.
    pub fn residual(&self, rho: &DensityMatrix) -> f64 {
        self.reconstruction().max_abs_diff(rho.matrix())
    }
}

/// An `m x 2` matrix with orthonormal columns; rows produce the
/// subnormalized decomposition members.
#[derive(Clone, Debug)]
pub struct IsometryParams {
    rows: Vec<[C64; 2]>,
}

impl IsometryParams {
    /// Validates column orthonormality within 1e-10.
    pub fn new(rows: Vec<[C64; 2]>) -> Result<Self> {
        let m = rows.len();
        if !(2..=4).contains(&m) {
            return Err(Error::BadParameter(format!(
                "isometry needs 2..=4 rows, got {m}"
            )));
        }
        for j in 0..2 {
            for k in 0..2 {
                let dot: C64 = rows.iter().map(|r| r[j].conj() * r[k]).sum();
                let expect = if j == k { 1.0 } else { 0.0 };
                if (dot - C64::new(expect, 0.0)).norm() > 1e-10 {
                    return Err(Error::InvariantViolation(format!(
                        "isometry columns not orthonormal (<{j}|{k}> = {dot})"
                    )));
                }
            }
        }
        Ok(IsometryParams { rows })
    }

    /// The identity embedding: member `k` is eigenvector `k`.
    pub fn identity(m: usize) -> Self {
        let mut rows = vec![[C64::new(0.0, 0.0); 2]; m];
        rows[0][0] = C64::new(1.0, 0.0);
        rows[1][1] = C64::new(1.0, 0.0);
        IsometryParams { rows }
    }

    /// Haar-ish random isometry: complex Gaussian columns,
    /// Gram-Schmidt orthonormalized.
    pub fn random(m: usize, rng: &mut ChaCha8Rng) -> Self {
        loop {
            let mut cols = [vec![C64::new(0.0, 0.0); m], vec![C64::new(0.0, 0.0); m]];
            for col in cols.iter_mut() {
                for z in col.iter_mut() {
                    *z = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
                }
            }
            let n0: f64 = cols[0].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if n0 < 1e-9 {
                continue;
            }
            for z in cols[0].iter_mut() {
                *z /= n0;
            }
            let ov: C64 = cols[0].iter().zip(&cols[1]).map(|(a, b)| a.conj() * b).sum();
            let (first, second) = cols.split_at_mut(1);
            for (b, a) in second[0].iter_mut().zip(&first[0]) {
                *b -= ov * a;
            }
            let n1: f64 = cols[1].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if n1 < 1e-9 {
                continue;
            }
            for z in cols[1].iter_mut() {
                *z /= n1;
            }
            let rows = (0..m).map(|i| [cols[0][i], cols[1][i]]).collect();
            return IsometryParams { rows };
        }
    }

    pub fn rows(&self) -> &[[C64; 2]] {
        &self.rows
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }
}

/// Compact fixed-size isometry used inside the optimizer hot loop.
#[derive(Clone, Copy)]
struct Iso {
    rows: [[C64; 2]; 4],
    m: usize,
}

impl Iso {
    fn from_params(u: &IsometryParams) -> Self {
        let mut rows = [[C64::new(0.0, 0.0); 2]; 4];
        for (i, r) in u.rows.iter().enumerate() {
            rows[i] = *r;
        }
        Iso {
            rows,
            m: u.rows.len(),
        }
    }

    fn to_params(self) -> IsometryParams {
        IsometryParams {
            rows: self.rows[..self.m].to_vec(),
        }
    }

    /// Left Givens rotation in the row plane `(i, j)` with angle
    /// `theta` and phase `phi`.
    fn rotated(&self, i: usize, j: usize, theta: f64, phi: f64) -> Iso {
        let (s, c) = theta.sin_cos();
        let e = C64::from_polar(1.0, phi);
        let mut out = *self;
        for col in 0..2 {
            let a = self.rows[i][col];
            let b = self.rows[j][col];
            out.rows[i][col] = a * c - e.conj() * s * b;
            out.rows[j][col] = e * s * a + b * c;
        }
        out
    }
}

/// Expands a decomposition member set from an isometry: weights are the
/// squared row norms, members the normalized rows; weights below 1e-14
/// are dropped.
pub fn apply_isometry(d: &Rank2Decomposition, u: &IsometryParams) -> Decomposition {
    let sub = weighted_eigenvectors(d);
    let mut members = Vec::with_capacity(u.m());
    for row in &u.rows {
        let mut w = [C64::new(0.0, 0.0); 4];
        for i in 0..4 {
            w[i] = row[0] * sub[0][i] + row[1] * sub[1][i];
        }
        let p: f64 = w.iter().map(|z| z.norm_sqr()).sum();
        if p < MEMBER_EPS {
            continue;
        }
        let amp = linalg::scale(&w, C64::new(1.0 / p.sqrt(), 0.0));
        members.push((p, PureState::new_unchecked(amp)));
    }
    Decomposition { members }
}

/// Average pure-state entanglement `sum_k p_k H(z(C(psi_k)))`.
pub fn average_entanglement(dec: &Decomposition) -> f64 {
    dec.members
        .iter()
        .map(|(p, psi)| {
            p * entanglement_of_concurrence(crate::measures::pure_concurrence(psi))
                .expect("concurrence is clamped to [0, 1]")
        })
        .sum()
}

fn weighted_eigenvectors(d: &Rank2Decomposition) -> [Vec4; 2] {
    [
        linalg::scale(d.psi1().amplitudes(), C64::new(d.v1().sqrt(), 0.0)),
        linalg::scale(d.psi2().amplitudes(), C64::new(d.v2().sqrt(), 0.0)),
    ]
}

/// Objective without materializing a `Decomposition`.
fn objective(u: &Iso, sub: &[Vec4; 2]) -> f64 {
    let mut total = 0.0;
    for row in &u.rows[..u.m] {
        let mut w = [C64::new(0.0, 0.0); 4];
        for i in 0..4 {
            w[i] = row[0] * sub[0][i] + row[1] * sub[1][i];
        }
        let p: f64 = w.iter().map(|z| z.norm_sqr()).sum();
        if p < MEMBER_EPS {
            continue;
        }
        let conc = ((w[0] * w[3] - w[1] * w[2]).norm() * 2.0 / p).min(1.0);
        total += p * entanglement_of_concurrence(conc).expect("clamped");
    }
    total
}

/// Options for [`minimize_ef`].
#[derive(Clone, Copy, Debug)]
pub struct MinimizeOptions {
    /// Number of decomposition members, 2..=4.
    pub m: usize,
    /// Independent restarts; restart 0 starts from the identity
    /// isometry (the eigendecomposition itself), the rest are random.
    pub restarts: u64,
    pub seed: u64,
    /// Cap on refinement sweeps per restart.
    pub max_sweeps: u32,
    /// Stop a restart when the relative improvement of one full sweep
    /// falls below this.
    pub rel_tol: f64,
    /// Run restarts on the rayon pool when available.
    pub parallel: bool,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions {
            m: 4,
            restarts: 64,
            seed: 42,
            max_sweeps: 500,
            rel_tol: 1e-8,
            parallel: true,
        }
    }
}

/// Result of a minimization run.
#[derive(Clone, Debug)]
pub struct MinimizeResult {
    /// Best average entanglement found.
    pub value: f64,
    /// The decomposition achieving it.
    pub decomposition: Decomposition,
    /// Restart index that produced the best value.
    pub best_restart: u64,
    /// Refinement sweeps used by the best restart.
    pub sweeps: u32,
    /// Reconstruction residual of the reported decomposition.
    pub residual: f64,
    pub seed: u64,
    pub restarts: u64,
}

/// Minimizes the average pure-state entanglement over all
/// decompositions of a rank <= 2 state into at most `opts.m` members.
///
/// Deterministic for a given seed: restarts reduce by
/// `(value, restart index)`, never by completion order, so parallel and
/// sequential runs return identical results.
pub fn minimize_ef(rho: &DensityMatrix, opts: &MinimizeOptions) -> Result<MinimizeResult> {
    if !(2..=4).contains(&opts.m) {
        return Err(Error::BadParameter(format!(
            "m must be in 2..=4, got {}",
            opts.m
        )));
    }
    if opts.restarts == 0 {
        return Err(Error::BadParameter("restarts must be >= 1".into()));
    }
    let d = eigen_rank2(rho, DEFAULT_RANK_TOL)?;
    let sub = weighted_eigenvectors(&d);

    let runs = map_indexed(opts.restarts, opts.parallel, |r| {
        let start = if r == 0 {
            Iso::from_params(&IsometryParams::identity(opts.m))
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(opts.seed, r));
            Iso::from_params(&IsometryParams::random(opts.m, &mut rng))
        };
        refine(start, &sub, opts.max_sweeps, opts.rel_tol)
    });

    let mut best_idx = 0usize;
    for (i, run) in runs.iter().enumerate() {
        if run.0 < runs[best_idx].0 {
            best_idx = i;
        }
    }
    let (value, iso, sweeps) = runs[best_idx];
    let decomposition = apply_isometry(&d, &iso.to_params());
    let residual = decomposition.residual(rho);
    Ok(MinimizeResult {
        value,
        decomposition,
        best_restart: best_idx as u64,
        sweeps,
        residual,
        seed: opts.seed,
        restarts: opts.restarts,
    })
}

/// Coordinate descent: golden-section line searches over the angle of
/// every left Givens plane, with phases 0 and pi/2, repeated until a
/// full sweep no longer improves the value by `rel_tol` relatively.
fn refine(start: Iso, sub: &[Vec4; 2], max_sweeps: u32, rel_tol: f64) -> (f64, Iso, u32) {
    let mut u = start;
    let mut best = objective(&u, sub);
    for sweep in 1..=max_sweeps {
        let before = best;
        for i in 0..u.m {
            for j in (i + 1)..u.m {
                for phi in [0.0, FRAC_PI_2] {
                    let f = |theta: f64| objective(&u.rotated(i, j, theta, phi), sub);
                    let (theta, val) = golden_min(f, -FRAC_PI_2, FRAC_PI_2);
                    if val < best {
                        u = u.rotated(i, j, theta, phi);
                        best = val;
                    }
                }
            }
        }
        if before - best < rel_tol * before.abs().max(1e-30) {
            return (best, u, sweep);
        }
    }
    (best, u, max_sweeps)
}

/// Golden-section minimum of `f` on `[a, b]`.
fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let mut c = b - GOLDEN_RATIO * (b - a);
    let mut d = a + GOLDEN_RATIO * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..GOLDEN_ITERS {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN_RATIO * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN_RATIO * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    (mid, f(mid))
}

/// Convenience: the entanglement measure `H(z(C))` of a state computed
/// through the spectral route.
pub fn wootters_entanglement(rho: &DensityMatrix) -> Result<f64> {
    Ok(spectral_concurrence(rho)?.we_entropy)
}
