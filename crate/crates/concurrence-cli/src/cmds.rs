use crate::args::{Cli, Command, CurveFamily, GenFamily, OutArg};
use crate::fmt;
use concurrence::curves;
use concurrence::measures::{pure_concurrence, spectral_concurrence, ConcurrenceReport};
use concurrence::oracle::{minimize_ef, MinimizeOptions};
use concurrence::states::{
    bell_mixture, departure_diag, departure_orth, eigen_rank2, parse_state,
    product_chi_coefficients, write_state, DensityMatrix, StateData,
};
use concurrence::verify::{run_all, SuiteResult, VerifyConfig};
use concurrence::{closed_form_concurrence, Error, C64};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

type CmdResult = Result<ExitCode, Box<dyn std::error::Error>>;

pub fn dispatch(cli: Cli) -> CmdResult {
    match cli.cmd {
        Command::Analyze {
            state,
            rank_tol,
            json,
        } => analyze(&state, rank_tol, json),
        Command::Gen { family } => gen(family),
        Command::Verify {
            trials,
            seed,
            tol,
            rank_tol,
            json,
            inject_fault,
        } => verify(trials, seed, tol, rank_tol, json, inject_fault),
        Command::Curve { family } => curve(family),
        Command::Oracle {
            state,
            m,
            restarts,
            seed,
            max_sweeps,
            sweep_tol,
            out,
        } => oracle(&state, m, restarts, seed, max_sweeps, sweep_tol, out),
    }
}

fn read_state(path: &Path) -> Result<StateData, Box<dyn std::error::Error>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    Ok(parse_state(&text)?)
}

fn analyze(path: &Path, rank_tol: f64, json: bool) -> CmdResult {
    let state = read_state(path)?;
    let rho = state.density();
    let kind = match state {
        StateData::Pure(_) => "pure",
        StateData::Density(_) => "density",
    };
    let spectral = spectral_concurrence(&rho)?;

    let closed = match eigen_rank2(&rho, rank_tol) {
        Ok(d) => Some(closed_form_concurrence(&d)),
        Err(Error::RankTooHigh { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let rank = effective_rank(&rho, rank_tol)?;
    let pure_c = match state {
        StateData::Pure(psi) => Some(pure_concurrence(&psi)),
        StateData::Density(_) => None,
    };
    let delta = closed
        .as_ref()
        .map(|c| (c.concurrence - spectral.concurrence).abs());

    if json {
        let report = json!({
            "kind": kind,
            "rank": rank,
            "rank_tol": rank_tol,
            "pure_concurrence": pure_c,
            "spectral": spectral,
            "closed_form": closed,
            "method_delta": delta,
            "note": if closed.is_none() {
                Some("rank > 2: closed form unavailable, spectral only")
            } else {
                None
            },
        });
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print_text_report(kind, rank, rank_tol, pure_c, &spectral, closed.as_ref(), delta);
    }
    Ok(ExitCode::SUCCESS)
}

fn effective_rank(
    rho: &DensityMatrix,
    rank_tol: f64,
) -> Result<usize, Box<dyn std::error::Error>> {
    let eig = concurrence::linalg::herm_eigen(rho.matrix())?;
    Ok(eig.eigenvalues.iter().filter(|&&v| v > rank_tol).count())
}

fn print_text_report(
    kind: &str,
    rank: usize,
    rank_tol: f64,
    pure_c: Option<f64>,
    spectral: &ConcurrenceReport,
    closed: Option<&ConcurrenceReport>,
    delta: Option<f64>,
) {
    println!("kind            {kind}");
    println!("rank            {rank}  (rank tolerance {})", fmt::error(rank_tol));
    let method = if closed.is_some() {
        "closed_form + spectral"
    } else {
        "spectral only (rank > 2)"
    };
    println!("method          {method}");
    let lam = spectral.lambdas;
    println!(
        "lambdas         {}  {}  {}  {}",
        fmt::physical(lam[0]),
        fmt::physical(lam[1]),
        fmt::physical(lam[2]),
        fmt::physical(lam[3])
    );
    println!("concurrence     {}", fmt::physical(spectral.concurrence));
    println!("concurrence^2   {}", fmt::physical(spectral.concurrence_sq));
    println!("we_entropy      {}", fmt::physical(spectral.we_entropy));
    if let Some(c) = pure_c {
        println!("pure_bilinear   {}", fmt::physical(c));
    }
    if let Some(rep) = closed {
        if let Some(branch) = rep.branch {
            println!("branch          {}", branch.name());
        }
        if let (Some(lo), Some(hi)) = (rep.lower_bound, rep.upper_bound) {
            println!(
                "bounds_c^2      [{}, {}]",
                fmt::physical(lo),
                fmt::physical(hi)
            );
        }
    }
    if let Some(delta) = delta {
        println!("method_delta    {}", fmt::error(delta));
    }
}

fn gen(family: GenFamily) -> CmdResult {
    let (rho, out): (DensityMatrix, OutArg) = match family {
        GenFamily::BellMixture { pair, g, out } => (bell_mixture(pair.0, pair.1, g)?, out),
        GenFamily::DepartureDiag { i, p, out } => (departure_diag(i, p)?, out),
        GenFamily::DepartureOrth {
            q,
            u_theta,
            x1,
            x2,
            x4,
            out,
        } => {
            let (x1, x2, x4) = chi_coefficients(u_theta, x1, x2, x4)?;
            (departure_orth(q, x1, x2, x4)?, out)
        }
    };
    let mut text = write_state(&StateData::Density(rho));
    text.push('\n');
    fmt::emit(out.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn chi_coefficients(
    u_theta: Option<f64>,
    x1: Option<C64>,
    x2: Option<C64>,
    x4: Option<C64>,
) -> Result<(C64, C64, C64), Box<dyn std::error::Error>> {
    match (u_theta, x1, x2, x4) {
        (Some(theta), None, None, None) => Ok(product_chi_coefficients(theta)),
        (None, Some(x1), Some(x2), Some(x4)) => Ok((x1, x2, x4)),
        _ => Err(Error::BadParameter(
            "provide either --u-theta or all of --x1 --x2 --x4".into(),
        )
        .into()),
    }
}

fn verify(
    trials: u64,
    seed: u64,
    tol: f64,
    rank_tol: f64,
    json: bool,
    inject_fault: bool,
) -> CmdResult {
    let cfg = VerifyConfig {
        trials,
        seed,
        tol,
        rank_tol,
        inject_fault,
        parallel: cfg!(feature = "parallel"),
    };
    let results = run_all(&cfg)?;
    let failed: Vec<&SuiteResult> = results.iter().filter(|r| !r.passed()).collect();

    if json {
        println!("{}", serde_json::to_string_pretty(&results)?);
    } else {
        println!(
            "verify: trials = {trials}, seed = {seed}, tol = {}, rank_tol = {}",
            fmt::error(tol),
            fmt::error(rank_tol)
        );
        println!(
            "{:<26} {:>7} {:>12} {:>12}   status",
            "suite", "trials", "max_error", "tolerance"
        );
        for r in &results {
            println!(
                "{:<26} {:>7} {:>12} {:>12}   {}",
                r.name,
                r.trials,
                fmt::error(r.max_error),
                fmt::error(r.tolerance),
                if r.passed() { "PASS" } else { "FAIL" }
            );
        }
        for r in &failed {
            println!();
            println!(
                "suite {} failed on {} trial(s); failing seeds:",
                r.name,
                r.failures.len()
            );
            for f in &r.failures {
                println!("  trial {} seed {} error {}", f.trial, f.seed, fmt::error(f.error));
            }
        }
        if let Some(first) = failed.first().and_then(|r| r.failures.first()) {
            println!();
            println!("first counterexample:");
            println!("{}", first.detail);
        }
    }
    Ok(if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn curve(family: CurveFamily) -> CmdResult {
    let (spec, out) = match family {
        CurveFamily::Fig1 { v1, points, out } => (
            curves::CurveSpec {
                family: curves::CurveFamily::Fig1 { v1 },
                points,
            },
            out,
        ),
        CurveFamily::BellMixture { pair, points, out } => (
            curves::CurveSpec {
                family: curves::CurveFamily::BellMixture {
                    first: pair.0,
                    second: pair.1,
                },
                points,
            },
            out,
        ),
        CurveFamily::DepartureDiag { i, points, out } => (
            curves::CurveSpec {
                family: curves::CurveFamily::DepartureDiag { i },
                points,
            },
            out,
        ),
        CurveFamily::DepartureOrth {
            u_theta,
            x1,
            x2,
            x4,
            points,
            out,
        } => {
            let (x1, x2, x4) = chi_coefficients(u_theta, x1, x2, x4)?;
            (
                curves::CurveSpec {
                    family: curves::CurveFamily::DepartureOrth { x1, x2, x4 },
                    points,
                },
                out,
            )
        }
    };
    let table = curves::generate(&spec)?;
    fmt::emit(out.out.as_deref(), &fmt::csv(&table.columns, &table.rows))?;
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn oracle(
    path: &Path,
    m: usize,
    restarts: u64,
    seed: u64,
    max_sweeps: u32,
    sweep_tol: f64,
    out: Option<PathBuf>,
) -> CmdResult {
    let state = read_state(path)?;
    let rho = state.density();
    let opts = MinimizeOptions {
        m,
        restarts,
        seed,
        max_sweeps,
        rel_tol: sweep_tol,
        parallel: cfg!(feature = "parallel"),
    };
    let res = minimize_ef(&rho, &opts)?;
    let we = spectral_concurrence(&rho)?.we_entropy;

    let members: Vec<_> = res
        .decomposition
        .members()
        .iter()
        .map(|(p, psi)| {
            json!({
                "probability": p,
                "amplitudes": psi.amplitudes().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            })
        })
        .collect();
    let report = json!({
        "min_value": res.value,
        "we_entropy": we,
        "gap": res.value - we,
        "m": m,
        "restarts": res.restarts,
        "seed": res.seed,
        "best_restart": res.best_restart,
        "sweeps": res.sweeps,
        "residual": res.residual,
        "decomposition": { "members": members },
    });
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    fmt::emit(out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}
