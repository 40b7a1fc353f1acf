use clap::{Args, Parser, Subcommand};
use concurrence::states::BellKind;
use concurrence::C64;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "concurrence",
    version,
    about = "Two-qubit entanglement measures: spectral and closed-form concurrence, \
             verification suites, curves, and a decomposition-search oracle"
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Analyze a state file: lambda spectrum, concurrence by every
    /// applicable method, branch and bounds.
    Analyze {
        /// Path to a JSON state file.
        state: PathBuf,
        /// Rank threshold for taking the closed-form path.
        #[arg(long, default_value_t = concurrence::DEFAULT_RANK_TOL)]
        rank_tol: f64,
        /// Emit the report as JSON instead of aligned text.
        #[arg(long)]
        json: bool,
    },
    /// Generate a state file from one of the built-in families.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Run the randomized verification suites.
    Verify {
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Tolerance for the closed-form / spectral comparisons.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = concurrence::DEFAULT_RANK_TOL)]
        rank_tol: f64,
        /// Emit suite results as JSON instead of a table.
        #[arg(long)]
        json: bool,
        /// Corrupt the closed form on purpose; the suites must fail.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Emit a parameter sweep as CSV.
    Curve {
        #[command(subcommand)]
        family: CurveFamily,
    },
    /// Minimize the average pure-state entanglement over
    /// decompositions of a rank <= 2 state file; prints a JSON report.
    Oracle {
        /// Path to a JSON state file (rank <= 2).
        state: PathBuf,
        /// Decomposition members (2..=4).
        #[arg(long, default_value_t = 4)]
        m: usize,
        #[arg(long, default_value_t = 64)]
        restarts: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Cap on refinement sweeps per restart.
        #[arg(long, default_value_t = 500)]
        max_sweeps: u32,
        /// Relative improvement below which a restart stops.
        #[arg(long, default_value_t = 1e-8)]
        sweep_tol: f64,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct OutArg {
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum GenFamily {
    /// g |first><first| + (1-g) |second><second| over two Bell states.
    BellMixture {
        /// Bell pair, e.g. "phi+,psi-".
        #[arg(long, value_parser = parse_bell_pair)]
        pair: (BellKind, BellKind),
        #[arg(long)]
        g: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// p |psi-><psi-| + (1-p) |i><i| towards a computational state.
    DepartureDiag {
        /// Basis index 1..=4 selecting |00>, |01>, |10>, |11>.
        #[arg(long)]
        i: usize,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// q |psi-><psi-| + (1-q) |chi><chi| with the symmetric state
    /// chi = x1|00> + (x2/sqrt 2)(|01> + |10>) + x4|11>.
    DepartureOrth {
        #[arg(long)]
        q: f64,
        /// Shortcut: chi = u(theta) (x) u(theta).
        #[arg(long, conflicts_with_all = ["x1", "x2", "x4"])]
        u_theta: Option<f64>,
        /// Complex coefficient as "re" or "re,im".
        #[arg(long, value_parser = parse_complex, requires_all = ["x2", "x4"])]
        x1: Option<C64>,
        #[arg(long, value_parser = parse_complex)]
        x2: Option<C64>,
        #[arg(long, value_parser = parse_complex)]
        x4: Option<C64>,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand, Debug)]
pub enum CurveFamily {
    /// Sweep the first eigenstate's concurrence at fixed v1, with the
    /// second eigenstate separable; columns c1, we, ef_eigen.
    Fig1 {
        #[arg(long, default_value_t = 0.1)]
        v1: f64,
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Sweep g for a Bell pair; columns g, c_closed, c_spectral.
    BellMixture {
        #[arg(long, value_parser = parse_bell_pair)]
        pair: (BellKind, BellKind),
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Sweep p towards |i>; columns p, c_closed, c_spectral.
    DepartureDiag {
        #[arg(long)]
        i: usize,
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Sweep q at fixed chi; columns q, c_closed, c_spectral.
    DepartureOrth {
        #[arg(long, conflicts_with_all = ["x1", "x2", "x4"])]
        u_theta: Option<f64>,
        #[arg(long, value_parser = parse_complex, requires_all = ["x2", "x4"])]
        x1: Option<C64>,
        #[arg(long, value_parser = parse_complex)]
        x2: Option<C64>,
        #[arg(long, value_parser = parse_complex)]
        x4: Option<C64>,
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[command(flatten)]
        out: OutArg,
    },
}

fn parse_bell_pair(s: &str) -> Result<(BellKind, BellKind), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected two Bell states like \"phi+,psi-\", got {s:?}"))?;
    let first: BellKind = a.parse().map_err(|e| format!("{e}"))?;
    let second: BellKind = b.parse().map_err(|e| format!("{e}"))?;
    Ok((first, second))
}

fn parse_complex(s: &str) -> Result<C64, String> {
    let parse_part = |p: &str| {
        p.trim()
            .parse::<f64>()
            .map_err(|_| format!("expected a number, got {p:?}"))
    };
    match s.split_once(',') {
        Some((re, im)) => Ok(C64::new(parse_part(re)?, parse_part(im)?)),
        None => Ok(C64::new(parse_part(s)?, 0.0)),
    }
}
