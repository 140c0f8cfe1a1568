//! Thin command-line front end over the `photocount` library.
//!
//! Exit codes: 0 success, 2 usage or domain errors in the inputs,
//! 3 truncation cap exceeded, 4 linearization domain violated.

use clap::{Args, Parser, Subcommand, ValueEnum};

use photocount::counting::{response_count_pmf, window_count_pmf};
use photocount::distributions::{
    absorption_pmf, cell_filling_pmf, conditional_response_pmf, detection_pmf,
    mean_transition_probability,
};
use photocount::output::{Cell, OutputFormat, Table};
use photocount::{
    counting, localization, monte_carlo, CountingWindow, Error, LocalizationScenario,
    MeanOccupancy, ModelMode, SimulationConfig, TruncatedPmf, TruncationPolicy,
};

const VERSION: &str = env!("CARGO_PKG_VERSION");
const MAX_TERMS: usize = 1_000_000;

#[derive(Parser)]
#[command(
    name = "photocount",
    version,
    about = "Photon-counting statistics of thermal light: analytic distributions, \
             finite-window counting, and a deterministic event-level simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an analytic probability mass function
    Pmf(PmfArgs),
    /// Run the event-level simulator and compare it with the analytic law
    Simulate(SimulateArgs),
    /// Evaluate a derived quantity over a grid of mean occupancies
    Sweep(SweepArgs),
    /// Localization probabilities and the classical-beam baseline
    #[command(subcommand)]
    Localization(LocalizationCmd),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Exactly summed response probability
    Exact,
    /// First-order shortcut -ln(1-p) ≈ p
    #[value(alias = "paper")]
    Approx,
}

impl From<ModeArg> for ModelMode {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::Exact => ModelMode::Exact,
            ModeArg::Approx => ModelMode::Approximate,
        }
    }
}

impl ModeArg {
    fn label(self) -> &'static str {
        match self {
            ModeArg::Exact => "exact",
            ModeArg::Approx => "approx",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(format: FormatArg) -> Self {
        match format {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PmfKind {
    /// Phase-space cell filling
    Cells,
    /// Absorption from one cell of given mean
    Absorption,
    /// Photons per elementary detector response
    Detection,
    /// Response size, conditioned on a response occurring
    Conditional,
    /// Detector responses per window
    Responses,
    /// Total photons per window
    Window,
}

impl PmfKind {
    fn label(self) -> &'static str {
        match self {
            PmfKind::Cells => "cells",
            PmfKind::Absorption => "absorption",
            PmfKind::Detection => "detection",
            PmfKind::Conditional => "conditional",
            PmfKind::Responses => "responses",
            PmfKind::Window => "window",
        }
    }
}

#[derive(Args)]
struct PmfArgs {
    /// Which distribution to evaluate
    #[arg(value_enum)]
    distribution: PmfKind,
    /// Mean photons per phase-space cell (mean absorbed count for `absorption`)
    #[arg(long)]
    nbar: f64,
    /// Window length T/τ, used by `responses` and `window`
    #[arg(long, default_value_t = 1.0)]
    t_over_tau: f64,
    /// Largest count to print; mass beyond it is folded into the reported tail bound
    #[arg(long)]
    kmax: Option<u64>,
    /// Certified truncation tolerance
    #[arg(long, default_value_t = 1e-12)]
    eps: f64,
    /// Evaluation mode
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    /// Display-only multiplicative scale (detection-volume factor)
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum SimulateTarget {
    /// Single elementary responses against the detection law
    Response,
    /// Window totals against the compound law
    Window,
}

impl SimulateTarget {
    fn label(self) -> &'static str {
        match self {
            SimulateTarget::Response => "response",
            SimulateTarget::Window => "window",
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    /// What to simulate
    #[arg(value_enum)]
    target: SimulateTarget,
    /// Mean photons per phase-space cell
    #[arg(long)]
    nbar: f64,
    /// Window length T/τ, used by the `window` target
    #[arg(long, default_value_t = 1.0)]
    t_over_tau: f64,
    /// Number of independent trials
    #[arg(long, default_value_t = 1_000_000)]
    trials: u64,
    /// Seed of the run
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; the result does not depend on this
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Evaluation mode
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    /// Truncation tolerance of the analytic reference
    #[arg(long, default_value_t = 1e-12)]
    eps: f64,
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepQuantity {
    /// Two-photon to one-photon detection ratio U_2/U_1
    Ratio21,
    /// Mean transition probability, exact and shortcut side by side
    MeanTransition,
    /// Gap between windowed detection rate and mean occupancy
    ErgodicityGap,
}

impl SweepQuantity {
    fn label(self) -> &'static str {
        match self {
            SweepQuantity::Ratio21 => "ratio21",
            SweepQuantity::MeanTransition => "mean-transition",
            SweepQuantity::ErgodicityGap => "ergodicity-gap",
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    /// What to evaluate at each grid point
    #[arg(value_enum)]
    quantity: SweepQuantity,
    /// Comma-separated occupancies (`0.01,0.1,1`) or a log range
    /// (`1e-4..1:13` = 13 log-spaced points, endpoints included)
    #[arg(long)]
    nbar_grid: String,
    /// Window length T/τ for `ergodicity-gap`
    #[arg(long, default_value_t = 1.0)]
    t_over_tau: f64,
    /// Evaluation mode (ignored by `mean-transition`, which prints both)
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    /// Certified truncation tolerance
    #[arg(long, default_value_t = 1e-12)]
    eps: f64,
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Subcommand)]
enum LocalizationCmd {
    /// Probability (v/v0)^N that the gas sits inside a sub-volume
    VolumeRatio {
        /// Occupied sub-volume v
        #[arg(long)]
        v: f64,
        /// Initial volume v0
        #[arg(long)]
        v0: f64,
        /// Total photon number N
        #[arg(long)]
        n: u64,
        /// Output format
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
    /// Relative detection probability N·δv/v (or Z·nbar·δv/v)
    DetectProb {
        /// Definite photon number N
        #[arg(long)]
        n: Option<u64>,
        /// Number of phase-space cells Z (with --nbar)
        #[arg(long)]
        z: Option<u64>,
        /// Mean occupancy (with --z)
        #[arg(long)]
        nbar: Option<f64>,
        /// Detector volume fraction δv/v
        #[arg(long)]
        dv_over_v: f64,
        /// Output format
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
    /// Mean classical particle count ρ·u·τ·S
    ClassicalMean {
        /// Particle density ρ
        #[arg(long)]
        rho: f64,
        /// Speed toward the detector u
        #[arg(long)]
        u: f64,
        /// Exposure time τ
        #[arg(long)]
        tau: f64,
        /// Detector sensitive area S
        #[arg(long)]
        area: f64,
        /// Output format
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        std::process::exit(match err {
            Error::TruncationCapExceeded { .. } => 3,
            Error::OutsideLinearDomain { .. } => 4,
            _ => 2,
        });
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Pmf(args) => run_pmf(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Localization(cmd) => run_localization(cmd),
    }
}

/// Writes to stdout, exiting quietly if the downstream pipe is closed.
fn emit(rendered: &str) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    if stdout
        .write_all(rendered.as_bytes())
        .and_then(|()| stdout.flush())
        .is_err()
    {
        std::process::exit(0);
    }
}

/// Keeps entries up to `kmax`, folding the dropped mass into the tail.
fn clip(pmf: &TruncatedPmf, kmax: Option<u64>) -> (Vec<(u64, f64)>, f64) {
    let mut tail = pmf.tail_bound();
    let mut rows = Vec::new();
    for (k, p) in pmf.iter() {
        match kmax {
            Some(kmax) if k > kmax => tail += p,
            _ => rows.push((k, p)),
        }
    }
    (rows, tail)
}

fn run_pmf(args: PmfArgs) -> Result<(), Error> {
    let policy = TruncationPolicy::new(args.eps, MAX_TERMS)?;
    let nbar = MeanOccupancy::new(args.nbar)?;
    let window = CountingWindow::new(args.t_over_tau)?;
    let mode = ModelMode::from(args.mode);
    if !args.scale.is_finite() || args.scale <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "scale",
            reason: format!("must be positive and finite, got {}", args.scale),
        });
    }
    let uses_window = matches!(args.distribution, PmfKind::Responses | PmfKind::Window);
    let pmf = match args.distribution {
        PmfKind::Cells => cell_filling_pmf(nbar, &policy)?,
        PmfKind::Absorption => absorption_pmf(args.nbar, &policy)?,
        PmfKind::Detection => detection_pmf(nbar, &policy)?,
        PmfKind::Conditional => conditional_response_pmf(nbar, mode, &policy)?,
        PmfKind::Responses => response_count_pmf(nbar, &window, mode, &policy)?,
        PmfKind::Window => window_count_pmf(nbar, &window, mode, &policy)?,
    };
    let (rows, tail) = clip(&pmf, args.kmax);

    let mut table = Table::new(["k", "probability"]);
    table.add_meta("version", VERSION);
    table.add_meta("distribution", args.distribution.label());
    table.add_meta("nbar", args.nbar);
    if uses_window {
        table.add_meta("t_over_tau", args.t_over_tau);
    }
    table.add_meta("mode", args.mode.label());
    table.add_meta("epsilon", args.eps);
    if let Some(kmax) = args.kmax {
        table.add_meta("kmax", kmax);
    }
    table.add_meta("scale", args.scale);
    table.add_meta("k_min", pmf.k_min());
    table.add_meta("tail_bound", tail * args.scale);
    for (k, p) in rows {
        table.add_row(vec![Cell::Int(k), Cell::Float(p * args.scale)]);
    }
    emit(&table.render(args.format.into()));
    Ok(())
}

fn run_simulate(args: SimulateArgs) -> Result<(), Error> {
    let policy = TruncationPolicy::new(args.eps, MAX_TERMS)?;
    let nbar = MeanOccupancy::new(args.nbar)?;
    let window = CountingWindow::new(args.t_over_tau)?;
    let mode = ModelMode::from(args.mode);
    let config = SimulationConfig::new(args.seed, args.trials)
        .with_workers(args.workers)
        .with_mode(mode);

    let (hist, analytic) = match args.target {
        SimulateTarget::Response => (
            monte_carlo::sample_single_response(nbar, &config)?,
            detection_pmf(nbar, &policy)?,
        ),
        SimulateTarget::Window => (
            monte_carlo::sample_window(nbar, &window, &config)?,
            window_count_pmf(nbar, &window, mode, &policy)?,
        ),
    };
    let report = monte_carlo::compare(&hist, &analytic)?;

    let mut table = Table::new(["k", "empirical", "analytic", "delta"]);
    table.add_meta("version", VERSION);
    table.add_meta("target", args.target.label());
    table.add_meta("nbar", args.nbar);
    if matches!(args.target, SimulateTarget::Window) {
        table.add_meta("t_over_tau", args.t_over_tau);
    }
    table.add_meta("mode", args.mode.label());
    table.add_meta("epsilon", args.eps);
    table.add_meta("seed", args.seed);
    table.add_meta("trials", args.trials);
    table.add_meta("tail_bound", analytic.tail_bound());
    table.add_meta("tv_distance", report.tv_distance);
    table.add_meta("chi_square", report.chi_square);
    for bin in &report.per_bin {
        table.add_row(vec![
            Cell::Int(bin.k),
            Cell::Float(bin.empirical),
            Cell::Float(bin.analytic),
            Cell::Float(bin.delta),
        ]);
    }
    emit(&table.render(args.format.into()));
    Ok(())
}

/// Parses `a,b,c` as explicit points or `lo..hi:count` as an inclusive
/// log-spaced range.
fn parse_grid(spec: &str) -> Result<Vec<f64>, Error> {
    let invalid = |reason: String| Error::InvalidParameter {
        name: "nbar_grid",
        reason,
    };
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(invalid("grid is empty".to_string()));
    }
    if let Some((range, count)) = spec.split_once(':') {
        let (lo, hi) = range
            .split_once("..")
            .ok_or_else(|| invalid(format!("expected lo..hi:count, got {spec}")))?;
        let lo: f64 = lo
            .parse()
            .map_err(|_| invalid(format!("bad lower bound {lo}")))?;
        let hi: f64 = hi
            .parse()
            .map_err(|_| invalid(format!("bad upper bound {hi}")))?;
        let count: usize = count
            .parse()
            .map_err(|_| invalid(format!("bad point count {count}")))?;
        if !(lo > 0.0 && hi > lo && lo.is_finite() && hi.is_finite()) {
            return Err(invalid(format!(
                "log range needs 0 < lo < hi, got {lo}..{hi}"
            )));
        }
        if count < 2 {
            return Err(invalid("log range needs at least 2 points".to_string()));
        }
        let step = (hi.ln() - lo.ln()) / (count - 1) as f64;
        return Ok((0..count)
            .map(|i| (lo.ln() + step * i as f64).exp())
            .collect());
    }
    spec.split(',')
        .map(|token| {
            let token = token.trim();
            token
                .parse::<f64>()
                .map_err(|_| invalid(format!("bad grid point {token:?}")))
        })
        .collect()
}

fn run_sweep(args: SweepArgs) -> Result<(), Error> {
    let policy = TruncationPolicy::new(args.eps, MAX_TERMS)?;
    let grid = parse_grid(&args.nbar_grid)?;
    let window = CountingWindow::new(args.t_over_tau)?;
    let mode = ModelMode::from(args.mode);

    let columns: &[&str] = match args.quantity {
        SweepQuantity::Ratio21 => &["nbar", "ratio21"],
        SweepQuantity::MeanTransition => &["nbar", "exact", "approx"],
        SweepQuantity::ErgodicityGap => &["nbar", "gap"],
    };
    let mut table = Table::new(columns.iter().copied());
    table.add_meta("version", VERSION);
    table.add_meta("quantity", args.quantity.label());
    table.add_meta("mode", args.mode.label());
    table.add_meta("epsilon", args.eps);
    if matches!(args.quantity, SweepQuantity::ErgodicityGap) {
        table.add_meta("t_over_tau", args.t_over_tau);
    }
    table.add_meta("grid", args.nbar_grid.trim());

    for &value in &grid {
        let nbar = MeanOccupancy::new(value)?;
        let row = match args.quantity {
            SweepQuantity::Ratio21 => {
                if value == 0.0 {
                    return Err(Error::DegenerateInput(
                        "ratio21 is undefined at zero occupancy".to_string(),
                    ));
                }
                let u = detection_pmf(nbar, &policy)?;
                vec![Cell::Float(value), Cell::Float(u.prob(2) / u.prob(1))]
            }
            SweepQuantity::MeanTransition => vec![
                Cell::Float(value),
                Cell::Float(mean_transition_probability(nbar, ModelMode::Exact)),
                Cell::Float(mean_transition_probability(nbar, ModelMode::Approximate)),
            ],
            SweepQuantity::ErgodicityGap => {
                let gap = counting::ergodicity_gap(nbar, &window, mode)?;
                vec![Cell::Float(value), Cell::Float(gap)]
            }
        };
        table.add_row(row);
    }
    emit(&table.render(args.format.into()));
    Ok(())
}

fn run_localization(cmd: LocalizationCmd) -> Result<(), Error> {
    let mut table = Table::new(["quantity", "value"]);
    table.add_meta("version", VERSION);
    let format = match cmd {
        LocalizationCmd::VolumeRatio { v, v0, n, format } => {
            let scenario = LocalizationScenario::new(v0, v, 0.0)?.with_photon_count(n);
            let ratio = localization::volume_occupation_ratio(&scenario)?;
            table.add_meta("v", v);
            table.add_meta("v0", v0);
            table.add_meta("n", n);
            table.add_row(vec![Cell::from("volume_ratio"), Cell::Float(ratio)]);
            format
        }
        LocalizationCmd::DetectProb {
            n,
            z,
            nbar,
            dv_over_v,
            format,
        } => {
            let mut scenario = LocalizationScenario::new(1.0, 1.0, dv_over_v)?;
            if let Some(n) = n {
                scenario = scenario.with_photon_count(n);
                table.add_meta("n", n);
            }
            if let (Some(z), Some(nbar)) = (z, nbar) {
                scenario = scenario.with_ensemble(z, MeanOccupancy::new(nbar)?);
                table.add_meta("z", z);
                table.add_meta("nbar", nbar);
            }
            table.add_meta("dv_over_v", dv_over_v);
            let probability = localization::relative_detection_probability(&scenario)?;
            table.add_row(vec![Cell::from("detect_prob"), Cell::Float(probability)]);
            format
        }
        LocalizationCmd::ClassicalMean {
            rho,
            u,
            tau,
            area,
            format,
        } => {
            let beam = localization::ClassicalBeam::new(rho, u, tau, area)?;
            table.add_meta("rho", rho);
            table.add_meta("u", u);
            table.add_meta("tau", tau);
            table.add_meta("area", area);
            table.add_row(vec![
                Cell::from("classical_mean"),
                Cell::Float(localization::classical_mean_count(&beam)),
            ]);
            format
        }
    };
    emit(&table.render(format.into()));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::parse_grid;

    #[test]
    fn grid_accepts_comma_lists() {
        assert_eq!(parse_grid("0.1, 1,5").unwrap(), vec![0.1, 1.0, 5.0]);
        assert_eq!(parse_grid("1e-4").unwrap(), vec![1e-4]);
    }

    #[test]
    fn grid_accepts_log_ranges() {
        let grid = parse_grid("1e-2..1:3").unwrap();
        assert_eq!(grid.len(), 3);
        assert!((grid[0] - 1e-2).abs() < 1e-15);
        assert!((grid[1] - 1e-1).abs() < 1e-15);
        assert!((grid[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn grid_rejects_garbage() {
        assert!(parse_grid("").is_err());
        assert!(parse_grid("  ").is_err());
        assert!(parse_grid("a,b").is_err());
        assert!(parse_grid("1..0:5").is_err());
        assert!(parse_grid("1..2:1").is_err());
        assert!(parse_grid("0..1:4").is_err());
    }
}
