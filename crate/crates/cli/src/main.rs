//! `twr`: sweeps, gap tables, weight curves, validation and D-factor tables
//! for the two-way relay sum-BER toolkit.
//!
//! Exit codes: 0 ok, 2 configuration error, 3 numerical failure,
//! 4 validation failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use twr_core::asymptotic::{
    beta_closed_form, beta_numeric, gap_table, high_snr_sum_ber, protocol_family, HighSnrProfile,
};
use twr_core::channel_sim::{estimate_d_factors, semi_analytic_sum_ber_batch, SimCase, SnrForm, SnrMode};
use twr_core::closed_form::sum_ber_closed_form;
use twr_core::scenario::{AntennaConfig, DFactors, PowerProfile, Protocol, ScenarioFile, Setup, WeightPair, DEFAULT_SEED};
use twr_core::validation::{run_validation, ValidationOptions};

/// Environment variable overriding the built-in default seed.
const SEED_ENV: &str = "TWR_SEED";

const BETA_TOLERANCE: f64 = 1e-8;

#[derive(Debug)]
enum CliError {
    Core(twr_core::Error),
    Io(String),
    ValidationFailed,
}

impl From<twr_core::Error> for CliError {
    fn from(e: twr_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(twr_core::Error::Numerical(_)) => 3,
            CliError::Core(_) | CliError::Io(_) => 2,
            CliError::ValidationFailed => 4,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(name = "twr", version, about = "Sum-BER analysis of AF beamforming two-way relay networks")]
struct Cli {
    /// Seed for all Monte-Carlo draws (default: scenario file, then $TWR_SEED).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ScenarioArgs {
    /// Scenario file (`key = value` lines).
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Antennas as AxRxB, overriding the scenario.
    #[arg(long)]
    antennas: Option<String>,
    /// ρ_AR in dB, overriding the scenario.
    #[arg(long, allow_negative_numbers = true)]
    rho_ar_db: Option<f64>,
    /// Relative A–R distance d0, overriding the scenario.
    #[arg(long)]
    d0: Option<f64>,
    /// Relay transmit SNR in dB, overriding the scenario.
    #[arg(long, allow_negative_numbers = true)]
    relay_rho_db: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Sum-BER against ρ_AR for several protocols and evaluation modes.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Comma-separated protocols (default: all five).
        #[arg(long, value_delimiter = ',')]
        protocols: Vec<Protocol>,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        rho_start: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 40.0)]
        rho_stop: f64,
        #[arg(long, default_value_t = 5.0)]
        rho_step: f64,
        #[arg(long, value_enum, default_value_t = SweepMode::All)]
        mode: SweepMode,
        /// Monte-Carlo trials per point (default: scenario).
        #[arg(long)]
        trials: Option<u64>,
        /// Trials for the D-factor estimate when M_R > 1.
        #[arg(long, default_value_t = 1_000_000)]
        d_trials: u64,
        #[arg(long)]
        out: PathBuf,
        /// Also write a matplotlib script that plots the CSV.
        #[arg(long)]
        plot_script: Option<PathBuf>,
    },
    /// High-SNR gaps from the best protocol.
    Gaps {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, value_delimiter = ',')]
        protocols: Vec<Protocol>,
        #[arg(long, default_value_t = 1_000_000)]
        d_trials: u64,
        /// CSV output; the aligned table always goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimal β² against d0 or ρ_AR.
    Beta {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long)]
        protocol: Protocol,
        #[arg(long, value_enum)]
        sweep: BetaSweep,
        #[arg(long, allow_negative_numbers = true)]
        start: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        stop: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Runs the invariant checks and prints a pass/fail report.
    Validate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long)]
        trials: Option<u64>,
        /// Negative control: scale A on the analytic side of the KS checks.
        #[arg(long, hide = true)]
        corrupt_coefficient: Option<f64>,
    },
    /// D factors against the number of relay antennas.
    Kappa {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, default_value_t = 1)]
        m_r_min: u32,
        #[arg(long, default_value_t = 4)]
        m_r_max: u32,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepMode {
    Mc,
    Closed,
    Asymptote,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BetaSweep {
    D0,
    Rho,
}

fn config(msg: impl Into<String>) -> CliError {
    CliError::Core(twr_core::Error::Config(msg.into()))
}

fn load_scenario(args: &ScenarioArgs, seed_flag: Option<u64>) -> CliResult<ScenarioFile> {
    let mut base = ScenarioFile::default();
    if let Ok(v) = std::env::var(SEED_ENV) {
        base.seed = v.trim().parse().map_err(|_| config(format!("{SEED_ENV}: cannot parse '{v}' as a seed")))?;
    } else {
        base.seed = DEFAULT_SEED;
    }
    let mut sc = match &args.scenario {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("cannot read scenario {}: {e}", path.display())))?;
            ScenarioFile::parse_over(&text, base)?
        }
        None => base,
    };
    if let Some(a) = &args.antennas {
        sc.antennas = parse_antennas(a)?;
    }
    if let Some(r) = args.rho_ar_db {
        sc.rho_ar_db = r;
    }
    if let Some(d0) = args.d0 {
        if !(d0 > 0.0 && d0 < 1.0) {
            return Err(config(format!("--d0: must lie in (0, 1), got {d0}")));
        }
        sc.d0 = d0;
    }
    if let Some(r) = args.relay_rho_db {
        sc.relay_rho_db = Some(r);
    }
    if let Some(s) = seed_flag {
        sc.seed = s;
    }
    Ok(sc)
}

fn parse_antennas(s: &str) -> CliResult<AntennaConfig> {
    let parts: Vec<&str> = s.split(['x', 'X']).collect();
    let bad = || config(format!("--antennas: expected AxRxB, got '{s}'"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let n: Vec<u32> = parts.iter().map(|p| p.trim().parse().map_err(|_| bad())).collect::<CliResult<_>>()?;
    Ok(AntennaConfig::new(n[0], n[1], n[2])?)
}

fn grid(start: f64, stop: f64, step: f64, what: &str) -> CliResult<Vec<f64>> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(config(format!("{what} step must be > 0, got {step}")));
    }
    if !(stop >= start) {
        return Err(config(format!("{what} stop {stop} is below start {start}")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| start + k as f64 * step).collect())
}

fn protocols_or_all(list: &[Protocol]) -> Vec<Protocol> {
    if list.is_empty() {
        Protocol::ALL.to_vec()
    } else {
        list.to_vec()
    }
}

/// D factors for the scenario's antennas at the given weights; exact at M_R = 1.
fn dfactors(sc: &ScenarioFile, pw: &PowerProfile, w: WeightPair, trials: u64) -> CliResult<DFactors> {
    if sc.antennas.m_r == 1 {
        return Ok(DFactors::single_antenna());
    }
    Ok(estimate_d_factors(sc.antennas, pw, w, trials, sc.seed)?.factors)
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

fn csv_writer(path: &Path) -> CliResult<csv::Writer<fs::File>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Setups per protocol with the scenario's weights, or optimized ones.
fn protocol_setups(sc: &ScenarioFile, protocols: &[Protocol], d_trials: u64) -> CliResult<Vec<Setup>> {
    let pw = sc.powers()?;
    let w0 = sc.weights().unwrap_or_else(WeightPair::balanced);
    let d = dfactors(sc, &pw, w0, d_trials)?;
    protocols
        .iter()
        .map(|&p| {
            let mut s = Setup::new(p, sc.antennas, pw).with_dfactors(d);
            if p.uses_weights() {
                s = s.with_weights(match sc.weights() {
                    Some(w) => w,
                    None => beta_numeric(&s, BETA_TOLERANCE)?,
                });
            }
            Ok(s)
        })
        .collect()
}

fn mode_name(m: SweepMode) -> &'static str {
    match m {
        SweepMode::Mc => "mc",
        SweepMode::Closed => "closed",
        SweepMode::Asymptote => "asymptote",
        SweepMode::All => "all",
    }
}

struct SweepRow {
    rho_db: f64,
    protocol: Protocol,
    mode: SweepMode,
    sum_ber: f64,
    std_error: Option<f64>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    sc: &ScenarioFile,
    protocols: &[Protocol],
    rhos: &[f64],
    mode: SweepMode,
    trials: u64,
    d_trials: u64,
    out: &Path,
    plot: Option<&Path>,
) -> CliResult<()> {
    let modes: Vec<SweepMode> = match mode {
        SweepMode::All => vec![SweepMode::Mc, SweepMode::Closed, SweepMode::Asymptote],
        m => vec![m],
    };
    let base = protocol_setups(sc, protocols, d_trials)?;
    let mut rows = Vec::new();
    for &rho_db in rhos {
        let pw = sc.powers_at(rho_db)?;
        let setups: Vec<Setup> = base.iter().map(|s| s.with_powers(pw)).collect();
        let mc = if modes.contains(&SweepMode::Mc) {
            let cases: Vec<SimCase> = setups
                .iter()
                .map(|s| {
                    let mode = if s.protocol.has_dual_reception() { SnrMode::DualReception } else { SnrMode::Unified };
                    SimCase { setup: *s, mode, form: SnrForm::Exact }
                })
                .collect();
            Some(semi_analytic_sum_ber_batch(&cases, trials, sc.seed)?)
        } else {
            None
        };
        let analytic: Vec<(f64, f64)> = setups
            .par_iter()
            .map(|s| -> CliResult<(f64, f64)> {
                let closed = if modes.contains(&SweepMode::Closed) { sum_ber_closed_form(s)? } else { f64::NAN };
                let asym = if modes.contains(&SweepMode::Asymptote) {
                    // the asymptote overshoots at low SNR; a sum of two BERs never exceeds 2
                    let p = HighSnrProfile::from_setup(s)?;
                    high_snr_sum_ber(&p, &s.modulation, s.powers.rho_ar).min(2.0)
                } else {
                    f64::NAN
                };
                Ok((closed, asym))
            })
            .collect::<CliResult<_>>()?;
        for (k, s) in setups.iter().enumerate() {
            for &m in &modes {
                let (sum_ber, std_error) = match m {
                    SweepMode::Mc => {
                        let e = mc.as_ref().expect("mc computed")[k];
                        (e.mean, Some(e.std_error))
                    }
                    SweepMode::Closed => (analytic[k].0, None),
                    _ => (analytic[k].1, None),
                };
                if !sum_ber.is_finite() {
                    return Err(CliError::Core(twr_core::Error::Numerical(format!(
                        "{} {} at {rho_db} dB is not finite",
                        s.protocol,
                        mode_name(m)
                    ))));
                }
                rows.push(SweepRow { rho_db, protocol: s.protocol, mode: m, sum_ber, std_error });
            }
        }
    }
    let mut w = csv_writer(out)?;
    w.write_record(["rho_ar_db", "protocol", "mode", "sum_ber", "std_error"])?;
    for r in &rows {
        w.write_record([
            r.rho_db.to_string(),
            r.protocol.name().to_string(),
            mode_name(r.mode).to_string(),
            num(r.sum_ber),
            r.std_error.map(num).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    if let Some(p) = plot {
        write_plot_script(p, out)?;
    }
    Ok(())
}

fn relative_to(script: &Path, target: &Path) -> String {
    let dir = script.parent().filter(|d| !d.as_os_str().is_empty());
    let (Ok(t), Some(Ok(d))) = (target.canonicalize(), dir.map(|d| d.canonicalize())) else {
        return target.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    };
    match t.strip_prefix(&d) {
        Ok(rel) => rel.to_string_lossy().into_owned(),
        Err(_) => t.to_string_lossy().into_owned(),
    }
}

fn write_plot_script(script: &Path, csv_path: &Path) -> CliResult<()> {
    let rel = relative_to(script, csv_path);
    let body = format!(
        r#"#!/usr/bin/env python3
# Sum-BER curves from {rel}.
import csv
import os
from collections import defaultdict

import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
curves = defaultdict(list)
with open(os.path.join(here, {rel:?})) as f:
    for row in csv.DictReader(f):
        curves[(row["protocol"], row["mode"])].append((float(row["rho_ar_db"]), float(row["sum_ber"])))

style = {{"mc": "o", "closed": "-", "asymptote": "--"}}
fig, ax = plt.subplots(figsize=(7, 5))
for (protocol, mode), pts in sorted(curves.items()):
    pts = [p for p in pts if p[1] > 0]
    if not pts:
        continue
    x, y = zip(*pts)
    ax.semilogy(x, y, style.get(mode, "-"), label=f"{{protocol}} ({{mode}})", fillstyle="none")
ax.set_xlabel("rho_AR (dB)")
ax.set_ylabel("sum-BER")
ax.set_ylim(bottom=1e-7)
ax.grid(True, which="both", alpha=0.3)
ax.legend(fontsize=7)
fig.tight_layout()
fig.savefig(os.path.join(here, {png:?}), dpi=150)
"#,
        png = format!("{}.png", Path::new(&rel).file_stem().map(|s| s.to_string_lossy()).unwrap_or_default()),
    );
    fs::write(script, body)?;
    Ok(())
}

fn cmd_gaps(sc: &ScenarioFile, protocols: &[Protocol], d_trials: u64, out: Option<&Path>) -> CliResult<()> {
    let pw = sc.powers()?;
    let d = if sc.antennas.m_r == 1 {
        None
    } else {
        Some(dfactors(sc, &pw, WeightPair::balanced(), d_trials)?)
    };
    let family = protocol_family(sc.antennas, &pw, d, BETA_TOLERANCE)?;
    let chosen: Vec<Setup> = family.into_iter().filter(|s| protocols.contains(&s.protocol)).collect();
    let table = gap_table(&chosen)?;
    let mut stdout = std::io::stdout().lock();
    writeln!(stdout, "{} balanced={} best={}", sc.antennas, sc.d0 == 0.5, table.best)?;
    writeln!(stdout, "{:<18} {:>9} {:>10}", "protocol", "beta_sq", "gap_db")?;
    for r in &table.rows {
        writeln!(stdout, "{:<18} {:>9.5} {:>10.4}", r.protocol.name(), r.weights.beta_sq(), r.gap_db)?;
    }
    if let Some(path) = out {
        let mut w = csv_writer(path)?;
        w.write_record(["protocol", "beta_sq", "gap_db", "best"])?;
        for r in &table.rows {
            w.write_record([
                r.protocol.name().to_string(),
                num(r.weights.beta_sq()),
                num(r.gap_db),
                (r.protocol == table.best).to_string(),
            ])?;
        }
        w.flush()?;
    }
    Ok(())
}

fn cmd_beta(sc: &ScenarioFile, protocol: Protocol, sweep: BetaSweep, xs: &[f64], out: &Path) -> CliResult<()> {
    if !protocol.uses_weights() {
        return Err(config(format!("--protocol: {protocol} has no relay weights")));
    }
    let single = (sc.antennas.m_a, sc.antennas.m_r, sc.antennas.m_b) == (1, 1, 1);
    let rows: Vec<(f64, Option<f64>, f64)> = xs
        .par_iter()
        .map(|&x| -> CliResult<_> {
            let mut s = sc.clone();
            match sweep {
                BetaSweep::D0 => {
                    if !(x > 0.0 && x < 1.0) {
                        return Err(config(format!("d0 sweep point {x} is outside (0, 1)")));
                    }
                    s.d0 = x
                }
                BetaSweep::Rho => {
                    s.relay_rho_db = s.relay_rho_db.map(|r| r - s.rho_ar_db + x);
                    s.rho_ar_db = x
                }
            }
            let pw = s.powers()?;
            let closed = if single { Some(beta_closed_form(protocol, s.antennas, &pw)?.beta_sq()) } else { None };
            let d = dfactors(&s, &pw, WeightPair::balanced(), 100_000)?;
            let setup = Setup::new(protocol, s.antennas, pw).with_dfactors(d);
            let numeric = beta_numeric(&setup, BETA_TOLERANCE)?.beta_sq();
            Ok((x, closed, numeric))
        })
        .collect::<CliResult<_>>()?;
    let mut w = csv_writer(out)?;
    let head = match sweep {
        BetaSweep::D0 => "d0",
        BetaSweep::Rho => "rho_ar_db",
    };
    w.write_record([head, "beta_sq_closed_form", "beta_sq_numeric"])?;
    for (x, c, n) in rows {
        w.write_record([x.to_string(), c.map(num).unwrap_or_default(), num(n)])?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_validate(sc: &ScenarioFile, corrupt: Option<f64>) -> CliResult<()> {
    let opts = ValidationOptions { corrupt_a: corrupt, ..ValidationOptions::from_scenario(sc)? };
    let report = run_validation(&opts)?;
    println!("{report}");
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if report.failed() {
        return Err(CliError::ValidationFailed);
    }
    Ok(())
}

fn cmd_kappa(sc: &ScenarioFile, m_r: std::ops::RangeInclusive<u32>, trials: u64, out: &Path) -> CliResult<()> {
    let pw = sc.powers()?;
    let w0 = sc.weights().unwrap_or_else(WeightPair::balanced);
    let mut w = csv_writer(out)?;
    w.write_record([
        "m_r", "d_arb_3", "d_bra_3", "d_arb_4", "d_bra_4", "se_arb_3", "se_bra_3", "se_arb_4", "se_bra_4",
    ])?;
    for mr in m_r {
        let ant = AntennaConfig::new(sc.antennas.m_a, mr, sc.antennas.m_b)?;
        let (f, se) = if mr == 1 {
            (DFactors::single_antenna(), DFactors { d_arb_3: 0.0, d_bra_3: 0.0, d_arb_4: 0.0, d_bra_4: 0.0 })
        } else {
            let e = estimate_d_factors(ant, &pw, w0, trials, sc.seed)?;
            (e.factors, e.std_error)
        };
        w.write_record([
            mr.to_string(),
            num(f.d_arb_3),
            num(f.d_bra_3),
            num(f.d_arb_4),
            num(f.d_bra_4),
            num(se.d_arb_3),
            num(se.d_bra_3),
            num(se.d_arb_4),
            num(se.d_bra_4),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Sweep { scenario, protocols, rho_start, rho_stop, rho_step, mode, trials, d_trials, out, plot_script } => {
            let sc = load_scenario(&scenario, cli.seed)?;
            let rhos = grid(rho_start, rho_stop, rho_step, "--rho")?;
            let trials = trials.unwrap_or(sc.trials);
            let protocols = protocols_or_all(&protocols);
            cmd_sweep(&sc, &protocols, &rhos, mode, trials, d_trials, &out, plot_script.as_deref())
        }
        Command::Gaps { scenario, protocols, d_trials, out } => {
            let sc = load_scenario(&scenario, cli.seed)?;
            cmd_gaps(&sc, &protocols_or_all(&protocols), d_trials, out.as_deref())
        }
        Command::Beta { scenario, protocol, sweep, start, stop, step, out } => {
            let sc = load_scenario(&scenario, cli.seed)?;
            let xs = match sweep {
                BetaSweep::D0 => grid(start.unwrap_or(0.1), stop.unwrap_or(0.9), step.unwrap_or(0.05), "--d0")?,
                BetaSweep::Rho => grid(start.unwrap_or(0.0), stop.unwrap_or(40.0), step.unwrap_or(5.0), "--rho")?,
            };
            cmd_beta(&sc, protocol, sweep, &xs, &out)
        }
        Command::Validate { scenario, trials, corrupt_coefficient } => {
            let mut sc = load_scenario(&scenario, cli.seed)?;
            if let Some(t) = trials {
                sc.trials = t;
            }
            cmd_validate(&sc, corrupt_coefficient)
        }
        Command::Kappa { scenario, m_r_min, m_r_max, trials, out } => {
            let sc = load_scenario(&scenario, cli.seed)?;
            if m_r_min == 0 || m_r_max < m_r_min {
                return Err(config(format!("--m-r-min/--m-r-max: need 1 ≤ min ≤ max, got {m_r_min}..{m_r_max}")));
            }
            cmd_kappa(&sc, m_r_min..=m_r_max, trials.unwrap_or(sc.trials), &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Core(err) => eprintln!("error: {err}"),
                CliError::Io(msg) => eprintln!("error: {msg}"),
                CliError::ValidationFailed => eprintln!("error: validation failed"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antenna_strings() {
        let a = parse_antennas("2x1X3").unwrap();
        assert_eq!((a.m_a, a.m_r, a.m_b), (2, 1, 3));
        for bad in ["2x2", "axbxc", "2x0x2", ""] {
            assert!(parse_antennas(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn grids_include_the_stop_point() {
        assert_eq!(grid(0.0, 40.0, 5.0, "x").unwrap().len(), 9);
        assert_eq!(grid(0.1, 0.3, 0.1, "x").unwrap().len(), 3);
        assert_eq!(grid(3.0, 3.0, 1.0, "x").unwrap(), [3.0]);
        assert!(grid(1.0, 0.0, 1.0, "x").is_err());
        assert!(grid(0.0, 1.0, 0.0, "x").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(config("k").exit_code(), 2);
        assert_eq!(CliError::Core(twr_core::Error::Numerical("n".into())).exit_code(), 3);
        assert_eq!(CliError::ValidationFailed.exit_code(), 4);
        assert_eq!(CliError::Io("io".into()).exit_code(), 2);
    }
}
