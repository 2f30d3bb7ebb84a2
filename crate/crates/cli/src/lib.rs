// Copyright 2026 The supop Authors
// SPDX-License-Identifier: Apache-2.0

//! Front end for the `supop` binary: argument types, the six commands and
//! their CSV/JSON writers.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use supop::fock::coherent_state;
use supop::indicators::{
    default_domain, indicator_report, moment_report, negative_volume, sup_state, IndicatorReport, QuadratureMoments,
    StateSpec,
};
use supop::quasiprob::{
    quasiprob_f, quasiprob_sots_closed, wigner_series, wigner_socs_closed, wigner_sots_closed,
};
use supop::scheme::{convergence_slope, run_scheme, BeamSplitter, Branch, BranchOutcome, Convergence, PdcOrdering, SchemeConfig};
use supop::{apply_sup, sup_params, Complex64, GridSpec, OrderingParameter, PhaseGrid, PhasePoint, SupParams};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] supop::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("serialization failed: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for bad input, 3 for numerical failures, 4 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_validation() => 2,
            CliError::Core(_) => 3,
            CliError::Usage(_) => 2,
            CliError::Io { .. } | CliError::Json(_) => 4,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Inclusive sweep `LO:HI:STEP`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize;
        (0..=n)
            .map(|k| {
                let v = self.lo + self.step * k as f64;
                // snap accumulated rounding onto the end point and zero
                if (v - self.hi).abs() < 1e-9 * self.step {
                    self.hi
                } else if v.abs() < 1e-9 * self.step {
                    0.0
                } else {
                    v
                }
            })
            .collect()
    }
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, step] = parts.as_slice() else {
            return Err(format!("expected LO:HI:STEP, got {s:?}"));
        };
        let (lo, hi, step) = (parse_real(lo)?, parse_real(hi)?, parse_real(step)?);
        if step <= 0.0 || hi < lo {
            return Err(format!("empty sweep {s:?}: need HI >= LO and STEP > 0"));
        }
        Ok(Self { lo, hi, step })
    }
}

/// Square integration or plotting window `LO:HI`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
}

impl FromStr for Domain {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let Some((lo, hi)) = s.split_once(':') else {
            return Err(format!("expected LO:HI, got {s:?}"));
        };
        let (lo, hi) = (parse_real(lo)?, parse_real(hi)?);
        if hi <= lo {
            return Err(format!("empty domain {s:?}"));
        }
        Ok(Self { lo, hi })
    }
}

fn parse_real(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("not a number: {s:?}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("not finite: {s:?}"))
    }
}

/// `RE` or `RE,IM`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(parse_real(re)?, parse_real(im)?)),
        None => Ok(Complex64::new(parse_real(s)?, 0.0)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateKind {
    Coherent,
    Thermal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    /// Closed-form expressions where they exist.
    Closed,
    /// The Fock-space matrix engine.
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "supop", version, about = "SUP-operated coherent and thermal states: phase-space grids, indicators and scheme checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// input state family
    #[arg(long, value_enum, default_value_t = StateKind::Coherent)]
    pub state: StateKind,
    /// coherent amplitude RE[,IM]; repeat for several states
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub alpha: Vec<Complex64>,
    /// real coherent amplitudes LO:HI:STEP, appended after --alpha
    #[arg(long)]
    pub alpha_range: Option<Sweep>,
    /// thermal mean photon number; repeat for several states
    #[arg(long)]
    pub nbar: Vec<f64>,
    /// thermal mean photon numbers LO:HI:STEP, appended after --nbar
    #[arg(long)]
    pub nbar_range: Option<Sweep>,
}

impl StateArgs {
    /// Requested input states; α = 0.4 or n̄ = 0.2 when none are given.
    pub fn states(&self) -> CliResult<Vec<StateSpec>> {
        match self.state {
            StateKind::Coherent => {
                if !self.nbar.is_empty() || self.nbar_range.is_some() {
                    return Err(CliError::Usage("--nbar applies to --state thermal".into()));
                }
                let mut alphas = self.alpha.clone();
                if let Some(r) = self.alpha_range {
                    alphas.extend(r.values().into_iter().map(|a| Complex64::new(a, 0.0)));
                }
                if alphas.is_empty() {
                    alphas.push(Complex64::new(0.4, 0.0));
                }
                Ok(alphas.into_iter().map(|alpha| StateSpec::Coherent { alpha }).collect())
            }
            StateKind::Thermal => {
                if !self.alpha.is_empty() || self.alpha_range.is_some() {
                    return Err(CliError::Usage("--alpha applies to --state coherent".into()));
                }
                let mut nbars = self.nbar.clone();
                if let Some(r) = self.nbar_range {
                    nbars.extend(r.values());
                }
                if nbars.is_empty() {
                    nbars.push(0.2);
                }
                Ok(nbars.into_iter().map(|nbar| StateSpec::Thermal { nbar }).collect())
            }
        }
    }

    pub fn single(&self) -> CliResult<StateSpec> {
        let states = self.states()?;
        match states.as_slice() {
            [one] => Ok(*one),
            _ => Err(CliError::Usage(format!("this command takes one state, got {}", states.len()))),
        }
    }
}

#[derive(Debug, Args)]
pub struct ValueT {
    /// SUP parameter t ∈ [−1, 1]; s = √(1 − t²)
    #[arg(long, allow_hyphen_values = true)]
    pub t: f64,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct TValues {
    /// single SUP parameter t
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// sweep of t as LO:HI:STEP
    #[arg(long, allow_hyphen_values = true)]
    pub t_range: Option<Sweep>,
}

impl TValues {
    pub fn values(&self) -> Vec<f64> {
        match (self.t, self.t_range) {
            (Some(t), _) => vec![t],
            (None, Some(r)) => r.values(),
            (None, None) => Vec::new(),
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// output file; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Wigner function of one SUP-operated state on a square grid
    WignerGrid {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        t: ValueT,
        /// samples per axis
        #[arg(long, default_value_t = 201)]
        grid: usize,
        #[arg(long, default_value = "-2.5:2.5", allow_hyphen_values = true)]
        domain: Domain,
        #[arg(long, value_enum, default_value_t = Engine::Closed)]
        engine: Engine,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Ordering-parametrized quasiprobability at one phase-space point against F
    QuasiprobScan {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        t: ValueT,
        /// |β|
        #[arg(long)]
        beta_abs: f64,
        /// arg β in radians
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        beta_arg: f64,
        /// ordering parameter F; repeat for several values
        #[arg(long = "bigF", allow_hyphen_values = true)]
        big_f: Vec<f64>,
        /// ordering parameters LO:HI:STEP, appended after --bigF
        #[arg(long = "bigF-range", allow_hyphen_values = true)]
        big_f_range: Option<Sweep>,
        /// thermal inputs: closed uses the resummed series, series the Fock engine
        #[arg(long, value_enum, default_value_t = Engine::Closed)]
        engine: Engine,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Every indicator at one t for each input state
    Indicators {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        t: ValueT,
        #[command(flatten)]
        table: TableArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Every indicator over a sweep of t
    ScanT {
        #[command(flatten)]
        state: StateArgs,
        /// t sweep LO:HI:STEP
        #[arg(long, allow_hyphen_values = true)]
        t_range: Sweep,
        #[command(flatten)]
        table: TableArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Negative volume of the Wigner function
    NegativeVolume {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        t: TValues,
        /// samples per axis
        #[arg(long, default_value_t = 401)]
        grid: usize,
        /// integration window; centroid ± (5 + spread) when absent
        #[arg(long, allow_hyphen_values = true)]
        domain: Option<Domain>,
        #[arg(long, value_enum, default_value_t = Engine::Closed)]
        engine: Engine,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Heralded optical scheme against the target SUP operation
    SchemeVerify {
        #[command(flatten)]
        scheme: SchemeArgs,
        /// output file; stdout when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// samples per axis for V
    #[arg(long, default_value_t = 201)]
    pub grid: usize,
    /// skip V and the Wigner minimum
    #[arg(long)]
    pub moments_only: bool,
}

#[derive(Debug, Args)]
pub struct SchemeArgs {
    /// coherent input amplitude RE[,IM]
    #[arg(long, value_parser = parse_complex, default_value = "0.4", allow_hyphen_values = true)]
    pub alpha: Complex64,
    /// PDC coupling
    #[arg(long, default_value_t = 0.05)]
    pub g: f64,
    /// B1 reflection RE[,IM]
    #[arg(long, value_parser = parse_complex, default_value = "0.05", allow_hyphen_values = true)]
    pub r1: Complex64,
    /// B2 reflection RE[,IM]
    #[arg(long, value_parser = parse_complex, default_value = "0.05", allow_hyphen_values = true)]
    pub r2: Complex64,
    /// B3 transmission; reflection √(1 − t3²)
    #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2)]
    pub t3: f64,
    /// ε-halvings for the convergence fit
    #[arg(long, default_value_t = 3)]
    pub halvings: usize,
    /// use the down-converter operator as printed instead of pair creation
    #[arg(long)]
    pub literal_pdc: bool,
    /// Fock cutoff of the input state
    #[arg(long, default_value_t = 32)]
    pub cutoff: usize,
}

impl SchemeArgs {
    pub fn config(&self) -> CliResult<SchemeConfig> {
        if !(0.0..=1.0).contains(&self.t3) {
            return Err(supop::Error::OutOfRange { name: "t3", value: self.t3 }.into());
        }
        let b3 = BeamSplitter::new(Complex64::new((1.0 - self.t3 * self.t3).sqrt(), 0.0), Complex64::new(self.t3, 0.0))?;
        let ordering = if self.literal_pdc { PdcOrdering::LiteralAnnihilation } else { PdcOrdering::Creation };
        Ok(SchemeConfig::new(
            BeamSplitter::from_reflection(self.r1)?,
            BeamSplitter::from_reflection(self.r2)?,
            b3,
            self.g,
            ordering,
        )?)
    }
}

/// Runs a parsed command.
pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::WignerGrid { state, t, grid, domain, engine, output } => {
            let grid = wigner_grid(state.single()?, t.t, *grid, *domain, *engine)?;
            emit(output, |w, f| write_grid(w, f, &grid))
        }
        Command::QuasiprobScan { state, t, beta_abs, beta_arg, big_f, big_f_range, engine, output } => {
            let mut fs = big_f.clone();
            if let Some(r) = big_f_range {
                fs.extend(r.values());
            }
            if fs.is_empty() {
                return Err(CliError::Usage("give at least one --bigF or a --bigF-range".into()));
            }
            let beta = PhasePoint::from_polar(*beta_abs, *beta_arg);
            let scan = quasiprob_scan(state.single()?, t.t, beta, &fs, *engine)?;
            emit(output, |w, f| write_scan(w, f, &scan))
        }
        Command::Indicators { state, t, table, output } => {
            let rows = indicator_table(&state.states()?, &[t.t], table)?;
            emit(output, |w, f| write_reports(w, f, &rows))
        }
        Command::ScanT { state, t_range, table, output } => {
            let rows = indicator_table(&state.states()?, &t_range.values(), table)?;
            emit(output, |w, f| write_reports(w, f, &rows))
        }
        Command::NegativeVolume { state, t, grid, domain, engine, output } => {
            let rows = volume_table(&state.states()?, &t.values(), *grid, *domain, *engine)?;
            emit(output, |w, f| write_volumes(w, f, &rows))
        }
        Command::SchemeVerify { scheme, out } => {
            let report = scheme_verify(scheme)?;
            let output = OutputArgs { out: out.clone(), format: Format::Json };
            emit(&output, |w, _| write_json(w, &report))
        }
    }
}

/// Wigner values on a grid, with the settings that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub state: StateSpec,
    pub params: SupParams,
    pub engine: Engine,
    pub grid: PhaseGrid,
}

pub fn wigner_grid(state: StateSpec, t: f64, n: usize, domain: Domain, engine: Engine) -> CliResult<WignerGrid> {
    let params = sup_params(t)?;
    let spec = GridSpec::square(domain.lo, domain.hi, n)?;
    let grid = match engine {
        Engine::Closed => match state {
            StateSpec::Coherent { alpha } => PhaseGrid::evaluate(spec, |b| wigner_socs_closed(params, alpha, b))?,
            StateSpec::Thermal { nbar } => PhaseGrid::evaluate(spec, |b| wigner_sots_closed(params, nbar, b))?,
        },
        Engine::Series => {
            let (rho, _) = sup_state(state, params)?;
            PhaseGrid::evaluate(spec, |b| wigner_series(&rho, b, None))?
        }
    };
    Ok(WignerGrid { state, params, engine, grid })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanPoint {
    #[serde(rename = "F")]
    pub f: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasiprobScan {
    pub state: StateSpec,
    pub params: SupParams,
    pub beta: [f64; 2],
    /// `resummed` or `fock`
    pub engine: &'static str,
    pub points: Vec<ScanPoint>,
}

/// Coherent inputs have no closed form and always use the Fock engine.
pub fn quasiprob_scan(state: StateSpec, t: f64, beta: PhasePoint, fs: &[f64], engine: Engine) -> CliResult<QuasiprobScan> {
    let params = sup_params(t)?;
    let orderings = fs.iter().map(|&f| OrderingParameter::new(f)).collect::<supop::Result<Vec<_>>>()?;
    let (label, values) = match (state, engine) {
        (StateSpec::Thermal { nbar }, Engine::Closed) => {
            ("resummed", orderings.par_iter().map(|&f| quasiprob_sots_closed(params, nbar, beta, f)).collect::<supop::Result<Vec<_>>>()?)
        }
        _ => ("fock", orderings.par_iter().map(|&f| fock_quasiprob(state, params, beta, f)).collect::<supop::Result<Vec<_>>>()?),
    };
    let points = fs.iter().zip(values).map(|(&f, value)| ScanPoint { f, value }).collect();
    Ok(QuasiprobScan { state, params, beta: [beta.x, beta.y], engine: label, points })
}

/// Largest Fock cutoff tried by `fock_quasiprob`.
pub const MAX_SCAN_CUTOFF: usize = 512;

/// Fock-engine ℧^(F)(β), growing the input cutoff by half while the shell
/// sum has not converged. For F > 0 the number-basis elements grow
/// geometrically, so the state's own cutoff is not always enough. Growth
/// stops at the first cutoff whose elements overflow, and the last
/// convergence error is returned.
pub fn fock_quasiprob(state: StateSpec, params: SupParams, beta: PhasePoint, f: OrderingParameter) -> supop::Result<f64> {
    let (mut rho, _) = sup_state(state, params)?;
    let mut result = quasiprob_f(&rho, beta, f);
    while let Err(supop::Error::Truncation { context, residual }) = result {
        if context != TAIL_CONTEXT || !residual.is_finite() || rho.cutoff() >= MAX_SCAN_CUTOFF {
            break;
        }
        let cutoff = (rho.cutoff() + rho.cutoff() / 2).min(MAX_SCAN_CUTOFF);
        rho = apply_sup(&state.input_state_with_cutoff(cutoff)?, params)?.0;
        match quasiprob_f(&rho, beta, f) {
            Err(supop::Error::Truncation { residual: r, .. }) if !r.is_finite() => break,
            next => result = next,
        }
    }
    result
}

const TAIL_CONTEXT: &str = "quasiprobability (n, m) sum";

/// One report per (state, t), states outermost.
pub fn indicator_table(states: &[StateSpec], ts: &[f64], table: &TableArgs) -> CliResult<Vec<IndicatorReport>> {
    let jobs: Vec<(StateSpec, f64)> = states.iter().flat_map(|&s| ts.iter().map(move |&t| (s, t))).collect();
    let rows = jobs
        .par_iter()
        .map(|&(s, t)| if table.moments_only { moment_report(s, t) } else { indicator_report(s, t, table.grid) })
        .collect::<supop::Result<Vec<_>>>()?;
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VolumeRow {
    pub state_kind: &'static str,
    pub amplitude: Option<f64>,
    pub nbar: Option<f64>,
    pub t: f64,
    #[serde(rename = "V")]
    pub volume: f64,
    pub normalization: f64,
    pub wigner_min: f64,
}

impl VolumeRow {
    pub const COLUMNS: [&'static str; 7] = ["state_kind", "amplitude", "nbar", "t", "V", "normalization", "wigner_min"];
}

pub fn volume_table(states: &[StateSpec], ts: &[f64], n: usize, domain: Option<Domain>, engine: Engine) -> CliResult<Vec<VolumeRow>> {
    let mut rows = Vec::with_capacity(states.len() * ts.len());
    for &state in states {
        for &t in ts {
            rows.push(volume_row(state, t, n, domain, engine)?);
        }
    }
    Ok(rows)
}

fn volume_row(state: StateSpec, t: f64, n: usize, domain: Option<Domain>, engine: Engine) -> CliResult<VolumeRow> {
    let params = sup_params(t)?;
    let (rho, _) = sup_state(state, params)?;
    let spec = match domain {
        Some(d) => GridSpec::square(d.lo, d.hi, n)?,
        None => default_domain(QuadratureMoments::of(&rho).a_mean, state.displacement(), n)?,
    };
    let v = match (engine, state) {
        (Engine::Closed, StateSpec::Coherent { alpha }) => negative_volume(|b| wigner_socs_closed(params, alpha, b), spec)?,
        (Engine::Closed, StateSpec::Thermal { nbar }) => negative_volume(|b| wigner_sots_closed(params, nbar, b), spec)?,
        (Engine::Series, _) => negative_volume(|b| quasiprob_f(&rho, b, OrderingParameter::WIGNER), spec)?,
    };
    let (amplitude, nbar) = match state {
        StateSpec::Coherent { alpha } => (Some(alpha.norm()), None),
        StateSpec::Thermal { nbar } => (None, Some(nbar)),
    };
    Ok(VolumeRow {
        state_kind: state.kind(),
        amplitude,
        nbar,
        t,
        volume: v.volume,
        normalization: v.normalization,
        wigner_min: v.wigner_min,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchReport {
    #[serde(flatten)]
    pub outcome: BranchOutcome,
    pub convergence: Convergence,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemeReport {
    pub alpha: Complex64,
    pub config: SchemeConfig,
    pub epsilon: f64,
    pub branches: Vec<BranchReport>,
}

pub fn scheme_verify(args: &SchemeArgs) -> CliResult<SchemeReport> {
    let config = args.config()?;
    let psi = coherent_state(args.alpha, args.cutoff)?;
    let run = run_scheme(&psi, &config)?;
    let mut branches = Vec::with_capacity(2);
    for (branch, outcome) in [(Branch::One, run.branch_one), (Branch::Two, run.branch_two)] {
        let convergence = convergence_slope(&psi, &config, branch, args.halvings)?;
        branches.push(BranchReport { outcome, convergence });
    }
    Ok(SchemeReport { alpha: args.alpha, config, epsilon: run.epsilon, branches })
}

fn emit<F>(output: &OutputArgs, write: F) -> CliResult<()>
where
    F: FnOnce(&mut dyn Write, Format) -> CliResult<()>,
{
    match &output.out {
        Some(path) => {
            let io_err = |source| CliError::Io { path: path.display().to_string(), source };
            let file = File::create(path).map_err(io_err)?;
            let mut w = BufWriter::new(file);
            write(&mut w, output.format)?;
            w.flush().map_err(io_err)
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            write(&mut w, output.format)?;
            w.flush().map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

fn io(source: io::Error) -> CliError {
    CliError::Io { path: "<output>".into(), source }
}

/// 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_value(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Number(n) => n.as_f64().map(fmt_f64).unwrap_or_else(|| n.to_string()),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn write_json<T: Serialize>(w: &mut dyn Write, value: &T) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    w.write_all(b"\n").map_err(io)
}

/// Rows of serializable records, columns taken by name.
fn write_table<T: Serialize>(w: &mut dyn Write, columns: &[&str], rows: &[T]) -> CliResult<()> {
    writeln!(w, "{}", columns.join(",")).map_err(io)?;
    for row in rows {
        let v = serde_json::to_value(row)?;
        let fields: Vec<String> = columns.iter().map(|c| fmt_value(&v[*c])).collect();
        writeln!(w, "{}", fields.join(",")).map_err(io)?;
    }
    Ok(())
}

fn write_reports(w: &mut dyn Write, format: Format, rows: &[IndicatorReport]) -> CliResult<()> {
    match format {
        Format::Csv => write_table(w, &IndicatorReport::COLUMNS, rows),
        Format::Json => write_json(w, &rows),
    }
}

fn write_volumes(w: &mut dyn Write, format: Format, rows: &[VolumeRow]) -> CliResult<()> {
    match format {
        Format::Csv => write_table(w, &VolumeRow::COLUMNS, rows),
        Format::Json => write_json(w, &rows),
    }
}

fn write_scan(w: &mut dyn Write, format: Format, scan: &QuasiprobScan) -> CliResult<()> {
    match format {
        Format::Csv => write_table(w, &["F", "value"], &scan.points),
        Format::Json => write_json(w, scan),
    }
}

#[derive(Serialize)]
struct GridJson<'a> {
    state: StateSpec,
    params: SupParams,
    engine: &'a str,
    integral: f64,
    x: Vec<f64>,
    y: Vec<f64>,
    /// w[i][j] at (x[i], y[j])
    w: Vec<&'a [f64]>,
}

fn write_grid(w: &mut dyn Write, format: Format, g: &WignerGrid) -> CliResult<()> {
    let spec = g.grid.spec();
    match format {
        Format::Csv => {
            writeln!(w, "x,y,w").map_err(io)?;
            for i in 0..spec.nx {
                for j in 0..spec.ny {
                    writeln!(w, "{},{},{}", fmt_f64(spec.x(i)), fmt_f64(spec.y(j)), fmt_f64(g.grid.get(i, j))).map_err(io)?;
                }
            }
            Ok(())
        }
        Format::Json => {
            let json = GridJson {
                state: g.state,
                params: g.params,
                engine: match g.engine {
                    Engine::Closed => "closed",
                    Engine::Series => "series",
                },
                integral: g.grid.integral(),
                x: (0..spec.nx).map(|i| spec.x(i)).collect(),
                y: (0..spec.ny).map(|j| spec.y(j)).collect(),
                w: g.grid.values().chunks(spec.ny).collect(),
            };
            write_json(w, &json)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_hits_both_ends() {
        let s: Sweep = "-1:1:0.05".parse().unwrap();
        let v = s.values();
        assert_eq!(v.len(), 41);
        assert_eq!(v[0], -1.0);
        assert_eq!(v[20], 0.0);
        assert_eq!(v[40], 1.0);
    }

    #[test]
    fn sweep_rejects_empty_ranges() {
        assert!("1:0:0.1".parse::<Sweep>().is_err());
        assert!("0:1:0".parse::<Sweep>().is_err());
        assert!("0:1".parse::<Sweep>().is_err());
    }

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("0.4").unwrap(), Complex64::new(0.4, 0.0));
        assert_eq!(parse_complex("-0.1,0.3").unwrap(), Complex64::new(-0.1, 0.3));
        assert!(parse_complex("a,b").is_err());
    }

    #[test]
    fn floats_carry_seventeen_digits() {
        let s = fmt_f64(0.1);
        assert_eq!(s, "1.0000000000000001e-1");
        assert_eq!(s.parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::from(supop::Error::OutOfRange { name: "t", value: 2.0 }).exit_code(), 2);
        assert_eq!(CliError::from(supop::Error::ZeroProbability(0.0)).exit_code(), 3);
        assert_eq!(CliError::Io { path: "x".into(), source: io::Error::other("x") }.exit_code(), 4);
    }
}
