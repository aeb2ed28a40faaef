//! Command-line front end: `prepare`, `sweep`, `sample`, `tomograph`, `measure`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use crate::circuit::{
    angles_from_spec, prepared_state, to_qasm, tunable_angles, tunable_bds_circuit, Layout,
    QUBIT_C, QUBIT_D,
};
use crate::error::{check_range, Error, Result};
use crate::measures::{full_report, ResourceReport};
use crate::noise::{apply_channel, composite_damping};
use crate::qmath::{hermitian_eigenvalues, Pauli};
use crate::states::{bds_from_spec, fidelity, BdsSpec, DensityMatrix};
use crate::tomography::{
    derive_seed, reconstruct, sample_counts, tomograph, Reconstruction, TomographyCounts,
};

#[derive(Debug, Parser)]
#[command(
    name = "bds",
    version,
    about = "Bell-diagonal state preparation, tomography and quantumness measures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print preparation angles, circuit and exact prepared state as JSON.
    Prepare(PrepareArgs),
    /// Sweep w and write measured and theoretical measures as CSV.
    Sweep(SweepArgs),
    /// Simulate tomography counts for a prepared state.
    Sample(SampleArgs),
    /// Reconstruct a state from a counts file and report its measures.
    Tomograph(TomographArgs),
    /// Report the measures of a density-matrix JSON file.
    Measure(MeasureArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct TargetArgs {
    /// Werner weight w in [0, 1].
    #[arg(long, allow_hyphen_values = true)]
    werner: Option<f64>,
    /// Bell-diagonal weights p00,p01,p10,p11.
    #[arg(long = "p", value_name = "P00,P01,P10,P11", allow_hyphen_values = true)]
    p: Option<String>,
}

#[derive(Debug, Args)]
struct OptionalTargetArgs {
    /// Werner weight of the expected state, for fidelity.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "p")]
    werner: Option<f64>,
    /// Bell-diagonal weights of the expected state, for fidelity.
    #[arg(long = "p", value_name = "P00,P01,P10,P11", allow_hyphen_values = true)]
    p: Option<String>,
}

#[derive(Debug, Args)]
struct PrepareArgs {
    #[command(flatten)]
    target: TargetArgs,
    /// Include OpenQASM 2.0 text in the output.
    #[arg(long)]
    qasm: bool,
    /// Logical-to-physical qubit map for QASM.
    #[arg(long, default_value = "a:1,b:3,c:2,d:4")]
    layout: String,
    /// Pauli bases measured on qubits c and d in the QASM, e.g. ZZ or XY.
    #[arg(long, default_value = "ZZ")]
    measure: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Sweep the mixture (1−w)·I/4 + w·ρ_p instead of the Werner family.
    #[arg(long = "p", value_name = "P00,P01,P10,P11", allow_hyphen_values = true)]
    p: Option<String>,
    /// Number of evenly spaced w values in [0, 1].
    #[arg(long, default_value_t = 11)]
    points: usize,
    /// Shots per tomography setting; 0 uses exact probabilities.
    #[arg(long, default_value_t = 8192)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Composite damping rates a,p applied to qubit a.
    #[arg(long, value_name = "A,P", allow_hyphen_values = true)]
    noise: Option<String>,
    /// Evaluate measures on the raw linear-inversion matrix.
    #[arg(long)]
    no_project: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[command(flatten)]
    target: TargetArgs,
    #[arg(long, default_value_t = 8192)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_name = "A,P", allow_hyphen_values = true)]
    noise: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TomographArgs {
    /// Counts JSON file.
    counts: PathBuf,
    #[command(flatten)]
    target: OptionalTargetArgs,
    #[arg(long)]
    no_project: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MeasureArgs {
    /// Density-matrix JSON file.
    state: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Which states a sweep walks through.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepFamily {
    Werner,
    /// `(1−w)·I/4 + w·ρ_spec`.
    CustomSpec(BdsSpec),
}

impl SweepFamily {
    pub fn spec_at(&self, w: f64) -> Result<BdsSpec> {
        match self {
            SweepFamily::Werner => BdsSpec::werner(w),
            SweepFamily::CustomSpec(spec) => {
                BdsSpec::from_array(spec.as_array().map(|p| (1.0 - w) / 4.0 + w * p))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub family: SweepFamily,
    pub w_points: usize,
    /// 0 selects exact mode.
    pub shots: u64,
    pub seed: u64,
    pub noise_a: f64,
    pub noise_p: f64,
    pub project_physical: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            family: SweepFamily::Werner,
            w_points: 11,
            shots: 8192,
            seed: 0,
            noise_a: 0.0,
            noise_p: 0.0,
            project_physical: true,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.w_points == 0 {
            return Err(Error::InvalidProbabilities(
                "sweep needs at least one point".into(),
            ));
        }
        check_range("a", self.noise_a, 0.0, 1.0)?;
        check_range("p", self.noise_p, 0.0, 1.0)
    }

    /// Evenly spaced w in [0, 1]; a single point sits at w = 1.
    pub fn w_grid(&self) -> Vec<f64> {
        match self.w_points {
            1 => vec![1.0],
            n => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
        }
    }
}

/// One CSV row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub w: f64,
    pub fidelity: f64,
    pub measured: ResourceReport,
    pub theory: ResourceReport,
}

pub const CSV_HEADER: &str = "w,F,C,D,E,S,N,C_th,D_th,E_th,S_th,N_th";

/// Prepared state for `spec`, followed by the composite damping on qubit a.
pub fn noisy_prepared_state(spec: &BdsSpec, a: f64, p: f64) -> Result<DensityMatrix> {
    let ideal = prepared_state(spec)?;
    if a == 0.0 && p == 0.0 {
        return Ok(ideal);
    }
    apply_channel(&composite_damping(a, p)?, &ideal, 0)
}

/// State the measures are evaluated on.
pub fn analysed_state(rec: &Reconstruction, project_physical: bool) -> Result<DensityMatrix> {
    if project_physical || !rec.projected {
        Ok(rec.state.clone())
    } else {
        DensityMatrix::new_unchecked(2, rec.raw.clone())
    }
}

/// Runs one sweep point: prepare, damp, tomograph, reconstruct, measure.
pub fn sweep_point(config: &SweepConfig, index: usize, w: f64) -> Result<SweepRow> {
    let spec = config.family.spec_at(w)?;
    let target = bds_from_spec(&spec)?;
    let state = noisy_prepared_state(&spec, config.noise_a, config.noise_p)?;
    let rec = tomograph(&state, config.shots, derive_seed(config.seed, index as u64))?;
    let estimate = analysed_state(&rec, config.project_physical)?;
    Ok(SweepRow {
        w,
        fidelity: fidelity(&estimate, &target)?,
        measured: full_report(&estimate)?,
        theory: full_report(&target)?,
    })
}

pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let grid = config.w_grid();
    grid.par_iter()
        .enumerate()
        .map(|(i, &w)| sweep_point(config, i, w))
        .collect()
}

/// Fixed six-decimal rendering with negative zero folded to zero.
fn fmt6(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let m = &r.measured;
        let t = &r.theory;
        let cells = [
            r.w,
            r.fidelity,
            m.nonlocal_coherence,
            m.discord,
            m.negativity,
            m.steering,
            m.nonlocality,
            t.nonlocal_coherence,
            t.discord,
            t.negativity,
            t.steering,
            t.nonlocality,
        ];
        let line: Vec<String> = cells.iter().map(|&x| fmt6(x)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

fn parse_floats<const N: usize>(text: &str, what: &str) -> Result<[f64; N]> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(Error::InvalidProbabilities(format!(
            "{what} needs {N} comma-separated numbers, got {text:?}"
        )));
    }
    let mut out = [0.0; N];
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot = part.parse().map_err(|_| {
            Error::InvalidProbabilities(format!("{what}: {part:?} is not a number"))
        })?;
    }
    Ok(out)
}

fn parse_spec(text: &str) -> Result<BdsSpec> {
    BdsSpec::from_array(parse_floats::<4>(text, "--p")?)
}

fn parse_noise(text: Option<&str>) -> Result<(f64, f64)> {
    match text {
        None => Ok((0.0, 0.0)),
        Some(t) => {
            let [a, p] = parse_floats::<2>(t, "--noise")?;
            check_range("a", a, 0.0, 1.0)?;
            check_range("p", p, 0.0, 1.0)?;
            Ok((a, p))
        }
    }
}

fn parse_bases(text: &str) -> Result<[Pauli; 2]> {
    let letters: Vec<char> = text.trim().chars().collect();
    let parse = |c: char| {
        Pauli::from_letter(c.to_ascii_uppercase())
            .ok_or_else(|| Error::InvalidLayout(format!("unknown Pauli basis {c:?} in {text:?}")))
    };
    match letters.as_slice() {
        &[a, b] => Ok([parse(a)?, parse(b)?]),
        _ => Err(Error::InvalidLayout(format!(
            "--measure takes two basis letters, got {text:?}"
        ))),
    }
}

fn target_spec(werner: Option<f64>, p: Option<&str>) -> Result<Option<BdsSpec>> {
    match (werner, p) {
        (Some(w), _) => BdsSpec::werner(w).map(Some),
        (None, Some(p)) => parse_spec(p).map(Some),
        (None, None) => Ok(None),
    }
}

fn emit(text: &str, out_path: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match out_path {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json value serializes");
    s.push('\n');
    s
}

fn cmd_prepare(args: &PrepareArgs, stdout: &mut dyn Write) -> Result<()> {
    let spec = target_spec(args.target.werner, args.target.p.as_deref())?
        .expect("clap requires one target");
    let angles = angles_from_spec(&spec);
    let tunable = tunable_angles(&spec);
    let circ = tunable_bds_circuit(&spec)?;
    let state = prepared_state(&spec)?;
    let mut doc = json!({
        "spec": spec.as_array(),
        "theta": angles.theta,
        "alpha": angles.alpha,
        "alpha_given_a": [tunable.alpha_given_a0, tunable.alpha_given_a1],
        "circuit": circ.to_json(),
        "state": state.to_json(),
        "fidelity": fidelity(&state, &bds_from_spec(&spec)?)?,
    });
    if args.qasm {
        let layout: Layout = args.layout.parse()?;
        let [bc, bd] = parse_bases(&args.measure)?;
        let text = to_qasm(&circ, &layout, &[(QUBIT_C, bc), (QUBIT_D, bd)])?;
        doc["qasm"] = json!(text);
    }
    emit(&pretty(&doc), args.out.as_deref(), stdout)
}

fn cmd_sweep(args: &SweepArgs, stdout: &mut dyn Write) -> Result<()> {
    let (noise_a, noise_p) = parse_noise(args.noise.as_deref())?;
    let family = match &args.p {
        Some(p) => SweepFamily::CustomSpec(parse_spec(p)?),
        None => SweepFamily::Werner,
    };
    let config = SweepConfig {
        family,
        w_points: args.points,
        shots: args.shots,
        seed: args.seed,
        noise_a,
        noise_p,
        project_physical: !args.no_project,
    };
    let rows = run_sweep(&config)?;
    emit(&sweep_csv(&rows), args.out.as_deref(), stdout)
}

fn cmd_sample(args: &SampleArgs, stdout: &mut dyn Write) -> Result<()> {
    let spec = target_spec(args.target.werner, args.target.p.as_deref())?
        .expect("clap requires one target");
    let (a, p) = parse_noise(args.noise.as_deref())?;
    let state = noisy_prepared_state(&spec, a, p)?;
    let mut text = sample_counts(&state, args.shots, args.seed)?.to_json_string();
    text.push('\n');
    emit(&text, args.out.as_deref(), stdout)
}

fn cmd_tomograph(args: &TomographArgs, stdout: &mut dyn Write) -> Result<()> {
    let target = target_spec(args.target.werner, args.target.p.as_deref())?;
    let text = std::fs::read_to_string(&args.counts)?;
    let counts = TomographyCounts::from_json_str(&text)?;
    let rec = reconstruct(&crate::tomography::estimate_correlations(&counts))?;
    let state = analysed_state(&rec, !args.no_project)?;
    let raw = DensityMatrix::new_unchecked(2, rec.raw.clone())?;
    let mut doc = json!({
        "shots": counts.shots_per_setting(),
        "projected": rec.projected,
        "state": state.to_json(),
        "raw": raw.to_json(),
        "report": full_report(&state)?,
    });
    if let Some(spec) = target {
        doc["fidelity"] = json!(fidelity(&state, &bds_from_spec(&spec)?)?);
    }
    emit(&pretty(&doc), args.out.as_deref(), stdout)
}

fn cmd_measure(args: &MeasureArgs, stdout: &mut dyn Write) -> Result<()> {
    let text = std::fs::read_to_string(&args.state)?;
    let state = DensityMatrix::from_json_str(&text)?;
    if state.n_qubits() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "measures need a two-qubit state, got {} qubits",
            state.n_qubits()
        )));
    }
    let eig = hermitian_eigenvalues(state.matrix())?;
    let doc = json!({
        "diagnostics": {
            "trace": state.matrix().trace().re,
            "hermiticity_error": state.matrix().hermiticity_error(),
            "min_eigenvalue": eig[0],
            "eigenvalues": eig,
        },
        "report": full_report(&state)?,
    });
    emit(&pretty(&doc), args.out.as_deref(), stdout)
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code: 0 success, 2 invalid input, 3 I/O failure.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let result = match &cli.command {
        Command::Prepare(a) => cmd_prepare(a, stdout),
        Command::Sweep(a) => cmd_sweep(a, stdout),
        Command::Sample(a) => cmd_sample(a, stdout),
        Command::Tomograph(a) => cmd_tomograph(a, stdout),
        Command::Measure(a) => cmd_measure(a, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
