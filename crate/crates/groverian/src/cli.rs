//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on invalid input (bad flags, malformed or
//! mismatched state files), 2 when an optimizer finished without meeting
//! its tolerance; results are still printed in that case, flagged as not
//! converged.

use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::circuits::{purified_search_optimal, track_groverian};
use crate::error::{Error, Result};
use crate::grover::{grover_run, optimal_iterations, predicted_success, uniform_state, Oracle};
use crate::io::{
    read_state_file, render_density, render_pure, sig12, write_density_file,
    write_pure_state_file, write_track_csv, StateFile,
};
use crate::mixed_measure::{groverian_mixed, ppt_check, werner_state, MixedConfig};
use crate::pure_measure::{p_max_pure, PureConfig};
use crate::purify::canonical_purification;

#[derive(Parser)]
#[command(
    name = "groverian",
    about = "Groverian entanglement measure via simulated Grover search",
    disable_version_flag = true
)]
struct Cli {
    /// Seed for every pseudo-random choice (ChaCha8 streams).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for parallel restarts; defaults to machine parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate Grover search.
    #[command(subcommand)]
    Grover(GroverCommand),
    /// Compute the entanglement measure.
    #[command(subcommand)]
    Measure(MeasureCommand),
    /// Emit the canonical purification of a density matrix.
    Purify(PurifyArgs),
    /// Cross-check the measure against simulated circuits.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Track G along Grover iterations, writing CSV.
    Track(TrackArgs),
    /// Emit a two-qubit Werner state file.
    Werner(WernerArgs),
    /// Peres-Horodecki separability check for two qubits.
    Ppt(PptArgs),
}

#[derive(Subcommand)]
enum GroverCommand {
    /// Run the search from the uniform state and report success.
    Run(GroverRunArgs),
}

#[derive(Args)]
struct GroverRunArgs {
    /// Number of qubits.
    #[arg(long)]
    n: usize,
    /// Marked basis-state indices, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    marked: Vec<usize>,
    /// Iteration count; defaults to the optimal one.
    #[arg(long)]
    iterations: Option<usize>,
    /// Initial pure state file; defaults to the uniform superposition.
    #[arg(long)]
    initial: Option<PathBuf>,
}

#[derive(Subcommand)]
enum MeasureCommand {
    /// G for a pure state file.
    Pure(MeasurePureArgs),
    /// G for a density (or pure) state file via separable-fidelity ascent.
    Mixed(MeasureMixedArgs),
}

#[derive(Args)]
struct MeasurePureArgs {
    /// Pure state file.
    #[arg(long)]
    state: PathBuf,
    /// Random restarts of the ascent.
    #[arg(long)]
    restarts: Option<usize>,
    /// Convergence tolerance on the objective.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct MeasureMixedArgs {
    /// State file; a pure state is measured as its density matrix.
    #[arg(long)]
    state: PathBuf,
    /// Separable ensemble size; defaults to min(4^n, 32).
    #[arg(long)]
    terms: Option<usize>,
    /// Random restarts of the ascent.
    #[arg(long)]
    restarts: Option<usize>,
}

#[derive(Args)]
struct PurifyArgs {
    /// Density state file.
    #[arg(long)]
    state: PathBuf,
    /// Destination for the 2n-qubit pure state file; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Purified-search consistency: maximal overlap vs simulated success
    /// vs the mixed measure.
    Fig2(VerifyFig2Args),
}

#[derive(Args)]
struct VerifyFig2Args {
    /// Density state file, at most 3 qubits.
    #[arg(long)]
    state: PathBuf,
}

#[derive(Args)]
struct TrackArgs {
    /// Number of qubits.
    #[arg(long)]
    n: usize,
    /// Marked basis-state index.
    #[arg(long)]
    marked: usize,
    /// Last recorded iteration; defaults to twice the optimal count.
    #[arg(long)]
    max_iter: Option<usize>,
    /// CSV destination.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct WernerArgs {
    /// Mixing parameter in [0, 1].
    #[arg(long)]
    p: f64,
    /// Destination file; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PptArgs {
    /// Two-qubit density state file.
    #[arg(long)]
    state: PathBuf,
}

/// Parses `argv` (including the program name) and runs the subcommand,
/// writing all output to `out`. Returns the process exit code.
pub fn dispatch_io<W: Write>(argv: &[String], out: &mut W) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = write!(out, "{e}");
            return code;
        }
    };
    if let Some(t) = cli.threads {
        // The global pool can only be configured once per process; later
        // invocations in the same process keep the first configuration.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    match run(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            1
        }
    }
}

/// `dispatch_io` over stdout.
pub fn dispatch(argv: &[String]) -> i32 {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let code = dispatch_io(argv, &mut lock);
    let _ = lock.flush();
    code
}

fn run<W: Write>(cli: &Cli, out: &mut W) -> Result<i32> {
    match &cli.command {
        Command::Grover(GroverCommand::Run(a)) => grover_run_cmd(cli, a, out),
        Command::Measure(MeasureCommand::Pure(a)) => measure_pure_cmd(cli, a, out),
        Command::Measure(MeasureCommand::Mixed(a)) => measure_mixed_cmd(cli, a, out),
        Command::Purify(a) => purify_cmd(cli, a, out),
        Command::Verify(VerifyCommand::Fig2(a)) => verify_fig2_cmd(cli, a, out),
        Command::Track(a) => track_cmd(cli, a, out),
        Command::Werner(a) => werner_cmd(cli, a, out),
        Command::Ppt(a) => ppt_cmd(cli, a, out),
    }
}

fn emit<W: Write, T: Serialize>(cli: &Cli, out: &mut W, payload: &T, text: &str) -> Result<i32> {
    if cli.json {
        let doc = serde_json::to_string_pretty(payload).expect("serializable payload");
        writeln!(out, "{doc}").map_err(stream_err)?;
    } else {
        write!(out, "{text}").map_err(stream_err)?;
    }
    Ok(0)
}

fn stream_err(source: std::io::Error) -> Error {
    Error::Io {
        path: "<output>".to_string(),
        source,
    }
}

#[derive(Serialize)]
struct GroverRunReport {
    n: usize,
    marked: Vec<usize>,
    iterations: usize,
    success: f64,
    /// |<eta|psi>|^2 for the initial state; the leading-order success.
    predicted_success: f64,
}

fn grover_run_cmd<W: Write>(cli: &Cli, a: &GroverRunArgs, out: &mut W) -> Result<i32> {
    let oracle = Oracle::new(a.n, a.marked.clone())?;
    let initial = match &a.initial {
        Some(path) => {
            let StateFile::Pure(psi) = read_state_file(path)? else {
                return Err(Error::BadStateFile {
                    path: path.display().to_string(),
                    message: "holds a density matrix; `--initial` needs a pure state".to_string(),
                });
            };
            psi
        }
        None => uniform_state(a.n)?,
    };
    let iterations = match a.iterations {
        Some(k) => k,
        None => optimal_iterations(a.n, oracle.num_marked())?,
    };
    let run = grover_run(&initial, &oracle, iterations)?;
    let report = GroverRunReport {
        n: a.n,
        marked: a.marked.clone(),
        iterations,
        success: run.success,
        predicted_success: predicted_success(&initial),
    };
    let marked_text = report
        .marked
        .iter()
        .map(|m| m.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let text = format!(
        "n                 = {}\nmarked            = {}\niterations        = {}\nsuccess           = {}\npredicted_success = {}\n",
        report.n,
        marked_text,
        report.iterations,
        sig12(report.success),
        sig12(report.predicted_success)
    );
    emit(cli, out, &report, &text)
}

#[derive(Serialize)]
struct MeasureReport {
    p_max: f64,
    g: f64,
    restarts: usize,
    converged: bool,
}

fn exit_for(converged: bool) -> i32 {
    if converged {
        0
    } else {
        2
    }
}

fn measure_text(r: &MeasureReport) -> String {
    let mut text = format!(
        "p_max     = {}\nG         = {}\nrestarts  = {}\nconverged = {}\n",
        sig12(r.p_max),
        sig12(r.g),
        r.restarts,
        r.converged
    );
    if !r.converged {
        text.push_str("warning: optimizer did not meet its tolerance\n");
    }
    text
}

#[derive(Serialize)]
struct AnglesReport {
    theta: f64,
    phi: f64,
}

#[derive(Serialize)]
struct PureMeasureReport {
    p_max: f64,
    g: f64,
    restarts: usize,
    converged: bool,
    /// Bloch angles of the closest product state, one entry per qubit.
    best_angles: Vec<AnglesReport>,
}

fn measure_pure_cmd<W: Write>(cli: &Cli, a: &MeasurePureArgs, out: &mut W) -> Result<i32> {
    let StateFile::Pure(psi) = read_state_file(&a.state)? else {
        return Err(Error::BadStateFile {
            path: a.state.display().to_string(),
            message: "holds a density matrix; `measure pure` needs a pure state".to_string(),
        });
    };
    let mut config = PureConfig {
        seed: cli.seed,
        ..PureConfig::default()
    };
    if let Some(r) = a.restarts {
        config.restarts = r;
    }
    if let Some(t) = a.tol {
        config.tol = t;
    }
    let r = p_max_pure(&psi, &config)?;
    let report = PureMeasureReport {
        p_max: r.p_max,
        g: r.g,
        restarts: r.restarts,
        converged: r.converged,
        best_angles: r
            .best
            .angles()
            .iter()
            .map(|q| AnglesReport {
                theta: q.theta,
                phi: q.phi,
            })
            .collect(),
    };
    let mut text = format!(
        "p_max     = {}\nG         = {}\nrestarts  = {}\nconverged = {}\n",
        sig12(report.p_max),
        sig12(report.g),
        report.restarts,
        report.converged
    );
    for (k, q) in report.best_angles.iter().enumerate() {
        text.push_str(&format!(
            "qubit {}   : theta = {}, phi = {}\n",
            k + 1,
            sig12(q.theta),
            sig12(q.phi)
        ));
    }
    if !report.converged {
        text.push_str("warning: optimizer did not meet its tolerance\n");
    }
    emit(cli, out, &report, &text)?;
    Ok(exit_for(report.converged))
}

fn measure_mixed_cmd<W: Write>(cli: &Cli, a: &MeasureMixedArgs, out: &mut W) -> Result<i32> {
    let rho = read_state_file(&a.state)?.density();
    let mut config = MixedConfig {
        seed: cli.seed,
        ..MixedConfig::default()
    };
    config.terms = a.terms.or(config.terms);
    if let Some(r) = a.restarts {
        config.restarts = r;
    }
    let r = groverian_mixed(&rho, &config)?;
    let report = MeasureReport {
        p_max: r.p_max,
        g: r.g,
        restarts: r.restarts,
        converged: r.converged,
    };
    let text = measure_text(&report);
    emit(cli, out, &report, &text)?;
    Ok(exit_for(report.converged))
}

#[derive(Serialize)]
struct WrittenReport {
    written: String,
    num_qubits: usize,
}

fn purify_cmd<W: Write>(cli: &Cli, a: &PurifyArgs, out: &mut W) -> Result<i32> {
    let rho = read_state_file(&a.state)?.density();
    let p = canonical_purification(&rho)?;
    match &a.out {
        Some(path) => {
            write_pure_state_file(path, p.state())?;
            let report = WrittenReport {
                written: path.display().to_string(),
                num_qubits: p.state().num_qubits(),
            };
            let text = format!("wrote {} ({} qubits)\n", report.written, report.num_qubits);
            emit(cli, out, &report, &text)
        }
        None => {
            writeln!(out, "{}", render_pure(p.state())).map_err(stream_err)?;
            Ok(0)
        }
    }
}

#[derive(Serialize)]
struct VerifyFig2Report {
    /// Maximal purified-search success: the Uhlmann-aligned overlap.
    max_success: f64,
    /// One simulated run with the aligned purification pair.
    simulated: f64,
    /// |simulated - max_success|, bounded by the calibrated O(1/N) term.
    search_gap: f64,
    g: f64,
    /// 1 - G^2 from the mixed measure; independent path to max_success.
    one_minus_g_sq: f64,
    measure_gap: f64,
    converged: bool,
}

fn verify_fig2_cmd<W: Write>(cli: &Cli, a: &VerifyFig2Args, out: &mut W) -> Result<i32> {
    let rho = read_state_file(&a.state)?.density();
    let config = MixedConfig {
        seed: cli.seed,
        ..MixedConfig::default()
    };
    let search = purified_search_optimal(&rho, &config)?;
    let measure = groverian_mixed(&rho, &config)?;
    let one_minus_g_sq = 1.0 - measure.g * measure.g;
    let report = VerifyFig2Report {
        max_success: search.overlap_sq,
        simulated: search.success,
        search_gap: (search.success - search.overlap_sq).abs(),
        g: measure.g,
        one_minus_g_sq,
        measure_gap: (search.overlap_sq - one_minus_g_sq).abs(),
        converged: measure.converged,
    };
    let mut text = format!
        (
        "max success    = {}\nsimulated      = {}\nsearch gap     = {}\nG              = {}\n1 - G^2        = {}\nmeasure gap    = {}\n",
        sig12(report.max_success),
        sig12(report.simulated),
        sig12(report.search_gap),
        sig12(report.g),
        sig12(report.one_minus_g_sq),
        sig12(report.measure_gap),
    );
    if !report.converged {
        text.push_str("warning: optimizer did not meet its tolerance\n");
    }
    emit(cli, out, &report, &text)?;
    Ok(exit_for(report.converged))
}

#[derive(Serialize)]
struct TrackReport {
    n: usize,
    marked: usize,
    rows: usize,
    csv: String,
    max_groverian: f64,
    final_success: f64,
}

fn track_cmd<W: Write>(cli: &Cli, a: &TrackArgs, out: &mut W) -> Result<i32> {
    let max_iter = match a.max_iter {
        Some(k) => k,
        None => 2 * optimal_iterations(a.n, 1)?,
    };
    let records = track_groverian(a.n, a.marked, &uniform_state(a.n)?, max_iter)?;
    write_track_csv(&a.out, &records)?;
    let report = TrackReport {
        n: a.n,
        marked: a.marked,
        rows: records.len(),
        csv: a.out.display().to_string(),
        max_groverian: records.iter().map(|r| r.groverian).fold(0.0, f64::max),
        final_success: records.last().expect("at least t = 0").success_probability,
    };
    let text = format!(
        "wrote {} ({} rows)\nmax G         = {}\nfinal success = {}\n",
        report.csv,
        report.rows,
        sig12(report.max_groverian),
        sig12(report.final_success)
    );
    emit(cli, out, &report, &text)
}

fn werner_cmd<W: Write>(cli: &Cli, a: &WernerArgs, out: &mut W) -> Result<i32> {
    let rho = werner_state(a.p)?;
    match &a.out {
        Some(path) => {
            write_density_file(path, &rho)?;
            let report = WrittenReport {
                written: path.display().to_string(),
                num_qubits: rho.num_qubits(),
            };
            let text = format!("wrote {} ({} qubits)\n", report.written, report.num_qubits);
            emit(cli, out, &report, &text)
        }
        None => {
            writeln!(out, "{}", render_density(&rho)).map_err(stream_err)?;
            Ok(0)
        }
    }
}

#[derive(Serialize)]
struct PptReportOut {
    is_ppt: bool,
    min_eigenvalue: f64,
    separable: bool,
}

fn ppt_cmd<W: Write>(cli: &Cli, a: &PptArgs, out: &mut W) -> Result<i32> {
    let rho = read_state_file(&a.state)?.density();
    let r = ppt_check(&rho)?;
    let report = PptReportOut {
        is_ppt: r.is_ppt,
        min_eigenvalue: r.min_eigenvalue,
        // At two qubits the PPT condition is exactly separability.
        separable: r.is_ppt,
    };
    let text = format!(
        "ppt            = {}\nmin eigenvalue = {}\nseparable      = {}\n",
        report.is_ppt,
        sig12(report.min_eigenvalue),
        report.separable
    );
    emit(cli, out, &report, &text)
}
