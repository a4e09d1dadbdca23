//! Command-line dispatch.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use ringwalk_core::dynamics::{
    adiabatic_run, adiabatic_runtime, amplitude_trace, build_line, gap_scan, min_steps, peak_scan, AdiabaticFamily,
    CouplingForm, LineVariant, MIN_PEAK_SAMPLES,
};
use ringwalk_core::hamspace::{
    build_hinit, build_restricted, check_effective_equivalence, CountMethod, GroundCount, EQUIVALENCE_TOL,
    MAX_EXHAUSTIVE_SITES,
};
use ringwalk_core::ring::DataLabel;
use ringwalk_core::rules::{enumerate_trajectory, enumerate_trajectory_with, DEFAULT_STEP_CAP};
use ringwalk_core::vprog::{compile, VProgram};
use ringwalk_core::Error;

use crate::formats::{
    amplitude_csv, fmt_num, gap_csv, parse_circuit, parse_dump, parse_program, write_dump, write_program, write_sparse,
    DumpRecord,
};
use crate::manifest::{manifest_path, RunManifest};
use crate::scan::{parallel_exhaustive, thread_count};
use crate::suite::{appendix_circuit, appendix_labels, APPENDIX_TRACE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Gap-scan grid used by `adiabatic`.
pub const DEFAULT_GAP_GRID: usize = 101;

#[derive(Debug, Parser)]
#[command(name = "ringwalk", version, about = "Programmable ring Hamiltonian toolkit")]
struct Cli {
    /// Write the run manifest here instead of next to the output.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compile a {H, CS} circuit into a ring program.
    Compile {
        circuit: PathBuf,
        #[arg(short)]
        o: PathBuf,
    },
    /// Enumerate the classical trajectory of a program.
    Trace {
        program: PathBuf,
        /// Data labels, one character per qubit.
        #[arg(long)]
        labels: Option<String>,
        #[arg(short)]
        o: PathBuf,
    },
    /// Start-to-stop amplitude of a walk on the effective line.
    Walk(WalkArgs),
    /// Gap scan and adiabatic preparation of the history state.
    Adiabatic(AdiabaticArgs),
    /// Compare the worked three-qubit example against its golden trace.
    VerifyAppendix {
        /// Alternative golden trace.
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
    /// Check the restricted Hamiltonian against the effective line.
    Equiv {
        program: PathBuf,
        /// Also write the restricted Hamiltonian as sparse triples.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Build the initial-state penalty Hamiltonian and count its kernel.
    Hinit {
        program: PathBuf,
        /// Count zero-penalty configurations.
        #[arg(long)]
        scan: bool,
        /// Data input bits, qubit 0 first.
        #[arg(long)]
        input: Option<String>,
    },
}

#[derive(Debug, Args)]
struct WalkArgs {
    /// Program whose trajectory length sets the line.
    program: Option<PathBuf>,
    /// Line length without a program.
    #[arg(long, conflicts_with = "program")]
    tbar: Option<usize>,
    /// start-stop, dummy-padding:M, runway-landing:M, perfect-transfer or
    /// perfect-transfer-literal.
    #[arg(long, value_parser = parse_variant)]
    variant: LineVariant,
    #[arg(long)]
    tmax: f64,
    /// Time samples; defaults to max(20 Tbar, 100).
    #[arg(long)]
    samples: Option<usize>,
    #[arg(short)]
    o: PathBuf,
}

#[derive(Debug, Args)]
struct AdiabaticArgs {
    #[arg(long)]
    tbar: usize,
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    eps: f64,
    /// Constant in front of the runtime bound.
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    /// Multiple of the runtime bound to evolve for.
    #[arg(long, default_value_t = 1.0)]
    time_factor: f64,
    #[arg(long, default_value_t = DEFAULT_GAP_GRID)]
    grid: usize,
    #[arg(short)]
    o: PathBuf,
}

pub fn parse_variant(s: &str) -> Result<LineVariant, String> {
    let size = |m: &str| m.parse::<usize>().map_err(|_| format!("bad padding length {m:?}"));
    match s.split_once(':') {
        None if s == "start-stop" => Ok(LineVariant::StartStop),
        None if s == "perfect-transfer" => Ok(LineVariant::PerfectTransfer(CouplingForm::Standard)),
        None if s == "perfect-transfer-literal" => Ok(LineVariant::PerfectTransfer(CouplingForm::Literal)),
        Some(("dummy-padding", m)) => Ok(LineVariant::DummyPadding(size(m)?)),
        Some(("runway-landing", m)) => Ok(LineVariant::RunwayLanding(size(m)?)),
        _ => Err(format!("unknown walk variant {s:?}")),
    }
}

/// Why a command stopped early.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Integrity { .. } | Error::Runaway { .. } | Error::NoStop { .. } | Error::Equivalence { .. } => {
                Failure::Verification(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<Report, Failure>;

/// Text for standard output plus the exit code it earns.
struct Report {
    text: String,
    code: i32,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { text, code: EXIT_OK }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn in_file(path: &Path, e: Error) -> Failure {
    match Failure::from(e) {
        Failure::Usage(m) => Failure::Usage(format!("{}: {m}", path.display())),
        v => v,
    }
}

fn load_program(path: &Path) -> Result<VProgram, Failure> {
    parse_program(&read(path)?).map_err(|e| in_file(path, e))
}

/// Runs `argv` (without the program name), writing to the given streams.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(std::iter::once("ringwalk".to_string()).chain(argv.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let mut manifest = None;
    let result = execute(&cli.command, &mut manifest, err);
    let code = match result {
        Ok(r) => {
            let _ = out.write_all(r.text.as_bytes());
            r.code
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Verification(m)) => {
            let _ = writeln!(err, "verification failed: {m}");
            EXIT_VERIFY
        }
    };
    if let Some(m) = manifest {
        let path = cli
            .manifest
            .clone()
            .or_else(|| m.outputs.first().map(|o| manifest_path(Path::new(o))));
        if let Some(p) = path {
            if let Err(Failure::Usage(msg)) = write(&p, &m.to_json()) {
                let _ = writeln!(err, "error: {msg}");
                return EXIT_USAGE;
            }
        }
    }
    code
}

/// Runs the process arguments against the real standard streams.
pub fn dispatch(argv: &[String]) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(argv, &mut stdout.lock(), &mut stderr.lock())
}

fn execute(cmd: &Command, manifest: &mut Option<RunManifest>, err: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Compile { circuit, o } => {
            let c = parse_circuit(&read(circuit)?).map_err(|e| in_file(circuit, e))?;
            let p = compile(&c)?;
            write(o, &write_program(&p))?;
            *manifest = Some(RunManifest::new("compile").input(circuit).output(o));
            Ok(Report::ok(format!(
                "compiled {} gates on {} qubits into {} iterations\n",
                c.len(),
                c.qubits(),
                p.iterations
            )))
        }
        Command::Trace { program, labels, o } => {
            let p = load_program(program)?;
            let labels = match labels {
                Some(s) => DataLabel::parse_list(s)?,
                None => DataLabel::defaults(p.n)?,
            };
            let t = enumerate_trajectory_with(&p, &labels, DEFAULT_STEP_CAP)?;
            write(o, &write_dump(&DumpRecord::from_trajectory(&t)))?;
            let mut m = RunManifest::new("trace").input(program).output(o);
            if let Some(l) = labels_param(&labels, p.n) {
                m = m.param("labels", l);
            }
            *manifest = Some(m);
            Ok(Report::ok(format!(
                "tbar {}, {} gate events\n",
                t.tbar(),
                t.gate_events().count()
            )))
        }
        Command::Walk(a) => walk(a, manifest, err),
        Command::Adiabatic(a) => adiabatic(a, manifest),
        Command::VerifyAppendix { fixture } => {
            let mut m = RunManifest::new("verify-appendix");
            if let Some(f) = fixture {
                m = m.param("fixture", f.display());
            }
            *manifest = Some(m);
            verify_appendix(fixture.as_deref())
        }
        Command::Equiv { program, export } => {
            let p = load_program(program)?;
            let rep = check_effective_equivalence(&p)?;
            let mut m = RunManifest::new("equiv").input(program);
            if let Some(x) = export {
                write(x, &write_sparse(&build_restricted(&p)?))?;
                m = m.param("export", x.display()).output(x);
            }
            *manifest = Some(m);
            let text = format!(
                "tbar {}, {} configurations, {} blocks, max deviation {}\n",
                rep.tbar,
                rep.configurations,
                rep.blocks_checked,
                fmt_num(rep.max_deviation)
            );
            if rep.max_deviation > EQUIVALENCE_TOL {
                return Err(Failure::Verification(format!(
                    "{}deviation exceeds {} at block {:?}",
                    text,
                    fmt_num(EQUIVALENCE_TOL),
                    rep.worst_block
                )));
            }
            Ok(Report::ok(text))
        }
        Command::Hinit { program, scan, input } => hinit(program, *scan, input.as_deref(), manifest),
    }
}

/// `None` when the labels are the defaults.
fn labels_param(labels: &[DataLabel], n: usize) -> Option<String> {
    let defaults = DataLabel::defaults(n).ok()?;
    (labels != defaults.as_slice()).then(|| labels.iter().map(|l| l.as_char()).collect())
}

fn walk(a: &WalkArgs, manifest: &mut Option<RunManifest>, err: &mut dyn Write) -> Outcome {
    let mut m = RunManifest::new("walk");
    let tbar = match (&a.program, a.tbar) {
        (Some(p), None) => {
            m = m.input(p);
            enumerate_trajectory(&load_program(p)?)?.tbar()
        }
        (None, Some(t)) => {
            m = m.param("tbar", t);
            t
        }
        _ => return Err(Failure::Usage("walk needs a program or --tbar".into())),
    };
    let line = build_line(tbar, a.variant)?;
    for w in &line.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    let samples = a.samples.unwrap_or((20 * tbar).max(MIN_PEAK_SAMPLES));
    let rows = amplitude_trace(&line, a.tmax, samples)?;
    write(&a.o, &amplitude_csv(&rows))?;
    m = m.param("variant", a.variant).param("tmax", fmt_num(a.tmax));
    if let Some(s) = a.samples {
        m = m.param("samples", s);
    }
    *manifest = Some(m.output(&a.o));
    let mut text = format!("tbar {tbar}, variant {}\n", a.variant);
    if a.tmax > 0.0 {
        let peak = peak_scan(&line, a.tmax, samples.max(MIN_PEAK_SAMPLES))?;
        writeln!(text, "peak t {} abs_amp {}", fmt_num(peak.time), fmt_num(peak.abs_amp)).expect("String write");
    }
    if !line.warnings.is_empty() {
        let best = rows.iter().map(|r| r.1.norm()).fold(0.0, f64::max);
        writeln!(text, "transfer deficit {}", fmt_num(1.0 - best)).expect("String write");
    }
    Ok(Report::ok(text))
}

fn adiabatic(a: &AdiabaticArgs, manifest: &mut Option<RunManifest>) -> Outcome {
    if !a.time_factor.is_finite() || a.time_factor <= 0.0 {
        return Err(Failure::Usage(format!(
            "time factor must be positive, got {}",
            a.time_factor
        )));
    }
    let fam = AdiabaticFamily::new(a.tbar, a.delta, a.eps)?.with_omega(a.omega);
    let gaps = gap_scan(&fam, a.grid)?;
    write(&a.o, &gap_csv(&gaps))?;
    let runtime = adiabatic_runtime(&fam, gaps.min_gap)?;
    let total = runtime * a.time_factor;
    let steps = min_steps(&fam, total)?;
    let run = adiabatic_run(&fam, total, steps)?;
    let target = 1.0 - a.eps;
    let pass = gaps.pass && run.fidelity >= target;
    let summary = format!(
        "tbar {}\ndelta {}\nepsilon {}\nomega {}\nmin_gap {}\ngap_bound {}\nruntime_bound {}\ntotal_time {}\nsteps {}\nfidelity {}\ntarget_fidelity {}\npass {}\n",
        a.tbar,
        fmt_num(a.delta),
        fmt_num(a.eps),
        fmt_num(a.omega),
        fmt_num(gaps.min_gap),
        fmt_num(gaps.bound),
        fmt_num(runtime),
        fmt_num(total),
        steps,
        fmt_num(run.fidelity),
        fmt_num(target),
        pass
    );
    let summary_path = summary_path(&a.o);
    write(&summary_path, &summary)?;
    let mut m = RunManifest::new("adiabatic")
        .param("tbar", a.tbar)
        .param("delta", fmt_num(a.delta))
        .param("eps", fmt_num(a.eps))
        .param("omega", fmt_num(a.omega))
        .param("time-factor", fmt_num(a.time_factor))
        .param("grid", a.grid);
    m = m.output(&a.o).output(&summary_path);
    *manifest = Some(m);
    if pass {
        Ok(Report::ok(summary))
    } else {
        Err(Failure::Verification(summary))
    }
}

/// `<output>.summary`.
pub fn summary_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".summary");
    PathBuf::from(s)
}

/// Matching-step count of the worked example against a golden dump.
pub fn appendix_matches(golden: &[DumpRecord]) -> Result<(usize, usize), Error> {
    let p = compile(&appendix_circuit())?;
    let t = enumerate_trajectory_with(&p, &appendix_labels(), DEFAULT_STEP_CAP)?;
    let ours = DumpRecord::from_trajectory(&t);
    let matching = ours.iter().zip(golden).filter(|(a, b)| a == b).count();
    Ok((matching, ours.len().max(golden.len())))
}

fn verify_appendix(fixture: Option<&Path>) -> Outcome {
    let golden = match fixture {
        Some(p) => parse_dump(&read(p)?).map_err(|e| in_file(p, e))?,
        None => parse_dump(APPENDIX_TRACE)?,
    };
    let (matching, total) = appendix_matches(&golden)?;
    let text = format!("{matching}/{total} steps match\n");
    if matching == total {
        Ok(Report::ok(text))
    } else {
        Err(Failure::Verification(text))
    }
}

fn parse_input_bits(s: &str, n: usize) -> Result<usize, Failure> {
    if s.len() != n || !s.chars().all(|c| c == '0' || c == '1') {
        return Err(Failure::Usage(format!("input {s:?} must be {n} binary digits")));
    }
    Ok(usize::from_str_radix(s, 2).expect("validated binary digits"))
}

fn method_name(c: &GroundCount) -> &'static str {
    match c.method {
        CountMethod::Exhaustive => "exhaustive",
        CountMethod::TransferMatrix => "transfer-matrix",
    }
}

fn hinit(program: &Path, scan: bool, input: Option<&str>, manifest: &mut Option<RunManifest>) -> Outcome {
    let p = load_program(program)?;
    let x = match input {
        Some(s) => parse_input_bits(s, p.n)?,
        None => 0,
    };
    let h = build_hinit(&p, x)?;
    let mut m = RunManifest::new("hinit").input(program);
    if let Some(s) = input {
        m = m.param("input", s);
    }
    if scan {
        m = m.param("scan", "");
    }
    *manifest = Some(m);
    let forbidden: usize = h.terms().iter().map(|t| t.forbidden.len()).sum();
    let mut text = format!(
        "sites {}, {} terms, {} penalised pairs\n",
        h.sites(),
        h.terms().len(),
        forbidden
    );
    if !scan {
        return Ok(Report::ok(text));
    }
    let transfer = h.transfer_count()?;
    let primary = if h.sites() <= MAX_EXHAUSTIVE_SITES {
        parallel_exhaustive(&h, thread_count())?
    } else {
        transfer.clone()
    };
    writeln!(text, "kernel dimension {} ({})", primary.count, method_name(&primary)).expect("String write");
    if primary.method == CountMethod::Exhaustive {
        writeln!(text, "transfer-matrix count {}", transfer.count).expect("String write");
    }
    let witness_ok = primary.witness.as_deref() == Some(h.desired());
    if primary.count == 1 && transfer.count == 1 && witness_ok {
        Ok(Report::ok(text))
    } else {
        Err(Failure::Verification(format!(
            "{text}kernel is not the single start configuration"
        )))
    }
}
