//! Command-line front end: argument parsing, dispatch and SVG rendering.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use diagonal_billiard::segments::{circular_order, AnalysisError, Segment};
use diagonal_billiard::sweep::{run_sweep_with, SweepConfig, SweepMode, SweepRecord};
use diagonal_billiard::verify::verify_all;
use diagonal_billiard::wire::{AnalysisDoc, LaunchDoc, OrbitDoc, SegmentDoc};
use diagonal_billiard::{
    simulate, Analysis, Direction, GeometryError, LaunchSense, LaunchSpec, Orbit, Rational, SimError, WeightProfile,
};

mod svg;

pub use svg::render_svg;

/// Process exit codes. Shell scripts may rely on these.
pub mod exit {
    pub const OK: u8 = 0;
    /// A claim failed (`verify`) or a sweep produced a failed record.
    pub const CLAIM_FAILED: u8 = 1;
    pub const CORNER: u8 = 2;
    pub const DUPLICATE: u8 = 3;
    /// The weight families do not have the expected shape.
    pub const STRUCTURE: u8 = 4;
    pub const USAGE: u8 = 64;
    pub const IO: u8 = 74;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: exit::USAGE, message: message.into() }
    }
}

impl From<SimError> for CliError {
    fn from(err: SimError) -> Self {
        let code = match err {
            SimError::CornerHit { .. } => exit::CORNER,
            SimError::DuplicatePoint { .. } => exit::DUPLICATE,
            _ => exit::USAGE,
        };
        CliError { code, message: err.to_string() }
    }
}

impl From<io::Error> for CliError {
    fn from(err: io::Error) -> Self {
        CliError { code: exit::IO, message: err.to_string() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Jsonl,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Random,
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SenseArg {
    Ccw,
    Cw,
    Both,
}

#[derive(Debug, Parser)]
#[command(
    name = "billiard",
    version,
    about = "Exact simulation and verification of the diagonal billiard in a rectangle"
)]
struct Cli {
    #[command(subcommand)]
    command: RawCommand,
}

#[derive(Debug, Subcommand)]
enum RawCommand {
    /// Print the rebound points F(1)..F(n).
    Simulate(LaunchOpts),
    /// Print the circular order, associated families and weight profile.
    Analyze(LaunchOpts),
    /// Check every claim on one orbit; exits 1 if any check fails.
    Verify(LaunchOpts),
    /// Verify many seeded launches; exits 1 if any record fails.
    Sweep(SweepOpts),
    /// Draw the orbit and its elementary segments as SVG.
    Render(LaunchOpts),
}

#[derive(Debug, Args)]
struct LaunchOpts {
    /// Horizontal side of the table, e.g. 3/10 or 0.3. The vertical side is 1/2 - p.
    #[arg(long, value_parser = parse_rational)]
    p: Rational,
    /// Perimeter coordinate of the launch point, in (0, 1).
    #[arg(long, value_parser = parse_rational)]
    s1: Rational,
    /// Initial direction: ne, nw, se or sw.
    #[arg(long, value_parser = parse_direction)]
    dir: Direction,
    /// Number of rebound points.
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Debug, Args)]
struct OutputOpts {
    /// Output file; `-` is standard output.
    #[arg(long, default_value = "-")]
    out: PathBuf,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
struct SweepOpts {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Launches drawn in random mode.
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long, default_value_t = 5)]
    n_min: usize,
    #[arg(long, default_value_t = 200)]
    n_max: usize,
    #[arg(long, default_value_t = 101)]
    den_min: u64,
    #[arg(long, default_value_t = 9973)]
    den_max: u64,
    #[arg(long, value_enum, default_value = "random")]
    mode: ModeArg,
    /// Launch directions to include.
    #[arg(long, value_enum, default_value = "both")]
    sense: SenseArg,
    /// Worker threads; all cores by default. Output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// Write the summary here instead of appending it to the JSONL output.
    #[arg(long)]
    summary: Option<PathBuf>,
    #[command(flatten)]
    output: OutputOpts,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse::<Rational>().map_err(|e| e.to_string())
}

fn parse_direction(s: &str) -> Result<Direction, String> {
    s.parse()
}

/// Where output goes and in which format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    /// `None` for standard output.
    pub path: Option<PathBuf>,
    pub format: Format,
}

impl Output {
    fn new(opts: OutputOpts, default: Format, allowed: &[Format]) -> Result<Self, CliError> {
        let format = opts.format.unwrap_or(default);
        if !allowed.contains(&format) {
            let names: Vec<_> = allowed.iter().map(|f| format!("{f:?}").to_lowercase()).collect();
            return Err(CliError::usage(format!(
                "format {format:?} is not available here (use {})",
                names.join(" or ")
            )));
        }
        let path = (opts.out.as_os_str() != "-").then_some(opts.out);
        Ok(Output { path, format })
    }

    fn open(&self) -> Result<Box<dyn Write>, CliError> {
        Ok(match &self.path {
            Some(path) => Box::new(BufWriter::new(
                File::create(path)
                    .map_err(|e| CliError { code: exit::IO, message: format!("{}: {e}", path.display()) })?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

/// A validated launch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Launch {
    pub spec: LaunchSpec,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Simulate { launch: Launch, output: Output },
    Analyze { launch: Launch, output: Output },
    Verify { launch: Launch, output: Output },
    Sweep { config: SweepConfig, threads: Option<usize>, summary: Option<PathBuf>, output: Output },
    Render { launch: Launch, output: Output },
}

fn launch(opts: &LaunchOpts, min_n: usize) -> Result<Launch, CliError> {
    if opts.n < min_n {
        return Err(CliError::usage(format!("--n must be at least {min_n}, got {}", opts.n)));
    }
    let spec = LaunchSpec::from_parts(opts.p.clone(), opts.s1.clone(), opts.dir).map_err(|e| match e {
        SimError::Geometry(GeometryError::CornerCoordinate(_)) => {
            CliError { code: exit::CORNER, message: e.to_string() }
        }
        other => CliError::usage(other.to_string()),
    })?;
    Ok(Launch { spec, n: opts.n })
}

/// Parses and validates a full argument vector, program name included.
///
/// `--help` and `--version` come back as an error with exit code 0 carrying
/// the text to print.
pub fn parse_args<I, T>(argv: I) -> Result<Command, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| {
        let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
        CliError { code, message: e.render().to_string() }
    })?;
    use Format::*;
    Ok(match cli.command {
        RawCommand::Simulate(o) => {
            let launch = launch(&o, 2)?;
            Command::Simulate { launch, output: Output::new(o.output, Json, &[Json, Csv])? }
        }
        RawCommand::Analyze(o) => {
            let launch = launch(&o, 5)?;
            Command::Analyze { launch, output: Output::new(o.output, Json, &[Json])? }
        }
        RawCommand::Verify(o) => {
            let launch = launch(&o, 5)?;
            Command::Verify { launch, output: Output::new(o.output, Json, &[Json])? }
        }
        RawCommand::Render(o) => {
            let launch = launch(&o, 2)?;
            Command::Render { launch, output: Output::new(o.output, Svg, &[Svg])? }
        }
        RawCommand::Sweep(o) => {
            let directions = match o.sense {
                SenseArg::Ccw => vec![LaunchSense::Ccw],
                SenseArg::Cw => vec![LaunchSense::Cw],
                SenseArg::Both => vec![LaunchSense::Ccw, LaunchSense::Cw],
            };
            let mode = match o.mode {
                ModeArg::Random => SweepMode::Random,
                ModeArg::Exhaustive => SweepMode::ExhaustiveSmall,
            };
            let config = SweepConfig {
                seed: o.seed,
                count: o.count,
                n_range: (o.n_min, o.n_max),
                denominator_range: (o.den_min, o.den_max),
                directions,
                mode,
            };
            config.validate().map_err(|e| CliError::usage(e.to_string()))?;
            if o.threads == Some(0) {
                return Err(CliError::usage("--threads must be positive"));
            }
            Command::Sweep {
                config,
                threads: o.threads,
                summary: o.summary,
                output: Output::new(o.output, Jsonl, &[Jsonl, Csv])?,
            }
        }
    })
}

/// Everything `analyze` prints.
#[derive(Debug, Serialize)]
pub struct AnalyzeDoc {
    pub spec: LaunchDoc,
    /// Point indices in increasing perimeter coordinate.
    pub circular_order: Vec<usize>,
    pub first_family: Vec<SegmentDoc>,
    pub both_family: Vec<SegmentDoc>,
    #[serde(flatten)]
    pub profile: AnalysisDoc,
}

fn write_json(output: &Output, value: &impl Serialize) -> Result<(), CliError> {
    let mut w = output.open()?;
    serde_json::to_writer_pretty(&mut w, value).map_err(io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn structure_error(err: &AnalysisError) -> CliError {
    let code = match err {
        AnalysisError::StructureViolation(_) => exit::STRUCTURE,
        _ => exit::USAGE,
    };
    CliError { code, message: err.to_string() }
}

fn analyze(orbit: &Orbit) -> Result<(Analysis, WeightProfile), CliError> {
    let analysis = Analysis::new(orbit).map_err(|e| structure_error(&e))?;
    let profile = analysis.profile.clone().map_err(|e| structure_error(&e))?;
    Ok((analysis, profile))
}

fn write_points_csv(output: &Output, orbit: &Orbit) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(output.open()?);
    w.write_record(["j", "s", "side", "x", "y"]).map_err(io::Error::from)?;
    for pt in orbit.points() {
        let sp = &pt.side_point;
        w.write_record([
            pt.index.to_string(),
            pt.s.value().to_string(),
            format!("{:?}", sp.side).to_lowercase(),
            sp.x.to_string(),
            sp.y.to_string(),
        ])
        .map_err(io::Error::from)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_row(rec: &SweepRecord) -> Vec<String> {
    let failed: Vec<&str> = rec.report.iter().flat_map(|r| r.failures()).map(|c| c.id.as_str()).collect();
    let enum_str = |v: serde_json::Value| v.as_str().unwrap_or_default().to_string();
    vec![
        rec.index.to_string(),
        rec.spec.p.to_string(),
        rec.spec.q.to_string(),
        rec.spec.s1.to_string(),
        rec.spec.dir.to_string(),
        rec.spec.n.to_string(),
        enum_str(serde_json::to_value(rec.outcome).unwrap_or_default()),
        rec.degeneracy.map(|d| enum_str(serde_json::to_value(d).unwrap_or_default())).unwrap_or_default(),
        failed.join(";"),
    ]
}

enum RecordSink {
    Jsonl(Box<dyn Write>),
    Csv(Box<csv::Writer<Box<dyn Write>>>),
}

impl RecordSink {
    fn write(&mut self, rec: &SweepRecord) -> io::Result<()> {
        match self {
            RecordSink::Jsonl(w) => {
                serde_json::to_writer(&mut *w, rec)?;
                writeln!(w)
            }
            RecordSink::Csv(w) => Ok(w.write_record(csv_row(rec))?),
        }
    }

    fn into_inner(self) -> io::Result<Box<dyn Write>> {
        match self {
            RecordSink::Jsonl(w) => Ok(w),
            RecordSink::Csv(w) => (*w).into_inner().map_err(|e| e.into_error()),
        }
    }
}

fn sweep(
    config: &SweepConfig,
    threads: Option<usize>,
    summary_path: Option<&PathBuf>,
    output: &Output,
) -> Result<u8, CliError> {
    let mut sink = match output.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(output.open()?);
            w.write_record(["index", "p", "q", "s1", "dir", "n", "outcome", "degeneracy", "failed_claims"])
                .map_err(io::Error::from)?;
            RecordSink::Csv(Box::new(w))
        }
        _ => RecordSink::Jsonl(output.open()?),
    };
    let mut write_err: Option<io::Error> = None;
    let summary = run_sweep_with(config, threads, |rec| {
        if write_err.is_none() {
            write_err = sink.write(rec).err();
        }
    })
    .map_err(|e| CliError::usage(e.to_string()))?;
    if let Some(e) = write_err {
        return Err(e.into());
    }
    let mut w = sink.into_inner()?;
    let summary_json = serde_json::to_string(&summary).map_err(io::Error::from)?;
    match (summary_path, output.format) {
        (Some(path), _) => {
            let mut f = File::create(path)
                .map_err(|e| CliError { code: exit::IO, message: format!("{}: {e}", path.display()) })?;
            writeln!(f, "{summary_json}")?;
        }
        (None, Format::Csv) => eprintln!("{summary_json}"),
        (None, _) => writeln!(w, "{{\"summary\":{summary_json}}}")?,
    }
    w.flush()?;
    eprintln!(
        "{} records ({} verified, {} degenerate, {} failed) in {:.2?}",
        summary.total,
        summary.verified,
        summary.degenerate(),
        summary.failed,
        summary.wall_clock
    );
    Ok(if summary.failed == 0 { exit::OK } else { exit::CLAIM_FAILED })
}

/// Executes a command and returns the process exit code.
pub fn run(cmd: &Command) -> Result<u8, CliError> {
    match cmd {
        Command::Simulate { launch, output } => {
            let orbit = simulate(&launch.spec, launch.n)?;
            match output.format {
                Format::Csv => write_points_csv(output, &orbit)?,
                _ => write_json(output, &OrbitDoc::from(&orbit))?,
            }
            Ok(exit::OK)
        }
        Command::Analyze { launch, output } => {
            let orbit = simulate(&launch.spec, launch.n)?;
            let (analysis, profile) = analyze(&orbit)?;
            let doc = AnalyzeDoc {
                spec: LaunchDoc::new(&launch.spec, launch.n),
                circular_order: analysis.order.sequence().to_vec(),
                first_family: analysis.first_family.segments.iter().map(SegmentDoc::from).collect(),
                both_family: analysis.both_family.segments.iter().map(SegmentDoc::from).collect(),
                profile: AnalysisDoc::new(&profile, &analysis.elementary),
            };
            write_json(output, &doc)?;
            Ok(exit::OK)
        }
        Command::Verify { launch, output } => {
            let orbit = simulate(&launch.spec, launch.n)?;
            let report = verify_all(&orbit).map_err(|e| structure_error(&e))?;
            write_json(output, &report)?;
            Ok(if report.overall { exit::OK } else { exit::CLAIM_FAILED })
        }
        Command::Render { launch, output } => {
            let orbit = simulate(&launch.spec, launch.n)?;
            let elementary: Vec<Segment> = circular_order(&orbit).elementary_segments();
            let profile = Analysis::new(&orbit).ok().and_then(|a| a.profile.ok());
            let mut w = output.open()?;
            w.write_all(render_svg(&orbit, &elementary, profile.as_ref()).as_bytes())?;
            w.flush()?;
            Ok(exit::OK)
        }
        Command::Sweep { config, threads, summary, output } => sweep(config, *threads, summary.as_ref(), output),
    }
}

/// Parses `argv`, runs the command and reports errors on standard error.
pub fn main_with_args<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_args(argv).and_then(|cmd| run(&cmd)) {
        Ok(code) => code,
        Err(err) if err.code == exit::OK => {
            print!("{}", err.message);
            exit::OK
        }
        Err(err) => {
            let msg = err.message.trim_end();
            if msg.starts_with("error:") {
                eprintln!("{msg}");
            } else {
                eprintln!("error: {msg}");
            }
            err.code
        }
    }
}
