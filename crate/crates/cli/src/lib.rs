//! `belyi` command line: enumeration and certification of Belyi maps, surface
//! charts, elliptic point searches, Pell families and hypergeometric values.
//!
//! Exit codes: 0 with at least one result, 1 for a clean run without results,
//! 2 for usage or input errors.

mod args;
mod commands;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use output::Format;

/// Error carrying the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

#[derive(Parser, Debug)]
#[command(name = "belyi", version, about = "Exact Belyi maps from hypergeometric polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Args, Debug)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write output to a file instead of stdout.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
    /// Indent JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve, assemble and certify all maps for one parameter set or a grid.
    Enumerate(EnumerateArgs),
    /// Re-certify map records from a JSON file ("-" for stdin).
    Certify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Points and charts of the cubic and quartic surfaces.
    Surface {
        #[command(subcommand)]
        action: SurfaceCmd,
    },
    /// Rational points on the specialized curves E5-E8.
    Ec {
        #[command(subcommand)]
        action: EcCmd,
    },
    /// Solutions of the Pell-type equations behind large-m maps.
    Pell {
        #[arg(long, value_parser = clap::builder::TypedValueParser::map(
            clap::builder::PossibleValuesParser::new(["6", "10"]),
            |s: String| s.parse::<i64>().unwrap_or_default(),
        ))]
        d: i64,
        #[arg(long = "n-max", value_parser = clap::value_parser!(u32).range(1..=400))]
        n_max: u32,
    },
    /// Terminating hypergeometric polynomials.
    Hpg {
        #[command(subcommand)]
        action: HpgCmd,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    /// (1-x)^p (1-λx)^q G^r
    TwoLinear,
    /// (1+αx+βx²)^p G^r
    OneQuadratic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DedupArg {
    /// Keep one map per Möbius orbit.
    Orbit,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(long, value_enum)]
    pub form: FormArg,
    /// Power of the first factor; an integer, a range a..b or a comma list.
    #[arg(short, allow_hyphen_values = true, value_parser = args::parse_int_set)]
    pub p: args::IntSet,
    /// Power of (1-λx); two-linear form only.
    #[arg(short, allow_hyphen_values = true, value_parser = args::parse_int_set)]
    pub q: Option<args::IntSet>,
    /// Power of G.
    #[arg(short, allow_hyphen_values = true, value_parser = args::parse_int_set)]
    pub r: args::IntSet,
    /// Degree of G.
    #[arg(short, allow_hyphen_values = true, value_parser = args::parse_int_set)]
    pub m: args::IntSet,
    /// Display maps as φ(c·x) with the scale c making every factor integral.
    #[arg(long)]
    pub rescale: bool,
    #[arg(long, value_enum)]
    pub dedup: Option<DedupArg>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SurfaceKind {
    Cubic,
    Quartic,
}

#[derive(Subcommand, Debug)]
pub enum SurfaceCmd {
    /// Evaluate the defining polynomial at (b, c, z).
    Eval {
        #[arg(long, value_enum)]
        kind: SurfaceKind,
        #[arg(long, allow_hyphen_values = true, value_parser = args::parse_rat)]
        b: belyi_core::Rational,
        #[arg(long, allow_hyphen_values = true, value_parser = args::parse_rat)]
        c: belyi_core::Rational,
        #[arg(long, allow_hyphen_values = true, value_parser = args::parse_rat)]
        z: belyi_core::Rational,
    },
    /// Point of the surface from chart coordinates: (e, z) on the cubic, (t, y) on the quartic.
    Param {
        #[arg(long, value_enum)]
        kind: SurfaceKind,
        #[arg(long, allow_hyphen_values = true, value_parser = args::parse_rat)]
        e: Option<belyi_core::Rational>,
        #[arg(long, allow_hyphen_values = true, value_parser = args::parse_rat)]
        z: Option<belyi_core::Rational>,
        #[arg(long, allow_hyphen_values = true, value_parser = args::parse_rat)]
        t: Option<belyi_core::Rational>,
        #[arg(long, allow_hyphen_values = true, value_parser = args::parse_rat)]
        y: Option<belyi_core::Rational>,
    },
    /// Cubic-surface point whose cubic in z splits over Q.
    Split {
        #[arg(long, allow_hyphen_values = true, value_parser = args::parse_rat)]
        t: belyi_core::Rational,
        #[arg(long, allow_hyphen_values = true, value_parser = args::parse_rat)]
        y: belyi_core::Rational,
    },
}

#[derive(Subcommand, Debug)]
pub enum EcCmd {
    /// Enumerate points n·P + torsion with |n| ≤ bound and their images.
    Points {
        #[arg(long, value_parser = clap::value_parser!(u32).range(5..=8))]
        m: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(0..=200))]
        bound: u32,
    },
    /// Image (p/r, z) of one point.
    Map {
        #[arg(long, value_parser = clap::value_parser!(u32).range(5..=8))]
        m: u32,
        #[arg(long, allow_hyphen_values = true, value_parser = args::parse_point)]
        point: belyi_core::elliptic::PointQ,
    },
    /// Real period and the share where p/r > 0 (floating point).
    Density {
        #[arg(long, value_parser = clap::value_parser!(u32).range(5..=6))]
        m: u32,
        #[arg(long, default_value_t = 1e-12)]
        tolerance: f64,
    },
}

#[derive(Subcommand, Debug)]
pub enum HpgCmd {
    /// ₂F₁(-N, b; c; z), or its coefficients when --z is omitted.
    Eval {
        #[arg(short = 'N')]
        n: usize,
        #[arg(long, allow_hyphen_values = true, value_parser = args::parse_rat)]
        b: belyi_core::Rational,
        #[arg(long, allow_hyphen_values = true, value_parser = args::parse_rat)]
        c: belyi_core::Rational,
        #[arg(long, allow_hyphen_values = true, value_parser = args::parse_rat)]
        z: Option<belyi_core::Rational>,
    },
}

/// Parses `argv`, runs the command and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli) {
        Ok((code, text)) => match emit(&cli.global, &text, out) {
            Ok(()) => code,
            Err(f) => report(f, err),
        },
        Err(f) => report(f, err),
    }
}

fn report(f: Failure, err: &mut dyn Write) -> i32 {
    let _ = writeln!(err, "error: {}", f.message);
    f.code
}

fn emit(g: &GlobalOpts, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match &g.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure { code: 2, message: format!("cannot write {}: {e}", path.display()) }),
        None => match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
            // a closed pipe (e.g. `| head`) is not an error
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure { code: 2, message: e.to_string() }),
            _ => Ok(()),
        },
    }
}

fn execute(cli: &Cli) -> Result<(i32, String), Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Enumerate(a) => commands::enumerate(a, g),
        Command::Certify { input } => commands::certify(input, g),
        Command::Surface { action } => commands::surface(action, g),
        Command::Ec { action } => commands::ec(action, g),
        Command::Pell { d, n_max } => commands::pell(*d, *n_max, g),
        Command::Hpg { action } => commands::hpg(action, g),
    }
}
