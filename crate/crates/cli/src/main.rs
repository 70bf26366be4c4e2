//! `gasket`: render fat Sierpiński gaskets, estimate invariant densities and
//! inspect coin-driven expansions.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gasket::chaos::{chaos_game, rasterize, DEFAULT_BURN_IN};
use gasket::measures::random_map::RandomMapSpec;
use gasket::measures::ulam::{build_ulam, stationary_density, UlamMap};
use gasket::radial::default_depth;
use gasket::{
    coins_from_digits_to_depth, constants, expand_traced_to_depth, Beta, CoinTapes, GasketError,
    Point, Regime, Tape,
};

#[derive(Debug, Parser)]
#[command(
    name = "gasket",
    version,
    about = "Beta-expansions on fat Sierpinski gaskets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Chaos-game picture of the attractor.
    Render(RenderArgs),
    /// Stationary density of the greedy, lazy or random map.
    Density(DensityArgs),
    /// Trace of the coin-driven map from a point.
    Orbit(OrbitArgs),
    /// Coin prefixes that produce a given digit string.
    Coins(CoinsArgs),
    /// The regime constants.
    Constants(OutputArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Pgm,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RegimeArg {
    Triangle,
    Radial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MapArg {
    Greedy,
    Lazy,
    Random,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BetaArgs {
    #[arg(long)]
    beta: f64,
    /// Force a regime instead of deriving it from beta.
    #[arg(long, value_enum)]
    regime: Option<RegimeArg>,
}

impl BetaArgs {
    fn resolve(&self) -> Result<Beta, CliError> {
        let beta = match self.regime {
            None => Beta::new(self.beta)?,
            Some(RegimeArg::Triangle) => Beta::with_regime(self.beta, Regime::Triangle)?,
            Some(RegimeArg::Radial) => Beta::with_regime(self.beta, Regime::Radial)?,
        };
        Ok(beta)
    }
}

#[derive(Debug, Args)]
struct RenderArgs {
    /// Base in (1, 2].
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Pixels per side.
    #[arg(long, default_value_t = 256)]
    grid: usize,
    /// Number of plotted points.
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Pgm)]
    format: Format,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct DensityArgs {
    #[command(flatten)]
    beta: BetaArgs,
    #[arg(long, value_enum, default_value_t = MapArg::Greedy)]
    map: MapArg,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 1.0 / 3.0)]
    s: f64,
    #[arg(long, default_value_t = 1.0 / 3.0)]
    t: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Squares per side of the Ulam grid.
    #[arg(long, default_value_t = 64)]
    grid: usize,
    /// Sample points per cell.
    #[arg(long, default_value_t = 64)]
    samples: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 10_000)]
    maxiter: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct OrbitArgs {
    #[command(flatten)]
    beta: BetaArgs,
    /// Start point as `x,y`.
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    /// Two-sided tape over {0,1}.
    #[arg(long, default_value = "")]
    omega: String,
    /// Three-sided tape over {0,1,2}.
    #[arg(long, default_value = "")]
    upsilon: String,
    #[arg(long, default_value_t = 20)]
    steps: usize,
    /// Hole-chain search depth (radial regime).
    #[arg(long)]
    depth: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct CoinsArgs {
    #[command(flatten)]
    beta: BetaArgs,
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    /// Digit string over {0,1,2}.
    #[arg(long)]
    digits: String,
    #[arg(long)]
    depth: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Gasket(#[from] GasketError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0} tape exhausted after {1} steps")]
    Exhausted(Tape, usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Gasket(GasketError::TapeExhausted(_)) | CliError::Exhausted(..) => 3,
            CliError::Gasket(GasketError::NoConvergence { .. }) => 4,
            CliError::Gasket(GasketError::NoSignChange { .. }) => 1,
            CliError::Gasket(_) | CliError::Usage(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

fn parse_point(s: &str) -> Result<Point, CliError> {
    let bad = || CliError::Usage(format!("point {s:?} is not of the form x,y"));
    let (x, y) = s.split_once(',').ok_or_else(bad)?;
    let x: f64 = x.trim().parse().map_err(|_| bad())?;
    let y: f64 = y.trim().parse().map_err(|_| bad())?;
    Ok(Point::new(x, y))
}

fn open_output(out: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(out: &Option<PathBuf>, value: &T) -> Result<(), CliError> {
    let mut w = open_output(out)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Binary PGM, values min–max scaled to 0..=255.
fn write_pgm(
    out: &Option<PathBuf>,
    width: usize,
    height: usize,
    values: &[f64],
) -> Result<(), CliError> {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let span = hi - lo;
    let bytes: Vec<u8> = values
        .iter()
        .map(|&v| {
            if span > 0.0 {
                ((v - lo) / span * 255.0).round() as u8
            } else {
                0
            }
        })
        .collect();
    let mut w = open_output(out)?;
    write!(w, "P5\n{width} {height}\n255\n")?;
    w.write_all(&bytes)?;
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct RenderJson {
    beta: f64,
    grid: usize,
    samples: usize,
    seed: u64,
    counts: Vec<Vec<u64>>,
}

fn cmd_render(args: &RenderArgs) -> Result<(), CliError> {
    if args.grid == 0 {
        return Err(CliError::Usage("grid must be positive".into()));
    }
    let points = chaos_game(args.beta, args.samples, DEFAULT_BURN_IN, args.seed)?;
    let n = args.grid;
    let counts = rasterize(&points, args.beta, n);
    match args.format {
        Format::Pgm => {
            let values: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
            write_pgm(&args.output.out, n, n, &values)
        }
        Format::Csv => {
            let mut w = open_output(&args.output.out)?;
            writeln!(w, "row,col,count")?;
            for (i, c) in counts.iter().enumerate() {
                writeln!(w, "{},{},{}", i / n, i % n, c)?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Json => write_json(
            &args.output.out,
            &RenderJson {
                beta: args.beta,
                grid: n,
                samples: args.samples,
                seed: args.seed,
                counts: counts.chunks(n).map(|r| r.to_vec()).collect(),
            },
        ),
    }
}

#[derive(Serialize)]
struct CellJson {
    cell_index: usize,
    cx: f64,
    cy: f64,
    density: f64,
}

#[derive(Serialize)]
struct DensityJson {
    beta: f64,
    map: &'static str,
    grid: usize,
    samples: usize,
    seed: u64,
    cell_area: f64,
    cells: Vec<CellJson>,
}

fn cmd_density(args: &DensityArgs) -> Result<(), CliError> {
    let beta = args.beta.resolve()?;
    let (map, name) = match args.map {
        MapArg::Greedy => (UlamMap::Greedy, "greedy"),
        MapArg::Lazy => (UlamMap::Lazy, "lazy"),
        MapArg::Random => (
            UlamMap::RandomR(RandomMapSpec::new(beta, args.p, args.s, args.t)?),
            "random",
        ),
    };
    beta.require(Regime::Triangle)?;
    let ulam = build_ulam(&beta, &map, args.grid, args.samples, args.seed)?;
    let density = stationary_density(&ulam, args.tol, args.maxiter)?;
    let grid = ulam.grid();
    match args.format {
        Format::Csv => {
            let mut w = open_output(&args.output.out)?;
            writeln!(w, "cell_index,cx,cy,density")?;
            for (i, (cell, f)) in grid.cells().iter().zip(&density).enumerate() {
                let c = cell.centroid();
                writeln!(w, "{i},{},{},{f}", c.x, c.y)?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Pgm => {
            // pixel (row b, column a) averages the cells of square (a, b)
            let n = args.grid;
            let mut sum = vec![0.0; n * n];
            let mut count = vec![0usize; n * n];
            for (cell, f) in grid.cells().iter().zip(&density) {
                sum[cell.b * n + cell.a] += f;
                count[cell.b * n + cell.a] += 1;
            }
            let values: Vec<f64> = sum
                .iter()
                .zip(&count)
                .map(|(&s, &c)| if c > 0 { s / c as f64 } else { 0.0 })
                .collect();
            write_pgm(&args.output.out, n, n, &values)
        }
        Format::Json => write_json(
            &args.output.out,
            &DensityJson {
                beta: beta.value(),
                map: name,
                grid: args.grid,
                samples: args.samples,
                seed: args.seed,
                cell_area: grid.cell_area(),
                cells: grid
                    .cells()
                    .iter()
                    .zip(&density)
                    .enumerate()
                    .map(|(i, (cell, &f))| {
                        let c = cell.centroid();
                        CellJson {
                            cell_index: i,
                            cx: c.x,
                            cy: c.y,
                            density: f,
                        }
                    })
                    .collect(),
            },
        ),
    }
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::Triangle => "triangle",
        Regime::Radial => "radial",
    }
}

#[derive(Serialize)]
struct StepJson {
    step: usize,
    point: Point,
    region: &'static str,
    digit: usize,
    k: usize,
    l: usize,
}

#[derive(Serialize)]
struct OrbitJson {
    beta: f64,
    regime: &'static str,
    start: Point,
    digits: String,
    steps: Vec<StepJson>,
    final_point: Point,
    omega_consumed: usize,
    upsilon_consumed: usize,
    exhausted: Option<Tape>,
}

fn cmd_orbit(args: &OrbitArgs) -> Result<(), CliError> {
    let beta = args.beta.resolve()?;
    let z = parse_point(&args.point)?;
    let mut tapes = CoinTapes::parse(&args.omega, &args.upsilon)?;
    let depth = args.depth.unwrap_or_else(|| default_depth(&beta));
    let (record, trace) = expand_traced_to_depth(&beta, &mut tapes, z, args.steps, depth)?;
    let json = OrbitJson {
        beta: beta.value(),
        regime: regime_name(beta.regime()),
        start: z,
        digits: record.digits.iter().map(|d| d.to_char()).collect(),
        steps: trace
            .iter()
            .map(|s| StepJson {
                step: s.step,
                point: s.point,
                region: s.region.name(),
                digit: s.digit.index(),
                k: s.k,
                l: s.l,
            })
            .collect(),
        final_point: record.final_point,
        omega_consumed: tapes.k(),
        upsilon_consumed: tapes.l(),
        exhausted: record.exhausted,
    };
    write_json(&args.output.out, &json)?;
    match record.exhausted {
        Some(tape) => Err(CliError::Exhausted(tape, record.digits.len())),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct VisitJson {
    step: usize,
    region: &'static str,
    digit: usize,
    symbol: u8,
}

#[derive(Serialize)]
struct CoinsJson {
    beta: f64,
    regime: &'static str,
    start: Point,
    digits: String,
    omega: String,
    upsilon: String,
    visits: Vec<VisitJson>,
}

fn symbols(v: &[u8]) -> String {
    v.iter().map(|s| char::from(b'0' + s)).collect()
}

fn cmd_coins(args: &CoinsArgs) -> Result<(), CliError> {
    let beta = args.beta.resolve()?;
    let z = parse_point(&args.point)?;
    let digits = gasket::geometry::parse_digits(&args.digits)?;
    let depth = args.depth.unwrap_or_else(|| default_depth(&beta));
    let coding = coins_from_digits_to_depth(&beta, z, &digits, depth)?;
    let json = CoinsJson {
        beta: beta.value(),
        regime: regime_name(beta.regime()),
        start: z,
        digits: args.digits.clone(),
        omega: symbols(&coding.omega),
        upsilon: symbols(&coding.upsilon),
        visits: coding
            .visits
            .iter()
            .map(|v| VisitJson {
                step: v.step,
                region: v.region.name(),
                digit: v.digit.index(),
                symbol: v.symbol,
            })
            .collect(),
    };
    write_json(&args.output.out, &json)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Render(a) => cmd_render(a),
        Command::Density(a) => cmd_density(a),
        Command::Orbit(a) => cmd_orbit(a),
        Command::Coins(a) => cmd_coins(a),
        Command::Constants(a) => write_json(&a.out, &constants()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
