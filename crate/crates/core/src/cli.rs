//! Command-line front end. Every command writes CSV preceded by a header
//! block of `# key=value` lines from which the run can be reconstructed;
//! `--format svg` additionally writes a plot next to the CSV file.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::engine::play;
use crate::estimators::{
    crossing_probability, estimate_gamma, estimate_wn, peierls_bound, peierls_p0_lower_bound, phase_scan,
    threshold_crossing, value_matrix, EstimatorError, PhaseCurve, Protocol, DEFAULT_HIGH, DEFAULT_LOW,
};
use crate::lattice::{substream_seed, Configuration, Vertex};
use crate::perc::{find_zero_chain, BoxSpec};
use crate::strategies::{P1Spec, P2Spec, Portfolio};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Parser, Debug, Clone)]
#[command(name = "percgame", version, about = "Percolation game simulator and estimators")]
pub struct Cli {
    /// Master seed; replication r uses the substream (seed, r).
    #[arg(long, env = "PERCGAME_SEED", default_value_t = 0, global = true)]
    pub seed: u64,

    /// Output file for the CSV (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// `svg` also writes a plot to the output path with extension `.svg`.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,

    /// Worker threads (default: all cores). Outputs do not depend on it.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Svg,
}

fn probability(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(format!("probability must lie in [0, 1], got {p}"))
    }
}

fn open_unit(s: &str) -> Result<f64, String> {
    let c: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if c > 0.0 && c < 1.0 {
        Ok(c)
    } else {
        Err(format!("value must lie in (0, 1), got {c}"))
    }
}

fn vertex(s: &str) -> Result<Vertex, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected x,y, got `{s}`"))?;
    let x: i64 = x.trim().parse().map_err(|_| format!("bad x coordinate `{x}`"))?;
    let y: i64 = y.trim().parse().map_err(|_| format!("bad y coordinate `{y}`"))?;
    Vertex::new(x, y).map_err(|e| e.to_string())
}

fn size(s: &str) -> Result<u32, String> {
    match s.trim().parse::<u32>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("bad size `{s}`: sizes are positive integers")),
    }
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct GameArgs {
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    pub horizon: u64,

    /// Start vertex `x,y` (coordinate sum even).
    #[arg(long, default_value = "0,0", value_parser = vertex, allow_hyphen_values = true)]
    pub start: Vertex,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct PortfolioArgs {
    /// Player 1 portfolio, e.g. `always_top,zero_trap,greedy`.
    #[arg(long)]
    pub p1: Option<Portfolio<P1Spec>>,

    /// Player 2 portfolio, e.g. `follower:height=1000,multiscale:sigma=0.75,goodbox:n=64,greedy`.
    #[arg(long)]
    pub p2: Option<Portfolio<P2Spec>>,
}

impl PortfolioArgs {
    fn resolve(&mut self, horizon: u64) {
        self.p1.get_or_insert_with(Portfolio::default_p1);
        self.p2.get_or_insert_with(|| Portfolio::default_p2(horizon));
    }
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u32).range(2..))]
    pub grid: u32,
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u64).range(1..))]
    pub reps: u64,
    #[command(flatten)]
    pub game: GameArgs,
    #[command(flatten)]
    pub portfolios: PortfolioArgs,
    #[arg(long, default_value_t = DEFAULT_LOW, value_parser = open_unit)]
    pub low: f64,
    #[arg(long, default_value_t = DEFAULT_HIGH, value_parser = open_unit)]
    pub high: f64,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct PlayArgs {
    #[arg(long, value_parser = probability)]
    pub p: f64,
    #[command(flatten)]
    pub game: GameArgs,
    /// Player 1 strategy.
    #[arg(long, default_value = "always_top")]
    pub p1: P1Spec,
    /// Player 2 strategy.
    #[arg(long, default_value = "follower")]
    pub p2: P2Spec,
    /// Replication index whose configuration is played.
    #[arg(long, default_value_t = 0)]
    pub rep: u64,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct CrossingArgs {
    #[arg(long, value_parser = probability)]
    pub p: f64,
    /// Box half-width.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub m: u32,
    /// Box half-height.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub n: u32,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub reps: u64,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct ValueArgs {
    #[arg(long, value_parser = probability)]
    pub p: f64,
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u64).range(1..))]
    pub reps: u64,
    #[command(flatten)]
    pub game: GameArgs,
    #[command(flatten)]
    pub portfolios: PortfolioArgs,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct WnArgs {
    #[arg(long, value_parser = probability)]
    pub p: f64,
    /// Box half-height.
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    pub n: u32,
    /// Target crossing probability.
    #[arg(long, default_value_t = 0.5, value_parser = open_unit)]
    pub c: f64,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub reps: u64,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct GammaArgs {
    #[arg(long, value_parser = probability)]
    pub p: f64,
    /// Comma-separated square half-sizes.
    #[arg(long, default_value = "8,16,24,32", value_delimiter = ',', value_parser = size)]
    pub sizes: Vec<u32>,
    #[arg(long, default_value_t = 4000, value_parser = clap::value_parser!(u64).range(1..))]
    pub reps: u64,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct PeierlsArgs {
    /// Evaluate the bound at this p; without it, report the lower bound on p0.
    #[arg(long, value_parser = probability)]
    pub p: Option<f64>,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct ZeroChainArgs {
    #[arg(long, value_parser = probability)]
    pub p: f64,
    /// Window half-width.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    pub width: u32,
    /// Window half-height.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    pub height: u32,
    #[arg(long, default_value = "0,0", value_parser = vertex, allow_hyphen_values = true)]
    pub start: Vertex,
    /// Replication index whose configuration is searched.
    #[arg(long, default_value_t = 0)]
    pub rep: u64,
}

#[derive(Subcommand, Debug, Clone, PartialEq)]
pub enum Command {
    /// Portfolio minimax value over an equally spaced grid of p.
    Scan(ScanArgs),
    /// Play one game and write its trajectory.
    Play(PlayArgs),
    /// Crossing probability of the box (-m, m] x (-n, n].
    Crossing(CrossingArgs),
    /// Portfolio value matrix at one p.
    Value(ValueArgs),
    /// Smallest half-width reaching a target crossing probability.
    Wn(WnArgs),
    /// Exponential decay rate of square-box crossing probabilities.
    Gamma(GammaArgs),
    /// Peierls bound at p, or the lower bound on p0 it certifies.
    Peierls(PeierlsArgs),
    /// Search a window for a chain of 0-squares.
    Zerochain(ZeroChainArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Scan(_) => "scan",
            Command::Play(_) => "play",
            Command::Crossing(_) => "crossing",
            Command::Value(_) => "value",
            Command::Wn(_) => "wn",
            Command::Gamma(_) => "gamma",
            Command::Peierls(_) => "peierls",
            Command::Zerochain(_) => "zerochain",
        }
    }

    /// Fills horizon-dependent defaults so that the run is fully explicit.
    fn resolve(mut self) -> Self {
        match &mut self {
            Command::Scan(a) => a.portfolios.resolve(a.game.horizon),
            Command::Value(a) => a.portfolios.resolve(a.game.horizon),
            _ => {}
        }
        self
    }

    /// The command's flags as written in output headers.
    fn flags(&self) -> Vec<(&'static str, String)> {
        let start = |v: &Vertex| format!("{},{}", v.x, v.y);
        let port = |p: &PortfolioArgs| {
            let mut out = Vec::new();
            if let Some(p1) = &p.p1 {
                out.push(("p1", p1.to_string()));
            }
            if let Some(p2) = &p.p2 {
                out.push(("p2", p2.to_string()));
            }
            out
        };
        match self {
            Command::Scan(a) => {
                let mut f = vec![
                    ("grid", a.grid.to_string()),
                    ("reps", a.reps.to_string()),
                    ("horizon", a.game.horizon.to_string()),
                    ("start", start(&a.game.start)),
                ];
                f.extend(port(&a.portfolios));
                f.push(("low", a.low.to_string()));
                f.push(("high", a.high.to_string()));
                f
            }
            Command::Play(a) => vec![
                ("p", a.p.to_string()),
                ("horizon", a.game.horizon.to_string()),
                ("start", start(&a.game.start)),
                ("p1", a.p1.to_string()),
                ("p2", a.p2.to_string()),
                ("rep", a.rep.to_string()),
            ],
            Command::Crossing(a) => vec![
                ("p", a.p.to_string()),
                ("m", a.m.to_string()),
                ("n", a.n.to_string()),
                ("reps", a.reps.to_string()),
            ],
            Command::Value(a) => {
                let mut f = vec![
                    ("p", a.p.to_string()),
                    ("reps", a.reps.to_string()),
                    ("horizon", a.game.horizon.to_string()),
                    ("start", start(&a.game.start)),
                ];
                f.extend(port(&a.portfolios));
                f
            }
            Command::Wn(a) => vec![
                ("p", a.p.to_string()),
                ("n", a.n.to_string()),
                ("c", a.c.to_string()),
                ("reps", a.reps.to_string()),
            ],
            Command::Gamma(a) => vec![
                ("p", a.p.to_string()),
                (
                    "sizes",
                    a.sizes.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","),
                ),
                ("reps", a.reps.to_string()),
            ],
            Command::Peierls(a) => a.p.iter().map(|p| ("p", p.to_string())).collect(),
            Command::Zerochain(a) => vec![
                ("p", a.p.to_string()),
                ("width", a.width.to_string()),
                ("height", a.height.to_string()),
                ("start", start(&a.start)),
                ("rep", a.rep.to_string()),
            ],
        }
    }
}

/// What determines a run's output: everything but the output location,
/// format and thread count.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub seed: u64,
    pub command: Command,
}

impl RunSpec {
    pub fn from_cli(cli: &Cli) -> Self {
        RunSpec {
            seed: cli.seed,
            command: cli.command.clone().resolve(),
        }
    }

    /// The header block written at the top of every CSV.
    pub fn header(&self) -> String {
        let mut h = String::new();
        let _ = writeln!(h, "# tool=percgame {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(h, "# command={}", self.command.name());
        let _ = writeln!(h, "# seed={}", self.seed);
        for (k, v) in self.command.flags() {
            let _ = writeln!(h, "# {k}={v}");
        }
        h
    }

    /// Rebuilds the run from the leading `# key=value` lines of an output.
    pub fn from_header(text: &str) -> Result<Self, String> {
        let (mut seed, mut command, mut flags) = (None, None, Vec::new());
        for line in text.lines() {
            let Some(body) = line.strip_prefix("# ") else { break };
            let (k, v) = body
                .split_once('=')
                .ok_or_else(|| format!("malformed header line `{line}`"))?;
            match k {
                "tool" => {}
                "seed" => seed = Some(v.to_string()),
                "command" => command = Some(v.to_string()),
                _ => flags.extend([format!("--{k}"), v.to_string()]),
            }
        }
        let mut args = vec!["percgame".to_string()];
        if let Some(s) = seed {
            args.extend(["--seed".to_string(), s]);
        }
        args.push(command.ok_or("command line missing")?);
        args.extend(flags);
        let cli = Cli::try_parse_from(args).map_err(|e| e.to_string())?;
        Ok(RunSpec::from_cli(&cli))
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numeric(String),
    Io(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<EstimatorError> for Failure {
    fn from(e: EstimatorError) -> Self {
        match e {
            EstimatorError::PeierlsDivergence { .. }
            | EstimatorError::ZeroEstimate { .. }
            | EstimatorError::NotDecaying { .. } => Failure::Numeric(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// Output of one command: CSV body (without header), an optional plot and
/// a one-line summary.
struct Artifact {
    csv: String,
    svg: Option<String>,
    summary: String,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    run(&cli)
}

pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(summary) => {
            eprintln!("{summary}");
            EXIT_OK
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("numerical error: {m}");
            EXIT_NUMERIC
        }
        Err(Failure::Io(m)) => {
            eprintln!("i/o error: {m}");
            EXIT_IO
        }
    }
}

fn execute(cli: &Cli) -> Result<String, Failure> {
    let spec = RunSpec::from_cli(cli);
    if cli.format == Format::Svg {
        if cli.out.is_none() {
            return Err(Failure::Usage("--format svg needs --out".into()));
        }
        if !matches!(spec.command, Command::Scan(_) | Command::Play(_) | Command::Gamma(_)) {
            return Err(Failure::Usage(format!(
                "--format svg is available for scan, play and gamma, not {}",
                spec.command.name()
            )));
        }
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        pool = pool.num_threads(n as usize);
    }
    let pool = pool.build().map_err(|e| Failure::Io(e.to_string()))?;
    let artifact = pool.install(|| compute(&spec))?;
    let text = format!("{}{}", spec.header(), artifact.csv);
    match &cli.out {
        Some(path) => {
            fs::write(path, &text)?;
            if let (Format::Svg, Some(svg)) = (cli.format, &artifact.svg) {
                fs::write(svg_path(path), svg)?;
            }
        }
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(artifact.summary)
}

fn svg_path(csv: &Path) -> PathBuf {
    csv.with_extension("svg")
}

fn protocol(seed: u64, reps: u64, game: &GameArgs, portfolios: &PortfolioArgs) -> Protocol {
    Protocol {
        start: game.start,
        p1: portfolios.p1.clone().map(|p| p.0).unwrap_or_default(),
        p2: portfolios.p2.clone().map(|p| p.0).unwrap_or_default(),
        horizon: game.horizon,
        reps,
        seed,
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "none".into(), |p| p.to_string())
}

fn compute(spec: &RunSpec) -> Result<Artifact, Failure> {
    let seed = spec.seed;
    match &spec.command {
        Command::Scan(a) => {
            let proto = protocol(seed, a.reps, &a.game, &a.portfolios);
            let mut curve = phase_scan(a.grid as usize, &proto)?;
            let means: Vec<f64> = curve.values.iter().map(|e| e.mean).collect();
            curve.thresholds = threshold_crossing(&curve.grid, &means, a.low, a.high)?;
            let mut csv = String::from("p,v_hat,half_width,reps,limsup_proxy\n");
            for ((p, e), l) in curve.grid.iter().zip(&curve.values).zip(&curve.limsup) {
                let _ = writeln!(csv, "{p},{},{},{},{l}", e.mean, e.half_width, e.reps);
            }
            let _ = writeln!(csv, "# green={}", opt(curve.thresholds.green));
            let _ = writeln!(csv, "# red={}", opt(curve.thresholds.red));
            Ok(Artifact {
                svg: Some(scan_svg(&curve)),
                summary: format!(
                    "scan: {} points, green = {}, red = {}",
                    curve.grid.len(),
                    opt(curve.thresholds.green),
                    opt(curve.thresholds.red)
                ),
                csv,
            })
        }
        Command::Play(a) => {
            let config = Configuration::new(substream_seed(seed, a.rep), a.p).map_err(|e| Failure::Usage(e.to_string()))?;
            let (mut s1, mut s2) = (a.p1.build(a.game.horizon), a.p2.build(a.game.horizon));
            let t = play(&config, a.game.start, s1.as_mut(), s2.as_mut(), a.game.horizon);
            let mut buf = Vec::new();
            t.write_csv(&mut buf)?;
            let avg = t.average_cost(t.horizon()).expect("horizon is at least 1");
            let points: Vec<(f64, f64)> = t.running_averages().enumerate().map(|(k, v)| ((k + 1) as f64, v)).collect();
            Ok(Artifact {
                csv: String::from_utf8(buf).expect("ascii output"),
                svg: Some(line_svg(
                    &format!("{} vs {}, p = {}", a.p1, a.p2, a.p),
                    "stage",
                    "running average cost",
                    &points,
                    &[],
                )),
                summary: format!(
                    "play: average cost {avg} = {:.6}, final-quarter max {:.6}",
                    t.mean_cost(),
                    t.limsup_proxy()
                ),
            })
        }
        Command::Crossing(a) => {
            let e = crossing_probability(a.p, a.m, a.n, a.reps, seed)?;
            Ok(Artifact {
                csv: format!(
                    "p,m,n,reps,mean,half_width\n{},{},{},{},{},{}\n",
                    a.p, a.m, a.n, e.reps, e.mean, e.half_width
                ),
                svg: None,
                summary: format!("crossing: {} +/- {}", e.mean, e.half_width),
            })
        }
        Command::Value(a) => {
            let proto = protocol(seed, a.reps, &a.game, &a.portfolios);
            let m = value_matrix(a.p, &proto)?;
            let mut csv = String::from("p1,p2,mean,half_width,limsup_proxy\n");
            for (i, s1) in proto.p1.iter().enumerate() {
                for (j, s2) in proto.p2.iter().enumerate() {
                    let e = m.entries[i][j];
                    let _ = writeln!(csv, "{s1},{s2},{},{},{}", e.mean, e.half_width, m.limsup[i][j]);
                }
            }
            let _ = writeln!(csv, "# v_hat={}", m.v_hat);
            let _ = writeln!(csv, "# v_hat_limsup={}", m.v_hat_limsup);
            Ok(Artifact {
                csv,
                svg: None,
                summary: format!(
                    "value: v_hat = {} ({} vs {})",
                    m.v_hat, proto.p1[m.argminmax.0], proto.p2[m.argminmax.1]
                ),
            })
        }
        Command::Wn(a) => {
            let w = estimate_wn(a.p, a.n, a.c, a.reps, seed)?;
            Ok(Artifact {
                csv: format!(
                    "p,n,c,w_hat,probability,exponent,saturated\n{},{},{},{},{},{},{}\n",
                    w.p,
                    w.n,
                    w.c,
                    w.w_hat,
                    w.probability,
                    w.exponent(),
                    w.saturated
                ),
                svg: None,
                summary: format!("wn: w_hat = {} (exponent {:.4})", w.w_hat, w.exponent()),
            })
        }
        Command::Gamma(a) => {
            let fit = estimate_gamma(a.p, &a.sizes, a.reps, seed)?;
            let mut csv = String::from("n,probability,neg_log_probability\n");
            for (n, q) in fit.sizes.iter().zip(&fit.probabilities) {
                let _ = writeln!(csv, "{n},{q},{}", -q.ln());
            }
            let _ = writeln!(csv, "# gamma_hat={}", fit.gamma_hat);
            let _ = writeln!(csv, "# intercept={}", fit.intercept);
            let _ = writeln!(csv, "# residual={}", fit.residual);
            let points: Vec<(f64, f64)> = fit
                .sizes
                .iter()
                .zip(&fit.probabilities)
                .map(|(&n, q)| (n as f64, -q.ln()))
                .collect();
            Ok(Artifact {
                csv,
                svg: Some(line_svg(
                    &format!("crossing decay, p = {}", a.p),
                    "n",
                    "-log P(crossing)",
                    &points,
                    &[],
                )),
                summary: format!("gamma: {}", fit.gamma_hat),
            })
        }
        Command::Peierls(a) => match a.p {
            Some(p) => {
                let b = peierls_bound(p)?;
                Ok(Artifact {
                    csv: format!("p,bound\n{p},{b}\n"),
                    svg: None,
                    summary: format!("peierls: B({p}) = {b}"),
                })
            }
            None => {
                let p0 = peierls_p0_lower_bound();
                Ok(Artifact {
                    csv: format!("p0_lower_bound,bound_at_p0\n{p0},{}\n", peierls_bound(p0)?),
                    svg: None,
                    summary: format!("peierls: p0 >= {p0}"),
                })
            }
        },
        Command::Zerochain(a) => {
            let config = Configuration::new(substream_seed(seed, a.rep), a.p).map_err(|e| Failure::Usage(e.to_string()))?;
            let window = BoxSpec::new(a.start, a.width, a.height).map_err(|e| Failure::Usage(e.to_string()))?;
            let chain = find_zero_chain(&config, &window);
            let mut csv = String::from("index,x,y\n");
            if let Some(c) = &chain {
                for (i, f) in c.centers().iter().enumerate() {
                    let _ = writeln!(csv, "{i},{},{}", f.x, f.y);
                }
            }
            let _ = writeln!(csv, "# found={}", chain.is_some());
            Ok(Artifact {
                csv,
                svg: None,
                summary: match &chain {
                    Some(c) => format!("zerochain: found, {} squares", c.len()),
                    None => "zerochain: none".into(),
                },
            })
        }
    }
}

fn scan_svg(curve: &PhaseCurve) -> String {
    let points: Vec<(f64, f64)> = curve.grid.iter().zip(&curve.values).map(|(&p, e)| (p, e.mean)).collect();
    let mut marks = Vec::new();
    if let Some(g) = curve.thresholds.green {
        marks.push((g, "green"));
    }
    if let Some(r) = curve.thresholds.red {
        marks.push((r, "red"));
    }
    line_svg("portfolio value estimate", "p", "value", &points, &marks)
}

/// A single polyline with axes, labels and optional vertical markers.
fn line_svg(title: &str, xlabel: &str, ylabel: &str, points: &[(f64, f64)], marks: &[(f64, &str)]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const M: f64 = 50.0;
    let (x0, x1) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.0), b.max(p.0)));
    let (y0, y1) = points
        .iter()
        .fold((0.0f64, 1.0f64), |(a, b), p| (a.min(p.1), b.max(p.1)));
    let span = |a: f64, b: f64| if b > a { b - a } else { 1.0 };
    let sx = |x: f64| M + (x - x0) / span(x0, x1) * (W - 2.0 * M);
    let sy = |y: f64| H - M - (y - y0) / span(y0, y1) * (H - 2.0 * M);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{M} {} H{} M{M} {} V{M}" stroke="black" fill="none"/>"#,
        H - M,
        W - M,
        H - M
    );
    let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, W / 2.0, H - 12.0, escape(xlabel));
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
        H / 2.0,
        H / 2.0,
        escape(ylabel)
    );
    for (v, anchor, x, y) in [
        (x0, "start", sx(x0), H - M + 16.0),
        (x1, "end", sx(x1), H - M + 16.0),
    ] {
        let _ = writeln!(s, r#"<text x="{x}" y="{y}" text-anchor="{anchor}" font-size="11">{v}</text>"#);
    }
    for v in [y0, y1] {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end" font-size="11">{v}</text>"#,
            M - 4.0,
            sy(v) + 4.0
        );
    }
    for &(x, color) in marks {
        let _ = writeln!(
            s,
            r#"<line x1="{0}" y1="{M}" x2="{0}" y2="{1}" stroke="{color}" stroke-dasharray="4 3"/>"#,
            sx(x),
            H - M
        );
    }
    let pts: Vec<String> = points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
    let _ = writeln!(s, r#"<polyline points="{}" stroke="steelblue" fill="none"/>"#, pts.join(" "));
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
