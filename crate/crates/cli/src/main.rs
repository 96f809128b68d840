use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use wiretap_core::cache;
use wiretap_core::codes::{CodeKind, GeneratorPoly};
use wiretap_core::dmc::{secrecy_capacity, DiscreteChannel};
use wiretap_core::ie::{ie_dimension, ie_mi_bound, ie_semantic_bound};
use wiretap_core::oracle;
use wiretap_core::polarize::BitChannelBounds;
use wiretap_core::reproduce::{self, ReproOptions, Target};
use wiretap_core::sim::{self, RunParams, Scheme, SimCode, SimConfig};
use wiretap_core::wiretap::{design_sets, DesignOptions, SecrecyDesign, SecrecyReport};
use wiretap_core::Error;

const EXIT_FAILED_CHECK: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_INVALID: u8 = 3;

/// Wiretap coding laboratory: bit-channel bounds, coset designs, FER simulation.
#[derive(Parser)]
#[command(name = "wiretap", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Bit-channel bounds of BSC(p) at blocklength N.
    Construct(ConstructArgs),
    /// Coset design (A, R, B) for a message length k.
    Design(DesignArgs),
    /// Monte Carlo FER of Bob's decoder.
    Simulate(SimulateArgs),
    /// Leakage bound and semantic-secrecy figures of a design.
    Bound(BoundArgs),
    /// Extractor-scheme bounds at blocklength N.
    IeBound(IeBoundArgs),
    /// Exhaustive small-blocklength checks.
    Verify(VerifyArgs),
    /// Regenerate a table or figure.
    Reproduce(ReproduceArgs),
}

#[derive(Args)]
struct ChannelArgs {
    /// Bob's crossover probability.
    #[arg(long, default_value_t = 0.05)]
    pb: f64,
    /// Eve's crossover probability.
    #[arg(long, default_value_t = 0.3)]
    pe: f64,
    /// Blocklength (power of two).
    #[arg(long = "N", default_value_t = 256)]
    n: usize,
    /// Output-alphabet budget of the construction.
    #[arg(long, default_value_t = 64)]
    mu: usize,
}

impl ChannelArgs {
    fn check(&self) -> anyhow::Result<u32> {
        if !(self.pb > 0.0 && self.pb < self.pe && self.pe < 0.5) {
            return Err(Error::InvalidParameter(format!("need 0 < pb < pe < 1/2, got pb={} pe={}", self.pb, self.pe)).into());
        }
        if !self.n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(self.n).into());
        }
        Ok(self.n.trailing_zeros())
    }

    fn bounds(&self) -> anyhow::Result<(BitChannelBounds, BitChannelBounds)> {
        let n = self.check()?;
        Ok((
            cache::bounds(&DiscreteChannel::bsc(self.pb)?, n, self.mu)?,
            cache::bounds(&DiscreteChannel::bsc(self.pe)?, n, self.mu)?,
        ))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Polar,
    Pac,
    Ie,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Polar => Scheme::Polar,
            SchemeArg::Pac => Scheme::Pac,
            SchemeArg::Ie => Scheme::Ie,
        }
    }
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected LO,HI")?;
    let lo: f64 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: f64 = b.trim().parse().map_err(|e| format!("{e}"))?;
    if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
        return Err(format!("need 0 <= LO <= HI <= 1, got {lo},{hi}"));
    }
    Ok((lo, hi))
}

#[derive(Args)]
struct ConstructArgs {
    /// Crossover probability of the channel.
    #[arg(long)]
    p: f64,
    #[arg(long = "N", default_value_t = 256)]
    n: usize,
    #[arg(long, default_value_t = 64)]
    mu: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DesignArgs {
    #[command(flatten)]
    ch: ChannelArgs,
    /// Message length.
    #[arg(long)]
    k: usize,
    /// Bob FER window `LO,HI`; HI is the union-bound budget of the design rule.
    #[arg(long = "fer-window", value_parser = parse_window, default_value = "0.05,0.06")]
    fer_window: (f64, f64),
    /// Cap on |A ∪ R|.
    #[arg(long)]
    max_data: Option<usize>,
    #[arg(long, value_enum, default_value = "polar")]
    scheme: SchemeArg,
    /// Octal PAC generator.
    #[arg(long)]
    g: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    ch: ChannelArgs,
    #[arg(long, default_value_t = 0)]
    k: usize,
    #[arg(long, value_enum, default_value = "polar")]
    scheme: SchemeArg,
    #[arg(long, default_value_t = 16)]
    list: usize,
    #[arg(long, default_value_t = 10_000)]
    frames: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    g: Option<String>,
    /// Stop after at least `frames` frames and 100 errors.
    #[arg(long)]
    adaptive: bool,
    /// Design file to simulate instead of designing from the flags.
    #[arg(long)]
    design: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    ch: ChannelArgs,
    /// Design file; designed from the flags when absent.
    #[arg(long)]
    design: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    k: usize,
    #[arg(long = "fer-window", value_parser = parse_window, default_value = "0.05,0.06")]
    fer_window: (f64, f64),
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IeBoundArgs {
    #[arg(long = "N", default_value_t = 512)]
    n: usize,
    #[arg(long, default_value_t = 0.005)]
    pb: f64,
    /// Bound on Bob's FER in the dimension formula.
    #[arg(long, default_value_t = 0.1)]
    nu: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    All,
    Equivalence,
    Symmetry,
    Superchannel,
    Leakage,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    check: CheckArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReproduceArgs {
    /// table1, table2, fig3a or fig3b.
    #[arg(long)]
    target: String,
    #[arg(long, default_value = "results")]
    out: PathBuf,
    #[arg(long, default_value_t = 64)]
    mu: usize,
    #[arg(long, default_value_t = 16)]
    list: usize,
    #[arg(long, default_value_t = 100_000)]
    frames: u64,
    #[arg(long, default_value_t = 4_000)]
    search_frames: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    g: Option<String>,
    #[arg(long)]
    adaptive: bool,
}

fn generator(g: &Option<String>) -> anyhow::Result<GeneratorPoly> {
    Ok(match g {
        Some(s) => GeneratorPoly::from_octal(s)?,
        None => GeneratorPoly::default_pac(),
    })
}

fn emit(value: &serde_json::Value, out: &Option<PathBuf>) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(path) => write_file(path, &text),
        None => print_out(&text),
    }
}

/// Writes a line to stdout; a closed pipe is not an error.
fn print_out(text: &str) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn write_file(path: &Path, text: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn read_design(path: &Path) -> anyhow::Result<SecrecyDesign> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(serde_json::from_str(&text).map_err(Error::from)?)
}

fn design_from(ch: &ChannelArgs, k: usize, window: (f64, f64), max_data: Option<usize>) -> anyhow::Result<SecrecyDesign> {
    let (bob, eve) = ch.bounds()?;
    let opts = DesignOptions { fer_budget: window.1, max_data, ..Default::default() };
    Ok(design_sets(&bob, &eve, k, &opts)?)
}

fn with_scheme(design: SecrecyDesign, scheme: SchemeArg, g: &Option<String>) -> anyhow::Result<SecrecyDesign> {
    Ok(match scheme {
        SchemeArg::Pac => design.with_kind(CodeKind::Pac, Some(generator(g)?))?,
        SchemeArg::Polar => design.with_kind(CodeKind::Polar, None)?,
        SchemeArg::Ie => bail!(Error::InvalidParameter("designs are polar or pac".into())),
    })
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.cmd {
        Cmd::Construct(a) => {
            if !a.n.is_power_of_two() {
                return Err(Error::NotPowerOfTwo(a.n).into());
            }
            let b = cache::bounds(&DiscreteChannel::bsc(a.p)?, a.n.trailing_zeros(), a.mu)?;
            emit(&serde_json::to_value(&b)?, &a.out)?;
        }
        Cmd::Design(a) => {
            let d = with_scheme(design_from(&a.ch, a.k, a.fer_window, a.max_data)?, a.scheme, &a.g)?;
            emit(&serde_json::to_value(&d)?, &a.out)?;
        }
        Cmd::Simulate(a) => {
            let mut config = SimConfig::new(a.scheme.into(), a.ch.n, a.k, a.ch.pb, a.ch.pe);
            config.list = a.list;
            config.frames = a.frames;
            config.seed = a.seed;
            config.mu = a.ch.mu;
            config.adaptive = a.adaptive;
            config.g = Some(generator(&a.g)?);
            config.validate()?;
            let code = match &a.design {
                Some(path) => SimCode::Coset(read_design(path)?),
                None => {
                    let (bob, eve) = a.ch.bounds()?;
                    sim::derive_code(&config, &bob, &eve, &DesignOptions { fer_budget: f64::INFINITY, ..Default::default() })?
                }
            };
            let run = RunParams {
                pb: a.ch.pb,
                list: a.list,
                frames: a.frames,
                seed: a.seed,
                adaptive: a.adaptive,
                max_frames: Some(a.frames.saturating_mul(100)),
            };
            let result = sim::simulate(&code, &run)?;
            emit(&json!({"config": config, "result": result}), &a.out)?;
        }
        Cmd::Bound(a) => {
            let (_, eve) = a.ch.bounds()?;
            let design = match &a.design {
                Some(path) => read_design(path)?,
                None => design_from(&a.ch, a.k, a.fer_window, None)?,
            };
            let cs = secrecy_capacity(a.ch.pb, a.ch.pe)?;
            let report = SecrecyReport::new(&design, &eve, a.ch.pe, cs)?;
            emit(
                &json!({
                    "report": report,
                    "csv_header": SecrecyReport::csv_header(),
                    "csv_row": report.csv_row(),
                    "r": design.r(),
                }),
                &a.out,
            )?;
        }
        Cmd::IeBound(a) => {
            let delta = ie_semantic_bound(a.n)?;
            let k = ie_dimension(a.n, a.pb, a.nu)?;
            emit(
                &json!({
                    "N": a.n,
                    "delta": delta,
                    "neg_log2_delta": -delta.log2(),
                    "mi_bound": ie_mi_bound(delta, a.n)?,
                    "k": k,
                    "k_over_N": 1.0 - wiretap_core::dmc::binary_entropy(a.pb) - a.nu,
                }),
                &None,
            )?;
        }
        Cmd::Verify(a) => {
            let mut records = Vec::new();
            let all = matches!(a.check, CheckArg::All);
            if all || matches!(a.check, CheckArg::Equivalence) {
                records.extend(oracle::equivalence_suite()?);
            }
            if all || matches!(a.check, CheckArg::Symmetry) {
                records.extend(oracle::submatrix_symmetry_suite()?);
            }
            if all || matches!(a.check, CheckArg::Superchannel) {
                records.extend(oracle::superchannel_suite()?);
            }
            if all || matches!(a.check, CheckArg::Leakage) {
                records.extend(oracle::leakage_consistency_suite(0.2, 10, a.seed)?);
            }
            let failed = records.iter().filter(|r| !r.pass).count();
            emit(&json!({"checks": records.len(), "failed": failed, "records": records}), &a.out)?;
            return Ok(failed == 0);
        }
        Cmd::Reproduce(a) => {
            let target: Target = a.target.parse()?;
            let opts = ReproOptions {
                mu: a.mu,
                list: a.list,
                seed: a.seed,
                frames: a.frames,
                search_frames: a.search_frames,
                adaptive: a.adaptive,
                g: generator(&a.g)?,
                ..Default::default()
            };
            for path in reproduce::reproduce(target, &a.out, &opts)? {
                print_out(&path.display().to_string())?;
            }
        }
    }
    Ok(true)
}

fn exit_code(err: &anyhow::Error) -> (u8, &'static str) {
    match err.downcast_ref::<Error>() {
        Some(Error::Infeasible(_)) => (EXIT_INFEASIBLE, "infeasible"),
        Some(Error::Io(_)) => (EXIT_FAILED_CHECK, "io"),
        Some(_) => (EXIT_INVALID, "invalid_config"),
        None => (EXIT_FAILED_CHECK, "error"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILED_CHECK),
        Err(e) => {
            let (code, kind) = exit_code(&e);
            eprintln!("{}", json!({"error": kind, "message": format!("{e:#}")}));
            ExitCode::from(code)
        }
    }
}
