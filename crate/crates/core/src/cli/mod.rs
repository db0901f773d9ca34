//! Batch command-line front end.
//!
//! Exit codes: 0 on success, 2 for configuration errors (bad flags, config
//! file, overrides or schema), 3 for failures during a run.

mod svg;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;
use thiserror::Error;

use crate::chanmodel::realize_channel;
use crate::harness::{
    noise_power, paired_compare, run_sweep, to_csv, Arm, Comparison, CrcChoice, HarnessError,
    Series, SeriesMeta, SimConfig, GAP_TARGETS,
};
use crate::polar::PolarCode;
use crate::rng::{Purpose, StreamKey};

pub use svg::render as render_svg;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        if e.is_config() {
            CliError::Config(e.to_string())
        } else {
            CliError::Runtime(e.to_string())
        }
    }
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "thzlink",
    version,
    about = "Link-level BLER simulation of multicarrier THz links"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// JSON simulation config.
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Override a config value by dotted path, e.g. decoder.list_size=8.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Replace the config seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; standard output if absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep the SNR grid for the configured regime and decoder.
    Simulate {
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run several regimes on common realizations and report SNR gaps.
    Compare {
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print the frozen set of a CRC-aided polar code.
    ConstructCode {
        #[arg(long)]
        n: usize,
        /// Information length including CRC bits.
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = CrcArg::Nr11)]
        crc: CrcArg,
    },
    /// Draw channel realizations and print them per subcarrier as CSV.
    SampleChannel {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, default_value_t = 1)]
        frames: u64,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Quick built-in consistency checks.
    Selftest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CrcArg {
    Nr11,
    Test4,
    None,
}

impl From<CrcArg> for CrcChoice {
    fn from(c: CrcArg) -> Self {
        match c {
            CrcArg::Nr11 => CrcChoice::Nr11,
            CrcArg::Test4 => CrcChoice::Test4,
            CrcArg::None => CrcChoice::None,
        }
    }
}

// Dotted paths of every key in a JSON object, parents before children.
fn key_paths(v: &Value, prefix: &str, out: &mut Vec<String>) {
    if let Value::Object(map) = v {
        for (k, child) in map {
            let p = if prefix.is_empty() {
                k.clone()
            } else {
                format!("{prefix}.{k}")
            };
            out.push(p.clone());
            key_paths(child, &p, out);
        }
    }
}

fn nearest<'a>(key: &str, candidates: &'a [String]) -> Option<&'a str> {
    candidates
        .iter()
        .min_by_key(|c| strsim::levenshtein(key, c))
        .map(String::as_str)
}

/// Applies `KEY=VALUE` overrides to a config tree. The value is parsed as
/// JSON and falls back to a plain string. Every key must already exist.
pub fn apply_overrides(root: &mut Value, overrides: &[String]) -> Result<(), Vec<String>> {
    let mut known = Vec::new();
    key_paths(root, "", &mut known);
    let mut errors = Vec::new();
    for item in overrides {
        let Some((key, raw)) = item.split_once('=') else {
            errors.push(format!("override `{item}` is not of the form KEY=VALUE"));
            continue;
        };
        let key = key.trim();
        let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
        let pointer: String = key
            .split('.')
            .map(|part| format!("/{}", part.replace('~', "~0").replace('/', "~1")))
            .collect();
        match root.pointer_mut(&pointer) {
            Some(node) => *node = value,
            None => {
                let hint = nearest(key, &known)
                    .map(|n| format!("; did you mean `{n}`?"))
                    .unwrap_or_default();
                errors.push(format!("unknown config key `{key}`{hint}"));
            }
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

/// Loads, overrides and validates a config. All problems are reported
/// together.
pub fn resolve_config(args: &ConfigArgs) -> Result<SimConfig, CliError> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", args.config.display())))?;
    resolve_config_str(&text, &args.overrides, args.seed)
}

pub fn resolve_config_str(
    text: &str,
    overrides: &[String],
    seed: Option<u64>,
) -> Result<SimConfig, CliError> {
    let parsed: SimConfig =
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))?;
    // round-trip through the typed config so defaults are visible to overrides
    let mut tree = serde_json::to_value(&parsed).map_err(runtime)?;
    apply_overrides(&mut tree, overrides).map_err(|errs| CliError::Config(errs.join("\n")))?;
    let mut cfg: SimConfig = serde_json::from_value(tree)
        .map_err(|e| CliError::Config(format!("after overrides: {e}")))?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let problems = cfg.problems();
    if !problems.is_empty() {
        return Err(HarnessError::Config(problems).into());
    }
    Ok(cfg)
}

/// Canonical JSON form of a resolved config.
pub fn canonical_json(cfg: &SimConfig) -> String {
    serde_json::to_string_pretty(cfg).expect("config serializes")
}

fn write_output(path: Option<&Path>, body: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, body)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", p.display()))),
        None => stdout.write_all(body.as_bytes()).map_err(runtime),
    }
}

/// Renders series in the requested format. Empty input is an error.
pub fn emit_results(series: &[Series], format: Format) -> Result<String, CliError> {
    if series.iter().all(|s| s.points.is_empty()) {
        return Err(CliError::Runtime("no results to write".into()));
    }
    Ok(match format {
        Format::Csv => to_csv(series),
        Format::Svg => {
            svg::render(series).ok_or_else(|| CliError::Runtime("no results to plot".into()))?
        }
    })
}

fn comparison_series(cfg: &SimConfig, c: &Comparison) -> Vec<Series> {
    c.arms
        .iter()
        .zip(&c.points)
        .map(|(arm, pts)| Series {
            meta: SeriesMeta::new(cfg, arm),
            points: pts.clone(),
        })
        .collect()
}

fn gap_report(c: &Comparison) -> String {
    let mut out = String::new();
    for (a, arm) in c.arms.iter().enumerate().skip(1) {
        for t in GAP_TARGETS {
            let gap = c
                .delta_db(a, t)
                .map_or_else(|| "n/a".to_string(), |d| format!("{d:.2} dB"));
            out.push_str(&format!(
                "{} vs {} at BLER {t:e}: {gap}\n",
                arm.label(),
                c.arms[0].label()
            ));
        }
    }
    out
}

fn sample_channel(cfg: &SimConfig, frames: u64) -> Result<String, CliError> {
    let sigma2 = noise_power(cfg.temperature_k, cfg.channel.path.bandwidth_hz)?;
    let mut out = String::from("frame,subcarrier,freq_hz,path_gain,fading_amp,re,im\n");
    for f in 0..frames {
        let mut rng = StreamKey::new(cfg.seed, 0, f, Purpose::Channel).rng();
        let chan = realize_channel(&cfg.channel.path, &cfg.channel.fading, sigma2, &mut rng)
            .map_err(runtime)?;
        for l in 0..chan.len() {
            let freq = cfg.channel.path.subcarrier_freq(l + 1).map_err(runtime)?;
            out.push_str(&format!(
                "{f},{},{freq},{},{},{},{}\n",
                l + 1,
                chan.path_gain[l],
                chan.fading_amp[l],
                chan.gains[l].re,
                chan.gains[l].im
            ));
        }
    }
    Ok(out)
}

/// Runs one invocation. Help and version requests print and succeed.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                return Err(CliError::Config(e.to_string()));
            }
            write!(stdout, "{e}").map_err(runtime)?;
            return Ok(());
        }
    };
    match cli.command {
        Command::Simulate { config, output } => {
            let cfg = resolve_config(&config)?;
            writeln!(stdout, "{}", canonical_json(&cfg)).map_err(runtime)?;
            let points = run_sweep(&cfg)?;
            let arm = Arm {
                regime: cfg.regime,
                decoder: cfg.decoder,
            };
            let series = [Series {
                meta: SeriesMeta::new(&cfg, &arm),
                points,
            }];
            let body = emit_results(&series, output.format)?;
            write_output(output.out.as_deref(), &body, stdout)
        }
        Command::Compare { config, output } => {
            let cfg = resolve_config(&config)?;
            writeln!(stdout, "{}", canonical_json(&cfg)).map_err(runtime)?;
            let c = paired_compare(&cfg, &cfg.regimes_to_compare())?;
            stderr
                .write_all(gap_report(&c).as_bytes())
                .map_err(runtime)?;
            let body = emit_results(&comparison_series(&cfg, &c), output.format)?;
            write_output(output.out.as_deref(), &body, stdout)
        }
        Command::ConstructCode { n, k, crc } => {
            let code = PolarCode::construct(n, k, CrcChoice::from(crc).crc())
                .map_err(|e| CliError::Config(e.to_string()))?;
            let info = serde_json::json!({
                "n": n,
                "k": k,
                "crc": code.crc().name(),
                "frozen_mask_hex": code.frozen_mask_hex(),
                "info_positions": code.info_positions(),
            });
            writeln!(
                stdout,
                "{}",
                serde_json::to_string_pretty(&info).map_err(runtime)?
            )
            .map_err(runtime)
        }
        Command::SampleChannel {
            config,
            frames,
            out,
        } => {
            let cfg = resolve_config(&config)?;
            let body = sample_channel(&cfg, frames)?;
            write_output(out.as_deref(), &body, stdout)
        }
        Command::Selftest => {
            let mut failed = 0;
            for c in crate::selftest::run_all() {
                match &c.outcome {
                    Ok(()) => writeln!(stdout, "PASS  {}", c.name),
                    Err(m) => {
                        failed += 1;
                        writeln!(stdout, "FAIL  {}: {m}", c.name)
                    }
                }
                .map_err(runtime)?;
            }
            if failed > 0 {
                Err(CliError::Runtime(format!(
                    "{failed} self-test check(s) failed"
                )))
            } else {
                Ok(())
            }
        }
    }
}
