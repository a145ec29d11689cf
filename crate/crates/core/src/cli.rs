//! The `mplkit` command line.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::li_exact_in;
use crate::finite::li_truncated_mod;
use crate::index::{parse_args, Index, VarIndex};
use crate::number::parse_decimal;
use crate::numeric::{bits_for, li_series, mzv, mzv_sh, Real};
use crate::relation::find_relation;
use crate::suite::{run_suite, write_human, write_json_lines, RunConfig, Suite, Summary, DIGITS_ENV};
use crate::symmetric::{zeta_s_sh, zeta_s_star};
use crate::truncated::symbols_of;

#[derive(Parser, Debug)]
#[command(
    name = "mplkit",
    version,
    about = "Multiple polylogarithms and machine checks of their dualities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a verification suite, one report per check.
    Verify(VerifyArgs),
    /// Evaluate a single quantity.
    Compute(ComputeArgs),
    /// Search for an integer relation among decimal values.
    Relation(RelationArgs),
}

#[derive(Args, Debug, Default)]
pub struct OutputMode {
    /// JSON lines (the default).
    #[arg(long, conflicts_with = "human")]
    pub json: bool,
    /// Readable text.
    #[arg(long)]
    pub human: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// ss | star-expansion | genfun | finite-duality | fmzv-duality | mzv-duality |
    /// mpl-duality | smzv-duality | main | crosschecks
    pub suite: String,
    /// TOML file with RunConfig fields; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, env = DIGITS_ENV)]
    pub digits: Option<u32>,
    /// Prime window `lo..hi` (inclusive).
    #[arg(long)]
    pub primes: Option<String>,
    #[arg(long)]
    pub mod_exp: Option<u32>,
    #[arg(long)]
    pub max_weight: Option<u32>,
    #[arg(long)]
    pub max_depth: Option<usize>,
    #[arg(long)]
    pub max_n: Option<u64>,
    #[arg(long)]
    pub t_order: Option<usize>,
    #[arg(long)]
    pub height: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<i64>,
    /// Indices for the main suite, e.g. `"(1);(2)"`.
    #[arg(long)]
    pub indices: Option<String>,
    /// Arguments for the main suite, e.g. `"1;0"`.
    #[arg(long, allow_hyphen_values = true)]
    pub args: Option<String>,
    #[command(flatten)]
    pub mode: OutputMode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Mzv,
    MzvSh,
    Li,
    LiTruncated,
    Fmpl,
    ZetaS,
    Dual,
    Vee,
}

#[derive(Args, Debug)]
pub struct ComputeArgs {
    #[arg(value_enum)]
    pub kind: Kind,
    /// Index such as `"1,2"`.
    #[arg(long)]
    pub index: String,
    /// Comma-separated arguments; symbolic names are allowed for exact kinds.
    #[arg(long, allow_hyphen_values = true)]
    pub args: Option<String>,
    #[arg(long, env = DIGITS_ENV, default_value_t = 30)]
    pub digits: u32,
    /// Truncation bound `N` for li-truncated, or `p` is used for fmpl.
    #[arg(long, default_value_t = 10)]
    pub n: u64,
    #[arg(long, default_value_t = 5)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub mod_exp: u32,
    #[arg(long, default_value_t = 3)]
    pub t_order: usize,
    /// Star variant.
    #[arg(long)]
    pub star: bool,
    #[command(flatten)]
    pub mode: OutputMode,
}

#[derive(Args, Debug)]
pub struct RelationArgs {
    /// JSON array of decimal strings.
    #[arg(long)]
    pub values_file: PathBuf,
    #[arg(long, env = DIGITS_ENV, default_value_t = 60)]
    pub digits: u32,
    #[arg(long, default_value_t = 1_000_000)]
    pub height: u64,
}

/// Parse `argv` and run; returns the process exit status.
///
/// 0: success and no FAIL report; 1: some FAIL report; 2: usage, configuration or
/// evaluation error.
pub fn run<I, T>(argv: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Verify(a) => verify(a, out, err),
        Command::Compute(a) => compute(a, out).map(|_| 0),
        Command::Relation(a) => relation(a, out).map(|_| 0),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn parse_window(s: &str) -> Result<(u64, u64)> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| Error::Config(format!("prime window `{s}` is not of the form lo..hi")))?;
    let p = |x: &str| {
        x.trim()
            .trim_start_matches('=')
            .parse::<u64>()
            .map_err(|_| Error::Config(format!("bad prime bound `{x}`")))
    };
    Ok((p(lo)?, p(hi)?))
}

/// Merge flags over the optional config file.
pub fn config_from(a: &VerifyArgs) -> Result<RunConfig> {
    let file = match &a.config {
        Some(p) => RunConfig::from_toml(&fs::read_to_string(p)?)?,
        None => RunConfig::default(),
    };
    let (p_min, p_max) = match &a.primes {
        Some(w) => {
            let (lo, hi) = parse_window(w)?;
            (Some(lo), Some(hi))
        }
        None => (None, None),
    };
    let flags = RunConfig {
        digits: a.digits,
        p_min,
        p_max,
        mod_exp: a.mod_exp,
        max_weight: a.max_weight,
        max_depth: a.max_depth,
        max_n: a.max_n,
        t_order: a.t_order,
        height: a.height,
        workers: a.workers,
        output: a.output.clone(),
        alpha: a.alpha,
        indices: a.indices.clone(),
        args: a.args.clone(),
    };
    Ok(flags.or(&file))
}

fn verify(a: VerifyArgs, out: &mut impl Write, err: &mut impl Write) -> Result<i32> {
    let suite: Suite = a.suite.parse()?;
    let cfg = config_from(&a)?;
    let reports = run_suite(&cfg, suite)?;
    let summary = Summary::of(&reports);
    let write = |w: &mut dyn Write| -> Result<()> {
        let mut w = w;
        if a.mode.human {
            write_human(&mut w, &reports)
        } else {
            write_json_lines(&mut w, &reports)
        }
    };
    match &cfg.output {
        Some(path) => {
            let mut f = std::io::BufWriter::new(fs::File::create(path)?);
            write(&mut f)?;
            f.flush()?;
        }
        None => write(out)?,
    }
    writeln!(err, "{suite}: {} reports ({summary})", reports.len())?;
    Ok(summary.exit_code())
}

fn var_index(a: &ComputeArgs, symbolic_default: bool) -> Result<VarIndex> {
    let k: Index = a.index.parse()?;
    match &a.args {
        Some(s) => VarIndex::new(parse_args(s)?, k),
        None if symbolic_default => Ok(VarIndex::symbolic(k)),
        None => Ok(VarIndex::ones(k)),
    }
}

fn compute(a: ComputeArgs, out: &mut impl Write) -> Result<()> {
    let d = a.digits;
    let value: Value = match a.kind {
        Kind::Mzv => json!(mzv(&a.index.parse()?, d)?.to_decimal(d)),
        Kind::MzvSh => json!(mzv_sh(&a.index.parse()?, d)?.to_decimal(d)),
        Kind::Li => {
            let v = li_series(&var_index(&a, false)?, d)?;
            let (re, im) = v.value.to_decimal(d);
            if v.value.im.is_zero() {
                json!(re)
            } else {
                json!({ "re": re, "im": im })
            }
        }
        Kind::LiTruncated => {
            let v = var_index(&a, true)?;
            let vars = symbols_of(v.args());
            json!(li_exact_in(&vars, a.n, &v, a.star)?.to_string())
        }
        Kind::Fmpl => json!(li_truncated_mod(a.p, a.mod_exp, &var_index(&a, true)?, a.star)?.to_string()),
        Kind::ZetaS => {
            let k: Index = a.index.parse()?;
            let s = if a.star {
                zeta_s_star(&k, a.t_order, d)?
            } else {
                zeta_s_sh(&k, a.t_order, d)?
            };
            s.to_json(d)
        }
        Kind::Dual => json!(a.index.parse::<Index>()?.dagger()?.to_string()),
        Kind::Vee => json!(a.index.parse::<Index>()?.vee()?.to_string()),
    };
    if a.mode.json {
        let line = json!({ "kind": format!("{:?}", a.kind).to_lowercase(), "index": a.index, "value": value });
        writeln!(out, "{line}")?;
        return Ok(());
    }
    match value {
        Value::String(s) => writeln!(out, "{s}")?,
        Value::Array(items) => {
            for (n, item) in items.iter().enumerate() {
                writeln!(
                    out,
                    "t^{n}: {} (weight {})",
                    item["value"].as_str().unwrap_or(""),
                    item["weight"]
                )?;
            }
        }
        other => writeln!(
            out,
            "{} + {} i",
            other["re"].as_str().unwrap_or(""),
            other["im"].as_str().unwrap_or("")
        )?,
    }
    Ok(())
}

fn relation(a: RelationArgs, out: &mut impl Write) -> Result<()> {
    let text = fs::read_to_string(&a.values_file)?;
    let raw: Vec<Value> = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let bits = bits_for(a.digits);
    let values = raw
        .iter()
        .map(|v| {
            let s = match v {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                other => return Err(Error::Parse(format!("not a number: {other}"))),
            };
            Ok(Real::from_rational(&parse_decimal(&s)?, bits))
        })
        .collect::<Result<Vec<_>>>()?;
    let found = find_relation(&values, a.digits, a.height)?;
    let body = match found {
        Some(c) => {
            let mut acc = Real::zero(bits);
            for (ci, vi) in c.iter().zip(&values) {
                acc = acc.add(&vi.mul(&Real::from_rational(
                    &num_rational::BigRational::from_integer(ci.clone()),
                    bits,
                )));
            }
            json!({
                "status": "FOUND",
                "relation": c.iter().map(BigInt::to_string).collect::<Vec<_>>(),
                "residual": acc.abs().to_decimal(a.digits + 5),
                "digits": a.digits,
                "height": a.height,
            })
        }
        None => json!({ "status": "NOT-FOUND", "digits": a.digits, "height": a.height }),
    };
    writeln!(out, "{body}")?;
    Ok(())
}
