//! Run configuration and the named verification suites.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{check_generating_function, check_ss_identity, check_star_nonstar};
use crate::finite::{check_fmpl_duality, check_fmzv_duality, primes_in, sweep_primes};
use crate::index::{parse_args, Arg, Index, VarIndex};
use crate::number::CRational;
use crate::numeric::{self, below, check_mpl_duality, check_mzv_duality, MplDualityInstance};
use crate::report::{Status, VerificationReport};
use crate::symmetric::{check_main_theorem, check_smzv_duality};
use crate::word::{shuffle, Letter, Word};

/// Environment variable supplying the default precision in decimal digits.
pub const DIGITS_ENV: &str = "MPLKIT_DIGITS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Ss,
    StarExpansion,
    Genfun,
    FiniteDuality,
    FmzvDuality,
    MzvDuality,
    MplDuality,
    SmzvDuality,
    Main,
    Crosschecks,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Ss,
        Suite::StarExpansion,
        Suite::Genfun,
        Suite::FiniteDuality,
        Suite::FmzvDuality,
        Suite::MzvDuality,
        Suite::MplDuality,
        Suite::SmzvDuality,
        Suite::Main,
        Suite::Crosschecks,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Ss => "ss",
            Suite::StarExpansion => "star-expansion",
            Suite::Genfun => "genfun",
            Suite::FiniteDuality => "finite-duality",
            Suite::FmzvDuality => "fmzv-duality",
            Suite::MzvDuality => "mzv-duality",
            Suite::MplDuality => "mpl-duality",
            Suite::SmzvDuality => "smzv-duality",
            Suite::Main => "main",
            Suite::Crosschecks => "crosschecks",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Settings for a suite run. Unset fields fall back to per-suite defaults.
///
/// Also the schema of the TOML config file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub digits: Option<u32>,
    pub p_min: Option<u64>,
    pub p_max: Option<u64>,
    pub mod_exp: Option<u32>,
    pub max_weight: Option<u32>,
    pub max_depth: Option<usize>,
    pub max_n: Option<u64>,
    pub t_order: Option<usize>,
    pub height: Option<u64>,
    pub workers: Option<usize>,
    pub output: Option<PathBuf>,
    pub alpha: Option<i64>,
    /// `"(1);(2)"`: explicit indices for the main suite.
    pub indices: Option<String>,
    /// `"1;0"`: explicit arguments for the main suite.
    pub args: Option<String>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<RunConfig> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Fill unset fields from `other`.
    pub fn or(self, other: &RunConfig) -> RunConfig {
        RunConfig {
            digits: self.digits.or(other.digits),
            p_min: self.p_min.or(other.p_min),
            p_max: self.p_max.or(other.p_max),
            mod_exp: self.mod_exp.or(other.mod_exp),
            max_weight: self.max_weight.or(other.max_weight),
            max_depth: self.max_depth.or(other.max_depth),
            max_n: self.max_n.or(other.max_n),
            t_order: self.t_order.or(other.t_order),
            height: self.height.or(other.height),
            workers: self.workers.or(other.workers),
            output: self.output.or(other.output.clone()),
            alpha: self.alpha.or(other.alpha),
            indices: self.indices.or(other.indices.clone()),
            args: self.args.or(other.args.clone()),
        }
    }

    /// Concrete settings for `suite`.
    pub fn resolve(&self, suite: Suite) -> Result<Settings> {
        let env_digits = match std::env::var(DIGITS_ENV) {
            Ok(s) => Some(
                s.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Config(format!("{DIGITS_ENV}={s} is not a number")))?,
            ),
            Err(_) => None,
        };
        let (weight, depth, n, digits, m) = match suite {
            Suite::Ss => (6, 3, 12, 40, 2),
            Suite::StarExpansion => (5, 5, 20, 40, 2),
            Suite::Genfun => (5, 5, 15, 40, 2),
            Suite::FiniteDuality => (4, 4, 0, 40, 2),
            Suite::FmzvDuality => (4, 4, 0, 40, 3),
            Suite::MzvDuality => (8, 8, 0, 40, 2),
            Suite::MplDuality => (4, 4, 0, 40, 2),
            Suite::SmzvDuality => (5, 5, 0, 60, 2),
            Suite::Main => (3, 3, 0, 60, 2),
            Suite::Crosschecks => (6, 6, 0, 40, 2),
        };
        let s = Settings {
            digits: self.digits.or(env_digits).unwrap_or(digits),
            p_min: self.p_min.unwrap_or(11),
            p_max: self.p_max.unwrap_or(101),
            mod_exp: self.mod_exp.unwrap_or(m),
            max_weight: self.max_weight.unwrap_or(weight),
            max_depth: self.max_depth.unwrap_or(depth),
            max_n: self.max_n.unwrap_or(n),
            t_order: self.t_order.unwrap_or(3),
            height: self.height.unwrap_or(1_000_000),
            workers: self.workers.unwrap_or(0),
            alpha: self.alpha.unwrap_or(0),
            explicit: match (&self.indices, &self.args) {
                (Some(i), Some(a)) => Some((parse_index_list(i)?, parse_arg_list(a)?)),
                (None, None) => None,
                _ => return Err(Error::Config("indices and args must be given together".into())),
            },
        };
        s.validate()?;
        Ok(s)
    }
}

/// `"(1);(2,1)"` into indices.
pub fn parse_index_list(s: &str) -> Result<Vec<Index>> {
    s.split(';').map(|p| p.parse()).collect()
}

/// `"1;1/2"` into arguments.
pub fn parse_arg_list(s: &str) -> Result<Vec<Arg>> {
    s.split(';').map(|p| p.parse()).collect()
}

/// A [`RunConfig`] with every field decided.
#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub digits: u32,
    pub p_min: u64,
    pub p_max: u64,
    pub mod_exp: u32,
    pub max_weight: u32,
    pub max_depth: usize,
    pub max_n: u64,
    pub t_order: usize,
    pub height: u64,
    /// 0 selects the number of available cores.
    pub workers: usize,
    pub alpha: i64,
    pub explicit: Option<(Vec<Index>, Vec<Arg>)>,
}

impl Settings {
    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.p_min < 3 {
            return bad("p_min must be at least 3");
        }
        if self.p_max < self.p_min {
            return bad("p_max must be at least p_min");
        }
        if self.digits < 20 {
            return bad("digits must be at least 20");
        }
        if self.mod_exp == 0 || self.t_order == 0 || self.max_weight == 0 || self.max_depth == 0 {
            return bad("mod_exp, t_order, max_weight and max_depth must be positive");
        }
        if self.height == 0 {
            return bad("height must be positive");
        }
        Ok(())
    }
}

/// Run a suite on a pool of `settings.workers` threads. Reports come back in the
/// canonical order of the suite's case list, independent of scheduling.
pub fn run_suite(cfg: &RunConfig, suite: Suite) -> Result<Vec<VerificationReport>> {
    let s = cfg.resolve(suite)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(s.workers)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    pool.install(|| dispatch(&s, suite))
}

fn dispatch(s: &Settings, suite: Suite) -> Result<Vec<VerificationReport>> {
    match suite {
        Suite::Ss => par(ss_cases(s), |(k, n)| check_ss_identity(k, *n)),
        Suite::StarExpansion => par(star_cases(s), |(v, n)| check_star_nonstar(*n, v)),
        Suite::Genfun => par(genfun_samples(), |v| check_generating_function(v, s.max_n as usize)),
        Suite::FiniteDuality => finite_duality(s),
        Suite::FmzvDuality => fmzv_duality(s),
        Suite::MzvDuality => par(
            (2..=s.max_weight).flat_map(Index::admissible_of_weight).collect(),
            |k| check_mzv_duality(k, s.digits),
        ),
        Suite::MplDuality => par(mpl_instances(), |i| check_mpl_duality(i, s.digits)),
        Suite::SmzvDuality => par(Index::up_to(s.max_weight, s.max_depth), |k| {
            check_smzv_duality(k, s.t_order, s.digits, s.height)
        }),
        Suite::Main => par(main_cases(s), |(ks, zs)| {
            check_main_theorem(s.alpha, ks, zs, s.t_order, s.digits, s.height)
        }),
        Suite::Crosschecks => crosschecks(s),
    }
}

fn par<T: Sync>(cases: Vec<T>, f: impl Fn(&T) -> Result<VerificationReport> + Sync) -> Result<Vec<VerificationReport>> {
    cases.par_iter().map(&f).collect()
}

fn ss_cases(s: &Settings) -> Vec<(Index, u64)> {
    let mut out = Vec::new();
    for k in Index::up_to(s.max_weight, s.max_depth) {
        for n in 1..=s.max_n {
            out.push((k.clone(), n));
        }
    }
    out
}

fn star_cases(s: &Settings) -> Vec<(VarIndex, u64)> {
    let mut out = Vec::new();
    for k in Index::up_to(s.max_weight, s.max_depth) {
        let v = VarIndex::symbolic(k);
        for n in 1..=s.max_n {
            out.push((v.clone(), n));
        }
    }
    out
}

fn var_index(args: &str, k: &str) -> VarIndex {
    VarIndex::new(
        parse_args(args).expect("fixed sample"),
        k.parse().expect("fixed sample"),
    )
    .expect("fixed sample")
}

/// The ten sample points of the generating-function check.
pub fn genfun_samples() -> Vec<VarIndex> {
    [
        ("1/2", "1"),
        ("-1", "2"),
        ("3", "1"),
        ("1/5", "3"),
        ("2,1/3", "1,1"),
        ("1,1", "1,2"),
        ("1/2,-1", "2,1"),
        ("2,-2", "2,2"),
        ("1,1,1", "1,1,1"),
        ("-1/2,2,1", "1,2,1"),
    ]
    .iter()
    .map(|(a, k)| var_index(a, k))
    .collect()
}

/// Cases of the finite MPL duality: symbolic arguments for `d <= 2` at weight at most 3
/// and `M = min(mod_exp, 2)`, and numeric arguments for `d = 1` up to the full weight.
pub fn finite_cases(s: &Settings) -> Vec<(u32, Vec<Index>, Vec<Arg>)> {
    let sym_weight = s.max_weight.min(3);
    let sym_m = s.mod_exp.min(2);
    let mut out = Vec::new();
    for k in Index::up_to(sym_weight, s.max_depth) {
        out.push((sym_m, vec![k], vec![Arg::sym("z1")]));
    }
    for w in 2..=sym_weight {
        for w1 in 1..w {
            for k1 in Index::all_of_weight(w1) {
                for k2 in Index::all_of_weight(w - w1) {
                    out.push((sym_m, vec![k1.clone(), k2], vec![Arg::sym("z1"), Arg::sym("z2")]));
                }
            }
        }
    }
    for k in Index::up_to(s.max_weight, s.max_depth) {
        for z in ["-1", "2", "1/3"] {
            out.push((s.mod_exp, vec![k.clone()], vec![z.parse().expect("fixed sample")]));
        }
    }
    out
}

fn finite_duality(s: &Settings) -> Result<Vec<VerificationReport>> {
    let primes = odd_primes(s);
    par(finite_cases(s), |(m, ks, zs)| {
        let params = json!({
            "M": m,
            "indices": ks.iter().map(|k| k.to_string()).collect::<Vec<_>>(),
            "args": zs.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
        });
        sweep_primes("finite-duality", params, &primes, |p| check_fmpl_duality(p, *m, ks, zs))
    })
}

fn fmzv_duality(s: &Settings) -> Result<Vec<VerificationReport>> {
    let primes = odd_primes(s);
    let mut cases = Vec::new();
    for m in 1..=s.mod_exp {
        for k in Index::up_to(s.max_weight, s.max_depth) {
            cases.push((m, k));
        }
    }
    par(cases, |(m, k)| {
        let params = json!({ "M": m, "index": k.to_string() });
        sweep_primes("fmzv-duality", params, &primes, |p| check_fmzv_duality(p, *m, k))
    })
}

fn odd_primes(s: &Settings) -> Vec<u64> {
    primes_in(s.p_min, s.p_max).into_iter().filter(|&p| p != 2).collect()
}

fn instance(l: &[&str], a: &[u32], b: &[u32], w: &[&str]) -> MplDualityInstance {
    MplDualityInstance {
        d: l.len(),
        l: l.iter().map(|x| x.parse().expect("fixed sample")).collect(),
        a: a.to_vec(),
        b: b.to_vec(),
        w: w.iter().map(|x| CRational::parse(x).expect("fixed sample")).collect(),
    }
}

/// The closed-form case `d = 2, w_1 = -1` (both sides `-log 2`) followed by
/// instances with complex points and nonempty inner indices.
pub fn mpl_instances() -> Vec<MplDualityInstance> {
    vec![
        instance(&["-", "-"], &[1], &[1], &["-1"]),
        instance(&["2", "-"], &[1], &[2], &["-1/2+1/2i"]),
        instance(&["-", "2"], &[1], &[1], &["1/3"]),
        instance(&["2", "2"], &[2], &[1], &["-1/2"]),
        instance(&["1,2", "-"], &[1], &[1], &["-1/2+1/2i"]),
        instance(&["-", "2", "-"], &[1, 1], &[2, 2], &["-1/2+1/2i", "-1/3"]),
        instance(&["3", "-"], &[1], &[2], &["1/2i"]),
        instance(&["1,2"], &[], &[], &[]),
    ]
}

/// Either the configured explicit case, or every `d <= 2` combination over `z ∈ {0, 1}`
/// with each index of weight at most `max_weight` (`d = 2` limited to weight 2 per index).
pub fn main_cases(s: &Settings) -> Vec<(Vec<Index>, Vec<Arg>)> {
    if let Some((ks, zs)) = &s.explicit {
        return vec![(ks.clone(), zs.clone())];
    }
    let zs = [Arg::int(0), Arg::one()];
    let mut out = Vec::new();
    for k in Index::up_to(s.max_weight, s.max_depth) {
        for z in &zs {
            out.push((vec![k.clone()], vec![z.clone()]));
        }
    }
    let small = Index::up_to(s.max_weight.min(2), s.max_depth);
    for k1 in &small {
        for k2 in &small {
            for z1 in &zs {
                for z2 in &zs {
                    out.push((vec![k1.clone(), k2.clone()], vec![z1.clone(), z2.clone()]));
                }
            }
        }
    }
    out
}

/// Interior points where the direct series, path splitting and the ODE all apply.
pub fn interior_points() -> Vec<VarIndex> {
    [
        ("1/2", "2"),
        ("-1/2", "3"),
        ("1/3,1/2", "1,2"),
        ("1/3+1/3i", "2"),
        ("1/4,-1/3,1/2", "1,1,2"),
        ("1/2i", "1"),
        ("-1/3,1/4", "2,1"),
    ]
    .iter()
    .map(|(a, k)| var_index(a, k))
    .collect()
}

fn agree(check: &str, params: Value, values: &[(&str, numeric::Complex)], exponent: i32) -> VerificationReport {
    let mut worst = f64::NEG_INFINITY;
    let mut ok = true;
    let mut pairs = Vec::new();
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            let d = values[i].1.sub(&values[j].1);
            ok &= below(&d.re, exponent) && below(&d.im, exponent);
            worst = worst.max(d.log2_abs() / std::f64::consts::LOG2_10);
            pairs.push(json!({ "pair": [values[i].0, values[j].0], "log10_diff": format!("{:.1}", d.log2_abs() / std::f64::consts::LOG2_10) }));
        }
    }
    let residual = if worst.is_finite() {
        format!("1e{:.0}", worst.ceil())
    } else {
        "0".into()
    };
    let r = if ok {
        VerificationReport::pass(check, params)
    } else {
        let shown: Vec<Value> = values
            .iter()
            .map(|(n, v)| {
                let (re, im) = v.to_decimal(45);
                json!({ "method": n, "re": re, "im": im })
            })
            .collect();
        VerificationReport::fail(check, params, Value::Array(shown))
    };
    r.with_residual(residual).with_certificate(Value::Array(pairs))
}

fn method_agreement_mzv(k: &Index, digits: u32) -> Result<VerificationReport> {
    let start = std::time::Instant::now();
    let w = VarIndex::ones(k.clone()).to_word()?;
    let h = numeric::holder(&w, digits)?.value;
    let o = numeric::chen_ode(&w, digits)?.value;
    let params = json!({ "kind": "mzv-word", "index": k.to_string(), "word": w.to_string(), "digits": digits });
    let mut r = agree(
        "method-agreement",
        params,
        &[("holder", h), ("chen_ode", o)],
        -(digits as i32) + 5,
    );
    r.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(r)
}

fn method_agreement_point(v: &VarIndex, digits: u32) -> Result<VerificationReport> {
    let start = std::time::Instant::now();
    let w = v.to_word()?;
    let bits = numeric::bits_for(digits);
    let zs = v.numeric_args()?;
    let series = numeric::series::li_direct(&zs, v.index().parts(), bits, numeric::target_bits(digits))?.0;
    let sign = |c: numeric::Complex| if v.depth() % 2 == 1 { c.neg() } else { c };
    let h = sign(numeric::holder(&w, digits)?.value);
    let o = sign(numeric::chen_ode(&w, digits)?.value);
    let params = json!({ "kind": "interior-point", "point": v.to_string(), "digits": digits });
    let mut r = agree(
        "method-agreement",
        params,
        &[("series", series), ("holder", h), ("chen_ode", o)],
        -(digits as i32) + 5,
    );
    r.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(r)
}

/// Random convergent words over letters off the path: never starting with 0 or ending with 1,
/// so that every shuffle of two of them is convergent as well.
pub fn random_word_pairs(count: usize, seed: u64) -> Vec<(Word, Word)> {
    let pool: Vec<Letter> = ["0", "1", "-1", "2", "1+i", "-1/2", "1/2-1/2i"]
        .iter()
        .map(|s| s.parse().expect("fixed letter"))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let word = |rng: &mut ChaCha8Rng| loop {
        let len = rng.gen_range(1..=3);
        let letters: Vec<Letter> = (0..len).map(|_| pool.choose(rng).expect("nonempty").clone()).collect();
        if !letters[0].is_zero() && !letters[len - 1].is_one() {
            return Word::new(letters);
        }
    };
    (0..count).map(|_| (word(&mut rng), word(&mut rng))).collect()
}

fn shuffle_law(u: &Word, v: &Word, digits: u32) -> Result<VerificationReport> {
    let start = std::time::Instant::now();
    let iu = numeric::holder(u, digits)?.value;
    let iv = numeric::holder(v, digits)?.value;
    let bits = numeric::bits_for(digits);
    let mut rhs = numeric::Complex::zero(bits);
    for (w, q) in shuffle(u, v).iter() {
        let c = numeric::holder(w, digits)?.value;
        rhs = rhs.add(&c.mul_real(&numeric::Real::from_rational(q, bits)));
    }
    let params = json!({ "u": u.to_string(), "v": v.to_string(), "digits": digits });
    let mut r = agree(
        "shuffle-product",
        params,
        &[("product", iu.mul(&iv)), ("shuffle", rhs)],
        -(digits as i32) + 8,
    );
    r.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(r)
}

/// Dagger and vee are weight-preserving involutions and the word dual realizes dagger,
/// for every index of weight `w`.
pub fn involutions(w: u32) -> Result<VerificationReport> {
    let start = std::time::Instant::now();
    let mut checked = 0usize;
    let mut witness = None;
    for k in Index::all_of_weight(w) {
        let v = k.vee()?;
        if v.weight() != w || v.vee()? != k {
            witness.get_or_insert(json!({ "index": k.to_string(), "map": "vee", "image": v.to_string() }));
        }
        if k.is_admissible() {
            let d = k.dagger()?;
            let word_ok = VarIndex::ones(d.clone()).to_word()? == VarIndex::ones(k.clone()).to_word()?.dual();
            if d.weight() != w || d.dagger()? != k || !word_ok {
                witness.get_or_insert(json!({ "index": k.to_string(), "map": "dagger", "image": d.to_string() }));
            }
        }
        checked += 1;
    }
    let params = json!({ "weight": w });
    let mut r = match witness {
        None => VerificationReport::pass("involutions", params),
        Some(wt) => VerificationReport::fail("involutions", params, wt),
    };
    r = r.with_note(format!("{checked} indices"));
    r.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(r)
}

fn crosschecks(s: &Settings) -> Result<Vec<VerificationReport>> {
    let d = s.digits;
    let mut out = par(
        (2..=s.max_weight).flat_map(Index::admissible_of_weight).collect(),
        |k| method_agreement_mzv(k, d),
    )?;
    out.extend(par(interior_points(), |v| method_agreement_point(v, d))?);
    out.extend(par(random_word_pairs(20, 2024), |(u, v)| shuffle_law(u, v, d))?);
    out.extend(par((1..=10).collect(), |&w| involutions(w))?);
    Ok(out)
}

/// Count of reports by status.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub counts: BTreeMap<String, usize>,
}

impl Summary {
    pub fn of(reports: &[VerificationReport]) -> Summary {
        let mut counts = BTreeMap::new();
        for r in reports {
            *counts.entry(r.status.as_str().to_string()).or_insert(0) += 1;
        }
        Summary { counts }
    }

    pub fn failures(&self) -> usize {
        self.counts.get(Status::Fail.as_str()).copied().unwrap_or(0)
    }

    /// Process exit status: 0 exactly when no report failed.
    pub fn exit_code(&self) -> i32 {
        if self.failures() == 0 {
            0
        } else {
            1
        }
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(|(k, v)| format!("{k}: {v}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// One JSON object per line.
pub fn write_json_lines(out: &mut impl Write, reports: &[VerificationReport]) -> Result<()> {
    for r in reports {
        let line = serde_json::to_string(r).map_err(|e| Error::Io(e.to_string()))?;
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Aligned one-line-per-report text.
pub fn write_human(out: &mut impl Write, reports: &[VerificationReport]) -> Result<()> {
    for r in reports {
        let params = serde_json::to_string(&r.params).map_err(|e| Error::Io(e.to_string()))?;
        let residual = r.residual.as_deref().unwrap_or("-");
        writeln!(
            out,
            "{:<18} {:<16} residual {:<10} {params}",
            r.status.as_str(),
            r.check,
            residual
        )?;
        if let Some(n) = &r.note {
            writeln!(out, "{:<18} note: {n}", "")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!(matches!("nope".parse::<Suite>(), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn config_validation() {
        let bad = RunConfig {
            p_min: Some(2),
            ..Default::default()
        };
        assert!(matches!(bad.resolve(Suite::FiniteDuality), Err(Error::Config(_))));
        let bad = RunConfig {
            digits: Some(10),
            ..Default::default()
        };
        assert!(matches!(bad.resolve(Suite::MzvDuality), Err(Error::Config(_))));
        let cfg = RunConfig::from_toml("digits = 30\nmax_weight = 4\n").unwrap();
        let s = cfg.resolve(Suite::MzvDuality).unwrap();
        assert_eq!((s.digits, s.max_weight), (30, 4));
        assert!(RunConfig::from_toml("colour = 3").is_err());
    }

    #[test]
    fn explicit_main_case() {
        let cfg = RunConfig {
            indices: Some("(1);(2)".into()),
            args: Some("1;1".into()),
            ..Default::default()
        };
        let s = cfg.resolve(Suite::Main).unwrap();
        let cases = main_cases(&s);
        assert_eq!(cases.len(), 1);
        assert_eq!(cases[0].0, vec![Index::from_slice(&[1]), Index::from_slice(&[2])]);
    }

    #[test]
    fn word_pairs_are_deterministic_and_convergent() {
        let a = random_word_pairs(20, 7);
        assert_eq!(a, random_word_pairs(20, 7));
        for (u, v) in &a {
            for (w, _) in shuffle(u, v).iter() {
                assert!(w.is_convergent(), "{w}");
            }
        }
    }

    #[test]
    fn involutions_low_weight() {
        for w in 1..=6 {
            assert!(involutions(w).unwrap().is_pass());
        }
    }
}
