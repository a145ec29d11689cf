//! High-precision values of convergent multiple polylogarithms and MZVs,
//! shuffle-regularized MZVs, and numerical checks of the MPL duality.

pub mod fixed;
pub mod holder;
pub mod ode;
pub mod series;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::index::{Arg, Index, VarIndex};
use crate::number::CRational;
use crate::report::VerificationReport;
use crate::word::{shuffle_regularize, Word};

pub use fixed::{bits_for, Complex, Real, GUARD_DIGITS};

/// Truncation target in bits for `digits` decimal digits (five spare digits).
pub fn target_bits(digits: u32) -> u32 {
    ((digits + 5) as f64 * std::f64::consts::LOG2_10).ceil() as u32
}

/// A numerical value with an upper estimate for its absolute error.
#[derive(Clone, Debug, PartialEq)]
pub struct Approx {
    pub value: Complex,
    pub digits: u32,
    /// `log10` of the absolute error bound.
    pub err_log10: f64,
}

impl Approx {
    fn new(value: Complex, digits: u32) -> Approx {
        Approx {
            value,
            digits,
            err_log10: -(digits as f64) - 3.0,
        }
    }

    pub fn re(&self) -> &Real {
        &self.value.re
    }

    pub fn to_json(&self) -> Value {
        let (re, im) = self.value.to_decimal(self.digits);
        json!({ "re": re, "im": im, "error_bound": format!("1e{}", self.err_log10.ceil() as i64) })
    }
}

fn li_iterated(v: &VarIndex, digits: u32) -> Result<Complex> {
    let w = v.to_word()?;
    let c = holder::holder_bits(&w, bits_for(digits), target_bits(digits))?;
    Ok(if v.depth() % 2 == 1 { c.neg() } else { c })
}

/// `Li(z; k)` for a series-convergent `(z; k)` with numeric arguments.
///
/// Inner points are summed directly; points near or on the unit circle go through
/// the iterated-integral representation, whichever converges faster.
pub fn li_series(v: &VarIndex, digits: u32) -> Result<Approx> {
    let zs = v.numeric_args()?;
    if v.depth() == 0 {
        return Ok(Approx::new(Complex::one(bits_for(digits)), digits));
    }
    if zs.iter().any(|z| z.is_zero()) {
        return Ok(Approx::new(Complex::zero(bits_for(digits)), digits));
    }
    if !v.is_series_convergent() {
        return Err(Error::NotConvergent(v.to_string()));
    }
    let rho = zs.iter().map(|z| z.abs_f64()).fold(0.0, f64::max);
    let letters: Vec<CRational> = zs.iter().map(|z| z.inv().expect("nonzero")).collect();
    let split = if rho >= 1.0 || rho > 0.5 {
        let mut all = letters.clone();
        all.push(CRational::zero());
        holder::choose_split(&all).1
    } else {
        1.0
    };
    let value = if rho < 1.0 && rho <= split {
        series::li_direct(&zs, v.index().parts(), bits_for(digits), target_bits(digits))?.0
    } else {
        li_iterated(v, digits)?
    };
    Ok(Approx::new(value, digits))
}

/// `I(0; w; 1)` by path splitting.
pub fn holder(w: &Word, digits: u32) -> Result<Approx> {
    let c = holder::holder_bits(w, bits_for(digits), target_bits(digits))?;
    Ok(Approx::new(c, digits))
}

/// `I(0; w; 1)` by integrating the Chen system; an independent oracle for [`holder`].
pub fn chen_ode(w: &Word, digits: u32) -> Result<Approx> {
    // the cut-off near t = 1 needs headroom below the target precision
    let bits = bits_for(digits) + 64 + 8 * w.len() as u32;
    let c = ode::chen_ode_bits(w, bits, target_bits(digits) + 8)?;
    Ok(Approx::new(c.with_bits(bits_for(digits)), digits))
}

/// `ζ(k)` for admissible `k`.
pub fn mzv(k: &Index, digits: u32) -> Result<Real> {
    if !k.is_admissible() {
        return Err(Error::NotAdmissible(k.to_string()));
    }
    if k.is_empty() {
        return Ok(Real::one(bits_for(digits)));
    }
    if let Some(v) = sh_cache().lock().expect("cache lock").get(&(k.clone(), digits)) {
        return Ok(v.clone());
    }
    let v = li_iterated(&VarIndex::ones(k.clone()), digits)?.re;
    sh_cache()
        .lock()
        .expect("cache lock")
        .insert((k.clone(), digits), v.clone());
    Ok(v)
}

type ShCache = Mutex<HashMap<(Index, u32), Real>>;

fn sh_cache() -> &'static ShCache {
    static CACHE: OnceLock<ShCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Shuffle-regularized `ζ^sh(k)` (constant term of the regularization); equals
/// `ζ(k)` for admissible `k`.
pub fn mzv_sh(k: &Index, digits: u32) -> Result<Real> {
    if let Some(v) = sh_cache().lock().expect("cache lock").get(&(k.clone(), digits)) {
        return Ok(v.clone());
    }
    let bits = bits_for(digits);
    let value = if k.is_admissible() {
        mzv(k, digits)?
    } else {
        let w = VarIndex::ones(k.clone()).to_word()?;
        let reg = shuffle_regularize(&w).constant_term();
        let mut acc = Real::zero(bits);
        // regularized words are MZV words: I(w) = (-1)^{dep} ζ(index of w)
        for (word, q) in reg.iter() {
            let idx = word.to_index()?;
            let mut c = mzv(&idx, digits)?;
            if idx.depth() % 2 == 1 {
                c = c.neg();
            }
            acc = acc.add(&c.mul(&Real::from_rational(q, bits)));
        }
        if k.depth() % 2 == 1 {
            acc.neg()
        } else {
            acc
        }
    };
    sh_cache()
        .lock()
        .expect("cache lock")
        .insert((k.clone(), digits), value.clone());
    Ok(value)
}

/// `10^e` as a fixed-point real.
pub fn pow10(e: i32, bits: u32) -> Real {
    let ten = num_bigint::BigInt::from(10u32);
    if e >= 0 {
        Real::from_rational(&BigRational::from_integer(num_traits::pow(ten, e as usize)), bits)
    } else {
        Real::from_rational(&BigRational::new(One::one(), num_traits::pow(ten, (-e) as usize)), bits)
    }
}

/// `|x| < 10^e`
pub fn below(x: &Real, e: i32) -> bool {
    x.abs().sub(&pow10(e, x.bits())).mantissa().is_negative()
}

/// Numerical check of `ζ(k) = ζ(k^dagger)`.
pub fn check_mzv_duality(k: &Index, digits: u32) -> Result<VerificationReport> {
    let start = std::time::Instant::now();
    let kd = k.dagger()?;
    // the dual word is the mirror image of the original, so evaluating both sides by
    // path splitting at 1/2 would repeat the same arithmetic; the dual side uses the ODE
    let a = mzv(k, digits)?;
    let c = chen_ode(&VarIndex::ones(kd.clone()).to_word()?, digits)?.value.re;
    let b = if kd.depth() % 2 == 1 { c.neg() } else { c };
    let diff = a.sub(&b);
    let params =
        json!({ "index": k.to_string(), "dual": kd.to_string(), "digits": digits, "methods": ["holder", "chen_ode"] });
    let residual = diff.abs().to_decimal(digits + 5);
    let mut r = if below(&diff, -(digits as i32) + 10) {
        VerificationReport::pass("mzv-duality", params)
    } else {
        VerificationReport::fail(
            "mzv-duality",
            params,
            json!({ "lhs": a.to_decimal(digits), "rhs": b.to_decimal(digits) }),
        )
    };
    r = r.with_residual(residual);
    r.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(r)
}

mod crational_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[CRational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|z| z.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<CRational>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter()
            .map(|s| CRational::parse(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Parameters of one instance of the MPL duality: admissible `l_1..l_d`,
/// positive `a_i, b_i` and points `w_i` (`i < d`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MplDualityInstance {
    pub d: usize,
    pub l: Vec<Index>,
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    #[serde(with = "crational_list")]
    pub w: Vec<CRational>,
}

/// The assembled pair, the sign `(-1)^{d-1}`, and boundary conditions that hold
/// with equality (accepted, flagged).
#[derive(Clone, Debug, PartialEq)]
pub struct DualityPair {
    pub lhs: VarIndex,
    pub rhs: VarIndex,
    pub sign: i32,
    pub flags: Vec<String>,
}

impl MplDualityInstance {
    pub fn validate(&self) -> Result<Vec<String>> {
        let d = self.d;
        if d == 0 || self.l.len() != d || self.a.len() + 1 != d || self.b.len() + 1 != d || self.w.len() + 1 != d {
            return Err(Error::Hypothesis(format!(
                "expected {d} indices and {} of each of a, b, w",
                d.saturating_sub(1)
            )));
        }
        for l in &self.l {
            if !l.is_admissible() {
                return Err(Error::NotAdmissible(l.to_string()));
            }
        }
        if self.a.iter().chain(&self.b).any(|&x| x == 0) {
            return Err(Error::Hypothesis("a_i and b_i must be positive".into()));
        }
        let half = BigRational::new(1.into(), 2.into());
        let mut flags = Vec::new();
        for (i, w) in self.w.iter().enumerate() {
            if w.re > half || w.norm_sqr() > BigRational::one() {
                return Err(Error::Hypothesis(format!(
                    "condition 1 fails for w_{}: need Re(w) <= 1/2 and |w| <= 1, got {w}",
                    i + 1
                )));
            }
        }
        if self.l[0].is_empty() && self.a[0] == 1 && self.w[0].re == half {
            flags.push("condition 2 holds with equality: Re(w_1) = 1/2 with l_1 empty and a_1 = 1".into());
        }
        if self.l[d - 1].is_empty() && self.b[d - 2] == 1 && self.w[d - 2].norm_sqr() == BigRational::one() {
            flags.push(format!(
                "condition 3 holds with equality: |w_{}| = 1 with l_{d} empty and b_{} = 1",
                d - 1,
                d - 1
            ));
        }
        Ok(flags)
    }
}

/// Assemble both sides of the MPL duality.
pub fn build_duality_pair(inst: &MplDualityInstance) -> Result<DualityPair> {
    let flags = inst.validate()?;
    let d = inst.d;
    let one = Arg::one();
    let mut lhs_args = Vec::new();
    let mut lhs_k = Index::empty();
    for i in 0..d {
        let l = &inst.l[i];
        lhs_k = lhs_k.concat(l);
        if i + 1 < d {
            let (a, b) = (inst.a[i], inst.b[i]);
            lhs_args.extend(std::iter::repeat_n(one.clone(), l.depth() + a as usize - 1));
            lhs_args.push(Arg::Num(inst.w[i].clone()));
            lhs_k = lhs_k
                .concat(&Index::ones(a as usize - 1))
                .concat(&Index::from_slice(&[b]));
        } else {
            lhs_args.extend(std::iter::repeat_n(one.clone(), l.depth()));
        }
    }
    let mut rhs_args = Vec::new();
    let mut rhs_k = Index::empty();
    for i in (0..d).rev() {
        let ld = inst.l[i].dagger()?;
        rhs_k = rhs_k.concat(&ld);
        if i > 0 {
            let (a, b) = (inst.a[i - 1], inst.b[i - 1]);
            let w = &inst.w[i - 1];
            let den = w.clone() - CRational::one();
            let wd = w.clone() / den;
            rhs_args.extend(std::iter::repeat_n(one.clone(), ld.depth() + b as usize - 1));
            rhs_args.push(Arg::Num(wd));
            rhs_k = rhs_k
                .concat(&Index::ones(b as usize - 1))
                .concat(&Index::from_slice(&[a]));
        } else {
            rhs_args.extend(std::iter::repeat_n(one.clone(), ld.depth()));
        }
    }
    Ok(DualityPair {
        lhs: VarIndex::new(lhs_args, lhs_k)?,
        rhs: VarIndex::new(rhs_args, rhs_k)?,
        sign: if d % 2 == 1 { 1 } else { -1 },
        flags,
    })
}

/// Numerical check of `Li(z; k) = (-1)^{d-1} Li((z; k)^dagger)`.
pub fn check_mpl_duality(inst: &MplDualityInstance, digits: u32) -> Result<VerificationReport> {
    let start = std::time::Instant::now();
    let pair = build_duality_pair(inst)?;
    // the dual side goes through the ODE: path splitting would mirror the left side's arithmetic
    let lhs = li_series(&pair.lhs, digits)?;
    let c = chen_ode(&pair.rhs.to_word()?, digits)?;
    let mut rhs = if pair.rhs.depth() % 2 == 1 {
        Approx {
            value: c.value.neg(),
            ..c
        }
    } else {
        c
    };
    if pair.sign < 0 {
        rhs.value = rhs.value.neg();
    }
    let diff = lhs.value.sub(&rhs.value);
    let bound = -(digits as i32) + 10;
    let ok = below(&diff.re, bound) && below(&diff.im, bound);
    let params = json!({
        "d": inst.d,
        "l": inst.l.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
        "a": inst.a,
        "b": inst.b,
        "w": inst.w.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        "digits": digits,
        "lhs_index": pair.lhs.to_string(),
        "rhs_index": pair.rhs.to_string(),
        "sign": pair.sign,
    });
    let residual = format!("{:.3e}", diff.abs_f64());
    let mut r = if ok {
        VerificationReport::pass("mpl-duality", params)
    } else {
        VerificationReport::fail(
            "mpl-duality",
            params,
            json!({ "lhs": lhs.to_json(), "rhs": rhs.to_json() }),
        )
    };
    r = r.with_residual(residual);
    if !pair.flags.is_empty() {
        r = r.with_note(pair.flags.join("; "));
    }
    r.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(s: &str) -> Index {
        s.parse().unwrap()
    }

    #[test]
    fn empty_and_zero() {
        assert_eq!(li_series(&VarIndex::empty(), 20).unwrap().re().to_decimal(5), "1.00000");
        assert_eq!(holder(&Word::empty(), 20).unwrap().re().to_decimal(5), "1.00000");
        assert_eq!(chen_ode(&Word::empty(), 20).unwrap().re().to_decimal(5), "1.00000");
        assert_eq!(mzv(&Index::empty(), 20).unwrap().to_decimal(3), "1.000");
    }

    #[test]
    fn holder_sign_and_errors() {
        let w: Word = "[1,0]".parse().unwrap();
        let v = holder(&w, 20).unwrap();
        assert_eq!(v.re().to_decimal(10), "-1.6449340668");
        assert!(matches!(
            holder(&"[0,1]".parse().unwrap(), 20),
            Err(Error::DivergentWord(_))
        ));
        assert!(matches!(
            holder(&"[1/2]".parse().unwrap(), 20),
            Err(Error::LetterOnPath(_))
        ));
    }

    #[test]
    fn ode_matches_holder_on_small_words() {
        for w in ["[1,0]", "[1,0,0]", "[2]", "[-1,0]", "[1,1,0]"] {
            let w: Word = w.parse().unwrap();
            let a = holder(&w, 30).unwrap();
            let b = chen_ode(&w, 30).unwrap();
            let d = a.value.sub(&b.value);
            assert!(
                below(&d.re, -25) && below(&d.im, -25),
                "{w}: {} vs {}",
                a.value,
                b.value
            );
        }
    }

    #[test]
    fn mzv_values() {
        assert_eq!(mzv(&k("2"), 30).unwrap().to_decimal(10), "1.6449340668");
        assert_eq!(mzv(&k("1,2"), 30).unwrap().to_decimal(10), "1.2020569032");
        assert!(matches!(mzv(&k("2,1"), 30), Err(Error::NotAdmissible(_))));
        assert_eq!(mzv_sh(&k("1"), 30).unwrap().to_decimal(10), "0.0000000000");
        assert_eq!(mzv_sh(&k("1,1"), 30).unwrap().to_decimal(10), "0.0000000000");
    }

    #[test]
    fn duality_pair_examples() {
        let inst = MplDualityInstance {
            d: 1,
            l: vec![k("1,2")],
            a: vec![],
            b: vec![],
            w: vec![],
        };
        let p = build_duality_pair(&inst).unwrap();
        assert_eq!(p.lhs.to_string(), "(1,1;1,2)");
        assert_eq!(p.rhs.to_string(), "(1;3)");
        assert_eq!(p.sign, 1);
        let inst = MplDualityInstance {
            d: 2,
            l: vec![Index::empty(), Index::empty()],
            a: vec![1],
            b: vec![1],
            w: vec![CRational::from_int(-1)],
        };
        let p = build_duality_pair(&inst).unwrap();
        assert_eq!(p.lhs.to_string(), "(-1;1)");
        assert_eq!(p.rhs.to_string(), "(1/2;1)");
        assert_eq!(p.sign, -1);
        assert_eq!(p.flags.len(), 1);
        let bad = MplDualityInstance {
            w: vec![CRational::parse("3/4").unwrap()],
            ..inst
        };
        assert!(matches!(build_duality_pair(&bad), Err(Error::Hypothesis(_))));
    }
}
