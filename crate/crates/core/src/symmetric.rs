//! t-adic symmetric multiple zeta values and polylogarithms as truncated
//! power series in `t` with real high-precision coefficients.

use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::index::{Arg, Index, VarIndex};
use crate::number::CRational;
use crate::numeric::{below, bits_for, li_series, mzv_sh, Real};
use crate::relation::{certificate_summary, zeta2_membership};
use crate::report::{Status, VerificationReport};

/// `Σ_{n<M} c_n t^n`, each coefficient optionally tagged with its weight.
#[derive(Clone, Debug, PartialEq)]
pub struct TSeries {
    coeffs: Vec<Real>,
    weights: Vec<Option<u32>>,
}

impl TSeries {
    /// Zero series whose coefficient of `t^n` is tagged `base + n`.
    pub fn zero(order: usize, bits: u32, base: Option<u32>) -> TSeries {
        TSeries {
            coeffs: vec![Real::zero(bits); order],
            weights: (0..order).map(|n| base.map(|b| b + n as u32)).collect(),
        }
    }

    /// The constant `c` tagged with weight `w`.
    pub fn constant(c: Real, order: usize, w: Option<u32>) -> TSeries {
        let mut s = TSeries::zero(order, c.bits(), w);
        if order > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coefficients(&self) -> &[Real] {
        &self.coeffs
    }

    pub fn coefficient(&self, n: usize) -> &Real {
        &self.coeffs[n]
    }

    pub fn weight(&self, n: usize) -> Option<u32> {
        self.weights[n]
    }

    fn merge_tag(a: Option<u32>, b: Option<u32>) -> Option<u32> {
        match (a, b) {
            (Some(x), Some(y)) if x == y => Some(x),
            _ => None,
        }
    }

    pub fn add(&self, o: &TSeries) -> TSeries {
        let n = self.order().min(o.order());
        TSeries {
            coeffs: (0..n).map(|i| self.coeffs[i].add(&o.coeffs[i])).collect(),
            weights: (0..n).map(|i| Self::merge_tag(self.weights[i], o.weights[i])).collect(),
        }
    }

    pub fn sub(&self, o: &TSeries) -> TSeries {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> TSeries {
        TSeries {
            coeffs: self.coeffs.iter().map(Real::neg).collect(),
            weights: self.weights.clone(),
        }
    }

    /// Multiply by a weight-zero scalar.
    pub fn scale(&self, c: &Real) -> TSeries {
        TSeries {
            coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect(),
            weights: self.weights.clone(),
        }
    }

    pub fn scale_rational(&self, q: &BigRational) -> TSeries {
        let bits = self.coeffs.first().map(Real::bits).unwrap_or(64);
        self.scale(&Real::from_rational(q, bits))
    }

    /// Truncated product; tags add.
    pub fn mul(&self, o: &TSeries) -> TSeries {
        let n = self.order().min(o.order());
        let bits = self.coeffs.first().or(o.coeffs.first()).map(Real::bits).unwrap_or(64);
        let mut coeffs = vec![Real::zero(bits); n];
        let mut weights: Vec<Option<u32>> = vec![None; n];
        for (c, (coeff, tag)) in coeffs.iter_mut().zip(weights.iter_mut()).enumerate() {
            let mut first = true;
            for i in 0..=c {
                *coeff = coeff.add(&self.coeffs[i].mul(&o.coeffs[c - i]));
                let t = match (self.weights[i], o.weights[c - i]) {
                    (Some(a), Some(b)) => Some(a + b),
                    _ => None,
                };
                *tag = if first { t } else { Self::merge_tag(*tag, t) };
                first = false;
            }
        }
        TSeries { coeffs, weights }
    }

    /// Multiply by `t^n`, truncating; the tags travel with their coefficients.
    pub fn shift(&self, n: usize) -> TSeries {
        let order = self.order();
        let bits = self.coeffs.first().map(Real::bits).unwrap_or(64);
        // vacated slots are tagged as if the grading continued downwards
        let weights = (0..order)
            .map(|i| {
                self.weights
                    .first()
                    .copied()
                    .flatten()
                    .and_then(|w| (w + i as u32).checked_sub(n as u32))
            })
            .collect();
        let mut out = TSeries {
            coeffs: vec![Real::zero(bits); order],
            weights,
        };
        for i in 0..order.saturating_sub(n) {
            out.coeffs[i + n] = self.coeffs[i].clone();
            out.weights[i + n] = self.weights[i];
        }
        out
    }

    /// Pad with zero coefficients (tagged by extrapolating the last tag) up to `order`.
    fn extend_to(mut self, order: usize) -> TSeries {
        let bits = self.coeffs.first().map(Real::bits).unwrap_or(64);
        while self.coeffs.len() < order {
            let w = self.weights.last().copied().flatten().map(|w| w + 1);
            self.coeffs.push(Real::zero(bits));
            self.weights.push(w);
        }
        self
    }

    pub fn to_json(&self, digits: u32) -> Value {
        let shown = digits.min(40);
        Value::Array(
            self.coeffs
                .iter()
                .zip(&self.weights)
                .map(|(c, w)| json!({ "value": c.to_decimal(shown), "weight": w }))
                .collect(),
        )
    }
}

fn binomial(n: u32, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k {
        acc = acc * BigRational::from_integer((n - i).into()) / BigRational::from_integer((i + 1).into());
    }
    acc
}

/// All `(n_1, ..., n_len)` with `n_j >= 0` and `Σ n_j <= cap`.
fn bounded_tuples(len: usize, cap: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for t in &out {
            let used: u32 = t.iter().sum();
            for n in 0..=(cap as u32 - used) {
                let mut u = t.clone();
                u.push(n);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

/// The double sum shared by `ζ_S^sh` and `£_{S,α}^sh`.
///
/// `outer(i)` returns `z_{i+1}^α Li^sh(z_1/z_{i+1}, ..., z_i/z_{i+1}; k_1..k_i)` or `None` to skip
/// the term; `inner(i, idx)` returns `Li^sh(z_{r+1}/z_{i+1}, ..., z_{i+2}/z_{i+1}; idx)`.
fn symmetric_sum(
    k: &Index,
    order: usize,
    digits: u32,
    outer: impl Fn(usize) -> Result<Option<Real>>,
    inner: impl Fn(usize, &Index) -> Result<Real>,
) -> Result<TSeries> {
    if k.is_empty() {
        return Err(Error::EmptyIndex);
    }
    let bits = bits_for(digits);
    let parts = k.parts();
    let r = parts.len();
    let mut total = TSeries::zero(order, bits, Some(k.weight()));
    for i in 0..=r {
        let Some(left) = outer(i)? else {
            continue;
        };
        let tail_weight: u32 = parts[i..].iter().sum();
        let mut series = TSeries::zero(order, bits, Some(tail_weight));
        for ns in bounded_tuples(r - i, order.saturating_sub(1)) {
            let mut coef = BigRational::one();
            let mut idx = Vec::with_capacity(r - i);
            for (j, &n) in ns.iter().enumerate() {
                let kj = parts[i + j];
                coef *= binomial(kj + n - 1, n);
                idx.push(kj + n);
            }
            idx.reverse();
            let v = inner(i, &Index::from_slice(&idx))?;
            let deg: u32 = ns.iter().sum();
            let d = deg as usize;
            series.coeffs[d] = series.coeffs[d].add(&v.mul(&Real::from_rational(&coef, bits)));
        }
        let head_weight: u32 = parts[..i].iter().sum();
        let mut term = TSeries::constant(left, order, Some(head_weight)).mul(&series);
        if tail_weight % 2 == 1 {
            term = term.neg();
        }
        total = total.add(&term);
    }
    Ok(total)
}

/// `ζ_S^sh(k)` truncated at `t^order`.
pub fn zeta_s_sh(k: &Index, order: usize, digits: u32) -> Result<TSeries> {
    let parts = k.parts().to_vec();
    symmetric_sum(
        k,
        order,
        digits,
        |i| mzv_sh(&Index::from_slice(&parts[..i]), digits).map(Some),
        |_, idx| mzv_sh(idx, digits),
    )
}

/// `ζ*_S(k)`: sum of `ζ_S^sh` over the contractions of `k`.
pub fn zeta_s_star(k: &Index, order: usize, digits: u32) -> Result<TSeries> {
    if k.is_empty() {
        return Err(Error::EmptyIndex);
    }
    let mut total = TSeries::zero(order, bits_for(digits), Some(k.weight()));
    for c in VarIndex::ones(k.clone()).star_expansion() {
        total = total.add(&zeta_s_sh(c.index(), order, digits)?);
    }
    Ok(total)
}

fn real_args(v: &VarIndex) -> Result<Vec<BigRational>> {
    let mut out = Vec::with_capacity(v.depth());
    for a in v.args() {
        let z = a.as_num()?;
        if !z.is_real() {
            return Err(Error::UnsupportedDomain(format!("complex argument {z}")));
        }
        out.push(z.re.clone());
    }
    Ok(out)
}

/// `Li^sh(z; k)` on the supported domain: zero if some `z_j = 0`, `ζ^sh(k)` at all ones,
/// and the convergent series otherwise.
fn li_sh(zs: &[BigRational], k: &Index, digits: u32) -> Result<Real> {
    let bits = bits_for(digits);
    if k.is_empty() {
        return Ok(Real::one(bits));
    }
    if zs.iter().any(Zero::is_zero) {
        return Ok(Real::zero(bits));
    }
    if zs.iter().all(One::is_one) {
        return mzv_sh(k, digits);
    }
    let args = zs.iter().map(|z| Arg::Num(CRational::real(z.clone()))).collect();
    let v = VarIndex::new(args, k.clone())?;
    if !v.is_series_convergent() {
        return Err(Error::UnsupportedDomain(format!(
            "Li at {v} lies outside the convergent domain"
        )));
    }
    Ok(li_series(&v, digits)?.value.re.with_bits(bits))
}

fn rational_pow(z: &BigRational, e: i64) -> BigRational {
    let p = num_traits::pow(z.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

/// `£_{S,α}^sh(z; k)` truncated at `t^order`, for real rational arguments.
///
/// Every ratio argument the definition needs must be series-convergent; otherwise the
/// whole call fails with `UnsupportedDomain`.
pub fn pounds_s_sh(alpha: i64, v: &VarIndex, order: usize, digits: u32) -> Result<TSeries> {
    let zs = real_args(v)?;
    let k = v.index();
    let r = zs.len();
    let z_at = |i: usize| if i < r { zs[i].clone() } else { BigRational::one() };
    let bits = bits_for(digits);
    symmetric_sum(
        k,
        order,
        digits,
        |i| {
            let zi = z_at(i);
            if zi.is_zero() {
                return Ok(None);
            }
            let ratios: Vec<BigRational> = zs[..i].iter().map(|z| z / &zi).collect();
            let li = li_sh(&ratios, &Index::from_slice(&k.parts()[..i]), digits)?;
            Ok(Some(li.mul(&Real::from_rational(&rational_pow(&zi, alpha), bits))))
        },
        |i, idx| {
            let zi = z_at(i);
            // z_{r+1}/z_{i+1}, ..., z_{i+2}/z_{i+1}
            let ratios: Vec<BigRational> = (i + 1..=r).rev().map(|j| z_at(j) / &zi).collect();
            li_sh(&ratios, idx, digits)
        },
    )
}

/// Star version of [`pounds_s_sh`] through the contractions of `(z; k)`.
pub fn pounds_s_star(alpha: i64, v: &VarIndex, order: usize, digits: u32) -> Result<TSeries> {
    let mut total = TSeries::zero(order, bits_for(digits), Some(v.weight()));
    for c in v.star_expansion() {
        total = total.add(&pounds_s_sh(alpha, &c, order, digits)?);
    }
    Ok(total)
}

/// `𝓛*_{S,α}(z; k) = Σ_{n<M} [£*(z, {1}^n) - ½ £*(1, z_2, ..., {1}^n)] t^n`.
pub fn curly_l_s(alpha: i64, v: &VarIndex, order: usize, digits: u32) -> Result<TSeries> {
    if v.depth() == 0 {
        return Err(Error::EmptyIndex);
    }
    let half = BigRational::new(1.into(), 2.into());
    let mut total = TSeries::zero(order, bits_for(digits), Some(v.weight()));
    for n in 0..order {
        let vn = v.with_trailing_ones(n);
        let a = pounds_s_star(alpha, &vn, order - n, digits)?;
        let b = pounds_s_star(alpha, &vn.with_first_arg(Arg::one()), order - n, digits)?;
        let term = a.sub(&b.scale_rational(&half)).extend_to(order).shift(n);
        total = total.add(&term);
    }
    Ok(total)
}

/// `Σ_{n<M} ζ*_S(k, {1}^n) t^n`.
pub fn star_tower(k: &Index, order: usize, digits: u32) -> Result<TSeries> {
    let mut total = TSeries::zero(order, bits_for(digits), Some(k.weight()));
    for n in 0..order {
        let s = zeta_s_star(&k.with_trailing_ones(n), order - n, digits)?;
        total = total.add(&s.extend_to(order).shift(n));
    }
    Ok(total)
}

/// Outcome of certifying one coefficient.
struct Certified {
    status: Status,
    summary: Value,
    residual: f64,
}

/// Certify one coefficient of weight `w` as a member of `ζ(2) · (MZVs of weight w - 2)`.
fn certify(value: &Real, tag: Option<u32>, expected: u32, digits: u32, height: u64) -> Result<Certified> {
    if tag != Some(expected) {
        return Ok(Certified {
            status: Status::Fail,
            summary: json!({ "error": format!("weight tag {tag:?}, expected {expected}") }),
            residual: f64::INFINITY,
        });
    }
    let tol = -(digits as i32) + 12;
    let size = value.abs().to_f64();
    // weight below 2, or weight 3 with an empty basis: the coefficient must vanish
    if expected < 2 || expected == 3 {
        let ok = below(value, tol);
        return Ok(Certified {
            status: if ok { Status::Pass } else { Status::Fail },
            summary: json!({ "status": if ok { "FOUND" } else { "NOT-FOUND" }, "weight": expected, "terms": [], "residual": value.abs().to_decimal(digits + 5) }),
            residual: size,
        });
    }
    let cert = zeta2_membership(value, expected, digits, height)?;
    let residual = cert.residual.parse::<f64>().unwrap_or(f64::INFINITY);
    Ok(Certified {
        status: if cert.is_found() {
            Status::Pass
        } else {
            Status::Inconclusive
        },
        summary: certificate_summary(&cert),
        residual,
    })
}

fn certify_series(
    check: &str,
    params: Value,
    diff: &TSeries,
    base_weight: u32,
    digits: u32,
    height: u64,
    start: Instant,
) -> Result<VerificationReport> {
    let certs: Vec<Certified> = (0..diff.order())
        .into_par_iter()
        .map(|n| {
            certify(
                diff.coefficient(n),
                diff.weight(n),
                base_weight + n as u32,
                digits,
                height,
            )
        })
        .collect::<Result<_>>()?;
    let status = if certs.iter().any(|c| c.status == Status::Fail) {
        Status::Fail
    } else if certs.iter().any(|c| c.status == Status::Inconclusive) {
        Status::Inconclusive
    } else {
        Status::Pass
    };
    let worst = certs.iter().map(|c| c.residual).fold(0.0, f64::max);
    let summaries: Vec<Value> = certs.iter().map(|c| c.summary.clone()).collect();
    let mut r = VerificationReport::new(check, params, status)
        .with_residual(format!("{worst:.3e}"))
        .with_certificate(Value::Array(summaries));
    if status == Status::Fail {
        let n = certs.iter().position(|c| c.status == Status::Fail).unwrap_or(0);
        r = r.with_witness(json!({ "t_power": n, "coefficient": diff.coefficient(n).to_decimal(digits.min(40)) }));
    }
    if status == Status::Inconclusive {
        r = r.with_note("no relation within the height bound at this precision");
    }
    r.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(r)
}

/// Sum of the two sides of the t-adic duality, coefficientwise.
pub fn smzv_duality_sum(k: &Index, order: usize, digits: u32) -> Result<TSeries> {
    Ok(star_tower(k, order, digits)?.add(&star_tower(&k.vee()?, order, digits)?))
}

/// `Σ ζ*_S(k,{1}^n) t^n + Σ ζ*_S(k^∨,{1}^n) t^n ≡ 0` modulo `ζ(2)`, coefficientwise.
pub fn check_smzv_duality(k: &Index, order: usize, digits: u32, height: u64) -> Result<VerificationReport> {
    let start = Instant::now();
    if k.is_empty() {
        return Err(Error::EmptyIndex);
    }
    let d = smzv_duality_sum(k, order, digits)?;
    let params = json!({
        "index": k.to_string(),
        "vee": k.vee()?.to_string(),
        "t_order": order,
        "digits": digits,
        "height": height,
    });
    certify_series("smzv-duality", params, &d, k.weight(), digits, height, start)
}

/// The two sides of the main duality: `(z_i, {1}^{dep k_i - 1}; k_i)` against
/// `(1 - z_i, {1}^{dep k_i^∨ - 1}; k_i^∨)`, concatenated over `i`.
pub fn main_theorem_sides(ks: &[Index], zs: &[Arg]) -> Result<(VarIndex, VarIndex)> {
    if ks.is_empty() || ks.len() != zs.len() {
        return Err(Error::ArityMismatch {
            depth: ks.len(),
            args: zs.len(),
        });
    }
    let mut la = Vec::new();
    let mut ra = Vec::new();
    let mut lk = Index::empty();
    let mut rk = Index::empty();
    for (k, z) in ks.iter().zip(zs) {
        if k.is_empty() {
            return Err(Error::EmptyIndex);
        }
        let z = z.as_num()?;
        let kv = k.vee()?;
        la.push(Arg::Num(z.clone()));
        la.extend(std::iter::repeat_n(Arg::one(), k.depth() - 1));
        ra.push(Arg::Num(z.one_minus()));
        ra.extend(std::iter::repeat_n(Arg::one(), kv.depth() - 1));
        lk = lk.concat(k);
        rk = rk.concat(&kv);
    }
    Ok((VarIndex::new(la, lk)?, VarIndex::new(ra, rk)?))
}

/// `𝓛*_{S,α}` duality with the difference certified modulo `ζ(2)` coefficientwise.
///
/// Only `z_i ∈ {0, 1}` is supported; other arguments give `UNSUPPORTED-DOMAIN`.
/// With `d = 1` and `z_1 = 1` this is exactly [`check_smzv_duality`].
pub fn check_main_theorem(
    alpha: i64,
    ks: &[Index],
    zs: &[Arg],
    order: usize,
    digits: u32,
    height: u64,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let (lhs, rhs) = main_theorem_sides(ks, zs)?;
    if ks.len() == 1 && zs[0].is_one() {
        return check_smzv_duality(&ks[0], order, digits, height);
    }
    let params = json!({
        "alpha": alpha,
        "indices": ks.iter().map(|k| k.to_string()).collect::<Vec<_>>(),
        "args": zs.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
        "t_order": order,
        "digits": digits,
        "height": height,
        "lhs": lhs.to_string(),
        "rhs": rhs.to_string(),
    });
    let unsupported = |why: String| {
        let mut r = VerificationReport::new("main", params.clone(), Status::UnsupportedDomain).with_note(why);
        r.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
        Ok(r)
    };
    if let Some(z) = zs.iter().find(|z| !(z.is_zero() || z.is_one())) {
        return unsupported(format!("argument {z} is outside {{0, 1}}"));
    }
    let sides = curly_l_s(alpha, &lhs, order, digits).and_then(|l| Ok((l, curly_l_s(alpha, &rhs, order, digits)?)));
    let (l, r) = match sides {
        Ok(s) => s,
        Err(Error::UnsupportedDomain(why)) => return unsupported(why),
        Err(e) => return Err(e),
    };
    certify_series("main", params, &l.sub(&r), lhs.weight(), digits, height, start)
}
