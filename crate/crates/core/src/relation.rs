//! Integer relations among high-precision reals (PSLQ), and certificates that a
//! number lies in `ζ(2) · span_Q{ζ(b) : wt(b) = w - 2}`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::index::Index;
use crate::number::fmt_rational;
use crate::numeric::{mzv, Real};

/// Extra working bits inside PSLQ.
const EXTRA_BITS: u32 = 60;

fn round_fixed(x: &BigInt, prec: u32) -> BigInt {
    ((x + (BigInt::one() << (prec - 1))) >> prec) << prec
}

fn sqrt_fixed(x: &BigInt, prec: u32) -> BigInt {
    (x << prec).sqrt()
}

fn fdiv(a: BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

/// PSLQ on fixed-point inputs `x` (scaled by `2^prec`). Returns an integer vector
/// with max entry below `maxcoeff` whose dot product with `x` is below `tol`.
fn pslq_fixed(x: &[BigInt], prec: u32, tol: &BigInt, maxcoeff: &BigInt, maxsteps: usize) -> Option<Vec<BigInt>> {
    let n = x.len();
    let one = BigInt::one() << prec;
    let g = sqrt_fixed(&fdiv(BigInt::from(4) << prec, &BigInt::from(3)), prec);
    // 1-based square matrices
    let idx = |i: usize, j: usize| i * (n + 1) + j;
    let mut a = vec![BigInt::zero(); (n + 1) * (n + 1)];
    let mut b = vec![BigInt::zero(); (n + 1) * (n + 1)];
    let mut h = vec![BigInt::zero(); (n + 1) * (n + 1)];
    for i in 1..=n {
        a[idx(i, i)] = one.clone();
        b[idx(i, i)] = one.clone();
    }
    let mut s = vec![BigInt::zero(); n + 1];
    for k in 1..=n {
        let mut t = BigInt::zero();
        for xj in &x[k - 1..] {
            t += (xj * xj) >> prec;
        }
        s[k] = sqrt_fixed(&t, prec);
    }
    let t = s[1].clone();
    if t.is_zero() {
        return None;
    }
    let mut y = vec![BigInt::zero(); n + 1];
    for k in 1..=n {
        y[k] = fdiv(x[k - 1].clone() << prec, &t);
        s[k] = fdiv(s[k].clone() << prec, &t);
    }
    for i in 1..=n {
        if i < n {
            h[idx(i, i)] = if s[i].is_zero() {
                BigInt::zero()
            } else {
                fdiv(s[i + 1].clone() << prec, &s[i])
            };
        }
        for j in 1..i {
            let sjj1 = &s[j] * &s[j + 1];
            h[idx(i, j)] = if sjj1.is_zero() {
                BigInt::zero()
            } else {
                fdiv((-(&y[i] * &y[j])) << prec, &sjj1)
            };
        }
    }
    let reduce = |i: usize,
                  j: usize,
                  y: &mut Vec<BigInt>,
                  h: &mut Vec<BigInt>,
                  a: &mut Vec<BigInt>,
                  b: &mut Vec<BigInt>|
     -> bool {
        if h[idx(j, j)].is_zero() {
            return false;
        }
        let t = round_fixed(&fdiv(h[idx(i, j)].clone() << prec, &h[idx(j, j)]), prec);
        if t.is_zero() {
            return true;
        }
        y[j] = &y[j] + ((&t * &y[i]) >> prec);
        for k in 1..=j {
            h[idx(i, k)] = &h[idx(i, k)] - ((&t * &h[idx(j, k)]) >> prec);
        }
        for k in 1..=n {
            a[idx(i, k)] = &a[idx(i, k)] - ((&t * &a[idx(j, k)]) >> prec);
            b[idx(k, j)] = &b[idx(k, j)] + ((&t * &b[idx(k, i)]) >> prec);
        }
        true
    };
    for i in 2..=n {
        for j in (1..i).rev() {
            reduce(i, j, &mut y, &mut h, &mut a, &mut b);
        }
    }
    for _ in 0..maxsteps {
        let mut m = 0;
        let mut szmax = BigInt::from(-1);
        let mut gpow = g.clone();
        for i in 1..n {
            let sz = (&gpow * h[idx(i, i)].abs()) >> (prec * i as u32);
            if sz > szmax {
                m = i;
                szmax = sz;
            }
            gpow = &gpow * &g;
        }
        if m == 0 {
            return None;
        }
        y.swap(m, m + 1);
        for i in 1..=n {
            h.swap(idx(m, i), idx(m + 1, i));
            a.swap(idx(m, i), idx(m + 1, i));
            b.swap(idx(i, m), idx(i, m + 1));
        }
        if m + 2 <= n {
            let hmm = &h[idx(m, m)];
            let hmm1 = &h[idx(m, m + 1)];
            let t0 = sqrt_fixed(&((hmm * hmm + hmm1 * hmm1) >> prec), prec);
            if t0.is_zero() {
                return None;
            }
            let t1 = fdiv(hmm.clone() << prec, &t0);
            let t2 = fdiv(hmm1.clone() << prec, &t0);
            for i in m..=n {
                let t3 = h[idx(i, m)].clone();
                let t4 = h[idx(i, m + 1)].clone();
                h[idx(i, m)] = (&t1 * &t3 + &t2 * &t4) >> prec;
                h[idx(i, m + 1)] = (-&t2 * &t3 + &t1 * &t4) >> prec;
            }
        }
        for i in m + 1..=n {
            for j in (1..=(i - 1).min(m + 1)).rev() {
                if !reduce(i, j, &mut y, &mut h, &mut a, &mut b) {
                    break;
                }
            }
        }
        for i in 1..=n {
            if y[i].abs() < *tol {
                let vec: Vec<BigInt> = (1..=n).map(|j| round_fixed(&b[idx(j, i)], prec) >> prec).collect();
                if vec.iter().all(|v| v.abs() < *maxcoeff) && vec.iter().any(|v| !v.is_zero()) {
                    return Some(vec);
                }
            }
        }
        let recnorm = h.iter().map(|v| v.abs()).max().unwrap_or_default();
        if !recnorm.is_zero() {
            let norm = (((BigInt::one() << (2 * prec)) / recnorm) >> prec) / 100;
            if norm >= *maxcoeff {
                break;
            }
        }
    }
    None
}

/// Decimal digits needed so that no spurious relation of height `height` among
/// `n` numbers is expected.
pub fn digits_needed(n: usize, height: u64) -> f64 {
    n as f64 * (height.max(2) as f64).log10() + 12.0
}

/// Integer relation `Σ c_i v_i ≈ 0` with `|c_i| <= height`, verified to `10^{-digits+12}`.
pub fn find_relation(values: &[Real], digits: u32, height: u64) -> Result<Option<Vec<BigInt>>> {
    if values.len() < 2 {
        return Err(Error::Relation("at least two values are required".into()));
    }
    if digits_needed(values.len(), height) > digits as f64 + 1e-9 {
        return Err(Error::Relation(format!(
            "precision insufficient: {} values with height {height} need about {:.0} digits, have {digits}",
            values.len(),
            digits_needed(values.len(), height)
        )));
    }
    let prec = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + EXTRA_BITS;
    let x: Vec<BigInt> = values.iter().map(|v| v.with_bits(prec).mantissa().clone()).collect();
    // a (numerically) zero entry is its own relation
    let tol_real = crate::numeric::pow10(-(digits as i32) + 12, prec);
    for (i, xi) in x.iter().enumerate() {
        if xi.abs() < *tol_real.mantissa() {
            let mut c = vec![BigInt::zero(); x.len()];
            c[i] = BigInt::one();
            return Ok(Some(c));
        }
    }
    let tol = tol_real.mantissa().clone();
    let maxcoeff = BigInt::from(height) + 1;
    let found = pslq_fixed(&x, prec, &tol, &maxcoeff, 2000 * values.len());
    let bound = BigInt::from(height);
    Ok(found
        .map(normalize_sign)
        .filter(|c| c.iter().all(|v| v.abs() <= bound) && residual(values, c, digits).1))
}

fn normalize_sign(mut v: Vec<BigInt>) -> Vec<BigInt> {
    if let Some(first) = v.iter().find(|c| !c.is_zero()) {
        if first.is_negative() {
            for c in v.iter_mut() {
                *c = -c.clone();
            }
        }
    }
    v
}

/// `(|Σ c_i v_i|, below 10^{-digits+12})`
fn residual(values: &[Real], c: &[BigInt], digits: u32) -> (Real, bool) {
    let bits = values[0].bits();
    let mut acc = Real::zero(bits);
    for (v, ci) in values.iter().zip(c) {
        acc = acc.add(&Real::from_mantissa(v.with_bits(bits).mantissa() * ci, bits));
    }
    let ok = crate::numeric::below(&acc, -(digits as i32) + 12);
    (acc.abs(), ok)
}

/// All admissible indices of the given weight, by depth then lexicographically.
pub fn mzv_spanning_set(weight: u32) -> Vec<Index> {
    Index::admissible_of_weight(weight)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateStatus {
    #[serde(rename = "FOUND")]
    Found,
    #[serde(rename = "NOT-FOUND")]
    NotFound,
}

/// `target ≈ ζ(2) · Σ q_i ζ(b_i)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationCertificate {
    pub target: String,
    pub weight: u32,
    pub basis: Vec<Index>,
    pub coefficients: Vec<String>,
    pub residual: String,
    pub digits: u32,
    pub height_bound: u64,
    pub status: CertificateStatus,
}

impl RelationCertificate {
    pub fn is_found(&self) -> bool {
        self.status == CertificateStatus::Found
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("certificate serializes")
    }

    /// The coefficient vector as rationals.
    pub fn rationals(&self) -> Vec<BigRational> {
        self.coefficients
            .iter()
            .map(|s| crate::number::parse_rational(s).expect("stored rationals parse"))
            .collect()
    }
}

type SubsetCache = Mutex<HashMap<(u32, u32, u64), Vec<usize>>>;

fn subset_cache() -> &'static SubsetCache {
    static CACHE: OnceLock<SubsetCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `ζ(2) ζ(b)` for every `b` of the spanning set of weight `w - 2`
/// (the single value `ζ(2)` when `w = 2`).
pub fn zeta2_basis(weight: u32, digits: u32) -> Result<(Vec<Index>, Vec<Real>)> {
    let basis = if weight == 2 {
        vec![Index::empty()]
    } else {
        mzv_spanning_set(weight - 2)
    };
    let z2 = mzv(&Index::from_slice(&[2]), digits)?;
    let values = basis
        .iter()
        .map(|b| Ok(z2.mul(&mzv(b, digits)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok((basis, values))
}

/// Greedy choice of basis positions with no relation of height `height` among them.
fn independent_subset(values: &[Real], weight: u32, digits: u32, height: u64) -> Result<Vec<usize>> {
    if let Some(s) = subset_cache()
        .lock()
        .expect("cache lock")
        .get(&(weight, digits, height))
    {
        return Ok(s.clone());
    }
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..values.len() {
        if chosen.is_empty() {
            chosen.push(i);
            continue;
        }
        let mut cand: Vec<Real> = chosen.iter().map(|&j| values[j].clone()).collect();
        cand.push(values[i].clone());
        if find_relation(&cand, digits, height)?.is_none() {
            chosen.push(i);
        }
    }
    subset_cache()
        .lock()
        .expect("cache lock")
        .insert((weight, digits, height), chosen.clone());
    Ok(chosen)
}

/// Certify `value ∈ ζ(2) · span{ζ(b) : b admissible, wt(b) = weight - 2}`.
pub fn zeta2_membership(value: &Real, weight: u32, digits: u32, height: u64) -> Result<RelationCertificate> {
    if weight < 2 {
        return Err(Error::Relation(format!("weight {weight} is below 2")));
    }
    let (basis, values) = zeta2_basis(weight, digits)?;
    let bits = values.first().map(|v| v.bits()).unwrap_or(value.bits());
    let value = value.with_bits(bits);
    let mut cert = RelationCertificate {
        target: value.to_decimal(digits.min(30)),
        weight,
        basis: basis.clone(),
        coefficients: vec!["0".into(); basis.len()],
        residual: value.abs().to_decimal(digits + 5),
        digits,
        height_bound: height,
        status: CertificateStatus::NotFound,
    };
    if crate::numeric::below(&value, -(digits as i32) + 12) {
        cert.status = CertificateStatus::Found;
        return Ok(cert);
    }
    if basis.is_empty() {
        return Ok(cert);
    }
    let chosen = independent_subset(&values, weight, digits, height)?;
    let mut cand = vec![value.clone()];
    cand.extend(chosen.iter().map(|&j| values[j].clone()));
    if let Some(c) = find_relation(&cand, digits, height)? {
        if c[0].is_zero() {
            return Ok(cert);
        }
        let mut q = vec![BigRational::zero(); basis.len()];
        for (pos, &j) in chosen.iter().enumerate() {
            q[j] = -BigRational::new(c[pos + 1].clone(), c[0].clone());
        }
        let mut approx = Real::zero(bits);
        for (qj, vj) in q.iter().zip(&values) {
            if !qj.is_zero() {
                approx = approx.add(&vj.mul(&Real::from_rational(qj, bits)));
            }
        }
        let diff = value.sub(&approx);
        cert.residual = diff.abs().to_decimal(digits + 5);
        if crate::numeric::below(&diff, -(digits as i32) + 12) {
            cert.coefficients = q.iter().map(fmt_rational).collect();
            cert.status = CertificateStatus::Found;
        }
    }
    Ok(cert)
}

/// Compact JSON view listing only the nonzero terms.
pub fn certificate_summary(c: &RelationCertificate) -> Value {
    let terms: Vec<Value> = c
        .basis
        .iter()
        .zip(&c.coefficients)
        .filter(|(_, q)| q.as_str() != "0")
        .map(|(b, q)| json!({ "index": b.to_string(), "coefficient": q }))
        .collect();
    json!({ "status": c.status, "weight": c.weight, "terms": terms, "residual": c.residual })
}
