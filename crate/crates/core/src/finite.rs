//! Finite multiple polylogarithms realized prime by prime in `Z/p^M`.
//!
//! The completed ring of finite sequences is never built. Each statement is
//! checked as a family of congruences over a window of primes.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::index::{Arg, Index, VarIndex};
use crate::poly::{Poly, Ring};
use crate::report::{Status, VerificationReport};
use crate::truncated::{args_to_polys, li_truncated_poly, symbols_of};

/// The ring `Z/p^M` for a prime `p`, with residues stored as `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModRing {
    p: u64,
    m: u32,
    modulus: u64,
}

impl ModRing {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::Config("modulus exponent M must be at least 1".into()));
        }
        let modulus = p
            .checked_pow(m)
            .filter(|q| *q < 1 << 63)
            .ok_or(Error::ModulusTooLarge(p, m))?;
        Ok(ModRing { p, m, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn reduce_i128(&self, a: i128) -> u64 {
        a.rem_euclid(self.modulus as i128) as u64
    }

    pub fn reduce_bigint(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.modulus))
            .to_u64()
            .expect("reduced below modulus")
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        let g = (a as i128).extended_gcd(&(self.modulus as i128));
        if g.gcd != 1 {
            return Err(Error::NotInvertible(a.to_string(), format!("{}^{}", self.p, self.m)));
        }
        Ok(self.reduce_i128(g.x))
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a % self.modulus;
        let mut acc = 1 % self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

impl Ring for ModRing {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.modulus
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.modulus as u128) as u64
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.modulus as u128) as u64
    }

    fn from_bigint(&self, n: &BigInt) -> u64 {
        self.reduce_bigint(n)
    }

    fn from_rational(&self, q: &BigRational) -> Result<u64> {
        let d = self.reduce_bigint(q.denom());
        let inv = self
            .inv(d)
            .map_err(|_| Error::NotInvertible(q.denom().to_string(), format!("{}^{}", self.p, self.m)))?;
        Ok(self.mul(&self.reduce_bigint(q.numer()), &inv))
    }

    fn format(&self, a: &u64) -> String {
        a.to_string()
    }

    fn inv_pow(&self, n: u64, k: u32) -> Result<u64> {
        let i = self.inv(n % self.modulus)?;
        Ok(self.pow(i, k as u64))
    }
}

/// A single residue in `Z/p^M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModPrimePower {
    ring: ModRing,
    residue: u64,
}

impl ModPrimePower {
    pub fn new(ring: ModRing, n: i128) -> Self {
        ModPrimePower {
            ring,
            residue: ring.reduce_i128(n),
        }
    }

    pub fn from_rational(ring: ModRing, q: &BigRational) -> Result<Self> {
        Ok(ModPrimePower {
            ring,
            residue: ring.from_rational(q)?,
        })
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn ring(&self) -> ModRing {
        self.ring
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(ModPrimePower {
            ring: self.ring,
            residue: self.ring.inv(self.residue)?,
        })
    }
}

impl fmt::Display for ModPrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.residue, self.ring.p, self.ring.m)
    }
}

pub type ModPolynomial = Poly<ModRing>;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Primes in the inclusive range `[lo, hi]`.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

/// `Li_{<p}` (or the star variant) reduced mod `p^M`.
pub fn li_truncated_mod(p: u64, m: u32, v: &VarIndex, star: bool) -> Result<ModPolynomial> {
    let ring = ModRing::new(p, m)?;
    let vars = symbols_of(v.args());
    let args = args_to_polys(&ring, &vars, v.args())?;
    li_truncated_poly(&ring, &vars, &args, v.index().parts(), p, star)
}

/// The combination `Σ_{n<M} (£*(z, {1}^n) - ½ £*(1, z_2, ..., {1}^n)) p^n` with
/// polynomial arguments.
pub fn curly_l_polys(ring: &ModRing, vars: &[String], args: &[ModPolynomial], index: &Index) -> Result<ModPolynomial> {
    if ring.p() == 2 {
        return Err(Error::EvenPrime);
    }
    if index.is_empty() {
        return Err(Error::EmptyIndex);
    }
    let half = ring.inv(2)?;
    let one = Poly::one(ring, vars)?;
    let mut total = Poly::zero(ring, vars)?;
    let mut pn = ring.one();
    for n in 0..ring.exponent() as usize {
        let k = index.with_trailing_ones(n);
        let mut a: Vec<ModPolynomial> = args.to_vec();
        a.extend(std::iter::repeat_n(one.clone(), n));
        let first = li_truncated_poly(ring, vars, &a, k.parts(), ring.p(), true)?;
        a[0] = one.clone();
        let second = li_truncated_poly(ring, vars, &a, k.parts(), ring.p(), true)?;
        let term = first.sub(&second.scale(&half));
        total.add_assign(&term.scale(&pn));
        pn = ring.mul(&pn, &(ring.p() % ring.modulus()));
    }
    Ok(total)
}

/// `𝓛*` mod `p^M` at the arguments of `v`.
#[allow(non_snake_case)]
pub fn curly_L_A_truncated(p: u64, m: u32, v: &VarIndex) -> Result<ModPolynomial> {
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    let ring = ModRing::new(p, m)?;
    let vars = symbols_of(v.args());
    let args = args_to_polys(&ring, &vars, v.args())?;
    curly_l_polys(&ring, &vars, &args, v.index())
}

fn mod_witness(lhs: &ModPolynomial, rhs: &ModPolynomial) -> Value {
    match lhs.first_difference(rhs) {
        Some((mono, a, b)) => json!({
            "monomial": lhs.format_monomial(&mono),
            "lhs": a.to_string(),
            "rhs": b.to_string(),
        }),
        None => Value::Null,
    }
}

/// Both sides of the finite duality for `(z_1, ..., z_d; k_1, ..., k_d)` mod `p^M`.
pub fn fmpl_duality_sides(p: u64, m: u32, ks: &[Index], zs: &[Arg]) -> Result<(ModPolynomial, ModPolynomial)> {
    if ks.is_empty() || ks.len() != zs.len() {
        return Err(Error::ArityMismatch {
            depth: ks.len(),
            args: zs.len(),
        });
    }
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    let ring = ModRing::new(p, m)?;
    let vars = symbols_of(zs);
    let z = args_to_polys(&ring, &vars, zs)?;
    let one = Poly::one(&ring, &vars)?;
    let mut lhs_args = Vec::new();
    let mut rhs_args = Vec::new();
    let mut lhs_k = Index::empty();
    let mut rhs_k = Index::empty();
    for (k, zi) in ks.iter().zip(&z) {
        if k.is_empty() {
            return Err(Error::EmptyIndex);
        }
        let kv = k.vee()?;
        lhs_args.push(zi.clone());
        lhs_args.extend(std::iter::repeat_n(one.clone(), k.depth() - 1));
        rhs_args.push(one.sub(zi));
        rhs_args.extend(std::iter::repeat_n(one.clone(), kv.depth() - 1));
        lhs_k = lhs_k.concat(k);
        rhs_k = rhs_k.concat(&kv);
    }
    let lhs = curly_l_polys(&ring, &vars, &lhs_args, &lhs_k)?;
    let rhs = curly_l_polys(&ring, &vars, &rhs_args, &rhs_k)?;
    Ok((lhs, rhs))
}

fn finish(
    check: &str,
    params: Value,
    lhs: &ModPolynomial,
    rhs: &ModPolynomial,
    start: std::time::Instant,
) -> VerificationReport {
    let mut r = if lhs == rhs {
        VerificationReport::pass(check, params).with_residual("0")
    } else {
        VerificationReport::fail(check, params, mod_witness(lhs, rhs)).with_residual(lhs.sub(rhs).to_string())
    };
    r.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    r
}

/// Congruence check of the finite MPL duality mod `p^M`.
pub fn check_fmpl_duality(p: u64, m: u32, ks: &[Index], zs: &[Arg]) -> Result<VerificationReport> {
    let start = std::time::Instant::now();
    let (lhs, rhs) = fmpl_duality_sides(p, m, ks, zs)?;
    let params = json!({
        "p": p,
        "M": m,
        "indices": ks.iter().map(|k| k.to_string()).collect::<Vec<_>>(),
        "args": zs.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
    });
    Ok(finish("finite-duality", params, &lhs, &rhs, start))
}

/// `Σ_{n<M} ζ*_{<p}(k, {1}^n) p^n` mod `p^M`.
pub fn fmzv_series(ring: &ModRing, k: &Index) -> Result<u64> {
    let mut total = 0;
    let mut pn = ring.one();
    for n in 0..ring.exponent() as usize {
        let kn = k.with_trailing_ones(n);
        let v = li_truncated_mod(ring.p(), ring.exponent(), &VarIndex::ones(kn), true)?.constant_term();
        total = ring.add(&total, &ring.mul(&v, &pn));
        pn = ring.mul(&pn, &(ring.p() % ring.modulus()));
    }
    Ok(total)
}

/// Congruence check of `Σ ζ*(k, {1}^n) p^n ≡ -Σ ζ*(k^∨, {1}^n) p^n` mod `p^M`.
pub fn check_fmzv_duality(p: u64, m: u32, k: &Index) -> Result<VerificationReport> {
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    if k.is_empty() {
        return Err(Error::EmptyIndex);
    }
    let start = std::time::Instant::now();
    let ring = ModRing::new(p, m)?;
    let kv = k.vee()?;
    let lhs = fmzv_series(&ring, k)?;
    let rhs = ring.neg(&fmzv_series(&ring, &kv)?);
    let params = json!({ "p": p, "M": m, "index": k.to_string(), "vee": kv.to_string() });
    let mut r = if lhs == rhs {
        VerificationReport::pass("fmzv-duality", params).with_residual("0")
    } else {
        VerificationReport::fail("fmzv-duality", params, json!({ "lhs": lhs, "rhs": rhs }))
            .with_residual(ring.sub(&lhs, &rhs).to_string())
    };
    r.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(r)
}

/// Run a per-prime check over a window and fold the results into one report
/// listing the status of every prime. Primes are processed in parallel and
/// merged in increasing order.
pub fn sweep_primes(
    check: &str,
    params: Value,
    primes: &[u64],
    f: impl Fn(u64) -> Result<VerificationReport> + Sync,
) -> Result<VerificationReport> {
    let start = std::time::Instant::now();
    let results: Vec<(u64, Result<VerificationReport>)> = primes.par_iter().map(|&p| (p, f(p))).collect();
    let mut per_prime = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    let mut first_witness = None;
    let mut skipped = Vec::new();
    for (p, r) in results {
        let r = match r {
            Ok(r) => r,
            // an argument with p in its denominator has no image mod p^M
            Err(e @ Error::NotInvertible(..)) => {
                skipped.push(p);
                per_prime
                    .push(json!({ "p": p, "status": Status::UnsupportedDomain.as_str(), "reason": e.to_string() }));
                continue;
            }
            Err(e) => return Err(e),
        };
        if r.status == Status::Fail {
            failures.push(p);
            if first_witness.is_none() {
                first_witness = Some(json!({ "p": p, "witness": r.witness }));
            }
        }
        per_prime.push(json!({ "p": p, "status": r.status.as_str() }));
    }
    let mut params = params;
    if let Value::Object(m) = &mut params {
        m.insert("primes".into(), json!(primes));
    }
    let mut report = match first_witness {
        Some(w) => VerificationReport::fail(check, params, w),
        None if !primes.is_empty() && skipped.len() == primes.len() => {
            VerificationReport::new(check, params, Status::UnsupportedDomain)
        }
        None => VerificationReport::pass(check, params),
    };
    if !skipped.is_empty() {
        report = report.with_note(format!("skipped primes {skipped:?}: argument not defined mod p"));
    }
    report.certificate = Some(json!({ "per_prime": per_prime, "failures": failures }));
    report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

/// Reduce an exact rational polynomial mod `p^M`.
pub fn reduce_poly(ring: &ModRing, p: &crate::poly::RationalPolynomial) -> Result<ModPolynomial> {
    p.map_ring(ring, |c| ring.from_rational(c))
}

/// Residue of an integer-valued expression, for display.
pub fn residue_of(ring: &ModRing, q: &BigRational) -> Result<u64> {
    if q.is_zero() {
        return Ok(0);
    }
    ring.from_rational(q)
}
