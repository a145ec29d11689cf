//! Iterated integrals `I(0; a_1, ..., a_k; 1)` by splitting the path at a point
//! `s` in `(0, 1)` and summing both halves as geometric-rate series.
//!
//! With `I(0; w; 1) = Σ_i I(0; a_1..a_i; s) I(s; a_{i+1}..a_k; 1)`:
//! the first factor rescales to letters `a/s`; the second, after `t -> 1 - t`,
//! becomes `(-1)^{k-i} I(0; (1-a_k)/(1-s), ..., (1-a_{i+1})/(1-s); 1)`.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::number::CRational;
use crate::word::{Letter, Word};

use super::fixed::Complex;
use super::series::li_direct;

/// Letters as exact points; `None` if the word contains infinity.
fn points(w: &Word) -> Option<Vec<CRational>> {
    w.letters()
        .iter()
        .map(|l| match l {
            Letter::Point(p) => Some(p.clone()),
            Letter::Infinity => None,
        })
        .collect()
}

fn on_open_path(a: &CRational) -> bool {
    a.in_open_unit_interval()
}

/// Reject words whose integral diverges or whose letters sit on the path.
pub fn validate(w: &Word) -> Result<()> {
    for l in w.letters() {
        if let Letter::Point(p) = l {
            if on_open_path(p) {
                return Err(Error::LetterOnPath(p.to_string()));
            }
        }
    }
    if let Some(first) = w.letters().first() {
        if first.is_zero() {
            return Err(Error::DivergentWord(format!("{w} starts with 0")));
        }
    }
    if let Some(last) = w.letters().last() {
        if last.is_one() {
            return Err(Error::DivergentWord(format!("{w} ends with 1")));
        }
    }
    Ok(())
}

/// Write `I(0; b_1, ..., b_m; 1)` (with `b_1 != 0`) as `sign * Li(z; k)`, `z_j = 1/b_j`.
fn word_to_li(bs: &[CRational]) -> (Vec<CRational>, Vec<u32>, bool) {
    let mut zs = Vec::new();
    let mut ks: Vec<u32> = Vec::new();
    for b in bs {
        if b.is_zero() {
            *ks.last_mut().expect("first letter is nonzero") += 1;
        } else {
            zs.push(b.inv().expect("nonzero"));
            ks.push(1);
        }
    }
    let negative = zs.len() % 2 == 1;
    (zs, ks, negative)
}

/// Convergence ratio of both halves for the split point `s`.
fn split_ratio(a: &[CRational], s: f64) -> f64 {
    let mut rho: f64 = 0.0;
    for p in a {
        if !p.is_zero() {
            rho = rho.max(s / p.abs_f64());
        }
        if !p.is_one() {
            rho = rho.max((1.0 - s) / p.one_minus().abs_f64());
        }
    }
    rho
}

/// Split point from the grid `j/48` minimizing the convergence ratio.
pub fn choose_split(a: &[CRational]) -> (BigRational, f64) {
    let mut best = (BigRational::new(1.into(), 2.into()), split_ratio(a, 0.5));
    for j in 1..48 {
        let s = j as f64 / 48.0;
        let rho = split_ratio(a, s);
        if rho < best.1 - 1e-12 {
            best = (BigRational::new(j.into(), 48.into()), rho);
        }
    }
    best
}

fn signed_li(bs: &[CRational], bits: u32, target_bits: u32) -> Result<Complex> {
    if bs.is_empty() {
        return Ok(Complex::one(bits));
    }
    let (zs, ks, negative) = word_to_li(bs);
    let (v, _) = li_direct(&zs, &ks, bits, target_bits)?;
    Ok(if negative { v.neg() } else { v })
}

/// `I(0; w; 1)` at working precision `bits`, truncating every series at `2^-target_bits`.
pub fn holder_bits(w: &Word, bits: u32, target_bits: u32) -> Result<Complex> {
    validate(w)?;
    let a = match points(w) {
        Some(a) => a,
        None => return Ok(Complex::zero(bits)),
    };
    if a.is_empty() {
        return Ok(Complex::one(bits));
    }
    let (s, rho) = choose_split(&a);
    if rho >= 1.0 {
        return Err(Error::LetterOnPath(w.to_string()));
    }
    let s = CRational::real(s);
    let one_minus_s = s.one_minus();
    let k = a.len();
    let mut total = Complex::zero(bits);
    for i in 0..=k {
        let prefix: Vec<CRational> = a[..i].iter().map(|p| p.clone() / s.clone()).collect();
        let suffix: Vec<CRational> = a[i..]
            .iter()
            .rev()
            .map(|p| p.one_minus() / one_minus_s.clone())
            .collect();
        let left = signed_li(&prefix, bits, target_bits)?;
        if left.is_zero() {
            continue;
        }
        let mut right = signed_li(&suffix, bits, target_bits)?;
        if (k - i) % 2 == 1 {
            right = right.neg();
        }
        total = total.add(&left.mul(&right));
    }
    Ok(total)
}
