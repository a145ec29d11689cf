//! Iterated integrals by Taylor stepping of the triangular system
//! `G_0 = 1`, `G_j'(t) = G_{j-1}(t) / (t - a_j)` along `[0, 1]`.
//!
//! Around `c` the coefficients of `G_j(c + h) = Σ g_{j,m} h^m` satisfy
//! `g_{j,m+1} = (g_{j-1,m} - m g_{j,m}) / ((c - a_j)(m + 1))`, and at
//! `c = a_j = 0` simply `g_{j,m} = g_{j-1,m} / m`.
//! Steps are half the distance to the nearest singular letter.

use crate::error::{Error, Result};
use crate::number::CRational;
use crate::word::{Letter, Word};

use super::fixed::{Complex, Real};
use super::holder::validate;

const MAX_ORDER: usize = 100_000;
const MAX_STEPS: usize = 100_000;

/// `I(0; w; 1)`. The final stretch `[1 - δ, 1]` is dropped when `1` is a
/// letter; `δ` is chosen so that the neglected `O(δ log^k δ)` is below `2^-target_bits`.
pub fn chen_ode_bits(w: &Word, bits: u32, target_bits: u32) -> Result<Complex> {
    validate(w)?;
    let mut letters: Vec<CRational> = Vec::with_capacity(w.len());
    for l in w.letters() {
        match l {
            Letter::Point(p) => letters.push(p.clone()),
            Letter::Infinity => return Ok(Complex::zero(bits)),
        }
    }
    let k = letters.len();
    if k == 0 {
        return Ok(Complex::one(bits));
    }
    let a: Vec<Complex> = letters.iter().map(|p| Complex::from_crational(p, bits)).collect();
    // offsets a - 1 taken exactly, so letters within f64 rounding of 1 keep their distance
    let a_f: Vec<(f64, f64)> = letters
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| (p.clone() - CRational::one()).to_f64_pair())
        .collect();
    let has_zero = letters.iter().any(|p| p.is_zero());
    let has_one = letters.iter().any(|p| p.is_one());
    let ln2 = std::f64::consts::LN_2;
    // δ log^k(1/δ) < 2^-target
    let delta_log2 = -(target_bits as f64) - 4.0 - k as f64 * ((target_bits as f64 + 8.0) * ln2).log2().max(1.0);
    let eps_log2 = -(target_bits as f64) - 8.0;

    let mut g_prev: Vec<Complex> = vec![Complex::zero(bits); k + 1];
    g_prev[0] = Complex::one(bits);
    let mut c = Real::zero(bits);
    // 1 - c, tracked separately so step sizes near t = 1 keep full relative accuracy
    let mut rem = 1.0f64;
    for _ in 0..MAX_STEPS {
        if has_one && rem.log2() < delta_log2 {
            break;
        }
        let mut radius = f64::INFINITY;
        for &(x, y) in &a_f {
            radius = radius.min((x + rem).hypot(y));
        }
        if has_zero && rem < 1.0 {
            radius = radius.min(1.0 - rem);
        }
        let last = !has_one && radius / 2.0 >= rem;
        let (h, h_f) = if last {
            (Real::one(bits).sub(&c), rem)
        } else {
            let h_f = radius / 2.0;
            if h_f.log2() < -(bits as f64) + 8.0 {
                return Err(Error::StepUnderflow(format!("{}", 1.0 - rem)));
            }
            (Real::from_f64(h_f, bits), h_f)
        };
        let at_zero = c.is_zero();
        let inv: Vec<Option<Complex>> = a
            .iter()
            .zip(&letters)
            .map(|(aj, p)| {
                if at_zero && p.is_zero() {
                    None
                } else {
                    Some(Complex::from_real(c.clone()).sub(aj).inv().mul_real(&h))
                }
            })
            .collect();
        // columns u_{j,m} = g_{j,m} h^m, built one order at a time; scaling by h
        // up front keeps them O(1) even where 1/(c - a_j) is huge
        let mut col = g_prev.clone();
        let mut next = g_prev.clone();
        let mut quiet = 0;
        let ratio_log2 = (h_f / radius).log2().min(-0.5);
        for m in 0..MAX_ORDER {
            let mut new_col = vec![Complex::zero(bits); k + 1];
            for j in 1..=k {
                new_col[j] = match &inv[j - 1] {
                    None => new_col[j - 1].div_int(m as u64 + 1),
                    Some(iv) => col[j - 1].sub(&col[j].mul_int(m as i64)).mul(iv).div_int(m as u64 + 1),
                };
            }
            let mut biggest = f64::NEG_INFINITY;
            for j in 1..=k {
                biggest = biggest.max(new_col[j].log2_abs());
                next[j] = next[j].add(&new_col[j]);
            }
            col = new_col;
            // geometric decay with ratio h / radius bounds the remainder
            if biggest - (1.0 - ratio_log2.exp2()).log2() < eps_log2 {
                quiet += 1;
                if quiet >= 3 {
                    break;
                }
            } else {
                quiet = 0;
            }
            if m + 1 == MAX_ORDER {
                return Err(Error::TermCap {
                    cap: MAX_ORDER,
                    needed: MAX_ORDER + 1,
                });
            }
        }
        g_prev = next;
        c = c.add(&h);
        rem -= h_f;
        if last {
            break;
        }
    }
    Ok(g_prev[k].clone())
}
