//! Binary fixed-point reals and complexes over `BigInt`.
//!
//! A value is `mant * 2^-bits`. Operands of one computation share `bits`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::number::CRational;

/// Guard digits added on top of the requested precision.
pub const GUARD_DIGITS: u32 = 15;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working bits for `digits` decimal digits plus guard digits.
pub fn bits_for(digits: u32) -> u32 {
    ((digits + GUARD_DIGITS) as f64 * LOG2_10).ceil() as u32 + 8
}

fn shr_round(x: BigInt, s: u32) -> BigInt {
    if s == 0 {
        return x;
    }
    let half = BigInt::from(1) << (s - 1);
    (x + half) >> s
}

fn div_round(n: BigInt, d: &BigInt) -> BigInt {
    let two_n: BigInt = n << 1;
    let q = &two_n / d;
    // q = floor-ish(2n/d); round half away from zero
    let sign = if q.is_negative() { -1 } else { 1 };
    (q + sign) / 2
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Real {
    mant: BigInt,
    bits: u32,
}

impl Real {
    pub fn zero(bits: u32) -> Real {
        Real {
            mant: BigInt::zero(),
            bits,
        }
    }

    pub fn from_int(n: i64, bits: u32) -> Real {
        Real {
            mant: BigInt::from(n) << bits,
            bits,
        }
    }

    pub fn one(bits: u32) -> Real {
        Real::from_int(1, bits)
    }

    pub fn from_rational(q: &BigRational, bits: u32) -> Real {
        let n: BigInt = q.numer().clone() << bits;
        Real {
            mant: div_round(n, q.denom()),
            bits,
        }
    }

    pub fn from_f64(x: f64, bits: u32) -> Real {
        let q = BigRational::from_float(x).expect("finite float");
        Real::from_rational(&q, bits)
    }

    pub fn from_mantissa(mant: BigInt, bits: u32) -> Real {
        Real { mant, bits }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn add(&self, o: &Real) -> Real {
        debug_assert_eq!(self.bits, o.bits);
        Real {
            mant: &self.mant + &o.mant,
            bits: self.bits,
        }
    }

    pub fn sub(&self, o: &Real) -> Real {
        debug_assert_eq!(self.bits, o.bits);
        Real {
            mant: &self.mant - &o.mant,
            bits: self.bits,
        }
    }

    pub fn neg(&self) -> Real {
        Real {
            mant: -&self.mant,
            bits: self.bits,
        }
    }

    pub fn abs(&self) -> Real {
        Real {
            mant: self.mant.abs(),
            bits: self.bits,
        }
    }

    pub fn mul(&self, o: &Real) -> Real {
        debug_assert_eq!(self.bits, o.bits);
        Real {
            mant: shr_round(&self.mant * &o.mant, self.bits),
            bits: self.bits,
        }
    }

    pub fn div(&self, o: &Real) -> Real {
        debug_assert_eq!(self.bits, o.bits);
        let n: BigInt = self.mant.clone() << self.bits;
        Real {
            mant: div_round(n, &o.mant),
            bits: self.bits,
        }
    }

    pub fn mul_int(&self, n: i64) -> Real {
        Real {
            mant: &self.mant * n,
            bits: self.bits,
        }
    }

    pub fn div_int(&self, n: u64) -> Real {
        Real {
            mant: div_round(self.mant.clone(), &BigInt::from(n)),
            bits: self.bits,
        }
    }

    pub fn div_bigint(&self, n: &BigInt) -> Real {
        Real {
            mant: div_round(self.mant.clone(), n),
            bits: self.bits,
        }
    }

    /// Change the working precision.
    pub fn with_bits(&self, bits: u32) -> Real {
        let mant = match bits.cmp(&self.bits) {
            Ordering::Equal => self.mant.clone(),
            Ordering::Greater => self.mant.clone() << (bits - self.bits),
            Ordering::Less => shr_round(self.mant.clone(), self.bits - bits),
        };
        Real { mant, bits }
    }

    pub fn to_f64(&self) -> f64 {
        let m = self.mant.to_f64().unwrap_or(f64::NAN);
        if m.is_finite() {
            m * (2f64).powi(-(self.bits as i32))
        } else {
            let shift = self.mant.bits().saturating_sub(60) as u32;
            let top = (&self.mant >> shift).to_f64().unwrap_or(f64::NAN);
            top * (2f64).powi(shift as i32 - self.bits as i32)
        }
    }

    /// `log2 |x|`, rounded up; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.mant.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.mant.bits() as f64 - self.bits as f64
        }
    }

    /// `log10 |x|`, an upper estimate; `-inf` for zero.
    pub fn log10_abs(&self) -> f64 {
        self.log2_abs() / LOG2_10
    }

    /// Decimal string with exactly `digits` digits after the point, rounded.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scaled = shr_round(
            &self.mant * num_traits::pow(BigInt::from(10), digits as usize),
            self.bits,
        );
        let neg = scaled.sign() == Sign::Minus;
        let mut s = scaled.abs().to_string();
        if digits > 0 {
            if s.len() <= digits as usize {
                s = format!("{}{}", "0".repeat(digits as usize + 1 - s.len()), s);
            }
            s.insert(s.len() - digits as usize, '.');
        }
        if neg {
            format!("-{s}")
        } else {
            s
        }
    }

    /// Exact rational value of the stored number.
    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mant.clone(), BigInt::from(1) << self.bits)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = (self.bits as f64 / LOG2_10).floor() as u32;
        write!(f, "{}", self.to_decimal(d.saturating_sub(GUARD_DIGITS)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Complex {
        Complex { re, im }
    }

    pub fn zero(bits: u32) -> Complex {
        Complex {
            re: Real::zero(bits),
            im: Real::zero(bits),
        }
    }

    pub fn one(bits: u32) -> Complex {
        Complex {
            re: Real::one(bits),
            im: Real::zero(bits),
        }
    }

    pub fn from_real(re: Real) -> Complex {
        let bits = re.bits();
        Complex {
            re,
            im: Real::zero(bits),
        }
    }

    pub fn from_crational(z: &CRational, bits: u32) -> Complex {
        Complex {
            re: Real::from_rational(&z.re, bits),
            im: Real::from_rational(&z.im, bits),
        }
    }

    pub fn bits(&self) -> u32 {
        self.re.bits()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Complex) -> Complex {
        Complex {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    pub fn sub(&self, o: &Complex) -> Complex {
        Complex {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    pub fn neg(&self) -> Complex {
        Complex {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn mul(&self, o: &Complex) -> Complex {
        if self.im.is_zero() && o.im.is_zero() {
            return Complex::from_real(self.re.mul(&o.re));
        }
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        Complex { re, im }
    }

    pub fn mul_real(&self, r: &Real) -> Complex {
        Complex {
            re: self.re.mul(r),
            im: self.im.mul(r),
        }
    }

    pub fn mul_int(&self, n: i64) -> Complex {
        Complex {
            re: self.re.mul_int(n),
            im: self.im.mul_int(n),
        }
    }

    pub fn div_int(&self, n: u64) -> Complex {
        Complex {
            re: self.re.div_int(n),
            im: self.im.div_int(n),
        }
    }

    pub fn div_bigint(&self, n: &BigInt) -> Complex {
        Complex {
            re: self.re.div_bigint(n),
            im: self.im.div_bigint(n),
        }
    }

    /// `1/z` by Smith's scaling, so tiny `z` keeps its relative accuracy.
    pub fn inv(&self) -> Complex {
        let bits = self.bits();
        let one = Real::one(bits);
        if self.im.is_zero() {
            return Complex::from_real(one.div(&self.re));
        }
        if self.re.abs().sub(&self.im.abs()).mantissa().is_negative() {
            let r = self.re.div(&self.im);
            let d = self.re.mul(&r).add(&self.im);
            Complex {
                re: r.div(&d),
                im: one.div(&d).neg(),
            }
        } else {
            let r = self.im.div(&self.re);
            let d = self.re.add(&self.im.mul(&r));
            Complex {
                re: one.div(&d),
                im: r.div(&d).neg(),
            }
        }
    }

    pub fn with_bits(&self, bits: u32) -> Complex {
        Complex {
            re: self.re.with_bits(bits),
            im: self.im.with_bits(bits),
        }
    }

    /// `log2` of the larger component magnitude.
    pub fn log2_abs(&self) -> f64 {
        self.re.log2_abs().max(self.im.log2_abs())
    }

    pub fn abs_f64(&self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }

    pub fn to_decimal(&self, digits: u32) -> (String, String) {
        (self.re.to_decimal(digits), self.im.to_decimal(digits))
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{} + {} i", self.re, self.im)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::rat;

    #[test]
    fn arithmetic_round_trips() {
        let b = bits_for(30);
        let third = Real::from_rational(&rat(1, 3), b);
        let one = third.mul_int(3);
        assert!(one.sub(&Real::one(b)).log2_abs() < -(b as f64) + 3.0);
        let x = Real::from_rational(&rat(-7, 4), b);
        assert_eq!(x.to_decimal(3), "-1.750");
        assert_eq!(Real::from_rational(&rat(1, 8), b).to_decimal(2), "0.13");
        assert_eq!(Real::from_rational(&rat(-1, 100), b).to_decimal(1), "0.0");
        let q = x.div(&third);
        assert!((q.to_f64() + 5.25).abs() < 1e-12);
    }

    #[test]
    fn complex_inverse() {
        let b = bits_for(20);
        let z = Complex::from_crational(&CRational::parse("3+4i").unwrap(), b);
        let w = z.inv().mul(&z);
        assert!(w.sub(&Complex::one(b)).log2_abs() < -(b as f64) + 4.0);
    }

    #[test]
    fn precision_change() {
        let x = Real::from_rational(&rat(2, 3), 100);
        let y = x.with_bits(40).with_bits(100);
        assert!(x.sub(&y).log2_abs() < -39.0);
    }
}
