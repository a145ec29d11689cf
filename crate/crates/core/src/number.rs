//! Exact rational and Gaussian-rational numbers used as arguments and letters.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parse `p`, `-p`, `p/q` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: `{s}`"));
    if s.is_empty() {
        return Err(bad());
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

/// Parse a decimal such as `-1.25` or `6.02e23` exactly; plain rationals are accepted too.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.contains('/') {
        return parse_rational(s);
    }
    let bad = || Error::Parse(format!("not a decimal number: `{s}`"));
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int_part, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if frac.starts_with(['+', '-']) || (int_part.is_empty() && frac.is_empty()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac}");
    let digits = if digits == "-" || digits == "+" || digits.is_empty() {
        return Err(bad());
    } else {
        digits
    };
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        BigRational::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(n, num_traits::pow(ten, (-scale) as usize))
    })
}

pub fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A complex number with exact rational real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl CRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        CRational { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        CRational {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// |z|^2, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        CRational::new(self.re.clone(), -self.im.clone())
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(CRational::new(&self.re / &n, -(&self.im / &n)))
    }

    /// `1 - z`
    pub fn one_minus(&self) -> Self {
        CRational::one() - self.clone()
    }

    /// Integer power (negative exponents invert).
    pub fn powi(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = CRational::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc * base.clone();
        }
        Some(acc)
    }

    /// Whether the point lies on the open real segment (0,1).
    pub fn in_open_unit_interval(&self) -> bool {
        self.im.is_zero() && self.re.is_positive() && self.re < BigRational::one()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }

    pub fn abs_f64(&self) -> f64 {
        let (a, b) = self.to_f64_pair();
        a.hypot(b)
    }

    /// Parse `p/q`, `p/q+r/s i`, `r/s i`, `i`, `-i` (whitespace ignored).
    pub fn parse(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::Parse("empty number".into()));
        }
        if !t.ends_with('i') {
            return Ok(Self::real(parse_rational(&t)?));
        }
        let body = &t[..t.len() - 1];
        // split at the last sign that is not the leading one
        let split = body
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i)
            .next_back();
        let (re_s, im_s) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let im_s = match im_s {
            "" | "+" => "1",
            "-" => "-1",
            other => other.strip_prefix('+').unwrap_or(other),
        };
        let im_s = im_s.strip_suffix('*').unwrap_or(im_s);
        Ok(CRational::new(parse_rational(re_s)?, parse_rational(im_s)?))
    }
}

pub fn ratio_to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or_else(|| {
        // fall back to a scaled quotient for huge numerators/denominators
        let n = q.numer().bits() as i64;
        let d = q.denom().bits() as i64;
        let shift = (n - d).clamp(-1000, 1000);
        let scaled = if shift > 0 {
            BigRational::new(q.numer().clone(), q.denom() << shift as usize)
        } else {
            BigRational::new(q.numer() << (-shift) as usize, q.denom().clone())
        };
        scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
    })
}

impl fmt::Display for CRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        let im = if self.im.is_one() {
            String::new()
        } else if (-self.im.clone()).is_one() {
            "-".to_string()
        } else {
            fmt_rational(&self.im)
        };
        if self.re.is_zero() {
            write!(f, "{im}i")
        } else if self.im.is_negative() {
            write!(f, "{}{}i", fmt_rational(&self.re), im)
        } else {
            write!(f, "{}+{}i", fmt_rational(&self.re), im)
        }
    }
}

impl Add for CRational {
    type Output = CRational;
    fn add(self, o: CRational) -> CRational {
        CRational::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for CRational {
    type Output = CRational;
    fn sub(self, o: CRational) -> CRational {
        CRational::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for CRational {
    type Output = CRational;
    fn mul(self, o: CRational) -> CRational {
        CRational::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl Div for CRational {
    type Output = CRational;
    /// Panics on division by zero; callers check with [`CRational::inv`] first.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: CRational) -> CRational {
        self * o.inv().expect("division by zero")
    }
}

impl Neg for CRational {
    type Output = CRational;
    fn neg(self) -> CRational {
        CRational::new(-self.re, -self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals() {
        assert_eq!(parse_decimal("-1.25").unwrap(), rat(-5, 4));
        assert_eq!(parse_decimal("2.5e2").unwrap(), rat(250, 1));
        assert_eq!(parse_decimal(".5").unwrap(), rat(1, 2));
        assert_eq!(parse_decimal("3/4").unwrap(), rat(3, 4));
        assert!(parse_decimal("1.2.3").is_err());
        assert!(parse_decimal("-").is_err());
    }

    #[test]
    fn parses_complex_forms() {
        assert_eq!(CRational::parse("1/2").unwrap(), CRational::real(rat(1, 2)));
        assert_eq!(
            CRational::parse("-1/2+1/2i").unwrap(),
            CRational::new(rat(-1, 2), rat(1, 2))
        );
        assert_eq!(
            CRational::parse("-1/2 - 1/2 i").unwrap(),
            CRational::new(rat(-1, 2), rat(-1, 2))
        );
        assert_eq!(CRational::parse("i").unwrap(), CRational::new(rat(0, 1), rat(1, 1)));
        assert_eq!(CRational::parse("-i").unwrap(), CRational::new(rat(0, 1), rat(-1, 1)));
        assert_eq!(CRational::parse("3/4i").unwrap(), CRational::new(rat(0, 1), rat(3, 4)));
        assert!(CRational::parse("1/0").is_err());
        assert!(CRational::parse("x").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["1/2", "-3", "1/2+1/3i", "-1-i", "2i", "-1/2-1/5i"] {
            let z = CRational::parse(s).unwrap();
            assert_eq!(CRational::parse(&z.to_string()).unwrap(), z, "{s}");
        }
    }

    #[test]
    fn inverse_and_interval() {
        let w = CRational::new(rat(-1, 2), rat(1, 2));
        assert_eq!(w.inv().unwrap(), CRational::new(rat(-1, 1), rat(-1, 1)));
        assert!(CRational::real(rat(1, 3)).in_open_unit_interval());
        assert!(!CRational::real(rat(1, 1)).in_open_unit_interval());
        assert!(!CRational::new(rat(1, 3), rat(1, 9)).in_open_unit_interval());
        assert!(CRational::zero().inv().is_none());
    }
}
