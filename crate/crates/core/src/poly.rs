//! Sparse multivariate polynomials over a pluggable coefficient ring.
//!
//! Monomials are packed into a `u128` (up to 8 variables, exponents below
//! 2^16), with variable 0 in the most significant bits so the natural integer
//! order is lexicographic.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::number::fmt_rational;

pub const MAX_VARS: usize = 8;
const EXP_BITS: u32 = 16;
const EXP_MASK: u128 = (1 << EXP_BITS) - 1;

/// Coefficient ring operations.
#[allow(clippy::wrong_self_convention)]
pub trait Ring: Clone + fmt::Debug + PartialEq + Send + Sync {
    type Elem: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    /// Image of a rational; fails when the denominator is not invertible.
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem>;
    fn format(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(n))
    }

    /// `1 / n^k`
    fn inv_pow(&self, n: u64, k: u32) -> Result<Self::Elem> {
        let d = num_traits::pow(BigInt::from(n), k as usize);
        self.from_rational(&BigRational::new(BigInt::one(), d))
    }
}

/// The field of rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn from_rational(&self, q: &BigRational) -> Result<BigRational> {
        Ok(q.clone())
    }
    fn format(&self, a: &BigRational) -> String {
        fmt_rational(a)
    }
}

/// An exponent vector packed into 128 bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(u128);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    fn shift(var: usize) -> u32 {
        (MAX_VARS - 1 - var) as u32 * EXP_BITS
    }

    pub fn var(var: usize) -> Monomial {
        Monomial(1u128 << Self::shift(var))
    }

    pub fn from_exponents(exps: &[u32]) -> Result<Monomial> {
        if exps.len() > MAX_VARS {
            return Err(Error::TooManyVariables(exps.len(), MAX_VARS));
        }
        let mut m = 0u128;
        for (i, &e) in exps.iter().enumerate() {
            if e as u128 > EXP_MASK {
                return Err(Error::ExponentOverflow);
            }
            m |= (e as u128) << Self::shift(i);
        }
        Ok(Monomial(m))
    }

    pub fn exponent(&self, var: usize) -> u32 {
        ((self.0 >> Self::shift(var)) & EXP_MASK) as u32
    }

    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exponent(i)).collect()
    }

    /// Product of monomials. Exponent overflow is a programming error at the
    /// sizes used here and is caught in debug builds.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Monomial) -> Monomial {
        debug_assert!((0..MAX_VARS).all(|i| self.exponent(i) + other.exponent(i) <= EXP_MASK as u32));
        Monomial(self.0 + other.0)
    }

    pub fn degree(&self) -> u32 {
        (0..MAX_VARS).map(|i| self.exponent(i)).sum()
    }
}

/// A polynomial in named variables over the ring `R`.
#[derive(Clone, Debug)]
pub struct Poly<R: Ring> {
    ring: R,
    vars: Vec<String>,
    terms: BTreeMap<Monomial, R::Elem>,
}

impl<R: Ring> PartialEq for Poly<R> {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.terms == other.terms
    }
}

impl<R: Ring> Poly<R> {
    pub fn zero(ring: &R, vars: &[String]) -> Result<Self> {
        if vars.len() > MAX_VARS {
            return Err(Error::TooManyVariables(vars.len(), MAX_VARS));
        }
        Ok(Poly {
            ring: ring.clone(),
            vars: vars.to_vec(),
            terms: BTreeMap::new(),
        })
    }

    fn empty_like(&self) -> Self {
        Poly {
            ring: self.ring.clone(),
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &R, vars: &[String], c: R::Elem) -> Result<Self> {
        let mut p = Self::zero(ring, vars)?;
        p.add_term(Monomial::ONE, c);
        Ok(p)
    }

    pub fn one(ring: &R, vars: &[String]) -> Result<Self> {
        Self::constant(ring, vars, ring.one())
    }

    pub fn var(ring: &R, vars: &[String], name: &str) -> Result<Self> {
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?;
        let mut p = Self::zero(ring, vars)?;
        p.add_term(Monomial::var(i), ring.one());
        Ok(p)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &R::Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> R::Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// The constant term (also the value when there are no variables).
    pub fn constant_term(&self) -> R::Elem {
        self.coefficient(&Monomial::ONE)
    }

    pub fn add_term(&mut self, m: Monomial, c: R::Elem) {
        if self.ring.is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = self.ring.add(o.get(), &c);
                if self.ring.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Poly<R>) {
        debug_assert_eq!(self.vars, other.vars);
        for (m, c) in &other.terms {
            self.add_term(*m, c.clone());
        }
    }

    pub fn add(&self, other: &Poly<R>) -> Poly<R> {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Poly<R>) -> Poly<R> {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, self.ring.neg(c));
        }
        out
    }

    pub fn neg(&self) -> Poly<R> {
        self.scale(&self.ring.neg(&self.ring.one()))
    }

    pub fn scale(&self, c: &R::Elem) -> Poly<R> {
        let mut out = self.empty_like();
        if self.ring.is_zero(c) {
            return out;
        }
        for (m, a) in &self.terms {
            let v = self.ring.mul(a, c);
            if !self.ring.is_zero(&v) {
                out.terms.insert(*m, v);
            }
        }
        out
    }

    pub fn mul(&self, other: &Poly<R>) -> Poly<R> {
        debug_assert_eq!(self.vars, other.vars);
        // cheap path for multiplication by a single term
        if other.terms.len() == 1 {
            let (m, c) = other.terms.iter().next().unwrap();
            return self.mul_term(*m, c);
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            return other.mul_term(*m, c);
        }
        let mut out = self.empty_like();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(*m2), self.ring.mul(c1, c2));
            }
        }
        out
    }

    pub fn mul_term(&self, m: Monomial, c: &R::Elem) -> Poly<R> {
        let mut out = self.empty_like();
        for (m1, c1) in &self.terms {
            let v = self.ring.mul(c1, c);
            if !self.ring.is_zero(&v) {
                out.terms.insert(m1.mul(m), v);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly<R> {
        let mut acc = Poly::one(&self.ring, &self.vars).expect("vars already validated");
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Evaluate at a full assignment of the variables.
    pub fn eval(&self, values: &[R::Elem]) -> R::Elem {
        assert_eq!(values.len(), self.vars.len());
        let mut acc = self.ring.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, v) in values.iter().enumerate() {
                for _ in 0..m.exponent(i) {
                    t = self.ring.mul(&t, v);
                }
            }
            acc = self.ring.add(&acc, &t);
        }
        acc
    }

    /// Map the coefficients into another ring, keeping the variables.
    pub fn map_ring<S: Ring>(&self, ring: &S, f: impl Fn(&R::Elem) -> Result<S::Elem>) -> Result<Poly<S>> {
        let mut out = Poly::zero(ring, &self.vars)?;
        for (m, c) in &self.terms {
            out.add_term(*m, f(c)?);
        }
        Ok(out)
    }

    /// The first monomial (in term order) where `self` and `other` differ.
    pub fn first_difference(&self, other: &Poly<R>) -> Option<(Monomial, R::Elem, R::Elem)> {
        let diff = self.sub(other);
        diff.terms
            .keys()
            .next()
            .map(|m| (*m, self.coefficient(m), other.coefficient(m)))
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, v) in self.vars.iter().enumerate() {
            match m.exponent(i) {
                0 => {}
                1 => parts.push(v.clone()),
                e => parts.push(format!("{v}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl<R: Ring> fmt::Display for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let s: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let c = self.ring.format(c);
                if *m == Monomial::ONE {
                    c
                } else if c == "1" {
                    self.format_monomial(m)
                } else {
                    format!("{}*{}", c, self.format_monomial(m))
                }
            })
            .collect();
        write!(f, "{}", s.join(" + "))
    }
}

/// Polynomials with exact rational coefficients.
pub type RationalPolynomial = Poly<Rationals>;

/// Binomial coefficient by incremental multiplication.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::rat;

    fn vars(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("z{i}")).collect()
    }

    #[test]
    fn monomial_packing() {
        let m = Monomial::from_exponents(&[3, 0, 7]).unwrap();
        assert_eq!(m.exponents(3), vec![3, 0, 7]);
        assert_eq!(m.degree(), 10);
        assert_eq!(m.mul(Monomial::var(1)).exponents(3), vec![3, 1, 7]);
        assert!(Monomial::var(0) > Monomial::var(1));
        assert!(Monomial::from_exponents(&[0; 9]).is_err());
        assert!(Monomial::from_exponents(&[1 << 16]).is_err());
    }

    #[test]
    fn arithmetic_cancels_and_multiplies() {
        let v = vars(2);
        let z1 = Poly::var(&Rationals, &v, "z1").unwrap();
        let z2 = Poly::var(&Rationals, &v, "z2").unwrap();
        let one = Poly::one(&Rationals, &v).unwrap();
        let a = one.sub(&z1); // 1 - z1
        let b = one.add(&z1); // 1 + z1
        let prod = a.mul(&b);
        assert_eq!(prod, one.sub(&z1.mul(&z1)));
        assert!(z2.sub(&z2).is_zero());
        let q = z1.scale(&rat(1, 4)).add(&z2);
        assert_eq!(q.eval(&[rat(2, 1), rat(1, 3)]), rat(5, 6));
        assert_eq!(a.pow(2).to_string(), "z1^2 + -2*z1 + 1");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(11, 0), BigInt::from(1));
        assert_eq!(binomial(3, 4), BigInt::from(0));
        assert_eq!(binomial(60, 30).to_string(), "118264581564861424");
    }
}
