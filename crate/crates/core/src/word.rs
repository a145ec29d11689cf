//! Words in the letters `e_a` (the 1-forms `dt/(t-a)`), their linear
//! combinations, the shuffle product and shuffle regularization.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::index::{Index, VarIndex};
use crate::number::CRational;

/// A point label. `Infinity` stands for `e_∞`, which is regarded as zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Point(CRational),
    Infinity,
}

impl Letter {
    pub fn zero() -> Letter {
        Letter::Point(CRational::zero())
    }

    pub fn one() -> Letter {
        Letter::Point(CRational::one())
    }

    pub fn int(n: i64) -> Letter {
        Letter::Point(CRational::from_int(n))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Letter::Point(a) if a.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Letter::Point(a) if a.is_one())
    }

    /// `a -> 1 - a`, fixing ∞.
    pub fn reflect(&self) -> Letter {
        match self {
            Letter::Point(a) => Letter::Point(a.one_minus()),
            Letter::Infinity => Letter::Infinity,
        }
    }

    /// `a -> 1/a` with `0 <-> ∞`.
    pub fn invert(&self) -> Letter {
        match self {
            Letter::Point(a) => a.inv().map_or(Letter::Infinity, Letter::Point),
            Letter::Infinity => Letter::zero(),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Point(a) => write!(f, "{a}"),
            Letter::Infinity => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for Letter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "inf" || t == "∞" {
            Ok(Letter::Infinity)
        } else {
            Ok(Letter::Point(CRational::parse(t)?))
        }
    }
}

/// An ordered sequence of letters, read from the start point of the path to its end.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn from_ints(v: &[i64]) -> Word {
        Word(v.iter().map(|&a| Letter::int(a)).collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains_infinity(&self) -> bool {
        self.0.iter().any(|l| matches!(l, Letter::Infinity))
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Convergent as an iterated integral from 0 to 1: first letter is not 0,
    /// last letter is not 1, and no letter lies on the open segment (0,1).
    pub fn is_convergent(&self) -> bool {
        let ends_ok = !self.0.first().is_some_and(Letter::is_zero) && !self.0.last().is_some_and(Letter::is_one);
        ends_ok
            && self
                .0
                .iter()
                .all(|l| !matches!(l, Letter::Point(a) if a.in_open_unit_interval()))
    }

    /// Reverse the letters and map each `a` to `1 - a` (the `t -> 1 - t` substitution).
    pub fn dual(&self) -> Word {
        Word(self.0.iter().rev().map(Letter::reflect).collect())
    }

    /// Apply `e_a -> e_{1/a} - e_0` (with `e_0 -> -e_0`) letterwise and expand.
    pub fn invert(&self) -> WordCombination {
        let mut acc = WordCombination::unit();
        for l in &self.0 {
            let factor = match l {
                Letter::Point(a) if a.is_zero() => {
                    WordCombination::from_terms([(Word(vec![Letter::zero()]), -BigRational::one())])
                }
                Letter::Point(a) => WordCombination::from_terms([
                    (Word(vec![Letter::Point(a.inv().unwrap())]), BigRational::one()),
                    (Word(vec![Letter::zero()]), -BigRational::one()),
                ]),
                Letter::Infinity => return WordCombination::zero(),
            };
            acc = acc.concat(&factor);
        }
        acc
    }

    /// Read a word over `{0,1}` beginning with 1 back as an index.
    pub fn to_index(&self) -> Result<Index> {
        let mut parts: Vec<u32> = Vec::new();
        for l in &self.0 {
            if l.is_one() {
                parts.push(1);
            } else if l.is_zero() {
                match parts.last_mut() {
                    Some(k) => *k += 1,
                    None => return Err(Error::Parse(format!("word {self} starts with 0"))),
                }
            } else {
                return Err(Error::Parse(format!("word {self} has a letter outside {{0,1}}")));
            }
        }
        Index::new(parts)
    }

    /// Read a word beginning with a nonzero letter as `(z; k)` with `z_i = 1/a_i`.
    pub fn to_var_index(&self) -> Result<VarIndex> {
        let mut parts: Vec<u32> = Vec::new();
        let mut args = Vec::new();
        for l in &self.0 {
            match l {
                Letter::Point(a) if a.is_zero() => match parts.last_mut() {
                    Some(k) => *k += 1,
                    None => return Err(Error::DivergentWord(format!("{self} starts with 0"))),
                },
                Letter::Point(a) => {
                    parts.push(1);
                    args.push(crate::index::Arg::Num(a.inv().unwrap()));
                }
                Letter::Infinity => {
                    parts.push(1);
                    args.push(crate::index::Arg::int(0));
                }
            }
        }
        VarIndex::new(args, Index::new(parts)?)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "[{}]", s.join(","))
    }
}

impl std::str::FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('[').trim_end_matches(']').trim();
        if t.is_empty() {
            return Ok(Word::empty());
        }
        Ok(Word(t.split(',').map(str::parse).collect::<Result<_>>()?))
    }
}

/// A finite rational linear combination of words with no zero coefficients stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WordCombination {
    terms: BTreeMap<Word, BigRational>,
}

impl WordCombination {
    pub fn zero() -> Self {
        WordCombination::default()
    }

    /// The empty word with coefficient 1.
    pub fn unit() -> Self {
        Self::from_word(Word::empty())
    }

    pub fn from_word(w: Word) -> Self {
        let mut c = Self::zero();
        c.add_term(w, BigRational::one());
        c
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, BigRational)>>(terms: I) -> Self {
        let mut c = Self::zero();
        for (w, q) in terms {
            c.add_term(w, q);
        }
        c
    }

    pub fn add_term(&mut self, w: Word, q: BigRational) {
        if q.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(q);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += q;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &WordCombination, q: &BigRational) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c * q);
        }
    }

    pub fn scale(&self, q: &BigRational) -> WordCombination {
        let mut out = Self::zero();
        out.add_scaled(self, q);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> BigRational {
        self.terms.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Sum of coefficients (counts interleavings with multiplicity).
    pub fn total(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |a, b| a + b)
    }

    /// Concatenation product, extended bilinearly.
    pub fn concat(&self, other: &WordCombination) -> WordCombination {
        let mut out = Self::zero();
        for (u, p) in &self.terms {
            for (v, q) in &other.terms {
                out.add_term(u.concat(v), p * q);
            }
        }
        out
    }

    /// Shuffle product, extended bilinearly.
    pub fn shuffle(&self, other: &WordCombination) -> WordCombination {
        let mut out = Self::zero();
        for (u, p) in &self.terms {
            for (v, q) in &other.terms {
                out.add_scaled(&shuffle(u, v), &(p * q));
            }
        }
        out
    }
}

impl fmt::Display for WordCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let s: Vec<String> = self
            .terms
            .iter()
            .map(|(w, q)| format!("{}*{}", crate::number::fmt_rational(q), w))
            .collect();
        write!(f, "{}", s.join(" + "))
    }
}

/// All interleavings of `u` and `v` preserving the internal order of each.
pub fn shuffle(u: &Word, v: &Word) -> WordCombination {
    let (a, b) = (u.letters(), v.letters());
    let mut out = WordCombination::zero();
    let mut buf = Vec::with_capacity(a.len() + b.len());
    fn rec(a: &[Letter], b: &[Letter], buf: &mut Vec<Letter>, out: &mut BTreeMap<Word, BigInt>) {
        if a.is_empty() || b.is_empty() {
            let mut w = buf.clone();
            w.extend_from_slice(a);
            w.extend_from_slice(b);
            *out.entry(Word(w)).or_insert_with(BigInt::zero) += 1;
            return;
        }
        buf.push(a[0].clone());
        rec(&a[1..], b, buf, out);
        buf.pop();
        buf.push(b[0].clone());
        rec(a, &b[1..], buf, out);
        buf.pop();
    }
    let mut counts = BTreeMap::new();
    rec(a, b, &mut buf, &mut counts);
    for (w, c) in counts {
        out.add_term(w, BigRational::from_integer(c));
    }
    out
}

/// The shuffle decomposition `w = Σ C_{a,b} ⧢ e_1^{⧢a} ⧢ e_0^{⧢b}` with every
/// `C_{a,b}` a combination of convergent words.
///
/// `a` counts powers of the formal symbol `T` standing for the divergent letter
/// `e_1` at the end of the path, `b` powers of `T_0` standing for `e_0` at the
/// start. The regularized value is the `(0,0)` coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShufflePolynomial {
    terms: BTreeMap<(u32, u32), WordCombination>,
}

impl ShufflePolynomial {
    pub fn constant(c: WordCombination) -> Self {
        let mut p = Self::default();
        p.add(&Self::single((0, 0), c), &BigRational::one());
        p
    }

    fn single(key: (u32, u32), c: WordCombination) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(key, c);
        }
        ShufflePolynomial { terms }
    }

    fn add(&mut self, other: &ShufflePolynomial, q: &BigRational) {
        for (k, c) in &other.terms {
            let e = self.terms.entry(*k).or_default();
            e.add_scaled(c, q);
            if e.is_zero() {
                self.terms.remove(k);
            }
        }
    }

    fn shift(&self, da: u32, db: u32) -> ShufflePolynomial {
        ShufflePolynomial {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), c)| ((a + da, b + db), c.clone()))
                .collect(),
        }
    }

    /// Coefficient of `T^a T_0^b`.
    pub fn coefficient(&self, a: u32, b: u32) -> WordCombination {
        self.terms.get(&(a, b)).cloned().unwrap_or_default()
    }

    /// The regularized value: the coefficient of `T^0 T_0^0`.
    pub fn constant_term(&self) -> WordCombination {
        self.coefficient(0, 0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &WordCombination)> {
        self.terms.iter()
    }

    /// Substitute `T^a T_0^b -> e_1^{⧢a} ⧢ e_0^{⧢b}` and expand.
    pub fn expand(&self) -> WordCombination {
        let e1 = WordCombination::from_word(Word(vec![Letter::one()]));
        let e0 = WordCombination::from_word(Word(vec![Letter::zero()]));
        let mut out = WordCombination::zero();
        for (&(a, b), c) in &self.terms {
            let mut t = c.clone();
            for _ in 0..a {
                t = t.shuffle(&e1);
            }
            for _ in 0..b {
                t = t.shuffle(&e0);
            }
            out.add_scaled(&t, &BigRational::one());
        }
        out
    }
}

/// Shuffle-regularize a word: trailing `e_1` letters and leading `e_0` letters are
/// stripped by the uniqueness of the shuffle-polynomial decomposition.
pub fn shuffle_regularize(w: &Word) -> ShufflePolynomial {
    let mut memo = HashMap::new();
    regularize_memo(w, &mut memo)
}

fn regularize_memo(w: &Word, memo: &mut HashMap<Word, ShufflePolynomial>) -> ShufflePolynomial {
    if let Some(p) = memo.get(w) {
        return p.clone();
    }
    let letters = w.letters();
    let lead = letters.iter().take_while(|l| l.is_zero()).count();
    let result = if lead > 0 {
        // e_0 ⧢ (e_0^{m-1} u) = m e_0^m u + (words with m-1 leading zeros)
        let m = lead as u32;
        let shorter = Word(letters[1..].to_vec());
        let mut p = regularize_memo(&shorter, memo).shift(0, 1);
        for pos in lead..=shorter.len() {
            let mut v = shorter.0.clone();
            v.insert(pos, Letter::zero());
            let q = regularize_memo(&Word(v), memo);
            p.add(&q, &-BigRational::one());
        }
        scale_poly(&p, &BigRational::new(1.into(), m.into()))
    } else {
        let trail = letters.iter().rev().take_while(|l| l.is_one()).count();
        if trail > 0 {
            // (u e_1^{m-1}) ⧢ e_1 = m u e_1^m + (words with m-1 trailing ones)
            let m = trail as u32;
            let shorter = Word(letters[..letters.len() - 1].to_vec());
            let ulen = letters.len() - trail;
            let mut p = regularize_memo(&shorter, memo).shift(1, 0);
            for pos in 0..ulen {
                let mut v = shorter.0.clone();
                v.insert(pos, Letter::one());
                let q = regularize_memo(&Word(v), memo);
                p.add(&q, &-BigRational::one());
            }
            scale_poly(&p, &BigRational::new(1.into(), m.into()))
        } else {
            ShufflePolynomial::constant(WordCombination::from_word(w.clone()))
        }
    };
    memo.insert(w.clone(), result.clone());
    result
}

fn scale_poly(p: &ShufflePolynomial, q: &BigRational) -> ShufflePolynomial {
    let mut out = ShufflePolynomial::default();
    out.add(p, q);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::rat;

    fn w(v: &[i64]) -> Word {
        Word::from_ints(v)
    }

    #[test]
    fn dual_examples() {
        assert_eq!(w(&[1, 0, 0]).dual(), w(&[1, 1, 0]));
        assert_eq!(w(&[1, 0, 1, 0]).dual().dual(), w(&[1, 0, 1, 0]));
        assert_eq!(w(&[1, 1, 0, -1]).dual(), w(&[2, 1, 0, 0]));
        let inf = Word::new(vec![Letter::Infinity, Letter::int(3)]);
        assert_eq!(inf.dual(), Word::new(vec![Letter::int(-2), Letter::Infinity]));
    }

    #[test]
    fn invert_examples() {
        let half = Letter::Point(CRational::real(rat(1, 2)));
        let c = w(&[2]).invert();
        assert_eq!(c.coefficient(&Word::new(vec![half.clone()])), rat(1, 1));
        assert_eq!(c.coefficient(&w(&[0])), rat(-1, 1));
        assert_eq!(c.len(), 2);

        let c = w(&[0]).invert();
        assert_eq!(c, WordCombination::from_terms([(w(&[0]), rat(-1, 1))]));

        let c = w(&[2, 0]).invert();
        let expected = WordCombination::from_terms([
            (Word::new(vec![half, Letter::zero()]), rat(-1, 1)),
            (w(&[0, 0]), rat(1, 1)),
        ]);
        assert_eq!(c, expected);

        assert!(Word::new(vec![Letter::Infinity]).invert().is_zero());
    }

    #[test]
    fn shuffle_examples() {
        let c = shuffle(&w(&[2]), &w(&[3]));
        assert_eq!(
            c,
            WordCombination::from_terms([(w(&[2, 3]), rat(1, 1)), (w(&[3, 2]), rat(1, 1))])
        );
        assert_eq!(
            shuffle(&Word::empty(), &w(&[1, 0])),
            WordCombination::from_word(w(&[1, 0]))
        );
        let c = shuffle(&w(&[1]), &w(&[1, 0]));
        assert_eq!(c.total(), rat(3, 1));
        assert_eq!(c.coefficient(&w(&[1, 1, 0])), rat(2, 1));
        assert_eq!(c.coefficient(&w(&[1, 0, 1])), rat(1, 1));
    }

    #[test]
    fn regularize_examples() {
        let p = shuffle_regularize(&w(&[1, 0]));
        assert_eq!(p.constant_term(), WordCombination::from_word(w(&[1, 0])));
        assert_eq!(p.terms().count(), 1);

        let p = shuffle_regularize(&w(&[1]));
        assert!(p.constant_term().is_zero());
        assert_eq!(p.coefficient(1, 0), WordCombination::unit());

        // [1] ⧢ [1] = 2 [1,1]
        let p = shuffle_regularize(&w(&[1, 1]));
        assert!(p.constant_term().is_zero());
        assert_eq!(p.coefficient(2, 0), WordCombination::unit().scale(&rat(1, 2)));

        // [1,0,1] = [1,0] ⧢ [1] - 2 [1,1,0]
        let p = shuffle_regularize(&w(&[1, 0, 1]));
        assert_eq!(
            p.constant_term(),
            WordCombination::from_terms([(w(&[1, 1, 0]), rat(-2, 1))])
        );
        assert_eq!(p.coefficient(1, 0), WordCombination::from_word(w(&[1, 0])));

        // leading zeros: [0,1,0] = [0] ⧢ [1,0] - 2 [1,0,0]
        let p = shuffle_regularize(&w(&[0, 1, 0]));
        assert_eq!(
            p.constant_term(),
            WordCombination::from_terms([(w(&[1, 0, 0]), rat(-2, 1))])
        );
    }

    #[test]
    fn regularize_expands_back() {
        for word in [
            w(&[1, 1, 1]),
            w(&[1, 0, 1, 1]),
            w(&[0, 0, 1, 0, 1]),
            w(&[1, 1, 0, 1, 1]),
            w(&[0, 1]),
            w(&[0, 0, 0]),
        ] {
            let p = shuffle_regularize(&word);
            for (_, c) in p.terms() {
                for (u, _) in c.iter() {
                    assert!(u.is_convergent(), "{u} from {word}");
                }
            }
            assert_eq!(p.expand(), WordCombination::from_word(word.clone()), "{word}");
        }
    }

    #[test]
    fn word_index_round_trip() {
        let k: Index = "1,3,2".parse().unwrap();
        let word = VarIndex::ones(k.clone()).to_word().unwrap();
        assert_eq!(word.to_index().unwrap(), k);
        assert!(w(&[0, 1]).to_index().is_err());
        assert!(w(&[1, 0]).is_convergent());
        assert!(!w(&[1, 1]).is_convergent());
        assert!(!w(&[0, 2]).is_convergent());
        let on_path = Word::new(vec![Letter::Point(CRational::real(rat(1, 3)))]);
        assert!(!on_path.is_convergent());
    }
}
