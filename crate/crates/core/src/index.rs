//! Indices `(k_1, ..., k_r)` and indices with arguments.
//!
//! Component order follows the nested-sum convention `0 < n_1 < ... < n_r`,
//! so admissibility is a condition on the LAST part. Literature that sums
//! `n_1 > ... > n_r` lists the same index reversed; use [`Index::reversed`]
//! to convert.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::number::CRational;
use crate::word::{Letter, Word};

/// A finite tuple of positive integers, possibly empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Index(Vec<u32>);

impl TryFrom<Vec<u32>> for Index {
    type Error = Error;
    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Index::new(parts)
    }
}

impl From<Index> for Vec<u32> {
    fn from(k: Index) -> Vec<u32> {
        k.0
    }
}

impl Index {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::NonPositivePart(0));
        }
        Ok(Index(parts))
    }

    /// Build from a slice the caller knows to be valid. Panics on a zero part.
    pub fn from_slice(parts: &[u32]) -> Self {
        Index::new(parts.to_vec()).expect("index parts must be positive")
    }

    pub fn empty() -> Self {
        Index(Vec::new())
    }

    /// `{1}^n`
    pub fn ones(n: usize) -> Self {
        Index(vec![1; n])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_admissible(&self) -> bool {
        self.0.last().is_none_or(|&k| k >= 2)
    }

    /// The same parts in reverse order (converts between summation conventions).
    pub fn reversed(&self) -> Index {
        Index(self.0.iter().rev().copied().collect())
    }

    /// `(k, {1}^n)`
    pub fn with_trailing_ones(&self, n: usize) -> Index {
        let mut v = self.0.clone();
        v.extend(std::iter::repeat_n(1, n));
        Index(v)
    }

    pub fn concat(&self, other: &Index) -> Index {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Index(v)
    }

    /// Block decomposition `({1}^{a_1-1}, b_1+1, ..., {1}^{a_h-1}, b_h+1)` as `(a_i, b_i)` pairs.
    pub fn blocks(&self) -> Result<Vec<(u32, u32)>> {
        if !self.is_admissible() {
            return Err(Error::NotAdmissible(self.to_string()));
        }
        let mut out = Vec::new();
        let mut ones = 0;
        for &k in &self.0 {
            if k == 1 {
                ones += 1;
            } else {
                out.push((ones + 1, k - 1));
                ones = 0;
            }
        }
        Ok(out)
    }

    /// The dual of an admissible index.
    pub fn dagger(&self) -> Result<Index> {
        let blocks = self.blocks()?;
        let mut out = Vec::with_capacity((self.weight() as usize).saturating_sub(self.depth()));
        for &(a, b) in blocks.iter().rev() {
            out.extend(std::iter::repeat_n(1, b as usize - 1));
            out.push(a + 1);
        }
        Ok(Index(out))
    }

    /// The index `(l_1, ..., l_s)` with `(l_s, ..., l_2, l_1 + 1) = (k_1, ..., k_r + 1)^dagger`.
    pub fn vee(&self) -> Result<Index> {
        let mut bumped = self.0.clone();
        match bumped.last_mut() {
            Some(last) => *last += 1,
            None => return Err(Error::EmptyIndex),
        }
        let mut d = Index(bumped).dagger()?.0;
        d.reverse();
        d[0] -= 1;
        Ok(Index(d))
    }

    /// All indices of the given weight, ordered by depth then lexicographically.
    pub fn all_of_weight(weight: u32) -> Vec<Index> {
        let mut out = Vec::new();
        if weight == 0 {
            out.push(Index::empty());
            return out;
        }
        fn rec(rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Index>) {
            if rem == 0 {
                out.push(Index(cur.clone()));
                return;
            }
            for k in 1..=rem {
                cur.push(k);
                rec(rem - k, cur, out);
                cur.pop();
            }
        }
        rec(weight, &mut Vec::new(), &mut out);
        out.sort_by(|a, b| a.depth().cmp(&b.depth()).then_with(|| a.0.cmp(&b.0)));
        out
    }

    /// All admissible indices of the given weight (`2^{w-2}` of them for `w >= 2`).
    pub fn admissible_of_weight(weight: u32) -> Vec<Index> {
        Index::all_of_weight(weight)
            .into_iter()
            .filter(|k| k.is_admissible())
            .collect()
    }

    /// Nonempty indices with `weight <= max_weight` and `depth <= max_depth`.
    pub fn up_to(max_weight: u32, max_depth: usize) -> Vec<Index> {
        (1..=max_weight)
            .flat_map(Index::all_of_weight)
            .filter(|k| k.depth() <= max_depth)
            .collect()
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "-");
        }
        let s: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for Index {
    type Err = Error;

    /// `"1,2"`; the empty index is spelled `"-"` (or the empty string).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if t.is_empty() || t == "-" {
            return Ok(Index::empty());
        }
        let parts = t
            .split(',')
            .map(|p| {
                let p = p.trim();
                let v: i64 = p.parse().map_err(|_| Error::Parse(format!("bad index part `{p}`")))?;
                if v < 1 {
                    return Err(Error::NonPositivePart(v));
                }
                u32::try_from(v).map_err(|_| Error::Parse(format!("index part too large: {v}")))
            })
            .collect::<Result<Vec<u32>>>()?;
        Ok(Index(parts))
    }
}

/// An argument of a polylogarithm: an exact (Gaussian) rational or a named variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arg {
    Num(CRational),
    Sym(String),
}

impl Arg {
    pub fn int(n: i64) -> Arg {
        Arg::Num(CRational::from_int(n))
    }

    pub fn one() -> Arg {
        Arg::int(1)
    }

    pub fn sym(name: &str) -> Arg {
        Arg::Sym(name.to_string())
    }

    pub fn as_num(&self) -> Result<&CRational> {
        match self {
            Arg::Num(z) => Ok(z),
            Arg::Sym(s) => Err(Error::SymbolicArgument(s.clone())),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Arg::Num(z) if z.is_one())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Arg::Num(z) if z.is_zero())
    }
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Num(z) => write!(f, "{z}"),
            Arg::Sym(s) => write!(f, "{s}"),
        }
    }
}

impl FromStr for Arg {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let ident = t.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && t.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if ident && t != "i" {
            Ok(Arg::Sym(t.to_string()))
        } else {
            Ok(Arg::Num(CRational::parse(t)?))
        }
    }
}

impl Serialize for Arg {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Arg {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parse a comma-separated argument list such as `"1/2,1/3"` or `"z1,z2"`.
pub fn parse_args(s: &str) -> Result<Vec<Arg>> {
    let t = s.trim();
    if t.is_empty() || t == "-" {
        return Ok(Vec::new());
    }
    t.split(',').map(str::parse).collect()
}

/// An index paired with one argument per part: the pair `(z; k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarIndex {
    index: Index,
    args: Vec<Arg>,
}

impl VarIndex {
    pub fn new(args: Vec<Arg>, index: Index) -> Result<Self> {
        if args.len() != index.depth() {
            return Err(Error::ArityMismatch {
                depth: index.depth(),
                args: args.len(),
            });
        }
        Ok(VarIndex { index, args })
    }

    pub fn empty() -> Self {
        VarIndex {
            index: Index::empty(),
            args: Vec::new(),
        }
    }

    /// All arguments equal to 1 (the MZV specialization).
    pub fn ones(index: Index) -> Self {
        let args = vec![Arg::one(); index.depth()];
        VarIndex { index, args }
    }

    /// Symbolic arguments `z1, ..., zr`.
    pub fn symbolic(index: Index) -> Self {
        let args = (1..=index.depth()).map(|i| Arg::Sym(format!("z{i}"))).collect();
        VarIndex { index, args }
    }

    pub fn index(&self) -> &Index {
        &self.index
    }

    pub fn args(&self) -> &[Arg] {
        &self.args
    }

    pub fn depth(&self) -> usize {
        self.index.depth()
    }

    pub fn weight(&self) -> u32 {
        self.index.weight()
    }

    /// `(z, {1}^n; k, {1}^n)`
    pub fn with_trailing_ones(&self, n: usize) -> VarIndex {
        let mut args = self.args.clone();
        args.extend(std::iter::repeat_n(Arg::one(), n));
        VarIndex {
            index: self.index.with_trailing_ones(n),
            args,
        }
    }

    /// Copy with the first argument replaced.
    pub fn with_first_arg(&self, a: Arg) -> VarIndex {
        let mut v = self.clone();
        if let Some(first) = v.args.first_mut() {
            *first = a;
        }
        v
    }

    /// Numeric arguments, or an error naming the first symbolic one.
    pub fn numeric_args(&self) -> Result<Vec<CRational>> {
        self.args.iter().map(|a| a.as_num().cloned()).collect()
    }

    /// `|z_i| <= 1` for all i and `(k_r, z_r) != (1, 1)`.
    pub fn is_series_convergent(&self) -> bool {
        let Ok(zs) = self.numeric_args() else {
            return false;
        };
        let one = num_rational::BigRational::from_integer(1.into());
        if zs.iter().any(|z| z.norm_sqr() > one) {
            return false;
        }
        match (self.index.parts().last(), zs.last()) {
            (Some(1), Some(z)) => !z.is_one(),
            _ => true,
        }
    }

    /// The `2^{r-1}` contraction terms expressing the star value through non-star values.
    pub fn star_expansion(&self) -> Vec<VarIndex> {
        let r = self.depth();
        if r == 0 {
            return vec![self.clone()];
        }
        let k = self.index.parts();
        let mut out = Vec::with_capacity(1 << (r - 1));
        for mask in 0u64..(1u64 << (r - 1)) {
            // bit j set: a block boundary between positions j and j+1
            let mut parts = Vec::new();
            let mut args = Vec::new();
            let mut acc = 0;
            let mut start = 0;
            for (j, &kj) in k.iter().enumerate() {
                acc += kj;
                if j == r - 1 || mask & (1 << j) != 0 {
                    parts.push(acc);
                    args.push(self.args[start].clone());
                    acc = 0;
                    start = j + 1;
                }
            }
            out.push(VarIndex {
                index: Index(parts),
                args,
            });
        }
        out.sort_by(|a, b| {
            a.depth()
                .cmp(&b.depth())
                .then_with(|| a.index.parts().cmp(b.index.parts()))
        });
        out
    }

    /// The word `e_{1/z_1} e_0^{k_1-1} ... e_{1/z_r} e_0^{k_r-1}`.
    pub fn to_word(&self) -> Result<Word> {
        let mut letters = Vec::with_capacity(self.weight() as usize);
        for (i, (a, &k)) in self.args.iter().zip(self.index.parts()).enumerate() {
            let z = a.as_num()?;
            let inv = z.inv().ok_or(Error::ZeroArgument(i))?;
            letters.push(Letter::Point(inv));
            letters.extend(std::iter::repeat_n(Letter::zero(), k as usize - 1));
        }
        Ok(Word::new(letters))
    }
}

impl fmt::Display for VarIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.args.iter().map(|a| a.to_string()).collect();
        write!(f, "({};{})", a.join(","), self.index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(s: &str) -> Index {
        s.parse().unwrap()
    }

    #[test]
    fn weight_depth_admissibility() {
        assert_eq!(k("1,2").weight(), 3);
        assert_eq!(Index::empty().weight(), 0);
        assert_eq!(Index::empty().depth(), 0);
        assert_eq!(k("3,1,1").weight(), 5);
        assert!(k("1,2").is_admissible());
        assert!(!k("2,1").is_admissible());
        assert!(Index::empty().is_admissible());
    }

    #[test]
    fn dagger_examples() {
        assert_eq!(k("1,2").dagger().unwrap(), k("3"));
        assert_eq!(k("2,2").dagger().unwrap(), k("2,2"));
        assert_eq!(Index::empty().dagger().unwrap(), Index::empty());
        assert_eq!(k("1,1,2").dagger().unwrap(), k("4"));
        assert_eq!(k("2,1").dagger(), Err(Error::NotAdmissible("2,1".into())));
    }

    #[test]
    fn vee_examples() {
        assert_eq!(k("2").vee().unwrap(), k("1,1"));
        assert_eq!(k("2,1").vee().unwrap(), k("1,2"));
        assert_eq!(k("1").vee().unwrap(), k("1"));
        assert_eq!(Index::empty().vee(), Err(Error::EmptyIndex));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(k("-"), Index::empty());
        assert_eq!(k(" 1, 2 ").parts(), &[1, 2]);
        assert_eq!(k("(1,2)").parts(), &[1, 2]);
        assert!("1,0".parse::<Index>().is_err());
        assert!("1,x".parse::<Index>().is_err());
        assert_eq!(Index::empty().to_string(), "-");
        assert_eq!(k("3,1,1").to_string(), "3,1,1");
    }

    #[test]
    fn star_expansion_examples() {
        let z = |n: usize| Arg::Sym(format!("z{n}"));
        let v = VarIndex::symbolic(k("4"));
        assert_eq!(v.star_expansion(), vec![v.clone()]);

        let v = VarIndex::new(vec![z(1), z(2)], k("2,3")).unwrap();
        let exp = v.star_expansion();
        assert_eq!(exp.len(), 2);
        assert!(exp.contains(&VarIndex::new(vec![z(1)], k("5")).unwrap()));
        assert!(exp.contains(&v));

        let v = VarIndex::symbolic(k("1,1,1"));
        let exp = v.star_expansion();
        let expected = vec![
            VarIndex::new(vec![z(1)], k("3")).unwrap(),
            VarIndex::new(vec![z(1), z(2)], k("1,2")).unwrap(),
            VarIndex::new(vec![z(1), z(3)], k("2,1")).unwrap(),
            VarIndex::new(vec![z(1), z(2), z(3)], k("1,1,1")).unwrap(),
        ];
        assert_eq!(exp, expected);
    }

    #[test]
    fn words_from_indices() {
        let w = VarIndex::ones(k("2")).to_word().unwrap();
        assert_eq!(w.to_string(), "[1,0]");
        let w = VarIndex::ones(k("1,2")).to_word().unwrap();
        assert_eq!(w.to_string(), "[1,1,0]");
        let v = VarIndex::new(vec!["1/2".parse().unwrap()], k("1")).unwrap();
        assert_eq!(v.to_word().unwrap().to_string(), "[2]");
        let v = VarIndex::new(vec![Arg::int(0)], k("1")).unwrap();
        assert_eq!(v.to_word(), Err(Error::ZeroArgument(0)));
    }

    #[test]
    fn convergence_predicate() {
        assert!(!VarIndex::ones(k("1")).is_series_convergent());
        assert!(VarIndex::ones(k("1,2")).is_series_convergent());
        let v = VarIndex::new(vec![Arg::int(-1)], k("1")).unwrap();
        assert!(v.is_series_convergent());
        let v = VarIndex::new(vec![Arg::int(2)], k("2")).unwrap();
        assert!(!v.is_series_convergent());
        assert!(!VarIndex::symbolic(k("2")).is_series_convergent());
    }

    #[test]
    fn enumerations() {
        assert_eq!(Index::admissible_of_weight(2), vec![k("2")]);
        assert_eq!(Index::admissible_of_weight(3), vec![k("3"), k("1,2")]);
        assert_eq!(
            Index::admissible_of_weight(4),
            vec![k("4"), k("1,3"), k("2,2"), k("1,1,2")]
        );
        let total: usize = (2..=8).map(|w| Index::admissible_of_weight(w).len()).sum();
        assert_eq!(total, 127);
    }

    #[test]
    fn arg_parsing() {
        assert_eq!("z1".parse::<Arg>().unwrap(), Arg::sym("z1"));
        assert_eq!(
            "1/2".parse::<Arg>().unwrap(),
            Arg::Num(CRational::parse("1/2").unwrap())
        );
        assert!(matches!("i".parse::<Arg>().unwrap(), Arg::Num(_)));
        assert_eq!(parse_args("1/2,1/3").unwrap().len(), 2);
        assert!(parse_args("-").unwrap().is_empty());
    }
}
