//! Values checked against oracles that do not go through the library's evaluators:
//! classical series for π, log 2 and ζ(3), frozen high-precision constants, closed
//! forms of low-weight MZVs, and the defining limit of the regularized values.

use mplkit::index::{parse_args, Arg, Index, VarIndex};
use mplkit::number::{parse_decimal, rat, CRational};
use mplkit::numeric::{below, bits_for, chen_ode, holder, li_series, mzv, mzv_sh, Real};
use mplkit::word::{shuffle, Word};

const PI: &str = "3.14159265358979323846264338327950288419716939937510582097494";
const LOG2: &str = "0.693147180559945309417232121458176568075500134360255254120680";
const ZETA3: &str = "1.20205690315959428539973816151144999076498629234049888179227";
const ZETA5: &str = "1.03692775514336992633136548645703416805708091950191281197419";
const LI2_HALF: &str = "0.582240526465012505902656320159680108744198474806126425434347";
const LI3_HALF: &str = "0.537213193608040200940623225594965826670402499340378170689762";
const LI2_C_RE: &str = "0.321478317780115949605024764181336040128527741340671997336531";
const LI2_C_IM: &str = "0.396097966932388391405727323535490969376680022252276031293827";
// Σ_{n1<n2} 2^{-n2} / (n1 n2^2)
const LI12_HALF: &str = "0.0947530042301277057218250064203094914862688723177945848254986";
// Σ_{n1<n2} 3^{-n1} 2^{-(n2-n1)} / (n1 n2^2)
const LI12_MIXED: &str = "0.0599110647277422737948934864202224437491148093818347411998879";

fn k(s: &str) -> Index {
    s.parse().unwrap()
}

fn frozen(s: &str, bits: u32) -> Real {
    Real::from_rational(&parse_decimal(s).unwrap(), bits)
}

fn assert_close(a: &Real, b: &Real, e: i32, what: &str) {
    assert!(below(&a.sub(b), e), "{what}: {a} vs {b}");
}

/// arctan(1/x) by its Taylor series.
fn arctan_inv(x: i64, bits: u32) -> Real {
    let mut sum = Real::zero(bits);
    let mut power = Real::one(bits).div_int(x as u64);
    let x2 = (x * x) as u64;
    let mut n = 0u64;
    while !power.is_zero() {
        let term = power.div_int(2 * n + 1);
        sum = if n.is_multiple_of(2) {
            sum.add(&term)
        } else {
            sum.sub(&term)
        };
        power = power.div_int(x2);
        n += 1;
    }
    sum
}

#[test]
fn machin_pi_gives_even_zeta_values() {
    let d = 50;
    let b = bits_for(d);
    let pi = arctan_inv(5, b).mul_int(16).sub(&arctan_inv(239, b).mul_int(4));
    assert_close(&pi, &frozen(PI, b), -55, "Machin");
    let pi2 = pi.mul(&pi);
    assert_close(&mzv(&k("2"), d).unwrap(), &pi2.div_int(6), -45, "zeta(2)");
    assert_close(&mzv(&k("4"), d).unwrap(), &pi2.mul(&pi2).div_int(90), -45, "zeta(4)");
    let pi6 = pi2.mul(&pi2).mul(&pi2);
    assert_close(&mzv(&k("6"), d).unwrap(), &pi6.div_int(945), -45, "zeta(6)");
}

#[test]
fn apery_series_and_log_two() {
    let d = 50;
    let b = bits_for(d);
    // ζ(3) = 5/2 Σ (-1)^{n+1} / (n^3 C(2n, n))
    let mut sum = Real::zero(b);
    let mut binom = num_bigint::BigInt::from(1);
    for n in 1..=100u64 {
        binom = binom * (2 * (2 * n - 1)) / n;
        let term = Real::one(b).div_bigint(&(binom.clone() * (n * n * n)));
        sum = if n % 2 == 1 { sum.add(&term) } else { sum.sub(&term) };
    }
    let apery = sum.mul_int(5).div_int(2);
    assert_close(&apery, &frozen(ZETA3, b), -55, "Apery series");
    assert_close(&mzv(&k("3"), d).unwrap(), &apery, -45, "zeta(3)");
    assert_close(&mzv(&k("5"), d).unwrap(), &frozen(ZETA5, b), -45, "zeta(5)");

    // log 2 = 2 atanh(1/3)
    let mut atanh = Real::zero(b);
    let mut p = Real::one(b).div_int(3);
    let mut n = 0u64;
    while !p.is_zero() {
        atanh = atanh.add(&p.div_int(2 * n + 1));
        p = p.div_int(9);
        n += 1;
    }
    let log2 = atanh.mul_int(2);
    assert_close(&log2, &frozen(LOG2, b), -55, "atanh series");
    let v = VarIndex::new(parse_args("1/2").unwrap(), k("1")).unwrap();
    assert_close(li_series(&v, d).unwrap().re(), &log2, -45, "Li(1/2;1)");
}

#[test]
fn polylogarithms_against_frozen_values() {
    let d = 50;
    let b = bits_for(d);
    let cases = [
        ("1/2", "2", LI2_HALF),
        ("1/2", "3", LI3_HALF),
        ("1/2,1/2", "1,2", LI12_HALF),
        ("1/3,1/2", "1,2", LI12_MIXED),
    ];
    for (args, idx, want) in cases {
        let v = VarIndex::new(parse_args(args).unwrap(), k(idx)).unwrap();
        assert_close(li_series(&v, d).unwrap().re(), &frozen(want, b), -45, &v.to_string());
    }
    let v = VarIndex::new(parse_args("1/3+1/3i").unwrap(), k("2")).unwrap();
    let z = li_series(&v, d).unwrap().value;
    assert_close(&z.re, &frozen(LI2_C_RE, b), -45, "Re Li2");
    assert_close(&z.im, &frozen(LI2_C_IM, b), -45, "Im Li2");
}

#[test]
fn low_weight_closed_forms() {
    let d = 40;
    let z3 = mzv(&k("3"), d).unwrap();
    let z4 = mzv(&k("4"), d).unwrap();
    assert_close(&mzv(&k("1,2"), d).unwrap(), &z3, -35, "Euler");
    assert_close(&mzv(&k("1,3"), d).unwrap(), &z4.div_int(4), -35, "(1,3)");
    assert_close(&mzv(&k("2,2"), d).unwrap(), &z4.mul_int(3).div_int(4), -35, "(2,2)");
    assert_close(&mzv(&k("1,1,2"), d).unwrap(), &z4, -35, "(1,1,2)");
}

/// `Li(1-z, ..., 1-z; k)` through the ODE integrator, with `Li = (-1)^r I`.
fn li_near_one(idx: &Index, e: u32, digits: u32) -> Real {
    let z = CRational::real(
        rat(1, 1) - num_rational::BigRational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(10), e as usize)),
    );
    let v = VarIndex::new(vec![Arg::Num(z); idx.depth()], idx.clone()).unwrap();
    let c = chen_ode(&v.to_word().unwrap(), digits).unwrap().value.re;
    if idx.depth() % 2 == 1 {
        c.neg()
    } else {
        c
    }
}

#[test]
fn regularized_values_match_the_defining_limit() {
    // Li(1-z, ...; k) = P(log z) + O(z log^J z); P(0) is read off by Lagrange
    // interpolation in T = log z at z = 10^-e, whose weights are rational in e.
    // the step size near 1 must stay above the working precision
    let d = 90;
    let b = bits_for(d);
    let es = [30u32, 40, 50, 60, 70];
    for s in ["1", "1,1", "2,1", "3,1", "1,2", "2,1,1"] {
        let idx = k(s);
        let mut p0 = Real::zero(b);
        for (j, &ej) in es.iter().enumerate() {
            let mut w = num_rational::BigRational::from_integer(1.into());
            for (m, &em) in es.iter().enumerate() {
                if m != j {
                    w *= num_rational::BigRational::new((em as i64).into(), (em as i64 - ej as i64).into());
                }
            }
            p0 = p0.add(&li_near_one(&idx, ej, d).mul(&Real::from_rational(&w, b)));
        }
        assert_close(&p0, &mzv_sh(&idx, d).unwrap(), -18, s);
    }
}

#[test]
fn doubling_precision_is_consistent() {
    for s in ["2", "1,2", "1,1,3", "2,3"] {
        let lo = mzv(&k(s), 30).unwrap();
        let hi = mzv(&k(s), 60).unwrap().with_bits(lo.bits());
        assert_close(&lo, &hi, -28, s);
    }
    let v = VarIndex::new(parse_args("-1/2,1/3").unwrap(), k("1,2")).unwrap();
    let lo = li_series(&v, 30).unwrap();
    let hi = li_series(&v, 60).unwrap();
    assert_close(lo.re(), &hi.re().with_bits(lo.re().bits()), -28, "Li");
}

#[test]
fn shuffle_product_with_the_ode() {
    let d = 35;
    let b = bits_for(d);
    for (u, v) in [("[1,0]", "[-1]"), ("[2]", "[1+i,0]"), ("[-1,1/2-1/2i]", "[2,0]")] {
        let u: Word = u.parse().unwrap();
        let v: Word = v.parse().unwrap();
        let prod = chen_ode(&u, d).unwrap().value.mul(&chen_ode(&v, d).unwrap().value);
        let mut sum = mplkit::numeric::Complex::zero(b);
        for (w, q) in shuffle(&u, &v).iter() {
            sum = sum.add(&holder(w, d).unwrap().value.mul_real(&Real::from_rational(q, b)));
        }
        let diff = prod.sub(&sum);
        assert!(below(&diff.re, -30) && below(&diff.im, -30), "{u} sh {v}");
    }
}

#[test]
fn planted_relations_are_recovered() {
    use rand::{Rng, SeedableRng};
    let d = 60;
    let b = bits_for(d);
    let z = |s: &str| mzv(&k(s), d).unwrap();
    let log2 = li_series(&VarIndex::new(parse_args("1/2").unwrap(), k("1")).unwrap(), d)
        .unwrap()
        .re()
        .clone();
    let li4 = li_series(&VarIndex::new(parse_args("1/2").unwrap(), k("4")).unwrap(), d)
        .unwrap()
        .re()
        .clone();
    let pool = [
        Real::one(b),
        z("2"),
        z("3"),
        z("5"),
        log2.clone(),
        z("3").mul(&z("3")),
        log2.mul(&z("3")),
        li4,
        z("1,5"),
    ];
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for case in 0..50 {
        let n = rng.gen_range(2..=4);
        let mut picked: Vec<usize> = Vec::new();
        while picked.len() < n {
            let i = rng.gen_range(0..pool.len());
            if !picked.contains(&i) {
                picked.push(i);
            }
        }
        let coeffs: Vec<i64> = (0..n)
            .map(|_| loop {
                let c = rng.gen_range(-1000i64..=1000);
                if c != 0 {
                    break c;
                }
            })
            .collect();
        let mut target = Real::zero(b);
        for (&i, &c) in picked.iter().zip(&coeffs) {
            target = target.add(&pool[i].mul_int(c));
        }
        let mut values = vec![target];
        values.extend(picked.iter().map(|&i| pool[i].clone()));
        let rel = mplkit::relation::find_relation(&values, d, 1000)
            .unwrap()
            .unwrap_or_else(|| panic!("case {case}: none"));
        let scale = rel[0].clone();
        assert!(scale != 0.into(), "case {case}: {rel:?}");
        for (j, &c) in coeffs.iter().enumerate() {
            assert_eq!(rel[j + 1], -scale.clone() * c, "case {case}: {rel:?} vs {coeffs:?}");
        }
    }
}
