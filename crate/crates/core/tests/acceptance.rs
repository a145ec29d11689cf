//! Acceptance run: one `criterion N: PASS|FAIL` line per criterion, at the stated
//! tolerances and sweep sizes.
//!
//! The process exits nonzero on any failure except the recorded one (the
//! `ζ_S^sh(1,1)` anchor, see the README); that failure is still printed as FAIL,
//! and the run checks that it is exactly the recorded deviation.

use std::process::ExitCode;
use std::time::Instant;

use mplkit::index::{Arg, Index, VarIndex};
use mplkit::numeric::{below, mzv, mzv_sh};
use mplkit::report::{Status, VerificationReport};
use mplkit::suite::{involutions, run_suite, RunConfig, Suite};
use mplkit::symmetric::{check_main_theorem, check_smzv_duality, main_theorem_sides, zeta_s_sh};

struct Outcome {
    pass: bool,
    detail: String,
    /// Set when the only failure is the recorded deviation.
    known: bool,
}

impl Outcome {
    fn of(pass: bool, detail: String) -> Outcome {
        Outcome {
            pass,
            detail,
            known: false,
        }
    }
}

fn suite(s: Suite, cfg: RunConfig) -> Vec<VerificationReport> {
    run_suite(&cfg, s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn all_pass(rs: &[VerificationReport]) -> bool {
    !rs.is_empty() && rs.iter().all(VerificationReport::is_pass)
}

fn first_bad(rs: &[VerificationReport]) -> String {
    rs.iter()
        .find(|r| !r.is_pass())
        .map(|r| format!("; first non-PASS: {}", r.canonical_json()))
        .unwrap_or_default()
}

fn residual(r: &VerificationReport) -> f64 {
    r.residual
        .as_deref()
        .and_then(|s| s.parse().ok())
        .unwrap_or(f64::INFINITY)
}

fn c1() -> Outcome {
    let rs = suite(
        Suite::Ss,
        RunConfig {
            max_weight: Some(6),
            max_depth: Some(3),
            max_n: Some(12),
            ..Default::default()
        },
    );
    Outcome::of(
        all_pass(&rs),
        format!("{} (index, N) pairs, exact{}", rs.len(), first_bad(&rs)),
    )
}

fn c2() -> Outcome {
    let rs = suite(
        Suite::StarExpansion,
        RunConfig {
            max_weight: Some(5),
            max_depth: Some(5),
            max_n: Some(20),
            ..Default::default()
        },
    );
    Outcome::of(
        all_pass(&rs),
        format!(
            "{} (index, N) pairs incl. lattice enumeration{}",
            rs.len(),
            first_bad(&rs)
        ),
    )
}

fn c3() -> Outcome {
    let rs = suite(
        Suite::Genfun,
        RunConfig {
            max_n: Some(15),
            ..Default::default()
        },
    );
    Outcome::of(
        all_pass(&rs) && rs.len() == 10,
        format!("{} samples to order 15, star and non-star{}", rs.len(), first_bad(&rs)),
    )
}

fn c4() -> Outcome {
    let rs = suite(
        Suite::MzvDuality,
        RunConfig {
            max_weight: Some(8),
            digits: Some(40),
            ..Default::default()
        },
    );
    let worst = rs.iter().map(residual).fold(0.0, f64::max);
    Outcome::of(
        all_pass(&rs) && rs.len() == 127 && worst < 1e-30,
        format!(
            "{} admissible indices, max residual {worst:.1e}{}",
            rs.len(),
            first_bad(&rs)
        ),
    )
}

fn c5() -> Outcome {
    let rs = suite(
        Suite::MplDuality,
        RunConfig {
            digits: Some(40),
            ..Default::default()
        },
    );
    let closed = residual(&rs[0]);
    let worst = rs[1..].iter().map(residual).fold(0.0, f64::max);
    let complex = rs.iter().filter(|r| r.params.to_string().contains("i\"")).count();
    Outcome::of(
        all_pass(&rs) && closed < 1e-30 && worst < 1e-25 && rs.len() >= 6 && complex >= 1,
        format!(
            "closed form residual {closed:.1e}, {} further instances ({complex} with complex points) max {worst:.1e}{}",
            rs.len() - 1,
            first_bad(&rs)
        ),
    )
}

fn c6() -> Outcome {
    let cfg = RunConfig {
        p_min: Some(11),
        p_max: Some(101),
        mod_exp: Some(3),
        max_weight: Some(4),
        ..Default::default()
    };
    let fin = suite(Suite::FiniteDuality, cfg.clone());
    let fmzv = suite(Suite::FmzvDuality, cfg.clone());
    let small = RunConfig {
        p_min: Some(3),
        p_max: Some(7),
        ..cfg
    };
    let small_fail = suite(Suite::FiniteDuality, small.clone())
        .iter()
        .chain(&suite(Suite::FmzvDuality, small))
        .filter(|r| r.status == Status::Fail)
        .count();
    Outcome::of(
        all_pass(&fin) && all_pass(&fmzv),
        format!(
            "{} finite-duality and {} fmzv cases over odd primes 11..101, M <= 3; primes 3..7: {small_fail} failures{}{}",
            fin.len(),
            fmzv.len(),
            first_bad(&fin),
            first_bad(&fmzv)
        ),
    )
}

fn c7() -> Outcome {
    let (order, digits, height) = (3, 60, 1_000_000);
    let rs = suite(
        Suite::SmzvDuality,
        RunConfig {
            max_weight: Some(5),
            max_depth: Some(5),
            t_order: Some(order),
            digits: Some(digits),
            height: Some(height),
            ..Default::default()
        },
    );
    let duality = all_pass(&rs) && rs.len() == 31;

    let tol = -50;
    let z = |n: u32| mzv(&Index::from_slice(&[n]), digits).unwrap();
    let s2 = zeta_s_sh(&Index::from_slice(&[2]), order, digits).unwrap();
    let a2 = below(&s2.coefficient(0).sub(&z(2).mul_int(2)), tol);
    let s1 = zeta_s_sh(&Index::from_slice(&[1]), order, digits).unwrap();
    let a1 = below(s1.coefficient(0), tol) && (1..order).all(|n| below(&s1.coefficient(n).add(&z(n as u32 + 1)), tol));
    let s11 = zeta_s_sh(&Index::from_slice(&[1, 1]), order, digits).unwrap();
    let c11 = s11.coefficient(0).clone();
    let a11 = below(&c11.add(&z(2)), tol);

    let mut detail = format!(
        "{} indices wt <= 5 certified{}; anchors: S(2) {}, S(1) {}, S(1,1) {} (got {})",
        rs.len(),
        first_bad(&rs),
        ok(a2),
        ok(a1),
        ok(a11),
        c11.to_decimal(12)
    );
    let pass = duality && a2 && a1 && a11;
    // Recorded deviation: the constant term is ζ^sh(1,1) - ζ^sh(1)^2 + ζ^sh(1,1), which is
    // 0 under shuffle regularization; -ζ(2) is what harmonic regularization gives.
    let recorded = duality && a2 && a1 && !a11 && {
        let sh = |k: &[u32]| mzv_sh(&Index::from_slice(k), digits).unwrap();
        let direct = sh(&[1, 1]).mul_int(2).sub(&sh(&[1]).mul(&sh(&[1])));
        below(&direct.sub(&c11), tol) && below(&c11, tol)
    };
    if recorded {
        detail.push_str("; recorded deviation: shuffle regularization gives 0, the anchor -zeta(2) is the harmonic-regularized value");
    }
    Outcome {
        pass,
        detail,
        known: recorded,
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "MISMATCH"
    }
}

fn c8() -> Outcome {
    let (order, digits, height) = (3, 60, 1_000_000);
    let rs = suite(
        Suite::Main,
        RunConfig {
            t_order: Some(order),
            digits: Some(digits),
            ..Default::default()
        },
    );
    let d1 = rs.iter().filter(|r| r.check != "main").count();
    let z0 = rs.iter().filter(|r| r.params.to_string().contains("\"0\"")).count();

    // d = 1, z = 1 goes through the same pipeline as the symmetric duality check
    let identical = Index::up_to(3, 3).iter().all(|k| {
        let a = check_main_theorem(0, std::slice::from_ref(k), &[Arg::one()], order, digits, height).unwrap();
        let b = check_smzv_duality(k, order, digits, height).unwrap();
        a.canonical_json() == b.canonical_json()
    });

    // argument and index assembly for d = 2
    let ks = [Index::from_slice(&[1]), Index::from_slice(&[2, 1])];
    let (l, r) = main_theorem_sides(&ks, &[Arg::one(), Arg::int(0)]).unwrap();
    let assembled = l
        == VarIndex::new(vec![Arg::one(), Arg::int(0), Arg::one()], Index::from_slice(&[1, 2, 1])).unwrap()
        && r == VarIndex::new(vec![Arg::int(0), Arg::one(), Arg::one()], Index::from_slice(&[1, 1, 2])).unwrap();

    let example = check_main_theorem(
        0,
        &[Index::from_slice(&[1]), Index::from_slice(&[2])],
        &[Arg::one(), Arg::one()],
        2,
        40,
        height,
    )
    .unwrap();
    Outcome::of(
        all_pass(&rs) && identical && assembled && example.is_pass(),
        format!(
            "{} cases ({d1} reduce to the symmetric duality, {z0} with z = 0); byte-identical d=1 reports {}; d=2 assembly {}; ((1),(2)) at (1,1) {}{}",
            rs.len(),
            ok(identical),
            ok(assembled),
            example.status.as_str(),
            first_bad(&rs)
        ),
    )
}

fn c9() -> Outcome {
    let rs = suite(
        Suite::Crosschecks,
        RunConfig {
            max_weight: Some(6),
            digits: Some(40),
            ..Default::default()
        },
    );
    let count = |c: &str| rs.iter().filter(|r| r.check == c).count();
    let shuffles = count("shuffle-product");
    let agreements = count("method-agreement");
    Outcome::of(
        all_pass(&rs) && shuffles == 20,
        format!(
            "{agreements} method agreements (1e-35), {shuffles} shuffle pairs (1e-32){}",
            first_bad(&rs)
        ),
    )
}

fn c10() -> Outcome {
    let rs: Vec<_> = (1..=10).map(|w| involutions(w).unwrap()).collect();
    let n: usize = (1..=10u32).map(|w| 1usize << (w - 1)).sum();
    Outcome::of(all_pass(&rs), format!("{n} indices of weight 1..10{}", first_bad(&rs)))
}

fn main() -> ExitCode {
    // the libtest protocol: listing tests or filtering should not run the sweeps
    let args: Vec<String> = std::env::args().collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let criteria: [fn() -> Outcome; 10] = [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10];
    let mut unexpected = 0;
    let mut known = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = c();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {}: {status} [{:.1}s] {}",
            i + 1,
            start.elapsed().as_secs_f64(),
            o.detail
        );
        if !o.pass {
            if o.known {
                known += 1;
            } else {
                unexpected += 1;
            }
        }
    }
    println!(
        "acceptance: {} PASS, {known} recorded deviation(s), {unexpected} unexpected failure(s)",
        10 - known - unexpected
    );
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
