//! Direct summation of `Li(z; k)` inside the polydisc of convergence.

use crate::error::{Error, Result};
use crate::number::CRational;

use super::fixed::Complex;

/// Hard limit on the number of outer summation steps.
pub const TERM_CAP: usize = 2_000_000;

/// Upper bound for `log |T_r(n)|`, with `T_r(n)` the sum of all lattice terms with
/// `n_r = n`: there are `C(n-1, r-1)` of them, each at most `rho^n / n^{k_r}`.
struct TailBound {
    r: usize,
    k_last: u32,
    ln_rho: f64,
    ln_binom: f64,
}

impl TailBound {
    fn ln_term(&self, n: usize) -> f64 {
        self.ln_binom + n as f64 * self.ln_rho - self.k_last as f64 * (n as f64).ln()
    }

    /// Advance `ln C(n-1, r-1)` to `ln C(n, r-1)`.
    fn step(&mut self, n: usize) {
        if n >= self.r {
            self.ln_binom += (n as f64).ln() - ((n + 1 - self.r) as f64).ln();
        }
    }

    /// Bound on `Σ_{m >= n} |T_r(m)|` (valid when the term ratio is below 1), natural log.
    fn ln_tail(&self, n: usize) -> Option<f64> {
        if n < self.r {
            return None;
        }
        let q = self.ln_rho.exp() * n as f64 / (n + 1 - self.r) as f64;
        if q >= 1.0 {
            return None;
        }
        Some(self.ln_term(n) - (1.0 - q).ln())
    }
}

/// `Li(z; k)` by the layer recurrence, stopping once the tail bound drops below
/// `2^-target_bits`. Requires `max |z_j| < 1`. Returns the value and `log2` of
/// the tail bound at the stopping point.
pub fn li_direct(zs: &[CRational], k: &[u32], bits: u32, target_bits: u32) -> Result<(Complex, f64)> {
    let r = k.len();
    if r == 0 {
        return Ok((Complex::one(bits), f64::NEG_INFINITY));
    }
    if zs.iter().any(|z| z.is_zero()) {
        return Ok((Complex::zero(bits), f64::NEG_INFINITY));
    }
    let rho = zs.iter().map(|z| z.abs_f64()).fold(0.0, f64::max);
    if rho >= 1.0 {
        return Err(Error::NotConvergent(format!(
            "direct series needs max |z| < 1, got {rho}"
        )));
    }
    let z: Vec<Complex> = zs.iter().map(|q| Complex::from_crational(q, bits)).collect();
    let mut bound = TailBound {
        r,
        k_last: k[r - 1],
        ln_rho: rho.ln(),
        ln_binom: 0.0,
    };
    let ln_eps = -(target_bits as f64) * std::f64::consts::LN_2;

    let zero = Complex::zero(bits);
    let mut acc = vec![zero.clone(); r];
    let mut prev = vec![zero.clone(); r + 1];
    prev[0] = Complex::one(bits);
    let mut layer = vec![zero.clone(); r + 1];
    let mut sum = zero.clone();
    for n in 1..=TERM_CAP {
        for j in 1..=r {
            acc[j - 1] = acc[j - 1].add(&prev[j - 1]).mul(&z[j - 1]);
            let mut t = acc[j - 1].clone();
            for _ in 0..k[j - 1] {
                t = t.div_int(n as u64);
            }
            layer[j] = t;
        }
        sum = sum.add(&layer[r]);
        std::mem::swap(&mut prev, &mut layer);
        prev[0] = zero.clone();
        bound.step(n);
        if let Some(t) = bound.ln_tail(n + 1) {
            if t < ln_eps {
                return Ok((sum, t / std::f64::consts::LN_2));
            }
        }
    }
    let needed = (ln_eps / bound.ln_rho).ceil() as usize;
    Err(Error::TermCap { cap: TERM_CAP, needed })
}
