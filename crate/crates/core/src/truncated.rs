//! Truncated multiple polylogarithm sums over a coefficient ring.
//!
//! For `0 = n_0 < n_1 < ... < n_r < N` (or `<=` between `n_1, ..., n_r` in the
//! star variant) the layer `T_j(n)` collects all lattice points with `n_j = n`.
//! Layers satisfy
//!
//! ```text
//! non-star: U_j(n) = z_j (U_j(n-1) + T_{j-1}(n-1)),   T_j(n) = U_j(n) / n^{k_j}
//! star:     V_j(n) = z_j V_j(n-1) + T_{j-1}(n),        T_j(n) = V_j(n) / n^{k_j}
//! ```
//!
//! so a depth-`r` sum up to `N` costs `O(r N)` ring-polynomial operations.

use crate::error::{Error, Result};
use crate::index::Arg;
use crate::poly::{Poly, Ring};

/// Symbols appearing in `args`, in order of first appearance.
pub fn symbols_of(args: &[Arg]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for a in args {
        if let Arg::Sym(s) = a {
            if !out.contains(s) {
                out.push(s.clone());
            }
        }
    }
    out
}

/// Embed arguments as polynomials: numbers as constants, symbols as variables.
pub fn args_to_polys<R: Ring>(ring: &R, vars: &[String], args: &[Arg]) -> Result<Vec<Poly<R>>> {
    args.iter()
        .map(|a| match a {
            Arg::Num(z) => {
                if !z.is_real() {
                    return Err(Error::UnsupportedDomain(format!(
                        "complex argument {z} in an exact truncated sum"
                    )));
                }
                Poly::constant(ring, vars, ring.from_rational(&z.re)?)
            }
            Arg::Sym(s) => Poly::var(ring, vars, s),
        })
        .collect()
}

/// Call `f(n, T_r(n))` for every `1 <= n < n_bound`.
pub fn for_each_layer<R: Ring>(
    ring: &R,
    vars: &[String],
    args: &[Poly<R>],
    index: &[u32],
    n_bound: u64,
    star: bool,
    mut f: impl FnMut(u64, &Poly<R>) -> Result<()>,
) -> Result<()> {
    let r = index.len();
    if args.len() != r {
        return Err(Error::ArityMismatch {
            depth: r,
            args: args.len(),
        });
    }
    if r == 0 {
        return Ok(());
    }
    let zero = Poly::zero(ring, vars)?;
    let one = Poly::one(ring, vars)?;
    // acc[j-1] holds U_j or V_j; prev[j] holds T_j(n-1) (non-star only)
    let mut acc: Vec<Poly<R>> = vec![zero.clone(); r];
    if star {
        acc[0] = one.clone();
    }
    let mut prev: Vec<Poly<R>> = vec![zero.clone(); r + 1];
    prev[0] = one;
    let mut layer: Vec<Poly<R>> = vec![zero.clone(); r + 1];
    for n in 1..n_bound {
        for j in 1..=r {
            let z = &args[j - 1];
            acc[j - 1] = if star {
                let mut v = acc[j - 1].mul(z);
                v.add_assign(&layer[j - 1]);
                v
            } else {
                acc[j - 1].add(&prev[j - 1]).mul(z)
            };
            let inv = ring.inv_pow(n, index[j - 1])?;
            layer[j] = acc[j - 1].scale(&inv);
        }
        // T_0(n) = 0 for n >= 1
        layer[0] = zero.clone();
        f(n, &layer[r])?;
        if !star {
            std::mem::swap(&mut prev, &mut layer);
            layer[0] = zero.clone();
        }
    }
    Ok(())
}

/// `Li_{<N}` (or its star variant) with polynomial arguments. The empty index gives 1.
pub fn li_truncated_poly<R: Ring>(
    ring: &R,
    vars: &[String],
    args: &[Poly<R>],
    index: &[u32],
    n_bound: u64,
    star: bool,
) -> Result<Poly<R>> {
    if index.is_empty() {
        return Poly::one(ring, vars);
    }
    let mut sum = Poly::zero(ring, vars)?;
    for_each_layer(ring, vars, args, index, n_bound, star, |_, t| {
        sum.add_assign(t);
        Ok(())
    })?;
    Ok(sum)
}
