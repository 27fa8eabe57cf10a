//! Univariate and bivariate polynomials over `F_q`, the polynomials
//! `f_t = (x+1)^t - x^t - (y+1)^t + y^t` and `g_t = f_t / (x - y)`, and
//! local analysis at a point (multiplicity, tangent cone).

mod bi;
mod embed;
pub mod factor;
mod uni;

use std::sync::Arc;

use thiserror::Error;

use crate::arith::{gcd, ArithError};
use crate::gf::{build_field, FieldCtx, GfError};

pub use bi::{BiPoly, TangentCone};
pub use embed::Embedding;
pub use uni::UniPoly;

/// Largest `t` for which the dense `g_t` is built by default.
pub const DEFAULT_MAX_T: u64 = 4000;

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("t = {t} exceeds the polynomial size cap {cap}")]
    TooLarge { t: u64, cap: u64 },
    #[error("p = {p} divides t = {t}")]
    DividesExponent { p: u64, t: u64 },
    #[error("t = {0} is too small (need t >= 2)")]
    ExponentTooSmall(u64),
    #[error("division left a nonzero remainder")]
    NonzeroRemainder,
    #[error("the zero polynomial has no multiplicity")]
    ZeroPolynomial,
    #[error("cannot move coefficients from {0} to {1}")]
    Incompatible(String, String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// `C(n, k) mod p` by Lucas' theorem.
pub fn binom_mod(mut n: u64, mut k: u64, p: u32) -> u32 {
    let pm = p as u64;
    let mut acc = 1u64;
    while k > 0 {
        let (ni, ki) = (n % pm, k % pm);
        if ki > ni {
            return 0;
        }
        acc = acc * small_binom(ni, ki, pm) % pm;
        n /= pm;
        k /= pm;
    }
    acc as u32
}

fn small_binom(n: u64, k: u64, p: u64) -> u64 {
    let k = k.min(n - k);
    let (mut num, mut den) = (1u64, 1u64);
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * crate::arith::pow_mod(den, p - 2, p) % p
}

/// `f_t` over `F_p`.
pub fn build_ft(ctx: &Arc<FieldCtx>, t: u64) -> BiPoly {
    let p = ctx.p();
    let mut f = BiPoly::zero(ctx);
    for k in 1..t {
        let c = binom_mod(t, k, p);
        if c != 0 {
            let c = ctx.from_u64(c as u64);
            f.add_term((k as u32, 0), &c);
            f.add_term((0, k as u32), &ctx.neg(&c));
        }
    }
    f
}

/// `(f_t, g_t)` over `F_p`. The division by `x - y` is checked to be exact.
pub fn build_ft_gt(p: u64, t: u64) -> Result<(BiPoly, BiPoly), PolyError> {
    build_ft_gt_capped(p, t, DEFAULT_MAX_T)
}

pub fn build_ft_gt_capped(p: u64, t: u64, cap: u64) -> Result<(BiPoly, BiPoly), PolyError> {
    if t < 2 {
        return Err(PolyError::ExponentTooSmall(t));
    }
    if gcd(p, t) != 1 {
        return Err(PolyError::DividesExponent { p, t });
    }
    if t > cap {
        return Err(PolyError::TooLarge { t, cap });
    }
    let ctx = build_field(p, 1)?;
    let f = build_ft(&ctx, t);
    let g = f.div_x_minus_y()?;
    debug_assert_eq!(g.total_degree(), Some(t as u32 - 2));
    Ok((f, g))
}
