//! Linear Hensel lifting in `K[[x]][y]` and Zassenhaus recombination.
//!
//! Inputs are monic in `y` and already shifted so that `x = 0` is a good
//! specialization point.

use itertools::Itertools;

use crate::poly::UniPoly;

/// `sum_k s[k](y) x^k`, truncated at `x^s.len()`.
pub(super) type Series = Vec<UniPoly>;

/// Lifts `f = g0 * h0 (mod x)` to `f = G * H (mod x^n)` with `G, H` monic
/// in `y` of the same degrees as `g0, h0`.
fn lift_two(f: &Series, g0: &UniPoly, h0: &UniPoly) -> (Series, Series) {
    let n = f.len();
    let (one, s, t) = g0.xgcd(h0);
    assert!(one.is_one(), "modular factors must be coprime");
    let ctx = g0.ctx();
    let mut g = vec![g0.clone()];
    let mut h = vec![h0.clone()];
    for k in 1..n {
        let mut e = f[k].clone();
        for i in 1..k {
            if !g[i].is_zero() && !h[k - i].is_zero() {
                e = e.sub(&g[i].mul(&h[k - i]));
            }
        }
        if e.is_zero() {
            g.push(UniPoly::zero(ctx));
            h.push(UniPoly::zero(ctx));
            continue;
        }
        g.push(e.mul(&t).rem(g0));
        h.push(e.mul(&s).rem(h0));
    }
    (g, h)
}

/// Lifts every modular factor along a balanced factor tree.
pub(super) fn lift_all(f: &Series, factors: &[UniPoly]) -> Vec<Series> {
    if factors.len() == 1 {
        return vec![f.clone()];
    }
    let (left, right) = factors.split_at(factors.len() / 2);
    let ctx = factors[0].ctx();
    let a0 = left.iter().fold(UniPoly::one(ctx), |acc, u| acc.mul(u));
    let b0 = right.iter().fold(UniPoly::one(ctx), |acc, u| acc.mul(u));
    let (a, b) = lift_two(f, &a0, &b0);
    let mut out = lift_all(&a, left);
    out.extend(lift_all(&b, right));
    out
}

fn series_mul(a: &Series, b: &Series, n: usize) -> Series {
    let ctx = a[0].ctx();
    (0..n)
        .map(|k| {
            let mut acc = UniPoly::zero(ctx);
            for i in 0..=k {
                match (a.get(i), b.get(k - i)) {
                    (Some(u), Some(v)) if !u.is_zero() && !v.is_zero() => acc = acc.add(&u.mul(v)),
                    _ => {}
                }
            }
            acc
        })
        .collect()
}

/// Exact quotient of `y`-major polynomials when `g` is monic in `y`.
pub(super) fn div_monic_y(f: &[UniPoly], g: &[UniPoly]) -> Option<Vec<UniPoly>> {
    let (df, dg) = (f.len().checked_sub(1)?, g.len().checked_sub(1)?);
    if dg > df {
        return None;
    }
    let ctx = g[0].ctx();
    let mut r = f.to_vec();
    let mut q = vec![UniPoly::zero(ctx); df - dg + 1];
    for j in (dg..=df).rev() {
        let c = std::mem::replace(&mut r[j], UniPoly::zero(ctx));
        if c.is_zero() {
            continue;
        }
        for i in 0..dg {
            if !g[i].is_zero() {
                r[j - dg + i] = r[j - dg + i].sub(&c.mul(&g[i]));
            }
        }
        q[j - dg] = c;
    }
    r[..dg].iter().all(|c| c.is_zero()).then_some(q)
}

/// Degrees reachable as sums of sub-multisets of `degs`.
pub(super) fn subset_sums(degs: &[usize], total: usize) -> Vec<bool> {
    let mut reach = vec![false; total + 1];
    reach[0] = true;
    for &d in degs {
        for s in (d..=total).rev() {
            if reach[s - d] {
                reach[s] = true;
            }
        }
    }
    reach
}

pub(super) enum Recombination {
    /// True factors in `y`-major form, each monic in `y`.
    Done { factors: Vec<Vec<UniPoly>>, subsets: u64 },
    CapExceeded { subsets: u64 },
}

/// Converts a product series into `y`-major form if every coefficient of
/// `y^(d-j)` has `x`-degree at most `j`.
fn to_candidate(prod: &Series, d: usize) -> Option<Vec<UniPoly>> {
    let ctx = prod[0].ctx();
    let mut cols = vec![Vec::new(); d + 1];
    for (k, s) in prod.iter().enumerate() {
        for (j, c) in s.coeffs().iter().enumerate() {
            if ctx.is_zero(c) {
                continue;
            }
            if k + j > d {
                return None;
            }
            let col: &mut Vec<_> = &mut cols[j];
            if col.len() <= k {
                col.resize(k + 1, ctx.zero());
            }
            col[k] = c.clone();
        }
    }
    Some(cols.into_iter().map(|c| UniPoly::new(ctx.clone(), c)).collect())
}

/// Zassenhaus recombination by increasing subset size. `allowed[d]` marks
/// the degrees a true factor may have.
pub(super) fn recombine(
    f: &[UniPoly],
    lifted: &[Series],
    allowed: &[bool],
    cap: u64,
) -> Recombination {
    let ctx = f[0].ctx().clone();
    let degs: Vec<usize> = lifted.iter().map(|s| s[0].degree().unwrap()).collect();
    // Coefficient of y^(d-1) of each lifted factor, as a series in x.
    let traces: Vec<Vec<crate::gf::Elem>> = lifted
        .iter()
        .zip(&degs)
        .map(|(s, &d)| s.iter().map(|c| c.coeff(d - 1)).collect())
        .collect();
    let n = lifted[0].len();
    let mut pool: Vec<usize> = (0..lifted.len()).collect();
    let mut current = f.to_vec();
    let mut found = Vec::new();
    let mut subsets = 0u64;
    let mut size = 1;
    'outer: while 2 * size <= pool.len() {
        for combo in pool.iter().copied().combinations(size) {
            subsets += 1;
            if subsets > cap {
                return Recombination::CapExceeded { subsets };
            }
            let d: usize = combo.iter().map(|&i| degs[i]).sum();
            if !allowed[d] {
                continue;
            }
            // The y^(d-1) coefficient of a true factor has x-degree <= 1.
            let trace_ok = (2..n).all(|k| {
                let mut acc = ctx.zero();
                for &i in &combo {
                    ctx.add_assign(&mut acc, &traces[i][k]);
                }
                ctx.is_zero(&acc)
            });
            if !trace_ok {
                continue;
            }
            let prec = (d + 1).min(n);
            let prod = combo[1..].iter().fold(
                lifted[combo[0]][..prec].to_vec(),
                |acc, &i| series_mul(&acc, &lifted[i], prec),
            );
            let Some(cand) = to_candidate(&prod, d) else {
                continue;
            };
            if let Some(q) = div_monic_y(&current, &cand) {
                found.push(cand);
                current = q;
                pool.retain(|i| !combo.contains(i));
                continue 'outer;
            }
        }
        size += 1;
    }
    found.push(current);
    Recombination::Done { factors: found, subsets }
}
