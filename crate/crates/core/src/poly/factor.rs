//! Univariate factorization over `F_q`: squarefree split, distinct-degree
//! split, then Cantor–Zassenhaus equal-degree splitting (odd `q` only).

use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::uni::UniPoly;
use crate::arith::factorize;

pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// Squarefree decomposition of a monic polynomial: pairs `(g, e)` with
/// `f = prod g^e` and each `g` squarefree. Equal exponents are merged.
pub fn squarefree_decomposition(f: &UniPoly) -> Vec<(UniPoly, u32)> {
    let mut out = Vec::new();
    sqf_rec(&f.monic(), 1, &mut out);
    out.sort_by_key(|(_, e)| *e);
    let mut merged: Vec<(UniPoly, u32)> = Vec::new();
    for (g, e) in out {
        match merged.last_mut() {
            Some((h, e2)) if *e2 == e => *h = h.mul(&g),
            _ => merged.push((g, e)),
        }
    }
    merged
}

fn sqf_rec(f: &UniPoly, mult: u32, out: &mut Vec<(UniPoly, u32)>) {
    if f.degree().unwrap_or(0) == 0 {
        return;
    }
    let d = f.derivative();
    let mut c = f.gcd(&d);
    let mut w = f.div_exact(&c).expect("gcd divides");
    let mut i = 1;
    while w.degree().unwrap_or(0) > 0 {
        let y = w.gcd(&c);
        let z = w.div_exact(&y).expect("gcd divides");
        if z.degree().unwrap_or(0) > 0 {
            out.push((z, i * mult));
        }
        i += 1;
        c = c.div_exact(&y).expect("gcd divides");
        w = y;
    }
    if c.degree().unwrap_or(0) > 0 {
        let root = pth_root(&c);
        sqf_rec(&root, mult * f.ctx().p(), out);
    }
}

/// Inverse of the `p`-th power map on a polynomial in `x^p`.
fn pth_root(f: &UniPoly) -> UniPoly {
    let ctx = f.ctx();
    let p = ctx.p() as usize;
    let k = ctx.degree();
    let c = f
        .coeffs()
        .iter()
        .step_by(p)
        .map(|a| ctx.frobenius_n(a, k - 1))
        .collect();
    UniPoly::new(ctx.clone(), c)
}

/// Distinct-degree split of a monic squarefree polynomial: `(g, d)` where
/// `g` is the product of all degree-`d` irreducible factors.
pub fn distinct_degree(f: &UniPoly) -> Vec<(UniPoly, usize)> {
    let ctx = f.ctx().clone();
    let x = UniPoly::x(&ctx);
    let mut rest = f.monic();
    let mut h = x.rem(&rest);
    let mut out = Vec::new();
    let mut d = 0;
    while let Some(n) = rest.degree() {
        if n < 2 * (d + 1) {
            if n > 0 {
                out.push((rest.clone(), n));
            }
            break;
        }
        d += 1;
        h = h.pow_q_mod(&rest);
        let g = h.sub(&x).gcd(&rest);
        if g.degree().unwrap_or(0) > 0 {
            rest = rest.div_exact(&g).expect("gcd divides");
            h = h.rem(&rest);
            out.push((g, d));
        }
    }
    out
}

/// Splits a monic squarefree product of degree-`d` irreducibles.
pub fn equal_degree(f: &UniPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<UniPoly> {
    let n = f.degree().unwrap_or(0);
    if n == d || n == 0 {
        return vec![f.clone()];
    }
    let ctx = f.ctx().clone();
    assert!(ctx.p() != 2, "characteristic 2 is not supported");
    let e: BigUint = (ctx.order().pow(d as u32) - BigUint::one()) >> 1;
    loop {
        let a = UniPoly::new(ctx.clone(), (0..n).map(|_| ctx.random(rng)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let mut g = a.gcd(f);
        if g.degree().unwrap_or(0) == 0 {
            let b = a.powmod(&e, f).sub(&UniPoly::one(&ctx));
            g = b.gcd(f);
        }
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let h = f.div_exact(&g).expect("gcd divides");
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&h, d, rng));
            return out;
        }
    }
}

/// Complete factorization into monic irreducibles with multiplicities,
/// sorted by degree then coefficients. The unit is dropped.
pub fn factor(f: &UniPoly, seed: u64) -> Vec<(UniPoly, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    for (g, e) in squarefree_decomposition(f) {
        for (h, d) in distinct_degree(&g) {
            for irr in equal_degree(&h, d, &mut rng) {
                out.push((irr, e));
            }
        }
    }
    out.sort_by_key(|a| a.0.sort_key());
    out
}

/// Distinct roots in the coefficient field, sorted by element index.
pub fn roots(f: &UniPoly, seed: u64) -> Vec<crate::gf::Elem> {
    let ctx = f.ctx().clone();
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let f = f.monic();
    let x = UniPoly::x(&ctx);
    let split = x.pow_q_mod(&f).sub(&x).gcd(&f);
    if split.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<_> = equal_degree(&split, 1, &mut rng)
        .into_iter()
        .map(|l| ctx.neg(&l.coeff(0)))
        .collect();
    out.sort_by_key(|e| ctx.index_of(e));
    out
}

/// Rabin's irreducibility test, independent of the factorization path.
pub fn is_irreducible(f: &UniPoly) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let f = f.monic();
    let x = UniPoly::x(f.ctx());
    let frob = |times: usize| {
        let mut h = x.rem(&f);
        for _ in 0..times {
            h = h.pow_q_mod(&f);
        }
        h
    };
    for (r, _) in factorize(n as u64) {
        let h = frob(n / r as usize);
        if h.sub(&x).gcd(&f).degree().unwrap_or(0) > 0 {
            return false;
        }
    }
    frob(n).sub(&x).rem(&f).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::build_field;

    fn product(fs: &[(UniPoly, u32)], one: UniPoly) -> UniPoly {
        fs.iter().fold(one, |acc, (g, e)| {
            (0..*e).fold(acc, |a, _| a.mul(g))
        })
    }

    #[test]
    fn x7_minus_1_over_f3() {
        let f3 = build_field(3, 1).unwrap();
        let f = UniPoly::from_u64s(&f3, &[2, 0, 0, 0, 0, 0, 0, 1]);
        let fs = factor(&f, DEFAULT_SEED);
        let degs: Vec<_> = fs.iter().map(|(g, e)| (g.degree().unwrap(), *e)).collect();
        assert_eq!(degs, vec![(1, 1), (6, 1)]);
        assert_eq!(fs[0].0, UniPoly::from_u64s(&f3, &[2, 1]));
        assert_eq!(product(&fs, UniPoly::one(&f3)), f);
    }

    #[test]
    fn repeated_and_inseparable_factors() {
        let f5 = build_field(5, 1).unwrap();
        // (x^5 + 2)^2 * (x^2 + 2) = (x+2)^10 * (x^2+2)
        let a = UniPoly::from_u64s(&f5, &[2, 0, 0, 0, 0, 1]);
        let b = UniPoly::from_u64s(&f5, &[2, 0, 1]);
        let f = a.mul(&a).mul(&b);
        let fs = factor(&f, 1);
        assert_eq!(fs.len(), 2);
        assert_eq!(fs[0], (UniPoly::from_u64s(&f5, &[2, 1]), 10));
        assert_eq!(fs[1], (b, 1));
    }

    #[test]
    fn factors_over_extension() {
        let f9 = build_field(3, 2).unwrap();
        // x^2 + 1 splits over F_9.
        let f = UniPoly::from_u64s(&f9, &[1, 0, 1]);
        let r = roots(&f, 3);
        assert_eq!(r.len(), 2);
        for z in &r {
            assert!(f9.is_zero(&f.eval(z)));
        }
        // x^8 - 1 has all of F_9^* as roots.
        let g = UniPoly::from_u64s(&f9, &[2, 0, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(roots(&g, 0).len(), 8);
    }

    #[test]
    fn degree_counts_match_necklace_formula() {
        // x^(q^2) - x over F_q is the product of all monic irreducibles of
        // degree 1 and 2: q linear factors and (q^2 - q)/2 quadratics.
        let f5 = build_field(5, 1).unwrap();
        let mut c = vec![0u64; 26];
        c[25] = 1;
        c[1] = 4;
        let f = UniPoly::from_u64s(&f5, &c);
        let fs = factor(&f, 9);
        let lin = fs.iter().filter(|(g, _)| g.degree() == Some(1)).count();
        let quad = fs.iter().filter(|(g, _)| g.degree() == Some(2)).count();
        assert_eq!((lin, quad), (5, 10));
        assert!(fs.iter().all(|(g, e)| *e == 1 && is_irreducible(g)));
    }

    #[test]
    fn seeds_give_same_sorted_output() {
        let f7 = build_field(7, 1).unwrap();
        let f = UniPoly::from_u64s(&f7, &[3, 1, 4, 1, 5, 0, 2, 6, 5, 1]);
        assert_eq!(factor(&f, 1), factor(&f, 12345));
    }
}
