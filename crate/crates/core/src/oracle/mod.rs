//! Brute-force ground truth. Every routine enumerates its whole search space
//! or refuses with [`OracleError::CapExceeded`]; nothing is sampled.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{gcd, mult_order, ArithError};
use crate::bifactor::normalize;
use crate::gf::{build_field_capped, Elem, FieldCtx, GfError};
use crate::poly::factor::roots;
use crate::poly::{build_ft_gt_capped, BiPoly, PolyError, UniPoly};

pub const DEFAULT_FIELD_CAP: u64 = 1_000_000;
pub const DEFAULT_PAIR_CAP: u64 = 100_000_000;
pub const DEFAULT_CANDIDATE_CAP: u64 = 1_000_000;
/// Fields larger than this use per-`x` root finding in the point search.
pub const PAIR_SEARCH_FIELD_LIMIT: u64 = 10_000;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("{what} = {value} exceeds oracle cap {cap}")]
    CapExceeded { what: &'static str, value: u64, cap: u64 },
    #[error("invalid oracle input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone)]
pub struct OracleConfig {
    pub field_cap: u64,
    pub pair_cap: u64,
    pub candidate_cap: u64,
    pub ext_cap: usize,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            field_cap: DEFAULT_FIELD_CAP,
            pair_cap: DEFAULT_PAIR_CAP,
            candidate_cap: DEFAULT_CANDIDATE_CAP,
            ext_cap: 300,
            seed: crate::poly::factor::DEFAULT_SEED,
        }
    }
}

/// A rendered oracle answer.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub query: String,
    pub params: serde_json::Value,
    pub result: serde_json::Value,
    /// What was enumerated to reach the answer.
    pub exhaustive: String,
}

fn field(p: u64, n: usize, cfg: &OracleConfig) -> Result<Arc<FieldCtx>, OracleError> {
    let q = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if q > cfg.field_cap as u128 {
        return Err(OracleError::CapExceeded {
            what: "field size",
            value: q.min(u64::MAX as u128) as u64,
            cap: cfg.field_cap,
        });
    }
    Ok(build_field_capped(p, n, cfg.ext_cap)?)
}

fn is_bijection(ctx: &FieldCtx, f: impl Fn(&Elem) -> Elem) -> bool {
    let q = ctx.order_u64().expect("capped field");
    let mut seen = vec![0u64; (q as usize).div_ceil(64)];
    for i in 0..q {
        let v = ctx.index_of(&f(&ctx.elem_from_index(i))).expect("field element");
        let (w, b) = ((v / 64) as usize, v % 64);
        if seen[w] >> b & 1 == 1 {
            return false;
        }
        seen[w] |= 1 << b;
    }
    true
}

/// Whether `h` permutes its field.
pub fn is_pp(h: &UniPoly, cfg: &OracleConfig) -> Result<bool, OracleError> {
    let ctx = h.ctx();
    let q = ctx.order_u64().unwrap_or(u64::MAX);
    if q > cfg.field_cap {
        return Err(OracleError::CapExceeded { what: "field size", value: q, cap: cfg.field_cap });
    }
    Ok(is_bijection(ctx, |x| h.eval(x)))
}

/// Whether `x^t` is planar over `F_{p^n}`, i.e. `(x+1)^t - x^t` permutes it.
pub fn is_planar(p: u64, t: u64, n: usize, cfg: &OracleConfig) -> Result<bool, OracleError> {
    let ctx = field(p, n, cfg)?;
    let one = ctx.one();
    Ok(is_bijection(&ctx, |x| ctx.sub(&ctx.pow_u64(&ctx.add(x, &one), t), &ctx.pow_u64(x, t))))
}

/// Whether `g_t` has an `F_{p^n}`-rational affine point off the diagonal.
pub fn distinct_point_search(p: u64, t: u64, n: usize, cfg: &OracleConfig) -> Result<bool, OracleError> {
    let ctx = field(p, n, cfg)?;
    let q = ctx.order_u64().expect("capped field");
    let (_, g) = build_ft_gt_capped(p, t, u64::MAX)?;
    let g = g.recode(&ctx)?;
    let elems: Vec<Elem> = (0..q).map(|i| ctx.elem_from_index(i)).collect();
    if q <= PAIR_SEARCH_FIELD_LIMIT {
        if q * q > cfg.pair_cap {
            return Err(OracleError::CapExceeded { what: "point pairs", value: q * q, cap: cfg.pair_cap });
        }
        for x in &elems {
            for y in &elems {
                if x != y && ctx.is_zero(&g.eval(x, y)) {
                    return Ok(true);
                }
            }
        }
        return Ok(false);
    }
    for x in &elems {
        let col = g.specialize_x(x);
        if col.is_zero() {
            // g_t(x, y) = 0 for every y, and q > 1 leaves some y != x.
            return Ok(true);
        }
        if roots(&col, cfg.seed).iter().any(|y| y != x) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `|Omega_t|` by testing every pair of `(t-1)`-th roots of unity, the roots
/// being found by factoring `x^(t-1) - 1`.
pub fn brute_pairs(p: u64, t: u64, cfg: &OracleConfig) -> Result<u64, OracleError> {
    if t < 4 || gcd(p, t - 1) != 1 {
        return Err(OracleError::Invalid(format!("need t >= 4 with p not dividing t-1, got t = {t}")));
    }
    let n = t - 1;
    let pairs = (n - 1) * (n - 1);
    if pairs > cfg.pair_cap {
        return Err(OracleError::CapExceeded { what: "root pairs", value: pairs, cap: cfg.pair_cap });
    }
    let e = mult_order(p, n)? as usize;
    if e > cfg.ext_cap {
        return Err(OracleError::CapExceeded { what: "extension degree", value: e as u64, cap: cfg.ext_cap as u64 });
    }
    let ctx = build_field_capped(p, e, cfg.ext_cap)?;
    let mut c = vec![ctx.zero(); n as usize + 1];
    c[0] = ctx.neg(&ctx.one());
    c[n as usize] = ctx.one();
    let mu = roots(&UniPoly::new(ctx.clone(), c), cfg.seed);
    if mu.len() as u64 != n {
        return Err(OracleError::Invalid(format!("x^{n} - 1 has {} roots in F_{p}^{e}", mu.len())));
    }
    let one = ctx.one();
    let vals: Vec<Option<Elem>> = mu
        .iter()
        .map(|r| (!ctx.is_one(r)).then(|| ctx.pow_u64(&ctx.sub(r, &one), n)))
        .collect();
    let mut count = 0u64;
    for (i, a) in vals.iter().enumerate() {
        for (j, b) in vals.iter().enumerate() {
            if let (Some(a), Some(b)) = (a, b) {
                if i != j && a == b {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

#[derive(Debug, Clone)]
pub struct DivisorSearch {
    /// Every normalized divisor of degree `1..=max_deg`.
    pub divisors: Vec<BiPoly>,
    /// Divisors with no proper divisor in `divisors`.
    pub irreducible: Vec<BiPoly>,
    pub candidates: u64,
}

/// Monomials of total degree at most `d`, ascending in the order used by
/// [`normalize`]: by total degree, then by `x`-degree.
fn monomials(d: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for tot in 0..=d {
        for a in 0..=tot {
            out.push((a, tot - a));
        }
    }
    out
}

/// Finds every divisor of `f` of total degree at most `max_deg` by trial
/// division over all normalized candidates.
///
/// A candidate `u` can only divide `f` if `u(P) != 0` wherever `f(P) != 0`
/// on `F_q^2`; candidates failing that are discarded before dividing.
pub fn exhaustive_bifactor(f: &BiPoly, max_deg: u32, cfg: &OracleConfig) -> Result<DivisorSearch, OracleError> {
    if max_deg > 3 {
        return Err(OracleError::Invalid(format!("max_deg = {max_deg} > 3")));
    }
    let ctx = f.ctx().clone();
    let q = ctx.order_u64().unwrap_or(u64::MAX);
    let mons = monomials(max_deg);
    // Leading monomial at position k leaves k free coefficients below it.
    let total: u128 = (1..mons.len()).map(|k| (q as u128).saturating_pow(k as u32)).sum();
    if total > cfg.candidate_cap as u128 {
        return Err(OracleError::CapExceeded {
            what: "divisor candidates",
            value: total.min(u64::MAX as u128) as u64,
            cap: cfg.candidate_cap,
        });
    }
    let elems: Vec<Elem> = (0..q).map(|i| ctx.elem_from_index(i)).collect();
    // Points where f does not vanish, and monomial values there.
    let mut table: Vec<Vec<Elem>> = Vec::new();
    for x in &elems {
        for y in &elems {
            if !ctx.is_zero(&f.eval(x, y)) {
                table.push(
                    mons.iter()
                        .map(|&(a, b)| ctx.mul(&ctx.pow_u64(x, a as u64), &ctx.pow_u64(y, b as u64)))
                        .collect(),
                );
            }
        }
    }
    let mut divisors = Vec::new();
    for lead in 1..mons.len() {
        let mut digits = vec![0usize; lead];
        let mut vals: Vec<Elem> = table.iter().map(|row| row[lead].clone()).collect();
        loop {
            if vals.iter().all(|v| !ctx.is_zero(v)) {
                let mut terms: Vec<((u32, u32), Elem)> = vec![(mons[lead], ctx.one())];
                for (k, &dg) in digits.iter().enumerate() {
                    if dg != 0 {
                        terms.push((mons[k], elems[dg].clone()));
                    }
                }
                let u = BiPoly::from_terms(&ctx, terms);
                if divides(&u, f) {
                    divisors.push(u);
                }
            }
            // Mixed-radix increment, updating values by the coefficient change.
            let mut k = 0;
            loop {
                if k == lead {
                    break;
                }
                let old = digits[k];
                digits[k] = (old + 1) % q as usize;
                let delta = ctx.sub(&elems[digits[k]], &elems[old]);
                for (v, row) in vals.iter_mut().zip(&table) {
                    ctx.add_assign(v, &ctx.mul(&delta, &row[k]));
                }
                if digits[k] != 0 {
                    break;
                }
                k += 1;
            }
            if k == lead {
                break;
            }
        }
    }
    divisors.sort_by_cached_key(|u| (u.total_degree(), u.to_string()));
    let irreducible = divisors
        .iter()
        .filter(|u| {
            !divisors.iter().any(|w| w.total_degree() < u.total_degree() && divides(w, u))
        })
        .cloned()
        .collect();
    Ok(DivisorSearch { divisors, irreducible, candidates: total as u64 })
}

/// Exact divisibility by division with respect to the order of [`normalize`].
pub fn divides(u: &BiPoly, f: &BiPoly) -> bool {
    let ctx = u.ctx();
    let key = |(a, b): &(u32, u32)| (a + b, *a);
    let Some((&lm, lc)) = u.terms().iter().max_by_key(|(m, _)| key(m)) else {
        return false;
    };
    let inv = ctx.inv(lc).expect("nonzero leading coefficient");
    let mut r = f.clone();
    while let Some((&m, c)) = r.terms().iter().max_by_key(|(m, _)| key(m)) {
        if m.0 < lm.0 || m.1 < lm.1 {
            return false;
        }
        let s = ctx.mul(c, &inv);
        let shift = (m.0 - lm.0, m.1 - lm.1);
        let mut next = r.clone();
        for (&(a, b), v) in u.terms() {
            next.add_term((a + shift.0, b + shift.1), &ctx.neg(&ctx.mul(&s, v)));
        }
        r = next;
    }
    true
}

/// Normalizes and sorts a factor list for comparison with the oracle.
pub fn canonical(fs: &[BiPoly]) -> Vec<String> {
    let mut out: Vec<String> = fs.iter().map(|h| normalize(h).to_string()).collect();
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::build_field;

    fn cfg() -> OracleConfig {
        OracleConfig::default()
    }

    #[test]
    fn pp_examples() {
        let f5 = build_field(5, 1).unwrap();
        assert!(is_pp(&UniPoly::from_u64s(&f5, &[1, 2]), &cfg()).unwrap());
        assert!(!is_pp(&UniPoly::from_u64s(&f5, &[0, 0, 1]), &cfg()).unwrap());
        let f27 = build_field(3, 3).unwrap();
        let mut c = [0u64; 15];
        // (x+1)^14 - x^14 over F_27, coefficients C(14, k) mod 3.
        for (k, slot) in c.iter_mut().enumerate().take(14) {
            *slot = crate::poly::binom_mod(14, k as u64, 3) as u64;
        }
        assert!(!is_pp(&UniPoly::from_u64s(&f27, &c[..14]), &cfg()).unwrap());
    }

    #[test]
    fn planar_examples() {
        for n in 1..=5 {
            assert!(is_planar(3, 2, n, &cfg()).unwrap());
        }
        assert!(!is_planar(3, 4, 2, &cfg()).unwrap());
        assert!(is_planar(3, 14, 4, &cfg()).unwrap());
        assert!(!is_planar(3, 14, 3, &cfg()).unwrap());
        let tiny = OracleConfig { field_cap: 100, ..cfg() };
        assert!(matches!(is_planar(3, 4, 5, &tiny), Err(OracleError::CapExceeded { .. })));
    }

    #[test]
    fn point_search_examples() {
        assert!(!distinct_point_search(3, 4, 1, &cfg()).unwrap());
        assert!(distinct_point_search(3, 4, 2, &cfg()).unwrap());
    }

    #[test]
    fn point_search_paths_agree() {
        // F_{3^9} is above the pair-search limit.
        let big = OracleConfig { field_cap: 100_000, ..cfg() };
        for t in [4u64, 8, 10] {
            let fast = distinct_point_search(3, t, 9, &big).unwrap();
            assert_eq!(fast, !is_planar(3, t, 9, &big).unwrap(), "t = {t}");
        }
    }

    #[test]
    fn brute_pairs_3_14() {
        assert_eq!(brute_pairs(3, 14, &cfg()).unwrap(), 60);
    }

    #[test]
    fn divisor_search_examples() {
        let f9 = build_field(3, 2).unwrap();
        let g4 = build_ft_gt_capped(3, 4, 100).unwrap().1;
        let res = exhaustive_bifactor(&g4.recode(&f9).unwrap(), 1, &cfg()).unwrap();
        assert_eq!(res.irreducible.len(), 2);
        let res = exhaustive_bifactor(&g4, 1, &cfg()).unwrap();
        assert!(res.divisors.is_empty());
        let g3 = build_ft_gt_capped(5, 3, 100).unwrap().1;
        let res = exhaustive_bifactor(&g3, 1, &cfg()).unwrap();
        assert_eq!(res.divisors.len(), 1);
        assert_eq!(res.divisors[0], normalize(&g3));
    }

    #[test]
    fn divides_matches_multiplication() {
        let f7 = build_field(7, 1).unwrap();
        let a = BiPoly::from_u64_terms(&f7, &[((1, 0), 1), ((0, 1), 3), ((0, 0), 2)]);
        let b = BiPoly::from_u64_terms(&f7, &[((2, 0), 1), ((1, 1), 5), ((0, 0), 4)]);
        assert!(divides(&a, &a.mul(&b)));
        assert!(divides(&b, &a.mul(&b)));
        assert!(!divides(&a, &b));
    }
}
