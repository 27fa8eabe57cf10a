//! Integer-only number theory: exponent decomposition, multiplicative
//! orders, divisors and recognition of the known exceptional exponents.

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

/// Default ceiling for [`divisors`].
pub const DEFAULT_DIVISOR_CAP: u64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not a prime number")]
    NotPrime(u64),
    #[error("p = {p} divides t = {t}")]
    DividesExponent { p: u64, t: u64 },
    #[error("exponent must be at least 2, got {0}")]
    ExponentTooSmall(u64),
    #[error("gcd({p}, {n}) != 1, multiplicative order undefined")]
    NotCoprime { p: u64, n: u64 },
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("{n} exceeds the divisor enumeration cap {cap}")]
    CapExceeded { n: u64, cap: u64 },
}

/// Which residue class of `t` modulo `p` we are in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Case {
    /// `t mod p != 1`
    A,
    /// `t mod p == 1`
    B,
}

impl std::fmt::Display for Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Case::A => f.write_str("A"),
            Case::B => f.write_str("B"),
        }
    }
}

/// `t = p^i * ell + r` with `0 < r < p`, and `ell = p * s + j` with `0 < j < p`.
///
/// When `t < p` the difference `t - r` vanishes; we then store `i = 0`,
/// `ell = j = s = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub p: u64,
    pub t: u64,
    pub r: u64,
    pub i: u32,
    pub ell: u64,
    pub j: u64,
    pub s: u64,
    pub t_even: bool,
    pub case: Case,
}

impl Decomposition {
    pub fn p_pow_i(&self) -> u64 {
        self.p.pow(self.i)
    }

    /// Recomputes `t` from the stored pieces.
    pub fn reconstruct(&self) -> u64 {
        let ell = self.p * self.s + self.j;
        self.p_pow_i() * ell + self.r
    }
}

/// Strips every factor `p` from `t`.
pub fn reduce_exponent(p: u64, mut t: u64) -> u64 {
    assert!(p >= 2, "p must be at least 2");
    while t != 0 && t.is_multiple_of(p) {
        t /= p;
    }
    t
}

pub fn decompose(p: u64, t: u64) -> Result<Decomposition, ArithError> {
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    if t < 2 {
        return Err(ArithError::ExponentTooSmall(t));
    }
    if t.is_multiple_of(p) {
        return Err(ArithError::DividesExponent { p, t });
    }
    let r = t % p;
    let mut rest = t - r;
    let mut i = 0u32;
    if rest != 0 {
        while rest.is_multiple_of(p) {
            rest /= p;
            i += 1;
        }
    }
    let ell = rest;
    let j = ell % p;
    let s = ell / p;
    Ok(Decomposition {
        p,
        t,
        r,
        i,
        ell,
        j,
        s,
        t_even: t.is_multiple_of(2),
        case: if r == 1 { Case::B } else { Case::A },
    })
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test by trial division; fine for the exponent
/// ranges this crate works with.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Prime factorization as ascending `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    for q in [2u64, 3, 5] {
        if n.is_multiple_of(q) {
            let mut e = 0;
            while n.is_multiple_of(q) {
                n /= q;
                e += 1;
            }
            out.push((q, e));
        }
    }
    // 2,3,5 wheel: remaining candidates are coprime to 30.
    const STEPS: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut d = 7u64;
    let mut k = 0;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += STEPS[k];
        k = (k + 1) % STEPS.len();
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (q, _)| acc / q * (q - 1))
}

/// Multiplicative order of `p` modulo `n` (the `e_n` of the cyclotomic
/// extension splitting `x^n - 1` over `F_p`).
pub fn mult_order(p: u64, n: u64) -> Result<u64, ArithError> {
    if n == 0 {
        return Err(ArithError::ZeroModulus);
    }
    if gcd(p, n) != 1 {
        return Err(ArithError::NotCoprime { p, n });
    }
    if n == 1 {
        return Ok(1);
    }
    let mut order = totient(n);
    for (q, _) in factorize(order) {
        while order.is_multiple_of(q) && pow_mod(p, order / q, n) == 1 {
            order /= q;
        }
    }
    Ok(order)
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64, cap: u64) -> Result<Vec<u64>, ArithError> {
    if n == 0 {
        return Err(ArithError::ZeroModulus);
    }
    if n > cap {
        return Err(ArithError::CapExceeded { n, cap });
    }
    let mut divs = vec![1u64];
    for (q, e) in factorize(n) {
        let base = divs.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= q;
            for idx in 0..base {
                divs.push(divs[idx] * pk);
            }
        }
    }
    divs.sort_unstable();
    Ok(divs)
}

/// Which known family makes `x^t` planar for infinitely many extensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum ExceptionalForm {
    /// `t = 2`
    Classical,
    /// `t = p^i + 1`
    DembowskiOstrom { i: u32 },
    /// `p = 3`, `t = (3^i + 1) / 2`
    CoulterMatthews { i: u32 },
}

impl std::fmt::Display for ExceptionalForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExceptionalForm::Classical => f.write_str("classical t=2"),
            ExceptionalForm::DembowskiOstrom { i } => write!(f, "Dembowski-Ostrom p^{i}+1"),
            ExceptionalForm::CoulterMatthews { i } => write!(f, "Coulter-Matthews (3^{i}+1)/2"),
        }
    }
}

/// Recognizes `t = 2`, `t = p^i + 1`, and for `p = 3` also
/// `t = (3^i + 1) / 2`, for every `i` (no parity restriction).
pub fn is_exceptional(p: u64, t: u64) -> Option<ExceptionalForm> {
    if t == 2 {
        return Some(ExceptionalForm::Classical);
    }
    let mut pi = p;
    let mut i = 1u32;
    while pi < t {
        if pi + 1 == t {
            return Some(ExceptionalForm::DembowskiOstrom { i });
        }
        pi = match pi.checked_mul(p) {
            Some(v) => v,
            None => break,
        };
        i += 1;
    }
    if p == 3 {
        let mut pi = 3u64;
        let mut i = 1u32;
        while pi.div_ceil(2) <= t {
            if pi.div_ceil(2) == t {
                return Some(ExceptionalForm::CoulterMatthews { i });
            }
            pi = match pi.checked_mul(3) {
                Some(v) => v,
                None => break,
            };
            i += 1;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce_exponent(3, 12), 4);
        assert_eq!(reduce_exponent(5, 7), 7);
        assert_eq!(reduce_exponent(3, 54), 2);
        assert_eq!(reduce_exponent(3, reduce_exponent(3, 54)), 2);
    }

    #[test]
    fn decompose_examples() {
        let d = decompose(5, 76).unwrap();
        assert_eq!((d.r, d.i, d.ell, d.case), (1, 2, 3, Case::B));
        let d = decompose(3, 46).unwrap();
        assert_eq!((d.r, d.i, d.ell, d.case), (1, 2, 5, Case::B));
        let d = decompose(5, 4).unwrap();
        assert_eq!((d.r, d.i, d.ell, d.j, d.s, d.case), (4, 0, 0, 0, 0, Case::A));
        assert_eq!(d.reconstruct(), 4);
        assert_eq!(
            decompose(3, 12),
            Err(ArithError::DividesExponent { p: 3, t: 12 })
        );
        assert_eq!(decompose(4, 7), Err(ArithError::NotPrime(4)));
    }

    #[test]
    fn even_case_b_has_odd_ell() {
        for p in [3u64, 5, 7, 11] {
            for t in (4..2000).step_by(2) {
                if t % p == 1 {
                    let d = decompose(p, t).unwrap();
                    assert_eq!(d.ell % 2, 1, "p={p} t={t}");
                }
            }
        }
    }

    #[test]
    fn order_examples() {
        assert_eq!(mult_order(5, 13).unwrap(), 4);
        assert_eq!(mult_order(5, 7).unwrap(), 6);
        for p in [3, 5, 7, 11, 13] {
            assert_eq!(mult_order(p, 2).unwrap(), 1);
        }
        assert_eq!(mult_order(3, 3), Err(ArithError::NotCoprime { p: 3, n: 3 }));
    }

    #[test]
    fn order_matches_power_iteration() {
        for p in [3u64, 5, 7] {
            for n in 2..=2000u64 {
                if n % p == 0 {
                    continue;
                }
                let mut e = 1;
                let mut x = p % n;
                while x != 1 {
                    x = x * p % n;
                    e += 1;
                }
                assert_eq!(mult_order(p, n).unwrap(), e, "p={p} n={n}");
            }
        }
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(divisors(8, DEFAULT_DIVISOR_CAP).unwrap(), vec![1, 2, 4, 8]);
        assert_eq!(
            divisors(75, DEFAULT_DIVISOR_CAP).unwrap(),
            vec![1, 3, 5, 15, 25, 75]
        );
        assert_eq!(divisors(1, DEFAULT_DIVISOR_CAP).unwrap(), vec![1]);
        assert!(matches!(divisors(100, 99), Err(ArithError::CapExceeded { .. })));
    }

    #[test]
    fn exceptional_examples() {
        assert_eq!(
            is_exceptional(3, 14),
            Some(ExceptionalForm::CoulterMatthews { i: 3 })
        );
        assert_eq!(
            is_exceptional(5, 26),
            Some(ExceptionalForm::DembowskiOstrom { i: 2 })
        );
        assert_eq!(is_exceptional(5, 8), None);
        assert_eq!(is_exceptional(7, 2), Some(ExceptionalForm::Classical));
    }

    #[test]
    fn exceptional_set_p3_below_1000() {
        let even: Vec<u64> = (2..1000)
            .filter(|&t| t % 2 == 0 && is_exceptional(3, t).is_some())
            .collect();
        assert_eq!(even, vec![2, 4, 10, 14, 28, 82, 122, 244, 730]);
        assert!(is_exceptional(3, 5).is_some());
        assert!(is_exceptional(3, 41).is_some());
    }

    proptest! {
        #[test]
        fn decompose_round_trips(p in prop::sample::select(vec![3u64, 5, 7, 11]), t in 2u64..10_000) {
            prop_assume!(t % p != 0);
            let d = decompose(p, t).unwrap();
            prop_assert_eq!(d.reconstruct(), t);
            prop_assert!(d.r > 0 && d.r < p);
            if d.ell > 0 {
                prop_assert!(!d.ell.is_multiple_of(p));
                prop_assert!(d.j > 0 && d.j < p);
                prop_assert_eq!(d.p_pow_i() * d.ell + d.r, t);
            }
        }

        #[test]
        fn divisors_divide(n in 1u64..100_000) {
            let ds = divisors(n, DEFAULT_DIVISOR_CAP).unwrap();
            prop_assert!(ds.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(ds.iter().all(|d| n % d == 0));
            let brute = (1..=n).filter(|d| n % d == 0).count();
            prop_assert_eq!(ds.len(), brute);
        }
    }
}
