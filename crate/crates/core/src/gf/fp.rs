//! Dense polynomial kernels over a prime field `F_p`.
//!
//! Polynomials are little-endian `u32` coefficient vectors, every entry
//! already reduced mod `p`. These kernels back both the extension-field
//! element arithmetic and the modulus search.

pub fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

#[inline]
pub fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    let s = a as u64 + b as u64;
    if s >= p as u64 {
        (s - p as u64) as u32
    } else {
        s as u32
    }
}

#[inline]
pub fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        (a as u64 + p as u64 - b as u64) as u32
    }
}

#[inline]
pub fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub fn pow_mod(mut b: u32, mut e: u64, p: u32) -> u32 {
    let mut acc = 1u32 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Inverse in `F_p`; `a` must be nonzero.
pub fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(p as i64) as u32
}

/// Number of `(p-1)^2` products a `u64` accumulator absorbs without overflow.
pub fn lazy_budget(p: u32) -> u64 {
    let m = (p as u64 - 1).max(1);
    u64::MAX / (m * m) - 1
}

/// Schoolbook product into a `u64` accumulator, reduced on exit.
pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u64; a.len() + b.len() - 1];
    mul_into(&mut acc, a, b, p);
    let mut out: Vec<u32> = acc.into_iter().map(|c| (c % p as u64) as u32).collect();
    trim(&mut out);
    out
}

/// Accumulates `a*b` into `acc`; entries stay below `p` on return.
pub fn mul_into(acc: &mut [u64], a: &[u32], b: &[u32], p: u32) {
    let pm = p as u64;
    let budget = lazy_budget(p);
    if budget > b.len().min(a.len()) as u64 {
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let ai = ai as u64;
            for (slot, &bj) in acc[i..i + b.len()].iter_mut().zip(b) {
                *slot += ai * bj as u64;
            }
        }
        for c in acc.iter_mut() {
            *c %= pm;
        }
    } else {
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let ai = ai as u64;
            for (slot, &bj) in acc[i..i + b.len()].iter_mut().zip(b) {
                *slot = (*slot + ai * bj as u64 % pm) % pm;
            }
        }
    }
}

pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out.push(sub_mod(x, y, p));
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo `m` (any nonzero `m`).
pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    divrem(a, m, p).1
}

/// Quotient and remainder; `m` must be nonzero.
pub fn divrem(a: &[u32], m: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let dm = degree(m).expect("division by zero polynomial");
    let mut r: Vec<u32> = a.to_vec();
    trim(&mut r);
    if r.len() <= dm {
        return (Vec::new(), r);
    }
    let lead_inv = inv_mod(m[dm], p);
    let mut q = vec![0u32; r.len() - dm];
    for d in (dm..r.len()).rev() {
        let c = r[d];
        if c == 0 {
            continue;
        }
        let f = mul_mod(c, lead_inv, p);
        q[d - dm] = f;
        for (i, &mi) in m[..=dm].iter().enumerate() {
            if mi != 0 {
                let idx = d - dm + i;
                r[idx] = sub_mod(r[idx], mul_mod(f, mi, p), p);
            }
        }
    }
    r.truncate(dm);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

/// Monic gcd.
pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    make_monic(&mut x, p);
    x
}

pub fn make_monic(a: &mut Vec<u32>, p: u32) {
    trim(a);
    if let Some(&lead) = a.last() {
        if lead != 1 {
            let inv = inv_mod(lead, p);
            for c in a.iter_mut() {
                *c = mul_mod(*c, inv, p);
            }
        }
    }
}

/// Inverse of `a` modulo `m` via the extended Euclidean algorithm, or
/// `None` when they are not coprime.
pub fn inv_modulo(a: &[u32], m: &[u32], p: u32) -> Option<Vec<u32>> {
    let mut r0 = m.to_vec();
    let mut r1 = rem(a, m, p);
    trim(&mut r0);
    let mut s0: Vec<u32> = Vec::new();
    let mut s1: Vec<u32> = vec![1];
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let qs = mul(&q, &s1, p);
        let s2 = sub(&s0, &qs, p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    if r0.len() != 1 {
        return None;
    }
    let inv = inv_mod(r0[0], p);
    let mut out: Vec<u32> = s0.iter().map(|&c| mul_mod(c, inv, p)).collect();
    trim(&mut out);
    Some(out)
}

/// Reduction modulo a monic polynomial `x^k + sum(c_e x^e)`, storing only
/// the nonzero tail entries as `(e, -c_e mod p)`.
#[derive(Debug, Clone)]
pub struct SparseModulus {
    pub p: u32,
    pub k: usize,
    pub tail: Vec<(usize, u32)>,
}

impl SparseModulus {
    /// `modulus` must be monic of degree `k >= 1`.
    pub fn new(modulus: &[u32], p: u32) -> Self {
        let k = modulus.len() - 1;
        assert_eq!(modulus[k], 1, "modulus must be monic");
        let tail = modulus[..k]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(e, &c)| (e, p - c))
            .collect();
        SparseModulus { p, k, tail }
    }

    /// Reduces an accumulator of length up to `2k - 1` whose entries are
    /// already below `p`; the result occupies `acc[..k]`.
    pub fn reduce_in_place(&self, acc: &mut [u64]) {
        let p = self.p as u64;
        let k = self.k;
        for d in (k..acc.len()).rev() {
            let c = acc[d];
            if c == 0 {
                continue;
            }
            acc[d] = 0;
            for &(e, ne) in &self.tail {
                let idx = d - k + e;
                acc[idx] = (acc[idx] + c * ne as u64) % p;
            }
        }
    }

    pub fn mulmod(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut acc = vec![0u64; a.len() + b.len() - 1];
        mul_into(&mut acc, a, b, self.p);
        self.reduce_in_place(&mut acc);
        let mut out: Vec<u32> = acc[..acc.len().min(self.k)].iter().map(|&c| c as u32).collect();
        trim(&mut out);
        out
    }

    pub fn powmod(&self, base: &[u32], mut e: u64) -> Vec<u32> {
        let mut acc = vec![1u32];
        let mut b = base.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulmod(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mulmod(&b, &b);
            }
        }
        acc
    }
}

/// Ben-Or test: monic `f` of degree `k` is irreducible over `F_p` iff
/// `gcd(x^(p^i) - x, f) = 1` for every `1 <= i <= k/2`.
pub fn is_irreducible_monic(f: &[u32], p: u32) -> bool {
    let k = match degree(f) {
        Some(k) => k,
        None => return false,
    };
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let modulus = SparseModulus::new(&f[..=k], p);
    let x = vec![0u32, 1];
    let mut h = x.clone();
    for _ in 1..=k / 2 {
        h = modulus.powmod(&h, p as u64);
        let diff = sub(&h, &x, p);
        if diff.is_empty() {
            return false;
        }
        let g = gcd(&diff, f, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}
