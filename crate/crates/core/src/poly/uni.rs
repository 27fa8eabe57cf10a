use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::gf::{Elem, FieldCtx};

/// Dense univariate polynomial over a [`FieldCtx`], no trailing zeros.
#[derive(Clone)]
pub struct UniPoly {
    ctx: Arc<FieldCtx>,
    c: Vec<Elem>,
}

impl PartialEq for UniPoly {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c
    }
}

impl Eq for UniPoly {}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.c.iter().enumerate().rev() {
            if self.ctx.is_zero(c) {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let coef = self.ctx.fmt_elem(c);
            match i {
                0 => write!(f, "{coef}")?,
                _ => {
                    if !self.ctx.is_one(c) {
                        write!(f, "{coef}*")?;
                    }
                    if i == 1 {
                        f.write_str("x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl UniPoly {
    pub fn new(ctx: Arc<FieldCtx>, mut c: Vec<Elem>) -> UniPoly {
        while c.last().is_some_and(|e| ctx.is_zero(e)) {
            c.pop();
        }
        UniPoly { ctx, c }
    }

    /// From prime-field residues, constant term first.
    pub fn from_u64s(ctx: &Arc<FieldCtx>, coeffs: &[u64]) -> UniPoly {
        let c = coeffs.iter().map(|&v| ctx.from_u64(v)).collect();
        UniPoly::new(ctx.clone(), c)
    }

    pub fn zero(ctx: &Arc<FieldCtx>) -> UniPoly {
        UniPoly { ctx: ctx.clone(), c: Vec::new() }
    }

    pub fn constant(ctx: &Arc<FieldCtx>, c: Elem) -> UniPoly {
        UniPoly::new(ctx.clone(), vec![c])
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> UniPoly {
        UniPoly::constant(ctx, ctx.one())
    }

    pub fn x(ctx: &Arc<FieldCtx>) -> UniPoly {
        UniPoly::new(ctx.clone(), vec![ctx.zero(), ctx.one()])
    }

    /// `x - a`
    pub fn linear(ctx: &Arc<FieldCtx>, a: &Elem) -> UniPoly {
        UniPoly::new(ctx.clone(), vec![ctx.neg(a), ctx.one()])
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<Elem> {
        self.c
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.c.get(i).cloned().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.ctx.is_one(&self.c[0])
    }

    pub fn lead(&self) -> Option<&Elem> {
        self.c.last()
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_some_and(|l| self.ctx.is_one(l))
    }

    pub fn monic(&self) -> UniPoly {
        match self.lead() {
            None => self.clone(),
            Some(l) if self.ctx.is_one(l) => self.clone(),
            Some(l) => {
                let inv = self.ctx.inv(l).expect("nonzero lead");
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, s: &Elem) -> UniPoly {
        let c = self.c.iter().map(|a| self.ctx.mul(a, s)).collect();
        UniPoly::new(self.ctx.clone(), c)
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.c.len().max(o.c.len());
        let zero = self.ctx.zero();
        let c = (0..n)
            .map(|i| {
                let a = self.c.get(i).unwrap_or(&zero);
                let b = o.c.get(i).unwrap_or(&zero);
                self.ctx.add(a, b)
            })
            .collect();
        UniPoly::new(self.ctx.clone(), c)
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        let n = self.c.len().max(o.c.len());
        let zero = self.ctx.zero();
        let c = (0..n)
            .map(|i| {
                let a = self.c.get(i).unwrap_or(&zero);
                let b = o.c.get(i).unwrap_or(&zero);
                self.ctx.sub(a, b)
            })
            .collect();
        UniPoly::new(self.ctx.clone(), c)
    }

    pub fn neg(&self) -> UniPoly {
        let c = self.c.iter().map(|a| self.ctx.neg(a)).collect();
        UniPoly::new(self.ctx.clone(), c)
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero(&self.ctx);
        }
        let ctx = &self.ctx;
        if ctx.is_prime_field() {
            let a: Vec<u32> = self.c.iter().map(|e| e[0]).collect();
            let b: Vec<u32> = o.c.iter().map(|e| e[0]).collect();
            let prod = crate::gf::fp::mul(&a, &b, ctx.p());
            return UniPoly::new(
                ctx.clone(),
                prod.into_iter().map(|v| ctx.from_u64(v as u64)).collect(),
            );
        }
        let mut out = vec![ctx.zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if ctx.is_zero(a) {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                let t = ctx.mul(a, b);
                ctx.add_assign(&mut out[i + j], &t);
            }
        }
        UniPoly::new(ctx.clone(), out)
    }

    /// Multiplication by `x^n`.
    pub fn shift(&self, n: usize) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![self.ctx.zero(); n];
        c.extend(self.c.iter().cloned());
        UniPoly::new(self.ctx.clone(), c)
    }

    /// Keeps the terms of degree below `n`.
    pub fn truncate(&self, n: usize) -> UniPoly {
        let c = self.c.iter().take(n).cloned().collect();
        UniPoly::new(self.ctx.clone(), c)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let ctx = &self.ctx;
        if self.c.len() <= dd {
            return (UniPoly::zero(ctx), self.clone());
        }
        let lead_inv = ctx.inv(d.lead().unwrap()).unwrap();
        let monic_divisor = ctx.is_one(d.lead().unwrap());
        let mut r = self.c.clone();
        let mut q = vec![ctx.zero(); r.len() - dd];
        for pos in (dd..r.len()).rev() {
            if ctx.is_zero(&r[pos]) {
                continue;
            }
            let f = if monic_divisor {
                r[pos].clone()
            } else {
                ctx.mul(&r[pos], &lead_inv)
            };
            for (i, di) in d.c.iter().enumerate() {
                if ctx.is_zero(di) {
                    continue;
                }
                let t = ctx.mul(&f, di);
                ctx.sub_assign(&mut r[pos - dd + i], &t);
            }
            q[pos - dd] = f;
        }
        r.truncate(dd);
        (UniPoly::new(ctx.clone(), q), UniPoly::new(ctx.clone(), r))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.divrem(d).1
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn xgcd(&self, o: &UniPoly) -> (UniPoly, UniPoly, UniPoly) {
        let ctx = &self.ctx;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (UniPoly::one(ctx), UniPoly::zero(ctx));
        let (mut t0, mut t1) = (UniPoly::zero(ctx), UniPoly::one(ctx));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        match r0.lead() {
            None => (r0, s0, t0),
            Some(l) => {
                let inv = ctx.inv(l).unwrap();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    pub fn derivative(&self) -> UniPoly {
        let ctx = &self.ctx;
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| ctx.scale(a, (i as u64 % ctx.p() as u64) as u32))
            .collect();
        UniPoly::new(ctx.clone(), c)
    }

    pub fn eval(&self, x: &Elem) -> Elem {
        let ctx = &self.ctx;
        let mut acc = ctx.zero();
        for c in self.c.iter().rev() {
            acc = ctx.mul(&acc, x);
            ctx.add_assign(&mut acc, c);
        }
        acc
    }

    pub fn mulmod(&self, o: &UniPoly, m: &UniPoly) -> UniPoly {
        self.mul(o).rem(m)
    }

    pub fn powmod(&self, e: &BigUint, m: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::one(&self.ctx).rem(m);
        let base = self.rem(m);
        for bit in (0..e.bits()).rev() {
            acc = acc.mulmod(&acc, m);
            if e.bit(bit) {
                acc = acc.mulmod(&base, m);
            }
        }
        acc
    }

    pub fn powmod_u64(&self, e: u64, m: &UniPoly) -> UniPoly {
        self.powmod(&BigUint::from(e), m)
    }

    /// `self^q mod m` with `q` the field order, as `k` successive `p`-th powers.
    pub fn pow_q_mod(&self, m: &UniPoly) -> UniPoly {
        let p = self.ctx.p() as u64;
        let mut cur = self.rem(m);
        for _ in 0..self.ctx.degree() {
            cur = cur.powmod_u64(p, m);
        }
        cur
    }

    /// Applies `c -> c^(p^n)` to every coefficient.
    pub fn map_frobenius(&self, n: usize) -> UniPoly {
        let c = self.c.iter().map(|a| self.ctx.frobenius_n(a, n)).collect();
        UniPoly::new(self.ctx.clone(), c)
    }

    /// Composition `self(other)`.
    pub fn compose(&self, other: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero(&self.ctx);
        for c in self.c.iter().rev() {
            acc = acc.mul(other).add(&UniPoly::constant(&self.ctx, c.clone()));
        }
        acc
    }

    /// Taylor shift `self(x + a)`.
    pub fn shift_arg(&self, a: &Elem) -> UniPoly {
        let ctx = &self.ctx;
        let mut c = self.c.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = ctx.mul(&c[j + 1], a);
                ctx.add_assign(&mut c[j], &t);
            }
        }
        UniPoly::new(ctx.clone(), c)
    }

    pub fn sort_key(&self) -> (usize, Vec<u64>) {
        let deg = self.c.len();
        let key = self
            .c
            .iter()
            .rev()
            .map(|e| self.ctx.index_of(e).unwrap_or(u64::MAX))
            .collect();
        (deg, key)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::build_field;

    #[test]
    fn divrem_and_gcd() {
        let f5 = build_field(5, 1).unwrap();
        let a = UniPoly::from_u64s(&f5, &[4, 0, 1]); // x^2 - 1
        let b = UniPoly::from_u64s(&f5, &[1, 1]); // x + 1
        let (q, r) = a.divrem(&b);
        assert!(r.is_zero());
        assert_eq!(q, UniPoly::from_u64s(&f5, &[4, 1]));
        assert_eq!(a.gcd(&b), b);
        let (g, s, t) = a.xgcd(&UniPoly::from_u64s(&f5, &[2, 1]));
        assert!(g.is_one());
        assert!(s.mul(&a).add(&t.mul(&UniPoly::from_u64s(&f5, &[2, 1]))).is_one());
    }

    #[test]
    fn shift_matches_composition() {
        let f = build_field(7, 2).unwrap();
        let poly = UniPoly::new(
            f.clone(),
            (1..6).map(|i| f.elem_from_index(i * 5 + 3)).collect(),
        );
        let a = f.elem_from_index(17);
        let lin = UniPoly::new(f.clone(), vec![a.clone(), f.one()]);
        assert_eq!(poly.shift_arg(&a), poly.compose(&lin));
    }

    #[test]
    fn frobenius_power_matches_plain_power() {
        let f9 = build_field(3, 2).unwrap();
        let m = UniPoly::new(
            f9.clone(),
            vec![f9.elem_from_index(5), f9.elem_from_index(2), f9.zero(), f9.one()],
        );
        let x = UniPoly::x(&f9);
        assert_eq!(x.pow_q_mod(&m), x.powmod_u64(9, &m));
    }
}
