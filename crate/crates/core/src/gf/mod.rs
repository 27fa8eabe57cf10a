//! Finite fields `F_{p^k}` as `F_p[x] / (m(x))`.
//!
//! A [`FieldCtx`] owns the modulus; raw elements ([`Elem`]) are fixed-length
//! coefficient vectors that only make sense next to their context. The
//! checked wrapper [`Fel`] carries its context along and refuses to mix
//! fields.

pub mod fp;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use smallvec::SmallVec;
use thiserror::Error;

use crate::arith;
use fp::SparseModulus;

/// Default ceiling on the extension degree accepted by [`build_field`].
pub const DEFAULT_FIELD_DEGREE_CAP: usize = 1200;

/// Coefficient vector of an element, little-endian, always of length `k`.
pub type Elem = SmallVec<[u32; 8]>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not an odd prime below 2^31")]
    BadCharacteristic(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("extension degree {k} exceeds cap {cap}")]
    DegreeCap { k: usize, cap: usize },
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("operands belong to different fields ({0} vs {1})")]
    MixedContext(String, String),
    #[error("subfield degree {m} does not divide extension degree {k}")]
    NotASubfield { m: usize, k: usize },
    #[error("{n} does not divide the multiplicative group order of F_{p}^{k}")]
    NoRootsOfUnity { p: u32, k: usize, n: u64 },
    #[error(transparent)]
    Arith(#[from] arith::ArithError),
}

/// The field `F_{p^k}` with a fixed monic irreducible modulus.
pub struct FieldCtx {
    p: u32,
    k: usize,
    modulus: Vec<u32>,
    reducer: SparseModulus,
    frob_table: OnceLock<Vec<Elem>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p, self.k, self.modulus)
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{}", self.p, self.k)
        }
    }
}

fn registry() -> &'static Mutex<HashMap<(u32, usize), Arc<FieldCtx>>> {
    static REGISTRY: OnceLock<Mutex<HashMap<(u32, usize), Arc<FieldCtx>>>> = OnceLock::new();
    REGISTRY.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `F_{p^k}` from the process-wide registry, building it on first use.
pub fn build_field(p: u64, k: usize) -> Result<Arc<FieldCtx>, GfError> {
    build_field_capped(p, k, DEFAULT_FIELD_DEGREE_CAP)
}

pub fn build_field_capped(p: u64, k: usize, cap: usize) -> Result<Arc<FieldCtx>, GfError> {
    if !(3..1 << 31).contains(&p) || !arith::is_prime(p) {
        return Err(GfError::BadCharacteristic(p));
    }
    if k == 0 {
        return Err(GfError::ZeroDegree);
    }
    if k > cap {
        return Err(GfError::DegreeCap { k, cap });
    }
    let p32 = p as u32;
    if let Some(ctx) = registry().lock().unwrap().get(&(p32, k)) {
        return Ok(ctx.clone());
    }
    // Built outside the lock: large degrees take a while and other
    // fields should stay available meanwhile.
    let ctx = Arc::new(FieldCtx::with_modulus(p32, smallest_irreducible(p32, k)));
    let mut reg = registry().lock().unwrap();
    Ok(reg.entry((p32, k)).or_insert(ctx).clone())
}

/// Smallest monic irreducible polynomial of degree `k` over `F_p`, ordering
/// candidates by the integer `sum c_e p^e` of their lower coefficients.
pub fn smallest_irreducible(p: u32, k: usize) -> Vec<u32> {
    let mut tail = vec![0u32; k];
    if k == 1 {
        return vec![0, 1];
    }
    loop {
        // advance the base-p counter
        for c in tail.iter_mut() {
            *c += 1;
            if *c < p {
                break;
            }
            *c = 0;
        }
        if tail[0] == 0 {
            continue;
        }
        let mut f = tail.clone();
        f.push(1);
        if fp::is_irreducible_monic(&f, p) {
            return f;
        }
    }
}

impl FieldCtx {
    /// Builds a context from an explicit monic irreducible modulus. The
    /// irreducibility is re-checked.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> FieldCtx {
        let k = modulus.len() - 1;
        assert!(k >= 1);
        assert!(
            k == 1 || fp::is_irreducible_monic(&modulus, p),
            "modulus {modulus:?} is reducible over F_{p}"
        );
        let reducer = SparseModulus::new(&modulus, p);
        FieldCtx {
            p,
            k,
            modulus,
            reducer,
            frob_table: OnceLock::new(),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    /// `p^k` as a big integer.
    pub fn order(&self) -> BigUint {
        BigUint::from(self.p).pow(self.k as u32)
    }

    /// `p^k` when it fits a `u64`.
    pub fn order_u64(&self) -> Option<u64> {
        (self.p as u64).checked_pow(self.k as u32)
    }

    pub fn zero(&self) -> Elem {
        SmallVec::from_elem(0, self.k)
    }

    pub fn one(&self) -> Elem {
        self.from_u64(1)
    }

    pub fn from_u64(&self, c: u64) -> Elem {
        let mut e = self.zero();
        e[0] = (c % self.p as u64) as u32;
        e
    }

    pub fn from_i64(&self, c: i64) -> Elem {
        let mut e = self.zero();
        e[0] = c.rem_euclid(self.p as i64) as u32;
        e
    }

    /// The class of `x`, i.e. the generator of the power basis.
    pub fn gen(&self) -> Elem {
        if self.k == 1 {
            // x = -m_0 in the degree-one quotient
            return self.from_u64(((self.p - self.modulus[0]) % self.p) as u64);
        }
        let mut e = self.zero();
        e[1] = 1;
        e
    }

    /// Reduces an arbitrary coefficient list into an element.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Elem {
        let reduced: Vec<u32> = coeffs.iter().map(|&c| c % self.p).collect();
        let r = if reduced.len() > self.k {
            fp::rem(&reduced, &self.modulus, self.p)
        } else {
            reduced
        };
        let mut e = self.zero();
        e[..r.len()].copy_from_slice(&r);
        e
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        a[0] == 1 && a[1..].iter().all(|&c| c == 0)
    }

    /// Returns the prime-field value when `a` lies in `F_p`.
    pub fn as_prime(&self, a: &Elem) -> Option<u32> {
        a[1..].iter().all(|&c| c == 0).then_some(a[0])
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(&x, &y)| fp::add_mod(x, y, self.p)).collect()
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(&x, &y)| fp::sub_mod(x, y, self.p)).collect()
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        a.iter().map(|&x| if x == 0 { 0 } else { self.p - x }).collect()
    }

    pub fn add_assign(&self, a: &mut Elem, b: &Elem) {
        for (x, &y) in a.iter_mut().zip(b) {
            *x = fp::add_mod(*x, y, self.p);
        }
    }

    pub fn sub_assign(&self, a: &mut Elem, b: &Elem) {
        for (x, &y) in a.iter_mut().zip(b) {
            *x = fp::sub_mod(*x, y, self.p);
        }
    }

    /// Multiplication by a prime-field scalar.
    pub fn scale(&self, a: &Elem, c: u32) -> Elem {
        a.iter().map(|&x| fp::mul_mod(x, c, self.p)).collect()
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        if self.k == 1 {
            let mut e = self.zero();
            e[0] = fp::mul_mod(a[0], b[0], self.p);
            return e;
        }
        let mut acc: SmallVec<[u64; 16]> = SmallVec::from_elem(0, 2 * self.k - 1);
        fp::mul_into(&mut acc, a, b, self.p);
        self.reducer.reduce_in_place(&mut acc);
        acc[..self.k].iter().map(|&c| c as u32).collect()
    }

    pub fn square(&self, a: &Elem) -> Elem {
        self.mul(a, a)
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem, GfError> {
        if self.is_zero(a) {
            return Err(GfError::ZeroInverse);
        }
        if self.k == 1 {
            return Ok(self.from_u64(fp::inv_mod(a[0], self.p) as u64));
        }
        let inv = fp::inv_modulo(a, &self.modulus, self.p)
            .expect("nonzero element is invertible modulo an irreducible");
        Ok(self.from_coeffs(&inv))
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem, GfError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow_u64(&self, a: &Elem, mut e: u64) -> Elem {
        if self.k == 1 {
            return self.from_u64(fp::pow_mod(a[0], e, self.p) as u64);
        }
        let mut acc = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.square(&b);
            }
        }
        acc
    }

    pub fn pow(&self, a: &Elem, e: &BigUint) -> Elem {
        if let Some(small) = e.to_u64() {
            return self.pow_u64(a, small);
        }
        let mut acc = self.one();
        for bit in (0..e.bits()).rev() {
            acc = self.square(&acc);
            if e.bit(bit) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    fn frob_table(&self) -> &[Elem] {
        self.frob_table.get_or_init(|| {
            let xp = self.pow_u64(&self.gen(), self.p as u64);
            let mut table = Vec::with_capacity(self.k);
            let mut cur = self.one();
            for _ in 0..self.k {
                table.push(cur.clone());
                cur = self.mul(&cur, &xp);
            }
            table
        })
    }

    /// `a^p`, computed as the linear map `sum a_e x^e -> sum a_e (x^p)^e`.
    pub fn frobenius(&self, a: &Elem) -> Elem {
        if self.k == 1 {
            return a.clone();
        }
        let table = self.frob_table();
        let mut acc = vec![0u64; self.k];
        let p = self.p as u64;
        for (&c, row) in a.iter().zip(table) {
            if c == 0 {
                continue;
            }
            for (slot, &r) in acc.iter_mut().zip(row.iter()) {
                *slot = (*slot + c as u64 * r as u64) % p;
            }
        }
        acc.into_iter().map(|c| c as u32).collect()
    }

    /// `a^(p^n)`.
    pub fn frobenius_n(&self, a: &Elem, n: usize) -> Elem {
        let n = n % self.k;
        let mut cur = a.clone();
        for _ in 0..n {
            cur = self.frobenius(&cur);
        }
        cur
    }

    /// Whether `a` lies in the subfield `F_{p^m}`; `m` must divide `k`.
    pub fn in_subfield(&self, a: &Elem, m: usize) -> Result<bool, GfError> {
        if m == 0 || !self.k.is_multiple_of(m) {
            return Err(GfError::NotASubfield { m, k: self.k });
        }
        let mut cur = a.clone();
        for _ in 0..m {
            cur = self.frobenius(&cur);
        }
        Ok(&cur == a)
    }

    /// Element whose coefficient vector is the base-`p` expansion of `idx`.
    pub fn elem_from_index(&self, mut idx: u64) -> Elem {
        let mut e = self.zero();
        for c in e.iter_mut() {
            *c = (idx % self.p as u64) as u32;
            idx /= self.p as u64;
        }
        e
    }

    /// Inverse of [`FieldCtx::elem_from_index`]; `None` if it overflows.
    pub fn index_of(&self, a: &Elem) -> Option<u64> {
        let mut idx = 0u64;
        for &c in a.iter().rev() {
            idx = idx.checked_mul(self.p as u64)?.checked_add(c as u64)?;
        }
        Some(idx)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        (0..self.k).map(|_| rng.gen_range(0..self.p)).collect()
    }

    /// Canonical byte encoding: little-endian coefficients, four bytes each.
    pub fn encode(&self, a: &Elem) -> Vec<u8> {
        a.iter().flat_map(|c| c.to_le_bytes()).collect()
    }

    /// JSON-facing rendering: the decimal coefficient list, little-endian.
    pub fn to_json(&self, a: &Elem) -> serde_json::Value {
        serde_json::Value::Array(a.iter().map(|&c| serde_json::Value::from(c)).collect())
    }

    /// Short text form: a plain residue for prime-field values, the
    /// coefficient list otherwise.
    pub fn fmt_elem(&self, a: &Elem) -> String {
        match self.as_prime(a) {
            Some(c) => c.to_string(),
            None => {
                let parts: Vec<String> = a.iter().map(|c| c.to_string()).collect();
                format!("[{}]", parts.join(","))
            }
        }
    }

    /// Multiplicative order check: `g^n == 1` and `g^(n/q) != 1` for each
    /// prime `q | n`.
    pub fn has_order(&self, g: &Elem, n: u64) -> bool {
        if !self.is_one(&self.pow_u64(g, n)) {
            return false;
        }
        arith::factorize(n)
            .into_iter()
            .all(|(q, _)| !self.is_one(&self.pow_u64(g, n / q)))
    }

    /// An element of exact order `n` together with all `n`-th roots of
    /// unity `g^0, ..., g^(n-1)`. Requires `n | p^k - 1`.
    pub fn roots_of_unity(&self, n: u64) -> Result<(Elem, Vec<Elem>), GfError> {
        let group = self.order() - BigUint::one();
        let nb = BigUint::from(n);
        if n == 0 || !(&group % &nb).is_zero() {
            return Err(GfError::NoRootsOfUnity { p: self.p, k: self.k, n });
        }
        let cofactor = &group / &nb;
        let mut idx = 1u64;
        let g = loop {
            let c = self.elem_from_index(idx);
            idx += 1;
            let g = self.pow(&c, &cofactor);
            if self.has_order(&g, n) {
                break g;
            }
        };
        let mut all = Vec::with_capacity(n as usize);
        let mut cur = self.one();
        for _ in 0..n {
            all.push(cur.clone());
            cur = self.mul(&cur, &g);
        }
        Ok((g, all))
    }
}

/// `mu(n)` inside the smallest field containing it.
#[derive(Debug, Clone)]
pub struct RootsOfUnity {
    pub ctx: Arc<FieldCtx>,
    pub n: u64,
    pub generator: Elem,
    pub elements: Vec<Elem>,
}

/// Builds `F_{p^e}` with `e = ord_n(p)` and lists `mu(n)` there.
pub fn roots_of_unity(p: u64, n: u64, ext_cap: usize) -> Result<RootsOfUnity, GfError> {
    let e = arith::mult_order(p, n)? as usize;
    let ctx = build_field_capped(p, e, ext_cap)?;
    let (generator, elements) = ctx.roots_of_unity(n)?;
    Ok(RootsOfUnity {
        ctx,
        n,
        generator,
        elements,
    })
}

/// A field element that knows its field.
#[derive(Clone)]
pub struct Fel {
    ctx: Arc<FieldCtx>,
    v: Elem,
}

impl fmt::Debug for Fel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.ctx.fmt_elem(&self.v), self.ctx)
    }
}

impl PartialEq for Fel {
    fn eq(&self, other: &Self) -> bool {
        same_field(&self.ctx, &other.ctx) && self.v == other.v
    }
}

impl Eq for Fel {}

fn same_field(a: &Arc<FieldCtx>, b: &Arc<FieldCtx>) -> bool {
    Arc::ptr_eq(a, b) || (a.p == b.p && a.modulus == b.modulus)
}

impl Fel {
    pub fn new(ctx: Arc<FieldCtx>, v: Elem) -> Fel {
        assert_eq!(v.len(), ctx.k, "element length does not match the field");
        Fel { ctx, v }
    }

    pub fn from_u64(ctx: &Arc<FieldCtx>, c: u64) -> Fel {
        Fel::new(ctx.clone(), ctx.from_u64(c))
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn value(&self) -> &Elem {
        &self.v
    }

    pub fn into_value(self) -> Elem {
        self.v
    }

    pub fn is_zero(&self) -> bool {
        self.ctx.is_zero(&self.v)
    }

    fn check(&self, other: &Fel) -> Result<(), GfError> {
        if same_field(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(GfError::MixedContext(
                self.ctx.to_string(),
                other.ctx.to_string(),
            ))
        }
    }

    pub fn try_add(&self, other: &Fel) -> Result<Fel, GfError> {
        self.check(other)?;
        Ok(Fel::new(self.ctx.clone(), self.ctx.add(&self.v, &other.v)))
    }

    pub fn try_sub(&self, other: &Fel) -> Result<Fel, GfError> {
        self.check(other)?;
        Ok(Fel::new(self.ctx.clone(), self.ctx.sub(&self.v, &other.v)))
    }

    pub fn try_mul(&self, other: &Fel) -> Result<Fel, GfError> {
        self.check(other)?;
        Ok(Fel::new(self.ctx.clone(), self.ctx.mul(&self.v, &other.v)))
    }

    pub fn inv(&self) -> Result<Fel, GfError> {
        Ok(Fel::new(self.ctx.clone(), self.ctx.inv(&self.v)?))
    }

    pub fn pow(&self, e: u64) -> Fel {
        Fel::new(self.ctx.clone(), self.ctx.pow_u64(&self.v, e))
    }

    pub fn pow_big(&self, e: &BigUint) -> Fel {
        Fel::new(self.ctx.clone(), self.ctx.pow(&self.v, e))
    }

    pub fn frobenius(&self) -> Fel {
        Fel::new(self.ctx.clone(), self.ctx.frobenius(&self.v))
    }

    pub fn in_subfield(&self, m: usize) -> Result<bool, GfError> {
        self.ctx.in_subfield(&self.v, m)
    }
}

macro_rules! fel_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait for &Fel {
            type Output = Fel;
            fn $method(self, rhs: &Fel) -> Fel {
                self.$checked(rhs).expect("mixed-field arithmetic")
            }
        }
        impl std::ops::$trait for Fel {
            type Output = Fel;
            fn $method(self, rhs: Fel) -> Fel {
                (&self).$checked(&rhs).expect("mixed-field arithmetic")
            }
        }
    };
}

fel_binop!(Add, add, try_add);
fel_binop!(Sub, sub, try_sub);
fel_binop!(Mul, mul, try_mul);

impl std::ops::Neg for &Fel {
    type Output = Fel;
    fn neg(self) -> Fel {
        Fel::new(self.ctx.clone(), self.ctx.neg(&self.v))
    }
}
