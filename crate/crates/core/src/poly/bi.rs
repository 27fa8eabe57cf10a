use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::gf::{Elem, FieldCtx};

use super::uni::UniPoly;
use super::PolyError;

/// Sparse bivariate polynomial in `x, y`, keyed by `(deg_x, deg_y)`.
/// Zero coefficients are never stored.
#[derive(Clone)]
pub struct BiPoly {
    ctx: Arc<FieldCtx>,
    terms: BTreeMap<(u32, u32), Elem>,
}

impl PartialEq for BiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for BiPoly {}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Monomials by total degree, then `x`-degree, both descending.
/// Coefficients are least residues (or `[c0,c1,..]` over extensions);
/// a coefficient of 1 is omitted unless the monomial is constant.
impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by(|a, b| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
        for (n, key) in keys.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            let c = &self.terms[key];
            let mut parts = Vec::new();
            if !self.ctx.is_one(c) || *key == (0, 0) {
                parts.push(self.ctx.fmt_elem(c));
            }
            for (var, e) in [("x", key.0), ("y", key.1)] {
                match e {
                    0 => {}
                    1 => parts.push(var.to_string()),
                    _ => parts.push(format!("{var}^{e}")),
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

impl BiPoly {
    pub fn zero(ctx: &Arc<FieldCtx>) -> BiPoly {
        BiPoly { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn from_terms<I>(ctx: &Arc<FieldCtx>, terms: I) -> BiPoly
    where
        I: IntoIterator<Item = ((u32, u32), Elem)>,
    {
        let mut out = BiPoly::zero(ctx);
        for (k, c) in terms {
            out.add_term(k, &c);
        }
        out
    }

    /// From prime-field residues, e.g. `&[((1, 0), 1), ((0, 1), 4)]`.
    pub fn from_u64_terms(ctx: &Arc<FieldCtx>, terms: &[((u32, u32), u64)]) -> BiPoly {
        BiPoly::from_terms(ctx, terms.iter().map(|&(k, c)| (k, ctx.from_u64(c))))
    }

    pub fn constant(ctx: &Arc<FieldCtx>, c: Elem) -> BiPoly {
        BiPoly::from_terms(ctx, [((0, 0), c)])
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), Elem> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: u32, b: u32) -> Elem {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn add_term(&mut self, key: (u32, u32), c: &Elem) {
        if self.ctx.is_zero(c) {
            return;
        }
        let ctx = self.ctx.clone();
        match self.terms.get_mut(&key) {
            Some(slot) => {
                ctx.add_assign(slot, c);
                if ctx.is_zero(slot) {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c.clone());
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(a, b)| a + b).max()
    }

    pub fn deg_x(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn deg_y(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).max()
    }

    pub fn add(&self, o: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(*k, c);
        }
        out
    }

    pub fn neg(&self) -> BiPoly {
        BiPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(k, c)| (*k, self.ctx.neg(c))).collect(),
        }
    }

    pub fn sub(&self, o: &BiPoly) -> BiPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Elem) -> BiPoly {
        BiPoly::from_terms(&self.ctx, self.terms.iter().map(|(k, c)| (*k, self.ctx.mul(c, s))))
    }

    pub fn mul(&self, o: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero(&self.ctx);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &o.terms {
                out.add_term((ka.0 + kb.0, ka.1 + kb.1), &self.ctx.mul(ca, cb));
            }
        }
        out
    }

    pub fn eval(&self, x: &Elem, y: &Elem) -> Elem {
        let ctx = &self.ctx;
        let dx = self.deg_x().unwrap_or(0) as usize;
        let dy = self.deg_y().unwrap_or(0) as usize;
        let xp = powers(ctx, x, dx);
        let yp = powers(ctx, y, dy);
        let mut acc = ctx.zero();
        for ((a, b), c) in &self.terms {
            let m = ctx.mul(&xp[*a as usize], &yp[*b as usize]);
            ctx.add_assign(&mut acc, &ctx.mul(c, &m));
        }
        acc
    }

    /// Re-expresses the coefficients in `target`, which must be the same
    /// field or an extension of a prime-field source.
    pub fn recode(&self, target: &Arc<FieldCtx>) -> Result<BiPoly, PolyError> {
        if Arc::ptr_eq(&self.ctx, target)
            || (self.ctx.p() == target.p() && self.ctx.modulus() == target.modulus())
        {
            return Ok(BiPoly { ctx: target.clone(), terms: self.terms.clone() });
        }
        if !self.ctx.is_prime_field() || self.ctx.p() != target.p() {
            return Err(PolyError::Incompatible(
                self.ctx.to_string(),
                target.to_string(),
            ));
        }
        Ok(BiPoly {
            ctx: target.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, target.from_u64(c[0] as u64)))
                .collect(),
        })
    }

    /// Applies `c -> c^(p^n)` to every coefficient.
    pub fn map_frobenius(&self, n: usize) -> BiPoly {
        BiPoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, self.ctx.frobenius_n(c, n)))
                .collect(),
        }
    }

    /// Dense view as `sum_j c_j(x) y^j`.
    pub fn to_y_major(&self) -> Vec<UniPoly> {
        let dy = match self.deg_y() {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let dx = self.deg_x().unwrap_or(0) as usize;
        let mut cols = vec![vec![self.ctx.zero(); dx + 1]; dy + 1];
        for ((a, b), c) in &self.terms {
            cols[*b as usize][*a as usize] = c.clone();
        }
        cols.into_iter().map(|c| UniPoly::new(self.ctx.clone(), c)).collect()
    }

    pub fn from_y_major(ctx: &Arc<FieldCtx>, cols: &[UniPoly]) -> BiPoly {
        let mut out = BiPoly::zero(ctx);
        for (b, col) in cols.iter().enumerate() {
            for (a, c) in col.coeffs().iter().enumerate() {
                out.add_term((a as u32, b as u32), c);
            }
        }
        out
    }

    /// Swaps the roles of `x` and `y`.
    pub fn swap_xy(&self) -> BiPoly {
        BiPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|((a, b), c)| ((*b, *a), c.clone())).collect(),
        }
    }

    /// Substitutes `x = a` and returns a polynomial in `y`.
    pub fn specialize_x(&self, a: &Elem) -> UniPoly {
        let ctx = &self.ctx;
        let xp = powers(ctx, a, self.deg_x().unwrap_or(0) as usize);
        let mut c = vec![ctx.zero(); self.deg_y().map_or(0, |d| d as usize + 1)];
        for ((i, j), v) in &self.terms {
            ctx.add_assign(&mut c[*j as usize], &ctx.mul(v, &xp[*i as usize]));
        }
        UniPoly::new(ctx.clone(), c)
    }

    /// Substitutes `x -> x + s*y` (a linear change of coordinates).
    pub fn shear(&self, s: &Elem) -> BiPoly {
        let ctx = &self.ctx;
        let mut out = BiPoly::zero(ctx);
        let sp = powers(ctx, s, self.deg_x().unwrap_or(0) as usize);
        for ((a, b), c) in &self.terms {
            for k in 0..=*a {
                let bin = super::binom_mod(*a as u64, k as u64, ctx.p());
                if bin == 0 {
                    continue;
                }
                let v = ctx.scale(&ctx.mul(c, &sp[(a - k) as usize]), bin);
                out.add_term((k, b + a - k), &v);
            }
        }
        out
    }

    /// The affine chart `y = 1` of the projective closure, with the old
    /// `y` slot now holding the line-at-infinity coordinate `z`.
    pub fn infinity_chart(&self) -> BiPoly {
        let d = self.total_degree().unwrap_or(0);
        BiPoly::from_terms(
            &self.ctx,
            self.terms.iter().map(|((a, b), c)| ((*a, d - a - b), c.clone())),
        )
    }

    /// Degree-`d` homogeneous part of `self`.
    pub fn homogeneous_part(&self, d: u32) -> BiPoly {
        BiPoly::from_terms(
            &self.ctx,
            self.terms
                .iter()
                .filter(|((a, b), _)| a + b == d)
                .map(|(k, c)| (*k, c.clone())),
        )
    }

    /// Exact quotient by `x - y`.
    pub fn div_x_minus_y(&self) -> Result<BiPoly, PolyError> {
        let ctx = &self.ctx;
        let dx = match self.deg_x() {
            Some(d) => d as usize,
            None => return Ok(self.clone()),
        };
        // Columns F_a(y) of f = sum_a F_a(y) x^a.
        let mut cols: Vec<BTreeMap<u32, Elem>> = vec![BTreeMap::new(); dx + 1];
        for ((a, b), c) in &self.terms {
            cols[*a as usize].insert(*b, c.clone());
        }
        let mut out = BiPoly::zero(ctx);
        // q_{a-1} = F_a + y*q_a, remainder F_0 + y*q_0.
        let mut q: BTreeMap<u32, Elem> = BTreeMap::new();
        for a in (1..=dx).rev() {
            let mut next: BTreeMap<u32, Elem> = q.into_iter().map(|(b, c)| (b + 1, c)).collect();
            for (b, c) in &cols[a] {
                let slot = next.entry(*b).or_insert_with(|| ctx.zero());
                ctx.add_assign(slot, c);
            }
            next.retain(|_, c| !ctx.is_zero(c));
            for (b, c) in &next {
                out.terms.insert(((a - 1) as u32, *b), c.clone());
            }
            q = next;
        }
        let mut rem: BTreeMap<u32, Elem> = q.into_iter().map(|(b, c)| (b + 1, c)).collect();
        for (b, c) in &cols[0] {
            let slot = rem.entry(*b).or_insert_with(|| ctx.zero());
            ctx.add_assign(slot, c);
        }
        if rem.values().any(|c| !ctx.is_zero(c)) {
            return Err(PolyError::NonzeroRemainder);
        }
        Ok(out)
    }

    /// Whether `x + y + 1` divides `self`, via the substitution `y = -x - 1`.
    pub fn divisible_by_x_plus_y_plus_1(&self) -> bool {
        let ctx = &self.ctx;
        let p = ctx.p();
        let d = self.total_degree().unwrap_or(0) as usize;
        let mut acc = vec![ctx.zero(); d + 1];
        for ((a, b), c) in &self.terms {
            // c * x^a * (-1)^b * (x+1)^b
            let signed = if b % 2 == 1 { ctx.neg(c) } else { c.clone() };
            for k in 0..=*b {
                let bin = super::binom_mod(*b as u64, k as u64, p);
                if bin != 0 {
                    let v = ctx.scale(&signed, bin);
                    ctx.add_assign(&mut acc[(*a + k) as usize], &v);
                }
            }
        }
        acc.iter().all(|c| ctx.is_zero(c))
    }

    /// Degree-`m` homogeneous component of `self(x + alpha, y + beta)`,
    /// computed term-by-term with Hasse derivatives.
    pub fn shifted_component(&self, alpha: &Elem, beta: &Elem, m: u32) -> BiPoly {
        let ctx = &self.ctx;
        let p = ctx.p();
        let ap = powers(ctx, alpha, self.deg_x().unwrap_or(0) as usize);
        let bp = powers(ctx, beta, self.deg_y().unwrap_or(0) as usize);
        let mut out = BiPoly::zero(ctx);
        for a in 0..=m {
            let b = m - a;
            let mut acc = ctx.zero();
            for ((i, j), c) in self.terms.range((a, b)..) {
                if *j < b {
                    continue;
                }
                let bin = (super::binom_mod(*i as u64, a as u64, p) as u64
                    * super::binom_mod(*j as u64, b as u64, p) as u64
                    % p as u64) as u32;
                if bin == 0 {
                    continue;
                }
                let m = ctx.mul(&ap[(i - a) as usize], &bp[(j - b) as usize]);
                ctx.add_assign(&mut acc, &ctx.scale(&ctx.mul(c, &m), bin));
            }
            out.add_term((a, b), &acc);
        }
        out
    }

    /// Multiplicity at `(alpha, beta)` and the tangent cone there.
    pub fn tangent_cone(&self, alpha: &Elem, beta: &Elem) -> Result<TangentCone, PolyError> {
        let top = self.total_degree().ok_or(PolyError::ZeroPolynomial)?;
        for m in 0..=top {
            let h = self.shifted_component(alpha, beta, m);
            if !h.is_zero() {
                let distinct_lines = binary_form_squarefree(&h, m);
                return Ok(TangentCone { multiplicity: m, cone: h, distinct_lines });
            }
        }
        unreachable!("a nonzero polynomial has a nonzero shifted component")
    }
}

/// Result of [`BiPoly::tangent_cone`].
#[derive(Debug, Clone)]
pub struct TangentCone {
    pub multiplicity: u32,
    pub cone: BiPoly,
    /// The cone splits into `multiplicity` pairwise distinct lines over the
    /// algebraic closure.
    pub distinct_lines: bool,
}

/// A binary form of degree `m` is a product of distinct lines iff `y`
/// divides it at most once and its dehomogenization is squarefree.
fn binary_form_squarefree(h: &BiPoly, m: u32) -> bool {
    let ctx = h.ctx();
    let mut c = vec![ctx.zero(); m as usize + 1];
    for ((a, _), v) in h.terms() {
        c[*a as usize] = v.clone();
    }
    let u = UniPoly::new(ctx.clone(), c);
    let deficiency = m as usize - u.degree().unwrap_or(0);
    if deficiency > 1 {
        return false;
    }
    if u.degree().unwrap_or(0) == 0 {
        return true;
    }
    u.gcd(&u.derivative()).degree() == Some(0)
}

pub(crate) fn powers(ctx: &FieldCtx, a: &Elem, n: usize) -> Vec<Elem> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(ctx.one());
    for i in 0..n {
        let next = ctx.mul(&out[i], a);
        out.push(next);
    }
    out
}
