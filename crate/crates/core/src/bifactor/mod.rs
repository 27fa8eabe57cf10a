//! Factorization of bivariate polynomials over `F_{p^m}` and the
//! absolute-irreducibility decision for polynomials defined over `F_p`.
//!
//! The pipeline is the textbook one: make the polynomial monic in `y` by a
//! shear, pick a specialization `x = a` with a squarefree image, factor the
//! image, Hensel-lift, and recombine. When no good point exists in the
//! working field the search moves to a small extension and the factors found
//! there are glued back together along Frobenius orbits.

mod hensel;

use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arith::factorize;
use crate::gf::{build_field_capped, Elem, FieldCtx, GfError};
use crate::poly::factor::factor as uni_factor;
use crate::poly::{BiPoly, Embedding, PolyError, UniPoly};
use hensel::{div_monic_y, lift_all, recombine, subset_sums, Recombination, Series};

pub const DEFAULT_DEGREE_CAP: u32 = 120;
pub const DEFAULT_SUBSET_CAP: u64 = 1 << 20;

#[derive(Debug, Error)]
pub enum BifactorError {
    #[error("input must have coefficients in a prime field, got {0}")]
    NotOverPrimeField(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] GfError),
}

#[derive(Debug, Clone)]
pub struct BiFactorConfig {
    pub degree_cap: u32,
    pub subset_cap: u64,
    /// Largest extension degree the search may build.
    pub ext_cap: usize,
    pub seed: u64,
    /// Good specialization points examined before lifting.
    pub sample_points: usize,
    /// Use exactly this point (by element index) and nothing else.
    pub force_point: Option<u64>,
}

impl Default for BiFactorConfig {
    fn default() -> Self {
        BiFactorConfig {
            degree_cap: DEFAULT_DEGREE_CAP,
            subset_cap: DEFAULT_SUBSET_CAP,
            ext_cap: 300,
            seed: crate::poly::factor::DEFAULT_SEED,
            sample_points: 3,
            force_point: None,
        }
    }
}

#[derive(Debug, Clone)]
pub enum FactorStatus {
    Irreducible,
    /// Irreducible factors over the requested field, each normalized so its
    /// leading monomial (highest total degree, then highest `x`-degree) has
    /// coefficient 1. Empty for a constant input.
    Factors(Vec<BiPoly>),
    Skipped(String),
}

impl FactorStatus {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, FactorStatus::Irreducible)
    }

    pub fn is_skipped(&self) -> bool {
        matches!(self, FactorStatus::Skipped(_))
    }
}

impl Serialize for FactorStatus {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FactorStatus", 2)?;
        match self {
            FactorStatus::Irreducible => {
                st.serialize_field("kind", "irreducible")?;
                st.skip_field("detail")?;
            }
            FactorStatus::Factors(fs) => {
                st.serialize_field("kind", "factors")?;
                let texts: Vec<String> = fs.iter().map(|f| f.to_string()).collect();
                st.serialize_field("detail", &texts)?;
            }
            FactorStatus::Skipped(r) => {
                st.serialize_field("kind", "skipped")?;
                st.serialize_field("detail", r)?;
            }
        }
        st.end()
    }
}

/// How the answer was obtained.
#[derive(Debug, Clone, Default, Serialize)]
pub struct MethodNotes {
    /// Degree over `F_p` of the field the lifting ran in.
    pub working_degree: usize,
    pub shear: Option<String>,
    pub specialization: Option<String>,
    pub modular_factors: Option<usize>,
    pub subsets_tried: u64,
    /// Irreducibility already followed from the degree patterns at the
    /// sampled points.
    pub degree_pattern_proof: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BiFactorReport {
    pub p: u32,
    pub m: usize,
    pub input_degree: u32,
    pub input_terms: usize,
    pub status: FactorStatus,
    pub notes: MethodNotes,
}

enum Attempt {
    Factors(Vec<BiPoly>),
    Skipped(String),
    NoGoodPoint,
}

/// Leading coefficient under the report order is made 1.
pub fn normalize(h: &BiPoly) -> BiPoly {
    let ctx = h.ctx();
    let lead = h
        .terms()
        .iter()
        .max_by_key(|((a, b), _)| (a + b, *a))
        .map(|(_, c)| c.clone());
    match lead {
        Some(c) if !ctx.is_one(&c) => h.scale(&ctx.inv(&c).unwrap()),
        _ => h.clone(),
    }
}

fn sort_factors(fs: &mut [BiPoly]) {
    fs.sort_by_cached_key(|f| (f.total_degree(), f.to_string()));
}

/// Factors `f` (coefficients in `F_p`) over `F_{p^m}`.
pub fn factor_over(f: &BiPoly, m: usize, cfg: &BiFactorConfig) -> Result<BiFactorReport, BifactorError> {
    let src = f.ctx();
    if !src.is_prime_field() {
        return Err(BifactorError::NotOverPrimeField(src.to_string()));
    }
    let p = src.p();
    let deg = f.total_degree().unwrap_or(0);
    let mut report = BiFactorReport {
        p,
        m,
        input_degree: deg,
        input_terms: f.num_terms(),
        status: FactorStatus::Irreducible,
        notes: MethodNotes { working_degree: m, ..Default::default() },
    };
    if m > cfg.ext_cap {
        report.status = FactorStatus::Skipped(format!("extension degree {m} exceeds cap {}", cfg.ext_cap));
        return Ok(report);
    }
    if deg > cfg.degree_cap {
        report.status =
            FactorStatus::Skipped(format!("degree {deg} exceeds bifactor cap {}", cfg.degree_cap));
        return Ok(report);
    }
    let k_field = build_field_capped(p as u64, m, cfg.ext_cap)?;
    let mut attempt = factor_in_field(&f.recode(&k_field)?, cfg, &mut report.notes);
    let mut c = 2;
    while matches!(attempt, Attempt::NoGoodPoint) && m * c <= cfg.ext_cap && c <= 4 {
        let l_field = build_field_capped(p as u64, m * c, cfg.ext_cap)?;
        report.notes = MethodNotes { working_degree: m * c, ..Default::default() };
        attempt = match factor_in_field(&f.recode(&l_field)?, cfg, &mut report.notes) {
            Attempt::Factors(fs) => Attempt::Factors(descend(&fs, &k_field, &l_field)?),
            other => other,
        };
        c += 1;
    }
    report.status = match attempt {
        Attempt::Factors(fs) if fs.len() == 1 && deg > 0 => FactorStatus::Irreducible,
        Attempt::Factors(mut fs) => {
            sort_factors(&mut fs);
            FactorStatus::Factors(fs)
        }
        Attempt::Skipped(r) => FactorStatus::Skipped(r),
        Attempt::NoGoodPoint => FactorStatus::Skipped("no good specialization point".into()),
    };
    Ok(report)
}

/// Decides whether `f` stays irreducible over `F_{p^m}`.
pub fn irreducible_over(
    f: &BiPoly,
    m: usize,
    cfg: &BiFactorConfig,
) -> Result<BiFactorReport, BifactorError> {
    factor_over(f, m, cfg)
}

/// Glues factors over `big` into factors over its subfield `small` by taking
/// products over orbits of `c -> c^(|small|)`.
fn descend(
    fs: &[BiPoly],
    small: &Arc<FieldCtx>,
    big: &Arc<FieldCtx>,
) -> Result<Vec<BiPoly>, BifactorError> {
    let m = small.degree();
    let emb = Embedding::new(small, big)?;
    let mut used = vec![false; fs.len()];
    let mut out = Vec::new();
    for i in 0..fs.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut prod = fs[i].clone();
        let mut conj = fs[i].map_frobenius(m);
        while conj != fs[i] {
            let j = (0..fs.len())
                .find(|&j| !used[j] && fs[j] == conj)
                .expect("Frobenius permutes the normalized factors");
            used[j] = true;
            prod = prod.mul(&fs[j]);
            conj = conj.map_frobenius(m);
        }
        let terms = prod.terms().iter().map(|(k, c)| {
            let v = emb.backward(c).expect("orbit products are defined over the subfield");
            (*k, v)
        });
        out.push(normalize(&BiPoly::from_terms(small, terms.collect::<Vec<_>>())));
    }
    Ok(out)
}

fn factor_in_field(f: &BiPoly, cfg: &BiFactorConfig, notes: &mut MethodNotes) -> Attempt {
    let ctx = f.ctx().clone();
    let d = match f.total_degree() {
        None | Some(0) => return Attempt::Factors(Vec::new()),
        Some(d) => d as usize,
    };
    if d == 1 {
        return Attempt::Factors(vec![normalize(f)]);
    }
    let order = ctx.order_u64().unwrap_or(u64::MAX);

    // Shear so that y^d appears: needs top(s, 1) != 0.
    let top = f.homogeneous_part(d as u32);
    let one = ctx.one();
    let Some(s) = (0..order.min(d as u64 + 2))
        .map(|i| ctx.elem_from_index(i))
        .find(|s| !ctx.is_zero(&top.eval(s, &one)))
    else {
        return Attempt::NoGoodPoint;
    };
    let g = if ctx.is_zero(&s) { f.clone() } else { f.shear(&s) };
    if !ctx.is_zero(&s) {
        notes.shear = Some(ctx.fmt_elem(&s));
    }
    let lc = g.coeff(0, d as u32);
    let g = g.scale(&ctx.inv(&lc).unwrap());
    let cols = g.to_y_major();

    // Good specialization points.
    let candidates: Vec<u64> = match cfg.force_point {
        Some(i) => vec![i],
        None => (0..order.min(20 * d as u64 + 50)).collect(),
    };
    let mut good: Vec<(Elem, Vec<UniPoly>)> = Vec::new();
    for idx in candidates {
        let a = ctx.elem_from_index(idx);
        let img = UniPoly::new(ctx.clone(), cols.iter().map(|c| c.eval(&a)).collect());
        if img.gcd(&img.derivative()).degree() != Some(0) {
            continue;
        }
        let fac: Vec<UniPoly> = uni_factor(&img, cfg.seed).into_iter().map(|(u, _)| u).collect();
        good.push((a, fac));
        if good.len() >= cfg.sample_points.max(1) {
            break;
        }
    }
    if good.is_empty() {
        return Attempt::NoGoodPoint;
    }
    let mut allowed = vec![true; d + 1];
    for (_, fac) in &good {
        let degs: Vec<usize> = fac.iter().map(|u| u.degree().unwrap()).collect();
        for (slot, r) in allowed.iter_mut().zip(subset_sums(&degs, d)) {
            *slot &= r;
        }
    }
    let (a, fac) = good.iter().min_by_key(|(_, fac)| fac.len()).unwrap().clone();
    notes.specialization = Some(ctx.fmt_elem(&a));
    notes.modular_factors = Some(fac.len());
    if fac.len() == 1 || allowed[1..d].iter().all(|x| !x) {
        notes.degree_pattern_proof = fac.len() > 1;
        return Attempt::Factors(vec![normalize(f)]);
    }

    // Lift at x = 0 after moving a there.
    let shifted: Vec<UniPoly> = cols.iter().map(|c| c.shift_arg(&a)).collect();
    let prec = d + 1;
    let series: Series = (0..prec)
        .map(|k| UniPoly::new(ctx.clone(), shifted.iter().map(|c| c.coeff(k)).collect()))
        .collect();
    let lifted = lift_all(&series, &fac);
    let found = match recombine(&shifted, &lifted, &allowed, cfg.subset_cap) {
        Recombination::Done { factors, subsets } => {
            notes.subsets_tried = subsets;
            factors
        }
        Recombination::CapExceeded { subsets } => {
            notes.subsets_tried = subsets;
            return Attempt::Skipped(format!(
                "recombination cap {} exceeded with {} modular factors",
                cfg.subset_cap,
                fac.len()
            ));
        }
    };
    let neg_a = ctx.neg(&a);
    let neg_s = ctx.neg(&s);
    let factors: Vec<BiPoly> = found
        .iter()
        .map(|h| {
            let cols: Vec<UniPoly> = h.iter().map(|c| c.shift_arg(&neg_a)).collect();
            let h = BiPoly::from_y_major(&ctx, &cols);
            let h = if ctx.is_zero(&s) { h } else { h.shear(&neg_s) };
            normalize(&h)
        })
        .collect();
    debug_assert!(product_matches(f, &factors));
    Attempt::Factors(factors)
}

/// Whether the product of `factors` equals `f` up to a nonzero constant.
pub fn product_matches(f: &BiPoly, factors: &[BiPoly]) -> bool {
    let ctx = f.ctx();
    let Some(first) = factors.first() else {
        return f.total_degree().unwrap_or(0) == 0 && !f.is_zero();
    };
    let prod = factors[1..].iter().fold(first.clone(), |acc, h| acc.mul(h));
    normalize(&prod) == normalize(f) && prod.ctx().degree() == ctx.degree()
}

/// Outcome of [`has_abs_irred_factor_over_base`].
#[derive(Debug, Clone)]
pub enum AbsStatus {
    Yes { witness: BiPoly },
    No,
    Skipped(String),
}

impl AbsStatus {
    pub fn is_yes(&self) -> bool {
        matches!(self, AbsStatus::Yes { .. })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentCheck {
    pub factor: String,
    pub degree: u32,
    /// Prime extension degrees at which the component was tested.
    pub tested: Vec<u64>,
    pub absolutely_irreducible: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct AbsIrredReport {
    pub status: AbsStatus,
    pub base: BiFactorReport,
    pub components: Vec<ComponentCheck>,
}

impl Serialize for AbsIrredReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("AbsIrredReport", 4)?;
        match &self.status {
            AbsStatus::Yes { witness } => {
                st.serialize_field("result", &true)?;
                st.serialize_field("witness", &witness.to_string())?;
            }
            AbsStatus::No => {
                st.serialize_field("result", &false)?;
                st.skip_field("witness")?;
            }
            AbsStatus::Skipped(r) => {
                st.serialize_field("result", &serde_json::Value::Null)?;
                st.serialize_field("witness", &format!("skipped: {r}"))?;
            }
        }
        st.serialize_field("base", &self.base)?;
        st.serialize_field("components", &self.components)?;
        st.end()
    }
}

/// Whether `f` (over `F_p`) has an absolutely irreducible factor defined
/// over `F_p`. An `F_p`-irreducible component of degree `d` that splits over
/// the algebraic closure splits into conjugates over `F_{p^k}` with `k | d`,
/// hence already over `F_{p^r}` for some prime `r | k`; so testing the prime
/// divisors of `d` is enough.
pub fn has_abs_irred_factor_over_base(
    f: &BiPoly,
    cfg: &BiFactorConfig,
) -> Result<AbsIrredReport, BifactorError> {
    let base = factor_over(f, 1, cfg)?;
    let comps: Vec<BiPoly> = match &base.status {
        FactorStatus::Irreducible => vec![f.clone()],
        FactorStatus::Factors(fs) => fs.clone(),
        FactorStatus::Skipped(r) => {
            return Ok(AbsIrredReport {
                status: AbsStatus::Skipped(r.clone()),
                base,
                components: Vec::new(),
            })
        }
    };
    let mut components = Vec::new();
    let mut skipped: Option<String> = None;
    for h in comps {
        let d = h.total_degree().unwrap_or(0);
        let mut check = ComponentCheck {
            factor: h.to_string(),
            degree: d,
            tested: Vec::new(),
            absolutely_irreducible: None,
        };
        let mut verdict = Some(true);
        for (r, _) in factorize(d as u64) {
            check.tested.push(r);
            let rep = irreducible_over(&h, r as usize, cfg)?;
            match rep.status {
                FactorStatus::Irreducible => {}
                FactorStatus::Factors(_) => {
                    verdict = Some(false);
                    break;
                }
                FactorStatus::Skipped(reason) => {
                    skipped.get_or_insert(reason);
                    verdict = None;
                    break;
                }
            }
        }
        check.absolutely_irreducible = verdict;
        components.push(check);
        if verdict == Some(true) {
            return Ok(AbsIrredReport { status: AbsStatus::Yes { witness: h }, base, components });
        }
    }
    let status = match skipped {
        Some(r) => AbsStatus::Skipped(r),
        None => AbsStatus::No,
    };
    Ok(AbsIrredReport { status, base, components })
}

/// Exact division test for `y`-monic polynomials; `None` unless `g | f`.
pub fn divide_exact(f: &BiPoly, g: &BiPoly) -> Option<BiPoly> {
    let lc = g.to_y_major().pop()?;
    if lc.degree() != Some(0) {
        return None;
    }
    let inv = g.ctx().inv(&lc.coeff(0)).ok()?;
    let gm = g.scale(&inv);
    let q = div_monic_y(&f.to_y_major(), &gm.to_y_major())?;
    Some(BiPoly::from_y_major(f.ctx(), &q).scale(&inv))
}
