//! Singular points of the curve `g_t = 0`.
//!
//! In case A the singular points are in bijection with pairs `(r, s)` of
//! distinct `(t-1)`-th roots of unity other than 1 with
//! `(r-1)^(t-1) = (s-1)^(t-1)`, so counting them is a bucket count over
//! `mu(t-1)`. In case B they are enumerated explicitly from
//! `mu(ell)`, typed, and can be checked against a Taylor expansion.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arith::{decompose, gcd, mult_order, ArithError, Case};
use crate::bifactor::{factor_over, BiFactorConfig, BifactorError, FactorStatus};
use crate::gf::{build_field_capped, Elem, FieldCtx, GfError};
use crate::poly::factor::factor as uni_factor;
use crate::poly::{build_ft_gt_capped, BiPoly, Embedding, PolyError};

pub const DEFAULT_POINT_CAP: usize = 10_000;
pub const DEFAULT_BEZOUT_T_CAP: u64 = 16;

#[derive(Debug, Error)]
pub enum SingError {
    #[error("{what} = {value} exceeds cap {cap}")]
    CapExceeded { what: &'static str, value: u64, cap: u64 },
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("multiplicity mismatch at {point}: {detail}")]
    Mismatch { point: String, detail: String },
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Bifactor(#[from] BifactorError),
}

#[derive(Debug, Clone)]
pub struct SingConfig {
    pub ext_cap: usize,
    pub point_cap: usize,
    /// Largest `t` for which `f_t, g_t` are expanded for Taylor checks.
    pub taylor_t_cap: u64,
    /// Largest `t` for which the Bezout audit factors `g_t` absolutely.
    pub bezout_t_cap: u64,
}

impl Default for SingConfig {
    fn default() -> Self {
        SingConfig {
            ext_cap: 300,
            point_cap: DEFAULT_POINT_CAP,
            taylor_t_cap: 400,
            bezout_t_cap: DEFAULT_BEZOUT_T_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PointType {
    #[serde(rename = "I")]
    I,
    #[serde(rename = "II")]
    II,
    #[serde(rename = "III.A")]
    IIIA,
    #[serde(rename = "III.B")]
    IIIB,
    #[serde(rename = "A-nodal")]
    ANodal,
}

impl fmt::Display for PointType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PointType::I => "I",
            PointType::II => "II",
            PointType::IIIA => "III.A",
            PointType::IIIB => "III.B",
            PointType::ANodal => "A-nodal",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Affine(Elem, Elem),
    /// The point `(alpha : 1 : 0)`.
    Infinity(Elem),
}

/// A singular point with its predicted multiplicities on `f_t` and `g_t`.
#[derive(Debug, Clone)]
pub struct SingularPoint {
    pub ctx: Arc<FieldCtx>,
    pub location: Location,
    pub kind: PointType,
    pub m_f: u32,
    pub m_g: u32,
}

impl SingularPoint {
    pub fn describe(&self) -> String {
        match &self.location {
            Location::Affine(a, b) => {
                format!("({}, {})", self.ctx.fmt_elem(a), self.ctx.fmt_elem(b))
            }
            Location::Infinity(a) => format!("({} : 1 : 0)", self.ctx.fmt_elem(a)),
        }
    }

    fn on_diagonal(&self) -> bool {
        match &self.location {
            Location::Affine(a, b) => a == b,
            Location::Infinity(a) => self.ctx.is_one(a),
        }
    }
}

impl Serialize for SingularPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SingularPoint", 5)?;
        match &self.location {
            Location::Affine(a, b) => {
                st.serialize_field("at", "affine")?;
                st.serialize_field("coords", &[self.ctx.to_json(a), self.ctx.to_json(b)])?;
            }
            Location::Infinity(a) => {
                st.serialize_field("at", "infinity")?;
                st.serialize_field("coords", &[self.ctx.to_json(a)])?;
            }
        }
        st.serialize_field("type", &self.kind)?;
        st.serialize_field("m_f", &self.m_f)?;
        st.serialize_field("m_g", &self.m_g)?;
        st.end()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SingSummary {
    pub p: u64,
    pub t: u64,
    pub case: Case,
    /// Degree over `F_p` of the field holding the points.
    pub field_degree: usize,
    /// Case A: `|Omega_t|`, the number of affine singular points.
    #[serde(rename = "N_t")]
    pub n_t: Option<u64>,
    /// Case A: class key (little-endian coefficient list) to class size.
    pub class_sizes: BTreeMap<String, u64>,
    /// Case A: class size to number of classes of that size.
    pub class_size_histogram: BTreeMap<u64, u64>,
    /// Case B: number of type I points.
    #[serde(rename = "N1")]
    pub n1: Option<u64>,
    /// Case B: number of type III.A points.
    #[serde(rename = "N2")]
    pub n2: Option<u64>,
    /// Case B: counts per type.
    pub type_counts: BTreeMap<String, u64>,
    pub bound_ok: bool,
    /// Case A: `N_t < (t-2)^2 / 4`.
    pub condition_b: Option<bool>,
    pub bound_notes: Vec<String>,
    pub points: Vec<SingularPoint>,
    pub points_truncated: bool,
}

impl SingSummary {
    fn empty(p: u64, t: u64, case: Case, field_degree: usize) -> SingSummary {
        SingSummary {
            p,
            t,
            case,
            field_degree,
            n_t: None,
            class_sizes: BTreeMap::new(),
            class_size_histogram: BTreeMap::new(),
            n1: None,
            n2: None,
            type_counts: BTreeMap::new(),
            bound_ok: true,
            condition_b: None,
            bound_notes: Vec::new(),
            points: Vec::new(),
            points_truncated: false,
        }
    }
}

fn key_string(ctx: &FieldCtx, a: &Elem) -> String {
    ctx.to_json(a).to_string()
}

/// `mu(n)` in `F_{p^e}` with `e = ord_n(p)`, subject to the extension cap.
pub(crate) fn unity_roots(p: u64, n: u64, ext_cap: usize) -> Result<(Arc<FieldCtx>, Vec<Elem>), SingError> {
    let e = mult_order(p, n)?;
    if e > ext_cap as u64 {
        return Err(SingError::CapExceeded { what: "extension degree", value: e, cap: ext_cap as u64 });
    }
    let ctx = build_field_capped(p, e as usize, ext_cap)?;
    let (_, roots) = ctx.roots_of_unity(n)?;
    Ok((ctx, roots))
}

/// Case-A census of `Omega_t` by bucketing `(r-1)^(t-1)`.
pub fn omega_census(p: u64, t: u64, cfg: &SingConfig) -> Result<SingSummary, SingError> {
    let dec = decompose(p, t)?;
    if dec.case != Case::A || t % 2 == 1 {
        return Err(SingError::NotApplicable(format!("census needs even t in case A, got t = {t}")));
    }
    let n = t - 1;
    let (ctx, roots) = unity_roots(p, n, cfg.ext_cap)?;
    let one = ctx.one();
    let mut buckets: HashMap<Elem, Vec<usize>> = HashMap::new();
    let mut order: Vec<Elem> = Vec::new();
    for (idx, r) in roots.iter().enumerate() {
        if ctx.is_one(r) {
            continue;
        }
        let key = ctx.pow_u64(&ctx.sub(r, &one), n);
        let slot = buckets.entry(key.clone()).or_default();
        if slot.is_empty() {
            order.push(key);
        }
        slot.push(idx);
    }
    let mut summary = SingSummary::empty(p, t, Case::A, ctx.degree());
    let mut pairs = 0u64;
    for key in &order {
        let size = buckets[key].len() as u64;
        pairs += size * size;
        summary.class_sizes.insert(key_string(&ctx, key), size);
        *summary.class_size_histogram.entry(size).or_default() += 1;
    }
    let n_t = pairs - (t - 2);
    summary.n_t = Some(n_t);
    summary.bound_ok = 2 * n_t <= (t - 2) * (t - 4);
    summary.condition_b = Some(4 * n_t < (t - 2) * (t - 2));
    'fill: for key in &order {
        let members = &buckets[key];
        for &i in members {
            for &j in members {
                if i == j {
                    continue;
                }
                if summary.points.len() >= cfg.point_cap {
                    summary.points_truncated = true;
                    break 'fill;
                }
                let a = ctx.inv(&ctx.sub(&roots[i], &one))?;
                let b = ctx.inv(&ctx.sub(&roots[j], &one))?;
                summary.points.push(SingularPoint {
                    ctx: ctx.clone(),
                    location: Location::Affine(a, b),
                    kind: PointType::ANodal,
                    m_f: 2,
                    m_g: 2,
                });
            }
        }
    }
    Ok(summary)
}

/// Predicted multiplicity on `f_t` for a case-B type.
fn case_b_mult(kind: PointType, q: u64) -> u32 {
    (match kind {
        PointType::I => q + 1,
        PointType::II | PointType::IIIA => q,
        PointType::IIIB => q - 1,
        PointType::ANodal => 2,
    }) as u32
}

/// Case-B enumeration: affine points from `mu(ell)` filtered by `f_t = 0`,
/// and points `(alpha : 1 : 0)` with `alpha^ell = 1` at infinity.
pub fn case_b_enum(p: u64, t: u64, cfg: &SingConfig) -> Result<SingSummary, SingError> {
    let dec = decompose(p, t)?;
    if dec.case != Case::B || dec.ell == 0 {
        return Err(SingError::NotApplicable(format!("t = {t} is not in case B with ell >= 1")));
    }
    let ell = dec.ell;
    let q = dec.p_pow_i();
    let (ctx, roots) = unity_roots(p, ell, cfg.ext_cap)?;
    let one = ctx.one();
    let mut summary = SingSummary::empty(p, t, Case::B, ctx.degree());
    let mut points = Vec::new();

    let alphas: Vec<Elem> = roots
        .iter()
        .filter(|r| !ctx.is_one(r))
        .map(|r| ctx.inv(&ctx.sub(r, &one)))
        .collect::<Result<_, _>>()?;
    // f_t(a, b) = h(a) - h(b) with h(z) = (z+1)^t - z^t.
    let h: Vec<Elem> = alphas
        .iter()
        .map(|a| ctx.sub(&ctx.pow_u64(&ctx.add(a, &one), t), &ctx.pow_u64(a, t)))
        .collect();
    let pow_ell: Vec<Elem> = alphas.iter().map(|a| ctx.pow_u64(a, ell)).collect();
    let pow_q1: Vec<Elem> = alphas.iter().map(|a| ctx.pow_u64(a, q - 1)).collect();
    // The degree-q component of f_t at (a, b) vanishes iff both
    // rho = 1 + 1/a and 1 + 1/b satisfy rho^(q-1) = 1.
    let flat: Vec<bool> = roots
        .iter()
        .filter(|r| !ctx.is_one(r))
        .map(|r| ctx.is_one(&ctx.pow_u64(r, q - 1)))
        .collect();
    let mut relaxed_only = 0u64;
    for i in 0..alphas.len() {
        for j in 0..alphas.len() {
            if h[i] != h[j] {
                continue;
            }
            let relaxed = pow_ell[i] == pow_ell[j] && pow_q1[i] == pow_q1[j];
            let kind = if relaxed && flat[i] && flat[j] { PointType::I } else { PointType::II };
            if relaxed && kind == PointType::II {
                relaxed_only += 1;
            }
            points.push((Location::Affine(alphas[i].clone(), alphas[j].clone()), kind));
        }
    }
    for a in &roots {
        let kind = if ctx.is_one(&ctx.pow_u64(a, q - 1)) { PointType::IIIA } else { PointType::IIIB };
        points.push((Location::Infinity(a.clone()), kind));
    }

    for (location, kind) in points {
        *summary.type_counts.entry(kind.to_string()).or_default() += 1;
        let m_f = case_b_mult(kind, q);
        let mut pt = SingularPoint { ctx: ctx.clone(), location, kind, m_f, m_g: m_f };
        if pt.on_diagonal() {
            pt.m_g = m_f - 1;
        }
        if summary.points.len() < cfg.point_cap {
            summary.points.push(pt);
        } else {
            summary.points_truncated = true;
        }
    }
    let count = |k: &str| summary.type_counts.get(k).copied().unwrap_or(0);
    let (n1, n2) = (count("I"), count("III.A"));
    let affine = n1 + count("II");
    summary.n1 = Some(n1);
    summary.n2 = Some(n2);
    let mut ok = true;
    let mut note = |cond: bool, text: String| {
        ok &= cond;
        summary.bound_notes.push(format!("{} {}", if cond { "ok" } else { "VIOLATED" }, text));
    };
    note(affine <= (ell - 1) * (ell - 1), format!("affine points {affine} <= (ell-1)^2 = {}", (ell - 1) * (ell - 1)));
    note(n2 <= ell, format!("N2 = {n2} <= ell = {ell}"));
    let d = gcd(ell, q - 1);
    note(n1 <= (d - 1) * (d - 1), format!("N1 = {n1} <= (d-1)^2 with d = gcd(ell, p^i-1) = {d}"));
    if d < ell {
        let off = summary
            .points
            .iter()
            .filter(|pt| pt.kind == PointType::I && !pt.on_diagonal())
            .count() as u64;
        note(9 * off <= (ell - 3) * (ell - 3), format!("off-diagonal type I = {off} <= (ell/3 - 1)^2"));
    } else {
        note(n1 <= (ell - 1) * (ell - 1), format!("N1 = {n1} <= (ell-1)^2"));
    }
    summary.bound_ok = ok;
    if relaxed_only > 0 {
        summary.bound_notes.push(format!(
            "{relaxed_only} point(s) satisfy a^ell = b^ell and a^(q-1) = b^(q-1) but keep a nonzero degree-q component; typed II"
        ));
    }
    Ok(summary)
}

/// Outcome of one Taylor check.
#[derive(Debug, Clone, Serialize)]
pub struct MultiplicityCheck {
    pub point: String,
    pub kind: PointType,
    pub predicted_f: u32,
    pub actual_f: u32,
    pub predicted_g: u32,
    pub actual_g: u32,
    pub distinct_tangents_f: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiplicityReport {
    pub p: u64,
    pub t: u64,
    pub checked: Vec<MultiplicityCheck>,
}

/// Recomputes multiplicities on `f_t` and `g_t` by Taylor expansion for up
/// to `sample` points and compares with the predictions.
pub fn verify_multiplicities(
    summary: &SingSummary,
    sample: usize,
    cfg: &SingConfig,
) -> Result<MultiplicityReport, SingError> {
    let (p, t) = (summary.p, summary.t);
    let (f, g) = build_ft_gt_capped(p, t, cfg.taylor_t_cap)?;
    let mut report = MultiplicityReport { p, t, checked: Vec::new() };
    let Some(first) = summary.points.first() else {
        return Ok(report);
    };
    let ctx = first.ctx.clone();
    let (f, g) = (f.recode(&ctx)?, g.recode(&ctx)?);
    let (f_inf, g_inf) = (f.infinity_chart(), g.infinity_chart());
    let q = p.pow(decompose(p, t)?.i);
    for pt in summary.points.iter().take(sample) {
        let (cf, cg) = match &pt.location {
            Location::Affine(a, b) => (f.tangent_cone(a, b)?, g.tangent_cone(a, b)?),
            Location::Infinity(a) => {
                let z = ctx.zero();
                (f_inf.tangent_cone(a, &z)?, g_inf.tangent_cone(a, &z)?)
            }
        };
        let check = MultiplicityCheck {
            point: pt.describe(),
            kind: pt.kind,
            predicted_f: pt.m_f,
            actual_f: cf.multiplicity,
            predicted_g: pt.m_g,
            actual_g: cg.multiplicity,
            distinct_tangents_f: cf.distinct_lines,
        };
        let mut problems = Vec::new();
        if check.actual_f != check.predicted_f {
            problems.push(format!("m_f {} != {}", check.actual_f, check.predicted_f));
        }
        if check.actual_g != check.predicted_g {
            problems.push(format!("m_g {} != {}", check.actual_g, check.predicted_g));
        }
        if pt.kind == PointType::ANodal && !cg.distinct_lines {
            problems.push("tangent cone of g_t is not two distinct lines".into());
        }
        if pt.kind == PointType::I && !cf.distinct_lines {
            problems.push(format!("degree-{} cone is not a product of distinct lines", q + 1));
        }
        if !problems.is_empty() {
            return Err(SingError::Mismatch { point: pt.describe(), detail: problems.join("; ") });
        }
        report.checked.push(check);
    }
    Ok(report)
}

/// Intersection data for one pair of absolute components.
#[derive(Debug, Clone, Serialize)]
pub struct PairAudit {
    pub u: usize,
    pub v: usize,
    pub deg_product: u64,
    /// Listed singular points lying on both components.
    pub affine_shared: u64,
    /// Distinct common points at infinity.
    pub infinity_shared: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BezoutAudit {
    pub p: u64,
    pub t: u64,
    pub case: Case,
    /// Degree over `F_p` of the field over which `g_t` was factored.
    pub field_degree: usize,
    pub components: Vec<String>,
    pub pairs: Vec<PairAudit>,
    pub affine_tally: u64,
    pub infinity_tally: u64,
    pub bezout_total: u64,
    /// Listed points lying on a single component.
    pub self_points: u64,
    pub consistent: bool,
    pub note: String,
}

/// Common projective zeros of the top forms of `u` and `v`.
fn shared_at_infinity(u: &BiPoly, v: &BiPoly, seed: u64) -> u64 {
    let ctx = u.ctx();
    let one = ctx.one();
    let top = |h: &BiPoly| h.homogeneous_part(h.total_degree().unwrap_or(0));
    let (tu, tv) = (top(u), top(v));
    // (a : 1 : 0) for roots a of top(x, 1); (1 : 0 : 0) when x^d is missing.
    let g = tu.swap_xy().specialize_x(&one).gcd(&tv.swap_xy().specialize_x(&one));
    let finite: u64 = if g.degree().unwrap_or(0) == 0 {
        0
    } else {
        uni_factor(&g, seed).iter().map(|(h, _)| h.degree().unwrap() as u64).sum()
    };
    let du = u.total_degree().unwrap_or(0);
    let dv = v.total_degree().unwrap_or(0);
    let at_x = ctx.is_zero(&tu.coeff(du, 0)) && ctx.is_zero(&tv.coeff(dv, 0));
    finite + at_x as u64
}

/// Splits `g_t` into absolutely irreducible components and checks that the
/// listed affine singular points account for their pairwise intersections.
///
/// In case A every intersection of two components is a node of `g_t` with
/// intersection number 1 and nothing meets at infinity, so the shared-point
/// tally must equal `sum deg(u) deg(v)`. In case B multiplicities are higher
/// and only `tally <= sum deg(u) deg(v)` is checked.
pub fn bezout_audit(
    p: u64,
    t: u64,
    cfg: &SingConfig,
    fcfg: &BiFactorConfig,
) -> Result<BezoutAudit, SingError> {
    if t > cfg.bezout_t_cap {
        return Err(SingError::CapExceeded { what: "t for the Bezout audit", value: t, cap: cfg.bezout_t_cap });
    }
    let dec = decompose(p, t)?;
    let summary = match dec.case {
        Case::A if t.is_multiple_of(2) => omega_census(p, t, cfg)?,
        Case::B if dec.ell >= 1 => case_b_enum(p, t, cfg)?,
        _ => return Err(SingError::NotApplicable(format!("no point list for t = {t}"))),
    };
    if summary.points_truncated {
        return Err(SingError::CapExceeded {
            what: "singular points",
            value: summary.points.len() as u64,
            cap: cfg.point_cap as u64,
        });
    }
    let (_, g) = build_ft_gt_capped(p, t, cfg.bezout_t_cap)?;
    let base = factor_over(&g, 1, fcfg)?;
    let base_degrees: Vec<usize> = match &base.status {
        FactorStatus::Irreducible => vec![g.total_degree().unwrap_or(0) as usize],
        FactorStatus::Factors(fs) => fs.iter().map(|h| h.total_degree().unwrap() as usize).collect(),
        FactorStatus::Skipped(r) => return Err(SingError::NotApplicable(format!("factoring skipped: {r}"))),
    };
    // A component of degree d splits into conjugates over F_{p^k}, k | d.
    let m = base_degrees
        .iter()
        .fold(summary.field_degree, |acc, &d| acc / gcd(acc as u64, d as u64) as usize * d);
    if m > cfg.ext_cap {
        return Err(SingError::CapExceeded { what: "extension degree", value: m as u64, cap: cfg.ext_cap as u64 });
    }
    let rep = factor_over(&g, m, fcfg)?;
    let big = build_field_capped(p, m, cfg.ext_cap)?;
    let comps: Vec<BiPoly> = match rep.status {
        FactorStatus::Irreducible => vec![g.recode(&big)?],
        FactorStatus::Factors(fs) => fs,
        FactorStatus::Skipped(r) => return Err(SingError::NotApplicable(format!("factoring skipped: {r}"))),
    };
    let emb = Embedding::new(&summary.points.first().map_or(big.clone(), |pt| pt.ctx.clone()), &big)?;
    let mut on: Vec<Vec<usize>> = Vec::new();
    for pt in &summary.points {
        if let Location::Affine(a, b) = &pt.location {
            let (a, b) = (emb.forward(a), emb.forward(b));
            on.push((0..comps.len()).filter(|&i| big.is_zero(&comps[i].eval(&a, &b))).collect());
        }
    }
    let mut audit = BezoutAudit {
        p,
        t,
        case: dec.case,
        field_degree: m,
        components: comps.iter().map(|h| h.to_string()).collect(),
        pairs: Vec::new(),
        affine_tally: 0,
        infinity_tally: 0,
        bezout_total: 0,
        self_points: on.iter().filter(|s| s.len() == 1).count() as u64,
        consistent: true,
        note: String::new(),
    };
    for u in 0..comps.len() {
        for v in u + 1..comps.len() {
            let du = comps[u].total_degree().unwrap_or(0) as u64;
            let dv = comps[v].total_degree().unwrap_or(0) as u64;
            let pair = PairAudit {
                u,
                v,
                deg_product: du * dv,
                affine_shared: on.iter().filter(|s| s.contains(&u) && s.contains(&v)).count() as u64,
                infinity_shared: shared_at_infinity(&comps[u], &comps[v], fcfg.seed),
            };
            audit.affine_tally += pair.affine_shared;
            audit.infinity_tally += pair.infinity_shared;
            audit.bezout_total += pair.deg_product;
            audit.pairs.push(pair);
        }
    }
    (audit.consistent, audit.note) = match dec.case {
        Case::A => (
            audit.affine_tally == audit.bezout_total && audit.infinity_tally == 0,
            "nodal tally must equal the Bezout total with nothing at infinity".into(),
        ),
        Case::B => (
            audit.affine_tally + audit.infinity_tally <= audit.bezout_total,
            "higher multiplicities: only an upper bound is checked".into(),
        ),
    };
    Ok(audit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SingConfig {
        SingConfig::default()
    }

    #[test]
    fn census_3_14_has_two_classes_of_six() {
        let s = omega_census(3, 14, &cfg()).unwrap();
        assert_eq!(s.n_t, Some(60));
        assert_eq!(s.class_size_histogram, BTreeMap::from([(6, 2)]));
        assert!(s.bound_ok);
        assert_eq!(s.condition_b, Some(false));
        assert_eq!(s.points.len(), 60);
    }

    #[test]
    fn census_counts_are_consistent() {
        for (p, t) in [(3u64, 8u64), (3, 20), (5, 12), (7, 38), (5, 82), (11, 24)] {
            let s = omega_census(p, t, &cfg()).unwrap();
            let members: u64 = s.class_sizes.values().sum();
            assert_eq!(members, t - 2, "({p},{t})");
            let sq: u64 = s.class_size_histogram.iter().map(|(k, v)| k * k * v).sum();
            assert_eq!(s.n_t, Some(sq - (t - 2)));
            assert_eq!(s.points.len() as u64, s.n_t.unwrap());
        }
    }

    #[test]
    fn census_points_are_nodes() {
        for (p, t) in [(3u64, 14u64), (3, 20), (7, 38)] {
            let s = omega_census(p, t, &cfg()).unwrap();
            let rep = verify_multiplicities(&s, 40, &cfg()).unwrap();
            assert_eq!(rep.checked.len() as u64, s.n_t.unwrap().min(40));
        }
    }

    #[test]
    fn census_rejects_other_exponents() {
        assert!(matches!(omega_census(3, 10, &cfg()), Err(SingError::NotApplicable(_))));
        assert!(matches!(omega_census(3, 11, &cfg()), Err(SingError::NotApplicable(_))));
    }

    #[test]
    fn g10_over_f3_has_one_point_at_infinity() {
        let s = case_b_enum(3, 10, &cfg()).unwrap();
        assert_eq!(s.points.len(), 1);
        let pt = &s.points[0];
        assert_eq!(pt.kind, PointType::IIIA);
        assert_eq!(pt.describe(), "(1 : 1 : 0)");
        assert_eq!((pt.m_f, pt.m_g), (9, 8));
        verify_multiplicities(&s, 10, &cfg()).unwrap();
    }

    #[test]
    fn case_b_3_46() {
        let s = case_b_enum(3, 46, &cfg()).unwrap();
        assert_eq!(s.n1, Some(0));
        assert!(s.bound_ok, "{:?}", s.bound_notes);
        assert_eq!(s.type_counts.get("II"), Some(&4));
        verify_multiplicities(&s, usize::MAX, &cfg()).unwrap();
    }

    #[test]
    fn case_b_type_one_points() {
        let s = case_b_enum(7, 64, &cfg()).unwrap();
        assert_eq!(s.n1, Some(2));
        assert_eq!(s.n2, Some(3));
        let rep = verify_multiplicities(&s, usize::MAX, &cfg()).unwrap();
        assert!(rep.checked.iter().any(|c| c.kind == PointType::I && c.distinct_tangents_f));
    }

    #[test]
    fn case_b_predictions_match_taylor() {
        for (p, t) in [(3u64, 28u64), (3, 40), (5, 16), (5, 76), (7, 22), (7, 50), (3, 64)] {
            let s = case_b_enum(p, t, &cfg()).unwrap();
            assert!(s.bound_ok, "({p},{t}) {:?}", s.bound_notes);
            verify_multiplicities(&s, usize::MAX, &cfg()).unwrap();
        }
    }

    #[test]
    fn unity_root_cap_is_enforced() {
        let small = SingConfig { ext_cap: 2, ..cfg() };
        assert!(matches!(omega_census(3, 14, &small), Err(SingError::CapExceeded { .. })));
    }

    #[test]
    fn bezout_3_14_six_conics() {
        let a = bezout_audit(3, 14, &cfg(), &BiFactorConfig::default()).unwrap();
        assert_eq!(a.components.len(), 6);
        assert_eq!((a.affine_tally, a.bezout_total, a.infinity_tally), (60, 60, 0));
        assert!(a.consistent);
    }

    #[test]
    fn bezout_g4_lines_meet_at_infinity() {
        let a = bezout_audit(3, 4, &cfg(), &BiFactorConfig::default()).unwrap();
        assert_eq!(a.components.len(), 2);
        assert_eq!((a.affine_tally, a.infinity_tally, a.bezout_total), (0, 1, 1));
        assert!(a.consistent);
    }

    #[test]
    fn bezout_irreducible_is_vacuous() {
        let a = bezout_audit(5, 12, &cfg(), &BiFactorConfig::default()).unwrap();
        assert_eq!(a.components.len(), 1);
        assert!(a.pairs.is_empty() && a.consistent);
        assert!(matches!(
            bezout_audit(3, 40, &cfg(), &BiFactorConfig::default()),
            Err(SingError::CapExceeded { .. })
        ));
    }
}
