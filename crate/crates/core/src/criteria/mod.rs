//! Sufficient conditions for `g_t` to have an absolutely irreducible factor
//! over `F_p`, their grouping, and the per-exponent verdict.
//!
//! Case A (`t mod p != 1`) has the arithmetic conditions a, d, e, f, the
//! mixed condition g, and conditions b, c, ahat(m) that need extension-field
//! work. Case B (`t mod p == 1`) has B.1 and B.2, both integer-only.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::{
    decompose, divisors, gcd, is_exceptional, is_prime, mult_order, pow_mod, reduce_exponent, Case,
    Decomposition, DEFAULT_DIVISOR_CAP,
};
use crate::bifactor::{irreducible_over, BiFactorConfig, FactorStatus};
use crate::poly::{build_ft_gt_capped, BiPoly};
use crate::sing::{omega_census, unity_roots, SingConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConditionId {
    A,
    AHat(u32),
    B,
    C,
    D,
    E,
    F,
    G,
    B1,
    B2,
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConditionId::A => f.write_str("A.a"),
            ConditionId::AHat(m) => write!(f, "A.ahat({m})"),
            ConditionId::B => f.write_str("A.b"),
            ConditionId::C => f.write_str("A.c"),
            ConditionId::D => f.write_str("A.d"),
            ConditionId::E => f.write_str("A.e"),
            ConditionId::F => f.write_str("A.f"),
            ConditionId::G => f.write_str("A.g"),
            ConditionId::B1 => f.write_str("B.1"),
            ConditionId::B2 => f.write_str("B.2"),
        }
    }
}

impl Serialize for ConditionId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl ConditionId {
    /// The first group whose condition set contains this condition.
    pub fn group(&self) -> Option<u8> {
        match self {
            ConditionId::A | ConditionId::D | ConditionId::E | ConditionId::F => Some(1),
            ConditionId::G => Some(2),
            ConditionId::C | ConditionId::B => Some(3),
            ConditionId::AHat(2) => Some(4),
            ConditionId::AHat(3) => Some(5),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Proven,
    Fails,
    Inapplicable,
    Skipped(String),
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Proven => "Proven",
            Status::Fails => "Fails",
            Status::Inapplicable => "Inapplicable",
            Status::Skipped(_) => "Skipped",
        }
    }
}

impl Serialize for Status {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionResult {
    pub id: ConditionId,
    pub status: Status,
    pub trace: String,
}

impl ConditionResult {
    fn new(id: ConditionId, status: Status, trace: impl Into<String>) -> ConditionResult {
        let mut trace = trace.into();
        if let Status::Skipped(r) = &status {
            if trace.is_empty() {
                trace = format!("skipped: {r}");
            } else {
                trace = format!("{trace}; skipped: {r}");
            }
        }
        ConditionResult { id, status, trace }
    }

    fn inapplicable(id: ConditionId, why: impl Into<String>) -> ConditionResult {
        ConditionResult::new(id, Status::Inapplicable, why)
    }

    fn verdict(id: ConditionId, holds: bool, trace: impl Into<String>) -> ConditionResult {
        ConditionResult::new(id, if holds { Status::Proven } else { Status::Fails }, trace)
    }

    pub fn is_proven(&self) -> bool {
        self.status == Status::Proven
    }

    pub fn is_skipped(&self) -> bool {
        matches!(self.status, Status::Skipped(_))
    }
}

#[derive(Debug, Clone)]
pub struct CriteriaConfig {
    pub sing: SingConfig,
    pub bifactor: BiFactorConfig,
    /// Groups to evaluate, subset of `1..=5`.
    pub groups: BTreeSet<u8>,
    /// Add condition b to group 3.
    pub with_b: bool,
    /// Evaluate every selected condition instead of stopping at the first proof.
    pub exhaustive: bool,
}

impl Default for CriteriaConfig {
    fn default() -> Self {
        CriteriaConfig {
            sing: SingConfig::default(),
            bifactor: BiFactorConfig::default(),
            groups: (1..=5).collect(),
            with_b: false,
            exhaustive: false,
        }
    }
}

fn case_a_even(p: u64, t: u64, id: ConditionId) -> Result<Decomposition, ConditionResult> {
    let dec = decompose(p, t).map_err(|e| ConditionResult::inapplicable(id, e.to_string()))?;
    if dec.case != Case::A {
        return Err(ConditionResult::inapplicable(id, format!("t = {t} is in case B")));
    }
    if t % 2 == 1 {
        return Err(ConditionResult::inapplicable(id, "t is odd"));
    }
    Ok(dec)
}

fn case_a(p: u64, t: u64, id: ConditionId) -> Result<Decomposition, ConditionResult> {
    let dec = decompose(p, t).map_err(|e| ConditionResult::inapplicable(id, e.to_string()))?;
    if dec.case != Case::A {
        return Err(ConditionResult::inapplicable(id, format!("t = {t} is in case B")));
    }
    Ok(dec)
}

fn gcd_leg(q_minus_1: u64, t: u64) -> (bool, String) {
    let (g0, g1) = (gcd(q_minus_1, t), gcd(q_minus_1, t - 1));
    let holds = g0 >= 3 || g1 >= 2;
    (holds, format!("gcd({q_minus_1}, {t}) = {g0}, gcd({q_minus_1}, {}) = {g1}", t - 1))
}

/// `gcd(p-1, t) >= 3` or `gcd(p-1, t-1) >= 2`.
pub fn check_a(p: u64, t: u64) -> ConditionResult {
    if let Err(r) = case_a(p, t, ConditionId::A) {
        return r;
    }
    let (holds, trace) = gcd_leg(p - 1, t);
    ConditionResult::verdict(ConditionId::A, holds, trace)
}

/// `g_t` stays irreducible over `F_{p^m}` and the gcd test of `check_a`
/// holds with `p^m` in place of `p`.
pub fn check_ahat(p: u64, t: u64, m: u32, cfg: &CriteriaConfig) -> ConditionResult {
    let id = ConditionId::AHat(m);
    if let Err(r) = case_a(p, t, id) {
        return r;
    }
    let Some(q) = p.checked_pow(m) else {
        return ConditionResult::new(id, Status::Skipped(format!("p^{m} overflows")), "");
    };
    let (holds, trace) = gcd_leg(q - 1, t);
    if !holds {
        return ConditionResult::new(id, Status::Fails, trace);
    }
    match irreducibility(p, t, m as usize, cfg) {
        Ok((true, how)) => ConditionResult::new(id, Status::Proven, format!("{trace}; {how}")),
        Ok((false, how)) => ConditionResult::new(id, Status::Fails, format!("{trace}; {how}")),
        Err(reason) => ConditionResult::new(id, Status::Skipped(reason), trace),
    }
}

fn irreducibility(p: u64, t: u64, m: usize, cfg: &CriteriaConfig) -> Result<(bool, String), String> {
    let bcfg = &cfg.bifactor;
    if t - 2 > bcfg.degree_cap as u64 {
        return Err(format!("degree {} exceeds bifactor cap {}", t - 2, bcfg.degree_cap));
    }
    let g: BiPoly = build_ft_gt_capped(p, t, u64::MAX).map_err(|e| e.to_string())?.1;
    let rep = irreducible_over(&g, m, bcfg).map_err(|e| e.to_string())?;
    match rep.status {
        FactorStatus::Irreducible => Ok((true, format!("g_t irreducible over F_{p}^{m}"))),
        FactorStatus::Factors(fs) => {
            let degs: Vec<String> = fs.iter().map(|h| h.total_degree().unwrap_or(0).to_string()).collect();
            Ok((false, format!("g_t factors over F_{p}^{m} with degrees [{}]", degs.join(", "))))
        }
        FactorStatus::Skipped(r) => Err(r),
    }
}

/// Fewer than `(t-2)^2 / 4` singular points, from the census.
pub fn check_b(p: u64, t: u64, cfg: &CriteriaConfig) -> ConditionResult {
    let id = ConditionId::B;
    if let Err(r) = case_a_even(p, t, id) {
        return r;
    }
    match omega_census(p, t, &cfg.sing) {
        Ok(s) => {
            let n_t = s.n_t.unwrap_or(0);
            let bound = (t - 2) * (t - 2);
            ConditionResult::verdict(id, 4 * n_t < bound, format!("N_t = {n_t}, (t-2)^2/4 = {}", bound as f64 / 4.0))
        }
        Err(e) => ConditionResult::new(id, Status::Skipped(e.to_string()), ""),
    }
}

/// For every `s != 1` in `mu(t-1)`: `(s-1)^(t-1)` lies outside `F_p` and
/// `(s-1)^((t-1)(p-1)) != -1`.
pub fn check_c(p: u64, t: u64, cfg: &CriteriaConfig) -> ConditionResult {
    let id = ConditionId::C;
    if let Err(r) = case_a_even(p, t, id) {
        return r;
    }
    let (ctx, roots) = match unity_roots(p, t - 1, cfg.sing.ext_cap) {
        Ok(v) => v,
        Err(e) => return ConditionResult::new(id, Status::Skipped(e.to_string()), ""),
    };
    let one = ctx.one();
    let minus_one = ctx.neg(&one);
    let mut seen = HashSet::new();
    for s in &roots {
        if ctx.is_one(s) {
            continue;
        }
        let u = ctx.pow_u64(&ctx.sub(s, &one), t - 1);
        if !seen.insert(u.clone()) {
            continue;
        }
        let in_fp = match ctx.in_subfield(&u, 1) {
            Ok(v) => v,
            Err(e) => return ConditionResult::new(id, Status::Skipped(e.to_string()), ""),
        };
        if in_fp {
            return ConditionResult::new(
                id,
                Status::Fails,
                format!("s = {}: (s-1)^(t-1) = {} lies in F_{p}", ctx.fmt_elem(s), ctx.fmt_elem(&u)),
            );
        }
        if ctx.pow_u64(&u, p - 1) == minus_one {
            return ConditionResult::new(
                id,
                Status::Fails,
                format!("s = {}: (s-1)^((t-1)(p-1)) = -1", ctx.fmt_elem(s)),
            );
        }
    }
    ConditionResult::new(
        id,
        Status::Proven,
        format!("{} classes in F_{p}^{} checked", seen.len(), ctx.degree()),
    )
}

/// Both formulations of condition d: (a) `t-1 | p^(2e) + 1` for some
/// `e >= 1`; (b) `u = ord_(t-1)(p)` is a multiple of 4 and `t-1 | p^(u/2) + 1`.
pub fn d_forms(p: u64, t: u64) -> Option<(bool, bool, u64)> {
    let n = t.checked_sub(1)?;
    if n < 2 || gcd(p, n) != 1 {
        return None;
    }
    let u = mult_order(p, n).ok()?;
    let form_b = u % 4 == 0 && pow_mod(p, u / 2, n) == n - 1;
    // p^(2e) cycles with period dividing u, so e <= u covers every residue.
    let form_a = (1..=u).any(|e| pow_mod(p, 2 * e, n) == n - 1);
    Some((form_a, form_b, u))
}

pub fn check_d(p: u64, t: u64) -> ConditionResult {
    let id = ConditionId::D;
    if let Err(r) = case_a_even(p, t, id) {
        return r;
    }
    let Some((form_a, form_b, u)) = d_forms(p, t) else {
        return ConditionResult::inapplicable(id, "order of p modulo t-1 undefined");
    };
    let mut trace = format!("u = ord_{}({p}) = {u}", t - 1);
    if form_b {
        trace.push_str(&format!(", {} divides {p}^{} + 1", t - 1, u / 2));
    } else if u % 4 != 0 {
        trace.push_str(", not a multiple of 4");
    } else {
        trace.push_str(&format!(", {} does not divide {p}^{} + 1", t - 1, u / 2));
    }
    if form_a != form_b {
        trace.push_str(&format!("; WARNING: divisibility form gives {form_a}"));
    }
    ConditionResult::verdict(id, form_b, trace)
}

/// `t-1` is a prime `>= 3` and `ord_(t-1)(p) = (t-2)/2`.
pub fn check_e(p: u64, t: u64) -> ConditionResult {
    let id = ConditionId::E;
    if let Err(r) = case_a_even(p, t, id) {
        return r;
    }
    let n = t - 1;
    if n < 3 || !is_prime(n) {
        return ConditionResult::new(id, Status::Fails, format!("t-1 = {n} is not a prime >= 3"));
    }
    match mult_order(p, n) {
        Ok(u) => ConditionResult::verdict(id, u == (t - 2) / 2, format!("ord_{n}({p}) = {u}, (t-2)/2 = {}", (t - 2) / 2)),
        Err(e) => ConditionResult::inapplicable(id, e.to_string()),
    }
}

/// With `e = gcd(e_(t-1), e_t)`: some divisor `d > 2` of `t`, or `d > 1` of
/// `t-1`, has `gcd(e, e_d) = 1`.
pub fn check_f(p: u64, t: u64) -> ConditionResult {
    let id = ConditionId::F;
    if let Err(r) = case_a(p, t, id) {
        return r;
    }
    let orders = || -> Result<ConditionResult, String> {
        let e1 = mult_order(p, t - 1).map_err(|e| e.to_string())?;
        let e0 = mult_order(p, t).map_err(|e| e.to_string())?;
        let e = gcd(e1, e0);
        let mut trace = format!("e = gcd(e_{}, e_{t}) = gcd({e1}, {e0}) = {e}", t - 1);
        let dt = divisors(t, DEFAULT_DIVISOR_CAP).map_err(|e| e.to_string())?;
        let dt1 = divisors(t - 1, DEFAULT_DIVISOR_CAP).map_err(|e| e.to_string())?;
        let cands = dt.iter().filter(|&&d| d > 2).map(|&d| (d, "t")).chain(
            dt1.iter().filter(|&&d| d > 1).map(|&d| (d, "t-1")),
        );
        let mut tried = Vec::new();
        for (d, of) in cands {
            let ed = mult_order(p, d).map_err(|e| e.to_string())?;
            if gcd(e, ed) == 1 {
                trace.push_str(&format!("; d = {d} divides {of}, e_{d} = {ed}, gcd = 1"));
                return Ok(ConditionResult::new(id, Status::Proven, trace));
            }
            tried.push(format!("e_{d}={ed}"));
        }
        trace.push_str(&format!("; all divisors share a factor with e: [{}]", tried.join(", ")));
        Ok(ConditionResult::new(id, Status::Fails, trace))
    };
    orders().unwrap_or_else(|e| ConditionResult::inapplicable(id, e))
}

/// With `E = {d > 2 : d | t or d | t-1}`: `gcd(e_d : d in E) = 1` and `g_t`
/// is irreducible over `F_p`.
pub fn check_g(p: u64, t: u64, cfg: &CriteriaConfig) -> ConditionResult {
    let id = ConditionId::G;
    if let Err(r) = case_a(p, t, id) {
        return r;
    }
    let mut set: BTreeSet<u64> = BTreeSet::new();
    for n in [t, t - 1] {
        match divisors(n, DEFAULT_DIVISOR_CAP) {
            Ok(ds) => set.extend(ds.into_iter().filter(|&d| d > 2)),
            Err(e) => return ConditionResult::new(id, Status::Skipped(e.to_string()), ""),
        }
    }
    if let Some(d) = set.iter().find(|&&d| gcd(d, p) != 1) {
        return ConditionResult::inapplicable(id, format!("d = {d} in E shares a factor with p"));
    }
    let mut acc = 0u64;
    for &d in &set {
        acc = gcd(acc, mult_order(p, d).expect("coprime by the check above"));
    }
    let trace = format!("E = {set:?}, gcd(e_d) = {acc}");
    if acc != 1 {
        return ConditionResult::new(id, Status::Fails, trace);
    }
    match irreducibility(p, t, 1, cfg) {
        Ok((holds, how)) => ConditionResult::verdict(id, holds, format!("{trace}; {how}")),
        Err(reason) => ConditionResult::new(id, Status::Skipped(reason), trace),
    }
}

/// Case-B conditions B.1 and B.2.
pub fn check_case_b(p: u64, t: u64) -> [ConditionResult; 2] {
    let dec = match decompose(p, t) {
        Ok(d) if d.case == Case::B && t.is_multiple_of(2) && d.ell >= 3 => d,
        Ok(d) => {
            let why = if d.case != Case::B {
                "case A".to_string()
            } else if t % 2 == 1 {
                "t is odd".to_string()
            } else {
                format!("ell = {} < 3", d.ell)
            };
            return [
                ConditionResult::inapplicable(ConditionId::B1, why.clone()),
                ConditionResult::inapplicable(ConditionId::B2, why),
            ];
        }
        Err(e) => {
            return [
                ConditionResult::inapplicable(ConditionId::B1, e.to_string()),
                ConditionResult::inapplicable(ConditionId::B2, e.to_string()),
            ]
        }
    };
    let (i, ell) = (dec.i, dec.ell);
    let q1 = dec.p_pow_i() - 1;
    let g = gcd(ell, q1);
    let base = format!("t = {p}^{i}*{ell} + 1, gcd(ell, p^i-1) = gcd({ell}, {q1}) = {g}");
    let clause = (p >= 5 && i >= 1 && ell > 3) || (p >= 5 && i >= 2 && ell >= 3) || (p == 3 && i >= 2 && ell >= 3);
    let b1 = if g >= ell {
        ConditionResult::new(ConditionId::B1, Status::Fails, format!("{base} = ell"))
    } else {
        ConditionResult::verdict(
            ConditionId::B1,
            clause,
            format!("{base} < ell; p/i/ell clause {}", if clause { "holds" } else { "fails" }),
        )
    };
    let b2 = ConditionResult::verdict(
        ConditionId::B2,
        g == ell && ell < q1,
        format!("{base}; needs gcd = ell and ell < {q1}"),
    );
    [b1, b2]
}

/// Case-B exponents listed as not covered in the reference tables.
pub const REFERENCE_B_EXCLUSIONS: &[(u64, &[u64])] = &[(5, &[16, 76]), (7, &[22, 148])];

/// Reference count of case-B exclusions for `p = 3`, `t <= 1000`.
pub const REFERENCE_B_COUNT_P3: u64 = 118;

fn reference_b_excluded(p: u64, t: u64) -> bool {
    REFERENCE_B_EXCLUSIONS.iter().any(|(q, ts)| *q == p && ts.contains(&t))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    Exceptional(String),
    ProvenOdd,
    Proven(Vec<ConditionId>),
    Unresolved,
    Skipped(String),
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Classification::Exceptional(_) => "Exceptional",
            Classification::ProvenOdd => "ProvenOdd",
            Classification::Proven(_) => "Proven",
            Classification::Unresolved => "Unresolved",
            Classification::Skipped(_) => "Skipped",
        }
    }

    pub fn detail(&self) -> String {
        match self {
            Classification::Exceptional(w) => w.clone(),
            Classification::ProvenOdd => "x + y + 1 divides g_t".into(),
            Classification::Proven(ids) => ids.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","),
            Classification::Unresolved => String::new(),
            Classification::Skipped(r) => r.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub p: u64,
    pub t: u64,
    /// `t` with all factors `p` removed.
    pub t_reduced: u64,
    pub case: Option<Case>,
    pub classification: Classification,
    pub group_attained: Option<u8>,
    pub conditions: Vec<ConditionResult>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn is_proven(&self) -> bool {
        matches!(self.classification, Classification::Proven(_) | Classification::ProvenOdd)
    }

    pub fn is_unresolved(&self) -> bool {
        self.classification == Classification::Unresolved
    }

    pub fn condition(&self, id: ConditionId) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.id == id)
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Verdict", 9)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("t", &self.t)?;
        st.serialize_field("t_reduced", &self.t_reduced)?;
        st.serialize_field("case", &self.case)?;
        st.serialize_field("classification", self.classification.label())?;
        st.serialize_field("detail", &self.classification.detail())?;
        st.serialize_field("group_attained", &self.group_attained)?;
        st.serialize_field("conditions", &self.conditions)?;
        st.serialize_field("notes", &self.notes)?;
        st.end()
    }
}

/// Case-A conditions of each group, in evaluation order.
pub fn group_conditions(group: u8, with_b: bool) -> Vec<ConditionId> {
    use ConditionId::*;
    let mut ids = vec![A, D, E, F];
    if group >= 2 {
        ids.push(G);
    }
    if group >= 3 {
        ids.push(C);
        if with_b {
            ids.push(B);
        }
    }
    match group {
        4 => ids.push(AHat(2)),
        5 => ids.push(AHat(3)),
        _ => {}
    }
    ids
}

fn run_condition(id: ConditionId, p: u64, t: u64, cfg: &CriteriaConfig) -> ConditionResult {
    match id {
        ConditionId::A => check_a(p, t),
        ConditionId::AHat(m) => check_ahat(p, t, m, cfg),
        ConditionId::B => check_b(p, t, cfg),
        ConditionId::C => check_c(p, t, cfg),
        ConditionId::D => check_d(p, t),
        ConditionId::E => check_e(p, t),
        ConditionId::F => check_f(p, t),
        ConditionId::G => check_g(p, t, cfg),
        ConditionId::B1 => check_case_b(p, t)[0].clone(),
        ConditionId::B2 => check_case_b(p, t)[1].clone(),
    }
}

/// Whether some condition of `group` was proven in `v`.
pub fn group_proves(v: &Verdict, group: u8, with_b: bool) -> bool {
    let ids = group_conditions(group, with_b);
    v.conditions.iter().any(|c| c.is_proven() && ids.contains(&c.id))
}

/// The verdict pipeline for one exponent.
pub fn verdict(p: u64, t: u64, cfg: &CriteriaConfig) -> Verdict {
    let tr = reduce_exponent(p, t);
    let mut v = Verdict {
        p,
        t,
        t_reduced: tr,
        case: None,
        classification: Classification::Unresolved,
        group_attained: None,
        conditions: Vec::new(),
        notes: Vec::new(),
    };
    if tr != t {
        v.notes.push(format!("reduced t = {t} to {tr}"));
    }
    if tr < 2 {
        v.classification = Classification::Skipped(format!("reduced exponent {tr}: f_t vanishes"));
        return v;
    }
    if tr % 2 == 1 {
        v.case = decompose(p, tr).ok().map(|d| d.case);
        v.classification = Classification::ProvenOdd;
        return v;
    }
    if let Some(w) = is_exceptional(p, tr) {
        v.case = decompose(p, tr).ok().map(|d| d.case);
        v.classification = Classification::Exceptional(w.to_string());
        return v;
    }
    let dec = match decompose(p, tr) {
        Ok(d) => d,
        Err(e) => {
            v.classification = Classification::Skipped(e.to_string());
            return v;
        }
    };
    v.case = Some(dec.case);
    match dec.case {
        Case::B => {
            v.conditions = check_case_b(p, tr).to_vec();
            let proven: Vec<ConditionId> =
                v.conditions.iter().filter(|c| c.is_proven()).map(|c| c.id).collect();
            if reference_b_excluded(p, tr) && !proven.is_empty() {
                v.notes.push(format!(
                    "table discrepancy: reference tables list t = {tr} as not covered in case B, but {} holds as stated",
                    proven.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
                ));
            }
            v.classification =
                if proven.is_empty() { Classification::Unresolved } else { Classification::Proven(proven) };
        }
        Case::A => run_case_a(&mut v, p, tr, cfg),
    }
    v
}

fn run_case_a(v: &mut Verdict, p: u64, t: u64, cfg: &CriteriaConfig) {
    let mut done: Vec<ConditionId> = Vec::new();
    let groups: Vec<u8> = cfg.groups.iter().copied().collect();
    'groups: for (k, &g) in groups.iter().enumerate() {
        for id in group_conditions(g, cfg.with_b) {
            if done.contains(&id) {
                continue;
            }
            done.push(id);
            let res = run_condition(id, p, t, cfg);
            let proven = res.is_proven();
            v.conditions.push(res);
            // Groups 4 and 5 are not nested, so a proof from one of them
            // only settles the groups that contain it.
            let settles_rest = groups[k..].iter().all(|&h| group_conditions(h, cfg.with_b).contains(&id));
            if proven && !cfg.exhaustive && settles_rest {
                break 'groups;
            }
        }
    }
    let proven: Vec<ConditionId> = v.conditions.iter().filter(|c| c.is_proven()).map(|c| c.id).collect();
    v.group_attained = cfg
        .groups
        .iter()
        .copied()
        .find(|&g| group_conditions(g, cfg.with_b).iter().any(|id| proven.contains(id)));
    let skipped: Vec<String> = v
        .conditions
        .iter()
        .filter_map(|c| match &c.status {
            Status::Skipped(r) => Some(format!("{}: {r}", c.id)),
            _ => None,
        })
        .collect();
    v.classification = if !proven.is_empty() {
        Classification::Proven(proven)
    } else if !skipped.is_empty() {
        Classification::Skipped(skipped.join("; "))
    } else {
        Classification::Unresolved
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> CriteriaConfig {
        CriteriaConfig::default()
    }

    fn st(r: &ConditionResult) -> &'static str {
        r.status.label()
    }

    #[test]
    fn condition_a_examples() {
        assert_eq!(st(&check_a(5, 4)), "Proven");
        assert_eq!(st(&check_a(3, 8)), "Fails");
        // 8 = 7 + 1 is case B for p = 7.
        assert_eq!(st(&check_a(7, 8)), "Inapplicable");
        assert_eq!(st(&check_a(7, 10)), "Proven");
    }

    #[test]
    fn condition_d_examples() {
        assert_eq!(st(&check_d(5, 14)), "Proven");
        assert_eq!(st(&check_d(3, 8)), "Fails");
        assert!(check_d(3, 8).trace.contains("= 6"));
        assert_eq!(st(&check_d(3, 20)), "Fails");
        assert!(check_d(3, 20).trace.contains("= 18"));
    }

    #[test]
    fn condition_e_examples() {
        assert_eq!(st(&check_e(5, 8)), "Fails");
        assert_eq!(st(&check_e(3, 8)), "Fails");
        assert_eq!(st(&check_e(5, 14)), "Fails");
        assert_eq!(st(&check_e(5, 10)), "Inapplicable");
        // ord_11(5) = 5 = (12-2)/2.
        assert_eq!(st(&check_e(5, 12)), "Proven");
    }

    #[test]
    fn condition_f_example() {
        let r = check_f(5, 8);
        assert_eq!(st(&r), "Proven");
        assert!(r.trace.contains("e = gcd(e_7, e_8) = gcd(6, 2) = 2"), "{}", r.trace);
        assert!(r.trace.contains("d = 4"), "{}", r.trace);
    }

    #[test]
    fn condition_g_outside_case_a() {
        assert_eq!(st(&check_g(3, 4, &cfg())), "Inapplicable");
    }

    #[test]
    fn conditions_b_and_c_on_3_14() {
        assert_eq!(st(&check_b(3, 14, &cfg())), "Fails");
        assert_eq!(st(&check_c(3, 14, &cfg())), "Fails");
        assert_eq!(st(&check_c(5, 14, &cfg())), "Proven");
        assert_eq!(st(&check_b(5, 14, &cfg())), "Proven");
        assert_eq!(st(&check_b(3, 15, &cfg())), "Inapplicable");
    }

    #[test]
    fn condition_ahat_examples() {
        // 4 = 3 + 1 is case B; the gcd/irreducibility conjunction is exercised on case A.
        assert_eq!(st(&check_ahat(3, 4, 2, &cfg())), "Inapplicable");
        // gcd(24, 8) = 8 >= 3, but g_8 over F_25 splits.
        let r = check_ahat(5, 8, 2, &cfg());
        assert!(matches!(r.status, Status::Fails | Status::Proven), "{r:?}");
        let small = CriteriaConfig {
            bifactor: BiFactorConfig { degree_cap: 10, ..Default::default() },
            ..cfg()
        };
        assert!(check_ahat(5, 82, 2, &small).is_skipped());
    }

    #[test]
    fn case_b_examples() {
        let [b1, b2] = check_case_b(3, 46);
        assert_eq!((st(&b1), st(&b2)), ("Proven", "Fails"));
        let [b1, b2] = check_case_b(5, 16);
        assert_eq!((st(&b1), st(&b2)), ("Fails", "Fails"));
        let [b1, b2] = check_case_b(5, 76);
        assert_eq!((st(&b1), st(&b2)), ("Fails", "Proven"));
        let [b1, _] = check_case_b(5, 26);
        assert_eq!(st(&b1), "Inapplicable");
    }

    #[test]
    fn verdict_examples() {
        let v = verdict(3, 14, &cfg());
        assert_eq!(v.classification.label(), "Exceptional");
        assert!(v.conditions.is_empty());
        assert_eq!(verdict(5, 9, &cfg()).classification, Classification::ProvenOdd);
        // a comes first in group 1 and already holds; f holds too.
        let v = verdict(5, 8, &cfg());
        assert_eq!(v.classification, Classification::Proven(vec![ConditionId::A]));
        assert_eq!(v.group_attained, Some(1));
        let all = verdict(5, 8, &CriteriaConfig { exhaustive: true, ..cfg() });
        assert!(all.condition(ConditionId::F).unwrap().is_proven());
        let v = verdict(5, 76, &cfg());
        assert_eq!(v.classification, Classification::Proven(vec![ConditionId::B2]));
        assert!(v.notes.iter().any(|n| n.contains("table discrepancy")));
        assert!(verdict(5, 16, &cfg()).is_unresolved());
        assert_eq!(verdict(3, 9, &cfg()).classification.label(), "Skipped");
        let v = verdict(3, 12, &cfg());
        assert_eq!((v.t_reduced, v.classification.label()), (4, "Exceptional"));
    }

    #[test]
    fn exhaustive_mode_agrees_with_short_circuit() {
        let ex = CriteriaConfig { exhaustive: true, groups: [1, 2, 3].into(), ..cfg() };
        let sc = CriteriaConfig { groups: [1, 2, 3].into(), ..cfg() };
        for p in [3u64, 5, 7] {
            for t in (4..=80).step_by(2) {
                let (a, b) = (verdict(p, t, &sc), verdict(p, t, &ex));
                assert_eq!(a.is_proven(), b.is_proven(), "({p},{t})");
                assert_eq!(a.group_attained, b.group_attained, "({p},{t})");
            }
        }
    }

    #[test]
    fn groups_four_and_five_are_tracked_separately() {
        // gcd(24, 82) = 2 and gcd(24, 81) = 3: the gcd leg of ahat(2) holds for (5, 82).
        let c = CriteriaConfig { groups: [4, 5].into(), ..cfg() };
        let v = verdict(5, 82, &c);
        let ran: Vec<ConditionId> = v.conditions.iter().map(|r| r.id).collect();
        assert!(ran.contains(&ConditionId::AHat(2)));
        if v.condition(ConditionId::AHat(2)).unwrap().is_proven() {
            assert!(ran.contains(&ConditionId::AHat(3)));
        }
    }

    #[test]
    fn verdict_json_shape() {
        let v = verdict(5, 8, &cfg());
        let j = serde_json::to_value(&v).unwrap();
        assert_eq!(j["classification"], "Proven");
        assert_eq!(j["case"], "A");
        assert_eq!(j["conditions"][0]["id"], "A.a");
        assert_eq!(j["conditions"][0]["status"], "Proven");
        assert_eq!(j["group_attained"], 1);
        let again = serde_json::to_string(&verdict(5, 8, &cfg())).unwrap();
        assert_eq!(serde_json::to_string(&v).unwrap(), again);
    }
}
