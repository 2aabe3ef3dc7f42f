//! Closed-form partitionability predictions for ring families, checked
//! against the exact solver, plus replays of the explicit partitions used to
//! prove them.
//!
//! Each family pairs a generator of concrete ring specs (bounded by ring
//! order) with a prediction of `ψ_g` and, where a formula is known, `γ_a`.
//! [`run_suite`] evaluates every case and records agreement; disagreements
//! are data, not errors, and carry the solver's evidence.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alliance;
use crate::graph::{VertexSet, ZeroDivisorGraph};
use crate::par;
use crate::partition::{self, verify_certificate, PartitionCertificate, UpperBounds, DEFAULT_MAX_EXACT};
use crate::ring::{is_prime, prime_power, FiniteRing, RingBuilder};
use crate::spec::{self, SpecKind};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "LOCAL_M2")]
    LocalM2,
    #[serde(rename = "ZP2")]
    Zp2,
    #[serde(rename = "ZPN")]
    Zpn,
    #[serde(rename = "Z2xF")]
    Z2xF,
    #[serde(rename = "Z2xLOCAL")]
    Z2xLocal,
    #[serde(rename = "FxK")]
    FxK,
    #[serde(rename = "FxLOCAL")]
    FxLocal,
    #[serde(rename = "IDEAL")]
    Ideal,
    #[serde(rename = "Z2Z2xF")]
    Z2Z2xF,
    #[serde(rename = "Z2xFxK")]
    Z2xFxK,
    #[serde(rename = "GA1")]
    Ga1,
    #[serde(rename = "GA2")]
    Ga2,
}

impl TheoremId {
    pub const ALL: [TheoremId; 12] = [
        TheoremId::LocalM2,
        TheoremId::Zp2,
        TheoremId::Zpn,
        TheoremId::Z2xF,
        TheoremId::Z2xLocal,
        TheoremId::FxK,
        TheoremId::FxLocal,
        TheoremId::Ideal,
        TheoremId::Z2Z2xF,
        TheoremId::Z2xFxK,
        TheoremId::Ga1,
        TheoremId::Ga2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::LocalM2 => "LOCAL_M2",
            TheoremId::Zp2 => "ZP2",
            TheoremId::Zpn => "ZPN",
            TheoremId::Z2xF => "Z2xF",
            TheoremId::Z2xLocal => "Z2xLOCAL",
            TheoremId::FxK => "FxK",
            TheoremId::FxLocal => "FxLOCAL",
            TheoremId::Ideal => "IDEAL",
            TheoremId::Z2Z2xF => "Z2Z2xF",
            TheoremId::Z2xFxK => "Z2xFxK",
            TheoremId::Ga1 => "GA1",
            TheoremId::Ga2 => "GA2",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for TheoremId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown theorem family {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseStatus {
    Pending,
    Match,
    Mismatch,
    Skipped,
}

/// Outcome of replaying a family's explicit partition on one ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionCheck {
    pub classes: usize,
    pub verified: bool,
    pub error: Option<String>,
}

/// What the solver found when a prediction failed: its certificate for the
/// computed value, and the range of class counts it proved infeasible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MismatchEvidence {
    pub certificate: PartitionCertificate,
    /// `(lo, hi)`: no partition into `r` classes exists for `lo ≤ r ≤ hi`.
    pub exhausted: Option<(usize, usize)>,
    pub bounds: UpperBounds,
    pub search_nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCase {
    pub theorem: TheoremId,
    pub spec: String,
    pub ring_order: usize,
    pub vertices: Option<usize>,
    pub predicted_psi_g: usize,
    pub predicted_gamma_a: Option<usize>,
    pub psi_g: Option<usize>,
    pub gamma_a: Option<usize>,
    pub status: CaseStatus,
    pub matched: bool,
    pub note: Option<String>,
    pub construction: Option<ConstructionCheck>,
    pub evidence: Option<MismatchEvidence>,
    pub elapsed_ms: Option<u64>,
}

impl TheoremCase {
    fn new(theorem: TheoremId, spec: String, ring_order: usize, psi: usize, gamma_a: Option<usize>) -> Self {
        TheoremCase {
            theorem,
            spec,
            ring_order,
            vertices: None,
            predicted_psi_g: psi,
            predicted_gamma_a: gamma_a,
            psi_g: None,
            gamma_a: None,
            status: CaseStatus::Pending,
            matched: false,
            note: None,
            construction: None,
            evidence: None,
            elapsed_ms: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub total: usize,
    pub evaluated: usize,
    pub matched: usize,
    pub mismatched: usize,
    pub skipped: usize,
    pub constructions_checked: usize,
    pub constructions_failed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub schema_version: u32,
    pub max_order: usize,
    pub max_exact: usize,
    pub cases: Vec<TheoremCase>,
    pub summary: SuiteSummary,
    pub elapsed_ms: Option<u64>,
}

impl TheoremReport {
    /// Every evaluated case matched and every construction re-verified.
    pub fn all_match(&self) -> bool {
        self.summary.mismatched == 0 && self.summary.constructions_failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &TheoremCase> {
        self.cases
            .iter()
            .filter(|c| c.status == CaseStatus::Mismatch || c.construction.as_ref().is_some_and(|k| !k.verified))
    }

    /// Human-readable table, one row per case, followed by a summary line.
    pub fn to_table(&self) -> String {
        let header = ["theorem", "spec", "|V|", "psi pred", "psi", "gamma_a pred", "gamma_a", "construction", "status"];
        let opt = |v: Option<usize>| v.map_or("-".to_string(), |v| v.to_string());
        let rows: Vec<[String; 9]> = self
            .cases
            .iter()
            .map(|c| {
                let construction = match &c.construction {
                    None => "-".to_string(),
                    Some(k) if k.verified => format!("ok ({})", k.classes),
                    Some(k) => format!("FAILED ({})", k.classes),
                };
                let status = match c.status {
                    CaseStatus::Match => "match".to_string(),
                    CaseStatus::Mismatch => "MISMATCH".to_string(),
                    CaseStatus::Skipped => format!("skipped: {}", c.note.as_deref().unwrap_or("")),
                    CaseStatus::Pending => "pending".to_string(),
                };
                [
                    c.theorem.to_string(),
                    c.spec.clone(),
                    opt(c.vertices),
                    c.predicted_psi_g.to_string(),
                    opt(c.psi_g),
                    opt(c.predicted_gamma_a),
                    opt(c.gamma_a),
                    construction,
                    status,
                ]
            })
            .collect();
        let mut widths = header.map(|h| h.chars().count());
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        let mut line = |cells: &[String]| {
            let parts: Vec<String> = cells
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(i, (c, &w))| if i + 1 == cells.len() { c.clone() } else { format!("{c:<w$}") })
                .collect();
            out.push_str(parts.join("  ").trim_end());
            out.push('\n');
        };
        line(&header.map(String::from));
        for row in &rows {
            line(row);
        }
        out.push_str(&self.summary_line());
        out.push('\n');
        out
    }

    pub fn summary_line(&self) -> String {
        let s = &self.summary;
        let mut line = format!("{}/{} cases match", s.matched, s.evaluated);
        if s.skipped > 0 {
            line.push_str(&format!(", {} skipped above the {}-vertex cap", s.skipped, self.max_exact));
        }
        line.push_str(&format!(
            "; {}/{} constructions verified",
            s.constructions_checked - s.constructions_failed,
            s.constructions_checked
        ));
        line
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteOptions {
    pub max_order: usize,
    pub max_exact: usize,
    pub timing: bool,
    /// Deliberately corrupt one prediction rule, to prove that the harness
    /// notices a broken encoding.
    pub inject_fault: bool,
}

impl SuiteOptions {
    pub fn new(max_order: usize) -> Self {
        SuiteOptions { max_order, max_exact: DEFAULT_MAX_EXACT, timing: false, inject_fault: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("{family} has no explicit partition for {spec}: {reason}")]
    NotApplicable { family: TheoremId, spec: String, reason: String },
}

fn field_spec(q: usize) -> String {
    if is_prime(q as u64) {
        format!("Z{q}")
    } else {
        format!("GF({q})")
    }
}

fn fields_up_to(max: usize) -> Vec<usize> {
    (2..=max).filter(|&q| prime_power(q as u64).is_some()).collect()
}

fn primes_up_to(max: usize) -> Vec<usize> {
    (2..=max).filter(|&p| is_prime(p as u64)).collect()
}

/// A local ring whose maximal ideal squares to zero.
struct LocalM2 {
    spec: String,
    order: usize,
    /// `|M| = |Z(R)|`
    ideal: usize,
}

fn local_m2_rings(max_order: usize) -> Vec<LocalM2> {
    let mut out = Vec::new();
    for p in primes_up_to(max_order) {
        if p * p <= max_order {
            out.push(LocalM2 { spec: format!("Z{}", p * p), order: p * p, ideal: p });
            out.push(LocalM2 { spec: format!("Z{p}[x]/(x^2)"), order: p * p, ideal: p });
        }
    }
    for q in fields_up_to(max_order) {
        let base = field_spec(q);
        let mut n = 1;
        while q.pow(n + 1) <= max_order {
            let spec = if n == 1 { format!("{base}(+){base}") } else { format!("{base}(+){base}^{n}") };
            out.push(LocalM2 { spec, order: q.pow(n + 1), ideal: q.pow(n) });
            n += 1;
        }
    }
    out
}

/// Local rings that are not fields, as `(spec, order)`.
fn local_rings(max_order: usize) -> Vec<(String, usize)> {
    let mut out = Vec::new();
    for p in primes_up_to(max_order) {
        let mut n = 2;
        while p.pow(n) <= max_order {
            out.push((format!("Z{}", p.pow(n)), p.pow(n)));
            out.push((format!("Z{p}[x]/(x^{n})"), p.pow(n)));
            n += 1;
        }
    }
    for r in local_m2_rings(max_order) {
        if r.spec.contains("(+)") {
            out.push((r.spec, r.order));
        }
    }
    out
}

fn ceil_half(n: usize) -> usize {
    n.div_ceil(2)
}

/// Every case whose ring order is at most `max_ring_order`, with predictions
/// filled in and computed fields empty, sorted by theorem id then spec text.
pub fn generate_cases(max_ring_order: usize) -> Vec<TheoremCase> {
    generate_cases_with(max_ring_order, false)
}

fn generate_cases_with(max: usize, inject_fault: bool) -> Vec<TheoremCase> {
    use TheoremId::*;
    let mut cases = Vec::new();
    let mut push = |t, spec: String, order: usize, psi, gamma_a| {
        if order <= max {
            cases.push(TheoremCase::new(t, spec, order, psi, gamma_a));
        }
    };
    let fields = fields_up_to(max);

    // local rings with M² = 0: partitionable iff |M| is odd, γ_a = ⌈(|M|−1)/2⌉
    for r in local_m2_rings(max) {
        let psi = if r.ideal % 2 == 1 { 2 } else { 1 };
        push(LocalM2, r.spec, r.order, psi, Some(ceil_half(r.ideal - 1)));
    }
    for p in primes_up_to(max) {
        push(Zp2, format!("Z{}", p * p), p * p, if p == 2 { 1 } else { 2 }, None);
        let mut n = 3;
        while p.pow(n) <= max {
            let gamma_a = if p == 2 { 1 << (n - 2) } else { ceil_half(p.pow(n - 1) - 1) };
            push(Zpn, format!("Z{}", p.pow(n)), p.pow(n), if p == 2 { 1 } else { 2 }, Some(gamma_a));
            n += 1;
        }
    }
    for &q in &fields {
        push(Z2xF, format!("Z2x{}", field_spec(q)), 2 * q, if q == 2 { 2 } else { 1 }, None);
        push(Z2Z2xF, format!("Z2xZ2x{}", field_spec(q)), 4 * q, if q <= 4 { 2 } else { 1 }, None);
    }
    for (spec, order) in local_rings(max) {
        push(Z2xLocal, format!("Z2x{spec}"), 2 * order, if order == 4 { 2 } else { 1 }, None);
    }
    let big = |q: usize| q >= 3;
    for &f in fields.iter().filter(|&&q| big(q)) {
        for &k in fields.iter().filter(|&&q| q >= f) {
            let special = if inject_fault { f == 3 && k == 3 } else { f == 4 && k == 4 };
            let gamma_a = (f - 1) / 2 + (k - 1) / 2;
            push(
                FxK,
                format!("{}x{}", field_spec(f), field_spec(k)),
                f * k,
                if special { 3 } else { 2 },
                Some(gamma_a),
            );
            push(Z2xFxK, format!("Z2x{}x{}", field_spec(f), field_spec(k)), 2 * f * k, 1, None);
        }
        for r in local_m2_rings(max) {
            let psi = if r.ideal % 2 == 1 { 2 } else { 1 };
            push(FxLocal, format!("{}x{}", field_spec(f), r.spec), f * r.order, psi, None);
        }
    }
    // Z_p × (Z_q (+) Z_q^n), n ≥ 2, with the stated "2 iff q ≠ 2 and n odd"
    for &p in primes_up_to(max).iter().filter(|&&p| p >= 3) {
        for q in primes_up_to(max) {
            let mut n = 2;
            while p * q.pow(n as u32 + 1) <= max {
                let psi = if q != 2 && n % 2 == 1 { 2 } else { 1 };
                push(Ideal, format!("Z{p}xZ{q}(+)Z{q}^{n}"), p * q.pow(n as u32 + 1), psi, None);
                n += 1;
            }
        }
    }
    for (spec, order) in [("Z2xZ2", 4), ("Z9", 9), ("Z3[x]/(x^2)", 9)] {
        push(Ga1, spec.to_string(), order, 2, Some(1));
    }
    for (spec, order) in
        [("Z2xZ4", 8), ("Z2xZ2[x]/(x^2)", 8), ("Z3xZ3", 9), ("Z3xGF(4)", 12), ("Z25", 25), ("Z5[x]/(x^2)", 25)]
    {
        push(Ga2, spec.to_string(), order, 2, Some(2));
    }
    push(Ga2, "GF(4)xGF(4)".to_string(), 16, 3, Some(2));

    cases.sort_by(|a, b| (a.theorem.as_str(), &a.spec).cmp(&(b.theorem.as_str(), &b.spec)));
    cases.dedup_by(|a, b| a.theorem == b.theorem && a.spec == b.spec);
    cases
}

/// Element-level view of a direct product, recovered from its spec.
struct Factors {
    rings: Vec<FiniteRing>,
    radices: Vec<usize>,
}

impl Factors {
    fn of(ring: &FiniteRing) -> Option<Factors> {
        let parsed = spec::parse(ring.spec_text()).ok()?;
        let SpecKind::Product(parts) = parsed.kind else { return None };
        let builder = RingBuilder::with_max_order(ring.order().max(1));
        let rings: Vec<FiniteRing> =
            parts.iter().map(|p| spec::elaborate(p, &builder)).collect::<Result<_, _>>().ok()?;
        let radices = rings.iter().map(FiniteRing::order).collect();
        Some(Factors { rings, radices })
    }

    fn compose(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.radices).fold(0, |acc, (d, r)| acc * r + d)
    }
}

/// Nonzero elements of a field, in index order.
fn nonzero(r: &FiniteRing) -> Vec<usize> {
    (1..r.order()).collect()
}

fn nonzero_zero_divisors(r: &FiniteRing) -> Vec<usize> {
    r.zero_divisors().into_iter().filter(|&x| x != r.zero()).collect()
}

fn is_local_m2(r: &FiniteRing) -> bool {
    let z = r.zero_divisors();
    !r.is_field() && r.is_local() && z.iter().all(|&a| z.iter().all(|&b| r.mul(a, b) == r.zero()))
}

fn split_at_ceil<T: Clone>(items: &[T]) -> (Vec<T>, Vec<T>) {
    let (a, b) = items.split_at(ceil_half(items.len()));
    (a.to_vec(), b.to_vec())
}

fn certificate_from_elements(ring: &FiniteRing, classes: &[Vec<usize>]) -> PartitionCertificate {
    let g = ZeroDivisorGraph::build(ring);
    let position = |x: usize| g.vertices().iter().position(|&v| v == x);
    let sets: Vec<VertexSet> =
        classes.iter().map(|c| VertexSet::from_positions(g.len(), c.iter().filter_map(|&x| position(x)))).collect();
    PartitionCertificate::from_classes(&g, &sets)
}

/// Build the explicit partition a family's proof describes. Where the proof
/// only asks for "a half" of some set, the first `⌈·⌉` elements in index
/// order are taken. The result is not checked here; see
/// [`verify_certificate`].
pub fn construct_known_partition(
    family: TheoremId,
    ring: &FiniteRing,
) -> Result<PartitionCertificate, ConstructionError> {
    let na = |reason: &str| ConstructionError::NotApplicable {
        family,
        spec: ring.spec_text().to_string(),
        reason: reason.to_string(),
    };
    let classes = match family {
        TheoremId::Zpn => {
            let (p, n) = prime_power(ring.order() as u64).ok_or_else(|| na("order is not a prime power"))?;
            let cyclic = ring.labels().iter().enumerate().all(|(i, l)| l == &i.to_string());
            if p == 2 || n < 3 || !cyclic {
                return Err(na("needs Z_{p^n} with p odd and n >= 3"));
            }
            let p = p as usize;
            let (mut s1, mut s2) = (Vec::new(), Vec::new());
            for k in 1..n {
                let pk = p.pow(k);
                let a_k: Vec<usize> = (1..ring.order()).filter(|&x| x % pk == 0 && (x / pk) % p != 0).collect();
                let (h1, h2) = split_at_ceil(&a_k);
                s1.extend(h1);
                s2.extend(h2);
            }
            vec![s1, s2]
        }
        TheoremId::LocalM2 | TheoremId::Zp2 | TheoremId::Ga1 if is_local_m2(ring) => {
            let m = nonzero_zero_divisors(ring);
            if !m.len().is_multiple_of(2) {
                return Err(na("|M| is even"));
            }
            let (s1, s2) = split_at_ceil(&m);
            vec![s1, s2]
        }
        TheoremId::FxK | TheoremId::Ga2
            if Factors::of(ring)
                .is_some_and(|f| f.rings.len() == 2 && f.rings.iter().all(|r| r.is_field() && r.order() >= 3)) =>
        {
            let f = Factors::of(ring).unwrap();
            let (a, b) = (&f.rings[0], &f.rings[1]);
            if a.order() == 4 && b.order() == 4 {
                // {(f_i, 0), (0, k_i)} for the three nonzero elements of each
                (1..4).map(|i| vec![f.compose(&[i, 0]), f.compose(&[0, i])]).collect()
            } else {
                let (fa, ka) = (nonzero(a), nonzero(b));
                let (f1, f2) = fa.split_at((a.order() - 1) / 2);
                let (k1, k2) = ka.split_at((b.order() - 1) / 2);
                let side = |fs: &[usize], ks: &[usize]| {
                    let mut s: Vec<usize> = fs.iter().map(|&x| f.compose(&[x, 0])).collect();
                    s.extend(ks.iter().map(|&y| f.compose(&[0, y])));
                    s
                };
                vec![side(f1, k1), side(f2, k2)]
            }
        }
        TheoremId::FxLocal | TheoremId::Ideal => {
            let f = Factors::of(ring).ok_or_else(|| na("not a direct product"))?;
            if f.rings.len() != 2 || !f.rings[0].is_field() || f.rings[0].order() < 3 || !is_local_m2(&f.rings[1]) {
                return Err(na("needs F x R with |F| >= 3 and R local with M^2 = 0"));
            }
            let (field, local) = (&f.rings[0], &f.rings[1]);
            let z = nonzero_zero_divisors(local);
            if !z.len().is_multiple_of(2) {
                return Err(na("|Z(R)| is even"));
            }
            let (a1, b1) = split_at_ceil(&nonzero(field));
            let (a2, b2) = split_at_ceil(&local.units());
            let (a3, b3) = split_at_ceil(&z);
            // X1×{0} ∪ {0}×X2 ∪ {0}×X3 ∪ X1×Z(R)*: pairing X1 with all of
            // Z(R)* rather than with X3 alone so that the two classes cover
            // F*×Z(R)* between them.
            let side = |x1: &[usize], x2: &[usize], x3: &[usize]| {
                let mut s: Vec<usize> = x1.iter().map(|&x| f.compose(&[x, 0])).collect();
                s.extend(x2.iter().chain(x3).map(|&y| f.compose(&[0, y])));
                s.extend(x1.iter().flat_map(|&x| z.iter().map(move |&y| (x, y))).map(|(x, y)| f.compose(&[x, y])));
                s
            };
            vec![side(&a1, &a2, &a3), side(&b1, &b2, &b3)]
        }
        TheoremId::Z2xLocal | TheoremId::Z2xF | TheoremId::Ga2 => {
            let f = Factors::of(ring).ok_or_else(|| na("not a direct product"))?;
            if f.rings.len() != 2 || f.rings[0].order() != 2 {
                return Err(na("needs Z2 x R"));
            }
            let r = &f.rings[1];
            match r.order() {
                2 => vec![vec![f.compose(&[1, 0])], vec![f.compose(&[0, 1])]],
                4 if !r.is_field() => {
                    let m = nonzero_zero_divisors(r)[0];
                    let units = r.units();
                    vec![
                        vec![f.compose(&[1, 0]), f.compose(&[0, m])],
                        vec![f.compose(&[0, units[0]]), f.compose(&[0, units[1]]), f.compose(&[1, m])],
                    ]
                }
                _ => return Err(na("needs R = Z2 or a local ring of order 4")),
            }
        }
        TheoremId::Z2Z2xF => {
            let f = Factors::of(ring).ok_or_else(|| na("not a direct product"))?;
            let ok = f.rings.len() == 3 && f.rings[0].order() == 2 && f.rings[1].order() == 2 && f.rings[2].is_field();
            if !ok || f.rings[2].order() > 4 {
                return Err(na("needs Z2 x Z2 x F with |F| <= 4"));
            }
            let field = &f.rings[2];
            let c = |a: usize, b: usize, x: usize| f.compose(&[a, b, x]);
            let one = field.one();
            if field.order() == 2 {
                vec![vec![c(1, 0, 0), c(0, 0, 1), c(0, 1, 0)], vec![c(1, 1, 0), c(0, 1, 1), c(1, 0, 1)]]
            } else {
                let mut s1 = vec![c(1, 0, 0), c(0, 1, 0)];
                s1.extend(nonzero(field).into_iter().filter(|&x| x != one).map(|x| c(0, 0, x)));
                let mut s2 = vec![c(0, 0, one), c(1, 1, 0)];
                s2.extend(nonzero(field).into_iter().map(|x| c(0, 1, x)));
                s2.extend(nonzero(field).into_iter().map(|x| c(1, 0, x)));
                vec![s1, s2]
            }
        }
        _ => return Err(na("no explicit partition is given for this case")),
    };
    Ok(certificate_from_elements(ring, &classes))
}

fn has_construction(case: &TheoremCase) -> bool {
    case.predicted_psi_g >= 2
        && matches!(
            case.theorem,
            TheoremId::LocalM2
                | TheoremId::Zp2
                | TheoremId::Zpn
                | TheoremId::Z2xF
                | TheoremId::Z2xLocal
                | TheoremId::FxK
                | TheoremId::FxLocal
                | TheoremId::Ideal
                | TheoremId::Z2Z2xF
        )
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

fn evaluate(mut case: TheoremCase, opts: &SuiteOptions) -> TheoremCase {
    let start = Instant::now();
    let builder = RingBuilder::with_max_order(opts.max_order.max(case.ring_order));
    let ring = match spec::build(&case.spec, &builder) {
        Ok(r) => r,
        Err(e) => {
            case.status = CaseStatus::Mismatch;
            case.note = Some(format!("could not build ring: {e}"));
            return case;
        }
    };
    let g = ZeroDivisorGraph::build(&ring);
    case.vertices = Some(g.len());

    if has_construction(&case) {
        case.construction = Some(match construct_known_partition(case.theorem, &ring) {
            Ok(cert) => {
                let verdict = verify_certificate(&g, &cert);
                ConstructionCheck {
                    classes: cert.len(),
                    verified: verdict.is_ok(),
                    error: verdict.err().map(|e| e.to_string()),
                }
            }
            Err(e) => ConstructionCheck { classes: 0, verified: false, error: Some(e.to_string()) },
        });
    }

    let cap = opts.max_exact.min(alliance::MAX_SEARCH_VERTICES);
    if g.len() > cap {
        case.status = CaseStatus::Skipped;
        case.note = Some(format!("|V| = {} > {cap}", g.len()));
    } else {
        match alliance::alliance_number(&g)
            .map_err(partition::SolverError::from)
            .and_then(|(ga, _)| partition::solve_psi_g_with(&g, ga))
        {
            Ok(sol) => {
                case.psi_g = Some(sol.value);
                case.gamma_a = Some(sol.gamma_a);
                let psi_ok = sol.value == case.predicted_psi_g;
                let ga_ok = case.predicted_gamma_a.is_none_or(|p| p == sol.gamma_a);
                let construction_ok = case.construction.as_ref().is_none_or(|k| !k.verified || k.classes <= sol.value);
                case.matched = psi_ok && ga_ok && construction_ok;
                case.status = if case.matched { CaseStatus::Match } else { CaseStatus::Mismatch };
                if !case.matched {
                    let bound = sol.bounds.combined();
                    case.evidence = Some(MismatchEvidence {
                        exhausted: (bound > sol.value).then_some((sol.value + 1, bound)),
                        certificate: sol.certificate,
                        bounds: sol.bounds,
                        search_nodes: sol.nodes,
                    });
                }
            }
            Err(e) => {
                case.status = CaseStatus::Mismatch;
                case.note = Some(e.to_string());
            }
        }
    }
    if opts.timing {
        case.elapsed_ms = Some(elapsed_ms(start));
    }
    case
}

/// Evaluate every generated case. Cases run independently (in parallel when
/// enabled); the report keeps the generator's order.
pub fn run_suite(opts: &SuiteOptions) -> TheoremReport {
    let start = Instant::now();
    let cases = generate_cases_with(opts.max_order, opts.inject_fault);
    let cases = par::map(&cases, |c| evaluate(c.clone(), opts));
    let mut summary = SuiteSummary { total: cases.len(), ..Default::default() };
    for c in &cases {
        match c.status {
            CaseStatus::Match => summary.matched += 1,
            CaseStatus::Mismatch => summary.mismatched += 1,
            CaseStatus::Skipped => summary.skipped += 1,
            CaseStatus::Pending => {}
        }
        if let Some(k) = &c.construction {
            summary.constructions_checked += 1;
            summary.constructions_failed += usize::from(!k.verified);
        }
    }
    summary.evaluated = summary.matched + summary.mismatched;
    TheoremReport {
        schema_version: REPORT_SCHEMA_VERSION,
        max_order: opts.max_order,
        max_exact: opts.max_exact,
        cases,
        summary,
        elapsed_ms: opts.timing.then(|| elapsed_ms(start)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(text: &str) -> FiniteRing {
        spec::build(text, &RingBuilder::new()).unwrap()
    }

    fn find<'a>(cases: &'a [TheoremCase], t: TheoremId, spec: &str) -> Option<&'a TheoremCase> {
        cases.iter().find(|c| c.theorem == t && c.spec == spec)
    }

    #[test]
    fn generator_examples() {
        let at64 = generate_cases(64);
        assert_eq!(find(&at64, TheoremId::FxK, "GF(4)xGF(4)").unwrap().predicted_psi_g, 3);
        assert_eq!(find(&at64, TheoremId::Z2Z2xF, "Z2xZ2xZ5").unwrap().predicted_psi_g, 1);
        let at128 = generate_cases(128);
        assert_eq!(find(&at128, TheoremId::FxLocal, "Z3xZ9").unwrap().predicted_psi_g, 2);
        assert_eq!(find(&at128, TheoremId::FxLocal, "Z3xZ4").unwrap().predicted_psi_g, 1);
        assert!(generate_cases(16).iter().all(|c| c.ring_order <= 16));
    }

    #[test]
    fn generator_is_sorted_and_every_spec_parses() {
        let cases = generate_cases(64);
        let keys: Vec<_> = cases.iter().map(|c| (c.theorem.as_str(), c.spec.clone())).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        for c in &cases {
            let r = spec::build(&c.spec, &RingBuilder::with_max_order(64)).unwrap();
            assert_eq!(r.order(), c.ring_order, "{}", c.spec);
            assert_eq!(r.spec_text(), c.spec, "generator specs are canonical");
        }
    }

    #[test]
    fn gamma_a_predictions_follow_quoted_formulas() {
        let cases = generate_cases(64);
        let ga = |t, s| find(&cases, t, s).unwrap().predicted_gamma_a;
        assert_eq!(ga(TheoremId::Zpn, "Z8"), Some(2));
        assert_eq!(ga(TheoremId::Zpn, "Z16"), Some(4));
        assert_eq!(ga(TheoremId::Zpn, "Z27"), Some(4));
        assert_eq!(ga(TheoremId::FxK, "Z3xZ7"), Some(4));
    }

    #[test]
    fn construction_examples() {
        let z27 = ring("Z27");
        let cert = construct_known_partition(TheoremId::Zpn, &z27).unwrap();
        let sizes: Vec<usize> = cert.classes.iter().map(|c| c.members.len()).collect();
        assert_eq!(sizes, vec![4, 4]);
        verify_certificate(&ZeroDivisorGraph::build(&z27), &cert).unwrap();

        let r = ring("Z2xZ4");
        let cert = construct_known_partition(TheoremId::Z2xLocal, &r).unwrap();
        let labels: Vec<Vec<String>> = cert.classes.iter().map(|c| c.labels.clone()).collect();
        assert_eq!(labels, vec![vec!["(0,2)", "(1,0)"], vec!["(0,1)", "(0,3)", "(1,2)"]]);
        verify_certificate(&ZeroDivisorGraph::build(&r), &cert).unwrap();

        let q = ring("Z3[x]/(x^2)");
        let cert = construct_known_partition(TheoremId::LocalM2, &q).unwrap();
        let labels: Vec<Vec<String>> = cert.classes.iter().map(|c| c.labels.clone()).collect();
        assert_eq!(labels, vec![vec!["x"], vec!["2x"]]);
    }

    #[test]
    fn constructions_reject_non_partitionable_cases() {
        assert!(construct_known_partition(TheoremId::Zpn, &ring("Z8")).is_err());
        assert!(construct_known_partition(TheoremId::LocalM2, &ring("Z4")).is_err());
        assert!(construct_known_partition(TheoremId::FxLocal, &ring("Z3xZ4")).is_err());
        assert!(construct_known_partition(TheoremId::Z2xFxK, &ring("Z2xZ3xZ3")).is_err());
    }

    #[test]
    fn small_suite_all_match() {
        let report = run_suite(&SuiteOptions::new(16));
        assert!(report.all_match(), "{}", report.to_table());
        assert_eq!(report.summary.skipped, 0);
        assert!(report.summary.evaluated > 10);
    }

    #[test]
    fn injected_fault_is_caught() {
        let opts = SuiteOptions { inject_fault: true, ..SuiteOptions::new(16) };
        let report = run_suite(&opts);
        assert!(!report.all_match());
        let bad: Vec<&str> = report.failures().map(|c| c.spec.as_str()).collect();
        assert!(bad.contains(&"Z3xZ3"), "{bad:?}");
    }
}
