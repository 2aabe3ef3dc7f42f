//! One-ring analysis: spec → ring → graph → γ, γ_a, ψ_g, with bounds,
//! certificate re-verification and per-stage timing.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::alliance::{self, AllianceError};
use crate::graph::ZeroDivisorGraph;
use crate::partition::{self, verify_certificate, CertificateError, PartitionCertificate, SolverError};
use crate::ring::{FiniteRing, RingBuilder, RingError};
use crate::spec::{self, ParseError};

pub const ANALYSIS_SCHEMA_VERSION: u32 = 1;

/// `ψ_g` as reported: a number, or why there is none.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsiValue {
    Value(usize),
    UndefinedEmptyGraph,
    NotComputedCap,
}

impl PsiValue {
    pub fn value(self) -> Option<usize> {
        match self {
            PsiValue::Value(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for PsiValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PsiValue::Value(v) => write!(f, "{v}"),
            PsiValue::UndefinedEmptyGraph => f.write_str("undefined (empty graph)"),
            PsiValue::NotComputedCap => f.write_str("not computed (cap)"),
        }
    }
}

impl Serialize for PsiValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            PsiValue::Value(v) => s.serialize_u64(*v as u64),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for PsiValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(usize),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(v) => Ok(PsiValue::Value(v)),
            Raw::S(s) if s == "undefined (empty graph)" => Ok(PsiValue::UndefinedEmptyGraph),
            Raw::S(s) if s == "not computed (cap)" => Ok(PsiValue::NotComputedCap),
            Raw::S(s) => Err(serde::de::Error::custom(format!("unexpected psi_g value {s:?}"))),
        }
    }
}

/// The upper bounds on `ψ_g`; the `γ_a` product term is absent when `γ_a`
/// was not computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundBreakdown {
    pub quadratic: usize,
    pub gamma_a_product: Option<usize>,
    pub min_degree: usize,
    pub combined: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageTimings {
    pub parse_us: u64,
    pub ring_us: u64,
    pub graph_us: u64,
    pub domination_us: u64,
    pub alliance_us: u64,
    pub partition_us: u64,
    pub verify_us: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub spec_text: String,
    pub ring_order: usize,
    pub zero_divisors: usize,
    pub vertices: usize,
    pub edges: usize,
    pub graph_hash: String,
    pub min_degree: Option<usize>,
    pub domination_number: Option<usize>,
    pub gamma_a: Option<usize>,
    pub psi_g: PsiValue,
    pub upper_bounds: Option<BoundBreakdown>,
    /// Class labels of the partition realising `ψ_g`.
    pub partition: Option<Vec<Vec<String>>>,
    pub certificate: Option<PartitionCertificate>,
    pub oracle_psi_g: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<StageTimings>,
}

impl AnalysisReport {
    /// Short human-readable summary.
    pub fn to_text(&self) -> String {
        let opt = |v: Option<usize>| v.map_or("-".to_string(), |v| v.to_string());
        let mut out = String::new();
        let mut row = |k: &str, v: String| out.push_str(&format!("{k:<12}{v}\n"));
        row("ring", self.spec_text.clone());
        row("order", self.ring_order.to_string());
        row("|Z(R)|", self.zero_divisors.to_string());
        row("|V|", format!("{} ({} edges)", self.vertices, self.edges));
        row("delta", opt(self.min_degree));
        row("gamma", opt(self.domination_number));
        row("gamma_a", opt(self.gamma_a));
        row("psi_g", self.psi_g.to_string());
        if let Some(b) = &self.upper_bounds {
            row(
                "bounds",
                format!(
                    "quadratic {}, gamma_a-product {}, min-degree {} => {}",
                    b.quadratic,
                    opt(b.gamma_a_product),
                    b.min_degree,
                    b.combined
                ),
            );
        }
        if let Some(p) = &self.partition {
            let classes: Vec<String> = p.iter().map(|c| format!("{{{}}}", c.join(", "))).collect();
            row("partition", classes.join(" | "));
        }
        if let Some(o) = self.oracle_psi_g {
            row("oracle", format!("psi_g = {o} (exhaustive)"));
        }
        if let Some(t) = &self.timing {
            row(
                "timing",
                format!(
                    "parse {}us, ring {}us, graph {}us, gamma {}us, gamma_a {}us, psi_g {}us, verify {}us",
                    t.parse_us, t.ring_us, t.graph_us, t.domination_us, t.alliance_us, t.partition_us, t.verify_us
                ),
            );
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub max_order: usize,
    pub max_exact: usize,
    pub oracle: bool,
    pub certificate: bool,
    pub timing: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            max_order: crate::ring::DEFAULT_MAX_ORDER,
            max_exact: partition::DEFAULT_MAX_EXACT,
            oracle: false,
            certificate: false,
            timing: true,
        }
    }
}

#[derive(Debug, Error)]
pub enum AnalyzeError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("certificate failed re-verification: {0}")]
    Certificate(#[from] CertificateError),
    #[error("solver and exhaustive oracle disagree: psi_g {solver} vs {oracle}")]
    OracleDisagreement { solver: usize, oracle: usize },
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Alliance(#[from] AllianceError),
}

fn micros(start: Instant) -> u64 {
    start.elapsed().as_micros() as u64
}

/// Run the full pipeline on one ring spec.
pub fn analyze(text: &str, opts: &AnalyzeOptions) -> Result<AnalysisReport, AnalyzeError> {
    let mut t = StageTimings::default();
    let clock = Instant::now();
    let parsed = spec::parse(text)?;
    t.parse_us = micros(clock);

    let clock = Instant::now();
    let ring = spec::elaborate(&parsed, &RingBuilder::with_max_order(opts.max_order))?;
    t.ring_us = micros(clock);

    analyze_ring(&ring, opts, t)
}

fn analyze_ring(ring: &FiniteRing, opts: &AnalyzeOptions, mut t: StageTimings) -> Result<AnalysisReport, AnalyzeError> {
    let clock = Instant::now();
    let g = ZeroDivisorGraph::build(ring);
    t.graph_us = micros(clock);

    let mut report = AnalysisReport {
        schema_version: ANALYSIS_SCHEMA_VERSION,
        spec_text: ring.spec_text().to_string(),
        ring_order: ring.order(),
        zero_divisors: g.len() + 1,
        vertices: g.len(),
        edges: g.edge_count(),
        graph_hash: g.hash(),
        min_degree: g.min_degree().ok(),
        domination_number: None,
        gamma_a: None,
        psi_g: PsiValue::UndefinedEmptyGraph,
        upper_bounds: None,
        partition: None,
        certificate: None,
        oracle_psi_g: None,
        timing: None,
    };
    if g.is_empty() {
        report.timing = opts.timing.then_some(t);
        return Ok(report);
    }

    let delta = report.min_degree.unwrap_or(0);
    let within_cap = g.len() <= opts.max_exact && g.len() <= alliance::MAX_SEARCH_VERTICES;
    if within_cap {
        let clock = Instant::now();
        report.domination_number = Some(alliance::domination_number(&g)?.0);
        t.domination_us = micros(clock);
        let clock = Instant::now();
        report.gamma_a = Some(alliance::alliance_number(&g)?.0);
        t.alliance_us = micros(clock);
    }
    let quadratic = partition::quadratic_bound(g.len());
    let min_degree = partition::min_degree_bound(delta);
    let gamma_a_product = report.gamma_a.map(|ga| g.len() / ga);
    report.upper_bounds = Some(BoundBreakdown {
        quadratic,
        gamma_a_product,
        min_degree,
        combined: quadratic.min(min_degree).min(gamma_a_product.unwrap_or(usize::MAX)).max(1),
    });

    let Some(gamma_a) = report.gamma_a else {
        report.psi_g = PsiValue::NotComputedCap;
        report.timing = opts.timing.then_some(t);
        return Ok(report);
    };

    let clock = Instant::now();
    let sol = partition::solve_psi_g_with(&g, gamma_a)?;
    t.partition_us = micros(clock);

    let clock = Instant::now();
    verify_certificate(&g, &sol.certificate)?;
    if opts.oracle && g.len() <= partition::DEFAULT_ORACLE_CAP {
        let oracle = partition::psi_g_bruteforce(&g)?;
        report.oracle_psi_g = Some(oracle);
        if oracle != sol.value {
            return Err(AnalyzeError::OracleDisagreement { solver: sol.value, oracle });
        }
    }
    t.verify_us = micros(clock);

    report.psi_g = PsiValue::Value(sol.value);
    report.partition = Some(sol.certificate.classes.iter().map(|c| c.labels.clone()).collect());
    if opts.certificate {
        report.certificate = Some(sol.certificate);
    }
    report.timing = opts.timing.then_some(t);
    Ok(report)
}
