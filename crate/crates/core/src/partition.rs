//! Exact computation of `ψ_g`, the largest number of classes in a partition
//! of the vertex set into global defensive alliances.
//!
//! The solver is a backtracking search over class assignments. Vertices are
//! visited in ascending degree order (ties by position); the first one is
//! pinned to class 0 and a vertex may only open the next unused class, which
//! removes the relabelling symmetry. Each node propagates forced moves and
//! prunes on:
//!
//! * defense: a member `v` of class `c` with `2·|N(v) ∩ other classes| > deg(v)+1`;
//! * domination: a vertex whose remaining candidate dominators cannot cover
//!   every class it still needs a neighbor in;
//! * size: every class needs at least `max(γ_a, ⌈(deg v + 1)/2⌉ for v in it)`
//!   vertices, and the unassigned pool must cover the deficits.
//!
//! All rules only discard assignments that cannot be completed, so a `None`
//! from [`find_partition`] is a proof of nonexistence.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alliance::{self, is_gda_mask, is_global_defensive_alliance, AllianceError};
use crate::graph::{VertexSet, ZeroDivisorGraph};

/// Default vertex cap for exact `ψ_g` solves.
pub const DEFAULT_MAX_EXACT: usize = 28;
/// Default vertex cap for the set-partition oracle.
pub const DEFAULT_ORACLE_CAP: usize = 10;
const MAX_CLASSES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("graph has no vertices; ψ_g is undefined")]
    EmptyGraph,
    #[error("graph has {n} vertices, above the exact-solve cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("graph has {n} vertices, above the oracle cap {cap}")]
    OracleCap { n: usize, cap: usize },
    #[error("class count must be at least 1")]
    ZeroClasses,
    #[error(transparent)]
    Alliance(#[from] AllianceError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("certificate was issued for graph {expected}, not {got}")]
    GraphMismatch { expected: String, got: String },
    #[error("class {0} is empty")]
    EmptyClass(usize),
    #[error("vertex {0} appears in more than one class")]
    Overlap(usize),
    #[error("vertex {0} is not covered")]
    Uncovered(usize),
    #[error("vertex {0} is out of range")]
    OutOfRange(usize),
    #[error("class {0} is not a global defensive alliance")]
    NotAlliance(usize),
    #[error("class {class}: recorded witness data for vertex {vertex} is wrong")]
    BadWitness { class: usize, vertex: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDefense {
    pub vertex: usize,
    /// `deg_S(v)`
    pub inside: usize,
    /// `deg_{S̄}(v)`
    pub outside: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Domination {
    pub vertex: usize,
    pub dominator: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateClass {
    pub members: Vec<usize>,
    pub labels: Vec<String>,
    pub defense: Vec<VertexDefense>,
    /// Each vertex outside the class paired with its first neighbor inside.
    pub dominators: Vec<Domination>,
}

/// A partition of `V` into global defensive alliances, annotated so that a
/// reader can re-check every class without trusting the solver.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionCertificate {
    pub ring_spec: String,
    pub graph_hash: String,
    pub classes: Vec<CertificateClass>,
}

impl PartitionCertificate {
    /// Annotate a list of classes. No validity checking happens here.
    pub fn from_classes(g: &ZeroDivisorGraph, classes: &[VertexSet]) -> Self {
        let classes = classes
            .iter()
            .map(|s| {
                let out = s.complement();
                CertificateClass {
                    members: s.to_vec(),
                    labels: s.iter().map(|v| g.label(v).to_string()).collect(),
                    defense: s
                        .iter()
                        .map(|v| VertexDefense {
                            vertex: v,
                            inside: g.deg_in(s, v).unwrap_or(0),
                            outside: g.deg_in(&out, v).unwrap_or(0),
                        })
                        .collect(),
                    dominators: out
                        .iter()
                        .filter_map(|v| {
                            let nb = g.neighborhood(v).ok()?.intersection(s);
                            let first = nb.iter().next();
                            first.map(|d| Domination { vertex: v, dominator: d })
                        })
                        .collect(),
                }
            })
            .collect();
        PartitionCertificate { ring_spec: g.ring_spec().to_string(), graph_hash: g.hash(), classes }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_sets(&self, width: usize) -> Vec<VertexSet> {
        self.classes.iter().map(|c| VertexSet::from_positions(width, c.members.iter().copied())).collect()
    }
}

/// Re-check a certificate against the graph using only the alliance
/// predicates: disjoint nonempty classes covering `V`, every class a global
/// defensive alliance, and every recorded degree and dominator correct.
pub fn verify_certificate(g: &ZeroDivisorGraph, cert: &PartitionCertificate) -> Result<(), CertificateError> {
    let hash = g.hash();
    if cert.graph_hash != hash {
        return Err(CertificateError::GraphMismatch { expected: cert.graph_hash.clone(), got: hash });
    }
    let n = g.len();
    let mut owner = vec![None; n];
    for (ci, class) in cert.classes.iter().enumerate() {
        if class.members.is_empty() {
            return Err(CertificateError::EmptyClass(ci));
        }
        for &v in &class.members {
            if v >= n {
                return Err(CertificateError::OutOfRange(v));
            }
            if owner[v].replace(ci).is_some() {
                return Err(CertificateError::Overlap(v));
            }
        }
    }
    if let Some(v) = owner.iter().position(Option::is_none) {
        return Err(CertificateError::Uncovered(v));
    }
    for (ci, class) in cert.classes.iter().enumerate() {
        let s = VertexSet::from_positions(n, class.members.iter().copied());
        if !is_global_defensive_alliance(g, &s).map_err(|_| CertificateError::NotAlliance(ci))? {
            return Err(CertificateError::NotAlliance(ci));
        }
        let out = s.complement();
        if class.defense.len() != class.members.len() {
            return Err(CertificateError::BadWitness { class: ci, vertex: class.members[0] });
        }
        for d in &class.defense {
            let ok = s.contains(d.vertex)
                && g.deg_in(&s, d.vertex).ok() == Some(d.inside)
                && g.deg_in(&out, d.vertex).ok() == Some(d.outside)
                && d.inside + 1 >= d.outside;
            if !ok {
                return Err(CertificateError::BadWitness { class: ci, vertex: d.vertex });
            }
        }
        let mut dominated = VertexSet::empty(n);
        for d in &class.dominators {
            let ok = d.vertex < n
                && d.dominator < n
                && !s.contains(d.vertex)
                && s.contains(d.dominator)
                && g.is_edge(d.vertex, d.dominator);
            if !ok {
                return Err(CertificateError::BadWitness { class: ci, vertex: d.vertex });
            }
            dominated.insert(d.vertex);
        }
        let undominated = out.iter().find(|&v| !dominated.contains(v));
        if let Some(v) = undominated {
            return Err(CertificateError::BadWitness { class: ci, vertex: v });
        }
    }
    Ok(())
}

/// The three upper bounds on `ψ_g` and their minimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpperBounds {
    /// Largest `r` with `r² − r ≤ |V|`.
    pub quadratic: usize,
    /// `⌊|V| / γ_a⌋`.
    pub gamma_a_product: usize,
    /// `⌊(δ + 3) / 2⌋`.
    pub min_degree: usize,
}

impl UpperBounds {
    pub fn combined(&self) -> usize {
        self.quadratic.min(self.gamma_a_product).min(self.min_degree).max(1)
    }
}

/// Largest `r` with `r² − r ≤ vertices`.
pub fn quadratic_bound(vertices: usize) -> usize {
    let mut r = 1;
    while (r + 1) * r <= vertices {
        r += 1;
    }
    r
}

pub fn min_degree_bound(delta: usize) -> usize {
    (delta + 3) / 2
}

pub fn psi_g_upper_bounds(g: &ZeroDivisorGraph, gamma_a: usize) -> UpperBounds {
    let n = g.len();
    UpperBounds {
        quadratic: quadratic_bound(n),
        gamma_a_product: n / gamma_a.max(1),
        min_degree: min_degree_bound(g.min_degree().unwrap_or(0)),
    }
}

/// `min` of the three bounds, never below 1.
pub fn psi_g_upper_bound(g: &ZeroDivisorGraph, gamma_a: usize) -> usize {
    psi_g_upper_bounds(g, gamma_a).combined()
}

#[derive(Clone, Copy)]
struct State {
    classes: [u64; MAX_CLASSES],
    touched: usize,
    unassigned: u64,
}

struct Solver<'a> {
    adj: &'a [u64],
    degrees: Vec<u32>,
    /// `⌈(deg v + 1)/2⌉`: the smallest class that can hold `v`.
    need: Vec<u32>,
    full: u64,
    order: Vec<usize>,
    r: usize,
    min_class: u32,
    nodes: u64,
}

impl<'a> Solver<'a> {
    fn new(adj: &'a [u64], r: usize, min_class: usize) -> Self {
        let n = adj.len();
        let degrees: Vec<u32> = adj.iter().map(|m| m.count_ones()).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (degrees[v], v));
        Solver {
            adj,
            need: degrees.iter().map(|d| (d + 2) / 2).collect(),
            degrees,
            full: if n == 64 { u64::MAX } else { (1u64 << n) - 1 },
            order,
            r,
            min_class: min_class.max(1) as u32,
            nodes: 0,
        }
    }

    fn class_of(&self, st: &State, v: usize) -> Option<usize> {
        (0..st.touched).find(|&c| st.classes[c] >> v & 1 == 1)
    }

    /// Apply forced moves until a fixpoint; `false` means the state cannot
    /// be completed.
    fn propagate(&self, st: &mut State) -> bool {
        loop {
            let mut changed = false;
            let u_mask = st.unassigned;
            let mut deficit = (self.r - st.touched) as u32 * self.min_class;
            for c in 0..st.touched {
                let s = st.classes[c];
                let other = self.full & !u_mask & !s;
                let mut need = self.min_class;
                let mut rest = s;
                while rest != 0 {
                    let v = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    need = need.max(self.need[v]);
                    let out = (self.adj[v] & other).count_ones();
                    let slack = self.degrees[v] + 1;
                    if 2 * out > slack {
                        return false;
                    }
                    let free = self.adj[v] & st.unassigned;
                    if free != 0 && 2 * (out + 1) > slack {
                        // any free neighbor placed elsewhere breaks v's defense
                        st.classes[c] |= free;
                        st.unassigned &= !free;
                        changed = true;
                    }
                }
                deficit += need.saturating_sub(s.count_ones());
            }
            if changed {
                continue;
            }
            if deficit > st.unassigned.count_ones() {
                return false;
            }
            // every vertex needs a neighbor in each class other than its own
            for v in 0..self.adj.len() {
                let nb = self.adj[v];
                let free = nb & st.unassigned;
                let own = if st.unassigned >> v & 1 == 1 { None } else { self.class_of(st, v) };
                let mut lacking = (self.r - st.touched) as u32;
                let mut forced: Option<usize> = None;
                for c in 0..st.touched {
                    if Some(c) == own || nb & st.classes[c] != 0 {
                        continue;
                    }
                    lacking += 1;
                    if own.is_some() && free.count_ones() == 1 {
                        forced = Some(c);
                    }
                }
                let available = free.count_ones() + u32::from(own.is_none());
                if lacking > available {
                    return false;
                }
                if let (Some(c), true) = (forced, lacking == 1) {
                    st.classes[c] |= free;
                    st.unassigned &= !free;
                    changed = true;
                    break;
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn search(&mut self, mut st: State) -> Option<State> {
        self.nodes += 1;
        if !self.propagate(&mut st) {
            return None;
        }
        if st.unassigned == 0 {
            let complete =
                st.touched == self.r && st.classes[..self.r].iter().all(|&s| is_gda_mask(self.adj, self.full, s));
            return complete.then_some(st);
        }
        let v = *self.order.iter().find(|&&v| st.unassigned >> v & 1 == 1).unwrap();
        let bit = 1u64 << v;
        let limit = if st.touched < self.r { st.touched + 1 } else { st.touched };
        for c in 0..limit {
            let mut next = st;
            next.classes[c] |= bit;
            next.unassigned &= !bit;
            if c == st.touched {
                next.touched += 1;
            }
            if let Some(done) = self.search(next) {
                return Some(done);
            }
        }
        None
    }

    fn solve(&mut self) -> Option<Vec<u64>> {
        let first = self.order[0];
        let mut st = State { classes: [0; MAX_CLASSES], touched: 1, unassigned: self.full & !(1u64 << first) };
        st.classes[0] = 1 << first;
        self.search(st).map(|s| s.classes[..self.r].to_vec())
    }
}

/// Search statistics from the last solve, for benchmarks and diagnostics.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub nodes: u64,
}

fn solver_adjacency(g: &ZeroDivisorGraph) -> Result<Vec<u64>, SolverError> {
    if g.is_empty() {
        return Err(SolverError::EmptyGraph);
    }
    g.masks().ok_or(SolverError::TooLarge { n: g.len(), cap: alliance::MAX_SEARCH_VERTICES })
}

/// Find a partition of `V` into exactly `r` global defensive alliances.
/// `Ok(None)` is returned only after the search space is exhausted.
pub fn find_partition(g: &ZeroDivisorGraph, r: usize) -> Result<Option<PartitionCertificate>, SolverError> {
    find_partition_with(g, r, 1).map(|(c, _)| c)
}

/// As [`find_partition`], with a known lower bound on the size of any global
/// defensive alliance (for instance `γ_a`).
pub fn find_partition_with(
    g: &ZeroDivisorGraph,
    r: usize,
    min_class: usize,
) -> Result<(Option<PartitionCertificate>, SolveStats), SolverError> {
    if r == 0 {
        return Err(SolverError::ZeroClasses);
    }
    let adj = solver_adjacency(g)?;
    let n = adj.len();
    if r > n || r > MAX_CLASSES || r * min_class > n {
        return Ok((None, SolveStats::default()));
    }
    if r == 1 {
        let cert = PartitionCertificate::from_classes(g, &[VertexSet::full(n)]);
        return Ok((Some(cert), SolveStats::default()));
    }
    let mut solver = Solver::new(&adj, r, min_class);
    let found = solver.solve();
    let stats = SolveStats { nodes: solver.nodes };
    Ok((
        found.map(|masks| {
            let sets: Vec<VertexSet> = masks.into_iter().map(|m| VertexSet::from_mask(n, m)).collect();
            PartitionCertificate::from_classes(g, &sets)
        }),
        stats,
    ))
}

/// Result of an exact `ψ_g` computation.
#[derive(Clone, Debug)]
pub struct PsiSolution {
    pub value: usize,
    pub certificate: PartitionCertificate,
    pub gamma_a: usize,
    pub bounds: UpperBounds,
    pub nodes: u64,
}

/// `ψ_g(Γ)` with a certificate, searching downward from the upper bound.
/// Merging two classes of a valid partition gives another valid partition,
/// so the first feasible `r` is the maximum.
pub fn psi_g(g: &ZeroDivisorGraph) -> Result<(usize, PartitionCertificate), SolverError> {
    solve_psi_g(g, DEFAULT_MAX_EXACT.max(g.len())).map(|s| (s.value, s.certificate))
}

/// `ψ_g` under a vertex cap, computing `γ_a` along the way.
pub fn solve_psi_g(g: &ZeroDivisorGraph, max_exact: usize) -> Result<PsiSolution, SolverError> {
    if g.is_empty() {
        return Err(SolverError::EmptyGraph);
    }
    if g.len() > max_exact {
        return Err(SolverError::TooLarge { n: g.len(), cap: max_exact });
    }
    let (gamma_a, _) = alliance::alliance_number(g)?;
    solve_psi_g_with(g, gamma_a)
}

/// `ψ_g` given an already computed `γ_a`.
pub fn solve_psi_g_with(g: &ZeroDivisorGraph, gamma_a: usize) -> Result<PsiSolution, SolverError> {
    let bounds = psi_g_upper_bounds(g, gamma_a);
    let mut nodes = 0;
    for r in (2..=bounds.combined()).rev() {
        let (found, stats) = find_partition_with(g, r, gamma_a)?;
        nodes += stats.nodes;
        if let Some(certificate) = found {
            return Ok(PsiSolution { value: r, certificate, gamma_a, bounds, nodes });
        }
    }
    let certificate = PartitionCertificate::from_classes(g, &[VertexSet::full(g.len())]);
    Ok(PsiSolution { value: 1, certificate, gamma_a, bounds, nodes })
}

/// Ground-truth `ψ_g` by enumerating every set partition of `V`
/// (restricted growth strings) and checking each class directly.
pub fn psi_g_bruteforce(g: &ZeroDivisorGraph) -> Result<usize, SolverError> {
    psi_g_bruteforce_capped(g, DEFAULT_ORACLE_CAP)
}

pub fn psi_g_bruteforce_capped(g: &ZeroDivisorGraph, cap: usize) -> Result<usize, SolverError> {
    let n = g.len();
    if n == 0 {
        return Err(SolverError::EmptyGraph);
    }
    if n > cap {
        return Err(SolverError::OracleCap { n, cap });
    }
    let mut rgs = vec![0usize; n];
    let mut best = 0;
    loop {
        let blocks = rgs.iter().max().unwrap() + 1;
        if blocks > best {
            let ok = (0..blocks).all(|b| {
                let s = VertexSet::from_positions(n, (0..n).filter(|&v| rgs[v] == b));
                is_global_defensive_alliance(g, &s).unwrap_or(false)
            });
            if ok {
                best = blocks;
            }
        }
        // next restricted growth string: a[i] <= 1 + max(a[..i])
        let mut i = n - 1;
        loop {
            if i == 0 {
                return Ok(best);
            }
            let prefix_max = rgs[..i].iter().max().copied().unwrap();
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                for x in rgs[i + 1..].iter_mut() {
                    *x = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec;

    fn g(text: &str) -> ZeroDivisorGraph {
        ZeroDivisorGraph::build(&spec::build(text, &Default::default()).unwrap())
    }

    fn labels(g: &ZeroDivisorGraph, cert: &PartitionCertificate) -> Vec<Vec<String>> {
        let _ = g;
        cert.classes.iter().map(|c| c.labels.clone()).collect()
    }

    #[test]
    fn bounds_examples() {
        let f = g("GF(4)xGF(4)");
        assert_eq!(psi_g_upper_bounds(&f, 2), UpperBounds { quadratic: 3, gamma_a_product: 3, min_degree: 3 });
        let r = g("Z2xZ4");
        let b = psi_g_upper_bounds(&r, 2);
        assert_eq!(b.min_degree, 2);
        assert_eq!(b.combined(), 2);
        assert_eq!(quadratic_bound(2), 2);
        assert_eq!(quadratic_bound(1), 1);
        assert_eq!(quadratic_bound(6), 3);
        assert_eq!(quadratic_bound(5), 2);
    }

    #[test]
    fn find_partition_examples() {
        let r = g("Z2xZ4");
        let cert = find_partition(&r, 2).unwrap().expect("Z2xZ4 splits in two");
        verify_certificate(&r, &cert).unwrap();
        assert_eq!(cert.len(), 2);
        assert!(find_partition(&r, 3).unwrap().is_none());
        let one = find_partition(&r, 1).unwrap().unwrap();
        assert_eq!(one.classes[0].members.len(), 5);
        assert!(find_partition(&g("Z2xZ3"), 2).unwrap().is_none());
        assert!(find_partition(&r, 6).unwrap().is_none());
        assert_eq!(find_partition(&r, 0), Err(SolverError::ZeroClasses));
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi_g(&g("Z9")).unwrap().0, 2);
        let f = g("GF(4)xGF(4)");
        let (psi, cert) = psi_g(&f).unwrap();
        assert_eq!(psi, 3);
        verify_certificate(&f, &cert).unwrap();
        assert_eq!(labels(&f, &cert).len(), 3);
        assert_eq!(psi_g(&g("Z4")).unwrap().0, 1);
        assert_eq!(psi_g(&g("Z25")).unwrap().0, 2);
        assert_eq!(psi_g(&g("Z2")).unwrap_err(), SolverError::EmptyGraph);
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(psi_g_bruteforce(&g("Z9")).unwrap(), 2);
        assert_eq!(psi_g_bruteforce(&g("Z2xZ4")).unwrap(), 2);
        assert_eq!(psi_g_bruteforce(&g("GF(4)xGF(4)")).unwrap(), 3);
        assert_eq!(psi_g_bruteforce(&g("Z4")).unwrap(), 1);
        assert!(matches!(psi_g_bruteforce(&g("Z3xZ9")), Err(SolverError::OracleCap { n: 14, cap: 10 })));
    }

    #[test]
    fn restricted_growth_counts_bell_numbers() {
        // with no edges only the single-class partition is... not even valid,
        // so count partitions through a complete graph instead: K_n has ψ_g 2
        // exactly when n is even
        for n in 1..=7 {
            let edges: Vec<(usize, usize)> = (0..n).flat_map(|a| ((a + 1)..n).map(move |b| (a, b))).collect();
            let k = ZeroDivisorGraph::from_edges(n, &edges);
            let expected = if n % 2 == 0 { 2 } else { 1 };
            assert_eq!(psi_g_bruteforce(&k).unwrap(), expected, "K_{n}");
            assert_eq!(solve_psi_g(&k, 64).unwrap().value, expected, "K_{n}");
        }
    }

    #[test]
    fn tampered_certificates_are_rejected() {
        let r = g("Z2xZ4");
        let cert = find_partition(&r, 2).unwrap().unwrap();
        let mut overlap = cert.clone();
        let v = overlap.classes[0].members[0];
        overlap.classes[1].members.push(v);
        assert_eq!(verify_certificate(&r, &overlap), Err(CertificateError::Overlap(v)));
        let mut missing = cert.clone();
        let dropped = missing.classes[1].members.pop().unwrap();
        assert_eq!(verify_certificate(&r, &missing), Err(CertificateError::Uncovered(dropped)));
        let mut witness = cert.clone();
        witness.classes[0].defense[0].outside += 1;
        assert!(matches!(verify_certificate(&r, &witness), Err(CertificateError::BadWitness { .. })));
        assert!(matches!(verify_certificate(&g("Z9"), &cert), Err(CertificateError::GraphMismatch { .. })));
        // a partition that is disjoint and covering but not alliance-valid
        let bad = PartitionCertificate::from_classes(
            &r,
            &[VertexSet::from_positions(5, [0]), VertexSet::from_positions(5, [1, 2, 3, 4])],
        );
        assert!(matches!(verify_certificate(&r, &bad), Err(CertificateError::NotAlliance(_))));
    }
}
