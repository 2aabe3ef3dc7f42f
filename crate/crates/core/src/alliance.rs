//! Domination and defensive-alliance predicates, and exact minimum searches
//! for the domination number `γ` and the global defensive alliance number
//! `γ_a`.
//!
//! All predicates reject the empty set: every notion here is defined for
//! nonempty vertex sets only.

use thiserror::Error;

use crate::graph::{GraphError, VertexSet, ZeroDivisorGraph};
use crate::par;

/// Largest vertex count the exact minimum searches accept.
pub const MAX_SEARCH_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AllianceError {
    #[error("vertex set is empty")]
    EmptySet,
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph has {0} vertices; exact search supports at most {MAX_SEARCH_VERTICES}")]
    TooLarge(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn check(g: &ZeroDivisorGraph, s: &VertexSet) -> Result<(), AllianceError> {
    g.check_width(s)?;
    if s.is_empty() {
        return Err(AllianceError::EmptySet);
    }
    Ok(())
}

/// Every vertex outside `S` has a neighbor in `S` (vacuous when `S = V`).
pub fn is_dominating(g: &ZeroDivisorGraph, s: &VertexSet) -> Result<bool, AllianceError> {
    check(g, s)?;
    Ok((0..g.len()).filter(|&v| !s.contains(v)).all(|v| g.deg_in(s, v).unwrap() > 0))
}

/// `deg_S(x) + 1 >= deg_{S̄}(x)` for every `x ∈ S`.
pub fn is_defensive(g: &ZeroDivisorGraph, s: &VertexSet) -> Result<bool, AllianceError> {
    check(g, s)?;
    let out = s.complement();
    Ok(s.iter().all(|x| g.deg_in(s, x).unwrap() + 1 >= g.deg_in(&out, x).unwrap()))
}

/// The same predicate in its degree form, `deg(x) + 1 >= 2 deg_{S̄}(x)`.
pub fn is_defensive_by_degree(g: &ZeroDivisorGraph, s: &VertexSet) -> Result<bool, AllianceError> {
    check(g, s)?;
    let out = s.complement();
    Ok(s.iter().all(|x| g.degrees()[x] + 1 >= 2 * g.deg_in(&out, x).unwrap()))
}

/// `deg_S(x) >= deg_{S̄}(x)` for every `x ∈ S`.
pub fn is_strong_defensive(g: &ZeroDivisorGraph, s: &VertexSet) -> Result<bool, AllianceError> {
    check(g, s)?;
    let out = s.complement();
    Ok(s.iter().all(|x| g.deg_in(s, x).unwrap() >= g.deg_in(&out, x).unwrap()))
}

pub fn is_global_defensive_alliance(g: &ZeroDivisorGraph, s: &VertexSet) -> Result<bool, AllianceError> {
    Ok(is_dominating(g, s)? && is_defensive(g, s)?)
}

/// Mask form of the global-defensive-alliance test for graphs with at most
/// 64 vertices.
#[inline]
pub(crate) fn is_gda_mask(adj: &[u64], full: u64, s: u64) -> bool {
    if s == 0 {
        return false;
    }
    let out = full & !s;
    let mut rest = full;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let nb = adj[v];
        if s >> v & 1 == 1 {
            if (nb & s).count_ones() + 1 < (nb & out).count_ones() {
                return false;
            }
        } else if nb & s == 0 {
            return false;
        }
    }
    true
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Goal {
    Dominating,
    GlobalDefensive,
}

/// Lexicographic enumeration of `k`-subsets of the eligible vertices, with
/// domination and defense feasibility pruning.
struct SubsetSearch<'a> {
    adj: &'a [u64],
    closed: Vec<u64>,
    degrees: Vec<u32>,
    full: u64,
    eligible: Vec<usize>,
    /// Union of closed neighborhoods of `eligible[i..]`.
    suffix_cover: Vec<u64>,
    ineligible: u64,
    goal: Goal,
    k: usize,
}

impl<'a> SubsetSearch<'a> {
    fn new(adj: &'a [u64], goal: Goal, k: usize) -> Self {
        let n = adj.len();
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let degrees: Vec<u32> = adj.iter().map(|m| m.count_ones()).collect();
        let closed: Vec<u64> = adj.iter().enumerate().map(|(v, m)| m | 1 << v).collect();
        // a member v of a size-k alliance needs |S| >= ceil((deg v + 1) / 2)
        let eligible: Vec<usize> =
            (0..n).filter(|&v| goal == Goal::Dominating || (degrees[v] as usize + 2) / 2 <= k).collect();
        let mut suffix_cover = vec![0u64; eligible.len() + 1];
        for i in (0..eligible.len()).rev() {
            suffix_cover[i] = suffix_cover[i + 1] | closed[eligible[i]];
        }
        let ineligible = eligible.iter().fold(full, |m, &v| m & !(1 << v));
        SubsetSearch { adj, closed, degrees, full, eligible, suffix_cover, ineligible, goal, k }
    }

    fn accept(&self, s: u64) -> bool {
        match self.goal {
            Goal::Dominating => s.count_ones() as usize == self.k,
            Goal::GlobalDefensive => is_gda_mask(self.adj, self.full, s),
        }
    }

    fn search(&self, idx: usize, chosen: u64, count: usize, cover: u64, skipped: u64) -> Option<u64> {
        if count == self.k {
            return (cover == self.full && self.accept(chosen)).then_some(chosen);
        }
        if self.eligible.len() - idx < self.k - count {
            return None;
        }
        if self.full & !cover & !self.suffix_cover[idx] != 0 {
            return None;
        }
        if self.goal == Goal::GlobalDefensive {
            let excluded = skipped | self.ineligible;
            let mut rest = chosen;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if 2 * (self.adj[v] & excluded).count_ones() > self.degrees[v] + 1 {
                    return None;
                }
            }
        }
        let v = self.eligible[idx];
        let bit = 1u64 << v;
        self.search(idx + 1, chosen | bit, count + 1, cover | self.closed[v], skipped)
            .or_else(|| self.search(idx + 1, chosen, count, cover, skipped | bit))
    }

    /// First subset in lexicographic order whose smallest member is
    /// `eligible[first]`.
    fn search_from(&self, first: usize) -> Option<u64> {
        let skipped = self.eligible[..first].iter().fold(0u64, |m, &v| m | 1 << v);
        let v = self.eligible[first];
        self.search(first + 1, 1 << v, 1, self.closed[v], skipped)
    }

    fn run(&self) -> Option<u64> {
        if self.k == 0 || self.eligible.len() < self.k {
            return None;
        }
        par::find_map_first(self.eligible.len() - self.k + 1, |first| self.search_from(first))
    }
}

fn search_adjacency(g: &ZeroDivisorGraph) -> Result<Vec<u64>, AllianceError> {
    if g.is_empty() {
        return Err(AllianceError::EmptyGraph);
    }
    g.masks().ok_or(AllianceError::TooLarge(g.len()))
}

fn minimum(g: &ZeroDivisorGraph, goal: Goal) -> Result<(usize, VertexSet), AllianceError> {
    let adj = search_adjacency(g)?;
    let n = adj.len();
    let start = match goal {
        Goal::Dominating => 1,
        Goal::GlobalDefensive => g.degrees().iter().map(|&d| (d + 2) / 2).min().unwrap_or(1).max(1),
    };
    for k in start..=n {
        if let Some(s) = SubsetSearch::new(&adj, goal, k).run() {
            return Ok((k, VertexSet::from_mask(n, s)));
        }
    }
    unreachable!("V itself is a global defensive alliance of a nonempty graph")
}

/// `γ(Γ)` with the lexicographically first minimum dominating set.
pub fn domination_number(g: &ZeroDivisorGraph) -> Result<(usize, VertexSet), AllianceError> {
    minimum(g, Goal::Dominating)
}

/// `γ_a(Γ)`, the minimum size of a global defensive alliance, with the
/// lexicographically first witness.
pub fn alliance_number(g: &ZeroDivisorGraph) -> Result<(usize, VertexSet), AllianceError> {
    minimum(g, Goal::GlobalDefensive)
}
