//! The zero-divisor graph `Γ(R)`: vertices are the nonzero zero-divisors in
//! element-index order, and distinct `x`, `y` are adjacent iff `xy = 0`.

use std::collections::VecDeque;
use std::fmt::{self, Write as _};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::ring::{ElementIndex, FiniteRing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {index} out of range for graph with {len} vertices")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("vertex set has width {got}, graph has {expected} vertices")]
    WidthMismatch { expected: usize, got: usize },
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph is disconnected")]
    Disconnected,
}

/// Fixed-width bit set over the vertex positions of one graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    width: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(width: usize) -> Self {
        VertexSet { width, words: vec![0; width.div_ceil(64)] }
    }

    pub fn full(width: usize) -> Self {
        let mut s = Self::empty(width);
        for w in s.words.iter_mut() {
            *w = u64::MAX;
        }
        s.clear_tail();
        s
    }

    pub fn from_positions(width: usize, positions: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(width);
        for p in positions {
            s.insert(p);
        }
        s
    }

    /// Build from a `u64` mask; `width` must be at most 64.
    pub fn from_mask(width: usize, mask: u64) -> Self {
        assert!(width <= 64);
        let mut s = Self::empty(width);
        if width > 0 {
            s.words[0] = mask;
            s.clear_tail();
        }
        s
    }

    /// The low 64 bits, for graphs with at most 64 vertices.
    pub fn as_mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    fn clear_tail(&mut self) {
        let rem = self.width % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn insert(&mut self, v: usize) {
        assert!(v < self.width, "vertex {v} out of range {}", self.width);
        self.words[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        assert!(v < self.width, "vertex {v} out of range {}", self.width);
        self.words[v / 64] &= !(1 << (v % 64));
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.width && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn complement(&self) -> VertexSet {
        let mut s = VertexSet { width: self.width, words: self.words.iter().map(|w| !w).collect() };
        s.clear_tail();
        s
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet { width: self.width, words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect() }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet { width: self.width, words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect() }
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * 64 + tz)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroDivisorGraph {
    vertices: Vec<ElementIndex>,
    labels: Vec<String>,
    adjacency: Vec<VertexSet>,
    degrees: Vec<usize>,
    ring_spec: String,
}

impl ZeroDivisorGraph {
    /// `Γ(R)` on `Z(R)*` in element-index order.
    pub fn build(ring: &FiniteRing) -> Self {
        let vertices: Vec<ElementIndex> = ring.zero_divisors().into_iter().filter(|&x| x != 0).collect();
        let n = vertices.len();
        let mut adjacency = vec![VertexSet::empty(n); n];
        for i in 0..n {
            for j in (i + 1)..n {
                if ring.mul(vertices[i], vertices[j]) == 0 {
                    adjacency[i].insert(j);
                    adjacency[j].insert(i);
                }
            }
        }
        let degrees = adjacency.iter().map(VertexSet::len).collect();
        ZeroDivisorGraph {
            labels: vertices.iter().map(|&v| ring.label(v).to_string()).collect(),
            vertices,
            adjacency,
            degrees,
            ring_spec: ring.spec_text().to_string(),
        }
    }

    /// An arbitrary simple graph on `n` vertices labelled `0..n`, with no
    /// ring behind it. Self-loops and duplicate edges are ignored.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adjacency = vec![VertexSet::empty(n); n];
        for &(a, b) in edges {
            if a != b {
                adjacency[a].insert(b);
                adjacency[b].insert(a);
            }
        }
        let degrees = adjacency.iter().map(VertexSet::len).collect();
        ZeroDivisorGraph {
            vertices: (0..n).collect(),
            labels: (0..n).map(|i| i.to_string()).collect(),
            adjacency,
            degrees,
            ring_spec: String::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Ring element index of each vertex position.
    pub fn vertices(&self) -> &[ElementIndex] {
        &self.vertices
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn ring_spec(&self) -> &str {
        &self.ring_spec
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn position_of_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    fn check(&self, v: usize) -> Result<(), GraphError> {
        if v < self.len() {
            Ok(())
        } else {
            Err(GraphError::IndexOutOfRange { index: v, len: self.len() })
        }
    }

    pub(crate) fn check_width(&self, s: &VertexSet) -> Result<(), GraphError> {
        if s.width() == self.len() {
            Ok(())
        } else {
            Err(GraphError::WidthMismatch { expected: self.len(), got: s.width() })
        }
    }

    /// Adjacency test; panics on out-of-range positions.
    pub fn is_edge(&self, v: usize, w: usize) -> bool {
        self.adjacency[v].contains(w)
    }

    /// `N(v)`.
    pub fn neighborhood(&self, v: usize) -> Result<&VertexSet, GraphError> {
        self.check(v)?;
        Ok(&self.adjacency[v])
    }

    /// `N[v] = N(v) ∪ {v}`.
    pub fn closed_neighborhood(&self, v: usize) -> Result<VertexSet, GraphError> {
        self.check(v)?;
        let mut s = self.adjacency[v].clone();
        s.insert(v);
        Ok(s)
    }

    pub fn degree(&self, v: usize) -> Result<usize, GraphError> {
        self.check(v)?;
        Ok(self.degrees[v])
    }

    /// `δ`, the minimum degree.
    pub fn min_degree(&self) -> Result<usize, GraphError> {
        self.degrees.iter().copied().min().ok_or(GraphError::EmptyGraph)
    }

    /// `deg_S(v) = |S ∩ N(v)|`; membership of `v` itself is never counted.
    pub fn deg_in(&self, s: &VertexSet, v: usize) -> Result<usize, GraphError> {
        self.check(v)?;
        self.check_width(s)?;
        Ok(self.adjacency[v].intersection_len(s))
    }

    pub fn edge_count(&self) -> usize {
        self.degrees.iter().sum::<usize>() / 2
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order of positions.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len()).flat_map(|i| self.adjacency[i].iter().filter(move |&j| j > i).map(move |j| (i, j))).collect()
    }

    /// Adjacency as `u64` masks when the graph has at most 64 vertices.
    pub fn masks(&self) -> Option<Vec<u64>> {
        (self.len() <= 64).then(|| self.adjacency.iter().map(VertexSet::as_mask).collect())
    }

    fn bfs(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for w in self.adjacency[v].iter() {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// The empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        self.is_empty() || self.bfs(0).iter().all(Option::is_some)
    }

    pub fn diameter(&self) -> Result<usize, GraphError> {
        if self.is_empty() {
            return Err(GraphError::EmptyGraph);
        }
        let mut best = 0;
        for v in 0..self.len() {
            for d in self.bfs(v) {
                best = best.max(d.ok_or(GraphError::Disconnected)?);
            }
        }
        Ok(best)
    }

    /// SHA-256 over the vertex count and sorted edge list, hex encoded.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("n={};", self.len()));
        for (i, j) in self.edges() {
            h.update(format!("{i}-{j};"));
        }
        hex::encode(h.finalize())
    }

    /// Graphviz text: one `graph` block, vertices in position order, each edge
    /// once in lexicographic order of positions.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph \"{}\" {{", escape(&self.ring_spec));
        for l in &self.labels {
            let _ = writeln!(out, "  \"{}\";", escape(l));
        }
        for (i, j) in self.edges() {
            let _ = writeln!(out, "  \"{}\" -- \"{}\";", escape(&self.labels[i]), escape(&self.labels[j]));
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn build_graph(ring: &FiniteRing) -> ZeroDivisorGraph {
    ZeroDivisorGraph::build(ring)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec;

    fn g(text: &str) -> ZeroDivisorGraph {
        ZeroDivisorGraph::build(&spec::build(text, &Default::default()).unwrap())
    }

    fn pos(g: &ZeroDivisorGraph, label: &str) -> usize {
        g.position_of_label(label).unwrap()
    }

    #[test]
    fn z9_is_one_edge() {
        let z9 = g("Z9");
        assert_eq!(z9.labels(), &["3", "6"]);
        assert_eq!(z9.edges(), vec![(0, 1)]);
        assert_eq!(z9.neighborhood(0).unwrap().to_vec(), vec![1]);
        assert_eq!(z9.closed_neighborhood(0).unwrap().to_vec(), vec![0, 1]);
        assert!(z9.is_connected());
        assert_eq!(z9.diameter().unwrap(), 1);
        let s3 = VertexSet::from_positions(2, [0]);
        assert_eq!(z9.deg_in(&s3, 1).unwrap(), 1);
        let s6 = VertexSet::from_positions(2, [1]);
        assert_eq!(z9.deg_in(&s6, 1).unwrap(), 0);
    }

    #[test]
    fn z2xz4_edges() {
        let gr = g("Z2xZ4");
        assert_eq!(gr.len(), 5);
        let named: Vec<(&str, &str)> = gr.edges().into_iter().map(|(a, b)| (gr.label(a), gr.label(b))).collect();
        let mut expected = vec![("(0,1)", "(1,0)"), ("(0,2)", "(1,0)"), ("(0,3)", "(1,0)"), ("(0,2)", "(1,2)")];
        expected.sort();
        let mut got = named.clone();
        got.sort();
        assert_eq!(got, expected);
        assert_eq!(gr.degree(pos(&gr, "(1,0)")).unwrap(), 3);
        assert_eq!(gr.min_degree().unwrap(), 1);
        assert_eq!(gr.degree(pos(&gr, "(0,1)")).unwrap(), 1);
        let s = VertexSet::from_positions(5, [pos(&gr, "(0,1)"), pos(&gr, "(0,3)"), pos(&gr, "(1,2)")]);
        assert_eq!(gr.deg_in(&s, pos(&gr, "(1,0)")).unwrap(), 2);
        assert!(matches!(gr.degree(5), Err(GraphError::IndexOutOfRange { .. })));
        assert!(matches!(gr.deg_in(&VertexSet::empty(3), 0), Err(GraphError::WidthMismatch { .. })));
    }

    #[test]
    fn f4xf4_is_k33() {
        let gr = g("GF(4)xGF(4)");
        assert_eq!(gr.len(), 6);
        assert_eq!(gr.edge_count(), 9);
        assert!(gr.degrees().iter().all(|&d| d == 3));
        assert_eq!(gr.diameter().unwrap(), 2);
    }

    #[test]
    fn small_cases() {
        let z4 = g("Z4");
        assert_eq!(z4.len(), 1);
        assert!(z4.is_connected());
        assert_eq!(z4.diameter().unwrap(), 0);
        let z2 = g("Z2");
        assert!(z2.is_empty());
        assert_eq!(z2.diameter(), Err(GraphError::EmptyGraph));
        assert_eq!(z2.min_degree(), Err(GraphError::EmptyGraph));
        let split = ZeroDivisorGraph::from_edges(4, &[(0, 1), (2, 3)]);
        assert!(!split.is_connected());
        assert_eq!(split.diameter(), Err(GraphError::Disconnected));
    }

    #[test]
    fn dot_is_stable() {
        let dot = g("Z9").to_dot();
        assert_eq!(dot, "graph \"Z9\" {\n  \"3\";\n  \"6\";\n  \"3\" -- \"6\";\n}\n");
        assert_eq!(g("Z2xZ4").to_dot(), g("Z2 x Z4").to_dot());
    }

    #[test]
    fn vertex_set_ops() {
        let a = VertexSet::from_positions(70, [0, 3, 65]);
        let b = VertexSet::from_positions(70, [3, 69]);
        assert_eq!(a.len(), 3);
        assert_eq!(a.complement().len(), 67);
        assert_eq!(a.intersection_len(&b), 1);
        assert_eq!(a.union(&b).to_vec(), vec![0, 3, 65, 69]);
        assert!(!a.is_disjoint(&b));
        assert_eq!(VertexSet::full(70).len(), 70);
        assert!(VertexSet::from_positions(70, [3]).is_subset(&a));
    }
}
