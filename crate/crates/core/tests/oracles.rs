//! Ring tables, graphs and alliance numbers checked against independent
//! reference computations.

use std::collections::VecDeque;
use std::path::PathBuf;

use zdga::{alliance_number, domination_number, spec, FiniteRing, RingBuilder, ZeroDivisorGraph};

fn ring(text: &str) -> FiniteRing {
    spec::build(text, &RingBuilder::new()).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn corpus() -> Vec<String> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus/rings.txt");
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect()
}

fn masks(g: &ZeroDivisorGraph) -> Vec<u64> {
    (0..g.len()).map(|v| (0..g.len()).filter(|&w| g.is_edge(v, w)).fold(0, |m, w| m | 1 << w)).collect()
}

fn dominates(adj: &[u64], s: u64) -> bool {
    (0..adj.len()).all(|v| s >> v & 1 == 1 || adj[v] & s != 0)
}

fn defends(adj: &[u64], s: u64) -> bool {
    (0..adj.len()).filter(|v| s >> v & 1 == 1).all(|v| (adj[v] & s).count_ones() + 1 >= (adj[v] & !s).count_ones())
}

fn smallest(adj: &[u64], ok: impl Fn(u64) -> bool) -> usize {
    (1u64..1 << adj.len()).filter(|&s| ok(s)).map(u64::count_ones).min().unwrap() as usize
}

#[test]
fn zn_tables_match_modular_arithmetic() {
    for n in 2..=40usize {
        let r = ring(&format!("Z{n}"));
        for a in 0..n {
            assert_eq!(r.label(a), a.to_string());
            for b in 0..n {
                assert_eq!(r.add(a, b), (a + b) % n);
                assert_eq!(r.mul(a, b), a * b % n);
            }
        }
        let g = ZeroDivisorGraph::build(&r);
        let expected: Vec<usize> = (1..n).filter(|&a| (1..n).any(|b| a * b % n == 0)).collect();
        assert_eq!(g.vertices(), expected.as_slice(), "Z{n}");
        for (i, &a) in expected.iter().enumerate() {
            for (j, &b) in expected.iter().enumerate() {
                assert_eq!(g.is_edge(i, j), i != j && a * b % n == 0, "Z{n}: {a}, {b}");
            }
        }
    }
}

#[test]
fn product_tables_are_componentwise() {
    let r = ring("Z2xZ4");
    assert_eq!(r.order(), 8);
    for a in 0..8 {
        for b in 0..8 {
            let (a0, a1, b0, b1) = (a / 4, a % 4, b / 4, b % 4);
            assert_eq!(r.mul(a, b), (a0 * b0 % 2) * 4 + a1 * b1 % 4);
            assert_eq!(r.add(a, b), ((a0 + b0) % 2) * 4 + (a1 + b1) % 4);
            assert_eq!(r.label(a), format!("({a0},{a1})"));
        }
    }
}

#[test]
fn galois_fields_have_inverses() {
    for q in [4, 8, 9, 16, 25, 27, 32, 49] {
        let r = ring(&format!("GF({q})"));
        assert_eq!(r.order(), q);
        assert!(r.is_field(), "GF({q})");
        for a in (0..q).filter(|&a| a != r.zero()) {
            assert!((0..q).any(|b| r.mul(a, b) == r.one()), "GF({q}): {} has no inverse", r.label(a));
        }
        assert!(ZeroDivisorGraph::build(&r).is_empty());
    }
    let gf4 = ring("GF(4)");
    let labels: Vec<&str> = (0..4).map(|a| gf4.label(a)).collect();
    assert_eq!(labels, ["0", "x", "1", "x+1"]);
}

#[test]
fn quotient_and_idealization_sizes() {
    for (text, order, zero_divisors) in [
        ("Z2[x]/(x^2)", 4, 2),
        ("Z2[x]/(x^2+x+1)", 4, 1),
        ("Z3[x]/(x^2)", 9, 3),
        ("Z2[x]/(x^3)", 8, 4),
        ("Z2(+)Z2", 4, 2),
        ("Z3(+)Z3^2", 27, 9),
        ("Z4(+)Z4", 16, 8),
    ] {
        let r = ring(text);
        assert_eq!((r.order(), r.zero_divisors().len()), (order, zero_divisors), "{text}");
    }
}

#[test]
fn corpus_graphs_are_connected_with_small_diameter() {
    for text in corpus() {
        let g = ZeroDivisorGraph::build(&ring(&text));
        let adj = masks(&g);
        let mut worst = 0;
        for start in 0..g.len() {
            let mut dist = vec![usize::MAX; g.len()];
            dist[start] = 0;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for w in (0..g.len()).filter(|&w| adj[v] >> w & 1 == 1) {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
            assert!(dist.iter().all(|&d| d != usize::MAX), "{text} is disconnected");
            worst = worst.max(*dist.iter().max().unwrap());
        }
        assert!(worst <= 3, "{text}: diameter {worst}");
        assert!(g.is_connected());
        assert_eq!(g.diameter().unwrap(), worst, "{text}");
    }
}

#[test]
fn domination_and_alliance_numbers_match_exhaustive_search() {
    let mut checked = 0;
    for text in corpus() {
        let g = ZeroDivisorGraph::build(&ring(&text));
        if g.len() > 14 {
            continue;
        }
        let adj = masks(&g);
        let gamma = smallest(&adj, |s| dominates(&adj, s));
        let gamma_a = smallest(&adj, |s| dominates(&adj, s) && defends(&adj, s));
        let (d, dset) = domination_number(&g).unwrap();
        let (a, aset) = alliance_number(&g).unwrap();
        assert_eq!((d, a), (gamma, gamma_a), "{text}");
        assert!(dominates(&adj, dset.as_mask()));
        assert!(dominates(&adj, aset.as_mask()) && defends(&adj, aset.as_mask()));
        checked += 1;
    }
    assert!(checked >= 50);
}

#[test]
fn graph_hash_is_stable_hex() {
    let a = ZeroDivisorGraph::build(&ring("Z2xZ2xZ3")).hash();
    let b = ZeroDivisorGraph::build(&ring("Z2 x Z2 x Z3")).hash();
    assert_eq!(a, b);
    assert_eq!(a.len(), 64);
    assert!(a.chars().all(|c| c.is_ascii_hexdigit()));
    assert_ne!(a, ZeroDivisorGraph::build(&ring("Z2xZ2xZ2")).hash());
}
