//! Small example graphs used in documentation, tests and benchmarks.

use crate::degree::Degree;
use crate::graph::{GraphSpec, KGraph};
use crate::path::{compose, Path};
use std::sync::Arc;

/// The 2-graph Omega_{2,(1,1)}: a single commuting square.
///
/// Vertices 00,10,01,11; blue b1: 00 -> 10, b2: 01 -> 11; red r1: 00 -> 01,
/// r2: 10 -> 11; square b1.r2 = r1.b2.
pub fn graph_a_spec() -> GraphSpec {
    GraphSpec {
        rank: 2,
        vertices: vec!["00".into(), "10".into(), "01".into(), "11".into()],
        edges: vec![
            ("b1".into(), 0, "00".into(), "10".into()),
            ("b2".into(), 0, "01".into(), "11".into()),
            ("r1".into(), 1, "00".into(), "01".into()),
            ("r2".into(), 1, "10".into(), "11".into()),
        ],
        squares: vec![("b1".into(), "r2".into(), "r1".into(), "b2".into())],
    }
}

pub fn graph_a() -> Arc<KGraph> {
    KGraph::build(&graph_a_spec()).unwrap()
}

/// The unique degree-(1,1) path of graph A.
pub fn square_path(g: &KGraph) -> Path {
    let b1 = Path::single_edge(g, g.edge_by_name("b1").unwrap());
    let r2 = Path::single_edge(g, g.edge_by_name("r2").unwrap());
    compose(g, &b1, &r2).unwrap()
}

/// A 2-graph that is not locally convex: blue f: v -> a, red g: v -> b,
/// no composable bicolored pairs.
pub fn graph_b_spec() -> GraphSpec {
    GraphSpec {
        rank: 2,
        vertices: vec!["v".into(), "a".into(), "b".into()],
        edges: vec![
            ("f".into(), 0, "v".into(), "a".into()),
            ("g".into(), 1, "v".into(), "b".into()),
        ],
        squares: vec![],
    }
}

pub fn graph_b() -> Arc<KGraph> {
    KGraph::build(&graph_b_spec()).unwrap()
}

/// A depth-1 rank-2 Bratteli diagram: red loops f at u and h at w, blue
/// e: u -> w, square f.e = e.h.
pub fn graph_c_spec() -> GraphSpec {
    GraphSpec {
        rank: 2,
        vertices: vec!["u".into(), "w".into()],
        edges: vec![
            ("e".into(), 0, "u".into(), "w".into()),
            ("f".into(), 1, "u".into(), "u".into()),
            ("h".into(), 1, "w".into(), "w".into()),
        ],
        squares: vec![("e".into(), "h".into(), "f".into(), "e".into())],
    }
}

pub fn graph_c() -> Arc<KGraph> {
    KGraph::build(&graph_c_spec()).unwrap()
}

/// A single vertex with one loop, rank 1.
pub fn graph_d_spec() -> GraphSpec {
    GraphSpec {
        rank: 1,
        vertices: vec!["w".into()],
        edges: vec![("f".into(), 0, "w".into(), "w".into())],
        squares: vec![],
    }
}

pub fn graph_d() -> Arc<KGraph> {
    KGraph::build(&graph_d_spec()).unwrap()
}

/// Two disjoint loops, rank 1.
pub fn disjoint_loops_spec() -> GraphSpec {
    GraphSpec {
        rank: 1,
        vertices: vec!["v1".into(), "v2".into()],
        edges: vec![
            ("f1".into(), 0, "v1".into(), "v1".into()),
            ("f2".into(), 0, "v2".into(), "v2".into()),
        ],
        squares: vec![],
    }
}

pub fn disjoint_loops() -> Arc<KGraph> {
    KGraph::build(&disjoint_loops_spec()).unwrap()
}

/// Omega_{2,(1,1)} built through the generic constructor.
pub fn omega_2_11() -> Arc<KGraph> {
    crate::graph::omega_graph(2, &Degree::from_u64s(&[1, 1])).unwrap()
}

/// A two-level rank-2 Bratteli diagram with three blue-source paths:
/// V_0 = {a1,a2} on a red 2-cycle, V_1 = {b} with a red loop, blue
/// e1: a1 -> b and e2: a2 -> b; the induced edge permutation swaps e1, e2.
pub fn bratteli_two_level_spec() -> crate::bratteli::BratteliSpec {
    crate::bratteli::parse_bratteli_spec(
        "level 0: cycle a1 a2\n\
         level 1: cycle b\n\
         blue e1: a1 -> b, F(e1)=e2\n\
         blue e2: a2 -> b, F(e2)=e1\n",
    )
    .unwrap()
}

/// A random 2-graph built by doubling a digraph: every vertex carries the
/// same out-edges in blue and in red, and squares permute the bicolored
/// factorizations within each (range, source) class. Every vertex has
/// out-degree at least 1, so the result is locally convex.
pub fn random_doubled_graph(seed: u64, max_vertices: usize) -> GraphSpec {
    // small deterministic xorshift so the samples module needs no rng dep
    let mut state = seed.wrapping_mul(2685821657736338717).wrapping_add(1);
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let n = 2 + (next() as usize) % (max_vertices.saturating_sub(1).max(1));
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    // functional digraph plus one extra edge at one vertex
    let mut arcs: Vec<(usize, usize)> = (0..n).map(|i| (i, (next() as usize) % n)).collect();
    arcs.push(((next() as usize) % n, (next() as usize) % n));
    arcs.sort();
    arcs.dedup();

    let mut edges = Vec::new();
    for (idx, (a, b)) in arcs.iter().enumerate() {
        edges.push((format!("b{idx}"), 0usize, format!("v{a}"), format!("v{b}")));
        edges.push((format!("r{idx}"), 1usize, format!("v{a}"), format!("v{b}")));
    }

    // squares: pair blue-first (b_i, r_j) with red-first (r_i, b_p(j)) where
    // p permutes, within each (midpoint, endpoint) class, the arcs out of the
    // midpoint; endpoint-preserving bijections are exactly the valid tables
    let mut squares = Vec::new();
    for (i, (_, mid)) in arcs.iter().enumerate() {
        let mut classes: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for (j, (a, b)) in arcs.iter().enumerate() {
            if a == mid {
                classes.entry(*b).or_default().push(j);
            }
        }
        for outs in classes.values() {
            let rot = (next() as usize) % outs.len();
            for (t, &j) in outs.iter().enumerate() {
                let j2 = outs[(t + rot) % outs.len()];
                squares.push((format!("b{i}"), format!("r{j}"), format!("r{i}"), format!("b{j2}")));
            }
        }
    }
    GraphSpec {
        rank: 2,
        vertices,
        edges,
        squares,
    }
}
