//! Finite k-graphs presented as colored graphs with factorization squares.
//!
//! A rank-k graph is given by vertices, edges colored 1..k, and for every
//! composable pair of distinctly colored edges a square identifying the two
//! factorizations of the bicolored path. Validation checks that every
//! composable bicolored pair belongs to exactly one square and, for k >= 3,
//! that resolving a tricolored path through squares is order-independent.

use crate::degree::Degree;
use crate::error::{KpError, Result};
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EdgeId(pub u32);

#[derive(Clone, Debug)]
pub struct EdgeData {
    pub name: String,
    pub color: usize,
    pub range: VertexId,
    pub source: VertexId,
}

/// Raw description of a k-graph, as read from the text format.
#[derive(Clone, Debug, Default)]
pub struct GraphSpec {
    pub rank: usize,
    pub vertices: Vec<String>,
    /// (name, color 1-based in the text format but 0-based here, range, source)
    pub edges: Vec<(String, usize, String, String)>,
    /// compose(a,b) = compose(c,d) with a,c of distinct colors
    pub squares: Vec<(String, String, String, String)>,
}

/// A validated finite k-graph.
#[derive(Debug)]
pub struct KGraph {
    rank: usize,
    vertex_names: Vec<String>,
    vertex_index: BTreeMap<String, VertexId>,
    edges: Vec<EdgeData>,
    edge_index: BTreeMap<String, EdgeId>,
    /// edges of each color in declaration order
    by_color: Vec<Vec<EdgeId>>,
    /// edges of color i with a given range vertex
    out_edges: Vec<Vec<Vec<EdgeId>>>, // [color][vertex] -> edges
    /// For a composable pair (a,b) of distinct colors, the unique pair (c,d)
    /// with color(c)=color(b), color(d)=color(a) and compose(a,b)=compose(c,d).
    swap: HashMap<(EdgeId, EdgeId), (EdgeId, EdgeId)>,
    fingerprint: String,
}

impl KGraph {
    pub fn build(spec: &GraphSpec) -> Result<Arc<KGraph>> {
        let g = Self::assemble(spec)?;
        g.check_square_completeness()?;
        if g.rank >= 3 {
            g.check_cube_condition()?;
        }
        Ok(Arc::new(g))
    }

    fn assemble(spec: &GraphSpec) -> Result<KGraph> {
        if spec.rank == 0 {
            return Err(KpError::Validation("rank must be at least 1".into()));
        }
        let mut vertex_index = BTreeMap::new();
        for (i, name) in spec.vertices.iter().enumerate() {
            if vertex_index.insert(name.clone(), VertexId(i as u32)).is_some() {
                return Err(KpError::Validation(format!("duplicate vertex '{name}'")));
            }
        }
        let mut edges = Vec::new();
        let mut edge_index = BTreeMap::new();
        for (name, color, r, s) in &spec.edges {
            if *color >= spec.rank {
                return Err(KpError::Validation(format!(
                    "edge '{name}' has color {} but rank is {}",
                    color + 1,
                    spec.rank
                )));
            }
            let range = *vertex_index
                .get(r)
                .ok_or_else(|| KpError::UnknownVertex(r.clone()))?;
            let source = *vertex_index
                .get(s)
                .ok_or_else(|| KpError::UnknownVertex(s.clone()))?;
            let id = EdgeId(edges.len() as u32);
            if edge_index.insert(name.clone(), id).is_some() {
                return Err(KpError::Validation(format!("duplicate edge '{name}'")));
            }
            edges.push(EdgeData {
                name: name.clone(),
                color: *color,
                range,
                source,
            });
        }

        let mut by_color = vec![Vec::new(); spec.rank];
        let mut out_edges = vec![vec![Vec::new(); spec.vertices.len()]; spec.rank];
        for (i, e) in edges.iter().enumerate() {
            by_color[e.color].push(EdgeId(i as u32));
            out_edges[e.color][e.range.0 as usize].push(EdgeId(i as u32));
        }

        // Square table: store both orientations of every declared square.
        let mut swap = HashMap::new();
        let lookup = |n: &String| -> Result<EdgeId> {
            edge_index
                .get(n)
                .copied()
                .ok_or_else(|| KpError::UnknownEdge(n.clone()))
        };
        for (a, b, c, d) in &spec.squares {
            let (a, b, c, d) = (lookup(a)?, lookup(b)?, lookup(c)?, lookup(d)?);
            let (ea, eb, ec, ed) = (&edges[a.0 as usize], &edges[b.0 as usize], &edges[c.0 as usize], &edges[d.0 as usize]);
            if ea.color == eb.color || ea.color != ed.color || eb.color != ec.color {
                return Err(KpError::Validation(format!(
                    "square {} {} = {} {} does not swap two distinct colors",
                    ea.name, eb.name, ec.name, ed.name
                )));
            }
            let ok = ea.source == eb.range
                && ec.source == ed.range
                && ea.range == ec.range
                && eb.source == ed.source;
            if !ok {
                return Err(KpError::Validation(format!(
                    "square {} {} = {} {} has mismatched endpoints",
                    ea.name, eb.name, ec.name, ed.name
                )));
            }
            if swap.insert((a, b), (c, d)).is_some() {
                return Err(KpError::Validation(format!(
                    "pair ({},{}) appears in more than one square",
                    ea.name, eb.name
                )));
            }
            if swap.insert((c, d), (a, b)).is_some() {
                return Err(KpError::Validation(format!(
                    "pair ({},{}) appears in more than one square",
                    ec.name, ed.name
                )));
            }
        }

        let mut g = KGraph {
            rank: spec.rank,
            vertex_names: spec.vertices.clone(),
            vertex_index,
            edges,
            edge_index,
            by_color,
            out_edges,
            swap,
            fingerprint: String::new(),
        };
        g.fingerprint = g.compute_fingerprint();
        Ok(g)
    }

    /// Assemble a graph without validating the square table. Supports
    /// negative-control tests that feed a corrupted table to the algebra
    /// engine; ordinary callers should use `build`.
    pub fn from_parts_unchecked(spec: &GraphSpec) -> Arc<KGraph> {
        let mut bare = spec.clone();
        bare.squares.clear();
        let mut g = Self::assemble(&bare).expect("graph skeleton invalid");
        let lookup = |n: &String| g.edge_index[n];
        for (a, b, c, d) in &spec.squares {
            let (a, b, c, d) = (lookup(a), lookup(b), lookup(c), lookup(d));
            g.swap.insert((a, b), (c, d));
            g.swap.insert((c, d), (a, b));
        }
        g.fingerprint = g.compute_fingerprint();
        Arc::new(g)
    }

    fn check_square_completeness(&self) -> Result<()> {
        for a in 0..self.edges.len() {
            for b in 0..self.edges.len() {
                let (ea, eb) = (&self.edges[a], &self.edges[b]);
                if ea.color == eb.color || ea.source != eb.range {
                    continue;
                }
                let key = (EdgeId(a as u32), EdgeId(b as u32));
                match self.swap.get(&key) {
                    None => {
                        return Err(KpError::UnmatchedSquarePair(
                            ea.name.clone(),
                            eb.name.clone(),
                        ))
                    }
                    Some(&(c, d)) => {
                        let (ec, ed) = (self.edge(c), self.edge(d));
                        if ec.color != eb.color
                            || ed.color != ea.color
                            || ec.range != ea.range
                            || ed.source != eb.source
                            || ec.source != ed.range
                        {
                            return Err(KpError::Validation(format!(
                                "square for ({},{}) has inconsistent endpoints",
                                ea.name, eb.name
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// For k >= 3: resolving a strictly descending tricolored path to
    /// ascending color order must not depend on the order of square
    /// applications. Checked exhaustively over all composable triples of
    /// pairwise distinct colors.
    fn check_cube_condition(&self) -> Result<()> {
        for a in 0..self.edges.len() {
            for b in 0..self.edges.len() {
                let (ea, eb) = (&self.edges[a], &self.edges[b]);
                if ea.color == eb.color || ea.source != eb.range {
                    continue;
                }
                for c in 0..self.edges.len() {
                    let ec = &self.edges[c];
                    if ec.color == ea.color || ec.color == eb.color || eb.source != ec.range {
                        continue;
                    }
                    let seq = vec![EdgeId(a as u32), EdgeId(b as u32), EdgeId(c as u32)];
                    let left = self.sort_sequence(seq.clone(), true)?;
                    let right = self.sort_sequence(seq, false)?;
                    if left != right {
                        return Err(KpError::Validation(format!(
                            "cube condition fails on triple ({},{},{})",
                            ea.name, eb.name, ec.name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Bubble a composable edge sequence into ascending color order using the
    /// square table; `leftmost` selects which inversion is swapped first.
    pub(crate) fn sort_sequence(&self, mut seq: Vec<EdgeId>, leftmost: bool) -> Result<Vec<EdgeId>> {
        loop {
            let mut swapped_at = None;
            let idxs: Vec<usize> = (0..seq.len().saturating_sub(1)).collect();
            let order: Box<dyn Iterator<Item = usize>> = if leftmost {
                Box::new(idxs.into_iter())
            } else {
                Box::new(idxs.into_iter().rev())
            };
            for i in order {
                let (x, y) = (seq[i], seq[i + 1]);
                if self.edge(x).color > self.edge(y).color {
                    let &(c, d) = self.swap.get(&(x, y)).ok_or_else(|| {
                        KpError::UnmatchedSquarePair(
                            self.edge(x).name.clone(),
                            self.edge(y).name.clone(),
                        )
                    })?;
                    seq[i] = c;
                    seq[i + 1] = d;
                    swapped_at = Some(i);
                    break;
                }
            }
            if swapped_at.is_none() {
                return Ok(seq);
            }
        }
    }

    pub(crate) fn swap_pair(&self, a: EdgeId, b: EdgeId) -> Option<(EdgeId, EdgeId)> {
        self.swap.get(&(a, b)).copied()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_names.len() as u32).map(VertexId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0 as usize]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn edge(&self, e: EdgeId) -> &EdgeData {
        &self.edges[e.0 as usize]
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edge_index.get(name).copied()
    }

    pub fn edges_of_color(&self, color: usize) -> &[EdgeId] {
        &self.by_color[color]
    }

    /// vLambda^{e_i}: edges of color i with range v.
    pub fn out_edges(&self, v: VertexId, color: usize) -> &[EdgeId] {
        &self.out_edges[color][v.0 as usize]
    }

    /// Colors i with vLambda^{e_i} empty.
    pub fn dead_colors(&self, v: VertexId) -> BTreeSet<usize> {
        (0..self.rank)
            .filter(|&i| self.out_edges(v, i).is_empty())
            .collect()
    }

    /// Map from each vertex to its set of dead colors.
    pub fn sources(&self) -> BTreeMap<VertexId, BTreeSet<usize>> {
        self.vertices().map(|v| (v, self.dead_colors(v))).collect()
    }

    /// true when every vertex is dead in no color.
    pub fn has_no_sources(&self) -> bool {
        self.vertices().all(|v| self.dead_colors(v).is_empty())
    }

    /// Local convexity: for v with edges of colors i != j, each one-step
    /// extension can still be extended in the other color.
    pub fn is_locally_convex(&self) -> std::result::Result<(), LocalConvexityWitness> {
        for v in self.vertices() {
            for i in 0..self.rank {
                for j in 0..self.rank {
                    if i == j {
                        continue;
                    }
                    for &lam in self.out_edges(v, i) {
                        for &mu in self.out_edges(v, j) {
                            if self.out_edges(self.edge(lam).source, j).is_empty() {
                                return Err(LocalConvexityWitness {
                                    vertex: v,
                                    color_i: i,
                                    color_j: j,
                                    lambda: lam,
                                    mu,
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> GraphSpec {
        GraphSpec {
            rank: self.rank,
            vertices: self.vertex_names.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| {
                    (
                        e.name.clone(),
                        e.color,
                        self.vertex_name(e.range).to_string(),
                        self.vertex_name(e.source).to_string(),
                    )
                })
                .collect(),
            squares: self.square_list(),
        }
    }

    /// Squares in canonical orientation (first edge of lowest color),
    /// deterministically ordered.
    pub fn square_list(&self) -> Vec<(String, String, String, String)> {
        let mut out = Vec::new();
        let mut keys: Vec<_> = self.swap.keys().copied().collect();
        keys.sort();
        for (a, b) in keys {
            if self.edge(a).color < self.edge(b).color {
                let (c, d) = self.swap[&(a, b)];
                out.push((
                    self.edge(a).name.clone(),
                    self.edge(b).name.clone(),
                    self.edge(c).name.clone(),
                    self.edge(d).name.clone(),
                ));
            }
        }
        out.sort();
        out
    }

    fn compute_fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(crate::textio::serialize_graph_spec(&self.spec()));
        let digest = h.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Content hash of the canonical serialization.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn same_graph(&self, other: &KGraph) -> bool {
        self.fingerprint == other.fingerprint
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalConvexityWitness {
    pub vertex: VertexId,
    pub color_i: usize,
    pub color_j: usize,
    pub lambda: EdgeId,
    pub mu: EdgeId,
}

/// The k-graph Omega_{k,m}: vertices p <= m, a unique path from p to q for
/// each p <= q <= m.
pub fn omega_graph(k: usize, m: &Degree) -> Result<Arc<KGraph>> {
    assert_eq!(m.rank(), k);
    let points = crate::degree::degree_box(m);
    let name = |p: &Degree| {
        p.coords()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join("_")
    };
    let mut spec = GraphSpec {
        rank: k,
        ..Default::default()
    };
    for p in &points {
        spec.vertices.push(name(p));
    }
    let edge_name = |p: &Degree, i: usize| format!("c{}_{}", i + 1, name(p));
    for p in &points {
        for i in 0..k {
            let q = p.add(&Degree::basis(k, i));
            if q.le(m) {
                spec.edges
                    .push((edge_name(p, i), i, name(p), name(&q)));
            }
        }
    }
    for p in &points {
        for i in 0..k {
            for j in (i + 1)..k {
                let pi = p.add(&Degree::basis(k, i));
                let pj = p.add(&Degree::basis(k, j));
                let pij = pi.add(&Degree::basis(k, j));
                if pij.le(m) {
                    spec.squares.push((
                        edge_name(p, i),
                        edge_name(&pi, j),
                        edge_name(p, j),
                        edge_name(&pj, i),
                    ));
                }
            }
        }
    }
    KGraph::build(&spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn graph_a_builds() {
        let g = samples::graph_a();
        assert_eq!(g.rank(), 2);
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 4);
        assert!(g.is_locally_convex().is_ok());
    }

    #[test]
    fn graph_b_builds_without_squares() {
        let g = samples::graph_b();
        // no composable bicolored pairs, so the empty square table is complete
        assert_eq!(g.edge_count(), 2);
        let w = g.is_locally_convex().unwrap_err();
        assert_eq!(g.vertex_name(w.vertex), "v");
    }

    #[test]
    fn missing_square_is_rejected() {
        let mut spec = samples::graph_a_spec();
        spec.squares.clear();
        match KGraph::build(&spec) {
            Err(KpError::UnmatchedSquarePair(a, b)) => {
                assert_eq!((a.as_str(), b.as_str()), ("b1", "r2"));
            }
            other => panic!("expected unmatched pair, got {other:?}"),
        }
    }

    #[test]
    fn omega_counts() {
        let g = omega_graph(2, &Degree::from_u64s(&[1, 1])).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edges_of_color(0).len(), 2);
        assert_eq!(g.edges_of_color(1).len(), 2);
        assert_eq!(g.square_list().len(), 1);

        let line = omega_graph(1, &Degree::from_u64s(&[3])).unwrap();
        assert_eq!(line.vertex_count(), 4);
        assert_eq!(line.edge_count(), 3);

        let point = omega_graph(2, &Degree::from_u64s(&[0, 0])).unwrap();
        assert_eq!(point.vertex_count(), 1);
        assert_eq!(point.edge_count(), 0);
    }

    #[test]
    fn omega_3d_cube_condition_holds() {
        let g = omega_graph(3, &Degree::from_u64s(&[1, 1, 1])).unwrap();
        assert_eq!(g.vertex_count(), 8);
    }

    #[test]
    fn sources_map() {
        let g = samples::graph_a();
        let src = g.sources();
        let names: Vec<(String, Vec<usize>)> = src
            .iter()
            .map(|(v, s)| (g.vertex_name(*v).to_string(), s.iter().copied().collect()))
            .collect();
        assert_eq!(
            names,
            vec![
                ("00".into(), vec![]),
                ("10".into(), vec![0]),
                ("01".into(), vec![1]),
                ("11".into(), vec![0, 1]),
            ]
        );
    }

    #[test]
    fn source_free_graph_is_locally_convex() {
        let g = samples::graph_c();
        let src = g.sources();
        let u = g.vertex_by_name("u").unwrap();
        let w = g.vertex_by_name("w").unwrap();
        assert!(src[&u].is_empty());
        assert_eq!(src[&w].iter().copied().collect::<Vec<_>>(), vec![0]);
        assert!(g.is_locally_convex().is_ok());
    }
}
