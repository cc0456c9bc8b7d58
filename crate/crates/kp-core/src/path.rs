//! Paths in canonical color-sorted form and the path combinatorics built on
//! the factorization property: composition, factorization, the sets
//! vLambda^n and vLambda^{<=n}, and minimal common extensions.

use crate::degree::{degree_box, Degree};
use crate::error::{KpError, Result};
use crate::graph::{EdgeId, KGraph, VertexId};
use std::cmp::Ordering;
use std::fmt;

/// A path in canonical form: all color-1 edges from range toward source,
/// then color-2 edges, and so on. A degree-0 path is just its vertex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Path {
    range: VertexId,
    /// edge lists per color, each ordered from range toward source
    blocks: Vec<Vec<EdgeId>>,
}

impl Path {
    pub fn vertex(g: &KGraph, v: VertexId) -> Path {
        Path {
            range: v,
            blocks: vec![Vec::new(); g.rank()],
        }
    }

    pub fn single_edge(g: &KGraph, e: EdgeId) -> Path {
        let data = g.edge(e);
        let mut blocks = vec![Vec::new(); g.rank()];
        blocks[data.color].push(e);
        Path {
            range: data.range,
            blocks,
        }
    }

    /// Rebuild a path from a composable edge sequence (range to source),
    /// sorting it into canonical form through the square table.
    pub fn from_sequence(g: &KGraph, range: VertexId, seq: Vec<EdgeId>) -> Result<Path> {
        if let Some(&first) = seq.first() {
            if g.edge(first).range != range {
                return Err(KpError::NotComposable(
                    g.vertex_name(range).into(),
                    g.edge(first).name.clone(),
                ));
            }
        }
        for pair in seq.windows(2) {
            if g.edge(pair[0]).source != g.edge(pair[1]).range {
                return Err(KpError::NotComposable(
                    g.edge(pair[0]).name.clone(),
                    g.edge(pair[1]).name.clone(),
                ));
            }
        }
        let sorted = g.sort_sequence(seq, true)?;
        let mut blocks = vec![Vec::new(); g.rank()];
        for e in sorted {
            blocks[g.edge(e).color].push(e);
        }
        Ok(Path { range, blocks })
    }

    pub fn range(&self) -> VertexId {
        self.range
    }

    pub fn source(&self, g: &KGraph) -> VertexId {
        self.blocks
            .iter()
            .rev()
            .find_map(|b| b.last())
            .map(|&e| g.edge(e).source)
            .unwrap_or(self.range)
    }

    pub fn degree(&self) -> Degree {
        Degree::from_u64s(
            &self
                .blocks
                .iter()
                .map(|b| b.len() as u64)
                .collect::<Vec<_>>(),
        )
    }

    pub fn is_vertex(&self) -> bool {
        self.blocks.iter().all(|b| b.is_empty())
    }

    pub fn block(&self, color: usize) -> &[EdgeId] {
        &self.blocks[color]
    }

    /// The canonical edge sequence, color blocks ascending.
    pub fn sequence(&self) -> Vec<EdgeId> {
        self.blocks.iter().flatten().copied().collect()
    }

    /// Vertex chain of the canonical development, range first.
    pub fn chain(&self, g: &KGraph) -> Vec<VertexId> {
        let mut out = vec![self.range];
        for e in self.sequence() {
            out.push(g.edge(e).source);
        }
        out
    }

    pub fn display(&self, g: &KGraph) -> String {
        if self.is_vertex() {
            format!("v:{}", g.vertex_name(self.range))
        } else {
            self.sequence()
                .iter()
                .map(|&e| g.edge(e).name.clone())
                .collect::<Vec<_>>()
                .join(".")
        }
    }

    /// Total order used for deterministic output: degree, then edge ids.
    pub fn cmp_key(&self) -> (Degree, VertexId, Vec<EdgeId>) {
        (self.degree(), self.range, self.sequence())
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_key().cmp(&other.cmp_key())
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Path({:?}, {:?})", self.range, self.blocks)
    }
}

/// Composition pq; requires s(p) = r(q).
pub fn compose(g: &KGraph, p: &Path, q: &Path) -> Result<Path> {
    if p.source(g) != q.range() {
        return Err(KpError::NotComposable(
            g.vertex_name(p.source(g)).into(),
            g.vertex_name(q.range()).into(),
        ));
    }
    let mut seq = p.sequence();
    seq.extend(q.sequence());
    Path::from_sequence(g, p.range(), seq)
}

/// The unique factorization p = (head, tail) with d(head) = m.
pub fn factor(g: &KGraph, p: &Path, m: &Degree) -> Result<(Path, Path)> {
    let d = p.degree();
    if !m.le(&d) {
        return Err(KpError::DegreeOutOfRange(m.to_string(), d.to_string()));
    }
    let mut seq = p.sequence();
    // Pull, for each color in ascending order, the required number of edges
    // of that color to the front. Each pull swaps the first remaining edge of
    // the color leftward past lower-colored edges via squares.
    let mut head = Vec::new();
    for color in 0..g.rank() {
        for _ in 0..m.coord_usize(color) {
            let pos = seq
                .iter()
                .position(|&e| g.edge(e).color == color)
                .expect("degree accounting");
            let mut pos = pos;
            while pos > 0 {
                let (x, y) = (seq[pos - 1], seq[pos]);
                debug_assert!(g.edge(x).color < g.edge(y).color);
                let (c, d2) = g.swap_pair(x, y).ok_or_else(|| {
                    KpError::UnmatchedSquarePair(g.edge(x).name.clone(), g.edge(y).name.clone())
                })?;
                seq[pos - 1] = c;
                seq[pos] = d2;
                pos -= 1;
            }
            head.push(seq.remove(0));
        }
    }
    let head_path = Path::from_sequence(g, p.range(), head)?;
    let tail_range = head_path.source(g);
    let tail_path = Path::from_sequence(g, tail_range, seq)?;
    Ok((head_path, tail_path))
}

/// p(m, n) = the middle factor between m and n.
pub fn segment(g: &KGraph, p: &Path, m: &Degree, n: &Degree) -> Result<Path> {
    if !m.le(n) {
        return Err(KpError::DegreeOutOfRange(m.to_string(), n.to_string()));
    }
    let (head, _) = factor(g, p, n)?;
    let (_, seg) = factor(g, &head, m)?;
    Ok(seg)
}

/// vLambda^n in deterministic order.
pub fn paths_of_degree(g: &KGraph, v: VertexId, n: &Degree) -> Vec<Path> {
    let mut out = Vec::new();
    let first_color = match n.support().first() {
        None => return vec![Path::vertex(g, v)],
        Some(&i) => i,
    };
    let rest = n.checked_sub(&Degree::basis(g.rank(), first_color)).unwrap();
    for &e in g.out_edges(v, first_color) {
        for tail in paths_of_degree(g, g.edge(e).source, &rest) {
            // prepend e to the first block; the tail has no colors below
            // first_color so the result is already canonical
            let mut blocks = tail.blocks.clone();
            blocks[first_color].insert(0, e);
            out.push(Path { range: v, blocks });
        }
    }
    out.sort();
    out
}

/// vLambda^{<=n}: paths of degree <= n that block every in-box extension.
pub fn paths_le(g: &KGraph, v: VertexId, n: &Degree) -> Vec<Path> {
    let mut out = Vec::new();
    for m in degree_box(n) {
        'next: for p in paths_of_degree(g, v, &m) {
            let s = p.source(g);
            for i in 0..g.rank() {
                if m.coord(i) < n.coord(i) && !g.out_edges(s, i).is_empty() {
                    continue 'next;
                }
            }
            out.push(p);
        }
    }
    out.sort();
    out
}

/// Membership in Lambda^{<=n}.
pub fn is_in_le(g: &KGraph, p: &Path, n: &Degree) -> bool {
    let d = p.degree();
    if !d.le(n) {
        return false;
    }
    let s = p.source(g);
    (0..g.rank()).all(|i| d.coord(i) == n.coord(i) || g.out_edges(s, i).is_empty())
}

/// Lambda^min(lambda, mu): pairs (alpha, beta) with lambda.alpha = mu.beta of
/// degree d(lambda) v d(mu), in deterministic order.
///
/// Candidates whose factorization breaks down are skipped; this only happens
/// on graphs assembled with an inconsistent square table, where the relation
/// checker reports the damage instead.
pub fn min_common_ext(g: &KGraph, lambda: &Path, mu: &Path) -> Vec<(Path, Path)> {
    let join = lambda.degree().join(&mu.degree());
    let ext_deg = join.checked_sub(&lambda.degree()).unwrap();
    let mut out = Vec::new();
    for alpha in paths_of_degree(g, lambda.source(g), &ext_deg) {
        let Ok(total) = compose(g, lambda, &alpha) else {
            continue;
        };
        let Ok((head, beta)) = factor(g, &total, &mu.degree()) else {
            continue;
        };
        if &head == mu {
            out.push((alpha, beta));
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    fn d(c: &[u64]) -> Degree {
        Degree::from_u64s(c)
    }

    #[test]
    fn compose_resolves_squares() {
        let g = samples::graph_a();
        let b1 = Path::single_edge(&g, g.edge_by_name("b1").unwrap());
        let r2 = Path::single_edge(&g, g.edge_by_name("r2").unwrap());
        let r1 = Path::single_edge(&g, g.edge_by_name("r1").unwrap());
        let b2 = Path::single_edge(&g, g.edge_by_name("b2").unwrap());

        let sq = compose(&g, &b1, &r2).unwrap();
        assert_eq!(sq.degree(), d(&[1, 1]));
        assert_eq!(sq.display(&g), "b1.r2");
        // the red-first factorization canonicalizes to the same path
        let sq2 = compose(&g, &r1, &b2).unwrap();
        assert_eq!(sq, sq2);
        // identity law
        let v = Path::vertex(&g, sq.range());
        assert_eq!(compose(&g, &v, &sq).unwrap(), sq);
    }

    #[test]
    fn compose_rejects_mismatch() {
        let g = samples::graph_a();
        let b1 = Path::single_edge(&g, g.edge_by_name("b1").unwrap());
        let r1 = Path::single_edge(&g, g.edge_by_name("r1").unwrap());
        assert!(compose(&g, &b1, &r1).is_err());
    }

    #[test]
    fn factor_recovers_both_orders() {
        let g = samples::graph_a();
        let sq = samples::square_path(&g);
        let (mu, nu) = factor(&g, &sq, &d(&[0, 1])).unwrap();
        assert_eq!(mu.display(&g), "r1");
        assert_eq!(nu.display(&g), "b2");
        assert_eq!(compose(&g, &mu, &nu).unwrap(), sq);

        let (h, t) = factor(&g, &sq, &d(&[0, 0])).unwrap();
        assert!(h.is_vertex());
        assert_eq!(t, sq);
        let (h, t) = factor(&g, &sq, &sq.degree()).unwrap();
        assert_eq!(h, sq);
        assert!(t.is_vertex());
    }

    #[test]
    fn factorization_is_unique_and_associative_on_desk_graphs() {
        for g in [samples::graph_a(), samples::graph_c(), samples::graph_d()] {
            for v in g.vertices() {
                for n in degree_box(&d(&vec![2; g.rank()])) {
                    for p in paths_of_degree(&g, v, &n) {
                        for m in degree_box(&n) {
                            let (h, t) = factor(&g, &p, &m).unwrap();
                            assert_eq!(h.degree(), m);
                            assert_eq!(compose(&g, &h, &t).unwrap(), p);
                            // uniqueness: no other split of degree m recomposes to p
                            for h2 in paths_of_degree(&g, v, &m) {
                                if h2 == h {
                                    continue;
                                }
                                for t2 in
                                    paths_of_degree(&g, h2.source(&g), &n.checked_sub(&m).unwrap())
                                {
                                    assert_ne!(compose(&g, &h2, &t2).unwrap(), p);
                                }
                            }
                        }
                        // associativity of compose on triples through p
                        for m1 in degree_box(&n) {
                            let (a, bc) = factor(&g, &p, &m1).unwrap();
                            for m2 in degree_box(&bc.degree()) {
                                let (b, c) = factor(&g, &bc, &m2).unwrap();
                                let ab = compose(&g, &a, &b).unwrap();
                                assert_eq!(
                                    compose(&g, &ab, &c).unwrap(),
                                    compose(&g, &a, &compose(&g, &b, &c).unwrap()).unwrap()
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn degree_sets_on_graph_a() {
        let g = samples::graph_a();
        let v00 = g.vertex_by_name("00").unwrap();
        let v10 = g.vertex_by_name("10").unwrap();
        let sq = samples::square_path(&g);

        assert_eq!(paths_of_degree(&g, v00, &d(&[1, 1])), vec![sq.clone()]);
        assert!(paths_of_degree(&g, v10, &d(&[1, 0])).is_empty());
        assert_eq!(
            paths_of_degree(&g, v00, &d(&[0, 0])),
            vec![Path::vertex(&g, v00)]
        );

        assert_eq!(paths_le(&g, v00, &d(&[1, 1])), vec![sq]);
        let r2 = Path::single_edge(&g, g.edge_by_name("r2").unwrap());
        assert_eq!(paths_le(&g, v10, &d(&[1, 1])), vec![r2]);
        // a vertex dead in color i satisfies vLambda^{<=e_i} = {v}
        let v11 = g.vertex_by_name("11").unwrap();
        assert_eq!(paths_le(&g, v11, &d(&[1, 0])), vec![Path::vertex(&g, v11)]);
    }

    #[test]
    fn le_sets_are_nonempty_and_blocking() {
        for g in [
            samples::graph_a(),
            samples::graph_b(),
            samples::graph_c(),
            samples::graph_d(),
        ] {
            for v in g.vertices() {
                for n in degree_box(&d(&vec![2; g.rank()])) {
                    let set = paths_le(&g, v, &n);
                    assert!(!set.is_empty());
                    for p in &set {
                        assert!(is_in_le(&g, p, &n));
                    }
                }
            }
        }
    }

    #[test]
    fn le_composition_closure() {
        // lambda with alpha in s(lambda)Lambda^{<=n-d(lambda)} gives
        // lambda.alpha in Lambda^{<=n}
        for g in [samples::graph_a(), samples::graph_c()] {
            let n = d(&[2, 2]);
            for v in g.vertices() {
                for m in degree_box(&n) {
                    for lam in paths_of_degree(&g, v, &m) {
                        let rest = n.checked_sub(&m).unwrap();
                        for alpha in paths_le(&g, lam.source(&g), &rest) {
                            let la = compose(&g, &lam, &alpha).unwrap();
                            assert!(is_in_le(&g, &la, &n), "{}", la.display(&g));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn min_common_ext_cases() {
        let g = samples::graph_a();
        let b1 = Path::single_edge(&g, g.edge_by_name("b1").unwrap());
        let r1 = Path::single_edge(&g, g.edge_by_name("r1").unwrap());
        let ext = min_common_ext(&g, &b1, &r1);
        assert_eq!(ext.len(), 1);
        assert_eq!(ext[0].0.display(&g), "r2");
        assert_eq!(ext[0].1.display(&g), "b2");

        let same = min_common_ext(&g, &b1, &b1);
        assert_eq!(
            same,
            vec![(
                Path::vertex(&g, b1.source(&g)),
                Path::vertex(&g, b1.source(&g))
            )]
        );

        let gb = samples::graph_b();
        let f = Path::single_edge(&gb, gb.edge_by_name("f").unwrap());
        let h = Path::single_edge(&gb, gb.edge_by_name("g").unwrap());
        assert!(min_common_ext(&gb, &f, &h).is_empty());
    }

    #[test]
    fn min_common_ext_symmetry() {
        for g in [samples::graph_a(), samples::graph_c()] {
            for v in g.vertices() {
                for m1 in degree_box(&d(&[1, 1])) {
                    for m2 in degree_box(&d(&[1, 1])) {
                        for lam in paths_of_degree(&g, v, &m1) {
                            for mu in paths_of_degree(&g, v, &m2) {
                                let fwd = min_common_ext(&g, &lam, &mu);
                                let mut bwd: Vec<_> = min_common_ext(&g, &mu, &lam)
                                    .into_iter()
                                    .map(|(a, b)| (b, a))
                                    .collect();
                                bwd.sort();
                                assert_eq!(fwd, bwd);
                            }
                        }
                    }
                }
            }
        }
    }
}
