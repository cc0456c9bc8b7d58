//! Desourcification: the source-free k-graph built from boundary-path
//! classes, materialized as a finite truncation.
//!
//! A vertex class is stored as the pair (w, c) of a base vertex and an
//! excess in N^k, a path class as the triple (lambda, c, delta) of a base
//! segment, the starting excess, and the total degree. The pair and triple
//! are complete class invariants, so composition and factorization become
//! finite bookkeeping; the `raw` module keeps explicit boundary-path
//! representatives as an independent oracle for that bookkeeping.

use crate::algebra::AlgebraElem;
use crate::boundary::{boundary_paths, BPath};
use crate::degree::{degree_box, Degree};
use crate::error::{KpError, Result};
use crate::graph::{EdgeId, GraphSpec, KGraph, VertexId};
use crate::path::{compose, factor, min_common_ext, paths_of_degree, Path};
use crate::ring::Ring;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

/// A desourcification vertex class: base vertex plus excess.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DVertex {
    pub base: VertexId,
    pub excess: Degree,
}

/// A desourcification path class: segment, starting excess, total degree.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TriplePath {
    pub segment: Path,
    pub start_excess: Degree,
    pub total: Degree,
}

impl TriplePath {
    pub fn range(&self) -> DVertex {
        DVertex {
            base: self.segment.range(),
            excess: self.start_excess.clone(),
        }
    }

    pub fn source(&self, g: &KGraph) -> DVertex {
        DVertex {
            base: self.segment.source(g),
            excess: self.end_excess(),
        }
    }

    pub fn end_excess(&self) -> Degree {
        self.start_excess
            .add(&self.total)
            .checked_sub(&self.segment.degree())
            .expect("total dominates the segment degree")
    }

    pub fn degree(&self) -> &Degree {
        &self.total
    }
}

/// A vertex class (w, c) is realizable when some boundary path at w avoids
/// every color in the support of c.
pub fn is_realizable(g: &KGraph, v: &DVertex) -> Result<bool> {
    let support = v.excess.support();
    if support.is_empty() {
        return Ok(true);
    }
    Ok(boundary_paths(g, v.base)?.iter().any(|y| {
        let d = y.degree();
        support
            .iter()
            .all(|&i| matches!(d.coord(i), crate::degree::ExtCoord::Fin(x) if x == &num_bigint::BigUint::from(0u32)))
    }))
}

/// Validate the triple shape: the segment avoids the starting excess and the
/// end excess is realizable at its source.
pub fn validate_triple(g: &KGraph, t: &TriplePath) -> Result<()> {
    if !t.segment.degree().le(&t.total) {
        return Err(KpError::DegreeOutOfRange(
            t.segment.degree().to_string(),
            t.total.to_string(),
        ));
    }
    for i in t.start_excess.support() {
        if !t.segment.degree().coord(i).eq(&num_bigint::BigUint::from(0u32)) {
            return Err(KpError::Validation(format!(
                "segment uses color {} from the starting excess",
                i + 1
            )));
        }
    }
    let src = t.source(g);
    if !is_realizable(g, &src)? {
        return Err(KpError::Unrealizable(format!(
            "({}, {})",
            g.vertex_name(src.base),
            src.excess
        )));
    }
    Ok(())
}

/// The embedding of the base graph: a path lambda becomes the class
/// (lambda, 0, d(lambda)).
pub fn iota(g: &KGraph, lambda: &Path) -> TriplePath {
    let k = g.rank();
    TriplePath {
        segment: lambda.clone(),
        start_excess: Degree::zero(k),
        total: lambda.degree(),
    }
}

/// The idempotent projection back onto the embedded copy.
pub fn pi(g: &KGraph, t: &TriplePath) -> TriplePath {
    iota(g, &t.segment)
}

/// Composition of classes; the composite degree is the sum of degrees.
pub fn d_compose(g: &KGraph, a: &TriplePath, b: &TriplePath) -> Result<TriplePath> {
    if a.source(g) != b.range() {
        return Err(KpError::NotComposable(
            format!("({}, {})", g.vertex_name(a.source(g).base), a.source(g).excess),
            format!("({}, {})", g.vertex_name(b.range().base), b.range().excess),
        ));
    }
    Ok(TriplePath {
        segment: compose(g, &a.segment, &b.segment)?,
        start_excess: a.start_excess.clone(),
        total: a.total.add(&b.total),
    })
}

/// Factorization of a class at m: the head keeps the starting excess, the
/// tail starts at whatever excess the head could not realize in the segment.
pub fn d_factor(g: &KGraph, t: &TriplePath, m: &Degree) -> Result<(TriplePath, TriplePath)> {
    if !m.le(&t.total) {
        return Err(KpError::DegreeOutOfRange(m.to_string(), t.total.to_string()));
    }
    let seg_cut = m.meet(&t.segment.degree());
    let (head_seg, tail_seg) = factor(g, &t.segment, &seg_cut)?;
    let head = TriplePath {
        segment: head_seg,
        start_excess: t.start_excess.clone(),
        total: m.clone(),
    };
    let tail = TriplePath {
        segment: tail_seg,
        start_excess: t.start_excess.add(m).checked_sub(&seg_cut).unwrap(),
        total: t.total.checked_sub(m).unwrap(),
    };
    Ok((head, tail))
}

/// All classes of a given degree from a vertex class, enumerated on the base
/// graph: segments below the degree that avoid the excess and end
/// realizably.
pub fn d_paths(g: &KGraph, v: &DVertex, n: &Degree) -> Result<Vec<TriplePath>> {
    if !is_realizable(g, v)? {
        return Err(KpError::Unrealizable(format!(
            "({}, {})",
            g.vertex_name(v.base),
            v.excess
        )));
    }
    let mask: BTreeSet<usize> = v.excess.support().into_iter().collect();
    let mut out = Vec::new();
    for m in degree_box(n) {
        if mask.iter().any(|&i| !m.coord(i).eq(&num_bigint::BigUint::from(0u32))) {
            continue;
        }
        for seg in paths_of_degree(g, v.base, &m) {
            let t = TriplePath {
                segment: seg,
                start_excess: v.excess.clone(),
                total: n.clone(),
            };
            if is_realizable(g, &t.source(g))? {
                out.push(t);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// The materialized truncation of the desourcification: every realizable
/// vertex class with excess at most the bound, with the unit classes between
/// them as colored edges and squares generated by compose/factor.
pub struct Desourcification {
    pub base: Arc<KGraph>,
    pub graph: Arc<KGraph>,
    pub bound: Degree,
    vertex_of: BTreeMap<DVertex, VertexId>,
    dvertex_of: Vec<DVertex>,
    triple_of_edge: Vec<TriplePath>,
}

fn excess_tag(c: &Degree) -> String {
    c.coords()
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("-")
}

pub fn build_truncated(base: &Arc<KGraph>, bound: &Degree) -> Result<Desourcification> {
    let g = base.clone();
    let k = g.rank();
    // realizable vertex classes with excess <= bound, reachable from excess 0
    let mut verts: BTreeSet<DVertex> = BTreeSet::new();
    let mut frontier: Vec<DVertex> = Vec::new();
    for w in g.vertices() {
        let v = DVertex {
            base: w,
            excess: Degree::zero(k),
        };
        verts.insert(v.clone());
        frontier.push(v);
    }
    // unit edges out of a class
    let unit_edges = |v: &DVertex| -> Result<Vec<TriplePath>> {
        let mut out = Vec::new();
        for i in 0..k {
            out.extend(d_paths(&g, v, &Degree::basis(k, i))?);
        }
        Ok(out)
    };
    while let Some(v) = frontier.pop() {
        for t in unit_edges(&v)? {
            let tgt = t.source(&g);
            if tgt.excess.le(bound) && !verts.contains(&tgt) {
                verts.insert(tgt.clone());
                frontier.push(tgt);
            }
        }
    }

    let verts: Vec<DVertex> = verts.into_iter().collect();
    let vertex_name = |v: &DVertex| format!("{}@{}", g.vertex_name(v.base), excess_tag(&v.excess));
    let mut spec = GraphSpec {
        rank: k,
        vertices: verts.iter().map(vertex_name).collect(),
        ..Default::default()
    };

    // edges: unit triples between materialized classes
    let mut triples: Vec<TriplePath> = Vec::new();
    let mut edge_name_of: BTreeMap<TriplePath, String> = BTreeMap::new();
    let in_set: BTreeSet<DVertex> = verts.iter().cloned().collect();
    for v in &verts {
        for t in unit_edges(v)? {
            if !in_set.contains(&t.source(&g)) {
                continue;
            }
            let color = t.total.support()[0];
            let name = if t.segment.is_vertex() {
                format!(
                    "{}@{}!{}",
                    g.vertex_name(t.segment.range()),
                    excess_tag(&t.start_excess),
                    color + 1
                )
            } else {
                let e = t.segment.sequence()[0];
                format!("{}@{}", g.edge(e).name, excess_tag(&t.start_excess))
            };
            spec.edges.push((
                name.clone(),
                color,
                vertex_name(&t.range()),
                vertex_name(&t.source(&g)),
            ));
            edge_name_of.insert(t.clone(), name);
            triples.push(t);
        }
    }

    // squares: both factorizations of every composable bicolored pair
    for a in &triples {
        for b in &triples {
            let ca = a.total.support()[0];
            let cb = b.total.support()[0];
            if ca >= cb || a.source(&g) != b.range() {
                continue;
            }
            let big = d_compose(&g, a, b)?;
            let (b2, a2) = d_factor(&g, &big, &Degree::basis(k, cb))?;
            let (na, nb) = (&edge_name_of[a], &edge_name_of[b]);
            let nb2 = edge_name_of.get(&b2).ok_or_else(|| {
                KpError::MarginTooSmall(format!("square factor missing for {nb}"))
            })?;
            let na2 = edge_name_of.get(&a2).ok_or_else(|| {
                KpError::MarginTooSmall(format!("square factor missing for {na}"))
            })?;
            spec.squares
                .push((na.clone(), nb.clone(), nb2.clone(), na2.clone()));
        }
    }

    let trunc = KGraph::build(&spec)?;
    let mut vertex_of = BTreeMap::new();
    let mut dvertex_of = Vec::new();
    for (i, v) in verts.iter().enumerate() {
        vertex_of.insert(v.clone(), VertexId(i as u32));
        dvertex_of.push(v.clone());
    }
    // map truncation edge ids back to their triples, in edge-id order
    let mut triple_of_edge = vec![None; trunc.edge_count()];
    for t in &triples {
        let name = &edge_name_of[t];
        let id = trunc.edge_by_name(name).expect("edge was declared");
        triple_of_edge[id.0 as usize] = Some(t.clone());
    }
    Ok(Desourcification {
        base: g,
        graph: trunc,
        bound: bound.clone(),
        vertex_of,
        dvertex_of,
        triple_of_edge: triple_of_edge.into_iter().map(Option::unwrap).collect(),
    })
}

impl Desourcification {
    pub fn dvertex(&self, v: VertexId) -> &DVertex {
        &self.dvertex_of[v.0 as usize]
    }

    pub fn vertex_of(&self, v: &DVertex) -> Option<VertexId> {
        self.vertex_of.get(v).copied()
    }

    pub fn edge_triple(&self, e: EdgeId) -> &TriplePath {
        &self.triple_of_edge[e.0 as usize]
    }

    /// Vertices whose every color stays strictly inside the excess bound;
    /// edges out of these never leave the materialized region.
    pub fn interior_vertices(&self) -> Vec<VertexId> {
        self.graph
            .vertices()
            .filter(|&v| {
                let c = &self.dvertex(v).excess;
                (0..self.graph.rank()).all(|i| c.coord(i) < self.bound.coord(i))
            })
            .collect()
    }

    pub fn iota_vertex(&self, w: VertexId) -> VertexId {
        self.vertex_of[&DVertex {
            base: w,
            excess: Degree::zero(self.base.rank()),
        }]
    }

    pub fn is_iota_vertex(&self, v: VertexId) -> bool {
        self.dvertex(v).excess.is_zero()
    }

    /// The embedded image of a base path as a truncation path.
    pub fn iota_path(&self, lambda: &Path) -> Result<Path> {
        self.triple_to_path(&iota(&self.base, lambda))
    }

    /// Realize a class as a truncation path by factoring it into unit
    /// classes; fails when the class leaves the materialized region.
    pub fn triple_to_path(&self, t: &TriplePath) -> Result<Path> {
        let g = &self.base;
        let k = g.rank();
        let mut rest = t.clone();
        let mut seq = Vec::new();
        let range = self
            .vertex_of(&t.range())
            .ok_or_else(|| KpError::MarginTooSmall("class range outside bound".into()))?;
        for color in 0..k {
            for _ in 0..rest.total.coord_usize(color) {
                let (unit, tail) = d_factor(g, &rest, &Degree::basis(k, color))?;
                let name = self.unit_edge_name(&unit)?;
                let id = self
                    .graph
                    .edge_by_name(&name)
                    .ok_or_else(|| KpError::MarginTooSmall(format!("unit class {name} outside bound")))?;
                seq.push(id);
                rest = tail;
            }
        }
        Path::from_sequence(&self.graph, range, seq)
    }

    fn unit_edge_name(&self, t: &TriplePath) -> Result<String> {
        let g = &self.base;
        let color = t.total.support()[0];
        Ok(if t.segment.is_vertex() {
            format!(
                "{}@{}!{}",
                g.vertex_name(t.segment.range()),
                excess_tag(&t.start_excess),
                color + 1
            )
        } else {
            let e = t.segment.sequence()[0];
            format!("{}@{}", g.edge(e).name, excess_tag(&t.start_excess))
        })
    }

    /// The class of a truncation path, by composing its unit classes.
    pub fn path_to_triple(&self, p: &Path) -> Result<TriplePath> {
        let g = &self.base;
        let start = self.dvertex(p.range()).clone();
        let mut acc = TriplePath {
            segment: Path::vertex(g, start.base),
            start_excess: start.excess,
            total: Degree::zero(g.rank()),
        };
        for e in p.sequence() {
            acc = d_compose(g, &acc, self.edge_triple(e))?;
        }
        Ok(acc)
    }

    /// The projection applied to a truncation path: land back on the
    /// embedded copy.
    pub fn pi_path(&self, p: &Path) -> Result<Path> {
        let t = self.path_to_triple(p)?;
        self.triple_to_path(&pi(&self.base, &t))
    }

    /// Every interior vertex must have an edge of every color.
    pub fn check_no_sources(&self) -> Vec<String> {
        let mut missing = Vec::new();
        for v in self.interior_vertices() {
            for i in 0..self.graph.rank() {
                if self.graph.out_edges(v, i).is_empty() {
                    missing.push(format!(
                        "vertex {} has no color-{} edge",
                        self.graph.vertex_name(v),
                        i + 1
                    ));
                }
            }
        }
        missing
    }

    /// Push an algebra element through the embedding, renormalizing in the
    /// truncation.
    pub fn embed_algebra<R: Ring + PartialEq>(
        &self,
        ring: &R,
        a: &AlgebraElem<R>,
    ) -> Result<AlgebraElem<R>> {
        if !a.graph().same_graph(&self.base) {
            return Err(KpError::GraphMismatch);
        }
        if !a.level().le(&self.bound) {
            return Err(KpError::MarginTooSmall(format!(
                "level {} exceeds the bound {}",
                a.level(),
                self.bound
            )));
        }
        let mut terms = Vec::new();
        for ((alpha, beta), r) in a.terms() {
            terms.push((self.iota_path(alpha)?, self.iota_path(beta)?, r.clone()));
        }
        let raw = AlgebraElem::from_terms(
            self.graph.clone(),
            ring.clone(),
            Degree::zero(self.graph.rank()),
            Vec::new(),
        )?;
        let mut acc = raw;
        for (al, be, r) in terms {
            let one = AlgebraElem::from_terms(
                self.graph.clone(),
                ring.clone(),
                be.degree(),
                vec![(al, be, r)],
            )?;
            acc = acc.add(&one)?;
        }
        acc.raise_level(&a.level().join(acc.level()))
    }

    /// Whether every term of an element has both ranges on the embedded
    /// copy; this cuts out the subalgebra the base algebra maps onto.
    pub fn in_embedded_corner<R: Ring + PartialEq>(&self, a: &AlgebraElem<R>) -> bool {
        a.terms().keys().all(|(alpha, beta)| {
            self.is_iota_vertex(alpha.range()) && self.is_iota_vertex(beta.range())
        })
    }
}

/// Lemma-style check: minimal common extensions computed in the truncation
/// agree with the embedded image of those computed downstairs.
pub fn min_ext_check(d: &Desourcification, bound: &Degree) -> Result<Vec<String>> {
    // every path involved starts on the embedded copy and has degree at most
    // the join of the pair degrees, so its classes stay below the bound
    if !bound.le(&d.bound) {
        return Err(KpError::MarginTooSmall(format!(
            "need bound {} but the truncation holds {}",
            bound, d.bound
        )));
    }
    let g = &d.base;
    let mut failures = Vec::new();
    for v in g.vertices() {
        for m1 in degree_box(bound) {
            for m2 in degree_box(bound) {
                for lam in paths_of_degree(g, v, &m1) {
                    for mu in paths_of_degree(g, v, &m2) {
                        let down: BTreeSet<(Path, Path)> = min_common_ext(g, &lam, &mu)
                            .into_iter()
                            .map(|(a, b)| Ok((d.iota_path(&a)?, d.iota_path(&b)?)))
                            .collect::<Result<_>>()?;
                        let up: BTreeSet<(Path, Path)> = min_common_ext(
                            &d.graph,
                            &d.iota_path(&lam)?,
                            &d.iota_path(&mu)?,
                        )
                        .into_iter()
                        .collect();
                        if down != up {
                            failures.push(format!(
                                "extension sets differ at ({}, {})",
                                lam.display(g),
                                mu.display(g)
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(failures)
}

#[derive(Debug, Clone, Default)]
pub struct MoritaReport {
    pub factored: usize,
    pub products_in_corner: usize,
    pub failures: Vec<String>,
}

impl MoritaReport {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The span identities behind the Morita context: every truncated spanning
/// element factors as m.n with m ranged in the embedded copy on the ghost
/// side and n on the path side, and products n.m land in the embedded
/// corner.
pub fn morita_spans_check<R: Ring + PartialEq>(
    d: &Desourcification,
    ring: &R,
    bound: &Degree,
) -> Result<MoritaReport> {
    let need = bound.add(bound);
    if !need.le(&d.bound) {
        return Err(KpError::MarginTooSmall(format!(
            "need bound {} but the truncation holds {}",
            need, d.bound
        )));
    }
    let tg = &d.graph;
    let mut rep = MoritaReport::default();
    // spanning pairs of the truncated algebra up to the bound
    let mut pairs: Vec<(Path, Path)> = Vec::new();
    for v in tg.vertices() {
        for m1 in degree_box(bound) {
            for m2 in degree_box(bound) {
                for alpha in paths_of_degree(tg, v, &m1) {
                    for w in tg.vertices() {
                        for beta in paths_of_degree(tg, w, &m2) {
                            if alpha.source(tg) == beta.source(tg) {
                                pairs.push((alpha.clone(), beta.clone()));
                            }
                        }
                    }
                }
            }
        }
    }
    let elem = |alpha: &Path, beta: &Path| -> Result<AlgebraElem<R>> {
        AlgebraElem::from_terms(
            d.graph.clone(),
            ring.clone(),
            beta.degree(),
            vec![(alpha.clone(), beta.clone(), ring.one())],
        )
    };
    for (alpha, beta) in &pairs {
        rep.factored += 1;
        let src = d.dvertex(alpha.source(tg)).clone();
        let target = elem(alpha, beta)?;
        // the interposed class: trivial when the source is on the embedded
        // copy, otherwise the pure-excess class from iota(w) down to (w, c)
        let lam: Path = if src.excess.is_zero() {
            Path::vertex(tg, alpha.source(tg))
        } else {
            d.triple_to_path(&TriplePath {
                segment: Path::vertex(&d.base, src.base),
                start_excess: Degree::zero(d.base.rank()),
                total: src.excess.clone(),
            })?
        };
        if !d.is_iota_vertex(lam.range()) {
            rep.failures.push(format!(
                "interposed class at {} does not start on the embedded copy",
                tg.vertex_name(alpha.source(tg))
            ));
            continue;
        }
        let m = elem(alpha, &lam)?;
        let n = elem(&lam, beta)?;
        match m.mul(&n) {
            Ok(prod) => {
                if !prod.equals(&target)? {
                    rep.failures.push(format!(
                        "factorization fails at ({}, {})",
                        alpha.display(tg),
                        beta.display(tg)
                    ));
                }
            }
            Err(e) => rep.failures.push(format!(
                "factorization errored at ({}, {}): {e}",
                alpha.display(tg),
                beta.display(tg)
            )),
        }
    }
    // products n.m land in the embedded corner
    for (alpha, beta) in &pairs {
        if !d.is_iota_vertex(alpha.range()) {
            continue;
        }
        for (gamma, delta) in &pairs {
            if !d.is_iota_vertex(delta.range()) {
                continue;
            }
            rep.products_in_corner += 1;
            let n = elem(alpha, beta)?;
            let m = elem(gamma, delta)?;
            let prod = n.mul(&m)?;
            if !d.in_embedded_corner(&prod) {
                rep.failures.push(format!(
                    "product ({}, {}).({}, {}) leaves the embedded corner",
                    alpha.display(tg),
                    beta.display(tg),
                    gamma.display(tg),
                    delta.display(tg)
                ));
            }
        }
    }
    Ok(rep)
}

/// Transport a saturated hereditary set of the truncation down to the base
/// graph; membership depends only on the base vertex, and sets violating
/// that coherence are boundary artifacts.
pub fn ideal_transport(d: &Desourcification, h: &BTreeSet<VertexId>) -> Result<BTreeSet<VertexId>> {
    if !crate::ideal::is_saturated_hereditary(&d.graph, h) {
        return Err(KpError::NotSaturatedHereditary(
            "input set is not closed in the truncation".into(),
        ));
    }
    let s: BTreeSet<VertexId> = d
        .base
        .vertices()
        .filter(|&w| h.contains(&d.iota_vertex(w)))
        .collect();
    let cylinder: BTreeSet<VertexId> = d
        .graph
        .vertices()
        .filter(|&v| s.contains(&d.dvertex(v).base))
        .collect();
    if &cylinder != h {
        return Err(KpError::TransportAtBoundary(
            "membership is not determined by the base vertex".into(),
        ));
    }
    if !crate::ideal::is_saturated_hereditary(&d.base, &s) {
        return Err(KpError::TransportAtBoundary(
            "projected set is not closed downstairs".into(),
        ));
    }
    Ok(s)
}

/// The inverse transport: lift a saturated hereditary set of the base graph
/// to the cylinder over it.
pub fn ideal_transport_inverse(
    d: &Desourcification,
    s: &BTreeSet<VertexId>,
) -> Result<BTreeSet<VertexId>> {
    if !crate::ideal::is_saturated_hereditary(&d.base, s) {
        return Err(KpError::NotSaturatedHereditary(
            "input set is not closed in the base graph".into(),
        ));
    }
    Ok(d.graph
        .vertices()
        .filter(|&v| s.contains(&d.dvertex(v).base))
        .collect())
}

/// Raw-representative oracle: classes as explicit boundary paths with index
/// data, compared by the defining equivalences. Composition here follows the
/// degree-additive form; the triple encoding must agree with it.
pub mod raw {
    use super::*;
    use crate::boundary::{compose_finite, shift};

    /// (x; (m, n)) with m <= n and n - m the degree of the class.
    #[derive(Clone, Debug)]
    pub struct RawPath {
        pub x: BPath,
        pub m: Degree,
        pub n: Degree,
    }

    /// The defining equivalence: equal windows, equal unrealized excess,
    /// equal degree.
    pub fn raw_eq(g: &KGraph, a: &RawPath, b: &RawPath) -> bool {
        let window = |r: &RawPath| {
            let d = r.x.degree();
            let full = r.x.cut(g, &d.meet_finite(&r.n));
            let (_, seg) = factor(g, &full, &d.meet_finite(&r.m)).expect("meet in range");
            seg
        };
        let unrealized = |r: &RawPath| {
            r.m.checked_sub(&r.x.degree().meet_finite(&r.m)).unwrap()
        };
        window(a) == window(b)
            && unrealized(a) == unrealized(b)
            && a.n.checked_sub(&a.m) == b.n.checked_sub(&b.m)
    }

    /// Composition of representatives; the second index of the composite is
    /// n + q - p so that degrees add.
    pub fn raw_compose(g: &KGraph, a: &RawPath, b: &RawPath) -> Result<RawPath> {
        let da = a.x.degree();
        let db = b.x.degree();
        let head = a.x.cut(g, &da.meet_finite(&a.n));
        let tail = shift(g, &b.x, &db.meet_finite(&b.m))?;
        let z = compose_finite(g, &head, &tail)?;
        let q_minus_p = b.n.checked_sub(&b.m).unwrap();
        Ok(RawPath {
            x: z,
            m: a.m.clone(),
            n: a.n.add(&q_minus_p),
        })
    }

    /// Project a representative to its class invariants.
    pub fn to_triple(g: &KGraph, r: &RawPath) -> TriplePath {
        let d = r.x.degree();
        let m_cut = d.meet_finite(&r.m);
        let n_cut = d.meet_finite(&r.n);
        let full = r.x.cut(g, &n_cut);
        let (_, segment) = factor(g, &full, &m_cut).expect("meet within degree");
        TriplePath {
            segment,
            start_excess: r.m.checked_sub(&m_cut).unwrap(),
            total: r.n.checked_sub(&r.m).unwrap(),
        }
    }

    /// Choose a representative for a class using a realizability witness.
    pub fn from_triple(g: &KGraph, t: &TriplePath) -> Result<RawPath> {
        let src = t.source(g);
        let support: BTreeSet<usize> = src.excess.support().into_iter().collect();
        let witness = boundary_paths(g, src.base)?
            .into_iter()
            .find(|y| {
                support.iter().all(|&i| {
                    matches!(y.degree().coord(i), crate::degree::ExtCoord::Fin(z) if z == &num_bigint::BigUint::from(0u32))
                })
            })
            .ok_or_else(|| KpError::Unrealizable(format!("({}, {})", g.vertex_name(src.base), src.excess)))?;
        let x = compose_finite(g, &t.segment, &witness)?;
        Ok(RawPath {
            x,
            m: t.start_excess.clone(),
            n: t.start_excess.add(&t.total),
        })
    }
}
