//! Hereditary and saturated vertex sets, the lattice they form, the graded
//! basic ideals they generate, and the simplicity predicates.

use crate::algebra::AlgebraElem;
use crate::boundary::{is_aperiodic, is_cofinal, Aperiodicity};
use crate::degree::{degree_box, Degree};
use crate::error::{KpError, Result};
use crate::graph::{KGraph, VertexId};
use crate::path::{paths_le, paths_of_degree, Path};
use crate::ring::Ring;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

pub type VertexSet = BTreeSet<VertexId>;

/// Least hereditary superset: close under following paths to their sources.
pub fn hereditary_closure(g: &KGraph, seed: &VertexSet) -> VertexSet {
    let mut out = seed.clone();
    let mut changed = true;
    while changed {
        changed = false;
        for color in 0..g.rank() {
            for &e in g.edges_of_color(color) {
                if out.contains(&g.edge(e).range) && out.insert(g.edge(e).source) {
                    changed = true;
                }
            }
        }
    }
    out
}

/// Least saturated hereditary superset, alternating both closure rules:
/// hereditary, and v joins when s(vLambda^{<=e_i}) lands inside for some i.
pub fn saturated_closure(g: &KGraph, seed: &VertexSet) -> VertexSet {
    let mut out = hereditary_closure(g, seed);
    loop {
        let mut changed = false;
        for v in g.vertices() {
            if out.contains(&v) {
                continue;
            }
            for i in 0..g.rank() {
                let le = paths_le(g, v, &Degree::basis(g.rank(), i));
                if le.iter().all(|p| out.contains(&p.source(g))) {
                    out.insert(v);
                    changed = true;
                    break;
                }
            }
        }
        if !changed {
            break;
        }
        out = hereditary_closure(g, &out);
    }
    out
}

pub fn is_hereditary(g: &KGraph, set: &VertexSet) -> bool {
    hereditary_closure(g, set) == *set
}

pub fn is_saturated_hereditary(g: &KGraph, set: &VertexSet) -> bool {
    saturated_closure(g, set) == *set
}

/// The lattice of saturated hereditary subsets with its Hasse diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatHerLattice {
    pub sets: Vec<VertexSet>,
    /// covering pairs (i, j) meaning sets[i] is covered by sets[j]
    pub hasse: Vec<(usize, usize)>,
}

/// All saturated hereditary subsets: every closed set is the join of
/// singleton closures, so the lattice is generated by joining them.
pub fn enumerate_sat_her(g: &KGraph) -> SatHerLattice {
    let mut sets: BTreeSet<VertexSet> = BTreeSet::new();
    sets.insert(VertexSet::new());
    let gens: Vec<VertexSet> = g
        .vertices()
        .map(|v| saturated_closure(g, &BTreeSet::from([v])))
        .collect();
    let mut frontier: Vec<VertexSet> = sets.iter().cloned().collect();
    while let Some(cur) = frontier.pop() {
        for gen in &gens {
            let mut un = cur.clone();
            un.extend(gen.iter().copied());
            let joined = saturated_closure(g, &un);
            if sets.insert(joined.clone()) {
                frontier.push(joined);
            }
        }
    }
    let mut sets: Vec<VertexSet> = sets.into_iter().collect();
    sets.sort_by_key(|s| (s.len(), s.iter().copied().collect::<Vec<_>>()));
    let mut hasse = Vec::new();
    for (i, a) in sets.iter().enumerate() {
        for (j, b) in sets.iter().enumerate() {
            if i == j || !a.is_subset(b) {
                continue;
            }
            let covered = sets
                .iter()
                .enumerate()
                .any(|(m, c)| m != i && m != j && a.is_subset(c) && c.is_subset(b));
            if !covered {
                hasse.push((i, j));
            }
        }
    }
    SatHerLattice { sets, hasse }
}

/// Lattice join: the closure of the union.
pub fn lattice_join(g: &KGraph, a: &VertexSet, b: &VertexSet) -> VertexSet {
    let mut un = a.clone();
    un.extend(b.iter().copied());
    saturated_closure(g, &un)
}

/// Lattice meet: the intersection, which is checked to be closed.
pub fn lattice_meet(g: &KGraph, a: &VertexSet, b: &VertexSet) -> Result<VertexSet> {
    let meet: VertexSet = a.intersection(b).copied().collect();
    if !is_saturated_hereditary(g, &meet) {
        return Err(KpError::NotSaturatedHereditary(
            "intersection is not closed".into(),
        ));
    }
    Ok(meet)
}

/// The basic graded ideal generated by the projections of a saturated
/// hereditary set.
#[derive(Debug, Clone)]
pub struct IdealHandle {
    graph: Arc<KGraph>,
    generators: VertexSet,
}

impl IdealHandle {
    pub fn new(graph: Arc<KGraph>, set: VertexSet) -> Result<IdealHandle> {
        if !is_saturated_hereditary(&graph, &set) {
            return Err(KpError::NotSaturatedHereditary(format!(
                "{{{}}}",
                set.iter()
                    .map(|v| graph.vertex_name(*v))
                    .collect::<Vec<_>>()
                    .join(",")
            )));
        }
        Ok(IdealHandle {
            graph,
            generators: set,
        })
    }

    pub fn generators(&self) -> &VertexSet {
        &self.generators
    }

    /// Membership: every term of the normal form has its common source in
    /// the generating set.
    pub fn contains<R: Ring + PartialEq>(&self, a: &AlgebraElem<R>) -> Result<bool> {
        if !a.graph().same_graph(&self.graph) {
            return Err(KpError::GraphMismatch);
        }
        Ok(a.terms()
            .keys()
            .all(|(alpha, _)| self.generators.contains(&alpha.source(&self.graph))))
    }
}

/// Spanning pairs (alpha, beta) with degrees at most `bound` and a common
/// source, optionally restricted to sources in a set.
fn spanning_pairs(g: &KGraph, bound: &Degree, sources: Option<&VertexSet>) -> Vec<(Path, Path)> {
    let mut by_source: BTreeMap<VertexId, Vec<Path>> = BTreeMap::new();
    for v in g.vertices() {
        for m in degree_box(bound) {
            for p in paths_of_degree(g, v, &m) {
                by_source.entry(p.source(g)).or_default().push(p);
            }
        }
    }
    let mut out = Vec::new();
    for (src, paths) in &by_source {
        if let Some(s) = sources {
            if !s.contains(src) {
                continue;
            }
        }
        for a in paths {
            for b in paths {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Brute-force ideal closure at a degree bound: multiply the generating
/// projections by spanning elements on both sides and record which spanning
/// pairs appear. Cross-validates the normal-form membership test.
pub fn bruteforce_ideal_pairs<R: Ring + PartialEq>(
    graph: &Arc<KGraph>,
    ring: &R,
    set: &VertexSet,
    bound: &Degree,
) -> Result<BTreeSet<(Path, Path)>> {
    let g = graph.clone();
    let mut reached: BTreeSet<(Path, Path)> = BTreeSet::new();
    for &v in set {
        reached.insert((Path::vertex(&g, v), Path::vertex(&g, v)));
    }
    let span = spanning_pairs(&g, bound, None);
    let mut frontier: Vec<(Path, Path)> = reached.iter().cloned().collect();
    while let Some((a, b)) = frontier.pop() {
        let elem = AlgebraElem::from_terms(
            g.clone(),
            ring.clone(),
            b.degree(),
            vec![(a.clone(), b.clone(), ring.one())],
        )?;
        for (l, m) in &span {
            let factor = AlgebraElem::from_terms(
                g.clone(),
                ring.clone(),
                m.degree(),
                vec![(l.clone(), m.clone(), ring.one())],
            )?;
            for prod in [factor.mul(&elem)?, elem.mul(&factor)?] {
                for (alpha, beta) in prod.terms().keys() {
                    if alpha.degree().le(bound)
                        && beta.degree().le(bound)
                        && reached.insert((alpha.clone(), beta.clone()))
                    {
                        frontier.push((alpha.clone(), beta.clone()));
                    }
                }
            }
        }
    }
    Ok(reached)
}

/// Tri-state verdict for predicates that depend on the bounded
/// aperiodicity search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(String),
    Unknown(String),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

/// Basic simplicity: cofinal and aperiodic.
pub fn is_basically_simple(g: &KGraph, bound: Option<&Degree>) -> Result<Verdict> {
    if let Err((x, v)) = is_cofinal(g)? {
        return Ok(Verdict::Fails(format!(
            "not cofinal: vertex {} cannot reach the boundary path {}",
            g.vertex_name(v),
            x.display(g)
        )));
    }
    Ok(match is_aperiodic(g, bound) {
        Aperiodicity::Yes(_) => Verdict::Holds,
        Aperiodicity::No { vertex, .. } => Verdict::Fails(format!(
            "aperiodicity fails at {}",
            g.vertex_name(vertex)
        )),
        Aperiodicity::Unknown(msg) => Verdict::Unknown(msg),
    })
}

/// Simplicity: basic simplicity plus a field of coefficients.
pub fn is_simple<R: Ring>(g: &KGraph, ring: &R, bound: Option<&Degree>) -> Result<Verdict> {
    let basic = is_basically_simple(g, bound)?;
    if !ring.is_field() {
        if let Verdict::Holds = basic {
            return Ok(Verdict::Fails("coefficient ring is not a field".into()));
        }
    }
    Ok(basic)
}

#[derive(Debug, Clone, Default)]
pub struct LatticeReport {
    pub ideal_count: usize,
    pub inclusion_checked: usize,
    pub distinctness_checked: usize,
    pub closure_cross_checked: usize,
    pub failures: Vec<String>,
}

impl LatticeReport {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The lattice correspondence: inclusions of generating sets give inclusions
/// of ideals, distinct sets give distinct ideals (projection witnesses), and
/// the brute-force ideal closure at the bound recovers exactly the spanning
/// pairs with source in the set.
pub fn lattice_correspondence_check<R: Ring + PartialEq>(
    graph: &Arc<KGraph>,
    ring: &R,
    bound: &Degree,
) -> Result<LatticeReport> {
    let g = graph.clone();
    let lattice = enumerate_sat_her(&g);
    let mut rep = LatticeReport {
        ideal_count: lattice.sets.len(),
        ..Default::default()
    };
    let handles: Vec<IdealHandle> = lattice
        .sets
        .iter()
        .map(|s| IdealHandle::new(g.clone(), s.clone()))
        .collect::<Result<_>>()?;

    for (i, h1) in handles.iter().enumerate() {
        for (j, h2) in handles.iter().enumerate() {
            if i == j {
                continue;
            }
            if lattice.sets[i].is_subset(&lattice.sets[j]) {
                // generator membership transfers along the inclusion
                rep.inclusion_checked += 1;
                for &v in h1.generators() {
                    let p = AlgebraElem::gen_p(g.clone(), ring.clone(), v);
                    if !h2.contains(&p)? {
                        rep.failures.push(format!(
                            "inclusion fails: p_{} outside the larger ideal",
                            g.vertex_name(v)
                        ));
                    }
                }
            } else {
                // some projection witnesses the difference
                rep.distinctness_checked += 1;
                let witness = lattice.sets[i].difference(&lattice.sets[j]).next().copied();
                match witness {
                    Some(v) => {
                        let p = AlgebraElem::gen_p(g.clone(), ring.clone(), v);
                        if h2.contains(&p)? {
                            rep.failures.push(format!(
                                "distinctness fails at p_{}",
                                g.vertex_name(v)
                            ));
                        }
                    }
                    None => rep.failures.push("incomparable sets without witness".into()),
                }
            }
        }
    }

    // brute-force closure agrees with the span description at the bound
    for (idx, h) in handles.iter().enumerate() {
        rep.closure_cross_checked += 1;
        let closure = bruteforce_ideal_pairs(&g, ring, h.generators(), bound)?;
        let expected: BTreeSet<(Path, Path)> = spanning_pairs(&g, bound, Some(h.generators()))
            .into_iter()
            .collect();
        if closure != expected {
            rep.failures.push(format!(
                "bounded ideal closure mismatch for lattice set {idx}: {} reached vs {} described",
                closure.len(),
                expected.len()
            ));
        }
        // membership accepts every reached pair
        for (alpha, beta) in &closure {
            let elem = AlgebraElem::from_terms(
                g.clone(),
                ring.clone(),
                beta.degree(),
                vec![(alpha.clone(), beta.clone(), ring.one())],
            )?;
            if !h.contains(&elem)? {
                rep.failures.push(format!(
                    "membership rejects reached pair ({}, {})",
                    alpha.display(&g),
                    beta.display(&g)
                ));
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Integers, Rationals};
    use crate::samples;

    fn named(g: &KGraph, names: &[&str]) -> VertexSet {
        names.iter().map(|n| g.vertex_by_name(n).unwrap()).collect()
    }

    #[test]
    fn closures_on_graph_c() {
        let g = samples::graph_c();
        let u = named(&g, &["u"]);
        let w = named(&g, &["w"]);
        assert_eq!(hereditary_closure(&g, &u), named(&g, &["u", "w"]));
        assert_eq!(hereditary_closure(&g, &w), w);
        assert_eq!(hereditary_closure(&g, &VertexSet::new()), VertexSet::new());
        // saturation pulls u back in through its blue edge
        assert_eq!(saturated_closure(&g, &w), named(&g, &["u", "w"]));
    }

    #[test]
    fn saturation_on_graph_a() {
        let g = samples::graph_a();
        let got = saturated_closure(&g, &named(&g, &["11"]));
        assert_eq!(got, named(&g, &["00", "10", "01", "11"]));
        let all: VertexSet = g.vertices().collect();
        assert_eq!(saturated_closure(&g, &all), all);
    }

    #[test]
    fn closures_are_idempotent_and_monotone() {
        for g in [
            samples::graph_a(),
            samples::graph_c(),
            samples::disjoint_loops(),
        ] {
            let verts: Vec<VertexId> = g.vertices().collect();
            for mask in 0..(1usize << verts.len()) {
                let seed: VertexSet = verts
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, v)| *v)
                    .collect();
                let c = saturated_closure(&g, &seed);
                assert_eq!(saturated_closure(&g, &c), c);
                assert!(seed.is_subset(&c));
                assert!(is_hereditary(&g, &c));
                assert!(is_saturated_hereditary(&g, &c));
            }
        }
    }

    #[test]
    fn lattice_shapes() {
        let gc = samples::graph_c();
        let lat = enumerate_sat_her(&gc);
        assert_eq!(lat.sets.len(), 2);
        assert_eq!(lat.sets[0], VertexSet::new());
        assert_eq!(lat.sets[1], gc.vertices().collect());

        let ga = samples::graph_a();
        assert_eq!(enumerate_sat_her(&ga).sets.len(), 2);

        let dl = samples::disjoint_loops();
        let lat = enumerate_sat_her(&dl);
        assert_eq!(lat.sets.len(), 4);
        // the diamond has 4 covering pairs
        assert_eq!(lat.hasse.len(), 4);
        // meet and join agree with intersection and closure of union
        let v1 = named(&dl, &["v1"]);
        let v2 = named(&dl, &["v2"]);
        assert_eq!(lattice_meet(&dl, &v1, &v2).unwrap(), VertexSet::new());
        assert_eq!(lattice_join(&dl, &v1, &v2), dl.vertices().collect());
    }

    #[test]
    fn membership_basics() {
        let g = samples::graph_c();
        let all: VertexSet = g.vertices().collect();
        let top = IdealHandle::new(g.clone(), all).unwrap();
        let bottom = IdealHandle::new(g.clone(), VertexSet::new()).unwrap();
        let u = g.vertex_by_name("u").unwrap();
        let pu = AlgebraElem::gen_p(g.clone(), Rationals, u);
        let zero = AlgebraElem::zero(g.clone(), Rationals);
        assert!(top.contains(&pu).unwrap());
        assert!(!bottom.contains(&pu).unwrap());
        assert!(bottom.contains(&zero).unwrap());
        // a non-closed set is rejected
        assert!(IdealHandle::new(g.clone(), named(&g, &["w"])).is_err());
    }

    #[test]
    fn membership_respects_grading() {
        let g = samples::disjoint_loops();
        let v1 = named(&g, &["v1"]);
        let ideal = IdealHandle::new(g.clone(), v1).unwrap();
        let f1 = Path::single_edge(&g, g.edge_by_name("f1").unwrap());
        let p = AlgebraElem::gen_p(g.clone(), Integers, g.vertex_by_name("v1").unwrap());
        let s = AlgebraElem::gen_s(g.clone(), Integers, &f1);
        let a = p.add(&s).unwrap();
        assert!(ideal.contains(&a).unwrap());
        for gd in a.graded_degrees() {
            assert!(ideal.contains(&a.graded_component(&gd)).unwrap());
        }
    }

    #[test]
    fn simplicity_verdicts() {
        let ga = samples::graph_a();
        assert!(is_simple(&ga, &Rationals, None).unwrap().holds());
        // basically simple over the integers, but not simple
        assert!(is_basically_simple(&ga, None).unwrap().holds());
        assert!(matches!(
            is_simple(&ga, &Integers, None).unwrap(),
            Verdict::Fails(_)
        ));
        let gc = samples::graph_c();
        assert!(matches!(
            is_simple(&gc, &Rationals, None).unwrap(),
            Verdict::Fails(_)
        ));
    }

    #[test]
    fn correspondence_check_passes() {
        let g = samples::disjoint_loops();
        let rep = lattice_correspondence_check(&g, &Rationals, &Degree::from_u64s(&[1])).unwrap();
        assert!(rep.all_pass(), "{:?}", rep.failures);
        assert_eq!(rep.ideal_count, 4);
    }
}
