//! Rank-2 Bratteli diagrams, their depth truncations, and the isomorphism of
//! a truncation's algebra onto a matrix algebra over Laurent polynomials.
//!
//! The blue subgraph is a Bratteli diagram (edges from level n+1 to level n),
//! the red subgraph a disjoint union of cycles within levels. Squares come
//! from the induced permutation of blue edges: for each blue e there is a
//! unique square f.e = F(e).h with f, h the red edges into r(e) and s(e).

use crate::algebra::AlgebraElem;
use crate::degree::Degree;
use crate::error::{KpError, Result};
use crate::graph::{EdgeId, GraphSpec, KGraph, VertexId};
use crate::matrix::Matrix;
use crate::path::{compose, paths_of_degree, Path};
use crate::ring::{Laurent, LaurentElem, Ring};
use num_bigint::BigInt;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

#[derive(Clone, Debug, Default)]
pub struct BratteliSpec {
    /// level -> red cycles -> vertex names in cycle order
    pub levels: Vec<Vec<Vec<String>>>,
    /// (edge name, range vertex, source vertex, F-image edge name)
    pub blue: Vec<(String, String, String, String)>,
}

/// Parse the spec format: `level <n>: cycle v1 v2 ... vm` lines and
/// `blue e: v -> w, F(e)=e'` lines.
pub fn parse_bratteli_spec(text: &str) -> Result<BratteliSpec> {
    let mut spec = BratteliSpec::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| KpError::Parse {
            line: lineno + 1,
            msg,
        };
        if let Some(rest) = line.strip_prefix("level") {
            let (idx, cycles) = rest
                .split_once(':')
                .ok_or_else(|| err("expected ':' after level index".into()))?;
            let idx: usize = idx
                .trim()
                .parse()
                .map_err(|_| err("bad level index".into()))?;
            while spec.levels.len() <= idx {
                spec.levels.push(Vec::new());
            }
            let mut words = cycles.split_whitespace();
            match words.next() {
                Some("cycle") => {}
                _ => return Err(err("expected keyword 'cycle'".into())),
            }
            let verts: Vec<String> = words.map(|w| w.to_string()).collect();
            if verts.is_empty() {
                return Err(err("empty cycle".into()));
            }
            spec.levels[idx].push(verts);
        } else if let Some(rest) = line.strip_prefix("blue") {
            // blue e: v -> w, F(e)=e'
            let (name, rest) = rest
                .split_once(':')
                .ok_or_else(|| err("expected ':' after edge name".into()))?;
            let (arrow, fpart) = rest
                .split_once(',')
                .ok_or_else(|| err("expected ', F(e)=...'".into()))?;
            let (range, source) = arrow
                .split_once("->")
                .ok_or_else(|| err("expected '->'".into()))?;
            let fimage = fpart
                .trim()
                .strip_prefix("F(")
                .and_then(|s| s.split_once(")="))
                .map(|(_, img)| img.trim().to_string())
                .ok_or_else(|| err("expected 'F(e)=e''".into()))?;
            spec.blue.push((
                name.trim().to_string(),
                range.trim().to_string(),
                source.trim().to_string(),
                fimage,
            ));
        } else {
            return Err(err(format!("unknown declaration '{line}'")));
        }
    }
    if spec.levels.is_empty() {
        return Err(KpError::Parse {
            line: 1,
            msg: "no levels declared".into(),
        });
    }
    Ok(spec)
}

pub fn serialize_bratteli_spec(spec: &BratteliSpec) -> String {
    let mut out = String::new();
    for (i, cycles) in spec.levels.iter().enumerate() {
        for c in cycles {
            out.push_str(&format!("level {i}: cycle {}\n", c.join(" ")));
        }
    }
    for (name, r, s, f) in &spec.blue {
        out.push_str(&format!("blue {name}: {r} -> {s}, F({name})={f}\n"));
    }
    out
}

/// A built diagram with its level bookkeeping.
pub struct BratteliGraph {
    pub graph: Arc<KGraph>,
    pub level_of: BTreeMap<VertexId, usize>,
    pub depth: usize,
}

/// The red edge out of each vertex is `rc_<vertex>`; it runs from the vertex
/// to its successor on the cycle.
fn red_name(v: &str) -> String {
    format!("rc_{v}")
}

/// Build the 2-graph of a spec truncated at the given depth (inclusive).
pub fn truncate_depth(spec: &BratteliSpec, depth: usize) -> Result<BratteliGraph> {
    if depth >= spec.levels.len() {
        return Err(KpError::Validation(format!(
            "depth {depth} exceeds the declared levels 0..{}",
            spec.levels.len() - 1
        )));
    }
    let mut g = GraphSpec {
        rank: 2,
        ..Default::default()
    };
    let mut level_of_name: BTreeMap<String, usize> = BTreeMap::new();
    // red successor/predecessor on each cycle
    let mut red_succ: BTreeMap<String, String> = BTreeMap::new();
    for (lvl, cycles) in spec.levels.iter().enumerate().take(depth + 1) {
        for cycle in cycles {
            for v in cycle {
                if level_of_name.insert(v.clone(), lvl).is_some() {
                    return Err(KpError::Validation(format!(
                        "vertex {v} appears in more than one cycle"
                    )));
                }
                g.vertices.push(v.clone());
            }
            for (i, v) in cycle.iter().enumerate() {
                let next = &cycle[(i + 1) % cycle.len()];
                red_succ.insert(v.clone(), next.clone());
                g.edges.push((red_name(v), 1, v.clone(), next.clone()));
            }
        }
    }
    let red_pred: BTreeMap<String, String> =
        red_succ.iter().map(|(a, b)| (b.clone(), a.clone())).collect();

    let kept: Vec<&(String, String, String, String)> = spec
        .blue
        .iter()
        .filter(|(_, r, s, _)| level_of_name.contains_key(r) && level_of_name.contains_key(s))
        .collect();
    let kept_names: BTreeSet<&String> = kept.iter().map(|(n, _, _, _)| n).collect();
    for (name, r, s, f) in &kept {
        let lr = level_of_name[r];
        let ls = level_of_name[s];
        if ls != lr + 1 {
            return Err(KpError::Validation(format!(
                "blue edge {name} does not go from level {} to level {}",
                lr + 1,
                lr
            )));
        }
        if !kept_names.contains(f) {
            return Err(KpError::Validation(format!(
                "F({name}) = {f} is not a blue edge of the truncation"
            )));
        }
        g.edges.push((name.clone(), 0, r.clone(), s.clone()));
    }
    // F must permute the blue edges of each level
    let mut image_count: BTreeMap<&String, usize> = BTreeMap::new();
    for (_, _, _, f) in &kept {
        *image_count.entry(f).or_default() += 1;
    }
    for (name, _, _, _) in &kept {
        if image_count.get(name).copied().unwrap_or(0) != 1 {
            return Err(KpError::Validation(format!(
                "F is not a bijection at blue edge {name}"
            )));
        }
    }
    // squares: f.e = F(e).h with f into r(e) and h into s(e)
    let by_name: BTreeMap<&String, &(String, String, String, String)> =
        kept.iter().map(|t| (&t.0, *t)).collect();
    for (name, r, s, fimg) in &kept {
        let f_red = red_name(&red_pred[r]);
        let h_red = red_name(&red_pred[s]);
        let (_, fr, fs, _) = by_name[fimg];
        // endpoint consistency of the induced square
        if fr != &red_pred[r] {
            return Err(KpError::Validation(format!(
                "F({name}) = {fimg} has range {fr}, expected {}",
                red_pred[r]
            )));
        }
        if fs != &red_pred[s] {
            return Err(KpError::Validation(format!(
                "F({name}) = {fimg} has source {fs}, expected {}",
                red_pred[s]
            )));
        }
        g.squares
            .push((fimg.clone(), h_red, f_red, name.clone()));
    }
    let graph = KGraph::build(&g)?;
    let level_of = level_of_name
        .iter()
        .map(|(n, l)| (graph.vertex_by_name(n).unwrap(), *l))
        .collect();
    Ok(BratteliGraph {
        graph,
        level_of,
        depth,
    })
}

/// Build the full declared diagram.
pub fn build_bratteli(spec: &BratteliSpec) -> Result<BratteliGraph> {
    truncate_depth(spec, spec.levels.len() - 1)
}

/// Orbit length of every blue edge under the induced permutation.
pub fn orders(spec: &BratteliSpec) -> Result<BTreeMap<String, u64>> {
    let f: BTreeMap<&String, &String> = spec.blue.iter().map(|(n, _, _, i)| (n, i)).collect();
    let mut out = BTreeMap::new();
    for (name, _, _, _) in &spec.blue {
        let mut cur = name;
        let mut l = 0u64;
        loop {
            cur = f
                .get(cur)
                .ok_or_else(|| KpError::Validation(format!("F undefined at {cur}")))?;
            l += 1;
            if cur == name {
                break;
            }
            if l as usize > spec.blue.len() {
                return Err(KpError::Validation("F is not a permutation".into()));
            }
        }
        out.insert(name.clone(), l);
    }
    Ok(out)
}

/// Blue-source structure underpinning the matrix units: the blue-source
/// vertices, the distinguished vertex, its minimal red cycle, and the index
/// set Y of blue paths with source among the sources.
pub struct MatrixUnits<R: Ring> {
    pub graph: Arc<KGraph>,
    pub ring: R,
    pub sources: Vec<VertexId>,
    pub dagger: VertexId,
    /// the red cycle at dagger, traversed once
    pub mu: Path,
    /// the cycle edge with range dagger, excluded from connectors
    pub dagger_edge: EdgeId,
    pub y: Vec<Path>,
    units: BTreeMap<(usize, usize), AlgebraElem<R>>,
}

/// Walk the red cycle from a vertex; errors unless it closes back without
/// branching (the isolated-cycle hypothesis).
fn red_cycle_from(g: &KGraph, start: VertexId) -> Result<Vec<EdgeId>> {
    let mut out = Vec::new();
    let mut cur = start;
    loop {
        let es = g.out_edges(cur, 1);
        if es.len() != 1 {
            return Err(KpError::Hypothesis(format!(
                "vertex {} has {} red edges, expected 1",
                g.vertex_name(cur),
                es.len()
            )));
        }
        out.push(es[0]);
        cur = g.edge(es[0]).source;
        if cur == start {
            return Ok(out);
        }
        if out.len() > g.edge_count() {
            return Err(KpError::Hypothesis(format!(
                "red walk from {} does not close",
                g.vertex_name(start)
            )));
        }
    }
}

fn blue_is_acyclic(g: &KGraph) -> bool {
    // follow blue edges; any walk longer than the vertex count repeats
    for v in g.vertices() {
        let mut frontier = vec![(v, 0usize)];
        while let Some((u, len)) = frontier.pop() {
            if len > g.vertex_count() {
                return false;
            }
            for &e in g.out_edges(u, 0) {
                if g.edge(e).source == v {
                    return false;
                }
                frontier.push((g.edge(e).source, len + 1));
            }
        }
    }
    true
}

impl<R: Ring + PartialEq> MatrixUnits<R> {
    /// Check the hypotheses (blue acyclic, isolated red cycles everywhere,
    /// all blue sources on one cycle) and build the unit family.
    pub fn new(graph: Arc<KGraph>, ring: R) -> Result<Self> {
        let g = graph.clone();
        if g.rank() != 2 {
            return Err(KpError::Hypothesis("rank must be 2".into()));
        }
        if !blue_is_acyclic(&g) {
            return Err(KpError::Hypothesis("blue subgraph has a cycle".into()));
        }
        // every vertex lies on an isolated red cycle
        for v in g.vertices() {
            red_cycle_from(&g, v)?;
        }
        let sources: Vec<VertexId> = g
            .vertices()
            .filter(|&v| g.out_edges(v, 0).is_empty())
            .collect();
        if sources.is_empty() {
            return Err(KpError::Hypothesis("no blue sources".into()));
        }
        let dagger = sources[0];
        let cycle_edges = red_cycle_from(&g, dagger)?;
        let on_cycle: BTreeSet<VertexId> =
            cycle_edges.iter().map(|&e| g.edge(e).range).collect();
        for &s in &sources {
            if !on_cycle.contains(&s) {
                return Err(KpError::Hypothesis(format!(
                    "blue source {} is not on the distinguished red cycle",
                    g.vertex_name(s)
                )));
            }
        }
        let mu = Path::from_sequence(&g, dagger, cycle_edges.clone())?;
        let dagger_edge = cycle_edges[0];

        // Y: blue paths with source among the blue sources
        let src_set: BTreeSet<VertexId> = sources.iter().copied().collect();
        let mut y = Vec::new();
        for v in g.vertices() {
            for t in 0..=g.vertex_count() as u64 {
                for p in paths_of_degree(&g, v, &Degree::from_u64s(&[t, 0])) {
                    if src_set.contains(&p.source(&g)) {
                        y.push(p);
                    }
                }
            }
        }
        y.sort();

        let mut me = MatrixUnits {
            graph,
            ring,
            sources,
            dagger,
            mu,
            dagger_edge,
            y,
            units: BTreeMap::new(),
        };
        for i in 0..me.y.len() {
            for j in 0..me.y.len() {
                let u = me.build_unit(i, j)?;
                me.units.insert((i, j), u);
            }
        }
        Ok(me)
    }

    /// The red connector between two sources: the unique red path avoiding
    /// the distinguished edge, returned as (path, true) when it runs from
    /// `a` to `b` and (path, false) when it runs from `b` to `a`.
    fn connector(&self, a: VertexId, b: VertexId) -> Result<(Path, bool)> {
        let g = &self.graph;
        for (from, to, forward) in [(a, b, true), (b, a, false)] {
            let mut seq = Vec::new();
            let mut cur = from;
            let mut ok = true;
            while cur != to {
                let e = g.out_edges(cur, 1)[0];
                if e == self.dagger_edge {
                    ok = false;
                    break;
                }
                seq.push(e);
                cur = g.edge(e).source;
                if seq.len() > g.edge_count() {
                    ok = false;
                    break;
                }
            }
            if ok && (from == to || !seq.is_empty()) {
                let p = Path::from_sequence(g, from, seq)?;
                return Ok((p, forward));
            }
            if from == to {
                return Ok((Path::vertex(g, from), true));
            }
        }
        Err(KpError::Hypothesis(format!(
            "no red connector between {} and {}",
            g.vertex_name(a),
            g.vertex_name(b)
        )))
    }

    fn build_unit(&self, i: usize, j: usize) -> Result<AlgebraElem<R>> {
        let g = &self.graph;
        let alpha = &self.y[i];
        let beta = &self.y[j];
        let (nu, forward) = self.connector(alpha.source(g), beta.source(g))?;
        if forward {
            // s(nu) = s(beta): theta = s_{alpha.nu} s_{beta*}
            let left = compose(g, alpha, &nu)?;
            AlgebraElem::from_terms(
                self.graph.clone(),
                self.ring.clone(),
                beta.degree(),
                vec![(left, beta.clone(), self.ring.one())],
            )
        } else {
            // s(nu) = s(alpha): theta = s_alpha s_{(beta.nu)*}
            let right = compose(g, beta, &nu)?;
            AlgebraElem::from_terms(
                self.graph.clone(),
                self.ring.clone(),
                right.degree(),
                vec![(alpha.clone(), right, self.ring.one())],
            )
        }
    }

    pub fn unit(&self, i: usize, j: usize) -> &AlgebraElem<R> {
        &self.units[&(i, j)]
    }

    /// The identity of the algebra: the sum of all vertex projections.
    pub fn one(&self) -> AlgebraElem<R> {
        let mut acc = AlgebraElem::zero(self.graph.clone(), self.ring.clone());
        for v in self.graph.vertices() {
            acc = acc
                .add(&AlgebraElem::gen_p(self.graph.clone(), self.ring.clone(), v))
                .expect("same graph");
        }
        acc
    }
}

/// The isomorphism onto the Y-indexed matrix algebra over Laurent
/// polynomials: entry (i, j) of the image of a is the corner element
/// theta(dagger, y_i) . a . theta(y_j, dagger) read off in powers of the
/// distinguished red cycle.
pub struct MatrixAlgebraIso<R: Ring> {
    pub units: MatrixUnits<R>,
    laurent: Laurent<R>,
    cycle_len: u64,
    dagger_index: usize,
}

impl<R: Ring + PartialEq> MatrixAlgebraIso<R> {
    pub fn new(graph: Arc<KGraph>, ring: R) -> Result<Self> {
        let units = MatrixUnits::new(graph, ring.clone())?;
        let cycle_len = units.mu.degree().coord_usize(1) as u64;
        let dagger_index = units
            .y
            .iter()
            .position(|p| p.is_vertex() && p.range() == units.dagger)
            .expect("dagger is a degree-0 element of Y");
        Ok(MatrixAlgebraIso {
            units,
            laurent: Laurent::new(ring),
            cycle_len,
            dagger_index,
        })
    }

    pub fn labels(&self) -> Vec<String> {
        self.units
            .y
            .iter()
            .map(|p| p.display(&self.units.graph))
            .collect()
    }

    /// Decode an element of the corner p_dagger . A . p_dagger as a Laurent
    /// polynomial in the cycle generator.
    fn decode_corner(&self, c: &AlgebraElem<R>) -> Result<LaurentElem<R::Elem>> {
        let g = &self.units.graph;
        let ring = &self.units.ring;
        let mut out = self.laurent.zero();
        for gd in c.graded_degrees() {
            let coords = gd.coords();
            if !coords[0].eq(&BigInt::from(0)) {
                return Err(KpError::Hypothesis(
                    "corner element has blue grading".into(),
                ));
            }
            let (exp, rem) = num_integer::Integer::div_rem(
                &i64::try_from(&coords[1]).map_err(|_| {
                    KpError::Hypothesis("corner grading exceeds representable powers".into())
                })?,
                &(self.cycle_len as i64),
            );
            if rem != 0 {
                return Err(KpError::Hypothesis(
                    "corner grading is not a multiple of the cycle length".into(),
                ));
            }
            let comp = c.graded_component(&gd);
            // the matching basis element: mu^exp, its ghost, or p_dagger
            let basis = if exp == 0 {
                AlgebraElem::gen_p(self.units.graph.clone(), ring.clone(), self.units.dagger)
            } else {
                let mut acc = Path::vertex(g, self.units.dagger);
                for _ in 0..exp.unsigned_abs() {
                    acc = compose(g, &acc, &self.units.mu)?;
                }
                if exp > 0 {
                    AlgebraElem::gen_s(self.units.graph.clone(), ring.clone(), &acc)
                } else {
                    AlgebraElem::gen_s_star(self.units.graph.clone(), ring.clone(), &acc)
                }
            };
            let basis = basis.raise_level(&comp.level().join(basis.level()))?;
            let comp = comp.raise_level(basis.level())?;
            let key = basis
                .terms()
                .keys()
                .next()
                .ok_or_else(|| KpError::Hypothesis("empty basis expansion".into()))?;
            let coeff = comp
                .terms()
                .get(key)
                .cloned()
                .unwrap_or_else(|| ring.zero());
            if !comp.equals(&basis.scalar_mul(&coeff))? {
                return Err(KpError::Hypothesis(
                    "corner component is not a multiple of a cycle power".into(),
                ));
            }
            out = self
                .laurent
                .add(&out, &self.laurent.monomial(exp, coeff));
        }
        Ok(out)
    }

    /// The matrix image of an element.
    pub fn apply(&self, a: &AlgebraElem<R>) -> Result<Matrix<Laurent<R>>> {
        let n = self.units.y.len();
        let mut m = Matrix::zero(self.laurent.clone(), self.labels());
        for i in 0..n {
            for j in 0..n {
                let sandwich = self
                    .units
                    .unit(self.dagger_index, i)
                    .mul(a)?
                    .mul(self.units.unit(j, self.dagger_index))?;
                *m.at_mut(i, j) = self.decode_corner(&sandwich)?;
            }
        }
        Ok(m)
    }

    /// Restrict to the corner cut by the projections of a vertex subset: the
    /// image is supported on the rows and columns ranged in that subset.
    pub fn corner_rows(&self, verts: &BTreeSet<VertexId>) -> Vec<usize> {
        self.units
            .y
            .iter()
            .enumerate()
            .filter(|(_, p)| verts.contains(&p.range()))
            .map(|(i, _)| i)
            .collect()
    }
}

/// The direct-sum decomposition of a depth truncation: one compressed
/// subalgebra per red cycle in the deepest level.
pub struct Summand<R: Ring> {
    pub vertices: BTreeSet<VertexId>,
    pub projection: AlgebraElem<R>,
}

pub fn decompose_summands<R: Ring + PartialEq>(
    b: &BratteliGraph,
    ring: &R,
) -> Result<Vec<Summand<R>>> {
    let g = &b.graph;
    let deepest: Vec<VertexId> = g
        .vertices()
        .filter(|v| b.level_of[v] == b.depth)
        .collect();
    let mut seen: BTreeSet<VertexId> = BTreeSet::new();
    let mut out = Vec::new();
    for &v in &deepest {
        if seen.contains(&v) {
            continue;
        }
        let cycle = red_cycle_from(g, v)?;
        let verts: BTreeSet<VertexId> = cycle.iter().map(|&e| g.edge(e).range).collect();
        seen.extend(verts.iter().copied());
        // P_i = sum of t_alpha t_alpha* over blue paths into the class
        let mut proj = AlgebraElem::zero(g.clone(), ring.clone());
        for w in g.vertices() {
            for t in 0..=g.vertex_count() as u64 {
                for alpha in paths_of_degree(g, w, &Degree::from_u64s(&[t, 0])) {
                    if verts.contains(&alpha.source(g)) {
                        let s = AlgebraElem::gen_s(g.clone(), ring.clone(), &alpha);
                        proj = proj.add(&s.mul(&s.star())?)?;
                    }
                }
            }
        }
        out.push(Summand {
            vertices: verts,
            projection: proj,
        });
    }
    Ok(out)
}
