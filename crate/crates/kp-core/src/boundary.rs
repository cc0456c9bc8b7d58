//! Boundary paths in eventually periodic form, their enumeration, and the
//! graph predicates (aperiodicity, cofinality) built on them.
//!
//! A boundary path is stored as a finite prefix plus an optional cycle
//! repeated forever. Graphs whose boundary-path spaces do not fit this
//! encoding are rejected with `NotEventuallyPeriodic` instead of being
//! approximated.

use crate::degree::{degree_box, Degree, ExtCoord, ExtDegree};
use crate::error::{KpError, Result};
use crate::graph::{KGraph, VertexId};
use crate::path::{compose, factor, paths_of_degree, Path};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// An eventually periodic boundary path: `prefix . cycle^infinity`, or just
/// `prefix` when `cycle` is absent.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BPath {
    prefix: Path,
    cycle: Option<Path>,
}

impl BPath {
    pub fn finite(prefix: Path) -> BPath {
        BPath {
            prefix,
            cycle: None,
        }
    }

    pub fn eventually_periodic(g: &KGraph, prefix: Path, cycle: Path) -> Result<BPath> {
        if cycle.is_vertex() {
            return Err(KpError::Validation("cycle must have nonzero degree".into()));
        }
        if cycle.range() != cycle.source(g) || cycle.range() != prefix.source(g) {
            return Err(KpError::NotComposable(
                g.vertex_name(prefix.source(g)).into(),
                g.vertex_name(cycle.range()).into(),
            ));
        }
        Ok(BPath {
            prefix,
            cycle: Some(cycle),
        })
    }

    pub fn prefix(&self) -> &Path {
        &self.prefix
    }

    pub fn cycle(&self) -> Option<&Path> {
        self.cycle.as_ref()
    }

    pub fn range(&self) -> VertexId {
        self.prefix.range()
    }

    pub fn degree(&self) -> ExtDegree {
        let pre = self.prefix.degree();
        let k = pre.rank();
        let cyc_support: BTreeSet<usize> = match &self.cycle {
            None => BTreeSet::new(),
            Some(c) => c.degree().support().into_iter().collect(),
        };
        ExtDegree::new(
            (0..k)
                .map(|i| {
                    if cyc_support.contains(&i) {
                        ExtCoord::Inf
                    } else {
                        ExtCoord::Fin(pre.coord(i).clone())
                    }
                })
                .collect(),
        )
    }

    /// A finite path `prefix . cycle^t` whose degree dominates `want` on the
    /// cycle's support.
    fn materialize(&self, g: &KGraph, want: &Degree) -> Path {
        let mut out = self.prefix.clone();
        if let Some(c) = &self.cycle {
            let per = c.degree();
            loop {
                let d = out.degree();
                let enough = (0..d.rank())
                    .all(|i| per.coord(i).is_zero() || d.coord(i) >= want.coord(i));
                if enough {
                    break;
                }
                out = compose(g, &out, c).expect("cycle is a loop at the prefix source");
            }
        }
        out
    }

    /// x(0, m /\ d(x)) — total on all m.
    pub fn cut(&self, g: &KGraph, m: &Degree) -> Path {
        let m = self.degree().meet_finite(m);
        let big = self.materialize(g, &m);
        factor(g, &big, &m).expect("meet is within the degree").0
    }

    /// The vertex x(n); requires n <= d(x).
    pub fn vertex_at(&self, g: &KGraph, n: &Degree) -> Result<VertexId> {
        if !self.degree().ge_finite(n) {
            return Err(KpError::DegreeOutOfRange(
                n.to_string(),
                self.degree().to_string(),
            ));
        }
        Ok(self.cut(g, n).source(g))
    }

    /// Window sizes sufficient to distinguish this path from `other`:
    /// exhausted coordinates exactly, infinite coordinates out to both
    /// prefixes plus twice the combined cycle period.
    fn compare_window(&self, other: &BPath) -> Degree {
        let k = self.prefix.degree().rank();
        let d1 = self.degree();
        let pre1 = self.prefix.degree();
        let pre2 = other.prefix.degree();
        let per = |b: &BPath, i: usize| -> BigUint {
            b.cycle
                .as_ref()
                .map(|c| c.degree().coord(i).clone())
                .filter(|p| !p.is_zero())
                .unwrap_or_else(BigUint::one)
        };
        Degree::new(
            (0..k)
                .map(|i| match d1.coord(i) {
                    ExtCoord::Fin(x) => x.clone(),
                    ExtCoord::Inf => {
                        let l = per(self, i).lcm(&per(other, i));
                        pre1.coord(i).max(pre2.coord(i)) + BigUint::from(2u32) * l
                    }
                })
                .collect(),
        )
    }

    /// Equality as graph morphisms: same degree and identical cuts on a
    /// window long enough to pin both periodic tails.
    pub fn eq_morphism(&self, g: &KGraph, other: &BPath) -> bool {
        if self.degree() != other.degree() || self.range() != other.range() {
            return false;
        }
        let w = self.compare_window(other).join(&other.compare_window(self));
        self.cut(g, &w) == other.cut(g, &w)
    }

    /// All vertices x(n), n <= d(x).
    pub fn visited_vertices(&self, g: &KGraph) -> BTreeSet<VertexId> {
        let w = self.compare_window(self);
        let big = self.materialize(g, &w);
        let dbig = big.degree();
        degree_box(&dbig)
            .iter()
            .map(|n| factor(g, &big, n).unwrap().0.source(g))
            .collect()
    }

    /// The boundary-path condition: whenever a finite coordinate i is
    /// exhausted at a vertex of the path, that vertex has no color-i edges.
    pub fn is_valid(&self, g: &KGraph) -> bool {
        if let Some(c) = &self.cycle {
            if c.is_vertex()
                || c.range() != c.source(g)
                || c.range() != self.prefix.source(g)
            {
                return false;
            }
        }
        let d = self.degree();
        let w = self.compare_window(self);
        let big = self.materialize(g, &w);
        for n in degree_box(&big.degree()) {
            let vtx = factor(g, &big, &n).unwrap().0.source(g);
            for i in 0..g.rank() {
                if let ExtCoord::Fin(di) = d.coord(i) {
                    if n.coord(i) == di && !g.out_edges(vtx, i).is_empty() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Reduce the cycle to its primitive root and absorb any prefix tail that
    /// already follows the cycle; finishes with the lexicographically least
    /// equivalent cycle rotation.
    pub fn normalize(mut self, g: &KGraph) -> BPath {
        let Some(mut cycle) = self.cycle.take() else {
            return self;
        };
        // primitive root
        let coords: Vec<BigUint> = cycle.degree().coords().to_vec();
        let gcd = coords
            .iter()
            .filter(|c| !c.is_zero())
            .fold(BigUint::zero(), |a, b| a.gcd(b));
        if let Ok(gcd_u) = usize::try_from(&gcd) {
            let mut best = None;
            for j in (2..=gcd_u).rev() {
                if gcd_u % j != 0 {
                    continue;
                }
                let root_deg = Degree::new(
                    coords.iter().map(|c| c / BigUint::from(j)).collect(),
                );
                let (root, _) = factor(g, &cycle, &root_deg).unwrap();
                if root.source(g) != root.range() {
                    continue;
                }
                let mut acc = root.clone();
                for _ in 1..j {
                    acc = compose(g, &acc, &root).unwrap();
                }
                if acc == cycle {
                    best = Some(root);
                    break;
                }
            }
            if let Some(r) = best {
                cycle = r;
            }
        }
        // absorb prefix edges that already match the periodic tail
        let k = g.rank();
        'absorb: loop {
            for i in 0..k {
                if self.prefix.degree().coord(i).is_zero()
                    || cycle.degree().coord(i).is_zero()
                {
                    continue;
                }
                let split = self
                    .prefix
                    .degree()
                    .checked_sub(&Degree::basis(k, i))
                    .unwrap();
                let (q, f) = factor(g, &self.prefix, &split).unwrap();
                let fc = compose(g, &f, &cycle).unwrap();
                let (new_cycle, f2) = factor(g, &fc, &cycle.degree()).unwrap();
                if f2 == f && new_cycle.range() == new_cycle.source(g) {
                    self.prefix = q;
                    cycle = new_cycle;
                    continue 'absorb;
                }
            }
            break;
        }
        // least rotation among rotations representing the same morphism
        let base = BPath {
            prefix: self.prefix.clone(),
            cycle: Some(cycle.clone()),
        };
        let mut best = cycle.clone();
        for m in degree_box(&cycle.degree()) {
            if m.is_zero() || m == cycle.degree() {
                continue;
            }
            let (head, tail) = factor(g, &cycle, &m).unwrap();
            if tail.range() != cycle.range() {
                continue;
            }
            let rot = compose(g, &tail, &head).unwrap();
            let cand = BPath {
                prefix: self.prefix.clone(),
                cycle: Some(rot.clone()),
            };
            if cand.eq_morphism(g, &base) && rot.sequence() < best.sequence() {
                best = rot;
            }
        }
        BPath {
            prefix: self.prefix,
            cycle: Some(best),
        }
    }

    pub fn display(&self, g: &KGraph) -> String {
        match &self.cycle {
            None => self.prefix.display(g),
            Some(c) => format!("{}.({})^inf", self.prefix.display(g), c.display(g)),
        }
    }
}

/// sigma^m(x): the shifted boundary path; m must be <= d(x).
pub fn shift(g: &KGraph, x: &BPath, m: &Degree) -> Result<BPath> {
    if !x.degree().ge_finite(m) {
        return Err(KpError::DegreeOutOfRange(
            m.to_string(),
            x.degree().to_string(),
        ));
    }
    let want = match x.cycle() {
        None => m.clone(),
        Some(c) => m.add(&c.degree()),
    };
    let big = x.materialize(g, &want);
    let (_, rest) = factor(g, &big, m)?;
    let out = BPath {
        prefix: rest,
        cycle: x.cycle.clone(),
    };
    Ok(out.normalize(g))
}

/// lambda . x for a finite path with s(lambda) = r(x).
pub fn compose_finite(g: &KGraph, lambda: &Path, x: &BPath) -> Result<BPath> {
    let prefix = compose(g, lambda, x.prefix())?;
    let out = BPath {
        prefix,
        cycle: x.cycle.clone(),
    };
    Ok(out.normalize(g))
}

/// All chain-simple paths from v using only the allowed colors, together
/// with the chain-simple cycles closing off such paths.
fn pure_paths_and_cycles(
    g: &KGraph,
    v: VertexId,
    allowed: &BTreeSet<usize>,
) -> (Vec<Path>, Vec<Path>) {
    let mut paths = Vec::new();
    let mut cycles = Vec::new();
    // stack entries: (sequence, chain of visited vertices, minimum color)
    let mut stack = vec![(Vec::new(), vec![v], 0usize)];
    while let Some((seq, chain, min_color)) = stack.pop() {
        let cur = *chain.last().unwrap();
        paths.push(Path::from_sequence(g, v, seq.clone()).unwrap());
        for color in min_color..g.rank() {
            if !allowed.contains(&color) {
                continue;
            }
            for &e in g.out_edges(cur, color) {
                let tgt = g.edge(e).source;
                if let Some(idx) = chain.iter().position(|&u| u == tgt) {
                    // closing a cycle at tgt: record it for the pumping check
                    let mut cyc_seq: Vec<_> = seq[idx..].to_vec();
                    cyc_seq.push(e);
                    cycles.push(Path::from_sequence(g, tgt, cyc_seq).unwrap());
                } else {
                    let mut seq2 = seq.clone();
                    seq2.push(e);
                    let mut chain2 = chain.clone();
                    chain2.push(tgt);
                    stack.push((seq2, chain2, color));
                }
            }
        }
    }
    (paths, cycles)
}

/// Periodic tails with infinite support exactly S, found by walking the
/// super-step digraph (one edge of every color of S per step) inside the
/// region of vertices that are dead outside S.
fn tails(g: &KGraph, w: VertexId, s_colors: &BTreeSet<usize>) -> Result<Vec<(Path, Path)>> {
    let k = g.rank();
    let region: BTreeSet<VertexId> = g
        .vertices()
        .filter(|&u| (0..k).all(|i| s_colors.contains(&i) || g.out_edges(u, i).is_empty()))
        .collect();
    if !region.contains(&w) {
        return Ok(Vec::new());
    }
    let chi = Degree::new(
        (0..k)
            .map(|i| {
                if s_colors.contains(&i) {
                    BigUint::one()
                } else {
                    BigUint::zero()
                }
            })
            .collect(),
    );
    let steps_from = |u: VertexId, live: &BTreeSet<VertexId>| -> Vec<Path> {
        paths_of_degree(g, u, &chi)
            .into_iter()
            .filter(|p| {
                degree_box(&p.degree()).iter().all(|n| {
                    let mid = factor(g, p, n).unwrap().0.source(g);
                    region.contains(&mid) && live.contains(&mid)
                })
            })
            .collect()
    };
    // greatest fixpoint: vertices with an unbounded continuation
    let mut live = region.clone();
    loop {
        let next: BTreeSet<VertexId> = live
            .iter()
            .copied()
            .filter(|&u| !steps_from(u, &live).is_empty())
            .collect();
        if next == live {
            break;
        }
        live = next;
    }
    if !live.contains(&w) {
        return Ok(Vec::new());
    }
    // reachable part and infinite-branching detection
    let mut reach = BTreeSet::from([w]);
    let mut frontier = vec![w];
    while let Some(u) = frontier.pop() {
        for p in steps_from(u, &live) {
            let t = p.source(g);
            if reach.insert(t) {
                frontier.push(t);
            }
        }
    }
    let succ: BTreeMap<VertexId, Vec<Path>> = reach
        .iter()
        .map(|&u| (u, steps_from(u, &live)))
        .collect();
    let mut on_cycle = BTreeSet::new();
    for &u in &reach {
        // is u reachable from itself in >= 1 step?
        let mut seen = BTreeSet::new();
        let mut fr: Vec<VertexId> = succ[&u].iter().map(|p| p.source(g)).collect();
        while let Some(z) = fr.pop() {
            if z == u {
                on_cycle.insert(u);
                break;
            }
            if seen.insert(z) && reach.contains(&z) {
                fr.extend(succ[&z].iter().map(|p| p.source(g)));
            }
        }
    }
    for &u in &reach {
        if succ[&u].len() >= 2 {
            // a branching vertex reachable from any cycle gives infinitely
            // many distinct tails
            let reachable_from_cycle = on_cycle.iter().any(|&z| {
                let mut seen = BTreeSet::from([z]);
                let mut fr = vec![z];
                while let Some(y) = fr.pop() {
                    if y == u {
                        return true;
                    }
                    for p in &succ[&y] {
                        let t = p.source(g);
                        if seen.insert(t) {
                            fr.push(t);
                        }
                    }
                }
                false
            });
            if reachable_from_cycle {
                return Err(KpError::NotEventuallyPeriodic(format!(
                    "branching at vertex {} is reachable from a cycle",
                    g.vertex_name(u)
                )));
            }
        }
    }
    // enumerate walks; each closes into a lasso at its first vertex revisit
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<Path>, Vec<VertexId>)> = vec![(Vec::new(), vec![w])];
    while let Some((walk, chain)) = stack.pop() {
        let cur = *chain.last().unwrap();
        for p in &succ[&cur] {
            let t = p.source(g);
            if let Some(idx) = chain.iter().position(|&u| u == t) {
                let mut rho = Path::vertex(g, w);
                for q in &walk[..idx] {
                    rho = compose(g, &rho, q).unwrap();
                }
                let mut cyc = Path::vertex(g, t);
                for q in &walk[idx..] {
                    cyc = compose(g, &cyc, q).unwrap();
                }
                cyc = compose(g, &cyc, p).unwrap();
                out.push((rho, cyc));
            } else {
                let mut walk2 = walk.clone();
                walk2.push(p.clone());
                let mut chain2 = chain.clone();
                chain2.push(t);
                stack.push((walk2, chain2));
            }
        }
    }
    Ok(out)
}

/// Candidate boundary paths from v with infinite support S, without the
/// pumping analysis (prefixes are chain-simple).
fn candidates_from(
    g: &KGraph,
    v: VertexId,
    s_colors: &BTreeSet<usize>,
) -> Result<Vec<BPath>> {
    let f_colors: BTreeSet<usize> = (0..g.rank()).filter(|i| !s_colors.contains(i)).collect();
    let (prefixes, _) = pure_paths_and_cycles(g, v, &f_colors);
    let mut out = Vec::new();
    for q in prefixes {
        if s_colors.is_empty() {
            let cand = BPath::finite(q);
            if cand.is_valid(g) {
                out.push(cand.normalize(g));
            }
        } else {
            for (rho, cyc) in tails(g, q.source(g), s_colors)? {
                let prefix = compose(g, &q, &rho).unwrap();
                let cand = BPath {
                    prefix,
                    cycle: Some(cyc),
                };
                if cand.is_valid(g) {
                    out.push(cand.normalize(g));
                }
            }
        }
    }
    Ok(out)
}

/// All boundary paths with range v, in eventually periodic form.
///
/// Fails with `NotEventuallyPeriodic` when the set is infinite (branching
/// tails, or a pumpable cycle ahead of a valid tail).
pub fn boundary_paths(g: &KGraph, v: VertexId) -> Result<Vec<BPath>> {
    let k = g.rank();
    let mut results: Vec<BPath> = Vec::new();
    for s_mask in 0..(1u32 << k) {
        let s_colors: BTreeSet<usize> = (0..k).filter(|i| s_mask & (1 << i) != 0).collect();
        let f_colors: BTreeSet<usize> = (0..k).filter(|i| !s_colors.contains(i)).collect();
        // pumping analysis: a pure-F cycle that can continue into a valid
        // boundary path makes the set infinite
        let (_, cycles) = pure_paths_and_cycles(g, v, &f_colors);
        for z in cycles {
            let u = z.range();
            for cont in candidates_from(g, u, &s_colors)? {
                let once = compose_finite(g, &z, &cont)?;
                let z2 = compose(g, &z, &z).unwrap();
                let twice = compose_finite(g, &z2, &cont)?;
                if once.is_valid(g) && twice.is_valid(g) {
                    return Err(KpError::NotEventuallyPeriodic(format!(
                        "pumpable cycle at vertex {}",
                        g.vertex_name(u)
                    )));
                }
            }
        }
        for cand in candidates_from(g, v, &s_colors)? {
            if !results.iter().any(|x| x.eq_morphism(g, &cand)) {
                results.push(cand);
            }
        }
    }
    results.sort_by_key(|x| (x.prefix().cmp_key(), x.cycle().map(|c| c.cmp_key())));
    Ok(results)
}

/// Boundary paths over every vertex.
pub fn all_boundary_paths(g: &KGraph) -> Result<Vec<BPath>> {
    let mut out = Vec::new();
    for v in g.vertices() {
        out.extend(boundary_paths(g, v)?);
    }
    Ok(out)
}

/// Outcome of the bounded aperiodicity search.
#[derive(Clone, Debug)]
pub enum Aperiodicity {
    /// every vertex has a verified separating boundary path
    Yes(BTreeMap<VertexId, BPath>),
    /// a concrete violation alpha.x = beta.x with alpha != beta
    No {
        vertex: VertexId,
        alpha: Path,
        beta: Path,
        witness: BPath,
    },
    Unknown(String),
}

/// Default search bound: every coordinate is |edges| times the least common
/// multiple of the boundary cycle lengths.
pub fn default_aperiodicity_bound(g: &KGraph) -> Result<Degree> {
    let mut l = BigUint::one();
    for x in all_boundary_paths(g)? {
        if let Some(c) = x.cycle() {
            l = l.lcm(&BigUint::from(c.degree().total()));
        }
    }
    let per_coord = BigUint::from(g.edge_count().max(1)) * l;
    Ok(Degree::new(vec![per_coord; g.rank()]))
}

/// Paths with source v and degree <= bound, over all ranges.
fn paths_into(g: &KGraph, v: VertexId, bound: &Degree) -> Vec<Path> {
    let mut out = Vec::new();
    for r in g.vertices() {
        for m in degree_box(bound) {
            for p in paths_of_degree(g, r, &m) {
                if p.source(g) == v {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// The aperiodicity condition: every vertex has a boundary path x such that
/// distinct finite paths give distinct extensions alpha.x != beta.x.
/// Verification is exhaustive for alpha, beta up to the bound; a pass below
/// the default closure bound reports Unknown rather than Yes.
pub fn is_aperiodic(g: &KGraph, bound: Option<&Degree>) -> Aperiodicity {
    let default = match default_aperiodicity_bound(g) {
        Ok(d) => d,
        Err(e) => return Aperiodicity::Unknown(e.to_string()),
    };
    let bound = bound.cloned().unwrap_or_else(|| default.clone());
    let complete = default.le(&bound);
    let mut witnesses = BTreeMap::new();
    for v in g.vertices() {
        let xs = match boundary_paths(g, v) {
            Ok(xs) => xs,
            Err(e) => return Aperiodicity::Unknown(e.to_string()),
        };
        let candidates = paths_into(g, v, &bound);
        let mut found = None;
        let mut first_collision = None;
        for x in &xs {
            let mut collision = None;
            'pairs: for (i, a) in candidates.iter().enumerate() {
                for b in candidates.iter().skip(i + 1) {
                    let ax = compose_finite(g, a, x).unwrap();
                    let bx = compose_finite(g, b, x).unwrap();
                    if ax.eq_morphism(g, &bx) {
                        collision = Some((a.clone(), b.clone(), x.clone()));
                        break 'pairs;
                    }
                }
            }
            match collision {
                None => {
                    found = Some(x.clone());
                    break;
                }
                Some(c) => {
                    if first_collision.is_none() {
                        first_collision = Some(c);
                    }
                }
            }
        }
        match found {
            Some(x) => {
                witnesses.insert(v, x);
            }
            None => {
                return match first_collision {
                    Some((alpha, beta, witness)) => Aperiodicity::No {
                        vertex: v,
                        alpha,
                        beta,
                        witness,
                    },
                    // no boundary paths means no pairs at all; cannot happen
                    // since vLambda^{<=infinity} is nonempty on finite graphs
                    None => Aperiodicity::Unknown(format!(
                        "no boundary path found at {}",
                        g.vertex_name(v)
                    )),
                };
            }
        }
    }
    if complete {
        Aperiodicity::Yes(witnesses)
    } else {
        Aperiodicity::Unknown(format!(
            "bound {} is below the closure bound {}",
            bound, default
        ))
    }
}

/// Cofinality: every vertex can reach some vertex on every boundary path.
pub fn is_cofinal(g: &KGraph) -> Result<std::result::Result<(), (BPath, VertexId)>> {
    // reachability closure of the edge relation, range -> source
    let n = g.vertex_count();
    let mut reach = vec![vec![false; n]; n];
    for v in 0..n {
        reach[v][v] = true;
    }
    for color in 0..g.rank() {
        for &e in g.edges_of_color(color) {
            reach[g.edge(e).range.0 as usize][g.edge(e).source.0 as usize] = true;
        }
    }
    for m in 0..n {
        for a in 0..n {
            if reach[a][m] {
                for b in 0..n {
                    if reach[m][b] {
                        reach[a][b] = true;
                    }
                }
            }
        }
    }
    for x in all_boundary_paths(g)? {
        let visited = x.visited_vertices(g);
        for v in g.vertices() {
            if !visited.iter().any(|&u| reach[v.0 as usize][u.0 as usize]) {
                return Ok(Err((x, v)));
            }
        }
    }
    Ok(Ok(()))
}
