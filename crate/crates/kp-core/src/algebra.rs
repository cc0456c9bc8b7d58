//! The Kumjian-Pask algebra engine: exact elements in normal form at an
//! explicit level, multiplication through minimal common extensions, the
//! Z^k-grading, coefficient probes and the Cuntz-Krieger reduction.
//!
//! An element is stored as a finitely supported map (alpha, beta) -> r with
//! s(alpha) = s(beta) and every beta in Lambda^{<=level}; this shape is the
//! normal form, and coefficients at a fixed level are unique, so equality is
//! map equality after raising both sides to a common level.

use crate::boundary::BPath;
use crate::degree::{Degree, GradedDegree};
use crate::error::{KpError, Result};
use crate::graph::{KGraph, VertexId};
use crate::path::{compose, factor, is_in_le, min_common_ext, paths_le, Path};
use crate::ring::Ring;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct AlgebraElem<R: Ring> {
    graph: Arc<KGraph>,
    ring: R,
    level: Degree,
    terms: BTreeMap<(Path, Path), R::Elem>,
}

impl<R: Ring + PartialEq> AlgebraElem<R> {
    pub fn zero(graph: Arc<KGraph>, ring: R) -> Self {
        let k = graph.rank();
        AlgebraElem {
            graph,
            ring,
            level: Degree::zero(k),
            terms: BTreeMap::new(),
        }
    }

    /// Build an element from normal-form data, validating the shape.
    pub fn from_terms(
        graph: Arc<KGraph>,
        ring: R,
        level: Degree,
        terms: Vec<(Path, Path, R::Elem)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (alpha, beta, r) in terms {
            if alpha.source(&graph) != beta.source(&graph) {
                return Err(KpError::Validation(
                    "term sides must share a source".into(),
                ));
            }
            if !is_in_le(&graph, &beta, &level) {
                return Err(KpError::Validation(format!(
                    "ghost side {} is not in Lambda^<={}",
                    beta.display(&graph),
                    level
                )));
            }
            if ring.is_zero(&r) {
                continue;
            }
            let prev = map.remove(&(alpha.clone(), beta.clone()));
            let v = match prev {
                None => r,
                Some(p) => ring.add(&p, &r),
            };
            if !ring.is_zero(&v) {
                map.insert((alpha, beta), v);
            }
        }
        Ok(AlgebraElem {
            graph,
            ring,
            level,
            terms: map,
        })
    }

    /// Collect raw spanning terms into normal form at the requested level
    /// (raised further if some ghost side exceeds it).
    fn normalize(
        graph: Arc<KGraph>,
        ring: R,
        want_level: Degree,
        raw: Vec<(Path, Path, R::Elem)>,
    ) -> Self {
        let mut level = want_level;
        for (_, beta, _) in &raw {
            level = level.join(&beta.degree());
        }
        let mut terms: BTreeMap<(Path, Path), R::Elem> = BTreeMap::new();
        for (alpha, beta, r) in raw {
            if ring.is_zero(&r) {
                continue;
            }
            let slack = level.checked_sub(&beta.degree()).unwrap();
            for lam in paths_le(&graph, beta.source(&graph), &slack) {
                let a2 = compose(&graph, &alpha, &lam).expect("shared source");
                let b2 = compose(&graph, &beta, &lam).expect("shared source");
                let key = (a2, b2);
                let v = match terms.remove(&key) {
                    None => r.clone(),
                    Some(prev) => ring.add(&prev, &r),
                };
                if !ring.is_zero(&v) {
                    terms.insert(key, v);
                }
            }
        }
        AlgebraElem {
            graph,
            ring,
            level,
            terms,
        }
    }

    pub fn gen_p(graph: Arc<KGraph>, ring: R, v: VertexId) -> Self {
        let k = graph.rank();
        let p = Path::vertex(&graph, v);
        AlgebraElem::normalize(
            graph,
            ring.clone(),
            Degree::zero(k),
            vec![(p.clone(), p, ring.one())],
        )
    }

    /// s_lambda; for a vertex this is p_v.
    pub fn gen_s(graph: Arc<KGraph>, ring: R, lambda: &Path) -> Self {
        let k = graph.rank();
        let src = Path::vertex(&graph, lambda.source(&graph));
        AlgebraElem::normalize(
            graph,
            ring.clone(),
            Degree::zero(k),
            vec![(lambda.clone(), src, ring.one())],
        )
    }

    /// The ghost generator s_{lambda*}, housed at level d(lambda).
    pub fn gen_s_star(graph: Arc<KGraph>, ring: R, lambda: &Path) -> Self {
        let src = Path::vertex(&graph, lambda.source(&graph));
        AlgebraElem::normalize(
            graph,
            ring.clone(),
            lambda.degree(),
            vec![(src, lambda.clone(), ring.one())],
        )
    }

    pub fn graph(&self) -> &Arc<KGraph> {
        &self.graph
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn level(&self) -> &Degree {
        &self.level
    }

    pub fn terms(&self) -> &BTreeMap<(Path, Path), R::Elem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if !self.graph.same_graph(&other.graph) || self.ring != other.ring {
            return Err(KpError::GraphMismatch);
        }
        Ok(())
    }

    /// The same element re-expanded at level n >= the current level.
    pub fn raise_level(&self, n: &Degree) -> Result<Self> {
        if !self.level.le(n) {
            return Err(KpError::DegreeOutOfRange(
                n.to_string(),
                self.level.to_string(),
            ));
        }
        Ok(AlgebraElem::normalize(
            self.graph.clone(),
            self.ring.clone(),
            n.clone(),
            self.terms
                .iter()
                .map(|((a, b), r)| (a.clone(), b.clone(), r.clone()))
                .collect(),
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let level = self.level.join(&other.level);
        let mut raw: Vec<(Path, Path, R::Elem)> = Vec::new();
        for ((a, b), r) in self.terms.iter().chain(&other.terms) {
            raw.push((a.clone(), b.clone(), r.clone()));
        }
        Ok(AlgebraElem::normalize(
            self.graph.clone(),
            self.ring.clone(),
            level,
            raw,
        ))
    }

    pub fn scalar_mul(&self, r: &R::Elem) -> Self {
        let mut out = self.clone();
        let mut terms = BTreeMap::new();
        for (k, c) in &out.terms {
            let v = self.ring.mul(c, r);
            if !self.ring.is_zero(&v) {
                terms.insert(k.clone(), v);
            }
        }
        out.terms = terms;
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scalar_mul(&self.ring.neg(&self.ring.one())))
    }

    /// Bilinear product: (s_a s_b*)(s_l s_m*) expands over the minimal common
    /// extensions of b and l, then the sum is renormalized at the join of the
    /// resulting ghost degrees.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let g = &self.graph;
        let mut raw: Vec<(Path, Path, R::Elem)> = Vec::new();
        let mut level = Degree::zero(g.rank());
        for ((a, b), r) in &self.terms {
            for ((l, m), t) in &other.terms {
                if b.range() != l.range() {
                    continue;
                }
                let coeff = self.ring.mul(r, t);
                for (sigma, tau) in min_common_ext(g, b, l) {
                    let alpha = compose(g, a, &sigma)?;
                    let beta = compose(g, m, &tau)?;
                    if alpha.source(g) != beta.source(g) {
                        return Err(KpError::Validation(format!(
                            "product term ({}, {}) lost the shared source",
                            alpha.display(g),
                            beta.display(g)
                        )));
                    }
                    level = level.join(&beta.degree());
                    raw.push((alpha, beta, coeff.clone()));
                }
            }
        }
        Ok(AlgebraElem::normalize(
            self.graph.clone(),
            self.ring.clone(),
            level,
            raw,
        ))
    }

    /// The involution: (alpha, beta) -> (beta, alpha).
    pub fn star(&self) -> Self {
        let raw: Vec<(Path, Path, R::Elem)> = self
            .terms
            .iter()
            .map(|((a, b), r)| (b.clone(), a.clone(), r.clone()))
            .collect();
        let mut level = Degree::zero(self.graph.rank());
        for (_, b, _) in &raw {
            level = level.join(&b.degree());
        }
        AlgebraElem::normalize(self.graph.clone(), self.ring.clone(), level, raw)
    }

    pub fn equals(&self, other: &Self) -> Result<bool> {
        self.check_same(other)?;
        let n = self.level.join(&other.level);
        let a = self.raise_level(&n)?;
        let b = other.raise_level(&n)?;
        Ok(a.terms == b.terms)
    }

    /// Graded degrees present in the element.
    pub fn graded_degrees(&self) -> Vec<GradedDegree> {
        let mut out: Vec<GradedDegree> = self
            .terms
            .keys()
            .map(|(a, b)| GradedDegree::diff(&a.degree(), &b.degree()))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// The component of terms with d(alpha) - d(beta) = g.
    pub fn graded_component(&self, gdeg: &GradedDegree) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|((a, b), _)| &GradedDegree::diff(&a.degree(), &b.degree()) == gdeg)
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        AlgebraElem {
            graph: self.graph.clone(),
            ring: self.ring.clone(),
            level: self.level.clone(),
            terms,
        }
    }

    /// s_{mu*} . a . s_nu together with its 0-graded coefficient at
    /// p_{s(mu)}; when (mu, nu) is a term of a in normal form, the
    /// coefficient is exactly r_{mu,nu}.
    pub fn probe(&self, mu: &Path, nu: &Path) -> Result<(R::Elem, Self)> {
        if !is_in_le(&self.graph, nu, &self.level) {
            return Err(KpError::ProbeLevel(format!(
                "{} is not in Lambda^<={}",
                nu.display(&self.graph),
                self.level
            )));
        }
        let left = AlgebraElem::gen_s_star(self.graph.clone(), self.ring.clone(), mu);
        let right = AlgebraElem::gen_s(self.graph.clone(), self.ring.clone(), nu);
        let full = left.mul(self)?.mul(&right)?;
        let zero_part = full.graded_component(&GradedDegree::zero(self.graph.rank()));
        if zero_part.is_zero() {
            return Ok((self.ring.zero(), full));
        }
        let p = AlgebraElem::gen_p(
            self.graph.clone(),
            self.ring.clone(),
            mu.source(&self.graph),
        )
        .raise_level(&zero_part.level)?;
        let key = p.terms.keys().next().expect("vertex expansion is nonempty");
        let coeff = zero_part.terms.get(key).cloned().unwrap_or_else(|| self.ring.zero());
        // the zero-graded sandwich is exactly coeff * p_{s(mu)}
        debug_assert!(zero_part.equals(&p.scalar_mul(&coeff)).unwrap());
        Ok((coeff, full))
    }

    /// For a nonzero element in normal form with designated term (mu, nu) and
    /// a separating boundary path y at s(mu), produce (sigma, tau) with
    /// s_{sigma*} . a . s_tau = r_{mu,nu} p_{s(mu)}.
    pub fn ck_reduce(
        &self,
        mu: &Path,
        nu: &Path,
        y: &BPath,
    ) -> Result<(Path, Path)> {
        let g = &self.graph;
        let r_munu = self
            .terms
            .get(&(mu.clone(), nu.clone()))
            .cloned()
            .ok_or_else(|| KpError::Validation("(mu, nu) is not a term".into()))?;
        if y.range() != mu.source(g) {
            return Err(KpError::NotComposable(
                g.vertex_name(mu.source(g)).into(),
                g.vertex_name(y.range()).into(),
            ));
        }
        // competitors alpha with (alpha, nu) a term and d(alpha) != d(mu)
        let competitors: Vec<&Path> = self
            .terms
            .keys()
            .filter(|(a, b)| b == nu && a.degree() != mu.degree())
            .map(|(a, _)| a)
            .collect();
        let cut = if competitors.is_empty() {
            Degree::zero(g.rank())
        } else {
            let muy = crate::boundary::compose_finite(g, mu, y)?;
            let mut m = Degree::zero(g.rank());
            for alpha in competitors {
                let ay = crate::boundary::compose_finite(g, alpha, y)?;
                // search window: both periodic tails plus the path degrees
                let pre = muy.prefix().degree().join(&ay.prefix().degree());
                let per = |b: &BPath| {
                    b.cycle()
                        .map(|c| c.degree())
                        .unwrap_or_else(|| Degree::zero(g.rank()))
                };
                let window = pre
                    .add(&per(&muy).scale(2))
                    .add(&per(&ay).scale(2))
                    .add(&mu.degree().join(&alpha.degree()));
                let found = crate::degree::degree_box(&window)
                    .into_iter()
                    .find(|mal| muy.cut(g, mal) != ay.cut(g, mal));
                match found {
                    Some(mal) => m = m.join(&mal),
                    None => {
                        return Err(KpError::SeparationNotFound(format!(
                            "{} and {} agree along the boundary path within the period bound",
                            alpha.display(g),
                            mu.display(g)
                        )))
                    }
                }
            }
            m
        };
        let y_cut = y.cut(g, &cut);
        let sigma = compose(g, mu, &y_cut)?;
        let tau = compose(g, nu, &y_cut)?;
        // postcondition: the sandwich collapses to r_{mu,nu} p_{s(sigma)}
        let left = AlgebraElem::gen_s_star(self.graph.clone(), self.ring.clone(), &sigma);
        let right = AlgebraElem::gen_s(self.graph.clone(), self.ring.clone(), &tau);
        let sandwich = left.mul(self)?.mul(&right)?;
        let expect = AlgebraElem::gen_p(self.graph.clone(), self.ring.clone(), sigma.source(g))
            .scalar_mul(&r_munu);
        if !sandwich.equals(&expect)? {
            return Err(KpError::SeparationNotFound(
                "reduction did not collapse to the designated coefficient".into(),
            ));
        }
        Ok((sigma, tau))
    }

    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|((a, b), r)| {
                format!(
                    "({}, {}, {})",
                    a.display(&self.graph),
                    b.display(&self.graph),
                    self.ring.display(r)
                )
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// The level-n expansion of s_{lambda*} s_mu: the sum of s_alpha s_{beta*}
/// over pairs with lambda.alpha = mu.beta in Lambda^{<=n}. Used as the
/// second route against the minimal-common-extension product.
pub fn star_product_at_level<R: Ring + PartialEq>(
    graph: Arc<KGraph>,
    ring: R,
    lambda: &Path,
    mu: &Path,
    n: &Degree,
) -> Result<AlgebraElem<R>> {
    let g = graph.clone();
    if !lambda.degree().le(n) || !mu.degree().le(n) {
        return Err(KpError::DegreeOutOfRange(
            lambda.degree().join(&mu.degree()).to_string(),
            n.to_string(),
        ));
    }
    let mut raw = Vec::new();
    if lambda.range() == mu.range() {
        let slack = n.checked_sub(&lambda.degree()).unwrap();
        for alpha in paths_le(&g, lambda.source(&g), &slack) {
            let la = compose(&g, lambda, &alpha)?;
            if !is_in_le(&g, &la, n) || !mu.degree().le(&la.degree()) {
                continue;
            }
            let (head, beta) = factor(&g, &la, &mu.degree())?;
            if &head == mu {
                if alpha.source(&g) != beta.source(&g) {
                    return Err(KpError::Validation(format!(
                        "expansion term ({}, {}) lost the shared source",
                        alpha.display(&g),
                        beta.display(&g)
                    )));
                }
                raw.push((alpha, beta, ring.one()));
            }
        }
    }
    let mut level = Degree::zero(g.rank());
    for (_, b, _) in &raw {
        level = level.join(&b.degree());
    }
    Ok(AlgebraElem::normalize(graph, ring, level, raw))
}

/// Outcome of the exhaustive relation check up to a degree bound.
#[derive(Debug, Clone, Default)]
pub struct RelationReport {
    pub kp1_checked: usize,
    pub kp2_checked: usize,
    pub kp3_checked: usize,
    pub kp4_checked: usize,
    pub kp4_per_color_checked: usize,
    pub route_checked: usize,
    pub failures: Vec<String>,
}

impl RelationReport {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn total_checked(&self) -> usize {
        self.kp1_checked
            + self.kp2_checked
            + self.kp3_checked
            + self.kp4_checked
            + self.kp4_per_color_checked
            + self.route_checked
    }
}

/// Exhaustively verify (KP1), (KP2), (KP3') over Lambda^{<=n} for all
/// n <= bound, (KP4') at every vertex in both the full and the per-color
/// form, and the two-route consistency of s_{lambda*} s_mu (minimal common
/// extensions against the level-n expansion).
pub fn verify_kp_relations<R: Ring + PartialEq>(
    graph: &Arc<KGraph>,
    ring: &R,
    bound: &Degree,
) -> RelationReport {
    let g = graph.clone();
    let mut rep = RelationReport::default();
    let p = |v: VertexId| AlgebraElem::gen_p(g.clone(), ring.clone(), v);
    let s = |q: &Path| AlgebraElem::gen_s(g.clone(), ring.clone(), q);
    let s_star = |q: &Path| AlgebraElem::gen_s_star(g.clone(), ring.clone(), q);
    // evaluate a relation instance that may itself error out on a broken
    // square table; errors count as failures
    fn expect_eq<R: Ring + PartialEq>(
        what: String,
        lhs: Result<AlgebraElem<R>>,
        rhs: Result<AlgebraElem<R>>,
        failures: &mut Vec<String>,
    ) {
        match (lhs, rhs) {
            (Ok(a), Ok(b)) => match a.equals(&b) {
                Ok(true) => {}
                Ok(false) => failures.push(what),
                Err(e) => failures.push(format!("{what}: {e}")),
            },
            (Err(e), _) | (_, Err(e)) => failures.push(format!("{what}: {e}")),
        }
    }

    // (KP1)
    for v in g.vertices() {
        for w in g.vertices() {
            let rhs = if v == w {
                p(v)
            } else {
                AlgebraElem::zero(g.clone(), ring.clone())
            };
            rep.kp1_checked += 1;
            expect_eq(
                format!("kp1 at ({}, {})", g.vertex_name(v), g.vertex_name(w)),
                p(v).mul(&p(w)),
                Ok(rhs),
                &mut rep.failures,
            );
        }
    }

    // the path pool: nonzero-degree members of the extension-blocking sets
    // up to the bound
    let mut all_paths: Vec<Path> = Vec::new();
    for n in crate::degree::degree_box(bound) {
        if n.is_zero() {
            continue;
        }
        for v in g.vertices() {
            all_paths.extend(paths_le(&g, v, &n));
        }
    }
    all_paths.sort();
    all_paths.dedup();
    all_paths.retain(|p| !p.is_vertex());

    // (KP2)
    for lam in &all_paths {
        rep.kp2_checked += 1;
        let name = lam.display(&g);
        expect_eq(
            format!("kp2 range identity at {name}"),
            p(lam.range()).mul(&s(lam)),
            Ok(s(lam)),
            &mut rep.failures,
        );
        expect_eq(
            format!("kp2 source identity at {name}"),
            s(lam).mul(&p(lam.source(&g))),
            Ok(s(lam)),
            &mut rep.failures,
        );
        expect_eq(
            format!("kp2 ghost identity at {name}"),
            p(lam.source(&g)).mul(&s_star(lam)),
            Ok(s_star(lam)),
            &mut rep.failures,
        );
        for mu in &all_paths {
            if lam.source(&g) != mu.range() {
                continue;
            }
            rep.kp2_checked += 1;
            match compose(&g, lam, mu) {
                Ok(composite) => {
                    expect_eq(
                        format!("kp2 at {} . {}", name, mu.display(&g)),
                        s(lam).mul(&s(mu)),
                        Ok(s(&composite)),
                        &mut rep.failures,
                    );
                    expect_eq(
                        format!("kp2 ghost at {} . {}", name, mu.display(&g)),
                        s_star(mu).mul(&s_star(lam)),
                        Ok(s_star(&composite)),
                        &mut rep.failures,
                    );
                }
                Err(e) => rep
                    .failures
                    .push(format!("kp2 at {} . {}: {e}", name, mu.display(&g))),
            }
        }
    }

    // (KP3') over Lambda^{<=n} for each nonzero n <= bound
    for n in crate::degree::degree_box(bound) {
        if n.is_zero() {
            continue;
        }
        let mut le_set = Vec::new();
        for v in g.vertices() {
            le_set.extend(paths_le(&g, v, &n));
        }
        for lam in &le_set {
            for mu in &le_set {
                rep.kp3_checked += 1;
                let rhs = if lam == mu {
                    p(lam.source(&g))
                } else {
                    AlgebraElem::zero(g.clone(), ring.clone())
                };
                expect_eq(
                    format!(
                        "kp3' at ({}, {}) with n={}",
                        lam.display(&g),
                        mu.display(&g),
                        n
                    ),
                    s_star(lam).mul(&s(mu)),
                    Ok(rhs),
                    &mut rep.failures,
                );
            }
        }
    }

    // (KP4') full and per-color
    for v in g.vertices() {
        for n in crate::degree::degree_box(bound) {
            if n.is_zero() {
                continue;
            }
            rep.kp4_checked += 1;
            let mut sum = Ok(AlgebraElem::zero(g.clone(), ring.clone()));
            for lam in paths_le(&g, v, &n) {
                sum = sum.and_then(|acc| acc.add(&s(&lam).mul(&s_star(&lam))?));
            }
            expect_eq(
                format!("kp4' at {} with n={}", g.vertex_name(v), n),
                sum,
                Ok(p(v)),
                &mut rep.failures,
            );
        }
        for i in 0..g.rank() {
            if g.out_edges(v, i).is_empty() {
                continue;
            }
            rep.kp4_per_color_checked += 1;
            let mut sum = Ok(AlgebraElem::zero(g.clone(), ring.clone()));
            for &e in g.out_edges(v, i) {
                let q = Path::single_edge(&g, e);
                sum = sum.and_then(|acc| acc.add(&s(&q).mul(&s_star(&q))?));
            }
            expect_eq(
                format!("kp4' per-color at {} color {}", g.vertex_name(v), i + 1),
                sum,
                Ok(p(v)),
                &mut rep.failures,
            );
        }
    }

    // two-route product consistency: minimal common extensions against the
    // level-n expansion, for all range-matched pairs up to the bound
    for lam in &all_paths {
        for mu in &all_paths {
            if lam.range() != mu.range() {
                continue;
            }
            rep.route_checked += 1;
            let n = lam.degree().join(&mu.degree());
            expect_eq(
                format!(
                    "product routes at ({}, {})",
                    lam.display(&g),
                    mu.display(&g)
                ),
                s_star(lam).mul(&s(mu)),
                star_product_at_level(g.clone(), ring.clone(), lam, mu, &n),
                &mut rep.failures,
            );
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{rat, Integers, Rationals};
    use crate::samples;

    fn d(c: &[u64]) -> Degree {
        Degree::from_u64s(c)
    }

    fn edge_path(g: &Arc<KGraph>, name: &str) -> Path {
        Path::single_edge(g, g.edge_by_name(name).unwrap())
    }

    #[test]
    fn generator_shapes() {
        let g = samples::graph_a();
        let v00 = g.vertex_by_name("00").unwrap();
        let p = AlgebraElem::gen_p(g.clone(), Integers, v00);
        assert_eq!(p.terms().len(), 1);
        // raising p_00 to level (1,1) expands over 00Lambda^{<=(1,1)} = {sq}
        let raised = p.raise_level(&d(&[1, 1])).unwrap();
        let sq = samples::square_path(&g);
        assert_eq!(raised.terms().len(), 1);
        assert!(raised.terms().contains_key(&(sq.clone(), sq)));
        assert!(p.equals(&raised).unwrap());

        // s_v for a vertex is p_v
        let sv = AlgebraElem::gen_s(g.clone(), Integers, &Path::vertex(&g, v00));
        assert!(sv.equals(&p).unwrap());
    }

    #[test]
    fn raising_collects_coefficients() {
        let g = samples::graph_c();
        let u = g.vertex_by_name("u").unwrap();
        let pu = AlgebraElem::gen_p(g.clone(), Rationals, u);
        let r1 = pu.raise_level(&d(&[1, 0])).unwrap();
        let e = edge_path(&g, "e");
        assert_eq!(r1.terms().len(), 1);
        assert!(r1.terms().contains_key(&(e.clone(), e.clone())));
        let r2 = r1.raise_level(&d(&[1, 1])).unwrap();
        let eh = compose(&g, &e, &edge_path(&g, "h")).unwrap();
        assert_eq!(r2.terms().len(), 1);
        assert!(r2.terms().contains_key(&(eh.clone(), eh)));
    }

    #[test]
    fn additive_structure() {
        let g = samples::graph_d();
        let f = edge_path(&g, "f");
        let sf = AlgebraElem::gen_s(g.clone(), Integers, &f);
        let zero = AlgebraElem::zero(g.clone(), Integers);
        assert!(sf.add(&zero).unwrap().equals(&sf).unwrap());
        assert!(sf.sub(&sf).unwrap().is_zero());
        let twice = sf.add(&sf).unwrap();
        assert_eq!(
            twice.terms().values().next().unwrap(),
            &Integers.from_i64(2)
        );
    }

    #[test]
    fn product_through_minimal_extensions() {
        let g = samples::graph_a();
        let b1 = edge_path(&g, "b1");
        let r1 = edge_path(&g, "r1");
        let prod = AlgebraElem::gen_s_star(g.clone(), Rationals, &b1)
            .mul(&AlgebraElem::gen_s(g.clone(), Rationals, &r1))
            .unwrap();
        let r2 = edge_path(&g, "r2");
        let b2 = edge_path(&g, "b2");
        assert_eq!(prod.terms().len(), 1);
        assert!(prod.terms().contains_key(&(r2, b2)));

        // s_{lambda*} s_lambda = p_{s(lambda)}
        let back = AlgebraElem::gen_s_star(g.clone(), Rationals, &b1)
            .mul(&AlgebraElem::gen_s(g.clone(), Rationals, &b1))
            .unwrap();
        let ps = AlgebraElem::gen_p(g.clone(), Rationals, b1.source(&g));
        assert!(back.equals(&ps).unwrap());

        // loop composition on graph C
        let gc = samples::graph_c();
        let f = edge_path(&gc, "f");
        let ff = compose(&gc, &f, &f).unwrap();
        let sq = AlgebraElem::gen_s(gc.clone(), Rationals, &f)
            .mul(&AlgebraElem::gen_s(gc.clone(), Rationals, &f))
            .unwrap();
        assert!(sq
            .equals(&AlgebraElem::gen_s(gc.clone(), Rationals, &ff))
            .unwrap());
    }

    #[test]
    fn star_is_an_involution() {
        let g = samples::graph_a();
        let b1 = edge_path(&g, "b1");
        let s = AlgebraElem::gen_s(g.clone(), Integers, &b1);
        let st = AlgebraElem::gen_s_star(g.clone(), Integers, &b1);
        assert!(s.star().equals(&st).unwrap());
        assert!(s.star().star().equals(&s).unwrap());
        let v = g.vertex_by_name("00").unwrap();
        let p = AlgebraElem::gen_p(g.clone(), Integers, v);
        assert!(p.star().equals(&p).unwrap());
    }

    #[test]
    fn equality_by_projection_expansion() {
        let g = samples::graph_a();
        let v00 = g.vertex_by_name("00").unwrap();
        let b1 = edge_path(&g, "b1");
        let p = AlgebraElem::gen_p(g.clone(), Rationals, v00);
        let ss = AlgebraElem::gen_s(g.clone(), Rationals, &b1)
            .mul(&AlgebraElem::gen_s_star(g.clone(), Rationals, &b1))
            .unwrap();
        // (KP4') at 00 with n = (1,0): 00Lambda^{<=(1,0)} = {b1}
        assert!(p.equals(&ss).unwrap());
        // distinct graded degrees are never equal
        let s = AlgebraElem::gen_s(g.clone(), Rationals, &b1);
        let st = AlgebraElem::gen_s_star(g.clone(), Rationals, &b1);
        assert!(!s.equals(&st).unwrap());
    }

    #[test]
    fn graded_components() {
        let gd = samples::graph_d();
        let f = edge_path(&gd, "f");
        let w = gd.vertex_by_name("w").unwrap();
        let sf = AlgebraElem::gen_s(gd.clone(), Rationals, &f);
        let pw = AlgebraElem::gen_p(gd.clone(), Rationals, w);
        let a = sf.add(&pw).unwrap();
        let one = GradedDegree::new(vec![1.into()]);
        let zero = GradedDegree::zero(1);
        assert!(a.graded_component(&one).equals(&sf).unwrap());
        assert!(a.graded_component(&zero).equals(&pw).unwrap());
        // components sum back to a
        let back = a
            .graded_component(&one)
            .add(&a.graded_component(&zero))
            .unwrap();
        assert!(back.equals(&a).unwrap());

        let g = samples::graph_a();
        // sources differ, so this product collapses to zero
        let zero = AlgebraElem::gen_s(g.clone(), Rationals, &edge_path(&g, "b1"))
            .mul(&AlgebraElem::gen_s_star(g.clone(), Rationals, &edge_path(&g, "r1")))
            .unwrap();
        assert!(zero.is_zero());
        // a source-matched pair concentrates at its degree difference
        let prod = AlgebraElem::gen_s(g.clone(), Rationals, &edge_path(&g, "b2"))
            .mul(&AlgebraElem::gen_s_star(g.clone(), Rationals, &edge_path(&g, "r2")))
            .unwrap();
        assert_eq!(
            prod.graded_degrees(),
            vec![GradedDegree::new(vec![1.into(), (-1).into()])]
        );
    }

    #[test]
    fn probe_extracts_coefficients() {
        let g = samples::graph_a();
        let sq = samples::square_path(&g);
        let two = rat(2, 1);
        let a = AlgebraElem::from_terms(
            g.clone(),
            Rationals,
            d(&[1, 1]),
            vec![(sq.clone(), sq.clone(), two.clone())],
        )
        .unwrap();
        let (coeff, _) = a.probe(&sq, &sq).unwrap();
        assert_eq!(coeff, two);

        // an absent pair probes to zero
        let b1 = edge_path(&g, "b1");
        let (c0, _) = a.probe(&b1, &sq).unwrap();
        assert_eq!(c0, Rationals.zero());

        // nu outside Lambda^{<=level} is rejected
        assert!(a.probe(&sq, &b1).is_err());
    }

    #[test]
    fn ck_reduce_trivial_and_periodic() {
        let g = samples::graph_a();
        let sq = samples::square_path(&g);
        let a = AlgebraElem::from_terms(
            g.clone(),
            Rationals,
            d(&[1, 1]),
            vec![(sq.clone(), sq.clone(), rat(1, 1))],
        )
        .unwrap();
        let v11 = g.vertex_by_name("11").unwrap();
        let y = &crate::boundary::boundary_paths(&g, v11).unwrap()[0];
        let (sigma, tau) = a.ck_reduce(&sq, &sq, y).unwrap();
        // no competitors: sigma = mu, tau = nu
        assert_eq!(sigma, sq);
        assert_eq!(tau, sq);

        // periodic counterexample on graph C: f.x_u = x_u
        let gc = samples::graph_c();
        let u = gc.vertex_by_name("u").unwrap();
        let f = edge_path(&gc, "f");
        let a = AlgebraElem::gen_s(gc.clone(), Rationals, &f)
            .add(&AlgebraElem::gen_p(gc.clone(), Rationals, u))
            .unwrap();
        let xu = &crate::boundary::boundary_paths(&gc, u).unwrap()[0];
        let vu = Path::vertex(&gc, u);
        match a.ck_reduce(&f, &vu, xu) {
            Err(KpError::SeparationNotFound(_)) => {}
            other => panic!("expected SeparationNotFound, got {other:?}"),
        }
    }

    #[test]
    fn relations_hold_and_corruption_is_caught() {
        let g = samples::graph_a();
        let rep = verify_kp_relations(&g, &Integers, &d(&[2, 2]));
        assert!(rep.all_pass(), "{:?}", rep.failures);
        assert!(rep.total_checked() > 0);

        // corrupt the square table: the bicolored path e.h now factors
        // through (f, f), so factorizations drift off the shared source
        let mut spec = samples::graph_c_spec();
        spec.squares = vec![("e".into(), "h".into(), "f".into(), "f".into())];
        let bad = crate::graph::KGraph::from_parts_unchecked(&spec);
        let rep = verify_kp_relations(&bad, &Integers, &d(&[1, 1]));
        assert!(!rep.all_pass());
    }
}
