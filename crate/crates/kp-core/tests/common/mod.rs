//! Helpers shared by the integration suites.

use kp_core::algebra::AlgebraElem;
use kp_core::degree::{degree_box, Degree};
use kp_core::graph::KGraph;
use kp_core::path::{paths_le, paths_of_degree, Path};
use kp_core::ring::Ring;
use rand::Rng;
use std::sync::Arc;

pub fn d(c: &[u64]) -> Degree {
    Degree::from_u64s(c)
}

pub fn edge_path(g: &Arc<KGraph>, name: &str) -> Path {
    Path::single_edge(g, g.edge_by_name(name).unwrap())
}

/// Every path of degree at most `bound`.
pub fn all_paths(g: &Arc<KGraph>, bound: &Degree) -> Vec<Path> {
    let mut out = Vec::new();
    for v in g.vertices() {
        for m in degree_box(bound) {
            out.extend(paths_of_degree(g, v, &m));
        }
    }
    out
}

/// A random normal-form element at level `level`: a few spanning terms with
/// ghost sides drawn from the extension-blocking sets and small nonzero
/// integer coefficients.
pub fn random_element<R: Ring + PartialEq>(
    rng: &mut impl Rng,
    g: &Arc<KGraph>,
    ring: &R,
    level: &Degree,
    alpha_bound: &Degree,
) -> AlgebraElem<R> {
    let mut betas = Vec::new();
    for v in g.vertices() {
        betas.extend(paths_le(g, v, level));
    }
    let candidates = all_paths(g, alpha_bound);
    let mut terms = Vec::new();
    let count = rng.gen_range(1..=3);
    for _ in 0..count {
        let beta = betas[rng.gen_range(0..betas.len())].clone();
        let alphas: Vec<&Path> = candidates
            .iter()
            .filter(|p| p.source(g) == beta.source(g))
            .collect();
        let alpha = alphas[rng.gen_range(0..alphas.len())].clone();
        let coeff = ring.from_i64(rng.gen_range(1..=4));
        terms.push((alpha, beta, coeff));
    }
    AlgebraElem::from_terms(g.clone(), ring.clone(), level.clone(), terms).unwrap()
}
