//! The boundary-path representation with a grading marker: an independent
//! equality oracle for the algebra engine.
//!
//! The underlying module is free on pairs (x, g) of a boundary path and a
//! grading offset g in a finite window of Z^k. A spanning element s_alpha
//! s_{beta*} sends (x, g) to (alpha.y, g + d(alpha) - d(beta)) when x = beta.y,
//! and to 0 otherwise. The raw boundary-path action can identify elements of
//! different degrees (a red loop acts like the identity); the marker keeps the
//! grading visible, which is what makes the oracle faithful.

use crate::algebra::AlgebraElem;
use crate::boundary::{all_boundary_paths, compose_finite, shift, BPath};
use crate::degree::GradedDegree;
use crate::error::{KpError, Result};
use crate::graph::KGraph;
use crate::ring::Ring;
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::sync::Arc;

pub struct BoundaryRep<R: Ring> {
    graph: Arc<KGraph>,
    ring: R,
    radius: i64,
    paths: Vec<BPath>,
    offsets: Vec<GradedDegree>,
}

/// Sparse matrix over the representation basis: column -> row -> coefficient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RepMatrix<R: Ring> {
    pub dim: usize,
    pub cols: BTreeMap<usize, BTreeMap<usize, R::Elem>>,
}

impl<R: Ring + PartialEq> BoundaryRep<R> {
    /// Collect the basis; fails when some boundary-path space is not
    /// eventually periodic.
    pub fn new(graph: Arc<KGraph>, ring: R, radius: u32) -> Result<Self> {
        let paths = all_boundary_paths(&graph)?;
        let k = graph.rank();
        let radius = radius as i64;
        // the offset window [-radius, radius]^k in deterministic order
        let mut offsets = Vec::new();
        let mut cur = vec![-radius; k];
        'fill: loop {
            offsets.push(GradedDegree::new(
                cur.iter().map(|&c| BigInt::from(c)).collect(),
            ));
            let mut i = k;
            loop {
                if i == 0 {
                    break 'fill;
                }
                i -= 1;
                if cur[i] < radius {
                    cur[i] += 1;
                    for c in cur.iter_mut().skip(i + 1) {
                        *c = -radius;
                    }
                    break;
                }
            }
        }
        Ok(BoundaryRep {
            graph,
            ring,
            radius,
            paths,
            offsets,
        })
    }

    pub fn dim(&self) -> usize {
        self.paths.len() * self.offsets.len()
    }

    pub fn paths(&self) -> &[BPath] {
        &self.paths
    }

    pub fn offsets(&self) -> &[GradedDegree] {
        &self.offsets
    }

    fn offset_in_window(&self, g: &GradedDegree) -> Option<usize> {
        let ok = g
            .coords()
            .iter()
            .all(|c| *c >= BigInt::from(-self.radius) && *c <= BigInt::from(self.radius));
        if ok {
            self.offsets.iter().position(|o| o == g)
        } else {
            None
        }
    }

    fn path_index(&self, x: &BPath) -> Option<usize> {
        self.paths.iter().position(|p| p.eq_morphism(&self.graph, x))
    }

    fn basis_index(&self, pi: usize, oi: usize) -> usize {
        pi * self.offsets.len() + oi
    }

    /// The largest graded-degree coordinate an element moves the marker by.
    pub fn spread(&self, a: &AlgebraElem<R>) -> i64 {
        a.graded_degrees()
            .iter()
            .flat_map(|g| g.coords().iter())
            .map(|c| {
                let abs = if *c < BigInt::from(0) {
                    -c.clone()
                } else {
                    c.clone()
                };
                i64::try_from(&abs).unwrap_or(i64::MAX)
            })
            .max()
            .unwrap_or(0)
    }

    /// The sparse matrix of a on the windowed basis; moves falling outside
    /// the window are dropped, so comparisons are only meaningful within the
    /// margin enforced by `equal_oracle`.
    pub fn apply(&self, a: &AlgebraElem<R>) -> Result<RepMatrix<R>> {
        if !a.graph().same_graph(&self.graph) {
            return Err(KpError::GraphMismatch);
        }
        if self.spread(a) > self.radius {
            return Err(KpError::WindowOverflow(format!(
                "element moves the marker by {} but the radius is {}",
                self.spread(a),
                self.radius
            )));
        }
        let g = &self.graph;
        let mut cols: BTreeMap<usize, BTreeMap<usize, R::Elem>> = BTreeMap::new();
        for ((alpha, beta), r) in a.terms() {
            let delta = GradedDegree::diff(&alpha.degree(), &beta.degree());
            for (pi, x) in self.paths.iter().enumerate() {
                // x = beta.y exactly when beta is the initial segment
                if x.range() != beta.range() || !x.degree().ge_finite(&beta.degree()) {
                    continue;
                }
                if &x.cut(g, &beta.degree()) != beta {
                    continue;
                }
                let y = shift(g, x, &beta.degree())?;
                let target = compose_finite(g, alpha, &y)?;
                let ti = self
                    .path_index(&target)
                    .ok_or_else(|| KpError::Validation("image path missing from basis".into()))?;
                for (oi, off) in self.offsets.iter().enumerate() {
                    let Some(oi2) = self.offset_in_window(&off.add(&delta)) else {
                        continue;
                    };
                    let col = self.basis_index(pi, oi);
                    let row = self.basis_index(ti, oi2);
                    let entry = cols.entry(col).or_default();
                    let v = match entry.remove(&row) {
                        None => r.clone(),
                        Some(prev) => self.ring.add(&prev, r),
                    };
                    if !self.ring.is_zero(&v) {
                        entry.insert(row, v);
                    }
                }
            }
        }
        cols.retain(|_, c| !c.is_empty());
        Ok(RepMatrix {
            dim: self.dim(),
            cols,
        })
    }

    /// Columns whose offset stays at least `margin` away from the window
    /// boundary; actions with spread <= margin are exact there.
    fn interior_cols(&self, margin: i64) -> Vec<usize> {
        let lim = self.radius - margin;
        let mut out = Vec::new();
        for pi in 0..self.paths.len() {
            for (oi, off) in self.offsets.iter().enumerate() {
                let ok = off
                    .coords()
                    .iter()
                    .all(|c| *c >= BigInt::from(-lim) && *c <= BigInt::from(lim));
                if ok {
                    out.push(self.basis_index(pi, oi));
                }
            }
        }
        out
    }

    pub fn eq_on_interior(&self, m1: &RepMatrix<R>, m2: &RepMatrix<R>, margin: i64) -> bool {
        if margin > self.radius {
            return false;
        }
        let empty = BTreeMap::new();
        for col in self.interior_cols(margin) {
            let c1 = m1.cols.get(&col).unwrap_or(&empty);
            let c2 = m2.cols.get(&col).unwrap_or(&empty);
            if c1 != c2 {
                return false;
            }
        }
        true
    }

    /// Independent equality test: apply both elements and compare on the
    /// columns their spreads keep exact.
    pub fn equal_oracle(&self, a: &AlgebraElem<R>, b: &AlgebraElem<R>) -> Result<bool> {
        let margin = self.spread(a).max(self.spread(b));
        if margin > self.radius {
            return Err(KpError::WindowOverflow(format!(
                "spread {margin} exceeds radius {}",
                self.radius
            )));
        }
        let ma = self.apply(a)?;
        let mb = self.apply(b)?;
        Ok(self.eq_on_interior(&ma, &mb, margin))
    }

    pub fn matrix_add(&self, a: &RepMatrix<R>, b: &RepMatrix<R>) -> RepMatrix<R> {
        let mut cols = a.cols.clone();
        for (col, rows) in &b.cols {
            let entry = cols.entry(*col).or_default();
            for (row, v) in rows {
                let nv = match entry.remove(row) {
                    None => v.clone(),
                    Some(prev) => self.ring.add(&prev, v),
                };
                if !self.ring.is_zero(&nv) {
                    entry.insert(*row, nv);
                }
            }
        }
        cols.retain(|_, c| !c.is_empty());
        RepMatrix { dim: a.dim, cols }
    }

    /// a after b (matrix product a.b).
    pub fn matrix_mul(&self, a: &RepMatrix<R>, b: &RepMatrix<R>) -> RepMatrix<R> {
        let mut cols: BTreeMap<usize, BTreeMap<usize, R::Elem>> = BTreeMap::new();
        for (col, mids) in &b.cols {
            let mut acc: BTreeMap<usize, R::Elem> = BTreeMap::new();
            for (mid, v1) in mids {
                if let Some(rows) = a.cols.get(mid) {
                    for (row, v2) in rows {
                        let prod = self.ring.mul(v2, v1);
                        let nv = match acc.remove(row) {
                            None => prod,
                            Some(prev) => self.ring.add(&prev, &prod),
                        };
                        if !self.ring.is_zero(&nv) {
                            acc.insert(*row, nv);
                        }
                    }
                }
            }
            if !acc.is_empty() {
                cols.insert(*col, acc);
            }
        }
        RepMatrix { dim: a.dim, cols }
    }

    pub fn is_zero_on_interior(&self, m: &RepMatrix<R>, margin: i64) -> bool {
        let empty = RepMatrix {
            dim: m.dim,
            cols: BTreeMap::new(),
        };
        self.eq_on_interior(m, &empty, margin)
    }
}
