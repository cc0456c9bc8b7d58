//! Square matrices over a ring, indexed by an ordered label set.

use crate::error::{KpError, Result};
use crate::ring::{Laurent, LaurentElem, Ring};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<R: Ring> {
    pub ring: R,
    pub labels: Vec<String>,
    /// row-major entries, labels.len() squared
    pub entries: Vec<R::Elem>,
}

impl<R: Ring> Matrix<R> {
    pub fn zero(ring: R, labels: Vec<String>) -> Self {
        let n = labels.len();
        let entries = vec![ring.zero(); n * n];
        Matrix {
            ring,
            labels,
            entries,
        }
    }

    pub fn identity(ring: R, labels: Vec<String>) -> Self {
        let mut m = Matrix::zero(ring, labels);
        for i in 0..m.labels.len() {
            let one = m.ring.one();
            *m.at_mut(i, i) = one;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn at(&self, r: usize, c: usize) -> &R::Elem {
        &self.entries[r * self.labels.len() + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut R::Elem {
        let n = self.labels.len();
        &mut self.entries[r * n + c]
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.labels != other.labels {
            return Err(KpError::Validation("matrix index sets differ".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a = self.ring.add(a, b);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let n = self.size();
        let mut out = Matrix::zero(self.ring.clone(), self.labels.clone());
        for r in 0..n {
            for c in 0..n {
                let mut acc = self.ring.zero();
                for m in 0..n {
                    acc = self
                        .ring
                        .add(&acc, &self.ring.mul(self.at(r, m), other.at(m, c)));
                }
                *out.at_mut(r, c) = acc;
            }
        }
        Ok(out)
    }

    pub fn scalar_mul(&self, s: &R::Elem) -> Self {
        let mut out = self.clone();
        for a in out.entries.iter_mut() {
            *a = self.ring.mul(a, s);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| self.ring.is_zero(e))
    }

    /// Rank by Gaussian elimination; requires a field.
    pub fn rank(&self) -> Result<usize> {
        if !self.ring.is_field() {
            return Err(KpError::Ring("rank needs a field".into()));
        }
        let n = self.size();
        let mut m = self.entries.clone();
        let mut rank = 0;
        for col in 0..n {
            let pivot = (rank..n).find(|&r| !self.ring.is_zero(&m[r * n + col]));
            let Some(p) = pivot else { continue };
            m.swap_ranges_rows(n, p, rank);
            let inv = self.ring.inv(&m[rank * n + col]).expect("field");
            for c in 0..n {
                m[rank * n + c] = self.ring.mul(&m[rank * n + c], &inv);
            }
            for r in 0..n {
                if r != rank && !self.ring.is_zero(&m[r * n + col]) {
                    let f = m[r * n + col].clone();
                    for c in 0..n {
                        let sub = self.ring.mul(&f, &m[rank * n + c]);
                        m[r * n + c] = self.ring.sub(&m[r * n + c], &sub);
                    }
                }
            }
            rank += 1;
        }
        Ok(rank)
    }
}

trait SwapRows {
    fn swap_ranges_rows(&mut self, n: usize, a: usize, b: usize);
}

impl<T> SwapRows for Vec<T> {
    fn swap_ranges_rows(&mut self, n: usize, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..n {
            self.swap(a * n + c, b * n + c);
        }
    }
}

/// Evaluate a Laurent matrix at a base-ring point.
pub fn eval_matrix<R: Ring>(
    m: &Matrix<Laurent<R>>,
    z: &R::Elem,
) -> Option<Matrix<R>> {
    let base = m.ring.base.clone();
    let mut out = Matrix::zero(base, m.labels.clone());
    for (i, e) in m.entries.iter().enumerate() {
        out.entries[i] = m.ring.eval(e, z)?;
    }
    Some(out)
}

/// The elementary matrix with a single 1 at (r, c).
pub fn elementary<R: Ring>(ring: R, labels: Vec<String>, r: usize, c: usize) -> Matrix<R> {
    let mut m = Matrix::zero(ring, labels);
    let one = m.ring.one();
    *m.at_mut(r, c) = one;
    m
}

pub type LaurentMatrix<R> = Matrix<Laurent<R>>;
pub type LaurentPoly<R> = LaurentElem<<R as Ring>::Elem>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{rat, Rationals};

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("i{i}")).collect()
    }

    #[test]
    fn identity_and_rank() {
        let id = Matrix::identity(Rationals, labels(2));
        assert_eq!(id.rank().unwrap(), 2);
        let mut d = Matrix::zero(Rationals, labels(2));
        *d.at_mut(0, 0) = rat(1, 1);
        assert_eq!(d.rank().unwrap(), 1);
        assert_eq!(id.mul(&d).unwrap(), d);
    }

    #[test]
    fn laurent_eval() {
        let l = Laurent::new(Rationals);
        let mut m = Matrix::zero(l.clone(), labels(2));
        *m.at_mut(0, 0) = l.x();
        *m.at_mut(1, 1) = l.x_inv();
        let e = eval_matrix(&m, &rat(2, 1)).unwrap();
        assert_eq!(*e.at(0, 0), rat(2, 1));
        assert_eq!(*e.at(1, 1), rat(1, 2));
    }
}
