//! Degree vectors in N^k, their join/meet order, and the extended vectors
//! with infinite coordinates used by boundary paths.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use std::fmt;

/// An element of N^k with arbitrary-precision coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Degree(Vec<BigUint>);

impl Degree {
    pub fn new(coords: Vec<BigUint>) -> Self {
        Degree(coords)
    }

    pub fn zero(k: usize) -> Self {
        Degree(vec![BigUint::zero(); k])
    }

    /// The standard basis vector e_i (0-indexed color).
    pub fn basis(k: usize, i: usize) -> Self {
        assert!(i < k);
        let mut c = vec![BigUint::zero(); k];
        c[i] = BigUint::one();
        Degree(c)
    }

    pub fn from_u64s(coords: &[u64]) -> Self {
        Degree(coords.iter().map(|&c| BigUint::from(c)).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coord(&self, i: usize) -> &BigUint {
        &self.0[i]
    }

    pub fn coords(&self) -> &[BigUint] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    /// Componentwise order; this is the partial order of N^k, not the
    /// derived `Ord` (which is lexicographic and only used for sorting).
    pub fn le(&self, other: &Degree) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference; requires `other.le(self)`.
    pub fn checked_sub(&self, other: &Degree) -> Option<Degree> {
        if !other.le(self) {
            return None;
        }
        Some(Degree(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn join(&self, other: &Degree) -> Degree {
        Degree(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.max(b).clone())
                .collect(),
        )
    }

    pub fn meet(&self, other: &Degree) -> Degree {
        Degree(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.min(b).clone())
                .collect(),
        )
    }

    /// Colors with a strictly positive coordinate.
    pub fn support(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| !self.0[i].is_zero()).collect()
    }

    pub fn scale(&self, t: u64) -> Degree {
        let t = BigUint::from(t);
        Degree(self.0.iter().map(|c| c * &t).collect())
    }

    /// Sum of all coordinates, as usize; enumeration helpers assume degrees
    /// small enough to materialise.
    pub fn total(&self) -> usize {
        self.0
            .iter()
            .map(|c| usize::try_from(c).expect("degree coordinate too large to enumerate"))
            .sum()
    }

    pub fn coord_usize(&self, i: usize) -> usize {
        usize::try_from(&self.0[i]).expect("degree coordinate too large to enumerate")
    }

    pub fn to_graded(&self) -> GradedDegree {
        GradedDegree(self.0.iter().map(|c| BigInt::from(c.clone())).collect())
    }
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// All degrees m with m <= n, in lexicographic order.
pub fn degree_box(n: &Degree) -> Vec<Degree> {
    let k = n.rank();
    let mut out = Vec::new();
    let mut cur = vec![BigUint::zero(); k];
    loop {
        out.push(Degree(cur.clone()));
        // lexicographic successor within the box
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < *n.coord(i) {
                cur[i] += 1u32;
                for c in cur.iter_mut().skip(i + 1) {
                    *c = BigUint::zero();
                }
                break;
            }
        }
    }
}

/// An element of Z^k; the degree of a homogeneous algebra element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedDegree(Vec<BigInt>);

impl GradedDegree {
    pub fn new(coords: Vec<BigInt>) -> Self {
        GradedDegree(coords)
    }

    pub fn zero(k: usize) -> Self {
        GradedDegree(vec![BigInt::zero(); k])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn add(&self, other: &GradedDegree) -> GradedDegree {
        GradedDegree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// a - b for degrees a, b in N^k.
    pub fn diff(a: &Degree, b: &Degree) -> GradedDegree {
        GradedDegree(
            a.coords()
                .iter()
                .zip(b.coords())
                .map(|(x, y)| BigInt::from(x.clone()) - BigInt::from(y.clone()))
                .collect(),
        )
    }
}

impl fmt::Debug for GradedDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
    }
}

impl fmt::Display for GradedDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A coordinate of the degree of a boundary path: finite or infinite.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ExtCoord {
    Fin(BigUint),
    Inf,
}

/// Degree of a boundary path: an element of (N u {oo})^k.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtDegree(Vec<ExtCoord>);

impl ExtDegree {
    pub fn new(coords: Vec<ExtCoord>) -> Self {
        ExtDegree(coords)
    }

    pub fn finite(d: &Degree) -> Self {
        ExtDegree(d.coords().iter().map(|c| ExtCoord::Fin(c.clone())).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coord(&self, i: usize) -> &ExtCoord {
        &self.0[i]
    }

    pub fn is_infinite(&self, i: usize) -> bool {
        matches!(self.0[i], ExtCoord::Inf)
    }

    /// Componentwise m <= self for finite m.
    pub fn ge_finite(&self, m: &Degree) -> bool {
        self.0.iter().zip(m.coords()).all(|(c, x)| match c {
            ExtCoord::Inf => true,
            ExtCoord::Fin(y) => x <= y,
        })
    }

    /// Meet with a finite degree, always finite.
    pub fn meet_finite(&self, m: &Degree) -> Degree {
        Degree::new(
            self.0
                .iter()
                .zip(m.coords())
                .map(|(c, x)| match c {
                    ExtCoord::Inf => x.clone(),
                    ExtCoord::Fin(y) => x.min(y).clone(),
                })
                .collect(),
        )
    }
}

impl fmt::Debug for ExtDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|c| match c {
                ExtCoord::Fin(x) => x.to_string(),
                ExtCoord::Inf => "inf".to_string(),
            })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Display for ExtDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(c: &[u64]) -> Degree {
        Degree::from_u64s(c)
    }

    #[test]
    fn join_meet_order() {
        let a = d(&[2, 1]);
        let b = d(&[1, 3]);
        assert_eq!(a.join(&b), d(&[2, 3]));
        assert_eq!(a.meet(&b), d(&[1, 1]));
        assert!(!a.le(&b));
        assert!(a.meet(&b).le(&a));
        assert!(a.le(&a.join(&b)));
    }

    #[test]
    fn sub_is_partial() {
        assert_eq!(d(&[2, 2]).checked_sub(&d(&[1, 0])), Some(d(&[1, 2])));
        assert_eq!(d(&[1, 0]).checked_sub(&d(&[0, 1])), None);
    }

    #[test]
    fn box_enumeration() {
        let b = degree_box(&d(&[1, 2]));
        assert_eq!(b.len(), 6);
        assert_eq!(b[0], d(&[0, 0]));
        assert_eq!(b[5], d(&[1, 2]));
    }
}
