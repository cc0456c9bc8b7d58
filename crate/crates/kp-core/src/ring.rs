//! Exact commutative coefficient rings: integers, rationals, integers mod n,
//! and Laurent polynomials over a base ring.

use crate::error::{KpError, Result};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;

/// A commutative ring with 1 and decidable equality, in context-object style:
/// the ring value carries parameters (e.g. the modulus), elements are plain
/// data.
pub trait Ring: Clone + fmt::Debug {
    type Elem: Clone + PartialEq + Eq + Hash + Ord + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// Multiplicative inverse where one exists.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_field(&self) -> bool;
    fn display(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// The ring of integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn from_i64(&self, n: i64) -> BigInt {
        BigInt::from(n)
    }
    fn inv(&self, a: &BigInt) -> Option<BigInt> {
        (a.is_one() || (-a).is_one()).then(|| a.clone())
    }
    fn is_field(&self) -> bool {
        false
    }
    fn display(&self, a: &BigInt) -> String {
        a.to_string()
    }
}

/// The field of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rationals;

/// Ordered wrapper; BigRational lacks Hash in num-rational's default
/// features, so elements are kept in reduced (numer, denom) form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigInt, BigInt);

impl Rat {
    pub fn to_ratio(&self) -> BigRational {
        BigRational::new(self.0.clone(), self.1.clone())
    }
    pub fn from_ratio(r: &BigRational) -> Rat {
        Rat(r.numer().clone(), r.denom().clone())
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1.is_one() {
            write!(f, "{}", self.0)
        } else {
            write!(f, "{}/{}", self.0, self.1)
        }
    }
}

impl Ring for Rationals {
    type Elem = Rat;

    fn zero(&self) -> Rat {
        Rat(BigInt::zero(), BigInt::one())
    }
    fn one(&self) -> Rat {
        Rat(BigInt::one(), BigInt::one())
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        Rat::from_ratio(&(a.to_ratio() + b.to_ratio()))
    }
    fn neg(&self, a: &Rat) -> Rat {
        Rat(-a.0.clone(), a.1.clone())
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        Rat::from_ratio(&(a.to_ratio() * b.to_ratio()))
    }
    fn from_i64(&self, n: i64) -> Rat {
        Rat(BigInt::from(n), BigInt::one())
    }
    fn inv(&self, a: &Rat) -> Option<Rat> {
        (!a.0.is_zero()).then(|| Rat::from_ratio(&a.to_ratio().recip()))
    }
    fn is_field(&self) -> bool {
        true
    }
    fn display(&self, a: &Rat) -> String {
        format!("{a:?}")
    }
}

/// Rational from a numerator and denominator.
pub fn rat(n: i64, d: i64) -> Rat {
    assert!(d != 0);
    Rat::from_ratio(&BigRational::new(BigInt::from(n), BigInt::from(d)))
}

/// Integers mod n, n >= 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mod {
    n: BigUint,
    prime: bool,
}

impl Mod {
    pub fn new(n: u64) -> Result<Mod> {
        if n < 2 {
            return Err(KpError::Ring(format!("modulus {n} must be at least 2")));
        }
        Ok(Mod {
            n: BigUint::from(n),
            prime: is_prime(n),
        })
    }
    pub fn modulus(&self) -> &BigUint {
        &self.n
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Ring for Mod {
    type Elem = BigUint;

    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn one(&self) -> BigUint {
        BigUint::one() % &self.n
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a + b) % &self.n
    }
    fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            BigUint::zero()
        } else {
            &self.n - a
        }
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.n
    }
    fn from_i64(&self, v: i64) -> BigUint {
        let m = BigInt::from(v).mod_floor_big(&self.n);
        m
    }
    fn inv(&self, a: &BigUint) -> Option<BigUint> {
        // extended euclid on (a, n)
        let (mut r0, mut r1) = (BigInt::from(a.clone()), BigInt::from(self.n.clone()));
        let (mut s0, mut s1) = (BigInt::one(), BigInt::zero());
        while !r1.is_zero() {
            let q = &r0 / &r1;
            let r2 = &r0 - &q * &r1;
            r0 = std::mem::replace(&mut r1, r2);
            let s2 = &s0 - &q * &s1;
            s0 = std::mem::replace(&mut s1, s2);
        }
        if r0.is_one() {
            Some(s0.mod_floor_big(&self.n))
        } else {
            None
        }
    }
    fn is_field(&self) -> bool {
        self.prime
    }
    fn display(&self, a: &BigUint) -> String {
        a.to_string()
    }
}

trait ModFloorBig {
    fn mod_floor_big(&self, n: &BigUint) -> BigUint;
}

impl ModFloorBig for BigInt {
    fn mod_floor_big(&self, n: &BigUint) -> BigUint {
        let n = BigInt::from(n.clone());
        let mut m = self % &n;
        if m.is_negative() {
            m += &n;
        }
        m.to_biguint().unwrap()
    }
}

/// Laurent polynomials over a base ring; finitely supported exponent maps
/// with no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent<R: Ring> {
    pub base: R,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LaurentElem<E: Clone + Eq + Ord + Hash>(pub BTreeMap<i64, E>);

impl<E: Clone + Eq + Ord + Hash + fmt::Debug> fmt::Debug for LaurentElem<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(e, c)| match e {
                0 => format!("{c:?}"),
                1 => format!("{c:?}*x"),
                _ => format!("{c:?}*x^{e}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<R: Ring> Laurent<R> {
    pub fn new(base: R) -> Self {
        Laurent { base }
    }

    pub fn monomial(&self, exp: i64, coeff: R::Elem) -> LaurentElem<R::Elem> {
        let mut m = BTreeMap::new();
        if !self.base.is_zero(&coeff) {
            m.insert(exp, coeff);
        }
        LaurentElem(m)
    }

    pub fn x(&self) -> LaurentElem<R::Elem> {
        self.monomial(1, self.base.one())
    }

    pub fn x_inv(&self) -> LaurentElem<R::Elem> {
        self.monomial(-1, self.base.one())
    }

    /// Evaluate at a point of the base ring; negative exponents need the
    /// point to be invertible.
    pub fn eval(&self, p: &LaurentElem<R::Elem>, z: &R::Elem) -> Option<R::Elem> {
        let mut acc = self.base.zero();
        for (&e, c) in &p.0 {
            let zi = if e >= 0 {
                pow(&self.base, z, e as u64)
            } else {
                pow(&self.base, &self.base.inv(z)?, (-e) as u64)
            };
            acc = self.base.add(&acc, &self.base.mul(c, &zi));
        }
        Some(acc)
    }
}

fn pow<R: Ring>(r: &R, a: &R::Elem, mut e: u64) -> R::Elem {
    let mut acc = r.one();
    let mut base = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = r.mul(&acc, &base);
        }
        base = r.mul(&base, &base);
        e >>= 1;
    }
    acc
}

impl<R: Ring> Ring for Laurent<R> {
    type Elem = LaurentElem<R::Elem>;

    fn zero(&self) -> Self::Elem {
        LaurentElem(BTreeMap::new())
    }
    fn one(&self) -> Self::Elem {
        self.monomial(0, self.base.one())
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut out = a.0.clone();
        for (&e, c) in &b.0 {
            let v = match out.remove(&e) {
                None => c.clone(),
                Some(prev) => self.base.add(&prev, c),
            };
            if !self.base.is_zero(&v) {
                out.insert(e, v);
            }
        }
        LaurentElem(out)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        LaurentElem(a.0.iter().map(|(&e, c)| (e, self.base.neg(c))).collect())
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut out: BTreeMap<i64, R::Elem> = BTreeMap::new();
        for (&e1, c1) in &a.0 {
            for (&e2, c2) in &b.0 {
                let e = e1 + e2;
                let prod = self.base.mul(c1, c2);
                let v = match out.remove(&e) {
                    None => prod,
                    Some(prev) => self.base.add(&prev, &prod),
                };
                if !self.base.is_zero(&v) {
                    out.insert(e, v);
                }
            }
        }
        LaurentElem(out)
    }
    fn from_i64(&self, n: i64) -> Self::Elem {
        self.monomial(0, self.base.from_i64(n))
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        // units are single terms with invertible coefficient
        if a.0.len() != 1 {
            return None;
        }
        let (&e, c) = a.0.iter().next().unwrap();
        Some(self.monomial(-e, self.base.inv(c)?))
    }
    fn is_field(&self) -> bool {
        false
    }
    fn display(&self, a: &Self::Elem) -> String {
        if a.0.is_empty() {
            return "0".into();
        }
        a.0.iter()
            .map(|(e, c)| {
                let cs = self.base.display(c);
                match e {
                    0 => cs,
                    1 => format!("{cs}*x"),
                    _ => format!("{cs}*x^{e}"),
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Runtime ring selector, as written in CLI ring literals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingKind {
    Integers,
    Rationals,
    Mod(u64),
    LaurentRationals,
    LaurentMod(u64),
}

impl RingKind {
    pub fn parse(text: &str) -> Result<RingKind> {
        let t = text.trim();
        if t == "ZZ" {
            return Ok(RingKind::Integers);
        }
        if t == "QQ" {
            return Ok(RingKind::Rationals);
        }
        if let Some(m) = t.strip_prefix("Z/") {
            let n: u64 = m
                .parse()
                .map_err(|_| KpError::Ring(format!("bad modulus in '{t}'")))?;
            Mod::new(n)?;
            return Ok(RingKind::Mod(n));
        }
        if let Some(inner) = t.strip_prefix("Laurent(").and_then(|s| s.strip_suffix(')')) {
            return match RingKind::parse(inner)? {
                RingKind::Rationals => Ok(RingKind::LaurentRationals),
                RingKind::Mod(n) => Ok(RingKind::LaurentMod(n)),
                other => Err(KpError::Ring(format!(
                    "Laurent coefficients must be QQ or Z/p, got {other:?}"
                ))),
            };
        }
        Err(KpError::Ring(format!("unknown ring literal '{t}'")))
    }

    pub fn display(&self) -> String {
        match self {
            RingKind::Integers => "ZZ".into(),
            RingKind::Rationals => "QQ".into(),
            RingKind::Mod(n) => format!("Z/{n}"),
            RingKind::LaurentRationals => "Laurent(QQ)".into(),
            RingKind::LaurentMod(n) => format!("Laurent(Z/{n})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic() {
        let q = Rationals;
        assert_eq!(q.add(&rat(1, 2), &rat(1, 3)), rat(5, 6));
        assert_eq!(q.mul(&rat(2, 3), &rat(3, 2)), q.one());
        assert!(q.is_field());
    }

    #[test]
    fn mod_arithmetic() {
        let z5 = Mod::new(5).unwrap();
        let three = z5.from_i64(3);
        let four = z5.from_i64(4);
        assert_eq!(z5.mul(&three, &four), z5.from_i64(2));
        assert_eq!(z5.inv(&three), Some(z5.from_i64(2)));
        assert!(z5.is_field());
        let z6 = Mod::new(6).unwrap();
        assert!(!z6.is_field());
        assert_eq!(z6.inv(&z6.from_i64(2)), None);
        assert!(Mod::new(1).is_err());
    }

    #[test]
    fn laurent_arithmetic() {
        let l = Laurent::new(Rationals);
        let p = l.add(&l.x(), &l.x_inv());
        let q = l.mul(&p, &l.x());
        let expected = l.add(&l.monomial(2, rat(1, 1)), &l.one());
        assert_eq!(q, expected);
        assert_eq!(l.eval(&q, &rat(2, 1)), Some(rat(5, 1)));
        // x - x = 0 prunes the zero coefficient
        assert!(l.is_zero(&l.sub(&l.x(), &l.x())));
    }

    #[test]
    fn ring_literals_parse() {
        assert_eq!(RingKind::parse("ZZ").unwrap(), RingKind::Integers);
        assert_eq!(RingKind::parse("Z/7").unwrap(), RingKind::Mod(7));
        assert_eq!(
            RingKind::parse("Laurent(Z/5)").unwrap(),
            RingKind::LaurentMod(5)
        );
        assert!(RingKind::parse("GF(4)").is_err());
        assert!(RingKind::parse("Z/1").is_err());
    }
}
