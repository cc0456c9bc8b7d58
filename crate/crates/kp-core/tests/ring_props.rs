//! Property tests for the coefficient rings and matrices.

use kp_core::matrix::Matrix;
use kp_core::ring::{rat, Integers, Laurent, Mod, Rat, Rationals, Ring};
use proptest::prelude::*;

fn rat_strategy() -> impl Strategy<Value = Rat> {
    (-50i64..50, 1i64..20).prop_map(|(n, d)| rat(n, d))
}

fn laurent_strategy() -> impl Strategy<Value = kp_core::ring::LaurentElem<Rat>> {
    proptest::collection::vec((-4i64..=4, -9i64..10), 0..5).prop_map(|terms| {
        let l = Laurent::new(Rationals);
        let mut acc = l.zero();
        for (e, c) in terms {
            acc = l.add(&acc, &l.monomial(e, rat(c, 1)));
        }
        acc
    })
}

macro_rules! ring_axioms {
    ($name:ident, $ring:expr, $strat:expr) => {
        mod $name {
            use super::*;

            proptest! {
                #[test]
                fn add_commutes(a in $strat, b in $strat) {
                    let r = $ring;
                    prop_assert_eq!(r.add(&a, &b), r.add(&b, &a));
                }

                #[test]
                fn add_associates(a in $strat, b in $strat, c in $strat) {
                    let r = $ring;
                    prop_assert_eq!(r.add(&r.add(&a, &b), &c), r.add(&a, &r.add(&b, &c)));
                }

                #[test]
                fn mul_commutes(a in $strat, b in $strat) {
                    let r = $ring;
                    prop_assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
                }

                #[test]
                fn mul_associates(a in $strat, b in $strat, c in $strat) {
                    let r = $ring;
                    prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
                }

                #[test]
                fn distributes(a in $strat, b in $strat, c in $strat) {
                    let r = $ring;
                    prop_assert_eq!(
                        r.mul(&a, &r.add(&b, &c)),
                        r.add(&r.mul(&a, &b), &r.mul(&a, &c))
                    );
                }

                #[test]
                fn units_and_negation(a in $strat) {
                    let r = $ring;
                    prop_assert_eq!(r.add(&a, &r.zero()), a.clone());
                    prop_assert_eq!(r.mul(&a, &r.one()), a.clone());
                    prop_assert!(r.is_zero(&r.add(&a, &r.neg(&a))));
                }

                #[test]
                fn inverses_invert(a in $strat) {
                    let r = $ring;
                    if let Some(inv) = r.inv(&a) {
                        prop_assert!(r.is_one(&r.mul(&a, &inv)));
                    }
                }
            }
        }
    };
}

ring_axioms!(integer_axioms, Integers, (-100i64..100).prop_map(|n| Integers.from_i64(n)));
ring_axioms!(rational_axioms, Rationals, rat_strategy());
ring_axioms!(mod6_axioms, Mod::new(6).unwrap(), (0i64..6).prop_map(|n| Mod::new(6).unwrap().from_i64(n)));
ring_axioms!(mod7_axioms, Mod::new(7).unwrap(), (0i64..7).prop_map(|n| Mod::new(7).unwrap().from_i64(n)));
ring_axioms!(laurent_axioms, Laurent::new(Rationals), laurent_strategy());

proptest! {
    /// Laurent multiplication agrees with direct coefficient convolution.
    #[test]
    fn laurent_mul_is_convolution(a in laurent_strategy(), b in laurent_strategy()) {
        let l = Laurent::new(Rationals);
        let prod = l.mul(&a, &b);
        let lo = -20i64;
        let hi = 20i64;
        for e in lo..=hi {
            let mut acc = rat(0, 1);
            for i in lo..=hi {
                let ca = a.0.get(&i).cloned().unwrap_or_else(|| rat(0, 1));
                let cb = b.0.get(&(e - i)).cloned().unwrap_or_else(|| rat(0, 1));
                acc = Rationals.add(&acc, &Rationals.mul(&ca, &cb));
            }
            let got = prod.0.get(&e).cloned().unwrap_or_else(|| rat(0, 1));
            prop_assert_eq!(got, acc);
        }
    }

    /// Matrix multiplication associates.
    #[test]
    fn matrix_mul_associates(
        a in proptest::collection::vec(-9i64..10, 9),
        b in proptest::collection::vec(-9i64..10, 9),
        c in proptest::collection::vec(-9i64..10, 9),
    ) {
        let labels: Vec<String> = (0..3).map(|i| format!("i{i}")).collect();
        let mk = |v: &[i64]| {
            let mut m = Matrix::zero(Rationals, labels.clone());
            for (i, x) in v.iter().enumerate() {
                m.entries[i] = rat(*x, 1);
            }
            m
        };
        let (ma, mb, mc) = (mk(&a), mk(&b), mk(&c));
        prop_assert_eq!(
            ma.mul(&mb).unwrap().mul(&mc).unwrap(),
            ma.mul(&mb.mul(&mc).unwrap()).unwrap()
        );
    }

    /// Rank at an evaluation point is monotone under products.
    #[test]
    fn rank_of_diagonal(d0 in -5i64..5, d1 in -5i64..5) {
        let labels: Vec<String> = (0..2).map(|i| format!("i{i}")).collect();
        let mut m = Matrix::zero(Rationals, labels);
        m.entries[0] = rat(d0, 1);
        m.entries[3] = rat(d1, 1);
        let expected = (d0 != 0) as usize + (d1 != 0) as usize;
        prop_assert_eq!(m.rank().unwrap(), expected);
    }
}
