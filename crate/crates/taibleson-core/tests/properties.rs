//! Property tests for the exact kernels: arithmetic laws that must hold
//! identically, checked on randomized inputs.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use taibleson_core::schwartz::FourierDirection;
use taibleson_core::suite::{FnOpts, SuiteGen};
use taibleson_core::{CycScalar, PadicScalar, Prime, TestFunction};

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7])
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-200i64..200, 1i64..60).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn p_power_rational() -> impl Strategy<Value = (u64, BigRational)> {
    (small_prime(), -400i64..400, 0u32..5).prop_map(|(p, n, k)| {
        let den = BigInt::from(p).pow(k);
        (p, BigRational::new(n.into(), den))
    })
}

proptest! {
    #[test]
    fn ultrametric_inequality(p in small_prime(), a in rational(), b in rational()) {
        let pr = Prime::new(p).unwrap();
        let x = PadicScalar::new(pr, a);
        let y = PadicScalar::new(pr, b);
        let s = x.checked_add(&y).unwrap();
        let bound = x.abs().max(y.abs());
        prop_assert!(s.abs() <= bound);
        if x.abs() != y.abs() {
            prop_assert_eq!(s.abs(), bound);
        }
    }

    #[test]
    fn psi_is_a_character((p, a) in p_power_rational(), (q, b) in p_power_rational()) {
        prop_assume!(p == q);
        let pr = Prime::new(p).unwrap();
        let x = PadicScalar::new(pr, a);
        let y = PadicScalar::new(pr, b);
        let lhs = CycScalar::psi(&x.checked_add(&y).unwrap());
        let rhs = CycScalar::psi(&x).mul(&CycScalar::psi(&y));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cyclotomic_ring_laws(p in small_prime(), i in 0u64..48, j in 0u64..48,
                            a in -9i64..9, b in -9i64..9) {
        let pr = Prime::new(p).unwrap();
        let x = CycScalar::root_of_unity(pr, 2, &BigInt::from(i))
            .scale(&BigRational::new(a.max(1).into(), 3.into()));
        let y = CycScalar::root_of_unity(pr, 2, &BigInt::from(j))
            .scale(&BigRational::new(b.max(1).into(), 2.into()));
        // commutativity and distributivity against a fixed third element
        let z = CycScalar::root_of_unity(pr, 1, &BigInt::from(1));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.add(&y), y.add(&x));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        // conjugation is an automorphism
        prop_assert_eq!(x.mul(&y).conj(), x.conj().mul(&y.conj()));
        // inversion where defined
        if !x.is_zero() {
            prop_assert!(x.mul(&x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn ball_children_partition(p in small_prime(), n in 1usize..3, digits in prop::collection::vec(0i64..9, 3)) {
        let pr = Prime::new(p).unwrap();
        let center = taibleson_core::Point::new(
            pr,
            (0..n).map(|i| BigRational::new(digits[i].into(), (p as i64).into())).collect(),
        );
        let ball = taibleson_core::Ball::new(center, 1);
        let children = ball.children();
        prop_assert_eq!(children.len(), (p as usize).pow(n as u32));
        let total: BigRational = children.iter().map(|c| c.measure()).sum();
        prop_assert_eq!(total, ball.measure());
        for (i, a) in children.iter().enumerate() {
            for b in &children[..i] {
                prop_assert_eq!(a.relation(b), taibleson_core::ball::BallRelation::Disjoint);
            }
            prop_assert_eq!(a.relation(&ball), taibleson_core::ball::BallRelation::Inside);
        }
    }
}

#[test]
fn fourier_inversion_and_parseval_randomized() {
    let mut gen = SuiteGen::new(42);
    let mut count = 0;
    for &p in &[2u64, 3, 5, 7] {
        for n in 1usize..=3 {
            let pr = Prime::new(p).unwrap();
            let reps = if n == 3 { 2 } else { 4 };
            let opts = FnOpts {
                scale_range: if n == 3 { (-1, 1) } else { (-2, 2) },
                max_terms: if n == 3 { 2 } else { 3 },
                ..FnOpts::default()
            };
            for _ in 0..reps {
                let phi = gen.test_function(pr, n, opts);
                let hat = phi.fourier(FourierDirection::Forward).unwrap();
                let back = hat.fourier(FourierDirection::Inverse).unwrap();
                assert!(back.eq_fn(&phi).unwrap(), "inversion p={p} n={n}");
                // Parseval, exactly in the real subfield
                let lhs = phi.product(&phi.conj().unwrap()).unwrap().integrate();
                let rhs = hat.product(&hat.conj().unwrap()).unwrap().integrate();
                assert_eq!(lhs, rhs, "parseval p={p} n={n}");
                count += 1;
            }
        }
    }
    assert!(count >= 40);
}

#[test]
fn reflection_double_transform_identity() {
    let mut gen = SuiteGen::new(7);
    for &p in &[2u64, 5] {
        let pr = Prime::new(p).unwrap();
        for _ in 0..5 {
            let phi = gen.test_function(pr, 1, FnOpts::default());
            let twice = phi
                .reflect()
                .unwrap()
                .fourier(FourierDirection::Forward)
                .unwrap()
                .fourier(FourierDirection::Forward)
                .unwrap();
            assert!(twice.eq_fn(&phi).unwrap());
        }
    }
}

#[test]
fn decomposition_reassembles_and_is_idempotent() {
    let mut gen = SuiteGen::new(11);
    for &p in &[2u64, 3, 7] {
        let pr = Prime::new(p).unwrap();
        for n in 1usize..=2 {
            // canonicalization cost is p^{spread * n}; keep wide-prime
            // two-dimensional cases at a narrow spread
            let opts = if (p as usize).pow(n as u32) > 25 {
                FnOpts {
                    scale_range: (-1, 1),
                    twist_depth: 1,
                    center_depth: 1,
                    ..FnOpts::default()
                }
            } else {
                FnOpts::default()
            };
            for _ in 0..4 {
                let phi = gen.test_function(pr, n, opts);
                let (l, w) = phi.decompose_lw().unwrap();
                assert!(l.integrate().is_zero());
                assert!(l.add(&w).unwrap().eq_fn(&phi).unwrap());
                // decomposing the parts reproduces them
                let (ll, lw) = l.decompose_lw().unwrap();
                assert!(lw.is_zero_fn().unwrap());
                assert!(ll.eq_fn(&l).unwrap());
                if !w.is_zero_fn().unwrap() {
                    let (wl, ww) = w.decompose_lw().unwrap();
                    assert!(wl.is_zero_fn().unwrap());
                    assert!(ww.eq_fn(&w).unwrap());
                }
            }
        }
    }
}

#[test]
fn convolution_is_commutative() {
    let mut gen = SuiteGen::new(13);
    let pr = Prime::new(3).unwrap();
    for _ in 0..5 {
        let a = gen.test_function(pr, 1, FnOpts::default());
        let b = gen.test_function(pr, 1, FnOpts::default());
        let ab = a.convolve(&b).unwrap();
        let ba = b.convolve(&a).unwrap();
        assert!(ab.eq_fn(&ba).unwrap());
    }
}

#[test]
fn w_space_fourier_invariant_randomized() {
    let mut gen = SuiteGen::new(17);
    for &p in &[2u64, 5] {
        let pr = Prime::new(p).unwrap();
        for _ in 0..6 {
            let w = gen.w_function(pr, 1, (-3, 3), 3);
            let hat = w.fourier(FourierDirection::Forward).unwrap();
            assert!(hat.as_w_combination().unwrap().is_some());
        }
    }
}
