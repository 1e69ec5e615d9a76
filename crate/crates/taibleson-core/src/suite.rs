//! Deterministic random suites for property tests and the verification
//! harness: every draw flows from a stated seed through ChaCha8, so suites
//! are reproducible across runs and platforms.

use crate::cyclotomic::CycScalar;
use crate::point::Point;
use crate::prime::Prime;
use crate::scalar::rational_p_pow;
use crate::schwartz::TestFunction;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Options for random test functions.
#[derive(Clone, Copy, Debug)]
pub struct FnOpts {
    pub max_terms: usize,
    /// inclusive range of ball scales
    pub scale_range: (i64, i64),
    /// largest character depth of twists
    pub twist_depth: i64,
    /// largest `-v(center_i)`
    pub center_depth: i64,
    /// allow roots of unity in coefficients
    pub cyclotomic_coeffs: bool,
}

impl Default for FnOpts {
    fn default() -> Self {
        FnOpts {
            max_terms: 3,
            scale_range: (-2, 2),
            twist_depth: 2,
            center_depth: 2,
            cyclotomic_coeffs: true,
        }
    }
}

/// Seeded generator.
pub struct SuiteGen {
    rng: ChaCha8Rng,
}

impl SuiteGen {
    pub fn new(seed: u64) -> Self {
        SuiteGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Rational with p-adic valuation at least `-depth`: a small integer
    /// over a p-power denominator.
    pub fn padic_rational(&mut self, prime: Prime, depth: i64) -> BigRational {
        let p = prime.get() as i64;
        let k = self.rng.gen_range(0..=depth.max(0)) as u32;
        let bound = p.saturating_pow(k + 1).max(6);
        let num = self.rng.gen_range(-bound..=bound);
        BigRational::from_integer(num.into()) * rational_p_pow(prime, -(k as i64))
    }

    pub fn point(&mut self, prime: Prime, dim: usize, depth: i64) -> Point {
        Point::new(
            prime,
            (0..dim)
                .map(|_| self.padic_rational(prime, depth))
                .collect(),
        )
    }

    /// Nonzero sample points for residual checks, mixing norms above and
    /// below 1.
    pub fn sample_points(&mut self, prime: Prime, dim: usize, count: usize) -> Vec<Point> {
        let mut pts = Vec::with_capacity(count);
        while pts.len() < count {
            let x = self.point(prime, dim, 2);
            if !x.is_zero() {
                pts.push(x);
            }
        }
        pts
    }

    pub fn coefficient(&mut self, prime: Prime, cyclotomic: bool) -> CycScalar {
        let num = self.rng.gen_range(-9i64..=9);
        let den = self.rng.gen_range(1i64..=4);
        let base = CycScalar::from_ratio(prime, if num == 0 { 1 } else { num }, den);
        if cyclotomic && self.rng.gen_bool(0.5) {
            let j = self.rng.gen_range(1..prime.get() as i64);
            base.mul(&CycScalar::root_of_unity(prime, 1, &BigInt::from(j)))
        } else {
            base
        }
    }

    /// A random Bruhat-Schwartz function (never the zero representation).
    pub fn test_function(&mut self, prime: Prime, dim: usize, opts: FnOpts) -> TestFunction {
        let terms = self.rng.gen_range(1..=opts.max_terms);
        let mut f = TestFunction::zero(prime, dim);
        for _ in 0..terms {
            let scale = self.rng.gen_range(opts.scale_range.0..=opts.scale_range.1);
            let center = self.point(prime, dim, opts.center_depth);
            let twist = self.point(prime, dim, opts.twist_depth);
            let coeff = self.coefficient(prime, opts.cyclotomic_coeffs);
            let term = TestFunction::term(coeff, twist, center, scale).expect("term");
            f = f.add(&term).expect("add");
        }
        if f.is_zero_repr() {
            // coefficients cancelled; fall back to a plain indicator
            return TestFunction::chi(prime, dim, 0);
        }
        f
    }

    /// A random element of `W = span{chi_r}`.
    pub fn w_function(
        &mut self,
        prime: Prime,
        dim: usize,
        r_range: (i64, i64),
        terms: usize,
    ) -> TestFunction {
        let mut f = TestFunction::zero(prime, dim);
        for _ in 0..terms {
            let r = self.rng.gen_range(r_range.0..=r_range.1);
            let c = self.coefficient(prime, false);
            f = f
                .add(&TestFunction::chi(prime, dim, r).scale_cyc(&c))
                .expect("add");
        }
        if f.is_zero_repr() {
            return TestFunction::chi(prime, dim, 0);
        }
        f
    }

    /// A random zero-integral function (in `L`).
    pub fn l_function(&mut self, prime: Prime, dim: usize, opts: FnOpts) -> TestFunction {
        let f = self.test_function(prime, dim, opts);
        let (l_part, _) = f.decompose_lw().expect("decompose");
        if l_part.is_zero_repr() {
            // build one by hand: a shifted ball minus its radial average
            let shifted = TestFunction::term(
                CycScalar::one(prime),
                Point::zero(prime, dim),
                Point::from_integers(prime, &alloc::vec![1; dim]),
                1,
            )
            .expect("term");
            let (l2, _) = shifted.decompose_lw().expect("decompose");
            return l2;
        }
        l_part
    }

    pub fn gen_range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }
}
