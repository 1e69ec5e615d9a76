//! High-precision numerics: the only inexact layer of the crate.
//!
//! Everything reaching this module is already a finite combination of
//! exact data (cyclotomic coefficients, integer valuations, closed-form
//! geometric tails), so floating point error comes from final rounding
//! alone. Default precision is 128 mantissa bits.

use crate::cyclotomic::CycScalar;
use crate::laurent::{LaurentPoly, LaurentRational};
use crate::prime::Prime;
use alloc::collections::BTreeMap;
use alloc::rc::Rc;
use alloc::vec::Vec;
use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use core::cell::RefCell;
use core::cmp::Ordering;
use num_bigint::BigInt;
use num_rational::BigRational;

/// Evaluation context: precision, rounding mode, and caches for
/// transcendental constants and root-of-unity tables.
pub struct Ctx {
    prec: usize,
    rm: RoundingMode,
    consts: RefCell<Consts>,
    roots: RefCell<BTreeMap<u64, Rc<Vec<Complex>>>>,
    ln_cache: RefCell<BTreeMap<u64, Real>>,
}

impl Ctx {
    pub fn new(precision_bits: usize) -> Self {
        Ctx {
            prec: precision_bits.max(64),
            rm: RoundingMode::ToEven,
            consts: RefCell::new(Consts::new().expect("constants cache")),
            roots: RefCell::new(BTreeMap::new()),
            ln_cache: RefCell::new(BTreeMap::new()),
        }
    }

    #[inline]
    pub fn precision_bits(&self) -> usize {
        self.prec
    }

    pub fn zero(&self) -> Real {
        Real(BigFloat::from_f64(0.0, self.prec))
    }

    pub fn one(&self) -> Real {
        Real(BigFloat::from_f64(1.0, self.prec))
    }

    pub fn real_from_f64(&self, x: f64) -> Real {
        Real(BigFloat::from_f64(x, self.prec))
    }

    pub fn real_from_i64(&self, x: i64) -> Real {
        Real(BigFloat::from_i64(x, self.prec))
    }

    /// Exact big integer as a float (rounded only if it exceeds the
    /// precision).
    pub fn real_from_bigint(&self, n: &BigInt) -> Real {
        let (sign, digits) = n.to_u64_digits();
        if digits.is_empty() {
            return self.zero();
        }
        let e = (digits.len() * 64) as astro_float::Exponent;
        let s = match sign {
            num_bigint::Sign::Minus => Sign::Neg,
            _ => Sign::Pos,
        };
        let mut f = BigFloat::from_words(&digits, s, e);
        // keep at working precision (correctly rounded)
        let _ = f.set_precision(self.prec.max(digits.len() * 64), self.rm);
        Real(f)
    }

    /// Rational to float with a single correctly-rounded division.
    pub fn real_from_rational(&self, q: &BigRational) -> Real {
        let num = self.real_from_bigint(q.numer());
        let den = self.real_from_bigint(q.denom());
        num.div(&den, self)
    }

    pub fn pi(&self) -> Real {
        Real(self.consts.borrow_mut().pi(self.prec, self.rm))
    }

    /// `ln p`, cached per prime.
    pub fn ln_u64(&self, p: u64) -> Real {
        if let Some(v) = self.ln_cache.borrow().get(&p) {
            return v.clone();
        }
        let x = BigFloat::from_i64(p as i64, self.prec);
        let v = Real(x.ln(self.prec, self.rm, &mut self.consts.borrow_mut()));
        self.ln_cache.borrow_mut().insert(p, v.clone());
        v
    }

    /// `p^e` for integer `e` of either sign, exact up to one rounding.
    pub fn p_pow_i64(&self, p: Prime, e: i64) -> Real {
        let base = BigFloat::from_i64(p.get() as i64, self.prec);
        if e >= 0 {
            Real(base.powi(e as usize, self.prec, self.rm))
        } else {
            let pos = base.powi((-e) as usize, self.prec, self.rm);
            Real(pos.reciprocal(self.prec, self.rm))
        }
    }

    /// `p^x` for real `x`, via `exp(x ln p)`.
    pub fn p_pow_real(&self, p: Prime, x: &Real) -> Real {
        let lnp = self.ln_u64(p.get());
        let arg = x.mul(&lnp, self);
        Real(arg.0.exp(self.prec, self.rm, &mut self.consts.borrow_mut()))
    }

    /// The table of `N`-th roots of unity, rendered once and cached.
    pub fn roots_of_unity(&self, n: u64) -> Rc<Vec<Complex>> {
        if let Some(t) = self.roots.borrow().get(&n) {
            return t.clone();
        }
        let mut cc = self.consts.borrow_mut();
        let pi = cc.pi(self.prec, self.rm);
        let two = BigFloat::from_f64(2.0, self.prec);
        let n_f = BigFloat::from_i64(n as i64, self.prec);
        let step = pi
            .mul(&two, self.prec, self.rm)
            .div(&n_f, self.prec, self.rm);
        let mut table = Vec::with_capacity(n as usize);
        for k in 0..n {
            let angle = step.mul(&BigFloat::from_i64(k as i64, self.prec), self.prec, self.rm);
            let re = angle.cos(self.prec, self.rm, &mut cc);
            let im = angle.sin(self.prec, self.rm, &mut cc);
            table.push(Complex {
                re: Real(re),
                im: Real(im),
            });
        }
        drop(cc);
        let rc = Rc::new(table);
        self.roots.borrow_mut().insert(n, rc.clone());
        rc
    }

    /// Numeric image of an exact cyclotomic scalar.
    pub fn render_cyc(&self, c: &CycScalar) -> Complex {
        if c.is_zero() {
            return Complex::zero(self);
        }
        if let Some(q) = c.as_rational() {
            return Complex {
                re: self.real_from_rational(&q),
                im: self.zero(),
            };
        }
        let order = c.root_order();
        let table = self.roots_of_unity(order);
        let mut acc = Complex::zero(self);
        for (e, coeff) in c.coeffs() {
            let w = self.real_from_rational(coeff);
            acc = acc.add(&table[e as usize].scale(&w, self), self);
        }
        acc
    }

    /// Evaluate a Laurent polynomial at a real `t > 0`.
    pub fn eval_laurent_poly(&self, f: &LaurentPoly, t: &Real) -> Complex {
        let mut acc = Complex::zero(self);
        for (e, c) in f.terms() {
            let w = t.powi(e, self);
            acc = acc.add(&self.render_cyc(c).scale(&w, self), self);
        }
        acc
    }

    /// Evaluate a rational function at a real `t > 0` away from poles.
    pub fn eval_laurent_rational(&self, f: &LaurentRational, t: &Real) -> Complex {
        let n = self.eval_laurent_poly(f.num(), t);
        let d = self.eval_laurent_poly(f.den(), t);
        n.div(&d, self)
    }

    /// Derivative evaluation `f'(t)` of a Laurent polynomial at real `t`.
    pub fn eval_laurent_poly_derivative(&self, f: &LaurentPoly, t: &Real) -> Complex {
        let mut acc = Complex::zero(self);
        for (e, c) in f.terms() {
            if e == 0 {
                continue;
            }
            let w = t.powi(e - 1, self).mul(&self.real_from_i64(e), self);
            acc = acc.add(&self.render_cyc(c).scale(&w, self), self);
        }
        acc
    }

    /// Laurent expansion head of `f` at a simple pole `t0` (in the
    /// variable `t - t0`): returns `(c_{-1}, c_0)`.
    ///
    /// The denominator is a true polynomial in canonical form; it is
    /// synthetically divided by `(t - t0)` at the numeric point.
    pub fn laurent_series_head(&self, f: &LaurentRational, t0: &Real) -> (Complex, Complex) {
        let d = f.den();
        let hi = d.max_exp().unwrap_or(0);
        debug_assert_eq!(d.min_exp().unwrap_or(0).min(0), 0, "normalized denominator");
        // dense real coefficients of the denominator
        let mut dense = alloc::vec![Complex::zero(self); (hi + 1) as usize];
        for (e, c) in d.terms() {
            dense[e as usize] = self.render_cyc(c);
        }
        // synthetic division: D(t) = (t - t0) D1(t)
        let mut d1 = alloc::vec![Complex::zero(self); hi as usize];
        let mut carry = dense[hi as usize].clone();
        for i in (0..hi as usize).rev() {
            d1[i] = carry.clone();
            carry = dense[i].add(&carry.scale(t0, self), self);
        }
        // carry is D(t0); for a genuine pole it is ~0 and unused
        let eval_d1 = |x: &Real| -> Complex {
            let mut acc = Complex::zero(self);
            for (i, c) in d1.iter().enumerate() {
                acc = acc.add(&c.scale(&x.powi(i as i64, self), self), self);
            }
            acc
        };
        let eval_d1_prime = |x: &Real| -> Complex {
            let mut acc = Complex::zero(self);
            for (i, c) in d1.iter().enumerate().skip(1) {
                let w = x
                    .powi(i as i64 - 1, self)
                    .mul(&self.real_from_i64(i as i64), self);
                acc = acc.add(&c.scale(&w, self), self);
            }
            acc
        };
        let n_t0 = self.eval_laurent_poly(f.num(), t0);
        let np_t0 = self.eval_laurent_poly_derivative(f.num(), t0);
        let d1_t0 = eval_d1(t0);
        let d1p_t0 = eval_d1_prime(t0);
        let c_m1 = n_t0.div(&d1_t0, self);
        // c0 = (N' D1 - N D1') / D1^2
        let c0 = np_t0
            .mul(&d1_t0, self)
            .sub(&n_t0.mul(&d1p_t0, self), self)
            .div(&d1_t0.mul(&d1_t0, self), self);
        (c_m1, c0)
    }
}

/// Arbitrary-precision real number tied to a [`Ctx`] precision.
#[derive(Clone, Debug)]
pub struct Real(BigFloat);

impl Real {
    pub fn add(&self, rhs: &Real, ctx: &Ctx) -> Real {
        Real(self.0.add(&rhs.0, ctx.prec, ctx.rm))
    }

    pub fn sub(&self, rhs: &Real, ctx: &Ctx) -> Real {
        Real(self.0.sub(&rhs.0, ctx.prec, ctx.rm))
    }

    pub fn mul(&self, rhs: &Real, ctx: &Ctx) -> Real {
        Real(self.0.mul(&rhs.0, ctx.prec, ctx.rm))
    }

    pub fn div(&self, rhs: &Real, ctx: &Ctx) -> Real {
        Real(self.0.div(&rhs.0, ctx.prec, ctx.rm))
    }

    pub fn neg(&self) -> Real {
        Real(self.0.neg())
    }

    pub fn abs(&self) -> Real {
        let mut f = self.0.clone();
        f.set_sign(Sign::Pos);
        Real(f)
    }

    pub fn sqrt(&self, ctx: &Ctx) -> Real {
        Real(self.0.sqrt(ctx.prec, ctx.rm))
    }

    pub fn exp(&self, ctx: &Ctx) -> Real {
        Real(self.0.exp(ctx.prec, ctx.rm, &mut ctx.consts.borrow_mut()))
    }

    pub fn ln(&self, ctx: &Ctx) -> Real {
        Real(self.0.ln(ctx.prec, ctx.rm, &mut ctx.consts.borrow_mut()))
    }

    /// Integer power (either sign).
    pub fn powi(&self, e: i64, ctx: &Ctx) -> Real {
        if e >= 0 {
            Real(self.0.powi(e as usize, ctx.prec, ctx.rm))
        } else {
            Real(
                self.0
                    .powi((-e) as usize, ctx.prec, ctx.rm)
                    .reciprocal(ctx.prec, ctx.rm),
            )
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn cmp(&self, rhs: &Real) -> Ordering {
        match self.0.cmp(&rhs.0) {
            Some(c) => {
                if c < 0 {
                    Ordering::Less
                } else if c > 0 {
                    Ordering::Greater
                } else {
                    Ordering::Equal
                }
            }
            None => panic!("NaN in exact pipeline"),
        }
    }

    pub fn max(&self, rhs: &Real) -> Real {
        if self.cmp(rhs) == Ordering::Less {
            rhs.clone()
        } else {
            self.clone()
        }
    }

    /// Lossy conversion for reporting; values outside f64 range saturate.
    pub fn to_f64(&self) -> f64 {
        if self.0.is_zero() {
            return 0.0;
        }
        if self.0.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.0.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        let Some((words, n, sign, e, _)) = self.0.as_raw_parts() else {
            return f64::NAN;
        };
        // value = sign * M / 2^n * 2^e with M the mantissa integer
        let top = *words.last().unwrap();
        let next = if words.len() > 1 {
            words[words.len() - 2]
        } else {
            0
        };
        let m = top as f64 + (next as f64) * pow2i(-64);
        let used = 64.min(n) as i64;
        let _ = used;
        let val = m * pow2i(e as i64 - 64);
        match sign {
            Sign::Neg => -val,
            Sign::Pos => val,
        }
    }
}

/// `2^k` in pure-core f64 arithmetic.
fn pow2i(k: i64) -> f64 {
    if k >= 1024 {
        return f64::INFINITY;
    }
    if k < -1074 {
        return 0.0;
    }
    if k >= -1022 {
        f64::from_bits(((1023 + k) as u64) << 52)
    } else {
        // subnormal range
        f64::from_bits(1u64 << (k + 1074) as u64)
    }
}

/// Complex number over [`Real`].
#[derive(Clone, Debug)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn zero(ctx: &Ctx) -> Complex {
        Complex {
            re: ctx.zero(),
            im: ctx.zero(),
        }
    }

    pub fn from_real(re: Real, ctx: &Ctx) -> Complex {
        Complex { re, im: ctx.zero() }
    }

    pub fn add(&self, rhs: &Complex, ctx: &Ctx) -> Complex {
        Complex {
            re: self.re.add(&rhs.re, ctx),
            im: self.im.add(&rhs.im, ctx),
        }
    }

    pub fn sub(&self, rhs: &Complex, ctx: &Ctx) -> Complex {
        Complex {
            re: self.re.sub(&rhs.re, ctx),
            im: self.im.sub(&rhs.im, ctx),
        }
    }

    pub fn mul(&self, rhs: &Complex, ctx: &Ctx) -> Complex {
        Complex {
            re: self
                .re
                .mul(&rhs.re, ctx)
                .sub(&self.im.mul(&rhs.im, ctx), ctx),
            im: self
                .re
                .mul(&rhs.im, ctx)
                .add(&self.im.mul(&rhs.re, ctx), ctx),
        }
    }

    pub fn div(&self, rhs: &Complex, ctx: &Ctx) -> Complex {
        let d = rhs.abs_sq(ctx);
        let num = self.mul(&rhs.conj(), ctx);
        Complex {
            re: num.re.div(&d, ctx),
            im: num.im.div(&d, ctx),
        }
    }

    pub fn scale(&self, w: &Real, ctx: &Ctx) -> Complex {
        Complex {
            re: self.re.mul(w, ctx),
            im: self.im.mul(w, ctx),
        }
    }

    pub fn neg(&self) -> Complex {
        Complex {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn conj(&self) -> Complex {
        Complex {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn abs_sq(&self, ctx: &Ctx) -> Real {
        self.re
            .mul(&self.re, ctx)
            .add(&self.im.mul(&self.im, ctx), ctx)
    }

    pub fn abs(&self, ctx: &Ctx) -> Real {
        self.abs_sq(ctx).sqrt(ctx)
    }

    pub fn dist(&self, rhs: &Complex, ctx: &Ctx) -> Real {
        self.sub(rhs, ctx).abs(ctx)
    }
}

/// A numeric result together with its precision and a coarse rounding-error
/// bound (all tails are closed-form, so truncation error is zero).
#[derive(Clone, Debug)]
pub struct NumericValue {
    pub value: Complex,
    pub precision_bits: usize,
    /// Upper bound for the accumulated rounding error (heuristic: summed
    /// magnitudes times ulp times operation depth).
    pub error_estimate: f64,
}

impl NumericValue {
    pub fn new(value: Complex, ctx: &Ctx, magnitude_sum: &Real, ops: u64) -> Self {
        let ulp = pow2i(4 - ctx.prec as i64);
        let error_estimate = magnitude_sum.to_f64().abs() * ulp * (ops.max(1) as f64);
        NumericValue {
            value,
            precision_bits: ctx.prec,
            error_estimate,
        }
    }

    pub fn close_abs(&self, rhs: &NumericValue, tol: f64, ctx: &Ctx) -> bool {
        let d = self.value.dist(&rhs.value, ctx);
        d.cmp(&ctx.real_from_f64(tol)) != Ordering::Greater
    }
}
