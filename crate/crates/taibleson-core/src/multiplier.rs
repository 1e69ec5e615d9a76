//! Pointwise application of Fourier multipliers `|f(xi)|^a ||xi||^g`.
//!
//! `(m(D) phi)(x) = int Psi(x.xi) m(xi) (F phi)(xi) dxi` decomposes over the
//! canonical terms of `F phi`. On a term whose ball misses the origin the
//! integral is a finite sum over covering cells (cells where the character
//! is nontrivial integrate to zero exactly); on the ball containing the
//! origin it is finitely many sphere shells plus a geometric tail summed in
//! closed form. The only approximation anywhere is final rounding.

use crate::cyclotomic::CycScalar;
use crate::numeric::{Complex, Ctx, NumericValue, Real};
use crate::point::Point;
use crate::prime::Prime;
use crate::scalar::{rational_p_pow, Valuation};
use crate::schwartz::{FourierDirection, TestFunction};
use crate::zeta::EllipticSymbol;
use crate::{Error, Result};
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// A multiplier symbol `|f(xi)|_p^{f_exponent} ||xi||_p^{norm_exponent}`.
///
/// The pure Taibleson symbol is `f_exponent = 0`; an elliptic operator is
/// `norm_exponent = 0`; the composed form appears in residual checks.
#[derive(Clone)]
pub struct SymbolSpec<'a> {
    elliptic: Option<&'a EllipticSymbol>,
    f_exponent: BigRational,
    norm_exponent: BigRational,
}

impl<'a> SymbolSpec<'a> {
    pub fn norm_power(alpha: BigRational) -> Self {
        SymbolSpec {
            elliptic: None,
            f_exponent: BigRational::zero(),
            norm_exponent: alpha,
        }
    }

    pub fn elliptic(symbol: &'a EllipticSymbol, alpha: BigRational) -> Self {
        SymbolSpec {
            elliptic: Some(symbol),
            f_exponent: alpha,
            norm_exponent: BigRational::zero(),
        }
    }

    pub fn product(symbol: &'a EllipticSymbol, f_exp: BigRational, norm_exp: BigRational) -> Self {
        SymbolSpec {
            elliptic: Some(symbol),
            f_exponent: f_exp,
            norm_exponent: norm_exp,
        }
    }

    /// Homogeneity degree of the symbol: `d * f_exponent + norm_exponent`.
    pub fn degree(&self) -> BigRational {
        let d = self.elliptic.map(|e| e.degree() as i64).unwrap_or(0);
        &self.f_exponent * BigRational::from_integer(d.into()) + &self.norm_exponent
    }

    /// Numeric `m(xi)` at a nonzero rational point, as a positive real.
    pub fn value_at(&self, prime: Prime, xi: &Point, ctx: &Ctx) -> Result<Real> {
        let norm_e = match xi.min_valuation() {
            Valuation::Infinite => {
                return Err(Error::InvalidInput("symbol evaluated at 0".to_string()));
            }
            Valuation::Finite(v) => -v,
        };
        let mut exp = ctx
            .real_from_rational(&self.norm_exponent)
            .mul(&ctx.real_from_i64(norm_e), ctx);
        if let Some(sym) = self.elliptic {
            if !self.f_exponent.is_zero() {
                let vf = sym.valuation_at(xi)?;
                let term = ctx
                    .real_from_rational(&self.f_exponent)
                    .mul(&ctx.real_from_i64(-vf), ctx);
                exp = exp.add(&term, ctx);
            }
        }
        Ok(ctx.p_pow_real(prime, &exp))
    }

    /// Average of the symbol over the central ball `(p^K Z_p)^n`: the
    /// exact weight a band-limited grid spectrum needs at the origin coset.
    /// Errors when the defining integral diverges.
    pub fn average_over_central_ball(
        &self,
        prime: Prime,
        n: usize,
        k: i64,
        ctx: &Ctx,
    ) -> Result<Real> {
        let degree = self.degree();
        let tail_exponent = BigRational::from_integer((n as i64).into()) + &degree;
        if tail_exponent <= BigRational::zero() {
            return Err(Error::Divergent {
                detail: "symbol average over a ball containing 0 diverges".to_string(),
            });
        }
        // int = S q^K/(1-q) with q = p^{-(n+deg)}; divide by vol p^{-Kn}
        let s_full = self.sphere_integral(prime, n, ctx);
        let q = ctx.p_pow_real(prime, &ctx.real_from_rational(&-tail_exponent));
        let integral = s_full.mul(&q.powi(k, ctx).div(&ctx.one().sub(&q, ctx), ctx), ctx);
        Ok(integral.mul(&ctx.p_pow_i64(prime, k * n as i64), ctx))
    }

    /// `int_{||u||=1} |f(u)|^{f_exp} du` (the norm factor is 1 there).
    fn sphere_integral(&self, prime: Prime, n: usize, ctx: &Ctx) -> Real {
        match self.elliptic {
            None => {
                let m = BigRational::from_integer(1.into()) - rational_p_pow(prime, -(n as i64));
                ctx.real_from_rational(&m)
            }
            Some(sym) => {
                let mut acc = ctx.zero();
                for (m, measure) in sym.covering().sphere_sum() {
                    let w = ctx.real_from_rational(&measure);
                    let e = ctx
                        .real_from_rational(&self.f_exponent)
                        .mul(&ctx.real_from_i64(-m), ctx);
                    acc = acc.add(&w.mul(&ctx.p_pow_real(prime, &e), ctx), ctx);
                }
                acc
            }
        }
    }

    /// `int_{||u||=1} |f(u)|^{f_exp} Psi(w.u) du`.
    fn sphere_char_integral(
        &self,
        prime: Prime,
        n: usize,
        w: &Point,
        ctx: &Ctx,
    ) -> Result<Complex> {
        let w_depth = char_depth(w);
        match self.elliptic {
            None => {
                // int_{B_0} - int_{B_1} of the plain character around 0
                let mut acc = Complex::zero(ctx);
                if w_depth <= 0 {
                    acc = acc.add(&Complex::from_real(ctx.one(), ctx), ctx);
                }
                if w_depth <= 1 {
                    let inner = ctx.p_pow_i64(prime, -(n as i64));
                    acc = acc.sub(&Complex::from_real(inner, ctx), ctx);
                }
                Ok(acc)
            }
            Some(sym) => {
                let mut acc = Complex::zero(ctx);
                for leaf in sym.covering().leaves() {
                    if w_depth > leaf.depth as i64 {
                        continue; // character kills the cell exactly
                    }
                    let phase = leaf_phase(prime, &leaf.rep, w, ctx)?;
                    let e =
                        &self.f_exponent * BigRational::from_integer((-(leaf.val as i64)).into());
                    let weight = ctx
                        .p_pow_real(prime, &ctx.real_from_rational(&e))
                        .mul(&ctx.p_pow_i64(prime, -(leaf.depth as i64) * n as i64), ctx);
                    acc = acc.add(&phase.scale(&weight, ctx), ctx);
                }
                Ok(acc)
            }
        }
    }

    /// Finite cell sum for a spectral ball not containing the origin.
    fn cell_integral(
        &self,
        prime: Prime,
        ball: &crate::ball::Ball,
        w: &Point,
        ctx: &Ctx,
    ) -> Result<Complex> {
        let n = ball.dim();
        let e = match ball.center().min_valuation() {
            Valuation::Finite(v) => -v,
            Valuation::Infinite => unreachable!("ball misses the origin"),
        };
        // the norm is constant p^e on the ball; pull out ||xi||^g
        let g_factor = {
            let exp = &self.norm_exponent * BigRational::from_integer(e.into());
            ctx.p_pow_real(prime, &ctx.real_from_rational(&exp))
        };
        match self.elliptic {
            None => {
                let k = ball.scale();
                // the character integrates to zero unless w lies in the
                // dual lattice (p^{-k} Z_p)^n
                let nontrivial = match w.min_valuation() {
                    Valuation::Infinite => false,
                    Valuation::Finite(v) => -v > k,
                };
                if nontrivial {
                    return Ok(Complex::zero(ctx));
                }
                let phase = psi_phase(&w.dot(ball.center())?, ctx);
                let measure = ctx.p_pow_i64(prime, -k * n as i64);
                Ok(phase.scale(&measure.mul(&g_factor, ctx), ctx))
            }
            Some(sym) => {
                // rescale onto the sphere: xi = p^{-e} eta
                let scale = rational_p_pow(prime, e);
                let rep: Vec<BigInt> = ball
                    .center()
                    .coords()
                    .iter()
                    .map(|c| {
                        let s = c * &scale;
                        debug_assert!(s.is_integer());
                        s.to_integer()
                    })
                    .collect();
                let w_scaled = Point::new(
                    prime,
                    w.coords().iter().map(|c| c * scale.recip()).collect(),
                );
                let depth0 = (ball.scale() + e) as u32;
                let w_depth = char_depth(&w_scaled);
                let mut acc = Complex::zero(ctx);
                let mut err: Option<Error> = None;
                crate::covering::for_each_leaf_in_cell(
                    sym.poly(),
                    prime,
                    rep,
                    depth0,
                    &mut |leaf_rep, depth, val| {
                        if err.is_some() || w_depth > depth as i64 {
                            return;
                        }
                        match leaf_phase(prime, leaf_rep, &w_scaled, ctx) {
                            Ok(phase) => {
                                let fe = &self.f_exponent
                                    * BigRational::from_integer((-(val as i64)).into());
                                let weight = ctx
                                    .p_pow_real(prime, &ctx.real_from_rational(&fe))
                                    .mul(&ctx.p_pow_i64(prime, -(depth as i64) * n as i64), ctx);
                                acc = acc.add(&phase.scale(&weight, ctx), ctx);
                            }
                            Err(e) => err = Some(e),
                        }
                    },
                );
                if let Some(e) = err {
                    return Err(e);
                }
                // p^{en} measure, p^{ead} homogeneity of |f|^a, p^{eg} norm
                let ad = &self.f_exponent * BigRational::from_integer((sym.degree() as i64).into());
                let homo = ctx.p_pow_real(
                    prime,
                    &ctx.real_from_rational(&(ad * BigRational::from_integer(e.into()))),
                );
                let measure = ctx.p_pow_i64(prime, e * n as i64);
                Ok(acc.scale(&measure.mul(&homo, ctx).mul(&g_factor, ctx), ctx))
            }
        }
    }
}

fn char_depth(w: &Point) -> i64 {
    match w.min_valuation() {
        Valuation::Infinite => 0,
        Valuation::Finite(v) => (-v).max(0),
    }
}

fn psi_phase(x: &crate::scalar::PadicScalar, ctx: &Ctx) -> Complex {
    ctx.render_cyc(&CycScalar::psi(x))
}

fn leaf_phase(prime: Prime, rep: &[BigInt], w: &Point, ctx: &Ctx) -> Result<Complex> {
    let z = Point::new(
        prime,
        rep.iter()
            .map(|r| BigRational::from_integer(r.clone()))
            .collect(),
    );
    Ok(psi_phase(&z.dot(w)?, ctx))
}

/// Apply the multiplier to a test function at a rational point:
/// `(m(D) phi)(x)`, exact modulo rounding.
///
/// For symbols of homogeneity degree `<= -n` the spectrum of `phi` must
/// vanish near the origin; otherwise the defining integral diverges and an
/// explicit error is returned.
pub fn multiplier_apply(
    symbol: &SymbolSpec<'_>,
    phi: &TestFunction,
    x: &Point,
    ctx: &Ctx,
) -> Result<NumericValue> {
    let prime = phi.prime();
    prime.same(x.prime())?;
    let n = phi.dim();
    if let Some(sym) = symbol.elliptic {
        prime.same(sym.prime())?;
        if sym.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: sym.dim(),
            });
        }
    }
    let spectrum = phi.fourier(FourierDirection::Forward)?.canonical()?;
    apply_to_spectrum(symbol, &spectrum, x, ctx)
}

/// Same as [`multiplier_apply`] but starting from an already-computed
/// spectrum (the transform of the argument).
pub fn apply_to_spectrum(
    symbol: &SymbolSpec<'_>,
    spectrum: &TestFunction,
    x: &Point,
    ctx: &Ctx,
) -> Result<NumericValue> {
    let prime = spectrum.prime();
    let n = spectrum.dim();
    let mut acc = Complex::zero(ctx);
    let mut magnitude = ctx.zero();
    let mut ops: u64 = 0;

    let degree = symbol.degree();
    let tail_exponent = BigRational::from_integer((n as i64).into()) + &degree;

    for term in spectrum.terms() {
        let w = x.add(term.twist())?;
        let coeff = ctx.render_cyc(term.coeff());
        let ball = term.ball();
        let contribution = if !ball.contains_origin() {
            symbol.cell_integral(prime, ball, &w, ctx)?
        } else {
            if tail_exponent <= BigRational::zero() {
                return Err(Error::Divergent {
                    detail: format!(
                        "symbol degree {} against a spectrum not vanishing at 0 \
                         (need degree > -n)",
                        degree
                    ),
                });
            }
            let k = ball.scale();
            let c0 = char_depth(&w);
            let j_star = k.max(c0);
            let mut sum = Complex::zero(ctx);
            for j in k..j_star {
                let wj = Point::new(
                    prime,
                    w.coords()
                        .iter()
                        .map(|c| c * rational_p_pow(prime, j))
                        .collect(),
                );
                let sh = symbol.sphere_char_integral(prime, n, &wj, ctx)?;
                // p^{-jn} measure and p^{-j deg} homogeneity on shell j
                let e = -BigRational::from_integer(j.into())
                    * (&degree + BigRational::from_integer((n as i64).into()));
                let weight = ctx.p_pow_real(prime, &ctx.real_from_rational(&e));
                sum = sum.add(&sh.scale(&weight, ctx), ctx);
                ops += 1;
            }
            // closed-form geometric tail over the trivial-character shells
            let s_full = symbol.sphere_integral(prime, n, ctx);
            let q = ctx.p_pow_real(prime, &ctx.real_from_rational(&-tail_exponent.clone()));
            let tail_factor = q.powi(j_star, ctx).div(&ctx.one().sub(&q, ctx), ctx);
            sum.add(&Complex::from_real(s_full.mul(&tail_factor, ctx), ctx), ctx)
        };
        let piece = coeff.mul(&contribution, ctx);
        magnitude = magnitude.add(&piece.abs(ctx), ctx);
        acc = acc.add(&piece, ctx);
        ops += 20;
    }
    Ok(NumericValue::new(acc, ctx, &magnitude, ops))
}

/// The hypersingular route for the Taibleson operator:
/// `(D_T^alpha phi)(x) = (1-p^alpha)/(1-p^{-alpha-n})
///     int ||y||^{-alpha-n} (phi(x-y) - phi(x)) dy`,
/// computed by exact shell integrals of `phi` plus a closed-form tail.
/// Fully independent of the spectral route.
pub fn taibleson_direct(
    alpha: &BigRational,
    phi: &TestFunction,
    x: &Point,
    ctx: &Ctx,
) -> Result<NumericValue> {
    if !alpha.is_positive() {
        return Err(Error::AlphaOutOfRange {
            detail: "alpha must be positive".to_string(),
        });
    }
    let prime = phi.prime();
    prime.same(x.prime())?;
    let n = phi.dim() as i64;
    if phi.is_zero_fn()? {
        return Ok(NumericValue::new(Complex::zero(ctx), ctx, &ctx.zero(), 1));
    }

    let alpha_r = ctx.real_from_rational(alpha);
    let p_alpha = ctx.p_pow_real(prime, &alpha_r);
    let p_neg = ctx.p_pow_real(prime, &alpha_r.neg().sub(&ctx.real_from_i64(n), ctx));
    let front = ctx
        .one()
        .sub(&p_alpha, ctx)
        .div(&ctx.one().sub(&p_neg, ctx), ctx);

    let (l, _) = phi.local_constancy_data()?;
    let e_x = match x.min_valuation() {
        Valuation::Infinite => i64::MIN,
        Valuation::Finite(v) => -v,
    };
    let support = phi.support_exponent().unwrap_or(i64::MIN);
    let j_max = support.max(e_x).max(-l + 1);

    let phi_x = ctx.render_cyc(&phi.evaluate(x)?);
    let one_minus_pn = ctx.one().sub(&ctx.p_pow_i64(prime, -n), ctx);

    let mut sum = Complex::zero(ctx);
    let mut magnitude = ctx.zero();
    let mut ops: u64 = 0;
    for j in (-l + 1)..=j_max {
        // int_{||y||=p^j} phi(x-y) dy = int_{x + shell_j} phi
        let inner = phi
            .restrict(&crate::ball::Ball::new(x.clone(), -j))?
            .integrate();
        let outer = phi
            .restrict(&crate::ball::Ball::new(x.clone(), -j + 1))?
            .integrate();
        let shell_phi = ctx.render_cyc(&inner.sub(&outer));
        let shell_measure = ctx.p_pow_i64(prime, j * n).mul(&one_minus_pn, ctx);
        let integrand = shell_phi.sub(&phi_x.scale(&shell_measure, ctx), ctx);
        // weight ||y||^{-alpha-n} = p^{-j(alpha+n)}
        let we = ctx
            .real_from_i64(-j)
            .mul(&alpha_r.add(&ctx.real_from_i64(n), ctx), ctx);
        let weight = ctx.p_pow_real(prime, &we);
        let piece = integrand.scale(&weight, ctx);
        magnitude = magnitude.add(&piece.abs(ctx), ctx);
        sum = sum.add(&piece, ctx);
        ops += 8;
    }
    // tail j > j_max: phi(x-y) = 0 there, so the integrand is -phi(x) and
    // the shells sum to a geometric series
    let q = ctx.p_pow_real(prime, &alpha_r.neg());
    let tail_scalar = one_minus_pn
        .mul(&q.powi(j_max + 1, ctx), ctx)
        .div(&ctx.one().sub(&q, ctx), ctx);
    sum = sum.sub(&phi_x.scale(&tail_scalar, ctx), ctx);

    let value = sum.scale(&front, ctx);
    magnitude = magnitude.add(&phi_x.abs(ctx), ctx);
    Ok(NumericValue::new(value, ctx, &magnitude, ops + 8))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::TreeBudget;
    use crate::cyclotomic::CycScalar;
    use crate::poly::IntPolynomial;
    use crate::prime::Prime;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn norm_multiplier_on_chi0_at_origin() {
        // int_{Z_p^n} ||xi||^alpha dxi = (1-p^{-n})/(1-p^{-alpha-n})
        let ctx = Ctx::new(128);
        for (pr, n) in [(2u64, 1usize), (3, 2), (7, 1)] {
            let phi = TestFunction::chi(p(pr), n, 0);
            let x = Point::zero(p(pr), n);
            let alpha = rat(3, 2);
            let sym = SymbolSpec::norm_power(alpha.clone());
            let got = multiplier_apply(&sym, &phi, &x, &ctx).unwrap();
            let a = ctx.real_from_rational(&alpha);
            let denom = ctx.one().sub(
                &ctx.p_pow_real(p(pr), &a.neg().sub(&ctx.real_from_i64(n as i64), &ctx)),
                &ctx,
            );
            let expect = ctx
                .one()
                .sub(&ctx.p_pow_i64(p(pr), -(n as i64)), &ctx)
                .div(&denom, &ctx);
            assert!(
                got.value
                    .sub(&Complex::from_real(expect, &ctx), &ctx)
                    .abs(&ctx)
                    .to_f64()
                    < 1e-30,
                "p={pr} n={n}"
            );
        }
    }

    #[test]
    fn taibleson_routes_agree_on_twisted_function() {
        let ctx = Ctx::new(128);
        let pr = p(3);
        let phi = TestFunction::term(
            CycScalar::from_ratio(pr, 2, 5),
            Point::from_ratios(pr, &[(1, 3)]),
            Point::from_integers(pr, &[1]),
            1,
        )
        .unwrap()
        .add(&TestFunction::chi(pr, 1, -1))
        .unwrap();
        for (xa, xb) in [(0, 1), (1, 3), (2, 1), (5, 9)] {
            let x = Point::from_ratios(pr, &[(xa, xb)]);
            for alpha in [rat(1, 2), rat(1, 1), rat(23, 10)] {
                let direct = taibleson_direct(&alpha, &phi, &x, &ctx).unwrap();
                let spectral =
                    multiplier_apply(&SymbolSpec::norm_power(alpha.clone()), &phi, &x, &ctx)
                        .unwrap();
                assert!(
                    direct.close_abs(&spectral, 1e-30, &ctx),
                    "x=({xa}/{xb}) alpha={alpha}"
                );
            }
        }
    }

    #[test]
    fn taibleson_annihilates_wide_indicators_in_the_limit() {
        // D_T^alpha(chi_{-R})(x) = (1-p^{-n}) p^{-R alpha}/(1-p^{-n-alpha})
        // for ||x|| <= 1; decays to 0 as R grows
        let ctx = Ctx::new(128);
        let pr = p(2);
        let alpha = rat(1, 1);
        let x = Point::from_integers(pr, &[1]);
        let mut last = f64::INFINITY;
        for big_r in [3i64, 4, 5] {
            let phi = TestFunction::chi(pr, 1, -big_r);
            let v = taibleson_direct(&alpha, &phi, &x, &ctx).unwrap();
            let a = ctx.real_from_rational(&alpha);
            let bound_e = ctx.real_from_i64(-big_r).mul(&a, &ctx);
            let bound = ctx
                .one()
                .sub(&ctx.p_pow_i64(pr, -1), &ctx)
                .mul(&ctx.p_pow_real(pr, &bound_e), &ctx)
                .div(
                    &ctx.one()
                        .sub(&ctx.p_pow_real(pr, &a.neg().sub(&ctx.one(), &ctx)), &ctx),
                    &ctx,
                );
            let mag = v.value.abs(&ctx).to_f64();
            assert!(
                (mag - bound.to_f64()).abs() < 1e-25,
                "R={big_r}: {mag} vs {}",
                bound.to_f64()
            );
            assert!(mag < last);
            last = mag;
        }
    }

    #[test]
    fn elliptic_multiplier_coincides_with_norm_power_in_dim_one() {
        // |xi|^alpha = ||xi||^alpha when f = xi in one variable
        let ctx = Ctx::new(128);
        let pr = p(5);
        let f = IntPolynomial::coordinate(1, 0);
        let symbol = EllipticSymbol::new(f, pr, TreeBudget::default()).unwrap();
        let phi = TestFunction::term(
            CycScalar::one(pr),
            Point::from_ratios(pr, &[(1, 5)]),
            Point::from_integers(pr, &[2]),
            1,
        )
        .unwrap()
        .add(&TestFunction::chi(pr, 1, 0))
        .unwrap();
        for alpha in [rat(1, 2), rat(7, 5)] {
            for (xa, xb) in [(0, 1), (1, 1), (1, 5), (7, 25)] {
                let x = Point::from_ratios(pr, &[(xa, xb)]);
                let e = multiplier_apply(
                    &SymbolSpec::elliptic(&symbol, alpha.clone()),
                    &phi,
                    &x,
                    &ctx,
                )
                .unwrap();
                let t = multiplier_apply(&SymbolSpec::norm_power(alpha.clone()), &phi, &x, &ctx)
                    .unwrap();
                assert!(e.close_abs(&t, 1e-30, &ctx), "alpha={alpha} x={xa}/{xb}");
            }
        }
    }

    #[test]
    fn negative_sign_divergence_is_reported() {
        let ctx = Ctx::new(128);
        let pr = p(3);
        let phi = TestFunction::chi(pr, 1, 0); // spectrum contains 0
        let sym = SymbolSpec::norm_power(rat(-2, 1)); // degree -2 <= -n
        let err = multiplier_apply(&sym, &phi, &Point::zero(pr, 1), &ctx);
        assert!(matches!(err, Err(Error::Divergent { .. })));
        // but converges on a zero-integral function (no 0-term spectrum)
        let mean_zero = TestFunction::chi(pr, 1, 1)
            .sub(&TestFunction::chi(pr, 1, 0).scale_rational(&rat(1, 3)))
            .unwrap();
        assert!(multiplier_apply(&sym, &mean_zero, &Point::zero(pr, 1), &ctx).is_ok());
    }
}
