//! Fundamental-solution kernels and their convolution against test
//! functions in direct space.
//!
//! Kernels are radial: `E(x) = coeff * ||x||^e` or `coeff * ln ||x||`, plus
//! an optional additive constant (immaterial for the solution property but
//! fixed for determinism). Convolutions reduce to character integrals over
//! balls where `||.||` is constant plus geometric / arithmetico-geometric
//! shell tails around the origin, all in closed form.

use crate::ball::Ball;
use crate::cyclotomic::CycScalar;
use crate::numeric::{Complex, Ctx, NumericValue, Real};
use crate::point::Point;
use crate::prime::Prime;
use crate::scalar::Valuation;
use crate::schwartz::TestFunction;
use crate::zeta::EllipticSymbol;
use crate::{Error, Result};
use alloc::string::ToString;
use num_rational::BigRational;
use num_traits::Signed;

/// Radial profile of a kernel.
#[derive(Clone, Debug)]
pub enum KernelBase {
    /// `||x||^exponent`.
    Power { exponent: BigRational },
    /// `ln ||x||`.
    Log,
}

/// A radial kernel `coeff * base(||x||) + constant`.
///
/// `w_only` marks kernels whose defining identity holds as a distribution
/// on the radial subspace `W` only (the elliptic case).
#[derive(Clone, Debug)]
pub struct Kernel {
    prime: Prime,
    dim: usize,
    base: KernelBase,
    coeff: Real,
    constant: Real,
    w_only: bool,
    alpha: BigRational,
}

impl Kernel {
    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn base(&self) -> &KernelBase {
        &self.base
    }

    pub fn coeff(&self) -> &Real {
        &self.coeff
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    pub fn is_w_only(&self) -> bool {
        self.w_only
    }

    pub fn with_constant(mut self, c: Real) -> Kernel {
        self.constant = c;
        self
    }

    /// `E(x)` for `||x|| = p^m` (kernel value on a whole shell).
    pub fn value_at_shell(&self, m: i64, ctx: &Ctx) -> Real {
        let base = match &self.base {
            KernelBase::Power { exponent } => {
                let e = exponent * BigRational::from_integer(m.into());
                ctx.p_pow_real(self.prime, &ctx.real_from_rational(&e))
            }
            KernelBase::Log => ctx.real_from_i64(m).mul(&ctx.ln_u64(self.prime.get()), ctx),
        };
        self.coeff.mul(&base, ctx).add(&self.constant, ctx)
    }

    /// Kernel value at a nonzero rational point.
    pub fn value_at(&self, x: &Point, ctx: &Ctx) -> Result<Real> {
        self.prime.same(x.prime())?;
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.dim(),
            });
        }
        match x.min_valuation() {
            Valuation::Infinite => Err(Error::InvalidInput(
                "kernel value requested at the origin".to_string(),
            )),
            Valuation::Finite(v) => Ok(self.value_at_shell(-v, ctx)),
        }
    }
}

/// The Taibleson fundamental solution:
/// `(1-p^{-alpha})/(1-p^{alpha-n}) ||x||^{alpha-n}` for `alpha != n`, and
/// `(1-p^n)/(p^n ln p) ln ||x||` at `alpha = n`.
pub fn taibleson_fundamental_solution(
    prime: Prime,
    dim: usize,
    alpha: &BigRational,
    ctx: &Ctx,
) -> Result<Kernel> {
    if !alpha.is_positive() {
        return Err(Error::AlphaOutOfRange {
            detail: "alpha must be positive".to_string(),
        });
    }
    let n = dim as i64;
    if *alpha == BigRational::from_integer(n.into()) {
        // log kernel: (1 - p^n)/(p^n ln p)
        let pn = ctx.p_pow_i64(prime, n);
        let coeff = ctx
            .one()
            .sub(&pn, ctx)
            .div(&pn.mul(&ctx.ln_u64(prime.get()), ctx), ctx);
        return Ok(Kernel {
            prime,
            dim,
            base: KernelBase::Log,
            coeff,
            constant: ctx.zero(),
            w_only: false,
            alpha: alpha.clone(),
        });
    }
    let a = ctx.real_from_rational(alpha);
    let num = ctx.one().sub(&ctx.p_pow_real(prime, &a.neg()), ctx);
    let den = ctx.one().sub(
        &ctx.p_pow_real(prime, &a.sub(&ctx.real_from_i64(n), ctx)),
        ctx,
    );
    Ok(Kernel {
        prime,
        dim,
        base: KernelBase::Power {
            exponent: alpha - BigRational::from_integer(n.into()),
        },
        coeff: num.div(&den, ctx),
        constant: ctx.zero(),
        w_only: false,
        alpha: alpha.clone(),
    })
}

/// The elliptic fundamental solution (a distribution on `W`):
/// `L(p^alpha)(1-p^{-d alpha}) / ((1-p^{-n})(1-p^{d alpha - n}))
///  ||x||^{d alpha - n}` for `alpha != n/d`, log form at `alpha = n/d`,
/// where `L` is the numerator of the Igusa zeta function.
pub fn elliptic_fundamental_solution(
    symbol: &EllipticSymbol,
    alpha: &BigRational,
    ctx: &Ctx,
) -> Result<Kernel> {
    if !alpha.is_positive() {
        return Err(Error::AlphaOutOfRange {
            detail: "alpha must be positive".to_string(),
        });
    }
    let prime = symbol.prime();
    let n = symbol.dim() as i64;
    let d = symbol.degree() as i64;
    // L(p^alpha): the sphere numerator evaluated at t = p^alpha
    let t = ctx.p_pow_real(prime, &ctx.real_from_rational(alpha));
    let l_val = ctx
        .eval_laurent_poly(symbol.zeta().sphere_numerator(), &t)
        .re;
    let one_minus_pn = ctx.one().sub(&ctx.p_pow_i64(prime, -n), ctx);

    let log_case =
        alpha * BigRational::from_integer(d.into()) == BigRational::from_integer(n.into());
    if log_case {
        let pn = ctx.p_pow_i64(prime, n);
        let coeff = l_val.mul(&ctx.one().sub(&pn, ctx), ctx).div(
            &one_minus_pn.mul(&pn.mul(&ctx.ln_u64(prime.get()), ctx), ctx),
            ctx,
        );
        return Ok(Kernel {
            prime,
            dim: symbol.dim(),
            base: KernelBase::Log,
            coeff,
            constant: ctx.zero(),
            w_only: true,
            alpha: alpha.clone(),
        });
    }
    let da = alpha * BigRational::from_integer(d.into());
    let da_r = ctx.real_from_rational(&da);
    let num = l_val.mul(
        &ctx.one().sub(&ctx.p_pow_real(prime, &da_r.neg()), ctx),
        ctx,
    );
    let den = one_minus_pn.mul(
        &ctx.one().sub(
            &ctx.p_pow_real(prime, &da_r.sub(&ctx.real_from_i64(n), ctx)),
            ctx,
        ),
        ctx,
    );
    Ok(Kernel {
        prime,
        dim: symbol.dim(),
        base: KernelBase::Power {
            exponent: da - BigRational::from_integer(n.into()),
        },
        coeff: num.div(&den, ctx),
        constant: ctx.zero(),
        w_only: true,
        alpha: alpha.clone(),
    })
}

/// `sum_{j >= j0} q^j` for `0 < q < 1`.
fn geo(q: &Real, j0: i64, ctx: &Ctx) -> Real {
    q.powi(j0, ctx).div(&ctx.one().sub(q, ctx), ctx)
}

/// `sum_{j >= j0} j q^j` for `0 < q < 1`.
fn ageo(q: &Real, j0: i64, ctx: &Ctx) -> Real {
    let one_minus = ctx.one().sub(q, ctx);
    let num = ctx
        .real_from_i64(j0)
        .mul(&one_minus, ctx)
        .add(q, ctx)
        .mul(&q.powi(j0, ctx), ctx);
    num.div(&one_minus.mul(&one_minus, ctx), ctx)
}

/// `(E * v)(x) = int E(u) v(x - u) du`, exact modulo rounding.
pub fn convolve_kernel(
    kernel: &Kernel,
    v: &TestFunction,
    x: &Point,
    ctx: &Ctx,
) -> Result<NumericValue> {
    let prime = v.prime();
    prime.same(kernel.prime)?;
    prime.same(x.prime())?;
    let n = v.dim() as i64;
    if v.dim() != kernel.dim {
        return Err(Error::DimensionMismatch {
            expected: kernel.dim,
            got: v.dim(),
        });
    }
    // local integrability near the origin: e > -n (power case). With
    // e = alpha - n or d alpha - n and alpha > 0 this always holds.
    if let KernelBase::Power { exponent } = &kernel.base {
        if *exponent <= BigRational::from_integer((-n).into()) {
            return Err(Error::Divergent {
                detail: "kernel exponent <= -n is not locally integrable".to_string(),
            });
        }
    }

    let mut acc = Complex::zero(ctx);
    let mut magnitude = ctx.zero();
    let mut ops: u64 = 0;
    let one_minus_pn = ctx.one().sub(&ctx.p_pow_i64(prime, -n), ctx);

    for term in v.terms() {
        // contribution c Psi(b.x) * int_{(x-a)+(p^r)^n} E(u) Psi(-b.u) du
        let b = term.twist();
        let r = term.ball().scale();
        let shifted_center = x.sub(term.ball().center())?;
        let region = Ball::new(shifted_center, r);
        let w = b.neg();
        // smallest j with w in the dual lattice (p^{-j} Z_p)^n; None when
        // the character is trivial everywhere (w = 0)
        let w_threshold = match w.min_valuation() {
            Valuation::Infinite => None,
            Valuation::Finite(vv) => Some(-vv),
        };

        let j_integral: Complex = if !region.contains_origin() {
            // ||u|| constant on the region
            let e = match region.center().min_valuation() {
                Valuation::Finite(vv) => -vv,
                Valuation::Infinite => unreachable!(),
            };
            if w_threshold.map(|c| c > r).unwrap_or(false) {
                Complex::zero(ctx)
            } else {
                let val = kernel.value_at_shell(e, ctx);
                let phase = ctx.render_cyc(&CycScalar::psi(&w.dot(region.center())?));
                let measure = ctx.p_pow_i64(prime, -r * n);
                phase.scale(&val.mul(&measure, ctx), ctx)
            }
        } else {
            // shells ||u|| = p^{-j}, j >= r; the character integral over
            // B_j is p^{-jn} for j >= c and 0 below, so shell j picks up
            // a full term for j >= c and one boundary term at j = c - 1
            let mut sum = ctx.zero();
            if let Some(c0) = w_threshold {
                if c0 - 1 >= r {
                    let val = kernel.value_at_shell(-(c0 - 1), ctx);
                    sum = sum.sub(&val.mul(&ctx.p_pow_i64(prime, -c0 * n), ctx), ctx);
                }
            }
            let j0 = match w_threshold {
                Some(c0) => r.max(c0),
                None => r,
            };
            let tail = match &kernel.base {
                KernelBase::Power { exponent } => {
                    // coeff * sum p^{-j(n+e)} + constant * sum p^{-jn}
                    let qe = exponent.clone() + BigRational::from_integer(n.into());
                    let q = ctx.p_pow_real(prime, &ctx.real_from_rational(&-qe));
                    let main = kernel.coeff.mul(&geo(&q, j0, ctx), ctx);
                    let qc = ctx.p_pow_i64(prime, -n);
                    let cst = kernel.constant.mul(&geo(&qc, j0, ctx), ctx);
                    main.add(&cst, ctx)
                }
                KernelBase::Log => {
                    // E(p^{-j}) = -j coeff ln p + constant
                    let q = ctx.p_pow_i64(prime, -n);
                    let lnp = ctx.ln_u64(prime.get());
                    let main = kernel
                        .coeff
                        .mul(&lnp, ctx)
                        .neg()
                        .mul(&ageo(&q, j0, ctx), ctx);
                    let cst = kernel.constant.mul(&geo(&q, j0, ctx), ctx);
                    main.add(&cst, ctx)
                }
            };
            sum = sum.add(&one_minus_pn.mul(&tail, ctx), ctx);
            Complex::from_real(sum, ctx)
        };

        let phase_x = ctx.render_cyc(&CycScalar::psi(&b.dot(x)?));
        let coeff = ctx.render_cyc(term.coeff()).mul(&phase_x, ctx);
        let piece = coeff.mul(&j_integral, ctx);
        magnitude = magnitude.add(&piece.abs(ctx), ctx);
        acc = acc.add(&piece, ctx);
        ops += 16;
    }
    Ok(NumericValue::new(acc, ctx, &magnitude, ops))
}

/// Apply `D_T^alpha` to the convolution `g = E * v` through the
/// hypersingular representation, using only direct-space quantities:
/// shell integrals of `g` are convolutions `E * (v * chi)` and the far
/// tail is exact because `||x - y - z|| = ||y||` once `||y||` dominates.
///
/// This is the end-to-end residual route for the Taibleson fundamental
/// solution: the result should reproduce `v(x)`.
pub fn taibleson_apply_to_convolution(
    alpha: &BigRational,
    kernel: &Kernel,
    v: &TestFunction,
    x: &Point,
    ctx: &Ctx,
) -> Result<NumericValue> {
    let prime = v.prime();
    let n = v.dim() as i64;
    if v.is_zero_fn()? {
        return Ok(NumericValue::new(Complex::zero(ctx), ctx, &ctx.zero(), 1));
    }
    let alpha_r = ctx.real_from_rational(alpha);
    let front = {
        let num = ctx.one().sub(&ctx.p_pow_real(prime, &alpha_r), ctx);
        let den = ctx.one().sub(
            &ctx.p_pow_real(prime, &alpha_r.neg().sub(&ctx.real_from_i64(n), ctx)),
            ctx,
        );
        num.div(&den, ctx)
    };

    let g_x = convolve_kernel(kernel, v, x, ctx)?.value;
    let (l, _) = v.local_constancy_data()?;
    let e_x = match x.min_valuation() {
        Valuation::Infinite => i64::MIN,
        Valuation::Finite(vv) => -vv,
    };
    let j_max = v
        .support_exponent()
        .unwrap_or(i64::MIN)
        .max(e_x)
        .max(-l + 1);
    let one_minus_pn = ctx.one().sub(&ctx.p_pow_i64(prime, -n), ctx);

    let mut sum = Complex::zero(ctx);
    let mut magnitude = ctx.zero();
    let mut ops: u64 = 0;
    for j in (-l + 1)..=j_max {
        // int_{x+shell_j} g = (E * (v * chi_{-j}))(x) - (E * (v * chi_{-j+1}))(x)
        let inner = convolve_kernel(
            kernel,
            &v.convolve(&TestFunction::chi(prime, v.dim(), -j))?,
            x,
            ctx,
        )?;
        let outer = convolve_kernel(
            kernel,
            &v.convolve(&TestFunction::chi(prime, v.dim(), -j + 1))?,
            x,
            ctx,
        )?;
        let shell_g = inner.value.sub(&outer.value, ctx);
        let mu = ctx.p_pow_i64(prime, j * n).mul(&one_minus_pn, ctx);
        let integrand = shell_g.sub(&g_x.scale(&mu, ctx), ctx);
        let weight = ctx.p_pow_real(
            prime,
            &ctx.real_from_i64(-j)
                .mul(&alpha_r.add(&ctx.real_from_i64(n), ctx), ctx),
        );
        let piece = integrand.scale(&weight, ctx);
        magnitude = magnitude.add(&piece.abs(ctx), ctx);
        sum = sum.add(&piece, ctx);
        ops += 40;
    }

    // tail j > j_max: g(x - y) = E(||y||) * (int v) exactly on each shell
    let v_total = ctx.render_cyc(&v.integrate());
    let tail = {
        // sum_{j>J} p^{-j alpha} (1-p^{-n}) [E(p^j) V - g(x)]
        let j0 = j_max + 1;
        let q_alpha = ctx.p_pow_real(prime, &alpha_r.neg());
        match &kernel.base {
            KernelBase::Power { exponent } => {
                // E(p^j) = coeff p^{j e} + constant
                let qe = ctx.p_pow_real(prime, &ctx.real_from_rational(&(exponent - alpha)));
                let main = v_total.scale(&kernel.coeff.mul(&geo(&qe, j0, ctx), ctx), ctx);
                let rest = v_total
                    .scale(&kernel.constant, ctx)
                    .sub(&g_x, ctx)
                    .scale(&geo(&q_alpha, j0, ctx), ctx);
                main.add(&rest, ctx)
            }
            KernelBase::Log => {
                let lnp = ctx.ln_u64(prime.get());
                let main = v_total.scale(
                    &kernel
                        .coeff
                        .mul(&lnp, ctx)
                        .mul(&ageo(&q_alpha, j0, ctx), ctx),
                    ctx,
                );
                let rest = v_total
                    .scale(&kernel.constant, ctx)
                    .sub(&g_x, ctx)
                    .scale(&geo(&q_alpha, j0, ctx), ctx);
                main.add(&rest, ctx)
            }
        }
    };
    sum = sum.add(&tail.scale(&one_minus_pn, ctx), ctx);

    let value = sum.scale(&front, ctx);
    Ok(NumericValue::new(value, ctx, &magnitude, ops))
}

/// `<E * v, chi_rho> = (E * v * chi_rho)(0)`, the pairing used to verify
/// elliptic kernels in full generality (all alpha > 0).
pub fn kernel_pairing_with_chi(
    kernel: &Kernel,
    v: &TestFunction,
    rho: i64,
    ctx: &Ctx,
) -> Result<NumericValue> {
    let theta = v.convolve(&TestFunction::chi(v.prime(), v.dim(), rho))?;
    convolve_kernel(kernel, &theta, &Point::zero(v.prime(), v.dim()), ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::TreeBudget;
    use crate::multiplier::{multiplier_apply, SymbolSpec};
    use crate::poly::IntPolynomial;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn taibleson_kernel_coefficients() {
        let ctx = Ctx::new(128);
        // alpha=1, n=2: coefficient (1-p^{-1})/(1-p^{-1}) = 1
        let k = taibleson_fundamental_solution(p(3), 2, &rat(1, 1), &ctx).unwrap();
        match k.base() {
            KernelBase::Power { exponent } => assert_eq!(*exponent, rat(-1, 1)),
            _ => panic!("expected power kernel"),
        }
        assert!((k.coeff().to_f64() - 1.0).abs() < 1e-30);
        // alpha = n: log kernel with c = (1-p^n)/(p^n ln p)
        let klog = taibleson_fundamental_solution(p(2), 1, &rat(1, 1), &ctx).unwrap();
        match klog.base() {
            KernelBase::Log => {}
            _ => panic!("expected log kernel at alpha = n"),
        }
        let expect = (1.0 - 2.0) / (2.0 * (2.0f64).ln());
        assert!((klog.coeff().to_f64() - expect).abs() < 1e-15);
    }

    #[test]
    fn elliptic_kernel_reduces_to_taibleson_for_linear_symbol() {
        let ctx = Ctx::new(128);
        let pr = p(5);
        let f = IntPolynomial::coordinate(1, 0);
        let symbol = EllipticSymbol::new(f, pr, TreeBudget::default()).unwrap();
        for alpha in [rat(1, 2), rat(23, 10)] {
            let e = elliptic_fundamental_solution(&symbol, &alpha, &ctx).unwrap();
            let t = taibleson_fundamental_solution(pr, 1, &alpha, &ctx).unwrap();
            assert!(e.coeff().sub(t.coeff(), &ctx).abs().to_f64() < 1e-35);
        }
        // log case alpha = n/d = 1
        let e = elliptic_fundamental_solution(&symbol, &rat(1, 1), &ctx).unwrap();
        let t = taibleson_fundamental_solution(pr, 1, &rat(1, 1), &ctx).unwrap();
        assert!(matches!(e.base(), KernelBase::Log));
        assert!(e.coeff().sub(t.coeff(), &ctx).abs().to_f64() < 1e-35);
    }

    #[test]
    fn convolution_agrees_with_spectral_route() {
        // E_alpha * v computed directly equals the ||xi||^{-alpha}
        // multiplier applied to v (alpha < n so the symbol is integrable)
        let ctx = Ctx::new(128);
        let pr = p(2);
        let alpha = rat(1, 2);
        let kernel = taibleson_fundamental_solution(pr, 1, &alpha, &ctx).unwrap();
        let v = TestFunction::chi(pr, 1, 0);
        let sym = SymbolSpec::norm_power(rat(-1, 2));
        for (xa, xb) in [(0, 1), (1, 1), (1, 2), (3, 4), (5, 1)] {
            let x = Point::from_ratios(pr, &[(xa, xb)]);
            let direct = convolve_kernel(&kernel, &v, &x, &ctx).unwrap();
            let spectral = multiplier_apply(&sym, &v, &x, &ctx).unwrap();
            assert!(
                direct.close_abs(&spectral, 1e-30, &ctx),
                "x = {xa}/{xb}: {} vs {}",
                direct.value.re.to_f64(),
                spectral.value.re.to_f64()
            );
        }
    }

    #[test]
    fn taibleson_residual_reproduces_v() {
        let ctx = Ctx::new(128);
        let pr = p(3);
        for alpha in [rat(1, 2), rat(1, 1), rat(23, 10)] {
            let kernel = taibleson_fundamental_solution(pr, 1, &alpha, &ctx).unwrap();
            let v = TestFunction::chi(pr, 1, 0);
            for (xa, xb) in [(0, 1), (1, 1), (1, 3), (9, 1)] {
                let x = Point::from_ratios(pr, &[(xa, xb)]);
                let got = taibleson_apply_to_convolution(&alpha, &kernel, &v, &x, &ctx).unwrap();
                let expect = ctx.render_cyc(&v.evaluate(&x).unwrap());
                let err = got.value.sub(&expect, &ctx).abs(&ctx).to_f64();
                assert!(err < 1e-25, "alpha={alpha} x={xa}/{xb} err={err}");
            }
        }
    }

    #[test]
    fn additive_constant_is_immaterial_for_the_residual() {
        let ctx = Ctx::new(128);
        let pr = p(2);
        let alpha = rat(1, 2);
        let kernel = taibleson_fundamental_solution(pr, 1, &alpha, &ctx).unwrap();
        let shifted = kernel.clone().with_constant(ctx.real_from_f64(2.5));
        let v = TestFunction::chi(pr, 1, 1);
        let x = Point::from_ratios(pr, &[(1, 2)]);
        // (E + c) * v differs by c * int v
        let a = convolve_kernel(&kernel, &v, &x, &ctx).unwrap();
        let b = convolve_kernel(&shifted, &v, &x, &ctx).unwrap();
        let diff = b.value.sub(&a.value, &ctx);
        let expect = ctx
            .real_from_f64(2.5)
            .mul(&ctx.render_cyc(&v.integrate()).re, &ctx);
        assert!(diff.re.sub(&expect, &ctx).abs().to_f64() < 1e-30);
        assert!(diff.im.to_f64().abs() < 1e-30);
        // but the operator result is unchanged
        let r1 = taibleson_apply_to_convolution(&alpha, &kernel, &v, &x, &ctx).unwrap();
        let r2 = taibleson_apply_to_convolution(&alpha, &shifted, &v, &x, &ctx).unwrap();
        assert!(r1.close_abs(&r2, 1e-25, &ctx));
    }
}
