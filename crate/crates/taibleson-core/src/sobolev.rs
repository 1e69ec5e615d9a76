//! Sobolev norms `H^l` (weight `max(1, ||xi||)^{2l}`) and their singular
//! variants (weight `||xi||^{2l}`) for test functions, the non-compact
//! example that separates `H^l` from `S`, the radial moment `I(beta)`, and
//! the operator-continuity inequality.
//!
//! `|F phi|^2` is an exact test function, so every norm is a finite sum of
//! shell masses (exact cyclotomic values times one real weight) plus a
//! closed-form geometric tail toward the origin.

use crate::multiplier::{apply_to_spectrum, SymbolSpec};
use crate::numeric::{Ctx, Real};
use crate::point::Point;
use crate::prime::Prime;
use crate::schwartz::{FourierDirection, TestFunction};
use crate::zeta::EllipticSymbol;
use crate::{Error, Result};
use alloc::string::ToString;
use alloc::vec::Vec;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Which Sobolev weight to integrate against.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NormKind {
    /// `max(1, ||xi||)^{2l}`.
    H,
    /// `||xi||^{2l}` (the singular norm; dominated by `H`).
    SingularH,
}

/// A computed squared norm with its shell decomposition.
#[derive(Clone, Debug)]
pub struct NormReport {
    pub squared_norm: Real,
    /// `(j, mass)`: contribution of the shell `||xi|| = p^j`; the final
    /// entry at the smallest `j` aggregates the whole ball below it.
    pub shell_breakdown: Vec<(i64, f64)>,
    pub l: BigRational,
    pub kind: NormKind,
}

impl NormReport {
    pub fn squared_norm_f64(&self) -> f64 {
        self.squared_norm.to_f64()
    }
}

/// `||phi||^2` against the chosen weight, exact modulo rounding.
pub fn h_norm(
    phi: &TestFunction,
    l: &BigRational,
    kind: NormKind,
    ctx: &Ctx,
) -> Result<NormReport> {
    if l.is_negative() {
        return Err(Error::InvalidInput("l must be >= 0".to_string()));
    }
    let prime = phi.prime();
    let n = phi.dim() as i64;
    let hat = phi.fourier(FourierDirection::Forward)?;
    let g = hat.product(&hat.conj()?)?; // |F phi|^2, exact

    let mut breakdown: Vec<(i64, f64)> = Vec::new();
    let mut total = ctx.zero();
    if g.is_zero_fn()? {
        return Ok(NormReport {
            squared_norm: total,
            shell_breakdown: breakdown,
            l: l.clone(),
            kind,
        });
    }

    let outer = g.support_exponent().unwrap(); // spectrum inside ||xi|| <= p^outer
    let inner_depth = g.structure_depth(); // g is constant on B_{inner_depth}
    let two_l = l * BigRational::from_integer(2.into());

    // explicit shells ||xi|| = p^j, from the support down to the constancy ball
    for j in (-inner_depth..=outer).rev() {
        let mass_exact = g.shell_integral(-j)?;
        let mass = ctx.render_cyc(&mass_exact).re;
        let weight = match kind {
            NormKind::H => {
                if j >= 1 {
                    ctx.p_pow_real(
                        prime,
                        &ctx.real_from_rational(&(&two_l * BigRational::from_integer(j.into()))),
                    )
                } else {
                    ctx.one()
                }
            }
            NormKind::SingularH => ctx.p_pow_real(
                prime,
                &ctx.real_from_rational(&(&two_l * BigRational::from_integer(j.into()))),
            ),
        };
        let piece = mass.mul(&weight, ctx);
        breakdown.push((j, piece.to_f64()));
        total = total.add(&piece, ctx);
    }

    // remaining ball B_{U+1} below the explicit shells: g is g(0) there
    let g0 = ctx
        .render_cyc(&g.evaluate(&Point::zero(prime, phi.dim()))?)
        .re;
    let central = match kind {
        NormKind::H => {
            // weight 1 on the whole ball (inner_depth >= 0)
            g0.mul(&ctx.p_pow_i64(prime, -(inner_depth + 1) * n), ctx)
        }
        NormKind::SingularH => {
            // sum_{j <= -(U+1)} p^{2lj} p^{jn} (1 - p^{-n}), closed form
            let e = BigRational::from_integer(n.into()) + &two_l;
            let q = ctx.p_pow_real(prime, &ctx.real_from_rational(&-e));
            let head = q.powi(inner_depth + 1, ctx);
            let factor = ctx
                .one()
                .sub(&ctx.p_pow_i64(prime, -n), ctx)
                .mul(&head.div(&ctx.one().sub(&q, ctx), ctx), ctx);
            g0.mul(&factor, ctx)
        }
    };
    breakdown.push((-inner_depth - 1, central.to_f64()));
    total = total.add(&central, ctx);

    Ok(NormReport {
        squared_norm: total,
        shell_breakdown: breakdown,
        l: l.clone(),
        kind,
    })
}

/// `int max(1, ||xi||)^{2l} |f(xi)|^{2a} |F phi|^2 dxi`: the squared `H^l`
/// norm of the operator image `|f|^a(D) phi`, computed through the cell
/// machinery (`symbol = None` gives the plain norm, cross-checking
/// [`h_norm`]).
pub fn operator_image_h_norm_sq(
    symbol: Option<(&EllipticSymbol, &BigRational)>,
    phi: &TestFunction,
    l: &BigRational,
    ctx: &Ctx,
) -> Result<Real> {
    let prime = phi.prime();
    let hat = phi.fourier(FourierDirection::Forward)?;
    let g = hat.product(&hat.conj()?)?.canonical()?;
    let origin = Point::zero(prime, phi.dim());
    let chi0 = TestFunction::chi(prime, phi.dim(), 0);
    let g_in = g.product(&chi0)?;
    let g_out = g.sub(&g_in)?;
    let two_l = l * BigRational::from_integer(2.into());
    let two_a = |a: &BigRational| a * BigRational::from_integer(2.into());

    let inner_sym = match symbol {
        None => SymbolSpec::norm_power(BigRational::zero()),
        Some((s, a)) => SymbolSpec::elliptic(s, two_a(a)),
    };
    let outer_sym = match symbol {
        None => SymbolSpec::norm_power(two_l.clone()),
        Some((s, a)) => SymbolSpec::product(s, two_a(a), two_l.clone()),
    };
    let inner = apply_to_spectrum(&inner_sym, &g_in, &origin, ctx)?;
    let outer = apply_to_spectrum(&outer_sym, &g_out, &origin, ctx)?;
    Ok(inner.value.re.add(&outer.value.re, ctx))
}

/// `I(beta) = int_{||x|| <= 1} ||x||^beta dx = (1-p^{-n})/(1-p^{-beta-n})`
/// for `beta > -n`. (The substitution `x = p y` contracts the ball by
/// `p^{-beta-n}`, which fixes the exponent in the denominator.)
pub fn i_beta(prime: Prime, n: usize, beta: &BigRational, ctx: &Ctx) -> Result<Real> {
    let nn = BigRational::from_integer((n as i64).into());
    if *beta <= -nn.clone() {
        return Err(Error::AlphaOutOfRange {
            detail: "I(beta) requires beta > -n".to_string(),
        });
    }
    let q = ctx.p_pow_real(prime, &ctx.real_from_rational(&-(beta + nn)));
    Ok(ctx
        .one()
        .sub(&ctx.p_pow_i64(prime, -(n as i64)), ctx)
        .div(&ctx.one().sub(&q, ctx), ctx))
}

/// Truncated shell sum for `I(beta)` with an exact bound on the dropped
/// tail; the referee for the closed form.
pub fn i_beta_shell_sum(
    prime: Prime,
    n: usize,
    beta: &BigRational,
    shells: i64,
    ctx: &Ctx,
) -> (Real, Real) {
    let e = beta + BigRational::from_integer((n as i64).into());
    let q = ctx.p_pow_real(prime, &ctx.real_from_rational(&-e));
    let lead = ctx.one().sub(&ctx.p_pow_i64(prime, -(n as i64)), ctx);
    let mut acc = ctx.zero();
    for j in 0..shells {
        acc = acc.add(&lead.mul(&q.powi(j, ctx), ctx), ctx);
    }
    let tail = lead.mul(&q.powi(shells, ctx).div(&ctx.one().sub(&q, ctx), ctx), ctx);
    (acc, tail)
}

/// The section-5 style example: `f(x) = ||x||^{-beta}` away from the unit
/// ball (and 1 on the unit sphere), whose `H^l` norm is finite although the
/// function has no compact support.
#[derive(Clone, Debug)]
pub struct RadialExampleReport {
    /// `int_{||xi|| <= 1} |F f|^2` via explicit shell transforms.
    pub inner_norm_sq: Real,
    /// The same quantity from the closed-form integrand
    /// `(1-p^{-n})(1-||xi||^{beta-n} p^{n-beta})/(1-p^{n-beta})
    ///  - p^{-beta}||xi||^{beta-n}`.
    pub formula_value: Real,
    /// Transform mass on the shell `||xi|| = p` (not covered by the
    /// closed-form integrand; reported rather than assumed zero).
    pub outer_mass_unweighted: Real,
    /// Full `||f||^2_{H^l}` including the weighted outer shell.
    pub total_norm_sq: Real,
}

pub fn radial_example(
    prime: Prime,
    n: usize,
    beta: &BigRational,
    l: &BigRational,
    ctx: &Ctx,
) -> Result<RadialExampleReport> {
    let nn = BigRational::from_integer((n as i64).into());
    if *beta <= nn {
        return Err(Error::AlphaOutOfRange {
            detail: "the example needs beta > n".to_string(),
        });
    }
    let ni = n as i64;
    // F f on the shell ||xi|| = p^m by the finite j-sums
    // F(m) = sum_{j>=0} p^{-j beta} [ p^{jn} [j <= -m] - p^{(j-1)n} [j <= 1-m] ]
    let transform_at = |m: i64| -> Real {
        let mut acc = ctx.zero();
        let p_beta = |j: i64| {
            ctx.p_pow_real(
                prime,
                &ctx.real_from_rational(&(-beta * BigRational::from_integer(j.into()))),
            )
        };
        let mut j = 0i64;
        while j <= (1 - m).max(-m) {
            let mut shell = ctx.zero();
            if j <= -m {
                shell = shell.add(&ctx.p_pow_i64(prime, j * ni), ctx);
            }
            if j <= 1 - m {
                shell = shell.sub(&ctx.p_pow_i64(prime, (j - 1) * ni), ctx);
            }
            acc = acc.add(&shell.mul(&p_beta(j), ctx), ctx);
            j += 1;
        }
        acc
    };

    // explicit shells m = 0 down to -M, then the constant-limit tail
    let beta_minus_n = beta - &nn;
    let m_depth = {
        // p^{-M(beta-n)} < 2^{-prec-16}
        let bits = (ctx.precision_bits() + 16) as f64;
        let rate =
            ctx.real_from_rational(&beta_minus_n).to_f64().max(0.1) * (prime.get() as f64).log2();
        (bits / rate).ceil() as i64 + 1
    };
    let one_minus_pn = ctx.one().sub(&ctx.p_pow_i64(prime, -ni), ctx);
    let mut inner = ctx.zero();
    for m in (-m_depth..=0).rev() {
        let val = transform_at(m);
        let mu = ctx.p_pow_i64(prime, m * ni).mul(&one_minus_pn, ctx);
        inner = inner.add(&val.mul(&val, ctx).mul(&mu, ctx), ctx);
    }
    // remaining ball: |F f| has stabilized at A = (1-p^{-n})/(1-p^{n-beta})
    let a_const = {
        let q = ctx.p_pow_real(prime, &ctx.real_from_rational(&(&nn - beta)));
        one_minus_pn.div(&ctx.one().sub(&q, ctx), ctx)
    };
    let ball_measure = ctx.p_pow_i64(prime, -(m_depth + 1) * ni);
    inner = inner.add(&a_const.mul(&a_const, ctx).mul(&ball_measure, ctx), ctx);

    // closed-form value of the displayed integrand, integrated over the
    // unit ball: with B = -(1-p^{-n}) q /(1-q) - p^{-beta}, q = p^{n-beta},
    // the three geometric series in m give
    //   A^2 + 2AB (1-p^{-n})/(1-p^{-beta}) + B^2 (1-p^{-n})/(1-p^{n-2beta})
    let formula_value = {
        let q = ctx.p_pow_real(prime, &ctx.real_from_rational(&(&nn - beta)));
        let b_const = a_const.mul(&q, ctx).neg().sub(
            &ctx.p_pow_real(prime, &ctx.real_from_rational(&-beta.clone())),
            ctx,
        );
        let s1 = ctx.one(); // (1-p^{-n}) sum p^{mn} = 1
        let s2 = one_minus_pn.div(
            &ctx.one().sub(
                &ctx.p_pow_real(prime, &ctx.real_from_rational(&-beta.clone())),
                ctx,
            ),
            ctx,
        );
        let s3 = one_minus_pn.div(
            &ctx.one().sub(
                &ctx.p_pow_real(
                    prime,
                    &ctx.real_from_rational(&(&nn - beta * BigRational::from_integer(2.into()))),
                ),
                ctx,
            ),
            ctx,
        );
        let two = ctx.real_from_i64(2);
        a_const
            .mul(&a_const, ctx)
            .mul(&s1, ctx)
            .add(
                &two.mul(&a_const, ctx).mul(&b_const, ctx).mul(&s2, ctx),
                ctx,
            )
            .add(&b_const.mul(&b_const, ctx).mul(&s3, ctx), ctx)
    };

    // the transform also carries mass on ||xi|| = p (the sphere term of f)
    let outer_val = transform_at(1);
    let outer_mu = ctx.p_pow_i64(prime, ni).mul(&one_minus_pn, ctx);
    let outer_mass_unweighted = outer_val.mul(&outer_val, ctx).mul(&outer_mu, ctx);
    let weight = ctx.p_pow_real(
        prime,
        &ctx.real_from_rational(&(l * BigRational::from_integer(2.into()))),
    );
    let total_norm_sq = inner.add(&outer_mass_unweighted.mul(&weight, ctx), ctx);

    Ok(RadialExampleReport {
        inner_norm_sq: inner,
        formula_value,
        outer_mass_unweighted,
        total_norm_sq,
    })
}

/// `int |F phi| d xi`, exactly modulo rounding.
///
/// A cell of the canonical spectrum can carry several twists, so `|F phi|`
/// is only constant after refining to the scale where every character is
/// constant; the integral is then a finite sum of `measure * |value|`.
pub fn fourier_l1_norm(phi: &TestFunction, ctx: &Ctx) -> Result<Real> {
    let prime = phi.prime();
    let n = phi.dim() as i64;
    let hat = phi.fourier(FourierDirection::Forward)?.canonical()?;
    if hat.is_zero_repr() {
        return Ok(ctx.zero());
    }
    let depth = hat.structure_depth();
    let mut seen: alloc::collections::BTreeSet<Vec<BigRational>> =
        alloc::collections::BTreeSet::new();
    let mut total = ctx.zero();
    let cell_measure = ctx.p_pow_i64(prime, -depth * n);
    for t in hat.terms() {
        // split the support ball into constancy cells at the common depth
        let mut balls = alloc::vec![t.ball().clone()];
        while balls[0].scale() < depth {
            let mut next = alloc::vec::Vec::with_capacity(balls.len() * 2);
            for b in balls {
                next.extend(b.children());
            }
            balls = next;
        }
        for b in balls {
            if !seen.insert(b.center().coords().to_vec()) {
                continue;
            }
            let value = hat.evaluate(b.center())?;
            let modulus = ctx.render_cyc(&value.norm_sq()).re.sqrt(ctx);
            total = total.add(&modulus.mul(&cell_measure, ctx), ctx);
        }
    }
    Ok(total)
}

/// Report for the continuity of `f(D, alpha): H^{l + d alpha} -> H^l` and
/// the `L^1`-spectrum embedding bound.
#[derive(Clone, Debug)]
pub struct ContinuityReport {
    /// max over the suite of `||f(D,a) phi||^2_{H^l} / ||phi||^2_{H^{l+da}}`.
    pub max_ratio: f64,
    /// `C1^{2 alpha} = p^{-2 alpha m_min}`.
    pub bound: f64,
    pub pass: bool,
    /// `(int max(1,||xi||)^{-2l})^{1/2}` for `l > n/2`, and the max over
    /// the suite of `int |F phi| / (C ||phi||_{H^l})` (must be <= 1).
    pub embedding_constant: f64,
    pub embedding_max_ratio: f64,
    pub embedding_pass: bool,
}

pub fn continuity_check(
    symbol: &EllipticSymbol,
    alpha: &BigRational,
    l: &BigRational,
    suite: &[TestFunction],
    ctx: &Ctx,
) -> Result<ContinuityReport> {
    let prime = symbol.prime();
    let n = symbol.dim() as i64;
    let d = symbol.degree() as i64;
    let l_shift = l + alpha * BigRational::from_integer(d.into());

    // |f| <= C1 ||xi||^d with C1 = p^{c1_exponent}, so the norm ratio is
    // bounded by C1^{2 alpha}
    let bound = {
        let e = ctx
            .real_from_rational(alpha)
            .mul(&ctx.real_from_i64(2 * symbol.covering().c1_exponent()), ctx);
        ctx.p_pow_real(prime, &e)
    };

    let mut max_ratio = ctx.zero();
    let mut emb_max = ctx.zero();
    // embedding constant: 1 + (1-p^{-n}) p^{n-2l}/(1-p^{n-2l}) for l > n/2
    let two_l = l * BigRational::from_integer(2.into());
    let embedding_ok = two_l > BigRational::from_integer(n.into());
    let embedding_constant = if embedding_ok {
        let q = ctx.p_pow_real(
            prime,
            &ctx.real_from_rational(&(BigRational::from_integer(n.into()) - &two_l)),
        );
        ctx.one()
            .add(
                &ctx.one()
                    .sub(&ctx.p_pow_i64(prime, -n), ctx)
                    .mul(&q.div(&ctx.one().sub(&q, ctx), ctx), ctx),
                ctx,
            )
            .sqrt(ctx)
    } else {
        ctx.zero()
    };

    for phi in suite {
        if phi.is_zero_fn()? {
            continue;
        }
        let lhs = operator_image_h_norm_sq(Some((symbol, alpha)), phi, l, ctx)?;
        let rhs = h_norm(phi, &l_shift, NormKind::H, ctx)?.squared_norm;
        let ratio = lhs.div(&rhs, ctx);
        max_ratio = max_ratio.max(&ratio);

        if embedding_ok {
            let l1 = fourier_l1_norm(phi, ctx)?;
            let h = h_norm(phi, l, NormKind::H, ctx)?.squared_norm.sqrt(ctx);
            let ratio = l1.div(&embedding_constant.mul(&h, ctx), ctx);
            emb_max = emb_max.max(&ratio);
        }
    }

    let tol = ctx.real_from_f64(1e-20);
    let pass = max_ratio.cmp(&bound.add(&tol, ctx)) != core::cmp::Ordering::Greater;
    let embedding_pass =
        !embedding_ok || emb_max.cmp(&ctx.one().add(&tol, ctx)) != core::cmp::Ordering::Greater;
    Ok(ContinuityReport {
        max_ratio: max_ratio.to_f64(),
        bound: bound.to_f64(),
        pass,
        embedding_constant: embedding_constant.to_f64(),
        embedding_max_ratio: emb_max.to_f64(),
        embedding_pass,
    })
}

/// The computable norm estimates behind the solvability theorem: the
/// solution norm and the pieces bounding it.
#[derive(Clone, Debug)]
pub struct SolutionNormPieces {
    pub u_norm_sq: f64,
    pub bound_c0: f64,
    pub inner_moment: f64,
    pub v_norm_sq: f64,
    pub pass: bool,
}

/// For `0 < alpha < n/(2d)`: `||u||^2_{H^{l+d alpha}}` with
/// `F u = |f|^{-alpha} F v`, against the explicit bound
/// `C0^{-2alpha} [ int_{||xi||<=1} ||xi||^{-2 d alpha} |F v|^2 + ||v||^2_{H^l} ]`.
pub fn solution_norm_pieces(
    symbol: &EllipticSymbol,
    alpha: &BigRational,
    l: &BigRational,
    v: &TestFunction,
    ctx: &Ctx,
) -> Result<SolutionNormPieces> {
    let n = BigRational::from_integer((symbol.dim() as i64).into());
    let d = BigRational::from_integer((symbol.degree() as i64).into());
    if alpha * BigRational::from_integer(2.into()) * &d >= n {
        return Err(Error::AlphaOutOfRange {
            detail: "norm pieces need alpha < n/(2d)".to_string(),
        });
    }
    let prime = symbol.prime();
    let neg_alpha = -alpha.clone();
    let u_norm_sq = operator_image_h_norm_sq(Some((symbol, &neg_alpha)), v, l, ctx)?;

    // inner moment int_{||xi||<=1} ||xi||^{-2 d alpha} |F v|^2
    let hat = v.fourier(FourierDirection::Forward)?;
    let g = hat.product(&hat.conj()?)?;
    let g_in = g.product(&TestFunction::chi(prime, v.dim(), 0))?;
    let moment_sym = SymbolSpec::norm_power(-(alpha * BigRational::from_integer(2.into()) * &d));
    let inner_moment = apply_to_spectrum(
        &moment_sym,
        &g_in.canonical()?,
        &Point::zero(prime, v.dim()),
        ctx,
    )?
    .value
    .re;
    let v_norm = h_norm(v, l, NormKind::H, ctx)?.squared_norm;
    let c0 = ctx.p_pow_real(
        prime,
        &ctx.real_from_rational(&(alpha * BigRational::from_integer(2.into())))
            .mul(&ctx.real_from_i64(symbol.covering().m_max() as i64), ctx),
    );
    let bound = c0.mul(&inner_moment.add(&v_norm, ctx), ctx);
    let tol = ctx.real_from_f64(1e-20);
    let pass = u_norm_sq.cmp(&bound.add(&tol, ctx)) != core::cmp::Ordering::Greater;
    Ok(SolutionNormPieces {
        u_norm_sq: u_norm_sq.to_f64(),
        bound_c0: c0.to_f64(),
        inner_moment: inner_moment.to_f64(),
        v_norm_sq: v_norm.to_f64(),
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::TreeBudget;
    use crate::cyclotomic::CycScalar;
    use crate::poly::IntPolynomial;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn chi0_has_unit_norm() {
        let ctx = Ctx::new(128);
        for (pr, n) in [(2u64, 1usize), (5, 2)] {
            let phi = TestFunction::chi(p(pr), n, 0);
            for l in [rat(0, 1), rat(1, 1), rat(7, 2)] {
                let r = h_norm(&phi, &l, NormKind::H, &ctx).unwrap();
                assert!(
                    (r.squared_norm_f64() - 1.0).abs() < 1e-30,
                    "p={pr} n={n} l={l}"
                );
            }
        }
    }

    #[test]
    fn spectrum_on_outer_shell() {
        // phi with F phi = chi_{-1} (n=1): ||phi||^2_{H^l} = 1 + (p-1) p^{2l}
        let ctx = Ctx::new(128);
        let pr = p(3);
        let phi = TestFunction::chi(pr, 1, 1).scale_rational(&rat(3, 1));
        let hat = phi.fourier(FourierDirection::Forward).unwrap();
        assert!(hat.eq_fn(&TestFunction::chi(pr, 1, -1)).unwrap());
        for l in [rat(1, 1), rat(5, 2)] {
            let r = h_norm(&phi, &l, NormKind::H, &ctx).unwrap();
            let expect = 1.0 + 2.0 * 3f64.powf(2.0 * rat_f64(&l));
            assert!(
                (r.squared_norm_f64() - expect).abs() < 1e-9 * expect,
                "l={l}: {} vs {expect}",
                r.squared_norm_f64()
            );
            // breakdown sums to the norm
            let sum: f64 = r.shell_breakdown.iter().map(|(_, m)| m).sum();
            assert!((sum - r.squared_norm_f64()).abs() < 1e-20 * expect.max(1.0));
        }
    }

    fn rat_f64(q: &BigRational) -> f64 {
        use num_traits::ToPrimitive;
        q.to_f64().unwrap()
    }

    #[test]
    fn singular_norm_below_h_norm() {
        let ctx = Ctx::new(128);
        let pr = p(3);
        let phi = TestFunction::term(
            CycScalar::from_ratio(pr, 3, 4),
            Point::from_ratios(pr, &[(1, 3)]),
            Point::from_integers(pr, &[2]),
            1,
        )
        .unwrap()
        .add(&TestFunction::chi(pr, 1, -1))
        .unwrap();
        for l in [rat(1, 2), rat(2, 1)] {
            let h = h_norm(&phi, &l, NormKind::H, &ctx).unwrap().squared_norm;
            let s = h_norm(&phi, &l, NormKind::SingularH, &ctx)
                .unwrap()
                .squared_norm;
            assert!(s.cmp(&h) != core::cmp::Ordering::Greater, "l={l}");
        }
    }

    #[test]
    fn weight_monotonicity_in_l() {
        let ctx = Ctx::new(128);
        let pr = p(2);
        let phi = TestFunction::chi(pr, 1, -2)
            .add(&TestFunction::chi(pr, 1, 1))
            .unwrap();
        let mut last = ctx.zero();
        for num in 0..4i64 {
            let l = rat(num, 1);
            let h = h_norm(&phi, &l, NormKind::H, &ctx).unwrap().squared_norm;
            assert!(h.cmp(&last) != core::cmp::Ordering::Less);
            last = h;
        }
    }

    #[test]
    fn norm_agrees_with_cell_machinery() {
        let ctx = Ctx::new(128);
        let pr = p(3);
        let phi = TestFunction::term(
            CycScalar::one(pr),
            Point::from_ratios(pr, &[(2, 9)]),
            Point::from_integers(pr, &[1]),
            1,
        )
        .unwrap()
        .add(&TestFunction::chi(pr, 1, 0).scale_cyc(&CycScalar::from_ratio(pr, 1, 2)))
        .unwrap();
        let l = rat(3, 2);
        let direct = h_norm(&phi, &l, NormKind::H, &ctx).unwrap().squared_norm;
        let via_cells = operator_image_h_norm_sq(None, &phi, &l, &ctx).unwrap();
        assert!(direct.sub(&via_cells, &ctx).abs().to_f64() < 1e-30);
    }

    #[test]
    fn i_beta_values() {
        let ctx = Ctx::new(128);
        // p=3, n=1, beta=1 -> 3/4
        let v = i_beta(p(3), 1, &rat(1, 1), &ctx).unwrap();
        assert!((v.to_f64() - 0.75).abs() < 1e-30);
        // beta = 0 -> 1
        let v = i_beta(p(5), 2, &rat(0, 1), &ctx).unwrap();
        assert!((v.to_f64() - 1.0).abs() < 1e-30);
        // p=2, n=2, beta=1 -> 6/7
        let v = i_beta(p(2), 2, &rat(1, 1), &ctx).unwrap();
        assert!((v.to_f64() - 6.0 / 7.0).abs() < 1e-30);
        // closed form vs truncated shell sum within the tail bound
        let beta = rat(7, 5);
        let closed = i_beta(p(3), 2, &beta, &ctx).unwrap();
        let (sum, tail) = i_beta_shell_sum(p(3), 2, &beta, 40, &ctx);
        let diff = closed.sub(&sum, &ctx).abs();
        assert!(
            diff.cmp(&tail.add(&ctx.real_from_f64(1e-30), &ctx)) != core::cmp::Ordering::Greater
        );
    }

    #[test]
    fn radial_example_two_routes() {
        let ctx = Ctx::new(128);
        // (p, n, beta, l) = (2, 1, 3, 5)
        let rep = radial_example(p(2), 1, &rat(3, 1), &rat(5, 1), &ctx).unwrap();
        let a = rep.inner_norm_sq.to_f64();
        let b = rep.formula_value.to_f64();
        assert!(a.is_finite() && a > 0.0);
        assert!(((a - b) / b).abs() < 1e-25, "{a} vs {b}");
        // the outer shell carries genuine mass: |Ff(p)|^2 = p^{-2n}
        assert!(rep.outer_mass_unweighted.to_f64() > 0.0);
        // total norm is finite and l-dependent only through the outer shell
        let rep2 = radial_example(p(2), 1, &rat(3, 1), &rat(1, 1), &ctx).unwrap();
        assert!((rep.inner_norm_sq.to_f64() - rep2.inner_norm_sq.to_f64()).abs() < 1e-25);
        assert!(rep.total_norm_sq.to_f64() > rep2.total_norm_sq.to_f64());
    }

    #[test]
    fn continuity_with_linear_symbol() {
        // f = xi, alpha = 1, l = 1, n = 1: exact symbol equality, C1 = 1
        let ctx = Ctx::new(128);
        let pr = p(3);
        let f = IntPolynomial::coordinate(1, 0);
        let symbol = EllipticSymbol::new(f, pr, TreeBudget::default()).unwrap();
        let suite = alloc::vec![
            TestFunction::chi(pr, 1, 0),
            TestFunction::chi(pr, 1, -1),
            TestFunction::term(
                CycScalar::one(pr),
                Point::from_ratios(pr, &[(1, 3)]),
                Point::from_integers(pr, &[1]),
                1,
            )
            .unwrap(),
        ];
        let rep = continuity_check(&symbol, &rat(1, 1), &rat(1, 1), &suite, &ctx).unwrap();
        assert!(rep.pass, "ratio {} bound {}", rep.max_ratio, rep.bound);
        assert!((rep.bound - 1.0).abs() < 1e-20);
        assert!(rep.embedding_pass);
        assert!(rep.embedding_constant.is_finite() && rep.embedding_constant > 1.0);
    }

    #[test]
    fn solution_norm_bound() {
        let ctx = Ctx::new(128);
        let pr = p(3);
        let f = IntPolynomial::coordinate(1, 0);
        let symbol = EllipticSymbol::new(f.clone(), pr, TreeBudget::default()).unwrap();
        let v = TestFunction::chi(pr, 1, 0)
            .add(
                &TestFunction::term(
                    CycScalar::one(pr),
                    Point::zero(pr, 1),
                    Point::from_integers(pr, &[1]),
                    1,
                )
                .unwrap(),
            )
            .unwrap();
        let pieces = solution_norm_pieces(&symbol, &rat(2, 5), &rat(1, 1), &v, &ctx).unwrap();
        assert!(pieces.pass, "{pieces:?}");
        assert!(pieces.u_norm_sq.is_finite());
        // out of range alpha rejected
        assert!(solution_norm_pieces(&symbol, &rat(3, 5), &rat(1, 1), &v, &ctx).is_err());
    }
}
