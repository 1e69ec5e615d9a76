//! Igusa local zeta functions of elliptic polynomials as exact rational
//! functions of `t = p^{-s}`.
//!
//! Everything reduces to the sphere covering: with
//! `L(t) = sum_leaves p^{-n k_i} t^{m_i}` the zeta function of an elliptic
//! `f` is `Z(s,f) = L(t) / (1 - p^{-n} t^d)`, the self-similar part coming
//! from the substitution `x = p y` on `(p Z_p)^n`. Pairings against
//! arbitrary test functions decompose each term into sphere cells (where
//! the covering freezes `|f|`) plus a geometric shell tail toward the
//! origin.

use crate::covering::{for_each_leaf_in_cell, SphereCovering};
use crate::cyclotomic::CycScalar;
use crate::laurent::{LaurentPoly, LaurentRational};
use crate::point::Point;
use crate::poly::IntPolynomial;
use crate::prime::Prime;
use crate::scalar::{rational_p_pow, PadicScalar, Valuation};
use crate::schwartz::TestFunction;
use crate::{Error, Result};
use alloc::string::ToString;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// `Z(s, f) = int_{Z_p^n} |f(x)|^s dx` for elliptic `f`, kept both as a
/// normalized rational function and as the raw sphere numerator `L(t)`.
#[derive(Clone, Debug)]
pub struct IgusaZeta {
    value: LaurentRational,
    sphere_numerator: LaurentPoly,
    dim: usize,
    degree: u32,
}

impl IgusaZeta {
    pub fn value(&self) -> &LaurentRational {
        &self.value
    }

    /// The numerator `L(t)`: the polynomial `p^{-nm} sum_i |f(z_i)|_p^s`
    /// over the covering, before any cancellation.
    pub fn sphere_numerator(&self) -> &LaurentPoly {
        &self.sphere_numerator
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }
}

/// The zeta function from a certified covering.
pub fn igusa_zeta(covering: &SphereCovering) -> Result<IgusaZeta> {
    let prime = covering.prime();
    let n = covering.dim() as i64;
    let d = covering.degree() as i64;
    let sphere_numerator = LaurentPoly::from_rational_terms(prime, &covering.sphere_sum());
    let den = LaurentPoly::from_rational_terms(
        prime,
        &[(0, BigRational::one()), (d, -rational_p_pow(prime, -n))],
    );
    let value = LaurentRational::new(sphere_numerator.clone(), den)?;
    Ok(IgusaZeta {
        value,
        sphere_numerator,
        dim: covering.dim(),
        degree: covering.degree(),
    })
}

/// `<|f|_p^s, phi> = int |f(x)|^s phi(x) dx` as an exact rational function
/// of `t = p^{-s}` (coefficients may be cyclotomic when `phi` carries
/// twists). Specializes to [`igusa_zeta`] at `phi = chi_0`.
pub fn zeta_pairing(
    f: &IntPolynomial,
    covering: &SphereCovering,
    phi: &TestFunction,
) -> Result<LaurentRational> {
    let prime = covering.prime();
    phi.prime().same(prime)?;
    if phi.dim() != covering.dim() {
        return Err(Error::DimensionMismatch {
            expected: covering.dim(),
            got: phi.dim(),
        });
    }
    let n = covering.dim() as i64;
    let d = covering.degree() as i64;
    let pole_den = LaurentPoly::from_rational_terms(
        prime,
        &[(0, BigRational::one()), (d, -rational_p_pow(prime, -n))],
    );
    let sphere_numerator = LaurentPoly::from_rational_terms(prime, &covering.sphere_sum());

    let mut polynomial_part = LaurentPoly::zero(prime);
    let mut over_pole_part = LaurentPoly::zero(prime); // numerator over pole_den

    for term in phi.terms() {
        let b = term.twist();
        let ball = term.ball();
        let r = ball.scale();
        if !ball.contains_origin() {
            // the norm is constant p^e on the ball; rescale onto the sphere
            let e = match ball.center().min_valuation() {
                Valuation::Finite(v) => -v,
                Valuation::Infinite => unreachable!("nonzero canonical center"),
            };
            let cell_depth = (r + e) as u32;
            debug_assert!(cell_depth >= 1);
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
            let w = Point::new(
                prime,
                b.coords().iter().map(|c| c * &scale.recip()).collect(),
            );
            let cell_sum = sphere_cell_char_sum(f, prime, rep, cell_depth, &w)?;
            // measure scaling p^{en} and |f(p^{-e} u)|^s = t^{-ed} |f(u)|^s
            let factor = rational_p_pow(prime, e * n);
            polynomial_part =
                polynomial_part.add(&cell_sum.shift(-e * d).scale(&term.coeff().scale(&factor)));
        } else {
            // shells ||x|| = p^{-j}, j >= r, with a geometric tail once the
            // character trivializes
            let char_reach = match b.min_valuation() {
                Valuation::Infinite => r,
                Valuation::Finite(v) => (-v).max(r),
            };
            // explicit shells j in [r, char_reach)
            for j in r..char_reach {
                let w = Point::new(
                    prime,
                    b.coords()
                        .iter()
                        .map(|c| c * rational_p_pow(prime, j))
                        .collect(),
                );
                let mut shell = LaurentPoly::zero(prime);
                for leaf in covering.leaves() {
                    shell = shell.add(&leaf_char_term(prime, leaf, &w)?);
                }
                let factor = rational_p_pow(prime, -j * n);
                polynomial_part =
                    polynomial_part.add(&shell.shift(j * d).scale(&term.coeff().scale(&factor)));
            }
            // tail: sum_{j >= J} (p^{-n} t^d)^j L(t) = L(t) q^J / (1 - q)
            let j0 = char_reach;
            let tail_num = sphere_numerator
                .shift(j0 * d)
                .scale(&CycScalar::from_rational(
                    prime,
                    rational_p_pow(prime, -j0 * n),
                ));
            over_pole_part = over_pole_part.add(&tail_num.scale(term.coeff()));
        }
    }

    let total = LaurentRational::from_poly(polynomial_part)
        .add(&LaurentRational::new(over_pole_part, pole_den)?)?;
    Ok(total)
}

/// `sum_{leaves of the cell} p^{-jn} Psi(w . rep) t^{val}` over the residue
/// tree below `rep0 mod p^{depth0}`, with the character integral exact:
/// cells where the character is nontrivial integrate to zero.
fn sphere_cell_char_sum(
    f: &IntPolynomial,
    prime: Prime,
    rep0: Vec<BigInt>,
    depth0: u32,
    w: &Point,
) -> Result<LaurentPoly> {
    let w_depth = char_depth(w);
    let mut acc = LaurentPoly::zero(prime);
    let mut err: Option<Error> = None;
    for_each_leaf_in_cell(f, prime, rep0, depth0, &mut |rep, depth, val| {
        if err.is_some() {
            return;
        }
        if w_depth > depth as i64 {
            return; // character nontrivial on the leaf: integral vanishes
        }
        match leaf_phase(prime, rep, w) {
            Ok(phase) => {
                let measure = rational_p_pow(prime, -(depth as i64) * w.dim() as i64);
                acc = acc.add(&LaurentPoly::monomial(phase.scale(&measure), val as i64));
            }
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(acc),
    }
}

fn leaf_char_term(prime: Prime, leaf: &crate::covering::Leaf, w: &Point) -> Result<LaurentPoly> {
    if char_depth(w) > leaf.depth as i64 {
        return Ok(LaurentPoly::zero(prime));
    }
    let phase = leaf_phase(prime, &leaf.rep, w)?;
    let measure = rational_p_pow(prime, -(leaf.depth as i64) * w.dim() as i64);
    Ok(LaurentPoly::monomial(
        phase.scale(&measure),
        leaf.val as i64,
    ))
}

fn leaf_phase(prime: Prime, rep: &[BigInt], w: &Point) -> Result<CycScalar> {
    let zeta_arg = Point::new(
        prime,
        rep.iter()
            .map(|z| BigRational::from_integer(z.clone()))
            .collect(),
    );
    Ok(CycScalar::psi(&zeta_arg.dot(w)?))
}

fn char_depth(w: &Point) -> i64 {
    match w.min_valuation() {
        Valuation::Infinite => 0,
        Valuation::Finite(v) => (-v).max(0),
    }
}

/// The two-sided comparability constants from the covering:
/// `C0 = p^{-m_max}` and `C1 = p^{-m_min}` with
/// `C0 ||xi||^d <= |f(xi)|_p <= C1 ||xi||^d` globally (tight on the sphere
/// by construction).
pub fn comparability_constants(covering: &SphereCovering) -> (BigRational, BigRational) {
    (
        rational_p_pow(covering.prime(), covering.c0_exponent()),
        rational_p_pow(covering.prime(), covering.c1_exponent()),
    )
}

/// Check the two-sided bounds at one rational point, exactly.
pub fn two_sided_bound_holds_at(f: &IntPolynomial, covering: &SphereCovering, x: &Point) -> Result<bool> {
    let prime = covering.prime();
    let d = covering.degree() as i64;
    let fx = f.eval_point(prime, x)?;
    let norm = x.sup_norm();
    match (fx.valuation(), norm.exponent()) {
        (Valuation::Infinite, None) => Ok(true),
        (Valuation::Infinite, Some(_)) | (Valuation::Finite(_), None) => Ok(false),
        (Valuation::Finite(vf), Some(e)) => {
            // |f(x)| = p^{-vf}; bounds are p^{-m_max + ed} and p^{-m_min + ed}
            let lower = covering.c0_exponent() + e * d;
            let upper = covering.c1_exponent() + e * d;
            Ok(-vf >= lower && -vf <= upper)
        }
    }
}

/// `int_{||u||=1} |f(u)|^{s} du` as the exact polynomial `L(t)`; numeric
/// layers specialize `t`.
pub fn sphere_symbol_sum(covering: &SphereCovering) -> LaurentPoly {
    LaurentPoly::from_rational_terms(covering.prime(), &covering.sphere_sum())
}

/// Build the classical denominator `1 - p^{-n} t^d`.
pub fn pole_denominator(prime: Prime, n: usize, d: u32) -> LaurentPoly {
    LaurentPoly::from_rational_terms(
        prime,
        &[
            (0, BigRational::one()),
            (d as i64, -rational_p_pow(prime, -(n as i64))),
        ],
    )
}

/// Helper shared with the operator layer: `|f(x)|_p^s` exponent at a
/// rational point, exact.
pub fn symbol_valuation(f: &IntPolynomial, prime: Prime, x: &Point) -> Result<Valuation> {
    Ok(f.eval_point(prime, x)?.valuation())
}

/// Scalar `|f(x)|_p` as a rational (0 allowed), used by bound checks.
pub fn symbol_abs(f: &IntPolynomial, prime: Prime, x: &Point) -> Result<BigRational> {
    let v = symbol_valuation(f, prime, x)?;
    Ok(match v {
        Valuation::Infinite => BigRational::zero(),
        Valuation::Finite(v) => rational_p_pow(prime, -v),
    })
}

/// Validated elliptic input bundle, shared by the operator modules.
#[derive(Clone, Debug)]
pub struct EllipticSymbol {
    prime: Prime,
    f: IntPolynomial,
    covering: SphereCovering,
    zeta: IgusaZeta,
}

impl EllipticSymbol {
    pub fn new(
        f: IntPolynomial,
        prime: Prime,
        budget: crate::covering::TreeBudget,
    ) -> Result<Self> {
        let covering = crate::covering::require_elliptic(&f, prime, budget)?;
        let zeta = igusa_zeta(&covering)?;
        Ok(EllipticSymbol {
            prime,
            f,
            covering,
            zeta,
        })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn poly(&self) -> &IntPolynomial {
        &self.f
    }

    pub fn covering(&self) -> &SphereCovering {
        &self.covering
    }

    pub fn zeta(&self) -> &IgusaZeta {
        &self.zeta
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    pub fn degree(&self) -> u32 {
        self.covering.degree()
    }

    /// `v(f(x))` for `x != 0`, exact (cannot be infinite by ellipticity).
    pub fn valuation_at(&self, x: &Point) -> Result<i64> {
        match symbol_valuation(&self.f, self.prime, x)? {
            Valuation::Finite(v) => Ok(v),
            Valuation::Infinite => {
                if x.is_zero() {
                    Err(Error::InvalidInput(
                        "elliptic symbol valuation requested at 0".to_string(),
                    ))
                } else {
                    Err(Error::NotElliptic {
                        witness: alloc::format!("{x}"),
                        depth: 0,
                    })
                }
            }
        }
    }
}

/// Evaluate `f` at an exact scalar multiple, used in tests.
pub fn eval_scaled(
    f: &IntPolynomial,
    prime: Prime,
    x: &Point,
    c: &BigRational,
) -> Result<PadicScalar> {
    f.eval_point(prime, &x.scale(c))
}
