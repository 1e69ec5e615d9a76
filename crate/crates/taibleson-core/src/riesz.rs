//! The p-adic Gamma function, Riesz kernel pairings with their meromorphic
//! continuations, and the identification of `|f|^s` with a Riesz-kernel
//! multiple on the radial subspace `W`.
//!
//! All pairings are exact rational functions of `t = p^{-s}`; complex `s`
//! only ever enters through numeric evaluation of `t`.

use crate::laurent::{LaurentPoly, LaurentRational};
use crate::prime::Prime;
use crate::scalar::rational_p_pow;
use crate::schwartz::TestFunction;
use crate::zeta::{zeta_pairing, EllipticSymbol};
use crate::{Error, Result};
use alloc::string::String;
use alloc::vec::Vec;
use num_rational::BigRational;
use num_traits::One;

/// A distribution pairing as a rational function of `t = p^{-s}`, with its
/// excluded points (poles of the continuation) on the `t` side.
#[derive(Clone, Debug)]
pub struct SymbolicPairing {
    pub value: LaurentRational,
    pub excluded_points: Vec<BigRational>,
    pub description: String,
}

/// `Gamma_p^{(n)}(s) = (1 - p^{s-n}) / (1 - p^{-s})`; in `t`:
/// `(1 - p^{-n} t^{-1}) / (1 - t)`.
pub fn gamma_p(prime: Prime, n: usize) -> LaurentRational {
    let num = LaurentPoly::from_rational_terms(
        prime,
        &[
            (0, BigRational::one()),
            (-1, -rational_p_pow(prime, -(n as i64))),
        ],
    );
    let den = LaurentPoly::from_rational_terms(
        prime,
        &[(0, BigRational::one()), (1, -BigRational::one())],
    );
    LaurentRational::new(num, den).expect("nonzero denominator")
}

/// `Gamma_p^{(n)}(n - s)` in the same variable `t = p^{-s}`.
pub fn gamma_p_reflected(prime: Prime, n: usize) -> LaurentRational {
    // substitute s -> n - s, i.e. t -> p^{-n} t^{-1}
    gamma_p(prime, n)
        .subst_monomial(&rational_p_pow(prime, -(n as i64)), -1)
        .expect("monomial substitution")
}

/// `<||x||^s, phi>` by the three-term meromorphic continuation:
/// the `phi(0)` geometric series plus two finite shell sums.
pub fn norm_power_pairing(phi: &TestFunction) -> Result<SymbolicPairing> {
    let prime = phi.prime();
    let n = phi.dim() as i64;
    let phi0 = phi.evaluate(&crate::point::Point::zero(prime, phi.dim()))?;

    // (1 - p^{-n}) / (1 - p^{-n} t) * phi(0)
    let den = LaurentPoly::from_rational_terms(
        prime,
        &[(0, BigRational::one()), (1, -rational_p_pow(prime, -n))],
    );
    let head_num =
        LaurentPoly::constant(phi0.scale(&(BigRational::one() - rational_p_pow(prime, -n))));
    let mut total = LaurentRational::new(head_num, den)?;

    // outer shells ||x|| = p^j, j >= 1: weight t^{-j}
    if let Some(support) = phi.support_exponent() {
        for j in 1..=support.max(0) {
            let mass = phi.shell_integral(-j)?;
            if mass.is_zero() {
                continue;
            }
            total = total.add(&LaurentRational::from_poly(LaurentPoly::monomial(mass, -j)))?;
        }
    }

    // inner shells ||x|| = p^{-l}, 0 <= l < U, integrand phi - phi(0)
    let depth = phi.structure_depth();
    for l in 0..depth {
        let mass = phi.shell_integral(l)?;
        let shell_measure =
            rational_p_pow(prime, -l * n) * (BigRational::one() - rational_p_pow(prime, -n));
        let corrected = mass.sub(&phi0.scale(&shell_measure));
        if corrected.is_zero() {
            continue;
        }
        total = total.add(&LaurentRational::from_poly(LaurentPoly::monomial(
            corrected, l,
        )))?;
    }

    Ok(SymbolicPairing {
        value: total,
        excluded_points: alloc::vec![rational_p_pow(prime, -n)],
        description: String::from("<||x||^s, phi>"),
    })
}

/// `<R_s, phi>`, the Riesz kernel pairing, by its continuation
/// `(1-p^{-n})/(1-p^{s-n}) phi(0) + (1-p^{-s})/(1-p^{s-n}) [outer + inner]`.
pub fn riesz_pairing(phi: &TestFunction) -> Result<SymbolicPairing> {
    let prime = phi.prime();
    let n = phi.dim() as i64;
    let phi0 = phi.evaluate(&crate::point::Point::zero(prime, phi.dim()))?;

    // common denominator 1 - p^{s-n} = 1 - p^{-n} t^{-1}
    let den = LaurentPoly::from_rational_terms(
        prime,
        &[(0, BigRational::one()), (-1, -rational_p_pow(prime, -n))],
    );
    let head = LaurentPoly::constant(phi0.scale(&(BigRational::one() - rational_p_pow(prime, -n))));

    // (1 - p^{-s}) = (1 - t) multiplies the shell sums
    let one_minus_t = LaurentPoly::from_rational_terms(
        prime,
        &[(0, BigRational::one()), (1, -BigRational::one())],
    );

    let mut shells = LaurentPoly::zero(prime);
    // outer shells: ||x||^{s-n} = t^{-j} p^{-jn} on ||x|| = p^j
    if let Some(support) = phi.support_exponent() {
        for j in 1..=support.max(0) {
            let mass = phi.shell_integral(-j)?;
            if mass.is_zero() {
                continue;
            }
            shells = shells.add(&LaurentPoly::monomial(
                mass.scale(&rational_p_pow(prime, -j * n)),
                -j,
            ));
        }
    }
    // inner shells: ||x||^{s-n} = t^l p^{ln} on ||x|| = p^{-l}
    let depth = phi.structure_depth();
    for l in 0..depth {
        let mass = phi.shell_integral(l)?;
        let shell_measure =
            rational_p_pow(prime, -l * n) * (BigRational::one() - rational_p_pow(prime, -n));
        let corrected = mass.sub(&phi0.scale(&shell_measure));
        if corrected.is_zero() {
            continue;
        }
        shells = shells.add(&LaurentPoly::monomial(
            corrected.scale(&rational_p_pow(prime, l * n)),
            l,
        ));
    }

    let num = head.add(&one_minus_t.mul(&shells));
    let value = LaurentRational::new(num, den)?;
    Ok(SymbolicPairing {
        value,
        excluded_points: alloc::vec![rational_p_pow(prime, -n)],
        description: String::from("<R_s, phi>"),
    })
}

/// Report for the radial identification of `|f|^s` with a Riesz multiple.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub lhs: LaurentRational,
    pub rhs: LaurentRational,
    pub equal: bool,
}

/// The radial identification of an elliptic symbol: as distributions on `W`,
/// `|f|^s = (1 - p^{ds}) L(t) / ((1 - p^{-n})(1 - p^{-ds-n})) R_{ds+n}`.
/// Both sides are computed independently (zeta pairing on the left, the
/// shifted Riesz pairing on the right) and compared exactly.
pub fn elliptic_equals_taibleson(
    symbol: &EllipticSymbol,
    phi_w: &TestFunction,
) -> Result<IdentityReport> {
    let prime = symbol.prime();
    phi_w.prime().same(prime)?;
    if phi_w.as_w_combination()?.is_none() {
        return Err(Error::NotInW);
    }
    let n = symbol.dim() as i64;
    let d = symbol.degree() as i64;

    let lhs = zeta_pairing(symbol.poly(), symbol.covering(), phi_w)?;

    // C(t) = (1 - t^{-d}) L(t) / ((1 - p^{-n})(1 - p^{-n} t^{d}))
    let c_num = LaurentPoly::from_rational_terms(
        prime,
        &[(0, BigRational::one()), (-d, -BigRational::one())],
    )
    .mul(symbol.zeta().sphere_numerator());
    let c_den = LaurentPoly::from_rational_terms(
        prime,
        &[
            (0, BigRational::one() - rational_p_pow(prime, -n)),
            (
                d,
                -(BigRational::one() - rational_p_pow(prime, -n)) * rational_p_pow(prime, -n),
            ),
        ],
    );
    let coefficient = LaurentRational::new(c_num, c_den)?;

    // <R_{ds+n}, phi>: the Riesz pairing in its own variable u = p^{-w}
    // evaluated at w = ds + n, i.e. u = p^{-n} t^{d}
    let riesz = riesz_pairing(phi_w)?;
    let shifted = riesz.value.subst_monomial(&rational_p_pow(prime, -n), d)?;

    let rhs = coefficient.mul(&shifted)?;
    let equal = lhs.eq_exact(&rhs);
    Ok(IdentityReport { lhs, rhs, equal })
}

/// `<R_s, F phi> = <||x||^{-s}, phi>` (the Fourier transform of the Riesz
/// kernel): both sides as rational functions, the right one via `t -> 1/t`.
pub fn fourier_riesz_identity(phi: &TestFunction) -> Result<IdentityReport> {
    let hat = phi.fourier(crate::schwartz::FourierDirection::Forward)?;
    let lhs = riesz_pairing(&hat)?.value;
    let rhs = norm_power_pairing(phi)?
        .value
        .subst_monomial(&BigRational::one(), -1)?;
    let equal = lhs.eq_exact(&rhs);
    Ok(IdentityReport { lhs, rhs, equal })
}

/// `R_0 = delta`: the pairing evaluated at `t = 1` equals `phi(0)` exactly.
pub fn riesz_at_zero_is_delta(phi: &TestFunction) -> Result<bool> {
    let pairing = riesz_pairing(phi)?;
    let at_one = pairing
        .value
        .eval_rational(&BigRational::one())
        .ok_or_else(|| {
            Error::InvalidInput(alloc::string::ToString::to_string(
                "unexpected pole at t = 1",
            ))
        })?;
    let phi0 = phi.evaluate(&crate::point::Point::zero(phi.prime(), phi.dim()))?;
    Ok(at_one == phi0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::TreeBudget;
    use crate::point::Point;
    use crate::poly::IntPolynomial;
    use crate::schwartz::FourierDirection;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn gamma_functional_equation() {
        for pr in [2u64, 3, 5, 7] {
            for n in 1usize..=3 {
                let lhs = gamma_p(p(pr), n).mul(&gamma_p_reflected(p(pr), n)).unwrap();
                assert!(lhs.eq_exact(&LaurentRational::one(p(pr))), "p={pr} n={n}");
            }
        }
    }

    #[test]
    fn gamma_value_example() {
        // p=2, n=1, s=2 (t = 1/4): (1 - 2^{-1} 4)/(1 - 1/4) = -4/3
        let g = gamma_p(p(2), 1);
        let v = g.eval_rational(&rat(1, 4)).unwrap();
        assert_eq!(v.as_rational().unwrap(), rat(-4, 3));
    }

    #[test]
    fn gamma_pole_at_t_equals_one() {
        let g = gamma_p(p(3), 2);
        assert!(g.eval_rational(&rat(1, 1)).is_none());
    }

    #[test]
    fn norm_power_pairing_of_chi0() {
        // <||x||^s, chi_0> = (1 - p^{-n})/(1 - p^{-n} t)
        for (pr, n) in [(2u64, 1usize), (3, 2), (5, 1)] {
            let phi = TestFunction::chi(p(pr), n, 0);
            let got = norm_power_pairing(&phi).unwrap().value;
            let pn = rational_p_pow(p(pr), -(n as i64));
            let expected = LaurentRational::new(
                LaurentPoly::from_rational_terms(p(pr), &[(0, BigRational::one() - pn.clone())]),
                LaurentPoly::from_rational_terms(p(pr), &[(0, BigRational::one()), (1, -pn)]),
            )
            .unwrap();
            assert!(got.eq_exact(&expected), "p={pr} n={n}");
        }
    }

    #[test]
    fn norm_power_pairing_away_from_zero_is_laurent_polynomial() {
        // support off 0 and bounded: finite Laurent polynomial, no pole
        let pr = p(3);
        let phi = TestFunction::term(
            CycScalar::one(pr),
            Point::zero(pr, 1),
            Point::from_ratios(pr, &[(1, 3)]),
            0,
        )
        .unwrap();
        let sp = norm_power_pairing(&phi).unwrap();
        assert_eq!(sp.value.den().max_exp(), Some(0));
    }

    #[test]
    fn riesz_pairing_of_chi0_closed_form() {
        // <R_s, chi_0> = (1-p^{-n})/(1 - p^{-n} t^{-1})
        let pr = p(3);
        let phi = TestFunction::chi(pr, 1, 0);
        let got = riesz_pairing(&phi).unwrap().value;
        let pn = rational_p_pow(pr, -1);
        let expected = LaurentRational::new(
            LaurentPoly::from_rational_terms(pr, &[(0, BigRational::one() - pn.clone())]),
            LaurentPoly::from_rational_terms(pr, &[(0, BigRational::one()), (-1, -pn)]),
        )
        .unwrap();
        assert!(got.eq_exact(&expected));
        // and it equals <||x||^{s-n}, chi_0> / Gamma_p(s)
        let norm_shifted = norm_power_pairing(&phi)
            .unwrap()
            .value
            .subst_monomial(&rational_p_pow(pr, 1), 1)
            .unwrap();
        let quotient = norm_shifted.div(&gamma_p(pr, 1)).unwrap();
        assert!(got.eq_exact(&quotient));
    }

    #[test]
    fn riesz_at_t_one_is_delta() {
        let pr = p(2);
        let phi = TestFunction::term(
            CycScalar::from_ratio(pr, 3, 2),
            Point::from_ratios(pr, &[(1, 4)]),
            Point::zero(pr, 1),
            1,
        )
        .unwrap()
        .add(&TestFunction::chi(pr, 1, -1))
        .unwrap();
        assert!(riesz_at_zero_is_delta(&phi).unwrap());
    }

    #[test]
    fn fourier_riesz_transform_identity() {
        let pr = p(3);
        let phi = TestFunction::term(
            CycScalar::one(pr),
            Point::from_ratios(pr, &[(2, 3)]),
            Point::from_integers(pr, &[1]),
            1,
        )
        .unwrap()
        .add(&TestFunction::chi(pr, 1, 0).scale_cyc(&CycScalar::from_integer(pr, 2)))
        .unwrap();
        let report = fourier_riesz_identity(&phi).unwrap();
        assert!(report.equal);
    }

    #[test]
    fn elliptic_taibleson_identity_linear_symbol() {
        // f = xi, n = d = 1: both sides (1-p^{-1})/(1-p^{-1}t) at phi = chi_0
        let pr = p(5);
        let f = IntPolynomial::coordinate(1, 0);
        let symbol = EllipticSymbol::new(f, pr, TreeBudget::default()).unwrap();
        let phi = TestFunction::chi(pr, 1, 0);
        let report = elliptic_equals_taibleson(&symbol, &phi).unwrap();
        assert!(report.equal);
        assert!(report.lhs.eq_exact(symbol.zeta().value()));
    }

    #[test]
    fn elliptic_taibleson_identity_quadratic() {
        let pr = p(3);
        let f = IntPolynomial::from_coeffs(2, &[(1, &[2, 0]), (9, &[0, 2])]).unwrap();
        let symbol = EllipticSymbol::new(f, pr, TreeBudget::default()).unwrap();
        for r in -2i64..=2 {
            let phi = TestFunction::chi(pr, 2, r);
            let report = elliptic_equals_taibleson(&symbol, &phi).unwrap();
            assert!(report.equal, "chi_{r}");
        }
        // and on a combination
        let phi = TestFunction::chi(pr, 2, -1)
            .scale_cyc(&CycScalar::from_ratio(pr, 2, 7))
            .add(&TestFunction::chi(pr, 2, 1))
            .unwrap();
        assert!(elliptic_equals_taibleson(&symbol, &phi).unwrap().equal);
        // zero input: both sides vanish
        let zero = TestFunction::zero(pr, 2);
        let report = elliptic_equals_taibleson(&symbol, &zero).unwrap();
        assert!(report.equal && report.lhs.is_zero());
    }

    #[test]
    fn non_w_input_rejected() {
        let pr = p(3);
        let f = IntPolynomial::coordinate(1, 0);
        let symbol = EllipticSymbol::new(f, pr, TreeBudget::default()).unwrap();
        let shifted = TestFunction::term(
            CycScalar::one(pr),
            Point::zero(pr, 1),
            Point::from_integers(pr, &[1]),
            1,
        )
        .unwrap();
        assert!(matches!(
            elliptic_equals_taibleson(&symbol, &shifted),
            Err(Error::NotInW)
        ));
    }

    use crate::cyclotomic::CycScalar;
}
