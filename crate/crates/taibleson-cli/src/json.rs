//! JSON schemas for the file formats: test functions, polynomials,
//! rational functions of `t = p^{-s}`, and sample-point lists.
//!
//! Rationals are serialized as exact `"num/den"` strings (plain integers
//! allowed), so round trips are bit-exact.

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::str::FromStr;
use taibleson_core::{
    Ball, CycScalar, IntPolynomial, LaurentPoly, LaurentRational, Point, Prime, TestFunction,
};

pub fn rational_to_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rational_from_str(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).with_context(|| format!("bad numerator {num:?}"))?;
        let d = BigInt::from_str(den.trim()).with_context(|| format!("bad denominator {den:?}"))?;
        if d == BigInt::from(0) {
            bail!("zero denominator in {s:?}");
        }
        Ok(BigRational::new(n, d))
    } else {
        let n = BigInt::from_str(s).with_context(|| format!("bad rational {s:?}"))?;
        Ok(BigRational::from_integer(n))
    }
}

/// Decimal or fraction string to an exact rational (CLI parameters such as
/// `--alpha 0.4` must stay exact).
pub fn rational_from_decimal(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.contains('/') {
        return rational_from_str(s);
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let int_part = BigInt::from_str(if int.is_empty() { "0" } else { int })
            .with_context(|| format!("bad decimal {s:?}"))?;
        let digits = frac.trim();
        let scale = BigInt::from(10).pow(digits.len() as u32);
        let frac_part = BigInt::from_str(if digits.is_empty() { "0" } else { digits })
            .with_context(|| format!("bad decimal {s:?}"))?;
        let signed_frac = if neg { -frac_part } else { frac_part };
        Ok(BigRational::new(int_part * &scale + signed_frac, scale))
    } else {
        rational_from_str(s)
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct CycScalarJson {
    pub level: u32,
    /// dense power-basis coefficients, length `phi(p^level)`
    pub coeffs: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct TermJson {
    pub coeff: CycScalarJson,
    pub twist: Vec<String>,
    pub center: Vec<String>,
    pub scale: i64,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct TestFunctionJson {
    pub p: u64,
    pub n: usize,
    pub terms: Vec<TermJson>,
}

pub fn cyc_to_json(c: &CycScalar) -> CycScalarJson {
    CycScalarJson {
        level: c.level(),
        coeffs: c.dense_coeffs().iter().map(rational_to_string).collect(),
    }
}

pub fn cyc_from_json(prime: Prime, j: &CycScalarJson) -> Result<CycScalar> {
    let phi = prime.phi_pk(j.level) as usize;
    if j.coeffs.len() != phi {
        bail!(
            "cyclotomic coefficient vector has length {}, expected phi(p^{}) = {phi}",
            j.coeffs.len(),
            j.level
        );
    }
    let mut acc = CycScalar::zero(prime);
    let order = prime.pow(j.level);
    let _ = order;
    for (i, s) in j.coeffs.iter().enumerate() {
        let q = rational_from_str(s)?;
        let unit = CycScalar::root_of_unity(prime, j.level, &BigInt::from(i));
        acc = acc.add(&unit.scale(&q));
    }
    Ok(acc)
}

pub fn test_function_to_json(f: &TestFunction) -> TestFunctionJson {
    TestFunctionJson {
        p: f.prime().get(),
        n: f.dim(),
        terms: f
            .terms()
            .iter()
            .map(|t| TermJson {
                coeff: cyc_to_json(t.coeff()),
                twist: t.twist().coords().iter().map(rational_to_string).collect(),
                center: t
                    .ball()
                    .center()
                    .coords()
                    .iter()
                    .map(rational_to_string)
                    .collect(),
                scale: t.ball().scale(),
            })
            .collect(),
    }
}

pub fn test_function_from_json(j: &TestFunctionJson) -> Result<TestFunction> {
    let prime = Prime::new(j.p).map_err(|e| anyhow!("{e}"))?;
    let mut f = TestFunction::zero(prime, j.n);
    for (i, t) in j.terms.iter().enumerate() {
        let parse_vec = |v: &[String], what: &str| -> Result<Point> {
            if v.len() != j.n {
                bail!("term {i}: {what} has dimension {} != n = {}", v.len(), j.n);
            }
            let coords = v
                .iter()
                .map(|s| rational_from_str(s))
                .collect::<Result<Vec<_>>>()
                .with_context(|| format!("term {i}: {what}"))?;
            Ok(Point::new(prime, coords))
        };
        let twist = parse_vec(&t.twist, "twist")?;
        let center = parse_vec(&t.center, "center")?;
        let coeff = cyc_from_json(prime, &t.coeff).with_context(|| format!("term {i}: coeff"))?;
        let term = taibleson_core::Term::new(coeff, twist, Ball::new(center, t.scale))
            .map_err(|e| anyhow!("term {i}: {e}"))?;
        f = f
            .add(&TestFunction::from_terms(prime, j.n, vec![term]).map_err(|e| anyhow!("{e}"))?)
            .map_err(|e| anyhow!("{e}"))?;
    }
    Ok(f)
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct MonomialJson {
    pub c: i64,
    pub e: Vec<u32>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct PolynomialJson {
    pub p: u64,
    pub n: usize,
    pub monomials: Vec<MonomialJson>,
}

pub fn polynomial_from_json(j: &PolynomialJson) -> Result<(Prime, IntPolynomial)> {
    let prime = Prime::new(j.p).map_err(|e| anyhow!("{e}"))?;
    let poly = IntPolynomial::new(
        j.n,
        j.monomials
            .iter()
            .map(|m| (BigInt::from(m.c), m.e.clone()))
            .collect(),
    )
    .map_err(|e| anyhow!("{e}"))?;
    Ok((prime, poly))
}

pub fn polynomial_to_json(prime: Prime, f: &IntPolynomial) -> PolynomialJson {
    PolynomialJson {
        p: prime.get(),
        n: f.dim(),
        monomials: f
            .monomials()
            .iter()
            .map(|(c, e)| MonomialJson {
                c: i64::try_from(c).expect("desk-scale coefficient"),
                e: e.clone(),
            })
            .collect(),
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct LaurentRationalJson {
    pub p: u64,
    /// exponent -> rational coefficient
    pub num: BTreeMap<String, String>,
    pub den: BTreeMap<String, String>,
}

fn poly_to_map(f: &LaurentPoly) -> Result<BTreeMap<String, String>> {
    let mut m = BTreeMap::new();
    for (e, c) in f.terms() {
        let q = c
            .as_rational()
            .ok_or_else(|| anyhow!("coefficient of t^{e} is not rational"))?;
        m.insert(e.to_string(), rational_to_string(&q));
    }
    Ok(m)
}

fn poly_from_map(prime: Prime, m: &BTreeMap<String, String>) -> Result<LaurentPoly> {
    let mut terms = Vec::new();
    for (e, c) in m {
        let exp: i64 = e
            .parse()
            .with_context(|| format!("bad exponent key {e:?}"))?;
        terms.push((exp, rational_from_str(c)?));
    }
    Ok(LaurentPoly::from_rational_terms(prime, &terms))
}

pub fn laurent_rational_to_json(f: &LaurentRational) -> Result<LaurentRationalJson> {
    Ok(LaurentRationalJson {
        p: f.prime().get(),
        num: poly_to_map(f.num())?,
        den: poly_to_map(f.den())?,
    })
}

pub fn laurent_rational_from_json(j: &LaurentRationalJson) -> Result<LaurentRational> {
    let prime = Prime::new(j.p).map_err(|e| anyhow!("{e}"))?;
    LaurentRational::new(poly_from_map(prime, &j.num)?, poly_from_map(prime, &j.den)?)
        .map_err(|e| anyhow!("{e}"))
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct PointsJson {
    pub p: u64,
    pub n: usize,
    pub points: Vec<Vec<String>>,
}

pub fn points_from_json(j: &PointsJson) -> Result<(Prime, Vec<Point>)> {
    let prime = Prime::new(j.p).map_err(|e| anyhow!("{e}"))?;
    let mut out = Vec::with_capacity(j.points.len());
    for (i, coords) in j.points.iter().enumerate() {
        if coords.len() != j.n {
            bail!("point {i} has dimension {} != n = {}", coords.len(), j.n);
        }
        let cs = coords
            .iter()
            .map(|s| rational_from_str(s))
            .collect::<Result<Vec<_>>>()
            .with_context(|| format!("point {i}"))?;
        out.push(Point::new(prime, cs));
    }
    Ok((prime, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use taibleson_core::CycScalar;

    #[test]
    fn rational_strings_round_trip() {
        for s in ["3", "-7/5", "0", "22/7"] {
            let q = rational_from_str(s).unwrap();
            assert_eq!(rational_from_str(&rational_to_string(&q)).unwrap(), q);
        }
        assert!(rational_from_str("1/0").is_err());
        assert_eq!(
            rational_from_decimal("0.4").unwrap(),
            BigRational::new(2.into(), 5.into())
        );
        assert_eq!(
            rational_from_decimal("-2.25").unwrap(),
            BigRational::new((-9).into(), 4.into())
        );
    }

    #[test]
    fn test_function_round_trip() {
        let pr = Prime::new(3).unwrap();
        let f = TestFunction::term(
            CycScalar::root_of_unity(pr, 2, &BigInt::from(4)),
            Point::from_ratios(pr, &[(1, 3), (0, 1)]),
            Point::from_integers(pr, &[2, 1]),
            1,
        )
        .unwrap();
        let j = test_function_to_json(&f);
        let back = test_function_from_json(&j).unwrap();
        assert!(back.eq_fn(&f).unwrap());
        // serialized twice gives identical bytes (canonical form)
        let s1 = serde_json::to_string(&j).unwrap();
        let s2 = serde_json::to_string(&test_function_to_json(&back)).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn laurent_round_trip() {
        let pr = Prime::new(5).unwrap();
        let f = LaurentRational::new(
            LaurentPoly::from_rational_terms(
                pr,
                &[
                    (-2, BigRational::new(3.into(), 4.into())),
                    (1, BigRational::one()),
                ],
            ),
            LaurentPoly::from_rational_terms(
                pr,
                &[
                    (0, BigRational::one()),
                    (2, BigRational::new((-1).into(), 5.into())),
                ],
            ),
        )
        .unwrap();
        let j = laurent_rational_to_json(&f).unwrap();
        let back = laurent_rational_from_json(&j).unwrap();
        assert!(back.eq_exact(&f));
    }
}
