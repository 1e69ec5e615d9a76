//! Laurent polynomials and rational functions in `t = p^{-s}` with exact
//! cyclotomic coefficients.
//!
//! The rationality results for local zeta functions guarantee that every
//! distribution pairing in this crate is such a rational function; keeping
//! them exact makes identities like the Gamma functional equation or the
//! radial-kernel comparison decidable by cross multiplication.

use crate::cyclotomic::CycScalar;
use crate::prime::Prime;
use crate::{Error, Result};
use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A Laurent polynomial `sum_e c_e t^e`, sparse over exponents of either
/// sign, with cyclotomic coefficients (rationals embed at level 0).
#[derive(Clone, PartialEq, Debug)]
pub struct LaurentPoly {
    prime: Prime,
    coeffs: BTreeMap<i64, CycScalar>,
}

impl LaurentPoly {
    pub fn zero(prime: Prime) -> Self {
        LaurentPoly {
            prime,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(prime: Prime) -> Self {
        Self::monomial(CycScalar::one(prime), 0)
    }

    pub fn constant(c: CycScalar) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: CycScalar, exp: i64) -> Self {
        let prime = c.prime();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        LaurentPoly { prime, coeffs }
    }

    pub fn from_rational_terms(prime: Prime, terms: &[(i64, BigRational)]) -> Self {
        let mut out = Self::zero(prime);
        for (e, c) in terms {
            out = out.add(&Self::monomial(
                CycScalar::from_rational(prime, c.clone()),
                *e,
            ));
        }
        out
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &CycScalar)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, e: i64) -> CycScalar {
        self.coeffs
            .get(&e)
            .cloned()
            .unwrap_or_else(|| CycScalar::zero(self.prime))
    }

    fn insert(&mut self, e: i64, c: CycScalar) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(e) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.coeffs {
            out.insert(e, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &LaurentPoly) -> LaurentPoly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            prime: self.prime,
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, c.neg())).collect(),
        }
    }

    pub fn mul(&self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.prime);
        for (&ea, ca) in &self.coeffs {
            for (&eb, cb) in &rhs.coeffs {
                out.insert(ea + eb, ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &CycScalar) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero(self.prime);
        }
        LaurentPoly {
            prime: self.prime,
            coeffs: self.coeffs.iter().map(|(&e, k)| (e, k.mul(c))).collect(),
        }
    }

    pub fn shift(&self, by: i64) -> LaurentPoly {
        LaurentPoly {
            prime: self.prime,
            coeffs: self
                .coeffs
                .iter()
                .map(|(&e, c)| (e + by, c.clone()))
                .collect(),
        }
    }

    /// Substitute `t -> c t^k` (`k != 0`).
    pub fn subst_monomial(&self, c: &BigRational, k: i64) -> LaurentPoly {
        assert!(k != 0, "degenerate substitution");
        assert!(!c.is_zero(), "degenerate substitution");
        let mut out = LaurentPoly::zero(self.prime);
        for (&e, coeff) in &self.coeffs {
            let factor = rational_pow(c, e);
            out.insert(e * k, coeff.scale(&factor));
        }
        out
    }

    /// Exact evaluation at a rational value of `t`.
    pub fn eval_rational(&self, t: &BigRational) -> CycScalar {
        let mut acc = CycScalar::zero(self.prime);
        for (&e, c) in &self.coeffs {
            acc = acc.add(&c.scale(&rational_pow(t, e)));
        }
        acc
    }

    /// `true` when every coefficient is rational (level 0).
    pub fn is_rational(&self) -> bool {
        self.coeffs.values().all(|c| c.is_rational())
    }

    /// Dense rational coefficient vector of the polynomial part after
    /// clearing the `t`-shift: returns `(shift, coeffs)` with
    /// `self = t^shift * sum_i coeffs[i] t^i`. `None` when a coefficient is
    /// genuinely cyclotomic.
    pub fn to_rational_poly(&self) -> Option<(i64, Vec<BigRational>)> {
        if !self.is_rational() {
            return None;
        }
        if self.coeffs.is_empty() {
            return Some((0, Vec::new()));
        }
        let lo = self.min_exp().unwrap();
        let hi = self.max_exp().unwrap();
        let mut v = alloc::vec![BigRational::zero(); (hi - lo + 1) as usize];
        for (&e, c) in &self.coeffs {
            v[(e - lo) as usize] = c.as_rational().unwrap();
        }
        Some((lo, v))
    }

    fn from_rational_poly(prime: Prime, shift: i64, v: &[BigRational]) -> LaurentPoly {
        let mut out = LaurentPoly::zero(prime);
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out.insert(shift + i as i64, CycScalar::from_rational(prime, c.clone()));
            }
        }
        out
    }

    /// Whether the Laurent polynomial vanishes at `t = p^{a/b}` (`b >= 1`,
    /// `gcd(a,b) = 1`), decided exactly: `x^b - p^a` is the minimal
    /// polynomial of `p^{a/b}`, so vanishing is divisibility.
    pub fn vanishes_at_p_power(&self, a: i64, b: u32) -> Result<bool> {
        if self.is_zero() {
            return Ok(true);
        }
        let (_, poly) = self.to_rational_poly().ok_or_else(|| {
            Error::InvalidInput("pole check requires rational coefficients".to_string())
        })?;
        // minimal polynomial x^b - p^a over Q (scaled to clear denominators)
        let mut min_poly = alloc::vec![BigRational::zero(); b as usize + 1];
        min_poly[b as usize] = BigRational::one();
        min_poly[0] = -crate::scalar::rational_p_pow(self.prime, a);
        let rem = poly_rem(&poly, &min_poly);
        Ok(rem.iter().all(|c| c.is_zero()))
    }
}

fn rational_pow(c: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        c.pow(e as i32)
    } else {
        c.pow(e as i32) // BigRational::pow supports negative exponents
    }
}

fn poly_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut rem: Vec<BigRational> = a.to_vec();
    let db = b.len() - 1;
    let lead = &b[db];
    while rem.len() > db {
        let da = rem.len() - 1;
        let q = rem[da].clone() / lead;
        if !q.is_zero() {
            for j in 0..=db {
                let t = &q * &b[j];
                rem[da - db + j] -= t;
            }
        }
        rem.pop();
        while rem.last().map(|c| c.is_zero()).unwrap_or(false) {
            rem.pop();
        }
        if rem.is_empty() {
            break;
        }
    }
    rem
}

fn poly_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r0: Vec<BigRational> = a.to_vec();
    let mut r1: Vec<BigRational> = b.to_vec();
    strip(&mut r0);
    strip(&mut r1);
    while !r1.is_empty() {
        let r = poly_rem(&r0, &r1);
        r0 = r1;
        r1 = r;
        strip(&mut r1);
    }
    // normalize monic
    if let Some(lead) = r0.last().cloned() {
        for c in &mut r0 {
            *c /= &lead;
        }
    }
    r0
}

fn poly_div_exact(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    // a = q b exactly
    let mut rem: Vec<BigRational> = a.to_vec();
    let db = b.len() - 1;
    let lead = &b[db];
    let mut q = alloc::vec![BigRational::zero(); rem.len().saturating_sub(db)];
    while rem.len() > db {
        let da = rem.len() - 1;
        let c = rem[da].clone() / lead;
        q[da - db] = c.clone();
        for j in 0..=db {
            let t = &c * &b[j];
            rem[da - db + j] -= t;
        }
        rem.pop();
        while rem.last().map(|x| x.is_zero()).unwrap_or(false) {
            rem.pop();
        }
        if rem.is_empty() {
            break;
        }
    }
    debug_assert!(rem.is_empty(), "inexact polynomial division");
    q
}

fn strip(v: &mut Vec<BigRational>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

/// An exact rational function of `t = p^{-s}`: the value domain of Igusa
/// zeta functions, Gamma factors and Riesz pairings.
#[derive(Clone, Debug)]
pub struct LaurentRational {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl LaurentRational {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".to_string()));
        }
        let mut out = LaurentRational { num, den };
        out.normalize();
        Ok(out)
    }

    pub fn zero(prime: Prime) -> Self {
        LaurentRational {
            num: LaurentPoly::zero(prime),
            den: LaurentPoly::one(prime),
        }
    }

    pub fn one(prime: Prime) -> Self {
        LaurentRational {
            num: LaurentPoly::one(prime),
            den: LaurentPoly::one(prime),
        }
    }

    pub fn from_poly(num: LaurentPoly) -> Self {
        let prime = num.prime();
        LaurentRational {
            num,
            den: LaurentPoly::one(prime),
        }
    }

    pub fn constant_rational(prime: Prime, c: BigRational) -> Self {
        Self::from_poly(LaurentPoly::constant(CycScalar::from_rational(prime, c)))
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.num.prime()
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Canonical shape: the denominator is a true polynomial with nonzero
    /// constant term, monic in its top degree; rational num/den pairs are
    /// additionally reduced by their polynomial gcd.
    fn normalize(&mut self) {
        let prime = self.prime();
        // clear the t-shift of the denominator
        let dshift = self.den.min_exp().unwrap_or(0);
        if dshift != 0 {
            self.den = self.den.shift(-dshift);
            self.num = self.num.shift(-dshift);
        }
        if self.num.is_zero() {
            self.den = LaurentPoly::one(prime);
            return;
        }
        // gcd-reduce the rational-coefficient case
        if self.num.is_rational() && self.den.is_rational() {
            let (ns, np) = self.num.to_rational_poly().unwrap();
            let (ds, dp) = self.den.to_rational_poly().unwrap();
            debug_assert_eq!(ds, 0);
            let g = poly_gcd(&np, &dp);
            if g.len() > 1 {
                let nq = poly_div_exact(&np, &g);
                let dq = poly_div_exact(&dp, &g);
                self.num = LaurentPoly::from_rational_poly(prime, ns, &nq);
                self.den = LaurentPoly::from_rational_poly(prime, 0, &dq);
                let dshift = self.den.min_exp().unwrap_or(0);
                if dshift != 0 {
                    self.den = self.den.shift(-dshift);
                    self.num = self.num.shift(-dshift);
                }
            }
        }
        // monic denominator at top degree
        let top = self.den.max_exp().unwrap();
        let lead = self.den.coeff(top);
        if !lead.is_one() {
            let inv = lead.inv().expect("nonzero leading coefficient");
            self.den = self.den.scale(&inv);
            self.num = self.num.scale(&inv);
        }
    }

    pub fn add(&self, rhs: &LaurentRational) -> Result<LaurentRational> {
        LaurentRational::new(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }

    pub fn sub(&self, rhs: &LaurentRational) -> Result<LaurentRational> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> LaurentRational {
        LaurentRational {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, rhs: &LaurentRational) -> Result<LaurentRational> {
        LaurentRational::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    pub fn div(&self, rhs: &LaurentRational) -> Result<LaurentRational> {
        if rhs.is_zero() {
            return Err(Error::InvalidInput("division by zero".to_string()));
        }
        LaurentRational::new(self.num.mul(&rhs.den), self.den.mul(&rhs.num))
    }

    pub fn scale_rational(&self, c: &BigRational) -> LaurentRational {
        LaurentRational {
            num: self
                .num
                .scale(&CycScalar::from_rational(self.prime(), c.clone())),
            den: self.den.clone(),
        }
    }

    /// Exact equality as rational functions, by cross multiplication.
    pub fn eq_exact(&self, rhs: &LaurentRational) -> bool {
        self.num.mul(&rhs.den) == rhs.num.mul(&self.den)
    }

    /// Substitute `t -> c t^k` (`k != 0`).
    pub fn subst_monomial(&self, c: &BigRational, k: i64) -> Result<LaurentRational> {
        LaurentRational::new(self.num.subst_monomial(c, k), self.den.subst_monomial(c, k))
    }

    /// Exact evaluation at rational `t`; `None` if `t` is a pole of the
    /// normalized form.
    pub fn eval_rational(&self, t: &BigRational) -> Option<CycScalar> {
        let d = self.den.eval_rational(t);
        if d.is_zero() {
            return None;
        }
        let n = self.num.eval_rational(t);
        Some(n.mul(&d.inv().unwrap()))
    }

    /// Does the (normalized) denominator vanish at `t = p^{a/b}`?
    pub fn den_vanishes_at_p_power(&self, a: i64, b: u32) -> Result<bool> {
        self.den.vanishes_at_p_power(a, b)
    }

    pub fn num_vanishes_at_p_power(&self, a: i64, b: u32) -> Result<bool> {
        self.num.vanishes_at_p_power(a, b)
    }
}

impl PartialEq for LaurentRational {
    fn eq(&self, other: &Self) -> bool {
        self.eq_exact(other)
    }
}

impl core::fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (&e, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if e == 0 {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*t^{e}")?;
            }
        }
        Ok(())
    }
}

impl core::fmt::Display for LaurentRational {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "[{}] / [{}]", self.num, self.den)
    }
}
