//! The Bruhat-Schwartz space `S(Q_p^n)` as an exact, Fourier-closed algebra
//! of character-twisted ball indicators.
//!
//! A term denotes `x -> coeff * Psi(twist . x) * 1_{ball}(x)`. The Fourier
//! transform of a term is again a term:
//!
//! `F[Psi(b.x) 1_{a+(p^r Zp)^n}](xi) = p^{-rn} Psi(a.b) Psi(-a.xi) 1_{b+(p^{-r} Zp)^n}(xi)`
//!
//! so the whole space is closed under `F`, with exact cyclotomic
//! coefficients throughout.

use crate::ball::Ball;
use crate::cyclotomic::CycScalar;
use crate::point::Point;
use crate::prime::Prime;
use crate::scalar::{rational_p_pow, Valuation};
use crate::{Error, Result};
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use num_rational::BigRational;
use num_traits::Zero;

/// Hard cap on the number of terms a canonicalization may produce.
/// Refinement to a common scale is exponential in the scale spread, so wide
/// spreads must fail loudly instead of allocating forever.
pub const CANONICAL_TERM_BUDGET: u128 = 200_000;

/// One summand `coeff * Psi(twist . x) * 1_{ball}(x)`.
///
/// The twist is stored canonically modulo the dual lattice
/// `(p^{-r} Z_p)^n` of the ball; the difference is folded into the
/// coefficient, so equal functions get equal term lists.
#[derive(Clone, PartialEq, Debug)]
pub struct Term {
    coeff: CycScalar,
    twist: Point,
    ball: Ball,
}

impl Term {
    pub fn new(coeff: CycScalar, twist: Point, ball: Ball) -> Result<Term> {
        ball.prime().same(twist.prime())?;
        if ball.dim() != twist.dim() {
            return Err(Error::DimensionMismatch {
                expected: ball.dim(),
                got: twist.dim(),
            });
        }
        let canonical_twist = twist.reduce_mod(-ball.scale());
        let delta = twist.sub(&canonical_twist)?;
        let adjusted = if delta.is_zero() {
            coeff
        } else {
            let phase = CycScalar::psi(&delta.dot(ball.center())?);
            coeff.mul(&phase)
        };
        Ok(Term {
            coeff: adjusted,
            twist: canonical_twist,
            ball,
        })
    }

    pub fn coeff(&self) -> &CycScalar {
        &self.coeff
    }

    pub fn twist(&self) -> &Point {
        &self.twist
    }

    pub fn ball(&self) -> &Ball {
        &self.ball
    }

    /// Largest `d >= 0` such that the twist has a coordinate of valuation
    /// `-d`; the character `Psi(twist . x)` is constant on cosets of
    /// `(p^d Z_p)^n` and on no coarser lattice.
    pub fn twist_depth(&self) -> i64 {
        match self.twist.min_valuation() {
            Valuation::Infinite => 0,
            Valuation::Finite(v) => (-v).max(0),
        }
    }

    fn sort_key(&self) -> (i64, Vec<BigRational>, Vec<BigRational>) {
        (
            self.ball.scale(),
            self.ball.center().coords().to_vec(),
            self.twist.coords().to_vec(),
        )
    }

    /// Exact value of the term at `x`.
    pub fn evaluate(&self, x: &Point) -> Result<CycScalar> {
        if !self.ball.contains(x) {
            return Ok(CycScalar::zero(self.ball.prime()));
        }
        Ok(self.coeff.mul(&CycScalar::psi(&self.twist.dot(x)?)))
    }

    /// Split into the `p^{(R-r)n}` sub-terms at the finer scale `R`.
    fn refine_to(&self, target_scale: i64) -> Result<Vec<Term>> {
        debug_assert!(target_scale >= self.ball.scale());
        let mut balls = alloc::vec![self.ball.clone()];
        for _ in self.ball.scale()..target_scale {
            let mut next = Vec::with_capacity(balls.len() * 2);
            for b in balls {
                next.extend(b.children());
            }
            balls = next;
        }
        balls
            .into_iter()
            .map(|b| Term::new(self.coeff.clone(), self.twist.clone(), b))
            .collect()
    }
}

/// A Bruhat-Schwartz function: a finite sum of twisted ball indicators.
///
/// Terms are kept "weakly canonical" (twists reduced, like terms merged,
/// zero coefficients dropped); supports may still overlap. The fully
/// disjoint form is produced on demand by [`TestFunction::canonical`].
#[derive(Clone, Debug)]
pub struct TestFunction {
    prime: Prime,
    dim: usize,
    terms: Vec<Term>,
}

impl TestFunction {
    pub fn zero(prime: Prime, dim: usize) -> Self {
        TestFunction {
            prime,
            dim,
            terms: Vec::new(),
        }
    }

    pub fn from_terms(prime: Prime, dim: usize, terms: Vec<Term>) -> Result<Self> {
        for t in &terms {
            t.ball.prime().same(prime)?;
            if t.ball.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: t.ball.dim(),
                });
            }
        }
        let mut f = TestFunction { prime, dim, terms };
        f.merge_like_terms();
        Ok(f)
    }

    /// `chi_r`, the indicator of the polydisc `(p^r Z_p)^n`.
    pub fn chi(prime: Prime, dim: usize, r: i64) -> Self {
        let ball = Ball::centered(prime, dim, r);
        TestFunction {
            prime,
            dim,
            terms: alloc::vec![Term {
                coeff: CycScalar::one(prime),
                twist: Point::zero(prime, dim),
                ball,
            }],
        }
    }

    /// Indicator of an arbitrary ball.
    pub fn indicator(ball: &Ball) -> Self {
        TestFunction {
            prime: ball.prime(),
            dim: ball.dim(),
            terms: alloc::vec![Term {
                coeff: CycScalar::one(ball.prime()),
                twist: Point::zero(ball.prime(), ball.dim()),
                ball: ball.clone(),
            }],
        }
    }

    /// Single-term constructor.
    pub fn term(coeff: CycScalar, twist: Point, center: Point, scale: i64) -> Result<Self> {
        let prime = center.prime();
        let dim = center.dim();
        let t = Term::new(coeff, twist, Ball::new(center, scale))?;
        TestFunction::from_terms(prime, dim, alloc::vec![t])
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.prime
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero_repr(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_compatible(&self, other: &TestFunction) -> Result<()> {
        self.prime.same(other.prime)?;
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(())
    }

    fn merge_like_terms(&mut self) {
        if self.terms.is_empty() {
            return;
        }
        self.terms.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        let mut merged: Vec<Term> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            if let Some(last) = merged.last_mut() {
                if last.ball == t.ball && last.twist == t.twist {
                    last.coeff = last.coeff.add(&t.coeff);
                    continue;
                }
            }
            merged.push(t);
        }
        merged.retain(|t| !t.coeff.is_zero());
        self.terms = merged;
    }

    pub fn add(&self, rhs: &TestFunction) -> Result<TestFunction> {
        self.check_compatible(rhs)?;
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        TestFunction::from_terms(self.prime, self.dim, terms)
    }

    pub fn sub(&self, rhs: &TestFunction) -> Result<TestFunction> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> TestFunction {
        self.scale_cyc(&CycScalar::from_integer(self.prime, -1))
    }

    pub fn scale_cyc(&self, c: &CycScalar) -> TestFunction {
        if c.is_zero() {
            return TestFunction::zero(self.prime, self.dim);
        }
        TestFunction {
            prime: self.prime,
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff.mul(c),
                    twist: t.twist.clone(),
                    ball: t.ball.clone(),
                })
                .collect(),
        }
    }

    pub fn scale_rational(&self, q: &BigRational) -> TestFunction {
        self.scale_cyc(&CycScalar::from_rational(self.prime, q.clone()))
    }

    /// Exact pointwise value.
    pub fn evaluate(&self, x: &Point) -> Result<CycScalar> {
        self.prime.same(x.prime())?;
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.dim(),
            });
        }
        let mut acc = CycScalar::zero(self.prime);
        for t in &self.terms {
            acc = acc.add(&t.evaluate(x)?);
        }
        Ok(acc)
    }

    /// Exact Haar integral. A twisted term integrates to zero unless the
    /// canonical twist vanishes, in which case it contributes
    /// `coeff * p^{-rn}`.
    pub fn integrate(&self) -> CycScalar {
        let mut acc = CycScalar::zero(self.prime);
        for t in &self.terms {
            if t.twist.is_zero() {
                acc = acc.add(&t.coeff.scale(&t.ball.measure()));
            }
        }
        acc
    }

    /// Exact Fourier transform (`Forward`: kernel `Psi(-x.xi)`).
    pub fn fourier(&self, direction: FourierDirection) -> Result<TestFunction> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let measure = t.ball.measure();
            let a = t.ball.center();
            let b = &t.twist;
            let phase = CycScalar::psi(&a.dot(b)?);
            let coeff = t.coeff.scale(&measure).mul(&phase);
            let (twist, center) = match direction {
                FourierDirection::Forward => (a.neg(), b.clone()),
                FourierDirection::Inverse => (a.clone(), b.neg()),
            };
            terms.push(Term::new(coeff, twist, Ball::new(center, -t.ball.scale()))?);
        }
        TestFunction::from_terms(self.prime, self.dim, terms)
    }

    /// Pointwise product; exact because `Psi(b.x) Psi(b'.x) = Psi((b+b').x)`
    /// and ball intersections are empty or the smaller ball.
    pub fn product(&self, rhs: &TestFunction) -> Result<TestFunction> {
        self.check_compatible(rhs)?;
        let mut terms = Vec::new();
        for s in &self.terms {
            for t in &rhs.terms {
                let Some(ball) = s.ball.intersect(&t.ball) else {
                    continue;
                };
                let twist = s.twist.add(&t.twist)?;
                terms.push(Term::new(s.coeff.mul(&t.coeff), twist, ball)?);
            }
        }
        TestFunction::from_terms(self.prime, self.dim, terms)
    }

    /// Convolution `(phi * psi)(x) = int phi(x-y) psi(y) dy`, computed
    /// through the transform side where it is a pointwise product.
    pub fn convolve(&self, rhs: &TestFunction) -> Result<TestFunction> {
        let a = self.fourier(FourierDirection::Forward)?;
        let b = rhs.fourier(FourierDirection::Forward)?;
        a.product(&b)?.fourier(FourierDirection::Inverse)
    }

    /// `x -> phi(x + delta)`.
    pub fn translate(&self, delta: &Point) -> Result<TestFunction> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let phase = CycScalar::psi(&t.twist.dot(delta)?);
            terms.push(Term::new(
                t.coeff.mul(&phase),
                t.twist.clone(),
                t.ball.translate(&delta.neg())?,
            )?);
        }
        TestFunction::from_terms(self.prime, self.dim, terms)
    }

    /// `x -> phi(-x)`.
    pub fn reflect(&self) -> Result<TestFunction> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            terms.push(Term::new(t.coeff.clone(), t.twist.neg(), t.ball.neg())?);
        }
        TestFunction::from_terms(self.prime, self.dim, terms)
    }

    /// Complex conjugate of the function values.
    pub fn conj(&self) -> Result<TestFunction> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            terms.push(Term::new(t.coeff.conj(), t.twist.neg(), t.ball.clone())?);
        }
        TestFunction::from_terms(self.prime, self.dim, terms)
    }

    /// Restriction `phi * 1_B`.
    pub fn restrict(&self, ball: &Ball) -> Result<TestFunction> {
        self.product(&TestFunction::indicator(ball))
    }

    /// Largest ball scale among terms, if any.
    pub fn max_scale(&self) -> Option<i64> {
        self.terms.iter().map(|t| t.ball.scale()).max()
    }

    pub fn min_scale(&self) -> Option<i64> {
        self.terms.iter().map(|t| t.ball.scale()).min()
    }

    /// `E` such that the support is contained in `||x|| <= p^E`.
    pub fn support_exponent(&self) -> Option<i64> {
        self.terms
            .iter()
            .map(|t| {
                let center_norm = match t.ball.center().min_valuation() {
                    Valuation::Infinite => i64::MIN,
                    Valuation::Finite(v) => -v,
                };
                center_norm.max(-t.ball.scale())
            })
            .max()
    }

    /// Coarsest lattice `(p^U Z_p)^n` on which every term is literally
    /// invariant; an upper bound for the exponent of local constancy.
    pub fn structure_depth(&self) -> i64 {
        self.terms
            .iter()
            .map(|t| t.ball.scale().max(t.twist_depth()))
            .max()
            .unwrap_or(0)
            .max(0)
    }

    /// Fully canonical form: all terms refined to a common scale, merged,
    /// supports pairwise disjoint, then greedily coarsened back.
    pub fn canonical(&self) -> Result<TestFunction> {
        if self.terms.is_empty() {
            return Ok(self.clone());
        }
        let target = self.max_scale().unwrap();
        let mut budget: u128 = 0;
        for t in &self.terms {
            let splits = (target - t.ball.scale()) as u32 * self.dim as u32;
            let count = (self.prime.get() as u128)
                .checked_pow(splits)
                .unwrap_or(u128::MAX);
            budget = budget.saturating_add(count);
            if budget > CANONICAL_TERM_BUDGET {
                return Err(Error::CanonicalBudget {
                    would_need: budget,
                    budget: CANONICAL_TERM_BUDGET,
                });
            }
        }
        let mut terms = Vec::new();
        for t in &self.terms {
            terms.extend(t.refine_to(target)?);
        }
        let mut f = TestFunction::from_terms(self.prime, self.dim, terms)?;
        f.coarsen()?;
        Ok(f)
    }

    /// Merge complete sibling families that reassemble into a single
    /// parent-scale term. Runs level by level until nothing changes.
    fn coarsen(&mut self) -> Result<()> {
        loop {
            let Some(scale) = self.max_scale() else {
                return Ok(());
            };
            let mut changed = false;
            let (fine, mut keep): (Vec<Term>, Vec<Term>) = core::mem::take(&mut self.terms)
                .into_iter()
                .partition(|t| t.ball.scale() == scale);
            // group the finest terms by (parent ball, twist)
            let mut families: BTreeMap<(Vec<BigRational>, Vec<BigRational>), Vec<Term>> =
                BTreeMap::new();
            for t in fine {
                let parent_center = t.ball.center().reduce_mod(scale - 1);
                families
                    .entry((parent_center.coords().to_vec(), t.twist.coords().to_vec()))
                    .or_default()
                    .push(t);
            }
            let family_size = (self.prime.get() as usize).pow(self.dim as u32);
            for ((parent_coords, _), family) in families {
                if family.len() != family_size {
                    keep.extend(family);
                    continue;
                }
                match self.try_coarsen_family(&family, &parent_coords)? {
                    Some(parent) => {
                        keep.push(parent);
                        changed = true;
                    }
                    None => keep.extend(family),
                }
            }
            self.terms = keep;
            self.merge_like_terms();
            if !changed {
                return Ok(());
            }
        }
    }

    /// Try to express a complete sibling family as one parent term. The
    /// parent twist may carry one extra digit `d p^{-r}`; the coefficients
    /// must then match the induced character pattern exactly.
    fn try_coarsen_family(
        &self,
        family: &[Term],
        parent_coords: &[BigRational],
    ) -> Result<Option<Term>> {
        let scale = family[0].ball.scale();
        let child_twist = &family[0].twist;
        let step = rational_p_pow(self.prime, -scale);
        let mut digits = alloc::vec![0u64; self.dim];
        loop {
            let delta = Point::new(
                self.prime,
                digits
                    .iter()
                    .map(|&d| &step * BigRational::from_integer(d.into()))
                    .collect(),
            );
            // candidate coefficient from the first child
            let phase0 = CycScalar::psi(&delta.dot(family[0].ball.center())?);
            let c_parent = family[0].coeff.mul(&phase0.conj());
            let mut ok = true;
            for t in &family[1..] {
                let phase = CycScalar::psi(&delta.dot(t.ball.center())?);
                if c_parent.mul(&phase) != t.coeff {
                    ok = false;
                    break;
                }
            }
            if ok {
                let parent_ball =
                    Ball::new(Point::new(self.prime, parent_coords.to_vec()), scale - 1);
                let parent_twist = child_twist.add(&delta)?;
                return Ok(Some(Term::new(c_parent, parent_twist, parent_ball)?));
            }
            // next digit vector
            let mut i = 0;
            loop {
                if i == self.dim {
                    return Ok(None);
                }
                digits[i] += 1;
                if digits[i] < self.prime.get() {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }

    /// Exact equality as functions (representation independent).
    pub fn eq_fn(&self, rhs: &TestFunction) -> Result<bool> {
        self.check_compatible(rhs)?;
        self.sub(rhs)?.is_zero_fn()
    }

    /// Exact test for the zero function.
    pub fn is_zero_fn(&self) -> Result<bool> {
        if self.terms.is_empty() {
            return Ok(true);
        }
        // refining to the common scale and merging kills every term iff
        // the function vanishes (characters on a fixed ball are independent)
        Ok(self.canonical()?.terms.is_empty())
    }

    /// The exponent of local constancy `l >= 0` and the radius index
    /// `r_phi = min { r in N : phi|_{B_r(0)} = phi(0) }`.
    pub fn local_constancy_data(&self) -> Result<(i64, i64)> {
        if self.is_zero_fn()? {
            return Err(Error::ZeroFunction);
        }
        let canon = self.canonical()?;
        let structure = canon.structure_depth();
        let mut l = structure;
        'lower: while l > 0 {
            let step = rational_p_pow(self.prime, l - 1);
            let mut digits = alloc::vec![0u64; self.dim];
            digits[0] = 1; // skip the zero shift
            loop {
                let delta = Point::new(
                    self.prime,
                    digits
                        .iter()
                        .map(|&d| &step * BigRational::from_integer(d.into()))
                        .collect(),
                );
                if !canon.translate(&delta)?.eq_fn(&canon)? {
                    break 'lower;
                }
                let mut i = 0;
                loop {
                    if i == self.dim {
                        l -= 1;
                        continue 'lower;
                    }
                    digits[i] += 1;
                    if digits[i] < self.prime.get() {
                        break;
                    }
                    digits[i] = 0;
                    i += 1;
                }
            }
        }
        // r_phi by direct scan; terminates by the structure depth
        let value_at_zero = self.evaluate(&Point::zero(self.prime, self.dim))?;
        let mut r = 0i64;
        loop {
            let chi = TestFunction::chi(self.prime, self.dim, r);
            let restricted = self.product(&chi)?;
            let constant = chi.scale_cyc(&value_at_zero);
            if restricted.eq_fn(&constant)? {
                return Ok((l, r));
            }
            r += 1;
            assert!(r <= structure + 1, "r_phi scan failed to terminate");
        }
    }

    /// The unique splitting `phi = phi_L + phi_W` with
    /// `phi_W = p^{r_phi n} (int phi) chi_{r_phi}` and `int phi_L = 0`.
    pub fn decompose_lw(&self) -> Result<(TestFunction, TestFunction)> {
        if self.is_zero_fn()? {
            return Ok((
                TestFunction::zero(self.prime, self.dim),
                TestFunction::zero(self.prime, self.dim),
            ));
        }
        let (_, r_phi) = self.local_constancy_data()?;
        let total = self.integrate();
        let factor = rational_p_pow(self.prime, r_phi * self.dim as i64);
        let phi_w = TestFunction::chi(self.prime, self.dim, r_phi).scale_cyc(&total.scale(&factor));
        let phi_l = self.sub(&phi_w)?;
        Ok((phi_l, phi_w))
    }

    /// If the function lies in `W = span{chi_r}`, return it as a list of
    /// `(r, coefficient)` pairs with distinct `r`; otherwise `None`.
    pub fn as_w_combination(&self) -> Result<Option<Vec<(i64, CycScalar)>>> {
        if self.is_zero_fn()? {
            return Ok(Some(Vec::new()));
        }
        let outer = -self.support_exponent().unwrap(); // support in B_outer
        let inner = self.structure_depth(); // constant on B_{inner+1}
        let mut shell_values = Vec::new();
        for m in outer..=inner {
            // shell ||x|| = p^{-m}
            let shell = TestFunction::chi(self.prime, self.dim, m).sub(&TestFunction::chi(
                self.prime,
                self.dim,
                m + 1,
            ))?;
            let probe = Point::new(self.prime, {
                let mut c = alloc::vec![BigRational::zero(); self.dim];
                c[0] = rational_p_pow(self.prime, m);
                c
            });
            let v = self.evaluate(&probe)?;
            if !self.product(&shell)?.eq_fn(&shell.scale_cyc(&v))? {
                return Ok(None);
            }
            shell_values.push((m, v));
        }
        // deepest ball: must be constant = phi(0)
        let center_value = self.evaluate(&Point::zero(self.prime, self.dim))?;
        let chi_inner = TestFunction::chi(self.prime, self.dim, inner + 1);
        if !self
            .product(&chi_inner)?
            .eq_fn(&chi_inner.scale_cyc(&center_value))?
        {
            return Ok(None);
        }
        // assemble chi coefficients from shell values
        let mut coeffs: BTreeMap<i64, CycScalar> = BTreeMap::new();
        for (m, v) in shell_values {
            if !v.is_zero() {
                let e = coeffs
                    .entry(m)
                    .or_insert_with(|| CycScalar::zero(self.prime));
                *e = e.add(&v);
                let e2 = coeffs
                    .entry(m + 1)
                    .or_insert_with(|| CycScalar::zero(self.prime));
                *e2 = e2.sub(&v);
            }
        }
        if !center_value.is_zero() {
            let e = coeffs
                .entry(inner + 1)
                .or_insert_with(|| CycScalar::zero(self.prime));
            *e = e.add(&center_value);
        }
        coeffs.retain(|_, c| !c.is_zero());
        let combo: Vec<(i64, CycScalar)> = coeffs.into_iter().collect();
        Ok(Some(combo))
    }

    /// Build `sum_i c_i chi_{r_i}`.
    pub fn from_w_combination(
        prime: Prime,
        dim: usize,
        combo: &[(i64, CycScalar)],
    ) -> Result<TestFunction> {
        let mut f = TestFunction::zero(prime, dim);
        for (r, c) in combo {
            f = f.add(&TestFunction::chi(prime, dim, *r).scale_cyc(c))?;
        }
        Ok(f)
    }

    /// `int_{||x|| = p^{-m}} phi(x) dx`, exactly.
    pub fn shell_integral(&self, m: i64) -> Result<CycScalar> {
        let inner = self.product(&TestFunction::chi(self.prime, self.dim, m))?;
        let outer = self.product(&TestFunction::chi(self.prime, self.dim, m + 1))?;
        Ok(inner.integrate().sub(&outer.integrate()))
    }
}

/// Direction of the Fourier transform; `Forward` integrates against
/// `Psi(-x.xi)`, `Inverse` against `Psi(x.xi)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FourierDirection {
    Forward,
    Inverse,
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn zeta(pr: u64, level: u32, j: i64) -> CycScalar {
        CycScalar::root_of_unity(p(pr), level, &BigInt::from(j))
    }

    #[test]
    fn evaluate_chi() {
        let f = TestFunction::chi(p(3), 2, 0);
        let inside = Point::from_integers(p(3), &[1, 2]);
        let outside = Point::from_ratios(p(3), &[(1, 3), (0, 1)]);
        assert!(f.evaluate(&inside).unwrap().is_one());
        assert!(f.evaluate(&outside).unwrap().is_zero());
    }

    #[test]
    fn evaluate_twisted_term() {
        // Psi(b.x) 1_{Z_p^n} with b = (1/p, 0), x = (1, 0) -> zeta_p
        let pr = p(5);
        let f = TestFunction::term(
            CycScalar::one(pr),
            Point::from_ratios(pr, &[(1, 5), (0, 1)]),
            Point::zero(pr, 2),
            0,
        )
        .unwrap();
        let x = Point::from_integers(pr, &[1, 0]);
        assert_eq!(f.evaluate(&x).unwrap(), zeta(5, 1, 1));
    }

    #[test]
    fn additive_inverse_vanishes() {
        let pr = p(2);
        let f = TestFunction::term(
            CycScalar::from_integer(pr, 3),
            Point::from_ratios(pr, &[(1, 4)]),
            Point::from_integers(pr, &[1]),
            2,
        )
        .unwrap();
        let g = f.add(&f.neg()).unwrap();
        assert!(g.is_zero_fn().unwrap());
        assert!(g
            .evaluate(&Point::from_integers(pr, &[1]))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn fourier_of_chi_r() {
        // F(chi_r) = p^{-nr} chi_{-r}
        for pr in [2u64, 3, 5] {
            for n in [1usize, 2] {
                for r in -3i64..=3 {
                    let f = TestFunction::chi(p(pr), n, r);
                    let hat = f.fourier(FourierDirection::Forward).unwrap();
                    let expected = TestFunction::chi(p(pr), n, -r)
                        .scale_rational(&rational_p_pow(p(pr), -(n as i64) * r));
                    assert!(hat.eq_fn(&expected).unwrap(), "p={pr} n={n} r={r}");
                }
            }
        }
    }

    #[test]
    fn fourier_inversion_on_terms() {
        let pr = p(3);
        let f = TestFunction::term(
            zeta(3, 1, 1),
            Point::from_ratios(pr, &[(2, 9), (1, 3)]),
            Point::from_ratios(pr, &[(1, 3), (2, 1)]),
            1,
        )
        .unwrap();
        let round = f
            .fourier(FourierDirection::Forward)
            .unwrap()
            .fourier(FourierDirection::Inverse)
            .unwrap();
        assert!(round.eq_fn(&f).unwrap());
    }

    #[test]
    fn fourier_of_shifted_ball() {
        // F[1_{a+(pZ_p)^n}](xi) = p^{-n} Psi(-a.xi) 1_{(p^{-1}Z_p)^n}, a a unit
        let pr = p(3);
        let a = Point::from_integers(pr, &[1]);
        let f = TestFunction::term(CycScalar::one(pr), Point::zero(pr, 1), a.clone(), 1).unwrap();
        let hat = f.fourier(FourierDirection::Forward).unwrap();
        let expected = TestFunction::term(
            CycScalar::from_ratio(pr, 1, 3),
            a.neg(),
            Point::zero(pr, 1),
            -1,
        )
        .unwrap();
        assert!(hat.eq_fn(&expected).unwrap());
    }

    #[test]
    fn integrate_examples() {
        // int chi_r = p^{-rn}
        let f = TestFunction::chi(p(3), 2, 1);
        assert_eq!(
            f.integrate().as_rational().unwrap(),
            BigRational::new(1.into(), 9.into())
        );
        // nontrivial character over its ball integrates to zero
        let g = TestFunction::term(
            CycScalar::one(p(3)),
            Point::from_ratios(p(3), &[(1, 9), (0, 1)]),
            Point::zero(p(3), 2),
            0,
        )
        .unwrap();
        assert!(g.integrate().is_zero());
    }

    #[test]
    fn convolution_examples() {
        let pr = p(2);
        // chi_0 * chi_0 = chi_0
        let chi0 = TestFunction::chi(pr, 1, 0);
        assert!(chi0.convolve(&chi0).unwrap().eq_fn(&chi0).unwrap());
        // delta approximant: phi * p^{rn} chi_r = phi once r reaches the
        // local constancy exponent
        let phi = TestFunction::term(
            CycScalar::one(pr),
            Point::from_ratios(pr, &[(1, 4)]),
            Point::from_integers(pr, &[1]),
            1,
        )
        .unwrap();
        let (l, _) = phi.local_constancy_data().unwrap();
        let delta = TestFunction::chi(pr, 1, l).scale_rational(&rational_p_pow(pr, l));
        assert!(phi.convolve(&delta).unwrap().eq_fn(&phi).unwrap());
        // commutativity
        let psi_f = TestFunction::chi(pr, 1, -1);
        assert!(phi
            .convolve(&psi_f)
            .unwrap()
            .eq_fn(&psi_f.convolve(&phi).unwrap())
            .unwrap());
    }

    #[test]
    fn local_constancy_examples() {
        // chi_0 -> l = 0, r = 0
        let chi0 = TestFunction::chi(p(3), 1, 0);
        assert_eq!(chi0.local_constancy_data().unwrap(), (0, 0));
        // chi_{-2} -> l = 0, r = 0
        let wide = TestFunction::chi(p(3), 2, -2);
        assert_eq!(wide.local_constancy_data().unwrap(), (0, 0));
        // Psi(x/p^2) 1_{Z_p} -> l = 2
        let pr = p(3);
        let tw = TestFunction::term(
            CycScalar::one(pr),
            Point::from_ratios(pr, &[(1, 9)]),
            Point::zero(pr, 1),
            0,
        )
        .unwrap();
        let (l, r) = tw.local_constancy_data().unwrap();
        assert_eq!(l, 2);
        assert_eq!(r, 2);
    }

    #[test]
    fn coarsening_restores_chi() {
        // chi_0 written at scale 2 coarsens back to a single term
        let pr = p(2);
        let chi0 = TestFunction::chi(pr, 2, 0);
        let mut fine = Vec::new();
        for t in chi0.terms() {
            fine.extend(t.refine_to(2).unwrap());
        }
        assert_eq!(fine.len(), 16);
        let refined = TestFunction::from_terms(pr, 2, fine).unwrap();
        let canon = refined.canonical().unwrap();
        assert_eq!(canon.terms().len(), 1);
        assert!(canon.eq_fn(&chi0).unwrap());
    }

    #[test]
    fn decompose_chi0() {
        let chi0 = TestFunction::chi(p(5), 1, 0);
        let (l, w) = chi0.decompose_lw().unwrap();
        assert!(l.is_zero_fn().unwrap());
        assert!(w.eq_fn(&chi0).unwrap());
    }

    #[test]
    fn decompose_shifted_ball() {
        // phi = 1_{a + (pZ_p)^n}, a a unit direction: r_phi = 1,
        // phi_W = chi_1, int phi_L = 0
        let pr = p(3);
        let phi = TestFunction::term(
            CycScalar::one(pr),
            Point::zero(pr, 2),
            Point::from_integers(pr, &[1, 0]),
            1,
        )
        .unwrap();
        let (phi_l, phi_w) = phi.decompose_lw().unwrap();
        assert!(phi_w.eq_fn(&TestFunction::chi(pr, 2, 1)).unwrap());
        assert!(phi_l.integrate().is_zero());
        assert!(phi_l.add(&phi_w).unwrap().eq_fn(&phi).unwrap());
    }

    #[test]
    fn zero_integral_function_decomposes_trivially() {
        let pr = p(2);
        // 1_{pZ_p} - (1/p) 1_{Z_p} has zero integral
        let phi = TestFunction::chi(pr, 1, 1)
            .sub(&TestFunction::chi(pr, 1, 0).scale_rational(&BigRational::new(1.into(), 2.into())))
            .unwrap();
        assert!(phi.integrate().is_zero());
        let (phi_l, phi_w) = phi.decompose_lw().unwrap();
        assert!(phi_w.is_zero_fn().unwrap());
        assert!(phi_l.eq_fn(&phi).unwrap());
    }

    #[test]
    fn w_combination_detection() {
        let pr = p(3);
        let w = TestFunction::chi(pr, 1, 0)
            .scale_cyc(&CycScalar::from_integer(pr, 2))
            .add(&TestFunction::chi(pr, 1, -1))
            .unwrap();
        let combo = w.as_w_combination().unwrap().unwrap();
        let rebuilt = TestFunction::from_w_combination(pr, 1, &combo).unwrap();
        assert!(rebuilt.eq_fn(&w).unwrap());
        // a shifted ball is not in W
        let shifted = TestFunction::term(
            CycScalar::one(pr),
            Point::zero(pr, 1),
            Point::from_integers(pr, &[1]),
            1,
        )
        .unwrap();
        assert!(shifted.as_w_combination().unwrap().is_none());
    }

    #[test]
    fn parseval_hand_example() {
        // int |phi|^2 = int |F phi|^2 exactly
        let pr = p(3);
        let phi = TestFunction::term(
            zeta(3, 2, 1),
            Point::from_ratios(pr, &[(1, 3)]),
            Point::from_integers(pr, &[2]),
            1,
        )
        .unwrap()
        .add(&TestFunction::chi(pr, 1, 0))
        .unwrap();
        let lhs = phi.product(&phi.conj().unwrap()).unwrap().integrate();
        let hat = phi.fourier(FourierDirection::Forward).unwrap();
        let rhs = hat.product(&hat.conj().unwrap()).unwrap().integrate();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn w_space_is_fourier_invariant() {
        let pr = p(2);
        let w = TestFunction::chi(pr, 1, 2)
            .add(&TestFunction::chi(pr, 1, -1).scale_cyc(&zeta(2, 2, 1)))
            .unwrap();
        let hat = w.fourier(FourierDirection::Forward).unwrap();
        assert!(hat.as_w_combination().unwrap().is_some());
    }

    #[test]
    fn reflection_identity() {
        // F(F(phi(-.))) = phi
        let pr = p(5);
        let phi = TestFunction::term(
            CycScalar::from_ratio(pr, 2, 3),
            Point::from_ratios(pr, &[(1, 5)]),
            Point::from_integers(pr, &[3]),
            1,
        )
        .unwrap();
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
