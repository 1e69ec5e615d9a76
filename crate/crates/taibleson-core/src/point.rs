use crate::prime::Prime;
use crate::scalar::{PAbs, PadicScalar, Valuation};
use crate::{Error, Result};
use alloc::vec::Vec;
use num_rational::BigRational;
use num_traits::Zero;

/// A point of `Q_p^n` with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Point {
    prime: Prime,
    coords: Vec<BigRational>,
}

impl Point {
    pub fn new(prime: Prime, coords: Vec<BigRational>) -> Self {
        assert!(!coords.is_empty(), "points need dimension >= 1");
        Point { prime, coords }
    }

    pub fn zero(prime: Prime, dim: usize) -> Self {
        Point::new(prime, alloc::vec![BigRational::zero(); dim])
    }

    pub fn from_integers(prime: Prime, coords: &[i64]) -> Self {
        Point::new(
            prime,
            coords
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn from_ratios(prime: Prime, coords: &[(i64, i64)]) -> Self {
        Point::new(
            prime,
            coords
                .iter()
                .map(|&(n, d)| BigRational::new(n.into(), d.into()))
                .collect(),
        )
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.prime
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> PadicScalar {
        PadicScalar::new(self.prime, self.coords[i].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    fn check_compatible(&self, other: &Point) -> Result<()> {
        self.prime.same(other.prime)?;
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }

    /// Sup-norm `||x||_p = max_i |x_i|_p`.
    pub fn sup_norm(&self) -> PAbs {
        self.coords
            .iter()
            .map(|c| PAbs::from_valuation(crate::scalar::rational_valuation(self.prime, c)))
            .max()
            .unwrap_or(PAbs::Zero)
    }

    /// `min_i v(x_i)`, so `||x||_p = p^{-min_v}`.
    pub fn min_valuation(&self) -> Valuation {
        self.coords
            .iter()
            .map(|c| crate::scalar::rational_valuation(self.prime, c))
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    /// Bilinear pairing `x . y = sum_i x_i y_i`.
    pub fn dot(&self, other: &Point) -> Result<PadicScalar> {
        self.check_compatible(other)?;
        let mut acc = BigRational::zero();
        for (a, b) in self.coords.iter().zip(other.coords.iter()) {
            acc += a * b;
        }
        Ok(PadicScalar::new(self.prime, acc))
    }

    pub fn add(&self, other: &Point) -> Result<Point> {
        self.check_compatible(other)?;
        Ok(Point::new(
            self.prime,
            self.coords
                .iter()
                .zip(other.coords.iter())
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }

    pub fn sub(&self, other: &Point) -> Result<Point> {
        self.check_compatible(other)?;
        Ok(Point::new(
            self.prime,
            self.coords
                .iter()
                .zip(other.coords.iter())
                .map(|(a, b)| a - b)
                .collect(),
        ))
    }

    pub fn neg(&self) -> Point {
        Point::new(self.prime, self.coords.iter().map(|a| -a.clone()).collect())
    }

    pub fn scale(&self, c: &BigRational) -> Point {
        Point::new(self.prime, self.coords.iter().map(|a| a * c).collect())
    }

    /// Coordinate-wise canonical representative modulo `p^r Z_p`.
    pub fn reduce_mod(&self, r: i64) -> Point {
        Point::new(
            self.prime,
            self.coords
                .iter()
                .map(|c| crate::scalar::reduce_mod_ball(self.prime, c, r))
                .collect(),
        )
    }
}

impl core::fmt::Display for Point {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn sup_norm_examples() {
        // p=3, x=(1/3, 9) -> 3
        let x = Point::from_ratios(p(3), &[(1, 3), (9, 1)]);
        assert_eq!(x.sup_norm(), PAbs::Pow(1));
        // zero vector -> 0
        assert_eq!(Point::zero(p(3), 2).sup_norm(), PAbs::Zero);
        // p=2, x=(3, 1/4) -> 4
        let y = Point::from_ratios(p(2), &[(3, 1), (1, 4)]);
        assert_eq!(y.sup_norm(), PAbs::Pow(2));
    }

    #[test]
    fn dot_product() {
        let x = Point::from_integers(p(5), &[1, 2]);
        let y = Point::from_ratios(p(5), &[(1, 5), (3, 1)]);
        let d = x.dot(&y).unwrap();
        assert_eq!(d.value(), &BigRational::new(31.into(), 5.into()));
    }
}
