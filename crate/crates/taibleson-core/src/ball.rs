use crate::point::Point;
use crate::prime::Prime;
use crate::scalar::{rational_p_pow, Valuation};
use alloc::vec::Vec;
use num_rational::BigRational;

/// How two balls of `Q_p^n` relate. Ultrametricity means overlap implies
/// nesting: there is no partial intersection.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BallRelation {
    Disjoint,
    Equal,
    /// The left ball is strictly inside the right one.
    Inside,
    /// The left ball strictly contains the right one.
    Contains,
}

/// The polydisc `center + (p^r Z_p)^n`, stored with the canonical center
/// (each coordinate a truncated digit expansion below level `r`), so two
/// balls are equal iff their stored forms are equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Ball {
    center: Point,
    scale: i64,
}

impl Ball {
    pub fn new(center: Point, scale: i64) -> Self {
        let center = center.reduce_mod(scale);
        Ball { center, scale }
    }

    /// The polydisc `B_r(0) = (p^r Z_p)^n`, support of `chi_r`.
    pub fn centered(prime: Prime, dim: usize, scale: i64) -> Self {
        Ball {
            center: Point::zero(prime, dim),
            scale,
        }
    }

    #[inline]
    pub fn center(&self) -> &Point {
        &self.center
    }

    #[inline]
    pub fn scale(&self) -> i64 {
        self.scale
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.center.prime()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn contains_origin(&self) -> bool {
        self.center.is_zero()
    }

    /// Haar measure `p^{-rn}` of the ball, exactly.
    pub fn measure(&self) -> BigRational {
        rational_p_pow(self.prime(), -self.scale * self.dim() as i64)
    }

    pub fn contains(&self, x: &Point) -> bool {
        debug_assert_eq!(x.dim(), self.dim());
        x.coords()
            .iter()
            .zip(self.center.coords().iter())
            .all(
                |(xi, ci)| match crate::scalar::rational_valuation(self.prime(), &(xi - ci)) {
                    Valuation::Infinite => true,
                    Valuation::Finite(v) => v >= self.scale,
                },
            )
    }

    pub fn relation(&self, other: &Ball) -> BallRelation {
        use core::cmp::Ordering::*;
        match self.scale.cmp(&other.scale) {
            Equal => {
                if self.center == other.center {
                    BallRelation::Equal
                } else {
                    BallRelation::Disjoint
                }
            }
            // self is the smaller ball (larger scale)
            Greater => {
                if other.contains(&self.center) {
                    BallRelation::Inside
                } else {
                    BallRelation::Disjoint
                }
            }
            Less => {
                if self.contains(&other.center) {
                    BallRelation::Contains
                } else {
                    BallRelation::Disjoint
                }
            }
        }
    }

    /// Intersection of two balls: empty, or the smaller one.
    pub fn intersect(&self, other: &Ball) -> Option<Ball> {
        match self.relation(other) {
            BallRelation::Disjoint => None,
            BallRelation::Equal | BallRelation::Inside => Some(self.clone()),
            BallRelation::Contains => Some(other.clone()),
        }
    }

    /// The `p^n` disjoint sub-balls of scale `r+1` partitioning this ball,
    /// in lexicographic digit order.
    pub fn children(&self) -> Vec<Ball> {
        let p = self.prime();
        let n = self.dim();
        let step = rational_p_pow(p, self.scale);
        let mut digits = alloc::vec![0u64; n];
        let mut out = Vec::with_capacity((p.get() as usize).pow(n as u32));
        loop {
            let coords: Vec<BigRational> = self
                .center
                .coords()
                .iter()
                .zip(digits.iter())
                .map(|(c, &d)| c + &step * BigRational::from_integer(d.into()))
                .collect();
            out.push(Ball {
                center: Point::new(p, coords),
                scale: self.scale + 1,
            });
            // odometer over base-p digit vectors
            let mut i = 0;
            loop {
                if i == n {
                    return out;
                }
                digits[i] += 1;
                if digits[i] < p.get() {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }

    /// Translate the ball by `delta` (canonicalizing the new center).
    pub fn translate(&self, delta: &Point) -> crate::Result<Ball> {
        Ok(Ball::new(self.center.add(delta)?, self.scale))
    }

    pub fn neg(&self) -> Ball {
        Ball::new(self.center.neg(), self.scale)
    }
}

impl core::fmt::Display for Ball {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{} + (p^{} Zp)^{}", self.center, self.scale, self.dim())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn children_partition_unit_ball() {
        // p=2, n=1: Z_2 -> {2 Z_2, 1 + 2 Z_2}
        let b = Ball::centered(p(2), 1, 0);
        let ch = b.children();
        assert_eq!(ch.len(), 2);
        assert!(ch[0].center().is_zero());
        assert_eq!(
            ch[1].center().coords()[0],
            BigRational::from_integer(1.into())
        );
    }

    #[test]
    fn children_of_shifted_ball() {
        // p=3, n=1: 1 + 3 Z_3 -> {1+9Z_3, 4+9Z_3, 7+9Z_3}
        let b = Ball::new(Point::from_integers(p(3), &[1]), 1);
        let ch = b.children();
        let centers: Vec<i64> = ch
            .iter()
            .map(|c| {
                let q = &c.center().coords()[0];
                assert!(q.is_integer());
                i64::try_from(q.to_integer()).unwrap()
            })
            .collect();
        assert_eq!(centers, alloc::vec![1, 4, 7]);
    }

    #[test]
    fn children_measures_sum() {
        // p=2, n=2: four children, pairwise disjoint, total measure 1
        let b = Ball::centered(p(2), 2, 0);
        let ch = b.children();
        assert_eq!(ch.len(), 4);
        let total: BigRational = ch.iter().map(|c| c.measure()).sum();
        assert_eq!(total, b.measure());
        for i in 0..ch.len() {
            for j in 0..i {
                assert_eq!(ch[i].relation(&ch[j]), BallRelation::Disjoint);
            }
        }
    }

    #[test]
    fn nesting_or_disjoint() {
        let big = Ball::centered(p(3), 1, -1);
        let small = Ball::new(Point::from_integers(p(3), &[4]), 2);
        assert_eq!(small.relation(&big), BallRelation::Inside);
        assert_eq!(big.relation(&small), BallRelation::Contains);
        assert_eq!(big.intersect(&small), Some(small.clone()));
        let far = Ball::new(Point::from_ratios(p(3), &[(1, 9)]), 2);
        assert_eq!(far.relation(&big), BallRelation::Disjoint);
        assert!(far.intersect(&small).is_none());
    }

    #[test]
    fn canonical_center() {
        // centers differing by the lattice collapse to one representative
        let a = Ball::new(Point::from_integers(p(5), &[7]), 1);
        let b = Ball::new(Point::from_integers(p(5), &[2]), 1);
        assert_eq!(a, b);
        assert!(!a.center().coords()[0].is_zero());
        let zero_centered = Ball::new(Point::from_integers(p(5), &[25]), 1);
        assert!(zero_centered.center().coords()[0].is_zero());
    }
}
