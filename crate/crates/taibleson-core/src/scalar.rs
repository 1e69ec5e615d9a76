use crate::prime::Prime;
use crate::{Error, Result};
use alloc::string::ToString;
use core::cmp::Ordering;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// The p-adic valuation `v(x)`, with `v(0) = infinity` kept as a distinct
/// sentinel (never a large integer).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, _) => Ordering::Greater,
            (_, Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl core::fmt::Display for Valuation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// The normalized absolute value `|x|_p`: either 0 or an exact power of p.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PAbs {
    Zero,
    /// `|x|_p = p^exp`.
    Pow(i64),
}

impl PAbs {
    pub fn from_valuation(v: Valuation) -> Self {
        match v {
            Valuation::Finite(v) => PAbs::Pow(-v),
            Valuation::Infinite => PAbs::Zero,
        }
    }

    pub fn exponent(self) -> Option<i64> {
        match self {
            PAbs::Pow(e) => Some(e),
            PAbs::Zero => None,
        }
    }

    pub fn is_zero(self) -> bool {
        matches!(self, PAbs::Zero)
    }

    /// The absolute value as an exact rational `p^e` (or 0).
    pub fn to_rational(self, p: Prime) -> BigRational {
        match self {
            PAbs::Zero => BigRational::zero(),
            PAbs::Pow(e) => rational_p_pow(p, e),
        }
    }
}

impl PartialOrd for PAbs {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PAbs {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (PAbs::Zero, PAbs::Zero) => Ordering::Equal,
            (PAbs::Zero, _) => Ordering::Less,
            (_, PAbs::Zero) => Ordering::Greater,
            (PAbs::Pow(a), PAbs::Pow(b)) => a.cmp(b),
        }
    }
}

/// `p^e` as an exact rational, `e` of either sign.
pub fn rational_p_pow(p: Prime, e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(p.pow(e as u32))
    } else {
        BigRational::new(BigInt::one(), p.pow((-e) as u32))
    }
}

/// Valuation of a nonzero big integer.
pub fn bigint_valuation(p: Prime, n: &BigInt) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinite;
    }
    let pb = p.to_bigint();
    let mut v = 0i64;
    let mut cur = n.clone();
    // peel p^(2^k) blocks so huge valuations stay cheap
    loop {
        let (q, r) = cur.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        v += 1;
        cur = q;
    }
    Valuation::Finite(v)
}

/// Valuation of an exact rational.
pub fn rational_valuation(p: Prime, q: &BigRational) -> Valuation {
    if q.is_zero() {
        return Valuation::Infinite;
    }
    let vn = bigint_valuation(p, q.numer()).finite().unwrap();
    let vd = bigint_valuation(p, q.denom()).finite().unwrap();
    Valuation::Finite(vn - vd)
}

/// Inverse of `a` modulo `m` (`m` a prime power, `gcd(a, m) = 1`).
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let a = a.mod_floor(m);
    let ext = a.extended_gcd(m);
    debug_assert!(ext.gcd.is_one(), "argument not invertible");
    ext.x.mod_floor(m)
}

/// Canonical representative of `x + p^r Z_p` in `Q_p / p^r Z_p`.
///
/// The representative is the truncated digit expansion: a rational of the
/// form `m p^{v}` with `0 <= m < p^{r-v}` and `v = v(x)`, so it lies in
/// `[0, p^r)` and has a pure p-power denominator. Returns 0 when
/// `v(x) >= r`.
pub fn reduce_mod_ball(p: Prime, x: &BigRational, r: i64) -> BigRational {
    let v = match rational_valuation(p, x) {
        Valuation::Infinite => return BigRational::zero(),
        Valuation::Finite(v) => v,
    };
    if v >= r {
        return BigRational::zero();
    }
    let k = (r - v) as u32;
    let pk = p.pow(k);
    // strip the p-part: x = p^v * a/b with p coprime to a, b
    let pv = rational_p_pow(p, v);
    let unit = x / &pv;
    let m = (unit.numer() * mod_inverse(unit.denom(), &pk)).mod_floor(&pk);
    BigRational::from_integer(m) * pv
}

/// The p-adic fractional part `{x}_p`: the canonical representative of
/// `x + Z_p`, a rational in `[0, 1)` with denominator a power of p.
pub fn fractional_part(p: Prime, x: &BigRational) -> BigRational {
    reduce_mod_ball(p, x, 0)
}

/// An exact element of `Q_p`: a rational number together with its prime.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PadicScalar {
    prime: Prime,
    value: BigRational,
}

impl PadicScalar {
    pub fn new(prime: Prime, value: BigRational) -> Self {
        PadicScalar { prime, value }
    }

    pub fn from_integer(prime: Prime, n: i64) -> Self {
        PadicScalar::new(prime, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(prime: Prime, num: i64, den: i64) -> Self {
        PadicScalar::new(
            prime,
            BigRational::new(BigInt::from(num), BigInt::from(den)),
        )
    }

    pub fn zero(prime: Prime) -> Self {
        PadicScalar::new(prime, BigRational::zero())
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.prime
    }

    #[inline]
    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn into_value(self) -> BigRational {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Exact p-adic valuation; `v(0)` is the infinite sentinel.
    pub fn valuation(&self) -> Valuation {
        rational_valuation(self.prime, &self.value)
    }

    /// `|x|_p` as an exact power of p (or zero).
    pub fn abs(&self) -> PAbs {
        PAbs::from_valuation(self.valuation())
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.prime.same(rhs.prime)?;
        Ok(PadicScalar::new(self.prime, &self.value + &rhs.value))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.prime.same(rhs.prime)?;
        Ok(PadicScalar::new(self.prime, &self.value - &rhs.value))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        self.prime.same(rhs.prime)?;
        Ok(PadicScalar::new(self.prime, &self.value * &rhs.value))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        self.prime.same(rhs.prime)?;
        if rhs.value.is_zero() {
            return Err(Error::InvalidInput("division by zero".to_string()));
        }
        Ok(PadicScalar::new(self.prime, &self.value / &rhs.value))
    }

    pub fn neg(&self) -> Self {
        PadicScalar::new(self.prime, -self.value.clone())
    }

    /// Canonical representative modulo `p^r Z_p` (truncated digits).
    pub fn reduce_mod(&self, r: i64) -> Self {
        PadicScalar::new(self.prime, reduce_mod_ball(self.prime, &self.value, r))
    }

    /// `{x}_p`, the fractional part driving the additive character.
    pub fn fractional_part(&self) -> BigRational {
        fractional_part(self.prime, &self.value)
    }
}

impl core::fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn valuation_examples() {
        // 24 = 2^3 * 3
        let x = PadicScalar::from_integer(p(2), 24);
        assert_eq!(x.valuation(), Valuation::Finite(3));
        assert_eq!(x.abs(), PAbs::Pow(-3));

        let zero = PadicScalar::zero(p(5));
        assert_eq!(zero.valuation(), Valuation::Infinite);
        assert_eq!(zero.abs(), PAbs::Zero);

        let y = PadicScalar::from_ratio(p(5), 7, 25);
        assert_eq!(y.valuation(), Valuation::Finite(-2));
    }

    #[test]
    fn valuation_ordering() {
        assert!(Valuation::Infinite > Valuation::Finite(1 << 60));
        assert!(PAbs::Zero < PAbs::Pow(-1000));
        assert!(PAbs::Pow(1) > PAbs::Pow(0));
    }

    #[test]
    fn fractional_parts() {
        // {1/2}_2 = 1/2, {3/4}_2 = 3/4, {1/6}_3: 1/6 = 3^{-1} * (1/2),
        // 1/2 mod 3 = 2, so {1/6}_3 = 2/3.
        let x = PadicScalar::from_ratio(p(2), 1, 2);
        assert_eq!(x.fractional_part(), BigRational::new(1.into(), 2.into()));
        let y = PadicScalar::from_ratio(p(3), 1, 6);
        assert_eq!(y.fractional_part(), BigRational::new(2.into(), 3.into()));
        // integers and p-adic integers have zero fractional part
        let z = PadicScalar::from_ratio(p(3), 5, 7);
        assert!(z.fractional_part().is_zero());
    }

    #[test]
    fn reduce_mod_examples() {
        // 7 mod 2^2: 7 = 1 + 2 + 4 -> digits below 2^2: 1 + 2 = 3
        let x = PadicScalar::from_integer(p(2), 7);
        assert_eq!(
            x.reduce_mod(2).value(),
            &BigRational::from_integer(3.into())
        );
        // x with v(x) >= r reduces to 0
        let y = PadicScalar::from_integer(p(3), 9);
        assert!(y.reduce_mod(2).is_zero());
        // additivity of the representative: (x - reduce(x)) in p^r Z_p
        let z = PadicScalar::from_ratio(p(3), 22, 7);
        let red = z.reduce_mod(3);
        let diff = z.checked_sub(&red).unwrap();
        assert!(matches!(diff.valuation(), Valuation::Finite(v) if v >= 3));
    }

    #[test]
    fn ultrametric_inequality() {
        let a = PadicScalar::from_ratio(p(3), 5, 9);
        let b = PadicScalar::from_ratio(p(3), 7, 3);
        let s = a.checked_add(&b).unwrap();
        assert!(s.abs() <= a.abs().max(b.abs()));
        // equality when the absolute values differ
        assert_eq!(s.abs(), a.abs().max(b.abs()));
    }
}
