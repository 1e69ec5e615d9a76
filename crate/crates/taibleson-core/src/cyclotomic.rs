use crate::prime::Prime;
use crate::scalar::PadicScalar;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// An exact element of the cyclotomic field `Q(zeta_{p^K})`, stored in the
/// power basis `zeta^i`, `0 <= i < phi(p^K)`, with sparse rational
/// coefficients.
///
/// Values are kept canonical: reduced by the minimal polynomial
/// `Phi_{p^K}(zeta) = sum_{j<p} zeta^{j p^{K-1}} = 0` and descended to the
/// smallest level containing them, so `PartialEq` is exact field equality.
/// Level 0 is `Q` itself.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycScalar {
    prime: Prime,
    level: u32,
    coeffs: BTreeMap<u64, BigRational>,
}

impl CycScalar {
    pub fn zero(prime: Prime) -> Self {
        CycScalar {
            prime,
            level: 0,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(prime: Prime) -> Self {
        Self::from_rational(prime, BigRational::one())
    }

    pub fn from_rational(prime: Prime, q: BigRational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !q.is_zero() {
            coeffs.insert(0, q);
        }
        CycScalar {
            prime,
            level: 0,
            coeffs,
        }
    }

    pub fn from_integer(prime: Prime, n: i64) -> Self {
        Self::from_rational(prime, BigRational::from_integer(n.into()))
    }

    pub fn from_ratio(prime: Prime, num: i64, den: i64) -> Self {
        Self::from_rational(prime, BigRational::new(num.into(), den.into()))
    }

    /// `zeta_{p^K}^j`, canonicalized (the level drops when `p | j`).
    pub fn root_of_unity(prime: Prime, level: u32, j: &BigInt) -> Self {
        let pk = prime.pow(level);
        let mut j = num_integer::Integer::mod_floor(j, &pk);
        let mut level = level;
        let pb = prime.to_bigint();
        while level > 0 && (j.clone() % &pb).is_zero() {
            j /= &pb;
            level -= 1;
        }
        if level == 0 {
            return Self::one(prime);
        }
        let ju = u64::try_from(j).expect("exponent fits after reduction");
        let mut ring = BTreeMap::new();
        ring.insert(ju, BigRational::one());
        Self::from_group_ring(prime, level, ring)
    }

    /// Build from exponents in `[0, p^K)` (a group-ring element), reducing
    /// by the minimal polynomial and descending the level.
    fn from_group_ring(prime: Prime, level: u32, mut ring: BTreeMap<u64, BigRational>) -> Self {
        if level == 0 {
            ring.retain(|_, c| !c.is_zero());
            return CycScalar {
                prime,
                level,
                coeffs: ring,
            };
        }
        let p = prime.get();
        let phi = prime.phi_pk(level);
        let pk = p.pow(level); // levels stay desk-scale; u64 is plenty
        let block = pk / p; // p^{K-1}
                            // one descending pass: zeta^e with e >= phi rewrites to lower terms
        for e in (phi..pk).rev() {
            let c = match ring.remove(&e) {
                Some(c) if !c.is_zero() => c,
                _ => continue,
            };
            let base = e - (p - 1) * block;
            for j in 0..(p - 1) {
                let idx = base + j * block;
                let entry = ring.entry(idx).or_insert_with(BigRational::zero);
                *entry -= &c;
            }
        }
        ring.retain(|_, c| !c.is_zero());
        let mut out = CycScalar {
            prime,
            level,
            coeffs: ring,
        };
        out.descend();
        out
    }

    /// Drop to the smallest field containing the value.
    fn descend(&mut self) {
        let p = self.prime.get();
        loop {
            if self.coeffs.is_empty() {
                self.level = 0;
                return;
            }
            if self.level == 0 {
                return;
            }
            if self.level == 1 {
                if self.coeffs.len() == 1 && self.coeffs.contains_key(&0) {
                    self.level = 0;
                }
                return;
            }
            if self.coeffs.keys().all(|&e| e % p == 0) {
                self.coeffs = core::mem::take(&mut self.coeffs)
                    .into_iter()
                    .map(|(e, c)| (e / p, c))
                    .collect();
                self.level -= 1;
            } else {
                return;
            }
        }
    }

    /// Rewrite at a higher level (exponents scale by `p^{K'-K}`).
    fn lifted_coeffs(&self, target: u32) -> BTreeMap<u64, BigRational> {
        debug_assert!(target >= self.level);
        let f = self.prime.get().pow(target - self.level);
        self.coeffs
            .iter()
            .map(|(&e, c)| (e * f, c.clone()))
            .collect()
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.prime
    }

    /// Current (minimal) cyclotomic level `K`.
    #[inline]
    pub fn level(&self) -> u32 {
        self.level
    }

    /// Sparse power-basis coefficients (exponent, value).
    pub fn coeffs(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    /// Dense power-basis vector of length `phi(p^K)`.
    pub fn dense_coeffs(&self) -> Vec<BigRational> {
        let phi = self.prime.phi_pk(self.level) as usize;
        let mut v = alloc::vec![BigRational::zero(); phi];
        for (&e, c) in &self.coeffs {
            v[e as usize] = c.clone();
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.level == 0 && self.coeffs.get(&0).map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn is_rational(&self) -> bool {
        self.level == 0
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.level != 0 {
            return None;
        }
        Some(
            self.coeffs
                .get(&0)
                .cloned()
                .unwrap_or_else(BigRational::zero),
        )
    }

    pub fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.prime, rhs.prime);
        let level = self.level.max(rhs.level);
        let mut ring = self.lifted_coeffs(level);
        for (e, c) in rhs.lifted_coeffs(level) {
            let entry = ring.entry(e).or_insert_with(BigRational::zero);
            *entry += c;
        }
        Self::from_group_ring(self.prime, level, ring)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        CycScalar {
            prime: self.prime,
            level: self.level,
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.prime, rhs.prime);
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.prime);
        }
        // rational factors keep the level untouched
        if let Some(q) = self.as_rational() {
            return rhs.scale(&q);
        }
        if let Some(q) = rhs.as_rational() {
            return self.scale(&q);
        }
        let level = self.level.max(rhs.level);
        let pk = self.prime.get().pow(level);
        let a = self.lifted_coeffs(level);
        let b = rhs.lifted_coeffs(level);
        let mut ring: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (&ea, ca) in &a {
            for (&eb, cb) in &b {
                let mut e = ea + eb;
                if e >= pk {
                    e -= pk;
                }
                let entry = ring.entry(e).or_insert_with(BigRational::zero);
                *entry += ca * cb;
            }
        }
        Self::from_group_ring(self.prime, level, ring)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero(self.prime);
        }
        CycScalar {
            prime: self.prime,
            level: self.level,
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, c * q)).collect(),
        }
    }

    /// Complex conjugation, `zeta -> zeta^{-1}`.
    pub fn conj(&self) -> Self {
        if self.level == 0 {
            return self.clone();
        }
        let pk = self.prime.get().pow(self.level);
        let ring: BTreeMap<u64, BigRational> = self
            .coeffs
            .iter()
            .map(|(&e, c)| (if e == 0 { 0 } else { pk - e }, c.clone()))
            .collect();
        Self::from_group_ring(self.prime, self.level, ring)
    }

    /// `|c|^2 = c conj(c)`, an element of the maximal real subfield.
    pub fn norm_sq(&self) -> Self {
        self.mul(&self.conj())
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// the minimal polynomial. `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Some(Self::from_rational(self.prime, q.recip()));
        }
        let phi = self.prime.phi_pk(self.level) as usize;
        let a = self.dense_coeffs();
        // Phi_{p^K}(x) = sum_{j<p} x^{j p^{K-1}}
        let block = self.prime.get().pow(self.level - 1) as usize;
        let mut modulus = alloc::vec![BigRational::zero(); phi + block];
        let mut j = 0usize;
        while j * block < modulus.len() {
            modulus[j * block] = BigRational::one();
            j += 1;
        }
        let (g, u) = poly_half_xgcd(&a, &modulus);
        // Phi is irreducible, so the gcd is a nonzero constant
        debug_assert!(g.len() == 1 && !g[0].is_zero());
        let ginv = g[0].recip();
        let ring: BTreeMap<u64, BigRational> = u
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e as u64, c * &ginv))
            .collect();
        Some(Self::from_group_ring(self.prime, self.level, ring))
    }

    /// The additive character value `Psi(x) = exp(2 pi i {x}_p)`, a
    /// `p^K`-th root of unity with `K = max(0, -v(x))`.
    pub fn psi(x: &PadicScalar) -> Self {
        let frac = x.fractional_part();
        if frac.is_zero() {
            return Self::one(x.prime());
        }
        // frac = m / p^K in lowest terms
        let k = crate::scalar::bigint_valuation(x.prime(), frac.denom())
            .finite()
            .expect("nonzero denominator") as u32;
        Self::root_of_unity(x.prime(), k, frac.numer())
    }

    /// max(0, -v) such that the value lies in Q(zeta_{p^K}); used for
    /// sizing numeric root tables.
    pub fn root_order(&self) -> u64 {
        self.prime.get().pow(self.level)
    }
}

impl core::fmt::Display for CycScalar {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if e == 0 {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "z{}^{}", self.root_order(), e)?;
            } else {
                write!(f, "{c}*z{}^{}", self.root_order(), e)?;
            }
        }
        Ok(())
    }
}

/// Extended gcd over `Q[x]` returning `(g, u)` with `u a + v m = g`;
/// only the cofactor of `a` is needed for inversion.
fn poly_half_xgcd(a: &[BigRational], m: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r0 = trim(m.to_vec());
    let mut r1 = trim(a.to_vec());
    let mut u0: Vec<BigRational> = alloc::vec![];
    let mut u1: Vec<BigRational> = alloc::vec![BigRational::one()];
    while !r1.is_empty() {
        let (q, r) = poly_divmod(&r0, &r1);
        let u2 = poly_sub(&u0, &poly_mul(&q, &u1));
        r0 = r1;
        r1 = r;
        u0 = u1;
        u1 = u2;
    }
    (r0, u0)
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    assert!(!b.is_empty());
    let mut rem = a.to_vec();
    if a.len() < b.len() {
        return (alloc::vec![], trim(rem));
    }
    let mut quot = alloc::vec![BigRational::zero(); a.len() - b.len() + 1];
    let lead = b.last().unwrap();
    for i in (0..quot.len()).rev() {
        let c = &rem[i + b.len() - 1] / lead;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            let t = &c * bj;
            rem[i + j] -= t;
        }
        quot[i] = c;
    }
    (trim(quot), trim(rem))
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return alloc::vec![];
    }
    let mut out = alloc::vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = alloc::vec![BigRational::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn zeta(pr: u64, level: u32, j: i64) -> CycScalar {
        CycScalar::root_of_unity(p(pr), level, &BigInt::from(j))
    }

    #[test]
    fn zeta2_squares_to_one() {
        let z = zeta(2, 1, 1);
        assert_eq!(z, CycScalar::from_integer(p(2), -1));
        assert!(z.mul(&z).is_one());
    }

    #[test]
    fn minimal_polynomial_sum_vanishes() {
        for pr in [2u64, 3, 5, 7] {
            let mut acc = CycScalar::zero(p(pr));
            for j in 0..pr as i64 {
                acc = acc.add(&zeta(pr, 1, j));
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn conj_times_self_is_one() {
        let i = zeta(2, 2, 1);
        assert!(i.conj().mul(&i).is_one());
        assert!(i.norm_sq().is_one());
        let z = zeta(7, 2, 11);
        assert!(z.norm_sq().is_one());
    }

    #[test]
    fn level_descends() {
        // zeta_9^3 = zeta_3
        let a = zeta(3, 2, 3);
        let b = zeta(3, 1, 1);
        assert_eq!(a, b);
        assert_eq!(a.level(), 1);
        // zeta_4^2 = -1 lives at level 0
        let c = zeta(2, 2, 2);
        assert_eq!(c.level(), 0);
        assert_eq!(
            c.as_rational().unwrap(),
            BigRational::from_integer((-1).into())
        );
    }

    #[test]
    fn psi_examples() {
        // p=2, x=1/2 -> -1
        let x = PadicScalar::from_ratio(p(2), 1, 2);
        assert_eq!(CycScalar::psi(&x), CycScalar::from_integer(p(2), -1));
        // x in Z_p -> 1
        let y = PadicScalar::from_ratio(p(5), 3, 7);
        assert!(CycScalar::psi(&y).is_one());
        // p=3, x=1/3 -> primitive cube root
        let z = PadicScalar::from_ratio(p(3), 1, 3);
        assert_eq!(CycScalar::psi(&z), zeta(3, 1, 1));
    }

    #[test]
    fn psi_is_additive() {
        let a = PadicScalar::from_ratio(p(3), 5, 27);
        let b = PadicScalar::from_ratio(p(3), 7, 9);
        let lhs = CycScalar::psi(&a.checked_add(&b).unwrap());
        let rhs = CycScalar::psi(&a).mul(&CycScalar::psi(&b));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_round_trip() {
        let z = zeta(5, 1, 2).add(&CycScalar::from_integer(p(5), 3));
        let inv = z.inv().unwrap();
        assert!(z.mul(&inv).is_one());
        assert!(CycScalar::zero(p(5)).inv().is_none());
    }

    #[test]
    fn reduction_idempotent() {
        // re-canonicalizing a canonical value is the identity
        let z = zeta(3, 2, 5).add(&zeta(3, 2, 7).scale(&BigRational::new(2.into(), 3.into())));
        let re = CycScalar::from_group_ring(p(3), z.level(), z.coeffs.clone());
        assert_eq!(z, re);
    }
}
