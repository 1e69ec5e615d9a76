use crate::point::Point;
use crate::prime::Prime;
use crate::scalar::PadicScalar;
use crate::{Error, Result};
use alloc::string::ToString;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// A polynomial with integer coefficients in `n` variables, the symbol
/// material for elliptic operators and Igusa zeta functions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntPolynomial {
    dim: usize,
    monomials: Vec<(BigInt, Vec<u32>)>,
}

impl IntPolynomial {
    pub fn new(dim: usize, monomials: Vec<(BigInt, Vec<u32>)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be >= 1".to_string()));
        }
        let mut cleaned: Vec<(BigInt, Vec<u32>)> = Vec::new();
        for (c, e) in monomials {
            if e.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: e.len(),
                });
            }
            if c.is_zero() {
                continue;
            }
            if let Some(slot) = cleaned.iter_mut().find(|(_, f)| *f == e) {
                slot.0 += c;
            } else {
                cleaned.push((c, e));
            }
        }
        cleaned.retain(|(c, _)| !c.is_zero());
        cleaned.sort_by(|a, b| a.1.cmp(&b.1));
        Ok(IntPolynomial {
            dim,
            monomials: cleaned,
        })
    }

    /// Convenience constructor from small coefficients.
    pub fn from_coeffs(dim: usize, terms: &[(i64, &[u32])]) -> Result<Self> {
        IntPolynomial::new(
            dim,
            terms
                .iter()
                .map(|&(c, e)| (BigInt::from(c), e.to_vec()))
                .collect(),
        )
    }

    /// The single variable `xi_1` in one dimension.
    pub fn coordinate(dim: usize, index: usize) -> Self {
        let mut e = alloc::vec![0u32; dim];
        e[index] = 1;
        IntPolynomial {
            dim,
            monomials: alloc::vec![(BigInt::from(1), e)],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn monomials(&self) -> &[(BigInt, Vec<u32>)] {
        &self.monomials
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.monomials
            .iter()
            .all(|(_, e)| e.iter().all(|&k| k == 0))
    }

    /// Total degree (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.monomials
            .iter()
            .map(|(_, e)| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Homogeneous iff every monomial has the same total degree.
    pub fn is_homogeneous(&self) -> bool {
        let d = self.degree();
        self.monomials
            .iter()
            .all(|(_, e)| e.iter().sum::<u32>() == d)
    }

    pub fn require_homogeneous(&self) -> Result<u32> {
        if self.is_zero() || self.is_constant() {
            return Err(Error::InvalidInput(
                "polynomial must be nonconstant".to_string(),
            ));
        }
        if !self.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        Ok(self.degree())
    }

    pub fn eval_bigint(&self, x: &[BigInt]) -> BigInt {
        debug_assert_eq!(x.len(), self.dim);
        let mut acc = BigInt::zero();
        for (c, e) in &self.monomials {
            let mut term = c.clone();
            for (xi, &k) in x.iter().zip(e.iter()) {
                for _ in 0..k {
                    term *= xi;
                }
            }
            acc += term;
        }
        acc
    }

    pub fn eval_rational(&self, x: &[BigRational]) -> BigRational {
        debug_assert_eq!(x.len(), self.dim);
        let mut acc = BigRational::zero();
        for (c, e) in &self.monomials {
            let mut term = BigRational::from_integer(c.clone());
            for (xi, &k) in x.iter().zip(e.iter()) {
                for _ in 0..k {
                    term *= xi;
                }
            }
            acc += term;
        }
        acc
    }

    /// `f(x)` as an exact scalar of `Q_p`.
    pub fn eval_point(&self, prime: Prime, x: &Point) -> Result<PadicScalar> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.dim(),
            });
        }
        prime.same(x.prime())?;
        Ok(PadicScalar::new(prime, self.eval_rational(x.coords())))
    }

    /// Partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> IntPolynomial {
        let monomials = self
            .monomials
            .iter()
            .filter(|(_, e)| e[i] > 0)
            .map(|(c, e)| {
                let mut e2 = e.clone();
                e2[i] -= 1;
                (c * BigInt::from(e[i]), e2)
            })
            .collect();
        IntPolynomial {
            dim: self.dim,
            monomials,
        }
    }
}

impl core::fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.monomials.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, e)) in self.monomials.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (j, &k) in e.iter().enumerate() {
                if k > 0 {
                    write!(f, "*x{}^{}", j + 1, k)?;
                }
            }
        }
        Ok(())
    }
}
