//! Residue-tree analysis of an integer polynomial on the unit sphere
//! `A' = { x in Z_p^n : ||x||_p = 1 }`.
//!
//! A residue class `z mod p^k` freezes `|f|_p` as soon as `v(f(z)) < k`,
//! because `f(z + p^k u) = f(z) mod p^k`. Breadth-first refinement with that
//! closure rule terminates exactly when `f` has no zero on the sphere, i.e.
//! when `f` is elliptic; a Hensel certificate (`v(f) > 2 v(grad f)`)
//! detects genuine zeros early, and a node/depth budget guards the
//! remaining divergent cases.

use crate::poly::IntPolynomial;
use crate::prime::Prime;
use crate::scalar::{bigint_valuation, rational_p_pow};
use crate::{Error, Result};
use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// Limits for the sphere tree; non-elliptic inputs diverge, so exceeding
/// the budget is an explicit inconclusive outcome, never a silent answer.
#[derive(Clone, Copy, Debug)]
pub struct TreeBudget {
    pub max_depth: u32,
    pub max_nodes: u64,
}

impl Default for TreeBudget {
    fn default() -> Self {
        TreeBudget {
            max_depth: 12,
            max_nodes: 10_000_000,
        }
    }
}

/// A closed residue class: `|f|_p = p^{-val}` on `rep + (p^depth Z_p)^n`.
#[derive(Clone, Debug)]
pub struct Leaf {
    pub rep: Vec<BigInt>,
    pub depth: u32,
    pub val: u32,
}

impl Leaf {
    /// Haar measure of the class, `p^{-n * depth}`.
    pub fn measure(&self, prime: Prime) -> BigRational {
        rational_p_pow(prime, -((self.depth as i64) * self.rep.len() as i64))
    }
}

/// A finite partition of the unit sphere into residue classes on which
/// `|f|_p` is constant, together with the valuation range.
#[derive(Clone, Debug)]
pub struct SphereCovering {
    prime: Prime,
    dim: usize,
    degree: u32,
    leaves: Vec<Leaf>,
    m_max: u32,
    m_min: u32,
}

impl SphereCovering {
    #[inline]
    pub fn prime(&self) -> Prime {
        self.prime
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Degree of the underlying homogeneous polynomial.
    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn leaves(&self) -> &[Leaf] {
        &self.leaves
    }

    pub fn m_max(&self) -> u32 {
        self.m_max
    }

    pub fn m_min(&self) -> u32 {
        self.m_min
    }

    /// The uniform constancy radius: `|f|` is constant on every ball of
    /// radius `p^{-m}` meeting the sphere, with `m = m_max + 1`.
    pub fn uniform_constancy_radius(&self) -> u32 {
        self.m_max + 1
    }

    /// Lower comparability constant: `C0 = p^{-m_max}`, so
    /// `C0 ||xi||^d <= |f(xi)|` everywhere.
    pub fn c0_exponent(&self) -> i64 {
        -(self.m_max as i64)
    }

    /// Upper comparability constant: `C1 = p^{-m_min}`.
    pub fn c1_exponent(&self) -> i64 {
        -(self.m_min as i64)
    }

    /// Total measure of the leaves; must equal `1 - p^{-n}` exactly.
    pub fn total_measure(&self) -> BigRational {
        self.leaves.iter().map(|l| l.measure(self.prime)).sum()
    }

    /// The sphere numerator `L(t) = sum_leaves p^{-n depth} t^{val}` of the
    /// zeta function, as (exponent of t, rational coefficient) pairs.
    pub fn sphere_sum(&self) -> Vec<(i64, BigRational)> {
        let mut acc: alloc::collections::BTreeMap<i64, BigRational> =
            alloc::collections::BTreeMap::new();
        for l in &self.leaves {
            let e = acc.entry(l.val as i64).or_insert_with(BigRational::zero);
            *e += l.measure(self.prime);
        }
        acc.into_iter().collect()
    }

    /// `int_{||u||=1} |f(u)|^alpha du` would specialize this at
    /// `t = p^{-alpha}`; kept exact as coefficients for the numeric layer.
    pub fn sphere_sum_exponents(&self) -> Vec<(u32, BigRational)> {
        self.sphere_sum()
            .into_iter()
            .map(|(e, c)| (e as u32, c))
            .collect()
    }
}

/// Outcome of the sphere analysis.
#[derive(Clone, Debug)]
pub enum SphereAnalysis {
    Elliptic(SphereCovering),
    /// A zero on the sphere was certified (exactly, or via Hensel lifting).
    ZeroFound {
        witness: Vec<BigInt>,
        depth: u32,
    },
    /// Budget ran out before a decision; inconclusive.
    BudgetExceeded {
        nodes: u64,
        depth: u32,
    },
}

/// Breadth-first residue-tree analysis of `f` on the unit sphere.
/// Requires `f` nonconstant and homogeneous.
pub fn analyze_sphere(
    f: &IntPolynomial,
    prime: Prime,
    budget: TreeBudget,
) -> Result<SphereAnalysis> {
    f.require_homogeneous()?;
    let n = f.dim();
    let grad: Vec<IntPolynomial> = (0..n).map(|i| f.partial(i)).collect();
    let p = prime.get();

    let mut queue: VecDeque<(Vec<BigInt>, u32)> = VecDeque::new();
    // root cells: all nonzero digit vectors mod p, lexicographic
    let mut digits = alloc::vec![0u64; n];
    'roots: loop {
        let mut i = 0;
        loop {
            if i == n {
                break 'roots;
            }
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        queue.push_back((digits.iter().map(|&d| BigInt::from(d)).collect(), 1));
    }

    let mut leaves: Vec<Leaf> = Vec::new();
    let mut nodes: u64 = 0;
    let mut deepest: u32 = 1;

    while let Some((rep, depth)) = queue.pop_front() {
        nodes += 1;
        deepest = deepest.max(depth);
        if nodes > budget.max_nodes || depth > budget.max_depth {
            return Ok(SphereAnalysis::BudgetExceeded {
                nodes,
                depth: deepest,
            });
        }
        let fz = f.eval_bigint(&rep);
        let v = bigint_valuation(prime, &fz);
        // exact zero on the sphere
        if fz.is_zero() {
            return Ok(SphereAnalysis::ZeroFound {
                witness: rep,
                depth,
            });
        }
        let vf = v.finite().unwrap();
        // Hensel certificate: v(f) >= 2 v(grad f) + 1 lifts to a true zero
        let vgrad = grad
            .iter()
            .map(|g| bigint_valuation(prime, &g.eval_bigint(&rep)))
            .min()
            .unwrap();
        if let Some(vg) = vgrad.finite() {
            if vf >= 2 * vg + 1 {
                return Ok(SphereAnalysis::ZeroFound {
                    witness: rep,
                    depth,
                });
            }
        }
        if vf < depth as i64 {
            leaves.push(Leaf {
                rep,
                depth,
                val: vf as u32,
            });
            continue;
        }
        // refine: children rep + p^depth * e in lexicographic digit order
        let step = prime.pow(depth);
        let mut digits = alloc::vec![0u64; n];
        loop {
            let child: Vec<BigInt> = rep
                .iter()
                .zip(digits.iter())
                .map(|(r, &d)| r + &step * BigInt::from(d))
                .collect();
            queue.push_back((child, depth + 1));
            let mut i = 0;
            loop {
                if i == n {
                    break;
                }
                digits[i] += 1;
                if digits[i] < p {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if digits.iter().all(|&d| d == 0) {
                break;
            }
        }
    }

    let m_max = leaves.iter().map(|l| l.val).max().unwrap_or(0);
    let m_min = leaves.iter().map(|l| l.val).min().unwrap_or(0);
    Ok(SphereAnalysis::Elliptic(SphereCovering {
        prime,
        dim: n,
        degree: f.degree(),
        leaves,
        m_max,
        m_min,
    }))
}

/// Ellipticity certification; `Ok` carries the covering for reuse.
pub fn require_elliptic(
    f: &IntPolynomial,
    prime: Prime,
    budget: TreeBudget,
) -> Result<SphereCovering> {
    match analyze_sphere(f, prime, budget)? {
        SphereAnalysis::Elliptic(c) => Ok(c),
        SphereAnalysis::ZeroFound { witness, depth } => Err(Error::NotElliptic {
            witness: format!("{witness:?}"),
            depth,
        }),
        SphereAnalysis::BudgetExceeded { nodes, depth } => {
            Err(Error::BudgetExceeded { nodes, depth })
        }
    }
}

/// Walk the residue tree restricted to one cell `rep0 + (p^{depth0})^n`
/// (which must lie inside the sphere, i.e. `rep0 != 0 mod p`), invoking
/// `emit` on every closed leaf. `f` must already be certified elliptic.
pub fn for_each_leaf_in_cell<F>(
    f: &IntPolynomial,
    prime: Prime,
    rep0: Vec<BigInt>,
    depth0: u32,
    emit: &mut F,
) where
    F: FnMut(&[BigInt], u32, u32),
{
    let p = prime.get();
    let n = f.dim();
    let mut queue: VecDeque<(Vec<BigInt>, u32)> = VecDeque::new();
    queue.push_back((rep0, depth0));
    while let Some((rep, depth)) = queue.pop_front() {
        let fz = f.eval_bigint(&rep);
        let v = bigint_valuation(prime, &fz)
            .finite()
            .expect("elliptic symbol cannot vanish on the sphere");
        if v < depth as i64 {
            emit(&rep, depth, v as u32);
            continue;
        }
        let step = prime.pow(depth);
        let mut digits = alloc::vec![0u64; n];
        loop {
            let child: Vec<BigInt> = rep
                .iter()
                .zip(digits.iter())
                .map(|(r, &d)| r + &step * BigInt::from(d))
                .collect();
            queue.push_back((child, depth + 1));
            let mut i = 0;
            loop {
                if i == n {
                    break;
                }
                digits[i] += 1;
                if digits[i] < p {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if digits.iter().all(|&d| d == 0) {
                break;
            }
        }
    }
}
