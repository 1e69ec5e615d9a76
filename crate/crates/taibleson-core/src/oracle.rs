//! Brute-force referee on the finite quotients
//! `G_K = (p^{-K} Z_p / p^K Z_p)^n`.
//!
//! Band-limited test functions (support and spectrum inside
//! `||.|| <= p^K`) restrict to exact functions on `G_K`, and the continuous
//! Fourier transform restricts to the finite transform with kernel
//! `Psi(-x.xi)` and point mass `p^{-Kn}`. Everything the symbolic layer
//! computes for such functions is a finite sum here, so deviations are
//! bounded by rounding alone.
//!
//! The transform is evaluated by direct summation with exact root-of-unity
//! tables, axis by axis (the group is a product of cyclic factors); there
//! is deliberately no fast transform in the referee.

use crate::multiplier::SymbolSpec;
use crate::numeric::{Complex, Ctx, Real};
use crate::point::Point;
use crate::prime::Prime;
use crate::scalar::rational_p_pow;
use crate::schwartz::TestFunction;
use crate::{Error, Result};
use alloc::vec::Vec;
use num_rational::BigRational;

/// Desk-scale cap on grid points.
pub const MAX_GRID_POINTS: u128 = 1 << 17;

/// The sampling grid for `G_K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuotientGrid {
    prime: Prime,
    dim: usize,
    k: u32,
    /// points per axis, `p^{2K}`
    side: u64,
}

impl QuotientGrid {
    pub fn new(prime: Prime, dim: usize, k: u32) -> Result<Self> {
        if !(1..=2).contains(&dim) || k > 3 || prime.get() > 7 {
            return Err(Error::InvalidInput(alloc::format!(
                "oracle grids are desk-scale: n <= 2, K <= 3, p <= 7 (got n={dim}, K={k}, p={prime})"
            )));
        }
        let side = prime.get().pow(2 * k);
        let points = (side as u128).pow(dim as u32);
        if points > MAX_GRID_POINTS {
            return Err(Error::OracleTooLarge {
                points,
                limit: MAX_GRID_POINTS,
            });
        }
        Ok(QuotientGrid {
            prime,
            dim,
            k,
            side,
        })
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
    pub fn level(&self) -> u32 {
        self.k
    }

    pub fn points(&self) -> usize {
        (self.side as usize).pow(self.dim as u32)
    }

    /// Haar mass of one grid point, `p^{-Kn}`.
    pub fn point_mass(&self) -> BigRational {
        rational_p_pow(self.prime, -((self.k as i64) * self.dim as i64))
    }

    /// The rational point `p^{-K} m` for a flat index.
    pub fn point(&self, index: usize) -> Point {
        let mut idx = index as u64;
        let scale = rational_p_pow(self.prime, -(self.k as i64));
        let coords = (0..self.dim)
            .map(|_| {
                let digit = idx % self.side;
                idx /= self.side;
                BigRational::from_integer(digit.into()) * &scale
            })
            .collect();
        Point::new(self.prime, coords)
    }
}

/// Sampled values on the grid (dense, index order = little-endian digits).
#[derive(Clone)]
pub struct QuotientFunction {
    pub grid: QuotientGrid,
    pub values: Vec<Complex>,
}

/// Restrict a band-limited test function to the grid. Errors with the
/// required window when the function does not fit.
pub fn project(phi: &TestFunction, k: u32, ctx: &Ctx) -> Result<QuotientFunction> {
    let grid = QuotientGrid::new(phi.prime(), phi.dim(), k)?;
    let mut required: i64 = 0;
    for t in phi.terms() {
        // support inside ||x|| <= p^K and constancy on p^K-cosets
        required = required
            .max(t.ball().scale().abs())
            .max(t.twist_depth())
            .max(match t.ball().center().min_valuation() {
                crate::scalar::Valuation::Infinite => 0,
                crate::scalar::Valuation::Finite(v) => (-v).max(0),
            });
    }
    if required > k as i64 {
        return Err(Error::WindowTooSmall { required });
    }
    let mut values = Vec::with_capacity(grid.points());
    for i in 0..grid.points() {
        let x = grid.point(i);
        values.push(ctx.render_cyc(&phi.evaluate(&x)?));
    }
    Ok(QuotientFunction { grid, values })
}

/// Direction for [`dft`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DftDirection {
    /// kernel `Psi(-x.xi)`, matching the forward Fourier transform
    Forward,
    /// kernel `Psi(x.xi)`
    Inverse,
}

/// Exact-kernel discrete Fourier transform on the grid. Direct summation
/// per axis with the cached root table; deterministic order.
pub fn dft(g: &QuotientFunction, direction: DftDirection, ctx: &Ctx) -> QuotientFunction {
    let grid = g.grid;
    let side = grid.side as usize;
    let order = grid.side; // roots of unity of order p^{2K}
    let table = ctx.roots_of_unity(order);
    let mass = ctx.real_from_rational(&rational_p_pow(grid.prime, -(grid.k as i64)));
    let mut values = g.values.clone();
    let points = grid.points();

    for axis in 0..grid.dim {
        let stride = side.pow(axis as u32);
        let mut out = alloc::vec![Complex::zero(ctx); points];
        // iterate over all fibers along this axis
        for base in 0..points {
            if (base / stride) % side != 0 {
                continue; // not the start of a fiber
            }
            for w in 0..side {
                let mut acc = Complex::zero(ctx);
                for m in 0..side {
                    let phase_index = ((m * w) % side) as u64;
                    let root = match direction {
                        DftDirection::Forward => {
                            // zeta^{-mw} = conj(zeta^{mw})
                            table[phase_index as usize].conj()
                        }
                        DftDirection::Inverse => table[phase_index as usize].clone(),
                    };
                    acc = acc.add(&values[base + m * stride].mul(&root, ctx), ctx);
                }
                out[base + w * stride] = acc.scale(&mass, ctx);
            }
        }
        values = out;
    }
    QuotientFunction { grid, values }
}

/// Largest pointwise deviation between two grid functions.
pub fn max_deviation(a: &QuotientFunction, b: &QuotientFunction, ctx: &Ctx) -> Real {
    assert_eq!(a.grid, b.grid, "grid shapes must match");
    let mut worst = ctx.zero();
    for (x, y) in a.values.iter().zip(b.values.iter()) {
        worst = worst.max(&x.dist(y, ctx));
    }
    worst
}

/// Largest deviation between grid values and a test function sampled at
/// the grid points.
pub fn compare_to_function(g: &QuotientFunction, phi: &TestFunction, ctx: &Ctx) -> Result<Real> {
    let sampled = project(phi, g.grid.level(), ctx)?;
    Ok(max_deviation(g, &sampled, ctx))
}

/// `sum |g|^2 * mass` (the quantity preserved by the unitary transform).
pub fn l2_mass(g: &QuotientFunction, ctx: &Ctx) -> Real {
    let mass = ctx.real_from_rational(&g.grid.point_mass());
    let mut acc = ctx.zero();
    for v in &g.values {
        acc = acc.add(&v.abs_sq(ctx), ctx);
    }
    acc.mul(&mass, ctx)
}

/// Multiply spectral grid values by the symbol, for multiplier cross
/// checks.
///
/// A band-limited spectrum is constant on the coset `(p^K Z_p)^n`, so the
/// exact weight there is the symbol's average over that ball (for positive
/// degree); with that choice the grid route reproduces the continuous
/// operator exactly on band-limited inputs. Negative-degree symbols
/// require the spectrum to vanish on the origin coset.
pub fn apply_symbol_on_grid(
    g: &QuotientFunction,
    symbol: &SymbolSpec<'_>,
    ctx: &Ctx,
) -> Result<QuotientFunction> {
    let grid = g.grid;
    let mut values = Vec::with_capacity(g.values.len());
    for (i, v) in g.values.iter().enumerate() {
        let xi = grid.point(i);
        if xi.is_zero() {
            match symbol.average_over_central_ball(grid.prime(), grid.dim(), grid.k as i64, ctx) {
                Ok(avg) => values.push(v.scale(&avg, ctx)),
                Err(_) if v.abs(ctx).to_f64() < 1e-20 => values.push(Complex::zero(ctx)),
                Err(e) => return Err(e),
            }
            continue;
        }
        let weight = symbol.value_at(grid.prime(), &xi, ctx)?;
        values.push(v.scale(&weight, ctx));
    }
    Ok(QuotientFunction { grid, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::CycScalar;
    use crate::schwartz::FourierDirection;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn chi0_projection_has_unit_mass() {
        let ctx = Ctx::new(128);
        let phi = TestFunction::chi(p(3), 1, 0);
        let g = project(&phi, 1, &ctx).unwrap();
        let mass = ctx.real_from_rational(&g.grid.point_mass());
        let mut total = Complex::zero(&ctx);
        for v in &g.values {
            total = total.add(v, &ctx);
        }
        let total = total.scale(&mass, &ctx);
        assert!((total.re.to_f64() - 1.0).abs() < 1e-30);
        // chi_0 is a fixed point of the transform
        let hat = dft(&g, DftDirection::Forward, &ctx);
        assert!(max_deviation(&g, &hat, &ctx).to_f64() < 1e-30);
    }

    #[test]
    fn window_too_small_reported() {
        let ctx = Ctx::new(128);
        let phi = TestFunction::chi(p(3), 1, -2);
        match project(&phi, 1, &ctx) {
            Err(Error::WindowTooSmall { required }) => assert_eq!(required, 2),
            Err(other) => panic!("expected window error, got {other:?}"),
            Ok(_) => panic!("expected window error, got a projection"),
        }
    }

    #[test]
    fn grid_size_guard() {
        assert!(matches!(
            QuotientGrid::new(p(7), 2, 2),
            Err(Error::OracleTooLarge { .. })
        ));
        assert!(QuotientGrid::new(p(7), 2, 1).is_ok());
    }

    #[test]
    fn dft_round_trip_and_parseval() {
        let ctx = Ctx::new(128);
        let pr = p(3);
        let phi = TestFunction::term(
            CycScalar::from_ratio(pr, 2, 3),
            Point::from_ratios(pr, &[(1, 3), (0, 1)]),
            Point::from_integers(pr, &[1, 2]),
            1,
        )
        .unwrap()
        .add(&TestFunction::chi(pr, 2, 0))
        .unwrap();
        let g = project(&phi, 1, &ctx).unwrap();
        let hat = dft(&g, DftDirection::Forward, &ctx);
        let back = dft(&hat, DftDirection::Inverse, &ctx);
        assert!(max_deviation(&g, &back, &ctx).to_f64() < 1e-30);
        let m0 = l2_mass(&g, &ctx);
        let m1 = l2_mass(&hat, &ctx);
        assert!(m0.sub(&m1, &ctx).abs().to_f64() < 1e-30);
    }

    #[test]
    fn dft_matches_symbolic_fourier() {
        // the defining commuting square: dft(project(phi)) = project(F phi)
        let ctx = Ctx::new(128);
        let pr = p(2);
        let phi = TestFunction::term(
            CycScalar::from_ratio(pr, 1, 2),
            Point::from_ratios(pr, &[(1, 4)]),
            Point::from_integers(pr, &[3]),
            2,
        )
        .unwrap()
        .add(&TestFunction::chi(pr, 1, -1))
        .unwrap();
        let g = project(&phi, 2, &ctx).unwrap();
        let hat_grid = dft(&g, DftDirection::Forward, &ctx);
        let hat = phi.fourier(FourierDirection::Forward).unwrap();
        let dev = compare_to_function(&hat_grid, &hat, &ctx).unwrap();
        assert!(dev.to_f64() < 1e-30, "deviation {}", dev.to_f64());
    }

    #[test]
    fn grid_multiplier_matches_symbolic_route() {
        use crate::multiplier::{multiplier_apply, SymbolSpec};
        let ctx = Ctx::new(128);
        for (pr, k, scale) in [(p(3), 1u32, 1i64), (p(2), 3, 2)] {
            let alpha = BigRational::new(3.into(), 2.into());
            let phi = TestFunction::term(
                CycScalar::one(pr),
                Point::from_ratios(pr, &[(1, pr.get() as i64)]),
                Point::from_integers(pr, &[2]),
                scale,
            )
            .unwrap()
            .add(&TestFunction::chi(pr, 1, 0))
            .unwrap();
            let sym = SymbolSpec::norm_power(alpha);
            // grid route: F -> weight -> F^{-1}
            let g = project(&phi, k, &ctx).unwrap();
            let hat = dft(&g, DftDirection::Forward, &ctx);
            let weighted = apply_symbol_on_grid(&hat, &sym, &ctx).unwrap();
            let back = dft(&weighted, DftDirection::Inverse, &ctx);
            // symbolic route at every grid point
            for i in 0..back.grid.points() {
                let x = back.grid.point(i);
                let direct = multiplier_apply(&sym, &phi, &x, &ctx).unwrap();
                let dev = back.values[i].dist(&direct.value, &ctx).to_f64();
                assert!(dev < 1e-25, "p={} K={k} point {i}: {dev}", pr.get());
            }
        }
    }
}
