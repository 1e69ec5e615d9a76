//! The verification suite: every headline identity of the library checked
//! at desk scale, each as one pass/fail criterion with pinned tolerances.
//!
//! Default matrix: p in {2, 3, 5, 7}, n in {1, 2}, seed 42, 128-bit
//! precision. Exact checks compare cyclotomic scalars or rational
//! functions; numeric checks carry explicit tolerances fixed here.

use num_rational::BigRational;
use std::time::Instant;
use taibleson_core::covering::TreeBudget;
use taibleson_core::kernel::{
    convolve_kernel, elliptic_fundamental_solution, taibleson_apply_to_convolution,
    taibleson_fundamental_solution,
};
use taibleson_core::multiplier::{multiplier_apply, taibleson_direct, SymbolSpec};
use taibleson_core::riesz::{
    elliptic_equals_taibleson, fourier_riesz_identity, gamma_p, gamma_p_reflected,
    riesz_at_zero_is_delta,
};
use taibleson_core::schwartz::FourierDirection;
use taibleson_core::sobolev::{
    continuity_check, h_norm, i_beta, i_beta_shell_sum, radial_example, NormKind,
};
use taibleson_core::solve::{kernel_pairing_check, spectrum_bound_check, Solver};
use taibleson_core::suite::{FnOpts, SuiteGen};
use taibleson_core::zeta::{two_sided_bound_holds_at, zeta_pairing, EllipticSymbol};
use taibleson_core::{
    oracle, Ctx, IntPolynomial, LaurentPoly, LaurentRational, Point, Prime, TestFunction,
};

pub const PRIMES: [u64; 4] = [2, 3, 5, 7];
pub const DIMS: [usize; 2] = [1, 2];

/// The (p, n) matrix a verification run ranges over.
#[derive(Clone, Debug)]
pub struct Matrix {
    pub primes: Vec<u64>,
    pub dims: Vec<usize>,
}

impl Matrix {
    pub fn default_matrix() -> Self {
        Matrix {
            primes: PRIMES.to_vec(),
            dims: DIMS.to_vec(),
        }
    }

    pub fn restricted(p: Option<u64>, n: Option<usize>) -> Self {
        let mut m = Self::default_matrix();
        if let Some(p) = p {
            m.primes.retain(|&q| q == p);
        }
        if let Some(n) = n {
            m.dims.retain(|&d| d == n);
        }
        m
    }
}

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub index: usize,
    pub name: &'static str,
    pub pass: bool,
    pub details: String,
    pub millis: u128,
}

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

/// The elliptic polynomials exercised per (p, n). Every entry is certified
/// by the residue tree before use.
pub fn polynomial_suite(p: u64, n: usize) -> Vec<IntPolynomial> {
    match (p, n) {
        (_, 1) => vec![
            IntPolynomial::coordinate(1, 0),
            IntPolynomial::from_coeffs(1, &[(1, &[2])]).unwrap(),
        ],
        (2, 2) | (5, 2) => {
            vec![
                IntPolynomial::from_coeffs(2, &[(1, &[2, 0]), (1, &[1, 1]), (1, &[0, 2])]).unwrap(),
            ]
        }
        (3, 2) => vec![
            IntPolynomial::from_coeffs(2, &[(1, &[2, 0]), (1, &[0, 2])]).unwrap(),
            IntPolynomial::from_coeffs(2, &[(1, &[2, 0]), (9, &[0, 2])]).unwrap(),
        ],
        (7, 2) => vec![
            IntPolynomial::from_coeffs(2, &[(1, &[2, 0]), (1, &[0, 2])]).unwrap(),
            IntPolynomial::from_coeffs(2, &[(1, &[3, 0]), (2, &[0, 3])]).unwrap(),
        ],
        _ => vec![],
    }
}

fn fn_opts_for(p: u64, n: usize) -> FnOpts {
    // canonicalization costs p^{n * scale-spread}; keep the coarse grids
    // (p^n > 10) at a narrow spread
    if (p as usize).pow(n as u32) > 10 {
        FnOpts {
            scale_range: (-1, 1),
            twist_depth: 1,
            center_depth: 1,
            ..FnOpts::default()
        }
    } else {
        FnOpts::default()
    }
}

fn band_limited_opts(k: i64) -> FnOpts {
    FnOpts {
        max_terms: 3,
        scale_range: (-k, k),
        twist_depth: k,
        center_depth: k,
        cyclotomic_coeffs: true,
    }
}

/// A ten-function suite mixing radial, shifted, twisted and zero-integral
/// inputs.
fn v_suite(gen: &mut SuiteGen, p: Prime, n: usize, opts: FnOpts) -> Vec<TestFunction> {
    let mut suite = vec![
        TestFunction::chi(p, n, 0),
        TestFunction::chi(p, n, 1),
        TestFunction::chi(p, n, -1),
        TestFunction::term(
            taibleson_core::CycScalar::one(p),
            Point::zero(p, n),
            Point::from_integers(p, &vec![1; n]),
            1,
        )
        .unwrap(),
    ];
    suite.push(gen.w_function(p, n, (-1, 1), 2));
    suite.push(gen.l_function(p, n, opts));
    while suite.len() < 10 {
        suite.push(gen.test_function(p, n, opts));
    }
    suite
}

pub fn run_all(seed: u64, precision_bits: usize) -> Vec<CriterionResult> {
    run_matrix(seed, precision_bits, &Matrix::default_matrix())
}

pub fn run_matrix(seed: u64, precision_bits: usize, matrix: &Matrix) -> Vec<CriterionResult> {
    let ctx = Ctx::new(precision_bits);
    let mut results = Vec::new();
    let runners: Vec<(
        usize,
        &'static str,
        fn(u64, &Ctx, &Matrix) -> Result<String, String>,
    )> = vec![
        (1, "exact Fourier calculus + quotient oracle", c1),
        (2, "transform of radial indicators", c2),
        (3, "Igusa zeta closed forms, pole, dilation", c3),
        (4, "two-sided symbol bounds with tight constants", c4),
        (5, "Gamma reflection, delta limit, Riesz transform", c5),
        (6, "radial identification of elliptic symbols", c6),
        (7, "fundamental solutions (incl. log kernels)", c7),
        (8, "elliptic solver: residuals, routes, spectrum bound", c8),
        (9, "Sobolev norms, radial example, continuity", c9),
        (10, "one-dimensional cross-consistency", c10),
    ];
    for (index, name, run) in runners {
        let t0 = Instant::now();
        let outcome = run(seed, &ctx, matrix);
        let millis = t0.elapsed().as_millis();
        let (pass, details) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        results.push(CriterionResult {
            index,
            name,
            pass,
            details,
            millis,
        });
    }
    results
}

// ---- criterion 1 -------------------------------------------------------

fn c1(seed: u64, ctx: &Ctx, matrix: &Matrix) -> Result<String, String> {
    let mut gen = SuiteGen::new(seed);
    let mut exact_checks = 0usize;
    for &p in &matrix.primes {
        for &n in &matrix.dims {
            let pr = prime(p);
            let opts = fn_opts_for(p, n);
            for _ in 0..13 {
                let phi = gen.test_function(pr, n, opts);
                let hat = phi.fourier(FourierDirection::Forward).map_err(err)?;
                let back = hat.fourier(FourierDirection::Inverse).map_err(err)?;
                if !back.eq_fn(&phi).map_err(err)? {
                    return Err(format!("inversion failed for p={p} n={n}"));
                }
                let lhs = phi
                    .product(&phi.conj().map_err(err)?)
                    .map_err(err)?
                    .integrate();
                let rhs = hat
                    .product(&hat.conj().map_err(err)?)
                    .map_err(err)?
                    .integrate();
                if lhs != rhs {
                    return Err(format!("Parseval failed for p={p} n={n}"));
                }
                exact_checks += 1;
            }
        }
    }

    // quotient-oracle agreement at K = 2 where the grid is desk-scale,
    // K = 1 on the two largest grids
    let tol = 1e-18;
    let mut worst: f64 = 0.0;
    let mut oracle_checks = 0usize;
    let plan: &[(u64, usize, i64, usize)] = &[
        (2, 1, 2, 4),
        (3, 1, 2, 4),
        (5, 1, 2, 3),
        (7, 1, 2, 1),
        (2, 2, 2, 3),
        (3, 2, 2, 2),
        (5, 2, 1, 2),
        (7, 2, 1, 2),
    ];
    for &(p, n, k, reps) in plan {
        if !matrix.primes.contains(&p) || !matrix.dims.contains(&n) {
            continue;
        }
        let pr = prime(p);
        for _ in 0..reps {
            let phi = gen.test_function(pr, n, band_limited_opts(k.min(2)));
            let g = oracle::project(&phi, k as u32, ctx).map_err(err)?;
            let hat_grid = oracle::dft(&g, oracle::DftDirection::Forward, ctx);
            let hat = phi.fourier(FourierDirection::Forward).map_err(err)?;
            let dev = oracle::compare_to_function(&hat_grid, &hat, ctx)
                .map_err(err)?
                .to_f64();
            worst = worst.max(dev);
            if dev > tol {
                return Err(format!(
                    "oracle deviation {dev:.3e} > {tol:.0e} at p={p} n={n} K={k}"
                ));
            }
            // unitarity on the grid
            let m0 = oracle::l2_mass(&g, ctx);
            let m1 = oracle::l2_mass(&hat_grid, ctx);
            if m0.sub(&m1, ctx).abs().to_f64() > 1e-25 {
                return Err(format!("grid Parseval violated at p={p} n={n}"));
            }
            let back = oracle::dft(&hat_grid, oracle::DftDirection::Inverse, ctx);
            if oracle::max_deviation(&g, &back, ctx).to_f64() > 1e-25 {
                return Err(format!("grid inversion violated at p={p} n={n}"));
            }
            oracle_checks += 1;
        }
    }
    Ok(format!(
        "{exact_checks} exact inversion/Parseval pairs; {oracle_checks} grid checks, max dev {worst:.2e} (tol 1e-18)"
    ))
}

// ---- criterion 2 -------------------------------------------------------

fn c2(_seed: u64, _ctx: &Ctx, matrix: &Matrix) -> Result<String, String> {
    let mut count = 0usize;
    for &p in &matrix.primes {
        for &n in &matrix.dims {
            let pr = prime(p);
            for r in -3i64..=3 {
                let chi = TestFunction::chi(pr, n, r);
                let hat = chi.fourier(FourierDirection::Forward).map_err(err)?;
                let expected = TestFunction::chi(pr, n, -r)
                    .scale_rational(&taibleson_core::scalar::rational_p_pow(pr, -(n as i64) * r));
                if !hat.eq_fn(&expected).map_err(err)? {
                    return Err(format!("F(chi_{r}) mismatch at p={p} n={n}"));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} radial transform identities exact"))
}

// ---- criterion 3 -------------------------------------------------------

fn c3(_seed: u64, _ctx: &Ctx, matrix: &Matrix) -> Result<String, String> {
    let mut details = String::new();
    let mut linear_cases = 0usize;
    for &p in &matrix.primes {
        let pr = prime(p);
        // classical linear case, exactly
        let f = IntPolynomial::coordinate(1, 0);
        let symbol = EllipticSymbol::new(f, pr, TreeBudget::default()).map_err(err)?;
        let expected = LaurentRational::new(
            LaurentPoly::from_rational_terms(pr, &[(0, rat(p as i64 - 1, p as i64))]),
            LaurentPoly::from_rational_terms(pr, &[(0, rat(1, 1)), (1, rat(-1, p as i64))]),
        )
        .map_err(err)?;
        if !symbol.zeta().value().eq_exact(&expected) {
            return Err(format!("Z(s, xi) closed form failed at p={p}"));
        }
        linear_cases += 1;
    }
    let mut polys = 0usize;
    for &p in &matrix.primes {
        for &n in &matrix.dims {
            let pr = prime(p);
            for f in polynomial_suite(p, n) {
                let d = f.degree() as i64;
                let symbol = EllipticSymbol::new(f.clone(), pr, TreeBudget::default())
                    .map_err(|e| format!("p={p} n={n} f={f}: {e}"))?;
                // Z(0, f) = 1
                let at_one = symbol
                    .zeta()
                    .value()
                    .eval_rational(&rat(1, 1))
                    .ok_or_else(|| format!("unexpected pole at t=1 (p={p} {f})"))?;
                if !at_one.is_one() {
                    return Err(format!("Z(0,f) != 1 for p={p} f={f}"));
                }
                // pole at s = -n/d
                let g = num_integer::Integer::gcd(&(n as i64), &d);
                let (a, b) = ((n as i64) / g, (d / g) as u32);
                if !symbol
                    .zeta()
                    .value()
                    .den_vanishes_at_p_power(a, b)
                    .map_err(err)?
                    || symbol
                        .zeta()
                        .value()
                        .num_vanishes_at_p_power(a, b)
                        .map_err(err)?
                {
                    return Err(format!("pole at s=-n/d missing for p={p} f={f}"));
                }
                // dilation identity for r = 1..3
                for r in 1i64..=3 {
                    let phi = TestFunction::chi(pr, n, -r).scale_rational(
                        &taibleson_core::scalar::rational_p_pow(pr, -(n as i64) * r),
                    );
                    let pairing =
                        zeta_pairing(symbol.poly(), symbol.covering(), &phi).map_err(err)?;
                    let shifted = LaurentRational::from_poly(LaurentPoly::monomial(
                        taibleson_core::CycScalar::one(pr),
                        -d * r,
                    ))
                    .mul(symbol.zeta().value())
                    .map_err(err)?;
                    if !pairing.eq_exact(&shifted) {
                        return Err(format!("dilation identity failed p={p} f={f} r={r}"));
                    }
                }
                polys += 1;
            }
        }
    }
    details.push_str(&format!(
        "linear closed form on {linear_cases} primes; Z(0)=1, pole, dilation exact on {polys} polynomials"
    ));
    Ok(details)
}

// ---- criterion 4 -------------------------------------------------------

fn c4(seed: u64, _ctx: &Ctx, matrix: &Matrix) -> Result<String, String> {
    let mut gen = SuiteGen::new(seed ^ 0x4c31);
    let mut checked = 0usize;
    for &p in &matrix.primes {
        for &n in &matrix.dims {
            let pr = prime(p);
            for f in polynomial_suite(p, n) {
                let symbol =
                    EllipticSymbol::new(f.clone(), pr, TreeBudget::default()).map_err(err)?;
                for _ in 0..1000 {
                    let x = gen.point(pr, n, 2);
                    if !two_sided_bound_holds_at(symbol.poly(), symbol.covering(), &x).map_err(err)? {
                        return Err(format!("bound violated at p={p} f={f} x={x}"));
                    }
                }
                // tightness witnesses on both strata
                for (which, target) in [
                    ("lower", symbol.covering().m_max()),
                    ("upper", symbol.covering().m_min()),
                ] {
                    let leaf = symbol
                        .covering()
                        .leaves()
                        .iter()
                        .find(|l| l.val == target)
                        .ok_or_else(|| format!("no {which} stratum witness"))?;
                    let x = Point::new(
                        pr,
                        leaf.rep
                            .iter()
                            .map(|z| BigRational::from_integer(z.clone()))
                            .collect(),
                    );
                    let vf = symbol.valuation_at(&x).map_err(err)?;
                    if vf != target as i64 {
                        return Err(format!("{which} witness wrong at p={p} f={f}"));
                    }
                }
                checked += 1;
            }
        }
    }
    Ok(format!(
        "two-sided bounds on 1000 points x {checked} polynomials, tight on both strata"
    ))
}

// ---- criterion 5 -------------------------------------------------------

fn c5(seed: u64, _ctx: &Ctx, matrix: &Matrix) -> Result<String, String> {
    for &p in &matrix.primes {
        for n in 1usize..=3 {
            let lhs = gamma_p(prime(p), n)
                .mul(&gamma_p_reflected(prime(p), n))
                .map_err(err)?;
            if !lhs.eq_exact(&LaurentRational::one(prime(p))) {
                return Err(format!("Gamma reflection failed p={p} n={n}"));
            }
        }
    }
    let mut gen = SuiteGen::new(seed ^ 0x9e37);
    let mut delta_checks = 0usize;
    let mut riesz_checks = 0usize;
    for &p in &matrix.primes {
        for &n in &matrix.dims {
            let pr = prime(p);
            let opts = fn_opts_for(p, n);
            for _ in 0..7 {
                let phi = gen.test_function(pr, n, opts);
                if !riesz_at_zero_is_delta(&phi).map_err(err)? {
                    return Err(format!("R_0 != delta at p={p} n={n}"));
                }
                delta_checks += 1;
                let report = fourier_riesz_identity(&phi).map_err(err)?;
                if !report.equal {
                    return Err(format!("Fourier-Riesz identity failed p={p} n={n}"));
                }
                riesz_checks += 1;
            }
        }
    }
    Ok(format!(
        "Gamma reflection exact (12 cases); delta limit on {delta_checks} functions; transform identity on {riesz_checks}"
    ))
}

// ---- criterion 6 -------------------------------------------------------

fn c6(_seed: u64, _ctx: &Ctx, matrix: &Matrix) -> Result<String, String> {
    let mut identities = 0usize;
    for &p in &matrix.primes {
        for &n in &matrix.dims {
            let pr = prime(p);
            for f in polynomial_suite(p, n) {
                let symbol =
                    EllipticSymbol::new(f.clone(), pr, TreeBudget::default()).map_err(err)?;
                for r in -3i64..=3 {
                    let phi = TestFunction::chi(pr, n, r);
                    let report = elliptic_equals_taibleson(&symbol, &phi).map_err(err)?;
                    if !report.equal {
                        return Err(format!("radial identification failed p={p} f={f} chi_{r}"));
                    }
                    identities += 1;
                }
            }
        }
    }
    Ok(format!(
        "{identities} exact rational-function identities on the chi basis"
    ))
}

// ---- criterion 7 -------------------------------------------------------

fn c7(seed: u64, ctx: &Ctx, matrix: &Matrix) -> Result<String, String> {
    let tol = 1e-10;
    let mut gen = SuiteGen::new(seed ^ 0x7007);
    let mut residuals = 0usize;
    let mut worst: f64 = 0.0;

    for &p in &matrix.primes {
        for &n in &matrix.dims {
            let pr = prime(p);
            let opts = fn_opts_for(p, n);
            let suite = v_suite(&mut gen, pr, n, opts);
            let alphas = [rat(1, 2), rat(1, 1), rat(n as i64, 1), rat(23, 10)];
            // trim the sampling on the widest grids to keep the runtime sane
            let samples = if (p as usize).pow(n as u32) > 10 {
                18
            } else {
                50
            };
            for alpha in &alphas {
                let kernel = taibleson_fundamental_solution(pr, n, alpha, ctx).map_err(err)?;
                for i in 0..samples {
                    let v = &suite[i % suite.len()];
                    let x = if i % 7 == 0 {
                        Point::zero(pr, n)
                    } else {
                        gen.sample_points(pr, n, 1).pop().unwrap()
                    };
                    let got =
                        taibleson_apply_to_convolution(alpha, &kernel, v, &x, ctx).map_err(err)?;
                    let expect = ctx.render_cyc(&v.evaluate(&x).map_err(err)?);
                    let dev = got.value.sub(&expect, ctx).abs(ctx).to_f64();
                    worst = worst.max(dev);
                    if dev > tol {
                        return Err(format!(
                            "Taibleson residual {dev:.2e} > 1e-10 at p={p} n={n} alpha={alpha}"
                        ));
                    }
                    residuals += 1;
                }
            }
        }
    }

    // elliptic leg: kernel pairings against the continuation for all
    // alpha ranges (including the log case), and two-route agreement
    let mut pairings = 0usize;
    let mut two_routes = 0usize;
    for &p in &matrix.primes {
        for &n in &matrix.dims {
            let pr = prime(p);
            for f in polynomial_suite(p, n) {
                let d = f.degree() as i64;
                if n == 1 && d == 1 {
                    continue; // degenerate case covered by criterion 10
                }
                let symbol =
                    EllipticSymbol::new(f.clone(), pr, TreeBudget::default()).map_err(err)?;
                let v_w = TestFunction::chi(pr, n, 0)
                    .add(
                        &TestFunction::chi(pr, n, 1)
                            .scale_cyc(&taibleson_core::CycScalar::from_ratio(pr, 1, 2)),
                    )
                    .map_err(err)?;
                let alpha_log = rat(n as i64, d);
                for alpha in [
                    rat(n as i64, 3 * d),
                    alpha_log.clone(),
                    rat(3 * n as i64, 2 * d),
                ] {
                    let kernel =
                        elliptic_fundamental_solution(&symbol, &alpha, ctx).map_err(err)?;
                    let report =
                        kernel_pairing_check(&symbol, &kernel, &v_w, &[-2, -1, 0, 1, 2], ctx)
                            .map_err(err)?;
                    if report.max_deviation > tol {
                        return Err(format!(
                            "kernel pairing dev {:.2e} > 1e-10 at p={p} n={n} f={f} alpha={alpha}",
                            report.max_deviation
                        ));
                    }
                    pairings += 1;
                }
                // two-route agreement inside the validity region
                let solver =
                    Solver::new(&symbol, rat(n as i64, 3 * d), v_w.clone(), ctx).map_err(err)?;
                let region = solver.kernel_validity_exponent().map_err(err)?.unwrap_or(0);
                for i in 0..8 {
                    // points with ||x|| <= p^{region}
                    let x = if i == 0 {
                        Point::zero(pr, n)
                    } else {
                        gen.point(pr, n, 0)
                            .scale(&taibleson_core::scalar::rational_p_pow(pr, -region))
                    };
                    let u1 = solver.evaluate(&x, ctx).map_err(err)?;
                    let u2 = solver.evaluate_kernel_route(&x, ctx).map_err(err)?;
                    let dev = u1.value.sub(&u2.value, ctx).abs(ctx).to_f64();
                    if dev > tol {
                        return Err(format!("route disagreement {dev:.2e} at p={p} n={n} f={f}"));
                    }
                    two_routes += 1;
                }
            }
        }
    }
    Ok(format!(
        "{residuals} hypersingular residuals (max {worst:.2e}); {pairings} kernel pairings incl. log case; {two_routes} route agreements"
    ))
}

// ---- criterion 8 -------------------------------------------------------

fn c8(seed: u64, ctx: &Ctx, matrix: &Matrix) -> Result<String, String> {
    let tol = 1e-10;
    let mut gen = SuiteGen::new(seed ^ 0x8008);
    let mut residuals = 0usize;
    let mut worst: f64 = 0.0;
    let mut bound_cases = 0usize;
    for &p in &matrix.primes {
        for &n in &matrix.dims {
            let pr = prime(p);
            let opts = fn_opts_for(p, n);
            for f in polynomial_suite(p, n) {
                let d = f.degree() as i64;
                let symbol =
                    EllipticSymbol::new(f.clone(), pr, TreeBudget::default()).map_err(err)?;
                // alpha < n/(2d) per the solvability theorem
                let alpha = rat(n as i64, 3 * d);
                // mixed right-hand side
                let v = gen
                    .w_function(pr, n, (-1, 1), 2)
                    .add(&gen.l_function(pr, n, opts))
                    .map_err(err)?;
                let solver = Solver::new(&symbol, alpha.clone(), v, ctx).map_err(err)?;
                if solver.outside_theorem_hypotheses {
                    return Err("alpha selection bug".into());
                }
                let samples = if (p as usize).pow(n as u32) > 10 {
                    16
                } else {
                    50
                };
                for i in 0..samples {
                    let x = if i == 0 {
                        Point::zero(pr, n)
                    } else {
                        gen.sample_points(pr, n, 1).pop().unwrap()
                    };
                    let r = solver.residual(&x, ctx).map_err(err)?;
                    let dev = r.value.abs(ctx).to_f64();
                    worst = worst.max(dev);
                    if dev > tol {
                        return Err(format!(
                            "solver residual {dev:.2e} > 1e-10 at p={p} n={n} f={f}"
                        ));
                    }
                    residuals += 1;
                }
                // two-route agreement inside the kernel validity region
                if let Some(region) = solver.kernel_validity_exponent().map_err(err)? {
                    for i in 0..6 {
                        let x = if i == 0 {
                            Point::zero(pr, n)
                        } else {
                            gen.point(pr, n, 0)
                                .scale(&taibleson_core::scalar::rational_p_pow(pr, -region))
                        };
                        let u1 = solver.evaluate(&x, ctx).map_err(err)?;
                        let u2 = solver.evaluate_kernel_route(&x, ctx).map_err(err)?;
                        let dev = u1.value.sub(&u2.value, ctx).abs(ctx).to_f64();
                        if dev > tol {
                            return Err(format!(
                                "kernel/spectral routes differ {dev:.2e} at p={p} n={n} f={f}"
                            ));
                        }
                    }
                }
                // spectrum ratio bound with C0^{-alpha}, attained on the
                // deepest stratum
                let mut pts = gen.sample_points(pr, n, 40);
                if let Some(leaf) = symbol
                    .covering()
                    .leaves()
                    .iter()
                    .find(|l| l.val == symbol.covering().m_max())
                {
                    pts.push(Point::new(
                        pr,
                        leaf.rep
                            .iter()
                            .map(|z| BigRational::from_integer(z.clone()))
                            .collect(),
                    ));
                }
                let rep = spectrum_bound_check(&symbol, &alpha, &pts, ctx).map_err(err)?;
                if !rep.pass {
                    return Err(format!(
                        "spectrum ratio {} exceeds bound {} at p={p} f={f}",
                        rep.max_ratio, rep.bound
                    ));
                }
                if (rep.max_ratio - rep.bound).abs() > 1e-12 * rep.bound {
                    return Err(format!(
                        "spectrum bound not attained at p={p} f={f}: {} vs {}",
                        rep.max_ratio, rep.bound
                    ));
                }
                bound_cases += 1;
                // solution-norm pieces of the solvability theorem
                let pieces = taibleson_core::sobolev::solution_norm_pieces(
                    &symbol,
                    &alpha,
                    &rat(n as i64, 1),
                    solver.v_w(),
                    ctx,
                )
                .map_err(err)?;
                if !pieces.pass {
                    return Err(format!("solution norm bound violated at p={p} f={f}"));
                }
            }
        }
    }
    Ok(format!(
        "{residuals} solver residuals (max {worst:.2e}); routes agree; spectrum bound attained in {bound_cases} cases"
    ))
}

// ---- criterion 9 -------------------------------------------------------

fn c9(seed: u64, ctx: &Ctx, matrix: &Matrix) -> Result<String, String> {
    let mut gen = SuiteGen::new(seed ^ 0x5050);
    // exact unit norm of chi_0
    for &p in &matrix.primes {
        for &n in &matrix.dims {
            let pr = prime(p);
            for l in [rat(0, 1), rat(2, 1), rat(7, 2)] {
                let r = h_norm(&TestFunction::chi(pr, n, 0), &l, NormKind::H, ctx).map_err(err)?;
                if (r.squared_norm_f64() - 1.0).abs() > 1e-25 {
                    return Err(format!("||chi_0||^2 != 1 at p={p} n={n} l={l}"));
                }
            }
        }
    }
    // singular norm dominated by the H norm on random suites
    let mut dominance = 0usize;
    for &p in &matrix.primes {
        for &n in &matrix.dims {
            let pr = prime(p);
            let opts = fn_opts_for(p, n);
            for _ in 0..7 {
                let phi = gen.test_function(pr, n, opts);
                for l in [rat(1, 2), rat(2, 1)] {
                    let h = h_norm(&phi, &l, NormKind::H, ctx)
                        .map_err(err)?
                        .squared_norm;
                    let s = h_norm(&phi, &l, NormKind::SingularH, ctx)
                        .map_err(err)?
                        .squared_norm;
                    if s.cmp(&h.add(&ctx.real_from_f64(1e-25), ctx)) == std::cmp::Ordering::Greater
                    {
                        return Err(format!("singular norm exceeds H norm at p={p} n={n}"));
                    }
                    dominance += 1;
                }
            }
        }
    }
    // the non-compact radial example: finite, two routes agree, and the
    // outer-shell mass is reported rather than assumed away
    let mut example_cases = 0usize;
    for &p in &matrix.primes {
        for &n in &matrix.dims {
            let pr = prime(p);
            let beta = rat(n as i64 + 2, 1);
            let rep5 = radial_example(pr, n, &beta, &rat(5, 1), ctx).map_err(err)?;
            let a = rep5.inner_norm_sq.to_f64();
            let b = rep5.formula_value.to_f64();
            if !(a.is_finite() && b.is_finite()) || ((a - b) / b).abs() > 1e-10 {
                return Err(format!(
                    "radial example routes differ at p={p} n={n}: {a} vs {b}"
                ));
            }
            let rep1 = radial_example(pr, n, &beta, &rat(1, 1), ctx).map_err(err)?;
            if (rep5.inner_norm_sq.to_f64() - rep1.inner_norm_sq.to_f64()).abs() > 1e-20 {
                return Err(format!(
                    "inner part unexpectedly l-dependent at p={p} n={n}"
                ));
            }
            if rep5.outer_mass_unweighted.to_f64() <= 0.0 {
                return Err(format!("missing outer-shell mass at p={p} n={n}"));
            }
            example_cases += 1;
        }
    }
    // operator continuity and the embedding constant
    let mut continuity_cases = 0usize;
    for &p in &matrix.primes {
        for &n in &matrix.dims {
            let pr = prime(p);
            let opts = fn_opts_for(p, n);
            let suite: Vec<TestFunction> = (0..5).map(|_| gen.test_function(pr, n, opts)).collect();
            for f in polynomial_suite(p, n) {
                let symbol =
                    EllipticSymbol::new(f.clone(), pr, TreeBudget::default()).map_err(err)?;
                let l = rat(n as i64, 1); // l = n > n/2
                let rep = continuity_check(&symbol, &rat(1, 2), &l, &suite, ctx).map_err(err)?;
                if !rep.pass {
                    return Err(format!(
                        "continuity ratio {} > bound {} at p={p} f={f}",
                        rep.max_ratio, rep.bound
                    ));
                }
                if !rep.embedding_pass {
                    return Err(format!("embedding bound failed at p={p} f={f}"));
                }
                continuity_cases += 1;
            }
            // embedding constant: closed form vs shell sum
            let l = rat(n as i64, 1);
            let closed = {
                let q = ctx.p_pow_real(
                    pr,
                    &ctx.real_from_rational(&(rat(n as i64, 1) - l.clone() * rat(2, 1))),
                );
                ctx.one().add(
                    &ctx.one()
                        .sub(&ctx.p_pow_i64(pr, -(n as i64)), ctx)
                        .mul(&q.div(&ctx.one().sub(&q, ctx), ctx), ctx),
                    ctx,
                )
            };
            let mut shell_sum = ctx.one();
            for j in 1..200i64 {
                let term = ctx.one().sub(&ctx.p_pow_i64(pr, -(n as i64)), ctx).mul(
                    &ctx.p_pow_real(
                        pr,
                        &ctx.real_from_rational(
                            &(rat(n as i64, 1) * rat(j, 1) - l.clone() * rat(2 * j, 1)),
                        ),
                    ),
                    ctx,
                );
                shell_sum = shell_sum.add(&term, ctx);
            }
            let dev = closed.sub(&shell_sum, ctx).abs().to_f64() / closed.to_f64();
            if dev > 1e-12 {
                return Err(format!(
                    "embedding constant mismatch {dev:.2e} at p={p} n={n}"
                ));
            }
        }
    }
    // I(beta): closed form vs shell sums
    let mut moments = 0usize;
    for &p in &matrix.primes {
        for &n in &matrix.dims {
            let pr = prime(p);
            for beta in [rat(0, 1), rat(1, 1), rat(7, 5), rat(3, 1)] {
                let closed = i_beta(pr, n, &beta, ctx).map_err(err)?;
                let (sum, tail) = i_beta_shell_sum(pr, n, &beta, 120, ctx);
                let dev = closed.sub(&sum, ctx).abs().to_f64();
                if dev > tail.to_f64() + 1e-12 {
                    return Err(format!("I(beta) mismatch at p={p} n={n} beta={beta}"));
                }
                moments += 1;
            }
        }
    }
    Ok(format!(
        "unit norms exact; dominance on {dominance} pairs; radial example two-route on {example_cases} cases; continuity on {continuity_cases}; {moments} moment identities"
    ))
}

// ---- criterion 10 ------------------------------------------------------

fn c10(seed: u64, ctx: &Ctx, matrix: &Matrix) -> Result<String, String> {
    let tol = 1e-12;
    let mut gen = SuiteGen::new(seed ^ 0xaaaa);
    let mut agreements = 0usize;
    for &p in &matrix.primes {
        let pr = prime(p);
        let f = IntPolynomial::coordinate(1, 0);
        let symbol = EllipticSymbol::new(f, pr, TreeBudget::default()).map_err(err)?;
        // multiplier agreement on random (phi, x, alpha)
        for _ in 0..7 {
            let phi = gen.test_function(pr, 1, FnOpts::default());
            let x = gen.sample_points(pr, 1, 1).pop().unwrap();
            for alpha in [rat(1, 2), rat(23, 10)] {
                let e =
                    multiplier_apply(&SymbolSpec::elliptic(&symbol, alpha.clone()), &phi, &x, ctx)
                        .map_err(err)?;
                let t = multiplier_apply(&SymbolSpec::norm_power(alpha.clone()), &phi, &x, ctx)
                    .map_err(err)?;
                let dev = e.value.sub(&t.value, ctx).abs(ctx).to_f64();
                if dev > tol {
                    return Err(format!("multiplier paths differ {dev:.2e} at p={p}"));
                }
                // and the hypersingular route agrees too
                let direct = taibleson_direct(&alpha, &phi, &x, ctx).map_err(err)?;
                let dev = direct.value.sub(&t.value, ctx).abs(ctx).to_f64();
                if dev > tol {
                    return Err(format!("hypersingular path differs {dev:.2e} at p={p}"));
                }
                agreements += 1;
            }
        }
        // fundamental solution kernels coincide (coefficients and values)
        for alpha in [rat(2, 5), rat(1, 1), rat(23, 10)] {
            let ek = elliptic_fundamental_solution(&symbol, &alpha, ctx).map_err(err)?;
            let tk = taibleson_fundamental_solution(pr, 1, &alpha, ctx).map_err(err)?;
            let dev = ek.coeff().sub(tk.coeff(), ctx).abs().to_f64();
            if dev > tol {
                return Err(format!("kernel coefficients differ {dev:.2e} at p={p}"));
            }
            let v = TestFunction::chi(pr, 1, 0);
            for (a, b) in [(0i64, 1i64), (1, 1), (1, 2), (4, 1)] {
                let x = Point::from_ratios(pr, &[(a, b)]);
                let ve = convolve_kernel(&ek, &v, &x, ctx).map_err(err)?;
                let vt = convolve_kernel(&tk, &v, &x, ctx).map_err(err)?;
                let dev = ve.value.sub(&vt.value, ctx).abs(ctx).to_f64();
                if dev > tol {
                    return Err(format!("kernel values differ {dev:.2e} at p={p}"));
                }
            }
            agreements += 1;
        }
        // the solver against the direct Taibleson machinery
        let v = gen.w_function(pr, 1, (-1, 1), 2);
        let alpha = rat(1, 4);
        let solver = Solver::new(&symbol, alpha.clone(), v.clone(), ctx).map_err(err)?;
        let tk = taibleson_fundamental_solution(pr, 1, &alpha, ctx).map_err(err)?;
        for (a, b) in [(0i64, 1i64), (1, 1), (1, 4)] {
            let x = Point::from_ratios(pr, &[(a, b)]);
            let u = solver.evaluate(&x, ctx).map_err(err)?;
            let u_tai = convolve_kernel(&tk, &v, &x, ctx).map_err(err)?;
            let dev = u.value.sub(&u_tai.value, ctx).abs(ctx).to_f64();
            if dev > tol {
                return Err(format!("solver vs Taibleson path {dev:.2e} at p={p}"));
            }
            agreements += 1;
        }
    }
    Ok(format!("{agreements} cross-path agreements at 1e-12"))
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}
