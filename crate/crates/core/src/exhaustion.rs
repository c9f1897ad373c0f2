//! Global `∂̄` on the plane by exhaustion with concentric discs.
//!
//! Step `n` solves on the disc of radius `r_n`. The difference with the
//! previous partial solution is holomorphic on the previous disc; its Taylor
//! polynomial at the origin (coefficients from discrete Cauchy integrals) is
//! subtracted, so partial solutions agree on earlier discs up to a summable
//! budget `2^-n · runge_tol`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::beltrami::BeltramiField;
use crate::domain::Omega;
use crate::error::{Error, Result};
use crate::family::solve_dbar;
use crate::field::ComplexField;
use crate::solver::SolverConfig;

/// Fraction of the previous radius used for the Cauchy-integral circle.
pub const CIRCLE_FRACTION: f64 = 0.9;

/// Minimum number of trapezoid nodes on a projection circle.
pub const MIN_CIRCLE_NODES: usize = 64;

const STENCIL: usize = 6;

/// Value at an arbitrary point by 6-point tensor Lagrange interpolation.
/// Exact for polynomials of degree ≤ 5 in `x` and `y` separately.
pub fn interpolate(f: &ComplexField, z: Complex64) -> Result<Complex64> {
    let d = f.domain();
    let n = d.resolution();
    let h = d.spacing();
    let l = d.half_width();
    let axis = |t: f64| -> Option<(usize, [f64; STENCIL])> {
        let s = (t + l) / h;
        let base = s.floor() as isize - 2;
        if !s.is_finite() || base < 0 || base as usize + STENCIL > n {
            return None;
        }
        let mut w = [1.0; STENCIL];
        for (a, wa) in w.iter_mut().enumerate() {
            for b in 0..STENCIL {
                if a != b {
                    *wa *= (s - (base as f64 + b as f64)) / (a as f64 - b as f64);
                }
            }
        }
        Some((base as usize, w))
    };
    let outside = || Error::CircleOutsideGrid {
        center: format!("{z}"),
        radius: 0.0,
    };
    let (j0, wx) = axis(z.re).ok_or_else(outside)?;
    let (i0, wy) = axis(z.im).ok_or_else(outside)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (a, &wya) in wy.iter().enumerate() {
        let mut row = Complex64::new(0.0, 0.0);
        for (b, &wxb) in wx.iter().enumerate() {
            row += f.get(i0 + a, j0 + b) * wxb;
        }
        acc += row * wya;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TaylorProjection {
    pub center: Complex64,
    pub circle_radius: f64,
    /// `a_0 ..= a_degree`.
    pub coefficients: Vec<Complex64>,
    /// `max |f - p|` over the circle nodes; large when `f` is not holomorphic.
    pub circle_error: f64,
}

impl TaylorProjection {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// `Σ a_k (z - center)^k` by Horner's rule.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let w = z - self.center;
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * w + a)
    }

    /// Whether the circle reconstruction error is within `tol`.
    pub fn is_holomorphic(&self, tol: f64) -> bool {
        self.circle_error <= tol
    }
}

/// Number of trapezoid nodes used for a projection of the given degree.
pub fn circle_nodes(degree: usize) -> usize {
    (8 * degree.max(1)).max(MIN_CIRCLE_NODES)
}

fn node(center: Complex64, radius: f64, j: usize, m: usize) -> Complex64 {
    center + Complex64::from_polar(radius, 2.0 * PI * j as f64 / m as f64)
}

/// Taylor coefficients from values at `m` equispaced nodes
/// `center + radius·e^{2πij/m}`, `j = 0..m`.
pub fn project_samples(
    values: &[Complex64],
    center: Complex64,
    circle_radius: f64,
    degree: usize,
) -> Result<TaylorProjection> {
    let m = values.len();
    if m < degree + 1 || m == 0 {
        return Err(Error::InvalidArgument(format!(
            "{m} nodes cannot resolve degree {degree}"
        )));
    }
    if !(circle_radius > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "circle radius {circle_radius} must be positive"
        )));
    }
    let coefficients = (0..=degree)
        .map(|k| {
            let sum = values
                .iter()
                .enumerate()
                .map(|(j, &v)| {
                    v * Complex64::from_polar(1.0, -2.0 * PI * (k * j) as f64 / m as f64)
                })
                .sum::<Complex64>();
            sum / (m as f64 * circle_radius.powi(k as i32))
        })
        .collect();
    let mut proj = TaylorProjection {
        center,
        circle_radius,
        coefficients,
        circle_error: 0.0,
    };
    proj.circle_error = values
        .iter()
        .enumerate()
        .map(|(j, &v)| (v - proj.evaluate(node(center, circle_radius, j, m))).norm())
        .fold(0.0, f64::max);
    Ok(proj)
}

/// Taylor coefficients of `f` at `center` by the trapezoid rule for the
/// Cauchy integrals on the circle of the given radius.
pub fn taylor_project(
    f: &ComplexField,
    center: Complex64,
    degree: usize,
    circle_radius: f64,
) -> Result<TaylorProjection> {
    let m = circle_nodes(degree);
    let values = (0..m)
        .map(|j| interpolate(f, node(center, circle_radius, j, m)))
        .collect::<Result<Vec<_>>>()
        .map_err(|_| Error::CircleOutsideGrid {
            center: format!("{center}"),
            radius: circle_radius,
        })?;
    project_samples(&values, center, circle_radius, degree)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExhaustionStep {
    pub step: usize,
    pub radius: f64,
    pub iterations: usize,
    /// `sup |f_n - f_{n-1}|` over the previous disc after the correction.
    pub correction_sup: f64,
    pub budget: f64,
    /// Sup of the subtracted polynomial over the previous disc.
    pub polynomial_sup: f64,
}

#[derive(Clone, Debug)]
pub struct ExhaustionResult {
    /// Final partial solution, on the largest disc.
    pub f: ComplexField,
    pub trace: Vec<ExhaustionStep>,
    /// Coefficient, `g_μ` and cut-off data of the last step.
    pub mu: BeltramiField,
    pub g: ComplexField,
    pub u: ComplexField,
}

fn disc_indices(f: &ComplexField, radius: f64) -> Vec<usize> {
    let d = f.domain();
    (0..d.len())
        .filter(|&k| d.point_at(k).norm() <= radius)
        .collect()
}

/// Solves `∂̄_{J_μ} f = u dh̄_μ` on the largest disc by exhausting with the
/// discs of the given radii around the origin. Data are cut off to each disc
/// with that disc's collar.
pub fn exhaustion_solve(
    mu: &BeltramiField,
    u: &ComplexField,
    radii: &[f64],
    taylor_degree: usize,
    cfg: &SolverConfig,
) -> Result<ExhaustionResult> {
    cfg.validate()?;
    u.check_same_domain(mu.extended())?;
    let base = *mu.domain();
    if radii.is_empty() {
        return Err(Error::InvalidArgument("no exhaustion radii".into()));
    }
    if taylor_degree == 0 {
        return Err(Error::InvalidArgument(
            "taylor degree must be at least 1".into(),
        ));
    }
    if radii[0] <= 0.0 || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(format!(
            "radii {radii:?} must be positive and increasing"
        )));
    }
    let last = radii[radii.len() - 1];
    if last + base.margin() >= base.half_width() {
        return Err(Error::InvalidArgument(format!(
            "last radius {last} plus margin {} must stay below half width {}",
            base.margin(),
            base.half_width()
        )));
    }

    let mut trace = Vec::with_capacity(radii.len());
    let mut prev: Option<ComplexField> = None;
    let mut last = None;
    for (n, &r) in radii.iter().enumerate() {
        let dom = base.with_omega(Omega::Disc {
            center: Complex64::new(0.0, 0.0),
            radius: r,
        })?;
        let mu_n = mu.restricted(dom)?;
        let u_n = u.retagged(dom)?.tapered();
        let sol = solve_dbar(&mu_n, &u_n, cfg)?;
        last = Some((mu_n, sol.g.clone(), u_n));
        let budget = cfg.runge_tol * 0.5f64.powi(n as i32);
        let Some(prev_f) = prev.take() else {
            trace.push(ExhaustionStep {
                step: 0,
                radius: r,
                iterations: sol.diagnostics.iterations,
                correction_sup: 0.0,
                budget,
                polynomial_sup: 0.0,
            });
            prev = Some(sol.f);
            continue;
        };
        let prev_r = radii[n - 1];
        let prev_f = prev_f.retagged(dom)?;
        let diff = (&sol.f - &prev_f)?;
        let proj = taylor_project(
            &diff,
            Complex64::new(0.0, 0.0),
            taylor_degree,
            CIRCLE_FRACTION * prev_r,
        )?;
        let f = sol.f.map_with_point(|z, v| v - proj.evaluate(z));
        let idx = disc_indices(&f, prev_r);
        let correction_sup = idx
            .iter()
            .map(|&k| (f.samples()[k] - prev_f.samples()[k]).norm())
            .fold(0.0, f64::max);
        let polynomial_sup = idx
            .iter()
            .map(|&k| proj.evaluate(f.domain().point_at(k)).norm())
            .fold(0.0, f64::max);
        if !(correction_sup <= budget) {
            return Err(Error::RungeApproximationFailure {
                step: n,
                error: correction_sup,
                budget,
            });
        }
        trace.push(ExhaustionStep {
            step: n,
            radius: r,
            iterations: sol.diagnostics.iterations,
            correction_sup,
            budget,
            polynomial_sup,
        });
        prev = Some(f);
    }
    let (mu, g, u) = last.expect("at least one radius");
    Ok(ExhaustionResult {
        f: prev.expect("at least one radius"),
        trace,
        mu,
        g,
        u,
    })
}
