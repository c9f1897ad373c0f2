//! Neumann-series inversion of `I - μS` and the immersions `h_μ = z + P(φ)`
//! solving the homogeneous Beltrami equation.

use num_complex::Complex64;

use crate::beltrami::BeltramiField;
use crate::domain::Region;
use crate::error::{Error, Result};
use crate::field::{make_coordinate_field, ComplexField};
use crate::transforms::{
    beurling_transform, cauchy_and_beurling, estimate_contraction_with, TransformMethod,
};

/// Below this `min |g|` on the interior an immersion is considered degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    /// Stop once the sup-norm residual `‖φ - μSφ - rhs‖` is at most this.
    pub tol: f64,
    pub max_iter: usize,
    /// Reject `μ` whose contraction estimate reaches this value.
    pub contraction_cap: f64,
    /// Power-iteration steps used for the contraction estimate.
    pub contraction_iterations: usize,
    pub method: TransformMethod,
    /// Base tolerance for the exhaustion step budget `2^-n · runge_tol`.
    pub runge_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 200,
            contraction_cap: 0.9,
            contraction_iterations: 8,
            method: TransformMethod::Spectral,
            runge_tol: 1e-2,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tol {} must be positive",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
        }
        if !(self.contraction_cap > 0.0 && self.contraction_cap < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "contraction cap {} not in (0, 1)",
                self.contraction_cap
            )));
        }
        if self.contraction_iterations == 0 {
            return Err(Error::InvalidArgument(
                "contraction_iterations must be at least 1".into(),
            ));
        }
        if !(self.runge_tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "runge_tol {} must be positive",
                self.runge_tol
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct NeumannSolution {
    pub phi: ComplexField,
    pub iterations: usize,
    pub final_residual: f64,
    /// Residual of every iterate, `trace[k] = ‖φ_k - μSφ_k - rhs‖`.
    pub trace: Vec<f64>,
    pub contraction: f64,
}

/// Solves `(I - μS) φ = rhs` by `φ_{k+1} = rhs + μ S φ_k`, `φ_0 = rhs`.
pub fn neumann_solve(
    mu: &BeltramiField,
    rhs: &ComplexField,
    cfg: &SolverConfig,
) -> Result<NeumannSolution> {
    cfg.validate()?;
    rhs.check_same_domain(mu.extended())?;
    if mu.is_zero() {
        return Ok(NeumannSolution {
            phi: rhs.clone(),
            iterations: 1,
            final_residual: 0.0,
            trace: vec![0.0],
            contraction: 0.0,
        });
    }
    let q = estimate_contraction_with(mu, cfg.contraction_iterations, cfg.method);
    if q >= cfg.contraction_cap {
        return Err(Error::ContractionTooLarge {
            q,
            cap: cfg.contraction_cap,
        });
    }
    let m = mu.extended().samples();
    let mut phi = rhs.clone();
    let mut trace = Vec::new();
    for k in 0..cfg.max_iter {
        let s = beurling_transform(&phi, cfg.method);
        let next: Vec<Complex64> = rhs
            .samples()
            .iter()
            .zip(m)
            .zip(s.samples())
            .map(|((&r, &mu), &s)| r + mu * s)
            .collect();
        let next = ComplexField::from_vec(*rhs.domain(), next);
        let residual = next.max_diff_over(&phi, Region::Rectangle)?;
        trace.push(residual);
        if residual <= cfg.tol {
            return Ok(NeumannSolution {
                phi,
                iterations: k + 1,
                final_residual: residual,
                trace,
                contraction: q,
            });
        }
        phi = next;
    }
    Err(Error::NoConvergence {
        iterations: cfg.max_iter,
        residual: trace.last().copied().unwrap_or(f64::NAN),
    })
}

#[derive(Clone, Debug)]
pub struct ImmersionResult {
    /// `h_μ = z + P(φ)`.
    pub h: ComplexField,
    /// `g_μ = ∂_z h_μ = 1 + S(φ)`.
    pub g: ComplexField,
    /// Fixed point of `φ = μ + μSφ`.
    pub phi: ComplexField,
    pub iterations: usize,
    pub final_residual: f64,
    pub trace: Vec<f64>,
    pub contraction: f64,
    /// `sup |∂_z̄ h - μ ∂_z h|` over the interior of `Ω`.
    pub beltrami_residual: f64,
    pub min_abs_g: f64,
}

pub fn solve_immersion(mu: &BeltramiField, cfg: &SolverConfig) -> Result<ImmersionResult> {
    let sol = neumann_solve(mu, mu.extended(), cfg)?;
    let domain = *mu.domain();
    let (p, s) = cauchy_and_beurling(&sol.phi, cfg.method);
    let h = (&make_coordinate_field(domain) + &p)?;
    let g = s.map(|v| v + 1.0);
    let min_abs_g = g.min_abs_over(Region::Interior);
    if !(min_abs_g > DEGENERACY_TOL) {
        return Err(Error::DegenerateImmersion { min_abs_g });
    }
    let residual = beltrami_residual(&h, mu, &ComplexField::zeros(domain))?;
    Ok(ImmersionResult {
        h,
        g,
        phi: sol.phi,
        iterations: sol.iterations,
        final_residual: sol.final_residual,
        trace: sol.trace,
        contraction: sol.contraction,
        beltrami_residual: residual,
        min_abs_g,
    })
}

/// `∂_z̄ h - μ ∂_z h - rhs` on the whole grid.
pub fn beltrami_defect(
    h: &ComplexField,
    mu: &BeltramiField,
    rhs: &ComplexField,
) -> Result<ComplexField> {
    h.check_same_domain(mu.extended())?;
    h.check_same_domain(rhs)?;
    let dbar = h.dbar();
    let dz = h.dz();
    let samples = dbar
        .samples()
        .iter()
        .zip(dz.samples())
        .zip(mu.extended().samples())
        .zip(rhs.samples())
        .map(|(((&a, &b), &m), &r)| a - m * b - r)
        .collect();
    Ok(ComplexField::from_vec(*h.domain(), samples))
}

/// `sup |∂_z̄ h - μ ∂_z h - rhs|` over the interior of `Ω`.
pub fn beltrami_residual(h: &ComplexField, mu: &BeltramiField, rhs: &ComplexField) -> Result<f64> {
    Ok(beltrami_defect(h, mu, rhs)?.sup_norm_over(Region::Interior))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DomainSpec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        assert!(SolverConfig {
            tol: 0.0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(SolverConfig {
            max_iter: 0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(SolverConfig {
            contraction_cap: 1.0,
            ..Default::default()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn zero_mu_returns_rhs_after_one_iteration() {
        let d = DomainSpec::unit_disc(32).unwrap();
        let rhs = ComplexField::cutoff(d).scale(c(0.2, 0.7));
        let sol = neumann_solve(&BeltramiField::zero(d), &rhs, &SolverConfig::default()).unwrap();
        assert_eq!(sol.phi, rhs);
        assert_eq!(sol.iterations, 1);
    }

    #[test]
    fn zero_mu_immersion_is_identity() {
        let d = DomainSpec::unit_disc(32).unwrap();
        let r = solve_immersion(&BeltramiField::zero(d), &SolverConfig::default()).unwrap();
        assert_eq!(r.h, make_coordinate_field(d));
        assert_eq!(r.g, ComplexField::constant(d, c(1.0, 0.0)));
    }

    #[test]
    fn residual_of_identity_and_conjugate() {
        let d = DomainSpec::unit_disc(256).unwrap();
        let zero = ComplexField::zeros(d);
        let mu0 = BeltramiField::zero(d);
        let z = make_coordinate_field(d);
        assert!(beltrami_residual(&z, &mu0, &zero).unwrap() <= 1e-12);
        let one = ComplexField::constant(d, c(1.0, 0.0));
        assert!(beltrami_residual(&z.conj().tapered(), &mu0, &one).unwrap() <= 1e-6);
        let affine = z.zip_with(&z.conj(), |a, b| a + b * 0.3).unwrap();
        let mu = BeltramiField::constant(d, c(0.3, 0.0)).unwrap();
        assert!(beltrami_residual(&affine, &mu, &zero).unwrap() <= 1e-6);
    }

    #[test]
    fn contraction_cap_is_enforced() {
        let d = DomainSpec::unit_disc(64).unwrap();
        let mu = BeltramiField::constant(d, c(0.3, 0.0)).unwrap();
        let cfg = SolverConfig {
            contraction_cap: 0.01,
            ..Default::default()
        };
        assert!(matches!(
            neumann_solve(&mu, mu.extended(), &cfg),
            Err(Error::ContractionTooLarge { .. })
        ));
    }

    #[test]
    fn iteration_cap_reports_no_convergence() {
        let d = DomainSpec::unit_disc(64).unwrap();
        let mu = BeltramiField::constant(d, c(0.3, 0.0)).unwrap();
        let cfg = SolverConfig {
            max_iter: 2,
            ..Default::default()
        };
        assert!(matches!(
            neumann_solve(&mu, mu.extended(), &cfg),
            Err(Error::NoConvergence { iterations: 2, .. })
        ));
    }

    #[test]
    fn residual_trace_decays() {
        let d = DomainSpec::unit_disc(64).unwrap();
        let mu = BeltramiField::new(make_coordinate_field(d).scale_real(0.3)).unwrap();
        let sol = neumann_solve(&mu, mu.extended(), &SolverConfig::default()).unwrap();
        assert!(sol.final_residual <= 1e-10);
        for w in sol.trace.windows(2).skip(1) {
            assert!(w[1] <= w[0], "{:?}", sol.trace);
        }
        // The returned iterate really has the reported residual.
        let s = beurling_transform(&sol.phi, TransformMethod::Spectral);
        let defect = sol
            .phi
            .zip_with(&(mu.extended() * &s).unwrap(), |p, ms| p - ms)
            .unwrap();
        let r = defect
            .max_diff_over(mu.extended(), Region::Rectangle)
            .unwrap();
        assert!((r - sol.final_residual).abs() <= 1e-15);
    }
}
