//! One-forms in the background frame `(dz, dz̄)` and in the moving frame
//! `(dh_μ, dh̄_μ)`, the `∂̄_{J_μ}` solver, and parameter sweeps over families
//! of Beltrami coefficients.
//!
//! A `(0,1)`-form for `J_μ` is `β = u dh̄_μ`. Writing `f_h̄_μ = u` in the
//! background coordinate gives the nonhomogeneous Beltrami equation
//!
//! ```text
//! f_z̄ - μ f_z = (1 - |μ|²) ḡ_μ u,      g_μ = ∂_z h_μ,
//! ```
//!
//! which is solved as `f = P(φ)` with `(I - μS) φ = (1 - |μ|²) ḡ_μ u`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::beltrami::BeltramiField;
use crate::domain::Region;
use crate::error::{Error, Result};
use crate::field::ComplexField;
use crate::solver::{
    beltrami_defect, neumann_solve, solve_immersion, ImmersionResult, SolverConfig,
};
use crate::transforms::cauchy_transform;

/// Below this, `|g|` or `1 - |μ|²` make the frame change singular.
pub const FRAME_DEGENERACY_TOL: f64 = 1e-12;

/// Relative size of `A_μ` below which a form counts as `(0,1)` for `J_μ`.
pub const TYPE_01_TOL: f64 = 1e-8;

/// Identifies the coefficient a moving frame was built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MuId(u64);

impl MuId {
    /// FNV-1a over the bits of the extended coefficient.
    pub fn of(mu: &BeltramiField) -> Self {
        let mut h: u64 = 0xcbf29ce484222325;
        for v in mu.extended().samples() {
            for bits in [v.re.to_bits(), v.im.to_bits()] {
                for byte in bits.to_le_bytes() {
                    h ^= byte as u64;
                    h = h.wrapping_mul(0x100000001b3);
                }
            }
        }
        MuId(h)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Frame {
    /// `β = A dz + B dz̄`.
    Background,
    /// `β = A_μ dh_μ + B_μ dh̄_μ`.
    Moving(MuId),
}

#[derive(Clone, Debug, PartialEq)]
pub struct OneFormField {
    frame: Frame,
    coeff_10: ComplexField,
    coeff_01: ComplexField,
}

impl OneFormField {
    pub fn new(frame: Frame, coeff_10: ComplexField, coeff_01: ComplexField) -> Result<Self> {
        coeff_10.check_same_domain(&coeff_01)?;
        Ok(Self {
            frame,
            coeff_10,
            coeff_01,
        })
    }

    pub fn background(a: ComplexField, b: ComplexField) -> Result<Self> {
        Self::new(Frame::Background, a, b)
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    /// `A` (background) or `A_μ` (moving).
    pub fn coeff_10(&self) -> &ComplexField {
        &self.coeff_10
    }

    /// `B` (background) or `B_μ` (moving).
    pub fn coeff_01(&self) -> &ComplexField {
        &self.coeff_01
    }

    /// Whether the `(1,0)` coefficient is negligible relative to the `(0,1)` one.
    pub fn is_type_01(&self, rel_tol: f64) -> bool {
        let a = self.coeff_10.sup_norm(false);
        let b = self.coeff_01.sup_norm(false);
        a <= rel_tol * b.max(f64::MIN_POSITIVE)
    }
}

fn check_frame_inputs(mu: &BeltramiField, g: &ComplexField) -> Result<()> {
    g.check_same_domain(mu.extended())?;
    let d = *g.domain();
    for k in d.indices(Region::Interior) {
        let gk = g.samples()[k].norm();
        let m2 = 1.0 - mu.extended().samples()[k].norm_sqr();
        if gk <= FRAME_DEGENERACY_TOL || m2 <= FRAME_DEGENERACY_TOL {
            return Err(Error::DegenerateFrame(format!(
                "|g| = {gk:e}, 1 - |mu|^2 = {m2:e} at {}",
                d.point_at(k)
            )));
        }
    }
    Ok(())
}

/// `A_μ = (A - μ̄B) / ((1 - |μ|²) g)`, `B_μ = (B - μA) / ((1 - |μ|²) ḡ)`.
///
/// Evaluated pointwise; at points outside the interior of `Ω` where the
/// denominators vanish both coefficients are set to 0.
pub fn convert_to_moving(
    form: &OneFormField,
    mu: &BeltramiField,
    g: &ComplexField,
) -> Result<OneFormField> {
    if form.frame != Frame::Background {
        return Err(Error::InvalidArgument(
            "form is not in the background frame".into(),
        ));
    }
    form.coeff_10.check_same_domain(g)?;
    check_frame_inputs(mu, g)?;
    let d = *g.domain();
    let (a_mu, b_mu): (Vec<Complex64>, Vec<Complex64>) = (0..d.len())
        .into_par_iter()
        .map(|k| {
            let a = form.coeff_10.samples()[k];
            let b = form.coeff_01.samples()[k];
            let m = mu.extended().samples()[k];
            let gk = g.samples()[k];
            let w = 1.0 - m.norm_sqr();
            if gk.norm() <= FRAME_DEGENERACY_TOL || w <= FRAME_DEGENERACY_TOL {
                return (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            }
            ((a - m.conj() * b) / (gk * w), (b - m * a) / (gk.conj() * w))
        })
        .unzip();
    Ok(OneFormField {
        frame: Frame::Moving(MuId::of(mu)),
        coeff_10: ComplexField::from_vec(d, a_mu),
        coeff_01: ComplexField::from_vec(d, b_mu),
    })
}

/// `A = A_μ g + B_μ μ̄ ḡ`, `B = A_μ μ g + B_μ ḡ`.
pub fn convert_to_background(
    form: &OneFormField,
    mu: &BeltramiField,
    g: &ComplexField,
) -> Result<OneFormField> {
    match form.frame {
        Frame::Moving(id) if id == MuId::of(mu) => {}
        Frame::Moving(_) => {
            return Err(Error::InvalidArgument(
                "form was built for a different coefficient".into(),
            ))
        }
        Frame::Background => {
            return Err(Error::InvalidArgument(
                "form is already in the background frame".into(),
            ))
        }
    }
    form.coeff_10.check_same_domain(g)?;
    check_frame_inputs(mu, g)?;
    let d = *g.domain();
    let (a, b): (Vec<Complex64>, Vec<Complex64>) = (0..d.len())
        .into_par_iter()
        .map(|k| {
            let am = form.coeff_10.samples()[k];
            let bm = form.coeff_01.samples()[k];
            let m = mu.extended().samples()[k];
            let gk = g.samples()[k];
            (
                am * gk + bm * m.conj() * gk.conj(),
                am * m * gk + bm * gk.conj(),
            )
        })
        .unzip();
    Ok(OneFormField {
        frame: Frame::Background,
        coeff_10: ComplexField::from_vec(d, a),
        coeff_01: ComplexField::from_vec(d, b),
    })
}

#[derive(Clone, Debug)]
pub struct DbarDiagnostics {
    /// `sup |f_z̄ - μ f_z - (1 - |μ|²) ḡ_μ u|` over the interior of `Ω`.
    pub residual: f64,
    /// `sup |(f_z̄ - μ f_z) / ((1 - |μ|²) ḡ_μ) - u|` over the interior of `Ω`.
    pub moving_residual: f64,
    pub iterations: usize,
    pub final_residual: f64,
    pub trace: Vec<f64>,
    pub immersion_iterations: usize,
    pub contraction: f64,
}

#[derive(Clone, Debug)]
pub struct DbarSolution {
    pub f: ComplexField,
    /// Right-hand side `(1 - |μ|²) ḡ_μ u` of the Beltrami form.
    pub rhs: ComplexField,
    pub g: ComplexField,
    pub diagnostics: DbarDiagnostics,
}

/// `(1 - |μ|²) ḡ u`, pointwise with the extended coefficient.
pub fn dbar_rhs(mu: &BeltramiField, g: &ComplexField, u: &ComplexField) -> Result<ComplexField> {
    u.check_same_domain(g)?;
    u.check_same_domain(mu.extended())?;
    let samples = u
        .samples()
        .iter()
        .zip(g.samples())
        .zip(mu.extended().samples())
        .map(|((&u, &g), &m)| g.conj() * u * (1.0 - m.norm_sqr()))
        .collect();
    Ok(ComplexField::from_vec(*u.domain(), samples))
}

/// Background and moving-frame residuals of `f` over the interior of `Ω`:
/// `sup |f_z̄ - μ f_z - (1 - |μ|²) ḡ u|` and
/// `sup |(f_z̄ - μ f_z) / ((1 - |μ|²) ḡ) - u|`.
pub fn dbar_residuals(
    f: &ComplexField,
    mu: &BeltramiField,
    g: &ComplexField,
    u: &ComplexField,
) -> Result<(f64, f64)> {
    let rhs = dbar_rhs(mu, g, u)?;
    let defect = beltrami_defect(f, mu, &rhs)?;
    let idx = f.domain().indices(Region::Interior);
    let residual = defect.sup_norm_over(Region::Interior);
    let moving_residual = idx
        .into_iter()
        .map(|k| {
            let m = mu.extended().samples()[k];
            let w = g.samples()[k].conj() * (1.0 - m.norm_sqr());
            ((defect.samples()[k] + rhs.samples()[k]) / w - u.samples()[k]).norm()
        })
        .fold(0.0, f64::max);
    Ok((residual, moving_residual))
}

/// Solves `∂̄_{J_μ} f = u dh̄_μ` on `Ω`; `u` is the moving-frame `(0,1)`
/// coefficient, already cut off to the collar.
pub fn solve_dbar(
    mu: &BeltramiField,
    u: &ComplexField,
    cfg: &SolverConfig,
) -> Result<DbarSolution> {
    let immersion = solve_immersion(mu, cfg)?;
    solve_dbar_with(mu, &immersion, u, cfg)
}

/// As [`solve_dbar`], reusing an immersion already computed for `mu`.
pub fn solve_dbar_with(
    mu: &BeltramiField,
    immersion: &ImmersionResult,
    u: &ComplexField,
    cfg: &SolverConfig,
) -> Result<DbarSolution> {
    let g = &immersion.g;
    let rhs = dbar_rhs(mu, g, u)?;
    let sol = neumann_solve(mu, &rhs, cfg)?;
    let f = cauchy_transform(&sol.phi, cfg.method);
    let (residual, moving_residual) = dbar_residuals(&f, mu, g, u)?;
    Ok(DbarSolution {
        f,
        rhs,
        g: g.clone(),
        diagnostics: DbarDiagnostics {
            residual,
            moving_residual,
            iterations: sol.iterations,
            final_residual: sol.final_residual,
            trace: sol.trace,
            immersion_iterations: immersion.iterations,
            contraction: sol.contraction,
        },
    })
}

/// Solves `∂̄_{J_μ} f = β` for a `(0,1)`-form given in either frame.
pub fn solve_dbar_form(
    mu: &BeltramiField,
    form: &OneFormField,
    cfg: &SolverConfig,
) -> Result<DbarSolution> {
    let immersion = solve_immersion(mu, cfg)?;
    let moving = match form.frame {
        Frame::Background => convert_to_moving(form, mu, &immersion.g)?,
        Frame::Moving(id) if id == MuId::of(mu) => form.clone(),
        Frame::Moving(_) => {
            return Err(Error::InvalidArgument(
                "form was built for a different coefficient".into(),
            ))
        }
    };
    if !moving.is_type_01(TYPE_01_TOL) {
        return Err(Error::InvalidArgument(
            "form is not of type (0,1) for this structure".into(),
        ));
    }
    solve_dbar_with(mu, &immersion, &moving.coeff_01, cfg)
}

#[derive(Clone, Debug)]
pub enum FamilyLaw {
    /// `μ_b = b·μ₀`.
    Linear,
    /// One coefficient per grid parameter.
    Table(Vec<BeltramiField>),
}

#[derive(Clone, Debug)]
pub struct FamilySpec {
    base_mu: BeltramiField,
    parameter_grid: Vec<f64>,
    law: FamilyLaw,
}

impl FamilySpec {
    pub fn new(base_mu: BeltramiField, parameter_grid: Vec<f64>, law: FamilyLaw) -> Result<Self> {
        if parameter_grid.is_empty() {
            return Err(Error::InvalidArgument("empty parameter grid".into()));
        }
        if let Some(b) = parameter_grid.iter().find(|b| !(0.0..=1.0).contains(*b)) {
            return Err(Error::InvalidArgument(format!(
                "parameter {b} outside [0, 1]"
            )));
        }
        if let FamilyLaw::Table(table) = &law {
            if table.len() != parameter_grid.len() {
                return Err(Error::InvalidArgument(format!(
                    "table has {} coefficients for {} parameters",
                    table.len(),
                    parameter_grid.len()
                )));
            }
            if table.iter().any(|m| m.domain() != base_mu.domain()) {
                return Err(Error::DomainMismatch);
            }
        }
        Ok(Self {
            base_mu,
            parameter_grid,
            law,
        })
    }

    pub fn linear(base_mu: BeltramiField, parameter_grid: Vec<f64>) -> Result<Self> {
        Self::new(base_mu, parameter_grid, FamilyLaw::Linear)
    }

    pub fn parameter_grid(&self) -> &[f64] {
        &self.parameter_grid
    }

    pub fn base_mu(&self) -> &BeltramiField {
        &self.base_mu
    }

    /// The same family with the parameter grid (and table) in reverse order.
    pub fn reversed(&self) -> Self {
        let law = match &self.law {
            FamilyLaw::Linear => FamilyLaw::Linear,
            FamilyLaw::Table(t) => FamilyLaw::Table(t.iter().rev().cloned().collect()),
        };
        Self {
            base_mu: self.base_mu.clone(),
            parameter_grid: self.parameter_grid.iter().rev().copied().collect(),
            law,
        }
    }

    /// `μ_b` for the `index`-th grid parameter.
    pub fn mu_at(&self, index: usize) -> Result<BeltramiField> {
        match &self.law {
            FamilyLaw::Linear => self.base_mu.scaled(self.parameter_grid[index]),
            FamilyLaw::Table(t) => Ok(t[index].clone()),
        }
    }
}

#[derive(Debug)]
pub struct FamilyEntry {
    pub b: f64,
    pub solution: Result<DbarSolution>,
}

#[derive(Debug)]
pub struct FamilyReport {
    pub entries: Vec<FamilyEntry>,
    /// `max |f_b - f_b'|` over the interior of `Ω` to the previous entry.
    pub adjacent_differences: Vec<Option<f64>>,
    /// Smallest `C` with `max |f_b - f_b'| <= C |b - b'|` over adjacent pairs.
    pub lipschitz_constant: Option<f64>,
    /// Error of quadratic extrapolation from the three previous entries.
    pub extrapolation_errors: Vec<Option<f64>>,
}

/// Solves `∂̄_{J_b} f_b = u_b dh̄_b` for every grid parameter. Parameters are
/// solved independently (in parallel); a failed solve is reported in its
/// entry and does not abort the sweep.
pub fn solve_family(
    family: &FamilySpec,
    u_family: &[ComplexField],
    cfg: &SolverConfig,
) -> Result<FamilyReport> {
    let grid = &family.parameter_grid;
    if u_family.len() != grid.len() {
        return Err(Error::InvalidArgument(format!(
            "{} data fields for {} parameters",
            u_family.len(),
            grid.len()
        )));
    }
    for u in u_family {
        u.check_same_domain(family.base_mu.extended())?;
    }
    cfg.validate()?;
    let entries: Vec<FamilyEntry> = (0..grid.len())
        .into_par_iter()
        .map(|k| FamilyEntry {
            b: grid[k],
            solution: family
                .mu_at(k)
                .and_then(|mu| solve_dbar(&mu, &u_family[k], cfg)),
        })
        .collect();

    let field = |k: usize| entries[k].solution.as_ref().ok().map(|s| &s.f);
    let adjacent_differences: Vec<Option<f64>> = (0..entries.len())
        .map(|k| {
            if k == 0 {
                return None;
            }
            let (a, b) = (field(k - 1)?, field(k)?);
            a.max_diff_over(b, Region::Interior).ok()
        })
        .collect();
    let lipschitz_constant = adjacent_differences
        .iter()
        .enumerate()
        .filter_map(|(k, d)| {
            let step = (grid[k] - grid[k.checked_sub(1)?]).abs();
            d.filter(|_| step > 0.0).map(|d| d / step)
        })
        .reduce(f64::max);
    let extrapolation_errors = (0..entries.len())
        .map(|k| {
            if k < 3 {
                return None;
            }
            let fs = [field(k - 3)?, field(k - 2)?, field(k - 1)?, field(k)?];
            let bs = [grid[k - 3], grid[k - 2], grid[k - 1], grid[k]];
            extrapolation_error(fs, bs)
        })
        .collect();
    Ok(FamilyReport {
        entries,
        adjacent_differences,
        lipschitz_constant,
        extrapolation_errors,
    })
}

/// `sup |f_3 - q(b_3)|` over the interior of `Ω`, where `q` is the quadratic
/// in `b` through `(b_0, f_0), (b_1, f_1), (b_2, f_2)`.
pub fn extrapolation_error(fields: [&ComplexField; 4], params: [f64; 4]) -> Option<f64> {
    let [b0, b1, b2, t] = params;
    if b0 == b1 || b1 == b2 || b0 == b2 {
        return None;
    }
    let l0 = (t - b1) * (t - b2) / ((b0 - b1) * (b0 - b2));
    let l1 = (t - b0) * (t - b2) / ((b1 - b0) * (b1 - b2));
    let l2 = (t - b0) * (t - b1) / ((b2 - b0) * (b2 - b1));
    let d = *fields[0].domain();
    if fields.iter().any(|f| *f.domain() != d) {
        return None;
    }
    let err = d
        .indices(Region::Interior)
        .into_iter()
        .map(|k| {
            let q = fields[0].samples()[k] * l0
                + fields[1].samples()[k] * l1
                + fields[2].samples()[k] * l2;
            (fields[3].samples()[k] - q).norm()
        })
        .fold(0.0, f64::max);
    Some(err)
}

impl FamilyReport {
    /// Largest extrapolation error on the full grid and on the grid with
    /// every other parameter dropped, for the analyticity surrogate: for a
    /// smooth dependence the coarse error should be about 8x the fine one.
    pub fn extrapolation_refinement(&self) -> Option<(f64, f64)> {
        let fine = self
            .extrapolation_errors
            .iter()
            .flatten()
            .copied()
            .reduce(f64::max)?;
        let coarse_idx: Vec<usize> = (0..self.entries.len()).step_by(2).collect();
        let coarse = coarse_idx
            .windows(4)
            .filter_map(|w| {
                let f = |k: usize| self.entries[k].solution.as_ref().ok().map(|s| &s.f);
                let fs = [f(w[0])?, f(w[1])?, f(w[2])?, f(w[3])?];
                let bs = w.iter().map(|&k| self.entries[k].b).collect::<Vec<_>>();
                extrapolation_error(fs, [bs[0], bs[1], bs[2], bs[3]])
            })
            .reduce(f64::max)?;
        Some((coarse, fine))
    }
}

/// Grid-level Hölder seminorms of the data and of both derivatives of the
/// solution over the interior of `Ω`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GainReport {
    pub alpha: f64,
    pub u_seminorm: f64,
    pub dz_seminorm: f64,
    pub dbar_seminorm: f64,
}

pub const GAIN_PAIRS: usize = 20_000;
pub const GAIN_SEED: u64 = 0x5eed;

pub fn gain_of_derivative_report(
    u: &ComplexField,
    f: &ComplexField,
    alpha: f64,
) -> Result<GainReport> {
    let h =
        |x: &ComplexField| x.holder_seminorm_over(Region::Interior, alpha, GAIN_PAIRS, GAIN_SEED);
    Ok(GainReport {
        alpha,
        u_seminorm: h(u)?,
        dz_seminorm: h(&f.dz())?,
        dbar_seminorm: h(&f.dbar())?,
    })
}

impl GainReport {
    /// `(|∂_z f|_α / |u|_α, |∂_z̄ f|_α / |u|_α)`, `None` when `u` has zero seminorm.
    pub fn ratios(&self) -> Option<(f64, f64)> {
        (self.u_seminorm > 0.0).then(|| {
            (
                self.dz_seminorm / self.u_seminorm,
                self.dbar_seminorm / self.u_seminorm,
            )
        })
    }

    /// Largest factor by which any seminorm changes between two resolutions.
    pub fn refinement_factor(&self, finer: &GainReport) -> f64 {
        [
            (self.u_seminorm, finer.u_seminorm),
            (self.dz_seminorm, finer.dz_seminorm),
            (self.dbar_seminorm, finer.dbar_seminorm),
        ]
        .into_iter()
        .map(|(a, b)| {
            if a == 0.0 && b == 0.0 {
                1.0
            } else {
                (a / b).max(b / a)
            }
        })
        .fold(1.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DomainSpec;
    use crate::field::make_coordinate_field;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn wavy(d: DomainSpec, a: f64, b: f64) -> ComplexField {
        ComplexField::from_fn(d, |z| c((a * z.re).sin() + b, (b * z.im).cos() * a))
    }

    #[test]
    fn identity_frame_for_zero_mu() {
        let d = DomainSpec::unit_disc(32).unwrap();
        let mu = BeltramiField::zero(d);
        let g = ComplexField::constant(d, c(1.0, 0.0));
        let form = OneFormField::background(wavy(d, 1.0, 2.0), wavy(d, 3.0, -1.0)).unwrap();
        let m = convert_to_moving(&form, &mu, &g).unwrap();
        assert_eq!(m.coeff_10(), form.coeff_10());
        assert_eq!(m.coeff_01(), form.coeff_01());
        let back = convert_to_background(&m, &mu, &g).unwrap();
        assert_eq!(back, form);
    }

    #[test]
    fn background_of_pure_conjugate_differential() {
        let d = DomainSpec::unit_disc(32).unwrap();
        let cst = c(0.2, -0.1);
        let mu = BeltramiField::constant(d, cst).unwrap();
        let g = ComplexField::constant(d, c(1.0, 0.0));
        let form = OneFormField::new(
            Frame::Moving(MuId::of(&mu)),
            ComplexField::zeros(d),
            ComplexField::constant(d, c(1.0, 0.0)),
        )
        .unwrap();
        let back = convert_to_background(&form, &mu, &g).unwrap();
        let interior = Region::Omega;
        let want_a = ComplexField::constant(d, cst.conj());
        assert!(back.coeff_10().max_diff_over(&want_a, interior).unwrap() <= 1e-15);
        assert!(
            back.coeff_01()
                .max_diff_over(&ComplexField::constant(d, c(1.0, 0.0)), interior)
                .unwrap()
                <= 1e-15
        );
    }

    #[test]
    fn compatible_form_has_no_10_part() {
        let d = DomainSpec::unit_disc(32).unwrap();
        let mu = BeltramiField::new(make_coordinate_field(d).scale(c(0.2, 0.1))).unwrap();
        let g = wavy(d, 1.0, 0.5).map(|v| v + 2.0);
        let b = wavy(d, 2.0, 1.0);
        let a = mu.extended().conj().zip_with(&b, |m, b| m * b).unwrap();
        let m = convert_to_moving(&OneFormField::background(a, b).unwrap(), &mu, &g).unwrap();
        assert!(m.coeff_10().sup_norm(false) <= 1e-12);
        assert!(m.is_type_01(1e-10));
    }

    #[test]
    fn frame_mismatch_is_rejected() {
        let d = DomainSpec::unit_disc(32).unwrap();
        let mu = BeltramiField::constant(d, c(0.2, 0.0)).unwrap();
        let other = BeltramiField::constant(d, c(0.1, 0.0)).unwrap();
        let g = ComplexField::constant(d, c(1.0, 0.0));
        let form = OneFormField::background(wavy(d, 1.0, 1.0), wavy(d, 1.0, 2.0)).unwrap();
        let m = convert_to_moving(&form, &mu, &g).unwrap();
        assert!(convert_to_background(&m, &other, &g).is_err());
        assert!(convert_to_moving(&m, &mu, &g).is_err());
    }

    #[test]
    fn degenerate_frame_detected() {
        let d = DomainSpec::unit_disc(32).unwrap();
        let mu = BeltramiField::zero(d);
        let g = ComplexField::zeros(d);
        let form = OneFormField::background(wavy(d, 1.0, 1.0), wavy(d, 1.0, 2.0)).unwrap();
        assert!(matches!(
            convert_to_moving(&form, &mu, &g),
            Err(Error::DegenerateFrame(_))
        ));
    }

    #[test]
    fn zero_data_gives_zero_solution() {
        let d = DomainSpec::unit_disc(64).unwrap();
        let mu = BeltramiField::constant(d, c(0.3, 0.0)).unwrap();
        let sol = solve_dbar(&mu, &ComplexField::zeros(d), &SolverConfig::default()).unwrap();
        assert!(sol.f.is_zero());
    }

    #[test]
    fn dbar_is_linear_in_data() {
        let d = DomainSpec::unit_disc(64).unwrap();
        let mu = BeltramiField::constant(d, c(0.2, 0.1)).unwrap();
        let cfg = SolverConfig {
            tol: 1e-13,
            ..Default::default()
        };
        let u1 = ComplexField::cutoff(d);
        let u2 = make_coordinate_field(d).map(|z| z * z).tapered();
        let (a, b) = (c(0.5, -1.0), c(2.0, 0.25));
        let combo = (&u1.scale(a) + &u2.scale(b)).unwrap();
        let f = solve_dbar(&mu, &combo, &cfg).unwrap().f;
        let f1 = solve_dbar(&mu, &u1, &cfg).unwrap().f;
        let f2 = solve_dbar(&mu, &u2, &cfg).unwrap().f;
        let sum = (&f1.scale(a) + &f2.scale(b)).unwrap();
        assert!(f.max_diff_over(&sum, Region::Rectangle).unwrap() <= 1e-10);
    }

    #[test]
    fn form_input_in_either_frame() {
        let d = DomainSpec::unit_disc(64).unwrap();
        let mu = BeltramiField::constant(d, c(0.2, 0.0)).unwrap();
        let cfg = SolverConfig::default();
        let imm = solve_immersion(&mu, &cfg).unwrap();
        let u = ComplexField::cutoff(d);
        let moving = OneFormField::new(
            Frame::Moving(MuId::of(&mu)),
            ComplexField::zeros(d),
            u.clone(),
        )
        .unwrap();
        let background = convert_to_background(&moving, &mu, &imm.g).unwrap();
        let direct = solve_dbar(&mu, &u, &cfg).unwrap();
        let via_bg = solve_dbar_form(&mu, &background, &cfg).unwrap();
        assert!(direct.f.max_diff_over(&via_bg.f, Region::Interior).unwrap() <= 1e-10);
        let not_01 = OneFormField::background(u.clone(), u.clone()).unwrap();
        assert!(solve_dbar_form(&mu, &not_01, &cfg).is_err());
    }

    #[test]
    fn single_point_family_is_solve_dbar() {
        let d = DomainSpec::unit_disc(32).unwrap();
        let mu = BeltramiField::constant(d, c(0.3, 0.0)).unwrap();
        let u = ComplexField::cutoff(d);
        let cfg = SolverConfig::default();
        let fam = FamilySpec::linear(mu.clone(), vec![1.0]).unwrap();
        let rep = solve_family(&fam, &[u.clone()], &cfg).unwrap();
        let direct = solve_dbar(&mu.scaled(1.0).unwrap(), &u, &cfg).unwrap();
        assert_eq!(rep.entries[0].solution.as_ref().unwrap().f, direct.f);
        assert_eq!(rep.lipschitz_constant, None);
    }

    #[test]
    fn parameter_free_family_and_reversal() {
        let d = DomainSpec::unit_disc(32).unwrap();
        let u = ComplexField::cutoff(d);
        let cfg = SolverConfig::default();
        let zero = FamilySpec::linear(BeltramiField::zero(d), vec![0.0, 0.5, 1.0]).unwrap();
        let rep = solve_family(&zero, &vec![u.clone(); 3], &cfg).unwrap();
        let f0 = &rep.entries[0].solution.as_ref().unwrap().f;
        for e in &rep.entries {
            assert_eq!(&e.solution.as_ref().unwrap().f, f0);
        }

        let mu0 = BeltramiField::new(ComplexField::cutoff(d).scale_real(0.3)).unwrap();
        let fam = FamilySpec::linear(mu0, vec![0.0, 0.25, 0.5, 0.75, 1.0]).unwrap();
        let fwd = solve_family(&fam, &vec![u.clone(); 5], &cfg).unwrap();
        let rev = solve_family(&fam.reversed(), &vec![u; 5], &cfg).unwrap();
        for (a, b) in fwd.entries.iter().zip(rev.entries.iter().rev()) {
            assert_eq!(a.b, b.b);
            assert_eq!(
                a.solution.as_ref().unwrap().f,
                b.solution.as_ref().unwrap().f
            );
        }
        assert!(fwd.lipschitz_constant.unwrap() > 0.0);
    }

    #[test]
    fn malformed_family_input() {
        let d = DomainSpec::unit_disc(32).unwrap();
        let mu = BeltramiField::zero(d);
        assert!(FamilySpec::linear(mu.clone(), vec![]).is_err());
        assert!(FamilySpec::linear(mu.clone(), vec![0.5, 1.5]).is_err());
        assert!(FamilySpec::new(
            mu.clone(),
            vec![0.0, 1.0],
            FamilyLaw::Table(vec![mu.clone()])
        )
        .is_err());
        let fam = FamilySpec::linear(mu, vec![0.0, 1.0]).unwrap();
        assert!(solve_family(&fam, &[ComplexField::zeros(d)], &SolverConfig::default()).is_err());
    }

    #[test]
    fn failed_parameter_does_not_abort_sweep() {
        let d = DomainSpec::unit_disc(32).unwrap();
        let mu = BeltramiField::constant(d, c(0.3, 0.0)).unwrap();
        let fam = FamilySpec::linear(mu, vec![0.0, 1.0]).unwrap();
        let u = ComplexField::cutoff(d);
        let cfg = SolverConfig {
            max_iter: 2,
            ..Default::default()
        };
        let rep = solve_family(&fam, &[u.clone(), u], &cfg).unwrap();
        assert!(rep.entries[0].solution.is_ok());
        assert!(matches!(
            rep.entries[1].solution,
            Err(Error::NoConvergence { .. })
        ));
        assert_eq!(rep.adjacent_differences, vec![None, None]);
    }

    #[test]
    fn extrapolation_is_exact_for_quadratics() {
        let d = DomainSpec::unit_disc(16).unwrap();
        let base = make_coordinate_field(d);
        let at = |b: f64| base.map(|z| z * (1.0 + 2.0 * b - 0.5 * b * b));
        let fs = [at(0.0), at(0.1), at(0.3), at(0.7)];
        let e =
            extrapolation_error([&fs[0], &fs[1], &fs[2], &fs[3]], [0.0, 0.1, 0.3, 0.7]).unwrap();
        assert!(e <= 1e-13);
    }

    #[test]
    fn gain_report_of_zero_data() {
        let d = DomainSpec::unit_disc(32).unwrap();
        let z = ComplexField::zeros(d);
        let r = gain_of_derivative_report(&z, &z, 0.5).unwrap();
        assert_eq!(
            (r.u_seminorm, r.dz_seminorm, r.dbar_seminorm),
            (0.0, 0.0, 0.0)
        );
        assert_eq!(r.ratios(), None);
    }
}
