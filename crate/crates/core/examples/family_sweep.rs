//! Sweep μ_b = b·μ₀ over a parameter grid and look at how f_b depends on b.
use beltrami::cli::{builtin_field, FieldSpec};
use beltrami::io::write_family_csv;
use beltrami::{solve_family, BeltramiField, Complex64, DomainSpec, FamilySpec, SolverConfig};

fn main() -> beltrami::Result<()> {
    let d = DomainSpec::unit_disc(128)?;
    let disc = builtin_field(&FieldSpec::disc_indicator(Complex64::new(0.0, 0.0), 1.0), d)?;
    let mu0 = BeltramiField::new(disc.scale_real(0.3))?;
    let grid: Vec<f64> = (0..9).map(|k| k as f64 / 8.0).collect();
    let family = FamilySpec::linear(mu0, grid)?;

    let report = solve_family(&family, &vec![disc; 9], &SolverConfig::default())?;
    write_family_csv(std::io::stdout(), &report)?;

    if let Some(c) = report.lipschitz_constant {
        println!("\nLipschitz constant in b: {c:.4e}");
    }
    if let Some((coarse, fine)) = report.extrapolation_refinement() {
        println!("quadratic extrapolation error: {coarse:.2e} (δb = 1/4) vs {fine:.2e} (δb = 1/8), ratio {:.1}", coarse / fine);
    }
    Ok(())
}
