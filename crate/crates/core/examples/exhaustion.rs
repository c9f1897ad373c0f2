//! Solving ∂̄ on growing discs with Taylor-polynomial corrections.
use beltrami::io::write_exhaustion_csv;
use beltrami::{
    cauchy_transform, exhaustion_solve, make_coordinate_field, taylor_project, BeltramiField, Complex64,
    ComplexField, DomainSpec, Omega, Region, SolverConfig, TransformMethod,
};

fn main() -> beltrami::Result<()> {
    let origin = Complex64::new(0.0, 0.0);

    // Taylor coefficients from discrete Cauchy integrals.
    let d = DomainSpec::unit_disc(128)?;
    let f = make_coordinate_field(d).map(|z| z.exp());
    let p = taylor_project(&f, origin, 6, 0.8)?;
    for (k, a) in p.coefficients.iter().enumerate() {
        println!("a_{k} = {:.10}   (1/{k}! = {:.10})", a.re, 1.0 / (1..=k).product::<usize>() as f64);
    }
    let zbar = taylor_project(&make_coordinate_field(d).conj(), origin, 6, 0.8)?;
    println!("z̄ circle reconstruction error {:.2} -> not holomorphic", zbar.circle_error);

    // μ ≡ 0 and compactly supported data: the exhaustion reproduces P(u).
    let d = DomainSpec::new(3.0, 256, Omega::unit_disc(), 0.5)?;
    let u = ComplexField::from_fn(d, |z| (-(z - 0.1).norm_sqr() / 0.02).exp().into());
    let cfg = SolverConfig::default();
    let ex = exhaustion_solve(&BeltramiField::zero(d), &u, &[1.0, 1.5, 2.0], 8, &cfg)?;
    write_exhaustion_csv(std::io::stdout(), &ex.trace)?;
    let direct = cauchy_transform(&u, TransformMethod::Spectral);
    println!("|f - P u| on the unit disc = {:.2e}", ex.f.retagged(d)?.max_diff_over(&direct, Region::Omega)?);
    Ok(())
}
