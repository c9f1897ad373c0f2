//! ∂̄ for a variable complex structure with data given in the background
//! frame: β = A dz + B dz̄ with A = μ̄B is of type (0,1) for J_μ.
use beltrami::family::{convert_to_moving, solve_dbar_form};
use beltrami::{
    make_coordinate_field, solve_immersion, BeltramiField, ComplexField, DomainSpec, OneFormField, Region,
    SolverConfig,
};

fn main() -> beltrami::Result<()> {
    let d = DomainSpec::unit_disc(256)?;
    let cfg = SolverConfig::default();
    let z = make_coordinate_field(d);
    let mu = BeltramiField::new(z.map(|z| 0.2 * z + 0.1 * z * z))?;

    let b = ComplexField::from_fn(d, |z| (-z.norm_sqr()).exp().into()).tapered();
    let a = mu.extended().conj().zip_with(&b, |m, b| m * b)?;
    let form = OneFormField::background(a, b)?;

    let g = solve_immersion(&mu, &cfg)?.g;
    let moving = convert_to_moving(&form, &mu, &g)?;
    println!("|A_μ| = {:.1e} (form is (0,1))", moving.coeff_10().sup_norm(false));

    let sol = solve_dbar_form(&mu, &form, &cfg)?;
    let diag = &sol.diagnostics;
    println!("{} Neumann iterations, final residual {:.1e}", diag.iterations, diag.final_residual);
    println!("background residual  |f_z̄ - μ f_z - (1-|μ|²) ḡ u| = {:.2e}", diag.residual);
    println!("moving-frame residual |f_h̄ - u|                  = {:.2e}", diag.moving_residual);
    println!("sup |f| on Ω = {:.4}", sol.f.sup_norm_over(Region::Omega));
    Ok(())
}
