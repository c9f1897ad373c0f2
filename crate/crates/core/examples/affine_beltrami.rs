//! Homogeneous Beltrami equation with constant μ: the solution normalised by
//! ∂_z h → 1 is the affine map z + μ z̄.
use beltrami::{make_coordinate_field, solve_immersion, BeltramiField, Complex64, DomainSpec, Region, SolverConfig};

fn main() -> beltrami::Result<()> {
    let mu = Complex64::new(0.25, 0.15);
    let d = DomainSpec::unit_disc(256)?;
    let field = BeltramiField::constant(d, mu)?;
    let r = solve_immersion(&field, &SolverConfig::default())?;

    println!("contraction estimate q = {:.3}", r.contraction);
    for (k, res) in r.trace.iter().enumerate() {
        println!("  iteration {:2}: residual {res:.3e}", k + 1);
    }
    let exact = make_coordinate_field(d).map(|z| z + mu * z.conj());
    println!("|h - (z + μ z̄)| on interior = {:.2e}", r.h.max_diff_over(&exact, Region::Interior)?);
    println!("Beltrami residual            = {:.2e}", r.beltrami_residual);
    println!("min |g| on interior          = {:.6}", r.min_abs_g);
    Ok(())
}
