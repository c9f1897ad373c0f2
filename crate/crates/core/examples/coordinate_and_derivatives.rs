//! Grid fields, Wirtinger derivatives and the sampled Hölder seminorm.
use beltrami::{make_coordinate_field, DomainSpec, Region};

fn main() -> beltrami::Result<()> {
    let d = DomainSpec::unit_disc(128)?;
    println!("grid {}x{} on [-{L}, {L}]^2, h = {}", d.resolution(), d.resolution(), d.spacing(), L = d.half_width());

    let z = make_coordinate_field(d);
    let f = z.map(|z| z * z * z + z.conj() * 0.5); // z³ + z̄/2

    // ∂_z f = 3z², ∂_z̄ f = 1/2 away from the rectangle edge.
    let dz_err = f.dz().max_diff_over(&z.map(|z| 3.0 * z * z), Region::Omega)?;
    let dbar_err = f.dbar().max_diff_over(&z.map(|_| 0.5.into()), Region::Omega)?;
    println!("|∂_z f - 3z²| on Ω  = {dz_err:.2e}");
    println!("|∂_z̄ f - 1/2| on Ω = {dbar_err:.2e}");

    for alpha in [0.25, 0.5, 0.75] {
        let s = f.holder_seminorm_over(Region::Interior, alpha, 20_000, 7)?;
        println!("C^{alpha} seminorm of f over the interior ≈ {s:.4}");
    }
    Ok(())
}
