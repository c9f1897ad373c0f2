//! The Cauchy transform of a disc indicator is z̄ inside the disc, its
//! Beurling transform vanishes there. Both methods agree.
use beltrami::cli::{builtin_field, FieldSpec};
use beltrami::transforms::cauchy_and_beurling;
use beltrami::{make_coordinate_field, Complex64, DomainSpec, Region, TransformMethod};

fn main() -> beltrami::Result<()> {
    for n in [64, 128, 256] {
        let d = DomainSpec::unit_disc(n)?;
        let chi = builtin_field(&FieldSpec::disc_indicator(Complex64::new(0.0, 0.0), 1.0), d)?;
        let (p, s) = cauchy_and_beurling(&chi, TransformMethod::Spectral);
        let zbar = make_coordinate_field(d).conj();
        println!(
            "N={n:4}: |P χ - z̄| = {:.2e}, |S χ| = {:.2e} on the interior",
            p.max_diff_over(&zbar, Region::Interior)?,
            s.sup_norm_over(Region::Interior)
        );
    }

    // O(N^4) direct sum; keep it small.
    let d = DomainSpec::unit_disc(48)?;
    let chi = builtin_field(&FieldSpec::disc_indicator(Complex64::new(0.0, 0.0), 1.0), d)?;
    let (ps, ss) = cauchy_and_beurling(&chi, TransformMethod::Spectral);
    let (pq, sq) = cauchy_and_beurling(&chi, TransformMethod::Quadrature);
    println!(
        "spectral vs quadrature at N=48 on Ω: P {:.1e}, S {:.1e}",
        ps.max_diff_over(&pq, Region::Omega)?,
        ss.max_diff_over(&sq, Region::Omega)?
    );
    Ok(())
}
