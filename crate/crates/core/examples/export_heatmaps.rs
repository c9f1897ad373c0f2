//! Writes a solution as a binary field, CSV and |f| / arg f heatmaps.
//!
//!     cargo run --example export_heatmaps -- /tmp/heatmaps
use beltrami::io::{load_field, save_field, write_csv, write_heatmaps};
use beltrami::{solve_immersion, BeltramiField, ComplexField, DomainSpec, SolverConfig};

fn main() -> beltrami::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "heatmaps".into());
    std::fs::create_dir_all(&dir)?;

    let d = DomainSpec::unit_disc(128)?;
    let mu = BeltramiField::new(ComplexField::from_fn(d, |z| 0.4 * (z * 2.0).sin() / 2.0))?;
    let h = solve_immersion(&mu, &SolverConfig::default())?.h;

    let path = std::path::Path::new(&dir).join("h.field");
    save_field(&path, &h)?;
    let back = load_field(&path)?;
    assert_eq!(back.into_field(d)?, h);

    write_csv(std::fs::File::create(std::path::Path::new(&dir).join("h.csv"))?, &h)?;
    let [abs, arg] = write_heatmaps(&dir, "h", &h)?;
    println!("wrote {}, {}, {} and h.csv", path.display(), abs.display(), arg.display());
    Ok(())
}
