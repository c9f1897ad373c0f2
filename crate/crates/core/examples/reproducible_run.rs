//! Drives the batch front-end in-process: build a config, run, verify.
use beltrami::cli::config::DomainConfig;
use beltrami::cli::{run_config, Command, Config, FieldSpec};
use beltrami::Complex64;

fn main() -> beltrami::Result<()> {
    let out = std::env::temp_dir().join("beltrami-reproducible-run");
    let mut cfg = Config::new(DomainConfig { resolution: 128, ..Default::default() });
    cfg.mu = Some(FieldSpec::linear_z(Complex64::new(0.2, 0.1)));
    cfg.u = Some(FieldSpec::disc_indicator(Complex64::new(0.0, 0.0), 1.0));

    println!("{}", cfg.to_json());
    assert!(run_config(Command::SolveDbar, &cfg, &out)?);
    let verified = run_config(Command::Verify, &cfg, &out)?;
    println!("outputs in {}; verify {}", out.display(), if verified { "passed" } else { "FAILED" });
    print!("{}", std::fs::read_to_string(out.join("report.csv"))?);
    Ok(())
}
