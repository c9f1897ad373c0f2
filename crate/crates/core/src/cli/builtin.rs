use num_complex::Complex64;

use super::config::FieldSpec;
use crate::domain::{smoothstep, DomainSpec};
use crate::error::{Error, Result};
use crate::field::ComplexField;
use crate::io::load_field_on;

fn need<T>(v: Option<T>, kind: &str, what: &str) -> Result<T> {
    v.ok_or_else(|| Error::Config(format!("{kind}: missing `{what}`")))
}

fn positive(v: f64, kind: &str, what: &str) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Config(format!(
            "{kind}: `{what}` must be positive, got {v}"
        )))
    }
}

/// Builds a named field on `domain`:
///
/// - `constant` — `value`
/// - `disc-indicator` — `value` (default 1) on the disc `center`/`radius`
///   (default: origin, 1), falling to 0 across a smooth step of `width`
///   (default `margin/2`) centred on the circle
/// - `gaussian-bump` — `amplitude·exp(-|z - center|² / 2σ²)`, `sigma` required
/// - `linear-z` — `coefficient·z`
/// - `file` — binary field at `path`, which must match the grid
pub fn builtin_field(spec: &FieldSpec, domain: DomainSpec) -> Result<ComplexField> {
    let kind = spec.kind.as_str();
    let c =
        |v: Option<super::config::ComplexValue>, default: Complex64| v.map_or(default, |v| v.get());
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    match kind {
        "constant" => Ok(ComplexField::constant(
            domain,
            need(spec.value, kind, "value")?.get(),
        )),
        "disc-indicator" => {
            let center = c(spec.center, zero);
            let radius = positive(spec.radius.unwrap_or(1.0), kind, "radius")?;
            let width = positive(spec.width.unwrap_or(domain.margin() / 2.0), kind, "width")?;
            let value = c(spec.value, one);
            let inner = radius - width / 2.0;
            Ok(ComplexField::from_fn(domain, |z| {
                value * (1.0 - smoothstep(((z - center).norm() - inner) / width))
            }))
        }
        "gaussian-bump" => {
            let center = c(spec.center, zero);
            let sigma = positive(need(spec.sigma, kind, "sigma")?, kind, "sigma")?;
            let amp = c(spec.amplitude, one);
            Ok(ComplexField::from_fn(domain, |z| {
                amp * (-(z - center).norm_sqr() / (2.0 * sigma * sigma)).exp()
            }))
        }
        "linear-z" => {
            let k = need(spec.coefficient, kind, "coefficient")?.get();
            Ok(ComplexField::from_fn(domain, |z| k * z))
        }
        "file" => load_field_on(need(spec.path.as_ref(), kind, "path")?, domain),
        other => Err(Error::UnknownField(other.to_string())),
    }
}
