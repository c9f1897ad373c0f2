use num_complex::Complex64;

use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::field::ComplexField;

/// A Beltrami coefficient `μ`: its values on `Ω` and the extension by the
/// margin cutoff to the whole rectangle. The extension has sup-norm `< 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct BeltramiField {
    raw: ComplexField,
    extended: ComplexField,
    sup_norm: f64,
}

impl BeltramiField {
    /// Extends `raw` by the margin cutoff of its domain.
    pub fn new(raw: ComplexField) -> Result<Self> {
        let extended = raw.tapered();
        Self::with_extension(raw, extended)
    }

    /// Takes `extended` as the already cut-off coefficient (e.g. one read back
    /// from disk); it also serves as the raw values.
    pub fn from_extension(extended: ComplexField) -> Result<Self> {
        Self::with_extension(extended.clone(), extended)
    }

    fn with_extension(raw: ComplexField, extended: ComplexField) -> Result<Self> {
        let sup_norm = extended.sup_norm(false);
        if !(sup_norm < 1.0) {
            return Err(Error::InvalidBeltrami { sup_norm });
        }
        Ok(Self {
            raw,
            extended,
            sup_norm,
        })
    }

    pub fn zero(domain: DomainSpec) -> Self {
        let z = ComplexField::zeros(domain);
        Self {
            raw: z.clone(),
            extended: z,
            sup_norm: 0.0,
        }
    }

    pub fn constant(domain: DomainSpec, value: Complex64) -> Result<Self> {
        Self::new(ComplexField::constant(domain, value))
    }

    pub fn raw(&self) -> &ComplexField {
        &self.raw
    }

    /// `μ'`: equal to `μ` on `Ω`, zero outside the collar.
    pub fn extended(&self) -> &ComplexField {
        &self.extended
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    pub fn domain(&self) -> &DomainSpec {
        self.raw.domain()
    }

    pub fn is_zero(&self) -> bool {
        self.extended.is_zero()
    }

    /// `t·μ`, scaling both the raw values and the stored extension.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        Self::with_extension(self.raw.scale_real(t), self.extended.scale_real(t))
    }

    /// The same coefficient viewed on another subdomain of the same grid:
    /// the current extension becomes the raw data and is cut off around the
    /// new subdomain.
    pub fn restricted(&self, domain: DomainSpec) -> Result<Self> {
        Self::new(self.extended.retagged(domain)?)
    }
}
