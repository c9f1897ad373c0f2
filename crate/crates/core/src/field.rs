//! Complex-valued fields sampled on the uniform grid of a [`DomainSpec`].

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::domain::{DomainSpec, Region};
use crate::error::{Error, Result};

/// Central-difference weights of the 8th-order first derivative stencil.
const STENCIL: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];

/// Row-major `N x N` samples; sample `(i, j)` sits at `x = -L + j h`, `y = -L + i h`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexField {
    domain: DomainSpec,
    samples: Vec<Complex64>,
}

impl ComplexField {
    pub fn from_samples(domain: DomainSpec, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != domain.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} samples, got {}",
                domain.len(),
                samples.len()
            )));
        }
        if let Some(k) = samples
            .iter()
            .position(|s| !(s.re.is_finite() && s.im.is_finite()))
        {
            return Err(Error::InvalidArgument(format!("sample {k} is not finite")));
        }
        Ok(Self { domain, samples })
    }

    /// Trusted constructor for samples produced by this crate.
    pub(crate) fn from_vec(domain: DomainSpec, samples: Vec<Complex64>) -> Self {
        debug_assert_eq!(samples.len(), domain.len());
        Self { domain, samples }
    }

    pub fn from_fn(domain: DomainSpec, f: impl Fn(Complex64) -> Complex64 + Sync) -> Self {
        let samples = (0..domain.len())
            .into_par_iter()
            .map(|k| f(domain.point_at(k)))
            .collect();
        Self { domain, samples }
    }

    pub fn zeros(domain: DomainSpec) -> Self {
        Self::constant(domain, Complex64::new(0.0, 0.0))
    }

    pub fn constant(domain: DomainSpec, value: Complex64) -> Self {
        Self {
            domain,
            samples: vec![value; domain.len()],
        }
    }

    /// The margin cutoff sampled on the grid.
    pub fn cutoff(domain: DomainSpec) -> Self {
        Self::from_fn(domain, |z| Complex64::new(domain.cutoff(z), 0.0))
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.samples[i * self.domain.resolution() + j]
    }

    /// Same samples attached to another domain with the same grid.
    pub fn retagged(&self, domain: DomainSpec) -> Result<Self> {
        if domain.resolution() != self.domain.resolution()
            || domain.half_width() != self.domain.half_width()
        {
            return Err(Error::DomainMismatch);
        }
        Ok(Self {
            domain,
            samples: self.samples.clone(),
        })
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64 + Sync) -> Self {
        Self::from_vec(
            self.domain,
            self.samples.par_iter().map(|&v| f(v)).collect(),
        )
    }

    /// Pointwise map `f(point, value)`.
    pub fn map_with_point(&self, f: impl Fn(Complex64, Complex64) -> Complex64 + Sync) -> Self {
        let d = self.domain;
        let samples = self
            .samples
            .par_iter()
            .enumerate()
            .map(|(k, &v)| f(d.point_at(k), v))
            .collect();
        Self::from_vec(d, samples)
    }

    pub fn zip_with(
        &self,
        other: &ComplexField,
        f: impl Fn(Complex64, Complex64) -> Complex64 + Sync,
    ) -> Result<Self> {
        self.check_same_domain(other)?;
        let samples = self
            .samples
            .par_iter()
            .zip(other.samples.par_iter())
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self::from_vec(self.domain, samples))
    }

    pub fn check_same_domain(&self, other: &ComplexField) -> Result<()> {
        if self.domain == other.domain {
            Ok(())
        } else {
            Err(Error::DomainMismatch)
        }
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| c * v)
    }

    pub fn scale_real(&self, t: f64) -> Self {
        self.map(|v| v * t)
    }

    /// Multiply by the margin cutoff of the field's domain.
    pub fn tapered(&self) -> Self {
        let d = self.domain;
        self.map_with_point(|z, v| v * d.cutoff(z))
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|v| v.re == 0.0 && v.im == 0.0)
    }

    pub fn sup_norm(&self, on_omega: bool) -> f64 {
        self.sup_norm_over(if on_omega {
            Region::Omega
        } else {
            Region::Rectangle
        })
    }

    pub fn sup_norm_over(&self, region: Region) -> f64 {
        let d = self.domain;
        self.samples
            .par_iter()
            .enumerate()
            .filter(|(k, _)| d.contains(region, d.point_at(*k)))
            .map(|(_, v)| v.norm())
            .reduce(|| 0.0, f64::max)
    }

    pub fn min_abs_over(&self, region: Region) -> f64 {
        let d = self.domain;
        self.samples
            .par_iter()
            .enumerate()
            .filter(|(k, _)| d.contains(region, d.point_at(*k)))
            .map(|(_, v)| v.norm())
            .reduce(|| f64::INFINITY, f64::min)
    }

    /// `max |self - other|` over `region`.
    pub fn max_diff_over(&self, other: &ComplexField, region: Region) -> Result<f64> {
        Ok((self - other)?.sup_norm_over(region))
    }

    /// Midpoint-rule area integral over the rectangle.
    pub fn integrate(&self) -> Complex64 {
        let h = self.domain.spacing();
        self.samples.iter().sum::<Complex64>() * (h * h)
    }

    /// `∂_z f = (f_x - i f_y) / 2`.
    pub fn dz(&self) -> Self {
        self.wirtinger(false)
    }

    /// `∂_z̄ f = (f_x + i f_y) / 2`.
    pub fn dbar(&self) -> Self {
        self.wirtinger(true)
    }

    /// Periodic 8th-order central differences on the rectangle. Exact for
    /// polynomials of degree ≤ 8 at points whose stencil does not wrap.
    fn wirtinger(&self, conjugate: bool) -> Self {
        let n = self.domain.resolution();
        let inv_h = 1.0 / self.domain.spacing();
        let s = &self.samples;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        out.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            for (j, o) in row.iter_mut().enumerate() {
                let mut fx = Complex64::new(0.0, 0.0);
                let mut fy = Complex64::new(0.0, 0.0);
                for (m, &c) in STENCIL.iter().enumerate() {
                    let m = m + 1;
                    let jp = (j + m) % n;
                    let jm = (j + n - m) % n;
                    let ip = (i + m) % n;
                    let im = (i + n - m) % n;
                    fx += (s[i * n + jp] - s[i * n + jm]) * c;
                    fy += (s[ip * n + j] - s[im * n + j]) * c;
                }
                fx *= inv_h;
                fy *= inv_h;
                *o = if conjugate {
                    Complex64::new(0.5 * (fx.re - fy.im), 0.5 * (fx.im + fy.re))
                } else {
                    Complex64::new(0.5 * (fx.re + fy.im), 0.5 * (fx.im - fy.re))
                };
            }
        });
        Self::from_vec(self.domain, out)
    }

    /// Randomized Hölder seminorm: the largest `|f(x) - f(y)| / |x - y|^alpha`
    /// over `pairs` pairs of grid points of `Ω` drawn from a seeded generator.
    pub fn holder_seminorm(&self, alpha: f64, pairs: usize, seed: u64) -> Result<f64> {
        self.holder_seminorm_over(Region::Omega, alpha, pairs, seed)
    }

    pub fn holder_seminorm_over(
        &self,
        region: Region,
        alpha: f64,
        pairs: usize,
        seed: u64,
    ) -> Result<f64> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "Hölder exponent {alpha} not in (0, 1)"
            )));
        }
        if pairs == 0 {
            return Err(Error::InvalidArgument(
                "at least one pair is required".into(),
            ));
        }
        let points = self.domain.indices(region);
        if points.len() < 2 {
            return Ok(0.0);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best = 0.0f64;
        for _ in 0..pairs {
            let a = points[rng.gen_range(0..points.len())];
            let b = points[rng.gen_range(0..points.len())];
            if a == b {
                continue;
            }
            let dist = (self.domain.point_at(a) - self.domain.point_at(b)).norm();
            best = best.max((self.samples[a] - self.samples[b]).norm() / dist.powf(alpha));
        }
        Ok(best)
    }
}

/// The identity coordinate `z = x + i y` on the grid.
pub fn make_coordinate_field(domain: DomainSpec) -> ComplexField {
    ComplexField::from_fn(domain, |z| z)
}

pub fn wirtinger_dz(f: &ComplexField) -> ComplexField {
    f.dz()
}

pub fn wirtinger_dbar(f: &ComplexField) -> ComplexField {
    f.dbar()
}

pub fn holder_seminorm(f: &ComplexField, alpha: f64, pairs: usize, seed: u64) -> Result<f64> {
    f.holder_seminorm(alpha, pairs, seed)
}

pub fn sup_norm(f: &ComplexField, on_omega: bool) -> f64 {
    f.sup_norm(on_omega)
}

impl Add for &ComplexField {
    type Output = Result<ComplexField>;
    fn add(self, rhs: &ComplexField) -> Self::Output {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &ComplexField {
    type Output = Result<ComplexField>;
    fn sub(self, rhs: &ComplexField) -> Self::Output {
        self.zip_with(rhs, |a, b| a - b)
    }
}

/// Pointwise product.
impl Mul for &ComplexField {
    type Output = Result<ComplexField>;
    fn mul(self, rhs: &ComplexField) -> Self::Output {
        self.zip_with(rhs, |a, b| a * b)
    }
}

impl Neg for &ComplexField {
    type Output = ComplexField;
    fn neg(self) -> ComplexField {
        self.map(|v| -v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Omega;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn coordinate_field_on_smallest_grid() {
        // N = 2 is below the accepted resolution; check the layout on the
        // first 2 x 2 block of a 16 x 16 grid with spacing 1 instead.
        let d = DomainSpec::new(8.0, 16, Omega::unit_disc(), 0.5).unwrap();
        let z = make_coordinate_field(d);
        assert_eq!(z.get(0, 0), c(-8.0, -8.0));
        assert_eq!(z.get(0, 1), c(-7.0, -8.0));
        assert_eq!(z.get(1, 0), c(-8.0, -7.0));
        assert_eq!(z.get(1, 1), c(-7.0, -7.0));
    }

    #[test]
    fn coordinate_field_near_origin() {
        let d = DomainSpec::unit_disc(32).unwrap();
        let z = make_coordinate_field(d);
        let h = d.spacing();
        let nearest = z
            .samples()
            .iter()
            .map(|v| v.norm())
            .fold(f64::INFINITY, f64::min);
        assert!(nearest <= h * 2f64.sqrt());
        assert_eq!(z.get(16, 16), c(0.0, 0.0));
    }

    #[test]
    fn derivatives_of_constant_vanish() {
        let d = DomainSpec::unit_disc(64).unwrap();
        let f = ComplexField::constant(d, c(2.5, -1.0));
        assert!(f.dz().sup_norm(false) <= 1e-12);
        assert!(f.dbar().sup_norm(false) <= 1e-12);
    }

    #[test]
    fn conjugate_coordinate_has_unit_dbar() {
        let d = DomainSpec::unit_disc(256).unwrap();
        let zbar = make_coordinate_field(d).conj().tapered();
        let err = zbar
            .dbar()
            .max_diff_over(&ComplexField::constant(d, c(1.0, 0.0)), Region::Interior);
        assert!(err.unwrap() <= 1e-6);
        // Coarse grid: the stencil is still exact once it stays clear of the collar.
        let d = DomainSpec::unit_disc(64).unwrap();
        let zbar = make_coordinate_field(d).conj().tapered();
        let err = zbar
            .dbar()
            .max_diff_over(&ComplexField::constant(d, c(1.0, 0.0)), Region::Interior);
        assert!(err.unwrap() <= 1e-12);
    }

    #[test]
    fn dz_of_modulus_squared() {
        let d = DomainSpec::unit_disc(256).unwrap();
        let z = make_coordinate_field(d);
        let f = z.map(|v| v * v.conj()).tapered();
        assert!(f.dz().max_diff_over(&z.conj(), Region::Interior).unwrap() <= 1e-6);
        let one = ComplexField::constant(d, c(1.0, 0.0));
        assert!(
            z.tapered()
                .dz()
                .max_diff_over(&one, Region::Interior)
                .unwrap()
                <= 1e-6
        );
    }

    #[test]
    fn sup_norm_examples() {
        let d = DomainSpec::unit_disc(32).unwrap();
        assert_eq!(ComplexField::zeros(d).sup_norm(true), 0.0);
        assert_eq!(ComplexField::constant(d, c(3.0, 4.0)).sup_norm(false), 5.0);
        let z = make_coordinate_field(d);
        let brute = (0..d.len())
            .map(|k| d.point_at(k))
            .filter(|p| p.norm() <= 1.0)
            .map(|p| p.norm())
            .fold(0.0, f64::max);
        assert_eq!(z.sup_norm(true), brute);
        assert_eq!(brute, 1.0);
    }

    #[test]
    fn holder_rejects_bad_exponent() {
        let d = DomainSpec::unit_disc(16).unwrap();
        let f = ComplexField::zeros(d);
        assert!(f.holder_seminorm(0.0, 10, 1).is_err());
        assert!(f.holder_seminorm(1.0, 10, 1).is_err());
        assert!(f.holder_seminorm(0.5, 0, 1).is_err());
    }

    #[test]
    fn holder_of_constants_is_zero() {
        let d = DomainSpec::unit_disc(32).unwrap();
        assert_eq!(
            ComplexField::zeros(d).holder_seminorm(0.5, 500, 7).unwrap(),
            0.0
        );
        assert_eq!(
            ComplexField::constant(d, c(5.0, 0.0))
                .holder_seminorm(0.5, 500, 7)
                .unwrap(),
            0.0
        );
    }

    #[test]
    fn holder_of_coordinate_against_exhaustive_scan() {
        let d = DomainSpec::unit_disc(32).unwrap();
        let z = make_coordinate_field(d);
        let pts: Vec<Complex64> = d
            .indices(Region::Omega)
            .into_iter()
            .map(|k| d.point_at(k))
            .collect();
        let mut exact = 0.0f64;
        for a in &pts {
            for b in &pts {
                let r = (a - b).norm();
                if r > 0.0 {
                    exact = exact.max(r.powf(0.5));
                }
            }
        }
        // |z(x) - z(y)| / |x - y|^0.5 = |x - y|^0.5 <= diam^0.5 = sqrt(2)
        assert!(exact <= 2f64.sqrt() + 1e-12);
        let sampled = z.holder_seminorm(0.5, 200_000, 11).unwrap();
        assert!(sampled <= exact + 1e-12);
        assert!(sampled >= 0.99 * exact, "sampled {sampled} exact {exact}");
    }

    #[test]
    fn holder_is_deterministic() {
        let d = DomainSpec::unit_disc(32).unwrap();
        let f = make_coordinate_field(d).map(|v| v * v);
        assert_eq!(
            f.holder_seminorm(0.3, 100, 5).unwrap(),
            f.holder_seminorm(0.3, 100, 5).unwrap()
        );
    }

    #[test]
    fn mismatched_domains_do_not_combine() {
        let a = ComplexField::zeros(DomainSpec::unit_disc(16).unwrap());
        let b = ComplexField::zeros(DomainSpec::unit_disc(32).unwrap());
        assert!(matches!(&a + &b, Err(Error::DomainMismatch)));
    }

    #[test]
    fn non_finite_samples_rejected() {
        let d = DomainSpec::unit_disc(16).unwrap();
        let mut s = vec![c(0.0, 0.0); d.len()];
        s[5] = c(f64::NAN, 0.0);
        assert!(ComplexField::from_samples(d, s).is_err());
    }

    fn field_from(d: DomainSpec, vals: &[(f64, f64)]) -> ComplexField {
        let s = (0..d.len()).map(|k| {
            let (a, b) = vals[k % vals.len()];
            c(a, b) * (1.0 + (k as f64 * 0.37).sin())
        });
        ComplexField::from_samples(d, s.collect()).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn wirtinger_is_linear(
            vals in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 7..13),
            other in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 5..11),
            a in (-2.0f64..2.0, -2.0f64..2.0),
            b in (-2.0f64..2.0, -2.0f64..2.0),
        ) {
            let d = DomainSpec::unit_disc(16).unwrap();
            let f = field_from(d, &vals);
            let g = field_from(d, &other);
            let (a, b) = (c(a.0, a.1), c(b.0, b.1));
            let combo = (&f.scale(a) + &g.scale(b)).unwrap();
            let lhs = combo.dz();
            let rhs = (&f.dz().scale(a) + &g.dz().scale(b)).unwrap();
            prop_assert!(lhs.max_diff_over(&rhs, Region::Rectangle).unwrap() <= 1e-11);
        }

        #[test]
        fn dbar_is_conjugate_of_dz_of_conjugate(
            vals in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 3..17),
        ) {
            let d = DomainSpec::unit_disc(16).unwrap();
            let f = field_from(d, &vals);
            prop_assert_eq!(f.dbar(), f.conj().dz().conj());
        }

        #[test]
        fn holder_monotone_in_pairs(extra in 1usize..200, seed in 0u64..1000) {
            let d = DomainSpec::unit_disc(16).unwrap();
            let f = make_coordinate_field(d).map(|v| v * v * v);
            let base = f.holder_seminorm(0.7, 50, seed).unwrap();
            let more = f.holder_seminorm(0.7, 50 + extra, seed).unwrap();
            prop_assert!(more >= base);
        }
    }
}
