//! Computational rectangle, working subdomain and the margin cutoff.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Which grid points an accuracy figure or norm is taken over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Rectangle,
    Omega,
    /// `Ω` minus a band of width `2·margin/3` along its boundary.
    Interior,
}

/// Smallest accepted grid resolution.
pub const MIN_RESOLUTION: usize = 16;

/// Working subdomain inside the rectangle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Omega {
    Disc {
        center: Complex64,
        radius: f64,
    },
    /// Axis-aligned rectangle given by its lower-left and upper-right corners.
    Rect {
        lower: Complex64,
        upper: Complex64,
    },
}

impl Omega {
    pub fn unit_disc() -> Self {
        Omega::Disc {
            center: Complex64::new(0.0, 0.0),
            radius: 1.0,
        }
    }

    /// Euclidean distance from `z` to the closure of the subdomain (0 inside).
    pub fn distance_outside(&self, z: Complex64) -> f64 {
        match *self {
            Omega::Disc { center, radius } => ((z - center).norm() - radius).max(0.0),
            Omega::Rect { lower, upper } => {
                let dx = (lower.re - z.re).max(0.0).max(z.re - upper.re);
                let dy = (lower.im - z.im).max(0.0).max(z.im - upper.im);
                dx.hypot(dy)
            }
        }
    }

    /// Distance from `z` to the boundary when `z` lies in the closure, `None` otherwise.
    pub fn depth(&self, z: Complex64) -> Option<f64> {
        match *self {
            Omega::Disc { center, radius } => {
                let r = (z - center).norm();
                (r <= radius).then(|| radius - r)
            }
            Omega::Rect { lower, upper } => {
                let inside =
                    z.re >= lower.re && z.re <= upper.re && z.im >= lower.im && z.im <= upper.im;
                inside.then(|| {
                    (z.re - lower.re)
                        .min(upper.re - z.re)
                        .min(z.im - lower.im)
                        .min(upper.im - z.im)
                })
            }
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.depth(z).is_some()
    }

    /// Largest coordinate extent `max(|x|, |y|)` reached by the closure.
    fn extent(&self) -> f64 {
        match *self {
            Omega::Disc { center, radius } => center.re.abs().max(center.im.abs()) + radius,
            Omega::Rect { lower, upper } => lower
                .re
                .abs()
                .max(upper.re.abs())
                .max(lower.im.abs())
                .max(upper.im.abs()),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Omega::Disc { center, radius } => {
                if !(radius > 0.0 && radius.is_finite())
                    || !center.re.is_finite()
                    || !center.im.is_finite()
                {
                    return Err(Error::InvalidDomain(format!(
                        "disc radius {radius} must be positive"
                    )));
                }
            }
            Omega::Rect { lower, upper } => {
                if !(upper.re > lower.re && upper.im > lower.im) {
                    return Err(Error::InvalidDomain(
                        "rectangle corners are not ordered".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Quintic smoothstep `6t^5 - 15t^4 + 10t^3`, clamped to `[0, 1]`; C² at both ends.
pub fn smoothstep(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        t * t * t * (10.0 + t * (-15.0 + 6.0 * t))
    }
}

/// The square `[-L, L]^2` sampled on an `N x N` grid, plus the subdomain `Ω`
/// and the width of the cutoff collar around it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DomainSpec {
    half_width: f64,
    resolution: usize,
    omega: Omega,
    margin: f64,
}

impl DomainSpec {
    pub fn new(half_width: f64, resolution: usize, omega: Omega, margin: f64) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidDomain(format!(
                "half width {half_width} must be positive"
            )));
        }
        if resolution < MIN_RESOLUTION || resolution % 2 != 0 {
            return Err(Error::InvalidDomain(format!(
                "resolution {resolution} must be even and at least {MIN_RESOLUTION}"
            )));
        }
        if !(margin > 0.0 && margin.is_finite()) {
            return Err(Error::InvalidDomain(format!(
                "margin {margin} must be positive"
            )));
        }
        omega.validate()?;
        if omega.extent() + margin >= half_width {
            return Err(Error::InvalidDomain(format!(
                "subdomain plus margin ({}) does not fit inside the rectangle of half width {half_width}",
                omega.extent() + margin
            )));
        }
        Ok(Self {
            half_width,
            resolution,
            omega,
            margin,
        })
    }

    /// Unit disc in `[-2, 2]^2` with a collar of 0.5, the layout used throughout the tests.
    pub fn unit_disc(resolution: usize) -> Result<Self> {
        Self::new(2.0, resolution, Omega::unit_disc(), 0.5)
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn omega(&self) -> Omega {
        self.omega
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    pub fn len(&self) -> usize {
        self.resolution * self.resolution
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid spacing `2L/N`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.resolution as f64
    }

    /// Point of sample `(i, j)`: `x = -L + j h`, `y = -L + i h`.
    #[inline]
    pub fn point(&self, i: usize, j: usize) -> Complex64 {
        let h = self.spacing();
        Complex64::new(
            -self.half_width + j as f64 * h,
            -self.half_width + i as f64 * h,
        )
    }

    #[inline]
    pub fn point_at(&self, index: usize) -> Complex64 {
        self.point(index / self.resolution, index % self.resolution)
    }

    /// Same rectangle and grid with a different subdomain.
    pub fn with_omega(&self, omega: Omega) -> Result<Self> {
        Self::new(self.half_width, self.resolution, omega, self.margin)
    }

    /// Same rectangle and subdomain at a different resolution.
    pub fn with_resolution(&self, resolution: usize) -> Result<Self> {
        Self::new(self.half_width, resolution, self.omega, self.margin)
    }

    /// Margin cutoff: 1 on the closure of `Ω`, smoothstep down to 0 across the collar.
    pub fn cutoff(&self, z: Complex64) -> f64 {
        1.0 - smoothstep(self.omega.distance_outside(z) / self.margin)
    }

    pub fn in_omega(&self, z: Complex64) -> bool {
        self.omega.contains(z)
    }

    /// Points of `Ω` at distance at least `2·margin/3` from its boundary.
    /// Residuals and accuracy figures are reported over this set.
    pub fn in_interior(&self, z: Complex64) -> bool {
        self.omega
            .depth(z)
            .is_some_and(|d| d >= 2.0 * self.margin / 3.0)
    }

    pub fn contains(&self, region: Region, z: Complex64) -> bool {
        match region {
            Region::Rectangle => true,
            Region::Omega => self.in_omega(z),
            Region::Interior => self.in_interior(z),
        }
    }

    /// Flat sample indices of the grid points in `region`, in row-major order.
    pub fn indices(&self, region: Region) -> Vec<usize> {
        (0..self.len())
            .filter(|&k| self.contains(region, self.point_at(k)))
            .collect()
    }
}
