//! Cauchy transform `Pφ(z) = (1/π) ∬ φ(ζ) / (z - ζ) dA(ζ)` and Beurling
//! transform `S = ∂_z ∘ P` on the grid.
//!
//! Both methods discretize the same area integral: midpoint rule on every
//! grid cell, with the cell containing the singularity contributing its exact
//! integral. Over a square centred at `z` that integral of `1/(z - ζ)` is zero
//! by symmetry, so the singular weight vanishes.
//!
//! * `Spectral` evaluates the resulting discrete convolution with FFTs on the
//!   zero-padded `2N x 2N` periodic grid, so the result is the free-space
//!   transform (no periodic images). `S` applies the product of the
//!   difference-operator symbol of `∂_z` and the kernel spectrum.
//! * `Quadrature` sums the same weights directly, target by target. It is
//!   `O(N^4)` and serves as the oracle for the FFT path.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::beltrami::BeltramiField;
use crate::error::{Error, Result};
use crate::field::ComplexField;

/// Central-difference weights matching [`ComplexField::dz`].
const STENCIL: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TransformMethod {
    #[default]
    Spectral,
    Quadrature,
}

impl FromStr for TransformMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral" => Ok(TransformMethod::Spectral),
            "quadrature" => Ok(TransformMethod::Quadrature),
            other => Err(Error::UnsupportedMethod(other.to_string())),
        }
    }
}

impl fmt::Display for TransformMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TransformMethod::Spectral => "spectral",
            TransformMethod::Quadrature => "quadrature",
        })
    }
}

/// Precomputed FFTs and multiplier tables for one grid (`N`, `L`).
/// Immutable; shared through [`TransformPlan::for_grid`].
pub struct TransformPlan {
    n: usize,
    spacing: f64,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    /// Kernel spectrum, stored in the transposed layout produced by `forward`.
    cauchy_hat: Vec<Complex64>,
    beurling_hat: Vec<Complex64>,
}

impl fmt::Debug for TransformPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransformPlan")
            .field("n", &self.n)
            .field("spacing", &self.spacing)
            .finish()
    }
}

type PlanKey = (usize, u64);

fn plan_cache() -> &'static Mutex<HashMap<PlanKey, Arc<TransformPlan>>> {
    static CACHE: OnceLock<Mutex<HashMap<PlanKey, Arc<TransformPlan>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Cauchy weight `h^2 / (π (dx + i dy) h)` for an offset in grid units; zero at the origin.
#[inline]
fn cauchy_weight(dx: i64, dy: i64, h: f64) -> Complex64 {
    if dx == 0 && dy == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        let d = Complex64::new(dx as f64, dy as f64);
        d.inv() * (h / std::f64::consts::PI)
    }
}

impl TransformPlan {
    /// Shared plan for an `n x n` grid on `[-half_width, half_width]^2`.
    pub fn for_grid(n: usize, half_width: f64) -> Arc<TransformPlan> {
        let key = (n, half_width.to_bits());
        if let Some(p) = plan_cache().lock().unwrap().get(&key) {
            return p.clone();
        }
        let plan = Arc::new(TransformPlan::new(n, 2.0 * half_width / n as f64));
        plan_cache()
            .lock()
            .unwrap()
            .entry(key)
            .or_insert(plan)
            .clone()
    }

    fn new(n: usize, spacing: f64) -> Self {
        let m = 2 * n;
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(m);
        let ifft = planner.plan_fft_inverse(m);

        let offset = |k: usize| if k < n { k as i64 } else { k as i64 - m as i64 };
        let mut kernel = vec![Complex64::new(0.0, 0.0); m * m];
        kernel.par_chunks_mut(m).enumerate().for_each(|(p, row)| {
            for (q, v) in row.iter_mut().enumerate() {
                *v = cauchy_weight(offset(q), offset(p), spacing);
            }
        });
        let mut plan = Self {
            n,
            spacing,
            fft,
            ifft,
            cauchy_hat: Vec::new(),
            beurling_hat: Vec::new(),
        };
        plan.fft_rows(&mut kernel, m);
        let mut cauchy_hat = transpose(&kernel, m, m);
        plan.fft_rows(&mut cauchy_hat, m);

        // Symbol of the difference operator d/dx on the 2N-periodic grid.
        let symbol: Vec<Complex64> = (0..m)
            .map(|k| {
                let s: f64 = STENCIL
                    .iter()
                    .enumerate()
                    .map(|(j, c)| {
                        let theta = 2.0 * std::f64::consts::PI * ((j + 1) * k) as f64 / m as f64;
                        c * theta.sin()
                    })
                    .sum();
                Complex64::new(0.0, 2.0 * s / spacing)
            })
            .collect();
        // Transposed layout: row index is the x frequency, column the y frequency.
        let beurling_hat = cauchy_hat
            .par_iter()
            .enumerate()
            .map(|(idx, &k)| {
                let (a, b) = (idx / m, idx % m);
                let dz = (symbol[a] - Complex64::i() * symbol[b]) * 0.5;
                dz * k
            })
            .collect();
        plan.cauchy_hat = cauchy_hat;
        plan.beurling_hat = beurling_hat;
        plan
    }

    pub fn resolution(&self) -> usize {
        self.n
    }

    fn fft_rows(&self, data: &mut [Complex64], rows: usize) {
        let m = 2 * self.n;
        data[..rows * m]
            .par_chunks_mut(m)
            .for_each(|row| self.fft.process(row));
    }

    fn ifft_rows(&self, data: &mut [Complex64], rows: usize) {
        let m = 2 * self.n;
        data[..rows * m]
            .par_chunks_mut(m)
            .for_each(|row| self.ifft.process(row));
    }

    /// Zero-pads `samples` into the `2N x 2N` grid and transforms; output is transposed.
    fn forward(&self, samples: &[Complex64]) -> Vec<Complex64> {
        let (n, m) = (self.n, 2 * self.n);
        let mut buf = vec![Complex64::new(0.0, 0.0); m * m];
        for i in 0..n {
            buf[i * m..i * m + n].copy_from_slice(&samples[i * n..(i + 1) * n]);
        }
        // Rows n..2n are zero and stay zero under the row transform.
        self.fft_rows(&mut buf, n);
        let mut t = transpose(&buf, m, m);
        self.fft_rows(&mut t, m);
        t
    }

    /// Inverse of `forward` restricted to the original `N x N` window.
    fn inverse(&self, mut spectrum: Vec<Complex64>) -> Vec<Complex64> {
        let (n, m) = (self.n, 2 * self.n);
        self.ifft_rows(&mut spectrum, m);
        // spectrum[a * m + i]: x frequency a, grid row i. Keep rows i < n.
        let mut rows = vec![Complex64::new(0.0, 0.0); n * m];
        rows.par_chunks_mut(m).enumerate().for_each(|(i, row)| {
            for (a, v) in row.iter_mut().enumerate() {
                *v = spectrum[a * m + i];
            }
        });
        self.ifft_rows(&mut rows, n);
        let scale = 1.0 / (m * m) as f64;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            out.extend(rows[i * m..i * m + n].iter().map(|v| v * scale));
        }
        out
    }

    fn apply(&self, spectrum: &[Complex64], multiplier: &[Complex64]) -> Vec<Complex64> {
        let prod = spectrum
            .par_iter()
            .zip(multiplier.par_iter())
            .map(|(a, b)| a * b)
            .collect();
        self.inverse(prod)
    }

    fn check(&self, phi: &ComplexField) {
        assert_eq!(
            phi.domain().resolution(),
            self.n,
            "plan built for a different grid"
        );
    }

    pub fn cauchy(&self, phi: &ComplexField) -> ComplexField {
        self.check(phi);
        let spec = self.forward(phi.samples());
        ComplexField::from_vec(*phi.domain(), self.apply(&spec, &self.cauchy_hat))
    }

    pub fn beurling(&self, phi: &ComplexField) -> ComplexField {
        self.check(phi);
        let spec = self.forward(phi.samples());
        ComplexField::from_vec(*phi.domain(), self.apply(&spec, &self.beurling_hat))
    }

    /// `(Pφ, Sφ)` from one forward transform.
    pub fn cauchy_and_beurling(&self, phi: &ComplexField) -> (ComplexField, ComplexField) {
        self.check(phi);
        let spec = self.forward(phi.samples());
        let d = *phi.domain();
        (
            ComplexField::from_vec(d, self.apply(&spec, &self.cauchy_hat)),
            ComplexField::from_vec(d, self.apply(&spec, &self.beurling_hat)),
        )
    }
}

fn transpose(data: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); rows * cols];
    out.par_chunks_mut(rows).enumerate().for_each(|(c, orow)| {
        for (r, v) in orow.iter_mut().enumerate() {
            *v = data[r * cols + c];
        }
    });
    out
}

/// Direct summation of the Cauchy integral at every grid point.
fn cauchy_quadrature(phi: &ComplexField) -> ComplexField {
    let d = *phi.domain();
    let n = d.resolution();
    let h = d.spacing();
    let w = 2 * n - 1;
    let weights: Vec<Complex64> = (0..w * w)
        .map(|k| {
            cauchy_weight(
                (k % w) as i64 - (n as i64 - 1),
                (k / w) as i64 - (n as i64 - 1),
                h,
            )
        })
        .collect();
    let support: Vec<(usize, usize, Complex64)> = phi
        .samples()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.re != 0.0 || v.im != 0.0)
        .map(|(k, &v)| (k / n, k % n, v))
        .collect();
    let samples = (0..n * n)
        .into_par_iter()
        .map(|t| {
            let (i, j) = (t / n, t % n);
            support
                .iter()
                .map(|&(si, sj, v)| {
                    let di = i + n - 1 - si;
                    let dj = j + n - 1 - sj;
                    v * weights[di * w + dj]
                })
                .sum()
        })
        .collect();
    ComplexField::from_vec(d, samples)
}

/// `Pφ`, a right inverse of `∂_z̄` on compactly supported data.
pub fn cauchy_transform(phi: &ComplexField, method: TransformMethod) -> ComplexField {
    match method {
        TransformMethod::Spectral => plan_for(phi).cauchy(phi),
        TransformMethod::Quadrature => cauchy_quadrature(phi),
    }
}

/// `Sφ = ∂_z Pφ`.
pub fn beurling_transform(phi: &ComplexField, method: TransformMethod) -> ComplexField {
    match method {
        TransformMethod::Spectral => plan_for(phi).beurling(phi),
        TransformMethod::Quadrature => cauchy_quadrature(phi).dz(),
    }
}

/// `(Pφ, Sφ)` together; the spectral path shares one forward FFT.
pub fn cauchy_and_beurling(
    phi: &ComplexField,
    method: TransformMethod,
) -> (ComplexField, ComplexField) {
    match method {
        TransformMethod::Spectral => plan_for(phi).cauchy_and_beurling(phi),
        TransformMethod::Quadrature => {
            let p = cauchy_quadrature(phi);
            let s = p.dz();
            (p, s)
        }
    }
}

fn plan_for(phi: &ComplexField) -> Arc<TransformPlan> {
    TransformPlan::for_grid(phi.domain().resolution(), phi.domain().half_width())
}

/// Power-iteration estimate of the size of `φ ↦ μ·Sφ` in the grid sup-norm,
/// started from `μ'` itself: the largest ratio `‖μ S v‖ / ‖v‖` seen.
pub fn estimate_contraction(mu: &BeltramiField, iterations: usize) -> f64 {
    estimate_contraction_with(mu, iterations, TransformMethod::Spectral)
}

pub fn estimate_contraction_with(
    mu: &BeltramiField,
    iterations: usize,
    method: TransformMethod,
) -> f64 {
    let mut v = mu.extended().clone();
    let mut norm = v.sup_norm(false);
    if norm == 0.0 {
        return 0.0;
    }
    let mut q = 0.0f64;
    for _ in 0..iterations.max(1) {
        let s = beurling_transform(&v, method);
        let w = (mu.extended() * &s).expect("same domain");
        let wn = w.sup_norm(false);
        q = q.max(wn / norm);
        if wn == 0.0 {
            break;
        }
        v = w.scale_real(1.0 / wn);
        norm = 1.0;
    }
    q
}
