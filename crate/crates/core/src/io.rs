//! On-disk formats.
//!
//! Binary field: 12-byte magic `BELTRAMIFLD\0`, `u32` format version, `u32 N`,
//! `f64 L`, then `N·N` pairs of `f64 (re, im)` in row-major order, everything
//! little-endian. The subdomain `Ω` is not stored; a reader supplies it.
//!
//! Heatmaps are binary PGM (P5, 8-bit), first image row = grid row 0
//! (`y = -L`), scaled linearly between the min and max recorded in a sidecar
//! text file.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::exhaustion::ExhaustionStep;
use crate::family::FamilyReport;
use crate::field::ComplexField;

pub const MAGIC: [u8; 12] = *b"BELTRAMIFLD\0";
pub const FORMAT_VERSION: u32 = 1;
pub const HEADER_LEN: usize = 16;

/// Grid samples as stored on disk, before a subdomain is attached.
#[derive(Clone, Debug, PartialEq)]
pub struct RawField {
    pub resolution: usize,
    pub half_width: f64,
    pub samples: Vec<Complex64>,
}

impl RawField {
    /// Attaches `domain`, which must have the stored `N` and `L`.
    pub fn into_field(self, domain: DomainSpec) -> Result<ComplexField> {
        if domain.resolution() != self.resolution || domain.half_width() != self.half_width {
            return Err(Error::Format(format!(
                "stored grid N={} L={} does not match domain N={} L={}",
                self.resolution,
                self.half_width,
                domain.resolution(),
                domain.half_width()
            )));
        }
        ComplexField::from_samples(domain, self.samples)
    }
}

pub fn write_field<W: Write>(mut w: W, f: &ComplexField) -> Result<()> {
    let d = f.domain();
    w.write_all(&MAGIC)?;
    w.write_all(&FORMAT_VERSION.to_le_bytes())?;
    w.write_all(&(d.resolution() as u32).to_le_bytes())?;
    w.write_all(&d.half_width().to_le_bytes())?;
    let mut buf = Vec::with_capacity(16 * f.samples().len());
    for v in f.samples() {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    w.flush()?;
    Ok(())
}

pub fn read_field<R: Read>(mut r: R) -> Result<RawField> {
    let mut header = [0u8; HEADER_LEN];
    r.read_exact(&mut header)
        .map_err(|e| truncated(e, "header"))?;
    if header[..12] != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = u32::from_le_bytes(header[12..16].try_into().unwrap());
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let mut n_bytes = [0u8; 4];
    let mut l_bytes = [0u8; 8];
    r.read_exact(&mut n_bytes)
        .map_err(|e| truncated(e, "resolution"))?;
    r.read_exact(&mut l_bytes)
        .map_err(|e| truncated(e, "half width"))?;
    let n = u32::from_le_bytes(n_bytes) as usize;
    let half_width = f64::from_le_bytes(l_bytes);
    let len = n
        .checked_mul(n)
        .filter(|&l| l.checked_mul(16).is_some())
        .ok_or_else(|| Error::Format(format!("resolution {n} too large")))?;
    let mut data = Vec::new();
    r.take(16 * len as u64 + 1).read_to_end(&mut data)?;
    if data.len() != 16 * len {
        return Err(Error::Format(format!(
            "expected {} sample bytes for N={n}, found {}",
            16 * len,
            data.len()
        )));
    }
    let samples = data
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect();
    Ok(RawField {
        resolution: n,
        half_width,
        samples,
    })
}

fn truncated(e: std::io::Error, what: &str) -> Error {
    if e.kind() == std::io::ErrorKind::UnexpectedEof {
        Error::Format(format!("truncated {what}"))
    } else {
        Error::Io(e)
    }
}

pub fn save_field(path: impl AsRef<Path>, f: &ComplexField) -> Result<()> {
    write_field(BufWriter::new(File::create(path)?), f)
}

pub fn load_field(path: impl AsRef<Path>) -> Result<RawField> {
    read_field(BufReader::new(File::open(path)?))
}

/// Loads a field and attaches `domain`.
pub fn load_field_on(path: impl AsRef<Path>, domain: DomainSpec) -> Result<ComplexField> {
    load_field(path)?.into_field(domain)
}

/// One row per sample: `i,j,x,y,re,im`. Floats are written in shortest
/// round-trip form.
pub fn write_csv<W: Write>(w: W, f: &ComplexField) -> Result<()> {
    let mut w = BufWriter::new(w);
    writeln!(w, "i,j,x,y,re,im")?;
    let d = f.domain();
    let n = d.resolution();
    for i in 0..n {
        for j in 0..n {
            let z = d.point(i, j);
            let v = f.get(i, j);
            writeln!(
                w,
                "{i},{j},{},{},{},{}",
                fmt_f64(z.re),
                fmt_f64(z.im),
                fmt_f64(v.re),
                fmt_f64(v.im)
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `iteration,residual`, iterations counted from 1.
pub fn write_trace_csv<W: Write>(w: W, trace: &[f64]) -> Result<()> {
    let mut w = BufWriter::new(w);
    writeln!(w, "iteration,residual")?;
    for (k, r) in trace.iter().enumerate() {
        writeln!(w, "{},{}", k + 1, fmt_f64(*r))?;
    }
    w.flush()?;
    Ok(())
}

/// Shortest round-trip text for `v`, in exponent form when tiny or huge.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// `b,iterations,residual,adjacent_difference,extrapolation_error`; cells
/// that do not apply (or belong to a failed solve) are left empty.
pub fn write_family_csv<W: Write>(w: W, report: &FamilyReport) -> Result<()> {
    let mut w = BufWriter::new(w);
    writeln!(
        w,
        "b,iterations,residual,adjacent_difference,extrapolation_error"
    )?;
    for (k, e) in report.entries.iter().enumerate() {
        let (it, res) = match &e.solution {
            Ok(s) => (
                s.diagnostics.iterations.to_string(),
                fmt_f64(s.diagnostics.residual),
            ),
            Err(_) => (String::new(), String::new()),
        };
        writeln!(
            w,
            "{},{it},{res},{},{}",
            e.b,
            opt(report.adjacent_differences[k]),
            opt(report.extrapolation_errors[k])
        )?;
    }
    w.flush()?;
    Ok(())
}

/// `step,radius,iterations,correction_sup,budget`.
pub fn write_exhaustion_csv<W: Write>(w: W, trace: &[ExhaustionStep]) -> Result<()> {
    let mut w = BufWriter::new(w);
    writeln!(w, "step,radius,iterations,correction_sup,budget")?;
    for s in trace {
        writeln!(
            w,
            "{},{},{},{},{}",
            s.step,
            fmt_f64(s.radius),
            s.iterations,
            fmt_f64(s.correction_sup),
            fmt_f64(s.budget)
        )?;
    }
    w.flush()?;
    Ok(())
}

/// 8-bit grey levels scaled linearly from `[min, max]`; a constant image is all 0.
pub fn gray_levels(values: &[f64]) -> (Vec<u8>, f64, f64) {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = max - min;
    let pixels = values
        .iter()
        .map(|&v| {
            if span > 0.0 {
                (255.0 * (v - min) / span).round() as u8
            } else {
                0
            }
        })
        .collect();
    (pixels, min, max)
}

pub fn write_pgm<W: Write>(mut w: W, width: usize, height: usize, pixels: &[u8]) -> Result<()> {
    if pixels.len() != width * height {
        return Err(Error::InvalidArgument(
            "pixel count does not match image size".into(),
        ));
    }
    write!(w, "P5\n{width} {height}\n255\n")?;
    w.write_all(pixels)?;
    w.flush()?;
    Ok(())
}

/// Writes `<stem>_abs.pgm` / `<stem>_arg.pgm` with `.txt` sidecars holding the
/// scaling range. Returns the image paths.
pub fn write_heatmaps(dir: impl AsRef<Path>, stem: &str, f: &ComplexField) -> Result<[PathBuf; 2]> {
    let dir = dir.as_ref();
    let n = f.domain().resolution();
    let abs: Vec<f64> = f.samples().iter().map(|v| v.norm()).collect();
    let arg: Vec<f64> = f.samples().iter().map(|v| v.arg()).collect();
    let mut out = Vec::with_capacity(2);
    for (tag, values) in [("abs", abs), ("arg", arg)] {
        let (pixels, min, max) = gray_levels(&values);
        let img = dir.join(format!("{stem}_{tag}.pgm"));
        write_pgm(BufWriter::new(File::create(&img)?), n, n, &pixels)?;
        std::fs::write(
            dir.join(format!("{stem}_{tag}.txt")),
            format!("min {}\nmax {}\n", fmt_f64(min), fmt_f64(max)),
        )?;
        out.push(img);
    }
    Ok([out[0].clone(), out[1].clone()])
}
