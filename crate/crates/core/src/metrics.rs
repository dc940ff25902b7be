//! Distortion statistics: worst-case (theoretical) error per plane and
//! empirical cover/stego comparisons.
//!
//! The worst case assumes every carrying pixel flips its plane bit, so each
//! changes by exactly the plane weight. WMSE per pixel is therefore `W(l)²`;
//! the image total multiplies by `w·h`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::numeral::{NumeralSystem, SystemKind};
use crate::stego::{embed_message, EmbedPlan, LengthMode};

/// `W(plane)²`.
pub fn wmse_per_pixel(system: &NumeralSystem, plane: usize) -> Result<u128> {
    let w = system.weight(plane)? as u128;
    Ok(w * w)
}

/// `w · h · W(plane)²`.
pub fn wmse_theoretical(system: &NumeralSystem, plane: usize, width: usize, height: usize) -> Result<u128> {
    Ok(wmse_per_pixel(system, plane)? * width as u128 * height as u128)
}

/// `10·log10(peak² / mse)`, `+inf` when `mse` is zero.
pub fn psnr_from_mse(mse: f64, peak: u64) -> f64 {
    if mse == 0.0 {
        return f64::INFINITY;
    }
    let peak = peak as f64;
    10.0 * (peak * peak / mse).log10()
}

/// Worst-case PSNR for embedding at `plane`: `10·log10((2^k − 1)² / W(plane)²)`.
pub fn psnr_worst(system: &NumeralSystem, plane: usize) -> Result<f64> {
    let w = system.weight(plane)? as f64;
    Ok(psnr_from_mse(w * w, system.max_value()))
}

/// Mean squared pixel difference.
pub fn mse_empirical(cover: &GrayImage, stego: &GrayImage) -> Result<f64> {
    cover.same_shape(stego)?;
    let total: u64 = cover
        .pixels()
        .iter()
        .zip(stego.pixels())
        .map(|(&a, &b)| {
            let d = a.abs_diff(b) as u64;
            d * d
        })
        .sum();
    Ok(total as f64 / cover.len() as f64)
}

pub fn psnr_empirical(cover: &GrayImage, stego: &GrayImage, k: u32) -> Result<f64> {
    if !(1..=16).contains(&k) {
        return Err(Error::Parameter(format!("bit depth {k} out of range")));
    }
    Ok(psnr_from_mse(mse_empirical(cover, stego)?, (1u64 << k) - 1))
}

/// Largest absolute per-pixel change.
pub fn max_abs_delta(cover: &GrayImage, stego: &GrayImage) -> Result<u64> {
    cover.same_shape(stego)?;
    Ok(cover
        .pixels()
        .iter()
        .zip(stego.pixels())
        .map(|(&a, &b)| a.abs_diff(b) as u64)
        .max()
        .unwrap_or(0))
}

/// Gray-level counts, one bin per level in `0..=maxval`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    counts: Vec<u64>,
}

impl Histogram {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        Histogram { counts }
    }

    pub fn of(image: &GrayImage) -> Self {
        let mut counts = vec![0u64; image.maxval() as usize + 1];
        for &p in image.pixels() {
            counts[p as usize] += 1;
        }
        Histogram { counts }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Additive smoothing applied to every bin of both histograms before normalizing.
pub const KL_SMOOTHING: f64 = 1.0;

/// Relative entropy `KL(p‖q)` in nats over add-one smoothed histograms.
pub fn kl_divergence(p: &Histogram, q: &Histogram) -> Result<f64> {
    if p.bins() != q.bins() {
        return Err(Error::Parameter(format!(
            "histograms have {} and {} bins",
            p.bins(),
            q.bins()
        )));
    }
    if p.total() == 0 || q.total() == 0 {
        return Err(Error::EmptyImage);
    }
    let bins = p.bins() as f64;
    let p_total = p.total() as f64 + KL_SMOOTHING * bins;
    let q_total = q.total() as f64 + KL_SMOOTHING * bins;
    let kl: f64 = p
        .counts
        .iter()
        .zip(&q.counts)
        .map(|(&a, &b)| {
            let pi = (a as f64 + KL_SMOOTHING) / p_total;
            let qi = (b as f64 + KL_SMOOTHING) / q_total;
            pi * (pi / qi).ln()
        })
        .sum();
    // rounding can leave a tiny negative residue for identical inputs
    Ok(kl.max(0.0))
}

/// Theoretical and measured distortion for one (system, plane) configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistortionReport {
    pub system: String,
    pub plane: usize,
    pub weight: u64,
    pub wmse_per_pixel: u128,
    pub wmse_total: u128,
    pub psnr_worst_db: f64,
    pub mse_empirical: f64,
    pub psnr_empirical_db: f64,
    pub kl_nats: f64,
    pub max_abs_delta: u64,
    pub capacity: u64,
    pub capacity_fraction: f64,
    pub bits_embedded: u64,
    pub pixels_changed: u64,
    /// The message was longer than the plane's capacity and was cut.
    pub truncated: bool,
}

impl DistortionReport {
    /// Measures a cover/stego pair produced by embedding at `plane`.
    pub fn measure(
        system: &NumeralSystem,
        plane: usize,
        cover: &GrayImage,
        stego: &GrayImage,
        capacity: u64,
    ) -> Result<Self> {
        let mse = mse_empirical(cover, stego)?;
        let changed = cover
            .pixels()
            .iter()
            .zip(stego.pixels())
            .filter(|(a, b)| a != b)
            .count() as u64;
        Ok(DistortionReport {
            system: system.kind().to_string(),
            plane,
            weight: system.weight(plane)?,
            wmse_per_pixel: wmse_per_pixel(system, plane)?,
            wmse_total: wmse_theoretical(system, plane, cover.width(), cover.height())?,
            psnr_worst_db: psnr_worst(system, plane)?,
            mse_empirical: mse,
            psnr_empirical_db: psnr_from_mse(mse, system.max_value()),
            kl_nats: kl_divergence(&Histogram::of(cover), &Histogram::of(stego))?,
            max_abs_delta: max_abs_delta(cover, stego)?,
            capacity,
            capacity_fraction: capacity as f64 / cover.len() as f64,
            bits_embedded: 0,
            pixels_changed: changed,
            truncated: false,
        })
    }
}

/// Embeds `message` (raw, no length header) at every requested plane of every
/// system and measures the result. Planes a system lacks are skipped; `None`
/// means all planes. Messages longer than a plane's capacity are truncated.
pub fn sweep(
    cover: &GrayImage,
    message: &[bool],
    systems: &[NumeralSystem],
    planes: Option<&[usize]>,
) -> Result<Vec<DistortionReport>> {
    let mut reports = Vec::new();
    for system in systems {
        let selected: Vec<usize> = match planes {
            Some(p) => p.iter().copied().filter(|&l| l < system.planes()).collect(),
            None => (0..system.planes()).collect(),
        };
        for plane in selected {
            let cap = crate::stego::capacity(cover, system, plane)?;
            let len = message.len().min(cap as usize);
            let plan = EmbedPlan::new(system.clone(), plane, LengthMode::ExplicitLength(len as u64))?;
            let (stego, embed) = embed_message(cover, &plan, &message[..len])?;
            let mut report = DistortionReport::measure(system, plane, cover, &stego, cap)?;
            report.bits_embedded = embed.bits_embedded;
            report.truncated = len < message.len();
            reports.push(report);
        }
    }
    Ok(reports)
}

/// Column order of [`reports_to_csv`].
pub const CSV_HEADER: &str =
    "system,plane,weight,wmse_per_pixel,psnr_worst_db,mse_empirical,psnr_empirical_db,kl_nats,capacity_fraction";

fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v}")
    }
}

pub fn reports_to_csv(reports: &[DistortionReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.system,
            r.plane,
            r.weight,
            r.wmse_per_pixel,
            fmt_f64(r.psnr_worst_db),
            fmt_f64(r.mse_empirical),
            fmt_f64(r.psnr_empirical_db),
            fmt_f64(r.kl_nats),
            fmt_f64(r.capacity_fraction),
        );
    }
    out
}

/// Weight of each plane index per system; blank where a system has no such plane.
pub fn weight_curves_csv(systems: &[NumeralSystem]) -> String {
    let mut out = String::from("plane");
    for s in systems {
        let _ = write!(out, ",{}", s.kind());
    }
    out.push('\n');
    let rows = systems.iter().map(NumeralSystem::planes).max().unwrap_or(0);
    for l in 0..rows {
        let _ = write!(out, "{l}");
        for s in systems {
            match s.weights().get(l) {
                Some(w) => {
                    let _ = write!(out, ",{w}");
                }
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out
}

/// Side-by-side gray-level counts of two images.
pub fn histogram_csv(cover: &GrayImage, stego: &GrayImage) -> String {
    let (a, b) = (Histogram::of(cover), Histogram::of(stego));
    let mut out = String::from("level,cover,stego\n");
    for (level, (x, y)) in a.counts().iter().zip(b.counts()).enumerate() {
        let _ = writeln!(out, "{level},{x},{y}");
    }
    out
}

/// Systems compared in sweeps, planned for `k`-bit pixels.
pub fn standard_systems(k: u32) -> Result<Vec<NumeralSystem>> {
    SystemKind::ALL.iter().map(|&kind| NumeralSystem::new(kind, k)).collect()
}
