//! MSE, single-scale SSIM (8x8 uniform windows), and the Chamfer distance
//! on control points.

use crate::geom::Point;
use crate::path::NORMALIZED_SIZE;
use thiserror::Error;

use super::Raster;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("empty point set")]
    EmptyPointSet,
}

fn check_dims(a: &Raster, b: &Raster) -> Result<(), MetricsError> {
    if a.width != b.width || a.height != b.height {
        return Err(MetricsError::DimensionMismatch(
            a.width, a.height, b.width, b.height,
        ));
    }
    Ok(())
}

/// Mean squared error over pixels and channels. Gray and RGB rasters are
/// comparable; the gray channel broadcasts.
pub fn mse(a: &Raster, b: &Raster) -> Result<f64, MetricsError> {
    check_dims(a, b)?;
    let n = a.width * a.height;
    let mut acc = 0.0;
    for y in 0..a.height {
        for x in 0..a.width {
            let pa = a.rgb_at(x, y);
            let pb = b.rgb_at(x, y);
            for c in 0..3 {
                let d = pa[c] - pb[c];
                acc += d * d;
            }
        }
    }
    Ok(acc / (n * 3) as f64)
}

const SSIM_WINDOW: usize = 8;
const SSIM_C1: f64 = 0.01 * 0.01;
const SSIM_C2: f64 = 0.03 * 0.03;

/// Single-scale SSIM with 8x8 uniform windows and the standard stabilizers,
/// averaged over all window positions (and channels for RGB input).
pub fn ssim(a: &Raster, b: &Raster) -> Result<f64, MetricsError> {
    check_dims(a, b)?;
    let channels = a.channels.max(b.channels);
    let mut total = 0.0;
    for c in 0..channels {
        let plane_a = extract_plane(a, c);
        let plane_b = extract_plane(b, c);
        total += ssim_plane(&plane_a, &plane_b, a.width, a.height);
    }
    Ok(total / channels as f64)
}

fn extract_plane(r: &Raster, c: usize) -> Vec<f64> {
    let cc = if r.channels == 1 { 0 } else { c };
    (0..r.width * r.height)
        .map(|i| r.data[i * r.channels + cc])
        .collect()
}

fn ssim_plane(a: &[f64], b: &[f64], width: usize, height: usize) -> f64 {
    let win = SSIM_WINDOW.min(width).min(height);
    let area = (win * win) as f64;
    // Summed-area tables, one row/col of zero padding.
    let w1 = width + 1;
    let h1 = height + 1;
    let mut sa = vec![0.0; w1 * h1];
    let mut sb = vec![0.0; w1 * h1];
    let mut saa = vec![0.0; w1 * h1];
    let mut sbb = vec![0.0; w1 * h1];
    let mut sab = vec![0.0; w1 * h1];
    for y in 0..height {
        for x in 0..width {
            let i = y * width + x;
            let j = (y + 1) * w1 + (x + 1);
            let up = j - w1;
            let left = j - 1;
            let diag = up - 1;
            sa[j] = a[i] + sa[up] + sa[left] - sa[diag];
            sb[j] = b[i] + sb[up] + sb[left] - sb[diag];
            saa[j] = a[i] * a[i] + saa[up] + saa[left] - saa[diag];
            sbb[j] = b[i] * b[i] + sbb[up] + sbb[left] - sbb[diag];
            sab[j] = a[i] * b[i] + sab[up] + sab[left] - sab[diag];
        }
    }
    let window_sum = |table: &[f64], x: usize, y: usize| {
        table[(y + win) * w1 + (x + win)] - table[y * w1 + (x + win)] - table[(y + win) * w1 + x]
            + table[y * w1 + x]
    };
    let mut acc = 0.0;
    let mut count = 0usize;
    for y in 0..=height - win {
        for x in 0..=width - win {
            let mu_a = window_sum(&sa, x, y) / area;
            let mu_b = window_sum(&sb, x, y) / area;
            let var_a = (window_sum(&saa, x, y) / area - mu_a * mu_a).max(0.0);
            let var_b = (window_sum(&sbb, x, y) / area - mu_b * mu_b).max(0.0);
            let cov = window_sum(&sab, x, y) / area - mu_a * mu_b;
            let s = ((2.0 * mu_a * mu_b + SSIM_C1) * (2.0 * cov + SSIM_C2))
                / ((mu_a * mu_a + mu_b * mu_b + SSIM_C1) * (var_a + var_b + SSIM_C2));
            acc += s;
            count += 1;
        }
    }
    acc / count as f64
}

/// Symmetric Hausdorff distance (max of directed maxes) in normalized
/// units, unscaled.
pub fn hausdorff(points_a: &[Point], points_b: &[Point]) -> Result<f64, MetricsError> {
    if points_a.is_empty() || points_b.is_empty() {
        return Err(MetricsError::EmptyPointSet);
    }
    let directed = |from: &[Point], to: &[Point]| {
        from.iter()
            .map(|p| {
                to.iter()
                    .map(|q| p.distance(*q))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    Ok(directed(points_a, points_b).max(directed(points_b, points_a)))
}

/// Symmetric mean nearest-neighbor distance between point sets in the
/// 128-unit frame, scaled by 1/128.
pub fn chamfer(points_a: &[Point], points_b: &[Point]) -> Result<f64, MetricsError> {
    if points_a.is_empty() || points_b.is_empty() {
        return Err(MetricsError::EmptyPointSet);
    }
    let mean_nn = |from: &[Point], to: &[Point]| {
        let total: f64 = from
            .iter()
            .map(|p| {
                to.iter()
                    .map(|q| p.distance(*q))
                    .fold(f64::INFINITY, f64::min)
            })
            .sum();
        total / from.len() as f64
    };
    Ok(0.5 * (mean_nn(points_a, points_b) + mean_nn(points_b, points_a)) / NORMALIZED_SIZE)
}
