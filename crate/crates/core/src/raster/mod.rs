//! Deterministic software rasterization plus the image metrics used across
//! the pipeline. Everything operates on the shared 128-unit scene frame:
//! a point (x, y) in units lands at pixel (x, y) * size / 128.

mod io;
mod metrics;
mod render;

pub use io::{read_image, write_image, IoError};
pub use metrics::{chamfer, hausdorff, mse, ssim, MetricsError};
pub use render::{flatten_to_pixel_loops, path_mask, render_fill, render_outline};
pub(crate) use render::rasterize_pixel_loops;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RasterError {
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
}

/// Row-major pixel grid with samples in [0, 1]; 1 (gray) or 3 (RGB)
/// channels.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub data: Vec<f64>,
}

impl Raster {
    pub fn new(width: usize, height: usize, channels: usize, fill: f64) -> Self {
        assert!(channels == 1 || channels == 3);
        Self {
            width,
            height,
            channels,
            data: vec![fill; width * height * channels],
        }
    }

    pub fn get(&self, x: usize, y: usize, c: usize) -> f64 {
        self.data[(y * self.width + x) * self.channels + c]
    }

    pub fn set(&mut self, x: usize, y: usize, c: usize, v: f64) {
        self.data[(y * self.width + x) * self.channels + c] = v;
    }

    /// Pixel as an RGB triple; gray rasters replicate their channel.
    pub fn rgb_at(&self, x: usize, y: usize) -> [f64; 3] {
        if self.channels == 3 {
            [self.get(x, y, 0), self.get(x, y, 1), self.get(x, y, 2)]
        } else {
            let v = self.get(x, y, 0);
            [v, v, v]
        }
    }

    /// Rec. 601 luminance; a gray raster returns a copy of itself.
    pub fn luminance(&self) -> Raster {
        if self.channels == 1 {
            return self.clone();
        }
        let mut out = Raster::new(self.width, self.height, 1, 0.0);
        for i in 0..self.width * self.height {
            let r = self.data[i * 3];
            let g = self.data[i * 3 + 1];
            let b = self.data[i * 3 + 2];
            out.data[i] = 0.299 * r + 0.587 * g + 0.114 * b;
        }
        out
    }

    /// Separable Gaussian blur with kernel radius ceil(3 sigma) and clamped
    /// edges. A non-positive sigma returns the input unchanged.
    pub fn gaussian_blur(&self, sigma: f64) -> Raster {
        if sigma <= 0.0 {
            return self.clone();
        }
        let radius = (3.0 * sigma).ceil() as isize;
        let mut kernel = Vec::with_capacity((2 * radius + 1) as usize);
        let denom = 2.0 * sigma * sigma;
        for k in -radius..=radius {
            kernel.push((-(k * k) as f64 / denom).exp());
        }
        let sum: f64 = kernel.iter().sum();
        for w in &mut kernel {
            *w /= sum;
        }

        let (w, h, ch) = (self.width as isize, self.height as isize, self.channels);
        let mut tmp = vec![0.0; self.data.len()];
        for y in 0..h {
            for x in 0..w {
                for c in 0..ch {
                    let mut acc = 0.0;
                    for (ki, kv) in kernel.iter().enumerate() {
                        let sx = (x + ki as isize - radius).clamp(0, w - 1);
                        acc += kv * self.data[((y * w + sx) as usize) * ch + c];
                    }
                    tmp[((y * w + x) as usize) * ch + c] = acc;
                }
            }
        }
        let mut out = self.clone();
        for y in 0..h {
            for x in 0..w {
                for c in 0..ch {
                    let mut acc = 0.0;
                    for (ki, kv) in kernel.iter().enumerate() {
                        let sy = (y + ki as isize - radius).clamp(0, h - 1);
                        acc += kv * tmp[((sy * w + x) as usize) * ch + c];
                    }
                    out.data[((y * w + x) as usize) * ch + c] = acc;
                }
            }
        }
        out
    }
}

/// Row-major binary coverage grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    pub width: usize,
    pub height: usize,
    pub bits: Vec<bool>,
}

impl Mask {
    pub fn new(width: usize, height: usize) -> Self {
        assert!(width > 0 && height > 0);
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn intersects(&self, other: &Mask) -> bool {
        self.bits
            .iter()
            .zip(&other.bits)
            .any(|(a, b)| *a && *b)
    }

    /// True when every set bit of `self` is also set in `other`.
    pub fn subset_of(&self, other: &Mask) -> bool {
        self.bits
            .iter()
            .zip(&other.bits)
            .all(|(a, b)| !*a || *b)
    }

    pub fn iou(&self, other: &Mask) -> f64 {
        let mut inter = 0usize;
        let mut union = 0usize;
        for (a, b) in self.bits.iter().zip(&other.bits) {
            if *a && *b {
                inter += 1;
            }
            if *a || *b {
                union += 1;
            }
        }
        if union == 0 {
            1.0
        } else {
            inter as f64 / union as f64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn luminance_weights() {
        let mut r = Raster::new(1, 1, 3, 0.0);
        r.data = vec![1.0, 0.0, 0.0];
        assert!((r.luminance().data[0] - 0.299).abs() < 1e-12);
    }

    #[test]
    fn blur_preserves_mean_flat_image() {
        let r = Raster::new(16, 16, 1, 0.5);
        let b = r.gaussian_blur(1.5);
        for v in &b.data {
            assert!((v - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn mask_set_ops() {
        let mut a = Mask::new(4, 1);
        let mut b = Mask::new(4, 1);
        a.bits[0] = true;
        a.bits[1] = true;
        b.bits[1] = true;
        assert!(a.intersects(&b));
        assert!(b.subset_of(&a));
        assert!(!a.subset_of(&b));
        assert!((a.iou(&b) - 0.5).abs() < 1e-12);
    }
}
