//! PNG (via the image crate) and binary PPM/PGM file IO, mapped linearly to
//! [0, 1]. Write-then-read is exact for 8-bit-quantized data.

use std::fs;
use std::io::Read;
use std::path::Path;
use thiserror::Error;

use super::Raster;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("image decode error: {0}")]
    Decode(String),
    #[error("unsupported image format or bit depth: {0}")]
    Unsupported(String),
}

fn to_u8(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

/// Write a raster as PNG, or binary PPM/PGM when the extension says so.
pub fn write_image(raster: &Raster, path: &Path) -> Result<(), IoError> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or("")
        .to_ascii_lowercase();
    match ext.as_str() {
        "ppm" | "pgm" => write_pnm(raster, path, &ext),
        _ => write_png(raster, path),
    }
}

fn write_png(raster: &Raster, path: &Path) -> Result<(), IoError> {
    let w = raster.width as u32;
    let h = raster.height as u32;
    let bytes: Vec<u8> = raster.data.iter().map(|v| to_u8(*v)).collect();
    let result = if raster.channels == 1 {
        image::save_buffer(path, &bytes, w, h, image::ExtendedColorType::L8)
    } else {
        image::save_buffer(path, &bytes, w, h, image::ExtendedColorType::Rgb8)
    };
    result.map_err(|e| IoError::Decode(e.to_string()))
}

fn write_pnm(raster: &Raster, path: &Path, ext: &str) -> Result<(), IoError> {
    let gray = ext == "pgm";
    let src = if gray && raster.channels == 3 {
        raster.luminance()
    } else {
        raster.clone()
    };
    let magic = if gray { "P5" } else { "P6" };
    let mut out = format!("{magic}\n{} {}\n255\n", src.width, src.height).into_bytes();
    if gray {
        out.extend(src.data.iter().map(|v| to_u8(*v)));
    } else {
        for y in 0..src.height {
            for x in 0..src.width {
                let px = src.rgb_at(x, y);
                out.extend([to_u8(px[0]), to_u8(px[1]), to_u8(px[2])]);
            }
        }
    }
    fs::write(path, out)?;
    Ok(())
}

/// Read a PNG or binary PPM/PGM into a raster.
pub fn read_image(path: &Path) -> Result<Raster, IoError> {
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    if bytes.starts_with(b"P5") || bytes.starts_with(b"P6") {
        return read_pnm(&bytes);
    }
    let img = image::load_from_memory(&bytes).map_err(|e| IoError::Decode(e.to_string()))?;
    let raster = match img {
        image::DynamicImage::ImageLuma8(g) => {
            let (w, h) = (g.width() as usize, g.height() as usize);
            Raster {
                width: w,
                height: h,
                channels: 1,
                data: g.into_raw().into_iter().map(|v| v as f64 / 255.0).collect(),
            }
        }
        image::DynamicImage::ImageRgb8(rgb) => {
            let (w, h) = (rgb.width() as usize, rgb.height() as usize);
            Raster {
                width: w,
                height: h,
                channels: 3,
                data: rgb
                    .into_raw()
                    .into_iter()
                    .map(|v| v as f64 / 255.0)
                    .collect(),
            }
        }
        image::DynamicImage::ImageRgba8(rgba) => {
            // Composite over white; downstream sources are opaque renders.
            let (w, h) = (rgba.width() as usize, rgba.height() as usize);
            let raw = rgba.into_raw();
            let mut data = Vec::with_capacity(w * h * 3);
            for px in raw.chunks_exact(4) {
                let a = px[3] as f64 / 255.0;
                for c in 0..3 {
                    let v = px[c] as f64 / 255.0;
                    data.push(v * a + (1.0 - a));
                }
            }
            Raster {
                width: w,
                height: h,
                channels: 3,
                data,
            }
        }
        image::DynamicImage::ImageLumaA8(ga) => {
            let (w, h) = (ga.width() as usize, ga.height() as usize);
            let raw = ga.into_raw();
            let data = raw
                .chunks_exact(2)
                .map(|px| {
                    let a = px[1] as f64 / 255.0;
                    px[0] as f64 / 255.0 * a + (1.0 - a)
                })
                .collect();
            Raster {
                width: w,
                height: h,
                channels: 1,
                data,
            }
        }
        other => {
            return Err(IoError::Unsupported(format!(
                "unsupported pixel layout {:?}",
                other.color()
            )))
        }
    };
    Ok(raster)
}

fn read_pnm(bytes: &[u8]) -> Result<Raster, IoError> {
    let gray = bytes.starts_with(b"P5");
    let mut pos = 2;
    let mut fields = Vec::with_capacity(3);
    while fields.len() < 3 && pos < bytes.len() {
        // skip whitespace and comments
        while pos < bytes.len() && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b'#') {
            if bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                pos += 1;
            }
        }
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if start == pos {
            return Err(IoError::Unsupported("truncated PNM header".into()));
        }
        let v: usize = std::str::from_utf8(&bytes[start..pos])
            .unwrap()
            .parse()
            .map_err(|_| IoError::Unsupported("bad PNM header field".into()))?;
        fields.push(v);
    }
    let [width, height, maxval] = fields[..] else {
        return Err(IoError::Unsupported("truncated PNM header".into()));
    };
    if maxval != 255 {
        return Err(IoError::Unsupported(format!(
            "PNM maxval {maxval}, only 255 supported"
        )));
    }
    pos += 1; // single whitespace after maxval
    let channels = if gray { 1 } else { 3 };
    let need = width * height * channels;
    if bytes.len() < pos + need {
        return Err(IoError::Unsupported("truncated PNM pixel data".into()));
    }
    Ok(Raster {
        width,
        height,
        channels,
        data: bytes[pos..pos + need]
            .iter()
            .map(|v| *v as f64 / 255.0)
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn checkerboard(ch: usize) -> Raster {
        let mut r = Raster::new(9, 7, ch, 0.0);
        for y in 0..7 {
            for x in 0..9 {
                for c in 0..ch {
                    let v = ((x + y + c) % 2) as f64;
                    r.set(x, y, c, v * (200.0 / 255.0));
                }
            }
        }
        r
    }

    #[test]
    fn png_roundtrip_exact_after_quantization() {
        let dir = tempfile::tempdir().unwrap();
        for ch in [1, 3] {
            let img = checkerboard(ch);
            let path = dir.path().join(format!("t{ch}.png"));
            write_image(&img, &path).unwrap();
            let back = read_image(&path).unwrap();
            assert_eq!(back.channels, ch);
            assert_eq!(back.data, img.data);
        }
    }

    #[test]
    fn pnm_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let img = checkerboard(3);
        let path = dir.path().join("t.ppm");
        write_image(&img, &path).unwrap();
        let back = read_image(&path).unwrap();
        assert_eq!(back.data, img.data);

        let gray = checkerboard(1);
        let path = dir.path().join("t.pgm");
        write_image(&gray, &path).unwrap();
        let back = read_image(&path).unwrap();
        assert_eq!(back.data, gray.data);
    }

    #[test]
    fn pgm_fixed_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("two.pgm");
        fs::write(&path, b"P5\n2 2\n255\n\x00\xff\x00\xff").unwrap();
        let img = read_image(&path).unwrap();
        assert_eq!(img.data, vec![0.0, 1.0, 0.0, 1.0]);
    }

    #[test]
    fn corrupt_file_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.png");
        fs::write(&path, b"not an image").unwrap();
        assert!(read_image(&path).is_err());
    }
}
