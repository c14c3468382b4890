//! Shared generators for the integration suites: synthetic SVG documents
//! and random rounded-polygon scenes.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use roundpoly::color::Rgb;
use roundpoly::geom::Point;
use roundpoly::rounded::{RoundedPolygon, RoundedVertex, SHARP};

pub fn svg_circle(cx: f64, cy: f64, r: f64) -> String {
    format!(r#"<svg viewBox="0 0 128 128"><circle cx="{cx}" cy="{cy}" r="{r}"/></svg>"#)
}

pub fn svg_rounded_rect(x: f64, y: f64, w: f64, h: f64, rx: f64) -> String {
    format!(
        r#"<svg viewBox="0 0 128 128"><rect x="{x}" y="{y}" width="{w}" height="{h}" rx="{rx}"/></svg>"#
    )
}

pub fn svg_star(cx: f64, cy: f64, points: usize, r_outer: f64, r_inner: f64) -> String {
    let mut coords = Vec::new();
    for k in 0..2 * points {
        let r = if k % 2 == 0 { r_outer } else { r_inner };
        let theta = std::f64::consts::PI * k as f64 / points as f64 - std::f64::consts::FRAC_PI_2;
        coords.push(format!(
            "{:.3},{:.3}",
            cx + r * theta.cos(),
            cy + r * theta.sin()
        ));
    }
    format!(
        r#"<svg viewBox="0 0 128 128"><polygon points="{}"/></svg>"#,
        coords.join(" ")
    )
}

/// Smooth closed blob: a low-frequency radial wobble turned into cubic
/// segments by Catmull-Rom interpolation.
pub fn svg_blob(rng: &mut ChaCha8Rng, cx: f64, cy: f64, base_r: f64) -> String {
    let harmonics: Vec<(f64, f64, f64)> = (2..5)
        .map(|k| {
            (
                k as f64,
                rng.gen_range(0.02..0.12) * base_r,
                rng.gen_range(0.0..std::f64::consts::TAU),
            )
        })
        .collect();
    let n = 24;
    let pts: Vec<Point> = (0..n)
        .map(|i| {
            let theta = std::f64::consts::TAU * i as f64 / n as f64;
            let r = base_r
                + harmonics
                    .iter()
                    .map(|(k, a, phi)| a * (k * theta + phi).cos())
                    .sum::<f64>();
            Point::new(cx + r * theta.cos(), cy + r * theta.sin())
        })
        .collect();
    let mut d = format!("M {:.3} {:.3} ", pts[0].x, pts[0].y);
    for i in 0..n {
        let p0 = pts[(i + n - 1) % n];
        let p1 = pts[i];
        let p2 = pts[(i + 1) % n];
        let p3 = pts[(i + 2) % n];
        let c1 = p1 + (p2 - p0) * (1.0 / 6.0);
        let c2 = p2 - (p3 - p1) * (1.0 / 6.0);
        d.push_str(&format!(
            "C {:.3} {:.3} {:.3} {:.3} {:.3} {:.3} ",
            c1.x, c1.y, c2.x, c2.y, p2.x, p2.y
        ));
    }
    d.push('Z');
    format!(r#"<svg viewBox="0 0 128 128"><path d="{d}"/></svg>"#)
}

pub fn rect_poly(x0: f64, y0: f64, x1: f64, y1: f64) -> RoundedPolygon {
    RoundedPolygon {
        vertices: vec![
            RoundedVertex::new(x0, y0, SHARP),
            RoundedVertex::new(x1, y0, SHARP),
            RoundedVertex::new(x1, y1, SHARP),
            RoundedVertex::new(x0, y1, SHARP),
        ],
        closed: true,
    }
}

/// Circumscribed square with full corner roundness: an exact circle.
pub fn circle_poly(cx: f64, cy: f64, r: f64) -> RoundedPolygon {
    RoundedPolygon {
        vertices: vec![
            RoundedVertex::new(cx - r, cy - r, r),
            RoundedVertex::new(cx + r, cy - r, r),
            RoundedVertex::new(cx + r, cy + r, r),
            RoundedVertex::new(cx - r, cy + r, r),
        ],
        closed: true,
    }
}

/// Random scene of axis-aligned rects and circles with pairwise-distinct
/// colors; some shapes are deliberately nested inside the previous one.
pub fn random_scene(rng: &mut ChaCha8Rng, k: usize) -> (Vec<RoundedPolygon>, Vec<Rgb>) {
    let mut polys: Vec<RoundedPolygon> = Vec::new();
    let mut bboxes: Vec<(f64, f64, f64, f64)> = Vec::new();
    for i in 0..k {
        let nest = i > 0 && rng.gen_bool(0.35);
        let (x0, y0, x1, y1) = if nest {
            let (px0, py0, px1, py1) = bboxes[i - 1];
            let w = px1 - px0;
            let h = py1 - py0;
            if w > 24.0 && h > 24.0 {
                let nx0 = px0 + rng.gen_range(0.15..0.3) * w;
                let ny0 = py0 + rng.gen_range(0.15..0.3) * h;
                let nx1 = px1 - rng.gen_range(0.15..0.3) * w;
                let ny1 = py1 - rng.gen_range(0.15..0.3) * h;
                (nx0, ny0, nx1, ny1)
            } else {
                random_bbox(rng)
            }
        } else {
            random_bbox(rng)
        };
        bboxes.push((x0, y0, x1, y1));
        if rng.gen_bool(0.5) {
            polys.push(rect_poly(x0, y0, x1, y1));
        } else {
            let r = 0.5 * (x1 - x0).min(y1 - y0) / 2.0_f64.sqrt().max(1.0);
            let r = r.max(6.0);
            polys.push(circle_poly((x0 + x1) / 2.0, (y0 + y1) / 2.0, r));
        }
    }
    let mut colors: Vec<Rgb> = Vec::new();
    while colors.len() < k {
        let c = Rgb::new(rng.gen_range(0..=255), rng.gen_range(0..=255), rng.gen_range(0..=255));
        if c != Rgb::WHITE && !colors.contains(&c) {
            colors.push(c);
        }
    }
    (polys, colors)
}

fn random_bbox(rng: &mut ChaCha8Rng) -> (f64, f64, f64, f64) {
    let w = rng.gen_range(20.0..70.0);
    let h = rng.gen_range(20.0..70.0);
    let x0 = rng.gen_range(6.0..122.0 - w);
    let y0 = rng.gen_range(6.0..122.0 - h);
    (x0, y0, x0 + w, y0 + h)
}
