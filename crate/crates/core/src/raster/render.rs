//! Scanline fill (nonzero winding, center-of-pixel coverage), fixed-width
//! outline stroking, and per-path binary masks, all in the shared 128-unit
//! frame.

use crate::color::Rgb;
use crate::geom::Point;
use crate::linearc::Primitive;
use crate::path::NORMALIZED_SIZE;
use crate::rounded::{from_rounded, sanitize_roundness, RoundedPolygon};

use super::{Mask, Raster};

/// Max chord deviation when flattening arcs, in output pixels.
const FLATTEN_SAGITTA_PX: f64 = 0.1;

/// Flatten a rounded polygon into closed loops in pixel coordinates at the
/// given scale (pixels per unit). Roundness that does not fit its edges is
/// clamped; degenerate corners fall back to the sharp polygon.
pub fn flatten_to_pixel_loops(poly: &RoundedPolygon, scale: f64) -> Vec<Vec<Point>> {
    let (clean, _) = sanitize_roundness(poly);
    let chain = match from_rounded(&clean) {
        Ok(chain) => chain,
        Err(_) => {
            let pts = poly
                .vertices
                .iter()
                .map(|v| v.pos() * scale)
                .collect::<Vec<_>>();
            return vec![pts];
        }
    };
    let mut loop_pts: Vec<Point> = Vec::new();
    for prim in &chain.primitives {
        match prim {
            Primitive::Line(l) => {
                loop_pts.push(l.a * scale);
            }
            Primitive::Arc(arc) => {
                let r_px = arc.radius * scale;
                let max_theta = if r_px <= FLATTEN_SAGITTA_PX {
                    arc.sweep.abs().max(1e-9)
                } else {
                    2.0 * (1.0 - FLATTEN_SAGITTA_PX / r_px).acos().max(1e-4)
                };
                let nseg = (arc.sweep.abs() / max_theta).ceil().max(1.0) as usize;
                for k in 0..nseg {
                    loop_pts.push(arc.eval(k as f64 / nseg as f64) * scale);
                }
            }
        }
    }
    if let Some(last) = chain.primitives.last() {
        if !chain.closed {
            loop_pts.push(last.end() * scale);
        }
    }
    if loop_pts.len() < 2 {
        return Vec::new();
    }
    vec![loop_pts]
}

/// Binary nonzero-winding coverage of the loops, testing pixel centers.
/// Loops are in pixel coordinates and treated as closed.
fn rasterize_loops(loops: &[Vec<Point>], width: usize, height: usize, out: &mut [bool]) {
    debug_assert_eq!(out.len(), width * height);
    // Collect edges once; skip horizontals.
    let mut edges: Vec<(Point, Point, i32)> = Vec::new();
    for lp in loops {
        let n = lp.len();
        for i in 0..n {
            let a = lp[i];
            let b = lp[(i + 1) % n];
            if a.y == b.y {
                continue;
            }
            let w = if b.y > a.y { 1 } else { -1 };
            edges.push((a, b, w));
        }
    }
    let mut crossings: Vec<(f64, i32)> = Vec::new();
    for row in 0..height {
        let y = row as f64 + 0.5;
        crossings.clear();
        for &(a, b, w) in &edges {
            let (y0, y1) = if w > 0 { (a.y, b.y) } else { (b.y, a.y) };
            if y0 <= y && y < y1 {
                let t = (y - a.y) / (b.y - a.y);
                crossings.push((a.x + t * (b.x - a.x), w));
            }
        }
        if crossings.is_empty() {
            continue;
        }
        crossings.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
        let mut winding = 0;
        for k in 0..crossings.len() {
            winding += crossings[k].1;
            if winding != 0 && k + 1 < crossings.len() {
                let x0 = crossings[k].0;
                let x1 = crossings[k + 1].0;
                let i0 = ((x0 - 0.5).ceil().max(0.0) as usize).min(width);
                let i1 = ((x1 - 0.5).ceil().max(0.0) as usize).min(width);
                for i in i0..i1 {
                    out[row * width + i] = true;
                }
            }
        }
    }
}

/// Coverage of pre-flattened pixel-space loops into an existing mask, using
/// the same center-of-pixel nonzero-winding rule as every other render path.
pub(crate) fn rasterize_pixel_loops(loops: &[Vec<Point>], mask: &mut Mask) {
    rasterize_loops(loops, mask.width, mask.height, &mut mask.bits);
}

/// Binary mask of one path at `resolution` pixels across the 128-unit frame.
pub fn path_mask(poly: &RoundedPolygon, resolution: usize) -> Mask {
    let scale = resolution as f64 / NORMALIZED_SIZE;
    let loops = flatten_to_pixel_loops(poly, scale);
    let mut mask = Mask::new(resolution, resolution);
    rasterize_loops(&loops, resolution, resolution, &mut mask.bits);
    mask
}

/// Paint filled paths back-to-front over white.
///
/// `order[k]` is the scene index drawn at depth k (first = bottom). Coverage
/// is binary per subsample; anti-aliasing is a box filter over
/// supersample^2 subsamples. With supersample = 1 the coverage is exactly
/// [`path_mask`] at the same resolution.
pub fn render_fill(
    scene: &[(RoundedPolygon, Rgb)],
    order: &[usize],
    size: usize,
    supersample: usize,
) -> Raster {
    let ss = supersample.max(1);
    let big = size * ss;
    let scale = big as f64 / NORMALIZED_SIZE;

    // Topmost path index per subsample; usize::MAX = background.
    let mut top = vec![usize::MAX; big * big];
    let mut coverage = vec![false; big * big];
    for &idx in order {
        let loops = flatten_to_pixel_loops(&scene[idx].0, scale);
        coverage.iter_mut().for_each(|b| *b = false);
        rasterize_loops(&loops, big, big, &mut coverage);
        for (t, c) in top.iter_mut().zip(&coverage) {
            if *c {
                *t = idx;
            }
        }
    }

    let mut out = Raster::new(size, size, 3, 0.0);
    let norm = 1.0 / (ss * ss) as f64;
    for y in 0..size {
        for x in 0..size {
            let mut acc = [0.0f64; 3];
            for sy in 0..ss {
                for sx in 0..ss {
                    let t = top[(y * ss + sy) * big + (x * ss + sx)];
                    let c = if t == usize::MAX {
                        [1.0, 1.0, 1.0]
                    } else {
                        scene[t].1.to_unit()
                    };
                    acc[0] += c[0];
                    acc[1] += c[1];
                    acc[2] += c[2];
                }
            }
            for ch in 0..3 {
                out.set(x, y, ch, acc[ch] * norm);
            }
        }
    }
    out
}

/// Stroke every path boundary in black at constant pixel width over white;
/// no fills. Strokes are the pixels whose centers lie within
/// stroke_width / 2 of the flattened boundary.
pub fn render_outline(scene: &[RoundedPolygon], size: usize, stroke_width: f64) -> Raster {
    let scale = size as f64 / NORMALIZED_SIZE;
    let half = stroke_width / 2.0;
    let mut out = Raster::new(size, size, 1, 1.0);
    for poly in scene {
        for lp in flatten_to_pixel_loops(poly, scale) {
            let n = lp.len();
            let seg_count = if poly.closed || n < 2 { n } else { n - 1 };
            for i in 0..seg_count {
                let a = lp[i];
                let b = lp[(i + 1) % n];
                stroke_segment(&mut out, a, b, half);
            }
        }
    }
    out
}

fn stroke_segment(img: &mut Raster, a: Point, b: Point, half: f64) {
    let pad = half + 1.0;
    let x0 = ((a.x.min(b.x) - pad).floor().max(0.0)) as usize;
    let x1 = ((a.x.max(b.x) + pad).ceil().min(img.width as f64)) as usize;
    let y0 = ((a.y.min(b.y) - pad).floor().max(0.0)) as usize;
    let y1 = ((a.y.max(b.y) + pad).ceil().min(img.height as f64)) as usize;
    let ab = b - a;
    let len_sq = ab.norm_sq();
    for y in y0..y1 {
        for x in x0..x1 {
            let p = Point::new(x as f64 + 0.5, y as f64 + 0.5);
            let d = if len_sq < 1e-24 {
                p.distance(a)
            } else {
                let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
                p.distance(a + ab * t)
            };
            if d <= half {
                img.set(x, y, 0, 0.0);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rounded::{RoundedVertex, SHARP};

    fn rect_poly(x0: f64, y0: f64, x1: f64, y1: f64) -> RoundedPolygon {
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

    fn circle_poly(cx: f64, cy: f64, r: f64) -> RoundedPolygon {
        // circumscribed square with d = r at every corner = exact circle
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

    #[test]
    fn full_frame_black_rect() {
        let scene = vec![(rect_poly(0.0, 0.0, 128.0, 128.0), Rgb::BLACK)];
        let img = render_fill(&scene, &[0], 64, 1);
        assert!(img.data.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn empty_scene_white() {
        let img = render_fill(&[], &[], 32, 2);
        assert!(img.data.iter().all(|v| *v == 1.0));
        let outline = render_outline(&[], 32, 2.0);
        assert!(outline.data.iter().all(|v| *v == 1.0));
    }

    #[test]
    fn circle_area_within_one_percent() {
        // radius 32 units at 256 px = 64 px radius
        let scene = vec![(circle_poly(64.0, 64.0, 32.0), Rgb::BLACK)];
        let img = render_fill(&scene, &[0], 256, 4);
        let dark: f64 = img
            .data
            .chunks(3)
            .map(|px| 1.0 - (px[0] + px[1] + px[2]) / 3.0)
            .sum();
        let expect = std::f64::consts::PI * 64.0 * 64.0;
        assert!(
            (dark - expect).abs() / expect < 0.01,
            "area {dark} vs {expect}"
        );
    }

    #[test]
    fn coverage_error_non_increasing_with_supersample() {
        let scene = vec![(circle_poly(64.0, 64.0, 32.0), Rgb::BLACK)];
        let expect = std::f64::consts::PI * 64.0 * 64.0;
        let mut errs = Vec::new();
        for ss in [1, 4, 8] {
            let img = render_fill(&scene, &[0], 256, ss);
            let dark: f64 = img
                .data
                .chunks(3)
                .map(|px| 1.0 - (px[0] + px[1] + px[2]) / 3.0)
                .sum();
            errs.push((dark - expect).abs());
        }
        assert!(errs[1] <= errs[0] + 1e-6 && errs[2] <= errs[1] + 1e-6, "{errs:?}");
    }

    #[test]
    fn mask_matches_fill_at_supersample_one() {
        let poly = circle_poly(60.0, 70.0, 20.0);
        let mask = path_mask(&poly, 128);
        let img = render_fill(&[(poly, Rgb::BLACK)], &[0], 128, 1);
        for y in 0..128 {
            for x in 0..128 {
                let filled = img.get(x, y, 0) < 0.5;
                assert_eq!(filled, mask.get(x, y), "at ({x},{y})");
            }
        }
    }

    #[test]
    fn square_mask_pixel_count() {
        // [32,96]^2 units at 256 px -> (64/128*256)^2 = 128^2 px
        let mask = path_mask(&rect_poly(32.0, 32.0, 96.0, 96.0), 256);
        let count = mask.count() as i64;
        assert!((count - 128 * 128).abs() <= 512, "count = {count}");
    }

    #[test]
    fn disjoint_masks_no_intersection() {
        let a = path_mask(&rect_poly(8.0, 8.0, 40.0, 40.0), 256);
        let b = path_mask(&rect_poly(80.0, 80.0, 120.0, 120.0), 256);
        assert!(!a.intersects(&b));
    }

    #[test]
    fn order_changes_only_overlap_pixels() {
        let a = rect_poly(20.0, 20.0, 80.0, 80.0);
        let b = rect_poly(50.0, 50.0, 110.0, 110.0);
        let scene = vec![
            (a.clone(), Rgb::new(255, 0, 0)),
            (b.clone(), Rgb::new(0, 0, 255)),
        ];
        let img01 = render_fill(&scene, &[0, 1], 128, 1);
        let img10 = render_fill(&scene, &[1, 0], 128, 1);
        let ma = path_mask(&a, 128);
        let mb = path_mask(&b, 128);
        for y in 0..128 {
            for x in 0..128 {
                let differs = img01.rgb_at(x, y) != img10.rgb_at(x, y);
                if differs {
                    assert!(
                        ma.get(x, y) && mb.get(x, y),
                        "difference outside overlap at ({x},{y})"
                    );
                }
            }
        }
    }

    #[test]
    fn outline_square_bars() {
        let scene = vec![rect_poly(32.0, 32.0, 96.0, 96.0)];
        let img = render_outline(&scene, 128, 2.0);
        // interior well away from the boundary is white
        assert_eq!(img.get(64, 64, 0), 1.0);
        // boundary pixel is black
        assert_eq!(img.get(32, 64, 0), 0.0);
        // stroke is about 2 px wide: at x=30 (1.5px away) white
        assert_eq!(img.get(29, 64, 0), 1.0);
    }

    #[test]
    fn rendering_is_deterministic() {
        let scene = vec![
            (circle_poly(50.0, 50.0, 30.0), Rgb::new(10, 200, 50)),
            (rect_poly(40.0, 40.0, 100.0, 100.0), Rgb::new(200, 10, 50)),
        ];
        let a = render_fill(&scene, &[1, 0], 200, 2);
        let b = render_fill(&scene, &[1, 0], 200, 2);
        assert_eq!(a.data, b.data);
    }
}
