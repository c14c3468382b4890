//! Training-time degradation: render the scene small, blur it, re-vectorize
//! with a classical tracer, and render the imperfect result back as a
//! fixed-stroke outline. Fully deterministic for a given seed.

use crate::geom::Point;
use crate::path::NORMALIZED_SIZE;
use crate::raster::{render_fill, render_outline, Raster};
use crate::rounded::{RoundedPolygon, RoundedVertex, SHARP};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DegradeError {
    #[error("degraded to blank: tracing found no contours")]
    DegradedToBlank,
}

#[derive(Debug, Clone)]
pub struct DegradeConfig {
    /// Reduced render resolution is sampled uniformly from this range.
    pub resolution_range: (usize, usize),
    /// Gaussian blur sigma (pixels) sampled uniformly from this range.
    pub blur_sigma_range: (f64, f64),
    pub rng_seed: u64,
    /// Probability of skipping degradation and returning the clean outline.
    pub bypass_probability: f64,
    /// Output outline raster size (model-facing resolution).
    pub outline_size: usize,
    pub stroke_width: f64,
    /// Luminance threshold for the tracer.
    pub binarize_threshold: f64,
}

impl Default for DegradeConfig {
    fn default() -> Self {
        Self {
            resolution_range: (224, 336),
            blur_sigma_range: (0.5, 2.0),
            rng_seed: 0,
            bypass_probability: 0.25,
            outline_size: 448,
            stroke_width: 2.0,
            binarize_threshold: 0.5,
        }
    }
}

/// Contours recovered by the classical tracer, in normalized 128-unit
/// coordinates. Loops are stored open and closed implicitly.
#[derive(Debug, Clone, Default)]
pub struct TraceResult {
    pub contours: Vec<Vec<Point>>,
    /// Regions discarded for being under the area threshold.
    pub dropped_regions: usize,
}

/// What the degradation actually did, for reproducibility records.
#[derive(Debug, Clone, PartialEq)]
pub struct DegradeRecord {
    pub bypassed: bool,
    pub resolution: usize,
    pub blur_sigma: f64,
    pub traced_contours: usize,
}

const SIMPLIFY_EPSILON_PX: f64 = 0.75;
const MIN_REGION_AREA_PX: f64 = 4.0;

/// Luminance-threshold marching squares with subpixel interpolation,
/// Douglas-Peucker simplified, tiny regions dropped, coordinates mapped to
/// the 128-unit frame. A blank image yields an empty result.
pub fn classical_trace(image: &Raster, binarize_threshold: f64) -> TraceResult {
    let lum = image.luminance();
    let loops = marching_squares(&lum, binarize_threshold);
    let scale = NORMALIZED_SIZE / image.width.max(image.height) as f64;
    let mut contours = Vec::new();
    let mut dropped = 0;
    for lp in loops {
        if polygon_area(&lp).abs() < MIN_REGION_AREA_PX {
            dropped += 1;
            continue;
        }
        let simplified = simplify_closed(&lp, SIMPLIFY_EPSILON_PX);
        if simplified.len() < 3 {
            dropped += 1;
            continue;
        }
        contours.push(simplified.into_iter().map(|p| p * scale).collect());
    }
    TraceResult {
        contours,
        dropped_regions: dropped,
    }
}

/// Run the full degradation pipeline on a (colorless) scene.
pub fn degrade_outline(
    scene: &[RoundedPolygon],
    cfg: &DegradeConfig,
) -> Result<(Raster, DegradeRecord), DegradeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let bypass = rng.gen::<f64>() < cfg.bypass_probability;
    if bypass {
        let raster = render_outline(scene, cfg.outline_size, cfg.stroke_width);
        return Ok((
            raster,
            DegradeRecord {
                bypassed: true,
                resolution: cfg.outline_size,
                blur_sigma: 0.0,
                traced_contours: scene.len(),
            },
        ));
    }
    let (lo, hi) = cfg.resolution_range;
    let resolution = if hi > lo { rng.gen_range(lo..=hi) } else { lo };
    let (slo, shi) = cfg.blur_sigma_range;
    let sigma = if shi > slo {
        rng.gen_range(slo..=shi)
    } else {
        slo
    };

    // Fill render, colors discarded: every path paints black.
    let colored: Vec<(RoundedPolygon, crate::color::Rgb)> = scene
        .iter()
        .map(|p| (p.clone(), crate::color::Rgb::BLACK))
        .collect();
    let order: Vec<usize> = (0..scene.len()).collect();
    let filled = render_fill(&colored, &order, resolution, 1).luminance();
    let blurred = filled.gaussian_blur(sigma);
    let trace = classical_trace(&blurred, cfg.binarize_threshold);
    if trace.contours.is_empty() {
        return Err(DegradeError::DegradedToBlank);
    }
    let polys = contours_to_polygons(&trace);
    let raster = render_outline(&polys, cfg.outline_size, cfg.stroke_width);
    Ok((
        raster,
        DegradeRecord {
            bypassed: false,
            resolution,
            blur_sigma: sigma,
            traced_contours: trace.contours.len(),
        },
    ))
}

/// Traced loops as sharp closed polygons, ready for outline rendering.
pub fn contours_to_polygons(trace: &TraceResult) -> Vec<RoundedPolygon> {
    trace
        .contours
        .iter()
        .map(|lp| RoundedPolygon {
            vertices: lp
                .iter()
                .map(|p| RoundedVertex::new(p.x, p.y, SHARP))
                .collect(),
            closed: true,
        })
        .collect()
}

/// Contour-exchange JSON (`{"contours": [[[x,y],...], ...]}`) in normalized
/// units, for external tracer integration.
pub fn contours_to_json(trace: &TraceResult) -> String {
    let contours: Vec<Vec<[f64; 2]>> = trace
        .contours
        .iter()
        .map(|lp| lp.iter().map(|p| [p.x, p.y]).collect())
        .collect();
    serde_json::json!({ "contours": contours }).to_string()
}

pub fn contours_from_json(text: &str) -> Result<TraceResult, String> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| format!("bad contour JSON: {e}"))?;
    let arr = value
        .get("contours")
        .and_then(|c| c.as_array())
        .ok_or("missing \"contours\" array")?;
    let mut contours = Vec::with_capacity(arr.len());
    for lp in arr {
        let pts = lp.as_array().ok_or("contour is not an array")?;
        let mut out = Vec::with_capacity(pts.len());
        for p in pts {
            let xy = p.as_array().filter(|v| v.len() == 2).ok_or("point is not [x,y]")?;
            let x = xy[0].as_f64().ok_or("non-numeric coordinate")?;
            let y = xy[1].as_f64().ok_or("non-numeric coordinate")?;
            out.push(Point::new(x, y));
        }
        if out.len() >= 3 {
            contours.push(out);
        }
    }
    Ok(TraceResult {
        contours,
        dropped_regions: 0,
    })
}

// ---------------------------------------------------------------------------
// Marching squares

/// Iso-contours of (threshold - luminance) = 0, i.e. boundaries of regions
/// darker than the threshold, with the dark side on the left of the walk
/// direction. Points are in pixel coordinates (pixel centers at i + 0.5).
fn marching_squares(lum: &Raster, threshold: f64) -> Vec<Vec<Point>> {
    let w = lum.width;
    let h = lum.height;
    // Field over a one-pixel white pad so border regions close.
    let pw = w + 2;
    let ph = h + 2;
    let field = |ix: usize, iy: usize| -> f64 {
        if ix == 0 || iy == 0 || ix > w || iy > h {
            threshold - 1.0
        } else {
            threshold - lum.get(ix - 1, iy - 1, 0)
        }
    };
    let pos = |ix: usize, iy: usize| Point::new(ix as f64 - 1.0 + 0.5, iy as f64 - 1.0 + 0.5);

    // Edges: 0 top, 1 right, 2 bottom, 3 left. Transition map per cell:
    // entry edge -> exit edge, from the case of its four corners.
    let cells_w = pw - 1;
    let cells_h = ph - 1;
    // Up to two transitions per cell (saddles).
    let mut transitions: Vec<[i8; 4]> = vec![[-1; 4]; cells_w * cells_h];
    for cy in 0..cells_h {
        for cx in 0..cells_w {
            let f_tl = field(cx, cy);
            let f_tr = field(cx + 1, cy);
            let f_br = field(cx + 1, cy + 1);
            let f_bl = field(cx, cy + 1);
            let case = ((f_tl > 0.0) as usize) << 3
                | ((f_tr > 0.0) as usize) << 2
                | ((f_br > 0.0) as usize) << 1
                | ((f_bl > 0.0) as usize);
            let t = &mut transitions[cy * cells_w + cx];
            // (entry, exit) pairs keep the dark side on the left.
            match case {
                0b0000 | 0b1111 => {}
                0b1000 => t[0] = 3, // top -> left
                0b0100 => t[1] = 0, // right -> top
                0b0010 => t[2] = 1, // bottom -> right
                0b0001 => t[3] = 2, // left -> bottom
                0b1100 => t[1] = 3, // right -> left
                0b0110 => t[2] = 0, // bottom -> top
                0b0011 => t[3] = 1, // left -> right
                0b1001 => t[0] = 2, // top -> bottom
                0b1110 => t[2] = 3, // bottom -> left
                0b0111 => t[3] = 0, // left -> top
                0b1011 => t[0] = 1, // top -> right
                0b1101 => t[1] = 2, // right -> bottom
                0b1010 => {
                    // TL+BR saddle
                    let center = 0.25 * (f_tl + f_tr + f_br + f_bl);
                    if center > 0.0 {
                        t[0] = 1; // top -> right
                        t[2] = 3; // bottom -> left
                    } else {
                        t[0] = 3; // top -> left
                        t[2] = 1; // bottom -> right
                    }
                }
                0b0101 => {
                    // TR+BL saddle
                    let center = 0.25 * (f_tl + f_tr + f_br + f_bl);
                    if center > 0.0 {
                        t[1] = 2; // right -> bottom
                        t[3] = 0; // left -> top
                    } else {
                        t[1] = 0; // right -> top
                        t[3] = 2; // left -> bottom
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    // Interpolated crossing point on a cell edge.
    let edge_point = |cx: usize, cy: usize, edge: i8| -> Point {
        let (a, b) = match edge {
            0 => ((cx, cy), (cx + 1, cy)),
            1 => ((cx + 1, cy), (cx + 1, cy + 1)),
            2 => ((cx, cy + 1), (cx + 1, cy + 1)),
            3 => ((cx, cy), (cx, cy + 1)),
            _ => unreachable!(),
        };
        let fa = field(a.0, a.1);
        let fb = field(b.0, b.1);
        let t = if (fa - fb).abs() < 1e-300 {
            0.5
        } else {
            (fa / (fa - fb)).clamp(0.0, 1.0)
        };
        pos(a.0, a.1).lerp(pos(b.0, b.1), t)
    };

    let mut visited = vec![[false; 4]; cells_w * cells_h];
    let mut loops = Vec::new();
    for start_cy in 0..cells_h {
        for start_cx in 0..cells_w {
            for start_entry in 0..4i8 {
                let idx = start_cy * cells_w + start_cx;
                if transitions[idx][start_entry as usize] < 0
                    || visited[idx][start_entry as usize]
                {
                    continue;
                }
                let mut pts = Vec::new();
                let (mut cx, mut cy, mut entry) = (start_cx, start_cy, start_entry);
                loop {
                    let idx = cy * cells_w + cx;
                    if visited[idx][entry as usize] {
                        break;
                    }
                    visited[idx][entry as usize] = true;
                    let exit = transitions[idx][entry as usize];
                    debug_assert!(exit >= 0, "walk entered a cell without a transition");
                    pts.push(edge_point(cx, cy, exit));
                    // Move to the neighbor across the exit edge.
                    match exit {
                        0 => {
                            cy -= 1;
                            entry = 2;
                        }
                        1 => {
                            cx += 1;
                            entry = 3;
                        }
                        2 => {
                            cy += 1;
                            entry = 0;
                        }
                        3 => {
                            cx -= 1;
                            entry = 1;
                        }
                        _ => unreachable!(),
                    }
                }
                if pts.len() >= 3 {
                    loops.push(pts);
                }
            }
        }
    }
    loops
}

fn polygon_area(pts: &[Point]) -> f64 {
    let n = pts.len();
    let mut acc = 0.0;
    for i in 0..n {
        acc += pts[i].cross(pts[(i + 1) % n]);
    }
    0.5 * acc
}

// ---------------------------------------------------------------------------
// Douglas-Peucker

/// Simplify a closed loop: anchored at the two mutually farthest-ish points
/// (index 0 and the point farthest from it), each半 simplified openly.
fn simplify_closed(pts: &[Point], epsilon: f64) -> Vec<Point> {
    let n = pts.len();
    if n <= 4 {
        return pts.to_vec();
    }
    let far = (1..n)
        .max_by(|&i, &j| {
            pts[0]
                .distance(pts[i])
                .partial_cmp(&pts[0].distance(pts[j]))
                .unwrap()
        })
        .unwrap();
    let mut first_half = simplify_open(&pts[0..=far], epsilon);
    let mut second: Vec<Point> = pts[far..].to_vec();
    second.push(pts[0]);
    let second_half = simplify_open(&second, epsilon);
    first_half.pop(); // shared anchor
    first_half.extend_from_slice(&second_half[..second_half.len() - 1]);
    first_half
}

pub(crate) fn simplify_open(pts: &[Point], epsilon: f64) -> Vec<Point> {
    if pts.len() <= 2 {
        return pts.to_vec();
    }
    let mut keep = vec![false; pts.len()];
    keep[0] = true;
    keep[pts.len() - 1] = true;
    dp_mark(pts, 0, pts.len() - 1, epsilon, &mut keep);
    pts.iter()
        .zip(&keep)
        .filter(|(_, k)| **k)
        .map(|(p, _)| *p)
        .collect()
}

fn dp_mark(pts: &[Point], lo: usize, hi: usize, epsilon: f64, keep: &mut [bool]) {
    if hi <= lo + 1 {
        return;
    }
    let a = pts[lo];
    let b = pts[hi];
    let ab = b - a;
    let len = ab.norm();
    let mut worst = (0.0, lo);
    for i in lo + 1..hi {
        let d = if len < 1e-12 {
            pts[i].distance(a)
        } else {
            (pts[i] - a).cross(ab).abs() / len
        };
        if d > worst.0 {
            worst = (d, i);
        }
    }
    if worst.0 > epsilon {
        keep[worst.1] = true;
        dp_mark(pts, lo, worst.1, epsilon, keep);
        dp_mark(pts, worst.1, hi, epsilon, keep);
    }
}
