//! End-to-end helpers tying the stages together: SVG text in, rounded
//! polygons out, and back.

use crate::color::Rgb;
use crate::config::RunConfig;
use crate::geom::Point;
use crate::linearc::fit_linearc_with;
use crate::path::{normalize_viewbox, sample_equidistant, PathGeometry, NORMALIZED_SIZE};
use crate::rounded::{
    deserialize, sanitize_roundness, serialize, to_rounded, Diagnostic, ParseMode, RoundedError,
    RoundedPolygon, TokenDoc,
};
use crate::svg::{parse_svg, SvgError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Svg(#[from] SvgError),
    #[error(transparent)]
    Path(#[from] crate::path::PathError),
    #[error(transparent)]
    Rounded(#[from] RoundedError),
    #[error("no paths in input")]
    NoPaths,
}

/// Result of encoding an SVG document to rounded polygons.
#[derive(Debug, Clone)]
pub struct EncodedScene {
    pub polygons: Vec<RoundedPolygon>,
    /// Source fill of the path element each polygon came from, when stated.
    pub fills: Vec<Option<Rgb>>,
    /// Geometry after viewbox normalization, one entry per source element.
    pub normalized: Vec<PathGeometry>,
    /// Primitive count of each polygon's fitted chain.
    pub primitive_counts: Vec<usize>,
    pub warnings: Vec<String>,
}

/// Parse, normalize, sample, fit, and convert an SVG document.
pub fn encode_svg(text: &str, cfg: &RunConfig) -> Result<EncodedScene, PipelineError> {
    let scene = parse_svg(text)?;
    if scene.elements.is_empty() {
        return Err(PipelineError::NoPaths);
    }
    let geometries: Vec<PathGeometry> =
        scene.elements.iter().map(|e| e.geometry.clone()).collect();
    let normalized = normalize_viewbox(&geometries, &scene.viewbox)?;

    let mut polygons = Vec::new();
    let mut fills = Vec::new();
    let mut primitive_counts = Vec::new();
    let mut warnings = scene.warnings.clone();
    let fit_cfg = cfg.fit_config();
    for (el, geom) in scene.elements.iter().zip(&normalized) {
        let sampled = match sample_equidistant(geom, cfg.spacing) {
            Ok(s) => s,
            Err(e) => {
                warnings.push(format!("element {}: {e}; skipped", el.index));
                continue;
            }
        };
        for samples in &sampled {
            if samples.points.len() < 3 {
                warnings.push(format!(
                    "element {}: subpath too short to fit; skipped",
                    el.index
                ));
                continue;
            }
            let chain = fit_linearc_with(samples, &fit_cfg);
            // Tangent intersections of wide arcs can leave the frame even
            // when the curve is inside it; extra splits keep the token
            // coordinates within [0, 128].
            let chain = crate::linearc::subdivide_for_frame(&chain, 0.0, NORMALIZED_SIZE);
            let poly = to_rounded(&chain)?;
            if poly.vertices.len() < if poly.closed { 3 } else { 2 } {
                warnings.push(format!(
                    "element {}: degenerate polygon after conversion; skipped",
                    el.index
                ));
                continue;
            }
            primitive_counts.push(chain.primitives.len());
            fills.push(el.fill);
            polygons.push(poly);
        }
    }
    if polygons.is_empty() {
        return Err(PipelineError::NoPaths);
    }
    Ok(EncodedScene {
        polygons,
        fills,
        normalized,
        primitive_counts,
        warnings,
    })
}

/// Encode all the way to token text.
pub fn encode_svg_to_tokens(text: &str, cfg: &RunConfig) -> Result<TokenDoc, PipelineError> {
    let encoded = encode_svg(text, cfg)?;
    Ok(serialize(&encoded.polygons)?)
}

/// Decode token text to polygons. Recovery mode clamps out-of-budget
/// roundness and reports diagnostics instead of failing.
pub fn decode_tokens(
    doc: &TokenDoc,
    mode: ParseMode,
) -> Result<(Vec<RoundedPolygon>, Vec<Diagnostic>), RoundedError> {
    let (polys, mut diags) = deserialize(doc, mode)?;
    match mode {
        ParseMode::Strict => Ok((polys, diags)),
        ParseMode::Recovery => {
            let mut out = Vec::with_capacity(polys.len());
            for poly in polys {
                let (clean, more) = sanitize_roundness(&poly);
                diags.extend(more);
                out.push(clean);
            }
            Ok((out, diags))
        }
    }
}

/// Geometric fidelity of a decoded scene against its source geometry,
/// measured point-to-curve in both directions so sampling density cannot
/// inflate the numbers.
#[derive(Debug, Clone, Copy)]
pub struct FidelityReport {
    /// Max deviation between the boundaries, normalized units.
    pub hausdorff: f64,
    /// Mean symmetric deviation scaled by 1/128.
    pub chamfer: f64,
    /// Intersection-over-union of the filled coverage masks.
    pub mask_iou: f64,
}

pub fn roundtrip_fidelity(
    normalized: &[PathGeometry],
    decoded: &[RoundedPolygon],
    resolution: usize,
) -> FidelityReport {
    // Truth side: exact flattened polylines and dense samples.
    let truth_loops: Vec<(Vec<Point>, bool)> = normalized
        .iter()
        .flat_map(|g| crate::path::flatten_geometry(g, 0.02))
        .collect();
    let truth_samples: Vec<Point> = normalized
        .iter()
        .filter_map(|g| sample_equidistant(g, 0.25).ok())
        .flatten()
        .flat_map(|sp| sp.points)
        .collect();

    // Decoded side: line-arc chains and dense samples.
    let chains: Vec<crate::linearc::LineArcPath> = decoded
        .iter()
        .map(|p| {
            let (clean, _) = sanitize_roundness(p);
            crate::rounded::from_rounded(&clean).unwrap_or(crate::linearc::LineArcPath {
                primitives: Vec::new(),
                closed: true,
                corners: Vec::new(),
            })
        })
        .collect();
    let decoded_samples: Vec<Point> = chains
        .iter()
        .flat_map(|c| c.resample_spacing(0.25))
        .collect();

    let truth_to_decoded = |p: Point| {
        chains
            .iter()
            .map(|c| c.distance_from_point(p))
            .fold(f64::INFINITY, f64::min)
    };
    let decoded_to_truth = |p: Point| {
        truth_loops
            .iter()
            .map(|(lp, closed)| crate::path::polyline_distance(p, lp, *closed))
            .fold(f64::INFINITY, f64::min)
    };

    let mut hmax: f64 = 0.0;
    let mut sum = 0.0;
    for &p in &truth_samples {
        let d = truth_to_decoded(p);
        hmax = hmax.max(d);
        sum += d;
    }
    let mean_fwd = sum / truth_samples.len().max(1) as f64;
    let mut sum = 0.0;
    for &p in &decoded_samples {
        let d = decoded_to_truth(p);
        hmax = hmax.max(d);
        sum += d;
    }
    let mean_bwd = sum / decoded_samples.len().max(1) as f64;

    // Coverage IoU at the given resolution. Both sides render each loop
    // solid and union them, matching how decoded scenes paint.
    let scale = resolution as f64 / crate::path::NORMALIZED_SIZE;
    let mut truth_mask = crate::raster::Mask::new(resolution, resolution);
    for (lp, _) in &truth_loops {
        let pixel_loop: Vec<Point> = lp.iter().map(|p| *p * scale).collect();
        let mut m = crate::raster::Mask::new(resolution, resolution);
        crate::raster::rasterize_pixel_loops(std::slice::from_ref(&pixel_loop), &mut m);
        for (o, b) in truth_mask.bits.iter_mut().zip(&m.bits) {
            *o |= *b;
        }
    }
    let mut decoded_mask = crate::raster::Mask::new(resolution, resolution);
    for poly in decoded {
        let m = crate::raster::path_mask(poly, resolution);
        for (o, b) in decoded_mask.bits.iter_mut().zip(&m.bits) {
            *o |= *b;
        }
    }

    FidelityReport {
        hausdorff: hmax,
        chamfer: 0.5 * (mean_fwd + mean_bwd) / crate::path::NORMALIZED_SIZE,
        mask_iou: truth_mask.iou(&decoded_mask),
    }
}

/// Dense boundary samples of every polygon, for geometric comparisons.
pub fn scene_boundary_samples(polys: &[RoundedPolygon], per_prim: usize) -> Vec<Point> {
    let mut out = Vec::new();
    for poly in polys {
        let (clean, _) = sanitize_roundness(poly);
        if let Ok(chain) = crate::rounded::from_rounded(&clean) {
            out.extend(chain.resample(per_prim));
        } else {
            out.extend(poly.vertices.iter().map(|v| v.pos()));
        }
    }
    out
}
