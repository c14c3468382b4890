//! Post-hoc stylization against the source raster: exclusive-mask color
//! voting, z-order optimization over the overlap graph, and stroke
//! detection gated on MSE improvement. Colors first, then z-order, then
//! strokes; fills account for most of the error, strokes are a final
//! refinement.

use std::collections::{HashMap, HashSet};

use crate::color::Rgb;
use crate::geom::Point;
use crate::linearc::Primitive;
use crate::raster::{flatten_to_pixel_loops, mse, Mask, Raster, RasterError};
use crate::rounded::{from_rounded, sanitize_roundness, RoundedPolygon};

/// MSE must improve by at least this much for a stroke to be accepted.
pub const STROKE_EPSILON: f64 = 0.0002;
/// Candidate renders allowed per component before the area fallback.
pub const DEFAULT_EVAL_CAP: usize = 120;

/// Per-channel delta treated as "color changed" during normal traversal.
const COLOR_STEP_THRESHOLD: f64 = 0.1;
/// Longest normal walk in pixels before giving up on a transition.
const MAX_NORMAL_WALK: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorProvenance {
    /// Assigned from a nonempty exclusive mask in this voting pass (1-based).
    ExclusivePass(usize),
    /// Fallback: median over the full (non-exclusive) mask.
    Unresolved,
}

#[derive(Debug, Clone)]
pub struct ColorAssignment {
    pub colors: Vec<Rgb>,
    pub provenance: Vec<ColorProvenance>,
}

/// Paths connected when their masks intersect; subset edges (j, i) mean
/// path i's mask is contained in path j's, so j must render before i.
#[derive(Debug, Clone)]
pub struct OverlapGraph {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
    pub subset_edges: Vec<(usize, usize)>,
    /// Connected components, ordered by their smallest member.
    pub components: Vec<Vec<usize>>,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrokeSpec {
    /// Width in source-image pixels.
    pub width: f64,
    pub color: Rgb,
    pub accepted: bool,
    /// MSE improvement that justified acceptance.
    pub mse_delta: f64,
}

#[derive(Debug, Clone)]
pub struct StyledScene {
    pub polygons: Vec<RoundedPolygon>,
    pub colors: ColorAssignment,
    /// Back-to-front render order (order[0] paints first).
    pub order: Vec<usize>,
    pub strokes: Vec<Option<StrokeSpec>>,
    /// Resolution of the source the scene was styled against; stroke widths
    /// are in these pixels.
    pub source_resolution: usize,
}

#[derive(Debug, Clone)]
pub struct StylizeReport {
    pub scene: StyledScene,
    pub diagnostics: Vec<String>,
}

// ---------------------------------------------------------------------------
// Exclusive masks and color voting

/// `excl_i = M_i \ union(M_j, j != i)`, bit-exact.
pub fn exclusive_masks(masks: &[Mask]) -> Result<Vec<Mask>, RasterError> {
    if masks.is_empty() {
        return Ok(Vec::new());
    }
    let (w, h) = (masks[0].width, masks[0].height);
    for m in masks {
        if m.width != w || m.height != h {
            return Err(RasterError::DimensionMismatch(w, h, m.width, m.height));
        }
    }
    // union[i] counts how many masks cover each pixel.
    let mut cover = vec![0u16; w * h];
    for m in masks {
        for (c, b) in cover.iter_mut().zip(&m.bits) {
            *c += *b as u16;
        }
    }
    Ok(masks
        .iter()
        .map(|m| {
            let mut e = Mask::new(w, h);
            for i in 0..w * h {
                e.bits[i] = m.bits[i] && cover[i] == 1;
            }
            e
        })
        .collect())
}

fn exclusive_among(masks: &[Mask], active: &[usize]) -> Vec<Mask> {
    let (w, h) = (masks[0].width, masks[0].height);
    let mut cover = vec![0u16; w * h];
    for &i in active {
        for (c, b) in cover.iter_mut().zip(&masks[i].bits) {
            *c += *b as u16;
        }
    }
    active
        .iter()
        .map(|&i| {
            let mut e = Mask::new(w, h);
            for k in 0..w * h {
                e.bits[k] = masks[i].bits[k] && cover[k] == 1;
            }
            e
        })
        .collect()
}

/// Per-channel lower median of the source pixels under a mask.
fn masked_median(source: &Raster, mask: &Mask) -> Option<Rgb> {
    let mut ch: [Vec<f64>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for y in 0..mask.height {
        for x in 0..mask.width {
            if mask.get(x, y) {
                let px = source.rgb_at(x, y);
                for c in 0..3 {
                    ch[c].push(px[c]);
                }
            }
        }
    }
    if ch[0].is_empty() {
        return None;
    }
    let mut out = [0.0; 3];
    for c in 0..3 {
        ch[c].sort_by(|a, b| a.partial_cmp(b).unwrap());
        out[c] = ch[c][(ch[c].len() - 1) / 2];
    }
    Some(Rgb::from_unit(out))
}

/// Iterative exclusive-mask voting; paths resolved in one pass are removed
/// so later passes can see previously occluded paths.
pub fn recover_colors(polys: &[RoundedPolygon], source: &Raster) -> ColorAssignment {
    let masks = masks_for(polys, source_resolution(source));
    recover_colors_with_masks(&masks, source).0
}

pub(crate) fn recover_colors_with_masks(
    masks: &[Mask],
    source: &Raster,
) -> (ColorAssignment, Vec<String>) {
    let k = masks.len();
    let mut colors = vec![Rgb::BLACK; k];
    let mut provenance = vec![ColorProvenance::Unresolved; k];
    let mut diagnostics = Vec::new();
    let mut remaining: Vec<usize> = (0..k).collect();
    let mut pass = 0usize;
    while !remaining.is_empty() {
        pass += 1;
        let exclusives = exclusive_among(masks, &remaining);
        let mut resolved = Vec::new();
        for (slot, &i) in remaining.iter().enumerate() {
            if let Some(color) = masked_median(source, &exclusives[slot]) {
                colors[i] = color;
                provenance[i] = ColorProvenance::ExclusivePass(pass);
                resolved.push(i);
            }
        }
        if resolved.is_empty() {
            break;
        }
        remaining.retain(|i| !resolved.contains(i));
    }
    for &i in &remaining {
        match masked_median(source, &masks[i]) {
            Some(color) => {
                colors[i] = color;
                diagnostics.push(format!(
                    "path {i}: empty exclusive mask in every pass; full-mask median fallback"
                ));
            }
            None => {
                diagnostics.push(format!("path {i}: empty mask; defaulted to black"));
            }
        }
    }
    (
        ColorAssignment { colors, provenance },
        diagnostics,
    )
}

// ---------------------------------------------------------------------------
// Overlap graph

pub fn build_overlap_graph(masks: &[Mask]) -> OverlapGraph {
    let k = masks.len();
    let mut edges = Vec::new();
    let mut subset_edges = Vec::new();
    let mut diagnostics = Vec::new();
    let mut adj = vec![Vec::new(); k];
    for i in 0..k {
        for j in i + 1..k {
            if !masks[i].intersects(&masks[j]) {
                continue;
            }
            edges.push((i, j));
            adj[i].push(j);
            adj[j].push(i);
            let i_in_j = masks[i].subset_of(&masks[j]);
            let j_in_i = masks[j].subset_of(&masks[i]);
            match (i_in_j, j_in_i) {
                (true, true) => {
                    diagnostics.push(format!(
                        "paths {i} and {j} have identical masks; order left to MSE"
                    ));
                }
                // i inside j: j must render before i
                (true, false) => subset_edges.push((j, i)),
                (false, true) => subset_edges.push((i, j)),
                (false, false) => {}
            }
        }
    }
    // Components by DFS, discovered in ascending node order.
    let mut components = Vec::new();
    let mut seen = vec![false; k];
    for start in 0..k {
        if seen[start] {
            continue;
        }
        let mut comp = Vec::new();
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(n) = stack.pop() {
            comp.push(n);
            for &m in &adj[n] {
                if !seen[m] {
                    seen[m] = true;
                    stack.push(m);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    OverlapGraph {
        nodes: k,
        edges,
        subset_edges,
        components,
        diagnostics,
    }
}

// ---------------------------------------------------------------------------
// Z-order optimization

/// Search the subset-valid orderings of each overlap component for the one
/// whose render best matches the source. Orderings that only permute
/// non-overlapping pairs render identically and are evaluated once. A
/// component whose candidate count exceeds `eval_cap` falls back to
/// area-descending order.
pub fn optimize_zorder(
    polys: &[RoundedPolygon],
    colors: &ColorAssignment,
    source: &Raster,
    eval_cap: usize,
) -> Vec<usize> {
    let masks = masks_for(polys, source_resolution(source));
    optimize_zorder_with_masks(polys, colors, source, eval_cap, &masks).0
}

pub(crate) fn optimize_zorder_with_masks(
    polys: &[RoundedPolygon],
    colors: &ColorAssignment,
    source: &Raster,
    eval_cap: usize,
    masks: &[Mask],
) -> (Vec<usize>, Vec<String>) {
    let graph = build_overlap_graph(masks);
    let mut diagnostics = graph.diagnostics.clone();
    let mut order = Vec::with_capacity(polys.len());
    for comp in &graph.components {
        let comp_order =
            optimize_component(comp, &graph.subset_edges, polys, colors, source, eval_cap, masks)
                .unwrap_or_else(|| {
                    diagnostics
                        .push(format!("component {comp:?}: eval cap hit; area fallback"));
                    area_descending(comp, masks)
                });
        order.extend(comp_order);
    }
    (order, diagnostics)
}

fn area_descending(comp: &[usize], masks: &[Mask]) -> Vec<usize> {
    let mut nodes = comp.to_vec();
    nodes.sort_by(|&a, &b| masks[b].count().cmp(&masks[a].count()).then(a.cmp(&b)));
    nodes
}

/// None when enumeration exceeded the cap.
fn optimize_component(
    comp: &[usize],
    subset_edges: &[(usize, usize)],
    polys: &[RoundedPolygon],
    colors: &ColorAssignment,
    source: &Raster,
    eval_cap: usize,
    masks: &[Mask],
) -> Option<Vec<usize>> {
    if comp.len() == 1 {
        return Some(comp.to_vec());
    }
    // Region of this component: union of member masks.
    let (w, h) = (masks[comp[0]].width, masks[comp[0]].height);
    let mut region = vec![false; w * h];
    for &i in comp {
        for (r, b) in region.iter_mut().zip(&masks[i].bits) {
            *r |= *b;
        }
    }

    // Local DAG: succ[u] lists nodes that must come after u.
    let local: HashMap<usize, usize> = comp.iter().enumerate().map(|(k, &n)| (n, k)).collect();
    let n = comp.len();
    let mut succ = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for &(before, after) in subset_edges {
        if let (Some(&u), Some(&v)) = (local.get(&before), local.get(&after)) {
            succ[u].push(v);
            indeg[v] += 1;
        }
    }
    // Overlap edges within the component, for render signatures.
    let mut overlap_pairs = Vec::new();
    for (k1, &a) in comp.iter().enumerate() {
        for (k2, &b) in comp.iter().enumerate().skip(k1 + 1) {
            if masks[a].intersects(&masks[b]) {
                overlap_pairs.push((k1, k2));
            }
        }
    }

    struct Search<'a> {
        comp: &'a [usize],
        succ: &'a [Vec<usize>],
        overlap_pairs: &'a [(usize, usize)],
        polys: &'a [RoundedPolygon],
        colors: &'a [Rgb],
        source: &'a Raster,
        region: &'a [bool],
        eval_cap: usize,
        evals: usize,
        seen: HashSet<u64>,
        best: (f64, Vec<usize>),
        exceeded: bool,
        generated: usize,
    }

    impl Search<'_> {
        fn run(&mut self, indeg: &mut [usize], current: &mut Vec<usize>) {
            if self.exceeded {
                return;
            }
            let n = self.comp.len();
            if current.len() == n {
                self.evaluate(current);
                return;
            }
            self.generated += 1;
            if self.generated > 200_000 {
                self.exceeded = true;
                return;
            }
            for v in 0..n {
                if indeg[v] != 0 || current.contains(&v) {
                    continue;
                }
                current.push(v);
                for &s in &self.succ[v] {
                    indeg[s] -= 1;
                }
                self.run(indeg, current);
                for &s in &self.succ[v] {
                    indeg[s] += 1;
                }
                current.pop();
                if self.exceeded {
                    return;
                }
            }
        }

        fn evaluate(&mut self, current: &[usize]) {
            // Signature: orientation of every overlapping pair. Orders that
            // agree on all of them render identically.
            let mut pos = vec![0usize; current.len()];
            for (depth, &v) in current.iter().enumerate() {
                pos[v] = depth;
            }
            let mut sig: u64 = 0;
            for (bit, &(a, b)) in self.overlap_pairs.iter().enumerate() {
                if pos[a] < pos[b] {
                    sig |= 1 << (bit % 64);
                }
                sig = sig.rotate_left(1) ^ (bit as u64).wrapping_mul(0x9e3779b97f4a7c15);
            }
            if !self.seen.insert(sig) {
                return;
            }
            if self.evals >= self.eval_cap {
                self.exceeded = true;
                return;
            }
            self.evals += 1;
            let order: Vec<usize> = current.iter().map(|&v| self.comp[v]).collect();
            let err = component_mse(
                self.polys,
                self.colors,
                &order,
                self.source,
                self.region,
            );
            if err < self.best.0 {
                self.best = (err, order);
            }
        }
    }

    let mut search = Search {
        comp,
        succ: &succ,
        overlap_pairs: &overlap_pairs,
        polys,
        colors: &colors.colors,
        source,
        region: &region,
        eval_cap,
        evals: 0,
        seen: HashSet::new(),
        best: (f64::INFINITY, comp.to_vec()),
        exceeded: false,
        generated: 0,
    };
    let mut indeg = indeg;
    search.run(&mut indeg, &mut Vec::new());
    if search.exceeded {
        None
    } else {
        Some(search.best.1)
    }
}

/// MSE restricted to a pixel region, comparing a component-only render
/// against the source. Region pixels are always covered by some member, so
/// missing paths never bleed background into the comparison.
fn component_mse(
    polys: &[RoundedPolygon],
    colors: &[Rgb],
    order: &[usize],
    source: &Raster,
    region: &[bool],
) -> f64 {
    let size = source_resolution(source);
    let mut top = vec![usize::MAX; size * size];
    let mut coverage = vec![false; size * size];
    let scale = size as f64 / crate::path::NORMALIZED_SIZE;
    for &idx in order {
        let loops = flatten_to_pixel_loops(&polys[idx], scale);
        coverage.iter_mut().for_each(|b| *b = false);
        raster_cover(&loops, size, size, &mut coverage);
        for (t, c) in top.iter_mut().zip(&coverage) {
            if *c {
                *t = idx;
            }
        }
    }
    let mut acc = 0.0;
    let mut count = 0usize;
    for y in 0..size.min(source.height) {
        for x in 0..size.min(source.width) {
            let i = y * size + x;
            if !region[i] {
                continue;
            }
            let rendered = if top[i] == usize::MAX {
                [1.0, 1.0, 1.0]
            } else {
                colors[top[i]].to_unit()
            };
            let actual = source.rgb_at(x, y);
            for c in 0..3 {
                let d = rendered[c] - actual[c];
                acc += d * d;
            }
            count += 1;
        }
    }
    if count == 0 {
        0.0
    } else {
        acc / (count * 3) as f64
    }
}

// Coverage identical to the renderer's: delegate through a 1x supersample
// mask so the bits match path_mask exactly.
fn raster_cover(loops: &[Vec<Point>], w: usize, h: usize, out: &mut [bool]) {
    let mut mask = Mask::new(w, h);
    // path_mask flattens internally; here we already have loops, so inline
    // the scanline via a tiny polygon shim.
    crate::raster::rasterize_pixel_loops(loops, &mut mask);
    out.copy_from_slice(&mask.bits);
}

// ---------------------------------------------------------------------------
// Stroke detection

/// Walk the boundary normals of every path, cluster the measured widths and
/// colors, and accept a stroke only when re-rendering with it improves MSE
/// by at least [`STROKE_EPSILON`].
pub fn detect_strokes(styled: &StyledScene, source: &Raster) -> Vec<Option<StrokeSpec>> {
    let mut working = styled.clone();
    working.strokes = vec![None; styled.polygons.len()];
    let size = styled.source_resolution;
    let mut current = render_styled(&working, size, 1);
    let mut current_mse = mse(&current, source).unwrap_or(f64::INFINITY);
    let mut out = vec![None; styled.polygons.len()];

    for i in 0..styled.polygons.len() {
        let Some((width, color)) = propose_stroke(&styled.polygons[i], source, size) else {
            continue;
        };
        let mut candidate = working.clone();
        candidate.strokes[i] = Some(StrokeSpec {
            width,
            color,
            accepted: true,
            mse_delta: 0.0,
        });
        let rendered = render_styled(&candidate, size, 1);
        let candidate_mse = mse(&rendered, source).unwrap_or(f64::INFINITY);
        let delta = current_mse - candidate_mse;
        if delta >= STROKE_EPSILON {
            candidate.strokes[i].as_mut().unwrap().mse_delta = delta;
            out[i] = candidate.strokes[i].clone();
            working = candidate;
            current = rendered;
            current_mse = candidate_mse;
        }
    }
    let _ = current;
    out
}

/// Boundary sampling and clustering; None when no consistent transition
/// pattern exists (e.g. flat fills over uniform background).
fn propose_stroke(poly: &RoundedPolygon, source: &Raster, size: usize) -> Option<(f64, Rgb)> {
    let scale = size as f64 / crate::path::NORMALIZED_SIZE;
    let loops = flatten_to_pixel_loops(poly, scale);
    let lp = loops.first()?;
    if lp.len() < 2 {
        return None;
    }
    // Uniform arc-length boundary samples with normals.
    let mut cum = vec![0.0];
    let n = lp.len();
    for i in 0..n {
        let d = lp[i].distance(lp[(i + 1) % n]);
        cum.push(cum[i] + d);
    }
    let total = *cum.last().unwrap();
    if total < 1e-6 {
        return None;
    }
    let samples = 32.max((total / 8.0) as usize).min(128);

    let sample_at = |s: f64| -> (Point, Point) {
        let idx = match cum.binary_search_by(|c| c.partial_cmp(&s).unwrap()) {
            Ok(i) => i.min(n - 1),
            Err(i) => i - 1,
        };
        let seg_len = (cum[idx + 1] - cum[idx]).max(1e-12);
        let t = (s - cum[idx]) / seg_len;
        let a = lp[idx];
        let b = lp[(idx + 1) % n];
        (a.lerp(b, t), (b - a).normalized().perp())
    };

    let pixel = |p: Point| -> Option<[f64; 3]> {
        let x = p.x.floor();
        let y = p.y.floor();
        if x < 0.0 || y < 0.0 || x >= source.width as f64 || y >= source.height as f64 {
            return None;
        }
        Some(source.rgb_at(x as usize, y as usize))
    };

    let mut widths: Vec<usize> = Vec::new();
    let mut stroke_colors: Vec<Rgb> = Vec::new();
    for k in 0..samples {
        let (p, normal) = sample_at(total * k as f64 / samples as f64);
        let Some(c0) = pixel(p) else { continue };
        let walk = |dir: f64| -> Option<usize> {
            for step in 1..=MAX_NORMAL_WALK {
                let q = p + normal * (dir * step as f64);
                let c = pixel(q)?;
                let delta = (0..3).map(|i| (c[i] - c0[i]).abs()).fold(0.0, f64::max);
                if delta > COLOR_STEP_THRESHOLD {
                    return Some(step - 1);
                }
            }
            None
        };
        let (Some(outward), Some(inward)) = (walk(1.0), walk(-1.0)) else {
            continue;
        };
        widths.push(outward + inward + 1);
        stroke_colors.push(Rgb::from_unit(c0));
    }
    if widths.len() < 8 {
        return None;
    }

    // Largest 1-px width cluster, then its median.
    let mut bins: HashMap<usize, Vec<usize>> = HashMap::new();
    for w in &widths {
        bins.entry(*w).or_default().push(*w);
    }
    let cluster = bins
        .into_iter()
        .max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.0.cmp(&a.0)))?
        .1;
    let mut sorted = cluster;
    sorted.sort_unstable();
    let width = sorted[(sorted.len() - 1) / 2] as f64;

    // Mode of the largest color cluster (exact 8-bit bins).
    let mut color_bins: HashMap<Rgb, usize> = HashMap::new();
    for c in &stroke_colors {
        *color_bins.entry(*c).or_default() += 1;
    }
    let color = color_bins
        .into_iter()
        .max_by(|a, b| {
            a.1.cmp(&b.1)
                .then_with(|| (b.0.r, b.0.g, b.0.b).cmp(&(a.0.r, a.0.g, a.0.b)))
        })?
        .0;
    Some((width, color))
}

// ---------------------------------------------------------------------------
// Full pipeline and styled rendering

/// Colors, then z-order, then strokes, sharing one set of masks.
pub fn stylize_scene(polys: &[RoundedPolygon], source: &Raster) -> StylizeReport {
    let size = source_resolution(source);
    let masks = masks_for(polys, size);
    let (colors, mut diagnostics) = recover_colors_with_masks(&masks, source);
    let (order, zdiags) =
        optimize_zorder_with_masks(polys, &colors, source, DEFAULT_EVAL_CAP, &masks);
    diagnostics.extend(zdiags);
    let mut scene = StyledScene {
        polygons: polys.to_vec(),
        colors,
        order,
        strokes: vec![None; polys.len()],
        source_resolution: size,
    };
    scene.strokes = detect_strokes(&scene, source);
    StylizeReport {
        scene,
        diagnostics,
    }
}

pub(crate) fn source_resolution(source: &Raster) -> usize {
    source.width.max(source.height)
}

pub(crate) fn masks_for(polys: &[RoundedPolygon], resolution: usize) -> Vec<Mask> {
    polys
        .iter()
        .map(|p| crate::raster::path_mask(p, resolution))
        .collect()
}

/// Render a styled scene: fills back-to-front, each path's stroke painted
/// right after its fill.
pub fn render_styled(scene: &StyledScene, size: usize, supersample: usize) -> Raster {
    let ss = supersample.max(1);
    let big = size * ss;
    let scale = big as f64 / crate::path::NORMALIZED_SIZE;
    let stroke_scale = big as f64 / scene.source_resolution as f64;

    let mut color_buf: Vec<[u8; 3]> = vec![[255, 255, 255]; big * big];
    let mut coverage = vec![false; big * big];
    for &idx in &scene.order {
        let loops = flatten_to_pixel_loops(&scene.polygons[idx], scale);
        coverage.iter_mut().for_each(|b| *b = false);
        {
            let mut m = Mask::new(big, big);
            crate::raster::rasterize_pixel_loops(&loops, &mut m);
            coverage.copy_from_slice(&m.bits);
        }
        let fill = scene.colors.colors[idx];
        for (px, c) in color_buf.iter_mut().zip(&coverage) {
            if *c {
                *px = [fill.r, fill.g, fill.b];
            }
        }
        if let Some(stroke) = scene.strokes[idx].as_ref().filter(|s| s.accepted) {
            let half = stroke.width * stroke_scale / 2.0;
            let rgb = [stroke.color.r, stroke.color.g, stroke.color.b];
            for lp in &loops {
                let n = lp.len();
                for i in 0..n {
                    stamp_capsule(&mut color_buf, big, lp[i], lp[(i + 1) % n], half, rgb);
                }
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
                    let px = color_buf[(y * ss + sy) * big + (x * ss + sx)];
                    for c in 0..3 {
                        // divide first so ss = 1 reproduces render_fill bit
                        // for bit
                        acc[c] += px[c] as f64 / 255.0;
                    }
                }
            }
            for c in 0..3 {
                out.set(x, y, c, acc[c] * norm);
            }
        }
    }
    out
}

fn stamp_capsule(
    buf: &mut [[u8; 3]],
    size: usize,
    a: Point,
    b: Point,
    half: f64,
    rgb: [u8; 3],
) {
    let pad = half + 1.0;
    let x0 = ((a.x.min(b.x) - pad).floor().max(0.0)) as usize;
    let x1 = ((a.x.max(b.x) + pad).ceil().min(size as f64)) as usize;
    let y0 = ((a.y.min(b.y) - pad).floor().max(0.0)) as usize;
    let y1 = ((a.y.max(b.y) + pad).ceil().min(size as f64)) as usize;
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
                buf[y * size + x] = rgb;
            }
        }
    }
}

/// SVG 1.1 export: one path element per polygon, document order = render
/// order, fills as hex colors, strokes where accepted.
pub fn styled_to_svg(scene: &StyledScene) -> String {
    let mut body = String::new();
    let px_to_unit = crate::path::NORMALIZED_SIZE / scene.source_resolution as f64;
    for &idx in &scene.order {
        let d = polygon_to_path_data(&scene.polygons[idx]);
        let fill = scene.colors.colors[idx].hex();
        let stroke_attr = match scene.strokes[idx].as_ref().filter(|s| s.accepted) {
            Some(s) => format!(
                " stroke=\"{}\" stroke-width=\"{:.2}\"",
                s.color.hex(),
                s.width * px_to_unit
            ),
            None => String::new(),
        };
        body.push_str(&format!(
            "  <path d=\"{d}\" fill=\"{fill}\"{stroke_attr}/>\n"
        ));
    }
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 128 128\">\n{body}</svg>\n"
    )
}

/// M/L/A path data for one rounded polygon.
pub fn polygon_to_path_data(poly: &RoundedPolygon) -> String {
    let (clean, _) = sanitize_roundness(poly);
    let chain = match from_rounded(&clean) {
        Ok(c) => c,
        Err(_) => {
            let mut d = String::new();
            for (i, v) in poly.vertices.iter().enumerate() {
                let cmd = if i == 0 { 'M' } else { 'L' };
                d.push_str(&format!("{cmd} {:.2} {:.2} ", v.x, v.y));
            }
            d.push('Z');
            return d;
        }
    };
    let mut d = String::new();
    for (i, prim) in chain.primitives.iter().enumerate() {
        if i == 0 {
            let s = prim.start();
            d.push_str(&format!("M {:.2} {:.2} ", s.x, s.y));
        }
        match prim {
            Primitive::Line(l) => {
                d.push_str(&format!("L {:.2} {:.2} ", l.b.x, l.b.y));
            }
            Primitive::Arc(a) => {
                let large = (a.sweep.abs() > std::f64::consts::PI) as u8;
                let sweep_flag = (a.sweep > 0.0) as u8;
                d.push_str(&format!(
                    "A {:.4} {:.4} 0 {} {} {:.2} {:.2} ",
                    a.radius, a.radius, large, sweep_flag, a.b.x, a.b.y
                ));
            }
        }
    }
    if poly.closed {
        d.push('Z');
    } else {
        d.pop();
    }
    d
}
