//! The rounded-polygon path representation and its text token format.
//!
//! A path is a sequence of (x, y, d) triples: polygon vertices with a
//! roundness d that inscribes a tangent circular arc at the corner. d = -1
//! flags a structural vertex (line or arc endpoint) that stays sharp. The
//! arc radius at a rounded vertex follows from the interior angle alpha as
//! r = d * tan(alpha / 2).

use crate::geom::Point;
use crate::linearc::{ArcPrim, LineArcPath, LinePrim, Primitive};
use crate::path::SampledPath;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RoundedError {
    #[error("arc cap violated: endpoint tangents are parallel (primitive {0})")]
    ArcCapViolated(usize),
    #[error("roundness overflow at vertex {0}: d = {1} exceeds the incident edge budget")]
    RoundnessOverflow(usize, f64),
    #[error("degenerate corner at vertex {0}: interior angle is 0 or pi with d > 0")]
    DegenerateCorner(usize),
    #[error("coordinate out of range at vertex {0}: ({1}, {2}) outside [0, 128]")]
    CoordinateOutOfRange(usize, f64, f64),
    #[error("empty scene")]
    EmptyScene,
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

/// Sentinel roundness marking a sharp structural vertex.
pub const SHARP: f64 = -1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundedVertex {
    pub x: f64,
    pub y: f64,
    /// Roundness in units, or exactly -1 for a sharp vertex.
    pub d: f64,
}

impl RoundedVertex {
    pub fn new(x: f64, y: f64, d: f64) -> Self {
        Self { x, y, d }
    }

    pub fn pos(&self) -> Point {
        Point::new(self.x, self.y)
    }

    pub fn is_sharp(&self) -> bool {
        self.d < 0.0 || self.d == 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundedPolygon {
    pub vertices: Vec<RoundedVertex>,
    pub closed: bool,
}

/// Text encoding of a scene: triple components joined by ",", vertices by
/// " ", paths by "\n"; numbers quantized to two decimals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenDoc {
    pub text: String,
}

/// One recovered-parse or sanitize note.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

// ---------------------------------------------------------------------------
// LineArcPath -> RoundedPolygon

/// Convert a capped line-arc chain to its rounded polygon.
///
/// Line endpoints become sharp vertices. Each arc contributes its endpoints
/// (sharp, shared with neighbors) plus the intersection B of its endpoint
/// tangents, carrying d = |B - start|. Sharp vertices whose incident edges
/// are collinear are removed afterwards.
pub fn to_rounded(path: &LineArcPath) -> Result<RoundedPolygon, RoundedError> {
    let mut vertices: Vec<RoundedVertex> = Vec::new();
    let push_sharp = |vertices: &mut Vec<RoundedVertex>, p: Point| {
        if let Some(last) = vertices.last() {
            if last.pos().distance(p) < 1e-9 {
                return;
            }
        }
        vertices.push(RoundedVertex::new(p.x, p.y, SHARP));
    };

    for (idx, prim) in path.primitives.iter().enumerate() {
        match prim {
            Primitive::Line(l) => {
                push_sharp(&mut vertices, l.a);
                push_sharp(&mut vertices, l.b);
            }
            Primitive::Arc(arc) => {
                let b = tangent_intersection(arc).ok_or(RoundedError::ArcCapViolated(idx))?;
                push_sharp(&mut vertices, arc.a);
                vertices.push(RoundedVertex::new(b.x, b.y, b.distance(arc.a)));
                push_sharp(&mut vertices, arc.b);
            }
        }
    }
    if path.closed && vertices.len() > 1 {
        let first = vertices[0].pos();
        if vertices.last().unwrap().pos().distance(first) < 1e-9 {
            vertices.pop();
        }
    }

    remove_collinear(&mut vertices, path.closed);
    Ok(RoundedPolygon {
        vertices,
        closed: path.closed,
    })
}

/// Intersection of the endpoint tangent rays of an arc (point B in the
/// vertex construction). None when the tangents are numerically parallel,
/// which the sweep cap rules out.
fn tangent_intersection(arc: &ArcPrim) -> Option<Point> {
    let t0 = arc.tangent(0.0);
    let t1 = arc.tangent(1.0);
    let denom = t0.cross(t1);
    if denom.abs() < 1e-12 {
        return None;
    }
    let s = (arc.b - arc.a).cross(t1) / denom;
    Some(arc.a + t0 * s)
}

fn remove_collinear(vertices: &mut Vec<RoundedVertex>, closed: bool) {
    loop {
        let n = vertices.len();
        if n < 3 {
            return;
        }
        let mut removed = false;
        let mut i = 0;
        while i < vertices.len() {
            let n = vertices.len();
            if n < 3 {
                break;
            }
            let interior = closed || (i > 0 && i + 1 < n);
            if interior && vertices[i].is_sharp() && vertices[i].d < 0.0 {
                let prev = vertices[(i + n - 1) % n].pos();
                let here = vertices[i].pos();
                let next = vertices[(i + 1) % n].pos();
                let v0 = here - prev;
                let v1 = next - here;
                let cross = v0.cross(v1).abs();
                let scale = v0.norm() * v1.norm();
                if scale > 0.0 && cross <= 1e-9 * scale.max(1.0) && v0.dot(v1) > 0.0 {
                    vertices.remove(i);
                    removed = true;
                    continue;
                }
            }
            i += 1;
        }
        if !removed {
            return;
        }
    }
}

// ---------------------------------------------------------------------------
// RoundedPolygon -> LineArcPath

/// Reconstruct the line-arc chain a rounded polygon describes.
///
/// Rounded vertices become arcs of radius d * tan(alpha/2) tangent to both
/// incident edges; sharp vertices stay corners; leftover straight runs
/// become lines. An arc here may sweep up to pi: the 120-degree cap is a
/// property of encoder output, not a constraint on decodable shapes.
pub fn from_rounded(poly: &RoundedPolygon) -> Result<LineArcPath, RoundedError> {
    let n = poly.vertices.len();
    let verts = &poly.vertices;
    // Tangent consumption per edge must fit the edge length.
    let edge_count = if poly.closed { n } else { n.saturating_sub(1) };
    for e in 0..edge_count {
        let v = &verts[e];
        let w = &verts[(e + 1) % n];
        let len = v.pos().distance(w.pos());
        let used = v.d.max(0.0) + w.d.max(0.0);
        if used > len + 1e-9 {
            let offender = if v.d >= w.d { e } else { (e + 1) % n };
            return Err(RoundedError::RoundnessOverflow(offender, verts[offender].d));
        }
    }

    let mut primitives: Vec<Primitive> = Vec::new();
    let mut corners: Vec<usize> = Vec::new();
    // Pen position starts at the first emission point.
    let mut pen: Option<Point> = None;

    let rounded_at = |i: usize| -> bool {
        if verts[i].d <= 0.0 {
            return false;
        }
        if !poly.closed && (i == 0 || i == n - 1) {
            return false; // open ends have no corner to round
        }
        true
    };

    let emit_line = |primitives: &mut Vec<Primitive>, from: Point, to: Point| {
        if from.distance(to) > 1e-9 {
            primitives.push(Primitive::Line(LinePrim { a: from, b: to }));
        }
    };

    let idx_range: Vec<usize> = (0..n).collect();
    for &i in &idx_range {
        if !poly.closed && i == n - 1 {
            break;
        }
        let here = verts[i].pos();
        if rounded_at(i) {
            let prev = verts[(i + n - 1) % n].pos();
            let next = verts[(i + 1) % n].pos();
            let e_in = (here - prev).normalized();
            let e_out = (next - here).normalized();
            let turn = e_in.cross(e_out).atan2(e_in.dot(e_out));
            let alpha = std::f64::consts::PI - turn.abs();
            if alpha < 1e-9 || alpha > std::f64::consts::PI - 1e-9 {
                return Err(RoundedError::DegenerateCorner(i));
            }
            let d = verts[i].d;
            let radius = d * (alpha / 2.0).tan();
            let t_in = here - e_in * d;
            let t_out = here + e_out * d;
            let side = turn.signum();
            let center = t_in + e_in.perp() * (radius * side);
            if let Some(p) = pen {
                emit_line(&mut primitives, p, t_in);
            }
            primitives.push(Primitive::Arc(ArcPrim {
                a: t_in,
                b: t_out,
                center,
                radius,
                sweep: turn,
            }));
            pen = Some(t_out);
        } else {
            if let Some(p) = pen {
                emit_line(&mut primitives, p, here);
                if verts[i].d == 0.0 || verts[i].d < 0.0 {
                    // a sharp interior vertex is a corner junction
                }
            }
            pen = Some(here);
        }
    }
    // Close or finish the run.
    match (poly.closed, pen) {
        (true, Some(p)) => {
            let target = if rounded_at(0) {
                // first primitive starts at vertex 0's incoming tangent point
                match primitives.first() {
                    Some(first) => first.start(),
                    None => verts[0].pos(),
                }
            } else {
                verts[0].pos()
            };
            emit_line(&mut primitives, p, target);
        }
        (false, Some(p)) => {
            emit_line(&mut primitives, p, verts[n - 1].pos());
        }
        _ => {}
    }

    // Corner flags: junctions where tangents disagree (sharp polygon
    // corners); arcs join their neighbor lines tangentially by construction.
    let m = primitives.len();
    let junctions = if poly.closed { m } else { m.saturating_sub(1) };
    for k in 0..junctions {
        let t0 = primitives[k].end_tangent();
        let t1 = primitives[(k + 1) % m].start_tangent();
        if t0.cross(t1).atan2(t0.dot(t1)).abs() > 1e-3 {
            corners.push(k);
        }
    }

    Ok(LineArcPath {
        primitives,
        closed: poly.closed,
        corners,
    })
}

/// Clamp roundness values into the edge budget so that [`from_rounded`]
/// cannot fail with overflow; used by the tolerant decode path. Returns the
/// adjusted polygon and one diagnostic per clamped vertex.
pub fn sanitize_roundness(poly: &RoundedPolygon) -> (RoundedPolygon, Vec<Diagnostic>) {
    let mut out = poly.clone();
    let mut diags = Vec::new();
    let n = out.vertices.len();
    if n < 2 {
        return (out, diags);
    }
    let edge_count = if out.closed { n } else { n - 1 };
    for e in 0..edge_count {
        let (i, j) = (e, (e + 1) % n);
        let len = out.vertices[i].pos().distance(out.vertices[j].pos());
        let di = out.vertices[i].d.max(0.0);
        let dj = out.vertices[j].d.max(0.0);
        if di + dj > len {
            let scale = 0.999 * len / (di + dj);
            for &k in &[i, j] {
                if out.vertices[k].d > 0.0 {
                    let clamped = out.vertices[k].d * scale;
                    diags.push(Diagnostic {
                        line: 0,
                        column: 0,
                        message: format!(
                            "roundness at vertex {k} clamped from {} to {clamped:.4}",
                            out.vertices[k].d
                        ),
                    });
                    out.vertices[k].d = clamped;
                }
            }
        }
    }
    (out, diags)
}

// ---------------------------------------------------------------------------
// Token text format

/// Two-decimal quantization, rounding halves away from zero. The small bias
/// compensates binary representation of decimal halves (10.005 stores as
/// 10.00499..., which must still round up).
pub fn quantize2(v: f64) -> f64 {
    if v == SHARP {
        return SHARP;
    }
    let scaled = v * 100.0;
    let nudged = scaled + 1e-9 * scaled.signum();
    nudged.round() / 100.0
}

fn format_number(v: f64) -> String {
    let q = quantize2(v);
    let mut s = format!("{q:.2}");
    while s.ends_with('0') {
        s.pop();
    }
    if s.ends_with('.') {
        s.pop();
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

/// Serialize a scene to its token text. Coordinates must lie in [0, 128].
pub fn serialize(scene: &[RoundedPolygon]) -> Result<TokenDoc, RoundedError> {
    if scene.is_empty() {
        return Err(RoundedError::EmptyScene);
    }
    let mut lines = Vec::with_capacity(scene.len());
    for poly in scene {
        let mut parts = Vec::with_capacity(poly.vertices.len());
        for (i, v) in poly.vertices.iter().enumerate() {
            if !(0.0..=128.0).contains(&v.x) || !(0.0..=128.0).contains(&v.y) {
                return Err(RoundedError::CoordinateOutOfRange(i, v.x, v.y));
            }
            let d = if v.d < 0.0 {
                "-1".to_string()
            } else {
                format_number(v.d)
            };
            parts.push(format!(
                "{},{},{}",
                format_number(v.x),
                format_number(v.y),
                d
            ));
        }
        lines.push(parts.join(" "));
    }
    Ok(TokenDoc {
        text: lines.join("\n"),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseMode {
    /// First malformation is an error with line/column.
    Strict,
    /// Malformed vertices terminate their path; too-short paths are dropped;
    /// whatever remains is returned with diagnostics.
    Recovery,
}

/// Parse token text back into polygons (always closed; the format carries no
/// open/closed flag).
pub fn deserialize(
    doc: &TokenDoc,
    mode: ParseMode,
) -> Result<(Vec<RoundedPolygon>, Vec<Diagnostic>), RoundedError> {
    let mut polys = Vec::new();
    let mut diags = Vec::new();
    for (line_idx, line) in doc.text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut vertices = Vec::new();
        let mut column = 1;
        let mut bad: Option<(usize, String)> = None;
        for tok in line.split(' ') {
            if tok.is_empty() {
                column += 1;
                continue;
            }
            match parse_vertex(tok) {
                Some(v) => vertices.push(v),
                None => {
                    bad = Some((column, format!("malformed vertex {tok:?}")));
                    break;
                }
            }
            column += tok.len() + 1;
        }
        let had_bad = bad.is_some();
        if let Some((col, msg)) = bad {
            match mode {
                ParseMode::Strict => {
                    return Err(RoundedError::Parse {
                        line: line_idx + 1,
                        column: col,
                        message: msg,
                    });
                }
                ParseMode::Recovery => diags.push(Diagnostic {
                    line: line_idx + 1,
                    column: col,
                    message: msg,
                }),
            }
        }
        if vertices.len() < 3 {
            match mode {
                ParseMode::Strict => {
                    return Err(RoundedError::Parse {
                        line: line_idx + 1,
                        column: 1,
                        message: format!("path has {} valid vertices, need 3", vertices.len()),
                    });
                }
                ParseMode::Recovery => {
                    if !had_bad {
                        diags.push(Diagnostic {
                            line: line_idx + 1,
                            column: 1,
                            message: format!(
                                "dropped path with {} valid vertices",
                                vertices.len()
                            ),
                        });
                    } else if let Some(d) = diags.last_mut() {
                        d.message.push_str("; path dropped");
                    }
                    continue;
                }
            }
        }
        polys.push(RoundedPolygon {
            vertices,
            closed: true,
        });
    }
    Ok((polys, diags))
}

/// Grammar for one numeral: optional '-', digits, optional '.' plus one or
/// two digits. No exponent, no leading '+'.
fn parse_number_strict(s: &str) -> Option<f64> {
    let rest = s.strip_prefix('-').unwrap_or(s);
    if rest.is_empty() {
        return None;
    }
    let (int_part, frac_part) = match rest.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (rest, None),
    };
    if int_part.is_empty() || !int_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if let Some(f) = frac_part {
        if f.is_empty() || f.len() > 2 || !f.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
    }
    s.parse().ok()
}

fn parse_vertex(tok: &str) -> Option<RoundedVertex> {
    let mut it = tok.split(',');
    let x = parse_number_strict(it.next()?)?;
    let y = parse_number_strict(it.next()?)?;
    let d = parse_number_strict(it.next()?)?;
    if it.next().is_some() {
        return None;
    }
    if d < 0.0 && d != SHARP {
        return None;
    }
    Some(RoundedVertex::new(x, y, d))
}

// ---------------------------------------------------------------------------
// Token counting

/// Token count under the default splitter: each number, comma, space and
/// newline is one token; alphabetic runs (path commands) count one each.
pub fn default_token_count(text: &str) -> usize {
    let bytes = text.as_bytes();
    let mut count = 0;
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_digit()
            || (b == b'-' && i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit())
        {
            i += 1;
            while i < bytes.len()
                && (bytes[i].is_ascii_digit() || bytes[i] == b'.')
            {
                i += 1;
            }
            count += 1;
        } else if b.is_ascii_alphabetic() {
            while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                i += 1;
            }
            count += 1;
        } else {
            // punctuation and whitespace: one token per character
            count += 1;
            i += 1;
        }
    }
    count
}

pub fn count_tokens(doc: &TokenDoc, tokenizer: &dyn Fn(&str) -> usize) -> usize {
    tokenizer(&doc.text)
}

/// Fractional token savings of our encoding versus a raw path string.
pub fn compare_tokens(ours: &TokenDoc, raw_svg: &str) -> f64 {
    let raw = default_token_count(raw_svg);
    if raw == 0 {
        return 0.0;
    }
    1.0 - default_token_count(&ours.text) as f64 / raw as f64
}

/// The absolute-coordinate M/L/A/C/Z baseline string for a sampled-path
/// scene's source geometry, two-decimal quantized. Quadratics are promoted
/// to cubics to stay within the restricted command set.
pub fn baseline_path_string(geom: &crate::path::PathGeometry) -> String {
    use crate::path::PathCommand;
    let mut out = String::new();
    let fmt = |v: f64| format_number(v);
    for sp in &geom.subpaths {
        let mut cur = Point::default();
        for cmd in &sp.commands {
            match *cmd {
                PathCommand::MoveTo(p) => {
                    out.push_str(&format!("M {} {} ", fmt(p.x), fmt(p.y)));
                    cur = p;
                }
                PathCommand::LineTo(p) => {
                    out.push_str(&format!("L {} {} ", fmt(p.x), fmt(p.y)));
                    cur = p;
                }
                PathCommand::CubicTo(c1, c2, p) => {
                    out.push_str(&format!(
                        "C {} {} {} {} {} {} ",
                        fmt(c1.x),
                        fmt(c1.y),
                        fmt(c2.x),
                        fmt(c2.y),
                        fmt(p.x),
                        fmt(p.y)
                    ));
                    cur = p;
                }
                PathCommand::QuadTo(c, p) => {
                    let c1 = cur + (c - cur) * (2.0 / 3.0);
                    let c2 = p + (c - p) * (2.0 / 3.0);
                    out.push_str(&format!(
                        "C {} {} {} {} {} {} ",
                        fmt(c1.x),
                        fmt(c1.y),
                        fmt(c2.x),
                        fmt(c2.y),
                        fmt(p.x),
                        fmt(p.y)
                    ));
                    cur = p;
                }
                PathCommand::ArcTo {
                    rx,
                    ry,
                    rotation,
                    large_arc,
                    sweep,
                    end,
                } => {
                    out.push_str(&format!(
                        "A {} {} {} {} {} {} {} ",
                        fmt(rx),
                        fmt(ry),
                        fmt(rotation),
                        large_arc as u8,
                        sweep as u8,
                        fmt(end.x),
                        fmt(end.y)
                    ));
                    cur = end;
                }
                PathCommand::ClosePath => {
                    out.push_str("Z ");
                }
            }
        }
        let _ = cur;
        out.push('\n');
    }
    out.trim_end().to_string()
}

/// Convenience: encode one sampled subpath all the way to a rounded polygon.
pub fn encode_sampled(samples: &SampledPath, fit_tolerance: f64) -> Result<RoundedPolygon, RoundedError> {
    let chain = crate::linearc::fit_linearc(samples, fit_tolerance);
    to_rounded(&chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn square_chain(side: f64) -> LineArcPath {
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(side, 0.0),
            Point::new(side, side),
            Point::new(0.0, side),
        ];
        LineArcPath {
            primitives: (0..4)
                .map(|i| {
                    Primitive::Line(LinePrim {
                        a: pts[i],
                        b: pts[(i + 1) % 4],
                    })
                })
                .collect(),
            closed: true,
            corners: vec![0, 1, 2, 3],
        }
    }

    #[test]
    fn square_to_rounded_all_sharp() {
        let poly = to_rounded(&square_chain(10.0)).unwrap();
        assert_eq!(poly.vertices.len(), 4);
        assert!(poly.vertices.iter().all(|v| v.d == SHARP));
    }

    #[test]
    fn single_quarter_arc_example() {
        // 90-degree arc radius 10 from (10,0) to (0,10), centered at origin.
        let arc = ArcPrim {
            a: Point::new(10.0, 0.0),
            b: Point::new(0.0, 10.0),
            center: Point::new(0.0, 0.0),
            radius: 10.0,
            sweep: FRAC_PI_2,
        };
        let chain = LineArcPath {
            primitives: vec![Primitive::Arc(arc)],
            closed: false,
            corners: vec![],
        };
        let poly = to_rounded(&chain).unwrap();
        assert_eq!(poly.vertices.len(), 3);
        assert_eq!(poly.vertices[0], RoundedVertex::new(10.0, 0.0, SHARP));
        let b = poly.vertices[1];
        assert!((b.x - 10.0).abs() < 1e-9 && (b.y - 10.0).abs() < 1e-9);
        assert!((b.d - 10.0).abs() < 1e-9);
        assert_eq!(poly.vertices[2], RoundedVertex::new(0.0, 10.0, SHARP));

        // r = d * tan(alpha/2) with alpha = 90deg recovers the radius.
        let alpha = FRAC_PI_2;
        assert!((b.d * (alpha / 2.0).tan() - 10.0).abs() < 1e-9);

        // Round trip recovers the arc exactly.
        let back = from_rounded(&poly).unwrap();
        assert_eq!(back.primitives.len(), 1);
        match back.primitives[0] {
            Primitive::Arc(a2) => {
                assert!(a2.center.distance(Point::new(0.0, 0.0)) < 1e-9);
                assert!((a2.radius - 10.0).abs() < 1e-9);
            }
            ref other => panic!("expected arc, got {other:?}"),
        }
    }

    #[test]
    fn collinear_shared_endpoint_removed() {
        // Horizontal line into a quarter arc turning upward; the junction is
        // G1 so the shared endpoint must vanish.
        let line = LinePrim {
            a: Point::new(-10.0, -10.0),
            b: Point::new(0.0, -10.0),
        };
        let arc = ArcPrim {
            a: Point::new(0.0, -10.0),
            b: Point::new(10.0, 0.0),
            center: Point::new(0.0, 0.0),
            radius: 10.0,
            sweep: FRAC_PI_2,
        };
        let chain = LineArcPath {
            primitives: vec![Primitive::Line(line), Primitive::Arc(arc)],
            closed: false,
            corners: vec![],
        };
        let poly = to_rounded(&chain).unwrap();
        // (-10,-10,-1), B=(10,-10, d=10), (10,0,-1): junction (0,-10) removed
        assert_eq!(poly.vertices.len(), 3);
        assert!((poly.vertices[1].x - 10.0).abs() < 1e-9);
        assert!((poly.vertices[1].y + 10.0).abs() < 1e-9);
        assert!((poly.vertices[1].d - 10.0).abs() < 1e-9);
    }

    #[test]
    fn rounded_square_reconstruction() {
        // Square side 20, every corner d = 5 -> lines of length 10 and arcs
        // of radius 5.
        let poly = RoundedPolygon {
            vertices: vec![
                RoundedVertex::new(0.0, 0.0, 5.0),
                RoundedVertex::new(20.0, 0.0, 5.0),
                RoundedVertex::new(20.0, 20.0, 5.0),
                RoundedVertex::new(0.0, 20.0, 5.0),
            ],
            closed: true,
        };
        let chain = from_rounded(&poly).unwrap();
        let lines: Vec<_> = chain
            .primitives
            .iter()
            .filter_map(|p| match p {
                Primitive::Line(l) => Some(l),
                _ => None,
            })
            .collect();
        let arcs: Vec<_> = chain
            .primitives
            .iter()
            .filter_map(|p| match p {
                Primitive::Arc(a) => Some(a),
                _ => None,
            })
            .collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(arcs.len(), 4);
        for l in lines {
            assert!((l.a.distance(l.b) - 10.0).abs() < 1e-9);
        }
        for a in arcs {
            assert!((a.radius - 5.0).abs() < 1e-9);
            assert!((a.sweep.abs() - FRAC_PI_2).abs() < 1e-9);
        }
    }

    #[test]
    fn all_sharp_is_identity_polyline() {
        let poly = RoundedPolygon {
            vertices: vec![
                RoundedVertex::new(1.0, 1.0, SHARP),
                RoundedVertex::new(9.0, 2.0, SHARP),
                RoundedVertex::new(5.0, 8.0, SHARP),
            ],
            closed: true,
        };
        let chain = from_rounded(&poly).unwrap();
        assert_eq!(chain.primitives.len(), 3);
        assert!(chain
            .primitives
            .iter()
            .all(|p| matches!(p, Primitive::Line(_))));
        assert_eq!(chain.corners.len(), 3);
    }

    #[test]
    fn roundness_overflow_detected() {
        let poly = RoundedPolygon {
            vertices: vec![
                RoundedVertex::new(0.0, 0.0, 8.0),
                RoundedVertex::new(10.0, 0.0, 8.0),
                RoundedVertex::new(5.0, 9.0, SHARP),
            ],
            closed: true,
        };
        match from_rounded(&poly) {
            Err(RoundedError::RoundnessOverflow(i, _)) => assert!(i < 2),
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn sanitize_clamps_overflow() {
        let poly = RoundedPolygon {
            vertices: vec![
                RoundedVertex::new(0.0, 0.0, 8.0),
                RoundedVertex::new(10.0, 0.0, 8.0),
                RoundedVertex::new(5.0, 9.0, SHARP),
            ],
            closed: true,
        };
        let (fixed, diags) = sanitize_roundness(&poly);
        assert!(!diags.is_empty());
        assert!(from_rounded(&fixed).is_ok());
    }

    #[test]
    fn serialize_triangle() {
        let poly = RoundedPolygon {
            vertices: vec![
                RoundedVertex::new(4.0, 4.0, SHARP),
                RoundedVertex::new(124.0, 4.0, SHARP),
                RoundedVertex::new(64.0, 107.92, SHARP),
            ],
            closed: true,
        };
        let doc = serialize(&[poly]).unwrap();
        assert_eq!(doc.text, "4,4,-1 124,4,-1 64,107.92,-1");
    }

    #[test]
    fn serialize_two_paths_newline() {
        let p = RoundedPolygon {
            vertices: vec![
                RoundedVertex::new(4.0, 4.0, SHARP),
                RoundedVertex::new(10.0, 4.0, SHARP),
                RoundedVertex::new(4.0, 10.0, SHARP),
            ],
            closed: true,
        };
        let doc = serialize(&[p.clone(), p]).unwrap();
        let lines: Vec<&str> = doc.text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], lines[1]);
    }

    #[test]
    fn quantization_half_away_from_zero() {
        let poly = RoundedPolygon {
            vertices: vec![
                RoundedVertex::new(10.005, 4.0, 2.5),
                RoundedVertex::new(20.0, 4.0, SHARP),
                RoundedVertex::new(10.0, 20.0, SHARP),
            ],
            closed: true,
        };
        let doc = serialize(&[poly]).unwrap();
        assert!(doc.text.starts_with("10.01,4,2.5 "), "got {}", doc.text);
    }

    #[test]
    fn format_strips_trailing_zeros() {
        assert_eq!(format_number(4.0), "4");
        assert_eq!(format_number(10.50), "10.5");
        assert_eq!(format_number(0.004), "0");
        assert_eq!(format_number(-0.004), "0");
    }

    #[test]
    fn deserialize_roundtrips_serialize() {
        let poly = RoundedPolygon {
            vertices: vec![
                RoundedVertex::new(4.0, 4.0, SHARP),
                RoundedVertex::new(124.0, 4.37, 3.125),
                RoundedVertex::new(64.0, 107.92, SHARP),
            ],
            closed: true,
        };
        let doc = serialize(std::slice::from_ref(&poly)).unwrap();
        let (back, diags) = deserialize(&doc, ParseMode::Recovery).unwrap();
        assert!(diags.is_empty());
        assert_eq!(back.len(), 1);
        for (a, b) in back[0].vertices.iter().zip(&poly.vertices) {
            assert_eq!(a.x, quantize2(b.x));
            assert_eq!(a.y, quantize2(b.y));
            assert_eq!(a.d, quantize2(b.d));
        }
    }

    #[test]
    fn recovery_drops_short_path() {
        let doc = TokenDoc {
            text: "4,4,-1 124,4".into(),
        };
        let (polys, diags) = deserialize(&doc, ParseMode::Recovery).unwrap();
        assert!(polys.is_empty());
        assert_eq!(diags.len(), 1);
    }

    #[test]
    fn recovery_keeps_valid_prefix() {
        let doc = TokenDoc {
            text: "4,4,-1 124,4,-1 64,108,-1 garbage".into(),
        };
        let (polys, diags) = deserialize(&doc, ParseMode::Recovery).unwrap();
        assert_eq!(polys.len(), 1);
        assert_eq!(polys[0].vertices.len(), 3);
        assert_eq!(diags.len(), 1);
    }

    #[test]
    fn strict_reports_line_and_column() {
        let doc = TokenDoc {
            text: "4,4,-1 124,4,-1 64,108,-1\n4,4,-1 bogus 1,1,-1".into(),
        };
        match deserialize(&doc, ParseMode::Strict) {
            Err(RoundedError::Parse { line, column, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(column, 8);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn strict_rejects_exponent_and_plus() {
        for text in ["1e2,4,-1 5,5,-1 6,6,-1", "+4,4,-1 5,5,-1 6,6,-1"] {
            let doc = TokenDoc { text: text.into() };
            assert!(deserialize(&doc, ParseMode::Strict).is_err(), "{text}");
        }
    }

    #[test]
    fn token_count_rules() {
        assert_eq!(default_token_count("4,4,-1 124,4,-1"), 11);
        assert_eq!(default_token_count("M 1 2 L 3 4 Z"), 13);
        assert_eq!(default_token_count(""), 0);
    }

    #[test]
    fn identical_inputs_zero_savings() {
        let doc = TokenDoc {
            text: "4,4,-1 5,5,-1 6,6,-1".into(),
        };
        assert_eq!(compare_tokens(&doc, &doc.text), 0.0);
    }
}
