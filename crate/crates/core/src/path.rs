//! Path geometry: absolute drawing commands, viewBox normalization, and
//! equidistant arc-length sampling.
//!
//! Everything downstream (fitting, encoding, rasterization) consumes the
//! types in this module. Commands are always absolute; the SVG front end is
//! responsible for resolving relative forms and shorthands.

use crate::geom::{wrap_angle, Affine, Point};
use thiserror::Error;

/// Frame every scene is normalized into: 128x128 with 4 units of padding.
pub const NORMALIZED_SIZE: f64 = 128.0;
pub const NORMALIZED_PADDING: f64 = 4.0;

#[derive(Debug, Error)]
pub enum PathError {
    #[error("degenerate viewbox: width and height must be positive, got {0}x{1}")]
    DegenerateViewBox(f64, f64),
    #[error("degenerate path: zero total length")]
    DegeneratePath,
    #[error("sampling spacing must be positive, got {0}")]
    BadSpacing(f64),
    #[error("non-finite coordinate in path")]
    NonFinite,
}

/// One absolute drawing command.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathCommand {
    MoveTo(Point),
    LineTo(Point),
    /// Control 1, control 2, endpoint.
    CubicTo(Point, Point, Point),
    /// Control, endpoint.
    QuadTo(Point, Point),
    ArcTo {
        rx: f64,
        ry: f64,
        /// x-axis rotation in degrees.
        rotation: f64,
        large_arc: bool,
        sweep: bool,
        end: Point,
    },
    ClosePath,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FillRule {
    #[default]
    NonZero,
    EvenOdd,
}

/// Source viewbox in user units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViewBox {
    pub min_x: f64,
    pub min_y: f64,
    pub width: f64,
    pub height: f64,
}

impl ViewBox {
    pub fn new(min_x: f64, min_y: f64, width: f64, height: f64) -> Self {
        Self {
            min_x,
            min_y,
            width,
            height,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Subpath {
    /// Starts with MoveTo; ClosePath only as final command.
    pub commands: Vec<PathCommand>,
    pub closed: bool,
}

/// A parsed path element: subpaths kept together, holes and all.
#[derive(Debug, Clone, PartialEq)]
pub struct PathGeometry {
    pub subpaths: Vec<Subpath>,
    pub viewbox: ViewBox,
    pub fill_rule: FillRule,
}

impl PathGeometry {
    /// Apply an affine transform to every command. Elliptical arcs are
    /// transformed exactly: the image of an ellipse under an affine map is
    /// an ellipse, recovered here via the SVD of the composed linear part.
    pub fn transform(&self, t: &Affine) -> PathGeometry {
        let subpaths = self
            .subpaths
            .iter()
            .map(|sp| Subpath {
                commands: sp.commands.iter().map(|c| transform_command(c, t)).collect(),
                closed: sp.closed,
            })
            .collect();
        PathGeometry {
            subpaths,
            viewbox: self.viewbox,
            fill_rule: self.fill_rule,
        }
    }
}

fn transform_command(cmd: &PathCommand, t: &Affine) -> PathCommand {
    match *cmd {
        PathCommand::MoveTo(p) => PathCommand::MoveTo(t.apply(p)),
        PathCommand::LineTo(p) => PathCommand::LineTo(t.apply(p)),
        PathCommand::CubicTo(c1, c2, p) => {
            PathCommand::CubicTo(t.apply(c1), t.apply(c2), t.apply(p))
        }
        PathCommand::QuadTo(c, p) => PathCommand::QuadTo(t.apply(c), t.apply(p)),
        PathCommand::ArcTo {
            rx,
            ry,
            rotation,
            large_arc,
            sweep,
            end,
        } => {
            let (nrx, nry, nrot) = transform_ellipse_radii(rx, ry, rotation, t);
            let sweep = if t.determinant() < 0.0 { !sweep } else { sweep };
            PathCommand::ArcTo {
                rx: nrx,
                ry: nry,
                rotation: nrot,
                large_arc,
                sweep,
                end: t.apply(end),
            }
        }
        PathCommand::ClosePath => PathCommand::ClosePath,
    }
}

/// New radii and x-axis rotation for an ellipse pushed through an affine map.
fn transform_ellipse_radii(rx: f64, ry: f64, rotation_deg: f64, t: &Affine) -> (f64, f64, f64) {
    let phi = rotation_deg.to_radians();
    let (s, c) = phi.sin_cos();
    // Columns of L * R(phi) * diag(rx, ry)
    let m00 = (t.a * c + t.c * s) * rx;
    let m10 = (t.b * c + t.d * s) * rx;
    let m01 = (-t.a * s + t.c * c) * ry;
    let m11 = (-t.b * s + t.d * c) * ry;
    // Closed-form 2x2 SVD
    let e = (m00 + m11) * 0.5;
    let f = (m00 - m11) * 0.5;
    let g = (m10 + m01) * 0.5;
    let h = (m10 - m01) * 0.5;
    let q = e.hypot(h);
    let r = f.hypot(g);
    let sx = q + r;
    let sy = (q - r).abs();
    let a1 = g.atan2(f);
    let a2 = h.atan2(e);
    let theta_u = (a2 + a1) * 0.5;
    (sx, sy, theta_u.to_degrees())
}

/// Equidistant sampling of one subpath.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPath {
    pub points: Vec<Point>,
    pub closed: bool,
    /// Actual arc-length gap between consecutive samples. For closed paths
    /// this is total length / point count; for open paths the requested
    /// spacing (the final gap may be shorter).
    pub spacing: f64,
}

/// Uniform map of `src` into the canonical 128-unit frame: the longer source
/// dimension spans 120 units, content centered on the shorter axis, 4 units
/// of padding all around.
pub fn normalization_transform(src: &ViewBox) -> Result<Affine, PathError> {
    if !(src.width > 0.0 && src.height > 0.0) {
        return Err(PathError::DegenerateViewBox(src.width, src.height));
    }
    let inner = NORMALIZED_SIZE - 2.0 * NORMALIZED_PADDING;
    let scale = inner / src.width.max(src.height);
    let pad_x = (inner - src.width * scale) * 0.5;
    let pad_y = (inner - src.height * scale) * 0.5;
    Ok(Affine::translate(
        NORMALIZED_PADDING + pad_x - src.min_x * scale,
        NORMALIZED_PADDING + pad_y - src.min_y * scale,
    )
    .then(Affine::scale(scale, scale)))
}

/// Map a scene into the canonical frame (see [`normalization_transform`]).
///
/// Input that is already normalized — canonical 128-unit viewbox with all
/// content inside the padded square — is returned unchanged, which makes the
/// operation idempotent.
pub fn normalize_viewbox(
    scene: &[PathGeometry],
    src: &ViewBox,
) -> Result<Vec<PathGeometry>, PathError> {
    if !(src.width > 0.0 && src.height > 0.0) {
        return Err(PathError::DegenerateViewBox(src.width, src.height));
    }
    let normalized = ViewBox::new(0.0, 0.0, NORMALIZED_SIZE, NORMALIZED_SIZE);
    if is_canonical_viewbox(src) && scene_within_padded_square(scene) {
        return Ok(scene
            .iter()
            .map(|g| {
                let mut g = g.clone();
                g.viewbox = normalized;
                g
            })
            .collect());
    }
    let t = normalization_transform(src)?;
    Ok(scene
        .iter()
        .map(|g| {
            let mut g = g.transform(&t);
            g.viewbox = normalized;
            g
        })
        .collect())
}

fn is_canonical_viewbox(vb: &ViewBox) -> bool {
    vb.min_x.abs() < 1e-9
        && vb.min_y.abs() < 1e-9
        && (vb.width - NORMALIZED_SIZE).abs() < 1e-9
        && (vb.height - NORMALIZED_SIZE).abs() < 1e-9
}

fn scene_within_padded_square(scene: &[PathGeometry]) -> bool {
    let lo = NORMALIZED_PADDING - 1e-6;
    let hi = NORMALIZED_SIZE - NORMALIZED_PADDING + 1e-6;
    let mut any = false;
    for g in scene {
        for sp in &g.subpaths {
            for seg in subpath_segments(sp) {
                let mut pts = Vec::new();
                flatten_segment(&seg, 1e-4, &mut pts);
                for p in pts {
                    any = true;
                    if p.x < lo || p.x > hi || p.y < lo || p.y > hi {
                        return false;
                    }
                }
            }
        }
    }
    any
}

/// Flatten a segment to a polyline whose max deviation from the curve is at
/// most `sagitta`. Pushes the start point and all interior/end points.
pub(crate) fn flatten_segment(seg: &Segment, sagitta: f64, out: &mut Vec<Point>) {
    let p0 = seg.eval(0.0);
    let p1 = seg.eval(1.0);
    out.push(p0);
    if let Segment::Line(..) = seg {
        out.push(p1);
        return;
    }
    flatten_rec(seg, 0.0, 1.0, p0, p1, sagitta, 0, out);
}

fn flatten_rec(
    seg: &Segment,
    t0: f64,
    t1: f64,
    p0: Point,
    p1: Point,
    sagitta: f64,
    depth: u32,
    out: &mut Vec<Point>,
) {
    let tm = 0.5 * (t0 + t1);
    let pm = seg.eval(tm);
    // Distance from the curve midpoint to the chord.
    let chord = p1 - p0;
    let dev = if chord.norm_sq() < 1e-24 {
        pm.distance(p0)
    } else {
        (pm - p0).cross(chord).abs() / chord.norm()
    };
    // The quarter-point check guards against symmetric curves whose midpoint
    // sits on the chord (e.g. a full period of an arc).
    let pq = seg.eval(t0 + 0.25 * (t1 - t0));
    let devq = if chord.norm_sq() < 1e-24 {
        pq.distance(p0)
    } else {
        (pq - p0).cross(chord).abs() / chord.norm()
    };
    if depth >= 24 || (dev <= sagitta && devq <= sagitta && depth >= 1) {
        out.push(p1);
    } else {
        flatten_rec(seg, t0, tm, p0, pm, sagitta, depth + 1, out);
        flatten_rec(seg, tm, t1, pm, p1, sagitta, depth + 1, out);
    }
}

// ---------------------------------------------------------------------------
// Curve segments and arc length

/// A single evaluable curve piece between two on-curve points.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Segment {
    Line(Point, Point),
    Cubic(Point, Point, Point, Point),
    Quad(Point, Point, Point),
    Arc(CenterArc),
}

/// Center parameterization of an elliptical arc.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CenterArc {
    pub center: Point,
    pub rx: f64,
    pub ry: f64,
    /// x-axis rotation in radians.
    pub phi: f64,
    pub theta_start: f64,
    /// Signed sweep in radians.
    pub delta: f64,
}

impl Segment {
    pub fn eval(&self, t: f64) -> Point {
        match *self {
            Segment::Line(a, b) => a.lerp(b, t),
            Segment::Cubic(p0, p1, p2, p3) => {
                let u = 1.0 - t;
                let w0 = u * u * u;
                let w1 = 3.0 * u * u * t;
                let w2 = 3.0 * u * t * t;
                let w3 = t * t * t;
                Point::new(
                    w0 * p0.x + w1 * p1.x + w2 * p2.x + w3 * p3.x,
                    w0 * p0.y + w1 * p1.y + w2 * p2.y + w3 * p3.y,
                )
            }
            Segment::Quad(p0, p1, p2) => {
                let u = 1.0 - t;
                let w0 = u * u;
                let w1 = 2.0 * u * t;
                let w2 = t * t;
                Point::new(
                    w0 * p0.x + w1 * p1.x + w2 * p2.x,
                    w0 * p0.y + w1 * p1.y + w2 * p2.y,
                )
            }
            Segment::Arc(arc) => {
                let theta = arc.theta_start + t * arc.delta;
                let (st, ct) = theta.sin_cos();
                let (sp, cp) = arc.phi.sin_cos();
                let x = arc.rx * ct;
                let y = arc.ry * st;
                Point::new(
                    arc.center.x + cp * x - sp * y,
                    arc.center.y + sp * x + cp * y,
                )
            }
        }
    }

    pub fn derivative(&self, t: f64) -> Point {
        match *self {
            Segment::Line(a, b) => b - a,
            Segment::Cubic(p0, p1, p2, p3) => {
                let u = 1.0 - t;
                let d0 = (p1 - p0) * (3.0 * u * u);
                let d1 = (p2 - p1) * (6.0 * u * t);
                let d2 = (p3 - p2) * (3.0 * t * t);
                d0 + d1 + d2
            }
            Segment::Quad(p0, p1, p2) => (p1 - p0) * (2.0 * (1.0 - t)) + (p2 - p1) * (2.0 * t),
            Segment::Arc(arc) => {
                let theta = arc.theta_start + t * arc.delta;
                let (st, ct) = theta.sin_cos();
                let (sp, cp) = arc.phi.sin_cos();
                let dx = -arc.rx * st * arc.delta;
                let dy = arc.ry * ct * arc.delta;
                Point::new(cp * dx - sp * dy, sp * dx + cp * dy)
            }
        }
    }
}

/// SVG endpoint parameterization -> center parameterization (spec F.6.5).
/// Returns None for a degenerate arc (coincident endpoints or zero radius),
/// which per the SVG spec renders as a straight line.
pub(crate) fn arc_endpoint_to_center(
    from: Point,
    rx: f64,
    ry: f64,
    rotation_deg: f64,
    large_arc: bool,
    sweep: bool,
    to: Point,
) -> Option<CenterArc> {
    if from.distance(to) < 1e-12 {
        return None;
    }
    let mut rx = rx.abs();
    let mut ry = ry.abs();
    if rx < 1e-12 || ry < 1e-12 {
        return None;
    }
    let phi = rotation_deg.to_radians();
    let (sp, cp) = phi.sin_cos();
    let dx = (from.x - to.x) * 0.5;
    let dy = (from.y - to.y) * 0.5;
    let x1p = cp * dx + sp * dy;
    let y1p = -sp * dx + cp * dy;

    // Scale radii up if the endpoints cannot be reached.
    let lambda = (x1p * x1p) / (rx * rx) + (y1p * y1p) / (ry * ry);
    if lambda > 1.0 {
        let s = lambda.sqrt();
        rx *= s;
        ry *= s;
    }

    let num = (rx * rx * ry * ry - rx * rx * y1p * y1p - ry * ry * x1p * x1p).max(0.0);
    let den = rx * rx * y1p * y1p + ry * ry * x1p * x1p;
    let mut coef = (num / den).sqrt();
    if large_arc == sweep {
        coef = -coef;
    }
    let cxp = coef * rx * y1p / ry;
    let cyp = -coef * ry * x1p / rx;

    let cx = cp * cxp - sp * cyp + (from.x + to.x) * 0.5;
    let cy = sp * cxp + cp * cyp + (from.y + to.y) * 0.5;

    let theta_start = ((y1p - cyp) / ry).atan2((x1p - cxp) / rx);
    let theta_end = ((-y1p - cyp) / ry).atan2((-x1p - cxp) / rx);
    let mut delta = wrap_angle(theta_end - theta_start);
    if sweep && delta < 0.0 {
        delta += std::f64::consts::TAU;
    } else if !sweep && delta > 0.0 {
        delta -= std::f64::consts::TAU;
    }

    Some(CenterArc {
        center: Point::new(cx, cy),
        rx,
        ry,
        phi,
        theta_start,
        delta,
    })
}

/// Expand one subpath to evaluable segments. Zero-length pieces are dropped.
pub(crate) fn subpath_segments(sp: &Subpath) -> Vec<Segment> {
    let mut segs = Vec::new();
    let mut start = Point::default();
    let mut cur = Point::default();
    for cmd in &sp.commands {
        match *cmd {
            PathCommand::MoveTo(p) => {
                start = p;
                cur = p;
            }
            PathCommand::LineTo(p) => {
                if cur.distance(p) > 1e-12 {
                    segs.push(Segment::Line(cur, p));
                }
                cur = p;
            }
            PathCommand::CubicTo(c1, c2, p) => {
                if cur.distance(p) > 1e-12 || cur.distance(c1) > 1e-12 || cur.distance(c2) > 1e-12
                {
                    segs.push(Segment::Cubic(cur, c1, c2, p));
                }
                cur = p;
            }
            PathCommand::QuadTo(c, p) => {
                if cur.distance(p) > 1e-12 || cur.distance(c) > 1e-12 {
                    segs.push(Segment::Quad(cur, c, p));
                }
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
                match arc_endpoint_to_center(cur, rx, ry, rotation, large_arc, sweep, end) {
                    Some(arc) => segs.push(Segment::Arc(arc)),
                    None => {
                        if cur.distance(end) > 1e-12 {
                            segs.push(Segment::Line(cur, end));
                        }
                    }
                }
                cur = end;
            }
            PathCommand::ClosePath => {
                if cur.distance(start) > 1e-12 {
                    segs.push(Segment::Line(cur, start));
                }
                cur = start;
            }
        }
    }
    // An explicitly closed subpath without a trailing ClosePath still closes.
    if sp.closed
        && !matches!(sp.commands.last(), Some(PathCommand::ClosePath))
        && cur.distance(start) > 1e-12
    {
        segs.push(Segment::Line(cur, start));
    }
    segs
}

/// Arc-length lookup table for one segment: sorted (t, cumulative length)
/// knots fine enough that the curve is nearly linear between them.
pub(crate) struct ArcLengthTable {
    pub seg: Segment,
    /// (t, cumulative length) pairs, starting at (0,0).
    pub knots: Vec<(f64, f64)>,
}

impl ArcLengthTable {
    pub fn build(seg: Segment, rel_tol: f64) -> ArcLengthTable {
        if let Segment::Line(a, b) = seg {
            return ArcLengthTable {
                seg,
                knots: vec![(0.0, 0.0), (1.0, a.distance(b))],
            };
        }
        let mut knots = vec![(0.0, 0.0)];
        let p0 = seg.eval(0.0);
        let p1 = seg.eval(1.0);
        let scale = p0.distance(p1).max(1e-9);
        subdivide(&seg, 0.0, 1.0, p0, p1, rel_tol * scale, 0, &mut knots);
        ArcLengthTable { seg, knots }
    }

    pub fn total(&self) -> f64 {
        self.knots.last().map(|k| k.1).unwrap_or(0.0)
    }

    /// Curve parameter at arc length `s`, refined by Newton steps on the
    /// local speed so inversion error stays far below the table tolerance.
    pub fn param_at(&self, s: f64) -> f64 {
        let total = self.total();
        if s <= 0.0 {
            return 0.0;
        }
        if s >= total {
            return 1.0;
        }
        let idx = match self
            .knots
            .binary_search_by(|k| k.1.partial_cmp(&s).unwrap())
        {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let (t0, s0) = self.knots[idx];
        let (t1, s1) = self.knots[(idx + 1).min(self.knots.len() - 1)];
        let mut t = if s1 > s0 {
            t0 + (t1 - t0) * (s - s0) / (s1 - s0)
        } else {
            t0
        };
        // Two Newton iterations: d(arclen)/dt = |derivative|
        for _ in 0..2 {
            let speed = self.seg.derivative(t).norm();
            if speed < 1e-12 {
                break;
            }
            let here = self.length_at(t);
            t = (t - (here - s) / speed).clamp(t0, t1);
        }
        t
    }

    /// Approximate arc length from 0 to parameter `t` using the table.
    fn length_at(&self, t: f64) -> f64 {
        let idx = match self
            .knots
            .binary_search_by(|k| k.0.partial_cmp(&t).unwrap())
        {
            Ok(i) => return self.knots[i].1,
            Err(i) => i - 1,
        };
        let (t0, s0) = self.knots[idx];
        let p0 = self.seg.eval(t0);
        s0 + p0.distance(self.seg.eval(t))
    }
}

fn subdivide(
    seg: &Segment,
    t0: f64,
    t1: f64,
    p0: Point,
    p1: Point,
    abs_tol: f64,
    depth: u32,
    knots: &mut Vec<(f64, f64)>,
) {
    let tm = 0.5 * (t0 + t1);
    let pm = seg.eval(tm);
    let chord = p0.distance(p1);
    let first = p0.distance(pm);
    let two = first + pm.distance(p1);
    if depth >= 24 || (two - chord <= abs_tol * (t1 - t0) && depth >= 4) {
        let base = knots.last().unwrap().1;
        // Richardson extrapolation of the split vs. chord estimates
        let refined = two + (two - chord) / 3.0;
        let frac = if two > 0.0 { first / two } else { 0.5 };
        knots.push((tm, base + refined * frac));
        knots.push((t1, base + refined));
    } else {
        subdivide(seg, t0, tm, p0, pm, abs_tol, depth + 1, knots);
        subdivide(seg, tm, t1, pm, p1, abs_tol, depth + 1, knots);
    }
}

/// Sample points spaced uniformly by arc length along every subpath.
///
/// Closed subpaths get `floor(length / spacing)` points (min 3) spread
/// exactly evenly; open subpaths keep both endpoints with interior points at
/// multiples of `spacing`. Zero-length subpaths are dropped; a wholly
/// zero-length path is an error.
pub fn sample_equidistant(
    path: &PathGeometry,
    spacing: f64,
) -> Result<Vec<SampledPath>, PathError> {
    if !(spacing > 0.0) {
        return Err(PathError::BadSpacing(spacing));
    }
    let mut out = Vec::new();
    for sp in &path.subpaths {
        if let Some(sampled) = sample_subpath(sp, spacing)? {
            out.push(sampled);
        }
    }
    if out.is_empty() {
        return Err(PathError::DegeneratePath);
    }
    Ok(out)
}

fn sample_subpath(sp: &Subpath, spacing: f64) -> Result<Option<SampledPath>, PathError> {
    let segs = subpath_segments(sp);
    if segs.is_empty() {
        return Ok(None);
    }
    for seg in &segs {
        if !seg.eval(0.0).is_finite() || !seg.eval(1.0).is_finite() {
            return Err(PathError::NonFinite);
        }
    }
    let tables: Vec<ArcLengthTable> = segs
        .into_iter()
        .map(|s| ArcLengthTable::build(s, 1e-6))
        .collect();
    let total: f64 = tables.iter().map(|t| t.total()).sum();
    if total < 1e-9 {
        return Ok(None);
    }

    let points = if sp.closed {
        let n = ((total / spacing).floor() as usize).max(3);
        let step = total / n as f64;
        (0..n)
            .map(|i| eval_at_length(&tables, i as f64 * step))
            .collect::<Vec<_>>()
    } else {
        let mut pts = Vec::new();
        let mut s = 0.0;
        while s < total - 1e-9 {
            pts.push(eval_at_length(&tables, s));
            s += spacing;
        }
        pts.push(eval_at_length(&tables, total));
        if pts.len() < 2 {
            pts = vec![eval_at_length(&tables, 0.0), eval_at_length(&tables, total)];
        }
        pts
    };

    let actual_spacing = if sp.closed {
        total / points.len() as f64
    } else {
        spacing
    };
    Ok(Some(SampledPath {
        points,
        closed: sp.closed,
        spacing: actual_spacing,
    }))
}

fn eval_at_length(tables: &[ArcLengthTable], mut s: f64) -> Point {
    for (i, table) in tables.iter().enumerate() {
        let len = table.total();
        if s <= len || i == tables.len() - 1 {
            let t = table.param_at(s.min(len));
            return table.seg.eval(t);
        }
        s -= len;
    }
    unreachable!("eval_at_length: empty table list")
}

/// Total arc length of a subpath, to the sampling tolerance.
pub fn subpath_length(sp: &Subpath) -> f64 {
    subpath_segments(sp)
        .into_iter()
        .map(|s| ArcLengthTable::build(s, 1e-6).total())
        .sum()
}

/// Flatten a geometry's subpaths to polylines with bounded deviation; one
/// loop per subpath, closed loops not repeating their first point.
pub fn flatten_geometry(geom: &PathGeometry, sagitta: f64) -> Vec<(Vec<Point>, bool)> {
    let mut out = Vec::new();
    for sp in &geom.subpaths {
        let mut pts: Vec<Point> = Vec::new();
        for seg in subpath_segments(sp) {
            let mut piece = Vec::new();
            flatten_segment(&seg, sagitta, &mut piece);
            if let Some(last) = pts.last() {
                if let Some(first) = piece.first() {
                    if last.distance(*first) < 1e-9 {
                        piece.remove(0);
                    }
                }
            }
            pts.extend(piece);
        }
        if sp.closed {
            if let (Some(first), Some(last)) = (pts.first().copied(), pts.last().copied()) {
                if first.distance(last) < 1e-9 {
                    pts.pop();
                }
            }
        }
        if pts.len() >= 2 {
            out.push((pts, sp.closed));
        }
    }
    out
}

/// Distance from a point to flattened polylines.
pub fn polyline_distance(q: Point, polyline: &[Point], closed: bool) -> f64 {
    let n = polyline.len();
    if n == 0 {
        return f64::INFINITY;
    }
    if n == 1 {
        return q.distance(polyline[0]);
    }
    let seg_count = if closed { n } else { n - 1 };
    let mut best = f64::INFINITY;
    for i in 0..seg_count {
        let a = polyline[i];
        let b = polyline[(i + 1) % n];
        let ab = b - a;
        let len_sq = ab.norm_sq();
        let d = if len_sq < 1e-24 {
            q.distance(a)
        } else {
            let t = ((q - a).dot(ab) / len_sq).clamp(0.0, 1.0);
            q.distance(a + ab * t)
        };
        best = best.min(d);
    }
    best
}
