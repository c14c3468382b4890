//! Line/arc decomposition of sampled paths.
//!
//! A sampled path is fitted with the fewest line segments and circular arcs
//! that keep every sample within tolerance, using dynamic programming over
//! sample indices. Junctions are snapped to G1 continuity where the tangent
//! mismatch is small; larger turns are flagged as corners. Arcs are capped
//! below 120 degrees so their endpoint tangents always meet at a finite
//! intersection point on the convex side.

use crate::geom::{wrap_angle, Point};
use crate::path::SampledPath;

/// Strict arc sweep cap: 2*pi/3 (120 degrees).
pub const ARC_SWEEP_CAP: f64 = 2.0 * std::f64::consts::PI / 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinePrim {
    pub a: Point,
    pub b: Point,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcPrim {
    pub a: Point,
    pub b: Point,
    pub center: Point,
    pub radius: f64,
    /// Signed subtended angle in radians; positive is counterclockwise.
    pub sweep: f64,
}

impl ArcPrim {
    pub fn start_angle(&self) -> f64 {
        (self.a - self.center).angle()
    }

    /// Position at normalized parameter t in [0,1].
    pub fn eval(&self, t: f64) -> Point {
        let theta = self.start_angle() + t * self.sweep;
        Point::new(
            self.center.x + self.radius * theta.cos(),
            self.center.y + self.radius * theta.sin(),
        )
    }

    /// Unit tangent in the direction of travel at parameter t.
    pub fn tangent(&self, t: f64) -> Point {
        let theta = self.start_angle() + t * self.sweep;
        let radial = Point::new(theta.cos(), theta.sin());
        radial.perp() * self.sweep.signum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Primitive {
    Line(LinePrim),
    Arc(ArcPrim),
}

impl Primitive {
    pub fn start(&self) -> Point {
        match self {
            Primitive::Line(l) => l.a,
            Primitive::Arc(a) => a.a,
        }
    }

    pub fn end(&self) -> Point {
        match self {
            Primitive::Line(l) => l.b,
            Primitive::Arc(a) => a.b,
        }
    }

    pub fn eval(&self, t: f64) -> Point {
        match self {
            Primitive::Line(l) => l.a.lerp(l.b, t),
            Primitive::Arc(a) => a.eval(t),
        }
    }

    pub fn start_tangent(&self) -> Point {
        match self {
            Primitive::Line(l) => (l.b - l.a).normalized(),
            Primitive::Arc(a) => a.tangent(0.0),
        }
    }

    pub fn end_tangent(&self) -> Point {
        match self {
            Primitive::Line(l) => (l.b - l.a).normalized(),
            Primitive::Arc(a) => a.tangent(1.0),
        }
    }

    pub fn length(&self) -> f64 {
        match self {
            Primitive::Line(l) => l.a.distance(l.b),
            Primitive::Arc(a) => a.radius * a.sweep.abs(),
        }
    }

    /// Distance from `q` to this primitive (segment/arc, not full line/circle).
    pub fn distance_to(&self, q: Point) -> f64 {
        match self {
            Primitive::Line(l) => segment_distance(q, l.a, l.b),
            Primitive::Arc(a) => {
                let rel = q - a.center;
                let theta = rel.angle();
                let offset = wrap_angle(theta - a.start_angle());
                let inside = if a.sweep >= 0.0 {
                    let o = if offset < 0.0 {
                        offset + std::f64::consts::TAU
                    } else {
                        offset
                    };
                    o <= a.sweep
                } else {
                    let o = if offset > 0.0 {
                        offset - std::f64::consts::TAU
                    } else {
                        offset
                    };
                    o >= a.sweep
                };
                if inside {
                    (rel.norm() - a.radius).abs()
                } else {
                    q.distance(a.a).min(q.distance(a.b))
                }
            }
        }
    }
}

fn segment_distance(q: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq < 1e-24 {
        return q.distance(a);
    }
    let t = ((q - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    q.distance(a + ab * t)
}

/// A chained sequence of line and arc primitives.
#[derive(Debug, Clone, PartialEq)]
pub struct LineArcPath {
    pub primitives: Vec<Primitive>,
    pub closed: bool,
    /// Junction indices where tangent continuity is intentionally broken.
    /// Junction k sits at the end of primitive k (wrapping when closed).
    pub corners: Vec<usize>,
}

impl LineArcPath {
    pub fn junction_count(&self) -> usize {
        if self.closed {
            self.primitives.len()
        } else {
            self.primitives.len().saturating_sub(1)
        }
    }

    /// Max distance from any of the given points to the chain.
    pub fn max_distance_from(&self, points: &[Point]) -> f64 {
        points
            .iter()
            .map(|q| {
                self.primitives
                    .iter()
                    .map(|p| p.distance_to(*q))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }

    /// Densely sampled points along the chain, `per_prim` per primitive.
    pub fn resample(&self, per_prim: usize) -> Vec<Point> {
        let mut out = Vec::new();
        for prim in &self.primitives {
            for k in 0..per_prim {
                out.push(prim.eval(k as f64 / per_prim as f64));
            }
        }
        if let (false, Some(last)) = (self.closed, self.primitives.last()) {
            out.push(last.end());
        }
        out
    }

    /// Points along the chain at most `spacing` apart in arc length.
    pub fn resample_spacing(&self, spacing: f64) -> Vec<Point> {
        let mut out = Vec::new();
        for prim in &self.primitives {
            let n = ((prim.length() / spacing).ceil() as usize).max(1);
            for k in 0..n {
                out.push(prim.eval(k as f64 / n as f64));
            }
        }
        if let (false, Some(last)) = (self.closed, self.primitives.last()) {
            out.push(last.end());
        }
        out
    }

    /// Distance from a point to the nearest primitive of the chain.
    pub fn distance_from_point(&self, q: Point) -> f64 {
        self.primitives
            .iter()
            .map(|p| p.distance_to(q))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Fitting knobs; the defaults are what the encoding pipeline uses.
#[derive(Debug, Clone, Copy)]
pub struct FitConfig {
    /// Max distance from any sample to the fitted chain (normalized units).
    pub tolerance: f64,
    /// Raw tangent turn above which a junction is kept as a corner (radians).
    pub corner_threshold: f64,
    /// Arc sweeps below this are emitted as their chord (radians).
    pub straightness_tol: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            tolerance: 0.3,
            corner_threshold: 0.35,
            straightness_tol: 0.02,
        }
    }
}

/// Convert a borderline-flat arc candidate to its chord.
///
/// The rule is strict-less: a sweep exactly at `straightness_tol` stays an
/// arc.
pub fn classify_arc(arc: ArcPrim, straightness_tol: f64) -> Primitive {
    if arc.sweep.abs() < straightness_tol {
        Primitive::Line(LinePrim { a: arc.a, b: arc.b })
    } else {
        Primitive::Arc(arc)
    }
}

/// Split an arc into `k` equal sub-arcs sharing its center and radius; the
/// original endpoints are preserved exactly so chaining is unaffected.
fn split_arc(arc: &ArcPrim, k: usize) -> Vec<ArcPrim> {
    let step = arc.sweep / k as f64;
    let theta0 = arc.start_angle();
    let point_at = |theta: f64| {
        Point::new(
            arc.center.x + arc.radius * theta.cos(),
            arc.center.y + arc.radius * theta.sin(),
        )
    };
    (0..k)
        .map(|i| {
            let a = if i == 0 {
                arc.a
            } else {
                point_at(theta0 + step * i as f64)
            };
            let b = if i == k - 1 {
                arc.b
            } else {
                point_at(theta0 + step * (i + 1) as f64)
            };
            ArcPrim {
                a,
                b,
                center: arc.center,
                radius: arc.radius,
                sweep: step,
            }
        })
        .collect()
}

fn map_arcs(path: &LineArcPath, split_count: impl Fn(&ArcPrim) -> usize) -> LineArcPath {
    let mut primitives = Vec::with_capacity(path.primitives.len());
    // new index of the junction at the end of old primitive k
    let mut junction_map = Vec::with_capacity(path.primitives.len());
    for prim in &path.primitives {
        match prim {
            Primitive::Arc(arc) => {
                let k = split_count(arc).max(1);
                if k == 1 {
                    primitives.push(*prim);
                } else {
                    primitives.extend(split_arc(arc, k).into_iter().map(Primitive::Arc));
                }
            }
            other => primitives.push(*other),
        }
        junction_map.push(primitives.len() - 1);
    }
    let corners = path.corners.iter().map(|&c| junction_map[c]).collect();
    LineArcPath {
        primitives,
        closed: path.closed,
        corners,
    }
}

/// Split every arc with |sweep| >= 120 degrees into equal sub-arcs strictly
/// under the cap. Sub-arcs share the original center and radius, so the new
/// junctions are exactly G1. Corner flags are remapped to the new indices.
pub fn subdivide_large_arcs(path: &LineArcPath) -> LineArcPath {
    let cap = ARC_SWEEP_CAP - 1e-9;
    map_arcs(path, |arc| {
        if arc.sweep.abs() >= cap {
            (arc.sweep.abs() / cap).ceil() as usize
        } else {
            1
        }
    })
}

/// Split arcs whose endpoint-tangent intersection falls outside the given
/// frame, until every intersection is inside. A curve that lies inside the
/// frame always converges: sub-arc intersections approach the curve.
pub fn subdivide_for_frame(path: &LineArcPath, lo: f64, hi: f64) -> LineArcPath {
    let in_frame = |p: Point| p.x >= lo && p.x <= hi && p.y >= lo && p.y <= hi;
    let intersection = |arc: &ArcPrim| -> Option<Point> {
        let t0 = arc.tangent(0.0);
        let t1 = arc.tangent(1.0);
        let denom = t0.cross(t1);
        if denom.abs() < 1e-12 {
            return None;
        }
        Some(arc.a + t0 * ((arc.b - arc.a).cross(t1) / denom))
    };
    map_arcs(path, |arc| {
        for k in 1..=16 {
            let ok = split_arc(arc, k)
                .iter()
                .all(|sub| intersection(sub).is_some_and(in_frame));
            if ok {
                return k;
            }
        }
        16
    })
}

/// Fit a G1 line-arc chain to sampled points with default corner handling.
/// Output arcs already satisfy the 120-degree cap.
pub fn fit_linearc(samples: &SampledPath, fit_tolerance: f64) -> LineArcPath {
    fit_linearc_with(
        samples,
        &FitConfig {
            tolerance: fit_tolerance,
            ..FitConfig::default()
        },
    )
}

pub fn fit_linearc_with(samples: &SampledPath, cfg: &FitConfig) -> LineArcPath {
    assert!(samples.points.len() >= 3, "need at least 3 samples");
    assert!(cfg.tolerance > 0.0);

    let mut pts = samples.points.clone();
    if samples.closed {
        // Seam the loop at its flattest sample. A seam inside a straight run
        // splits into two collinear lines that later collapse to nothing; a
        // seam inside an arc would invite the DP to blend the cut corner
        // with its neighboring edge.
        let n = pts.len();
        let flattest = (0..n)
            .min_by(|&i, &j| {
                turn_at(&pts, i, true)
                    .partial_cmp(&turn_at(&pts, j, true))
                    .unwrap()
            })
            .unwrap_or(0);
        pts.rotate_left(flattest);
        pts.push(pts[0]);
    }

    // Hard breakpoints at detected corners.
    let n = pts.len();
    let mut breaks = vec![0];
    for i in 1..n - 1 {
        if turn_at(&pts, i, false) > cfg.corner_threshold {
            breaks.push(i);
        }
    }
    breaks.push(n - 1);

    let mut fitted: Vec<FittedPrim> = Vec::new();
    let mut corner_junctions: Vec<usize> = Vec::new();
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi > lo {
            let piece = fit_piece(&pts[lo..=hi], cfg);
            if !fitted.is_empty() {
                corner_junctions.push(fitted.len() - 1);
            }
            fitted.extend(piece.into_iter().map(|mut fp| {
                fp.span.0 += lo;
                fp.span.1 += lo;
                fp
            }));
        }
    }
    // The seam of a closed path is the sharpest vertex: treat it like any
    // other junction (snap or flag below).
    if samples.closed && turn_at(&pts, 0, true) > cfg.corner_threshold && !fitted.is_empty() {
        corner_junctions.push(fitted.len() - 1);
    }

    snap_g1(&mut fitted, &pts, samples.closed, cfg, &mut corner_junctions);

    corner_junctions.sort_unstable();
    corner_junctions.dedup();
    let path = LineArcPath {
        primitives: fitted.into_iter().map(|fp| fp.prim).collect(),
        closed: samples.closed,
        corners: corner_junctions,
    };
    // The forced seam breakpoint of closed paths can split one arc in two;
    // co-circular neighbors merge back before the cap is applied.
    subdivide_large_arcs(&merge_cocircular(&path))
}

/// Merge redundant adjacent primitives: arc runs on the same circle (same
/// center, radius, and turn direction, G1-joined) and collinear line runs.
/// Wraps around the seam of closed paths; corner junctions never merge.
fn merge_cocircular(path: &LineArcPath) -> LineArcPath {
    let m = path.primitives.len();
    if m < 2 {
        return path.clone();
    }
    let pair_merges = |a: &Primitive, b: &Primitive| -> bool {
        match (a, b) {
            (Primitive::Arc(x), Primitive::Arc(y)) => {
                let scale = x.radius.max(1.0);
                x.sweep.signum() == y.sweep.signum()
                    && x.center.distance(y.center) <= 1e-6 * scale
                    && (x.radius - y.radius).abs() <= 1e-6 * scale
                    && x.b.distance(y.a) <= 1e-6 * scale
                    && (x.sweep + y.sweep).abs() <= std::f64::consts::TAU + 1e-9
            }
            (Primitive::Line(x), Primitive::Line(y)) => {
                let d0 = (x.b - x.a).normalized();
                let d1 = (y.b - y.a).normalized();
                x.b.distance(y.a) <= 1e-9 * x.a.distance(x.b).max(1.0)
                    && d0.cross(d1).abs() <= 1e-9
                    && d0.dot(d1) > 0.0
            }
            _ => false,
        }
    };
    let mergeable = |k: usize| -> bool {
        !path.corners.contains(&k)
            && pair_merges(&path.primitives[k], &path.primitives[(k + 1) % m])
    };
    let junctions = if path.closed { m } else { m - 1 };

    // Closed loop where every junction merges: a single full-circle arc.
    // (All-collinear closed lines would be degenerate and cannot occur.)
    if path.closed && (0..junctions).all(mergeable) {
        if let Primitive::Arc(first) = &path.primitives[0] {
            let sweep: f64 = path
                .primitives
                .iter()
                .map(|p| match p {
                    Primitive::Arc(a) => a.sweep,
                    Primitive::Line(_) => 0.0,
                })
                .sum();
            return LineArcPath {
                primitives: vec![Primitive::Arc(ArcPrim {
                    a: first.a,
                    b: first.a,
                    center: first.center,
                    radius: first.radius,
                    sweep: sweep.clamp(-std::f64::consts::TAU, std::f64::consts::TAU),
                })],
                closed: true,
                corners: vec![],
            };
        }
        return path.clone();
    }

    // Rotate closed chains to start right after a hard junction so a single
    // linear pass sees every mergeable run contiguously.
    let (prims, corners): (Vec<Primitive>, Vec<usize>) = if path.closed {
        let pivot = (0..junctions)
            .find(|&k| !mergeable(k))
            .expect("full-merge case handled above");
        let shift = (pivot + 1) % m;
        let prims = (0..m).map(|i| path.primitives[(i + shift) % m]).collect();
        let corners = path
            .corners
            .iter()
            .map(|&c| (c + m - shift) % m)
            .collect();
        (prims, corners)
    } else {
        (path.primitives.clone(), path.corners.clone())
    };

    let local_mergeable = |prims: &[Primitive], k: usize| -> bool {
        k + 1 < prims.len() && pair_merges(&prims[k], &prims[k + 1])
    };
    let corner_set: Vec<bool> = {
        let mut v = vec![false; m];
        for &c in &corners {
            v[c] = true;
        }
        v
    };

    let mut merged: Vec<Primitive> = Vec::with_capacity(m);
    let mut junction_map = vec![0usize; m];
    let mut i = 0;
    while i < m {
        let mut j = i;
        while local_mergeable(&prims, j) && !corner_set[j] {
            j += 1;
        }
        if j > i {
            let b = prims[j].end();
            match &prims[i] {
                Primitive::Arc(x) => {
                    let sweep: f64 = prims[i..=j]
                        .iter()
                        .map(|p| match p {
                            Primitive::Arc(y) => y.sweep,
                            Primitive::Line(_) => 0.0,
                        })
                        .sum();
                    merged.push(Primitive::Arc(ArcPrim {
                        a: x.a,
                        b,
                        center: x.center,
                        radius: x.radius,
                        sweep,
                    }));
                }
                Primitive::Line(x) => {
                    merged.push(Primitive::Line(LinePrim { a: x.a, b }));
                }
            }
        } else {
            merged.push(prims[i]);
        }
        for k in i..=j {
            junction_map[k] = merged.len() - 1;
        }
        i = j + 1;
    }
    let new_corners = corners.iter().map(|&c| junction_map[c]).collect();
    LineArcPath {
        primitives: merged,
        closed: path.closed,
        corners: new_corners,
    }
}

/// Turn angle (radians) at sample i between incoming and outgoing chords.
fn turn_at(pts: &[Point], i: usize, wrap: bool) -> f64 {
    let n = pts.len();
    let (prev, next) = if wrap {
        (pts[(i + n - 1) % n], pts[(i + 1) % n])
    } else if i == 0 || i + 1 >= n {
        return 0.0;
    } else {
        (pts[i - 1], pts[i + 1])
    };
    let v0 = (pts[i] - prev).normalized();
    let v1 = (next - pts[i]).normalized();
    v0.cross(v1).atan2(v0.dot(v1)).abs()
}

struct FittedPrim {
    prim: Primitive,
    span: (usize, usize),
}

/// DP over sample indices: minimal number of primitives covering the piece
/// with every sample within tolerance, ties broken toward lower residual.
fn fit_piece(pts: &[Point], cfg: &FitConfig) -> Vec<FittedPrim> {
    let n = pts.len();
    if n == 2 {
        return vec![FittedPrim {
            prim: Primitive::Line(LinePrim { a: pts[0], b: pts[1] }),
            span: (0, 1),
        }];
    }

    // reach[i]: farthest j such that one primitive fits pts[i..=j].
    let mut reach = vec![0usize; n];
    for i in 0..n - 1 {
        let mut lo = i + 1; // always feasible
        let mut step = 1usize;
        while lo < n - 1 {
            let probe = (lo + step).min(n - 1);
            if span_fit(&pts[i..=probe], cfg.tolerance).is_some() {
                lo = probe;
                if probe == n - 1 {
                    break;
                }
                step *= 2;
            } else {
                break;
            }
        }
        // Binary refine between lo (feasible) and lo+step (infeasible).
        let mut hi = (lo + step).min(n - 1);
        while lo + 1 < hi {
            let mid = (lo + hi) / 2;
            if span_fit(&pts[i..=mid], cfg.tolerance).is_some() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        reach[i] = lo;
    }

    const INF: u32 = u32::MAX;
    let mut count = vec![INF; n];
    let mut residual = vec![f64::INFINITY; n];
    let mut back = vec![usize::MAX; n];
    count[0] = 0;
    residual[0] = 0.0;
    for j in 1..n {
        // Min primitive count over feasible predecessors.
        let mut best_count = INF;
        for i in 0..j {
            if count[i] != INF && reach[i] >= j {
                best_count = best_count.min(count[i] + 1);
            }
        }
        if best_count == INF {
            continue;
        }
        // Tie-break on accumulated residual over a bounded candidate set.
        let mut ties: Vec<usize> = (0..j)
            .filter(|&i| count[i] != INF && reach[i] >= j && count[i] + 1 == best_count)
            .collect();
        if ties.len() > 8 {
            ties.select_nth_unstable_by(7, |&a, &b| a.cmp(&b));
            ties.truncate(8);
        }
        let mut best = (f64::INFINITY, usize::MAX);
        for i in ties {
            let res = span_fit(&pts[i..=j], cfg.tolerance)
                .map(|(_, r)| r)
                .unwrap_or(f64::INFINITY);
            let total = residual[i] + res;
            if total < best.0 {
                best = (total, i);
            }
        }
        count[j] = best_count;
        residual[j] = best.0;
        back[j] = best.1;
    }

    // Reconstruct spans from the back pointers.
    let mut cuts = vec![n - 1];
    let mut at = n - 1;
    while at != 0 {
        at = back[at];
        cuts.push(at);
    }
    cuts.reverse();

    cuts.windows(2)
        .map(|w| {
            let (i, j) = (w[0], w[1]);
            let (prim, _) = span_fit(&pts[i..=j], cfg.tolerance)
                .expect("span chosen by DP must be feasible");
            FittedPrim {
                prim,
                span: (i, j),
            }
        })
        .collect()
}

/// Best single primitive over a span: a line when the chord already fits,
/// otherwise a circular arc through both endpoints. Returns the primitive
/// and its max residual, or None if neither meets the tolerance.
fn span_fit(pts: &[Point], tolerance: f64) -> Option<(Primitive, f64)> {
    let n = pts.len();
    let (a, b) = (pts[0], pts[n - 1]);
    if n == 2 {
        return Some((Primitive::Line(LinePrim { a, b }), 0.0));
    }
    let line_res = pts
        .iter()
        .map(|&q| segment_distance(q, a, b))
        .fold(0.0, f64::max);
    if line_res <= tolerance {
        return Some((Primitive::Line(LinePrim { a, b }), line_res));
    }
    let (arc, res) = fit_arc_span(pts)?;
    if res <= tolerance {
        Some((Primitive::Arc(arc), res))
    } else {
        None
    }
}

/// Least-squares circle through both span endpoints (center constrained to
/// the chord's perpendicular bisector; algebraic solve plus Gauss-Newton
/// refinement on geometric distance), turned into an arc through the
/// samples. Fails on angularly non-monotonic spans.
fn fit_arc_span(pts: &[Point]) -> Option<(ArcPrim, f64)> {
    let n = pts.len();
    let (a, b) = (pts[0], pts[n - 1]);
    let chord = b - a;
    let m = (a + b) * 0.5;

    let center = if chord.norm() < 1e-9 {
        // Closed full loop: unconstrained algebraic fit.
        kasa_center(pts)?
    } else {
        let nh = chord.perp().normalized();
        let half_sq = a.distance(m).powi(2);
        // Algebraic distance is linear in the bisector parameter t.
        let mut num = 0.0;
        let mut den = 0.0;
        for &q in &pts[1..n - 1] {
            let u = (q - m).norm_sq() - half_sq;
            let v = 2.0 * nh.dot(q - m);
            num += u * v;
            den += v * v;
        }
        if den < 1e-18 {
            return None; // collinear: caller handles via the line branch
        }
        let mut t = num / den;
        // Gauss-Newton on sum((|q-c| - r)^2) along the bisector.
        for _ in 0..3 {
            let c = m + nh * t;
            let r = a.distance(c);
            let mut g = 0.0;
            let mut h = 0.0;
            for &q in pts {
                let d = q - c;
                let dist = d.norm();
                if dist < 1e-12 {
                    continue;
                }
                // d/dt |q - (m + t*nh)| = -nh.dot(d)/|d|; d/dt r likewise.
                let ddist = -nh.dot(d) / dist;
                let ar = a - c;
                let dr = -nh.dot(ar) / ar.norm();
                let jac = ddist - dr;
                let f = dist - r;
                g += f * jac;
                h += jac * jac;
            }
            if h < 1e-18 {
                break;
            }
            t -= g / h;
        }
        m + nh * t
    };

    let radius = 0.5 * (a.distance(center) + b.distance(center));
    if !(radius.is_finite() && radius > 1e-9) {
        return None;
    }

    // Swept angle accumulated sample to sample; rejects zigzags.
    let mut sweep = 0.0;
    let mut prev = (pts[0] - center).angle();
    let mut sign = 0.0;
    for &q in &pts[1..] {
        let theta = (q - center).angle();
        let d = wrap_angle(theta - prev);
        if d.abs() > 1e-12 {
            if sign == 0.0 {
                sign = d.signum();
            } else if d.signum() != sign && d.abs() > 1e-6 {
                return None;
            }
        }
        sweep += d;
        prev = theta;
    }
    if sweep.abs() < 1e-9 || sweep.abs() > std::f64::consts::TAU + 1e-6 {
        return None;
    }
    let sweep = sweep.clamp(-std::f64::consts::TAU, std::f64::consts::TAU);

    let arc = ArcPrim {
        a,
        b,
        center,
        radius,
        sweep,
    };
    let res = pts
        .iter()
        .map(|&q| ((q - center).norm() - radius).abs())
        .fold(0.0, f64::max);
    Some((arc, res))
}

/// Unconstrained algebraic (Kasa) circle center.
fn kasa_center(pts: &[Point]) -> Option<Point> {
    let n = pts.len() as f64;
    let (mut sx, mut sy) = (0.0, 0.0);
    for p in pts {
        sx += p.x;
        sy += p.y;
    }
    let (mx, my) = (sx / n, sy / n);
    let (mut suu, mut suv, mut svv, mut suuu, mut svvv, mut suvv, mut svuu) =
        (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for p in pts {
        let u = p.x - mx;
        let v = p.y - my;
        suu += u * u;
        suv += u * v;
        svv += v * v;
        suuu += u * u * u;
        svvv += v * v * v;
        suvv += u * v * v;
        svuu += v * u * u;
    }
    let det = suu * svv - suv * suv;
    if det.abs() < 1e-18 {
        return None;
    }
    let rhs_u = 0.5 * (suuu + suvv);
    let rhs_v = 0.5 * (svvv + svuu);
    let cu = (rhs_u * svv - rhs_v * suv) / det;
    let cv = (rhs_v * suu - rhs_u * suv) / det;
    Some(Point::new(cu + mx, cv + my))
}

/// Re-fit an arc through both its endpoints with a prescribed unit tangent
/// at one of them. Returns None when the construction degenerates.
fn refit_arc_with_tangent(arc: &ArcPrim, at_start: bool, tangent: Point) -> Option<ArcPrim> {
    let (j, q) = if at_start { (arc.a, arc.b) } else { (arc.b, arc.a) };
    let nh = tangent.perp();
    let jq = q - j;
    let denom = 2.0 * nh.dot(jq);
    if denom.abs() < 1e-12 {
        return None;
    }
    let s = jq.norm_sq() / denom;
    let center = j + nh * s;
    let radius = s.abs();
    if radius < 1e-9 {
        return None;
    }
    let theta_a = (arc.a - center).angle();
    let theta_b = (arc.b - center).angle();
    let mut sweep = wrap_angle(theta_b - theta_a);
    // Keep the original orientation; the short way around matches a snap.
    if sweep.signum() != arc.sweep.signum() && sweep.abs() > 1e-12 {
        sweep -= std::f64::consts::TAU * sweep.signum();
    }
    if sweep.abs() > std::f64::consts::TAU {
        return None;
    }
    Some(ArcPrim {
        a: arc.a,
        b: arc.b,
        center,
        radius,
        sweep,
    })
}

/// Post-pass: snap junction tangents to G1 where the turn is below the
/// corner threshold (re-fitting the adjacent arcs with a shared tangent);
/// junctions that stay discontinuous are flagged as corners.
fn snap_g1(
    fitted: &mut [FittedPrim],
    pts: &[Point],
    closed: bool,
    cfg: &FitConfig,
    corners: &mut Vec<usize>,
) {
    let m = fitted.len();
    if m == 0 {
        return;
    }
    let junctions = if closed { m } else { m.saturating_sub(1) };
    for _pass in 0..2 {
        for k in 0..junctions {
            if corners.contains(&k) {
                continue;
            }
            let next = (k + 1) % m;
            let t_out = fitted[k].prim.end_tangent();
            let t_in = fitted[next].prim.start_tangent();
            let mismatch = t_out.cross(t_in).atan2(t_out.dot(t_in)).abs();
            if mismatch <= 1e-3 {
                continue;
            }
            if mismatch > cfg.corner_threshold {
                corners.push(k);
                continue;
            }
            let target = match (&fitted[k].prim, &fitted[next].prim) {
                (Primitive::Line(_), Primitive::Line(_)) => {
                    // Straight segments cannot bend; keep the corner.
                    corners.push(k);
                    continue;
                }
                (Primitive::Line(l), _) => (l.b - l.a).normalized(),
                (_, Primitive::Line(l)) => (l.b - l.a).normalized(),
                _ => (t_out + t_in).normalized(),
            };
            let mut ok = true;
            if let Primitive::Arc(arc) = fitted[k].prim {
                ok &= try_refit(&mut fitted[k], &arc, false, target, pts, cfg.tolerance);
            }
            if ok {
                if let Primitive::Arc(arc) = fitted[next].prim {
                    try_refit(&mut fitted[next], &arc, true, target, pts, cfg.tolerance);
                }
            }
            let t_out = fitted[k].prim.end_tangent();
            let t_in = fitted[(k + 1) % m].prim.start_tangent();
            let after = t_out.cross(t_in).atan2(t_out.dot(t_in)).abs();
            if after > 1e-3 {
                corners.push(k);
            }
        }
    }
}

fn try_refit(
    slot: &mut FittedPrim,
    arc: &ArcPrim,
    at_start: bool,
    tangent: Point,
    pts: &[Point],
    tolerance: f64,
) -> bool {
    let Some(new_arc) = refit_arc_with_tangent(arc, at_start, tangent) else {
        return false;
    };
    let span = &pts[slot.span.0..=slot.span.1];
    let res = span
        .iter()
        .map(|&q| Primitive::Arc(new_arc).distance_to(q))
        .fold(0.0, f64::max);
    if res <= tolerance {
        slot.prim = Primitive::Arc(new_arc);
        true
    } else {
        false
    }
}
