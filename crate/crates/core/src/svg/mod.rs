//! SVG 1.1 subset ingestion: `path`, `rect`, `circle`, `ellipse`, `line`,
//! `polyline`, `polygon`, grouped under `g` with translate/scale/rotate/
//! matrix transforms. Shapes are lowered to path commands; fills come from
//! the `fill` attribute or inline `style` (style wins) and inherit through
//! groups.
//!
//! Unsupported features (gradients, clip paths, `use`, text, ...) skip the
//! element and record a warning instead of failing.

mod path_data;

pub use path_data::{parse_path_data, PathDataError};

use crate::color::{parse_color, Rgb};
use crate::geom::{Affine, Point};
use crate::path::{FillRule, PathCommand, PathGeometry, Subpath, ViewBox};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SvgError {
    #[error("XML parse error at byte offset {offset}: {detail}")]
    Xml { offset: usize, detail: String },
    #[error("document has no <svg> root element")]
    NoSvgRoot,
    #[error("cannot determine a viewbox: no viewBox/width/height and no content")]
    NoViewBox,
}

/// One visible geometry element in document order.
#[derive(Debug, Clone)]
pub struct SvgElement {
    pub geometry: PathGeometry,
    pub fill: Option<Rgb>,
    pub index: usize,
}

#[derive(Debug, Clone)]
pub struct SvgScene {
    pub elements: Vec<SvgElement>,
    pub viewbox: ViewBox,
    pub warnings: Vec<String>,
}

/// Parse an SVG document into per-element path geometry.
pub fn parse_svg(text: &str) -> Result<SvgScene, SvgError> {
    let doc = roxmltree::Document::parse(text).map_err(|e| {
        let pos = e.pos();
        // roxmltree reports row/col; recover a byte offset for the contract.
        let offset = text
            .lines()
            .take(pos.row.saturating_sub(1) as usize)
            .map(|l| l.len() + 1)
            .sum::<usize>()
            + pos.col.saturating_sub(1) as usize;
        SvgError::Xml {
            offset,
            detail: e.to_string(),
        }
    })?;
    let root = doc.root_element();
    if root.tag_name().name() != "svg" {
        return Err(SvgError::NoSvgRoot);
    }

    let mut scene = SvgScene {
        elements: Vec::new(),
        viewbox: ViewBox::new(0.0, 0.0, 1.0, 1.0),
        warnings: Vec::new(),
    };
    let inherited = Inherited {
        transform: Affine::IDENTITY,
        fill: Paint::Unset,
        fill_rule: None,
    };
    for child in root.children().filter(|n| n.is_element()) {
        walk(&child, &inherited, &mut scene);
    }

    scene.viewbox = document_viewbox(&root, &scene).ok_or(SvgError::NoViewBox)?;
    for el in &mut scene.elements {
        el.geometry.viewbox = scene.viewbox;
    }
    Ok(scene)
}

#[derive(Clone, Copy)]
enum Paint {
    Unset,
    Color(Rgb),
    None,
    Unsupported,
}

#[derive(Clone)]
struct Inherited {
    transform: Affine,
    fill: Paint,
    fill_rule: Option<FillRule>,
}

fn walk(node: &roxmltree::Node, inherited: &Inherited, scene: &mut SvgScene) {
    let name = node.tag_name().name();
    if node.attribute("display") == Some("none") || node.attribute("visibility") == Some("hidden")
    {
        return;
    }
    if node.attribute("clip-path").is_some() || node.attribute("mask").is_some() {
        scene
            .warnings
            .push(format!("skipped <{name}>: clip-path/mask not supported"));
        return;
    }

    let mut ctx = inherited.clone();
    if let Some(t) = node.attribute("transform") {
        match parse_transform(t) {
            Some(local) => ctx.transform = ctx.transform.then(local),
            None => {
                scene
                    .warnings
                    .push(format!("skipped <{name}>: unsupported transform {t:?}"));
                return;
            }
        }
    }
    let (fill, fill_rule) = resolve_paint(node);
    if let Some(p) = fill {
        ctx.fill = p;
    }
    if fill_rule.is_some() {
        ctx.fill_rule = fill_rule;
    }
    if matches!(ctx.fill, Paint::Unsupported) {
        scene
            .warnings
            .push(format!("skipped <{name}>: unsupported paint (gradient/pattern)"));
        return;
    }

    match name {
        "g" | "svg" => {
            for child in node.children().filter(|n| n.is_element()) {
                walk(&child, &ctx, scene);
            }
        }
        "path" | "rect" | "circle" | "ellipse" | "line" | "polyline" | "polygon" => {
            match lower_element(node, scene) {
                Some(subpaths) if !subpaths.is_empty() => {
                    let geometry = PathGeometry {
                        subpaths,
                        viewbox: ViewBox::new(0.0, 0.0, 1.0, 1.0),
                        fill_rule: ctx.fill_rule.unwrap_or_default(),
                    }
                    .transform(&ctx.transform);
                    let fill = match ctx.fill {
                        Paint::Color(c) => Some(c),
                        _ => None,
                    };
                    let index = scene.elements.len();
                    scene.elements.push(SvgElement {
                        geometry,
                        fill,
                        index,
                    });
                }
                _ => {}
            }
        }
        // Non-rendering containers: nothing to draw, nothing to warn about.
        "defs" | "title" | "desc" | "metadata" | "style" | "linearGradient"
        | "radialGradient" | "pattern" | "clipPath" | "mask" | "filter" | "symbol"
        | "marker" => {}
        other => {
            scene
                .warnings
                .push(format!("skipped unsupported element <{other}>"));
        }
    }
}

fn resolve_paint(node: &roxmltree::Node) -> (Option<Paint>, Option<FillRule>) {
    let mut fill_text = node.attribute("fill").map(str::to_string);
    let mut rule_text = node.attribute("fill-rule").map(str::to_string);
    if let Some(style) = node.attribute("style") {
        for decl in style.split(';') {
            if let Some((key, value)) = decl.split_once(':') {
                match key.trim() {
                    "fill" => fill_text = Some(value.trim().to_string()),
                    "fill-rule" => rule_text = Some(value.trim().to_string()),
                    _ => {}
                }
            }
        }
    }
    let paint = fill_text.map(|t| {
        let t = t.trim().to_string();
        if t == "none" {
            Paint::None
        } else if t.starts_with("url(") {
            Paint::Unsupported
        } else {
            match parse_color(&t) {
                Some(c) => Paint::Color(c),
                None => Paint::Unset, // unknown keyword: fall back to inherit
            }
        }
    });
    let rule = rule_text.and_then(|t| match t.trim() {
        "evenodd" => Some(FillRule::EvenOdd),
        "nonzero" => Some(FillRule::NonZero),
        _ => None,
    });
    (paint, rule)
}

fn lower_element(node: &roxmltree::Node, scene: &mut SvgScene) -> Option<Vec<Subpath>> {
    let name = node.tag_name().name();
    let num = |attr: &str, default: f64| -> f64 {
        node.attribute(attr)
            .and_then(|v| v.trim().parse::<f64>().ok())
            .unwrap_or(default)
    };
    match name {
        "path" => {
            let d = node.attribute("d")?;
            match parse_path_data(d) {
                Ok(subpaths) => Some(subpaths),
                Err(e) => {
                    scene
                        .warnings
                        .push(format!("skipped <path>: bad path data ({e})"));
                    None
                }
            }
        }
        "rect" => {
            let (x, y) = (num("x", 0.0), num("y", 0.0));
            let (w, h) = (num("width", 0.0), num("height", 0.0));
            if w <= 0.0 || h <= 0.0 {
                return None;
            }
            let rx_attr = node.attribute("rx").and_then(|v| v.trim().parse::<f64>().ok());
            let ry_attr = node.attribute("ry").and_then(|v| v.trim().parse::<f64>().ok());
            let (rx, ry) = match (rx_attr, ry_attr) {
                (None, None) => (0.0, 0.0),
                (Some(rx), None) => (rx, rx),
                (None, Some(ry)) => (ry, ry),
                (Some(rx), Some(ry)) => (rx, ry),
            };
            let rx = rx.max(0.0).min(w / 2.0);
            let ry = ry.max(0.0).min(h / 2.0);
            Some(vec![rect_subpath(x, y, w, h, rx, ry)])
        }
        "circle" => {
            let r = num("r", 0.0);
            if r <= 0.0 {
                return None;
            }
            Some(vec![ellipse_subpath(num("cx", 0.0), num("cy", 0.0), r, r)])
        }
        "ellipse" => {
            let (rx, ry) = (num("rx", 0.0), num("ry", 0.0));
            if rx <= 0.0 || ry <= 0.0 {
                return None;
            }
            Some(vec![ellipse_subpath(
                num("cx", 0.0),
                num("cy", 0.0),
                rx,
                ry,
            )])
        }
        "line" => {
            let a = Point::new(num("x1", 0.0), num("y1", 0.0));
            let b = Point::new(num("x2", 0.0), num("y2", 0.0));
            Some(vec![Subpath {
                commands: vec![PathCommand::MoveTo(a), PathCommand::LineTo(b)],
                closed: false,
            }])
        }
        "polyline" | "polygon" => {
            let pts = parse_points(node.attribute("points")?)?;
            if pts.len() < 2 {
                return None;
            }
            let closed = name == "polygon";
            let mut commands = vec![PathCommand::MoveTo(pts[0])];
            commands.extend(pts[1..].iter().map(|p| PathCommand::LineTo(*p)));
            if closed {
                commands.push(PathCommand::ClosePath);
            }
            Some(vec![Subpath { commands, closed }])
        }
        _ => None,
    }
}

fn rect_subpath(x: f64, y: f64, w: f64, h: f64, rx: f64, ry: f64) -> Subpath {
    if rx <= 0.0 || ry <= 0.0 {
        return Subpath {
            commands: vec![
                PathCommand::MoveTo(Point::new(x, y)),
                PathCommand::LineTo(Point::new(x + w, y)),
                PathCommand::LineTo(Point::new(x + w, y + h)),
                PathCommand::LineTo(Point::new(x, y + h)),
                PathCommand::ClosePath,
            ],
            closed: true,
        };
    }
    let arc = |end: Point| PathCommand::ArcTo {
        rx,
        ry,
        rotation: 0.0,
        large_arc: false,
        sweep: true,
        end,
    };
    Subpath {
        commands: vec![
            PathCommand::MoveTo(Point::new(x + rx, y)),
            PathCommand::LineTo(Point::new(x + w - rx, y)),
            arc(Point::new(x + w, y + ry)),
            PathCommand::LineTo(Point::new(x + w, y + h - ry)),
            arc(Point::new(x + w - rx, y + h)),
            PathCommand::LineTo(Point::new(x + rx, y + h)),
            arc(Point::new(x, y + h - ry)),
            PathCommand::LineTo(Point::new(x, y + ry)),
            arc(Point::new(x + rx, y)),
            PathCommand::ClosePath,
        ],
        closed: true,
    }
}

fn ellipse_subpath(cx: f64, cy: f64, rx: f64, ry: f64) -> Subpath {
    let arc = |end: Point| PathCommand::ArcTo {
        rx,
        ry,
        rotation: 0.0,
        large_arc: false,
        sweep: true,
        end,
    };
    Subpath {
        commands: vec![
            PathCommand::MoveTo(Point::new(cx + rx, cy)),
            arc(Point::new(cx, cy + ry)),
            arc(Point::new(cx - rx, cy)),
            arc(Point::new(cx, cy - ry)),
            arc(Point::new(cx + rx, cy)),
            PathCommand::ClosePath,
        ],
        closed: true,
    }
}

fn parse_points(s: &str) -> Option<Vec<Point>> {
    let nums: Vec<f64> = s
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>())
        .collect::<Result<_, _>>()
        .ok()?;
    if nums.len() < 4 || nums.len() % 2 != 0 {
        return None;
    }
    Some(
        nums.chunks_exact(2)
            .map(|c| Point::new(c[0], c[1]))
            .collect(),
    )
}

/// Parse a `transform` attribute. Returns None on any unsupported function.
fn parse_transform(s: &str) -> Option<Affine> {
    let mut result = Affine::IDENTITY;
    let mut rest = s.trim();
    while !rest.is_empty() {
        let open = rest.find('(')?;
        let func = rest[..open].trim();
        let close = rest.find(')')?;
        let args: Vec<f64> = rest[open + 1..close]
            .split(|ch: char| ch.is_whitespace() || ch == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<f64>())
            .collect::<Result<_, _>>()
            .ok()?;
        let local = match (func, args.len()) {
            ("translate", 1) => Affine::translate(args[0], 0.0),
            ("translate", 2) => Affine::translate(args[0], args[1]),
            ("scale", 1) => Affine::scale(args[0], args[0]),
            ("scale", 2) => Affine::scale(args[0], args[1]),
            ("rotate", 1) => Affine::rotate_deg(args[0]),
            ("rotate", 3) => Affine::translate(args[1], args[2])
                .then(Affine::rotate_deg(args[0]))
                .then(Affine::translate(-args[1], -args[2])),
            ("matrix", 6) => Affine {
                a: args[0],
                b: args[1],
                c: args[2],
                d: args[3],
                e: args[4],
                f: args[5],
            },
            _ => return None,
        };
        result = result.then(local);
        rest = rest[close + 1..].trim_start_matches([',', ' ', '\t', '\n', '\r']);
    }
    Some(result)
}

fn document_viewbox(root: &roxmltree::Node, scene: &SvgScene) -> Option<ViewBox> {
    if let Some(vb) = root.attribute("viewBox") {
        let nums: Vec<f64> = vb
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<f64>())
            .collect::<Result<_, _>>()
            .ok()?;
        if nums.len() == 4 && nums[2] > 0.0 && nums[3] > 0.0 {
            return Some(ViewBox::new(nums[0], nums[1], nums[2], nums[3]));
        }
    }
    let dim = |attr: &str| -> Option<f64> {
        let v = root.attribute(attr)?;
        v.trim().trim_end_matches("px").trim().parse::<f64>().ok()
    };
    if let (Some(w), Some(h)) = (dim("width"), dim("height")) {
        if w > 0.0 && h > 0.0 {
            return Some(ViewBox::new(0.0, 0.0, w, h));
        }
    }
    // Last resort: bounding box of the parsed content.
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut grow = |p: &Point| {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    };
    for el in &scene.elements {
        for sp in &el.geometry.subpaths {
            for cmd in &sp.commands {
                match cmd {
                    PathCommand::MoveTo(p) | PathCommand::LineTo(p) => grow(p),
                    PathCommand::CubicTo(a, b, p) => {
                        grow(a);
                        grow(b);
                        grow(p);
                    }
                    PathCommand::QuadTo(a, p) => {
                        grow(a);
                        grow(p);
                    }
                    PathCommand::ArcTo { end, .. } => grow(end),
                    PathCommand::ClosePath => {}
                }
            }
        }
    }
    if lo.x.is_finite() && hi.x > lo.x && hi.y > lo.y {
        return Some(ViewBox::new(lo.x, lo.y, hi.x - lo.x, hi.y - lo.y));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_with_red_fill() {
        let scene =
            parse_svg(r##"<svg viewBox="0 0 10 10"><path d="M 0 0 L 10 0 Z" fill="#ff0000"/></svg>"##)
                .unwrap();
        assert_eq!(scene.elements.len(), 1);
        let el = &scene.elements[0];
        assert_eq!(el.index, 0);
        assert_eq!(el.fill, Some(Rgb::new(255, 0, 0)));
        assert_eq!(
            el.geometry.subpaths[0].commands,
            vec![
                PathCommand::MoveTo(Point::new(0.0, 0.0)),
                PathCommand::LineTo(Point::new(10.0, 0.0)),
                PathCommand::ClosePath,
            ]
        );
    }

    #[test]
    fn rect_lowering() {
        let scene =
            parse_svg(r#"<svg viewBox="0 0 4 4"><rect x="1" y="1" width="2" height="2"/></svg>"#)
                .unwrap();
        assert_eq!(
            scene.elements[0].geometry.subpaths[0].commands,
            vec![
                PathCommand::MoveTo(Point::new(1.0, 1.0)),
                PathCommand::LineTo(Point::new(3.0, 1.0)),
                PathCommand::LineTo(Point::new(3.0, 3.0)),
                PathCommand::LineTo(Point::new(1.0, 3.0)),
                PathCommand::ClosePath,
            ]
        );
    }

    #[test]
    fn malformed_xml_reports_offset() {
        let err = parse_svg("<svg viewBox=\"0 0 1 1\"><path d=\"M 0 0\"</svg>").unwrap_err();
        match err {
            SvgError::Xml { offset, .. } => assert!(offset > 0),
            other => panic!("expected Xml error, got {other}"),
        }
    }

    #[test]
    fn unsupported_element_warns_and_continues() {
        let scene = parse_svg(
            r##"<svg viewBox="0 0 10 10"><use href="#x"/><rect width="2" height="2"/></svg>"##,
        )
        .unwrap();
        assert_eq!(scene.elements.len(), 1);
        assert_eq!(scene.warnings.len(), 1);
        assert!(scene.warnings[0].contains("use"));
    }

    #[test]
    fn group_transform_applies() {
        let scene = parse_svg(
            r#"<svg viewBox="0 0 20 20"><g transform="translate(5 5) scale(2)"><rect width="2" height="2"/></g></svg>"#,
        )
        .unwrap();
        match scene.elements[0].geometry.subpaths[0].commands[2] {
            PathCommand::LineTo(p) => assert_eq!(p, Point::new(9.0, 9.0)),
            ref other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn style_wins_over_fill_attr() {
        let scene = parse_svg(
            r#"<svg viewBox="0 0 4 4"><rect width="2" height="2" fill="red" style="fill: blue"/></svg>"#,
        )
        .unwrap();
        assert_eq!(scene.elements[0].fill, Some(Rgb::new(0, 0, 255)));
    }

    #[test]
    fn fill_inherits_through_groups() {
        let scene = parse_svg(
            r#"<svg viewBox="0 0 4 4"><g fill="lime"><rect width="2" height="2"/></g></svg>"#,
        )
        .unwrap();
        assert_eq!(scene.elements[0].fill, Some(Rgb::new(0, 255, 0)));
    }

    #[test]
    fn gradient_paint_skips_element() {
        let scene = parse_svg(
            r##"<svg viewBox="0 0 4 4"><rect width="2" height="2" fill="url(#g)"/><circle r="1" cx="2" cy="2"/></svg>"##,
        )
        .unwrap();
        assert_eq!(scene.elements.len(), 1);
        assert!(scene.warnings.iter().any(|w| w.contains("gradient")));
    }

    #[test]
    fn circle_lowering_stays_on_circle() {
        let scene =
            parse_svg(r#"<svg viewBox="0 0 20 20"><circle cx="10" cy="10" r="5"/></svg>"#)
                .unwrap();
        let samples =
            crate::path::sample_equidistant(&scene.elements[0].geometry, 0.25).unwrap();
        for p in &samples[0].points {
            assert!((p.distance(Point::new(10.0, 10.0)) - 5.0).abs() < 1e-9);
        }
    }

    #[test]
    fn viewbox_fallback_to_width_height() {
        let scene =
            parse_svg(r#"<svg width="30px" height="20"><rect width="2" height="2"/></svg>"#)
                .unwrap();
        assert_eq!(scene.viewbox, ViewBox::new(0.0, 0.0, 30.0, 20.0));
    }
}
