//! Parser for the SVG path `d` attribute.
//!
//! Resolves relative commands and the H/V/S/T shorthands into the absolute
//! command set of [`PathCommand`]. Number syntax follows the SVG grammar,
//! including abutting numbers ("30.1.5" is 30.1 then 0.5) and arc flags
//! written without separators.

use crate::geom::Point;
use crate::path::{PathCommand, Subpath};

#[derive(Debug)]
pub struct PathDataError {
    pub offset: usize,
    pub message: String,
}

impl std::fmt::Display for PathDataError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} at offset {}", self.message, self.offset)
    }
}

struct Lexer<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Self {
        Self {
            bytes: s.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && matches!(self.bytes[self.pos], b' ' | b'\t' | b'\n' | b'\r' | b',') {
            self.pos += 1;
        }
    }

    fn skip_ws_no_comma(&mut self) {
        while self.pos < self.bytes.len() && matches!(self.bytes[self.pos], b' ' | b'\t' | b'\n' | b'\r') {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws_no_comma();
        self.bytes.get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.bytes.len()
    }

    fn err(&self, message: impl Into<String>) -> PathDataError {
        PathDataError {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn number(&mut self) -> Result<f64, PathDataError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.bytes.len() && matches!(self.bytes[self.pos], b'+' | b'-') {
            self.pos += 1;
        }
        let mut saw_digit = false;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
            saw_digit = true;
        }
        if self.pos < self.bytes.len() && self.bytes[self.pos] == b'.' {
            self.pos += 1;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
                saw_digit = true;
            }
        }
        if !saw_digit {
            return Err(self.err("expected number"));
        }
        if self.pos < self.bytes.len() && matches!(self.bytes[self.pos], b'e' | b'E') {
            let mark = self.pos;
            self.pos += 1;
            if self.pos < self.bytes.len() && matches!(self.bytes[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            if self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            } else {
                self.pos = mark; // not an exponent after all
            }
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        text.parse::<f64>().map_err(|_| PathDataError {
            offset: start,
            message: format!("invalid number {text:?}"),
        })
    }

    fn flag(&mut self) -> Result<bool, PathDataError> {
        self.skip_ws();
        match self.bytes.get(self.pos) {
            Some(b'0') => {
                self.pos += 1;
                Ok(false)
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(true)
            }
            _ => Err(self.err("expected arc flag 0 or 1")),
        }
    }

    fn pair(&mut self) -> Result<Point, PathDataError> {
        let x = self.number()?;
        let y = self.number()?;
        Ok(Point::new(x, y))
    }
}

/// Parse a `d` attribute into subpaths of absolute commands.
pub fn parse_path_data(d: &str) -> Result<Vec<Subpath>, PathDataError> {
    let mut lex = Lexer::new(d);
    let mut subpaths: Vec<Subpath> = Vec::new();
    let mut commands: Vec<PathCommand> = Vec::new();
    let mut cur = Point::default();
    let mut subpath_start = Point::default();
    let mut closed = false;
    // Reflection anchors for S/T shorthands
    let mut prev_cubic_ctrl: Option<Point> = None;
    let mut prev_quad_ctrl: Option<Point> = None;
    let mut prev_cmd: Option<u8> = None;

    macro_rules! finish_subpath {
        () => {
            if !commands.is_empty() {
                subpaths.push(Subpath {
                    commands: std::mem::take(&mut commands),
                    closed: std::mem::replace(&mut closed, false),
                });
            }
        };
    }

    while !lex.at_end() {
        lex.skip_ws();
        let b = lex.bytes[lex.pos];
        let cmd = if b.is_ascii_alphabetic() {
            lex.pos += 1;
            b
        } else {
            // Implicit repetition of the previous command; implicit pairs
            // after a moveto are lineto.
            match prev_cmd {
                Some(b'M') => b'L',
                Some(b'm') => b'l',
                Some(p) => p,
                None => return Err(lex.err("path data must start with a command")),
            }
        };
        if commands.is_empty() && !matches!(cmd, b'M' | b'm') {
            if subpaths.is_empty() {
                return Err(lex.err("first command must be moveto"));
            }
            // After a closepath the next subpath starts at the previous
            // subpath's initial point.
            commands.push(PathCommand::MoveTo(cur));
        }
        let rel = cmd.is_ascii_lowercase();
        let base = if rel { cur } else { Point::default() };
        match cmd.to_ascii_uppercase() {
            b'M' => {
                finish_subpath!();
                let p = lex.pair()? + base;
                commands.push(PathCommand::MoveTo(p));
                cur = p;
                subpath_start = p;
            }
            b'L' => {
                let p = lex.pair()? + base;
                commands.push(PathCommand::LineTo(p));
                cur = p;
            }
            b'H' => {
                let x = lex.number()?;
                let p = if rel {
                    Point::new(cur.x + x, cur.y)
                } else {
                    Point::new(x, cur.y)
                };
                commands.push(PathCommand::LineTo(p));
                cur = p;
            }
            b'V' => {
                let y = lex.number()?;
                let p = if rel {
                    Point::new(cur.x, cur.y + y)
                } else {
                    Point::new(cur.x, y)
                };
                commands.push(PathCommand::LineTo(p));
                cur = p;
            }
            b'C' => {
                let c1 = lex.pair()? + base;
                let c2 = lex.pair()? + base;
                let p = lex.pair()? + base;
                commands.push(PathCommand::CubicTo(c1, c2, p));
                prev_cubic_ctrl = Some(c2);
                cur = p;
            }
            b'S' => {
                let c1 = match (prev_cmd.map(|c| c.to_ascii_uppercase()), prev_cubic_ctrl) {
                    (Some(b'C') | Some(b'S'), Some(ctrl)) => cur + (cur - ctrl),
                    _ => cur,
                };
                let c2 = lex.pair()? + base;
                let p = lex.pair()? + base;
                commands.push(PathCommand::CubicTo(c1, c2, p));
                prev_cubic_ctrl = Some(c2);
                cur = p;
            }
            b'Q' => {
                let c1 = lex.pair()? + base;
                let p = lex.pair()? + base;
                commands.push(PathCommand::QuadTo(c1, p));
                prev_quad_ctrl = Some(c1);
                cur = p;
            }
            b'T' => {
                let c1 = match (prev_cmd.map(|c| c.to_ascii_uppercase()), prev_quad_ctrl) {
                    (Some(b'Q') | Some(b'T'), Some(ctrl)) => cur + (cur - ctrl),
                    _ => cur,
                };
                let p = lex.pair()? + base;
                commands.push(PathCommand::QuadTo(c1, p));
                prev_quad_ctrl = Some(c1);
                cur = p;
            }
            b'A' => {
                let rx = lex.number()?;
                let ry = lex.number()?;
                let rotation = lex.number()?;
                let large_arc = lex.flag()?;
                let sweep = lex.flag()?;
                let p = lex.pair()? + base;
                commands.push(PathCommand::ArcTo {
                    rx: rx.abs(),
                    ry: ry.abs(),
                    rotation,
                    large_arc,
                    sweep,
                    end: p,
                });
                cur = p;
            }
            b'Z' => {
                commands.push(PathCommand::ClosePath);
                closed = true;
                cur = subpath_start;
                finish_subpath!();
            }
            other => {
                return Err(lex.err(format!("unsupported command {:?}", other as char)));
            }
        }
        if !matches!(cmd.to_ascii_uppercase(), b'C' | b'S') {
            prev_cubic_ctrl = None;
        }
        if !matches!(cmd.to_ascii_uppercase(), b'Q' | b'T') {
            prev_quad_ctrl = None;
        }
        prev_cmd = Some(cmd);
        let _ = lex.peek();
    }
    finish_subpath!();
    for sp in &subpaths {
        for cmd in &sp.commands {
            let finite = match *cmd {
                PathCommand::MoveTo(p) | PathCommand::LineTo(p) => p.is_finite(),
                PathCommand::CubicTo(a, b, p) => a.is_finite() && b.is_finite() && p.is_finite(),
                PathCommand::QuadTo(a, p) => a.is_finite() && p.is_finite(),
                PathCommand::ArcTo { rx, ry, rotation, end, .. } => {
                    rx.is_finite() && ry.is_finite() && rotation.is_finite() && end.is_finite()
                }
                PathCommand::ClosePath => true,
            };
            if !finite {
                return Err(PathDataError {
                    offset: 0,
                    message: "non-finite coordinate in path data".into(),
                });
            }
        }
    }
    Ok(subpaths)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_triangle() {
        let sp = parse_path_data("M 0 0 L 10 0 Z").unwrap();
        assert_eq!(sp.len(), 1);
        assert!(sp[0].closed);
        assert_eq!(
            sp[0].commands,
            vec![
                PathCommand::MoveTo(Point::new(0.0, 0.0)),
                PathCommand::LineTo(Point::new(10.0, 0.0)),
                PathCommand::ClosePath,
            ]
        );
    }

    #[test]
    fn relative_lineto() {
        let sp = parse_path_data("M 1 1 l 5 5").unwrap();
        assert_eq!(
            sp[0].commands[1],
            PathCommand::LineTo(Point::new(6.0, 6.0))
        );
    }

    #[test]
    fn compact_numbers_and_implicit_commands() {
        // From the SVG spec's torture corner: abutting decimals.
        let sp = parse_path_data("M10-20l30.1.5.1-20z").unwrap();
        assert_eq!(
            sp[0].commands,
            vec![
                PathCommand::MoveTo(Point::new(10.0, -20.0)),
                PathCommand::LineTo(Point::new(40.1, -19.5)),
                PathCommand::LineTo(Point::new(40.2, -39.5)),
                PathCommand::ClosePath,
            ]
        );
    }

    #[test]
    fn arc_flags_without_separators() {
        let sp = parse_path_data("M 0 0 a5 5 0 0110 0").unwrap();
        match sp[0].commands[1] {
            PathCommand::ArcTo {
                rx,
                ry,
                large_arc,
                sweep,
                end,
                ..
            } => {
                assert_eq!((rx, ry), (5.0, 5.0));
                assert!(!large_arc && sweep);
                assert_eq!(end, Point::new(10.0, 0.0));
            }
            ref other => panic!("expected arc, got {other:?}"),
        }
    }

    #[test]
    fn shorthand_smooth_cubic() {
        let sp = parse_path_data("M 0 0 C 1 1 2 1 3 0 S 5 -2 6 0").unwrap();
        match sp[0].commands[2] {
            PathCommand::CubicTo(c1, _, _) => {
                // reflection of (2,1) about (3,0)
                assert_eq!(c1, Point::new(4.0, -1.0));
            }
            ref other => panic!("expected cubic, got {other:?}"),
        }
    }

    #[test]
    fn horizontal_vertical() {
        let sp = parse_path_data("M 1 2 H 5 v 3").unwrap();
        assert_eq!(sp[0].commands[1], PathCommand::LineTo(Point::new(5.0, 2.0)));
        assert_eq!(sp[0].commands[2], PathCommand::LineTo(Point::new(5.0, 5.0)));
    }

    #[test]
    fn multiple_subpaths() {
        let sp = parse_path_data("M 0 0 L 1 0 Z M 5 5 L 6 5 L 6 6 Z").unwrap();
        assert_eq!(sp.len(), 2);
        assert!(sp[0].closed && sp[1].closed);
    }

    #[test]
    fn subpath_after_close_without_move() {
        // After Z the pen returns to the subpath start; a following lineto
        // opens a new subpath there.
        let sp = parse_path_data("M 0 0 L 4 0 Z L 2 2").unwrap();
        assert_eq!(sp.len(), 2);
        assert_eq!(sp[1].commands[0], PathCommand::MoveTo(Point::new(0.0, 0.0)));
        assert!(!sp[1].closed);
    }

    #[test]
    fn error_carries_offset() {
        let err = parse_path_data("M 0 0 L x").unwrap_err();
        assert!(err.offset >= 8, "offset = {}", err.offset);
    }

    #[test]
    fn error_on_leading_number() {
        assert!(parse_path_data("10 20").is_err());
    }
}
