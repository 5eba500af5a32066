//! Plain-text point and edge files.
//!
//! Points: one `x y` pair per line. Edges: one `i j` pair of node ids per
//! line, `i < j`, sorted. Both formats allow blank lines and `#` comments.

use super::{PointSet, SkeletonGraph};
use crate::error::{Error, Result};
use crate::geometry::Point;
use std::fmt::Write as _;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

fn parse_err(source_name: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        source_name: source_name.to_string(),
        line,
        message: message.into(),
    }
}

fn two_fields<'a>(source_name: &str, line: usize, body: &'a str) -> Result<(&'a str, &'a str)> {
    let mut it = body.split_whitespace();
    match (it.next(), it.next(), it.next()) {
        (Some(a), Some(b), None) => Ok((a, b)),
        _ => Err(parse_err(source_name, line, format!("expected two fields, got '{body}'"))),
    }
}

/// Parses a point file. `source_name` labels error messages.
pub fn parse_points(text: &str, source_name: &str) -> Result<PointSet> {
    let mut points = Vec::new();
    for (line, body) in content_lines(text) {
        let (a, b) = two_fields(source_name, line, body)?;
        let coord = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| parse_err(source_name, line, format!("bad coordinate '{s}': {e}")))
        };
        let (x, y) = (coord(a)?, coord(b)?);
        let p = Point::try_new(x, y).map_err(|e| parse_err(source_name, line, e.to_string()))?;
        points.push(p);
    }
    PointSet::new(points).map_err(|e| match e {
        Error::DuplicatePoint { first, second } => parse_err(
            source_name,
            0,
            format!("duplicate point: entries {first} and {second} coincide"),
        ),
        other => other,
    })
}

/// Writes points with shortest round-trip formatting, preceded by optional
/// `#` comment lines.
pub fn write_points(ps: &PointSet, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    for p in ps.iter() {
        let _ = writeln!(out, "{} {}", p.x, p.y);
    }
    out
}

/// Parses an edge file into id pairs as written.
pub fn parse_edges(text: &str, source_name: &str) -> Result<Vec<(usize, usize)>> {
    content_lines(text)
        .map(|(line, body)| {
            let (a, b) = two_fields(source_name, line, body)?;
            let id = |s: &str| {
                s.parse::<usize>()
                    .map_err(|e| parse_err(source_name, line, format!("bad node id '{s}': {e}")))
            };
            Ok((id(a)?, id(b)?))
        })
        .collect()
}

pub fn write_edges(g: &SkeletonGraph) -> String {
    let mut out = String::with_capacity(g.edge_count() * 10);
    for &(a, b) in g.edges() {
        let _ = writeln!(out, "{a} {b}");
    }
    out
}
