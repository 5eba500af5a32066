//! SVG drawings of point sets and their skeletons.

use crate::error::{Error, Result};
use crate::skeleton::{PointSet, SkeletonGraph};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub struct RenderStyle {
    pub node_radius: f64,
    pub edge_width: f64,
    pub canvas_padding: f64,
    pub node_fill: String,
    pub edge_stroke: String,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            node_radius: 2.5,
            edge_width: 1.0,
            canvas_padding: 10.0,
            node_fill: "black".into(),
            edge_stroke: "black".into(),
        }
    }
}

fn valid_color(c: &str) -> bool {
    match c.strip_prefix('#') {
        Some(hex) => matches!(hex.len(), 3 | 4 | 6 | 8) && hex.chars().all(|ch| ch.is_ascii_hexdigit()),
        None => !c.is_empty() && c.chars().all(|ch| ch.is_ascii_alphabetic()),
    }
}

impl RenderStyle {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")))
            }
        };
        positive("node_radius", self.node_radius)?;
        positive("edge_width", self.edge_width)?;
        if !(self.canvas_padding >= 0.0 && self.canvas_padding.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "canvas_padding must be non-negative, got {}",
                self.canvas_padding
            )));
        }
        for c in [&self.node_fill, &self.edge_stroke] {
            if !valid_color(c) {
                return Err(Error::InvalidConfig(format!(
                    "'{c}' is not a color name or #hex value"
                )));
            }
        }
        Ok(())
    }
}

/// Draws one `<line>` per edge under one `<circle>` per node. The y axis is
/// flipped so larger y is drawn higher.
pub fn render_svg(ps: &PointSet, g: &SkeletonGraph, style: &RenderStyle) -> Result<String> {
    style.validate()?;
    if g.node_count() != ps.len() {
        return Err(Error::InvalidConfig(format!(
            "graph has {} nodes but the point set has {}",
            g.node_count(),
            ps.len()
        )));
    }
    let pad = style.canvas_padding + style.node_radius;
    let (lo, hi) = ps.bounds().unwrap_or_default();
    let width = if ps.is_empty() { 2.0 * style.canvas_padding } else { hi.x - lo.x + 2.0 * pad };
    let height = if ps.is_empty() { 2.0 * style.canvas_padding } else { hi.y - lo.y + 2.0 * pad };
    let sx = |x: f64| x - lo.x + pad;
    let sy = |y: f64| hi.y - y + pad;

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.3}\" height=\"{height:.3}\" viewBox=\"0 0 {width:.3} {height:.3}\">"
    );
    let _ = writeln!(
        out,
        "<g stroke=\"{}\" stroke-width=\"{:.3}\" stroke-linecap=\"round\">",
        style.edge_stroke, style.edge_width
    );
    for &(a, b) in g.edges() {
        let (p, q) = (ps.get(a), ps.get(b));
        let _ = writeln!(
            out,
            "<line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\"/>",
            sx(p.x),
            sy(p.y),
            sx(q.x),
            sy(q.y)
        );
    }
    out.push_str("</g>\n");
    let _ = writeln!(out, "<g fill=\"{}\">", style.node_fill);
    for p in ps.iter() {
        let _ = writeln!(
            out,
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\"/>",
            sx(p.x),
            sy(p.y),
            style.node_radius
        );
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::skeleton::build_naive;

    fn counts(svg: &str) -> (usize, usize) {
        (svg.matches("<circle ").count(), svg.matches("<line ").count())
    }

    fn render(ps: &PointSet, beta: f64) -> String {
        render_svg(ps, &build_naive(ps, beta).unwrap(), &RenderStyle::default()).unwrap()
    }

    #[test]
    fn element_counts() {
        let one = PointSet::new(vec![Point::new(3.0, 3.0)]).unwrap();
        assert_eq!(counts(&render(&one, 1.0)), (1, 0));
        let three = PointSet::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(2.0, 0.0)]).unwrap();
        assert_eq!(counts(&render(&three, 1.0)), (3, 2));
        assert_eq!(counts(&render(&PointSet::grid(5), 2.0)), (25, 40));
    }

    #[test]
    fn empty_set_is_valid_svg() {
        let svg = render(&PointSet::empty(), 1.0);
        assert!(svg.contains("<svg ") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(counts(&svg), (0, 0));
    }

    #[test]
    fn y_axis_flipped() {
        let ps = PointSet::new(vec![Point::new(0.0, 0.0), Point::new(0.0, 10.0)]).unwrap();
        let svg = render(&ps, 1.0);
        // the higher point is drawn at the smaller image y
        assert!(svg.contains("<circle cx=\"12.500\" cy=\"22.500\""));
        assert!(svg.contains("<circle cx=\"12.500\" cy=\"12.500\""));
        assert!(svg.contains("width=\"25.000\" height=\"35.000\""));
    }

    #[test]
    fn deterministic_and_validated() {
        let ps = PointSet::grid(4);
        assert_eq!(render(&ps, 3.0), render(&ps, 3.0));
        let g = build_naive(&ps, 1.0).unwrap();
        let bad = RenderStyle { node_fill: "red\"/><script".into(), ..Default::default() };
        assert!(render_svg(&ps, &g, &bad).is_err());
        let hex = RenderStyle { edge_stroke: "#a0B1c2".into(), ..Default::default() };
        assert!(render_svg(&ps, &g, &hex).is_ok());
        assert!(render_svg(&PointSet::grid(2), &g, &RenderStyle::default()).is_err());
    }
}
