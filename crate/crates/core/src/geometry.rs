//! Planar predicates for beta-lunes and their half-plane strip limit.
//!
//! A lune for the pair `(p, q)` and `beta >= 1` is the intersection of two
//! discs of radius `beta * |p - q| / 2` centered at the affine combinations
//! `(1 - beta/2) p + (beta/2) q` and `(beta/2) p + (1 - beta/2) q`. Membership
//! is strict: points on the lune boundary are outside.
//!
//! Disc membership is evaluated as a squared-distance difference expressed
//! relative to the pair midpoint. With `u = q - p`, `v = x - m` and
//! `d2 = |u|^2`, the two disc tests collapse into
//!
//! ```text
//! |x - c|^2 - R^2 = |v|^2 + (beta - 1) |v . u| - (2 beta - 1) d2 / 4
//! ```
//!
//! for the farther of the two centers. This is algebraically identical to
//! comparing against each center but never forms the (possibly huge) center
//! coordinates, so integer lattices stay exact even at `beta = 1e6`.

use crate::error::{Error, Result};
use std::fmt;

/// A position in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Builds a point, rejecting NaN and infinite coordinates.
    pub fn try_new(x: f64, y: f64) -> Result<Self> {
        let p = Point { x, y };
        if p.is_finite() {
            Ok(p)
        } else {
            Err(Error::NonFinite { x, y })
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dist2(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.dist2(other).sqrt()
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    /// Exact coordinate equality, with `0.0 == -0.0`.
    pub fn coincides(&self, other: &Point) -> bool {
        self.x == other.x && self.y == other.y
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Whether points on the lune boundary block an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// Boundary points count as inside. On a square lattice the diagonal of
    /// a unit cell has its two other corners on the Gabriel circle, so this
    /// is what keeps the lattice skeleton at its 4-neighbour edges.
    #[default]
    Closed,
    /// Only interior points block.
    Open,
}

/// Boundary convention plus an absolute slack applied to squared-distance
/// comparisons.
///
/// A positive `eps` shrinks the lune, so near-boundary points stop blocking
/// edges.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Tolerance {
    pub eps: f64,
    pub boundary: Boundary,
}

impl Tolerance {
    pub const EXACT: Tolerance = Tolerance { eps: 0.0, boundary: Boundary::Closed };
    pub const OPEN: Tolerance = Tolerance { eps: 0.0, boundary: Boundary::Open };

    pub fn new(eps: f64) -> Result<Self> {
        if eps >= 0.0 && eps.is_finite() {
            Ok(Tolerance { eps, boundary: Boundary::Closed })
        } else {
            Err(Error::InvalidConfig(format!(
                "tolerance must be a finite non-negative number, got {eps}"
            )))
        }
    }

    pub fn with_boundary(self, boundary: Boundary) -> Self {
        Tolerance { boundary, ..self }
    }
}

/// The two discs whose intersection is the beta-neighbourhood of a pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lune {
    pub c1: Point,
    pub c2: Point,
    pub radius: f64,
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    // NaN fails the comparison as well
    if beta >= 1.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::UnsupportedBeta(beta))
    }
}

fn check_pair(p: &Point, q: &Point) -> Result<()> {
    if p.coincides(q) {
        Err(Error::CoincidentPoints(*p))
    } else {
        Ok(())
    }
}

/// Returns the lune of `(p, q)` at `beta`.
pub fn lune_of(p: Point, q: Point, beta: f64) -> Result<Lune> {
    check_pair(&p, &q)?;
    check_beta(beta)?;
    let a = 1.0 - beta / 2.0;
    let b = beta / 2.0;
    Ok(Lune {
        c1: Point::new(a * p.x + b * q.x, a * p.y + b * q.y),
        c2: Point::new(b * p.x + a * q.x, b * p.y + a * q.y),
        radius: b * p.dist(&q),
    })
}

/// A lune predicate with the per-pair quantities precomputed.
///
/// Used on the hot paths of skeleton construction, where one pair is tested
/// against many witnesses.
#[derive(Debug, Clone, Copy)]
pub struct LuneTest {
    p: Point,
    q: Point,
    mid: Point,
    ux: f64,
    uy: f64,
    beta_m1: f64,
    threshold: f64,
    closed: bool,
}

impl LuneTest {
    /// Unchecked constructor: callers guarantee `p != q` and a valid beta.
    pub(crate) fn new_unchecked(p: Point, q: Point, beta: f64, tol: Tolerance) -> Self {
        let ux = q.x - p.x;
        let uy = q.y - p.y;
        let d2 = ux * ux + uy * uy;
        LuneTest {
            p,
            q,
            mid: p.midpoint(&q),
            ux,
            uy,
            beta_m1: beta - 1.0,
            threshold: (2.0 * beta - 1.0) * d2 / 4.0 - tol.eps,
            closed: tol.boundary == Boundary::Closed,
        }
    }

    pub fn new(p: Point, q: Point, beta: f64, tol: Tolerance) -> Result<Self> {
        check_pair(&p, &q)?;
        check_beta(beta)?;
        Ok(Self::new_unchecked(p, q, beta, tol))
    }

    pub fn contains(&self, x: &Point) -> bool {
        if x.coincides(&self.p) || x.coincides(&self.q) {
            return false;
        }
        let vx = x.x - self.mid.x;
        let vy = x.y - self.mid.y;
        let along = (vx * self.ux + vy * self.uy).abs();
        let g = vx * vx + vy * vy + self.beta_m1 * along;
        if self.closed {
            g <= self.threshold
        } else {
            g < self.threshold
        }
    }

    pub fn midpoint(&self) -> Point {
        self.mid
    }

    /// Axis-aligned box enclosing the lune: the rectangle spanned by the
    /// segment `pq` and the half-width `|pq| sqrt(2 beta - 1) / 2` reached on
    /// the perpendicular bisector.
    pub fn bounding_box(&self) -> (Point, Point) {
        let d = (self.ux * self.ux + self.uy * self.uy).sqrt();
        let beta = self.beta_m1 + 1.0;
        let half_width = 0.5 * d * (2.0 * beta - 1.0).sqrt();
        let half_len = 0.5 * d;
        // unit direction components
        let (ex, ey) = (self.ux.abs() / d, self.uy.abs() / d);
        let hx = half_len * ex + half_width * ey;
        let hy = half_len * ey + half_width * ex;
        (
            Point::new(self.mid.x - hx, self.mid.y - hy),
            Point::new(self.mid.x + hx, self.mid.y + hy),
        )
    }
}

/// Whether `x` lies in the lune of `(p, q)` at `beta`, with the boundary
/// handled as `tol` says.
///
/// Endpoints are never inside their own lune.
pub fn lune_contains(p: Point, q: Point, beta: f64, x: Point, tol: Tolerance) -> Result<bool> {
    Ok(LuneTest::new(p, q, beta, tol)?.contains(&x))
}

/// Whether `x` lies strictly inside the open strip bounded by the lines
/// through `a` and `b` perpendicular to the segment `ab`.
///
/// This is the lune of `(a, b)` as beta grows without bound.
pub fn limit_strip_contains(a: Point, b: Point, x: Point) -> Result<bool> {
    check_pair(&a, &b)?;
    Ok(strip_contains_unchecked(&a, &b, &x))
}

pub(crate) fn strip_contains_unchecked(a: &Point, b: &Point, x: &Point) -> bool {
    let ux = b.x - a.x;
    let uy = b.y - a.y;
    let t = (x.x - a.x) * ux + (x.y - a.y) * uy;
    0.0 < t && t < ux * ux + uy * uy
}
