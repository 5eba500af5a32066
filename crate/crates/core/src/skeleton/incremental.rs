use super::{GridIndex, PointSet, SkeletonGraph};
use crate::error::{Error, Result};
use crate::geometry::{check_beta, LuneTest, Point, Tolerance};
use rayon::prelude::*;

/// Edge changes caused by inserting one point into a skeleton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InsertionDelta {
    pub new_point_id: usize,
    /// Pairs `(q, new_point_id)`, sorted.
    pub added_edges: Vec<(usize, usize)>,
    /// Previous edges whose lune contains the new point, sorted.
    pub removed_edges: Vec<(usize, usize)>,
}

/// Edges of `g` whose lune contains `p`.
pub(crate) fn removed_by(g: &SkeletonGraph, pts: &[Point], beta: f64, p: &Point) -> Vec<(usize, usize)> {
    g.edges()
        .iter()
        .copied()
        .filter(|&(a, b)| LuneTest::new_unchecked(pts[a], pts[b], beta, Tolerance::EXACT).contains(p))
        .collect()
}

/// Whether the lune of `(p, q)` holds none of the indexed points. `p` itself
/// is not indexed.
pub(crate) fn edge_to_new_is_free(idx: &GridIndex, q: usize, p: &Point, beta: f64) -> bool {
    let t = LuneTest::new_unchecked(*p, idx.point(q), beta, Tolerance::EXACT);
    idx.lune_witness(&t, Some(q)).is_none()
}

pub(crate) fn delta_with_index(
    g: &SkeletonGraph,
    idx: &GridIndex,
    pts: &[Point],
    beta: f64,
    p: &Point,
) -> InsertionDelta {
    let new_id = pts.len();
    let removed_edges = removed_by(g, pts, beta, p);
    let added_edges = (0..pts.len())
        .into_par_iter()
        .filter(|&q| edge_to_new_is_free(idx, q, p, beta))
        .map(|q| (q, new_id))
        .collect();
    InsertionDelta {
        new_point_id: new_id,
        added_edges,
        removed_edges,
    }
}

/// Computes how the skeleton of `ps` at `beta` changes when `p` is added.
///
/// `g` must be the skeleton of `ps` at `beta`. The result applied to `g`
/// equals the skeleton of `ps` with `p` appended.
pub fn insert_point(g: &SkeletonGraph, ps: &PointSet, beta: f64, p: Point) -> Result<InsertionDelta> {
    check_beta(beta)?;
    if !p.is_finite() {
        return Err(Error::NonFinite { x: p.x, y: p.y });
    }
    if g.node_count() != ps.len() || g.beta() != beta {
        return Err(Error::InvalidConfig(format!(
            "graph (n={}, beta={}) is not the skeleton of the given set (n={}, beta={beta})",
            g.node_count(),
            g.beta(),
            ps.len()
        )));
    }
    if ps.position(&p).is_some() {
        return Err(Error::CoincidentPoints(p));
    }
    let idx = GridIndex::with_default_cell(ps)?;
    Ok(delta_with_index(g, &idx, ps.points(), beta, &p))
}
