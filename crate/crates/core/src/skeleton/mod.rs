//! Beta-skeleton construction over planar point sets.

mod incremental;
mod index;
pub mod io;

pub use incremental::{insert_point, InsertionDelta};
pub(crate) use incremental::{delta_with_index, edge_to_new_is_free, removed_by};
pub use index::{default_cell_size, GridIndex};

use crate::error::{Error, Result};
use crate::geometry::{check_beta, strip_contains_unchecked, LuneTest, Point, Tolerance};
use rayon::prelude::*;
use std::collections::HashMap;
use std::collections::VecDeque;

/// An ordered set of distinct points; a point's id is its position.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointSet {
    points: Vec<Point>,
}

fn coord_key(p: &Point) -> (u64, u64) {
    // adding 0.0 folds -0.0 into 0.0
    ((p.x + 0.0).to_bits(), (p.y + 0.0).to_bits())
}

impl PointSet {
    /// Builds a point set, rejecting non-finite coordinates and duplicates.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let mut seen: HashMap<(u64, u64), usize> = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::NonFinite { x: p.x, y: p.y });
            }
            if let Some(&first) = seen.get(&coord_key(p)) {
                return Err(Error::DuplicatePoint { first, second: i });
            }
            seen.insert(coord_key(p), i);
        }
        Ok(PointSet { points })
    }

    pub fn empty() -> Self {
        PointSet { points: Vec::new() }
    }

    /// The `m x m` integer lattice `{0..m} x {0..m}`, row by row.
    pub fn grid(m: usize) -> Self {
        let mut points = Vec::with_capacity(m * m);
        for y in 0..m {
            for x in 0..m {
                points.push(Point::new(x as f64, y as f64));
            }
        }
        PointSet { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn get(&self, id: usize) -> Point {
        self.points[id]
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    /// Index of a point with exactly these coordinates.
    pub fn position(&self, p: &Point) -> Option<usize> {
        self.points.iter().position(|q| q.coincides(p))
    }

    /// A copy with `p` appended as the next id.
    pub fn with_point(&self, p: Point) -> Result<PointSet> {
        if !p.is_finite() {
            return Err(Error::NonFinite { x: p.x, y: p.y });
        }
        if self.position(&p).is_some() {
            return Err(Error::CoincidentPoints(p));
        }
        let mut points = self.points.clone();
        points.push(p);
        Ok(PointSet { points })
    }

    pub(crate) fn push_unchecked(&mut self, p: Point) -> usize {
        self.points.push(p);
        self.points.len() - 1
    }

    /// Axis-aligned bounds, `None` when empty.
    pub fn bounds(&self) -> Option<(Point, Point)> {
        let first = self.points.first()?;
        let mut lo = *first;
        let mut hi = *first;
        for p in &self.points[1..] {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        Some((lo, hi))
    }

    /// Smallest pairwise distance, `None` for fewer than two points.
    pub fn min_separation(&self) -> Option<f64> {
        if self.len() < 2 {
            return None;
        }
        let idx = GridIndex::with_default_cell(self).ok()?;
        (0..self.len())
            .filter_map(|i| idx.nearest(&self.points[i], Some(i)).map(|(_, d)| d))
            .min_by(f64::total_cmp)
    }
}

/// The beta-skeleton of a point set: undirected, no loops, no multi-edges.
#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonGraph {
    beta: f64,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl SkeletonGraph {
    /// Builds a graph from an edge list. Pairs are normalized to `i < j`,
    /// sorted and deduplicated.
    pub fn from_edges(
        n: usize,
        beta: f64,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut list = Vec::new();
        for (a, b) in edges {
            for id in [a, b] {
                if id >= n {
                    return Err(Error::NodeOutOfRange { id, n });
                }
            }
            if a == b {
                return Err(Error::InvalidConfig(format!("self-loop on node {a}")));
            }
            list.push((a.min(b), a.max(b)));
        }
        Ok(Self::from_normalized(n, beta, list))
    }

    fn from_normalized(n: usize, beta: f64, mut edges: Vec<(usize, usize)>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        SkeletonGraph {
            beta,
            edges,
            adjacency,
        }
    }

    pub fn empty(n: usize, beta: f64) -> Self {
        Self::from_normalized(n, beta, Vec::new())
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, id: usize) -> &[usize] {
        &self.adjacency[id]
    }

    pub fn degree(&self, id: usize) -> usize {
        self.adjacency[id].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.adjacency.len() && self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Applies an insertion delta, producing the graph over one more node.
    pub fn apply(&self, delta: &InsertionDelta) -> Result<SkeletonGraph> {
        if delta.new_point_id != self.node_count() {
            return Err(Error::InvalidConfig(format!(
                "delta inserts node {} into a graph with {} nodes",
                delta.new_point_id,
                self.node_count()
            )));
        }
        let n = self.node_count() + 1;
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .copied()
            .filter(|e| delta.removed_edges.binary_search(e).is_err())
            .collect();
        edges.extend(delta.added_edges.iter().copied());
        Ok(Self::from_normalized(n, self.beta, edges))
    }
}

fn build_with<F>(ps: &PointSet, blocked: F) -> Vec<(usize, usize)>
where
    F: Fn(usize, usize) -> bool + Sync,
{
    let n = ps.len();
    (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let blocked = &blocked;
            (i + 1..n).filter(move |&j| !blocked(i, j)).map(move |j| (i, j))
        })
        .collect()
}

/// Exact beta-skeleton by testing every third point against every pair.
pub fn build_naive(ps: &PointSet, beta: f64) -> Result<SkeletonGraph> {
    build_naive_tol(ps, beta, Tolerance::EXACT)
}

/// [`build_naive`] with an explicit tolerance.
pub fn build_naive_tol(ps: &PointSet, beta: f64, tol: Tolerance) -> Result<SkeletonGraph> {
    check_beta(beta)?;
    let pts = ps.points();
    let edges = build_with(ps, |i, j| {
        let t = LuneTest::new_unchecked(pts[i], pts[j], beta, tol);
        pts.iter().any(|x| t.contains(x))
    });
    Ok(SkeletonGraph::from_normalized(ps.len(), beta, edges))
}

/// Beta-skeleton with witnesses pruned through `idx`. Produces the same edge
/// set as [`build_naive`].
pub fn build_indexed(ps: &PointSet, beta: f64, idx: &GridIndex) -> Result<SkeletonGraph> {
    check_beta(beta)?;
    if !idx.indexes(ps) {
        return Err(Error::StaleIndex);
    }
    let pts = ps.points();
    let edges = build_with(ps, |i, j| {
        let t = LuneTest::new_unchecked(pts[i], pts[j], beta, Tolerance::EXACT);
        idx.lune_witness(&t, None).is_some()
    });
    Ok(SkeletonGraph::from_normalized(ps.len(), beta, edges))
}

/// Retests only the edges of `coarser` at a larger beta. Valid because lunes
/// grow with beta, so no pair blocked at the smaller beta can reappear.
pub fn refine_to_beta(
    ps: &PointSet,
    coarser: &SkeletonGraph,
    beta: f64,
    idx: &GridIndex,
) -> Result<SkeletonGraph> {
    check_beta(beta)?;
    if beta < coarser.beta() {
        return Err(Error::InvalidConfig(format!(
            "cannot refine a beta={} skeleton down to beta={beta}",
            coarser.beta()
        )));
    }
    if !idx.indexes(ps) || coarser.node_count() != ps.len() {
        return Err(Error::StaleIndex);
    }
    let pts = ps.points();
    let edges: Vec<(usize, usize)> = coarser
        .edges()
        .par_iter()
        .copied()
        .filter(|&(i, j)| {
            let t = LuneTest::new_unchecked(pts[i], pts[j], beta, Tolerance::EXACT);
            idx.lune_witness(&t, None).is_none()
        })
        .collect();
    Ok(SkeletonGraph::from_normalized(ps.len(), beta, edges))
}

/// Connectivity criteria for skeletons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConnectivityMode {
    /// A single connected component.
    #[default]
    PathConnected,
    /// Every node has at least one incident edge.
    NoIsolatedNodes,
}

impl std::str::FromStr for ConnectivityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "path-connected" => Ok(ConnectivityMode::PathConnected),
            "no-isolated-nodes" => Ok(ConnectivityMode::NoIsolatedNodes),
            other => Err(Error::InvalidConfig(format!(
                "unknown connectivity mode '{other}' (expected path-connected or no-isolated-nodes)"
            ))),
        }
    }
}

impl std::fmt::Display for ConnectivityMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ConnectivityMode::PathConnected => "path-connected",
            ConnectivityMode::NoIsolatedNodes => "no-isolated-nodes",
        })
    }
}

/// Number of connected components (0 for the empty graph).
pub fn component_count(g: &SkeletonGraph) -> usize {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    count
}

/// Connectivity under `mode`. A graph with at most one node is connected.
pub fn is_connected(g: &SkeletonGraph, mode: ConnectivityMode) -> bool {
    if g.node_count() <= 1 {
        return true;
    }
    match mode {
        ConnectivityMode::PathConnected => component_count(g) == 1,
        ConnectivityMode::NoIsolatedNodes => (0..g.node_count()).all(|i| g.degree(i) > 0),
    }
}

/// Skeleton obtained with the limit strip in place of the lune: the edges
/// that survive every beta.
pub fn build_limit(ps: &PointSet) -> SkeletonGraph {
    let pts = ps.points();
    let edges = build_with(ps, |i, j| {
        pts.iter()
            .enumerate()
            .any(|(k, x)| k != i && k != j && strip_contains_unchecked(&pts[i], &pts[j], x))
    });
    SkeletonGraph::from_normalized(ps.len(), f64::INFINITY, edges)
}

/// First `(a, b, x)` where `(a, b)` is a Gabriel edge and `x` lies in its
/// limit strip, or `None` if the skeleton is stable.
pub fn stability_violation(ps: &PointSet) -> Result<Option<(usize, usize, usize)>> {
    let gabriel = build_indexed(ps, 1.0, &GridIndex::with_default_cell(ps)?)?;
    let pts = ps.points();
    Ok(gabriel.edges().iter().find_map(|&(a, b)| {
        pts.iter()
            .enumerate()
            .find(|&(k, x)| k != a && k != b && strip_contains_unchecked(&pts[a], &pts[b], x))
            .map(|(k, _)| (a, b, k))
    }))
}

/// Whether every Gabriel edge of `ps` survives as beta grows without bound.
pub fn is_stable(ps: &PointSet) -> Result<bool> {
    Ok(stability_violation(ps)?.is_none())
}

#[cfg(test)]
mod tests;
