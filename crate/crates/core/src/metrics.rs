//! Degree, length, diameter and Randić statistics of a skeleton.

use crate::skeleton::{component_count, PointSet, SkeletonGraph};
use rayon::prelude::*;
use std::collections::{BTreeMap, VecDeque};

/// How the Randić sum runs over the adjacency matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RandicConvention {
    /// One term per undirected edge.
    #[default]
    EdgeSum,
    /// One term per ordered adjacent pair, exactly twice [`RandicConvention::EdgeSum`].
    OrderedPairs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub beta: f64,
    pub nodes: usize,
    pub edges: usize,
    pub average_degree: f64,
    pub degree_histogram: BTreeMap<usize, usize>,
    pub total_edge_length: f64,
    /// Longest shortest path in edges, maximised over components.
    pub diameter_hops: usize,
    /// `diameter_hops + 1`: nodes on that path.
    pub diameter_nodes: usize,
    pub randic_index: f64,
    /// More than one connected component.
    pub disconnected: bool,
}

impl MetricsReport {
    pub const CSV_HEADER: &'static str =
        "beta,nodes,edges,avg_degree,total_length,diam_hops,diam_nodes,randic";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.beta,
            self.nodes,
            self.edges,
            self.average_degree,
            self.total_edge_length,
            self.diameter_hops,
            self.diameter_nodes,
            self.randic_index
        )
    }
}

/// Randić index with the edge-sum convention: the sum over edges of
/// `1 / sqrt(d_i d_j)`.
pub fn randic_index(g: &SkeletonGraph) -> f64 {
    randic_index_with(g, RandicConvention::EdgeSum)
}

pub fn randic_index_with(g: &SkeletonGraph, convention: RandicConvention) -> f64 {
    let sum: f64 = g
        .edges()
        .iter()
        .map(|&(a, b)| 1.0 / ((g.degree(a) * g.degree(b)) as f64).sqrt())
        .sum();
    match convention {
        RandicConvention::EdgeSum => sum,
        RandicConvention::OrderedPairs => 2.0 * sum,
    }
}

fn eccentricity(g: &SkeletonGraph, source: usize, dist: &mut [usize], queue: &mut VecDeque<usize>) -> usize {
    dist.fill(usize::MAX);
    dist[source] = 0;
    queue.clear();
    queue.push_back(source);
    let mut far = 0;
    while let Some(u) = queue.pop_front() {
        let du = dist[u];
        far = far.max(du);
        for &v in g.neighbors(u) {
            if dist[v] == usize::MAX {
                dist[v] = du + 1;
                queue.push_back(v);
            }
        }
    }
    far
}

/// Hop diameter: the largest finite shortest-path length, by breadth-first
/// search from every node.
pub fn diameter_hops(g: &SkeletonGraph) -> usize {
    let n = g.node_count();
    (0..n)
        .into_par_iter()
        .map_init(
            || (vec![usize::MAX; n], VecDeque::new()),
            |(dist, queue), s| eccentricity(g, s, dist, queue),
        )
        .max()
        .unwrap_or(0)
}

pub fn total_edge_length(ps: &PointSet, g: &SkeletonGraph) -> f64 {
    g.edges().iter().map(|&(a, b)| ps.get(a).dist(&ps.get(b))).sum()
}

/// Computes all statistics of `g`, the skeleton of `ps`.
pub fn compute_metrics(ps: &PointSet, g: &SkeletonGraph) -> MetricsReport {
    let nodes = g.node_count();
    let edges = g.edge_count();
    let mut degree_histogram = BTreeMap::new();
    for i in 0..nodes {
        *degree_histogram.entry(g.degree(i)).or_insert(0) += 1;
    }
    let hops = diameter_hops(g);
    MetricsReport {
        beta: g.beta(),
        nodes,
        edges,
        average_degree: if nodes == 0 { 0.0 } else { 2.0 * edges as f64 / nodes as f64 },
        degree_histogram,
        total_edge_length: total_edge_length(ps, g),
        diameter_hops: hops,
        diameter_nodes: if nodes == 0 { 0 } else { hops + 1 },
        randic_index: randic_index(g),
        disconnected: component_count(g) > 1,
    }
}
