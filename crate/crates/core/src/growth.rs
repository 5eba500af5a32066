//! Growth of point sets whose beta-skeleton stays connected.
//!
//! Candidates are visited on a polar spiral around a seed point: the angle
//! advances by `dtheta` degrees and, once a full turn is reached, wraps to
//! zero while the radius advances by `dr`. A candidate is kept when it is
//! farther than `delta` from every existing point and the skeleton of the
//! enlarged set is still connected.

use crate::error::{Error, Result};
use crate::geometry::{check_beta, Point};
use crate::skeleton::{delta_with_index, edge_to_new_is_free, removed_by};
use crate::skeleton::{is_connected, ConnectivityMode, GridIndex, InsertionDelta, PointSet, SkeletonGraph};
use std::fmt;
use std::ops::ControlFlow;

/// Parameters of the spiral growth procedure.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthConfig {
    pub seed: Point,
    pub beta: f64,
    /// Radius of the first ring.
    pub r0: f64,
    /// Radius increment per full turn.
    pub dr: f64,
    /// Angular increment in degrees.
    pub dtheta: f64,
    /// Minimum separation: a candidate within `delta` of a point is rejected.
    pub delta: f64,
    /// Growth stops once the ring radius exceeds this.
    pub r_max: f64,
    pub connectivity_mode: ConnectivityMode,
    /// Reject any candidate that would remove an existing edge, even when
    /// connectivity survives.
    pub strict: bool,
}

impl Default for GrowthConfig {
    fn default() -> Self {
        GrowthConfig {
            seed: Point::new(0.0, 0.0),
            beta: 1.0,
            r0: 5.0,
            dr: 0.5,
            dtheta: 0.5,
            delta: 2.5,
            r_max: 90.0,
            connectivity_mode: ConnectivityMode::PathConnected,
            strict: false,
        }
    }
}

impl GrowthConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !self.seed.is_finite() {
            return bad(format!("seed {} is not finite", self.seed));
        }
        check_beta(self.beta)?;
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                bad(format!("{name} must be positive and finite, got {v}"))
            }
        };
        positive("r0", self.r0)?;
        positive("dr", self.dr)?;
        positive("delta", self.delta)?;
        if !(self.dtheta > 0.0 && self.dtheta <= 360.0) {
            return bad(format!("dtheta must lie in (0, 360], got {}", self.dtheta));
        }
        if !self.r_max.is_finite() {
            return bad(format!("r_max must be finite, got {}", self.r_max));
        }
        Ok(())
    }

    /// Candidate position for ring radius `r` and angle `theta_deg`.
    pub fn candidate(&self, r: f64, theta_deg: f64) -> Point {
        let t = theta_deg.to_radians();
        Point::new(self.seed.x + r * t.cos(), self.seed.y + r * t.sin())
    }
}

/// Outcome of testing one candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Accepted,
    RejectedProximity,
    RejectedConnectivity,
}

impl Decision {
    pub fn as_str(&self) -> &'static str {
        match self {
            Decision::Accepted => "accepted",
            Decision::RejectedProximity => "rejected-proximity",
            Decision::RejectedConnectivity => "rejected-connectivity",
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthEvent {
    pub r: f64,
    /// Degrees.
    pub theta: f64,
    pub candidate: Point,
    pub decision: Decision,
    pub edges_after: usize,
}

/// Every visited candidate in visiting order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GrowthTrace {
    pub events: Vec<GrowthEvent>,
}

impl GrowthTrace {
    pub const CSV_HEADER: &'static str = "r,theta,x,y,decision,edges_after";

    pub fn accepted(&self) -> impl Iterator<Item = &GrowthEvent> {
        self.events.iter().filter(|e| e.decision == Decision::Accepted)
    }

    pub fn to_csv(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::with_capacity(40 * (self.events.len() + 1));
        out.push_str(Self::CSV_HEADER);
        out.push('\n');
        for e in &self.events {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                e.r, e.theta, e.candidate.x, e.candidate.y, e.decision, e.edges_after
            );
        }
        out
    }
}

/// Point set, skeleton and grid index kept in step during growth.
struct GrowthState {
    points: PointSet,
    graph: SkeletonGraph,
    index: GridIndex,
}

impl GrowthState {
    fn new(points: PointSet, graph: SkeletonGraph, cell: f64) -> Result<Self> {
        let index = GridIndex::new(&points, cell)?;
        Ok(GrowthState { points, graph, index })
    }

    fn evaluate(&self, cfg: &GrowthConfig, p: &Point) -> (Decision, Option<InsertionDelta>) {
        if self.index.within(p, cfg.delta).is_some() {
            return (Decision::RejectedProximity, None);
        }
        let pts = self.points.points();
        let beta = cfg.beta;
        let connected = match cfg.connectivity_mode {
            ConnectivityMode::NoIsolatedNodes => {
                let removed = removed_by(&self.graph, pts, beta, p);
                if cfg.strict && !removed.is_empty() {
                    return (Decision::RejectedConnectivity, None);
                }
                // nodes left with no edges must reconnect through p
                let mut lost = vec![0usize; 0];
                let mut orphans = Vec::new();
                if !removed.is_empty() {
                    lost.resize(pts.len(), 0);
                    for &(a, b) in &removed {
                        lost[a] += 1;
                        lost[b] += 1;
                    }
                    orphans.extend((0..pts.len()).filter(|&i| lost[i] > 0 && lost[i] == self.graph.degree(i)));
                }
                if orphans.iter().any(|&q| !edge_to_new_is_free(&self.index, q, p, beta)) {
                    false
                } else if !orphans.is_empty() {
                    true
                } else {
                    self.index
                        .visit_outward(*p, |q| {
                            if edge_to_new_is_free(&self.index, q, p, beta) {
                                ControlFlow::Break(())
                            } else {
                                ControlFlow::Continue(())
                            }
                        })
                        .is_some()
                }
            }
            ConnectivityMode::PathConnected => {
                let delta = delta_with_index(&self.graph, &self.index, pts, beta, p);
                if cfg.strict && !delta.removed_edges.is_empty() {
                    return (Decision::RejectedConnectivity, None);
                }
                let next = self.graph.apply(&delta).expect("delta built for this graph");
                if is_connected(&next, ConnectivityMode::PathConnected) {
                    return (Decision::Accepted, Some(delta));
                }
                false
            }
        };
        if !connected {
            return (Decision::RejectedConnectivity, None);
        }
        let delta = delta_with_index(&self.graph, &self.index, pts, beta, p);
        (Decision::Accepted, Some(delta))
    }

    fn accept(&mut self, p: Point, delta: &InsertionDelta) {
        self.graph = self.graph.apply(delta).expect("delta built for this graph");
        self.points.push_unchecked(p);
        self.index.push(p);
    }
}

/// Decides whether `p` would be accepted into `(ps, g)`.
///
/// `g` must be the skeleton of `ps` at `cfg.beta`.
pub fn try_candidate(ps: &PointSet, g: &SkeletonGraph, cfg: &GrowthConfig, p: Point) -> Result<Decision> {
    cfg.validate()?;
    if !p.is_finite() {
        return Err(Error::NonFinite { x: p.x, y: p.y });
    }
    if g.node_count() != ps.len() || g.beta() != cfg.beta {
        return Err(Error::InvalidConfig(format!(
            "graph (n={}, beta={}) is not the skeleton of the given set (n={}, beta={})",
            g.node_count(),
            g.beta(),
            ps.len(),
            cfg.beta
        )));
    }
    if ps.position(&p).is_some() {
        return Err(Error::CoincidentPoints(p));
    }
    let state = GrowthState::new(ps.clone(), g.clone(), cfg.delta)?;
    Ok(state.evaluate(cfg, &p).0)
}

/// Runs the growth procedure from the seed point.
pub fn grow(cfg: &GrowthConfig) -> Result<(PointSet, SkeletonGraph, GrowthTrace)> {
    grow_with(cfg, |_| {})
}

/// [`grow`] with a callback invoked after each completed ring with the ring
/// radius.
pub fn grow_with(
    cfg: &GrowthConfig,
    mut on_ring: impl FnMut(f64),
) -> Result<(PointSet, SkeletonGraph, GrowthTrace)> {
    cfg.validate()?;
    let seed_set = PointSet::new(vec![cfg.seed])?;
    let mut state = GrowthState::new(seed_set, SkeletonGraph::empty(1, cfg.beta), cfg.delta)?;
    let mut trace = GrowthTrace::default();
    // radii and angles are recomputed from integer step counts, never accumulated
    let mut ring = 0u64;
    loop {
        let r = cfg.r0 + ring as f64 * cfg.dr;
        if r > cfg.r_max {
            break;
        }
        let mut step = 0u64;
        loop {
            let theta = step as f64 * cfg.dtheta;
            if theta >= 360.0 {
                break;
            }
            let p = cfg.candidate(r, theta);
            let decision = if state.points.position(&p).is_some() {
                // the seed itself can only come back if r were zero
                Decision::RejectedProximity
            } else {
                let (decision, delta) = state.evaluate(cfg, &p);
                if let Some(delta) = delta {
                    state.accept(p, &delta);
                }
                decision
            };
            trace.events.push(GrowthEvent {
                r,
                theta,
                candidate: p,
                decision,
                edges_after: state.graph.edge_count(),
            });
            step += 1;
        }
        on_ring(r);
        ring += 1;
    }
    Ok((state.points, state.graph, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skeleton::build_naive;

    fn cfg(beta: f64, dtheta: f64, r_max: f64) -> GrowthConfig {
        GrowthConfig {
            beta,
            dtheta,
            r_max,
            ..GrowthConfig::default()
        }
    }

    #[test]
    fn validation() {
        assert!(GrowthConfig::default().validate().is_ok());
        for bad in [
            GrowthConfig { beta: 0.9, ..Default::default() },
            GrowthConfig { dtheta: 0.0, ..Default::default() },
            GrowthConfig { dtheta: 361.0, ..Default::default() },
            GrowthConfig { r0: -1.0, ..Default::default() },
            GrowthConfig { dr: 0.0, ..Default::default() },
            GrowthConfig { delta: f64::NAN, ..Default::default() },
            GrowthConfig { r_max: f64::INFINITY, ..Default::default() },
        ] {
            assert!(grow(&bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn nothing_happens_below_r0() {
        let (ps, g, trace) = grow(&cfg(1.0, 10.0, 4.0)).unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(g.edge_count(), 0);
        assert!(trace.events.is_empty());
    }

    #[test]
    fn first_candidate_joins_seed() {
        let (ps, g, trace) = grow(&cfg(1.0, 90.0, 5.0)).unwrap();
        assert_eq!(trace.events[0].decision, Decision::Accepted);
        assert_eq!(trace.events[0].theta, 0.0);
        assert_eq!(ps.get(1), Point::new(5.0, 0.0));
        assert!(g.has_edge(0, 1));
        // one ring of four angles, theta = 360 is not revisited
        assert_eq!(trace.events.len(), 4);
    }

    #[test]
    fn try_candidate_examples() {
        let c = cfg(1.0, 1.0, 90.0);
        let seed = PointSet::new(vec![Point::new(0.0, 0.0)]).unwrap();
        let g = SkeletonGraph::empty(1, 1.0);
        assert_eq!(try_candidate(&seed, &g, &c, Point::new(5.0, 0.0)).unwrap(), Decision::Accepted);
        assert_eq!(
            try_candidate(&seed, &g, &c, Point::new(1.25, 0.0)).unwrap(),
            Decision::RejectedProximity
        );
        // exactly delta away is still too close
        assert_eq!(
            try_candidate(&seed, &g, &c, Point::new(2.5, 0.0)).unwrap(),
            Decision::RejectedProximity
        );
        assert!(try_candidate(&seed, &g, &c, Point::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn midpoint_candidate_on_rng_edge() {
        // the candidate breaks (0, 1) but joins both endpoints
        let ps = PointSet::new(vec![Point::new(0.0, 0.0), Point::new(10.0, 0.0)]).unwrap();
        let c = cfg(2.0, 1.0, 90.0);
        let g = build_naive(&ps, 2.0).unwrap();
        let p = Point::new(5.0, 0.5);
        let rebuilt = build_naive(&ps.with_point(p).unwrap(), 2.0).unwrap();
        assert!(!rebuilt.has_edge(0, 1));
        let expected = if is_connected(&rebuilt, ConnectivityMode::NoIsolatedNodes) {
            Decision::Accepted
        } else {
            Decision::RejectedConnectivity
        };
        assert_eq!(try_candidate(&ps, &g, &c, p).unwrap(), expected);
        assert_eq!(expected, Decision::Accepted);

        let strict = GrowthConfig { strict: true, ..c };
        assert_eq!(try_candidate(&ps, &g, &strict, p).unwrap(), Decision::RejectedConnectivity);
    }

    #[test]
    fn candidate_isolating_a_node_is_rejected() {
        // at large beta, a point beside the edge midpoint steals both endpoints'
        // only edge while itself linking to just one side
        let ps = PointSet::new(vec![Point::new(0.0, 0.0), Point::new(10.0, 0.0)]).unwrap();
        let c = cfg(50.0, 1.0, 90.0);
        let g = build_naive(&ps, 50.0).unwrap();
        for p in [Point::new(3.0, 20.0), Point::new(7.0, -15.0), Point::new(5.0, 30.0)] {
            let rebuilt = build_naive(&ps.with_point(p).unwrap(), 50.0).unwrap();
            for mode in [ConnectivityMode::NoIsolatedNodes, ConnectivityMode::PathConnected] {
                let expected = if is_connected(&rebuilt, mode) {
                    Decision::Accepted
                } else {
                    Decision::RejectedConnectivity
                };
                let cm = GrowthConfig { connectivity_mode: mode, ..c.clone() };
                assert_eq!(try_candidate(&ps, &g, &cm, p).unwrap(), expected, "{p} {mode}");
            }
        }
    }

    #[test]
    fn invariants_hold_on_every_event() {
        for mode in [ConnectivityMode::NoIsolatedNodes, ConnectivityMode::PathConnected] {
            for beta in [1.0, 3.0, 40.0] {
                let c = GrowthConfig {
                    connectivity_mode: mode,
                    ..cfg(beta, 7.0, 25.0)
                };
                let (ps, g, trace) = grow(&c).unwrap();
                assert_eq!(g, build_naive(&ps, beta).unwrap());
                assert!(is_connected(&g, mode));
                assert!(ps.min_separation().unwrap() > c.delta);
                // replay accepted candidates and check every prefix
                let mut prefix = vec![c.seed];
                for e in trace.accepted() {
                    prefix.push(e.candidate);
                    let pg = build_naive(&PointSet::new(prefix.clone()).unwrap(), beta).unwrap();
                    assert!(is_connected(&pg, mode));
                    assert_eq!(pg.edge_count(), e.edges_after);
                }
                assert_eq!(prefix.len(), ps.len());
                let order: Vec<_> = trace.events.iter().map(|e| (e.r, e.theta)).collect();
                assert!(order.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn deterministic() {
        let c = cfg(5.0, 3.0, 30.0);
        assert_eq!(grow(&c).unwrap(), grow(&c).unwrap());
    }

    #[test]
    fn cross_at_right_angles() {
        for beta in [1.0, 5.0, 50.0] {
            let (_, _, trace) = grow(&cfg(beta, 90.0, 20.0)).unwrap();
            assert!(trace.accepted().all(|e| [0.0, 90.0, 180.0, 270.0].contains(&e.theta)));
        }
    }

    #[test]
    fn trace_csv() {
        let (_, _, trace) = grow(&cfg(1.0, 180.0, 5.0)).unwrap();
        let csv = trace.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(GrowthTrace::CSV_HEADER));
        assert_eq!(lines.next(), Some("5,0,5,0,accepted,1"));
        assert_eq!(lines.count(), 1);
    }
}
