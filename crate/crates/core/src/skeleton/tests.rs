use super::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

fn pts(v: &[(f64, f64)]) -> PointSet {
    PointSet::new(v.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
}

fn random_set(n: usize, seed: u64) -> PointSet {
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    let v = (0..n)
        .map(|_| Point::new(rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)))
        .collect();
    PointSet::new(v).unwrap()
}

/// Edge iff no third point lies in the disc with diameter pq. With
/// `closed == false` only the open disc counts.
fn gabriel_oracle_with(ps: &PointSet, closed: bool) -> Vec<(usize, usize)> {
    let p = ps.points();
    let mut out = Vec::new();
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let m = Point::new((p[i].x + p[j].x) / 2.0, (p[i].y + p[j].y) / 2.0);
            let r2 = p[i].dist2(&p[j]) / 4.0;
            if !(0..p.len()).any(|k| k != i && k != j && (p[k].dist2(&m) < r2 || closed && p[k].dist2(&m) == r2)) {
                out.push((i, j));
            }
        }
    }
    out
}

fn gabriel_oracle(ps: &PointSet) -> Vec<(usize, usize)> {
    gabriel_oracle_with(ps, true)
}

/// Edge iff no z with max(|pz|, |qz|) < |pq|.
fn rng_oracle(ps: &PointSet) -> Vec<(usize, usize)> {
    let p = ps.points();
    let mut out = Vec::new();
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let d = p[i].dist(&p[j]);
            if !(0..p.len())
                .any(|k| k != i && k != j && p[i].dist(&p[k]).max(p[j].dist(&p[k])) < d)
            {
                out.push((i, j));
            }
        }
    }
    out
}

#[test]
fn collinear_triple() {
    let ps = pts(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
    let g = build_naive(&ps, 1.0).unwrap();
    assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    assert_eq!(g.neighbors(1), &[0, 2]);
}

#[test]
fn single_and_empty() {
    let g = build_naive(&pts(&[(3.0, 4.0)]), 7.0).unwrap();
    assert_eq!((g.node_count(), g.edge_count()), (1, 0));
    let empty = PointSet::empty();
    let idx = GridIndex::with_default_cell(&empty).unwrap();
    let g = build_indexed(&empty, 2.0, &idx).unwrap();
    assert_eq!((g.node_count(), g.edge_count()), (0, 0));
}

#[test]
fn build_errors() {
    assert!(matches!(build_naive(&PointSet::grid(2), 0.5), Err(Error::UnsupportedBeta(_))));
    assert!(matches!(
        PointSet::new(vec![Point::new(1.0, 1.0), Point::new(1.0, 1.0)]),
        Err(Error::DuplicatePoint { first: 0, second: 1 })
    ));
    assert!(PointSet::new(vec![Point::new(0.0, 0.0), Point::new(-0.0, 0.0)]).is_err());
    let idx = GridIndex::with_default_cell(&PointSet::grid(3)).unwrap();
    assert!(matches!(build_indexed(&PointSet::grid(4), 1.0, &idx), Err(Error::StaleIndex)));
}

#[test]
fn gabriel_and_rng_oracles() {
    for seed in 0..3 {
        let ps = random_set(100, seed);
        assert_eq!(build_naive(&ps, 1.0).unwrap().edges(), gabriel_oracle(&ps));
        assert_eq!(build_naive(&ps, 2.0).unwrap().edges(), rng_oracle(&ps));
    }
}

#[test]
fn boundary_convention_on_the_lattice() {
    // cell diagonals have the other two corners on their Gabriel circle
    let ps = PointSet::grid(5);
    let closed = build_naive(&ps, 1.0).unwrap();
    assert_eq!(closed.edges(), gabriel_oracle_with(&ps, true));
    assert_eq!(closed.edge_count(), 40);
    let open = build_naive_tol(&ps, 1.0, Tolerance::OPEN).unwrap();
    assert_eq!(open.edges(), gabriel_oracle_with(&ps, false));
    assert_eq!(open.edge_count(), 40 + 2 * 16);
}

#[test]
fn indexed_matches_naive() {
    for (seed, n) in [(1u64, 60usize), (2, 200), (3, 500)] {
        let ps = random_set(n, seed);
        for cell in [default_cell_size(&ps), 0.37, 13.0] {
            let idx = GridIndex::new(&ps, cell).unwrap();
            for beta in [1.0, 2.0, 5.0, 50.0] {
                assert_eq!(
                    build_indexed(&ps, beta, &idx).unwrap(),
                    build_naive(&ps, beta).unwrap(),
                    "n={n} beta={beta} cell={cell}"
                );
            }
        }
    }
}

#[test]
fn grid_is_stable() {
    let ps = PointSet::grid(5);
    let idx = GridIndex::with_default_cell(&ps).unwrap();
    for beta in [1.0, 2.0, 10.0, 1e3, 1e6] {
        assert_eq!(build_indexed(&ps, beta, &idx).unwrap().edge_count(), 40);
        assert_eq!(build_naive(&ps, beta).unwrap().edge_count(), 40);
    }
    assert!(is_stable(&ps).unwrap());
    assert_eq!(build_limit(&ps).edges(), build_naive(&ps, 1.0).unwrap().edges());
}

#[test]
fn equilateral_triangle_is_unstable() {
    let h = 3f64.sqrt() / 2.0;
    let ps = pts(&[(0.0, 0.0), (1.0, 0.0), (0.5, h)]);
    assert_eq!(stability_violation(&ps).unwrap(), Some((0, 1, 2)));
    assert!(!is_stable(&ps).unwrap());
    assert_eq!(build_naive(&ps, 1.0).unwrap().edge_count(), 3);
    assert_eq!(build_naive(&ps, 1e6).unwrap().edge_count(), 0);
    assert_eq!(build_limit(&ps).edge_count(), 0);
}

#[test]
fn two_points_are_stable() {
    assert!(is_stable(&pts(&[(0.0, 0.0), (5.0, 1.0)])).unwrap());
    assert!(is_stable(&pts(&[(0.0, 0.0)])).unwrap());
}

#[test]
fn connectivity_modes() {
    let g = SkeletonGraph::from_edges(4, 1.0, [(0, 1), (2, 3)]).unwrap();
    assert!(is_connected(&g, ConnectivityMode::NoIsolatedNodes));
    assert!(!is_connected(&g, ConnectivityMode::PathConnected));
    let single = SkeletonGraph::empty(1, 1.0);
    assert!(is_connected(&single, ConnectivityMode::NoIsolatedNodes));
    assert!(is_connected(&single, ConnectivityMode::PathConnected));
    let iso = SkeletonGraph::from_edges(3, 1.0, [(0, 1)]).unwrap();
    assert!(!is_connected(&iso, ConnectivityMode::NoIsolatedNodes));
    assert_eq!("path-connected".parse::<ConnectivityMode>().unwrap(), ConnectivityMode::PathConnected);
    assert!("bogus".parse::<ConnectivityMode>().is_err());
}

#[test]
fn graph_validation() {
    assert!(SkeletonGraph::from_edges(2, 1.0, [(0, 2)]).is_err());
    assert!(SkeletonGraph::from_edges(2, 1.0, [(1, 1)]).is_err());
    let g = SkeletonGraph::from_edges(3, 1.0, [(1, 0), (0, 1), (2, 1)]).unwrap();
    assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    assert!(g.has_edge(1, 0) && !g.has_edge(0, 2));
}

#[test]
fn insert_midpoint_breaks_gabriel_edge() {
    let ps = pts(&[(0.0, 0.0), (2.0, 0.0)]);
    let g = build_naive(&ps, 1.0).unwrap();
    let d = insert_point(&g, &ps, 1.0, Point::new(1.0, 0.0)).unwrap();
    assert_eq!(d.new_point_id, 2);
    assert_eq!(d.removed_edges, vec![(0, 1)]);
    assert_eq!(d.added_edges, vec![(0, 2), (1, 2)]);
}

#[test]
fn insert_far_point_matches_rebuild() {
    let ps = pts(&[(0.0, 0.0), (2.0, 0.0)]);
    let g = build_naive(&ps, 1.0).unwrap();
    let p = Point::new(10.0, 10.0);
    let d = insert_point(&g, &ps, 1.0, p).unwrap();
    assert!(d.removed_edges.is_empty());
    let rebuilt = build_naive(&ps.with_point(p).unwrap(), 1.0).unwrap();
    assert_eq!(g.apply(&d).unwrap(), rebuilt);
    // (0, 2) is blocked by (2, 0), which sits inside its Gabriel disc
    assert_eq!(d.added_edges, vec![(1, 2)]);
}

#[test]
fn insert_errors() {
    let ps = pts(&[(0.0, 0.0), (2.0, 0.0)]);
    let g = build_naive(&ps, 1.0).unwrap();
    assert!(matches!(
        insert_point(&g, &ps, 1.0, Point::new(2.0, 0.0)),
        Err(Error::CoincidentPoints(_))
    ));
    assert!(insert_point(&g, &ps, 2.0, Point::new(5.0, 0.0)).is_err());
}

#[test]
fn insertion_sequences_match_rebuild() {
    for beta in [1.0, 2.0, 3.0] {
        for seed in 0..4 {
            let mut ps = random_set(50, seed);
            let mut g = build_naive(&ps, beta).unwrap();
            let mut rng = Xoshiro256StarStar::seed_from_u64(1000 + seed);
            for _ in 0..20 {
                let p = Point::new(rng.gen_range(-10.0..110.0), rng.gen_range(-10.0..110.0));
                let d = insert_point(&g, &ps, beta, p).unwrap();
                for e in &d.removed_edges {
                    assert!(g.edges().contains(e));
                }
                assert!(d.added_edges.iter().all(|&(_, b)| b == d.new_point_id));
                g = g.apply(&d).unwrap();
                ps = ps.with_point(p).unwrap();
                assert_eq!(g, build_naive(&ps, beta).unwrap());
            }
        }
    }
}

#[test]
fn refine_matches_recompute() {
    let ps = random_set(150, 9);
    let idx = GridIndex::with_default_cell(&ps).unwrap();
    let mut g = build_indexed(&ps, 1.0, &idx).unwrap();
    for beta in [1.2, 1.9, 2.0, 3.5, 8.0, 40.0] {
        g = refine_to_beta(&ps, &g, beta, &idx).unwrap();
        assert_eq!(g, build_naive(&ps, beta).unwrap());
    }
    assert!(refine_to_beta(&ps, &g, 2.0, &idx).is_err());
}

#[test]
fn min_separation_of_grid() {
    assert_eq!(PointSet::grid(4).min_separation(), Some(1.0));
    assert_eq!(PointSet::grid(1).min_separation(), None);
}

fn small_set() -> impl Strategy<Value = PointSet> {
    prop::collection::vec((0i32..400, 0i32..400), 2..30).prop_filter_map("distinct", |v| {
        PointSet::new(v.into_iter().map(|(x, y)| Point::new(x as f64 * 0.25, y as f64 * 0.25)).collect()).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn monotone_in_beta(ps in small_set()) {
        let betas = [1.0, 1.3, 2.0, 2.5, 4.0, 10.0, 100.0];
        let graphs: Vec<_> = betas.iter().map(|&b| build_naive(&ps, b).unwrap()).collect();
        for w in graphs.windows(2) {
            for e in w[1].edges() {
                prop_assert!(w[0].has_edge(e.0, e.1));
            }
        }
    }

    #[test]
    fn relabeling_gives_isomorphic_edges(ps in small_set(), seed in any::<u64>(), beta in prop::sample::select(vec![1.0, 2.0, 3.0, 20.0])) {
        use rand::seq::SliceRandom;
        let mut perm: Vec<usize> = (0..ps.len()).collect();
        perm.shuffle(&mut Xoshiro256StarStar::seed_from_u64(seed));
        // new id perm[i] holds old point i
        let mut relabeled = vec![Point::new(0.0, 0.0); ps.len()];
        for (old, &new) in perm.iter().enumerate() {
            relabeled[new] = ps.get(old);
        }
        let g = build_naive(&ps, beta).unwrap();
        let h = build_naive(&PointSet::new(relabeled).unwrap(), beta).unwrap();
        let mapped = SkeletonGraph::from_edges(ps.len(), beta, g.edges().iter().map(|&(a, b)| (perm[a], perm[b]))).unwrap();
        prop_assert_eq!(mapped, h);
    }

    #[test]
    fn indexed_equals_naive(ps in small_set(), cell in 0.1..50.0f64, beta in 1.0..30.0f64) {
        let idx = GridIndex::new(&ps, cell).unwrap();
        prop_assert_eq!(build_indexed(&ps, beta, &idx).unwrap(), build_naive(&ps, beta).unwrap());
    }
}
