//! Uniform grid over a point set, used to prune witness candidates.

use super::PointSet;
use crate::error::{Error, Result};
use crate::geometry::{LuneTest, Point};
use std::collections::HashMap;
use std::ops::ControlFlow;

type Cell = (i64, i64);

/// Buckets point ids by the grid cell containing them.
#[derive(Debug, Clone)]
pub struct GridIndex {
    cell_size: f64,
    buckets: HashMap<Cell, Vec<usize>>,
    points: Vec<Point>,
    lo: Cell,
    hi: Cell,
}

impl GridIndex {
    /// Indexes `ps` with the given cell size.
    pub fn new(ps: &PointSet, cell_size: f64) -> Result<Self> {
        if !(cell_size > 0.0 && cell_size.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "grid cell size must be positive and finite, got {cell_size}"
            )));
        }
        let mut idx = GridIndex {
            cell_size,
            buckets: HashMap::new(),
            points: Vec::with_capacity(ps.len()),
            lo: (0, 0),
            hi: (-1, -1),
        };
        for p in ps.iter() {
            idx.push(*p);
        }
        Ok(idx)
    }

    /// Indexes `ps` with the cell size set to the median nearest-neighbour
    /// distance.
    pub fn with_default_cell(ps: &PointSet) -> Result<Self> {
        Self::new(ps, default_cell_size(ps))
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn occupied_cells(&self) -> usize {
        self.buckets.len()
    }

    /// Ids stored in the bucket of the cell containing `p`.
    pub fn bucket_of(&self, p: &Point) -> &[usize] {
        self.buckets
            .get(&self.cell_of(p))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Whether this index was built over exactly the points of `ps`.
    pub fn indexes(&self, ps: &PointSet) -> bool {
        self.points.len() == ps.len()
            && self
                .points
                .iter()
                .zip(ps.iter())
                .all(|(a, b)| a.coincides(b))
    }

    pub(crate) fn push(&mut self, p: Point) -> usize {
        let id = self.points.len();
        let cell = self.cell_of(&p);
        if self.buckets.is_empty() {
            self.lo = cell;
            self.hi = cell;
        } else {
            self.lo = (self.lo.0.min(cell.0), self.lo.1.min(cell.1));
            self.hi = (self.hi.0.max(cell.0), self.hi.1.max(cell.1));
        }
        self.buckets.entry(cell).or_default().push(id);
        self.points.push(p);
        id
    }

    pub(crate) fn point(&self, id: usize) -> Point {
        self.points[id]
    }

    fn cell_of(&self, p: &Point) -> Cell {
        (
            (p.x / self.cell_size).floor() as i64,
            (p.y / self.cell_size).floor() as i64,
        )
    }

    fn extent_cells(&self) -> u128 {
        if self.buckets.is_empty() {
            return 0;
        }
        (self.hi.0 - self.lo.0 + 1) as u128 * (self.hi.1 - self.lo.1 + 1) as u128
    }

    /// Visits ids whose cells intersect the box `[lo, hi]`, ring by ring
    /// outward from the cell containing `center`. Stops early on `Break`.
    ///
    /// When the box covers more than half of the occupied extent the grid is
    /// skipped and every id is visited in order.
    pub(crate) fn visit_box<B>(
        &self,
        lo: Point,
        hi: Point,
        center: Point,
        mut f: impl FnMut(usize) -> ControlFlow<B>,
    ) -> Option<B> {
        if self.buckets.is_empty() {
            return None;
        }
        let (blo, bhi) = (self.cell_of(&lo), self.cell_of(&hi));
        let x0 = blo.0.max(self.lo.0);
        let y0 = blo.1.max(self.lo.1);
        let x1 = bhi.0.min(self.hi.0);
        let y1 = bhi.1.min(self.hi.1);
        if x0 > x1 || y0 > y1 {
            return None;
        }
        let box_cells = (x1 - x0 + 1) as u128 * (y1 - y0 + 1) as u128;
        if 2 * box_cells > self.extent_cells() {
            for id in 0..self.points.len() {
                if let ControlFlow::Break(b) = f(id) {
                    return Some(b);
                }
            }
            return None;
        }
        let c = self.cell_of(&center);
        let cx = c.0.clamp(x0, x1);
        let cy = c.1.clamp(y0, y1);
        let kmax = (cx - x0).max(x1 - cx).max(cy - y0).max(y1 - cy);
        self.visit_rings(cx, cy, kmax, (x0, y0, x1, y1), &mut f)
    }

    /// Visits every id ring by ring outward from the cell containing `center`.
    pub(crate) fn visit_outward<B>(
        &self,
        center: Point,
        mut f: impl FnMut(usize) -> ControlFlow<B>,
    ) -> Option<B> {
        if self.buckets.is_empty() {
            return None;
        }
        let (cx, cy) = self.cell_of(&center);
        let kmax = (cx - self.lo.0)
            .max(self.hi.0 - cx)
            .max(cy - self.lo.1)
            .max(self.hi.1 - cy);
        let clip = (self.lo.0, self.lo.1, self.hi.0, self.hi.1);
        self.visit_rings(cx, cy, kmax, clip, &mut f)
    }

    fn visit_rings<B>(
        &self,
        cx: i64,
        cy: i64,
        kmax: i64,
        (x0, y0, x1, y1): (i64, i64, i64, i64),
        f: &mut impl FnMut(usize) -> ControlFlow<B>,
    ) -> Option<B> {
        let mut visit_cell = |x: i64, y: i64| -> Option<B> {
            if x < x0 || x > x1 || y < y0 || y > y1 {
                return None;
            }
            if let Some(ids) = self.buckets.get(&(x, y)) {
                for &id in ids {
                    if let ControlFlow::Break(b) = f(id) {
                        return Some(b);
                    }
                }
            }
            None
        };
        for k in 0..=kmax.max(0) {
            for dy in -k..=k {
                let y = cy + dy;
                if y < y0 || y > y1 {
                    continue;
                }
                if dy == -k || dy == k {
                    for dx in -k..=k {
                        if let Some(b) = visit_cell(cx + dx, y) {
                            return Some(b);
                        }
                    }
                } else {
                    if let Some(b) = visit_cell(cx - k, y) {
                        return Some(b);
                    }
                    if k > 0 {
                        if let Some(b) = visit_cell(cx + k, y) {
                            return Some(b);
                        }
                    }
                }
            }
        }
        None
    }

    /// Nearest indexed point to `p` and its distance, skipping `skip`.
    pub(crate) fn nearest(&self, p: &Point, skip: Option<usize>) -> Option<(usize, f64)> {
        if self.buckets.is_empty() {
            return None;
        }
        let (cx, cy) = self.cell_of(p);
        let kmax = (cx - self.lo.0)
            .max(self.hi.0 - cx)
            .max(cy - self.lo.1)
            .max(self.hi.1 - cy)
            .max(0);
        let mut best: Option<(usize, f64)> = None;
        let consider = |x: i64, y: i64, best: &mut Option<(usize, f64)>| {
            if let Some(ids) = self.buckets.get(&(x, y)) {
                for &id in ids {
                    if Some(id) == skip {
                        continue;
                    }
                    let d2 = self.points[id].dist2(p);
                    if best.is_none_or(|(bid, bd)| d2 < bd || (d2 == bd && id < bid)) {
                        *best = Some((id, d2));
                    }
                }
            }
        };
        for k in 0..=kmax {
            for dy in -k..=k {
                if dy == -k || dy == k {
                    for dx in -k..=k {
                        consider(cx + dx, cy + dy, &mut best);
                    }
                } else {
                    consider(cx - k, cy + dy, &mut best);
                    if k > 0 {
                        consider(cx + k, cy + dy, &mut best);
                    }
                }
            }
            // points in ring k + 1 and beyond are at least k cells away
            if let Some((_, d2)) = best {
                let reach = k as f64 * self.cell_size;
                if d2 <= reach * reach {
                    break;
                }
            }
        }
        best.map(|(id, d2)| (id, d2.sqrt()))
    }

    /// First id found inside the lune, skipping `skip`.
    pub(crate) fn lune_witness(&self, test: &LuneTest, skip: Option<usize>) -> Option<usize> {
        let (lo, hi) = test.bounding_box();
        self.visit_box(lo, hi, test.midpoint(), |id| {
            if Some(id) != skip && test.contains(&self.points[id]) {
                ControlFlow::Break(id)
            } else {
                ControlFlow::Continue(())
            }
        })
    }

    /// First id within distance `radius` of `p` (inclusive). Compares the
    /// rounded distance itself, not its square, so the answer agrees with
    /// [`Point::dist`].
    pub(crate) fn within(&self, p: &Point, radius: f64) -> Option<usize> {
        let lo = Point::new(p.x - radius, p.y - radius);
        let hi = Point::new(p.x + radius, p.y + radius);
        self.visit_box(lo, hi, *p, |id| {
            if self.points[id].dist(p) <= radius {
                ControlFlow::Break(id)
            } else {
                ControlFlow::Continue(())
            }
        })
    }
}

/// Median nearest-neighbour distance, or 1 for sets with fewer than two points.
pub fn default_cell_size(ps: &PointSet) -> f64 {
    if ps.len() < 2 {
        return 1.0;
    }
    let (lo, hi) = ps.bounds().expect("non-empty");
    let span = (hi.x - lo.x).max(hi.y - lo.y);
    let coarse = (span / (ps.len() as f64).sqrt()).max(f64::MIN_POSITIVE);
    let coarse = if coarse.is_finite() && coarse > 0.0 { coarse } else { 1.0 };
    let idx = GridIndex::new(ps, coarse).expect("positive cell size");
    let mut nn: Vec<f64> = (0..ps.len())
        .map(|i| idx.nearest(&ps.get(i), Some(i)).map_or(f64::INFINITY, |(_, d)| d))
        .collect();
    nn.sort_by(f64::total_cmp);
    let m = nn[nn.len() / 2];
    if m > 0.0 && m.is_finite() {
        m
    } else {
        1.0
    }
}
