//! Experiment protocols: random point sets, edge-loss sweeps over beta,
//! power-law fits, and growth sweeps over `(beta, dtheta)`.

use crate::error::{Error, Result};
use crate::geometry::{check_beta, Point};
use crate::growth::{grow, GrowthConfig};
use crate::metrics::{compute_metrics, MetricsReport};
use crate::skeleton::{build_indexed, refine_to_beta, GridIndex, PointSet, SkeletonGraph};
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use rayon::prelude::*;
use std::fmt::Write as _;

/// Generator behind every seeded experiment. Seeds expand through
/// `SeedableRng::seed_from_u64`.
pub const RNG_ALGORITHM: &str = "xoshiro256** (rand_xoshiro 0.6, seed_from_u64)";

/// Consecutive rejected darts after which generation gives up.
pub const MAX_CONSECUTIVE_REJECTIONS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct RandomSetConfig {
    pub n: usize,
    /// Points fall in the disc of this radius centered at the origin.
    pub domain_radius: f64,
    /// Minimum pairwise distance.
    pub min_separation: f64,
    pub rng_seed: u64,
}

impl Default for RandomSetConfig {
    fn default() -> Self {
        RandomSetConfig {
            n: 500,
            domain_radius: 250.0,
            min_separation: 5.0,
            rng_seed: 0,
        }
    }
}

impl RandomSetConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be positive".into()));
        }
        if !(self.domain_radius > 0.0 && self.domain_radius.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "domain_radius must be positive and finite, got {}",
                self.domain_radius
            )));
        }
        if !(self.min_separation >= 0.0 && self.min_separation.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "min_separation must be non-negative and finite, got {}",
                self.min_separation
            )));
        }
        Ok(())
    }

    /// Comment lines describing how a set was generated.
    pub fn provenance(&self) -> Vec<String> {
        vec![
            format!("rng={RNG_ALGORITHM}"),
            format!(
                "rng_seed={} n={} domain_radius={} min_separation={}",
                self.rng_seed, self.n, self.domain_radius, self.min_separation
            ),
        ]
    }
}

/// Dart throwing: uniform candidates in the bounding square of the disc,
/// rejected when outside the disc or closer than `min_separation` to an
/// accepted point.
pub fn generate_random_set(cfg: &RandomSetConfig) -> Result<PointSet> {
    cfg.validate()?;
    let mut rng = Xoshiro256StarStar::seed_from_u64(cfg.rng_seed);
    let r = cfg.domain_radius;
    let cell = if cfg.min_separation > 0.0 {
        cfg.min_separation
    } else {
        r / (cfg.n as f64).sqrt().max(1.0)
    };
    let mut index = GridIndex::new(&PointSet::empty(), cell)?;
    let mut points = PointSet::empty();
    let mut rejections = 0u64;
    while points.len() < cfg.n {
        let p = Point::new(rng.gen_range(-r..=r), rng.gen_range(-r..=r));
        let inside = p.x * p.x + p.y * p.y <= r * r;
        let clear = inside
            && index
                .nearest(&p, None)
                .is_none_or(|(_, d)| d >= cfg.min_separation && d > 0.0);
        if clear {
            index.push(p);
            points.push_unchecked(p);
            rejections = 0;
        } else {
            rejections += 1;
            if rejections >= MAX_CONSECUTIVE_REJECTIONS {
                return Err(Error::DensityInfeasible {
                    placed: points.len(),
                    requested: cfg.n,
                    rejections,
                });
            }
        }
    }
    Ok(points)
}

/// Samples `(beta, value)` with strictly increasing beta.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCurve {
    pub label: String,
    pub samples: Vec<(f64, f64)>,
}

impl SweepCurve {
    pub fn new(label: impl Into<String>, samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.windows(2).any(|w| !(w[0].0 < w[1].0)) {
            return Err(Error::InvalidConfig("sweep betas must be strictly increasing".into()));
        }
        Ok(SweepCurve {
            label: label.into(),
            samples,
        })
    }

    /// Samples with `lo <= beta <= hi`.
    pub fn window(&self, lo: f64, hi: f64) -> SweepCurve {
        SweepCurve {
            label: self.label.clone(),
            samples: self.samples.iter().copied().filter(|&(b, _)| b >= lo && b <= hi).collect(),
        }
    }

    pub fn is_non_increasing(&self) -> bool {
        self.samples.windows(2).all(|w| w[1].1 <= w[0].1)
    }

    /// CSV with header `beta,<label>`.
    pub fn to_csv(&self) -> String {
        let mut out = format!("beta,{}\n", self.label);
        for (b, v) in &self.samples {
            let _ = writeln!(out, "{b},{v}");
        }
        out
    }
}

/// The beta grid `beta_min, beta_min + step, ...` up to `beta_max`.
pub fn beta_grid(beta_min: f64, beta_max: f64, step: f64) -> Result<Vec<f64>> {
    check_beta(beta_min)?;
    check_beta(beta_max)?;
    if !(beta_min < beta_max) {
        return Err(Error::InvalidConfig(format!(
            "beta_min ({beta_min}) must be below beta_max ({beta_max})"
        )));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidConfig(format!("beta step must be positive, got {step}")));
    }
    // a relative slack keeps beta_max on the grid despite rounding in the division
    let count = ((beta_max - beta_min) / step * (1.0 + 1e-12)).floor() as usize;
    Ok((0..=count).map(|k| beta_min + k as f64 * step).collect())
}

/// How an edge-loss sweep obtains each skeleton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepStrategy {
    /// Build each skeleton from scratch.
    #[default]
    Recompute,
    /// Retest only the edges that survived the previous beta.
    Nested,
}

/// Edge count of the skeleton at every beta on the grid.
pub fn edge_loss_sweep(ps: &PointSet, beta_min: f64, beta_max: f64, step: f64) -> Result<SweepCurve> {
    edge_loss_sweep_with(ps, beta_min, beta_max, step, SweepStrategy::Recompute)
}

pub fn edge_loss_sweep_with(
    ps: &PointSet,
    beta_min: f64,
    beta_max: f64,
    step: f64,
    strategy: SweepStrategy,
) -> Result<SweepCurve> {
    let betas = beta_grid(beta_min, beta_max, step)?;
    let idx = GridIndex::with_default_cell(ps)?;
    let counts: Vec<usize> = match strategy {
        SweepStrategy::Recompute => betas
            .par_iter()
            .map(|&b| build_indexed(ps, b, &idx).map(|g| g.edge_count()))
            .collect::<Result<_>>()?,
        SweepStrategy::Nested => {
            let mut out = Vec::with_capacity(betas.len());
            let mut g: Option<SkeletonGraph> = None;
            for &b in &betas {
                let next = match &g {
                    None => build_indexed(ps, b, &idx)?,
                    Some(prev) => refine_to_beta(ps, prev, b, &idx)?,
                };
                out.push(next.edge_count());
                g = Some(next);
            }
            out
        }
    };
    SweepCurve::new(
        "edges",
        betas.into_iter().zip(counts).map(|(b, c)| (b, c as f64)).collect(),
    )
}

/// `value = coefficient * beta^exponent`, fitted in log-log space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub coefficient: f64,
    pub r_squared: f64,
}

impl PowerLawFit {
    pub const CSV_HEADER: &'static str = "exponent,coefficient,r_squared";

    pub fn csv_row(&self) -> String {
        format!("{},{},{}", self.exponent, self.coefficient, self.r_squared)
    }
}

/// Ordinary least squares of `ln value` on `ln beta` over samples where both
/// are positive. A zero-variance response has `r_squared = 1`.
pub fn fit_power_law(curve: &SweepCurve) -> Result<PowerLawFit> {
    let logs: Vec<(f64, f64)> = curve
        .samples
        .iter()
        .filter(|&&(b, v)| b > 0.0 && v > 0.0)
        .map(|&(b, v)| (b.ln(), v.ln()))
        .collect();
    if logs.len() < 3 {
        return Err(Error::InsufficientSamples(logs.len()));
    }
    // shifting by the first sample keeps a constant curve exactly flat
    let (x0, y0) = logs[0];
    let logs: Vec<(f64, f64)> = logs.iter().map(|&(x, y)| (x - x0, y - y0)).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = logs.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidConfig("power-law fit needs distinct betas".into()));
    }
    let slope = sxy / sxx;
    let intercept = y0 + my - slope * (mx + x0);
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        let ss_res: f64 = logs
            .iter()
            .map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2))
            .sum();
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(PowerLawFit {
        exponent: slope,
        coefficient: intercept.exp(),
        r_squared,
    })
}

/// One cell of a growth sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRun {
    pub config: GrowthConfig,
    pub outcome: std::result::Result<MetricsReport, String>,
}

impl GrowthRun {
    pub const CSV_HEADER: &'static str =
        "dtheta,beta,nodes,edges,avg_degree,total_length,diam_hops,diam_nodes,randic,status";

    pub fn csv_row(&self) -> String {
        match &self.outcome {
            Ok(m) => format!("{},{},ok", self.config.dtheta, m.csv_row()),
            Err(e) => format!(
                "{},{},,,,,,,,error: {}",
                self.config.dtheta,
                self.config.beta,
                e.replace([',', '\n'], ";")
            ),
        }
    }
}

/// Grows and measures a skeleton for every `(beta, dtheta)` pair, beta-major.
/// A failing cell carries its error instead of aborting the sweep.
pub fn growth_sweep(base: &GrowthConfig, betas: &[f64], dthetas: &[f64]) -> Vec<GrowthRun> {
    growth_sweep_with(base, betas, dthetas, true)
}

pub fn growth_sweep_with(base: &GrowthConfig, betas: &[f64], dthetas: &[f64], parallel: bool) -> Vec<GrowthRun> {
    let cells: Vec<GrowthConfig> = betas
        .iter()
        .flat_map(|&beta| {
            dthetas.iter().map(move |&dtheta| GrowthConfig {
                beta,
                dtheta,
                ..base.clone()
            })
        })
        .collect();
    let run = |config: GrowthConfig| {
        let outcome = grow(&config)
            .map(|(ps, g, _)| compute_metrics(&ps, &g))
            .map_err(|e| e.to_string());
        GrowthRun { config, outcome }
    };
    if parallel {
        cells.into_par_iter().map(run).collect()
    } else {
        cells.into_iter().map(run).collect()
    }
}

/// Spearman rank correlation, with average ranks for ties.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut order: Vec<usize> = (0..v.len()).collect();
        order.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < order.len() {
            let mut j = i;
            while j + 1 < order.len() && v[order[j + 1]] == v[order[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for &k in &order[i..=j] {
                r[k] = avg;
            }
            i = j + 1;
        }
        r
    }
    assert_eq!(xs.len(), ys.len());
    let (rx, ry) = (ranks(xs), ranks(ys));
    let n = xs.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}
