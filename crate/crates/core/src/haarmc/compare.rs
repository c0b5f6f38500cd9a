use serde::{Deserialize, Serialize};

use super::histogram::Histogram;
use crate::entdensity::{DeltaComponent, DensityCurve};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub ks: f64,
    /// Largest allowed |observed − expected| bin probability outside
    /// flagged bins.
    pub sup: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self { ks: 0.01, sup: 0.02 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub ks_distance: f64,
    /// Max |observed − expected| bin probability over unflagged bins.
    pub sup_norm_excluding_flagged_bins: f64,
    /// Max |histogram density − model density| over unflagged bins
    /// (diagnostic only; dominated by counting noise).
    pub sup_density_deviation: f64,
    pub per_bin_z_scores: Vec<f64>,
    pub flagged_bins: Vec<usize>,
    pub samples: u64,
    pub thresholds: Thresholds,
    pub pass: bool,
}

/// A distribution on [0, 1] made of weighted point masses and curves.
#[derive(Debug, Clone, Default)]
pub struct Model<'a> {
    pub deltas: Vec<DeltaComponent>,
    pub curves: Vec<(f64, &'a DensityCurve)>,
}

impl<'a> Model<'a> {
    pub fn curve(c: &'a DensityCurve) -> Self {
        Self {
            deltas: vec![],
            curves: vec![(1.0, c)],
        }
    }

    /// P(X < e).
    pub fn cdf(&self, e: f64) -> f64 {
        let d: f64 = self.deltas.iter().filter(|d| d.location < e).map(|d| d.weight).sum();
        let c: f64 = self.curves.iter().map(|(w, c)| w * c.cdf_at(e)).sum();
        d + c
    }

    /// P(X ≤ 1), which equals one for a normalized model.
    pub fn total(&self) -> f64 {
        let d: f64 = self.deltas.iter().map(|d| d.weight).sum();
        d + self.curves.iter().map(|(w, c)| w * c.cdf_at(1.0)).sum::<f64>()
    }

    fn density(&self, e: f64) -> f64 {
        self.curves.iter().map(|(w, c)| w * c.density_at(e)).sum()
    }

    fn special_points(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self.deltas.iter().map(|d| d.location).collect();
        for (_, c) in &self.curves {
            let a = &c.annotations;
            pts.extend(a.cusp);
            pts.extend(&a.divergences);
            pts.extend(&a.kinks);
            if a.support_max < 1.0 {
                pts.push(a.support_max);
            }
        }
        pts
    }
}

pub fn compare(curve: &DensityCurve, hist: &Histogram) -> Result<ComparisonReport> {
    compare_model(&Model::curve(curve), hist, Thresholds::default())
}

pub fn compare_model(model: &Model, hist: &Histogram, thresholds: Thresholds) -> Result<ComparisonReport> {
    let edges = &hist.edges;
    if edges.len() < 2 || edges[0] != 0.0 || edges[edges.len() - 1] != 1.0 {
        return Err(Error::Domain("histogram must span [0, 1]".into()));
    }
    if hist.total == 0 {
        return Err(Error::Domain("histogram is empty".into()));
    }
    let bins = hist.bins();
    let n = hist.total as f64;

    // model probability below each edge; the last edge closes the support
    let mut model_cdf: Vec<f64> = edges.iter().map(|&e| model.cdf(e)).collect();
    model_cdf[0] = 0.0;
    model_cdf[bins] = model.total();

    let mut flagged = vec![false; bins];
    for p in model.special_points() {
        if (0.0..=1.0).contains(&p) {
            let i = hist.bin_index(p);
            // a point on an edge touches both neighbours
            let on_edge = (p * bins as f64 - (p * bins as f64).round()).abs() < 1e-9;
            for j in i.saturating_sub(1 + on_edge as usize)..=(i + 1).min(bins - 1) {
                flagged[j] = true;
            }
        }
    }

    let mut ks: f64 = 0.0;
    let mut emp = 0.0;
    let mut sup: f64 = 0.0;
    let mut sup_density: f64 = 0.0;
    let mut z = Vec::with_capacity(bins);
    for i in 0..bins {
        let obs = hist.counts[i] as f64;
        emp += obs / n;
        if i + 1 < bins {
            ks = ks.max((emp - model_cdf[i + 1]).abs());
        }
        let p = (model_cdf[i + 1] - model_cdf[i]).max(0.0);
        let expected = n * p;
        let sd = (expected * (1.0 - p)).max(1.0).sqrt();
        z.push((obs - expected) / sd);
        if !flagged[i] {
            sup = sup.max((obs / n - p).abs());
            let w = edges[i + 1] - edges[i];
            let mid = 0.5 * (edges[i] + edges[i + 1]);
            sup_density = sup_density.max((obs / (n * w) - model.density(mid)).abs());
        }
    }
    // total-mass mismatch shows up as a final-edge discrepancy
    ks = ks.max((1.0 - model_cdf[bins]).abs());

    let flagged_bins: Vec<usize> = (0..bins).filter(|&i| flagged[i]).collect();
    Ok(ComparisonReport {
        ks_distance: ks.min(1.0),
        sup_norm_excluding_flagged_bins: sup,
        sup_density_deviation: sup_density,
        per_bin_z_scores: z,
        flagged_bins,
        samples: hist.total,
        thresholds,
        pass: ks < thresholds.ks && sup < thresholds.sup,
    })
}
