use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng::{McRng, RngStream};
use super::samplers::Sampler;
use crate::error::{Error, Result};

/// Samples per parallel work unit; chunk k uses stream id k.
pub const CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl Histogram {
    /// Empty histogram with `bins` uniform bins on [0, 1].
    pub fn uniform(bins: usize) -> Self {
        Self {
            edges: (0..=bins).map(|i| i as f64 / bins as f64).collect(),
            counts: vec![0; bins],
            total: 0,
        }
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    /// Uniform-bin index of a value in [0, 1]; 1 falls in the last bin.
    pub fn bin_index(&self, e: f64) -> usize {
        let b = self.bins();
        ((e * b as f64).floor().max(0.0) as usize).min(b - 1)
    }

    pub fn add(&mut self, e: f64) {
        let i = self.bin_index(e);
        self.counts[i] += 1;
        self.total += 1;
    }

    pub fn merge(mut self, other: &Self) -> Self {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total += other.total;
        self
    }

    pub fn density(&self, i: usize) -> f64 {
        let w = self.edges[i + 1] - self.edges[i];
        self.counts[i] as f64 / (self.total as f64 * w)
    }

    pub fn densities(&self) -> Vec<f64> {
        (0..self.bins()).map(|i| self.density(i)).collect()
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// CSV with columns bin_low, bin_high, count, density.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "bin_low,bin_high,count,density")?;
        for i in 0..self.bins() {
            writeln!(
                w,
                "{:.16e},{:.16e},{},{:.16e}",
                self.edges[i],
                self.edges[i + 1],
                self.counts[i],
                self.density(i)
            )?;
        }
        Ok(())
    }
}

fn run_chunks<T, S, F>(n: u64, seed: u64, init: T, sampler: &S, fold: F) -> Vec<T>
where
    T: Clone + Send + Sync,
    S: Sampler + ?Sized,
    F: Fn(&mut T, f64) + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng: McRng = RngStream::new(seed, k).rng();
            let len = CHUNK.min(n - k * CHUNK);
            let mut acc = init.clone();
            for _ in 0..len {
                fold(&mut acc, sampler.sample(&mut rng));
            }
            acc
        })
        .collect()
}

/// Histogram of `n` draws in `bins` uniform bins. The result depends only on
/// (sampler, n, bins, seed), not on the number of worker threads.
pub fn mc_histogram<S: Sampler + ?Sized>(sampler: &S, n: u64, bins: usize, seed: u64) -> Result<Histogram> {
    if bins < 8 || n < bins as u64 {
        return Err(Error::Domain(format!("need n ≥ bins ≥ 8, got n = {n}, bins = {bins}")));
    }
    let empty = Histogram::uniform(bins);
    let parts = run_chunks(n, seed, empty.clone(), sampler, |h, e| h.add(e));
    Ok(parts.iter().fold(empty, |acc, h| acc.merge(h)))
}

/// Sample mean and its standard error.
pub fn mc_mean<S: Sampler + ?Sized>(sampler: &S, n: u64, seed: u64) -> (f64, f64) {
    let parts = run_chunks(n, seed, (0.0f64, 0.0f64), sampler, |acc, e| {
        acc.0 += e;
        acc.1 += e * e;
    });
    let (s, s2) = parts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let nf = n as f64;
    let mean = s / nf;
    let var = (s2 / nf - mean * mean).max(0.0);
    (mean, (var / nf).sqrt())
}

/// All draws in stream order.
pub fn mc_samples<S: Sampler + ?Sized>(sampler: &S, n: u64, seed: u64) -> Vec<f64> {
    run_chunks(n, seed, Vec::new(), sampler, |v, e| v.push(e)).concat()
}
