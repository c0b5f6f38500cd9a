//! Monte Carlo oracles: invariant-measure samplers for each subspace
//! dimension, seeded parallel histograms, and comparison against closed forms.

mod compare;
mod histogram;
mod rng;
mod samplers;

pub use compare::{compare, compare_model, ComparisonReport, Model, Thresholds};
pub use histogram::{mc_histogram, mc_mean, mc_samples, Histogram, CHUNK};
pub use rng::{McRng, RngStream};
pub use samplers::{
    sample_full_entanglement, sample_plane_entanglement, sample_triple_entanglement, FullSampler,
    MixtureSampler, PlaneSampler, RaySampler, Sampler, TripleSampler,
};
