use std::f64::consts::TAU;

use rand::Rng;
use rand_distr::StandardNormal;

use super::rng::McRng;
use crate::error::{Error, Result};
use crate::localops::CanonicalPlane;
use crate::qstate::{NestedResolution, PureState, C64};

/// Draws one entanglement value per call.
pub trait Sampler: Sync {
    fn sample(&self, rng: &mut McRng) -> f64;
}

impl<F> Sampler for F
where
    F: Fn(&mut McRng) -> f64 + Sync,
{
    fn sample(&self, rng: &mut McRng) -> f64 {
        self(rng)
    }
}

/// 2|v₀v₃ − v₁v₂| / |v|², clamped to [0, 1].
fn conc(v: &[C64; 4]) -> f64 {
    let n2: f64 = v.iter().map(|c| c.norm_sqr()).sum();
    (2.0 * (v[0] * v[3] - v[1] * v[2]).norm() / n2).clamp(0.0, 1.0)
}

fn check_orthonormal(basis: &[PureState]) -> Result<()> {
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            let ov = a.inner(b).norm();
            if ov > 1e-10 {
                return Err(Error::Domain(format!("sampler basis is not orthonormal (overlap {ov:.3e})")));
            }
        }
    }
    Ok(())
}

/// Invariant measure on a plane: cos θ uniform, φ uniform, and
/// |ψ⟩ = cos(θ/2)e^{iφ/2}χ₁ + sin(θ/2)e^{−iφ/2}χ₂ built explicitly.
#[derive(Debug, Clone, Copy)]
pub struct PlaneSampler {
    chi1: [C64; 4],
    chi2: [C64; 4],
}

impl PlaneSampler {
    pub fn new(chi1: &PureState, chi2: &PureState) -> Result<Self> {
        check_orthonormal(&[*chi1, *chi2])?;
        Ok(Self {
            chi1: *chi1.amplitudes(),
            chi2: *chi2.amplitudes(),
        })
    }

    pub fn canonical(cp: &CanonicalPlane) -> Self {
        Self {
            chi1: *cp.chi1.amplitudes(),
            chi2: *cp.chi2.amplitudes(),
        }
    }
}

impl Sampler for PlaneSampler {
    fn sample(&self, rng: &mut McRng) -> f64 {
        let cos_t: f64 = rng.random_range(-1.0..=1.0);
        let phi: f64 = rng.random_range(0.0..TAU);
        let c = ((1.0 + cos_t) / 2.0).sqrt();
        let s = ((1.0 - cos_t) / 2.0).max(0.0).sqrt();
        let a = C64::from_polar(c, phi / 2.0);
        let b = C64::from_polar(s, -phi / 2.0);
        let v: [C64; 4] = std::array::from_fn(|i| a * self.chi1[i] + b * self.chi2[i]);
        conc(&v)
    }
}

/// Invariant measure on a three-dimensional subspace:
/// |ψ⟩ = cos θ χ₁ + e^{i(α+γ)} sin θ cos β χ₂ − e^{i(α−γ)} sin θ sin β χ₃
/// with sin⁴θ and cos 2β uniform and α, γ uniform on [0, 2π).
#[derive(Debug, Clone, Copy)]
pub struct TripleSampler {
    chi: [[C64; 4]; 3],
}

impl TripleSampler {
    pub fn new(basis: &[PureState; 3]) -> Result<Self> {
        check_orthonormal(basis)?;
        Ok(Self {
            chi: basis.map(|b| *b.amplitudes()),
        })
    }
}

impl Sampler for TripleSampler {
    fn sample(&self, rng: &mut McRng) -> f64 {
        let u: f64 = rng.random();
        let theta = u.powf(0.25).asin();
        let cos2b: f64 = rng.random_range(-1.0..=1.0);
        let beta = 0.5 * cos2b.acos();
        let alpha: f64 = rng.random_range(0.0..TAU);
        let gamma: f64 = rng.random_range(0.0..TAU);
        let (st, ct) = theta.sin_cos();
        let a1 = C64::new(ct, 0.0);
        let a2 = C64::from_polar(st * beta.cos(), alpha + gamma);
        let a3 = -C64::from_polar(st * beta.sin(), alpha - gamma);
        let v: [C64; 4] = std::array::from_fn(|i| a1 * self.chi[0][i] + a2 * self.chi[1][i] + a3 * self.chi[2][i]);
        conc(&v)
    }
}

/// Unitarily invariant pure state of the full space from eight normals.
#[derive(Debug, Clone, Copy, Default)]
pub struct FullSampler;

impl Sampler for FullSampler {
    fn sample(&self, rng: &mut McRng) -> f64 {
        loop {
            let v: [C64; 4] = std::array::from_fn(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
            let n2: f64 = v.iter().map(|c| c.norm_sqr()).sum();
            if n2 > 1e-300 {
                return conc(&v);
            }
        }
    }
}

/// A uniformly random phase of a fixed state; the sampled entanglement is
/// that of the state itself.
#[derive(Debug, Clone, Copy)]
pub struct RaySampler {
    psi: [C64; 4],
}

impl RaySampler {
    pub fn new(psi: &PureState) -> Self {
        Self { psi: *psi.amplitudes() }
    }
}

impl Sampler for RaySampler {
    fn sample(&self, rng: &mut McRng) -> f64 {
        let ph = C64::from_polar(1.0, rng.random_range(0.0..TAU));
        conc(&self.psi.map(|c| c * ph))
    }
}

#[derive(Debug, Clone, Copy)]
enum Component {
    Ray(RaySampler),
    Plane(PlaneSampler),
    Triple(TripleSampler),
    Full(FullSampler),
}

impl Component {
    fn sample(&self, rng: &mut McRng) -> f64 {
        match self {
            Component::Ray(s) => s.sample(rng),
            Component::Plane(s) => s.sample(rng),
            Component::Triple(s) => s.sample(rng),
            Component::Full(s) => s.sample(rng),
        }
    }
}

/// Mixed-state ensemble: pick subspace M with probability ω_M, then draw an
/// invariant pure state of that subspace in the original eigenbasis.
#[derive(Debug, Clone)]
pub struct MixtureSampler {
    cumulative: Vec<f64>,
    components: Vec<Component>,
}

impl MixtureSampler {
    pub fn new(res: &NestedResolution) -> Result<Self> {
        let v = &res.eigenvectors;
        let mut cumulative = Vec::new();
        let mut components = Vec::new();
        let mut acc = 0.0;
        for m in 0..4 {
            let w = res.weights[m];
            if w < 1e-12 {
                continue;
            }
            acc += w;
            cumulative.push(acc);
            components.push(match m {
                0 => Component::Ray(RaySampler::new(&v[0])),
                1 => Component::Plane(PlaneSampler::new(&v[0], &v[1])?),
                2 => Component::Triple(TripleSampler::new(&[v[0], v[1], v[2]])?),
                _ => Component::Full(FullSampler),
            });
        }
        Ok(Self { cumulative, components })
    }
}

impl Sampler for MixtureSampler {
    fn sample(&self, rng: &mut McRng) -> f64 {
        let total = *self.cumulative.last().expect("at least one component");
        let u: f64 = rng.random::<f64>() * total;
        let k = self.cumulative.partition_point(|&c| c <= u).min(self.components.len() - 1);
        self.components[k].sample(rng)
    }
}

pub fn sample_plane_entanglement(cp: &CanonicalPlane, rng: &mut McRng) -> f64 {
    PlaneSampler::canonical(cp).sample(rng)
}

pub fn sample_triple_entanglement(basis: &[PureState; 3], rng: &mut McRng) -> Result<f64> {
    Ok(TripleSampler::new(basis)?.sample(rng))
}

pub fn sample_full_entanglement(rng: &mut McRng) -> f64 {
    FullSampler.sample(rng)
}
