//! Named two-qubit state families with their predicted density structure.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{pauli, ComplexMatrix4, DensityMatrix, PureState, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Product,
    VectorPolarized,
    Pseudopure,
    CrossTensor,
    Quadrupolar,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Product,
        Family::VectorPolarized,
        Family::Pseudopure,
        Family::CrossTensor,
        Family::Quadrupolar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Product => "product",
            Family::VectorPolarized => "vector_polarized",
            Family::Pseudopure => "pseudopure",
            Family::CrossTensor => "cross_tensor",
            Family::Quadrupolar => "quadrupolar",
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Family::Product => &["k1", "k2"],
            Family::VectorPolarized => &["p1", "p2"],
            Family::Pseudopure => &["k"],
            Family::CrossTensor => &["p"],
            Family::Quadrupolar => &["lam", "mu_q"],
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown family '{s}'")))
    }
}

/// Shape of the two-dimensional part of the density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaneTag {
    /// Every state in the plane is separable: a point mass at 0.
    Separable,
    /// ℰ/√(1 − ℰ²), the plane spanned by two Bell states.
    BellPlane,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpectedSummary {
    pub weights: [f64; 4],
    /// Location of the Π₁ point mass, when ω₁ > 0.
    pub delta: Option<f64>,
    pub plane: Option<PlaneTag>,
    pub e_perp: Option<f64>,
}

impl ExpectedSummary {
    fn new(weights: [f64; 4], delta: f64, plane: PlaneTag, e_perp: f64) -> Self {
        Self {
            weights,
            delta: (weights[0] > 0.0).then_some(delta),
            plane: (weights[1] > 0.0).then_some(plane),
            e_perp: (weights[2] > 0.0).then_some(e_perp),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub params: BTreeMap<String, f64>,
}

impl FamilySpec {
    pub fn new(family: Family, params: &[(&str, f64)]) -> Self {
        Self {
            family,
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }

    fn param(&self, name: &str) -> Result<f64> {
        let v = *self
            .params
            .get(name)
            .ok_or_else(|| Error::Domain(format!("{} requires parameter {name}", self.family.name())))?;
        if !v.is_finite() {
            return Err(Error::Domain(format!("parameter {name} must be finite")));
        }
        Ok(v)
    }

    pub fn generate(&self) -> Result<(DensityMatrix, ExpectedSummary)> {
        let names = self.family.param_names();
        if let Some(extra) = self.params.keys().find(|k| !names.contains(&k.as_str())) {
            return Err(Error::Domain(format!(
                "{} does not take parameter {extra}",
                self.family.name()
            )));
        }
        match self.family {
            Family::Product => gen_product(self.param("k1")?, self.param("k2")?),
            Family::VectorPolarized => gen_vector_polarized(self.param("p1")?, self.param("p2")?),
            Family::Pseudopure => gen_pseudopure(self.param("k")?),
            Family::CrossTensor => gen_cross_tensor(self.param("p")?),
            Family::Quadrupolar => gen_quadrupolar(self.param("lam")?, self.param("mu_q")?),
        }
    }

    /// One parameter choice per family away from degeneracies, plus both
    /// signs of the pseudopure parameter.
    pub fn representative() -> Vec<FamilySpec> {
        vec![
            FamilySpec::new(Family::Product, &[("k1", 0.8), ("k2", 0.4)]),
            FamilySpec::new(Family::VectorPolarized, &[("p1", 0.5), ("p2", 0.3)]),
            FamilySpec::new(Family::Pseudopure, &[("k", -0.25)]),
            FamilySpec::new(Family::Pseudopure, &[("k", 0.2)]),
            FamilySpec::new(Family::CrossTensor, &[("p", 0.1)]),
            FamilySpec::new(Family::Quadrupolar, &[("lam", 0.15), ("mu_q", 0.08)]),
        ]
    }
}

fn require(ok: bool, constraint: &str, family: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(format!("{family}: parameters violate {constraint}")))
    }
}

/// ω from an unsorted spectrum.
fn weights_of(mut l: [f64; 4]) -> [f64; 4] {
    l.sort_by(|a, b| b.total_cmp(a));
    let clip = |v: f64| if v.abs() < 1e-15 { 0.0 } else { v };
    [
        clip((l[0] - l[1]) / l[0]),
        clip((l[1] - l[2]) / l[0]),
        clip((l[2] - l[3]) / l[0]),
        clip(l[3] / l[0]),
    ]
}

fn build(m: ComplexMatrix4) -> Result<DensityMatrix> {
    DensityMatrix::new(m)
}

/// ρ₁ ⊗ ρ₂ with ρ_i = (𝟙 + k_i σ_z)/2.
pub fn gen_product(k1: f64, k2: f64) -> Result<(DensityMatrix, ExpectedSummary)> {
    require((0.0..=1.0).contains(&k1) && (0.0..=1.0).contains(&k2), "0 ≤ k1, k2 ≤ 1", "product")?;
    let d = |k: f64| [(1.0 + k) / 2.0, (1.0 - k) / 2.0];
    let (a, b) = (d(k1), d(k2));
    let diag = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]];
    let rho = build(ComplexMatrix4::diag(diag))?;
    Ok((rho, ExpectedSummary::new(weights_of(diag), 0.0, PlaneTag::Separable, 0.0)))
}

/// (𝟙 + p₁σ_z⊗𝟙 + p₂𝟙⊗σ_z)/4
pub fn gen_vector_polarized(p1: f64, p2: f64) -> Result<(DensityMatrix, ExpectedSummary)> {
    let fam = "vector_polarized";
    require((0.0..=1.0).contains(&p1) && (0.0..=1.0).contains(&p2), "0 ≤ p1, p2 ≤ 1", fam)?;
    require(p1 + p2 <= 1.0 + 1e-15, "p1 + p2 ≤ 1 (positivity)", fam)?;
    let diag = [
        (1.0 + p1 + p2) / 4.0,
        (1.0 + p1 - p2) / 4.0,
        (1.0 - p1 + p2) / 4.0,
        ((1.0 - p1 - p2) / 4.0).max(0.0),
    ];
    let rho = build(ComplexMatrix4::diag(diag))?;
    Ok((rho, ExpectedSummary::new(weights_of(diag), 0.0, PlaneTag::Separable, 0.0)))
}

/// (𝟙 + k σ⃗₁·σ⃗₂)/4
pub fn gen_pseudopure(k: f64) -> Result<(DensityMatrix, ExpectedSummary)> {
    require((-1.0..=1.0 / 3.0).contains(&k), "−1 ≤ k ≤ 1/3", "pseudopure")?;
    let (x, y, z) = (pauli::X, pauli::Y, pauli::Z);
    let ss = ComplexMatrix4::kron(&x, &x) + ComplexMatrix4::kron(&y, &y) + ComplexMatrix4::kron(&z, &z);
    let rho = build((ComplexMatrix4::identity() + ss.scale(k)).scale(0.25))?;
    let weights = if k < 0.0 {
        [-4.0 * k / (1.0 - 3.0 * k), 0.0, 0.0, (1.0 + k) / (1.0 - 3.0 * k)]
    } else {
        [0.0, 0.0, 4.0 * k / (1.0 + k), (1.0 - 3.0 * k) / (1.0 + k)]
    };
    Ok((rho, ExpectedSummary::new(weights, 1.0, PlaneTag::BellPlane, 1.0)))
}

/// 𝟙/4 + p(σ_x⊗σ_y − σ_y⊗σ_x)
pub fn gen_cross_tensor(p: f64) -> Result<(DensityMatrix, ExpectedSummary)> {
    require((0.0..=0.125).contains(&p), "0 ≤ p ≤ 1/8", "cross_tensor")?;
    let (x, y) = (pauli::X, pauli::Y);
    let t = ComplexMatrix4::kron(&x, &y) - ComplexMatrix4::kron(&y, &x);
    let rho = build(ComplexMatrix4::identity().scale(0.25) + t.scale(p))?;
    let l1 = 0.25 + 2.0 * p;
    let w = 2.0 * p / l1;
    let weights = [w, 0.0, w, (0.25 - 2.0 * p) / l1];
    Ok((rho, ExpectedSummary::new(weights, 1.0, PlaneTag::BellPlane, 1.0)))
}

/// Bell-diagonal state with eigenvalues ¼ + 2λ, ¼, ¼ − λ + μ, ¼ − λ − μ.
pub fn gen_quadrupolar(lam: f64, mu_q: f64) -> Result<(DensityMatrix, ExpectedSummary)> {
    let fam = "quadrupolar";
    require(lam >= mu_q && mu_q >= 0.0, "lam ≥ mu_q ≥ 0", fam)?;
    require(lam + mu_q <= 0.25 + 1e-15, "lam + mu_q ≤ 1/4", fam)?;
    let (a, b) = (0.25 - lam, 0.25 + lam);
    let rho = build(ComplexMatrix4::from_real([
        [a, 0.0, 0.0, mu_q],
        [0.0, b, lam, 0.0],
        [0.0, lam, b, 0.0],
        [mu_q, 0.0, 0.0, a],
    ]))?;
    let l1 = 0.25 + 2.0 * lam;
    let weights = [
        2.0 * lam / l1,
        (lam - mu_q) / l1,
        2.0 * mu_q / l1,
        ((0.25 - lam - mu_q) / l1).max(0.0),
    ];
    Ok((rho, ExpectedSummary::new(weights, 1.0, PlaneTag::BellPlane, 1.0)))
}

/// A generic rank-4 state with eigenvalues (0.385, 0.288, 0.231, 0.096),
/// used throughout the tests as a worked example: ℰ₁ ≈ 0.0998,
/// ℰ_max ≈ 0.8535, ℰ_⊥ ≈ 0.6005.
pub fn worked_example_state() -> DensityMatrix {
    let raw = [
        [0.998, 0.0, 0.031, 0.050],
        [0.059, -0.009, -0.528, -0.847],
        [0.0, 0.924, 0.325, -0.202],
        [0.0, 0.383, -0.784, 0.489],
    ];
    let mut basis: Vec<[C64; 4]> = Vec::with_capacity(4);
    for r in raw {
        let mut v = r.map(|x| C64::new(x, 0.0));
        for b in &basis {
            let proj: C64 = b.iter().zip(&v).map(|(p, q)| p.conj() * q).sum();
            for i in 0..4 {
                v[i] -= proj * b[i];
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        basis.push(v.map(|z| z / n));
    }
    let lambdas = [0.385, 0.288, 0.231, 0.096];
    let parts: Vec<(f64, PureState)> = lambdas
        .iter()
        .zip(&basis)
        .map(|(l, v)| (*l, PureState::new(*v).expect("normalized")))
        .collect();
    DensityMatrix::mixture(&parts).expect("valid spectrum")
}
