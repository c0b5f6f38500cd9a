use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use entpdf::analysis::{
    extract_markers, measure_extras, negativity, reconstruct_state, wootters_concurrence, MarkerSet,
    ReconstructionExtras,
};
use entpdf::entdensity::{
    mixed_pdf, plane_markers, plane_pdf, triple_pdf, universal_pdf, Annotations, DeltaComponent, DensityCurve,
    SEPARABLE_TOL,
};
use entpdf::haarmc::{
    compare_model, mc_histogram, ComparisonReport, FullSampler, MixtureSampler, Model, PlaneSampler, RaySampler,
    Sampler, Thresholds, TripleSampler,
};
use entpdf::localops::{canonical_plane, pure_concurrence, triple_canonical};
use entpdf::qstate::{eigendecompose, nested_resolution, DensityMatrix};
use entpdf::statelib::{ExpectedSummary, FamilySpec};
use serde::{Deserialize, Serialize};

use crate::{write_curve_csv, write_json, CliError, StateFile};

pub const MANIFEST_VERSION: u32 = 1;
pub const DEFAULT_GRID: usize = 512;
pub const DEFAULT_SAMPLES: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_BINS: usize = 256;
pub const MIXTURE_THRESHOLDS: Thresholds = Thresholds { ks: 0.015, sup: 0.02 };

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkersOutput {
    #[serde(flatten)]
    pub markers: MarkerSet,
    pub w4: f64,
    pub concurrence: f64,
    pub negativity: f64,
}

pub fn markers(rho: &DensityMatrix) -> Result<MarkersOutput, CliError> {
    let markers = extract_markers(rho)?;
    Ok(MarkersOutput {
        w4: markers.w4(),
        markers,
        concurrence: wootters_concurrence(rho),
        negativity: negativity(rho),
    })
}

pub fn extras(rho: &DensityMatrix) -> Result<ReconstructionExtras, CliError> {
    Ok(measure_extras(rho)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentEntry {
    pub subspace: String,
    pub rank: usize,
    pub weight: f64,
    pub file: String,
    pub points: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotations: Option<Annotations>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombinedEntry {
    pub file: String,
    pub points: usize,
    pub annotations: Annotations,
    pub curve_mass: f64,
    pub delta_mass: f64,
    pub total_mass: f64,
}

/// Index of the files written by [`pdf`]. Point masses are listed here and
/// never folded into the CSV curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: u32,
    pub grid: usize,
    pub markers: MarkerSet,
    pub weights: [f64; 4],
    pub deltas: Vec<DeltaComponent>,
    pub components: Vec<ComponentEntry>,
    pub combined: CombinedEntry,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

fn write_csv(path: &Path, curve: Option<&DensityCurve>) -> Result<usize, CliError> {
    let f = File::create(path).map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
    let (g, d) = curve.map(|c| (&c.grid[..], &c.density[..])).unwrap_or((&[], &[]));
    write_curve_csv(BufWriter::new(f), g, d)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
    Ok(g.len())
}

pub fn pdf(rho: &DensityMatrix, grid: usize, out_dir: &Path) -> Result<Manifest, CliError> {
    let mixed = mixed_pdf(rho, grid)?;
    let markers = extract_markers(rho)?;
    fs::create_dir_all(out_dir).map_err(|e| CliError::input(format!("cannot create {}: {e}", out_dir.display())))?;

    let parts: [(&str, usize, Option<(f64, &DensityCurve)>); 3] = [
        ("plane", 2, mixed.plane.as_ref().map(|p| (p.weight, &p.curve))),
        ("triple", 3, mixed.triple.as_ref().map(|t| (t.weight, &t.curve))),
        ("universal", 4, mixed.universal.as_ref().map(|u| (u.weight, &u.curve))),
    ];
    let mut components = Vec::new();
    for (name, rank, part) in parts {
        let file = format!("{name}.csv");
        let points = write_csv(&out_dir.join(&file), part.map(|p| p.1))?;
        components.push(ComponentEntry {
            subspace: name.to_string(),
            rank,
            weight: part.map_or(0.0, |p| p.0),
            file,
            points,
            annotations: part.map(|p| p.1.annotations.clone()),
            warnings: part.map(|p| p.1.warnings.clone()).unwrap_or_default(),
        });
    }
    let combined_file = "combined.csv".to_string();
    let points = write_csv(&out_dir.join(&combined_file), Some(&mixed.combined))?;
    let manifest = Manifest {
        format_version: MANIFEST_VERSION,
        grid,
        markers,
        weights: mixed.weights,
        deltas: mixed.deltas.clone(),
        components,
        combined: CombinedEntry {
            file: combined_file,
            points,
            annotations: mixed.combined.annotations.clone(),
            curve_mass: mixed.combined.trapezoid_mass(),
            delta_mass: mixed.delta_mass(),
            total_mass: mixed.total_mass(),
        },
        warnings: mixed.combined.warnings.clone(),
    };
    write_json(&out_dir.join("manifest.json"), &manifest)?;
    Ok(manifest)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceCheck {
    pub rank: usize,
    pub weight: f64,
    pub model: String,
    pub report: ComparisonReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub samples: u64,
    pub bins: usize,
    pub grid: usize,
    pub subspaces: Vec<SubspaceCheck>,
    pub mixture: ComparisonReport,
    pub pass: bool,
}

impl VerifyReport {
    /// One line per failed comparison.
    pub fn diagnostics(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .subspaces
            .iter()
            .filter(|s| !s.report.pass)
            .map(|s| {
                format!(
                    "rank {} ({}): KS {:.4} (limit {}), sup {:.4} (limit {})",
                    s.rank, s.model, s.report.ks_distance, s.report.thresholds.ks,
                    s.report.sup_norm_excluding_flagged_bins, s.report.thresholds.sup
                )
            })
            .collect();
        if !self.mixture.pass {
            out.push(format!(
                "mixture: KS {:.4} (limit {}), sup {:.4} (limit {})",
                self.mixture.ks_distance,
                self.mixture.thresholds.ks,
                self.mixture.sup_norm_excluding_flagged_bins,
                self.mixture.thresholds.sup
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub samples: u64,
    pub seed: u64,
    pub bins: usize,
    pub grid: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            bins: DEFAULT_BINS,
            grid: DEFAULT_GRID,
        }
    }
}

fn stream_seed(seed: u64, k: u64) -> u64 {
    seed.wrapping_add(k.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn check<S: Sampler>(sampler: &S, model: &Model, opts: &VerifyOptions, k: u64, th: Thresholds) -> Result<ComparisonReport, CliError> {
    let h = mc_histogram(sampler, opts.samples, opts.bins, stream_seed(opts.seed, k))?;
    Ok(compare_model(model, &h, th)?)
}

fn delta_model(location: f64) -> Model<'static> {
    Model {
        deltas: vec![DeltaComponent { location, weight: 1.0 }],
        curves: vec![],
    }
}

/// Monte Carlo check of every populated subspace and of the full mixture.
pub fn verify(rho: &DensityMatrix, opts: &VerifyOptions) -> Result<VerifyReport, CliError> {
    let res = nested_resolution(&eigendecompose(rho)?)?;
    let v = &res.eigenvectors;
    let th = Thresholds::default();
    let mut subspaces = Vec::new();
    let mut push = |rank: usize, model: &str, report: ComparisonReport| {
        subspaces.push(SubspaceCheck {
            rank,
            weight: res.weights[rank - 1],
            model: model.to_string(),
            report,
        });
    };
    if res.weights[0] > 1e-12 {
        let r = check(&RaySampler::new(&v[0]), &delta_model(pure_concurrence(&v[0])), opts, 1, th)?;
        push(1, "delta", r);
    }
    if res.weights[1] > 1e-12 {
        let cp = canonical_plane(&v[0], &v[1])?;
        let sampler = PlaneSampler::new(&v[0], &v[1])?;
        if plane_markers(cp.x, cp.y, cp.z).e_max < SEPARABLE_TOL {
            push(2, "delta", check(&sampler, &delta_model(0.0), opts, 2, th)?);
        } else {
            let curve = plane_pdf(&cp, opts.grid)?;
            push(2, "plane", check(&sampler, &Model::curve(&curve), opts, 2, th)?);
        }
    }
    if res.weights[2] > 1e-12 {
        let ct = triple_canonical(res.projection(3))?;
        let curve = triple_pdf(ct.e_perp, opts.grid)?;
        let sampler = TripleSampler::new(&[v[0], v[1], v[2]])?;
        push(3, "triple", check(&sampler, &Model::curve(&curve), opts, 3, th)?);
    }
    if res.weights[3] > 1e-12 {
        let curve = universal_pdf(opts.grid)?;
        push(4, "universal", check(&FullSampler, &Model::curve(&curve), opts, 4, th)?);
    }

    let mixed = mixed_pdf(rho, opts.grid)?;
    let model = Model {
        deltas: mixed.deltas.clone(),
        curves: mixed.curves(),
    };
    let mixture = check(&MixtureSampler::new(&res)?, &model, opts, 5, MIXTURE_THRESHOLDS)?;
    let pass = mixture.pass && subspaces.iter().all(|s| s.report.pass);
    Ok(VerifyReport {
        seed: opts.seed,
        samples: opts.samples,
        bins: opts.bins,
        grid: opts.grid,
        subspaces,
        mixture,
        pass,
    })
}

pub fn gen(spec: &FamilySpec) -> Result<(StateFile, ExpectedSummary), CliError> {
    let (rho, expected) = spec.generate()?;
    let params: Vec<String> = spec.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let label = format!("{} {}", spec.family.name(), params.join(" "));
    Ok((StateFile::from_density(&rho, Some(label), Some("entpdf gen".into())), expected))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionReport {
    pub requested: MarkerSet,
    pub obtained: MarkerSet,
    pub max_residual: f64,
}

pub fn reconstruct(ms: &MarkerSet, ex: &ReconstructionExtras) -> Result<(StateFile, ReconstructionReport), CliError> {
    let rho = reconstruct_state(ms, ex)?;
    let obtained = extract_markers(&rho)?;
    let report = ReconstructionReport {
        requested: *ms,
        obtained,
        max_residual: ms.max_abs_diff(&obtained),
    };
    let file = StateFile::from_density(&rho, Some("reconstructed".into()), Some("entpdf reconstruct".into()));
    Ok((file, report))
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

