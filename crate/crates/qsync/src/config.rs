//! JSON-shaped sweep configurations and custom model files.
//!
//! Complex matrices in model files are nested arrays whose innermost
//! element is a `[re, im]` pair. All rates are in units of the model's
//! reference rate unless overridden through `params`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{tqo_model, tqo_model_dimensionless, vdp_auto_truncation, vdp_model,
    DEFAULT_TAIL_TOL};
use crate::models::{DriveSet, ModelSpec};
use crate::operator::Operator;
use num_complex::Complex64 as C64;

/// Which model a sweep runs over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelChoice {
    /// One of the built-in models.
    Builtin(BuiltinModel),
    /// A custom model file; measures run on it through the `qfim` and
    /// `verify` commands, which take the model as-is.
    Custom { custom: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BuiltinModel {
    Vdp,
    Tqo,
}

/// Grid of sweep-parameter values: an explicit strictly increasing list, or
/// a log-spaced specification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    List(Vec<f64>),
    Log { start: f64, stop: f64, count: usize },
}

impl GridSpec {
    /// Materializes and validates the grid: nonempty and strictly
    /// increasing.
    pub fn values(&self) -> Result<Vec<f64>> {
        let values = match self {
            GridSpec::List(list) => list.clone(),
            GridSpec::Log { start, stop, count } => {
                if !(*start > 0.0 && *stop > *start) {
                    return Err(Error::Config(format!(
                        "log grid needs 0 < start < stop, got start = {start}, stop = {stop}"
                    )));
                }
                if *count < 2 {
                    return Err(Error::Config(format!(
                        "log grid needs at least 2 points, got {count}"
                    )));
                }
                let (ls, le) = (start.ln(), stop.ln());
                (0..*count)
                    .map(|i| (ls + (le - ls) * i as f64 / (*count - 1) as f64).exp())
                    .collect()
            }
        };
        if values.is_empty() {
            return Err(Error::Config("grid is empty".into()));
        }
        if values.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Config(
                "grid values must be strictly increasing".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("grid values must be finite".into()));
        }
        Ok(values)
    }
}

/// Which drives of the model's family a sweep scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DriveSelection {
    /// A named preset: `"all"`, `"all-x"` (labels starting with `x`), or
    /// `"single-particle-x"` (x labels without a partner-z factor).
    Preset(String),
    /// Explicit drive labels, in the requested order.
    Named(Vec<String>),
}

impl Default for DriveSelection {
    fn default() -> Self {
        DriveSelection::Preset("all".into())
    }
}

impl DriveSelection {
    /// Resolves the selection against a model's drive family.
    pub fn resolve(&self, drives: &DriveSet) -> Result<Vec<String>> {
        let labels: Vec<String> = match self {
            DriveSelection::Named(list) => list.clone(),
            DriveSelection::Preset(name) => match name.as_str() {
                "all" => drives.labels().to_vec(),
                "all-x" => drives
                    .labels()
                    .iter()
                    .filter(|l| l.starts_with('x'))
                    .cloned()
                    .collect(),
                "single-particle-x" => drives
                    .labels()
                    .iter()
                    .filter(|l| l.starts_with('x') && !l.contains('z'))
                    .cloned()
                    .collect(),
                other => {
                    return Err(Error::Config(format!(
                        "unknown drive preset {other:?}; use \"all\", \"all-x\", \
                         \"single-particle-x\", or a list of labels"
                    )))
                }
            },
        };
        if labels.is_empty() {
            return Err(Error::Config("drive selection matched no drives".into()));
        }
        for label in &labels {
            if drives.get(label).is_none() {
                return Err(Error::Config(format!(
                    "unknown drive {label:?}; available: {}",
                    drives.labels().join(", ")
                )));
            }
        }
        Ok(labels)
    }
}

/// Measures a sweep can emit, one CSV file each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasureKind {
    #[serde(rename = "qfi")]
    Qfi,
    #[serde(rename = "qfim")]
    Qfim,
    #[serde(rename = "omega_tilde")]
    OmegaTilde,
    #[serde(rename = "mu")]
    Mu,
    #[serde(rename = "D")]
    Orthogonality,
    #[serde(rename = "eigendrives")]
    Eigendrives,
}

impl MeasureKind {
    /// Stable file stem for the measure's CSV output.
    pub fn file_stem(&self) -> &'static str {
        match self {
            MeasureKind::Qfi => "qfi",
            MeasureKind::Qfim => "qfim",
            MeasureKind::OmegaTilde => "omega_tilde",
            MeasureKind::Mu => "mu",
            MeasureKind::Orthogonality => "D",
            MeasureKind::Eigendrives => "eigendrives",
        }
    }
}

/// Optional numeric overrides for a sweep.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    /// Steady-state tail weight for automatic Fock truncation
    /// (default 1e-8).
    #[serde(default)]
    pub tail_tol: Option<f64>,
    /// Perturbation strength for the direct entropy measure
    /// (default 1e-3).
    #[serde(default)]
    pub omega_eps: Option<f64>,
}

/// A declarative sweep: which model, which parameter and grid, which drives
/// and measures, and where to write the results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub model: ModelChoice,
    /// `"kappa_ratio"` (gain/damping, van der Pol) or `"gbar"` (coupling
    /// over Gamma, two-qubit oscillator).
    pub sweep_parameter: String,
    pub grid: GridSpec,
    #[serde(default)]
    pub drives: DriveSelection,
    pub outputs: Vec<MeasureKind>,
    /// Directory that receives one CSV per measure plus `manifest.json`.
    pub output_path: String,
    /// Fixed model parameters that are not swept (for example `kappa1`,
    /// `Gamma`, `d1`, `d2`).
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub tolerances: ToleranceOverrides,
}

impl SweepConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        let config: SweepConfig = serde_json::from_str(&text)?;
        Ok(config)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path.as_ref(), text + "\n")?;
        Ok(())
    }
}

/// One drive of a custom model file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveEntry {
    pub label: String,
    pub matrix: ComplexMatrix,
}

/// Row-major complex matrix with `[re, im]` entries.
pub type ComplexMatrix = Vec<Vec<[f64; 2]>>;

fn matrix_to_operator(name: &str, hdim: usize, m: &ComplexMatrix) -> Result<Operator> {
    if m.len() != hdim || m.iter().any(|row| row.len() != hdim) {
        return Err(Error::Dimension(format!(
            "matrix {name} is not {hdim}x{hdim}"
        )));
    }
    Ok(Operator::from_fn(hdim, |i, j| {
        C64::new(m[i][j][0], m[i][j][1])
    }))
}

fn operator_to_matrix(op: &Operator) -> ComplexMatrix {
    let d = op.dim();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let z = op.matrix()[(i, j)];
                    [z.re, z.im]
                })
                .collect()
        })
        .collect()
}

/// Serialized model: explicit matrices for the Hamiltonian, jumps, symmetry
/// generator, and drives. Loading re-checks every model invariant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomModelFile {
    #[serde(default)]
    pub name: Option<String>,
    pub hdim: usize,
    pub h0: ComplexMatrix,
    #[serde(default)]
    pub gain_jumps: Vec<ComplexMatrix>,
    #[serde(default)]
    pub damping_jumps: Vec<ComplexMatrix>,
    pub symmetry_generator: ComplexMatrix,
    pub drives: Vec<DriveEntry>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl CustomModelFile {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        let file: CustomModelFile = serde_json::from_str(&text)?;
        Ok(file)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path.as_ref(), text + "\n")?;
        Ok(())
    }

    /// Builds and fully re-validates the model.
    pub fn into_model_spec(&self) -> Result<ModelSpec> {
        let hdim = self.hdim;
        if hdim == 0 {
            return Err(Error::Config("hdim must be positive".into()));
        }
        let h0 = matrix_to_operator("h0", hdim, &self.h0)?;
        let gain = self
            .gain_jumps
            .iter()
            .enumerate()
            .map(|(i, m)| matrix_to_operator(&format!("gain_jumps[{i}]"), hdim, m))
            .collect::<Result<Vec<_>>>()?;
        let damping = self
            .damping_jumps
            .iter()
            .enumerate()
            .map(|(i, m)| matrix_to_operator(&format!("damping_jumps[{i}]"), hdim, m))
            .collect::<Result<Vec<_>>>()?;
        let generator = matrix_to_operator("symmetry_generator", hdim, &self.symmetry_generator)?;
        let mut ops = Vec::with_capacity(self.drives.len());
        let mut labels = Vec::with_capacity(self.drives.len());
        for entry in &self.drives {
            ops.push(matrix_to_operator(
                &format!("drive {:?}", entry.label),
                hdim,
                &entry.matrix,
            )?);
            labels.push(entry.label.clone());
        }
        let drives = DriveSet::new(ops, labels)?;
        ModelSpec::new(
            self.name.clone().unwrap_or_else(|| "custom".into()),
            h0,
            gain,
            damping,
            generator,
            drives,
            self.params.clone(),
        )
    }

    /// Serializes an existing model (for example a built-in) so it can be
    /// saved, edited, and reloaded.
    pub fn from_model_spec(spec: &ModelSpec) -> Self {
        CustomModelFile {
            name: Some(spec.name().to_string()),
            hdim: spec.hdim(),
            h0: operator_to_matrix(spec.h0()),
            gain_jumps: spec.gain_jumps().iter().map(operator_to_matrix).collect(),
            damping_jumps: spec
                .damping_jumps()
                .iter()
                .map(operator_to_matrix)
                .collect(),
            symmetry_generator: operator_to_matrix(spec.symmetry_generator()),
            drives: spec
                .drives()
                .generators()
                .iter()
                .zip(spec.drives().labels())
                .map(|(op, label)| DriveEntry {
                    label: label.clone(),
                    matrix: operator_to_matrix(op),
                })
                .collect(),
            params: spec.params().clone(),
        }
    }
}

fn reject_unknown_params(params: &BTreeMap<String, f64>, known: &[&str]) -> Result<()> {
    for key in params.keys() {
        if !known.contains(&key.as_str()) {
            return Err(Error::Config(format!(
                "unknown parameter {key:?}; known: {}",
                known.join(", ")
            )));
        }
    }
    Ok(())
}

/// Builds the van der Pol model from a parameter map: `kappa1` (default 1),
/// `kappa2` (default 1), `n_trunc` (0 or absent picks the truncation
/// automatically with `tail_tol`, default 1e-8).
pub fn build_vdp(params: &BTreeMap<String, f64>) -> Result<ModelSpec> {
    reject_unknown_params(params, &["kappa1", "kappa2", "kappa_ratio", "n_trunc", "tail_tol"])?;
    let kappa1 = params.get("kappa1").copied().unwrap_or(1.0);
    let kappa2 = match (params.get("kappa2"), params.get("kappa_ratio")) {
        (Some(_), Some(_)) => {
            return Err(Error::Config(
                "give either kappa2 or kappa_ratio, not both".into(),
            ))
        }
        (Some(k2), None) => *k2,
        (None, Some(ratio)) => kappa1 / ratio,
        (None, None) => 1.0,
    };
    let n_trunc = match params.get("n_trunc").copied() {
        Some(n) if n > 0.0 => n as usize,
        _ => {
            let tail = params.get("tail_tol").copied().unwrap_or(DEFAULT_TAIL_TOL);
            vdp_auto_truncation(kappa1, kappa2, tail)?
        }
    };
    vdp_model(kappa1, kappa2, n_trunc)
}

/// Builds the two-qubit oscillator from a parameter map: either the
/// dimensionless family (`gbar`, `d1`, `d2`, `Gamma`; defaults 0.5, -1, 1,
/// 1) or explicit rates (`g`, `Gamma`, `w1`, `gamma1`, `w2`, `gamma2`) when
/// any per-qubit rate is given.
pub fn build_tqo(params: &BTreeMap<String, f64>) -> Result<ModelSpec> {
    reject_unknown_params(
        params,
        &["gbar", "d1", "d2", "Gamma", "g", "w1", "gamma1", "w2", "gamma2"],
    )?;
    let explicit = ["w1", "gamma1", "w2", "gamma2"]
        .iter()
        .any(|k| params.contains_key(*k));
    let gamma_big = params.get("Gamma").copied().unwrap_or(1.0);
    if explicit {
        if params.contains_key("gbar") || params.contains_key("d1") || params.contains_key("d2") {
            return Err(Error::Config(
                "cannot mix explicit rates with dimensionless parameters".into(),
            ));
        }
        tqo_model(
            params.get("g").copied().unwrap_or(0.0),
            gamma_big,
            params.get("w1").copied().unwrap_or(0.0),
            params.get("gamma1").copied().unwrap_or(gamma_big),
            params.get("w2").copied().unwrap_or(gamma_big),
            params.get("gamma2").copied().unwrap_or(0.0),
        )
    } else {
        if params.contains_key("g") {
            return Err(Error::Config(
                "give gbar for the dimensionless family (g is for explicit rates)".into(),
            ));
        }
        tqo_model_dimensionless(
            params.get("gbar").copied().unwrap_or(0.5),
            params.get("d1").copied().unwrap_or(-1.0),
            params.get("d2").copied().unwrap_or(1.0),
            gamma_big,
        )
    }
}

/// Resolves a CLI model source: `builtin:vdp`, `builtin:tqo`, or a path to
/// a custom model file. `params` apply to built-ins only.
pub fn resolve_model_source(source: &str, params: &BTreeMap<String, f64>) -> Result<ModelSpec> {
    match source {
        "builtin:vdp" => build_vdp(params),
        "builtin:tqo" => build_tqo(params),
        path => {
            if !params.is_empty() {
                return Err(Error::Config(
                    "--params applies to built-in models only; edit the model file instead".into(),
                ));
            }
            CustomModelFile::load(path)?.into_model_spec()
        }
    }
}
