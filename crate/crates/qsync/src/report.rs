//! One-shot drive-family reports: the information matrix for a model at
//! fixed parameters, its eigendrive decomposition, and the orthogonality of
//! every drive, rendered both as a human-readable table and as JSON.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::{resolve_model_source, DriveSelection};
use crate::density::spectral_decompose;
use crate::error::Result;
use crate::metrology::{optimal_drive, orthogonality, qfim};
use crate::models::ModelSpec;
use crate::steady::{perturbed_response, steady_state};
use crate::sweep::format_sci;
use crate::symmetry::label_sectors;

/// Everything the report prints, in one serializable record. Information
/// values (`qfim`, `eigenvalues`) carry the dimensionless normalization
/// recorded in `scale`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QfimReport {
    /// Model name the values were computed for.
    pub model: String,
    /// Hilbert-space dimension of the model.
    pub hdim: usize,
    /// Model parameters, echoed for reproducibility.
    pub params: BTreeMap<String, f64>,
    /// Drive labels indexing the matrix rows/columns.
    pub drive_labels: Vec<String>,
    /// Name of the normalization factor (`"kappa1^2"`, `"Gamma^2"`, `"1"`).
    pub scale_name: String,
    /// Numeric value of the normalization factor applied to `qfim` and
    /// `eigenvalues`.
    pub scale: f64,
    /// Normalized information matrix, row-major.
    pub qfim: Vec<Vec<f64>>,
    /// Normalized eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// Unit coefficient vector of the most informative drive combination.
    pub n_opt: Vec<f64>,
    /// Whether the top eigenvalue is degenerate (the optimal direction is
    /// then not unique).
    pub degenerate_top: bool,
    /// Orthogonality `D_m` of each drive within the family.
    pub orthogonality: Vec<f64>,
}

/// The squared reference rate that makes information values dimensionless.
fn normalization(model: &ModelSpec) -> (String, f64) {
    match model.name() {
        "vdp" => {
            let k1 = model.params().get("kappa1").copied().unwrap_or(1.0);
            ("kappa1^2".into(), k1 * k1)
        }
        "tqo" => {
            let g = model.params().get("Gamma").copied().unwrap_or(1.0);
            ("Gamma^2".into(), g * g)
        }
        _ => ("1".into(), 1.0),
    }
}

/// Computes the full drive-family report for a model source (`builtin:vdp`,
/// `builtin:tqo`, or a model file path) at the given parameter overrides,
/// restricted to the selected drives.
pub fn qfim_report(
    source: &str,
    params: &BTreeMap<String, f64>,
    drives: &DriveSelection,
) -> Result<QfimReport> {
    let model = resolve_model_source(source, params)?;
    qfim_report_for_model(&model, drives)
}

/// Same as [`qfim_report`], for an already constructed model.
pub fn qfim_report_for_model(model: &ModelSpec, drives: &DriveSelection) -> Result<QfimReport> {
    let labels = drives.resolve(model.drives())?;
    let (scale_name, scale) = normalization(model);

    let l0 = model.liouvillian()?;
    let rho0 = steady_state(&l0)?;
    let decomp = spectral_decompose(&rho0)?;
    let labeled = label_sectors(&decomp, &model.charges()?)?;

    let mut resps = Vec::with_capacity(labels.len());
    for label in &labels {
        let l1 = model.drive_liouvillian(label)?;
        resps.push(perturbed_response(&l0, &l1, &rho0)?);
    }
    let f = qfim(&labeled, &resps)?;
    let eig = optimal_drive(&f)?;
    let mut d = Vec::with_capacity(labels.len());
    for m in 0..labels.len() {
        d.push(orthogonality(&f, m)?);
    }

    let m = f.size();
    Ok(QfimReport {
        model: model.name().to_string(),
        hdim: model.hdim(),
        params: model.params().clone(),
        drive_labels: labels,
        scale_name,
        scale,
        qfim: (0..m)
            .map(|a| (0..m).map(|b| scale * f.entry(a, b)).collect())
            .collect(),
        eigenvalues: eig.eigenvalues().iter().map(|l| scale * l).collect(),
        n_opt: eig.n_opt().iter().copied().collect(),
        degenerate_top: eig.degenerate_top(),
        orthogonality: d,
    })
}

/// Renders the report as the text block the CLI prints.
pub fn render_report(report: &QfimReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "model: {} (dimension {})\n",
        report.model, report.hdim
    ));
    let params: Vec<String> = report
        .params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    out.push_str(&format!("params: {}\n", params.join(" ")));
    out.push_str(&format!(
        "scale: values multiplied by {} = {}\n",
        report.scale_name,
        format_sci(report.scale)
    ));

    out.push_str("\nqfim:\n");
    for (label, row) in report.drive_labels.iter().zip(&report.qfim) {
        let cells: Vec<String> = row.iter().map(|v| format_sci(*v)).collect();
        out.push_str(&format!("  {:<6} {}\n", label, cells.join(" ")));
    }

    out.push_str("\neigenvalues (descending):\n");
    for (i, l) in report.eigenvalues.iter().enumerate() {
        out.push_str(&format!("  lambda_{i} = {}\n", format_sci(*l)));
    }

    out.push_str(&format!(
        "\noptimal drive (degenerate_top = {}):\n",
        report.degenerate_top
    ));
    for (label, c) in report.drive_labels.iter().zip(&report.n_opt) {
        out.push_str(&format!("  n_opt[{label}] = {}\n", format_sci(*c)));
    }

    out.push_str("\northogonality:\n");
    for (label, d) in report.drive_labels.iter().zip(&report.orthogonality) {
        out.push_str(&format!("  D_{label} = {}\n", format_sci(*d)));
    }
    out
}
