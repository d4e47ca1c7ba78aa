//! Built-in self-checks: cross-validation of the numerical pipeline against
//! closed-form references and independent numerical routes, reported as a
//! per-check table with a measured value, a bound, and a pass flag.

use crate::config::CustomModelFile;
use crate::density::spectral_decompose;
use crate::error::Result;
use crate::measures::method_of_moments_mu;
use crate::metrology::{optimal_drive, orthogonality, qfi, qfi_fidelity_oracle, qfim};
use crate::models::{
    tqo_analytic_response, tqo_analytic_steady, tqo_model_dimensionless, tqo_response_moments,
    vdp_auto_truncation, vdp_model, ModelSpec, DEFAULT_TAIL_TOL,
};
use crate::operator::Operator;
use crate::steady::{
    finite_difference_response, perturbed_response, steady_state_details, SteadyStateDetails,
};
use crate::sweep::format_sci;
use crate::symmetry::{label_sectors, SectorLabeledDecomposition};

/// One row of the verification table. `passed` means
/// `measured op tolerance` holds, where `op` is `"<="` or `">="`.
#[derive(Debug, Clone)]
pub struct VerifyCheck {
    pub name: String,
    pub measured: f64,
    pub op: &'static str,
    pub tolerance: f64,
    pub passed: bool,
}

impl VerifyCheck {
    fn at_most(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            op: "<=",
            tolerance,
            passed: measured <= tolerance,
        }
    }

    fn at_least(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            op: ">=",
            tolerance,
            passed: measured >= tolerance,
        }
    }
}

/// A full verification run over one target.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub target: String,
    pub checks: Vec<VerifyCheck>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Solved {
    details: SteadyStateDetails,
    labeled: SectorLabeledDecomposition,
}

fn solve(model: &ModelSpec) -> Result<Solved> {
    let l0 = model.liouvillian()?;
    let details = steady_state_details(&l0)?;
    let decomp = spectral_decompose(&details.rho)?;
    let labeled = label_sectors(&decomp, &model.charges()?)?;
    Ok(Solved { details, labeled })
}

/// Relative disagreement between the linear-response solver and a central
/// finite difference of the steady state.
fn response_vs_fd(model: &ModelSpec, label: &str, step: f64) -> Result<f64> {
    let l0 = model.liouvillian()?;
    let l1 = model.drive_liouvillian(label)?;
    let rho0 = steady_state_details(&l0)?.rho;
    let resp = perturbed_response(&l0, &l1, &rho0)?;
    let fd = finite_difference_response(&l0, &l1, step)?;
    let diff = resp.op() - &fd;
    Ok(diff.frobenius_norm() / resp.op().frobenius_norm().max(f64::MIN_POSITIVE))
}

fn oracle_rel_err(model: &ModelSpec, label: &str, eps: f64) -> Result<f64> {
    let l0 = model.liouvillian()?;
    let l1 = model.drive_liouvillian(label)?;
    let solved = solve(model)?;
    let resp = perturbed_response(&l0, &l1, &solved.details.rho)?;
    let f = qfi(&solved.labeled, &resp);
    let oracle = qfi_fidelity_oracle(&l0, &l1, eps)?;
    Ok((f - oracle).abs() / f.max(f64::MIN_POSITIVE))
}

fn vdp_suite() -> Result<Vec<VerifyCheck>> {
    let mut checks = Vec::new();

    let n = vdp_auto_truncation(1.0, 1.0, DEFAULT_TAIL_TOL)?;
    let model = vdp_model(1.0, 1.0, n)?;
    let solved = solve(&model)?;
    checks.push(VerifyCheck::at_most(
        "vdp/steady_residual",
        solved.details.relative_residual,
        1e-10,
    ));
    checks.push(VerifyCheck::at_least(
        "vdp/uniqueness_gap",
        solved.details.gap_ratio,
        1e-8,
    ));
    checks.push(VerifyCheck::at_most(
        "vdp/response_vs_finite_difference",
        response_vs_fd(&model, "x", 1e-5)?,
        1e-6,
    ));
    checks.push(VerifyCheck::at_most(
        "vdp/qfi_vs_fidelity_oracle",
        oracle_rel_err(&model, "x", 1e-4)?,
        1e-3,
    ));

    let l0 = model.liouvillian()?;
    let l1 = model.drive_liouvillian("x")?;
    let resp = perturbed_response(&l0, &l1, &solved.details.rho)?;
    let f = qfi(&solved.labeled, &resp);
    let mu = method_of_moments_mu(&solved.details.rho, &resp, &Operator::momentum(n))?;
    checks.push(VerifyCheck::at_most("vdp/mu_over_qfi", mu / f, 1.0 + 1e-9));

    // Quantum limit: two-photon loss dominates, the steady state confines to
    // the lowest three levels and kappa1^2 F approaches 4/81.
    let ql = vdp_model(1.0, 1e6, 6)?;
    let ql_solved = solve(&ql)?;
    let ql_l0 = ql.liouvillian()?;
    let ql_resp = perturbed_response(&ql_l0, &ql.drive_liouvillian("x")?, &ql_solved.details.rho)?;
    let ql_f = qfi(&ql_solved.labeled, &ql_resp);
    checks.push(VerifyCheck::at_most(
        "vdp/quantum_limit_qfi",
        (ql_f - 4.0 / 81.0).abs() / (4.0 / 81.0),
        1e-2,
    ));

    // Growing the Fock cutoff by a quarter must not move the information.
    let grown = vdp_model(1.0, 1.0, (n * 5).div_ceil(4))?;
    let g_solved = solve(&grown)?;
    let g_l0 = grown.liouvillian()?;
    let g_resp =
        perturbed_response(&g_l0, &grown.drive_liouvillian("x")?, &g_solved.details.rho)?;
    let g_f = qfi(&g_solved.labeled, &g_resp);
    checks.push(VerifyCheck::at_most(
        "vdp/truncation_stability",
        (g_f - f).abs() / f,
        1e-3,
    ));

    Ok(checks)
}

fn tqo_suite() -> Result<Vec<VerifyCheck>> {
    let mut checks = Vec::new();
    let gbars = [0.0, 0.3, 0.866_025_403_784_438_6, 1.7];
    let asymmetries = [(-1.0, 1.0), (-0.4, 0.7), (0.2, -0.9)];

    let mut steady_err: f64 = 0.0;
    let mut resp_err: f64 = 0.0;
    let mut re_leak: f64 = 0.0;
    for &gbar in &gbars {
        for &(d1, d2) in &asymmetries {
            let model = tqo_model_dimensionless(gbar, d1, d2, 1.0)?;
            let l0 = model.liouvillian()?;
            let details = steady_state_details(&l0)?;

            let (x1, x2, x3, x4) = tqo_analytic_steady(gbar, d1, d2);
            let reference = crate::models::tqo_state_from_moments(x1, x2, x3, x4)?;
            let diff = details.rho.op() - reference.op();
            steady_err = steady_err.max(diff.max_abs());

            // The closed-form vector is the response of all four raising
            // moments to the first particle's position drive.
            let y_ref = tqo_analytic_response(gbar, d1, d2, 1.0)?;
            let l1 = model.drive_liouvillian("x1")?;
            let resp = perturbed_response(&l0, &l1, &details.rho)?;
            let y_num = tqo_response_moments(&resp)?;
            for (num, reference) in [
                (y_num.0, y_ref.0),
                (y_num.1, y_ref.1),
                (y_num.2, y_ref.2),
                (y_num.3, y_ref.3),
            ] {
                resp_err = resp_err.max((num - reference).norm());
                re_leak = re_leak.max(num.re.abs());
            }
        }
    }
    checks.push(VerifyCheck::at_most("tqo/analytic_steady", steady_err, 1e-10));
    checks.push(VerifyCheck::at_most("tqo/analytic_response", resp_err, 1e-8));
    checks.push(VerifyCheck::at_most(
        "tqo/response_imaginary_purity",
        re_leak,
        1e-10,
    ));

    // Block structure of the full eight-drive information matrix: the x and
    // y families never mix, and they carry identical blocks.
    let model = tqo_model_dimensionless(0.6, -1.0, 1.0, 1.0)?;
    let solved = solve(&model)?;
    let l0 = model.liouvillian()?;
    let labels: Vec<&str> = model.drives().labels().iter().map(|s| s.as_str()).collect();
    let mut resps = Vec::new();
    for label in &labels {
        let l1 = model.drive_liouvillian(label)?;
        resps.push(perturbed_response(&l0, &l1, &solved.details.rho)?);
    }
    let f = qfim(&solved.labeled, &resps)?;
    let mut off_block: f64 = 0.0;
    let mut block_asym: f64 = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            off_block = off_block.max(f.entry(a, b + 4).abs());
            off_block = off_block.max(f.entry(a + 4, b).abs());
            block_asym = block_asym.max((f.entry(a, b) - f.entry(a + 4, b + 4)).abs());
        }
    }
    checks.push(VerifyCheck::at_most(
        "tqo/qfim_xy_off_block",
        off_block,
        1e-10,
    ));
    checks.push(VerifyCheck::at_most(
        "tqo/qfim_xy_block_match",
        block_asym,
        1e-10,
    ));

    // At the revival coupling the two single-particle drives decouple again.
    let revival = tqo_model_dimensionless(3f64.sqrt() / 2.0, -1.0, 1.0, 1.0)?;
    let r_solved = solve(&revival)?;
    let r_l0 = revival.liouvillian()?;
    let mut r_resps = Vec::new();
    for label in ["x1", "x2"] {
        let l1 = revival.drive_liouvillian(label)?;
        r_resps.push(perturbed_response(&r_l0, &l1, &r_solved.details.rho)?);
    }
    let r_f = qfim(&r_solved.labeled, &r_resps)?;
    checks.push(VerifyCheck::at_most(
        "tqo/orthogonality_revival",
        (orthogonality(&r_f, 0)? - 1.0).abs(),
        1e-6,
    ));

    checks.push(VerifyCheck::at_most(
        "tqo/qfi_vs_fidelity_oracle",
        oracle_rel_err(&model, "x1", 1e-4)?,
        1e-3,
    ));

    Ok(checks)
}

fn custom_suite(path: &str) -> Result<Vec<VerifyCheck>> {
    let file = CustomModelFile::load(path)?;
    let model = file.into_model_spec()?;
    let mut checks = Vec::new();

    let solved = solve(&model)?;
    let prefix = model.name().to_string();
    checks.push(VerifyCheck::at_most(
        format!("{prefix}/steady_residual"),
        solved.details.relative_residual,
        1e-10,
    ));
    checks.push(VerifyCheck::at_least(
        format!("{prefix}/uniqueness_gap"),
        solved.details.gap_ratio,
        1e-8,
    ));

    let l0 = model.liouvillian()?;
    let mut resps = Vec::new();
    let mut fd_err: f64 = 0.0;
    for label in model.drives().labels().to_vec() {
        fd_err = fd_err.max(response_vs_fd(&model, &label, 1e-5)?);
        let l1 = model.drive_liouvillian(&label)?;
        resps.push(perturbed_response(&l0, &l1, &solved.details.rho)?);
    }
    checks.push(VerifyCheck::at_most(
        format!("{prefix}/response_vs_finite_difference"),
        fd_err,
        1e-6,
    ));
    checks.push(VerifyCheck::at_most(
        format!("{prefix}/qfi_vs_fidelity_oracle"),
        oracle_rel_err(&model, &model.drives().labels()[0], 1e-4)?,
        1e-3,
    ));

    let f = qfim(&solved.labeled, &resps)?;
    let eig = optimal_drive(&f)?;
    let min_eig = eig.eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
    checks.push(VerifyCheck::at_least(
        format!("{prefix}/qfim_positive_semidefinite"),
        min_eig,
        -1e-10,
    ));

    Ok(checks)
}

/// Runs the verification suite for a target: `builtin:vdp`, `builtin:tqo`,
/// a model file path, or (with no target) both builtin models.
pub fn verify_target(target: Option<&str>) -> Result<VerifyReport> {
    match target {
        None => {
            let mut checks = vdp_suite()?;
            checks.extend(tqo_suite()?);
            Ok(VerifyReport {
                target: "builtin:vdp builtin:tqo".into(),
                checks,
            })
        }
        Some("builtin:vdp") | Some("vdp") => Ok(VerifyReport {
            target: "builtin:vdp".into(),
            checks: vdp_suite()?,
        }),
        Some("builtin:tqo") | Some("tqo") => Ok(VerifyReport {
            target: "builtin:tqo".into(),
            checks: tqo_suite()?,
        }),
        Some(path) => Ok(VerifyReport {
            target: path.into(),
            checks: custom_suite(path)?,
        }),
    }
}

/// Renders the per-check table the CLI prints.
pub fn render_verify(report: &VerifyReport) -> String {
    let mut out = format!("target: {}\n\n", report.target);
    let name_width = report
        .checks
        .iter()
        .map(|c| c.name.len())
        .max()
        .unwrap_or(8)
        .max(8);
    for c in &report.checks {
        out.push_str(&format!(
            "{:<name_width$}  {:>24} {} {:>12}  {}\n",
            c.name,
            format_sci(c.measured),
            c.op,
            format!("{:.1e}", c.tolerance),
            if c.passed { "pass" } else { "FAIL" },
        ));
    }
    let passed = report.checks.iter().filter(|c| c.passed).count();
    out.push_str(&format!(
        "\nresult: {} ({passed}/{} checks passed)\n",
        if report.all_passed() { "PASS" } else { "FAIL" },
        report.checks.len()
    ));
    out
}
