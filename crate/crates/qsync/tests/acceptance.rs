//! End-to-end checks of the full pipeline against closed-form limits,
//! analytic references, structural identities, and independent numerical
//! routes. Each check prints one pass/fail line (run with `--nocapture`
//! to see them) and asserts its stated tolerance.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::OnceLock;
use std::time::Instant;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qsync::{
    label_sectors, method_of_moments_mu, omega_tilde_direct, optimal_drive, orthogonality,
    perturbed_response, qfi, qfi_fidelity_oracle, qfi_filtered, qfim, spectral_decompose,
    split_response, steady_state, tqo_analytic_response, tqo_analytic_steady, tqo_gstar,
    tqo_model_dimensionless, tqo_response_moments, tqo_state_from_moments, vdp_auto_truncation,
    vdp_model, vdp_reference_limits, EigendriveResult, Liouvillian, Operator, QfiMatrix,
    ResponseFilter, ResponseMatrix, Result, SectorLabeledDecomposition,
};

fn report(index: usize, name: &str, pass: bool, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("criterion {index:02} {name}: {status} ({detail})");
    assert!(pass, "criterion {index:02} {name} failed: {detail}");
}

fn rel_err(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs()
}

// ---------------------------------------------------------------------------
// Shared grids. The oscillator sweep covers the pump ratio over three and a
// half decades; the two-qubit sweep covers the coupling linearly. Both are
// computed once and reused by every check that quotes "the sweep grid".

/// Log-spaced pump ratios kappa1/kappa2 from 1e-2 to 2e1 with exact
/// endpoints, so the classical-trend check sits at ratio 20 precisely.
fn fig1_ratios() -> Vec<f64> {
    let (lo, hi, count) = (1e-2f64, 2e1f64, 13usize);
    let (ls, le) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == count - 1 {
                hi
            } else {
                (ls + (le - ls) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect()
}

struct VdpPoint {
    ratio: f64,
    n_trunc: usize,
    qfi_x: f64,
    mu_momentum: f64,
    rho0: qsync::DensityMatrix,
    resp: ResponseMatrix,
    labeled: SectorLabeledDecomposition,
    /// Wall time for truncation, steady state, response, QFI, and SNR.
    elapsed_s: f64,
}

fn vdp_point(ratio: f64) -> Result<VdpPoint> {
    let start = Instant::now();
    let kappa1 = 1.0;
    let kappa2 = kappa1 / ratio;
    let n = vdp_auto_truncation(kappa1, kappa2, 1e-8)?;
    let model = vdp_model(kappa1, kappa2, n)?;
    let l0 = model.liouvillian()?;
    let l1 = model.drive_liouvillian("x")?;
    let rho0 = steady_state(&l0)?;
    let labeled = label_sectors(&spectral_decompose(&rho0)?, &model.charges()?)?;
    let resp = perturbed_response(&l0, &l1, &rho0)?;
    let qfi_x = qfi(&labeled, &resp);
    let mu_momentum = method_of_moments_mu(&rho0, &resp, &Operator::momentum(n))?;
    Ok(VdpPoint {
        ratio,
        n_trunc: n,
        qfi_x,
        mu_momentum,
        rho0,
        resp,
        labeled,
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

fn fig1_grid() -> &'static [VdpPoint] {
    static GRID: OnceLock<Vec<VdpPoint>> = OnceLock::new();
    GRID.get_or_init(|| {
        fig1_ratios()
            .iter()
            .map(|&r| vdp_point(r).expect("oscillator sweep point solves"))
            .collect()
    })
}

/// Rebuilds the generator pair for a solved sweep point (the grid stores
/// only the small per-point results, not the d^2 x d^2 matrices).
fn vdp_generators(point: &VdpPoint) -> Result<(Liouvillian, Liouvillian)> {
    let model = vdp_model(1.0, 1.0 / point.ratio, point.n_trunc)?;
    Ok((model.liouvillian()?, model.drive_liouvillian("x")?))
}

/// Fully asymmetric pump configuration: qubit 1 damped at the reference
/// rate, qubit 2 pumped at the reference rate.
const ASYM: (f64, f64) = (-1.0, 1.0);

fn fig2_gbars() -> Vec<f64> {
    (0..=30).map(|i| i as f64 * 0.1).collect()
}

struct TqoPoint {
    gbar: f64,
    /// Information matrix over the two bare x drives.
    f_single: QfiMatrix,
    eig_single: EigendriveResult,
    /// Information matrix over all four x-type drives.
    f_all_x: QfiMatrix,
    lambda_max_all_x: f64,
}

fn tqo_point(gbar: f64) -> Result<TqoPoint> {
    let model = tqo_model_dimensionless(gbar, ASYM.0, ASYM.1, 1.0)?;
    let l0 = model.liouvillian()?;
    let rho0 = steady_state(&l0)?;
    let labeled = label_sectors(&spectral_decompose(&rho0)?, &model.charges()?)?;
    let resp_for = |label: &str| -> Result<ResponseMatrix> {
        perturbed_response(&l0, &model.drive_liouvillian(label)?, &rho0)
    };
    let single = [resp_for("x1")?, resp_for("x2")?];
    let all_x = [
        resp_for("x1")?,
        resp_for("x2")?,
        resp_for("x1z2")?,
        resp_for("x2z1")?,
    ];
    let f_single = qfim(&labeled, &single)?;
    let eig_single = optimal_drive(&f_single)?;
    let f_all_x = qfim(&labeled, &all_x)?;
    let lambda_max_all_x = optimal_drive(&f_all_x)?.lambda_max();
    Ok(TqoPoint {
        gbar,
        f_single,
        eig_single,
        f_all_x,
        lambda_max_all_x,
    })
}

fn fig2_grid() -> &'static [TqoPoint] {
    static GRID: OnceLock<Vec<TqoPoint>> = OnceLock::new();
    GRID.get_or_init(|| {
        fig2_gbars()
            .iter()
            .map(|&g| tqo_point(g).expect("coupling sweep point solves"))
            .collect()
    })
}

/// 50 (gbar, d1, d2) triples spanning the coupling range and both signs of
/// the pump asymmetries, including the fully asymmetric edge.
fn tqo_triples() -> Vec<(f64, f64, f64)> {
    let gbars = [
        0.0,
        0.2,
        0.45,
        0.7,
        tqo_gstar(1.0),
        1.0,
        1.4,
        1.9,
        2.4,
        3.0,
    ];
    let pairs = [
        (-1.0, 1.0),
        (-0.6, 0.8),
        (-0.2, 0.3),
        (0.4, -0.5),
        (0.9, -0.9),
    ];
    let mut triples = Vec::with_capacity(50);
    for &g in &gbars {
        for &(d1, d2) in &pairs {
            triples.push((g, d1, d2));
        }
    }
    triples
}

// ---------------------------------------------------------------------------

#[test]
fn c01_quantum_limit_information_and_snr() -> Result<()> {
    let start = Instant::now();
    let (kappa1, kappa2) = (1.0, 1e6);
    // Deep in the two-photon-loss-dominated regime the state confines to
    // the three lowest levels; larger truncations only stretch the
    // generator's singular-value range past the uniqueness gate.
    let n = 3;
    let model = vdp_model(kappa1, kappa2, n)?;
    let l0 = model.liouvillian()?;
    let rho0 = steady_state(&l0)?;
    let labeled = label_sectors(&spectral_decompose(&rho0)?, &model.charges()?)?;
    let resp = perturbed_response(&l0, &model.drive_liouvillian("x")?, &rho0)?;
    let f = qfi(&labeled, &resp);
    let mu = method_of_moments_mu(&rho0, &resp, &Operator::momentum(n))?;
    let elapsed = start.elapsed().as_secs_f64();

    let limits = vdp_reference_limits(kappa1, kappa2);
    let f_err = rel_err(f, limits.f_quantum);
    let mu_err = rel_err(mu, limits.mu_quantum);
    report(
        1,
        "quantum_limit_information_and_snr",
        f_err <= 1e-2 && mu_err <= 1e-2 && elapsed < 1.0,
        &format!(
            "kappa1^2 F = {f:.6e} vs 4/81 (rel {f_err:.2e}), kappa1^2 mu = {mu:.6e} vs 4/135 (rel {mu_err:.2e}), {elapsed:.3} s"
        ),
    );
    Ok(())
}

#[test]
fn c02_classical_trend_at_large_pump_ratio() -> Result<()> {
    let point = fig1_grid().last().expect("grid is nonempty");
    assert_eq!(point.ratio, 20.0);

    // The entropy measure needs two extra full solves of the perturbed
    // generator; count them toward the per-point budget.
    let start = Instant::now();
    let (l0, l1) = vdp_generators(point)?;
    let kappa1 = 1.0;
    let omega = omega_tilde_direct(&l0, &l1, 1e-3 * kappa1, point.labeled.decomp())?;
    let elapsed = point.elapsed_s + start.elapsed().as_secs_f64();

    let kappa2 = kappa1 / point.ratio;
    let f = point.qfi_x;
    let f_over_mu = f / point.mu_momentum;
    let f_over_omega = f / omega;
    let scaled_f = kappa1 * kappa2 * f;
    let const_err = rel_err(scaled_f, 4.0 / 9.0);
    report(
        2,
        "classical_trend_at_large_pump_ratio",
        (0.85..=1.15).contains(&f_over_mu)
            && (1.7..=2.3).contains(&f_over_omega)
            && const_err <= 0.25
            && elapsed < 300.0,
        &format!(
            "n = {}, F/mu = {f_over_mu:.4}, F/omega = {f_over_omega:.4}, kappa1 kappa2 F = {scaled_f:.4} vs 4/9 (rel {const_err:.2e}), {elapsed:.1} s",
            point.n_trunc
        ),
    );
    Ok(())
}

#[test]
fn c03_truncated_observable_saturates_information() -> Result<()> {
    let (kappa1, kappa2) = (1.0, 1e6);
    let n = 3;
    let model = vdp_model(kappa1, kappa2, n)?;
    let l0 = model.liouvillian()?;
    let rho0 = steady_state(&l0)?;
    let labeled = label_sectors(&spectral_decompose(&rho0)?, &model.charges()?)?;
    let resp = perturbed_response(&l0, &model.drive_liouvillian("x")?, &rho0)?;
    let f = qfi(&labeled, &resp);

    // sigma_y restricted to the two lowest levels, zero elsewhere.
    let obs = Operator::from_fn(n, |i, j| match (i, j) {
        (0, 1) => C64::new(0.0, -1.0),
        (1, 0) => C64::new(0.0, 1.0),
        _ => C64::new(0.0, 0.0),
    });
    let mu = method_of_moments_mu(&rho0, &resp, &obs)?;
    let gap = rel_err(mu, f);
    report(
        3,
        "truncated_observable_saturates_information",
        gap <= 1e-2,
        &format!("mu = {mu:.6e}, F = {f:.6e}, rel gap {gap:.2e}"),
    );
    Ok(())
}

#[test]
fn c04_two_qubit_steady_state_matches_closed_form() -> Result<()> {
    let id = Operator::identity(2);
    let s1z = Operator::sigma_z().kron(&id);
    let s2z = id.kron(&Operator::sigma_z());
    let exchange = Operator::sigma_plus().kron(&Operator::sigma_minus());
    let zz = Operator::sigma_z().kron(&Operator::sigma_z());

    let mut worst: f64 = 0.0;
    for (gbar, d1, d2) in tqo_triples() {
        let model = tqo_model_dimensionless(gbar, d1, d2, 1.0)?;
        let rho0 = steady_state(&model.liouvillian()?)?;
        let (x1, x2, x3, x4) = tqo_analytic_steady(gbar, d1, d2);
        worst = worst
            .max((rho0.expect_complex(&s1z) - x1).norm())
            .max((rho0.expect_complex(&s2z) - x2).norm())
            .max((rho0.expect_complex(&exchange) - x3).norm())
            .max((rho0.expect_complex(&zz) - x4).norm());
        // The moments determine the full matrix; check it entrywise too.
        let reference = tqo_state_from_moments(x1, x2, x3, x4)?;
        worst = worst.max((rho0.op() - reference.op()).max_abs());
    }
    report(
        4,
        "two_qubit_steady_state_matches_closed_form",
        worst <= 1e-10,
        &format!("worst moment/entry deviation {worst:.2e} over 50 points"),
    );
    Ok(())
}

#[test]
fn c05_two_qubit_response_matches_closed_form() -> Result<()> {
    let mut worst: f64 = 0.0;
    let mut re_leak: f64 = 0.0;
    for (gbar, d1, d2) in tqo_triples() {
        let model = tqo_model_dimensionless(gbar, d1, d2, 1.0)?;
        let l0 = model.liouvillian()?;
        let rho0 = steady_state(&l0)?;
        let resp = perturbed_response(&l0, &model.drive_liouvillian("x1")?, &rho0)?;

        let y_num = tqo_response_moments(&resp)?;
        let y_ref = tqo_analytic_response(gbar, d1, d2, 1.0)?;
        for (num, reference) in [
            (y_num.0, y_ref.0),
            (y_num.1, y_ref.1),
            (y_num.2, y_ref.2),
            (y_num.3, y_ref.3),
        ] {
            worst = worst.max((num - reference).norm());
        }
        for i in 0..4 {
            for j in 0..4 {
                re_leak = re_leak.max(resp.op().matrix()[(i, j)].re.abs());
            }
        }
    }
    report(
        5,
        "two_qubit_response_matches_closed_form",
        worst <= 1e-8 && re_leak <= 1e-10,
        &format!("worst moment deviation {worst:.2e}, max real part {re_leak:.2e} over 50 points"),
    );
    Ok(())
}

#[test]
fn c06_orthogonality_revival() -> Result<()> {
    let gstar = tqo_gstar(1.0);
    let both_d = |gbar: f64| -> Result<(f64, f64, f64)> {
        let model = tqo_model_dimensionless(gbar, ASYM.0, ASYM.1, 1.0)?;
        let l0 = model.liouvillian()?;
        let rho0 = steady_state(&l0)?;
        let labeled = label_sectors(&spectral_decompose(&rho0)?, &model.charges()?)?;
        let resps = [
            perturbed_response(&l0, &model.drive_liouvillian("x1")?, &rho0)?,
            perturbed_response(&l0, &model.drive_liouvillian("x2")?, &rho0)?,
        ];
        let f = qfim(&labeled, &resps)?;
        Ok((
            orthogonality(&f, 0)?,
            orthogonality(&f, 1)?,
            f.entry(0, 1),
        ))
    };

    let (d_at_zero, d2_at_zero, _) = both_d(0.0)?;
    let (d_at_star, d2_at_star, _) = both_d(gstar)?;
    let mut pair_gap = (d_at_zero - d2_at_zero).abs().max((d_at_star - d2_at_star).abs());

    // Interior samples. A revival strictly inside the interval only counts
    // as a failure if the off-diagonal does not vanish there (an isolated
    // zero crossing of F_12 restores D = 1 legitimately).
    let mut interior_max: f64 = 0.0;
    let mut crossings = 0usize;
    let mut prev_off: Option<f64> = None;
    for k in 1..20 {
        let g = gstar * k as f64 / 20.0;
        let (d1, d2, off) = both_d(g)?;
        pair_gap = pair_gap.max((d1 - d2).abs());
        let crossing = prev_off.is_some_and(|p| p * off < 0.0) || off.abs() <= 1e-12;
        if d1 >= 1.0 - 1e-9 {
            if crossing {
                crossings += 1;
            } else {
                interior_max = interior_max.max(d1);
            }
        } else {
            interior_max = interior_max.max(d1);
        }
        prev_off = Some(off);
    }

    let end_err = (d_at_zero - 1.0).abs().max((d_at_star - 1.0).abs());
    report(
        6,
        "orthogonality_revival",
        end_err <= 1e-6 && interior_max < 1.0 && pair_gap <= 1e-12,
        &format!(
            "|D-1| at endpoints {end_err:.2e}, interior max D {interior_max:.6}, {crossings} crossover zeros, |D1-D2| max {pair_gap:.2e}"
        ),
    );
    Ok(())
}

/// Eight-drive information matrix at one coupling, with drives in family
/// order: the four x-type, then the four y-type.
fn full_qfim(gbar: f64) -> Result<QfiMatrix> {
    let model = tqo_model_dimensionless(gbar, ASYM.0, ASYM.1, 1.0)?;
    let l0 = model.liouvillian()?;
    let rho0 = steady_state(&l0)?;
    let labeled = label_sectors(&spectral_decompose(&rho0)?, &model.charges()?)?;
    let mut resps = Vec::new();
    for label in model.drives().labels().to_vec() {
        resps.push(perturbed_response(
            &l0,
            &model.drive_liouvillian(&label)?,
            &rho0,
        )?);
    }
    qfim(&labeled, &resps)
}

#[test]
fn c07_qfim_block_structure() -> Result<()> {
    // Quadrature families never mix and carry identical information.
    let f = full_qfim(0.6)?;
    let mut off_block: f64 = 0.0;
    let mut block_gap: f64 = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            off_block = off_block.max(f.entry(a, b + 4).abs());
            off_block = off_block.max(f.entry(a + 4, b).abs());
            block_gap = block_gap.max((f.entry(a, b) - f.entry(a + 4, b + 4)).abs());
        }
    }

    // Uncoupled qubits: no information correlations between drives whose
    // quadrature factor sits on different qubits. Family order is
    // [x1, x2, x1z2, x2z1, y1, y2, y1z2, y2z1]: qubit 1 holds the even
    // indices, qubit 2 the odd ones.
    let f0 = full_qfim(0.0)?;
    let qubit1 = [0usize, 2, 4, 6];
    let qubit2 = [1usize, 3, 5, 7];
    let mut cross: f64 = 0.0;
    for &a in &qubit1 {
        for &b in &qubit2 {
            cross = cross.max(f0.entry(a, b).abs());
        }
    }
    report(
        7,
        "qfim_block_structure",
        off_block <= 1e-10 && block_gap <= 1e-10 && cross <= 1e-10,
        &format!(
            "xy off-block max {off_block:.2e}, block mismatch {block_gap:.2e}, uncoupled cross-qubit max {cross:.2e}"
        ),
    );
    Ok(())
}

#[test]
fn c08_eigendrive_structure() -> Result<()> {
    let grid = fig2_grid();

    // Balanced optimal combination wherever the top eigenvalue is isolated
    // (at a degenerate top any basis of the eigenspace is equally optimal,
    // so the combination itself is not pinned there).
    let mut n_opt_err: f64 = 0.0;
    let mut skipped = 0usize;
    for p in grid {
        if p.eig_single.degenerate_top() {
            skipped += 1;
            continue;
        }
        let n = p.eig_single.n_opt();
        n_opt_err = n_opt_err
            .max((n[0] - FRAC_1_SQRT_2).abs())
            .max((n[1].abs() - FRAC_1_SQRT_2).abs());
    }

    let peak = grid
        .iter()
        .enumerate()
        .max_by(|a, b| {
            a.1.lambda_max_all_x
                .partial_cmp(&b.1.lambda_max_all_x)
                .expect("information values are finite")
        })
        .expect("grid is nonempty");
    let peak_at_positive = peak.0 > 0;

    let mut monotone = true;
    let mut worst_rise: f64 = 0.0;
    for w in grid.windows(2) {
        let (f_prev, f_next) = (w[0].f_single.entry(0, 0), w[1].f_single.entry(0, 0));
        if f_next > f_prev * (1.0 + 1e-9) {
            monotone = false;
            worst_rise = worst_rise.max(f_next / f_prev - 1.0);
        }
    }

    report(
        8,
        "eigendrive_structure",
        n_opt_err <= 1e-8 && peak_at_positive && monotone,
        &format!(
            "n_opt deviation {n_opt_err:.2e} ({skipped} degenerate points skipped), F_max peak at gbar = {:.1}, F_1 monotone: {monotone} (worst rise {worst_rise:.2e})",
            peak.1.gbar
        ),
    );
    Ok(())
}

#[test]
fn c09_fidelity_oracle_equivalence() -> Result<()> {
    // The oracle's discrepancy splits into a quadratic truncation bias
    // (scaling as eps^2) and a solver-noise term that the second
    // difference amplifies as 1/eps^2. Writing the noise share of the
    // observed gap as x, a tenfold shrink of eps lands at about
    // gap * ((1 - x)/100 + 100 x), which stays below gap/10 only for
    // x <= 9e-4: the tenfold improvement is observable only where the
    // bias outweighs the noise by three orders of magnitude. The bias
    // share is estimated from a tenfold coarser step, where the noise
    // term is 10^4 times smaller: gap(1e-3)/100 predicts the eps = 1e-4
    // bias, and a point qualifies when that prediction matches the
    // observed gap to within the 9e-4 noise allowance.
    let mut worst4: f64 = 0.0;
    let mut qualifying = 0usize;
    let mut shrink_ok = true;
    let mut total = 0usize;

    let mut check = |f: f64, l0: &Liouvillian, l1: &Liouvillian| -> Result<()> {
        let gap4 = rel_err(qfi_fidelity_oracle(l0, l1, 1e-4)?, f);
        worst4 = worst4.max(gap4);
        total += 1;
        let bias4 = rel_err(qfi_fidelity_oracle(l0, l1, 1e-3)?, f) / 100.0;
        if (gap4 - bias4).abs() <= 9e-4 * gap4 {
            qualifying += 1;
            let gap5 = rel_err(qfi_fidelity_oracle(l0, l1, 1e-5)?, f);
            if gap5 > gap4 / 10.0 {
                shrink_ok = false;
            }
        }
        Ok(())
    };

    for point in fig1_grid() {
        let (l0, l1) = vdp_generators(point)?;
        check(point.qfi_x, &l0, &l1)?;
    }
    for point in fig2_grid() {
        let model = tqo_model_dimensionless(point.gbar, ASYM.0, ASYM.1, 1.0)?;
        let l0 = model.liouvillian()?;
        for (m, label) in ["x1", "x2", "x1z2", "x2z1"].iter().enumerate() {
            let l1 = model.drive_liouvillian(label)?;
            check(point.f_all_x.entry(m, m), &l0, &l1)?;
        }
    }

    report(
        9,
        "fidelity_oracle_equivalence",
        worst4 <= 1e-3 && shrink_ok,
        &format!(
            "worst rel gap {worst4:.2e} at eps = 1e-4 over {total} (model, drive, parameter) points; bias outweighs solver noise enough for the tenfold-shrink check at {qualifying} of them (shrink ok: {shrink_ok})"
        ),
    );
    Ok(())
}

#[test]
fn c10_symmetry_split_additivity() -> Result<()> {
    let n = 12;
    let model = vdp_model(1.0, 1.0, n)?;
    let l0 = model.liouvillian()?;
    let rho0 = steady_state(&l0)?;
    let labeled = label_sectors(&spectral_decompose(&rho0)?, &model.charges()?)?;

    // Mixed perturbation: a position drive plus incoherent gain. The drive
    // breaks the phase symmetry, the gain preserves it.
    let breaking = model.drive_liouvillian("x")?;
    let preserving = Liouvillian::dissipator(&Operator::creation(n))?;
    let mixed = &breaking + &preserving;

    let resp = perturbed_response(&l0, &mixed, &rho0)?;
    let (resp_s, resp_n) = split_response(&resp, &labeled);
    let f_total = qfi_filtered(&labeled, &resp, ResponseFilter::Full);
    let f_s = qfi_filtered(&labeled, &resp_s, ResponseFilter::Full);
    let f_n = qfi_filtered(&labeled, &resp_n, ResponseFilter::Full);

    let additivity = (f_s + f_n - f_total).abs() / f_total;
    // The sector filter applied to the mixed response must score exactly
    // the breaking part.
    let filtered = qfi(&labeled, &resp);
    let filter_gap = (filtered - f_n).abs() / f_n;

    report(
        10,
        "symmetry_split_additivity",
        additivity <= 1e-9 && filter_gap <= 1e-9,
        &format!(
            "F_s + F_n vs F rel defect {additivity:.2e}, filtered vs breaking-part rel gap {filter_gap:.2e}"
        ),
    );
    Ok(())
}

#[test]
fn c11_snr_never_exceeds_information() -> Result<()> {
    let mut worst_ratio: f64 = 0.0;
    let mut observables = 0usize;
    for (idx, point) in fig1_grid().iter().enumerate() {
        let f = point.qfi_x;
        worst_ratio = worst_ratio.max(point.mu_momentum / f);
        observables += 1;

        let n = point.rho0.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED + idx as u64);
        for _ in 0..20 {
            let mat = nalgebra::DMatrix::from_fn(n, n, |_, _| {
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let raw = Operator::new(mat)?;
            let obs = &(&raw + &raw.dagger()) * 0.5;
            let mu = method_of_moments_mu(&point.rho0, &point.resp, &obs)?;
            worst_ratio = worst_ratio.max(mu / f);
            observables += 1;
        }
    }
    report(
        11,
        "snr_never_exceeds_information",
        worst_ratio <= 1.0 + 1e-9,
        &format!("max mu/F = {worst_ratio:.12} over {observables} observables on the pump-ratio grid"),
    );
    Ok(())
}
