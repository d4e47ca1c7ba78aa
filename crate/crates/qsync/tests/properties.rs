//! Cross-module invariants of the solved pipeline: identities that must
//! hold for any admissible model and drive family, checked on small, fast
//! instances, with randomized sweeps over observables and drive mixings.

use std::sync::OnceLock;

use num_complex::Complex64 as C64;
use proptest::prelude::*;

use qsync::{
    label_sectors, method_of_moments_mu, omega_tilde_direct, omega_tilde_perturbative,
    optimal_drive, orthogonality, perturbed_response, qfi, qfi_fidelity_oracle, qfi_filtered,
    qfim, spectral_decompose, split_response, steady_state, tqo_model_dimensionless,
    vdp_auto_truncation, vdp_model, DensityMatrix, LadderCoefficients, Operator, ResponseFilter,
    ResponseMatrix, Result, SectorLabeledDecomposition,
};

/// A solved oscillator instance shared by the randomized checks: small
/// enough that the heavy factorizations run once and stay cheap.
struct Solved {
    rho0: DensityMatrix,
    resp: ResponseMatrix,
    labeled: SectorLabeledDecomposition,
    f: f64,
}

fn oscillator() -> &'static Solved {
    static CELL: OnceLock<Solved> = OnceLock::new();
    CELL.get_or_init(|| {
        let model = vdp_model(1.0, 1.0, 8).expect("model builds");
        let l0 = model.liouvillian().expect("generator builds");
        let l1 = model.drive_liouvillian("x").expect("drive builds");
        let rho0 = steady_state(&l0).expect("steady state solves");
        let labeled = label_sectors(
            &spectral_decompose(&rho0).expect("state diagonalizes"),
            &model.charges().expect("charges assign"),
        )
        .expect("sectors label");
        let resp = perturbed_response(&l0, &l1, &rho0).expect("response solves");
        let f = qfi(&labeled, &resp);
        Solved {
            rho0,
            resp,
            labeled,
            f,
        }
    })
}

/// A solved two-qubit instance with the two bare transverse drives.
struct SolvedPair {
    labeled: SectorLabeledDecomposition,
    resps: [ResponseMatrix; 2],
}

fn qubit_pair() -> &'static SolvedPair {
    static CELL: OnceLock<SolvedPair> = OnceLock::new();
    CELL.get_or_init(|| {
        let model = tqo_model_dimensionless(0.9, -1.0, 1.0, 1.0).expect("model builds");
        let l0 = model.liouvillian().expect("generator builds");
        let rho0 = steady_state(&l0).expect("steady state solves");
        let labeled = label_sectors(
            &spectral_decompose(&rho0).expect("state diagonalizes"),
            &model.charges().expect("charges assign"),
        )
        .expect("sectors label");
        let resp = |label: &str| {
            perturbed_response(&l0, &model.drive_liouvillian(label).unwrap(), &rho0)
                .expect("response solves")
        };
        SolvedPair {
            labeled,
            resps: [resp("x1"), resp("x2")],
        }
    })
}

/// Builds a Hermitian observable from a flat list of real and imaginary
/// parts, symmetrizing the raw matrix.
fn hermitian_from(parts: &[(f64, f64)], dim: usize) -> Operator {
    let raw = nalgebra::DMatrix::from_fn(dim, dim, |i, j| {
        let (re, im) = parts[i * dim + j];
        C64::new(re, im)
    });
    let herm = (&raw + raw.adjoint()) * C64::new(0.5, 0.0);
    Operator::new(herm).expect("finite entries")
}

/// The diagonal of the information matrix is the single-drive information:
/// assembling drives jointly must not change what each one resolves alone.
#[test]
fn qfim_diagonal_matches_single_drive_information() -> Result<()> {
    let model = tqo_model_dimensionless(0.7, -1.0, 1.0, 1.0)?;
    let l0 = model.liouvillian()?;
    let rho0 = steady_state(&l0)?;
    let labeled = label_sectors(&spectral_decompose(&rho0)?, &model.charges()?)?;
    let labels = model.drives().labels().to_vec();
    let resps = labels
        .iter()
        .map(|l| perturbed_response(&l0, &model.drive_liouvillian(l)?, &rho0))
        .collect::<Result<Vec<_>>>()?;
    let f = qfim(&labeled, &resps)?;
    for (m, resp) in resps.iter().enumerate() {
        let single = qfi(&labeled, resp);
        let joint = f.entry(m, m);
        assert!(
            (joint - single).abs() <= 1e-12 * single.abs().max(1.0),
            "drive {m}: joint diagonal {joint} vs single {single}"
        );
    }
    // The matrix itself must come out exactly symmetric.
    for m in 0..f.size() {
        for n in 0..m {
            assert_eq!(f.entry(m, n), f.entry(n, m), "asymmetry at ({m}, {n})");
        }
    }
    Ok(())
}

/// The information matrix is a quadratic form on drive space: remixing the
/// drives by a matrix R must transform it congruently, F -> R^T F R.
#[test]
fn qfim_transforms_congruently_under_drive_mixing() -> Result<()> {
    let pair = qubit_pair();
    let (c, s) = (0.8f64, 0.6f64);
    // R columns are the mixed drives: [c r1 + s r2, -s r1 + c r2].
    let mix = |a: f64, b: f64, label: &str| -> Result<ResponseMatrix> {
        let op = &(pair.resps[0].op() * a) + &(pair.resps[1].op() * b);
        ResponseMatrix::from_parts(op, label)
    };
    let mixed = [mix(c, s, "m1")?, mix(-s, c, "m2")?];
    let f = qfim(&pair.labeled, &pair.resps)?;
    let g = qfim(&pair.labeled, &mixed)?;
    let r = nalgebra::Matrix2::new(c, -s, s, c);
    let expected = r.transpose() * nalgebra::Matrix2::new(
        f.entry(0, 0),
        f.entry(0, 1),
        f.entry(1, 0),
        f.entry(1, 1),
    ) * r;
    let scale = f.entry(0, 0).abs();
    for m in 0..2 {
        for n in 0..2 {
            assert!(
                (g.entry(m, n) - expected[(m, n)]).abs() <= 1e-12 * scale,
                "entry ({m}, {n}): {} vs {}",
                g.entry(m, n),
                expected[(m, n)]
            );
        }
    }
    // Congruence by an orthogonal matrix preserves the eigenvalues, so the
    // best mixed drive resolves exactly as much as the best original one.
    let (ef, eg) = (optimal_drive(&f)?, optimal_drive(&g)?);
    assert!((ef.lambda_max() - eg.lambda_max()).abs() <= 1e-12 * scale);
    Ok(())
}

/// Splitting a response by symmetry sectors is exhaustive: the preserving
/// part carries no sector-breaking information, the breaking part carries
/// all of it, and the two parts add up cell by cell in the eigenbasis so
/// the unfiltered information is exactly additive.
#[test]
fn sector_split_separates_information_exactly() -> Result<()> {
    let solved = oscillator();
    let (preserving, breaking) = split_response(&solved.resp, &solved.labeled);
    let f_pres = qfi(&solved.labeled, &preserving);
    let f_break = qfi(&solved.labeled, &breaking);
    // The preserving part's breaking cells hold only basis-rotation
    // round-trip dust, which the filter squares away to nothing.
    assert!(
        f_pres <= 1e-12 * solved.f,
        "preserving part scores {f_pres} on the breaking filter"
    );
    assert!(
        (f_break - solved.f).abs() <= 1e-12 * solved.f,
        "breaking part carries {f_break} of {}",
        solved.f
    );
    let full = qfi_filtered(&solved.labeled, &solved.resp, ResponseFilter::Full);
    let full_pres = qfi_filtered(&solved.labeled, &preserving, ResponseFilter::Full);
    let full_break = qfi_filtered(&solved.labeled, &breaking, ResponseFilter::Full);
    assert!(
        (full_pres + full_break - full).abs() <= 1e-12 * full,
        "parts sum to {} of {full}",
        full_pres + full_break
    );
    Ok(())
}

/// The finite-difference oracle must track the response-based information
/// on a model far from any closed-form limit.
#[test]
fn fidelity_oracle_tracks_information_off_the_limits() -> Result<()> {
    let model = vdp_model(1.0, 1.0, 8)?;
    let (l0, l1) = (model.liouvillian()?, model.drive_liouvillian("x")?);
    let solved = oscillator();
    let oracle = qfi_fidelity_oracle(&l0, &l1, 1e-4)?;
    assert!(
        (oracle - solved.f).abs() <= 1e-3 * solved.f,
        "oracle {oracle} vs spectral {}",
        solved.f
    );
    Ok(())
}

/// The two entropy-production routes (direct re-solve of the perturbed
/// generator versus the ladder-coefficient expansion) agree on a pumped
/// oscillator, and neither may come out meaningfully negative.
#[test]
fn entropy_rate_routes_agree() -> Result<()> {
    let (kappa1, ratio) = (1.0, 5.0);
    let kappa2 = kappa1 / ratio;
    let n = vdp_auto_truncation(kappa1, kappa2, 1e-8)?;
    let model = vdp_model(kappa1, kappa2, n)?;
    let (l0, l1) = (model.liouvillian()?, model.drive_liouvillian("x")?);
    let rho0 = steady_state(&l0)?;
    let basis = spectral_decompose(&rho0)?;
    let direct = omega_tilde_direct(&l0, &l1, 1e-3 * kappa1, &basis)?;
    let resp = perturbed_response(&l0, &l1, &rho0)?;
    let coeffs = LadderCoefficients::from_state_response(&rho0, &resp)?;
    let perturbative = omega_tilde_perturbative(&coeffs);
    assert!(direct >= -1e-10, "direct rate {direct} is negative");
    assert!(perturbative >= -1e-10, "expansion rate {perturbative} is negative");
    assert!(
        (direct - perturbative).abs() <= 2e-2 * direct.abs(),
        "direct {direct} vs expansion {perturbative}"
    );
    Ok(())
}

/// Padding the Fock space beyond the automatic truncation must not move
/// the information: the tail criterion already certifies convergence.
#[test]
fn truncation_padding_leaves_information_stable() -> Result<()> {
    let (kappa1, kappa2) = (1.0, 0.5);
    let n = vdp_auto_truncation(kappa1, kappa2, 1e-8)?;
    let solve = |dim: usize| -> Result<f64> {
        let model = vdp_model(kappa1, kappa2, dim)?;
        let l0 = model.liouvillian()?;
        let rho0 = steady_state(&l0)?;
        let labeled = label_sectors(&spectral_decompose(&rho0)?, &model.charges()?)?;
        Ok(qfi(
            &labeled,
            &perturbed_response(&l0, &model.drive_liouvillian("x")?, &rho0)?,
        ))
    };
    let (base, padded) = (solve(n)?, solve(n + 4)?);
    assert!(
        (padded - base).abs() <= 1e-6 * base,
        "information moved from {base} to {padded} under padding"
    );
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// No fixed-observable strategy beats the information bound: for any
    /// Hermitian observable with steady-state fluctuations, the moment
    /// signal-to-noise ratio stays at or below the drive's information.
    #[test]
    fn moment_ratio_never_exceeds_information(
        parts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 64)
    ) {
        let solved = oscillator();
        let obs = hermitian_from(&parts, 8);
        // Observables without steady-state variance are degenerate for the
        // moment estimator and are rejected upstream; the bound concerns
        // every observable the estimator accepts.
        if let Ok(mu) = method_of_moments_mu(&solved.rho0, &solved.resp, &obs) {
            prop_assert!(
                mu <= solved.f * (1.0 + 1e-9),
                "moment ratio {mu} exceeds information {}",
                solved.f
            );
        }
    }

    /// Orthogonality is a normalized ratio: any rotation of an independent
    /// drive pair keeps it defined and inside the unit interval.
    #[test]
    fn orthogonality_stays_in_the_unit_interval(theta in 0.0f64..std::f64::consts::PI) {
        let pair = qubit_pair();
        let (c, s) = (theta.cos(), theta.sin());
        let mix = |a: f64, b: f64| -> ResponseMatrix {
            let op = &(pair.resps[0].op() * a) + &(pair.resps[1].op() * b);
            ResponseMatrix::from_parts(op, "mixed").expect("mix stays admissible")
        };
        let mixed = [mix(c, s), mix(-s, c)];
        let f = qfim(&pair.labeled, &mixed).expect("matrix assembles");
        for m in 0..2 {
            let d = orthogonality(&f, m).expect("rotated pair stays independent");
            prop_assert!((0.0..=1.0).contains(&d), "D_{m} = {d} outside [0, 1]");
        }
    }
}
