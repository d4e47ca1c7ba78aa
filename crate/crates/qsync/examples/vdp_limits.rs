//! Quantum and classical limits of the van der Pol oscillator.
//!
//! Deep in the quantum regime (two-photon loss dominant) the steady state
//! confines to the lowest three Fock levels and every information measure
//! has a closed form; in the classical regime the measures collapse onto
//! 4/(9 kappa1 kappa2). This example computes both ends numerically and
//! prints them next to the closed forms.

use qsync::{
    method_of_moments_mu, omega_tilde_direct, perturbed_response, qfi, spectral_decompose,
    steady_state, vdp_auto_truncation, vdp_model, vdp_reference_limits, label_sectors, Operator,
    Result,
};

fn measures_at(kappa1: f64, kappa2: f64, n: usize) -> Result<(f64, f64, f64)> {
    let model = vdp_model(kappa1, kappa2, n)?;
    let l0 = model.liouvillian()?;
    let l1 = model.drive_liouvillian("x")?;
    let rho0 = steady_state(&l0)?;
    let labeled = label_sectors(&spectral_decompose(&rho0)?, &model.charges()?)?;
    let resp = perturbed_response(&l0, &l1, &rho0)?;

    let f = qfi(&labeled, &resp);
    let mu = method_of_moments_mu(&rho0, &resp, &Operator::momentum(n))?;
    // The perturbation strength must be small against the slow relaxation
    // scale, which is kappa1 on both ends of the pump range.
    let omega = omega_tilde_direct(&l0, &l1, 1e-3 * kappa1, labeled.decomp())?;
    Ok((f, mu, omega))
}

fn main() -> Result<()> {
    let kappa1 = 1.0;

    println!("quantum limit (kappa2/kappa1 = 1e6), values scaled by kappa1^2:");
    let (f, mu, omega) = measures_at(kappa1, 1e6 * kappa1, 6)?;
    let limits = vdp_reference_limits(kappa1, 1e6 * kappa1);
    println!("  qfi          {:>12.6e}   closed form {:>12.6e}", f, limits.f_quantum);
    println!("  mu           {:>12.6e}   closed form {:>12.6e}", mu, limits.mu_quantum);
    println!(
        "  omega_tilde  {:>12.6e}   closed form {:>12.6e}  (ln 2 / 27)",
        omega,
        (2.0f64).ln() / 27.0
    );

    println!();
    println!("classical side (kappa1/kappa2 = 20), values scaled by kappa1 kappa2:");
    let kappa2 = kappa1 / 20.0;
    let n = vdp_auto_truncation(kappa1, kappa2, 1e-8)?;
    let (f, mu, omega) = measures_at(kappa1, kappa2, n)?;
    let limits = vdp_reference_limits(kappa1, kappa2);
    let scale = kappa1 * kappa2;
    println!("  truncated at n = {n}");
    println!(
        "  qfi          {:>12.6e}   asymptote {:>12.6e}  (4/9)",
        scale * f,
        scale * limits.f_classical
    );
    println!(
        "  mu           {:>12.6e}   asymptote {:>12.6e}",
        scale * mu,
        scale * limits.mu_classical
    );
    println!(
        "  omega_tilde  {:>12.6e}   asymptote {:>12.6e}  (qfi/2)",
        scale * omega,
        scale * limits.omega_classical
    );
    Ok(())
}
