//! Orthogonality of the two single-particle drives across the coupling.
//!
//! D_m measures how much of drive m's information survives when all other
//! drives in the family must be distinguished simultaneously: D_m = 1 means
//! drive m is informationally orthogonal to the rest, D_m -> 0 means it is
//! redundant. For the two-qubit oscillator the pair (x1, x2) starts
//! orthogonal at zero coupling, loses orthogonality at intermediate
//! coupling, and revives to exactly D = 1 at g* = sqrt(3) Gamma / 2.

use qsync::{
    orthogonality, perturbed_response, qfim, spectral_decompose, steady_state, tqo_gstar,
    tqo_model_dimensionless, label_sectors, Result,
};

fn main() -> Result<()> {
    let gstar_bar = tqo_gstar(1.0); // Gamma = 1: the revival coupling in units of Gamma

    println!("  gbar        D_x1           1 - D_x1");
    for i in 0..=16 {
        let gbar = 1.5 * (i as f64) / 16.0;
        let d = orthogonality_at(gbar)?;
        println!("  {gbar:<8.4}  {d:<12.8}  {:>12.3e}", 1.0 - d);
    }

    let d_star = orthogonality_at(gstar_bar)?;
    println!();
    println!("at the revival coupling gbar* = {gstar_bar:.10}:");
    println!("  D_x1 = {d_star:.12}  (deviation from one: {:.3e})", (1.0 - d_star).abs());
    Ok(())
}

fn orthogonality_at(gbar: f64) -> Result<f64> {
    let model = tqo_model_dimensionless(gbar, -1.0, 1.0, 1.0)?;
    let l0 = model.liouvillian()?;
    let rho0 = steady_state(&l0)?;
    let labeled = label_sectors(&spectral_decompose(&rho0)?, &model.charges()?)?;
    let mut resps = Vec::new();
    for label in ["x1", "x2"] {
        resps.push(perturbed_response(
            &l0,
            &model.drive_liouvillian(label)?,
            &rho0,
        )?);
    }
    let f = qfim(&labeled, &resps)?;
    orthogonality(&f, 0)
}
