// Shape/placement coordinates: forward map, reconstruction, and the Gram identity
// that separates realizable cosines from arbitrary ones.

use std::f64::consts::PI;

use tetraform::xi::{gram_identity_residual, phi_transform, reconstruct, XiCoordinates};
use tetraform::AttitudeEnsemble;

pub fn run_example() -> tetraform::Result<()> {
    let state = AttitudeEnsemble::random(4, 11)?;
    let xi = phi_transform(&state)?;
    println!("cosines   {:?}", xi.xi_s);
    println!("placement phi1 = {:.6}, psi1 = {:.6}, gamma = {:.6}", xi.phi1, xi.psi1, xi.gamma);
    println!("Gram residual {:.2e}", gram_identity_residual(&xi.xi_s));

    let back = reconstruct(&xi, state.chirality())?;
    println!("reconstruction error {:.2e}", back.max_distance(&state));
    let mirror = reconstruct(&xi, -state.chirality())?;
    println!("mirror image differs by {:.3} rad", mirror.max_distance(&state));

    let tetra = XiCoordinates { xi_s: [-1.0 / 3.0; 6], phi1: PI / 2.0, psi1: 0.0, gamma: 0.0 };
    let t = reconstruct(&tetra, 1)?;
    println!("tetrahedron from cosines: Gamma_1 = {:?}", t.gammas()[0].as_vec().as_slice());
    println!("residual at (-1)x6: {}", gram_identity_residual(&[-1.0; 6]));
    match reconstruct(&XiCoordinates { xi_s: [-1.0; 6], ..tetra }, 1) {
        Ok(_) => println!("unexpected: (-1)x6 reconstructed"),
        Err(e) => println!("(-1)x6 rejected: {e}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> tetraform::Result<()> {
    run_example()
}
