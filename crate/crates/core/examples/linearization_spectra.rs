// Finite-difference linearizations next to the closed-form spectra.

use tetraform::analysis::{
    compare_spectra, cross_in_plane_jacobian, cross_out_of_plane_jacobian, eigenvalues, lambda_matrix,
    lambda_spectrum_analytic, rpy_reference_jacobian, xi_s_jacobian, xi_s_spectrum_analytic, zeta_spectrum_analytic,
};
use tetraform::{affine_cosine_gain, exponential_gain};

fn show(label: &str, analytic: &[f64], jac: &nalgebra::DMatrix<f64>) -> tetraform::Result<()> {
    let r = compare_spectra(analytic, &eigenvalues(jac)?, 1e-5);
    let num: Vec<String> = r.numeric.iter().map(|(re, _)| format!("{re:+.6}")).collect();
    println!(
        "{label}\n  numeric  [{}]\n  max pairing error {:.2e}, max |imag| {:.1e}",
        num.join(", "),
        r.max_error,
        r.max_imag
    );
    Ok(())
}

pub fn run_example() -> tetraform::Result<()> {
    for g in [affine_cosine_gain(1.0)?, exponential_gain()] {
        println!("== {}", g.name());
        show("RPY field at the reference tetrahedron", &zeta_spectrum_analytic(&g), &rpy_reference_jacobian(&g)?)?;
        show("shape field at cosines -1/3", &xi_s_spectrum_analytic(&g), &xi_s_jacobian(&g)?)?;
    }
    let g = affine_cosine_gain(1.0)?;
    show("cross formation, out-of-plane block", &[-2.0, 0.0, 0.0, 2.0], &cross_out_of_plane_jacobian(&g)?)?;
    show("cross formation, in-plane block", &[-4.0, -2.0, -2.0, 0.0], &cross_in_plane_jacobian(&g)?)?;
    for n in [3, 6, 9] {
        show(&format!("Lambda_{n}"), &lambda_spectrum_analytic(n)?, &lambda_matrix(n)?)?;
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> tetraform::Result<()> {
    run_example()
}
