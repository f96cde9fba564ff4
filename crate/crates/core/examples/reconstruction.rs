// Wigner function and density matrix recovered from single-mode tomograms.

use tomobell::tomography::{
    inverse_fourier_wigner, kernel_reconstruct_density, InverseFourierConfig, KernelConfig,
    SampledTomogram, SingleModeState,
};

fn run_example() -> tomobell::Result<[f64; 3]> {
    let vacuum = SingleModeState::vacuum();
    let f = vacuum.tomogram()?;
    let tomo = SampledTomogram::from_fn(&*f, 8.0, 401, 32)?;
    let w = inverse_fourier_wigner(&tomo, &[0.0], &[0.0], &InverseFourierConfig::default())?;
    let w00 = w.values[0][0];
    println!(
        "W(0, 0) = {w00:.6} (exact {:.6})",
        1.0 / std::f64::consts::PI
    );

    let rho0 = kernel_reconstruct_density(&*f, 4, &KernelConfig::default())?.density;
    let one = SingleModeState::Fock { n: 1 }.tomogram()?;
    let rho1 = kernel_reconstruct_density(&*one, 4, &KernelConfig::default())?.density;
    let (p00, p11) = (rho0.get(0, 0).re, rho1.get(1, 1).re);
    println!("vacuum rho00 = {p00:.6}, single photon rho11 = {p11:.6}");
    Ok([w00, p00, p11])
}

fn main() -> tomobell::Result<()> {
    run_example().map(|_| ())
}
