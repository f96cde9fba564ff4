// Seeded homodyne samples, sign-binned frequencies and a sampled CHSH value.

use tomobell::bell::{tomographic_chsh, BellAnglesQuadrature};
use tomobell::sampling::{estimate_chsh, estimate_probs, sample_state};
use tomobell::states::TwoModeState;
use tomobell::tomography::sign_binned_closed_form;

fn run_example() -> tomobell::Result<f64> {
    let mut worst_z: f64 = 0.0;
    for state in [
        TwoModeState::squeezed_vacuum(0.54)?,
        TwoModeState::fock_pair(1)?,
        TwoModeState::pair_coherent(1.05)?,
    ] {
        let (t1, t2) = (0.4, 0.9);
        let batch = sample_state(&state, t1, t2, 20_000, 11, 0)?;
        let est = estimate_probs(&batch)?;
        let exact = sign_binned_closed_form(&state, t1, t2)?.as_array();
        for k in 0..4 {
            worst_z = worst_z.max((est.probs.as_array()[k] - exact[k]).abs() / est.std_errors[k]);
        }
        println!(
            "{:?}: sampled {:?} exact {:?} acceptance {:?}",
            state.descriptor(),
            est.probs.as_array(),
            exact,
            batch.acceptance_rate
        );
    }
    let pc = TwoModeState::pair_coherent(1.12)?;
    let angles = BellAnglesQuadrature::pair_coherent_figure();
    let sampled = estimate_chsh(&pc, &angles, 50_000, 3)?;
    println!(
        "B sampled {:.4} ± {:.4}, exact {:.6}",
        sampled.b,
        sampled.std_error,
        tomographic_chsh(&pc, &angles)?
    );
    println!("largest |z| = {worst_z:.2}");
    Ok(worst_z)
}

fn main() -> tomobell::Result<()> {
    run_example().map(|_| ())
}
