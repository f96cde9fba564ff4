// Sign-binned probabilities `w±±` as functions of the angle sum, in closed
// form and by quadrant integration.

use std::f64::consts::TAU;

use tomobell::states::TwoModeState;
use tomobell::tomography::{
    sign_binned_closed_form, sign_binned_numeric, tomogram_fn, QuadrantConfig,
};

fn run_example() -> tomobell::Result<f64> {
    let mut largest: f64 = 0.0;
    for state in [
        TwoModeState::squeezed_vacuum(0.96)?,
        TwoModeState::fock_pair(3)?,
    ] {
        let cfg = QuadrantConfig::for_state(&state)?;
        for k in 0..8 {
            let sum = TAU * k as f64 / 8.0;
            let closed = sign_binned_closed_form(&state, 0.0, sum)?;
            let f = tomogram_fn(&state, 0.0, sum)?;
            let numeric = sign_binned_numeric(&*f, 0.0, sum, &cfg)?;
            largest = closed.as_array().iter().fold(largest, |m, &v| m.max(v));
            println!(
                "{:?} sum {sum:.3}: w++ {:.8} (numeric {:.8}) E {:+.6}",
                state.descriptor().kind,
                closed.w_pp,
                numeric.w_pp,
                closed.correlation()
            );
        }
    }
    println!("largest w = {largest:.12}");
    Ok(largest)
}

fn main() -> tomobell::Result<()> {
    run_example().map(|_| ())
}
