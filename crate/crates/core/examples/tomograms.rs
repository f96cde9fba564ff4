// Closed-form two-mode tomograms checked against a numerical Radon
// projection of the Wigner function.

use tomobell::states::TwoModeState;
use tomobell::tomography::{tomogram_fn, RadonConfig, RadonProjector};

fn run_example() -> tomobell::Result<f64> {
    let mut worst: f64 = 0.0;
    for state in [
        TwoModeState::squeezed_vacuum(0.54)?,
        TwoModeState::fock_pair(2)?,
        TwoModeState::pair_coherent(1.05)?,
    ] {
        let proj = RadonProjector::new(&state, &RadonConfig::default())?;
        let (t1, t2) = (0.3, 1.1);
        let w = tomogram_fn(&state, t1, t2)?;
        for &(x1, x2) in &[(0.0, 0.0), (0.5, -0.4), (-1.0, 0.8)] {
            let closed = w(x1, x2);
            let radon = proj.project_homodyne(x1, t1, x2, t2)?;
            worst = worst.max((closed - radon).abs());
            println!(
                "{:?} X=({x1}, {x2}): closed {closed:.10} radon {radon:.10}",
                state.descriptor().kind
            );
        }
    }
    println!("largest difference {worst:.2e}");
    Ok(worst)
}

fn main() -> tomobell::Result<()> {
    run_example().map(|_| ())
}
