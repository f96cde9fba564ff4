// Four-angle CHSH maximization over tomographic correlations.

use tomobell::bell::{maximize_chsh, tomographic_correlation, OptimizerConfig};
use tomobell::states::TwoModeState;

fn run_example() -> tomobell::Result<Vec<f64>> {
    let mut out = Vec::new();
    let cfg = OptimizerConfig::default();
    let singlet = maximize_chsh(&|a, b| Ok((a - b).cos()), &cfg)?;
    println!(
        "cos(a - b): B = {:.10} at {:?}",
        singlet.value,
        singlet.angles.as_array()
    );
    out.push(singlet.value);
    for state in [
        TwoModeState::squeezed_vacuum(0.96)?,
        TwoModeState::fock_pair(1)?,
    ] {
        let opt = maximize_chsh(&|a, b| tomographic_correlation(&state, a, b), &cfg)?;
        println!(
            "{:?}: B = {:.10} (grid {:.10})",
            state.descriptor(),
            opt.value,
            opt.grid_value
        );
        out.push(opt.value);
    }
    Ok(out)
}

fn main() -> tomobell::Result<()> {
    run_example().map(|_| ())
}
