// Pseudospin Bell parameter: maximum over the first setting, and the
// pair-coherent coefficient cross-check.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use tomobell::bell::{pseudospin_discrepancy, CoplanarCorrelation, DISCREPANCY_TOL};
use tomobell::states::TwoModeState;

fn run_example() -> tomobell::Result<Vec<f64>> {
    let mut maxima = Vec::new();
    for lambda in [0.2, 0.54, 0.96] {
        let c = CoplanarCorrelation::closed_form(&TwoModeState::squeezed_vacuum(lambda)?)?;
        let (tu, b) = c.max_over_u(-FRAC_PI_2, FRAC_PI_4, -FRAC_PI_4);
        println!("lambda {lambda}: max B = {b:.8} at theta_u = {tu:.6}");
        maxima.push(b);
    }
    let report = pseudospin_discrepancy(1.05, 64, DISCREPANCY_TOL)?;
    println!("{}", report.to_json_string()?);
    let c = CoplanarCorrelation::auto(&TwoModeState::pair_coherent(1.05)?, 64)?;
    let (tu, b) = c.max_over_u(PI, 0.0, FRAC_PI_2);
    println!("pair coherent r = 1.05: max B = {b:.8} at theta_u = {tu:.6}");
    maxima.push(b);
    Ok(maxima)
}

fn main() -> tomobell::Result<()> {
    run_example().map(|_| ())
}
