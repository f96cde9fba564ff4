// The pair-coherent phase integral by direct quadrature and by its Hermite
// series.

use tomobell::tomography::{pair_coherent_integral_direct, pair_coherent_integral_series};

fn run_example() -> tomobell::Result<f64> {
    let mut worst: f64 = 0.0;
    for r in [0.5, 1.0, 1.5] {
        for phi0 in [0.0, 0.7, 2.1] {
            let (x1, x2) = (0.8, -1.3);
            // φ0 is the mean of the two homodyne angles
            let direct = pair_coherent_integral_direct(x1, phi0, x2, phi0, r, 128)?;
            let series = pair_coherent_integral_series(x1, x2, phi0, r, 400)?;
            worst = worst.max((direct - series.value).norm());
            println!(
                "r {r} phi0 {phi0}: direct {direct:.10} series {:.10} ({} terms)",
                series.value, series.terms
            );
        }
    }
    println!("largest difference {worst:.2e}");
    Ok(worst)
}

fn main() -> tomobell::Result<()> {
    run_example().map(|_| ())
}
