use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2, TAU};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use tomobell::bell::{
    maximize_chsh, pseudospin_discrepancy, pseudospin_matrices, tomographic_chsh,
    tomographic_correlation, BellAnglesQuadrature, CoplanarCorrelation, OptimizerConfig,
    DISCREPANCY_TOL,
};
use tomobell::sampling::{estimate_probs, sample_state};
use tomobell::special::{make_quadrature, QuadratureKind};
use tomobell::states::{density_matrix, TwoModeState};
use tomobell::tomography::{
    inverse_fourier_wigner, kernel_reconstruct_density, pair_coherent_integral_direct,
    pair_coherent_integral_series, sign_binned_closed_form, tomogram_fn, InverseFourierConfig,
    KernelConfig, RadonConfig, RadonProjector, SampledTomogram, SingleModeState,
};

type Outcome = tomobell::Result<(bool, String)>;

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

fn epr_set() -> tomobell::Result<Vec<TwoModeState>> {
    [0.20, 0.54, 0.96]
        .iter()
        .map(|&l| TwoModeState::squeezed_vacuum(l))
        .collect()
}

fn fock_set() -> tomobell::Result<Vec<TwoModeState>> {
    [1, 3, 5]
        .iter()
        .map(|&n| TwoModeState::fock_pair(n))
        .collect()
}

fn spin_algebra() -> Outcome {
    let mut worst: f64 = 0.0;
    for cutoff in [2, 4, 64] {
        let ops = pseudospin_matrices(cutoff)?;
        let comm = &ops.sx * &ops.sy - &ops.sy * &ops.sx - &ops.sz * Complex64::new(0.0, 2.0);
        worst = comm.iter().fold(worst, |m, z| m.max(z.norm()));
    }
    Ok((
        worst <= 1e-12,
        format!("max |[Sx,Sy] - 2iSz| = {worst:.1e} for cutoffs 2, 4, 64"),
    ))
}

fn epr_radon() -> Outcome {
    let mut worst: f64 = 0.0;
    let theta1 = 0.2;
    for s in [0.25, 0.5, 1.0] {
        let state = TwoModeState::from_squeezing(s)?;
        let proj = RadonProjector::new(&state, &RadonConfig::default())?;
        let half = 2.0 * state.quadrature_variance()?.sqrt();
        let xs = linspace(-half, half, 9);
        for sum in [0.0, 1.1, 2.5] {
            let theta2 = sum - theta1;
            let f = tomogram_fn(&state, theta1, theta2)?;
            for &x1 in &xs {
                for &x2 in &xs {
                    let radon = proj.project_homodyne(x1, theta1, x2, theta2)?;
                    worst = worst.max((f(x1, x2) - radon).abs());
                }
            }
        }
    }
    Ok((
        worst <= 1e-6,
        format!("max |closed - radon| = {worst:.2e} over 3 squeezings x 3 sums x 81 points"),
    ))
}

fn never_exceed_half() -> Outcome {
    let sums: Vec<f64> = (0..360).map(|k| TAU * k as f64 / 360.0).collect();
    let mut largest: f64 = 0.0;
    for state in epr_set()?.iter().chain(&fock_set()?) {
        for &sum in &sums {
            let p = sign_binned_closed_form(state, 0.0, sum)?;
            largest = p.as_array().iter().fold(largest, |m, &w| m.max(w));
        }
    }
    Ok((
        largest <= 0.5 + 1e-9,
        format!("largest w over both families = {largest:.12}"),
    ))
}

fn never_violated() -> Outcome {
    let cfg = OptimizerConfig::default();
    let mut largest: f64 = f64::MIN;
    let mut parts = Vec::new();
    for state in epr_set()?.iter().chain(&fock_set()?) {
        let opt = maximize_chsh(&|a, b| tomographic_correlation(state, a, b), &cfg)?;
        largest = largest.max(opt.value);
        parts.push(format!(
            "{}={:.6}",
            state.descriptor().parameter.unwrap_or(f64::NAN),
            opt.value
        ));
    }
    Ok((
        largest <= 2.0 + 1e-6,
        format!("max B = {largest:.9} ({})", parts.join(", ")),
    ))
}

fn epr_pseudospin_maximum() -> Outcome {
    let formula = |l: f64| SQRT_2 * (1.0 + 2.0 * l / (1.0 + l * l));
    let mut worst: f64 = 0.0;
    for l in [0.0, 0.2, 0.54, 0.8, 0.96, 0.999] {
        let c = CoplanarCorrelation::closed_form(&TwoModeState::squeezed_vacuum(l)?)?;
        let (_, b) = c.max_over_u(-FRAC_PI_2, FRAC_PI_4, -FRAC_PI_4);
        worst = worst.max((b - formula(l)).abs());
    }
    // Fock-space route at one squeezing
    let state = TwoModeState::squeezed_vacuum(0.54)?;
    let (_, b_fock) =
        CoplanarCorrelation::fock(&state, 64)?.max_over_u(-FRAC_PI_2, FRAC_PI_4, -FRAC_PI_4);
    let fock_gap = (b_fock - formula(0.54)).abs();
    let c = CoplanarCorrelation::closed_form(&TwoModeState::squeezed_vacuum(0.96)?)?;
    let (_, b096) = c.max_over_u(-FRAC_PI_2, FRAC_PI_4, -FRAC_PI_4);
    let c = CoplanarCorrelation::closed_form(&TwoModeState::squeezed_vacuum(0.999)?)?;
    let (_, b0999) = c.max_over_u(-FRAC_PI_2, FRAC_PI_4, -FRAC_PI_4);
    let limit_gap = (b0999 - 2.0 * SQRT_2).abs();
    let pass = worst <= 1e-8 && fock_gap <= 1e-8 && limit_gap <= 1e-3;
    Ok((
        pass,
        format!(
            "max |B - sqrt2 (1 + 2l/(1+l^2))| = {worst:.1e}, Fock route gap {fock_gap:.1e}; \
             B(0.96) = {b096:.6}; \
             |B(0.999) - 2 sqrt2| = {limit_gap:.1e}"
        ),
    ))
}

fn fock_pair_pseudospin() -> Outcome {
    let cfg = OptimizerConfig::default();
    let singlet = maximize_chsh(&|a, b| Ok((a - b).cos()), &cfg)?;
    let one = CoplanarCorrelation::closed_form(&TwoModeState::fock_pair(1)?)?;
    let via_state = maximize_chsh(&|a, b| Ok(one.at(a, b)), &cfg)?;
    let mut worst_n2: f64 = 0.0;
    for n in [2, 3, 5] {
        let c = CoplanarCorrelation::closed_form(&TwoModeState::fock_pair(n)?)?;
        let opt = maximize_chsh(&|a, b| Ok(c.at(a, b)), &cfg)?;
        worst_n2 = worst_n2.max((opt.value - 2.0).abs());
    }
    let gap = (singlet.value - 2.0 * SQRT_2)
        .abs()
        .max((via_state.value - 2.0 * SQRT_2).abs());
    Ok((
        gap <= 1e-4 && worst_n2 <= 1e-6,
        format!("n=1: |B - 2 sqrt2| = {gap:.1e}; n in {{2,3,5}}: max |B - 2| = {worst_n2:.1e}"),
    ))
}

fn integral_routes_agree() -> Outcome {
    let mut worst: f64 = 0.0;
    let xs = [-3.0, 0.0, 3.0];
    for r in [0.5, 1.0, 1.5] {
        for &x1 in &xs {
            for &x2 in &xs {
                for k in 0..8 {
                    let phi0 = TAU * k as f64 / 8.0 + 0.1;
                    let series = pair_coherent_integral_series(x1, x2, phi0, r, 400)?;
                    let direct = pair_coherent_integral_direct(x1, phi0, x2, phi0, r, 128)?;
                    worst = worst.max((series.value - direct).norm() / direct.norm().max(1.0));
                }
            }
        }
    }
    Ok((
        worst <= 1e-8,
        format!("max |series - direct| / max(1, |I|) = {worst:.1e} over 216 points"),
    ))
}

fn pair_coherent_scan_b(r: f64) -> tomobell::Result<f64> {
    tomographic_chsh(
        &TwoModeState::pair_coherent(r)?,
        &BellAnglesQuadrature::pair_coherent_figure(),
    )
}

fn bisect_crossing(mut lo: f64, mut hi: f64) -> tomobell::Result<f64> {
    let f_lo = pair_coherent_scan_b(lo)? - 2.0;
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if (pair_coherent_scan_b(mid)? - 2.0).signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn pair_coherent_tomographic_violation() -> Outcome {
    let rs: Vec<f64> = (0..=120).map(|k| 0.3 + 0.01 * k as f64).collect();
    let bs: Vec<f64> = rs
        .iter()
        .map(|&r| pair_coherent_scan_b(r))
        .collect::<tomobell::Result<_>>()?;
    let above: Vec<usize> = (0..rs.len()).filter(|&i| bs[i] > 2.0).collect();
    let Some((&first, &last)) = above.first().zip(above.last()) else {
        return Ok((false, "no r in [0.3, 1.5] gives B > 2".into()));
    };
    let contiguous = above.len() == last - first + 1;
    let bounded = first > 0 && last < rs.len() - 1;
    let lower = bisect_crossing(rs[first - 1], rs[first])?;
    let upper = bisect_crossing(rs[last], rs[last + 1])?;
    let peak = bs.iter().cloned().fold(f64::MIN, f64::max);
    Ok((
        contiguous && bounded,
        format!("B > 2 for r in ({lower:.6}, {upper:.6}); peak B = {peak:.6}; B <= 2 at both ends of [0.3, 1.5]"),
    ))
}

fn pair_coherent_pseudospin() -> Outcome {
    let report = pseudospin_discrepancy(1.05, 64, DISCREPANCY_TOL)?;
    let state = TwoModeState::pair_coherent(1.05)?;
    let used = CoplanarCorrelation::auto(&state, 64)?;
    let fock = CoplanarCorrelation::fock(&state, 64)?;
    let (_, b) = used.max_over_u(PI, 0.0, FRAC_PI_2);
    let route_ok = if report.agrees {
        true
    } else {
        report.adopted_coefficient == report.fock_coefficient
            && [
                used.xx - fock.xx,
                used.xz - fock.xz,
                used.zx - fock.zx,
                used.zz - fock.zz,
            ]
            .iter()
            .all(|d| d.abs() <= 1e-9)
    };
    let detail = if report.agrees {
        format!(
            "closed form and Fock agree to {:.1e}; max B = {b:.6}",
            report.difference
        )
    } else {
        format!(
            "closed form {:.6} vs Fock {:.6} differ by {:.3}; discrepancy report produced, Fock value adopted; max B = {b:.6}",
            report.closed_form_coefficient, report.fock_coefficient, report.difference
        )
    };
    Ok((route_ok && b > 2.0, detail))
}

fn monte_carlo() -> Outcome {
    let states = [
        TwoModeState::squeezed_vacuum(0.54)?,
        TwoModeState::fock_pair(1)?,
        TwoModeState::pair_coherent(1.05)?,
    ];
    let (t1, t2) = (0.4, 0.9);
    let count = 100_000;
    let mut worst_z: f64 = 0.0;
    let mut inside = 0usize;
    let mut total = 0usize;
    for state in &states {
        let exact = sign_binned_closed_form(state, t1, t2)?.as_array();
        for seed in 0..50u64 {
            let est = estimate_probs(&sample_state(state, t1, t2, count, seed, 0)?)?;
            for k in 0..4 {
                let z = (est.probs.as_array()[k] - exact[k]).abs() / est.std_errors[k];
                if seed == 0 {
                    worst_z = worst_z.max(z);
                }
                inside += usize::from(z <= 2.0);
                total += 1;
            }
        }
    }
    let coverage = inside as f64 / total as f64;
    Ok((
        worst_z <= 4.0 && (0.90..=0.99).contains(&coverage),
        format!("seed-0 batches: max |z| = {worst_z:.2}; 2-sigma coverage {inside}/{total} = {coverage:.3}"),
    ))
}

fn reconstruction() -> Outcome {
    let vacuum = SingleModeState::vacuum();
    let f = vacuum.tomogram()?;
    let tomo = SampledTomogram::from_fn(&*f, 8.0, 401, 32)?;
    let w = inverse_fourier_wigner(&tomo, &[0.0], &[0.0], &InverseFourierConfig::default())?;
    let w_err = (w.values[0][0] * PI - 1.0).abs();
    let cutoff = 6;
    let rho0 = kernel_reconstruct_density(&*f, cutoff, &KernelConfig::default())?.density;
    let one = SingleModeState::Fock { n: 1 }.tomogram()?;
    let rho1 = kernel_reconstruct_density(&*one, cutoff, &KernelConfig::default())?.density;
    let e0 = (rho0.get(0, 0).re - 1.0).abs();
    let e1 = (rho1.get(1, 1).re - 1.0).abs();
    Ok((
        w_err <= 0.01 && e0 <= 0.02 && e1 <= 0.05,
        format!(
            "W(0,0) rel err {w_err:.1e}; rho00 err {e0:.1e}; rho11 err {e1:.1e} (cutoff {cutoff})"
        ),
    ))
}

/// Gauss–Legendre panels covering `[-half, half]`; resolves the narrow
/// ridge of strongly squeezed tomograms.
fn composite_rule(half: f64, panels: usize, order: usize) -> tomobell::Result<Vec<(f64, f64)>> {
    let h = 2.0 * half / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    for k in 0..panels {
        let a = -half + k as f64 * h;
        nodes.extend(make_quadrature(QuadratureKind::GaussLegendre, order, (a, a + h))?.iter());
    }
    Ok(nodes)
}

fn normalization() -> Outcome {
    let mut states = epr_set()?;
    states.extend(fock_set()?);
    for r in [0.5, 1.05, 1.5] {
        states.push(TwoModeState::pair_coherent(r)?);
    }
    let angle_pairs = [(0.0, 0.0), (0.3, 1.2), (FRAC_PI_2, -FRAC_PI_4), (2.0, 2.9)];
    let mut tomo_worst: f64 = 0.0;
    let mut probs_worst: f64 = 0.0;
    let mut trace_worst: f64 = 0.0;
    for state in &states {
        let half = 9.0 * state.quadrature_variance()?.sqrt();
        let nodes = composite_rule(half, 96, 10)?;
        for &(t1, t2) in &angle_pairs {
            let f = tomogram_fn(state, t1, t2)?;
            let total: f64 = nodes
                .iter()
                .map(|&(x1, w1)| w1 * nodes.iter().map(|&(x2, w2)| w2 * f(x1, x2)).sum::<f64>())
                .sum();
            tomo_worst = tomo_worst.max((total - 1.0).abs());
            probs_worst =
                probs_worst.max((sign_binned_closed_form(state, t1, t2)?.sum() - 1.0).abs());
        }
        for cutoff in [4, 16, 64] {
            let dm = density_matrix(state, cutoff)?;
            trace_worst = trace_worst.max((dm.trace() + dm.trace_deficit() - 1.0).abs());
        }
    }
    let singles = [
        SingleModeState::vacuum(),
        SingleModeState::Fock { n: 4 },
        SingleModeState::Coherent {
            alpha: Complex64::new(0.7, -0.4),
        },
        SingleModeState::Thermal { nbar: 1.5 },
    ];
    let rule = make_quadrature(QuadratureKind::GaussLegendre, 200, (-14.0, 14.0))?;
    for s in &singles {
        let f = s.tomogram()?;
        tomo_worst = tomo_worst.max((rule.integrate(|x| f(x, 0.8)) - 1.0).abs());
        for cutoff in [4, 10, 30] {
            let dm = s.density(cutoff)?;
            trace_worst = trace_worst.max((dm.trace() + dm.trace_deficit() - 1.0).abs());
        }
    }
    let rec =
        kernel_reconstruct_density(&*singles[1].tomogram()?, 8, &KernelConfig::default())?.density;
    trace_worst = trace_worst.max((rec.trace() + rec.trace_deficit() - 1.0).abs());
    Ok((
        tomo_worst <= 1e-6 && probs_worst <= 1e-9 && trace_worst <= 1e-9,
        format!("tomogram |int - 1| <= {tomo_worst:.1e}; probs |sum - 1| <= {probs_worst:.1e}; trace + deficit off by <= {trace_worst:.1e}"),
    ))
}

struct Criterion {
    id: usize,
    name: &'static str,
    budget: Option<Duration>,
    check: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion {
            id: 1,
            name: "pseudospin algebra",
            budget: Some(Duration::from_secs(1)),
            check: spin_algebra,
        },
        Criterion {
            id: 2,
            name: "squeezed-vacuum tomogram vs Radon projection",
            budget: Some(Duration::from_secs(30)),
            check: epr_radon,
        },
        Criterion {
            id: 3,
            name: "sign-binned probabilities never exceed 1/2",
            budget: None,
            check: never_exceed_half,
        },
        Criterion {
            id: 4,
            name: "tomographic CHSH never violated for squeezed vacuum and Fock pairs",
            budget: None,
            check: never_violated,
        },
        Criterion {
            id: 5,
            name: "squeezed-vacuum pseudospin maximum",
            budget: None,
            check: epr_pseudospin_maximum,
        },
        Criterion {
            id: 6,
            name: "Fock-pair pseudospin maxima",
            budget: None,
            check: fock_pair_pseudospin,
        },
        Criterion {
            id: 7,
            name: "pair-coherent integral: direct vs Hermite series",
            budget: Some(Duration::from_secs(10)),
            check: integral_routes_agree,
        },
        Criterion {
            id: 8,
            name: "pair-coherent tomographic violation window",
            budget: None,
            check: pair_coherent_tomographic_violation,
        },
        Criterion {
            id: 9,
            name: "pair-coherent pseudospin cross-check",
            budget: None,
            check: pair_coherent_pseudospin,
        },
        Criterion {
            id: 10,
            name: "Monte Carlo soundness",
            budget: Some(Duration::from_secs(60)),
            check: monte_carlo,
        },
        Criterion {
            id: 11,
            name: "reconstruction sanity",
            budget: None,
            check: reconstruction,
        },
        Criterion {
            id: 12,
            name: "normalization suite",
            budget: None,
            check: normalization,
        },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.check)();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok((ok, detail)) => (ok, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = c.budget.is_none_or(|b| elapsed <= b);
        let pass = ok && in_time;
        let timing = match c.budget {
            Some(b) => format!("{:.2}s of {}s", elapsed.as_secs_f64(), b.as_secs()),
            None => format!("{:.2}s", elapsed.as_secs_f64()),
        };
        println!(
            "{} [{:>2}] {}: {detail} [{timing}]",
            if pass { "PASS" } else { "FAIL" },
            c.id,
            c.name
        );
        failures += usize::from(!pass);
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
