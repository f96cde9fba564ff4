use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::parse::{parse_angle, parse_angle_map, parse_values};
use super::*;
use crate::bell::{
    bell_scan_csv, maximize_chsh, pseudospin_discrepancy, tomographic_chsh,
    tomographic_correlation, violating_intervals, BellAnglesQuadrature, BellScanRow, BellSummary,
    CoplanarCorrelation, OptimizerConfig, PseudospinDiscrepancy, DISCREPANCY_TOL,
};
use crate::output::{fmt_g, write_atomic, CsvTable, CSV_DIGITS};
use crate::sampling::{
    estimate_probs, sample_gaussian_epr_stream, sample_rejection, EnvelopeConfig,
};
use crate::states::density_matrix;
use crate::tomography::{
    inverse_fourier_wigner, kernel_reconstruct_density, sign_binned_closed_form,
    sign_binned_numeric, tomogram_fn, InverseFourierConfig, KernelConfig, QuadrantConfig,
    RadonConfig, RadonProjector, SampledTomogram, SignBinnedProbs, SingleModeState,
};

struct Ctx<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    /// Writes `content` to `path`, or to standard output when absent.
    fn emit(&mut self, path: Option<&Path>, content: &str) -> Result<()> {
        match path {
            Some(p) => write_atomic(p, content.as_bytes()),
            None => Ok(self.out.write_all(content.as_bytes())?),
        }
    }

    /// Report line: standard output when the data went to a file,
    /// standard error otherwise.
    fn note(&mut self, data_in_file: bool, msg: &str) -> Result<()> {
        if data_in_file {
            writeln!(self.out, "{msg}")?;
        } else {
            writeln!(self.err, "{msg}")?;
        }
        Ok(())
    }
}

pub(super) fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let mut ctx = Ctx { out, err };
    match &cli.command {
        Command::Tomogram(a) => tomogram(a, &mut ctx),
        Command::Probs(a) => probs(a, &mut ctx),
        Command::BellScan(a) => bell_scan(a, &mut ctx),
        Command::Pseudospin(a) => pseudospin(a, &mut ctx),
        Command::Optimize(a) => optimize(a, &mut ctx),
        Command::Sample(a) => sample(a, &mut ctx),
        Command::Reconstruct(a) => reconstruct(a, &mut ctx),
        Command::Figures(a) => figures(cli, a, &mut ctx),
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

fn need_points(n: usize, what: &str) -> Result<()> {
    if n < 2 {
        return Err(Error::config(format!("--{what} must be at least 2")));
    }
    Ok(())
}

fn tomogram(a: &TomogramArgs, ctx: &mut Ctx) -> Result<()> {
    if a.x_points == 0 {
        return Err(Error::config("--x-points must be at least 1"));
    }
    if a.check_radon && !(a.radon_tol > 0.0) {
        return Err(Error::config("--radon-tol must be positive"));
    }
    let t1s = parse_values(&a.theta1)?;
    let t2s = parse_values(&a.theta2)?;
    let states = a.state.states()?;
    let mut header = vec!["parameter", "theta1", "theta2", "X1", "X2", "w"];
    if a.check_radon {
        header.extend(["w_radon", "abs_diff"]);
    }
    let mut table = CsvTable::new(header);
    let mut max_diff: f64 = 0.0;
    let mut checked = 0usize;
    for ps in &states {
        let half = match a.x_max {
            Some(h) if h > 0.0 && h.is_finite() => h,
            Some(h) => return Err(Error::config(format!("--x-max {h} must be positive"))),
            None => 2.0 * ps.state.quadrature_variance()?.sqrt(),
        };
        let xs = linspace(-half, half, a.x_points);
        let proj = if a.check_radon {
            Some(RadonProjector::new(&ps.state, &RadonConfig::default())?)
        } else {
            None
        };
        for &t1 in &t1s {
            for &t2 in &t2s {
                let f = tomogram_fn(&ps.state, t1, t2)?;
                let grid: Vec<(f64, f64)> = xs
                    .iter()
                    .flat_map(|&x1| xs.iter().map(move |&x2| (x1, x2)))
                    .collect();
                let rows: Vec<Vec<f64>> = grid
                    .par_iter()
                    .map(|&(x1, x2)| {
                        let w = f(x1, x2);
                        let mut row = vec![ps.parameter, t1, t2, x1, x2, w];
                        if let Some(p) = &proj {
                            let r = p.project_homodyne(x1, t1, x2, t2)?;
                            row.extend([r, (w - r).abs()]);
                        }
                        Ok(row)
                    })
                    .collect::<Result<_>>()?;
                for row in rows {
                    if a.check_radon {
                        max_diff = max_diff.max(row[7]);
                        checked += 1;
                    }
                    table.push_floats(&row);
                }
            }
        }
    }
    ctx.emit(a.out.as_deref(), &table.to_csv_string())?;
    if a.check_radon {
        ctx.note(
            a.out.is_some(),
            &format!(
                "max |closed - radon| = {max_diff:.3e} over {checked} points (tolerance {:.1e})",
                a.radon_tol
            ),
        )?;
        if max_diff > a.radon_tol {
            return Err(Error::accuracy(format!(
                "closed form and Radon projection differ by {max_diff:.3e} > {:.1e}",
                a.radon_tol
            )));
        }
    }
    Ok(())
}

fn probs(a: &ProbsArgs, ctx: &mut Ctx) -> Result<()> {
    need_points(a.points, "points")?;
    let t1 = parse_angle(&a.theta1)?;
    let sums = linspace(0.0, TAU, a.points);
    let mut table = CsvTable::new([
        "parameter",
        "theta1",
        "theta2",
        "theta_sum",
        "w_pp",
        "w_pm",
        "w_mp",
        "w_mm",
    ]);
    let mut notes = Vec::new();
    for ps in a.state.states()? {
        let cfg = QuadrantConfig::for_state(&ps.state)?;
        let rows: Vec<SignBinnedProbs> = sums
            .par_iter()
            .map(|&sum| {
                let t2 = sum - t1;
                match a.method {
                    ProbsMethod::Closed => sign_binned_closed_form(&ps.state, t1, t2),
                    ProbsMethod::Numeric => {
                        let f = tomogram_fn(&ps.state, t1, t2)?;
                        sign_binned_numeric(&*f, t1, t2, &cfg)
                    }
                }
            })
            .collect::<Result<_>>()?;
        let mut max_w: f64 = 0.0;
        for (p, &sum) in rows.iter().zip(&sums) {
            max_w = p.as_array().iter().fold(max_w, |m, &v| m.max(v));
            table.push_floats(&[
                ps.parameter,
                t1,
                p.theta2,
                sum,
                p.w_pp,
                p.w_pm,
                p.w_mp,
                p.w_mm,
            ]);
        }
        notes.push(format!(
            "parameter {}: max w = {}",
            fmt_g(ps.parameter, 6),
            fmt_g(max_w, CSV_DIGITS)
        ));
    }
    ctx.emit(a.out.as_deref(), &table.to_csv_string())?;
    for n in notes {
        ctx.note(a.out.is_some(), &n)?;
    }
    Ok(())
}

fn correlation_source(
    state: &TwoModeState,
    source: PseudospinSource,
    cutoff: usize,
) -> Result<CoplanarCorrelation> {
    match source {
        PseudospinSource::Auto => CoplanarCorrelation::auto(state, cutoff),
        PseudospinSource::Closed => CoplanarCorrelation::closed_form(state),
        PseudospinSource::Fock => CoplanarCorrelation::fock(state, cutoff),
    }
}

/// `(θu', θv, θv')` of the pseudospin figure of each state.
fn figure_pseudospin_angles(state: &TwoModeState) -> (f64, f64, f64) {
    match state {
        TwoModeState::SqueezedVacuum { .. } => (-FRAC_PI_2, FRAC_PI_4, -FRAC_PI_4),
        _ => (PI, 0.0, FRAC_PI_2),
    }
}

fn tomographic_angles(spec: Option<&str>) -> Result<BellAnglesQuadrature> {
    let d = BellAnglesQuadrature::pair_coherent_figure();
    let Some(spec) = spec else { return Ok(d) };
    let m = parse_angle_map(spec, &["t1", "t1p", "t2", "t2p"])?;
    let get = |k: &str, v: f64| m.get(k).copied().unwrap_or(v);
    BellAnglesQuadrature::new(
        get("t1", d.theta1),
        get("t1p", d.theta1p),
        get("t2", d.theta2),
        get("t2p", d.theta2p),
    )
}

fn summary_path(explicit: &Option<PathBuf>, out: &Option<PathBuf>) -> Option<PathBuf> {
    explicit
        .clone()
        .or_else(|| out.as_ref().map(|p| p.with_extension("json")))
}

fn bell_scan(a: &BellScanArgs, ctx: &mut Ctx) -> Result<()> {
    let states = a.state.states()?;
    let opt_cfg = OptimizerConfig::default();
    let (rows, method, labels) = match a.mode {
        BellMode::Tomographic => {
            let angles = tomographic_angles(a.angles.as_deref())?;
            let rows: Vec<BellScanRow> = states
                .par_iter()
                .map(|ps| {
                    if a.optimize {
                        let corr = |x: f64, y: f64| tomographic_correlation(&ps.state, x, y);
                        let o = maximize_chsh(&corr, &opt_cfg)?;
                        Ok(BellScanRow {
                            parameter: ps.parameter,
                            angles: o.angles,
                            b: o.value,
                        })
                    } else {
                        Ok(BellScanRow {
                            parameter: ps.parameter,
                            angles,
                            b: tomographic_chsh(&ps.state, &angles)?,
                        })
                    }
                })
                .collect::<Result<_>>()?;
            let method = if a.optimize {
                "tomographic, optimized angles"
            } else {
                "tomographic, fixed angles"
            };
            (rows, method, None)
        }
        BellMode::Pseudospin => {
            let m = match &a.angles {
                Some(s) => parse_angle_map(s, &["tu", "tup", "tv", "tvp"])?,
                None => Default::default(),
            };
            let rows: Vec<BellScanRow> = states
                .par_iter()
                .map(|ps| {
                    let c = correlation_source(&ps.state, a.source, a.cutoff)?;
                    if a.optimize {
                        let corr = |x: f64, y: f64| Ok(c.at(x, y));
                        let o = maximize_chsh(&corr, &opt_cfg)?;
                        return Ok(BellScanRow {
                            parameter: ps.parameter,
                            angles: o.angles,
                            b: o.value,
                        });
                    }
                    let (dup, dv, dvp) = figure_pseudospin_angles(&ps.state);
                    let tup = m.get("tup").copied().unwrap_or(dup);
                    let tv = m.get("tv").copied().unwrap_or(dv);
                    let tvp = m.get("tvp").copied().unwrap_or(dvp);
                    let (tu, b) = match m.get("tu") {
                        Some(&tu) => (tu, c.chsh(tu, tup, tv, tvp)),
                        None => c.max_over_u(tup, tv, tvp),
                    };
                    Ok(BellScanRow {
                        parameter: ps.parameter,
                        angles: BellAnglesQuadrature::new(tu, tup, tv, tvp)?,
                        b,
                    })
                })
                .collect::<Result<_>>()?;
            let method = if a.optimize {
                "pseudospin, optimized angles"
            } else if m.contains_key("tu") {
                "pseudospin, fixed angles"
            } else {
                "pseudospin, maximized over theta_u"
            };
            (
                rows,
                method,
                Some(["theta_u", "theta_up", "theta_v", "theta_vp"]),
            )
        }
    };
    let csv = match labels {
        None => bell_scan_csv(&rows),
        Some(l) => {
            let mut t = CsvTable::new(["parameter", l[0], l[1], l[2], l[3], "B"]);
            for r in &rows {
                let g = r.angles;
                t.push_floats(&[r.parameter, g.theta1, g.theta1p, g.theta2, g.theta2p, r.b]);
            }
            t.to_csv_string()
        }
    };
    ctx.emit(a.out.as_deref(), &csv)?;
    let summary = BellSummary::from_scan(&rows, method)?;
    let json = summary.to_json_string()?;
    let to_file = a.out.is_some();
    match summary_path(&a.summary, &a.out) {
        Some(p) => write_atomic(&p, json.as_bytes())?,
        None => ctx.note(false, &json)?,
    }
    ctx.note(
        to_file,
        &format!(
            "max B = {} at parameter {}",
            fmt_g(summary.max_b, CSV_DIGITS),
            fmt_g(summary.argmax_parameter.unwrap_or(f64::NAN), 6)
        ),
    )?;
    if summary.violating_intervals.is_empty() {
        ctx.note(to_file, "B <= 2 at every scanned parameter")?;
    }
    for (lo, hi) in &summary.violating_intervals {
        ctx.note(
            to_file,
            &format!(
                "B > 2 for parameter in [{}, {}]",
                fmt_g(*lo, 6),
                fmt_g(*hi, 6)
            ),
        )?;
    }
    Ok(())
}

fn pseudospin_curve(c: &CoplanarCorrelation, tus: &[f64], tup: f64, tv: f64, tvp: f64) -> CsvTable {
    let mut t = CsvTable::new(["theta_u", "E_uv", "E_uvp", "E_upv", "E_upvp", "B"]);
    for &tu in tus {
        let e = [c.at(tu, tv), c.at(tu, tvp), c.at(tup, tv), c.at(tup, tvp)];
        t.push_floats(&[tu, e[0], e[1], e[2], e[3], crate::bell::chsh(e)]);
    }
    t
}

fn pseudospin(a: &PseudospinArgs, ctx: &mut Ctx) -> Result<()> {
    let ps = a.state.single()?;
    let c = correlation_source(&ps.state, a.source, a.cutoff)?;
    let m = match &a.angles {
        Some(s) => parse_angle_map(s, &["tup", "tv", "tvp"])?,
        None => Default::default(),
    };
    let (dup, dv, dvp) = figure_pseudospin_angles(&ps.state);
    let tup = m.get("tup").copied().unwrap_or(dup);
    let tv = m.get("tv").copied().unwrap_or(dv);
    let tvp = m.get("tvp").copied().unwrap_or(dvp);
    let tus = parse_values(&a.theta_u)?;
    ctx.emit(
        a.out.as_deref(),
        &pseudospin_curve(&c, &tus, tup, tv, tvp).to_csv_string(),
    )?;
    let to_file = a.out.is_some();
    let (arg, best) = c.max_over_u(tup, tv, tvp);
    ctx.note(
        to_file,
        &format!(
            "max over theta_u of B = {} at theta_u = {}",
            fmt_g(best, CSV_DIGITS),
            fmt_g(arg, CSV_DIGITS)
        ),
    )?;
    if let TwoModeState::PairCoherent { r } = ps.state {
        let rep = pseudospin_discrepancy(r, a.cutoff, DISCREPANCY_TOL)?;
        let json = rep.to_json_string()?;
        match &a.discrepancy {
            Some(p) => write_atomic(p, json.as_bytes())?,
            None => ctx.note(to_file, &json)?,
        }
        if !rep.agrees {
            ctx.note(
                to_file,
                &format!(
                    "closed-form coefficient {} differs from the Fock value {}; the Fock value is used",
                    fmt_g(rep.closed_form_coefficient, 10),
                    fmt_g(rep.fock_coefficient, 10)
                ),
            )?;
        }
    }
    if let Some(p) = &a.write_density {
        let dm = match &ps.state {
            TwoModeState::ExplicitFock { dm } => dm.clone(),
            s => density_matrix(s, a.cutoff)?,
        };
        write_atomic(p, dm.to_json_string()?.as_bytes())?;
    }
    Ok(())
}

fn optimize(a: &OptimizeArgs, ctx: &mut Ctx) -> Result<()> {
    let ps = a.state.single()?;
    let cfg = OptimizerConfig {
        grid: a.grid,
        refine_top: a.refine_top,
        ..OptimizerConfig::default()
    };
    let (opt, mode) = match a.mode {
        BellMode::Tomographic => {
            let corr = |x: f64, y: f64| tomographic_correlation(&ps.state, x, y);
            (maximize_chsh(&corr, &cfg)?, "tomographic")
        }
        BellMode::Pseudospin => {
            let c = correlation_source(&ps.state, a.source, a.cutoff)?;
            let corr = |x: f64, y: f64| Ok(c.at(x, y));
            (maximize_chsh(&corr, &cfg)?, "pseudospin")
        }
    };
    let summary = BellSummary {
        max_b: opt.value,
        argmax_angles: opt.angles,
        method: format!("{mode}, grid {} with Nelder-Mead refinement", a.grid),
        argmax_parameter: Some(ps.parameter),
        violating_intervals: Vec::new(),
    };
    let mut json = summary.to_json_string()?;
    json.push('\n');
    ctx.emit(a.out.as_deref(), &json)?;
    if a.out.is_some() {
        ctx.note(true, &format!("max B = {}", fmt_g(opt.value, CSV_DIGITS)))?;
    }
    Ok(())
}

fn sample(a: &SampleArgs, ctx: &mut Ctx) -> Result<()> {
    let ps = a.state.single()?;
    let t1 = parse_angle(&a.theta1)?;
    let t2 = parse_angle(&a.theta2)?;
    let batch = match &ps.state {
        TwoModeState::SqueezedVacuum { .. } => {
            let s = ps
                .state
                .squeezing()
                .expect("squeezed vacuum has a squeezing");
            sample_gaussian_epr_stream(s, t1, t2, a.count, a.seed, a.stream)?
        }
        TwoModeState::ExplicitFock { .. } => {
            return Err(Error::UnsupportedState(
                "sampling needs a closed-form tomogram".into(),
            ))
        }
        st => {
            let f = tomogram_fn(st, t1, t2)?;
            let cfg = EnvelopeConfig::for_state(st, a.inflation)?;
            sample_rejection(
                &*f,
                st.descriptor(),
                t1,
                t2,
                a.count,
                a.seed,
                a.stream,
                &cfg,
            )?
        }
    };
    ctx.emit(a.out.as_deref(), &batch.to_csv_string())?;
    let to_file = a.out.is_some();
    if let Some(p) = &a.out {
        write_atomic(&p.with_extension("json"), batch.sidecar_json()?.as_bytes())?;
    }
    let est = estimate_probs(&batch)?;
    let cf = sign_binned_closed_form(&ps.state, t1, t2)?;
    for (k, name) in ["w_pp", "w_pm", "w_mp", "w_mm"].iter().enumerate() {
        let (e, s, c) = (est.probs.as_array()[k], est.std_errors[k], cf.as_array()[k]);
        let z = if s > 0.0 { (e - c) / s } else { 0.0 };
        ctx.note(
            to_file,
            &format!(
                "{name} = {} ± {} (closed form {}, z = {:.2})",
                fmt_g(e, 8),
                fmt_g(s, 3),
                fmt_g(c, 10),
                z
            ),
        )?;
    }
    if let Some(r) = batch.acceptance_rate {
        ctx.note(to_file, &format!("acceptance rate = {}", fmt_g(r, 6)))?;
    }
    Ok(())
}

fn single_mode_target(a: &ReconstructArgs) -> Result<SingleModeState> {
    Ok(match a.state {
        SingleModeKind::Vacuum => SingleModeState::vacuum(),
        SingleModeKind::Fock => SingleModeState::Fock { n: a.n },
        SingleModeKind::Coherent => SingleModeState::Coherent {
            alpha: Complex64::new(a.alpha_re, a.alpha_im),
        },
        SingleModeKind::Thermal => SingleModeState::Thermal { nbar: a.nbar },
        SingleModeKind::Epr => SingleModeState::Marginal {
            state: TwoModeState::squeezed_vacuum(a.lambda)?,
        },
        SingleModeKind::FockPair => SingleModeState::Marginal {
            state: TwoModeState::fock_pair(
                u32::try_from(a.n).map_err(|_| Error::config("--n is too large"))?,
            )?,
        },
        SingleModeKind::PairCoherent => SingleModeState::Marginal {
            state: TwoModeState::pair_coherent(a.r)?,
        },
    })
}

fn reconstruct(a: &ReconstructArgs, ctx: &mut Ctx) -> Result<()> {
    let target = single_mode_target(a)?;
    let f = target.tomogram()?;
    let to_file = a.out.is_some();
    match a.method {
        ReconstructMethod::Kernel => {
            let rec = kernel_reconstruct_density(&*f, a.cutoff, &KernelConfig::default())?;
            let exact = target.density(a.cutoff)?;
            let mut max_dev: f64 = 0.0;
            for i in 0..a.cutoff {
                for j in 0..a.cutoff {
                    max_dev = max_dev.max((rec.density.get(i, j) - exact.get(i, j)).norm());
                }
            }
            let mut json = rec.density.to_json_string()?;
            json.push('\n');
            ctx.emit(a.out.as_deref(), &json)?;
            ctx.note(
                to_file,
                &format!(
                    "max |rho - exact| = {max_dev:.3e}; extrapolation change = {:.3e}; trace deficit = {:.3e}",
                    rec.extrapolation_change,
                    rec.density.trace_deficit()
                ),
            )?;
        }
        ReconstructMethod::Wigner => {
            let grid = parse_values(&a.grid)?;
            let tomo = SampledTomogram::from_fn(&*f, 8.0, 401, 32)?;
            let rec =
                inverse_fourier_wigner(&tomo, &grid, &grid, &InverseFourierConfig::default())?;
            let w = target.wigner()?;
            let mut t = CsvTable::new(["q", "p", "W", "W_exact", "abs_diff"]);
            let mut max_dev: f64 = 0.0;
            for (i, &q) in grid.iter().enumerate() {
                for (j, &p) in grid.iter().enumerate() {
                    let (got, want) = (rec.values[i][j], w(q, p));
                    max_dev = max_dev.max((got - want).abs());
                    t.push_floats(&[q, p, got, want, (got - want).abs()]);
                }
            }
            ctx.emit(a.out.as_deref(), &t.to_csv_string())?;
            ctx.note(
                to_file,
                &format!(
                    "max |W - exact| = {max_dev:.3e}; integral = {}; imaginary residue = {:.1e}",
                    fmt_g(rec.normalization, 10),
                    rec.imag_residue
                ),
            )?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ManifestEntry {
    name: String,
    sha256: String,
    bytes: usize,
    rows: usize,
}

#[derive(Serialize)]
struct Manifest<'a> {
    generator: String,
    config: &'a Cli,
    files: Vec<ManifestEntry>,
    pair_coherent_violating_intervals: Vec<(f64, f64)>,
    pair_coherent_discrepancy: PseudospinDiscrepancy,
}

fn w_vs_sum(states: &[TwoModeState], params: &[f64], sums: &[f64], name: &str) -> Result<CsvTable> {
    let mut t = CsvTable::new([name, "theta_sum", "w_pp", "w_pm", "w_mp", "w_mm"]);
    for (st, &p) in states.iter().zip(params) {
        let rows: Vec<SignBinnedProbs> = sums
            .par_iter()
            .map(|&s| sign_binned_closed_form(st, 0.0, s))
            .collect::<Result<_>>()?;
        for (w, &s) in rows.iter().zip(sums) {
            t.push_floats(&[p, s, w.w_pp, w.w_pm, w.w_mp, w.w_mm]);
        }
    }
    Ok(t)
}

fn figures(cli: &Cli, a: &FiguresArgs, ctx: &mut Ctx) -> Result<()> {
    need_points(a.points, "points")?;
    let sums = linspace(0.0, TAU, a.points);
    let tus = linspace(-PI, PI, a.points);

    let lambdas = [0.20, 0.54, 0.96];
    let epr: Vec<TwoModeState> = lambdas
        .iter()
        .map(|&l| TwoModeState::squeezed_vacuum(l))
        .collect::<Result<_>>()?;
    let ns = [1.0, 3.0, 5.0];
    let fock: Vec<TwoModeState> = [1, 3, 5]
        .iter()
        .map(|&n| TwoModeState::fock_pair(n))
        .collect::<Result<_>>()?;

    let fig1a = w_vs_sum(&epr, &lambdas, &sums, "lambda")?;
    let mut fig1b = CsvTable::new(["lambda", "theta_u", "B"]);
    for (st, &l) in epr.iter().zip(&lambdas) {
        let c = CoplanarCorrelation::closed_form(st)?;
        for &tu in &tus {
            fig1b.push_floats(&[l, tu, c.chsh(tu, -FRAC_PI_2, FRAC_PI_4, -FRAC_PI_4)]);
        }
    }
    let fig2a = w_vs_sum(&fock, &ns, &sums, "n")?;
    let c1 = CoplanarCorrelation::closed_form(&fock[0])?;
    let mut fig2b = CsvTable::new(["theta_u", "B"]);
    for &tu in &tus {
        fig2b.push_floats(&[tu, c1.chsh(tu, PI, 0.0, FRAC_PI_2)]);
    }

    let rs = parse_values(&a.r_range)?;
    let angles = BellAnglesQuadrature::pair_coherent_figure();
    let rows: Vec<BellScanRow> = rs
        .par_iter()
        .map(|&r| {
            let st = TwoModeState::pair_coherent(r)?;
            Ok(BellScanRow {
                parameter: r,
                angles,
                b: tomographic_chsh(&st, &angles)?,
            })
        })
        .collect::<Result<_>>()?;
    let mut fig3a = CsvTable::new(["r", "B"]);
    for row in &rows {
        fig3a.push_floats(&[row.parameter, row.b]);
    }
    let intervals = violating_intervals(&rows);

    let rep = pseudospin_discrepancy(1.05, a.cutoff, DISCREPANCY_TOL)?;
    let pc = TwoModeState::pair_coherent(1.05)?;
    let adopted = CoplanarCorrelation::auto(&pc, a.cutoff)?;
    let closed = CoplanarCorrelation::closed_form(&pc)?;
    let mut fig3b = CsvTable::new(["theta_u", "B", "B_closed_form_coefficient"]);
    for &tu in &tus {
        fig3b.push_floats(&[
            tu,
            adopted.chsh(tu, PI, 0.0, FRAC_PI_2),
            closed.chsh(tu, PI, 0.0, FRAC_PI_2),
        ]);
    }

    std::fs::create_dir_all(&a.out_dir)
        .map_err(|e| Error::Io(format!("creating {}: {e}", a.out_dir.display())))?;
    let mut files = Vec::new();
    for (name, table) in [
        ("fig1a.csv", &fig1a),
        ("fig1b.csv", &fig1b),
        ("fig2a.csv", &fig2a),
        ("fig2b.csv", &fig2b),
        ("fig3a.csv", &fig3a),
        ("fig3b.csv", &fig3b),
    ] {
        let text = table.to_csv_string();
        write_atomic(&a.out_dir.join(name), text.as_bytes())?;
        files.push(ManifestEntry {
            name: name.into(),
            sha256: hex::encode(Sha256::digest(text.as_bytes())),
            bytes: text.len(),
            rows: table.len(),
        });
    }
    let manifest = Manifest {
        generator: format!("tomobell {}", env!("CARGO_PKG_VERSION")),
        config: cli,
        files,
        pair_coherent_violating_intervals: intervals.clone(),
        pair_coherent_discrepancy: rep,
    };
    let mut json = serde_json::to_string_pretty(&manifest)?;
    json.push('\n');
    write_atomic(&a.out_dir.join("manifest.json"), json.as_bytes())?;
    ctx.note(
        true,
        &format!(
            "wrote 6 datasets and manifest.json to {}",
            a.out_dir.display()
        ),
    )?;
    for (lo, hi) in intervals {
        ctx.note(
            true,
            &format!(
                "pair-coherent B > 2 for r in [{}, {}]",
                fmt_g(lo, 6),
                fmt_g(hi, 6)
            ),
        )?;
    }
    Ok(())
}
