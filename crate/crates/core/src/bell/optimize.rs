use std::f64::consts::TAU;
use std::sync::Mutex;

use argmin::core::{CostFunction, Executor, State};
use argmin::solver::neldermead::NelderMead;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{chsh, BellAnglesQuadrature};
use crate::error::{Error, Result};

/// Grid search followed by Nelder–Mead refinement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Grid points per angle on `[0, 2π)`.
    pub grid: usize,
    /// Number of best grid cells refined.
    pub refine_top: usize,
    pub max_iters: u64,
    /// Simplex spread at which refinement stops.
    pub sd_tolerance: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            grid: 24,
            refine_top: 8,
            max_iters: 4000,
            sd_tolerance: 1e-14,
        }
    }
}

/// Result of [`maximize_chsh`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshOptimum {
    /// Best angles, reduced to `[0, 2π)`.
    pub angles: BellAnglesQuadrature,
    pub value: f64,
    /// Best value found on the grid alone.
    pub grid_value: f64,
}

#[derive(Clone, Copy)]
struct Candidate {
    value: f64,
    idx: [usize; 4],
}

fn better(a: &Candidate, b: &Candidate) -> bool {
    a.value > b.value || (a.value == b.value && a.idx < b.idx)
}

fn insert_top(top: &mut Vec<Candidate>, c: Candidate, k: usize) {
    let pos = top.iter().position(|t| better(&c, t)).unwrap_or(top.len());
    if pos < k {
        top.insert(pos, c);
        top.truncate(k);
    }
}

struct Problem<'a> {
    corr: &'a (dyn Fn(f64, f64) -> Result<f64> + Sync),
    failure: &'a Mutex<Option<Error>>,
}

impl Problem<'_> {
    fn value(&self, p: &[f64]) -> Result<f64> {
        let a = BellAnglesQuadrature {
            theta1: p[0],
            theta1p: p[1],
            theta2: p[2],
            theta2p: p[3],
        };
        let b = a.try_chsh_of(|x, y| finite(self.corr, x, y))?;
        Ok(b)
    }
}

impl CostFunction for Problem<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        match self.value(p) {
            Ok(b) => Ok(-b),
            Err(e) => {
                let msg = e.to_string();
                self.failure.lock().expect("poisoned").get_or_insert(e);
                Err(argmin::core::Error::msg(msg))
            }
        }
    }
}

fn finite(corr: &(dyn Fn(f64, f64) -> Result<f64> + Sync), x: f64, y: f64) -> Result<f64> {
    let e = corr(x, y)?;
    if !e.is_finite() {
        return Err(Error::NonFinite(format!(
            "correlation at angles ({x}, {y})"
        )));
    }
    Ok(e)
}

/// Maximizes `B` over the four homodyne angles for a correlation `E(θ1, θ2)`.
///
/// Every combination of grid angles is scored from a precomputed table of
/// `E`, then the best cells seed Nelder–Mead runs on the exact function.
/// The procedure is deterministic.
pub fn maximize_chsh(
    corr: &(dyn Fn(f64, f64) -> Result<f64> + Sync),
    cfg: &OptimizerConfig,
) -> Result<ChshOptimum> {
    let g = cfg.grid;
    if g < 2 || cfg.refine_top == 0 || !(cfg.sd_tolerance > 0.0) {
        return Err(Error::config(
            "optimizer needs grid >= 2, refine_top >= 1 and sd_tolerance > 0",
        ));
    }
    let step = TAU / g as f64;
    let angle = |i: usize| i as f64 * step;

    let table: Vec<Vec<f64>> = (0..g)
        .into_par_iter()
        .map(|i| {
            (0..g)
                .map(|j| finite(corr, angle(i), angle(j)))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;

    let k = cfg.refine_top;
    let tops: Vec<Vec<Candidate>> = (0..g)
        .into_par_iter()
        .map(|a| {
            let mut top: Vec<Candidate> = Vec::with_capacity(k + 1);
            for ap in 0..g {
                for b in 0..g {
                    for bp in 0..g {
                        let value = chsh([table[a][b], table[a][bp], table[ap][b], table[ap][bp]]);
                        if top.len() < k || value >= top[top.len() - 1].value {
                            insert_top(
                                &mut top,
                                Candidate {
                                    value,
                                    idx: [a, ap, b, bp],
                                },
                                k,
                            );
                        }
                    }
                }
            }
            top
        })
        .collect();
    let mut top = Vec::with_capacity(k + 1);
    for c in tops.into_iter().flatten() {
        insert_top(&mut top, c, k);
    }
    let grid_value = top[0].value;

    let mut best = (grid_value, top[0].idx.map(angle));
    for c in &top {
        let start: Vec<f64> = c.idx.iter().map(|&i| angle(i)).collect();
        let mut simplex = vec![start.clone()];
        for d in 0..4 {
            let mut p = start.clone();
            p[d] += 0.5 * step;
            simplex.push(p);
        }
        let failure = Mutex::new(None);
        let problem = Problem {
            corr,
            failure: &failure,
        };
        let solver = NelderMead::new(simplex)
            .with_sd_tolerance(cfg.sd_tolerance)
            .map_err(|e| Error::config(e.to_string()))?;
        let run = Executor::new(problem, solver)
            .configure(|s| s.max_iters(cfg.max_iters))
            .run();
        if let Some(e) = failure.lock().expect("poisoned").take() {
            return Err(e);
        }
        let res =
            run.map_err(|e| Error::convergence(format!("Nelder–Mead refinement failed: {e}")))?;
        let state = res.state();
        if let Some(p) = state.get_best_param() {
            let v = -state.get_best_cost();
            if v.is_finite() && v > best.0 {
                best = (v, [p[0], p[1], p[2], p[3]]);
            }
        }
    }
    let [t1, t1p, t2, t2p] = best.1;
    Ok(ChshOptimum {
        angles: BellAnglesQuadrature::new(t1, t1p, t2, t2p)?.reduced(),
        value: best.0,
        grid_value,
    })
}
