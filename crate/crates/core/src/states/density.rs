use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;
const DIAGONAL_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-9;
const MAX_DENSE_DIM: usize = 4096;

/// Truncated Fock-basis density matrix of one or two modes.
///
/// Entries are stored sparsely; the two-mode index of `|n1, n2>` is
/// `n1 * cutoff + n2`. The probability mass that did not fit under the
/// cutoff is carried in `trace_deficit` rather than renormalised away, so
/// `trace + trace_deficit = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    modes: usize,
    cutoff: usize,
    entries: BTreeMap<(usize, usize), Complex64>,
    trace_deficit: f64,
}

/// On-disk form: `{modes, cutoff, entries: [[i, j, re, im], ...], trace_deficit}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityMatrixJson {
    #[serde(default = "two_modes")]
    pub modes: usize,
    pub cutoff: usize,
    pub entries: Vec<(usize, usize, f64, f64)>,
    pub trace_deficit: f64,
}

fn two_modes() -> usize {
    2
}

impl DensityMatrix {
    /// Validating constructor. Exact zeros are dropped.
    pub fn new<I>(modes: usize, cutoff: usize, entries: I, trace_deficit: f64) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), Complex64)>,
    {
        if !(modes == 1 || modes == 2) {
            return Err(Error::domain(format!(
                "density matrices have 1 or 2 modes, got {modes}"
            )));
        }
        if cutoff < 1 {
            return Err(Error::domain("cutoff must be at least 1"));
        }
        let dim = cutoff.pow(modes as u32);
        let mut map = BTreeMap::new();
        for ((i, j), v) in entries {
            if i >= dim || j >= dim {
                return Err(Error::Dimension(format!(
                    "entry ({i}, {j}) outside a {dim}x{dim} matrix"
                )));
            }
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFinite(format!("density matrix entry ({i}, {j})")));
            }
            if v != Complex64::new(0.0, 0.0) {
                map.insert((i, j), v);
            }
        }
        let dm = DensityMatrix {
            modes,
            cutoff,
            entries: map,
            trace_deficit,
        };
        dm.validate()?;
        Ok(dm)
    }

    /// Builds a matrix from a dense numerical estimate.
    ///
    /// The estimate is replaced by its hermitian part and the deficit is set
    /// to `1 - trace`. The diagonal check still applies.
    pub fn from_estimate(modes: usize, cutoff: usize, dense: &DMatrix<Complex64>) -> Result<Self> {
        let dim = cutoff.pow(modes as u32);
        if dense.nrows() != dim || dense.ncols() != dim {
            return Err(Error::Dimension(format!(
                "estimate is {}x{}, expected {dim}x{dim}",
                dense.nrows(),
                dense.ncols()
            )));
        }
        let herm = (dense + dense.adjoint()) * Complex64::new(0.5, 0.0);
        let trace: f64 = (0..dim).map(|i| herm[(i, i)].re).sum();
        let mut entries = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                let mut v = herm[(i, j)];
                if i == j {
                    v.im = 0.0;
                }
                entries.push(((i, j), v));
            }
        }
        DensityMatrix::new(modes, cutoff, entries, 1.0 - trace)
    }

    fn validate(&self) -> Result<()> {
        for (&(i, j), v) in &self.entries {
            let mirror = self.get(j, i).conj();
            if (v - mirror).norm() > HERMITIAN_TOL {
                return Err(Error::domain(format!(
                    "density matrix not hermitian at ({i}, {j}): {v} vs {mirror}"
                )));
            }
            if i == j && v.re < -DIAGONAL_TOL {
                return Err(Error::domain(format!(
                    "negative population {} at index {i}",
                    v.re
                )));
            }
        }
        let total = self.trace() + self.trace_deficit;
        if (total - 1.0).abs() > TRACE_TOL {
            return Err(Error::domain(format!(
                "trace {} plus deficit {} is {total}, not 1",
                self.trace(),
                self.trace_deficit
            )));
        }
        Ok(())
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.cutoff.pow(self.modes as u32)
    }

    pub fn trace_deficit(&self) -> f64 {
        self.trace_deficit
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries.get(&(i, j)).copied().unwrap_or_default()
    }

    /// Element `<n1 n2| rho |m1 m2>` of a two-mode matrix.
    pub fn get_two_mode(&self, n: (usize, usize), m: (usize, usize)) -> Complex64 {
        self.get(n.0 * self.cutoff + n.1, m.0 * self.cutoff + m.1)
    }

    /// Non-zero entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.entries.iter().map(|(&(i, j), &v)| (i, j, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn trace(&self) -> f64 {
        self.entries
            .iter()
            .filter(|(k, _)| k.0 == k.1)
            .map(|(_, v)| v.re)
            .sum()
    }

    /// Largest `|rho_ij - conj(rho_ji)|`.
    pub fn hermiticity_residual(&self) -> f64 {
        self.entries
            .iter()
            .map(|(&(i, j), v)| (v - self.get(j, i).conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        let dim = self.dim();
        if dim > MAX_DENSE_DIM {
            return Err(Error::Dimension(format!(
                "dense form of a {dim}x{dim} matrix exceeds the {MAX_DENSE_DIM} limit"
            )));
        }
        let mut m = DMatrix::zeros(dim, dim);
        for (&(i, j), &v) in &self.entries {
            m[(i, j)] = v;
        }
        Ok(m)
    }

    /// Smallest eigenvalue of the dense matrix.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let dense = self.to_dense()?;
        let eig = dense.symmetric_eigen();
        Ok(eig
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min))
    }

    /// Reduced state of one mode of a two-mode matrix.
    pub fn partial_trace(&self, keep: usize) -> Result<DensityMatrix> {
        if self.modes != 2 || keep > 1 {
            return Err(Error::Dimension(
                "partial trace needs a two-mode matrix and keep in {0, 1}".into(),
            ));
        }
        let c = self.cutoff;
        let mut reduced: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
        for (&(i, j), &v) in &self.entries {
            let (i1, i2) = (i / c, i % c);
            let (j1, j2) = (j / c, j % c);
            let (kept, traced) = if keep == 0 {
                ((i1, j1), (i2, j2))
            } else {
                ((i2, j2), (i1, j1))
            };
            if traced.0 == traced.1 {
                *reduced.entry(kept).or_default() += v;
            }
        }
        DensityMatrix::new(1, c, reduced, self.trace_deficit)
    }

    pub fn to_json(&self) -> DensityMatrixJson {
        DensityMatrixJson {
            modes: self.modes,
            cutoff: self.cutoff,
            entries: self.iter().map(|(i, j, v)| (i, j, v.re, v.im)).collect(),
            trace_deficit: self.trace_deficit,
        }
    }

    pub fn from_json(json: &DensityMatrixJson) -> Result<Self> {
        DensityMatrix::new(
            json.modes,
            json.cutoff,
            json.entries
                .iter()
                .map(|&(i, j, re, im)| ((i, j), Complex64::new(re, im))),
            json.trace_deficit,
        )
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_json())?)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let json: DensityMatrixJson = serde_json::from_str(s)?;
        DensityMatrix::from_json(&json)
    }
}
