//! Loadings of partitions: dominant eigenvectors of the part-product
//! (similitude) and L1-distance (difference) matrices over the partition
//! list, computed matrix-free by power iteration and rescaled to [0, 100].

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kronecker::Triple;
use crate::partitions::{enumerate, Partition, PartitionSet};

/// Eigenvector spreads below this are treated as constant vectors, for which
/// min-max loadings are undefined.
pub const MIN_SPREAD: f64 = 1e-12;

/// Power-iteration stopping rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    /// Run exactly this many iterations.
    Fixed(u32),
    /// Iterate until the L-infinity change between successive normalized
    /// iterates is at most `tol`, failing beyond `max_iters`.
    Converge { tol: f64, max_iters: u32 },
}

impl Default for Mode {
    fn default() -> Self {
        Mode::Converge {
            tol: 1e-13,
            max_iters: 10_000,
        }
    }
}

/// Outcome of a power iteration run.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerResult {
    /// Final normalized iterate.
    pub vector: Vec<f64>,
    /// Iterations actually performed.
    pub iterations: u32,
    /// Final Rayleigh quotient, the dominant-eigenvalue estimate.
    pub eigenvalue: f64,
    /// `max_i |(M x - eigenvalue * x)_i|` at the final iterate.
    pub residual: f64,
    /// Normalized iterates after each step, when recording was requested.
    pub trace: Option<Vec<Vec<f64>>>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Power iteration from the first standard basis vector with L2-normalized
/// iterates. Detects a sign-flipping Rayleigh quotient (no positive dominant
/// eigenvalue) and reports non-convergence past the iteration cap.
pub fn power_iteration<F>(
    matvec: F,
    dim: usize,
    mode: Mode,
    record_trace: bool,
) -> Result<PowerResult>
where
    F: Fn(&[f64], &mut [f64]),
{
    if dim == 0 {
        return Err(Error::Domain("power iteration needs dimension >= 1".into()));
    }
    let (cap, tol) = match mode {
        Mode::Fixed(k) => (k, None),
        Mode::Converge { tol, max_iters } => (max_iters, Some(tol)),
    };
    let mut x = vec![0.0; dim];
    x[0] = 1.0;
    let mut y = vec![0.0; dim];
    let mut prev = vec![0.0; dim];
    let mut older = vec![0.0; dim];
    let mut trace = record_trace.then(Vec::new);
    let mut prev_rayleigh: Option<f64> = None;
    let mut iterations = 0u32;
    let mut last_delta = f64::INFINITY;
    while iterations < cap {
        matvec(&x, &mut y);
        let rayleigh = dot(&x, &y);
        if let Some(prev) = prev_rayleigh {
            if prev * rayleigh < 0.0 {
                return Err(Error::Oscillation {
                    iteration: iterations + 1,
                });
            }
        }
        prev_rayleigh = Some(rayleigh);
        let norm = dot(&y, &y).sqrt();
        if norm == 0.0 {
            return Err(Error::Domain("iterate annihilated by the matrix".into()));
        }
        older.copy_from_slice(&prev);
        prev.copy_from_slice(&x);
        last_delta = 0.0;
        for i in 0..dim {
            let next = y[i] / norm;
            last_delta = last_delta.max((next - x[i]).abs());
            x[i] = next;
        }
        iterations += 1;
        if let Some(t) = trace.as_mut() {
            t.push(x.clone());
        }
        if let Some(tol) = tol {
            if last_delta <= tol {
                break;
            }
            // A 2-periodic orbit (x back at the value from two steps ago
            // while still moving) means two eigenvalues of equal magnitude
            // and opposite sign dominate. Summing consecutive iterates
            // cancels the negative-eigenvalue component, so restarting from
            // the symmetrized point recovers the nonnegative eigenvector;
            // convergence is still judged by the usual criterion afterward.
            if iterations >= 2 {
                let cycle = x
                    .iter()
                    .zip(&older)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max);
                if cycle <= tol {
                    for i in 0..dim {
                        y[i] = x[i] + prev[i];
                    }
                    let sum_norm = dot(&y, &y).sqrt();
                    if sum_norm > 1e-12 {
                        for i in 0..dim {
                            x[i] = y[i] / sum_norm;
                        }
                    }
                }
            }
        }
    }
    if let Some(tol) = tol {
        if last_delta > tol {
            return Err(Error::NonConvergence {
                max_iters: cap,
                last_delta,
            });
        }
    }
    matvec(&x, &mut y);
    let eigenvalue = dot(&x, &y);
    let residual = x
        .iter()
        .zip(&y)
        .map(|(xi, yi)| (yi - eigenvalue * xi).abs())
        .fold(0.0f64, f64::max);
    Ok(PowerResult {
        vector: x,
        iterations,
        eigenvalue,
        residual,
        trace,
    })
}

/// Zero-padded part matrix of a partition list, row-major p(n) x n.
pub(crate) struct PaddedParts {
    n: usize,
    p: usize,
    data: Vec<u8>,
}

impl PaddedParts {
    pub(crate) fn new(order: &PartitionSet) -> PaddedParts {
        let n = order.n() as usize;
        let p = order.len();
        let mut data = vec![0u8; p * n];
        for (i, lam) in order.iter().enumerate() {
            for (j, &part) in lam.parts().iter().enumerate() {
                data[i * n + j] = part as u8;
            }
        }
        PaddedParts { n, p, data }
    }

    /// out = P (P^T x): two passes of the part matrix, O(p n).
    pub(crate) fn apply_similitude(&self, x: &[f64], out: &mut [f64]) {
        let mut tmp = vec![0.0; self.n];
        for (i, &xi) in x.iter().enumerate() {
            let row = &self.data[i * self.n..(i + 1) * self.n];
            for (t, &part) in tmp.iter_mut().zip(row) {
                *t += part as f64 * xi;
            }
        }
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.data[i * self.n..(i + 1) * self.n];
            *o = row.iter().zip(&tmp).map(|(&part, t)| part as f64 * t).sum();
        }
    }

    /// out_i = sum_j ||row_i - row_j||_1 x_j, rows in parallel, O(p^2 n).
    pub(crate) fn apply_difference(&self, x: &[f64], out: &mut [f64]) {
        let n = self.n;
        let data = &self.data;
        out.par_iter_mut().enumerate().for_each(|(i, o)| {
            let a = &data[i * n..(i + 1) * n];
            let mut acc = 0.0;
            for (j, &xj) in x.iter().enumerate() {
                let b = &data[j * n..(j + 1) * n];
                let mut dist = 0u32;
                for (&pa, &pb) in a.iter().zip(b) {
                    dist += pa.abs_diff(pb) as u32;
                }
                acc += dist as f64 * xj;
            }
            *o = acc;
        });
    }
}

fn check_vector_len(p: usize, x: &[f64]) -> Result<()> {
    if x.len() != p {
        return Err(Error::SizeMismatch {
            left: x.len() as u32,
            right: p as u32,
        });
    }
    Ok(())
}

/// One product of the similitude matrix (pairwise padded part dot products)
/// with `x`, without materializing the matrix.
pub fn similitude_matvec(n: u32, x: &[f64]) -> Result<Vec<f64>> {
    let order = enumerate(n)?;
    let padded = PaddedParts::new(&order);
    check_vector_len(padded.p, x)?;
    let mut out = vec![0.0; padded.p];
    padded.apply_similitude(x, &mut out);
    Ok(out)
}

/// One product of the difference matrix (pairwise L1 distances of padded
/// parts) with `x`, without materializing the matrix.
pub fn difference_matvec(n: u32, x: &[f64]) -> Result<Vec<f64>> {
    let order = enumerate(n)?;
    let padded = PaddedParts::new(&order);
    check_vector_len(padded.p, x)?;
    let mut out = vec![0.0; padded.p];
    padded.apply_difference(x, &mut out);
    Ok(out)
}

/// Loadings from one matrix: the normalized eigenvector and its [0, 100]
/// min-max rescaling over the partition order.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleLoadings {
    pub order: PartitionSet,
    /// Min-max rescaled loadings; the argmin is exactly 0 and the argmax
    /// exactly 100.
    pub values: Vec<f64>,
    /// The normalized dominant eigenvector.
    pub eigvec: Vec<f64>,
    pub iterations: u32,
    pub eigenvalue: f64,
    pub residual: f64,
}

fn normalize_loadings(eigvec: &[f64]) -> Result<Vec<f64>> {
    let mut imin = 0;
    let mut imax = 0;
    for (i, &v) in eigvec.iter().enumerate() {
        if v < eigvec[imin] {
            imin = i;
        }
        if v > eigvec[imax] {
            imax = i;
        }
    }
    let spread = eigvec[imax] - eigvec[imin];
    if spread < MIN_SPREAD {
        return Err(Error::DegenerateSpread { spread });
    }
    let mut values: Vec<f64> = eigvec
        .iter()
        .map(|&v| 100.0 * (v - eigvec[imin]) / spread)
        .collect();
    values[imin] = 0.0;
    values[imax] = 100.0;
    Ok(values)
}

fn single_loadings(
    order: &PartitionSet,
    padded: &PaddedParts,
    difference: bool,
    mode: Mode,
) -> Result<SingleLoadings> {
    let result = if difference {
        power_iteration(
            |x, out| padded.apply_difference(x, out),
            padded.p,
            mode,
            false,
        )?
    } else {
        power_iteration(
            |x, out| padded.apply_similitude(x, out),
            padded.p,
            mode,
            false,
        )?
    };
    let values = normalize_loadings(&result.vector)?;
    Ok(SingleLoadings {
        order: order.clone(),
        values,
        eigvec: result.vector,
        iterations: result.iterations,
        eigenvalue: result.eigenvalue,
        residual: result.residual,
    })
}

/// Similitude-side loadings only; supports totals far beyond what the
/// difference side can reach because each product costs O(p n).
pub fn similitude_loadings(n: u32, mode: Mode) -> Result<SingleLoadings> {
    if n < 2 {
        return Err(Error::Domain("loadings need n >= 2".into()));
    }
    let order = enumerate(n)?;
    let padded = PaddedParts::new(&order);
    single_loadings(&order, &padded, false, mode)
}

/// Difference-side loadings only.
pub fn difference_loadings(n: u32, mode: Mode) -> Result<SingleLoadings> {
    if n < 2 {
        return Err(Error::Domain("loadings need n >= 2".into()));
    }
    let order = enumerate(n)?;
    let padded = PaddedParts::new(&order);
    single_loadings(&order, &padded, true, mode)
}

/// Both loading families over one partition order.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadingTable {
    pub n: u32,
    pub order: PartitionSet,
    /// Similitude-side loadings, indexed like `order`.
    pub r: Vec<f64>,
    /// Difference-side loadings, indexed like `order`.
    pub b: Vec<f64>,
    /// Normalized dominant eigenvector of the similitude matrix.
    pub v: Vec<f64>,
    /// Normalized dominant eigenvector of the difference matrix.
    pub w: Vec<f64>,
    /// Iterations used on the (similitude, difference) sides.
    pub iterations: (u32, u32),
    /// Final residuals on the (similitude, difference) sides.
    pub residuals: (f64, f64),
}

/// Computes both loading families for the partitions of `n`.
pub fn compute_loadings(n: u32, mode: Mode) -> Result<LoadingTable> {
    if n < 2 {
        return Err(Error::Domain("loadings need n >= 2".into()));
    }
    let order = enumerate(n)?;
    let padded = PaddedParts::new(&order);
    let sim = single_loadings(&order, &padded, false, mode)?;
    let diff = single_loadings(&order, &padded, true, mode)?;
    Ok(LoadingTable {
        n,
        order,
        r: sim.values,
        b: diff.values,
        v: sim.eigvec,
        w: diff.eigvec,
        iterations: (sim.iterations, diff.iterations),
        residuals: (sim.residual, diff.residual),
    })
}

/// Loadings of a triple: componentwise sums in the given order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleLoading {
    pub r: f64,
    pub b: f64,
}

/// Sums the loadings of the three components of `t`.
pub fn triple_loading(t: &Triple, table: &LoadingTable) -> Result<TripleLoading> {
    if t.n() != table.n {
        return Err(Error::SizeMismatch {
            left: t.n(),
            right: table.n,
        });
    }
    let idx = |p: &Partition| {
        table
            .order
            .index_of(p)
            .ok_or_else(|| Error::Domain(format!("partition {p} not in loading order")))
    };
    let (i, j, k) = (idx(&t.lambda)?, idx(&t.mu)?, idx(&t.nu)?);
    Ok(TripleLoading {
        r: table.r[i] + table.r[j] + table.r[k],
        b: table.b[i] + table.b[j] + table.b[k],
    })
}
