//! Descriptive statistics for loading distributions: numerically stable
//! weighted moments, histogram binning, and method-of-moments fits for the
//! normal and gamma families.

use crate::error::{Error, Result};

/// Mean, population variance, and total weight of a value stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    /// Total weight; the sample count when all weights are 1.
    pub count: f64,
    pub mean: f64,
    /// Population variance (second central moment over total weight).
    pub variance: f64,
}

/// Single-pass weighted mean/variance accumulator (West's update). Exact
/// for integer weights well below 2^53 and mergeable across workers.
#[derive(Debug, Clone, Copy, Default)]
pub struct StreamingMoments {
    weight: f64,
    mean: f64,
    m2: f64,
}

impl StreamingMoments {
    pub fn new() -> StreamingMoments {
        StreamingMoments::default()
    }

    /// Adds one sample with weight 1.
    pub fn push(&mut self, x: f64) {
        self.push_weighted(x, 1.0);
    }

    /// Adds one sample with the given nonnegative weight.
    pub fn push_weighted(&mut self, x: f64, w: f64) {
        if w == 0.0 {
            return;
        }
        self.weight += w;
        let delta = x - self.mean;
        self.mean += delta * (w / self.weight);
        self.m2 += w * delta * (x - self.mean);
    }

    /// Combines two accumulators as if their streams were concatenated.
    pub fn merge(&mut self, other: &StreamingMoments) {
        if other.weight == 0.0 {
            return;
        }
        if self.weight == 0.0 {
            *self = *other;
            return;
        }
        let total = self.weight + other.weight;
        let delta = other.mean - self.mean;
        self.mean += delta * (other.weight / total);
        self.m2 += other.m2 + delta * delta * (self.weight * other.weight / total);
        self.weight = total;
    }

    pub fn finish(&self) -> Result<Moments> {
        if self.weight == 0.0 {
            return Err(Error::Domain("moments need at least one sample".into()));
        }
        Ok(Moments {
            count: self.weight,
            mean: self.mean,
            variance: self.m2 / self.weight,
        })
    }
}

/// Moments of a plain sample sequence.
pub fn moments<I: IntoIterator<Item = f64>>(values: I) -> Result<Moments> {
    let mut acc = StreamingMoments::new();
    for x in values {
        acc.push(x);
    }
    acc.finish()
}

/// Moments of the sums x+y+z over ordered triples drawn from the sampled
/// distribution, derived without enumeration: under the uniform product
/// measure the triple mean is 3× the mean, the triple variance 3× the
/// variance, and the triple count the cube.
pub fn triple_moments(single: &Moments) -> Moments {
    Moments {
        count: single.count.powi(3),
        mean: 3.0 * single.mean,
        variance: 3.0 * single.variance,
    }
}

/// Bin-selection rule for [`histogram`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Binning {
    /// Freedman–Diaconis width clamped to [1, 10], bin count clamped to
    /// [20, 200].
    Auto,
    /// Exactly this many equal-width bins over [min, max].
    Count(usize),
    /// Equal bins of this width starting at the minimum; the last bin is
    /// closed on the right.
    Width(f64),
}

/// Equal-width histogram; the maximum value lands in the last bin.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    /// Strictly increasing, one more entry than `counts`.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn bins(&self) -> usize {
        self.counts.len()
    }
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// Bins `values` per the rule. Auto mode uses the Freedman–Diaconis width
/// 2·IQR/∛count with the clamps documented on [`Binning::Auto`].
pub fn histogram(values: &[f64], binning: Binning) -> Result<Histogram> {
    if values.is_empty() {
        return Err(Error::Domain("histogram needs at least one value".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("histogram values must be finite".into()));
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = max - min;

    let (bins, width, snap_last_edge_to_max) = match binning {
        Binning::Width(w) => {
            if !(w > 0.0) {
                return Err(Error::Domain("bin width must be positive".into()));
            }
            if range == 0.0 {
                (1, w, false)
            } else {
                ((range / w).ceil() as usize, w, false)
            }
        }
        Binning::Count(k) => {
            if k == 0 {
                return Err(Error::Domain("bin count must be positive".into()));
            }
            if range == 0.0 {
                (1, 1.0, false)
            } else {
                (k, range / k as f64, true)
            }
        }
        Binning::Auto => {
            if range == 0.0 {
                (1, 1.0, false)
            } else {
                let mut sorted = values.to_vec();
                sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
                let iqr = quantile(&sorted, 0.75) - quantile(&sorted, 0.25);
                let fd = 2.0 * iqr / (values.len() as f64).cbrt();
                let w = fd.clamp(1.0, 10.0);
                let k = ((range / w).ceil() as usize).clamp(20, 200);
                (k, range / k as f64, true)
            }
        }
    };

    let mut edges: Vec<f64> = (0..=bins).map(|i| min + i as f64 * width).collect();
    if snap_last_edge_to_max {
        edges[bins] = max;
    }
    let mut counts = vec![0u64; bins];
    for &v in values {
        let idx = (((v - min) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    Ok(Histogram { edges, counts })
}

/// Distribution family of a moment fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Normal,
    Gamma,
}

/// Parameters fitted by moment matching, with the moments they came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitParams {
    pub family: Family,
    /// (mean, standard deviation) for normal; (shape, scale) for gamma.
    pub params: (f64, f64),
    pub sample_mean: f64,
    pub sample_variance: f64,
    /// Zero-variance input: the fit is a point mass.
    pub degenerate: bool,
}

/// Normal fit by moment matching.
pub fn fit_normal(mean: f64, variance: f64) -> Result<FitParams> {
    if !(variance >= 0.0) {
        return Err(Error::Domain(format!(
            "normal fit needs nonnegative variance, got {variance}"
        )));
    }
    Ok(FitParams {
        family: Family::Normal,
        params: (mean, variance.sqrt()),
        sample_mean: mean,
        sample_variance: variance,
        degenerate: variance == 0.0,
    })
}

/// Gamma fit by moment matching: shape = mean²/variance, scale =
/// variance/mean, so that shape·scale reproduces the sample mean.
pub fn fit_gamma(mean: f64, variance: f64) -> Result<FitParams> {
    if !(mean > 0.0) || !(variance > 0.0) {
        return Err(Error::Domain(format!(
            "gamma fit needs positive mean and variance, got mean={mean} variance={variance}"
        )));
    }
    Ok(FitParams {
        family: Family::Gamma,
        params: (mean * mean / variance, variance / mean),
        sample_mean: mean,
        sample_variance: variance,
        degenerate: false,
    })
}
