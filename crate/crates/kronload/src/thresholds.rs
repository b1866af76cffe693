//! Threshold extraction over all triples of partitions: exhaustive
//! symmetry-reduced scans for the minimum nonvanishing r-loading (r★) and
//! the minimum vanishing b-loading (b★), the threshold classifier built on
//! them, and closed-form conjecture modes for totals beyond scan range.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::characters::{char_row, char_row_big, class_data, CharacterTable, ClassData};
use crate::error::{Error, Result};
use crate::kronecker::Triple;
use crate::loadings::{LoadingTable, SingleLoadings};
use crate::partitions::{Partition, PartitionSet};

/// Triple loadings live in [0, 300]; scan histograms cover this full range.
pub const TRIPLE_LOADING_RANGE: f64 = 300.0;

/// Largest total accepted by `scan`: beyond this the exact inner products no
/// longer provably fit in 128-bit integers (the bound p(n)·n!^1.5 < 2^127
/// fails), and the triple space is out of reach anyway.
pub const MAX_SCAN_N: u32 = 23;

/// Totals above this require `ScanOptions::long` (hours-scale work).
pub const SCAN_LONG_GATE_N: u32 = 16;

/// How a set of thresholds was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Minima over every triple, exact zero tests throughout.
    Exhaustive,
    /// Values from the closed-form conjectures; not a proof.
    Conjectured,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Provenance::Exhaustive => write!(f, "exhaustive"),
            Provenance::Conjectured => write!(f, "conjectured"),
        }
    }
}

/// The two classification thresholds for one total.
///
/// A side that is not available (e.g. only one conjecture applies to this
/// total) carries `f64::NEG_INFINITY` and no argmin, which makes the
/// corresponding classification rule unable to fire.
#[derive(Debug, Clone, PartialEq)]
pub struct Thresholds {
    pub n: u32,
    /// Minimum r(t) over triples with nonvanishing Kronecker coefficient.
    pub r_star: f64,
    /// Minimum b(t) over triples with vanishing Kronecker coefficient.
    pub b_star: f64,
    /// Lexicographically smallest sorted triple attaining r★.
    pub argmin_r: Option<Triple>,
    /// Lexicographically smallest sorted triple attaining b★.
    pub argmin_b: Option<Triple>,
    pub provenance: Provenance,
}

/// Scan controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    /// Unlock totals above [`SCAN_LONG_GATE_N`].
    pub long: bool,
    /// Bin count for the per-class histograms over [0, 300].
    pub bins: usize,
    /// Absolute tolerance under which triple loadings count as tied when
    /// picking argmin representatives.
    pub tie_tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            long: false,
            bins: 60,
            tie_tol: 1e-9,
        }
    }
}

/// Ordered-triple counts over fixed bins, split by vanishing class.
///
/// Per bin, `nonzero + zero` is the total ordered-triple count in that bin
/// and `depth_violating <= zero` (depth violation forces vanishing).
#[derive(Debug, Clone, PartialEq)]
pub struct ClassedHistogram {
    /// `bins + 1` ascending edges spanning [0, 300].
    pub edges: Vec<f64>,
    pub nonzero: Vec<u64>,
    pub zero: Vec<u64>,
    pub depth_violating: Vec<u64>,
}

impl ClassedHistogram {
    fn new(bins: usize) -> ClassedHistogram {
        let width = TRIPLE_LOADING_RANGE / bins as f64;
        ClassedHistogram {
            edges: (0..=bins).map(|i| i as f64 * width).collect(),
            nonzero: vec![0; bins],
            zero: vec![0; bins],
            depth_violating: vec![0; bins],
        }
    }

    fn merge(&mut self, other: &ClassedHistogram) {
        for (a, b) in self.nonzero.iter_mut().zip(&other.nonzero) {
            *a += b;
        }
        for (a, b) in self.zero.iter_mut().zip(&other.zero) {
            *a += b;
        }
        for (a, b) in self.depth_violating.iter_mut().zip(&other.depth_violating) {
            *a += b;
        }
    }

    /// Number of bins.
    pub fn bins(&self) -> usize {
        self.nonzero.len()
    }
}

/// Everything an exhaustive scan produces.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub n: u32,
    pub thresholds: Thresholds,
    /// p(n)³ — counts below are over all ordered triples.
    pub total_triples: u64,
    pub nonzero_count: u64,
    pub zero_count: u64,
    pub depth_violating_count: u64,
    /// Ordered triples with r(t) strictly below r★.
    pub r_below_count: u64,
    /// Ordered triples with b(t) strictly below b★.
    pub b_below_count: u64,
    /// Minimum r(t) among depth-violating triples; +infinity if none exist.
    pub min_r_depth_violating: f64,
    pub r_hist: ClassedHistogram,
    pub b_hist: ClassedHistogram,
}

/// Deterministic tracker for "minimum value plus everything within `tol` of
/// it". Keeping the whole near-minimal candidate set makes the final result
/// independent of how the scan range was split across workers.
#[derive(Debug, Clone)]
struct MinAcc {
    tol: f64,
    min: f64,
    cands: Vec<(f64, (u32, u32, u32))>,
}

impl MinAcc {
    fn new(tol: f64) -> MinAcc {
        MinAcc {
            tol,
            min: f64::INFINITY,
            cands: Vec::new(),
        }
    }

    fn push(&mut self, v: f64, ijk: (u32, u32, u32)) {
        if v <= self.min + self.tol {
            self.cands.push((v, ijk));
            if v < self.min {
                self.min = v;
                let keep = self.min + self.tol;
                self.cands.retain(|&(u, _)| u <= keep);
            }
        }
    }

    fn merge(&mut self, other: MinAcc) {
        for (v, ijk) in other.cands {
            self.push(v, ijk);
        }
    }

    /// True minimum plus the tie-rule winner: among candidates within `tol`
    /// of the minimum, the largest index tuple — which, in a descending
    /// partition list, is the lexicographically smallest partition triple.
    fn finish(self) -> Option<(f64, (u32, u32, u32))> {
        let min = self
            .cands
            .iter()
            .map(|&(v, _)| v)
            .fold(f64::INFINITY, f64::min);
        if !min.is_finite() {
            return None;
        }
        self.cands
            .iter()
            .filter(|&&(v, _)| v <= min + self.tol)
            .map(|&(_, ijk)| ijk)
            .max()
            .map(|ijk| (min, ijk))
    }
}

struct Acc {
    nonzero: u64,
    zero: u64,
    depth_violating: u64,
    min_r_depth_violating: f64,
    r_min: MinAcc,
    b_min: MinAcc,
    r_hist: ClassedHistogram,
    b_hist: ClassedHistogram,
    /// Scratch: nonzero entries of the class-weighted χ_λχ_μ product.
    weighted: Vec<(u32, i128)>,
}

impl Acc {
    fn new(opts: &ScanOptions) -> Acc {
        Acc {
            nonzero: 0,
            zero: 0,
            depth_violating: 0,
            min_r_depth_violating: f64::INFINITY,
            r_min: MinAcc::new(opts.tie_tol),
            b_min: MinAcc::new(opts.tie_tol),
            r_hist: ClassedHistogram::new(opts.bins),
            b_hist: ClassedHistogram::new(opts.bins),
            weighted: Vec::new(),
        }
    }

    fn merge(mut self, other: Acc) -> Acc {
        self.nonzero += other.nonzero;
        self.zero += other.zero;
        self.depth_violating += other.depth_violating;
        self.min_r_depth_violating = self.min_r_depth_violating.min(other.min_r_depth_violating);
        self.r_min.merge(other.r_min);
        self.b_min.merge(other.b_min);
        self.r_hist.merge(&other.r_hist);
        self.b_hist.merge(&other.b_hist);
        self
    }
}

fn bin_index(v: f64, bins: usize) -> usize {
    let width = TRIPLE_LOADING_RANGE / bins as f64;
    ((v / width) as usize).min(bins - 1)
}

fn triple_from_indices(order: &PartitionSet, ijk: (u32, u32, u32)) -> Triple {
    let lam = order.get(ijk.0 as usize).expect("index from scan").clone();
    let mu = order.get(ijk.1 as usize).expect("index from scan").clone();
    let nu = order.get(ijk.2 as usize).expect("index from scan").clone();
    Triple::new(lam, mu, nu).expect("equal totals by construction")
}

/// Exhaustive scan of all triples of partitions of `n`.
///
/// Enumerates sorted representatives λ ≥ μ ≥ ν (indices i ≤ j ≤ k in the
/// descending list) and weights each by its orbit size 1, 3, or 6, which is
/// valid because Kronecker coefficients and triple loadings are symmetric
/// under permuting the triple. The vanishing test is exact: the class-
/// weighted character sum n!·g is accumulated in 128-bit integers, safe for
/// every admitted total because each term is at most n!·√n! and there are
/// p(n) of them, so |partial sums| ≤ p(n)·n!^1.5 < 2^127 for n ≤ 23.
pub fn scan(
    n: u32,
    table: &CharacterTable,
    loadings: &LoadingTable,
    opts: &ScanOptions,
) -> Result<ScanResult> {
    if n > MAX_SCAN_N {
        return Err(Error::ResourceBudget(format!(
            "exhaustive scan for n={n} is beyond the exact-arithmetic bound n={MAX_SCAN_N}"
        )));
    }
    if n > SCAN_LONG_GATE_N && !opts.long {
        return Err(Error::ResourceBudget(format!(
            "exhaustive scan for n={n} exceeds the default budget (n <= {SCAN_LONG_GATE_N}); \
             enable the long option to proceed"
        )));
    }
    if table.n() != n {
        return Err(Error::SizeMismatch {
            left: table.n(),
            right: n,
        });
    }
    if loadings.n != n {
        return Err(Error::SizeMismatch {
            left: loadings.n,
            right: n,
        });
    }
    if opts.bins == 0 {
        return Err(Error::Domain("histogram needs at least one bin".into()));
    }
    if !(opts.tie_tol >= 0.0) {
        return Err(Error::Domain("tie tolerance must be nonnegative".into()));
    }

    let p = loadings.order.len();
    let sizes = table.class_sizes_i128()?;
    let r = &loadings.r;
    let b = &loadings.b;
    let depths: Vec<i64> = loadings.order.iter().map(|l| l.depth() as i64).collect();
    let bins = opts.bins;

    let acc = (0..p)
        .into_par_iter()
        .fold(
            || Acc::new(opts),
            |mut acc, i| {
                let row_i = table.row(i);
                for j in i..p {
                    let row_j = table.row(j);
                    acc.weighted.clear();
                    for c in 0..p {
                        let prod = row_i[c] as i128 * row_j[c] as i128;
                        if prod != 0 {
                            // |size · χλχμ| <= n! by Cauchy-Schwarz, far from
                            // overflow; see the function comment.
                            acc.weighted.push((c as u32, sizes[c] * prod));
                        }
                    }
                    let r_pair = r[i] + r[j];
                    let b_pair = b[i] + b[j];
                    let d_pair_max = depths[i].max(depths[j]);
                    let d_pair_sum = depths[i] + depths[j];
                    for k in j..p {
                        let rv = r_pair + r[k];
                        let bv = b_pair + b[k];
                        let weight: u64 = if i == j && j == k {
                            1
                        } else if i == j || j == k {
                            3
                        } else {
                            6
                        };
                        let rbin = bin_index(rv, bins);
                        let bbin = bin_index(bv, bins);
                        let ijk = (i as u32, j as u32, k as u32);
                        let violates = 2 * d_pair_max.max(depths[k]) > d_pair_sum + depths[k];
                        if violates {
                            // Depth violation forces a vanishing coefficient;
                            // the character sum is skipped.
                            acc.zero += weight;
                            acc.depth_violating += weight;
                            acc.r_hist.zero[rbin] += weight;
                            acc.r_hist.depth_violating[rbin] += weight;
                            acc.b_hist.zero[bbin] += weight;
                            acc.b_hist.depth_violating[bbin] += weight;
                            if rv < acc.min_r_depth_violating {
                                acc.min_r_depth_violating = rv;
                            }
                            acc.b_min.push(bv, ijk);
                            continue;
                        }
                        let row_k = table.row(k);
                        let mut sum: i128 = 0;
                        for &(c, w) in &acc.weighted {
                            sum += w * row_k[c as usize] as i128;
                        }
                        if sum != 0 {
                            acc.nonzero += weight;
                            acc.r_hist.nonzero[rbin] += weight;
                            acc.b_hist.nonzero[bbin] += weight;
                            acc.r_min.push(rv, ijk);
                        } else {
                            acc.zero += weight;
                            acc.r_hist.zero[rbin] += weight;
                            acc.b_hist.zero[bbin] += weight;
                            acc.b_min.push(bv, ijk);
                        }
                    }
                }
                acc
            },
        )
        .reduce(|| Acc::new(opts), Acc::merge);

    let (r_star, r_ijk) = acc
        .r_min
        .finish()
        .ok_or_else(|| Error::Domain("no triple with nonvanishing coefficient".into()))?;
    let (b_star, b_ijk) = acc
        .b_min
        .finish()
        .ok_or_else(|| Error::Domain("no triple with vanishing coefficient".into()))?;

    // Below-threshold counts run over ordered triples in natural nested
    // order, matching how the loading sums group in a plain triple loop.
    let (r_below, b_below) = (0..p)
        .into_par_iter()
        .map(|a| {
            let mut rc = 0u64;
            let mut bc = 0u64;
            for j in 0..p {
                let rp = r[a] + r[j];
                let bp = b[a] + b[j];
                for k in 0..p {
                    if rp + r[k] < r_star {
                        rc += 1;
                    }
                    if bp + b[k] < b_star {
                        bc += 1;
                    }
                }
            }
            (rc, bc)
        })
        .reduce(|| (0, 0), |(a1, b1), (a2, b2)| (a1 + a2, b1 + b2));

    let thresholds = Thresholds {
        n,
        r_star,
        b_star,
        argmin_r: Some(triple_from_indices(&loadings.order, r_ijk)),
        argmin_b: Some(triple_from_indices(&loadings.order, b_ijk)),
        provenance: Provenance::Exhaustive,
    };
    Ok(ScanResult {
        n,
        thresholds,
        total_triples: (p as u64).pow(3),
        nonzero_count: acc.nonzero,
        zero_count: acc.zero,
        depth_violating_count: acc.depth_violating,
        r_below_count: r_below,
        b_below_count: b_below,
        min_r_depth_violating: acc.min_r_depth_violating,
        r_hist: acc.r_hist,
        b_hist: acc.b_hist,
    })
}

/// How a verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// r(t) < r★, which forces g(t) = 0.
    RBelowThreshold,
    /// b(t) < b★, which forces g(t) ≠ 0.
    BBelowThreshold,
}

/// The fired rule and how far below the threshold the triple sits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub rule: Rule,
    /// threshold − value; exceeds the classification slack when the rule fired.
    pub margin: f64,
}

/// Certificate slack for thresholds stored at four decimal places: the true
/// minimum can sit up to half a quantum (5e-5) on either side of the stored
/// value, plus a small float guard.
pub const QUANTIZED_4DEC_SLACK: f64 = 5.1e-5;

/// Certificate slack for full-precision thresholds: guards the boundary
/// itself, where values tied with the minimum must not be certified.
pub const TIE_GUARD_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictKind {
    ProvablyZero,
    ProvablyNonzero,
    Unknown,
}

/// Classification outcome for one triple.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub witness: Option<Witness>,
    /// True when the thresholds are conjectured: the verdict is then an
    /// expectation, not a proof.
    pub advisory: bool,
    pub r_value: f64,
    pub b_value: f64,
}

/// Applies the threshold rules to one triple: r(t) < r★ proves vanishing,
/// b(t) < b★ proves nonvanishing, anything else is unknown. A rule fires
/// only when the value clears its threshold by more than `slack`, which must
/// cover the precision of the threshold source — [`QUANTIZED_4DEC_SLACK`]
/// for table values stored at four decimals, [`TIE_GUARD_SLACK`] for
/// full-precision values. The minima themselves, and anything the stored
/// precision cannot separate from them, stay Unknown rather than receiving
/// a certificate the thresholds cannot actually support. Both rules firing
/// at once means the supplied thresholds are wrong, reported as an error.
pub fn classify(
    t: &Triple,
    th: &Thresholds,
    loadings: &LoadingTable,
    slack: f64,
) -> Result<Verdict> {
    if !(slack >= 0.0 && slack.is_finite()) {
        return Err(Error::Domain(
            "classification slack must be finite and nonnegative".into(),
        ));
    }
    if t.n() != th.n {
        return Err(Error::SizeMismatch {
            left: t.n(),
            right: th.n,
        });
    }
    let tl = crate::loadings::triple_loading(t, loadings)?;
    let r_fires = tl.r < th.r_star - slack;
    let b_fires = tl.b < th.b_star - slack;
    if r_fires && b_fires {
        return Err(Error::InconsistentThresholds);
    }
    let (kind, witness) = if r_fires {
        (
            VerdictKind::ProvablyZero,
            Some(Witness {
                rule: Rule::RBelowThreshold,
                margin: th.r_star - tl.r,
            }),
        )
    } else if b_fires {
        (
            VerdictKind::ProvablyNonzero,
            Some(Witness {
                rule: Rule::BBelowThreshold,
                margin: th.b_star - tl.b,
            }),
        )
    } else {
        (VerdictKind::Unknown, None)
    };
    Ok(Verdict {
        kind,
        witness,
        advisory: th.provenance == Provenance::Conjectured,
        r_value: tl.r,
        b_value: tl.b,
    })
}

/// Minimum r(t) over all triples violating the depth condition, +infinity
/// if no triple violates it. Used to confirm that the depth condition and
/// the r★ rule do not overlap: this minimum stays above r★.
pub fn depth_filter_min_r(order: &PartitionSet, r: &[f64]) -> Result<f64> {
    if r.len() != order.len() {
        return Err(Error::SizeMismatch {
            left: r.len() as u32,
            right: order.len() as u32,
        });
    }
    let depths: Vec<i64> = order.iter().map(|l| l.depth() as i64).collect();
    let p = order.len();
    let mut min = f64::INFINITY;
    for i in 0..p {
        for j in i..p {
            let pair = r[i] + r[j];
            let d_max = depths[i].max(depths[j]);
            let d_sum = depths[i] + depths[j];
            for k in j..p {
                if 2 * d_max.max(depths[k]) > d_sum + depths[k] {
                    let v = pair + r[k];
                    if v < min {
                        min = v;
                    }
                }
            }
        }
    }
    Ok(min)
}

/// Conjectured r★ for totals divisible by 4: the minimum is expected at
/// ((k⁴), (2^{2k}), (2^{2k})) where n = 4k. Needs only similitude-side
/// loadings, so it reaches totals far beyond exhaustive scans.
pub fn conjectured_r_star(loadings: &SingleLoadings) -> Result<(f64, Triple)> {
    let n = loadings.order.n();
    if n % 4 != 0 || n < 8 {
        return Err(Error::Domain(format!(
            "the r★ conjecture needs n = 4k with k >= 2; got n={n}"
        )));
    }
    let k = n / 4;
    let lam = Partition::new(vec![k; 4])?;
    let mu = Partition::new(vec![2; (n / 2) as usize])?;
    let i = loadings
        .order
        .index_of(&lam)
        .ok_or_else(|| Error::Domain(format!("partition {lam} missing from order")))?;
    let j = loadings
        .order
        .index_of(&mu)
        .ok_or_else(|| Error::Domain(format!("partition {mu} missing from order")))?;
    let value = (loadings.values[i] + loadings.values[j]) + loadings.values[j];
    let triple = Triple::new(lam, mu.clone(), mu)?;
    Ok((value, triple))
}

/// Exact vanishing test for g(λ,λ,λ) with character rows computed on
/// demand: 64-bit rows and checked 128-bit accumulation when they fit,
/// escalating to big integers otherwise.
fn self_triple_vanishes(
    lambda: &Partition,
    order: &PartitionSet,
    classes: &[ClassData],
    sizes: Option<&[i128]>,
) -> Result<bool> {
    if let Some(sizes) = sizes {
        // A failed fast path (row overflow or checked-arithmetic overflow)
        // falls through to the exact big-integer path below.
        if let Ok(row) = char_row(lambda, order) {
            let mut sum: i128 = 0;
            let mut overflowed = false;
            for (c, &x) in row.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let x = x as i128;
                let term = x
                    .checked_mul(x)
                    .and_then(|t| t.checked_mul(x))
                    .and_then(|t| t.checked_mul(sizes[c]));
                match term.and_then(|t| sum.checked_add(t)) {
                    Some(s) => sum = s,
                    None => {
                        overflowed = true;
                        break;
                    }
                }
            }
            if !overflowed {
                return Ok(sum == 0);
            }
        }
    }
    let row = char_row_big(lambda, order)?;
    let mut sum = BigInt::zero();
    for (c, x) in row.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        sum += x * x * x * BigInt::from(classes[c].class_size.clone());
    }
    Ok(sum.is_zero())
}

/// Conjectured b★ for totals divisible by 3: the minimum is expected at a
/// self-triple (λ, λ, λ), so this walks partitions in ascending b-loading
/// order until the first vanishing g(λ,λ,λ), then resolves ties within
/// 1e-9 toward the lexicographically smallest λ.
pub fn conjectured_b_star(loadings: &SingleLoadings) -> Result<(f64, Triple)> {
    const TIE_TOL: f64 = 1e-9;
    let n = loadings.order.n();
    if n % 3 != 0 || n < 6 {
        return Err(Error::Domain(format!(
            "the b★ conjecture needs n = 3k with k >= 2; got n={n}"
        )));
    }
    let order = &loadings.order;
    let classes = class_data(order);
    let sizes_fixed: Option<Vec<i128>> = classes.iter().map(|c| c.class_size.to_i128()).collect();

    let mut walk: Vec<usize> = (0..order.len()).collect();
    walk.sort_by(|&a, &b| {
        loadings.values[a]
            .partial_cmp(&loadings.values[b])
            .expect("loadings are finite")
            .then(a.cmp(&b))
    });

    let mut best: Option<f64> = None;
    let mut cands: Vec<usize> = Vec::new();
    for &i in &walk {
        let bl = loadings.values[i];
        let value = (bl + bl) + bl;
        if let Some(v0) = best {
            if value > v0 + TIE_TOL {
                break;
            }
        }
        let lam = order.get(i).expect("walk index");
        if self_triple_vanishes(lam, order, &classes, sizes_fixed.as_deref())? {
            if best.is_none() {
                best = Some(value);
            }
            cands.push(i);
        }
    }
    let value = best.ok_or(Error::NoVanishingSelfTriple(n))?;
    let winner = cands.into_iter().max().expect("nonempty with best set");
    let lam = order.get(winner).expect("walk index").clone();
    let triple = Triple::new(lam.clone(), lam.clone(), lam)?;
    Ok((value, triple))
}

/// Thresholds carrying only conjectured sides: the r side when 4 | n, the
/// b side when 3 | n. Sides not covered stay at negative infinity so the
/// corresponding rule can never fire.
pub fn conjectured_thresholds(
    n: u32,
    similitude: Option<&SingleLoadings>,
    difference: Option<&SingleLoadings>,
) -> Result<Thresholds> {
    let mut th = Thresholds {
        n,
        r_star: f64::NEG_INFINITY,
        b_star: f64::NEG_INFINITY,
        argmin_r: None,
        argmin_b: None,
        provenance: Provenance::Conjectured,
    };
    if let Some(sl) = similitude {
        let (v, t) = conjectured_r_star(sl)?;
        th.r_star = v;
        th.argmin_r = Some(t);
    }
    if let Some(sl) = difference {
        let (v, t) = conjectured_b_star(sl)?;
        th.b_star = v;
        th.argmin_b = Some(t);
    }
    if th.argmin_r.is_none() && th.argmin_b.is_none() {
        return Err(Error::Domain(format!(
            "no conjecture applies to n={n}: need 4 | n for r★ or 3 | n for b★"
        )));
    }
    Ok(th)
}
