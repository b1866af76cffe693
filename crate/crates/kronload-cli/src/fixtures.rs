//! Reference data embedded in the binary: per-partition loadings, the
//! exhaustive and conjectured threshold tables, the worked power-iteration
//! example, and the large-scan counts used by `verify`.

use kronload::kronecker::Triple;
use kronload::partitions::Partition;
use kronload::thresholds::{Provenance, Thresholds};

/// Per-partition loadings for totals 6 through 12: `n,partition,r,b`.
pub const PARTITION_LOADINGS_CSV: &str = include_str!("../fixtures/partition_loadings.csv");

/// Exhaustive thresholds for totals 6 through 20:
/// `n,r_star,r_lambda,r_mu,r_nu,b_star,b_lambda,b_mu,b_nu`.
pub const EXHAUSTIVE_THRESHOLDS_CSV: &str = include_str!("../fixtures/exhaustive_thresholds.csv");

/// Conjectured r★ values for totals 24 through 48 step 4: `n,r_star`.
pub const CONJECTURED_R_CSV: &str = include_str!("../fixtures/conjectured_r_star.csv");

/// Conjectured b★ values for totals 21 through 36 step 3:
/// `n,b_star,lambda`.
pub const CONJECTURED_B_CSV: &str = include_str!("../fixtures/conjectured_b_star.csv");

/// Splits one CSV line into fields, honoring double-quoted fields (no
/// embedded quotes occur in the reference data).
pub fn split_csv_line(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut field = String::new();
    let mut in_quotes = false;
    for ch in line.chars() {
        match ch {
            '"' => in_quotes = !in_quotes,
            ',' if !in_quotes => fields.push(std::mem::take(&mut field)),
            _ => field.push(ch),
        }
    }
    fields.push(field);
    fields
}

/// One reference loading row; the values stay as printed so comparisons can
/// account for how many decimals the source displayed.
#[derive(Debug, Clone)]
pub struct LoadingRow {
    pub n: u32,
    pub partition: String,
    pub r: String,
    pub b: String,
}

pub fn partition_loading_rows() -> Vec<LoadingRow> {
    PARTITION_LOADINGS_CSV
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let f = split_csv_line(line);
            LoadingRow {
                n: f[0].parse().expect("embedded total"),
                partition: f[1].clone(),
                r: f[2].clone(),
                b: f[3].clone(),
            }
        })
        .collect()
}

/// Absolute tolerance for a value printed with `d` decimals: at least the
/// 4-decimal rounding tolerance, widened when fewer decimals are shown
/// because the source truncates rather than rounds trailing zeros away.
pub fn printed_value_tolerance(printed: &str) -> f64 {
    let decimals = printed
        .split_once('.')
        .map(|(_, frac)| frac.len())
        .unwrap_or(0);
    let truncation = 10f64.powi(-(decimals as i32));
    truncation.max(5e-4)
}

/// One exhaustive threshold row with its argmin triples in compact form.
#[derive(Debug, Clone)]
pub struct ThresholdRow {
    pub n: u32,
    pub r_star: f64,
    pub argmin_r: [String; 3],
    pub b_star: f64,
    pub argmin_b: [String; 3],
}

pub fn exhaustive_threshold_rows() -> Vec<ThresholdRow> {
    EXHAUSTIVE_THRESHOLDS_CSV
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let f = split_csv_line(line);
            ThresholdRow {
                n: f[0].parse().expect("embedded total"),
                r_star: f[1].parse().expect("embedded r_star"),
                argmin_r: [f[2].clone(), f[3].clone(), f[4].clone()],
                b_star: f[5].parse().expect("embedded b_star"),
                argmin_b: [f[6].clone(), f[7].clone(), f[8].clone()],
            }
        })
        .collect()
}

fn triple_of(n: u32, parts: &[String; 3]) -> Triple {
    let p = |s: &String| Partition::parse_with_total(s, n).expect("embedded partition");
    Triple::new(p(&parts[0]), p(&parts[1]), p(&parts[2])).expect("embedded triple")
}

impl ThresholdRow {
    pub fn argmin_r_triple(&self) -> Triple {
        triple_of(self.n, &self.argmin_r)
    }

    pub fn argmin_b_triple(&self) -> Triple {
        triple_of(self.n, &self.argmin_b)
    }

    pub fn thresholds(&self) -> Thresholds {
        Thresholds {
            n: self.n,
            r_star: self.r_star,
            b_star: self.b_star,
            argmin_r: Some(self.argmin_r_triple()),
            argmin_b: Some(self.argmin_b_triple()),
            provenance: Provenance::Exhaustive,
        }
    }
}

/// Embedded exhaustive thresholds for one total, when covered (6..=20).
pub fn embedded_thresholds(n: u32) -> Option<Thresholds> {
    exhaustive_threshold_rows()
        .into_iter()
        .find(|row| row.n == n)
        .map(|row| row.thresholds())
}

pub fn conjectured_r_rows() -> Vec<(u32, f64)> {
    CONJECTURED_R_CSV
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let f = split_csv_line(line);
            (f[0].parse().expect("total"), f[1].parse().expect("r_star"))
        })
        .collect()
}

pub fn conjectured_b_rows() -> Vec<(u32, f64, String)> {
    CONJECTURED_B_CSV
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let f = split_csv_line(line);
            (
                f[0].parse().expect("total"),
                f[1].parse().expect("b_star"),
                f[2].clone(),
            )
        })
        .collect()
}

/// Normalized power iterates on the similitude matrix for total 6, steps 1
/// through 6, printed to 4 decimals in the source.
pub const V_ITERATES_N6: [[f64; 11]; 6] = [
    [0.5203, 0.4336, 0.3468, 0.3468, 0.2601, 0.2601, 0.2601, 0.1734, 0.1734, 0.1734, 0.0867],
    [0.4514, 0.4022, 0.3530, 0.3377, 0.3038, 0.2885, 0.2670, 0.2240, 0.2178, 0.1934, 0.1188],
    [0.4441, 0.3985, 0.3530, 0.3366, 0.3074, 0.2910, 0.2678, 0.2291, 0.2222, 0.1957, 0.1225],
    [0.4434, 0.3982, 0.3529, 0.3365, 0.3077, 0.2913, 0.2678, 0.2296, 0.2226, 0.1960, 0.1229],
    [0.4433, 0.3981, 0.3529, 0.3365, 0.3077, 0.2913, 0.2678, 0.2297, 0.2226, 0.1960, 0.1229],
    [0.4433, 0.3981, 0.3529, 0.3365, 0.3077, 0.2913, 0.2678, 0.2297, 0.2227, 0.1960, 0.1229],
];

/// Difference-matrix iterates for total 6: steps 1, 2, and 12.
pub const W_ITERATE_1_N6: [f64; 11] = [
    0.0000, 0.0958, 0.1916, 0.1916, 0.2873, 0.2873, 0.2873, 0.3831, 0.3831, 0.3831, 0.4789,
];
pub const W_ITERATE_2_N6: [f64; 11] = [
    0.5177, 0.3705, 0.2992, 0.2565, 0.3087, 0.2042, 0.2042, 0.2517, 0.1947, 0.2280, 0.3277,
];
pub const W_ITERATE_12_N6: [f64; 11] = [
    0.4045, 0.2961, 0.2662, 0.2393, 0.3061, 0.2318, 0.2393, 0.3061, 0.2662, 0.2961, 0.4045,
];

/// Final loading vectors for total 6, printed to 2 decimals in the source.
pub const R_LOADINGS_N6: [f64; 11] = [
    100.00, 85.89, 71.79, 66.66, 57.68, 52.55, 45.23, 33.32, 31.12, 22.81, 0.00,
];
pub const B_LOADINGS_N6: [f64; 11] = [
    100.00, 37.25, 19.93, 4.36, 43.01, 0.00, 4.36, 43.01, 19.93, 37.25, 100.00,
];

/// Reference triple-loading means (r, b) for totals 14, 15, 16.
pub const TRIPLE_MEANS: [(u32, f64, f64); 3] = [
    (14, 148.86, 72.07),
    (15, 148.15, 66.71),
    (16, 147.65, 63.48),
];

/// Worked classification example at total 18: this triple's b-loading is
/// about 41.07, under the threshold of about 44.18, certifying a nonzero
/// coefficient.
pub const CLASSIFY_EXAMPLE_N18: (&str, &str, &str) = ("12,4,2", "8,4,2^2,1^2", "5,4,3^2,1^3");
pub const CLASSIFY_EXAMPLE_B_2DEC: f64 = 41.07;
pub const CLASSIFY_EXAMPLE_B_STAR_2DEC: f64 = 44.18;

/// Full-scan counts at total 20 over all ordered triples.
pub const SCAN_COUNTS_N20: ScanCounts = ScanCounts {
    total: 246_491_883,
    b_below: 78_382_890,
    r_below: 909_200,
    b_below_pct_1dec: 31.8,
    r_below_pct_2dec: 0.37,
};

#[derive(Debug, Clone, Copy)]
pub struct ScanCounts {
    pub total: u64,
    pub b_below: u64,
    pub r_below: u64,
    pub b_below_pct_1dec: f64,
    pub r_below_pct_2dec: f64,
}
