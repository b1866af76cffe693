//! Deterministic export formatting. All floating-point values are rounded
//! to 4 decimals before serialization so repeated runs produce
//! byte-identical files regardless of thread count.

use kronload::kronecker::Triple;
use kronload::loadings::LoadingTable;
use kronload::stats::{fit_gamma, fit_normal, FitParams, StreamingMoments};
use kronload::thresholds::{ClassedHistogram, ScanResult};
use serde_json::{json, Value};

/// Rounds to 4 decimals and converts to a JSON number. Rounding first keeps
/// the serialized text short and stable.
pub fn json_f64_4dec(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded = (x * 1e4).round() / 1e4;
    serde_json::Number::from_f64(rounded)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

fn triple_value(t: &Option<Triple>) -> Value {
    match t {
        Some(t) => json!([
            t.lambda.format(true),
            t.mu.format(true),
            t.nu.format(true)
        ]),
        None => Value::Null,
    }
}

fn fit_value(fit: &Result<FitParams, kronload::Error>) -> Value {
    match fit {
        Ok(f) => json!({
            "family": match f.family {
                kronload::stats::Family::Normal => "normal",
                kronload::stats::Family::Gamma => "gamma",
            },
            "params": [json_f64_4dec(f.params.0), json_f64_4dec(f.params.1)],
            "sample_mean": json_f64_4dec(f.sample_mean),
            "sample_variance": json_f64_4dec(f.sample_variance),
            "degenerate": f.degenerate,
        }),
        Err(_) => Value::Null,
    }
}

/// Distribution fits derived from a scan: a normal fit to all triple
/// r-loadings and a gamma fit to all triple b-loadings, both computed from
/// the class histograms (bin midpoints weighted by total bin count).
pub fn scan_fits(result: &ScanResult) -> (Result<FitParams, kronload::Error>, Result<FitParams, kronload::Error>) {
    let total = |h: &ClassedHistogram| -> Vec<u64> {
        h.nonzero
            .iter()
            .zip(&h.zero)
            .map(|(a, b)| a + b)
            .collect()
    };
    let r_counts = total(&result.r_hist);
    let b_counts = total(&result.b_hist);
    let weighted = |hist: &ClassedHistogram, counts: &[u64]| {
        let mut acc = StreamingMoments::new();
        for (i, &c) in counts.iter().enumerate() {
            if c > 0 {
                let mid = (hist.edges[i] + hist.edges[i + 1]) / 2.0;
                acc.push_weighted(mid, c as f64);
            }
        }
        acc.finish()
    };
    let r_fit = weighted(&result.r_hist, &r_counts)
        .and_then(|m| fit_normal(m.mean, m.variance));
    let b_fit = weighted(&result.b_hist, &b_counts)
        .and_then(|m| fit_gamma(m.mean, m.variance));
    (r_fit, b_fit)
}

/// Full scan summary as pretty-printed JSON (trailing newline included).
pub fn scan_json(result: &ScanResult) -> String {
    let th = &result.thresholds;
    let (r_fit, b_fit) = scan_fits(result);
    let value = json!({
        "n": result.n,
        "r_star": json_f64_4dec(th.r_star),
        "b_star": json_f64_4dec(th.b_star),
        "argmin_r": triple_value(&th.argmin_r),
        "argmin_b": triple_value(&th.argmin_b),
        "provenance": th.provenance.to_string(),
        "total_triples": result.total_triples,
        "nonzero_count": result.nonzero_count,
        "zero_count": result.zero_count,
        "depth_violating_count": result.depth_violating_count,
        "r_below_count": result.r_below_count,
        "b_below_count": result.b_below_count,
        "min_r_depth_violating": json_f64_4dec(result.min_r_depth_violating),
        "fits": { "r": fit_value(&r_fit), "b": fit_value(&b_fit) },
    });
    let mut text = serde_json::to_string_pretty(&value).expect("scan serialize");
    text.push('\n');
    text
}

/// Classed histogram as CSV:
/// `bin_left,bin_right,count_nonzero,count_zero,count_depth_violating`.
/// The zero column includes the depth-violating subcount.
pub fn histogram_csv(hist: &ClassedHistogram) -> String {
    let mut out = String::from("bin_left,bin_right,count_nonzero,count_zero,count_depth_violating\n");
    for i in 0..hist.bins() {
        out.push_str(&format!(
            "{:.4},{:.4},{},{},{}\n",
            hist.edges[i],
            hist.edges[i + 1],
            hist.nonzero[i],
            hist.zero[i],
            hist.depth_violating[i]
        ));
    }
    out
}

/// Per-partition loadings as CSV: `n,partition,r,b` with 4-decimal values.
pub fn loadings_csv(table: &LoadingTable) -> String {
    let mut out = String::from("n,partition,r,b\n");
    for (i, part) in table.order.iter().enumerate() {
        out.push_str(&format!(
            "{},\"{}\",{:.4},{:.4}\n",
            table.n,
            part.format(true),
            table.r[i],
            table.b[i]
        ));
    }
    out
}

/// Quotes a CSV field if it contains a comma.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') {
        format!("\"{}\"", s)
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use kronload::characters::build_table;
    use kronload::loadings::{compute_loadings, Mode};
    use kronload::thresholds::{scan, ScanOptions};

    fn scan6() -> ScanResult {
        let table = build_table(6, None).unwrap();
        let loadings = compute_loadings(6, Mode::default()).unwrap();
        scan(6, &table, &loadings, &ScanOptions::default()).unwrap()
    }

    #[test]
    fn scan_json_is_deterministic_and_4dec() {
        let result = scan6();
        let a = scan_json(&result);
        let b = scan_json(&result);
        assert_eq!(a, b);
        assert!(a.contains("\"r_star\": 90.9986"));
        assert!(a.contains("\"b_star\": 59.7812"));
        assert!(a.contains("\"provenance\": \"exhaustive\""));
        let parsed: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(parsed["total_triples"].as_u64().unwrap(), 11 * 11 * 11);
        assert_eq!(
            parsed["argmin_r"],
            json!(["3^2", "2^3", "1^6"])
        );
        assert_eq!(parsed["fits"]["r"]["family"], json!("normal"));
        assert_eq!(parsed["fits"]["b"]["family"], json!("gamma"));
    }

    #[test]
    fn histogram_csv_shape_and_conservation() {
        let result = scan6();
        let csv = histogram_csv(&result.b_hist);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), result.b_hist.bins() + 1);
        assert!(lines[0].starts_with("bin_left,bin_right,"));
        let mut total = 0u64;
        for line in &lines[1..] {
            let f: Vec<&str> = line.split(',').collect();
            total += f[2].parse::<u64>().unwrap() + f[3].parse::<u64>().unwrap();
        }
        assert_eq!(total, result.total_triples);
    }

    #[test]
    fn loadings_csv_matches_reference_rows() {
        let table = compute_loadings(6, Mode::default()).unwrap();
        let csv = loadings_csv(&table);
        assert!(csv.starts_with("n,partition,r,b\n"));
        assert!(csv.contains("6,\"6\",100.0000,100.0000\n"));
        assert!(csv.contains("6,\"5,1\",85.89"));
        assert!(csv.contains("6,\"1^6\",0.0000,100.0000\n"));
    }

    #[test]
    fn json_rounding_handles_edge_values() {
        assert_eq!(json_f64_4dec(1.00005), json!(1.0001));
        assert_eq!(json_f64_4dec(f64::INFINITY), Value::Null);
        assert_eq!(json_f64_4dec(300.0), json!(300.0));
    }
}
