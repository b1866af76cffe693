//! On-disk cache for expensive per-total artifacts.
//!
//! Layout: `<dir>/<kind>/n=<n>.v1.<ext>` where kind is `chartable` (csv),
//! `loadings` (csv), or `thresholds` (json). Every file starts with a header
//! line carrying a SHA-256 checksum of the payload; writes go through a
//! temporary file in the same directory and are renamed into place, so
//! readers never observe a partial file. A failed checksum or unparsable
//! payload is reported as corruption, distinct from a plain miss.

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use kronload::characters::CharacterTable;
use kronload::kronecker::Triple;
use kronload::loadings::LoadingTable;
use kronload::partitions::{enumerate, Partition};
use kronload::thresholds::{Provenance, Thresholds};
use sha2::{Digest, Sha256};

use crate::fixtures::split_csv_line;

pub const ENV_OVERRIDE: &str = "KRONLOAD_CACHE";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Chartable,
    Loadings,
    Thresholds,
}

impl Kind {
    pub fn dir_name(self) -> &'static str {
        match self {
            Kind::Chartable => "chartable",
            Kind::Loadings => "loadings",
            Kind::Thresholds => "thresholds",
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Kind::Thresholds => "json",
            _ => "csv",
        }
    }
}

/// A cache file exists but cannot be trusted: bad header, checksum mismatch,
/// or unparsable payload.
#[derive(Debug)]
pub struct Corruption {
    pub path: PathBuf,
    pub reason: String,
}

impl fmt::Display for Corruption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cache corruption in {}: {}", self.path.display(), self.reason)
    }
}

impl std::error::Error for Corruption {}

/// Result of a cache read: a hit, a miss, or a corrupt file.
pub type LoadResult<T> = Result<Option<T>, Corruption>;

/// Picks the cache directory: explicit flag, then the `KRONLOAD_CACHE`
/// environment variable, then the platform cache directory, then a local
/// fallback.
pub fn resolve_dir(flag: Option<&Path>) -> PathBuf {
    if let Some(dir) = flag {
        return dir.to_path_buf();
    }
    if let Some(dir) = std::env::var_os(ENV_OVERRIDE) {
        if !dir.is_empty() {
            return PathBuf::from(dir);
        }
    }
    if let Some(xdg) = std::env::var_os("XDG_CACHE_HOME") {
        if !xdg.is_empty() {
            return PathBuf::from(xdg).join("kronload");
        }
    }
    if let Some(home) = std::env::var_os("HOME") {
        if !home.is_empty() {
            return PathBuf::from(home).join(".cache").join("kronload");
        }
    }
    PathBuf::from(".kronload-cache")
}

pub fn path_for(dir: &Path, kind: Kind, n: u32) -> PathBuf {
    dir.join(kind.dir_name())
        .join(format!("n={}.v1.{}", n, kind.extension()))
}

fn checksum(payload: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(payload.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{:02x}", b)).collect()
}

fn header_line(kind: Kind, n: u32, payload: &str) -> String {
    format!(
        "# kind={} n={} order=lex-desc version=1 sha256={}",
        kind.dir_name(),
        n,
        checksum(payload)
    )
}

fn write_atomic(dir: &Path, kind: Kind, n: u32, payload: &str) -> std::io::Result<PathBuf> {
    let path = path_for(dir, kind, n);
    let parent = path.parent().expect("cache path has parent");
    fs::create_dir_all(parent)?;
    let mut tmp = tempfile::NamedTempFile::new_in(parent)?;
    tmp.write_all(header_line(kind, n, payload).as_bytes())?;
    tmp.write_all(b"\n")?;
    tmp.write_all(payload.as_bytes())?;
    tmp.flush()?;
    tmp.persist(&path)?;
    Ok(path)
}

/// Reads and authenticates a cache file. `Ok(None)` means the file does not
/// exist; corruption covers everything between "absent" and "valid".
fn read_payload(dir: &Path, kind: Kind, n: u32) -> LoadResult<String> {
    let path = path_for(dir, kind, n);
    let text = match fs::read_to_string(&path) {
        Ok(text) => text,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => {
            return Err(Corruption {
                path,
                reason: format!("unreadable: {}", e),
            })
        }
    };
    let corrupt = |reason: String| Corruption {
        path: path.clone(),
        reason,
    };
    let (header, payload) = text
        .split_once('\n')
        .ok_or_else(|| corrupt("missing header line".into()))?;
    let expected_prefix = format!("# kind={} n={} order=lex-desc version=1 sha256=", kind.dir_name(), n);
    let digest = header
        .strip_prefix(&expected_prefix)
        .ok_or_else(|| corrupt(format!("bad header {:?}", header)))?;
    if digest != checksum(payload) {
        return Err(corrupt("checksum mismatch".into()));
    }
    Ok(Some(payload.to_string()))
}

pub fn store_chartable(dir: &Path, table: &CharacterTable) -> std::io::Result<PathBuf> {
    let p = table.order().len();
    let mut payload = String::new();
    for i in 0..p {
        let row: Vec<String> = table.row(i).iter().map(|v| v.to_string()).collect();
        payload.push_str(&row.join(","));
        payload.push('\n');
    }
    write_atomic(dir, Kind::Chartable, table.n(), &payload)
}

pub fn load_chartable(dir: &Path, n: u32) -> LoadResult<CharacterTable> {
    let Some(payload) = read_payload(dir, Kind::Chartable, n)? else {
        return Ok(None);
    };
    let path = path_for(dir, Kind::Chartable, n);
    let corrupt = |reason: String| Corruption {
        path: path.clone(),
        reason,
    };
    let mut values = Vec::new();
    for line in payload.lines() {
        for field in line.split(',') {
            let v: i64 = field
                .parse()
                .map_err(|e| corrupt(format!("bad character value {:?}: {}", field, e)))?;
            values.push(v);
        }
    }
    let table = CharacterTable::from_values(n, values)
        .map_err(|e| corrupt(format!("payload rejected: {}", e)))?;
    Ok(Some(table))
}

pub fn store_loadings(dir: &Path, table: &LoadingTable) -> std::io::Result<PathBuf> {
    let mut payload = String::new();
    payload.push_str(&format!(
        "meta,{},{},{},{}\n",
        table.iterations.0, table.iterations.1, table.residuals.0, table.residuals.1
    ));
    for (i, part) in table.order.iter().enumerate() {
        payload.push_str(&format!(
            "\"{}\",{},{},{},{}\n",
            part.format(true),
            table.r[i],
            table.b[i],
            table.v[i],
            table.w[i]
        ));
    }
    write_atomic(dir, Kind::Loadings, table.n, &payload)
}

pub fn load_loadings(dir: &Path, n: u32) -> LoadResult<LoadingTable> {
    let Some(payload) = read_payload(dir, Kind::Loadings, n)? else {
        return Ok(None);
    };
    let path = path_for(dir, Kind::Loadings, n);
    let corrupt = |reason: String| Corruption {
        path: path.clone(),
        reason,
    };
    let order = enumerate(n).map_err(|e| corrupt(format!("unusable total: {}", e)))?;
    let mut lines = payload.lines();
    let meta = lines.next().ok_or_else(|| corrupt("empty payload".into()))?;
    let meta_fields = split_csv_line(meta);
    if meta_fields.len() != 5 || meta_fields[0] != "meta" {
        return Err(corrupt(format!("bad meta line {:?}", meta)));
    }
    let parse_f = |s: &str| -> Result<f64, Corruption> {
        s.parse().map_err(|e| corrupt(format!("bad number {:?}: {}", s, e)))
    };
    let parse_u = |s: &str| -> Result<u32, Corruption> {
        s.parse().map_err(|e| corrupt(format!("bad count {:?}: {}", s, e)))
    };
    let iterations = (parse_u(&meta_fields[1])?, parse_u(&meta_fields[2])?);
    let residuals = (parse_f(&meta_fields[3])?, parse_f(&meta_fields[4])?);
    let mut r = Vec::with_capacity(order.len());
    let mut b = Vec::with_capacity(order.len());
    let mut v = Vec::with_capacity(order.len());
    let mut w = Vec::with_capacity(order.len());
    for (i, line) in lines.enumerate() {
        let fields = split_csv_line(line);
        if fields.len() != 5 {
            return Err(corrupt(format!("bad row {:?}", line)));
        }
        let expected = order
            .get(i)
            .ok_or_else(|| corrupt("more rows than partitions".into()))?;
        if fields[0] != expected.format(true) {
            return Err(corrupt(format!(
                "row {} is {:?}, expected {:?}",
                i,
                fields[0],
                expected.format(true)
            )));
        }
        r.push(parse_f(&fields[1])?);
        b.push(parse_f(&fields[2])?);
        v.push(parse_f(&fields[3])?);
        w.push(parse_f(&fields[4])?);
    }
    if r.len() != order.len() {
        return Err(corrupt(format!(
            "{} rows for {} partitions",
            r.len(),
            order.len()
        )));
    }
    Ok(Some(LoadingTable {
        n,
        order,
        r,
        b,
        v,
        w,
        iterations,
        residuals,
    }))
}

fn triple_json(t: &Option<Triple>) -> serde_json::Value {
    match t {
        Some(t) => serde_json::json!([
            t.lambda.format(true),
            t.mu.format(true),
            t.nu.format(true)
        ]),
        None => serde_json::Value::Null,
    }
}

pub fn store_thresholds(dir: &Path, th: &Thresholds) -> std::io::Result<PathBuf> {
    // A side the source never minimized is negative infinity in memory and
    // an explicit null on disk.
    let star = |x: f64| {
        if x.is_finite() {
            serde_json::json!(x)
        } else {
            serde_json::Value::Null
        }
    };
    let value = serde_json::json!({
        "n": th.n,
        "r_star": star(th.r_star),
        "b_star": star(th.b_star),
        "argmin_r": triple_json(&th.argmin_r),
        "argmin_b": triple_json(&th.argmin_b),
        "provenance": th.provenance.to_string(),
    });
    let mut payload = serde_json::to_string_pretty(&value).expect("thresholds serialize");
    payload.push('\n');
    write_atomic(dir, Kind::Thresholds, th.n, &payload)
}

pub fn load_thresholds(dir: &Path, n: u32) -> LoadResult<Thresholds> {
    let Some(payload) = read_payload(dir, Kind::Thresholds, n)? else {
        return Ok(None);
    };
    let path = path_for(dir, Kind::Thresholds, n);
    let corrupt = |reason: String| Corruption {
        path: path.clone(),
        reason,
    };
    let value: serde_json::Value = serde_json::from_str(&payload)
        .map_err(|e| corrupt(format!("bad json: {}", e)))?;
    let get_f = |key: &str| -> Result<f64, Corruption> {
        match value.get(key) {
            Some(serde_json::Value::Null) => Ok(f64::NEG_INFINITY),
            Some(v) => v
                .as_f64()
                .ok_or_else(|| corrupt(format!("non-numeric {:?}", key))),
            None => Err(corrupt(format!("missing number {:?}", key))),
        }
    };
    let stored_n = value
        .get("n")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| corrupt("missing n".into()))?;
    if stored_n != u64::from(n) {
        return Err(corrupt(format!("stored n={} under n={}", stored_n, n)));
    }
    let get_triple = |key: &str| -> Result<Option<Triple>, Corruption> {
        let v = value
            .get(key)
            .ok_or_else(|| corrupt(format!("missing {:?}", key)))?;
        if v.is_null() {
            return Ok(None);
        }
        let arr = v
            .as_array()
            .filter(|a| a.len() == 3)
            .ok_or_else(|| corrupt(format!("{:?} is not a 3-element array", key)))?;
        let mut parts = Vec::with_capacity(3);
        for item in arr {
            let s = item
                .as_str()
                .ok_or_else(|| corrupt(format!("{:?} entry is not a string", key)))?;
            let p = Partition::parse_with_total(s, n)
                .map_err(|e| corrupt(format!("bad partition {:?}: {}", s, e)))?;
            parts.push(p);
        }
        let nu = parts.pop().expect("three parts");
        let mu = parts.pop().expect("three parts");
        let lambda = parts.pop().expect("three parts");
        Triple::new(lambda, mu, nu)
            .map(Some)
            .map_err(|e| corrupt(format!("bad triple: {}", e)))
    };
    let provenance = match value.get("provenance").and_then(|v| v.as_str()) {
        Some("exhaustive") => Provenance::Exhaustive,
        Some("conjectured") => Provenance::Conjectured,
        other => return Err(corrupt(format!("bad provenance {:?}", other))),
    };
    Ok(Some(Thresholds {
        n,
        r_star: get_f("r_star")?,
        b_star: get_f("b_star")?,
        argmin_r: get_triple("argmin_r")?,
        argmin_b: get_triple("argmin_b")?,
        provenance,
    }))
}
