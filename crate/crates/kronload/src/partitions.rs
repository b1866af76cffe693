//! Integer partitions: descending lexicographic enumeration, exact counting,
//! conjugation, parsing, and formatting.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest total `enumerate` accepts; beyond this the partition list itself
/// is a memory hazard (p(64) is already 1.7 million entries).
pub const MAX_ENUMERATED_N: u32 = 64;

/// A partition of a positive integer: weakly decreasing positive parts.
///
/// Comparisons treat a partition of `n` as its zero-padded length-`n`
/// vector; trailing zeros are stripped on construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Validates and normalizes a part list: trailing zeros are dropped,
    /// parts must be weakly decreasing and positive, and at least one
    /// positive part must remain.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no positive parts".into()));
        }
        for w in parts.windows(2) {
            if w[0] < w[1] {
                return Err(Error::InvalidPartition(format!(
                    "parts must be weakly decreasing, got {} before {}",
                    w[0], w[1]
                )));
            }
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition("interior zero part".into()));
        }
        let total: u64 = parts.iter().map(|&p| p as u64).sum();
        if total > u32::MAX as u64 {
            return Err(Error::Domain(format!("partition total {total} too large")));
        }
        Ok(Partition { parts })
    }

    /// The weakly decreasing positive parts.
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// The partitioned total.
    pub fn n(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of positive parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    /// True only for the impossible empty partition; kept for lint hygiene.
    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The largest part.
    pub fn first_part(&self) -> u32 {
        self.parts[0]
    }

    /// Depth: the total minus the largest part.
    pub fn depth(&self) -> u32 {
        self.n() - self.first_part()
    }

    /// Conjugate (transpose) partition: column lengths of the row diagram.
    pub fn conjugate(&self) -> Partition {
        let cols = self.parts[0] as usize;
        let mut out = Vec::with_capacity(cols);
        for i in 1..=cols as u32 {
            out.push(self.parts.iter().filter(|&&p| p >= i).count() as u32);
        }
        Partition { parts: out }
    }

    /// Descending lexicographic comparison on zero-padded vectors; both
    /// partitions must have the same total.
    pub fn compare_lex(&self, other: &Partition) -> Result<Ordering> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(cmp_parts(self, other))
    }

    /// Parses a part list: comma-separated positive integers, each with an
    /// optional `^k` repeat count, optional surrounding parentheses and
    /// whitespace. Trailing zeros are accepted and dropped.
    pub fn parse(input: &str) -> Result<Partition> {
        let s = input.trim();
        let s = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(s)
            .trim();
        if s.is_empty() {
            return Err(Error::InvalidPartition(format!("empty input {input:?}")));
        }
        let mut parts = Vec::new();
        for token in s.split(',') {
            let token = token.trim();
            let (base, reps) = match token.split_once('^') {
                Some((b, k)) => (b.trim(), k.trim()),
                None => (token, "1"),
            };
            let value: u32 = base.parse().map_err(|_| {
                Error::InvalidPartition(format!("bad part {token:?} in {input:?}"))
            })?;
            let reps: u32 = reps.parse().map_err(|_| {
                Error::InvalidPartition(format!("bad exponent {token:?} in {input:?}"))
            })?;
            if reps == 0 {
                return Err(Error::InvalidPartition(format!(
                    "zero exponent {token:?} in {input:?}"
                )));
            }
            parts.extend(std::iter::repeat(value).take(reps as usize));
        }
        Partition::new(parts)
    }

    /// Parses like [`Partition::parse`] and additionally checks the total.
    pub fn parse_with_total(input: &str, n: u32) -> Result<Partition> {
        let p = Partition::parse(input)?;
        if p.n() != n {
            return Err(Error::SumMismatch {
                expected: n as u64,
                actual: p.n() as u64,
            });
        }
        Ok(p)
    }

    /// Renders the parts; `compact` collapses every run of two or more
    /// equal parts into `part^count`. `parse(format(..))` round-trips.
    pub fn format(&self, compact: bool) -> String {
        if !compact {
            return self
                .parts
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(",");
        }
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.parts.len() {
            let mut j = i;
            while j < self.parts.len() && self.parts[j] == self.parts[i] {
                j += 1;
            }
            let run = j - i;
            if run >= 2 {
                out.push(format!("{}^{}", self.parts[i], run));
            } else {
                out.push(self.parts[i].to_string());
            }
            i = j;
        }
        out.join(",")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(true))
    }
}

/// Descending lexicographic order for partitions of equal totals. Plain
/// slice order on positive parts coincides with zero-padded vector order.
pub(crate) fn cmp_parts(a: &Partition, b: &Partition) -> Ordering {
    a.parts.cmp(&b.parts)
}

/// Exact p(n) via the pentagonal-number recurrence; independent of the
/// enumerator, so the two cross-check each other.
pub fn count(n: u32) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("count requires n >= 1".into()));
    }
    let n = n as usize;
    let mut p = vec![0u64; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut acc: i128 = 0;
        let mut k: usize = 1;
        loop {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let sign: i128 = if k % 2 == 1 { 1 } else { -1 };
            acc += sign * p[m - g1] as i128;
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= m {
                acc += sign * p[m - g2] as i128;
            }
            k += 1;
        }
        if acc < 0 || acc > u64::MAX as i128 {
            return Err(Error::Overflow("partition count"));
        }
        p[m] = acc as u64;
    }
    Ok(p[n])
}

/// All partitions of `n` in descending lexicographic order, with index
/// lookups by binary search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSet {
    n: u32,
    items: Vec<Partition>,
}

impl PartitionSet {
    /// The common total of every member.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of partitions, p(n).
    pub fn len(&self) -> usize {
        self.items.len()
    }

    /// Always false: every positive total has at least one partition.
    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Member at `index` in descending lexicographic order.
    pub fn get(&self, index: usize) -> Option<&Partition> {
        self.items.get(index)
    }

    /// All members in order.
    pub fn items(&self) -> &[Partition] {
        &self.items
    }

    /// Iterates members in order.
    pub fn iter(&self) -> std::slice::Iter<'_, Partition> {
        self.items.iter()
    }

    /// Position of `p` in the order, or `None` if it is not a partition of
    /// this set's total.
    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        if p.n() != self.n {
            return None;
        }
        // The list is descending, so search with the reversed comparator.
        self.items
            .binary_search_by(|item| cmp_parts(p, item))
            .ok()
    }
}

impl<'a> IntoIterator for &'a PartitionSet {
    type Item = &'a Partition;
    type IntoIter = std::slice::Iter<'a, Partition>;
    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

/// Enumerates all partitions of `n` in descending lexicographic order.
pub fn enumerate(n: u32) -> Result<PartitionSet> {
    if n == 0 {
        return Err(Error::Domain("enumerate requires n >= 1".into()));
    }
    if n > MAX_ENUMERATED_N {
        return Err(Error::ResourceBudget(format!(
            "enumerate(n={n}) exceeds the n <= {MAX_ENUMERATED_N} list-size guard"
        )));
    }
    let mut items = Vec::with_capacity(count(n)? as usize);
    let mut cur: Vec<u32> = vec![n];
    loop {
        items.push(Partition { parts: cur.clone() });
        // Successor: decrement the last part greater than 1 and repack the
        // freed amount greedily, which steps down in lexicographic order.
        let Some(i) = cur.iter().rposition(|&p| p > 1) else {
            break;
        };
        let x = cur[i] - 1;
        let mut rem = cur[i] + (cur.len() - i - 1) as u32;
        cur.truncate(i);
        while rem > x {
            cur.push(x);
            rem -= x;
        }
        if rem > 0 {
            cur.push(rem);
        }
    }
    debug_assert_eq!(items.len() as u64, count(n)?);
    Ok(PartitionSet { n, items })
}
