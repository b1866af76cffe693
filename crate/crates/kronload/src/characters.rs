//! Exact irreducible character tables of symmetric groups via iterated
//! border-strip removal, plus centralizer orders, class sizes, and hook
//! length dimensions.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::partitions::{enumerate, Partition, PartitionSet};

/// Default memory ceiling for whole-table builds (values matrix only).
pub const DEFAULT_TABLE_BUDGET_BYTES: u64 = 2 << 30;

/// One conjugacy class: its cycle type, centralizer order, and size.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassData {
    pub rho: Partition,
    pub centralizer: BigUint,
    pub class_size: BigUint,
}

/// n! as an exact integer.
pub fn factorial(n: u32) -> BigUint {
    let mut f = BigUint::one();
    for i in 2..=n {
        f *= i;
    }
    f
}

/// Centralizer order of the class with cycle type `rho`: the product over
/// distinct cycle lengths `i` with multiplicity `m` of `i^m * m!`.
pub fn centralizer_order(rho: &Partition) -> BigUint {
    let mut z = BigUint::one();
    let parts = rho.parts();
    let mut i = 0;
    while i < parts.len() {
        let mut j = i;
        while j < parts.len() && parts[j] == parts[i] {
            j += 1;
        }
        let m = (j - i) as u32;
        z *= BigUint::from(parts[i]).pow(m);
        z *= factorial(m);
        i = j;
    }
    z
}

/// Class data for every cycle type in `order`, in the same order. Class
/// sizes are the exact quotients n! / centralizer.
pub fn class_data(order: &PartitionSet) -> Vec<ClassData> {
    let nfact = factorial(order.n());
    order
        .iter()
        .map(|rho| {
            let centralizer = centralizer_order(rho);
            debug_assert!((&nfact % &centralizer).is_zero());
            let class_size = &nfact / &centralizer;
            ClassData {
                rho: rho.clone(),
                centralizer,
                class_size,
            }
        })
        .collect()
}

/// Integer scalar for border-strip accumulation: a fixed-width fast path
/// that reports overflow, and an arbitrary-precision fallback.
trait MnInt: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    /// `acc +/- term`, or `None` if the value would exceed the width.
    fn accum(acc: Self, term: &Self, negate: bool) -> Option<Self>;
}

impl MnInt for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn accum(acc: Self, term: &Self, negate: bool) -> Option<Self> {
        if negate {
            acc.checked_sub(*term)
        } else {
            acc.checked_add(*term)
        }
    }
}

impl MnInt for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn accum(acc: Self, term: &Self, negate: bool) -> Option<Self> {
        Some(if negate { acc - term } else { acc + term })
    }
}

/// Shifted first-column hooks of `lambda`, padded to `n` rows, as a bitmask:
/// bit `lambda_i + (n - 1 - i)` is set for each row `i < n`. Requires
/// `n <= 64` so every bead index fits in 128 bits.
fn bead_mask(lambda: &Partition, n: u32) -> u128 {
    let rows = n as usize;
    let parts = lambda.parts();
    let mut mask = 0u128;
    for i in 0..rows {
        let part = parts.get(i).copied().unwrap_or(0);
        mask |= 1u128 << (part + (n - 1 - i as u32));
    }
    mask
}

/// Suffix interning for one row computation: every tail of every cycle type
/// gets a small id, so the memo is shared across all columns of the row.
struct SuffixIds {
    by_column: Vec<Vec<u32>>,
}

fn intern_suffixes(order: &PartitionSet) -> SuffixIds {
    let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut by_column = Vec::with_capacity(order.len());
    for rho in order {
        let parts = rho.parts();
        let mut col = Vec::with_capacity(parts.len() + 1);
        for j in 0..=parts.len() {
            let next = ids.len() as u32;
            col.push(*ids.entry(parts[j..].to_vec()).or_insert(next));
        }
        by_column.push(col);
    }
    SuffixIds { by_column }
}

/// Recursive strip removal on the bead mask. Cycles are consumed in the
/// stored (descending) order; `ids[j]` identifies the remaining suffix for
/// memoization. Returns `None` on fixed-width overflow.
fn mn_rec<T: MnInt>(
    mask: u128,
    parts: &[u32],
    j: usize,
    ids: &[u32],
    memo: &mut HashMap<(u128, u32), T>,
) -> Option<T> {
    if j == parts.len() {
        return Some(T::one());
    }
    let key = (mask, ids[j]);
    if let Some(v) = memo.get(&key) {
        return Some(v.clone());
    }
    let k = parts[j];
    let mut acc = T::zero();
    let mut rem = mask;
    while rem != 0 {
        let b = 127 - rem.leading_zeros();
        if b < k {
            break;
        }
        rem ^= 1u128 << b;
        let lo = b - k;
        if mask & (1u128 << lo) != 0 {
            continue;
        }
        // Beads strictly between the source and target slots count the
        // strip height; each one flips the sign.
        let between = mask & ((1u128 << b) - (1u128 << (lo + 1)));
        let negate = between.count_ones() % 2 == 1;
        let child_mask = (mask ^ (1u128 << b)) | (1u128 << lo);
        let child = mn_rec(child_mask, parts, j + 1, ids, memo)?;
        acc = T::accum(acc, &child, negate)?;
    }
    memo.insert(key, acc.clone());
    Some(acc)
}

fn char_row_generic<T: MnInt>(lambda: &Partition, order: &PartitionSet, ids: &SuffixIds) -> Option<Vec<T>> {
    let n = order.n();
    let mask = bead_mask(lambda, n);
    let mut memo: HashMap<(u128, u32), T> = HashMap::new();
    let mut row = Vec::with_capacity(order.len());
    for (c, rho) in order.iter().enumerate() {
        row.push(mn_rec(mask, rho.parts(), 0, &ids.by_column[c], &mut memo)?);
    }
    Some(row)
}

fn check_same_n(lambda: &Partition, n: u32) -> Result<()> {
    if lambda.n() != n {
        return Err(Error::SizeMismatch {
            left: lambda.n(),
            right: n,
        });
    }
    Ok(())
}

/// Exact character value of the irreducible indexed by `lambda` on the class
/// with cycle type `rho`, by border-strip removal (largest cycle first).
pub fn mn_character(lambda: &Partition, rho: &Partition) -> Result<i64> {
    check_same_n(lambda, rho.n())?;
    let n = lambda.n();
    let mask = bead_mask(lambda, n);
    let parts = rho.parts();
    let ids: Vec<u32> = (0..=parts.len() as u32).collect();
    let mut memo: HashMap<(u128, u32), i64> = HashMap::new();
    mn_rec(mask, parts, 0, &ids, &mut memo).ok_or(Error::Overflow("character value"))
}

/// One full row of the character table for `lambda` over the classes of
/// `order`, in fixed-width integers. Overflow is reported so callers can
/// escalate to [`char_row_big`].
pub fn char_row(lambda: &Partition, order: &PartitionSet) -> Result<Vec<i64>> {
    check_same_n(lambda, order.n())?;
    let ids = intern_suffixes(order);
    char_row_generic(lambda, order, &ids).ok_or(Error::Overflow("character row"))
}

/// Arbitrary-precision variant of [`char_row`]; never overflows.
pub fn char_row_big(lambda: &Partition, order: &PartitionSet) -> Result<Vec<BigInt>> {
    check_same_n(lambda, order.n())?;
    let ids = intern_suffixes(order);
    Ok(char_row_generic(lambda, order, &ids).expect("arbitrary precision cannot overflow"))
}

/// Dimension of the irreducible indexed by `lambda` via the hook length
/// formula, as an exact integer.
pub fn dimension(lambda: &Partition) -> Result<u128> {
    let n = lambda.n();
    let conj = lambda.conjugate();
    let mut hooks = BigUint::one();
    for (i, &row) in lambda.parts().iter().enumerate() {
        for j in 0..row as usize {
            let hook = (row - j as u32) + (conj.parts()[j] - i as u32) - 1;
            hooks *= BigUint::from(hook);
        }
    }
    let f = factorial(n) / hooks;
    f.to_u128().ok_or(Error::Overflow("dimension"))
}

/// Complete character table of the symmetric group on `n` letters: rows are
/// irreducibles and columns are classes, both in descending lexicographic
/// order of the indexing partitions.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterTable {
    n: u32,
    order: PartitionSet,
    classes: Vec<ClassData>,
    values: Vec<i64>,
}

impl CharacterTable {
    /// The underlying total.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// The partition order indexing both rows and columns.
    pub fn order(&self) -> &PartitionSet {
        &self.order
    }

    /// Class data aligned with the column order.
    pub fn classes(&self) -> &[ClassData] {
        &self.classes
    }

    /// The full row-major value matrix.
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Row of the irreducible at `index` in the partition order.
    pub fn row(&self, index: usize) -> &[i64] {
        let p = self.order.len();
        &self.values[index * p..(index + 1) * p]
    }

    /// Value at (irreducible row, class column).
    pub fn value(&self, row: usize, class: usize) -> i64 {
        self.values[row * self.order.len() + class]
    }

    /// Column index of the identity class (cycle type all ones), which is
    /// lexicographically smallest and therefore last.
    pub fn identity_class_index(&self) -> usize {
        self.order.len() - 1
    }

    /// Dimensions of all irreducibles: the identity-class column.
    pub fn dimensions(&self) -> Vec<i64> {
        let c = self.identity_class_index();
        (0..self.order.len()).map(|i| self.value(i, c)).collect()
    }

    /// Class sizes in fixed width, for exact accumulation kernels; reports
    /// overflow for totals whose factorial exceeds 128 bits.
    pub fn class_sizes_i128(&self) -> Result<Vec<i128>> {
        self.classes
            .iter()
            .map(|c| {
                c.class_size
                    .to_i128()
                    .ok_or(Error::Overflow("class size"))
            })
            .collect()
    }

    /// Rebuilds a table from a stored value matrix, revalidating dimensions.
    pub fn from_values(n: u32, values: Vec<i64>) -> Result<CharacterTable> {
        let order = enumerate(n)?;
        if values.len() != order.len() * order.len() {
            return Err(Error::Domain(format!(
                "value matrix has {} entries, expected {}",
                values.len(),
                order.len() * order.len()
            )));
        }
        let classes = class_data(&order);
        Ok(CharacterTable {
            n,
            order,
            classes,
            values,
        })
    }
}

/// Builds the full character table of the symmetric group on `n` letters.
/// Rows are computed independently in parallel. Refuses totals whose value
/// matrix would exceed the memory budget (default 2 GiB).
pub fn build_table(n: u32, budget_bytes: Option<u64>) -> Result<CharacterTable> {
    let order = enumerate(n)?;
    let p = order.len() as u64;
    let bytes = p * p * std::mem::size_of::<i64>() as u64;
    let budget = budget_bytes.unwrap_or(DEFAULT_TABLE_BUDGET_BYTES);
    if bytes > budget {
        return Err(Error::ResourceBudget(format!(
            "character table for n={n} needs {bytes} bytes, budget is {budget}"
        )));
    }
    let ids = intern_suffixes(&order);
    let rows: Vec<Vec<i64>> = order
        .items()
        .par_iter()
        .map(|lambda| {
            char_row_generic::<i64>(lambda, &order, &ids)
                .ok_or(Error::Overflow("character row"))
        })
        .collect::<Result<_>>()?;
    let mut values = Vec::with_capacity((p * p) as usize);
    for row in rows {
        values.extend_from_slice(&row);
    }
    let classes = class_data(&order);
    Ok(CharacterTable {
        n,
        order,
        classes,
        values,
    })
}
