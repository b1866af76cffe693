//! Exact Kronecker coefficients: class-weighted triple products of character
//! rows divided by the group order, with overflow-checked fast paths and
//! arbitrary-precision fallback.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::characters::{factorial, CharacterTable};
use crate::error::{Error, Result};
use crate::partitions::Partition;

/// An ordered triple of partitions of the same total.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triple {
    pub lambda: Partition,
    pub mu: Partition,
    pub nu: Partition,
}

impl Triple {
    /// Validates that all three components partition the same total.
    pub fn new(lambda: Partition, mu: Partition, nu: Partition) -> Result<Triple> {
        if lambda.n() != mu.n() {
            return Err(Error::SizeMismatch {
                left: lambda.n(),
                right: mu.n(),
            });
        }
        if lambda.n() != nu.n() {
            return Err(Error::SizeMismatch {
                left: lambda.n(),
                right: nu.n(),
            });
        }
        Ok(Triple { lambda, mu, nu })
    }

    /// The common total.
    pub fn n(&self) -> u32 {
        self.lambda.n()
    }
}

impl std::fmt::Display for Triple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(({}),({}),({}))", self.lambda, self.mu, self.nu)
    }
}

fn row_indices(t: &Triple, table: &CharacterTable) -> Result<(usize, usize, usize)> {
    if t.n() != table.n() {
        return Err(Error::SizeMismatch {
            left: t.n(),
            right: table.n(),
        });
    }
    let find = |p: &Partition| {
        table
            .order()
            .index_of(p)
            .ok_or_else(|| Error::Domain(format!("partition {p} not in table order")))
    };
    Ok((find(&t.lambda)?, find(&t.mu)?, find(&t.nu)?))
}

/// Divides the accumulated class sum by n!, checking exact divisibility and
/// nonnegativity; failures indicate a corrupted character table.
fn finish_big(sum: BigInt, n: u32, context: &Triple) -> Result<u64> {
    let nfact = BigInt::from(factorial(n));
    let r = &sum % &nfact;
    let q = &sum / &nfact;
    if !r.is_zero() || q.is_negative() {
        return Err(Error::DivisibilityViolation {
            context: context.to_string(),
        });
    }
    q.to_u64().ok_or(Error::Overflow("coefficient value"))
}

fn kron_big(rows: (usize, usize, usize), table: &CharacterTable, context: &Triple) -> Result<u64> {
    let (a, b, c) = rows;
    let mut sum = BigInt::zero();
    for (cls, data) in table.classes().iter().enumerate() {
        let term = BigInt::from(data.class_size.clone())
            * BigInt::from(table.value(a, cls))
            * BigInt::from(table.value(b, cls))
            * BigInt::from(table.value(c, cls));
        sum += term;
    }
    finish_big(sum, table.n(), context)
}

/// Exact Kronecker coefficient of the triple: the class-size-weighted inner
/// product of the three character rows divided by the group order. Uses
/// 128-bit accumulation when it provably fits and escalates to arbitrary
/// precision otherwise.
pub fn kron(t: &Triple, table: &CharacterTable) -> Result<u64> {
    let rows = row_indices(t, table)?;
    let fast = || -> Option<u64> {
        let sizes = table.class_sizes_i128().ok()?;
        let (a, b, c) = rows;
        let mut sum: i128 = 0;
        for (cls, &w) in sizes.iter().enumerate() {
            let prod = table.value(a, cls) as i128 * table.value(b, cls) as i128;
            let term = w.checked_mul(prod)?.checked_mul(table.value(c, cls) as i128)?;
            sum = sum.checked_add(term)?;
        }
        let nfact = factorial(table.n()).to_i128()?;
        if sum % nfact != 0 || sum / nfact < 0 {
            return None; // let the exact path produce the diagnostic
        }
        u64::try_from(sum / nfact).ok()
    };
    match fast() {
        Some(g) => Ok(g),
        None => kron_big(rows, table, t),
    }
}

/// Full decomposition row: coefficients of every third component against the
/// fixed pair, indexed like the table order.
pub fn kron_row(lambda: &Partition, mu: &Partition, table: &CharacterTable) -> Result<Vec<u64>> {
    let pair = Triple::new(lambda.clone(), mu.clone(), lambda.clone())?;
    let (a, b, _) = row_indices(&pair, table)?;
    let p = table.order().len();
    let fast = || -> Option<Vec<u64>> {
        let sizes = table.class_sizes_i128().ok()?;
        let nfact = factorial(table.n()).to_i128()?;
        let mut weighted = Vec::with_capacity(p);
        for (cls, &w) in sizes.iter().enumerate() {
            let prod = table.value(a, cls) as i128 * table.value(b, cls) as i128;
            weighted.push(w.checked_mul(prod)?);
        }
        let mut out = Vec::with_capacity(p);
        for c in 0..p {
            let mut sum: i128 = 0;
            for (cls, &wv) in weighted.iter().enumerate() {
                sum = sum.checked_add(wv.checked_mul(table.value(c, cls) as i128)?)?;
            }
            if sum % nfact != 0 || sum / nfact < 0 {
                return None;
            }
            out.push(u64::try_from(sum / nfact).ok()?);
        }
        Some(out)
    };
    if let Some(row) = fast() {
        return Ok(row);
    }
    (0..p)
        .map(|c| {
            let t = Triple::new(
                lambda.clone(),
                mu.clone(),
                table.order().get(c).unwrap().clone(),
            )?;
            kron_big((a, b, c), table, &t)
        })
        .collect()
}

/// Two-sided depth bound: with depths d of the components, requires
/// `|d_lambda - d_mu| <= d_nu <= d_lambda + d_mu`. Coefficients of triples
/// violating it vanish.
pub fn depth_admissible(t: &Triple) -> bool {
    let dl = t.lambda.depth() as i64;
    let dm = t.mu.depth() as i64;
    let dn = t.nu.depth() as i64;
    (dl - dm).abs() <= dn && dn <= dl + dm
}

/// Evaluates the coefficient on all six orderings of the triple and reports
/// whether they agree.
pub fn check_symmetry(t: &Triple, table: &CharacterTable) -> Result<bool> {
    let (l, m, n) = (&t.lambda, &t.mu, &t.nu);
    let perms = [
        (l, m, n),
        (l, n, m),
        (m, l, n),
        (m, n, l),
        (n, l, m),
        (n, m, l),
    ];
    let mut first = None;
    for (a, b, c) in perms {
        let g = kron(&Triple::new(a.clone(), b.clone(), c.clone())?, table)?;
        match first {
            None => first = Some(g),
            Some(f) if f != g => return Ok(false),
            _ => {}
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{build_table, dimension};

    fn part(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn triple(l: &[u32], m: &[u32], n: &[u32]) -> Triple {
        Triple::new(part(l), part(m), part(n)).unwrap()
    }

    #[test]
    fn triple_requires_equal_totals() {
        assert!(Triple::new(part(&[3]), part(&[2, 1]), part(&[2, 2])).is_err());
        assert!(Triple::new(part(&[3]), part(&[2, 2]), part(&[2, 1])).is_err());
    }

    #[test]
    fn trivial_component_gives_indicator() {
        for n in 2..=7 {
            let t = build_table(n, None).unwrap();
            let trivial = part(&[n]);
            for mu in t.order().clone().iter() {
                for nu in t.order().clone().iter() {
                    let g = kron(
                        &Triple::new(trivial.clone(), mu.clone(), nu.clone()).unwrap(),
                        &t,
                    )
                    .unwrap();
                    assert_eq!(g, u64::from(mu == nu), "n={n} {mu} {nu}");
                }
            }
        }
    }

    #[test]
    fn sign_component_pairs_with_conjugate() {
        for n in 2..=7 {
            let t = build_table(n, None).unwrap();
            let sign = part(&[n]).conjugate();
            for mu in t.order().clone().iter() {
                for nu in t.order().clone().iter() {
                    let g = kron(
                        &Triple::new(sign.clone(), mu.clone(), nu.clone()).unwrap(),
                        &t,
                    )
                    .unwrap();
                    assert_eq!(g, u64::from(&mu.conjugate() == nu), "n={n} {mu} {nu}");
                }
            }
        }
    }

    #[test]
    fn standard_cube_n3() {
        let t = build_table(3, None).unwrap();
        assert_eq!(kron(&triple(&[2, 1], &[2, 1], &[2, 1]), &t).unwrap(), 1);
    }

    #[test]
    fn kron_row_n3_and_dimension_identity() {
        let t = build_table(3, None).unwrap();
        let row = kron_row(&part(&[2, 1]), &part(&[2, 1]), &t).unwrap();
        assert_eq!(row, vec![1, 1, 1]);
        for n in 2..=8 {
            let t = build_table(n, None).unwrap();
            for a in t.order().clone().iter() {
                for b in t.order().clone().iter() {
                    let row = kron_row(a, b, &t).unwrap();
                    let total: u128 = row
                        .iter()
                        .enumerate()
                        .map(|(c, &g)| g as u128 * dimension(t.order().get(c).unwrap()).unwrap())
                        .sum();
                    assert_eq!(
                        total,
                        dimension(a).unwrap() * dimension(b).unwrap(),
                        "n={n} {a} {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn scan_argmin_triple_is_nonzero_n6() {
        let t = build_table(6, None).unwrap();
        let g = kron(&triple(&[3, 3], &[2, 2, 2], &[1, 1, 1, 1, 1, 1]), &t).unwrap();
        assert!(g >= 1);
    }

    #[test]
    fn full_symmetry_small_n() {
        for n in 2..=6 {
            let t = build_table(n, None).unwrap();
            let order = t.order().clone();
            for a in order.iter() {
                for b in order.iter() {
                    for c in order.iter() {
                        let tr = Triple::new(a.clone(), b.clone(), c.clone()).unwrap();
                        assert!(check_symmetry(&tr, &t).unwrap(), "n={n} {tr}");
                    }
                }
            }
        }
    }

    #[test]
    fn conjugating_two_components_preserves_value() {
        for n in 2..=7 {
            let t = build_table(n, None).unwrap();
            let order = t.order().clone();
            for a in order.iter() {
                for b in order.iter() {
                    for c in order.iter() {
                        let plain = kron(
                            &Triple::new(a.clone(), b.clone(), c.clone()).unwrap(),
                            &t,
                        )
                        .unwrap();
                        let twisted = kron(
                            &Triple::new(a.conjugate(), b.conjugate(), c.clone()).unwrap(),
                            &t,
                        )
                        .unwrap();
                        assert_eq!(plain, twisted, "n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn depth_violation_forces_zero() {
        for n in 2..=9 {
            let t = build_table(n, None).unwrap();
            let order = t.order().clone();
            let p = order.len();
            for i in 0..p {
                for j in i..p {
                    for k in j..p {
                        let tr = Triple::new(
                            order.get(i).unwrap().clone(),
                            order.get(j).unwrap().clone(),
                            order.get(k).unwrap().clone(),
                        )
                        .unwrap();
                        if !depth_admissible(&tr) {
                            assert_eq!(kron(&tr, &t).unwrap(), 0, "n={n} {tr}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn depth_admissible_examples() {
        assert!(depth_admissible(&triple(&[6], &[6], &[6])));
        assert!(depth_admissible(&triple(&[6], &[5, 1], &[5, 1])));
        assert!(!depth_admissible(&triple(&[6], &[6], &[5, 1])));
        // The bound is symmetric: one deep component against two shallow
        // ones violates it in every ordering.
        assert!(!depth_admissible(&triple(&[5, 1], &[6], &[6])));
    }

    #[test]
    fn corrupt_table_reports_divisibility_violation() {
        let t = build_table(4, None).unwrap();
        let mut values = t.values().to_vec();
        values[0] += 1;
        let corrupt = CharacterTable::from_values(4, values).unwrap();
        let order = corrupt.order().clone();
        let mut saw_violation = false;
        'outer: for a in order.iter() {
            for b in order.iter() {
                for c in order.iter() {
                    let tr = Triple::new(a.clone(), b.clone(), c.clone()).unwrap();
                    if matches!(
                        kron(&tr, &corrupt),
                        Err(Error::DivisibilityViolation { .. })
                    ) {
                        saw_violation = true;
                        break 'outer;
                    }
                }
            }
        }
        assert!(saw_violation);
    }

    #[test]
    fn table_total_mismatch_is_reported() {
        let t = build_table(5, None).unwrap();
        assert!(kron(&triple(&[3, 3], &[2, 2, 2], &[2, 2, 2]), &t).is_err());
    }
}
