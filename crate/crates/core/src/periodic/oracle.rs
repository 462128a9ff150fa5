//! Exhaustive search for the minimal periodic Fourier sparsity of small functions.
//!
//! A verified representation of sparsity `s` has every coefficient in
//! `2^{-k} Z` with `k = floor(log2(s + 1))`, so canonical candidates have
//! nonempty coefficients `j / 2^k` with `1 <= j < 2^k`. The constant term is
//! then forced by the value at the all-ones point, and the remaining points
//! are checked with integer arithmetic.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use super::PeriodicRepresentation;
use crate::boolean::{character, BooleanFunction, Subset};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

/// Search limits.
#[derive(Clone, Debug)]
pub struct OracleConfig {
    pub s_max: usize,
    pub budget: Option<Duration>,
    /// Largest accepted `n`.
    pub max_vars: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            s_max: 7,
            budget: Some(Duration::from_secs(60)),
            max_vars: 3,
        }
    }
}

impl OracleConfig {
    pub fn with_s_max(s_max: usize) -> Self {
        OracleConfig {
            s_max,
            ..Self::default()
        }
    }
}

/// Minimal sparsity found and a witness representation in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub sparsity: usize,
    #[serde(skip)]
    pub representation: PeriodicRepresentation,
}

struct Search<'a> {
    f: &'a BooleanFunction,
    k: u32,
    deadline: Option<Instant>,
    expired: &'a AtomicBool,
}

impl Search<'_> {
    fn out_of_time(&self) -> bool {
        if self.expired.load(Ordering::Relaxed) {
            return true;
        }
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.expired.store(true, Ordering::Relaxed);
            return true;
        }
        false
    }

    /// First coefficient assignment on `support` (odometer order) that verifies.
    fn solve(&self, support: &[Subset]) -> Option<Vec<i64>> {
        if self.out_of_time() {
            return None;
        }
        let points = self.f.len();
        let unit = 1i64 << self.k;
        let modulus = unit << 1;
        let targets: Vec<i64> = (0..points)
            .map(|m| i64::from(self.f.value(m)) * unit)
            .collect();
        // chars[i][m] = chi_{support[i]}(m)
        let chars: Vec<Vec<i64>> = support
            .iter()
            .map(|&s| (0..points).map(|m| i64::from(character(s, m))).collect())
            .collect();
        let mut js = vec![1i64; support.len()];
        let mut sums: Vec<i64> = (0..points)
            .map(|m| chars.iter().map(|c| c[m]).sum())
            .collect();
        let mut steps = 0u32;
        loop {
            // Constant term from the all-ones point, then check the rest.
            let j0 = (targets[0] - sums[0]).rem_euclid(modulus);
            let ok = (1..points).all(|m| (j0 + sums[m] - targets[m]).rem_euclid(modulus) == 0);
            if ok {
                let mut out = Vec::with_capacity(js.len() + 1);
                out.push(j0);
                out.extend_from_slice(&js);
                return Some(out);
            }
            steps = steps.wrapping_add(1);
            if steps.is_multiple_of(4096) && self.out_of_time() {
                return None;
            }
            // Advance the odometer, updating the sums in place.
            let mut i = js.len();
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                if js[i] + 1 < unit {
                    js[i] += 1;
                    for (s, c) in sums.iter_mut().zip(&chars[i]) {
                        *s += c;
                    }
                    break;
                }
                let drop = js[i] - 1;
                js[i] = 1;
                for (s, c) in sums.iter_mut().zip(&chars[i]) {
                    *s -= c * drop;
                }
            }
        }
    }
}

/// Lexicographic `size`-combinations of `1..=max`.
fn combinations(max: Subset, size: usize) -> Vec<Vec<Subset>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    fn rec(
        start: Subset,
        max: Subset,
        size: usize,
        cur: &mut Vec<Subset>,
        out: &mut Vec<Vec<Subset>>,
    ) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        let need = (size - cur.len()) as Subset;
        let mut s = start;
        while s + need - 1 <= max {
            cur.push(s);
            rec(s + 1, max, size, cur, out);
            cur.pop();
            s += 1;
        }
    }
    rec(1, max, size, &mut current, &mut out);
    out
}

/// Smallest `s <= s_max` admitting a verified representation, with the
/// witness on the lexicographically first support. `Ok(None)` means no
/// representation exists within `s_max`; running out of time is
/// [`Error::BudgetExceeded`].
pub fn brute_force_pfs(f: &BooleanFunction, config: &OracleConfig) -> Result<Option<OracleResult>> {
    let n = f.n();
    if n > config.max_vars {
        return Err(Error::TooManyVariables {
            n,
            cap: config.max_vars,
        });
    }
    if f.is_constant() {
        return Ok(Some(OracleResult {
            sparsity: 0,
            representation: PeriodicRepresentation::constant(n, f.value(0)),
        }));
    }
    let deadline = config.budget.map(|b| Instant::now() + b);
    let expired = AtomicBool::new(false);
    let nonempty = ((1u64 << n) - 1) as Subset;
    for s in 1..=config.s_max.min(nonempty as usize) {
        let k = (s + 1).ilog2();
        let search = Search {
            f,
            k,
            deadline,
            expired: &expired,
        };
        let found = combinations(nonempty, s)
            .into_par_iter()
            .find_map_first(|support| search.solve(&support).map(|js| (support, js)));
        if expired.load(Ordering::Relaxed) {
            return Err(Error::BudgetExceeded);
        }
        if let Some((support, js)) = found {
            let terms = std::iter::once(0)
                .chain(support)
                .zip(js)
                .map(|(set, j)| (set, Dyadic::new(j, k)));
            let representation = PeriodicRepresentation::new(n, terms)?;
            debug_assert!(representation.verify(f)?.ok);
            return Ok(Some(OracleResult {
                sparsity: s,
                representation,
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::make_family;

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(4, 2),
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![1, 4],
                vec![2, 3],
                vec![2, 4],
                vec![3, 4]
            ]
        );
        assert_eq!(combinations(3, 3), vec![vec![1, 2, 3]]);
    }

    #[test]
    fn xor2_witness() {
        let f = make_family("xor", &[2]).unwrap();
        let r = brute_force_pfs(&f, &OracleConfig::default())
            .unwrap()
            .unwrap();
        assert_eq!(r.sparsity, 1);
        let expected = PeriodicRepresentation::new(
            2,
            [(0, "3/2".parse().unwrap()), (0b11, "1/2".parse().unwrap())],
        )
        .unwrap();
        assert_eq!(r.representation, expected);
    }

    #[test]
    fn too_small_s_max_is_none() {
        let f = make_family("and", &[2]).unwrap();
        assert_eq!(
            brute_force_pfs(&f, &OracleConfig::with_s_max(2)).unwrap(),
            None
        );
    }

    #[test]
    fn zero_budget_is_reported() {
        let f = make_family("and", &[3]).unwrap();
        let config = OracleConfig {
            s_max: 7,
            budget: Some(Duration::ZERO),
            max_vars: 3,
        };
        assert!(matches!(
            brute_force_pfs(&f, &config),
            Err(Error::BudgetExceeded)
        ));
    }
}
