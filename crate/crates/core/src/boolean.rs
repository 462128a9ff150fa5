//! Truth-table Boolean functions, the named families, parity composition and
//! symmetry detection.
//!
//! Inputs are indexed little-endian: variable `x_i` (1-based) is bit `i - 1`
//! of the table index. The `{0,1}` output bit `b` corresponds to the `±1`
//! value `1 - 2b`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported variable count for dense truth tables.
pub const MAX_VARS: usize = 20;

/// A subset of `[n]` encoded as a bitmask (bit `i - 1` set iff `i` is in the set).
pub type Subset = u32;

/// Bitmask of a set given by 1-based indices.
pub fn subset(indices: &[usize]) -> Subset {
    indices.iter().fold(0, |m, &i| {
        assert!((1..=32).contains(&i), "variable index {i} out of range");
        m | 1 << (i - 1)
    })
}

/// The 1-based indices contained in `s`, ascending.
pub fn subset_indices(s: Subset) -> Vec<usize> {
    (0..32).filter(|b| s >> b & 1 == 1).map(|b| b + 1).collect()
}

/// Character `prod_{i in s} x_i` at the `±1` point whose `{0,1}` encoding is `index`.
#[inline]
pub fn character(s: Subset, index: usize) -> i8 {
    if (s & index as u32).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub(crate) fn check_vars(n: usize) -> Result<()> {
    if n > MAX_VARS {
        return Err(Error::TooManyVariables { n, cap: MAX_VARS });
    }
    Ok(())
}

/// Converts a `{0,1}` input vector to its table index.
pub fn bits_to_index(bits: &[bool]) -> usize {
    bits.iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | (b as usize) << i)
}

/// Converts a `±1` input vector to its table index (`-1` is bit 1).
pub fn signs_to_index(signs: &[i8]) -> usize {
    signs
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &s)| acc | ((s < 0) as usize) << i)
}

/// A Boolean function on `n` variables stored as its full truth table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    n: usize,
    table: Vec<bool>,
}

impl BooleanFunction {
    pub fn from_truth_table(n: usize, bits: Vec<bool>) -> Result<Self> {
        check_vars(n)?;
        if bits.len() != 1 << n {
            return Err(Error::TableLength {
                n,
                expected: 1 << n,
                got: bits.len(),
            });
        }
        Ok(BooleanFunction { n, table: bits })
    }

    /// Builds the table by evaluating `f` at every index.
    pub fn from_fn(n: usize, f: impl Fn(usize) -> bool) -> Result<Self> {
        check_vars(n)?;
        Ok(BooleanFunction {
            n,
            table: (0..1usize << n).map(f).collect(),
        })
    }

    pub fn constant(n: usize, bit: bool) -> Result<Self> {
        Self::from_fn(n, |_| bit)
    }

    /// Function depending only on the input weight.
    pub fn from_weight_fn(n: usize, f: impl Fn(usize) -> bool) -> Result<Self> {
        Self::from_fn(n, |m| f(m.count_ones() as usize))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    /// Output bit at a table index.
    #[inline]
    pub fn value(&self, index: usize) -> bool {
        self.table[index]
    }

    /// `±1` output at a table index.
    #[inline]
    pub fn sign(&self, index: usize) -> i8 {
        if self.table[index] {
            -1
        } else {
            1
        }
    }

    pub fn evaluate(&self, x: &[bool]) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::Arity {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(self.table[bits_to_index(x)])
    }

    /// Evaluates at a `±1` point.
    pub fn evaluate_signs(&self, x: &[i8]) -> Result<i8> {
        if x.len() != self.n {
            return Err(Error::Arity {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(self.sign(signs_to_index(x)))
    }

    pub fn is_constant(&self) -> bool {
        self.table.iter().all(|&b| b == self.table[0])
    }

    pub fn negate(&self) -> Self {
        BooleanFunction {
            n: self.n,
            table: self.table.iter().map(|b| !b).collect(),
        }
    }

    fn zip_with(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::VariableCountMismatch(self.n, other.n));
        }
        Ok(BooleanFunction {
            n: self.n,
            table: self
                .table
                .iter()
                .zip(&other.table)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        })
    }

    pub fn and(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a ^ b)
    }

    /// Linear sketch `x -> g(xor_{i in S_1} x_i, ..., xor_{i in S_k} x_i)`.
    pub fn compose_parities(g: &BooleanFunction, sets: &[Subset], n: usize) -> Result<Self> {
        check_vars(n)?;
        if sets.len() != g.n {
            return Err(Error::Arity {
                expected: g.n,
                got: sets.len(),
            });
        }
        let full: u64 = (1u64 << n) - 1;
        if let Some(s) = sets.iter().find(|&&s| u64::from(s) & !full != 0) {
            return Err(Error::Parameter(format!(
                "parity set {:?} is not a subset of [{n}]",
                subset_indices(*s)
            )));
        }
        Self::from_fn(n, |m| {
            let z = sets.iter().enumerate().fold(0usize, |acc, (j, &s)| {
                acc | (((s & m as u32).count_ones() & 1) as usize) << j
            });
            g.value(z)
        })
    }

    /// Weight profile if the function depends only on the input weight.
    pub fn symmetric_profile(&self) -> Option<SymmetricProfile> {
        let mut by_weight: Vec<Option<bool>> = vec![None; self.n + 1];
        for (m, &b) in self.table.iter().enumerate() {
            let w = m.count_ones() as usize;
            match by_weight[w] {
                None => by_weight[w] = Some(b),
                Some(prev) if prev != b => return None,
                Some(_) => {}
            }
        }
        let accept = by_weight
            .iter()
            .enumerate()
            .filter(|(_, b)| **b == Some(true))
            .map(|(w, _)| w)
            .collect();
        Some(SymmetricProfile { n: self.n, accept })
    }

    /// Truth table as hex, most significant digit first (bit `m` of the
    /// number is the output at index `m`).
    pub fn to_hex(&self) -> String {
        let digits = self.table.len().div_ceil(4);
        (0..digits)
            .rev()
            .map(|d| {
                let nibble = (0..4).fold(0u32, |acc, b| {
                    let idx = d * 4 + b;
                    acc | ((idx < self.table.len() && self.table[idx]) as u32) << b
                });
                char::from_digit(nibble, 16).unwrap()
            })
            .collect()
    }

    /// Parses the hex form produced by [`BooleanFunction::to_hex`].
    pub fn from_hex(n: usize, hex: &str) -> Result<Self> {
        check_vars(n)?;
        let size = 1usize << n;
        let mut table = vec![false; size];
        for (pos, c) in hex.chars().rev().enumerate() {
            let nibble = c.to_digit(16).ok_or_else(|| Error::Parse {
                pos: hex.len() - 1 - pos,
                msg: format!("invalid hex digit `{c}`"),
            })?;
            for b in 0..4 {
                if nibble >> b & 1 == 1 {
                    let idx = pos * 4 + b;
                    if idx >= size {
                        return Err(Error::Parse {
                            pos: hex.len() - 1 - pos,
                            msg: format!("truth table has more than 2^{n} bits"),
                        });
                    }
                    table[idx] = true;
                }
            }
        }
        Ok(BooleanFunction { n, table })
    }
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanFunction(n={}, tt=0x{})", self.n, self.to_hex())
    }
}

/// A symmetric function given by the set of accepted input weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricProfile {
    pub n: usize,
    pub accept: BTreeSet<usize>,
}

impl SymmetricProfile {
    pub fn new(n: usize, accept: impl IntoIterator<Item = usize>) -> Result<Self> {
        let accept: BTreeSet<usize> = accept.into_iter().collect();
        if let Some(&w) = accept.iter().find(|&&w| w > n) {
            return Err(Error::Parameter(format!("weight {w} exceeds n = {n}")));
        }
        Ok(SymmetricProfile { n, accept })
    }

    pub fn accepts(&self, weight: usize) -> bool {
        self.accept.contains(&weight)
    }

    pub fn to_function(&self) -> Result<BooleanFunction> {
        BooleanFunction::from_weight_fn(self.n, |w| self.accepts(w))
    }
}

/// The named function families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    And(usize),
    Or(usize),
    Xor(usize),
    /// Majority; `n` must be odd.
    Maj(usize),
    /// Complete quadratic `xor_{i<j} x_i x_j`.
    Cq(usize),
    /// Complete cubic `xor_{i<j<k} x_i x_j x_k`.
    C3(usize),
    /// Weight divisible by `k`.
    Mod {
        k: usize,
        n: usize,
    },
    /// Weight equal to `k`.
    Exact {
        k: usize,
        n: usize,
    },
    /// `l`-th least significant bit of the weight.
    Lsb {
        l: usize,
        n: usize,
    },
    Sym(SymmetricProfile),
}

impl Family {
    pub fn n(&self) -> usize {
        match self {
            Family::And(n)
            | Family::Or(n)
            | Family::Xor(n)
            | Family::Maj(n)
            | Family::Cq(n)
            | Family::C3(n) => *n,
            Family::Mod { n, .. } | Family::Exact { n, .. } | Family::Lsb { n, .. } => *n,
            Family::Sym(p) => p.n,
        }
    }

    /// Output bit as a function of the input weight.
    pub fn weight_predicate(&self, w: usize) -> bool {
        let n = self.n();
        match self {
            Family::And(_) => w == n,
            Family::Or(_) => w > 0,
            Family::Xor(_) => w % 2 == 1,
            Family::Maj(_) => 2 * w > n,
            Family::Cq(_) => binomial_parity(w, 2),
            Family::C3(_) => binomial_parity(w, 3),
            Family::Mod { k, .. } => w.is_multiple_of(*k),
            Family::Exact { k, .. } => w == *k,
            Family::Lsb { l, .. } => w >> (l - 1) & 1 == 1,
            Family::Sym(p) => p.accepts(w),
        }
    }

    pub fn build(&self) -> Result<BooleanFunction> {
        let n = self.n();
        if n == 0 {
            return Err(Error::Parameter("families need n >= 1".into()));
        }
        check_vars(n)?;
        match self {
            Family::Maj(n) if n % 2 == 0 => {
                return Err(Error::Parameter(format!("majority needs odd n, got {n}")))
            }
            Family::Mod { k, .. } if *k < 2 => {
                return Err(Error::Parameter(format!("mod needs k >= 2, got {k}")))
            }
            Family::Exact { k, n } if k > n => {
                return Err(Error::Parameter(format!("exact needs k <= n, got k = {k}")))
            }
            Family::Lsb { l, .. } if *l == 0 || *l > 32 => {
                return Err(Error::Parameter(format!("lsb needs 1 <= l <= 32, got {l}")))
            }
            _ => {}
        }
        BooleanFunction::from_weight_fn(n, |w| self.weight_predicate(w))
    }
}

/// Parity of `C(w, k)`.
fn binomial_parity(w: usize, k: usize) -> bool {
    // Lucas: C(w, k) is odd iff the bits of k are a subset of the bits of w.
    w & k == k
}

/// Builds a named family by name and parameters, e.g. `("mod", &[3, 3])`.
pub fn make_family(name: &str, params: &[usize]) -> Result<BooleanFunction> {
    let want = |count: usize| -> Result<()> {
        if params.len() != count {
            return Err(Error::Parameter(format!(
                "family `{name}` takes {count} parameter(s), got {}",
                params.len()
            )));
        }
        Ok(())
    };
    let family = match name {
        "and" | "or" | "xor" | "maj" | "cq" | "c3" => {
            want(1)?;
            let n = params[0];
            match name {
                "and" => Family::And(n),
                "or" => Family::Or(n),
                "xor" => Family::Xor(n),
                "maj" => Family::Maj(n),
                "cq" => Family::Cq(n),
                _ => Family::C3(n),
            }
        }
        "mod" | "exact" | "lsb" => {
            want(2)?;
            let (a, n) = (params[0], params[1]);
            match name {
                "mod" => Family::Mod { k: a, n },
                "exact" => Family::Exact { k: a, n },
                _ => Family::Lsb { l: a, n },
            }
        }
        other => return Err(Error::UnknownFamily(other.to_string())),
    };
    family.build()
}
