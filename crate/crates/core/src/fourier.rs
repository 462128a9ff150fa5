//! Exact Walsh-Hadamard spectra of Boolean functions.

use std::collections::BTreeMap;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::boolean::{character, check_vars, subset_indices, BooleanFunction, Subset};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::transform::{eval_multilinear_all, walsh_i64};

/// Fourier coefficients `f^(S)` of a `±1`-valued function; zero entries are
/// not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierSpectrum {
    n: usize,
    coeffs: BTreeMap<Subset, Dyadic>,
}

/// Sparsity counts and real degree of a spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumStats {
    pub sparsity: usize,
    pub nonempty_sparsity: usize,
    pub degree: usize,
}

impl FourierSpectrum {
    pub fn from_coeffs(n: usize, coeffs: impl IntoIterator<Item = (Subset, Dyadic)>) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        FourierSpectrum { n, coeffs }
    }

    /// Fast Walsh-Hadamard transform over the integers, divided by `2^n` at the end.
    pub fn wht(f: &BooleanFunction) -> Result<Self> {
        let n = f.n();
        check_vars(n)?;
        let mut v: Vec<i64> = (0..f.len()).map(|m| i64::from(f.sign(m))).collect();
        walsh_i64(&mut v);
        let coeffs = v
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c != 0)
            .map(|(s, c)| (s as Subset, Dyadic::new(c, n as u32)))
            .collect();
        Ok(FourierSpectrum { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &BTreeMap<Subset, Dyadic> {
        &self.coeffs
    }

    pub fn coeff(&self, s: Subset) -> Dyadic {
        self.coeffs.get(&s).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = Subset> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn stats(&self) -> SpectrumStats {
        SpectrumStats {
            sparsity: self.coeffs.len(),
            nonempty_sparsity: self.coeffs.keys().filter(|&&s| s != 0).count(),
            degree: self.degree(),
        }
    }

    /// Real degree: largest `|S|` with a nonzero coefficient (0 when empty).
    pub fn degree(&self) -> usize {
        self.coeffs
            .keys()
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// GF(2) rank of the support's indicator vectors.
    pub fn dimension(&self) -> usize {
        gf2_rank(self.coeffs.keys().copied())
    }

    /// Exact evaluation of the multilinear expansion at a `±1` point.
    pub fn reconstruct(&self, x: &[i8]) -> Result<Dyadic> {
        if x.len() != self.n {
            return Err(Error::Arity {
                expected: self.n,
                got: x.len(),
            });
        }
        let index = crate::boolean::signs_to_index(x);
        Ok(self
            .coeffs
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .fold(Dyadic::zero(), |acc, (&s, c)| {
                if character(s, index) == 1 {
                    acc + c
                } else {
                    acc - c
                }
            }))
    }

    /// Multilinear expansion at every point, by table index.
    pub fn reconstruct_all(&self) -> Vec<Dyadic> {
        eval_multilinear_all(&self.coeffs, self.n)
    }

    /// `sum_S f^(S)^2`.
    pub fn parseval_sum(&self) -> Dyadic {
        self.coeffs.values().map(|c| c * c).sum()
    }
}

impl Serialize for FourierSpectrum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for (&s, c) in &self.coeffs {
            seq.serialize_element(&crate::formats::Term {
                set: subset_indices(s),
                coeff: c.clone(),
            })?;
        }
        seq.end()
    }
}

/// Rank over GF(2) of a collection of bitmask vectors.
pub fn gf2_rank(vectors: impl IntoIterator<Item = Subset>) -> usize {
    let mut basis = [0 as Subset; 32];
    let mut rank = 0;
    for mut v in vectors {
        while v != 0 {
            let top = 31 - v.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = v;
                rank += 1;
                break;
            }
            v ^= basis[top];
        }
    }
    rank
}

/// Closed-form spectrum of `Mod^3_n` (weight divisible by three) from the
/// cube-root-of-unity expansion, with one branch per `n mod 3`.
pub fn mod3_closed_form(n: usize) -> Result<FourierSpectrum> {
    if n == 0 {
        return Err(Error::Parameter("mod3 closed form needs n >= 1".into()));
    }
    check_vars(n)?;
    let pow3 = |e: usize| 3i128.pow(e as u32);
    let sign = |e: usize| if e.is_multiple_of(2) { 1i128 } else { -1 };
    // Each coefficient is num / (3 * 2^den_pow); num is divisible by three.
    let (den_pow, odd_sign) = match n % 3 {
        0 => (n - 2, 0),
        1 => (n - 1, 1),
        _ => (n - 1, -1),
    };
    let scale = 1i128 << den_pow;
    let prefactor = if n.is_multiple_of(3) {
        sign(n + 1)
    } else {
        sign(n)
    };
    let mut coeffs = BTreeMap::new();
    for s in 0..(1u32 << n) {
        let j = s.count_ones() as usize;
        let series = if j.is_multiple_of(2) {
            sign(j / 2) * pow3(j / 2)
        } else {
            odd_sign * sign((j - 1) / 2) * pow3(j.div_ceil(2))
        };
        let num = if s == 0 { scale } else { 0 } + prefactor * series;
        if num % 3 != 0 {
            return Err(Error::Parameter(format!(
                "closed form is not dyadic at S = {:?}",
                subset_indices(s)
            )));
        }
        let c = Dyadic::new(num / 3, den_pow as u32);
        if !c.is_zero() {
            coeffs.insert(s, c);
        }
    }
    Ok(FourierSpectrum { n, coeffs })
}
