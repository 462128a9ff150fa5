//! Periodic Fourier representations `f(x) = cos(pi * sum_S phi_S prod_{i in S} x_i)`.
//!
//! A representation is stored as its phase polynomial. It represents the
//! Boolean function `f` exactly when the phase sum at every `±1` point is an
//! integer whose parity is the `{0,1}` output bit; that is the check
//! [`PeriodicRepresentation::verify`] performs, with no floating point.
//!
//! Canonical form keeps `phi_S` in `[0, 1)` for nonempty `S` and `phi_∅` in
//! `[0, 2)`. Because `(m + r) x^S ≡ m + r x^S (mod 2)` for integer `m`, the
//! integer part of any nonempty coefficient can be folded into `phi_∅`
//! without changing the phase sum modulo 2.

mod oracle;

pub use oracle::{brute_force_pfs, OracleConfig, OracleResult};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::anf::AnfPolynomial;
use crate::boolean::{
    character, check_vars, signs_to_index, subset_indices, BooleanFunction, Subset,
};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::fourier::FourierSpectrum;
use crate::transform::{eval_multilinear_all, superset_sum_i128};

/// Phase polynomial of a periodic Fourier representation; zero coefficients
/// are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeriodicRepresentation {
    n: usize,
    phi: BTreeMap<Subset, Dyadic>,
}

/// Outcome of checking a representation against a function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub ok: bool,
    /// First failing input as `{0,1}` bits, if any.
    pub witness: Option<Vec<u8>>,
    pub sparsity: usize,
    pub digits: u32,
}

/// Periodic Fourier sparsity and number of binary digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RepStats {
    pub sparsity: usize,
    pub digits: u32,
}

impl PeriodicRepresentation {
    /// Builds a representation, summing repeated subsets and dropping zeros.
    pub fn new(n: usize, terms: impl IntoIterator<Item = (Subset, Dyadic)>) -> Result<Self> {
        check_vars(n)?;
        let mut phi: BTreeMap<Subset, Dyadic> = BTreeMap::new();
        for (s, c) in terms {
            if u64::from(s) >> n != 0 {
                return Err(Error::Parameter(format!(
                    "subset {:?} is not contained in [{n}]",
                    subset_indices(s)
                )));
            }
            *phi.entry(s).or_default() += c;
        }
        phi.retain(|_, c| !c.is_zero());
        Ok(PeriodicRepresentation { n, phi })
    }

    /// The representation `cos(pi * c)` of a constant (`bit = c mod 2`).
    pub fn constant(n: usize, bit: bool) -> Self {
        let mut phi = BTreeMap::new();
        if bit {
            phi.insert(0, Dyadic::one());
        }
        PeriodicRepresentation { n, phi }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn phi(&self) -> &BTreeMap<Subset, Dyadic> {
        &self.phi
    }

    pub fn coeff(&self, s: Subset) -> Dyadic {
        self.phi.get(&s).cloned().unwrap_or_default()
    }

    /// Nonempty subsets carrying a nonzero phase, ascending.
    pub fn nonempty_support(&self) -> impl Iterator<Item = Subset> + '_ {
        self.phi.keys().copied().filter(|&s| s != 0)
    }

    pub fn canonical(&self) -> Self {
        let mut phi = BTreeMap::new();
        let mut constant = self.coeff(0);
        for (&s, c) in &self.phi {
            if s == 0 {
                continue;
            }
            let (residue, carry) = c.reduce_mod(1);
            constant += Dyadic::from(carry);
            if !residue.is_zero() {
                phi.insert(s, residue);
            }
        }
        let (constant, _) = constant.reduce_mod(2);
        if !constant.is_zero() {
            phi.insert(0, constant);
        }
        PeriodicRepresentation { n: self.n, phi }
    }

    pub fn is_canonical(&self) -> bool {
        let one = Dyadic::one();
        let two = Dyadic::from(2);
        self.phi
            .iter()
            .all(|(&s, c)| !c.is_negative() && if s == 0 { *c < two } else { *c < one })
    }

    /// Nonzero nonempty coefficients as stored (no canonicalization).
    pub fn raw_sparsity(&self) -> usize {
        self.nonempty_support().count()
    }

    /// Periodic Fourier sparsity of the canonical form.
    pub fn sparsity(&self) -> usize {
        self.canonical().raw_sparsity()
    }

    /// Maximum number of binary digits over all coefficients, `phi_∅` included.
    pub fn digits(&self) -> u32 {
        self.phi.values().map(Dyadic::digits).max().unwrap_or(0)
    }

    pub fn stats(&self) -> RepStats {
        let canonical = self.canonical();
        RepStats {
            sparsity: canonical.raw_sparsity(),
            digits: canonical.digits(),
        }
    }

    /// Exact phase polynomial at a `±1` point.
    pub fn phase_sum(&self, x: &[i8]) -> Result<Dyadic> {
        if x.len() != self.n {
            return Err(Error::Arity {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(self.phase_sum_at(signs_to_index(x)))
    }

    /// Phase polynomial at the point with `{0,1}` encoding `index`.
    pub fn phase_sum_at(&self, index: usize) -> Dyadic {
        self.phi.iter().fold(Dyadic::zero(), |acc, (&s, c)| {
            if character(s, index) == 1 {
                acc + c
            } else {
                acc - c
            }
        })
    }

    /// Phase polynomial at every point, by table index.
    pub fn phase_sums(&self) -> Vec<Dyadic> {
        eval_multilinear_all(&self.phi, self.n)
    }

    /// Exact check that the representation computes `f`.
    pub fn verify(&self, f: &BooleanFunction) -> Result<VerificationReport> {
        if f.n() != self.n {
            return Err(Error::VariableCountMismatch(self.n, f.n()));
        }
        let failing = self
            .phase_sums()
            .iter()
            .enumerate()
            .find(|(m, t)| t.integer_parity() != Some(f.value(*m) as u8))
            .map(|(m, _)| m);
        let stats = self.stats();
        Ok(VerificationReport {
            ok: failing.is_none(),
            witness: failing.map(|m| (0..self.n).map(|i| (m >> i & 1) as u8).collect()),
            sparsity: stats.sparsity,
            digits: stats.digits,
        })
    }

    /// The function this representation computes, if every phase sum is integral.
    pub fn function(&self) -> Result<BooleanFunction> {
        let sums = self.phase_sums();
        let mut table = Vec::with_capacity(sums.len());
        for (m, t) in sums.iter().enumerate() {
            match t.integer_parity() {
                Some(p) => table.push(p == 1),
                None => return Err(Error::NotExact { input: m }),
            }
        }
        BooleanFunction::from_truth_table(self.n, table)
    }

    pub fn is_exact(&self) -> bool {
        self.phase_sums().iter().all(Dyadic::is_integer)
    }

    /// Sum of phase polynomials.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::VariableCountMismatch(self.n, other.n));
        }
        let terms = self
            .phi
            .iter()
            .chain(&other.phi)
            .map(|(&s, c)| (s, c.clone()));
        Self::new(self.n, terms)
    }

    /// Product of phase polynomials as multilinear polynomials (`x_i^2 = 1`).
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::VariableCountMismatch(self.n, other.n));
        }
        let mut terms = Vec::with_capacity(self.phi.len() * other.phi.len());
        for (&s, a) in &self.phi {
            for (&t, b) in &other.phi {
                terms.push((s ^ t, a * b));
            }
        }
        Self::new(self.n, terms)
    }
}

/// Construction from the Fourier expansion via `sin(pi t / 2) = cos(pi (t - 1) / 2)`:
/// `phi_S = f^(S) / 2` for `S ≠ ∅` and `phi_∅ = f^(∅) / 2 - 1 / 2`, canonicalized.
pub fn from_fourier(f: &BooleanFunction) -> Result<PeriodicRepresentation> {
    let spectrum = FourierSpectrum::wht(f)?;
    let half = Dyadic::half_pow(1);
    let terms = spectrum
        .coeffs()
        .iter()
        .map(|(&s, c)| (s, c.scale_pow2(-1)))
        .chain(std::iter::once((0, -half)));
    Ok(PeriodicRepresentation::new(f.n(), terms)?.canonical())
}

/// Phase polynomial `sum_S c_S prod_{i in S} (1 - x_i) / 2` of an integer
/// polynomial in the `{0,1}` variables, before canonicalization:
/// `phi_S = (-1)^|S| sum_{T ⊇ S} c_T / 2^|T|`.
fn binary_polynomial_phase(
    n: usize,
    coeffs: &BTreeMap<Subset, i64>,
) -> Result<PeriodicRepresentation> {
    check_vars(n)?;
    let den = coeffs
        .iter()
        .filter(|(_, &c)| c != 0)
        .map(|(s, _)| s.count_ones())
        .max()
        .unwrap_or(0);
    let mut v = vec![0i128; 1 << n];
    for (&t, &c) in coeffs.iter().filter(|(_, &c)| c != 0) {
        v[t as usize] += i128::from(c) << (den - t.count_ones());
    }
    superset_sum_i128(&mut v);
    let terms = v
        .into_iter()
        .enumerate()
        .filter(|(_, x)| *x != 0)
        .map(|(s, x)| {
            let sign = if (s as Subset).count_ones().is_multiple_of(2) {
                1
            } else {
                -1
            };
            (s as Subset, Dyadic::new(BigInt::from(sign * x), den))
        });
    PeriodicRepresentation::new(n, terms)
}

/// The GF(2) construction before canonicalization.
pub fn anf_phase(anf: &AnfPolynomial) -> Result<PeriodicRepresentation> {
    let coeffs = anf.monomials().iter().map(|&s| (s, 1i64)).collect();
    binary_polynomial_phase(anf.n(), &coeffs)
}

/// Construction from the algebraic normal form, canonicalized. The number of
/// binary digits equals the GF(2) degree for nonconstant `f`.
pub fn from_anf(f: &BooleanFunction) -> Result<PeriodicRepresentation> {
    Ok(anf_phase(&AnfPolynomial::moebius(f)?)?.canonical())
}

/// `|{S ≠ ∅ : exists T ⊇ S with c_T ≠ 0}|`, the sparsity the ANF and
/// mod-4 constructions produce before canonicalization.
pub fn upward_closure_size(n: usize, support: impl IntoIterator<Item = Subset>) -> usize {
    let mut covered = vec![false; 1 << n];
    for t in support {
        covered[t as usize] = true;
    }
    // Propagate downward: S is covered if some superset is.
    let mut h = 1;
    while h < covered.len() {
        for block in covered.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a |= *b;
            }
        }
        h *= 2;
    }
    covered.iter().skip(1).filter(|&&c| c).count()
}

/// Coefficients `c_S ∈ {0, 1, 2, 3}` of an integer polynomial in the `{0,1}`
/// variables whose second least significant bit is the target function.
pub type Mod4Coefficients = BTreeMap<Subset, u8>;

fn check_mod4(n: usize, c: &Mod4Coefficients) -> Result<()> {
    check_vars(n)?;
    for (&s, &v) in c {
        if v > 3 {
            return Err(Error::Parameter(format!("coefficient {v} is not in 0..=3")));
        }
        if u64::from(s) >> n != 0 {
            return Err(Error::Parameter(format!(
                "monomial {:?} is not contained in [{n}]",
                subset_indices(s)
            )));
        }
    }
    Ok(())
}

/// Values of `sum_S c_S prod_{i in S} x_i` at every input.
fn mod4_values(n: usize, c: &Mod4Coefficients) -> Vec<i128> {
    let mut v = vec![0i128; 1 << n];
    for (&s, &x) in c {
        v[s as usize] += i128::from(x);
    }
    // Subset sums.
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter().zip(hi.iter_mut()) {
                *b += *a;
            }
        }
        h *= 2;
    }
    v
}

/// `LSB^2` of the integer polynomial, the function the mod-4 construction computes.
pub fn mod4_target(n: usize, c: &Mod4Coefficients) -> Result<BooleanFunction> {
    check_mod4(n, c)?;
    let values = mod4_values(n, c);
    BooleanFunction::from_truth_table(n, values.iter().map(|v| v >> 1 & 1 == 1).collect())
}

/// The mod-4 construction before canonicalization:
/// `(1/2) (sum_S c_S prod (1 - x_i)/2 - (1 - sum_S g^(S) x^S) / 2)` with
/// `g` the polynomial reduced mod 2.
pub fn mod4_phase(n: usize, c: &Mod4Coefficients) -> Result<PeriodicRepresentation> {
    check_mod4(n, c)?;
    let ints = c.iter().map(|(&s, &v)| (s, i64::from(v))).collect();
    let integer_part = binary_polynomial_phase(n, &ints)?;
    let values = mod4_values(n, c);
    let g = BooleanFunction::from_truth_table(n, values.iter().map(|v| v & 1 == 1).collect())?;
    let g_hat = FourierSpectrum::wht(&g)?;
    let quarter = Dyadic::half_pow(2);
    let terms = integer_part
        .phi
        .iter()
        .map(|(&s, c)| (s, c.scale_pow2(-1)))
        .chain(g_hat.coeffs().iter().map(|(&s, c)| (s, c.scale_pow2(-2))))
        .chain(std::iter::once((0, -quarter)));
    PeriodicRepresentation::new(n, terms)
}

/// Mod-4 construction, canonicalized.
pub fn from_mod4(n: usize, c: &Mod4Coefficients) -> Result<PeriodicRepresentation> {
    Ok(mod4_phase(n, c)?.canonical())
}

/// Mod-4 construction checked against a caller-supplied function.
pub fn from_mod4_checked(
    f: &BooleanFunction,
    c: &Mod4Coefficients,
) -> Result<PeriodicRepresentation> {
    let rep = from_mod4(f.n(), c)?;
    let report = rep.verify(f)?;
    match report.witness {
        None => Ok(rep),
        Some(bits) => Err(Error::VerificationFailed {
            input: bits
                .iter()
                .enumerate()
                .fold(0, |acc, (i, &b)| acc | (b as usize) << i),
        }),
    }
}

/// Upper bound on the mod-4 construction's sparsity: the upward closure of
/// the coefficient support plus the nonempty Fourier support of `g`.
pub fn mod4_sparsity_bound(n: usize, c: &Mod4Coefficients) -> Result<usize> {
    check_mod4(n, c)?;
    let closure = upward_closure_size(n, c.iter().filter(|(_, &v)| v != 0).map(|(&s, _)| s));
    let values = mod4_values(n, c);
    let g = BooleanFunction::from_truth_table(n, values.iter().map(|v| v & 1 == 1).collect())?;
    Ok(closure + FourierSpectrum::wht(&g)?.stats().nonempty_sparsity)
}

/// `(1 - prod_{i in S} x_i) / 2`, the raw representation of a parity.
pub fn parity_phase(n: usize, s: Subset) -> Result<PeriodicRepresentation> {
    let half = Dyadic::half_pow(1);
    PeriodicRepresentation::new(n, [(0, half.clone()), (s, -half)])
}

fn require_exact(reps: &[PeriodicRepresentation]) -> Result<usize> {
    let n = reps
        .first()
        .map(PeriodicRepresentation::n)
        .ok_or_else(|| Error::Parameter("no representations to combine".into()))?;
    for rep in reps {
        if rep.n != n {
            return Err(Error::VariableCountMismatch(n, rep.n));
        }
        rep.function()?;
    }
    Ok(n)
}

/// Representation of the conjunction: the product of the phase polynomials,
/// canonicalized. Every input must be exact.
pub fn and_combine(reps: &[PeriodicRepresentation]) -> Result<PeriodicRepresentation> {
    require_exact(reps)?;
    let mut acc = reps[0].clone();
    for rep in &reps[1..] {
        acc = acc.multiply(rep)?;
    }
    Ok(acc.canonical())
}

/// Representation of the XOR: the sum of the phase polynomials, canonicalized.
pub fn xor_combine(reps: &[PeriodicRepresentation]) -> Result<PeriodicRepresentation> {
    let n = require_exact(reps)?;
    let mut acc = PeriodicRepresentation::constant(n, false);
    for rep in reps {
        acc = acc.add(rep)?;
    }
    Ok(acc.canonical())
}

/// Mod-4 coefficients of the complete quadratic function: `c_{i} = 1`.
pub fn cq_coefficients(n: usize) -> Mod4Coefficients {
    (0..n).map(|i| (1 << i, 1u8)).collect()
}

/// Complete quadratic function through the weight's second bit: sparsity
/// `n + 1`, two binary digits.
pub fn cq_recipe(n: usize) -> Result<PeriodicRepresentation> {
    from_mod4(n, &cq_coefficients(n))
}

/// Complete cubic function as the conjunction of the raw complete quadratic
/// and parity representations.
pub fn c3_recipe(n: usize) -> Result<PeriodicRepresentation> {
    check_vars(n)?;
    let full: Subset = (1 << n) - 1;
    let cq = mod4_phase(n, &cq_coefficients(n))?;
    let parity = parity_phase(n, full)?;
    and_combine(&[cq, parity])
}

/// Lower bounds on the periodic Fourier sparsity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LowerBound {
    /// Maximum of the applicable bounds.
    pub value: usize,
    pub f2_degree: usize,
    /// `2^deg - 1`.
    pub degree_bound: usize,
    /// Fourier dimension (linear sketch complexity).
    pub dimension: usize,
    /// `dim + 1`, applicable when the GF(2) degree is at least 2.
    pub dimension_plus_one: Option<usize>,
}

pub fn lower_bound(f: &BooleanFunction) -> Result<LowerBound> {
    if f.is_constant() {
        return Err(Error::ConstantFunction);
    }
    let f2_degree = AnfPolynomial::moebius(f)?.degree();
    let degree_bound = (1usize << f2_degree) - 1;
    let dimension = FourierSpectrum::wht(f)?.dimension();
    let dimension_plus_one = (f2_degree >= 2).then_some(dimension + 1);
    let value = degree_bound
        .max(dimension)
        .max(dimension_plus_one.unwrap_or(0));
    Ok(LowerBound {
        value,
        f2_degree,
        degree_bound,
        dimension,
        dimension_plus_one,
    })
}
