//! Randomized phase families, their approximation error, and the
//! conversion to probabilistic GF(2) polynomials.
//!
//! For an atom with canonical phases `phi_S` of at most `l` binary digits,
//! let `phibar_S = 2^l phi_S`, `k = ceil(sum_S phi_S / 2)` and
//! `V(x) = 2 sum_{S ≠ ∅} phibar_S b_S(x) + (k 2^{l+1} - sum_S phibar_S)`
//! with `b_S = xor_{i in S} x_i`. Then `V = 2^l (2k - t(x))` where `t` is the
//! phase polynomial, so `cos(pi t) = cos(pi v / 2^l)` with
//! `v = V mod 2^{l+1} = sum_{i<=l} y_i 2^i` and `y_i` bit `i` of `V`.
//! Bit `i` of a sum of bits has degree `2^{i-1}` in those bits, which bounds
//! `deg y_i`. Outputting 1 with probability `(1 - cos(pi v / 2^l)) / 2` is a
//! mixture of the threshold polynomials `[|v - 2^l| <= d]`, `d < 2^l`.

use std::f64::consts::PI;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::anf::AnfPolynomial;
use crate::boolean::{BooleanFunction, Subset};
use crate::error::{Error, Result};
use crate::formats::{representation_from_terms, terms, Term};
use crate::periodic::PeriodicRepresentation;
use crate::transform::moebius_gf2;

/// Tolerance for weight sums and error comparisons.
pub const TOLERANCE: f64 = 1e-12;

/// Largest monomial support for the parity-variable interpolation.
pub const SUPPORT_CAP: usize = 18;

/// Largest digit count handled with machine integers.
const DIGIT_CAP: u32 = 48;

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseAtom {
    pub weight: f64,
    pub rep: PeriodicRepresentation,
}

/// A finite distribution over phase polynomials on `n` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomizedPhaseFamily {
    n: usize,
    atoms: Vec<PhaseAtom>,
}

impl RandomizedPhaseFamily {
    pub fn new(n: usize, atoms: Vec<PhaseAtom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Malformed("family has no atoms".into()));
        }
        let mut total = 0.0;
        for a in &atoms {
            if a.rep.n() != n {
                return Err(Error::VariableCountMismatch(n, a.rep.n()));
            }
            if !a.weight.is_finite() || a.weight < 0.0 {
                return Err(Error::Malformed(format!(
                    "weight {} is not a probability",
                    a.weight
                )));
            }
            total += a.weight;
        }
        if (total - 1.0).abs() > TOLERANCE {
            return Err(Error::Malformed(format!("weights sum to {total}, not 1")));
        }
        Ok(RandomizedPhaseFamily { n, atoms })
    }

    /// Point mass on one representation.
    pub fn single(rep: PeriodicRepresentation) -> Self {
        RandomizedPhaseFamily {
            n: rep.n(),
            atoms: vec![PhaseAtom { weight: 1.0, rep }],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn atoms(&self) -> &[PhaseAtom] {
        &self.atoms
    }

    /// Union of the atoms' nonempty canonical supports.
    pub fn support(&self) -> Vec<Subset> {
        let mut s: Vec<Subset> = self
            .atoms
            .iter()
            .flat_map(|a| a.rep.canonical().nonempty_support().collect::<Vec<_>>())
            .collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// `E[cos(pi t(x))]` at every input, by table index.
    pub fn expected_values(&self) -> Vec<f64> {
        let mut out = vec![0.0; 1 << self.n];
        for a in &self.atoms {
            for (o, t) in out.iter_mut().zip(a.rep.phase_sums()) {
                *o += a.weight * (PI * t.to_f64_mod2()).cos();
            }
        }
        out
    }

    pub fn expected_value(&self, x: &[i8]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::Arity {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(self
            .atoms
            .iter()
            .map(|a| {
                let t = a.rep.phase_sum(x).expect("arity checked");
                a.weight * (PI * t.to_f64_mod2()).cos()
            })
            .sum())
    }
}

#[derive(Serialize, Deserialize)]
struct AtomJson {
    w: f64,
    phi: Vec<Term>,
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    n: usize,
    atoms: Vec<AtomJson>,
}

impl Serialize for RandomizedPhaseFamily {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        FamilyJson {
            n: self.n,
            atoms: self
                .atoms
                .iter()
                .map(|a| AtomJson {
                    w: a.weight,
                    phi: terms(a.rep.phi().iter()),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RandomizedPhaseFamily {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let raw = FamilyJson::deserialize(deserializer)?;
        let atoms = raw
            .atoms
            .into_iter()
            .map(|a| {
                Ok(PhaseAtom {
                    weight: a.w,
                    rep: representation_from_terms(raw.n, a.phi)?,
                })
            })
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        RandomizedPhaseFamily::new(raw.n, atoms).map_err(serde::de::Error::custom)
    }
}

fn check_target(family: &RandomizedPhaseFamily, f: &BooleanFunction) -> Result<()> {
    if f.n() != family.n {
        return Err(Error::VariableCountMismatch(family.n, f.n()));
    }
    Ok(())
}

/// Largest `|f(x) - E cos(pi t(x))|` over inputs, `f` in `±1` form.
pub fn pointwise_error(family: &RandomizedPhaseFamily, f: &BooleanFunction) -> Result<f64> {
    check_target(family, f)?;
    Ok(family
        .expected_values()
        .iter()
        .enumerate()
        .map(|(m, g)| (f64::from(f.sign(m)) - g).abs())
        .fold(0.0, f64::max))
}

/// `|f(x) - E cos| <= 2 eps` at every input.
pub fn check_pointwise_error(
    family: &RandomizedPhaseFamily,
    f: &BooleanFunction,
    eps: f64,
) -> Result<bool> {
    Ok(pointwise_error(family, f)? <= 2.0 * eps + TOLERANCE)
}

/// `E_{x ~ mu} |f(x) - E cos|`, with `mu` indexed by table index.
pub fn distribution_error(
    family: &RandomizedPhaseFamily,
    f: &BooleanFunction,
    mu: &[f64],
) -> Result<f64> {
    check_target(family, f)?;
    if mu.len() != f.len() {
        return Err(Error::Malformed(format!(
            "distribution has {} entries, expected {}",
            mu.len(),
            f.len()
        )));
    }
    if mu.iter().any(|&p| !p.is_finite() || p < 0.0)
        || (mu.iter().sum::<f64>() - 1.0).abs() > TOLERANCE
    {
        return Err(Error::Malformed(
            "input distribution is not a probability vector".into(),
        ));
    }
    Ok(family
        .expected_values()
        .iter()
        .zip(mu)
        .enumerate()
        .map(|(m, (g, p))| p * (f64::from(f.sign(m)) - g).abs())
        .sum())
}

pub fn check_distribution_error(
    family: &RandomizedPhaseFamily,
    f: &BooleanFunction,
    mu: &[f64],
    eps: f64,
) -> Result<bool> {
    Ok(distribution_error(family, f, mu)? <= 2.0 * eps + TOLERANCE)
}

pub fn uniform_distribution(n: usize) -> Vec<f64> {
    vec![1.0 / (1u64 << n) as f64; 1 << n]
}

/// Intermediate bit polynomials of one atom.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AtomPolynomials {
    pub weight: f64,
    pub ell: u32,
    /// `ceil(sum_S phi_S / 2)` of the canonical phases.
    pub k: i128,
    /// `y_0 .. y_ell` over the input variables.
    pub ys: Vec<AnfPolynomial>,
    /// Degrees of `y_i` over the parity variables `b_S`.
    pub parity_degrees: Vec<usize>,
}

/// A distribution over GF(2) polynomials, with the per-atom intermediates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbabilisticPolynomial {
    pub n: usize,
    pub terms: Vec<(f64, AnfPolynomial)>,
    pub atoms: Vec<AtomPolynomials>,
}

impl ProbabilisticPolynomial {
    /// A mixture given directly, without intermediates.
    pub fn from_mixture(n: usize, terms: Vec<(f64, AnfPolynomial)>) -> Result<Self> {
        if terms.iter().any(|(_, p)| p.n() != n) {
            return Err(Error::Malformed("polynomials disagree on n".into()));
        }
        let total: f64 = terms.iter().map(|(w, _)| w).sum();
        if terms.iter().any(|(w, _)| !w.is_finite() || *w < 0.0) || (total - 1.0).abs() > TOLERANCE
        {
            return Err(Error::Malformed(format!("weights sum to {total}, not 1")));
        }
        Ok(ProbabilisticPolynomial {
            n,
            terms,
            atoms: Vec::new(),
        })
    }

    /// Largest GF(2) degree in the mixture.
    pub fn degree(&self) -> usize {
        self.terms
            .iter()
            .map(|(_, p)| p.degree())
            .max()
            .unwrap_or(0)
    }

    /// `Pr[p(x) = 1]` at every input.
    pub fn probabilities(&self) -> Vec<f64> {
        let mut out = vec![0.0; 1 << self.n];
        for (w, p) in &self.terms {
            for (o, bit) in out.iter_mut().zip(p.to_function().table()) {
                if *bit {
                    *o += w;
                }
            }
        }
        out
    }
}

/// Dense ANF coefficient vector times the linear form `xor_{i in s} x_i`.
fn times_linear(p: &[bool], s: Subset, n: usize) -> Vec<bool> {
    let mut out = vec![false; p.len()];
    for i in (0..n).filter(|i| s >> i & 1 == 1) {
        let bit = 1usize << i;
        for (m, &c) in p.iter().enumerate() {
            if c {
                out[m | bit] ^= true;
            }
        }
    }
    out
}

/// Substitutes `b_j = xor_{i in support[j]} x_i` into ANFs over the `b`
/// variables (dense, indexed by `b` monomial) and returns dense ANFs over `x`.
fn substitute_parities(b_anfs: &[Vec<bool>], support: &[Subset], n: usize) -> Vec<Vec<bool>> {
    let t = support.len();
    // needed[mask]: some monomial of some ANF contains mask.
    let mut needed: Vec<bool> = (0..1usize << t)
        .map(|m| b_anfs.iter().any(|a| a[m]))
        .collect();
    let mut h = 1;
    while h < needed.len() {
        for block in needed.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a |= *b;
            }
        }
        h *= 2;
    }
    let mut out = vec![vec![false; 1 << n]; b_anfs.len()];
    let mut one = vec![false; 1 << n];
    one[0] = true;
    let mut stack = vec![(0usize, 0usize, one)];
    while let Some((mask, next, prod)) = stack.pop() {
        for (o, a) in out.iter_mut().zip(b_anfs) {
            if a[mask] {
                for (x, &c) in o.iter_mut().zip(&prod) {
                    *x ^= c;
                }
            }
        }
        #[allow(clippy::needless_range_loop)]
        for j in next..t {
            let child = mask | 1 << j;
            if needed[child] {
                stack.push((child, j + 1, times_linear(&prod, support[j], n)));
            }
        }
    }
    out
}

fn dense_to_anf(n: usize, dense: &[bool]) -> AnfPolynomial {
    let monomials = dense
        .iter()
        .enumerate()
        .filter(|(_, &c)| c)
        .map(|(m, _)| m as Subset);
    AnfPolynomial::new(n, monomials).expect("monomials are within [n]")
}

struct AtomData {
    k: i128,
    support: Vec<Subset>,
    bars: Vec<i128>,
    constant: i128,
}

fn atom_data(rep: &PeriodicRepresentation, ell: u32) -> Result<AtomData> {
    let rep = rep.canonical();
    if rep.digits() > ell {
        return Err(Error::Parameter(format!(
            "representation has {} digits, more than l = {ell}",
            rep.digits()
        )));
    }
    if ell > DIGIT_CAP {
        return Err(Error::Parameter(format!("l = {ell} exceeds {DIGIT_CAP}")));
    }
    let support: Vec<Subset> = rep.nonempty_support().collect();
    if support.len() > SUPPORT_CAP {
        return Err(Error::TooManyVariables {
            n: support.len(),
            cap: SUPPORT_CAP,
        });
    }
    let bar = |s: Subset| -> i128 {
        rep.coeff(s)
            .scaled_numerator(ell)
            .to_i128()
            .expect("canonical phases are below 2^(l+1)")
    };
    let bars: Vec<i128> = support.iter().map(|&s| bar(s)).collect();
    let total = bar(0) + bars.iter().sum::<i128>();
    let unit = 1i128 << (ell + 1);
    // Canonical phases are nonnegative, so this is an ordinary ceiling.
    let k = (total + unit - 1).div_euclid(unit);
    Ok(AtomData {
        k,
        support,
        bars,
        constant: k * unit - total,
    })
}

/// `V` at every input of `{0,1}^n`.
fn v_values(data: &AtomData, n: usize) -> Vec<i128> {
    (0..1usize << n)
        .map(|m| {
            let odd: i128 = data
                .support
                .iter()
                .zip(&data.bars)
                .filter(|(&s, _)| (s & m as Subset).count_ones() % 2 == 1)
                .map(|(_, b)| b)
                .sum();
            2 * odd + data.constant
        })
        .collect()
}

fn atom_polynomials(
    rep: &PeriodicRepresentation,
    weight: f64,
    ell: u32,
) -> Result<AtomPolynomials> {
    let n = rep.n();
    let data = atom_data(rep, ell)?;
    let t = data.support.len();
    let mut b_anfs = Vec::with_capacity(ell as usize + 1);
    let mut parity_degrees = Vec::with_capacity(ell as usize + 1);
    for i in 0..=ell {
        let mut table: Vec<bool> = (0..1usize << t)
            .map(|b| {
                let sum: i128 = (0..t)
                    .filter(|j| b >> j & 1 == 1)
                    .map(|j| data.bars[j])
                    .sum();
                (2 * sum + data.constant) >> i & 1 == 1
            })
            .collect();
        moebius_gf2(&mut table);
        parity_degrees.push(
            table
                .iter()
                .enumerate()
                .filter(|(_, &c)| c)
                .map(|(m, _)| m.count_ones() as usize)
                .max()
                .unwrap_or(0),
        );
        b_anfs.push(table);
    }
    let dense = substitute_parities(&b_anfs, &data.support, n);
    let ys: Vec<AnfPolynomial> = dense.iter().map(|d| dense_to_anf(n, d)).collect();
    debug_assert_eq!(ys, direct_ys(rep, ell).expect("same preconditions"));
    Ok(AtomPolynomials {
        weight,
        ell,
        k: data.k,
        ys,
        parity_degrees,
    })
}

/// `y_0 .. y_ell` by Möbius transform of their truth tables over `x`.
pub fn direct_ys(rep: &PeriodicRepresentation, ell: u32) -> Result<Vec<AnfPolynomial>> {
    let n = rep.n();
    let data = atom_data(rep, ell)?;
    let values = v_values(&data, n);
    (0..=ell)
        .map(|i| {
            let f = BooleanFunction::from_truth_table(
                n,
                values.iter().map(|v| v >> i & 1 == 1).collect(),
            )?;
            AnfPolynomial::moebius(&f)
        })
        .collect()
}

/// Threshold polynomials `[|v - 2^l| <= d]` with weights
/// `g(d) - g(d + 1)`, `g(d) = (1 + cos(pi d / 2^l)) / 2`.
fn threshold_mixture(atom: &AtomPolynomials, n: usize) -> Result<Vec<(f64, AnfPolynomial)>> {
    let ell = atom.ell;
    let half = 1i64 << ell;
    let tables: Vec<BooleanFunction> = atom.ys.iter().map(AnfPolynomial::to_function).collect();
    let v: Vec<i64> = (0..1usize << n)
        .map(|m| {
            tables
                .iter()
                .enumerate()
                .map(|(i, y)| i64::from(y.value(m)) << i)
                .sum()
        })
        .collect();
    let g = |d: i64| (1.0 + (PI * d as f64 / half as f64).cos()) / 2.0;
    let mut out = Vec::new();
    for d in 0..half {
        let w = atom.weight * (g(d) - g(d + 1));
        if w <= 0.0 {
            continue;
        }
        let f = BooleanFunction::from_truth_table(
            n,
            v.iter().map(|&x| (x - half).abs() <= d).collect(),
        )?;
        let p = AnfPolynomial::moebius(&f)?;
        match out
            .iter_mut()
            .find(|(_, q): &&mut (f64, AnfPolynomial)| *q == p)
        {
            Some((acc, _)) => *acc += w,
            None => out.push((w, p)),
        }
    }
    Ok(out)
}

/// Probabilistic polynomial of a family whose phases have at most `l`
/// binary digits, `l` being the largest digit count over the atoms.
pub fn theorem3_polynomial(family: &RandomizedPhaseFamily) -> Result<ProbabilisticPolynomial> {
    let ell = family
        .atoms
        .iter()
        .map(|a| a.rep.canonical().digits())
        .max()
        .unwrap_or(0);
    theorem3_polynomial_with(family, ell)
}

pub fn theorem3_polynomial_with(
    family: &RandomizedPhaseFamily,
    ell: u32,
) -> Result<ProbabilisticPolynomial> {
    let n = family.n;
    let mut atoms = Vec::with_capacity(family.atoms.len());
    let mut terms = Vec::new();
    for a in &family.atoms {
        let atom = atom_polynomials(&a.rep, a.weight, ell)?;
        terms.extend(threshold_mixture(&atom, n)?);
        atoms.push(atom);
    }
    Ok(ProbabilisticPolynomial { n, terms, atoms })
}

/// Single-representation convenience wrapper.
pub fn theorem3_for_rep(rep: &PeriodicRepresentation) -> Result<ProbabilisticPolynomial> {
    theorem3_polynomial(&RandomizedPhaseFamily::single(rep.clone()))
}

/// `max_x Pr[p(x) ≠ f(x)]`.
pub fn polynomial_error(pp: &ProbabilisticPolynomial, f: &BooleanFunction) -> Result<f64> {
    if f.n() != pp.n {
        return Err(Error::VariableCountMismatch(pp.n, f.n()));
    }
    // Sum the weights of disagreeing polynomials so exact agreement gives exactly 0.
    let mut wrong = vec![0.0; f.len()];
    for (w, p) in &pp.terms {
        for (acc, (bit, target)) in wrong
            .iter_mut()
            .zip(p.to_function().table().iter().zip(f.table()))
        {
            if bit != target {
                *acc += w;
            }
        }
    }
    Ok(wrong.into_iter().fold(0.0, f64::max))
}
