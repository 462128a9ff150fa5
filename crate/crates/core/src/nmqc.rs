//! XOR games and single-layer measurement-based computation with a GHZ
//! resource and parity preprocessing.
//!
//! The quantum bias of a game at phases `phi_0..phi_k` is
//! `sum_z mu(z) h(z) cos(pi (phi_0 + sum_i phi_i z_i))`; GHZ states with
//! equatorial measurements achieve the maximum over all quantum strategies,
//! so this expression is taken as the definition.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boolean::{bits_to_index, subset_indices, BooleanFunction, Subset};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::periodic::PeriodicRepresentation;

/// Probability weights must sum to one within this tolerance.
pub const MU_TOLERANCE: f64 = 1e-12;

/// Largest player count for which the classical baseline is computed.
pub const CLASSICAL_CAP: usize = 12;

/// One question tuple of a game.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameEntry {
    pub z: Vec<i8>,
    pub h: i8,
    pub mu: f64,
}

/// A (possibly partial) XOR game: the referee draws `z` with probability
/// `mu`, and the players win when the product of their answers equals `h(z)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGame")]
pub struct XorGame {
    k: usize,
    entries: Vec<GameEntry>,
}

#[derive(Deserialize)]
struct RawGame {
    k: usize,
    entries: Vec<GameEntry>,
}

impl TryFrom<RawGame> for XorGame {
    type Error = Error;

    fn try_from(raw: RawGame) -> Result<Self> {
        XorGame::new(raw.k, raw.entries)
    }
}

impl XorGame {
    pub fn new(k: usize, entries: Vec<GameEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Malformed("game has no entries".into()));
        }
        let mut seen = BTreeSet::new();
        let mut total = 0.0;
        for e in &entries {
            if e.z.len() != k {
                return Err(Error::Arity {
                    expected: k,
                    got: e.z.len(),
                });
            }
            if e.z.iter().any(|&v| v != 1 && v != -1) || (e.h != 1 && e.h != -1) {
                return Err(Error::Malformed("questions and answers must be ±1".into()));
            }
            if !e.mu.is_finite() || e.mu < 0.0 {
                return Err(Error::Malformed(format!(
                    "weight {} is not a probability",
                    e.mu
                )));
            }
            if !seen.insert(&e.z) {
                return Err(Error::Malformed(format!(
                    "question {:?} appears twice",
                    e.z
                )));
            }
            total += e.mu;
        }
        if (total - 1.0).abs() > MU_TOLERANCE {
            return Err(Error::Malformed(format!("weights sum to {total}, not 1")));
        }
        Ok(XorGame { k, entries })
    }

    /// Uniform game over `{±1}^n` whose predicate is `f` in `±1` form.
    pub fn from_function(f: &BooleanFunction) -> Result<Self> {
        Self::from_function_on(f, |_| true)
    }

    /// Uniform game over the inputs accepted by `promise`.
    pub fn from_function_on(f: &BooleanFunction, promise: impl Fn(usize) -> bool) -> Result<Self> {
        let n = f.n();
        let support: Vec<usize> = (0..f.len()).filter(|&m| promise(m)).collect();
        if support.is_empty() {
            return Err(Error::Malformed("promise set is empty".into()));
        }
        let mu = 1.0 / support.len() as f64;
        let entries = support
            .into_iter()
            .map(|m| GameEntry {
                z: (0..n)
                    .map(|i| if m >> i & 1 == 1 { -1 } else { 1 })
                    .collect(),
                h: f.sign(m),
                mu,
            })
            .collect();
        Self::new(n, entries)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &[GameEntry] {
        &self.entries
    }
}

/// Bias at the given phases `[phi_0, phi_1, ..., phi_k]`.
pub fn quantum_bias(game: &XorGame, phases: &[f64]) -> Result<f64> {
    if phases.len() != game.k + 1 {
        return Err(Error::Arity {
            expected: game.k + 1,
            got: phases.len(),
        });
    }
    Ok(game
        .entries
        .iter()
        .map(|e| {
            let t = phases[0]
                + e.z
                    .iter()
                    .zip(&phases[1..])
                    .map(|(&z, &p)| f64::from(z) * p)
                    .sum::<f64>();
            e.mu * f64::from(e.h) * (PI * t).cos()
        })
        .sum())
}

/// Best bias of deterministic local strategies. Each strategy's answer
/// product is `±prod_{i in T} z_i`, so this is the largest `|sum mu h z^T|`.
pub fn classical_bias(game: &XorGame) -> Result<f64> {
    Ok(best_character(game)?.1)
}

/// The subset `T` and value of the best classical strategy.
fn best_character(game: &XorGame) -> Result<(Subset, f64)> {
    if game.k > CLASSICAL_CAP {
        return Err(Error::TooManyVariables {
            n: game.k,
            cap: CLASSICAL_CAP,
        });
    }
    let mut v = vec![0.0f64; 1 << game.k];
    for e in &game.entries {
        let index =
            e.z.iter()
                .enumerate()
                .fold(0, |acc, (i, &z)| acc | ((z < 0) as usize) << i);
        v[index] += e.mu * f64::from(e.h);
    }
    walsh_f64(&mut v);
    let mut best = (0, f64::NEG_INFINITY);
    for (t, x) in v.iter().enumerate() {
        if x.abs() > best.1 {
            best = (t as Subset, x.abs());
        }
    }
    Ok(best)
}

fn walsh_f64(v: &mut [f64]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// Exhaustive classical baseline over all `4^k` local strategies
/// (`a_i ∈ {+1, -1, z_i, -z_i}`).
pub fn classical_bias_exhaustive(game: &XorGame) -> Result<f64> {
    if game.k > CLASSICAL_CAP {
        return Err(Error::TooManyVariables {
            n: game.k,
            cap: CLASSICAL_CAP,
        });
    }
    let k = game.k;
    let best = (0u64..1 << (2 * k))
        .into_par_iter()
        .map(|code| {
            game.entries
                .iter()
                .map(|e| {
                    let answers: i8 = (0..k)
                        .map(|i| match code >> (2 * i) & 3 {
                            0 => 1,
                            1 => -1,
                            2 => e.z[i],
                            _ => -e.z[i],
                        })
                        .product();
                    e.mu * f64::from(e.h * answers)
                })
                .sum::<f64>()
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    Ok(best)
}

#[derive(Clone, Debug)]
pub struct OptimizerConfig {
    /// Random starting points in addition to the zero and classical starts.
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 32,
            max_iters: 500,
            tol: 1e-12,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BiasOptimum {
    /// `[phi_0, ..., phi_k]`, each reduced to `[0, 2)`.
    pub phases: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
}

/// Coordinate ascent from one start. Along coordinate `j` the bias has the
/// form `A cos(pi p) - B sin(pi p)`, maximized in closed form, so every step
/// is an exact line maximum and the bias never decreases.
fn ascend(game: &XorGame, mut phases: Vec<f64>, config: &OptimizerConfig) -> BiasOptimum {
    let k = game.k;
    let weights: Vec<f64> = game.entries.iter().map(|e| e.mu * f64::from(e.h)).collect();
    let mut totals: Vec<f64> = game
        .entries
        .iter()
        .map(|e| {
            phases[0]
                + e.z
                    .iter()
                    .zip(&phases[1..])
                    .map(|(&z, &p)| f64::from(z) * p)
                    .sum::<f64>()
        })
        .collect();
    let bias_of = |totals: &[f64]| -> f64 {
        weights
            .iter()
            .zip(totals)
            .map(|(w, t)| w * (PI * t).cos())
            .sum()
    };
    let mut bias = bias_of(&totals);
    let mut iterations = 0;
    while iterations < config.max_iters {
        iterations += 1;
        let before = bias;
        #[allow(clippy::needless_range_loop)]
        for j in 0..=k {
            let coef = |e: &GameEntry| if j == 0 { 1.0 } else { f64::from(e.z[j - 1]) };
            let (mut a, mut b) = (0.0, 0.0);
            for ((e, w), t) in game.entries.iter().zip(&weights).zip(&totals) {
                let c = coef(e);
                let rest = t - c * phases[j];
                a += w * (PI * rest).cos();
                b += w * c * (PI * rest).sin();
            }
            let p = (-b).atan2(a) / PI;
            let candidate = a.hypot(b);
            if candidate > bias {
                for (e, t) in game.entries.iter().zip(totals.iter_mut()) {
                    *t += coef(e) * (p - phases[j]);
                }
                phases[j] = p;
                bias = bias_of(&totals).max(bias);
            }
        }
        if bias - before < config.tol {
            break;
        }
    }
    for p in &mut phases {
        *p = p.rem_euclid(2.0);
    }
    // Report the bias of the returned phases themselves.
    let bias = quantum_bias(game, &phases).unwrap_or(bias);
    BiasOptimum {
        phases,
        bias,
        iterations,
    }
}

/// Multi-start maximization of the quantum bias. Starts are the zero phases,
/// the best classical strategy, and `restarts` seeded random points; the
/// result is therefore never below the classical bias (up to rounding).
pub fn optimize_bias(game: &XorGame, config: &OptimizerConfig) -> BiasOptimum {
    let k = game.k;
    let mut starts = vec![vec![0.0; k + 1]];
    if let Ok((t, _)) = best_character(game) {
        let mut phases = vec![0.0; k + 1];
        for i in subset_indices(t) {
            phases[i] = 0.5;
        }
        phases[0] = -(t.count_ones() as f64) / 2.0;
        starts.push(phases.clone());
        phases[0] += 1.0;
        starts.push(phases);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    starts.extend((0..config.restarts).map(|_| (0..=k).map(|_| rng.gen_range(0.0..2.0)).collect()));
    let results: Vec<BiasOptimum> = starts
        .into_par_iter()
        .map(|s| ascend(game, s, config))
        .collect();
    results
        .into_iter()
        .reduce(|best, r| if r.bias > best.bias { r } else { best })
        .expect("at least one start")
}

/// A measurement angle, exact when dyadic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Phase {
    Dyadic(Dyadic),
    Float(f64),
}

impl Phase {
    pub fn to_f64(&self) -> f64 {
        match self {
            Phase::Dyadic(d) => d.to_f64_mod2(),
            Phase::Float(x) => *x,
        }
    }

    pub fn as_dyadic(&self) -> Option<&Dyadic> {
        match self {
            Phase::Dyadic(d) => Some(d),
            Phase::Float(_) => None,
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phase::Dyadic(d) => write!(f, "{d}"),
            Phase::Float(x) => write!(f, "{x}"),
        }
    }
}

impl From<Dyadic> for Phase {
    fn from(d: Dyadic) -> Self {
        Phase::Dyadic(d)
    }
}

impl From<f64> for Phase {
    fn from(x: f64) -> Self {
        Phase::Float(x)
    }
}

/// Converts phases written against the bit variables,
/// `phi_0 + sum_i phi_i (1 - z_i) / 2`, to the `±1` form
/// `phi_0 + sum_i phi_i / 2 - sum_i (phi_i / 2) z_i`.
pub fn bit_to_z_form(phi0: &Phase, phis: &[Phase]) -> Vec<Phase> {
    let exact: Option<Vec<&Dyadic>> = std::iter::once(phi0)
        .chain(phis)
        .map(Phase::as_dyadic)
        .collect();
    match exact {
        Some(ds) => {
            let halves: Vec<Dyadic> = ds[1..].iter().map(|d| d.scale_pow2(-1)).collect();
            let constant = ds[0].clone() + halves.iter().cloned().sum::<Dyadic>();
            std::iter::once(constant)
                .chain(halves.into_iter().map(|h| -h))
                .map(Phase::Dyadic)
                .collect()
        }
        None => {
            let halves: Vec<f64> = phis.iter().map(|p| p.to_f64() / 2.0).collect();
            let constant = phi0.to_f64() + halves.iter().sum::<f64>();
            std::iter::once(constant)
                .chain(halves.into_iter().map(|h| -h))
                .map(Phase::Float)
                .collect()
        }
    }
}

/// Single-layer protocol: qubit `i` measures at phase `phases[i]` after
/// receiving the parity of `x` over `parity_sets[i - 1]`; `phases[0]` is the
/// global offset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NmqcProtocol {
    pub n: usize,
    pub parity_sets: Vec<Subset>,
    pub phases: Vec<Phase>,
}

/// Distribution of the output bit on one input.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OutputDistribution {
    pub p_one: f64,
    pub deterministic: bool,
}

impl OutputDistribution {
    pub fn bit(&self) -> Option<bool> {
        self.deterministic.then_some(self.p_one > 0.5)
    }
}

impl NmqcProtocol {
    pub fn new(n: usize, parity_sets: Vec<Subset>, phases: Vec<Phase>) -> Result<Self> {
        if phases.len() != parity_sets.len() + 1 {
            return Err(Error::Arity {
                expected: parity_sets.len() + 1,
                got: phases.len(),
            });
        }
        if let Some(s) = parity_sets.iter().find(|&&s| u64::from(s) >> n != 0) {
            return Err(Error::Parameter(format!(
                "parity set {:?} is not contained in [{n}]",
                subset_indices(*s)
            )));
        }
        Ok(NmqcProtocol {
            n,
            parity_sets,
            phases,
        })
    }

    pub fn qubits(&self) -> usize {
        self.parity_sets.len()
    }

    fn is_dyadic(&self) -> bool {
        self.phases.iter().all(|p| p.as_dyadic().is_some())
    }

    /// Output distribution at the `{0,1}` input with table index `index`.
    pub fn simulate_index(&self, index: usize) -> OutputDistribution {
        let sign = |s: Subset| {
            if (s & index as Subset).count_ones().is_multiple_of(2) {
                1
            } else {
                -1
            }
        };
        if self.is_dyadic() {
            let mut t = self.phases[0].as_dyadic().cloned().unwrap_or_default();
            for (s, p) in self.parity_sets.iter().zip(&self.phases[1..]) {
                let d = p.as_dyadic().cloned().unwrap_or_default();
                if sign(*s) == 1 {
                    t += d;
                } else {
                    t -= d;
                }
            }
            if let Some(parity) = t.integer_parity() {
                return OutputDistribution {
                    p_one: f64::from(parity),
                    deterministic: true,
                };
            }
            return float_distribution(t.to_f64_mod2());
        }
        let t = self.phases[0].to_f64()
            + self
                .parity_sets
                .iter()
                .zip(&self.phases[1..])
                .map(|(s, p)| f64::from(sign(*s)) * p.to_f64())
                .sum::<f64>();
        float_distribution(t)
    }

    pub fn simulate(&self, x: &[bool]) -> Result<OutputDistribution> {
        if x.len() != self.n {
            return Err(Error::Arity {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(self.simulate_index(bits_to_index(x)))
    }

    /// The function computed, if the protocol is deterministic everywhere.
    pub fn function(&self) -> Result<BooleanFunction> {
        let mut table = Vec::with_capacity(1 << self.n);
        for m in 0..1usize << self.n {
            match self.simulate_index(m).bit() {
                Some(b) => table.push(b),
                None => return Err(Error::NotExact { input: m }),
            }
        }
        BooleanFunction::from_truth_table(self.n, table)
    }
}

fn float_distribution(t: f64) -> OutputDistribution {
    let p_one = ((1.0 - (PI * t).cos()) / 2.0).clamp(0.0, 1.0);
    let deterministic = !(MU_TOLERANCE..=1.0 - MU_TOLERANCE).contains(&p_one);
    OutputDistribution {
        p_one,
        deterministic,
    }
}

/// `simulate` as a free function.
pub fn simulate(protocol: &NmqcProtocol, x: &[bool]) -> Result<OutputDistribution> {
    protocol.simulate(x)
}

/// Protocol with one qubit per nonempty monomial of the canonical form.
pub fn protocol_from_rep(rep: &PeriodicRepresentation) -> Result<NmqcProtocol> {
    rep.function()?;
    let rep = rep.canonical();
    let parity_sets: Vec<Subset> = rep.nonempty_support().collect();
    let phases = std::iter::once(rep.coeff(0))
        .chain(parity_sets.iter().map(|&s| rep.coeff(s)))
        .map(Phase::Dyadic)
        .collect();
    NmqcProtocol::new(rep.n(), parity_sets, phases)
}

/// The promise game `P^k_n` together with its perfect protocol.
#[derive(Clone, Debug)]
pub struct PromiseGame {
    pub game: XorGame,
    /// Phases `cos(pi / k * sum_i (1 - z_i) / 2)` in `±1` form.
    pub protocol: NmqcProtocol,
    /// Present when `k` is a power of two, so the phases are dyadic.
    pub representation: Option<PeriodicRepresentation>,
}

/// `P^k_n`: inputs of Hamming weight `≡ 0` or `≡ k (mod 2k)`, uniform on the
/// promise, answer `+1` on `0 (mod 2k)` and `-1` on `k (mod 2k)`.
pub fn promise_mod_game(k: usize, n: usize) -> Result<PromiseGame> {
    if k < 2 || n < k {
        return Err(Error::Parameter(format!(
            "promise game needs 2 <= k <= n, got k={k}, n={n}"
        )));
    }
    let f = BooleanFunction::from_weight_fn(n, |w| w % (2 * k) == k)?;
    let game = XorGame::from_function_on(&f, |m| {
        let w = m.count_ones() as usize % (2 * k);
        w == 0 || w == k
    })?;
    let parity_sets: Vec<Subset> = (0..n).map(|i| 1 << i).collect();
    let (phases, representation) = if k.is_power_of_two() {
        let den = k.trailing_zeros() + 1;
        let phi0 = Dyadic::new(n as i64, den);
        let phi = Dyadic::new(-1, den);
        let rep = PeriodicRepresentation::new(
            n,
            std::iter::once((0, phi0.clone())).chain(parity_sets.iter().map(|&s| (s, phi.clone()))),
        )?;
        let phases = std::iter::once(phi0)
            .chain(std::iter::repeat_n(phi, n))
            .map(Phase::Dyadic)
            .collect();
        (phases, Some(rep))
    } else {
        let phi0 = n as f64 / (2 * k) as f64;
        let phi = -1.0 / (2 * k) as f64;
        let phases = std::iter::once(phi0)
            .chain(std::iter::repeat_n(phi, n))
            .map(Phase::Float)
            .collect();
        (phases, None)
    };
    let protocol = NmqcProtocol::new(n, parity_sets, phases)?;
    Ok(PromiseGame {
        game,
        protocol,
        representation,
    })
}

/// The three distributive identities for low-degree functions of parities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistributiveIdentity {
    /// `AND_2(⊕x, ⊕y) = CQ_2n(x, y) ⊕ CQ_n(x) ⊕ CQ_n(y)`.
    And2 { n: usize },
    /// `Maj_3(⊕x, ⊕y, ⊕z) = CQ_2n(x, y) ⊕ CQ_2n(y, z) ⊕ CQ_2n(z, x)`.
    Maj3 { n: usize },
    /// `CQ_m(⊕x_1, .., ⊕x_m) = CQ_nm(x) ⊕ (⊕_j CQ_n(x_j))`.
    Cq { m: usize, n: usize },
}

/// Largest total variable count for the brute-force identity check.
pub const IDENTITY_CAP: usize = 12;

impl DistributiveIdentity {
    pub fn parse(which: &str, m: Option<usize>, n: usize) -> Result<Self> {
        match which {
            "and2" => Ok(Self::And2 { n }),
            "maj3" => Ok(Self::Maj3 { n }),
            "cqm" => Ok(Self::Cq {
                m: m.ok_or_else(|| Error::Parameter("cqm needs m".into()))?,
                n,
            }),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }

    /// Number of blocks and block size.
    fn shape(&self) -> (usize, usize) {
        match *self {
            Self::And2 { n } => (2, n),
            Self::Maj3 { n } => (3, n),
            Self::Cq { m, n } => (m, n),
        }
    }
}

fn cq_weight(w: usize) -> bool {
    (w * w.saturating_sub(1) / 2) % 2 == 1
}

/// Brute-force check of an identity at every assignment.
pub fn check_distributive_identity(which: DistributiveIdentity) -> Result<bool> {
    let (blocks, n) = which.shape();
    if n == 0 || blocks == 0 {
        return Err(Error::Parameter(
            "identity needs positive block sizes".into(),
        ));
    }
    let total = blocks * n;
    if total > IDENTITY_CAP {
        return Err(Error::TooManyVariables {
            n: total,
            cap: IDENTITY_CAP,
        });
    }
    let block_mask: Subset = (1 << n) - 1;
    let sets: Vec<Subset> = (0..blocks).map(|j| block_mask << (j * n)).collect();
    let g = match which {
        DistributiveIdentity::And2 { .. } => BooleanFunction::from_weight_fn(2, |w| w == 2)?,
        DistributiveIdentity::Maj3 { .. } => BooleanFunction::from_weight_fn(3, |w| w >= 2)?,
        DistributiveIdentity::Cq { m, .. } => BooleanFunction::from_weight_fn(m, cq_weight)?,
    };
    let lhs = BooleanFunction::compose_parities(&g, &sets, total)?;
    let weight = |m: usize, s: Subset| (m as Subset & s).count_ones() as usize;
    let rhs = BooleanFunction::from_fn(total, |m| {
        let w: Vec<usize> = sets.iter().map(|&s| weight(m, s)).collect();
        match which {
            DistributiveIdentity::And2 { .. } => {
                cq_weight(w[0] + w[1]) ^ cq_weight(w[0]) ^ cq_weight(w[1])
            }
            DistributiveIdentity::Maj3 { .. } => {
                cq_weight(w[0] + w[1]) ^ cq_weight(w[1] + w[2]) ^ cq_weight(w[2] + w[0])
            }
            DistributiveIdentity::Cq { .. } => w
                .iter()
                .fold(cq_weight(w.iter().sum()), |acc, &wj| acc ^ cq_weight(wj)),
        }
    })?;
    Ok(lhs == rhs)
}
