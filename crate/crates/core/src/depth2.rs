//! Depth-2 protocols for symmetric functions.
//!
//! Layer 1 of a block for target weight `k` measures, for each
//! `j = 0..=m` with `m = floor(log2 n)`, a GHZ state of `n` qubits whose
//! outcome `Z_j` has mean `cos(pi (|x| - k) / 2^j)`. If `|x| = k` every `Z_j`
//! is `+1`; otherwise `Z_a = -1` with certainty where `2^a` is the largest
//! power of two dividing `|x| - k`. Layer 2 computes the OR of the `m + 1`
//! outcome bits, which is therefore `NOT Exact_k(x)` on every branch.
//! A final affine stage XORs block outputs with a constant.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::boolean::{BooleanFunction, Subset, SymmetricProfile};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::nmqc::{protocol_from_rep, NmqcProtocol, Phase};
use crate::periodic::from_fourier;

/// One `Exact_k` detector: layer-1 measurements and the layer-2 OR.
#[derive(Clone, Debug)]
pub struct Layer1Block {
    pub offset: usize,
    /// `layer1[j]` produces `Z_j`.
    pub layer1: Vec<NmqcProtocol>,
}

/// Whether blocks detect accepted weights or rejected ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockMode {
    Accept,
    Complement,
}

#[derive(Clone, Debug)]
pub struct Depth2Protocol {
    n: usize,
    mode: BlockMode,
    blocks: Vec<Layer1Block>,
    /// OR of the `m + 1` layer-1 bits of one block.
    layer2: NmqcProtocol,
    /// Constant XORed into the parity of the block outputs.
    final_constant: bool,
}

/// `floor(log2 n)` for `n >= 1`.
fn log_floor(n: usize) -> usize {
    n.ilog2() as usize
}

/// Per-block qubit count `(m + 1) n + 2^{m+1} - 1`.
pub fn block_qubits(n: usize) -> usize {
    let m = log_floor(n);
    (m + 1) * n + (1 << (m + 1)) - 1
}

/// `Z_j` for target weight `offset`: phases `(n - 2 offset) / 2^{j+1}` and
/// `-1 / 2^{j+1}` on each singleton parity.
fn exact_measurement(n: usize, offset: usize, j: usize) -> Result<NmqcProtocol> {
    let den = j as u32 + 1;
    let phi0 = Dyadic::new(n as i64 - 2 * offset as i64, den);
    let phi = Dyadic::new(-1, den);
    let phases = std::iter::once(phi0)
        .chain(std::iter::repeat_n(phi, n))
        .map(Phase::Dyadic)
        .collect();
    NmqcProtocol::new(n, (0..n).map(|i| 1 << i).collect(), phases)
}

fn build_block(n: usize, offset: usize) -> Result<Layer1Block> {
    let layer1 = (0..=log_floor(n))
        .map(|j| exact_measurement(n, offset, j))
        .collect::<Result<_>>()?;
    Ok(Layer1Block { offset, layer1 })
}

/// Depth-2 protocol for a symmetric function. Blocks are built for the
/// accepted weights, or for the rejected ones when that set is strictly
/// smaller (so `OR_n` needs a single block at weight 0).
pub fn build_symmetric(profile: &SymmetricProfile) -> Result<Depth2Protocol> {
    let n = profile.n;
    if n == 0 {
        return Err(Error::Parameter("depth-2 construction needs n >= 1".into()));
    }
    let accept: Vec<usize> = (0..=n).filter(|&w| profile.accepts(w)).collect();
    let reject: Vec<usize> = (0..=n).filter(|&w| !profile.accepts(w)).collect();
    let (mode, weights) = if reject.len() < accept.len() {
        (BlockMode::Complement, reject)
    } else {
        (BlockMode::Accept, accept)
    };
    // Exact_k = 1 xor OR_k, summed over the chosen weights.
    let final_constant = (weights.len() % 2 == 1) ^ (mode == BlockMode::Complement);
    let blocks = weights
        .into_iter()
        .map(|k| build_block(n, k))
        .collect::<Result<_>>()?;
    let or = BooleanFunction::from_weight_fn(log_floor(n) + 1, |w| w > 0)?;
    let layer2 = protocol_from_rep(&from_fourier(&or)?)?;
    Ok(Depth2Protocol {
        n,
        mode,
        blocks,
        layer2,
        final_constant,
    })
}

/// Depth-2 protocol for `f`, which must be symmetric.
pub fn build_for_function(f: &BooleanFunction) -> Result<Depth2Protocol> {
    build_symmetric(&f.symmetric_profile().ok_or(Error::NotSymmetric)?)
}

/// Layer-1 outcomes of one block: `Some(bit)` when forced, `None` when both
/// outcomes have positive probability.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockSupport {
    pub offset: usize,
    pub outcomes: Vec<Option<bool>>,
    /// Layer-2 outputs over every outcome vector in the support.
    pub or_outputs: BTreeSet<bool>,
}

impl BlockSupport {
    /// Every outcome vector with positive probability.
    pub fn vectors(&self) -> Vec<Vec<bool>> {
        let mut out = vec![Vec::new()];
        for o in &self.outcomes {
            let choices: &[bool] = match o {
                Some(true) => &[true],
                Some(false) => &[false],
                None => &[false, true],
            };
            out = out
                .into_iter()
                .flat_map(|v| {
                    choices.iter().map(move |&c| {
                        let mut v = v.clone();
                        v.push(c);
                        v
                    })
                })
                .collect();
        }
        out
    }
}

/// Exact support of one run. The joint layer-1 support is the product of
/// the block supports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportReport {
    pub blocks: Vec<BlockSupport>,
    /// Final bits over the whole support.
    pub outputs: BTreeSet<bool>,
}

impl SupportReport {
    pub fn support_size(&self) -> usize {
        self.blocks
            .iter()
            .map(|b| 1usize << b.outcomes.iter().filter(|o| o.is_none()).count())
            .product()
    }
}

impl Depth2Protocol {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> BlockMode {
        self.mode
    }

    pub fn blocks(&self) -> &[Layer1Block] {
        &self.blocks
    }

    pub fn layer2(&self) -> &NmqcProtocol {
        &self.layer2
    }

    pub fn final_constant(&self) -> bool {
        self.final_constant
    }

    /// Qubits used by all layers, counted from the protocols themselves.
    pub fn qubit_count(&self) -> usize {
        self.blocks
            .iter()
            .map(|b| {
                b.layer1.iter().map(NmqcProtocol::qubits).sum::<usize>() + self.layer2.qubits()
            })
            .sum()
    }

    /// Layer-2 parities only read layer-1 outcome bits.
    pub fn is_separable(&self) -> bool {
        let width = log_floor(self.n) + 1;
        self.layer2.n == width
            && self
                .layer2
                .parity_sets
                .iter()
                .all(|&s| u64::from(s) >> width == 0)
    }

    fn block_support(&self, block: &Layer1Block, index: usize) -> Result<BlockSupport> {
        let outcomes: Vec<Option<bool>> = block
            .layer1
            .iter()
            .map(|z| z.simulate_index(index).bit())
            .collect();
        let mut support = BlockSupport {
            offset: block.offset,
            outcomes,
            or_outputs: BTreeSet::new(),
        };
        for v in support.vectors() {
            let out = self.layer2.simulate(&v)?;
            match out.bit() {
                Some(b) => {
                    support.or_outputs.insert(b);
                }
                None => return Err(Error::NotExact { input: index }),
            }
        }
        Ok(support)
    }

    /// Enumerates the layer-1 support and the final outputs at `x`.
    pub fn simulate_support(&self, x: &[bool]) -> Result<SupportReport> {
        if x.len() != self.n {
            return Err(Error::Arity {
                expected: self.n,
                got: x.len(),
            });
        }
        self.simulate_support_index(crate::boolean::bits_to_index(x))
    }

    pub fn simulate_support_index(&self, index: usize) -> Result<SupportReport> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| self.block_support(b, index))
            .collect::<Result<Vec<_>>>()?;
        // XOR-sumset of the block outputs.
        let mut outputs = BTreeSet::from([self.final_constant]);
        for b in &blocks {
            outputs = outputs
                .iter()
                .flat_map(|&acc| b.or_outputs.iter().map(move |&o| acc ^ o))
                .collect();
        }
        Ok(SupportReport { blocks, outputs })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Depth2Verification {
    pub ok: bool,
    /// First input whose outputs are not exactly `{f(x)}`.
    pub witness: Option<Vec<u8>>,
    pub qubits: usize,
    pub blocks: usize,
    pub mode: BlockMode,
}

pub fn verify_depth2(p: &Depth2Protocol, f: &BooleanFunction) -> Result<Depth2Verification> {
    if f.n() != p.n {
        return Err(Error::VariableCountMismatch(p.n, f.n()));
    }
    let mut witness = None;
    for m in 0..f.len() {
        let report = p.simulate_support_index(m)?;
        if report.outputs != BTreeSet::from([f.value(m)]) {
            witness = Some((0..p.n).map(|i| (m >> i & 1) as u8).collect());
            break;
        }
    }
    Ok(Depth2Verification {
        ok: witness.is_none(),
        witness,
        qubits: p.qubit_count(),
        blocks: p.blocks.len(),
        mode: p.mode,
    })
}

/// Layer-1 parity sets of a block, for inspection.
pub fn layer1_sets(block: &Layer1Block) -> Vec<Vec<Subset>> {
    block.layer1.iter().map(|z| z.parity_sets.clone()).collect()
}
