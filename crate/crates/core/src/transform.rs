//! In-place butterflies shared by the spectral modules.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::boolean::Subset;
use crate::dyadic::Dyadic;

/// Unnormalized Walsh-Hadamard butterfly: `out[s] = sum_m (-1)^{|s & m|} in[m]`.
/// The transform is its own inverse up to a factor `2^n`.
pub fn walsh_i64(v: &mut [i64]) {
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

pub fn walsh_bigint(v: &mut [BigInt]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let diff = &*a - &*b;
                *a += &*b;
                *b = diff;
            }
        }
        h *= 2;
    }
}

/// Subset-XOR (Möbius over GF(2)) butterfly: `out[s] = xor_{m ⊆ s} in[m]`.
/// It is an involution.
pub fn moebius_gf2(v: &mut [bool]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter().zip(hi.iter_mut()) {
                *b ^= *a;
            }
        }
        h *= 2;
    }
}

/// Superset-sum butterfly: `out[s] = sum_{t ⊇ s} in[t]`.
pub fn superset_sum_i128(v: &mut [i128]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a += *b;
            }
        }
        h *= 2;
    }
}

/// Evaluates the multilinear polynomial `sum_S c_S prod_{i in S} x_i` at every
/// `±1` point of `{±1}^n`, indexed by the `{0,1}` encoding of the point.
pub fn eval_multilinear_all(coeffs: &BTreeMap<Subset, Dyadic>, n: usize) -> Vec<Dyadic> {
    let den = coeffs.values().map(Dyadic::den_pow).max().unwrap_or(0);
    let mut v = vec![BigInt::zero(); 1 << n];
    for (&s, c) in coeffs {
        v[s as usize] += c.scaled_numerator(den);
    }
    walsh_bigint(&mut v);
    v.into_iter().map(|num| Dyadic::new(num, den)).collect()
}
