//! Inputs shared by the benchmarks under `benches/`.

use pfs_core::{make_family, BooleanFunction};

/// Functions of `n` variables exercised at every size.
pub fn workload(n: usize) -> Vec<(String, BooleanFunction)> {
    let mut out = vec![
        (format!("cq:{n}"), make_family("cq", &[n]).unwrap()),
        (format!("mod:3:{n}"), make_family("mod", &[3, n]).unwrap()),
    ];
    if n % 2 == 1 {
        out.push((format!("maj:{n}"), make_family("maj", &[n]).unwrap()));
    }
    out
}

/// Eight-bit truth tables at `n = 3`, spread over the whole range.
pub fn small_tables() -> Vec<BooleanFunction> {
    [0x17u32, 0x69, 0x80, 0xe8, 0x96, 0x3c]
        .iter()
        .map(|&code| BooleanFunction::from_fn(3, |m| code >> m & 1 == 1).unwrap())
        .collect()
}
