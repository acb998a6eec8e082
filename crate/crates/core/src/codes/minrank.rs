//! Exhaustive GF(2) minrank of a side-information graph.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::codes::field::Field;
use crate::codes::matrix::GfMatrix;
use crate::error::{Error, Result};
use crate::transforms::SideInfoGraph;

pub const DEFAULT_ORACLE_MAX_EDGES: usize = 24;

/// Free entries taken as the high bits of the mask; each value of these
/// bits is one parallel work item.
const SPLIT_BITS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Minrank {
    pub value: usize,
    /// A matrix fitting the graph with rank `value`.
    pub witness: GfMatrix,
    pub free_entries: usize,
}

/// Rank over GF(2) of rows given as bitmasks.
fn rank_gf2(rows: &[u64]) -> usize {
    let mut basis = [0u64; 64];
    let mut rank = 0;
    for &row in rows {
        let mut x = row;
        while x != 0 {
            let lead = 63 - x.leading_zeros() as usize;
            if basis[lead] == 0 {
                basis[lead] = x;
                rank += 1;
                break;
            }
            x ^= basis[lead];
        }
    }
    rank
}

/// Minimum rank over all GF(2) matrices with unit diagonal, arbitrary
/// entries at the edges of the side-information graph and zeros elsewhere.
///
/// All `2^|E|` matrices are evaluated, split across threads by the high
/// bits of the free-entry mask and walked in Gray-code order within a
/// chunk so consecutive matrices differ in one entry.
pub fn minrank_oracle(si: &SideInfoGraph, q: u32, max_edges: usize) -> Result<Minrank> {
    if q != 2 {
        return Err(Error::UnsupportedField(q));
    }
    let n = si.graph.vertex_count();
    if n > 64 {
        return Err(Error::InvalidArgument(format!("oracle supports at most 64 messages, got {n}")));
    }
    let free: Vec<(usize, usize)> = si
        .graph
        .edges()
        .iter()
        .copied()
        .filter(|(t, h)| t != h)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let limit = max_edges.min(63);
    if free.len() > limit {
        return Err(Error::TooLarge {
            edges: free.len(),
            limit,
        });
    }
    let base: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
    let apply = |rows: &mut [u64], mask: u64| {
        for (b, &(i, j)) in free.iter().enumerate() {
            if mask >> b & 1 == 1 {
                rows[i] ^= 1 << j;
            }
        }
    };

    let split = free.len().min(SPLIT_BITS);
    let low = free.len() - split;
    let (value, mask) = (0..1u64 << split)
        .into_par_iter()
        .map(|hi| {
            let mut rows = base.clone();
            let start = hi << low;
            apply(&mut rows, start);
            let mut best = (rank_gf2(&rows), start);
            let mut gray = 0u64;
            for step in 1..1u64 << low {
                let bit = step.trailing_zeros() as usize;
                gray ^= 1 << bit;
                let (i, j) = free[bit];
                rows[i] ^= 1 << j;
                let r = rank_gf2(&rows);
                if r < best.0 {
                    best = (r, start | gray);
                }
            }
            best
        })
        .min()
        .unwrap_or((0, 0));

    let mut rows = base;
    apply(&mut rows, mask);
    let f = Field::get(2)?;
    let mut witness = GfMatrix::zeros(f, 0, n);
    for &r in &rows {
        let row: Vec<u8> = (0..n).map(|c| (r >> c & 1) as u8).collect();
        witness.push_row(&row)?;
    }
    debug_assert_eq!(witness.rank(), value);
    Ok(Minrank {
        value,
        witness,
        free_entries: free.len(),
    })
}
