//! Low-weight codewords of the dual of a code, found by matching column
//! syndromes of its generator rather than by traversing the dual.
//!
//! A vector c lies in the dual iff Σ c_i·g_i = 0, where g_i is column i of
//! the generator. Each column fits in one u64 (two 32-bit planes), so
//! weight-w dual codewords are w columns whose scaled sum vanishes. Weight 4
//! is a sort-join of pair sums keyed up to sign.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{Block, IncidenceStructure};
use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::gf::{trit_mul, Trit};

/// Largest generator dimension whose columns pack into a single syndrome word.
const MAX_SYNDROME_DIM: usize = 32;

/// A dual codeword class {c, 2c}: its support and the coefficients on it,
/// normalised so the first is 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct DualCodeword {
    pub support: Block,
    pub coeffs: Vec<Trit>,
}

/// Every dual codeword class of weight 1..=w_max.
#[derive(Clone, Debug)]
pub struct LowWeightDual {
    length: usize,
    by_weight: Vec<Vec<DualCodeword>>,
}

impl LowWeightDual {
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn max_weight(&self) -> usize {
        self.by_weight.len() - 1
    }

    /// Classes of weight w, sorted by support then coefficients.
    pub fn classes(&self, w: usize) -> &[DualCodeword] {
        self.by_weight.get(w).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Number of dual codewords (not classes) of weight w.
    pub fn codeword_count(&self, w: usize) -> u128 {
        2 * self.classes(w).len() as u128
    }

    /// The supports of the weight-w classes, one block per class.
    pub fn design(&self, w: usize) -> IncidenceStructure {
        let words = self.length.div_ceil(64);
        let sets = self
            .classes(w)
            .iter()
            .map(|cw| {
                let mut set = vec![0u64; words];
                for &p in cw.support.points() {
                    set[p / 64] |= 1 << (p % 64);
                }
                set
            })
            .collect();
        IncidenceStructure::from_bitsets(self.length, sets)
    }
}

#[inline]
fn s_neg(s: u64) -> u64 {
    s.rotate_left(32)
}

#[inline]
fn s_add(a: u64, b: u64) -> u64 {
    let (lo, hi) = crate::code::packed::add_word(a & 0xffff_ffff, a >> 32, b & 0xffff_ffff, b >> 32);
    lo | hi << 32
}

#[inline]
fn s_scale(c: Trit, s: u64) -> u64 {
    match c {
        0 => 0,
        1 => s,
        _ => s_neg(s),
    }
}

/// Sign-independent key: the same for s and -s.
#[inline]
fn s_key(s: u64) -> u64 {
    s.min(s_neg(s))
}

fn syndromes(code: &LinearCode) -> Result<Vec<u64>> {
    let g = code.generator();
    let k = g.nrows();
    if k > MAX_SYNDROME_DIM {
        return Err(Error::DimensionTooLarge {
            k,
            max: MAX_SYNDROME_DIM,
        });
    }
    let mut cols = vec![0u64; g.ncols()];
    for r in 0..k {
        let row = g.row(r);
        for (c, col) in cols.iter_mut().enumerate() {
            match row.get(c) {
                1 => *col |= 1 << r,
                2 => *col |= 1 << (r + 32),
                _ => {}
            }
        }
    }
    Ok(cols)
}

fn class(points: Vec<usize>, coeffs: Vec<Trit>) -> DualCodeword {
    DualCodeword {
        support: Block { points },
        coeffs,
    }
}

#[derive(Clone, Copy)]
struct PairSum {
    key: u64,
    sum: u64,
    a: u32,
    b: u32,
    cb: Trit,
}

/// Enumerates every dual codeword class of weight 1..=w_max (w_max <= 4).
pub fn enumerate_low_weight_dual_supports(code: &LinearCode, w_max: usize) -> Result<LowWeightDual> {
    if w_max > 4 {
        return Err(Error::invalid(format!("low-weight enumeration supports w_max <= 4, not {w_max}")));
    }
    let cols = syndromes(code)?;
    let len = cols.len();
    let mut by_weight = vec![Vec::new(); w_max + 1];

    if w_max >= 1 {
        by_weight[1] = (0..len).filter(|&i| cols[i] == 0).map(|i| class(vec![i], vec![1])).collect();
    }

    // Columns bucketed by sign-independent key, indices ascending.
    let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
    for (i, &c) in cols.iter().enumerate() {
        buckets.entry(s_key(c)).or_default().push(i);
    }

    if w_max >= 2 {
        let mut out = Vec::new();
        for idx in buckets.values() {
            for (j, &a) in idx.iter().enumerate() {
                for &b in &idx[j + 1..] {
                    for cb in 1..=2 {
                        if s_scale(cb, cols[b]) == s_neg(cols[a]) {
                            out.push(class(vec![a, b], vec![1, cb]));
                        }
                    }
                }
            }
        }
        out.sort();
        by_weight[2] = out;
    }

    if w_max >= 3 {
        let mut out: Vec<DualCodeword> = (0..len)
            .into_par_iter()
            .flat_map_iter(|a| {
                let mut found = Vec::new();
                for b in a + 1..len {
                    for cb in 1..=2 {
                        let s = s_add(cols[a], s_scale(cb, cols[b]));
                        let Some(idx) = buckets.get(&s_key(s)) else { continue };
                        let start = idx.partition_point(|&c| c <= b);
                        for &c in &idx[start..] {
                            for cc in 1..=2 {
                                if s_scale(cc, cols[c]) == s_neg(s) {
                                    found.push(class(vec![a, b, c], vec![1, cb, cc]));
                                }
                            }
                        }
                    }
                }
                found
            })
            .collect();
        out.sort();
        by_weight[3] = out;
    }

    if w_max >= 4 {
        let mut table: Vec<PairSum> = (0..len)
            .into_par_iter()
            .flat_map_iter(|a| {
                let cols = &cols;
                (a + 1..len).flat_map(move |b| {
                    (1..=2).map(move |cb| {
                        let sum = s_add(cols[a], s_scale(cb, cols[b]));
                        PairSum {
                            key: s_key(sum),
                            sum,
                            a: a as u32,
                            b: b as u32,
                            cb,
                        }
                    })
                })
            })
            .collect();
        table.par_sort_unstable_by_key(|p| (p.key, p.a, p.b, p.cb));
        let runs: Vec<&[PairSum]> = table.chunk_by(|x, y| x.key == y.key).filter(|r| r.len() > 1).collect();
        let mut out: Vec<DualCodeword> = runs
            .into_par_iter()
            .flat_map_iter(|run| {
                let mut found = Vec::new();
                for p in run {
                    for r in run {
                        // a < b < c < d, so each class arises from exactly one split
                        if p.b >= r.a {
                            continue;
                        }
                        for cc in 1..=2 {
                            if s_scale(cc, r.sum) == s_neg(p.sum) {
                                found.push(class(
                                    vec![p.a as usize, p.b as usize, r.a as usize, r.b as usize],
                                    vec![1, p.cb, cc, trit_mul(cc, r.cb)],
                                ));
                            }
                        }
                    }
                }
                found
            })
            .collect();
        out.sort();
        by_weight[4] = out;
    }

    Ok(LowWeightDual {
        length: len,
        by_weight,
    })
}
