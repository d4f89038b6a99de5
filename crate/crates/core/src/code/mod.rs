//! Ternary linear codes built from trace evaluations over the squares of GF(3^n).

mod exact;
pub(crate) mod packed;
mod weights;

use std::fmt;
use std::io::{BufRead, Write};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use exact::{
    binomial, pless_consistency, predicted_a4_dual, predicted_shortened_welch,
    predicted_min_weight_lambda, predicted_weights_welch, printed_min_weight_lambda, shortened_wd_transfer,
    PlessReport,
};
pub use packed::{iter_bits, EchelonBasis, TernaryMatrix, TernaryVector};
pub use weights::{for_each_codeword, weight_distribution, WeightDistribution, MAX_EXHAUSTIVE_DIM};

use crate::error::{Error, Result};
use crate::gf::{Field, Trit};

/// Where a code came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeFamily {
    /// tr(a·x + b·x^d) over x = α^{2i}
    Welch,
    /// tr(a·x + b·x^2) over x = α^{2i}
    Quadric,
    Shortened,
    Dual,
    /// Read back from a generator file.
    Imported,
}

impl fmt::Display for CodeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CodeFamily::Welch => "welch",
            CodeFamily::Quadric => "quadric",
            CodeFamily::Shortened => "shortened",
            CodeFamily::Dual => "dual",
            CodeFamily::Imported => "imported",
        };
        f.write_str(s)
    }
}

/// A linear code given by a full-rank generator matrix.
#[derive(Clone, Debug)]
pub struct LinearCode {
    gen: TernaryMatrix,
    family: CodeFamily,
}

impl LinearCode {
    /// Wraps a generator matrix, checking that its rows are independent.
    pub fn new(gen: TernaryMatrix, family: CodeFamily) -> Result<Self> {
        let rank = gen.rank();
        if rank != gen.nrows() {
            return Err(Error::RankDeficient {
                rank,
                expected: gen.nrows(),
            });
        }
        Ok(LinearCode { gen, family })
    }

    pub fn length(&self) -> usize {
        self.gen.ncols()
    }

    pub fn dimension(&self) -> usize {
        self.gen.nrows()
    }

    pub fn generator(&self) -> &TernaryMatrix {
        &self.gen
    }

    pub fn family(&self) -> CodeFamily {
        self.family
    }

    pub fn encode(&self, msg: &[Trit]) -> TernaryVector {
        self.gen.encode(msg)
    }

    /// The dual code, generated by a basis of the null space of the generator.
    pub fn dual(&self) -> LinearCode {
        LinearCode {
            gen: self.gen.null_space(),
            family: CodeFamily::Dual,
        }
    }

    /// Same set of codewords (row spaces equal).
    pub fn same_code(&self, other: &LinearCode) -> bool {
        self.gen.same_row_space(&other.gen)
    }

    /// The shortened code on `positions`: codewords vanishing there, with
    /// those coordinates deleted. Fails if the dimension does not drop by
    /// exactly `positions.len()`.
    pub fn shorten(&self, positions: &[usize]) -> Result<LinearCode> {
        let mut drop = positions.to_vec();
        drop.sort_unstable();
        drop.dedup();
        if drop.len() != positions.len() {
            return Err(Error::invalid("shortening positions must be distinct"));
        }
        if let Some(&p) = drop.iter().find(|&&p| p >= self.length()) {
            return Err(Error::invalid(format!(
                "position {p} outside length {}",
                self.length()
            )));
        }
        if drop.is_empty() {
            return Ok(self.clone());
        }
        // Messages m with (m·G) zero on `drop`: the null space of the
        // |T| x k matrix whose rows are the generator's columns at `drop`.
        let restricted =
            TernaryMatrix::from_rows(self.dimension(), drop.iter().map(|&c| self.gen.column(c)).collect());
        let messages = restricted.null_space();
        let expected = self.dimension() - drop.len();
        if messages.nrows() != expected {
            return Err(Error::RankDeficient {
                rank: messages.nrows(),
                expected,
            });
        }
        let rows = messages
            .rows()
            .iter()
            .map(|m| self.gen.encode(&m.to_trits()).punctured(&drop))
            .collect();
        LinearCode::new(
            TernaryMatrix::from_rows(self.length() - drop.len(), rows),
            CodeFamily::Shortened,
        )
    }

    /// Writes the generator as text: a "ν k" header, then one line of ν
    /// symbols from {0,1,2} per row.
    pub fn write_generator<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{} {}", self.length(), self.dimension())?;
        for row in self.gen.rows() {
            let line: String = row.to_trits().iter().map(|&t| (b'0' + t) as char).collect();
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    /// Parses the text produced by [`LinearCode::write_generator`].
    pub fn read_generator<R: BufRead>(input: R) -> Result<LinearCode> {
        let mut lines = input.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let header = header?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|e| Error::parse(1, e.to_string())))
            .collect::<Result<_>>()?;
        let [len, k] = dims[..] else {
            return Err(Error::parse(1, "header must be \"length dimension\""));
        };
        let mut gen = TernaryMatrix::new(len);
        for (i, line) in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let trits = line
                .bytes()
                .map(|b| match b {
                    b'0'..=b'2' => Ok(b - b'0'),
                    _ => Err(Error::parse(i + 1, format!("bad symbol {:?}", b as char))),
                })
                .collect::<Result<Vec<_>>>()?;
            if trits.len() != len {
                return Err(Error::parse(
                    i + 1,
                    format!("expected {len} symbols, found {}", trits.len()),
                ));
            }
            gen.push_row(TernaryVector::from_trits(&trits));
        }
        if gen.nrows() != k {
            return Err(Error::parse(0, format!("expected {k} rows, found {}", gen.nrows())));
        }
        LinearCode::new(gen, CodeFamily::Imported)
    }
}

fn trace_code(field: &Field, second_exponent: u64, family: CodeFamily) -> Result<LinearCode> {
    let n = field.n();
    let len = field.num_coordinates();
    let mut gen = TernaryMatrix::new(len);
    // Basis β_j = α^j. Entry i of the row for β_j is tr(β_j · α^{e·i}).
    for step in [2u64, second_exponent] {
        for j in 0..n as u64 {
            let mut row = TernaryVector::zeros(len);
            for i in 0..len as u64 {
                row.set(i as usize, field.trace(field.alpha_pow(j + step * i)));
            }
            gen.push_row(row);
        }
    }
    LinearCode::new(gen, family)
}

/// The code {(tr(a·α^{2i} + b·α^{2di}))_i : a, b ∈ GF(3^n)}.
pub fn build_welch_code(field: &Field) -> Result<LinearCode> {
    let order = field.order() as u64;
    trace_code(field, (2 * field.d()) % order, CodeFamily::Welch)
}

/// The code {(tr(a·α^{2i} + b·α^{4i}))_i : a, b ∈ GF(3^n)}.
pub fn build_quadric_code(field: &Field) -> Result<LinearCode> {
    trace_code(field, 4, CodeFamily::Quadric)
}

/// `count` seeded random coordinate sets, each of `size` distinct
/// positions in `0..length`, returned sorted.
pub fn sample_positions(length: usize, size: usize, count: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut t = sample(&mut rng, length, size).into_vec();
            t.sort_unstable();
            t
        })
        .collect()
}
