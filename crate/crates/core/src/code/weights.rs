use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use super::{LinearCode, TernaryMatrix, TernaryVector};
use crate::error::{Error, Result};

/// Largest dimension for which the full message space is traversed.
pub const MAX_EXHAUSTIVE_DIM: usize = 16;

/// Number of leading message digits fixed per parallel task (3^4 = 81 tasks).
const SPLIT_DIGITS: usize = 4;

/// Exact weight distribution A_w of a code of the given length and dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDistribution {
    length: usize,
    dimension: usize,
    counts: BTreeMap<usize, u128>,
}

impl WeightDistribution {
    /// Zero counts are dropped.
    pub fn new(length: usize, dimension: usize, counts: impl IntoIterator<Item = (usize, u128)>) -> Self {
        let counts = counts.into_iter().filter(|&(_, a)| a != 0).collect();
        WeightDistribution {
            length,
            dimension,
            counts,
        }
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn counts(&self) -> &BTreeMap<usize, u128> {
        &self.counts
    }

    pub fn count(&self, w: usize) -> u128 {
        self.counts.get(&w).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u128 {
        self.counts.values().sum()
    }

    /// Smallest nonzero weight, if any codeword is nonzero.
    pub fn min_distance(&self) -> Option<usize> {
        self.counts.keys().copied().find(|&w| w > 0)
    }

    /// (weight, count) pairs for nonzero weights, ascending.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, u128)> + '_ {
        self.counts.iter().filter(|(&w, _)| w > 0).map(|(&w, &a)| (w, a))
    }

    /// Weight enumerator as `1 + 10890 z^72 + ...`.
    pub fn enumerator_string(&self) -> String {
        self.counts
            .iter()
            .map(|(&w, &a)| if w == 0 { a.to_string() } else { format!("{a} z^{w}") })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("weight distributions always serialise")
    }

    /// Parses `{"length":..,"dimension":..,"counts":{"w":A_w,..}}`.
    /// The zero word is implied and restored.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
        let field = |name: &str| {
            v.get(name)
                .and_then(|x| x.as_u64())
                .ok_or_else(|| Error::parse(1, format!("missing integer field {name:?}")))
        };
        let length = field("length")? as usize;
        let dimension = field("dimension")? as usize;
        let obj = v
            .get("counts")
            .and_then(|c| c.as_object())
            .ok_or_else(|| Error::parse(1, "missing \"counts\" object"))?;
        let mut counts = vec![(0usize, 1u128)];
        for (w, a) in obj {
            let w: usize = w.parse().map_err(|_| Error::parse(1, format!("bad weight {w:?}")))?;
            let a = match a {
                serde_json::Value::Number(num) => num
                    .as_u64()
                    .map(u128::from)
                    .or_else(|| num.to_string().parse().ok()),
                _ => None,
            }
            .ok_or_else(|| Error::parse(1, format!("bad count for weight {w}")))?;
            counts.push((w, a));
        }
        Ok(WeightDistribution::new(length, dimension, counts))
    }
}

struct NonzeroCounts<'a>(&'a BTreeMap<usize, u128>);

impl Serialize for NonzeroCounts<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        // numeric order, which differs from string order once weights have mixed widths
        for (w, a) in self.0.iter().filter(|(&w, _)| w > 0) {
            map.serialize_entry(&w.to_string(), a)?;
        }
        map.end()
    }
}

impl Serialize for WeightDistribution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("WeightDistribution", 3)?;
        st.serialize_field("length", &self.length)?;
        st.serialize_field("dimension", &self.dimension)?;
        st.serialize_field("counts", &NonzeroCounts(&self.counts))?;
        st.end()
    }
}

/// Visits every codeword of the row space of `gen` exactly once.
///
/// The top message digits are fixed per task; inside a task the remaining
/// digits follow a ternary Gray order, so each step adds a single generator
/// row to the running codeword. Returns one state per task, in task order,
/// so merged results do not depend on scheduling.
pub fn for_each_codeword<S, I, F>(gen: &TernaryMatrix, init: I, visit: F) -> Vec<S>
where
    S: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, &TernaryVector) + Sync + Send,
{
    let k = gen.nrows();
    let split = k.min(SPLIT_DIGITS);
    let low = k - split;
    let tasks = 3usize.pow(split as u32);
    (0..tasks)
        .into_par_iter()
        .map(|prefix| {
            let mut state = init();
            let mut cw = TernaryVector::zeros(gen.ncols());
            let mut rest = prefix;
            for i in 0..split {
                cw.add_scaled((rest % 3) as u8, gen.row(low + i));
                rest /= 3;
            }
            visit(&mut state, &cw);
            let mut counter = vec![0u8; low];
            // Incrementing counter digit j changes Gray digit j by +1 and nothing else.
            while let Some(j) = counter.iter().position(|&c| c != 2) {
                counter[..j].fill(0);
                counter[j] += 1;
                cw.add_assign(gen.row(j));
                visit(&mut state, &cw);
            }
            state
        })
        .collect()
}

/// Exact weight distribution by traversal of all 3^k messages.
pub fn weight_distribution(code: &LinearCode) -> Result<WeightDistribution> {
    let k = code.dimension();
    if k > MAX_EXHAUSTIVE_DIM {
        return Err(Error::DimensionTooLarge {
            k,
            max: MAX_EXHAUSTIVE_DIM,
        });
    }
    let len = code.length();
    let parts = for_each_codeword(
        code.generator(),
        || vec![0u64; len + 1],
        |hist, cw| hist[cw.weight()] += 1,
    );
    let mut total = vec![0u128; len + 1];
    for part in parts {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p as u128;
        }
    }
    Ok(WeightDistribution::new(len, k, total.into_iter().enumerate()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::CodeFamily;

    /// Plain base-3 counting, re-encoding every message from scratch.
    fn brute_force(code: &LinearCode) -> Vec<u128> {
        let k = code.dimension();
        let mut hist = vec![0u128; code.length() + 1];
        for idx in 0..3usize.pow(k as u32) {
            let mut rest = idx;
            let msg: Vec<u8> = (0..k)
                .map(|_| {
                    let d = (rest % 3) as u8;
                    rest /= 3;
                    d
                })
                .collect();
            hist[code.encode(&msg).weight()] += 1;
        }
        hist
    }

    #[test]
    fn gray_traversal_matches_brute_force() {
        for n in [3, 5] {
            let f = crate::gf::Field::new(n).unwrap();
            for code in [
                crate::code::build_welch_code(&f).unwrap(),
                crate::code::build_quadric_code(&f).unwrap(),
            ] {
                let wd = weight_distribution(&code).unwrap();
                let expect = WeightDistribution::new(
                    code.length(),
                    code.dimension(),
                    brute_force(&code).into_iter().enumerate(),
                );
                assert_eq!(wd, expect);
            }
        }
    }

    #[test]
    fn every_codeword_visited_once() {
        // bidiagonal rows with mixed symbols: full rank, and Gray steps touch two columns
        let rows: Vec<Vec<u8>> = (0..6)
            .map(|i| (0..6).map(|j| if j == i { 1 } else if j == (i + 1) % 6 && i < 5 { 2 } else { 0 }).collect())
            .collect();
        let g = TernaryMatrix::from_trit_rows(6, &rows);
        let parts = for_each_codeword(&g, Vec::new, |seen, cw| seen.push(cw.to_trits()));
        let mut all: Vec<_> = parts.into_iter().flatten().collect();
        assert_eq!(all.len(), 729);
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 729);
    }

    #[test]
    fn zero_dimensional_code() {
        let code = LinearCode::new(TernaryMatrix::new(4), CodeFamily::Imported).unwrap();
        let wd = weight_distribution(&code).unwrap();
        assert_eq!(wd.total(), 1);
        assert_eq!(wd.count(0), 1);
        assert_eq!(wd.min_distance(), None);
    }

    #[test]
    fn rejects_large_dimension() {
        let rows: Vec<Vec<u8>> = (0..17)
            .map(|i| (0..17).map(|j| (i == j) as u8).collect())
            .collect();
        let code = LinearCode::new(TernaryMatrix::from_trit_rows(17, &rows), CodeFamily::Imported).unwrap();
        assert!(matches!(
            weight_distribution(&code),
            Err(Error::DimensionTooLarge { k: 17, .. })
        ));
    }

    #[test]
    fn json_keeps_numeric_order_and_round_trips() {
        let wd = WeightDistribution::new(200, 3, [(0, 1), (99, 10), (100, 16)]);
        let json = wd.to_json();
        assert_eq!(json, r#"{"length":200,"dimension":3,"counts":{"99":10,"100":16}}"#);
        assert_eq!(WeightDistribution::from_json(&json).unwrap(), wd);
        assert_eq!(wd.enumerator_string(), "1 + 10 z^99 + 16 z^100");
    }
}
