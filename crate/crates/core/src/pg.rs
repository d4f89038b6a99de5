//! The point-line design PG₁(n−1, 3) and rank-based inequivalence checks.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::code::binomial;
use crate::design::{p_rank, verify_t_design, DesignCertificate, DesignVerdict, IncidenceStructure};
use crate::error::{Error, Result};
use crate::gf::Trit;

/// Smallest and largest supported projective dimension n−1.
pub const MIN_PROJECTIVE_DIM: usize = 2;
pub const MAX_PROJECTIVE_DIM: usize = 8;

/// A point of PG(n−1, 3): a nonzero vector whose first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProjectivePoint {
    coords: Vec<Trit>,
}

impl ProjectivePoint {
    /// Normalises a nonzero vector to its projective representative.
    pub fn new(mut coords: Vec<Trit>) -> Result<ProjectivePoint> {
        let lead = coords
            .iter()
            .position(|&c| c % 3 != 0)
            .ok_or_else(|| Error::invalid("the zero vector is not a projective point"))?;
        let scale = coords[lead] % 3;
        for c in coords.iter_mut() {
            *c = (*c % 3) * scale % 3;
        }
        debug_assert_eq!(coords[lead], 1);
        Ok(ProjectivePoint { coords })
    }

    pub fn coords(&self) -> &[Trit] {
        &self.coords
    }
}

/// All points of PG(dim, 3) in lexicographic order of their coordinates.
pub fn projective_points(dim: usize) -> Vec<ProjectivePoint> {
    let n = dim + 1;
    (0..3usize.pow(n as u32))
        .filter_map(|mut x| {
            let mut coords = vec![0; n];
            for c in coords.iter_mut().rev() {
                *c = (x % 3) as Trit;
                x /= 3;
            }
            let lead = coords.iter().position(|&c| c != 0)?;
            (coords[lead] == 1).then_some(ProjectivePoint { coords })
        })
        .collect()
}

/// The design of points and lines of PG(dim, 3): v = (3^{dim+1} − 1)/2
/// points, each line the 4 points {u, w, u+w, u+2w}.
pub fn pg_point_line_design(dim: usize) -> Result<IncidenceStructure> {
    if !(MIN_PROJECTIVE_DIM..=MAX_PROJECTIVE_DIM).contains(&dim) {
        return Err(Error::DegreeOutOfRange {
            n: dim,
            min: MIN_PROJECTIVE_DIM,
            max: MAX_PROJECTIVE_DIM,
        });
    }
    let n = dim + 1;
    let points = projective_points(dim);
    let v = points.len();
    // point index of every nonzero vector, keyed by its base-3 value
    let value = |c: &[Trit]| c.iter().fold(0usize, |acc, &t| acc * 3 + t as usize);
    let mut index_of = vec![usize::MAX; 3usize.pow(n as u32)];
    for (i, p) in points.iter().enumerate() {
        index_of[value(&p.coords)] = i;
        let neg: Vec<Trit> = p.coords.iter().map(|&c| (3 - c) % 3).collect();
        index_of[value(&neg)] = i;
    }
    let lines: Vec<[usize; 4]> = (0..v)
        .into_par_iter()
        .flat_map_iter(|u| {
            let points = &points;
            let index_of = &index_of;
            (u + 1..v).filter_map(move |w| {
                let (pu, pw) = (&points[u].coords, &points[w].coords);
                let mut line = [u, w, 0, 0];
                for (slot, c) in [(2, 1), (3, 2)] {
                    let sum: Vec<Trit> = pu.iter().zip(pw).map(|(&a, &b)| (a + c * b) % 3).collect();
                    line[slot] = index_of[value(&sum)];
                }
                // each line is kept once, from the pair of its two smallest points
                (line[2] > w && line[3] > w).then(|| {
                    line.sort_unstable();
                    line
                })
            })
        })
        .collect();
    IncidenceStructure::from_blocks(v, lines)
}

/// Closed-form p-rank of the points and lines of PG(n−1, p):
/// (pⁿ − 1)/(p − 1) − C(n + p − 2, p − 1).
pub fn ch_rank_formula(n: usize, p: u32) -> Result<BigInt> {
    if n < 3 {
        return Err(Error::invalid(format!("n = {n} must be at least 3")));
    }
    if p < 2 || (2..p).take_while(|i| i * i <= p).any(|i| p % i == 0) {
        return Err(Error::invalid(format!("p = {p} is not prime")));
    }
    let pn = num_traits::pow(BigInt::from(p), n);
    Ok((pn - 1u32) / (p - 1) - binomial((n + p as usize - 2) as u64, (p - 1) as u64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Equivalence {
    /// Ranks differ, so no point bijection maps one block set onto the other.
    Inequivalent,
    /// Ranks agree; rank alone cannot decide.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InequivalenceReport {
    pub t: usize,
    pub v: usize,
    pub k: usize,
    pub lambda: u64,
    pub rank_first: usize,
    pub rank_second: usize,
    pub verdict: Equivalence,
}

fn two_design(d: &IncidenceStructure, which: &str) -> Result<DesignCertificate> {
    match verify_t_design(d, 2)? {
        DesignVerdict::Design(c) => Ok(c),
        DesignVerdict::Refuted(r) => Err(Error::ParameterMismatch(format!(
            "{which} is not a 2-design: pair {:?} lies in {} blocks, expected {}",
            r.subset, r.count, r.expected
        ))),
    }
}

/// Compares the GF(3) ranks of two 2-designs with the same parameters.
pub fn compare_ranks(a: &IncidenceStructure, b: &IncidenceStructure) -> Result<InequivalenceReport> {
    let ca = two_design(a, "first structure")?;
    let cb = two_design(b, "second structure")?;
    if (ca.v, ca.k, ca.lambda) != (cb.v, cb.k, cb.lambda) {
        return Err(Error::ParameterMismatch(format!(
            "2-({}, {}, {}) vs 2-({}, {}, {})",
            ca.v, ca.k, ca.lambda, cb.v, cb.k, cb.lambda
        )));
    }
    let (ra, rb) = rayon::join(|| p_rank(a, 3), || p_rank(b, 3));
    let (ra, rb) = (ra?, rb?);
    Ok(InequivalenceReport {
        t: 2,
        v: ca.v,
        k: ca.k,
        lambda: ca.lambda,
        rank_first: ra,
        rank_second: rb,
        verdict: if ra != rb {
            Equivalence::Inequivalent
        } else {
            Equivalence::Inconclusive
        },
    })
}

/// Compares `d` against PG₁(n−1, 3).
pub fn inequivalence_certificate(d: &IncidenceStructure, n: usize) -> Result<InequivalenceReport> {
    compare_ranks(d, &pg_point_line_design(n - 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_counts_and_order() {
        let pts = projective_points(2);
        assert_eq!(pts.len(), 13);
        assert_eq!(pts[0].coords(), &[0, 0, 1]);
        assert_eq!(pts[12].coords(), &[1, 2, 2]);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(projective_points(4).len(), 121);
    }

    #[test]
    fn normalisation() {
        assert_eq!(ProjectivePoint::new(vec![0, 2, 1]).unwrap().coords(), &[0, 1, 2]);
        assert!(ProjectivePoint::new(vec![0, 0, 0]).is_err());
    }

    #[test]
    fn plane_of_order_three() {
        let d = pg_point_line_design(2).unwrap();
        assert_eq!((d.v(), d.b(), d.k()), (13, 13, Some(4)));
        let cert = *verify_t_design(&d, 2).unwrap().certificate().unwrap();
        assert_eq!(cert.lambda, 1);
        assert_eq!(BigInt::from(p_rank(&d, 3).unwrap()), ch_rank_formula(3, 3).unwrap());
    }

    #[test]
    fn formula_values() {
        assert_eq!(ch_rank_formula(5, 3).unwrap(), BigInt::from(106));
        assert_eq!(ch_rank_formula(7, 3).unwrap(), BigInt::from(1065));
        assert_eq!(ch_rank_formula(3, 3).unwrap(), BigInt::from(7));
        // PG(2,2): the Fano plane has 2-rank 4
        assert_eq!(ch_rank_formula(3, 2).unwrap(), BigInt::from(4));
        assert!(ch_rank_formula(2, 3).is_err());
        assert!(ch_rank_formula(5, 4).is_err());
    }

    #[test]
    fn dimension_bounds() {
        assert!(pg_point_line_design(1).is_err());
        assert!(pg_point_line_design(9).is_err());
    }

    #[test]
    fn self_comparison_is_inconclusive() {
        let d = pg_point_line_design(2).unwrap();
        let r = compare_ranks(&d, &d).unwrap();
        assert_eq!(r.verdict, Equivalence::Inconclusive);
        assert_eq!(r.rank_first, 7);
    }
}
