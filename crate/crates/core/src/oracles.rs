//! Exhaustive checks of the field identities behind the codes and designs.
//! Each check sweeps the whole field and reports what it examined, plus a
//! witness on failure.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement, SquareClass};

/// Outcome of one exhaustive check, printed as one JSON line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub lemma: &'static str,
    pub n: usize,
    pub ok: bool,
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl LemmaReport {
    fn new(lemma: &'static str, n: usize, checked: u64, witness: Option<String>) -> Self {
        LemmaReport {
            lemma,
            n,
            ok: witness.is_none(),
            checked,
            skipped: None,
            witness,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports always serialise")
    }
}

fn require_m(field: &Field) -> Result<()> {
    if field.m() < 2 {
        return Err(Error::invalid(format!("the checks need m >= 2, got n = {}", field.n())));
    }
    Ok(())
}

/// x^d for every field element, by index.
fn power_table(field: &Field, e: u64) -> Vec<FieldElement> {
    field.elements().map(|x| field.pow(x, e)).collect()
}

fn in_gf3(field: &Field, x: FieldElement) -> bool {
    (0..3).any(|c| field.from_trit(c) == x)
}

fn show(x: FieldElement) -> String {
    format!("{x:?}")
}

/// 1 + y₁ + y₂ = 0 and 1 + y₁^d + y₂^d = 0 over nonzero y₁, y₂ has the
/// single solution y₁ = y₂ = 1.
pub fn verify_lemma_unique_solution(field: &Field) -> Result<LemmaReport> {
    require_m(field)?;
    let pd = power_table(field, field.d());
    let one = field.one();
    let mut solutions = Vec::new();
    for y1 in field.nonzero_elements() {
        let y2 = field.neg(field.add(one, y1));
        if y2.is_zero() {
            continue;
        }
        let s = field.add(field.add(one, pd[y1.index() as usize]), pd[y2.index() as usize]);
        if s.is_zero() {
            solutions.push((y1, y2));
        }
    }
    let witness = (solutions != [(one, one)]).then(|| {
        let list: Vec<String> = solutions.iter().map(|&(a, b)| format!("({}, {})", show(a), show(b))).collect();
        format!("solutions {}", list.join(", "))
    });
    Ok(LemmaReport::new("unique-solution", field.n(), field.order() as u64, witness))
}

/// No set of i ∈ {1, 2, 3} distinct squares has Σ c_s x_s = 0 and
/// Σ c_s x_s^d = 0 for any signs c_s ∈ {1, −1}.
pub fn verify_lemma_n0(field: &Field) -> Result<LemmaReport> {
    require_m(field)?;
    let pd = power_table(field, field.d());
    let squares: Vec<FieldElement> = field.coordinate_points();
    let signed = |c: bool, x: FieldElement| if c { x } else { field.neg(x) };
    let pow = |x: FieldElement| pd[x.index() as usize];
    let mut checked = 0u64;

    // i = 1: c₁x₁ = 0 has no nonzero solution
    checked += 2 * squares.len() as u64;
    if let Some(&x) = squares.iter().find(|x| x.is_zero()) {
        return Ok(LemmaReport::new("N0", field.n(), checked, Some(format!("i=1: {}", show(x)))));
    }

    // i = 2
    for (j, &x1) in squares.iter().enumerate() {
        for &x2 in &squares[j + 1..] {
            for c2 in [true, false] {
                checked += 1;
                let lin = field.add(x1, signed(c2, x2));
                let pw = field.add(pow(x1), signed(c2, pow(x2)));
                if lin.is_zero() && pw.is_zero() {
                    let w = format!("i=2: {{{}, {}}}, c=(1,{})", show(x1), show(x2), if c2 { 1 } else { -1 });
                    return Ok(LemmaReport::new("N0", field.n(), checked, Some(w)));
                }
            }
        }
    }

    // i = 3: x₃ is fixed by the linear equation; overall sign is irrelevant so c₁ = 1
    let found = squares
        .par_iter()
        .enumerate()
        .map(|(j, &x1)| {
            let mut count = 0u64;
            for &x2 in &squares[j + 1..] {
                for c2 in [true, false] {
                    for c3 in [true, false] {
                        count += 1;
                        // x₁ + c₂x₂ + c₃x₃ = 0  =>  x₃ = −c₃(x₁ + c₂x₂)
                        let x3 = signed(!c3, field.add(x1, signed(c2, x2)));
                        if x3.is_zero() || !field.is_square(x3) || x3 == x1 || x3 == x2 {
                            continue;
                        }
                        let pw = field.add(field.add(pow(x1), signed(c2, pow(x2))), signed(c3, pow(x3)));
                        if pw.is_zero() {
                            let sign = |c: bool| if c { 1 } else { -1 };
                            return (
                                count,
                                Some(format!(
                                    "i=3: {{{}, {}, {}}}, c=(1,{},{})",
                                    show(x1),
                                    show(x2),
                                    show(x3),
                                    sign(c2),
                                    sign(c3)
                                )),
                            );
                        }
                    }
                }
            }
            (count, None)
        })
        .collect::<Vec<_>>();
    let mut witness = None;
    for (c, w) in found {
        checked += c;
        if witness.is_none() {
            witness = w;
        }
    }
    Ok(LemmaReport::new("N0", field.n(), checked, witness))
}

/// The sets P, NP, S, NS of a field.
#[derive(Clone, Debug)]
pub struct PartitionSets {
    /// Membership by element index.
    pub p: Vec<bool>,
    pub np: Vec<bool>,
    pub s: Vec<bool>,
    pub ns: Vec<bool>,
}

impl PartitionSets {
    pub fn new(field: &Field) -> PartitionSets {
        let q = field.q() as usize;
        let one = field.one();
        let pd0 = power_table(field, field.d0());
        let mut sets = PartitionSets {
            p: vec![false; q],
            np: vec![false; q],
            s: vec![false; q],
            ns: vec![false; q],
        };
        for x in field.elements() {
            let i = x.index() as usize;
            match field.square_class(field.sub(pd0[i], one)) {
                SquareClass::Square => sets.p[i] = true,
                SquareClass::Nonsquare => sets.np[i] = true,
                SquareClass::Zero => {}
            }
            if !x.is_zero() && field.is_square(field.sub(one, field.mul(x, x))) {
                sets.s[i] = true;
            }
        }
        for x in field.nonzero_elements() {
            if sets.s[x.index() as usize] {
                let inv = field.inv(x).expect("nonzero");
                sets.ns[inv.index() as usize] = true;
            }
        }
        sets
    }

    pub fn count(set: &[bool]) -> usize {
        set.iter().filter(|&&b| b).count()
    }
}

/// S, NS and GF(3) are pairwise disjoint and cover the field.
pub fn verify_partition(field: &Field) -> Result<LemmaReport> {
    require_m(field)?;
    let sets = PartitionSets::new(field);
    let witness = field.elements().find_map(|x| {
        let i = x.index() as usize;
        let hits = sets.s[i] as u8 + sets.ns[i] as u8 + in_gf3(field, x) as u8;
        (hits != 1).then(|| format!("{} lies in {hits} of S, NS, GF(3)", show(x)))
    });
    Ok(LemmaReport::new("partition", field.n(), field.q() as u64, witness))
}

/// f(x) = (x+1)^d − x^d maps S into P 4-to-1, NS into NP 2-to-1, and
/// GF(3) to 1, with S and NS exactly as defined in [`PartitionSets`].
pub fn verify_lemma_f_fibers(field: &Field) -> Result<LemmaReport> {
    require_m(field)?;
    let sets = PartitionSets::new(field);
    Ok(check_f_fibers(field, "f-fibers", &sets.s, &sets.ns, &sets))
}

/// The same fiber statement for the translated sets 1 − S and 1 − NS,
/// i.e. x ∉ GF(3) with −x(x+1) a square resp. nonsquare. This is the form
/// in which the 4-to-1 / 2-to-1 structure holds; it is reported beside the
/// literal statement, never in place of it.
pub fn verify_f_fibers_translated(field: &Field) -> Result<LemmaReport> {
    require_m(field)?;
    let sets = PartitionSets::new(field);
    let q = field.q() as usize;
    let one = field.one();
    let (mut s1, mut ns1) = (vec![false; q], vec![false; q]);
    for x in field.elements() {
        let shifted = field.sub(one, x).index() as usize;
        s1[shifted] = sets.s[x.index() as usize];
        ns1[shifted] = sets.ns[x.index() as usize];
    }
    Ok(check_f_fibers(field, "f-fibers-translated", &s1, &ns1, &sets))
}

fn check_f_fibers(field: &Field, name: &'static str, s: &[bool], ns: &[bool], sets: &PartitionSets) -> LemmaReport {
    let q = field.q() as usize;
    let pd = power_table(field, field.d());
    let one = field.one();
    let f = |x: FieldElement| field.sub(pd[field.add(x, one).index() as usize], pd[x.index() as usize]);
    let mut from_s = vec![0u32; q];
    let mut from_ns = vec![0u32; q];
    let mut witness = None;
    for x in field.elements() {
        let i = x.index() as usize;
        let y = f(x);
        let j = y.index() as usize;
        if s[i] {
            from_s[j] += 1;
            if !sets.p[j] && witness.is_none() {
                witness = Some(format!("f({}) = {} is not in P", show(x), show(y)));
            }
        } else if ns[i] {
            from_ns[j] += 1;
            if !sets.np[j] && witness.is_none() {
                witness = Some(format!("f({}) = {} is not in NP", show(x), show(y)));
            }
        } else if in_gf3(field, x) && y != one && witness.is_none() {
            witness = Some(format!("f({}) = {} is not 1", show(x), show(y)));
        }
    }
    if witness.is_none() {
        witness = field.elements().find_map(|y| {
            let j = y.index() as usize;
            if from_s[j] != 0 && from_s[j] != 4 {
                Some(format!("{} has {} preimages in S", show(y), from_s[j]))
            } else if from_ns[j] != 0 && from_ns[j] != 2 {
                Some(format!("{} has {} preimages in NS", show(y), from_ns[j]))
            } else {
                None
            }
        });
    }
    LemmaReport::new(name, field.n(), q as u64, witness)
}

/// Solution counts of the SZ system for one z ∉ GF(3): the pair
/// (#S_{z,+1}, #S_{z,−1}) and the raw +1 count before removing the two
/// trivial solutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SzCounts {
    pub plus: u32,
    pub minus: u32,
    pub raw_plus: u32,
}

pub fn sz_counts(field: &Field, pd: &[FieldElement], z: FieldElement) -> SzCounts {
    let one = field.one();
    let zd = pd[z.index() as usize];
    let mut out = SzCounts {
        plus: 0,
        minus: 0,
        raw_plus: 0,
    };
    for (i, iz, izd) in [(1, z, zd), (-1, field.neg(z), field.neg(zd))] {
        let c = field.add(iz, one);
        let cd = field.add(izd, one);
        for x in field.elements() {
            let y = field.neg(field.add(x, c));
            let s = field.add(field.add(pd[x.index() as usize], pd[y.index() as usize]), cd);
            if !s.is_zero() {
                continue;
            }
            if i == 1 {
                out.raw_plus += 1;
            }
            let excluded = field.add(x, one).is_zero() || field.add(x, iz).is_zero();
            if !excluded {
                if i == 1 {
                    out.plus += 1;
                } else {
                    out.minus += 1;
                }
            }
        }
    }
    out
}

/// (#S_{z,+1}, #S_{z,−1}) is (2, 0) for square z and (0, 2) for nonsquare
/// z, over every z ∉ GF(3); the raw +1 count is 4 resp. 2.
pub fn verify_lemma_sz(field: &Field) -> Result<LemmaReport> {
    require_m(field)?;
    let pd = power_table(field, field.d());
    let zs: Vec<FieldElement> = field.elements().filter(|&z| !in_gf3(field, z)).collect();
    let witness = zs
        .par_iter()
        .find_map_first(|&z| {
            let got = sz_counts(field, &pd, z);
            let want = if field.is_square(z) { (2, 0, 4) } else { (0, 2, 2) };
            ((got.plus, got.minus, got.raw_plus) != want).then(|| {
                format!(
                    "z = {}: (#S+, #S-) = ({}, {}), raw {}",
                    show(z),
                    got.plus,
                    got.minus,
                    got.raw_plus
                )
            })
        });
    Ok(LemmaReport::new("SZ", field.n(), zs.len() as u64, witness))
}

/// Pointwise check of
/// ((z^d + 1)/(z + 1)^d)^{d₀} − 1 = z·(z^{3^{m+1}+1} − 1)² / (z^{3^{m+1}+2} + 1)²
/// over z ∉ GF(3). Points where a denominator vanishes are skipped and listed.
pub fn verify_nd0_identity(field: &Field) -> Result<LemmaReport> {
    require_m(field)?;
    let (lhs, rhs, skipped) = nd0_sides(field);
    let checked = lhs.len() as u64;
    let witness = lhs
        .iter()
        .zip(&rhs)
        .find(|(l, r)| l.1 != r.1)
        .map(|(l, r)| format!("z = {}: left {} right {}", show(l.0), show(l.1), show(r.1)));
    let mut report = LemmaReport::new("Nd0", field.n(), checked, witness);
    report.skipped = Some(skipped.into_iter().map(show).collect());
    Ok(report)
}

/// Where both sides of the Nd0 identity are nonzero, the right side has
/// the square class of z.
pub fn verify_nd0_square_class(field: &Field) -> Result<LemmaReport> {
    require_m(field)?;
    let (lhs, rhs, skipped) = nd0_sides(field);
    let mut checked = 0;
    let mut witness = None;
    for ((z, l), (_, r)) in lhs.iter().zip(&rhs) {
        if l.is_zero() || r.is_zero() {
            continue;
        }
        checked += 1;
        if field.square_class(*r) != field.square_class(*z) && witness.is_none() {
            witness = Some(format!("z = {}: right side {} has a different square class", show(*z), show(*r)));
        }
    }
    let mut report = LemmaReport::new("Nd0-class", field.n(), checked, witness);
    report.skipped = Some(skipped.into_iter().map(show).collect());
    Ok(report)
}

type Sides = (Vec<(FieldElement, FieldElement)>, Vec<(FieldElement, FieldElement)>, Vec<FieldElement>);

fn nd0_sides(field: &Field) -> Sides {
    let one = field.one();
    let d = field.d();
    let e = 3u64.pow(field.m() as u32 + 1);
    let (mut lhs, mut rhs, mut skipped) = (Vec::new(), Vec::new(), Vec::new());
    for z in field.elements().filter(|&z| !in_gf3(field, z)) {
        let den_left = field.pow(field.add(z, one), d);
        let den_right = field.pow(field.add(field.pow(z, e + 2), one), 2);
        let (Some(ratio), false) = (field.div(field.add(field.pow(z, d), one), den_left), den_right.is_zero()) else {
            skipped.push(z);
            continue;
        };
        let l = field.sub(field.pow(ratio, field.d0()), one);
        let num = field.mul(z, field.pow(field.sub(field.pow(z, e + 1), one), 2));
        let r = field.div(num, den_right).expect("nonzero denominator");
        lhs.push((z, l));
        rhs.push((z, r));
    }
    (lhs, rhs, skipped)
}

/// Every check at one degree, in a fixed order.
pub fn run_all(field: &Field) -> Result<Vec<LemmaReport>> {
    Ok(vec![
        verify_lemma_unique_solution(field)?,
        verify_lemma_n0(field)?,
        verify_partition(field)?,
        verify_lemma_f_fibers(field)?,
        verify_f_fibers_translated(field)?,
        verify_lemma_sz(field)?,
        verify_nd0_identity(field)?,
        verify_nd0_square_class(field)?,
    ])
}
