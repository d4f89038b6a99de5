//! Closed-form weight predictions and moment identities, in exact arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::WeightDistribution;
use crate::error::{Error, Result};

/// C(n, k) as an exact integer; zero when k > n.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

fn pow3(e: u32) -> BigInt {
    BigInt::from(3u32).pow(e)
}

fn exact_quotient(num: BigInt, den: u32, what: impl Into<String>) -> Result<BigInt> {
    let (q, r) = num.div_rem(&BigInt::from(den));
    if !r.is_zero() {
        return Err(Error::NonIntegral {
            what: what.into(),
            value: format!("{num}/{den}"),
        });
    }
    Ok(q)
}

fn to_count(x: BigInt, what: &str) -> Result<u128> {
    if x.is_negative() {
        return Err(Error::invalid(format!("{what} is negative: {x}")));
    }
    x.to_u128()
        .ok_or_else(|| Error::invalid(format!("{what} overflows 128 bits: {x}")))
}

fn rational_to_count(x: &BigRational, what: &str) -> Result<u128> {
    if !x.is_integer() {
        return Err(Error::NonIntegral {
            what: what.into(),
            value: x.to_string(),
        });
    }
    to_count(x.to_integer(), what)
}

fn check_m(m: u32) -> Result<()> {
    if m < 2 {
        return Err(Error::invalid(format!("m = {m}; the closed forms need m >= 2")));
    }
    Ok(())
}

/// Length and the three nonzero weights 3^{2m} - 3^m, 3^{2m}, 3^{2m} + 3^m.
fn welch_shape(m: u32) -> (usize, [usize; 3]) {
    let len = (3usize.pow(2 * m + 1) - 1) / 2;
    let (big, small) = (3usize.pow(2 * m), 3usize.pow(m));
    (len, [big - small, big, big + small])
}

/// Weight distribution of the Welch trace code with n = 2m + 1, from its closed form.
pub fn predicted_weights_welch(m: u32) -> Result<WeightDistribution> {
    check_m(m)?;
    let (len, w) = welch_shape(m);
    let a = pow3(m);
    let t = pow3(2 * m + 1) - 1;
    let low = exact_quotient(&a * (BigInt::one() + &a) * &t, 2, "low-weight count")?;
    let mid = BigInt::from(2) * pow3(4 * m + 1) + pow3(2 * m) - 1;
    let high = exact_quotient(&a * (&a - 1) * &t, 2, "high-weight count")?;
    Ok(WeightDistribution::new(
        len,
        2 * (2 * m as usize + 1),
        [
            (0, 1),
            (w[0], to_count(low, "count")?),
            (w[1], to_count(mid, "count")?),
            (w[2], to_count(high, "count")?),
        ],
    ))
}

/// Number of weight-4 words in the dual of the Welch trace code: (1 - 4·3^{2m} + 3^{4m+1}) / 8.
pub fn predicted_a4_dual(m: u32) -> Result<u128> {
    check_m(m)?;
    let num = BigInt::one() - BigInt::from(4) * pow3(2 * m) + pow3(4 * m + 1);
    to_count(exact_quotient(num, 8, "A4 of the dual")?, "A4")
}

/// The printed expression 3^{n−2}(3^{n−1} − 3^m − 1)/2 for the λ of the
/// minimum-weight design, n = 2m + 1, evaluated exactly. It is half the
/// value obtained by counting pair coverage (958.5 vs 1917 at m = 2), so it
/// is exposed only for comparison.
pub fn printed_min_weight_lambda(m: u32) -> Result<BigRational> {
    check_m(m)?;
    let n = 2 * m + 1;
    let num = pow3(n - 2) * (pow3(n - 1) - pow3(m) - 1);
    Ok(BigRational::new(num, BigInt::from(2)))
}

/// λ = b·C(k, 2)/C(v, 2) of the minimum-weight design, b = A_min/2, from the
/// closed-form weight distribution.
pub fn predicted_min_weight_lambda(m: u32) -> Result<u128> {
    let wd = predicted_weights_welch(m)?;
    let (v, weights) = welch_shape(m);
    let k = weights[0] as u64;
    let b = BigInt::from(wd.count(weights[0])) / 2;
    let lambda = BigRational::new(b * binomial(k, 2), binomial(v as u64, 2));
    rational_to_count(&lambda, "minimum-weight λ")
}

/// Closed-form weight distribution of the Welch code shortened on `t` ∈ {1, 2} positions.
pub fn predicted_shortened_welch(m: u32, t: u32) -> Result<WeightDistribution> {
    check_m(m)?;
    let (len, w) = welch_shape(m);
    let a = pow3(m);
    let (low, mid, high) = match t {
        1 => {
            let low = &a * (&a - 1 + pow3(3 * m) + pow3(2 * m + 1));
            let high = &a * (&a + 1 + pow3(3 * m) - pow3(2 * m + 1));
            (
                exact_quotient(low, 2, "shortened low-weight count")?,
                BigInt::from(2) * pow3(4 * m) - pow3(2 * m) - 1,
                exact_quotient(high, 2, "shortened high-weight count")?,
            )
        }
        2 => {
            let b = pow3(m - 1);
            let five = BigInt::from(5);
            let low = &b * (BigInt::from(-3) + &five * &a + &five * pow3(2 * m) + pow3(3 * m));
            let mid = BigInt::from(2) * pow3(4 * m) - &five * pow3(2 * m) - 3;
            let high = &b * (BigInt::from(3) + &five * &a - &five * pow3(2 * m) + pow3(3 * m));
            (
                exact_quotient(low, 2, "shortened low-weight count")?,
                exact_quotient(mid, 3, "shortened middle-weight count")?,
                exact_quotient(high, 2, "shortened high-weight count")?,
            )
        }
        _ => return Err(Error::invalid(format!("closed forms exist for t = 1, 2; got {t}"))),
    };
    Ok(WeightDistribution::new(
        len - t as usize,
        2 * (2 * m as usize + 1) - t as usize,
        [
            (0, 1),
            (w[0], to_count(low, "count")?),
            (w[1], to_count(mid, "count")?),
            (w[2], to_count(high, "count")?),
        ],
    ))
}

/// Weight distribution of a code shortened on any `t` positions, from the
/// parent distribution, assuming each weight class holds a t-design:
/// A_w(C_T) = C(w,t)·C(ν-t,w) / (C(ν,t)·C(ν-t,w-t)) · A_w(C).
pub fn shortened_wd_transfer(wd: &WeightDistribution, t: usize) -> Result<WeightDistribution> {
    let len = wd.length();
    if t > len || t > wd.dimension() {
        return Err(Error::invalid(format!(
            "cannot shorten a [{len}, {}] code on {t} positions",
            wd.dimension()
        )));
    }
    if t == 0 {
        return Ok(wd.clone());
    }
    let (nu, tt) = (len as u64, t as u64);
    let mut counts = vec![(0usize, 1u128)];
    for (w, a) in wd.nonzero() {
        let w64 = w as u64;
        if w64 < tt || w64 > nu - tt {
            continue;
        }
        // C(w,t)·C(ν−t,w) / (C(ν,t)·C(ν−t,w−t)) reduces to C(ν−w,t)/C(ν,t)
        let value = BigRational::new(binomial(nu - w64, tt) * BigInt::from(a), binomial(nu, tt));
        counts.push((w, rational_to_count(&value, &format!("transferred A_{w}"))?));
    }
    Ok(WeightDistribution::new(len - t, wd.dimension() - t, counts))
}

/// Residuals (left minus right) of the first five Pless power moments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlessReport {
    pub residuals: Vec<BigRational>,
}

impl PlessReport {
    pub fn holds(&self) -> bool {
        self.residuals.iter().all(Zero::is_zero)
    }
}

impl Serialize for PlessReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PlessReport", 2)?;
        let r: Vec<String> = self.residuals.iter().map(ToString::to_string).collect();
        st.serialize_field("residuals", &r)?;
        st.serialize_field("holds", &self.holds())?;
        st.end()
    }
}

/// Evaluates the first five Pless power moments over GF(3) for a primal
/// distribution and the dual counts A_0^⊥..A_4^⊥ (`dual_low[0]` is A_0^⊥ and unused).
pub fn pless_consistency(primal: &WeightDistribution, dual_low: &[u128; 5]) -> PlessReport {
    pless_moments(3, primal, dual_low)
}

fn pless_moments(q: i64, primal: &WeightDistribution, dual_low: &[u128; 5]) -> PlessReport {
    let int = |x: i64| BigInt::from(x);
    let q_big = int(q);
    let v = BigInt::from(primal.length());
    let k = primal.dimension() as i64;
    let a: Vec<BigInt> = dual_low.iter().map(|&x| BigInt::from(x)).collect();
    let (a1, a2, a3, a4) = (&a[1], &a[2], &a[3], &a[4]);

    let q_pow = |e: i64| -> BigRational { BigRational::from_integer(q_big.clone()).pow(e as i32) };

    let moment = |j: u32| -> BigInt {
        primal
            .nonzero()
            .map(|(i, ai)| BigInt::from(i).pow(j) * BigInt::from(ai))
            .sum::<BigInt>()
            + if j == 0 { BigInt::from(primal.count(0)) } else { BigInt::zero() }
    };

    let (q1, q2, q3) = (&q_big, (&q_big).pow(2u32), (&q_big).pow(3u32));
    let (v1, v2, v3) = (&v, (&v).pow(2u32), (&v).pow(3u32));

    let rhs0 = BigInt::zero();
    let rhs1 = q1 * v1 - v1 - a1;
    let rhs2 = (q1 - 1) * v1 * (q1 * v1 - v1 + 1) - (int(2) * q1 * v1 - q1 - int(2) * v1 + 2) * a1
        + int(2) * a2;
    let rhs3 = (q1 - 1)
        * v1
        * (&q2 * &v2 - int(2) * q1 * &v2 + int(3) * q1 * v1 - q1 + &v2 - int(3) * v1 + 2)
        - (int(3) * &q2 * &v2 - int(3) * &q2 * v1 - int(6) * q1 * &v2 + int(12) * q1 * v1 + &q2
            - int(6) * q1
            + int(3) * &v2
            - int(9) * v1
            + 6)
            * a1
        + int(6) * (q1 * v1 - q1 - v1 + 2) * a2
        - int(6) * a3;
    let rhs4 = (q1 - 1)
        * v1
        * (&q3 * &v3 - int(3) * &q2 * &v3 + int(6) * &q2 * &v2 - int(4) * &q2 * v1 + &q2
            + int(3) * q1 * &v3
            - int(12) * q1 * &v2
            + int(15) * q1 * v1
            - int(6) * q1
            - &v3
            + int(6) * &v2
            - int(11) * v1
            + 6)
        - (int(4) * &q3 * &v3 - int(6) * &q3 * &v2 + int(4) * &q3 * v1 - &q3 - int(12) * &q2 * &v3
            + int(36) * &q2 * &v2
            - int(38) * &q2 * v1
            + int(14) * &q2
            + int(12) * q1 * &v3
            - int(54) * q1 * &v2
            + int(78) * q1 * v1
            - int(36) * q1
            - int(4) * &v3
            + int(24) * &v2
            - int(44) * v1
            + 24)
            * a1
        + (int(12) * &q2 * &v2 - int(24) * &q2 * v1 + int(14) * &q2 - int(24) * q1 * &v2
            + int(84) * q1 * v1
            - int(72) * q1
            + int(12) * &v2
            - int(60) * v1
            + 72)
            * a2
        - (int(24) * q1 * v1 - int(36) * q1 - int(24) * v1 + 72) * a3
        + int(24) * a4;

    let brackets = [rhs0, rhs1, rhs2, rhs3, rhs4];
    let residuals = brackets
        .into_iter()
        .enumerate()
        .map(|(j, bracket)| {
            let rhs = if j == 0 {
                q_pow(k)
            } else {
                q_pow(k - j as i64) * BigRational::from_integer(bracket)
            };
            BigRational::from_integer(moment(j as u32)) - rhs
        })
        .collect();
    PlessReport { residuals }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{build_welch_code, weight_distribution};
    use crate::gf::Field;

    #[test]
    fn welch_closed_forms() {
        let wd = predicted_weights_welch(2).unwrap();
        assert_eq!(wd.length(), 121);
        assert_eq!(wd.dimension(), 10);
        assert_eq!(
            wd.nonzero().collect::<Vec<_>>(),
            vec![(72, 10890), (81, 39446), (90, 8712)]
        );
        let wd = predicted_weights_welch(3).unwrap();
        assert_eq!(
            wd.nonzero().collect::<Vec<_>>(),
            vec![(702, 826308), (729, 3189374), (756, 767286)]
        );
        for m in 2..8 {
            let wd = predicted_weights_welch(m).unwrap();
            assert_eq!(wd.total(), 3u128.pow(2 * (2 * m + 1)), "m={m}");
        }
        assert!(predicted_weights_welch(1).is_err());
    }

    #[test]
    fn a4_closed_form() {
        assert_eq!(predicted_a4_dual(2).unwrap(), 2420);
        assert_eq!(predicted_a4_dual(3).unwrap(), 198926);
    }

    #[test]
    fn shortened_closed_forms() {
        let s1 = predicted_shortened_welch(2, 1).unwrap();
        assert_eq!((s1.length(), s1.dimension()), (120, 9));
        assert_eq!(
            s1.nonzero().collect::<Vec<_>>(),
            vec![(72, 4410), (81, 13040), (90, 2232)]
        );
        let s2 = predicted_shortened_welch(3, 2).unwrap();
        assert_eq!((s2.length(), s2.dimension()), (1091, 12));
        assert_eq!(
            s2.nonzero().collect::<Vec<_>>(),
            vec![(702, 105570), (729, 353078), (756, 72792)]
        );
    }

    #[test]
    fn min_weight_lambda_and_printed_expression() {
        assert_eq!(predicted_min_weight_lambda(2).unwrap(), 1917);
        assert_eq!(predicted_min_weight_lambda(3).unwrap(), 170343);
        assert_eq!(printed_min_weight_lambda(2).unwrap(), BigRational::new(1917.into(), 2.into()));
        assert_eq!(printed_min_weight_lambda(3).unwrap(), BigRational::new(170343.into(), 2.into()));
    }

    #[test]
    fn transfer_agrees_with_closed_forms() {
        for m in 2..6 {
            let wd = predicted_weights_welch(m).unwrap();
            for t in 1..=2 {
                assert_eq!(
                    shortened_wd_transfer(&wd, t as usize).unwrap(),
                    predicted_shortened_welch(m, t).unwrap(),
                    "m={m} t={t}"
                );
            }
        }
    }

    #[test]
    fn transfer_values_and_identity() {
        let wd = predicted_weights_welch(2).unwrap();
        assert_eq!(shortened_wd_transfer(&wd, 1).unwrap().count(72), 4410);
        assert_eq!(shortened_wd_transfer(&wd, 0).unwrap(), wd);
        let wd = predicted_weights_welch(3).unwrap();
        assert_eq!(shortened_wd_transfer(&wd, 2).unwrap().count(702), 105570);
    }

    #[test]
    fn transfer_rejects_non_integral() {
        // A lone weight-1 word in length 3 cannot be shared evenly among 3 positions.
        let wd = WeightDistribution::new(3, 1, [(0, 1), (1, 2)]);
        assert!(matches!(
            shortened_wd_transfer(&wd, 1),
            Err(Error::NonIntegral { .. })
        ));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(121, 2), BigInt::from(7260));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    #[test]
    fn pless_on_welch_n5() {
        let wd = predicted_weights_welch(2).unwrap();
        let report = pless_consistency(&wd, &[1, 0, 0, 0, 2420]);
        assert!(report.holds(), "{:?}", report.residuals);
        let bad = pless_consistency(&wd, &[1, 0, 0, 0, 2421]);
        assert!(bad.residuals[..4].iter().all(Zero::is_zero));
        assert!(!bad.residuals[4].is_zero());
    }

    #[test]
    fn pless_on_zero_code() {
        // k = 0: the dual is the whole space, A_i^⊥ = C(ν, i)·2^i.
        for len in [1usize, 4, 9] {
            let wd = WeightDistribution::new(len, 0, [(0, 1)]);
            let full = |i: u64| (binomial(len as u64, i) * BigInt::from(2u32).pow(i as u32)).to_u128().unwrap();
            let dual = [1, full(1), full(2), full(3), full(4)];
            assert!(pless_consistency(&wd, &dual).holds(), "len={len}");
        }
    }

    /// Independent route: the n = 3 Welch code has a 7-dimensional dual whose
    /// distribution can be enumerated outright.
    #[test]
    fn pless_against_enumerated_dual() {
        let f = Field::new(3).unwrap();
        let code = build_welch_code(&f).unwrap();
        let wd = weight_distribution(&code).unwrap();
        let dual_wd = weight_distribution(&code.dual()).unwrap();
        let low = [0, 1, 2, 3, 4].map(|i| dual_wd.count(i));
        assert!(pless_consistency(&wd, &low).holds());
        // And the other way round.
        let low = [0, 1, 2, 3, 4].map(|i| wd.count(i));
        assert!(pless_consistency(&dual_wd, &low).holds());
    }
}
