//! Rational generating functions for the Fibonacci sequences of a fixed
//! offset class, their coefficient streams, and the three-term recurrence.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::error::{out_of_range, Error, Result};
use crate::fibonacci::{descent_weights, fib_stages, IntervalClass, IntervalKind, StepSource};
use crate::hook::{self, geometric_sum, pow};
use crate::poly::{Polynomial, Ring};
use crate::stats::DescentRules;
use crate::IntPolynomial;

/// `(scale_num / scale_den) * numerator / denominator` as a power series in `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series<T> {
    pub numerator: Polynomial<T>,
    pub denominator: Polynomial<T>,
    pub scale_num: T,
    pub scale_den: T,
}

impl<T: Ring + Integer> Series<T> {
    pub fn new(numerator: Polynomial<T>, denominator: Polynomial<T>, scale_num: T, scale_den: T) -> Result<Self> {
        if denominator.coeff(0).is_zero() || scale_den.is_zero() {
            return Err(Error::Unsupported(
                "denominator must have a nonzero constant term".into(),
            ));
        }
        Ok(Series {
            numerator,
            denominator,
            scale_num,
            scale_den,
        })
    }
}

/// The first `n_terms` coefficients, each checked to be integral after scaling.
pub fn series_coefficients<T: Ring + Integer>(f: &Series<T>, n_terms: usize) -> Result<Vec<T>> {
    let d0 = f.denominator.coeff(0);
    let mut raw: Vec<T> = Vec::with_capacity(n_terms);
    let mut out = Vec::with_capacity(n_terms);
    for n in 0..n_terms {
        let mut acc = f.numerator.coeff(n);
        for i in 1..=n {
            let di = f.denominator.coeff(i);
            if !di.is_zero() {
                acc = acc - di * raw[n - i].clone();
            }
        }
        if !acc.is_multiple_of(&d0) {
            return Err(Error::NonIntegral(n));
        }
        let r = acc / d0.clone();
        let scaled = r.clone() * f.scale_num.clone();
        if !scaled.is_multiple_of(&f.scale_den) {
            return Err(Error::NonIntegral(n));
        }
        out.push(scaled / f.scale_den.clone());
        raw.push(r);
    }
    Ok(out)
}

/// Which Fibonacci sequence a generating function describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SequenceClass {
    K0,
    K1 {
        t: u64,
    },
    /// An interval class of the stable regime `s >= k+2`, `k >= 2`.
    Interval(IntervalClass),
}

/// `((p-1)/2) [C/(1-px) + (2p^(k+1) - 2px)/(1-px)^2]`.
fn standard_form(p: u64, k: u32, c: BigInt) -> Result<Series<BigInt>> {
    let pb = BigInt::from(p);
    let one_minus_px = IntPolynomial::from_coeffs(vec![BigInt::from(1), -pb.clone()]);
    let second = IntPolynomial::from_coeffs(vec![BigInt::from(2) * pb.pow(k + 1), BigInt::from(-2) * &pb]);
    let numerator = &one_minus_px.scale(&c) + &second;
    let denominator = &one_minus_px * &one_minus_px;
    Series::new(numerator, denominator, BigInt::from(p - 1), BigInt::from(2))
}

/// The constant `C` in front of `1/(1-px)`, as printed.
pub fn printed_constant(p: u64, k: u32, class: &SequenceClass) -> Result<BigInt> {
    hook::check_odd_prime(p)?;
    let h = (p - 1) / 2;
    let pb = BigInt::from(p);
    let g = |a: u32, b: i64| -> Result<BigInt> { Ok(BigInt::from(geometric_sum(p, a, b)?)) };
    let two = BigInt::from(2);
    match (k, class) {
        (0, SequenceClass::K0) => Ok(BigInt::from(-1)),
        (1, SequenceClass::K1 { t }) => {
            if *t >= p {
                return Err(out_of_range("t", *t, format!("[0, {}]", p - 1)));
            }
            let base = &two * &pb * &pb + 2 * t - 1;
            Ok(if *t < h { base } else { base - &two * &pb })
        }
        (k, SequenceClass::Interval(c)) if k >= 2 => {
            let lead = &two * k * pb.pow(k + 1);
            let r = g(0, i64::from(k) - 1)?;
            let t_term = |t: u64| {
                if t <= h {
                    &two * t * &r
                } else {
                    (&two * t - &two * p) * &r
                }
            };
            Ok(match c.kind {
                IntervalKind::A => lead - 1,
                IntervalKind::B => {
                    let i = c
                        .i_or_iprime
                        .ok_or_else(|| Error::Unsupported("class (b) needs i".into()))?;
                    let t = c.t.ok_or_else(|| Error::Unsupported("class (b) needs t".into()))?;
                    t_term(t) - &two * g(0, i64::from(k) - i64::from(i) - 2)? + lead - 1
                }
                IntervalKind::C => {
                    let t = c.t.ok_or_else(|| Error::Unsupported("class (c) needs t".into()))?;
                    t_term(t) + lead - 1
                }
                IntervalKind::D => {
                    let ip = c
                        .i_or_iprime
                        .ok_or_else(|| Error::Unsupported("class (d) needs i'".into()))?;
                    printed_d_constant(p, k, ip)?
                }
                IntervalKind::E => lead - 2 - pb.pow(k) - &two * g(1, i64::from(k) - 1)?,
                IntervalKind::F => {
                    return Err(Error::Unsupported("class (f) has no stable generating function".into()))
                }
            })
        }
        _ => Err(Error::Unsupported(format!(
            "{class:?} does not belong to class k = {k}"
        ))),
    }
}

/// The printed class-(d) constant `p^k - 2Σ_{1..k-1} p^θ + 2Σ_{k-i'+1..k-1} p^μ + 2kp^(k+1) - 2`.
pub fn printed_d_constant(p: u64, k: u32, iprime: u32) -> Result<BigInt> {
    if iprime >= k {
        return Err(out_of_range("i'", iprime, format!("[0, {}]", k - 1)));
    }
    let pb = BigInt::from(p);
    let two = BigInt::from(2);
    let g = |a: u32, b: i64| -> Result<BigInt> { Ok(BigInt::from(geometric_sum(p, a, b)?)) };
    Ok(pb.pow(k) - &two * g(1, i64::from(k) - 1)?
        + &two * g(k - iprime + 1, i64::from(k) - 1)?
        + &two * k * pb.pow(k + 1)
        - 2)
}

/// The printed generating function of a class; coefficient `n` is stage `s = n + k + 2`.
pub fn genfun_for_class(p: u64, k: u32, class: &SequenceClass) -> Result<Series<BigInt>> {
    let c = printed_constant(p, k, class)?;
    standard_form(p, k, c)
}

/// Class (d) with an arbitrary `i'`, including values outside the closed-form range.
pub fn genfun_class_d(p: u64, k: u32, iprime: u32) -> Result<Series<BigInt>> {
    standard_form(p, k, printed_d_constant(p, k, iprime)?)
}

/// One instance of the three-term recurrence at stage `s` and offset `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceRow {
    pub p: u64,
    pub k: u32,
    pub l: u64,
    pub s: u32,
    /// `M(s+2, l)`.
    pub lhs: BigInt,
    /// The two predecessor sums, without `b_s`.
    pub sums: BigInt,
    pub printed_b: Option<BigInt>,
    pub derived_b: BigInt,
    pub regime: String,
    pub pass_printed: bool,
    pub pass_derived: bool,
}

/// The printed `b_s`; `None` where no printed case covers `l`.
pub fn printed_b(p: u64, k: u32, l: u64, s: u32) -> Result<(Option<BigInt>, String)> {
    let pb = BigInt::from(p);
    let lead = pb.pow(s - 1) * (p - 1);
    let h = (p - 1) / 2;
    if k == 0 {
        return Ok((Some(lead * (p * p - 1)), "k = 0".into()));
    }
    let t = hook::j_class(p, k, l)?;
    let repunit = (pow(p, k)? - 1) / (p - 1);
    let on_j = l == t * repunit;
    let with_p = t < h || (k >= 2 && t == h && !on_j);
    if with_p {
        Ok((Some(lead * (p * p + p + t)), format!("t = {t} below (p-1)/2")))
    } else if k == 1 || t > h {
        Ok((Some(lead * (p * p + t)), format!("t = {t} from (p-1)/2 on")))
    } else {
        Ok((None, format!("l = j_{t} not covered")))
    }
}

/// `b_s` computed from the step weights: `(p-1)[p^s A(l) + p^(s-1) B(l) + p^(s-1) A(l') + p^(s-2) B(l')]`
/// with `l' = l div p`.
pub fn derived_b(p: u64, k: u32, l: u64, s: u32, rules: &DescentRules) -> Result<BigInt> {
    if s < 2 {
        return Err(out_of_range("s", s, "[2, ..)"));
    }
    let pb = BigInt::from(p);
    let (a, b) = descent_weights(p, k, l, rules)?;
    let (a2, b2) = descent_weights(p, k, l / p, rules)?;
    Ok((pb.pow(s) * a + pb.pow(s - 1) * b + pb.pow(s - 1) * a2 + pb.pow(s - 2) * b2) * (p - 1))
}

/// Check `M(s+2) = Σ_{t2} M(s, α + p^(k-1) t2) + Σ_{t1 >= 1} M(s+1, α' + p^(k-1) t1) + b_s`
/// for `s` from `max(k+2, 2)` while `s + 2 <= s_max`; class 0 uses `p M(s) + (p-1) M(s+1) + b_s`.
pub fn recurrence_check(p: u64, k: u32, l: u64, s_max: u32, rules: &DescentRules) -> Result<Vec<RecurrenceRow>> {
    hook::check_odd_prime(p)?;
    let pk = pow(p, k)?;
    if l >= pk {
        return Err(out_of_range("l", l, format!("[0, {pk})")));
    }
    let m = fib_stages(p, k, s_max, &StepSource::Rules(*rules))?;
    let at = |s: u32, i: u64| m[s as usize - 1][i as usize].clone();
    let mut rows = Vec::new();
    let s0 = (k + 2).max(2);
    for s in s0..=s_max.saturating_sub(2) {
        let lhs = at(s + 2, l);
        let sums: BigInt = if k == 0 {
            at(s, 0) * p + at(s + 1, 0) * (p - 1)
        } else {
            let step = pk / p;
            let a1 = l / p;
            let a0 = a1 / p;
            let first: BigInt = (0..p).map(|t| at(s, a0 + step * t)).sum();
            let second: BigInt = (1..p).map(|t| at(s + 1, a1 + step * t)).sum();
            first + second
        };
        let (pb, regime) = printed_b(p, k, l, s)?;
        let db = derived_b(p, k, l, s, rules)?;
        rows.push(RecurrenceRow {
            p,
            k,
            l,
            s,
            pass_printed: pb.as_ref().is_some_and(|b| &sums + b == lhs),
            pass_derived: &sums + &db == lhs,
            lhs,
            sums,
            printed_b: pb,
            derived_b: db,
            regime,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series() {
        let f = Series::new(
            IntPolynomial::from_i64(&[1]),
            IntPolynomial::from_i64(&[1, -3]),
            BigInt::from(1),
            BigInt::from(1),
        )
        .unwrap();
        assert_eq!(series_coefficients(&f, 4).unwrap(), [1, 3, 9, 27].map(BigInt::from));
    }

    #[test]
    fn k0_prefix() {
        let f = genfun_for_class(3, 0, &SequenceClass::K0).unwrap();
        assert_eq!(
            series_coefficients(&f, 5).unwrap(),
            [5, 27, 117, 459, 1701].map(BigInt::from)
        );
    }

    #[test]
    fn non_integral_flagged() {
        let f = Series::new(
            IntPolynomial::from_i64(&[1]),
            IntPolynomial::from_i64(&[1]),
            BigInt::from(1),
            BigInt::from(2),
        )
        .unwrap();
        assert_eq!(series_coefficients(&f, 1), Err(Error::NonIntegral(0)));
    }

    #[test]
    fn k0_recurrence() {
        let rows = recurrence_check(3, 0, 0, 6, &DescentRules::ADJUDICATED).unwrap();
        assert_eq!(rows[0].lhs, BigInt::from(117));
        assert_eq!(rows[0].printed_b, Some(BigInt::from(48)));
        assert!(rows.iter().all(|r| r.pass_printed && r.pass_derived));
    }
}
