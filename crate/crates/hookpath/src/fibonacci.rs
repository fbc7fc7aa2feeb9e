//! p^k-Fibonacci numbers: descent totals over the paths ending at a
//! `V`-vertex, their stage recursion, the interval classes on which they are
//! constant, and the closed forms.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::{DiagramParams, VertexLabel};
use crate::error::{out_of_range, Error, Result};
use crate::eulerian::eulerian_bruteforce;
use crate::hook::{self, geometric_sum, pow};
use crate::paths::enumerate_paths;
use crate::stats::{descent_set, DescentRules};

/// `Σ des(P)` over every path ending at `v`.
pub fn fib_bruteforce(v: &VertexLabel) -> Result<BigInt> {
    let mut total = 0u64;
    for path in enumerate_paths(v) {
        total += descent_set(&path)?.len() as u64;
    }
    Ok(BigInt::from(total))
}

/// `F'(1) = M` at `v`, both sides by brute force.
pub fn derivative_identity_check(v: &VertexLabel) -> Result<bool> {
    let f = eulerian_bruteforce(v)?;
    Ok(f.derivative().eval(&BigInt::one()) == fib_bruteforce(v)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibTable {
    pub class_k: u32,
    pub floor: u32,
    #[serde(with = "big_map")]
    pub by_l: BTreeMap<u64, BigInt>,
}

impl FibTable {
    pub fn stage(&self) -> u32 {
        self.floor / 2 - self.class_k
    }
}

/// Where the per-step descent counts come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StepSource {
    /// Count descents with the given rules.
    Rules(DescentRules),
    /// The printed five-case constants; class `k >= 1` only.
    Printed,
}

/// `(A, B)` for offset `l`: the number of `t'` giving a descent at the odd
/// position, and the number of `(t', t'')` pairs giving one at the even position.
pub fn descent_weights(p: u64, k: u32, l: u64, rules: &DescentRules) -> Result<(u64, u64)> {
    hook::check_odd_prime(p)?;
    let pk = pow(p, k)?;
    if l >= pk {
        return Err(out_of_range("l", l, format!("[0, {pk})")));
    }
    let mut a = 0;
    let mut b = 0;
    for t in 0..p {
        a += u64::from(rules.descent_odd(p, k, l, t)?);
        let big_l = l + pk * t;
        for t2 in 0..p {
            b += u64::from(rules.descent_even(p, k, big_l / p, big_l % p, t2)?);
        }
    }
    Ok((a, b))
}

/// The printed constants `((p±1)/2, p(p-1)/2 + t)` of the five-case update.
///
/// With `c = (p^k-1)/2`: `l < c - h`, `c - h <= l < c`, `l = c`,
/// `c < l <= c + h`, and `l > c + h`, where `h = (p-1)/2`.
pub fn printed_step_constants(p: u64, k: u32, l: u64) -> Result<(u64, u64)> {
    hook::check_odd_prime(p)?;
    if k == 0 {
        return Err(Error::Unsupported("the five-case update needs k >= 1".into()));
    }
    let pk = pow(p, k)?;
    if l >= pk {
        return Err(out_of_range("l", l, format!("[0, {pk})")));
    }
    let h = (p - 1) / 2;
    let c = (pk - 1) / 2;
    let base = p * (p - 1) / 2;
    let t = hook::j_class(p, k, l)?;
    Ok(if l + h < c {
        (h + 1, base + t)
    } else if l < c {
        (h + 1, base + h)
    } else if l == c {
        (h, base + h)
    } else if l <= c + h {
        (h, base + h + 1)
    } else {
        (h, base + t)
    })
}

fn weights(p: u64, k: u32, l: u64, source: &StepSource) -> Result<(u64, u64)> {
    match source {
        StepSource::Rules(r) => descent_weights(p, k, l, r),
        StepSource::Printed => printed_step_constants(p, k, l),
    }
}

/// `M` for stages `1 ..= s_max` of class `k`, indexed `[s-1][l]`.
///
/// Stage 1 is `(p-1)/2` everywhere; stage `s+1` adds over the `p`
/// predecessors `(l + p^k t') div p` the counts
/// `p^(s-1)(p-1) A(l) + p^(s-2)(p-1) B(l)`.
pub fn fib_stages(p: u64, k: u32, s_max: u32, source: &StepSource) -> Result<Vec<Vec<BigInt>>> {
    hook::check_odd_prime(p)?;
    let pk = pow(p, k)?;
    let h = BigInt::from((p - 1) / 2);
    let ab: Vec<(u64, u64)> = (0..pk)
        .into_par_iter()
        .map(|l| weights(p, k, l, source))
        .collect::<Result<_>>()?;
    let mut out = vec![vec![h; pk as usize]];
    let pb = BigInt::from(p);
    for s in 1..s_max {
        let prev = out.last().expect("seeded");
        let odd_mult = pb.pow(s - 1) * (p - 1);
        let even_mult = if s >= 2 {
            pb.pow(s - 2) * (p - 1)
        } else {
            BigInt::zero()
        };
        let next: Vec<BigInt> = (0..pk)
            .into_par_iter()
            .map(|l| {
                let mut m: BigInt = (0..p).map(|t| &prev[((l + pk * t) / p) as usize]).sum();
                let (a, b) = ab[l as usize];
                m += &odd_mult * a + &even_mult * b;
                m
            })
            .collect();
        out.push(next);
    }
    Ok(out)
}

/// The stage recursion as floor tables on `2k+2, 2k+4, ... <= up_to_floor`.
pub fn fib_recursive(params: &DiagramParams, k: u32, up_to_floor: u32, source: &StepSource) -> Result<Vec<FibTable>> {
    if up_to_floor > params.max_floor() {
        return Err(Error::FloorOutOfRange {
            floor: up_to_floor,
            max: params.max_floor(),
        });
    }
    if up_to_floor < 2 * k + 2 {
        return Ok(Vec::new());
    }
    let s_max = up_to_floor / 2 - k;
    let stages = fib_stages(params.p(), k, s_max, source)?;
    Ok(stages
        .into_iter()
        .enumerate()
        .map(|(i, vals)| FibTable {
            class_k: k,
            floor: 2 * (k + i as u32 + 1),
            by_l: vals.into_iter().enumerate().map(|(l, m)| (l as u64, m)).collect(),
        })
        .collect())
}

/// The pieces of one step of the recursion at stage `s` (the target's stage).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepTerms {
    pub predecessors: Vec<u64>,
    pub predecessor_values: Vec<BigInt>,
    pub odd_term: BigInt,
    pub even_term: BigInt,
    pub total: BigInt,
}

pub fn step_terms(p: u64, k: u32, s: u32, l: u64, source: &StepSource) -> Result<StepTerms> {
    if s < 2 {
        return Err(out_of_range("s", s, "[2, ..)"));
    }
    let pk = pow(p, k)?;
    let stages = fib_stages(p, k, s - 1, source)?;
    let prev = stages.last().expect("at least one stage");
    let (a, b) = weights(p, k, l, source)?;
    let predecessors: Vec<u64> = (0..p).map(|t| (l + pk * t) / p).collect();
    let predecessor_values: Vec<BigInt> = predecessors.iter().map(|&i| prev[i as usize].clone()).collect();
    let pb = BigInt::from(p);
    let odd_term = pb.pow(s - 2) * (p - 1) * a;
    let even_term = if s >= 3 {
        pb.pow(s - 3) * (p - 1) * b
    } else {
        BigInt::zero()
    };
    let total = predecessor_values.iter().sum::<BigInt>() + &odd_term + &even_term;
    Ok(StepTerms {
        predecessors,
        predecessor_values,
        odd_term,
        even_term,
        total,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum IntervalKind {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl IntervalKind {
    pub fn letter(&self) -> char {
        match self {
            IntervalKind::A => 'a',
            IntervalKind::B => 'b',
            IntervalKind::C => 'c',
            IntervalKind::D => 'd',
            IntervalKind::E => 'e',
            IntervalKind::F => 'f',
        }
    }
}

/// A closed range `[lo, hi]` of offsets on which `M` is constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IntervalClass {
    pub kind: IntervalKind,
    pub t: Option<u64>,
    pub i_or_iprime: Option<u32>,
    pub lo: u64,
    pub hi: u64,
}

impl IntervalClass {
    pub fn contains(&self, l: u64) -> bool {
        self.lo <= l && l <= self.hi
    }

    pub fn label(&self) -> String {
        let mut s = format!("({})", self.kind.letter());
        if let Some(t) = self.t {
            s.push_str(&format!(" t={t}"));
        }
        if let Some(i) = self.i_or_iprime {
            s.push_str(&format!(" i={i}"));
        }
        s
    }
}

fn class(kind: IntervalKind, t: Option<u64>, i: Option<u32>, lo: u64, hi: u64) -> IntervalClass {
    IntervalClass {
        kind,
        t,
        i_or_iprime: i,
        lo,
        hi,
    }
}

fn check_interval_args(p: u64, k: u32, s: u32) -> Result<()> {
    hook::check_odd_prime(p)?;
    if k < 2 {
        return Err(out_of_range("k", k, "[2, ..)"));
    }
    if s < 3 {
        return Err(out_of_range("s", s, "[3, ..)"));
    }
    Ok(())
}

fn build_classes(p: u64, k: u32, s: u32, printed: bool) -> Result<Vec<IntervalClass>> {
    check_interval_args(p, k, s)?;
    let h = (p - 1) / 2;
    let g = |a: u32, b: u32| geometric_sum(p, a, i64::from(b));
    let top = k - 1;
    let mut out = vec![class(IntervalKind::A, None, None, 0, 0)];
    if s < k + 2 {
        for i in 0..s.saturating_sub(3) {
            for t in 1..p {
                let lo = (t - 1) * g(i, top)? + pow(p, i)?;
                let hi = (t - 1) * g(i + 1, top)? + pow(p, i + 1)? - 1;
                out.push(class(IntervalKind::B, Some(t), Some(i), lo, hi));
            }
        }
        let e = s - 3;
        for t in (1..p).filter(|&t| t != h) {
            let lo = (t - 1) * g(e, top)? + pow(p, e)?;
            out.push(class(IntervalKind::C, Some(t), None, lo, t * g(0, top)?));
        }
        let d_hi = h * g(s - 2, top)?;
        out.push(class(
            IntervalKind::D,
            None,
            None,
            (h - 1) * g(e, top)? + pow(p, e)?,
            if printed { d_hi } else { d_hi - 1 },
        ));
        for ip in 1..=s - 2 {
            out.push(class(
                IntervalKind::E,
                None,
                Some(ip),
                h * g(ip, top)?,
                h * g(ip - 1, top)? - 1,
            ));
        }
        out.push(class(IntervalKind::F, None, None, h * g(0, top)?, h * g(0, top)?));
    } else {
        for i in 0..=k - 2 {
            for t in 1..p {
                let lo = (t - 1) * g(i, top)? + pow(p, i)?;
                let hi = (t - 1) * g(i + 1, top)? + pow(p, i + 1)? - 1;
                out.push(class(IntervalKind::B, Some(t), Some(i), lo, hi));
            }
        }
        for t in (1..p).filter(|&t| t != h) {
            out.push(class(
                IntervalKind::C,
                Some(t),
                None,
                t * pow(p, k - 1)?,
                t * g(0, top)?,
            ));
        }
        for ip in 1..=k - 1 {
            out.push(class(
                IntervalKind::D,
                None,
                Some(ip),
                h * g(ip, top)?,
                h * g(ip - 1, top)? - 1,
            ));
        }
        out.push(class(IntervalKind::E, None, None, h * g(0, top)?, h * g(0, top)?));
    }
    out.sort_by_key(|c| (c.lo, c.hi));
    Ok(out)
}

/// Classes partitioning `[0, p^k)` into ranges of constant `M`, `k >= 2`, `s >= 3`.
///
/// Below `s = k+2` there are `(s-2)p + 2` of them; from `s = k+2` on, `kp`.
pub fn interval_classes(p: u64, k: u32, s: u32) -> Result<Vec<IntervalClass>> {
    build_classes(p, k, s, false)
}

/// The classes with their bounds exactly as printed; class (d) then overlaps (e).
pub fn printed_interval_classes(p: u64, k: u32, s: u32) -> Result<Vec<IntervalClass>> {
    build_classes(p, k, s, true)
}

pub fn classify(classes: &[IntervalClass], l: u64) -> Option<&IntervalClass> {
    classes.iter().find(|c| c.contains(l))
}

/// Maximal runs of equal values, as `(lo, hi, value)`.
pub fn constancy_runs(values: &[BigInt]) -> Vec<(u64, u64, BigInt)> {
    let mut out: Vec<(u64, u64, BigInt)> = Vec::new();
    for (i, v) in values.iter().enumerate() {
        match out.last_mut() {
            Some(last) if &last.2 == v => last.1 = i as u64,
            _ => out.push((i as u64, i as u64, v.clone())),
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormValue {
    pub value: BigInt,
    pub case: String,
}

fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

/// Closed-form `M` at stage `s`, offset `l` of class `k`.
///
/// Class 0 needs `s >= 2`; class 1 and above need `s >= 3`.
pub fn fib_closed_form(p: u64, k: u32, s: u32, l: u64) -> Result<ClosedFormValue> {
    hook::check_odd_prime(p)?;
    let pk = pow(p, k)?;
    if l >= pk {
        return Err(out_of_range("l", l, format!("[0, {pk})")));
    }
    let pb = big(p);
    let h = big((p - 1) / 2);
    let hu = (p - 1) / 2;
    let si = BigInt::from(s);
    let g = |a: u32, b: i64| -> Result<BigInt> { Ok(big(geometric_sum(p, a, b)?)) };
    match k {
        0 => {
            if s < 2 {
                return Err(out_of_range("s", s, "[2, ..)"));
            }
            let v = &h * (BigInt::from(2) * (&si - 1) * pb.pow(s - 1) - (BigInt::from(2) * &si - 3) * pb.pow(s - 2));
            Ok(ClosedFormValue {
                value: v,
                case: "k = 0".into(),
            })
        }
        1 => {
            if s < 3 {
                return Err(out_of_range("s", s, "[3, ..)"));
            }
            let t = l;
            let mut inner = BigInt::from(2) * (&si - 1) * &pb * &pb + 2 * t - (BigInt::from(2) * &si - 5);
            let case = if t >= hu {
                inner -= 2 * &pb;
                "k = 1, t >= (p-1)/2"
            } else {
                "k = 1, t < (p-1)/2"
            };
            Ok(ClosedFormValue {
                value: pb.pow(s - 3) * &h * inner,
                case: case.into(),
            })
        }
        _ => {
            let classes = interval_classes(p, k, s)?;
            let Some(c) = classify(&classes, l) else {
                return Err(Error::Uncovered {
                    l,
                    context: format!("interval classes p = {p}, k = {k}, s = {s}"),
                });
            };
            let two = BigInt::from(2);
            let t_term = |t: u64| -> Result<BigInt> {
                let r = g(0, i64::from(k) - 1)?;
                Ok(if t <= hu {
                    &two * t * r
                } else {
                    (&two * t - &two * p) * r
                })
            };
            let value = if s < k + 2 {
                let b0 = &two * (&si - 1) * pb.pow(s - 1);
                let ps2 = pb.pow(s - 2);
                let gs = |t: u64| -> Result<BigInt> {
                    let r = g(0, i64::from(s) - 3)?;
                    Ok(if t <= hu {
                        &b0 + 1 + &two * t * r
                    } else {
                        &b0 - 1 + (&two * t - &two * p) * r
                    })
                };
                let inner = match c.kind {
                    IntervalKind::A => &b0 + 1,
                    IntervalKind::B => {
                        let i = c.i_or_iprime.expect("class b carries i");
                        gs(c.t.expect("class b carries t"))? - &two * g(0, i64::from(s) - i64::from(i) - 4)?
                    }
                    IntervalKind::C => gs(c.t.expect("class c carries t"))?,
                    IntervalKind::D => &b0 + &ps2,
                    IntervalKind::E => {
                        let ip = c.i_or_iprime.expect("class e carries i'");
                        &b0 - 1 - &ps2 - &two * g(1, i64::from(s) - 3)? + &two * g(s - ip - 1, i64::from(s) - 2)? - 1
                    }
                    IntervalKind::F => &b0 - 2 - &ps2 - &two * g(1, i64::from(s) - 3)?,
                };
                &h * inner
            } else {
                let bs = &two * (&si - 1) * pb.pow(k + 1) - &two * (&si - k) + 3;
                let offset = match c.kind {
                    IntervalKind::A => BigInt::zero(),
                    IntervalKind::B => {
                        let i = c.i_or_iprime.expect("class b carries i");
                        t_term(c.t.expect("class b carries t"))? - &two * g(0, i64::from(k) - i64::from(i) - 2)?
                    }
                    IntervalKind::C => t_term(c.t.expect("class c carries t"))?,
                    IntervalKind::D => {
                        let ip = c.i_or_iprime.expect("class d carries i'");
                        -pb.pow(k) - &two * g(1, i64::from(k) - 1)? + &two * g(k - ip + 1, i64::from(k))? - 1
                    }
                    IntervalKind::E => -pb.pow(k) - &two * g(1, i64::from(k) - 1)? - 1,
                    IntervalKind::F => unreachable!("no class (f) from s = k+2 on"),
                };
                pb.pow(s - 2 - k) * &h * (bs + offset)
            };
            let regime = if s < k + 2 { "s < k+2" } else { "s >= k+2" };
            Ok(ClosedFormValue {
                value,
                case: format!("{regime}, {}", c.label()),
            })
        }
    }
}

pub(crate) mod big_map {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<u64, BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: BTreeMap<String, String> = m.iter().map(|(l, x)| (l.to_string(), x.to_string())).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<u64, BigInt>, D::Error> {
        let v: BTreeMap<String, String> = BTreeMap::deserialize(d)?;
        v.into_iter()
            .map(|(l, x)| {
                Ok((
                    l.parse().map_err(D::Error::custom)?,
                    x.parse().map_err(D::Error::custom)?,
                ))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ADJ: StepSource = StepSource::Rules(DescentRules::ADJUDICATED);

    #[test]
    fn worked_values() {
        let st = fib_stages(5, 2, 4, &ADJ).unwrap();
        let m3: Vec<i64> = st[2].iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(m3[0], 202);
        assert!(m3[1..=6].iter().all(|&x| x == 206));
        assert_eq!(m3[12], 186);
        assert_eq!(st[3][10], BigInt::from(1526));
        let terms = step_terms(5, 2, 4, 10, &ADJ).unwrap();
        assert_eq!(terms.odd_term, BigInt::from(300));
        assert_eq!(terms.even_term, BigInt::from(240));
    }

    #[test]
    fn class_counts() {
        assert_eq!(interval_classes(5, 2, 3).unwrap().len(), 7);
        assert_eq!(interval_classes(3, 2, 4).unwrap().len(), 6);
        assert_eq!(interval_classes(3, 3, 4).unwrap().len(), 8);
    }

    #[test]
    fn k0_closed_form() {
        let v: Vec<BigInt> = (2..=5).map(|s| fib_closed_form(3, 0, s, 0).unwrap().value).collect();
        assert_eq!(v, [5, 27, 117, 459].map(BigInt::from));
    }
}
