//! p^k-Eulerian polynomials: brute force over paths, the floor-by-floor
//! inductive method, and the tabulated closed forms for the first floors.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::{DiagramParams, VertexLabel};
use crate::error::{Error, Result};
use crate::hook::pow;
use crate::paths::enumerate_paths;
use crate::stats::{descent_set, DescentRules};
use crate::IntPolynomial;

pub use crate::eulerian_tables::{initial_closed_form, TabulatedForm};

/// `Σ q^des(P)` over every path ending at `v`.
pub fn eulerian_bruteforce(v: &VertexLabel) -> Result<IntPolynomial> {
    let mut counts: Vec<u64> = Vec::new();
    for path in enumerate_paths(v) {
        let d = descent_set(&path)?.len();
        if counts.len() <= d {
            counts.resize(d + 1, 0);
        }
        counts[d] += 1;
    }
    Ok(IntPolynomial::from_coeffs(
        counts.into_iter().map(BigInt::from).collect(),
    ))
}

/// One polynomial per vertex of a class on one floor, keyed by offset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FloorPolynomials {
    pub floor: u32,
    pub class_k: u32,
    #[serde(with = "poly_map")]
    pub by_l: BTreeMap<u64, IntPolynomial>,
}

/// Polynomials for class `k` on floors `2k+2 ..= up_to_floor`, built upward
/// from the seeds `h(q+1)` using the descent rules.
pub fn eulerian_inductive(
    params: &DiagramParams,
    k: u32,
    up_to_floor: u32,
    rules: &DescentRules,
) -> Result<Vec<FloorPolynomials>> {
    if up_to_floor > params.max_floor() {
        return Err(Error::FloorOutOfRange {
            floor: up_to_floor,
            max: params.max_floor(),
        });
    }
    let p = params.p();
    let pk = pow(p, k)?;
    let seed = IntPolynomial::from_coeffs(vec![BigInt::from(params.half()); 2]);
    let mut out = Vec::new();
    if up_to_floor < 2 * k + 2 {
        return Ok(out);
    }
    let v1: BTreeMap<u64, IntPolynomial> = (0..pk).map(|l| (l, seed.clone())).collect();
    out.push(FloorPolynomials {
        floor: 2 * k + 2,
        class_k: k,
        by_l: v1,
    });
    if up_to_floor < 2 * k + 3 {
        return Ok(out);
    }
    let mut w: Vec<IntPolynomial> = vec![seed; (pk * p) as usize];
    let mut s = 2;
    loop {
        out.push(FloorPolynomials {
            floor: 2 * (k + s) - 1,
            class_k: k,
            by_l: w.iter().cloned().enumerate().map(|(i, f)| (i as u64, f)).collect(),
        });
        if 2 * (k + s) > up_to_floor {
            break;
        }
        let v: Vec<IntPolynomial> = (0..pk)
            .into_par_iter()
            .map(|l| -> Result<IntPolynomial> {
                let mut acc = IntPolynomial::zero();
                for t in 0..p {
                    let shift = usize::from(rules.descent_odd(p, k, l, t)?);
                    acc = &acc + &w[(l + pk * t) as usize].shift(shift);
                }
                Ok(acc)
            })
            .collect::<Result<_>>()?;
        out.push(FloorPolynomials {
            floor: 2 * (k + s),
            class_k: k,
            by_l: v.iter().cloned().enumerate().map(|(i, f)| (i as u64, f)).collect(),
        });
        if 2 * (k + s) + 1 > up_to_floor {
            break;
        }
        w = (0..pk * p)
            .into_par_iter()
            .map(|big_l| -> Result<IntPolynomial> {
                let (l, beta) = (big_l / p, big_l % p);
                let mut acc = IntPolynomial::zero();
                for t in 0..p {
                    let d = usize::from(rules.descent_odd(p, k, l, t)?)
                        + usize::from(rules.descent_even(p, k, l, beta, t)?);
                    acc = &acc + &w[(l + pk * t) as usize].shift(d);
                }
                Ok(acc)
            })
            .collect::<Result<_>>()?;
        s += 1;
    }
    Ok(out)
}

pub(crate) mod poly_map {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<u64, IntPolynomial>, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: BTreeMap<String, Vec<String>> = m
            .iter()
            .map(|(l, f)| (l.to_string(), f.coeffs().iter().map(|c| c.to_string()).collect()))
            .collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<u64, IntPolynomial>, D::Error> {
        let v: BTreeMap<String, Vec<String>> = BTreeMap::deserialize(d)?;
        v.into_iter()
            .map(|(l, cs)| {
                let l: u64 = l.parse().map_err(D::Error::custom)?;
                let cs: Vec<BigInt> = cs
                    .iter()
                    .map(|c| c.parse().map_err(D::Error::custom))
                    .collect::<std::result::Result<_, _>>()?;
                Ok((l, IntPolynomial::from_coeffs(cs)))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_half_q_plus_one() {
        let d = DiagramParams::new(5, 6).unwrap();
        let v = d.v_vertex(1, 1, 3).unwrap();
        assert_eq!(eulerian_bruteforce(&v).unwrap(), IntPolynomial::from_i64(&[2, 2]));
        let w = d.w_vertex(1, 2, 17).unwrap();
        assert_eq!(eulerian_bruteforce(&w).unwrap(), IntPolynomial::from_i64(&[2, 2]));
    }

    #[test]
    fn inductive_matches_bruteforce_small() {
        let d = DiagramParams::new(3, 8).unwrap();
        for k in 0..=2 {
            for fp in eulerian_inductive(&d, k, 8, &DescentRules::ADJUDICATED).unwrap() {
                for (&l, f) in &fp.by_l {
                    let v = d.vertex(fp.floor, k as i32, l).unwrap();
                    assert_eq!(&eulerian_bruteforce(&v).unwrap(), f, "floor {} l {l}", fp.floor);
                }
            }
        }
    }
}
