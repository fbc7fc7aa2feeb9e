//! Descents, inversions and signs of paths, and rule-based descent predictions.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::diagram::VertexLabel;
use crate::error::{out_of_range, Error, Result};
use crate::hook::{self, pow};
use crate::paths::{blocks_of, enumerate_paths, BlockAt, Path};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentProfile {
    pub descent_set: BTreeSet<u32>,
    pub des: u32,
    pub inv: u32,
    pub sign: i8,
}

/// Block order for positions past 2: more horizontal and fewer vertical nodes.
pub fn block_greater(a: &BlockAt, b: &BlockAt) -> Result<bool> {
    if a.position <= 2 || b.position <= a.position {
        return Err(Error::ConventionPosition(a.position, b.position));
    }
    Ok(a.block.horiz > b.block.horiz && a.block.vert < b.block.vert)
}

/// Whether position 1 counts as a descent: the first step's `t` is below `(p-1)/2`.
pub fn first_position_descent(path: &Path) -> bool {
    !path.m_seq.is_empty() && path.first_t() < (path.p - 1) / 2
}

pub fn descent_set(path: &Path) -> Result<BTreeSet<u32>> {
    let blocks = blocks_of(path)?;
    let mut out = BTreeSet::new();
    if first_position_descent(path) {
        out.insert(1);
    }
    for w in blocks.windows(2) {
        if w[0].position >= 3 && block_greater(&w[0], &w[1])? {
            out.insert(w[0].position);
        }
    }
    Ok(out)
}

pub fn inversion_set(path: &Path) -> Result<BTreeSet<(u32, u32)>> {
    let blocks = blocks_of(path)?;
    let mut out = BTreeSet::new();
    if first_position_descent(path) {
        out.insert((1, 2));
    }
    let tail: Vec<&BlockAt> = blocks.iter().filter(|b| b.position >= 3).collect();
    for (i, a) in tail.iter().enumerate() {
        for b in &tail[i + 1..] {
            if block_greater(a, b)? {
                out.insert((a.position, b.position));
            }
        }
    }
    Ok(out)
}

pub fn profile(path: &Path) -> Result<DescentProfile> {
    let descent_set = descent_set(path)?;
    let inv = inversion_set(path)?.len() as u32;
    Ok(DescentProfile {
        des: descent_set.len() as u32,
        descent_set,
        inv,
        sign: if inv % 2 == 0 { 1 } else { -1 },
    })
}

/// `Σ (-1)^inv` over all paths ending at `v`.
pub fn sign_balance(v: &VertexLabel) -> Result<BigInt> {
    let mut total = BigInt::zero();
    for path in enumerate_paths(v) {
        total += profile(&path)?.sign;
    }
    Ok(total)
}

/// Descents at `(2s-1, 2s)` on the path whose every step uses the same `t`.
pub fn predicted_descents_special(p: u64, t: u64, s: u32) -> Result<(bool, bool)> {
    hook::check_odd_prime(p)?;
    if t >= p {
        return Err(out_of_range("t", t, format!("[0, {}]", p - 1)));
    }
    if s < 2 {
        return Err(out_of_range("s", s, "[2, ..)"));
    }
    let h = (p - 1) / 2;
    Ok((t < h, t > h))
}

/// Threshold on `l` splitting the two descent ranges at odd positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum OddThreshold {
    /// `(p^k - 1) / 2`.
    HalfRepunit,
    /// `p^k (p - 1) / 2`, which never splits since `l < p^k`.
    HalfBlock,
}

/// Lower bound on `t'` for a descent at even positions when `l` lies strictly inside a window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EvenBound {
    /// `t' >= p - t`.
    Tight,
    /// `t' >= p - 1 - t`.
    Loose,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DescentRules {
    pub odd_threshold: OddThreshold,
    pub even_bound: EvenBound,
}

impl DescentRules {
    /// The variant that agrees with raw block comparison.
    pub const ADJUDICATED: DescentRules = DescentRules {
        odd_threshold: OddThreshold::HalfRepunit,
        even_bound: EvenBound::Tight,
    };

    pub const ALL: [DescentRules; 4] = [
        Self::ADJUDICATED,
        DescentRules {
            odd_threshold: OddThreshold::HalfBlock,
            even_bound: EvenBound::Tight,
        },
        DescentRules {
            odd_threshold: OddThreshold::HalfRepunit,
            even_bound: EvenBound::Loose,
        },
        DescentRules {
            odd_threshold: OddThreshold::HalfBlock,
            even_bound: EvenBound::Loose,
        },
    ];

    pub fn label(&self) -> String {
        let odd = match self.odd_threshold {
            OddThreshold::HalfRepunit => "(p^k-1)/2",
            OddThreshold::HalfBlock => "p^k(p-1)/2",
        };
        let even = match self.even_bound {
            EvenBound::Tight => "p-t",
            EvenBound::Loose => "p-1-t",
        };
        format!("odd threshold {odd}, even bound {even}")
    }

    /// Descent at `2s-1` on a path entering `V_s(l)` from `W_s(l + p^k t')`.
    pub fn descent_odd(&self, p: u64, k: u32, l: u64, t_prime: u64) -> Result<bool> {
        let h = (p - 1) / 2;
        if k == 0 {
            return Ok(t_prime < h);
        }
        let pk = pow(p, k)?;
        // 2l < 2c with c the threshold, kept in integers
        let below = match self.odd_threshold {
            OddThreshold::HalfRepunit => 2 * l < pk - 1,
            OddThreshold::HalfBlock => 2 * l < pk * (p - 1),
        };
        Ok(if below { t_prime <= h } else { t_prime < h })
    }

    /// Descent at `2s` on a path through `W_s(l + p^k t') -> V_s(l) -> W_{s+1}(p l + β')`.
    pub fn descent_even(&self, p: u64, k: u32, l: u64, beta_prime: u64, t_prime: u64) -> Result<bool> {
        if k == 0 {
            return Ok(beta_prime != 0 && t_prime + beta_prime > p - 1);
        }
        let pk = pow(p, k)?;
        let repunit = (pk - 1) / (p - 1);
        let t = hook::j_class(p, k, l)?;
        if l == t * repunit {
            let bound = if beta_prime <= t { p - t } else { p - t - 1 };
            return Ok(t_prime >= bound);
        }
        Ok(match self.even_bound {
            EvenBound::Tight => t_prime + t >= p,
            EvenBound::Loose => t_prime + t + 1 >= p,
        })
    }
}

/// Rule-based prediction of the descents at `(2s-1, 2s)` for the path
/// through `W_s(l + p^k t') -> V_s(l) -> W_{s+1}(p l + β')`.
pub fn predicted_descents_general(
    p: u64,
    k: u32,
    l: u64,
    beta_prime: u64,
    t_prime: u64,
    rules: &DescentRules,
) -> Result<(bool, bool)> {
    hook::check_odd_prime(p)?;
    let pk = pow(p, k)?;
    if l >= pk {
        return Err(out_of_range("l", l, format!("[0, {pk})")));
    }
    if beta_prime >= p || t_prime >= p {
        return Err(out_of_range(
            "beta', t'",
            beta_prime.max(t_prime),
            format!("[0, {}]", p - 1),
        ));
    }
    Ok((
        rules.descent_odd(p, k, l, t_prime)?,
        rules.descent_even(p, k, l, beta_prime, t_prime)?,
    ))
}

/// Descent set predicted from the rules instead of block comparison.
pub fn predicted_descent_set(path: &Path, rules: &DescentRules) -> Result<BTreeSet<u32>> {
    let (p, k) = (path.p, path.class_k);
    let pk = pow(p, k)?;
    let offsets = path.w_offsets()?;
    let last = path.last_position();
    let mut out = BTreeSet::new();
    if first_position_descent(path) {
        out.insert(1);
    }
    // offsets[j] is L_{j+2}, entered at position 2j+3 and left at 2j+4
    for (j, &big_l) in offsets.iter().enumerate() {
        let odd = 2 * j as u32 + 3;
        if odd + 1 > last {
            break;
        }
        let (l, t_prime) = (big_l % pk, big_l / pk);
        if rules.descent_odd(p, k, l, t_prime)? {
            out.insert(odd);
        }
        if let Some(&next) = offsets.get(j + 1) {
            if rules.descent_even(p, k, l, next % p, t_prime)? {
                out.insert(odd + 1);
            }
        }
    }
    Ok(out)
}

/// Whether a path uses the same `t` at every step from stage 2 on, with
/// every `V` offset equal to `j^k_t`.
pub fn special_path_t(path: &Path) -> Result<Option<u64>> {
    let (p, k) = (path.p, path.class_k);
    let pk = pow(p, k)?;
    let repunit = (pk - 1) / (p - 1);
    let offsets = path.w_offsets()?;
    let Some(&first) = offsets.first() else {
        return Ok(None);
    };
    let t = first / pk;
    let special_l = t * repunit + pk * t;
    let ok = offsets.iter().all(|&big_l| big_l == special_l) && path.start_index % pk == t * repunit;
    Ok(ok.then_some(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::DiagramParams;
    use crate::hook::Block;

    fn at(position: u32, horiz: u64, vert: u64) -> BlockAt {
        BlockAt {
            position,
            block: Block::new(horiz, vert),
        }
    }

    #[test]
    fn block_order() {
        assert!(block_greater(&at(3, 20, 0), &at(4, 15, 5)).unwrap());
        assert!(!block_greater(&at(3, 0, 20), &at(4, 5, 15)).unwrap());
        assert!(!block_greater(&at(3, 5, 5), &at(4, 5, 5)).unwrap());
        assert!(block_greater(&at(2, 5, 5), &at(4, 5, 5)).is_err());
    }

    #[test]
    fn first_floor_descents() {
        let d = DiagramParams::new(3, 4).unwrap();
        let v = d.v_vertex(0, 1, 0).unwrap();
        let paths: Vec<Path> = enumerate_paths(&v).collect();
        assert_eq!(descent_set(&paths[0]).unwrap(), BTreeSet::from([1]));
        assert!(descent_set(&paths[1]).unwrap().is_empty());
        assert_eq!(profile(&paths[0]).unwrap().inv, 1);
        assert_eq!(sign_balance(&v).unwrap(), BigInt::zero());
    }

    #[test]
    fn special_predictions() {
        assert_eq!(predicted_descents_special(5, 0, 2).unwrap(), (true, false));
        assert_eq!(predicted_descents_special(5, 2, 3).unwrap(), (false, false));
        assert_eq!(predicted_descents_special(5, 4, 2).unwrap(), (false, true));
    }

    #[test]
    fn worked_example_rules() {
        let r = DescentRules::ADJUDICATED;
        for t_prime in 0..5 {
            for beta in 0..5 {
                let (odd, even) = predicted_descents_general(5, 2, 7, beta, t_prime, &r).unwrap();
                assert_eq!(odd, t_prime <= 2);
                assert_eq!(even, t_prime >= 3);
            }
        }
        for t_prime in 0..3 {
            assert!(!predicted_descents_general(3, 0, 0, 0, t_prime, &r).unwrap().1);
        }
    }
}
