//! Hook partitions, growth blocks and base-p index arithmetic.

use serde::Serialize;

use crate::error::{out_of_range, Error, Result};

/// A hook partition `(arm, 1^leg)`; the empty partition is `(0, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HookPartition {
    arm: u64,
    leg: u64,
}

impl HookPartition {
    pub const EMPTY: HookPartition = HookPartition { arm: 0, leg: 0 };

    pub fn new(arm: u64, leg: u64) -> Result<Self> {
        if arm == 0 && leg > 0 {
            return Err(Error::InvalidHook(format!("(0, 1^{leg}) has an empty first row")));
        }
        Ok(HookPartition { arm, leg })
    }

    /// The hook `(size - index, 1^index)`.
    pub fn from_size_index(size: u64, index: u64) -> Result<Self> {
        if size == 0 && index == 0 {
            return Ok(Self::EMPTY);
        }
        if index >= size {
            return Err(out_of_range("index", index, format!("[0, {size})")));
        }
        Ok(HookPartition {
            arm: size - index,
            leg: index,
        })
    }

    pub fn arm(&self) -> u64 {
        self.arm
    }

    pub fn leg(&self) -> u64 {
        self.leg
    }

    pub fn size(&self) -> u64 {
        self.arm + self.leg
    }

    /// Parts in weakly decreasing order.
    pub fn parts(&self) -> Vec<u64> {
        if self.arm == 0 {
            return Vec::new();
        }
        let mut parts = vec![self.arm];
        parts.extend(std::iter::repeat(1).take(self.leg as usize));
        parts
    }
}

impl std::fmt::Display for HookPartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.arm, self.leg) {
            (0, _) => write!(f, "()"),
            (a, 0) => write!(f, "({a})"),
            (a, l) => write!(f, "({a}, 1^{l})"),
        }
    }
}

/// A growth step adding `horiz` nodes to the first row and `vert` nodes to the column.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Block {
    pub horiz: u64,
    pub vert: u64,
}

impl Block {
    pub const EMPTY: Block = Block { horiz: 0, vert: 0 };

    pub fn new(horiz: u64, vert: u64) -> Self {
        Block { horiz, vert }
    }

    pub fn size(&self) -> u64 {
        self.horiz + self.vert
    }
}

/// `l = alpha * p + beta` with `0 <= beta < p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IndexSplit {
    pub alpha: u64,
    pub beta: u64,
}

impl IndexSplit {
    pub fn reconstruct(&self, p: u64) -> u64 {
        self.alpha * p + self.beta
    }
}

/// Dominance on arbitrary partitions given as weakly decreasing parts.
pub fn dominates_parts(lhs: &[u64], rhs: &[u64]) -> Result<bool> {
    let (a, b): (u64, u64) = (lhs.iter().sum(), rhs.iter().sum());
    if a != b {
        return Err(Error::SizeMismatch(a, b));
    }
    let (mut sl, mut sr) = (0u64, 0u64);
    for i in 0..lhs.len().max(rhs.len()) {
        sl += lhs.get(i).copied().unwrap_or(0);
        sr += rhs.get(i).copied().unwrap_or(0);
        if sl < sr {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Dominance order on hooks of equal size, by partial sums of parts.
pub fn dominates(lhs: &HookPartition, rhs: &HookPartition) -> Result<bool> {
    if lhs.size() != rhs.size() {
        return Err(Error::SizeMismatch(lhs.size(), rhs.size()));
    }
    // Partial sums of (a, 1^b) are a + min(i, b); they only change slope at
    // i = b, so checking both legs' breakpoints and the first part suffices.
    let partial = |h: &HookPartition, i: u64| -> u64 {
        if h.arm == 0 {
            0
        } else {
            h.arm + i.min(h.leg)
        }
    };
    Ok([0, lhs.leg, rhs.leg]
        .iter()
        .all(|&i| partial(lhs, i) >= partial(rhs, i)))
}

pub fn add_block(base: &HookPartition, b: &Block) -> Result<HookPartition> {
    HookPartition::new(base.arm + b.horiz, base.leg + b.vert)
}

pub fn remove_block(top: &HookPartition, b: &Block) -> Result<HookPartition> {
    let arm = top.arm.checked_sub(b.horiz);
    let leg = top.leg.checked_sub(b.vert);
    match (arm, leg) {
        (Some(a), Some(l)) => HookPartition::new(a, l),
        _ => Err(Error::InvalidHook(format!("cannot remove {b:?} from {top}"))),
    }
}

pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn check_odd_prime(p: u64) -> Result<()> {
    if is_odd_prime(p) {
        Ok(())
    } else {
        Err(Error::NotOddPrime(p))
    }
}

pub(crate) fn pow(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e).ok_or(Error::Overflow("power of p"))
}

/// `p^a + p^(a+1) + ... + p^b`, zero when `b < a`.
pub fn geometric_sum(p: u64, a: u32, b: i64) -> Result<u64> {
    let mut total = 0u64;
    let mut e = a as i64;
    while e <= b {
        total = total
            .checked_add(pow(p, e as u32)?)
            .ok_or(Error::Overflow("geometric sum"))?;
        e += 1;
    }
    Ok(total)
}

/// `j^k_t = t (p^k - 1) / (p - 1)`.
///
/// Only `k >= 1` carries meaning; `k = 0` returns 0, which is how the
/// degenerate class uses it.
pub fn j_number(p: u64, k: u32, t: u64) -> Result<u64> {
    check_odd_prime(p)?;
    if t >= p {
        return Err(out_of_range("t", t, format!("[0, {}]", p - 1)));
    }
    let repunit = (pow(p, k)? - 1) / (p - 1);
    t.checked_mul(repunit).ok_or(Error::Overflow("j number"))
}

pub fn split_base_p(l: u64, p: u64) -> IndexSplit {
    IndexSplit {
        alpha: l / p,
        beta: l % p,
    }
}

/// The `t` with `j^k_{t-1} < l <= j^k_t`; `l = 0` gives `t = 0`.
pub fn j_class(p: u64, k: u32, l: u64) -> Result<u64> {
    if l == 0 {
        return Ok(0);
    }
    let repunit = (pow(p, k)? - 1) / (p - 1);
    if repunit == 0 || l > repunit * (p - 1) {
        return Err(out_of_range("l", l, format!("[0, {}]", repunit * (p - 1))));
    }
    Ok(l.div_ceil(repunit))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dominance_examples() {
        assert!(dominates_parts(&[3], &[2, 1]).unwrap());
        assert!(dominates_parts(&[2, 1], &[2, 1]).unwrap());
        assert!(!dominates_parts(&[2, 1, 1], &[3, 1]).unwrap());
        assert!(dominates_parts(&[2], &[2, 1]).is_err());
    }

    #[test]
    fn block_examples() {
        let h = HookPartition::new(2, 1).unwrap();
        assert_eq!(
            add_block(&h, &Block::new(1, 0)).unwrap(),
            HookPartition::new(3, 1).unwrap()
        );
        let two = HookPartition::new(2, 0).unwrap();
        assert_eq!(add_block(&two, &Block::new(0, 1)).unwrap(), h);
        assert_eq!(add_block(&h, &Block::EMPTY).unwrap(), h);
        assert!(add_block(&HookPartition::EMPTY, &Block::new(0, 2)).is_err());
    }

    #[test]
    fn j_numbers() {
        assert_eq!(j_number(5, 2, 1).unwrap(), 6);
        assert_eq!(j_number(5, 2, 2).unwrap(), 12);
        assert_eq!(j_number(3, 1, 0).unwrap(), 0);
        assert_eq!(j_number(3, 0, 2).unwrap(), 0);
        assert!(j_number(5, 2, 5).is_err());
        assert!(j_number(9, 2, 1).is_err());
    }

    #[test]
    fn j_class_windows() {
        let cls: Vec<u64> = (0..25).map(|l| j_class(5, 2, l).unwrap()).collect();
        assert_eq!(&cls[..8], &[0, 1, 1, 1, 1, 1, 1, 2]);
        assert_eq!(cls[12], 2);
        assert_eq!(cls[13], 3);
        assert_eq!(cls[24], 4);
    }

    #[test]
    fn splits() {
        assert_eq!(split_base_p(7, 5), IndexSplit { alpha: 1, beta: 2 });
        assert_eq!(split_base_p(0, 3), IndexSplit { alpha: 0, beta: 0 });
        assert_eq!(split_base_p(12, 5), IndexSplit { alpha: 2, beta: 2 });
        assert_eq!(split_base_p(12, 5).reconstruct(5), 12);
    }

    #[test]
    fn primes() {
        let odd: Vec<u64> = (0..30).filter(|&p| is_odd_prime(p)).collect();
        assert_eq!(odd, vec![3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
