//! Compressed paths: a start index on floor `2k+1` plus the block parameters
//! `m_2, m_3, ...` of every later step.
//!
//! Each pre-stage vertex has exactly one path from floor 1, so the
//! compressed count of a vertex equals its count in the full diagram.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::diagram::{DiagramParams, VertexLabel};
use crate::error::{Error, Result};
use crate::hook::{self, Block, HookPartition};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Path {
    pub p: u64,
    pub class_k: u32,
    pub start_index: u64,
    /// `m_2, m_3, ...` in order.
    pub m_seq: Vec<u64>,
    pub end: VertexLabel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BlockAt {
    pub position: u32,
    pub block: Block,
}

impl Path {
    fn pk(&self) -> u64 {
        self.p.pow(self.class_k)
    }

    /// The hook on floor `2k+1` the path starts from.
    pub fn start_hook(&self) -> HookPartition {
        let size = self.pk() * (self.p - 1);
        HookPartition::from_size_index(size, self.start_index).expect("start index in range")
    }

    /// The aggregated pre-stage block `B^1`, carrying the empty shape onto the start.
    pub fn pre_stage_block(&self) -> BlockAt {
        let h = self.start_hook();
        BlockAt {
            position: 1,
            block: Block::new(h.arm(), h.leg()),
        }
    }

    /// The `t` of the first class-`k` step.
    pub fn first_t(&self) -> u64 {
        self.start_index / self.pk()
    }

    /// Last block position, or 1 when the path is still in the pre-stage.
    pub fn last_position(&self) -> u32 {
        self.m_seq.len() as u32 + 1
    }

    /// The `W` offsets `L_2, L_3, ...` visited, one per odd position.
    pub fn w_offsets(&self) -> Result<Vec<u64>> {
        Ok(self.walk()?.w_offsets)
    }

    fn walk(&self) -> Result<Walk> {
        let (p, pk) = (self.p, self.pk());
        let bad = |msg: String| Error::InconsistentPath(msg);
        if self.start_index >= pk * (p - 1) {
            return Err(bad(format!("start index {} out of range", self.start_index)));
        }
        let mut blocks = Vec::with_capacity(self.m_seq.len());
        let mut w_offsets = Vec::new();
        let mut l = self.start_index % pk;
        let mut big_l = 0;
        for (j, &m) in self.m_seq.iter().enumerate() {
            let position = j as u32 + 2;
            let block = if position == 2 {
                let t = self.first_t();
                if m != pk * t {
                    return Err(bad(format!("m_2 = {m} does not match start index")));
                }
                Block::new(m, pk * (p - 2 - t))
            } else if position % 2 == 1 {
                let vert = (pk * (p - 1))
                    .checked_sub(m)
                    .ok_or_else(|| bad(format!("m_{position} = {m} too large")))?;
                let beta = vert
                    .checked_sub((p - 1) * l)
                    .filter(|&b| b < p)
                    .ok_or_else(|| bad(format!("m_{position} = {m} is not an edge from offset {l}")))?;
                big_l = p * l + beta;
                w_offsets.push(big_l);
                Block::new(m, vert)
            } else {
                let t = big_l / pk;
                if m != pk * t {
                    return Err(bad(format!("m_{position} = {m}, edge forces {}", pk * t)));
                }
                l = big_l % pk;
                Block::new(m, pk * (p - 1 - t))
            };
            blocks.push(BlockAt { position, block });
        }
        let n = self.m_seq.len() as u32;
        let (k, end) = (self.class_k, &self.end);
        let ok = if n == 0 {
            end.class_k < 0 && end.path_class() == k && end.index == self.start_index
        } else {
            let s = n / 2 + 1;
            let expected = if n % 2 == 1 {
                (2 * (k + s), l)
            } else {
                (2 * (k + s) - 1, big_l)
            };
            end.class_k == k as i32 && end.stage_s == s && (end.floor, end.l_index) == expected
        };
        if !ok {
            return Err(bad(format!("blocks do not end at {end}")));
        }
        Ok(Walk { blocks, w_offsets })
    }
}

struct Walk {
    blocks: Vec<BlockAt>,
    w_offsets: Vec<u64>,
}

/// Blocks `B^2, B^3, ...` of a path with both parts reconstructed.
pub fn blocks_of(path: &Path) -> Result<Vec<BlockAt>> {
    Ok(path.walk()?.blocks)
}

/// Re-walk a path from its start hook; returns the hook reached.
pub fn rewalk(path: &Path) -> Result<HookPartition> {
    blocks_of(path)?
        .iter()
        .try_fold(path.start_hook(), |h, b| hook::add_block(&h, &b.block))
}

/// `p^k (p-1) - ((p-1)(L div p) + L mod p)`: the horizontal part of the odd-position block into `W(L)`.
pub(crate) fn odd_m(p: u64, pk: u64, big_l: u64) -> u64 {
    pk * (p - 1) - ((p - 1) * (big_l / p) + big_l % p)
}

/// Lazy enumeration of every compressed path ending at a vertex.
///
/// Order: ascending `t` at each step back from the end, with the step
/// nearest the end varying slowest; ascending start index last.
pub struct PathIter {
    p: u64,
    pk: u64,
    end: VertexLabel,
    class_k: u32,
    ends_on_w: bool,
    /// digits[0] is the first step's `t` (radix p-1); digits[j] for j >= 1
    /// is the `t` of the `W -> V` step into stage `j+1` (radix p).
    digits: Vec<u64>,
    done: bool,
}

impl PathIter {
    fn build(&self) -> Path {
        let (p, pk) = (self.p, self.pk);
        if self.end.class_k < 0 {
            return Path {
                p,
                class_k: self.class_k,
                start_index: self.end.index,
                m_seq: Vec::new(),
                end: self.end,
            };
        }
        let mut rev = Vec::new();
        let mut l = self.end.l_index;
        let mut stage = self.end.stage_s;
        if self.ends_on_w {
            rev.push(odd_m(p, pk, l));
            l /= p;
            stage -= 1;
        }
        while stage >= 2 {
            let t = self.digits[stage as usize - 1];
            let big_l = l + pk * t;
            rev.push(pk * t);
            rev.push(odd_m(p, pk, big_l));
            l = big_l / p;
            stage -= 1;
        }
        let t2 = self.digits[0];
        rev.push(pk * t2);
        rev.reverse();
        Path {
            p,
            class_k: self.class_k,
            start_index: l + pk * t2,
            m_seq: rev,
            end: self.end,
        }
    }

    fn advance(&mut self) {
        for (j, d) in self.digits.iter_mut().enumerate() {
            let radix = if j == 0 { self.p - 1 } else { self.p };
            *d += 1;
            if *d < radix {
                return;
            }
            *d = 0;
        }
        self.done = true;
    }
}

impl Iterator for PathIter {
    type Item = Path;

    fn next(&mut self) -> Option<Path> {
        if self.done {
            return None;
        }
        let path = self.build();
        if self.end.class_k < 0 {
            self.done = true;
        } else {
            self.advance();
        }
        Some(path)
    }
}

pub fn enumerate_paths(v: &VertexLabel) -> PathIter {
    let pk = v.p.pow(v.path_class());
    let ends_on_w = v.class_k >= 0 && !v.is_even_floor();
    let v_stage = if ends_on_w { v.stage_s - 1 } else { v.stage_s };
    let n_digits = if v.class_k < 0 { 0 } else { v_stage as usize };
    PathIter {
        p: v.p,
        pk,
        end: *v,
        class_k: v.path_class(),
        ends_on_w,
        digits: vec![0; n_digits],
        done: false,
    }
}

/// Compressed path count by dynamic programming over the stages of the vertex's class.
pub fn count_paths(v: &VertexLabel) -> BigInt {
    if v.class_k < 0 {
        return BigInt::one();
    }
    let p = v.p;
    let pk = p.pow(v.class_k as u32);
    let v_stage = if v.is_even_floor() { v.stage_s } else { v.stage_s - 1 };
    // counts[l] for the V subset of the current stage
    let mut counts = vec![BigInt::from(p - 1); pk as usize];
    for _ in 2..=v_stage {
        let w: Vec<BigInt> = (0..pk * p).map(|big_l| counts[(big_l / p) as usize].clone()).collect();
        counts = (0..pk)
            .map(|l| (0..p).map(|t| w[(l + pk * t) as usize].clone()).sum())
            .collect();
    }
    if v.is_even_floor() {
        counts[v.l_index as usize].clone()
    } else {
        counts[(v.l_index / p) as usize].clone()
    }
}

/// Path count from floor 1 over the full diagram, pre-stage floors included.
pub fn count_paths_full(params: &DiagramParams, v: &VertexLabel) -> Result<BigInt> {
    use std::collections::HashMap;
    let mut memo: HashMap<VertexLabel, BigInt> = HashMap::new();
    fn go(params: &DiagramParams, v: &VertexLabel, memo: &mut HashMap<VertexLabel, BigInt>) -> Result<BigInt> {
        if v.floor == 1 {
            return Ok(BigInt::one());
        }
        if let Some(c) = memo.get(v) {
            return Ok(c.clone());
        }
        let mut total = BigInt::zero();
        for (u, _) in params.predecessors(v)? {
            total += go(params, &u, memo)?;
        }
        memo.insert(*v, total.clone());
        Ok(total)
    }
    go(params, v, &mut memo)
}

/// Number of full-diagram paths from floor 1 to the start vertex of a compressed path.
pub fn pre_stage_multiplicity(params: &DiagramParams, class_k: u32, start_index: u64) -> Result<BigInt> {
    let start = params.pre_vertex(2 * class_k + 1, start_index)?;
    count_paths_full(params, &start)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_two_paths() {
        let d = DiagramParams::new(3, 4).unwrap();
        let v = d.v_vertex(0, 1, 0).unwrap();
        let paths: Vec<Path> = enumerate_paths(&v).collect();
        assert_eq!(paths.len(), 2);
        assert_eq!((paths[0].start_index, paths[0].m_seq.clone()), (0, vec![0]));
        assert_eq!((paths[1].start_index, paths[1].m_seq.clone()), (1, vec![1]));
        assert_eq!(
            blocks_of(&paths[0]).unwrap(),
            vec![BlockAt {
                position: 2,
                block: Block::new(0, 1)
            }]
        );
        assert_eq!(count_paths(&v), BigInt::from(2));
    }

    #[test]
    fn stage_two_class_zero() {
        let d = DiagramParams::new(3, 4).unwrap();
        let v = d.v_vertex(0, 2, 0).unwrap();
        assert_eq!((v.size, v.index), (7, 3));
        assert_eq!(enumerate_paths(&v).count(), 6);
        assert_eq!(count_paths(&v), BigInt::from(6));
        for path in enumerate_paths(&v) {
            assert_eq!(rewalk(&path).unwrap(), v.hook());
        }
    }

    #[test]
    fn block_shapes() {
        let d = DiagramParams::new(5, 8).unwrap();
        let v = d.v_vertex(1, 2, 0).unwrap();
        let path = enumerate_paths(&v).last().unwrap();
        let blocks = blocks_of(&path).unwrap();
        let even = blocks.iter().find(|b| b.position == 4).unwrap();
        assert_eq!(even.block, Block::new(20, 0));
        let w = d.w_vertex(1, 2, 0).unwrap();
        let odd = blocks_of(&enumerate_paths(&w).next().unwrap()).unwrap();
        assert_eq!(odd.last().unwrap().block, Block::new(20, 0));
    }

    #[test]
    fn pre_stage_paths() {
        let d = DiagramParams::new(3, 6).unwrap();
        let v = d.pre_vertex(4, 5).unwrap();
        let paths: Vec<Path> = enumerate_paths(&v).collect();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].class_k, 1);
        assert!(blocks_of(&paths[0]).unwrap().is_empty());
        assert_eq!(pre_stage_multiplicity(&d, 2, 17).unwrap(), BigInt::one());
    }

    #[test]
    fn rejects_inconsistent_paths() {
        let d = DiagramParams::new(3, 4).unwrap();
        let v = d.v_vertex(0, 1, 0).unwrap();
        let mut path = enumerate_paths(&v).next().unwrap();
        path.m_seq[0] = 1;
        assert!(matches!(blocks_of(&path), Err(Error::InconsistentPath(_))));
    }
}
