//! Vertex subsets per floor and the four edge families of the diagram.
//!
//! Floor `2r` carries the pre-stage subset (class −1) followed by the
//! classes `k = r-1, ..., 0`; floor `2r-1` carries class −1 followed by
//! `k = r-2, ..., 0`. A class-`k` vertex on floor `2(k+s)` is the `V`-vertex
//! of stage `s`, and on floor `2(k+s)-1` the `W`-vertex of stage `s`.

use serde::Serialize;

use crate::error::{out_of_range, Error, Result};
use crate::hook::{self, pow, Block, HookPartition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DiagramParams {
    p: u64,
    max_floor: u32,
}

impl DiagramParams {
    pub fn new(p: u64, max_floor: u32) -> Result<Self> {
        hook::check_odd_prime(p)?;
        if max_floor == 0 {
            return Err(out_of_range("max_floor", 0, "[1, ..)"));
        }
        // Largest size on the top floor is below p^(r+1) * max_floor.
        let r = max_floor.div_ceil(2);
        pow(p, r + 1)?
            .checked_mul(u64::from(max_floor) + 2)
            .ok_or(Error::Overflow("vertex size at max_floor"))?;
        Ok(DiagramParams { p, max_floor })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn max_floor(&self) -> u32 {
        self.max_floor
    }

    pub fn half(&self) -> u64 {
        (self.p - 1) / 2
    }

    fn pk(&self, k: u32) -> u64 {
        self.p.pow(k)
    }

    fn check_floor(&self, floor: u32) -> Result<()> {
        if floor == 0 || floor > self.max_floor {
            Err(Error::FloorOutOfRange {
                floor,
                max: self.max_floor,
            })
        } else {
            Ok(())
        }
    }

    /// `x^s_k = p^k [s p - (s + 1)]`.
    pub fn x_offset(&self, k: u32, s: u32) -> u64 {
        let s = u64::from(s);
        self.pk(k) * (s * self.p - (s + 1))
    }

    /// The stage-`s` vertex of class `k` on floor `2(k+s)`, `0 <= l < p^k`.
    pub fn v_vertex(&self, k: u32, s: u32, l: u64) -> Result<VertexLabel> {
        if s == 0 {
            return Err(out_of_range("stage", 0, "[1, ..)"));
        }
        let floor = 2 * (k + s);
        self.check_floor(floor)?;
        let pk = self.pk(k);
        if l >= pk {
            return Err(out_of_range("l", l, format!("[0, {pk})")));
        }
        let su = u64::from(s);
        Ok(VertexLabel {
            p: self.p,
            floor,
            class_k: k as i32,
            size: pk * (2 * su * self.p - (2 * su + 1)),
            index: self.x_offset(k, s) + l,
            stage_s: s,
            l_index: l,
        })
    }

    /// The stage-`s` vertex of class `k` on floor `2(k+s)-1`, `0 <= l < p^(k+1)`.
    pub fn w_vertex(&self, k: u32, s: u32, l: u64) -> Result<VertexLabel> {
        if s < 2 {
            return Err(out_of_range("stage", s, "[2, ..)"));
        }
        let floor = 2 * (k + s) - 1;
        self.check_floor(floor)?;
        let pk = self.pk(k);
        if l >= pk * self.p {
            return Err(out_of_range("l", l, format!("[0, {})", pk * self.p)));
        }
        let su = u64::from(s);
        Ok(VertexLabel {
            p: self.p,
            floor,
            class_k: k as i32,
            size: pk * ((2 * su - 1) * self.p - 2 * su),
            index: self.x_offset(k, s - 1) + l,
            stage_s: s,
            l_index: l,
        })
    }

    /// The class −1 vertex of given index on any floor.
    pub fn pre_vertex(&self, floor: u32, index: u64) -> Result<VertexLabel> {
        self.check_floor(floor)?;
        let size = self.pre_size(floor);
        if index >= size {
            return Err(out_of_range("index", index, format!("[0, {size})")));
        }
        Ok(VertexLabel {
            p: self.p,
            floor,
            class_k: -1,
            size,
            index,
            stage_s: 0,
            l_index: index,
        })
    }

    fn pre_size(&self, floor: u32) -> u64 {
        self.pk(floor.div_ceil(2) - 1) * (self.p - 1)
    }

    /// Any vertex by floor, class and offset within its subset.
    pub fn vertex(&self, floor: u32, class_k: i32, l: u64) -> Result<VertexLabel> {
        if class_k < 0 {
            return self.pre_vertex(floor, l);
        }
        let k = class_k as u32;
        let r = floor.div_ceil(2);
        let invalid = || Error::Unsupported(format!("no class {class_k} subset on floor {floor}"));
        if floor % 2 == 0 {
            let s = r.checked_sub(k).filter(|&s| s >= 1).ok_or_else(invalid)?;
            self.v_vertex(k, s, l)
        } else {
            let s = r.checked_sub(k).filter(|&s| s >= 2).ok_or_else(invalid)?;
            self.w_vertex(k, s, l)
        }
    }

    /// Class `k` subsets present on a floor, in arrangement order.
    pub fn classes_on_floor(&self, floor: u32) -> Vec<u32> {
        let r = floor.div_ceil(2);
        let top = if floor % 2 == 0 {
            r.checked_sub(1)
        } else {
            r.checked_sub(2)
        };
        match top {
            Some(top) => (0..=top).rev().collect(),
            None => Vec::new(),
        }
    }

    /// Size of a class's subset on a floor.
    pub fn subset_len(&self, floor: u32, class_k: i32) -> u64 {
        if class_k < 0 {
            self.pre_size(floor)
        } else if floor % 2 == 0 {
            self.pk(class_k as u32)
        } else {
            self.pk(class_k as u32 + 1)
        }
    }

    pub fn vertices_on_floor(&self, floor: u32) -> Result<Vec<VertexLabel>> {
        self.check_floor(floor)?;
        let mut out = Vec::new();
        for class_k in std::iter::once(-1).chain(self.classes_on_floor(floor).into_iter().map(|k| k as i32)) {
            let n = self.subset_len(floor, class_k);
            for l in (0..n).rev() {
                out.push(self.vertex(floor, class_k, l)?);
            }
        }
        Ok(out)
    }

    /// All edges from `lower_floor` to `lower_floor + 1`.
    pub fn edges_between(&self, lower_floor: u32) -> Result<Vec<Edge>> {
        self.check_floor(lower_floor + 1)?;
        let mut out = Vec::new();
        for v in self.vertices_on_floor(lower_floor)? {
            out.extend(self.successors(&v)?);
        }
        Ok(out)
    }

    /// Edges leaving `v` upward.
    pub fn successors(&self, v: &VertexLabel) -> Result<Vec<Edge>> {
        let p = self.p;
        let mut out = Vec::new();
        let mut push = |upper: VertexLabel, block: Block| {
            out.push(Edge {
                lower: *v,
                upper,
                block,
            })
        };
        let up = v.floor + 1;
        if v.class_k < 0 {
            let i = v.index;
            if v.floor % 2 == 1 {
                push(self.pre_vertex(up, i)?, Block::EMPTY);
                let k = (v.floor - 1) / 2;
                let pk = self.pk(k);
                let t = i / pk;
                push(self.v_vertex(k, 1, i % pk)?, Block::new(pk * t, pk * (p - 2 - t)));
            } else {
                let block_size = v.size * (p - 1);
                for t in 0..p {
                    let vert = i * (p - 1) + t;
                    push(self.pre_vertex(up, p * i + t)?, Block::new(block_size - vert, vert));
                }
            }
            return Ok(out);
        }
        let k = v.class_k as u32;
        let pk = self.pk(k);
        if v.floor % 2 == 1 {
            let t = v.l_index / pk;
            push(
                self.v_vertex(k, v.stage_s, v.l_index % pk)?,
                Block::new(pk * t, pk * (p - 1 - t)),
            );
        } else {
            for beta in 0..p {
                let vert = (p - 1) * v.l_index + beta;
                push(
                    self.w_vertex(k, v.stage_s + 1, p * v.l_index + beta)?,
                    Block::new(pk * (p - 1) - vert, vert),
                );
            }
        }
        Ok(out)
    }

    /// Lower endpoints of all edges into `v`, with their blocks.
    pub fn predecessors(&self, v: &VertexLabel) -> Result<Vec<(VertexLabel, Block)>> {
        let p = self.p;
        if v.floor < 2 {
            return Err(Error::NoPredecessors(v.floor));
        }
        let down = v.floor - 1;
        if v.class_k < 0 {
            if v.floor % 2 == 0 {
                return Ok(vec![(self.pre_vertex(down, v.index)?, Block::EMPTY)]);
            }
            let i = v.index / p;
            let lower = self.pre_vertex(down, i)?;
            let vert = v.index - i;
            return Ok(vec![(lower, Block::new(lower.size * (p - 1) - vert, vert))]);
        }
        let k = v.class_k as u32;
        let pk = self.pk(k);
        let s = v.stage_s;
        if v.floor % 2 == 1 {
            let l = v.l_index / p;
            let vert = v.l_index - l;
            return Ok(vec![(
                self.v_vertex(k, s - 1, l)?,
                Block::new(pk * (p - 1) - vert, vert),
            )]);
        }
        if s == 1 {
            (0..p - 1)
                .map(|t| {
                    let lower = self.pre_vertex(down, v.l_index + pk * t)?;
                    Ok((lower, Block::new(pk * t, pk * (p - 2 - t))))
                })
                .collect()
        } else {
            (0..p)
                .map(|t| {
                    let lower = self.w_vertex(k, s, v.l_index + pk * t)?;
                    Ok((lower, Block::new(pk * t, pk * (p - 1 - t))))
                })
                .collect()
        }
    }
}

/// A vertex `λ^floor_{size,index}` with its subset coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VertexLabel {
    pub p: u64,
    pub floor: u32,
    /// −1 for the pre-stage subset.
    pub class_k: i32,
    pub size: u64,
    pub index: u64,
    /// Zero for pre-stage vertices.
    pub stage_s: u32,
    /// Offset within the subset; equals `index` for pre-stage vertices.
    pub l_index: u64,
}

impl VertexLabel {
    pub fn hook(&self) -> HookPartition {
        HookPartition::from_size_index(self.size, self.index).expect("diagram vertices are hooks")
    }

    pub fn is_pre_stage(&self) -> bool {
        self.class_k < 0
    }

    pub fn is_even_floor(&self) -> bool {
        self.floor % 2 == 0
    }

    /// The class whose compressed paths cover this vertex.
    pub fn path_class(&self) -> u32 {
        if self.class_k < 0 {
            self.floor.div_ceil(2) - 1
        } else {
            self.class_k as u32
        }
    }
}

impl std::fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "λ^{}_{{{},{}}} class {} stage {} l {} hook {}",
            self.floor,
            self.size,
            self.index,
            self.class_k,
            self.stage_s,
            self.l_index,
            self.hook()
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Edge {
    pub lower: VertexLabel,
    pub upper: VertexLabel,
    pub block: Block,
}

impl Edge {
    /// Whether the block carries the lower hook onto the upper hook.
    pub fn is_consistent(&self) -> bool {
        self.upper.floor == self.lower.floor + 1
            && hook::add_block(&self.lower.hook(), &self.block).ok() == Some(self.upper.hook())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_floors() {
        let d = DiagramParams::new(3, 6).unwrap();
        let f2 = d.vertices_on_floor(2).unwrap();
        assert_eq!(f2.len(), 3);
        assert_eq!(f2.iter().filter(|v| v.class_k == -1 && v.size == 2).count(), 2);
        assert_eq!(f2[2].class_k, 0);
        assert_eq!((f2[2].size, f2[2].index), (3, 1));
        let f3 = d.vertices_on_floor(3).unwrap();
        assert_eq!(f3.iter().filter(|v| v.class_k == -1).count(), 6);
        assert_eq!(f3.iter().filter(|v| v.class_k == 0).count(), 3);
        assert_eq!(d.vertices_on_floor(1).unwrap().len(), 2);
    }

    #[test]
    fn subset_order_is_descending_index() {
        let d = DiagramParams::new(5, 10).unwrap();
        let f = d.vertices_on_floor(8).unwrap();
        let classes: Vec<i32> = f.iter().map(|v| v.class_k).collect();
        let mut dedup = classes.clone();
        dedup.dedup();
        assert_eq!(dedup, vec![-1, 3, 2, 1, 0]);
        for w in f.windows(2) {
            if w[0].class_k == w[1].class_k {
                assert!(w[0].index > w[1].index);
            }
        }
    }

    #[test]
    fn first_edges() {
        let d = DiagramParams::new(3, 4).unwrap();
        let edges = d.edges_between(1).unwrap();
        let target = d.v_vertex(0, 1, 0).unwrap();
        let into: Vec<_> = edges.iter().filter(|e| e.upper == target).collect();
        assert_eq!(into.len(), 2);
        assert_eq!(
            into.iter().find(|e| e.lower.index == 0).unwrap().block,
            Block::new(0, 1)
        );
        assert_eq!(
            into.iter().find(|e| e.lower.index == 1).unwrap().block,
            Block::new(1, 0)
        );
        assert!(edges.iter().all(Edge::is_consistent));
        let empty = edges.iter().filter(|e| e.block == Block::EMPTY).count();
        assert_eq!(empty, 2);
    }

    #[test]
    fn predecessor_counts() {
        let d = DiagramParams::new(5, 12).unwrap();
        let v = d.v_vertex(2, 3, 4).unwrap();
        let preds = d.predecessors(&v).unwrap();
        assert_eq!(preds.len(), 5);
        for (t, (_, b)) in preds.iter().enumerate() {
            assert_eq!(*b, Block::new(25 * t as u64, 25 * (4 - t as u64)));
        }
        let pre = d.pre_vertex(6, 7).unwrap();
        assert_eq!(
            d.predecessors(&pre).unwrap(),
            vec![(d.pre_vertex(5, 7).unwrap(), Block::EMPTY)]
        );
        assert!(matches!(
            d.predecessors(&d.pre_vertex(1, 0).unwrap()),
            Err(Error::NoPredecessors(1))
        ));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(DiagramParams::new(4, 4), Err(Error::NotOddPrime(4))));
        assert!(matches!(DiagramParams::new(2, 4), Err(Error::NotOddPrime(2))));
        let d = DiagramParams::new(3, 4).unwrap();
        assert!(d.vertices_on_floor(5).is_err());
        assert!(d.v_vertex(1, 1, 3).is_err());
        assert!(d.vertex(3, 1, 0).is_err());
    }
}
