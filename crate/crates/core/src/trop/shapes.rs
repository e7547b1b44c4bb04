//! Generation of rooted tree shapes whose vertices satisfy the psi valency
//! condition `val(v) = 3 + sum_{i in I_v} e_i`.

use std::collections::HashMap;
use std::sync::Arc;

/// A vertex with its attached end labels and child subtrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Shape {
    pub ends: Vec<usize>,
    pub children: Vec<Arc<Shape>>,
}

struct Generator<'a> {
    psi: &'a [u32],
    /// Subtrees below an edge, keyed by their end mask (bit `i` = label `i`).
    memo: HashMap<u32, Vec<Arc<Shape>>>,
}

fn labels(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask >> i & 1 == 1)
}

/// Non-empty submasks of `mask` in increasing order, plus zero first.
fn submasks(mask: u32) -> Vec<u32> {
    let mut out = vec![0];
    let mut s = mask;
    while s != 0 {
        out.push(s);
        s = (s - 1) & mask;
    }
    out.sort_unstable();
    out
}

impl Generator<'_> {
    fn psi_sum(&self, mask: u32) -> u32 {
        labels(mask).map(|i| self.psi[i]).sum()
    }

    /// An end set can hang below an edge only if it leaves room for at least
    /// one vertex: `|S| - 1 - e(S) >= 1`.
    fn can_hang(&self, mask: u32) -> bool {
        mask.count_ones() >= 2 + self.psi_sum(mask)
    }

    /// All shapes rooted at a vertex whose subtree carries exactly `mask`.
    /// `forced` must be attached to the top vertex itself.
    fn shapes(&mut self, mask: u32, forced: u32, has_parent: bool) -> Vec<Arc<Shape>> {
        if has_parent {
            if let Some(hit) = self.memo.get(&mask) {
                return hit.clone();
            }
        }
        let mut out = Vec::new();
        for own in submasks(mask) {
            if own & forced != forced {
                continue;
            }
            // |I_v| + #children + [parent] = 3 + e(I_v)
            let slots = 3 + self.psi_sum(own) as i64 - own.count_ones() as i64 - i64::from(has_parent);
            if slots < 0 {
                continue;
            }
            let rest = mask & !own;
            let blocks = slots as usize;
            if (rest == 0) != (blocks == 0) {
                continue;
            }
            for partition in self.partitions(rest, blocks) {
                let child_lists: Vec<Vec<Arc<Shape>>> =
                    partition.iter().map(|&b| self.shapes(b, 0, true)).collect();
                let ends: Vec<usize> = labels(own).collect();
                for children in cartesian(&child_lists) {
                    out.push(Arc::new(Shape { ends: ends.clone(), children }));
                }
            }
        }
        if has_parent {
            self.memo.insert(mask, out.clone());
        }
        out
    }

    /// Unordered partitions of `mask` into exactly `blocks` hangable blocks.
    fn partitions(&self, mask: u32, blocks: usize) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        self.partitions_rec(mask, blocks, &mut current, &mut out);
        out
    }

    fn partitions_rec(&self, mask: u32, blocks: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if mask == 0 {
            if blocks == 0 {
                out.push(current.clone());
            }
            return;
        }
        if blocks == 0 || (mask.count_ones() as usize) < 2 * blocks {
            return;
        }
        // the block containing the lowest remaining label
        let low = mask & mask.wrapping_neg();
        let others = mask & !low;
        for sub in submasks(others) {
            let block = sub | low;
            if !self.can_hang(block) {
                continue;
            }
            current.push(block);
            self.partitions_rec(mask & !block, blocks - 1, current, out);
            current.pop();
        }
    }
}

fn cartesian(lists: &[Vec<Arc<Shape>>]) -> Vec<Vec<Arc<Shape>>> {
    let mut acc: Vec<Vec<Arc<Shape>>> = vec![Vec::new()];
    for list in lists {
        let mut next = Vec::with_capacity(acc.len() * list.len());
        for prefix in &acc {
            for item in list {
                let mut v = prefix.clone();
                v.push(Arc::clone(item));
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

/// Every rooted tree shape on end labels `0..=m` with label 0 at the root.
pub(crate) fn enumerate_shapes(m: usize, psi: &[u32]) -> Vec<Arc<Shape>> {
    assert_eq!(psi.len(), m + 1, "psi must have m + 1 entries");
    assert!(m < 31, "too many ends");
    let mut g = Generator { psi, memo: HashMap::new() };
    let all = (1u32 << (m + 1)) - 1;
    g.shapes(all, 1, false)
}
