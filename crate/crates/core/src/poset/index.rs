//! Chain-cover reachability index.
//!
//! Every event sits on exactly one cover chain: its owning chain, or a
//! singleton chain of its own when it has none. Because chain events are
//! totally ordered, the ancestors of `y` on a cover chain form a prefix and
//! its descendants form a suffix. Storing the end of that prefix and the start
//! of that suffix per (event, cover chain) answers `x <= y` and both chain
//! projections in constant time.

use std::collections::VecDeque;

pub(crate) const NONE: u32 = 0;

#[derive(Debug, Clone)]
pub(crate) struct ReachIndex {
    width: usize,
    /// (cover chain, 1-based position) per event.
    cover: Vec<(u32, u32)>,
    /// Greatest 1-based position on each cover chain below-or-equal to the event.
    down: Vec<u32>,
    /// Least 1-based position on each cover chain above-or-equal to the event.
    up: Vec<u32>,
}

impl ReachIndex {
    /// `chains` lists member node indices of each real chain in chain order;
    /// `topo` must be a topological order of the graph.
    pub(crate) fn build(
        chains: &[Vec<usize>],
        chain_of: &[Option<u32>],
        succ: &[Vec<usize>],
        pred: &[Vec<usize>],
        topo: &[usize],
    ) -> Self {
        let n = succ.len();
        let mut cover = vec![(0u32, 0u32); n];
        for (c, members) in chains.iter().enumerate() {
            for (pos, &node) in members.iter().enumerate() {
                cover[node] = (c as u32, pos as u32 + 1);
            }
        }
        let mut width = chains.len();
        for node in 0..n {
            if chain_of[node].is_none() {
                cover[node] = (width as u32, 1);
                width += 1;
            }
        }

        let mut down = vec![NONE; n * width];
        let mut row = vec![NONE; width];
        for &y in topo {
            row.fill(NONE);
            for &p in &pred[y] {
                let src = &down[p * width..p * width + width];
                for (dst, &v) in row.iter_mut().zip(src) {
                    *dst = (*dst).max(v);
                }
            }
            let (c, pos) = cover[y];
            row[c as usize] = pos;
            down[y * width..y * width + width].copy_from_slice(&row);
        }

        let mut up = vec![NONE; n * width];
        for &x in topo.iter().rev() {
            let (c, pos) = cover[x];
            row.fill(NONE);
            for &s in &succ[x] {
                let src = &up[s * width..s * width + width];
                for (dst, &v) in row.iter_mut().zip(src) {
                    if v != NONE && (*dst == NONE || v < *dst) {
                        *dst = v;
                    }
                }
            }
            row[c as usize] = pos;
            up[x * width..x * width + width].copy_from_slice(&row);
        }

        Self {
            width,
            cover,
            down,
            up,
        }
    }

    pub(crate) fn leq(&self, x: usize, y: usize) -> bool {
        let (c, pos) = self.cover[x];
        self.down[y * self.width + c as usize] >= pos
    }

    /// 0-based position of the least event of chain `c` above `x`.
    pub(crate) fn first_above(&self, x: usize, c: usize) -> Option<usize> {
        match self.up[x * self.width + c] {
            NONE => None,
            p => Some(p as usize - 1),
        }
    }

    /// 0-based position of the greatest event of chain `c` below `x`.
    pub(crate) fn last_below(&self, x: usize, c: usize) -> Option<usize> {
        match self.down[x * self.width + c] {
            NONE => None,
            p => Some(p as usize - 1),
        }
    }
}

/// Kahn's algorithm. On failure returns the nodes left on some cycle.
pub(crate) fn topological_order(succ: &[Vec<usize>]) -> Result<Vec<usize>, Vec<usize>> {
    let n = succ.len();
    let mut indegree = vec![0usize; n];
    for targets in succ {
        for &t in targets {
            indegree[t] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &t in &succ[v] {
            indegree[t] -= 1;
            if indegree[t] == 0 {
                queue.push_back(t);
            }
        }
    }
    if order.len() == n {
        Ok(order)
    } else {
        Err((0..n).filter(|&v| indegree[v] > 0).collect())
    }
}
