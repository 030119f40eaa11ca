//! Exact distances to spare capacity in the allocation graph.
//!
//! The allocation graph has an edge `u -> w` whenever an item resident at
//! `u` also lists `w` among its choices (`w != u`). For capacity above one
//! every resident contributes its own edges and the targets are the
//! locations that still have room.

use std::collections::VecDeque;

use super::AllocationTable;

/// Distance reported for a location with no path to spare capacity.
pub const UNREACHABLE: usize = usize::MAX;

impl AllocationTable {
    /// Multi-source BFS from every location with room, walking edges
    /// backwards.
    pub fn distances_to_free(&self) -> Vec<usize> {
        let n = self.n;
        // Reverse adjacency in CSR form: for each target w, the locations u
        // holding an item that could move to w.
        let mut degree = vec![0usize; n + 1];
        for u in 0..n {
            for item in self.residents(u) {
                for &w in item.choices.iter().filter(|&&w| w != u) {
                    degree[w + 1] += 1;
                }
            }
        }
        for i in 0..n {
            degree[i + 1] += degree[i];
        }
        let offsets = degree;
        let mut fill = offsets.clone();
        let mut sources = vec![0usize; offsets[n]];
        for u in 0..n {
            for item in self.residents(u) {
                for &w in item.choices.iter().filter(|&&w| w != u) {
                    sources[fill[w]] = u;
                    fill[w] += 1;
                }
            }
        }

        let mut dist = vec![UNREACHABLE; n];
        let mut queue = VecDeque::new();
        for (v, d) in dist.iter_mut().enumerate() {
            if self.has_room(v) {
                *d = 0;
                queue.push_back(v);
            }
        }
        while let Some(w) = queue.pop_front() {
            let next = dist[w] + 1;
            for &u in &sources[offsets[w]..offsets[w + 1]] {
                if dist[u] == UNREACHABLE {
                    dist[u] = next;
                    queue.push_back(u);
                }
            }
        }
        dist
    }
}
