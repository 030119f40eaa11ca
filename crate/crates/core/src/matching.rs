//! Bipartite maximum matching.
//!
//! [`match_lsa`] treats every left vertex as an item whose choices are its
//! neighbors and inserts them in index order with a per-vertex move cap.
//! [`hopcroft_karp`] is the exact reference; [`feasible`] reduces an
//! allocation instance to it.

use std::collections::{BTreeMap, VecDeque};

use crate::alloc::{AllocationTable, Item, MoveStats};
use crate::graph::BipartiteGraph;

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingResult {
    pub size: usize,
    /// Right partner of every left vertex.
    pub pairs: Vec<Option<usize>>,
    /// Move accounting; zero for Hopcroft–Karp.
    pub stats: MoveStats,
    /// Left vertices with no neighbors, never offered to the matcher.
    pub skipped: usize,
    /// Sizes per move cap, filled in by [`match_lsa_sweep`].
    pub per_cap_sizes: Option<BTreeMap<u64, usize>>,
}

impl MatchingResult {
    fn from_pairs(pairs: Vec<Option<usize>>) -> Self {
        MatchingResult {
            size: pairs.iter().flatten().count(),
            pairs,
            stats: MoveStats::default(),
            skipped: 0,
            per_cap_sizes: None,
        }
    }

    /// True when every pair is an edge of `graph` and no right vertex is used
    /// twice.
    pub fn is_valid_for(&self, graph: &BipartiteGraph) -> bool {
        if self.pairs.len() != graph.left_count() {
            return false;
        }
        let mut used = vec![false; graph.right_count()];
        for (l, r) in self.pairs.iter().enumerate() {
            let Some(r) = *r else { continue };
            if !graph.has_edge(l, r) || std::mem::replace(&mut used[r], true) {
                return false;
            }
        }
        self.size == self.pairs.iter().flatten().count()
    }
}

/// Move cap at which [`match_lsa`] is exact on every graph.
pub fn full_cap(graph: &BipartiteGraph) -> u64 {
    (graph.right_count() as u64).saturating_mul(graph.right_count() as u64)
}

/// Label-guided matching with at most `move_cap` moves per left vertex. An
/// aborted chain is not unwound; the vertex it left homeless stays
/// unmatched.
pub fn match_lsa(graph: &BipartiteGraph, move_cap: u64, seed: u64) -> MatchingResult {
    assert!(move_cap >= 1, "move cap must be at least 1");
    let mut pairs = vec![None; graph.left_count()];
    let mut skipped = 0;
    let stats = if graph.right_count() == 0 {
        skipped = graph
            .adjacency()
            .iter()
            .filter(|row| row.is_empty())
            .count();
        MoveStats::default()
    } else {
        let mut table = AllocationTable::with_seed(graph.right_count(), 1, seed)
            .expect("right side is non-empty");
        for (left, row) in graph.adjacency().iter().enumerate() {
            if row.is_empty() {
                skipped += 1;
                continue;
            }
            table
                .insert_lsa_capped(Item::new(left as u64, row.as_slice()), move_cap)
                .expect("left vertices are distinct and neighbors in range");
        }
        for (item, location) in table.assignment() {
            pairs[item.id.0 as usize] = location;
        }
        table.stats()
    };
    let mut result = MatchingResult::from_pairs(pairs);
    result.stats = stats;
    result.skipped = skipped;
    debug_assert!(result.is_valid_for(graph));
    result
}

/// Runs [`match_lsa`] once per cap and returns the result for the last cap
/// with every size recorded in `per_cap_sizes`.
pub fn match_lsa_sweep(graph: &BipartiteGraph, caps: &[u64], seed: u64) -> Option<MatchingResult> {
    let mut sizes = BTreeMap::new();
    let mut last = None;
    for &cap in caps {
        let r = match_lsa(graph, cap, seed);
        sizes.insert(cap, r.size);
        last = Some(r);
    }
    last.map(|mut r| {
        r.per_cap_sizes = Some(sizes);
        r
    })
}

/// Maximum-cardinality matching by shortest augmenting paths in phases.
pub fn hopcroft_karp(graph: &BipartiteGraph) -> MatchingResult {
    let adj = graph.adjacency();
    let nl = graph.left_count();
    let mut match_l = vec![NONE; nl];
    let mut match_r = vec![NONE; graph.right_count()];
    let mut dist = vec![NONE; nl];
    let mut next_edge = vec![0usize; nl];
    let mut queue = VecDeque::with_capacity(nl);
    let mut stack = Vec::new();

    loop {
        // Layer the free left vertices and everything reachable along
        // alternating paths.
        queue.clear();
        for u in 0..nl {
            if match_l[u] == NONE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = NONE;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &r in &adj[u] {
                let w = match_r[r];
                if w == NONE {
                    found = true;
                } else if dist[w] == NONE {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }

        next_edge.fill(0);
        for start in 0..nl {
            if match_l[start] != NONE {
                continue;
            }
            stack.clear();
            stack.push(start);
            while let Some(&u) = stack.last() {
                if next_edge[u] == adj[u].len() {
                    dist[u] = NONE;
                    stack.pop();
                    continue;
                }
                let r = adj[u][next_edge[u]];
                next_edge[u] += 1;
                let w = match_r[r];
                if w == NONE {
                    // Each vertex on the stack takes the edge it last tried.
                    for &x in &stack {
                        let rx = adj[x][next_edge[x] - 1];
                        match_l[x] = rx;
                        match_r[rx] = x;
                    }
                    break;
                }
                if dist[w] == dist[u] + 1 {
                    stack.push(w);
                }
            }
        }
    }

    let pairs = match_l
        .into_iter()
        .map(|r| (r != NONE).then_some(r))
        .collect();
    let result = MatchingResult::from_pairs(pairs);
    debug_assert!(result.is_valid_for(graph));
    result
}

/// Whether every item can be placed on one of its choices with at most
/// `capacity` items per location. Each location is split into `capacity`
/// unit copies and the question becomes a perfect matching of the items.
pub fn feasible(items: &[Item], n: usize, capacity: usize) -> bool {
    if items.is_empty() {
        return true;
    }
    if capacity == 0 || items.len() > n.saturating_mul(capacity) {
        return false;
    }
    let adjacency: Vec<Vec<usize>> = items
        .iter()
        .map(|it| {
            it.choices
                .iter()
                .filter(|&&v| v < n)
                .flat_map(|&v| (0..capacity).map(move |r| v * capacity + r))
                .collect()
        })
        .collect();
    let graph =
        BipartiteGraph::new(items.len(), n * capacity, adjacency).expect("copies are in range");
    hopcroft_karp(&graph).size == items.len()
}
