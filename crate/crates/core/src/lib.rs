//! k-ary cuckoo allocation driven by local search labels.
//!
//! Items arrive with `k` candidate locations and must each be placed on one
//! of them, at most `s` items per location. [`AllocationTable`] implements
//! label-guided insertion (unit and general capacity) next to the classic
//! random-walk insertion, and exposes exact allocation-graph distances for
//! checking the labels. The same engine doubles as a bipartite matcher in
//! [`matching`], with Hopcroft–Karp as the exact reference.

pub mod alloc;
pub mod graph;
pub mod instance;
pub mod matching;
pub mod record;
pub mod rng;
pub mod thresholds;

pub use alloc::{
    AllocError, AllocationTable, ChainStep, InsertReport, InvariantViolation, Item, ItemId,
    MoveStats, Outcome, UNREACHABLE,
};
pub use graph::{load_edge_list, parse_edge_list, write_edge_list, BipartiteGraph, GraphError};
pub use instance::{gen_instance, InstanceError, InstanceSpec};
pub use matching::{feasible, full_cap, hopcroft_karp, match_lsa, match_lsa_sweep, MatchingResult};
pub use record::{read_csv, write_csv, RecordError, RunRecord, CSV_HEADER};
pub use thresholds::{solve_threshold, ThresholdError, ThresholdResult};
