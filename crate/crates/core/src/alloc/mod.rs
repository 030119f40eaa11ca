//! Allocation table shared by every insertion strategy.
//!
//! A table holds `n` locations, each with room for `capacity` items, a label
//! per location and the items currently resident. Insertion strategies live
//! in the submodules: [`lsa`] (label-guided local search, unit and general
//! capacity), [`random_walk`] (the baseline) and [`distance`] (exact
//! distances in the allocation graph, used as an oracle for the labels).
//!
//! Items are owned by the table once inserted. An item that ends up homeless
//! after a failed insertion stays registered but has no location.

use std::collections::HashMap;
use std::fmt;

use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::rng::{stream_rng, Stream};

pub mod distance;
pub mod lsa;
pub mod random_walk;

pub use distance::UNREACHABLE;

const NO_LOCATION: usize = usize::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AllocError {
    #[error("table needs at least one location")]
    NoLocations,
    #[error("location capacity must be at least 1")]
    ZeroCapacity,
    #[error("item {0} has no choices")]
    NoChoices(ItemId),
    #[error("item {item} chooses location {location} but the table has {n} locations")]
    ChoiceOutOfRange {
        item: ItemId,
        location: usize,
        n: usize,
    },
    #[error("item {0} is already in the table")]
    DuplicateItem(ItemId),
    #[error("operation needs a table of capacity {expected}, found {found}")]
    CapacityMismatch { expected: usize, found: usize },
    #[error("move cap must be at least 1")]
    ZeroMoveCap,
}

/// Caller-supplied opaque item identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ItemId(pub u64);

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// An item and its candidate locations. Choices form a multiset: the same
/// location may appear more than once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Item {
    pub id: ItemId,
    pub choices: Box<[usize]>,
}

impl Item {
    pub fn new(id: u64, choices: impl Into<Box<[usize]>>) -> Self {
        Item {
            id: ItemId(id),
            choices: choices.into(),
        }
    }

    pub fn k(&self) -> usize {
        self.choices.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Placed,
    /// The minimum label among the current item's choices reached the exit
    /// threshold: no allocation exists for the items inserted so far.
    NoAllocation,
    MoveCapExceeded,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Placed => "placed",
            Outcome::NoAllocation => "no_allocation",
            Outcome::MoveCapExceeded => "move_cap_exceeded",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One move of an insertion chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainStep {
    pub location: usize,
    pub placed: ItemId,
    pub evicted: Option<ItemId>,
}

impl fmt::Display for ChainStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.evicted {
            Some(evicted) => write!(f, "{} -> {} evicts {}", self.placed, self.location, evicted),
            None => write!(f, "{} -> {} free", self.placed, self.location),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InsertReport {
    pub outcome: Outcome,
    /// Placements plus replacements performed by this insertion.
    pub moves: u64,
    /// Item left without a location when the insertion did not succeed. With
    /// no rollback this is generally not the item that was being inserted.
    pub unplaced: Option<ItemId>,
    /// Present when tracing is enabled; one step per move.
    pub chain: Option<Vec<ChainStep>>,
}

impl InsertReport {
    pub fn is_placed(&self) -> bool {
        self.outcome == Outcome::Placed
    }

    /// Line-oriented rendering of the eviction chain.
    pub fn trace_lines(&self) -> Vec<String> {
        self.chain
            .iter()
            .flatten()
            .map(ToString::to_string)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MoveStats {
    pub total_moves: u64,
    pub max_moves: u64,
    pub label_sum: u64,
    pub max_label: usize,
}

/// Broken table invariant found by [`AllocationTable::validate`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantViolation {
    #[error("location {location} holds {load} items, capacity is {capacity}")]
    Overloaded {
        location: usize,
        load: usize,
        capacity: usize,
    },
    #[error("item {item} sits at location {location}, which is not among its choices")]
    NotAChoice { item: ItemId, location: usize },
    #[error("item {0} is recorded inconsistently between slots and its location")]
    Misplaced(ItemId),
    #[error("location {location} has label {label} above the bound {bound}")]
    LabelTooLarge {
        location: usize,
        label: usize,
        bound: usize,
    },
    #[error("free count is {recorded}, actual {actual}")]
    FreeCount { recorded: usize, actual: usize },
}

pub struct AllocationTable {
    n: usize,
    capacity: usize,
    labels: Vec<usize>,
    /// Flattened `n * capacity` slots holding arena indices; only the first
    /// `load[v]` entries of a location are meaningful.
    slots: Vec<usize>,
    load: Vec<usize>,
    free_count: usize,
    items: Vec<Item>,
    location: Vec<usize>,
    index: HashMap<ItemId, usize>,
    total_moves: u64,
    max_moves: u64,
    victim_rng: ChaCha8Rng,
    tracing: bool,
}

impl fmt::Debug for AllocationTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AllocationTable")
            .field("n", &self.n)
            .field("capacity", &self.capacity)
            .field("items", &self.items.len())
            .field("free_count", &self.free_count)
            .field("total_moves", &self.total_moves)
            .finish()
    }
}

impl AllocationTable {
    /// Empty table with all labels 0. The eviction-victim generator is seeded
    /// with 0; use [`AllocationTable::with_seed`] to pick another stream.
    pub fn new(n: usize, capacity: usize) -> Result<Self, AllocError> {
        Self::with_seed(n, capacity, 0)
    }

    pub fn with_seed(n: usize, capacity: usize, seed: u64) -> Result<Self, AllocError> {
        if n == 0 {
            return Err(AllocError::NoLocations);
        }
        if capacity == 0 {
            return Err(AllocError::ZeroCapacity);
        }
        Ok(AllocationTable {
            n,
            capacity,
            labels: vec![0; n],
            slots: vec![NO_LOCATION; n * capacity],
            load: vec![0; n],
            free_count: n,
            items: Vec::new(),
            location: Vec::new(),
            index: HashMap::new(),
            total_moves: 0,
            max_moves: 0,
            victim_rng: stream_rng(seed, Stream::Victim),
            tracing: false,
        })
    }

    pub fn set_tracing(&mut self, on: bool) {
        self.tracing = on;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, location: usize) -> usize {
        self.labels[location]
    }

    /// Number of locations with spare capacity.
    pub fn free_count(&self) -> usize {
        self.free_count
    }

    pub fn load(&self, location: usize) -> usize {
        self.load[location]
    }

    pub fn has_room(&self, location: usize) -> bool {
        self.load[location] < self.capacity
    }

    /// Items resident at `location`.
    pub fn residents(&self, location: usize) -> impl Iterator<Item = &Item> + '_ {
        self.slot_range(location).iter().map(|&a| &self.items[a])
    }

    pub fn item_count(&self) -> usize {
        self.items.len()
    }

    /// Number of registered items that currently have a location.
    pub fn placed_count(&self) -> usize {
        self.load.iter().sum()
    }

    pub fn location_of(&self, id: ItemId) -> Option<usize> {
        let arena = *self.index.get(&id)?;
        let loc = self.location[arena];
        (loc != NO_LOCATION).then_some(loc)
    }

    /// Every registered item with its location, in insertion order.
    pub fn assignment(&self) -> impl Iterator<Item = (&Item, Option<usize>)> + '_ {
        self.items
            .iter()
            .zip(&self.location)
            .map(|(item, &loc)| (item, (loc != NO_LOCATION).then_some(loc)))
    }

    pub fn stats(&self) -> MoveStats {
        MoveStats {
            total_moves: self.total_moves,
            max_moves: self.max_moves,
            label_sum: self.labels.iter().map(|&l| l as u64).sum(),
            max_label: self.labels.iter().copied().max().unwrap_or(0),
        }
    }

    /// Checks every structural invariant of the table.
    pub fn validate(&self) -> Result<(), InvariantViolation> {
        let mut free = 0;
        for v in 0..self.n {
            let load = self.load[v];
            if load > self.capacity {
                return Err(InvariantViolation::Overloaded {
                    location: v,
                    load,
                    capacity: self.capacity,
                });
            }
            if load < self.capacity {
                free += 1;
            }
            if self.labels[v] > self.n {
                return Err(InvariantViolation::LabelTooLarge {
                    location: v,
                    label: self.labels[v],
                    bound: self.n,
                });
            }
            for &a in self.slot_range(v) {
                let item = &self.items[a];
                if self.location[a] != v {
                    return Err(InvariantViolation::Misplaced(item.id));
                }
                if !item.choices.contains(&v) {
                    return Err(InvariantViolation::NotAChoice {
                        item: item.id,
                        location: v,
                    });
                }
            }
        }
        if free != self.free_count {
            return Err(InvariantViolation::FreeCount {
                recorded: self.free_count,
                actual: free,
            });
        }
        // Slots were checked against `location` above; the reverse direction
        // catches an item that believes it is seated somewhere it is not.
        for (a, &loc) in self.location.iter().enumerate() {
            if loc != NO_LOCATION && !self.slot_range(loc).contains(&a) {
                return Err(InvariantViolation::Misplaced(self.items[a].id));
            }
        }
        Ok(())
    }

    fn slot_range(&self, location: usize) -> &[usize] {
        let start = location * self.capacity;
        &self.slots[start..start + self.load[location]]
    }

    /// Validates and registers a new item, returning its arena index.
    fn register(&mut self, item: Item) -> Result<usize, AllocError> {
        if item.choices.is_empty() {
            return Err(AllocError::NoChoices(item.id));
        }
        if let Some(&location) = item.choices.iter().find(|&&c| c >= self.n) {
            return Err(AllocError::ChoiceOutOfRange {
                item: item.id,
                location,
                n: self.n,
            });
        }
        if self.index.contains_key(&item.id) {
            return Err(AllocError::DuplicateItem(item.id));
        }
        let arena = self.items.len();
        self.index.insert(item.id, arena);
        self.items.push(item);
        self.location.push(NO_LOCATION);
        Ok(arena)
    }

    /// Seats `arena` at `v`, which must have room.
    fn place(&mut self, arena: usize, v: usize) {
        debug_assert!(self.load[v] < self.capacity);
        self.slots[v * self.capacity + self.load[v]] = arena;
        self.load[v] += 1;
        if self.load[v] == self.capacity {
            self.free_count -= 1;
        }
        self.location[arena] = v;
    }

    /// Replaces the resident in slot `slot` of the full location `v` with
    /// `arena` and returns the evicted arena index.
    fn replace(&mut self, arena: usize, v: usize, slot: usize) -> usize {
        debug_assert!(slot < self.load[v]);
        let cell = &mut self.slots[v * self.capacity + slot];
        let evicted = std::mem::replace(cell, arena);
        self.location[arena] = v;
        self.location[evicted] = NO_LOCATION;
        evicted
    }

    fn finish(&mut self, report: InsertReport) -> InsertReport {
        self.total_moves += report.moves;
        self.max_moves = self.max_moves.max(report.moves);
        report
    }
}
