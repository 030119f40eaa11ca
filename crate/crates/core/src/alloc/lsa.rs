//! Local search allocation.
//!
//! Every location carries a label that never exceeds its distance to the
//! nearest location with spare capacity. An item goes to the choice with the
//! smallest label; the label of that location is raised to one more than the
//! smallest label among the item's other choices, and any resident item is
//! evicted and re-inserted the same way.
//!
//! Ties on the minimum label go to a choice with spare capacity first, then
//! to the lowest choice position. Duplicate choices are told apart by
//! position: the raised label is taken over every position except the
//! selected one.
//!
//! The chain gives up once the selected label reaches `n`. Labels are lower
//! bounds on distances, and a location that can reach spare capacity is at
//! most `n - 1` steps away, so a label of `n` proves that the homeless item
//! has no augmenting path.

use rand::Rng;

use super::{AllocError, AllocationTable, ChainStep, InsertReport, Item, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Variant {
    /// Labels are raised on every move, including placement on a free
    /// location. Unit capacity only.
    Unit,
    /// Labels are raised only when the selected location is already full; a
    /// location with room keeps label 0.
    Capacity,
}

impl AllocationTable {
    /// Inserts `item` into a unit-capacity table.
    pub fn insert_lsa(&mut self, item: Item) -> Result<InsertReport, AllocError> {
        self.require_unit()?;
        let arena = self.register(item)?;
        Ok(self.lsa_chain(arena, Variant::Unit, None))
    }

    /// As [`AllocationTable::insert_lsa`], but the chain is abandoned after
    /// `move_cap` moves. Nothing is unwound: items already moved stay where
    /// the chain put them, and the item displaced last is left homeless.
    pub fn insert_lsa_capped(
        &mut self,
        item: Item,
        move_cap: u64,
    ) -> Result<InsertReport, AllocError> {
        self.require_unit()?;
        if move_cap == 0 {
            return Err(AllocError::ZeroMoveCap);
        }
        let arena = self.register(item)?;
        Ok(self.lsa_chain(arena, Variant::Unit, Some(move_cap)))
    }

    /// Inserts `item` into a table of any capacity `s`. A full location is
    /// relieved by evicting one of its `s` residents chosen uniformly with the
    /// table's victim generator.
    pub fn insert_lsa_capacity(&mut self, item: Item) -> Result<InsertReport, AllocError> {
        let arena = self.register(item)?;
        Ok(self.lsa_chain(arena, Variant::Capacity, None))
    }

    fn require_unit(&self) -> Result<(), AllocError> {
        if self.capacity != 1 {
            return Err(AllocError::CapacityMismatch {
                expected: 1,
                found: self.capacity,
            });
        }
        Ok(())
    }

    /// Position of the choice with minimum label; ties prefer a location with
    /// room, then the lowest position.
    fn select(&self, choices: &[usize]) -> usize {
        let key = |v: usize| (self.labels[v], !self.has_room(v));
        let mut best = 0;
        let mut best_key = key(choices[0]);
        for (pos, &v) in choices.iter().enumerate().skip(1) {
            let k = key(v);
            if k < best_key {
                best = pos;
                best_key = k;
            }
        }
        best
    }

    /// One plus the minimum label over every choice position except `pos`,
    /// clamped to `n`. A single-choice item has no alternative, which sends
    /// its location straight to `n`.
    fn raised_label(&self, choices: &[usize], pos: usize) -> usize {
        let others = choices
            .iter()
            .enumerate()
            .filter(|&(p, _)| p != pos)
            .map(|(_, &u)| self.labels[u])
            .min()
            .unwrap_or(self.n);
        others.saturating_add(1).min(self.n)
    }

    fn lsa_chain(&mut self, start: usize, variant: Variant, move_cap: Option<u64>) -> InsertReport {
        let mut current = start;
        let mut moves = 0u64;
        let mut chain = self.tracing.then(Vec::new);

        let outcome = loop {
            let choices = &self.items[current].choices;
            let pos = self.select(choices);
            let v = choices[pos];
            if self.labels[v] >= self.n {
                break Outcome::NoAllocation;
            }
            if move_cap.is_some_and(|cap| moves >= cap) {
                break Outcome::MoveCapExceeded;
            }

            let full = !self.has_room(v);
            if variant == Variant::Unit || full {
                let raised = self.raised_label(choices, pos);
                debug_assert!(raised > self.labels[v]);
                self.labels[v] = raised;
            }
            moves += 1;

            let placed = self.items[current].id;
            if full {
                let slot = if self.capacity == 1 {
                    0
                } else {
                    self.victim_rng.random_range(0..self.capacity)
                };
                let evicted = self.replace(current, v, slot);
                if let Some(chain) = chain.as_mut() {
                    chain.push(ChainStep {
                        location: v,
                        placed,
                        evicted: Some(self.items[evicted].id),
                    });
                }
                current = evicted;
            } else {
                self.place(current, v);
                if let Some(chain) = chain.as_mut() {
                    chain.push(ChainStep {
                        location: v,
                        placed,
                        evicted: None,
                    });
                }
                break Outcome::Placed;
            }
        };

        let unplaced = (outcome != Outcome::Placed).then(|| self.items[current].id);
        self.finish(InsertReport {
            outcome,
            moves,
            unplaced,
            chain,
        })
    }
}
