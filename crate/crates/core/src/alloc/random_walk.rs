//! Random-walk insertion, the usual cuckoo baseline.
//!
//! The item picks one of its choices uniformly. If that location is full a
//! uniformly chosen resident is evicted, and the evicted item picks uniformly
//! among its choices other than the location it was just removed from. Labels
//! are not touched.

use rand::Rng;

use super::{AllocError, AllocationTable, ChainStep, InsertReport, Item, Outcome};

impl AllocationTable {
    /// Walks until a location with room is found or `max_moves` moves have
    /// been made. `rng` is the caller's random-walk stream; the same stream
    /// and table state replay the same walk.
    pub fn insert_random_walk<R: Rng + ?Sized>(
        &mut self,
        item: Item,
        max_moves: u64,
        rng: &mut R,
    ) -> Result<InsertReport, AllocError> {
        if max_moves == 0 {
            return Err(AllocError::ZeroMoveCap);
        }
        let mut current = self.register(item)?;
        let mut moves = 0u64;
        let mut chain = self.tracing.then(Vec::new);
        let mut came_from = None;

        let outcome = loop {
            if moves >= max_moves {
                break Outcome::MoveCapExceeded;
            }
            let v = pick_choice(&self.items[current].choices, came_from, rng);
            moves += 1;
            let placed = self.items[current].id;
            if self.has_room(v) {
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
            let slot = if self.capacity == 1 {
                0
            } else {
                rng.random_range(0..self.capacity)
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
            came_from = Some(v);
        };

        let unplaced = (outcome != Outcome::Placed).then(|| self.items[current].id);
        Ok(self.finish(InsertReport {
            outcome,
            moves,
            unplaced,
            chain,
        }))
    }
}

/// Uniform choice among the locations different from `exclude`, or among all
/// choices when every one of them equals `exclude`.
fn pick_choice<R: Rng + ?Sized>(choices: &[usize], exclude: Option<usize>, rng: &mut R) -> usize {
    let Some(exclude) = exclude else {
        return choices[rng.random_range(0..choices.len())];
    };
    let others = choices.iter().filter(|&&c| c != exclude).count();
    if others == 0 {
        return exclude;
    }
    let nth = rng.random_range(0..others);
    choices
        .iter()
        .copied()
        .filter(|&c| c != exclude)
        .nth(nth)
        .expect("nth is below the count of other choices")
}
