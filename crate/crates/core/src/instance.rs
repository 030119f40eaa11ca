//! Random allocation instances.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::alloc::Item;
use crate::rng::{stream_rng, Stream};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InstanceError {
    #[error("instance needs at least one location")]
    NoLocations,
    #[error("instances need k >= 2 choices, got {0}")]
    TooFewChoices(usize),
    #[error("cannot draw {k} distinct choices from {n} locations")]
    NotEnoughLocations { k: usize, n: usize },
    #[error("density must be finite and non-negative, got {0}")]
    BadDensity(f64),
    #[error("location capacity must be at least 1")]
    ZeroCapacity,
}

/// Parameters of one random experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSpec {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    /// Items per location; `m = floor(c n)` when built from a density.
    pub c: f64,
    pub capacity: usize,
    pub seed: u64,
    /// Draw k distinct locations per item instead of a multiset.
    pub distinct: bool,
}

impl InstanceSpec {
    pub fn with_density(n: usize, k: usize, c: f64, seed: u64) -> Result<Self, InstanceError> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(InstanceError::BadDensity(c));
        }
        let spec = InstanceSpec {
            n,
            k,
            m: floor_items(c, n),
            c,
            capacity: 1,
            seed,
            distinct: false,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_items(n: usize, k: usize, m: usize, seed: u64) -> Result<Self, InstanceError> {
        let spec = InstanceSpec {
            n,
            k,
            m,
            c: if n == 0 { 0.0 } else { m as f64 / n as f64 },
            capacity: 1,
            seed,
            distinct: false,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn capacity(mut self, capacity: usize) -> Result<Self, InstanceError> {
        self.capacity = capacity;
        self.validate()?;
        Ok(self)
    }

    pub fn distinct(mut self, distinct: bool) -> Result<Self, InstanceError> {
        self.distinct = distinct;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        if self.n == 0 {
            return Err(InstanceError::NoLocations);
        }
        if self.k < 2 {
            return Err(InstanceError::TooFewChoices(self.k));
        }
        if self.capacity == 0 {
            return Err(InstanceError::ZeroCapacity);
        }
        if self.distinct && self.k > self.n {
            return Err(InstanceError::NotEnoughLocations {
                k: self.k,
                n: self.n,
            });
        }
        Ok(())
    }

    pub fn items(&self) -> ItemStream {
        gen_instance(self)
    }
}

/// `floor(c n)`, snapping products that land within rounding error of an
/// integer (0.29 * 100 is 28.999999999999996 in binary floating point).
pub fn floor_items(c: f64, n: usize) -> usize {
    let x = c * n as f64;
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r as usize
    } else {
        x.floor() as usize
    }
}

/// Items of an instance in arrival order, ids `0..m`.
pub struct ItemStream {
    rng: ChaCha8Rng,
    n: usize,
    k: usize,
    distinct: bool,
    next: usize,
    m: usize,
}

pub fn gen_instance(spec: &InstanceSpec) -> ItemStream {
    ItemStream {
        rng: stream_rng(spec.seed, Stream::Instance),
        n: spec.n,
        k: spec.k,
        distinct: spec.distinct,
        next: 0,
        m: spec.m,
    }
}

impl Iterator for ItemStream {
    type Item = Item;

    fn next(&mut self) -> Option<Item> {
        if self.next >= self.m {
            return None;
        }
        let id = self.next as u64;
        self.next += 1;
        let mut choices = Vec::with_capacity(self.k);
        while choices.len() < self.k {
            let c = self.rng.random_range(0..self.n);
            if !self.distinct || !choices.contains(&c) {
                choices.push(c);
            }
        }
        Some(Item::new(id, choices))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.m - self.next;
        (left, Some(left))
    }
}

impl ExactSizeIterator for ItemStream {}
