//! Seeded randomness tapes.
//!
//! Every machine reads from its own tape. The tape for a machine is a pure
//! function of `(seed, machine id)` unless the assignment pins it to a fixed
//! source, so two branches of a check that share an assignment see
//! bitwise-identical randomness.

use std::collections::BTreeMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::machine::MachineId;

/// How one machine's tape is produced when it is not derived from the seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TapeOverride {
    /// The all-zeros tape.
    Zeros,
    /// Derived from this seed instead of the assignment seed.
    Seed(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomnessAssignment {
    pub seed: u64,
    pub overrides: BTreeMap<MachineId, TapeOverride>,
}

impl RandomnessAssignment {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            overrides: BTreeMap::new(),
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            overrides: self.overrides.clone(),
        }
    }

    pub fn with_override(mut self, id: impl Into<MachineId>, tape: TapeOverride) -> Self {
        self.overrides.insert(id.into(), tape);
        self
    }

    /// A fresh reader positioned at the start of `id`'s tape.
    pub fn tape_for(&self, id: &str) -> Tape {
        match self.overrides.get(id) {
            Some(TapeOverride::Zeros) => Tape::Zeros,
            Some(TapeOverride::Seed(s)) => Tape::derived(*s, id),
            None => Tape::derived(self.seed, id),
        }
    }
}

impl Default for RandomnessAssignment {
    fn default() -> Self {
        Self::new(0)
    }
}

/// A read cursor over one machine's tape.
#[derive(Clone, Debug)]
pub enum Tape {
    Zeros,
    Stream(Box<ChaCha8Rng>),
}

impl Tape {
    fn derived(seed: u64, id: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(seed.to_le_bytes());
        hasher.update(id.as_bytes());
        let key: [u8; 32] = hasher.finalize().into();
        Tape::Stream(Box::new(ChaCha8Rng::from_seed(key)))
    }

    pub fn next_byte(&mut self) -> u8 {
        let mut b = [0u8; 1];
        self.fill(&mut b);
        b[0]
    }

    pub fn next_bit(&mut self) -> bool {
        self.next_byte() & 1 == 1
    }

    pub fn next_bytes(&mut self, n: usize) -> Vec<u8> {
        let mut out = vec![0u8; n];
        self.fill(&mut out);
        out
    }

    fn fill(&mut self, buf: &mut [u8]) {
        match self {
            Tape::Zeros => buf.fill(0),
            Tape::Stream(rng) => rng.fill_bytes(buf),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_and_id_same_stream() {
        let a = RandomnessAssignment::new(7);
        let b = RandomnessAssignment::new(7);
        assert_eq!(a.tape_for("V").next_bytes(64), b.tape_for("V").next_bytes(64));
    }

    #[test]
    fn ids_get_independent_streams() {
        let a = RandomnessAssignment::new(7);
        assert_ne!(a.tape_for("V").next_bytes(32), a.tape_for("A").next_bytes(32));
    }

    #[test]
    fn seeds_differ() {
        let a = RandomnessAssignment::new(1);
        let b = RandomnessAssignment::new(2);
        assert_ne!(a.tape_for("T").next_bytes(32), b.tape_for("T").next_bytes(32));
    }

    #[test]
    fn zeros_override() {
        let a = RandomnessAssignment::new(3).with_override("A", TapeOverride::Zeros);
        assert_eq!(a.tape_for("A").next_bytes(16), vec![0; 16]);
        assert_ne!(a.tape_for("T").next_bytes(16), vec![0; 16]);
    }

    #[test]
    fn seed_override_matches_plain_assignment() {
        let a = RandomnessAssignment::new(3).with_override("T", TapeOverride::Seed(9));
        let b = RandomnessAssignment::new(9);
        assert_eq!(a.tape_for("T").next_bytes(16), b.tape_for("T").next_bytes(16));
    }
}
