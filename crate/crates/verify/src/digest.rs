//! Case-level randomness: ChaCha8 streams whose draws are fingerprinted so a
//! report records exactly which inputs a case consumed.

use std::hash::Hasher;

use fnv::FnvHasher;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// FNV-1a of a case id; mixed into the run seed to derive the case seed.
pub fn seed_offset(case_id: &str) -> u64 {
    let mut h = FnvHasher::default();
    h.write(case_id.as_bytes());
    h.finish()
}

pub struct DigestRng {
    inner: ChaCha8Rng,
    hasher: FnvHasher,
}

impl DigestRng {
    pub fn new(seed: u64) -> Self {
        Self { inner: ChaCha8Rng::seed_from_u64(seed), hasher: FnvHasher::default() }
    }

    /// Hex fingerprint of every value drawn so far.
    pub fn digest(&self) -> String {
        format!("{:016x}", self.hasher.finish())
    }
}

impl RngCore for DigestRng {
    fn next_u32(&mut self) -> u32 {
        let v = self.inner.next_u32();
        self.hasher.write_u32(v);
        v
    }

    fn next_u64(&mut self) -> u64 {
        let v = self.inner.next_u64();
        self.hasher.write_u64(v);
        v
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest);
        self.hasher.write(dest);
    }
}
