//! Open-addressed map from packed lattice points to step indices.
//!
//! Cleared in O(1) by bumping a generation stamp; capacity is fixed at
//! construction (walk length is known), so probes never resize.

const EMPTY_GEN: u32 = 0;

pub struct PointMap {
    keys: Vec<u64>,
    gens: Vec<u32>,
    vals: Vec<u32>,
    mask: usize,
    gen: u32,
}

impl PointMap {
    pub fn with_capacity(items: usize) -> Self {
        let slots = (4 * items.max(4)).next_power_of_two();
        Self {
            keys: vec![0; slots],
            gens: vec![EMPTY_GEN; slots],
            vals: vec![0; slots],
            mask: slots - 1,
            gen: 1,
        }
    }

    pub fn clear(&mut self) {
        self.gen = self.gen.wrapping_add(1);
        if self.gen == EMPTY_GEN {
            self.gens.fill(EMPTY_GEN);
            self.gen = 1;
        }
    }

    #[inline]
    fn slot_of(&self, key: u64) -> usize {
        (key.wrapping_mul(0x9e37_79b9_7f4a_7c15) >> 32) as usize & self.mask
    }

    /// Inserts; the key must not already be present.
    #[inline]
    pub fn insert(&mut self, key: u64, val: u32) {
        let mut slot = self.slot_of(key);
        loop {
            if self.gens[slot] != self.gen {
                self.keys[slot] = key;
                self.gens[slot] = self.gen;
                self.vals[slot] = val;
                return;
            }
            debug_assert_ne!(self.keys[slot], key, "duplicate key");
            slot = (slot + 1) & self.mask;
        }
    }

    #[inline]
    pub fn get(&self, key: u64) -> Option<u32> {
        let mut slot = self.slot_of(key);
        loop {
            if self.gens[slot] != self.gen {
                return None;
            }
            if self.keys[slot] == key {
                return Some(self.vals[slot]);
            }
            slot = (slot + 1) & self.mask;
        }
    }
}
