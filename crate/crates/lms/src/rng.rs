//! Deterministic pseudo-random number generator used for synthetic meshes and
//! random orderings.
//!
//! The generator is SplitMix64 (Steele, Lea & Flood's `splitmix64` finalizer):
//! the 64-bit state advances by the golden-gamma constant `0x9E3779B97F4A7C15`
//! and each output is the mix
//!
//! ```text
//! z  = state
//! z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9
//! z ^= z >> 27;  z *= 0x94D049BB133111EB
//! return z ^ (z >> 31)
//! ```
//!
//! The algorithm is part of this crate's external interface: any independent
//! implementation that follows it byte for byte regenerates identical
//! synthetic meshes and random permutations. Reference vectors (first three
//! outputs per seed):
//!
//! | seed                  | output 1             | output 2             | output 3             |
//! |-----------------------|----------------------|----------------------|----------------------|
//! | `0`                   | `0xE220A8397B1DCDAF` | `0x6E789E6AA1B965F4` | `0x06C45D188009454F` |
//! | `42`                  | `0xBDD732262FEB6E95` | `0x28EFE333B266F103` | `0x47526757130F9F52` |
//! | `0x0123456789ABCDEF`  | `0x157A3807A48FAA9D` | `0xD573529B34A1D093` | `0x2F90B72E996DCCBE` |
//!
//! Derived draws, also pinned:
//! * `next_unit` maps an output `x` to `(x >> 11) * 2^-53`, a double in `[0, 1)`.
//! * `next_below(b)` is `next_u64() % b` (the modulo bias is irrelevant for the
//!   bounds used here, all far below 2^64).

/// SplitMix64 generator. Copy-free, 8 bytes of state.
#[derive(Debug, Clone, Copy)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform double in `[0, 1)` built from the top 53 bits of one draw.
    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, bound)`. `bound` must be nonzero.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        self.next_u64() % bound
    }
}
