//! Deterministic RNG and interaction schedulers.
//!
//! The generator identity is part of the tool's external interface: results
//! are reproducible from the 64-bit seed alone, on any platform. We use
//! splitmix64 (Steele, Lea & Flood's SplittableRandom finalizer) for the
//! stream and Lemire's multiply-shift rejection method for unbiased bounded
//! draws.

use super::{EngineError, InteractionPair};

/// Deterministic RNG with a single 64-bit state (splitmix64).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimRng {
    state: u64,
}

impl SimRng {
    pub fn new(seed: u64) -> SimRng {
        SimRng { state: seed }
    }

    /// Next 64-bit value.
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Unbiased draw from `[0, bound)`.
    #[inline]
    pub fn bounded(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        let mut x = self.next_u64();
        let mut m = (x as u128) * (bound as u128);
        let mut low = m as u64;
        if low < bound {
            let threshold = bound.wrapping_neg() % bound;
            while low < threshold {
                x = self.next_u64();
                m = (x as u128) * (bound as u128);
                low = m as u64;
            }
        }
        (m >> 64) as u64
    }

    /// Unbiased draw from `[lo, hi]` (inclusive).
    #[inline]
    pub fn range_inclusive(&mut self, lo: u64, hi: u64) -> u64 {
        debug_assert!(lo <= hi);
        lo + self.bounded(hi - lo + 1)
    }

    /// Mix additional words into a seed, for deriving per-trial streams.
    pub fn derive(base: u64, words: &[u64]) -> u64 {
        let mut rng = SimRng::new(base);
        let mut acc = rng.next_u64();
        for w in words {
            let mut sub = SimRng::new(acc ^ *w);
            acc = sub.next_u64();
        }
        acc
    }
}

/// A source of interaction pairs. `None` means the source is exhausted
/// (only scripted schedulers ever are).
pub trait Scheduler {
    fn next_pair(&mut self) -> Option<InteractionPair>;
}

/// The uniform random scheduler: every ordered pair with probability
/// `1 / (n(n-1))`, deterministically from the seed.
#[derive(Debug, Clone)]
pub struct UniformScheduler {
    n: u32,
    rng: SimRng,
}

impl UniformScheduler {
    pub fn new(n: u32, seed: u64) -> Result<UniformScheduler, EngineError> {
        if n < 2 {
            return Err(EngineError::PopulationTooSmall(n as u64));
        }
        Ok(UniformScheduler {
            n,
            rng: SimRng::new(seed),
        })
    }
}

impl Scheduler for UniformScheduler {
    fn next_pair(&mut self) -> Option<InteractionPair> {
        let n = self.n as u64;
        let k = self.rng.bounded(n * (n - 1));
        let initiator = (k / (n - 1)) as u32;
        let slot = (k % (n - 1)) as u32;
        let responder = slot + u32::from(slot >= initiator);
        Some(InteractionPair::new(initiator, responder))
    }
}

/// Replays a recorded pair list, then reports exhaustion.
#[derive(Debug, Clone)]
pub struct ScriptedScheduler {
    pairs: Vec<InteractionPair>,
    pos: usize,
}

impl ScriptedScheduler {
    pub fn new(pairs: Vec<InteractionPair>) -> ScriptedScheduler {
        ScriptedScheduler { pairs, pos: 0 }
    }
}

impl Scheduler for ScriptedScheduler {
    fn next_pair(&mut self) -> Option<InteractionPair> {
        let pair = self.pairs.get(self.pos).copied();
        self.pos += usize::from(pair.is_some());
        pair
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn fixed_seed_reproduces_pair_sequence() {
        let mut a = UniformScheduler::new(7, 0xDEAD_BEEF).unwrap();
        let mut b = UniformScheduler::new(7, 0xDEAD_BEEF).unwrap();
        for _ in 0..1000 {
            assert_eq!(a.next_pair(), b.next_pair());
        }
    }

    #[test]
    fn n2_chi_square_passes_at_alpha_01() {
        // Two ordered pairs, each expected 1/2 over 1e5 draws. Critical
        // chi-square value at alpha = 0.01 with 1 dof is 6.635.
        let mut sched = UniformScheduler::new(2, 42).unwrap();
        let mut count01 = 0u64;
        let draws = 100_000u64;
        for _ in 0..draws {
            let p = sched.next_pair().unwrap();
            assert!(p.initiator < 2 && p.responder < 2 && p.initiator != p.responder);
            if p.initiator == 0 {
                count01 += 1;
            }
        }
        let exp = draws as f64 / 2.0;
        let count10 = draws - count01;
        let chi2 = (count01 as f64 - exp).powi(2) / exp + (count10 as f64 - exp).powi(2) / exp;
        assert!(chi2 < 6.635, "chi-square {chi2} too large");
    }

    #[test]
    fn n3_pairs_within_three_sigma_over_1e6_draws() {
        let mut sched = UniformScheduler::new(3, 7).unwrap();
        let draws = 1_000_000u64;
        let mut counts: HashMap<(u32, u32), u64> = HashMap::new();
        for _ in 0..draws {
            let p = sched.next_pair().unwrap();
            *counts.entry((p.initiator, p.responder)).or_default() += 1;
        }
        assert_eq!(counts.len(), 6);
        let p = 1.0 / 6.0;
        let exp = draws as f64 * p;
        let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
        for (&pair, &c) in &counts {
            let dev = (c as f64 - exp).abs();
            assert!(dev < 3.0 * sigma, "pair {pair:?} deviates {dev} (> 3 sigma)");
        }
    }

    #[test]
    fn bounded_draw_is_unbiased_at_small_bounds() {
        let mut rng = SimRng::new(9);
        let mut counts = [0u64; 5];
        for _ in 0..500_000 {
            counts[rng.bounded(5) as usize] += 1;
        }
        let exp = 100_000.0;
        let sigma: f64 = (500_000.0f64 * 0.2 * 0.8).sqrt();
        for c in counts {
            assert!((c as f64 - exp).abs() < 5.0 * sigma);
        }
    }

    #[test]
    fn scripted_scheduler_replays_then_ends() {
        let pairs = vec![InteractionPair::new(0, 1), InteractionPair::new(2, 0)];
        let mut s = ScriptedScheduler::new(pairs.clone());
        assert_eq!(s.next_pair(), Some(pairs[0]));
        assert_eq!(s.next_pair(), Some(pairs[1]));
        assert_eq!(s.next_pair(), None);
        assert_eq!(s.next_pair(), None);
    }

    #[test]
    fn derive_differs_across_words() {
        let a = SimRng::derive(1, &[2, 3, 4]);
        let b = SimRng::derive(1, &[2, 3, 5]);
        let c = SimRng::derive(1, &[2, 3, 4]);
        assert_ne!(a, b);
        assert_eq!(a, c);
    }
}
