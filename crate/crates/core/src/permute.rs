//! Seeded atomic word swaps and the cumulative intermixing schedule.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text_model::WordSequence;

/// Replacement state for a zero seed (zero is a fixed point of xorshift).
const ZERO_SEED_STATE: u64 = 0x9E37_79B9_7F4A_7C15;
const XORSHIFT_STAR_MULTIPLIER: u64 = 2_685_821_657_736_338_717;

/// 64-bit xorshift* generator. Platform independent; the state is never zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prng {
    state: u64,
}

impl Prng {
    pub fn new(seed: u64) -> Self {
        let state = if seed == 0 { ZERO_SEED_STATE } else { seed };
        Self { state }
    }

    pub fn state(&self) -> u64 {
        self.state
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(XORSHIFT_STAR_MULTIPLIER)
    }

    /// Uniform index in `1..=n`, rejection-sampled so that every index is
    /// equally likely.
    ///
    /// # Panics
    /// If `n` is zero.
    pub fn next_index(&mut self, n: usize) -> usize {
        assert!(n >= 1, "index range must be non-empty");
        let n = n as u64;
        // Largest multiple of n that fits in 2^64 draws.
        let zone = (1u128 << 64) / n as u128 * n as u128;
        loop {
            let x = self.next_u64();
            if (x as u128) < zone {
                return (x % n) as usize + 1;
            }
        }
    }

    /// Uniform real in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Draws a 1-based index, returning it together with the advanced generator.
pub fn prng_next_index(prng: Prng, n: usize) -> (usize, Prng) {
    let mut next = prng;
    let index = next.next_index(n);
    (index, next)
}

/// How many cumulative swaps each intermixing state embodies:
/// state `k` has `floor(k * N / divisor)` swaps, for `k = 0..=max_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntermixSchedule {
    pub max_k: usize,
    pub divisor: u64,
}

impl Default for IntermixSchedule {
    fn default() -> Self {
        Self {
            max_k: 20,
            divisor: 10,
        }
    }
}

impl IntermixSchedule {
    pub fn new(max_k: usize, divisor: u64) -> Result<Self> {
        if divisor == 0 {
            return Err(Error::InvalidParameter(
                "swap divisor must be positive".into(),
            ));
        }
        Ok(Self { max_k, divisor })
    }

    /// Number of states, `max_k + 1`.
    pub fn states(&self) -> usize {
        self.max_k + 1
    }

    pub fn swap_count(&self, k: usize, words: usize) -> u64 {
        (k as u128 * words as u128 / self.divisor as u128) as u64
    }

    pub fn swap_counts(&self, words: usize) -> Vec<u64> {
        (0..=self.max_k)
            .map(|k| self.swap_count(k, words))
            .collect()
    }
}

pub fn atomic_swap(seq: &WordSequence, n: usize, m: usize) -> Result<WordSequence> {
    let mut out = seq.clone();
    out.swap(n, m)?;
    Ok(out)
}

/// Applies `count` atomic swaps, each drawing `n` then `m` from `prng`.
/// `n == m` is allowed and leaves the sequence unchanged.
pub(crate) fn apply_swaps(seq: &mut WordSequence, count: u64, prng: &mut Prng) {
    let len = seq.len();
    for _ in 0..count {
        let n = prng.next_index(len);
        let m = prng.next_index(len);
        seq.swap(n, m).expect("drawn indices are within 1..=len");
    }
}

/// Walks the intermixing states of one document along a single PRNG stream.
///
/// State `k` is derived from state `k - 1` by the additional swaps the
/// schedule asks for, so it embodies exactly `schedule.swap_count(k, N)`
/// swaps in total.
pub fn for_each_state<F>(
    seq: &WordSequence,
    schedule: &IntermixSchedule,
    prng: &mut Prng,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(usize, u64, &WordSequence) -> Result<()>,
{
    let counts = schedule.swap_counts(seq.len());
    if seq.len() < 2 && counts.iter().any(|&c| c > 0) {
        return Err(Error::TooFewWords(seq.len()));
    }
    let mut state = seq.clone();
    let mut done = 0;
    for (k, &target) in counts.iter().enumerate() {
        apply_swaps(&mut state, target - done, prng);
        done = target;
        visit(k, target, &state)?;
    }
    Ok(())
}

pub fn intermix_states(
    seq: &WordSequence,
    schedule: &IntermixSchedule,
    prng: &mut Prng,
) -> Result<Vec<WordSequence>> {
    let mut states = Vec::with_capacity(schedule.states());
    for_each_state(seq, schedule, prng, |_, _, s| {
        states.push(s.clone());
        Ok(())
    })?;
    Ok(states)
}
