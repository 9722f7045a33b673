//! Closed-form randomness and round costs of the engine's circuits.
//!
//! The dealer sizes bundles from these, and the tests check them against
//! measured consumption.

pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Rounds taken by input sharing, a Beaver multiplication batch, or an opening.
pub const SINGLE_ROUND: usize = 1;

/// Z_2 -> Z_2^64 conversion: one sharing round plus one multiplication round.
pub const CONVERT_ROUNDS: usize = 2;

/// Binary product tree over `bits` factors.
pub fn equality_triples(bits: usize) -> usize {
    bits.saturating_sub(1)
}

pub fn equality_rounds(bits: usize) -> usize {
    ceil_log2(bits)
}

/// Prefix-OR levels (`bits - s` ANDs at shift `s`) plus the final selection.
pub fn compare_triples(bits: usize) -> usize {
    let mut total = bits;
    let mut shift = 1;
    while shift < bits {
        total += bits - shift;
        shift *= 2;
    }
    total
}

pub fn compare_rounds(bits: usize) -> usize {
    ceil_log2(bits) + 1
}

/// Ripple-carry adder: one AND per carry.
pub fn decompose_triples(bits: usize) -> usize {
    bits.saturating_sub(1)
}

pub fn decompose_rounds(bits: usize) -> usize {
    bits.saturating_sub(1)
}
