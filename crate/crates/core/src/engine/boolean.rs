//! Circuits over bitwise `Z_2` sharings: equality, comparison, bit decomposition.
//!
//! Batched variants take `k` operands laid out back to back, `bits` shares
//! each, least significant bit first.

use super::{ProtocolContext, ProtocolError};
use crate::ring::{Party, RingError, RingTag, Share, ShareVector};

/// Bitwise `Z_2` sharing of an `ℓ`-bit string, LSB first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitVectorShare {
    bits: ShareVector,
}

impl BitVectorShare {
    pub fn new(bits: ShareVector, len: usize) -> Result<BitVectorShare, RingError> {
        if bits.ring() != RingTag::Z2 {
            return Err(RingError::RingMismatch {
                left: RingTag::Z2,
                right: bits.ring(),
            });
        }
        if bits.len() != len {
            return Err(RingError::LengthMismatch {
                left: len,
                right: bits.len(),
            });
        }
        Ok(BitVectorShare { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &ShareVector {
        &self.bits
    }

    pub fn into_bits(self) -> ShareVector {
        self.bits
    }
}

fn check_layout(x: &ShareVector, y: &ShareVector, bits: usize) -> Result<usize, ProtocolError> {
    if bits == 0 {
        return Err(ProtocolError::Usage("bit strings must be non-empty".into()));
    }
    if x.ring() != RingTag::Z2 || y.ring() != RingTag::Z2 {
        return Err(ProtocolError::Usage("bitwise operands must be shared over Z_2".into()));
    }
    if x.len() != y.len() {
        return Err(RingError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        }
        .into());
    }
    if !x.len().is_multiple_of(bits) {
        return Err(ProtocolError::Usage(format!(
            "{} shares do not split into {bits}-bit strings",
            x.len()
        )));
    }
    Ok(x.len() / bits)
}

/// `[[x == y]]` for `k` pairs of `bits`-bit strings.
///
/// `r_i = x_i + y_i + 1` is 1 exactly where the bits agree; the product of
/// all `r_i` is computed as a binary tree, one round per level.
pub fn secure_equality_batch(
    ctx: &mut ProtocolContext,
    x: &ShareVector,
    y: &ShareVector,
    bits: usize,
) -> Result<ShareVector, ProtocolError> {
    let k = check_layout(x, y, bits)?;
    let r = x.add(y)?.add_const(1)?;
    ctx.stats_mut().equality_tests += k as u64;

    let party = ctx.party();
    let mut width = bits;
    let mut level = r.into_values();
    while width > 1 {
        let half = width / 2;
        let mut left = Vec::with_capacity(k * half);
        let mut right = Vec::with_capacity(k * half);
        for t in 0..k {
            let row = &level[t * width..(t + 1) * width];
            for p in 0..half {
                left.push(row[2 * p]);
                right.push(row[2 * p + 1]);
            }
        }
        let prod = ctx.mul_batch(
            &ShareVector::from_reduced(left, RingTag::Z2, party),
            &ShareVector::from_reduced(right, RingTag::Z2, party),
        )?;
        let prod = prod.values();
        let next_width = half + width % 2;
        let mut next = Vec::with_capacity(k * next_width);
        for t in 0..k {
            next.extend_from_slice(&prod[t * half..(t + 1) * half]);
            if width % 2 == 1 {
                next.push(level[(t + 1) * width - 1]);
            }
        }
        level = next;
        width = next_width;
    }
    Ok(ShareVector::from_reduced(level, RingTag::Z2, party))
}

pub fn secure_equality(
    ctx: &mut ProtocolContext,
    x: &BitVectorShare,
    y: &BitVectorShare,
) -> Result<Share, ProtocolError> {
    if x.len() != y.len() {
        return Err(RingError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        }
        .into());
    }
    let z = secure_equality_batch(ctx, x.bits(), y.bits(), x.len())?;
    Ok(z.get(0).expect("one result"))
}

/// `[[x >= y]]` (unsigned) for `k` pairs of `bits`-bit strings.
///
/// `w_i = x_i ⊕ y_i`; `u_i` is the OR of `w` from bit `i` up to the MSB,
/// built by a parallel suffix scan. `d_i = u_i ⊕ u_{i+1}` flags the most
/// significant differing bit, so `x >= y` iff nothing differs or `x` holds
/// the 1 there: `c = 1 ⊕ u_0 ⊕ Σ d_i·x_i`.
pub fn secure_compare_geq_batch(
    ctx: &mut ProtocolContext,
    x: &ShareVector,
    y: &ShareVector,
    bits: usize,
) -> Result<ShareVector, ProtocolError> {
    let k = check_layout(x, y, bits)?;
    ctx.stats_mut().comparisons += k as u64;
    let party = ctx.party();

    let mut u = x.add(y)?.into_values();
    let mut shift = 1;
    while shift < bits {
        let span = bits - shift;
        let mut left = Vec::with_capacity(k * span);
        let mut right = Vec::with_capacity(k * span);
        for t in 0..k {
            let row = &u[t * bits..(t + 1) * bits];
            left.extend_from_slice(&row[..span]);
            right.extend_from_slice(&row[shift..]);
        }
        let prod = ctx.mul_batch(
            &ShareVector::from_reduced(left.clone(), RingTag::Z2, party),
            &ShareVector::from_reduced(right.clone(), RingTag::Z2, party),
        )?;
        let prod = prod.values();
        for t in 0..k {
            for i in 0..span {
                let j = t * span + i;
                // a OR b = a ⊕ b ⊕ ab
                u[t * bits + i] = left[j] ^ right[j] ^ prod[j];
            }
        }
        shift *= 2;
    }

    let mut d = Vec::with_capacity(k * bits);
    for t in 0..k {
        let row = &u[t * bits..(t + 1) * bits];
        for i in 0..bits {
            let above = if i + 1 < bits { row[i + 1] } else { 0 };
            d.push(row[i] ^ above);
        }
    }
    let selected = ctx.mul_batch(&ShareVector::from_reduced(d, RingTag::Z2, party), x)?;
    let selected = selected.values();
    let out = (0..k)
        .map(|t| {
            let s = selected[t * bits..(t + 1) * bits].iter().fold(0, |acc, &v| acc ^ v);
            u[t * bits] ^ s
        })
        .collect();
    Ok(ShareVector::from_reduced(out, RingTag::Z2, party).add_const(1)?)
}

pub fn secure_compare_geq(
    ctx: &mut ProtocolContext,
    x: &BitVectorShare,
    y: &BitVectorShare,
) -> Result<Share, ProtocolError> {
    if x.len() != y.len() {
        return Err(RingError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        }
        .into());
    }
    let c = secure_compare_geq_batch(ctx, x.bits(), y.bits(), x.len())?;
    Ok(c.get(0).expect("one result"))
}

/// Low `bits` bits of each shared `Z_2^64` value, as bitwise `Z_2` sharings.
///
/// Each party decomposes its own additive share in the clear; the two bit
/// strings are then summed by a shared ripple-carry adder whose final carry
/// is dropped, which is exact because the sharing is modulo `2^64`.
/// The output holds `bits` shares per input value, LSB first.
pub fn secure_bit_decompose_batch(
    ctx: &mut ProtocolContext,
    x: &ShareVector,
    bits: usize,
) -> Result<ShareVector, ProtocolError> {
    if x.ring() != RingTag::Z2_64 {
        return Err(ProtocolError::Usage(
            "decomposition input must be shared over Z_2^64".into(),
        ));
    }
    if bits == 0 || bits > 64 {
        return Err(ProtocolError::Usage(format!("cannot decompose into {bits} bits")));
    }
    let party = ctx.party();
    let k = x.len();
    let own_bit = |i: usize| -> Vec<u64> { x.values().iter().map(|v| (v >> i) & 1).collect() };
    let zero = vec![0u64; k];

    let mut out = vec![0u64; k * bits];
    let mut carry = zero.clone();
    for i in 0..bits {
        let mine = own_bit(i);
        let (a, b) = match party {
            Party::Alice => (mine, zero.clone()),
            Party::Bob => (zero.clone(), mine),
        };
        for t in 0..k {
            out[t * bits + i] = a[t] ^ b[t] ^ carry[t];
        }
        if i + 1 < bits {
            // carry' = maj(a, b, c) = (a ⊕ c)(b ⊕ c) ⊕ c
            let l: Vec<u64> = a.iter().zip(&carry).map(|(a, c)| a ^ c).collect();
            let r: Vec<u64> = b.iter().zip(&carry).map(|(b, c)| b ^ c).collect();
            let p = ctx.mul_batch(
                &ShareVector::from_reduced(l, RingTag::Z2, party),
                &ShareVector::from_reduced(r, RingTag::Z2, party),
            )?;
            carry = p.values().iter().zip(&carry).map(|(p, c)| p ^ c).collect();
        }
    }
    Ok(ShareVector::from_reduced(out, RingTag::Z2, party))
}

pub fn secure_bit_decompose(
    ctx: &mut ProtocolContext,
    x: &Share,
    bits: usize,
) -> Result<BitVectorShare, ProtocolError> {
    let v = ShareVector::from_shares(&[*x])?;
    Ok(BitVectorShare::new(secure_bit_decompose_batch(ctx, &v, bits)?, bits)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dealer::Demand;
    use crate::engine::cost;
    use crate::local::{run_pair, split_vector};
    use crate::ring::reconstruct_vector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn bits_of(v: u64, n: usize) -> impl Iterator<Item = u64> {
        (0..n).map(move |i| (v >> i) & 1)
    }

    fn z2(n: usize) -> Demand {
        Demand {
            z2_triples: n,
            ..Demand::default()
        }
    }

    #[test]
    fn equality_examples() {
        // 00101 vs 00101 and 00101 vs 00100
        let xs: Vec<u64> = bits_of(0b00101, 5).chain(bits_of(0b00101, 5)).collect();
        let ys: Vec<u64> = bits_of(0b00101, 5).chain(bits_of(0b00100, 5)).collect();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let (xa, xb) = split_vector(&xs, RingTag::Z2, &mut rng);
        let (ya, yb) = split_vector(&ys, RingTag::Z2, &mut rng);
        let run = run_pair(
            &z2(2 * cost::equality_triples(5)),
            None,
            move |ctx| secure_equality_batch(ctx, &xa, &ya, 5),
            move |ctx| secure_equality_batch(ctx, &xb, &yb, 5),
        )
        .unwrap();
        assert_eq!(reconstruct_vector(&run.alice, &run.bob).unwrap(), vec![1, 0]);
        assert_eq!(run.alice_ctx.transport().counters().rounds, 3);
        assert_eq!(run.bob_ctx.bundle().triples(RingTag::Z2).remaining(), 0);
    }

    #[test]
    fn equality_exhaustive_four_bits() {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        let mut expect = Vec::new();
        for x in 0..16u64 {
            for y in 0..16u64 {
                xs.extend(bits_of(x, 4));
                ys.extend(bits_of(y, 4));
                expect.push((x == y) as u64);
            }
        }
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let (xa, xb) = split_vector(&xs, RingTag::Z2, &mut rng);
        let (ya, yb) = split_vector(&ys, RingTag::Z2, &mut rng);
        let run = run_pair(
            &z2(256 * 3),
            Some([4; 32]),
            move |ctx| secure_equality_batch(ctx, &xa, &ya, 4),
            move |ctx| secure_equality_batch(ctx, &xb, &yb, 4),
        )
        .unwrap();
        assert_eq!(reconstruct_vector(&run.alice, &run.bob).unwrap(), expect);
        assert_eq!(run.alice_ctx.stats().equality_tests, 256);
    }

    #[test]
    fn single_bit_equality_needs_no_round() {
        let xa = ShareVector::new(vec![1], RingTag::Z2, Party::Alice).unwrap();
        let xb = ShareVector::new(vec![0], RingTag::Z2, Party::Bob).unwrap();
        let ya = ShareVector::new(vec![0], RingTag::Z2, Party::Alice).unwrap();
        let yb = ShareVector::new(vec![1], RingTag::Z2, Party::Bob).unwrap();
        let run = run_pair(
            &z2(0),
            None,
            move |ctx| secure_equality_batch(ctx, &xa, &ya, 1),
            move |ctx| secure_equality_batch(ctx, &xb, &yb, 1),
        )
        .unwrap();
        assert_eq!(reconstruct_vector(&run.alice, &run.bob).unwrap(), vec![1]);
        assert_eq!(run.alice_ctx.transport().counters().rounds, 0);
    }

    #[test]
    fn compare_small_cases() {
        // (x, y, bits): x = y, 0 vs 1, 1 vs 0, and a few wider ones
        let cases = [
            (5u64, 5u64, 3usize),
            (0, 1, 1),
            (1, 0, 1),
            (6, 9, 4),
            (9, 6, 4),
            (0, 0, 1),
        ];
        for (x, y, bits) in cases {
            let mut rng = ChaCha20Rng::seed_from_u64(x * 31 + y);
            let xs: Vec<u64> = bits_of(x, bits).collect();
            let ys: Vec<u64> = bits_of(y, bits).collect();
            let (xa, xb) = split_vector(&xs, RingTag::Z2, &mut rng);
            let (ya, yb) = split_vector(&ys, RingTag::Z2, &mut rng);
            let run = run_pair(
                &z2(cost::compare_triples(bits)),
                None,
                move |ctx| secure_compare_geq_batch(ctx, &xa, &ya, bits),
                move |ctx| secure_compare_geq_batch(ctx, &xb, &yb, bits),
            )
            .unwrap();
            let c = reconstruct_vector(&run.alice, &run.bob).unwrap()[0];
            assert_eq!(c, (x >= y) as u64, "{x} >= {y}");
            assert_eq!(
                run.alice_ctx.transport().counters().rounds as usize,
                cost::compare_rounds(bits)
            );
            assert_eq!(run.alice_ctx.bundle().triples(RingTag::Z2).remaining(), 0);
        }
    }

    #[test]
    fn decompose_examples_and_random() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let mut values = vec![0u64, 1 << 63, u64::MAX, 1];
        values.extend((0..200).map(|_| rng.gen::<u64>()));
        let k = values.len();
        let (xa, xb) = split_vector(&values, RingTag::Z2_64, &mut rng);
        let run = run_pair(
            &z2(k * 63),
            None,
            move |ctx| secure_bit_decompose_batch(ctx, &xa, 64),
            move |ctx| secure_bit_decompose_batch(ctx, &xb, 64),
        )
        .unwrap();
        let bits = reconstruct_vector(&run.alice, &run.bob).unwrap();
        for (t, v) in values.iter().enumerate() {
            let got: Vec<u64> = bits[t * 64..(t + 1) * 64].to_vec();
            let want: Vec<u64> = bits_of(*v, 64).collect();
            assert_eq!(got, want, "value {v:#x}");
        }
        assert_eq!(bits[64..128].iter().filter(|&&b| b == 1).count(), 1);
        assert_eq!(run.bob_ctx.transport().counters().rounds, 63);
    }

    #[test]
    fn decompose_truncates_to_low_bits() {
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        let values: Vec<u64> = (0..50).map(|_| rng.gen()).collect();
        let (xa, xb) = split_vector(&values, RingTag::Z2_64, &mut rng);
        let run = run_pair(
            &z2(50 * 9),
            None,
            move |ctx| secure_bit_decompose_batch(ctx, &xa, 10),
            move |ctx| secure_bit_decompose_batch(ctx, &xb, 10),
        )
        .unwrap();
        let bits = reconstruct_vector(&run.alice, &run.bob).unwrap();
        for (t, v) in values.iter().enumerate() {
            let low = (0..10).fold(0u64, |acc, i| acc | (bits[t * 10 + i] << i));
            assert_eq!(low, v & 0x3ff);
        }
    }

    #[test]
    fn usage_errors() {
        let xa = ShareVector::zeros(6, RingTag::Z2, Party::Alice);
        let xb = ShareVector::zeros(6, RingTag::Z2, Party::Bob);
        let r = run_pair(
            &z2(10),
            None,
            move |ctx| secure_equality_batch(ctx, &xa, &xa, 4),
            move |ctx| secure_equality_batch(ctx, &xb, &xb, 4),
        );
        assert!(matches!(r, Err(ProtocolError::Usage(_))));
        let short = BitVectorShare::new(ShareVector::zeros(3, RingTag::Z2, Party::Alice), 4);
        assert!(short.is_err());
    }
}
