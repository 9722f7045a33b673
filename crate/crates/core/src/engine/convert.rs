use super::{ProtocolContext, ProtocolError};
use crate::ring::{Party, RingError, RingTag, Share, ShareVector};

/// Lifts `Z_2` sharings of bits to `Z_2^64` sharings of the same bits.
///
/// Each party shares its own bit share `x_A` / `x_B` over `Z_2^64`, then
/// `x = x_A + x_B - 2·x_A·x_B`. Two rounds for the whole vector.
pub fn convert_2_to_q(ctx: &mut ProtocolContext, x: &ShareVector) -> Result<ShareVector, ProtocolError> {
    if x.ring() != RingTag::Z2 {
        return Err(ProtocolError::Usage("conversion input must be shared over Z_2".into()));
    }
    let k = x.len();
    let (mine, theirs) = ctx.share_inputs(RingTag::Z2_64, x.values(), k)?;
    let (xa, xb) = match ctx.party() {
        Party::Alice => (mine, theirs),
        Party::Bob => (theirs, mine),
    };
    let y = ctx.mul_batch(&xa, &xb)?;
    Ok(xa.add(&xb)?.sub(&y.scalar_mul(2)?)?)
}

/// Several inner products, all in one round.
pub fn secure_inner_products(
    ctx: &mut ProtocolContext,
    pairs: &[(&ShareVector, &ShareVector)],
) -> Result<Vec<Share>, ProtocolError> {
    if pairs.is_empty() {
        return Err(ProtocolError::Usage("no inner products requested".into()));
    }
    for (u, v) in pairs {
        if u.len() != v.len() {
            return Err(RingError::LengthMismatch {
                left: u.len(),
                right: v.len(),
            }
            .into());
        }
    }
    let lefts: Vec<&ShareVector> = pairs.iter().map(|p| p.0).collect();
    let rights: Vec<&ShareVector> = pairs.iter().map(|p| p.1).collect();
    let prod = ctx.mul_batch(&ShareVector::concat(&lefts)?, &ShareVector::concat(&rights)?)?;
    let mut start = 0;
    Ok(pairs
        .iter()
        .map(|(u, _)| {
            let part = prod.slice(start..start + u.len());
            start += u.len();
            part.sum()
        })
        .collect())
}

pub fn secure_inner_product(
    ctx: &mut ProtocolContext,
    u: &ShareVector,
    v: &ShareVector,
) -> Result<Share, ProtocolError> {
    Ok(secure_inner_products(ctx, &[(u, v)])?.remove(0))
}
