use super::{LrModel, StumpModel};
use crate::engine::{
    secure_bit_decompose_batch, secure_compare_geq_batch, secure_inner_product, secure_inner_products, Disclosure,
    ProtocolContext, ProtocolError,
};
use crate::ring::{Party, RingTag, Share, ShareVector, RING_BITS};

/// LR weights placed at Bob's feature-vector slots; unused slots weigh 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedLr {
    pub weights: Vec<u64>,
    pub intercept: u64,
}

impl EncodedLr {
    pub fn new(model: &LrModel, positions: &[usize], slots: usize) -> EncodedLr {
        let mut weights = vec![0; slots];
        for (w, &p) in model.weights().iter().zip(positions) {
            weights[p] = w.raw();
        }
        EncodedLr {
            weights,
            intercept: model.intercept().raw(),
        }
    }
}

/// Flattened vote vectors `(y_{1,0}, y_{1,1}, …)` and `z` over Bob's slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedStumps {
    pub y: Vec<u64>,
    pub z: Vec<u64>,
}

impl EncodedStumps {
    pub fn new(model: &StumpModel, positions: &[usize], slots: usize) -> EncodedStumps {
        let mut y = vec![0; 2 * slots];
        let mut z = vec![0; 2 * slots];
        for ((vy, vz), &p) in model.y().iter().zip(model.z()).zip(positions) {
            for k in 0..2 {
                y[2 * p + k] = vy[k].raw();
                z[2 * p + k] = vz[k].raw();
            }
        }
        EncodedStumps { y, z }
    }
}

/// The class bit as a `Z_2` sharing, plus its value where disclosed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassOutcome {
    pub label: Option<bool>,
    pub share: Share,
}

fn conclude(ctx: &mut ProtocolContext, class: Share, disclosure: Disclosure) -> Result<ClassOutcome, ProtocolError> {
    let opened = ctx.open(&ShareVector::from_shares(&[class])?, disclosure)?;
    Ok(ClassOutcome {
        label: opened.map(|v| v[0] == 1),
        share: class,
    })
}

fn check_input(ctx: &ProtocolContext, x: &ShareVector, has_model: bool) -> Result<(), ProtocolError> {
    if x.ring() != RingTag::Z2_64 {
        return Err(ProtocolError::Usage("features must be shared over Z_2^64".into()));
    }
    if has_model != (ctx.party() == Party::Bob) {
        return Err(ProtocolError::Usage("exactly Bob supplies the model".into()));
    }
    Ok(())
}

/// `[[⟨x, w⟩ + b ≥ 0]]`. Bob passes the weights, Alice `None`.
///
/// The score is bit-decomposed and the class is the complement of its most
/// significant bit.
pub fn secure_lr_classify(
    ctx: &mut ProtocolContext,
    x: &ShareVector,
    model: Option<&EncodedLr>,
    disclosure: Disclosure,
) -> Result<ClassOutcome, ProtocolError> {
    check_input(ctx, x, model.is_some())?;
    let n = x.len();
    let values = match model {
        Some(m) if m.weights.len() != n => {
            return Err(ProtocolError::Usage(format!(
                "{} weights for {n} features",
                m.weights.len()
            )));
        }
        Some(m) => Some([m.weights.as_slice(), &[m.intercept]].concat()),
        None => None,
    };
    let wb = ctx.share_from(Party::Bob, RingTag::Z2_64, values.as_deref(), n + 1)?;
    let w = wb.slice(0..n);
    let b = wb.get(n).expect("intercept share");

    let ip = secure_inner_product(ctx, x, &w)?;
    let score = ShareVector::from_shares(&[ip])?.add(&ShareVector::from_shares(&[b])?)?;
    let bits = secure_bit_decompose_batch(ctx, &score, RING_BITS)?;
    let class = bits
        .slice(RING_BITS - 1..RING_BITS)
        .add_const(1)?
        .get(0)
        .expect("class share");
    conclude(ctx, class, disclosure)
}

/// `(1 - x_1, x_1, …, 1 - x_n, x_n)`, computed locally.
pub fn expand_indicator(x: &ShareVector) -> Result<ShareVector, ProtocolError> {
    let not_x = x.const_sub(1)?;
    let mut out = Vec::with_capacity(2 * x.len());
    for (a, b) in not_x.values().iter().zip(x.values()) {
        out.push(*a);
        out.push(*b);
    }
    Ok(ShareVector::new(out, x.ring(), x.party())?)
}

/// `[[⟨w, z⟩ ≥ ⟨w, y⟩]]` with `w` the expanded indicator. Bob passes the
/// votes, Alice `None`.
pub fn secure_adaboost_classify(
    ctx: &mut ProtocolContext,
    x: &ShareVector,
    model: Option<&EncodedStumps>,
    disclosure: Disclosure,
) -> Result<ClassOutcome, ProtocolError> {
    check_input(ctx, x, model.is_some())?;
    let n = x.len();
    let values = match model {
        Some(m) if m.y.len() != 2 * n || m.z.len() != 2 * n => {
            return Err(ProtocolError::Usage(format!("vote vectors do not match {n} features")));
        }
        Some(m) => Some([m.y.as_slice(), &m.z].concat()),
        None => None,
    };
    let yz = ctx.share_from(Party::Bob, RingTag::Z2_64, values.as_deref(), 4 * n)?;
    let y = yz.slice(0..2 * n);
    let z = yz.slice(2 * n..4 * n);

    let w = expand_indicator(x)?;
    let p = secure_inner_products(ctx, &[(&w, &y), (&w, &z)])?;
    let bits = secure_bit_decompose_batch(ctx, &ShareVector::from_shares(&p)?, RING_BITS)?;
    let p0 = bits.slice(0..RING_BITS);
    let p1 = bits.slice(RING_BITS..2 * RING_BITS);
    let class = secure_compare_geq_batch(ctx, &p1, &p0, RING_BITS)?
        .get(0)
        .expect("class share");
    conclude(ctx, class, disclosure)
}
