//! Handshake payloads and the session digest.

use sha2::{Digest, Sha256};

use super::{profile_for, SessionConfig};
use crate::dealer::{DemandProfile, ModelKind};
use crate::engine::Disclosure;
use crate::text::{BucketLayout, ElementLayout, HashParams};
use crate::transport::TransportError;

fn malformed(what: &str) -> TransportError {
    TransportError::Malformed(format!("bad handshake view: {what}"))
}

struct Reader<'a>(&'a [u8]);

impl Reader<'_> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N], TransportError> {
        if self.0.len() < N {
            return Err(malformed("truncated"));
        }
        let (head, rest) = self.0.split_at(N);
        self.0 = rest;
        Ok(head.try_into().expect("length checked"))
    }

    fn u8(&mut self) -> Result<u8, TransportError> {
        Ok(self.take::<1>()?[0])
    }

    fn u32(&mut self) -> Result<u32, TransportError> {
        Ok(u32::from_le_bytes(self.take()?))
    }

    fn u64(&mut self) -> Result<u64, TransportError> {
        Ok(u64::from_le_bytes(self.take()?))
    }

    fn usize(&mut self) -> Result<usize, TransportError> {
        usize::try_from(self.u64()?).map_err(|_| malformed("size overflows"))
    }

    fn finish(self) -> Result<(), TransportError> {
        if self.0.is_empty() {
            Ok(())
        } else {
            Err(malformed("trailing bytes"))
        }
    }
}

/// Parameters both parties announce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Common {
    pub hash: HashParams,
    pub disclosure: Disclosure,
}

fn write_common(out: &mut Vec<u8>, c: &Common) {
    out.extend_from_slice(&c.hash.to_bytes());
    out.push(c.disclosure.id());
}

fn read_common(r: &mut Reader) -> Result<Common, TransportError> {
    let p = r.u64()?;
    let a = r.u64()?;
    let b = r.u64()?;
    let bits = r.u32()?;
    let disclosure = Disclosure::from_id(r.u8()?).ok_or_else(|| malformed("disclosure policy"))?;
    Ok(Common {
        hash: HashParams { p, a, b, bits },
        disclosure,
    })
}

/// Alice's hello: common parameters, her layout and, without padding, her
/// token count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct AliceView {
    pub common: Common,
    pub layout: ElementLayout,
    pub m: usize,
}

impl AliceView {
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        write_common(&mut out, &self.common);
        match self.layout {
            ElementLayout::Plain => {
                out.push(0);
                out.extend_from_slice(&(self.m as u64).to_le_bytes());
            }
            ElementLayout::Padded { to } => {
                out.push(1);
                out.extend_from_slice(&(to as u64).to_le_bytes());
            }
            ElementLayout::Bucketed(b) => {
                out.push(2);
                out.extend_from_slice(&b.t.to_le_bytes());
                out.extend_from_slice(&(b.s1 as u64).to_le_bytes());
                out.extend_from_slice(&(b.s2 as u64).to_le_bytes());
            }
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<AliceView, TransportError> {
        let mut r = Reader(bytes);
        let common = read_common(&mut r)?;
        let (layout, m) = match r.u8()? {
            0 => (ElementLayout::Plain, r.usize()?),
            1 => {
                let to = r.usize()?;
                (ElementLayout::Padded { to }, to)
            }
            2 => {
                let t = r.u32()?;
                let s1 = r.usize()?;
                let s2 = r.usize()?;
                let b = BucketLayout::new(t, s1, s2).map_err(|e| malformed(&e.to_string()))?;
                (ElementLayout::Bucketed(b), b.alice_capacity())
            }
            _ => return Err(malformed("layout tag")),
        };
        r.finish()?;
        Ok(AliceView { common, layout, m })
    }
}

/// Bob's hello: common parameters, lexicon size and model family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct BobView {
    pub common: Common,
    pub n: usize,
    pub model: ModelKind,
}

impl BobView {
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        write_common(&mut out, &self.common);
        out.extend_from_slice(&(self.n as u64).to_le_bytes());
        out.push(self.model.id());
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<BobView, TransportError> {
        let mut r = Reader(bytes);
        let common = read_common(&mut r)?;
        let n = r.usize()?;
        let model = ModelKind::from_id(r.u8()?).ok_or_else(|| malformed("model kind"))?;
        r.finish()?;
        Ok(BobView { common, n, model })
    }
}

/// Checks the two views agree and derives the session profile.
pub(crate) fn agree(alice: &AliceView, bob: &BobView) -> Result<DemandProfile, TransportError> {
    if alice.common.hash != bob.common.hash {
        return Err(TransportError::ProfileMismatch(format!(
            "hash parameters differ: Alice {:?}, Bob {:?}",
            alice.common.hash, bob.common.hash
        )));
    }
    if alice.common.disclosure != bob.common.disclosure {
        return Err(TransportError::ProfileMismatch(format!(
            "disclosure policies differ: Alice {}, Bob {}",
            alice.common.disclosure, bob.common.disclosure
        )));
    }
    Ok(profile_for(
        alice.layout,
        bob.n,
        alice.m,
        alice.common.hash.bits,
        bob.model,
    ))
}

pub(crate) fn digest(profile: &DemandProfile, common: &Common) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(profile.to_bytes());
    h.update(common.hash.to_bytes());
    h.update([common.disclosure.id()]);
    h.finalize().into()
}

pub(crate) fn common(config: &SessionConfig) -> Common {
    Common {
        hash: config.hash,
        disclosure: config.disclosure,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c() -> Common {
        Common {
            hash: HashParams::default(),
            disclosure: Disclosure::ToBoth,
        }
    }

    #[test]
    fn views_roundtrip() {
        for layout in [
            ElementLayout::Plain,
            ElementLayout::Padded { to: 64 },
            ElementLayout::Bucketed(BucketLayout::new(3, 4, 5).unwrap()),
        ] {
            let v = AliceView {
                common: c(),
                layout,
                m: match layout {
                    ElementLayout::Plain => 7,
                    ElementLayout::Padded { to } => to,
                    ElementLayout::Bucketed(b) => b.alice_capacity(),
                },
            };
            assert_eq!(AliceView::decode(&v.encode()).unwrap(), v);
        }
        let b = BobView {
            common: c(),
            n: 500,
            model: ModelKind::Ada,
        };
        assert_eq!(BobView::decode(&b.encode()).unwrap(), b);
        assert!(BobView::decode(&b.encode()[..10]).is_err());
        let mut long = b.encode();
        long.push(0);
        assert!(BobView::decode(&long).is_err());
    }

    #[test]
    fn disagreement_is_detected() {
        let a = AliceView {
            common: c(),
            layout: ElementLayout::Plain,
            m: 3,
        };
        let mut b = BobView {
            common: c(),
            n: 4,
            model: ModelKind::Lr,
        };
        assert!(agree(&a, &b).is_ok());
        b.common.hash.bits = 13;
        assert!(matches!(agree(&a, &b), Err(TransportError::ProfileMismatch(_))));
        b.common = c();
        b.common.disclosure = Disclosure::ToAlice;
        assert!(matches!(agree(&a, &b), Err(TransportError::ProfileMismatch(_))));
    }
}
