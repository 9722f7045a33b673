//! Bundle file format.
//!
//! ```text
//! "TIBNDL01"            8 bytes, magic + format version
//! party id              1 byte (0 = Alice, 1 = Bob)
//! Z_2 triple pool       u32 LE count, then 3·count bits (a, b, c per triple), LSB-first
//! Z_2^64 triple pool    u32 LE count, then 3·count u64 LE (a, b, c per triple)
//! Z_2 mask pool         u32 LE count, then count bits, LSB-first
//! Z_2^64 mask pool      u32 LE count, then count u64 LE
//! ```
//!
//! Cursors are not stored: a bundle on disk is always unused.

use std::fs;
use std::path::Path;

use super::{DealerError, MaskPool, RandomnessBundle, TriplePool};
use crate::ring::{Party, RingTag};

pub const BUNDLE_MAGIC: &[u8; 8] = b"TIBNDL01";
const MAGIC_PREFIX: &[u8; 6] = b"TIBNDL";

pub fn encode_bundle(bundle: &RandomnessBundle) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(BUNDLE_MAGIC);
    out.push(bundle.party().id());

    let (a, b, c) = bundle.triples(RingTag::Z2).parts();
    out.extend_from_slice(&(a.len() as u32).to_le_bytes());
    let bits: Vec<u64> = a.iter().zip(b).zip(c).flat_map(|((&a, &b), &c)| [a, b, c]).collect();
    pack_bits(&bits, &mut out);

    let (a, b, c) = bundle.triples(RingTag::Z2_64).parts();
    out.extend_from_slice(&(a.len() as u32).to_le_bytes());
    for i in 0..a.len() {
        for v in [a[i], b[i], c[i]] {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }

    let masks = bundle.masks(RingTag::Z2).values();
    out.extend_from_slice(&(masks.len() as u32).to_le_bytes());
    pack_bits(masks, &mut out);

    let masks = bundle.masks(RingTag::Z2_64).values();
    out.extend_from_slice(&(masks.len() as u32).to_le_bytes());
    for v in masks {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_bundle(bytes: &[u8]) -> Result<RandomnessBundle, DealerError> {
    let mut r = Reader { bytes, pos: 0 };
    let magic = r.take(8)?;
    if &magic[..6] != MAGIC_PREFIX {
        return Err(DealerError::Format("bad magic".into()));
    }
    if magic[6..] != BUNDLE_MAGIC[6..] {
        return Err(DealerError::Version(String::from_utf8_lossy(&magic[6..]).into_owned()));
    }
    let party_byte = r.take(1)?[0];
    let party =
        Party::from_id(party_byte).ok_or_else(|| DealerError::Format(format!("unknown party id {party_byte}")))?;

    let count = r.count()?;
    let bits = unpack_bits(r.take(bit_bytes(3 * count))?, 3 * count);
    let mut z2 = TriplePool::with_capacity(RingTag::Z2, count);
    for t in bits.chunks_exact(3) {
        z2.push(t[0], t[1], t[2]);
    }

    let count = r.count()?;
    let words = r.words(3 * count)?;
    let mut zq = TriplePool::with_capacity(RingTag::Z2_64, count);
    for t in words.chunks_exact(3) {
        zq.push(t[0], t[1], t[2]);
    }

    let count = r.count()?;
    let z2_masks = MaskPool::new(RingTag::Z2, unpack_bits(r.take(bit_bytes(count))?, count));

    let count = r.count()?;
    let zq_masks = MaskPool::new(RingTag::Z2_64, r.words(count)?);

    if r.pos != bytes.len() {
        return Err(DealerError::Format(format!("{} trailing bytes", bytes.len() - r.pos)));
    }
    Ok(RandomnessBundle::from_pools(party, z2, zq, z2_masks, zq_masks))
}

pub fn persist_bundle(bundle: &RandomnessBundle, path: impl AsRef<Path>) -> Result<(), DealerError> {
    fs::write(path, encode_bundle(bundle))?;
    Ok(())
}

pub fn load_bundle(path: impl AsRef<Path>) -> Result<RandomnessBundle, DealerError> {
    decode_bundle(&fs::read(path)?)
}

fn bit_bytes(bits: usize) -> usize {
    bits.div_ceil(8)
}

fn pack_bits(bits: &[u64], out: &mut Vec<u8>) {
    let start = out.len();
    out.resize(start + bit_bytes(bits.len()), 0);
    for (i, &b) in bits.iter().enumerate() {
        out[start + i / 8] |= ((b & 1) as u8) << (i % 8);
    }
}

fn unpack_bits(bytes: &[u8], count: usize) -> Vec<u64> {
    (0..count).map(|i| ((bytes[i / 8] >> (i % 8)) & 1) as u64).collect()
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8], DealerError> {
        let end = self
            .pos
            .checked_add(len)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| DealerError::Format("truncated".into()))?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn count(&mut self) -> Result<usize, DealerError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")) as usize)
    }

    fn words(&mut self, count: usize) -> Result<Vec<u64>, DealerError> {
        let raw = self.take(
            count
                .checked_mul(8)
                .ok_or_else(|| DealerError::Format("pool size overflows".into()))?,
        )?;
        Ok(raw
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::super::{deal, DemandProfile, ModelKind};
    use super::*;

    fn sample() -> RandomnessBundle {
        deal(&DemandProfile::new(3, 2, 5, ModelKind::Lr), Some([1; 32]))
            .unwrap()
            .1
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bob.bundle");
        let bundle = sample();
        persist_bundle(&bundle, &path).unwrap();
        let loaded = load_bundle(&path).unwrap();
        assert_eq!(loaded, bundle);
        assert_eq!(encode_bundle(&loaded), fs::read(&path).unwrap());
    }

    #[test]
    fn truncated_file_is_rejected() {
        let bytes = encode_bundle(&sample());
        for cut in [0, 5, 9, 12, bytes.len() - 1] {
            assert!(matches!(decode_bundle(&bytes[..cut]), Err(DealerError::Format(_))));
        }
    }

    #[test]
    fn wrong_version_is_rejected() {
        let mut bytes = encode_bundle(&sample());
        bytes[7] = b'2';
        assert!(matches!(decode_bundle(&bytes), Err(DealerError::Version(_))));
        bytes[0] = b'X';
        assert!(matches!(decode_bundle(&bytes), Err(DealerError::Format(_))));
    }

    #[test]
    fn trailing_bytes_and_bad_party() {
        let mut bytes = encode_bundle(&sample());
        bytes.push(0);
        assert!(decode_bundle(&bytes).is_err());
        let mut bytes = encode_bundle(&sample());
        bytes[8] = 7;
        assert!(decode_bundle(&bytes).is_err());
    }

    #[test]
    fn header_layout() {
        let bundle = RandomnessBundle::empty(Party::Alice);
        let bytes = encode_bundle(&bundle);
        assert_eq!(&bytes[..8], b"TIBNDL01");
        assert_eq!(bytes[8], 0);
        assert_eq!(bytes.len(), 9 + 4 * 4);
    }
}
