use super::TransportError;

pub type SessionId = [u8; 16];

/// Bytes before the payload: session id, sequence, payload length.
pub const FRAME_HEADER_LEN: usize = 16 + 8 + 4;

/// Upper bound on a single payload.
pub const MAX_PAYLOAD: usize = 1 << 30;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub session_id: SessionId,
    pub sequence: u64,
    pub payload: Vec<u8>,
}

impl Frame {
    pub fn new(session_id: SessionId, sequence: u64, payload: Vec<u8>) -> Result<Frame, TransportError> {
        if payload.len() > MAX_PAYLOAD {
            return Err(TransportError::Malformed(format!(
                "payload of {} bytes exceeds {MAX_PAYLOAD}",
                payload.len()
            )));
        }
        Ok(Frame {
            session_id,
            sequence,
            payload,
        })
    }

    pub fn wire_len(&self) -> usize {
        FRAME_HEADER_LEN + self.payload.len()
    }

    pub fn header(&self) -> [u8; FRAME_HEADER_LEN] {
        let mut h = [0u8; FRAME_HEADER_LEN];
        h[..16].copy_from_slice(&self.session_id);
        h[16..24].copy_from_slice(&self.sequence.to_le_bytes());
        h[24..28].copy_from_slice(&(self.payload.len() as u32).to_le_bytes());
        h
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.wire_len());
        out.extend_from_slice(&self.header());
        out.extend_from_slice(&self.payload);
        out
    }

    /// Splits a header into (session id, sequence, payload length).
    pub fn parse_header(h: &[u8; FRAME_HEADER_LEN]) -> Result<(SessionId, u64, usize), TransportError> {
        let session_id: SessionId = h[..16].try_into().expect("16 bytes");
        let sequence = u64::from_le_bytes(h[16..24].try_into().expect("8 bytes"));
        let len = u32::from_le_bytes(h[24..28].try_into().expect("4 bytes")) as usize;
        if len > MAX_PAYLOAD {
            return Err(TransportError::Malformed(format!(
                "declared payload length {len} exceeds {MAX_PAYLOAD}"
            )));
        }
        Ok((session_id, sequence, len))
    }

    pub fn decode(bytes: &[u8]) -> Result<Frame, TransportError> {
        if bytes.len() < FRAME_HEADER_LEN {
            return Err(TransportError::Malformed("short header".into()));
        }
        let header: &[u8; FRAME_HEADER_LEN] = bytes[..FRAME_HEADER_LEN].try_into().expect("sized");
        let (session_id, sequence, len) = Frame::parse_header(header)?;
        let payload = &bytes[FRAME_HEADER_LEN..];
        if payload.len() != len {
            return Err(TransportError::Malformed(format!(
                "declared {len} payload bytes, found {}",
                payload.len()
            )));
        }
        Ok(Frame {
            session_id,
            sequence,
            payload: payload.to_vec(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn header_is_little_endian() {
        let f = Frame::new([0xAB; 16], 0x0102, vec![9, 9, 9]).unwrap();
        let bytes = f.encode();
        assert_eq!(&bytes[..16], &[0xAB; 16]);
        assert_eq!(&bytes[16..24], &[2, 1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(&bytes[24..28], &[3, 0, 0, 0]);
        assert_eq!(&bytes[28..], &[9, 9, 9]);
    }

    #[test]
    fn length_must_match() {
        let mut bytes = Frame::new([0; 16], 0, vec![1, 2]).unwrap().encode();
        bytes.pop();
        assert!(Frame::decode(&bytes).is_err());
        assert!(Frame::decode(&bytes[..10]).is_err());
    }

    proptest! {
        #[test]
        fn decode_inverts_encode(
            sid in any::<[u8; 16]>(),
            seq in any::<u64>(),
            payload in proptest::collection::vec(any::<u8>(), 0..256),
        ) {
            let f = Frame::new(sid, seq, payload).unwrap();
            prop_assert_eq!(Frame::decode(&f.encode()).unwrap(), f);
        }
    }
}
