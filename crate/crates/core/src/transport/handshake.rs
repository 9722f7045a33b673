//! Session opening.
//!
//! Alice speaks first. Each hello is `version (1 byte) ‖ party id (1 byte) ‖
//! profile view`, where the view is whatever public parameters the caller
//! wants the peer to see. After both views are known the callers derive the
//! session profile and [`confirm_profile`] exchanges its digest.

use super::{Transport, TransportError};
use crate::ring::Party;

pub const PROTOCOL_VERSION: u8 = 1;

/// Exchanges hellos and returns the peer's profile view.
pub fn handshake(transport: &mut Transport, view: &[u8]) -> Result<Vec<u8>, TransportError> {
    let mut hello = Vec::with_capacity(2 + view.len());
    hello.push(PROTOCOL_VERSION);
    hello.push(transport.party().id());
    hello.extend_from_slice(view);
    let peer = transport.exchange(&hello)?;
    if peer.len() < 2 {
        return Err(TransportError::Malformed("short hello".into()));
    }
    if peer[0] != PROTOCOL_VERSION {
        return Err(TransportError::VersionMismatch {
            ours: PROTOCOL_VERSION,
            theirs: peer[0],
        });
    }
    if Party::from_id(peer[1]) != Some(transport.party().peer()) {
        return Err(TransportError::Malformed(format!("peer claims party id {}", peer[1])));
    }
    Ok(peer[2..].to_vec())
}

/// Exchanges profile digests; any difference aborts the session.
pub fn confirm_profile(transport: &mut Transport, digest: &[u8; 32]) -> Result<(), TransportError> {
    let peer = transport.exchange(digest)?;
    if peer.as_slice() != digest.as_slice() {
        return Err(TransportError::ProfileMismatch(
            "parties derived different session profiles".into(),
        ));
    }
    Ok(())
}
