//! Socket delivery of dealt bundles.
//!
//! A party connects, writes its party id byte and reads back a u64 LE length
//! followed by the encoded bundle. The dealer then closes the connection, so
//! nothing of it survives into the online phase.

use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream, ToSocketAddrs};
use std::time::Duration;

use super::{decode_bundle, encode_bundle, DealerError, RandomnessBundle};
use crate::ring::Party;

/// Serves the two bundles of one dealing, one connection per party, then returns.
pub fn serve_bundles(
    listener: &TcpListener,
    alice: &RandomnessBundle,
    bob: &RandomnessBundle,
) -> Result<(), DealerError> {
    let mut pending = [Some(alice), Some(bob)];
    while pending.iter().any(Option::is_some) {
        let (mut stream, _) = listener.accept()?;
        let mut id = [0u8; 1];
        stream.read_exact(&mut id)?;
        let slot = Party::from_id(id[0])
            .map(|p| p.id() as usize)
            .ok_or_else(|| DealerError::Format(format!("unknown party id {}", id[0])))?;
        let Some(bundle) = pending[slot].take() else {
            return Err(DealerError::Format(format!(
                "bundle for party {} already delivered",
                id[0]
            )));
        };
        let bytes = encode_bundle(bundle);
        stream.write_all(&(bytes.len() as u64).to_le_bytes())?;
        stream.write_all(&bytes)?;
        stream.flush()?;
    }
    Ok(())
}

/// Fetches this party's bundle. The connection is closed before returning.
pub fn fetch_bundle(
    addr: impl ToSocketAddrs,
    party: Party,
    timeout: Option<Duration>,
) -> Result<RandomnessBundle, DealerError> {
    let mut stream = TcpStream::connect(addr)?;
    stream.set_read_timeout(timeout)?;
    stream.write_all(&[party.id()])?;
    let mut len = [0u8; 8];
    stream.read_exact(&mut len)?;
    let len = u64::from_le_bytes(len) as usize;
    let mut bytes = vec![0u8; len];
    stream.read_exact(&mut bytes)?;
    drop(stream);
    let bundle = decode_bundle(&bytes)?;
    if bundle.party() != party {
        return Err(DealerError::Format(format!("received a bundle for {}", bundle.party())));
    }
    Ok(bundle)
}

#[cfg(test)]
mod tests {
    use super::super::{deal, DemandProfile, ModelKind};
    use super::*;

    #[test]
    fn bundles_arrive_intact() {
        let (alice, bob) = deal(&DemandProfile::new(2, 2, 4, ModelKind::Ada), Some([5; 32])).unwrap();
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        let (a2, b2) = (alice.clone(), bob.clone());
        let server = std::thread::spawn(move || serve_bundles(&listener, &a2, &b2));
        let got_bob = fetch_bundle(addr, Party::Bob, None).unwrap();
        let got_alice = fetch_bundle(addr, Party::Alice, None).unwrap();
        server.join().unwrap().unwrap();
        assert_eq!(got_alice, alice);
        assert_eq!(got_bob, bob);
    }
}
