//! Framed, sequenced two-party message exchange.
//!
//! Every message travels in a [`Frame`]: a 16-byte session id, an 8-byte
//! sequence number and a 4-byte payload length, all little-endian, followed by
//! the payload. Sequence numbers start at zero and must arrive without gaps in
//! each direction; anything else aborts the session. A round is one call to
//! [`Transport::exchange`], [`Transport::send_round`] or
//! [`Transport::recv_round`], so both parties always agree on the round count.

mod frame;
mod handshake;
mod memory;
mod tcp;

pub use frame::{Frame, SessionId, FRAME_HEADER_LEN, MAX_PAYLOAD};
pub use handshake::{confirm_profile, handshake, PROTOCOL_VERSION};
pub use memory::{memory_pair, MemoryLink};
pub use tcp::{accept, connect, TcpLink};

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::ring::Party;

#[derive(Debug, Error)]
pub enum TransportError {
    #[error("transport I/O failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("timed out waiting for the peer")]
    Timeout,
    #[error("peer closed the connection")]
    Closed,
    #[error("sequence violation: expected frame {expected}, got {got}")]
    SequenceViolation { expected: u64, got: u64 },
    #[error("frame belongs to another session")]
    SessionMismatch,
    #[error("protocol version mismatch: ours {ours}, theirs {theirs}")]
    VersionMismatch { ours: u8, theirs: u8 },
    #[error("session profile mismatch: {0}")]
    ProfileMismatch(String),
    #[error("malformed frame: {0}")]
    Malformed(String),
}

/// Byte-level carrier for frames.
pub trait Link: Send {
    fn write_frame(&mut self, frame: &Frame) -> Result<(), TransportError>;
    fn read_frame(&mut self) -> Result<Frame, TransportError>;
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    pub rounds: u64,
    pub bytes_sent: u64,
    pub bytes_received: u64,
    pub wall_time: Duration,
}

impl Counters {
    /// Difference `self - earlier`, for per-phase accounting.
    pub fn since(&self, earlier: &Counters) -> Counters {
        Counters {
            rounds: self.rounds - earlier.rounds,
            bytes_sent: self.bytes_sent - earlier.bytes_sent,
            bytes_received: self.bytes_received - earlier.bytes_received,
            wall_time: self.wall_time.saturating_sub(earlier.wall_time),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseMark {
    pub name: String,
    pub at: Counters,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Sent,
    Received,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptEntry {
    pub round: u64,
    pub direction: Direction,
    pub sequence: u64,
    pub payload: Vec<u8>,
}

/// One session's end of the channel.
pub struct Transport {
    party: Party,
    link: Box<dyn Link>,
    session_id: Option<SessionId>,
    next_send: u64,
    next_recv: u64,
    counters: Counters,
    started: Instant,
    marks: Vec<PhaseMark>,
    transcript: Option<Vec<TranscriptEntry>>,
}

impl Transport {
    /// Wraps a link. A party without a session id adopts the one carried by
    /// the first frame it receives.
    pub fn new(party: Party, link: impl Link + 'static, session_id: Option<SessionId>) -> Transport {
        Transport {
            party,
            link: Box::new(link),
            session_id,
            next_send: 0,
            next_recv: 0,
            counters: Counters::default(),
            started: Instant::now(),
            marks: Vec::new(),
            transcript: None,
        }
    }

    pub fn party(&self) -> Party {
        self.party
    }

    pub fn session_id(&self) -> Option<SessionId> {
        self.session_id
    }

    /// Starts keeping a copy of every frame payload.
    pub fn record_transcript(&mut self) {
        self.transcript.get_or_insert_with(Vec::new);
    }

    pub fn transcript(&self) -> Option<&[TranscriptEntry]> {
        self.transcript.as_deref()
    }

    pub fn take_transcript(&mut self) -> Option<Vec<TranscriptEntry>> {
        self.transcript.take()
    }

    pub fn counters(&self) -> Counters {
        Counters {
            wall_time: self.started.elapsed(),
            ..self.counters
        }
    }

    pub fn mark_phase(&mut self, name: &str) -> Counters {
        let at = self.counters();
        self.marks.push(PhaseMark {
            name: name.to_string(),
            at,
        });
        at
    }

    pub fn marks(&self) -> &[PhaseMark] {
        &self.marks
    }

    fn send_frame(&mut self, payload: &[u8]) -> Result<(), TransportError> {
        let session_id = self
            .session_id
            .ok_or_else(|| TransportError::Malformed("no session id before first send".into()))?;
        let frame = Frame::new(session_id, self.next_send, payload.to_vec())?;
        self.link.write_frame(&frame)?;
        self.counters.bytes_sent += frame.wire_len() as u64;
        if let Some(t) = self.transcript.as_mut() {
            t.push(TranscriptEntry {
                round: self.counters.rounds,
                direction: Direction::Sent,
                sequence: frame.sequence,
                payload: frame.payload,
            });
        }
        self.next_send += 1;
        Ok(())
    }

    fn recv_frame(&mut self) -> Result<Vec<u8>, TransportError> {
        let frame = self.link.read_frame()?;
        match self.session_id {
            None => self.session_id = Some(frame.session_id),
            Some(id) if id != frame.session_id => return Err(TransportError::SessionMismatch),
            Some(_) => {}
        }
        if frame.sequence != self.next_recv {
            return Err(TransportError::SequenceViolation {
                expected: self.next_recv,
                got: frame.sequence,
            });
        }
        self.next_recv += 1;
        self.counters.bytes_received += frame.wire_len() as u64;
        if let Some(t) = self.transcript.as_mut() {
            t.push(TranscriptEntry {
                round: self.counters.rounds,
                direction: Direction::Received,
                sequence: frame.sequence,
                payload: frame.payload.clone(),
            });
        }
        Ok(frame.payload)
    }

    /// One-directional round: this party speaks, the peer calls [`Self::recv_round`].
    pub fn send_round(&mut self, payload: &[u8]) -> Result<(), TransportError> {
        self.send_frame(payload)?;
        self.counters.rounds += 1;
        Ok(())
    }

    pub fn recv_round(&mut self) -> Result<Vec<u8>, TransportError> {
        let payload = self.recv_frame()?;
        self.counters.rounds += 1;
        Ok(payload)
    }

    /// Both parties send one frame and receive the peer's.
    ///
    /// Alice writes before reading and Bob reads before writing, so large
    /// payloads cannot deadlock on full socket buffers.
    pub fn exchange(&mut self, payload: &[u8]) -> Result<Vec<u8>, TransportError> {
        let received = match self.party {
            Party::Alice => {
                self.send_frame(payload)?;
                self.recv_frame()?
            }
            Party::Bob => {
                let r = self.recv_frame()?;
                self.send_frame(payload)?;
                r
            }
        };
        self.counters.rounds += 1;
        Ok(received)
    }
}

/// Two connected in-memory transports, for tests and local runs.
pub fn memory_transports(session_id: SessionId, timeout: Option<Duration>) -> (Transport, Transport) {
    let (a, b) = memory_pair(timeout);
    (
        Transport::new(Party::Alice, a, Some(session_id)),
        Transport::new(Party::Bob, b, Some(session_id)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::thread;

    const SID: SessionId = [7; 16];

    #[test]
    fn echo_round_trip() {
        let (mut alice, mut bob) = memory_transports(SID, None);
        let h = thread::spawn(move || {
            let got = bob.recv_round().unwrap();
            bob.send_round(&got).unwrap();
            bob
        });
        alice.send_round(b"hello").unwrap();
        assert_eq!(alice.recv_round().unwrap(), b"hello");
        let bob = h.join().unwrap();
        assert_eq!(alice.counters().rounds, 2);
        assert_eq!(bob.counters().rounds, 2);
    }

    #[test]
    fn empty_payload_is_legal() {
        let (mut alice, mut bob) = memory_transports(SID, None);
        let h = thread::spawn(move || bob.exchange(&[]).unwrap());
        assert_eq!(alice.exchange(&[]).unwrap(), Vec::<u8>::new());
        assert_eq!(h.join().unwrap(), Vec::<u8>::new());
        assert_eq!(alice.counters().bytes_sent, FRAME_HEADER_LEN as u64);
    }

    #[test]
    fn out_of_order_frame_aborts() {
        let (a, b) = memory_pair(None);
        let inject = a.outbound();
        let mut bob = Transport::new(Party::Bob, b, Some(SID));
        drop(a);
        let frame = Frame::new(SID, 1, vec![1, 2]).unwrap();
        inject.send(frame.encode()).unwrap();
        assert!(matches!(
            bob.recv_round(),
            Err(TransportError::SequenceViolation { expected: 0, got: 1 })
        ));
    }

    #[test]
    fn foreign_session_aborts() {
        let (a, b) = memory_pair(None);
        let inject = a.outbound();
        let mut bob = Transport::new(Party::Bob, b, Some(SID));
        inject.send(Frame::new([1; 16], 0, vec![]).unwrap().encode()).unwrap();
        assert!(matches!(bob.recv_round(), Err(TransportError::SessionMismatch)));
    }

    #[test]
    fn missing_peer_times_out_or_closes() {
        let (a, b) = memory_pair(Some(Duration::from_millis(20)));
        let mut bob = Transport::new(Party::Bob, b, Some(SID));
        assert!(matches!(bob.recv_round(), Err(TransportError::Timeout)));
        drop(a);
        assert!(matches!(bob.recv_round(), Err(TransportError::Closed)));
    }

    #[test]
    fn counters_are_monotone() {
        let (mut alice, mut bob) = memory_transports(SID, None);
        let h = thread::spawn(move || {
            for _ in 0..3 {
                bob.exchange(&[0; 10]).unwrap();
            }
        });
        let mut last = alice.counters();
        assert_eq!(last.rounds, 0);
        for i in 1..=3u64 {
            alice.exchange(&[1; 4]).unwrap();
            let now = alice.counters();
            assert_eq!(now.rounds, i);
            assert!(now.bytes_sent > last.bytes_sent);
            assert!(now.bytes_received > last.bytes_received);
            assert!(now.wall_time >= last.wall_time);
            last = now;
        }
        h.join().unwrap();
        assert_eq!(last.bytes_received, 3 * (FRAME_HEADER_LEN as u64 + 10));
    }

    #[test]
    fn phase_marks_split_counters() {
        let (mut alice, mut bob) = memory_transports(SID, None);
        let h = thread::spawn(move || {
            bob.exchange(&[]).unwrap();
            bob.exchange(&[]).unwrap();
        });
        let start = alice.mark_phase("start");
        alice.exchange(&[]).unwrap();
        let mid = alice.mark_phase("mid");
        alice.exchange(&[]).unwrap();
        alice.exchange(&[]).unwrap_err();
        h.join().unwrap();
        assert_eq!(mid.since(&start).rounds, 1);
        assert_eq!(alice.marks().len(), 2);
    }

    #[test]
    fn transcript_records_both_directions() {
        let (mut alice, mut bob) = memory_transports(SID, None);
        alice.record_transcript();
        let h = thread::spawn(move || bob.exchange(b"b").unwrap());
        alice.exchange(b"a").unwrap();
        h.join().unwrap();
        let t = alice.transcript().unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[0].direction, Direction::Sent);
        assert_eq!(t[0].payload, b"a");
        assert_eq!(t[1].direction, Direction::Received);
        assert_eq!(t[1].payload, b"b");
    }
}
