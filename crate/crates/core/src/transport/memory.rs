use std::sync::mpsc::{channel, Receiver, RecvTimeoutError, Sender};
use std::time::Duration;

use super::{Frame, Link, TransportError};

/// One end of an in-process duplex. Frames cross it in encoded form, so the
/// same codec runs as over TCP.
pub struct MemoryLink {
    tx: Sender<Vec<u8>>,
    rx: Receiver<Vec<u8>>,
    timeout: Option<Duration>,
}

pub fn memory_pair(timeout: Option<Duration>) -> (MemoryLink, MemoryLink) {
    let (to_bob, bob_rx) = channel();
    let (to_alice, alice_rx) = channel();
    (
        MemoryLink {
            tx: to_bob,
            rx: alice_rx,
            timeout,
        },
        MemoryLink {
            tx: to_alice,
            rx: bob_rx,
            timeout,
        },
    )
}

impl MemoryLink {
    /// A sender feeding the peer's inbound queue, for injecting raw frames.
    pub fn outbound(&self) -> Sender<Vec<u8>> {
        self.tx.clone()
    }
}

impl Link for MemoryLink {
    fn write_frame(&mut self, frame: &Frame) -> Result<(), TransportError> {
        self.tx.send(frame.encode()).map_err(|_| TransportError::Closed)
    }

    fn read_frame(&mut self) -> Result<Frame, TransportError> {
        let bytes = match self.timeout {
            Some(t) => self.rx.recv_timeout(t).map_err(|e| match e {
                RecvTimeoutError::Timeout => TransportError::Timeout,
                RecvTimeoutError::Disconnected => TransportError::Closed,
            })?,
            None => self.rx.recv().map_err(|_| TransportError::Closed)?,
        };
        Frame::decode(&bytes)
    }
}
