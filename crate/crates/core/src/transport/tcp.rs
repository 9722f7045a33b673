use std::io::{self, BufReader, BufWriter, ErrorKind, Read, Write};
use std::net::{TcpListener, TcpStream, ToSocketAddrs};
use std::time::Duration;

use super::{Frame, Link, SessionId, Transport, TransportError, FRAME_HEADER_LEN};
use crate::ring::Party;

pub struct TcpLink {
    reader: BufReader<TcpStream>,
    writer: BufWriter<TcpStream>,
}

impl TcpLink {
    pub fn new(stream: TcpStream, timeout: Option<Duration>) -> io::Result<TcpLink> {
        stream.set_nodelay(true)?;
        stream.set_read_timeout(timeout)?;
        stream.set_write_timeout(timeout)?;
        Ok(TcpLink {
            reader: BufReader::with_capacity(1 << 16, stream.try_clone()?),
            writer: BufWriter::with_capacity(1 << 16, stream),
        })
    }
}

fn map_io(e: io::Error) -> TransportError {
    match e.kind() {
        ErrorKind::WouldBlock | ErrorKind::TimedOut => TransportError::Timeout,
        ErrorKind::UnexpectedEof | ErrorKind::ConnectionReset | ErrorKind::BrokenPipe => TransportError::Closed,
        _ => TransportError::Io(e),
    }
}

impl Link for TcpLink {
    fn write_frame(&mut self, frame: &Frame) -> Result<(), TransportError> {
        self.writer.write_all(&frame.header()).map_err(map_io)?;
        self.writer.write_all(&frame.payload).map_err(map_io)?;
        self.writer.flush().map_err(map_io)
    }

    fn read_frame(&mut self) -> Result<Frame, TransportError> {
        let mut header = [0u8; FRAME_HEADER_LEN];
        self.reader.read_exact(&mut header).map_err(map_io)?;
        let (session_id, sequence, len) = Frame::parse_header(&header)?;
        let mut payload = vec![0u8; len];
        self.reader.read_exact(&mut payload).map_err(map_io)?;
        Ok(Frame {
            session_id,
            sequence,
            payload,
        })
    }
}

/// Alice's side: dial the listening peer.
pub fn connect(
    addr: impl ToSocketAddrs,
    session_id: SessionId,
    timeout: Option<Duration>,
) -> Result<Transport, TransportError> {
    let stream = TcpStream::connect(addr)?;
    Ok(Transport::new(
        Party::Alice,
        TcpLink::new(stream, timeout)?,
        Some(session_id),
    ))
}

/// Bob's side: take the next connection from `listener`.
pub fn accept(listener: &TcpListener, timeout: Option<Duration>) -> Result<Transport, TransportError> {
    let (stream, _) = listener.accept()?;
    Ok(Transport::new(Party::Bob, TcpLink::new(stream, timeout)?, None))
}
