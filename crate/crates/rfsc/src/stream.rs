//! Replay of a trace file over TCP and the matching capture client.
//!
//! A session is one JSON line carrying the sidecar, followed by frames of
//! `"RFSC"`, `seq: u32 LE`, `n: u32 LE` and `n` little-endian `i16`
//! samples. Sequence numbers start at 0 and increase by one.

use std::io::{self, BufRead, BufReader, Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::path::Path;
use std::thread;
use std::time::{Duration, Instant};

use crate::tracefile::{Sidecar, TraceFile, TraceFileError};

pub const MAGIC: [u8; 4] = *b"RFSC";
pub const MAX_FRAME_SAMPLES: usize = 65536;
pub const DEFAULT_FRAME_SAMPLES: usize = 4096;
const MAX_HANDSHAKE_BYTES: u64 = 64 * 1024;

#[derive(Debug, thiserror::Error)]
pub enum StreamError {
    #[error("cannot connect: {0}")]
    Connect(io::Error),
    #[error("network error: {0}")]
    Io(#[from] io::Error),
    #[error("bad handshake: {0}")]
    Handshake(String),
    #[error("connection lost after {received} samples: {reason}")]
    ConnectionLost { received: usize, reason: String },
    #[error("malformed frame after {received} samples: {reason}")]
    MalformedFrame { received: usize, reason: String },
    #[error(transparent)]
    TraceFile(#[from] TraceFileError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamFrame {
    pub seq: u32,
    pub samples: Vec<i16>,
}

impl StreamFrame {
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(12 + 2 * self.samples.len());
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&self.seq.to_le_bytes());
        out.extend_from_slice(&(self.samples.len() as u32).to_le_bytes());
        for s in &self.samples {
            out.extend_from_slice(&s.to_le_bytes());
        }
        out
    }
}

#[derive(Debug)]
enum FrameRead {
    Frame(StreamFrame),
    /// Clean end of stream on a frame boundary.
    End,
    Malformed(String),
    Lost(String),
}

fn read_exact_or(r: &mut impl Read, buf: &mut [u8]) -> Result<bool, io::Error> {
    let mut filled = 0;
    while filled < buf.len() {
        match r.read(&mut buf[filled..]) {
            Ok(0) if filled == 0 => return Ok(false),
            Ok(0) => return Err(io::ErrorKind::UnexpectedEof.into()),
            Ok(n) => filled += n,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => {}
            Err(e) => return Err(e),
        }
    }
    Ok(true)
}

fn read_frame(r: &mut impl Read) -> FrameRead {
    let mut header = [0u8; 12];
    match read_exact_or(r, &mut header) {
        Ok(true) => {}
        Ok(false) => return FrameRead::End,
        Err(e) => return FrameRead::Lost(e.to_string()),
    }
    if header[..4] != MAGIC {
        return FrameRead::Malformed(format!("bad magic {:02x?}", &header[..4]));
    }
    let seq = u32::from_le_bytes(header[4..8].try_into().expect("4 bytes"));
    let n = u32::from_le_bytes(header[8..12].try_into().expect("4 bytes")) as usize;
    if n > MAX_FRAME_SAMPLES {
        return FrameRead::Malformed(format!("frame {seq} announces {n} samples"));
    }
    let mut payload = vec![0u8; 2 * n];
    match read_exact_or(r, &mut payload) {
        Ok(true) => {}
        Ok(false) if n == 0 => {}
        Ok(false) | Err(_) => return FrameRead::Lost(format!("frame {seq} cut short")),
    }
    let samples = payload.chunks_exact(2).map(|b| i16::from_le_bytes([b[0], b[1]])).collect();
    FrameRead::Frame(StreamFrame { seq, samples })
}

#[derive(Debug, Clone)]
pub struct ServeOptions {
    /// Pace frames so that each leaves no earlier than its last sample
    /// would have been acquired.
    pub realtime: bool,
    pub frame_samples: usize,
}

impl Default for ServeOptions {
    fn default() -> Self {
        Self { realtime: false, frame_samples: DEFAULT_FRAME_SAMPLES }
    }
}

#[derive(Debug, Clone)]
pub struct SessionReport {
    pub peer: SocketAddr,
    pub frames_sent: u32,
    pub samples_sent: usize,
    /// The client hung up before the end of the trace.
    pub client_closed: bool,
    pub elapsed: Duration,
}

fn is_disconnect(e: &io::Error) -> bool {
    matches!(e.kind(), io::ErrorKind::BrokenPipe | io::ErrorKind::ConnectionReset | io::ErrorKind::ConnectionAborted)
}

/// Accepts one client and streams the whole file to it.
pub fn serve_session(
    listener: &TcpListener,
    file: &TraceFile,
    opts: &ServeOptions,
) -> Result<SessionReport, StreamError> {
    let (stream, peer) = listener.accept()?;
    stream.set_nodelay(true)?;
    let started = Instant::now();
    let mut report =
        SessionReport { peer, frames_sent: 0, samples_sent: 0, client_closed: false, elapsed: Duration::ZERO };
    match send_session(stream, file, opts, started, &mut report) {
        Ok(()) => {}
        Err(e) if is_disconnect(&e) => report.client_closed = true,
        Err(e) => return Err(e.into()),
    }
    report.elapsed = started.elapsed();
    Ok(report)
}

fn send_session(
    mut stream: TcpStream,
    file: &TraceFile,
    opts: &ServeOptions,
    started: Instant,
    report: &mut SessionReport,
) -> io::Result<()> {
    let mut sidecar = file.sidecar.clone();
    sidecar.n_samples = Some(file.samples.len() as u64);
    let mut line = serde_json::to_string(&sidecar).expect("sidecar serializes");
    line.push('\n');
    stream.write_all(line.as_bytes())?;
    let per_frame = opts.frame_samples.clamp(1, MAX_FRAME_SAMPLES);
    for (seq, chunk) in file.samples.chunks(per_frame).enumerate() {
        if opts.realtime {
            let due = Duration::from_secs_f64((report.samples_sent + chunk.len()) as f64 / sidecar.sample_rate_hz);
            if let Some(wait) = due.checked_sub(started.elapsed()) {
                thread::sleep(wait);
            }
        }
        let frame = StreamFrame { seq: seq as u32, samples: chunk.to_vec() };
        stream.write_all(&frame.encode())?;
        report.frames_sent += 1;
        report.samples_sent += chunk.len();
    }
    stream.flush()?;
    stream.shutdown(std::net::Shutdown::Write).or_else(|e| if is_disconnect(&e) { Ok(()) } else { Err(e) })
}

#[derive(Debug, Clone)]
pub struct CaptureOptions {
    /// Stop after this much signal; `None` captures until the source ends.
    pub duration_s: Option<f64>,
    /// Silence longer than this counts as a lost connection.
    pub read_timeout: Duration,
}

impl Default for CaptureOptions {
    fn default() -> Self {
        Self { duration_s: None, read_timeout: Duration::from_secs(10) }
    }
}

#[derive(Debug, Clone)]
pub struct CaptureReport {
    pub file: TraceFile,
    pub frames: u32,
}

/// Connects, captures and writes the result to `out`.
///
/// Whatever arrived before a lost connection or a malformed frame is still
/// written, with the `truncated` flag set, before the error is returned.
pub fn capture_stream(
    addr: impl ToSocketAddrs,
    opts: &CaptureOptions,
    out: &Path,
) -> Result<CaptureReport, StreamError> {
    let stream = TcpStream::connect(addr).map_err(StreamError::Connect)?;
    stream.set_read_timeout(Some(opts.read_timeout))?;
    let mut reader = BufReader::new(stream);

    let mut line = String::new();
    (&mut reader).take(MAX_HANDSHAKE_BYTES).read_line(&mut line).map_err(|e| StreamError::Handshake(e.to_string()))?;
    if !line.ends_with('\n') {
        return Err(StreamError::Handshake("no complete handshake line".into()));
    }
    let mut sidecar: Sidecar =
        serde_json::from_str(line.trim_end()).map_err(|e| StreamError::Handshake(e.to_string()))?;
    sidecar.validate().map_err(StreamError::Handshake)?;
    let announced = sidecar.n_samples.map(|n| n as usize);
    let wanted = opts.duration_s.map(|d| (d * sidecar.sample_rate_hz).round().max(0.0) as usize);
    let limit = match (announced, wanted) {
        (Some(a), Some(w)) => Some(a.min(w)),
        (a, w) => a.or(w),
    };

    let mut samples: Vec<i16> = Vec::new();
    let mut frames = 0u32;
    let outcome = loop {
        if limit.is_some_and(|l| samples.len() >= l) {
            break Ok(());
        }
        match read_frame(&mut reader) {
            FrameRead::Frame(frame) if frame.seq != frames => {
                break Err(StreamError::MalformedFrame {
                    received: samples.len(),
                    reason: format!("expected seq {frames}, got {}", frame.seq),
                });
            }
            FrameRead::Frame(frame) => {
                samples.extend_from_slice(&frame.samples);
                frames += 1;
            }
            FrameRead::End if announced.is_none_or(|a| samples.len() >= a) => break Ok(()),
            FrameRead::End => {
                break Err(StreamError::ConnectionLost {
                    received: samples.len(),
                    reason: "source closed early".into(),
                })
            }
            FrameRead::Malformed(reason) => break Err(StreamError::MalformedFrame { received: samples.len(), reason }),
            FrameRead::Lost(reason) => break Err(StreamError::ConnectionLost { received: samples.len(), reason }),
        }
    };
    drop(reader);

    let complete = announced.is_none_or(|a| samples.len() >= a);
    if let Some(l) = limit {
        samples.truncate(l);
    }
    sidecar.truncated = outcome.is_err() || !complete || announced.is_some_and(|a| samples.len() < a);
    sidecar.n_samples = Some(samples.len() as u64);
    let file = TraceFile { sidecar, samples };
    if !file.samples.is_empty() || outcome.is_ok() {
        file.write(out)?;
    }
    outcome.map(|()| CaptureReport { file, frames })
}
