//! graph6 encoding: printable ASCII, offset 63, upper-triangle adjacency
//! bits in column order, six bits per byte, most significant bit first.

use super::Graph;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("empty input")]
    Empty,
    #[error("byte {offset}: character {byte:#04x} outside the printable range 63..=126")]
    OutOfRange { offset: usize, byte: u8 },
    #[error("byte {offset}: malformed vertex-count header ({message})")]
    Header { offset: usize, message: String },
    #[error("byte {offset}: adjacency bits truncated (need {expected} data bytes, found {found})")]
    Truncated {
        offset: usize,
        expected: usize,
        found: usize,
    },
    #[error("byte {offset}: unexpected trailing byte")]
    Trailing { offset: usize },
    #[error("byte {offset}: nonzero padding bit")]
    Padding { offset: usize },
}

const HEADER: &str = ">>graph6<<";

/// Decodes one graph6 line. Edge indices are assigned in row-major
/// `(i, j)` order with `i < j`.
pub fn parse(text: &str) -> Result<Graph, Graph6Error> {
    let trimmed = text.trim_end_matches(['\n', '\r']);
    let (bytes, base) = match trimmed.strip_prefix(HEADER) {
        Some(rest) => (rest.as_bytes(), HEADER.len()),
        None => (trimmed.as_bytes(), 0),
    };
    if bytes.is_empty() {
        return Err(Graph6Error::Empty);
    }
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(Graph6Error::OutOfRange {
                offset: base + i,
                byte: b,
            });
        }
    }
    let (n, consumed) = decode_vertex_count(bytes, base)?;
    let pair_count = n * n.saturating_sub(1) / 2;
    let data_bytes = pair_count.div_ceil(6);
    let data = &bytes[consumed..];
    if data.len() < data_bytes {
        return Err(Graph6Error::Truncated {
            offset: base + bytes.len(),
            expected: data_bytes,
            found: data.len(),
        });
    }
    if data.len() > data_bytes {
        return Err(Graph6Error::Trailing {
            offset: base + consumed + data_bytes,
        });
    }

    let bit = |index: usize| -> bool {
        let byte = data[index / 6] - 63;
        (byte >> (5 - index % 6)) & 1 == 1
    };
    // Padding bits beyond the pair count must be zero.
    for index in pair_count..data_bytes * 6 {
        if bit(index) {
            return Err(Graph6Error::Padding {
                offset: base + consumed + index / 6,
            });
        }
    }

    let mut adjacent = vec![false; pair_count];
    let mut index = 0;
    for j in 1..n {
        for i in 0..j {
            adjacent[pair_position(i, j)] = bit(index);
            index += 1;
        }
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if adjacent[pair_position(i, j)] {
                edges.push((i, j));
            }
        }
    }
    Ok(Graph::new(n, edges).expect("decoded adjacency is a simple graph"))
}

/// Position of the pair `(i, j)`, `i < j`, in column order.
fn pair_position(i: usize, j: usize) -> usize {
    j * (j - 1) / 2 + i
}

fn decode_vertex_count(bytes: &[u8], base: usize) -> Result<(usize, usize), Graph6Error> {
    let value = |b: u8| (b - 63) as u64;
    if bytes[0] != 126 {
        return Ok((value(bytes[0]) as usize, 1));
    }
    if bytes.len() >= 2 && bytes[1] != 126 {
        if bytes.len() < 4 {
            return Err(Graph6Error::Header {
                offset: base,
                message: "long form needs 3 bytes after '~'".into(),
            });
        }
        let n = (value(bytes[1]) << 12) | (value(bytes[2]) << 6) | value(bytes[3]);
        if n < 63 {
            return Err(Graph6Error::Header {
                offset: base,
                message: format!("long form used for n = {n} < 63"),
            });
        }
        return Ok((n as usize, 4));
    }
    if bytes.len() < 8 {
        return Err(Graph6Error::Header {
            offset: base,
            message: "very long form needs 6 bytes after '~~'".into(),
        });
    }
    let mut n = 0u64;
    for &b in &bytes[2..8] {
        n = (n << 6) | value(b);
    }
    if n < 258_048 {
        return Err(Graph6Error::Header {
            offset: base,
            message: format!("very long form used for n = {n} < 258048"),
        });
    }
    Ok((n as usize, 8))
}

pub fn encode(g: &Graph) -> String {
    let n = g.vertex_count();
    let mut out = Vec::new();
    encode_vertex_count(n, &mut out);
    let pair_count = n * n.saturating_sub(1) / 2;
    let mut adjacent = vec![false; pair_count];
    for &(i, j) in g.edges() {
        adjacent[pair_position(i, j)] = true;
    }
    let mut index = 0;
    let mut group = 0u8;
    for j in 1..n {
        for i in 0..j {
            group = (group << 1) | u8::from(adjacent[pair_position(i, j)]);
            index += 1;
            if index % 6 == 0 {
                out.push(group + 63);
                group = 0;
            }
        }
    }
    if index % 6 != 0 {
        group <<= 6 - index % 6;
        out.push(group + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

fn encode_vertex_count(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        out.push(((n >> 12) & 63) as u8 + 63);
        out.push(((n >> 6) & 63) as u8 + 63);
        out.push((n & 63) as u8 + 63);
    } else {
        out.push(126);
        out.push(126);
        for shift in (0..6).rev() {
            out.push(((n >> (6 * shift)) & 63) as u8 + 63);
        }
    }
}

