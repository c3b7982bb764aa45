//! graph6 text encoding.
//!
//! Header: one byte `63 + n` for `n ≤ 62`, otherwise `~` followed by three
//! bytes carrying `n` in 18 bits. Body: the upper triangle in column order
//! `(0,1), (0,2), (1,2), (0,3), …`, six bits per byte, most significant first,
//! zero padded, each byte offset by 63.

use thiserror::Error;

use crate::graph::Graph;

/// Largest order representable with the one- or four-byte header.
pub const MAX_ORDER: usize = 258_047;

const HEADER: &str = ">>graph6<<";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("malformed header")]
    MalformedHeader,
    #[error("byte {0:#04x} outside the printable graph6 range")]
    InvalidByte(u8),
    #[error("truncated edge bits: expected {expected} bytes, found {found}")]
    TruncatedBits { expected: usize, found: usize },
    #[error("{0} trailing bytes after edge data")]
    TrailingGarbage(usize),
    #[error("non-zero padding bits")]
    NonZeroPadding,
    #[error("order {0} exceeds graph6 limit")]
    OrderTooLarge(usize),
}

fn value(b: u8) -> Result<u64, Graph6Error> {
    if (63..=126).contains(&b) {
        Ok(u64::from(b - 63))
    } else {
        Err(Graph6Error::InvalidByte(b))
    }
}

/// Parses a single graph6 line. Surrounding whitespace and an optional
/// `>>graph6<<` prefix are ignored.
pub fn from_graph6(text: &str) -> Result<Graph, Graph6Error> {
    let text = text.trim();
    let bytes = text.strip_prefix(HEADER).unwrap_or(text).as_bytes();
    let (n, body) = match bytes {
        [] => return Err(Graph6Error::MalformedHeader),
        [126, 126, ..] => return Err(Graph6Error::MalformedHeader),
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(Graph6Error::MalformedHeader);
            }
            let mut n = 0u64;
            for &b in &rest[..3] {
                n = (n << 6) | value(b)?;
            }
            if n < 63 {
                return Err(Graph6Error::MalformedHeader);
            }
            (n as usize, &rest[3..])
        }
        [b, rest @ ..] => (value(*b)? as usize, rest),
    };

    let nbits = n * n.saturating_sub(1) / 2;
    let expected = nbits.div_ceil(6);
    if body.len() < expected {
        return Err(Graph6Error::TruncatedBits {
            expected,
            found: body.len(),
        });
    }
    if body.len() > expected {
        return Err(Graph6Error::TrailingGarbage(body.len() - expected));
    }

    let mut g = Graph::empty(n);
    let mut k = 0usize;
    'outer: for j in 1..n {
        for i in 0..j {
            let byte = value(body[k / 6])?;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.set_edge(i, j, true);
            }
            k += 1;
            if k == nbits {
                break 'outer;
            }
        }
    }
    if nbits % 6 != 0 {
        let last = value(body[expected - 1])?;
        let pad = 6 - nbits % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(Graph6Error::NonZeroPadding);
        }
    }
    // reject stray invalid bytes even if no bits were read from them
    for &b in body {
        value(b)?;
    }
    Ok(g)
}

pub fn to_graph6(g: &Graph) -> Result<String, Graph6Error> {
    let n = g.order();
    if n > MAX_ORDER {
        return Err(Graph6Error::OrderTooLarge(n));
    }
    let mut out = Vec::with_capacity(4 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    if n <= 62 {
        out.push(63 + n as u8);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(63 + ((n >> shift) & 0x3f) as u8);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            filled += 1;
            if filled == 6 {
                out.push(63 + acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(63 + (acc << (6 - filled)));
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}

/// One parsed corpus line.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    /// 1-based line number in the input.
    pub line: usize,
    pub text: String,
    pub graph: Result<Graph, Graph6Error>,
}

/// Parses newline-delimited graph6, skipping blank and `#` comment lines.
pub fn read_corpus(input: &str) -> Vec<CorpusEntry> {
    input
        .lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                return None;
            }
            Some(CorpusEntry {
                line: i + 1,
                text: line.to_string(),
                graph: from_graph6(line),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_strings() {
        assert_eq!(from_graph6("Bw").unwrap(), Graph::complete(3));
        assert_eq!(from_graph6("Bg").unwrap(), Graph::path(3));
        assert_eq!(to_graph6(&Graph::empty(1)).unwrap(), "@");
        assert_eq!(to_graph6(&Graph::empty(0)).unwrap(), "?");
        assert_eq!(to_graph6(&Graph::complete(3)).unwrap(), "Bw");
        assert_eq!(to_graph6(&Graph::complete(5)).unwrap(), "D~{");
        assert_eq!(from_graph6(">>graph6<<Bw\n").unwrap(), Graph::complete(3));
    }

    #[test]
    fn petgraph_reference_string() {
        // edges a-c, a-e, b-d, d-e
        let g = Graph::from_edges(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(to_graph6(&g).unwrap(), "DQc");
    }

    #[test]
    fn long_header() {
        let g = Graph::cycle(70);
        let s = to_graph6(&g).unwrap();
        assert!(s.starts_with('~'));
        assert_eq!(&s[1..4], "?@E");
        assert_eq!(from_graph6(&s).unwrap(), g);
    }

    #[test]
    fn errors() {
        assert_eq!(from_graph6(""), Err(Graph6Error::MalformedHeader));
        assert_eq!(from_graph6("~?"), Err(Graph6Error::MalformedHeader));
        assert_eq!(from_graph6("~???"), Err(Graph6Error::MalformedHeader));
        assert_eq!(
            from_graph6("D~"),
            Err(Graph6Error::TruncatedBits { expected: 2, found: 1 })
        );
        assert_eq!(from_graph6("Bww"), Err(Graph6Error::TrailingGarbage(1)));
        assert_eq!(from_graph6("Bx"), Err(Graph6Error::NonZeroPadding));
        assert_eq!(from_graph6("B!"), Err(Graph6Error::InvalidByte(b'!')));
    }

    #[test]
    fn corpus_lines() {
        let entries = read_corpus("# header\nBw\n\n  Bg  \nnot graph6!\n");
        assert_eq!(entries.len(), 3);
        assert_eq!(entries[0].line, 2);
        assert!(entries[1].graph.is_ok());
        assert!(entries[2].graph.is_err());
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (0..=max_n).prop_flat_map(|n| {
            let pairs = n * n.saturating_sub(1) / 2;
            proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut k = 0;
                for j in 1..n {
                    for i in 0..j {
                        if bits[k] {
                            edges.push((i, j));
                        }
                        k += 1;
                    }
                }
                Graph::from_edges(n, &edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn round_trip(g in arb_graph(12)) {
            let s = to_graph6(&g).unwrap();
            prop_assert_eq!(from_graph6(&s).unwrap(), g);
        }
    }
}
