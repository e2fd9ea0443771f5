use crate::error::{Error, Result};
use crate::graph::Graph;

const OFFSET: u8 = 63;
const MAX_SHORT_FORM: usize = 62;

fn bit_count(n: usize) -> usize {
    n * (n - 1) / 2
}

fn byte_count(n: usize) -> usize {
    1 + bit_count(n).div_ceil(6)
}

/// Decode a short-form graph6 string (n <= 62).
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let bytes = text.as_bytes();
    let first = *bytes.first().ok_or_else(|| Error::Graph6Parse {
        offset: 0,
        reason: "empty input".into(),
    })?;
    if first == 126 {
        return Err(Error::Graph6Parse {
            offset: 0,
            reason: "long form (n > 62) is not supported".into(),
        });
    }
    if !(OFFSET..=126).contains(&first) {
        return Err(Error::Graph6Parse {
            offset: 0,
            reason: format!("byte {first} out of graph6 range 63..=126"),
        });
    }
    let n = (first - OFFSET) as usize;
    let expected = byte_count(n);
    if bytes.len() < expected {
        return Err(Error::Graph6Parse {
            offset: bytes.len(),
            reason: format!("truncated: expected {expected} bytes for n = {n}"),
        });
    }
    if bytes.len() > expected {
        return Err(Error::Graph6Parse {
            offset: expected,
            reason: "trailing garbage after encoded graph".into(),
        });
    }

    let mut g = Graph::empty(n);
    let mut pairs = (1..n).flat_map(|j| (0..j).map(move |i| (i, j)));
    for (k, &byte) in bytes.iter().enumerate().skip(1) {
        if !(OFFSET..=126).contains(&byte) {
            return Err(Error::Graph6Parse {
                offset: k,
                reason: format!("byte {byte} out of graph6 range 63..=126"),
            });
        }
        let chunk = byte - OFFSET;
        for bit in (0..6).rev() {
            let set = (chunk >> bit) & 1 == 1;
            match pairs.next() {
                Some((i, j)) => {
                    if set {
                        g.add_edge(i, j).expect("pairs are distinct and in range");
                    }
                }
                None => {
                    if set {
                        return Err(Error::Graph6Parse {
                            offset: k,
                            reason: "nonzero padding bits".into(),
                        });
                    }
                }
            }
        }
    }
    Ok(g)
}

/// Encode a graph as a canonical short-form graph6 string.
pub fn write_graph6(g: &Graph) -> Result<String> {
    let n = g.vertex_count();
    if n > MAX_SHORT_FORM {
        return Err(Error::UnsupportedSize { n });
    }
    let mut out = vec![OFFSET + n as u8];
    let mut chunk = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            chunk <<= 1;
            if g.has_edge(i, j) {
                chunk |= 1;
            }
            filled += 1;
            if filled == 6 {
                out.push(OFFSET + chunk);
                chunk = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        chunk <<= 6 - filled;
        out.push(OFFSET + chunk);
    }
    Ok(String::from_utf8(out).expect("bytes stay in ASCII range"))
}
