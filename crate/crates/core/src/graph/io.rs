//! graph6 and plain edge-list encodings.
//!
//! graph6 follows the format description shipped with nauty: `N(n)` followed by
//! the upper triangle read column by column (`x(0,1), x(0,2), x(1,2), x(0,3), ..`),
//! packed six bits per byte, most significant first, each byte offset by 63.

use super::Graph;
use crate::error::{Error, Result};

const HEADER: &str = ">>graph6<<";

fn encode_size(n: usize, out: &mut Vec<u8>) -> Result<()> {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else if n <= 68_719_476_735 {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        return Err(Error::param(format!("graph of order {n} is too large for graph6")));
    }
    Ok(())
}

/// graph6 line, without header, terminated by `\n`.
pub fn to_graph6<L>(g: &Graph<L>) -> Result<String> {
    let n = g.n();
    let mut out = Vec::new();
    encode_size(n, &mut out)?;
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.adjacent(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("graph6 is printable ASCII"))
}

/// Parses a single graph6 graph; an optional `>>graph6<<` header and trailing
/// whitespace are accepted.
pub fn from_graph6(text: &str) -> Result<Graph<()>> {
    let line = text.trim_end();
    let line = line.strip_prefix(HEADER).unwrap_or(line);
    let bytes = line.as_bytes();
    if let Some(bad) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(Error::Parse(format!("byte {bad} outside the graph6 range 63..=126")));
    }
    let six = |slice: &[u8]| slice.iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
    let (n, body) = match bytes {
        [] => return Err(Error::Parse("empty graph6 string".into())),
        [126, 126, rest @ ..] if rest.len() >= 6 => (six(&rest[..6]), &rest[6..]),
        [126, rest @ ..] if rest.len() >= 3 && rest[0] != 126 => (six(&rest[..3]), &rest[3..]),
        [126, ..] => return Err(Error::Parse("truncated graph6 size field".into())),
        [first, rest @ ..] => ((first - 63) as usize, rest),
    };
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    if body.len() != expected {
        return Err(Error::Parse(format!(
            "graph6 body has {} bytes, order {n} needs {expected}",
            body.len()
        )));
    }
    let mut g = Graph::empty(vec![(); n]);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = body[k / 6] - 63;
            if (byte >> (5 - k % 6)) & 1 == 1 {
                g.set_edge(i, j, true);
            }
            k += 1;
        }
    }
    if bits % 6 != 0 {
        let pad = body[expected - 1] - 63;
        if pad & ((1 << (6 - bits % 6)) - 1) != 0 {
            return Err(Error::Parse("nonzero padding bits in graph6 body".into()));
        }
    }
    Ok(g)
}

/// `"u v"` per line, `u < v`, 0-based, lexicographic.
pub fn to_edge_list<L>(g: &Graph<L>) -> String {
    let mut s = String::new();
    for (u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

/// Reads an edge list for a graph of the given order. Blank lines and `#` comments are skipped.
pub fn from_edge_list(n: usize, text: &str) -> Result<Graph<()>> {
    let mut g = Graph::empty(vec![(); n]);
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parsed: Vec<usize> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("line {}: bad vertex {t:?}", lineno + 1))))
            .collect::<Result<_>>()?;
        match parsed[..] {
            [u, v] if u < n && v < n && u != v => g.set_edge(u, v, true),
            _ => return Err(Error::Parse(format!("line {}: expected two distinct vertices below {n}", lineno + 1))),
        }
    }
    Ok(g)
}
