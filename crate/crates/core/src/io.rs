//! Edge-list and graph6 text formats.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    EdgeList,
    Graph6,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge-list" | "edges" => Ok(Format::EdgeList),
            "graph6" | "g6" => Ok(Format::Graph6),
            other => Err(Error::InvalidArgument(format!("unknown format {other:?}"))),
        }
    }
}

pub fn parse_graph(text: &str, format: Format) -> Result<Graph> {
    match format {
        Format::EdgeList => parse_edge_list(text),
        Format::Graph6 => parse_graph6(text),
    }
}

pub fn emit_graph(g: &Graph, format: Format) -> String {
    match format {
        Format::EdgeList => emit_edge_list(g),
        Format::Graph6 => emit_graph6(g),
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        location: format!("line {line}"),
        message: message.into(),
    }
}

fn parse_pair(line_no: usize, line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = |what: &str| -> Result<usize> {
        let tok = it
            .next()
            .ok_or_else(|| parse_err(line_no, format!("missing {what}")))?;
        tok.parse()
            .map_err(|_| parse_err(line_no, format!("{what} {tok:?} is not a non-negative integer")))
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if it.next().is_some() {
        return Err(parse_err(line_no, "expected exactly two fields"));
    }
    Ok((a, b))
}

/// Parses `"n m"` followed by `m` lines `"u v"`. Blank lines are skipped.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let (n, m) = parse_pair(hline, header)?;
    let mut g = Graph::empty(n);
    let mut count = 0;
    for (line_no, line) in lines {
        let (u, v) = parse_pair(line_no, line)?;
        if u >= n || v >= n {
            return Err(parse_err(line_no, format!("vertex out of range 0..{n}")));
        }
        if u == v {
            return Err(Error::LoopRejected {
                vertex: u,
                location: format!("line {line_no}"),
            });
        }
        if g.has_edge(u, v) {
            return Err(Error::DuplicateEdge {
                u: u.min(v),
                v: u.max(v),
                location: format!("line {line_no}"),
            });
        }
        g.add_edge(u, v);
        count += 1;
    }
    if count != m {
        return Err(parse_err(hline, format!("header declares {m} edges, found {count}")));
    }
    Ok(g)
}

pub fn emit_edge_list(g: &Graph) -> String {
    let edges = g.edges();
    let mut out = format!("{} {}\n", g.n(), edges.len());
    for (u, v) in edges {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

fn g6_err(byte: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        location: format!("byte {byte}"),
        message: message.into(),
    }
}

/// Parses a single graph6 string (an optional `>>graph6<<` header and
/// surrounding whitespace are accepted).
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let s = text.trim();
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes = s.as_bytes();
    if let Some(pos) = bytes.iter().position(|&b| !(63..=126).contains(&b)) {
        return Err(g6_err(pos, format!("byte {:#x} outside graph6 range", bytes[pos])));
    }
    let (n, mut pos) = match bytes.first() {
        None => return Err(g6_err(0, "empty input")),
        Some(126) if bytes.get(1) == Some(&126) => {
            if bytes.len() < 8 {
                return Err(g6_err(bytes.len(), "truncated size field"));
            }
            let mut n = 0usize;
            for &b in &bytes[2..8] {
                n = (n << 6) | (b - 63) as usize;
            }
            (n, 8)
        }
        Some(126) => {
            if bytes.len() < 4 {
                return Err(g6_err(bytes.len(), "truncated size field"));
            }
            let mut n = 0usize;
            for &b in &bytes[1..4] {
                n = (n << 6) | (b - 63) as usize;
            }
            (n, 4)
        }
        Some(&b) => ((b - 63) as usize, 1),
    };
    let pairs = n * n.saturating_sub(1) / 2;
    let needed = pairs.div_ceil(6);
    if bytes.len() - pos != needed {
        return Err(g6_err(
            bytes.len(),
            format!("expected {needed} data bytes for n = {n}, found {}", bytes.len() - pos),
        ));
    }
    let mut g = Graph::empty(n);
    let mut bit = 0;
    let mut cur = 0u8;
    for j in 1..n {
        for i in 0..j {
            if bit % 6 == 0 {
                cur = bytes[pos] - 63;
                pos += 1;
            }
            if cur & (1 << (5 - bit % 6)) != 0 {
                g.add_edge(i, j);
            }
            bit += 1;
        }
    }
    // padding bits must be zero for a canonical string
    if bit % 6 != 0 && cur & ((1 << (6 - bit % 6)) - 1) != 0 {
        return Err(g6_err(pos - 1, "nonzero padding bits"));
    }
    Ok(g)
}

pub fn emit_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut cur = 0u8;
    let mut bit = 0;
    for j in 1..n {
        for i in 0..j {
            if g.has_edge(i, j) {
                cur |= 1 << (5 - bit % 6);
            }
            bit += 1;
            if bit % 6 == 0 {
                out.push(cur + 63);
                cur = 0;
            }
        }
    }
    if bit % 6 != 0 {
        out.push(cur + 63);
    }
    String::from_utf8(out).expect("graph6 is ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named;
    use proptest::prelude::*;

    #[test]
    fn edge_list_path() {
        let g = parse_edge_list("3 2\n0 1\n1 2").unwrap();
        assert_eq!(g, named::path(3));
        assert_eq!(emit_edge_list(&g), "3 2\n0 1\n1 2\n");
    }

    #[test]
    fn edge_list_errors() {
        assert!(matches!(
            parse_edge_list("2 1\n0 0"),
            Err(Error::LoopRejected { vertex: 0, .. })
        ));
        assert!(matches!(
            parse_edge_list("3 2\n0 1\n1 0"),
            Err(Error::DuplicateEdge { .. })
        ));
        let err = parse_edge_list("3 2\n0 1\n1 x").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                location: "line 3".into(),
                message: "second field \"x\" is not a non-negative integer".into()
            }
        );
        assert!(parse_edge_list("3 2\n0 1").is_err());
        assert!(parse_edge_list("3 1\n0 5").is_err());
    }

    #[test]
    fn graph6_known_strings() {
        assert_eq!(emit_graph6(&parse_graph6("D~{").unwrap()), "D~{");
        // C5 in the common corpus encoding
        assert_eq!(emit_graph6(&named::cycle(5)), "Dhc");
        assert_eq!(emit_graph6(&Graph::empty(0)), "?");
        assert_eq!(parse_graph6("A_").unwrap(), named::complete(2));
        assert!(parse_graph6("D~").is_err());
    }

    #[test]
    fn graph6_large_n_header() {
        let g = named::path(70);
        let s = emit_graph6(&g);
        assert!(s.starts_with('~'));
        assert_eq!(parse_graph6(&s).unwrap(), g);
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (0..=max_n).prop_flat_map(|n| {
            let pairs = n * n.saturating_sub(1) / 2;
            proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
                let mut g = Graph::empty(n);
                let mut k = 0;
                for j in 1..n {
                    for i in 0..j {
                        if bits[k] {
                            g.add_edge(i, j);
                        }
                        k += 1;
                    }
                }
                g
            })
        })
    }

    proptest! {
        #[test]
        fn graph6_parse_emit_identity(g in arb_graph(62)) {
            let s = emit_graph6(&g);
            prop_assert_eq!(parse_graph6(&s).unwrap(), g.clone());
            prop_assert_eq!(emit_graph6(&parse_graph6(&s).unwrap()), s);
        }

        #[test]
        fn edge_list_parse_emit_identity(g in arb_graph(20)) {
            prop_assert_eq!(parse_edge_list(&emit_edge_list(&g)).unwrap(), g);
        }
    }
}
