//! Text formats: graph6 (single-byte order only) and plain edge lists.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest order representable with a single graph6 header byte.
pub const GRAPH6_MAX_ORDER: usize = 62;

const OFFSET: u8 = 63;

fn payload_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

/// Parses a graph6 string. Leading/trailing whitespace and an optional
/// `>>graph6<<` header are ignored.
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let text = text.trim();
    let text = text.strip_prefix(">>graph6<<").unwrap_or(text);
    let bytes = text.as_bytes();
    let (&head, payload) = bytes
        .split_first()
        .ok_or_else(|| Error::Graph6("empty input".into()))?;
    if !(OFFSET..=126).contains(&head) {
        return Err(Error::Graph6(format!("malformed header byte {head:#04x}")));
    }
    if head == 126 {
        return Err(Error::Graph6(format!(
            "multi-byte order headers are not supported (max order {GRAPH6_MAX_ORDER})"
        )));
    }
    let n = (head - OFFSET) as usize;
    let expected = payload_len(n);
    if payload.len() != expected {
        return Err(Error::Graph6(format!(
            "payload has {} bytes, order {n} needs {expected}",
            payload.len()
        )));
    }
    if let Some(pos) = payload.iter().position(|b| !(OFFSET..=126).contains(b)) {
        return Err(Error::Graph6(format!(
            "byte {:#04x} at offset {} is outside 63..=126",
            payload[pos],
            pos + 1
        )));
    }

    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = payload[k / 6] - OFFSET;
            if byte >> (5 - k % 6) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, edges)
}

/// Encodes `g` as graph6. Fails for orders above [`GRAPH6_MAX_ORDER`].
pub fn encode_graph6(g: &Graph) -> Result<String> {
    let n = g.order();
    if n > GRAPH6_MAX_ORDER {
        return Err(Error::Graph6(format!(
            "order {n} exceeds the single-byte limit {GRAPH6_MAX_ORDER}"
        )));
    }
    let mut payload = vec![0u8; payload_len(n)];
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if g.has_edge(i, j) {
                payload[k / 6] |= 1 << (5 - k % 6);
            }
            k += 1;
        }
    }
    let mut out = String::with_capacity(payload.len() + 1);
    out.push((n as u8 + OFFSET) as char);
    out.extend(payload.into_iter().map(|b| (b + OFFSET) as char));
    Ok(out)
}

/// Parses lines of `u v` pairs with an optional leading `n <count>` line.
/// Blank lines and lines starting with `#` are skipped. Repeated edges are
/// merged; loops, negative ids and non-integer tokens are errors.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut declared: Option<usize> = None;
    let mut pairs = Vec::new();
    let mut seen_edge = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::EdgeList { line: line_no, msg };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.first() == Some(&"n") {
            if seen_edge || declared.is_some() {
                return Err(err("vertex count must be the first line".into()));
            }
            let [_, count] = tokens[..] else {
                return Err(err(format!("expected `n <count>`, got {line:?}")));
            };
            declared = Some(parse_id(count).map_err(err)?);
            continue;
        }
        let [a, b] = tokens[..] else {
            return Err(err(format!("expected two vertex ids, got {line:?}")));
        };
        let (a, b) = (parse_id(a).map_err(err)?, parse_id(b).map_err(err)?);
        if a == b {
            return Err(err(format!("loop at vertex {a}")));
        }
        seen_edge = true;
        pairs.push((a, b));
    }
    let needed = pairs.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
    let n = match declared {
        Some(n) if n < needed => {
            return Err(Error::EdgeList {
                line: 1,
                msg: format!("declared {n} vertices but id {} appears", needed - 1),
            })
        }
        Some(n) => n,
        None => needed,
    };
    Graph::from_edges(n, pairs)
}

fn parse_id(token: &str) -> std::result::Result<usize, String> {
    if token.starts_with('-') && token[1..].parse::<u64>().is_ok() {
        return Err(format!("negative vertex id {token}"));
    }
    token
        .parse::<usize>()
        .map_err(|_| format!("{token:?} is not a non-negative integer"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Graph6,
    EdgeList,
}

/// Guesses the format from the first non-blank byte. graph6 headers are
/// never digits, and graph6 strings contain no whitespace, so a leading digit,
/// `#`, or `n` followed by whitespace selects the edge-list format.
pub fn detect_format(text: &str) -> GraphFormat {
    let t = text.trim_start();
    let mut chars = t.chars();
    match chars.next() {
        None => GraphFormat::EdgeList,
        Some(c) if c.is_ascii_digit() || c == '#' => GraphFormat::EdgeList,
        Some('n') if chars.next().is_some_and(char::is_whitespace) => GraphFormat::EdgeList,
        _ => GraphFormat::Graph6,
    }
}

pub fn parse_graph(text: &str, format: Option<GraphFormat>) -> Result<Graph> {
    match format.unwrap_or_else(|| detect_format(text)) {
        GraphFormat::Graph6 => parse_graph6(text),
        GraphFormat::EdgeList => parse_edge_list(text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;
    use proptest::prelude::*;

    /// Independent encoder: build the bit string explicitly, then chop.
    fn oracle_graph6(n: usize, edges: &[(usize, usize)]) -> String {
        let mut bits = String::new();
        for j in 1..n {
            for i in 0..j {
                let on = edges.iter().any(|&(a, b)| (a, b) == (i, j) || (b, a) == (i, j));
                bits.push(if on { '1' } else { '0' });
            }
        }
        while !bits.len().is_multiple_of(6) {
            bits.push('0');
        }
        let mut out = String::new();
        out.push(char::from(n as u8 + 63));
        for chunk in bits.as_bytes().chunks(6) {
            let v = u8::from_str_radix(std::str::from_utf8(chunk).unwrap(), 2).unwrap();
            out.push(char::from(v + 63));
        }
        out
    }

    #[test]
    fn triangle() {
        assert_eq!(oracle_graph6(3, &[(0, 1), (0, 2), (1, 2)]), "Bw");
        let g = parse_graph6("Bw").unwrap();
        assert_eq!(g, Graph::complete(3));
        assert_eq!(encode_graph6(&g).unwrap(), "Bw");
    }

    #[test]
    fn single_vertex() {
        let g = parse_graph6("@").unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn four_cycle() {
        let edges = [(0, 1), (1, 2), (2, 3), (0, 3)];
        let s = oracle_graph6(4, &edges);
        let g = parse_graph6(&s).unwrap();
        assert_eq!(
            g.edges(),
            vec![Edge::new(0, 1), Edge::new(0, 3), Edge::new(1, 2), Edge::new(2, 3)]
        );
        assert_eq!(g, Graph::cycle(4));
    }

    #[test]
    fn graph6_errors() {
        assert!(parse_graph6("").is_err());
        assert!(parse_graph6("\x20").is_err());
        assert!(parse_graph6("B").is_err()); // missing payload
        assert!(parse_graph6("Bww").is_err()); // too long
        assert!(parse_graph6("B\x7f").is_err());
        assert!(parse_graph6("~?@G").is_err());
        assert!(encode_graph6(&Graph::empty(63)).is_err());
    }

    #[test]
    fn graph6_header_and_whitespace() {
        assert_eq!(parse_graph6(">>graph6<<Bw\n").unwrap(), Graph::complete(3));
    }

    #[test]
    fn exhaustive_round_trip_up_to_five() {
        for n in 1..=5usize {
            let pairs = n * (n - 1) / 2;
            for mask in 0..1u64 << pairs {
                let g = Graph::from_upper_triangle_mask(n, mask);
                let edges: Vec<_> = g.edges().iter().map(|e| (e.u, e.v)).collect();
                let s = encode_graph6(&g).unwrap();
                assert_eq!(s, oracle_graph6(n, &edges));
                assert_eq!(parse_graph6(&s).unwrap(), g);
            }
        }
    }

    proptest! {
        #[test]
        fn round_trip_up_to_eight(n in 1usize..=8, mask in any::<u64>()) {
            let pairs = n * (n - 1) / 2;
            let g = Graph::from_upper_triangle_mask(n, mask & ((1u64 << pairs) - 1));
            prop_assert_eq!(parse_graph6(&encode_graph6(&g).unwrap()).unwrap(), g);
        }
    }

    #[test]
    fn edge_lists() {
        assert_eq!(parse_edge_list("0 1\n1 2").unwrap(), Graph::path(3));
        let g = parse_edge_list("n 4\n0 1").unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.connected_components().len(), 3);
        let g = parse_edge_list("0 1\n0 1").unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(parse_edge_list("# comment\n\n1 0\n").unwrap(), Graph::path(2));
    }

    #[test]
    fn edge_list_errors() {
        assert!(parse_edge_list("0 -1").is_err());
        assert!(parse_edge_list("2 2").is_err());
        assert!(parse_edge_list("0 x").is_err());
        assert!(parse_edge_list("0 1 2").is_err());
        assert!(parse_edge_list("n 2\n0 2").is_err());
        assert!(parse_edge_list("0 1\nn 3").is_err());
    }

    #[test]
    fn detection() {
        assert_eq!(detect_format("Bw"), GraphFormat::Graph6);
        assert_eq!(detect_format("0 1\n"), GraphFormat::EdgeList);
        assert_eq!(detect_format("n 3\n0 1"), GraphFormat::EdgeList);
        // order 47 graph6 header is `n`
        assert_eq!(detect_format("n???"), GraphFormat::Graph6);
        assert_eq!(parse_graph("  Bw", None).unwrap(), Graph::complete(3));
    }
}
