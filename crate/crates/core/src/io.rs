//! graph6, sparse6 and plain edge-list encodings.
//!
//! graph6 and sparse6 follow the headerless gtools conventions byte for byte;
//! the optional `>>graph6<<` / `>>sparse6<<` headers are accepted on input.

use crate::error::ParseError;
use crate::graph::{members, Graph, MAX_ORDER};

fn push_order(out: &mut Vec<u8>, n: usize) {
    if n < 63 {
        out.push(n as u8 + 63);
    } else if n < 258_048 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.push(126);
        out.push(126);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
}

/// Packs a bit stream into 6-bit groups; the caller pads to a multiple of 6.
struct BitWriter {
    bytes: Vec<u8>,
    acc: u8,
    filled: u8,
}

impl BitWriter {
    fn new(bytes: Vec<u8>) -> Self {
        BitWriter {
            bytes,
            acc: 0,
            filled: 0,
        }
    }

    fn push(&mut self, b: bool) {
        self.acc = (self.acc << 1) | b as u8;
        self.filled += 1;
        if self.filled == 6 {
            self.bytes.push(self.acc + 63);
            self.acc = 0;
            self.filled = 0;
        }
    }

    fn push_bits(&mut self, value: usize, width: usize) {
        for i in (0..width).rev() {
            self.push((value >> i) & 1 == 1);
        }
    }

    fn pending(&self) -> usize {
        self.filled as usize
    }
}

pub fn to_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut w = BitWriter::new(Vec::new());
    push_order(&mut w.bytes, n);
    for j in 1..n {
        for i in 0..j {
            w.push(g.has_edge(i, j));
        }
    }
    while w.pending() != 0 {
        w.push(false);
    }
    String::from_utf8(w.bytes).expect("graph6 is ASCII")
}

pub fn to_sparse6(g: &Graph) -> String {
    let n = g.order();
    let mut w = BitWriter::new(vec![b':']);
    push_order(&mut w.bytes, n);
    let k = bits_needed(n);
    let mut last = 0usize;
    for j in 0..n {
        for i in members(g.neighbors(j)).take_while(|&i| i <= j) {
            if j == last {
                w.push(false);
            } else {
                w.push(true);
                if j > last + 1 {
                    w.push_bits(j, k);
                    w.push(false);
                }
                last = j;
            }
            w.push_bits(i, k);
        }
    }
    let pad = (6 - w.pending()) % 6;
    if pad > 0 {
        if k < 6 && pad > k && last + 2 == n && n == 1 << k {
            w.push(false);
            for _ in 1..pad {
                w.push(true);
            }
        } else {
            for _ in 0..pad {
                w.push(true);
            }
        }
    }
    String::from_utf8(w.bytes).expect("sparse6 is ASCII")
}

/// Number of bits needed to write `n - 1` in binary.
fn bits_needed(n: usize) -> usize {
    let mut k = 0;
    while n > 1 && (1usize << k) < n {
        k += 1;
    }
    k
}

struct BitReader<'a> {
    data: &'a [u8],
    base: usize,
    pos: usize,
    bit: u8,
}

impl<'a> BitReader<'a> {
    fn new(data: &'a [u8], base: usize) -> Result<Self, ParseError> {
        for (i, &b) in data.iter().enumerate() {
            if !(63..=126).contains(&b) {
                return Err(ParseError::new(base + i, format!("invalid byte 0x{b:02x}")));
            }
        }
        Ok(BitReader {
            data,
            base,
            pos: 0,
            bit: 0,
        })
    }

    fn next(&mut self) -> Option<bool> {
        let b = *self.data.get(self.pos)? - 63;
        let v = (b >> (5 - self.bit)) & 1 == 1;
        self.bit += 1;
        if self.bit == 6 {
            self.bit = 0;
            self.pos += 1;
        }
        Some(v)
    }

    fn read(&mut self, width: usize) -> Option<usize> {
        let mut v = 0;
        for _ in 0..width {
            v = (v << 1) | self.next()? as usize;
        }
        Some(v)
    }

    fn offset(&self) -> usize {
        self.base + self.pos
    }
}

/// Reads N(n); returns (n, bytes consumed).
fn read_order(data: &[u8], base: usize) -> Result<(usize, usize), ParseError> {
    let get = |i: usize| -> Result<usize, ParseError> {
        match data.get(i) {
            None => Err(ParseError::new(base + i, "truncated vertex count")),
            Some(&b) if (63..=126).contains(&b) => Ok((b - 63) as usize),
            Some(&b) => Err(ParseError::new(base + i, format!("invalid byte 0x{b:02x}"))),
        }
    };
    let first = get(0)?;
    if first < 63 {
        return Ok((first, 1));
    }
    if get(1)? < 63 {
        let n = (get(1)? << 12) | (get(2)? << 6) | get(3)?;
        return Ok((n, 4));
    }
    let mut n = 0;
    for i in 2..8 {
        n = (n << 6) | get(i)?;
    }
    Ok((n, 8))
}

fn check_order(n: usize, offset: usize) -> Result<(), ParseError> {
    if n > MAX_ORDER {
        Err(ParseError::new(
            offset,
            format!("order {n} exceeds the supported maximum of {MAX_ORDER}"),
        ))
    } else {
        Ok(())
    }
}

pub fn from_graph6(line: &str) -> Result<Graph, ParseError> {
    let raw = line.trim_end_matches(['\n', '\r']).as_bytes();
    let base = if raw.starts_with(b">>graph6<<") { 10 } else { 0 };
    let data = &raw[base..];
    let (n, used) = read_order(data, base)?;
    check_order(n, base)?;
    let body = &data[used..];
    let mut r = BitReader::new(body, base + used)?;
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    if body.len() != expected {
        return Err(ParseError::new(
            base + used + body.len().min(expected),
            format!("expected {expected} data bytes for order {n}, found {}", body.len()),
        ));
    }
    let mut g = Graph::new(n);
    for j in 1..n {
        for i in 0..j {
            if r.next().expect("length checked") {
                g.insert_edge(i, j);
            }
        }
    }
    Ok(g)
}

pub fn from_sparse6(line: &str) -> Result<Graph, ParseError> {
    let raw = line.trim_end_matches(['\n', '\r']).as_bytes();
    let base = if raw.starts_with(b">>sparse6<<") { 11 } else { 0 };
    let data = &raw[base..];
    if data.first() != Some(&b':') {
        return Err(ParseError::new(base, "sparse6 must start with ':'"));
    }
    let (n, used) = read_order(&data[1..], base + 1)?;
    check_order(n, base + 1)?;
    let k = bits_needed(n);
    let start = base + 1 + used;
    let mut r = BitReader::new(&data[1 + used..], start)?;
    let mut g = Graph::new(n);
    let mut v = 0usize;
    loop {
        let at = r.offset();
        let Some(b) = r.next() else { break };
        let Some(x) = r.read(k) else { break };
        if b {
            v += 1;
        }
        if v >= n {
            break;
        }
        if x > v {
            v = x;
        } else if x == v {
            return Err(ParseError::new(at, format!("self-loop at vertex {v}")));
        } else if g.has_edge(x, v) {
            return Err(ParseError::new(at, format!("repeated edge {x}-{v}")));
        } else {
            g.insert_edge(x, v);
        }
    }
    Ok(g)
}

/// Parses graph6 or sparse6, chosen by the leading character.
pub fn parse_graph_line(line: &str) -> Result<Graph, ParseError> {
    let t = line.trim_end_matches(['\n', '\r']);
    if t.starts_with(':') || t.starts_with(">>sparse6<<") {
        from_sparse6(t)
    } else {
        from_graph6(t)
    }
}

/// Edge list: one `u v` pair per line. A leading line holding a single integer
/// fixes the order (otherwise it is one more than the largest index). `#` starts a comment.
pub fn from_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut order: Option<usize> = None;
    let mut edges = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let content = line.split('#').next().unwrap_or("");
        let fields: Vec<&str> = content.split_whitespace().collect();
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| ParseError::new(offset, format!("not a vertex index: {s:?}")))
        };
        match fields.as_slice() {
            [] => {}
            [n] if order.is_none() && edges.is_empty() => order = Some(num(n)?),
            [u, v] => edges.push((num(u)?, num(v)?, offset)),
            _ => return Err(ParseError::new(offset, "expected `u v`")),
        }
        offset += line.len();
    }
    let n = order.unwrap_or_else(|| edges.iter().map(|&(u, v, _)| u.max(v) + 1).max().unwrap_or(0));
    check_order(n, 0)?;
    let mut g = Graph::new(n);
    for (u, v, at) in edges {
        if u >= n || v >= n {
            return Err(ParseError::new(at, format!("vertex out of range for order {n}")));
        }
        if u == v {
            return Err(ParseError::new(at, format!("self-loop at vertex {u}")));
        }
        if g.has_edge(u, v) {
            return Err(ParseError::new(at, format!("repeated edge {u}-{v}")));
        }
        g.insert_edge(u, v);
    }
    Ok(g)
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut s = format!("{}\n", g.order());
    for (u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn graph6_known_strings() {
        // A-C, A-E, B-D, D-E on five vertices.
        let g = Graph::from_edges(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(to_graph6(&g), "DQc");
        let k4 = Graph::new(4).complement();
        assert_eq!(to_graph6(&k4), "C~");
        assert_eq!(to_graph6(&Graph::new(0)), "?");
        assert_eq!(from_graph6("C~").unwrap(), k4);
    }

    #[test]
    fn sparse6_reference_example() {
        let g = from_sparse6(":Fa@x^").unwrap();
        assert_eq!(g.order(), 7);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2), (5, 6)]);
        assert_eq!(to_sparse6(&g), ":Fa@x^");
    }

    #[test]
    fn sparse6_special_padding() {
        // n = 4 (k = 2), last edge ends at vertex n-2: padding starts with a 0 bit.
        let g = Graph::from_edges(4, &[(0, 2), (1, 2)]).unwrap();
        let s = to_sparse6(&g);
        assert_eq!(from_sparse6(&s).unwrap(), g);
        let bytes: Vec<u8> = s.bytes().skip(2).map(|b| b - 63).collect();
        let bits: String = bytes.iter().map(|b| format!("{b:06b}")).collect();
        // b=1 x=2, b=0 x=0, b=0 x=1, then padding 011
        assert!(bits.starts_with("110000001"));
        assert_eq!(&bits[9..10], "0");
    }

    #[test]
    fn malformed_graph6_reports_offset() {
        let err = from_graph6("D Qc").unwrap_err();
        assert_eq!(err.offset, 1);
        let err = from_graph6("DQ").unwrap_err();
        assert_eq!(err.offset, 2);
    }

    #[test]
    fn edge_list_round_trip_and_errors() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(from_edge_list(&to_edge_list(&g)).unwrap(), g);
        assert_eq!(from_edge_list("0 1\n1 2 # path\n").unwrap().size(), 2);
        assert_eq!(from_edge_list("0 1\n1 1\n").unwrap_err().offset, 4);
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (0usize..=40).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2).prop_map(move |bits| {
                let mut g = Graph::new(n);
                let mut it = bits.into_iter();
                for j in 1..n {
                    for i in 0..j {
                        if it.next().unwrap() {
                            g.insert_edge(i, j);
                        }
                    }
                }
                g
            })
        })
    }

    proptest! {
        #[test]
        fn encodings_round_trip(g in arb_graph()) {
            prop_assert_eq!(from_graph6(&to_graph6(&g)).unwrap(), g.clone());
            prop_assert_eq!(from_sparse6(&to_sparse6(&g)).unwrap(), g);
        }
    }
}
