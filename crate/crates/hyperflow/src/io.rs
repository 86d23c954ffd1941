//! hMetis hypergraph files, partition files, and converters from edge lists
//! and coordinate-format sparse matrices.
//!
//! Line numbers in errors are 1-based physical lines of the input.

use std::fmt::Write as _;
use std::path::Path;

use hyperflow_core::{Hypergraph, Partition, Weight};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Header { line: usize, msg: &'static str },
    #[error("line {line}: not a number: {token:?}")]
    NotNumeric { line: usize, token: String },
    #[error("line {line}: pin {pin} out of range 1..={n}")]
    PinOutOfRange { line: usize, pin: u64, n: usize },
    #[error("line {line}: empty net")]
    EmptyNet { line: usize },
    #[error("line {line}: weight must be positive")]
    ZeroWeight { line: usize },
    #[error("expected {expected} lines after the header, found {found}")]
    LineCount { expected: usize, found: usize },
    #[error("line {line}: block {block} out of range for k={k}")]
    BlockOutOfRange { line: usize, block: u64, k: usize },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: u64 },
    #[error("line {line}: vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { line: usize, vertex: u64, n: usize },
    #[error(transparent)]
    Model(#[from] hyperflow_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

pub type Result<T> = std::result::Result<T, FormatError>;

/// Non-comment lines with their 1-based line numbers; trailing blank lines
/// are dropped.
fn content_lines<'a>(text: &'a str, comments: &[char]) -> Vec<(usize, &'a str)> {
    let mut lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !comments.iter().any(|&c| l.trim_start().starts_with(c)))
        .map(|(i, l)| (i + 1, l.trim()))
        .collect();
    while lines.last().is_some_and(|(_, l)| l.is_empty()) {
        lines.pop();
    }
    lines
}

fn number(line: usize, token: &str) -> Result<u64> {
    token.parse().map_err(|_| FormatError::NotNumeric { line, token: token.to_string() })
}

fn numbers(line: usize, text: &str) -> Result<Vec<u64>> {
    text.split_whitespace().map(|t| number(line, t)).collect()
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.display().to_string(), source })
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| FormatError::Io { path: path.display().to_string(), source })
}

/// Parses an hMetis hypergraph: header "m n [fmt]" with fmt ∈ {0, 1, 10,
/// 11}, m net lines (leading weight if fmt has net weights), then n vertex
/// weight lines if fmt has vertex weights. Lines starting with '%' are
/// comments. Duplicate pins within a net are dropped.
pub fn parse_hgr(text: &str) -> Result<Hypergraph> {
    let lines = content_lines(text, &['%']);
    let Some(&(hline, header)) = lines.iter().find(|(_, l)| !l.is_empty()) else {
        return Err(FormatError::Header { line: 1, msg: "missing header" });
    };
    let head = numbers(hline, header)?;
    if head.len() < 2 || head.len() > 3 {
        return Err(FormatError::Header { line: hline, msg: "expected \"nets vertices [fmt]\"" });
    }
    let (m, n) = (head[0] as usize, head[1] as usize);
    let (net_weights, vertex_weights) = match head.get(2).copied().unwrap_or(0) {
        0 => (false, false),
        1 => (true, false),
        10 => (false, true),
        11 => (true, true),
        _ => return Err(FormatError::Header { line: hline, msg: "fmt must be 0, 1, 10 or 11" }),
    };
    let start = lines.iter().position(|&(l, _)| l == hline).unwrap() + 1;
    let body = &lines[start..];
    let expected = m + if vertex_weights { n } else { 0 };
    if body.len() != expected {
        return Err(FormatError::LineCount { expected, found: body.len() });
    }

    let mut nets = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for &(line, text) in &body[..m] {
        let mut values = numbers(line, text)?.into_iter();
        let w = if net_weights { values.next().unwrap_or(0) } else { 1 };
        if net_weights && w == 0 && !text.is_empty() {
            return Err(FormatError::ZeroWeight { line });
        }
        let mut pins = Vec::new();
        for pin in values {
            if pin == 0 || pin as usize > n {
                return Err(FormatError::PinOutOfRange { line, pin, n });
            }
            let v = pin as usize - 1;
            if pins.contains(&v) {
                log::warn!("line {line}: duplicate pin {pin} dropped");
            } else {
                pins.push(v);
            }
        }
        if pins.is_empty() {
            return Err(FormatError::EmptyNet { line });
        }
        nets.push(pins);
        weights.push(w);
    }
    let vw = if vertex_weights {
        let mut vw = Vec::with_capacity(n);
        for &(line, text) in &body[m..] {
            let values = numbers(line, text)?;
            if values.len() != 1 {
                return Err(FormatError::Header { line, msg: "expected one vertex weight" });
            }
            if values[0] == 0 {
                return Err(FormatError::ZeroWeight { line });
            }
            vw.push(values[0]);
        }
        Some(vw)
    } else {
        None
    };
    Ok(Hypergraph::with_weights(n, &nets, Some(weights), vw)?)
}

pub fn read_hgr(path: &Path) -> Result<Hypergraph> {
    parse_hgr(&read_file(path)?)
}

/// hMetis text for `h`; the fmt field is present only when some weight is
/// not 1.
pub fn write_hgr(h: &Hypergraph) -> String {
    let nw = !h.has_unit_net_weights();
    let vw = !h.has_unit_vertex_weights();
    let mut out = String::new();
    match (nw, vw) {
        (false, false) => writeln!(out, "{} {}", h.num_nets(), h.num_vertices()),
        (true, false) => writeln!(out, "{} {} 1", h.num_nets(), h.num_vertices()),
        (false, true) => writeln!(out, "{} {} 10", h.num_nets(), h.num_vertices()),
        (true, true) => writeln!(out, "{} {} 11", h.num_nets(), h.num_vertices()),
    }
    .unwrap();
    for e in 0..h.num_nets() {
        let mut fields: Vec<String> = Vec::with_capacity(h.net_size(e) + 1);
        if nw {
            fields.push(h.net_weight(e).to_string());
        }
        fields.extend(h.pins(e).iter().map(|v| (v + 1).to_string()));
        writeln!(out, "{}", fields.join(" ")).unwrap();
    }
    if vw {
        for v in 0..h.num_vertices() {
            writeln!(out, "{}", h.vertex_weight(v)).unwrap();
        }
    }
    out
}

/// One block id per line, exactly `n` lines, each in [0, k).
pub fn parse_partition(text: &str, n: usize, k: usize) -> Result<Vec<usize>> {
    let lines = content_lines(text, &['%', '#']);
    if lines.len() != n {
        return Err(FormatError::LineCount { expected: n, found: lines.len() });
    }
    lines
        .iter()
        .map(|&(line, text)| {
            let block = number(line, text)?;
            if block as usize >= k {
                return Err(FormatError::BlockOutOfRange { line, block, k });
            }
            Ok(block as usize)
        })
        .collect()
}

pub fn read_partition(path: &Path, h: &Hypergraph, k: usize, epsilon: f64) -> Result<Partition> {
    let blocks = parse_partition(&read_file(path)?, h.num_vertices(), k)?;
    Ok(Partition::new(h, k, epsilon, blocks)?)
}

pub fn write_partition(blocks: &[usize]) -> String {
    let mut out = String::with_capacity(blocks.len() * 2);
    for b in blocks {
        writeln!(out, "{b}").unwrap();
    }
    out
}

/// Graph edges "u v [w]" with 1-based vertex ids, '%' or '#' comments. Each
/// edge becomes a two-pin net. Parallel edges stay parallel nets unless
/// `merge_parallel`, which sums their weights. `n` defaults to the largest
/// id seen.
pub fn graph_to_hypergraph(text: &str, n: Option<usize>, merge_parallel: bool) -> Result<Hypergraph> {
    let mut edges: Vec<(usize, usize, Weight, usize)> = Vec::new();
    let mut max_id = 0;
    for (line, text) in content_lines(text, &['%', '#']) {
        if text.is_empty() {
            continue;
        }
        let values = numbers(line, text)?;
        if values.len() < 2 || values.len() > 3 {
            return Err(FormatError::Header { line, msg: "expected \"u v [weight]\"" });
        }
        let (u, v) = (values[0], values[1]);
        for x in [u, v] {
            if x == 0 || n.is_some_and(|n| x as usize > n) {
                return Err(FormatError::VertexOutOfRange { line, vertex: x, n: n.unwrap_or(usize::MAX) });
            }
        }
        if u == v {
            return Err(FormatError::SelfLoop { line, vertex: u });
        }
        let w = values.get(2).copied().unwrap_or(1);
        if w == 0 {
            return Err(FormatError::ZeroWeight { line });
        }
        max_id = max_id.max(u.max(v) as usize);
        edges.push((u as usize - 1, v as usize - 1, w, line));
    }
    let n = n.unwrap_or(max_id);
    let (nets, weights): (Vec<Vec<usize>>, Vec<Weight>) = if merge_parallel {
        let mut merged: std::collections::BTreeMap<(usize, usize), (usize, Weight)> = Default::default();
        for (idx, &(u, v, w, _)) in edges.iter().enumerate() {
            merged.entry((u.min(v), u.max(v))).or_insert((idx, 0)).1 += w;
        }
        let mut list: Vec<(usize, (usize, usize), Weight)> =
            merged.into_iter().map(|(key, (idx, w))| (idx, key, w)).collect();
        list.sort_unstable();
        list.into_iter().map(|(_, (u, v), w)| (vec![u, v], w)).unzip()
    } else {
        edges.iter().map(|&(u, v, w, _)| (vec![u, v], w)).unzip()
    };
    Ok(Hypergraph::with_weights(n, &nets, Some(weights), None)?)
}

/// Row-net model of a coordinate-format sparse matrix: header "rows cols
/// nnz", then "row col [value]" lines, 1-based; values are ignored. Columns
/// become vertices and each non-empty row a net.
pub fn matrix_to_hypergraph(text: &str) -> Result<Hypergraph> {
    let lines: Vec<(usize, &str)> =
        content_lines(text, &['%', '#']).into_iter().filter(|(_, l)| !l.is_empty()).collect();
    let Some(&(hline, header)) = lines.first() else {
        return Err(FormatError::Header { line: 1, msg: "missing header" });
    };
    let head = numbers(hline, header)?;
    if head.len() != 3 {
        return Err(FormatError::Header { line: hline, msg: "expected \"rows cols nnz\"" });
    }
    let (rows, cols, nnz) = (head[0] as usize, head[1] as usize, head[2] as usize);
    if lines.len() - 1 != nnz {
        return Err(FormatError::LineCount { expected: nnz, found: lines.len() - 1 });
    }
    let mut row_pins: Vec<Vec<usize>> = vec![Vec::new(); rows];
    for &(line, text) in &lines[1..] {
        let mut tokens = text.split_whitespace();
        let (Some(r), Some(c)) = (tokens.next(), tokens.next()) else {
            return Err(FormatError::Header { line, msg: "expected \"row col [value]\"" });
        };
        let (r, c) = (number(line, r)?, number(line, c)?);
        if r == 0 || r as usize > rows {
            return Err(FormatError::VertexOutOfRange { line, vertex: r, n: rows });
        }
        if c == 0 || c as usize > cols {
            return Err(FormatError::PinOutOfRange { line, pin: c, n: cols });
        }
        let pins = &mut row_pins[r as usize - 1];
        if !pins.contains(&(c as usize - 1)) {
            pins.push(c as usize - 1);
        }
    }
    let nets: Vec<Vec<usize>> = row_pins.into_iter().filter(|p| !p.is_empty()).collect();
    Ok(Hypergraph::new(cols, &nets)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const H0: &str = "3 4\n1 2\n2 3 4\n1 3\n";

    #[test]
    fn h0_parses_and_writes_back() {
        let h = parse_hgr(H0).unwrap();
        assert_eq!((h.num_nets(), h.num_vertices()), (3, 4));
        assert_eq!(h.pins(1), &[1, 2, 3]);
        assert_eq!(write_hgr(&h), H0);
    }

    #[test]
    fn weighted_net() {
        let h = parse_hgr("1 2 1\n5 1 2\n").unwrap();
        assert_eq!(h.net_weight(0), 5);
        assert_eq!(h.pins(0), &[0, 1]);
    }

    #[test]
    fn pin_out_of_range() {
        assert!(matches!(parse_hgr("1 2\n1 3\n"), Err(FormatError::PinOutOfRange { line: 2, pin: 3, n: 2 })));
    }

    #[test]
    fn distinct_errors() {
        assert!(matches!(parse_hgr("2 2\n1 2\n"), Err(FormatError::LineCount { expected: 2, found: 1 })));
        assert!(matches!(parse_hgr("1 2\n1 x\n"), Err(FormatError::NotNumeric { line: 2, .. })));
        assert!(matches!(parse_hgr("2 2\n\n1 2\n"), Err(FormatError::EmptyNet { line: 2 })));
        assert!(matches!(parse_hgr("1 2 7\n1 2\n"), Err(FormatError::Header { line: 1, .. })));
        assert!(matches!(parse_hgr("% only\n"), Err(FormatError::Header { .. })));
    }

    #[test]
    fn comments_and_vertex_weights() {
        let h = parse_hgr("% c\n1 3 11\n% mid\n2 1 3\n4\n5\n6\n\n").unwrap();
        assert_eq!(h.vertex_weights(), &[4, 5, 6]);
        assert_eq!(h.net_weight(0), 2);
        assert_eq!(write_hgr(&h), "1 3 11\n2 1 3\n4\n5\n6\n");
    }

    #[test]
    fn empty_hypergraph() {
        let h = Hypergraph::new(5, &[]).unwrap();
        assert_eq!(write_hgr(&h), "0 5\n");
        assert_eq!(parse_hgr("0 5\n").unwrap().num_vertices(), 5);
    }

    #[test]
    fn partitions() {
        assert_eq!(parse_partition("0\n0\n1\n1\n", 4, 2).unwrap(), vec![0, 0, 1, 1]);
        assert!(matches!(parse_partition("0\n2\n", 2, 2), Err(FormatError::BlockOutOfRange { line: 2, .. })));
        assert!(matches!(parse_partition("0\n", 2, 2), Err(FormatError::LineCount { .. })));
        assert_eq!(write_partition(&[0, 1, 1]), "0\n1\n1\n");
    }

    #[test]
    fn graphs() {
        let h = graph_to_hypergraph("1 2\n2 3\n1 3\n", None, false).unwrap();
        assert_eq!(h.num_nets(), 3);
        let p = Partition::new(&h, 2, 1.0, vec![0, 1, 1]).unwrap();
        assert_eq!(p.km1(), 2);
        assert!(matches!(graph_to_hypergraph("1 1\n", None, false), Err(FormatError::SelfLoop { .. })));
        assert_eq!(graph_to_hypergraph("", Some(3), false).unwrap().num_nets(), 0);
        let merged = graph_to_hypergraph("1 2\n2 1 4\n", None, true).unwrap();
        assert_eq!((merged.num_nets(), merged.net_weight(0)), (1, 5));
        assert_eq!(graph_to_hypergraph("1 2\n2 1 4\n", None, false).unwrap().num_nets(), 2);
    }

    #[test]
    fn matrix_rows_become_nets() {
        let h = matrix_to_hypergraph("%%MatrixMarket\n3 4 5\n1 1 0.5\n1 3 2\n3 2\n3 4\n3 4\n").unwrap();
        assert_eq!(h.pins(1), &[1, 3]);
        assert!(matches!(matrix_to_hypergraph("2 2 1\n1 3\n"), Err(FormatError::PinOutOfRange { .. })));
        let h = matrix_to_hypergraph("3 4 4\n1 1 0.5\n1 3 2\n3 2\n3 4\n").unwrap();
        assert_eq!(h.num_vertices(), 4);
        assert_eq!(h.num_nets(), 2);
        assert_eq!(h.pins(1), &[1, 3]);
    }
}
