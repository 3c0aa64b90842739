//! Structure serialization: canonical JSON, edge-list text and graph6.
//!
//! JSON layout:
//!
//! ```json
//! {
//!   "vertices": 3,
//!   "signature": [2],
//!   "names": ["E"],
//!   "relations": [[[0,1],[1,0]]],
//!   "extended_signature": [1],
//!   "extended_names": ["red"],
//!   "extended_relations": [[[2]]]
//! }
//! ```
//!
//! `names`, `extended_*` are optional. Tuples are written sorted.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::structure::{GraphView, Lift, Signature, Structure, Tuple};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDoc {
    vertices: usize,
    signature: Vec<usize>,
    relations: Vec<Vec<Vec<usize>>>,
    #[serde(default)]
    names: Option<Vec<String>>,
    #[serde(default)]
    extended_signature: Option<Vec<usize>>,
    #[serde(default)]
    extended_relations: Option<Vec<Vec<Vec<usize>>>>,
    #[serde(default)]
    extended_names: Option<Vec<String>>,
}

#[derive(Clone, Copy)]
enum Seg<'a> {
    Key(&'a str),
    Index(usize),
}

/// Line and column (1-based) of the value at `path` in valid JSON `text`.
fn locate(text: &str, path: &[Seg]) -> (usize, usize) {
    let b = text.as_bytes();
    let mut pos = 0;
    let ws = |pos: &mut usize| {
        while *pos < b.len() && b[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    fn skip_string(b: &[u8], pos: &mut usize) {
        *pos += 1;
        while *pos < b.len() && b[*pos] != b'"' {
            if b[*pos] == b'\\' {
                *pos += 1;
            }
            *pos += 1;
        }
        *pos += 1;
    }
    fn skip_value(b: &[u8], pos: &mut usize) {
        match b.get(*pos) {
            Some(b'"') => skip_string(b, pos),
            Some(b'[') | Some(b'{') => {
                let mut depth = 0;
                while *pos < b.len() {
                    match b[*pos] {
                        b'"' => {
                            skip_string(b, pos);
                            continue;
                        }
                        b'[' | b'{' => depth += 1,
                        b']' | b'}' => {
                            depth -= 1;
                            if depth == 0 {
                                *pos += 1;
                                return;
                            }
                        }
                        _ => {}
                    }
                    *pos += 1;
                }
            }
            _ => {
                while *pos < b.len()
                    && !matches!(b[*pos], b',' | b']' | b'}')
                    && !b[*pos].is_ascii_whitespace()
                {
                    *pos += 1;
                }
            }
        }
    }
    ws(&mut pos);
    'outer: for seg in path {
        match (*seg, b.get(pos)) {
            (Seg::Key(k), Some(b'{')) => {
                pos += 1;
                loop {
                    ws(&mut pos);
                    if b.get(pos) != Some(&b'"') {
                        break 'outer;
                    }
                    let start = pos + 1;
                    skip_string(b, &mut pos);
                    let key = &text[start..pos - 1];
                    ws(&mut pos);
                    pos += 1;
                    ws(&mut pos);
                    if key == k {
                        continue 'outer;
                    }
                    skip_value(b, &mut pos);
                    ws(&mut pos);
                    if b.get(pos) == Some(&b',') {
                        pos += 1;
                    }
                }
            }
            (Seg::Index(i), Some(b'[')) => {
                pos += 1;
                for _ in 0..i {
                    ws(&mut pos);
                    skip_value(b, &mut pos);
                    ws(&mut pos);
                    if b.get(pos) == Some(&b',') {
                        pos += 1;
                    }
                }
                ws(&mut pos);
            }
            _ => break,
        }
    }
    let before = &text[..pos.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

fn at(text: &str, path: &[Seg], msg: impl Into<String>) -> Error {
    let (line, column) = locate(text, path);
    Error::parse(line, column, msg)
}

fn check_slots(
    text: &str,
    n: usize,
    sig_key: &'static str,
    rel_key: &'static str,
    names_key: &'static str,
    arities: &[usize],
    rels: &[Vec<Vec<usize>>],
    names: Option<&Vec<String>>,
) -> Result<Signature> {
    for (i, &a) in arities.iter().enumerate() {
        if a == 0 {
            return Err(at(
                text,
                &[Seg::Key(sig_key), Seg::Index(i)],
                "arity must be at least 1",
            ));
        }
    }
    if rels.len() != arities.len() {
        return Err(at(
            text,
            &[Seg::Key(rel_key)],
            format!(
                "{} relations for {} signature slots",
                rels.len(),
                arities.len()
            ),
        ));
    }
    for (s, tuples) in rels.iter().enumerate() {
        for (t, tuple) in tuples.iter().enumerate() {
            if tuple.len() != arities[s] {
                return Err(at(
                    text,
                    &[Seg::Key(rel_key), Seg::Index(s), Seg::Index(t)],
                    format!(
                        "tuple of length {} in slot {s} of arity {}",
                        tuple.len(),
                        arities[s]
                    ),
                ));
            }
            for (e, &v) in tuple.iter().enumerate() {
                if v >= n {
                    return Err(at(
                        text,
                        &[
                            Seg::Key(rel_key),
                            Seg::Index(s),
                            Seg::Index(t),
                            Seg::Index(e),
                        ],
                        format!("vertex {v} out of range for {n} vertices"),
                    ));
                }
            }
        }
    }
    match names {
        None => Signature::new(arities.to_vec()),
        Some(names) => Signature::with_names(arities.to_vec(), names.clone())
            .map_err(|e| at(text, &[Seg::Key(names_key)], e.to_string())),
    }
}

/// Parse a JSON structure, including any extended slots.
pub fn parse_lift_json(text: &str) -> Result<Lift> {
    let raw: RawDoc = serde_json::from_str(text)
        .map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))?;
    let n = raw.vertices;
    let sig = check_slots(
        text,
        n,
        "signature",
        "relations",
        "names",
        &raw.signature,
        &raw.relations,
        raw.names.as_ref(),
    )?;
    let base = Structure::new(n, sig, raw.relations)?;
    let (ext_arities, ext_rels) = match (raw.extended_signature, raw.extended_relations) {
        (None, None) => {
            if raw.extended_names.is_some() {
                return Err(at(
                    text,
                    &[Seg::Key("extended_names")],
                    "extended_names without extended_signature",
                ));
            }
            return Ok(Lift::trivial(base));
        }
        (Some(s), Some(r)) => (s, r),
        (Some(s), None) if s.is_empty() => (s, Vec::new()),
        _ => {
            return Err(Error::parse(
                1,
                1,
                "extended_signature and extended_relations must appear together",
            ))
        }
    };
    let ext_sig = check_slots(
        text,
        n,
        "extended_signature",
        "extended_relations",
        "extended_names",
        &ext_arities,
        &ext_rels,
        raw.extended_names.as_ref(),
    )?;
    Lift::new(base, ext_sig, ext_rels)
}

/// Parse any supported text format. JSON lifts are returned with their
/// extended slots appended.
pub fn parse_structure(text: &str) -> Result<Structure> {
    if text.trim_start().starts_with('{') {
        Ok(parse_lift_json(text)?.to_structure())
    } else {
        parse_edge_list(text)
    }
}

fn push_slots(out: &mut String, key: &str, names_key: &str, sig: &Signature) {
    let arities: Vec<String> = sig.arities().iter().map(|a| a.to_string()).collect();
    out.push_str(&format!("  \"{key}\": [{}],\n", arities.join(", ")));
    if let Some(names) = sig.names() {
        let quoted: Vec<String> = names
            .iter()
            .map(|n| serde_json::to_string(n).expect("strings serialize"))
            .collect();
        out.push_str(&format!("  \"{names_key}\": [{}],\n", quoted.join(", ")));
    }
}

fn push_relations(out: &mut String, key: &str, rels: &[Vec<Tuple>], last: bool) {
    out.push_str(&format!("  \"{key}\": ["));
    for (i, tuples) in rels.iter().enumerate() {
        out.push_str(if i == 0 { "\n    [" } else { ",\n    [" });
        let items: Vec<String> = tuples
            .iter()
            .map(|t| {
                let xs: Vec<String> = t.iter().map(|v| v.to_string()).collect();
                format!("[{}]", xs.join(","))
            })
            .collect();
        out.push_str(&items.join(", "));
        out.push(']');
    }
    if !rels.is_empty() {
        out.push_str("\n  ");
    }
    out.push(']');
    out.push_str(if last { "\n" } else { ",\n" });
}

pub fn serialize_structure(s: &Structure) -> String {
    let mut out = String::from("{\n");
    out.push_str(&format!("  \"vertices\": {},\n", s.n()));
    push_slots(&mut out, "signature", "names", s.signature());
    push_relations(&mut out, "relations", s.relations(), true);
    out.push_str("}\n");
    out
}

pub fn serialize_lift(x: &Lift) -> String {
    let s = x.base();
    let mut out = String::from("{\n");
    out.push_str(&format!("  \"vertices\": {},\n", s.n()));
    push_slots(&mut out, "signature", "names", s.signature());
    push_relations(&mut out, "relations", s.relations(), false);
    push_slots(
        &mut out,
        "extended_signature",
        "extended_names",
        x.ext_signature(),
    );
    push_relations(&mut out, "extended_relations", x.ext_relations(), true);
    out.push_str("}\n");
    out
}

/// Edge-list text: vertex count, `;`, then `a-b` pairs; `#` starts a comment.
pub fn parse_edge_list(text: &str) -> Result<Structure> {
    let mut tokens: Vec<(usize, usize, &str)> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        let mut col = 0;
        for piece in body.split_inclusive(|c: char| c.is_whitespace() || c == ';') {
            let start = col;
            col += piece.len();
            let trimmed = piece.trim_end_matches(|c: char| c.is_whitespace());
            let (word, semi) = match trimmed.strip_suffix(';') {
                Some(w) => (w, true),
                None => (trimmed, false),
            };
            if !word.is_empty() {
                tokens.push((ln + 1, start + 1, word));
            }
            if semi {
                tokens.push((ln + 1, start + word.len() + 1, ";"));
            }
        }
    }
    let mut it = tokens.into_iter();
    let Some((l, c, first)) = it.next() else {
        return Err(Error::parse(1, 1, "empty input"));
    };
    let n: usize = first
        .parse()
        .map_err(|_| Error::parse(l, c, format!("expected vertex count, got {first:?}")))?;
    match it.next() {
        Some((_, _, ";")) => {}
        Some((l, c, t)) => return Err(Error::parse(l, c, format!("expected ';', got {t:?}"))),
        None => {
            return Err(Error::parse(
                l,
                c + first.len(),
                "expected ';' after vertex count",
            ))
        }
    }
    let mut edges = Vec::new();
    for (l, c, tok) in it {
        let parsed = tok
            .split_once('-')
            .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)));
        let Some((a, b)) = parsed else {
            return Err(Error::parse(
                l,
                c,
                format!("expected an edge a-b, got {tok:?}"),
            ));
        };
        for v in [a, b] {
            if v >= n {
                return Err(Error::parse(
                    l,
                    c,
                    format!("vertex {v} out of range for {n} vertices"),
                ));
            }
        }
        if a == b {
            return Err(Error::parse(l, c, format!("loop at vertex {a}")));
        }
        edges.push((a, b));
    }
    Structure::graph(n, &edges)
}

pub fn serialize_edge_list(g: &GraphView) -> String {
    let edges: Vec<String> = g.edges().iter().map(|(a, b)| format!("{a}-{b}")).collect();
    if edges.is_empty() {
        format!("{};\n", g.n())
    } else {
        format!("{}; {}\n", g.n(), edges.join(" "))
    }
}

/// Decode one graph6 line (an optional `>>graph6<<` header is skipped).
pub fn parse_graph6_line(line: &str, line_no: usize) -> Result<Structure> {
    let body = line.trim_end_matches(['\r', '\n']);
    let body = body.strip_prefix(">>graph6<<").unwrap_or(body);
    let bytes = body.as_bytes();
    let err = |col: usize, msg: &str| Error::parse(line_no, col + 1, msg.to_string());
    for (i, &c) in bytes.iter().enumerate() {
        if !(63..=126).contains(&c) {
            return Err(err(i, "byte outside the graph6 range 63..=126"));
        }
    }
    let (n, mut pos) = match bytes {
        [] => return Err(err(0, "empty graph6 line")),
        [126, 126, rest @ ..] => {
            if rest.len() < 6 {
                return Err(err(2, "truncated vertex count"));
            }
            let n = rest[..6]
                .iter()
                .fold(0usize, |acc, &c| (acc << 6) | (c - 63) as usize);
            (n, 8)
        }
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(err(1, "truncated vertex count"));
            }
            let n = rest[..3]
                .iter()
                .fold(0usize, |acc, &c| (acc << 6) | (c - 63) as usize);
            (n, 4)
        }
        [c, ..] => ((c - 63) as usize, 1),
    };
    let bits_needed = n * n.saturating_sub(1) / 2;
    let bytes_needed = bits_needed.div_ceil(6);
    if bytes.len() != pos + bytes_needed {
        return Err(err(
            bytes.len().min(pos + bytes_needed),
            &format!(
                "expected {} adjacency bytes, found {}",
                bytes_needed,
                bytes.len() - pos
            ),
        ));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = bytes[pos + k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    pos += bytes_needed;
    debug_assert_eq!(pos, bytes.len());
    Structure::graph(n, &edges)
}

/// Decode one graph per non-empty line.
pub fn parse_graph6(text: &str) -> Result<Vec<Structure>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_graph6_line(l.trim(), i + 1))
        .collect()
}

pub fn to_graph6(g: &GraphView) -> String {
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
    let mut acc = 0u8;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            k += 1;
            if k % 6 == 0 {
                out.push(acc + 63);
                acc = 0;
            }
        }
    }
    if k % 6 != 0 {
        out.push((acc << (6 - k % 6)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}
