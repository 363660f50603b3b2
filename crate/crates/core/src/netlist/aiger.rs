// SPDX-License-Identifier: Apache-2.0

//! AIGER 1.x reader and writer (ASCII `aag` and binary `aig`).
//!
//! Bad-state literals (the `B` header field) are read as extra outputs.
//! Invariant constraints, justice and fairness sections are rejected, as are
//! latches whose reset value is not 0.

use std::fmt::Write as _;

use thiserror::Error;

use super::{AndGate, Latch, Lit, Netlist, NetlistError, SymbolClass, Var};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AigerError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("byte offset {offset}: {msg}")]
    Binary { offset: usize, msg: String },
    #[error("unsupported AIGER feature: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Structure(#[from] NetlistError),
    #[error("netlist is not in canonical binary numbering: {0}")]
    NotCanonical(String),
}

struct Header {
    binary: bool,
    m: u32,
    i: usize,
    l: usize,
    o: usize,
    a: usize,
    b: usize,
}

/// Line cursor over a byte buffer that remembers line numbers and offsets.
struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn next_line(&mut self) -> Option<&'a str> {
        if self.pos >= self.data.len() {
            return None;
        }
        let start = self.pos;
        let end = self.data[start..].iter().position(|&b| b == b'\n').map_or(self.data.len(), |p| start + p);
        self.pos = end + 1;
        self.line += 1;
        let raw = &self.data[start..end];
        let raw = raw.strip_suffix(b"\r").unwrap_or(raw);
        std::str::from_utf8(raw).ok().or(Some("\u{FFFD}"))
    }

    fn err(&self, msg: impl Into<String>) -> AigerError {
        AigerError::Syntax { line: self.line, msg: msg.into() }
    }

    fn expect_line(&mut self, what: &str) -> Result<&'a str, AigerError> {
        self.next_line().ok_or_else(|| AigerError::Syntax { line: self.line + 1, msg: format!("missing {what}") })
    }
}

fn parse_nums(cur: &Cursor, line: &str, count: std::ops::RangeInclusive<usize>) -> Result<Vec<u32>, AigerError> {
    let nums = line
        .split_ascii_whitespace()
        .map(|t| t.parse::<u32>().map_err(|_| cur.err(format!("expected unsigned integer, got `{t}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    if !count.contains(&nums.len()) {
        return Err(cur.err(format!("expected {count:?} numbers, got {}", nums.len())));
    }
    Ok(nums)
}

fn parse_header(cur: &mut Cursor) -> Result<Header, AigerError> {
    let line = cur.expect_line("header")?;
    let mut parts = line.split_ascii_whitespace();
    let binary = match parts.next() {
        Some("aag") => false,
        Some("aig") => true,
        _ => return Err(cur.err("header must start with `aag` or `aig`")),
    };
    let rest: Vec<&str> = parts.collect();
    let nums = parse_nums(cur, &rest.join(" "), 5..=9)?;
    if nums.len() > 5 && nums[6..].iter().any(|&x| x != 0) {
        return Err(AigerError::Unsupported("invariant constraints, justice or fairness sections".into()));
    }
    let h = Header {
        binary,
        m: nums[0],
        i: nums[1] as usize,
        l: nums[2] as usize,
        o: nums[3] as usize,
        a: nums[4] as usize,
        b: nums.get(5).copied().unwrap_or(0) as usize,
    };
    if (h.i + h.l + h.a) as u64 > h.m as u64 {
        return Err(cur.err(format!("M={} smaller than I+L+A={}", h.m, h.i + h.l + h.a)));
    }
    Ok(h)
}

fn check_lit(cur: &Cursor, h: &Header, code: u32) -> Result<Lit, AigerError> {
    if code / 2 > h.m {
        return Err(cur.err(format!("literal {code} exceeds maximum variable {}", h.m)));
    }
    Ok(Lit::from_code(code))
}

fn check_def(cur: &Cursor, h: &Header, code: u32) -> Result<Var, AigerError> {
    let lit = check_lit(cur, h, code)?;
    if lit.is_negated() || lit.is_const() {
        return Err(cur.err(format!("literal {code} cannot be defined")));
    }
    Ok(lit.var())
}

fn parse_latch(cur: &Cursor, h: &Header, nums: &[u32], var: Var) -> Result<Latch, AigerError> {
    let next = check_lit(cur, h, nums[0])?;
    if let Some(&reset) = nums.get(1) {
        if reset != 0 {
            return Err(AigerError::Unsupported(format!(
                "line {}: latch reset value {reset} (only 0 is supported)",
                cur.line
            )));
        }
    }
    Ok(Latch { var, next })
}

fn decode_varint(data: &[u8], pos: &mut usize) -> Result<u32, AigerError> {
    let start = *pos;
    let mut x: u64 = 0;
    let mut shift = 0;
    loop {
        let Some(&b) = data.get(*pos) else {
            return Err(AigerError::Binary { offset: start, msg: "truncated delta encoding".into() });
        };
        *pos += 1;
        x |= ((b & 0x7f) as u64) << shift;
        if b & 0x80 == 0 {
            break;
        }
        shift += 7;
        if shift > 35 {
            return Err(AigerError::Binary { offset: start, msg: "delta encoding overflow".into() });
        }
    }
    u32::try_from(x).map_err(|_| AigerError::Binary { offset: start, msg: "delta too large".into() })
}

fn encode_varint(out: &mut Vec<u8>, mut x: u32) {
    while x >= 0x80 {
        out.push((x as u8 & 0x7f) | 0x80);
        x >>= 7;
    }
    out.push(x as u8);
}

/// Parses ASCII or binary AIGER.
pub fn parse_aiger(bytes: &[u8]) -> Result<Netlist, AigerError> {
    let mut cur = Cursor { data: bytes, pos: 0, line: 0 };
    let h = parse_header(&mut cur)?;

    let mut inputs = Vec::with_capacity(h.i);
    for k in 0..h.i {
        if h.binary {
            inputs.push(Var(k as u32 + 1));
        } else {
            let line = cur.expect_line("input")?;
            let nums = parse_nums(&cur, line, 1..=1)?;
            inputs.push(check_def(&cur, &h, nums[0])?);
        }
    }

    let mut latches = Vec::with_capacity(h.l);
    for k in 0..h.l {
        let line = cur.expect_line("latch")?;
        if h.binary {
            let nums = parse_nums(&cur, line, 1..=2)?;
            let var = Var((h.i + k) as u32 + 1);
            latches.push(parse_latch(&cur, &h, &nums, var)?);
        } else {
            let nums = parse_nums(&cur, line, 2..=3)?;
            let var = check_def(&cur, &h, nums[0])?;
            latches.push(parse_latch(&cur, &h, &nums[1..], var)?);
        }
    }

    let mut outputs = Vec::with_capacity(h.o + h.b);
    for _ in 0..h.o + h.b {
        let line = cur.expect_line("output")?;
        let nums = parse_nums(&cur, line, 1..=1)?;
        outputs.push(check_lit(&cur, &h, nums[0])?);
    }

    let mut gates = Vec::with_capacity(h.a);
    if h.binary {
        let mut pos = cur.pos;
        for k in 0..h.a {
            let lhs = 2 * (h.i + h.l + k + 1) as u32;
            let at = pos;
            let d0 = decode_varint(bytes, &mut pos)?;
            let d1 = decode_varint(bytes, &mut pos)?;
            let rhs0 = lhs.checked_sub(d0);
            let rhs1 = rhs0.and_then(|r| r.checked_sub(d1));
            let (Some(rhs0), Some(rhs1)) = (rhs0, rhs1) else {
                return Err(AigerError::Binary { offset: at, msg: "gate delta underflow".into() });
            };
            if d0 == 0 {
                return Err(AigerError::Binary { offset: at, msg: "gate refers to itself".into() });
            }
            gates.push(AndGate { var: Var(lhs / 2), lhs: Lit::from_code(rhs0), rhs: Lit::from_code(rhs1) });
        }
        cur.pos = pos;
    } else {
        for _ in 0..h.a {
            let line = cur.expect_line("and gate")?;
            let nums = parse_nums(&cur, line, 3..=3)?;
            gates.push(AndGate {
                var: check_def(&cur, &h, nums[0])?,
                lhs: check_lit(&cur, &h, nums[1])?,
                rhs: check_lit(&cur, &h, nums[2])?,
            });
        }
    }

    let mut netlist = Netlist::from_records(h.m, inputs, latches, gates, outputs)?;

    // symbol table and comments
    let mut bad_names: Vec<Option<String>> = vec![None; h.b];
    let mut in_comments = false;
    while let Some(line) = cur.next_line() {
        if in_comments {
            netlist.comments.push(line.to_owned());
            continue;
        }
        if line == "c" {
            in_comments = true;
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let (tag, name) = line.split_once(' ').ok_or_else(|| cur.err(format!("malformed symbol line `{line}`")))?;
        let mut chars = tag.chars();
        let kind = chars.next().unwrap_or(' ');
        let pos: usize =
            chars.as_str().parse().map_err(|_| cur.err(format!("malformed symbol position in `{tag}`")))?;
        let (slot, limit) = match kind {
            'i' => (netlist.explicit_names_mut(SymbolClass::Input), h.i),
            'l' => (netlist.explicit_names_mut(SymbolClass::Latch), h.l),
            'o' => (netlist.explicit_names_mut(SymbolClass::Output), h.o),
            'b' => (&mut bad_names, h.b),
            'c' | 'j' | 'f' => return Err(AigerError::Unsupported(format!("symbol for `{kind}` section"))),
            _ => return Err(cur.err(format!("unknown symbol kind `{kind}`"))),
        };
        if pos >= limit {
            return Err(cur.err(format!("symbol position {pos} out of range")));
        }
        if slot[pos].is_some() {
            return Err(cur.err(format!("duplicate symbol for {tag}")));
        }
        slot[pos] = Some(name.to_owned());
    }
    for (k, name) in bad_names.into_iter().enumerate() {
        netlist.output_names[h.o + k] = name.or_else(|| Some(format!("b{k}")));
    }
    netlist.validate()?;
    Ok(netlist)
}

fn write_symbols_and_comments(n: &Netlist, out: &mut String) {
    for class in [SymbolClass::Input, SymbolClass::Latch, SymbolClass::Output] {
        for (i, name) in n.explicit_names(class).iter().enumerate() {
            if let Some(name) = name {
                let _ = writeln!(out, "{}{} {}", class.prefix(), i, name);
            }
        }
    }
    if !n.comments.is_empty() {
        out.push_str("c\n");
        for c in &n.comments {
            out.push_str(c);
            out.push('\n');
        }
    }
}

/// Canonical ASCII AIGER.
pub fn serialize_aiger(n: &Netlist) -> Vec<u8> {
    let mut out = String::new();
    let _ =
        writeln!(out, "aag {} {} {} {} {}", n.max_var, n.inputs.len(), n.latches.len(), n.outputs.len(), n.gates.len());
    for v in &n.inputs {
        let _ = writeln!(out, "{}", v.lit());
    }
    for l in &n.latches {
        let _ = writeln!(out, "{} {}", l.var.lit(), l.next);
    }
    for o in &n.outputs {
        let _ = writeln!(out, "{o}");
    }
    for g in &n.gates {
        let _ = writeln!(out, "{} {} {}", g.var.lit(), g.lhs, g.rhs);
    }
    write_symbols_and_comments(n, &mut out);
    out.into_bytes()
}

/// Binary AIGER. Requires the canonical numbering (inputs, then latches,
/// then gates, each gate above its children).
pub fn serialize_binary(n: &Netlist) -> Result<Vec<u8>, AigerError> {
    let (ni, nl) = (n.inputs.len() as u32, n.latches.len() as u32);
    for (k, v) in n.inputs.iter().enumerate() {
        if v.0 != k as u32 + 1 {
            return Err(AigerError::NotCanonical(format!("input {k} is variable {}", v.0)));
        }
    }
    for (k, l) in n.latches.iter().enumerate() {
        if l.var.0 != ni + k as u32 + 1 {
            return Err(AigerError::NotCanonical(format!("latch {k} is variable {}", l.var.0)));
        }
    }
    for (k, g) in n.gates.iter().enumerate() {
        if g.var.0 != ni + nl + k as u32 + 1 {
            return Err(AigerError::NotCanonical(format!("gate {k} is variable {}", g.var.0)));
        }
    }
    let mut out =
        format!("aig {} {} {} {} {}\n", ni + nl + n.gates.len() as u32, ni, nl, n.outputs.len(), n.gates.len())
            .into_bytes();
    for l in &n.latches {
        out.extend_from_slice(format!("{}\n", l.next).as_bytes());
    }
    for o in &n.outputs {
        out.extend_from_slice(format!("{o}\n").as_bytes());
    }
    for g in &n.gates {
        let lhs = g.var.lit().code();
        let (r0, r1) = (g.lhs.code().max(g.rhs.code()), g.lhs.code().min(g.rhs.code()));
        encode_varint(&mut out, lhs - r0);
        encode_varint(&mut out, r0 - r1);
    }
    let mut tail = String::new();
    write_symbols_and_comments(n, &mut tail);
    out.extend_from_slice(tail.as_bytes());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_output() {
        let n = parse_aiger(b"aag 0 0 0 1 0\n0\n").unwrap();
        assert_eq!(n.outputs(), &[Lit::FALSE]);
        assert_eq!(n.num_latches(), 0);
    }

    #[test]
    fn identity_input() {
        let n = parse_aiger(b"aag 1 1 0 1 0\n2\n2\n").unwrap();
        assert_eq!(n.inputs(), &[Var(1)]);
        assert_eq!(n.outputs(), &[Var(1).lit()]);
        assert_eq!(n.input_name(0), "i0");
    }

    #[test]
    fn toggle_with_symbols_and_comments_round_trips() {
        let text = "aag 1 0 1 1 0\n2 3\n2\nl0 t\no0 bad\nc\nsome comment\n";
        let n = parse_aiger(text.as_bytes()).unwrap();
        assert_eq!(n.latch_name(0), "t");
        assert_eq!(n.comments(), &["some comment".to_string()]);
        assert_eq!(String::from_utf8(serialize_aiger(&n)).unwrap(), text);
    }

    #[test]
    fn header_errors() {
        assert!(matches!(parse_aiger(b"aagx 0 0 0 0 0\n"), Err(AigerError::Syntax { line: 1, .. })));
        assert!(matches!(parse_aiger(b"aag 0 0 0\n"), Err(AigerError::Syntax { line: 1, .. })));
        assert!(matches!(parse_aiger(b"aag 1 2 0 0 0\n2\n4\n"), Err(AigerError::Syntax { line: 1, .. })));
    }

    #[test]
    fn dangling_literal_names_line() {
        let err = parse_aiger(b"aag 1 1 0 1 0\n2\n6\n").unwrap_err();
        assert_eq!(err, AigerError::Syntax { line: 3, msg: "literal 6 exceeds maximum variable 1".into() });
        let err = parse_aiger(b"aag 2 1 0 1 0\n2\n4\n").unwrap_err();
        assert_eq!(err, AigerError::Structure(NetlistError::Dangling(Lit::from_code(4))));
    }

    #[test]
    fn duplicate_definition() {
        let err = parse_aiger(b"aag 2 1 1 0 0\n2\n2 2\n").unwrap_err();
        assert_eq!(err, AigerError::Structure(NetlistError::Redefined(Var(1))));
    }

    #[test]
    fn rejects_constraints_and_nonzero_reset() {
        assert!(matches!(parse_aiger(b"aag 1 1 0 0 0 0 1\n2\n2\n"), Err(AigerError::Unsupported(_))));
        assert!(matches!(parse_aiger(b"aag 1 0 1 0 0\n2 3 1\n"), Err(AigerError::Unsupported(_))));
        // explicit zero reset is fine
        parse_aiger(b"aag 1 0 1 0 0\n2 3 0\n").unwrap();
    }

    #[test]
    fn bad_section_becomes_outputs() {
        let n = parse_aiger(b"aag 1 1 0 0 0 1\n2\n2\nb0 prop\n").unwrap();
        assert_eq!(n.outputs().len(), 1);
        assert_eq!(n.output_name(0), "prop");
    }

    #[test]
    fn binary_round_trip() {
        // a & !b latch
        let mut n = Netlist::new();
        let a = n.add_input(Some("a"));
        let b = n.add_input(Some("b"));
        let l = n.add_latch(Some("q"));
        let g = n.and(a, !b);
        let h = n.and(g, l);
        n.set_next(l.var(), g);
        n.add_output(h, Some("out"));
        let bin = serialize_binary(&n).unwrap();
        let back = parse_aiger(&bin).unwrap();
        assert_eq!(back, n);
    }

    #[test]
    fn binary_truncated_gate_reports_offset() {
        let err = parse_aiger(b"aig 3 2 0 1 1\n6\n").unwrap_err();
        assert!(matches!(err, AigerError::Binary { .. }));
    }
}
