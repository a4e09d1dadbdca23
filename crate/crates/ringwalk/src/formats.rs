//! Text formats: circuits, compiled programs, trajectory dumps, sparse
//! matrices and CSV tables.

use std::fmt::Write as _;

use ringwalk_core::dynamics::GapReport;
use ringwalk_core::hamspace::SparseHamiltonian;
use ringwalk_core::qcore::{Amplitude, Circuit, Gate};
use ringwalk_core::ring::{parse, render};
use ringwalk_core::rules::{GateEvent, Trajectory};
use ringwalk_core::vprog::VProgram;
use ringwalk_core::{Error, Result};

/// Significant digits in every numeric output.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// `%.12g`: fixed notation for decimal exponents in `[-5, 12)`, scientific
/// otherwise, trailing zeros trimmed.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific form has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), sign, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Non-blank, comment-stripped lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_index(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| parse_err(line, 1, format!("expected a {what}, found {tok:?}")))
}

/// Reads `qubits <n>` followed by `H q` / `CS c t` lines.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut lines = content_lines(text);
    let (first, header) = lines.next().ok_or_else(|| parse_err(1, 1, "empty circuit file"))?;
    let n = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["qubits", n] => parse_index(n, first, "qubit count")?,
        _ => return Err(parse_err(first, 1, "first line must be `qubits <n>`")),
    };
    let mut gates = Vec::new();
    for (no, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let gate = match toks.as_slice() {
            ["H", q] => Gate::h(parse_index(q, no, "qubit index")?),
            ["CS", c, t] => Gate::cs(parse_index(c, no, "qubit index")?, parse_index(t, no, "qubit index")?),
            ["H", ..] | ["CS", ..] => return Err(parse_err(no, 1, format!("wrong operand count in {line:?}"))),
            [name, ..] => return Err(Error::UnsupportedGate(format!("{name} (line {no})"))),
            [] => unreachable!("blank lines are skipped"),
        };
        gate.validate(n).map_err(|e| parse_err(no, 1, e.to_string()))?;
        gates.push(gate);
    }
    Circuit::new(n, gates)
}

pub fn write_circuit(c: &Circuit) -> String {
    let mut out = format!("qubits {}\n", c.qubits());
    for g in c.gates() {
        match g.wires.as_slice() {
            [q] => writeln!(out, "H {q}"),
            [a, b] => writeln!(out, "CS {a} {b}"),
            _ => unreachable!("circuits hold one- and two-wire gates"),
        }
        .expect("writing to a String");
    }
    out
}

fn bits_str(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn parse_bits(tok: &str, line: usize) -> Result<Vec<bool>> {
    tok.chars()
        .enumerate()
        .map(|(i, c)| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(parse_err(line, i + 1, format!("expected 0 or 1, found {c:?}"))),
        })
        .collect()
}

/// Program file: `qubits`, `iterations`, `swap`, `hadamard` and `order`
/// lines, in that order.
pub fn write_program(p: &VProgram) -> String {
    let order: Vec<String> = p.data_order.iter().map(usize::to_string).collect();
    format!(
        "qubits {}\niterations {}\nswap {}\nhadamard {}\norder {}\n",
        p.n,
        p.iterations,
        bits_str(&p.swap_bits),
        bits_str(&p.hadamard_bits),
        order.join(" ")
    )
}

pub fn parse_program(text: &str) -> Result<VProgram> {
    let lines: Vec<(usize, &str)> = content_lines(text).collect();
    let keys = ["qubits", "iterations", "swap", "hadamard", "order"];
    if lines.len() != keys.len() {
        return Err(parse_err(
            lines.get(keys.len()).map_or(1, |l| l.0),
            1,
            format!("expected {} program lines, found {}", keys.len(), lines.len()),
        ));
    }
    let mut fields = Vec::new();
    for (&(no, line), key) in lines.iter().zip(keys) {
        let (k, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        if k != key {
            return Err(parse_err(no, 1, format!("expected `{key}`, found `{k}`")));
        }
        fields.push((no, rest.trim()));
    }
    let n = parse_index(fields[0].1, fields[0].0, "qubit count")?;
    let iterations = parse_index(fields[1].1, fields[1].0, "iteration count")?;
    let swap_bits = parse_bits(fields[2].1, fields[2].0)?;
    let hadamard_bits = parse_bits(fields[3].1, fields[3].0)?;
    let data_order = fields[4]
        .1
        .split_whitespace()
        .map(|t| parse_index(t, fields[4].0, "qubit index"))
        .collect::<Result<Vec<_>>>()?;
    let p = VProgram {
        n,
        swap_bits,
        hadamard_bits,
        data_order,
        iterations,
    };
    p.validate()?;
    Ok(p)
}

/// One step of a trajectory dump.
#[derive(Debug, Clone, PartialEq)]
pub struct DumpRecord {
    pub index: usize,
    /// Cursor line and bit line joined by a newline.
    pub glyphs: String,
    pub event: Option<GateEvent>,
}

impl DumpRecord {
    pub fn from_trajectory(t: &Trajectory) -> Vec<DumpRecord> {
        t.steps
            .iter()
            .enumerate()
            .map(|(i, c)| DumpRecord {
                index: i,
                glyphs: render(c),
                event: t.events.get(i).copied().flatten(),
            })
            .collect()
    }
}

/// Each record is a header line `<index>` or `<index> <tag>` followed by the
/// two glyph lines.
pub fn write_dump(records: &[DumpRecord]) -> String {
    let mut out = String::new();
    for r in records {
        match &r.event {
            Some(e) => writeln!(out, "{} {}", r.index, e),
            None => writeln!(out, "{}", r.index),
        }
        .expect("writing to a String");
        out.push_str(&r.glyphs);
        out.push('\n');
    }
    out
}

pub fn parse_dump(text: &str) -> Result<Vec<DumpRecord>> {
    let lines: Vec<&str> = text.lines().collect();
    if !lines.len().is_multiple_of(3) {
        return Err(parse_err(lines.len(), 1, "dump records must be three lines each"));
    }
    let mut out = Vec::with_capacity(lines.len() / 3);
    for (k, rec) in lines.chunks(3).enumerate() {
        let no = 3 * k + 1;
        let (idx, tag) = rec[0].split_once(' ').unwrap_or((rec[0], ""));
        let index = parse_index(idx, no, "step index")?;
        let event = if tag.is_empty() {
            None
        } else {
            Some(GateEvent::parse_tag(tag).map_err(|e| parse_err(no, idx.len() + 2, e.to_string()))?)
        };
        let glyphs = format!("{}\n{}", rec[1], rec[2]);
        parse(&glyphs).map_err(|e| match e {
            Error::Parse { line, column, message } => parse_err(no + line, column, message),
            other => other,
        })?;
        out.push(DumpRecord { index, glyphs, event });
    }
    Ok(out)
}

/// `row col re im` per stored entry, sorted by `(row, col)`.
pub fn write_sparse(h: &SparseHamiltonian) -> String {
    let mut entries: Vec<&(u32, u32, Amplitude)> = h.entries().iter().collect();
    entries.sort_by_key(|e| (e.0, e.1));
    let mut out = String::new();
    for (r, c, a) in entries {
        writeln!(out, "{} {} {} {}", r, c, fmt_num(a.re), fmt_num(a.im)).expect("writing to a String");
    }
    out
}

pub fn gap_csv(report: &GapReport) -> String {
    let mut out = String::from("s,gap\n");
    for (s, g) in report.s.iter().zip(&report.gaps) {
        writeln!(out, "{},{}", fmt_num(*s), fmt_num(*g)).expect("writing to a String");
    }
    out
}

pub fn amplitude_csv(rows: &[(f64, Amplitude)]) -> String {
    let mut out = String::from("t,abs_amp,re,im\n");
    for (t, a) in rows {
        writeln!(
            out,
            "{},{},{},{}",
            fmt_num(*t),
            fmt_num(a.norm()),
            fmt_num(a.re),
            fmt_num(a.im)
        )
        .expect("writing to a String");
    }
    out
}
