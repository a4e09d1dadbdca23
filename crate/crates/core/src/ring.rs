//! The ring of eight-state sites: layout, glyph configurations, the initial
//! state `psi_0`, and the two-line text form.
//!
//! Sites are numbered from the top of the swap region, through the data
//! region, to the end of the Hadamard region; site `K - 1` neighbours site 0.
//! Only the permutation of data labels is tracked here; the data register's
//! quantum state lives with whoever consumes the gate events.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::vprog::{Cursor, VProgram};

/// Label of one data qubit, a lowercase ASCII letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DataLabel(u8);

impl DataLabel {
    pub const MAX_LABELS: usize = 26;

    pub fn new(c: char) -> Result<Self> {
        if c.is_ascii_lowercase() {
            Ok(Self(c as u8 - b'a'))
        } else {
            Err(Error::Domain(format!("data label {c:?} is not in 'a'..='z'")))
        }
    }

    pub fn from_index(i: usize) -> Result<Self> {
        if i < Self::MAX_LABELS {
            Ok(Self(i as u8))
        } else {
            Err(Error::Capacity {
                what: "data label index",
                limit: Self::MAX_LABELS - 1,
            })
        }
    }

    #[inline]
    pub fn as_char(self) -> char {
        (b'a' + self.0) as char
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// `a, b, c, ...` for qubits `0, 1, 2, ...`.
    pub fn defaults(n: usize) -> Result<Vec<DataLabel>> {
        (0..n).map(DataLabel::from_index).collect()
    }

    pub fn parse_list(s: &str) -> Result<Vec<DataLabel>> {
        s.chars().map(DataLabel::new).collect()
    }
}

impl fmt::Display for DataLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Content of the program/data line at one site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bit {
    Zero,
    One,
    Data(DataLabel),
}

impl Bit {
    pub fn from_bool(b: bool) -> Bit {
        if b {
            Bit::One
        } else {
            Bit::Zero
        }
    }
}

/// Cursor state plus line content of one site, packed into a byte: the low
/// two bits hold the cursor, the rest hold 0, 1, or `2 + label`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Glyph(u8);

impl Glyph {
    pub fn new(cursor: Cursor, bit: Bit) -> Glyph {
        let b = match bit {
            Bit::Zero => 0,
            Bit::One => 1,
            Bit::Data(l) => 2 + l.0,
        };
        Glyph((b << 2) | cursor.bits())
    }

    #[inline]
    pub fn cursor(self) -> Cursor {
        Cursor::from_bits(self.0)
    }

    #[inline]
    pub fn bit(self) -> Bit {
        match self.0 >> 2 {
            0 => Bit::Zero,
            1 => Bit::One,
            l => Bit::Data(DataLabel(l - 2)),
        }
    }

    #[inline]
    pub fn with_cursor(self, cursor: Cursor) -> Glyph {
        Glyph((self.0 & !0b11) | cursor.bits())
    }

    #[inline]
    pub fn with_bit(self, bit: Bit) -> Glyph {
        Glyph::new(self.cursor(), bit)
    }
}

impl fmt::Debug for Glyph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", cursor_char(self.cursor()), bit_char(self.bit()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Swap,
    Data,
    Hadamard,
}

/// Region sizes of the ring; regions run swap, data, Hadamard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingLayout {
    pub swap_len: usize,
    pub data_len: usize,
    pub hadamard_len: usize,
}

impl RingLayout {
    pub fn new(swap_len: usize, data_len: usize, hadamard_len: usize) -> Result<Self> {
        if data_len < 2 {
            return Err(Error::Degenerate("data region needs at least two sites"));
        }
        if swap_len < 2 {
            return Err(Error::Degenerate("swap region needs at least two sites"));
        }
        if hadamard_len < 1 {
            return Err(Error::Degenerate("Hadamard region is empty"));
        }
        Ok(Self {
            swap_len,
            data_len,
            hadamard_len,
        })
    }

    /// Total site count `K`.
    #[inline]
    pub fn sites(&self) -> usize {
        self.swap_len + self.data_len + self.hadamard_len
    }

    #[inline]
    pub fn next(&self, site: usize) -> usize {
        (site + 1) % self.sites()
    }

    #[inline]
    pub fn prev(&self, site: usize) -> usize {
        (site + self.sites() - 1) % self.sites()
    }

    #[inline]
    pub fn last_swap(&self) -> usize {
        self.swap_len - 1
    }

    #[inline]
    pub fn first_data(&self) -> usize {
        self.swap_len
    }

    #[inline]
    pub fn last_data(&self) -> usize {
        self.swap_len + self.data_len - 1
    }

    #[inline]
    pub fn first_hadamard(&self) -> usize {
        self.swap_len + self.data_len
    }

    #[inline]
    pub fn last_hadamard(&self) -> usize {
        self.sites() - 1
    }

    pub fn region(&self, site: usize) -> Region {
        if site < self.swap_len {
            Region::Swap
        } else if site < self.first_hadamard() {
            Region::Data
        } else {
            Region::Hadamard
        }
    }
}

/// Layout for a program: one swap site more than the program's swap string.
pub fn build_layout(prog: &VProgram) -> Result<RingLayout> {
    prog.validate()?;
    if prog.n < 2 {
        return Err(Error::Degenerate("ring needs at least two data qubits"));
    }
    RingLayout::new(prog.swap_bits.len() + 1, prog.n, prog.hadamard_bits.len())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingConfiguration {
    layout: RingLayout,
    glyphs: Vec<Glyph>,
}

impl RingConfiguration {
    /// Builds and validates a configuration.
    pub fn new(layout: RingLayout, glyphs: Vec<Glyph>) -> Result<Self> {
        let c = Self { layout, glyphs };
        c.validate()?;
        Ok(c)
    }

    /// Construction without validation, for rule applications that preserve
    /// the invariants by construction.
    pub(crate) fn from_parts(layout: RingLayout, glyphs: Vec<Glyph>) -> Self {
        Self { layout, glyphs }
    }

    #[inline]
    pub fn layout(&self) -> &RingLayout {
        &self.layout
    }

    #[inline]
    pub fn glyphs(&self) -> &[Glyph] {
        &self.glyphs
    }

    #[inline]
    pub fn glyph(&self, site: usize) -> Glyph {
        self.glyphs[site]
    }

    /// The single non-empty cursor site.
    pub fn active_site(&self) -> Option<usize> {
        let mut active = self.glyphs.iter().enumerate().filter(|(_, g)| g.cursor().is_active());
        match (active.next(), active.next()) {
            (Some((i, _)), None) => Some(i),
            _ => None,
        }
    }

    /// `(label, site)` pairs in site order.
    pub fn data_perm(&self) -> Vec<(DataLabel, usize)> {
        (self.layout.first_data()..=self.layout.last_data())
            .filter_map(|s| match self.glyphs[s].bit() {
                Bit::Data(l) => Some((l, s)),
                _ => None,
            })
            .collect()
    }

    /// Site currently holding `label`.
    pub fn site_of(&self, label: DataLabel) -> Option<usize> {
        (self.layout.first_data()..=self.layout.last_data()).find(|&s| self.glyphs[s].bit() == Bit::Data(label))
    }

    pub fn swap_bits(&self) -> Vec<bool> {
        self.glyphs[..self.layout.swap_len]
            .iter()
            .map(|g| g.bit() == Bit::One)
            .collect()
    }

    pub fn hadamard_bits(&self) -> Vec<bool> {
        self.glyphs[self.layout.first_hadamard()..]
            .iter()
            .map(|g| g.bit() == Bit::One)
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let l = &self.layout;
        if self.glyphs.len() != l.sites() {
            return Err(Error::DimensionMismatch {
                expected: l.sites(),
                found: self.glyphs.len(),
            });
        }
        let mut seen = 0u32;
        for (site, g) in self.glyphs.iter().enumerate() {
            match (l.region(site), g.bit()) {
                (Region::Data, Bit::Data(label)) => {
                    let m = 1 << label.index();
                    if seen & m != 0 {
                        return Err(Error::Domain(format!("data label {label} appears twice")));
                    }
                    seen |= m;
                }
                (Region::Data, _) => return Err(Error::Domain(format!("data site {site} holds a program bit"))),
                (_, Bit::Data(_)) => return Err(Error::Domain(format!("program site {site} holds a data label"))),
                _ => {}
            }
        }
        let active = self.glyphs.iter().filter(|g| g.cursor().is_active()).count();
        if active != 1 {
            return Err(Error::Domain(format!("{active} active cursors (expected exactly one)")));
        }
        Ok(())
    }
}

/// `psi_0`: program bits as given plus an appended 1 in the swap region, `⊢`
/// over the last swap site. `labels[q]` names circuit qubit `q`.
pub fn initial_configuration(prog: &VProgram, labels: &[DataLabel]) -> Result<RingConfiguration> {
    let layout = build_layout(prog)?;
    if labels.len() != prog.n {
        return Err(Error::DimensionMismatch {
            expected: prog.n,
            found: labels.len(),
        });
    }
    let mut glyphs = Vec::with_capacity(layout.sites());
    for &b in &prog.swap_bits {
        glyphs.push(Glyph::new(Cursor::Empty, Bit::from_bool(b)));
    }
    glyphs.push(Glyph::new(Cursor::Gate, Bit::One));
    for &q in &prog.data_order {
        glyphs.push(Glyph::new(Cursor::Empty, Bit::Data(labels[q])));
    }
    for &b in &prog.hadamard_bits {
        glyphs.push(Glyph::new(Cursor::Empty, Bit::from_bool(b)));
    }
    RingConfiguration::new(layout, glyphs)
}

fn cursor_char(c: Cursor) -> char {
    match c {
        Cursor::Empty => '.',
        Cursor::Cycle => 'c',
        Cursor::HoldCycle => 'h',
        Cursor::Gate => 'g',
    }
}

fn bit_char(b: Bit) -> char {
    match b {
        Bit::Zero => '0',
        Bit::One => '1',
        Bit::Data(l) => l.as_char(),
    }
}

/// Two-line text form: cursor line, newline, bit line; `|` separates the
/// swap, data and Hadamard regions on both lines.
pub fn render(config: &RingConfiguration) -> String {
    let l = config.layout;
    let mut top = String::with_capacity(l.sites() + 2);
    let mut bottom = String::with_capacity(l.sites() + 2);
    for (site, g) in config.glyphs.iter().enumerate() {
        if site == l.first_data() || site == l.first_hadamard() {
            top.push('|');
            bottom.push('|');
        }
        top.push(cursor_char(g.cursor()));
        bottom.push(bit_char(g.bit()));
    }
    top.push('\n');
    top.push_str(&bottom);
    top
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Inverse of [`render`].
pub fn parse(text: &str) -> Result<RingConfiguration> {
    let text = text.strip_suffix('\n').unwrap_or(text);
    let mut lines = text.split('\n');
    let (top, bottom) = match (lines.next(), lines.next(), lines.next()) {
        (Some(t), Some(b), None) => (t, b),
        _ => return Err(parse_err(1, 1, "expected exactly two lines")),
    };
    let bars = |s: &str| -> Vec<usize> { s.char_indices().filter(|&(_, c)| c == '|').map(|(i, _)| i).collect() };
    let (tb, bb) = (bars(top), bars(bottom));
    if tb.len() != 2 {
        return Err(parse_err(
            1,
            1,
            format!("expected 2 region boundaries, found {}", tb.len()),
        ));
    }
    if tb != bb || top.chars().count() != bottom.chars().count() {
        let col = tb.iter().zip(&bb).find(|(a, b)| a != b).map_or(1, |(a, _)| a + 1);
        return Err(parse_err(2, col, "region boundaries do not line up"));
    }

    let mut cursors = Vec::new();
    for (col, c) in top.chars().enumerate().filter(|&(_, c)| c != '|') {
        cursors.push(match c {
            '.' => Cursor::Empty,
            'c' => Cursor::Cycle,
            'h' => Cursor::HoldCycle,
            'g' => Cursor::Gate,
            other => return Err(parse_err(1, col + 1, format!("unknown cursor glyph {other:?}"))),
        });
    }
    let mut region = 0usize;
    let mut sizes = [0usize; 3];
    let mut glyphs = Vec::with_capacity(cursors.len());
    for (col, c) in bottom.chars().enumerate() {
        if c == '|' {
            region += 1;
            continue;
        }
        let bit = match (region, c) {
            (1, 'a'..='z') => Bit::Data(DataLabel::new(c)?),
            (0 | 2, '0') => Bit::Zero,
            (0 | 2, '1') => Bit::One,
            (1, _) => return Err(parse_err(2, col + 1, format!("expected a data label, found {c:?}"))),
            _ => return Err(parse_err(2, col + 1, format!("expected a program bit, found {c:?}"))),
        };
        sizes[region] += 1;
        glyphs.push(Glyph::new(cursors[glyphs.len()], bit));
    }
    let layout = RingLayout::new(sizes[0], sizes[1], sizes[2]).map_err(|e| parse_err(2, 1, format!("{e}")))?;
    let active: Vec<usize> = top
        .chars()
        .enumerate()
        .filter(|&(_, c)| matches!(c, 'c' | 'h' | 'g'))
        .map(|(i, _)| i + 1)
        .collect();
    if active.len() != 1 {
        let col = active.get(1).copied().unwrap_or(1);
        return Err(parse_err(
            1,
            col,
            format!("{} active cursors (expected exactly one)", active.len()),
        ));
    }
    RingConfiguration::new(layout, glyphs).map_err(|e| parse_err(2, 1, format!("{e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn appendix_program() -> VProgram {
        VProgram {
            n: 3,
            swap_bits: vec![false, false, false, true],
            hadamard_bits: vec![true, false, false, false],
            data_order: vec![1, 0, 2],
            iterations: 4,
        }
    }

    fn rgb() -> Vec<DataLabel> {
        DataLabel::parse_list("rgb").unwrap()
    }

    #[test]
    fn appendix_layout() {
        let l = build_layout(&appendix_program()).unwrap();
        assert_eq!((l.swap_len, l.data_len, l.hadamard_len, l.sites()), (5, 3, 4, 12));
    }

    #[test]
    fn empty_program_has_no_hadamard_region() {
        let prog = VProgram {
            n: 2,
            swap_bits: vec![],
            hadamard_bits: vec![],
            data_order: vec![0, 1],
            iterations: 0,
        };
        assert!(build_layout(&prog).is_err());
    }

    #[test]
    fn appendix_first_row() {
        let c = initial_configuration(&appendix_program(), &rgb()).unwrap();
        assert_eq!(render(&c), "....g|...|....\n00011|grb|1000");
        assert_eq!(c.active_site(), Some(4));
        // positional letters, as if the sites were labelled in load order
        let positional = DataLabel::parse_list("bac").unwrap();
        let c = initial_configuration(&appendix_program(), &positional).unwrap();
        assert_eq!(render(&c), "....g|...|....\n00011|abc|1000");
    }

    #[test]
    fn parse_roundtrip_on_fixture() {
        let text = "...g.|...|....\n10010|gbr|1000";
        let c = parse(text).unwrap();
        assert_eq!(render(&c), text);
        assert_eq!(c.layout().sites(), 12);
    }

    #[test]
    fn two_cursors_rejected() {
        let err = parse("g...g|...|....\n00011|abc|1000").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, column: 5, .. }), "{err:?}");
    }

    #[test]
    fn bad_characters_rejected() {
        assert!(matches!(
            parse("....x|...|....\n00011|abc|1000"),
            Err(Error::Parse { line: 1, column: 5, .. })
        ));
        assert!(matches!(
            parse("....g|...|....\n00211|abc|1000"),
            Err(Error::Parse { line: 2, column: 3, .. })
        ));
        assert!(matches!(
            parse("....g|...|....\n00011|a1c|1000"),
            Err(Error::Parse { line: 2, column: 8, .. })
        ));
        assert!(matches!(
            parse("....g|....|...\n00011|abc|1000"),
            Err(Error::Parse { .. })
        ));
        assert!(parse("....g|...|....\n00011|aac|1000").is_err());
    }

    #[test]
    fn glyph_packing() {
        for c in [Cursor::Empty, Cursor::Cycle, Cursor::HoldCycle, Cursor::Gate] {
            for b in [Bit::Zero, Bit::One, Bit::Data(DataLabel::new('z').unwrap())] {
                let g = Glyph::new(c, b);
                assert_eq!((g.cursor(), g.bit()), (c, b));
            }
        }
    }
}
