//! The finite algebra the cipher is built from: nucleotide bases, base-4
//! digits, the eight Watson–Crick map rules and DNA addition/subtraction.
//!
//! Both tables are literal transcriptions. The isomorphism of DNA addition
//! with addition mod 4 (`C→0, A→1, T→2, G→3`) holds, but it is only used by
//! the tests as an oracle against the transcription.

use std::fmt;

use crate::error::Error;

/// A nucleotide base.
///
/// The discriminants (`A=0b00, C=0b01, G=0b10, T=0b11`) are internal indices
/// only; no file format carries them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum DnaBase {
    A = 0,
    C = 1,
    G = 2,
    T = 3,
}

impl DnaBase {
    pub const ALL: [DnaBase; 4] = [DnaBase::A, DnaBase::C, DnaBase::G, DnaBase::T];

    #[inline]
    pub const fn index(self) -> usize {
        self as usize
    }

    /// Watson–Crick complement: `A↔T`, `C↔G`.
    #[inline]
    pub const fn complement(self) -> DnaBase {
        match self {
            DnaBase::A => DnaBase::T,
            DnaBase::T => DnaBase::A,
            DnaBase::C => DnaBase::G,
            DnaBase::G => DnaBase::C,
        }
    }

    pub fn from_char(c: char) -> Option<DnaBase> {
        match c.to_ascii_uppercase() {
            'A' => Some(DnaBase::A),
            'C' => Some(DnaBase::C),
            'G' => Some(DnaBase::G),
            'T' => Some(DnaBase::T),
            _ => None,
        }
    }

    pub const fn to_char(self) -> char {
        match self {
            DnaBase::A => 'A',
            DnaBase::C => 'C',
            DnaBase::G => 'G',
            DnaBase::T => 'T',
        }
    }
}

impl fmt::Display for DnaBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A base-4 digit in `0..=3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
#[repr(transparent)]
pub struct Digit(u8);

impl Digit {
    pub const ZERO: Digit = Digit(0);
    pub const ALL: [Digit; 4] = [Digit(0), Digit(1), Digit(2), Digit(3)];

    #[inline]
    pub const fn new(value: u8) -> Option<Digit> {
        if value <= 3 {
            Some(Digit(value))
        } else {
            None
        }
    }

    /// Keeps the two low bits of `value`.
    #[inline]
    pub const fn from_low_bits(value: u8) -> Digit {
        Digit(value & 0b11)
    }

    #[inline]
    pub const fn value(self) -> u8 {
        self.0
    }

    /// `3 − d`, the digit paired with `d` under any map rule's complement.
    #[inline]
    pub const fn complement(self) -> Digit {
        Digit(3 - self.0)
    }

    /// Two-bit exclusive or.
    #[inline]
    pub const fn xor(self, other: Digit) -> Digit {
        Digit(self.0 ^ other.0)
    }
}

impl fmt::Display for Digit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl TryFrom<u8> for Digit {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        Digit::new(value).ok_or(Error::InvalidDigit(value))
    }
}

/// One of the eight DNA map rules, identified by its index in `1..=8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(transparent)]
pub struct MapRule(u8);

impl MapRule {
    pub const ALL: [MapRule; 8] = [
        MapRule(1),
        MapRule(2),
        MapRule(3),
        MapRule(4),
        MapRule(5),
        MapRule(6),
        MapRule(7),
        MapRule(8),
    ];

    pub const fn new(index: u8) -> Option<MapRule> {
        if index >= 1 && index <= 8 {
            Some(MapRule(index))
        } else {
            None
        }
    }

    #[inline]
    pub const fn index(self) -> u8 {
        self.0
    }

    #[inline]
    const fn slot(self) -> usize {
        (self.0 - 1) as usize
    }

    #[inline]
    pub fn encode(self, d: Digit) -> DnaBase {
        encode_digit(self, d)
    }

    #[inline]
    pub fn decode(self, x: DnaBase) -> Digit {
        decode_base(self, x)
    }

    #[inline]
    pub fn class(self) -> RuleClass {
        rule_class(self)
    }
}

impl fmt::Display for MapRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl TryFrom<u8> for MapRule {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        MapRule::new(value).ok_or(Error::InvalidRule(value as i64))
    }
}

/// The two orbits of map rules under the complement/mask keystream.
///
/// A composed per-position rule always stays in the class of the rule it was
/// composed from, which is what lets the attack narrow `h_i` down to four
/// candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleClass {
    /// Rules {1, 3, 6, 8}.
    ClassA,
    /// Rules {2, 4, 5, 7}.
    ClassB,
}

impl RuleClass {
    pub const ALL: [RuleClass; 2] = [RuleClass::ClassA, RuleClass::ClassB];

    pub fn rules(self) -> [MapRule; 4] {
        match self {
            RuleClass::ClassA => [MapRule(1), MapRule(3), MapRule(6), MapRule(8)],
            RuleClass::ClassB => [MapRule(2), MapRule(4), MapRule(5), MapRule(7)],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            RuleClass::ClassA => "A",
            RuleClass::ClassB => "B",
        }
    }

    pub fn from_label(s: &str) -> Option<RuleClass> {
        match s {
            "A" => Some(RuleClass::ClassA),
            "B" => Some(RuleClass::ClassB),
            _ => None,
        }
    }
}

impl fmt::Display for RuleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

use DnaBase::{A, C, G, T};

// Eight DNA map rules, one row per rule, indexed by digit 0..=3.
const ENCODE: [[DnaBase; 4]; 8] = [
    [A, C, G, T], // 1
    [A, G, C, T], // 2
    [C, A, T, G], // 3
    [C, T, A, G], // 4
    [G, A, T, C], // 5
    [G, T, A, C], // 6
    [T, C, G, A], // 7
    [T, G, C, A], // 8
];

const fn invert_encode() -> [[u8; 4]; 8] {
    let mut out = [[0u8; 4]; 8];
    let mut rule = 0;
    while rule < 8 {
        let mut d = 0;
        while d < 4 {
            out[rule][ENCODE[rule][d] as usize] = d as u8;
            d += 1;
        }
        rule += 1;
    }
    out
}

const DECODE: [[u8; 4]; 8] = invert_encode();

// Addition and subtraction, transcribed in the printed row/column order
// A, T, C, G. Entry [row][col] is `row + col` (resp. `row - col`).
const ADD_PRINTED: [[DnaBase; 4]; 4] = [
    [T, G, A, C], // A
    [G, C, T, A], // T
    [A, T, C, G], // C
    [C, A, G, T], // G
];

const SUB_PRINTED: [[DnaBase; 4]; 4] = [
    [C, G, A, T], // A
    [A, C, T, G], // T
    [G, T, C, A], // C
    [T, A, G, C], // G
];

#[inline]
const fn printed_pos(x: DnaBase) -> usize {
    match x {
        A => 0,
        T => 1,
        C => 2,
        G => 3,
    }
}

/// Base paired with digit `d` under `rule`.
#[inline]
pub fn encode_digit(rule: MapRule, d: Digit) -> DnaBase {
    ENCODE[rule.slot()][d.0 as usize]
}

/// Digit paired with base `x` under `rule`; the inverse of [`encode_digit`].
#[inline]
pub fn decode_base(rule: MapRule, x: DnaBase) -> Digit {
    Digit(DECODE[rule.slot()][x.index()])
}

/// DNA addition. Commutative, with `C` as identity.
#[inline]
pub fn dna_add(a: DnaBase, b: DnaBase) -> DnaBase {
    ADD_PRINTED[printed_pos(a)][printed_pos(b)]
}

/// DNA subtraction: the unique `x` with `dna_add(x, b) == a`.
#[inline]
pub fn dna_sub(a: DnaBase, b: DnaBase) -> DnaBase {
    SUB_PRINTED[printed_pos(a)][printed_pos(b)]
}

#[inline]
pub fn complement(x: DnaBase) -> DnaBase {
    x.complement()
}

pub fn rule_class(rule: MapRule) -> RuleClass {
    match rule.0 {
        1 | 3 | 6 | 8 => RuleClass::ClassA,
        _ => RuleClass::ClassB,
    }
}

/// The unique rule in `class` that decodes `base` to `digit`.
///
/// Within a class the four rules send any fixed base to four distinct digits,
/// so the lookup is total.
pub fn rule_from_pair(class: RuleClass, base: DnaBase, digit: Digit) -> MapRule {
    class
        .rules()
        .into_iter()
        .find(|r| decode_base(*r, base) == digit)
        .expect("each class assigns distinct digits to a fixed base")
}
