//! Product partition of `n` named events into `2^n` atoms.
//!
//! Atom indices are `n`-bit integers read in event-table order: the first
//! event is the most significant bit. With events `[A, B]` the atoms are
//! `0b11 = A&B`, `0b10 = A&-B`, `0b01 = -A&B`, `0b00 = -A&-B`, so the binary
//! spelling of an index lists the truth values of the events left to right.

use std::fmt;

use bitvec::prelude::*;

use crate::error::{Error, Result};

/// Largest supported number of events (`2^16` atoms).
pub const MAX_EVENTS: usize = 16;

/// Absolute tolerance on the total mass of a distribution.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Ordered registry of named binary events.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventTable {
    names: Vec<String>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl EventTable {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::EventTable("at least one event is required".into()));
        }
        if names.len() > MAX_EVENTS {
            return Err(Error::EventTable(format!(
                "{} events exceeds the cap of {MAX_EVENTS}",
                names.len()
            )));
        }
        for (i, name) in names.iter().enumerate() {
            if !is_identifier(name) {
                return Err(Error::EventTable(format!("'{name}' is not a valid identifier")));
            }
            if names[..i].contains(name) {
                return Err(Error::EventTable(format!("duplicate event '{name}'")));
            }
        }
        Ok(EventTable { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn num_atoms(&self) -> usize {
        1 << self.names.len()
    }

    /// Bit position of event `i` inside an atom index.
    pub fn bit_of(&self, i: usize) -> usize {
        self.names.len() - 1 - i
    }

    /// Truth value of event `i` at atom `atom`.
    pub fn event_true(&self, i: usize, atom: usize) -> bool {
        atom >> self.bit_of(i) & 1 == 1
    }

    /// Mask of the atoms where event `i` holds.
    pub fn event_mask(&self, i: usize) -> AtomMask {
        let bit = self.bit_of(i);
        let mut bits = bitvec![u64, Lsb0; 0; self.num_atoms()];
        for atom in 0..self.num_atoms() {
            if atom >> bit & 1 == 1 {
                bits.set(atom, true);
            }
        }
        AtomMask { bits }
    }
}

/// Boolean expression over event names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BoolExpr {
    True,
    False,
    Event(String),
    Not(Box<BoolExpr>),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
    Xor(Box<BoolExpr>, Box<BoolExpr>),
}

impl BoolExpr {
    pub fn event(name: impl Into<String>) -> Self {
        BoolExpr::Event(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        BoolExpr::Not(Box::new(self))
    }

    pub fn and(self, other: BoolExpr) -> Self {
        BoolExpr::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: BoolExpr) -> Self {
        BoolExpr::Or(Box::new(self), Box::new(other))
    }

    pub fn xor(self, other: BoolExpr) -> Self {
        BoolExpr::Xor(Box::new(self), Box::new(other))
    }

    /// Evaluates the expression under a single truth assignment.
    pub fn eval_with(&self, truth: &dyn Fn(&str) -> Option<bool>) -> Result<bool> {
        Ok(match self {
            BoolExpr::True => true,
            BoolExpr::False => false,
            BoolExpr::Event(name) => truth(name).ok_or_else(|| Error::UnknownEvent(name.clone()))?,
            BoolExpr::Not(e) => !e.eval_with(truth)?,
            BoolExpr::And(a, b) => a.eval_with(truth)? & b.eval_with(truth)?,
            BoolExpr::Or(a, b) => a.eval_with(truth)? | b.eval_with(truth)?,
            BoolExpr::Xor(a, b) => a.eval_with(truth)? ^ b.eval_with(truth)?,
        })
    }

    pub fn mentions(&self, name: &str) -> bool {
        match self {
            BoolExpr::True | BoolExpr::False => false,
            BoolExpr::Event(n) => n == name,
            BoolExpr::Not(e) => e.mentions(name),
            BoolExpr::And(a, b) | BoolExpr::Or(a, b) | BoolExpr::Xor(a, b) => {
                a.mentions(name) || b.mentions(name)
            }
        }
    }

    /// First event name that does not resolve in `table`, if any.
    pub fn first_unknown<'a>(&'a self, table: &EventTable) -> Option<&'a str> {
        match self {
            BoolExpr::True | BoolExpr::False => None,
            BoolExpr::Event(n) => table.index_of(n).is_none().then_some(n.as_str()),
            BoolExpr::Not(e) => e.first_unknown(table),
            BoolExpr::And(a, b) | BoolExpr::Or(a, b) | BoolExpr::Xor(a, b) => {
                a.first_unknown(table).or_else(|| b.first_unknown(table))
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            BoolExpr::Or(..) => 1,
            BoolExpr::Xor(..) => 2,
            BoolExpr::And(..) => 3,
            BoolExpr::Not(_) => 4,
            _ => 5,
        }
    }

    fn fmt_child(&self, child: &BoolExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if child.precedence() <= self.precedence() && child.precedence() < 4 {
            write!(f, "({child})")
        } else {
            write!(f, "{child}")
        }
    }
}

/// Renders in the program syntax: `-` NOT, `&` AND, `^` XOR, `or` OR.
impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoolExpr::True => write!(f, "true"),
            BoolExpr::False => write!(f, "false"),
            BoolExpr::Event(n) => write!(f, "{n}"),
            BoolExpr::Not(e) => {
                write!(f, "-")?;
                self.fmt_child(e, f)
            }
            BoolExpr::And(a, b) | BoolExpr::Or(a, b) | BoolExpr::Xor(a, b) => {
                let op = match self {
                    BoolExpr::And(..) => "&",
                    BoolExpr::Or(..) => " or ",
                    _ => "^",
                };
                self.fmt_child(a, f)?;
                write!(f, "{op}")?;
                self.fmt_child(b, f)
            }
        }
    }
}

/// Set of atoms, one bit per atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AtomMask {
    bits: BitVec<u64, Lsb0>,
}

impl AtomMask {
    pub fn empty(num_atoms: usize) -> Self {
        AtomMask { bits: bitvec![u64, Lsb0; 0; num_atoms] }
    }

    pub fn full(num_atoms: usize) -> Self {
        AtomMask { bits: bitvec![u64, Lsb0; 1; num_atoms] }
    }

    pub fn from_atoms(num_atoms: usize, atoms: impl IntoIterator<Item = usize>) -> Self {
        let mut mask = Self::empty(num_atoms);
        for a in atoms {
            mask.bits.set(a, true);
        }
        mask
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn contains(&self, atom: usize) -> bool {
        self.bits[atom]
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn atoms(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter_ones()
    }

    pub fn complement(&self) -> Self {
        AtomMask { bits: !self.bits.clone() }
    }

    pub fn intersect(&self, other: &AtomMask) -> Self {
        AtomMask { bits: self.bits.clone() & other.bits.as_bitslice() }
    }

    pub fn union(&self, other: &AtomMask) -> Self {
        AtomMask { bits: self.bits.clone() | other.bits.as_bitslice() }
    }

    pub fn sym_diff(&self, other: &AtomMask) -> Self {
        AtomMask { bits: self.bits.clone() ^ other.bits.as_bitslice() }
    }
}

/// Truth-table evaluation of `expr` over every atom of `table`.
pub fn atoms_of(expr: &BoolExpr, table: &EventTable) -> Result<AtomMask> {
    let n = table.num_atoms();
    Ok(match expr {
        BoolExpr::True => AtomMask::full(n),
        BoolExpr::False => AtomMask::empty(n),
        BoolExpr::Event(name) => {
            let i = table.index_of(name).ok_or_else(|| Error::UnknownEvent(name.clone()))?;
            table.event_mask(i)
        }
        BoolExpr::Not(e) => atoms_of(e, table)?.complement(),
        BoolExpr::And(a, b) => atoms_of(a, table)?.intersect(&atoms_of(b, table)?),
        BoolExpr::Or(a, b) => atoms_of(a, table)?.union(&atoms_of(b, table)?),
        BoolExpr::Xor(a, b) => atoms_of(a, table)?.sym_diff(&atoms_of(b, table)?),
    })
}

/// Probability vector over the atoms of a product partition.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    p: Vec<f64>,
}

impl Distribution {
    /// Validates and renormalizes `p`. The length must be a power of two
    /// between 2 and `2^16`.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        let len = p.len();
        if len < 2 || !len.is_power_of_two() || len > 1 << MAX_EVENTS {
            return Err(Error::Domain(format!(
                "distribution length {len} is not 2^n for 1 <= n <= {MAX_EVENTS}"
            )));
        }
        if let Some((i, v)) = p.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            return Err(Error::Domain(format!("entry {i} is {v}; entries must be nonnegative")));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::Domain(format!("entries sum to {sum}, not 1")));
        }
        Ok(Distribution { p: p.into_iter().map(|v| v / sum).collect() })
    }

    /// Uniform distribution over `num_atoms` atoms.
    pub fn uniform(num_atoms: usize) -> Result<Self> {
        Self::new(vec![1.0 / num_atoms as f64; num_atoms])
    }

    /// Builds a distribution from a solver point, clipping round-off below
    /// zero and rescaling to unit mass.
    pub(crate) fn from_point(point: &[f64]) -> Result<Self> {
        let clipped: Vec<f64> = point.iter().map(|v| v.max(0.0)).collect();
        let sum: f64 = clipped.iter().sum();
        if sum.is_nan() || sum <= 0.0 {
            return Err(Error::NumericFailure("solver point has no probability mass".into()));
        }
        Self::new(clipped.into_iter().map(|v| v / sum).collect())
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn num_events(&self) -> usize {
        self.p.len().trailing_zeros() as usize
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.p
    }
}

/// Probability of the event whose atoms are `mask`.
pub fn prob(dist: &Distribution, mask: &AtomMask) -> Result<f64> {
    if dist.len() != mask.len() {
        return Err(Error::Dimension { expected: dist.len(), found: mask.len() });
    }
    Ok(mask.atoms().map(|a| dist.p[a]).sum())
}

/// Distribution over `[A, B]` from the four cells of a 2x2 table:
/// `x = P(A&B)`, `y = P(A&-B)`, `z = P(-A&B)`, `w = P(-A&-B)`.
pub fn dist_from_2x2(x: f64, y: f64, z: f64, w: f64) -> Result<Distribution> {
    for (name, v) in [("x", x), ("y", y), ("z", z), ("w", w)] {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::Domain(format!("cell {name} = {v} violates nonnegativity")));
        }
    }
    let sum = x + y + z + w;
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::Domain(format!("cells sum to {sum}, violating total mass 1")));
    }
    Distribution::new(vec![w, z, y, x])
}
