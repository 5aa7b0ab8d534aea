//! Propositional events over named atoms.
//!
//! Events are expression trees; all logical queries are answered by
//! enumerating the truth assignments of the atoms an event actually uses.
//! A world is a `u64` bitmask: bit `i` is the truth value of atom `i`.

mod parser;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::{BitAnd, BitOr, Not};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Default number of atoms a [`Universe`] accepts.
pub const DEFAULT_ATOM_CAP: usize = 20;

/// Hard limit on the atoms an enumeration may range over.
pub const MAX_ATOMS: usize = 30;

/// Registry of atom names. Atom indices are assigned in registration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    names: Vec<String>,
    cap: usize,
}

impl Default for Universe {
    fn default() -> Self {
        Universe::new()
    }
}

impl Universe {
    pub fn new() -> Self {
        Universe::with_cap(DEFAULT_ATOM_CAP)
    }

    /// A universe holding at most `cap` atoms (clamped to [`MAX_ATOMS`]).
    pub fn with_cap(cap: usize) -> Self {
        Universe { names: Vec::new(), cap: cap.min(MAX_ATOMS) }
    }

    pub fn cap(&self) -> usize {
        self.cap
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

    /// Returns the index of `name`, registering it if it is new.
    pub fn atom(&mut self, name: &str) -> Result<usize> {
        if name.is_empty() {
            return Err(Error::Syntax { position: 0, message: "empty atom name".into() });
        }
        if let Some(i) = self.index_of(name) {
            return Ok(i);
        }
        if self.names.len() >= self.cap {
            return Err(Error::AtomCap { count: self.names.len() + 1, cap: self.cap });
        }
        self.names.push(name.to_string());
        Ok(self.names.len() - 1)
    }

    /// Parses an expression, registering any new atoms.
    pub fn parse(&mut self, text: &str) -> Result<Event> {
        parser::Parser::new(text, self).parse()
    }

    pub fn render(&self, event: &Event) -> String {
        let mut out = String::new();
        self.render_into(event, 0, &mut out);
        out
    }

    // precedence: 0 = or, 1 = and, 2 = not/atom
    fn render_into(&self, event: &Event, ctx: u8, out: &mut String) {
        match event {
            Event::True => out.push('1'),
            Event::False => out.push('0'),
            Event::Atom(i) => match self.names.get(*i) {
                Some(name) => out.push_str(name),
                None => out.push_str(&format!("_{i}")),
            },
            Event::Not(inner) => {
                out.push('~');
                self.render_into(inner, 2, out);
            }
            Event::And(a, b) => {
                if ctx > 1 {
                    out.push('(');
                }
                self.render_into(a, 1, out);
                out.push_str(" & ");
                self.render_into(b, 1, out);
                if ctx > 1 {
                    out.push(')');
                }
            }
            Event::Or(a, b) => {
                if ctx > 0 {
                    out.push('(');
                }
                self.render_into(a, 0, out);
                out.push_str(" | ");
                self.render_into(b, 0, out);
                if ctx > 0 {
                    out.push(')');
                }
            }
        }
    }

    /// Renders a world restricted to `support` as a conjunction of literals.
    pub fn render_world(&self, world: u64, support: u64) -> String {
        let literals: Vec<String> = bits(support)
            .map(|i| {
                let name = self.names.get(i).cloned().unwrap_or_else(|| format!("_{i}"));
                if world >> i & 1 == 1 {
                    name
                } else {
                    format!("~{name}")
                }
            })
            .collect();
        if literals.is_empty() {
            "1".into()
        } else {
            literals.join(" & ")
        }
    }
}

/// A propositional formula. Only semantic queries are meaningful; two
/// structurally different trees may denote the same event.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Event {
    True,
    False,
    Atom(usize),
    Not(Box<Event>),
    And(Box<Event>, Box<Event>),
    Or(Box<Event>, Box<Event>),
}

impl Event {
    pub fn atom(index: usize) -> Event {
        Event::Atom(index)
    }

    pub fn and(&self, other: &Event) -> Event {
        match (self, other) {
            (Event::True, e) | (e, Event::True) => e.clone(),
            (Event::False, _) | (_, Event::False) => Event::False,
            _ => Event::And(Box::new(self.clone()), Box::new(other.clone())),
        }
    }

    pub fn or(&self, other: &Event) -> Event {
        match (self, other) {
            (Event::False, e) | (e, Event::False) => e.clone(),
            (Event::True, _) | (_, Event::True) => Event::True,
            _ => Event::Or(Box::new(self.clone()), Box::new(other.clone())),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(&self) -> Event {
        match self {
            Event::True => Event::False,
            Event::False => Event::True,
            Event::Not(inner) => (**inner).clone(),
            e => Event::Not(Box::new(e.clone())),
        }
    }

    pub fn any<'a>(events: impl IntoIterator<Item = &'a Event>) -> Event {
        events.into_iter().fold(Event::False, |acc, e| acc.or(e))
    }

    pub fn all<'a>(events: impl IntoIterator<Item = &'a Event>) -> Event {
        events.into_iter().fold(Event::True, |acc, e| acc.and(e))
    }

    pub fn eval(&self, world: u64) -> bool {
        match self {
            Event::True => true,
            Event::False => false,
            Event::Atom(i) => world >> i & 1 == 1,
            Event::Not(e) => !e.eval(world),
            Event::And(a, b) => a.eval(world) && b.eval(world),
            Event::Or(a, b) => a.eval(world) || b.eval(world),
        }
    }

    /// Bitmask of the atoms the formula mentions.
    pub fn support(&self) -> u64 {
        match self {
            Event::True | Event::False => 0,
            Event::Atom(i) => 1u64 << i,
            Event::Not(e) => e.support(),
            Event::And(a, b) | Event::Or(a, b) => a.support() | b.support(),
        }
    }
}

impl BitAnd for Event {
    type Output = Event;
    fn bitand(self, rhs: Event) -> Event {
        Event::and(&self, &rhs)
    }
}

impl BitAnd for &Event {
    type Output = Event;
    fn bitand(self, rhs: &Event) -> Event {
        self.and(rhs)
    }
}

impl BitOr for Event {
    type Output = Event;
    fn bitor(self, rhs: Event) -> Event {
        Event::or(&self, &rhs)
    }
}

impl BitOr for &Event {
    type Output = Event;
    fn bitor(self, rhs: &Event) -> Event {
        self.or(rhs)
    }
}

impl Not for Event {
    type Output = Event;
    fn not(self) -> Event {
        Event::not(&self)
    }
}

impl Not for &Event {
    type Output = Event;
    fn not(self) -> Event {
        Event::not(self)
    }
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

/// All worlds over the atoms in `support`, in increasing numeric order.
pub fn worlds(support: u64) -> Result<impl Iterator<Item = u64>> {
    let atoms: Vec<usize> = bits(support).collect();
    if atoms.len() > MAX_ATOMS {
        return Err(Error::AtomCap { count: atoms.len(), cap: MAX_ATOMS });
    }
    Ok((0u64..1 << atoms.len()).map(move |t| {
        atoms
            .iter()
            .enumerate()
            .fold(0u64, |w, (j, &atom)| w | ((t >> j & 1) << atom))
    }))
}

fn all_worlds(support: u64, mut pred: impl FnMut(u64) -> bool) -> bool {
    match worlds(support) {
        Ok(mut it) => it.all(&mut pred),
        // beyond the enumeration limit nothing can be certified
        Err(_) => false,
    }
}

/// True iff `a ∧ ¬b` is false at every assignment.
pub fn implies(a: &Event, b: &Event) -> bool {
    all_worlds(a.support() | b.support(), |w| !a.eval(w) || b.eval(w))
}

pub fn is_impossible(a: &Event) -> bool {
    all_worlds(a.support(), |w| !a.eval(w))
}

pub fn equivalent(a: &Event, b: &Event) -> bool {
    all_worlds(a.support() | b.support(), |w| a.eval(w) == b.eval(w))
}

/// True iff the events generate all `2^n` conjunctions of literals.
pub fn logically_independent(events: &[Event]) -> bool {
    let n = events.len();
    if n == 0 || n > MAX_ATOMS {
        return false;
    }
    let support = events.iter().fold(0, |acc, e| acc | e.support());
    let Ok(ws) = worlds(support) else {
        return false;
    };
    let patterns: HashSet<u64> = ws
        .map(|w| {
            events
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, e)| acc | (u64::from(e.eval(w)) << i))
        })
        .collect();
    patterns.len() == 1 << n
}

/// The cell a world falls in for one family member: outside its conditioning
/// event, or inside with the given value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Cell {
    Outside,
    Value(Rational),
}

impl Cell {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            Cell::Outside => None,
            Cell::Value(v) => Some(v),
        }
    }
}

/// A family member that assigns a cell to every world.
pub trait CellMap {
    fn given(&self) -> &Event;
    /// Atoms needed to evaluate the member.
    fn support(&self) -> u64;
    fn cell(&self, world: u64) -> Cell;
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constituent {
    pub id: usize,
    /// Smallest world in the constituent.
    pub assignment: u64,
    pub worlds: Vec<u64>,
    /// One cell per family member.
    pub cells: Vec<Cell>,
}

impl Constituent {
    /// True iff the constituent lies inside member `i`'s conditioning event.
    pub fn inside(&self, i: usize) -> bool {
        !matches!(self.cells[i], Cell::Outside)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constituents {
    pub support: u64,
    /// `C_0`, the constituent outside every conditioning event, if nonempty.
    pub outside: Option<Constituent>,
    /// `C_1..C_m`, ordered by smallest contained world.
    pub inside: Vec<Constituent>,
}

impl Constituents {
    pub fn len(&self) -> usize {
        self.inside.len() + usize::from(self.outside.is_some())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Partitions the worlds of the family's atoms by their cell vectors.
pub fn constituents<M: CellMap>(family: &[M]) -> Result<Constituents> {
    for member in family {
        if is_impossible(member.given()) {
            return Err(Error::ImpossibleConditioning);
        }
    }
    let support = family.iter().fold(0, |acc, m| acc | m.support());
    let mut index: HashMap<Vec<Cell>, usize> = HashMap::new();
    let mut groups: Vec<Constituent> = Vec::new();
    for w in worlds(support)? {
        let cells: Vec<Cell> = family.iter().map(|m| m.cell(w)).collect();
        match index.get(&cells) {
            Some(&g) => groups[g].worlds.push(w),
            None => {
                index.insert(cells.clone(), groups.len());
                groups.push(Constituent { id: 0, assignment: w, worlds: vec![w], cells });
            }
        }
    }
    let mut outside = None;
    let mut inside = Vec::new();
    for mut c in groups {
        if c.cells.iter().all(|cell| matches!(cell, Cell::Outside)) {
            outside = Some(c);
        } else {
            c.id = inside.len() + 1;
            inside.push(c);
        }
    }
    Ok(Constituents { support, outside, inside })
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Outside => f.write_str("-"),
            Cell::Value(v) => write!(f, "{v}"),
        }
    }
}
