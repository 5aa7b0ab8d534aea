//! Conditional random quantities and compound conditionals.
//!
//! A [`Crq`] is a finite random quantity `X` restricted to a conditioning
//! event `H`, stored as value cases that partition `H`. Once a prevision `mu`
//! is attached, the quantity is the unconditional `XH + mu H^c`: it takes its
//! case value when `H` is true and `mu` otherwise.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::coherence::{check_coherence, Assessment};
use crate::error::{Error, Result};
use crate::events::{self, Cell, CellMap, Event};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct Crq {
    given: Event,
    cases: Vec<(Event, Rational)>,
    prevision: Option<Rational>,
}

impl Crq {
    /// Builds `X|H` from value cases. Inside `given`, exactly one case event
    /// must hold at every world.
    pub fn new(given: Event, cases: Vec<(Event, Rational)>) -> Result<Crq> {
        if events::is_impossible(&given) {
            return Err(Error::ImpossibleConditioning);
        }
        let support = cases.iter().fold(given.support(), |acc, (e, _)| acc | e.support());
        for w in events::worlds(support)? {
            if !given.eval(w) {
                continue;
            }
            let hits = cases.iter().filter(|(e, _)| e.eval(w)).count();
            if hits != 1 {
                return Err(Error::BadPartition(format!(
                    "{hits} cases hold at world {w:#b} inside the conditioning event"
                )));
            }
        }
        Ok(Crq { given, cases, prevision: None })
    }

    /// The constant `c` on `given`.
    pub fn constant(value: Rational, given: Event) -> Result<Crq> {
        Crq::new(given, vec![(Event::True, value)])
    }

    pub fn given(&self) -> &Event {
        &self.given
    }

    pub fn cases(&self) -> &[(Event, Rational)] {
        &self.cases
    }

    pub fn prevision(&self) -> Option<&Rational> {
        self.prevision.as_ref()
    }

    pub fn with_prevision(mut self, mu: Rational) -> Crq {
        self.prevision = Some(mu);
        self
    }

    pub fn without_prevision(mut self) -> Crq {
        self.prevision = None;
        self
    }

    /// Value of `X` at `world` when the conditioning event holds.
    pub fn restricted_value(&self, world: u64) -> Option<Rational> {
        if !self.given.eval(world) {
            return None;
        }
        self.cases.iter().find(|(e, _)| e.eval(world)).map(|(_, v)| v.clone())
    }

    /// Value of `XH + mu H^c` at `world`; `None` outside `H` when `mu` is unset.
    pub fn value(&self, world: u64) -> Option<Rational> {
        if self.given.eval(world) {
            self.restricted_value(world)
        } else {
            self.prevision.clone()
        }
    }

    pub fn support(&self) -> u64 {
        self.cases.iter().fold(self.given.support(), |acc, (e, _)| acc | e.support())
    }

    /// The set `X_{|H}` of values taken inside the conditioning event.
    pub fn restricted_values(&self) -> BTreeSet<Rational> {
        let mut out = BTreeSet::new();
        if let Ok(ws) = events::worlds(self.support()) {
            out.extend(ws.filter_map(|w| self.restricted_value(w)));
        }
        out
    }

    /// The prevision coherence forces when `X` is constant on `H`.
    pub fn forced_prevision(&self) -> Option<Rational> {
        let values = self.restricted_values();
        if values.len() == 1 {
            values.into_iter().next()
        } else {
            None
        }
    }

    pub fn is_conditional_event(&self) -> bool {
        self.restricted_values().iter().all(|v| v.is_zero() || v.is_one())
    }

    /// For a conditional event `A|H`, an event `A` with `AH` the region
    /// where the value is one.
    pub fn event_part(&self) -> Result<Event> {
        if !self.is_conditional_event() {
            return Err(Error::NotConditionalEvent);
        }
        Ok(Event::any(self.cases.iter().filter(|(_, v)| v.is_one()).map(|(e, _)| e)))
    }

    /// `1 - X|H`, with prevision `1 - mu`.
    pub fn complement(&self) -> Crq {
        let one = Rational::one();
        Crq {
            given: self.given.clone(),
            cases: self.cases.iter().map(|(e, v)| (e.clone(), &one - v)).collect(),
            prevision: self.prevision.as_ref().map(|mu| &one - mu),
        }
    }

    /// True iff both quantities have equivalent conditioning events and the
    /// same values inside them.
    pub fn same_restricted_values(&self, other: &Crq) -> bool {
        if !events::equivalent(&self.given, &other.given) {
            return false;
        }
        self.agrees_with(other, &self.given, Crq::restricted_value)
    }

    /// True iff the full values `XH + mu H^c` agree at every world of `region`.
    pub fn same_values_on(&self, other: &Crq, region: &Event) -> bool {
        self.agrees_with(other, region, Crq::value)
    }

    fn agrees_with(&self, other: &Crq, region: &Event, f: fn(&Crq, u64) -> Option<Rational>) -> bool {
        let support = self.support() | other.support() | region.support();
        match events::worlds(support) {
            Ok(mut ws) => ws.all(|w| !region.eval(w) || f(self, w) == f(other, w)),
            Err(_) => false,
        }
    }

    // Drops cases that are empty inside the conditioning event and merges
    // cases sharing a value, keeping first-appearance order.
    fn normalized(self) -> Crq {
        let mut merged: Vec<(Event, Rational)> = Vec::new();
        for (e, v) in self.cases {
            if events::is_impossible(&e.and(&self.given)) {
                continue;
            }
            match merged.iter_mut().find(|(_, mv)| *mv == v) {
                Some(slot) => slot.0 = slot.0.or(&e),
                None => merged.push((e, v)),
            }
        }
        Crq { given: self.given, cases: merged, prevision: self.prevision }
    }
}

impl CellMap for Crq {
    fn given(&self) -> &Event {
        &self.given
    }

    fn support(&self) -> u64 {
        Crq::support(self)
    }

    fn cell(&self, world: u64) -> Cell {
        match self.restricted_value(world) {
            Some(v) => Cell::Value(v),
            None => Cell::Outside,
        }
    }
}

/// `A|H`: one on `AH`, zero on `A^cH`; no prevision attached.
pub fn conditional_event(a: &Event, h: &Event) -> Result<Crq> {
    Crq::new(h.clone(), vec![(a.clone(), Rational::one()), (a.not(), Rational::zero())])
}

/// `(aX)|H = a(X|H)`.
pub fn scale(factor: &Rational, x: &Crq) -> Crq {
    Crq {
        given: x.given.clone(),
        cases: x.cases.iter().map(|(e, v)| (e.clone(), factor * v)).collect(),
        prevision: x.prevision.as_ref().map(|mu| factor * mu),
    }
}

// The cases of the unconditional quantity XH + mu H^c.
fn extended_cases(x: &Crq, mu: &Rational) -> Vec<(Event, Rational)> {
    let mut out: Vec<(Event, Rational)> =
        x.cases.iter().map(|(e, v)| (e.and(&x.given), v.clone())).collect();
    out.push((x.given.not(), mu.clone()));
    out
}

/// `X|H + Y|K = (XH + xH^c + YK + yK^c) | (H ∨ K)` with prevision `x + y`.
pub fn add(x: &Crq, y: &Crq) -> Result<Crq> {
    let mu = x.prevision.as_ref().ok_or(Error::MissingPrevision(0))?;
    let nu = y.prevision.as_ref().ok_or(Error::MissingPrevision(1))?;
    let given = x.given.or(&y.given);
    let mut cases = Vec::new();
    for (ex, vx) in extended_cases(x, mu) {
        for (ey, vy) in extended_cases(y, nu) {
            cases.push((ex.and(&ey), vx.clone() + vy));
        }
    }
    Ok(Crq { given, cases, prevision: Some(mu + nu) }.normalized())
}

/// `(X|H)|K = (XH + xH^c)|K`, where `x` is the prevision of `X|H`.
///
/// The result carries a prevision only when coherence forces one, i.e. when
/// its values inside `K` are constant.
pub fn iterated(x: &Crq, k: &Event) -> Result<Crq> {
    let mu = x.prevision.as_ref().ok_or(Error::MissingPrevision(0))?;
    if events::is_impossible(k) {
        return Err(Error::ImpossibleConditioning);
    }
    let out = Crq { given: k.clone(), cases: extended_cases(x, mu), prevision: None }.normalized();
    let forced = out.forced_prevision();
    Ok(Crq { prevision: forced, ..out })
}

/// Goodman-Nguyen inclusion `A|H ⊆ B|K`: `AH ⊆ BK` and `B^cK ⊆ A^cH`.
pub fn gn_inclusion(a: &Crq, b: &Crq) -> Result<bool> {
    let (ea, h) = (a.event_part()?, a.given());
    let (eb, k) = (b.event_part()?, b.given());
    Ok(events::implies(&ea.and(h), &eb.and(k))
        && events::implies(&eb.not().and(k), &ea.not().and(h)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompoundKind {
    Conjunction,
    Disjunction,
    NegatedConjunction,
    QuasiConjunction,
    Iterated,
}

impl CompoundKind {
    pub fn name(self) -> &'static str {
        match self {
            CompoundKind::Conjunction => "conjunction",
            CompoundKind::Disjunction => "disjunction",
            CompoundKind::NegatedConjunction => "negated-conjunction",
            CompoundKind::QuasiConjunction => "quasi-conjunction",
            CompoundKind::Iterated => "iterated",
        }
    }
}

/// A compound built from assessed conditional events. `realized` is
/// conditioned on `H ∨ K` and has no prevision until one is assessed.
#[derive(Debug, Clone, PartialEq)]
pub struct CompoundConditional {
    pub kind: CompoundKind,
    pub operands: Vec<Crq>,
    pub realized: Crq,
}

impl CompoundConditional {
    /// Assessed prevision of operand `i`.
    pub fn operand_prevision(&self, i: usize) -> Option<&Rational> {
        self.operands.get(i).and_then(|c| c.prevision())
    }
}

struct Pair {
    a: Event,
    h: Event,
    b: Event,
    k: Event,
    x: Rational,
    y: Rational,
}

fn coherent_pair(first: &Crq, second: &Crq) -> Result<Pair> {
    let x = first.prevision().cloned().ok_or(Error::MissingPrevision(0))?;
    let y = second.prevision().cloned().ok_or(Error::MissingPrevision(1))?;
    let pair = Pair {
        a: first.event_part()?,
        h: first.given().clone(),
        b: second.event_part()?,
        k: second.given().clone(),
        x,
        y,
    };
    let base = Assessment::from_members(vec![first.clone(), second.clone()])?;
    if !check_coherence(&base)?.coherent {
        return Err(Error::IncoherentOperands { x: pair.x.to_string(), y: pair.y.to_string() });
    }
    Ok(pair)
}

/// `(A|H) ∧ (B|K) = min{A|H, B|K} | (H ∨ K)`: one on `AHBK`, zero on
/// `A^cH ∨ B^cK`, `x` on `H^cBK`, `y` on `AHK^c`.
pub fn conjunction(first: &Crq, second: &Crq) -> Result<CompoundConditional> {
    let Pair { a, h, b, k, x, y } = coherent_pair(first, second)?;
    let (ah, bk) = (a.and(&h), b.and(&k));
    let cases = vec![
        (ah.and(&bk), Rational::one()),
        (a.not().and(&h).or(&b.not().and(&k)), Rational::zero()),
        (h.not().and(&bk), x),
        (ah.and(&k.not()), y),
    ];
    Ok(CompoundConditional {
        kind: CompoundKind::Conjunction,
        operands: vec![first.clone(), second.clone()],
        realized: Crq { given: h.or(&k), cases, prevision: None },
    })
}

/// `1 - (A|H) ∧ (B|K)`, equal to `max{A^c|H, B^c|K} | (H ∨ K)`. Negating a
/// negated conjunction gives the conjunction back.
pub fn negation_of_conjunction(conj: &CompoundConditional) -> Result<CompoundConditional> {
    let kind = match conj.kind {
        CompoundKind::Conjunction => CompoundKind::NegatedConjunction,
        CompoundKind::NegatedConjunction => CompoundKind::Conjunction,
        other => return Err(Error::WrongKind { expected: "conjunction", found: other.name() }),
    };
    Ok(CompoundConditional {
        kind,
        operands: conj.operands.clone(),
        realized: conj.realized.complement(),
    })
}

/// `(A|H) ∨ (B|K) = [(A^c|H) ∧ (B^c|K)]^c`: one on `AH ∨ BK`, `x` on
/// `H^cB^cK`, `y` on `A^cHK^c`, zero on `A^cHB^cK`.
pub fn disjunction(first: &Crq, second: &Crq) -> Result<CompoundConditional> {
    let Pair { a, h, b, k, x, y } = coherent_pair(first, second)?;
    let (ah, bk) = (a.and(&h), b.and(&k));
    let (ach, bck) = (a.not().and(&h), b.not().and(&k));
    let cases = vec![
        (ah.or(&bk), Rational::one()),
        (h.not().and(&bck), x),
        (ach.and(&k.not()), y),
        (ach.and(&bck), Rational::zero()),
    ];
    Ok(CompoundConditional {
        kind: CompoundKind::Disjunction,
        operands: vec![first.clone(), second.clone()],
        realized: Crq { given: h.or(&k), cases, prevision: None },
    })
}

/// `((AH ∨ H^c) ∧ (BK ∨ K^c)) | (H ∨ K)`.
pub fn quasi_conjunction(first: &Crq, second: &Crq) -> Result<Crq> {
    let (a, h) = (first.event_part()?, first.given());
    let (b, k) = (second.event_part()?, second.given());
    let lhs = a.and(h).or(&h.not());
    let rhs = b.and(k).or(&k.not());
    conditional_event(&lhs.and(&rhs), &h.or(k))
}
