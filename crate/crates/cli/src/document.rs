//! Input documents: declared atoms, assessed members, and optional compounds
//! built from them.
//!
//! ```toml
//! atoms = ["A", "H", "B", "K"]
//!
//! [[members]]
//! event = "A"
//! given = "H"
//! prevision = "7/10"
//!
//! [[members]]
//! given = "K"
//! prevision = "1/2"
//! values = { "B" = "1", "~B" = "1/4" }
//!
//! [[compounds]]
//! kind = "conjunction"
//! operands = [0, 1]
//! prevision = "3/10"
//! ```

use std::collections::BTreeMap;

use coherence_core::crq::{
    conditional_event, conjunction, disjunction, iterated, negation_of_conjunction, quasi_conjunction,
};
use coherence_core::{Assessment, Crq, Event, Universe};
use serde::Deserialize;

use crate::error::CliError;
use crate::report::Q;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssessmentDocument {
    pub atoms: Vec<String>,
    #[serde(default)]
    pub members: Vec<MemberDoc>,
    #[serde(default)]
    pub compounds: Vec<CompoundEntry>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberDoc {
    /// An event; the member is then the conditional event `event|given`.
    pub event: Option<String>,
    /// Values of a random quantity, keyed by events partitioning `given`.
    pub values: Option<BTreeMap<String, Q>>,
    /// Defaults to the sure event.
    pub given: Option<String>,
    pub prevision: Option<Q>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompoundEntry {
    pub kind: String,
    /// Member indices, starting at 0.
    pub operands: Vec<usize>,
    /// Outer conditioning event, for `iterated` only.
    pub given: Option<String>,
    pub prevision: Option<Q>,
}

/// A parsed document with every expression resolved.
pub struct Loaded {
    pub universe: Universe,
    pub members: Vec<Crq>,
    /// Compound quantities with their optional previsions.
    pub compounds: Vec<Crq>,
}

impl Loaded {
    pub fn parse(text: &str, atom_cap: usize) -> Result<Loaded, CliError> {
        let doc: AssessmentDocument = toml::from_str(text)?;
        let mut universe = Universe::with_cap(atom_cap);
        for name in &doc.atoms {
            universe.atom(name).map_err(|e| CliError::at(format!("atom {name:?}"), e))?;
        }
        let mut loaded = Loaded { universe, members: Vec::new(), compounds: Vec::new() };
        for (i, m) in doc.members.iter().enumerate() {
            let crq = loaded.member(m).map_err(|e| e.within(format!("members[{i}]")))?;
            loaded.members.push(crq);
        }
        for (i, c) in doc.compounds.iter().enumerate() {
            let target = match &c.given {
                Some(g) => format!("{}:{}:{}", c.kind, join(&c.operands), g),
                None => format!("{}:{}", c.kind, join(&c.operands)),
            };
            let crq = loaded.target(&target).map_err(|e| e.within(format!("compounds[{i}]")))?;
            let crq = match &c.prevision {
                Some(q) => crq.with_prevision(q.0.clone()),
                None => crq.without_prevision(),
            };
            loaded.compounds.push(crq);
        }
        Ok(loaded)
    }

    /// Parses an expression over the declared atoms only.
    pub fn event(&mut self, text: &str) -> Result<Event, CliError> {
        let known = self.universe.len();
        let e = self.universe.parse(text).map_err(|e| CliError::at(format!("{text:?}"), e))?;
        if self.universe.len() > known {
            let name = &self.universe.names()[known];
            return Err(CliError::Invalid(format!("{text:?} uses undeclared atom {name:?}")));
        }
        Ok(e)
    }

    fn member(&mut self, m: &MemberDoc) -> Result<Crq, CliError> {
        let given = match &m.given {
            Some(g) => self.event(g)?,
            None => Event::True,
        };
        let crq = match (&m.event, &m.values) {
            (Some(e), None) => {
                let a = self.event(e)?;
                conditional_event(&a, &given)?
            }
            (None, Some(values)) => {
                let mut cases = Vec::with_capacity(values.len());
                for (expr, q) in values {
                    cases.push((self.event(expr)?, q.0.clone()));
                }
                Crq::new(given, cases)?
            }
            _ => return Err(CliError::Invalid("exactly one of `event` and `values` is required".into())),
        };
        Ok(match &m.prevision {
            Some(q) => crq.with_prevision(q.0.clone()),
            None => crq,
        })
    }

    fn operand(&self, index: usize) -> Result<&Crq, CliError> {
        self.members.get(index).ok_or_else(|| {
            CliError::Invalid(format!("operand {index} is out of range for {} members", self.members.len()))
        })
    }

    /// Resolves a target such as `conjunction:0,1`, `iterated:0:H | K`
    /// or `event:A & B:H`.
    pub fn target(&mut self, text: &str) -> Result<Crq, CliError> {
        let (kind, rest) = text
            .split_once(':')
            .ok_or_else(|| CliError::Invalid(format!("target {text:?} has no kind")))?;
        match kind {
            "event" => {
                let (e, g) = rest
                    .split_once(':')
                    .ok_or_else(|| CliError::Invalid("expected event:<expr>:<given>".into()))?;
                let (e, g) = (self.event(e)?, self.event(g)?);
                Ok(conditional_event(&e, &g)?)
            }
            "iterated" => {
                let (i, g) = rest
                    .split_once(':')
                    .ok_or_else(|| CliError::Invalid("expected iterated:<index>:<given>".into()))?;
                let i = index(i)?;
                let k = self.event(g)?;
                Ok(iterated(self.operand(i)?, &k)?)
            }
            "conjunction" | "disjunction" | "negated-conjunction" | "quasi-conjunction" => {
                let ops: Vec<usize> = rest.split(',').map(index).collect::<Result<_, _>>()?;
                let [i, j] = ops[..] else {
                    return Err(CliError::Invalid(format!("{kind} takes two operands")));
                };
                let (x, y) = (self.operand(i)?, self.operand(j)?);
                Ok(match kind {
                    "conjunction" => conjunction(x, y)?.realized,
                    "disjunction" => disjunction(x, y)?.realized,
                    "negated-conjunction" => negation_of_conjunction(&conjunction(x, y)?)?.realized,
                    _ => quasi_conjunction(x, y)?,
                })
            }
            other => Err(CliError::Invalid(format!("unknown target kind {other:?}"))),
        }
    }

    /// Members and compounds that carry a prevision, in document order.
    pub fn assessment(&self) -> Result<Assessment, CliError> {
        let mut family = Vec::new();
        for (i, m) in self.members.iter().enumerate() {
            if m.prevision().is_none() {
                return Err(CliError::Invalid(format!("members[{i}] has no prevision")));
            }
            family.push(m.clone());
        }
        family.extend(self.compounds.iter().filter(|c| c.prevision().is_some()).cloned());
        Ok(Assessment::from_members(family)?)
    }

    /// Members and compounds, with or without previsions.
    pub fn family(&self) -> Vec<Crq> {
        self.members.iter().chain(&self.compounds).cloned().collect()
    }
}

fn index(text: &str) -> Result<usize, CliError> {
    text.trim()
        .parse()
        .map_err(|_| CliError::Invalid(format!("{text:?} is not a member index")))
}

fn join(ops: &[usize]) -> String {
    ops.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}
