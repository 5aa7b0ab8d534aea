//! Coherence of conditional prevision assessments.
//!
//! With a family `X_1|H_1, .., X_n|H_n` and previsions `mu_1, .., mu_n`, every
//! constituent `C_h` inside `H_1 ∨ .. ∨ H_n` contributes a point `Q_h` whose
//! `i`-th coordinate is the value of `X_i` on `C_h` when `C_h ⊆ H_i` and
//! `mu_i` otherwise. The assessment is coherent iff the prevision vector is a
//! convex combination of the points and, recursively, the sub-assessment on
//! the indices whose conditioning events get zero mass in every such
//! combination (`I_0`) is coherent too.

pub mod simplex;

use num_traits::{One, Signed, Zero};

use crate::crq::Crq;
use crate::error::{Error, Result};
use crate::events::{self, Constituent};
use crate::exec::Exec;
use crate::rational::Rational;
use simplex::LpOutcome;

/// An ordered family of conditional random quantities, each with its
/// prevision attached.
#[derive(Debug, Clone, PartialEq)]
pub struct Assessment {
    members: Vec<Crq>,
}

impl Assessment {
    pub fn new(family: Vec<Crq>, previsions: Vec<Rational>) -> Result<Assessment> {
        if family.len() != previsions.len() {
            return Err(Error::Dimension { expected: family.len(), found: previsions.len() });
        }
        let members = family.into_iter().zip(previsions).map(|(c, mu)| c.with_prevision(mu)).collect();
        Ok(Assessment { members })
    }

    /// Members must already carry their previsions.
    pub fn from_members(members: Vec<Crq>) -> Result<Assessment> {
        if let Some(i) = members.iter().position(|m| m.prevision().is_none()) {
            return Err(Error::MissingPrevision(i));
        }
        Ok(Assessment { members })
    }

    pub fn members(&self) -> &[Crq] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn previsions(&self) -> Vec<Rational> {
        self.members.iter().map(|m| m.prevision().cloned().unwrap_or_default()).collect()
    }

    pub fn subfamily(&self, indices: &[usize]) -> Assessment {
        Assessment { members: indices.iter().map(|&i| self.members[i].clone()).collect() }
    }

    pub fn with_member(&self, member: Crq, mu: Rational) -> Assessment {
        let mut members = self.members.clone();
        members.push(member.with_prevision(mu));
        Assessment { members }
    }
}

/// The points `Q_h` of an assessment, one per constituent inside the
/// disjunction of the conditioning events.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub constituents: Vec<Constituent>,
    pub points: Vec<Vec<Rational>>,
    pub target: Vec<Rational>,
    /// `membership[h][i]` is true iff `C_h ⊆ H_i`.
    pub membership: Vec<Vec<bool>>,
}

impl LinearSystem {
    pub fn rows(&self) -> usize {
        self.points.len()
    }

    pub fn dimension(&self) -> usize {
        self.target.len()
    }

    // Equality constraints over the unknowns lambda_h: one per coordinate,
    // plus the normalization row.
    fn equations(&self) -> (Vec<Vec<Rational>>, Vec<Rational>) {
        let n = self.dimension();
        let mut a: Vec<Vec<Rational>> =
            (0..n).map(|i| self.points.iter().map(|q| q[i].clone()).collect()).collect();
        a.push(vec![Rational::one(); self.rows()]);
        let mut b = self.target.clone();
        b.push(Rational::one());
        (a, b)
    }

    /// Gain values `g_h = Σ s_i (q_hi - mu_i)` over the rows.
    pub fn gains(&self, s: &[Rational]) -> Result<Vec<Rational>> {
        if s.len() != self.dimension() {
            return Err(Error::Dimension { expected: self.dimension(), found: s.len() });
        }
        Ok(self
            .points
            .iter()
            .map(|q| {
                q.iter()
                    .zip(&self.target)
                    .zip(s)
                    .filter(|(_, si)| !si.is_zero())
                    .map(|((qi, mu), si)| si * (qi - mu))
                    .sum()
            })
            .collect())
    }
}

pub fn build_system(a: &Assessment) -> Result<LinearSystem> {
    if a.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let target: Vec<Rational> = a
        .members
        .iter()
        .enumerate()
        .map(|(i, m)| m.prevision().cloned().ok_or(Error::MissingPrevision(i)))
        .collect::<Result<_>>()?;
    let parts = events::constituents(&a.members)?;
    let mut points = Vec::with_capacity(parts.inside.len());
    let mut membership = Vec::with_capacity(parts.inside.len());
    for c in &parts.inside {
        let q = c
            .cells
            .iter()
            .zip(&target)
            .map(|(cell, mu)| cell.value().unwrap_or(mu).clone())
            .collect();
        points.push(q);
        membership.push((0..target.len()).map(|i| c.inside(i)).collect());
    }
    Ok(LinearSystem { constituents: parts.inside, points, target, membership })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    /// A convex combination `Λ` of the rows reproducing the target.
    Feasible(Vec<Rational>),
    /// Bet coefficients `s` whose gains are positive on every row.
    Infeasible { dutch_book: Vec<Rational> },
}

impl Feasibility {
    pub fn witness(&self) -> Option<&[Rational]> {
        match self {
            Feasibility::Feasible(l) => Some(l),
            Feasibility::Infeasible { .. } => None,
        }
    }
}

pub fn solve_feasibility(sys: &LinearSystem) -> Feasibility {
    let (a, b) = sys.equations();
    let zero = vec![Rational::zero(); sys.rows()];
    match simplex::solve(&a, &b, &zero) {
        LpOutcome::Optimal { x, .. } => Feasibility::Feasible(x),
        LpOutcome::Infeasible { mut farkas } => {
            // the last component belongs to the normalization row
            farkas.pop();
            Feasibility::Infeasible { dutch_book: farkas }
        }
        LpOutcome::Unbounded => unreachable!("zero objective cannot be unbounded"),
    }
}

/// `M_j`, the largest total mass any solution puts on constituents inside
/// `H_j`, for every `j`.
pub fn upper_conditioning_masses(sys: &LinearSystem) -> Result<Vec<Rational>> {
    upper_conditioning_masses_with(sys, Exec::default())
}

pub fn upper_conditioning_masses_with(sys: &LinearSystem, exec: Exec) -> Result<Vec<Rational>> {
    let (a, b) = sys.equations();
    let outcomes = exec.map_range(sys.dimension(), |j| {
        let c: Vec<Rational> = sys
            .membership
            .iter()
            .map(|row| if row[j] { Rational::one() } else { Rational::zero() })
            .collect();
        simplex::solve(&a, &b, &c)
    });
    outcomes
        .into_iter()
        .map(|o| match o {
            LpOutcome::Optimal { value, .. } => Ok(value),
            LpOutcome::Infeasible { .. } => Err(Error::Infeasible),
            LpOutcome::Unbounded => unreachable!("masses are bounded by one"),
        })
        .collect()
}

/// One step of the recursive check.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    /// Indices into the original assessment.
    pub indices: Vec<usize>,
    pub solvable: bool,
    /// `M_j` for each index of the level; empty when unsolvable.
    pub upper_masses: Vec<Rational>,
    /// Original indices `j` with `M_j = 0`.
    pub zero_mass: Vec<usize>,
    pub witness: Option<Vec<Rational>>,
}

/// Bet coefficients exposing an incoherent level and the gains they produce.
#[derive(Debug, Clone, PartialEq)]
pub struct GainDiagnostic {
    /// Indices of the level the bets are placed on.
    pub indices: Vec<usize>,
    /// One coefficient per original member, zero outside `indices`.
    pub s: Vec<Rational>,
    /// Gains over the constituents of the level's subfamily.
    pub gains: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceReport {
    pub coherent: bool,
    pub trace: Vec<Level>,
    pub gain_diagnostic: Option<GainDiagnostic>,
}

pub fn check_coherence(a: &Assessment) -> Result<CoherenceReport> {
    check_coherence_with(a, Exec::default())
}

pub fn check_coherence_with(a: &Assessment, exec: Exec) -> Result<CoherenceReport> {
    if a.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mut indices: Vec<usize> = (0..a.len()).collect();
    let mut trace = Vec::new();
    loop {
        let sub = a.subfamily(&indices);
        let sys = build_system(&sub)?;
        match solve_feasibility(&sys) {
            Feasibility::Infeasible { dutch_book } => {
                let gains = sys.gains(&dutch_book)?;
                let mut s = vec![Rational::zero(); a.len()];
                for (&i, si) in indices.iter().zip(&dutch_book) {
                    s[i] = si.clone();
                }
                trace.push(Level {
                    indices: indices.clone(),
                    solvable: false,
                    upper_masses: Vec::new(),
                    zero_mass: Vec::new(),
                    witness: None,
                });
                return Ok(CoherenceReport {
                    coherent: false,
                    trace,
                    gain_diagnostic: Some(GainDiagnostic { indices, s, gains }),
                });
            }
            Feasibility::Feasible(witness) => {
                let masses = upper_conditioning_masses_with(&sys, exec)?;
                let zero_mass: Vec<usize> = indices
                    .iter()
                    .zip(&masses)
                    .filter(|(_, m)| m.is_zero())
                    .map(|(&i, _)| i)
                    .collect();
                debug_assert!(zero_mass.len() < indices.len());
                let done = zero_mass.is_empty();
                trace.push(Level {
                    indices: indices.clone(),
                    solvable: true,
                    upper_masses: masses,
                    zero_mass: zero_mass.clone(),
                    witness: Some(witness),
                });
                if done {
                    return Ok(CoherenceReport { coherent: true, trace, gain_diagnostic: None });
                }
                indices = zero_mass;
            }
        }
    }
}

/// Gains `g_h` of the bets `s_i H_i (X_i - mu_i)` on each constituent
/// `C_1..C_m` of the assessment.
pub fn random_gain(a: &Assessment, s: &[Rational]) -> Result<Vec<Rational>> {
    if s.len() != a.len() {
        return Err(Error::Dimension { expected: a.len(), found: s.len() });
    }
    build_system(a)?.gains(s)
}

/// True iff the gains are all strictly positive or all strictly negative.
pub fn is_dutch_book(gains: &[Rational]) -> bool {
    !gains.is_empty()
        && (gains.iter().all(Signed::is_positive) || gains.iter().all(Signed::is_negative))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crq::{conditional_event, conjunction};
    use crate::events::{Event, Universe};
    use crate::rational::{int, ratio};

    fn atoms(names: &[&str]) -> (Universe, Vec<Event>) {
        let mut u = Universe::new();
        let evs = names.iter().map(|n| u.parse(n).unwrap()).collect();
        (u, evs)
    }

    #[test]
    fn unconditional_event_rows() {
        let (_, e) = atoms(&["A"]);
        let a = Assessment::new(vec![conditional_event(&e[0], &Event::True).unwrap()], vec![ratio(1, 3)]).unwrap();
        let sys = build_system(&a).unwrap();
        let mut rows = sys.points.clone();
        rows.sort();
        assert_eq!(rows, vec![vec![int(0)], vec![int(1)]]);
        assert_eq!(sys.target, vec![ratio(1, 3)]);
    }

    #[test]
    fn eight_points_of_the_conjunction_family() {
        let (_, e) = atoms(&["A", "H", "B", "K"]);
        let (x, y, z) = (ratio(1, 3), ratio(3, 4), ratio(1, 5));
        let ah = conditional_event(&e[0], &e[1]).unwrap().with_prevision(x.clone());
        let bk = conditional_event(&e[2], &e[3]).unwrap().with_prevision(y.clone());
        let conj = conjunction(&ah, &bk).unwrap();
        let a = Assessment::from_members(vec![ah, bk, conj.realized.with_prevision(z)]).unwrap();
        let sys = build_system(&a).unwrap();
        let mut got = sys.points.clone();
        got.sort();
        let (o, l) = (int(0), int(1));
        let mut expected = vec![
            vec![l.clone(), l.clone(), l.clone()],
            vec![l.clone(), o.clone(), o.clone()],
            vec![o.clone(), l.clone(), o.clone()],
            vec![o.clone(), o.clone(), o.clone()],
            vec![l.clone(), y.clone(), y.clone()],
            vec![o.clone(), y.clone(), o.clone()],
            vec![x.clone(), l.clone(), x.clone()],
            vec![x.clone(), o.clone(), o.clone()],
        ];
        expected.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn sure_false_member_has_zero_rows() {
        let (_, e) = atoms(&["H"]);
        let a = Assessment::new(vec![conditional_event(&e[0].not(), &e[0]).unwrap()], vec![ratio(1, 5)]).unwrap();
        let sys = build_system(&a).unwrap();
        assert_eq!(sys.points, vec![vec![int(0)]]);
    }

    #[test]
    fn feasibility_midpoint_and_additivity_violation() {
        let (_, e) = atoms(&["A"]);
        let a = Assessment::new(
            vec![conditional_event(&e[0], &Event::True).unwrap(), conditional_event(&e[0].not(), &Event::True).unwrap()],
            vec![ratio(1, 2), ratio(1, 2)],
        )
        .unwrap();
        let sys = build_system(&a).unwrap();
        assert_eq!(solve_feasibility(&sys).witness().unwrap(), &[ratio(1, 2), ratio(1, 2)]);

        let bad = Assessment::new(a.members().to_vec(), vec![ratio(1, 2), ratio(3, 5)]).unwrap();
        let sys = build_system(&bad).unwrap();
        let Feasibility::Infeasible { dutch_book } = solve_feasibility(&sys) else { panic!() };
        assert!(is_dutch_book(&sys.gains(&dutch_book).unwrap()));
    }

    #[test]
    fn dutch_book_gains_for_additivity_violation() {
        let (_, e) = atoms(&["A"]);
        let a = Assessment::new(
            vec![conditional_event(&e[0], &Event::True).unwrap(), conditional_event(&e[0].not(), &Event::True).unwrap()],
            vec![ratio(1, 2), ratio(3, 5)],
        )
        .unwrap();
        let g = random_gain(&a, &[int(1), int(1)]).unwrap();
        assert_eq!(g, vec![ratio(-1, 10), ratio(-1, 10)]);
        assert!(random_gain(&a, &[int(0), int(0)]).unwrap().iter().all(Zero::is_zero));
        assert!(matches!(random_gain(&a, &[int(1)]), Err(Error::Dimension { .. })));
    }

    #[test]
    fn single_conditional_event_is_coherent_everywhere() {
        let (_, e) = atoms(&["A", "H"]);
        for k in 0..=4 {
            let a = Assessment::new(vec![conditional_event(&e[0], &e[1]).unwrap()], vec![ratio(k, 4)]).unwrap();
            let r = check_coherence(&a).unwrap();
            assert!(r.coherent);
            assert_eq!(r.trace[0].upper_masses, vec![int(1)]);
            for s in [-2, -1, 1, 3] {
                let g = random_gain(&a, &[int(s)]).unwrap();
                assert!(g.iter().any(|v| !v.is_positive()) && g.iter().any(|v| !v.is_negative()));
            }
        }
        let a = Assessment::new(vec![conditional_event(&e[0], &e[1]).unwrap()], vec![ratio(5, 4)]).unwrap();
        assert!(!check_coherence(&a).unwrap().coherent);
    }

    #[test]
    fn complement_given_itself_forces_zero() {
        let (_, e) = atoms(&["H"]);
        let a = Assessment::new(vec![conditional_event(&e[0].not(), &e[0]).unwrap()], vec![ratio(1, 5)]).unwrap();
        let r = check_coherence(&a).unwrap();
        assert!(!r.coherent);
        assert!(is_dutch_book(&r.gain_diagnostic.unwrap().gains));
    }

    #[test]
    fn disjoint_conditioning_masses() {
        let (_, e) = atoms(&["A", "H", "B"]);
        let k = e[2].and(&e[1].not());
        let a = Assessment::new(
            vec![conditional_event(&e[0], &e[1]).unwrap(), conditional_event(&e[2], &k).unwrap()],
            vec![ratio(1, 2), ratio(1, 3)],
        );
        // B|K with K ⊆ B is the sure event on K
        let r = check_coherence(&a.unwrap()).unwrap();
        assert!(!r.coherent);

        let kk = e[2].not().and(&e[1].not());
        let bk = Crq::new(kk.clone(), vec![(e[0].clone(), int(1)), (e[0].not(), int(0))]).unwrap();
        let a = Assessment::new(vec![conditional_event(&e[0], &e[1]).unwrap(), bk], vec![ratio(1, 2), ratio(2, 5)]).unwrap();
        let sys = build_system(&a).unwrap();
        assert_eq!(upper_conditioning_masses(&sys).unwrap(), vec![int(1), int(1)]);
        assert!(check_coherence(&a).unwrap().coherent);
    }

    #[test]
    fn zero_mass_triggers_recursion() {
        // P(H) = 0 leaves A|H to be checked on its own
        let (_, e) = atoms(&["A", "H"]);
        let a = Assessment::new(
            vec![conditional_event(&e[1], &Event::True).unwrap(), conditional_event(&e[0], &e[1]).unwrap()],
            vec![int(0), ratio(2, 3)],
        )
        .unwrap();
        let r = check_coherence(&a).unwrap();
        assert!(r.coherent);
        assert_eq!(r.trace.len(), 2);
        assert_eq!(r.trace[0].zero_mass, vec![1]);
        assert_eq!(r.trace[1].indices, vec![1]);

        // ... and P(H^c|H) = 1/5 under P(H) = 0 is caught at the second level
        let b = Assessment::new(
            vec![conditional_event(&e[1], &Event::True).unwrap(), conditional_event(&e[1].not(), &e[1]).unwrap()],
            vec![int(0), ratio(1, 5)],
        )
        .unwrap();
        let r = check_coherence(&b).unwrap();
        assert!(!r.coherent);
        assert_eq!(r.trace.len(), 2);
        let diag = r.gain_diagnostic.unwrap();
        assert_eq!(diag.indices, vec![1]);
        assert!(diag.s[0].is_zero());
        assert!(is_dutch_book(&diag.gains));
    }

    #[test]
    fn empty_and_missing_prevision() {
        assert_eq!(check_coherence(&Assessment::from_members(vec![]).unwrap()), Err(Error::EmptyFamily));
        let (_, e) = atoms(&["A"]);
        let c = conditional_event(&e[0], &Event::True).unwrap();
        assert_eq!(Assessment::from_members(vec![c.clone()]), Err(Error::MissingPrevision(0)));
        assert!(matches!(Assessment::new(vec![c], vec![]), Err(Error::Dimension { .. })));
    }
}
