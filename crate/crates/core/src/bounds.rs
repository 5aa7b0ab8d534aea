//! Coherent extensions of an assessment to one more quantity.
//!
//! For a target `T|H_t` whose values inside `H_t` do not depend on its own
//! prevision `z`, the target row of the extended system reads
//! `Σ_{C_h ⊆ H_t} λ_h (v_h - z) = 0`. Solutions of the base system that put
//! positive mass on `H_t` pin `z` to the range of a linear objective over a
//! polytope, so that range comes from two exact LPs. Solutions with zero
//! mass on `H_t` leave `z` free at the first level; the target then joins the
//! zero-mass indices and `z` is constrained only by the base members that
//! also carry zero mass on those solutions. The extension set is the hull of
//! both ranges.

use num_traits::{One, Zero};

use crate::coherence::{
    build_system, check_coherence, simplex, solve_feasibility, upper_conditioning_masses, Assessment,
    LinearSystem,
};
use crate::crq::Crq;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionInterval {
    pub lower: Rational,
    pub upper: Rational,
    /// Both endpoints passed the full coherence check.
    pub attained: bool,
}

impl ExtensionInterval {
    pub fn contains(&self, z: &Rational) -> bool {
        self.lower <= *z && *z <= self.upper
    }
}

/// The interval of previsions for `target` that extend the coherent `base`.
pub fn extension_interval(base: &Assessment, target: &Crq) -> Result<ExtensionInterval> {
    if !base.is_empty() && !check_coherence(base)?.coherent {
        return Err(Error::IncoherentBase);
    }
    let target = target.clone().without_prevision();
    let (lower, upper) = raw_interval(base, &target)?;
    for z in [&lower, &upper] {
        if !check_coherence(&base.with_member(target.clone(), z.clone()))?.coherent {
            return Err(Error::EndpointVerification(z.to_string()));
        }
    }
    Ok(ExtensionInterval { lower, upper, attained: true })
}

fn raw_interval(base: &Assessment, target: &Crq) -> Result<(Rational, Rational)> {
    if base.is_empty() {
        let values = target.restricted_values();
        let lo = values.first().cloned().ok_or(Error::ImpossibleConditioning)?;
        let hi = values.last().cloned().ok_or(Error::ImpossibleConditioning)?;
        return Ok((lo, hi));
    }
    let n = base.len();
    // the placeholder prevision never enters the LPs below
    let sys = build_system(&base.with_member(target.clone(), Rational::zero()))?;
    let positive = positive_mass_range(&sys, n);
    let free = match zero_mass_system(&sys, n) {
        Some(rest) => {
            let masses = upper_conditioning_masses(&rest)?;
            let zero_mass: Vec<usize> = (0..n).filter(|&i| masses[i].is_zero()).collect();
            Some(raw_interval(&base.subfamily(&zero_mass), target)?)
        }
        None => None,
    };
    match (positive, free) {
        (Some((lo, hi)), Some((flo, fhi))) => Ok((lo.min(flo), hi.max(fhi))),
        (Some(range), None) | (None, Some(range)) => Ok(range),
        (None, None) => unreachable!("a coherent base has solutions"),
    }
}

/// Range of `z` over base solutions with positive mass on `H_t`, after the
/// Charnes-Cooper rescaling that normalizes that mass to one.
fn positive_mass_range(sys: &LinearSystem, n: usize) -> Option<(Rational, Rational)> {
    let m = sys.rows();
    let zero = Rational::zero;

    // unknowns: lambda_1..lambda_m, tau
    let mut a: Vec<Vec<Rational>> = Vec::with_capacity(n + 2);
    let mut b: Vec<Rational> = Vec::with_capacity(n + 2);
    for i in 0..n {
        let mut row: Vec<Rational> = sys.points.iter().map(|q| q[i].clone()).collect();
        row.push(-sys.target[i].clone());
        a.push(row);
        b.push(zero());
    }
    let mut norm = vec![Rational::one(); m];
    norm.push(-Rational::one());
    a.push(norm);
    b.push(zero());
    let mut mass: Vec<Rational> = sys
        .membership
        .iter()
        .map(|row| if row[n] { Rational::one() } else { zero() })
        .collect();
    mass.push(zero());
    a.push(mass);
    b.push(Rational::one());

    let mut objective: Vec<Rational> = sys
        .points
        .iter()
        .zip(&sys.membership)
        .map(|(q, inside)| if inside[n] { q[n].clone() } else { zero() })
        .collect();
    objective.push(zero());
    let negated: Vec<Rational> = objective.iter().map(|v| -v.clone()).collect();

    match simplex::solve(&a, &b, &objective) {
        simplex::LpOutcome::Optimal { value: upper, .. } => {
            let simplex::LpOutcome::Optimal { value: neg_lower, .. } = simplex::solve(&a, &b, &negated)
            else {
                unreachable!("same polytope, bounded objective");
            };
            Some((-neg_lower, upper))
        }
        simplex::LpOutcome::Infeasible { .. } => None,
        simplex::LpOutcome::Unbounded => unreachable!("objective bounded by the target's values"),
    }
}

/// The base system restricted to constituents outside `H_t`, when it is
/// solvable.
fn zero_mass_system(sys: &LinearSystem, n: usize) -> Option<LinearSystem> {
    let keep: Vec<usize> = (0..sys.rows()).filter(|&h| !sys.membership[h][n]).collect();
    if keep.is_empty() {
        return None;
    }
    let rest = LinearSystem {
        constituents: keep.iter().map(|&h| sys.constituents[h].clone()).collect(),
        points: keep.iter().map(|&h| sys.points[h][..n].to_vec()).collect(),
        target: sys.target[..n].to_vec(),
        membership: keep.iter().map(|&h| sys.membership[h][..n].to_vec()).collect(),
    };
    solve_feasibility(&rest).witness().is_some().then_some(rest)
}

fn check_unit(values: &[&Rational]) -> Result<()> {
    match values.iter().find(|v| !rational::in_unit_interval(v)) {
        Some(v) => Err(Error::OutOfRange(v.to_string())),
        None => Ok(()),
    }
}

/// `(max{x+y-1, 0}, min{x, y})`.
pub fn frechet_conjunction_bounds(x: &Rational, y: &Rational) -> Result<(Rational, Rational)> {
    check_unit(&[x, y])?;
    let lower = (x + y - Rational::one()).max(Rational::zero());
    Ok((lower, x.min(y).clone()))
}

/// `(max{x, y}, min{x+y, 1})`, the image of the conjunction bounds under
/// `γ = x + y - z`.
pub fn disjunction_bounds(x: &Rational, y: &Rational) -> Result<(Rational, Rational)> {
    check_unit(&[x, y])?;
    Ok((x.max(y).clone(), (x + y).min(Rational::one())))
}

/// `(max{x+y-1, 0}, (x+y-2xy)/(1-xy))`, with upper bound one at `x = y = 1`.
pub fn quasi_conjunction_bounds(x: &Rational, y: &Rational) -> Result<(Rational, Rational)> {
    check_unit(&[x, y])?;
    let one = Rational::one();
    let lower = (x + y - &one).max(Rational::zero());
    let xy = x * y;
    let upper = if xy.is_one() {
        one
    } else {
        (x + y - &xy - &xy) / (one - xy)
    };
    Ok((lower, upper))
}

/// `{0, 1/d, .., 1}`.
pub fn unit_grid(denominator: i64) -> Vec<Rational> {
    (0..=denominator).map(|k| rational::ratio(k, denominator)).collect()
}
