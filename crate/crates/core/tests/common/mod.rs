//! Test-only brute-force coherence oracle and random fixtures.
//!
//! The oracle never touches the simplex or the constituent enumeration: it
//! evaluates every world directly, enumerates all supports of at most
//! `n + 1` points, solves each square system by Gaussian elimination, and
//! keeps the nonnegative solutions. Those are exactly the vertices of the
//! solution polytope, so feasibility and every `M_j` follow by inspection.

#![allow(dead_code)]

use coherence_core::crq::{conditional_event, Crq};
use coherence_core::events::{self, Event};
use coherence_core::rational::{int, ratio, Rational};
use coherence_core::Assessment;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Points of the assessment, one per distinct (values, membership) pair over
/// the worlds inside the disjunction of the conditioning events.
pub fn oracle_points(a: &Assessment) -> (Vec<Vec<Rational>>, Vec<Vec<bool>>) {
    let members = a.members();
    let support = members.iter().fold(0, |acc, m| acc | m.support());
    let mut points: Vec<(Vec<Rational>, Vec<bool>)> = Vec::new();
    for w in events::worlds(support).unwrap() {
        let inside: Vec<bool> = members.iter().map(|m| m.given().eval(w)).collect();
        if !inside.iter().any(|&b| b) {
            continue;
        }
        let q: Vec<Rational> = members.iter().map(|m| m.value(w).unwrap()).collect();
        if !points.iter().any(|(p, i)| *p == q && *i == inside) {
            points.push((q, inside));
        }
    }
    points.into_iter().unzip()
}

/// Unique solution of `cols · λ = rhs` when the columns are independent and
/// the system is consistent.
pub fn solve_exact(cols: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let rows = rhs.len();
    let k = cols.len();
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..k {
        let p = (pivot_row..rows).find(|&r| !m[r][col].is_zero())?;
        m.swap(pivot_row, p);
        let inv = m[pivot_row][col].recip();
        for v in m[pivot_row].iter_mut() {
            *v *= &inv;
        }
        let pr = m[pivot_row].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != pivot_row && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&pr) {
                    *v -= &f * pv;
                }
            }
        }
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    Some((0..k).map(|c| m[c][k].clone()).collect())
}

fn subsets(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max {
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, max, cur, out);
            cur.pop();
        }
    }
    rec(0, n, max, &mut cur, &mut out);
    out
}

/// All vertices of `{λ >= 0 : Σ λ_h Q_h = target, Σ λ_h = 1}`.
pub fn vertices(points: &[Vec<Rational>], target: &[Rational]) -> Vec<Vec<Rational>> {
    let n = target.len();
    let mut rhs = target.to_vec();
    rhs.push(int(1));
    let mut out = Vec::new();
    for s in subsets(points.len(), n + 1) {
        let cols: Vec<Vec<Rational>> = s
            .iter()
            .map(|&h| {
                let mut c = points[h].clone();
                c.push(int(1));
                c
            })
            .collect();
        if let Some(l) = solve_exact(&cols, &rhs) {
            if l.iter().all(|v| !v.is_negative()) {
                let mut full = vec![Rational::zero(); points.len()];
                for (&h, v) in s.iter().zip(l) {
                    full[h] = v;
                }
                out.push(full);
            }
        }
    }
    out
}

pub fn in_hull(a: &Assessment) -> bool {
    let (points, _) = oracle_points(a);
    !vertices(&points, &a.previsions()).is_empty()
}

/// Coherence by hull membership, recursing on the zero-mass indices.
pub fn oracle_coherent(a: &Assessment) -> bool {
    let (points, membership) = oracle_points(a);
    let verts = vertices(&points, &a.previsions());
    if verts.is_empty() {
        return false;
    }
    let zero_mass: Vec<usize> = (0..a.len())
        .filter(|&j| {
            verts.iter().all(|l| {
                l.iter().zip(&membership).filter(|(_, inside)| inside[j]).all(|(v, _)| v.is_zero())
            })
        })
        .collect();
    zero_mass.is_empty() || oracle_coherent(&a.subfamily(&zero_mass))
}

/// Coherence as solvability of every subfamily's system.
pub fn oracle_coherent_all_subsets(a: &Assessment) -> bool {
    let n = a.len();
    (1u32..1 << n).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        in_hull(&a.subfamily(&idx))
    })
}

pub fn atoms(k: usize) -> Vec<Event> {
    (0..k).map(Event::atom).collect()
}

fn random_formula(rng: &mut ChaCha8Rng, k: usize, depth: u32) -> Event {
    if depth == 0 || rng.random_bool(0.35) {
        let a = Event::atom(rng.random_range(0..k));
        return if rng.random_bool(0.3) { a.not() } else { a };
    }
    let l = random_formula(rng, k, depth - 1);
    let r = random_formula(rng, k, depth - 1);
    match rng.random_range(0..3) {
        0 => l.and(&r),
        1 => l.or(&r),
        _ => l.and(&r).not(),
    }
}

fn random_prevision(rng: &mut ChaCha8Rng) -> Rational {
    match rng.random_range(0..10) {
        0 => int(0),
        1 => int(1),
        _ => {
            let d = rng.random_range(1..=8);
            ratio(rng.random_range(0..=d), d)
        }
    }
}

/// A random assessment of at most three members over at most four atoms.
pub fn random_assessment(seed: u64) -> Assessment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.random_range(2..=4);
    let n = rng.random_range(1..=3);
    let mut members: Vec<Crq> = Vec::new();
    while members.len() < n {
        let h = if rng.random_bool(0.15) { Event::True } else { random_formula(&mut rng, k, 2) };
        if events::is_impossible(&h) {
            continue;
        }
        // reuse an earlier antecedent now and then to create dependencies
        let h = match members.last() {
            Some(prev) if rng.random_bool(0.2) => prev.given().clone(),
            _ => h,
        };
        let a = random_formula(&mut rng, k, 2);
        let crq = if rng.random_bool(0.8) {
            conditional_event(&a, &h).unwrap().with_prevision(random_prevision(&mut rng))
        } else {
            let v1 = ratio(rng.random_range(0..=4), 2);
            let v2 = ratio(rng.random_range(0..=4), 2);
            let crq = Crq::new(h, vec![(a.clone(), v1), (a.not(), v2)]).unwrap();
            let mu = ratio(rng.random_range(0..=8), 4);
            crq.with_prevision(mu)
        };
        members.push(crq);
    }
    Assessment::from_members(members).unwrap()
}
