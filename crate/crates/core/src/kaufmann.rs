//! Repeated-trial simulation of conditionals.
//!
//! Each trial draws i.i.d. worlds from a finite joint distribution until the
//! antecedent holds, then records the conditional's value at that world.
//! Trials that reach `max_len` draws without the antecedent are counted as
//! indeterminate and left out of the mean.
//!
//! Sampling uses ChaCha8 seeded with `seed`, one stream per batch of
//! [`BATCH_SIZE`] trials, so estimates are identical whether batches run
//! sequentially or on the rayon pool.

use num_traits::{One, Pow, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::events::{self, Event};
use crate::exec::Exec;
use crate::rational::{self, Rational};

/// Generator identifier recorded alongside simulation output.
pub const RNG_ALGORITHM: &str = "chacha8/stream-per-batch";
pub const BATCH_SIZE: u64 = 4096;

/// Probability mass over worlds of a small atom set.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    entries: Vec<(u64, Rational)>,
}

impl JointDistribution {
    pub fn new(entries: Vec<(u64, Rational)>) -> Result<JointDistribution> {
        if let Some((w, p)) = entries.iter().find(|(_, p)| p.is_negative()) {
            return Err(Error::BadDistribution(format!("negative mass {p} at world {w:#b}")));
        }
        let total: Rational = entries.iter().map(|(_, p)| p.clone()).sum();
        if !total.is_one() {
            return Err(Error::BadDistribution(format!("total mass {total}")));
        }
        let mut merged: Vec<(u64, Rational)> = Vec::new();
        for (w, p) in entries {
            match merged.iter_mut().find(|(mw, _)| *mw == w) {
                Some(slot) => slot.1 += p,
                None => merged.push((w, p)),
            }
        }
        merged.retain(|(_, p)| !p.is_zero());
        merged.sort_by_key(|(w, _)| *w);
        Ok(JointDistribution { entries: merged })
    }

    /// Product measure with `P(atom_i) = p_i`.
    pub fn independent(marginals: &[(usize, Rational)]) -> Result<JointDistribution> {
        if let Some((_, p)) = marginals.iter().find(|(_, p)| !rational::in_unit_interval(p)) {
            return Err(Error::OutOfRange(p.to_string()));
        }
        let support = marginals.iter().fold(0u64, |acc, (i, _)| acc | 1 << i);
        let entries = events::worlds(support)?
            .map(|w| {
                let p = marginals.iter().fold(Rational::one(), |acc, (i, p)| {
                    if w >> i & 1 == 1 {
                        acc * p
                    } else {
                        acc * (Rational::one() - p)
                    }
                });
                (w, p)
            })
            .collect();
        JointDistribution::new(entries)
    }

    /// Two atoms, `A` (index 0) and `C` (index 1), with `P(A) = pa` and
    /// `P(AC) = pac`; the mass of `A^c` sits on `A^cC^c`.
    pub fn from_antecedent(pa: &Rational, pac: &Rational) -> Result<JointDistribution> {
        if !rational::in_unit_interval(pa) {
            return Err(Error::OutOfRange(pa.to_string()));
        }
        if pac.is_negative() || pac > pa {
            return Err(Error::OutOfRange(pac.to_string()));
        }
        JointDistribution::new(vec![
            (0b11, pac.clone()),
            (0b01, pa - pac),
            (0b00, Rational::one() - pa),
        ])
    }

    pub fn entries(&self) -> &[(u64, Rational)] {
        &self.entries
    }

    pub fn prob(&self, event: &Event) -> Rational {
        self.entries.iter().filter(|(w, _)| event.eval(*w)).map(|(_, p)| p.clone()).sum()
    }

    pub fn conditional(&self, event: &Event, given: &Event, name: &'static str) -> Result<Rational> {
        let pg = self.prob(given);
        if pg.is_zero() {
            return Err(Error::ZeroProbability(name));
        }
        Ok(self.prob(&event.and(given)) / pg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimEstimate {
    pub mean: f64,
    pub trials: u64,
    pub indeterminate_count: u64,
    pub std_error: f64,
}

impl SimEstimate {
    pub fn indeterminate_fraction(&self) -> f64 {
        self.indeterminate_count as f64 / self.trials as f64
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SimOptions {
    pub trials: u64,
    pub max_len: u32,
    pub seed: u64,
    pub exec: Exec,
}

impl SimOptions {
    pub fn new(trials: u64, max_len: u32, seed: u64) -> SimOptions {
        SimOptions { trials, max_len, seed, exec: Exec::default() }
    }
}

// Per distribution entry: cumulative mass, whether the trial stops there,
// and the recorded value.
struct Table {
    cumulative: Vec<f64>,
    stops: Vec<bool>,
    values: Vec<f64>,
}

#[derive(Default, Clone, Copy)]
struct Tally {
    sum: f64,
    sum_sq: f64,
    determinate: u64,
    indeterminate: u64,
}

fn run(table: &Table, opts: &SimOptions) -> Result<SimEstimate> {
    if opts.trials == 0 {
        return Err(Error::NonPositive("trials"));
    }
    if opts.max_len == 0 {
        return Err(Error::NonPositive("max_len"));
    }
    let batches = opts.trials.div_ceil(BATCH_SIZE);
    let tallies = opts.exec.map_range(batches as usize, |batch| {
        let batch = batch as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(batch);
        let count = BATCH_SIZE.min(opts.trials - batch * BATCH_SIZE);
        let mut t = Tally::default();
        for _ in 0..count {
            let mut outcome = None;
            for _ in 0..opts.max_len {
                let u: f64 = rng.random();
                let k = table.cumulative.partition_point(|&c| c <= u).min(table.cumulative.len() - 1);
                if table.stops[k] {
                    outcome = Some(table.values[k]);
                    break;
                }
            }
            match outcome {
                Some(v) => {
                    t.sum += v;
                    t.sum_sq += v * v;
                    t.determinate += 1;
                }
                None => t.indeterminate += 1,
            }
        }
        t
    });
    let total = tallies.iter().fold(Tally::default(), |acc, t| Tally {
        sum: acc.sum + t.sum,
        sum_sq: acc.sum_sq + t.sum_sq,
        determinate: acc.determinate + t.determinate,
        indeterminate: acc.indeterminate + t.indeterminate,
    });
    if total.determinate == 0 {
        return Err(Error::AllIndeterminate);
    }
    let n = total.determinate as f64;
    let mean = total.sum / n;
    let variance = if total.determinate > 1 {
        ((total.sum_sq - total.sum * total.sum / n) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(SimEstimate {
        mean,
        trials: opts.trials,
        indeterminate_count: total.indeterminate,
        std_error: (variance / n).sqrt(),
    })
}

fn table(dist: &JointDistribution, stop: &Event, value: impl Fn(u64) -> f64) -> Table {
    let mut acc = Rational::zero();
    let mut cumulative = Vec::with_capacity(dist.entries.len());
    for (_, p) in &dist.entries {
        acc += p;
        cumulative.push(rational::to_f64(&acc));
    }
    Table {
        cumulative,
        stops: dist.entries.iter().map(|(w, _)| stop.eval(*w)).collect(),
        values: dist.entries.iter().map(|(w, _)| value(*w)).collect(),
    }
}

/// Estimates `P(consequent | antecedent)` by stopping at the first world
/// where the antecedent holds.
pub fn simulate_conditional(
    dist: &JointDistribution,
    antecedent: &Event,
    consequent: &Event,
    opts: &SimOptions,
) -> Result<SimEstimate> {
    if dist.prob(antecedent).is_zero() {
        return Err(Error::ZeroProbability("antecedent"));
    }
    let t = table(dist, antecedent, |w| if consequent.eval(w) { 1.0 } else { 0.0 });
    run(&t, opts)
}

/// Estimates the prevision of `(B|A) ∧ (D|C)`: stop at the first world where
/// `A ∨ C` holds and record 1 on `ABCD`, 0 where a consequent fails,
/// `P(B|A)` on `A^cCD` and `P(D|C)` on `ABC^c`.
pub fn simulate_conjunction(
    dist: &JointDistribution,
    [a, b, c, d]: [&Event; 4],
    opts: &SimOptions,
) -> Result<SimEstimate> {
    let (x, y) = conjunction_slots(dist, [a, b, c, d])?;
    let (x, y) = (rational::to_f64(&x), rational::to_f64(&y));
    let t = table(dist, &a.or(c), |w| conjunction_value(w, [a, b, c, d], x, y));
    run(&t, opts)
}

fn conjunction_value(w: u64, [a, b, c, d]: [&Event; 4], x: f64, y: f64) -> f64 {
    let (va, vb, vc, vd) = (a.eval(w), b.eval(w), c.eval(w), d.eval(w));
    if (va && !vb) || (vc && !vd) {
        0.0
    } else if va && vc {
        1.0
    } else if vc {
        x
    } else {
        y
    }
}

// P(B|A) and P(D|C), required only when the cells that use them have mass.
fn conjunction_slots(dist: &JointDistribution, [a, b, c, d]: [&Event; 4]) -> Result<(Rational, Rational)> {
    if dist.prob(&a.or(c)).is_zero() {
        return Err(Error::ZeroProbability("antecedent disjunction"));
    }
    let x = if dist.prob(a).is_zero() {
        if !dist.prob(&a.not().and(c).and(d)).is_zero() {
            return Err(Error::ZeroProbability("first antecedent"));
        }
        Rational::zero()
    } else {
        dist.conditional(b, a, "first antecedent")?
    };
    let y = if dist.prob(c).is_zero() {
        if !dist.prob(&a.and(b).and(&c.not())).is_zero() {
            return Err(Error::ZeroProbability("second antecedent"));
        }
        Rational::zero()
    } else {
        dist.conditional(d, c, "second antecedent")?
    };
    Ok((x, y))
}

/// `(P(ABCD) + P(B|A) P(A^cCD) + P(D|C) P(ABC^c)) / P(A ∨ C)`.
pub fn conjunction_prevision(dist: &JointDistribution, [a, b, c, d]: [&Event; 4]) -> Result<Rational> {
    let (x, y) = conjunction_slots(dist, [a, b, c, d])?;
    let abcd = dist.prob(&Event::all([a, b, c, d]));
    let acd = dist.prob(&Event::all([&a.not(), c, d]));
    let abc = dist.prob(&Event::all([a, b, &c.not()]));
    Ok((abcd + x * acd + y * abc) / dist.prob(&a.or(c)))
}

/// Solves `z = P(H_1 ∨ H_2) + z P(H_3)` for the `n`-pair truncation, where
/// `P(H_1 ∨ H_2) = P(AC) Σ_{k<n} P(A^c)^k` and `P(H_3) = P(A^c)^n`.
pub fn finite_n_fixed_point(pa: &Rational, pac: &Rational, n: u32) -> Result<Rational> {
    if pa.is_zero() {
        return Err(Error::ZeroProbability("antecedent"));
    }
    if !rational::in_unit_interval(pa) {
        return Err(Error::OutOfRange(pa.to_string()));
    }
    if pac.is_negative() || pac > pa {
        return Err(Error::OutOfRange(pac.to_string()));
    }
    if n == 0 {
        return Err(Error::NonPositive("n"));
    }
    let miss = Rational::one() - pa;
    let geometric: Rational = (0..n).map(|k| Pow::pow(&miss, k)).sum();
    let resolved = pac * geometric;
    let indeterminate = Pow::pow(&miss, n);
    Ok(resolved / (Rational::one() - indeterminate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::events::Universe;
    use crate::rational::{int, ratio};

    fn ac() -> (Event, Event) {
        (Event::atom(0), Event::atom(1))
    }

    #[test]
    fn distribution_validation() {
        assert!(JointDistribution::new(vec![(0, ratio(1, 2))]).is_err());
        assert!(JointDistribution::new(vec![(0, ratio(3, 2)), (1, ratio(-1, 2))]).is_err());
        let d = JointDistribution::independent(&[(0, ratio(1, 2)), (1, ratio(1, 3))]).unwrap();
        assert_eq!(d.prob(&Event::atom(1)), ratio(1, 3));
        assert_eq!(d.prob(&Event::atom(0).and(&Event::atom(1))), ratio(1, 6));
    }

    #[test]
    fn fixed_point_is_n_invariant() {
        for n in [1, 2, 10, 50] {
            assert_eq!(finite_n_fixed_point(&ratio(1, 2), &ratio(1, 4), n).unwrap(), ratio(1, 2));
        }
        assert_eq!(finite_n_fixed_point(&int(1), &ratio(2, 7), 3).unwrap(), ratio(2, 7));
        assert_eq!(finite_n_fixed_point(&int(0), &int(0), 3), Err(Error::ZeroProbability("antecedent")));
    }

    #[test]
    fn conditional_estimate() {
        let (a, c) = ac();
        let d = JointDistribution::from_antecedent(&ratio(1, 2), &ratio(1, 4)).unwrap();
        let est = simulate_conditional(&d, &a, &c, &SimOptions::new(20_000, 40, 3)).unwrap();
        assert!((est.mean - 0.5).abs() <= 3.0 * est.std_error, "{est:?}");
    }

    #[test]
    fn sure_antecedent_and_sure_consequent() {
        let (a, c) = ac();
        let d = JointDistribution::from_antecedent(&ratio(1, 2), &ratio(1, 4)).unwrap();
        let est = simulate_conditional(&d, &Event::True, &c, &SimOptions::new(5000, 1, 1)).unwrap();
        assert_eq!(est.indeterminate_count, 0);
        assert!((est.mean - 0.25).abs() <= 3.0 * est.std_error);
        let est = simulate_conditional(&d, &a, &a.or(&c), &SimOptions::new(5000, 40, 1)).unwrap();
        assert_eq!(est.mean, 1.0);
    }

    #[test]
    fn errors() {
        let (a, c) = ac();
        let d = JointDistribution::from_antecedent(&int(0), &int(0)).unwrap();
        assert_eq!(
            simulate_conditional(&d, &a, &c, &SimOptions::new(10, 5, 0)),
            Err(Error::ZeroProbability("antecedent"))
        );
        let d = JointDistribution::from_antecedent(&ratio(1, 2), &ratio(1, 4)).unwrap();
        assert_eq!(simulate_conditional(&d, &a, &c, &SimOptions::new(0, 5, 0)), Err(Error::NonPositive("trials")));
    }

    #[test]
    fn sequential_and_parallel_agree_bitwise() {
        let (a, c) = ac();
        let d = JointDistribution::from_antecedent(&ratio(1, 3), &ratio(1, 5)).unwrap();
        let mut opts = SimOptions::new(30_000, 10, 99);
        opts.exec = Exec::Sequential;
        let seq = simulate_conditional(&d, &a, &c, &opts).unwrap();
        opts.exec = Exec::Parallel;
        let par = simulate_conditional(&d, &a, &c, &opts).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn conjunction_formula_under_fair_coins() {
        let mut u = Universe::new();
        let ev: Vec<Event> = ["A", "B", "C", "D"].iter().map(|n| u.parse(n).unwrap()).collect();
        let d = JointDistribution::independent(&[(0, ratio(1, 2)), (1, ratio(1, 2)), (2, ratio(1, 2)), (3, ratio(1, 2))])
            .unwrap();
        let p = conjunction_prevision(&d, [&ev[0], &ev[1], &ev[2], &ev[3]]).unwrap();
        assert_eq!(p, ratio(1, 4));
        let sure = conjunction_prevision(&d, [&ev[0], &Event::True, &ev[2], &Event::True]).unwrap();
        assert_eq!(sure, int(1));
        let est = simulate_conjunction(&d, [&ev[0], &Event::True, &ev[2], &Event::True], &SimOptions::new(2000, 40, 5)).unwrap();
        assert_eq!(est.mean, 1.0);
    }

    #[test]
    fn idempotent_conjunction_reduces_to_conditional() {
        let (a, c) = ac();
        let d = JointDistribution::from_antecedent(&ratio(2, 5), &ratio(1, 5)).unwrap();
        let opts = SimOptions::new(10_000, 40, 8);
        let conj = simulate_conjunction(&d, [&a, &c, &a, &c], &opts).unwrap();
        let cond = simulate_conditional(&d, &a, &c, &opts).unwrap();
        assert_eq!(conj, cond);
        assert_eq!(conjunction_prevision(&d, [&a, &c, &a, &c]).unwrap(), ratio(1, 2));
    }
}
