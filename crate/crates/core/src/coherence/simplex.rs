//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Solves `max c·x  s.t.  A x = b, x >= 0`. Phase one minimizes the sum of
//! artificial variables; when that optimum is positive the phase-one duals
//! give a Farkas vector `f` with `fᵀA >= 0` and `fᵀb < 0`.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible { farkas: Vec<Rational> },
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Index of the right-hand-side column.
    rhs: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].recip();
        if !inv.is_one() {
            for v in self.rows[row].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for (v, p) in r.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        self.basis[row] = col;
    }

    fn reduced_costs(&self, cost: &[Rational], cols: usize) -> Vec<Rational> {
        (0..cols)
            .map(|j| {
                let mut r = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    let (cb, t) = (&cost[b], &self.rows[i][j]);
                    if !cb.is_zero() && !t.is_zero() {
                        r -= cb * t;
                    }
                }
                r
            })
            .collect()
    }

    /// Minimizes `cost` over columns `0..cols`. Returns false when unbounded.
    fn minimize(&mut self, cost: &[Rational], cols: usize) -> bool {
        loop {
            let reduced = self.reduced_costs(cost, cols);
            let Some(enter) = reduced.iter().position(|r| r.is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, r) in self.rows.iter().enumerate() {
                if !r[enter].is_positive() {
                    continue;
                }
                let ratio = &r[self.rhs] / &r[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((row, _)) => self.pivot(row, enter),
                None => return false,
            }
        }
    }
}

/// Maximizes `c·x` subject to `a x = b`, `x >= 0`.
pub fn solve(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    debug_assert!(a.iter().all(|r| r.len() == n));
    debug_assert_eq!(b.len(), m);

    let signs: Vec<bool> = b.iter().map(|v| v.is_negative()).collect();
    let width = n + m + 1;
    let rows: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row = vec![Rational::zero(); width];
            for j in 0..n {
                row[j] = if signs[i] { -a[i][j].clone() } else { a[i][j].clone() };
            }
            row[n + i] = Rational::one();
            row[n + m] = if signs[i] { -b[i].clone() } else { b[i].clone() };
            row
        })
        .collect();
    let mut tab = Tableau { rows, basis: (n..n + m).collect(), rhs: n + m };

    // phase one
    let mut cost = vec![Rational::zero(); n + m];
    for v in cost.iter_mut().skip(n) {
        *v = Rational::one();
    }
    tab.minimize(&cost, n + m);
    let infeasibility: Rational = tab
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= n)
        .map(|(i, _)| tab.rows[i][tab.rhs].clone())
        .sum();
    if infeasibility.is_positive() {
        let reduced = tab.reduced_costs(&cost, n + m);
        let farkas = (0..m)
            .map(|k| {
                let y = Rational::one() - &reduced[n + k];
                if signs[k] {
                    y
                } else {
                    -y
                }
            })
            .collect();
        return LpOutcome::Infeasible { farkas };
    }

    // drive zero-level artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] >= n {
            match (0..n).find(|&j| !tab.rows[i][j].is_zero()) {
                Some(j) => tab.pivot(i, j),
                None => {
                    tab.rows.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    // phase two
    let neg_c: Vec<Rational> = c.iter().map(|v| -v.clone()).collect();
    if !tab.minimize(&neg_c, n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &bv) in tab.basis.iter().enumerate() {
        x[bv] = tab.rows[i][tab.rhs].clone();
    }
    let value = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    LpOutcome::Optimal { x, value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn small_maximization() {
        // max x0 + x1 s.t. x0 + 2x1 + s0 = 4, 3x0 + x1 + s1 = 6
        let a = mat(&[&[1, 2, 1, 0], &[3, 1, 0, 1]]);
        let b = vec![int(4), int(6)];
        let c = vec![int(1), int(1), int(0), int(0)];
        match solve(&a, &b, &c) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, ratio(14, 5));
                assert_eq!(x[0], ratio(8, 5));
                assert_eq!(x[1], ratio(6, 5));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_yields_farkas_vector() {
        // x0 = 1/2, x1 = 3/5, x0 + x1 = 1
        let a = mat(&[&[1, 0], &[0, 1], &[1, 1]]);
        let b = vec![ratio(1, 2), ratio(3, 5), int(1)];
        let LpOutcome::Infeasible { farkas } = solve(&a, &b, &[int(0), int(0)]) else {
            panic!("expected infeasible");
        };
        for j in 0..2 {
            let col: Rational = farkas.iter().zip(&a).map(|(f, row)| f * &row[j]).sum();
            assert!(!col.is_negative());
        }
        let fb: Rational = farkas.iter().zip(&b).map(|(f, v)| f * v).sum();
        assert!(fb.is_negative());
    }

    #[test]
    fn negative_rhs_and_redundant_rows() {
        // -x0 - x1 = -1 twice, x0 - x1 = 0
        let a = mat(&[&[-1, -1], &[-1, -1], &[1, -1]]);
        let b = vec![int(-1), int(-1), int(0)];
        match solve(&a, &b, &[int(1), int(0)]) {
            LpOutcome::Optimal { x, .. } => assert_eq!(x, vec![ratio(1, 2), ratio(1, 2)]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unbounded_detected() {
        let a = mat(&[&[1, -1]]);
        assert_eq!(solve(&a, &[int(0)], &[int(1), int(0)]), LpOutcome::Unbounded);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Beale-style cycling example in equality form
        let a: Vec<Vec<Rational>> = vec![
            vec![ratio(1, 4), int(-60), ratio(-1, 25), int(9), int(1), int(0), int(0)],
            vec![ratio(1, 2), int(-90), ratio(-1, 50), int(3), int(0), int(1), int(0)],
            vec![int(0), int(0), int(1), int(0), int(0), int(0), int(1)],
        ];
        let b = vec![int(0), int(0), int(1)];
        let c = vec![ratio(3, 4), int(-150), ratio(1, 50), int(-6), int(0), int(0), int(0)];
        match solve(&a, &b, &c) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, ratio(1, 20)),
            other => panic!("{other:?}"),
        }
    }
}
