//! Exact sparse linear algebra over `ℚ`.
//!
//! Used wherever an ansatz with unknown rational coefficients must match a
//! target expression: divergence potentials, on-shell multipliers and BRST
//! structure functions. Elimination is deterministic: the reduced row
//! echelon form is unique, and the returned particular solution sets every
//! free column to zero, so its support lies on the leftmost independent
//! columns.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::expr::{Expr, Monomial, Rational};

/// Sparse row: sorted `(column, value)` pairs plus right-hand side.
#[derive(Clone, Debug)]
struct Row {
    entries: Vec<(usize, Rational)>,
    rhs: Rational,
}

impl Row {
    fn lead(&self) -> Option<usize> {
        self.entries.first().map(|(c, _)| *c)
    }

    fn coefficient(&self, col: usize) -> Option<&Rational> {
        self.entries
            .binary_search_by_key(&col, |(c, _)| *c)
            .ok()
            .map(|i| &self.entries[i].1)
    }

    /// `self -= factor * other`.
    fn sub_scaled(&mut self, factor: &Rational, other: &Row) {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() || j < other.entries.len() {
            let ci = self.entries.get(i).map(|e| e.0);
            let cj = other.entries.get(j).map(|e| e.0);
            match (ci, cj) {
                (Some(a), Some(b)) if a == b => {
                    let v = &self.entries[i].1 - factor * &other.entries[j].1;
                    if !v.is_zero() {
                        out.push((a, v));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(a), Some(b)) if a < b => {
                    out.push(self.entries[i].clone());
                    i += 1;
                }
                (Some(_), None) => {
                    out.push(self.entries[i].clone());
                    i += 1;
                }
                (_, Some(b)) => {
                    out.push((b, -(factor * &other.entries[j].1)));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        self.entries = out;
        self.rhs = &self.rhs - factor * &other.rhs;
    }

    fn normalize(&mut self) {
        if let Some((_, lead)) = self.entries.first() {
            let inv = Rational::one() / lead;
            for (_, v) in &mut self.entries {
                *v *= &inv;
            }
            self.rhs *= &inv;
        }
    }
}

/// Outcome of solving `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    /// Canonical particular solution (free columns zero).
    pub values: Vec<Rational>,
    pub rank: usize,
    /// Dimension of the solution set, `columns - rank`.
    pub nullity: usize,
}

/// A linear system assembled row by row.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    columns: usize,
    rows: Vec<Row>,
}

impl LinearSystem {
    pub fn new(columns: usize) -> Self {
        LinearSystem {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn push_row(&mut self, mut entries: Vec<(usize, Rational)>, rhs: Rational) {
        entries.sort_by_key(|(c, _)| *c);
        let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            assert!(c < self.columns, "column {c} out of range");
            match merged.last_mut() {
                Some((last, acc)) if *last == c => *acc += v,
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|(_, v)| !v.is_zero());
        self.rows.push(Row { entries: merged, rhs });
    }

    /// Solves exactly; `None` if the system is inconsistent.
    pub fn solve(&self) -> Option<Solution> {
        // Echelon form keyed by leading column.
        let mut pivots: BTreeMap<usize, Row> = BTreeMap::new();
        for row in &self.rows {
            let mut row = row.clone();
            loop {
                // Smallest column of the row that already has a pivot.
                let hit = row
                    .entries
                    .iter()
                    .find(|(c, _)| pivots.contains_key(c))
                    .map(|(c, v)| (*c, v.clone()));
                match hit {
                    Some((col, factor)) => row.sub_scaled(&factor, &pivots[&col]),
                    None => break,
                }
            }
            match row.lead() {
                Some(lead) => {
                    row.normalize();
                    pivots.insert(lead, row);
                }
                None => {
                    if !row.rhs.is_zero() {
                        return None;
                    }
                }
            }
        }
        // Back substitution to reduced form, last pivot first.
        let leads: Vec<usize> = pivots.keys().rev().copied().collect();
        for &lead in &leads {
            let pivot = pivots[&lead].clone();
            for (_, other) in pivots.range_mut(..lead) {
                if let Some(f) = other.coefficient(lead).cloned() {
                    other.sub_scaled(&f, &pivot);
                }
            }
        }
        let mut values = vec![Rational::zero(); self.columns];
        for (lead, row) in &pivots {
            values[*lead] = row.rhs.clone();
        }
        Some(Solution {
            values,
            rank: pivots.len(),
            nullity: self.columns - pivots.len(),
        })
    }
}

/// Finds rational `x` with `Σ_k x_k · candidates[k][j] = target[j]` for
/// every slot `j`, matching coefficients monomial by monomial.
pub fn solve_combination(target: &[Expr], candidates: &[Vec<Expr>]) -> Option<Solution> {
    let mut rows: BTreeMap<(usize, &Monomial), Vec<(usize, Rational)>> = BTreeMap::new();
    for (k, cand) in candidates.iter().enumerate() {
        for (j, e) in cand.iter().enumerate() {
            for (m, c) in e.terms() {
                rows.entry((j, m)).or_default().push((k, c.clone()));
            }
        }
    }
    for (j, e) in target.iter().enumerate() {
        for (m, _) in e.terms() {
            rows.entry((j, m)).or_default();
        }
    }
    let mut sys = LinearSystem::new(candidates.len());
    for ((j, m), entries) in rows {
        sys.push_row(entries, target[j].coefficient(m));
    }
    sys.solve()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    #[test]
    fn unique_solution() {
        // x + y = 3, x - y = 1
        let mut s = LinearSystem::new(2);
        s.push_row(vec![(0, q(1)), (1, q(1))], q(3));
        s.push_row(vec![(0, q(1)), (1, q(-1))], q(1));
        let sol = s.solve().unwrap();
        assert_eq!(sol.values, vec![q(2), q(1)]);
        assert_eq!(sol.nullity, 0);
    }

    #[test]
    fn inconsistent_system() {
        let mut s = LinearSystem::new(1);
        s.push_row(vec![(0, q(2))], q(1));
        s.push_row(vec![(0, q(4))], q(3));
        assert!(s.solve().is_none());
    }

    #[test]
    fn underdetermined_uses_leftmost_columns() {
        // x0 + x1 + x2 = 6 ; x1 + x2 = 4  ->  x0 = 2, x1 = 4, x2 free = 0
        let mut s = LinearSystem::new(3);
        s.push_row(vec![(1, q(1)), (2, q(1))], q(4));
        s.push_row(vec![(0, q(1)), (1, q(1)), (2, q(1))], q(6));
        let sol = s.solve().unwrap();
        assert_eq!(sol.values, vec![q(2), q(4), q(0)]);
        assert_eq!(sol.rank, 2);
        assert_eq!(sol.nullity, 1);
    }

    #[test]
    fn row_order_does_not_change_answer() {
        let rows = [
            (vec![(0, q(1)), (2, q(3))], q(1)),
            (vec![(1, q(2)), (2, q(1))], q(5)),
            (vec![(0, q(2)), (1, q(2)), (2, q(7))], q(7)),
        ];
        let mut a = LinearSystem::new(3);
        let mut b = LinearSystem::new(3);
        for (e, r) in rows.iter().cloned() {
            a.push_row(e, r);
        }
        for (e, r) in rows.iter().rev().cloned() {
            b.push_row(e, r);
        }
        assert_eq!(a.solve(), b.solve());
    }
}
