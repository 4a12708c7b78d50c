//! Exact feasibility LP in fraction-free dictionary form.
//!
//! The dictionary reads `d·x_B = rhs − coef·x_N` with every entry an integer
//! and `d > 0`. Pivots use Bareiss updates, so the divisions are exact and
//! entries stay bounded by minors of the input. Structural variables are free;
//! slack variables are non-negative.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug)]
pub struct Row {
    pub var: usize,
    pub rhs: BigInt,
    pub coef: Vec<BigInt>,
}

#[derive(Clone, Debug)]
pub struct Dictionary {
    n_free: usize,
    next_var: usize,
    d: BigInt,
    cols: Vec<usize>,
    rows: Vec<Row>,
}

impl Dictionary {
    /// Constraints `g·λ ≤ h` over free `λ`. Variables `0..n` are the `λ`;
    /// slack `n + i` belongs to constraint `i`. The `λ` are pivoted into the
    /// basis immediately, so `g` must have full column rank.
    pub fn new(g: &[Vec<BigInt>], h: &[BigInt]) -> Option<Dictionary> {
        let n = g.first().map_or(0, |r| r.len());
        let rows = g
            .iter()
            .zip(h)
            .enumerate()
            .map(|(i, (gi, hi))| Row {
                var: n + i,
                rhs: hi.clone(),
                coef: gi.clone(),
            })
            .collect();
        let mut dict = Dictionary {
            n_free: n,
            next_var: n + g.len(),
            d: BigInt::one(),
            cols: (0..n).collect(),
            rows,
        };
        for c in 0..n {
            let r = dict
                .rows
                .iter()
                .enumerate()
                .filter(|(_, row)| row.var >= n && !row.coef[c].is_zero())
                .min_by(|a, b| a.1.coef[c].abs().cmp(&b.1.coef[c].abs()))
                .map(|(r, _)| r)?;
            dict.pivot(r, c);
        }
        Some(dict)
    }

    fn is_free(&self, var: usize) -> bool {
        var < self.n_free
    }

    pub fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r].coef[c].clone();
        debug_assert!(!p.is_zero());
        let (pivot_rhs, pivot_coef) = (self.rows[r].rhs.clone(), self.rows[r].coef.clone());
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row.coef[c].clone();
            if f.is_zero() {
                for (j, x) in row.coef.iter_mut().enumerate() {
                    if j != c {
                        *x = &*x * &p / &self.d;
                    }
                }
                row.rhs = &row.rhs * &p / &self.d;
            } else {
                for (j, x) in row.coef.iter_mut().enumerate() {
                    if j != c {
                        *x = (&*x * &p - &f * &pivot_coef[j]) / &self.d;
                    }
                }
                row.rhs = (&row.rhs * &p - &f * &pivot_rhs) / &self.d;
                row.coef[c] = -f;
            }
        }
        let leaving = self.rows[r].var;
        self.rows[r].var = self.cols[c];
        self.rows[r].coef[c] = self.d.clone();
        self.cols[c] = leaving;
        self.d = p;
        if self.d.is_negative() {
            self.d = -&self.d;
            for row in &mut self.rows {
                row.rhs = -&row.rhs;
                for x in &mut row.coef {
                    *x = -&*x;
                }
            }
        }
    }

    /// Restores primal feasibility with the dual simplex under Bland's rule.
    /// Returns `false` when some row proves the system infeasible.
    pub fn solve(&mut self) -> bool {
        loop {
            let leave = self
                .rows
                .iter()
                .enumerate()
                .filter(|(_, row)| !self.is_free(row.var) && row.rhs.is_negative())
                .min_by_key(|(_, row)| row.var)
                .map(|(r, _)| r);
            let Some(r) = leave else { return true };
            let enter = (0..self.cols.len())
                .filter(|&j| self.rows[r].coef[j].is_negative())
                .min_by_key(|&j| self.cols[j]);
            let Some(c) = enter else { return false };
            self.pivot(r, c);
        }
    }

    /// From a feasible dictionary, pivots to a vertex maximising (`maximise`)
    /// or minimising free variable `var` and returns the optimum, or `None`
    /// if it is unbounded. Primal simplex under Bland's rule.
    pub fn optimise(&mut self, var: usize, maximise: bool) -> Option<BigRational> {
        loop {
            let obj = self
                .rows
                .iter()
                .position(|row| row.var == var)
                .expect("free variable is basic");
            // Increasing nonbasic j changes the objective by −coef/d per unit.
            let improving = |x: &BigInt| {
                if maximise {
                    x.is_negative()
                } else {
                    x.is_positive()
                }
            };
            let enter = (0..self.cols.len())
                .filter(|&j| improving(&self.rows[obj].coef[j]))
                .min_by_key(|&j| self.cols[j]);
            let Some(c) = enter else {
                return Some(BigRational::new(self.rows[obj].rhs.clone(), self.d.clone()));
            };
            // Ratio test over bounded rows that decrease as x_c grows.
            let mut best: Option<usize> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if self.is_free(row.var) || !row.coef[c].is_positive() {
                    continue;
                }
                best = match best {
                    None => Some(i),
                    Some(b) => {
                        let rb = &self.rows[b];
                        // rhs_i / coef_i  vs  rhs_b / coef_b (denominators positive)
                        let lhs = &row.rhs * &rb.coef[c];
                        let rhs = &rb.rhs * &row.coef[c];
                        if lhs < rhs || (lhs == rhs && row.var < rb.var) {
                            Some(i)
                        } else {
                            Some(b)
                        }
                    }
                };
            }
            self.pivot(best?, c);
        }
    }

    /// Value of free variable `var` at the current basic solution.
    pub fn value(&self, var: usize) -> BigRational {
        self.rows
            .iter()
            .find(|row| row.var == var)
            .map(|row| BigRational::new(row.rhs.clone(), self.d.clone()))
            .unwrap_or_else(BigRational::zero)
    }

    /// Adds `λ_var ≤ bound` (`upper`) or `λ_var ≥ bound`.
    pub fn add_bound(&mut self, var: usize, bound: &BigInt, upper: bool) {
        let row = self
            .rows
            .iter()
            .find(|row| row.var == var)
            .expect("free variable is basic");
        let db = &self.d * bound;
        let (rhs, coef) = if upper {
            (db - &row.rhs, row.coef.iter().map(|x| -x).collect())
        } else {
            (&row.rhs - db, row.coef.clone())
        };
        self.rows.push(Row {
            var: self.next_var,
            rhs,
            coef,
        });
        self.next_var += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn system(g: &[[i64; 2]], h: &[i64]) -> Dictionary {
        let g: Vec<Vec<BigInt>> = g
            .iter()
            .map(|r| r.iter().map(|&x| bi(x)).collect())
            .collect();
        let h: Vec<BigInt> = h.iter().map(|&x| bi(x)).collect();
        Dictionary::new(&g, &h).unwrap()
    }

    fn satisfies(g: &[[i64; 2]], h: &[i64], d: &Dictionary) -> bool {
        let x = [d.value(0), d.value(1)];
        g.iter().zip(h).all(|(r, &hi)| {
            let lhs = BigRational::from(bi(r[0])) * &x[0] + BigRational::from(bi(r[1])) * &x[1];
            lhs <= BigRational::from(bi(hi))
        })
    }

    #[test]
    fn finds_a_point_in_a_triangle() {
        // x ≥ 1, y ≥ 1, 3x + 5y ≤ 20
        let g = [[-1, 0], [0, -1], [3, 5]];
        let h = [-1, -1, 20];
        let mut d = system(&g, &h);
        assert!(d.solve());
        assert!(satisfies(&g, &h, &d));
    }

    #[test]
    fn detects_an_empty_region() {
        // x + y ≤ 1, x ≥ 1, y ≥ 1
        let mut d = system(&[[1, 1], [-1, 0], [0, -1]], &[1, -1, -1]);
        assert!(!d.solve());
    }

    #[test]
    fn branching_bounds() {
        // 2x + 2y = 3 within a box; no point with x, y integers.
        let g = [[2, 2], [-2, -2], [-1, 0], [0, -1], [1, 0], [0, 1]];
        let h = [3, -3, 0, 0, 3, 3];
        let mut d = system(&g, &h);
        assert!(d.solve());
        let mut lo = d.clone();
        lo.add_bound(0, &bi(0), true);
        assert!(lo.solve());
        assert_eq!(lo.value(0), BigRational::zero());
        assert_eq!(lo.value(1), BigRational::new(bi(3), bi(2)));
        let mut hi = d;
        hi.add_bound(0, &bi(2), false);
        assert!(!hi.solve());
    }
}
