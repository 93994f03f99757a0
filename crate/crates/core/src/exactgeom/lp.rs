//! Dense two-phase simplex over exact rationals (Bland's rule).
//!
//! Sized for the handful of variables and constraints the feasibility
//! checks need; no attempt at sparsity or numerical tricks.

use num_traits::{One, Signed, Zero};

use super::Rat;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rat>, value: Rat },
    Unbounded,
    Infeasible,
}

struct Tableau {
    rows: Vec<Vec<Rat>>, // last column is the rhs
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize, obj: &mut [Rat]) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&prow) {
                    if !pv.is_zero() {
                        *v -= &f * pv;
                    }
                }
            }
        }
        if !obj[c].is_zero() {
            let f = obj[c].clone();
            for (v, pv) in obj.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes with reduced costs in `obj` (obj[cols] holds -value).
    /// Columns at or beyond `limit` never enter. Returns false if unbounded.
    fn optimize(&mut self, obj: &mut [Rat], limit: usize) -> bool {
        loop {
            let Some(c) = (0..limit).find(|&j| obj[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, Rat)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[self.cols] / &row[c];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, c, obj);
        }
    }
}

/// Maximizes `c . y` subject to `a y <= b` with `y` free.
pub fn maximize(a: &[Vec<Rat>], b: &[Rat], c: &[Rat]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    let n_art = b.iter().filter(|v| v.is_negative()).count();
    let cols = 2 * n + m + n_art;
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art = 2 * n + m;
    for i in 0..m {
        let mut row = vec![Rat::zero(); cols + 1];
        let flip = b[i].is_negative();
        let s = if flip { -Rat::one() } else { Rat::one() };
        for j in 0..n {
            row[j] = &a[i][j] * &s;
            row[n + j] = -&row[j];
        }
        row[2 * n + i] = s.clone();
        row[cols] = &b[i] * &s;
        if flip {
            row[art] = Rat::one();
            basis.push(art);
            art += 1;
        } else {
            basis.push(2 * n + i);
        }
        rows.push(row);
    }
    let mut t = Tableau { rows, basis, cols };
    let first_art = 2 * n + m;

    if n_art > 0 {
        // phase 1: maximize -(sum of artificials)
        let mut obj = vec![Rat::zero(); cols + 1];
        for j in first_art..cols {
            obj[j] = -Rat::one();
        }
        for (i, &bv) in t.basis.iter().enumerate() {
            if bv >= first_art {
                for j in 0..=cols {
                    obj[j] += &t.rows[i][j];
                }
            }
        }
        t.optimize(&mut obj, cols);
        if obj[cols].is_positive() {
            return LpOutcome::Infeasible;
        }
        // drive remaining artificials out of the basis
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= first_art {
                if let Some(c) = (0..first_art).find(|&j| !t.rows[i][j].is_zero()) {
                    let mut dummy = vec![Rat::zero(); cols + 1];
                    t.pivot(i, c, &mut dummy);
                } else {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
            i += 1;
        }
    }

    // phase 2
    let mut obj = vec![Rat::zero(); cols + 1];
    for j in 0..n {
        obj[j] = c[j].clone();
        obj[n + j] = -&c[j];
    }
    for (i, &bv) in t.basis.iter().enumerate() {
        if !obj[bv].is_zero() {
            let f = obj[bv].clone();
            for j in 0..=cols {
                let v = &f * &t.rows[i][j];
                obj[j] -= v;
            }
        }
    }
    if !t.optimize(&mut obj, first_art) {
        return LpOutcome::Unbounded;
    }
    let mut y = vec![Rat::zero(); n];
    for (i, &bv) in t.basis.iter().enumerate() {
        if bv < n {
            y[bv] += &t.rows[i][cols];
        } else if bv < 2 * n {
            y[bv - n] -= &t.rows[i][cols];
        }
    }
    let value = y.iter().zip(c).fold(Rat::zero(), |acc, (a, b)| acc + a * b);
    LpOutcome::Optimal { x: y, value }
}
