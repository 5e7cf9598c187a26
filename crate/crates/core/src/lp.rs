//! A small exact linear-programming solver.
//!
//! Two-phase primal simplex on a dense tableau of [`Rational`]s with Bland's
//! anti-cycling rule. Problems are `minimize c.x` subject to linear
//! constraints and `x >= 0`. Sizes here are tiny (tens of rows), so the
//! dense layout is fine; row operations skip zero entries of the pivot row.

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub terms: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub value: Rational,
    pub x: Vec<Rational>,
}

#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<(usize, Rational)>,
    constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            objective: Vec::new(),
            constraints: Vec::new(),
        }
    }

    pub fn add_var(&mut self) -> usize {
        self.num_vars += 1;
        self.num_vars - 1
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn minimize(&mut self, terms: Vec<(usize, Rational)>) {
        self.objective = terms;
    }

    pub fn constrain(&mut self, terms: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint {
            terms,
            relation,
            rhs,
        });
    }

    pub fn solve(&self) -> Result<LpSolution, LpError> {
        Tableau::build(self).solve(self)
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    ncols: usize,
    first_artificial: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let nv = lp.num_vars;
        let mut n_slack = 0;
        let mut n_art = 0;
        // normalize so that every rhs is nonnegative
        let normalized: Vec<(Vec<(usize, Rational)>, Relation, Rational)> = lp
            .constraints
            .iter()
            .map(|c| {
                if c.rhs.is_negative() {
                    let rel = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    let terms = c.terms.iter().map(|(j, a)| (*j, -a)).collect();
                    (terms, rel, -&c.rhs)
                } else {
                    (c.terms.clone(), c.relation, c.rhs.clone())
                }
            })
            .collect();
        for (_, rel, _) in &normalized {
            match rel {
                Relation::Le => n_slack += 1,
                Relation::Ge => {
                    n_slack += 1;
                    n_art += 1
                }
                Relation::Eq => n_art += 1,
            }
        }
        let first_artificial = nv + n_slack;
        let ncols = first_artificial + n_art;
        let mut rows = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let (mut s, mut a) = (nv, first_artificial);
        for (terms, rel, rhs) in normalized {
            let mut row = vec![Rational::zero(); ncols + 1];
            for (j, coef) in terms {
                row[j] += coef;
            }
            row[ncols] = rhs;
            match rel {
                Relation::Le => {
                    row[s] = Rational::one();
                    basis.push(s);
                    s += 1;
                }
                Relation::Ge => {
                    row[s] = -Rational::one();
                    s += 1;
                    row[a] = Rational::one();
                    basis.push(a);
                    a += 1;
                }
                Relation::Eq => {
                    row[a] = Rational::one();
                    basis.push(a);
                    a += 1;
                }
            }
            rows.push(row);
        }
        Self {
            rows,
            basis,
            ncols,
            first_artificial,
        }
    }

    fn pivot(&mut self, obj: &mut [Rational], r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        let width = self.ncols + 1;
        let mut nz = Vec::new();
        for k in 0..width {
            if !self.rows[r][k].is_zero() {
                self.rows[r][k] = &self.rows[r][k] * &inv;
                nz.push(k);
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &k in &nz {
                row[k] -= &f * &pivot_row[k];
            }
        }
        if !obj[c].is_zero() {
            let f = obj[c].clone();
            for &k in &nz {
                obj[k] -= &f * &pivot_row[k];
            }
        }
        self.basis[r] = c;
    }

    /// Runs simplex iterations on `obj` (reduced costs, last cell `-z`) over
    /// columns `< limit`.
    fn iterate(&mut self, obj: &mut [Rational], limit: usize) -> Result<(), LpError> {
        loop {
            let Some(enter) = (0..limit).find(|&j| obj[j].is_negative()) else {
                return Ok(());
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[self.ncols] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let (r, _) = leave.ok_or(LpError::Unbounded)?;
            self.pivot(obj, r, enter);
        }
    }

    fn solve(mut self, lp: &LinearProgram) -> Result<LpSolution, LpError> {
        let width = self.ncols + 1;
        if self.first_artificial < self.ncols {
            // phase one: minimize the sum of artificials
            let mut obj = vec![Rational::zero(); width];
            for j in self.first_artificial..self.ncols {
                obj[j] = Rational::one();
            }
            for (i, &b) in self.basis.iter().enumerate() {
                if b >= self.first_artificial {
                    for k in 0..width {
                        if !self.rows[i][k].is_zero() {
                            obj[k] -= &self.rows[i][k];
                        }
                    }
                }
            }
            self.iterate(&mut obj, self.ncols)?;
            if !obj[self.ncols].is_zero() {
                return Err(LpError::Infeasible);
            }
            // drive zero-valued artificials out of the basis
            let mut i = 0;
            while i < self.rows.len() {
                if self.basis[i] >= self.first_artificial {
                    match (0..self.first_artificial).find(|&j| !self.rows[i][j].is_zero()) {
                        Some(j) => {
                            self.pivot(&mut obj, i, j);
                            i += 1;
                        }
                        None => {
                            self.rows.remove(i);
                            self.basis.remove(i);
                        }
                    }
                } else {
                    i += 1;
                }
            }
        }
        // phase two
        let mut cost = vec![Rational::zero(); width];
        for (j, c) in &lp.objective {
            cost[*j] += c;
        }
        let mut obj = cost.clone();
        for (i, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            let f = cost[b].clone();
            for k in 0..width {
                if !self.rows[i][k].is_zero() {
                    obj[k] -= &f * &self.rows[i][k];
                }
            }
        }
        self.iterate(&mut obj, self.first_artificial)?;
        let mut x = vec![Rational::zero(); lp.num_vars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < lp.num_vars {
                x[b] = self.rows[i][self.ncols].clone();
            }
        }
        let value = lp
            .objective
            .iter()
            .map(|(j, c)| c * &x[*j])
            .sum::<Rational>();
        Ok(LpSolution { value, x })
    }
}
