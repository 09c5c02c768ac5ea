use num_rational::BigRational;
use num_traits::Zero;

/// Direction of a linear constraint `coeffs . x  (sense)  rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub sense: Sense,
    pub rhs: BigRational,
}

/// Result of maximizing over `{x >= 0 : constraints}`.
#[derive(Debug, Clone)]
pub enum SimplexOutcome {
    Infeasible,
    Optimal { value: BigRational, point: Vec<BigRational> },
    /// `point` is feasible and `point + t * ray` stays feasible for all
    /// `t >= 0` while the objective grows without bound.
    Unbounded { point: Vec<BigRational>, ray: Vec<BigRational> },
}

enum LoopResult {
    Optimal,
    Unbounded { enter: usize },
}

struct Tableau {
    // Each row has `ncols` entries; the last column is the rhs.
    rows: Vec<Vec<BigRational>>,
    obj: Vec<BigRational>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn rhs_col(&self) -> usize {
        self.ncols - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].clone().recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= inv.clone();
            }
        }
        let (pivot_row, rest) = {
            let (head, tail) = self.rows.split_at_mut(r);
            let (mid, tail) = tail.split_at_mut(1);
            (&mid[0], head.iter_mut().chain(tail.iter_mut()))
        };
        for row in rest {
            if row[c].is_zero() {
                continue;
            }
            // The pivot column entry becomes zero by construction.
            let f = std::mem::replace(&mut row[c], BigRational::zero());
            for j in 0..self.ncols {
                if j == c || pivot_row[j].is_zero() {
                    continue;
                }
                let x = &row[j] - &f * &pivot_row[j];
                row[j] = x;
            }
        }
        if !self.obj[c].is_zero() {
            let f = std::mem::replace(&mut self.obj[c], BigRational::zero());
            for j in 0..self.ncols {
                if j == c || pivot_row[j].is_zero() {
                    continue;
                }
                let x = &self.obj[j] - &f * &pivot_row[j];
                self.obj[j] = x;
            }
        }
        self.basis[r] = c;
    }

    /// Installs reduced costs for `cost`, given the current basis.
    fn set_objective(&mut self, cost: &[BigRational]) {
        let rhs = self.rhs_col();
        self.obj = vec![BigRational::zero(); self.ncols];
        for j in 0..rhs {
            self.obj[j] = -cost[j].clone();
        }
        for r in 0..self.rows.len() {
            let cb = cost[self.basis[r]].clone();
            if cb.is_zero() {
                continue;
            }
            for j in 0..self.ncols {
                let x = &self.obj[j] + &cb * &self.rows[r][j];
                self.obj[j] = x;
            }
        }
    }

    /// Columns `>= enterable` never enter.
    ///
    /// The entering column follows Dantzig's rule (most negative
    /// reduced cost) while the objective makes progress; after a long
    /// degenerate stall it falls back to Bland's rule, which cannot
    /// cycle, so the iteration terminates either way.
    fn run(&mut self, enterable: usize) -> LoopResult {
        let rhs = self.rhs_col();
        let stall_limit = 4 * (self.rows.len() + enterable) + 16;
        let mut stalled = 0usize;
        loop {
            let enter = if stalled < stall_limit {
                let mut best: Option<usize> = None;
                for j in 0..enterable {
                    if self.obj[j] < BigRational::zero()
                        && best.is_none_or(|b| self.obj[j] < self.obj[b])
                    {
                        best = Some(j);
                    }
                }
                best
            } else {
                (0..enterable).find(|&j| self.obj[j] < BigRational::zero())
            };
            let Some(enter) = enter else {
                return LoopResult::Optimal;
            };
            let mut leave: Option<usize> = None;
            for r in 0..self.rows.len() {
                if self.rows[r][enter] <= BigRational::zero() {
                    continue;
                }
                match leave {
                    None => leave = Some(r),
                    Some(l) => {
                        let cur = &self.rows[r][rhs] * &self.rows[l][enter];
                        let best = &self.rows[l][rhs] * &self.rows[r][enter];
                        if cur < best || (cur == best && self.basis[r] < self.basis[l]) {
                            leave = Some(r);
                        }
                    }
                }
            }
            match leave {
                Some(r) => {
                    let before = self.obj[rhs].clone();
                    self.pivot(r, enter);
                    if self.obj[rhs] == before {
                        stalled += 1;
                    } else {
                        stalled = 0;
                    }
                }
                None => return LoopResult::Unbounded { enter },
            }
        }
    }

    fn point(&self, len: usize) -> Vec<BigRational> {
        let rhs = self.rhs_col();
        let mut p = vec![BigRational::zero(); len];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < len {
                p[b] = self.rows[r][rhs].clone();
            }
        }
        p
    }
}

/// Maximizes `objective . x` over `x >= 0` subject to `constraints`,
/// using the two-phase simplex method in exact rational arithmetic.
pub fn maximize(
    num_vars: usize,
    constraints: &[Constraint],
    objective: &[BigRational],
) -> SimplexOutcome {
    assert_eq!(objective.len(), num_vars, "objective length must match num_vars");
    for c in constraints {
        assert_eq!(c.coeffs.len(), num_vars, "constraint length must match num_vars");
    }

    // Normalize every rhs to be nonnegative.
    let mut rows: Vec<(Vec<BigRational>, Sense, BigRational)> = constraints
        .iter()
        .map(|c| {
            if c.rhs < BigRational::zero() {
                let coeffs = c.coeffs.iter().map(|x| -x.clone()).collect();
                let sense = match c.sense {
                    Sense::Le => Sense::Ge,
                    Sense::Ge => Sense::Le,
                    Sense::Eq => Sense::Eq,
                };
                (coeffs, sense, -c.rhs.clone())
            } else {
                (c.coeffs.clone(), c.sense, c.rhs.clone())
            }
        })
        .collect();
    // A `Le` row with zero rhs needs no artificial; `Ge` with zero rhs is
    // equivalent to `Le` of the negation, which avoids one too.
    for row in rows.iter_mut() {
        if row.1 == Sense::Ge && row.2.is_zero() {
            for x in row.0.iter_mut() {
                *x = -x.clone();
            }
            row.1 = Sense::Le;
        }
    }

    let m = rows.len();
    let n_slack = rows.iter().filter(|r| r.1 != Sense::Eq).count();
    let n_art = rows.iter().filter(|r| r.1 != Sense::Le).count();
    let slack_start = num_vars;
    let art_start = slack_start + n_slack;
    let ncols = art_start + n_art + 1;

    let mut tab = Tableau {
        rows: vec![vec![BigRational::zero(); ncols]; m],
        obj: vec![BigRational::zero(); ncols],
        basis: vec![0; m],
        ncols,
    };
    let mut next_slack = slack_start;
    let mut next_art = art_start;
    for (r, (coeffs, sense, rhs)) in rows.iter().enumerate() {
        for (j, x) in coeffs.iter().enumerate() {
            tab.rows[r][j] = x.clone();
        }
        tab.rows[r][ncols - 1] = rhs.clone();
        match sense {
            Sense::Le => {
                tab.rows[r][next_slack] = BigRational::from_integer(1.into());
                tab.basis[r] = next_slack;
                next_slack += 1;
            }
            Sense::Ge => {
                tab.rows[r][next_slack] = BigRational::from_integer((-1).into());
                next_slack += 1;
                tab.rows[r][next_art] = BigRational::from_integer(1.into());
                tab.basis[r] = next_art;
                next_art += 1;
            }
            Sense::Eq => {
                tab.rows[r][next_art] = BigRational::from_integer(1.into());
                tab.basis[r] = next_art;
                next_art += 1;
            }
        }
    }

    if n_art > 0 {
        let mut phase1 = vec![BigRational::zero(); ncols - 1];
        for c in phase1.iter_mut().skip(art_start) {
            *c = BigRational::from_integer((-1).into());
        }
        tab.set_objective(&phase1);
        match tab.run(ncols - 1) {
            LoopResult::Optimal => {}
            LoopResult::Unbounded { .. } => unreachable!("phase 1 objective is bounded above by 0"),
        }
        if !tab.obj[ncols - 1].is_zero() {
            return SimplexOutcome::Infeasible;
        }
        // Drive leftover artificials out of the basis; a row that cannot
        // pivot is a redundant constraint and gets dropped.
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= art_start {
                match (0..art_start).find(|&j| !tab.rows[r][j].is_zero()) {
                    Some(j) => tab.pivot(r, j),
                    None => {
                        tab.rows.remove(r);
                        tab.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    let mut cost = vec![BigRational::zero(); ncols - 1];
    cost[..num_vars].clone_from_slice(objective);
    tab.set_objective(&cost);
    match tab.run(art_start) {
        LoopResult::Optimal => SimplexOutcome::Optimal {
            value: tab.obj[ncols - 1].clone(),
            point: tab.point(num_vars),
        },
        LoopResult::Unbounded { enter } => {
            let mut ray = vec![BigRational::zero(); num_vars];
            if enter < num_vars {
                ray[enter] = BigRational::from_integer(1.into());
            }
            for (r, &b) in tab.basis.iter().enumerate() {
                if b < num_vars {
                    ray[b] = -tab.rows[r][enter].clone();
                }
            }
            SimplexOutcome::Unbounded { point: tab.point(num_vars), ray }
        }
    }
}
