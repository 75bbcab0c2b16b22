use super::arith::Arith;
use super::{LpProblem, LpSolution, LpStatus, Relation};
use crate::{Error, Result};

/// Dense tableau. Column layout: structural variables, then one slack or
/// surplus per inequality row, then artificials.
struct Tableau<'a, A: Arith> {
    arith: &'a A,
    rows: Vec<Vec<A::Num>>,
    rhs: Vec<A::Num>,
    basis: Vec<usize>,
    /// Reduced costs; a column may enter while its entry is positive.
    cost: Vec<A::Num>,
    /// Current objective value.
    value: A::Num,
    iterations: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl<'a, A: Arith> Tableau<'a, A> {
    fn width(&self) -> usize {
        self.cost.len()
    }

    /// Bland: lowest-index improving column.
    fn entering(&self, limit: usize) -> Option<usize> {
        (0..limit).find(|&c| self.arith.is_positive(&self.cost[c]))
    }

    /// Bland: minimum ratio, ties to the lowest basic variable index.
    fn leaving(&self, col: usize) -> Option<usize> {
        let a = self.arith;
        let mut best: Option<(usize, A::Num)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            if !a.is_positive(&row[col]) {
                continue;
            }
            let ratio = a.div(&self.rhs[r], &row[col]);
            best = match best {
                None => Some((r, ratio)),
                Some((b, best_ratio)) => match a.cmp(&ratio, &best_ratio) {
                    std::cmp::Ordering::Less => Some((r, ratio)),
                    std::cmp::Ordering::Equal if self.basis[r] < self.basis[b] => Some((r, ratio)),
                    _ => Some((b, best_ratio)),
                },
            };
        }
        best.map(|(r, _)| r)
    }

    fn pivot(&mut self, r: usize, c: usize) -> Result<()> {
        let a = self.arith;
        let column_max = self
            .rows
            .iter()
            .fold(a.zero(), |m, row| a.abs_max(&m, &row[c]));
        let p = self.rows[r][c].clone();
        a.check_pivot(&p, &column_max)?;

        for x in self.rows[r].iter_mut() {
            a.div_assign(x, &p);
        }
        a.div_assign(&mut self.rhs[r], &p);
        let pivot_row: Vec<(usize, A::Num)> = self.rows[r]
            .iter()
            .enumerate()
            .filter(|(_, x)| !a.is_zero(x))
            .map(|(k, x)| (k, x.clone()))
            .collect();
        let pivot_rhs = self.rhs[r].clone();

        for i in 0..self.rows.len() {
            if i == r || a.is_zero(&self.rows[i][c]) {
                continue;
            }
            let f = self.rows[i][c].clone();
            let row = &mut self.rows[i];
            for (k, x) in &pivot_row {
                a.sub_mul_assign(&mut row[*k], &f, x);
            }
            row[c] = a.zero();
            a.sub_mul_assign(&mut self.rhs[i], &f, &pivot_rhs);
        }
        if !a.is_zero(&self.cost[c]) {
            let f = self.cost[c].clone();
            for (k, x) in &pivot_row {
                a.sub_mul_assign(&mut self.cost[*k], &f, x);
            }
            self.cost[c] = a.zero();
            let gain = a.mul(&f, &pivot_rhs);
            a.add_assign(&mut self.value, &gain);
        }
        self.basis[r] = c;
        self.iterations += 1;
        Ok(())
    }

    fn run(&mut self, limit: usize) -> Result<Outcome> {
        while let Some(c) = self.entering(limit) {
            if let Some(max) = self.arith.iteration_limit() {
                if self.iterations >= max {
                    return Err(Error::NumericallyUnstable(format!(
                        "no convergence after {max} pivots"
                    )));
                }
            }
            match self.leaving(c) {
                Some(r) => self.pivot(r, c)?,
                None => return Ok(Outcome::Unbounded),
            }
        }
        Ok(Outcome::Optimal)
    }

    /// Reduced costs and objective value for cost vector `costs` under the
    /// current basis.
    fn price(&mut self, costs: &[A::Num]) {
        let a = self.arith;
        self.cost = costs.to_vec();
        self.value = a.zero();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = costs[b].clone();
            if a.is_zero(&cb) {
                continue;
            }
            for (k, x) in self.rows[r].iter().enumerate() {
                if !a.is_zero(x) {
                    a.sub_mul_assign(&mut self.cost[k], &cb, x);
                }
            }
            let contribution = a.mul(&cb, &self.rhs[r]);
            a.add_assign(&mut self.value, &contribution);
        }
        for &b in &self.basis {
            self.cost[b] = a.zero();
        }
    }
}

pub(super) fn solve<A: Arith>(arith: A, problem: &LpProblem) -> Result<LpSolution<A::Num>> {
    let a = &arith;
    let n = problem.num_vars();

    // Normalize to nonnegative right-hand sides.
    let normalized: Vec<(Vec<A::Num>, Relation, A::Num)> = problem
        .constraints()
        .iter()
        .map(|c| {
            let coeffs: Vec<A::Num> = c.coeffs.iter().map(|x| a.convert(x)).collect();
            let rhs = a.convert(&c.rhs);
            if a.is_negative(&rhs) {
                let flipped = match c.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (coeffs.iter().map(|x| a.neg(x)).collect(), flipped, a.neg(&rhs))
            } else {
                (coeffs, c.relation, rhs)
            }
        })
        .collect();

    let slack_count = normalized.iter().filter(|c| c.1 != Relation::Eq).count();
    let art_count = normalized.iter().filter(|c| c.1 != Relation::Le).count();
    let art_start = n + slack_count;
    let width = art_start + art_count;

    let mut rows = Vec::with_capacity(normalized.len());
    let mut rhs = Vec::with_capacity(normalized.len());
    let mut basis = Vec::with_capacity(normalized.len());
    let (mut next_slack, mut next_art) = (n, art_start);
    let one = a.convert(&crate::rational::int(1));
    let minus_one = a.neg(&one);
    for (coeffs, relation, b) in normalized {
        let mut row = coeffs;
        row.resize(width, a.zero());
        match relation {
            Relation::Le => {
                row[next_slack] = one.clone();
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = minus_one.clone();
                next_slack += 1;
                row[next_art] = one.clone();
                basis.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                row[next_art] = one.clone();
                basis.push(next_art);
                next_art += 1;
            }
        }
        rows.push(row);
        rhs.push(b);
    }

    let mut tab = Tableau {
        arith: a,
        rows,
        rhs,
        basis,
        cost: vec![a.zero(); width],
        value: a.zero(),
        iterations: 0,
    };

    if art_count > 0 {
        let mut phase_one = vec![a.zero(); width];
        for c in phase_one.iter_mut().skip(art_start) {
            *c = minus_one.clone();
        }
        tab.price(&phase_one);
        tab.run(width)?;
        if a.is_negative(&tab.value) {
            return Ok(LpSolution::without_point(LpStatus::Infeasible));
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= art_start {
                match (0..art_start).find(|&k| !a.is_zero(&tab.rows[r][k])) {
                    Some(k) => {
                        tab.pivot(r, k)?;
                        r += 1;
                    }
                    None => {
                        tab.rows.remove(r);
                        tab.rhs.remove(r);
                        tab.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
        for row in tab.rows.iter_mut() {
            row.truncate(art_start);
        }
    }

    let mut costs: Vec<A::Num> = problem.objective().iter().map(|x| a.convert(x)).collect();
    costs.resize(art_start, a.zero());
    tab.price(&costs);
    debug_assert_eq!(tab.width(), art_start);
    match tab.run(art_start)? {
        Outcome::Unbounded => Ok(LpSolution::without_point(LpStatus::Unbounded)),
        Outcome::Optimal => {
            let mut values = vec![a.zero(); n];
            for (r, &b) in tab.basis.iter().enumerate() {
                if b < n {
                    values[b] = tab.rhs[r].clone();
                }
            }
            Ok(LpSolution { status: LpStatus::Optimal, objective_value: Some(tab.value), values })
        }
    }
}
