//! Linear programs over nonnegative variables, solved by a dense two-phase
//! primal simplex with Bland's pivoting rule.
//!
//! [`solve_exact`] works in exact rationals and always terminates.
//! [`solve_float`] runs the same algorithm in `f64` with a tolerance and is
//! only a fast path; it never replaces the exact solver in checks.

mod arith;
mod simplex;

use std::fmt;

use num_traits::{Signed, Zero};

use crate::{Error, Rational, Result};

use arith::{Exact, Float};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Maximize `objective . x` subject to the constraints and `x >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
    var_names: Option<Vec<String>>,
}

impl LpProblem {
    pub fn new(objective: Vec<Rational>) -> Self {
        Self { objective, constraints: Vec::new(), var_names: None }
    }

    pub fn with_var_names(mut self, names: Vec<String>) -> Self {
        self.var_names = Some(names);
        self
    }

    pub fn add_constraint(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    /// Adds a constraint given as `(variable, coefficient)` terms; repeated
    /// variables accumulate.
    pub fn add_terms(&mut self, terms: &[(usize, Rational)], relation: Relation, rhs: Rational) {
        let mut coeffs = vec![Rational::zero(); self.num_vars()];
        for (var, c) in terms {
            coeffs[*var] += c;
        }
        self.add_constraint(coeffs, relation, rhs);
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn var_names(&self) -> Option<&[String]> {
        self.var_names.as_deref()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if let Some(names) = &self.var_names {
            if names.len() != n {
                return Err(Error::MalformedProblem(format!(
                    "{} variable names for {n} variables",
                    names.len()
                )));
            }
        }
        for (k, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(Error::MalformedProblem(format!(
                    "constraint {k} has {} coefficients, expected {n}",
                    c.coeffs.len()
                )));
            }
        }
        Ok(())
    }

    pub fn objective_value(&self, values: &[Rational]) -> Rational {
        self.objective.iter().zip(values).map(|(c, x)| c * x).sum()
    }

    /// Exact re-evaluation of every constraint and sign restriction at
    /// `values`. Returns a description of the first violation.
    pub fn audit(&self, values: &[Rational]) -> std::result::Result<(), String> {
        if values.len() != self.num_vars() {
            return Err(format!("{} values for {} variables", values.len(), self.num_vars()));
        }
        if let Some((i, x)) = values.iter().enumerate().find(|(_, x)| x.is_negative()) {
            return Err(format!("x{i} = {x} is negative"));
        }
        for (k, c) in self.constraints.iter().enumerate() {
            let lhs: Rational = c.coeffs.iter().zip(values).map(|(a, x)| a * x).sum();
            let ok = match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Ge => lhs >= c.rhs,
                Relation::Eq => lhs == c.rhs,
            };
            if !ok {
                return Err(format!("constraint {k}: {lhs} {} {} fails", c.relation.symbol(), c.rhs));
            }
        }
        Ok(())
    }

    fn name(&self, var: usize) -> String {
        match &self.var_names {
            Some(names) => names[var].clone(),
            None => format!("x{var}"),
        }
    }

    fn fmt_linear(&self, f: &mut fmt::Formatter<'_>, coeffs: &[Rational]) -> fmt::Result {
        let mut first = true;
        for (var, c) in coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            if first {
                write!(f, "{c} {}", self.name(var))?;
                first = false;
            } else if c.is_negative() {
                write!(f, " - {} {}", -c, self.name(var))?;
            } else {
                write!(f, " + {c} {}", self.name(var))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Debug dump: `max: ...` then one `lhs {<=,>=,=} rhs` line per constraint.
impl fmt::Display for LpProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "max: ")?;
        self.fmt_linear(f, &self.objective)?;
        writeln!(f)?;
        for c in &self.constraints {
            self.fmt_linear(f, &c.coeffs)?;
            writeln!(f, " {} {}", c.relation.symbol(), c.rhs)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<T = Rational> {
    pub status: LpStatus,
    /// Present iff `status` is `Optimal`.
    pub objective_value: Option<T>,
    /// A basic optimal point when `Optimal`, empty otherwise.
    pub values: Vec<T>,
}

impl<T> LpSolution<T> {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    fn without_point(status: LpStatus) -> Self {
        Self { status, objective_value: None, values: Vec::new() }
    }
}

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

pub fn solve_exact(problem: &LpProblem) -> Result<LpSolution> {
    problem.validate()?;
    simplex::solve(Exact, problem)
}

pub fn solve_float(problem: &LpProblem, tol: f64) -> Result<LpSolution<f64>> {
    problem.validate()?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::MalformedProblem(format!("tolerance {tol} must be positive")));
    }
    let solution = simplex::solve(Float { tol }, problem)?;
    if solution.is_optimal() {
        audit_float(problem, &solution, tol)?;
    }
    Ok(solution)
}

/// Rejects a float optimum whose point violates a constraint or whose
/// reported objective disagrees with the point, beyond a scaled tolerance.
fn audit_float(problem: &LpProblem, solution: &LpSolution<f64>, tol: f64) -> Result<()> {
    let x = &solution.values;
    let slack = |terms: f64, rhs: f64| tol.sqrt() * (1.0 + terms + rhs.abs());
    if let Some((i, v)) = x.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < -slack(0.0, 0.0)) {
        return Err(Error::NumericallyUnstable(format!("x{i} = {v} after solve")));
    }
    for (k, c) in problem.constraints.iter().enumerate() {
        let coeffs: Vec<f64> = c.coeffs.iter().map(crate::rational::to_f64).collect();
        let lhs: f64 = coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
        let mag: f64 = coeffs.iter().zip(x).map(|(a, v)| (a * v).abs()).sum();
        let rhs = crate::rational::to_f64(&c.rhs);
        let tolerance = slack(mag, rhs);
        let ok = match c.relation {
            Relation::Le => lhs <= rhs + tolerance,
            Relation::Ge => lhs >= rhs - tolerance,
            Relation::Eq => (lhs - rhs).abs() <= tolerance,
        };
        if !ok {
            return Err(Error::NumericallyUnstable(format!(
                "constraint {k} violated after solve ({lhs} vs {rhs})"
            )));
        }
    }
    let obj: Vec<f64> = problem.objective.iter().map(crate::rational::to_f64).collect();
    let value: f64 = obj.iter().zip(x).map(|(c, v)| c * v).sum();
    let mag: f64 = obj.iter().zip(x).map(|(c, v)| (c * v).abs()).sum();
    let reported = solution.objective_value.unwrap_or(f64::NAN);
    // Written so that a NaN objective fails the check.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    let drifted = !((value - reported).abs() <= slack(mag, 0.0));
    if drifted {
        return Err(Error::NumericallyUnstable(format!(
            "objective drifted: tableau {reported}, point {value}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests;
