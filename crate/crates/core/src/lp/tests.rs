use num_traits::{Signed, Zero};
use proptest::prelude::*;

use super::*;
use crate::rational::{int, ratio};

fn ints(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| int(x)).collect()
}

fn lp(objective: &[i64], rows: &[(&[i64], Relation, i64)]) -> LpProblem {
    let mut p = LpProblem::new(ints(objective));
    for (coeffs, rel, rhs) in rows {
        p.add_constraint(ints(coeffs), *rel, int(*rhs));
    }
    p
}

#[test]
fn one_variable() {
    let p = lp(&[1], &[(&[1], Relation::Le, 1)]);
    let s = solve_exact(&p).unwrap();
    assert_eq!(s.status, LpStatus::Optimal);
    assert_eq!(s.objective_value, Some(int(1)));
    assert_eq!(s.values, vec![int(1)]);
    let f = solve_float(&p, DEFAULT_TOLERANCE).unwrap();
    assert!((f.objective_value.unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn contradictory_bounds() {
    let p = lp(&[1], &[(&[1], Relation::Ge, 2), (&[1], Relation::Le, 1)]);
    assert_eq!(solve_exact(&p).unwrap().status, LpStatus::Infeasible);
    assert_eq!(solve_float(&p, DEFAULT_TOLERANCE).unwrap().status, LpStatus::Infeasible);
}

#[test]
fn degenerate_optimal_face() {
    let p = lp(&[1, 1], &[(&[1, 1], Relation::Le, 1)]);
    let s = solve_exact(&p).unwrap();
    assert_eq!(s.objective_value, Some(int(1)));
    assert!(p.audit(&s.values).is_ok());
    // basic: one coordinate is zero
    assert!(s.values.iter().any(Zero::is_zero));
    let f = solve_float(&p, DEFAULT_TOLERANCE).unwrap();
    assert!((f.objective_value.unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn unbounded() {
    let p = lp(&[1, 0], &[(&[0, 1], Relation::Le, 1)]);
    assert_eq!(solve_exact(&p).unwrap().status, LpStatus::Unbounded);
    assert_eq!(solve_float(&p, DEFAULT_TOLERANCE).unwrap().status, LpStatus::Unbounded);
}

#[test]
fn equalities_and_negative_rhs() {
    // max x - y  s.t. x + y = 3, x - y <= 1, -x <= -1
    let p = lp(
        &[1, -1],
        &[(&[1, 1], Relation::Eq, 3), (&[1, -1], Relation::Le, 1), (&[-1, 0], Relation::Le, -1)],
    );
    let s = solve_exact(&p).unwrap();
    assert_eq!(s.objective_value, Some(int(1)));
    assert_eq!(s.values, vec![int(2), int(1)]);
}

#[test]
fn redundant_equalities() {
    let p = lp(
        &[1, 2],
        &[(&[1, 1], Relation::Eq, 2), (&[2, 2], Relation::Eq, 4), (&[0, 1], Relation::Le, 1)],
    );
    let s = solve_exact(&p).unwrap();
    assert_eq!(s.objective_value, Some(int(3)));
    assert!(p.audit(&s.values).is_ok());
}

#[test]
fn fractional_optimum() {
    // max 3x + 2y s.t. x + y <= 4, x + 3y <= 6, x <= 3  → (3, 1), 11
    let p = lp(&[3, 2], &[(&[1, 1], Relation::Le, 4), (&[1, 3], Relation::Le, 6), (&[1, 0], Relation::Le, 3)]);
    assert_eq!(solve_exact(&p).unwrap().objective_value, Some(int(11)));
    let mut q = LpProblem::new(vec![int(1), int(1)]);
    q.add_constraint(vec![int(3), int(1)], Relation::Le, int(1));
    q.add_constraint(vec![int(1), int(3)], Relation::Le, int(1));
    let s = solve_exact(&q).unwrap();
    assert_eq!(s.objective_value, Some(ratio(1, 2)));
    assert_eq!(s.values, vec![ratio(1, 4), ratio(1, 4)]);
}

/// Beale's example cycles under the textbook largest-coefficient rule.
#[test]
fn beale_cycling_example_terminates() {
    let mut p = LpProblem::new(vec![ratio(3, 4), int(-20), ratio(1, 2), int(-6)]);
    p.add_constraint(vec![ratio(1, 4), int(-8), int(-1), int(9)], Relation::Le, int(0));
    p.add_constraint(vec![ratio(1, 2), int(-12), ratio(-1, 2), int(3)], Relation::Le, int(0));
    p.add_constraint(vec![int(0), int(0), int(1), int(0)], Relation::Le, int(1));
    let s = solve_exact(&p).unwrap();
    assert_eq!(s.objective_value, Some(ratio(5, 4)));
    assert!(p.audit(&s.values).is_ok());
    let f = solve_float(&p, DEFAULT_TOLERANCE).unwrap();
    assert!((f.objective_value.unwrap() - 1.25).abs() < 1e-9);
}

/// Kuhn's cycling example, also fully degenerate at the origin.
#[test]
fn kuhn_cycling_example_terminates() {
    let mut p = LpProblem::new(ints(&[2, 3, -1, -12]));
    p.add_constraint(ints(&[-2, -9, 1, 9]), Relation::Le, int(0));
    p.add_constraint(vec![ratio(1, 3), int(1), ratio(-1, 3), int(-2)], Relation::Le, int(0));
    p.add_constraint(ints(&[2, 3, -1, -12]), Relation::Le, int(2));
    let s = solve_exact(&p).unwrap();
    assert_eq!(s.objective_value, Some(int(2)));
    assert!(p.audit(&s.values).is_ok());
}

#[test]
fn malformed_problem() {
    let mut p = LpProblem::new(ints(&[1, 1]));
    p.add_constraint(ints(&[1]), Relation::Le, int(1));
    assert!(matches!(solve_exact(&p), Err(Error::MalformedProblem(_))));
    assert!(matches!(solve_float(&p, 1e-9), Err(Error::MalformedProblem(_))));
    let named = LpProblem::new(ints(&[1])).with_var_names(vec![]);
    assert!(matches!(solve_exact(&named), Err(Error::MalformedProblem(_))));
    let ok = lp(&[1], &[(&[1], Relation::Le, 1)]);
    assert!(matches!(solve_float(&ok, 0.0), Err(Error::MalformedProblem(_))));
}

#[test]
fn ill_conditioned_never_silently_wrong() {
    let mut p = LpProblem::new(vec![int(1), int(1)]);
    let tiny = ratio(1, 1_000_000_000_000);
    let huge = int(1_000_000_000_000);
    p.add_constraint(vec![tiny.clone(), huge.clone()], Relation::Le, int(1));
    p.add_constraint(vec![huge.clone(), tiny.clone()], Relation::Le, int(1));
    p.add_constraint(vec![int(1), int(-1)], Relation::Ge, tiny.clone());
    let exact = solve_exact(&p).unwrap();
    let q = crate::rational::to_f64(exact.objective_value.as_ref().unwrap());
    match solve_float(&p, DEFAULT_TOLERANCE) {
        Ok(f) => {
            assert_eq!(f.status, LpStatus::Optimal);
            let v = f.objective_value.unwrap();
            assert!((v - q).abs() <= 1e-6 * q.abs().max(1.0), "float {v} vs exact {q}");
        }
        Err(e) => assert!(matches!(e, Error::NumericallyUnstable(_))),
    }
}

#[test]
fn debug_dump_format() {
    let mut p = LpProblem::new(ints(&[1, -2])).with_var_names(vec!["a".into(), "b".into()]);
    p.add_constraint(ints(&[1, 1]), Relation::Le, int(4));
    p.add_constraint(ints(&[0, 3]), Relation::Ge, int(1));
    p.add_constraint(ints(&[2, -1]), Relation::Eq, int(0));
    let text = p.to_string();
    assert_eq!(text, "max: 1 a - 2 b\n1 a + 1 b <= 4\n3 b >= 1\n2 a - 1 b = 0\n");
}

/// Brute-force vertex enumeration on a boxed LP: every basic solution is
/// found by making `n` of the rows (constraints or sign bounds) tight.
fn vertex_oracle(p: &LpProblem) -> Option<Rational> {
    let n = p.num_vars();
    let mut rows: Vec<(Vec<Rational>, Rational)> = p
        .constraints()
        .iter()
        .map(|c| (c.coeffs.clone(), c.rhs.clone()))
        .collect();
    for i in 0..n {
        let mut e = vec![int(0); n];
        e[i] = int(1);
        rows.push((e, int(0)));
    }
    let mut best: Option<Rational> = None;
    let total = rows.len();
    let mut pick = vec![0usize; n];
    fn rec(
        start: usize,
        depth: usize,
        total: usize,
        pick: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if depth == pick.len() {
            visit(pick);
            return;
        }
        for k in start..total {
            pick[depth] = k;
            rec(k + 1, depth + 1, total, pick, visit);
        }
    }
    let mut visit = |chosen: &[usize]| {
        let mut a: Vec<Vec<Rational>> = chosen
            .iter()
            .map(|&k| {
                let mut r = rows[k].0.clone();
                r.push(rows[k].1.clone());
                r
            })
            .collect();
        // Gauss-Jordan
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else { return };
            a.swap(col, piv);
            let pv = a[col][col].clone();
            for x in a[col].iter_mut() {
                *x /= &pv;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for k in 0..=n {
                        let sub = &f * &a[col][k];
                        a[r][k] -= sub;
                    }
                }
            }
        }
        let x: Vec<Rational> = a.iter().map(|r| r[n].clone()).collect();
        if p.audit(&x).is_ok() {
            let v = p.objective_value(&x);
            if best.as_ref().is_none_or(|b| v > *b) {
                best = Some(v);
            }
        }
    };
    rec(0, 0, total, &mut pick, &mut visit);
    best
}

fn arb_lp() -> impl Strategy<Value = LpProblem> {
    (1usize..=3, 1usize..=4).prop_flat_map(|(n, k)| {
        (
            prop::collection::vec(-4i64..=5, n),
            prop::collection::vec((prop::collection::vec(-3i64..=4, n), 0u8..3, -2i64..=8), k),
        )
            .prop_map(move |(obj, cons)| {
                let mut p = LpProblem::new(ints(&obj));
                for (c, rel, rhs) in cons {
                    let rel = match rel {
                        0 => Relation::Le,
                        1 => Relation::Ge,
                        _ => Relation::Eq,
                    };
                    p.add_constraint(ints(&c), rel, int(rhs));
                }
                // box to rule out unboundedness for the vertex oracle
                for i in 0..n {
                    let mut e = vec![0i64; n];
                    e[i] = 1;
                    p.add_constraint(ints(&e), Relation::Le, int(10));
                }
                p
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn exact_matches_vertex_enumeration(p in arb_lp()) {
        let s = solve_exact(&p).unwrap();
        match vertex_oracle(&p) {
            None => prop_assert_eq!(s.status, LpStatus::Infeasible),
            Some(best) => {
                prop_assert_eq!(s.status, LpStatus::Optimal);
                prop_assert_eq!(s.objective_value.clone(), Some(best));
                prop_assert!(p.audit(&s.values).is_ok());
                prop_assert_eq!(p.objective_value(&s.values), s.objective_value.unwrap());
            }
        }
    }

    #[test]
    fn float_agrees_with_exact(p in arb_lp()) {
        let s = solve_exact(&p).unwrap();
        let f = solve_float(&p, DEFAULT_TOLERANCE).unwrap();
        prop_assert_eq!(s.status, f.status);
        if let Some(q) = s.objective_value {
            let q = crate::rational::to_f64(&q);
            let v = f.objective_value.unwrap();
            prop_assert!((v - q).abs() <= 1e-6 * q.abs().max(1.0));
        }
    }

    #[test]
    fn resolving_with_objective_floor_is_stable(p in arb_lp()) {
        let s = solve_exact(&p).unwrap();
        if let Some(q) = s.objective_value {
            let mut again = p.clone();
            again.add_constraint(p.objective().to_vec(), Relation::Ge, q.clone());
            let t = solve_exact(&again).unwrap();
            prop_assert_eq!(t.objective_value, Some(q));
        }
    }
}

#[test]
fn negative_values_never_returned() {
    let p = lp(&[-1, 2], &[(&[1, 1], Relation::Ge, 1), (&[0, 1], Relation::Le, 3)]);
    let s = solve_exact(&p).unwrap();
    assert!(s.values.iter().all(|x| !x.is_negative()));
    assert_eq!(s.objective_value, Some(int(6)));
}
