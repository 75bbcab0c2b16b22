//! Rewrites of signaling schemes with known revenue effects.
//!
//! | transform | revenue |
//! |---|---|
//! | [`merge_signals`] | unchanged |
//! | [`split_three_winner_signal`] | parts earn at least the original |
//! | [`equalize_bids`] | non-decreasing |
//! | [`singleton_absorption`] | at least half of `B` from full revelation |

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use crate::model::{
    scheme_revenue, signal_bids, signal_revenue, singleton_revenue, top_two, winner_tables, PsiMatrix, Signal,
    SignalingScheme, WinnerTables,
};
use crate::{Error, Rational, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformReport {
    pub before: SignalingScheme,
    pub after: SignalingScheme,
    pub revenue_before: Rational,
    pub revenue_after: Rational,
    pub steps: usize,
}

impl TransformReport {
    fn audited(psi: &PsiMatrix, before: SignalingScheme, after: SignalingScheme, steps: usize) -> Result<Self> {
        let revenue_before = scheme_revenue(psi, &before)?;
        let revenue_after = scheme_revenue(psi, &after)?;
        Ok(Self { before, after, revenue_before, revenue_after, steps })
    }
}

fn add_masses(a: &Signal, b: &Signal) -> Result<Signal> {
    let mut alloc = a.masses().clone();
    for (&j, mass) in b.masses() {
        *alloc.entry(j).or_insert_with(Rational::zero) += mass;
    }
    Signal::new(alloc)
}

/// Merges signals that share their support and their top two bidders into
/// one signal with the summed masses, until no such pair remains.
pub fn merge_signals(psi: &PsiMatrix, scheme: &SignalingScheme) -> Result<TransformReport> {
    scheme.check_feasible(psi.m())?;
    let mut merged: Vec<Signal> = Vec::new();
    let mut slot: HashMap<(Vec<usize>, usize, Option<usize>), usize> = HashMap::new();
    let mut steps = 0;
    for s in scheme.signals() {
        let (w1, w2) = top_two(&signal_bids(psi, s));
        let key = (s.support().collect(), w1, w2);
        match slot.get(&key) {
            Some(&k) => {
                merged[k] = add_masses(&merged[k], s)?;
                steps += 1;
            }
            None => {
                slot.insert(key, merged.len());
                merged.push(s.clone());
            }
        }
    }
    TransformReport::audited(psi, scheme.clone(), SignalingScheme::new(merged), steps)
}

/// `sum_{j in S} phi(j, S) * psi[w2(j)][j] >= rev(S)`: revealing each type
/// separately earns at least as much as the signal.
pub fn is_singleton_splittable(psi: &PsiMatrix, signal: &Signal) -> bool {
    let tables = winner_tables(psi);
    let split: Rational = signal
        .masses()
        .iter()
        .map(|(&j, mass)| mass * singleton_revenue(psi, &tables, j))
        .sum();
    split >= signal_revenue(psi, signal)
}

fn distinct_winners(tables: &WinnerTables, signal: &Signal) -> Vec<usize> {
    let mut winners: Vec<usize> = signal.support().map(|j| tables.first(j)).collect();
    winners.sort_unstable();
    winners.dedup();
    winners
}

/// Splits a signal whose types have at least three distinct singleton
/// winners into one signal over the types won by its own top two bidders,
/// plus a singleton for every other type. Masses are inherited.
pub fn split_three_winner_signal(psi: &PsiMatrix, signal: &Signal) -> Result<Vec<Signal>> {
    let tables = winner_tables(psi);
    let winners = distinct_winners(&tables, signal);
    if winners.len() < 3 {
        return Err(Error::NotApplicable(format!(
            "signal has {} distinct singleton winners, need at least 3",
            winners.len()
        )));
    }
    let (w1, w2) = top_two(&signal_bids(psi, signal));
    let w2 = w2.expect("three winners imply two bidders");
    let (core, rest): (Vec<_>, Vec<_>) = signal
        .masses()
        .iter()
        .map(|(&j, mass)| (j, mass.clone()))
        .partition(|(j, _)| tables.first(*j) == w1 || tables.first(*j) == w2);
    let mut parts = Vec::with_capacity(rest.len() + 1);
    if !core.is_empty() {
        parts.push(Signal::new(core)?);
    }
    for (j, mass) in rest {
        parts.push(Signal::singleton(j, mass)?);
    }
    Ok(parts)
}

/// Adds `mass` of type `ty` to its first singleton signal, creating one if
/// needed.
fn add_singleton_mass(signals: &mut Vec<Signal>, ty: usize, mass: Rational) -> Result<()> {
    if !mass.is_positive() {
        return Ok(());
    }
    match signals.iter().position(|s| s.is_singleton() && s.mass(ty).is_some()) {
        Some(k) => {
            let total = signals[k].mass(ty).expect("singleton of ty") + mass;
            signals[k] = Signal::singleton(ty, total)?;
        }
        None => signals.push(Signal::singleton(ty, mass)?),
    }
    Ok(())
}

/// For every non-singleton signal whose top bid strictly exceeds the
/// second, scales the masses of the winner's own types by
///
/// ```text
/// g = sum_{j in S2} phi_j (psi[b][j] - psi[a][j]) / sum_{j in S1} phi_j (psi[a][j] - psi[b][j])
/// ```
///
/// (`a`, `b` the top two bidders, `S1`/`S2` the types they win as
/// singletons) and reveals the removed mass as singletons. Afterwards the
/// two top bids of every non-singleton signal are equal.
///
/// Every non-singleton signal must be supported on `d(a) ∪ d(b)`.
pub fn equalize_bids(psi: &PsiMatrix, scheme: &SignalingScheme) -> Result<TransformReport> {
    scheme.check_feasible(psi.m())?;
    if psi.n() < 2 {
        return TransformReport::audited(psi, scheme.clone(), scheme.clone(), 0);
    }
    let tables = winner_tables(psi);
    let mut out = Vec::with_capacity(scheme.len());
    let mut freed = vec![Rational::zero(); psi.m()];
    let mut steps = 0;
    for s in scheme.signals() {
        if s.is_singleton() {
            out.push(s.clone());
            continue;
        }
        let bids = signal_bids(psi, s);
        let (a, b) = top_two(&bids);
        let b = b.expect("n >= 2");
        if bids[a] == bids[b] {
            out.push(s.clone());
            continue;
        }
        // Among bidders tied for second, take the first whose won types
        // cover the rest of the support.
        let covers = |b: usize| s.support().all(|j| tables.first(j) == a || tables.first(j) == b);
        let Some(b) = (0..psi.n()).find(|&i| i != a && bids[i] == bids[b] && covers(i)) else {
            return Err(Error::UnsupportedSignal(format!(
                "support of a signal won by bidder {a} is not inside d({a}) ∪ d({b})"
            )));
        };
        let mut numer = Rational::zero();
        let mut denom = Rational::zero();
        for (&j, mass) in s.masses() {
            let diff = psi.get(a, j) - psi.get(b, j);
            if tables.first(j) == a {
                denom += mass * diff;
            } else {
                numer -= mass * diff;
            }
        }
        if denom.is_zero() {
            return Err(Error::UnsupportedSignal(format!(
                "bids differ ({} vs {}) but the winner's side has no margin",
                bids[a], bids[b]
            )));
        }
        let g = numer / denom;
        let mut kept = Vec::new();
        for (&j, mass) in s.masses() {
            if tables.first(j) == a {
                kept.push((j, mass * &g));
                freed[j] += mass * (Rational::one() - &g);
            } else {
                kept.push((j, mass.clone()));
            }
        }
        if kept.iter().any(|(_, x)| x.is_positive()) {
            out.push(Signal::new(kept)?);
        }
        steps += 1;
    }
    for (j, mass) in freed.into_iter().enumerate() {
        add_singleton_mass(&mut out, j, mass)?;
    }
    TransformReport::audited(psi, scheme.clone(), SignalingScheme::new(out), steps)
}

/// One pooling step of [`singleton_absorption`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbsorptionStep {
    /// Type whose whole singleton mass moves into the new signal.
    pub absorbed: usize,
    /// Type contributing the fraction `lambda` of its singleton mass.
    pub partner: usize,
    pub lambda: Rational,
}

/// Collapses the singleton signals of each type into one.
fn consolidate_singletons(scheme: &SignalingScheme) -> Result<Vec<Signal>> {
    let mut out: Vec<Signal> = Vec::with_capacity(scheme.len());
    for s in scheme.signals() {
        if s.is_singleton() {
            let (&j, mass) = s.masses().iter().next().expect("singleton");
            add_singleton_mass(&mut out, j, mass.clone())?;
        } else {
            out.push(s.clone());
        }
    }
    Ok(out)
}

/// Pairs singleton signals won by different bidders until all remaining
/// valuable singletons share one winner.
///
/// Each step takes the singleton type `j` with the smallest winning value
/// `phi(j,{j}) * psi[w1(j)][j]`, a partner `j'` with a different winner and
/// the largest winning value, and moves all of `j`'s singleton mass and the
/// fraction `lambda = value(j) / value(j')` of `j'`'s into a new signal
/// `{j, j'}`. Both winners then contribute the same amount to their own bid
/// on the new signal.
///
/// Types whose column is all zero are ignored: they earn nothing in any
/// signal and have no meaningful winner.
pub fn singleton_absorption_traced(
    psi: &PsiMatrix,
    scheme: &SignalingScheme,
) -> Result<(TransformReport, Vec<AbsorptionStep>)> {
    scheme.check_feasible(psi.m())?;
    let tables = winner_tables(psi);
    let mut signals = consolidate_singletons(scheme)?;
    let mut trace = Vec::new();
    loop {
        // (position, type, winning value)
        let singles: Vec<(usize, usize, Rational)> = signals
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_singleton())
            .filter_map(|(k, s)| {
                let (&j, mass) = s.masses().iter().next()?;
                let value = mass * psi.get(tables.first(j), j);
                value.is_positive().then_some((k, j, value))
            })
            .collect();
        let Some(low) = singles
            .iter()
            .min_by(|x, y| x.2.cmp(&y.2).then(x.1.cmp(&y.1)))
            .cloned()
        else {
            break;
        };
        let (k, j, value) = low;
        let partner = singles
            .iter()
            .filter(|(_, jp, _)| tables.first(*jp) != tables.first(j))
            .max_by(|x, y| x.2.cmp(&y.2).then(y.1.cmp(&x.1)))
            .cloned();
        let Some((kp, jp, value_p)) = partner else { break };
        let lambda = &value / &value_p;
        assert!(lambda <= Rational::one(), "lambda {lambda} exceeds one");

        let mass_j = signals[k].mass(j).expect("singleton").clone();
        let mass_p = signals[kp].mass(jp).expect("singleton").clone();
        let pooled = Signal::new([(j, mass_j), (jp, &lambda * &mass_p)])?;
        let left = (Rational::one() - &lambda) * mass_p;
        if left.is_positive() {
            signals[kp] = Signal::singleton(jp, left)?;
            signals.remove(k);
        } else {
            let (first, second) = if k > kp { (k, kp) } else { (kp, k) };
            signals.remove(first);
            signals.remove(second);
        }
        signals.push(pooled);
        trace.push(AbsorptionStep { absorbed: j, partner: jp, lambda });
        assert!(trace.len() <= psi.m(), "absorption exceeded m steps");
    }
    let steps = trace.len();
    let report = TransformReport::audited(psi, scheme.clone(), SignalingScheme::new(signals), steps)?;
    Ok((report, trace))
}

pub fn singleton_absorption(psi: &PsiMatrix, scheme: &SignalingScheme) -> Result<TransformReport> {
    singleton_absorption_traced(psi, scheme).map(|(report, _)| report)
}

/// Full revelation followed by [`singleton_absorption`]; its revenue is at
/// least `B / 2`.
pub fn rev_lower_bound_certificate(psi: &PsiMatrix) -> Result<(Rational, SignalingScheme)> {
    if psi.n() < 2 {
        return Err(Error::Degenerate(format!("need at least two bidders, got {}", psi.n())));
    }
    let report = singleton_absorption(psi, &SignalingScheme::all_singletons(psi.m()))?;
    Ok((report.revenue_after, report.after))
}
