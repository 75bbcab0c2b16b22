//! Auction instances, the adjusted-valuation matrix, signals and revenue.
//!
//! Bids are kept unnormalized: the bid of bidder `i` on signal `S` is
//! `sum_j psi[i][j] * phi(j, S)`, i.e. `Pr[S] * E[v_i | S]`. Scaling by
//! `Pr[S]` preserves the bidder order and keeps everything division-free.
//!
//! Ties between bidders are always resolved toward the lower index.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::{Error, Rational, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuctionInstance {
    valuations: Vec<Vec<Rational>>,
    prior: Vec<Rational>,
}

impl AuctionInstance {
    pub fn new(valuations: Vec<Vec<Rational>>, prior: Vec<Rational>) -> Result<Self> {
        check_matrix(&valuations, "valuation").map_err(Error::InvalidInstance)?;
        validate_prior(&prior, valuations[0].len())?;
        Ok(Self { valuations, prior })
    }

    pub fn with_uniform_prior(valuations: Vec<Vec<Rational>>) -> Result<Self> {
        check_matrix(&valuations, "valuation").map_err(Error::InvalidInstance)?;
        let prior = uniform_prior(valuations[0].len());
        Ok(Self { valuations, prior })
    }

    /// Number of bidders.
    pub fn n(&self) -> usize {
        self.valuations.len()
    }

    /// Number of item types.
    pub fn m(&self) -> usize {
        self.prior.len()
    }

    pub fn valuations(&self) -> &[Vec<Rational>] {
        &self.valuations
    }

    pub fn valuation(&self, bidder: usize, ty: usize) -> &Rational {
        &self.valuations[bidder][ty]
    }

    pub fn prior(&self) -> &[Rational] {
        &self.prior
    }
}

pub fn uniform_prior(m: usize) -> Vec<Rational> {
    let share = Rational::new(1.into(), (m as i64).into());
    vec![share; m]
}

/// A prior must have `m` strictly positive entries summing to exactly one.
pub fn validate_prior(prior: &[Rational], m: usize) -> Result<()> {
    if prior.len() != m {
        return Err(Error::BadPrior(format!(
            "prior has {} entries but there are {m} types",
            prior.len()
        )));
    }
    if let Some((j, p)) = prior.iter().enumerate().find(|(_, p)| !p.is_positive()) {
        return Err(Error::BadPrior(format!("prior[{j}] = {p} is not strictly positive")));
    }
    let total: Rational = prior.iter().sum();
    if !total.is_one() {
        return Err(Error::BadPrior(format!("prior sums to {total}, not 1")));
    }
    Ok(())
}

fn check_matrix(rows: &[Vec<Rational>], what: &str) -> std::result::Result<(), String> {
    if rows.is_empty() {
        return Err("need at least one bidder".into());
    }
    let m = rows[0].len();
    if m == 0 {
        return Err("need at least one type".into());
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != m {
            return Err(format!("row {i} has {} entries, expected {m}", row.len()));
        }
        if let Some((j, x)) = row.iter().enumerate().find(|(_, x)| x.is_negative()) {
            return Err(format!("{what}[{i}][{j}] = {x} is negative"));
        }
    }
    Ok(())
}

/// Adjusted valuations `psi[i][j] = p[j] * v[i][j]`.
///
/// Read as a divisible-goods auction, `psi[i][j]` is what bidder `i` pays at
/// most for the whole unit of good `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiMatrix {
    rows: Vec<Vec<Rational>>,
}

impl PsiMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        check_matrix(&rows, "psi").map_err(Error::InvalidInstance)?;
        Ok(Self { rows })
    }

    pub fn from_integers<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&x| crate::rational::int(x)).collect())
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn m(&self) -> usize {
        self.rows[0].len()
    }

    pub fn get(&self, bidder: usize, ty: usize) -> &Rational {
        &self.rows[bidder][ty]
    }

    pub fn row(&self, bidder: usize) -> &[Rational] {
        &self.rows[bidder]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn column(&self, ty: usize) -> Vec<Rational> {
        self.rows.iter().map(|r| r[ty].clone()).collect()
    }

    pub fn column_max(&self, ty: usize) -> Rational {
        self.rows.iter().map(|r| &r[ty]).max().cloned().unwrap_or_else(Rational::zero)
    }

    /// Multiplies every entry by `factor`, which must be positive.
    pub fn scaled(&self, factor: &Rational) -> Result<Self> {
        if !factor.is_positive() {
            return Err(Error::InvalidInstance(format!("scale factor {factor} must be positive")));
        }
        Ok(Self {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|x| x * factor).collect())
                .collect(),
        })
    }
}

/// Highest and second-highest index of `values`, ties to the lower index.
/// The second entry is `None` when there is only one value.
pub fn top_two(values: &[Rational]) -> (usize, Option<usize>) {
    assert!(!values.is_empty(), "top_two on an empty slice");
    let mut first = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[first] {
            first = i;
        }
    }
    let mut second: Option<usize> = None;
    for (i, v) in values.iter().enumerate() {
        if i == first {
            continue;
        }
        match second {
            Some(s) if *v <= values[s] => {}
            _ => second = Some(i),
        }
    }
    (first, second)
}

/// Per-type singleton winners and the partition `d(i)` of types by winner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WinnerTables {
    first: Vec<usize>,
    second: Vec<Option<usize>>,
    won: Vec<Vec<usize>>,
}

impl WinnerTables {
    /// `w1(j)`: the bidder with the highest singleton bid on type `j`.
    pub fn first(&self, ty: usize) -> usize {
        self.first[ty]
    }

    /// `w2(j)`, or `None` with a single bidder.
    pub fn second(&self, ty: usize) -> Option<usize> {
        self.second[ty]
    }

    /// `d(i)`: the types on which `bidder` is the singleton winner, ascending.
    pub fn won(&self, bidder: usize) -> &[usize] {
        &self.won[bidder]
    }

    pub fn firsts(&self) -> &[usize] {
        &self.first
    }

    pub fn seconds(&self) -> &[Option<usize>] {
        &self.second
    }
}

pub fn build_psi(instance: &AuctionInstance) -> PsiMatrix {
    let rows = instance
        .valuations
        .iter()
        .map(|row| row.iter().zip(&instance.prior).map(|(v, p)| v * p).collect())
        .collect();
    PsiMatrix { rows }
}

/// Same map as [`build_psi`], named for the divisible-goods reading.
pub fn to_divisible(instance: &AuctionInstance) -> PsiMatrix {
    build_psi(instance)
}

/// Inverse of [`to_divisible`] for a chosen prior (uniform when `None`):
/// `v[i][j] = psi[i][j] / p[j]`.
pub fn from_divisible(psi: &PsiMatrix, prior: Option<&[Rational]>) -> Result<AuctionInstance> {
    let prior = match prior {
        Some(p) => {
            validate_prior(p, psi.m())?;
            p.to_vec()
        }
        None => uniform_prior(psi.m()),
    };
    let valuations = psi
        .rows
        .iter()
        .map(|row| row.iter().zip(&prior).map(|(x, p)| x / p).collect())
        .collect();
    Ok(AuctionInstance { valuations, prior })
}

pub fn winner_tables(psi: &PsiMatrix) -> WinnerTables {
    let (n, m) = (psi.n(), psi.m());
    let mut first = Vec::with_capacity(m);
    let mut second = Vec::with_capacity(m);
    let mut won = vec![Vec::new(); n];
    for j in 0..m {
        let (w1, w2) = top_two(&psi.column(j));
        won[w1].push(j);
        first.push(w1);
        second.push(w2);
    }
    WinnerTables { first, second, won }
}

/// Revenue of the singleton signal `{j}` per unit of mass: `psi[w2(j)][j]`.
pub fn singleton_revenue(psi: &PsiMatrix, tables: &WinnerTables, ty: usize) -> Rational {
    tables
        .second(ty)
        .map(|w2| psi.get(w2, ty).clone())
        .unwrap_or_else(Rational::zero)
}

/// A signal, identified with its support: the types it is sent for, each
/// with the probability `phi(j, S)` of sending it when the type is `j`.
/// Only strictly positive masses are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signal {
    alloc: BTreeMap<usize, Rational>,
}

impl Signal {
    /// Zero masses are dropped. Fails on a negative mass, a mass above one,
    /// a repeated type, or an empty support.
    pub fn new(entries: impl IntoIterator<Item = (usize, Rational)>) -> Result<Self> {
        let mut alloc = BTreeMap::new();
        for (j, mass) in entries {
            if mass.is_negative() || mass > Rational::one() {
                return Err(Error::InvalidSignal(format!("mass {mass} for type {j} is outside [0, 1]")));
            }
            if alloc.contains_key(&j) {
                return Err(Error::InvalidSignal(format!("type {j} listed twice")));
            }
            if !mass.is_zero() {
                alloc.insert(j, mass);
            }
        }
        if alloc.is_empty() {
            return Err(Error::InvalidSignal("empty support".into()));
        }
        Ok(Self { alloc })
    }

    pub fn singleton(ty: usize, mass: Rational) -> Result<Self> {
        Self::new([(ty, mass)])
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.alloc.keys().copied()
    }

    pub fn support_len(&self) -> usize {
        self.alloc.len()
    }

    pub fn is_singleton(&self) -> bool {
        self.alloc.len() == 1
    }

    pub fn mass(&self, ty: usize) -> Option<&Rational> {
        self.alloc.get(&ty)
    }

    pub fn masses(&self) -> &BTreeMap<usize, Rational> {
        &self.alloc
    }

    pub fn same_support(&self, other: &Signal) -> bool {
        self.alloc.keys().eq(other.alloc.keys())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SignalingScheme {
    signals: Vec<Signal>,
}

impl SignalingScheme {
    pub fn new(signals: Vec<Signal>) -> Self {
        Self { signals }
    }

    /// Full revelation: every type sends its own singleton with mass one.
    pub fn all_singletons(m: usize) -> Self {
        Self {
            signals: (0..m)
                .map(|j| Signal::singleton(j, Rational::one()).expect("unit mass"))
                .collect(),
        }
    }

    pub fn signals(&self) -> &[Signal] {
        &self.signals
    }

    pub fn into_signals(self) -> Vec<Signal> {
        self.signals
    }

    pub fn len(&self) -> usize {
        self.signals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signals.is_empty()
    }

    pub fn push(&mut self, signal: Signal) {
        self.signals.push(signal);
    }

    /// `sum_S phi(j, S)` for every type.
    pub fn type_masses(&self, m: usize) -> Vec<Rational> {
        let mut totals = vec![Rational::zero(); m];
        for s in &self.signals {
            for (&j, mass) in &s.alloc {
                totals[j] += mass;
            }
        }
        totals
    }

    /// Every referenced type is below `m` and no type carries mass above one.
    pub fn check_feasible(&self, m: usize) -> Result<()> {
        for s in &self.signals {
            if let Some(j) = s.support().find(|&j| j >= m) {
                return Err(Error::InvalidSignal(format!("type {j} out of range for m = {m}")));
            }
        }
        for (j, total) in self.type_masses(m).into_iter().enumerate() {
            if total > Rational::one() {
                return Err(Error::InfeasibleScheme { type_index: j, mass: total.to_string() });
            }
        }
        Ok(())
    }

    /// Every type's mass sums to exactly one.
    pub fn is_canonical(&self, m: usize) -> bool {
        self.check_feasible(m).is_ok() && self.type_masses(m).iter().all(One::is_one)
    }
}

/// `bid[i] = sum_{j in S} psi[i][j] * phi(j, S)`.
pub fn signal_bids(psi: &PsiMatrix, signal: &Signal) -> Vec<Rational> {
    psi.rows
        .iter()
        .map(|row| signal.alloc.iter().map(|(&j, mass)| &row[j] * mass).sum())
        .collect()
}

/// Second-highest bid on the signal, zero with a single bidder.
pub fn signal_revenue(psi: &PsiMatrix, signal: &Signal) -> Rational {
    let bids = signal_bids(psi, signal);
    match top_two(&bids) {
        (_, Some(w2)) => bids[w2].clone(),
        (_, None) => Rational::zero(),
    }
}

pub fn scheme_revenue(psi: &PsiMatrix, scheme: &SignalingScheme) -> Result<Rational> {
    scheme.check_feasible(psi.m())?;
    Ok(scheme.signals.iter().map(|s| signal_revenue(psi, s)).sum())
}

/// `(singleton revenue, non-singleton revenue)`.
pub fn revenue_split(psi: &PsiMatrix, scheme: &SignalingScheme) -> Result<(Rational, Rational)> {
    scheme.check_feasible(psi.m())?;
    let mut singles = Rational::zero();
    let mut others = Rational::zero();
    for s in &scheme.signals {
        let r = signal_revenue(psi, s);
        if s.is_singleton() {
            singles += r;
        } else {
            others += r;
        }
    }
    Ok((singles, others))
}

/// `(Pr[S], E[v_i | S] for each bidder)` in the probabilistic view.
pub fn posterior_values(instance: &AuctionInstance, signal: &Signal) -> Result<(Rational, Vec<Rational>)> {
    let weights: Vec<(usize, Rational)> = signal
        .alloc
        .iter()
        .map(|(&j, mass)| (j, &instance.prior[j] * mass))
        .collect();
    let probability: Rational = weights.iter().map(|(_, w)| w).sum();
    if probability.is_zero() {
        return Err(Error::ZeroProbabilitySignal);
    }
    let values = instance
        .valuations
        .iter()
        .map(|row| weights.iter().map(|(j, w)| &row[*j] * w).sum::<Rational>() / &probability)
        .collect();
    Ok((probability, values))
}

/// For every (bidder, type), the total mass of signals that bidder wins.
pub fn top_bid_masses(psi: &PsiMatrix, scheme: &SignalingScheme) -> Vec<Vec<Rational>> {
    let mut out = vec![vec![Rational::zero(); psi.m()]; psi.n()];
    for s in &scheme.signals {
        let (w1, _) = top_two(&signal_bids(psi, s));
        for (&j, mass) in &s.alloc {
            out[w1][j] += mass;
        }
    }
    out
}
