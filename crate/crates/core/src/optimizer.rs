//! LP formulations of the optimal mixed signaling problem.
//!
//! * [`build_naive_lp`]: one variable block per (nonempty type subset,
//!   ordered bidder pair), exponential in `m`. Used as an oracle.
//! * [`build_reduced_lp`]: singleton variables `x_j` plus one block per
//!   ordered pair `(i1, i2)` over the types `d(i1) ∪ d(i2)`.
//! * [`build_equalbid_lp`]: singletons plus one block per unordered pair of
//!   singleton winners, with the two bids forced equal. Smallest of the
//!   three and the default.
//!
//! In every block the first designated bidder outbids the second, who in
//! turn outbids everyone else, so the block's revenue is the second
//! bidder's bid and the LP objective is the exact second-price revenue.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::lp::{solve_exact, LpProblem, LpSolution, Relation};
use crate::model::{singleton_revenue, winner_tables, PsiMatrix, Signal, SignalingScheme};
use crate::{Error, Rational, Result};

pub const MAX_NAIVE_TYPES: usize = 8;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Method {
    Naive,
    Reduced,
    #[default]
    EqualBid,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Naive, Method::Reduced, Method::EqualBid];

    pub fn name(self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::Reduced => "reduced",
            Method::EqualBid => "equalbid",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "naive" => Ok(Method::Naive),
            "reduced" => Ok(Method::Reduced),
            "equalbid" => Ok(Method::EqualBid),
            other => Err(format!("unknown method {other:?} (expected naive, reduced or equalbid)")),
        }
    }
}

/// A group of LP variables that together form one signal: `vars` maps each
/// type in the block to its variable. `first` is designated to win and
/// `second` to come second (or tie with `first` in the equal-bid LP).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignalBlock {
    pub first: usize,
    pub second: usize,
    pub vars: Vec<(usize, usize)>,
}

impl SignalBlock {
    pub fn types(&self) -> impl Iterator<Item = usize> + '_ {
        self.vars.iter().map(|&(j, _)| j)
    }

    fn var(&self, ty: usize) -> Option<usize> {
        self.vars.iter().find(|&&(j, _)| j == ty).map(|&(_, v)| v)
    }
}

/// Variables `x_j(S, i1, i2)` of the exponential LP, one block per
/// `(S, i1, i2)` with the types of `S` in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaiveLpIndex {
    m: usize,
    blocks: Vec<SignalBlock>,
}

impl NaiveLpIndex {
    pub fn blocks(&self) -> &[SignalBlock] {
        &self.blocks
    }

    /// All `(subset, (i1, i2), type, variable)` entries.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, (usize, usize), usize, usize)> + '_ {
        self.blocks.iter().flat_map(|b| {
            let subset: Vec<usize> = b.types().collect();
            b.vars
                .iter()
                .map(move |&(j, v)| (subset.clone(), (b.first, b.second), j, v))
        })
    }

    pub fn var(&self, subset: &[usize], first: usize, second: usize, ty: usize) -> Option<usize> {
        self.blocks
            .iter()
            .find(|b| b.first == first && b.second == second && b.types().eq(subset.iter().copied()))
            .and_then(|b| b.var(ty))
    }
}

/// Variables of the reduced and equal-bid LPs: a singleton variable `x_j`
/// per type and one block `y(i1, i2)` per bidder pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedLpIndex {
    singleton_vars: Vec<usize>,
    blocks: Vec<SignalBlock>,
    equal_bids: bool,
}

impl ReducedLpIndex {
    pub fn singleton_var(&self, ty: usize) -> usize {
        self.singleton_vars[ty]
    }

    /// `y_j(i1, i2)`. In the equal-bid LP the pair is unordered.
    pub fn pair_var(&self, first: usize, second: usize, ty: usize) -> Option<usize> {
        let (first, second) = if self.equal_bids && first > second { (second, first) } else { (first, second) };
        self.blocks
            .iter()
            .find(|b| b.first == first && b.second == second)
            .and_then(|b| b.var(ty))
    }

    pub fn blocks(&self) -> &[SignalBlock] {
        &self.blocks
    }

    pub fn is_equal_bid(&self) -> bool {
        self.equal_bids
    }

    /// Number of signals the LP can produce: singletons plus pair blocks.
    pub fn signal_block_count(&self) -> usize {
        self.singleton_vars.len() + self.blocks.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpIndex {
    Naive(NaiveLpIndex),
    Reduced(ReducedLpIndex),
}

impl From<NaiveLpIndex> for LpIndex {
    fn from(ix: NaiveLpIndex) -> Self {
        LpIndex::Naive(ix)
    }
}

impl From<ReducedLpIndex> for LpIndex {
    fn from(ix: ReducedLpIndex) -> Self {
        LpIndex::Reduced(ix)
    }
}

fn require_two_bidders(psi: &PsiMatrix) -> Result<()> {
    if psi.n() < 2 {
        return Err(Error::Degenerate(format!("the LPs need at least two bidders, got {}", psi.n())));
    }
    Ok(())
}

/// Accumulates variables and constraints; rows are kept sparse until the
/// problem is materialized.
struct Builder {
    objective: Vec<Rational>,
    names: Vec<String>,
    rows: Vec<(Vec<(usize, Rational)>, Relation, Rational)>,
}

impl Builder {
    fn new() -> Self {
        Self { objective: Vec::new(), names: Vec::new(), rows: Vec::new() }
    }

    fn var(&mut self, name: String, cost: Rational) -> usize {
        self.objective.push(cost);
        self.names.push(name);
        self.objective.len() - 1
    }

    /// `sum_j y_j (psi[lo][j] - psi[hi][j]) <= 0`, i.e. bidder `hi` bids at
    /// least as much as bidder `lo` on the block.
    fn outbids(&mut self, psi: &PsiMatrix, block: &SignalBlock, hi: usize, lo: usize) {
        self.homogeneous(psi, block, lo, hi, Relation::Le);
    }

    fn homogeneous(&mut self, psi: &PsiMatrix, block: &SignalBlock, plus: usize, minus: usize, relation: Relation) {
        let terms: Vec<(usize, Rational)> = block
            .vars
            .iter()
            .map(|&(j, v)| (v, psi.get(plus, j) - psi.get(minus, j)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        if !terms.is_empty() {
            self.rows.push((terms, relation, Rational::zero()));
        }
    }

    fn mass_rows(&mut self, m: usize, per_type: Vec<Vec<usize>>) {
        debug_assert_eq!(per_type.len(), m);
        for vars in per_type {
            if !vars.is_empty() {
                let terms = vars.into_iter().map(|v| (v, Rational::one())).collect();
                self.rows.push((terms, Relation::Le, Rational::one()));
            }
        }
    }

    fn finish(self) -> LpProblem {
        let mut problem = LpProblem::new(self.objective).with_var_names(self.names);
        for (terms, relation, rhs) in self.rows {
            problem.add_terms(&terms, relation, rhs);
        }
        problem
    }
}

fn subset_label(types: &[usize]) -> String {
    let inner: Vec<String> = types.iter().map(usize::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

/// The exponential LP over every nonempty type subset and ordered pair.
pub fn build_naive_lp(psi: &PsiMatrix) -> Result<(LpProblem, NaiveLpIndex)> {
    require_two_bidders(psi)?;
    let (n, m) = (psi.n(), psi.m());
    if m > MAX_NAIVE_TYPES {
        return Err(Error::TooLarge(format!(
            "the naive LP has 2^m blocks; m = {m} exceeds {MAX_NAIVE_TYPES}"
        )));
    }
    let mut b = Builder::new();
    let mut blocks = Vec::new();
    let mut per_type = vec![Vec::new(); m];
    for mask in 1u32..(1 << m) {
        let subset: Vec<usize> = (0..m).filter(|j| mask & (1 << j) != 0).collect();
        for first in 0..n {
            for second in (0..n).filter(|&i| i != first) {
                let vars = subset
                    .iter()
                    .map(|&j| {
                        let name = format!("x{j}({},{first},{second})", subset_label(&subset));
                        let v = b.var(name, psi.get(second, j).clone());
                        per_type[j].push(v);
                        (j, v)
                    })
                    .collect();
                let block = SignalBlock { first, second, vars };
                for other in (0..n).filter(|&i| i != first && i != second) {
                    b.outbids(psi, &block, first, other);
                    b.outbids(psi, &block, second, other);
                }
                b.outbids(psi, &block, first, second);
                blocks.push(block);
            }
        }
    }
    b.mass_rows(m, per_type);
    Ok((b.finish(), NaiveLpIndex { m, blocks }))
}

/// Singletons plus one block per ordered pair over `d(i1) ∪ d(i2)`.
/// Pairs whose union is empty are skipped.
pub fn build_reduced_lp(psi: &PsiMatrix) -> Result<(LpProblem, ReducedLpIndex)> {
    require_two_bidders(psi)?;
    let (n, m) = (psi.n(), psi.m());
    let tables = winner_tables(psi);
    let mut b = Builder::new();
    let mut per_type = vec![Vec::new(); m];
    let singleton_vars: Vec<usize> = (0..m)
        .map(|j| {
            let v = b.var(format!("x{j}"), singleton_revenue(psi, &tables, j));
            per_type[j].push(v);
            v
        })
        .collect();
    let mut blocks = Vec::new();
    for first in 0..n {
        for second in (0..n).filter(|&i| i != first) {
            let mut types: Vec<usize> = tables.won(first).iter().chain(tables.won(second)).copied().collect();
            if types.is_empty() {
                continue;
            }
            types.sort_unstable();
            let vars = types
                .iter()
                .map(|&j| {
                    let v = b.var(format!("y{j}({first},{second})"), psi.get(second, j).clone());
                    per_type[j].push(v);
                    (j, v)
                })
                .collect();
            let block = SignalBlock { first, second, vars };
            b.outbids(psi, &block, first, second);
            for other in (0..n).filter(|&i| i != first && i != second) {
                b.outbids(psi, &block, first, other);
                b.outbids(psi, &block, second, other);
            }
            blocks.push(block);
        }
    }
    b.mass_rows(m, per_type);
    Ok((b.finish(), ReducedLpIndex { singleton_vars, blocks, equal_bids: false }))
}

/// Singletons plus one block per unordered pair `{i1, i2}` of bidders that
/// both win some type, with their bids on the block constrained equal.
pub fn build_equalbid_lp(psi: &PsiMatrix) -> Result<(LpProblem, ReducedLpIndex)> {
    require_two_bidders(psi)?;
    let (n, m) = (psi.n(), psi.m());
    let tables = winner_tables(psi);
    let mut b = Builder::new();
    let mut per_type = vec![Vec::new(); m];
    let singleton_vars: Vec<usize> = (0..m)
        .map(|j| {
            let v = b.var(format!("x{j}"), singleton_revenue(psi, &tables, j));
            per_type[j].push(v);
            v
        })
        .collect();
    let winners: Vec<usize> = (0..n).filter(|&i| !tables.won(i).is_empty()).collect();
    let mut blocks = Vec::new();
    for (k, &first) in winners.iter().enumerate() {
        for &second in &winners[k + 1..] {
            let mut types: Vec<usize> = tables.won(first).iter().chain(tables.won(second)).copied().collect();
            types.sort_unstable();
            let vars = types
                .iter()
                .map(|&j| {
                    let v = b.var(format!("y{j}({first},{second})"), psi.get(first, j).clone());
                    per_type[j].push(v);
                    (j, v)
                })
                .collect();
            let block = SignalBlock { first, second, vars };
            b.homogeneous(psi, &block, first, second, Relation::Eq);
            for other in (0..n).filter(|&i| i != first && i != second) {
                b.outbids(psi, &block, first, other);
                b.outbids(psi, &block, second, other);
            }
            blocks.push(block);
        }
    }
    b.mass_rows(m, per_type);
    Ok((b.finish(), ReducedLpIndex { singleton_vars, blocks, equal_bids: true }))
}

fn block_signal(block: &SignalBlock, values: &[Rational]) -> Result<Option<Signal>> {
    let entries: Vec<(usize, Rational)> = block
        .vars
        .iter()
        .map(|&(j, v)| (j, values[v].clone()))
        .filter(|(_, x)| x.is_positive())
        .collect();
    if entries.is_empty() {
        return Ok(None);
    }
    Signal::new(entries).map(Some)
}

/// Turns an optimal LP point into a canonical scheme: one signal per block
/// with positive mass, then per type a singleton carrying `x_j` plus any
/// unused mass, so that every type's masses sum to one.
pub fn extract_scheme(solution: &LpSolution, index: &LpIndex, psi: &PsiMatrix) -> Result<SignalingScheme> {
    if !solution.is_optimal() {
        return Err(Error::NotOptimal);
    }
    let m = psi.m();
    let values = &solution.values;
    let blocks = match index {
        LpIndex::Naive(ix) => {
            if ix.m != m {
                return Err(Error::InvalidInstance(format!("index built for m = {}, psi has m = {m}", ix.m)));
            }
            &ix.blocks
        }
        LpIndex::Reduced(ix) => {
            if ix.singleton_vars.len() != m {
                return Err(Error::InvalidInstance(format!(
                    "index built for m = {}, psi has m = {m}",
                    ix.singleton_vars.len()
                )));
            }
            &ix.blocks
        }
    };
    let mut signals = Vec::new();
    for block in blocks {
        if let Some(s) = block_signal(block, values)? {
            signals.push(s);
        }
    }
    let used = SignalingScheme::new(signals.clone()).type_masses(m);
    for (j, mass) in used.iter().enumerate() {
        let rest = Rational::one() - mass;
        if rest.is_negative() {
            return Err(Error::InfeasibleScheme { type_index: j, mass: mass.to_string() });
        }
        if rest.is_positive() {
            signals.push(Signal::singleton(j, rest)?);
        }
    }
    Ok(SignalingScheme::new(signals))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedOptimum {
    pub revenue: Rational,
    pub scheme: SignalingScheme,
}

/// The revenue-optimal mixed scheme via the chosen formulation. With a
/// single bidder nothing can be earned and full revelation is returned.
pub fn optimal_mixed(psi: &PsiMatrix, method: Method) -> Result<MixedOptimum> {
    if psi.n() < 2 {
        return Ok(MixedOptimum { revenue: Rational::zero(), scheme: SignalingScheme::all_singletons(psi.m()) });
    }
    let (problem, index): (LpProblem, LpIndex) = match method {
        Method::Naive => build_naive_lp(psi).map(|(p, ix)| (p, ix.into()))?,
        Method::Reduced => build_reduced_lp(psi).map(|(p, ix)| (p, ix.into()))?,
        Method::EqualBid => build_equalbid_lp(psi).map(|(p, ix)| (p, ix.into()))?,
    };
    let solution = solve_exact(&problem)?;
    let scheme = extract_scheme(&solution, &index, psi)?;
    let revenue = solution.objective_value.ok_or(Error::NotOptimal)?;
    Ok(MixedOptimum { revenue, scheme })
}
