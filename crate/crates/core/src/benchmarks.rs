//! Benchmarks `B` and `B~`, the brute-force pure optimum, and instance
//! generators.
//!
//! # Random instances
//!
//! [`random_instance`] is driven by [`SplitMix64`]:
//!
//! ```text
//! state = state + 0x9E3779B97F4A7C15          (wrapping)
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9    (wrapping)
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB    (wrapping)
//! return z ^ (z >> 31)
//! ```
//!
//! seeded with `state = seed`. Valuations are drawn row by row (bidder 0
//! first, types in order), each as `next() % (max_value + 1)`; the prior
//! is uniform. [`random_corpus`] draws dimensions from a separate generator
//! seeded with `seed`: `n = 2 + next() % (max_n - 1)`, then
//! `m = 1 + next() % max_m`, and then calls `random_instance(seed, n, m, ..)`.
//!
//! # Pure schemes
//!
//! A pure scheme is a partition of the types. Partitions are enumerated as
//! restricted-growth strings in lexicographic order (`a[0] = 0`,
//! `a[k] <= 1 + max(a[..k])`); part `b` holds the types labelled `b`, in
//! ascending order. Among equally good partitions the first one in this
//! order is reported.

use num_traits::Zero;

use crate::model::{top_two, winner_tables, AuctionInstance, PsiMatrix, Signal, SignalingScheme};
use crate::rational::int;
use crate::{Error, Rational, Result};

pub const MAX_PURE_TYPES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchmarkReport {
    /// `min_{i'} sum_j max_{i != i'} psi[i][j]`
    pub b: Rational,
    /// The omitted bidder attaining `b`.
    pub i0: usize,
    /// `sum_j max_{i != i*} psi[i][j]`
    pub b_tilde: Rational,
    /// `argmax_i sum_{j in d(i)} psi[i][j]`
    pub i_star: usize,
}

impl BenchmarkReport {
    /// `B~ / 2 <= B <= B~`
    pub fn sandwich_holds(&self) -> bool {
        &self.b_tilde / int(2) <= self.b && self.b <= self.b_tilde
    }
}

fn require_two_bidders(psi: &PsiMatrix) -> Result<()> {
    if psi.n() < 2 {
        return Err(Error::Degenerate(format!("need at least two bidders, got {}", psi.n())));
    }
    Ok(())
}

/// `sum_j max_{i != omitted} psi[i][j]`
fn sum_without(psi: &PsiMatrix, omitted: usize) -> Rational {
    (0..psi.m())
        .map(|j| {
            (0..psi.n())
                .filter(|&i| i != omitted)
                .map(|i| psi.get(i, j))
                .max()
                .cloned()
                .unwrap_or_else(Rational::zero)
        })
        .sum()
}

pub fn benchmark_b(psi: &PsiMatrix) -> Result<(Rational, usize)> {
    require_two_bidders(psi)?;
    let mut best = (sum_without(psi, 0), 0);
    for i in 1..psi.n() {
        let value = sum_without(psi, i);
        if value < best.0 {
            best = (value, i);
        }
    }
    Ok(best)
}

pub fn benchmark_b_tilde(psi: &PsiMatrix) -> Result<(Rational, usize)> {
    require_two_bidders(psi)?;
    let tables = winner_tables(psi);
    let coveted = |i: usize| -> Rational { tables.won(i).iter().map(|&j| psi.get(i, j)).sum() };
    let mut i_star = 0;
    let mut best = coveted(0);
    for i in 1..psi.n() {
        let value = coveted(i);
        if value > best {
            best = value;
            i_star = i;
        }
    }
    Ok((sum_without(psi, i_star), i_star))
}

pub fn benchmarks(psi: &PsiMatrix) -> Result<BenchmarkReport> {
    let (b, i0) = benchmark_b(psi)?;
    let (b_tilde, i_star) = benchmark_b_tilde(psi)?;
    Ok(BenchmarkReport { b, i0, b_tilde, i_star })
}

/// `sum_j max_i psi[i][j]`: what selling every good at its top value earns.
pub fn revenue_upper_bound(psi: &PsiMatrix) -> Rational {
    (0..psi.m()).map(|j| psi.column_max(j)).sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PureSchemeResult {
    pub partition: Vec<Vec<usize>>,
    pub revenue: Rational,
}

impl PureSchemeResult {
    /// The partition as a canonical 0/1 scheme.
    pub fn to_scheme(&self) -> SignalingScheme {
        SignalingScheme::new(
            self.partition
                .iter()
                .map(|part| Signal::new(part.iter().map(|&j| (j, int(1)))).expect("nonempty part"))
                .collect(),
        )
    }
}

/// `sum over parts P of max2_i sum_{j in P} psi[i][j]`
pub fn partition_revenue(psi: &PsiMatrix, partition: &[Vec<usize>]) -> Rational {
    partition
        .iter()
        .map(|part| {
            let sums: Vec<Rational> = (0..psi.n())
                .map(|i| part.iter().map(|&j| psi.get(i, j)).sum())
                .collect();
            match top_two(&sums) {
                (_, Some(w2)) => sums[w2].clone(),
                (_, None) => Rational::zero(),
            }
        })
        .sum()
}

/// Restricted-growth strings of length `len` in lexicographic order.
#[derive(Debug, Clone)]
pub struct SetPartitions {
    labels: Vec<usize>,
    /// `prefix_max[k] = max(labels[..=k])`
    prefix_max: Vec<usize>,
    done: bool,
}

impl SetPartitions {
    pub fn new(len: usize) -> Self {
        Self { labels: vec![0; len], prefix_max: vec![0; len], done: len == 0 }
    }

    fn advance(&mut self) -> bool {
        let len = self.labels.len();
        for k in (1..len).rev() {
            if self.labels[k] <= self.prefix_max[k - 1] {
                self.labels[k] += 1;
                self.prefix_max[k] = self.prefix_max[k - 1].max(self.labels[k]);
                for t in k + 1..len {
                    self.labels[t] = 0;
                    self.prefix_max[t] = self.prefix_max[k];
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for SetPartitions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let current = self.labels.clone();
        self.done = !self.advance();
        Some(current)
    }
}

/// Groups types by label; part order follows label order.
pub fn labels_to_partition(labels: &[usize]) -> Vec<Vec<usize>> {
    let parts = labels.iter().max().map_or(0, |&b| b + 1);
    let mut out = vec![Vec::new(); parts];
    for (j, &b) in labels.iter().enumerate() {
        out[b].push(j);
    }
    out
}

/// Best pure scheme by exhaustive search over all set partitions.
pub fn optimal_pure_revenue(psi: &PsiMatrix) -> Result<PureSchemeResult> {
    require_two_bidders(psi)?;
    if psi.m() > MAX_PURE_TYPES {
        return Err(Error::TooLarge(format!(
            "pure search enumerates Bell(m) partitions; m = {} exceeds {MAX_PURE_TYPES}",
            psi.m()
        )));
    }
    let mut best: Option<PureSchemeResult> = None;
    for labels in SetPartitions::new(psi.m()) {
        let partition = labels_to_partition(&labels);
        let revenue = partition_revenue(psi, &partition);
        if best.as_ref().is_none_or(|b| revenue > b.revenue) {
            best = Some(PureSchemeResult { partition, revenue });
        }
    }
    Ok(best.expect("at least one partition"))
}

/// The instance with `n = m = k + 1` and uniform prior where mixing earns
/// exactly twice the best pure scheme: bidder 0 values type 0 at `k + 1`,
/// bidder `i >= 1` values type `i` at 1, everything else 0.
pub fn gap_instance(k: i64) -> Result<AuctionInstance> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::BadK(k));
    }
    let size = (k + 1) as usize;
    let valuations = (0..size)
        .map(|i| {
            (0..size)
                .map(|j| match (i, j) {
                    (0, 0) => int(k + 1),
                    _ if i == j => int(1),
                    _ => int(0),
                })
                .collect()
        })
        .collect();
    AuctionInstance::with_uniform_prior(valuations)
}

/// `n = m`, identity valuations, uniform prior.
pub fn identity_instance(m: usize) -> Result<AuctionInstance> {
    if m == 0 {
        return Err(Error::InvalidInstance("need at least one type".into()));
    }
    let valuations = (0..m)
        .map(|i| (0..m).map(|j| int((i == j) as i64)).collect())
        .collect();
    AuctionInstance::with_uniform_prior(valuations)
}

/// Three bidders, three goods, where `B` and `B~` omit different bidders.
pub fn figure2_instance() -> PsiMatrix {
    PsiMatrix::from_integers(&[[500, 500, 0], [499, 498, 1], [7, 3, 999]]).expect("constant matrix")
}

/// SplitMix64 with the constants listed in the module docs.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// `next_u64() % bound`
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }
}

pub fn random_instance(seed: u64, n: usize, m: usize, max_value: u64) -> Result<AuctionInstance> {
    if n == 0 || m == 0 || max_value == 0 {
        return Err(Error::InvalidInstance(format!(
            "random_instance needs n, m, max_value >= 1 (got {n}, {m}, {max_value})"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let valuations = (0..n)
        .map(|_| (0..m).map(|_| int(rng.below(max_value + 1) as i64)).collect())
        .collect();
    AuctionInstance::with_uniform_prior(valuations)
}

/// Seeds `0..count` with dimensions `2 <= n <= max_n`, `1 <= m <= max_m`.
pub fn random_corpus(count: u64, max_n: usize, max_m: usize, max_value: u64) -> Result<Vec<(u64, AuctionInstance)>> {
    if max_n < 2 || max_m < 1 {
        return Err(Error::InvalidInstance("corpus needs max_n >= 2 and max_m >= 1".into()));
    }
    (0..count)
        .map(|seed| {
            let mut dims = SplitMix64::new(seed);
            let n = 2 + dims.below(max_n as u64 - 1) as usize;
            let m = 1 + dims.below(max_m as u64) as usize;
            random_instance(seed, n, m, max_value).map(|inst| (seed, inst))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_psi, scheme_revenue, signal_bids};
    use crate::rational::ratio;

    fn part_revenue_via_signal(psi: &PsiMatrix, part: &[usize]) -> Rational {
        let s = Signal::new(part.iter().map(|&j| (j, int(1)))).unwrap();
        let bids = signal_bids(psi, &s);
        match top_two(&bids) {
            (_, Some(w2)) => bids[w2].clone(),
            _ => Rational::zero(),
        }
    }

    fn identity_psi(m: usize) -> PsiMatrix {
        build_psi(&identity_instance(m).unwrap())
    }

    fn bell(n: usize) -> usize {
        // Bell triangle
        let mut row = vec![1usize];
        for _ in 0..n {
            let mut next = vec![*row.last().unwrap()];
            for x in &row {
                let v = next.last().unwrap() + x;
                next.push(v);
            }
            row = next;
        }
        row[0]
    }

    #[test]
    fn figure2_benchmarks() {
        let psi = figure2_instance();
        let r = benchmarks(&psi).unwrap();
        assert_eq!((r.b.clone(), r.i0), (int(1001), 2));
        assert_eq!((r.b_tilde.clone(), r.i_star), (int(1996), 0));
        assert_ne!(r.i0, r.i_star);
        assert!(r.sandwich_holds());
        assert_eq!(revenue_upper_bound(&psi), int(1999));
    }

    #[test]
    fn identity_benchmarks() {
        for m in 2..=6 {
            let r = benchmarks(&identity_psi(m)).unwrap();
            assert_eq!(r.b, ratio(m as i64 - 1, m as i64));
            assert_eq!(r.b_tilde, ratio(m as i64 - 1, m as i64));
            assert_eq!(r.i0, 0);
        }
        assert_eq!(revenue_upper_bound(&identity_psi(3)), int(1));
    }

    #[test]
    fn identical_rows_and_single_winner() {
        let psi = PsiMatrix::from_integers(&[[2, 5, 1], [2, 5, 1]]).unwrap();
        assert_eq!(benchmark_b(&psi).unwrap().0, int(8));
        let psi = PsiMatrix::from_integers(&[[9, 8, 7], [1, 2, 3], [0, 4, 1]]).unwrap();
        let (bt, star) = benchmark_b_tilde(&psi).unwrap();
        assert_eq!(star, 0);
        assert_eq!(bt, int(1 + 4 + 3));
    }

    #[test]
    fn degenerate_and_zero() {
        let one = PsiMatrix::from_integers(&[[1, 2]]).unwrap();
        assert!(matches!(benchmark_b(&one), Err(Error::Degenerate(_))));
        assert!(matches!(benchmark_b_tilde(&one), Err(Error::Degenerate(_))));
        assert!(matches!(optimal_pure_revenue(&one), Err(Error::Degenerate(_))));
        let zero = PsiMatrix::from_integers(&[[0, 0], [0, 0]]).unwrap();
        assert_eq!(revenue_upper_bound(&zero), int(0));
    }

    #[test]
    fn set_partitions_enumerate_bell_numbers() {
        for len in 1..=7 {
            let all: Vec<_> = SetPartitions::new(len).collect();
            assert_eq!(all.len(), bell(len));
            assert!(all.windows(2).all(|w| w[0] < w[1]), "lexicographic order");
            for labels in &all {
                assert_eq!(labels[0], 0);
                for k in 1..len {
                    assert!(labels[k] <= 1 + labels[..k].iter().max().unwrap());
                }
            }
        }
        assert_eq!(SetPartitions::new(10).count(), 115_975);
        assert_eq!(SetPartitions::new(0).count(), 0);
    }

    #[test]
    fn pure_identity() {
        let r = optimal_pure_revenue(&identity_psi(3)).unwrap();
        assert_eq!(r.revenue, ratio(1, 3));
        // the lexicographically first maximizer is the grand bundle
        assert_eq!(r.partition, vec![vec![0, 1, 2]]);
        assert_eq!(scheme_revenue(&identity_psi(3), &r.to_scheme()).unwrap(), r.revenue);
    }

    #[test]
    fn pure_gap_and_single_type() {
        let psi = build_psi(&gap_instance(2).unwrap());
        assert_eq!(optimal_pure_revenue(&psi).unwrap().revenue, ratio(1, 3));
        let psi = PsiMatrix::from_integers(&[[4], [7], [5]]).unwrap();
        let r = optimal_pure_revenue(&psi).unwrap();
        assert_eq!(r.revenue, int(5));
        assert_eq!(r.partition, vec![vec![0]]);
    }

    #[test]
    fn pure_guard() {
        let psi = PsiMatrix::new(vec![vec![int(1); 11]; 2]).unwrap();
        assert!(matches!(optimal_pure_revenue(&psi), Err(Error::TooLarge(_))));
    }

    #[test]
    fn partition_revenue_matches_signals() {
        let psi = figure2_instance();
        for labels in SetPartitions::new(3) {
            let parts = labels_to_partition(&labels);
            let direct: Rational = parts.iter().map(|p| part_revenue_via_signal(&psi, p)).sum();
            assert_eq!(partition_revenue(&psi, &parts), direct);
        }
    }

    #[test]
    fn gap_instances() {
        let g = gap_instance(2).unwrap();
        assert_eq!(g.valuations()[0], vec![int(3), int(0), int(0)]);
        assert_eq!(g.valuations()[1], vec![int(0), int(1), int(0)]);
        assert_eq!(g.valuations()[2], vec![int(0), int(0), int(1)]);
        let g4 = gap_instance(4).unwrap();
        assert_eq!((g4.n(), g4.m()), (5, 5));
        assert_eq!(g4.valuation(0, 0), &int(5));
        assert_eq!(g4.valuation(3, 3), &int(1));
        for bad in [3, 0, -2, 1] {
            assert!(matches!(gap_instance(bad), Err(Error::BadK(_))));
        }
    }

    #[test]
    fn identity_instance_shape() {
        let i = identity_instance(1).unwrap();
        assert_eq!((i.n(), i.m()), (1, 1));
        assert!(identity_instance(0).is_err());
    }

    #[test]
    fn splitmix_reference_values() {
        // Reference outputs of SplitMix64 seeded with 0.
        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(rng.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(rng.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn random_instances_are_reproducible() {
        let a = random_instance(42, 3, 3, 9).unwrap();
        let b = random_instance(42, 3, 3, 9).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_instance(43, 3, 3, 9).unwrap());
        assert!(a.valuations().iter().flatten().all(|v| *v >= int(0) && *v <= int(9)));
        assert!(random_instance(1, 0, 3, 9).is_err());
        let corpus = random_corpus(200, 4, 4, 9).unwrap();
        assert_eq!(corpus.len(), 200);
        assert!(corpus.iter().all(|(_, i)| (2..=4).contains(&i.n()) && (1..=4).contains(&i.m())));
    }
}
