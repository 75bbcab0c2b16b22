//! Exact solvers for revenue-optimal signaling schemes in probabilistic
//! single-item second-price auctions.
//!
//! An auctioneer sells one item whose type `j` is drawn from a public prior
//! `p`. Bidder `i` values a type-`j` item at `v[i][j]`. The auctioneer sees
//! the realized type and broadcasts a signal, after which the bidders run a
//! second-price auction on their posterior expected values. Everything that
//! matters for revenue is captured by the adjusted valuations
//! `psi[i][j] = p[j] * v[i][j]`, which also describe an equivalent auction of
//! `m` divisible goods sold in bundles.
//!
//! The crate is split into:
//!
//! * [`model`]: instances, the `psi` matrix, signals, schemes and revenue.
//! * [`lp`]: a dense two-phase simplex with Bland's rule, exact and `f64`.
//! * [`optimizer`]: the exponential, reduced and equal-bid LP formulations,
//!   and extraction of a canonical scheme from an optimal LP point.
//! * [`transforms`]: revenue-preserving and revenue-improving rewrites of
//!   schemes (merging, splitting, bid equalization, singleton absorption).
//! * [`benchmarks`]: the `B` and `B~` benchmarks, brute-force pure optimum,
//!   and named and random instance generators.
//! * [`instance_file`]: the JSON instance format.
//!
//! All arithmetic in the model is exact ([`Rational`]).

pub mod benchmarks;
pub mod error;
pub mod instance_file;
pub mod lp;
pub mod model;
pub mod optimizer;
pub mod rational;
pub mod transforms;

pub use error::{Error, Result};
pub use model::{AuctionInstance, PsiMatrix, Signal, SignalingScheme, WinnerTables};
pub use rational::Rational;
