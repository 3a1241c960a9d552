//! Maximizing monotone submodular utilities over assignments — one item per
//! position — offline and online.
//!
//! The crate provides:
//!
//! * a ground-set / assignment data model with color-table sampling and
//!   exact or Monte-Carlo evaluation of the color-averaged objective
//!   ([`sampling`]);
//! * the locally greedy algorithm (1/2-approximation) and the color-table
//!   greedy whose guarantee [`beta`]`(K, C)` approaches `1 - 1/e`
//!   ([`offline`]);
//! * multiplicative-weights experts and the online meta-algorithm that runs
//!   one expert per table cell, under full-information or bandit feedback
//!   ([`experts`], [`tgbandit`]);
//! * simulation environments: a Markovian ad-click model, discounted
//!   coverage with a synthetic instance generator, and a separable
//!   click-through-rate baseline ([`environments`]);
//! * brute-force references and property checks every approximation claim
//!   is tested against ([`oracle`], [`check`]).
//!
//! All randomness flows from caller-supplied seeds; identical seeds replay
//! identical runs.

pub mod check;
pub mod environments;
pub mod error;
pub mod experts;
pub mod ground;
pub mod offline;
pub mod oracle;
pub mod sampling;
pub mod seeding;
pub mod tgbandit;
pub mod value;

pub use check::{check_monotone_submodular, CheckConfig, CheckMode, CheckReport};
pub use error::{Error, Result};
pub use experts::{DoublingHedge, ExpertMode, HedgeExpert, NoRegretExpert};
pub use ground::{Assignment, GroundSet, ItemId, ItemSet};
pub use offline::{beta, locally_greedy, tabular_greedy, EvalMode, GreedyConfig, TabularResult};
pub use oracle::{brute_force_opt, regret_curve, OptResult};
pub use sampling::{
    estimate_expected_value, exact_expected_value, sample_colored, Color, ColorTable, ColorVector,
};
pub use tgbandit::{
    default_explore_prob, BanditFeedback, ExploreSchedule, FeedbackSpec, RoundSelection, TgConfig,
    TgState,
};
pub use value::{FnOracle, ValueOracle, VALUE_TOLERANCE};
