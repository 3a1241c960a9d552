//! Offline assignment maximization.
//!
//! Two algorithms over a monotone submodular utility:
//!
//! * [`locally_greedy`] fills positions one at a time with the myopically
//!   best item — a 1/2-approximation.
//! * [`tabular_greedy`] greedily fills a K x C table of (item, color) cells
//!   against the color-averaged objective, then draws one color per
//!   partition to turn the table into an assignment. Its guarantee is
//!   [`beta`]`(K, C)` times the optimum, approaching `1 - 1/e` as the
//!   palette grows.

use crate::error::{Error, Result};
use crate::ground::{Assignment, GroundSet, ItemId, ItemSet};
use crate::sampling::{
    estimate_expected_value, exact_expected_value, sample_colored, ColorTable, ColorVector,
    DEFAULT_ENUM_CAP,
};
use crate::seeding::{derive_seed, rng_from_seed};
use crate::value::{ValueOracle, VALUE_TOLERANCE};

/// How the color-averaged objective is evaluated during greedy steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    /// Enumerate all C^K colorings.
    Exact,
    /// Estimate from uniform coloring draws; all candidates at one greedy
    /// step share the same draws.
    MonteCarlo { n_samples: u32 },
}

#[derive(Debug, Clone)]
pub struct GreedyConfig {
    /// Order in which positions are filled; ascending when `None`.
    pub position_order: Option<Vec<usize>>,
    pub eval_mode: EvalMode,
    /// Seed for Monte-Carlo evaluation draws and the final color draw.
    pub seed: u64,
    /// Let [`locally_greedy`] leave a position empty when every candidate
    /// has negative marginal value. Pointless for monotone utilities; useful
    /// when experimenting with non-monotone ones.
    pub allow_empty: bool,
    /// Cap for exact-mode coloring enumeration.
    pub enum_cap: u64,
}

impl Default for GreedyConfig {
    fn default() -> Self {
        GreedyConfig {
            position_order: None,
            eval_mode: EvalMode::Exact,
            seed: 0,
            allow_empty: false,
            enum_cap: DEFAULT_ENUM_CAP,
        }
    }
}

impl GreedyConfig {
    fn order(&self, gs: &GroundSet) -> Result<Vec<usize>> {
        let k = gs.num_partitions();
        match &self.position_order {
            None => Ok((0..k).collect()),
            Some(order) => {
                let mut seen = vec![false; k];
                if order.len() != k || order.iter().any(|&p| p >= k || std::mem::replace(&mut seen[p], true)) {
                    return Err(Error::invalid("position_order must be a permutation of 0..K"));
                }
                Ok(order.clone())
            }
        }
    }

    fn check_samples(&self) -> Result<()> {
        if let EvalMode::MonteCarlo { n_samples } = self.eval_mode {
            if n_samples == 0 {
                return Err(Error::invalid("monte_carlo mode needs n_samples >= 1"));
            }
        }
        Ok(())
    }
}

/// Result of the table-greedy algorithm: the full table, the color draw used
/// to round it, the resulting assignment, and the table's objective value
/// under the configured evaluation mode.
#[derive(Debug, Clone)]
pub struct TabularResult {
    pub table: ColorTable,
    pub sampled_cvec: ColorVector,
    pub assignment: Assignment,
    pub estimated_value: f64,
}

/// Fill positions in the configured order, each with the item of largest
/// marginal value given the current partial assignment. Ties break toward
/// the lowest item id, so runs are fully deterministic.
pub fn locally_greedy<F: ValueOracle + ?Sized>(
    f: &F,
    gs: &GroundSet,
    cfg: &GreedyConfig,
) -> Result<Assignment> {
    let order = cfg.order(gs)?;
    cfg.check_samples()?;
    let mut current = ItemSet::empty(gs.num_items());
    let mut current_value = f.eval_set(&current);
    for &k in &order {
        let mut best: Option<(f64, ItemId)> = None;
        for &item in gs.partition(k) {
            let value = f.eval_set(&current.with(item));
            // Strictly-better or first candidate wins; ascending iteration
            // makes the lowest id win ties.
            if best.map_or(true, |(bv, _)| value > bv + VALUE_TOLERANCE) {
                best = Some((value, item));
            }
        }
        let (value, item) = best.expect("partitions are non-empty");
        if cfg.allow_empty && value < current_value - VALUE_TOLERANCE {
            continue;
        }
        current.insert(item);
        current_value = value;
    }
    Assignment::from_set(gs, current)
}

/// Greedy over the K x C color table.
///
/// For each color (outer) and each position in the configured order (inner),
/// pick the item whose (item, color) pair most increases the color-averaged
/// objective of the table built so far; finish by drawing one color per
/// partition and sampling the table. Deterministic given the seed.
pub fn tabular_greedy<F: ValueOracle + ?Sized>(
    f: &F,
    gs: &GroundSet,
    colors: u32,
    cfg: &GreedyConfig,
) -> Result<TabularResult> {
    if colors == 0 {
        return Err(Error::invalid("palette size must be at least 1"));
    }
    if cfg.allow_empty {
        return Err(Error::usage(
            "tabular_greedy always fills every (position, color) cell; allow_empty is not supported",
        ));
    }
    let order = cfg.order(gs)?;
    cfg.check_samples()?;

    let mut table = ColorTable::empty(gs, colors)?;
    for color in 1..=colors {
        for &k in &order {
            let step_seed = derive_seed(cfg.seed, (u64::from(color) << 32) | k as u64);
            let mut best: Option<(f64, ItemId)> = None;
            for &item in gs.partition(k) {
                let candidate = table.with_pair(gs, item, color)?;
                let value = table_value(f, gs, &candidate, cfg, step_seed)?;
                if best.map_or(true, |(bv, _)| value > bv + VALUE_TOLERANCE) {
                    best = Some((value, item));
                }
            }
            let (_, item) = best.expect("partitions are non-empty");
            table.insert(gs, item, color)?;
        }
    }

    let mut rng = rng_from_seed(derive_seed(cfg.seed, u64::from(u32::MAX)));
    let sampled_cvec = ColorVector::sample_uniform(gs.num_partitions(), colors, &mut rng);
    let assignment = Assignment::from_set(gs, sample_colored(gs, &table, &sampled_cvec)?)?;
    let estimated_value = table_value(f, gs, &table, cfg, derive_seed(cfg.seed, u64::from(u32::MAX) - 1))?;
    Ok(TabularResult {
        table,
        sampled_cvec,
        assignment,
        estimated_value,
    })
}

fn table_value<F: ValueOracle + ?Sized>(
    f: &F,
    gs: &GroundSet,
    table: &ColorTable,
    cfg: &GreedyConfig,
    seed: u64,
) -> Result<f64> {
    match cfg.eval_mode {
        EvalMode::Exact => exact_expected_value(f, gs, table, cfg.enum_cap),
        EvalMode::MonteCarlo { n_samples } => {
            estimate_expected_value(f, gs, table, n_samples, seed)
        }
    }
}

/// Approximation constant of the table greedy: `1 - (1 - 1/C)^C - K(K-1)/(2C)`.
///
/// May be negative, in which case the guarantee is vacuous (not an error).
pub fn beta(num_partitions: usize, colors: u32) -> f64 {
    let c = colors as f64;
    let k = num_partitions as f64;
    1.0 - (1.0 - 1.0 / c).powi(colors as i32) - k * (k - 1.0) / (2.0 * c)
}
