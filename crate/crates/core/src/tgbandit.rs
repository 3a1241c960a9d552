//! Online assignment learning.
//!
//! One no-regret expert per (partition, color) cell. Each round every cell
//! proposes an item, one color per partition is drawn uniformly, and the
//! matching proposals form the played assignment. Feedback routes back per
//! cell against the cell's table prefix: all proposals of strictly smaller
//! color, plus same-color proposals of strictly smaller partitions.
//!
//! Full information feeds every cell the utility of every candidate on top
//! of its prefix. Bandit feedback explores with a small probability: an
//! exploration round swaps the play for a sampled prefix plus one uniformly
//! random candidate, and the single observed reward becomes an
//! importance-weighted estimate for that candidate alone.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::experts::{ExpertMode, HedgeExpert, NoRegretExpert};
use crate::ground::{Assignment, GroundSet, ItemId, ItemSet};
use crate::sampling::{Color, ColorTable, ColorVector};
use crate::seeding::{derive_seed, rng_from_seed};
use crate::value::ValueOracle;

/// How the bandit exploration probability evolves over rounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExploreSchedule {
    /// A fixed probability in (0, 1].
    Constant(f64),
    /// `min(1, (K C |E| ln|E|)^(1/3) / T^(1/3))` for the configured horizon,
    /// held constant — the rate-matching default.
    HorizonTuned,
    /// The same constant evaluated per round,
    /// `min(1, (K C |E| ln|E|)^(1/3) / t^(1/3))`, floored at its horizon
    /// value: heavy exploration early, negligible drag late.
    AnytimeDecay,
}

/// Feedback model requested in configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeedbackSpec {
    FullInfo,
    Bandit { schedule: ExploreSchedule },
}

#[derive(Debug, Clone)]
pub struct TgConfig {
    pub colors: u32,
    /// Planned number of rounds; tunes expert learning rates and the default
    /// exploration probability. Running longer is allowed.
    pub horizon: u64,
    /// Declared bound B on per-round utility values.
    pub reward_bound: f64,
    pub feedback: FeedbackSpec,
    pub seed: u64,
    /// Multiplier on the derived per-cell learning rates (calibration knob;
    /// applied uniformly, so palette sizes stay comparable).
    pub eta_scale: f64,
    /// Multiplier on the cube-root exploration coefficient for the derived
    /// schedules; the regret rate pins the schedule only up to a constant.
    pub explore_scale: f64,
    /// Replace the derived per-cell learning rates outright.
    pub eta_override: Option<f64>,
}

impl TgConfig {
    pub fn full_info(colors: u32, horizon: u64, reward_bound: f64, seed: u64) -> Self {
        TgConfig {
            colors,
            horizon,
            reward_bound,
            feedback: FeedbackSpec::FullInfo,
            seed,
            eta_scale: 1.0,
            explore_scale: 1.0,
            eta_override: None,
        }
    }

    pub fn bandit(colors: u32, horizon: u64, reward_bound: f64, seed: u64) -> Self {
        TgConfig {
            colors,
            horizon,
            reward_bound,
            feedback: FeedbackSpec::Bandit {
                schedule: ExploreSchedule::HorizonTuned,
            },
            seed,
            eta_scale: 1.0,
            explore_scale: 1.0,
            eta_override: None,
        }
    }
}

/// The cube-root exploration probability at the given round count:
/// `min(1, (K C |E| ln|E|)^(1/3) / t^(1/3))`.
pub fn default_explore_prob(gs: &GroundSet, colors: u32, rounds: u64) -> f64 {
    (explore_coefficient(gs, colors) / (rounds.max(1) as f64).cbrt()).min(1.0)
}

fn explore_coefficient(gs: &GroundSet, colors: u32) -> f64 {
    let k = gs.num_partitions() as f64;
    let e = gs.num_items() as f64;
    let log_e = e.max(2.0).ln();
    (k * colors as f64 * e * log_e).cbrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum FeedbackMode {
    FullInfo,
    Bandit {
        /// Exploration probability at round 1 (constant schedules keep it).
        constant: Option<f64>,
        /// Cube-root coefficient for decaying schedules.
        decay_coeff: f64,
        /// Smallest probability the schedule can reach; importance-weight
        /// caps and learning rates are tuned against it.
        floor: f64,
    },
}

impl FeedbackMode {
    fn explore_prob_at(&self, round: u64) -> Option<f64> {
        match *self {
            FeedbackMode::FullInfo => None,
            FeedbackMode::Bandit {
                constant: Some(g), ..
            } => Some(g),
            FeedbackMode::Bandit {
                constant: None,
                decay_coeff,
                floor,
            } => Some((decay_coeff / (round.max(1) as f64).cbrt()).min(1.0).max(floor)),
        }
    }

    fn min_explore_prob(&self) -> Option<f64> {
        match *self {
            FeedbackMode::FullInfo => None,
            FeedbackMode::Bandit {
                constant: Some(g), ..
            } => Some(g),
            FeedbackMode::Bandit { floor, .. } => Some(floor),
        }
    }
}

/// What one round selected.
#[derive(Debug, Clone)]
pub struct RoundSelection {
    /// Proposed item per cell, laid out `k * C + (c - 1)`.
    chosen: Vec<ItemId>,
    colors: u32,
    pub cvec: ColorVector,
    pub played: Assignment,
    pub explore: Option<ExploreMeta>,
    round: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExploreMeta {
    pub partition: usize,
    pub color: Color,
    pub item: ItemId,
    pub action: usize,
    /// Exploration probability in force when this round was drawn; the
    /// importance weight divides by it.
    pub explore_prob: f64,
}

impl RoundSelection {
    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn chosen_item(&self, partition: usize, color: Color) -> ItemId {
        self.chosen[partition * self.colors as usize + (color as usize - 1)]
    }

    /// All proposals as a color table.
    pub fn chosen_table(&self, gs: &GroundSet) -> Result<ColorTable> {
        let mut table = ColorTable::empty(gs, self.colors)?;
        for k in 0..gs.num_partitions() {
            for c in 1..=self.colors {
                table.insert(gs, self.chosen_item(k, c), c)?;
            }
        }
        Ok(table)
    }

    /// The table prefix preceding cell (k, c): every proposal of strictly
    /// smaller color plus same-color proposals of strictly smaller
    /// partitions.
    pub fn prefix_table(&self, gs: &GroundSet, partition: usize, color: Color) -> Result<ColorTable> {
        let mut table = ColorTable::empty(gs, self.colors)?;
        for k in 0..gs.num_partitions() {
            for c in 1..color {
                table.insert(gs, self.chosen_item(k, c), c)?;
            }
            if k < partition {
                table.insert(gs, self.chosen_item(k, color), color)?;
            }
        }
        Ok(table)
    }

    /// Sample of the (k, c) prefix under this round's color draw, optionally
    /// with one extra same-color candidate for partition k.
    fn sampled_prefix_plus(
        &self,
        gs: &GroundSet,
        partition: usize,
        color: Color,
        extra: Option<ItemId>,
    ) -> ItemSet {
        let mut out = ItemSet::empty(gs.num_items());
        for k in 0..gs.num_partitions() {
            let drawn = self.cvec.color(k);
            if drawn < color || (drawn == color && k < partition) {
                out.insert(self.chosen_item(k, drawn));
            }
        }
        if let Some(item) = extra {
            if self.cvec.color(partition) == color {
                out.insert(item);
            }
        }
        out
    }
}

/// Outcome of a bandit feedback call.
#[derive(Debug, Clone)]
pub struct BanditFeedback {
    pub explored: bool,
    pub update: Option<EstimateUpdate>,
}

/// The importance-weighted estimate handed to one expert.
#[derive(Debug, Clone, Copy)]
pub struct EstimateUpdate {
    pub partition: usize,
    pub color: Color,
    pub item: ItemId,
    pub estimate: f64,
}

/// The online learner: a K x C expert grid plus round bookkeeping.
#[derive(Debug, Clone)]
pub struct TgState<E: NoRegretExpert = HedgeExpert> {
    gs: GroundSet,
    colors: u32,
    experts: Vec<E>,
    mode: FeedbackMode,
    reward_bound: f64,
    rounds_completed: u64,
    awaiting_feedback: bool,
    rng: ChaCha8Rng,
}

impl TgState<HedgeExpert> {
    /// Build with multiplicative-weights cells at horizon-tuned learning
    /// rates. Bandit cells use estimated mode with the cap implied by the
    /// largest importance weight the schedule can produce,
    /// `K C |P_k| / min_explore_prob`.
    pub fn new(gs: &GroundSet, cfg: &TgConfig) -> Result<Self> {
        let mode = resolve_mode(gs, cfg)?;
        let k_total = gs.num_partitions();
        let colors = cfg.colors;
        TgState::with_experts(gs, cfg, |_k, _c, n| {
            let min_gamma = mode.min_explore_prob();
            let eta = cfg.eta_override.unwrap_or_else(|| {
                cfg.eta_scale
                    * match min_gamma {
                        None => HedgeExpert::eta_for_horizon(n, cfg.horizon),
                        Some(gamma) => {
                            let cap_ratio = (k_total as f64 * colors as f64 * n as f64) / gamma;
                            ((n.max(2) as f64).ln() / (cfg.horizon.max(1) as f64 * cap_ratio))
                                .sqrt()
                        }
                    }
            });
            let expert_mode = match min_gamma {
                None => ExpertMode::FullInfo,
                Some(gamma) => ExpertMode::Estimated {
                    estimate_cap: cfg.reward_bound * (k_total as f64 * colors as f64 * n as f64)
                        / gamma,
                },
            };
            HedgeExpert::new(n, eta, cfg.reward_bound, expert_mode)
        })
    }
}

fn resolve_mode(gs: &GroundSet, cfg: &TgConfig) -> Result<FeedbackMode> {
    match cfg.feedback {
        FeedbackSpec::FullInfo => Ok(FeedbackMode::FullInfo),
        FeedbackSpec::Bandit { schedule } => {
            if !(cfg.explore_scale > 0.0) {
                return Err(Error::invalid("explore_scale must be positive"));
            }
            let coeff = cfg.explore_scale * explore_coefficient(gs, cfg.colors);
            let horizon_gamma = (coeff / (cfg.horizon.max(1) as f64).cbrt()).min(1.0);
            let (constant, floor) = match schedule {
                ExploreSchedule::Constant(g) => {
                    if !(g > 0.0 && g <= 1.0) {
                        return Err(Error::invalid(format!(
                            "exploration probability {g} outside (0,1]"
                        )));
                    }
                    (Some(g), g)
                }
                ExploreSchedule::HorizonTuned => (Some(horizon_gamma), horizon_gamma),
                ExploreSchedule::AnytimeDecay => (None, horizon_gamma),
            };
            if !(floor > 0.0) {
                return Err(Error::invalid("exploration schedule reaches zero"));
            }
            Ok(FeedbackMode::Bandit {
                constant,
                decay_coeff: coeff,
                floor,
            })
        }
    }
}

impl<E: NoRegretExpert> TgState<E> {
    /// Build with caller-supplied experts; `build(k, c, n_actions)` returns
    /// the cell for partition k and color c.
    pub fn with_experts(
        gs: &GroundSet,
        cfg: &TgConfig,
        mut build: impl FnMut(usize, Color, usize) -> Result<E>,
    ) -> Result<Self> {
        if cfg.colors == 0 {
            return Err(Error::invalid("palette size must be at least 1"));
        }
        if cfg.horizon == 0 {
            return Err(Error::invalid("horizon must be at least 1"));
        }
        if !(cfg.reward_bound > 0.0) {
            return Err(Error::invalid("reward bound must be positive"));
        }
        if !(cfg.eta_scale > 0.0) {
            return Err(Error::invalid("eta_scale must be positive"));
        }
        let mode = resolve_mode(gs, cfg)?;
        let mut experts = Vec::with_capacity(gs.num_partitions() * cfg.colors as usize);
        for k in 0..gs.num_partitions() {
            for c in 1..=cfg.colors {
                let expert = build(k, c, gs.partition(k).len())?;
                if expert.num_actions() != gs.partition(k).len() {
                    return Err(Error::invalid(format!(
                        "cell ({k},{c}) expert has {} actions for {} items",
                        expert.num_actions(),
                        gs.partition(k).len()
                    )));
                }
                experts.push(expert);
            }
        }
        Ok(TgState {
            gs: gs.clone(),
            colors: cfg.colors,
            experts,
            mode,
            reward_bound: cfg.reward_bound,
            rounds_completed: 0,
            awaiting_feedback: false,
            rng: rng_from_seed(derive_seed(cfg.seed, 0x7467)),
        })
    }

    pub fn ground_set(&self) -> &GroundSet {
        &self.gs
    }

    pub fn colors(&self) -> u32 {
        self.colors
    }

    pub fn rounds_completed(&self) -> u64 {
        self.rounds_completed
    }

    /// Exploration probability that the next selection will use.
    pub fn explore_prob(&self) -> Option<f64> {
        self.mode.explore_prob_at(self.rounds_completed + 1)
    }

    pub fn expert(&self, partition: usize, color: Color) -> &E {
        &self.experts[self.cell_index(partition, color)]
    }

    fn cell_index(&self, partition: usize, color: Color) -> usize {
        partition * self.colors as usize + (color as usize - 1)
    }

    /// Run one selection: every cell proposes, colors are drawn, and (in
    /// bandit mode) the round may become an exploration round that plays a
    /// sampled prefix plus one random candidate instead.
    pub fn select_round(&mut self) -> Result<RoundSelection> {
        if self.awaiting_feedback {
            return Err(Error::usage("feedback for the previous selection is pending"));
        }
        let k_total = self.gs.num_partitions();
        let cells = k_total * self.colors as usize;
        let mut chosen = Vec::with_capacity(cells);
        for k in 0..k_total {
            for _c in 1..=self.colors {
                let action = self.experts[chosen.len()].select(&mut self.rng);
                chosen.push(self.gs.partition(k)[action]);
            }
        }
        let cvec = ColorVector::sample_uniform(k_total, self.colors, &mut self.rng);

        let explore = match self.mode.explore_prob_at(self.rounds_completed + 1) {
            Some(gamma) if self.rng.random::<f64>() < gamma => {
                let cell = self.rng.random_range(0..cells);
                let partition = cell / self.colors as usize;
                let color = (cell % self.colors as usize) as Color + 1;
                let action = self.rng.random_range(0..self.gs.partition(partition).len());
                Some(ExploreMeta {
                    partition,
                    color,
                    item: self.gs.partition(partition)[action],
                    action,
                    explore_prob: gamma,
                })
            }
            _ => None,
        };

        let mut sel = RoundSelection {
            chosen,
            colors: self.colors,
            cvec,
            played: Assignment::empty(&self.gs),
            explore,
            round: self.rounds_completed + 1,
        };
        let played_set = match &sel.explore {
            None => {
                let mut set = ItemSet::empty(self.gs.num_items());
                for k in 0..k_total {
                    set.insert(sel.chosen_item(k, sel.cvec.color(k)));
                }
                set
            }
            Some(meta) => {
                sel.sampled_prefix_plus(&self.gs, meta.partition, meta.color, Some(meta.item))
            }
        };
        sel.played = Assignment::from_set(&self.gs, played_set)?;
        self.awaiting_feedback = true;
        Ok(sel)
    }

    /// Reward vectors each cell would receive for this selection under
    /// full-information feedback: candidate utilities on top of the cell's
    /// sampled prefix, using the round's realized color draw.
    pub(crate) fn full_info_rewards<F: ValueOracle + ?Sized>(
        &self,
        sel: &RoundSelection,
        f: &F,
    ) -> Vec<Vec<f64>> {
        let mut all = Vec::with_capacity(self.experts.len());
        for k in 0..self.gs.num_partitions() {
            for c in 1..=self.colors {
                let base = sel.sampled_prefix_plus(&self.gs, k, c, None);
                let rewards = if sel.cvec.color(k) == c {
                    self.gs
                        .partition(k)
                        .iter()
                        .map(|&x| self.clamp_reward(f.eval_set(&base.with(x))))
                        .collect()
                } else {
                    // The candidate's color is not the partition's draw, so
                    // every candidate yields the same sampled set.
                    vec![self.clamp_reward(f.eval_set(&base)); self.gs.partition(k).len()]
                };
                all.push(rewards);
            }
        }
        all
    }

    /// Full-information feedback: evaluate the round's utility on every
    /// cell's candidates and update all experts.
    pub fn feedback_full<F: ValueOracle + ?Sized>(
        &mut self,
        sel: &RoundSelection,
        f: &F,
    ) -> Result<()> {
        if self.mode != FeedbackMode::FullInfo {
            return Err(Error::usage("state is in bandit mode; use feedback_bandit"));
        }
        self.check_pending(sel)?;
        let rewards = self.full_info_rewards(sel, f);
        for (expert, cell_rewards) in self.experts.iter_mut().zip(&rewards) {
            expert.update_full(cell_rewards)?;
        }
        self.finish_round();
        Ok(())
    }

    /// Bandit feedback: the realized utility of the played set. Exploitation
    /// rounds update nothing; exploration rounds feed the explored cell an
    /// importance-weighted estimate for the explored candidate.
    pub fn feedback_bandit(&mut self, sel: &RoundSelection, observed: f64) -> Result<BanditFeedback> {
        if self.mode == FeedbackMode::FullInfo {
            return Err(Error::usage("state is in full-info mode; use feedback_full"));
        }
        self.check_pending(sel)?;
        if !observed.is_finite() {
            return Err(Error::invalid(format!("observed reward {observed} not finite")));
        }
        let outcome = match &sel.explore {
            None => BanditFeedback {
                explored: false,
                update: None,
            },
            Some(meta) => {
                let observed = self.clamp_reward(observed);
                let n = self.gs.partition(meta.partition).len();
                let weight = (self.gs.num_partitions() * self.colors as usize * n) as f64
                    / meta.explore_prob;
                let estimate = observed * weight;
                let idx = self.cell_index(meta.partition, meta.color);
                self.experts[idx].update_estimate(meta.action, estimate)?;
                BanditFeedback {
                    explored: true,
                    update: Some(EstimateUpdate {
                        partition: meta.partition,
                        color: meta.color,
                        item: meta.item,
                        estimate,
                    }),
                }
            }
        };
        self.finish_round();
        Ok(outcome)
    }

    fn check_pending(&self, sel: &RoundSelection) -> Result<()> {
        if !self.awaiting_feedback || sel.round != self.rounds_completed + 1 {
            return Err(Error::usage(
                "feedback must follow the selection it belongs to, exactly once",
            ));
        }
        Ok(())
    }

    fn finish_round(&mut self) {
        self.awaiting_feedback = false;
        self.rounds_completed += 1;
    }

    fn clamp_reward(&self, value: f64) -> f64 {
        if value < 0.0 {
            log::warn!("reward {value} below 0; clamping (declared bound {})", self.reward_bound);
            0.0
        } else if value > self.reward_bound {
            if value > self.reward_bound + 1e-12 {
                log::warn!(
                    "reward {value} above declared bound {}; clamping",
                    self.reward_bound
                );
            }
            self.reward_bound
        } else {
            value
        }
    }
}
