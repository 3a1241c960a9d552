//! No-regret expert subroutines.
//!
//! [`HedgeExpert`] is multiplicative weights over a fixed action set, kept in
//! log space so long runs never overflow. Full-information mode consumes a
//! reward per action each round; estimated mode consumes an
//! importance-weighted estimate for one action (everything else implicitly
//! zero), the feedback shape bandit exploration produces.
//! [`DoublingHedge`] wraps it with the doubling trick when no horizon is
//! known in advance.

use rand::RngCore;

use crate::error::{Error, Result};
use crate::value::VALUE_TOLERANCE;

/// The interface a per-cell learning subroutine must satisfy. Alternative
/// algorithms (e.g. experts with per-round importance weights) can slot into
/// the online meta-algorithm by implementing this.
pub trait NoRegretExpert {
    fn num_actions(&self) -> usize;
    /// Draw an action from the current selection distribution.
    fn select(&self, rng: &mut dyn RngCore) -> usize;
    /// Current selection distribution.
    fn probabilities(&self) -> Vec<f64>;
    /// Full-information update: one reward per action.
    fn update_full(&mut self, rewards: &[f64]) -> Result<()>;
    /// Estimated update: a single action's importance-weighted reward
    /// estimate; all other actions implicitly receive zero.
    fn update_estimate(&mut self, action: usize, estimate: f64) -> Result<()>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExpertMode {
    FullInfo,
    /// Estimated feedback. `estimate_cap` bounds any single estimate (the
    /// reward bound times the largest admissible importance weight); updates
    /// above it signal a miscomputed weight and are rejected.
    Estimated { estimate_cap: f64 },
}

/// Multiplicative-weights expert.
#[derive(Debug, Clone)]
pub struct HedgeExpert {
    eta: f64,
    reward_bound: f64,
    mode: ExpertMode,
    log_weights: Vec<f64>,
    cumulative_reward: Vec<f64>,
    expected_cumulative: f64,
    rounds: u64,
}

impl HedgeExpert {
    pub fn new(n: usize, eta: f64, reward_bound: f64, mode: ExpertMode) -> Result<Self> {
        Self::with_log_weights(vec![0.0; n], eta, reward_bound, mode)
    }

    /// Start from explicit prior log-weights (warm starts, frozen tests).
    pub fn with_log_weights(
        log_weights: Vec<f64>,
        eta: f64,
        reward_bound: f64,
        mode: ExpertMode,
    ) -> Result<Self> {
        if log_weights.is_empty() {
            return Err(Error::invalid("expert needs at least one action"));
        }
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(Error::invalid(format!("learning rate {eta} must be positive")));
        }
        if !(reward_bound > 0.0) || !reward_bound.is_finite() {
            return Err(Error::invalid(format!(
                "reward bound {reward_bound} must be positive"
            )));
        }
        if let ExpertMode::Estimated { estimate_cap } = mode {
            if !(estimate_cap > 0.0) {
                return Err(Error::invalid("estimate cap must be positive"));
            }
        }
        let n = log_weights.len();
        Ok(HedgeExpert {
            eta,
            reward_bound,
            mode,
            log_weights,
            cumulative_reward: vec![0.0; n],
            expected_cumulative: 0.0,
            rounds: 0,
        })
    }

    /// The horizon-tuned learning rate `sqrt(8 ln(n) / T)`.
    pub fn eta_for_horizon(n: usize, horizon: u64) -> f64 {
        ((8.0 * (n as f64).ln()) / horizon as f64).sqrt().max(f64::MIN_POSITIVE)
    }

    /// Guaranteed full-information regret at the horizon-tuned rate:
    /// `B * sqrt(T ln(n) / 2)`.
    pub fn regret_bound(n: usize, horizon: u64, reward_bound: f64) -> f64 {
        reward_bound * (horizon as f64 * (n as f64).ln() / 2.0).sqrt()
    }

    pub fn mode(&self) -> ExpertMode {
        self.mode
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    /// Per-action cumulative reward (full mode) or cumulative estimates
    /// (estimated mode).
    pub fn cumulative_rewards(&self) -> &[f64] {
        &self.cumulative_reward
    }

    /// Cumulative expected reward of the selection distribution at update
    /// time.
    pub fn expected_cumulative(&self) -> f64 {
        self.expected_cumulative
    }

    /// Best fixed action's cumulative reward minus the expert's expected
    /// cumulative reward.
    pub fn empirical_regret(&self) -> f64 {
        let best = self.cumulative_reward.iter().copied().fold(f64::MIN, f64::max);
        best - self.expected_cumulative
    }
}

impl NoRegretExpert for HedgeExpert {
    fn num_actions(&self) -> usize {
        self.log_weights.len()
    }

    fn select(&self, rng: &mut dyn RngCore) -> usize {
        let probs = self.probabilities();
        // 53-bit uniform in [0,1).
        let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        let mut acc = 0.0;
        for (i, p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        probs.len() - 1
    }

    fn probabilities(&self) -> Vec<f64> {
        // Softmax with max subtraction; shifting all log-weights by a common
        // constant leaves the output bit-identical.
        let max = self.log_weights.iter().copied().fold(f64::MIN, f64::max);
        let mut probs: Vec<f64> = self.log_weights.iter().map(|lw| (lw - max).exp()).collect();
        let total: f64 = probs.iter().sum();
        for p in &mut probs {
            *p /= total;
        }
        probs
    }

    fn update_full(&mut self, rewards: &[f64]) -> Result<()> {
        if let ExpertMode::Estimated { .. } = self.mode {
            return Err(Error::usage("expert is in estimated mode; use update_estimate"));
        }
        if rewards.len() != self.num_actions() {
            return Err(Error::invalid(format!(
                "{} rewards for {} actions",
                rewards.len(),
                self.num_actions()
            )));
        }
        for &r in rewards {
            if !r.is_finite() || r < -VALUE_TOLERANCE || r > self.reward_bound + VALUE_TOLERANCE {
                return Err(Error::invalid(format!(
                    "reward {r} outside [0, {}]; reward bound misconfigured?",
                    self.reward_bound
                )));
            }
        }
        let probs = self.probabilities();
        for (i, &r) in rewards.iter().enumerate() {
            self.log_weights[i] += self.eta * r / self.reward_bound;
            self.cumulative_reward[i] += r;
            self.expected_cumulative += probs[i] * r;
        }
        self.rounds += 1;
        Ok(())
    }

    fn update_estimate(&mut self, action: usize, estimate: f64) -> Result<()> {
        let cap = match self.mode {
            ExpertMode::Estimated { estimate_cap } => estimate_cap,
            ExpertMode::FullInfo => {
                return Err(Error::usage("expert is in full-info mode; use update_full"));
            }
        };
        if action >= self.num_actions() {
            return Err(Error::invalid(format!("action {action} out of range")));
        }
        if !estimate.is_finite() || estimate < -VALUE_TOLERANCE {
            return Err(Error::invalid(format!("estimate {estimate} must be nonnegative")));
        }
        if estimate > cap + VALUE_TOLERANCE {
            return Err(Error::invalid(format!(
                "estimate {estimate} above cap {cap}; importance weight miscomputed?"
            )));
        }
        let probs = self.probabilities();
        self.log_weights[action] += self.eta * estimate / self.reward_bound;
        self.cumulative_reward[action] += estimate;
        self.expected_cumulative += probs[action] * estimate;
        self.rounds += 1;
        Ok(())
    }
}

/// Horizon-free wrapper: restart the inner expert with a re-tuned learning
/// rate whenever the round count crosses the next power of two.
#[derive(Debug, Clone)]
pub struct DoublingHedge {
    inner: HedgeExpert,
    reward_bound: f64,
    epoch: u32,
    rounds_in_epoch: u64,
    cumulative_reward: Vec<f64>,
    expected_cumulative: f64,
}

impl DoublingHedge {
    pub fn new(n: usize, reward_bound: f64) -> Result<Self> {
        let inner = HedgeExpert::new(
            n,
            HedgeExpert::eta_for_horizon(n, 1),
            reward_bound,
            ExpertMode::FullInfo,
        )?;
        Ok(DoublingHedge {
            inner,
            reward_bound,
            epoch: 0,
            rounds_in_epoch: 0,
            cumulative_reward: vec![0.0; n],
            expected_cumulative: 0.0,
        })
    }

    pub fn empirical_regret(&self) -> f64 {
        let best = self.cumulative_reward.iter().copied().fold(f64::MIN, f64::max);
        best - self.expected_cumulative
    }

    fn maybe_advance_epoch(&mut self) -> Result<()> {
        let epoch_len = 1u64 << self.epoch;
        if self.rounds_in_epoch >= epoch_len {
            self.epoch += 1;
            self.rounds_in_epoch = 0;
            self.inner = HedgeExpert::new(
                self.inner.num_actions(),
                HedgeExpert::eta_for_horizon(self.inner.num_actions(), 1u64 << self.epoch),
                self.reward_bound,
                ExpertMode::FullInfo,
            )?;
        }
        Ok(())
    }
}

impl NoRegretExpert for DoublingHedge {
    fn num_actions(&self) -> usize {
        self.inner.num_actions()
    }

    fn select(&self, rng: &mut dyn RngCore) -> usize {
        self.inner.select(rng)
    }

    fn probabilities(&self) -> Vec<f64> {
        self.inner.probabilities()
    }

    fn update_full(&mut self, rewards: &[f64]) -> Result<()> {
        let probs = self.inner.probabilities();
        self.inner.update_full(rewards)?;
        for (i, &r) in rewards.iter().enumerate() {
            self.cumulative_reward[i] += r;
            self.expected_cumulative += probs[i] * r;
        }
        self.rounds_in_epoch += 1;
        self.maybe_advance_epoch()
    }

    fn update_estimate(&mut self, _action: usize, _estimate: f64) -> Result<()> {
        Err(Error::usage("DoublingHedge only supports full-information updates"))
    }
}
