//! Separable click-through-rate baseline: the value of a slate is the sum of
//! `bid(ad) * alpha(ad) * beta(position)` over its (ad, position) pairs — a
//! modular, hence submodular, oracle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ground::{GroundSet, ItemId, ItemSet};
use crate::value::ValueOracle;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeparableCtr {
    /// Per-ad click factor alpha.
    pub click_rates: Vec<f64>,
    /// Per-position factor beta.
    pub position_factors: Vec<f64>,
    /// Per-ad monetary value.
    pub bids: Vec<f64>,
}

impl SeparableCtr {
    pub fn new(click_rates: Vec<f64>, position_factors: Vec<f64>, bids: Vec<f64>) -> Result<Self> {
        if click_rates.is_empty() || position_factors.is_empty() {
            return Err(Error::invalid("separable model needs ads and positions"));
        }
        if bids.len() != click_rates.len() {
            return Err(Error::invalid("one bid per ad"));
        }
        if click_rates.iter().chain(position_factors.iter()).any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::invalid("rates and position factors must lie in [0,1]"));
        }
        if bids.iter().any(|&b| b < 0.0) {
            return Err(Error::invalid("bids must be nonnegative"));
        }
        Ok(SeparableCtr {
            click_rates,
            position_factors,
            bids,
        })
    }

    pub fn num_ads(&self) -> usize {
        self.click_rates.len()
    }

    pub fn num_positions(&self) -> usize {
        self.position_factors.len()
    }

    pub fn ground_set(&self) -> GroundSet {
        GroundSet::from_sizes(&vec![self.num_ads(); self.num_positions()])
            .expect("sizes validated at construction")
    }

    pub fn ad_of(&self, item: ItemId) -> usize {
        item % self.num_ads()
    }

    pub fn position_of(&self, item: ItemId) -> usize {
        item / self.num_ads()
    }

    pub fn item_for(&self, position: usize, ad: usize) -> ItemId {
        position * self.num_ads() + ad
    }
}

impl ValueOracle for SeparableCtr {
    fn eval_set(&self, items: &ItemSet) -> f64 {
        items
            .iter()
            .map(|item| {
                let ad = self.ad_of(item);
                self.bids[ad] * self.click_rates[ad] * self.position_factors[self.position_of(item)]
            })
            .sum()
    }

    fn upper_bound(&self) -> f64 {
        // One ad per position; each slot at most the best bid*alpha there.
        let best_ad = self
            .bids
            .iter()
            .zip(&self.click_rates)
            .map(|(b, a)| b * a)
            .fold(0.0f64, f64::max);
        self.position_factors.iter().map(|beta| best_ad * beta).sum()
    }
}
