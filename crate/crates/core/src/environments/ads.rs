//! Markovian ad-click model.
//!
//! A user drawn from a type mixture scans positions in increasing order. At a
//! filled position they click the shown ad with its click probability and
//! leave; otherwise they abandon the page with the position's abandonment
//! probability, or move on. Empty positions only test abandonment: nothing to
//! click. The reward of a round is the click count, zero or one.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ground::{Assignment, GroundSet, ItemId, ItemSet};
use crate::value::ValueOracle;

/// One user population: mixture weight, per-ad click probabilities, and
/// per-position abandonment probabilities.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UserType {
    pub weight: f64,
    pub click_probs: Vec<f64>,
    pub abandon_probs: Vec<f64>,
}

/// The ad slate environment: a type mixture over `num_ads` ads shown in
/// `num_positions` slots. The ground set holds one copy of every ad per
/// position, so an assignment is a slate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdModel {
    pub num_ads: usize,
    pub num_positions: usize,
    pub user_types: Vec<UserType>,
}

impl AdModel {
    pub fn new(num_ads: usize, num_positions: usize, user_types: Vec<UserType>) -> Result<Self> {
        if num_ads == 0 || num_positions == 0 {
            return Err(Error::invalid("ad model needs ads and positions"));
        }
        if user_types.is_empty() {
            return Err(Error::invalid("ad model needs at least one user type"));
        }
        let total_weight: f64 = user_types.iter().map(|t| t.weight).sum();
        if (total_weight - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "user type weights sum to {total_weight}, expected 1"
            )));
        }
        for (i, t) in user_types.iter().enumerate() {
            if t.weight < 0.0 {
                return Err(Error::invalid(format!("user type {i} has negative weight")));
            }
            if t.click_probs.len() != num_ads {
                return Err(Error::invalid(format!(
                    "user type {i}: {} click probabilities for {num_ads} ads",
                    t.click_probs.len()
                )));
            }
            if t.abandon_probs.len() != num_positions {
                return Err(Error::invalid(format!(
                    "user type {i}: {} abandonment probabilities for {num_positions} positions",
                    t.abandon_probs.len()
                )));
            }
            for p in t.click_probs.iter().chain(t.abandon_probs.iter()) {
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::invalid(format!(
                        "user type {i} has probability {p} outside [0,1]"
                    )));
                }
            }
        }
        Ok(AdModel {
            num_ads,
            num_positions,
            user_types,
        })
    }

    /// User types with uniform-random click probabilities, one type per
    /// abandonment level. Each type draws its own per-ad click map from
    /// [0,1] (drawn once, then fixed), so types disagree about which ads are
    /// interesting and diverse slates pay off. See
    /// [`AdModel::with_shared_random_clicks`] for the common-interest
    /// variant.
    pub fn with_random_clicks<R: Rng + ?Sized>(
        num_ads: usize,
        num_positions: usize,
        abandon_probs_per_type: &[f64],
        type_weights: &[f64],
        rng: &mut R,
    ) -> Result<Self> {
        if abandon_probs_per_type.len() != type_weights.len() {
            return Err(Error::invalid("one weight per abandonment level"));
        }
        let user_types = abandon_probs_per_type
            .iter()
            .zip(type_weights)
            .map(|(&abandon, &weight)| UserType {
                weight,
                click_probs: (0..num_ads).map(|_| rng.random::<f64>()).collect(),
                abandon_probs: vec![abandon; num_positions],
            })
            .collect();
        AdModel::new(num_ads, num_positions, user_types)
    }

    /// Like [`AdModel::with_random_clicks`] but all types share one click
    /// map and differ only in attention span.
    pub fn with_shared_random_clicks<R: Rng + ?Sized>(
        num_ads: usize,
        num_positions: usize,
        abandon_probs_per_type: &[f64],
        type_weights: &[f64],
        rng: &mut R,
    ) -> Result<Self> {
        if abandon_probs_per_type.len() != type_weights.len() {
            return Err(Error::invalid("one weight per abandonment level"));
        }
        let click_probs: Vec<f64> = (0..num_ads).map(|_| rng.random::<f64>()).collect();
        let user_types = abandon_probs_per_type
            .iter()
            .zip(type_weights)
            .map(|(&abandon, &weight)| UserType {
                weight,
                click_probs: click_probs.clone(),
                abandon_probs: vec![abandon; num_positions],
            })
            .collect();
        AdModel::new(num_ads, num_positions, user_types)
    }

    /// The tight half-approximation instance: two ads, two slots, two users.
    /// One user searches with probability `1/2 - eps`, wants ad 0, and never
    /// looks past the first position; the other searches with probability
    /// `1/2 + eps`, wants ad 1, and scans everything.
    pub fn short_attention_example(eps: f64) -> Result<Self> {
        AdModel::new(
            2,
            2,
            vec![
                UserType {
                    weight: 0.5 - eps,
                    click_probs: vec![1.0, 0.0],
                    abandon_probs: vec![1.0, 1.0],
                },
                UserType {
                    weight: 0.5 + eps,
                    click_probs: vec![0.0, 1.0],
                    abandon_probs: vec![0.0, 0.0],
                },
            ],
        )
    }

    /// Ground set with one copy of each ad per position (position-major ids).
    pub fn ground_set(&self) -> GroundSet {
        GroundSet::from_sizes(&vec![self.num_ads; self.num_positions])
            .expect("sizes validated at construction")
    }

    pub fn ad_of(&self, item: ItemId) -> usize {
        item % self.num_ads
    }

    pub fn position_of(&self, item: ItemId) -> usize {
        item / self.num_ads
    }

    pub fn item_for(&self, position: usize, ad: usize) -> ItemId {
        position * self.num_ads + ad
    }

    /// Slate view of an item set; if a slot somehow holds several copies the
    /// lowest ad index is the one displayed.
    fn slate(&self, items: &ItemSet) -> Vec<Option<usize>> {
        let mut slots = vec![None; self.num_positions];
        for item in items.iter() {
            let k = self.position_of(item);
            if slots[k].is_none() {
                slots[k] = Some(self.ad_of(item));
            }
        }
        slots
    }

    /// Exact expected clicks of a slate under the type mixture.
    pub fn expected_clicks(&self, items: &ItemSet) -> f64 {
        let slate = self.slate(items);
        let mut total = 0.0;
        for t in &self.user_types {
            let mut survive = 1.0;
            let mut clicks = 0.0;
            for (k, slot) in slate.iter().enumerate() {
                let p_click = slot.map_or(0.0, |ad| t.click_probs[ad]);
                clicks += survive * p_click;
                survive *= (1.0 - p_click) * (1.0 - t.abandon_probs[k]);
            }
            total += t.weight * clicks;
        }
        total
    }

    /// Simulate one user scan; returns 1 on a click, 0 otherwise.
    pub fn simulate_round<R: Rng + ?Sized>(&self, a: &Assignment, rng: &mut R) -> u32 {
        let slate = self.slate(a.set());
        let mut pick = rng.random::<f64>();
        let mut user = &self.user_types[self.user_types.len() - 1];
        for t in &self.user_types {
            if pick < t.weight {
                user = t;
                break;
            }
            pick -= t.weight;
        }
        for (k, slot) in slate.iter().enumerate() {
            if let Some(ad) = slot {
                if rng.random::<f64>() < user.click_probs[*ad] {
                    return 1;
                }
            }
            if rng.random::<f64>() < user.abandon_probs[k] {
                return 0;
            }
        }
        0
    }
}

impl ValueOracle for AdModel {
    fn eval_set(&self, items: &ItemSet) -> f64 {
        self.expected_clicks(items)
    }

    fn upper_bound(&self) -> f64 {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeding::rng_from_seed;

    fn single_type_model(click: Vec<f64>, abandon: f64, positions: usize) -> AdModel {
        let n = click.len();
        AdModel::new(
            n,
            positions,
            vec![UserType {
                weight: 1.0,
                click_probs: click,
                abandon_probs: vec![abandon; positions],
            }],
        )
        .unwrap()
    }

    #[test]
    fn empty_assignment_never_clicks() {
        let model = single_type_model(vec![0.9, 0.9], 0.3, 2);
        let gs = model.ground_set();
        let a = Assignment::empty(&gs);
        assert_eq!(model.expected_clicks(a.set()), 0.0);
        let mut rng = rng_from_seed(1);
        for _ in 0..200 {
            assert_eq!(model.simulate_round(&a, &mut rng), 0);
        }
    }

    #[test]
    fn two_half_ads_no_abandon_click_rate_three_quarters() {
        let model = single_type_model(vec![0.5, 0.5], 0.0, 2);
        let gs = model.ground_set();
        let a = Assignment::from_items(&gs, [model.item_for(0, 0), model.item_for(1, 1)]).unwrap();
        // 1 - 0.5^2
        assert!((model.expected_clicks(a.set()) - 0.75).abs() < 1e-12);

        let mut rng = rng_from_seed(2);
        let n = 100_000;
        let clicks: u32 = (0..n).map(|_| model.simulate_round(&a, &mut rng)).sum();
        let rate = clicks as f64 / n as f64;
        let sigma = (0.75f64 * 0.25 / n as f64).sqrt();
        assert!((rate - 0.75).abs() < 3.0 * sigma, "rate {rate}");
    }

    #[test]
    fn two_half_ads_half_abandon_click_rate() {
        let model = single_type_model(vec![0.5, 0.5], 0.5, 2);
        let gs = model.ground_set();
        let a = Assignment::from_items(&gs, [model.item_for(0, 0), model.item_for(1, 1)]).unwrap();
        // 0.5 + 0.5*0.5*0.5
        assert!((model.expected_clicks(a.set()) - 0.625).abs() < 1e-12);

        let mut rng = rng_from_seed(3);
        let n = 100_000;
        let clicks: u32 = (0..n).map(|_| model.simulate_round(&a, &mut rng)).sum();
        let rate = clicks as f64 / n as f64;
        let sigma = (0.625f64 * 0.375 / n as f64).sqrt();
        assert!((rate - 0.625).abs() < 3.0 * sigma, "rate {rate}");
    }

    #[test]
    fn short_attention_example_values() {
        let model = AdModel::short_attention_example(0.1).unwrap();
        let gs = model.ground_set();
        // Ad 1 alone in slot 0: only the patient user clicks.
        let greedy_like =
            Assignment::from_items(&gs, [model.item_for(0, 1)]).unwrap();
        assert!((model.eval(&greedy_like) - 0.6).abs() < 1e-12);
        // Ad 0 at slot 0, ad 1 at slot 1: both users click.
        let best = Assignment::from_items(&gs, [model.item_for(0, 0), model.item_for(1, 1)])
            .unwrap();
        assert!((model.eval(&best) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn total_abandonment_sees_only_first_slot() {
        let model = single_type_model(vec![0.3, 0.8], 1.0, 3);
        let gs = model.ground_set();
        let a = Assignment::from_items(
            &gs,
            [model.item_for(0, 1), model.item_for(1, 0), model.item_for(2, 0)],
        )
        .unwrap();
        assert!((model.expected_clicks(a.set()) - 0.8).abs() < 1e-12);
    }

    #[test]
    fn simulation_mean_matches_expectation() {
        let mut rng = rng_from_seed(11);
        let model =
            AdModel::with_random_clicks(4, 3, &[0.0, 0.5], &[0.5, 0.5], &mut rng).unwrap();
        let gs = model.ground_set();
        let a = Assignment::from_items(
            &gs,
            [model.item_for(0, 2), model.item_for(1, 0), model.item_for(2, 3)],
        )
        .unwrap();
        let expect = model.expected_clicks(a.set());
        let n = 100_000;
        let clicks: u32 = (0..n).map(|_| model.simulate_round(&a, &mut rng)).sum();
        let rate = clicks as f64 / n as f64;
        let sigma = (expect * (1.0 - expect) / n as f64).sqrt();
        assert!((rate - expect).abs() < 4.0 * sigma, "rate {rate} expect {expect}");
    }

    #[test]
    fn expected_clicks_bounded_and_monotone_on_empty_slots() {
        let mut rng = rng_from_seed(17);
        for _ in 0..10_000 {
            let model =
                AdModel::with_random_clicks(3, 3, &[0.0, 0.5], &[0.5, 0.5], &mut rng).unwrap();
            let gs = model.ground_set();
            // Random partial slate leaving slot 1 empty.
            let a = Assignment::from_items(
                &gs,
                [model.item_for(0, rng.random_range(0..3))],
            )
            .unwrap();
            let base = model.expected_clicks(a.set());
            assert!((0.0..=1.0).contains(&base));
            let extended = {
                let mut items: Vec<_> = a.items().collect();
                items.push(model.item_for(1, rng.random_range(0..3)));
                Assignment::from_items(&gs, items).unwrap()
            };
            let more = model.expected_clicks(extended.set());
            assert!((0.0..=1.0).contains(&more));
            assert!(
                more >= base - 1e-12,
                "adding an ad to an empty slot decreased value: {base} -> {more}"
            );
        }
    }

    #[test]
    fn rejects_bad_mixtures() {
        assert!(AdModel::new(
            1,
            1,
            vec![UserType { weight: 0.5, click_probs: vec![0.5], abandon_probs: vec![0.0] }],
        )
        .is_err());
        assert!(AdModel::new(
            1,
            1,
            vec![UserType { weight: 1.0, click_probs: vec![1.5], abandon_probs: vec![0.0] }],
        )
        .is_err());
    }
}
