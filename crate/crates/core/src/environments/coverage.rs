//! Coverage objectives.
//!
//! [`WeightedCoverage`] is the plain family: each item covers a fixed element
//! set and the value of a set of items is the total weight covered.
//! [`CoverageInstance`] is the position-discounted ranking variant: blogs are
//! copied across K positions and the marginal coverage achieved at position k
//! is discounted by `gamma^k`, so earlier positions are worth more.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ground::{GroundSet, ItemId, ItemSet};
use crate::seeding::rng_from_seed;
use crate::value::ValueOracle;

/// Plain weighted coverage over an arbitrary ground set: item `i` covers
/// `covers[i]`, element `e` is worth `weights[e]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightedCoverage {
    pub weights: Vec<f64>,
    pub covers: Vec<Vec<u32>>,
}

impl WeightedCoverage {
    pub fn new(weights: Vec<f64>, covers: Vec<Vec<u32>>) -> Result<Self> {
        if weights.iter().any(|&w| w < 0.0) {
            return Err(Error::invalid("element weights must be nonnegative"));
        }
        for (i, cov) in covers.iter().enumerate() {
            if cov.iter().any(|&e| e as usize >= weights.len()) {
                return Err(Error::invalid(format!("item {i} covers a missing element")));
            }
        }
        Ok(WeightedCoverage { weights, covers })
    }

    /// Random instance: each item covers each element independently with
    /// probability `density`; weights drawn from `dist`.
    pub fn random<R: Rng + ?Sized>(
        num_items: usize,
        num_elements: usize,
        density: f64,
        dist: &WeightDist,
        rng: &mut R,
    ) -> Self {
        let weights = (0..num_elements).map(|_| dist.sample(rng)).collect();
        let covers = (0..num_items)
            .map(|_| {
                (0..num_elements as u32)
                    .filter(|_| rng.random::<f64>() < density)
                    .collect()
            })
            .collect();
        WeightedCoverage { weights, covers }
    }
}

impl ValueOracle for WeightedCoverage {
    fn eval_set(&self, items: &ItemSet) -> f64 {
        let mut hit = vec![false; self.weights.len()];
        let mut total = 0.0;
        for item in items.iter() {
            for &e in &self.covers[item] {
                if !hit[e as usize] {
                    hit[e as usize] = true;
                    total += self.weights[e as usize];
                }
            }
        }
        total
    }

    fn upper_bound(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Element-weight distribution for generated instances.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightDist {
    Constant { value: f64 },
    Uniform { low: f64, high: f64 },
}

impl WeightDist {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            WeightDist::Constant { value } => value,
            WeightDist::Uniform { low, high } => rng.random_range(low..high),
        }
    }
}

/// Position-discounted coverage over blog copies.
///
/// The ground set has one copy of each blog per position (position-major
/// ids). For an item set S, let `S[k]` be the blogs placed at positions up to
/// k; the value is the telescoped sum of `gamma^k` times the coverage gained
/// at position k. Blogs cover elements with probabilities, so coverage of a
/// blog set B is `sum_e w_e * (1 - prod_{b in B} (1 - p_{b,e}))`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverageInstance {
    pub num_blogs: usize,
    pub num_positions: usize,
    pub gamma: f64,
    /// Element weights.
    pub weights: Vec<f64>,
    /// Per blog: (element, incidence probability) pairs.
    pub covers: Vec<Vec<(u32, f64)>>,
}

impl CoverageInstance {
    pub fn new(
        num_blogs: usize,
        num_positions: usize,
        gamma: f64,
        weights: Vec<f64>,
        covers: Vec<Vec<(u32, f64)>>,
    ) -> Result<Self> {
        if num_blogs == 0 || num_positions == 0 {
            return Err(Error::invalid("coverage instance needs blogs and positions"));
        }
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::invalid(format!("discount {gamma} outside (0,1)")));
        }
        if covers.len() != num_blogs {
            return Err(Error::invalid("one cover list per blog"));
        }
        if weights.iter().any(|&w| w < 0.0) {
            return Err(Error::invalid("element weights must be nonnegative"));
        }
        for cov in &covers {
            for &(e, p) in cov {
                if e as usize >= weights.len() || !(0.0..=1.0).contains(&p) {
                    return Err(Error::invalid("bad incidence entry"));
                }
            }
        }
        Ok(CoverageInstance {
            num_blogs,
            num_positions,
            gamma,
            weights,
            covers,
        })
    }

    /// Synthetic instance: Bernoulli(density) bipartite incidence with
    /// deterministic edges (p = 1), weights from `dist`. Deterministic given
    /// the seed.
    pub fn generate(
        num_blogs: usize,
        num_elements: usize,
        density: f64,
        dist: &WeightDist,
        gamma: f64,
        num_positions: usize,
        seed: u64,
    ) -> Result<Self> {
        if !(density >= 0.0 && density <= 1.0) {
            return Err(Error::invalid(format!("density {density} outside [0,1]")));
        }
        let mut rng = rng_from_seed(seed);
        let weights: Vec<f64> = (0..num_elements).map(|_| dist.sample(&mut rng)).collect();
        let covers = (0..num_blogs)
            .map(|_| {
                (0..num_elements as u32)
                    .filter(|_| rng.random::<f64>() < density)
                    .map(|e| (e, 1.0))
                    .collect()
            })
            .collect();
        CoverageInstance::new(num_blogs, num_positions, gamma, weights, covers)
    }

    /// Ground set of blog copies: partition k holds blog copies for position
    /// k, position-major ids.
    pub fn ground_set(&self) -> GroundSet {
        GroundSet::from_sizes(&vec![self.num_blogs; self.num_positions])
            .expect("sizes validated at construction")
    }

    pub fn blog_of(&self, item: ItemId) -> usize {
        item % self.num_blogs
    }

    pub fn position_of(&self, item: ItemId) -> usize {
        item / self.num_blogs
    }

    pub fn item_for(&self, position: usize, blog: usize) -> ItemId {
        position * self.num_blogs + blog
    }

    /// Discounted value: walk positions in order, add `gamma^k` times the
    /// coverage gained by the blogs placed at position k.
    pub fn discounted_value(&self, items: &ItemSet) -> f64 {
        // survival[e] = probability element e is still uncovered.
        let mut survival = vec![1.0f64; self.weights.len()];
        let mut per_position: Vec<Vec<usize>> = vec![Vec::new(); self.num_positions];
        for item in items.iter() {
            per_position[self.position_of(item)].push(self.blog_of(item));
        }
        let mut total = 0.0;
        let mut discount = 1.0;
        for blogs in &per_position {
            discount *= self.gamma;
            let mut gained = 0.0;
            for &b in blogs {
                for &(e, p) in &self.covers[b] {
                    let e = e as usize;
                    gained += self.weights[e] * survival[e] * p;
                    survival[e] *= 1.0 - p;
                }
            }
            total += discount * gained;
        }
        total
    }
}

impl ValueOracle for CoverageInstance {
    fn eval_set(&self, items: &ItemSet) -> f64 {
        self.discounted_value(items)
    }

    fn upper_bound(&self) -> f64 {
        // All coverage gained at the first position at best.
        self.gamma * self.weights.iter().sum::<f64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::{check_monotone_submodular, CheckConfig};
    use crate::ground::Assignment;

    fn unit_instance() -> CoverageInstance {
        // Blog 0 covers element 0, blog 1 covers element 1; unit weights.
        CoverageInstance::new(
            2,
            2,
            0.8,
            vec![1.0, 1.0],
            vec![vec![(0, 1.0)], vec![(1, 1.0)]],
        )
        .unwrap()
    }

    #[test]
    fn empty_set_is_zero() {
        let inst = unit_instance();
        assert_eq!(inst.discounted_value(&ItemSet::empty(4)), 0.0);
    }

    #[test]
    fn single_blog_first_position_discounted_once() {
        let inst = unit_instance();
        let gs = inst.ground_set();
        let a = Assignment::from_items(&gs, [inst.item_for(0, 0)]).unwrap();
        assert!((inst.eval(&a) - 0.8).abs() < 1e-12);
    }

    #[test]
    fn duplicate_blog_adds_nothing_distinct_blogs_telescope() {
        let inst = unit_instance();
        let gs = inst.ground_set();
        // Same blog at positions 0 and 1: second copy covers nothing new.
        let dup = Assignment::from_items(&gs, [inst.item_for(0, 0), inst.item_for(1, 0)]).unwrap();
        assert!((inst.eval(&dup) - 0.8).abs() < 1e-12);
        // Two distinct unit blogs: 0.8 + 0.64.
        let two = Assignment::from_items(&gs, [inst.item_for(0, 0), inst.item_for(1, 1)]).unwrap();
        assert!((inst.eval(&two) - 1.44).abs() < 1e-12);
    }

    #[test]
    fn generate_full_density_everyone_covers_everything() {
        let inst = CoverageInstance::generate(
            3,
            4,
            1.0,
            &WeightDist::Constant { value: 1.0 },
            0.8,
            2,
            9,
        )
        .unwrap();
        for cov in &inst.covers {
            assert_eq!(cov.len(), 4);
        }
        let gs = inst.ground_set();
        // Any single blog first covers all weight at discount gamma.
        for blog in 0..3 {
            let a = Assignment::from_items(&gs, [inst.item_for(0, blog)]).unwrap();
            assert!((inst.eval(&a) - 0.8 * 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn generate_zero_density_is_identically_zero() {
        let inst = CoverageInstance::generate(
            3,
            4,
            0.0,
            &WeightDist::Uniform { low: 0.5, high: 1.5 },
            0.8,
            2,
            9,
        )
        .unwrap();
        let gs = inst.ground_set();
        let full = Assignment::from_items(&gs, [inst.item_for(0, 0), inst.item_for(1, 1)]).unwrap();
        assert_eq!(inst.eval(&full), 0.0);
    }

    #[test]
    fn generate_is_deterministic_per_seed() {
        let make = |seed| {
            CoverageInstance::generate(
                5,
                8,
                0.4,
                &WeightDist::Uniform { low: 0.5, high: 1.5 },
                0.8,
                3,
                seed,
            )
            .unwrap()
        };
        let a = serde_json::to_string(&make(123)).unwrap();
        let b = serde_json::to_string(&make(123)).unwrap();
        let c = serde_json::to_string(&make(124)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn discounted_coverage_is_monotone_submodular() {
        // 3 blogs x 4 positions = 12 items: exhaustive check feasible.
        let inst = CoverageInstance::generate(
            3,
            5,
            0.5,
            &WeightDist::Uniform { low: 0.5, high: 1.5 },
            0.8,
            4,
            77,
        )
        .unwrap();
        let gs = inst.ground_set();
        let report = check_monotone_submodular(&inst, &gs, &CheckConfig::default()).unwrap();
        assert!(report.monotone, "witness: {:?}", report.monotone_witness);
        assert!(report.submodular, "witness: {:?}", report.submodular_witness);
    }

    #[test]
    fn plain_weighted_coverage_matches_hand_value() {
        let f = WeightedCoverage::new(
            vec![1.0, 0.5, 2.0],
            vec![vec![0, 1], vec![1], vec![2]],
        )
        .unwrap();
        let s = ItemSet::from_items(3, [0, 1]).unwrap();
        assert!((f.eval_set(&s) - 1.5).abs() < 1e-12);
        assert!((f.upper_bound() - 3.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(CoverageInstance::new(1, 1, 1.0, vec![1.0], vec![vec![]]).is_err());
        assert!(CoverageInstance::new(1, 1, 0.5, vec![-1.0], vec![vec![]]).is_err());
        assert!(CoverageInstance::new(1, 1, 0.5, vec![1.0], vec![vec![(5, 1.0)]]).is_err());
        assert!(WeightedCoverage::new(vec![1.0], vec![vec![3]]).is_err());
    }
}
