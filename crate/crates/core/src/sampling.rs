//! Color tables, color vectors, and the color-averaged objective.
//!
//! A color table labels items with colors from a palette `1..=C`. Drawing one
//! color per partition and keeping the items whose label matches their
//! partition's draw turns a table into a plain item set. The expected utility
//! of that random set is the surrogate objective the table-greedy algorithm
//! maximizes; it can be computed exactly by enumerating all `C^K` colorings
//! or estimated by sampling.

use std::collections::BTreeSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::ground::{GroundSet, ItemId, ItemSet};
use crate::seeding::rng_from_seed;
use crate::value::ValueOracle;

/// Color label, always in `1..=palette`.
pub type Color = u32;

/// Default cap on exhaustive `C^K` coloring enumeration.
pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;

/// One color per partition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColorVector(Vec<Color>);

impl ColorVector {
    pub fn new(colors: Vec<Color>) -> Self {
        ColorVector(colors)
    }

    /// Draw each partition's color uniformly from `1..=palette`.
    pub fn sample_uniform<R: Rng + ?Sized>(num_partitions: usize, palette: u32, rng: &mut R) -> Self {
        ColorVector(
            (0..num_partitions)
                .map(|_| rng.random_range(1..=palette))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn color(&self, k: usize) -> Color {
        self.0[k]
    }

    pub fn colors(&self) -> &[Color] {
        &self.0
    }
}

/// A set of (item, color) pairs over a fixed ground set and palette.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorTable {
    palette: u32,
    num_items: usize,
    pairs: BTreeSet<(ItemId, Color)>,
    // Per-item color bitmask; fast-path for palettes up to 64 colors.
    masks: Option<Vec<u64>>,
}

impl ColorTable {
    pub fn empty(gs: &GroundSet, palette: u32) -> Result<Self> {
        if palette == 0 {
            return Err(Error::invalid("palette size must be at least 1"));
        }
        let masks = (palette <= 64).then(|| vec![0u64; gs.num_items()]);
        Ok(ColorTable {
            palette,
            num_items: gs.num_items(),
            pairs: BTreeSet::new(),
            masks,
        })
    }

    pub fn from_pairs(
        gs: &GroundSet,
        palette: u32,
        pairs: impl IntoIterator<Item = (ItemId, Color)>,
    ) -> Result<Self> {
        let mut table = ColorTable::empty(gs, palette)?;
        for (item, color) in pairs {
            table.insert(gs, item, color)?;
        }
        Ok(table)
    }

    pub fn insert(&mut self, gs: &GroundSet, item: ItemId, color: Color) -> Result<()> {
        if !gs.contains_item(item) || gs.num_items() != self.num_items {
            return Err(Error::invalid(format!("item {item} not in the ground set")));
        }
        self.check_color(color)?;
        self.pairs.insert((item, color));
        if let Some(masks) = &mut self.masks {
            masks[item] |= 1 << (color - 1);
        }
        Ok(())
    }

    /// Copy with one extra pair; the greedy candidate loop lives on this.
    pub fn with_pair(&self, gs: &GroundSet, item: ItemId, color: Color) -> Result<Self> {
        let mut out = self.clone();
        out.insert(gs, item, color)?;
        Ok(out)
    }

    pub fn contains(&self, item: ItemId, color: Color) -> bool {
        match &self.masks {
            Some(masks) => {
                item < masks.len() && color >= 1 && color <= 64 && masks[item] >> (color - 1) & 1 == 1
            }
            None => self.pairs.contains(&(item, color)),
        }
    }

    pub fn palette(&self) -> u32 {
        self.palette
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (ItemId, Color)> + '_ {
        self.pairs.iter().copied()
    }

    fn check_color(&self, color: Color) -> Result<()> {
        if color < 1 || color > self.palette {
            return Err(Error::invalid(format!(
                "color {color} outside palette 1..={}",
                self.palette
            )));
        }
        Ok(())
    }

    fn check_cvec(&self, gs: &GroundSet, cvec: &ColorVector) -> Result<()> {
        if cvec.len() != gs.num_partitions() {
            return Err(Error::invalid(format!(
                "color vector length {} != {} partitions",
                cvec.len(),
                gs.num_partitions()
            )));
        }
        for &c in cvec.colors() {
            self.check_color(c)?;
        }
        Ok(())
    }
}

/// Keep every item whose partition's drawn color matches one of its labels.
///
/// The union over partitions k of `{x in P_k : (x, cvec[k]) in table}`. The
/// result is a plain item set: it can be infeasible when the table labels two
/// items of one partition with the same color.
pub fn sample_colored(gs: &GroundSet, table: &ColorTable, cvec: &ColorVector) -> Result<ItemSet> {
    table.check_cvec(gs, cvec)?;
    let mut out = ItemSet::empty(gs.num_items());
    for (k, part) in gs.partitions().iter().enumerate() {
        let c = cvec.color(k);
        for &item in part {
            if table.contains(item, c) {
                out.insert(item);
            }
        }
    }
    Ok(out)
}

fn colorings_count(palette: u32, num_partitions: usize) -> u128 {
    (palette as u128).saturating_pow(num_partitions as u32)
}

/// Exact color-averaged value: mean of `f(sample)` over all `C^K` colorings.
pub fn exact_expected_value<F: ValueOracle + ?Sized>(
    f: &F,
    gs: &GroundSet,
    table: &ColorTable,
    cap: u64,
) -> Result<f64> {
    let k = gs.num_partitions();
    let total = colorings_count(table.palette(), k);
    if total > cap as u128 {
        return Err(Error::EnumerationTooLarge {
            needed: total,
            cap,
            hint: "use estimate_expected_value instead",
        });
    }
    // Odometer over colorings, least-significant partition first.
    let mut colors = vec![1u32; k];
    let mut sum = 0.0;
    loop {
        let cvec = ColorVector::new(colors.clone());
        sum += f.eval_set(&sample_colored(gs, table, &cvec)?);
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(sum / total as f64);
            }
            if colors[pos] < table.palette() {
                colors[pos] += 1;
                break;
            }
            colors[pos] = 1;
            pos += 1;
        }
    }
}

/// Monte-Carlo estimate of the color-averaged value.
///
/// Draws `n_samples` independent uniform color vectors from a stream derived
/// from `seed` alone, so identical seeds replay identical draws. Callers that
/// compare candidate tables pass the same seed to share the draws (common
/// random numbers).
pub fn estimate_expected_value<F: ValueOracle + ?Sized>(
    f: &F,
    gs: &GroundSet,
    table: &ColorTable,
    n_samples: u32,
    seed: u64,
) -> Result<f64> {
    if n_samples == 0 {
        return Err(Error::invalid("n_samples must be at least 1"));
    }
    let mut rng = rng_from_seed(seed);
    let mut sum = 0.0;
    for _ in 0..n_samples {
        let cvec = ColorVector::sample_uniform(gs.num_partitions(), table.palette(), &mut rng);
        sum += f.eval_set(&sample_colored(gs, table, &cvec)?);
    }
    Ok(sum / n_samples as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::FnOracle;
    use proptest::prelude::*;

    fn weight_oracle(weights: Vec<f64>) -> FnOracle<impl Fn(&ItemSet) -> f64> {
        let bound = weights.iter().sum();
        FnOracle::new(bound, move |s: &ItemSet| s.iter().map(|i| weights[i]).sum())
    }

    #[test]
    fn sample_matching_colors_only() {
        // Items a=0 in P1, b=1 in P2; labels (a,1),(b,2); draw (1,1) keeps a only.
        let gs = GroundSet::from_sizes(&[1, 1]).unwrap();
        let table = ColorTable::from_pairs(&gs, 2, [(0, 1), (1, 2)]).unwrap();
        let out = sample_colored(&gs, &table, &ColorVector::new(vec![1, 1])).unwrap();
        assert_eq!(out.to_vec(), vec![0]);
    }

    #[test]
    fn sample_single_color_palette_is_deterministic_and_total() {
        let gs = GroundSet::from_sizes(&[1, 1]).unwrap();
        let table = ColorTable::from_pairs(&gs, 1, [(0, 1), (1, 1)]).unwrap();
        let out = sample_colored(&gs, &table, &ColorVector::new(vec![1, 1])).unwrap();
        assert_eq!(out.to_vec(), vec![0, 1]);
    }

    #[test]
    fn sample_empty_table_is_empty() {
        let gs = GroundSet::from_sizes(&[2, 3]).unwrap();
        let table = ColorTable::empty(&gs, 4).unwrap();
        for cvec in [vec![1, 1], vec![4, 2], vec![3, 3]] {
            let out = sample_colored(&gs, &table, &ColorVector::new(cvec)).unwrap();
            assert!(out.is_empty());
        }
    }

    #[test]
    fn sample_rejects_out_of_range_color() {
        let gs = GroundSet::from_sizes(&[1, 1]).unwrap();
        let table = ColorTable::from_pairs(&gs, 2, [(0, 1)]).unwrap();
        let err = sample_colored(&gs, &table, &ColorVector::new(vec![1, 3]));
        assert!(matches!(err, Err(Error::InvalidInput(_))));
        let err = sample_colored(&gs, &table, &ColorVector::new(vec![0, 1]));
        assert!(matches!(err, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn table_rejects_bad_inserts() {
        let gs = GroundSet::from_sizes(&[2]).unwrap();
        let mut table = ColorTable::empty(&gs, 3).unwrap();
        assert!(table.insert(&gs, 0, 0).is_err());
        assert!(table.insert(&gs, 0, 4).is_err());
        assert!(table.insert(&gs, 9, 1).is_err());
        assert!(ColorTable::empty(&gs, 0).is_err());
    }

    #[test]
    fn exact_single_color_equals_plain_eval() {
        let gs = GroundSet::from_sizes(&[2, 2]).unwrap();
        let f = weight_oracle(vec![0.5, 1.0, 2.0, 4.0]);
        let table = ColorTable::from_pairs(&gs, 1, [(1, 1), (2, 1)]).unwrap();
        let exact = exact_expected_value(&f, &gs, &table, DEFAULT_ENUM_CAP).unwrap();
        let sampled = sample_colored(&gs, &table, &ColorVector::new(vec![1, 1])).unwrap();
        assert!((exact - f.eval_set(&sampled)).abs() < 1e-12);
        assert!((exact - 3.0).abs() < 1e-12);
    }

    #[test]
    fn exact_empty_table_is_empty_value() {
        let gs = GroundSet::from_sizes(&[2, 2]).unwrap();
        let f = FnOracle::new(10.0, |s: &ItemSet| 3.25 + s.len() as f64);
        let table = ColorTable::empty(&gs, 3).unwrap();
        let exact = exact_expected_value(&f, &gs, &table, DEFAULT_ENUM_CAP).unwrap();
        assert!((exact - 3.25).abs() < 1e-12);
    }

    #[test]
    fn exact_enumeration_cap_enforced() {
        let gs = GroundSet::from_sizes(&[1, 1, 1]).unwrap();
        let f = weight_oracle(vec![1.0, 1.0, 1.0]);
        let table = ColorTable::empty(&gs, 100).unwrap();
        let err = exact_expected_value(&f, &gs, &table, 1000).unwrap_err();
        assert!(matches!(err, Error::EnumerationTooLarge { needed: 1_000_000, cap: 1000, .. }));
        assert!(err.to_string().contains("estimate_expected_value"));
    }

    #[test]
    fn estimate_is_deterministic_given_seed() {
        let gs = GroundSet::from_sizes(&[3, 3]).unwrap();
        let f = weight_oracle(vec![0.1, 0.9, 0.4, 0.2, 0.7, 0.3]);
        let table = ColorTable::from_pairs(&gs, 4, [(0, 1), (1, 2), (3, 1), (4, 4)]).unwrap();
        let a = estimate_expected_value(&f, &gs, &table, 500, 77).unwrap();
        let b = estimate_expected_value(&f, &gs, &table, 500, 77).unwrap();
        assert_eq!(a, b);
        let c = estimate_expected_value(&f, &gs, &table, 500, 78).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn estimate_single_sample_single_color_equals_exact() {
        let gs = GroundSet::from_sizes(&[2, 1]).unwrap();
        let f = weight_oracle(vec![0.3, 0.6, 0.9]);
        let table = ColorTable::from_pairs(&gs, 1, [(0, 1), (2, 1)]).unwrap();
        let exact = exact_expected_value(&f, &gs, &table, DEFAULT_ENUM_CAP).unwrap();
        let est = estimate_expected_value(&f, &gs, &table, 1, 5).unwrap();
        assert!((exact - est).abs() < 1e-12);
    }

    #[test]
    fn estimate_rejects_zero_samples() {
        let gs = GroundSet::from_sizes(&[1]).unwrap();
        let f = weight_oracle(vec![1.0]);
        let table = ColorTable::empty(&gs, 2).unwrap();
        assert!(estimate_expected_value(&f, &gs, &table, 0, 0).is_err());
    }

    // Hoeffding: |estimate - exact| <= B*sqrt(ln(2/delta)/(2n)) with
    // probability >= 1-delta; at delta=0.01 expect >=99% of trials inside.
    #[test]
    fn estimate_within_hoeffding_band_of_exact() {
        let gs = GroundSet::from_sizes(&[2, 2, 2]).unwrap();
        let f = weight_oracle(vec![0.15, 0.3, 0.05, 0.2, 0.1, 0.2]);
        let table =
            ColorTable::from_pairs(&gs, 3, [(0, 1), (1, 2), (2, 3), (3, 1), (4, 2), (5, 3)])
                .unwrap();
        let exact = exact_expected_value(&f, &gs, &table, DEFAULT_ENUM_CAP).unwrap();
        let n = 200u32;
        let bound = f.upper_bound() * ((2.0f64 / 0.01).ln() / (2.0 * n as f64)).sqrt();
        let mut inside = 0;
        for trial in 0..1000u64 {
            let est = estimate_expected_value(&f, &gs, &table, n, 9000 + trial).unwrap();
            if (est - exact).abs() <= bound {
                inside += 1;
            }
        }
        assert!(inside >= 990, "only {inside}/1000 inside the Hoeffding band");
    }

    // Unbiasedness: the grand mean over many independent seeds converges to
    // the exact value within 4 standard errors.
    #[test]
    fn estimate_grand_mean_matches_exact() {
        let gs = GroundSet::from_sizes(&[2, 2]).unwrap();
        let f = weight_oracle(vec![0.4, 0.1, 0.25, 0.55]);
        let table = ColorTable::from_pairs(&gs, 2, [(0, 1), (1, 2), (2, 2), (3, 1)]).unwrap();
        let exact = exact_expected_value(&f, &gs, &table, DEFAULT_ENUM_CAP).unwrap();
        let trials = 10_000u64;
        let mut values = Vec::with_capacity(trials as usize);
        for trial in 0..trials {
            values.push(estimate_expected_value(&f, &gs, &table, 4, 31_000 + trial).unwrap());
        }
        let mean: f64 = values.iter().sum::<f64>() / trials as f64;
        let var: f64 =
            values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (trials - 1) as f64;
        let se = (var / trials as f64).sqrt();
        assert!(
            (mean - exact).abs() < 4.0 * se,
            "grand mean {mean} vs exact {exact}, se {se}"
        );
    }

    // The color-averaged value of a monotone submodular f is itself monotone
    // submodular as a set function of (item, color) pairs; checked
    // exhaustively on a tiny instance (|E| * C <= 12).
    #[test]
    fn expected_value_is_monotone_submodular_in_table_pairs() {
        let gs = GroundSet::from_sizes(&[2, 2]).unwrap();
        // Coverage-style f: elements covered by items.
        let covers: Vec<Vec<usize>> = vec![vec![0, 1], vec![1], vec![1, 2], vec![0]];
        let weights = [0.5, 1.0, 0.75];
        let f = FnOracle::new(2.25, move |s: &ItemSet| {
            let mut hit = [false; 3];
            for item in s.iter() {
                for &e in &covers[item] {
                    hit[e] = true;
                }
            }
            hit.iter()
                .zip(weights.iter())
                .map(|(&h, &w)| if h { w } else { 0.0 })
                .sum()
        });

        let palette = 3u32;
        let pair_space: Vec<(ItemId, Color)> = (0..gs.num_items())
            .flat_map(|i| (1..=palette).map(move |c| (i, c)))
            .collect();
        assert_eq!(pair_space.len(), 12);

        let value_of = |mask: u32| -> f64 {
            let pairs = pair_space
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p);
            let table = ColorTable::from_pairs(&gs, palette, pairs).unwrap();
            exact_expected_value(&f, &gs, &table, DEFAULT_ENUM_CAP).unwrap()
        };

        let n = pair_space.len();
        let mut values = vec![0.0; 1 << n];
        for (mask, slot) in values.iter_mut().enumerate() {
            *slot = value_of(mask as u32);
        }
        for mask in 0..(1u32 << n) {
            for i in 0..n {
                if mask >> i & 1 == 1 {
                    continue;
                }
                let gain = values[(mask | 1 << i) as usize] - values[mask as usize];
                assert!(gain >= -1e-9, "not monotone at mask {mask} pair {i}");
                for j in 0..n {
                    if j == i || mask >> j & 1 == 1 {
                        continue;
                    }
                    let bigger = mask | 1 << j;
                    let gain_bigger =
                        values[(bigger | 1 << i) as usize] - values[bigger as usize];
                    assert!(
                        gain + 1e-9 >= gain_bigger,
                        "not submodular at mask {mask} pairs {i},{j}"
                    );
                }
            }
        }
    }

    proptest! {
        // Per-partition contribution of a sample equals the count of
        // matching-color labels in that partition.
        #[test]
        fn sample_partition_counts_match_table(
            sizes in proptest::collection::vec(1usize..4, 1..4),
            palette in 1u32..5,
            pair_picks in proptest::collection::vec((0usize..12, 1u32..5), 0..20),
            cvec_raw in proptest::collection::vec(1u32..5, 4),
        ) {
            let gs = GroundSet::from_sizes(&sizes).unwrap();
            let mut table = ColorTable::empty(&gs, palette).unwrap();
            for (item_raw, color_raw) in pair_picks {
                let item = item_raw % gs.num_items();
                let color = (color_raw - 1) % palette + 1;
                table.insert(&gs, item, color).unwrap();
            }
            let cvec = ColorVector::new(
                (0..gs.num_partitions()).map(|k| (cvec_raw[k] - 1) % palette + 1).collect(),
            );
            let sample = sample_colored(&gs, &table, &cvec).unwrap();
            for (k, part) in gs.partitions().iter().enumerate() {
                let in_sample = part.iter().filter(|&&x| sample.contains(x)).count();
                let labeled = part.iter().filter(|&&x| table.contains(x, cvec.color(k))).count();
                prop_assert_eq!(in_sample, labeled);
            }
        }
    }
}
