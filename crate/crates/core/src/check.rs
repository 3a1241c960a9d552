//! Empirical monotonicity / submodularity verification.
//!
//! Exhaustive mode memoizes the oracle over the whole powerset and walks all
//! nested subset pairs; spot-check mode samples random nested pairs when the
//! powerset is out of reach.

use rand::Rng;

use crate::error::{Error, Result};
use crate::ground::{GroundSet, ItemId, ItemSet};
use crate::seeding::rng_from_seed;
use crate::value::{ValueOracle, VALUE_TOLERANCE};

/// Default cap on powerset size for exhaustive checking.
pub const DEFAULT_SUBSET_CAP: u64 = 1 << 20;

#[derive(Debug, Clone)]
pub enum CheckMode {
    /// All pairs `A ⊆ A' ⊆ E` and all `s ∉ A'`.
    Exhaustive,
    /// Random nested pairs; for ground sets above the exhaustive cap.
    SpotCheck { samples: u64, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct CheckConfig {
    pub mode: CheckMode,
    pub subset_cap: u64,
    pub tolerance: f64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            mode: CheckMode::Exhaustive,
            subset_cap: DEFAULT_SUBSET_CAP,
            tolerance: VALUE_TOLERANCE,
        }
    }
}

impl CheckConfig {
    pub fn spot_check(samples: u64, seed: u64) -> Self {
        CheckConfig {
            mode: CheckMode::SpotCheck { samples, seed },
            ..CheckConfig::default()
        }
    }
}

/// A monotonicity violation: a nested pair whose value decreased.
#[derive(Debug, Clone)]
pub struct MonotoneWitness {
    pub subset: Vec<ItemId>,
    pub superset: Vec<ItemId>,
    pub value_subset: f64,
    pub value_superset: f64,
}

/// A diminishing-returns violation: an item whose marginal gain grew on the
/// larger context.
#[derive(Debug, Clone)]
pub struct SubmodularWitness {
    pub subset: Vec<ItemId>,
    pub superset: Vec<ItemId>,
    pub item: ItemId,
    pub gain_on_subset: f64,
    pub gain_on_superset: f64,
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub monotone: bool,
    pub submodular: bool,
    pub monotone_witness: Option<MonotoneWitness>,
    pub submodular_witness: Option<SubmodularWitness>,
    /// Number of (A, A') pairs inspected.
    pub pairs_checked: u64,
}

fn mask_items(mask: u64, n: usize) -> Vec<ItemId> {
    (0..n).filter(|i| mask >> i & 1 == 1).collect()
}

/// Verify monotonicity and submodularity of an oracle over a ground set.
///
/// Exhaustive mode requires `2^|E| <= subset_cap`; beyond that it errors and
/// suggests spot-check mode. Both properties are checked independently so a
/// report can carry one witness for each.
pub fn check_monotone_submodular<F: ValueOracle + ?Sized>(
    f: &F,
    gs: &GroundSet,
    cfg: &CheckConfig,
) -> Result<CheckReport> {
    match cfg.mode {
        CheckMode::Exhaustive => check_exhaustive(f, gs, cfg),
        CheckMode::SpotCheck { samples, seed } => check_spot(f, gs, cfg, samples, seed),
    }
}

fn check_exhaustive<F: ValueOracle + ?Sized>(
    f: &F,
    gs: &GroundSet,
    cfg: &CheckConfig,
) -> Result<CheckReport> {
    let n = gs.num_items();
    if n >= 63 || (1u128 << n) > cfg.subset_cap as u128 {
        return Err(Error::EnumerationTooLarge {
            needed: if n < 128 { 1u128 << n } else { u128::MAX },
            cap: cfg.subset_cap,
            hint: "use spot-check mode (CheckMode::SpotCheck)",
        });
    }

    // Memoize f over the powerset; everything after is table lookups.
    let mut values = vec![0.0f64; 1usize << n];
    for (mask, slot) in values.iter_mut().enumerate() {
        let set = ItemSet::from_items(n, mask_items(mask as u64, n))?;
        *slot = f.eval_set(&set);
    }

    let mut report = CheckReport {
        monotone: true,
        submodular: true,
        monotone_witness: None,
        submodular_witness: None,
        pairs_checked: 0,
    };
    let full = (1u64 << n) - 1;

    // Enumerate all A' (super), then all A ⊆ A' via the subset-stepping trick.
    for superset in 0..=full {
        let mut subset = superset;
        loop {
            report.pairs_checked += 1;
            record_pair(&values, n, subset, superset, cfg.tolerance, &mut report);
            if !report.monotone && !report.submodular {
                return Ok(report);
            }
            if subset == 0 {
                break;
            }
            subset = (subset - 1) & superset;
        }
    }
    Ok(report)
}

/// Check one nested pair (A, A'): A's value vs A''s, and every item outside
/// A' for diminishing returns.
fn record_pair(
    values: &[f64],
    n: usize,
    subset: u64,
    superset: u64,
    tol: f64,
    report: &mut CheckReport,
) {
    let v_sub = values[subset as usize];
    let v_sup = values[superset as usize];
    if report.monotone && v_sub > v_sup + tol {
        report.monotone = false;
        report.monotone_witness = Some(MonotoneWitness {
            subset: mask_items(subset, n),
            superset: mask_items(superset, n),
            value_subset: v_sub,
            value_superset: v_sup,
        });
    }
    if report.submodular {
        for s in 0..n {
            if superset >> s & 1 == 1 {
                continue;
            }
            let gain_sub = values[(subset | 1 << s) as usize] - v_sub;
            let gain_sup = values[(superset | 1 << s) as usize] - v_sup;
            if gain_sub + tol < gain_sup {
                report.submodular = false;
                report.submodular_witness = Some(SubmodularWitness {
                    subset: mask_items(subset, n),
                    superset: mask_items(superset, n),
                    item: s,
                    gain_on_subset: gain_sub,
                    gain_on_superset: gain_sup,
                });
                break;
            }
        }
    }
}

fn check_spot<F: ValueOracle + ?Sized>(
    f: &F,
    gs: &GroundSet,
    cfg: &CheckConfig,
    samples: u64,
    seed: u64,
) -> Result<CheckReport> {
    if samples == 0 {
        return Err(Error::invalid("spot-check needs at least one sample"));
    }
    let n = gs.num_items();
    let mut rng = rng_from_seed(seed);
    let mut report = CheckReport {
        monotone: true,
        submodular: true,
        monotone_witness: None,
        submodular_witness: None,
        pairs_checked: 0,
    };

    for _ in 0..samples {
        // Random nested pair: each item lands in A, in A'\A, or outside.
        let mut sub = ItemSet::empty(n);
        let mut sup = ItemSet::empty(n);
        for item in 0..n {
            match rng.random_range(0..3u8) {
                0 => {
                    sub.insert(item);
                    sup.insert(item);
                }
                1 => sup.insert(item),
                _ => {}
            }
        }
        report.pairs_checked += 1;
        let v_sub = f.eval_set(&sub);
        let v_sup = f.eval_set(&sup);
        if report.monotone && v_sub > v_sup + cfg.tolerance {
            report.monotone = false;
            report.monotone_witness = Some(MonotoneWitness {
                subset: sub.to_vec(),
                superset: sup.to_vec(),
                value_subset: v_sub,
                value_superset: v_sup,
            });
        }
        if report.submodular {
            let outside: Vec<ItemId> = (0..n).filter(|&i| !sup.contains(i)).collect();
            if !outside.is_empty() {
                let s = outside[rng.random_range(0..outside.len())];
                let gain_sub = f.eval_set(&sub.with(s)) - v_sub;
                let gain_sup = f.eval_set(&sup.with(s)) - v_sup;
                if gain_sub + cfg.tolerance < gain_sup {
                    report.submodular = false;
                    report.submodular_witness = Some(SubmodularWitness {
                        subset: sub.to_vec(),
                        superset: sup.to_vec(),
                        item: s,
                        gain_on_subset: gain_sub,
                        gain_on_superset: gain_sup,
                    });
                }
            }
        }
        if !report.monotone && !report.submodular {
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::FnOracle;

    fn coverage_oracle() -> (GroundSet, FnOracle<impl Fn(&ItemSet) -> f64>) {
        let gs = GroundSet::from_sizes(&[2, 2]).unwrap();
        let covers: Vec<Vec<usize>> = vec![vec![0, 1], vec![1], vec![2], vec![0, 2]];
        let weights = [1.0, 0.5, 2.0];
        let f = FnOracle::new(3.5, move |s: &ItemSet| {
            let mut hit = [false; 3];
            for item in s.iter() {
                for &e in &covers[item] {
                    hit[e] = true;
                }
            }
            hit.iter().zip(weights).map(|(&h, w)| if h { w } else { 0.0 }).sum()
        });
        (gs, f)
    }

    #[test]
    fn weighted_coverage_passes_both() {
        let (gs, f) = coverage_oracle();
        let report = check_monotone_submodular(&f, &gs, &CheckConfig::default()).unwrap();
        assert!(report.monotone);
        assert!(report.submodular);
        assert!(report.monotone_witness.is_none());
        assert!(report.submodular_witness.is_none());
    }

    #[test]
    fn squared_cardinality_rejected_with_witness() {
        let gs = GroundSet::from_sizes(&[2, 2]).unwrap();
        let f = FnOracle::new(16.0, |s: &ItemSet| (s.len() * s.len()) as f64);
        let report = check_monotone_submodular(&f, &gs, &CheckConfig::default()).unwrap();
        assert!(report.monotone);
        assert!(!report.submodular);
        let w = report.submodular_witness.expect("needs witness");
        // Replay the witness: the gain really is larger on the superset.
        assert!(w.gain_on_superset > w.gain_on_subset);
        assert!(w.subset.len() < w.superset.len() || w.subset == w.superset);
    }

    #[test]
    fn non_monotone_detected() {
        let gs = GroundSet::from_sizes(&[3]).unwrap();
        let f = FnOracle::new(3.0, |s: &ItemSet| 3.0 - s.len() as f64);
        let report = check_monotone_submodular(&f, &gs, &CheckConfig::default()).unwrap();
        assert!(!report.monotone);
        let w = report.monotone_witness.unwrap();
        assert!(w.value_subset > w.value_superset);
    }

    #[test]
    fn cap_exceeded_suggests_spot_check() {
        let gs = GroundSet::from_sizes(&[5, 5]).unwrap();
        let f = FnOracle::new(10.0, |s: &ItemSet| s.len() as f64);
        let cfg = CheckConfig {
            subset_cap: 512,
            ..CheckConfig::default()
        };
        let err = check_monotone_submodular(&f, &gs, &cfg).unwrap_err();
        assert!(err.to_string().contains("spot-check"));
    }

    #[test]
    fn spot_check_flags_supermodular() {
        let gs = GroundSet::from_sizes(&[4, 4, 4]).unwrap();
        let f = FnOracle::new(144.0, |s: &ItemSet| (s.len() * s.len()) as f64);
        let report =
            check_monotone_submodular(&f, &gs, &CheckConfig::spot_check(2000, 3)).unwrap();
        assert!(report.monotone);
        assert!(!report.submodular);
    }

    #[test]
    fn spot_check_accepts_modular() {
        let gs = GroundSet::from_sizes(&[4, 4, 4]).unwrap();
        let f = FnOracle::new(12.0, |s: &ItemSet| s.len() as f64);
        let report =
            check_monotone_submodular(&f, &gs, &CheckConfig::spot_check(2000, 3)).unwrap();
        assert!(report.monotone);
        assert!(report.submodular);
    }
}
