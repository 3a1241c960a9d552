//! Ground-truth references: exhaustive optimal assignment and regret curves.
//!
//! Every approximation claim in the crate is measured against these.

use crate::error::{Error, Result};
use crate::ground::{Assignment, GroundSet, ItemSet};
use crate::value::{ValueOracle, VALUE_TOLERANCE};

/// Default cap on enumerated feasible assignments.
pub const DEFAULT_OPT_CAP: u64 = 1_000_000;

#[derive(Debug, Clone)]
pub struct OptResult {
    pub best: Assignment,
    pub value: f64,
    /// Feasible assignments examined.
    pub enumerated: u64,
}

/// Enumerate every feasible assignment and return the maximizer.
///
/// With `allow_empty_slots` each position may also stay empty. Value ties
/// (within the crate tolerance) break toward the lexicographically smallest
/// item-id set, so results are stable.
pub fn brute_force_opt<F: ValueOracle + ?Sized>(
    f: &F,
    gs: &GroundSet,
    allow_empty_slots: bool,
    cap: u64,
) -> Result<OptResult> {
    let k = gs.num_partitions();
    let extra = usize::from(allow_empty_slots);
    let total: u128 = gs
        .partitions()
        .iter()
        .map(|p| (p.len() + extra) as u128)
        .product();
    if total > cap as u128 {
        return Err(Error::EnumerationTooLarge {
            needed: total,
            cap,
            hint: "shrink the instance or raise the cap",
        });
    }

    // Odometer over slots; index 0 means "empty" when allowed.
    let offset = 1 - extra; // 0 when empties allowed, 1 otherwise
    let mut idx = vec![0usize; k];
    let mut best: Option<(f64, ItemSet)> = None;
    let mut enumerated = 0u64;
    loop {
        let mut set = ItemSet::empty(gs.num_items());
        for (slot, &i) in idx.iter().enumerate() {
            let pick = i + offset;
            if pick > 0 {
                set.insert(gs.partition(slot)[pick - 1]);
            }
        }
        let value = f.eval_set(&set);
        enumerated += 1;
        let better = match &best {
            None => true,
            Some((bv, bs)) => {
                value > bv + VALUE_TOLERANCE
                    || ((value - bv).abs() <= VALUE_TOLERANCE
                        && set.lex_cmp(bs) == std::cmp::Ordering::Less)
            }
        };
        if better {
            best = Some((value, set));
        }

        let mut pos = 0;
        loop {
            if pos == k {
                let (value, set) = best.expect("at least one assignment enumerated");
                let best = Assignment::from_set(gs, set)?;
                return Ok(OptResult {
                    best,
                    value,
                    enumerated,
                });
            }
            if idx[pos] + 1 < gs.partition(pos).len() + extra {
                idx[pos] += 1;
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Per-round shortfall against a discounted static optimum.
///
/// `f_sum_opt` is the optimum of the summed utilities over the whole horizon;
/// the benchmark at round t is `factor * f_sum_opt * t / T`. Entry `t-1` of
/// the result is that benchmark minus the cumulative reward through round t.
pub fn regret_curve(rewards: &[f64], f_sum_opt: f64, factor: f64) -> Result<Vec<f64>> {
    if !(factor > 0.0 && factor <= 1.0) {
        return Err(Error::invalid(format!("factor {factor} outside (0,1]")));
    }
    let t_total = rewards.len() as f64;
    let mut cum = 0.0;
    Ok(rewards
        .iter()
        .enumerate()
        .map(|(i, r)| {
            cum += r;
            factor * f_sum_opt * (i + 1) as f64 / t_total - cum
        })
        .collect())
}
