//! Upper-bounds the online ad experiment: cells warm-started exactly at the
//! offline solution, so the measured rates isolate exploration drag from
//! learning speed.

use assignmax::environments::AdModel;
use assignmax::experts::{ExpertMode, HedgeExpert};
use assignmax::offline::{locally_greedy, tabular_greedy, GreedyConfig};
use assignmax::seeding::{derive_seed, rng_from_seed};
use assignmax::tgbandit::{ExploreSchedule, FeedbackSpec, TgConfig, TgState};
use assignmax::value::ValueOracle;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let horizon: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(200_000);
    let trials: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(3);
    let explore_scale: f64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(0.3);

    for trial in 0..trials {
        let trial_seed = 42u64 ^ trial;
        let mut env_rng = rng_from_seed(derive_seed(trial_seed, 1));
        let model =
            AdModel::with_random_clicks(6, 6, &[0.0, 0.5], &[0.5, 0.5], &mut env_rng).unwrap();
        let gs = model.ground_set();

        for colors in [1u32, 4] {
            // Offline solution for this palette.
            let greedy_cfg = GreedyConfig {
                seed: trial_seed,
                enum_cap: 20_000_000,
                ..GreedyConfig::default()
            };
            let target: Vec<Vec<usize>> = if colors == 1 {
                let a = locally_greedy(&model, &gs, &greedy_cfg).unwrap();
                let slots = a.slot_items(&gs);
                (0..6)
                    .map(|k| vec![model.ad_of(slots[k].unwrap())])
                    .collect()
            } else {
                let r = tabular_greedy(&model, &gs, colors, &greedy_cfg).unwrap();
                (0..6)
                    .map(|k| {
                        (1..=colors)
                            .map(|c| {
                                let item = gs
                                    .partition(k)
                                    .iter()
                                    .copied()
                                    .find(|&x| r.table.contains(x, c))
                                    .unwrap();
                                model.ad_of(item)
                            })
                            .collect()
                    })
                    .collect()
            };

            let mut cfg = TgConfig::bandit(colors, horizon, 1.0, derive_seed(trial_seed, 7));
            cfg.feedback = FeedbackSpec::Bandit {
                schedule: ExploreSchedule::AnytimeDecay,
            };
            cfg.explore_scale = explore_scale;
            let k_total = gs.num_partitions();
            let mut state = TgState::with_experts(&gs, &cfg, |k, c, n| {
                let mut lw = vec![-1e3; n];
                lw[target[k][(c - 1) as usize]] = 0.0;
                let gamma_floor = cfg.explore_scale
                    * assignmax::tgbandit::default_explore_prob(&gs, colors, horizon);
                HedgeExpert::with_log_weights(
                    lw,
                    1e-9, // effectively frozen
                    1.0,
                    ExpertMode::Estimated {
                        estimate_cap: (k_total as f64 * colors as f64 * n as f64) / gamma_floor
                            + 1.0,
                    },
                )
            })
            .unwrap();

            let mut round_rng = rng_from_seed(derive_seed(trial_seed, 300 + colors as u64));
            let mut cum = 0u64;
            let mut exploit_q = 0.0;
            let mut exploit_n = 0u64;
            let mut explore_q = 0.0;
            let mut explore_n = 0u64;
            for _ in 0..horizon {
                let sel = state.select_round().unwrap();
                let clicks = model.simulate_round(&sel.played, &mut round_rng);
                cum += clicks as u64;
                if sel.explore.is_some() {
                    explore_q += model.expected_clicks(sel.played.set());
                    explore_n += 1;
                } else {
                    exploit_q += model.expected_clicks(sel.played.set());
                    exploit_n += 1;
                }
                state.feedback_bandit(&sel, clicks as f64).unwrap();
            }
            println!(
                "trial {trial} C={colors}: cum={cum} rate={:.4} exploit_q={:.4} explore_q={:.4} explore_frac={:.4}",
                cum as f64 / horizon as f64,
                exploit_q / exploit_n.max(1) as f64,
                explore_q / explore_n.max(1) as f64,
                explore_n as f64 / horizon as f64,
            );
        }
    }
}
