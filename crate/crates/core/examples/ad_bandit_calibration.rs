//! Scratch driver for tuning the bandit ad experiment: prints cumulative
//! clicks for palette sizes 1 and 4 at log-spaced checkpoints.

use assignmax::environments::AdModel;
use assignmax::offline::{locally_greedy, GreedyConfig};
use assignmax::oracle::brute_force_opt;
use assignmax::seeding::{derive_seed, rng_from_seed};
use assignmax::tgbandit::{ExploreSchedule, FeedbackSpec, TgConfig, TgState};
use assignmax::value::ValueOracle;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let horizon: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(1_000_000);
    let trials: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(6);
    let master: u64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(42);
    let decay: bool = args.get(4).map(|s| s == "decay").unwrap_or(false);
    let eta_scale: f64 = args.get(5).and_then(|s| s.parse().ok()).unwrap_or(1.0);
    let explore_scale: f64 = args.get(6).and_then(|s| s.parse().ok()).unwrap_or(1.0);

    let checkpoints: Vec<u64> = [
        1_000u64, 3_000, 10_000, 30_000, 100_000, 300_000, 1_000_000, 2_000_000, 4_000_000,
        8_000_000, 16_000_000,
    ]
    .into_iter()
    .filter(|&c| c <= horizon)
    .collect();
    let colors_list = [1u32, 4u32];

    let mut sums = vec![vec![0.0f64; checkpoints.len()]; colors_list.len()];
    let mut opt_sum = 0.0;
    let mut greedy_sum = 0.0;
    let start = std::time::Instant::now();

    for trial in 0..trials {
        let trial_seed = master ^ trial;
        let mut env_rng = rng_from_seed(derive_seed(trial_seed, 1));
        let model = AdModel::with_random_clicks(6, 6, &[0.0, 0.5], &[0.5, 0.5], &mut env_rng)
            .unwrap();
        let gs = model.ground_set();
        let opt = brute_force_opt(&model, &gs, false, 1_000_000).unwrap();
        let greedy = locally_greedy(&model, &gs, &GreedyConfig::default()).unwrap();
        opt_sum += opt.value;
        greedy_sum += model.eval(&greedy);

        for (ci, &colors) in colors_list.iter().enumerate() {
            let mut cfg = TgConfig::bandit(
                colors,
                horizon,
                1.0,
                derive_seed(trial_seed, 100 + colors as u64),
            );
            if decay {
                cfg.feedback = FeedbackSpec::Bandit {
                    schedule: ExploreSchedule::AnytimeDecay,
                };
            }
            cfg.eta_scale = eta_scale;
            cfg.explore_scale = explore_scale;
            let mut state = TgState::new(&gs, &cfg).unwrap();
            let mut round_rng = rng_from_seed(derive_seed(trial_seed, 200 + colors as u64));
            let mut cum = 0u64;
            let mut next_cp = 0usize;
            let mut exploit_quality = 0.0f64;
            let mut exploit_rounds = 0u64;
            let mut explore_rounds = 0u64;
            for t in 1..=horizon {
                let sel = state.select_round().unwrap();
                let clicks = model.simulate_round(&sel.played, &mut round_rng);
                cum += clicks as u64;
                if sel.explore.is_some() {
                    explore_rounds += 1;
                } else {
                    exploit_quality += model.expected_clicks(sel.played.set());
                    exploit_rounds += 1;
                }
                state.feedback_bandit(&sel, clicks as f64).unwrap();
                if next_cp < checkpoints.len() && t == checkpoints[next_cp] {
                    sums[ci][next_cp] += cum as f64;
                    next_cp += 1;
                    eprintln!(
                        "  trial {trial} C={colors} t={t}: window exploit quality {:.4}, explore frac {:.4}",
                        exploit_quality / exploit_rounds.max(1) as f64,
                        explore_rounds as f64 / (exploit_rounds + explore_rounds) as f64
                    );
                    exploit_quality = 0.0;
                    exploit_rounds = 0;
                    explore_rounds = 0;
                }
            }
        }
    }

    println!(
        "trials={trials} horizon={horizon} elapsed={:.1}s",
        start.elapsed().as_secs_f64()
    );
    println!(
        "mean OPT/round={:.4} mean greedy/round={:.4}",
        opt_sum / trials as f64,
        greedy_sum / trials as f64
    );
    println!("checkpoint, mean_cum_C1, mean_cum_C4, (C4-C1)/C1");
    for (i, &cp) in checkpoints.iter().enumerate() {
        let c1 = sums[0][i] / trials as f64;
        let c4 = sums[1][i] / trials as f64;
        println!("{cp}, {c1:.1}, {c4:.1}, {:+.4}", (c4 - c1) / c1);
    }
}
