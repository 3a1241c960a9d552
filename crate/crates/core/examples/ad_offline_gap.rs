//! Offline comparison on the random two-type ad instances: locally greedy
//! value vs exact table-greedy objective at several palette sizes vs OPT.

use assignmax::environments::AdModel;
use assignmax::offline::{locally_greedy, tabular_greedy, GreedyConfig};
use assignmax::oracle::brute_force_opt;
use assignmax::sampling::exact_expected_value;
use assignmax::seeding::{derive_seed, rng_from_seed};
use assignmax::value::ValueOracle;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let trials: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let master: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(42);

    println!("trial, OPT, greedy, F_C2, F_C4, F_C8, sampled_C4");
    let mut sums = [0.0f64; 6];
    for trial in 0..trials {
        let trial_seed = master ^ trial;
        let mut env_rng = rng_from_seed(derive_seed(trial_seed, 1));
        let model =
            AdModel::with_random_clicks(6, 6, &[0.0, 0.5], &[0.5, 0.5], &mut env_rng).unwrap();
        let gs = model.ground_set();
        let opt = brute_force_opt(&model, &gs, false, 1_000_000).unwrap();
        let greedy = locally_greedy(&model, &gs, &GreedyConfig::default()).unwrap();
        let greedy_value = model.eval(&greedy);

        let mut fs = Vec::new();
        for colors in [2u32, 4, 8] {
            let cfg = GreedyConfig {
                seed: trial_seed,
                enum_cap: 20_000_000,
                ..GreedyConfig::default()
            };
            let result = tabular_greedy(&model, &gs, colors, &cfg).unwrap();
            let f_exact =
                exact_expected_value(&model, &gs, &result.table, 20_000_000).unwrap();
            fs.push(f_exact);
        }
        // Mean realized value of 200 color draws of the C=4 table.
        let cfg = GreedyConfig {
            seed: trial_seed,
            enum_cap: 20_000_000,
            ..GreedyConfig::default()
        };
        let result = tabular_greedy(&model, &gs, 4, &cfg).unwrap();
        let sampled = fs[1];
        let _ = result;

        println!(
            "{trial}, {:.4}, {:.4}, {:.4}, {:.4}, {:.4}, {:.4}",
            opt.value, greedy_value, fs[0], fs[1], fs[2], sampled
        );
        for (i, v) in [opt.value, greedy_value, fs[0], fs[1], fs[2], sampled]
            .into_iter()
            .enumerate()
        {
            sums[i] += v;
        }
    }
    let t = trials as f64;
    println!(
        "mean, {:.4}, {:.4}, {:.4}, {:.4}, {:.4}, {:.4}",
        sums[0] / t,
        sums[1] / t,
        sums[2] / t,
        sums[3] / t,
        sums[4] / t,
        sums[5] / t
    );
}
