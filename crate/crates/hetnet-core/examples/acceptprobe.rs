use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hetnet_core::assign::AssignMode;
use hetnet_core::joint::{brute_force_joint, dual_decomposition, DualParams};
use hetnet_core::model::RateMatrix;

fn main() {
    // Rebuild instance 46 of seed 104 exactly as the suite generates it.
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    rng.set_stream(46 + 1);
    let k = rng.gen_range(1..=8usize);
    let j = rng.gen_range(1..=3usize);
    let capacities: Vec<usize> = (0..j).map(|_| rng.gen_range(1..=3)).collect();
    let mut rates = vec![vec![0.0; j]; k];
    let mut mask = vec![vec![true; j]; k];
    for row in 0..k {
        for col in 0..j {
            rates[row][col] = 10f64.powf(rng.gen_range(-1.0..1.3));
            if rng.gen_bool(0.1) {
                mask[row][col] = false;
                rates[row][col] = 0.0;
            }
        }
    }
    println!("K={k} J={j} caps={capacities:?}");
    for r in &rates {
        println!("  {:?}", r.iter().map(|v| (v * 1000.0).round() / 1000.0).collect::<Vec<_>>());
    }
    let c = RateMatrix::new(rates, mask).unwrap();
    let (oracle_a, _, oracle_v) = brute_force_joint(&c, &capacities, AssignMode::Optional).unwrap();
    println!("oracle value {oracle_v}  choices {:?}", oracle_a.choices());
    let out = dual_decomposition(&c, &capacities, &DualParams::default()).unwrap();
    println!(
        "dual value {} converged={} iters={} choices {:?}",
        out.value, out.converged, out.iterations,
        out.assignment.choices()
    );
    let last = out.trace.last().unwrap();
    println!("final lambda {:?}", last.lambda);
    println!("final xi {:?} loads {:?}", last.xi, last.assigned_per_bs);
    // How often each distinct assignment was visited, by utility.
    use std::collections::BTreeMap;
    let mut seen: BTreeMap<String, (usize, f64)> = BTreeMap::new();
    for rec in &out.trace {
        let key = format!("{:?}", rec.assigned_per_bs);
        let e = seen.entry(key).or_insert((0, rec.utility));
        e.0 += 1;
        e.1 = rec.utility;
    }
    for (k2, v) in seen {
        println!("loads {k2}: visited {} times, utility {}", v.0, v.1);
    }
}
