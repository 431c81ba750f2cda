//! Solves planted sparse instances of growing size and prints segment stats.
//!
//! `cargo run --release -p anfsat-core --example scaling -- [n] [m] [k] [seeds]`

use std::time::Instant;

use anfsat_core::generator::{generate_system, random_assignment, GenSpec};
use anfsat_core::{boolean_solve, SolverConfig};

fn main() {
    let args: Vec<u32> = std::env::args().skip(1).map(|a| a.parse().expect("integer")).collect();
    let n = args.first().copied().unwrap_or(48);
    let m = args.get(1).copied().unwrap_or(64);
    let k = args.get(2).copied().unwrap_or(4);
    let seeds = args.get(3).copied().unwrap_or(10);
    for workers in [1, 0] {
        for seed in 0..u64::from(seeds) {
            let spec = GenSpec::new(n, m, k, seed).planted(random_assignment(n, seed));
            let formula = generate_system(&spec).expect("valid spec");
            let start = Instant::now();
            let r = boolean_solve(&formula, &SolverConfig::default().with_workers(workers));
            println!(
                "workers={workers} seed={seed} terms={} N={} N_seq={} pruned={} time={:?}",
                r.implicants.len(),
                r.stats.segments_total,
                r.stats.longest_chain,
                r.stats.tasks_pruned,
                start.elapsed()
            );
        }
    }
}
