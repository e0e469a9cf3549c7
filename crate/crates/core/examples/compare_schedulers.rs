//! DS, GMS and RA on the same desk-scale topology and traffic.
//!
//! `cargo run --release --example compare_schedulers -- [rate] [M]`

use sinr_linksched::harness::{
    is_stable, run_experiment, topology_for_seed, Algorithm, ExperimentConfig, MarginMode,
};

fn main() -> sinr_linksched::Result<()> {
    let mut args = std::env::args().skip(1);
    let rate: f64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(0.2);
    let margin = match args.next() {
        Some(m) => m.parse()?,
        None => MarginMode::Explicit(1),
    };
    let mut cfg = ExperimentConfig {
        margin,
        ..ExperimentConfig::default()
    };
    let net = topology_for_seed(&cfg, cfg.seed)?;
    println!(
        "{} links, rate {rate}, {} slots",
        net.num_links(),
        cfg.slots
    );
    for algo in [Algorithm::Ds, Algorithm::Gms, Algorithm::Ra] {
        cfg.algorithm = algo;
        let out = run_experiment(&cfg, &net, rate, cfg.seed)?;
        let series = out.backlog_series();
        let (slope, stable) = is_stable(&cfg, &series, net.num_links());
        let mean_active = out.records.iter().map(|r| r.active_links).sum::<usize>() as f64
            / out.records.len() as f64;
        println!(
            "{algo}: final backlog {:>6}, slope {slope:>8.3}, stable {stable}, mean active {mean_active:.2}, infeasible slots {}",
            series.last().unwrap(),
            out.summary.infeasible_slots
        );
    }
    Ok(())
}
