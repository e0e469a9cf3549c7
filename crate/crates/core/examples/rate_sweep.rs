//! Supportable arrival rate of DS and GMS, linear and uniform power.

use sinr_linksched::harness::{sweep_rates, Algorithm, ExperimentConfig, MarginMode, PowerKind};

fn main() -> sinr_linksched::Result<()> {
    let rates: Vec<f64> = (1..=12).map(|i| f64::from(i) / 20.0).collect();
    for (kind, k) in [(PowerKind::Linear, 6), (PowerKind::Uniform, 9)] {
        let mut found = Vec::new();
        for algo in [Algorithm::Ds, Algorithm::Gms] {
            let mut cfg = ExperimentConfig::desk(kind);
            cfg.algorithm = algo;
            cfg.margin = MarginMode::Explicit(1);
            cfg.k = Some(k);
            let res = sweep_rates(&cfg, None, &rates)?;
            for r in &rates {
                let stable = res
                    .rows
                    .iter()
                    .filter(|row| row.rate == *r && row.stable)
                    .count();
                print!("{r}:{stable}/{} ", cfg.seeds);
            }
            println!(
                "\n{kind:?} {algo}: supportable rate {:?}",
                res.supportable_rate
            );
            found.push(res.supportable_rate.unwrap_or(0.0));
        }
        println!("{kind:?} DS/GMS = {:.2}\n", found[0] / found[1]);
    }
    Ok(())
}
