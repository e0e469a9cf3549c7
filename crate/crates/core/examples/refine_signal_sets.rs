//! Splits a feasible (1-signal) set into p'-signal bins.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sinr_linksched::harness::{generate_network, ExperimentConfig};
use sinr_linksched::scheduler::gms_step;
use sinr_linksched::traffic::initial_queues;
use sinr_linksched::SinrModel;

fn main() -> sinr_linksched::Result<()> {
    let mut cfg = ExperimentConfig::default();
    cfg.topology.area = 30.0;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let net = generate_network(&mut rng, &cfg)?;
    let model = SinrModel::new(&net, cfg.power_model(), cfg.sinr)?;
    let queues = initial_queues(&mut rng, net.num_links());
    let s = gms_step(&model, &queues);
    println!("feasible set of {} links: {:?}", s.len(), s.ids());
    for eps in [0.3, 0.5, 0.8] {
        let p_prime = 1.0 / (1.0 - eps);
        let bins = model.refine_to_p_signal(&s, &queues.q, 1.0, p_prime)?;
        println!(
            "eps {eps}: {} bins (cap {}), sizes {:?}",
            bins.len(),
            (4.0 / (1.0f64 - eps).powi(2) - 1e-9).ceil(),
            bins.iter().map(|b| b.len()).collect::<Vec<_>>()
        );
        for bin in &bins {
            let worst = bin
                .iter()
                .map(|l| model.affectness(l, bin))
                .fold(0.0, f64::max);
            println!(
                "   {:?} max affectness {worst:.4} <= {:.4}",
                bin.ids(),
                1.0 / p_prime
            );
        }
    }
    Ok(())
}
