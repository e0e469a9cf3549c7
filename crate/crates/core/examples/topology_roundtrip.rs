//! Writes a generated topology as CSV and reads it back.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sinr_linksched::geometry::{read_topology_csv, write_topology_csv};
use sinr_linksched::harness::{generate_network, ExperimentConfig};

fn main() -> sinr_linksched::Result<()> {
    let mut cfg = ExperimentConfig::default();
    cfg.topology.n_nodes = 8;
    cfg.topology.area = 20.0;
    let net = generate_network(&mut ChaCha8Rng::seed_from_u64(2), &cfg)?;
    let mut buf = Vec::new();
    write_topology_csv(&net, &mut buf)?;
    print!("{}", String::from_utf8_lossy(&buf));
    let back = read_topology_csv(&buf[..], cfg.sinr.r_min, cfg.sinr.r_max)?;
    for (a, b) in net.links().iter().zip(back.links()) {
        println!("link {}: length {} -> {}", a.id, a.length, b.length);
    }
    Ok(())
}
