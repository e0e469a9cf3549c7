//! Shifted grid partition: which links land in sub-squares, which are
//! removed, and how often a cell falls in a removed strip.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sinr_linksched::geometry::{
    partition_links, removed_strip_appearances, removed_strip_appearances_per_axis, shift_for_slot,
    CellIndex, PartitionFrame, PartitionParams,
};
use sinr_linksched::harness::{generate_network, ExperimentConfig};

fn main() -> sinr_linksched::Result<()> {
    let cfg = ExperimentConfig::default();
    let net = generate_network(&mut ChaCha8Rng::seed_from_u64(1), &cfg)?;
    let params = PartitionParams::new(cfg.sinr.r_max, 6, 1)?;

    for t in [0u64, 1, 7, 35] {
        let frame = PartitionFrame::for_slot(params, t);
        let part = partition_links(&net, &frame);
        let in_sub: usize = part.blocks.values().map(|b| b.sub_links.len()).sum();
        println!(
            "slot {t:>2}: shift {:?}, {} occupied blocks, {in_sub} links in sub-squares, {} removed",
            frame.shift(),
            part.blocks.len(),
            part.removed.len()
        );
    }

    let k = params.k();
    let cycle: Vec<_> = (0..u64::from(k * k))
        .map(|t| shift_for_slot(t, k).unwrap())
        .collect();
    println!(
        "first shifts of the {}-slot cycle: {:?}",
        k * k,
        &cycle[..8]
    );

    for (k, m) in [(3, 1), (6, 1), (8, 3)] {
        let cell = CellIndex { i: 0, j: 0 };
        println!(
            "K={k} M={m}: removed-strip appearances {} (per axis {:?}, 2KM = {})",
            removed_strip_appearances(cell, k, m)?,
            removed_strip_appearances_per_axis(cell, k, m)?,
            2 * k * m
        );
    }
    Ok(())
}
