//! The local solvers on one random sub-square instance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sinr_linksched::mwisl::{
    brute_force_oracle, enumerate_mwisl, shortest_first_isl, weight_class_mwisl, LocalInstance,
    DEFAULT_ENUMERATION_CAP,
};
use sinr_linksched::{NetworkTopology, Point2D, PowerModel, Schedule, SinrModel, SinrParams};

fn main() -> sinr_linksched::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let n = 12;
    let mut nodes = Vec::new();
    let mut pairs = Vec::new();
    for k in 0..n {
        let s = Point2D::new(rng.random_range(0.0..15.0), rng.random_range(0.0..15.0));
        let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let len = rng.random_range(1.0..3.0);
        nodes.push(s);
        nodes.push(Point2D::new(
            s.x + len * theta.cos(),
            s.y + len * theta.sin(),
        ));
        pairs.push((2 * k, 2 * k + 1));
    }
    let net = NetworkTopology::new(nodes, pairs, 1.0, 3.0)?;
    let params = SinrParams::new(1.0, 3.0, 1.0, 1e-4, 1.0, 3.0)?;
    let weights: Vec<u64> = (0..n).map(|_| rng.random_range(1..300)).collect();
    let inst = LocalInstance::new((0..n).collect(), weights.clone(), 1.0 - 0.5)?;
    let w = |s: &Schedule| s.iter().map(|l| weights[l]).sum::<u64>();
    println!("weights {weights:?}, threshold {}", inst.threshold);

    for (name, power) in [
        (
            "linear",
            PowerModel::Linear {
                c: 1.0,
                beta: 2.0,
                p_max: 9.0,
            },
        ),
        ("uniform", PowerModel::Uniform { p: 1.0 }),
    ] {
        let model = SinrModel::new(&net, power, params)?;
        let exact = enumerate_mwisl(&model, &inst, DEFAULT_ENUMERATION_CAP)?;
        let (oracle, oracle_w) = brute_force_oracle(&model, &inst)?;
        let classes = weight_class_mwisl(&model, &inst);
        let greedy = shortest_first_isl(&model, &inst.links, &weights, inst.threshold);
        println!("{name}:");
        println!("  enumeration  {:?} weight {}", exact.ids(), w(&exact));
        println!("  oracle       {:?} weight {oracle_w}", oracle.ids());
        println!("  weight class {:?} weight {}", classes.ids(), w(&classes));
        println!("  shortest-first (unweighted) {:?}", greedy.ids());
    }
    Ok(())
}
