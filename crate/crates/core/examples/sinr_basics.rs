//! Signal, interference, SINR and affectness for a handful of links.

use sinr_linksched::{NetworkTopology, Point2D, PowerModel, Schedule, SinrModel, SinrParams};

fn main() -> sinr_linksched::Result<()> {
    let nodes = vec![
        Point2D::new(0.0, 0.0),
        Point2D::new(2.0, 0.0),
        Point2D::new(0.0, 6.0),
        Point2D::new(3.0, 6.0),
        Point2D::new(4.0, 1.0),
        Point2D::new(4.0, 2.5),
    ];
    let net = NetworkTopology::new(nodes, vec![(0, 1), (2, 3), (4, 5)], 1.0, 5.0)?;
    let params = SinrParams::new(1.0, 3.0, 1.0, 1e-4, 1.0, 5.0)?;
    let power = PowerModel::Linear {
        c: 1.0,
        beta: 2.0,
        p_max: 25.0,
    };
    let model = SinrModel::new(&net, power, params)?;

    let all: Schedule = (0..net.num_links()).collect();
    for link in net.links() {
        println!(
            "link {}: length {:.3}, power {:.3}, signal {:.4}, SINR with all others {:.3}, affectness {:.3}",
            link.id,
            link.length,
            model.power(link.id),
            model.signal(link.id),
            model.sinr_of(link.id, &all),
            model.affectness(link.id, &all),
        );
    }
    println!("all three together feasible: {}", model.is_feasible(&all));
    for drop in 0..3 {
        let s: Schedule = (0..3).filter(|&l| l != drop).collect();
        println!("without link {drop}: feasible {}", model.is_feasible(&s));
    }
    println!("network I_max = {:.5}", model.network_i_max());
    Ok(())
}
