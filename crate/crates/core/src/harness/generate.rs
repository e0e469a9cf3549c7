use rand::Rng;

use super::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::geometry::{NetworkTopology, Point2D, LENGTH_TOLERANCE};
use crate::interference::tolerable_interference;

/// Resampling attempts allowed per link before giving up.
pub const REJECTION_BUDGET: usize = 10_000;

/// Random deployment: `n/2` senders uniform in the area, each receiver
/// uniform (by area) in the annulus `r <= d <= R` around its sender.
///
/// A draw is resampled until its length lies in `[r, R]` and the link can
/// succeed with no interference. Node `2k` sends on link `k` to node `2k + 1`.
pub fn generate_network<R: Rng + ?Sized>(
    rng: &mut R,
    cfg: &ExperimentConfig,
) -> Result<NetworkTopology> {
    cfg.validate()?;
    let sp = &cfg.sinr;
    let pm = cfg.power_model();
    let (r, big_r) = (sp.r_min, sp.r_max);
    let n_links = cfg.topology.n_nodes / 2;
    let side = cfg.topology.area;
    let mut nodes = Vec::with_capacity(2 * n_links);
    let mut pairs = Vec::with_capacity(n_links);
    for k in 0..n_links {
        let mut attempts = 0;
        let (s, d) = loop {
            if attempts == REJECTION_BUDGET {
                return Err(Error::GenerationFailed(format!(
                    "link {k}: no admissible receiver after {REJECTION_BUDGET} draws"
                )));
            }
            attempts += 1;
            let s = Point2D::new(rng.random_range(0.0..side), rng.random_range(0.0..side));
            let u: f64 = rng.random();
            let len = (u * (big_r * big_r - r * r) + r * r).sqrt();
            let theta = rng.random_range(0.0..std::f64::consts::TAU);
            let d = Point2D::new(s.x + len * theta.cos(), s.y + len * theta.sin());
            let actual = s.distance(&d);
            let in_range = actual >= r * (1.0 - LENGTH_TOLERANCE)
                && actual <= big_r * (1.0 + LENGTH_TOLERANCE);
            if in_range && tolerable_interference(sp, &pm, actual).is_ok() {
                break (s, d);
            }
        };
        nodes.push(s);
        nodes.push(d);
        pairs.push((2 * k, 2 * k + 1));
    }
    NetworkTopology::new(nodes, pairs, r, big_r)
}
