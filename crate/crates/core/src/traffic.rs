//! Arrivals, queue dynamics and backlog metrics.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::interference::Schedule;

pub const DEFAULT_A_MAX: u64 = 50;
pub const INITIAL_QUEUE_RANGE: (u64, u64) = (100, 300);

/// Per-link packet backlogs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueueState {
    pub q: Vec<u64>,
}

impl QueueState {
    pub fn new(q: Vec<u64>) -> Self {
        Self { q }
    }

    pub fn zeros(n_links: usize) -> Self {
        Self {
            q: vec![0; n_links],
        }
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn total(&self) -> u64 {
        total_backlog(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrivalConfig {
    /// Mean packets per slot per link.
    pub lambda: f64,
    /// Per-slot cap on arrivals at one link.
    pub a_max: u64,
    pub seed: u64,
}

impl ArrivalConfig {
    pub fn new(lambda: f64, a_max: u64, seed: u64) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "arrival rate {lambda} must be finite and >= 0"
            )));
        }
        if a_max < 1 {
            return Err(Error::InvalidParams("a_max must be at least 1".into()));
        }
        Ok(Self {
            lambda,
            a_max,
            seed,
        })
    }
}

/// Independent Poisson(lambda) draws per link, each truncated at `a_max`.
pub fn sample_arrivals<R: Rng + ?Sized>(
    cfg: &ArrivalConfig,
    rng: &mut R,
    n_links: usize,
) -> Vec<u64> {
    if cfg.lambda == 0.0 {
        return vec![0; n_links];
    }
    let dist = Poisson::new(cfg.lambda).expect("validated rate");
    (0..n_links)
        .map(|_| (dist.sample(rng) as u64).min(cfg.a_max))
        .collect()
}

/// `q'_l = max(0, q_l - [l in s]) + a_l`.
pub fn update_queues(q: &QueueState, s: &Schedule, a: &[u64]) -> QueueState {
    assert_eq!(
        q.len(),
        a.len(),
        "queue and arrival vectors differ in length"
    );
    let q =
        q.q.iter()
            .zip(a)
            .enumerate()
            .map(|(l, (&ql, &al))| ql.saturating_sub(u64::from(s.contains(l))) + al)
            .collect();
    QueueState { q }
}

/// Independent uniform draws from `[100, 300]`.
pub fn initial_queues<R: Rng + ?Sized>(rng: &mut R, n_links: usize) -> QueueState {
    let (lo, hi) = INITIAL_QUEUE_RANGE;
    QueueState {
        q: (0..n_links).map(|_| rng.random_range(lo..=hi)).collect(),
    }
}

pub fn total_backlog(q: &QueueState) -> u64 {
    q.q.iter().sum()
}

/// Least-squares slope of the last `window` samples, in packets per slot.
/// Returns 0 when fewer than two samples are available.
pub fn backlog_slope(series: &[u64], window: usize) -> f64 {
    let tail = &series[series.len() - window.min(series.len())..];
    let n = tail.len();
    if n < 2 {
        return 0.0;
    }
    let nf = n as f64;
    let x_mean = (nf - 1.0) / 2.0;
    let y_mean = tail.iter().map(|&y| y as f64).sum::<f64>() / nf;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, &y) in tail.iter().enumerate() {
        let dx = i as f64 - x_mean;
        sxy += dx * (y as f64 - y_mean);
        sxx += dx * dx;
    }
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn update_examples() {
        let served = Schedule::from_iter([0]);
        let q = QueueState::new(vec![5]);
        assert_eq!(update_queues(&q, &served, &[2]).q, vec![6]);
        assert_eq!(
            update_queues(&QueueState::new(vec![0]), &served, &[0]).q,
            vec![0]
        );
        assert_eq!(
            update_queues(&QueueState::new(vec![3]), &Schedule::new(), &[1]).q,
            vec![4]
        );
    }

    #[test]
    fn arrivals_edge_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let zero = ArrivalConfig::new(0.0, 50, 1).unwrap();
        assert_eq!(sample_arrivals(&zero, &mut rng, 7), vec![0; 7]);
        let capped = ArrivalConfig::new(3.0, 1, 1).unwrap();
        assert!(sample_arrivals(&capped, &mut rng, 1000)
            .iter()
            .all(|&a| a <= 1));
        assert!(ArrivalConfig::new(-1.0, 50, 0).is_err());
        assert!(ArrivalConfig::new(1.0, 0, 0).is_err());
    }

    #[test]
    fn arrival_mean_matches_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let cfg = ArrivalConfig::new(0.2, 50, 42).unwrap();
        let draws = sample_arrivals(&cfg, &mut rng, 1_000_000);
        let mean = draws.iter().sum::<u64>() as f64 / draws.len() as f64;
        assert!((mean - 0.2).abs() < 0.01 * 0.2, "mean {mean}");
    }

    #[test]
    fn same_seed_same_stream() {
        let cfg = ArrivalConfig::new(1.5, 50, 3).unwrap();
        let a = sample_arrivals(&cfg, &mut ChaCha8Rng::seed_from_u64(3), 500);
        let b = sample_arrivals(&cfg, &mut ChaCha8Rng::seed_from_u64(3), 500);
        assert_eq!(a, b);
    }

    #[test]
    fn backlog_examples() {
        assert_eq!(total_backlog(&QueueState::new(vec![100; 250])), 25_000);
        assert_eq!(backlog_slope(&[7; 10], 10), 0.0);
        let line: Vec<u64> = (0..50).map(|t| 3 * t + 4).collect();
        assert!((backlog_slope(&line, 20) - 3.0).abs() < 1e-12);
        assert_eq!(backlog_slope(&[5], 4), 0.0);
    }

    #[test]
    fn initial_queues_in_range() {
        let q = initial_queues(&mut ChaCha8Rng::seed_from_u64(0), 2000);
        assert!(q.q.iter().all(|&v| (100..=300).contains(&v)));
        assert!(q.q.contains(&100) || q.q.contains(&300) || q.q.len() == 2000);
    }

    proptest! {
        #[test]
        fn update_clamps_and_conserves(q in proptest::collection::vec(0u64..20, 1..30),
                                       seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = q.len();
            let s: Schedule = (0..n).filter(|_| rng.random_bool(0.5)).collect();
            let a: Vec<u64> = (0..n).map(|_| rng.random_range(0..5)).collect();
            let next = update_queues(&QueueState::new(q.clone()), &s, &a);
            for l in 0..n {
                let served = u64::from(s.contains(l));
                prop_assert_eq!(next.q[l], q[l].saturating_sub(served) + a[l]);
                if q[l] >= 1 {
                    prop_assert_eq!(next.q[l] as i64 - q[l] as i64, a[l] as i64 - served as i64);
                }
            }
        }

        #[test]
        fn idle_backlog_never_decreases(seed in any::<u64>(), lambda in 0.0f64..3.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let cfg = ArrivalConfig::new(lambda, 50, seed).unwrap();
            let mut q = initial_queues(&mut rng, 20);
            for _ in 0..20 {
                let a = sample_arrivals(&cfg, &mut rng, 20);
                let next = update_queues(&q, &Schedule::new(), &a);
                prop_assert!(next.total() >= q.total());
                q = next;
            }
        }
    }
}
