use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::audit::{audit_schedule, AuditRow, AuditSummary};
use super::config::{Algorithm, ExperimentConfig, PartitionPlan};
use super::generate::generate_network;
use crate::error::Result;
use crate::geometry::{partition_links, NetworkTopology, PartitionFrame};
use crate::interference::{Schedule, SinrModel};
use crate::scheduler::{gms_step, random_step, DistributedScheduler, LocalSolver};
use crate::traffic::{
    backlog_slope, initial_queues, sample_arrivals, update_queues, ArrivalConfig,
};

// Independent random streams derived from one seed.
const TOPOLOGY_STREAM: u64 = 0;
const TRAFFIC_STREAM: u64 = 1;
const SCHEDULER_STREAM: u64 = 2;

/// Seeded generator for one of the run's independent streams.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Topology for `seed`, drawn from its own stream.
pub fn topology_for_seed(cfg: &ExperimentConfig, seed: u64) -> Result<NetworkTopology> {
    generate_network(&mut stream_rng(seed, TOPOLOGY_STREAM), cfg)
}

/// One slot of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsRecord {
    pub slot: u64,
    /// Total backlog after this slot's service and arrivals.
    pub total_backlog: u64,
    pub active_links: usize,
    pub mean_i_out: f64,
    pub max_inside_affectness: f64,
    pub max_total_affectness: f64,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub plan: PartitionPlan,
    pub records: Vec<MetricsRecord>,
    /// Emitted schedules, one per slot.
    pub schedules: Vec<Schedule>,
    /// Per link audit rows; filled only when auditing is enabled.
    pub audit_rows: Vec<AuditRow>,
    pub summary: AuditSummary,
    /// Local solver failures reported by DS.
    pub notes: Vec<String>,
    /// Links handed to DS local solvers, summed over slots.
    pub links_examined: u64,
}

impl RunOutput {
    pub fn backlog_series(&self) -> Vec<u64> {
        self.records.iter().map(|r| r.total_backlog).collect()
    }

    /// Violations of properties the configuration guarantees: feasibility
    /// always, and the audit bounds for DS with a derived margin.
    pub fn guaranteed_violations(&self, cfg: &ExperimentConfig) -> u64 {
        let bounds = if cfg.bounds_guaranteed() {
            self.summary.bound_violations()
        } else {
            0
        };
        self.summary.infeasible_slots + bounds
    }
}

/// Runs `cfg.slots` slots on `net` at arrival rate `rate`.
///
/// Each slot: shift the frame, schedule, audit against the slot's frame,
/// draw arrivals, update queues, record. Every algorithm is audited against
/// the same frame sequence so the metrics are comparable.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    net: &NetworkTopology,
    rate: f64,
    seed: u64,
) -> Result<RunOutput> {
    cfg.validate()?;
    let model = SinrModel::new(net, cfg.power_model(), cfg.sinr)?;
    let plan = cfg.partition_plan()?;
    let arrivals = ArrivalConfig::new(rate, cfg.a_max, seed)?;
    let n = net.num_links();

    let mut traffic_rng = stream_rng(seed, TRAFFIC_STREAM);
    let mut sched_rng = stream_rng(seed, SCHEDULER_STREAM);
    let mut queues = initial_queues(&mut traffic_rng, n);
    let mut ds =
        DistributedScheduler::new(plan.params, cfg.epsilon, LocalSolver::for_model(&model));

    let mut out = RunOutput {
        plan,
        records: Vec::with_capacity(cfg.slots as usize),
        schedules: Vec::with_capacity(cfg.slots as usize),
        audit_rows: Vec::new(),
        summary: AuditSummary::default(),
        notes: Vec::new(),
        links_examined: 0,
    };
    for t in 0..cfg.slots {
        let (schedule, partition) = match cfg.algorithm {
            Algorithm::Ds => {
                let d = ds.step(&model, &queues);
                out.links_examined += d.links_examined as u64;
                out.notes
                    .extend(d.notes.into_iter().map(|n| format!("slot {t}: {n}")));
                (d.schedule, d.partition)
            }
            Algorithm::Gms | Algorithm::Ra => {
                let s = if cfg.algorithm == Algorithm::Gms {
                    gms_step(&model, &queues)
                } else {
                    random_step(&model, &queues, &mut sched_rng)
                };
                (
                    s,
                    partition_links(net, &PartitionFrame::for_slot(plan.params, t)),
                )
            }
        };
        let rows = audit_schedule(&model, &schedule, &partition, cfg.epsilon, t);
        out.summary
            .record(model.is_feasible(&schedule), &rows, cfg.epsilon);

        let a = sample_arrivals(&arrivals, &mut traffic_rng, n);
        queues = update_queues(&queues, &schedule, &a);

        let mean_i_out = if rows.is_empty() {
            0.0
        } else {
            rows.iter().map(|r| r.i_out).sum::<f64>() / rows.len() as f64
        };
        out.records.push(MetricsRecord {
            slot: t,
            total_backlog: queues.total(),
            active_links: schedule.len(),
            mean_i_out,
            max_inside_affectness: rows.iter().map(|r| r.inside_affectness).fold(0.0, f64::max),
            max_total_affectness: rows.iter().map(|r| r.total_affectness).fold(0.0, f64::max),
        });
        if cfg.audit {
            out.audit_rows.extend(rows);
        }
        out.schedules.push(schedule);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub rate: f64,
    pub seed: u64,
    pub final_backlog: u64,
    pub slope: f64,
    pub stable: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// Largest rate at which every seed is stable.
    pub supportable_rate: Option<f64>,
    /// Rates judged unstable although some higher rate was stable.
    pub anomalies: Vec<f64>,
}

/// Stable iff the trailing-window slope is below the per-link threshold
/// scaled by the number of links.
pub fn is_stable(cfg: &ExperimentConfig, series: &[u64], n_links: usize) -> (f64, bool) {
    let window = ((series.len() as f64 * cfg.stability_window).ceil() as usize).max(2);
    let slope = backlog_slope(series, window);
    (slope, slope < cfg.stability_threshold * n_links as f64)
}

/// Runs every `(rate, seed)` pair, `cfg.seeds` seeds from `cfg.seed`.
///
/// With `net` given all seeds share that topology and only traffic varies;
/// otherwise each seed draws its own topology.
pub fn sweep_rates(
    cfg: &ExperimentConfig,
    net: Option<&NetworkTopology>,
    rates: &[f64],
) -> Result<SweepResult> {
    let seeds: Vec<u64> = (0..u64::from(cfg.seeds)).map(|i| cfg.seed + i).collect();
    let nets: Vec<NetworkTopology> = match net {
        Some(n) => vec![n.clone(); seeds.len()],
        None => seeds
            .iter()
            .map(|&s| topology_for_seed(cfg, s))
            .collect::<Result<_>>()?,
    };
    let jobs: Vec<(f64, usize)> = rates
        .iter()
        .flat_map(|&r| (0..seeds.len()).map(move |i| (r, i)))
        .collect();
    let rows: Vec<SweepRow> = jobs
        .par_iter()
        .map(|&(rate, i)| {
            let out = run_experiment(cfg, &nets[i], rate, seeds[i])?;
            let series = out.backlog_series();
            let (slope, stable) = is_stable(cfg, &series, nets[i].num_links());
            Ok(SweepRow {
                rate,
                seed: seeds[i],
                final_backlog: *series.last().unwrap_or(&0),
                slope,
                stable,
            })
        })
        .collect::<Result<_>>()?;

    let stable_at: Vec<(f64, bool)> = rates
        .iter()
        .map(|&r| {
            (
                r,
                rows.iter()
                    .filter(|row| row.rate == r)
                    .all(|row| row.stable),
            )
        })
        .collect();
    let supportable_rate = stable_at.iter().rev().find(|&&(_, s)| s).map(|&(r, _)| r);
    let anomalies = stable_at
        .iter()
        .enumerate()
        .filter(|&(i, &(_, s))| !s && stable_at[i + 1..].iter().any(|&(_, later)| later))
        .map(|(_, &(r, _))| r)
        .collect();
    Ok(SweepResult {
        rows,
        supportable_rate,
        anomalies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::{MarginMode, PowerKind};

    fn small(algo: Algorithm, kind: PowerKind) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::desk(kind);
        cfg.topology.n_nodes = 40;
        cfg.topology.area = 40.0;
        cfg.slots = 300;
        cfg.algorithm = algo;
        cfg
    }

    #[test]
    fn zero_rate_drains() {
        let mut cfg = small(Algorithm::Gms, PowerKind::Linear);
        cfg.slots = 3000;
        let net = topology_for_seed(&cfg, 1).unwrap();
        let out = run_experiment(&cfg, &net, 0.0, 1).unwrap();
        let series = out.backlog_series();
        let first_zero = series.iter().position(|&b| b == 0).expect("drains");
        assert!(series[first_zero..].iter().all(|&b| b == 0));
        assert_eq!(out.summary.infeasible_slots, 0);
    }

    #[test]
    fn overload_grows() {
        let cfg = small(Algorithm::Gms, PowerKind::Uniform);
        let net = topology_for_seed(&cfg, 2).unwrap();
        let out = run_experiment(&cfg, &net, 5.0, 2).unwrap();
        let (slope, stable) = is_stable(&cfg, &out.backlog_series(), net.num_links());
        assert!(slope > 0.0 && !stable);
    }

    #[test]
    fn ds_auto_margin_passes_audit() {
        for kind in [PowerKind::Linear, PowerKind::Uniform] {
            let mut cfg = small(Algorithm::Ds, kind);
            cfg.audit = true;
            let net = topology_for_seed(&cfg, 3).unwrap();
            let out = run_experiment(&cfg, &net, 0.1, 3).unwrap();
            assert_eq!(out.guaranteed_violations(&cfg), 0, "{:?}", out.summary);
            assert_eq!(out.audit_rows.len() as u64, out.summary.link_slots);
            assert!(out.notes.is_empty());
        }
    }

    #[test]
    fn runs_are_deterministic() {
        for algo in [Algorithm::Ds, Algorithm::Gms, Algorithm::Ra] {
            let mut cfg = small(algo, PowerKind::Linear);
            cfg.margin = MarginMode::Explicit(1);
            let net = topology_for_seed(&cfg, 4).unwrap();
            let a = run_experiment(&cfg, &net, 0.1, 4).unwrap();
            let b = run_experiment(&cfg, &net, 0.1, 4).unwrap();
            assert_eq!(a.records, b.records);
            assert_eq!(a.schedules, b.schedules);
        }
    }

    #[test]
    fn sweep_reports_rows_in_order() {
        let mut cfg = small(Algorithm::Gms, PowerKind::Linear);
        cfg.seeds = 2;
        let res = sweep_rates(&cfg, None, &[0.0, 0.05, 10.0]).unwrap();
        assert_eq!(res.rows.len(), 6);
        assert_eq!(
            res.rows
                .iter()
                .map(|r| (r.rate, r.seed))
                .collect::<Vec<_>>(),
            vec![
                (0.0, 1),
                (0.0, 2),
                (0.05, 1),
                (0.05, 2),
                (10.0, 1),
                (10.0, 2)
            ]
        );
        assert!(res.rows[0].stable && res.rows[1].stable);
        assert!(!res.rows[4].stable);
        assert!(res.supportable_rate.is_some_and(|r| r < 10.0));
        assert!(res.anomalies.is_empty());
    }
}
