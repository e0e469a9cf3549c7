//! Per-slot schedule construction: the localized pick-and-compare scheduler
//! (DS) and the centralized greedy (GMS) and random (RA) baselines.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::geometry::{
    partition_links, BlockIndex, LinkId, LinkPartition, PartitionFrame, PartitionParams,
};
use crate::interference::{Schedule, SinrModel};
use crate::mwisl::{enumerate_mwisl, weight_class_mwisl, LocalInstance, DEFAULT_ENUMERATION_CAP};
use crate::traffic::QueueState;

/// Local solver used for each sub-square.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalSolver {
    /// Exact enumeration, for linear power.
    Enumerate { cap: usize },
    /// Weight-class greedy, for uniform power.
    WeightClass,
}

impl LocalSolver {
    /// The solver matching the model's power assignment.
    pub fn for_model(model: &SinrModel<'_>) -> Self {
        if model.power_model().is_uniform() {
            LocalSolver::WeightClass
        } else {
            LocalSolver::Enumerate {
                cap: DEFAULT_ENUMERATION_CAP,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchedulerState {
    /// Schedule emitted in the previous slot.
    pub prev_schedule: Schedule,
    pub slot: u64,
    pub params: PartitionParams,
    pub epsilon: f64,
}

impl SchedulerState {
    pub fn new(params: PartitionParams, epsilon: f64) -> Self {
        Self {
            prev_schedule: Schedule::new(),
            slot: 0,
            params,
            epsilon,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockChoice {
    KeptPrevious,
    AdoptedNew,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlotDecision {
    pub schedule: Schedule,
    pub per_block: BTreeMap<BlockIndex, BlockChoice>,
    /// Fresh local solutions `X_ij(t)`.
    pub new_candidates: BTreeMap<BlockIndex, Schedule>,
    pub partition: LinkPartition,
    /// Local solver failures, one line per affected block.
    pub notes: Vec<String>,
    /// Links handed to local solvers this slot.
    pub links_examined: usize,
}

/// Summed queue length of `s`.
pub fn weight_of(s: &Schedule, queues: &QueueState) -> u64 {
    s.iter().map(|l| queues.q[l]).sum()
}

struct BlockOutcome {
    block: BlockIndex,
    chosen: Schedule,
    candidate: Schedule,
    choice: BlockChoice,
    note: Option<String>,
}

/// One slot of pick-and-compare over the blocks of `frame`.
///
/// Each block solves its sub-square afresh, then keeps the surviving part of
/// the previous schedule only if that part is strictly heavier. Previous
/// links outside every super-subSquare are dropped.
pub fn localized_step(
    model: &SinrModel<'_>,
    queues: &QueueState,
    state: &SchedulerState,
    frame: &PartitionFrame,
    solver: LocalSolver,
) -> SlotDecision {
    let partition = partition_links(model.network(), frame);
    let blocks: Vec<_> = partition.blocks.iter().collect();
    let outcomes: Vec<BlockOutcome> = blocks
        .par_iter()
        .map(|&(&block, links)| {
            let mut note = None;
            let candidate = LocalInstance::from_queues(&links.sub_links, &queues.q, state.epsilon)
                .and_then(|inst| match solver {
                    LocalSolver::Enumerate { cap } => enumerate_mwisl(model, &inst, cap),
                    LocalSolver::WeightClass => Ok(weight_class_mwisl(model, &inst)),
                })
                .unwrap_or_else(|e| {
                    note = Some(format!("block ({}, {}): {e}", block.i, block.j));
                    Schedule::new()
                });
            let previous: Schedule = links
                .super_links
                .iter()
                .copied()
                .filter(|&l| state.prev_schedule.contains(l) && queues.q[l] > 0)
                .collect();
            let (chosen, choice) = if weight_of(&previous, queues) > weight_of(&candidate, queues) {
                (previous, BlockChoice::KeptPrevious)
            } else {
                (candidate.clone(), BlockChoice::AdoptedNew)
            };
            BlockOutcome {
                block,
                chosen,
                candidate,
                choice,
                note,
            }
        })
        .collect();

    let mut decision = SlotDecision {
        schedule: Schedule::new(),
        per_block: BTreeMap::new(),
        new_candidates: BTreeMap::new(),
        links_examined: partition.blocks.values().map(|b| b.sub_links.len()).sum(),
        partition,
        notes: Vec::new(),
    };
    for o in outcomes {
        decision.schedule.extend(&o.chosen);
        decision.per_block.insert(o.block, o.choice);
        decision.new_candidates.insert(o.block, o.candidate);
        decision.notes.extend(o.note);
    }
    decision
}

/// Stateful driver for [`localized_step`] that shifts the frame each slot.
#[derive(Debug, Clone)]
pub struct DistributedScheduler {
    pub state: SchedulerState,
    pub solver: LocalSolver,
}

impl DistributedScheduler {
    pub fn new(params: PartitionParams, epsilon: f64, solver: LocalSolver) -> Self {
        Self {
            state: SchedulerState::new(params, epsilon),
            solver,
        }
    }

    pub fn frame(&self) -> PartitionFrame {
        PartitionFrame::for_slot(self.state.params, self.state.slot)
    }

    pub fn step(&mut self, model: &SinrModel<'_>, queues: &QueueState) -> SlotDecision {
        let frame = self.frame();
        let decision = localized_step(model, queues, &self.state, &frame, self.solver);
        self.state.prev_schedule = decision.schedule.clone();
        self.state.slot += 1;
        decision
    }
}

fn first_fit(model: &SinrModel<'_>, order: impl IntoIterator<Item = LinkId>) -> Schedule {
    let mut current = Schedule::new();
    for l in order {
        let trial = current.with(l);
        if model.is_feasible(&trial) {
            current = trial;
        }
    }
    current
}

/// Greedy maximal scheduling: heaviest queue first, ties by id.
pub fn gms_step(model: &SinrModel<'_>, queues: &QueueState) -> Schedule {
    let mut order: Vec<LinkId> = (0..model.num_links())
        .filter(|&l| queues.q[l] > 0)
        .collect();
    order.sort_by(|&a, &b| queues.q[b].cmp(&queues.q[a]).then(a.cmp(&b)));
    first_fit(model, order)
}

/// Random first-fit over a uniformly shuffled order of backlogged links.
pub fn random_step<R: Rng + ?Sized>(
    model: &SinrModel<'_>,
    queues: &QueueState,
    rng: &mut R,
) -> Schedule {
    let mut order: Vec<LinkId> = (0..model.num_links())
        .filter(|&l| queues.q[l] > 0)
        .collect();
    order.shuffle(rng);
    first_fit(model, order)
}
