use crate::geometry::{LinkId, LinkPartition};
use crate::interference::{at_most, Schedule, SinrModel};

/// Per active link interference breakdown for one slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditRow {
    pub slot: u64,
    pub link_id: LinkId,
    /// Interference from active links outside this link's super-subSquare.
    pub i_out: f64,
    pub eps_i_max: f64,
    /// Affectness from active links in the same super-subSquare.
    pub inside_affectness: f64,
    pub total_affectness: f64,
    pub i_max_l: f64,
}

impl AuditRow {
    pub fn outside_ok(&self) -> bool {
        at_most(self.i_out, self.eps_i_max)
    }

    pub fn inside_ok(&self, epsilon: f64) -> bool {
        at_most(self.inside_affectness, 1.0 - epsilon)
    }

    pub fn total_ok(&self) -> bool {
        at_most(self.total_affectness, 1.0)
    }
}

/// Violation counts over any number of audited slots.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AuditSummary {
    pub slots: u64,
    pub link_slots: u64,
    pub infeasible_slots: u64,
    pub outside_violations: u64,
    pub inside_violations: u64,
    pub total_violations: u64,
}

impl AuditSummary {
    pub fn record(&mut self, feasible: bool, rows: &[AuditRow], epsilon: f64) {
        self.slots += 1;
        self.link_slots += rows.len() as u64;
        self.infeasible_slots += u64::from(!feasible);
        for r in rows {
            self.outside_violations += u64::from(!r.outside_ok());
            self.inside_violations += u64::from(!r.inside_ok(epsilon));
            self.total_violations += u64::from(!r.total_ok());
        }
    }

    pub fn merge(&mut self, other: &AuditSummary) {
        self.slots += other.slots;
        self.link_slots += other.link_slots;
        self.infeasible_slots += other.infeasible_slots;
        self.outside_violations += other.outside_violations;
        self.inside_violations += other.inside_violations;
        self.total_violations += other.total_violations;
    }

    pub fn bound_violations(&self) -> u64 {
        self.outside_violations + self.inside_violations + self.total_violations
    }
}

/// Audits every link of `schedule` against the blocks of `partition`.
///
/// A link in no super-subSquare has no block-mates: all interference it
/// receives counts as outside.
pub fn audit_schedule(
    model: &SinrModel<'_>,
    schedule: &Schedule,
    partition: &LinkPartition,
    epsilon: f64,
    slot: u64,
) -> Vec<AuditRow> {
    let eps_i_max = epsilon * model.network_i_max();
    schedule
        .iter()
        .map(|l| {
            let home = partition.block_of(l);
            let inside: Schedule = schedule
                .iter()
                .filter(|&w| home.is_some() && partition.block_of(w) == home)
                .collect();
            let outside: Schedule = schedule
                .iter()
                .filter(|&w| w != l && !inside.contains(w))
                .collect();
            AuditRow {
                slot,
                link_id: l,
                i_out: model.interference_at(l, &outside),
                eps_i_max,
                inside_affectness: model.affectness(l, &inside),
                total_affectness: model.affectness(l, schedule),
                i_max_l: model.max_tolerable_interference(l),
            }
        })
        .collect()
}
