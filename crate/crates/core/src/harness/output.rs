//! CSV emitters and the schedule file reader. Floats use Rust's shortest
//! round-trip formatting; lines end in LF.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use super::audit::AuditRow;
use super::run::{MetricsRecord, SweepRow};
use crate::error::{Error, Result};
use crate::geometry::LinkId;
use crate::interference::Schedule;

pub const RUN_HEADER: [&str; 6] = [
    "slot",
    "total_backlog",
    "active_links",
    "mean_I_out",
    "max_inside_affectness",
    "max_total_affectness",
];
pub const SWEEP_HEADER: [&str; 5] = ["rate", "seed", "final_backlog", "slope", "stable"];
pub const AUDIT_HEADER: [&str; 7] = [
    "slot",
    "link_id",
    "I_out",
    "eps_Imax",
    "inside_affectness",
    "total_affectness",
    "Imax_l",
];
pub const SCHEDULE_HEADER: [&str; 2] = ["slot", "link_id"];

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn emit<W: Write, const N: usize>(
    w: W,
    header: [&str; N],
    rows: impl IntoIterator<Item = [String; N]>,
) -> Result<()> {
    let mut out = writer(w);
    out.write_record(header)?;
    for row in rows {
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_run_csv<W: Write>(w: W, records: &[MetricsRecord]) -> Result<()> {
    emit(
        w,
        RUN_HEADER,
        records.iter().map(|r| {
            [
                r.slot.to_string(),
                r.total_backlog.to_string(),
                r.active_links.to_string(),
                r.mean_i_out.to_string(),
                r.max_inside_affectness.to_string(),
                r.max_total_affectness.to_string(),
            ]
        }),
    )
}

pub fn write_sweep_csv<W: Write>(w: W, rows: &[SweepRow]) -> Result<()> {
    emit(
        w,
        SWEEP_HEADER,
        rows.iter().map(|r| {
            [
                r.rate.to_string(),
                r.seed.to_string(),
                r.final_backlog.to_string(),
                r.slope.to_string(),
                r.stable.to_string(),
            ]
        }),
    )
}

pub fn write_audit_csv<W: Write>(w: W, rows: &[AuditRow]) -> Result<()> {
    emit(
        w,
        AUDIT_HEADER,
        rows.iter().map(|r| {
            [
                r.slot.to_string(),
                r.link_id.to_string(),
                r.i_out.to_string(),
                r.eps_i_max.to_string(),
                r.inside_affectness.to_string(),
                r.total_affectness.to_string(),
                r.i_max_l.to_string(),
            ]
        }),
    )
}

/// One `slot,link_id` row per active link, slots starting at 0.
pub fn write_schedule_csv<W: Write>(w: W, schedules: &[Schedule]) -> Result<()> {
    emit(
        w,
        SCHEDULE_HEADER,
        schedules
            .iter()
            .enumerate()
            .flat_map(|(t, s)| s.iter().map(move |l| [t.to_string(), l.to_string()])),
    )
}

/// Reads a schedule file into slot -> schedule. Slots with no rows are
/// absent from the map.
pub fn read_schedule_csv<R: Read>(r: R, n_links: usize) -> Result<BTreeMap<u64, Schedule>> {
    #[derive(serde::Deserialize)]
    struct Row {
        slot: u64,
        link_id: LinkId,
    }
    let mut out: BTreeMap<u64, Schedule> = BTreeMap::new();
    for (i, row) in csv::Reader::from_reader(r).deserialize::<Row>().enumerate() {
        let row = row.map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => Error::Csv(e),
            _ => Error::Parse(format!("schedule row {}: {e}", i + 1)),
        })?;
        if row.link_id >= n_links {
            return Err(Error::Parse(format!(
                "schedule row {}: link {} does not exist ({n_links} links)",
                i + 1,
                row.link_id
            )));
        }
        out.entry(row.slot).or_default().insert(row.link_id);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(slot: u64) -> MetricsRecord {
        MetricsRecord {
            slot,
            total_backlog: 10 * slot,
            active_links: 2,
            mean_i_out: 0.1,
            max_inside_affectness: 1e-5,
            max_total_affectness: 0.25,
        }
    }

    #[test]
    fn empty_run_is_header_only() {
        let mut buf = Vec::new();
        write_run_csv(&mut buf, &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "slot,total_backlog,active_links,mean_I_out,max_inside_affectness,max_total_affectness\n"
        );
    }

    #[test]
    fn three_records_four_lines() {
        let mut buf = Vec::new();
        write_run_csv(&mut buf, &[record(0), record(1), record(2)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(!text.contains('\r'));
        assert_eq!(text.lines().nth(2), Some("1,10,2,0.1,0.00001,0.25"));
    }

    #[test]
    fn floats_round_trip() {
        let x = 0.1 + 0.2;
        let mut buf = Vec::new();
        write_sweep_csv(
            &mut buf,
            &[SweepRow {
                rate: x,
                seed: 3,
                final_backlog: 9,
                slope: -1.5,
                stable: true,
            }],
        )
        .unwrap();
        let text = String::from_utf8(buf).unwrap();
        let field = text.lines().nth(1).unwrap().split(',').next().unwrap();
        assert_eq!(field.parse::<f64>().unwrap(), x);
        assert!(text.ends_with(",-1.5,true\n"));
    }

    #[test]
    fn schedule_round_trip() {
        let schedules = vec![
            Schedule::from_iter([3, 1]),
            Schedule::new(),
            Schedule::from_iter([0]),
        ];
        let mut buf = Vec::new();
        write_schedule_csv(&mut buf, &schedules).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "slot,link_id\n0,1\n0,3\n2,0\n"
        );
        let back = read_schedule_csv(&buf[..], 4).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[&0], schedules[0]);
        assert_eq!(back[&2], schedules[2]);
        assert!(read_schedule_csv(&buf[..], 2).is_err());
        assert!(read_schedule_csv("slot,link_id\nx,1\n".as_bytes(), 4).is_err());
    }
}
