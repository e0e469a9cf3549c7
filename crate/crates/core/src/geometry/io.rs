//! Topology CSV: `node_id,x,y,role,peer_id`, one row per node. Each sender
//! row names its receiver as `peer_id` and vice versa.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{NetworkTopology, Point2D};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeRole {
    Sender,
    Receiver,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyRow {
    pub node_id: u64,
    pub x: f64,
    pub y: f64,
    pub role: NodeRole,
    pub peer_id: u64,
}

pub fn read_topology_csv<R: Read>(reader: R, r_min: f64, r_max: f64) -> Result<NetworkTopology> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows: BTreeMap<u64, TopologyRow> = BTreeMap::new();
    for row in rdr.deserialize() {
        let row: TopologyRow = row?;
        if let Some(prev) = rows.insert(row.node_id, row) {
            return Err(Error::Parse(format!("duplicate node_id {}", prev.node_id)));
        }
    }
    // Node indices follow ascending node_id, so link ids follow sender ids.
    let index: BTreeMap<u64, usize> = rows.keys().enumerate().map(|(i, &id)| (id, i)).collect();
    let nodes = rows.values().map(|r| Point2D::new(r.x, r.y)).collect();
    let mut pairs = Vec::new();
    for row in rows.values() {
        let peer = rows.get(&row.peer_id).ok_or_else(|| {
            Error::Parse(format!(
                "node {} names unknown peer {}",
                row.node_id, row.peer_id
            ))
        })?;
        if peer.peer_id != row.node_id || peer.role == row.role {
            return Err(Error::Parse(format!(
                "nodes {} and {} are not a sender/receiver pair",
                row.node_id, peer.node_id
            )));
        }
        if row.role == NodeRole::Sender {
            pairs.push((index[&row.node_id], index[&row.peer_id]));
        }
    }
    NetworkTopology::new(nodes, pairs, r_min, r_max)
}

pub fn write_topology_csv<W: Write>(net: &NetworkTopology, writer: W) -> Result<()> {
    let mut role: Vec<Option<(NodeRole, usize)>> = vec![None; net.nodes().len()];
    for link in net.links() {
        role[link.sender_node] = Some((NodeRole::Sender, link.receiver_node));
        role[link.receiver_node] = Some((NodeRole::Receiver, link.sender_node));
    }
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    for (id, (p, r)) in net.nodes().iter().zip(&role).enumerate() {
        let (role, peer) = r.ok_or_else(|| {
            Error::InvalidParams(format!("node {id} is not an endpoint of any link"))
        })?;
        wtr.serialize(TopologyRow {
            node_id: id as u64,
            x: p.x,
            y: p.y,
            role,
            peer_id: peer as u64,
        })?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "node_id,x,y,role,peer_id
0,0,0,sender,1
1,3,4,receiver,0
2,10,10,receiver,3
3,10,12,sender,2
";

    #[test]
    fn reads_pairs_in_sender_order() {
        let net = read_topology_csv(SAMPLE.as_bytes(), 1.0, 5.0).unwrap();
        assert_eq!(net.num_links(), 2);
        assert_eq!(net.link(0).sender_node, 0);
        assert_eq!(net.link(0).length, 5.0);
        assert_eq!(net.link(1).sender_node, 3);
        assert_eq!(net.link(1).receiver_node, 2);
    }

    #[test]
    fn round_trips_bit_exact() {
        let net = read_topology_csv(SAMPLE.as_bytes(), 1.0, 5.0).unwrap();
        let mut buf = Vec::new();
        write_topology_csv(&net, &mut buf).unwrap();
        let back = read_topology_csv(buf.as_slice(), 1.0, 5.0).unwrap();
        assert_eq!(net.links(), back.links());
        assert!(String::from_utf8(buf)
            .unwrap()
            .starts_with("node_id,x,y,role,peer_id\n"));
    }

    #[test]
    fn rejects_inconsistent_pairs() {
        let bad = "node_id,x,y,role,peer_id\n0,0,0,sender,1\n1,3,4,sender,0\n";
        assert!(read_topology_csv(bad.as_bytes(), 1.0, 5.0).is_err());
        let dangling = "node_id,x,y,role,peer_id\n0,0,0,sender,7\n";
        assert!(read_topology_csv(dangling.as_bytes(), 1.0, 5.0).is_err());
    }
}
