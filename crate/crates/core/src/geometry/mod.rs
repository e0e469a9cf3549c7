//! Plane geometry: node positions, directed links, topologies, and the
//! shifted grid partition used by the localized scheduler.

mod io;
mod partition;

pub use io::{read_topology_csv, write_topology_csv, NodeRole, TopologyRow};
pub use partition::{
    cell_of, partition_links, removed_strip_appearances, removed_strip_appearances_per_axis,
    shift_for_slot, BlockIndex, BlockLinks, CellIndex, LinkPartition, PartitionFrame,
    PartitionParams,
};

use crate::error::{Error, Result};

/// Dense link identifier, `0..|E|`.
pub type LinkId = usize;

/// Relative slack applied when checking `r <= length <= R`, so that links
/// generated exactly on the boundary survive coordinate round-off.
pub const LENGTH_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point2D) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// A directed link `(sender, receiver)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Link {
    pub id: LinkId,
    pub sender_node: usize,
    pub receiver_node: usize,
    pub sender: Point2D,
    pub receiver: Point2D,
    /// Euclidean sender-receiver distance.
    pub length: f64,
}

impl Link {
    pub fn new(
        id: LinkId,
        sender_node: usize,
        receiver_node: usize,
        sender: Point2D,
        receiver: Point2D,
    ) -> Self {
        Self {
            id,
            sender_node,
            receiver_node,
            sender,
            receiver,
            length: sender.distance(&receiver),
        }
    }
}

/// Immutable node set plus directed links whose lengths lie in `[r_min, r_max]`.
#[derive(Debug, Clone)]
pub struct NetworkTopology {
    nodes: Vec<Point2D>,
    links: Vec<Link>,
    r_min: f64,
    r_max: f64,
}

impl NetworkTopology {
    /// Builds a topology from node positions and `(sender, receiver)` node
    /// index pairs. Link ids are assigned in ascending sender node order.
    pub fn new(
        nodes: Vec<Point2D>,
        mut pairs: Vec<(usize, usize)>,
        r_min: f64,
        r_max: f64,
    ) -> Result<Self> {
        if !(r_min > 0.0 && r_min.is_finite() && r_max.is_finite() && r_min <= r_max) {
            return Err(Error::InvalidParams(format!(
                "link length range [{r_min}, {r_max}] must satisfy 0 < r <= R"
            )));
        }
        if let Some(idx) = nodes.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "node {idx} has non-finite coordinates"
            )));
        }
        pairs.sort_unstable();
        let mut links = Vec::with_capacity(pairs.len());
        for (id, &(s, r)) in pairs.iter().enumerate() {
            if s >= nodes.len() || r >= nodes.len() || s == r {
                return Err(Error::InvalidParams(format!(
                    "link ({s}, {r}) references an invalid node pair"
                )));
            }
            let link = Link::new(id, s, r, nodes[s], nodes[r]);
            if link.length < r_min * (1.0 - LENGTH_TOLERANCE)
                || link.length > r_max * (1.0 + LENGTH_TOLERANCE)
            {
                return Err(Error::LinkLengthOutOfRange {
                    link: id,
                    length: link.length,
                    r_min,
                    r_max,
                });
            }
            links.push(link);
        }
        Ok(Self {
            nodes,
            links,
            r_min,
            r_max,
        })
    }

    pub fn nodes(&self) -> &[Point2D] {
        &self.nodes
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link(&self, id: LinkId) -> &Link {
        &self.links[id]
    }

    pub fn num_links(&self) -> usize {
        self.links.len()
    }

    /// Minimum link length `r`.
    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    /// Maximum link length `R`; also the partition cell side.
    pub fn r_max(&self) -> f64 {
        self.r_max
    }
}
