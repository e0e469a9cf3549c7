//! Shifted square partition of the plane.
//!
//! Cells are half-open squares `[i*d, (i+1)*d) x [j*d, (j+1)*d)` with
//! `d = R`. Under a frame with shift `(a, b)` the cell `c` (absolute index)
//! has frame-relative index `c - a`; blocks of `K x K` frame-relative cells
//! form the super-subSquares and their inner `(K-2M) x (K-2M)` cores form the
//! sub-squares. Cells in a super-subSquare but outside its sub-square are the
//! removed strips of that frame.

use std::collections::BTreeMap;
use std::ops::Range;

use super::{LinkId, NetworkTopology, Point2D};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionParams {
    cell_side: f64,
    k: u32,
    m: u32,
}

impl PartitionParams {
    /// `k` cells per super-subSquare side and a margin of `m` cells, which
    /// leaves a sub-square of `k - 2m` cells per side.
    pub fn new(cell_side: f64, k: u32, m: u32) -> Result<Self> {
        if !(cell_side > 0.0 && cell_side.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "cell side must be positive and finite, got {cell_side}"
            )));
        }
        if m == 0 {
            return Err(Error::InvalidParams("margin M must be at least 1".into()));
        }
        if u64::from(k) <= 2 * u64::from(m) {
            return Err(Error::InvalidParams(format!(
                "K = {k} must exceed 2M = {}",
                2 * u64::from(m)
            )));
        }
        Ok(Self { cell_side, k, m })
    }

    pub fn cell_side(&self) -> f64 {
        self.cell_side
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Sub-square side in cells, `K - 2M`.
    pub fn j(&self) -> u32 {
        self.k - 2 * self.m
    }
}

/// `Partition(K, a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionFrame {
    params: PartitionParams,
    a: u32,
    b: u32,
}

impl PartitionFrame {
    pub fn new(params: PartitionParams, a: u32, b: u32) -> Result<Self> {
        if a >= params.k || b >= params.k {
            return Err(Error::InvalidParams(format!(
                "shift ({a}, {b}) outside [0, {})",
                params.k
            )));
        }
        Ok(Self { params, a, b })
    }

    /// The frame used at slot `t` by the shifting schedule.
    pub fn for_slot(params: PartitionParams, t: u64) -> Self {
        let (a, b) = shift_for_slot(t, params.k).expect("K > 2M >= 2 holds for valid params");
        Self { params, a, b }
    }

    pub fn params(&self) -> &PartitionParams {
        &self.params
    }

    pub fn shift(&self) -> (u32, u32) {
        (self.a, self.b)
    }

    pub fn block_of_cell(&self, cell: CellIndex) -> BlockIndex {
        let k = i64::from(self.params.k);
        BlockIndex {
            i: cell.i.div_euclid(k),
            j: cell.j.div_euclid(k),
        }
    }

    /// True when the frame-relative cell lies in its block's sub-square.
    pub fn in_sub_square(&self, cell: CellIndex) -> bool {
        let k = i64::from(self.params.k);
        let m = i64::from(self.params.m);
        let inside = |c: i64| {
            let off = c.rem_euclid(k);
            off >= m && off < k - m
        };
        inside(cell.i) && inside(cell.j)
    }

    /// Frame-relative cell of `p` on the virtual cover, whose origin sits
    /// `K` cells below and left of the coordinate origin.
    pub fn cover_cell(&self, p: Point2D) -> CellIndex {
        let c = cell_of(p, self);
        let k = i64::from(self.params.k);
        CellIndex {
            i: c.i + k,
            j: c.j + k,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellIndex {
    pub i: i64,
    pub j: i64,
}

impl CellIndex {
    pub const fn new(i: i64, j: i64) -> Self {
        Self { i, j }
    }
}

/// Index `(i, j)` of a super-subSquare within a frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockIndex {
    pub i: i64,
    pub j: i64,
}

impl BlockIndex {
    /// Frame-relative cell ranges `(columns, rows)` covered by this block's
    /// sub-square.
    pub fn sub_square_cells(&self, params: &PartitionParams) -> (Range<i64>, Range<i64>) {
        let k = i64::from(params.k);
        let m = i64::from(params.m);
        (
            self.i * k + m..(self.i + 1) * k - m,
            self.j * k + m..(self.j + 1) * k - m,
        )
    }
}

/// Frame-relative cell containing `p`; cells are closed below, open above.
pub fn cell_of(p: Point2D, frame: &PartitionFrame) -> CellIndex {
    let d = frame.params.cell_side;
    CellIndex {
        i: (p.x / d).floor() as i64 - i64::from(frame.a),
        j: (p.y / d).floor() as i64 - i64::from(frame.b),
    }
}

/// Shift `(a_t, b_t)` for slot `t`: `a` advances every slot and `b`
/// advances in the slot where `a` wraps back to zero.
pub fn shift_for_slot(t: u64, k: u32) -> Result<(u32, u32)> {
    if k < 3 {
        return Err(Error::InvalidParams(format!(
            "K must be at least 3, got {k}"
        )));
    }
    let k = u64::from(k);
    Ok(((t % k) as u32, ((t / k) % k) as u32))
}

/// Link sets of one super-subSquare.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BlockLinks {
    /// `Y_ij`: links with both endpoints in the super-subSquare.
    pub super_links: Vec<LinkId>,
    /// `L_ij`: links with both endpoints in the sub-square.
    pub sub_links: Vec<LinkId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkPartition {
    pub blocks: BTreeMap<BlockIndex, BlockLinks>,
    /// Links outside every sub-square: straddlers and margin links.
    pub removed: Vec<LinkId>,
    link_block: Vec<Option<BlockIndex>>,
}

impl LinkPartition {
    /// Super-subSquare holding both endpoints of `link`, if any.
    pub fn block_of(&self, link: LinkId) -> Option<BlockIndex> {
        self.link_block[link]
    }
}

pub fn partition_links(net: &NetworkTopology, frame: &PartitionFrame) -> LinkPartition {
    let mut blocks: BTreeMap<BlockIndex, BlockLinks> = BTreeMap::new();
    let mut removed = Vec::new();
    let mut link_block = vec![None; net.num_links()];
    for link in net.links() {
        let cs = frame.cover_cell(link.sender);
        let cr = frame.cover_cell(link.receiver);
        let bs = frame.block_of_cell(cs);
        if bs != frame.block_of_cell(cr) {
            removed.push(link.id);
            continue;
        }
        link_block[link.id] = Some(bs);
        let entry = blocks.entry(bs).or_default();
        entry.super_links.push(link.id);
        if frame.in_sub_square(cs) && frame.in_sub_square(cr) {
            entry.sub_links.push(link.id);
        } else {
            removed.push(link.id);
        }
    }
    removed.sort_unstable();
    LinkPartition {
        blocks,
        removed,
        link_block,
    }
}

fn check_km(k: u32, m: u32) -> Result<()> {
    if m == 0 || u64::from(k) <= 2 * u64::from(m) {
        return Err(Error::InvalidParams(format!(
            "removed-strip accounting needs 0 < 2M < K, got K = {k}, M = {m}"
        )));
    }
    Ok(())
}

/// Number of shifts along one axis that put absolute cell coordinate `c`
/// into the margin.
fn margin_shifts(c: i64, k: u32, m: u32) -> u64 {
    let (k, m) = (i64::from(k), i64::from(m));
    (0..k)
        .filter(|&a| {
            let off = (c - a).rem_euclid(k);
            off < m || off >= k - m
        })
        .count() as u64
}

/// Number of the `K^2` frames that place absolute cell `cell` in a removed
/// strip (vertical or horizontal).
pub fn removed_strip_appearances(cell: CellIndex, k: u32, m: u32) -> Result<u64> {
    check_km(k, m)?;
    let kk = u64::from(k);
    let x = margin_shifts(cell.i, k, m);
    let y = margin_shifts(cell.j, k, m);
    Ok(kk * kk - (kk - x) * (kk - y))
}

/// Appearances of `cell` in vertical and in horizontal removed strips,
/// counted separately over all `K^2` frames.
pub fn removed_strip_appearances_per_axis(cell: CellIndex, k: u32, m: u32) -> Result<(u64, u64)> {
    check_km(k, m)?;
    let kk = u64::from(k);
    Ok((
        margin_shifts(cell.i, k, m) * kk,
        margin_shifts(cell.j, k, m) * kk,
    ))
}
