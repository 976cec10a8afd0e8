//! Per-link frequency-slot occupancy and constrained block search.
//!
//! A grid holds `F` slots for every link. A connection's block must use the
//! same slot indices on every link of its route (continuity) and occupy one
//! unbroken run of slots (contiguity); both hold by construction because a
//! single `SlotBlock` is applied to the whole route. Search is first-fit:
//! the lowest feasible start index wins, which keeps runs deterministic.

use std::collections::BTreeSet;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::topology::{LinkId, Path, Topology};

/// Connection identifier used for slot ownership.
pub type ConnId = u32;

/// A contiguous run of slots: indices `start..start + size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotBlock {
    pub start: usize,
    pub size: usize,
}

impl SlotBlock {
    pub fn slots(&self) -> Range<usize> {
        self.start..self.start + self.size
    }

    pub fn end(&self) -> usize {
        self.start + self.size
    }
}

/// Ownership of one (link, slot) cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlotOwnership {
    Free,
    /// Carries live traffic for exactly one connection.
    Working(ConnId),
    /// Reserved for backup use by every connection in the (non-empty) set.
    Backup(BTreeSet<ConnId>),
}

/// How a block search treats occupied cells.
pub enum FitMode<'a> {
    /// Only free cells qualify.
    Working,
    /// Free cells qualify, as do backup cells whose current sharers all
    /// satisfy the predicate. Exclusive (non-shared) reservation is the
    /// `|_| false` predicate.
    Backup {
        sharable_with: &'a dyn Fn(ConnId) -> bool,
    },
}

/// Slot occupancy for every link of a topology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumGrid {
    link_count: usize,
    slot_capacity: usize,
    /// Link-major: cell (link, slot) lives at `link * slot_capacity + slot`.
    cells: Vec<SlotOwnership>,
}

impl SpectrumGrid {
    pub fn new(link_count: usize, slot_capacity: usize) -> SpectrumGrid {
        SpectrumGrid {
            link_count,
            slot_capacity,
            cells: vec![SlotOwnership::Free; link_count * slot_capacity],
        }
    }

    pub fn for_topology(t: &Topology) -> SpectrumGrid {
        SpectrumGrid::new(t.link_count(), t.slot_capacity())
    }

    pub fn link_count(&self) -> usize {
        self.link_count
    }

    pub fn slot_capacity(&self) -> usize {
        self.slot_capacity
    }

    fn idx(&self, link: LinkId, slot: usize) -> usize {
        debug_assert!((link.0 as usize) < self.link_count && slot < self.slot_capacity);
        link.0 as usize * self.slot_capacity + slot
    }

    pub fn cell(&self, link: LinkId, slot: usize) -> &SlotOwnership {
        &self.cells[self.idx(link, slot)]
    }

    fn eligible(&self, link: LinkId, slot: usize, mode: &FitMode) -> bool {
        match (self.cell(link, slot), mode) {
            (SlotOwnership::Free, _) => true,
            (SlotOwnership::Backup(sharers), FitMode::Backup { sharable_with }) => {
                sharers.iter().all(|&c| sharable_with(c))
            }
            _ => false,
        }
    }

    /// Lowest start index such that every (link, slot) cell of the block is
    /// usable on every link of `path` under `mode`. `None` when no start
    /// fits — absence of spectrum is a domain outcome, not a fault.
    pub fn find_first_fit(&self, path: &Path, fr: usize, mode: &FitMode) -> Option<SlotBlock> {
        self.find_first_fit_masked(path, fr, mode, &|_, _| false)
    }

    /// As [`find_first_fit`](Self::find_first_fit), with an extra mask:
    /// cells where `blocked` returns true are treated as unavailable. Used
    /// during failure recovery to keep concurrently restored connections
    /// from landing on the same free cells.
    pub fn find_first_fit_masked(
        &self,
        path: &Path,
        fr: usize,
        mode: &FitMode,
        blocked: &dyn Fn(LinkId, usize) -> bool,
    ) -> Option<SlotBlock> {
        if fr == 0 || fr > self.slot_capacity {
            return None;
        }
        for start in 0..=(self.slot_capacity - fr) {
            let fits = path.links().iter().all(|&link| {
                (start..start + fr).all(|slot| !blocked(link, slot) && self.eligible(link, slot, mode))
            });
            if fits {
                return Some(SlotBlock { start, size: fr });
            }
        }
        None
    }

    /// Marks `block` on every link of `path` for `conn`. Every cell is
    /// re-checked against `mode` first, so a block that was found on an
    /// older grid state is rejected instead of corrupting ownership.
    pub fn allocate(
        &mut self,
        path: &Path,
        block: SlotBlock,
        mode: &FitMode,
        conn: ConnId,
    ) -> Result<()> {
        if block.size == 0 || block.end() > self.slot_capacity {
            return Err(Error::validation(format!(
                "slot block {}..{} outside grid capacity {}",
                block.start,
                block.end(),
                self.slot_capacity
            )));
        }
        for &link in path.links() {
            for slot in block.slots() {
                if !self.eligible(link, slot, mode) {
                    return Err(Error::StaleBlock { link: link.0, slot });
                }
            }
        }
        for &link in path.links() {
            for slot in block.slots() {
                let idx = self.idx(link, slot);
                match mode {
                    FitMode::Working => self.cells[idx] = SlotOwnership::Working(conn),
                    FitMode::Backup { .. } => match &mut self.cells[idx] {
                        cell @ SlotOwnership::Free => {
                            *cell = SlotOwnership::Backup(BTreeSet::from([conn]));
                        }
                        SlotOwnership::Backup(sharers) => {
                            sharers.insert(conn);
                        }
                        SlotOwnership::Working(_) => unreachable!("eligibility checked above"),
                    },
                }
            }
        }
        Ok(())
    }

    /// Removes `conn` from every working cell and sharer set it appears in;
    /// backup cells whose sharer set empties become free. Idempotent.
    pub fn release(&mut self, conn: ConnId) {
        for cell in &mut self.cells {
            match cell {
                SlotOwnership::Working(c) if *c == conn => *cell = SlotOwnership::Free,
                SlotOwnership::Backup(sharers) => {
                    sharers.remove(&conn);
                    if sharers.is_empty() {
                        *cell = SlotOwnership::Free;
                    }
                }
                _ => {}
            }
        }
    }

    /// (working cells, backup cells). Each occupied (link, slot) cell counts
    /// once; a backup cell shared by several connections still counts once.
    pub fn utilization(&self) -> (usize, usize) {
        let mut working = 0;
        let mut backup = 0;
        for cell in &self.cells {
            match cell {
                SlotOwnership::Free => {}
                SlotOwnership::Working(_) => working += 1,
                SlotOwnership::Backup(_) => backup += 1,
            }
        }
        (working, backup)
    }

    /// Debug rendering: one line per link, `.` free / `W` working / `B`
    /// backup.
    pub fn dump(&self, t: &Topology) -> String {
        let mut out = String::new();
        for link in t.links() {
            let mut row = String::with_capacity(self.slot_capacity);
            for slot in 0..self.slot_capacity {
                row.push(match self.cell(link.id, slot) {
                    SlotOwnership::Free => '.',
                    SlotOwnership::Working(_) => 'W',
                    SlotOwnership::Backup(_) => 'B',
                });
            }
            out.push_str(&format!("{} {}-{} {}\n", link.id, link.a, link.b, row));
        }
        out
    }
}
