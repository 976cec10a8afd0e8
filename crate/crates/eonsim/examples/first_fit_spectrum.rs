//! The spectrum grid up close: first-fit search under the continuity and
//! contiguity rules, the difference between exclusive working spectrum
//! and sharable backup spectrum, and the debug dump format.
//!
//! Run with: cargo run --example first_fit_spectrum

use eonsim::spectrum::{FitMode, SlotBlock, SpectrumGrid};
use eonsim::topology::{NodeId, Path, Topology};

fn main() -> eonsim::Result<()> {
    // A triangle with 8 slots per link keeps the grid small enough to read.
    let t = Topology::parse_str(
        "topology triangle 8\n\
         node 0 A\nnode 1 B\nnode 2 C\n\
         link 0 0 1 100\nlink 1 0 2 100\nlink 2 1 2 100\n",
    )?;
    let mut grid = SpectrumGrid::for_topology(&t);

    let direct = Path::from_nodes(&t, &[NodeId(0), NodeId(1)])?;
    let detour = Path::from_nodes(&t, &[NodeId(0), NodeId(2), NodeId(1)])?;

    // Connection 0: a working lightpath needs the same free slots on every
    // link of its route (continuity) as one unbroken run (contiguity).
    let block = grid.find_first_fit(&direct, 2, &FitMode::Working).expect("empty grid fits");
    assert_eq!(block, SlotBlock { start: 0, size: 2 });
    grid.allocate(&direct, block, &FitMode::Working, 0)?;
    println!("conn 0 working on A-B: slots {}..{}", block.start, block.end());

    // Its backup goes the long way. Backup spectrum is reserved, not lit,
    // so later backups may share it.
    let share_with_anyone = FitMode::Backup { sharable_with: &|_| true };
    let backup = grid.find_first_fit(&detour, 2, &share_with_anyone).expect("free");
    grid.allocate(&detour, backup, &share_with_anyone, 0)?;
    println!("conn 0 backup on A-C-B: slots {}..{}", backup.start, backup.end());

    // Connection 1 wants backup spectrum on the same detour. Sharing is
    // allowed (the predicate says yes), so first-fit lands on the same
    // slots instead of consuming new ones.
    let shared = grid.find_first_fit(&detour, 2, &share_with_anyone).expect("sharable");
    assert_eq!(shared, backup);
    grid.allocate(&detour, shared, &share_with_anyone, 1)?;
    println!("conn 1 backup shares those slots (two owners per cell now)");

    // Connection 2 is told it may not share with anyone (that is exactly
    // how dedicated protection reserves its backup): first-fit must skip
    // past the shared block.
    let exclusive = FitMode::Backup { sharable_with: &|_| false };
    let private = grid.find_first_fit(&detour, 2, &exclusive).expect("room above");
    assert_eq!(private.start, backup.end());
    grid.allocate(&detour, private, &exclusive, 2)?;
    println!("conn 2 exclusive backup pushed to slots {}..{}", private.start, private.end());

    // Working queries never enter reserved cells, shared or not.
    let working = grid.find_first_fit(&detour, 2, &FitMode::Working).expect("room above");
    assert_eq!(working.start, private.end());

    let (lit, reserved) = grid.utilization();
    println!("utilization: {lit} working cells, {reserved} backup cells (shared counted once)");

    // One row per link: W = working, B = backup, . = free.
    println!("\n{}", grid.dump(&t));

    // Releasing a sharer leaves the other owner's reservation intact;
    // releasing the last owner frees the cells.
    grid.release(0);
    grid.release(1);
    let after = grid.find_first_fit(&detour, 2, &share_with_anyone).expect("freed");
    assert_eq!(after.start, 0);
    println!("after releasing conns 0 and 1, first fit on the detour is back to slot 0");
    Ok(())
}
