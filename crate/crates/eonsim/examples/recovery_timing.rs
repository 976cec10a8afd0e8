//! The analytic recovery-time model: how failure detection, per-node
//! signaling, cross-connection, and propagation add up for each
//! protection scheme, and how the recovery-time constraint gates
//! admission.
//!
//! Run with: cargo run --example recovery_timing

use eonsim::timing::{check_rtc, rt_dpp, rt_incb, rt_spp, TimingParams, RTC_COST239_US};

fn main() {
    let p = TimingParams::default();
    println!(
        "defaults: detection {} us, message processing/assembly {}/{} us per node,",
        p.f_d_us, p.m_p_us, p.m_a_us
    );
    println!(
        "          cross-connect {} us per node, propagation {:.4} us/km, constraint {} us\n",
        p.c_x_us, p.prop_us_per_km, p.rtc_us
    );

    // A backup with 3 interior nodes and 170 km of fiber.
    let (n, l) = (3, 170.0);

    // Shared backup: the spectrum is only reserved, so after the failure
    // notification every node along the backup must be signaled and then
    // cross-connected one after another.
    let spp = rt_spp(&p, n, l);
    println!("shared backup        ({n} interior nodes, {l} km):");
    println!(
        "  detection {} + processing {} + cross-connects {} + propagation {} = {} us",
        spp.detection_us, spp.processing_us, spp.cross_connect_us, spp.propagation_us,
        spp.total_us()
    );

    // Dedicated backup: pre-cross-connected end to end; only detection,
    // signaling, and propagation remain.
    let dpp = rt_dpp(&p, n, l);
    println!("dedicated backup     (same route): total {} us", dpp.total_us());
    println!(
        "  saving exactly n * c_x = {} us of serialized switching\n",
        spp.total_us() - dpp.total_us()
    );

    // Intermediate-node backup: signaling starts from both ends toward a
    // designated midpoint, so the two halves run in parallel and the
    // slower half dominates; cross-connection happens in parallel too,
    // costing a single c_x.
    let incb = rt_incb(&p, (1, 85.0), (1, 85.0));
    println!("split at the midpoint: halves of 1 node / 85 km each");
    println!("  total {} us — parallel halves beat both forms above", incb.total_us());

    let lopsided = rt_incb(&p, (1, 85.0), (3, 400.0));
    println!(
        "  a lopsided split (1 node/85 km vs 3 nodes/400 km) is dominated by the slow half: {:.1} us\n",
        lopsided.total_us()
    );

    // The constraint check is what provisioning uses to reject requests
    // whose worst-case recovery would be too slow.
    let tight = TimingParams::with_rtc(RTC_COST239_US);
    let slow = rt_spp(&tight, 9, 3000.0);
    println!(
        "constraint at {} us: a {}-node / 3000 km shared backup needs {:.1} us -> admitted: {}",
        tight.rtc_us,
        9,
        slow.total_us(),
        check_rtc(&tight, &slow)
    );
    let quick = rt_spp(&tight, 2, 500.0);
    println!(
        "                      a 2-node / 500 km shared backup needs {:.1} us -> admitted: {}",
        quick.total_us(),
        check_rtc(&tight, &quick)
    );
}
