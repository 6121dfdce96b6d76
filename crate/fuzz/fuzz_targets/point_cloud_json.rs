#![no_main]

use libfuzzer_sys::fuzz_target;
use toric_cover::covering::{kkm_lebesgue_witness, PointCloudCover, PointCloudJson};
use toric_cover::SimplePolytope;

fuzz_target!(|data: &[u8]| {
    if data.len() > 8192 {
        return;
    }
    let Ok(json) = serde_json::from_slice::<PointCloudJson>(data) else { return };
    let Ok(cover) = PointCloudCover::from_json(json) else { return };
    let Some(n) = cover.points.first().map(Vec::len) else { return };
    if !(1..=3).contains(&n) {
        return;
    }
    // Errors are fine; panics are not.
    let _ = kkm_lebesgue_witness(&SimplePolytope::cube(n), &cover, None);
});
