#![no_main]

use libfuzzer_sys::fuzz_target;
use toric_cover::covering::{
    lebesgue_witness, palais_coloring, validate_coloring, CoverJson, LatticeCover, ModelKind, Verdict,
};

fuzz_target!(|data: &[u8]| {
    let Ok(json) = serde_json::from_slice::<CoverJson>(data) else { return };
    let Ok(cover) = LatticeCover::from_json(&json) else { return };
    if cover.model.len() > 4096 {
        return;
    }
    assert_eq!(validate_coloring(&cover, &palais_coloring(&cover)), Ok(()));
    if cover.model.kind() == ModelKind::Cube {
        let rep = lebesgue_witness(&cover).unwrap();
        if rep.verdict() == Verdict::WitnessFound {
            assert!(rep.revalidate(&cover));
        }
    }
});
