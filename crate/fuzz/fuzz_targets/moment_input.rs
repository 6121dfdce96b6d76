#![no_main]

use libfuzzer_sys::fuzz_target;
use toric_cover::moment::{moment_map_eval, MomentInput, MomentKind};
use toric_cover::rational::q;
use toric_cover::Q;

fuzz_target!(|data: &[u8]| {
    let Some((&tag, rest)) = data.split_first() else { return };
    let kind = match tag % 3 {
        0 => MomentKind::Cpn,
        1 => MomentKind::ProductCp1,
        _ => MomentKind::RealSphere,
    };
    let Ok(input) = serde_json::from_slice::<MomentInput>(rest) else { return };
    let Ok(image) = moment_map_eval(kind, &input) else { return };
    assert!(image.iter().all(|y| *y >= q(0) && *y <= q(1)));
    if kind != MomentKind::ProductCp1 {
        assert_eq!(image.iter().sum::<Q>(), q(1));
    }
});
