#![no_main]

use libfuzzer_sys::fuzz_target;
use toric_cover::chow::{is_principal, linearly_equivalent, DivisorJson};
use toric_cover::{Divisor, SimplePolytope};

fuzz_target!(|data: &[u8]| {
    let Ok(json) = serde_json::from_slice::<DivisorJson>(data) else { return };
    let p = SimplePolytope::cube(3);
    let Ok(d) = Divisor::from_json(&json, p.facet_count()) else { return };
    assert!(linearly_equivalent(&p, &d, &d));
    assert!(is_principal(&p, &d.sub(&d)).is_some());
});
