#![no_main]

use libfuzzer_sys::fuzz_target;
use toric_cover::SimplePolytope;

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    let Ok(p) = serde_json::from_slice::<SimplePolytope>(data) else { return };
    for v in p.vertices() {
        assert_eq!(v.facets.len(), p.dim());
    }
    let text = serde_json::to_string(&p).unwrap();
    let back: SimplePolytope = serde_json::from_str(&text).unwrap();
    assert_eq!(back.facets(), p.facets());
});
