#![no_main]

use fillvol::affine::{apply_linear, boundary, chain_from_json, chain_to_json};
use fillvol::linalg::Mat2;
use fillvol::CoeffMode;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(value) = serde_json::from_slice::<serde_json::Value>(data) else {
        return;
    };
    let Ok(c) = chain_from_json(&value, CoeffMode::Q) else {
        return;
    };
    assert_eq!(chain_from_json(&chain_to_json(&c), CoeffMode::Q).unwrap(), c);
    if c.degree() >= 2 {
        assert!(boundary(&boundary(&c)).is_zero());
    }
    let moved = apply_linear(&Mat2::new(2, 1, 1, 1), &c).unwrap();
    assert_eq!(boundary(&moved), apply_linear(&Mat2::new(2, 1, 1, 1), &boundary(&c)).unwrap());
});
