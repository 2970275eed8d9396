#![no_main]

use fillvol::linalg::Mat2;
use fillvol::torus::{classify, rl_word, torsion_row};
use fillvol::Int;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(a) = Mat2::parse(text) else {
        return;
    };
    let small = Int::from(10_000);
    if [&a.a, &a.b, &a.c, &a.d].iter().any(|x| x.magnitude() > small.magnitude()) {
        return;
    }
    if let Ok(class) = classify(&a) {
        let _ = class;
        if let Ok(w) = rl_word(&a) {
            let _ = w;
        }
        for m in 1..=4 {
            let _ = torsion_row(&a, m);
        }
    }
});
