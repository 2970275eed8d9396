#![no_main]

use fillvol::complex::{build_genus_surface, parse_chain_expr};
use fillvol::CoeffMode;
use libfuzzer_sys::fuzz_target;
use std::sync::OnceLock;

fuzz_target!(|data: &[u8]| {
    static SURFACE: OnceLock<fillvol::complex::DeltaComplex> = OnceLock::new();
    let x = SURFACE.get_or_init(|| build_genus_surface(2));
    let Ok(expr) = std::str::from_utf8(data) else {
        return;
    };
    for mode in [CoeffMode::Z, CoeffMode::Q] {
        if let Ok(c) = parse_chain_expr(x, expr, 1, mode) {
            assert_eq!(c.mode(), mode);
            let _ = x.boundary(&c);
        }
    }
});
