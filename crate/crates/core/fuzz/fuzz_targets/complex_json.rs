#![no_main]

use fillvol::complex::ComplexJson;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(x) = ComplexJson::parse(text) else {
        return;
    };
    let again = ComplexJson::parse(&ComplexJson::render(&x)).expect("rendered complex reparses");
    assert_eq!(again, x);
    // the constructor leaves ∂∂ = 0 to validation; both must agree
    let dd_zero = (2..=x.dimension()).all(|k| x.boundary_matrix(k - 1).mul(&x.boundary_matrix(k)).is_zero());
    assert_eq!(x.validate().is_complex, dd_zero);
});
