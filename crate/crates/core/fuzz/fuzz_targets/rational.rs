#![no_main]

use fillvol::rational::{format_rat, parse_rat};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(r) = parse_rat(text) {
        let shown = format_rat(&r);
        assert_eq!(parse_rat(&shown).unwrap(), r);
        assert_eq!(format_rat(&parse_rat(&shown).unwrap()), shown);
    }
});
