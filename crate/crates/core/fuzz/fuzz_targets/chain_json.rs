#![no_main]

use fillvol::complex::ChainJson;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(c) = ChainJson::parse(text) {
        let rendered = serde_json::to_string(&ChainJson::from_chain(&c)).unwrap();
        assert_eq!(ChainJson::parse(&rendered).unwrap(), c);
    }
});
