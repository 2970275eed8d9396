#![no_main]

use fillvol::l1opt::{fill_ilp, fill_lp, IlpConfig, ProblemJson};
use fillvol::CoeffMode;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(p) = ProblemJson::parse(text) else {
        return;
    };
    let again = ProblemJson::from_problem(&p).into_problem().unwrap();
    assert_eq!(again, p);
    if p.boundary.rows() > 4 || p.boundary.cols() > 6 {
        return;
    }
    let solution = match p.mode {
        CoeffMode::Q => fill_lp(&p),
        CoeffMode::Z => fill_ilp(&p, &IlpConfig { node_limit: 200 }),
    };
    if let Ok(s) = solution {
        assert_eq!(p.boundary.mul_rat_vec(&s.witness), p.target);
        assert!(s.bound <= s.value);
    }
});
