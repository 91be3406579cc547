#![no_main]

use libfuzzer_sys::fuzz_target;
use quiverdt::fixture::{parse_fixture, render_fixture};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(spec) = parse_fixture(text) {
            let again = parse_fixture(&render_fixture(&spec)).expect("rendered fixture parses");
            assert_eq!(again, spec);
        }
    }
});
