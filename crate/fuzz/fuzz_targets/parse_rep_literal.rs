#![no_main]

use libfuzzer_sys::fuzz_target;
use quiverdt::fixture::{parse_rep_literal, render_rep_literal};
use quiverdt::{Field, Quiver};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let quiver = Quiver::new(["1", "2"], [("x", "1", "2"), ("l", "2", "2")]).unwrap();
    let field = Field::new(3).unwrap();
    if let Ok(rep) = parse_rep_literal(&quiver, &field, text) {
        let again = parse_rep_literal(&quiver, &field, &render_rep_literal(&quiver, &rep)).expect("rendered literal parses");
        assert_eq!(again, rep);
    }
});
