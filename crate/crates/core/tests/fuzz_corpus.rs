//! Replays the checked-in fuzz corpus through the same round-trip checks the
//! fuzz targets perform, so seeds stay meaningful on stable toolchains.

use std::path::PathBuf;

use quiverdt::fixture::{parse_fixture, parse_rep_literal, render_fixture, render_rep_literal};
use quiverdt::{Field, Quiver};

fn corpus(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let path = e.unwrap().path();
            (path.display().to_string(), std::fs::read_to_string(&path).unwrap())
        })
        .collect();
    out.sort();
    out
}

#[test]
fn fixture_seeds_round_trip() {
    let seeds = corpus("parse_fixture");
    assert!(!seeds.is_empty());
    for (name, text) in seeds {
        let spec = parse_fixture(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(parse_fixture(&render_fixture(&spec)).unwrap(), spec, "{name}");
    }
}

#[test]
fn literal_seeds_round_trip() {
    let quiver = Quiver::new(["1", "2"], [("x", "1", "2"), ("l", "2", "2")]).unwrap();
    let field = Field::new(3).unwrap();
    let seeds = corpus("parse_rep_literal");
    assert!(!seeds.is_empty());
    for (name, text) in seeds {
        let rep = parse_rep_literal(&quiver, &field, &text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let again = parse_rep_literal(&quiver, &field, &render_rep_literal(&quiver, &rep)).unwrap();
        assert_eq!(again, rep, "{name}");
    }
}
