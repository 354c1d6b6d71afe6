//! The standard corpus of test groupoids ships as JSON data files in
//! `data/corpus/`. These tests pin the files to the in-code builders:
//! the normal test fails if either side drifts, and the ignored test
//! regenerates the files (`cargo test -p repfun --test corpus_files
//! -- --ignored`).

use std::path::PathBuf;

use repfun::groupoid::{
    action_groupoid, band_groupoid, cyclic_group, disjoint_union, pair_groupoid,
    symmetric_group_3, unit_groupoid, validate_groupoid, FiniteGroupoid,
};
use repfun::io::groupoid_to_json;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/corpus")
}

/// translation action of Z/3 on itself: `g_h . p = h + p (mod 3)`
fn z3_translation() -> FiniteGroupoid {
    let z3 = cyclic_group(3);
    let action: Vec<Vec<usize>> = (0..3).map(|h| (0..3).map(|p| (h + p) % 3).collect()).collect();
    action_groupoid(&z3, &action).unwrap()
}

fn corpus() -> Vec<(&'static str, FiniteGroupoid)> {
    vec![
        ("unit3", unit_groupoid(3)),
        ("pair2", pair_groupoid(2)),
        ("pair3", pair_groupoid(3)),
        ("band2_z2", band_groupoid(2, &cyclic_group(2)).unwrap()),
        ("band2_s3", band_groupoid(2, &symmetric_group_3()).unwrap()),
        ("action_z3", z3_translation()),
        ("disjoint_pair2_z2", disjoint_union(&pair_groupoid(2), &cyclic_group(2))),
    ]
}

#[test]
fn corpus_files_match_the_builders() {
    for (name, g) in corpus() {
        let path = corpus_dir().join(format!("{name}.json"));
        let on_disk = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()));
        assert_eq!(
            on_disk,
            groupoid_to_json(&g),
            "{name}.json is out of sync with its builder; regenerate with \
             `cargo test -p repfun --test corpus_files -- --ignored`"
        );
        assert!(validate_groupoid(&g).violations.is_empty(), "{name} fails the axioms");
    }
}

#[test]
#[ignore = "writes data/corpus/*.json from the builders"]
fn regenerate_corpus_files() {
    let dir = corpus_dir();
    std::fs::create_dir_all(&dir).unwrap();
    for (name, g) in corpus() {
        std::fs::write(dir.join(format!("{name}.json")), groupoid_to_json(&g)).unwrap();
    }
}
