//! Frozen fixture records match a fresh computation. Set
//! `GERBECOH_REFREEZE=1` to rewrite them.

use std::path::PathBuf;

use gerbecoh::fixtures::recompute_frozen;

#[test]
fn frozen_records_match_recomputation() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let refreeze = std::env::var_os("GERBECOH_REFREEZE").is_some();
    for (file, json) in recompute_frozen().unwrap() {
        let path = dir.join(&file);
        let text = format!("{json}\n");
        if refreeze {
            std::fs::write(&path, &text).unwrap();
        } else {
            let frozen = std::fs::read_to_string(&path).unwrap();
            assert_eq!(frozen, text, "{file} differs from recomputation");
        }
    }
}
