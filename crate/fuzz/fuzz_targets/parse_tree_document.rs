#![no_main]

use arf_core::format::{parse_tree_line, Tree, TreeDocument};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(tree) = parse_tree_line(s) {
        let line = match &tree {
            Tree::Untwisted(t) => TreeDocument::from_untwisted(t).to_json_line(),
            Tree::Matrix(t) => TreeDocument::from_matrix(t).to_json_line(),
        };
        assert_eq!(parse_tree_line(&line).unwrap(), tree);
    }
});
