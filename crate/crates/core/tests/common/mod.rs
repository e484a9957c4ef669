#![allow(dead_code)]

use std::path::PathBuf;

use arf_core::format::{parse_tree_line, Tree};

pub fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

pub fn read_trees(name: &str) -> Vec<Tree> {
    let text = std::fs::read_to_string(golden(name)).expect("golden file");
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| parse_tree_line(l).unwrap_or_else(|e| panic!("{name}: {e}")))
        .collect()
}

/// The 20x20 count matrix, `table[i][j]` for conductor `(i+1, j+1)`.
pub fn read_square_table(name: &str) -> Vec<Vec<usize>> {
    let text = std::fs::read_to_string(golden(name)).expect("golden file");
    text.lines()
        .skip(1)
        .map(|l| l.split(',').skip(1).map(|x| x.parse().unwrap()).collect())
        .collect()
}

/// `(conductor, count)` rows; conductor components are `;`-separated.
pub fn read_count_list(name: &str) -> Vec<(Vec<u32>, usize)> {
    let text = std::fs::read_to_string(golden(name)).expect("golden file");
    text.lines()
        .skip(1)
        .map(|l| {
            let (c, n) = l.split_once(',').unwrap();
            (
                c.split(';').map(|x| x.parse().unwrap()).collect(),
                n.parse().unwrap(),
            )
        })
        .collect()
}
