//! Serialized forms of trees: newline-delimited JSON documents and DOT
//! graphs, plus parsing of comma-separated conductor input.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::multiplicity::{MultiplicitySequence, SequenceError};
use crate::tree::{TreeError, TreeMatrix, UntwistedTree};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema version {0}")]
    Version(u32),
    #[error("document must carry exactly one of `p` and `matrix`")]
    Shape,
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("stated conductor {stated:?} differs from the computed {computed:?}")]
    ConductorMismatch {
        stated: Vec<u32>,
        computed: Vec<u32>,
    },
    #[error("{0:?} is not a comma-separated list of naturals")]
    List(String),
}

/// One tree as stored on a line of a `.jsonl` file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDocument {
    pub version: u32,
    pub sequences: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<u32>>>,
    pub conductor: Vec<u32>,
}

/// A decoded tree in whichever form its document used.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Tree {
    Untwisted(UntwistedTree),
    Matrix(TreeMatrix),
}

impl Tree {
    pub fn matrix_form(&self) -> TreeMatrix {
        match self {
            Tree::Untwisted(t) => t.matrix_form(),
            Tree::Matrix(t) => t.clone(),
        }
    }
}

fn raw_sequences(seqs: &[MultiplicitySequence]) -> Vec<Vec<u32>> {
    seqs.iter().map(|m| m.entries().to_vec()).collect()
}

impl TreeDocument {
    pub fn from_untwisted(tree: &UntwistedTree) -> Self {
        Self {
            version: SCHEMA_VERSION,
            sequences: raw_sequences(tree.sequences()),
            p: Some(tree.gluing().to_vec()),
            matrix: None,
            conductor: tree.conductor().into_inner(),
        }
    }

    /// Rows `0..r-1` of the strict upper triangle.
    pub fn from_matrix(tree: &TreeMatrix) -> Self {
        let mut rows = tree.rows();
        rows.pop();
        Self {
            version: SCHEMA_VERSION,
            sequences: raw_sequences(tree.sequences()),
            p: None,
            matrix: Some(rows),
            conductor: tree.conductor().into_inner(),
        }
    }

    pub fn to_tree(&self) -> Result<Tree, FormatError> {
        if self.version != SCHEMA_VERSION {
            return Err(FormatError::Version(self.version));
        }
        let seqs = self
            .sequences
            .iter()
            .map(|raw| MultiplicitySequence::new(raw.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        let (tree, computed) = match (&self.p, &self.matrix) {
            (Some(p), None) => {
                let t = UntwistedTree::new(seqs, p.clone())?;
                let c = t.conductor();
                (Tree::Untwisted(t), c)
            }
            (None, Some(rows)) => {
                let t = TreeMatrix::new(seqs, rows.clone())?;
                let c = t.conductor();
                (Tree::Matrix(t), c)
            }
            _ => return Err(FormatError::Shape),
        };
        if computed.as_slice() != self.conductor.as_slice() {
            return Err(FormatError::ConductorMismatch {
                stated: self.conductor.clone(),
                computed: computed.into_inner(),
            });
        }
        Ok(tree)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

/// Decodes one line of newline-delimited JSON into a validated tree.
pub fn parse_tree_line(line: &str) -> Result<Tree, FormatError> {
    let doc: TreeDocument = serde_json::from_str(line)?;
    doc.to_tree()
}

/// Parses `3,2,4` (no spaces) into its components.
pub fn parse_naturals(s: &str) -> Result<Vec<u32>, FormatError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(FormatError::List(s.to_string()));
    }
    s.split(',')
        .map(|tok| {
            tok.parse::<u32>()
                .map_err(|_| FormatError::List(s.to_string()))
        })
        .collect()
}

/// One `digraph` per tree. Nodes carry their vector as a label, edges go from
/// a node to its children on the next level.
pub fn to_dot(tree: &TreeMatrix, name: &str) -> String {
    let nodes = tree.nodes();
    let mut out = String::new();
    writeln!(out, "digraph {name} {{").unwrap();
    writeln!(out, "  node [shape=ellipse];").unwrap();
    for (id, node) in nodes.iter().enumerate() {
        let mut label = String::new();
        crate::tree::write_tuple(&mut label, &node.vector).unwrap();
        writeln!(out, "  n{id} [label=\"{label}\"];").unwrap();
    }
    for (id, node) in nodes.iter().enumerate() {
        if node.level == 1 {
            continue;
        }
        let parent = nodes
            .iter()
            .position(|p| {
                p.level + 1 == node.level && node.branches.iter().all(|b| p.branches.contains(b))
            })
            .expect("every non-root node has a parent");
        writeln!(out, "  n{parent} -> n{id};").unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(raw: &[u32]) -> MultiplicitySequence {
        MultiplicitySequence::new(raw.to_vec()).unwrap()
    }

    #[test]
    fn untwisted_document_shape() {
        let t = UntwistedTree::new(vec![seq(&[2, 2]), seq(&[3, 2])], vec![2]).unwrap();
        let line = TreeDocument::from_untwisted(&t).to_json_line();
        assert_eq!(
            line,
            r#"{"version":1,"sequences":[[2,2],[3,2]],"p":[2],"conductor":[4,5]}"#
        );
        assert_eq!(parse_tree_line(&line).unwrap(), Tree::Untwisted(t));
    }

    #[test]
    fn matrix_document_shape() {
        let t = TreeMatrix::new(
            vec![seq(&[2]), seq(&[2]), seq(&[2, 2])],
            vec![vec![1, 2], vec![1]],
        )
        .unwrap();
        let line = TreeDocument::from_matrix(&t).to_json_line();
        assert_eq!(
            line,
            r#"{"version":1,"sequences":[[2],[2],[2,2]],"matrix":[[1,2],[1]],"conductor":[3,2,4]}"#
        );
        assert_eq!(parse_tree_line(&line).unwrap(), Tree::Matrix(t));
    }

    #[test]
    fn rejects_inconsistent_documents() {
        let bad_conductor = r#"{"version":1,"sequences":[[2,2],[3,2]],"p":[2],"conductor":[4,4]}"#;
        assert!(matches!(
            parse_tree_line(bad_conductor),
            Err(FormatError::ConductorMismatch { .. })
        ));
        let both =
            r#"{"version":1,"sequences":[[2],[3]],"p":[1],"matrix":[[1]],"conductor":[2,3]}"#;
        assert!(matches!(parse_tree_line(both), Err(FormatError::Shape)));
        let version = r#"{"version":2,"sequences":[[2],[3]],"p":[1],"conductor":[2,3]}"#;
        assert!(matches!(
            parse_tree_line(version),
            Err(FormatError::Version(2))
        ));
        let extra = r#"{"version":1,"sequences":[[2],[3]],"p":[1],"conductor":[2,3],"x":0}"#;
        assert!(matches!(parse_tree_line(extra), Err(FormatError::Json(_))));
        let bad_seq = r#"{"version":1,"sequences":[[2,1],[3]],"p":[1],"conductor":[2,3]}"#;
        assert!(matches!(
            parse_tree_line(bad_seq),
            Err(FormatError::Sequence(_))
        ));
        assert!(parse_tree_line("not json").is_err());
    }

    #[test]
    fn naturals() {
        assert_eq!(parse_naturals("3,2,4").unwrap(), vec![3, 2, 4]);
        assert_eq!(parse_naturals("0").unwrap(), vec![0]);
        assert!(parse_naturals("3, 2").is_err());
        assert!(parse_naturals("3,,2").is_err());
        assert!(parse_naturals("").is_err());
        assert!(parse_naturals("-1").is_err());
    }

    #[test]
    fn dot_for_t8() {
        let t = UntwistedTree::new(vec![seq(&[2]), seq(&[3])], vec![3]).unwrap();
        let dot = to_dot(&t.matrix_form(), "T1");
        let expected = "digraph T1 {
  node [shape=ellipse];
  n0 [label=\"(2,3)\"];
  n1 [label=\"(1,1)\"];
  n2 [label=\"(1,1)\"];
  n3 [label=\"(1,0)\"];
  n4 [label=\"(0,1)\"];
  n0 -> n1;
  n1 -> n2;
  n2 -> n3;
  n2 -> n4;
}
";
        assert_eq!(dot, expected);
    }
}
