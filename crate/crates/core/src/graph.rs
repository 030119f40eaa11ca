//! Bipartite graphs and the edge-list interchange format.
//!
//! An edge list is a text file with one `left right` pair per line,
//! separated by whitespace. Lines starting with `#` and blank lines are
//! ignored. An optional header `p <left_count> <right_count>` fixes the
//! vertex counts; otherwise they are one more than the largest index on each
//! side. Indices are 0-based unless the file is read as 1-based.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::alloc::Item;
use crate::instance::InstanceSpec;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("edge list has neither edges nor a header")]
    Empty,
    #[error(
        "left vertex {left} has neighbor {right}, but there are only {right_count} right vertices"
    )]
    NeighborOutOfRange {
        left: usize,
        right: usize,
        right_count: usize,
    },
    #[error("adjacency has {found} rows for {left_count} left vertices")]
    RowCount { found: usize, left_count: usize },
}

/// Left vertices (items) over right vertices (locations). Adjacency rows are
/// sorted and free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left_count: usize,
    right_count: usize,
    adjacency: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    pub fn new(
        left_count: usize,
        right_count: usize,
        mut adjacency: Vec<Vec<usize>>,
    ) -> Result<Self, GraphError> {
        if adjacency.len() != left_count {
            return Err(GraphError::RowCount {
                found: adjacency.len(),
                left_count,
            });
        }
        for (left, row) in adjacency.iter_mut().enumerate() {
            row.sort_unstable();
            row.dedup();
            if let Some(&right) = row.last() {
                if right >= right_count {
                    return Err(GraphError::NeighborOutOfRange {
                        left,
                        right,
                        right_count,
                    });
                }
            }
        }
        Ok(BipartiteGraph {
            left_count,
            right_count,
            adjacency,
        })
    }

    /// One left vertex per item, its neighbors the item's distinct choices.
    pub fn from_items<'a>(
        items: impl IntoIterator<Item = &'a Item>,
        n: usize,
    ) -> Result<Self, GraphError> {
        let adjacency: Vec<Vec<usize>> = items.into_iter().map(|it| it.choices.to_vec()).collect();
        Self::new(adjacency.len(), n, adjacency)
    }

    /// Random graph where every left vertex has `k` distinct neighbors drawn
    /// uniformly from the right side.
    pub fn random_left_regular(left_count: usize, right_count: usize, k: usize, seed: u64) -> Self {
        let spec = InstanceSpec {
            n: right_count,
            k,
            m: left_count,
            c: left_count as f64 / right_count.max(1) as f64,
            capacity: 1,
            seed,
            distinct: true,
        };
        assert!(k >= 1 && k <= right_count, "need 1 <= k <= right_count");
        let adjacency = spec.items().map(|it| it.choices.into_vec()).collect();
        Self::new(left_count, right_count, adjacency).expect("generated neighbors are in range")
    }

    pub fn left_count(&self) -> usize {
        self.left_count
    }

    pub fn right_count(&self) -> usize {
        self.right_count
    }

    pub fn neighbors(&self, left: usize) -> &[usize] {
        &self.adjacency[left]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, left: usize, right: usize) -> bool {
        self.adjacency
            .get(left)
            .is_some_and(|row| row.binary_search(&right).is_ok())
    }

    /// Canonical edge-list text: header then edges in row-major order.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        writeln!(out, "p {} {}", self.left_count, self.right_count).unwrap();
        for (l, row) in self.adjacency.iter().enumerate() {
            for r in row {
                writeln!(out, "{l} {r}").unwrap();
            }
        }
        out
    }
}

pub fn parse_edge_list(text: &str, one_based: bool) -> Result<BipartiteGraph, GraphError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| GraphError::Parse {
            line: line_no,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields[0] == "p" {
            if header.is_some() {
                return Err(parse_err("duplicate header".into()));
            }
            if fields.len() != 3 {
                return Err(parse_err(format!(
                    "header needs `p <left> <right>`, got `{line}`"
                )));
            }
            let left = parse_count(fields[1]).map_err(parse_err)?;
            let right = parse_count(fields[2]).map_err(parse_err)?;
            header = Some((left, right, line_no));
            continue;
        }
        if fields.len() != 2 {
            return Err(parse_err(format!("expected `left right`, got `{line}`")));
        }
        let left = parse_index(fields[0], one_based).map_err(parse_err)?;
        let right = parse_index(fields[1], one_based).map_err(parse_err)?;
        edges.push((left, right, line_no));
    }

    let (left_count, right_count) = match header {
        Some((l, r, _)) => (l, r),
        None if edges.is_empty() => return Err(GraphError::Empty),
        None => (
            edges.iter().map(|e| e.0).max().unwrap() + 1,
            edges.iter().map(|e| e.1).max().unwrap() + 1,
        ),
    };

    let mut adjacency = vec![Vec::new(); left_count];
    for (l, r, line) in edges {
        if l >= left_count || r >= right_count {
            return Err(GraphError::Parse {
                line,
                message: format!(
                    "edge ({l}, {r}) outside the declared {left_count} x {right_count} graph"
                ),
            });
        }
        adjacency[l].push(r);
    }
    BipartiteGraph::new(left_count, right_count, adjacency)
}

fn parse_count(field: &str) -> Result<usize, String> {
    field
        .parse::<usize>()
        .map_err(|_| format!("`{field}` is not a vertex count"))
}

fn parse_index(field: &str, one_based: bool) -> Result<usize, String> {
    let value = field
        .parse::<usize>()
        .map_err(|_| format!("`{field}` is not a vertex index"))?;
    if one_based {
        value
            .checked_sub(1)
            .ok_or_else(|| "index 0 in a 1-based edge list".to_string())
    } else {
        Ok(value)
    }
}

pub fn load_edge_list(
    path: impl AsRef<Path>,
    one_based: bool,
) -> Result<BipartiteGraph, GraphError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| GraphError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_edge_list(&text, one_based)
}

pub fn write_edge_list(graph: &BipartiteGraph, path: impl AsRef<Path>) -> Result<(), GraphError> {
    let path = path.as_ref();
    fs::write(path, graph.to_edge_list()).map_err(|source| GraphError::Io {
        path: path.to_path_buf(),
        source,
    })
}
