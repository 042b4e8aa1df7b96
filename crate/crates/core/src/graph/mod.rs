//! Finite directed graphs.

pub mod ktheory;
pub mod obstruction;
pub mod snf;

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use ktheory::{k0_class_membership, k_theory, KTheoryResult, Membership};
pub use obstruction::{enumerate_obstruction, ObstructionConfig, ObstructionReport};
pub use snf::{smith_normal_form, IntMatrix, Snf};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub src: usize,
    pub dst: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vindex: HashMap<String, usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EdgeJson {
    pub name: String,
    pub src: String,
    pub dst: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct GraphReport {
    pub duplicate_vertices: Vec<String>,
    pub duplicate_edges: Vec<String>,
    /// `(edge, endpoint)` pairs naming an unknown vertex.
    pub dangling: Vec<(String, String)>,
    pub sinks: Vec<String>,
    pub regular: Vec<String>,
}

impl GraphReport {
    pub fn is_valid(&self) -> bool {
        self.duplicate_vertices.is_empty() && self.duplicate_edges.is_empty() && self.dangling.is_empty()
    }
}

/// Checks names and endpoints and classifies vertices.
pub fn validate_graph(g: &GraphJson) -> GraphReport {
    let mut r = GraphReport::default();
    let mut seen = HashSet::new();
    for v in &g.vertices {
        if !seen.insert(v.as_str()) {
            r.duplicate_vertices.push(v.clone());
        }
    }
    let mut eseen = HashSet::new();
    let mut emits: HashSet<&str> = HashSet::new();
    for e in &g.edges {
        if !eseen.insert(e.name.as_str()) {
            r.duplicate_edges.push(e.name.clone());
        }
        for end in [&e.src, &e.dst] {
            if !seen.contains(end.as_str()) {
                r.dangling.push((e.name.clone(), end.clone()));
            }
        }
        emits.insert(e.src.as_str());
    }
    let mut listed = HashSet::new();
    for v in &g.vertices {
        if !listed.insert(v.as_str()) {
            continue;
        }
        if emits.contains(v.as_str()) {
            r.regular.push(v.clone());
        } else {
            r.sinks.push(v.clone());
        }
    }
    r
}

impl DirectedGraph {
    pub fn new(vertices: Vec<String>, edges: Vec<(String, String, String)>) -> Result<Self> {
        Self::from_json(&GraphJson {
            vertices,
            edges: edges
                .into_iter()
                .map(|(name, src, dst)| EdgeJson { name, src, dst })
                .collect(),
        })
    }

    pub fn from_json(g: &GraphJson) -> Result<Self> {
        let report = validate_graph(g);
        if !report.is_valid() {
            return Err(Error::invalid(
                "graph",
                serde_json::to_string(&report).unwrap_or_default(),
            ));
        }
        let vindex: HashMap<String, usize> = g
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let edges = g
            .edges
            .iter()
            .map(|e| Edge {
                name: e.name.clone(),
                src: vindex[&e.src],
                dst: vindex[&e.dst],
            })
            .collect();
        Ok(DirectedGraph {
            vertices: g.vertices.clone(),
            edges,
            vindex,
        })
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let doc: GraphJson = serde_json::from_str(text)?;
        Self::from_json(&doc)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    name: e.name.clone(),
                    src: self.vertices[e.src].clone(),
                    dst: self.vertices[e.dst].clone(),
                })
                .collect(),
        }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.vindex.get(name).copied()
    }

    pub fn edge(&self, name: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.name == name)
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.src == v).count()
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.out_degree(v) == 0
    }

    pub fn sinks(&self) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&v| self.is_sink(v)).collect()
    }

    pub fn regular(&self) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&v| !self.is_sink(v)).collect()
    }

    pub fn sink_names(&self) -> Vec<String> {
        self.sinks().into_iter().map(|v| self.vertices[v].clone()).collect()
    }

    /// `adj[v][w]` counts edges from `v` to `w`.
    pub fn adjacency(&self) -> Vec<Vec<u64>> {
        let n = self.vertices.len();
        let mut adj = vec![vec![0u64; n]; n];
        for e in &self.edges {
            adj[e.src][e.dst] += 1;
        }
        adj
    }

    /// Least superset of `seed` closed under taking ranges of edges.
    pub fn hereditary_closure(&self, seed: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut out = seed.clone();
        let mut stack: Vec<usize> = seed.iter().copied().collect();
        while let Some(v) = stack.pop() {
            for e in self.edges.iter().filter(|e| e.src == v) {
                if out.insert(e.dst) {
                    stack.push(e.dst);
                }
            }
        }
        out
    }

    pub fn hereditary_closure_names(&self, seed: &[&str]) -> Result<BTreeSet<String>> {
        let mut s = BTreeSet::new();
        for v in seed {
            s.insert(
                self.vertex(v)
                    .ok_or_else(|| Error::domain(format!("unknown vertex {v}")))?,
            );
        }
        Ok(self
            .hereditary_closure(&s)
            .into_iter()
            .map(|v| self.vertices[v].clone())
            .collect())
    }

    /// Same graph with vertices listed in the order `perm` (new position `i`
    /// holds old vertex `perm[i]`).
    pub fn permuted(&self, perm: &[usize]) -> DirectedGraph {
        let mut inv = vec![0; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let vertices: Vec<String> = perm.iter().map(|&p| self.vertices[p].clone()).collect();
        let vindex = vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        DirectedGraph {
            vertices,
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    name: e.name.clone(),
                    src: inv[e.src],
                    dst: inv[e.dst],
                })
                .collect(),
            vindex,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn m1() -> DirectedGraph {
        DirectedGraph::new(
            vec!["v1".into(), "v2".into()],
            vec![
                ("e11".into(), "v1".into(), "v1".into()),
                ("e12".into(), "v1".into(), "v2".into()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn m1_classification() {
        let g = m1();
        assert_eq!(g.sink_names(), vec!["v2".to_string()]);
        let r = validate_graph(&g.to_json());
        assert!(r.is_valid());
        assert_eq!(r.regular, vec!["v1".to_string()]);
    }

    #[test]
    fn dangling_endpoint() {
        let doc = GraphJson {
            vertices: vec!["v1".into()],
            edges: vec![EdgeJson {
                name: "e".into(),
                src: "x".into(),
                dst: "v1".into(),
            }],
        };
        let r = validate_graph(&doc);
        assert_eq!(r.dangling, vec![("e".to_string(), "x".to_string())]);
        assert!(DirectedGraph::from_json(&doc).is_err());
    }

    #[test]
    fn closure_examples() {
        let g = m1();
        let all: BTreeSet<String> = ["v1", "v2"].iter().map(|s| s.to_string()).collect();
        assert_eq!(g.hereditary_closure_names(&["v1"]).unwrap(), all);
        assert_eq!(g.hereditary_closure_names(&["v1", "v2"]).unwrap(), all);
        assert_eq!(
            g.hereditary_closure_names(&["v2"]).unwrap(),
            ["v2".to_string()].into_iter().collect()
        );
    }
}
