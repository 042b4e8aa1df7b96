//! Exhaustive sweep over graphs with the structure forced on a graph model
//! of the two-dimensional mirror sphere: a looped vertex `w0`, two sinks
//! `w1`, `w2` hereditary below it, and an acyclic remainder. For each
//! candidate the class `[P_w1 + P_w2]` in `K0` is tested for vanishing.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use super::ktheory::{indicator, k0_class_membership};
use super::{DirectedGraph, GraphJson};
use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 6;
/// Upper limit on raw edge assignments examined in one sweep.
pub const MAX_ASSIGNMENTS: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ObstructionConfig {
    pub max_vertices: usize,
    pub max_edges: usize,
    /// Largest number of parallel edges allowed between two vertices.
    pub max_multiplicity: u32,
}

impl ObstructionConfig {
    pub fn new(max_vertices: usize) -> Self {
        ObstructionConfig {
            max_vertices,
            max_edges: usize::MAX,
            max_multiplicity: 1,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SizeCount {
    pub vertices: usize,
    pub candidates: u64,
    pub iso_classes: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionReport {
    pub config: ObstructionConfig,
    /// Edge assignments passing every structural filter.
    pub candidates: u64,
    /// Candidates up to isomorphism fixing `w0`.
    pub iso_classes: usize,
    pub by_size: Vec<SizeCount>,
    pub counterexamples: Vec<GraphJson>,
}

impl ObstructionReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn text(&self) -> String {
        format!(
            "{} counterexamples among {} candidates ({} up to isomorphism)",
            self.counterexamples.len(),
            self.candidates,
            self.iso_classes
        )
    }
}

/// Structural filter on an arbitrary graph with distinguished `w0`, `w1`,
/// `w2`. Returns the first violated condition.
pub fn check_constraints(
    g: &DirectedGraph,
    w0: usize,
    w1: usize,
    w2: usize,
) -> std::result::Result<(), String> {
    let sinks: BTreeSet<usize> = g.sinks().into_iter().collect();
    if sinks != [w1, w2].into_iter().collect() {
        return Err("sinks must be exactly w1 and w2".into());
    }
    let loops = g.edges().iter().filter(|e| e.src == w0 && e.dst == w0).count();
    if loops != 1 {
        return Err("w0 must carry exactly one loop".into());
    }
    if g.edges().iter().any(|e| e.dst == w0 && e.src != w0) {
        return Err("edge into w0 from its complement".into());
    }
    // Remove the loop at w0 and test for any remaining cycle.
    let n = g.vertices().len();
    let mut indeg = vec![0usize; n];
    let rest: Vec<_> = g.edges().iter().filter(|e| !(e.src == w0 && e.dst == w0)).collect();
    for e in &rest {
        indeg[e.dst] += 1;
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for e in rest.iter().filter(|e| e.src == v) {
            indeg[e.dst] -= 1;
            if indeg[e.dst] == 0 {
                stack.push(e.dst);
            }
        }
    }
    if seen != n {
        return Err("cycle other than the loop at w0".into());
    }
    let v = g.hereditary_closure(&[w0].into_iter().collect());
    if !v.contains(&w1) || !v.contains(&w2) {
        return Err("sinks outside the hereditary closure of w0".into());
    }
    Ok(())
}

fn slots(k: usize) -> Vec<(usize, usize)> {
    let x = |i: usize| 3 + i;
    let mut s = vec![(0, 1), (0, 2)];
    s.extend((0..k).map(|i| (0, x(i))));
    for i in 0..k {
        for j in i + 1..k {
            s.push((x(i), x(j)));
        }
        s.push((x(i), 1));
        s.push((x(i), 2));
    }
    s
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &h) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, h);
            out.push(p);
        }
    }
    out
}

/// Vertex relabellings fixing `w0`: swap of the sinks times any
/// permutation of the remaining vertices.
fn symmetries(k: usize) -> Vec<Vec<usize>> {
    let xs: Vec<usize> = (3..3 + k).collect();
    let mut out = Vec::new();
    for sinks in [[1, 2], [2, 1]] {
        for p in permutations(&xs) {
            let mut perm = vec![0, sinks[0], sinks[1]];
            perm.extend(p);
            out.push(perm);
        }
    }
    out
}

fn canonical(adj: &[Vec<u32>], syms: &[Vec<usize>]) -> Vec<u32> {
    let n = adj.len();
    syms.iter()
        .map(|p| {
            let mut flat = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    flat.push(adj[p[i]][p[j]]);
                }
            }
            flat
        })
        .min()
        .unwrap_or_default()
}

struct Outcome {
    canon: Vec<u32>,
    member: bool,
    graph: GraphJson,
}

fn build(k: usize, slots: &[(usize, usize)], mult: &[u32]) -> DirectedGraph {
    let mut names = vec!["w0".to_string(), "w1".to_string(), "w2".to_string()];
    names.extend((1..=k).map(|i| format!("x{i}")));
    let mut edges = vec![("f".to_string(), "w0".to_string(), "w0".to_string())];
    for (&(s, d), &m) in slots.iter().zip(mult) {
        for c in 0..m {
            edges.push((format!("e_{}_{}_{}", names[s], names[d], c + 1), names[s].clone(), names[d].clone()));
        }
    }
    DirectedGraph::new(names, edges).expect("generated graphs are well formed")
}

fn sweep_size(k: usize, cfg: &ObstructionConfig) -> Vec<Outcome> {
    let sl = slots(k);
    let radix = u64::from(cfg.max_multiplicity) + 1;
    let total = radix.pow(sl.len() as u32);
    let syms = symmetries(k);
    let n = 3 + k;
    (0..total)
        .into_par_iter()
        .filter_map(|code| {
            let mut c = code;
            let mult: Vec<u32> = sl
                .iter()
                .map(|_| {
                    let m = (c % radix) as u32;
                    c /= radix;
                    m
                })
                .collect();
            let edges: u64 = 1 + mult.iter().map(|&m| u64::from(m)).sum::<u64>();
            if edges > cfg.max_edges as u64 {
                return None;
            }
            let mut adj = vec![vec![0u32; n]; n];
            adj[0][0] = 1;
            for (&(s, d), &m) in sl.iter().zip(&mult) {
                adj[s][d] += m;
            }
            if (3..n).any(|x| adj[x].iter().all(|&m| m == 0)) {
                return None;
            }
            let g = build(k, &sl, &mult);
            check_constraints(&g, 0, 1, 2).ok()?;
            let member = k0_class_membership(&g, &indicator(&g, &["w1", "w2"])).member;
            Some(Outcome {
                canon: canonical(&adj, &syms),
                member,
                graph: g.to_json(),
            })
        })
        .collect()
}

/// Runs the sweep over all sizes up to `cfg.max_vertices`.
pub fn enumerate_obstruction(cfg: &ObstructionConfig) -> Result<ObstructionReport> {
    if cfg.max_vertices > MAX_VERTICES {
        return Err(Error::Budget(format!(
            "max_vertices {} exceeds the limit {MAX_VERTICES}",
            cfg.max_vertices
        )));
    }
    let mut candidates = 0;
    let mut iso_classes = 0;
    let mut by_size = Vec::new();
    let mut counterexamples = Vec::new();
    for k in 0..=cfg.max_vertices.saturating_sub(3) {
        let radix = u64::from(cfg.max_multiplicity) + 1;
        let slots_len = slots(k).len() as u32;
        if radix.checked_pow(slots_len).is_none_or(|t| t > MAX_ASSIGNMENTS) {
            return Err(Error::Budget(format!(
                "{} vertices with multiplicity {} needs more than {MAX_ASSIGNMENTS} assignments",
                k + 3,
                cfg.max_multiplicity
            )));
        }
        let outcomes = sweep_size(k, cfg);
        let mut classes: BTreeMap<Vec<u32>, &Outcome> = BTreeMap::new();
        for o in &outcomes {
            classes.entry(o.canon.clone()).or_insert(o);
        }
        candidates += outcomes.len() as u64;
        iso_classes += classes.len();
        by_size.push(SizeCount {
            vertices: k + 3,
            candidates: outcomes.len() as u64,
            iso_classes: classes.len(),
        });
        counterexamples.extend(classes.values().filter(|o| !o.member).map(|o| o.graph.clone()));
    }
    Ok(ObstructionReport {
        config: *cfg,
        candidates,
        iso_classes,
        by_size,
        counterexamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_vertices() {
        let r = enumerate_obstruction(&ObstructionConfig::new(3)).unwrap();
        assert!(r.holds());
        assert_eq!(r.candidates, 1);
    }

    #[test]
    fn filter_rejects_unreachable_sink() {
        let g = DirectedGraph::new(
            vec!["w0".into(), "w1".into(), "w2".into(), "x1".into()],
            vec![
                ("f".into(), "w0".into(), "w0".into()),
                ("a".into(), "w0".into(), "w1".into()),
                ("b".into(), "x1".into(), "w2".into()),
            ],
        )
        .unwrap();
        assert_eq!(
            check_constraints(&g, 0, 1, 2).unwrap_err(),
            "sinks outside the hereditary closure of w0"
        );
    }

    #[test]
    fn too_many_vertices() {
        assert!(matches!(
            enumerate_obstruction(&ObstructionConfig::new(7)),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn iso_classes_fold_sink_swap() {
        // With four vertices, x1 -> w1 and x1 -> w2 variants are swapped by w1 <-> w2.
        let r = enumerate_obstruction(&ObstructionConfig::new(4)).unwrap();
        let four = &r.by_size[1];
        assert!(four.iso_classes < four.candidates as usize);
    }
}
