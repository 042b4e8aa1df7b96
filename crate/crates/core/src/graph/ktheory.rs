//! K-theory of graph algebras from the vertex lattice presentation.
//!
//! Rows are indexed by all vertices and columns by regular vertices; the
//! column of a regular vertex `v` is `A^t e_v - e_v`. Then `K0` is the
//! cokernel and `K1` the kernel of this map.

use num::{BigInt, Integer, One, Signed, Zero};
use serde::Serialize;

use super::snf::{smith_normal_form, IntMatrix, Snf};
use super::DirectedGraph;

#[derive(Clone, Debug, Serialize)]
pub struct KTheoryResult {
    pub k0_free_rank: usize,
    /// Invariant factors greater than one, each dividing the next.
    #[serde(serialize_with = "ser_ints")]
    pub k0_torsion: Vec<BigInt>,
    pub k1_free_rank: usize,
    pub presentation: IntMatrix,
    #[serde(serialize_with = "ser_ints")]
    pub snf_diagonal: Vec<BigInt>,
    pub k0: String,
    pub k1: String,
    pub convention: &'static str,
}

fn ser_ints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

pub const CONVENTION: &str = "rows: all vertices; columns: regular vertices; entries (A^t - I)[w][v]";

/// Group description like `"Z^2 + Z/2"`, `"Z"` or `"0"`.
pub fn describe_group(free: usize, torsion: &[BigInt]) -> String {
    let mut parts = Vec::new();
    match free {
        0 => {}
        1 => parts.push("Z".to_string()),
        k => parts.push(format!("Z^{k}")),
    }
    parts.extend(torsion.iter().map(|d| format!("Z/{d}")));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

pub fn presentation_matrix(g: &DirectedGraph) -> IntMatrix {
    let adj = g.adjacency();
    let regular = g.regular();
    let n = g.vertices().len();
    let data = (0..n)
        .map(|w| {
            regular
                .iter()
                .map(|&v| {
                    let mut x = BigInt::from(adj[v][w]);
                    if v == w {
                        x -= 1;
                    }
                    x
                })
                .collect()
        })
        .collect();
    IntMatrix {
        row_labels: g.vertices().to_vec(),
        col_labels: regular.iter().map(|&v| g.vertices()[v].clone()).collect(),
        data,
    }
}

pub fn k_theory(g: &DirectedGraph) -> KTheoryResult {
    let m = presentation_matrix(g);
    let snf = smith_normal_form(&m);
    let diag = snf.diagonal();
    let rank = diag.len();
    let torsion: Vec<BigInt> = diag.iter().filter(|d| !d.is_one()).cloned().collect();
    let k0_free_rank = m.rows() - rank;
    let k1_free_rank = m.cols() - rank;
    KTheoryResult {
        k0: describe_group(k0_free_rank, &torsion),
        k1: describe_group(k1_free_rank, &[]),
        k0_free_rank,
        k0_torsion: torsion,
        k1_free_rank,
        presentation: m,
        snf_diagonal: diag,
        convention: CONVENTION,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Membership {
    pub member: bool,
    /// Preimage indexed by regular vertices, when a member.
    pub preimage: Option<Vec<(String, String)>>,
}

/// Decides whether `target` (indexed by all vertices) lies in the image of
/// the presentation map, i.e. whether its class in `K0` vanishes.
pub fn k0_class_membership(g: &DirectedGraph, target: &[BigInt]) -> Membership {
    let m = presentation_matrix(g);
    assert_eq!(target.len(), m.rows());
    let snf = smith_normal_form(&m);
    match solve_in_image(&m, &snf, target) {
        None => Membership {
            member: false,
            preimage: None,
        },
        Some(x) => Membership {
            member: true,
            preimage: Some(
                m.col_labels
                    .iter()
                    .cloned()
                    .zip(x.iter().map(|v| v.to_string()))
                    .collect(),
            ),
        },
    }
}

fn solve_in_image(m: &IntMatrix, snf: &Snf, target: &[BigInt]) -> Option<Vec<BigInt>> {
    let ut = snf.u.mul_vec(target);
    let diag = snf.diagonal();
    let mut y = vec![BigInt::zero(); m.cols()];
    for (i, t) in ut.iter().enumerate() {
        match diag.get(i) {
            Some(d) => {
                let (q, r) = t.div_rem(d);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            }
            None if !t.is_zero() => return None,
            None => {}
        }
    }
    let x = snf.v.mul_vec(&y);
    assert_eq!(m.mul_vec(&x), target, "preimage check");
    Some(x)
}

/// Integer vector with `1` at each named vertex.
pub fn indicator(g: &DirectedGraph, names: &[&str]) -> Vec<BigInt> {
    let mut t = vec![BigInt::zero(); g.vertices().len()];
    for n in names {
        if let Some(i) = g.vertex(n) {
            t[i] += 1;
        }
    }
    t
}

impl KTheoryResult {
    pub fn is_z(&self, k0: (usize, usize), k1: usize) -> bool {
        self.k0_free_rank == k0.0 && self.k0_torsion.len() == k0.1 && self.k1_free_rank == k1
    }

    pub fn text(&self) -> String {
        format!("K0 = {}, K1 = {}", self.k0, self.k1)
    }

    pub fn torsion_abs_product(&self) -> BigInt {
        self.snf_diagonal.iter().map(|d| d.abs()).product()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(vs: &[&str], es: &[(&str, &str)]) -> DirectedGraph {
        DirectedGraph::new(
            vs.iter().map(|s| s.to_string()).collect(),
            es.iter()
                .enumerate()
                .map(|(i, (a, b))| (format!("e{i}"), a.to_string(), b.to_string()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn disc_and_circle() {
        let m1 = g(&["v1", "v2"], &[("v1", "v1"), ("v1", "v2")]);
        assert_eq!(k_theory(&m1).text(), "K0 = Z, K1 = 0");
        let loop1 = g(&["v"], &[("v", "v")]);
        assert_eq!(k_theory(&loop1).text(), "K0 = Z, K1 = Z");
        let zc2 = g(&["v1", "v2"], &[("v1", "v1"), ("v1", "v2"), ("v2", "v2")]);
        assert_eq!(k_theory(&zc2).text(), "K0 = Z, K1 = Z");
    }

    #[test]
    fn torsion_group() {
        // Three loops at a vertex: O_3 with K0 = Z/2.
        let o3 = g(&["v"], &[("v", "v"), ("v", "v"), ("v", "v")]);
        assert_eq!(k_theory(&o3).text(), "K0 = Z/2, K1 = 0");
    }

    #[test]
    fn membership_examples() {
        let m1 = g(&["v1", "v2"], &[("v1", "v1"), ("v1", "v2")]);
        let zero = vec![BigInt::zero(); 2];
        let r = k0_class_membership(&m1, &zero);
        assert!(r.member);
        assert!(k0_class_membership(&m1, &indicator(&m1, &["v2"])).member);
        assert!(!k0_class_membership(&m1, &indicator(&m1, &["v1"])).member);
        let cand = g(&["w0", "w1", "w2"], &[("w0", "w0"), ("w0", "w1"), ("w0", "w2")]);
        assert!(k0_class_membership(&cand, &indicator(&cand, &["w1", "w2"])).member);
    }
}
