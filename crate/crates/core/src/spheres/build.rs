//! Graphs, correspondences and generator maps of the disc, odd sphere and
//! mirrored disc.

use std::sync::Arc;

use super::poly::Poly;
use super::SphereConfig;
use crate::algebra::PresentedCommAlgebra;
use crate::corr::{CorrBuilder, CorrMorphism, PresentedCorrespondence};
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::labelled::{LabelledGraph, LabelledSpace, SetExpr, Vertex};
use crate::scalar::{one, Scalar};

pub fn vx(i: usize) -> String {
    format!("v_{i}")
}
pub fn edge(i: usize, j: usize) -> String {
    format!("e_{{{i},{j}}}")
}
pub fn w(i: usize, j: usize) -> String {
    format!("w_{{{i},{j}}}")
}
pub fn z(i: usize, j: usize) -> String {
    format!("z_{{{i},{j}}}")
}
pub fn x(i: usize, j: usize) -> String {
    format!("x_{{{i},{j}}}")
}
/// `x_{i,n,j}`.
pub fn xn(i: usize, n: usize, j: usize) -> String {
    format!("x_{{{i},{n},{j}}}")
}
pub fn yi(i: usize) -> String {
    format!("y_{i}")
}
pub const Y: &str = "y";
pub const YP: &str = "y'";
pub fn p(i: usize) -> String {
    format!("P_{i}")
}
pub fn s(i: usize) -> String {
    format!("S_{i}")
}
pub fn r(i: usize) -> String {
    format!("R_{i}")
}
pub fn q(j: usize) -> String {
    format!("Q_{j}")
}

/// Edges `e_{i,j}` with `1 ≤ i ≤ rows` and `i ≤ j ≤ cols` on vertices
/// `v_1..v_verts`.
fn triangle_graph(verts: usize, rows: usize, cols: usize) -> DirectedGraph {
    let vertices = (1..=verts).map(vx).collect();
    let edges = (1..=rows)
        .flat_map(|i| (i..=cols).map(move |j| (edge(i, j), vx(i), vx(j))))
        .collect();
    DirectedGraph::new(vertices, edges).expect("triangle graphs are well formed")
}

/// The graph `M_n` of the quantum disc: `v_{n+1}` is its only sink.
pub fn build_disc_graph(cfg: &SphereConfig) -> DirectedGraph {
    triangle_graph(cfg.n + 1, cfg.n, cfg.n + 1)
}

/// The odd-sphere graph: a loop at each `v_i` and one edge `v_i → v_j`
/// for every `i < j ≤ n`.
pub fn build_odd_sphere_graph(cfg: &SphereConfig) -> DirectedGraph {
    triangle_graph(cfg.n, cfg.n, cfg.n)
}

pub fn loop_graph() -> DirectedGraph {
    DirectedGraph::new(vec!["v".into()], vec![("e".into(), "v".into(), "v".into())]).expect("loop")
}

/// Identity-labelled space of a finite graph, generated by its vertices;
/// its labelled algebra is the graph algebra.
pub fn graph_engine(g: &DirectedGraph) -> Result<LabelledSpace> {
    let gens = g.vertices().iter().map(|v| SetExpr::singleton(Vertex::named(v))).collect();
    LabelledSpace::new(LabelledGraph::identity(g), gens)
}

/// Graph correspondence of a triangle graph: generators `{gen}_{i,j}` for
/// the edges, projections `{proj}_i` for the vertices.
fn graph_correspondence(
    g: &DirectedGraph,
    proj: fn(usize) -> String,
    gen: fn(usize, usize) -> String,
) -> Result<PresentedCorrespondence> {
    let nv = g.vertices().len();
    let algebra = PresentedCommAlgebra::orthogonal((1..=nv).map(proj));
    let ends: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.src + 1, e.dst + 1)).collect();
    let names: Vec<String> = ends.iter().map(|&(i, j)| gen(i, j)).collect();
    let mut b = CorrBuilder::new(algebra.clone(), names.clone())?;
    for (k, &(i, j)) in ends.iter().enumerate() {
        b.right_to(&names[k], &proj(j), Some(&names[k]))?;
        b.inner(&names[k], &names[k], algebra.elem(&proj(j))?)?;
        b.left(&proj(i), &names[k], &[(&names[k], one())])?;
    }
    b.build()
}

/// `(X, A)`: the graph correspondence of `M_n`.
pub fn build_x_a(cfg: &SphereConfig) -> Result<PresentedCorrespondence> {
    graph_correspondence(&build_disc_graph(cfg), p, w)
}

/// `(Z, C)`: the graph correspondence of the odd-sphere graph.
pub fn build_z_c(cfg: &SphereConfig) -> Result<PresentedCorrespondence> {
    graph_correspondence(&build_odd_sphere_graph(cfg), s, z)
}

/// Generator names of the truncated `(Y, B)`.
pub fn y_generators(cfg: &SphereConfig) -> Vec<String> {
    let (n, t) = (cfg.n, cfg.trunc);
    let mut g = vec![];
    for i in 1..n {
        g.extend((i..=n + 1).map(|j| x(i, j)));
    }
    for i in 1..n {
        g.extend((1..=t).map(|j| xn(i, n, j)));
    }
    g.push(Y.into());
    g.push(YP.into());
    g.extend((1..t).map(yi));
    g
}

/// `(Y, B)` with `Q_j`, `x_{i,n,j}` for `j ≤ N` and `y_j` for `j < N`.
/// The left action is declared on every basis element except `Q_N`,
/// whose image `φ(Q_N)y = y_N` lies past the truncation.
pub fn build_y_b(cfg: &SphereConfig) -> Result<PresentedCorrespondence> {
    let (n, t) = (cfg.n, cfg.trunc);
    let mut basis: Vec<String> = (1..=n + 1).map(r).collect();
    basis.extend((1..=t).map(q));
    let mult = (1..=t).map(|j| (r(n), q(j), vec![(q(j), one())])).collect();
    let algebra = PresentedCommAlgebra::new(basis.clone(), mult)?;
    let el = |sym: &str| algebra.elem(sym);
    let mut b = CorrBuilder::new(algebra.clone(), y_generators(cfg))?;
    let put_right = |b: &mut CorrBuilder, g: &str, basis: &str, h: &str| b.right_to(g, basis, Some(h)).map(|_| ());
    for i in 1..n {
        for j in i..=n + 1 {
            let g = x(i, j);
            put_right(&mut b, &g, &r(j), &g)?;
            b.inner(&g, &g, el(&r(j))?)?;
            b.left(&r(i), &g, &[(&g, one())])?;
        }
        for j in 1..=t {
            let g = xn(i, n, j);
            put_right(&mut b, &x(i, n), &q(j), &g)?;
            put_right(&mut b, &g, &r(n), &g)?;
            put_right(&mut b, &g, &q(j), &g)?;
            b.inner(&x(i, n), &g, el(&q(j))?)?;
            b.inner(&g, &g, el(&q(j))?)?;
            b.left(&r(i), &g, &[(&g, one())])?;
        }
    }
    put_right(&mut b, Y, &r(n), Y)?;
    put_right(&mut b, Y, &q(1), YP)?;
    put_right(&mut b, YP, &r(n), YP)?;
    put_right(&mut b, YP, &q(1), YP)?;
    b.inner(Y, Y, el(&r(n))?)?;
    b.inner(Y, YP, el(&q(1))?)?;
    b.inner(YP, YP, el(&q(1))?)?;
    b.left(&r(n), Y, &[(Y, one()), (YP, -one())])?;
    b.left(&r(n + 1), Y, &[(YP, one())])?;
    b.left(&r(n + 1), YP, &[(YP, one())])?;
    for k in 2..=t {
        put_right(&mut b, Y, &q(k), &yi(k - 1))?;
    }
    for i in 1..t {
        let g = yi(i);
        put_right(&mut b, &g, &r(n), &g)?;
        put_right(&mut b, &g, &q(i + 1), &g)?;
        b.inner(Y, &g, el(&q(i + 1))?)?;
        b.inner(&g, &g, el(&q(i + 1))?)?;
        b.left(&r(n), &g, &[(&g, one())])?;
        b.left(&q(i), Y, &[(&g, one())])?;
        b.left(&q(i), &g, &[(&g, one())])?;
    }
    let domain: Vec<&str> = basis.iter().filter(|s| **s != q(t)).map(String::as_str).collect();
    b.left_domain(&domain)?;
    b.build()
}

fn terms(v: &[(String, Scalar)]) -> Vec<(&str, Scalar)> {
    v.iter().map(|(s, c)| (s.as_str(), c.clone())).collect()
}

fn morphism_from(
    src: Arc<PresentedCorrespondence>,
    tgt: Arc<PresentedCorrespondence>,
    module: &[(String, Vec<(String, Scalar)>)],
    algebra: &[(String, Vec<(String, Scalar)>)],
) -> Result<CorrMorphism> {
    let m: Vec<(&str, Vec<(&str, Scalar)>)> = module.iter().map(|(g, v)| (g.as_str(), terms(v))).collect();
    let a: Vec<(&str, Vec<(&str, Scalar)>)> = algebra.iter().map(|(g, v)| (g.as_str(), terms(v))).collect();
    CorrMorphism::from_names(src, tgt, &m, &a)
}

/// `Ψ` on the generators of `O_X`, as polynomials over `O_Z`.
pub fn psi_poly(cfg: &SphereConfig, sym: &str) -> Poly {
    let n = cfg.n;
    for i in 1..=n {
        for j in i..=n {
            if sym == w(i, j) {
                return Poly::sym(z(i, j));
            }
        }
        if sym == p(i) {
            return Poly::sym(s(i));
        }
    }
    Poly::zero()
}

/// `β` on the generators of `O_Z`: `z_{n,n} ↦ z_{n,n}*`, the rest fixed.
pub fn beta_poly(cfg: &SphereConfig, sym: &str) -> Poly {
    if sym == z(cfg.n, cfg.n) {
        Poly::adj(sym)
    } else {
        Poly::sym(sym)
    }
}

/// The projection `a_j` of `O_X`.
pub fn a_poly(cfg: &SphereConfig, j: usize) -> Poly {
    let n = cfg.n;
    let t = Poly::sym(w(n, n)).add(&Poly::sym(w(n, n + 1)));
    t.pow(j).mul(&Poly::sym(p(n + 1))).mul(&t.star().pow(j))
}

/// `Π_Y` on the generators of `O_Y`, as polynomials over `O_X`.
pub fn pi_y_poly(cfg: &SphereConfig, sym: &str) -> Result<Poly> {
    let n = cfg.n;
    let tail = Poly::adj(w(n, n)).add(&Poly::adj(w(n, n + 1)));
    if sym == Y {
        return Ok(tail);
    }
    if sym == YP {
        return Ok(Poly::adj(w(n, n + 1)));
    }
    for i in 1..=n + 1 {
        if sym == r(i) {
            return Ok(Poly::sym(p(i)));
        }
    }
    for j in 1..=cfg.trunc {
        if sym == q(j) {
            return Ok(a_poly(cfg, j));
        }
        if sym == yi(j) {
            return Ok(a_poly(cfg, j).mul(&tail));
        }
    }
    for i in 1..n {
        for j in i..=n + 1 {
            if sym == x(i, j) {
                return Ok(Poly::sym(w(i, j)));
            }
        }
        for j in 1..=cfg.trunc {
            if sym == xn(i, n, j) {
                return Ok(Poly::sym(w(i, n)).mul(&a_poly(cfg, j)));
            }
        }
    }
    Err(Error::domain(format!("{sym} is not a generator of O_Y")))
}

/// `Π_X` on the generators of `O_X`, as polynomials over `O_Y`.
pub fn pi_x_poly(cfg: &SphereConfig, sym: &str) -> Result<Poly> {
    let n = cfg.n;
    if sym == w(n, n) {
        return Ok(Poly::adj(Y).sub(&Poly::adj(YP)));
    }
    if sym == w(n, n + 1) {
        return Ok(Poly::adj(YP));
    }
    for i in 1..=n + 1 {
        if sym == p(i) {
            return Ok(Poly::sym(r(i)));
        }
    }
    for i in 1..n {
        for j in i..=n + 1 {
            if sym == w(i, j) {
                return Ok(Poly::sym(x(i, j)));
            }
        }
    }
    Err(Error::domain(format!("{sym} is not a generator of O_X")))
}

/// `β ∘ Ψ ∘ Π_Y` on a generator of `O_Y`.
pub fn omega_poly(cfg: &SphereConfig, sym: &str) -> Result<Poly> {
    Ok(pi_y_poly(cfg, sym)?
        .subst(&|t| psi_poly(cfg, t))
        .subst(&|t| beta_poly(cfg, t)))
}

/// `(ψ_X, ψ_A): (X, A) → (Z, C)`.
pub fn build_psi(cfg: &SphereConfig, xa: Arc<PresentedCorrespondence>, zc: Arc<PresentedCorrespondence>) -> Result<CorrMorphism> {
    let n = cfg.n;
    let mut module = vec![];
    for i in 1..=n {
        for j in i..=n {
            module.push((w(i, j), vec![(z(i, j), one())]));
        }
    }
    let algebra: Vec<_> = (1..=n).map(|i| (p(i), vec![(s(i), one())])).collect();
    morphism_from(xa, zc, &module, &algebra)
}

/// `(ω_Y, ω_B): (Y, B) → (Z, C)`, computed generator by generator from
/// `β ∘ Ψ ∘ Π_Y`. Each image must reduce to a combination of single
/// generators of `Z`, respectively of `C`.
pub fn build_omega(cfg: &SphereConfig, yb: Arc<PresentedCorrespondence>, zc: Arc<PresentedCorrespondence>) -> Result<CorrMorphism> {
    let linear = |sym: &str| -> Result<Vec<(String, Scalar)>> {
        let img = omega_poly(cfg, sym)?;
        img.linear()
            .ok_or_else(|| Error::domain(format!("β∘Ψ∘Π_Y({sym}) = {img} is not a generator image")))
    };
    let module = yb
        .generators()
        .iter()
        .map(|g| Ok((g.clone(), linear(g)?)))
        .collect::<Result<Vec<_>>>()?;
    let algebra = yb
        .algebra()
        .basis()
        .iter()
        .map(|b| Ok((b.clone(), linear(b)?)))
        .collect::<Result<Vec<_>>>()?;
    morphism_from(yb, zc, &module, &algebra)
}

/// The three correspondences and two morphisms of the gluing data.
#[derive(Clone, Debug)]
pub struct GluingData {
    pub xa: Arc<PresentedCorrespondence>,
    pub yb: Arc<PresentedCorrespondence>,
    pub zc: Arc<PresentedCorrespondence>,
    pub psi: CorrMorphism,
    pub omega: CorrMorphism,
}

pub fn gluing_data(cfg: &SphereConfig) -> Result<GluingData> {
    let xa = Arc::new(build_x_a(cfg)?);
    let yb = Arc::new(build_y_b(cfg)?);
    let zc = Arc::new(build_z_c(cfg)?);
    let psi = build_psi(cfg, xa.clone(), zc.clone())?;
    let omega = build_omega(cfg, yb.clone(), zc.clone())?;
    Ok(GluingData { xa, yb, zc, psi, omega })
}

/// Evaluates a generator of a graph engine built by [`graph_engine`]:
/// `{gen}_{i,j} ↦ s_{e_{i,j}}` and `{proj}_i ↦ p_{v_i}`.
pub fn graph_generator(engine: &LabelledSpace, sym: &str) -> Result<crate::labelled::LabelledElement> {
    let (head, rest) = sym
        .split_once('_')
        .ok_or_else(|| Error::domain(format!("{sym} is not a graph generator")))?;
    match head {
        "w" | "z" => engine.s(&format!("e_{rest}")),
        "P" | "S" => engine.p(&SetExpr::singleton(Vertex::named(format!("v_{rest}")))),
        _ => Err(Error::domain(format!("{sym} is not a graph generator"))),
    }
}
