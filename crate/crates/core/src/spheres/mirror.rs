//! The mirror quantum sphere: the restricted direct sum of the gluing data
//! and its labelled-graph model `E_n`.

use super::build::{p, q, r, w, x, xn, yi, GluingData, Y, YP};
use super::SphereConfig;
use crate::algebra::AlgElement;
use crate::corr::{restricted_direct_sum, Assignment, ModuleElement, RestrictedSum, SumSpec};
use crate::error::{Error, Result};
use crate::labelled::{
    EdgeFamily, Endpoint, FamilyLabel, LEdge, LabelledElement, LabelledGraph, LabelledSpace, SetExpr, SpaceOptions,
    Vertex,
};
use crate::scalar::one;

/// The generating pairs of the mirror sum, each with a tag used to assign
/// its image in the labelled model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SumPair {
    /// `(w_{i,j}, x_{i,j})`.
    Both(usize, usize),
    /// `(0, x_{i,n,j})`.
    Tail(usize, usize),
    /// `(0, y_i)`.
    Ys(usize),
    /// `(w_{n,n}, y)`.
    Diag,
    /// `(w_{n,n+1}, 0)`.
    Exit,
    /// `(0, y′)`.
    YPrime,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SumProjection {
    /// `(P_i, R_i)`, `i ≤ n`.
    Both(usize),
    /// `(0, Q_j)`.
    Q(usize),
    /// `(P_{n+1}, 0)`.
    SinkX,
    /// `(0, R_{n+1})`.
    SinkY,
}

pub fn sum_pairs(cfg: &SphereConfig) -> Vec<SumPair> {
    let (n, t) = (cfg.n, cfg.trunc);
    let mut v = vec![];
    for i in 1..n {
        v.extend((i..=n + 1).map(|j| SumPair::Both(i, j)));
    }
    for i in 1..n {
        v.extend((1..=t).map(|j| SumPair::Tail(i, j)));
    }
    v.extend((1..t).map(SumPair::Ys));
    v.extend([SumPair::Diag, SumPair::Exit, SumPair::YPrime]);
    v
}

pub fn sum_projections(cfg: &SphereConfig) -> Vec<SumProjection> {
    let mut v: Vec<SumProjection> = (1..=cfg.n).map(SumProjection::Both).collect();
    v.extend((1..=cfg.trunc).map(SumProjection::Q));
    v.extend([SumProjection::SinkX, SumProjection::SinkY]);
    v
}

fn pair_components(g: &GluingData, cfg: &SphereConfig, pair: &SumPair) -> Result<(ModuleElement, ModuleElement)> {
    let n = cfg.n;
    let (xa, yb) = (&g.xa, &g.yb);
    Ok(match pair {
        SumPair::Both(i, j) => (xa.elem(&w(*i, *j))?, yb.elem(&x(*i, *j))?),
        SumPair::Tail(i, j) => (xa.zero(), yb.elem(&xn(*i, n, *j))?),
        SumPair::Ys(i) => (xa.zero(), yb.elem(&yi(*i))?),
        SumPair::Diag => (xa.elem(&w(n, n))?, yb.elem(Y)?),
        SumPair::Exit => (xa.elem(&w(n, n + 1))?, yb.zero()),
        SumPair::YPrime => (xa.zero(), yb.elem(YP)?),
    })
}

fn projection_components(g: &GluingData, cfg: &SphereConfig, pr: &SumProjection) -> Result<(AlgElement, AlgElement)> {
    let (a, b) = (g.xa.algebra(), g.yb.algebra());
    Ok(match pr {
        SumProjection::Both(i) => (a.elem(&p(*i))?, b.elem(&r(*i))?),
        SumProjection::Q(j) => (a.zero(), b.elem(&q(*j))?),
        SumProjection::SinkX => (a.elem(&p(cfg.n + 1))?, b.zero()),
        SumProjection::SinkY => (a.zero(), b.elem(&r(cfg.n + 1))?),
    })
}

/// The mirror sum, with each generator tagged by the pair it came from.
#[derive(Clone, Debug)]
pub struct MirrorSum {
    pub sum: RestrictedSum,
    pub pairs: Vec<(SumPair, usize)>,
    pub projections: Vec<(SumProjection, usize)>,
}

/// The restricted direct sum `X ⊕_Z Y`, built from the listed pairs and
/// projections; the construction verifies both lists against the kernel.
pub fn build_mirror_sum(cfg: &SphereConfig, g: &GluingData) -> Result<MirrorSum> {
    let pairs = sum_pairs(cfg);
    let projs = sum_projections(cfg);
    let pc = pairs.iter().map(|pr| pair_components(g, cfg, pr)).collect::<Result<Vec<_>>>()?;
    let qc = projs.iter().map(|pr| projection_components(g, cfg, pr)).collect::<Result<Vec<_>>>()?;
    let spec = SumSpec {
        projections: Some(qc.clone()),
        pairs: Some(pc.clone()),
    };
    let sum = restricted_direct_sum(&g.psi, &g.omega, &spec)?;
    let tagged_pairs = pairs
        .into_iter()
        .zip(&pc)
        .map(|(t, (a, b))| {
            sum.gen_named(a, b)
                .map(|k| (t, k))
                .ok_or_else(|| Error::domain("listed pair is not a generator of the sum"))
        })
        .collect::<Result<Vec<_>>>()?;
    let tagged_projs = projs
        .into_iter()
        .zip(&qc)
        .map(|(t, (a, b))| {
            sum.basis
                .iter()
                .position(|(u, v)| u == a && v == b)
                .map(|k| (t, k))
                .ok_or_else(|| Error::domain("listed projection is not a basis element of the sum"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MirrorSum {
        sum,
        pairs: tagged_pairs,
        projections: tagged_projs,
    })
}

pub fn u(i: usize) -> Vertex {
    Vertex::named(format!("u_{i}"))
}
pub fn w1() -> Vertex {
    Vertex::named("w_1")
}
pub fn w2() -> Vertex {
    Vertex::named("w_2")
}
/// `A_i = {v_j : j ≥ i}`.
pub fn tail_set(i: usize) -> SetExpr {
    SetExpr::tail("v", i as u32)
}
pub fn label_e(i: usize, j: usize) -> String {
    format!("e_{{{i},{j}}}")
}
pub fn label_f(i: usize) -> String {
    format!("f_{i}")
}

/// The labelled graph `E_n`. The loops and edges among the `u_i` carry
/// their own labels; every `f_{i,j}` is labelled `f_i`, every `g_i` is
/// labelled `g` and every `h_i` is labelled `h`.
pub fn build_en_graph(cfg: &SphereConfig) -> Result<LabelledGraph> {
    let n = cfg.n;
    let mut vertices: Vec<Vertex> = (1..n).map(u).collect();
    vertices.extend([w1(), w2()]);
    let mut edges = vec![];
    let mut families = vec![];
    let ledge = |name: String, src: Vertex, dst: Vertex, label: String| LEdge { name, src, dst, label };
    for i in 1..n {
        for j in i..n {
            edges.push(ledge(label_e(i, j), u(i), u(j), label_e(i, j)));
        }
        let f = label_f(i);
        edges.push(ledge(format!("{f}_1"), u(i), w1(), f.clone()));
        edges.push(ledge(format!("{f}_2"), u(i), w2(), f.clone()));
        families.push(EdgeFamily {
            name: f.clone(),
            from: 3,
            src: Endpoint::Named(u(i)),
            dst: Endpoint::Indexed { base: "v".into(), offset: -2 },
            label: FamilyLabel::Constant(f),
        });
    }
    edges.push(ledge("g_1".into(), w2(), Vertex::indexed("v", 1), "g".into()));
    families.push(EdgeFamily {
        name: "g".into(),
        from: 2,
        src: Endpoint::Indexed { base: "v".into(), offset: -1 },
        dst: Endpoint::Indexed { base: "v".into(), offset: 0 },
        label: FamilyLabel::Constant("g".into()),
    });
    families.push(EdgeFamily {
        name: "h".into(),
        from: 1,
        src: Endpoint::Indexed { base: "v".into(), offset: 0 },
        dst: Endpoint::Named(w1()),
        label: FamilyLabel::Constant("h".into()),
    });
    LabelledGraph::new(vertices, vec!["v".into()], edges, families)
}

/// Horizon of the `E_n` closure: tails `A_j` are resolved exactly for
/// `j ≤ N + 6`.
pub fn en_horizon(cfg: &SphereConfig) -> u32 {
    cfg.trunc as u32 + 6
}

/// The generating sets `{u_i}`, `{w_1}`, `A_i` and `A_1 ∪ {w_2}` of the
/// accommodating family, with `A_i` listed for `i ≤ N + 2`.
pub fn en_generators(cfg: &SphereConfig) -> Vec<SetExpr> {
    let mut g: Vec<SetExpr> = (1..cfg.n).map(|i| SetExpr::singleton(u(i))).collect();
    g.push(SetExpr::singleton(w1()));
    g.extend((1..=cfg.trunc + 2).map(tail_set));
    g.push(tail_set(1).union(&SetExpr::singleton(w2())));
    g
}

pub fn build_en_space(cfg: &SphereConfig) -> Result<LabelledSpace> {
    let opts = SpaceOptions {
        horizon: Some(en_horizon(cfg)),
        budget: None,
    };
    LabelledSpace::with_options(build_en_graph(cfg)?, en_generators(cfg), &opts)
}

/// Image of a generating pair in the labelled algebra of `E_n`.
pub fn rho_pair(cfg: &SphereConfig, en: &LabelledSpace, pair: &SumPair) -> Result<LabelledElement> {
    let n = cfg.n;
    let term = |label: String, set: SetExpr| en.term(&[label], &set, &[], one());
    let a = |i: usize| tail_set(i);
    let single = |v: Vertex| SetExpr::singleton(v);
    Ok(match pair {
        SumPair::Both(i, j) if *j < n => term(label_e(*i, *j), single(u(*j)))?,
        SumPair::Both(i, j) if *j == n => term(label_f(*i), a(1))?,
        SumPair::Both(i, _) => {
            let f = label_f(*i);
            let w2a = a(1).union(&single(w2()));
            term(f.clone(), single(w1()))?
                .add(&term(f.clone(), w2a)?)?
                .sub(&term(f, a(1))?)?
        }
        SumPair::Tail(i, j) => term(label_f(*i), a(*j))?.sub(&term(label_f(*i), a(j + 1))?)?,
        SumPair::Ys(i) => term("g".into(), a(i + 1))?.sub(&term("g".into(), a(i + 2))?)?,
        SumPair::Diag => term("g".into(), a(1))?,
        SumPair::Exit => term("h".into(), single(w1()))?,
        SumPair::YPrime => term("g".into(), a(1))?.sub(&term("g".into(), a(2))?)?,
    })
}

/// Image of a sum projection. With `perturb`, `(0, Q_j)` is sent to
/// `P_{A_j}` instead of `P_{A_j} − P_{A_{j+1}}`.
pub fn rho_projection(cfg: &SphereConfig, en: &LabelledSpace, pr: &SumProjection, perturb: bool) -> Result<LabelledElement> {
    Ok(match pr {
        SumProjection::Both(i) if *i < cfg.n => en.p(&SetExpr::singleton(u(*i)))?,
        SumProjection::Both(_) => en.p(&tail_set(1))?,
        SumProjection::Q(j) if perturb => en.p(&tail_set(*j))?,
        SumProjection::Q(j) => en.p(&tail_set(*j))?.sub(&en.p(&tail_set(j + 1))?)?,
        SumProjection::SinkX => en.p(&SetExpr::singleton(w1()))?,
        SumProjection::SinkY => en
            .p(&tail_set(1).union(&SetExpr::singleton(w2())))?
            .sub(&en.p(&tail_set(1))?)?,
    })
}

/// The assignment `(ρ, ρ_A)` of the mirror sum into the labelled algebra
/// of `E_n`; generators produced by the right-action closure get
/// `ρ(parent) ρ_A(b)`.
pub fn rho_assignment(
    cfg: &SphereConfig,
    ms: &MirrorSum,
    en: &LabelledSpace,
    perturb: bool,
) -> Result<Assignment<LabelledElement>> {
    let c = &ms.sum.corr;
    let mut gens: Vec<Option<LabelledElement>> = vec![None; c.generators().len()];
    for (t, k) in &ms.pairs {
        gens[*k] = Some(rho_pair(cfg, en, t)?);
    }
    let mut alg = vec![en.zero_element(); c.algebra().dim()];
    for (t, k) in &ms.projections {
        alg[*k] = rho_projection(cfg, en, t, perturb)?;
    }
    Assignment::complete(c, en, gens, alg)
}
