//! Labelled graphs, finite or described by affine-indexed edge families.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::set::{SetExpr, Vertex};
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Named(Vertex),
    /// `base_{j + offset}` for the family index `j`.
    Indexed { base: String, offset: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyLabel {
    Constant(String),
    /// Each instance is labelled by its own edge name.
    Identity,
}

/// Edges `name_j` for every `j >= from`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeFamily {
    pub name: String,
    pub from: u32,
    pub src: Endpoint,
    pub dst: Endpoint,
    pub label: FamilyLabel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LEdge {
    pub name: String,
    pub src: Vertex,
    pub dst: Vertex,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelledGraph {
    vertices: Vec<Vertex>,
    bases: Vec<String>,
    edges: Vec<LEdge>,
    families: Vec<EdgeFamily>,
}

/// Indices `j` of a family: a finite set plus an optional tail `j >= t`.
#[derive(Clone, Debug, Default)]
struct JSet {
    finite: BTreeSet<u32>,
    tail: Option<u32>,
}

impl JSet {
    fn is_empty(&self) -> bool {
        self.finite.is_empty() && self.tail.is_none()
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ResolvingWitness {
    pub vertex: String,
    pub label: String,
}

fn at(base: &str, j: i64) -> Option<Vertex> {
    (j >= 1).then(|| Vertex::indexed(base, j as u32))
}

impl Endpoint {
    fn instance(&self, j: u32) -> Option<Vertex> {
        match self {
            Endpoint::Named(v) => Some(v.clone()),
            Endpoint::Indexed { base, offset } => at(base, i64::from(j) + offset),
        }
    }

    fn image(&self, js: &JSet) -> SetExpr {
        if js.is_empty() {
            return SetExpr::empty();
        }
        match self {
            Endpoint::Named(v) => SetExpr::singleton(v.clone()),
            Endpoint::Indexed { base, offset } => {
                let atoms = js
                    .finite
                    .iter()
                    .filter_map(|&j| at(base, i64::from(j) + offset))
                    .collect();
                let mut tails = BTreeMap::new();
                if let Some(t) = js.tail {
                    tails.insert(base.clone(), (i64::from(t) + offset).max(1) as u32);
                }
                SetExpr::new(atoms, tails)
            }
        }
    }
}

impl EdgeFamily {
    pub fn instance_name(&self, j: u32) -> String {
        format!("{}_{}", self.name, j)
    }

    pub fn label_of(&self, j: u32) -> String {
        match &self.label {
            FamilyLabel::Constant(l) => l.clone(),
            FamilyLabel::Identity => self.instance_name(j),
        }
    }

    /// Instances whose source lies in `a`.
    fn sourced_in(&self, a: &SetExpr) -> JSet {
        let mut js = JSet::default();
        match &self.src {
            Endpoint::Named(v) => {
                if a.contains(v) {
                    js.tail = Some(self.from);
                }
            }
            Endpoint::Indexed { base, offset } => {
                for v in a.atoms().iter().filter(|v| &v.base == base) {
                    if let Some(i) = v.index {
                        let j = i64::from(i) - offset;
                        if j >= i64::from(self.from) {
                            js.finite.insert(j as u32);
                        }
                    }
                }
                if let Some(&k) = a.tails().get(base) {
                    let t = (i64::from(k) - offset).max(i64::from(self.from)) as u32;
                    js.tail = Some(t);
                    js.finite.retain(|&j| j < t);
                }
            }
        }
        js
    }

    fn parse_index(&self, label: &str) -> Option<u32> {
        let rest = label.strip_prefix(&self.name)?.strip_prefix('_')?;
        let j: u32 = rest.parse().ok()?;
        (j >= self.from).then_some(j)
    }
}

impl LabelledGraph {
    pub fn new(
        vertices: Vec<Vertex>,
        bases: Vec<String>,
        edges: Vec<LEdge>,
        families: Vec<EdgeFamily>,
    ) -> Result<Self> {
        let g = LabelledGraph {
            vertices,
            bases,
            edges,
            families,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for v in &self.vertices {
            if !seen.insert(v) {
                return Err(Error::invalid("labelled graph", format!("duplicate vertex {v}")));
            }
            if v.index.is_some() && self.bases.contains(&v.base) {
                return Err(Error::invalid(
                    "labelled graph",
                    format!("vertex {v} also belongs to indexed family {}", v.base),
                ));
            }
        }
        let mut names = HashSet::new();
        for e in &self.edges {
            if !names.insert(e.name.clone()) {
                return Err(Error::invalid("labelled graph", format!("duplicate edge {}", e.name)));
            }
            for end in [&e.src, &e.dst] {
                if !self.is_vertex(end) {
                    return Err(Error::invalid(
                        "labelled graph",
                        format!("edge {} has unknown endpoint {end}", e.name),
                    ));
                }
            }
        }
        for f in &self.families {
            if f.from == 0 {
                return Err(Error::invalid("labelled graph", format!("family {} starts at 0", f.name)));
            }
            for end in [&f.src, &f.dst] {
                match end {
                    Endpoint::Named(v) if !self.is_vertex(v) => {
                        return Err(Error::invalid(
                            "labelled graph",
                            format!("family {} has unknown endpoint {v}", f.name),
                        ))
                    }
                    Endpoint::Indexed { base, offset } => {
                        if !self.bases.contains(base) {
                            return Err(Error::invalid(
                                "labelled graph",
                                format!("family {} uses undeclared base {base}", f.name),
                            ));
                        }
                        if i64::from(f.from) + offset < 1 {
                            return Err(Error::invalid(
                                "labelled graph",
                                format!("family {} reaches index below 1", f.name),
                            ));
                        }
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// Identity-labelled copy of a finite graph.
    pub fn identity(g: &DirectedGraph) -> Self {
        let labels: BTreeMap<String, String> =
            g.edges().iter().map(|e| (e.name.clone(), e.name.clone())).collect();
        Self::from_graph(g, &labels).expect("identity labelling is total")
    }

    pub fn from_graph(g: &DirectedGraph, labels: &BTreeMap<String, String>) -> Result<Self> {
        let vertices = g.vertices().iter().map(Vertex::named).collect();
        let edges = g
            .edges()
            .iter()
            .map(|e| {
                let label = labels
                    .get(&e.name)
                    .cloned()
                    .ok_or_else(|| Error::invalid("labelling", format!("edge {} has no label", e.name)))?;
                Ok(LEdge {
                    name: e.name.clone(),
                    src: Vertex::named(&g.vertices()[e.src]),
                    dst: Vertex::named(&g.vertices()[e.dst]),
                    label,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(vertices, vec![], edges, vec![])
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn bases(&self) -> &[String] {
        &self.bases
    }

    pub fn edges(&self) -> &[LEdge] {
        &self.edges
    }

    pub fn families(&self) -> &[EdgeFamily] {
        &self.families
    }

    pub fn is_finite(&self) -> bool {
        self.bases.is_empty() && self.families.is_empty()
    }

    pub fn is_vertex(&self, v: &Vertex) -> bool {
        match v.index {
            Some(j) if self.bases.contains(&v.base) => j >= 1,
            _ => self.vertices.contains(v),
        }
    }

    /// Reads `base_j` as an indexed vertex when `base` is a declared family.
    pub fn parse_vertex(&self, s: &str) -> Result<Vertex> {
        if let Some((b, j)) = s.rsplit_once('_') {
            if self.bases.iter().any(|x| x == b) {
                if let Ok(j) = j.parse::<u32>() {
                    if j >= 1 {
                        return Ok(Vertex::indexed(b, j));
                    }
                }
            }
        }
        let v = Vertex::named(s);
        if self.vertices.contains(&v) {
            return Ok(v);
        }
        self.vertices
            .iter()
            .find(|x| x.to_string() == s)
            .cloned()
            .ok_or_else(|| Error::domain(format!("unknown vertex {s}")))
    }

    /// Finite edge or family instance `name_j`.
    pub fn edge(&self, name: &str) -> Option<LEdge> {
        if let Some(e) = self.edges.iter().find(|e| e.name == name) {
            return Some(e.clone());
        }
        self.families.iter().find_map(|f| {
            let j = f.parse_index(name)?;
            Some(LEdge {
                name: name.to_string(),
                src: f.src.instance(j)?,
                dst: f.dst.instance(j)?,
                label: f.label_of(j),
            })
        })
    }

    pub fn universe(&self) -> SetExpr {
        let mut tails = BTreeMap::new();
        for b in &self.bases {
            tails.insert(b.clone(), 1);
        }
        SetExpr::new(self.vertices.iter().cloned().collect(), tails)
    }

    fn constant_labels(&self) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = self.edges.iter().map(|e| e.label.clone()).collect();
        for f in &self.families {
            if let FamilyLabel::Constant(l) = &f.label {
                out.insert(l.clone());
            }
        }
        out
    }

    pub fn has_label(&self, label: &str) -> bool {
        self.constant_labels().contains(label)
            || self
                .families
                .iter()
                .any(|f| f.label == FamilyLabel::Identity && f.parse_index(label).is_some())
    }

    /// All labels, with identity-labelled families listed up to index `horizon`.
    pub fn labels(&self, horizon: u32) -> Vec<String> {
        let mut out = self.constant_labels();
        for f in &self.families {
            if f.label == FamilyLabel::Identity {
                out.extend((f.from..=horizon).map(|j| f.instance_name(j)));
            }
        }
        out.into_iter().collect()
    }

    /// `r(A, a)`: ranges of `a`-labelled edges with source in `A`.
    pub fn relative_range(&self, a: &SetExpr, label: &str) -> Result<SetExpr> {
        if !self.has_label(label) {
            return Err(Error::domain(format!("unknown label {label}")));
        }
        let mut out = SetExpr::empty();
        for e in self.edges.iter().filter(|e| e.label == label) {
            if a.contains(&e.src) {
                out = out.union(&SetExpr::singleton(e.dst.clone()));
            }
        }
        for f in &self.families {
            match &f.label {
                FamilyLabel::Constant(l) if l == label => {
                    out = out.union(&f.dst.image(&f.sourced_in(a)));
                }
                FamilyLabel::Identity => {
                    if let Some(j) = f.parse_index(label) {
                        if f.src.instance(j).is_some_and(|s| a.contains(&s)) {
                            if let Some(d) = f.dst.instance(j) {
                                out = out.union(&SetExpr::singleton(d));
                            }
                        }
                    }
                }
                _ => {}
            }
        }
        Ok(out)
    }

    pub fn relative_range_word(&self, a: &SetExpr, word: &[String]) -> Result<SetExpr> {
        let mut cur = a.clone();
        for l in word {
            cur = self.relative_range(&cur, l)?;
        }
        Ok(cur)
    }

    /// `r(a)` for a label, or the range of a word from the whole vertex set.
    pub fn range_of_word(&self, word: &[String]) -> Result<SetExpr> {
        self.relative_range_word(&self.universe(), word)
    }

    /// Labels of edges with source in `c`.
    pub fn emitted_labels(&self, c: &SetExpr) -> Result<BTreeSet<String>> {
        let mut out = BTreeSet::new();
        for e in &self.edges {
            if c.contains(&e.src) {
                out.insert(e.label.clone());
            }
        }
        for f in &self.families {
            let js = f.sourced_in(c);
            if js.is_empty() {
                continue;
            }
            match &f.label {
                FamilyLabel::Constant(l) => {
                    out.insert(l.clone());
                }
                FamilyLabel::Identity => {
                    if js.tail.is_some() {
                        return Err(Error::Unsupported(format!(
                            "set {c} emits infinitely many labels of family {}",
                            f.name
                        )));
                    }
                    out.extend(js.finite.iter().map(|&j| f.instance_name(j)));
                }
            }
        }
        Ok(out)
    }

    /// Vertices emitting no edges. Fails if there are infinitely many.
    pub fn sinks(&self) -> Result<Vec<Vertex>> {
        let mut out: Vec<Vertex> = self
            .vertices
            .iter()
            .filter(|v| !self.emits_any(v))
            .cloned()
            .collect();
        for b in &self.bases {
            let mut tail = None;
            for f in &self.families {
                if let Endpoint::Indexed { base, offset } = &f.src {
                    if base == b {
                        let t = (i64::from(f.from) + offset).max(1) as u32;
                        tail = Some(tail.map_or(t, |x: u32| x.min(t)));
                    }
                }
            }
            let Some(t) = tail else {
                return Err(Error::Unsupported(format!("every vertex of family {b} is a sink")));
            };
            for j in 1..t {
                let v = Vertex::indexed(b.clone(), j);
                if !self.emits_any(&v) {
                    out.push(v);
                }
            }
        }
        out.sort();
        Ok(out)
    }

    fn emits_any(&self, v: &Vertex) -> bool {
        let single = SetExpr::singleton(v.clone());
        self.edges.iter().any(|e| &e.src == v)
            || self.families.iter().any(|f| !f.sourced_in(&single).is_empty())
    }

    pub fn is_sink(&self, v: &Vertex) -> bool {
        !self.emits_any(v)
    }

    /// Checks that no vertex receives two edges with one label.
    pub fn is_left_resolving(&self) -> (bool, Option<ResolvingWitness>) {
        let witness = |v: &Vertex, l: &str| {
            Some(ResolvingWitness {
                vertex: v.to_string(),
                label: l.to_string(),
            })
        };
        let mut seen: BTreeMap<(Vertex, String), usize> = BTreeMap::new();
        for e in &self.edges {
            let c = seen.entry((e.dst.clone(), e.label.clone())).or_insert(0);
            *c += 1;
            if *c > 1 {
                return (false, witness(&e.dst, &e.label));
            }
        }
        for e in &self.edges {
            for f in &self.families {
                if f.label != FamilyLabel::Constant(e.label.clone()) {
                    continue;
                }
                let hit = match &f.dst {
                    Endpoint::Named(y) => y == &e.dst,
                    Endpoint::Indexed { base, offset } => {
                        e.dst.base == *base
                            && e.dst
                                .index
                                .is_some_and(|m| i64::from(m) - offset >= i64::from(f.from))
                    }
                };
                if hit {
                    return (false, witness(&e.dst, &e.label));
                }
            }
        }
        for (i, f) in self.families.iter().enumerate() {
            let FamilyLabel::Constant(l) = &f.label else { continue };
            if let Endpoint::Named(y) = &f.dst {
                return (false, witness(y, l));
            }
            for g in &self.families[i + 1..] {
                if g.label != f.label {
                    continue;
                }
                match (&f.dst, &g.dst) {
                    (
                        Endpoint::Indexed { base: b1, offset: o1 },
                        Endpoint::Indexed { base: b2, offset: o2 },
                    ) if b1 == b2 => {
                        let m = (i64::from(f.from) + o1).max(i64::from(g.from) + o2);
                        return (false, witness(&Vertex::indexed(b1.clone(), m as u32), l));
                    }
                    (Endpoint::Named(y), Endpoint::Named(z)) if y == z => {
                        return (false, witness(y, l));
                    }
                    _ => {}
                }
            }
        }
        (true, None)
    }

    /// Finite subgraph induced on indices at most `n`.
    pub fn truncate(&self, n: u32) -> LabelledGraph {
        let keep = |v: &Vertex| v.index.is_none_or(|j| j <= n);
        let mut vertices: Vec<Vertex> = self.vertices.iter().filter(|v| keep(v)).cloned().collect();
        for b in &self.bases {
            vertices.extend((1..=n).map(|j| Vertex::indexed(b.clone(), j)));
        }
        let mut edges: Vec<LEdge> = self
            .edges
            .iter()
            .filter(|e| keep(&e.src) && keep(&e.dst))
            .cloned()
            .collect();
        for f in &self.families {
            let reach = [&f.src, &f.dst]
                .iter()
                .map(|e| match e {
                    Endpoint::Indexed { offset, .. } => offset.unsigned_abs() as u32,
                    Endpoint::Named(_) => 0,
                })
                .max()
                .unwrap_or(0);
            for j in f.from..=n + reach {
                let (Some(s), Some(d)) = (f.src.instance(j), f.dst.instance(j)) else { continue };
                let bounded = s.index.is_some() || d.index.is_some() || j <= n;
                if keep(&s) && keep(&d) && bounded {
                    edges.push(LEdge {
                        name: f.instance_name(j),
                        src: s,
                        dst: d,
                        label: f.label_of(j),
                    });
                }
            }
        }
        LabelledGraph {
            vertices,
            bases: vec![],
            edges,
            families: vec![],
        }
    }

    /// Adds an identity-labelled infinite tail at every sink.
    pub fn desingularize(&self) -> Result<(LabelledGraph, Vec<Vertex>)> {
        let sinks = self.sinks()?;
        let mut g = self.clone();
        for s in &sinks {
            let base = s.to_string();
            if self.bases.contains(&base) || self.vertices.iter().any(|v| v.base == base && v.index.is_some()) {
                return Err(Error::Unsupported(format!("tail name {base} is already in use")));
            }
            g.bases.push(base.clone());
            let name = format!("f_{base}");
            g.edges.push(LEdge {
                name: format!("{name}_1"),
                src: s.clone(),
                dst: Vertex::indexed(base.clone(), 1),
                label: format!("{name}_1"),
            });
            g.families.push(EdgeFamily {
                name,
                from: 2,
                src: Endpoint::Indexed {
                    base: base.clone(),
                    offset: -1,
                },
                dst: Endpoint::Indexed { base, offset: 0 },
                label: FamilyLabel::Identity,
            });
        }
        g.validate()?;
        Ok((g, sinks))
    }
}

// JSON interchange.

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EndpointJson {
    Named {
        name: String,
    },
    Indexed {
        base: String,
        #[serde(default)]
        offset: i64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        from: Option<u32>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FamilyJson {
    pub edge: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from: Option<u32>,
    pub src: EndpointJson,
    pub dst: EndpointJson,
    /// Constant label; identity labels when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LEdgeJson {
    pub name: String,
    pub src: String,
    pub dst: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum TailJson {
    Index(u32),
    Based { base: String, from: u32 },
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct SetJson {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub atoms: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<TailJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LabelledGraphJson {
    pub vertices: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub indexed: Vec<String>,
    #[serde(default)]
    pub edges: Vec<LEdgeJson>,
    /// Edge name to label; unlisted edges are labelled by their name.
    #[serde(default)]
    pub labels: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub families: Vec<FamilyJson>,
}

impl LabelledGraph {
    pub fn from_json(doc: &LabelledGraphJson) -> Result<Self> {
        let shell = LabelledGraph {
            vertices: doc.vertices.iter().map(Vertex::named).collect(),
            bases: doc.indexed.clone(),
            edges: vec![],
            families: vec![],
        };
        let endpoint = |e: &EndpointJson| -> Result<(Endpoint, Option<u32>)> {
            Ok(match e {
                EndpointJson::Named { name } => (Endpoint::Named(shell.parse_vertex(name)?), None),
                EndpointJson::Indexed { base, offset, from } => (
                    Endpoint::Indexed {
                        base: base.clone(),
                        offset: *offset,
                    },
                    *from,
                ),
            })
        };
        let edges = doc
            .edges
            .iter()
            .map(|e| {
                Ok(LEdge {
                    name: e.name.clone(),
                    src: shell.parse_vertex(&e.src)?,
                    dst: shell.parse_vertex(&e.dst)?,
                    label: doc.labels.get(&e.name).cloned().unwrap_or_else(|| e.name.clone()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let families = doc
            .families
            .iter()
            .map(|f| {
                let (src, sf) = endpoint(&f.src)?;
                let (dst, df) = endpoint(&f.dst)?;
                Ok(EdgeFamily {
                    name: f.edge.clone(),
                    from: f.from.or(sf).or(df).unwrap_or(1),
                    src,
                    dst,
                    label: match &f.label {
                        Some(l) => FamilyLabel::Constant(l.clone()),
                        None => FamilyLabel::Identity,
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(shell.vertices, shell.bases, edges, families)
    }

    pub fn to_json(&self) -> LabelledGraphJson {
        let endpoint = |e: &Endpoint| match e {
            Endpoint::Named(v) => EndpointJson::Named { name: v.to_string() },
            Endpoint::Indexed { base, offset } => EndpointJson::Indexed {
                base: base.clone(),
                offset: *offset,
                from: None,
            },
        };
        LabelledGraphJson {
            vertices: self.vertices.iter().map(|v| v.to_string()).collect(),
            indexed: self.bases.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| LEdgeJson {
                    name: e.name.clone(),
                    src: e.src.to_string(),
                    dst: e.dst.to_string(),
                })
                .collect(),
            labels: self
                .edges
                .iter()
                .filter(|e| e.label != e.name)
                .map(|e| (e.name.clone(), e.label.clone()))
                .collect(),
            families: self
                .families
                .iter()
                .map(|f| FamilyJson {
                    edge: f.name.clone(),
                    from: Some(f.from),
                    src: endpoint(&f.src),
                    dst: endpoint(&f.dst),
                    label: match &f.label {
                        FamilyLabel::Constant(l) => Some(l.clone()),
                        FamilyLabel::Identity => None,
                    },
                })
                .collect(),
        }
    }

    pub fn parse_set(&self, s: &SetJson) -> Result<SetExpr> {
        let atoms = s
            .atoms
            .iter()
            .map(|a| self.parse_vertex(a))
            .collect::<Result<BTreeSet<_>>>()?;
        let mut tails = BTreeMap::new();
        match &s.tail {
            None => {}
            Some(TailJson::Index(k)) => match self.bases.as_slice() {
                [b] => {
                    tails.insert(b.clone(), *k);
                }
                _ => {
                    return Err(Error::invalid(
                        "set",
                        "a bare tail index needs exactly one indexed family",
                    ))
                }
            },
            Some(TailJson::Based { base, from }) => {
                if !self.bases.contains(base) {
                    return Err(Error::invalid("set", format!("unknown indexed family {base}")));
                }
                tails.insert(base.clone(), *from);
            }
        }
        Ok(SetExpr::new(atoms, tails))
    }

    pub fn set_json(&self, s: &SetExpr) -> SetJson {
        SetJson {
            atoms: s.atoms().iter().map(|v| v.to_string()).collect(),
            tail: match s.tails().iter().next() {
                None => None,
                Some((_, &k)) if s.tails().len() == 1 && self.bases.len() == 1 => Some(TailJson::Index(k)),
                Some((b, &k)) => Some(TailJson::Based {
                    base: b.clone(),
                    from: k,
                }),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// One indexed family v with g: v_{j-1} -> v_j and h: v_j -> w.
    fn chain() -> LabelledGraph {
        LabelledGraph::new(
            vec![Vertex::named("w")],
            vec!["v".into()],
            vec![],
            vec![
                EdgeFamily {
                    name: "g".into(),
                    from: 2,
                    src: Endpoint::Indexed { base: "v".into(), offset: -1 },
                    dst: Endpoint::Indexed { base: "v".into(), offset: 0 },
                    label: FamilyLabel::Constant("g".into()),
                },
                EdgeFamily {
                    name: "h".into(),
                    from: 1,
                    src: Endpoint::Indexed { base: "v".into(), offset: 0 },
                    dst: Endpoint::Named(Vertex::named("w")),
                    label: FamilyLabel::Constant("h".into()),
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn symbolic_ranges() {
        let g = chain();
        assert_eq!(g.relative_range(&SetExpr::tail("v", 1), "g").unwrap(), SetExpr::tail("v", 2));
        assert_eq!(g.relative_range(&SetExpr::tail("v", 3), "h").unwrap(), SetExpr::named(["w"]));
        assert!(g.relative_range(&SetExpr::tail("v", 1), "zz").is_err());
        let a = SetExpr::tail("v", 2);
        assert_eq!(g.relative_range_word(&a, &[]).unwrap(), a);
    }

    #[test]
    fn sinks_and_resolving() {
        let g = chain();
        assert_eq!(g.sinks().unwrap(), vec![Vertex::named("w")]);
        let (ok, w) = g.is_left_resolving();
        assert!(!ok);
        assert_eq!(w.unwrap().vertex, "w");
    }

    #[test]
    fn truncation_is_induced() {
        let t = chain().truncate(3);
        assert_eq!(t.vertices().len(), 4);
        // g_2, g_3 and h_1..h_3.
        assert_eq!(t.edges().len(), 5);
        assert!(t.is_finite());
    }

    #[test]
    fn json_round_trip() {
        let g = chain();
        let back = LabelledGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
    }
}
