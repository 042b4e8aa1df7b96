//! Morphisms of labelled spaces, conditions (L1)–(L5).

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::set::{SetExpr, Vertex};
use super::space::LabelledSpace;
use crate::error::{Error, Result};
use crate::report::Report;

/// Vertex and edge maps from a finite labelled space; `None` is the zero
/// element and unlisted vertices or edges map to it.
#[derive(Clone, Debug)]
pub struct LabelledMorphism {
    source: Arc<LabelledSpace>,
    target: Arc<LabelledSpace>,
    vertices: BTreeMap<Vertex, Option<Vertex>>,
    edges: BTreeMap<String, Option<String>>,
}

impl LabelledMorphism {
    pub fn new(
        source: Arc<LabelledSpace>,
        target: Arc<LabelledSpace>,
        vertices: BTreeMap<Vertex, Option<Vertex>>,
        edges: BTreeMap<String, Option<String>>,
    ) -> Result<Self> {
        if !source.is_finite() {
            return Err(Error::Unsupported("labelled morphisms need a finite source graph".into()));
        }
        let sg = source.graph();
        let tg = target.graph();
        for (v, img) in &vertices {
            if !sg.is_vertex(v) {
                return Err(Error::invalid("labelled morphism", format!("unknown source vertex {v}")));
            }
            if let Some(w) = img {
                if !tg.is_vertex(w) {
                    return Err(Error::invalid("labelled morphism", format!("unknown target vertex {w}")));
                }
            }
        }
        for (e, img) in &edges {
            if sg.edge(e).is_none() {
                return Err(Error::invalid("labelled morphism", format!("unknown source edge {e}")));
            }
            if let Some(f) = img {
                if tg.edge(f).is_none() {
                    return Err(Error::invalid("labelled morphism", format!("unknown target edge {f}")));
                }
            }
        }
        Ok(LabelledMorphism {
            source,
            target,
            vertices,
            edges,
        })
    }

    /// Identity maps, into any space containing the source graph.
    pub fn inclusion(source: Arc<LabelledSpace>, target: Arc<LabelledSpace>) -> Result<Self> {
        let vertices = source.graph().vertices().iter().map(|v| (v.clone(), Some(v.clone()))).collect();
        let edges = source
            .graph()
            .edges()
            .iter()
            .map(|e| (e.name.clone(), Some(e.name.clone())))
            .collect();
        Self::new(source, target, vertices, edges)
    }

    pub fn source(&self) -> &Arc<LabelledSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<LabelledSpace> {
        &self.target
    }

    pub fn vertex_image(&self, v: &Vertex) -> Option<Vertex> {
        self.vertices.get(v).cloned().flatten()
    }

    pub fn edge_image(&self, e: &str) -> Option<String> {
        self.edges.get(e).cloned().flatten()
    }

    fn image_label(&self, e: &str) -> Option<String> {
        self.edge_image(e).and_then(|f| self.target.graph().edge(&f)).map(|f| f.label)
    }

    /// `ψ(a)`: the target label of the image of any `a`-labelled edge.
    pub fn label_image(&self, a: &str) -> Option<String> {
        self.source
            .graph()
            .edges()
            .iter()
            .filter(|e| e.label == a)
            .find_map(|e| self.image_label(&e.name))
    }

    /// `ψ(A) = {ψ(v) : v ∈ A} \ {0}` for a finite set.
    pub fn set_image(&self, a: &SetExpr) -> SetExpr {
        SetExpr::from_vertices(a.atoms().iter().filter_map(|v| self.vertex_image(v)))
    }

    /// Checks (L1)–(L5), one record per instance.
    pub fn check(&self) -> Result<Report> {
        let mut rep = Report::new("labelled-space morphism");
        let sg = self.source.graph();
        let tg = self.target.graph();
        rep.push("(L1)", "ψ(0) = 0", true, None);

        let mut seen: BTreeMap<Vertex, Vertex> = BTreeMap::new();
        for v in sg.vertices() {
            let Some(w) = self.vertex_image(v) else { continue };
            match seen.get(&w) {
                Some(u) => rep.fail("(L2)", format!("{v}"), format!("ψ({u}) = ψ({v}) = {w}")),
                None => {
                    rep.pass("(L2)", format!("{v}"));
                    seen.insert(w, v.clone());
                }
            }
        }

        let edges = sg.edges();
        for (i, e) in edges.iter().enumerate() {
            let Some(le) = self.image_label(&e.name) else { continue };
            for f in &edges[i + 1..] {
                if self.image_label(&f.name).as_ref() != Some(&le) {
                    continue;
                }
                let ok = e.label == f.label;
                let w = (!ok).then(|| format!("images share label {le} but labels are {} and {}", e.label, f.label));
                rep.push("(L3)", format!("{},{}", e.name, f.name), ok, w);
            }
        }

        let labels: BTreeSet<&String> = edges.iter().map(|e| &e.label).collect();
        for a in labels {
            let lhs: BTreeSet<Option<Vertex>> = sg
                .range_of_word(std::slice::from_ref(a))?
                .atoms()
                .iter()
                .map(|v| self.vertex_image(v))
                .collect();
            let rhs: BTreeSet<Option<Vertex>> = edges
                .iter()
                .filter(|e| &e.label == a)
                .map(|e| self.edge_image(&e.name).and_then(|f| tg.edge(&f)).map(|f| f.dst))
                .collect();
            let ok = lhs == rhs;
            let show = |s: &BTreeSet<Option<Vertex>>| {
                let items: Vec<String> = s
                    .iter()
                    .map(|v| v.as_ref().map_or("0".to_string(), Vertex::to_string))
                    .collect();
                format!("{{{}}}", items.join(", "))
            };
            let w = (!ok).then(|| format!("ψ(r({a})) = {} but ranges of images are {}", show(&lhs), show(&rhs)));
            rep.push("(L4)", a.clone(), ok, w);
        }

        for m in self.source.members() {
            let a = &m.set;
            if a.is_empty() {
                continue;
            }
            let img = self.set_image(a);
            let inst = format!("{a}");
            if !img.is_empty() && !self.target.is_member(&img) {
                rep.fail("(L5)", inst, format!("ψ({a}) = {img} is not in the target family"));
                continue;
            }
            let finite_nonempty = |n: Result<usize>| matches!(n, Ok(k) if k > 0);
            let src_ok = finite_nonempty(sg.emitted_labels(a).map(|l| l.len()));
            if src_ok {
                let tgt = match tg.emitted_labels(&img) {
                    Ok(l) => Ok(l.len()),
                    Err(Error::Unsupported(e)) => Err(Error::Unsupported(e)),
                    Err(e) => return Err(e),
                };
                if !finite_nonempty(tgt) {
                    rep.fail("(L5)", inst, format!("L¹({img}) is empty or infinite"));
                    continue;
                }
            }
            rep.pass("(L5)", inst);
        }
        Ok(rep)
    }
}
