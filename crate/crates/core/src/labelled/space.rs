//! Accommodating families and the ring of sets they generate.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::hash::{Hash, Hasher};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::graph::{LabelledGraph, LabelledGraphJson, SetJson};
use super::set::{SetExpr, Vertex};
use crate::error::{Error, Result};

pub const CLOSURE_BUDGET: usize = 10_000;
/// Extra indices instantiated beyond the largest generator footprint.
pub const HORIZON_MARGIN: u32 = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Generator { index: usize },
    Range { label: String },
    Sink { vertex: String },
    Meet { left: usize, right: usize },
    Join { left: usize, right: usize },
    RelativeRange { member: usize, label: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Member {
    pub set: SetExpr,
    pub provenance: Provenance,
}

/// A maximal block of vertices that no member separates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub set: SetExpr,
    /// Members containing the atom.
    pub signature: Vec<usize>,
    /// Intersection of the members containing the atom.
    over: SetExpr,
    /// Part of `over` lying in some member that misses the atom.
    under: SetExpr,
}

#[derive(Clone, Debug, Default)]
pub struct SpaceOptions {
    pub horizon: Option<u32>,
    pub budget: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct LabelledSpace {
    graph: LabelledGraph,
    generators: Vec<SetExpr>,
    horizon: u32,
    members: Vec<Member>,
    index: HashMap<SetExpr, usize>,
    discarded: usize,
    atoms: Vec<Atom>,
    region_atom: HashMap<Vertex, usize>,
    tail_atom: BTreeMap<String, usize>,
    sinks: Vec<Vertex>,
    id: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeakWitness {
    pub a: String,
    pub b: String,
    pub label: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeakReport {
    pub holds: bool,
    pub pairs_checked: usize,
    pub witness: Option<WeakWitness>,
}

impl LabelledSpace {
    pub fn new(graph: LabelledGraph, generators: Vec<SetExpr>) -> Result<Self> {
        Self::with_options(graph, generators, &SpaceOptions::default())
    }

    pub fn with_options(graph: LabelledGraph, generators: Vec<SetExpr>, opts: &SpaceOptions) -> Result<Self> {
        for g in &generators {
            for v in g.atoms() {
                if !graph.is_vertex(v) {
                    return Err(Error::invalid("labelled space", format!("generator {g} mentions unknown vertex {v}")));
                }
            }
            for b in g.tails().keys() {
                if !graph.bases().contains(b) {
                    return Err(Error::invalid("labelled space", format!("generator {g} has a tail on unknown family {b}")));
                }
            }
        }
        let horizon = opts.horizon.unwrap_or_else(|| {
            if graph.bases().is_empty() {
                0
            } else {
                generators.iter().map(SetExpr::footprint).max().unwrap_or(0).max(1) + HORIZON_MARGIN
            }
        });
        let budget = opts.budget.unwrap_or(CLOSURE_BUDGET);
        let mut space = LabelledSpace {
            graph,
            generators,
            horizon,
            members: vec![],
            index: HashMap::new(),
            discarded: 0,
            atoms: vec![],
            region_atom: HashMap::new(),
            tail_atom: BTreeMap::new(),
            sinks: vec![],
            id: 0,
        };
        space.sinks = space.graph.sinks()?;
        space.close(budget)?;
        space.compute_atoms();
        let mut h = DefaultHasher::new();
        serde_json::to_string(&space.to_json()).expect("serializable").hash(&mut h);
        space.horizon.hash(&mut h);
        space.id = h.finish();
        Ok(space)
    }

    fn close(&mut self, budget: usize) -> Result<()> {
        let labels = self.graph.labels(self.horizon.max(1));
        let mut queue = VecDeque::new();
        let mut dropped = BTreeSet::new();
        let mut seed = vec![];
        for (i, g) in self.generators.iter().enumerate() {
            seed.push((g.clone(), Provenance::Generator { index: i }));
        }
        for l in &labels {
            seed.push((self.graph.range_of_word(std::slice::from_ref(l))?, Provenance::Range { label: l.clone() }));
        }
        for v in self.sinks.clone() {
            seed.push((SetExpr::singleton(v.clone()), Provenance::Sink { vertex: v.to_string() }));
        }
        let horizon = self.horizon;
        let bounded = |s: &SetExpr| self.graph.bases().is_empty() || s.footprint() <= horizon;
        let mut fresh = vec![];
        for (s, p) in seed {
            if !bounded(&s) {
                dropped.insert(s);
            } else if !self.index.contains_key(&s) && !fresh.iter().any(|(t, _)| t == &s) {
                fresh.push((s, p));
            }
        }
        for (s, p) in fresh {
            self.push(s, p, &mut queue);
        }
        while let Some(i) = queue.pop_front() {
            let x = self.members[i].set.clone();
            let mut found = vec![];
            for l in &labels {
                found.push((self.graph.relative_range(&x, l)?, Provenance::RelativeRange { member: i, label: l.clone() }));
            }
            for j in 0..=i.min(self.members.len() - 1) {
                let y = &self.members[j].set;
                found.push((x.intersection(y), Provenance::Meet { left: j, right: i }));
                found.push((x.union(y), Provenance::Join { left: j, right: i }));
            }
            for (s, p) in found {
                if self.index.contains_key(&s) {
                    continue;
                }
                if !self.graph.bases().is_empty() && s.footprint() > horizon {
                    dropped.insert(s);
                    continue;
                }
                if self.members.len() >= budget {
                    return Err(Error::Budget(format!(
                        "accommodating closure exceeded {budget} sets; frontier member {s} from {}",
                        self.members[i].set
                    )));
                }
                self.push(s, p, &mut queue);
            }
        }
        self.discarded = dropped.len();
        Ok(())
    }

    fn push(&mut self, s: SetExpr, p: Provenance, queue: &mut VecDeque<usize>) {
        let i = self.members.len();
        self.index.insert(s.clone(), i);
        self.members.push(Member { set: s, provenance: p });
        queue.push_back(i);
    }

    /// Vertex regions: every finite vertex, indexed vertices up to the
    /// horizon, and one cofinal block per family.
    fn regions(&self) -> Vec<SetExpr> {
        let mut out: Vec<SetExpr> = self.graph.vertices().iter().cloned().map(SetExpr::singleton).collect();
        for b in self.graph.bases() {
            out.extend((1..=self.horizon).map(|j| SetExpr::singleton(Vertex::indexed(b.clone(), j))));
            out.push(SetExpr::tail(b.clone(), self.horizon + 1));
        }
        out
    }

    fn region_signature(&self, r: &SetExpr) -> Vec<usize> {
        // A region is never split by a member, so one representative point decides.
        let probe = match r.atoms().iter().next() {
            Some(v) => v.clone(),
            None => {
                let (b, &k) = r.tails().iter().next().expect("nonempty region");
                Vertex::indexed(b.clone(), k)
            }
        };
        self.members
            .iter()
            .enumerate()
            .filter(|(_, m)| m.set.contains(&probe))
            .map(|(i, _)| i)
            .collect()
    }

    fn compute_atoms(&mut self) {
        let mut groups: BTreeMap<Vec<usize>, SetExpr> = BTreeMap::new();
        let mut region_sig = vec![];
        for r in self.regions() {
            let sig = self.region_signature(&r);
            if sig.is_empty() {
                continue;
            }
            let e = groups.entry(sig.clone()).or_insert_with(SetExpr::empty);
            *e = e.union(&r);
            region_sig.push((r, sig));
        }
        let order: Vec<Vec<usize>> = groups.keys().cloned().collect();
        let pos: HashMap<&Vec<usize>, usize> = order.iter().enumerate().map(|(i, s)| (s, i)).collect();
        for (r, sig) in &region_sig {
            let a = pos[sig];
            if let Some(v) = r.atoms().iter().next() {
                self.region_atom.insert(v.clone(), a);
            } else if let Some(b) = r.tails().keys().next() {
                self.tail_atom.insert(b.clone(), a);
            }
        }
        let atoms: Vec<Atom> = order
            .par_iter()
            .map(|sig| {
                let set = groups[sig].clone();
                let mut over: Option<SetExpr> = None;
                for &i in sig {
                    let m = &self.members[i].set;
                    over = Some(match over {
                        None => m.clone(),
                        Some(o) => o.intersection(m),
                    });
                }
                let over = over.expect("nonempty signature");
                let mut under = SetExpr::empty();
                for (i, m) in self.members.iter().enumerate() {
                    if sig.binary_search(&i).is_err() {
                        under = under.union(&over.intersection(&m.set));
                    }
                }
                Atom {
                    set,
                    signature: sig.clone(),
                    over,
                    under,
                }
            })
            .collect();
        self.atoms = atoms;
    }

    pub fn graph(&self) -> &LabelledGraph {
        &self.graph
    }

    pub fn generators(&self) -> &[SetExpr] {
        &self.generators
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn is_member(&self, s: &SetExpr) -> bool {
        self.index.contains_key(s)
    }

    pub fn member_index(&self, s: &SetExpr) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Closure results dropped for reaching past the horizon.
    pub fn discarded(&self) -> usize {
        self.discarded
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_finite(&self) -> bool {
        self.graph.is_finite()
    }

    pub fn labels(&self) -> Vec<String> {
        self.graph.labels(self.horizon.max(1))
    }

    pub fn relative_range(&self, a: &SetExpr, word: &[String]) -> Result<SetExpr> {
        self.graph.relative_range_word(a, word)
    }

    pub fn sinks(&self) -> &[Vertex] {
        &self.sinks
    }

    /// Identifies the space; elements carry it as their parent tag.
    pub fn id(&self) -> u64 {
        self.id
    }

    /// Indices of the atoms covering `c`; fails unless `c` is a union of atoms.
    pub fn atoms_of(&self, c: &SetExpr) -> Result<Vec<usize>> {
        let h = self.horizon;
        let mut out = BTreeSet::new();
        let out_of_range = |what: &str| Error::Horizon(format!("{what} lies beyond index {h}"));
        for v in c.atoms() {
            match v.index {
                Some(j) if self.graph.bases().contains(&v.base) && j > h => {
                    return Err(out_of_range(&v.to_string()))
                }
                _ => {}
            }
            match self.region_atom.get(v) {
                Some(&a) => {
                    out.insert(a);
                }
                None => return Err(Error::domain(format!("vertex {v} of {c} lies in no member"))),
            }
        }
        for (b, &k) in c.tails() {
            if k > h + 1 {
                return Err(out_of_range(&format!("tail {b}_{k}..")));
            }
            for j in k..=h {
                match self.region_atom.get(&Vertex::indexed(b.clone(), j)) {
                    Some(&a) => {
                        out.insert(a);
                    }
                    None => return Err(Error::domain(format!("vertex {b}_{j} of {c} lies in no member"))),
                }
            }
            match self.tail_atom.get(b) {
                Some(&a) => {
                    out.insert(a);
                }
                None => return Err(Error::domain(format!("the cofinal part of {c} lies in no member"))),
            }
        }
        for &a in &out {
            let atom = &self.atoms[a];
            if !atom.set.is_subset(c) {
                let reaches = atom.set.difference(c).footprint() >= h && !self.graph.bases().is_empty();
                return Err(if reaches {
                    out_of_range(&format!("atom {} needed to split {c}", atom.set))
                } else {
                    Error::domain(format!("{c} is not a union of atoms: it cuts {}", atom.set))
                });
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Relative range extended additively from members to atoms.
    ///
    /// On a member this is the ordinary relative range. On an atom `F \ G`
    /// it is `r(F, a) \ r(G, a)`, which can be smaller than `r(F \ G, a)`
    /// when the labelling is not left-resolving.
    pub fn ring_range(&self, c: &SetExpr, label: &str) -> Result<SetExpr> {
        if !self.graph.has_label(label) {
            return Err(Error::domain(format!("unknown label {label}")));
        }
        if self.is_member(c) {
            return self.graph.relative_range(c, label);
        }
        let mut out = SetExpr::empty();
        for a in self.atoms_of(c)? {
            out = out.union(&self.atom_range(a, label)?);
        }
        Ok(out)
    }

    pub fn ring_range_word(&self, c: &SetExpr, word: &[String]) -> Result<SetExpr> {
        let mut cur = c.clone();
        for l in word {
            cur = self.ring_range(&cur, l)?;
        }
        Ok(cur)
    }

    fn atom_range(&self, a: usize, label: &str) -> Result<SetExpr> {
        let atom = &self.atoms[a];
        let top = self.graph.relative_range(&atom.over, label)?;
        let bottom = self.graph.relative_range(&atom.under, label)?;
        Ok(top.difference(&bottom))
    }

    /// Checks `r(A,a) ∩ r(B,a) = r(A∩B,a)` over all member pairs and labels.
    pub fn is_weakly_left_resolving(&self) -> Result<WeakReport> {
        let labels = self.labels();
        let ranges: Vec<Vec<SetExpr>> = self
            .members
            .par_iter()
            .map(|m| labels.iter().map(|l| self.graph.relative_range(&m.set, l)).collect())
            .collect::<Result<_>>()?;
        let n = self.members.len();
        let first = (0..n)
            .into_par_iter()
            .map(|i| -> Result<Option<WeakWitness>> {
                for j in i..n {
                    let meet = self.members[i].set.intersection(&self.members[j].set);
                    for (k, l) in labels.iter().enumerate() {
                        let lhs = ranges[i][k].intersection(&ranges[j][k]);
                        let rhs = match self.index.get(&meet) {
                            Some(&m) => ranges[m][k].clone(),
                            None => self.graph.relative_range(&meet, l)?,
                        };
                        if lhs != rhs {
                            return Ok(Some(WeakWitness {
                                a: self.members[i].set.to_string(),
                                b: self.members[j].set.to_string(),
                                label: l.clone(),
                                lhs: lhs.to_string(),
                                rhs: rhs.to_string(),
                            }));
                        }
                    }
                }
                Ok(None)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .next();
        Ok(WeakReport {
            holds: first.is_none(),
            pairs_checked: n * (n + 1) / 2 * labels.len(),
            witness: first,
        })
    }

    /// The sink-free space with a fresh identity-labelled tail at each sink.
    pub fn desingularize(&self) -> Result<(LabelledSpace, Vec<Vertex>)> {
        let (g, sinks) = self.graph.desingularize()?;
        if sinks.is_empty() {
            return Ok((self.clone(), sinks));
        }
        let mut gens = self.generators.clone();
        let h = self.horizon.max(crate::labelled::DEFAULT_TRUNCATION);
        for s in &sinks {
            for j in 1..=h {
                gens.push(SetExpr::singleton(Vertex::indexed(s.to_string(), j)));
            }
        }
        let space = LabelledSpace::with_options(
            g,
            gens,
            &SpaceOptions {
                horizon: Some(h),
                budget: None,
            },
        )?;
        Ok((space, sinks))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LabelledSpaceJson {
    #[serde(flatten)]
    pub graph: LabelledGraphJson,
    #[serde(rename = "B", default)]
    pub family: Vec<SetJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u32>,
}

impl LabelledSpace {
    pub fn from_json(doc: &LabelledSpaceJson) -> Result<Self> {
        let graph = LabelledGraph::from_json(&doc.graph)?;
        let gens = doc.family.iter().map(|s| graph.parse_set(s)).collect::<Result<Vec<_>>>()?;
        Self::with_options(
            graph,
            gens,
            &SpaceOptions {
                horizon: doc.horizon,
                budget: None,
            },
        )
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let doc: LabelledSpaceJson = serde_json::from_str(text)?;
        Self::from_json(&doc)
    }

    pub fn to_json(&self) -> LabelledSpaceJson {
        LabelledSpaceJson {
            graph: self.graph.to_json(),
            family: self.generators.iter().map(|s| self.graph.set_json(s)).collect(),
            horizon: (!self.graph.bases().is_empty()).then_some(self.horizon),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DirectedGraph;
    use crate::labelled::{EdgeFamily, Endpoint, FamilyLabel, LEdge};

    fn loop_graph() -> LabelledGraph {
        LabelledGraph::identity(&DirectedGraph::new(vec!["v".into()], vec![("e".into(), "v".into(), "v".into())]).unwrap())
    }

    #[test]
    fn single_loop_closure() {
        let s = LabelledSpace::new(loop_graph(), vec![]).unwrap();
        assert_eq!(s.members().len(), 1);
        assert_eq!(s.members()[0].set, SetExpr::named(["v"]));
        assert!(s.is_weakly_left_resolving().unwrap().holds);
    }

    #[test]
    fn merging_pair_breaks_weak_resolving() {
        let v = |s: &str| Vertex::named(s);
        let e = |n: &str, a: &str, b: &str| LEdge {
            name: n.into(),
            src: v(a),
            dst: v(b),
            label: "a".into(),
        };
        let g = LabelledGraph::new(
            vec![v("x"), v("y"), v("z")],
            vec![],
            vec![e("e1", "x", "z"), e("e2", "y", "z"), e("e3", "z", "z")],
            vec![],
        )
        .unwrap();
        let s = LabelledSpace::new(g, vec![SetExpr::named(["x"]), SetExpr::named(["y"])]).unwrap();
        let rep = s.is_weakly_left_resolving().unwrap();
        assert!(!rep.holds);
        let w = rep.witness.unwrap();
        assert_eq!((w.a.as_str(), w.b.as_str(), w.label.as_str()), ("{x}", "{y}", "a"));
    }

    #[test]
    fn ring_range_on_chain_atoms() {
        // v_{j-1} -g-> v_j, v_j -h-> w; members are the tails v_i.. and {w}.
        let g = LabelledGraph::new(
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
        .unwrap();
        let s = LabelledSpace::new(g, vec![SetExpr::tail("v", 1)]).unwrap();
        assert!(s.is_member(&SetExpr::tail("v", 5)));
        let v1 = SetExpr::singleton(Vertex::indexed("v", 1));
        assert_eq!(s.ring_range(&v1, "h").unwrap(), SetExpr::empty());
        assert_eq!(s.graph().relative_range(&v1, "h").unwrap(), SetExpr::named(["w"]));
        assert_eq!(
            s.ring_range(&v1, "g").unwrap(),
            SetExpr::singleton(Vertex::indexed("v", 2))
        );
        assert!(matches!(
            s.ring_range(&SetExpr::singleton(Vertex::indexed("v", 40)), "g"),
            Err(Error::Horizon(_))
        ));
        assert!(s.is_weakly_left_resolving().unwrap().holds);
    }

    #[test]
    fn budget_is_a_hard_error() {
        let vs: Vec<String> = (0..8).map(|i| format!("v{i}")).collect();
        let edges = vs.iter().map(|v| (format!("e{v}"), v.clone(), v.clone())).collect();
        let g = LabelledGraph::identity(&DirectedGraph::new(vs.clone(), edges).unwrap());
        let gens = vs.iter().map(|v| SetExpr::named([v.as_str()])).collect();
        let opts = SpaceOptions {
            horizon: None,
            budget: Some(100),
        };
        let err = LabelledSpace::with_options(g, gens, &opts).unwrap_err();
        assert!(matches!(err, Error::Budget(_)));
    }
}
