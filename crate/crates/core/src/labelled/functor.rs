//! The correspondence `(X(E), A(E))` of a labelled space and the functor on
//! morphisms.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::engine::LabelledElement;
use super::morphism::LabelledMorphism;
use super::set::SetExpr;
use super::space::LabelledSpace;
use crate::algebra::linear::{add_scaled, SparseVec};
use crate::algebra::PresentedCommAlgebra;
use crate::corr::{Assignment, CorrBuilder, CorrMorphism, PresentedCorrespondence};
use crate::error::{Error, Result};
use crate::scalar;

/// `(X(E), A(E))` presented over the atoms of the closed family: the
/// algebra has one projection `p_e` per atom and the module one generator
/// `s_a p_e` per label `a` and atom `e ⊆ r(a)`.
#[derive(Clone, Debug)]
pub struct LabelledCorrespondence {
    pub corr: Arc<PresentedCorrespondence>,
    /// `(label, atom)` of each generator.
    pub gens: Vec<(String, usize)>,
}

impl LabelledCorrespondence {
    pub fn gen_of(&self, label: &str, atom: usize) -> Option<usize> {
        self.gens.iter().position(|(l, e)| l == label && *e == atom)
    }

    /// `s_a p_C` as a generator combination.
    pub fn element(&self, space: &LabelledSpace, label: &str, c: &SetExpr) -> Result<SparseVec> {
        let r = space.graph().range_of_word(&[label.to_string()])?;
        let mut v = SparseVec::new();
        for e in space.atoms_of(&c.intersection(&r))? {
            if let Some(g) = self.gen_of(label, e) {
                v.insert(g, scalar::one());
            }
        }
        Ok(v)
    }

    /// `s_a p_e ↦ s_a p_e`, `p_e ↦ p_e` into the space's own engine.
    pub fn tautological(&self, space: &LabelledSpace) -> Result<Assignment<LabelledElement>> {
        let gens = self
            .gens
            .iter()
            .map(|(a, e)| {
                let set = &space.atoms()[*e].set;
                Ok(Some(space.mul(&space.s(a)?, &space.p(set)?)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let algebra = space
            .atoms()
            .iter()
            .map(|a| space.p(&a.set))
            .collect::<Result<Vec<_>>>()?;
        Assignment::complete(&self.corr, space, gens, algebra)
    }
}

fn atom_name(space: &LabelledSpace, e: usize) -> String {
    format!("p{}", space.atoms()[e].set)
}

/// Builds `(X(E), A(E))`. Atoms whose left action would need labels past
/// the horizon, or infinitely many labels, lie outside the left domain.
pub fn to_correspondence(space: &LabelledSpace) -> Result<LabelledCorrespondence> {
    let atoms = space.atoms();
    let names: Vec<String> = (0..atoms.len()).map(|e| atom_name(space, e)).collect();
    let alg = PresentedCommAlgebra::orthogonal(names.clone());
    let labels = space.labels();
    let mut gens = vec![];
    for a in &labels {
        let r = space.graph().range_of_word(std::slice::from_ref(a))?;
        for e in space.atoms_of(&r)? {
            gens.push((a.clone(), e));
        }
    }
    let gnames: Vec<String> = gens.iter().map(|(a, e)| format!("s_{a} {}", names[*e])).collect();
    let mut b = CorrBuilder::new(alg.clone(), gnames)?;
    for (g, (_, e)) in gens.iter().enumerate() {
        let mut one = SparseVec::new();
        one.insert(g, scalar::one());
        b.right_idx(g, *e, one);
        b.inner_idx(g, g, alg.basis_elem(*e));
    }
    let mut domain = vec![false; atoms.len()];
    for (f, atom) in atoms.iter().enumerate() {
        let emitted = match space.graph().emitted_labels(&atom.set) {
            Ok(l) => l,
            Err(Error::Unsupported(_)) => continue,
            Err(e) => return Err(e),
        };
        if !emitted.iter().all(|l| labels.contains(l)) {
            continue;
        }
        let mut table = BTreeMap::new();
        let mut complete = true;
        for (g, (a, e)) in gens.iter().enumerate() {
            let rr = match space.ring_range(&atom.set, a) {
                Ok(s) => s,
                Err(Error::Horizon(_)) => {
                    complete = false;
                    break;
                }
                Err(err) => return Err(err),
            };
            if atoms[*e].set.is_subset(&rr) {
                table.insert(g, true);
            }
        }
        if !complete {
            continue;
        }
        domain[f] = true;
        for g in table.keys() {
            let mut one = SparseVec::new();
            one.insert(*g, scalar::one());
            b.left_idx(f, *g, one);
        }
    }
    b.left_domain_idx(domain);
    Ok(LabelledCorrespondence {
        corr: Arc::new(b.build()?),
        gens,
    })
}

/// `G(ψ)`: `s_a p_e ↦ s_{ψ(a)} p_{ψ(e)}` and `p_e ↦ p_{ψ(e)}`. Rejects `ψ`
/// unless (L1)–(L5) hold.
pub fn functor_g(psi: &LabelledMorphism, x: &LabelledCorrespondence, y: &LabelledCorrespondence) -> Result<CorrMorphism> {
    let rep = psi.check()?;
    if let Some(r) = rep.records.iter().find(|r| r.status == crate::report::Status::Fail) {
        return Err(Error::invalid(
            "labelled morphism",
            format!("{} fails at {}: {}", r.check, r.instance, r.detail.clone().unwrap_or_default()),
        ));
    }
    functor_g_unchecked(psi, x, y)
}

/// [`functor_g`] without the (L1)–(L5) gate, for inspecting invalid maps.
pub fn functor_g_unchecked(
    psi: &LabelledMorphism,
    x: &LabelledCorrespondence,
    y: &LabelledCorrespondence,
) -> Result<CorrMorphism> {
    let (src, tgt) = (psi.source(), psi.target());
    let image_atoms = |e: usize| -> Result<Vec<usize>> {
        let img = psi.set_image(&src.atoms()[e].set);
        if img.is_empty() {
            return Ok(vec![]);
        }
        tgt.atoms_of(&img)
    };
    let mut module = vec![];
    for (a, e) in &x.gens {
        let mut v = SparseVec::new();
        if let Some(b) = psi.label_image(a) {
            let img = psi.set_image(&src.atoms()[*e].set);
            add_scaled(&mut v, &y.element(tgt, &b, &img)?, &scalar::one());
        }
        module.push(y.corr.from_gens(&v));
    }
    let mut algebra = vec![];
    for e in 0..src.atoms().len() {
        let mut v = SparseVec::new();
        for f in image_atoms(e)? {
            v.insert(f, scalar::one());
        }
        algebra.push(y.corr.algebra().from_coeffs(v));
    }
    CorrMorphism::new(x.corr.clone(), y.corr.clone(), module, algebra)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corr::check_covariant_rep;
    use crate::graph::DirectedGraph;
    use crate::labelled::graph::LabelledGraph;
    use crate::labelled::set::Vertex;

    fn graph(vs: &[&str], es: &[(&str, &str, &str)]) -> LabelledGraph {
        let g = DirectedGraph::new(
            vs.iter().map(|v| v.to_string()).collect(),
            es.iter().map(|(n, s, d)| (n.to_string(), s.to_string(), d.to_string())).collect(),
        )
        .unwrap();
        LabelledGraph::identity(&g)
    }

    #[test]
    fn single_loop_is_one_generator() {
        let s = LabelledSpace::new(graph(&["v"], &[("e", "v", "v")]), vec![]).unwrap();
        let x = to_correspondence(&s).unwrap();
        assert_eq!(x.corr.generators(), &["s_e p{v}".to_string()]);
        assert_eq!(x.corr.algebra().dim(), 1);
        let g = x.corr.gen(0);
        assert_eq!(x.corr.inner(&g, &g).unwrap(), x.corr.algebra().basis_elem(0));
        assert!(x.corr.validate().is_valid());
    }

    #[test]
    fn tautological_covariant_representation() {
        // Two loops at one vertex: the Cuntz algebra O_2.
        let s = LabelledSpace::new(graph(&["v"], &[("a", "v", "v"), ("b", "v", "v")]), vec![]).unwrap();
        let x = to_correspondence(&s).unwrap();
        let rho = x.tautological(&s).unwrap();
        let rep = check_covariant_rep(&x.corr, &s, &rho).unwrap();
        assert!(rep.all_passed(), "{}", rep.text());
        assert!(rep.check_passed("C4"));
    }

    #[test]
    fn identity_and_desingularization_morphisms() {
        let e = Arc::new(
            LabelledSpace::new(graph(&["v1", "v2"], &[("e11", "v1", "v1"), ("e12", "v1", "v2")]), vec![]).unwrap(),
        );
        let x = to_correspondence(&e).unwrap();
        let id = LabelledMorphism::inclusion(e.clone(), e.clone()).unwrap();
        assert!(id.check().unwrap().all_passed());
        let m = functor_g(&id, &x, &x).unwrap();
        assert!(m.check().unwrap().all_passed());

        let (f, _) = e.desingularize().unwrap();
        let f = Arc::new(f);
        let y = to_correspondence(&f).unwrap();
        let inc = LabelledMorphism::inclusion(e.clone(), f.clone()).unwrap();
        let rep = inc.check().unwrap();
        assert!(rep.all_passed(), "{}", rep.text());
        let g = functor_g(&inc, &x, &y).unwrap().check().unwrap();
        assert!(g.check_passed("C1"), "{}", g.text());
        assert_eq!(g.check("C2").failed, 0, "{}", g.text());
    }

    #[test]
    fn broken_range_condition() {
        // Sending e12 to the loop breaks (L4); the induced map fails (C1).
        let e = Arc::new(
            LabelledSpace::new(graph(&["v1", "v2"], &[("e11", "v1", "v1"), ("e12", "v1", "v2")]), vec![]).unwrap(),
        );
        let x = to_correspondence(&e).unwrap();
        let vs = [("v1", "v1"), ("v2", "v2")]
            .iter()
            .map(|(a, b)| (Vertex::named(*a), Some(Vertex::named(*b))))
            .collect();
        let es = [("e11", "e11"), ("e12", "e11")]
            .iter()
            .map(|(a, b)| (a.to_string(), Some(b.to_string())))
            .collect();
        let psi = LabelledMorphism::new(e.clone(), e.clone(), vs, es).unwrap();
        let rep = psi.check().unwrap();
        assert_eq!(rep.check("(L4)").failed, 1);
        assert!(functor_g(&psi, &x, &x).is_err());
        let m = functor_g_unchecked(&psi, &x, &x).unwrap();
        assert!(m.check().unwrap().check("C1").failed > 0);
    }
}
