//! Covariant representations of a correspondence into a [`StarEngine`].

use rayon::prelude::*;

use super::{GenCombo, ModuleElement, PresentedCorrespondence};
use crate::algebra::{AlgElement, StarEngine};
use crate::error::{Error, Result};
use crate::report::Report;

/// Images `ρ(g)` of generators and `ρ_A(b)` of algebra basis elements.
#[derive(Clone, Debug)]
pub struct Assignment<T> {
    pub gens: Vec<T>,
    pub algebra: Vec<T>,
}

impl<T: Clone> Assignment<T> {
    /// Fills generators recorded as `parent · b` with `ρ(parent) ρ_A(b)`.
    pub fn complete<E: StarEngine<Elem = T>>(
        c: &PresentedCorrespondence,
        engine: &E,
        gens: Vec<Option<T>>,
        algebra: Vec<T>,
    ) -> Result<Self> {
        let mut out: Vec<Option<T>> = gens;
        if out.len() != c.generators().len() || algebra.len() != c.algebra().dim() {
            return Err(Error::invalid("assignment", "image tables do not match the presentation"));
        }
        let mut changed = true;
        while changed {
            changed = false;
            for g in 0..out.len() {
                if out[g].is_some() {
                    continue;
                }
                if let Some((p, b)) = c.derivation(g) {
                    if let Some(rp) = out[p].clone() {
                        out[g] = Some(engine.mul(&rp, &algebra[b])?);
                        changed = true;
                    }
                }
            }
        }
        let gens = out
            .into_iter()
            .enumerate()
            .map(|(g, v)| v.ok_or_else(|| Error::invalid("assignment", format!("no image for {}", c.generators()[g]))))
            .collect::<Result<_>>()?;
        Ok(Assignment { gens, algebra })
    }
}

enum Instance {
    SelfAdjoint(usize),
    Hom(usize, usize),
    C1(usize, usize),
    Module(usize, usize),
    C2(usize, usize),
    C4(usize),
    Injective(usize),
}

struct Rep<'a, E: StarEngine> {
    c: &'a PresentedCorrespondence,
    engine: &'a E,
    rho: &'a Assignment<E::Elem>,
}

impl<E: StarEngine> Rep<'_, E> {
    fn alg(&self, a: &AlgElement) -> Result<E::Elem> {
        let mut acc = self.engine.zero();
        for (b, c) in a.coeffs() {
            acc = self.engine.add(&acc, &self.engine.scale(c, &self.rho.algebra[*b]))?;
        }
        Ok(acc)
    }

    fn combo(&self, v: &GenCombo) -> Result<E::Elem> {
        let mut acc = self.engine.zero();
        for (g, c) in v {
            acc = self.engine.add(&acc, &self.engine.scale(c, &self.rho.gens[*g]))?;
        }
        Ok(acc)
    }

    fn module(&self, x: &ModuleElement) -> Result<E::Elem> {
        if let Some(v) = self.c.as_gen_combo(x) {
            return self.combo(&v);
        }
        let mut acc = self.engine.zero();
        for (k, f) in x.coords() {
            let (g, e) = self.c.pairs()[*k];
            let t = self.engine.mul(&self.rho.gens[g], &self.alg(&self.c.algebra().atom(e))?)?;
            acc = self.engine.add(&acc, &self.engine.scale(f, &t))?;
        }
        Ok(acc)
    }

    fn compare(&self, lhs: &E::Elem, rhs: &E::Elem) -> Result<Option<String>> {
        Ok((!self.engine.equals(lhs, rhs)?)
            .then(|| format!("{} ≠ {}", self.engine.render(lhs), self.engine.render(rhs))))
    }

    fn run(&self, inst: &Instance, jx: &[(AlgElement, super::FiniteRankOp)]) -> (String, String, Result<Option<String>>) {
        let a = self.c.algebra();
        let g = |i: usize| self.c.generators()[i].clone();
        let b = |i: usize| a.basis()[i].clone();
        let en = self.engine;
        match *inst {
            Instance::SelfAdjoint(i) => {
                let r = &self.rho.algebra[i];
                ("self-adjoint".into(), b(i), self.compare(&en.star(r), r))
            }
            Instance::Hom(i, j) => {
                let r = (|| {
                    let lhs = en.mul(&self.rho.algebra[i], &self.rho.algebra[j])?;
                    let rhs = self.alg(&a.mul(&a.basis_elem(i), &a.basis_elem(j))?)?;
                    self.compare(&lhs, &rhs)
                })();
                ("homomorphism".into(), format!("{}·{}", b(i), b(j)), r)
            }
            Instance::C1(i, j) => {
                let r = (|| {
                    let lhs = en.mul(&en.star(&self.rho.gens[i]), &self.rho.gens[j])?;
                    let rhs = self.alg(self.c.inner_table(i, j))?;
                    self.compare(&lhs, &rhs)
                })();
                ("C1".into(), format!("ρ({})*ρ({})", g(i), g(j)), r)
            }
            Instance::Module(i, j) => {
                let r = (|| {
                    let lhs = en.mul(&self.rho.gens[i], &self.rho.algebra[j])?;
                    let rhs = self.combo(self.c.right_table(i, j))?;
                    self.compare(&lhs, &rhs)
                })();
                ("module".into(), format!("ρ({})ρ_A({})", g(i), b(j)), r)
            }
            Instance::C2(i, j) => {
                let r = (|| {
                    let lhs = en.mul(&self.rho.algebra[i], &self.rho.gens[j])?;
                    let rhs = self.combo(self.c.left_table(i, j))?;
                    self.compare(&lhs, &rhs)
                })();
                ("C2".into(), format!("ρ_A({})ρ({})", b(i), g(j)), r)
            }
            Instance::C4(k) => {
                let (atom, op) = &jx[k];
                let r = (|| {
                    let mut lhs = en.zero();
                    for (c, xi, eta) in op.terms() {
                        let t = en.mul(&self.module(xi)?, &en.star(&self.module(eta)?))?;
                        lhs = en.add(&lhs, &en.scale(c, &t))?;
                    }
                    self.compare(&lhs, &self.alg(atom)?)
                })();
                ("C4".into(), format!("φ({})", a.display(atom)), r)
            }
            Instance::Injective(e) => {
                let r = (|| {
                    let v = self.alg(&a.atom(e))?;
                    Ok((en.equals(&v, &en.zero())?).then(|| format!("ρ_A({}) = 0", a.atom_label(e))))
                })();
                ("injective".into(), a.atom_label(e), r)
            }
        }
    }
}

/// Checks that `(ρ, ρ_A)` is a covariant representation: `ρ_A` is a
/// *-homomorphism, (C1), the module rule, (C2) on the left-action domain,
/// and (C4) on the atoms of `J_X`. Also reports whether `ρ_A` is injective.
pub fn check_covariant_rep<E: StarEngine>(
    c: &PresentedCorrespondence,
    engine: &E,
    rho: &Assignment<E::Elem>,
) -> Result<Report> {
    let n = c.generators().len();
    let m = c.algebra().dim();
    if rho.gens.len() != n || rho.algebra.len() != m {
        return Err(Error::invalid("assignment", "image tables do not match the presentation"));
    }
    let kj = c.kernel_and_jx()?;
    let jx: Vec<(AlgElement, super::FiniteRankOp)> = kj
        .jx
        .iter()
        .map(|&i| (kj.atoms[i].clone(), kj.decompositions[&i].op.clone()))
        .collect();
    let mut insts = vec![];
    for i in 0..m {
        insts.push(Instance::SelfAdjoint(i));
        for j in i..m {
            insts.push(Instance::Hom(i, j));
        }
    }
    for i in 0..n {
        for j in i..n {
            insts.push(Instance::C1(i, j));
        }
    }
    for i in 0..n {
        for j in 0..m {
            insts.push(Instance::Module(i, j));
        }
    }
    for i in (0..m).filter(|&i| c.left_domain()[i]) {
        for j in 0..n {
            insts.push(Instance::C2(i, j));
        }
    }
    insts.extend((0..jx.len()).map(Instance::C4));
    insts.extend((0..c.algebra().atoms()).map(Instance::Injective));
    let r = Rep { c, engine, rho };
    let results: Vec<(String, String, Result<Option<String>>)> = insts.par_iter().map(|i| r.run(i, &jx)).collect();
    let mut rep = Report::new("covariant representation");
    for (check, inst, res) in results {
        rep.outcome(&check, inst, res)?;
    }
    Ok(rep)
}
