//! θ-operators, compact decompositions, `ker φ` and `J_X`.

use std::collections::BTreeMap;

use num::Zero;
use serde::Serialize;

use super::{ModuleElement, PresentedCorrespondence};
use crate::algebra::linear::{Echelon, Equation};
use crate::algebra::AlgElement;
use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// A finite combination `Σ c θ_{ξ,η}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteRankOp {
    parent: u64,
    terms: Vec<(Scalar, ModuleElement, ModuleElement)>,
}

impl FiniteRankOp {
    pub fn zero(c: &PresentedCorrespondence) -> Self {
        FiniteRankOp {
            parent: c.id(),
            terms: vec![],
        }
    }

    pub fn theta(xi: ModuleElement, eta: ModuleElement) -> Result<Self> {
        if xi.parent() != eta.parent() {
            return Err(Error::domain("θ arguments from different correspondences"));
        }
        Ok(FiniteRankOp {
            parent: xi.parent(),
            terms: vec![(scalar::one(), xi, eta)],
        })
    }

    pub fn parent(&self) -> u64 {
        self.parent
    }

    pub fn terms(&self) -> &[(Scalar, ModuleElement, ModuleElement)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &FiniteRankOp) -> Result<FiniteRankOp> {
        if self.parent != other.parent {
            return Err(Error::domain("operators on different correspondences"));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(FiniteRankOp {
            parent: self.parent,
            terms,
        })
    }

    pub fn scale(&self, f: &Scalar) -> FiniteRankOp {
        FiniteRankOp {
            parent: self.parent,
            terms: self
                .terms
                .iter()
                .filter(|_| !f.is_zero())
                .map(|(c, x, y)| (c * f, x.clone(), y.clone()))
                .collect(),
        }
    }

    /// `(θ_{ξ,η})* = θ_{η,ξ}`.
    pub fn adjoint(&self) -> FiniteRankOp {
        FiniteRankOp {
            parent: self.parent,
            terms: self
                .terms
                .iter()
                .map(|(c, x, y)| (scalar::conj(c), y.clone(), x.clone()))
                .collect(),
        }
    }

    pub(crate) fn from_terms(parent: u64, terms: Vec<(Scalar, ModuleElement, ModuleElement)>) -> Self {
        FiniteRankOp { parent, terms }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SolveTranscript {
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
    pub solution: Vec<String>,
    pub residual_zero: bool,
    /// Canonical basis elements on which the result was re-checked.
    pub verified_on: usize,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub op: FiniteRankOp,
    pub transcript: SolveTranscript,
}

#[derive(Clone, Debug)]
pub struct KernelJx {
    /// Atoms of the left-action domain.
    pub atoms: Vec<AlgElement>,
    pub kernel: Vec<usize>,
    pub jx: Vec<usize>,
    pub noncompact: Vec<usize>,
    pub decompositions: BTreeMap<usize, Decomposition>,
}

impl KernelJx {
    pub fn kernel_elems(&self) -> Vec<AlgElement> {
        self.kernel.iter().map(|&i| self.atoms[i].clone()).collect()
    }

    pub fn jx_elems(&self) -> Vec<AlgElement> {
        self.jx.iter().map(|&i| self.atoms[i].clone()).collect()
    }
}

impl PresentedCorrespondence {
    pub fn apply(&self, op: &FiniteRankOp, x: &ModuleElement) -> Result<ModuleElement> {
        if op.parent != self.id() {
            return Err(Error::domain("operator on a different correspondence"));
        }
        let mut out = self.zero();
        for (c, xi, eta) in &op.terms {
            let v = self.right_act(xi, &self.inner(eta, x)?)?;
            out = out.add(&v.scale(c))?;
        }
        Ok(out)
    }

    /// Images of every canonical basis element.
    pub fn images(&self, f: impl Fn(&ModuleElement) -> Result<ModuleElement>) -> Result<Vec<ModuleElement>> {
        (0..self.dim()).map(|k| f(&self.basis_elem(k))).collect()
    }

    /// First canonical basis element on which two maps differ.
    pub fn first_difference(
        &self,
        f: impl Fn(&ModuleElement) -> Result<ModuleElement>,
        g: impl Fn(&ModuleElement) -> Result<ModuleElement>,
    ) -> Result<Option<usize>> {
        for k in 0..self.dim() {
            let b = self.basis_elem(k);
            if f(&b)? != g(&b)? {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    pub fn display_op(&self, op: &FiniteRankOp) -> String {
        if op.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (c, x, y)) in op.terms.iter().enumerate() {
            let neg = c < &Scalar::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if mag != scalar::one() {
                s.push_str(&scalar::format(&mag));
                s.push(' ');
            }
            s.push_str(&format!("θ_{{{},{}}}", self.display(x), self.display(y)));
        }
        s
    }

    /// `θ` built from generator names, `Σ c θ_{g,h}`.
    pub fn theta_named(&self, terms: &[(Scalar, &str, &str)]) -> Result<FiniteRankOp> {
        let mut op = FiniteRankOp::zero(self);
        for (c, g, h) in terms {
            op = op.add(&FiniteRankOp::theta(self.elem(g)?, self.elem(h)?)?.scale(c))?;
        }
        Ok(op)
    }

    /// Writes `φ(a)` as a combination of generator-pair θ-symbols.
    pub fn compact_decomposition(&self, a: &AlgElement) -> Result<Option<Decomposition>> {
        let support: Vec<usize> = self.left_support(a)?.into_iter().collect();
        if let Some(d) = self.decompose_over(a, &support)? {
            return Ok(Some(d));
        }
        let all: Vec<usize> = (0..self.generators().len()).collect();
        if all.len() > support.len() {
            return self.decompose_over(a, &all);
        }
        Ok(None)
    }

    fn decompose_over(&self, a: &AlgElement, gens: &[usize]) -> Result<Option<Decomposition>> {
        let targets = self.images(|x| self.left_act(a, x))?;
        let unknowns: Vec<(usize, usize)> = gens.iter().flat_map(|&g| gens.iter().map(move |&h| (g, h))).collect();
        let mut eqs: BTreeMap<(usize, usize), Equation> = BTreeMap::new();
        for (k, &(p, e)) in self.pairs().iter().enumerate() {
            for (u, &(g, h)) in unknowns.iter().enumerate() {
                let lambda = &self.gram[e][h][p];
                if lambda.is_zero() {
                    continue;
                }
                for (m, c) in self.pair(g, e).coords() {
                    let eq = eqs.entry((k, *m)).or_default();
                    *eq.coeffs.entry(u).or_insert_with(Scalar::zero) += lambda * c;
                }
            }
            for (m, c) in targets[k].coords() {
                eqs.entry((k, *m)).or_default().rhs = c.clone();
            }
        }
        let eqs: Vec<Equation> = eqs
            .into_values()
            .map(|mut e| {
                e.coeffs.retain(|_, c| !c.is_zero());
                e
            })
            .collect();
        let ech = Echelon::new(unknowns.len(), eqs.iter().cloned());
        let Some(x) = ech.particular() else { return Ok(None) };
        let residual_zero = crate::algebra::linear::residual_is_zero(&eqs, &x);
        let mut terms = vec![];
        let mut solution = vec![];
        for (u, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (g, h) = unknowns[u];
            solution.push(format!("{} θ_{{{},{}}}", scalar::format(c), self.generators()[g], self.generators()[h]));
            terms.push((c.clone(), self.gen(g), self.gen(h)));
        }
        let op = FiniteRankOp::from_terms(self.id(), terms);
        let diff = self.first_difference(|x| self.apply(&op, x), |x| self.left_act(a, x))?;
        if !residual_zero || diff.is_some() {
            return Err(Error::invalid(
                "compact decomposition",
                "solver output failed re-verification on the canonical basis",
            ));
        }
        Ok(Some(Decomposition {
            op,
            transcript: SolveTranscript {
                unknowns: unknowns.len(),
                equations: eqs.len(),
                rank: ech.rank(),
                solution,
                residual_zero,
                verified_on: self.dim(),
            },
        }))
    }

    /// Splits the atoms of the left-action domain into `ker φ`, `J_X` and
    /// the remaining non-compact atoms.
    pub fn kernel_and_jx(&self) -> Result<KernelJx> {
        let atoms = self.domain_atoms();
        let mut out = KernelJx {
            atoms: atoms.clone(),
            kernel: vec![],
            jx: vec![],
            noncompact: vec![],
            decompositions: BTreeMap::new(),
        };
        for (i, a) in atoms.iter().enumerate() {
            let imgs = self.images(|x| self.left_act(a, x))?;
            if imgs.iter().all(ModuleElement::is_zero) {
                out.kernel.push(i);
                continue;
            }
            match self.compact_decomposition(a)? {
                Some(d) => {
                    out.jx.push(i);
                    out.decompositions.insert(i, d);
                }
                None => out.noncompact.push(i),
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::c2;
    use super::*;
    use crate::scalar::int;

    #[test]
    fn identity_on_c2_is_two_thetas() {
        let c = c2();
        let one = c.algebra().elem("1").unwrap();
        let d = c.compact_decomposition(&one).unwrap().unwrap();
        assert_eq!(c.display_op(&d.op), "θ_{f1,f1} + θ_{f2,f2}");
        assert!(d.transcript.residual_zero);
        let kj = c.kernel_and_jx().unwrap();
        assert!(kj.kernel.is_empty());
        assert_eq!(kj.jx, vec![0]);
    }

    #[test]
    fn theta_adjoint_law() {
        let c = c2();
        let f1 = c.elem("f1").unwrap();
        let f2 = c.elem("f2").unwrap();
        let xi = f1.add(&f2.scale(&int(2))).unwrap();
        let op = FiniteRankOp::theta(xi.clone(), f2.clone()).unwrap();
        let lhs = c.inner(&c.apply(&op, &f2).unwrap(), &f1).unwrap();
        let rhs = c.inner(&f2, &c.apply(&op.adjoint(), &f1).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert!(c.apply(&op, &f1).unwrap().is_zero());
    }
}
