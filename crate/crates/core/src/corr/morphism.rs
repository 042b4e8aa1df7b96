//! Correspondence morphisms `(ψ, ψ_A): (X, A) → (Y, B)` and their checks.

use std::sync::Arc;

use super::{GenCombo, ModuleElement, PresentedCorrespondence};
use crate::algebra::linear::{self, add_scaled, SparseVec};
use crate::algebra::AlgElement;
use crate::error::{Error, Result};
use crate::report::Report;
use crate::scalar::Scalar;

use super::compact::FiniteRankOp;

#[derive(Clone, Debug)]
pub struct CorrMorphism {
    source: Arc<PresentedCorrespondence>,
    target: Arc<PresentedCorrespondence>,
    /// Image of each source generator.
    module: Vec<ModuleElement>,
    /// Image of each source algebra basis element.
    algebra: Vec<AlgElement>,
}

impl CorrMorphism {
    pub fn new(
        source: Arc<PresentedCorrespondence>,
        target: Arc<PresentedCorrespondence>,
        module: Vec<ModuleElement>,
        algebra: Vec<AlgElement>,
    ) -> Result<Self> {
        if module.len() != source.generators().len() || algebra.len() != source.algebra().dim() {
            return Err(Error::invalid("morphism", "image tables do not match the source presentation"));
        }
        if module.iter().any(|m| m.parent() != target.id()) {
            return Err(Error::invalid("morphism", "module image outside the target correspondence"));
        }
        if algebra.iter().any(|a| a.parent() != target.algebra().id()) {
            return Err(Error::invalid("morphism", "algebra image outside the target algebra"));
        }
        Ok(CorrMorphism {
            source,
            target,
            module,
            algebra,
        })
    }

    /// Builds a morphism from named images; unlisted symbols map to zero.
    pub fn from_names(
        source: Arc<PresentedCorrespondence>,
        target: Arc<PresentedCorrespondence>,
        module: &[(&str, Vec<(&str, Scalar)>)],
        algebra: &[(&str, Vec<(&str, Scalar)>)],
    ) -> Result<Self> {
        let mut m = vec![target.zero(); source.generators().len()];
        for (g, img) in module {
            let i = source.gen_index(g)?;
            m[i] = target.combo(img)?;
        }
        let mut a = vec![target.algebra().zero(); source.algebra().dim()];
        for (b, img) in algebra {
            let i = source
                .algebra()
                .index_of(b)
                .ok_or_else(|| Error::invalid("morphism", format!("unknown basis symbol {b}")))?;
            a[i] = target.algebra().combo(img.iter().map(|(s, c)| (*s, c.clone())))?;
        }
        Self::new(source, target, m, a)
    }

    pub fn identity(c: Arc<PresentedCorrespondence>) -> Self {
        let module = (0..c.generators().len()).map(|g| c.gen(g)).collect();
        let algebra = (0..c.algebra().dim()).map(|b| c.algebra().basis_elem(b)).collect();
        CorrMorphism {
            source: c.clone(),
            target: c,
            module,
            algebra,
        }
    }

    pub fn source(&self) -> &Arc<PresentedCorrespondence> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PresentedCorrespondence> {
        &self.target
    }

    pub fn gen_image(&self, g: usize) -> &ModuleElement {
        &self.module[g]
    }

    pub fn basis_image(&self, b: usize) -> &AlgElement {
        &self.algebra[b]
    }

    pub fn map_alg(&self, a: &AlgElement) -> Result<AlgElement> {
        if a.parent() != self.source.algebra().id() {
            return Err(Error::domain("algebra element outside the source algebra"));
        }
        let mut out = self.target.algebra().zero();
        for (b, c) in a.coeffs() {
            out = out.add(&self.algebra[*b].scale(c))?;
        }
        Ok(out)
    }

    pub fn map_gen_combo(&self, v: &GenCombo) -> ModuleElement {
        let mut out = SparseVec::new();
        for (g, c) in v {
            add_scaled(&mut out, self.module[*g].coords(), c);
        }
        self.target_elem(out)
    }

    fn target_elem(&self, coords: SparseVec) -> ModuleElement {
        let mut z = self.target.zero();
        z.coords = coords;
        z
    }

    /// Image of a module element: each canonical pair `(g, e)` goes to
    /// `ψ(g) · ψ_A(e)`.
    pub fn map_module(&self, x: &ModuleElement) -> Result<ModuleElement> {
        if x.parent() != self.source.id() {
            return Err(Error::domain("module element outside the source correspondence"));
        }
        let mut out = self.target.zero();
        for (k, c) in x.coords() {
            let (g, e) = self.source.pairs()[*k];
            let atom = self.map_alg(&self.source.algebra().atom(e))?;
            let v = self.target.right_act(&self.module[g], &atom)?;
            out = out.add(&v.scale(c))?;
        }
        Ok(out)
    }

    /// `ψ⁺(Σ c θ_{ξ,η}) = Σ c θ_{ψξ,ψη}`.
    pub fn plus(&self, op: &FiniteRankOp) -> Result<FiniteRankOp> {
        let mut out = FiniteRankOp::zero(&self.target);
        for (c, xi, eta) in op.terms() {
            let t = FiniteRankOp::theta(self.map_module(xi)?, self.map_module(eta)?)?;
            out = out.add(&t.scale(c))?;
        }
        Ok(out)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &CorrMorphism) -> Result<CorrMorphism> {
        if first.target.id() != self.source.id() {
            return Err(Error::domain("morphisms are not composable"));
        }
        let module = first.module.iter().map(|m| self.map_module(m)).collect::<Result<_>>()?;
        let algebra = first.algebra.iter().map(|a| self.map_alg(a)).collect::<Result<_>>()?;
        Self::new(first.source.clone(), self.target.clone(), module, algebra)
    }

    /// Checks the homomorphism property of `ψ_A` and conditions (C1)–(C4)
    /// on the presented generators, one record per instance.
    pub fn check(&self) -> Result<Report> {
        let mut rep = Report::new("correspondence morphism");
        let (src, tgt) = (&*self.source, &*self.target);
        let sa = src.algebra();
        let ta = tgt.algebra();
        let bname = |b: usize| sa.basis()[b].clone();
        let gname = |g: usize| src.generators()[g].clone();

        for b in 0..sa.dim() {
            let img = &self.algebra[b];
            let ok = *img == img.star();
            rep.push("homomorphism", format!("{}*", bname(b)), ok, (!ok).then(|| ta.display(img)));
            for c in b..sa.dim() {
                let lhs = self.map_alg(&sa.mul(&sa.basis_elem(b), &sa.basis_elem(c))?)?;
                let rhs = ta.mul(img, &self.algebra[c])?;
                let ok = lhs == rhs;
                let w = (!ok).then(|| format!("{} ≠ {}", ta.display(&lhs), ta.display(&rhs)));
                rep.push("homomorphism", format!("{}·{}", bname(b), bname(c)), ok, w);
            }
        }

        let n = src.generators().len();
        for g in 0..n {
            for h in g..n {
                let lhs = tgt.inner(&self.module[g], &self.module[h])?;
                let rhs = self.map_alg(src.inner_table(g, h))?;
                let ok = lhs == rhs;
                let w = (!ok).then(|| format!("⟨ψ{0},ψ{1}⟩ = {2} but ψ_A⟨{0},{1}⟩ = {3}", gname(g), gname(h), ta.display(&lhs), ta.display(&rhs)));
                rep.push("C1", format!("{},{}", gname(g), gname(h)), ok, w);
            }
        }

        for g in 0..n {
            for b in 0..sa.dim() {
                let lhs = self.map_gen_combo(src.right_table(g, b));
                let rhs = tgt.right_act(&self.module[g], &self.algebra[b])?;
                let ok = lhs == rhs;
                let w = (!ok).then(|| format!("{} ≠ {}", tgt.display(&lhs), tgt.display(&rhs)));
                rep.push("right linearity", format!("{}·{}", gname(g), bname(b)), ok, w);
            }
        }

        for b in (0..sa.dim()).filter(|&b| src.left_domain()[b]) {
            for g in 0..n {
                let inst = format!("φ({}){}", bname(b), gname(g));
                let lhs = self.map_gen_combo(src.left_table(b, g));
                let r = tgt.left_act(&self.algebra[b], &self.module[g]).map(|rhs| {
                    (lhs != rhs).then(|| format!("{} ≠ {}", tgt.display(&lhs), tgt.display(&rhs)))
                });
                rep.outcome("C2", inst, r)?;
            }
        }

        let kx = src.kernel_and_jx()?;
        let ky = tgt.kernel_and_jx()?;
        let jy: Vec<SparseVec> = ky.jx_elems().iter().map(|a| ta.atom_coords(a)).collect();
        let jy_ech = linear::Echelon::new(
            0,
            jy.iter().map(|v| linear::Equation {
                coeffs: v.clone(),
                rhs: num::Zero::zero(),
            }),
        );
        for &i in &kx.jx {
            let a = &kx.atoms[i];
            let img = self.map_alg(a)?;
            let ok = jy_ech.spans(&ta.atom_coords(&img));
            let w = (!ok).then(|| format!("ψ_A({}) = {} is not in J_Y", sa.display(a), ta.display(&img)));
            rep.push("C3", sa.display(a), ok, w);
        }

        for &i in &kx.jx {
            let a = &kx.atoms[i];
            let d = &kx.decompositions[&i];
            let lhs = self.plus(&d.op)?;
            let img = self.map_alg(a)?;
            let inst = format!("φ({})", sa.display(a));
            let diff = tgt.first_difference(|y| tgt.apply(&lhs, y), |y| tgt.left_act(&img, y));
            let r = match diff {
                Ok(None) => Ok(None),
                Ok(Some(k)) => {
                    let rhs = match tgt.compact_decomposition(&img)? {
                        Some(e) => tgt.display_op(&e.op),
                        None => format!("φ_Y({})", ta.display(&img)),
                    };
                    Ok(Some(format!(
                        "ψ⁺(φ_X({})) = {} but φ_Y(ψ_A({})) = {}; they differ on {}",
                        sa.display(a),
                        tgt.display_op(&lhs),
                        sa.display(a),
                        rhs,
                        tgt.pair_name(k)
                    )))
                }
                Err(e) => Err(e),
            };
            rep.outcome("C4", inst, r)?;
        }
        Ok(rep)
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::c2;
    use super::*;
    use crate::algebra::PresentedCommAlgebra;
    use crate::corr::CorrBuilder;
    use crate::scalar::int;

    fn line() -> PresentedCorrespondence {
        let a = PresentedCommAlgebra::orthogonal(["1"]);
        let mut b = CorrBuilder::new(a.clone(), vec!["e".into()]).unwrap();
        b.right_to("e", "1", Some("e")).unwrap();
        b.left("1", "e", &[("e", int(1))]).unwrap();
        b.inner("e", "e", a.elem("1").unwrap()).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn isometric_embedding_fails_only_c4() {
        let x = Arc::new(line());
        let y = Arc::new(c2());
        let m = CorrMorphism::from_names(x, y, &[("e", vec![("f1", int(1))])], &[("1", vec![("1", int(1))])]).unwrap();
        let rep = m.check().unwrap();
        for c in ["homomorphism", "C1", "right linearity", "C2", "C3"] {
            assert!(rep.check_passed(c), "{c}");
        }
        let c4 = rep.check("C4");
        assert_eq!(c4.failed, 1);
        let w = c4.first_failure.unwrap();
        assert!(w.contains("= θ_{f1,f1} but"), "{w}");
        assert!(w.contains("= θ_{f1,f1} + θ_{f2,f2}"), "{w}");
    }

    #[test]
    fn identity_and_composition() {
        let y = Arc::new(c2());
        let id = CorrMorphism::identity(y.clone());
        assert!(id.check().unwrap().all_passed());
        let swap = CorrMorphism::from_names(
            y.clone(),
            y.clone(),
            &[("f1", vec![("f2", int(1))]), ("f2", vec![("f1", int(1))])],
            &[("1", vec![("1", int(1))])],
        )
        .unwrap();
        assert!(swap.check().unwrap().all_passed());
        let twice = swap.compose(&swap).unwrap();
        let f1 = y.elem("f1").unwrap();
        assert_eq!(twice.map_module(&f1).unwrap(), f1);
    }
}
