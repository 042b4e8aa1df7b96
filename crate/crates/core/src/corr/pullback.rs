//! Restricted direct sums `X ⊕_Z Y` over a common target and the
//! hypotheses of the gluing theorem.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use num::{One, Zero};
use serde::Serialize;

use super::{CorrBuilder, CorrMorphism, GenCombo, ModuleElement, PresentedCorrespondence};
use crate::algebra::linear::{self, Echelon, Equation, SpanBasis, SparseVec};
use crate::algebra::{AlgElement, PresentedCommAlgebra};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::scalar::Scalar;

/// Optional explicit data for a restricted sum. Anything given is checked
/// against the kernel computation; anything missing is computed.
#[derive(Clone, Debug, Default)]
pub struct SumSpec {
    pub projections: Option<Vec<(AlgElement, AlgElement)>>,
    pub pairs: Option<Vec<(ModuleElement, ModuleElement)>>,
}

#[derive(Clone, Debug)]
pub struct RestrictedSum {
    pub corr: Arc<PresentedCorrespondence>,
    /// Components `(ξ, η)` of each generator.
    pub components: Vec<(ModuleElement, ModuleElement)>,
    /// Components `(a, b)` of each algebra basis element.
    pub basis: Vec<(AlgElement, AlgElement)>,
    pub to_x: CorrMorphism,
    pub to_y: CorrMorphism,
}

impl RestrictedSum {
    pub fn gen_named(&self, xi: &ModuleElement, eta: &ModuleElement) -> Option<usize> {
        self.components.iter().position(|(a, b)| a == xi && b == eta)
    }

    /// The sum element with components `(ξ, η)`, when it lies in the sum.
    pub fn element(&self, xi: &ModuleElement, eta: &ModuleElement) -> Result<ModuleElement> {
        let gens: Vec<SparseVec> = self.components.iter().map(|(a, b)| join(a, b, self.x_dim())).collect();
        let mut span = SpanBasis::new();
        for g in &gens {
            span.insert(g);
        }
        let c = span
            .express(&join(xi, eta, self.x_dim()))
            .ok_or_else(|| Error::domain("pair is not in the restricted sum"))?;
        Ok(self.corr.from_gens(&c))
    }

    /// The sum algebra element with components `(a, b)`.
    pub fn alg_element(&self, a: &AlgElement, b: &AlgElement) -> Result<AlgElement> {
        let xa = self.to_x.target().algebra();
        let yb = self.to_y.target().algebra();
        let basis: Vec<SparseVec> = self
            .basis
            .iter()
            .map(|(p, q)| alg_join(xa, yb, p, q))
            .collect();
        let mut span = SpanBasis::new();
        for v in &basis {
            span.insert(v);
        }
        let c = span
            .express(&alg_join(xa, yb, a, b))
            .ok_or_else(|| Error::domain("pair is not in the pullback algebra"))?;
        Ok(self.corr.algebra().from_coeffs(c))
    }

    fn x_dim(&self) -> usize {
        self.to_x.target().dim()
    }
}

fn join(xi: &ModuleElement, eta: &ModuleElement, dx: usize) -> SparseVec {
    let mut v = xi.coords().clone();
    v.extend(eta.coords().iter().map(|(k, c)| (k + dx, c.clone())));
    v
}

fn split(v: &SparseVec, x: &PresentedCorrespondence, y: &PresentedCorrespondence) -> (ModuleElement, ModuleElement) {
    let dx = x.dim();
    let mut xi = x.zero();
    let mut eta = y.zero();
    for (k, c) in v {
        if *k < dx {
            xi.coords.insert(*k, c.clone());
        } else {
            eta.coords.insert(k - dx, c.clone());
        }
    }
    (xi, eta)
}

fn alg_join(xa: &PresentedCommAlgebra, yb: &PresentedCommAlgebra, a: &AlgElement, b: &AlgElement) -> SparseVec {
    let mut v = xa.atom_coords(a);
    let off = xa.atoms();
    v.extend(yb.atom_coords(b).into_iter().map(|(k, c)| (k + off, c)));
    v
}

fn alg_split(xa: &PresentedCommAlgebra, yb: &PresentedCommAlgebra, v: &SparseVec) -> (AlgElement, AlgElement) {
    let off = xa.atoms();
    let a: SparseVec = v.iter().filter(|(k, _)| **k < off).map(|(k, c)| (*k, c.clone())).collect();
    let b: SparseVec = v.iter().filter(|(k, _)| **k >= off).map(|(k, c)| (k - off, c.clone())).collect();
    (xa.from_atom_coords(&a), yb.from_atom_coords(&b))
}

fn kernel_of(unknowns: usize, columns: &[SparseVec]) -> Vec<SparseVec> {
    let mut rows: BTreeMap<usize, Equation> = BTreeMap::new();
    for (u, col) in columns.iter().enumerate() {
        for (r, c) in col {
            rows.entry(*r).or_default().coeffs.insert(u, c.clone());
        }
    }
    Echelon::new(unknowns, rows.into_values()).kernel()
}

fn negate(v: SparseVec) -> SparseVec {
    v.into_iter().map(|(k, c)| (k, -c)).collect()
}

/// Builds `X ⊕_Z Y = {(ξ, η) : ψ(ξ) = ω(η)}` over `A ⊕_C B`.
pub fn restricted_direct_sum(mx: &CorrMorphism, my: &CorrMorphism, spec: &SumSpec) -> Result<RestrictedSum> {
    if mx.target().id() != my.target().id() {
        return Err(Error::domain("restricted sum needs morphisms into the same correspondence"));
    }
    let x = mx.source().clone();
    let y = my.source().clone();
    let z = mx.target().clone();
    let (xa, yb, zc) = (x.algebra(), y.algebra(), z.algebra());

    // Pullback algebra, in atom coordinates of A ⊔ B.
    let npts = xa.atoms() + yb.atoms();
    let mut cols = vec![];
    for e in 0..xa.atoms() {
        cols.push(zc.atom_coords(&mx.map_alg(&xa.atom(e))?));
    }
    for e in 0..yb.atoms() {
        cols.push(negate(zc.atom_coords(&my.map_alg(&yb.atom(e))?)));
    }
    let alg_kernel = kernel_of(npts, &cols);
    let mut kspan = SpanBasis::new();
    for v in &alg_kernel {
        kspan.insert(v);
    }
    let mut blocks: Vec<(Vec<Scalar>, SparseVec)> = vec![];
    for p in 0..npts {
        let sig: Vec<Scalar> = alg_kernel
            .iter()
            .map(|v| v.get(&p).cloned().unwrap_or_else(Scalar::zero))
            .collect();
        if sig.iter().all(Zero::is_zero) {
            continue;
        }
        match blocks.iter_mut().find(|(s, _)| *s == sig) {
            Some((_, v)) => {
                v.insert(p, Scalar::one());
            }
            None => blocks.push((sig, [(p, Scalar::one())].into_iter().collect())),
        }
    }
    let blocks: Vec<SparseVec> = blocks.into_iter().map(|(_, v)| v).collect();
    if let Some(b) = blocks.iter().find(|b| !kspan.contains(b)) {
        let (a, bb) = alg_split(xa, yb, b);
        return Err(Error::Unsupported(format!(
            "pullback algebra is not spanned by projections (block ({}, {}))",
            xa.display(&a),
            yb.display(&bb)
        )));
    }
    let basis_vecs: Vec<SparseVec> = match &spec.projections {
        None => blocks.clone(),
        Some(ps) => {
            let vs: Vec<SparseVec> = ps.iter().map(|(a, b)| alg_join(xa, yb, a, b)).collect();
            for (v, (a, b)) in vs.iter().zip(ps) {
                let idem = v.values().all(One::is_one);
                if !idem || !kspan.contains(v) {
                    return Err(Error::invalid(
                        "restricted sum",
                        format!("({}, {}) is not a projection of the pullback algebra", xa.display(a), yb.display(b)),
                    ));
                }
            }
            if !linear::same_span(&vs, &blocks) {
                return Err(Error::invalid("restricted sum", "listed projections do not span the pullback algebra"));
            }
            vs
        }
    };
    let mut abasis = SpanBasis::new();
    for v in &basis_vecs {
        if abasis.insert(v).is_none() {
            return Err(Error::invalid("restricted sum", "listed projections are linearly dependent"));
        }
    }
    let components: Vec<(AlgElement, AlgElement)> = basis_vecs.iter().map(|v| alg_split(xa, yb, v)).collect();
    let names = unique_names(components.iter().map(|(a, b)| format!("({}, {})", xa.display(a), yb.display(b))));
    let mut mult = vec![];
    for i in 0..basis_vecs.len() {
        for j in i..basis_vecs.len() {
            let prod: SparseVec = basis_vecs[i]
                .iter()
                .filter_map(|(k, c)| basis_vecs[j].get(k).map(|d| (*k, c * d)))
                .filter(|(_, c)| !c.is_zero())
                .collect();
            let coords = abasis.express(&prod).ok_or_else(|| {
                Error::invalid("restricted sum", format!("product {}·{} leaves the pullback", names[i], names[j]))
            })?;
            mult.push((
                names[i].clone(),
                names[j].clone(),
                coords.into_iter().map(|(k, c)| (names[k].clone(), c)).collect(),
            ));
        }
    }
    let alg = PresentedCommAlgebra::new(names.clone(), mult)?;
    let to_alg = |v: &SparseVec| -> Result<AlgElement> {
        abasis
            .express(v)
            .map(|c| alg.from_coeffs(c))
            .ok_or_else(|| Error::invalid("restricted sum", "value outside the pullback algebra"))
    };

    // Module part, in canonical coordinates of X ⊕ Y.
    let (dx, dy) = (x.dim(), y.dim());
    let mut mcols = vec![];
    for k in 0..dx {
        mcols.push(mx.map_module(&x.basis_elem(k))?.coords().clone());
    }
    for l in 0..dy {
        mcols.push(negate(my.map_module(&y.basis_elem(l))?.coords().clone()));
    }
    let mod_kernel = kernel_of(dx + dy, &mcols);
    let mut mspan = SpanBasis::new();
    for v in &mod_kernel {
        mspan.insert(v);
    }
    let candidates: Vec<SparseVec> = match &spec.pairs {
        Some(ps) => {
            let mut out = vec![];
            for (xi, eta) in ps {
                let v = join(xi, eta, dx);
                if !mspan.contains(&v) {
                    return Err(Error::invalid(
                        "restricted sum",
                        format!("({}, {}) violates ψ(ξ) = ω(η)", x.display(xi), y.display(eta)),
                    ));
                }
                out.push(v);
            }
            out
        }
        None => heuristic_pairs(mx, my)?,
    };
    let mut set = GenSet::default();
    for v in candidates {
        set.push(v, None);
    }
    let mut fill = mod_kernel.iter();
    loop {
        while let Some(i) = set.queue.pop_front() {
            let (xi, eta) = split(&set.vecs[i], &x, &y);
            for (j, (a, b)) in components.iter().enumerate() {
                let v = join(&x.right_act(&xi, a)?, &y.right_act(&eta, b)?, dx);
                set.push(v, Some((i, j)));
            }
        }
        if set.span.len() == mod_kernel.len() {
            break;
        }
        match fill.next() {
            Some(v) => set.push(v.clone(), None),
            None => return Err(Error::invalid("restricted sum", "generators exceed the kernel")),
        }
    }
    let GenSet {
        span: gens,
        vecs: gvecs,
        derived,
        ..
    } = set;
    let mcomp: Vec<(ModuleElement, ModuleElement)> = gvecs.iter().map(|v| split(v, &x, &y)).collect();
    let gnames = unique_names(mcomp.iter().map(|(a, b)| format!("({}, {})", x.display(a), y.display(b))));
    let express = |v: &SparseVec, what: &str| -> Result<GenCombo> {
        gens.express(v)
            .ok_or_else(|| Error::invalid("restricted sum", format!("{what} leaves the restricted sum")))
    };
    let mut b = CorrBuilder::new(alg.clone(), gnames.clone())?;
    let n = gvecs.len();
    for g in 0..n {
        let (xi, eta) = &mcomp[g];
        for (j, (a, bb)) in components.iter().enumerate() {
            let v = join(&x.right_act(xi, a)?, &y.right_act(eta, bb)?, dx);
            b.right_idx(g, j, express(&v, "right action")?);
        }
        for h in 0..n {
            let (xi2, eta2) = &mcomp[h];
            let v = alg_join(xa, yb, &x.inner(xi, xi2)?, &y.inner(eta, eta2)?);
            b.inner_idx(g, h, to_alg(&v)?);
        }
        if let Some(d) = derived[g] {
            b.derived(g, d.0, d.1);
        }
    }
    let mut domain = vec![false; components.len()];
    for (j, (a, bb)) in components.iter().enumerate() {
        if !(x.in_left_domain(a) && y.in_left_domain(bb)) {
            continue;
        }
        domain[j] = true;
        for g in 0..n {
            let (xi, eta) = &mcomp[g];
            let v = join(&x.left_act(a, xi)?, &y.left_act(bb, eta)?, dx);
            b.left_idx(j, g, express(&v, "left action")?);
        }
    }
    b.left_domain_idx(domain);
    let corr = Arc::new(b.build()?);
    let to_x = CorrMorphism::new(
        corr.clone(),
        x.clone(),
        mcomp.iter().map(|(a, _)| a.clone()).collect(),
        components.iter().map(|(a, _)| a.clone()).collect(),
    )?;
    let to_y = CorrMorphism::new(
        corr.clone(),
        y.clone(),
        mcomp.iter().map(|(_, b)| b.clone()).collect(),
        components.iter().map(|(_, b)| b.clone()).collect(),
    )?;
    Ok(RestrictedSum {
        corr,
        components: mcomp,
        basis: components,
        to_x,
        to_y,
    })
}

#[derive(Default)]
struct GenSet {
    span: SpanBasis,
    vecs: Vec<SparseVec>,
    derived: Vec<Option<(usize, usize)>>,
    queue: VecDeque<usize>,
}

impl GenSet {
    fn push(&mut self, v: SparseVec, d: Option<(usize, usize)>) {
        if v.is_empty() || self.span.insert(&v).is_none() {
            return;
        }
        self.queue.push_back(self.vecs.len());
        self.vecs.push(v);
        self.derived.push(d);
    }
}

/// Generator pairs read off the morphism tables: `(g, 0)` and `(0, h)` for
/// generators in the kernels, `(g, h)` when the images agree.
fn heuristic_pairs(mx: &CorrMorphism, my: &CorrMorphism) -> Result<Vec<SparseVec>> {
    let x = mx.source();
    let y = my.source();
    let dx = x.dim();
    let mut out = vec![];
    let xi: Vec<ModuleElement> = (0..x.generators().len()).map(|g| x.gen(g)).collect();
    let eta: Vec<ModuleElement> = (0..y.generators().len()).map(|h| y.gen(h)).collect();
    let xi_img: Vec<ModuleElement> = xi.iter().map(|v| mx.map_module(v)).collect::<Result<_>>()?;
    let eta_img: Vec<ModuleElement> = eta.iter().map(|v| my.map_module(v)).collect::<Result<_>>()?;
    for (g, img) in xi_img.iter().enumerate() {
        if img.is_zero() {
            out.push(join(&xi[g], &y.zero(), dx));
        }
        for (h, img2) in eta_img.iter().enumerate() {
            if !img.is_zero() && img == img2 {
                out.push(join(&xi[g], &eta[h], dx));
            }
        }
    }
    for (h, img) in eta_img.iter().enumerate() {
        if img.is_zero() {
            out.push(join(&x.zero(), &eta[h], dx));
        }
    }
    Ok(out)
}

fn unique_names(names: impl Iterator<Item = String>) -> Vec<String> {
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    names
        .map(|n| {
            let k = seen.entry(n.clone()).or_insert(0);
            *k += 1;
            if *k == 1 {
                n
            } else {
                format!("{n}#{k}")
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PullbackReport {
    pub report: Report,
    /// Atoms spanning the complement of `ker φ_X`, and of `ker φ_Y`.
    pub complement_x: Vec<String>,
    pub complement_y: Vec<String>,
    pub kernel_x: Vec<String>,
    pub kernel_y: Vec<String>,
}

/// Checks hypotheses (1)–(3) of the gluing theorem for `ψ: X → Z` and
/// `ω: Y → Z`. Surjectivity is span-surjectivity on canonical bases.
pub fn check_pullback_hypotheses(mx: &CorrMorphism, my: &CorrMorphism) -> Result<PullbackReport> {
    if mx.target().id() != my.target().id() {
        return Err(Error::domain("hypotheses need morphisms into the same correspondence"));
    }
    let mut rep = Report::new("gluing hypotheses");
    let z = mx.target();
    let zc = z.algebra();
    let mut kernels = vec![];
    let mut complements = vec![];
    let mut kernel_names = vec![];
    for (m, side) in [(mx, "X"), (my, "Y")] {
        let src = m.source();
        let sa = src.algebra();

        let imgs: Vec<SparseVec> = (0..sa.atoms())
            .map(|e| m.map_alg(&sa.atom(e)).map(|a| zc.atom_coords(&a)))
            .collect::<Result<_>>()?;
        let missing = first_outside(&imgs, zc.atoms());
        rep.push(
            "(1) algebra map surjective",
            side,
            missing.is_none(),
            missing.map(|e| format!("atom {} is not in the image", zc.atom_label(e))),
        );
        let mimgs: Vec<SparseVec> = (0..src.dim())
            .map(|k| m.map_module(&src.basis_elem(k)).map(|v| v.coords().clone()))
            .collect::<Result<_>>()?;
        let missing = first_outside(&mimgs, z.dim());
        rep.push(
            "(1) module map surjective",
            side,
            missing.is_none(),
            missing.map(|k| format!("{} is not in the image", z.pair_name(k))),
        );

        let kj = src.kernel_and_jx()?;
        let noncompact: Vec<String> = kj.noncompact.iter().map(|&i| sa.display(&kj.atoms[i])).collect();
        rep.push(
            "(2) left action compact",
            side,
            noncompact.is_empty(),
            (!noncompact.is_empty()).then(|| format!("φ({}) is not compact", noncompact.join(", "))),
        );

        let ker: Vec<AlgElement> = kj.kernel_elems();
        let comp: Vec<AlgElement> = (0..kj.atoms.len())
            .filter(|i| !kj.kernel.contains(i))
            .map(|i| kj.atoms[i].clone())
            .collect();
        let cspan: Vec<SparseVec> = comp.iter().map(|a| sa.atom_coords(a)).collect();
        let cech = Echelon::new(
            0,
            cspan.iter().map(|v| Equation {
                coeffs: v.clone(),
                rhs: Scalar::zero(),
            }),
        );
        let mut ideal_fail = None;
        'outer: for c in &comp {
            for b in (0..sa.dim()).filter(|&b| src.left_domain()[b]) {
                let p = sa.mul(c, &sa.basis_elem(b))?;
                if !cech.spans(&sa.atom_coords(&p)) {
                    ideal_fail = Some(format!("{}·{} leaves the complement", sa.display(c), sa.basis()[b]));
                    break 'outer;
                }
            }
        }
        let all: Vec<SparseVec> = kj.atoms.iter().map(|a| sa.atom_coords(a)).collect();
        let mut joined = cspan.clone();
        joined.extend(ker.iter().map(|a| sa.atom_coords(a)));
        let direct = linear::rank(&joined) == cspan.len() + ker.len() && linear::same_span(&joined, &all);
        let ok = ideal_fail.is_none() && direct;
        let w = ideal_fail.or_else(|| (!direct).then(|| "complement and kernel do not split the algebra".to_string()));
        rep.push("(3) kernel complemented", side, ok, w);

        kernels.push(
            ker.iter()
                .map(|a| m.map_alg(a).map(|v| zc.atom_coords(&v)))
                .collect::<Result<Vec<_>>>()?,
        );
        kernel_names.push(ker.iter().map(|a| sa.display(a)).collect::<Vec<_>>());
        complements.push(comp.iter().map(|a| sa.display(a)).collect::<Vec<_>>());
    }
    let ok = linear::same_span(&kernels[0], &kernels[1]);
    let w = (!ok).then(|| "ψ_A(ker φ_X) and ω_B(ker φ_Y) differ".to_string());
    rep.push("(1) kernel images agree", "X,Y", ok, w);
    let complement_y = complements.pop().unwrap_or_default();
    let complement_x = complements.pop().unwrap_or_default();
    let kernel_y = kernel_names.pop().unwrap_or_default();
    let kernel_x = kernel_names.pop().unwrap_or_default();
    Ok(PullbackReport {
        report: rep,
        complement_x,
        complement_y,
        kernel_x,
        kernel_y,
    })
}

/// First coordinate `< dim` whose unit vector is outside the span.
fn first_outside(vs: &[SparseVec], dim: usize) -> Option<usize> {
    let ech = Echelon::new(
        0,
        vs.iter().map(|v| Equation {
            coeffs: v.clone(),
            rhs: Scalar::zero(),
        }),
    );
    (0..dim).find(|&k| !ech.spans(&[(k, Scalar::one())].into_iter().collect()))
}

#[cfg(test)]
mod tests {
    use super::super::tests::c2;
    use super::*;
    use crate::scalar::int;

    #[test]
    fn diagonal_sum_is_the_source() {
        let y = Arc::new(c2());
        let id = CorrMorphism::identity(y.clone());
        let s = restricted_direct_sum(&id, &id, &SumSpec::default()).unwrap();
        assert!(s.corr.validate().is_valid());
        assert_eq!(s.corr.dim(), 2);
        assert_eq!(s.corr.algebra().dim(), 1);
        assert_eq!(s.corr.generators(), &["(f1, f1)".to_string(), "(f2, f2)".to_string()]);
        assert!(s.to_x.check().unwrap().all_passed());
        let h = check_pullback_hypotheses(&id, &id).unwrap();
        assert!(h.report.all_passed(), "{}", h.report.text());
        assert_eq!(h.complement_x, vec!["1".to_string()]);
    }

    #[test]
    fn non_surjective_leg_is_reported() {
        let x = Arc::new(c2());
        let a = PresentedCommAlgebra::orthogonal(["1"]);
        let mut b = CorrBuilder::new(a.clone(), vec!["e".into()]).unwrap();
        b.right_to("e", "1", Some("e")).unwrap();
        b.left("1", "e", &[("e", int(1))]).unwrap();
        b.inner("e", "e", a.elem("1").unwrap()).unwrap();
        let line = Arc::new(b.build().unwrap());
        let emb = CorrMorphism::from_names(line, x.clone(), &[("e", vec![("f1", int(1))])], &[("1", vec![("1", int(1))])]).unwrap();
        let h = check_pullback_hypotheses(&emb, &CorrMorphism::identity(x)).unwrap();
        let s = h.report.check("(1) module map surjective");
        assert_eq!(s.failed, 1);
        assert!(s.first_failure.unwrap().contains("f2"));
    }
}
