//! Finitely presented C*-correspondences over atomic commutative algebras.
//!
//! A correspondence is given by four tables over named generators: the
//! right action of algebra basis elements, the inner product, and the left
//! action. Module arithmetic happens in a canonical basis of pairs
//! `(g, e)`, one family per algebra atom `e`, chosen so that the Gram matrix
//! of the family is nonsingular. Two combinations agree exactly when their
//! difference has zero norm.
//!
//! Truncated presentations may declare a left-action domain: the basis
//! elements whose left action stays inside the truncation.

pub mod compact;
pub mod covariant;
pub mod hilbert;
pub mod json;
pub mod morphism;
pub mod pullback;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};

use num::Zero;
use serde::Serialize;

use crate::algebra::linear::{self, add_scaled, Echelon, Equation, SparseVec};
use crate::algebra::{display_combo, AlgElement, PresentedCommAlgebra};
use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

pub use compact::*;
pub use json::{CorrespondenceJson, MorphismJson};
pub use covariant::*;
pub use morphism::*;
pub use pullback::*;

/// Linear combination of generators, keyed by generator index.
pub type GenCombo = SparseVec;

#[derive(Clone, Debug)]
pub struct PresentedCorrespondence {
    id: u64,
    algebra: PresentedCommAlgebra,
    generators: Vec<String>,
    gindex: HashMap<String, usize>,
    right: Vec<Vec<GenCombo>>,
    inner: Vec<Vec<AlgElement>>,
    left: Vec<Vec<GenCombo>>,
    left_domain: Vec<bool>,
    derived: Vec<Option<(usize, usize)>>,
    pairs: Vec<(usize, usize)>,
    reduce: Vec<Vec<Option<SparseVec>>>,
    gram: Vec<Vec<Vec<Scalar>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleElement {
    parent: u64,
    coords: SparseVec,
}

impl ModuleElement {
    pub fn parent(&self) -> u64 {
        self.parent
    }

    pub fn coords(&self) -> &SparseVec {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    fn check(&self, other: &ModuleElement) -> Result<()> {
        if self.parent != other.parent {
            return Err(Error::domain("module elements of different correspondences"));
        }
        Ok(())
    }

    pub fn add(&self, other: &ModuleElement) -> Result<ModuleElement> {
        self.check(other)?;
        let mut c = self.coords.clone();
        add_scaled(&mut c, &other.coords, &scalar::one());
        Ok(ModuleElement {
            parent: self.parent,
            coords: c,
        })
    }

    pub fn sub(&self, other: &ModuleElement) -> Result<ModuleElement> {
        self.add(&other.scale(&-scalar::one()))
    }

    pub fn scale(&self, f: &Scalar) -> ModuleElement {
        let mut c = SparseVec::new();
        add_scaled(&mut c, &self.coords, f);
        ModuleElement {
            parent: self.parent,
            coords: c,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum CorrViolation {
    Hermitian { g: String, h: String },
    RightCompatibility { g: String, h: String, b: String },
    LeftAdjoint { b: String, g: String, h: String },
    LeftMultiplicative { b: String, c: String, g: String },
    LeftRightCommute { b: String, c: String, g: String },
    LeftDomain { b: String, c: String },
    Positivity { atom: String },
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CorrReport {
    pub checked: usize,
    pub violations: Vec<CorrViolation>,
}

impl CorrReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub struct CorrBuilder {
    algebra: PresentedCommAlgebra,
    generators: Vec<String>,
    gindex: HashMap<String, usize>,
    right: BTreeMap<(usize, usize), GenCombo>,
    inner: BTreeMap<(usize, usize), AlgElement>,
    left: BTreeMap<(usize, usize), GenCombo>,
    left_domain: Option<Vec<bool>>,
    derived: Vec<Option<(usize, usize)>>,
}

impl CorrBuilder {
    pub fn new(algebra: PresentedCommAlgebra, generators: Vec<String>) -> Result<Self> {
        let mut gindex = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            if gindex.insert(g.clone(), i).is_some() {
                return Err(Error::invalid("correspondence", format!("duplicate generator {g}")));
            }
        }
        let n = generators.len();
        Ok(CorrBuilder {
            algebra,
            generators,
            gindex,
            right: BTreeMap::new(),
            inner: BTreeMap::new(),
            left: BTreeMap::new(),
            left_domain: None,
            derived: vec![None; n],
        })
    }

    pub fn algebra(&self) -> &PresentedCommAlgebra {
        &self.algebra
    }

    pub fn gen(&self, name: &str) -> Result<usize> {
        self.gindex
            .get(name)
            .copied()
            .ok_or_else(|| Error::invalid("correspondence", format!("unknown generator {name}")))
    }

    pub fn basis(&self, name: &str) -> Result<usize> {
        self.algebra
            .index_of(name)
            .ok_or_else(|| Error::invalid("correspondence", format!("unknown basis symbol {name}")))
    }

    fn combo(&self, out: &[(&str, Scalar)]) -> Result<GenCombo> {
        let mut v = GenCombo::new();
        for (h, c) in out {
            add_scaled(&mut v, &unit(self.gen(h)?), c);
        }
        Ok(v)
    }

    /// `g · b = out`.
    pub fn right(&mut self, g: &str, b: &str, out: &[(&str, Scalar)]) -> Result<&mut Self> {
        let key = (self.gen(g)?, self.basis(b)?);
        let v = self.combo(out)?;
        self.right.insert(key, v);
        Ok(self)
    }

    /// `g · b = h`, or zero.
    pub fn right_to(&mut self, g: &str, b: &str, h: Option<&str>) -> Result<&mut Self> {
        match h {
            Some(h) => self.right(g, b, &[(h, scalar::one())]),
            None => self.right(g, b, &[]),
        }
    }

    pub fn right_idx(&mut self, g: usize, b: usize, out: GenCombo) -> &mut Self {
        self.right.insert((g, b), out);
        self
    }

    /// `⟨g, h⟩ = value`; the mirrored entry defaults to the adjoint.
    pub fn inner(&mut self, g: &str, h: &str, value: AlgElement) -> Result<&mut Self> {
        let key = (self.gen(g)?, self.gen(h)?);
        if value.parent() != self.algebra.id() {
            return Err(Error::invalid("correspondence", "inner product outside the coefficient algebra"));
        }
        self.inner.insert(key, value);
        Ok(self)
    }

    pub fn inner_idx(&mut self, g: usize, h: usize, value: AlgElement) -> &mut Self {
        self.inner.insert((g, h), value);
        self
    }

    /// `φ(b) g = out`.
    pub fn left(&mut self, b: &str, g: &str, out: &[(&str, Scalar)]) -> Result<&mut Self> {
        let key = (self.basis(b)?, self.gen(g)?);
        let v = self.combo(out)?;
        self.left.insert(key, v);
        Ok(self)
    }

    pub fn left_idx(&mut self, b: usize, g: usize, out: GenCombo) -> &mut Self {
        self.left.insert((b, g), out);
        self
    }

    /// Restricts the left action to the listed basis elements.
    pub fn left_domain(&mut self, names: &[&str]) -> Result<&mut Self> {
        let mut d = vec![false; self.algebra.dim()];
        for n in names {
            d[self.basis(n)?] = true;
        }
        self.left_domain = Some(d);
        Ok(self)
    }

    pub fn left_domain_idx(&mut self, d: Vec<bool>) -> &mut Self {
        self.left_domain = Some(d);
        self
    }

    /// Records that generator `g` equals `parent · b`.
    pub fn derived(&mut self, g: usize, parent: usize, b: usize) -> &mut Self {
        self.derived[g] = Some((parent, b));
        self
    }

    pub fn build(self) -> Result<PresentedCorrespondence> {
        let n = self.generators.len();
        let m = self.algebra.dim();
        let zero = self.algebra.zero();
        let mut right = vec![vec![GenCombo::new(); m]; n];
        for ((g, b), v) in &self.right {
            right[*g][*b] = v.clone();
        }
        let mut inner = vec![vec![zero.clone(); n]; n];
        for g in 0..n {
            for h in 0..n {
                inner[g][h] = match (self.inner.get(&(g, h)), self.inner.get(&(h, g))) {
                    (Some(v), _) => v.clone(),
                    (None, Some(v)) => v.star(),
                    (None, None) => zero.clone(),
                };
            }
        }
        let mut left = vec![vec![GenCombo::new(); n]; m];
        for ((b, g), v) in &self.left {
            left[*b][*g] = v.clone();
        }
        let left_domain = self.left_domain.unwrap_or_else(|| vec![true; m]);
        let mut c = PresentedCorrespondence {
            id: 0,
            algebra: self.algebra,
            generators: self.generators,
            gindex: self.gindex,
            right,
            inner,
            left,
            left_domain,
            derived: self.derived,
            pairs: vec![],
            reduce: vec![],
            gram: vec![],
        };
        c.canonical_basis()?;
        let mut h = std::collections::hash_map::DefaultHasher::new();
        c.algebra.id().hash(&mut h);
        c.generators.hash(&mut h);
        for row in &c.right {
            for v in row {
                hash_vec(v, &mut h);
            }
        }
        for row in &c.inner {
            for v in row {
                hash_vec(v.coeffs(), &mut h);
            }
        }
        for row in &c.left {
            for v in row {
                hash_vec(v, &mut h);
            }
        }
        c.left_domain.hash(&mut h);
        c.id = h.finish();
        Ok(c)
    }
}

fn hash_vec(v: &SparseVec, h: &mut impl Hasher) {
    for (k, c) in v {
        k.hash(h);
        c.hash(h);
    }
    usize::MAX.hash(h);
}

fn unit(i: usize) -> SparseVec {
    let mut v = SparseVec::new();
    v.insert(i, scalar::one());
    v
}

impl PresentedCorrespondence {
    fn canonical_basis(&mut self) -> Result<()> {
        let n = self.generators.len();
        let atoms = self.algebra.atoms();
        self.reduce = vec![vec![None; n]; atoms];
        self.gram = Vec::with_capacity(atoms);
        for e in 0..atoms {
            let g: Vec<Vec<Scalar>> = (0..n)
                .map(|i| (0..n).map(|j| self.algebra.character(e, &self.inner[i][j])).collect())
                .collect();
            let column = |j: usize| -> SparseVec {
                (0..n)
                    .filter(|&r| !g[r][j].is_zero())
                    .map(|r| (r, g[r][j].clone()))
                    .collect()
            };
            let mut ech = Echelon::new(n, std::iter::empty());
            let mut pivots: Vec<usize> = vec![];
            for j in 0..n {
                let col = column(j);
                if col.is_empty() {
                    continue;
                }
                let before = ech.rank();
                ech.insert(Equation {
                    coeffs: col,
                    rhs: Scalar::zero(),
                });
                if ech.rank() > before {
                    pivots.push(j);
                }
            }
            let first = self.pairs.len();
            self.pairs.extend(pivots.iter().map(|&p| (p, e)));
            for j in 0..n {
                let col = column(j);
                if col.is_empty() {
                    continue;
                }
                if let Some(k) = pivots.iter().position(|&p| p == j) {
                    self.reduce[e][j] = Some(unit(first + k));
                    continue;
                }
                let eqs: Vec<Equation> = (0..n)
                    .map(|r| Equation {
                        coeffs: pivots
                            .iter()
                            .enumerate()
                            .filter(|(_, &p)| !g[r][p].is_zero())
                            .map(|(k, &p)| (k, g[r][p].clone()))
                            .collect(),
                        rhs: g[r][j].clone(),
                    })
                    .collect();
                let d = linear::solve(pivots.len(), &eqs).ok_or_else(|| {
                    Error::invalid(
                        "correspondence",
                        format!("generator {} has no coordinates over atom {}", self.generators[j], self.algebra.atom_label(e)),
                    )
                })?;
                self.reduce[e][j] = Some(
                    d.into_iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(k, c)| (first + k, c))
                        .collect(),
                );
            }
            self.gram.push(g);
        }
        Ok(())
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn algebra(&self) -> &PresentedCommAlgebra {
        &self.algebra
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn gen_index(&self, name: &str) -> Result<usize> {
        self.gindex
            .get(name)
            .copied()
            .ok_or_else(|| Error::domain(format!("unknown generator {name}")))
    }

    /// Dimension of the canonical basis.
    pub fn dim(&self) -> usize {
        self.pairs.len()
    }

    /// Canonical basis pairs `(generator, atom)`.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// How a generator arose, when it was added as `parent · b`.
    pub fn derivation(&self, g: usize) -> Option<(usize, usize)> {
        self.derived[g]
    }

    pub fn right_table(&self, g: usize, b: usize) -> &GenCombo {
        &self.right[g][b]
    }

    pub fn inner_table(&self, g: usize, h: usize) -> &AlgElement {
        &self.inner[g][h]
    }

    pub fn left_table(&self, b: usize, g: usize) -> &GenCombo {
        &self.left[b][g]
    }

    pub fn left_domain(&self) -> &[bool] {
        &self.left_domain
    }

    pub fn zero(&self) -> ModuleElement {
        ModuleElement {
            parent: self.id,
            coords: SparseVec::new(),
        }
    }

    pub fn basis_elem(&self, k: usize) -> ModuleElement {
        ModuleElement {
            parent: self.id,
            coords: unit(k),
        }
    }

    /// The component `g · e` of generator `g` over atom `e`.
    pub fn pair(&self, g: usize, e: usize) -> ModuleElement {
        ModuleElement {
            parent: self.id,
            coords: self.reduce[e][g].clone().unwrap_or_default(),
        }
    }

    pub fn gen(&self, g: usize) -> ModuleElement {
        let mut c = SparseVec::new();
        for e in 0..self.algebra.atoms() {
            if let Some(v) = &self.reduce[e][g] {
                add_scaled(&mut c, v, &scalar::one());
            }
        }
        ModuleElement {
            parent: self.id,
            coords: c,
        }
    }

    pub fn elem(&self, name: &str) -> Result<ModuleElement> {
        Ok(self.gen(self.gen_index(name)?))
    }

    pub fn from_gens(&self, combo: &GenCombo) -> ModuleElement {
        let mut c = SparseVec::new();
        for (g, f) in combo {
            add_scaled(&mut c, &self.gen(*g).coords, f);
        }
        ModuleElement {
            parent: self.id,
            coords: c,
        }
    }

    pub fn combo(&self, terms: &[(&str, Scalar)]) -> Result<ModuleElement> {
        let mut v = GenCombo::new();
        for (g, c) in terms {
            add_scaled(&mut v, &unit(self.gen_index(g)?), c);
        }
        Ok(self.from_gens(&v))
    }

    fn check(&self, x: &ModuleElement) -> Result<()> {
        if x.parent != self.id {
            return Err(Error::domain("module element of a different correspondence"));
        }
        Ok(())
    }

    fn check_alg(&self, a: &AlgElement) -> Result<()> {
        if a.parent() != self.algebra.id() {
            return Err(Error::domain("algebra element outside the coefficient algebra"));
        }
        Ok(())
    }

    pub fn right_act(&self, x: &ModuleElement, a: &AlgElement) -> Result<ModuleElement> {
        self.check(x)?;
        self.check_alg(a)?;
        let chars: Vec<Scalar> = (0..self.algebra.atoms()).map(|e| self.algebra.character(e, a)).collect();
        let coords = x
            .coords
            .iter()
            .map(|(k, c)| (*k, c * &chars[self.pairs[*k].1]))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Ok(ModuleElement {
            parent: self.id,
            coords,
        })
    }

    pub fn inner(&self, x: &ModuleElement, y: &ModuleElement) -> Result<AlgElement> {
        self.check(x)?;
        self.check(y)?;
        let mut atoms = SparseVec::new();
        for (k, a) in &x.coords {
            let (g, e) = self.pairs[*k];
            for (l, b) in &y.coords {
                let (h, f) = self.pairs[*l];
                if e != f {
                    continue;
                }
                let v = scalar::conj(a) * b * &self.gram[e][g][h];
                add_scaled(&mut atoms, &unit(e), &v);
            }
        }
        Ok(self.algebra.from_atom_coords(&atoms))
    }

    pub fn in_left_domain(&self, a: &AlgElement) -> bool {
        a.coeffs().keys().all(|b| self.left_domain[*b])
    }

    pub fn left_act(&self, a: &AlgElement, x: &ModuleElement) -> Result<ModuleElement> {
        self.check(x)?;
        self.check_alg(a)?;
        if !self.in_left_domain(a) {
            return Err(Error::Horizon(format!(
                "left action of {} leaves the truncated module",
                self.algebra.display(a)
            )));
        }
        let mut out = SparseVec::new();
        for (k, c) in &x.coords {
            let (g, e) = self.pairs[*k];
            for (b, ab) in a.coeffs() {
                for (h, f) in &self.left[*b][g] {
                    if let Some(v) = &self.reduce[e][*h] {
                        add_scaled(&mut out, v, &(c * ab * f));
                    }
                }
            }
        }
        Ok(ModuleElement {
            parent: self.id,
            coords: out,
        })
    }

    /// Atoms of the subalgebra on which the left action is defined.
    pub fn domain_atoms(&self) -> Vec<AlgElement> {
        let dom: Vec<usize> = (0..self.algebra.dim()).filter(|&b| self.left_domain[b]).collect();
        let mut groups: BTreeMap<Vec<Scalar>, SparseVec> = BTreeMap::new();
        let mut order = vec![];
        for e in 0..self.algebra.atoms() {
            let sig: Vec<Scalar> = dom
                .iter()
                .map(|&b| self.algebra.character(e, &self.algebra.basis_elem(b)))
                .collect();
            if sig.iter().all(Zero::is_zero) {
                continue;
            }
            if !groups.contains_key(&sig) {
                order.push(sig.clone());
            }
            add_scaled(groups.entry(sig).or_default(), &unit(e), &scalar::one());
        }
        order
            .iter()
            .map(|s| self.algebra.from_atom_coords(&groups[s]))
            .collect()
    }

    /// Name of a canonical basis element: the generator, qualified by the
    /// atom when the generator spreads over several atoms.
    pub fn pair_name(&self, k: usize) -> String {
        let (g, e) = self.pairs[k];
        let spread = (0..self.algebra.atoms()).filter(|&f| self.reduce[f][g].is_some()).count();
        if spread <= 1 {
            self.generators[g].clone()
        } else {
            format!("{}·({})", self.generators[g], self.algebra.atom_label(e))
        }
    }

    /// Writes `x` over generators when possible, else over canonical pairs.
    pub fn display(&self, x: &ModuleElement) -> String {
        if let Some(v) = self.as_gen_combo(x) {
            return display_combo(v.iter().map(|(g, c)| (self.generators[*g].as_str(), c)));
        }
        display_combo(x.coords.iter().map(|(k, c)| (self.pair_name(*k), c)))
    }

    /// Expresses `x` as a combination of generators, if it is one.
    pub fn as_gen_combo(&self, x: &ModuleElement) -> Option<GenCombo> {
        let n = self.generators.len();
        let gens: Vec<ModuleElement> = (0..n).map(|g| self.gen(g)).collect();
        let mut per_coord: BTreeMap<usize, Equation> = BTreeMap::new();
        for (g, v) in gens.iter().enumerate() {
            for (k, c) in &v.coords {
                per_coord.entry(*k).or_default().coeffs.insert(g, c.clone());
            }
        }
        for (k, c) in &x.coords {
            per_coord.entry(*k).or_default().rhs = c.clone();
        }
        let eqs: Vec<Equation> = per_coord.into_values().collect();
        let sol = linear::solve(n, &eqs)?;
        Some(
            sol.into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        )
    }

    fn table_inner(&self, x: &GenCombo, y: &GenCombo) -> AlgElement {
        let mut out = self.algebra.zero();
        for (g, a) in x {
            for (h, b) in y {
                let f = scalar::conj(a) * b;
                out = out.add(&self.inner[*g][*h].scale(&f)).expect("same algebra");
            }
        }
        out
    }

    fn table_left(&self, a: &AlgElement, x: &GenCombo) -> GenCombo {
        let mut out = GenCombo::new();
        for (b, ab) in a.coeffs() {
            for (g, c) in x {
                add_scaled(&mut out, &self.left[*b][*g], &(ab * c));
            }
        }
        out
    }

    fn table_right(&self, x: &GenCombo, a: &AlgElement) -> GenCombo {
        let mut out = GenCombo::new();
        for (g, c) in x {
            for (b, ab) in a.coeffs() {
                add_scaled(&mut out, &self.right[*g][*b], &(ab * c));
            }
        }
        out
    }

    /// Checks the table axioms and per-atom positivity of the Gram matrix.
    pub fn validate(&self) -> CorrReport {
        let n = self.generators.len();
        let m = self.algebra.dim();
        let gname = |g: usize| self.generators[g].clone();
        let bname = |b: usize| self.algebra.basis()[b].clone();
        let mut rep = CorrReport::default();
        let unit_g = |g: usize| unit(g);
        for g in 0..n {
            for h in g..n {
                rep.checked += 1;
                if self.inner[g][h] != self.inner[h][g].star() {
                    rep.violations.push(CorrViolation::Hermitian { g: gname(g), h: gname(h) });
                }
            }
        }
        for g in 0..n {
            for h in 0..n {
                for b in 0..m {
                    rep.checked += 1;
                    let lhs = self.table_inner(&unit_g(g), &self.right[h][b]);
                    let rhs = self
                        .algebra
                        .mul(&self.inner[g][h], &self.algebra.basis_elem(b))
                        .expect("same algebra");
                    if lhs != rhs {
                        rep.violations.push(CorrViolation::RightCompatibility {
                            g: gname(g),
                            h: gname(h),
                            b: bname(b),
                        });
                    }
                }
            }
        }
        let dom: Vec<usize> = (0..m).filter(|&b| self.left_domain[b]).collect();
        for &b in &dom {
            for g in 0..n {
                for h in 0..n {
                    rep.checked += 1;
                    let lhs = self.table_inner(&self.left[b][g], &unit_g(h));
                    let rhs = self.table_inner(&unit_g(g), &self.left[b][h]);
                    if lhs != rhs {
                        rep.violations.push(CorrViolation::LeftAdjoint {
                            b: bname(b),
                            g: gname(g),
                            h: gname(h),
                        });
                    }
                }
            }
        }
        for &b in &dom {
            for &c in &dom {
                let bc = self
                    .algebra
                    .mul(&self.algebra.basis_elem(b), &self.algebra.basis_elem(c))
                    .expect("same algebra");
                if !self.in_left_domain(&bc) {
                    rep.violations.push(CorrViolation::LeftDomain { b: bname(b), c: bname(c) });
                    continue;
                }
                for g in 0..n {
                    rep.checked += 1;
                    let lhs = self.from_gens(&self.table_left(&self.algebra.basis_elem(b), &self.left[c][g]));
                    let rhs = self.from_gens(&self.table_left(&bc, &unit_g(g)));
                    if lhs != rhs {
                        rep.violations.push(CorrViolation::LeftMultiplicative {
                            b: bname(b),
                            c: bname(c),
                            g: gname(g),
                        });
                    }
                }
            }
            for c in 0..m {
                for g in 0..n {
                    rep.checked += 1;
                    let cb = self.algebra.basis_elem(c);
                    let lhs = self.from_gens(&self.table_left(&self.algebra.basis_elem(b), &self.right[g][c]));
                    let rhs = self.from_gens(&self.table_right(&self.left[b][g], &cb));
                    if lhs != rhs {
                        rep.violations.push(CorrViolation::LeftRightCommute {
                            b: bname(b),
                            c: bname(c),
                            g: gname(g),
                        });
                    }
                }
            }
        }
        for (e, g) in self.gram.iter().enumerate() {
            rep.checked += 1;
            if !linear::is_positive_semidefinite(g) {
                rep.violations.push(CorrViolation::Positivity {
                    atom: self.algebra.atom_label(e),
                });
            }
        }
        rep
    }

    /// Generators whose image under `x ↦ φ(a)x` is nonzero, together with
    /// the generators carrying the results.
    pub(crate) fn left_support(&self, a: &AlgElement) -> Result<BTreeSet<usize>> {
        let mut s = BTreeSet::new();
        for g in 0..self.generators.len() {
            let img = self.left_act(a, &self.gen(g))?;
            if !img.is_zero() {
                s.insert(g);
                s.extend(img.coords.keys().map(|k| self.pairs[*k].0));
            }
        }
        Ok(s)
    }
}

impl fmt::Display for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&display_combo(self.coords.iter().map(|(k, c)| (format!("x{k}"), c))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    /// Hilbert space C^2 over A = C with orthonormal f1, f2.
    pub(crate) fn c2() -> PresentedCorrespondence {
        let a = PresentedCommAlgebra::orthogonal(["1"]);
        let mut b = CorrBuilder::new(a.clone(), vec!["f1".into(), "f2".into()]).unwrap();
        let one = a.elem("1").unwrap();
        for g in ["f1", "f2"] {
            b.right_to(g, "1", Some(g)).unwrap();
            b.left("1", g, &[(g, int(1))]).unwrap();
            b.inner(g, g, one.clone()).unwrap();
        }
        b.build().unwrap()
    }

    #[test]
    fn hilbert_space_tables() {
        let c = c2();
        assert!(c.validate().is_valid());
        assert_eq!(c.dim(), 2);
        let f1 = c.elem("f1").unwrap();
        let f2 = c.elem("f2").unwrap();
        assert!(c.inner(&f1, &f2).unwrap().is_zero());
        let s = f1.add(&f2).unwrap();
        assert_eq!(c.inner(&s, &s).unwrap(), c.algebra().elem("1").unwrap().scale(&int(2)));
        assert_eq!(c.display(&s), "f1 + f2");
    }

    #[test]
    fn null_vectors_vanish() {
        // A third generator equal to f1 + f2 is identified through the Gram matrix.
        let a = PresentedCommAlgebra::orthogonal(["1"]);
        let one = a.elem("1").unwrap();
        let mut b = CorrBuilder::new(a.clone(), vec!["f1".into(), "f2".into(), "s".into()]).unwrap();
        for g in ["f1", "f2", "s"] {
            b.right_to(g, "1", Some(g)).unwrap();
            b.left("1", g, &[(g, int(1))]).unwrap();
        }
        b.inner("f1", "f1", one.clone()).unwrap();
        b.inner("f2", "f2", one.clone()).unwrap();
        b.inner("s", "s", one.scale(&int(2))).unwrap();
        b.inner("f1", "s", one.clone()).unwrap();
        b.inner("f2", "s", one.clone()).unwrap();
        let c = b.build().unwrap();
        assert!(c.validate().is_valid());
        assert_eq!(c.dim(), 2);
        let lhs = c.elem("s").unwrap();
        let rhs = c.combo(&[("f1", int(1)), ("f2", int(1))]).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn asymmetric_inner_product_is_reported() {
        let a = PresentedCommAlgebra::orthogonal(["p", "q"]);
        let mut b = CorrBuilder::new(a.clone(), vec!["g".into(), "h".into()]).unwrap();
        b.inner("g", "h", a.elem("p").unwrap()).unwrap();
        b.inner("h", "g", a.elem("q").unwrap()).unwrap();
        let c = b.build().unwrap();
        let rep = c.validate();
        assert!(rep
            .violations
            .contains(&CorrViolation::Hermitian { g: "g".into(), h: "h".into() }));
    }
}
