//! Presented commutative algebras spanned by idempotents.
//!
//! An algebra is a finite list of idempotent basis symbols plus a symbolic
//! multiplication table. Construction validates the table eagerly and
//! computes the minimal orthogonal idempotents ("atoms") spanning the same
//! space, which most downstream computations work with.

pub mod engine;
pub mod linear;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};
pub use engine::StarEngine;
pub use linear::{Equation, SparseVec};

#[derive(Clone, Debug)]
pub struct PresentedCommAlgebra {
    id: u64,
    basis: Vec<String>,
    index: HashMap<String, usize>,
    table: Vec<Vec<SparseVec>>,
    unit: Option<SparseVec>,
    atoms: Vec<SparseVec>,
    /// `below[e][b]` holds when atom `e` is under basis element `b`.
    below: Vec<Vec<bool>>,
}

/// Finitely supported combination of basis symbols of one algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgElement {
    parent: u64,
    coeffs: BTreeMap<usize, Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum AlgViolation {
    Symmetry { l: String, r: String },
    Associativity { a: String, b: String, c: String },
    Idempotency { b: String },
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct AlgReport {
    pub violations: Vec<AlgViolation>,
}

impl AlgReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn mul_vec(table: &[Vec<SparseVec>], x: &SparseVec, y: &SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    for (i, a) in x {
        for (j, b) in y {
            let f = a * b;
            linear::add_scaled(&mut out, &table[*i][*j], &f);
        }
    }
    out
}

fn unit_vec(i: usize) -> SparseVec {
    let mut v = SparseVec::new();
    v.insert(i, Scalar::one());
    v
}

fn sub_vec(x: &SparseVec, y: &SparseVec) -> SparseVec {
    let mut out = x.clone();
    linear::add_scaled(&mut out, y, &(-Scalar::one()));
    out
}

/// Checks symmetry, associativity and idempotency on the raw table.
pub fn validate_table(basis: &[String], table: &[Vec<SparseVec>]) -> AlgReport {
    let m = basis.len();
    let mut violations = Vec::new();
    for i in 0..m {
        if table[i][i] != unit_vec(i) {
            violations.push(AlgViolation::Idempotency {
                b: basis[i].clone(),
            });
        }
        for j in (i + 1)..m {
            if table[i][j] != table[j][i] {
                violations.push(AlgViolation::Symmetry {
                    l: basis[i].clone(),
                    r: basis[j].clone(),
                });
            }
        }
    }
    for i in 0..m {
        for j in 0..m {
            let ij = &table[i][j];
            for k in 0..m {
                let left = mul_vec(table, ij, &unit_vec(k));
                let right = mul_vec(table, &unit_vec(i), &table[j][k]);
                if left != right {
                    violations.push(AlgViolation::Associativity {
                        a: basis[i].clone(),
                        b: basis[j].clone(),
                        c: basis[k].clone(),
                    });
                }
            }
        }
    }
    AlgReport { violations }
}

fn compute_atoms(table: &[Vec<SparseVec>], m: usize) -> Result<Vec<SparseVec>> {
    let mut atoms: Vec<SparseVec> = Vec::new();
    for b in 0..m {
        let bv = unit_vec(b);
        let mut next = Vec::with_capacity(atoms.len() + 1);
        let mut rest = bv.clone();
        for e in &atoms {
            let eb = mul_vec(table, e, &bv);
            let off = sub_vec(e, &eb);
            rest = sub_vec(&rest, &eb);
            if !eb.is_empty() {
                next.push(eb);
            }
            if !off.is_empty() {
                next.push(off);
            }
        }
        if !rest.is_empty() {
            next.push(rest);
        }
        atoms = next;
    }
    for (i, e) in atoms.iter().enumerate() {
        if mul_vec(table, e, e) != *e {
            return Err(Error::Unsupported(
                "algebra is not spanned by orthogonal idempotents".into(),
            ));
        }
        for f in atoms.iter().skip(i + 1) {
            if !mul_vec(table, e, f).is_empty() {
                return Err(Error::Unsupported(
                    "algebra is not spanned by orthogonal idempotents".into(),
                ));
            }
        }
    }
    Ok(atoms)
}

impl PresentedCommAlgebra {
    /// Builds and validates an algebra. `mult` lists products of basis
    /// pairs; a pair given in one order only is mirrored, and absent pairs
    /// multiply to zero. Diagonal entries default to idempotency.
    pub fn new(
        basis: Vec<String>,
        mult: Vec<(String, String, Vec<(String, Scalar)>)>,
    ) -> Result<Self> {
        let m = basis.len();
        let mut index = HashMap::new();
        for (i, b) in basis.iter().enumerate() {
            if index.insert(b.clone(), i).is_some() {
                return Err(Error::invalid("algebra", format!("duplicate basis symbol {b}")));
            }
        }
        let lookup = |s: &str| -> Result<usize> {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::invalid("algebra", format!("unknown basis symbol {s}")))
        };
        let mut given: HashMap<(usize, usize), SparseVec> = HashMap::new();
        for (l, r, out) in mult {
            let (i, j) = (lookup(&l)?, lookup(&r)?);
            let mut v = SparseVec::new();
            for (s, c) in out {
                let k = lookup(&s)?;
                let e = v.entry(k).or_insert_with(Scalar::zero);
                *e += c;
                if e.is_zero() {
                    v.remove(&k);
                }
            }
            given.insert((i, j), v);
        }
        let mut table = vec![vec![SparseVec::new(); m]; m];
        for i in 0..m {
            for j in 0..m {
                table[i][j] = match (given.get(&(i, j)), given.get(&(j, i))) {
                    (Some(v), _) => v.clone(),
                    (None, Some(v)) => v.clone(),
                    (None, None) if i == j => unit_vec(i),
                    (None, None) => SparseVec::new(),
                };
            }
        }
        let report = validate_table(&basis, &table);
        if let Some(v) = report.violations.first() {
            return Err(Error::invalid(
                "algebra",
                serde_json::to_string(v).unwrap_or_default(),
            ));
        }
        let atoms = compute_atoms(&table, m)?;
        let below = atoms
            .iter()
            .map(|e| (0..m).map(|b| mul_vec(&table, e, &unit_vec(b)) == *e).collect())
            .collect();
        let mut h = std::collections::hash_map::DefaultHasher::new();
        basis.hash(&mut h);
        for row in &table {
            for v in row {
                for (k, c) in v {
                    k.hash(&mut h);
                    c.hash(&mut h);
                }
                usize::MAX.hash(&mut h);
            }
        }
        Ok(PresentedCommAlgebra {
            id: h.finish(),
            basis,
            index,
            table,
            unit: None,
            atoms,
            below,
        })
    }

    /// Algebra with pairwise orthogonal idempotent basis.
    pub fn orthogonal<S: Into<String>>(basis: impl IntoIterator<Item = S>) -> Self {
        Self::new(basis.into_iter().map(Into::into).collect(), vec![])
            .expect("orthogonal projections always form a valid table")
    }

    pub fn with_unit(mut self, unit: AlgElement) -> Self {
        self.unit = Some(unit.coeffs);
        self
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, sym: &str) -> Option<usize> {
        self.index.get(sym).copied()
    }

    pub fn unit(&self) -> Option<AlgElement> {
        self.unit.as_ref().map(|c| self.from_coeffs(c.clone()))
    }

    pub fn zero(&self) -> AlgElement {
        self.from_coeffs(SparseVec::new())
    }

    pub fn from_coeffs(&self, coeffs: SparseVec) -> AlgElement {
        AlgElement {
            parent: self.id,
            coeffs: coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn basis_elem(&self, i: usize) -> AlgElement {
        self.from_coeffs(unit_vec(i))
    }

    /// The basis element named `sym`.
    pub fn elem(&self, sym: &str) -> Result<AlgElement> {
        let i = self
            .index_of(sym)
            .ok_or_else(|| Error::domain(format!("unknown basis symbol {sym}")))?;
        Ok(self.basis_elem(i))
    }

    pub fn combo<'a>(&self, terms: impl IntoIterator<Item = (&'a str, Scalar)>) -> Result<AlgElement> {
        let mut out = self.zero();
        for (s, c) in terms {
            out = out.add(&self.elem(s)?.scale(&c))?;
        }
        Ok(out)
    }

    fn check(&self, x: &AlgElement) -> Result<()> {
        if x.parent != self.id {
            return Err(Error::domain("element belongs to a different algebra"));
        }
        Ok(())
    }

    /// Product by bilinear extension of the table.
    pub fn mul(&self, x: &AlgElement, y: &AlgElement) -> Result<AlgElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.from_coeffs(mul_vec(&self.table, &x.coeffs, &y.coeffs)))
    }

    pub fn report(&self) -> AlgReport {
        validate_table(&self.basis, &self.table)
    }

    pub fn atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom(&self, e: usize) -> AlgElement {
        self.from_coeffs(self.atoms[e].clone())
    }

    /// Whether atom `e` sits under basis element `b`.
    pub fn atom_below(&self, e: usize, b: usize) -> bool {
        self.below[e][b]
    }

    /// Coefficient of atom `e` in `x`; the character attached to `e`.
    pub fn character(&self, e: usize, x: &AlgElement) -> Scalar {
        let mut s = Scalar::zero();
        for (b, c) in &x.coeffs {
            if self.below[e][*b] {
                s += c;
            }
        }
        s
    }

    /// Coordinates of `x` in the atom basis.
    pub fn atom_coords(&self, x: &AlgElement) -> SparseVec {
        (0..self.atoms.len())
            .map(|e| (e, self.character(e, x)))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    pub fn from_atom_coords(&self, coords: &SparseVec) -> AlgElement {
        let mut v = SparseVec::new();
        for (e, c) in coords {
            linear::add_scaled(&mut v, &self.atoms[*e], c);
        }
        self.from_coeffs(v)
    }

    /// Display name for an atom, written in basis symbols.
    pub fn atom_label(&self, e: usize) -> String {
        self.display(&self.atom(e))
    }

    pub fn display(&self, x: &AlgElement) -> String {
        display_combo(x.coeffs.iter().map(|(k, c)| (self.basis[*k].as_str(), c)))
    }

    pub fn to_json(&self) -> AlgebraJson {
        let mut mult = Vec::new();
        for i in 0..self.dim() {
            for j in i..self.dim() {
                let v = &self.table[i][j];
                if i == j && *v == unit_vec(i) {
                    continue;
                }
                if v.is_empty() {
                    continue;
                }
                mult.push(MultEntry {
                    l: self.basis[i].clone(),
                    r: self.basis[j].clone(),
                    out: v
                        .iter()
                        .map(|(k, c)| (self.basis[*k].clone(), scalar::format(c)))
                        .collect(),
                });
            }
        }
        AlgebraJson {
            basis: self.basis.clone(),
            mult,
            unit: self.unit.as_ref().map(|u| {
                u.iter()
                    .map(|(k, c)| (self.basis[*k].clone(), scalar::format(c)))
                    .collect()
            }),
        }
    }

    pub fn from_json(doc: &AlgebraJson) -> Result<Self> {
        let mut mult = Vec::new();
        for e in &doc.mult {
            let out = e
                .out
                .iter()
                .map(|(s, c)| Ok((s.clone(), scalar::parse(c)?)))
                .collect::<Result<Vec<_>>>()?;
            mult.push((e.l.clone(), e.r.clone(), out));
        }
        let alg = Self::new(doc.basis.clone(), mult)?;
        match &doc.unit {
            None => Ok(alg),
            Some(u) => {
                let terms = u
                    .iter()
                    .map(|(s, c)| Ok((s.as_str(), scalar::parse(c)?)))
                    .collect::<Result<Vec<_>>>()?;
                let unit = alg.combo(terms)?;
                Ok(alg.with_unit(unit))
            }
        }
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let doc: AlgebraJson = serde_json::from_str(text)?;
        Self::from_json(&doc)
    }
}

pub(crate) fn display_combo<'a, N: AsRef<str>>(
    terms: impl Iterator<Item = (N, &'a Scalar)>,
) -> String {
    let mut s = String::new();
    for (name, c) in terms {
        let neg = c < &Scalar::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if !mag.is_one() {
            s.push_str(&scalar::format(&mag));
            s.push(' ');
        }
        s.push_str(name.as_ref());
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

impl AlgElement {
    pub fn parent(&self) -> u64 {
        self.parent
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, Scalar> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &AlgElement) -> Result<AlgElement> {
        if self.parent != other.parent {
            return Err(Error::domain("element belongs to a different algebra"));
        }
        let mut c = self.coeffs.clone();
        linear::add_scaled(&mut c, &other.coeffs, &Scalar::one());
        Ok(AlgElement {
            parent: self.parent,
            coeffs: c,
        })
    }

    pub fn sub(&self, other: &AlgElement) -> Result<AlgElement> {
        self.add(&other.scale(&(-Scalar::one())))
    }

    pub fn scale(&self, f: &Scalar) -> AlgElement {
        AlgElement {
            parent: self.parent,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, c)| (*k, c * f))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Involution: fixes basis symbols, conjugates coefficients.
    pub fn star(&self) -> AlgElement {
        AlgElement {
            parent: self.parent,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, c)| (*k, scalar::conj(c)))
                .collect(),
        }
    }
}

impl fmt::Display for AlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = display_combo(self.coeffs.iter().map(|(k, c)| (format!("b{k}"), c)));
        f.write_str(&s)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MultEntry {
    pub l: String,
    pub r: String,
    pub out: Vec<(String, String)>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AlgebraJson {
    pub basis: Vec<String>,
    #[serde(default)]
    pub mult: Vec<MultEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<(String, String)>>,
}

/// `sum_k x_k * terms_k = rhs` with unknown scalars `x_k`.
#[derive(Clone, Debug)]
pub struct LinearConstraint {
    pub terms: Vec<(usize, AlgElement)>,
    pub rhs: AlgElement,
}

/// Returns one exact solution of the constraint system, verified by
/// substitution, or `None` if it is inconsistent.
pub fn solve_linear(
    alg: &PresentedCommAlgebra,
    unknowns: usize,
    constraints: &[LinearConstraint],
) -> Option<Vec<Scalar>> {
    let mut eqs = Vec::new();
    for con in constraints {
        let mut per_coord: BTreeMap<usize, Equation> = BTreeMap::new();
        for (x, e) in &con.terms {
            for (b, c) in e.coeffs() {
                let eq = per_coord.entry(*b).or_default();
                let v = eq.coeffs.entry(*x).or_insert_with(Scalar::zero);
                *v += c;
            }
        }
        for (b, c) in con.rhs.coeffs() {
            per_coord.entry(*b).or_default().rhs = c.clone();
        }
        eqs.extend(per_coord.into_values().map(|mut eq| {
            eq.coeffs.retain(|_, c| !c.is_zero());
            eq
        }));
    }
    let x = linear::solve(unknowns, &eqs)?;
    // Substitution check in the algebra itself.
    for con in constraints {
        let mut lhs = alg.zero();
        for (k, e) in &con.terms {
            lhs = lhs.add(&e.scale(&x[*k])).ok()?;
        }
        if lhs != con.rhs {
            return None;
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn s(x: &str) -> String {
        x.to_string()
    }

    fn b_alg(n: usize, trunc: usize) -> PresentedCommAlgebra {
        let mut basis: Vec<String> = (1..=n + 1).map(|i| format!("R{i}")).collect();
        basis.extend((1..=trunc).map(|j| format!("Q{j}")));
        let mut mult = Vec::new();
        for j in 1..=trunc {
            mult.push((format!("R{n}"), format!("Q{j}"), vec![(format!("Q{j}"), int(1))]));
        }
        PresentedCommAlgebra::new(basis, mult).unwrap()
    }

    #[test]
    fn orthogonal_products() {
        let a = PresentedCommAlgebra::orthogonal(["P1", "P2", "P3"]);
        let p1 = a.elem("P1").unwrap();
        let p2 = a.elem("P2").unwrap();
        assert_eq!(a.mul(&p1, &p1).unwrap(), p1);
        assert!(a.mul(&p1, &p2).unwrap().is_zero());
    }

    #[test]
    fn subprojection_product() {
        let b = b_alg(3, 4);
        let rn = b.elem("R3").unwrap();
        let q3 = b.elem("Q3").unwrap();
        assert_eq!(b.mul(&rn, &q3).unwrap(), q3);
        assert!(b.report().is_valid());
        // R_n splits into the Q_j and one remainder atom.
        assert_eq!(b.atoms(), 3 + 4 + 1);
    }

    #[test]
    fn mismatched_parents() {
        let a = PresentedCommAlgebra::orthogonal(["P1"]);
        let b = PresentedCommAlgebra::orthogonal(["P1", "P2"]);
        assert!(matches!(
            a.mul(&a.elem("P1").unwrap(), &b.elem("P1").unwrap()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn asymmetric_table_witness() {
        let basis = vec![s("b1"), s("b2")];
        let mut t = vec![vec![SparseVec::new(); 2]; 2];
        t[0][0] = unit_vec(0);
        t[1][1] = unit_vec(1);
        t[0][1] = unit_vec(0);
        let r = validate_table(&basis, &t);
        assert!(r.violations.contains(&AlgViolation::Symmetry { l: s("b1"), r: s("b2") }));
        let err = PresentedCommAlgebra::new(
            basis,
            vec![
                (s("b1"), s("b2"), vec![(s("b1"), int(1))]),
                (s("b2"), s("b1"), vec![]),
            ],
        );
        assert!(err.is_err());
    }

    #[test]
    fn solver_examples() {
        let a = PresentedCommAlgebra::orthogonal(["P1", "P2"]);
        let p1 = a.elem("P1").unwrap();
        let x = solve_linear(
            &a,
            1,
            &[LinearConstraint {
                terms: vec![(0, p1.clone())],
                rhs: p1.scale(&int(2)),
            }],
        )
        .unwrap();
        assert_eq!(x, vec![int(2)]);
        let inconsistent = [
            LinearConstraint {
                terms: vec![(0, p1.clone())],
                rhs: p1.clone(),
            },
            LinearConstraint {
                terms: vec![(0, p1.clone())],
                rhs: p1.scale(&int(2)),
            },
        ];
        assert!(solve_linear(&a, 1, &inconsistent).is_none());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"basis":["P1","P2"],"mult":[{"l":"P1","r":"P1","out":[["P1","1"]]}]}"#;
        let a = PresentedCommAlgebra::parse_json(text).unwrap();
        assert_eq!(a.dim(), 2);
        let back = PresentedCommAlgebra::from_json(&a.to_json()).unwrap();
        assert_eq!(back.id(), a.id());
        assert!(PresentedCommAlgebra::parse_json("{\"basis\": [").is_err());
    }
}
