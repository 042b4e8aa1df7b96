//! Normal-form arithmetic in the algebra of a labelled space.
//!
//! Elements are finite combinations of terms `s_α p_C s_β*` with `C` in the
//! ring generated by the accommodating family. Equality is decided by
//! expanding every term to a common word length with relation (4) and
//! comparing coefficients atom by atom.

use std::collections::BTreeMap;
use std::fmt;

use num::{Signed, Zero};

use super::set::SetExpr;
use super::space::LabelledSpace;
use crate::algebra::StarEngine;
use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

pub type Word = Vec<String>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalTerm {
    pub left: Word,
    pub set: SetExpr,
    pub right: Word,
}

impl NormalTerm {
    pub fn degree(&self) -> i64 {
        self.left.len() as i64 - self.right.len() as i64
    }

    pub fn star(&self) -> NormalTerm {
        NormalTerm {
            left: self.right.clone(),
            set: self.set.clone(),
            right: self.left.clone(),
        }
    }
}

impl fmt::Display for NormalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![];
        if !self.left.is_empty() {
            parts.push(format!("s[{}]", self.left.join(" ")));
        }
        parts.push(format!("p{}", self.set));
        if !self.right.is_empty() {
            parts.push(format!("s[{}]*", self.right.join(" ")));
        }
        f.write_str(&parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelledElement {
    parent: u64,
    terms: BTreeMap<NormalTerm, Scalar>,
}

impl LabelledElement {
    pub fn parent(&self) -> u64 {
        self.parent
    }

    pub fn terms(&self) -> &BTreeMap<NormalTerm, Scalar> {
        &self.terms
    }

    /// Syntactically zero; see [`LabelledSpace::equals`] for the real test.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &LabelledElement) -> Result<()> {
        if self.parent != other.parent {
            return Err(Error::domain("elements of different labelled spaces"));
        }
        Ok(())
    }

    fn accumulate(&mut self, t: NormalTerm, c: Scalar) {
        if c.is_zero() || t.set.is_empty() {
            return;
        }
        let e = self.terms.entry(t.clone()).or_insert_with(scalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&t);
        }
    }

    pub fn add(&self, other: &LabelledElement) -> Result<LabelledElement> {
        self.check(other)?;
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.accumulate(t.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &LabelledElement) -> Result<LabelledElement> {
        self.add(&other.scale(&-scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> LabelledElement {
        let mut out = LabelledElement {
            parent: self.parent,
            terms: BTreeMap::new(),
        };
        for (t, v) in &self.terms {
            out.accumulate(t.clone(), v * c);
        }
        out
    }

    pub fn star(&self) -> LabelledElement {
        LabelledElement {
            parent: self.parent,
            terms: self.terms.iter().map(|(t, c)| (t.star(), scalar::conj(c))).collect(),
        }
    }

    /// The common degree of all terms, if homogeneous and nonzero.
    pub fn degree(&self) -> Option<i64> {
        let mut ds = self.terms.keys().map(NormalTerm::degree);
        let d = ds.next()?;
        ds.all(|e| e == d).then_some(d)
    }
}

impl fmt::Display for LabelledElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(t, c)| {
                if *c == scalar::one() {
                    t.to_string()
                } else {
                    format!("{} {}", scalar::format(c), t)
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

type Grouped = BTreeMap<(Word, Word), Vec<(SetExpr, Scalar)>>;

impl LabelledSpace {
    pub fn zero_element(&self) -> LabelledElement {
        LabelledElement {
            parent: self.id(),
            terms: BTreeMap::new(),
        }
    }

    /// `c s_α p_C s_β*`, with `C` cut down to `r(α) ∩ r(β)`.
    pub fn term(&self, left: &[String], set: &SetExpr, right: &[String], c: Scalar) -> Result<LabelledElement> {
        let cut = set
            .intersection(&self.graph().range_of_word(left)?)
            .intersection(&self.graph().range_of_word(right)?);
        self.atoms_of(&cut)?;
        let mut x = self.zero_element();
        x.accumulate(
            NormalTerm {
                left: left.to_vec(),
                set: cut,
                right: right.to_vec(),
            },
            c,
        );
        Ok(x)
    }

    pub fn p(&self, set: &SetExpr) -> Result<LabelledElement> {
        self.term(&[], set, &[], scalar::one())
    }

    pub fn s(&self, label: &str) -> Result<LabelledElement> {
        let w = vec![label.to_string()];
        let r = self.graph().range_of_word(&w)?;
        self.term(&w, &r, &[], scalar::one())
    }

    fn mul_terms(&self, x: &NormalTerm, y: &NormalTerm) -> Result<Option<NormalTerm>> {
        let t = if let Some(rest) = y.left.strip_prefix(x.right.as_slice()) {
            let set = self.ring_range_word(&x.set, rest)?.intersection(&y.set);
            let mut left = x.left.clone();
            left.extend_from_slice(rest);
            NormalTerm {
                left,
                set,
                right: y.right.clone(),
            }
        } else if let Some(rest) = x.right.strip_prefix(y.left.as_slice()) {
            let set = x.set.intersection(&self.ring_range_word(&y.set, rest)?);
            let mut right = y.right.clone();
            right.extend_from_slice(rest);
            NormalTerm {
                left: x.left.clone(),
                set,
                right,
            }
        } else {
            return Ok(None);
        };
        Ok((!t.set.is_empty()).then_some(t))
    }

    pub fn mul(&self, x: &LabelledElement, y: &LabelledElement) -> Result<LabelledElement> {
        x.check(y)?;
        if x.parent != self.id() {
            return Err(Error::domain("element does not belong to this labelled space"));
        }
        let mut out = self.zero_element();
        for (s, a) in &x.terms {
            for (t, b) in &y.terms {
                if let Some(u) = self.mul_terms(s, t)? {
                    out.accumulate(u, a * b);
                }
            }
        }
        self.normalize(&out)
    }

    /// Coefficient of each atom, per word pair.
    fn atom_values(&self, group: &[(SetExpr, Scalar)]) -> Result<BTreeMap<usize, Scalar>> {
        let mut vals: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (set, c) in group {
            for a in self.atoms_of(set)? {
                *vals.entry(a).or_insert_with(scalar::zero) += c;
            }
        }
        vals.retain(|_, v| !v.is_zero());
        Ok(vals)
    }

    fn grouped(x: &LabelledElement) -> Grouped {
        let mut g: Grouped = BTreeMap::new();
        for (t, c) in &x.terms {
            g.entry((t.left.clone(), t.right.clone()))
                .or_default()
                .push((t.set.clone(), c.clone()));
        }
        g
    }

    /// Canonical form: per word pair, one term per nonzero coefficient,
    /// whose set is the level set of that coefficient.
    pub fn normalize(&self, x: &LabelledElement) -> Result<LabelledElement> {
        let mut out = self.zero_element();
        for ((l, r), group) in Self::grouped(x) {
            let mut levels: BTreeMap<Scalar, SetExpr> = BTreeMap::new();
            for (a, v) in self.atom_values(&group)? {
                let e = levels.entry(v).or_insert_with(SetExpr::empty);
                *e = e.union(&self.atoms()[a].set);
            }
            for (v, set) in levels {
                out.accumulate(
                    NormalTerm {
                        left: l.clone(),
                        set,
                        right: r.clone(),
                    },
                    v,
                );
            }
        }
        Ok(out)
    }

    /// One application of relation (4) to `s_α p_C s_β*`; sink parts stay.
    pub fn expand_once(&self, t: &NormalTerm) -> Result<Vec<NormalTerm>> {
        let mut out = vec![];
        let mut rest = t.set.clone();
        for v in self.sinks() {
            if t.set.contains(v) {
                let single = SetExpr::singleton(v.clone());
                rest = rest.difference(&single);
                out.push(NormalTerm {
                    left: t.left.clone(),
                    set: single,
                    right: t.right.clone(),
                });
            }
        }
        if rest.is_empty() {
            return Ok(out);
        }
        for a in self.graph().emitted_labels(&rest)? {
            let set = self.ring_range(&rest, &a)?;
            if set.is_empty() {
                continue;
            }
            let mut left = t.left.clone();
            left.push(a.clone());
            let mut right = t.right.clone();
            right.push(a);
            out.push(NormalTerm { left, set, right });
        }
        Ok(out)
    }

    fn is_sink_locked(&self, set: &SetExpr) -> bool {
        set.is_finite() && set.atoms().iter().all(|v| self.sinks().contains(v))
    }

    /// Expands every term to left-word length `level`, except sink parts.
    pub fn expand_to_level(&self, x: &LabelledElement, level: usize) -> Result<LabelledElement> {
        let mut out = self.zero_element();
        let mut stack: Vec<(NormalTerm, Scalar)> = x.terms.iter().map(|(t, c)| (t.clone(), c.clone())).collect();
        while let Some((t, c)) = stack.pop() {
            if t.left.len() >= level || self.is_sink_locked(&t.set) {
                out.accumulate(t, c);
                continue;
            }
            for u in self.expand_once(&t)? {
                stack.push((u, c.clone()));
            }
        }
        Ok(out)
    }

    /// Decides `x = y` modulo relations (1)–(4).
    pub fn equals(&self, x: &LabelledElement, y: &LabelledElement) -> Result<bool> {
        let d = x.sub(y)?;
        let mut by_degree: BTreeMap<i64, LabelledElement> = BTreeMap::new();
        for (t, c) in &d.terms {
            by_degree
                .entry(t.degree())
                .or_insert_with(|| self.zero_element())
                .accumulate(t.clone(), c.clone());
        }
        for part in by_degree.values() {
            let level = part.terms.keys().map(|t| t.left.len()).max().unwrap_or(0);
            let flat = self.expand_to_level(part, level)?;
            for group in Self::grouped(&flat).values() {
                if !self.atom_values(group)?.is_empty() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn is_zero_element(&self, x: &LabelledElement) -> Result<bool> {
        self.equals(x, &self.zero_element())
    }
}

impl StarEngine for LabelledSpace {
    type Elem = LabelledElement;

    fn zero(&self) -> LabelledElement {
        self.zero_element()
    }

    fn add(&self, x: &LabelledElement, y: &LabelledElement) -> Result<LabelledElement> {
        x.add(y)
    }

    fn scale(&self, c: &Scalar, x: &LabelledElement) -> LabelledElement {
        x.scale(c)
    }

    fn mul(&self, x: &LabelledElement, y: &LabelledElement) -> Result<LabelledElement> {
        LabelledSpace::mul(self, x, y)
    }

    fn star(&self, x: &LabelledElement) -> LabelledElement {
        x.star()
    }

    fn equals(&self, x: &LabelledElement, y: &LabelledElement) -> Result<bool> {
        LabelledSpace::equals(self, x, y)
    }

    fn is_trivially_zero(&self, x: &LabelledElement) -> bool {
        x.is_zero()
    }

    fn render(&self, x: &LabelledElement) -> String {
        match self.normalize(x) {
            Ok(n) => n.to_string(),
            Err(_) => x.to_string(),
        }
    }
}

/// Sign-insensitive size of an element, for reports.
pub fn weight(x: &LabelledElement) -> Scalar {
    x.terms.values().map(|c| c.abs()).fold(scalar::zero(), |a, b| a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DirectedGraph;
    use crate::labelled::LabelledGraph;

    fn m1() -> LabelledSpace {
        let g = DirectedGraph::new(
            vec!["v1".into(), "v2".into()],
            vec![
                ("e11".into(), "v1".into(), "v1".into()),
                ("e12".into(), "v1".into(), "v2".into()),
            ],
        )
        .unwrap();
        let gens = vec![SetExpr::named(["v1"]), SetExpr::named(["v2"])];
        LabelledSpace::new(LabelledGraph::identity(&g), gens).unwrap()
    }

    #[test]
    fn relation_three() {
        let s = m1();
        let a = s.s("e11").unwrap();
        let b = s.s("e12").unwrap();
        assert!(s.is_zero_element(&s.mul(&a.star(), &b).unwrap()).unwrap());
        let aa = s.mul(&a.star(), &a).unwrap();
        assert!(s.equals(&aa, &s.p(&SetExpr::named(["v1"])).unwrap()).unwrap());
        assert!(!s.equals(&a, &b).unwrap());
    }

    #[test]
    fn cuntz_krieger_at_the_source() {
        let s = m1();
        let p1 = s.p(&SetExpr::named(["v1"])).unwrap();
        let mut sum = s.zero_element();
        for e in ["e11", "e12"] {
            let x = s.s(e).unwrap();
            sum = sum.add(&s.mul(&x, &x.star()).unwrap()).unwrap();
        }
        assert!(s.equals(&p1, &sum).unwrap());
        assert!(!s.equals(&p1, &s.zero_element()).unwrap());
    }

    #[test]
    fn projection_moves_through_edges() {
        let s = m1();
        let p1 = s.p(&SetExpr::named(["v1"])).unwrap();
        let p2 = s.p(&SetExpr::named(["v2"])).unwrap();
        let e = s.s("e12").unwrap();
        let lhs = s.mul(&p1, &e).unwrap();
        let rhs = s.mul(&e, &p2).unwrap();
        assert!(s.equals(&lhs, &rhs).unwrap());
        assert!(s.is_zero_element(&s.mul(&p2, &e).unwrap()).unwrap());
        assert_eq!(lhs.degree(), Some(1));
    }
}
