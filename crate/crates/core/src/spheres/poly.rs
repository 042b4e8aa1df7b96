//! Noncommutative *-polynomials over named generators.
//!
//! The sphere maps are given on generators; composing them symbolically
//! and evaluating the result in an engine keeps every substitution exact.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use crate::algebra::StarEngine;
use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub sym: String,
    pub star: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Vec<Letter>, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::monomial(vec![], scalar::one())
    }

    pub fn sym(s: impl Into<String>) -> Self {
        Poly::monomial(vec![Letter { sym: s.into(), star: false }], scalar::one())
    }

    pub fn adj(s: impl Into<String>) -> Self {
        Poly::sym(s).star()
    }

    fn monomial(w: Vec<Letter>, c: Scalar) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(w, c);
        }
        p
    }

    pub fn terms(&self) -> &BTreeMap<Vec<Letter>, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn accumulate(&mut self, w: Vec<Letter>, c: Scalar) {
        let e = self.terms.entry(w.clone()).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.accumulate(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(w, d)| (w.clone(), d * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (u, c) in &self.terms {
            for (v, d) in &other.terms {
                let mut w = u.clone();
                w.extend(v.iter().cloned());
                out.accumulate(w, c * d);
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    pub fn star(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| {
                    let rev = w
                        .iter()
                        .rev()
                        .map(|l| Letter { sym: l.sym.clone(), star: !l.star })
                        .collect();
                    (rev, scalar::conj(c))
                })
                .collect(),
        }
    }

    /// Replaces every generator by its image, extending multiplicatively
    /// and through the involution.
    pub fn subst(&self, f: &impl Fn(&str) -> Poly) -> Poly {
        let mut out = Poly::zero();
        for (w, c) in &self.terms {
            let mut acc = Poly::monomial(vec![], c.clone());
            for l in w {
                let img = f(&l.sym);
                acc = acc.mul(&if l.star { img.star() } else { img });
                if acc.is_zero() {
                    break;
                }
            }
            for (w, d) in acc.terms {
                out.accumulate(w, d);
            }
        }
        out
    }

    /// Evaluates in `engine`; a nonzero constant term has no image there.
    /// Words sharing a prefix share its product, and a prefix that is
    /// already zero prunes every word extending it.
    pub fn eval<E: StarEngine>(&self, engine: &E, f: &impl Fn(&str) -> Result<E::Elem>) -> Result<E::Elem> {
        if self.terms.keys().any(Vec::is_empty) {
            return Err(Error::Unsupported("constant term in a non-unital engine".into()));
        }
        let words: Vec<(&Vec<Letter>, &Scalar)> = self.terms.iter().collect();
        eval_from(engine, f, &words, 0, None)
    }

    /// Coefficients when the polynomial is a combination of single
    /// unstarred generators.
    pub fn linear(&self) -> Option<Vec<(String, Scalar)>> {
        self.terms
            .iter()
            .map(|(w, c)| match w.as_slice() {
                [l] if !l.star => Some((l.sym.clone(), c.clone())),
                _ => None,
            })
            .collect()
    }
}

fn eval_from<E: StarEngine>(
    engine: &E,
    f: &impl Fn(&str) -> Result<E::Elem>,
    words: &[(&Vec<Letter>, &Scalar)],
    depth: usize,
    prefix: Option<&E::Elem>,
) -> Result<E::Elem> {
    let mut acc = engine.zero();
    let mut i = 0;
    while i < words.len() {
        if words[i].0.len() == depth {
            let m = prefix.expect("words are nonempty");
            acc = engine.add(&acc, &engine.scale(words[i].1, m))?;
            i += 1;
            continue;
        }
        let l = &words[i].0[depth];
        let end = i + words[i..].iter().take_while(|(w, _)| w.len() > depth && &w[depth] == l).count();
        let x = f(&l.sym)?;
        let x = if l.star { engine.star(&x) } else { x };
        let m = match prefix {
            Some(p) => engine.mul(p, &x)?,
            None => x,
        };
        if !engine.is_trivially_zero(&m) {
            acc = engine.add(&acc, &eval_from(engine, f, &words[i..end], depth + 1, Some(&m))?)?;
        }
        i = end;
    }
    Ok(acc)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c < &Scalar::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !mag.is_one() || w.is_empty() {
                write!(f, "{}", scalar::format(&mag))?;
            }
            for l in w {
                write!(f, "{}{}", l.sym, if l.star { "*" } else { "" })?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_reverses_and_conjugates_letters() {
        let p = Poly::sym("a").mul(&Poly::adj("b"));
        assert_eq!(p.star().to_string(), "ba*");
        assert_eq!(p.star().star(), p);
    }

    #[test]
    fn substitution_kills_words_through_zero() {
        let p = Poly::sym("a").mul(&Poly::sym("b")).add(&Poly::adj("a"));
        let q = p.subst(&|s| if s == "b" { Poly::zero() } else { Poly::adj("c") });
        assert_eq!(q.linear(), Some(vec![("c".to_string(), scalar::one())]));
    }
}
