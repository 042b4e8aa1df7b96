//! JSON forms of correspondences and morphisms. Scalars are strings
//! (`"3/2"`), combinations are lists of `[symbol, scalar]` pairs.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{CorrBuilder, CorrMorphism, PresentedCorrespondence};
use crate::algebra::{AlgebraJson, PresentedCommAlgebra};
use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

type Terms = Vec<(String, String)>;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RightEntry {
    pub gen: String,
    pub basis: String,
    pub out: Terms,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct InnerEntry {
    pub l: String,
    pub r: String,
    pub value: Terms,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LeftEntry {
    pub basis: String,
    pub gen: String,
    pub out: Terms,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DerivedEntry {
    pub gen: String,
    pub parent: String,
    pub basis: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CorrespondenceJson {
    pub algebra: AlgebraJson,
    pub generators: Vec<String>,
    #[serde(default)]
    pub right: Vec<RightEntry>,
    #[serde(default)]
    pub inner: Vec<InnerEntry>,
    #[serde(default)]
    pub left: Vec<LeftEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left_domain: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub derived: Vec<DerivedEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ImageEntry {
    pub from: String,
    pub to: Terms,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MorphismJson {
    pub source: CorrespondenceJson,
    pub target: CorrespondenceJson,
    pub module: Vec<ImageEntry>,
    pub algebra: Vec<ImageEntry>,
}

fn parse_terms(t: &Terms) -> Result<Vec<(&str, Scalar)>> {
    t.iter().map(|(s, c)| Ok((s.as_str(), scalar::parse(c)?))).collect()
}

fn terms<'a>(names: &'a [String], v: impl IntoIterator<Item = (&'a usize, &'a Scalar)>) -> Terms {
    v.into_iter().map(|(k, c)| (names[*k].clone(), scalar::format(c))).collect()
}

impl PresentedCorrespondence {
    pub fn from_json(doc: &CorrespondenceJson) -> Result<Self> {
        let alg = PresentedCommAlgebra::from_json(&doc.algebra)?;
        let mut b = CorrBuilder::new(alg.clone(), doc.generators.clone())?;
        for e in &doc.right {
            b.right(&e.gen, &e.basis, &parse_terms(&e.out)?)?;
        }
        for e in &doc.inner {
            let v = alg.combo(parse_terms(&e.value)?)?;
            b.inner(&e.l, &e.r, v)?;
        }
        for e in &doc.left {
            b.left(&e.basis, &e.gen, &parse_terms(&e.out)?)?;
        }
        if let Some(d) = &doc.left_domain {
            let names: Vec<&str> = d.iter().map(String::as_str).collect();
            b.left_domain(&names)?;
        }
        for e in &doc.derived {
            let (g, p, bb) = (b.gen(&e.gen)?, b.gen(&e.parent)?, b.basis(&e.basis)?);
            b.derived(g, p, bb);
        }
        b.build()
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let doc: CorrespondenceJson = serde_json::from_str(text)?;
        Self::from_json(&doc)
    }

    pub fn to_json(&self) -> CorrespondenceJson {
        let gens = self.generators();
        let basis = self.algebra().basis();
        let n = gens.len();
        let m = basis.len();
        let mut right = vec![];
        let mut inner = vec![];
        let mut left = vec![];
        let mut derived = vec![];
        for g in 0..n {
            for b in 0..m {
                let v = self.right_table(g, b);
                if !v.is_empty() {
                    right.push(RightEntry {
                        gen: gens[g].clone(),
                        basis: basis[b].clone(),
                        out: terms(gens, v),
                    });
                }
            }
            for h in g..n {
                let v = self.inner_table(g, h);
                if !v.is_zero() {
                    inner.push(InnerEntry {
                        l: gens[g].clone(),
                        r: gens[h].clone(),
                        value: terms(basis, v.coeffs()),
                    });
                }
            }
            if let Some((p, b)) = self.derivation(g) {
                derived.push(DerivedEntry {
                    gen: gens[g].clone(),
                    parent: gens[p].clone(),
                    basis: basis[b].clone(),
                });
            }
        }
        for b in 0..m {
            for g in 0..n {
                let v = self.left_table(b, g);
                if !v.is_empty() {
                    left.push(LeftEntry {
                        basis: basis[b].clone(),
                        gen: gens[g].clone(),
                        out: terms(gens, v),
                    });
                }
            }
        }
        let dom = self.left_domain();
        CorrespondenceJson {
            algebra: self.algebra().to_json(),
            generators: gens.to_vec(),
            right,
            inner,
            left,
            left_domain: (!dom.iter().all(|d| *d))
                .then(|| (0..m).filter(|&b| dom[b]).map(|b| basis[b].clone()).collect()),
            derived,
        }
    }
}

impl CorrMorphism {
    pub fn from_json(doc: &MorphismJson) -> Result<Self> {
        let src = Arc::new(PresentedCorrespondence::from_json(&doc.source)?);
        let tgt = Arc::new(PresentedCorrespondence::from_json(&doc.target)?);
        let module: Vec<(&str, Vec<(&str, Scalar)>)> = doc
            .module
            .iter()
            .map(|e| Ok((e.from.as_str(), parse_terms(&e.to)?)))
            .collect::<Result<_>>()?;
        let algebra: Vec<(&str, Vec<(&str, Scalar)>)> = doc
            .algebra
            .iter()
            .map(|e| Ok((e.from.as_str(), parse_terms(&e.to)?)))
            .collect::<Result<_>>()?;
        Self::from_names(src, tgt, &module, &algebra)
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let doc: MorphismJson = serde_json::from_str(text)?;
        Self::from_json(&doc)
    }

    /// Module images are written over target generators.
    pub fn to_json(&self) -> Result<MorphismJson> {
        let (s, t) = (self.source(), self.target());
        let mut module = vec![];
        for g in 0..s.generators().len() {
            let v = t.as_gen_combo(self.gen_image(g)).ok_or_else(|| {
                Error::Unsupported(format!("image of {} is not a generator combination", s.generators()[g]))
            })?;
            module.push(ImageEntry {
                from: s.generators()[g].clone(),
                to: terms(t.generators(), &v),
            });
        }
        let algebra = (0..s.algebra().dim())
            .map(|b| ImageEntry {
                from: s.algebra().basis()[b].clone(),
                to: terms(t.algebra().basis(), self.basis_image(b).coeffs()),
            })
            .collect();
        Ok(MorphismJson {
            source: s.to_json(),
            target: t.to_json(),
            module,
            algebra,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::c2;
    use super::*;

    #[test]
    fn correspondence_round_trip() {
        let c = c2();
        let doc = c.to_json();
        let back = PresentedCorrespondence::from_json(&doc).unwrap();
        assert_eq!(back.id(), c.id());
        let text = serde_json::to_string(&doc).unwrap();
        assert_eq!(PresentedCorrespondence::parse_json(&text).unwrap().id(), c.id());
    }

    #[test]
    fn morphism_round_trip() {
        let y = Arc::new(c2());
        let m = CorrMorphism::identity(y);
        let doc = m.to_json().unwrap();
        let back = CorrMorphism::from_json(&doc).unwrap();
        assert!(back.check().unwrap().all_passed());
        assert!(matches!(PresentedCorrespondence::parse_json("{"), Err(Error::Parse(_))));
    }
}
