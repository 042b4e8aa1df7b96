//! Vertex sets with symbolic cofinal tails.
//!
//! A vertex is either named (`w1`) or a member `base_j` of an indexed
//! family with `j >= 1`. A [`SetExpr`] is a finite set of vertices together
//! with, per indexed base, an optional tail `{base_j : j >= k}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub base: String,
    pub index: Option<u32>,
}

impl Vertex {
    pub fn named(name: impl Into<String>) -> Self {
        Vertex {
            base: name.into(),
            index: None,
        }
    }

    pub fn indexed(base: impl Into<String>, j: u32) -> Self {
        Vertex {
            base: base.into(),
            index: Some(j),
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            None => f.write_str(&self.base),
            Some(j) => write!(f, "{}_{}", self.base, j),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetExpr {
    atoms: BTreeSet<Vertex>,
    tails: BTreeMap<String, u32>,
}

impl SetExpr {
    pub fn empty() -> Self {
        SetExpr::default()
    }

    pub fn from_vertices(vs: impl IntoIterator<Item = Vertex>) -> Self {
        let mut s = SetExpr {
            atoms: vs.into_iter().collect(),
            tails: BTreeMap::new(),
        };
        s.canonicalize();
        s
    }

    pub fn singleton(v: Vertex) -> Self {
        Self::from_vertices([v])
    }

    pub fn named<'a>(names: impl IntoIterator<Item = &'a str>) -> Self {
        Self::from_vertices(names.into_iter().map(Vertex::named))
    }

    /// `{base_j : j >= k}`.
    pub fn tail(base: impl Into<String>, k: u32) -> Self {
        let mut s = SetExpr::default();
        s.tails.insert(base.into(), k.max(1));
        s
    }

    pub fn new(atoms: BTreeSet<Vertex>, tails: BTreeMap<String, u32>) -> Self {
        let mut s = SetExpr { atoms, tails };
        s.canonicalize();
        s
    }

    fn canonicalize(&mut self) {
        for (b, k) in self.tails.iter_mut() {
            *k = (*k).max(1);
            self.atoms
                .retain(|v| !(v.base == *b && v.index.is_some_and(|j| j >= *k)));
            while *k > 1 && self.atoms.remove(&Vertex::indexed(b.clone(), *k - 1)) {
                *k -= 1;
            }
        }
    }

    pub fn atoms(&self) -> &BTreeSet<Vertex> {
        &self.atoms
    }

    pub fn tails(&self) -> &BTreeMap<String, u32> {
        &self.tails
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty() && self.tails.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.tails.is_empty()
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        if self.atoms.contains(v) {
            return true;
        }
        match (v.index, self.tails.get(&v.base)) {
            (Some(j), Some(&k)) => j >= k,
            _ => false,
        }
    }

    /// Largest index mentioned, counting a tail `k` as `k`.
    pub fn footprint(&self) -> u32 {
        let a = self.atoms.iter().filter_map(|v| v.index).max().unwrap_or(0);
        let t = self.tails.values().copied().max().unwrap_or(0);
        a.max(t)
    }

    pub fn union(&self, other: &SetExpr) -> SetExpr {
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        let mut tails = self.tails.clone();
        for (b, &k) in &other.tails {
            let e = tails.entry(b.clone()).or_insert(k);
            *e = (*e).min(k);
        }
        SetExpr::new(atoms, tails)
    }

    pub fn intersection(&self, other: &SetExpr) -> SetExpr {
        let mut atoms: BTreeSet<Vertex> = self
            .atoms
            .iter()
            .filter(|v| other.contains(v))
            .cloned()
            .collect();
        atoms.extend(other.atoms.iter().filter(|v| self.contains(v)).cloned());
        let mut tails = BTreeMap::new();
        for (b, &k) in &self.tails {
            if let Some(&l) = other.tails.get(b) {
                tails.insert(b.clone(), k.max(l));
            }
        }
        SetExpr::new(atoms, tails)
    }

    pub fn difference(&self, other: &SetExpr) -> SetExpr {
        let mut atoms: BTreeSet<Vertex> = self
            .atoms
            .iter()
            .filter(|v| !other.contains(v))
            .cloned()
            .collect();
        let mut tails = BTreeMap::new();
        for (b, &k) in &self.tails {
            // Start of the part of this tail surviving every removal.
            let mut start = match other.tails.get(b) {
                Some(&l) if l <= k => continue,
                Some(&l) => {
                    atoms.extend((k..l).map(|j| Vertex::indexed(b.clone(), j)));
                    // Atoms of `other` inside `[k, l)` are removed below.
                    atoms.retain(|v| !other.contains(v));
                    continue;
                }
                None => k,
            };
            let removed: BTreeSet<u32> = other
                .atoms
                .iter()
                .filter(|v| v.base == *b)
                .filter_map(|v| v.index)
                .filter(|&j| j >= k)
                .collect();
            if let Some(&top) = removed.iter().next_back() {
                atoms.extend(
                    (k..=top)
                        .filter(|j| !removed.contains(j))
                        .map(|j| Vertex::indexed(b.clone(), j)),
                );
                start = top + 1;
            }
            tails.insert(b.clone(), start);
        }
        SetExpr::new(atoms, tails)
    }

    pub fn is_subset(&self, other: &SetExpr) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &SetExpr) -> bool {
        self.intersection(other).is_empty()
    }

    /// Concrete members with index at most `n`.
    pub fn truncate(&self, n: u32) -> BTreeSet<Vertex> {
        let mut out: BTreeSet<Vertex> = self
            .atoms
            .iter()
            .filter(|v| v.index.is_none_or(|j| j <= n))
            .cloned()
            .collect();
        for (b, &k) in &self.tails {
            out.extend((k..=n).map(|j| Vertex::indexed(b.clone(), j)));
        }
        out
    }
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.atoms.iter().map(|v| v.to_string()).collect();
        parts.extend(self.tails.iter().map(|(b, k)| format!("{b}_{k}..")));
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(j: u32) -> Vertex {
        Vertex::indexed("v", j)
    }

    #[test]
    fn absorbs_adjacent_atoms() {
        let s = SetExpr::tail("v", 3).union(&SetExpr::from_vertices([v(2), v(5)]));
        assert_eq!(s, SetExpr::tail("v", 2));
        assert_eq!(s.to_string(), "{v_2..}");
    }

    #[test]
    fn difference_carves_tail() {
        let s = SetExpr::tail("v", 1).difference(&SetExpr::singleton(v(3)));
        assert_eq!(s.truncate(5), [v(1), v(2), v(4), v(5)].into_iter().collect());
        assert_eq!(s.atoms().len(), 2);
        let d = SetExpr::tail("v", 1).difference(&SetExpr::tail("v", 3));
        assert_eq!(d, SetExpr::from_vertices([v(1), v(2)]));
        assert!(SetExpr::tail("v", 3).difference(&SetExpr::tail("v", 1)).is_empty());
    }

    #[test]
    fn intersection_and_membership() {
        let a = SetExpr::tail("v", 2).union(&SetExpr::named(["w2"]));
        let b = SetExpr::tail("v", 4).union(&SetExpr::from_vertices([v(2)]));
        let i = a.intersection(&b);
        assert!(i.contains(&v(2)) && !i.contains(&v(3)) && i.contains(&v(9)));
        assert!(!i.contains(&Vertex::named("w2")));
    }
}
