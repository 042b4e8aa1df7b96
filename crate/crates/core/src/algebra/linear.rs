//! Sparse exact Gaussian elimination.

use std::collections::BTreeMap;

use num::{Signed, Zero};

use crate::scalar::Scalar;

/// Sparse vector keyed by coordinate index.
pub type SparseVec = BTreeMap<usize, Scalar>;

pub fn add_scaled(target: &mut SparseVec, src: &SparseVec, factor: &Scalar) {
    if factor.is_zero() {
        return;
    }
    for (k, v) in src {
        let e = target.entry(*k).or_insert_with(Scalar::zero);
        *e += v * factor;
        if e.is_zero() {
            target.remove(k);
        }
    }
}

/// One linear equation `sum coeffs[j] * x_j = rhs`.
#[derive(Clone, Debug, Default)]
pub struct Equation {
    pub coeffs: SparseVec,
    pub rhs: Scalar,
}

/// Reduced row echelon form of a system, kept for reuse.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// Rows keyed by pivot column.
    rows: BTreeMap<usize, Equation>,
    inconsistent: bool,
    unknowns: usize,
}

impl Echelon {
    pub fn new(unknowns: usize, equations: impl IntoIterator<Item = Equation>) -> Self {
        let mut e = Echelon {
            rows: BTreeMap::new(),
            inconsistent: false,
            unknowns,
        };
        for eq in equations {
            e.insert(eq);
        }
        e
    }

    /// Fully reduces `eq` against the current rows.
    fn reduce(&self, mut eq: Equation) -> Equation {
        loop {
            let hit = eq
                .coeffs
                .iter()
                .find(|(k, _)| self.rows.contains_key(k))
                .map(|(k, v)| (*k, v.clone()));
            match hit {
                None => return eq,
                Some((k, v)) => {
                    let row = &self.rows[&k];
                    let f = -v;
                    add_scaled(&mut eq.coeffs, &row.coeffs, &f);
                    eq.rhs += &row.rhs * &f;
                }
            }
        }
    }

    pub fn insert(&mut self, eq: Equation) {
        let eq = self.reduce(eq);
        let Some((&p, pv)) = eq.coeffs.iter().next() else {
            if !eq.rhs.is_zero() {
                self.inconsistent = true;
            }
            return;
        };
        let inv = pv.recip();
        let mut eq = eq;
        for v in eq.coeffs.values_mut() {
            *v *= &inv;
        }
        eq.rhs *= &inv;
        for row in self.rows.values_mut() {
            if let Some(c) = row.coeffs.get(&p).cloned() {
                let f = -c;
                add_scaled(&mut row.coeffs, &eq.coeffs, &f);
                row.rhs += &eq.rhs * &f;
            }
        }
        self.rows.insert(p, eq);
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Particular solution with all free variables set to zero.
    pub fn particular(&self) -> Option<Vec<Scalar>> {
        if self.inconsistent {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.unknowns];
        for (p, row) in &self.rows {
            x[*p] = row.rhs.clone();
        }
        Some(x)
    }

    /// Basis of the solution space of the homogeneous system.
    pub fn kernel(&self) -> Vec<SparseVec> {
        let mut out = Vec::new();
        for free in 0..self.unknowns {
            if self.rows.contains_key(&free) {
                continue;
            }
            let mut v = SparseVec::new();
            v.insert(free, num::One::one());
            for (p, row) in &self.rows {
                if let Some(c) = row.coeffs.get(&free) {
                    v.insert(*p, -c.clone());
                }
            }
            out.push(v);
        }
        out
    }

    /// Whether the homogeneous row `v` lies in the row space.
    pub fn spans(&self, v: &SparseVec) -> bool {
        let r = self.reduce(Equation {
            coeffs: v.clone(),
            rhs: Scalar::zero(),
        });
        r.coeffs.is_empty()
    }
}

pub fn residual_is_zero(equations: &[Equation], x: &[Scalar]) -> bool {
    equations.iter().all(|eq| {
        let mut s = Scalar::zero();
        for (k, c) in &eq.coeffs {
            s += c * &x[*k];
        }
        s == eq.rhs
    })
}

/// Solves the system exactly. The returned assignment has been checked by
/// substitution.
pub fn solve(unknowns: usize, equations: &[Equation]) -> Option<Vec<Scalar>> {
    let ech = Echelon::new(unknowns, equations.iter().cloned());
    let x = ech.particular()?;
    residual_is_zero(equations, &x).then_some(x)
}

/// Rank of a set of sparse vectors.
pub fn rank(vectors: &[SparseVec]) -> usize {
    Echelon::new(
        0,
        vectors.iter().map(|v| Equation {
            coeffs: v.clone(),
            rhs: Scalar::zero(),
        }),
    )
    .rank()
}

/// Whether two finite families span the same subspace.
pub fn same_span(a: &[SparseVec], b: &[SparseVec]) -> bool {
    let ea = Echelon::new(
        0,
        a.iter().map(|v| Equation {
            coeffs: v.clone(),
            rhs: Scalar::zero(),
        }),
    );
    let eb = Echelon::new(
        0,
        b.iter().map(|v| Equation {
            coeffs: v.clone(),
            rhs: Scalar::zero(),
        }),
    );
    ea.rank() == eb.rank() && b.iter().all(|v| ea.spans(v))
}

/// Incrementally grown linearly independent family that can express
/// vectors of its span as combinations of its members.
#[derive(Clone, Debug, Default)]
pub struct SpanBasis {
    /// Reduced rows `(pivot, row, combination of members)` in insertion order.
    rows: Vec<(usize, SparseVec, SparseVec)>,
    members: usize,
}

impl SpanBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.members
    }

    pub fn is_empty(&self) -> bool {
        self.members == 0
    }

    fn reduce(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut v = v.clone();
        let mut combo = SparseVec::new();
        for (p, row, c) in &self.rows {
            if let Some(f) = v.get(p).cloned() {
                add_scaled(&mut v, row, &-f.clone());
                add_scaled(&mut combo, c, &f);
            }
        }
        (v, combo)
    }

    /// Adds `v` as a new member when it is independent; returns its index.
    pub fn insert(&mut self, v: &SparseVec) -> Option<usize> {
        let (r, combo) = self.reduce(v);
        let (&p, lead) = r.iter().next()?;
        let inv = <Scalar as num::One>::one() / lead;
        let mut c = SparseVec::new();
        add_scaled(&mut c, &combo, &-inv.clone());
        c.insert(self.members, inv.clone());
        let mut row = SparseVec::new();
        add_scaled(&mut row, &r, &inv);
        self.rows.push((p, row, c));
        self.members += 1;
        Some(self.members - 1)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Coordinates of `v` over the members, if `v` lies in their span.
    pub fn express(&self, v: &SparseVec) -> Option<SparseVec> {
        let (r, combo) = self.reduce(v);
        r.is_empty().then_some(combo)
    }
}

/// Positive semidefiniteness of a dense symmetric matrix.
pub fn is_positive_semidefinite(m: &[Vec<Scalar>]) -> bool {
    // Symmetric Gaussian elimination: PSD iff every pivot is >= 0 and a zero
    // pivot has a zero row.
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    for k in 0..n {
        let p = a[k][k].clone();
        if p.is_negative() {
            return false;
        }
        if p.is_zero() {
            if (k..n).any(|j| !a[k][j].is_zero()) {
                return false;
            }
            continue;
        }
        for i in (k + 1)..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &p;
            for j in k..n {
                let d = &f * &a[k][j];
                a[i][j] -= d;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn eq(c: &[(usize, i64)], r: i64) -> Equation {
        Equation {
            coeffs: c.iter().map(|(k, v)| (*k, int(*v))).collect(),
            rhs: int(r),
        }
    }

    #[test]
    fn solves_and_detects_inconsistency() {
        let x = solve(2, &[eq(&[(0, 1), (1, 1)], 3), eq(&[(0, 1), (1, -1)], 1)]).unwrap();
        assert_eq!(x, vec![int(2), int(1)]);
        assert!(solve(1, &[eq(&[(0, 1)], 1), eq(&[(0, 1)], 2)]).is_none());
    }

    #[test]
    fn kernel_dimension() {
        let e = Echelon::new(3, [eq(&[(0, 1), (1, 1), (2, 1)], 0)]);
        assert_eq!(e.kernel().len(), 2);
    }

    #[test]
    fn span_basis_expresses_members() {
        let v = |c: &[(usize, i64)]| -> SparseVec { c.iter().map(|(k, x)| (*k, int(*x))).collect() };
        let mut b = SpanBasis::new();
        assert_eq!(b.insert(&v(&[(0, 1), (1, 1)])), Some(0));
        assert_eq!(b.insert(&v(&[(1, 2), (2, 1)])), Some(1));
        assert_eq!(b.insert(&v(&[(0, 2), (1, 4), (2, 1)])), None);
        let target = v(&[(0, 3), (1, 1), (2, -1)]);
        let c = b.express(&target).unwrap();
        assert_eq!(c, v(&[(0, 3), (1, -1)]));
        assert!(b.express(&v(&[(2, 1)])).is_none());
    }

    #[test]
    fn psd() {
        let m = |r: Vec<Vec<i64>>| -> Vec<Vec<Scalar>> {
            r.into_iter().map(|x| x.into_iter().map(int).collect()).collect()
        };
        assert!(is_positive_semidefinite(&m(vec![vec![1, 1], vec![1, 1]])));
        assert!(!is_positive_semidefinite(&m(vec![vec![1, 2], vec![2, 1]])));
        assert!(!is_positive_semidefinite(&m(vec![vec![0, 1], vec![1, 0]])));
    }
}
