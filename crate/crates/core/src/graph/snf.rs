//! Smith normal form over the integers.

use num::{BigInt, Integer, One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntMatrix {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    #[serde(serialize_with = "ser_rows")]
    pub data: Vec<Vec<BigInt>>,
}

fn ser_rows<S: serde::Serializer>(rows: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(rows.len()))?;
    for r in rows {
        let strs: Vec<String> = r.iter().map(|x| x.to_string()).collect();
        seq.serialize_element(&strs)?;
    }
    seq.end()
}

impl IntMatrix {
    pub fn new(row_labels: Vec<String>, col_labels: Vec<String>, data: Vec<Vec<BigInt>>) -> Result<Self> {
        if data.len() != row_labels.len() || data.iter().any(|r| r.len() != col_labels.len()) {
            return Err(Error::invalid("matrix", "dimensions do not match labels"));
        }
        Ok(IntMatrix {
            row_labels,
            col_labels,
            data,
        })
    }

    /// Unlabelled matrix from small integers.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        IntMatrix {
            row_labels: (0..r).map(|i| i.to_string()).collect(),
            col_labels: (0..c).map(|j| j.to_string()).collect(),
            data: rows
                .iter()
                .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let data = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        IntMatrix {
            row_labels: labels.clone(),
            col_labels: labels,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.data.len()
    }

    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols(), other.rows());
        let data = (0..self.rows())
            .map(|i| {
                (0..other.cols())
                    .map(|j| {
                        let mut s = BigInt::zero();
                        for k in 0..self.cols() {
                            s += &self.data[i][k] * &other.data[k][j];
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        IntMatrix {
            row_labels: self.row_labels.clone(),
            col_labels: other.col_labels.clone(),
            data,
        }
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.data
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows(), self.cols());
        let n = self.rows();
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                    m[i][j] = v;
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[n - 1][n - 1]
    }

    fn same_entries(&self, other: &IntMatrix) -> bool {
        self.data == other.data
    }
}

/// `u * m * v == s` with `u`, `v` unimodular and `s` diagonal.
#[derive(Clone, Debug, Serialize)]
pub struct Snf {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Diagonal of `s` up to the rank.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let r = self.s.rows().min(self.s.cols());
        (0..r)
            .map(|i| self.s.data[i][i].clone())
            .take_while(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().len()
    }
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// `row[dst] += f * row[src]`.
fn add_row(m: &mut [Vec<BigInt>], dst: usize, src: usize, f: &BigInt) {
    let s = m[src].clone();
    for (x, y) in m[dst].iter_mut().zip(s) {
        *x += f * y;
    }
}

fn add_col(m: &mut [Vec<BigInt>], dst: usize, src: usize, f: &BigInt) {
    for row in m.iter_mut() {
        let y = row[src].clone();
        row[dst] += f * y;
    }
}

fn negate_row(m: &mut [Vec<BigInt>], i: usize) {
    for x in m[i].iter_mut() {
        *x = -x.clone();
    }
}

/// Smith normal form with transformation matrices. The result is checked by
/// exact multiplication and determinant evaluation before it is returned.
pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.data.clone();
    let mut u = IntMatrix::identity(r).data;
    let mut v = IntMatrix::identity(c).data;
    let mut t = 0;
    while t < r.min(c) {
        // Pivot: smallest nonzero absolute value in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut v, t, pj);
        let mut dirty = false;
        for i in t + 1..r {
            if !a[i][t].is_zero() {
                let q = a[i][t].div_floor(&a[t][t]);
                add_row(&mut a, i, t, &-&q);
                add_row(&mut u, i, t, &-&q);
                dirty |= !a[i][t].is_zero();
            }
        }
        for j in t + 1..c {
            if !a[t][j].is_zero() {
                let q = a[t][j].div_floor(&a[t][t]);
                add_col(&mut a, j, t, &-&q);
                add_col(&mut v, j, t, &-&q);
                dirty |= !a[t][j].is_zero();
            }
        }
        if dirty {
            continue;
        }
        // Enforce divisibility of the trailing block by the pivot.
        let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
        if let Some(i) = bad {
            add_row(&mut a, t, i, &BigInt::one());
            add_row(&mut u, t, i, &BigInt::one());
            continue;
        }
        if a[t][t].is_negative() {
            negate_row(&mut a, t);
            negate_row(&mut u, t);
        }
        t += 1;
    }
    let snf = Snf {
        u: IntMatrix {
            row_labels: m.row_labels.clone(),
            col_labels: m.row_labels.clone(),
            data: u,
        },
        s: IntMatrix {
            row_labels: m.row_labels.clone(),
            col_labels: m.col_labels.clone(),
            data: a,
        },
        v: IntMatrix {
            row_labels: m.col_labels.clone(),
            col_labels: m.col_labels.clone(),
            data: v,
        },
    };
    verify(m, &snf).expect("Smith normal form self-check");
    snf
}

/// Re-checks every postcondition of a Smith form.
pub fn verify(m: &IntMatrix, snf: &Snf) -> std::result::Result<(), String> {
    if !snf.u.mul(m).mul(&snf.v).same_entries(&snf.s) {
        return Err("U*M*V != S".into());
    }
    if snf.u.det().abs() != BigInt::one() || snf.v.det().abs() != BigInt::one() {
        return Err("transformation not unimodular".into());
    }
    let s = &snf.s.data;
    for (i, row) in s.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if i != j && !x.is_zero() {
                return Err(format!("off-diagonal entry at ({i},{j})"));
            }
        }
    }
    let d: Vec<&BigInt> = (0..m.rows().min(m.cols())).map(|i| &s[i][i]).collect();
    for w in d.windows(2) {
        if w[0].is_negative() || (!w[0].is_zero() && !w[1].is_multiple_of(w[0])) || (w[0].is_zero() && !w[1].is_zero()) {
            return Err("diagonal fails successive divisibility".into());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(m: &IntMatrix) -> Vec<i64> {
        smith_normal_form(m)
            .diagonal()
            .iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect()
    }

    #[test]
    fn identity() {
        assert_eq!(diag(&IntMatrix::identity(3)), vec![1, 1, 1]);
    }

    #[test]
    fn two_by_two() {
        let m = IntMatrix::from_i64(&[&[2, 4], &[6, 8]]);
        assert_eq!(diag(&m), vec![2, 4]);
        assert_eq!(m.det(), BigInt::from(-8));
    }

    #[test]
    fn zero_one_by_one() {
        let m = IntMatrix::from_i64(&[&[0]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.s.data, vec![vec![BigInt::zero()]]);
        assert_eq!(snf.rank(), 0);
    }

    #[test]
    fn divisibility_repair() {
        let m = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(diag(&m), vec![1, 6]);
    }
}
