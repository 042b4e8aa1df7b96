//! Shared oracles for the integration targets: seeded property runs and
//! brute-force models of `E_n` on concrete truncations.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::OnceLock;

use num::{BigInt, Integer, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, FileFailurePersistence, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use cstar_corr::graph::snf::{smith_normal_form, verify};
use cstar_corr::graph::IntMatrix;
use cstar_corr::labelled::{LabelledElement, LabelledSpace, SetExpr, Vertex};
use cstar_corr::scalar::int;
use cstar_corr::spheres::mirror::{build_en_space, label_e, label_f, u, w1, w2};
use cstar_corr::spheres::SphereConfig;
use cstar_corr::Error;

pub const CASES: u32 = 1000;
const SEED: [u8; 32] = *b"labelled-spaces-fixed-seed-00001";

/// Runs `test` on `CASES` inputs drawn from `strategy` with a fixed seed.
pub fn run_property<S: Strategy>(
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let config = Config {
        cases: CASES,
        failure_persistence: Some(Box::new(FileFailurePersistence::Off)),
        max_global_rejects: CASES * 4,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &SEED));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

// ---- labelled engine on E_2 -------------------------------------------------

pub struct Fixture {
    pub space: LabelledSpace,
    pub labels: Vec<String>,
    pub sets: Vec<SetExpr>,
}

pub fn e2() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let space = build_en_space(&SphereConfig::new(2, 3).unwrap()).unwrap();
        let labels = space.labels();
        let sets = space.members().iter().map(|m| m.set.clone()).filter(|s| !s.is_empty()).collect();
        Fixture { space, labels, sets }
    })
}

fn word(f: &Fixture, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|i| f.labels[i % f.labels.len()].clone()).collect()
}

/// A generator `s_a`, `s_a*` or `p_A`, by kind and index.
pub type Letter = (u8, usize);

/// A combination of products of generators, with small integer weights.
pub type ElementSpec = Vec<(Vec<Letter>, i8)>;

pub fn element_spec() -> impl Strategy<Value = ElementSpec> {
    let letter = (0u8..3, 0usize..256);
    prop::collection::vec((prop::collection::vec(letter, 1..=2), -3i8..=3), 1..=4)
}

fn letter(f: &Fixture, (kind, i): Letter) -> Result<LabelledElement, Error> {
    let s = &f.space;
    match kind {
        0 => s.s(&f.labels[i % f.labels.len()]),
        1 => Ok(s.s(&f.labels[i % f.labels.len()])?.star()),
        _ => s.p(&f.sets[i % f.sets.len()]),
    }
}

pub fn element(f: &Fixture, spec: &ElementSpec) -> Result<LabelledElement, Error> {
    let mut acc = f.space.zero_element();
    for (mono, c) in spec {
        let mut m = letter(f, mono[0])?;
        for &l in &mono[1..] {
            m = f.space.mul(&m, &letter(f, l)?)?;
        }
        acc = acc.add(&m.scale(&int(i64::from(*c))))?;
    }
    Ok(acc)
}

/// Horizon errors mark inputs beyond the instantiated range; they are
/// rejected, every other error fails the case.
pub fn lift<T>(r: Result<T, Error>) -> Result<T, TestCaseError> {
    match r {
        Ok(v) => Ok(v),
        Err(Error::Horizon(m)) => Err(TestCaseError::reject(m)),
        Err(e) => Err(TestCaseError::fail(e.to_string())),
    }
}

/// Fails a run in which fewer than `MIN_NONZERO` cases exercised a
/// nonzero product.
const MIN_NONZERO: usize = 200;

fn require_coverage(r: Result<(), String>, nonzero: &AtomicUsize) -> Result<(), String> {
    r?;
    let k = nonzero.load(Ordering::Relaxed);
    if k < MIN_NONZERO {
        return Err(format!("only {k} of {CASES} cases had a nonzero product"));
    }
    Ok(())
}

pub fn prop_associativity() -> Result<(), String> {
    let f = e2();
    let nonzero = AtomicUsize::new(0);
    let r = run_property((element_spec(), element_spec(), element_spec()), |(x, y, z)| {
        let s = &f.space;
        let (x, y, z) = (lift(element(f, &x))?, lift(element(f, &y))?, lift(element(f, &z))?);
        let lhs = lift(s.mul(&lift(s.mul(&x, &y))?, &z))?;
        let rhs = lift(s.mul(&x, &lift(s.mul(&y, &z))?))?;
        prop_assert!(lift(s.equals(&lhs, &rhs))?, "(xy)z = {} but x(yz) = {}", lhs, rhs);
        if !lhs.is_zero() {
            nonzero.fetch_add(1, Ordering::Relaxed);
        }
        Ok(())
    });
    require_coverage(r, &nonzero)
}

pub fn prop_involution() -> Result<(), String> {
    let f = e2();
    let nonzero = AtomicUsize::new(0);
    let r = run_property((element_spec(), element_spec()), |(x, y)| {
        let s = &f.space;
        let (x, y) = (lift(element(f, &x))?, lift(element(f, &y))?);
        let lhs = lift(s.mul(&x, &y))?.star();
        let rhs = lift(s.mul(&y.star(), &x.star()))?;
        prop_assert!(lift(s.equals(&lhs, &rhs))?);
        prop_assert_eq!(x.star().star(), x);
        if !lhs.is_zero() {
            nonzero.fetch_add(1, Ordering::Relaxed);
        }
        Ok(())
    });
    require_coverage(r, &nonzero)
}

pub fn prop_grading() -> Result<(), String> {
    let f = e2();
    let nonzero = AtomicUsize::new(0);
    let mono = prop::collection::vec((0u8..3, 0usize..256), 1..=3);
    let r = run_property((mono.clone(), mono), |(x, y)| {
        let s = &f.space;
        let (x, y) = (lift(element(f, &vec![(x, 1)]))?, lift(element(f, &vec![(y, 1)]))?);
        let xy = lift(s.mul(&x, &y))?;
        if let (Some(dx), Some(dy), false) = (x.degree(), y.degree(), xy.is_zero()) {
            prop_assert_eq!(xy.degree(), Some(dx + dy));
            nonzero.fetch_add(1, Ordering::Relaxed);
        }
        Ok(())
    });
    require_coverage(r, &nonzero)
}

pub fn prop_cocycle() -> Result<(), String> {
    let f = e2();
    let g = f.space.graph();
    let spec = (0usize..256, prop::collection::vec(0usize..64, 0..=3), prop::collection::vec(0usize..64, 0..=3));
    run_property(spec, |(a, al, be)| {
        let a = &f.sets[a % f.sets.len()];
        let (al, be) = (word(f, &al), word(f, &be));
        let mut whole = al.clone();
        whole.extend(be.iter().cloned());
        let lhs = lift(g.relative_range_word(&lift(g.relative_range_word(a, &al))?, &be))?;
        let rhs = lift(g.relative_range_word(a, &whole))?;
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })
}

fn set_expr() -> impl Strategy<Value = SetExpr> {
    let names = ["a", "b", "c"];
    (
        prop::collection::btree_set(0usize..3, 0..=3),
        prop::collection::btree_set(1u32..12, 0..=4),
        prop::option::of(1u32..12),
        prop::option::of(1u32..12),
    )
        .prop_map(move |(named, v, tv, tw)| {
            let mut atoms: BTreeSet<Vertex> = named.into_iter().map(|i| Vertex::named(names[i])).collect();
            atoms.extend(v.iter().map(|&j| Vertex::indexed("v", j)));
            atoms.extend(v.iter().map(|&j| Vertex::indexed("w", j + 1)));
            let mut tails = std::collections::BTreeMap::new();
            if let Some(k) = tv {
                tails.insert("v".to_string(), k);
            }
            if let Some(k) = tw {
                tails.insert("w".to_string(), k);
            }
            SetExpr::new(atoms, tails)
        })
}

/// Concrete members with index at most `n`, computed without the library's
/// truncation.
pub fn concretize(s: &SetExpr, n: u32) -> BTreeSet<Vertex> {
    let mut out: BTreeSet<Vertex> = s.atoms().iter().filter(|v| v.index.is_none_or(|j| j <= n)).cloned().collect();
    for (b, &k) in s.tails() {
        for j in k..=n {
            out.insert(Vertex::indexed(b.clone(), j));
        }
    }
    out
}

pub fn prop_set_truncation() -> Result<(), String> {
    const N: u32 = 20;
    run_property((set_expr(), set_expr()), |(a, b)| {
        let (ca, cb) = (concretize(&a, N), concretize(&b, N));
        prop_assert_eq!(a.truncate(N), ca.clone());
        prop_assert_eq!(concretize(&a.union(&b), N), &ca | &cb);
        prop_assert_eq!(concretize(&a.intersection(&b), N), &ca & &cb);
        prop_assert_eq!(concretize(&a.difference(&b), N), &ca - &cb);
        prop_assert_eq!(a.is_subset(&b), ca.is_subset(&cb));
        prop_assert_eq!(a.is_empty(), ca.is_empty());
        Ok(())
    })
}

/// Gcd of all `k × k` minors, by cofactor expansion.
fn determinantal_divisor(m: &[Vec<BigInt>], k: usize) -> BigInt {
    fn det(rows: &[Vec<BigInt>]) -> BigInt {
        if rows.len() == 1 {
            return rows[0][0].clone();
        }
        let mut acc = BigInt::zero();
        for c in 0..rows.len() {
            let minor: Vec<Vec<BigInt>> = rows[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
                .collect();
            let t = &rows[0][c] * det(&minor);
            acc = if c % 2 == 0 { acc + t } else { acc - t };
        }
        acc
    }
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        (k - 1..n)
            .flat_map(|last| {
                subsets(last, k - 1).into_iter().map(move |mut s| {
                    s.push(last);
                    s
                })
            })
            .collect()
    }
    let mut g = BigInt::zero();
    for rs in subsets(m.len(), k) {
        for cs in subsets(m[0].len(), k) {
            let sub: Vec<Vec<BigInt>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect()).collect();
            g = g.gcd(&det(&sub));
        }
    }
    g
}

pub fn prop_snf() -> Result<(), String> {
    let spec = (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r));
    run_property(spec, |rows| {
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let m = IntMatrix::from_i64(&refs);
        let snf = smith_normal_form(&m);
        prop_assert!(verify(&m, &snf).is_ok(), "{:?}", verify(&m, &snf));
        let d = snf.diagonal();
        for w in d.windows(2) {
            prop_assert!(w[0].is_zero() && w[1].is_zero() || w[1].is_multiple_of(&w[0]));
        }
        let mut prod = BigInt::from(1);
        for k in 1..=rows.len().min(rows[0].len()) {
            prod *= d.get(k - 1).cloned().unwrap_or_default().abs();
            prop_assert_eq!(&prod, &determinantal_divisor(&m.data, k));
        }
        Ok(())
    })
}

// ---- brute-force E_n ----------------------------------------------------------

/// Explicit edges `(src, dst, label)` of `E_n` with every endpoint index at
/// most `t`.
pub fn concrete_en(n: usize, t: u32) -> Vec<(Vertex, Vertex, String)> {
    let v = |j: u32| Vertex::indexed("v", j);
    let mut e = vec![];
    for i in 1..n {
        for j in i..n {
            e.push((u(i), u(j), label_e(i, j)));
        }
        e.push((u(i), w1(), label_f(i)));
        e.push((u(i), w2(), label_f(i)));
        for j in 1..=t {
            e.push((u(i), v(j), label_f(i)));
        }
    }
    e.push((w2(), v(1), "g".into()));
    for j in 2..=t {
        e.push((v(j - 1), v(j), "g".into()));
    }
    for j in 1..=t {
        e.push((v(j), w1(), "h".into()));
    }
    e
}

pub fn brute_range(edges: &[(Vertex, Vertex, String)], a: &BTreeSet<Vertex>, label: &str) -> BTreeSet<Vertex> {
    edges.iter().filter(|(s, _, l)| l == label && a.contains(s)).map(|(_, d, _)| d.clone()).collect()
}

pub fn window(s: &BTreeSet<Vertex>, w: u32) -> BTreeSet<Vertex> {
    s.iter().filter(|v| v.index.is_none_or(|j| j <= w)).cloned().collect()
}

/// Closure of `gens` under unions, intersections and relative ranges in a
/// finite edge list.
pub fn brute_closure(edges: &[(Vertex, Vertex, String)], gens: &[BTreeSet<Vertex>]) -> BTreeSet<BTreeSet<Vertex>> {
    let labels: BTreeSet<String> = edges.iter().map(|(_, _, l)| l.clone()).collect();
    let mut fam: BTreeSet<BTreeSet<Vertex>> = gens.iter().cloned().collect();
    for l in &labels {
        fam.insert(edges.iter().filter(|(_, _, m)| m == l).map(|(_, d, _)| d.clone()).collect());
    }
    let sinks: BTreeSet<Vertex> = edges
        .iter()
        .map(|(_, d, _)| d.clone())
        .filter(|d| !edges.iter().any(|(s, _, _)| s == d))
        .collect();
    fam.extend(sinks.into_iter().map(|v| BTreeSet::from([v])));
    loop {
        let cur: Vec<BTreeSet<Vertex>> = fam.iter().cloned().collect();
        let mut next = fam.clone();
        for a in &cur {
            for l in &labels {
                next.insert(brute_range(edges, a, l));
            }
            for b in &cur {
                next.insert(a | b);
                next.insert(a & b);
            }
        }
        if next.len() == fam.len() {
            return fam;
        }
        fam = next;
    }
}

/// Compares the symbolic `E_n` space at truncation `m` with brute force on
/// a concrete truncation, over the index window `j ≤ m`. Returns the number
/// of comparisons made; the error lists the first disagreement.
pub fn cross_validate(n: usize, m: usize) -> Result<usize, String> {
    let cfg = SphereConfig::new(n, m).unwrap();
    let space = build_en_space(&cfg).map_err(|e| e.to_string())?;
    let g = space.graph();
    let w = m as u32;
    let t = w + 8;
    let edges = concrete_en(n, t);
    let mut count = 0;
    let members: Vec<SetExpr> = space.members().iter().map(|x| x.set.clone()).collect();
    let labels = space.labels();

    // relative ranges along words of length one and two
    for a in &members {
        let ca = concretize(a, t);
        for l1 in &labels {
            let sym = g.relative_range(a, l1).map_err(|e| e.to_string())?;
            let brute = brute_range(&edges, &ca, l1);
            if concretize(&sym, w) != window(&brute, w) {
                return Err(format!("r({a}, {l1}) = {sym} disagrees with {brute:?}"));
            }
            count += 1;
            for l2 in &labels {
                let word = [l1.clone(), l2.clone()];
                let sym = g.relative_range_word(a, &word).map_err(|e| e.to_string())?;
                let brute = brute_range(&edges, &brute_range(&edges, &ca, l1), l2);
                if concretize(&sym, w) != window(&brute, w) {
                    return Err(format!("r({a}, {l1}{l2}) = {sym} disagrees with {brute:?}"));
                }
                count += 1;
            }
        }
    }

    // the accommodating family, seen through the window
    let gens: Vec<BTreeSet<Vertex>> = space.generators().iter().map(|s| concretize(s, t)).collect();
    let brute: BTreeSet<BTreeSet<Vertex>> = brute_closure(&edges, &gens)
        .iter()
        .map(|s| window(s, w))
        .filter(|s| !s.is_empty())
        .collect();
    let sym: BTreeSet<BTreeSet<Vertex>> = members.iter().map(|s| concretize(s, w)).filter(|s| !s.is_empty()).collect();
    if brute != sym {
        let only_b: Vec<_> = brute.difference(&sym).take(3).collect();
        let only_s: Vec<_> = sym.difference(&brute).take(3).collect();
        return Err(format!("closures differ: brute only {only_b:?}, symbolic only {only_s:?}"));
    }
    count += sym.len();

    // relation instances in the engine; instances reaching past the
    // horizon are skipped
    let emitted = |c: &BTreeSet<Vertex>| -> BTreeSet<String> {
        edges.iter().filter(|(s, _, _)| c.contains(s)).map(|(_, _, l)| l.clone()).collect()
    };
    let mut skipped = 0;
    let mut instance = |name: String, f: &dyn Fn() -> Result<bool, Error>| -> Result<(), String> {
        match f() {
            Ok(true) => {
                count += 1;
                Ok(())
            }
            Ok(false) => Err(name),
            Err(Error::Horizon(_)) => {
                skipped += 1;
                Ok(())
            }
            Err(e) => Err(format!("{name}: {e}")),
        }
    };
    let s = &space;
    for a in &members {
        for b in &members {
            instance(format!("p_A p_B = p_(A∩B) at A = {a}, B = {b}"), &|| {
                s.equals(&s.mul(&s.p(a)?, &s.p(b)?)?, &s.p(&a.intersection(b))?)
            })?;
        }
        for l in &labels {
            instance(format!("p_A s_a = s_a p_r(A,a) at A = {a}, a = {l}"), &|| {
                let sa = s.s(l)?;
                let r = g.relative_range(a, l)?;
                s.equals(&s.mul(&s.p(a)?, &sa)?, &s.mul(&sa, &s.p(&r)?)?)
            })?;
            for l2 in &labels {
                instance(format!("s_a* p_A s_b at A = {a}, a = {l}, b = {l2}"), &|| {
                    let lhs = s.mul(&s.mul(&s.s(l)?.star(), &s.p(a)?)?, &s.s(l2)?)?;
                    let rhs = if l == l2 { s.p(&g.relative_range(a, l)?)? } else { s.zero_element() };
                    s.equals(&lhs, &rhs)
                })?;
            }
        }
        // relation (4) where it applies: no sinks, finitely many labels
        let ca = concretize(a, t);
        if a.contains(&w1()) || ca.is_empty() {
            continue;
        }
        instance(format!("relation (4) at A = {a}"), &|| {
            let mut sum = s.zero_element();
            for l in emitted(&ca) {
                let sl = s.s(&l)?;
                let piece = s.mul(&s.mul(&sl, &s.p(&g.relative_range(a, &l)?)?)?, &sl.star())?;
                sum = sum.add(&piece)?;
            }
            s.equals(&s.p(a)?, &sum)
        })?;
    }
    if skipped * 4 > count {
        return Err(format!("{skipped} relation instances beyond the horizon against {count} checked"));
    }
    Ok(count)
}
