//! Integer lattices of firing vectors, the induced equivalence on
//! configurations, the max-sum lemma check and the class-maximum checker
//! for strongly connected digraphs.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::json;

use crate::dynamics::{stabilize_raw, Configuration};
use crate::error::{Error, Result};
use crate::graph::MultiDigraph;
use crate::limits;
use crate::linalg;
use crate::recurrent::{self, for_each_stable};

/// Instances handled by the definitional recurrence test.
pub const GENERAL_MAX_VERTICES: usize = 4;
pub const GENERAL_MAX_ARCS: usize = 10;

/// Subgroup of Z^d spanned by `generators`, kept in Hermite normal form:
/// echelon rows with positive pivots and entries above each pivot reduced
/// into [0, pivot).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerLattice {
    dimension: usize,
    generators: Vec<Vec<BigInt>>,
    basis: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl IntegerLattice {
    pub fn new(dimension: usize, generators: Vec<Vec<BigInt>>) -> Result<Self> {
        for g in &generators {
            if g.len() != dimension {
                return Err(Error::Dimension { expected: dimension, got: g.len() });
            }
        }
        let (basis, pivots) = hermite(dimension, generators.clone());
        Ok(Self { dimension, generators, basis, pivots })
    }

    pub fn from_i64(dimension: usize, generators: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            dimension,
            generators
                .iter()
                .map(|g| g.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// |Z^d / L| when the lattice has full rank.
    pub fn index(&self) -> Option<BigInt> {
        if self.rank() < self.dimension {
            return None;
        }
        Some(self.basis.iter().zip(&self.pivots).map(|(row, &p)| row[p].clone()).product())
    }

    /// Canonical coset representative of x.
    pub fn reduce(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.dimension {
            return Err(Error::Dimension { expected: self.dimension, got: x.len() });
        }
        let mut v = x.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let q = v[p].div_floor(&row[p]);
            if !q.is_zero() {
                for (a, b) in v.iter_mut().zip(row) {
                    *a -= &q * b;
                }
            }
        }
        Ok(v)
    }

    pub fn contains(&self, x: &[BigInt]) -> Result<bool> {
        Ok(self.reduce(x)?.iter().all(Zero::is_zero))
    }

    pub fn contains_i64(&self, x: &[i64]) -> Result<bool> {
        self.contains(&x.iter().map(|&a| BigInt::from(a)).collect::<Vec<_>>())
    }
}

fn hermite(d: usize, mut rows: Vec<Vec<BigInt>>) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..d {
        loop {
            let live: Vec<usize> = (r..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
            let Some(&best) = live.iter().min_by_key(|&&i| rows[i][col].abs()) else {
                break;
            };
            rows.swap(r, best);
            if live.len() == 1 {
                break;
            }
            for i in r + 1..rows.len() {
                let q = rows[i][col].div_floor(&rows[r][col]);
                if !q.is_zero() {
                    let (head, tail) = rows.split_at_mut(i);
                    for (a, b) in tail[0].iter_mut().zip(&head[r]) {
                        *a -= &q * b;
                    }
                }
            }
        }
        if r == rows.len() || rows[r][col].is_zero() {
            continue;
        }
        if rows[r][col].is_negative() {
            for a in rows[r].iter_mut() {
                *a = -&*a;
            }
        }
        for i in 0..r {
            let q = rows[i][col].div_floor(&rows[r][col]);
            if !q.is_zero() {
                let (head, tail) = rows.split_at_mut(r);
                for (a, b) in head[i].iter_mut().zip(&tail[0]) {
                    *a -= &q * b;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Vertices of V∖{s} in canonical order: the lattice coordinates.
pub fn coordinates(g: &MultiDigraph, s: usize) -> Vec<usize> {
    (0..g.vertex_count()).filter(|&v| v != s).collect()
}

/// Firing vectors r_i (r_ii = −(outdeg − loops), r_ij = d(v_i, v_j)) of
/// the vertices other than `s`, optionally extended by β.
pub fn firing_lattice(g: &MultiDigraph, s: usize, include_beta: bool) -> Result<IntegerLattice> {
    g.check_vertex(s)?;
    let coords = coordinates(g, s);
    let mut gens: Vec<Vec<BigInt>> = coords
        .iter()
        .map(|&v| {
            coords
                .iter()
                .map(|&w| {
                    if v == w {
                        -BigInt::from(g.out_degree(v) - g.loops_at(v))
                    } else {
                        BigInt::from(g.multiplicity(v, w))
                    }
                })
                .collect()
        })
        .collect();
    if include_beta {
        gens.push(coords.iter().map(|&w| BigInt::from(g.multiplicity(s, w))).collect());
    }
    IntegerLattice::new(coords.len(), gens)
}

fn vector_of(g: &MultiDigraph, s: usize, chips: &[u64]) -> Vec<BigInt> {
    coordinates(g, s).iter().map(|&v| BigInt::from(chips[v])).collect()
}

fn check_general(g: &MultiDigraph) -> Result<()> {
    limits::check("vertices", g.vertex_count() as u128, GENERAL_MAX_VERTICES as u128)?;
    limits::check("arcs", g.arc_count() as u128, GENERAL_MAX_ARCS as u128)?;
    if !g.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    Ok(())
}

/// Recurrence by definition, valid without the Eulerian hypothesis. With N
/// the reduced-Laplacian determinant, N·x lies in the firing lattice for
/// every integer x, so c + N·outdeg is equivalent to c and dominates the
/// saturated configuration; its stabilization is the unique recurrent of
/// the class of c.
pub fn recurrent_definitional_test(g: &MultiDigraph, s: usize, c: &Configuration) -> Result<bool> {
    check_general(g)?;
    if !c.is_on(g) || c.sink() != Some(s) {
        return Err(Error::ConfigMismatch("expected a configuration for this sink".into()));
    }
    if !crate::dynamics::is_stable(g, c)? {
        return Err(Error::NotStable);
    }
    let n = definitional_scale(g, s)?;
    definitional_raw(g, s, c.chips(), n)
}

fn definitional_scale(g: &MultiDigraph, s: usize) -> Result<u64> {
    linalg::reduced_laplacian_det(g, s)
        .to_u64()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Internal("reduced Laplacian is singular".into()))
}

fn definitional_raw(g: &MultiDigraph, s: usize, chips: &[u64], n: u64) -> Result<bool> {
    let mut work: Vec<u64> = chips
        .iter()
        .enumerate()
        .map(|(v, &x)| if v == s { 0 } else { x + n * g.out_degree(v) as u64 })
        .collect();
    let mut counts = vec![0u64; g.vertex_count()];
    stabilize_raw(g, &mut work, Some(s), &mut counts)?;
    work[s] = 0;
    Ok(work == chips)
}

/// Recurrent configurations of a strongly connected digraph for sink `s`,
/// lexicographically ordered, found with the definitional test.
pub fn recurrents_general(g: &MultiDigraph, s: usize) -> Result<Vec<Configuration>> {
    check_general(g)?;
    g.check_vertex(s)?;
    let n = definitional_scale(g, s)?;
    let mut found = Vec::new();
    for_each_stable(g, s, |chips| {
        if definitional_raw(g, s, chips, n)? {
            found.push(Configuration::from_chips(g, Some(s), chips.to_vec())?);
        }
        Ok(())
    })?;
    Ok(found)
}

/// Partition of `configs` into classes of c1 ∼ c2 ⇔ c1 − c2 ∈ lattice.
/// Classes keep input order and are listed by first member.
pub fn partition(l: &IntegerLattice, g: &MultiDigraph, s: usize, configs: &[Configuration]) -> Result<Vec<Vec<Configuration>>> {
    let mut classes: Vec<Vec<Configuration>> = Vec::new();
    let mut by_key: BTreeMap<Vec<BigInt>, usize> = BTreeMap::new();
    for c in configs {
        let key = l.reduce(&vector_of(g, s, c.chips()))?;
        match by_key.get(&key) {
            Some(&i) => classes[i].push(c.clone()),
            None => {
                by_key.insert(key, classes.len());
                classes.push(vec![c.clone()]);
            }
        }
    }
    Ok(classes)
}

/// Recurrent configurations for sink `s` grouped by lattice equivalence.
/// Eulerian graphs are enumerated by burning, others by definition.
pub fn equivalence_classes(g: &MultiDigraph, s: usize, include_beta: bool) -> Result<Vec<Vec<Configuration>>> {
    let configs = if g.is_eulerian() {
        recurrent::enumerate_recurrents(g, s)?.configs
    } else {
        recurrents_general(g, s)?
    };
    partition(&firing_lattice(g, s, include_beta)?, g, s, &configs)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SinkClassMaxima {
    pub sink: usize,
    pub recurrent_count: usize,
    /// Sorted max{outdeg(s) + Σc : c ∈ B} over classes B.
    pub class_maxima: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conjecture1Report {
    pub eulerian: bool,
    pub per_sink: Vec<SinkClassMaxima>,
    pub consistent: bool,
}

impl Conjecture1Report {
    pub fn to_json(&self, g: &MultiDigraph) -> serde_json::Value {
        let sinks: Vec<serde_json::Value> = self
            .per_sink
            .iter()
            .map(|p| {
                json!({
                    "sink": g.label(p.sink),
                    "recurrents": p.recurrent_count,
                    "classes": p.class_maxima.len(),
                    "class_maxima": p.class_maxima,
                })
            })
            .collect();
        json!({"eulerian": self.eulerian, "sinks": sinks, "consistent": self.consistent})
    }
}

/// For every sink, the multiset of class maxima under the lattice extended
/// by β. On Eulerian inputs the classes are singletons and the multisets
/// must equal the recurrent sum sequences; anything else is an internal
/// error.
pub fn conjecture1_check(g: &MultiDigraph) -> Result<Conjecture1Report> {
    if !g.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    let eulerian = g.is_eulerian();
    let mut per_sink = Vec::with_capacity(g.vertex_count());
    for s in 0..g.vertex_count() {
        let out_s = g.out_degree(s) as u64;
        let configs = if eulerian {
            recurrent::enumerate_recurrents(g, s)?.configs
        } else {
            recurrents_general(g, s)?
        };
        let classes = partition(&firing_lattice(g, s, true)?, g, s, &configs)?;
        let mut maxima: Vec<u64> = classes
            .iter()
            .map(|b| b.iter().map(|c| out_s + c.total()).max().unwrap_or(out_s))
            .collect();
        maxima.sort_unstable();
        if eulerian {
            let mut sums: Vec<u64> = configs.iter().map(|c| out_s + c.total()).collect();
            sums.sort_unstable();
            if sums != maxima {
                return Err(Error::Internal(format!(
                    "class maxima {maxima:?} differ from recurrent sums {sums:?} at `{}`",
                    g.label(s)
                )));
            }
        }
        per_sink.push(SinkClassMaxima { sink: s, recurrent_count: configs.len(), class_maxima: maxima });
    }
    let consistent = per_sink.windows(2).all(|w| w[0].class_maxima == w[1].class_maxima);
    Ok(Conjecture1Report { eulerian, per_sink, consistent })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxSumViolation {
    pub stable: Configuration,
    pub recurrent: Configuration,
}

/// Every stable d for sink `s` against the recurrent of its class: the
/// recurrent must carry at least as many chips. Returns the number of stable
/// configurations checked and any violations.
pub fn max_sum_check(g: &MultiDigraph, s: usize) -> Result<(u64, Vec<MaxSumViolation>)> {
    let rs = recurrent::enumerate_recurrents(g, s)?;
    let l = firing_lattice(g, s, false)?;
    let mut by_key: BTreeMap<Vec<BigInt>, usize> = BTreeMap::new();
    for (i, c) in rs.configs.iter().enumerate() {
        if by_key.insert(l.reduce(&vector_of(g, s, c.chips()))?, i).is_some() {
            return Err(Error::Internal("two recurrents share a class".into()));
        }
    }
    let mut checked = 0u64;
    let mut violations = Vec::new();
    for_each_stable(g, s, |chips| {
        checked += 1;
        let key = l.reduce(&vector_of(g, s, chips))?;
        let &i = by_key
            .get(&key)
            .ok_or_else(|| Error::Internal("class without a recurrent".into()))?;
        let c = &rs.configs[i];
        if chips.iter().sum::<u64>() > c.total() {
            violations.push(MaxSumViolation {
                stable: Configuration::from_chips(g, Some(s), chips.to_vec())?,
                recurrent: c.clone(),
            });
        }
        Ok(())
    })?;
    Ok((checked, violations))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(arcs: &[(&str, &str)]) -> MultiDigraph {
        MultiDigraph::from_labeled_arcs(arcs).unwrap()
    }

    fn c3() -> MultiDigraph {
        g(&[("s", "a"), ("a", "b"), ("b", "s")])
    }

    fn k3() -> MultiDigraph {
        g(&[("s", "a"), ("a", "s"), ("s", "b"), ("b", "s"), ("a", "b"), ("b", "a")])
    }

    fn lopsided() -> MultiDigraph {
        g(&[("s", "a"), ("a", "b"), ("b", "s"), ("a", "s")])
    }

    #[test]
    fn hermite_basics() {
        let l = IntegerLattice::from_i64(2, &[vec![2, 0], vec![0, 3], vec![4, 6]]).unwrap();
        assert_eq!(l.rank(), 2);
        assert_eq!(l.index(), Some(BigInt::from(6)));
        assert!(l.contains_i64(&[0, 0]).unwrap());
        assert!(l.contains_i64(&[2, -3]).unwrap());
        assert!(!l.contains_i64(&[1, 0]).unwrap());
        assert!(matches!(l.contains_i64(&[1]), Err(Error::Dimension { .. })));

        let l = IntegerLattice::from_i64(3, &[vec![1, 2, 3]]).unwrap();
        assert_eq!(l.rank(), 1);
        assert_eq!(l.index(), None);
        assert!(l.contains_i64(&[-2, -4, -6]).unwrap());
        assert!(!l.contains_i64(&[1, 2, 4]).unwrap());
    }

    #[test]
    fn generators_are_members() {
        for h in [c3(), k3(), lopsided()] {
            for s in 0..3 {
                let l = firing_lattice(&h, s, true).unwrap();
                for gen in l.generators() {
                    assert!(l.contains(gen).unwrap());
                }
                let plain = firing_lattice(&h, s, false).unwrap();
                assert_eq!(plain.index(), Some(linalg::reduced_laplacian_det(&h, s)));
            }
        }
    }

    #[test]
    fn reduction_is_canonical() {
        let l = firing_lattice(&k3(), 0, false).unwrap();
        let x = [BigInt::from(5), BigInt::from(-7)];
        let r = l.reduce(&x).unwrap();
        let y: Vec<BigInt> = x.iter().zip(&l.generators()[0]).map(|(a, b)| a + b * 3).collect();
        assert_eq!(l.reduce(&y).unwrap(), r);
    }

    #[test]
    fn eulerian_classes_are_singletons() {
        for beta in [false, true] {
            let classes = equivalence_classes(&k3(), 0, beta).unwrap();
            assert_eq!(classes.len(), 3);
            assert!(classes.iter().all(|b| b.len() == 1));
        }
    }

    #[test]
    fn definitional_examples() {
        let h = c3();
        assert!(recurrent_definitional_test(&h, 0, &Configuration::zero(&h, Some(0)).unwrap()).unwrap());
        let h = k3();
        for s in 0..3 {
            let burning = recurrent::enumerate_recurrents(&h, s).unwrap().configs;
            assert_eq!(recurrents_general(&h, s).unwrap(), burning);
        }
        let h = lopsided();
        let rec = recurrents_general(&h, 0).unwrap();
        assert_eq!(rec.len() as u64, linalg::reduced_laplacian_det(&h, 0).to_u64().unwrap());
    }

    #[test]
    fn non_eulerian_classes() {
        let h = lopsided();
        let classes = equivalence_classes(&h, 0, true).unwrap();
        let l = firing_lattice(&h, 0, true).unwrap();
        let all: Vec<&Configuration> = classes.iter().flatten().collect();
        for a in &all {
            for b in &all {
                let diff: Vec<BigInt> = (1..3)
                    .map(|v| BigInt::from(a.get(v)) - BigInt::from(b.get(v)))
                    .collect();
                let same = classes.iter().any(|k| k.contains(a) && k.contains(b));
                assert_eq!(l.contains(&diff).unwrap(), same);
            }
        }
    }

    #[test]
    fn conjecture_examples() {
        let r = conjecture1_check(&k3()).unwrap();
        assert!(r.eulerian && r.consistent);
        assert!(r.per_sink.iter().all(|p| p.class_maxima == vec![3, 3, 4]));
        let r = conjecture1_check(&c3()).unwrap();
        assert!(r.per_sink.iter().all(|p| p.class_maxima == vec![1]));
        let r = conjecture1_check(&lopsided()).unwrap();
        assert!(!r.eulerian);
        assert_eq!(r.to_json(&lopsided())["sinks"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn max_sum_on_small_graphs() {
        for h in [c3(), k3()] {
            for s in 0..3 {
                let (checked, bad) = max_sum_check(&h, s).unwrap();
                assert!(checked > 0);
                assert!(bad.is_empty());
            }
        }
    }
}
