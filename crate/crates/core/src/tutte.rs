//! The generating polynomial T_G(y) = Σ y^level over recurrent
//! configurations, its evaluations, and checkers for its recursive formulas.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::graph::{index_after_removal, MultiDigraph};
use crate::limits;
use crate::linalg;
use crate::poly::LaurentPolynomial;
use crate::recurrent::{self, kappa, RecurrentSet};

pub fn tutte_from_set(rs: &RecurrentSet) -> LaurentPolynomial {
    LaurentPolynomial::from_exponents(rs.levels.iter().map(|&l| l as i64))
}

pub fn tutte_gen(g: &MultiDigraph, s: usize) -> Result<LaurentPolynomial> {
    Ok(tutte_from_set(&recurrent::enumerate_recurrents(g, s)?))
}

/// T_G(y) computed with the first vertex as sink.
pub fn tutte(g: &MultiDigraph) -> Result<LaurentPolynomial> {
    if g.vertex_count() == 0 {
        return Err(Error::NotEulerian);
    }
    tutte_gen(g, 0)
}

/// Number of spanning arborescences oriented toward `s`, by the matrix-tree
/// theorem.
pub fn arborescence_count(g: &MultiDigraph, s: usize) -> Result<BigInt> {
    g.check_vertex(s)?;
    Ok(linalg::reduced_laplacian_det(g, s))
}

/// Maximum acyclic arc sets are exactly the largest forward-arc sets of
/// vertex orderings; counts the distinct ones whose only sink is `s`.
pub fn max_acyclic_unique_sink_count(g: &MultiDigraph, s: usize) -> Result<BigInt> {
    g.check_vertex(s)?;
    let n = g.vertex_count();
    let perms: u128 = (1..=n as u128).product();
    limits::check("vertex orderings", perms, limits::cell_cap() as u128)?;

    let mut best = 0usize;
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut pos = vec![0usize; n];
    let mut order: Vec<usize> = (0..n).collect();
    let mut visit = |order: &[usize]| {
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let forward: Vec<usize> = (0..g.arc_count())
            .filter(|&e| {
                let a = g.arcs()[e];
                pos[a.tail] < pos[a.head]
            })
            .collect();
        if forward.len() > best {
            best = forward.len();
            found.clear();
        }
        if forward.len() == best {
            found.insert(forward);
        }
    };
    permute(&mut order, 0, &mut visit);

    let count = found
        .iter()
        .filter(|set| {
            let mut has_out = vec![false; n];
            for &e in set.iter() {
                has_out[g.arcs()[e].tail] = true;
            }
            (0..n).filter(|&v| !has_out[v]).eq(std::iter::once(s))
        })
        .count();
    Ok(BigInt::from(count))
}

fn permute(items: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// T(1, y) of an undirected multigraph given as a symmetric digraph, by
/// classical deletion–contraction on parallel-edge bundles.
#[allow(clippy::needless_range_loop)]
pub fn undirected_tutte_oracle(g: &MultiDigraph) -> Result<LaurentPolynomial> {
    let n = g.vertex_count();
    let mut m = vec![vec![0u64; n]; n];
    let mut loops = 0u64;
    for a in g.arcs() {
        if a.is_loop() {
            loops += 1;
        } else {
            m[a.tail][a.head] += 1;
        }
    }
    for u in 0..n {
        for v in 0..u {
            if m[u][v] != m[v][u] {
                return Err(Error::Hypothesis(format!(
                    "not undirected: d({0},{1}) = {2} but d({1},{0}) = {3}",
                    g.label(u),
                    g.label(v),
                    m[u][v],
                    m[v][u]
                )));
            }
        }
    }
    if !components_of(&m).windows(2).all(|w| w[0] == w[1]) {
        return Err(Error::Hypothesis("graph is not connected".into()));
    }
    Ok(LaurentPolynomial::monomial(1, loops as i64) * bundle_tutte(m))
}

#[allow(clippy::needless_range_loop)]
fn components_of(m: &[Vec<u64>]) -> Vec<usize> {
    let n = m.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for u in 0..n {
        for v in u + 1..n {
            if m[u][v] > 0 {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                parent[a] = b;
            }
        }
    }
    (0..n).map(|v| find(&mut parent, v)).collect()
}

fn bundle_tutte(m: Vec<Vec<u64>>) -> LaurentPolynomial {
    let n = m.len();
    let Some((u, v)) = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .find(|&(u, v)| m[u][v] > 0)
    else {
        return LaurentPolynomial::one();
    };
    let k = m[u][v];
    let map: Vec<usize> = (0..n)
        .map(|x| match x {
            x if x == v => u,
            x if x > v => x - 1,
            x => x,
        })
        .collect();
    let mut merged = vec![vec![0u64; n - 1]; n - 1];
    for a in 0..n {
        for b in 0..n {
            if map[a] != map[b] {
                merged[map[a]][map[b]] += m[a][b];
            }
        }
    }
    let contracted = LaurentPolynomial::geometric(k) * bundle_tutte(merged);
    let mut without = m;
    without[u][v] = 0;
    without[v][u] = 0;
    let comps = components_of(&without);
    if comps[u] != comps[v] {
        contracted
    } else {
        &bundle_tutte(without) + &contracted
    }
}

/// The five recursive formulas for T_G(y).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RecursionKind {
    Loop,
    BridgeNoReverse,
    BridgeReverse,
    DelContract,
    Mobius,
}

impl RecursionKind {
    pub const ALL: [RecursionKind; 5] = [
        RecursionKind::Loop,
        RecursionKind::BridgeNoReverse,
        RecursionKind::BridgeReverse,
        RecursionKind::DelContract,
        RecursionKind::Mobius,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RecursionKind::Loop => "loop",
            RecursionKind::BridgeNoReverse => "bridge_no_reverse",
            RecursionKind::BridgeReverse => "bridge_reverse",
            RecursionKind::DelContract => "del_contract",
            RecursionKind::Mobius => "mobius",
        }
    }
}

impl fmt::Display for RecursionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Site {
    Arc(usize),
    Sink(usize),
}

/// One instance of a recursive formula with both sides evaluated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub name: &'static str,
    pub lhs: LaurentPolynomial,
    pub rhs: LaurentPolynomial,
}

impl Identity {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

fn k(g: &MultiDigraph) -> Result<i64> {
    Ok(kappa(g)? as i64)
}

fn arc_site(g: &MultiDigraph, site: Site) -> Result<usize> {
    match site {
        Site::Arc(e) => {
            g.arc(e)?;
            Ok(e)
        }
        Site::Sink(_) => Err(Error::Hypothesis("this formula needs an arc site".into())),
    }
}

/// Evaluates both sides of every identity stated for `kind` at `site`.
pub fn recursion_identities(g: &MultiDigraph, kind: RecursionKind, site: Site) -> Result<Vec<Identity>> {
    g.require_eulerian()?;
    let t_g = tutte(g)?;
    let y = LaurentPolynomial::y();
    match kind {
        RecursionKind::Loop => {
            let e = arc_site(g, site)?;
            if !g.arc(e)?.is_loop() {
                return Err(Error::Hypothesis(format!("arc {e} is not a loop")));
            }
            let rhs = &y * &tutte(&g.delete_arcs(&[e])?)?;
            Ok(vec![Identity { name: "T_G = y T_(G-e)", lhs: t_g, rhs }])
        }
        RecursionKind::BridgeNoReverse | RecursionKind::BridgeReverse => {
            let e = arc_site(g, site)?;
            if g.arc(e)?.is_loop() || !g.is_bridge(e)? {
                return Err(Error::Hypothesis(format!("arc {e} is not a bridge")));
            }
            let reverse = g.reverse_partner(e)?;
            let (h, _) = g.contract_arc(e)?;
            let t_h = tutte(&h)?;
            match (kind, reverse) {
                (RecursionKind::BridgeNoReverse, None) => {
                    Ok(vec![Identity { name: "T_G = T_(G/e)", lhs: t_g, rhs: t_h }])
                }
                (RecursionKind::BridgeReverse, Some(r)) => {
                    let r_in_h = index_after_removal(r, e).expect("reverse differs from e");
                    let t_trim = tutte(&h.delete_arcs(&[r_in_h])?)?;
                    Ok(vec![
                        Identity { name: "y T_G = T_(G/e)", lhs: &y * &t_g, rhs: t_h },
                        Identity { name: "T_G = T_((G/e)-e')", lhs: t_g, rhs: t_trim },
                    ])
                }
                (RecursionKind::BridgeNoReverse, Some(_)) => {
                    Err(Error::Hypothesis(format!("bridge {e} has a reverse arc")))
                }
                _ => Err(Error::Hypothesis(format!("bridge {e} has no reverse arc"))),
            }
        }
        RecursionKind::DelContract => {
            let e = arc_site(g, site)?;
            if g.arc(e)?.is_loop() {
                return Err(Error::Hypothesis(format!("arc {e} is a loop")));
            }
            if g.is_bridge(e)? {
                return Err(Error::Hypothesis(format!("arc {e} is a bridge")));
            }
            let r = g
                .reverse_partner(e)?
                .ok_or_else(|| Error::Hypothesis(format!("arc {e} has no reverse arc")))?;
            let d = g.delete_arcs(&[e, r])?;
            let (h, _) = g.contract_arc(e)?;
            let kg = k(g)?;
            let t_d = tutte(&d)?;
            let t_h = tutte(&h)?;
            let rhs = &t_d.shift(1 + k(&d)? - kg) + &t_h.shift(k(&h)? - kg);
            let mut out = vec![Identity { name: "T_G = y^a T_(G-{e,e'}) + y^b T_(G/e)", lhs: t_g.clone(), rhs }];
            if g.is_undirected() {
                let a = g.arc(e)?;
                let r_in_h = index_after_removal(r, e).expect("reverse differs from e");
                let t_trim = tutte(&h.delete_arcs(&[r_in_h])?)?;
                let exp = 1 - g.multiplicity(a.tail, a.head) as i64;
                out.push(Identity {
                    name: "T_G = T_(G-{e,e'}) + y^(1-d) T_((G/e)-e')",
                    lhs: t_g,
                    rhs: &t_d + &t_trim.shift(exp),
                });
            }
            Ok(out)
        }
        RecursionKind::Mobius => {
            let s = match site {
                Site::Sink(s) => {
                    g.check_vertex(s)?;
                    s
                }
                Site::Arc(_) => return Err(Error::Hypothesis("Möbius formula needs a sink site".into())),
            };
            let nbrs: Vec<(usize, usize)> = g.out_neighbors(s).to_vec();
            if nbrs.is_empty() {
                return Err(Error::Hypothesis(format!("`{}` has no out-neighbor", g.label(s))));
            }
            let kg = k(g)?;
            let mut rhs = LaurentPolynomial::zero();
            for mask in 1u64..(1u64 << nbrs.len()) {
                let w: Vec<(usize, usize)> = (0..nbrs.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| nbrs[i])
                    .collect();
                let term = pw_closed_form_inner(g, s, &w, kg)?;
                if w.len() % 2 == 1 {
                    rhs = &rhs + &term;
                } else {
                    rhs = &rhs - &term;
                }
            }
            Ok(vec![Identity { name: "T_G = sum_W (-1)^(|W|+1) P_W", lhs: t_g, rhs }])
        }
    }
}

/// True iff every identity of `kind` holds at `site`.
pub fn check_recursion(g: &MultiDigraph, kind: RecursionKind, site: Site) -> Result<bool> {
    Ok(recursion_identities(g, kind, site)?.iter().all(Identity::holds))
}

/// Every (kind, site) whose hypotheses hold in `g`.
pub fn applicable_sites(g: &MultiDigraph) -> Result<Vec<(RecursionKind, Site)>> {
    g.require_eulerian()?;
    let mut out = Vec::new();
    for e in 0..g.arc_count() {
        let a = g.arc(e)?;
        let kind = if a.is_loop() {
            RecursionKind::Loop
        } else if g.is_bridge(e)? {
            if g.reverse_partner(e)?.is_some() {
                RecursionKind::BridgeReverse
            } else {
                RecursionKind::BridgeNoReverse
            }
        } else if g.reverse_partner(e)?.is_some() {
            RecursionKind::DelContract
        } else {
            continue;
        };
        out.push((kind, Site::Arc(e)));
    }
    for s in 0..g.vertex_count() {
        if !g.out_neighbors(s).is_empty() {
            out.push((RecursionKind::Mobius, Site::Sink(s)));
        }
    }
    Ok(out)
}

fn check_w(g: &MultiDigraph, s: usize, w: &[usize]) -> Result<Vec<(usize, usize)>> {
    g.check_vertex(s)?;
    if w.is_empty() {
        return Err(Error::Hypothesis("W must be nonempty".into()));
    }
    let mut out = Vec::with_capacity(w.len());
    for (i, &v) in w.iter().enumerate() {
        g.check_vertex(v)?;
        if w[..i].contains(&v) {
            return Err(Error::Hypothesis(format!("`{}` repeated in W", g.label(v))));
        }
        let d = g.multiplicity(s, v);
        if v == s || d == 0 {
            return Err(Error::Hypothesis(format!(
                "`{}` is not an out-neighbor of `{}`",
                g.label(v),
                g.label(s)
            )));
        }
        out.push((v, d));
    }
    Ok(out)
}

/// Σ y^level over recurrent c (sink s) whose support contains all of W.
pub fn p_w(g: &MultiDigraph, s: usize, w: &[usize]) -> Result<LaurentPolynomial> {
    if !w.is_empty() {
        check_w(g, s, w)?;
    }
    let rs = recurrent::enumerate_recurrents(g, s)?;
    Ok(p_w_from_set(g, &rs, w))
}

fn p_w_from_set(g: &MultiDigraph, rs: &RecurrentSet, w: &[usize]) -> LaurentPolynomial {
    let s = rs.sink;
    LaurentPolynomial::from_exponents(
        rs.configs
            .iter()
            .zip(&rs.levels)
            .filter(|(c, _)| {
                w.iter()
                    .all(|&v| c.get(v) + g.multiplicity(s, v) as u64 >= g.out_degree(v) as u64)
            })
            .map(|(_, &l)| l as i64),
    )
}

/// y^(κ(H) − κ(G) − d(s,W)) · ∏_{v∈W} (1 + … + y^(d(s,v)−1)) · T_H with
/// H = G/(W ∪ {s}).
pub fn p_w_closed_form(g: &MultiDigraph, s: usize, w: &[usize]) -> Result<LaurentPolynomial> {
    g.require_eulerian()?;
    let w = check_w(g, s, w)?;
    pw_closed_form_inner(g, s, &w, k(g)?)
}

fn pw_closed_form_inner(g: &MultiDigraph, s: usize, w: &[(usize, usize)], kg: i64) -> Result<LaurentPolynomial> {
    let mut merged: Vec<usize> = w.iter().map(|&(v, _)| v).collect();
    merged.push(s);
    let (h, s_new) = g.contract_vertices(&merged)?;
    let d_sw: usize = w.iter().map(|&(_, d)| d).sum();
    let mut factor = LaurentPolynomial::one();
    for &(_, d) in w {
        factor = factor * LaurentPolynomial::geometric(d as u64);
    }
    let t_h = tutte_gen(&h, s_new)?;
    Ok((factor * t_h).shift(k(&h)? - kg - d_sw as i64))
}

/// Filtered sum P_W against its closed form.
pub fn pw_closed_form_check(g: &MultiDigraph, s: usize, w: &[usize]) -> Result<bool> {
    Ok(p_w(g, s, w)? == p_w_closed_form(g, s, w)?)
}

/// Σ_{W ⊆ N(s)} (−1)^|W| P_W, which must vanish.
pub fn mobius_self_test(g: &MultiDigraph, s: usize) -> Result<LaurentPolynomial> {
    let rs = recurrent::enumerate_recurrents(g, s)?;
    let nbrs: Vec<usize> = g.out_neighbors(s).iter().map(|&(v, _)| v).collect();
    limits::check("out-neighbor subsets", 1u128 << nbrs.len().min(127), limits::cell_cap() as u128)?;
    let mut total = LaurentPolynomial::zero();
    for mask in 0u64..(1u64 << nbrs.len()) {
        let w: Vec<usize> = (0..nbrs.len()).filter(|i| mask >> i & 1 == 1).map(|i| nbrs[i]).collect();
        let term = p_w_from_set(g, &rs, &w);
        total = if w.len().is_multiple_of(2) { &total + &term } else { &total - &term };
    }
    Ok(total)
}

/// Exact value of a polynomial at an integer point, as a big integer when
/// the value is integral.
pub fn eval_integer(p: &LaurentPolynomial, y: i64) -> Result<BigInt> {
    let v = p.eval_int(y)?;
    if v.is_integer() {
        Ok(v.to_integer())
    } else {
        Err(Error::Internal(format!("{p} at {y} is not an integer")))
    }
}
