//! Brute-force reference implementations. Nothing here calls the main-path
//! algorithms; each oracle works from the arc list directly.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;

use crate::dynamics::Configuration;
use crate::error::{Error, Result};
use crate::graph::MultiDigraph;
use crate::limits;

pub const ARBORESCENCE_MAX_VERTICES: usize = 6;
pub const ACYCLIC_MAX_ARCS: usize = 18;
pub const RECURRENT_MAX_VERTICES: usize = 4;

/// Spanning arborescences toward `s`: every other vertex picks one
/// non-loop out-arc and all picks must lead to `s`.
pub fn brute_arborescences(g: &MultiDigraph, s: usize) -> Result<BigInt> {
    g.check_vertex(s)?;
    let n = g.vertex_count();
    limits::check("vertices", n as u128, ARBORESCENCE_MAX_VERTICES as u128)?;
    let arcs = g.arcs();
    let choices: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            if v == s {
                Vec::new()
            } else {
                (0..arcs.len()).filter(|&e| arcs[e].tail == v && arcs[e].head != v).collect()
            }
        })
        .collect();
    let others: Vec<usize> = (0..n).filter(|&v| v != s).collect();
    if others.iter().any(|&v| choices[v].is_empty()) {
        return Ok(BigInt::from(0));
    }
    let mut pick = vec![0usize; n];
    let mut count: u64 = 0;
    'outer: loop {
        let mut parent = vec![usize::MAX; n];
        for &v in &others {
            parent[v] = arcs[choices[v][pick[v]]].head;
        }
        let reaches = others.iter().all(|&v| {
            let mut x = v;
            for _ in 0..n {
                if x == s {
                    return true;
                }
                x = parent[x];
            }
            x == s
        });
        if reaches {
            count += 1;
        }
        for &v in others.iter().rev() {
            pick[v] += 1;
            if pick[v] < choices[v].len() {
                continue 'outer;
            }
            pick[v] = 0;
        }
        break;
    }
    Ok(BigInt::from(count))
}

/// Over all arc subsets: keep the acyclic ones of largest size and count
/// those whose only vertex without outgoing arcs is `s`.
pub fn brute_acyclic_sets(g: &MultiDigraph, s: usize) -> Result<BigInt> {
    g.check_vertex(s)?;
    let m = g.arc_count();
    limits::check("arcs", m as u128, ACYCLIC_MAX_ARCS as u128)?;
    let n = g.vertex_count();
    let arcs = g.arcs();
    let mut best = 0u32;
    let mut count = 0u64;
    for mask in 0u32..(1u32 << m) {
        let size = mask.count_ones();
        if size < best || !acyclic(n, arcs, mask) {
            continue;
        }
        let mut has_out = vec![false; n];
        for e in (0..m).filter(|e| mask >> e & 1 == 1) {
            has_out[arcs[e].tail] = true;
        }
        let unique = (0..n).filter(|&v| !has_out[v]).collect::<Vec<_>>() == [s];
        if size > best {
            best = size;
            count = 0;
        }
        if unique {
            count += 1;
        }
    }
    Ok(BigInt::from(count))
}

fn acyclic(n: usize, arcs: &[crate::graph::Arc], mask: u32) -> bool {
    let mut indeg = vec![0usize; n];
    let chosen: Vec<usize> = (0..arcs.len()).filter(|e| mask >> e & 1 == 1).collect();
    for &e in &chosen {
        if arcs[e].tail == arcs[e].head {
            return false;
        }
        indeg[arcs[e].head] += 1;
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = queue.pop_front() {
        seen += 1;
        for &e in &chosen {
            if arcs[e].tail == v {
                indeg[arcs[e].head] -= 1;
                if indeg[arcs[e].head] == 0 {
                    queue.push_back(arcs[e].head);
                }
            }
        }
    }
    seen == n
}

/// Topples one vertex at a time until nothing can fire; chips reaching `s`
/// are discarded.
fn settle(g: &MultiDigraph, s: usize, chips: &mut [u64]) {
    let arcs = g.arcs();
    let out: Vec<u64> = (0..g.vertex_count())
        .map(|v| arcs.iter().filter(|a| a.tail == v).count() as u64)
        .collect();
    loop {
        let Some(v) = (0..chips.len()).find(|&v| {
            v != s && out[v] > 0 && chips[v] >= out[v] && arcs.iter().any(|a| a.tail == v && a.head != v)
        }) else {
            return;
        };
        chips[v] -= out[v];
        for a in arcs.iter().filter(|a| a.tail == v) {
            chips[a.head] += 1;
        }
        chips[s] = 0;
    }
}

/// The closed class reached from the saturated configuration by adding
/// single chips and settling. With a global sink this is the recurrent set.
pub fn brute_recurrents(g: &MultiDigraph, s: usize) -> Result<Vec<Configuration>> {
    g.check_vertex(s)?;
    let n = g.vertex_count();
    limits::check("vertices", n as u128, RECURRENT_MAX_VERTICES as u128)?;
    let reach_sink = {
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for a in g.arcs() {
                if seen[a.head] && !seen[a.tail] {
                    seen[a.tail] = true;
                    changed = true;
                }
            }
        }
        seen.iter().all(|&x| x)
    };
    if !reach_sink {
        return Err(Error::Hypothesis("sink is not reachable from every vertex".into()));
    }
    let mut start: Vec<u64> = (0..n)
        .map(|v| {
            let out = g.arcs().iter().filter(|a| a.tail == v).count() as u64;
            if v == s { 0 } else { out.saturating_sub(1) }
        })
        .collect();
    settle(g, s, &mut start);
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut queue = VecDeque::from([start.clone()]);
    seen.insert(start);
    while let Some(c) = queue.pop_front() {
        for v in (0..n).filter(|&v| v != s) {
            let mut next = c.clone();
            next[v] += 1;
            settle(g, s, &mut next);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen.into_iter()
        .map(|chips| Configuration::from_chips(g, Some(s), chips))
        .collect()
}

/// Searches integer combinations with every coefficient in [−bound, bound].
pub fn brute_lattice_member(generators: &[Vec<i64>], x: &[i64], bound: i64) -> bool {
    fn go(gens: &[Vec<i64>], k: usize, acc: &mut Vec<i64>, x: &[i64], bound: i64) -> bool {
        if k == gens.len() {
            return acc.as_slice() == x;
        }
        for a in -bound..=bound {
            for (t, g) in acc.iter_mut().zip(&gens[k]) {
                *t += a * g;
            }
            let hit = go(gens, k + 1, acc, x, bound);
            for (t, g) in acc.iter_mut().zip(&gens[k]) {
                *t -= a * g;
            }
            if hit {
                return true;
            }
        }
        false
    }
    let mut acc = vec![0i64; x.len()];
    go(generators, 0, &mut acc, x, bound)
}
