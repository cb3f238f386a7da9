//! Seeded generators for the randomized suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Arc, MultiDigraph};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

fn cycle_arcs(cycle: &[usize]) -> Vec<Arc> {
    (0..cycle.len())
        .map(|i| Arc::new(cycle[i], cycle[(i + 1) % cycle.len()]))
        .collect()
}

/// Connected Eulerian multidigraph built as a union of directed cycles
/// (length ≥ 2) and loops, with 2..=max_vertices vertices and at most
/// `max_arcs` arcs.
pub fn random_eulerian<R: Rng>(rng: &mut R, max_vertices: usize, max_arcs: usize, loops: bool) -> MultiDigraph {
    assert!(max_vertices >= 2 && max_arcs >= 2);
    loop {
        let n = rng.gen_range(2..=max_vertices);
        let mut arcs: Vec<Arc> = Vec::new();
        let mut covered = vec![false; n];
        covered[rng.gen_range(0..n)] = true;
        while covered.iter().any(|&c| !c) {
            let inside: Vec<usize> = (0..n).filter(|&v| covered[v]).collect();
            let outside: Vec<usize> = (0..n).filter(|&v| !covered[v]).collect();
            let mut cycle = vec![*inside.choose(rng).unwrap(), *outside.choose(rng).unwrap()];
            let extra = rng.gen_range(0..=n.saturating_sub(2));
            let mut rest: Vec<usize> = (0..n).filter(|v| !cycle.contains(v)).collect();
            rest.shuffle(rng);
            cycle.extend(rest.into_iter().take(extra));
            cycle[1..].shuffle(rng);
            for &v in &cycle {
                covered[v] = true;
            }
            arcs.extend(cycle_arcs(&cycle));
        }
        let extras = rng.gen_range(0..=3);
        for _ in 0..extras {
            if loops && rng.gen_bool(0.3) {
                let v = rng.gen_range(0..n);
                arcs.push(Arc::new(v, v));
            } else {
                let len = rng.gen_range(2..=n);
                let mut cycle: Vec<usize> = (0..n).collect();
                cycle.shuffle(rng);
                cycle.truncate(len);
                arcs.extend(cycle_arcs(&cycle));
            }
        }
        if arcs.len() <= max_arcs {
            return MultiDigraph::new(labels(n), arcs).expect("valid random graph");
        }
    }
}

/// Strongly connected digraph that is not Eulerian, with 2..=max_vertices
/// vertices, at most `max_arcs` arcs and occasional loops.
pub fn random_strongly_connected_non_eulerian<R: Rng>(rng: &mut R, max_vertices: usize, max_arcs: usize) -> MultiDigraph {
    assert!(max_vertices >= 2 && max_arcs >= 3);
    loop {
        let n = rng.gen_range(2..=max_vertices);
        let m = rng.gen_range(n + 1..=max_arcs.max(n + 1));
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut arcs = cycle_arcs(&order);
        while arcs.len() < m {
            let t = rng.gen_range(0..n);
            let h = if rng.gen_bool(0.1) { t } else { rng.gen_range(0..n) };
            arcs.push(Arc::new(t, h));
        }
        let g = MultiDigraph::new(labels(n), arcs).expect("valid random graph");
        if g.arc_count() <= max_arcs && g.is_strongly_connected() && !g.is_eulerian() {
            return g;
        }
    }
}

/// Connected undirected multigraph as a symmetric digraph: a random
/// spanning tree plus extra edges (parallel ones allowed) and loops.
pub fn random_undirected<R: Rng>(rng: &mut R, max_vertices: usize, max_edges: usize) -> MultiDigraph {
    assert!(max_vertices >= 1);
    let n = rng.gen_range(1..=max_vertices);
    let mut arcs = Vec::new();
    let edge = |arcs: &mut Vec<Arc>, u: usize, v: usize| {
        arcs.push(Arc::new(u, v));
        if u != v {
            arcs.push(Arc::new(v, u));
        }
    };
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edge(&mut arcs, u, v);
    }
    let budget = max_edges.saturating_sub(n.saturating_sub(1));
    for _ in 0..rng.gen_range(0..=budget) {
        let u = rng.gen_range(0..n);
        let v = if rng.gen_bool(0.15) { u } else { rng.gen_range(0..n) };
        edge(&mut arcs, u, v);
    }
    MultiDigraph::new(labels(n), arcs).expect("valid random graph")
}

/// Every connected simple undirected graph on exactly `n` labelled
/// vertices.
pub fn all_simple_connected(n: usize) -> Vec<MultiDigraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << pairs.len()) {
        let mut arcs = Vec::new();
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                arcs.push(Arc::new(u, v));
                arcs.push(Arc::new(v, u));
            }
        }
        let g = MultiDigraph::new(labels(n), arcs).expect("valid graph");
        if g.is_weakly_connected() {
            out.push(g);
        }
    }
    out
}

/// Every connected undirected multigraph on `n` labelled vertices with
/// edge multiplicities up to `max_mult` and up to `max_loops` loops per
/// vertex.
pub fn all_multigraphs(n: usize, max_mult: usize, max_loops: usize) -> Vec<MultiDigraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let slots = pairs.len() + n;
    let radix: Vec<usize> = (0..slots)
        .map(|i| if i < pairs.len() { max_mult + 1 } else { max_loops + 1 })
        .collect();
    let mut digits = vec![0usize; slots];
    let mut out = Vec::new();
    'outer: loop {
        let mut arcs = Vec::new();
        for (i, &(u, v)) in pairs.iter().enumerate() {
            for _ in 0..digits[i] {
                arcs.push(Arc::new(u, v));
                arcs.push(Arc::new(v, u));
            }
        }
        for v in 0..n {
            for _ in 0..digits[pairs.len() + v] {
                arcs.push(Arc::new(v, v));
            }
        }
        let g = MultiDigraph::new(labels(n), arcs).expect("valid graph");
        if g.is_weakly_connected() {
            out.push(g);
        }
        for k in 0..slots {
            digits[k] += 1;
            if digits[k] < radix[k] {
                continue 'outer;
            }
            digits[k] = 0;
        }
        break;
    }
    out
}

/// The shared corpus of the property suites.
pub fn eulerian_corpus(seed: u64, count: usize) -> Vec<MultiDigraph> {
    let mut r = rng(seed);
    (0..count).map(|_| random_eulerian(&mut r, 5, 12, true)).collect()
}
