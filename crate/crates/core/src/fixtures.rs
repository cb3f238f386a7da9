//! Small named graphs used by the tests, the acceptance suite and the CLI.

use crate::dynamics::Configuration;
use crate::graph::{Arc, MultiDigraph};

fn build(labels: &[&str], arcs: &[(&str, &str)]) -> MultiDigraph {
    let index = |l: &str| labels.iter().position(|&x| x == l).expect("fixture label");
    MultiDigraph::new(
        labels.iter().map(|l| l.to_string()).collect(),
        arcs.iter().map(|&(t, h)| Arc::new(index(t), index(h))).collect(),
    )
    .expect("fixture graph")
}

/// Directed triangle s → a → b → s.
pub fn c3() -> MultiDigraph {
    build(&["s", "a", "b"], &[("s", "a"), ("a", "b"), ("b", "s")])
}

/// Triangle with every edge in both directions.
pub fn k3() -> MultiDigraph {
    build(
        &["s", "a", "b"],
        &[("s", "a"), ("a", "s"), ("s", "b"), ("b", "s"), ("a", "b"), ("b", "a")],
    )
}

/// Two vertices joined by `m` undirected parallel edges.
pub fn banana(m: usize) -> MultiDigraph {
    let mut arcs = Vec::new();
    for _ in 0..m {
        arcs.push(("u", "v"));
        arcs.push(("v", "u"));
    }
    build(&["u", "v"], &arcs)
}

/// Complete undirected graph on `n` vertices.
pub fn complete(n: usize) -> MultiDigraph {
    let labels: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                arcs.push(Arc::new(i, j));
            }
        }
    }
    MultiDigraph::new(labels, arcs).expect("complete graph")
}

/// Running example on s, v1..v4: six recurrent configurations for every
/// sink.
pub fn fig1() -> MultiDigraph {
    build(
        &["s", "v1", "v2", "v3", "v4"],
        &[
            ("s", "v1"),
            ("s", "v3"),
            ("v1", "v2"),
            ("v1", "v3"),
            ("v2", "v1"),
            ("v2", "v3"),
            ("v3", "s"),
            ("v3", "v2"),
            ("v3", "v4"),
            ("v4", "s"),
        ],
    )
}

/// Eulerian digraph on v1..v5 with a minimal, non-minimum recurrent
/// configuration for sink v5 whose swap number toward v4 is 1.
pub fn fig13() -> MultiDigraph {
    build(
        &["v1", "v2", "v3", "v4", "v5"],
        &[
            ("v1", "v2"),
            ("v1", "v3"),
            ("v2", "v1"),
            ("v2", "v4"),
            ("v3", "v4"),
            ("v3", "v5"),
            ("v4", "v1"),
            ("v4", "v3"),
            ("v5", "v2"),
        ],
    )
}

/// The displayed configuration of `fig13` for sink v5.
pub fn fig13_config(g: &MultiDigraph) -> Configuration {
    Configuration::parse(g, Some(4), "v1=1,v2=1,v3=1,v4=0").expect("fixture configuration")
}

/// Regular tournament on five vertices: i → i+1 and i → i+2 (mod 5). It
/// has no loop, no bridge and no reverse pair.
pub fn tournament5() -> MultiDigraph {
    let labels: Vec<String> = (0..5).map(|i| format!("t{i}")).collect();
    let arcs = (0..5)
        .flat_map(|i| [Arc::new(i, (i + 1) % 5), Arc::new(i, (i + 2) % 5)])
        .collect();
    MultiDigraph::new(labels, arcs).expect("tournament")
}

/// Strongly connected, not Eulerian: C3 plus a chord a → s.
pub fn lopsided() -> MultiDigraph {
    build(&["s", "a", "b"], &[("s", "a"), ("a", "b"), ("b", "s"), ("a", "s")])
}

/// Every fixture with its name.
pub fn named() -> Vec<(&'static str, MultiDigraph)> {
    vec![
        ("c3", c3()),
        ("k3", k3()),
        ("banana2", banana(2)),
        ("k4", complete(4)),
        ("fig1", fig1()),
        ("fig13", fig13()),
        ("tournament5", tournament5()),
        ("lopsided", lopsided()),
    ]
}
