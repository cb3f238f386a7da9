//! Labeled multidigraphs with loops, plus the rewriting operations used by
//! the chip-firing and polynomial code: out-arc deletion at a sink, arc and
//! vertex-set contraction, loop removal and bridge analysis.
//!
//! Vertices are addressed by index in canonical (insertion) order; arcs by
//! position in the arc list, so parallel arcs stay distinguishable.

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
}

impl Arc {
    pub fn new(tail: usize, head: usize) -> Self {
        Arc { tail, head }
    }

    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

/// Immutable multidigraph. Degree tables and the multiplicity matrix are
/// derived once at construction.
#[derive(Clone)]
pub struct MultiDigraph {
    labels: Vec<String>,
    arcs: Vec<Arc>,
    out_deg: Vec<usize>,
    in_deg: Vec<usize>,
    loops: Vec<usize>,
    mult: Vec<usize>,
    out_nbrs: Vec<Vec<(usize, usize)>>,
    fingerprint: u64,
}

impl PartialEq for MultiDigraph {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.arcs == other.arcs
    }
}

impl Eq for MultiDigraph {}

impl fmt::Debug for MultiDigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arcs: Vec<String> = self
            .arcs
            .iter()
            .map(|a| format!("{}->{}", self.labels[a.tail], self.labels[a.head]))
            .collect();
        f.debug_struct("MultiDigraph")
            .field("vertices", &self.labels)
            .field("arcs", &arcs)
            .finish()
    }
}

/// Result of separating a digraph along a bridge: exactly one arc leaves
/// `cut_set` (the bridge) and exactly one arc enters it (the co-bridge).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BridgeCut {
    pub cut_set: Vec<usize>,
    pub bridge: usize,
    pub co_bridge: usize,
}

fn valid_label(label: &str) -> bool {
    !label.is_empty() && !label.starts_with('#') && !label.chars().any(char::is_whitespace)
}

impl MultiDigraph {
    pub fn new(labels: Vec<String>, arcs: Vec<Arc>) -> Result<Self> {
        let mut seen = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if !valid_label(l) {
                return Err(Error::InvalidLabel(l.clone()));
            }
            if seen.insert(l.as_str(), i).is_some() {
                return Err(Error::DuplicateVertex(l.clone()));
            }
        }
        let n = labels.len();
        for a in &arcs {
            if a.tail >= n {
                return Err(Error::VertexOutOfRange(a.tail));
            }
            if a.head >= n {
                return Err(Error::VertexOutOfRange(a.head));
            }
        }
        let mut out_deg = vec![0; n];
        let mut in_deg = vec![0; n];
        let mut loops = vec![0; n];
        let mut mult = vec![0; n * n];
        for a in &arcs {
            out_deg[a.tail] += 1;
            in_deg[a.head] += 1;
            mult[a.tail * n + a.head] += 1;
            if a.is_loop() {
                loops[a.tail] += 1;
            }
        }
        let out_nbrs = (0..n)
            .map(|v| {
                (0..n)
                    .filter(|&w| w != v && mult[v * n + w] > 0)
                    .map(|w| (w, mult[v * n + w]))
                    .collect()
            })
            .collect();
        let mut h = DefaultHasher::new();
        labels.hash(&mut h);
        arcs.hash(&mut h);
        Ok(MultiDigraph {
            labels,
            arcs,
            out_deg,
            in_deg,
            loops,
            mult,
            out_nbrs,
            fingerprint: h.finish(),
        })
    }

    /// Builds a graph from labeled arcs; the vertex set is the union of the
    /// endpoints in first-appearance order.
    pub fn from_labeled_arcs<S: AsRef<str>>(arcs: &[(S, S)]) -> Result<Self> {
        let mut labels: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut intern = |s: &str, labels: &mut Vec<String>| -> usize {
            if let Some(&i) = index.get(s) {
                return i;
            }
            labels.push(s.to_string());
            index.insert(s.to_string(), labels.len() - 1);
            labels.len() - 1
        };
        let mut out = Vec::with_capacity(arcs.len());
        for (t, h) in arcs {
            let t = intern(t.as_ref(), &mut labels);
            let h = intern(h.as_ref(), &mut labels);
            out.push(Arc::new(t, h));
        }
        MultiDigraph::new(labels, out)
    }

    /// Parses the edge-list text format: `#` starts a comment line, every
    /// other non-blank line is `tail head [multiplicity]`. A multiplicity
    /// of 0 declares both endpoints without adding arcs.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut labels: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut arcs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let err = |reason: String| Error::Parse {
                line: lineno + 1,
                reason,
            };
            if toks.len() < 2 || toks.len() > 3 {
                return Err(err(format!(
                    "expected `tail head [multiplicity]`, found {} tokens",
                    toks.len()
                )));
            }
            let multiplicity = match toks.get(2) {
                None => 1usize,
                Some(m) => m
                    .parse::<usize>()
                    .map_err(|_| err(format!("invalid multiplicity `{m}`")))?,
            };
            let mut ends = [0usize; 2];
            for (k, tok) in toks[..2].iter().enumerate() {
                ends[k] = match index.get(*tok) {
                    Some(&i) => i,
                    None => {
                        labels.push(tok.to_string());
                        index.insert(tok.to_string(), labels.len() - 1);
                        labels.len() - 1
                    }
                };
            }
            for _ in 0..multiplicity {
                arcs.push(Arc::new(ends[0], ends[1]));
            }
        }
        MultiDigraph::new(labels, arcs)
    }

    /// Inverse of [`MultiDigraph::parse_edge_list`]. Every vertex is declared
    /// first with a zero-multiplicity line so vertex order survives the trip.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for l in &self.labels {
            s.push_str(&format!("{l} {l} 0\n"));
        }
        for a in &self.arcs {
            s.push_str(&format!("{} {}\n", self.labels[a.tail], self.labels[a.head]));
        }
        s
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, e: usize) -> Result<Arc> {
        self.arcs.get(e).copied().ok_or(Error::ArcOutOfRange(e))
    }

    pub fn vertex(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.labels.len() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange(v))
        }
    }

    /// Out-degree, loops included.
    pub fn out_degree(&self, v: usize) -> usize {
        self.out_deg[v]
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_deg[v]
    }

    pub fn loops_at(&self, v: usize) -> usize {
        self.loops[v]
    }

    /// Total number of loops, L(G).
    pub fn loop_count(&self) -> usize {
        self.loops.iter().sum()
    }

    /// Number of arcs from `v` to `w`.
    pub fn multiplicity(&self, v: usize, w: usize) -> usize {
        self.mult[v * self.labels.len() + w]
    }

    /// Out-neighbours of `v` other than `v` itself, with multiplicities.
    pub fn out_neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.out_nbrs[v]
    }

    pub fn max_out_degree(&self) -> usize {
        self.out_deg.iter().copied().max().unwrap_or(0)
    }

    /// Identity used to tie configurations to their host graph.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// True iff every pair of distinct vertices has equal multiplicities in
    /// both directions.
    pub fn is_undirected(&self) -> bool {
        let n = self.vertex_count();
        (0..n).all(|u| (u + 1..n).all(|v| self.multiplicity(u, v) == self.multiplicity(v, u)))
    }

    fn reach(&self, start: usize, forward: bool, skip: Option<usize>) -> Vec<bool> {
        let n = self.vertex_count();
        let mut adj = vec![Vec::new(); n];
        for (i, a) in self.arcs.iter().enumerate() {
            if Some(i) == skip {
                continue;
            }
            if forward {
                adj[a.tail].push(a.head);
            } else {
                adj[a.head].push(a.tail);
            }
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Vertices reachable from `start` along directed arcs.
    pub fn reachable_from(&self, start: usize) -> Vec<bool> {
        self.reach(start, true, None)
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.strongly_connected_without(None)
    }

    fn strongly_connected_without(&self, skip: Option<usize>) -> bool {
        if self.vertex_count() == 0 {
            return false;
        }
        self.reach(0, true, skip).iter().all(|&b| b) && self.reach(0, false, skip).iter().all(|&b| b)
    }

    pub fn is_weakly_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); n];
        for a in &self.arcs {
            adj[a.tail].push(a.head);
            adj[a.head].push(a.tail);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|b| b)
    }

    /// Connected with in-degree equal to out-degree everywhere. The empty
    /// graph is not Eulerian; a single vertex (with or without loops) is.
    pub fn is_eulerian(&self) -> bool {
        self.is_weakly_connected() && self.out_deg == self.in_deg
    }

    pub fn require_eulerian(&self) -> Result<()> {
        if self.is_eulerian() {
            Ok(())
        } else {
            Err(Error::NotEulerian)
        }
    }

    /// Removes every arc whose tail is `s`, loops at `s` included.
    pub fn delete_out_arcs(&self, s: usize) -> Result<Self> {
        self.check_vertex(s)?;
        let arcs = self.arcs.iter().copied().filter(|a| a.tail != s).collect();
        MultiDigraph::new(self.labels.clone(), arcs)
    }

    /// Removes the arcs at the given positions; remaining arcs keep their
    /// relative order.
    pub fn delete_arcs(&self, removed: &[usize]) -> Result<Self> {
        for &e in removed {
            self.arc(e)?;
        }
        let arcs = self
            .arcs
            .iter()
            .enumerate()
            .filter(|(i, _)| !removed.contains(i))
            .map(|(_, a)| *a)
            .collect();
        MultiDigraph::new(self.labels.clone(), arcs)
    }

    /// Merges all vertices of `w` into one fresh vertex named by joining the
    /// merged labels with `+` in sorted order, placed at the position of the
    /// earliest merged vertex. Internal arcs become loops. Returns the new
    /// graph and the index of the merged vertex.
    pub fn contract_vertices(&self, w: &[usize]) -> Result<(Self, usize)> {
        if w.is_empty() {
            return Err(Error::EmptyContraction);
        }
        for &v in w {
            self.check_vertex(v)?;
        }
        let n = self.vertex_count();
        let mut merged = vec![false; n];
        for &v in w {
            merged[v] = true;
        }
        let first = (0..n).find(|&v| merged[v]).expect("nonempty");
        let mut names: Vec<&str> = (0..n).filter(|&v| merged[v]).map(|v| self.label(v)).collect();
        names.sort_unstable();
        let fresh = names.join("+");

        let mut map = vec![0usize; n];
        let mut labels = Vec::with_capacity(n);
        for v in 0..n {
            if merged[v] && v != first {
                continue;
            }
            map[v] = labels.len();
            labels.push(if v == first {
                fresh.clone()
            } else {
                self.labels[v].clone()
            });
        }
        let target = map[first];
        for v in 0..n {
            if merged[v] {
                map[v] = target;
            }
        }
        let arcs = self
            .arcs
            .iter()
            .map(|a| Arc::new(map[a.tail], map[a.head]))
            .collect();
        Ok((MultiDigraph::new(labels, arcs)?, target))
    }

    /// Removes arc `e` and merges its two endpoints. Any reverse partner of
    /// `e` becomes a loop at the merged vertex.
    pub fn contract_arc(&self, e: usize) -> Result<(Self, usize)> {
        let a = self.arc(e)?;
        if a.is_loop() {
            return Err(Error::ContractLoop(e));
        }
        self.delete_arcs(&[e])?.contract_vertices(&[a.tail, a.head])
    }

    /// Loopless reduction together with the number of loops removed.
    pub fn remove_loops(&self) -> (Self, usize) {
        let arcs: Vec<Arc> = self.arcs.iter().copied().filter(|a| !a.is_loop()).collect();
        let removed = self.arcs.len() - arcs.len();
        let g = MultiDigraph::new(self.labels.clone(), arcs).expect("subgraph of a valid graph");
        (g, removed)
    }

    /// First arc (by position) reversing `e`; loops have none.
    pub fn reverse_partner(&self, e: usize) -> Result<Option<usize>> {
        let a = self.arc(e)?;
        if a.is_loop() {
            return Ok(None);
        }
        Ok(self
            .arcs
            .iter()
            .position(|b| b.tail == a.head && b.head == a.tail))
    }

    /// True iff removing arc `e` destroys strong connectivity.
    pub fn is_bridge(&self, e: usize) -> Result<bool> {
        self.arc(e)?;
        if !self.is_strongly_connected() {
            return Err(Error::NotStronglyConnected);
        }
        Ok(!self.strongly_connected_without(Some(e)))
    }

    /// Cut set of bridge `b`: the vertices reachable from its tail once `b`
    /// is gone, with the unique arc entering that set.
    pub fn bridge_cut(&self, b: usize) -> Result<BridgeCut> {
        self.require_eulerian()?;
        if !self.is_bridge(b)? {
            return Err(Error::NotABridge(b));
        }
        let tail = self.arcs[b].tail;
        let inside = self.reach(tail, true, Some(b));
        let leaving: Vec<usize> = (0..self.arc_count())
            .filter(|&i| inside[self.arcs[i].tail] && !inside[self.arcs[i].head])
            .collect();
        let entering: Vec<usize> = (0..self.arc_count())
            .filter(|&i| !inside[self.arcs[i].tail] && inside[self.arcs[i].head])
            .collect();
        if leaving != [b] || entering.len() != 1 {
            return Err(Error::Internal(format!(
                "bridge {b}: {} leaving and {} entering arcs",
                leaving.len(),
                entering.len()
            )));
        }
        Ok(BridgeCut {
            cut_set: (0..self.vertex_count()).filter(|&v| inside[v]).collect(),
            bridge: b,
            co_bridge: entering[0],
        })
    }
}

/// Position of arc `e` after the arc at position `removed` was deleted.
pub fn index_after_removal(e: usize, removed: usize) -> Option<usize> {
    match e.cmp(&removed) {
        std::cmp::Ordering::Less => Some(e),
        std::cmp::Ordering::Equal => None,
        std::cmp::Ordering::Greater => Some(e - 1),
    }
}
