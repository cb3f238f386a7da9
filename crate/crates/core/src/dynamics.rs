//! The chip-firing engine.
//!
//! A [`Configuration`] either lives on all vertices (no sink) or on every
//! vertex except a declared sink. In the sink game the sink never fires and
//! chips reaching it vanish. [`stabilize_toward`] is the chip-keeping
//! variant: a full-domain configuration is stabilized while one vertex is
//! frozen and accumulates whatever it receives.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::MultiDigraph;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    host: u64,
    sink: Option<usize>,
    chips: Vec<u64>,
}

/// Per-vertex firing counts of one stabilization and the number of chips
/// delivered to the sink (or frozen vertex).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiringRecord {
    pub counts: Vec<u64>,
    pub chips_to_sink: u64,
}

impl FiringRecord {
    pub fn total_firings(&self) -> u64 {
        self.counts.iter().sum()
    }
}

impl Configuration {
    /// All-zero configuration. With `sink = Some(s)` the domain is V∖{s}.
    pub fn zero(g: &MultiDigraph, sink: Option<usize>) -> Result<Self> {
        if let Some(s) = sink {
            g.check_vertex(s)?;
        }
        Ok(Configuration {
            host: g.fingerprint(),
            sink,
            chips: vec![0; g.vertex_count()],
        })
    }

    /// `chips` is indexed by vertex; the sink entry, if any, must be 0.
    pub fn from_chips(g: &MultiDigraph, sink: Option<usize>, chips: Vec<u64>) -> Result<Self> {
        if chips.len() != g.vertex_count() {
            return Err(Error::Dimension {
                expected: g.vertex_count(),
                got: chips.len(),
            });
        }
        if let Some(s) = sink {
            g.check_vertex(s)?;
            if chips[s] != 0 {
                return Err(Error::ConfigMismatch(format!(
                    "sink `{}` carries chips",
                    g.label(s)
                )));
            }
        }
        Ok(Configuration {
            host: g.fingerprint(),
            sink,
            chips,
        })
    }

    /// Parses `v1=3,v2=0,...`; omitted vertices hold 0 chips.
    pub fn parse(g: &MultiDigraph, sink: Option<usize>, literal: &str) -> Result<Self> {
        let mut c = Configuration::zero(g, sink)?;
        for part in literal.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| Error::ConfigLiteral(format!("`{part}` is not `vertex=count`")))?;
            let v = g.vertex(name.trim())?;
            if Some(v) == sink {
                return Err(Error::ConfigLiteral(format!(
                    "`{}` is the sink and is outside the domain",
                    name.trim()
                )));
            }
            c.chips[v] = value
                .trim()
                .parse()
                .map_err(|_| Error::ConfigLiteral(format!("invalid chip count in `{part}`")))?;
        }
        Ok(c)
    }

    pub fn sink(&self) -> Option<usize> {
        self.sink
    }

    pub fn host(&self) -> u64 {
        self.host
    }

    /// Chip vector indexed by vertex (the sink entry is always 0).
    pub fn chips(&self) -> &[u64] {
        &self.chips
    }

    pub fn get(&self, v: usize) -> u64 {
        self.chips[v]
    }

    pub fn in_domain(&self, v: usize) -> bool {
        v < self.chips.len() && Some(v) != self.sink
    }

    /// Chips over the domain.
    pub fn total(&self) -> u64 {
        self.chips.iter().sum()
    }

    /// Values over the domain in canonical vertex order.
    pub fn domain_values(&self) -> Vec<u64> {
        (0..self.chips.len())
            .filter(|&v| self.in_domain(v))
            .map(|v| self.chips[v])
            .collect()
    }

    pub fn is_on(&self, g: &MultiDigraph) -> bool {
        self.host == g.fingerprint()
    }

    pub(crate) fn check_host(&self, g: &MultiDigraph) -> Result<()> {
        if self.is_on(g) {
            Ok(())
        } else {
            Err(Error::ConfigMismatch("configuration belongs to a different graph".into()))
        }
    }

    /// Pointwise `self <= other` over a shared domain.
    pub fn le(&self, other: &Configuration) -> bool {
        self.host == other.host
            && self.sink == other.sink
            && self.chips.iter().zip(&other.chips).all(|(a, b)| a <= b)
    }

    /// Drops vertex `s` from the domain (its chips are discarded).
    pub fn restrict(&self, s: usize) -> Result<Configuration> {
        if self.sink.is_some() {
            return Err(Error::ConfigMismatch("configuration already has a sink".into()));
        }
        if s >= self.chips.len() {
            return Err(Error::VertexOutOfRange(s));
        }
        let mut chips = self.chips.clone();
        chips[s] = 0;
        Ok(Configuration {
            host: self.host,
            sink: Some(s),
            chips,
        })
    }

    /// Same chips viewed on another graph with the same vertex set.
    pub fn rehost(&self, g: &MultiDigraph) -> Result<Configuration> {
        let mut c = self.clone();
        if c.chips.len() != g.vertex_count() {
            return Err(Error::Dimension {
                expected: g.vertex_count(),
                got: c.chips.len(),
            });
        }
        c.host = g.fingerprint();
        Ok(c)
    }

    /// `v=n` pairs over the domain, canonical order.
    pub fn labeled<'g>(&self, g: &'g MultiDigraph) -> Vec<(&'g str, u64)> {
        (0..self.chips.len())
            .filter(|&v| self.in_domain(v))
            .map(|v| (g.label(v), self.chips[v]))
            .collect()
    }

    pub fn to_literal(&self, g: &MultiDigraph) -> String {
        self.labeled(g)
            .into_iter()
            .map(|(l, n)| format!("{l}={n}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn to_json(&self, g: &MultiDigraph) -> serde_json::Value {
        let mut m = serde_json::Map::new();
        for (l, n) in self.labeled(g) {
            m.insert(l.to_string(), n.into());
        }
        serde_json::Value::Object(m)
    }

    pub(crate) fn chips_mut(&mut self) -> &mut Vec<u64> {
        &mut self.chips
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        let mut first = true;
        for v in 0..self.chips.len() {
            if !self.in_domain(v) {
                continue;
            }
            if !first {
                write!(f, ",")?;
            }
            first = false;
            write!(f, "{}", self.chips[v])?;
        }
        write!(f, ")")
    }
}

fn firable_raw(g: &MultiDigraph, chips: &[u64], v: usize) -> bool {
    let out = g.out_degree(v);
    out > g.loops_at(v) && chips[v] >= out as u64
}

/// Firing bound used to declare non-termination.
fn firing_bound(g: &MultiDigraph, chips: &[u64]) -> u128 {
    let n = g.vertex_count() as u32;
    let total: u128 = chips.iter().map(|&c| c as u128).sum::<u128>() + g.arc_count() as u128;
    let pow = 1u128.checked_shl(n).unwrap_or(u128::MAX);
    total
        .saturating_mul(n as u128)
        .saturating_mul(g.max_out_degree() as u128 + 1)
        .saturating_mul(pow)
}

/// Stabilizes `chips` in place; `frozen` never fires and keeps what it
/// receives. Sweeps vertices in canonical order, firing each firable vertex
/// as many consecutive times as it can.
pub(crate) fn stabilize_raw(
    g: &MultiDigraph,
    chips: &mut [u64],
    frozen: Option<usize>,
    counts: &mut [u64],
) -> Result<()> {
    let bound = firing_bound(g, chips);
    let mut fired: u128 = 0;
    loop {
        let mut changed = false;
        for v in 0..g.vertex_count() {
            if Some(v) == frozen || !firable_raw(g, chips, v) {
                continue;
            }
            let out = g.out_degree(v) as u64;
            let net = out - g.loops_at(v) as u64;
            let k = (chips[v] - out) / net + 1;
            chips[v] -= k * net;
            for &(w, m) in g.out_neighbors(v) {
                chips[w] += k * m as u64;
            }
            counts[v] += k;
            fired += k as u128;
            changed = true;
        }
        if !changed {
            return Ok(());
        }
        if fired > bound {
            return Err(Error::NonTerminating { bound });
        }
    }
}

/// Whether `v` can fire in `c`: enough chips, and at least one non-loop
/// out-arc.
pub fn is_firable(g: &MultiDigraph, c: &Configuration, v: usize) -> Result<bool> {
    c.check_host(g)?;
    g.check_vertex(v)?;
    if Some(v) == c.sink {
        return Err(Error::SinkFiring(g.label(v).to_string()));
    }
    Ok(firable_raw(g, &c.chips, v))
}

pub fn is_stable(g: &MultiDigraph, c: &Configuration) -> Result<bool> {
    c.check_host(g)?;
    Ok((0..g.vertex_count()).all(|v| !c.in_domain(v) || !firable_raw(g, &c.chips, v)))
}

/// Fires `v` once. Chips sent to the sink vanish.
pub fn fire(g: &MultiDigraph, c: &Configuration, v: usize) -> Result<Configuration> {
    if !is_firable(g, c, v)? {
        return Err(Error::NotFirable(g.label(v).to_string()));
    }
    let mut next = c.clone();
    next.chips[v] -= (g.out_degree(v) - g.loops_at(v)) as u64;
    for &(w, m) in g.out_neighbors(v) {
        if Some(w) != c.sink {
            next.chips[w] += m as u64;
        }
    }
    Ok(next)
}

/// Runs the game to its unique stable configuration.
pub fn stabilize(g: &MultiDigraph, c: &Configuration) -> Result<(Configuration, FiringRecord)> {
    c.check_host(g)?;
    let mut out = c.clone();
    let mut counts = vec![0; g.vertex_count()];
    stabilize_raw(g, &mut out.chips, c.sink, &mut counts)?;
    let mut to_sink = 0;
    if let Some(s) = c.sink {
        to_sink = out.chips[s];
        out.chips[s] = 0;
    }
    Ok((
        out,
        FiringRecord {
            counts,
            chips_to_sink: to_sink,
        },
    ))
}

/// Stabilizes a full-domain configuration with `s` frozen; `s` keeps every
/// chip it holds or receives.
pub fn stabilize_toward(
    g: &MultiDigraph,
    c: &Configuration,
    s: usize,
) -> Result<(Configuration, FiringRecord)> {
    c.check_host(g)?;
    g.check_vertex(s)?;
    if c.sink.is_some() {
        return Err(Error::ConfigMismatch(
            "chip-keeping stabilization needs a full-domain configuration".into(),
        ));
    }
    let mut out = c.clone();
    let mut counts = vec![0; g.vertex_count()];
    stabilize_raw(g, &mut out.chips, Some(s), &mut counts)?;
    let received = out.chips[s] - c.chips[s];
    Ok((
        out,
        FiringRecord {
            counts,
            chips_to_sink: received,
        },
    ))
}

pub fn add(c: &Configuration, d: &Configuration) -> Result<Configuration> {
    if c.host != d.host || c.sink != d.sink || c.chips.len() != d.chips.len() {
        return Err(Error::ConfigMismatch("different host or domain".into()));
    }
    let mut out = c.clone();
    for (a, b) in out.chips.iter_mut().zip(&d.chips) {
        *a += b;
    }
    Ok(out)
}

/// β(v) = number of arcs from `s` to `v`, on the domain V∖{s}.
pub fn beta(g: &MultiDigraph, s: usize) -> Result<Configuration> {
    let mut c = Configuration::zero(g, Some(s))?;
    for &(w, m) in g.out_neighbors(s) {
        c.chips[w] = m as u64;
    }
    Ok(c)
}

/// Full-domain copy of a sink configuration with outdeg(s) + `extra` chips
/// placed on its sink.
pub fn augment_sink(g: &MultiDigraph, c: &Configuration, extra: u64) -> Result<Configuration> {
    c.check_host(g)?;
    let s = c
        .sink
        .ok_or_else(|| Error::ConfigMismatch("configuration has no sink".into()))?;
    let mut out = c.clone();
    out.sink = None;
    out.chips[s] = g.out_degree(s) as u64 + extra;
    Ok(out)
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
        g(&[
            ("s", "a"),
            ("a", "s"),
            ("s", "b"),
            ("b", "s"),
            ("a", "b"),
            ("b", "a"),
        ])
    }

    fn cfg(h: &MultiDigraph, lit: &str) -> Configuration {
        Configuration::parse(h, Some(0), lit).unwrap()
    }

    #[test]
    fn firability() {
        let h = k3();
        assert!(is_firable(&h, &cfg(&h, "a=2"), 1).unwrap());
        assert!(!is_firable(&h, &cfg(&h, "a=1"), 1).unwrap());
        assert_eq!(
            is_firable(&h, &cfg(&h, "a=1"), 0),
            Err(Error::SinkFiring("s".into()))
        );
        let looped = g(&[("v", "v"), ("v", "v"), ("v", "v")]);
        let c = Configuration::from_chips(&looped, None, vec![5]).unwrap();
        assert!(!is_firable(&looped, &c, 0).unwrap());
    }

    #[test]
    fn fire_examples() {
        let h = c3();
        let c = fire(&h, &cfg(&h, "a=1,b=0"), 1).unwrap();
        assert_eq!(c, cfg(&h, "a=0,b=1"));
        let c = fire(&h, &c, 2).unwrap();
        assert_eq!(c, cfg(&h, "a=0,b=0"));

        let h = k3();
        let c = fire(&h, &cfg(&h, "a=2,b=1"), 1).unwrap();
        assert_eq!(c, cfg(&h, "a=0,b=2"));
        assert_eq!(
            fire(&h, &cfg(&h, "a=1"), 1),
            Err(Error::NotFirable("a".into()))
        );
    }

    #[test]
    fn fire_with_loops_keeps_frozen_chips() {
        let h = g(&[("u", "v"), ("v", "u"), ("v", "v")]);
        let c = Configuration::parse(&h, Some(0), "v=2").unwrap();
        let d = fire(&h, &c, 1).unwrap();
        assert_eq!(d.get(1), 1);
    }

    #[test]
    fn stabilize_examples() {
        let h = k3();
        let stable = cfg(&h, "a=1,b=0");
        let (c, rec) = stabilize(&h, &stable).unwrap();
        assert_eq!(c, stable);
        assert_eq!(rec.total_firings(), 0);

        let start = add(&cfg(&h, "a=0,b=0"), &beta(&h, 0).unwrap()).unwrap();
        let (c, rec) = stabilize(&h, &start).unwrap();
        assert_eq!(c, cfg(&h, "a=1,b=1"));
        assert_eq!(rec.total_firings(), 0);

        let (c, rec) = stabilize(&h, &cfg(&h, "a=2,b=2")).unwrap();
        assert_eq!(c, cfg(&h, "a=1,b=1"));
        assert_eq!(rec.counts, vec![0, 1, 1]);
        assert_eq!(rec.chips_to_sink, 2);
    }

    #[test]
    fn stabilize_without_sink_can_fail() {
        let h = c3();
        let c = Configuration::from_chips(&h, None, vec![1, 1, 1]).unwrap();
        assert!(matches!(
            stabilize(&h, &c),
            Err(Error::NonTerminating { .. })
        ));
    }

    #[test]
    fn add_and_beta() {
        let h = k3();
        let z = Configuration::zero(&h, Some(0)).unwrap();
        let c = cfg(&h, "a=1");
        assert_eq!(add(&c, &z).unwrap(), c);
        assert_eq!(add(&c, &cfg(&h, "b=2")).unwrap(), cfg(&h, "a=1,b=2"));
        let other = Configuration::zero(&h, Some(1)).unwrap();
        assert!(add(&c, &other).is_err());

        assert_eq!(beta(&c3(), 0).unwrap().domain_values(), vec![1, 0]);
        assert_eq!(beta(&k3(), 0).unwrap().domain_values(), vec![1, 1]);
        let doubled = g(&[("u", "v"), ("u", "v"), ("v", "u"), ("v", "u")]);
        assert_eq!(beta(&doubled, 0).unwrap().domain_values(), vec![2]);
    }

    #[test]
    fn augment_and_keep_chips() {
        let h = k3();
        let c = cfg(&h, "a=1,b=0");
        let full = augment_sink(&h, &c, 0).unwrap();
        assert_eq!(full.chips(), &[2, 1, 0]);
        let (d, rec) = stabilize_toward(&h, &full, 1).unwrap();
        assert_eq!(d.chips(), &[0, 2, 1]);
        assert_eq!(rec.chips_to_sink, 1);
    }

    #[test]
    fn literal_parsing() {
        let h = k3();
        assert_eq!(cfg(&h, "b=3").domain_values(), vec![0, 3]);
        assert!(Configuration::parse(&h, Some(0), "s=1").is_err());
        assert!(Configuration::parse(&h, Some(0), "q=1").is_err());
        assert!(Configuration::parse(&h, Some(0), "a:1").is_err());
        assert_eq!(cfg(&h, "a=1,b=2").to_literal(&h), "a=1,b=2");
    }
}
