//! Recurrent configurations on Eulerian digraphs: the burning test, full
//! enumeration over the stable cube, and the sum / κ / level statistics.

use serde_json::json;

use crate::dynamics::{self, beta, stabilize, stabilize_raw, Configuration, FiringRecord};
use crate::error::{Error, Result};
use crate::graph::MultiDigraph;
use crate::limits;

/// Every recurrent configuration for one sink, lexicographically ordered,
/// with aligned sums and levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrentSet {
    pub host: u64,
    pub sink: usize,
    pub configs: Vec<Configuration>,
    pub sums: Vec<u64>,
    pub kappa: u64,
    pub levels: Vec<u64>,
}

impl RecurrentSet {
    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn position(&self, c: &Configuration) -> Option<usize> {
        self.configs.iter().position(|d| d == c)
    }

    pub fn sorted_sums(&self) -> Vec<u64> {
        let mut s = self.sums.clone();
        s.sort_unstable();
        s
    }

    pub fn sorted_levels(&self) -> Vec<u64> {
        let mut s = self.levels.clone();
        s.sort_unstable();
        s
    }

    /// Chip totals over the non-sink vertices, sorted.
    pub fn sorted_chip_totals(&self) -> Vec<u64> {
        let mut s: Vec<u64> = self.configs.iter().map(Configuration::total).collect();
        s.sort_unstable();
        s
    }

    pub fn to_json(&self, g: &MultiDigraph) -> serde_json::Value {
        let configs: Vec<serde_json::Value> = self
            .configs
            .iter()
            .zip(self.sums.iter().zip(&self.levels))
            .map(|(c, (sum, level))| json!({"chips": c.to_json(g), "sum": sum, "level": level}))
            .collect();
        json!({"sink": g.label(self.sink), "kappa": self.kappa, "configs": configs})
    }
}

/// sum_{G,s}(c) = outdeg(s) + chips over V∖{s}.
pub fn config_sum(g: &MultiDigraph, c: &Configuration) -> Result<u64> {
    let s = c
        .sink()
        .ok_or_else(|| Error::ConfigMismatch("configuration has no sink".into()))?;
    Ok(g.out_degree(s) as u64 + c.total())
}

fn check_sink_config(g: &MultiDigraph, s: usize, c: &Configuration) -> Result<()> {
    g.check_vertex(s)?;
    if !c.is_on(g) || c.sink() != Some(s) {
        return Err(Error::ConfigMismatch(format!(
            "expected a configuration on this graph with sink `{}`",
            g.label(s)
        )));
    }
    Ok(())
}

/// Stabilizes c + β and returns the result with its firing record.
pub fn burn(g: &MultiDigraph, s: usize, c: &Configuration) -> Result<(Configuration, FiringRecord)> {
    check_sink_config(g, s, c)?;
    stabilize(g, &dynamics::add(c, &beta(g, s)?)?)
}

/// Burning criterion: c is recurrent iff (c + β)° = c. When it holds, every
/// non-sink vertex must have fired exactly once.
pub fn is_recurrent(g: &MultiDigraph, s: usize, c: &Configuration) -> Result<bool> {
    g.require_eulerian()?;
    check_sink_config(g, s, c)?;
    if !dynamics::is_stable(g, c)? {
        return Err(Error::NotStable);
    }
    let (after, record) = burn(g, s, c)?;
    if after != *c {
        return Ok(false);
    }
    check_burn_record(g, s, &record.counts)?;
    Ok(true)
}

fn check_burn_record(g: &MultiDigraph, s: usize, counts: &[u64]) -> Result<()> {
    if let Some(v) = (0..g.vertex_count()).find(|&v| v != s && counts[v] != 1) {
        return Err(Error::Internal(format!(
            "burning fired `{}` {} times",
            g.label(v),
            counts[v]
        )));
    }
    Ok(())
}

/// Number of cells of the stable cube ∏_{v≠s} outdeg(v).
pub fn stable_cube_size(g: &MultiDigraph, s: usize) -> u128 {
    (0..g.vertex_count())
        .filter(|&v| v != s)
        .map(|v| g.out_degree(v) as u128)
        .fold(1u128, |acc, d| acc.saturating_mul(d))
}

/// Visits every stable configuration for sink `s` in lexicographic order
/// (canonical vertex order, first vertex most significant).
pub(crate) fn for_each_stable(
    g: &MultiDigraph,
    s: usize,
    mut visit: impl FnMut(&[u64]) -> Result<()>,
) -> Result<()> {
    limits::check("stable cube", stable_cube_size(g, s), limits::cell_cap() as u128)?;
    let domain: Vec<usize> = (0..g.vertex_count()).filter(|&v| v != s).collect();
    if domain.iter().any(|&v| g.out_degree(v) == 0) {
        return Ok(());
    }
    let mut chips = vec![0u64; g.vertex_count()];
    loop {
        visit(&chips)?;
        let mut k = domain.len();
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            let v = domain[k];
            if chips[v] + 1 < g.out_degree(v) as u64 {
                chips[v] += 1;
                break;
            }
            chips[v] = 0;
        }
    }
}

fn recurrent_vectors(g: &MultiDigraph, s: usize) -> Result<Vec<Vec<u64>>> {
    g.require_eulerian()?;
    g.check_vertex(s)?;
    let b = beta(g, s)?;
    let mut found = Vec::new();
    let mut work = vec![0u64; g.vertex_count()];
    let mut counts = vec![0u64; g.vertex_count()];
    for_each_stable(g, s, |chips| {
        for v in 0..chips.len() {
            work[v] = chips[v] + b.get(v);
        }
        counts.iter_mut().for_each(|x| *x = 0);
        stabilize_raw(g, &mut work, Some(s), &mut counts)?;
        work[s] = 0;
        if work == chips {
            check_burn_record(g, s, &counts)?;
            found.push(chips.to_vec());
        }
        Ok(())
    })?;
    Ok(found)
}

/// κ(Ḡ): least sum over recurrent configurations of the loopless
/// reduction, using the first vertex as sink.
pub fn kappa(g: &MultiDigraph) -> Result<u64> {
    g.require_eulerian()?;
    kappa_with_sink(g, 0)
}

/// κ(Ḡ) computed with a specific sink. The value does not depend on it.
pub fn kappa_with_sink(g: &MultiDigraph, s: usize) -> Result<u64> {
    let (bare, _) = g.remove_loops();
    let out_s = bare.out_degree(s) as u64;
    recurrent_vectors(&bare, s)?
        .iter()
        .map(|c| out_s + c.iter().sum::<u64>())
        .min()
        .ok_or_else(|| Error::Internal("no recurrent configuration".into()))
}

pub fn enumerate_recurrents(g: &MultiDigraph, s: usize) -> Result<RecurrentSet> {
    let vectors = recurrent_vectors(g, s)?;
    let kappa = kappa(g)?;
    let out_s = g.out_degree(s) as u64;
    let mut configs = Vec::with_capacity(vectors.len());
    let mut sums = Vec::with_capacity(vectors.len());
    let mut levels = Vec::with_capacity(vectors.len());
    for chips in vectors {
        let sum = out_s + chips.iter().sum::<u64>();
        if sum < kappa {
            return Err(Error::Internal(format!("sum {sum} below kappa {kappa}")));
        }
        configs.push(Configuration::from_chips(g, Some(s), chips)?);
        sums.push(sum);
        levels.push(sum - kappa);
    }
    Ok(RecurrentSet {
        host: g.fingerprint(),
        sink: s,
        configs,
        sums,
        kappa,
        levels,
    })
}

/// level_G(c) = sum_{G,s}(c) − κ(Ḡ).
pub fn level(g: &MultiDigraph, s: usize, c: &Configuration) -> Result<u64> {
    if !is_recurrent(g, s, c)? {
        return Err(Error::NotRecurrent);
    }
    let sum = config_sum(g, c)?;
    let k = kappa(g)?;
    sum.checked_sub(k)
        .ok_or_else(|| Error::Internal(format!("sum {sum} below kappa {k}")))
}

/// Lifts a recurrent configuration of the loopless reduction to `g` by
/// adding each vertex's loop count.
pub fn loop_lift(g: &MultiDigraph, s: usize, c: &Configuration) -> Result<Configuration> {
    let (bare, _) = g.remove_loops();
    if !is_recurrent(&bare, s, c)? {
        return Err(Error::NotRecurrent);
    }
    let mut lifted = c.rehost(g)?;
    for v in 0..g.vertex_count() {
        if v != s {
            lifted.chips_mut()[v] += g.loops_at(v) as u64;
        }
    }
    Ok(lifted)
}

/// Out-neighbours of `s` that become firable once `s` fires onto c.
pub fn support_after_sink_fire(g: &MultiDigraph, s: usize, c: &Configuration) -> Result<Vec<usize>> {
    check_sink_config(g, s, c)?;
    if !dynamics::is_stable(g, c)? {
        return Err(Error::NotStable);
    }
    Ok(g
        .out_neighbors(s)
        .iter()
        .filter(|&&(v, m)| c.get(v) + m as u64 >= g.out_degree(v) as u64)
        .map(|&(v, _)| v)
        .collect())
}

/// No other member of the set lies pointwise below `c`.
pub fn is_minimal(rs: &RecurrentSet, c: &Configuration) -> Result<bool> {
    rs.position(c).ok_or(Error::NotRecurrent)?;
    Ok(!rs.configs.iter().any(|d| d != c && d.le(c)))
}

/// `c` has the least chip total in the set.
pub fn is_minimum(rs: &RecurrentSet, c: &Configuration) -> Result<bool> {
    rs.position(c).ok_or(Error::NotRecurrent)?;
    let least = rs.configs.iter().map(Configuration::total).min().unwrap_or(0);
    Ok(c.total() == least)
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

    fn doubled() -> MultiDigraph {
        g(&[("u", "v"), ("u", "v"), ("v", "u"), ("v", "u")])
    }

    fn cfg(h: &MultiDigraph, lit: &str) -> Configuration {
        Configuration::parse(h, Some(0), lit).unwrap()
    }

    #[test]
    fn burning_examples() {
        let h = k3();
        assert!(is_recurrent(&h, 0, &cfg(&h, "a=1,b=0")).unwrap());
        assert!(!is_recurrent(&h, 0, &cfg(&h, "a=0,b=0")).unwrap());
        let h = c3();
        assert!(is_recurrent(&h, 0, &cfg(&h, "")).unwrap());
    }

    #[test]
    fn burning_errors() {
        let h = k3();
        assert_eq!(is_recurrent(&h, 0, &cfg(&h, "a=2")), Err(Error::NotStable));
        let not_eulerian = g(&[("s", "a"), ("a", "b"), ("b", "s"), ("a", "s")]);
        let c = Configuration::zero(&not_eulerian, Some(0)).unwrap();
        assert_eq!(is_recurrent(&not_eulerian, 0, &c), Err(Error::NotEulerian));
    }

    #[test]
    fn enumeration_examples() {
        let rs = enumerate_recurrents(&c3(), 0).unwrap();
        assert_eq!(rs.len(), 1);
        assert_eq!(rs.sums, vec![1]);

        let rs = enumerate_recurrents(&k3(), 0).unwrap();
        assert_eq!(rs.len(), 3);
        assert_eq!(rs.sorted_sums(), vec![3, 3, 4]);
        let vals: Vec<Vec<u64>> = rs.configs.iter().map(|c| c.domain_values()).collect();
        assert_eq!(vals, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);

        let rs = enumerate_recurrents(&doubled(), 0).unwrap();
        let vals: Vec<Vec<u64>> = rs.configs.iter().map(|c| c.domain_values()).collect();
        assert_eq!(vals, vec![vec![0], vec![1]]);
        assert_eq!(rs.sums, vec![2, 3]);
    }

    #[test]
    fn enumeration_respects_cap() {
        let old = limits::cell_cap();
        limits::set_cell_cap(2);
        let r = enumerate_recurrents(&k3(), 0);
        limits::set_cell_cap(old);
        assert!(matches!(r, Err(Error::SizeCap { .. })));
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(&c3()).unwrap(), 1);
        assert_eq!(kappa(&k3()).unwrap(), 3);
        assert_eq!(kappa(&doubled()).unwrap(), 2);
        for s in 0..3 {
            assert_eq!(kappa_with_sink(&k3(), s).unwrap(), 3);
        }
    }

    #[test]
    fn level_examples() {
        let h = c3();
        assert_eq!(level(&h, 0, &cfg(&h, "")).unwrap(), 0);
        let h = k3();
        assert_eq!(level(&h, 0, &cfg(&h, "a=1,b=1")).unwrap(), 1);
        assert_eq!(level(&h, 0, &cfg(&h, "")), Err(Error::NotRecurrent));
        let h = doubled();
        assert_eq!(level(&h, 0, &cfg(&h, "v=1")).unwrap(), 1);
    }

    #[test]
    fn loop_lift_examples() {
        let h = k3();
        let c = cfg(&h, "a=1");
        assert_eq!(loop_lift(&h, 0, &c).unwrap(), c);

        let looped = g(&[("u", "v"), ("u", "v"), ("v", "u"), ("v", "u"), ("v", "v")]);
        let (bare, _) = looped.remove_loops();
        for (before, after) in [(0, 1), (1, 2)] {
            let c = Configuration::from_chips(&bare, Some(0), vec![0, before]).unwrap();
            let lifted = loop_lift(&looped, 0, &c).unwrap();
            assert_eq!(lifted.get(1), after);
            assert!(is_recurrent(&looped, 0, &lifted).unwrap());
        }
    }

    #[test]
    fn support_examples() {
        let h = k3();
        assert_eq!(support_after_sink_fire(&h, 0, &cfg(&h, "a=1,b=1")).unwrap(), vec![1, 2]);
        assert_eq!(support_after_sink_fire(&h, 0, &cfg(&h, "a=1,b=0")).unwrap(), vec![1]);
        let h = c3();
        assert_eq!(support_after_sink_fire(&h, 0, &cfg(&h, "")).unwrap(), vec![1]);
    }

    #[test]
    fn minimal_and_minimum() {
        let h = k3();
        let rs = enumerate_recurrents(&h, 0).unwrap();
        let c = cfg(&h, "a=1,b=0");
        assert!(is_minimal(&rs, &c).unwrap());
        assert!(is_minimum(&rs, &c).unwrap());
        let c = cfg(&h, "a=1,b=1");
        assert!(!is_minimal(&rs, &c).unwrap());
        assert!(!is_minimum(&rs, &c).unwrap());
        assert_eq!(is_minimal(&rs, &cfg(&h, "")), Err(Error::NotRecurrent));
    }

    #[test]
    fn json_shape() {
        let h = k3();
        let rs = enumerate_recurrents(&h, 0).unwrap();
        let v = rs.to_json(&h);
        assert_eq!(v["sink"], "s");
        assert_eq!(v["kappa"], 3);
        assert_eq!(v["configs"].as_array().unwrap().len(), 3);
        assert_eq!(v["configs"][0]["chips"]["b"], 1);
        assert_eq!(v["configs"][2]["level"], 1);
    }
}
