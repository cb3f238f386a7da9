//! Named property families run over one graph at a time, as used by the
//! `check` command.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::MultiDigraph;
use crate::lattice;
use crate::recurrent::{self, enumerate_recurrents};
use crate::sink_bijection::{self, round_trip, swap_number, theta};
use crate::tutte::{self, applicable_sites, recursion_identities};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Property {
    SinkIndependence,
    Recursions,
    Theta,
    MaxSum,
    BurningUniqueness,
}

impl Property {
    pub const ALL: [Property; 5] = [
        Property::SinkIndependence,
        Property::Recursions,
        Property::Theta,
        Property::MaxSum,
        Property::BurningUniqueness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::SinkIndependence => "sink-independence",
            Property::Recursions => "recursions",
            Property::Theta => "theta",
            Property::MaxSum => "max-sum",
            Property::BurningUniqueness => "burning-uniqueness",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Hypothesis(format!("unknown property `{s}`")))
    }
}

/// Result of one property family on one graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub cases: u64,
    pub details: Vec<String>,
    pub violations: Vec<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: Outcome) {
        self.cases += other.cases;
        self.details.extend(other.details);
        self.violations.extend(other.violations);
    }
}

fn seq(xs: &[u64]) -> String {
    let parts: Vec<String> = xs.iter().map(u64::to_string).collect();
    format!("({})", parts.join(","))
}

/// Runs `property` on `g`. Disagreements are reported as violations;
/// size caps and malformed input stay errors.
pub fn run(property: Property, g: &MultiDigraph) -> Result<Outcome> {
    g.require_eulerian()?;
    let mut out = Outcome::default();
    match property {
        Property::SinkIndependence => match sink_bijection::sink_independence_sets(g) {
            Ok((sums, sets)) => {
                let t0 = tutte::tutte_from_set(&sets[0]);
                for rs in &sets {
                    out.cases += 1;
                    out.details.push(format!(
                        "sink {}: chip totals {}, sums {}",
                        g.label(rs.sink),
                        seq(&rs.sorted_chip_totals()),
                        seq(&rs.sorted_sums())
                    ));
                    if tutte::tutte_from_set(rs) != t0 {
                        out.violations.push(format!("T differs at sink {}", g.label(rs.sink)));
                    }
                }
                out.details.push(format!("common sums {}, T = {t0}", seq(&sums)));
            }
            Err(e @ Error::SinkDependence { .. }) => out.violations.push(e.to_string()),
            Err(e) => return Err(e),
        },
        Property::Recursions => {
            for (kind, site) in applicable_sites(g)? {
                for id in recursion_identities(g, kind, site)? {
                    out.cases += 1;
                    if !id.holds() {
                        out.violations.push(format!("{kind} at {site:?}: {} gives {} vs {}", id.name, id.lhs, id.rhs));
                    }
                }
            }
            for s in 0..g.vertex_count() {
                let nbrs: Vec<usize> = g.out_neighbors(s).iter().map(|&(v, _)| v).collect();
                for mask in 1u64..(1u64 << nbrs.len()) {
                    let w: Vec<usize> = (0..nbrs.len()).filter(|i| mask >> i & 1 == 1).map(|i| nbrs[i]).collect();
                    out.cases += 1;
                    if !tutte::pw_closed_form_check(g, s, &w)? {
                        out.violations.push(format!("P_W closed form at sink {} W {w:?}", g.label(s)));
                    }
                }
            }
        }
        Property::Theta => {
            let n = g.vertex_count();
            let sets = (0..n).map(|s| enumerate_recurrents(g, s)).collect::<Result<Vec<_>>>()?;
            let mut largest = 0;
            for (s1, rs) in sets.iter().enumerate() {
                let least = rs.configs.iter().map(|c| c.total()).min().unwrap_or(0);
                for s2 in (0..n).filter(|&t| t != s1) {
                    let mut swaps = Vec::with_capacity(rs.len());
                    for c in &rs.configs {
                        out.cases += 1;
                        let r = theta(g, s1, s2, c)?;
                        let tag = format!("{} -> {} at {}", g.label(s1), g.label(s2), c.to_literal(g));
                        if g.out_degree(s1) as u64 + c.total() != g.out_degree(s2) as u64 + r.image.total() {
                            out.violations.push(format!("sum not preserved: {tag}"));
                        }
                        if swap_number(g, s2, s1, &r.image)? != r.swap_number {
                            out.violations.push(format!("swap symmetry: {tag}"));
                        }
                        if !round_trip(g, &r)? {
                            out.violations.push(format!("round trip: {tag}"));
                        }
                        if c.total() == least && r.swap_number != 0 {
                            out.violations.push(format!("minimum with swap {}: {tag}", r.swap_number));
                        }
                        largest = largest.max(r.swap_number);
                        swaps.push(r.swap_number);
                    }
                    for i in 0..rs.len() {
                        for j in 0..rs.len() {
                            if rs.configs[i].le(&rs.configs[j]) && swaps[i] > swaps[j] {
                                out.violations.push(format!(
                                    "monotonicity {} -> {}: {} vs {}",
                                    g.label(s1),
                                    g.label(s2),
                                    rs.configs[i].to_literal(g),
                                    rs.configs[j].to_literal(g)
                                ));
                            }
                        }
                    }
                }
            }
            out.details.push(format!("largest swap number {largest}"));
        }
        Property::MaxSum => {
            for s in 0..g.vertex_count() {
                let (checked, bad) = lattice::max_sum_check(g, s)?;
                out.cases += checked;
                for v in bad {
                    out.violations.push(format!(
                        "sink {}: stable {} outweighs recurrent {}",
                        g.label(s),
                        v.stable.to_literal(g),
                        v.recurrent.to_literal(g)
                    ));
                }
            }
        }
        Property::BurningUniqueness => {
            for s in 0..g.vertex_count() {
                for c in enumerate_recurrents(g, s)?.configs {
                    out.cases += 1;
                    let (after, record) = recurrent::burn(g, s, &c)?;
                    let once = (0..g.vertex_count()).all(|v| v == s || record.counts[v] == 1);
                    if after != c || !once {
                        out.violations.push(format!(
                            "sink {}: {} fires {:?}",
                            g.label(s),
                            c.to_literal(g),
                            record.counts
                        ));
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn every_property_passes_on_fixtures() {
        for (name, g) in fixtures::named() {
            if !g.is_eulerian() || g.vertex_count() > 4 && name != "fig1" {
                continue;
            }
            for p in Property::ALL {
                let out = run(p, &g).unwrap();
                assert!(out.passed(), "{name} {p}: {:?}", out.violations);
                assert!(out.cases > 0, "{name} {p}");
            }
        }
    }

    #[test]
    fn property_names_round_trip() {
        for p in Property::ALL {
            assert_eq!(p.name().parse::<Property>().unwrap(), p);
        }
        assert!("nope".parse::<Property>().is_err());
    }
}
