//! Swap numbers and the sum-preserving bijection θ between the recurrent
//! sets of two sinks.

use num_traits::ToPrimitive;
use serde_json::json;

use crate::dynamics::{augment_sink, stabilize_toward, Configuration};
use crate::error::{Error, Result};
use crate::graph::MultiDigraph;
use crate::linalg;
use crate::recurrent::{self, is_recurrent, RecurrentSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapResult {
    pub source_sink: usize,
    pub target_sink: usize,
    pub input: Configuration,
    pub swap_number: u64,
    /// Recurrent wrt `target_sink`.
    pub image: Configuration,
    /// Full-domain stabilization toward `target_sink`, before restriction.
    pub augmented_image: Configuration,
}

impl SwapResult {
    pub fn to_json(&self, g: &MultiDigraph) -> serde_json::Value {
        json!({
            "source_sink": g.label(self.source_sink),
            "target_sink": g.label(self.target_sink),
            "input": self.input.to_json(g),
            "swap_number": self.swap_number,
            "image": self.image.to_json(g),
            "sum": g.out_degree(self.target_sink) as u64 + self.image.total(),
        })
    }
}

fn check_pair(g: &MultiDigraph, s1: usize, s2: usize, c: &Configuration) -> Result<()> {
    g.check_vertex(s2)?;
    if s1 == s2 {
        return Err(Error::Hypothesis("source and target sinks coincide".into()));
    }
    if !is_recurrent(g, s1, c)? {
        return Err(Error::NotRecurrent);
    }
    Ok(())
}

/// Finds the swap number by adding one chip to `s1` at a time and
/// restabilizing toward `s2`; returns it with the stabilized full-domain
/// configuration.
fn search(g: &MultiDigraph, s1: usize, s2: usize, c: &Configuration) -> Result<(u64, Configuration)> {
    check_pair(g, s1, s2, c)?;
    let bound = linalg::reduced_laplacian_det(g, s1)
        .to_u64()
        .ok_or_else(|| Error::Internal("recurrent count exceeds u64".into()))?;
    let target = g.out_degree(s2) as u64;
    let (mut state, _) = stabilize_toward(g, &augment_sink(g, c, 0)?, s2)?;
    for i in 0..bound {
        if state.get(s2) == target + i {
            return Ok((i, state));
        }
        let mut next = state;
        next.chips_mut()[s1] += 1;
        state = stabilize_toward(g, &next, s2)?.0;
    }
    Err(Error::Internal(format!(
        "no swap number below the bound {bound} for `{}` -> `{}`",
        g.label(s1),
        g.label(s2)
    )))
}

pub fn swap_number(g: &MultiDigraph, s1: usize, s2: usize, c: &Configuration) -> Result<u64> {
    Ok(search(g, s1, s2, c)?.0)
}

pub fn theta(g: &MultiDigraph, s1: usize, s2: usize, c: &Configuration) -> Result<SwapResult> {
    let (i, augmented) = search(g, s1, s2, c)?;
    let image = augmented.restrict(s2)?;
    Ok(SwapResult {
        source_sink: s1,
        target_sink: s2,
        input: c.clone(),
        swap_number: i,
        image,
        augmented_image: augmented,
    })
}

/// Stabilizes the augmented image back toward the source sink; the
/// bijection requires this to reproduce augment_sink(input, swap_number).
pub fn round_trip(g: &MultiDigraph, r: &SwapResult) -> Result<bool> {
    let (back, _) = stabilize_toward(g, &r.augmented_image, r.source_sink)?;
    Ok(back == augment_sink(g, &r.input, r.swap_number)?)
}

/// Enumerates every sink, asserts the sorted sum sequences (and hence the
/// level sequences) agree, and returns the common sequence.
pub fn check_sink_independence(g: &MultiDigraph) -> Result<Vec<u64>> {
    Ok(sink_independence_sets(g)?.0)
}

/// As `check_sink_independence`, also returning each sink's recurrent set.
pub fn sink_independence_sets(g: &MultiDigraph) -> Result<(Vec<u64>, Vec<RecurrentSet>)> {
    g.require_eulerian()?;
    let sets = (0..g.vertex_count())
        .map(|s| recurrent::enumerate_recurrents(g, s))
        .collect::<Result<Vec<_>>>()?;
    let first = sets[0].sorted_sums();
    let first_levels = sets[0].sorted_levels();
    for rs in &sets[1..] {
        let sums = rs.sorted_sums();
        let levels = rs.sorted_levels();
        if sums != first || levels != first_levels {
            return Err(Error::SinkDependence {
                sink_a: g.label(0).to_string(),
                seq_a: first,
                sink_b: g.label(rs.sink).to_string(),
                seq_b: sums,
            });
        }
    }
    Ok((first, sets))
}
