//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines are always printed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use chipfire::dynamics::Configuration;
use chipfire::fixtures;
use chipfire::lattice;
use chipfire::linalg::reduced_laplacian_det;
use chipfire::oracles;
use chipfire::random;
use chipfire::recurrent::{self, enumerate_recurrents};
use chipfire::sink_bijection::{self, round_trip, swap_number, theta};
use chipfire::tutte::{self, applicable_sites, check_recursion, pw_closed_form_check};
use chipfire::MultiDigraph;
use num_bigint::BigInt;
use num_rational::BigRational;

const CORPUS_SEED: u64 = 20_240_917;
const CORPUS_SIZE: usize = 200;

type Check = std::result::Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T>(r: chipfire::Result<T>, what: &str) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn show(g: &MultiDigraph) -> String {
    g.to_edge_list().replace('\n', "; ")
}

fn corpus() -> Vec<MultiDigraph> {
    random::eulerian_corpus(CORPUS_SEED, CORPUS_SIZE)
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let g = fixtures::fig1();
    let s = ok(g.vertex("s"), "vertex")?;
    let v3 = ok(g.vertex("v3"), "vertex")?;
    let at_s = ok(enumerate_recurrents(&g, s), "enumerate")?;
    let at_v3 = ok(enumerate_recurrents(&g, v3), "enumerate")?;
    ensure!(at_s.len() == 6 && at_v3.len() == 6, "counts {} and {}", at_s.len(), at_v3.len());
    let totals_s = at_s.sorted_chip_totals();
    let totals_v3 = at_v3.sorted_chip_totals();
    ensure!(totals_s == [2, 2, 3, 3, 3, 4], "chip totals at s: {totals_s:?}");
    ensure!(totals_v3 == [1, 1, 2, 2, 2, 3], "chip totals at v3: {totals_v3:?}");
    ensure!(at_s.sorted_sums() == at_v3.sorted_sums(), "sum sequences differ");
    let t0 = tutte::tutte_from_set(&at_s);
    for v in 0..g.vertex_count() {
        let t = ok(tutte::tutte_gen(&g, v), "tutte")?;
        ensure!(t == t0, "T differs at `{}`: {t} vs {t0}", g.label(v));
    }
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(1), "took {took:?}");
    Ok(format!(
        "totals {totals_s:?} / {totals_v3:?}, sums {:?}, T = {t0}, {took:.2?}",
        at_s.sorted_sums()
    ))
}

fn criterion_2(corpus: &[MultiDigraph]) -> Check {
    let start = Instant::now();
    let mut sinks = 0;
    for g in corpus {
        let (sums, sets) = match sink_bijection::sink_independence_sets(g) {
            Ok(x) => x,
            Err(e) => return Err(format!("{}: {e}", show(g))),
        };
        let t0 = tutte::tutte_from_set(&sets[0]);
        for rs in &sets {
            ensure!(rs.sorted_sums() == sums, "sums differ on {}", show(g));
            ensure!(tutte::tutte_from_set(rs) == t0, "T differs on {}", show(g));
            sinks += 1;
        }
    }
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(60), "took {took:?}");
    Ok(format!("{} graphs, {sinks} sinks, {took:.2?}", corpus.len()))
}

fn criterion_3(corpus: &[MultiDigraph]) -> Check {
    let mut pairs = 0u64;
    let mut max_swap = 0u64;
    for g in corpus {
        let n = g.vertex_count();
        let sets: Vec<_> = (0..n)
            .map(|s| enumerate_recurrents(g, s))
            .collect::<chipfire::Result<_>>()
            .map_err(|e| e.to_string())?;
        for s1 in 0..n {
            let rs = &sets[s1];
            let min_total = rs.configs.iter().map(Configuration::total).min().unwrap_or(0);
            for s2 in (0..n).filter(|&t| t != s1) {
                let mut swaps = Vec::with_capacity(rs.len());
                let mut images = Vec::with_capacity(rs.len());
                for c in &rs.configs {
                    let r = ok(theta(g, s1, s2, c), "theta")?;
                    let sum1 = g.out_degree(s1) as u64 + c.total();
                    let sum2 = g.out_degree(s2) as u64 + r.image.total();
                    ensure!(sum1 == sum2, "sum not preserved on {}", show(g));
                    ensure!(sets[s2].position(&r.image).is_some(), "image not recurrent on {}", show(g));
                    let back = ok(swap_number(g, s2, s1, &r.image), "swap back")?;
                    ensure!(back == r.swap_number, "swap symmetry {back} vs {} on {}", r.swap_number, show(g));
                    let rev = ok(theta(g, s2, s1, &r.image), "theta back")?;
                    ensure!(rev.image == *c, "theta back is not the identity on {}", show(g));
                    ensure!(ok(round_trip(g, &r), "round trip")?, "round trip failed on {}", show(g));
                    if c.total() == min_total {
                        ensure!(r.swap_number == 0, "minimum with swap {} on {}", r.swap_number, show(g));
                    }
                    max_swap = max_swap.max(r.swap_number);
                    swaps.push(r.swap_number);
                    images.push(r.image.chips().to_vec());
                    pairs += 1;
                }
                for i in 0..rs.len() {
                    for j in 0..rs.len() {
                        if rs.configs[i].le(&rs.configs[j]) {
                            ensure!(swaps[i] <= swaps[j], "monotonicity fails on {}", show(g));
                        }
                    }
                }
                images.sort();
                images.dedup();
                ensure!(images.len() == rs.len(), "theta not injective on {}", show(g));
            }
        }
    }
    Ok(format!("{pairs} (configuration, sink pair) cases, largest swap number {max_swap}"))
}

fn criterion_4(corpus: &[MultiDigraph]) -> Check {
    let one = BigRational::from_integer(BigInt::from(1));
    let zero = BigRational::from_integer(BigInt::from(0));
    let mut cases = 0;
    let mut looped = 0;
    for g in corpus {
        let t = ok(tutte::tutte(g), "tutte")?;
        let at1 = ok(t.eval(&one), "eval")?;
        let at0 = ok(t.eval(&zero), "eval")?;
        // every level carries the loop count, so the y = 0 count lives on
        // the loopless reduction
        let (bare, loops) = g.remove_loops();
        let bare_at0 = ok(ok(tutte::tutte(&bare), "tutte")?.eval(&zero), "eval")?;
        if loops > 0 {
            ensure!(at0 == zero, "T(0)={at0} on a graph with loops: {}", show(g));
            looped += 1;
        }
        for s in 0..g.vertex_count() {
            let det = BigRational::from_integer(reduced_laplacian_det(g, s));
            let arb = BigRational::from_integer(ok(oracles::brute_arborescences(g, s), "arborescences")?);
            let acyc = BigRational::from_integer(ok(oracles::brute_acyclic_sets(g, s), "acyclic sets")?);
            let fast = BigRational::from_integer(ok(tutte::max_acyclic_unique_sink_count(g, s), "acyclic count")?);
            ensure!(at1 == det && det == arb, "T(1)={at1} det={det} brute={arb} on {}", show(g));
            ensure!(bare_at0 == acyc && acyc == fast, "T(0)={bare_at0} brute={acyc} fast={fast} on {}", show(g));
            cases += 1;
        }
    }
    Ok(format!("{cases} (graph, sink) cases, {looped} graphs with loops have T(0) = 0"))
}

fn undirected_family() -> Vec<MultiDigraph> {
    let mut out = Vec::new();
    for n in 1..=5 {
        out.extend(random::all_simple_connected(n));
    }
    for n in 1..=3 {
        out.extend(random::all_multigraphs(n, 2, 1));
    }
    let mut r = random::rng(CORPUS_SEED ^ 0x55);
    for _ in 0..200 {
        out.push(random::random_undirected(&mut r, 5, 7));
    }
    out
}

fn criterion_5() -> Check {
    let k3 = ok(tutte::tutte(&fixtures::k3()), "tutte")?;
    ensure!(k3.to_string() == "2 + y", "K3 gives {k3}");
    let banana = ok(tutte::tutte(&fixtures::banana(2)), "tutte")?;
    ensure!(banana.to_string() == "1 + y", "banana gives {banana}");
    let family = undirected_family();
    for g in &family {
        let ours = ok(tutte::tutte(g), "tutte")?;
        let theirs = ok(tutte::undirected_tutte_oracle(g), "oracle")?;
        ensure!(ours == theirs, "{ours} vs {theirs} on {}", show(g));
    }
    Ok(format!("K3 -> 2 + y, banana -> 1 + y, {} undirected multigraphs", family.len()))
}

fn criterion_6(corpus: &[MultiDigraph]) -> Check {
    let mut graphs: Vec<MultiDigraph> = corpus.to_vec();
    graphs.extend(fixtures::named().into_iter().map(|(_, g)| g).filter(|g| g.is_eulerian()));
    let mut r = random::rng(CORPUS_SEED ^ 0xAA);
    for _ in 0..60 {
        graphs.push(random::random_undirected(&mut r, 4, 6));
    }
    let mut by_kind = std::collections::BTreeMap::new();
    let mut pw = 0;
    for g in &graphs {
        for (kind, site) in ok(applicable_sites(g), "sites")? {
            ensure!(ok(check_recursion(g, kind, site), "recursion")?, "{kind} at {site:?} fails on {}", show(g));
            *by_kind.entry(kind.name()).or_insert(0) += 1;
            if kind == tutte::RecursionKind::DelContract && g.is_undirected() {
                *by_kind.entry("del_contract_undirected").or_insert(0) += 1;
            }
        }
        for s in 0..g.vertex_count() {
            let nbrs: Vec<usize> = g.out_neighbors(s).iter().map(|&(v, _)| v).collect();
            for mask in 1u32..(1 << nbrs.len()) {
                let w: Vec<usize> = (0..nbrs.len()).filter(|i| mask >> i & 1 == 1).map(|i| nbrs[i]).collect();
                ensure!(ok(pw_closed_form_check(g, s, &w), "P_W")?, "P_W at {s} {w:?} fails on {}", show(g));
                pw += 1;
            }
            if !nbrs.is_empty() {
                let z = ok(tutte::mobius_self_test(g, s), "self test")?;
                ensure!(z.is_zero(), "inclusion-exclusion leaves {z} on {}", show(g));
            }
        }
    }
    for kind in ["loop", "bridge_no_reverse", "bridge_reverse", "del_contract", "del_contract_undirected", "mobius"] {
        ensure!(by_kind.get(kind).copied().unwrap_or(0) > 0, "no applicable site for {kind}");
    }
    Ok(format!("{by_kind:?}, {pw} P_W checks"))
}

fn small_eulerian(corpus: &[MultiDigraph]) -> Vec<MultiDigraph> {
    let mut out: Vec<MultiDigraph> = corpus.iter().filter(|g| g.vertex_count() <= 4).cloned().collect();
    let mut r = random::rng(CORPUS_SEED ^ 0x44);
    for _ in 0..100 {
        out.push(random::random_eulerian(&mut r, 4, 10, true));
    }
    out.push(fixtures::c3());
    out.push(fixtures::k3());
    out.push(fixtures::complete(4));
    out.push(fixtures::banana(3));
    out
}

fn criterion_7(corpus: &[MultiDigraph]) -> Check {
    let mut stable = 0;
    let graphs = small_eulerian(corpus);
    for g in &graphs {
        for s in 0..g.vertex_count() {
            let (checked, bad) = ok(lattice::max_sum_check(g, s), "max sum")?;
            ensure!(bad.is_empty(), "{} violations on {}", bad.len(), show(g));
            stable += checked;
        }
    }
    Ok(format!("{} graphs, {stable} stable configurations", graphs.len()))
}

fn criterion_8(corpus: &[MultiDigraph]) -> Check {
    let mut count = 0;
    let mut brute = 0;
    for g in corpus {
        for s in 0..g.vertex_count() {
            let rs = ok(enumerate_recurrents(g, s), "enumerate")?;
            for c in &rs.configs {
                let (after, record) = ok(recurrent::burn(g, s, c), "burn")?;
                ensure!(after == *c, "burning does not return on {}", show(g));
                let once = (0..g.vertex_count()).all(|v| v == s || record.counts[v] == 1);
                ensure!(once && record.counts[s] == 0, "firing counts {:?} on {}", record.counts, show(g));
                count += 1;
            }
            if g.vertex_count() <= oracles::RECURRENT_MAX_VERTICES {
                let reference = ok(oracles::brute_recurrents(g, s), "brute recurrents")?;
                ensure!(reference == rs.configs, "burning and closure disagree on {}", show(g));
                brute += 1;
            }
        }
    }
    Ok(format!("{count} recurrent configurations, {brute} sets matched by closure"))
}

fn criterion_9(corpus: &[MultiDigraph]) -> Check {
    let mut eulerian = 0;
    for g in small_eulerian(corpus).iter().filter(|g| g.arc_count() <= lattice::GENERAL_MAX_ARCS) {
        let report = ok(lattice::conjecture1_check(g), "conjecture1")?;
        for p in &report.per_sink {
            let sums = ok(enumerate_recurrents(g, p.sink), "enumerate")?.sorted_sums();
            ensure!(p.class_maxima == sums, "class maxima {:?} vs sums {sums:?} on {}", p.class_maxima, show(g));
            let general = ok(lattice::recurrents_general(g, p.sink), "definitional")?;
            let burning = ok(enumerate_recurrents(g, p.sink), "enumerate")?.configs;
            ensure!(general == burning, "definitional test disagrees with burning on {}", show(g));
        }
        ensure!(report.consistent, "Eulerian report inconsistent on {}", show(g));
        eulerian += 1;
    }
    let mut r = random::rng(CORPUS_SEED ^ 0x99);
    let mut consistent = 0;
    let total = 120;
    for _ in 0..total {
        let g = random::random_strongly_connected_non_eulerian(&mut r, 4, 10);
        let report = ok(lattice::conjecture1_check(&g), "conjecture1")?;
        ensure!(report.per_sink.len() == g.vertex_count(), "incomplete report on {}", show(&g));
        for p in &report.per_sink {
            let det = reduced_laplacian_det(&g, p.sink);
            ensure!(BigInt::from(p.recurrent_count) == det, "recurrent count {} vs det {det} on {}", p.recurrent_count, show(&g));
        }
        consistent += report.consistent as usize;
    }
    let g = fixtures::fig13();
    let c = fixtures::fig13_config(&g);
    let v4 = ok(g.vertex("v4"), "vertex")?;
    let v5 = ok(g.vertex("v5"), "vertex")?;
    let rs = ok(enumerate_recurrents(&g, v5), "enumerate")?;
    ensure!(ok(recurrent::is_minimal(&rs, &c), "minimal")?, "displayed configuration is not minimal");
    let i = ok(swap_number(&g, v5, v4, &c), "swap")?;
    ensure!(i == 1, "swap number {i}");
    Ok(format!(
        "{eulerian} Eulerian inputs reduce to the sum multisets; {total} non-Eulerian reports ({consistent} consistent); fixture swap number {i}"
    ))
}

fn main() -> ExitCode {
    // libtest arguments such as --nocapture are accepted and ignored
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let corpus = corpus();
    let criteria: Vec<Criterion> = vec![
        ("1 running example", Box::new(criterion_1)),
        ("2 sink independence", Box::new(|| criterion_2(&corpus))),
        ("3 theta suite", Box::new(|| criterion_3(&corpus))),
        ("4 evaluation oracles", Box::new(|| criterion_4(&corpus))),
        ("5 undirected agreement", Box::new(criterion_5)),
        ("6 recursion suite", Box::new(|| criterion_6(&corpus))),
        ("7 max-sum lemma", Box::new(|| criterion_7(&corpus))),
        ("8 burning uniqueness", Box::new(|| criterion_8(&corpus))),
        ("9 class-maximum checker", Box::new(|| criterion_9(&corpus))),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{:.2?}]", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
