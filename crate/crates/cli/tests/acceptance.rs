//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on failure.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use itertools::Itertools;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use sibtool_core::cliques::{
    enumerate_maximal_kcliques_with, exchangeable, extend_clique, meld, CliqueLimits, KClique,
};
use sibtool_core::embed::{census, find_embedding};
use sibtool_core::mutalg::{max_disjoint_realizations, QfConjunction};
use sibtool_core::presentations::{builtin, cellular, chain, GridPresentation, Presentation, Verdict};
use sibtool_core::structure::{parse_structure, serialize_structure};
use sibtool_core::{Structure, Tuple};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let spent = start.elapsed();
    ensure(spent < limit, || format!("took {:.1}s, limit {}s", spent.as_secs_f64(), limit.as_secs()))
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn docs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs")
}

/// 200 seeded structures, n ≤ 7, at most two relations of arity at most 2.
fn small_corpus() -> Vec<Structure> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..200)
        .map(|_| {
            let sig = small_signature(&mut rng);
            let n = rng.random_range(2..=7);
            let density = rng.random_range(0.05..0.6);
            random_structure(&mut rng, &sig, n, density)
        })
        .collect()
}

fn exchangeability_equivalence() -> Check {
    let start = Instant::now();
    let corpus = small_corpus();
    let (mut pairs, mut positive) = (0, 0);
    for (i, m) in corpus.iter().enumerate() {
        for k in 1..=2 {
            for (a, b) in distinct_tuples(m.size(), k).into_iter().tuple_combinations() {
                if !pairwise_disjoint(&[a.clone(), b.clone()]) {
                    continue;
                }
                let by_type = type_exchangeable(m, &a, &b);
                let by_swap = swap_exchangeable(m, &a, &b);
                let lib = exchangeable(m, &a, &b).map_err(|e| format!("structure {i}: {e}"))?;
                ensure(by_type == by_swap && lib == by_swap, || {
                    format!("structure {i}, {a:?} {b:?}: type {by_type}, swap {by_swap}, library {lib}")
                })?;
                pairs += 1;
                positive += usize::from(by_swap);
            }
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{} structures, {pairs} disjoint pairs ({positive} exchangeable), full agreement", corpus.len()))
}

/// Pairwise disjoint families of 1..=4 distinct `k`-tuples, as sorted lists.
fn disjoint_families(n: usize, k: usize) -> Vec<Vec<Tuple>> {
    let tuples = distinct_tuples(n, k);
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<Tuple>)> = vec![(0, Vec::new())];
    while let Some((next, fam)) = stack.pop() {
        if !fam.is_empty() {
            out.push(fam.clone());
        }
        if fam.len() == 4 {
            continue;
        }
        for (i, t) in tuples.iter().enumerate().skip(next) {
            if fam.iter().all(|f| f.iter().all(|e| !t.contains(e))) {
                let mut bigger = fam.clone();
                bigger.push(t.clone());
                stack.push((i + 1, bigger));
            }
        }
    }
    out
}

fn clique_characterization() -> Check {
    let corpus = small_corpus();
    let (mut families, mut cliques) = (0, 0);
    for (i, m) in corpus.iter().enumerate() {
        for k in 1..=2 {
            for fam in disjoint_families(m.size(), k) {
                let oracle = totally_indiscernible(m, &fam);
                let lib = match KClique::new(m, k, fam.clone()) {
                    Ok(_) => true,
                    Err(sibtool_core::Error::Verification(_)) => false,
                    Err(e) => return Err(format!("structure {i}, {fam:?}: {e}")),
                };
                ensure(lib == oracle, || format!("structure {i}, {fam:?}: library {lib}, oracle {oracle}"))?;
                families += 1;
                cliques += usize::from(oracle);
            }
        }
    }
    Ok(format!("{families} disjoint families ({cliques} cliques), full agreement"))
}

/// A random cellular presentation over `E/2 P/1`; `None` if it fails to load.
fn random_cellular(rng: &mut impl Rng, max_k: usize) -> Option<Presentation> {
    let base_n = rng.random_range(0..=2);
    let mut base_facts = Vec::new();
    for a in 0..base_n {
        if rng.random_bool(0.4) {
            base_facts.push(format!("P {a}"));
        }
        for b in 0..base_n {
            if rng.random_bool(0.3) {
                base_facts.push(format!("E {a} {b}"));
            }
        }
    }
    let pick = |rng: &mut dyn rand::RngCore, options: &[&str], p: f64| -> Vec<String> {
        options.iter().filter(|_| rng.random_bool(p)).map(|s| s.to_string()).collect()
    };
    let count = rng.random_range(1..=2);
    let mut families = Vec::new();
    for f in 0..count {
        let k = rng.random_range(1..=max_k);
        let (mut facts, cross) = if k == 1 {
            (pick(rng, &["P p0", "E p0 p0"], 0.4), pick(rng, &["E x0 y0"], 0.4))
        } else {
            (
                pick(rng, &["E p0 p1", "E p1 p0", "P p0", "P p1", "E p0 p0"], 0.35),
                pick(rng, &["E x0 y0", "E x0 y1", "E x1 y1"], 0.25),
            )
        };
        if base_n > 0 {
            facts.extend(pick(rng, &["E k0 p0", "E p0 k0"], 0.3));
        }
        let count: Value = if rng.random_bool(0.8) { "infinite".into() } else { rng.random_range(2..=4).into() };
        families.push(serde_json::json!({
            "name": format!("f{f}"), "k": k, "count": count, "facts": facts, "cross_facts": cross,
        }));
    }
    let mut cross_family = Vec::new();
    if count == 2 && rng.random_bool(0.4) {
        cross_family.push(serde_json::json!({ "first": "f0", "second": "f1", "facts": ["E x0 y0"] }));
    }
    let doc = serde_json::json!({
        "kind": "cellular", "schema_version": 1, "language": ["E/2", "P/1"],
        "base": { "universe": base_n, "facts": base_facts },
        "families": families, "cross_family_facts": cross_family,
    });
    Presentation::from_json(&doc.to_string()).ok()
}

/// Pairwise disjoint and pairwise swap-exchangeable, checked by the oracle.
fn oracle_clique(m: &Structure, members: &[Tuple]) -> bool {
    pairwise_disjoint(members) && members.iter().tuple_combinations().all(|(a, b)| swap_exchangeable(m, a, b))
}

/// A structure with its maximal 1- and 2-cliques.
struct Sample {
    m: Structure,
    cliques: [Vec<KClique>; 2],
}

fn sample(m: Structure) -> Option<Sample> {
    let enumerate = |k: usize| -> Option<Vec<KClique>> {
        if m.size() < 2 * k {
            return Some(Vec::new());
        }
        let limits = CliqueLimits { clique_cap: 1_000, ..CliqueLimits::default() };
        enumerate_maximal_kcliques_with(&m, k, None, &limits).ok()
    };
    let cliques = [enumerate(1)?, enumerate(2)?];
    Some(Sample { m, cliques })
}

/// Truncations of random valid cellular presentations with at most 1000
/// maximal cliques per `k`; also returns how many were rejected for that.
fn meld_samples(rng: &mut ChaCha8Rng, wanted: usize) -> (Vec<Sample>, usize) {
    let mut out = Vec::new();
    let mut rejected = 0;
    while out.len() < wanted {
        let max_k = if rng.random_bool(0.3) { 2 } else { 1 };
        let Some(p) = random_cellular(rng, max_k) else { continue };
        let t = 2 * max_k + 3;
        if !p.validate(t).is_ok_and(|r| r.is_valid()) {
            continue;
        }
        match sample(p.truncate(t).expect("valid presentations truncate")) {
            Some(s) => out.push(s),
            None => rejected += 1,
        }
    }
    (out, rejected)
}

fn meld_and_extension() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (samples, rejected) = meld_samples(&mut rng, 260);
    let corpus: Vec<Sample> = small_corpus().into_iter().filter_map(sample).collect();
    let r = 2;

    let mut melds = 0;
    let mut across = 0;
    for (i, s) in samples.iter().chain(&corpus).enumerate() {
        let m = &s.m;
        for k in 1..=2 {
            let cliques = &s.cliques[k - 1];
            for _ in 0..2 {
                let Some(c1) = cliques.choose(&mut rng) else { break };
                let shared = c1.members.choose(&mut rng).expect("cliques are nonempty").clone();
                let holders: Vec<&KClique> = cliques.iter().filter(|c| c.contains(&shared)).collect();
                let c2 = *holders.choose(&mut rng).expect("c1 holds the shared member");
                let mut a: Vec<Tuple> = vec![shared.clone()];
                a.extend(c1.members.iter().filter(|t| **t != shared && rng.random_bool(0.5)).cloned());
                let a_private: Vec<usize> = a.iter().filter(|t| !c2.contains(t)).flatten().copied().collect();
                let mut b: Vec<Tuple> = vec![shared.clone()];
                b.extend(
                    c2.members
                        .iter()
                        .filter(|t| **t != shared && (a.contains(t) || t.iter().all(|e| !a_private.contains(e))))
                        .filter(|_| rng.random_bool(0.6))
                        .cloned(),
                );
                // hypotheses, checked independently of the library
                let only_a: BTreeSet<usize> = a.iter().filter(|t| !b.contains(t)).flatten().copied().collect();
                let only_b: BTreeSet<usize> = b.iter().filter(|t| !a.contains(t)).flatten().copied().collect();
                if !only_a.is_disjoint(&only_b) || !oracle_clique(m, &a) || !oracle_clique(m, &b) {
                    return Err(format!("structure {i}: generated meld input breaks the hypotheses"));
                }
                let ka = KClique::new(m, k, a.clone()).map_err(|e| format!("structure {i}: {e}"))?;
                let kb = KClique::new(m, k, b.clone()).map_err(|e| format!("structure {i}: {e}"))?;
                let union = meld(m, &ka, &kb).map_err(|e| format!("structure {i}, meld {a:?} {b:?}: {e}"))?;
                let expected: Vec<Tuple> = a.iter().chain(&b).cloned().sorted().dedup().collect();
                ensure(union.members == expected && oracle_clique(m, &expected), || {
                    format!("structure {i}: union of {a:?} and {b:?} is not a clique")
                })?;
                melds += 1;
                across += usize::from(c1 != c2);
            }
        }
    }
    ensure(melds >= 500, || format!("only {melds} meld cases"))?;

    let mut extensions = 0;
    let mut rechecked = 0;
    for (i, s) in samples.iter().enumerate() {
        let m = &s.m;
        for k in 1..=2 {
            let bound = 2 * k + r;
            let large: Vec<&KClique> = s.cliques[k - 1].iter().filter(|c| c.size() > bound).collect();
            let Some(a) = large.choose(&mut rng) else { continue };
            let ext = extend_clique(m, a).map_err(|e| format!("structure {i}, extending {:?}: {e}", a.members))?;
            let old: Vec<usize> = (0..m.size()).collect();
            ensure(ext.structure.induced_substructure(&old).is_ok_and(|s| s == *m), || {
                format!("structure {i}: extension changed the old structure")
            })?;
            ensure(oracle_clique(&ext.structure, &ext.clique.members), || {
                format!("structure {i}: extended clique fails")
            })?;
            for c in s.cliques[..k].iter().flatten().filter(|c| c.size() > bound) {
                ensure(oracle_clique(&ext.structure, &c.members), || {
                    format!("structure {i}: {:?} stopped being a clique", c.members)
                })?;
                rechecked += 1;
            }
            extensions += 1;
        }
    }
    ensure(extensions >= 200, || format!("only {extensions} extension cases"))?;
    Ok(format!(
        "{melds} melds ({across} across two maximal cliques); {extensions} extensions, \
         {rechecked} large cliques re-verified; {rejected} truncations over the clique cap skipped"
    ))
}

fn grid(name: &str) -> GridPresentation {
    match builtin(name) {
        Ok(Presentation::Grid(g)) => g,
        _ => panic!("{name} is a built-in grid"),
    }
}

fn nf_census() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    // every cut size is drawn below t, so uncut cliques stay strictly larger
    let t = 13;
    let mut instances = 0;
    let mut separated = 0;
    for name in ["rank0-grid", "rank0-grid-k2", "rank1-grid", "rank1-grid-k2"] {
        let g = grid(name);
        let bound = 2 * g.k() + g.signature().max_arity();
        let draws: Vec<usize> = (5..=12).filter(|&s| s > bound).collect();
        let mut outputs: Vec<(BTreeSet<usize>, Structure)> = Vec::new();
        for _ in 0..13 {
            let cut_labels: Vec<String> = loop {
                let chosen: Vec<String> = g.labels().iter().filter(|_| rng.random_bool(0.6)).cloned().collect();
                if !chosen.is_empty() {
                    break chosen;
                }
            };
            let values: Vec<usize> = draws.choose_multiple(&mut rng, cut_labels.len()).copied().collect();
            let cut: BTreeMap<String, usize> = cut_labels.into_iter().zip(values.iter().copied()).collect();
            let nf = g.generate_nf(&cut, t).map_err(|e| format!("{name} {cut:?}: {e}"))?;

            let mut expected: Vec<usize> = g.labels().iter().map(|l| cut.get(l).copied().unwrap_or(t)).collect();
            expected.sort_unstable_by(|a, b| b.cmp(a));
            ensure(nf.family_census == expected, || {
                format!("{name} {cut:?}: library census {:?}, expected {expected:?}", nf.family_census)
            })?;
            // the member pool splits into the cliques by the swap oracle alone
            let pool: Vec<Tuple> = g.layout(&nf.sizes).members.into_iter().flatten().collect();
            let mut classes: Vec<Vec<Tuple>> = Vec::new();
            for tup in pool {
                match classes.iter_mut().find(|c| swap_exchangeable(&nf.structure, &c[0], &tup)) {
                    Some(c) => c.push(tup),
                    None => classes.push(vec![tup]),
                }
            }
            ensure(classes.iter().all(|c| oracle_clique(&nf.structure, c)), || {
                format!("{name} {cut:?}: pool exchangeability is not a partition into cliques")
            })?;
            let mut oracle_sizes: Vec<usize> = classes.iter().map(Vec::len).collect();
            oracle_sizes.sort_unstable_by(|a, b| b.cmp(a));
            ensure(oracle_sizes == expected, || format!("{name} {cut:?}: oracle census {oracle_sizes:?}"))?;

            outputs.push((values.into_iter().collect(), nf.structure));
            instances += 1;
        }
        let structures: Vec<Structure> = outputs.iter().map(|(_, s)| s.clone()).collect();
        let part = census(&structures).map_err(|e| format!("{name}: {e}"))?;
        for (i, j) in (0..outputs.len()).tuple_combinations() {
            if outputs[i].0 != outputs[j].0 {
                ensure(part.block_of(i) != part.block_of(j), || {
                    format!("{name}: images {:?} and {:?} share a census block", outputs[i].0, outputs[j].0)
                })?;
                separated += 1;
            }
        }
    }
    ensure(instances >= 50, || format!("only {instances} instances"))?;
    within(start, Duration::from_secs(120))?;
    Ok(format!("{instances} instances at t = {t}, {separated} pairs with distinct images in distinct blocks"))
}

fn mstar_family() -> Check {
    let start = Instant::now();
    let p = cellular::edges_and_independent_set();
    let t = 8;
    let mut outputs = Vec::new();
    let mut class_profiles = BTreeSet::new();
    for ell in 1..=4 {
        let m = p.generate_mstar(0, ell, t).map_err(|e| format!("ℓ = {ell}: {e}"))?;
        // by hand: ℓ + 1 stranded points form one class, each remaining edge another
        let mut sizes: Vec<usize> = one_point_classes(&m.structure).iter().map(Vec::len).collect();
        sizes.sort_unstable();
        let mut want = vec![2; t - ell - 1];
        want.push(ell + 1);
        want.sort_unstable();
        ensure(sizes == want, || format!("ℓ = {ell}: classes {sizes:?}, expected {want:?}"))?;
        let largest = (ell + 1).max(2);
        ensure(m.largest_finite_clique == largest, || {
            format!("ℓ = {ell}: largest finite clique {}, expected {largest}", m.largest_finite_clique)
        })?;
        let (lo, hi) = (ell, p.base().size() + ell + 1);
        ensure(m.bracket == (lo, hi) && lo <= largest && largest <= hi, || {
            format!("ℓ = {ell}: {largest} outside [{lo}, {hi}]")
        })?;
        class_profiles.insert(sizes);
        outputs.push(m.structure);
    }
    ensure(class_profiles.len() == 4, || "class profiles coincide".into())?;
    let blocks = census(&outputs).map_err(|e| e.to_string())?.block_count();
    ensure(blocks == 4, || format!("{blocks} census blocks"))?;
    within(start, Duration::from_secs(30))?;
    Ok("ℓ = 1..4 at t = 8: 4 census blocks, largest finite 1-cliques 2, 3, 4, 5 inside their brackets".into())
}

fn ns_family() -> Check {
    let ch = chain::path_chain(2, 6).map_err(|e| e.to_string())?;
    let report = ch.validate(5).map_err(|e| e.to_string())?;
    ensure(report.is_valid(), || format!("chain validation: {}", report.violations[0]))?;
    for (i, pair) in ch.chain().windows(2).enumerate() {
        ensure(embeds_brute(&pair[0], &pair[1]) && !embeds_brute(&pair[1], &pair[0]), || {
            format!("oracle disagrees on C_{i} and C_{}", i + 1)
        })?;
    }
    let sets: Vec<BTreeSet<usize>> =
        vec![BTreeSet::new(), [0].into(), [1, 3].into(), [0, 2, 4].into(), [4].into(), [0, 1, 2, 3, 4].into()];
    let mut outputs = Vec::new();
    for s in &sets {
        outputs.push(ch.generate_ns(s, 5).map_err(|e| format!("S = {s:?}: {e}"))?.structure);
    }
    let blocks = census(&outputs).map_err(|e| e.to_string())?.block_count();
    ensure(blocks == 6, || format!("{blocks} census blocks"))?;
    Ok(format!("{} S-sets, 6 blocks; chain of {} paths validated", sets.len(), ch.chain().len()))
}

type Eval = fn(&Structure, &[usize]) -> Option<bool>;

fn holds(m: &Structure, rel: &str, args: &[usize]) -> Option<bool> {
    m.signature().id(rel).ok().map(|r| m.holds(r, args))
}

const FORMULAS: [(&str, usize, Eval); 6] = [
    ("E(x,y)", 2, |m, t| holds(m, "E", &[t[0], t[1]])),
    ("E(x,y) & !E(y,x)", 2, |m, t| Some(holds(m, "E", &[t[0], t[1]])? & !holds(m, "E", &[t[1], t[0]])?)),
    ("E(x,y) & E(y,z)", 3, |m, t| Some(holds(m, "E", &[t[0], t[1]])? & holds(m, "E", &[t[1], t[2]])?)),
    ("P(x) & E(x,y)", 2, |m, t| Some(holds(m, "P", &[t[0]])? & holds(m, "E", &[t[0], t[1]])?)),
    ("P(x) & !P(y)", 2, |m, t| Some(holds(m, "P", &[t[0]])? & !holds(m, "P", &[t[1]])?)),
    ("E(x,y) & F(y,x)", 2, |m, t| Some(holds(m, "E", &[t[0], t[1]])? & holds(m, "F", &[t[1], t[0]])?)),
];

fn packing_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut cases = 0;
    let mut nonzero = 0;
    for i in 0..400 {
        let sig = small_signature(&mut rng);
        let n = rng.random_range(3..=7);
        let density = rng.random_range(0.05..0.3);
        let m = random_structure(&mut rng, &sig, n, density);
        for (src, arity, eval) in FORMULAS {
            if eval(&m, &vec![0; arity]).is_none() {
                continue;
            }
            let reals = realizations_brute(n, arity, |t| eval(&m, t).expect("relations present"));
            if reals.len() > 12 {
                continue;
            }
            let sets: Vec<Tuple> = reals.iter().map(|r| r.iter().copied().sorted().collect()).collect();
            let oracle = max_packing_brute(&sets);
            let phi = QfConjunction::parse(src).map_err(|e| e.to_string())?;
            let lib = max_disjoint_realizations(&m, &phi, 32).map_err(|e| format!("structure {i}: {e}"))?;
            ensure(lib == oracle, || format!("structure {i}, {src}: library {lib}, oracle {oracle}"))?;
            cases += 1;
            nonzero += usize::from(oracle > 0);
        }
    }
    ensure(cases >= 100, || format!("only {cases} cases"))?;
    Ok(format!("{cases} instances with at most 12 realizations ({nonzero} nonempty), exact agreement"))
}

fn biembedding_is_isomorphism() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let sig = sibtool_core::Signature::new([("E", 2), ("P", 1)]).map_err(|e| e.to_string())?;
    let mut corpus: Vec<Structure> = (0..40)
        .map(|_| {
            let n = rng.random_range(2..=7);
            let density = rng.random_range(0.05..0.4);
            random_structure(&mut rng, &sig, n, density)
        })
        .collect();
    // relabelled copies and one-fact variants give positives and near misses
    for i in 0..20 {
        let m = corpus[i].clone();
        corpus.push(relabel(&m, &random_permutation(&mut rng, m.size())));
        if !m.facts().is_empty() {
            let drop = rng.random_range(0..m.facts().len());
            let facts = m.facts().iter().enumerate().filter(|&(j, _)| j != drop).map(|(_, f)| (f.rel, f.args.to_vec()));
            corpus.push(Structure::new(sig.clone(), m.size(), facts).map_err(|e| e.to_string())?);
        }
    }
    let (mut pairs, mut iso) = (0, 0);
    for (i, j) in (0..corpus.len()).tuple_combinations() {
        let (a, b) = (&corpus[i], &corpus[j]);
        let there = find_embedding(a, b).map_err(|e| e.to_string())?;
        let back = find_embedding(b, a).map_err(|e| e.to_string())?;
        for (w, s, d) in [(&there, a, b), (&back, b, a)] {
            if let Some(w) = w {
                w.validate(s, d).map_err(|e| format!("pair {i} {j}: bad witness: {e}"))?;
            }
        }
        let mutual = there.is_some() && back.is_some();
        let oracle = isomorphic_brute(a, b);
        ensure(mutual == oracle, || format!("pair {i} {j}: mutual embedding {mutual}, isomorphic {oracle}"))?;
        pairs += 1;
        iso += usize::from(oracle);
    }
    Ok(format!("{} structures, {pairs} pairs ({iso} isomorphic), full agreement", corpus.len()))
}

fn classifier() -> Check {
    let mut seen = Vec::new();
    for (file, want) in [
        ("unary_predicates.pres.json", Verdict::One),
        ("edges_clique.pres.json", Verdict::Aleph0),
        ("rank1_grid.pres.json", Verdict::Continuum),
    ] {
        let text = fs::read_to_string(fixtures().join(file)).map_err(|e| e.to_string())?;
        let p = Presentation::from_json(&text).map_err(|e| format!("{file}: {e}"))?;
        let got = p.classify().map_err(|e| format!("{file}: {e}"))?.verdict;
        ensure(got == want, || format!("{file}: {got:?}, expected {want:?}"))?;
        seen.push(format!("{got:?}"));
    }
    Ok(seen.join(" / "))
}

fn sibtool(args: &[&str]) -> (Option<i32>, String) {
    let out =
        Command::new(env!("CARGO_BIN_EXE_sibtool")).args(args).current_dir(fixtures()).output().expect("sibtool runs");
    (out.status.code(), String::from_utf8(out.stdout).expect("utf-8 output"))
}

fn round_trips() -> Check {
    let mut structures = 0;
    let mut entries: Vec<PathBuf> = fs::read_dir(fixtures())
        .map_err(|e| e.to_string())?
        .map(|e| e.map(|e| e.path()).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    entries.sort();
    for p in entries.iter().filter(|p| p.extension().is_some_and(|e| e == "str")) {
        let text = fs::read_to_string(p).map_err(|e| e.to_string())?;
        let m = parse_structure(&text).map_err(|e| format!("{}: {e}", p.display()))?;
        let out = serialize_structure(&m);
        let again = parse_structure(&out).map_err(|e| e.to_string())?;
        let canonical = !text.lines().any(|l| l.trim_start().starts_with('#'));
        ensure(again == m && serialize_structure(&again) == out && (!canonical || out == text), || {
            format!("{}: parse and serialize disagree", p.display())
        })?;
        structures += 1;
    }
    let mut presentations = 0;
    for p in entries.iter().filter(|p| p.to_string_lossy().ends_with(".pres.json")) {
        let text = fs::read_to_string(p).map_err(|e| e.to_string())?;
        let pres = Presentation::from_json(&text).map_err(|e| format!("{}: {e}", p.display()))?;
        let again = Presentation::from_json(&pres.to_json()).map_err(|e| e.to_string())?;
        ensure(again == pres, || format!("{}: presentation round trip differs", p.display()))?;
        presentations += 1;
    }

    let load = |name: &str| -> Result<Value, String> {
        serde_json::from_str(&fs::read_to_string(docs().join(name)).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())
    };
    let pres_schema = load("presentation.schema.json")?;
    let validator = jsonschema::options()
        .with_resource(
            "urn:sibtool:presentation",
            jsonschema::Resource::from_contents(pres_schema.clone()).map_err(|e| e.to_string())?,
        )
        .build(&load("report.schema.json")?)
        .map_err(|e| format!("report schema: {e}"))?;
    let pres_validator = jsonschema::validator_for(&pres_schema).map_err(|e| e.to_string())?;
    for p in entries.iter().filter(|p| p.to_string_lossy().ends_with(".pres.json")) {
        let doc: Value =
            serde_json::from_str(&fs::read_to_string(p).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(pres_validator.is_valid(&doc), || format!("{} fails the presentation schema", p.display()))?;
    }

    let runs: &[&[&str]] = &[
        &["parse", "path_4.str"],
        &["cliques", "--k", "1", "eqrel_4_2_1.str"],
        &["cliques", "--k", "2", "--pool", "pool_pairs.txt", "eqrel_3_3.str"],
        &["ma", "ternary_chain.str"],
        &["ma", "ternary_chain.str", "--relation", "T"],
        &["components", "ternary_chain.str"],
        &["pack", "edges_clique_t3.str", "--formula", "E(x,y) & E(y,x)"],
        &["embed", "path_3.str", "path_5.str"],
        &["embed", "path_5.str", "path_3.str"],
        &["iso", "nf_5_7_9.str", "eqrel_3_3.str"],
        &["census", "path_2.str", "path_3.str", "nf_5_7_9.str", "nf_5_7_11.str"],
        &["age", "eqrel_3_3.str", "eqrel_4_2_1.str", "--s", "3"],
        &["validate", "edges_clique.pres.json", "--t", "4"],
        &["validate", "corrupted_clique.pres.json", "--t", "4"],
        &["validate", "builtin:rank1-grid", "--t", "4"],
        &["validate", "path_chain.pres.json", "--t", "4"],
        &["classify", "unary_predicates.pres.json"],
        &["classify", "builtin:path-chain"],
        &["truncate", "anchored_edges.pres.json", "--t", "3"],
        &["separate", "independent_pairs.pres.json", "--t", "7"],
        &["generate", "eqrel", "--classes", "3,2"],
        &["generate", "nf", "--spec", "builtin:rank0-grid", "--cut", "a=5,b=7", "--t", "9"],
        &["generate", "mstar", "--spec", "edges_independent.pres.json", "--family", "0", "--ell", "2", "--t", "6"],
        &["generate", "ns", "--spec", "builtin:path-chain", "--s", "0,2", "--t", "4"],
        &["generate", "random", "--n", "5", "--language", "E/2,P/1"],
        &["--threads", "2", "census", "path_2.str", "path_2.str"],
        &["parse", "missing.str"],
        &["classify", "corrupted_clique.pres.json"],
        &["generate", "nf", "--spec", "builtin:rank0-grid", "--cut", "a=3", "--t", "9"],
    ];
    let mut reports = 0;
    for args in runs {
        let mut full = vec!["--json"];
        full.extend_from_slice(args);
        let (code, stdout) = sibtool(&full);
        let report: Value = serde_json::from_str(&stdout).map_err(|e| format!("{args:?}: output is not JSON: {e}"))?;
        if let Some(err) = validator.iter_errors(&report).next() {
            return Err(format!("{args:?}: {err} at {}", err.instance_path));
        }
        let reported = report["error"]["exit_code"].as_i64().unwrap_or(0);
        ensure(code == Some(reported as i32), || format!("{args:?}: exit {code:?}, report says {reported}"))?;
        reports += 1;
    }
    Ok(format!(
        "{structures} structure and {presentations} presentation fixtures round-trip; {reports} CLI reports match the schema"
    ))
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 10] = [
        ("exchangeability: type test = swap test", exchangeability_equivalence),
        ("k-cliques = totally indiscernible families", clique_characterization),
        ("meld and clique extension", meld_and_extension),
        ("N_f census follows the cut", nf_census),
        ("M*_l family", mstar_family),
        ("N_S family", ns_family),
        ("disjoint realizations vs brute force", packing_oracle),
        ("mutual embedding = isomorphism", biembedding_is_isomorphism),
        ("classifier verdicts", classifier),
        ("round trips and report schema", round_trips),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
