mod common;

use common::*;
use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sibtool_core::cliques::{exchangeable, KClique};
use sibtool_core::embed::{find_embedding, is_isomorphic};
use sibtool_core::mutalg::{max_disjoint_realizations, realizations, QfConjunction};
use sibtool_core::qftype::type_equal;
use sibtool_core::{Structure, Tuple};

fn corpus(seed: u64, count: usize, sizes: std::ops::RangeInclusive<usize>) -> Vec<Structure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let sig = small_signature(&mut rng);
            let n = rng.random_range(sizes.clone());
            let density = rng.random_range(0.1..0.6);
            random_structure(&mut rng, &sig, n, density)
        })
        .collect()
}

#[test]
fn exchangeability_matches_both_oracles() {
    for m in corpus(11, 60, 3..=6) {
        for k in 1..=2 {
            for (a, b) in distinct_tuples(m.size(), k).into_iter().tuple_combinations() {
                if !pairwise_disjoint(&[a.clone(), b.clone()]) {
                    continue;
                }
                let by_swap = swap_exchangeable(&m, &a, &b);
                assert_eq!(by_swap, type_exchangeable(&m, &a, &b), "{a:?} {b:?}");
                assert_eq!(exchangeable(&m, &a, &b).unwrap(), by_swap, "{a:?} {b:?}");
            }
        }
    }
}

#[test]
fn type_equal_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut equal = 0;
    for m in corpus(13, 40, 3..=6) {
        for _ in 0..20 {
            let c: Tuple = random_permutation(&mut rng, m.size())[..2].to_vec();
            let d: Tuple = random_permutation(&mut rng, m.size())[..2].to_vec();
            let params: Vec<usize> = (0..m.size()).filter(|_| rng.random_bool(0.4)).collect();
            let oracle = same_qf_type(&m, &c, &d, &params);
            assert_eq!(type_equal(&m, &c, &d, &params).unwrap(), oracle);
            equal += usize::from(oracle);
        }
    }
    assert!(equal > 20, "only {equal} equal pairs");
}

#[test]
fn clique_verification_matches_total_indiscernibility() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut accepted = 0;
    for m in corpus(15, 80, 4..=7) {
        for _ in 0..10 {
            let k = rng.random_range(1..=2);
            let size = rng.random_range(1..=(m.size() / k).min(4));
            let mut pts = random_permutation(&mut rng, m.size());
            pts.truncate(size * k);
            let family: Vec<Tuple> = pts.chunks(k).map(<[usize]>::to_vec).collect();
            let oracle = totally_indiscernible(&m, &family);
            let lib = KClique::new(&m, k, family.clone()).is_ok();
            assert_eq!(lib, oracle, "{family:?}\n{m:?}");
            accepted += usize::from(lib);
        }
    }
    assert!(accepted > 50, "corpus too poor in cliques: {accepted}");
}

#[test]
fn embedding_and_isomorphism_match_brute_force() {
    let ms = corpus(16, 40, 2..=5);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for a in &ms {
        let b = relabel(a, &random_permutation(&mut rng, a.size()));
        let w = is_isomorphic(a, &b).unwrap().expect("relabelled copy is isomorphic");
        w.validate(a, &b).unwrap();
    }
    for (a, b) in ms.iter().tuple_combinations() {
        if a.signature() != b.signature() {
            continue;
        }
        let found = find_embedding(a, b).unwrap();
        assert_eq!(found.is_some(), embeds_brute(a, b));
        if let Some(w) = found {
            w.validate(a, b).unwrap();
        }
        assert_eq!(is_isomorphic(a, b).unwrap().is_some(), isomorphic_brute(a, b));
    }
}

type Eval = fn(&Structure, &[usize]) -> Option<bool>;

fn holds(m: &Structure, rel: &str, args: &[usize]) -> Option<bool> {
    m.signature().id(rel).ok().map(|r| m.holds(r, args))
}

/// Formulas with a hand-written evaluator; `None` when a relation is missing.
const FORMULAS: [(&str, usize, Eval); 5] = [
    ("E(x,y)", 2, |m, t| holds(m, "E", &[t[0], t[1]])),
    ("E(x,y) & !E(y,x)", 2, |m, t| Some(holds(m, "E", &[t[0], t[1]])? & !holds(m, "E", &[t[1], t[0]])?)),
    ("E(x,y) & E(y,z)", 3, |m, t| Some(holds(m, "E", &[t[0], t[1]])? & holds(m, "E", &[t[1], t[2]])?)),
    ("P(x) & E(x,y)", 2, |m, t| Some(holds(m, "P", &[t[0]])? & holds(m, "E", &[t[0], t[1]])?)),
    ("!E(x,y) & x!=y", 2, |m, t| Some(!holds(m, "E", &[t[0], t[1]])?)),
];

#[test]
fn packing_matches_brute_force() {
    let mut cases = 0;
    for m in corpus(18, 120, 3..=6) {
        for (src, arity, eval) in FORMULAS {
            if eval(&m, &vec![0; arity]).is_none() {
                continue;
            }
            let sets: Vec<Tuple> = realizations_brute(m.size(), arity, |t| eval(&m, t).unwrap())
                .into_iter()
                .map(|r| r.into_iter().sorted().collect::<Tuple>())
                .sorted()
                .dedup()
                .collect();
            if sets.len() > 12 {
                continue;
            }
            cases += 1;
            let phi = QfConjunction::parse(src).unwrap();
            assert_eq!(max_disjoint_realizations(&m, &phi, 32).unwrap(), max_packing_brute(&sets), "{src}");
        }
    }
    assert!(cases >= 100, "only {cases} cases");
}

#[test]
fn realizations_match_brute_force() {
    let phi = QfConjunction::parse("E(x,y) & !E(y,z) & x!=z").unwrap();
    for m in corpus(19, 30, 3..=5) {
        let Ok(e) = m.signature().id("E") else { continue };
        let mut lib = realizations(&m, &phi).unwrap();
        lib.sort();
        let brute = realizations_brute(m.size(), 3, |t| {
            m.holds(e, &[t[0], t[1]]) && !m.holds(e, &[t[1], t[2]]) && t[0] != t[2]
        });
        assert_eq!(lib, brute);
    }
}
