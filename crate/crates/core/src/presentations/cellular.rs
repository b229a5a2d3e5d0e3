//! Cellular presentations: a finite base `K` plus families of disjoint
//! `k_i`-tuples whose members can be permuted by automorphisms.
//!
//! Element numbering of a truncation: base elements first, then each family
//! in order, members in index order, positions of a member consecutive.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::pattern::{check_tokens, language_of, parse_language, Pattern, StructureSpec, Token};
use super::{ValidationReport, Violation};
use crate::cliques::{enumerate_maximal_kcliques, KClique};
use crate::error::{Error, Result};
use crate::par;
use crate::structure::{Element, Signature, Structure, Tuple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Count {
    Finite(usize),
    Infinite,
}

impl Count {
    pub fn at(self, t: usize) -> usize {
        match self {
            Count::Finite(n) => n,
            Count::Infinite => t,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Count::Infinite
    }
}

impl Serialize for Count {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Count::Finite(n) => s.serialize_u64(*n as u64),
            Count::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for Count {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(usize),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(Count::Finite(n)),
            Raw::S(s) if s == "infinite" => Ok(Count::Infinite),
            Raw::S(s) => Err(serde::de::Error::custom(format!("count must be a number or \"infinite\", got {s:?}"))),
        }
    }
}

/// Facts for one specific ordered pair of members only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PinnedFact {
    pub pair: [usize; 2],
    pub fact: Pattern,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Family {
    pub name: String,
    pub k: usize,
    pub count: Count,
    /// One member with the base: tokens `p`, `k`.
    #[serde(default)]
    pub facts: Vec<Pattern>,
    /// Every ordered pair of distinct members: tokens `x`, `y`, `k`.
    #[serde(default)]
    pub cross_facts: Vec<Pattern>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pinned_facts: Vec<PinnedFact>,
}

/// Every pair (member of `first`, member of `second`): tokens `x`, `y`, `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossFamily {
    pub first: usize,
    pub second: usize,
    pub facts: Vec<Pattern>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellularDoc {
    pub schema_version: u32,
    pub language: Vec<String>,
    #[serde(default)]
    pub base: StructureSpec,
    #[serde(default)]
    pub families: Vec<Family>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cross_family_facts: Vec<CrossFamily>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellularPresentation {
    signature: Signature,
    base: Structure,
    families: Vec<Family>,
    cross_family: Vec<CrossFamily>,
}

/// Where the members of each family sit in a truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub base: usize,
    pub members: Vec<Vec<Tuple>>,
}

impl CellularPresentation {
    pub fn new(base: Structure, families: Vec<Family>, cross_family: Vec<CrossFamily>) -> Result<Self> {
        let signature = base.signature().clone();
        let nb = base.size();
        for f in &families {
            if f.k == 0 {
                return Err(Error::Presentation(format!("family `{}` has k = 0", f.name)));
            }
            let k = f.k;
            check_tokens(&f.facts, &f.name, |t| match t {
                Token::Pos(_) => Some(k),
                Token::Base(_) => Some(nb),
                _ => None,
            })?;
            let pair = |t| match t {
                Token::First(_) | Token::Second(_) => Some(k),
                Token::Base(_) => Some(nb),
                _ => None,
            };
            check_tokens(&f.cross_facts, &f.name, pair)?;
            check_tokens(&f.pinned_facts.iter().map(|p| p.fact.clone()).collect::<Vec<_>>(), &f.name, pair)?;
            for p in f.facts.iter().chain(&f.cross_facts).chain(f.pinned_facts.iter().map(|p| &p.fact)) {
                p.instantiate(&signature, |_| Ok(0))?;
            }
            if let Some(p) = f.pinned_facts.iter().find(|p| p.pair[0] == p.pair[1]) {
                return Err(Error::Presentation(format!("pinned pair {:?} repeats a member", p.pair)));
            }
        }
        for c in &cross_family {
            let (Some(a), Some(b)) = (families.get(c.first), families.get(c.second)) else {
                return Err(Error::Presentation(format!("cross-family link {}-{} out of range", c.first, c.second)));
            };
            if c.first == c.second {
                return Err(Error::Presentation("cross-family link from a family to itself; use cross_facts".into()));
            }
            check_tokens(&c.facts, "cross-family", |t| match t {
                Token::First(_) => Some(a.k),
                Token::Second(_) => Some(b.k),
                Token::Base(_) => Some(nb),
                _ => None,
            })?;
            for p in &c.facts {
                p.instantiate(&signature, |_| Ok(0))?;
            }
        }
        Ok(CellularPresentation { signature, base, families, cross_family })
    }

    pub fn from_doc(doc: CellularDoc) -> Result<Self> {
        let sig = parse_language(&doc.language)?;
        Self::new(doc.base.build(&sig)?, doc.families, doc.cross_family_facts)
    }

    pub fn to_doc(&self) -> CellularDoc {
        CellularDoc {
            schema_version: super::SCHEMA_VERSION,
            language: language_of(&self.signature),
            base: StructureSpec::of(&self.base),
            families: self.families.clone(),
            cross_family_facts: self.cross_family.clone(),
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn base(&self) -> &Structure {
        &self.base
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }

    pub fn cross_family(&self) -> &[CrossFamily] {
        &self.cross_family
    }

    pub fn max_k(&self) -> usize {
        self.families.iter().map(|f| f.k).max().unwrap_or(1)
    }

    fn counts_at(&self, t: usize) -> Vec<usize> {
        self.families.iter().map(|f| f.count.at(t)).collect()
    }

    pub fn layout(&self, counts: &[usize]) -> Layout {
        let mut next = self.base.size();
        let members = self
            .families
            .iter()
            .zip(counts)
            .map(|(f, &c)| {
                (0..c)
                    .map(|_| {
                        let t: Tuple = (next..next + f.k).collect();
                        next += f.k;
                        t
                    })
                    .collect()
            })
            .collect();
        Layout { base: self.base.size(), members }
    }

    pub fn truncate(&self, t: usize) -> Result<Structure> {
        Ok(self.truncate_with_layout(t)?.0)
    }

    pub fn truncate_with_layout(&self, t: usize) -> Result<(Structure, Layout)> {
        self.instantiate(&self.counts_at(t))
    }

    /// Instantiates `counts[i]` members of family `i`.
    pub fn instantiate(&self, counts: &[usize]) -> Result<(Structure, Layout)> {
        let layout = self.layout(counts);
        let sig = &self.signature;
        let mut facts: Vec<(crate::structure::RelId, Tuple)> =
            self.base.facts().iter().map(|f| (f.rel, f.args.to_vec())).collect();
        let pair_slot = |a: &Tuple, b: &Tuple| {
            let (a, b) = (a.clone(), b.clone());
            move |t: Token| match t {
                Token::First(i) => Ok(a[i]),
                Token::Second(i) => Ok(b[i]),
                Token::Base(e) => Ok(e),
                _ => unreachable!("tokens checked on construction"),
            }
        };
        for (f, members) in self.families.iter().zip(&layout.members) {
            for m in members {
                for p in &f.facts {
                    facts.push(p.instantiate(sig, |t| match t {
                        Token::Pos(i) => Ok(m[i]),
                        Token::Base(e) => Ok(e),
                        _ => unreachable!("tokens checked on construction"),
                    })?);
                }
            }
            for (a, b) in members.iter().tuple_combinations() {
                for p in &f.cross_facts {
                    facts.push(p.instantiate(sig, pair_slot(a, b))?);
                    facts.push(p.instantiate(sig, pair_slot(b, a))?);
                }
            }
            for pin in &f.pinned_facts {
                if let (Some(a), Some(b)) = (members.get(pin.pair[0]), members.get(pin.pair[1])) {
                    facts.push(pin.fact.instantiate(sig, pair_slot(a, b))?);
                }
            }
        }
        for c in &self.cross_family {
            for a in &layout.members[c.first] {
                for b in &layout.members[c.second] {
                    for p in &c.facts {
                        facts.push(p.instantiate(sig, pair_slot(a, b))?);
                    }
                }
            }
        }
        let size = layout.base + layout.members.iter().flatten().map(Vec::len).sum::<usize>();
        Ok((Structure::new(sig.clone(), size, facts)?, layout))
    }

    /// Every transposition of two members of one family must be an
    /// automorphism of the truncation.
    pub fn validate(&self, t: usize) -> Result<ValidationReport> {
        let (m, layout) = self.truncate_with_layout(t)?;
        let maps: Vec<(usize, usize, usize)> = layout
            .members
            .iter()
            .enumerate()
            .flat_map(|(f, ms)| (0..ms.len()).tuple_combinations().map(move |(a, b)| (f, a, b)))
            .collect();
        let found = par::map(&maps, |&(f, a, b)| {
            let (ta, tb) = (&layout.members[f][a], &layout.members[f][b]);
            let mut perm: Vec<Element> = (0..m.size()).collect();
            for (&x, &y) in ta.iter().zip(tb) {
                perm[x] = y;
                perm[y] = x;
            }
            let support: Vec<Element> = ta.iter().chain(tb).copied().collect();
            m.first_broken_fact(&perm, &support).map(|fact| Violation {
                map: format!("swap members {a} and {b} of family `{}`", self.families[f].name),
                witness: format!(
                    "{}({}) has no image",
                    m.signature().name(fact.rel),
                    fact.args.iter().map(|e| e.to_string()).join(",")
                ),
            })
        });
        Ok(ValidationReport { t, checked: maps.len(), violations: found.into_iter().flatten().collect() })
    }

    /// Every infinite family has tuples of length 1. Finite families belong to
    /// the finite part and do not count.
    pub fn is_finitely_partitioned(&self) -> bool {
        self.families.iter().filter(|f| f.count.is_infinite()).all(|f| f.k == 1)
    }

    fn check_separation_size(&self, t: usize) -> Result<()> {
        let bound = 2 * self.max_k() + self.signature.max_arity();
        if t <= bound {
            return Err(Error::Precondition(format!("t = {t} must exceed 2·max k + r = {bound}")));
        }
        Ok(())
    }

    /// `(family, positions)` for every infinite family and proper position
    /// subset whose subtuples form a clique in the truncation at `t`.
    pub fn separation_offenders(&self, t: usize) -> Result<Vec<(usize, Vec<usize>)>> {
        self.check_separation_size(t)?;
        let (m, layout) = self.truncate_with_layout(t)?;
        let mut jobs = Vec::new();
        for (f, fam) in self.families.iter().enumerate() {
            if !fam.count.is_infinite() || fam.k < 2 {
                continue;
            }
            for size in 1..fam.k {
                for positions in (0..fam.k).combinations(size) {
                    jobs.push((f, positions));
                }
            }
        }
        let hits = par::map(&jobs, |(f, positions)| -> Result<bool> {
            let members: Vec<Tuple> =
                layout.members[*f].iter().map(|t| positions.iter().map(|&p| t[p]).collect()).collect();
            KClique { k: positions.len(), members: members.into_iter().sorted().collect() }.is_clique_in(&m)
        });
        let mut out = Vec::new();
        for (job, hit) in jobs.into_iter().zip(hits) {
            if hit? {
                out.push(job);
            }
        }
        Ok(out)
    }

    pub fn is_separated(&self, t: usize) -> Result<bool> {
        Ok(self.separation_offenders(t)?.is_empty())
    }

    /// Splits offending families into independent families until the
    /// partition is separated at `t`. Patterns of the result are read off
    /// the truncation and the result is checked to reproduce it exactly.
    pub fn separate(&self, t: usize) -> Result<CellularPresentation> {
        let report = self.validate(t)?;
        if !report.is_valid() {
            return Err(Error::Presentation(format!("cannot separate: {}", report.violations[0])));
        }
        let mut current = self.clone();
        loop {
            let offenders = current.separation_offenders(t)?;
            let Some((f, positions)) = offenders.into_iter().next() else {
                return Ok(current);
            };
            let (m, layout) = current.truncate_with_layout(t)?;
            let rest: Vec<usize> = (0..current.families[f].k).filter(|p| !positions.contains(p)).collect();
            let mut specs: Vec<(String, Count, Vec<Tuple>)> = Vec::new();
            for (i, fam) in current.families.iter().enumerate() {
                if i == f {
                    for part in [&positions, &rest] {
                        let name = format!("{}[{}]", fam.name, part.iter().join(","));
                        let members = layout.members[i].iter().map(|t| part.iter().map(|&p| t[p]).collect()).collect();
                        specs.push((name, fam.count, members));
                    }
                } else {
                    specs.push((fam.name.clone(), fam.count, layout.members[i].clone()));
                }
            }
            let next = derive(&m, layout.base, &specs)?;
            let report = next.validate(t)?;
            if !report.is_valid() {
                return Err(Error::Verification(format!("split presentation invalid: {}", report.violations[0])));
            }
            current = next;
        }
    }
}

/// Reads a cellular presentation off a finite structure, given which elements
/// form the base (`0..base`) and the members of each family. Member 0 supplies
/// the one-member patterns, members 0 and 1 the pair patterns, and member 0 of
/// two families the cross-family patterns. Fails unless instantiating the
/// result reproduces `m` exactly.
pub fn derive(m: &Structure, base: usize, families: &[(String, Count, Vec<Tuple>)]) -> Result<CellularPresentation> {
    const NONE: (usize, usize, usize) = (usize::MAX, usize::MAX, usize::MAX);
    let mut role = vec![NONE; m.size()];
    for (f, (_, _, members)) in families.iter().enumerate() {
        for (j, t) in members.iter().enumerate() {
            for (p, &e) in t.iter().enumerate() {
                if e < base || role[e] != NONE {
                    return Err(Error::Presentation(format!("element {e} assigned twice")));
                }
                role[e] = (f, j, p);
            }
        }
    }
    if let Some(e) = (base..m.size()).find(|&e| role[e] == NONE) {
        return Err(Error::Presentation(format!("element {e} belongs to no family")));
    }
    let sig = m.signature();
    let mut own: Vec<BTreeSet<Pattern>> = vec![BTreeSet::new(); families.len()];
    let mut cross: Vec<BTreeSet<Pattern>> = vec![BTreeSet::new(); families.len()];
    let mut links: std::collections::BTreeMap<(usize, usize), BTreeSet<Pattern>> = Default::default();
    let mut base_facts = Vec::new();
    for fact in m.facts() {
        let touched: Vec<(usize, usize)> =
            fact.args.iter().filter(|&&e| e >= base).map(|&e| (role[e].0, role[e].1)).sorted().dedup().collect();
        let rel = sig.name(fact.rel);
        let tokens = |first: (usize, usize), second: Option<(usize, usize)>, single: bool| -> Vec<Token> {
            fact.args
                .iter()
                .map(|&e| {
                    if e < base {
                        return Token::Base(e);
                    }
                    let (f, j, p) = role[e];
                    if single {
                        Token::Pos(p)
                    } else if (f, j) == first {
                        Token::First(p)
                    } else {
                        debug_assert_eq!(Some((f, j)), second);
                        Token::Second(p)
                    }
                })
                .collect()
        };
        match touched.as_slice() {
            [] => base_facts.push((fact.rel, fact.args.to_vec())),
            [(f, 0)] => {
                own[*f].insert(Pattern::new(rel, tokens((*f, 0), None, true)));
            }
            [(f, 0), (g, 1)] if f == g => {
                cross[*f].insert(Pattern::new(rel, tokens((*f, 0), Some((*f, 1)), false)));
            }
            [(f, 0), (g, 0)] => {
                links.entry((*f, *g)).or_default().insert(Pattern::new(rel, tokens((*f, 0), Some((*g, 0)), false)));
            }
            _ => {}
        }
    }
    let base_structure = Structure::new(sig.clone(), base, base_facts)?;
    let fams: Vec<Family> = families
        .iter()
        .enumerate()
        .map(|(f, (name, count, members))| Family {
            name: name.clone(),
            k: members.first().map_or(1, Vec::len),
            count: *count,
            facts: own[f].iter().cloned().collect(),
            cross_facts: cross[f].iter().cloned().collect(),
            pinned_facts: Vec::new(),
        })
        .collect();
    let cross_family = links
        .into_iter()
        .map(|((first, second), facts)| CrossFamily { first, second, facts: facts.into_iter().collect() })
        .collect();
    let p = CellularPresentation::new(base_structure, fams, cross_family)?;
    let counts: Vec<usize> = families.iter().map(|(_, _, ms)| ms.len()).collect();
    let (again, layout) = p.instantiate(&counts)?;
    let mut perm: Vec<Element> = (0..base).collect();
    perm.resize(m.size(), 0);
    for (f, (_, _, members)) in families.iter().enumerate() {
        for (j, t) in members.iter().enumerate() {
            for (p, &e) in t.iter().enumerate() {
                perm[e] = layout.members[f][j][p];
            }
        }
    }
    if m.relabel(&perm) != again {
        return Err(Error::Presentation(
            "structure is not expressible with one- and two-member patterns over this partition".into(),
        ));
    }
    Ok(p)
}

/// Where an element of a truncation came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Label {
    Base(usize),
    Member(usize, usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MStar {
    pub structure: Structure,
    pub ell: usize,
    pub t: usize,
    /// First elements of the stripped members, in output numbering.
    pub stranded: Vec<Element>,
    pub removed_families: Vec<String>,
    /// Size of the largest maximal 1-clique containing every stranded element.
    pub stranded_clique_size: usize,
    /// Largest maximal 1-clique that stays maximal when `t` grows by one.
    pub largest_finite_clique: usize,
    /// `[ℓ, |base| + ℓ + 1]`.
    pub bracket: (usize, usize),
}

struct MStarBuild {
    structure: Structure,
    labels: Vec<Label>,
    stranded: Vec<Element>,
    removed: Vec<usize>,
}

impl CellularPresentation {
    fn build_mstar(&self, family: usize, ell: usize, t: usize) -> Result<MStarBuild> {
        let (m, layout) = self.truncate_with_layout(t)?;
        let mut label = vec![Label::Base(0); m.size()];
        for (e, l) in label.iter_mut().enumerate().take(layout.base) {
            *l = Label::Base(e);
        }
        for (f, ms) in layout.members.iter().enumerate() {
            for (j, tup) in ms.iter().enumerate() {
                for (p, &e) in tup.iter().enumerate() {
                    label[e] = Label::Member(f, j, p);
                }
            }
        }
        let mut keep = vec![true; m.size()];
        for tup in &layout.members[family][..=ell] {
            for &e in &tup[1..] {
                keep[e] = false;
            }
        }
        let kept: Vec<Element> = (0..m.size()).filter(|&e| keep[e]).collect();
        let m_ell = m.induced_substructure(&kept)?;
        let pos_in = |elems: &[Element], e: Element| elems.binary_search(&e).expect("kept element");
        let stranded_old: Vec<Element> = layout.members[family][..=ell].iter().map(|t| t[0]).collect();
        let stranded: Vec<Element> = stranded_old.iter().map(|&e| pos_in(&kept, e)).collect();

        let mut removed = Vec::new();
        for (f, fam) in self.families.iter().enumerate() {
            if f == family || fam.k != 1 || !fam.count.is_infinite() {
                continue;
            }
            let members: Vec<Tuple> = stranded
                .iter()
                .map(|&e| vec![e])
                .chain(layout.members[f].iter().map(|t| vec![pos_in(&kept, t[0])]))
                .sorted()
                .collect();
            if (KClique { k: 1, members }).is_clique_in(&m_ell)? {
                removed.push(f);
            }
        }
        let mut drop = vec![false; m.size()];
        for &f in &removed {
            for tup in &layout.members[f] {
                drop[tup[0]] = true;
            }
        }
        let final_elems: Vec<Element> = kept.iter().copied().filter(|&e| !drop[e]).collect();
        let structure = m.induced_substructure(&final_elems)?;
        Ok(MStarBuild {
            structure,
            labels: final_elems.iter().map(|&e| label[e]).collect(),
            stranded: stranded_old.iter().map(|&e| pos_in(&final_elems, e)).collect(),
            removed,
        })
    }

    /// Strips every member `j ≤ ℓ` of `family` down to its first element and
    /// drops every one-element family that the stranded points can be
    /// exchanged with.
    pub fn generate_mstar(&self, family: usize, ell: usize, t: usize) -> Result<MStar> {
        let fam = self.families.get(family).ok_or_else(|| Error::Precondition(format!("no family {family}")))?;
        if fam.k < 2 {
            return Err(Error::Precondition(format!("family `{}` has k = {}; need at least 2", fam.name, fam.k)));
        }
        if !fam.count.is_infinite() {
            return Err(Error::Precondition(format!("family `{}` is finite", fam.name)));
        }
        if ell >= t {
            return Err(Error::Precondition(format!("ℓ = {ell} must be below t = {t}")));
        }
        let report = self.validate(t)?;
        if !report.is_valid() {
            return Err(Error::Presentation(report.violations[0].to_string()));
        }
        if !self.is_separated(t)? {
            return Err(Error::Precondition("partition is not separated; run separate first".into()));
        }
        let now = self.build_mstar(family, ell, t)?;
        let later = self.build_mstar(family, ell, t + 1)?;
        if now.removed != later.removed {
            return Err(Error::Verification("removed families depend on t".into()));
        }
        let cliques = enumerate_maximal_kcliques(&now.structure, 1, None)?;
        let stranded_clique_size = cliques
            .iter()
            .filter(|c| now.stranded.iter().all(|&e| c.contains(&[e])))
            .map(KClique::size)
            .max()
            .ok_or_else(|| Error::Verification("stranded elements are not pairwise exchangeable".into()))?;
        let bracket = (ell, self.base.size() + ell + 1);
        if stranded_clique_size < bracket.0 || stranded_clique_size > bracket.1 {
            return Err(Error::Verification(format!(
                "stranded clique size {stranded_clique_size} outside [{}, {}]",
                bracket.0, bracket.1
            )));
        }
        let later_cliques: BTreeSet<Vec<Label>> = enumerate_maximal_kcliques(&later.structure, 1, None)?
            .into_iter()
            .map(|c| c.members.iter().map(|t| later.labels[t[0]]).sorted().collect())
            .collect();
        let largest_finite_clique = cliques
            .iter()
            .filter(|c| {
                let labels: Vec<Label> = c.members.iter().map(|t| now.labels[t[0]]).sorted().collect();
                later_cliques.contains(&labels)
            })
            .map(KClique::size)
            .max()
            .unwrap_or(0);
        Ok(MStar {
            structure: now.structure,
            ell,
            t,
            stranded: now.stranded,
            removed_families: now.removed.iter().map(|&f| self.families[f].name.clone()).collect(),
            stranded_clique_size,
            largest_finite_clique,
            bracket,
        })
    }
}

fn family(name: &str, k: usize, facts: &[&str], cross: &[&str]) -> Family {
    Family {
        name: name.into(),
        k,
        count: Count::Infinite,
        facts: facts.iter().map(|s| s.parse().expect("static pattern")).collect(),
        cross_facts: cross.iter().map(|s| s.parse().expect("static pattern")).collect(),
        pinned_facts: Vec::new(),
    }
}

fn graph_base() -> Structure {
    Structure::empty(Signature::new([("E", 2)]).expect("static signature"), 0)
}

/// Infinitely many disjoint edges and an infinite clique.
pub fn edges_and_clique() -> CellularPresentation {
    let fams = vec![family("edges", 2, &["E p0 p1", "E p1 p0"], &[]), family("clique", 1, &[], &["E x0 y0"])];
    CellularPresentation::new(graph_base(), fams, Vec::new()).expect("static presentation")
}

/// Infinitely many disjoint edges and an infinite independent set.
pub fn edges_and_independent_set() -> CellularPresentation {
    let fams = vec![family("edges", 2, &["E p0 p1", "E p1 p0"], &[]), family("points", 1, &[], &[])];
    CellularPresentation::new(graph_base(), fams, Vec::new()).expect("static presentation")
}

/// `n` disjoint infinite unary predicates `P0 .. P(n-1)`.
pub fn unary_predicates(n: usize) -> CellularPresentation {
    let names: Vec<String> = (0..n).map(|i| format!("P{i}")).collect();
    let sig = Signature::new(names.iter().map(|s| (s.as_str(), 1))).expect("static signature");
    let fams = names.iter().map(|p| family(p, 1, &[&format!("{p} p0")], &[])).collect();
    CellularPresentation::new(Structure::empty(sig, 0), fams, Vec::new()).expect("static presentation")
}
