//! Grid presentations: infinite `k`-cliques `A_q` indexed by a finite ordered
//! label set standing for the rationals, kept apart by a selected relation
//! `R` and separating tuples `d_{q,r}`.
//!
//! Element numbering of a truncation: base, then the cliques in label order
//! (members in index order), then the witness tuples.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::pattern::{check_tokens, language_of, parse_language, Pattern, StructureSpec, Token};
use super::{ValidationReport, Violation};
use crate::cliques::{clique_size_census, KClique};
use crate::error::{Error, Result};
use crate::par;
use crate::structure::{Element, RelId, Signature, Structure, Tuple};

pub const MAX_LABELS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessMode {
    /// One witness tuple `e_q` per label; `d_{q,r}` ignores `r`.
    PerIndex,
    /// One witness tuple `e_{q,r}` per pair `q < r`.
    PerPair,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessTemplate {
    pub rank: usize,
    pub mode: WitnessMode,
    /// Tokens `w`, `k`.
    #[serde(default)]
    pub facts: Vec<Pattern>,
    /// Each member of the lower clique `A_q` with the witness: tokens `p`, `w`, `k`.
    #[serde(default)]
    pub link_facts: Vec<Pattern>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDoc {
    pub schema_version: u32,
    pub language: Vec<String>,
    #[serde(default)]
    pub base: StructureSpec,
    pub k: usize,
    pub labels: Vec<String>,
    /// One member with the base: tokens `p`, `k`.
    #[serde(default)]
    pub member_facts: Vec<Pattern>,
    /// Every ordered pair of distinct members of one clique: tokens `x`, `y`, `k`.
    #[serde(default)]
    pub cross_facts: Vec<Pattern>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessTemplate>,
    /// `R` over a member (`p`) and the separating tuple (`d`).
    pub relation: Pattern,
    /// Entries of `d_{q,r}`: base `k`, witness `w`, or `m` for member 0 of `A_q`.
    pub d: Vec<Token>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridPresentation {
    signature: Signature,
    base: Structure,
    doc: GridDoc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridLayout {
    pub base: usize,
    /// Members of each clique, in label order.
    pub members: Vec<Vec<Tuple>>,
    /// Witness tuples keyed by `(q, r)`; per-index witnesses use `r = q`.
    pub witnesses: BTreeMap<(usize, usize), Tuple>,
}

impl GridLayout {
    fn witness(&self, mode: WitnessMode, q: usize, r: usize) -> Option<&Tuple> {
        match mode {
            WitnessMode::PerIndex => self.witnesses.get(&(q, q)),
            WitnessMode::PerPair => self.witnesses.get(&(q, r)),
        }
    }
}

impl GridPresentation {
    pub fn from_doc(doc: GridDoc) -> Result<Self> {
        let signature = parse_language(&doc.language)?;
        let base = doc.base.build(&signature)?;
        let nb = base.size();
        let k = doc.k;
        if k == 0 {
            return Err(Error::Presentation("grid k must be at least 1".into()));
        }
        if doc.labels.len() < 2 {
            return Err(Error::Presentation("grid needs at least two labels".into()));
        }
        if doc.labels.iter().duplicates().next().is_some() {
            return Err(Error::Presentation("grid labels must be distinct".into()));
        }
        let rank = doc.witness.as_ref().map_or(0, |w| w.rank);
        check_tokens(&doc.member_facts, "member_facts", |t| match t {
            Token::Pos(_) => Some(k),
            Token::Base(_) => Some(nb),
            _ => None,
        })?;
        check_tokens(&doc.cross_facts, "cross_facts", |t| match t {
            Token::First(_) | Token::Second(_) => Some(k),
            Token::Base(_) => Some(nb),
            _ => None,
        })?;
        if let Some(w) = &doc.witness {
            check_tokens(&w.facts, "witness facts", |t| match t {
                Token::Witness(_) => Some(rank),
                Token::Base(_) => Some(nb),
                _ => None,
            })?;
            check_tokens(&w.link_facts, "witness link_facts", |t| match t {
                Token::Pos(_) => Some(k),
                Token::Witness(_) => Some(rank),
                Token::Base(_) => Some(nb),
                _ => None,
            })?;
        }
        check_tokens(std::slice::from_ref(&doc.relation), "relation", |t| match t {
            Token::Pos(_) => Some(k),
            Token::Sep(_) => Some(doc.d.len()),
            _ => None,
        })?;
        let d_pattern = Pattern { rel: "d".into(), args: doc.d.clone() };
        check_tokens(&[d_pattern], "d", |t| match t {
            Token::Base(_) => Some(nb),
            Token::Witness(_) => Some(rank),
            Token::Anchor(_) => Some(k),
            _ => None,
        })?;
        let all = doc
            .member_facts
            .iter()
            .chain(&doc.cross_facts)
            .chain(doc.witness.iter().flat_map(|w| w.facts.iter().chain(&w.link_facts)))
            .chain([&doc.relation]);
        for p in all {
            p.instantiate(&signature, |_| Ok(0))?;
        }
        let mut doc = doc;
        doc.language = language_of(&signature);
        doc.base = StructureSpec::of(&base);
        Ok(GridPresentation { signature, base, doc })
    }

    pub fn to_doc(&self) -> GridDoc {
        GridDoc { schema_version: super::SCHEMA_VERSION, ..self.doc.clone() }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn base(&self) -> &Structure {
        &self.base
    }

    pub fn k(&self) -> usize {
        self.doc.k
    }

    pub fn labels(&self) -> &[String] {
        &self.doc.labels
    }

    pub fn rank(&self) -> usize {
        self.doc.witness.as_ref().map_or(0, |w| w.rank)
    }

    pub fn relation(&self) -> &Pattern {
        &self.doc.relation
    }

    fn mode(&self) -> WitnessMode {
        self.doc.witness.as_ref().map_or(WitnessMode::PerIndex, |w| w.mode)
    }

    pub fn label_index(&self, label: &str) -> Result<usize> {
        self.doc
            .labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Precondition(format!("unknown grid label `{label}`")))
    }

    pub fn layout(&self, sizes: &[usize]) -> GridLayout {
        let k = self.doc.k;
        let mut next = self.base.size();
        let mut take = |len: usize| {
            let t: Tuple = (next..next + len).collect();
            next += len;
            t
        };
        let members = sizes.iter().map(|&s| (0..s).map(|_| take(k)).collect()).collect();
        let mut witnesses = BTreeMap::new();
        let rank = self.rank();
        if rank > 0 {
            let n = self.doc.labels.len();
            match self.mode() {
                WitnessMode::PerIndex => {
                    for q in 0..n {
                        witnesses.insert((q, q), take(rank));
                    }
                }
                WitnessMode::PerPair => {
                    for (q, r) in (0..n).tuple_combinations() {
                        witnesses.insert((q, r), take(rank));
                    }
                }
            }
        }
        GridLayout { base: self.base.size(), members, witnesses }
    }

    pub fn truncate(&self, t: usize) -> Result<Structure> {
        Ok(self.truncate_with_layout(t)?.0)
    }

    pub fn truncate_with_layout(&self, t: usize) -> Result<(Structure, GridLayout)> {
        self.instantiate(&vec![t; self.doc.labels.len()])
    }

    /// Instantiates `sizes[q]` members of clique `q`.
    pub fn instantiate(&self, sizes: &[usize]) -> Result<(Structure, GridLayout)> {
        assert_eq!(sizes.len(), self.doc.labels.len());
        let layout = self.layout(sizes);
        let sig = &self.signature;
        let mut facts: Vec<(RelId, Tuple)> = self.base.facts().iter().map(|f| (f.rel, f.args.to_vec())).collect();
        for members in &layout.members {
            for m in members {
                for p in &self.doc.member_facts {
                    facts.push(p.instantiate(sig, |t| match t {
                        Token::Pos(i) => Ok(m[i]),
                        Token::Base(e) => Ok(e),
                        _ => unreachable!("tokens checked on construction"),
                    })?);
                }
            }
            for (a, b) in members.iter().tuple_combinations() {
                for (x, y) in [(a, b), (b, a)] {
                    for p in &self.doc.cross_facts {
                        facts.push(p.instantiate(sig, |t| match t {
                            Token::First(i) => Ok(x[i]),
                            Token::Second(i) => Ok(y[i]),
                            Token::Base(e) => Ok(e),
                            _ => unreachable!("tokens checked on construction"),
                        })?);
                    }
                }
            }
        }
        if let Some(w) = &self.doc.witness {
            for (&(q, _), e) in &layout.witnesses {
                for p in &w.facts {
                    facts.push(p.instantiate(sig, |t| match t {
                        Token::Witness(i) => Ok(e[i]),
                        Token::Base(b) => Ok(b),
                        _ => unreachable!("tokens checked on construction"),
                    })?);
                }
                for m in &layout.members[q] {
                    for p in &w.link_facts {
                        facts.push(p.instantiate(sig, |t| match t {
                            Token::Pos(i) => Ok(m[i]),
                            Token::Witness(i) => Ok(e[i]),
                            Token::Base(b) => Ok(b),
                            _ => unreachable!("tokens checked on construction"),
                        })?);
                    }
                }
            }
        }
        let size = layout.base
            + layout.members.iter().flatten().map(Vec::len).sum::<usize>()
            + layout.witnesses.values().map(Vec::len).sum::<usize>();
        Ok((Structure::new(sig.clone(), size, facts)?, layout))
    }

    /// `d_{q,r}` in a truncation, or `None` if it needs a member that is absent.
    pub fn separator(&self, layout: &GridLayout, q: usize, r: usize) -> Option<Tuple> {
        self.doc
            .d
            .iter()
            .map(|&t| match t {
                Token::Base(e) => Some(e),
                Token::Witness(i) => layout.witness(self.mode(), q, r).map(|w| w[i]),
                Token::Anchor(i) => layout.members[q].first().map(|m| m[i]),
                _ => None,
            })
            .collect()
    }

    fn relation_holds(&self, m: &Structure, member: &[Element], d: &[Element]) -> Result<bool> {
        let (rel, args) = self.doc.relation.instantiate(&self.signature, |t| match t {
            Token::Pos(i) => Ok(member[i]),
            Token::Sep(i) => Ok(d[i]),
            _ => unreachable!("tokens checked on construction"),
        })?;
        Ok(m.holds(rel, &args))
    }

    /// Clique property of each `A_q`, the separation condition on `R`, and
    /// for every monotone bijection between equal-size label subsets an
    /// isomorphism of the corresponding sub-grids.
    pub fn validate(&self, t: usize) -> Result<ValidationReport> {
        let n = self.doc.labels.len();
        if n > MAX_LABELS {
            return Err(Error::GuardExceeded(format!("grid validation is limited to {MAX_LABELS} labels, got {n}")));
        }
        let (m, layout) = self.truncate_with_layout(t)?;
        let labels = &self.doc.labels;
        let mut violations = Vec::new();
        let mut checked = 0;
        for (q, members) in layout.members.iter().enumerate() {
            checked += 1;
            if !members.is_empty() {
                let c = KClique { k: self.doc.k, members: members.iter().cloned().sorted().collect() };
                if let Err(e) = c.verify(&m) {
                    violations.push(Violation { map: format!("clique `{}`", labels[q]), witness: e.to_string() });
                }
            }
        }
        for (q, r) in (0..n).tuple_combinations() {
            checked += 1;
            let Some(d) = self.separator(&layout, q, r) else { continue };
            for i in 0..t {
                let (a, b) = (&layout.members[q][i], &layout.members[r][i]);
                let pos = self.relation_holds(&m, a, &d)?;
                let neg = self.relation_holds(&m, b, &d)?;
                if !pos || neg {
                    let which = if !pos { (labels[q].as_str(), "fails") } else { (labels[r].as_str(), "holds") };
                    violations.push(Violation {
                        map: format!("separation of `{}` < `{}`", labels[q], labels[r]),
                        witness: format!("{} {} on member {i} of `{}`", self.doc.relation, which.1, which.0),
                    });
                    break;
                }
            }
        }
        let maps: Vec<(Vec<usize>, Vec<usize>)> = (1..=n)
            .flat_map(|s| {
                (0..n)
                    .combinations(s)
                    .cartesian_product((0..n).combinations(s).collect::<Vec<_>>())
                    .filter(|(a, b)| a != b)
                    .collect::<Vec<_>>()
            })
            .collect();
        checked += maps.len();
        let found = par::map(&maps, |(from, to)| self.check_order_map(&m, &layout, from, to));
        for (res, (from, to)) in found.into_iter().zip(&maps) {
            if let Some(witness) = res {
                let show = |s: &[usize]| s.iter().map(|&q| labels[q].as_str()).join(",");
                violations.push(Violation { map: format!("{{{}}} -> {{{}}}", show(from), show(to)), witness });
            }
        }
        Ok(ValidationReport { t, checked, violations })
    }

    fn sub_grid(&self, layout: &GridLayout, labels: &[usize]) -> Vec<Element> {
        let mut out: Vec<Element> = (0..layout.base).collect();
        for &q in labels {
            out.extend(layout.members[q].iter().flatten());
        }
        for (&(q, r), w) in &layout.witnesses {
            if labels.contains(&q) && labels.contains(&r) {
                out.extend(w);
            }
        }
        out
    }

    /// A fact of the `from` sub-grid whose image is not a fact, or a fact
    /// count mismatch between the two sub-grids.
    fn check_order_map(&self, m: &Structure, layout: &GridLayout, from: &[usize], to: &[usize]) -> Option<String> {
        let mut image: Vec<usize> = (0..m.size()).map(|e| if e < layout.base { e } else { usize::MAX }).collect();
        for (&q, &r) in from.iter().zip(to) {
            for (a, b) in layout.members[q].iter().zip(&layout.members[r]) {
                for (&x, &y) in a.iter().zip(b) {
                    image[x] = y;
                }
            }
        }
        let sigma = |q: usize| to[from.iter().position(|&p| p == q).expect("label in domain")];
        for (&(q, r), w) in &layout.witnesses {
            if from.contains(&q) && from.contains(&r) {
                let target = &layout.witnesses[&(sigma(q), sigma(r))];
                for (&x, &y) in w.iter().zip(target) {
                    image[x] = y;
                }
            }
        }
        let src = self.sub_grid(layout, from);
        let dst = self.sub_grid(layout, to);
        let mut keep_src = vec![false; m.size()];
        for &e in &src {
            keep_src[e] = true;
        }
        let mut keep_dst = vec![false; m.size()];
        for &e in &dst {
            keep_dst[e] = true;
        }
        let mut count = 0;
        for f in m.facts_within(&keep_src) {
            count += 1;
            let img: Tuple = f.args.iter().map(|&e| image[e]).collect();
            if !m.holds(f.rel, &img) {
                return Some(format!(
                    "{}({}) has no image",
                    m.signature().name(f.rel),
                    f.args.iter().map(|e| e.to_string()).join(",")
                ));
            }
        }
        let target = m.facts_within(&keep_dst).count();
        (count != target).then(|| format!("sub-grids carry {count} and {target} facts"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Nf {
    pub structure: Structure,
    /// Members per clique, in label order.
    pub sizes: Vec<usize>,
    /// Maximal clique sizes among member tuples, descending.
    pub family_census: Vec<usize>,
}

impl GridPresentation {
    /// Truncation at `t` with clique `A_q` cut to `cut[q]` members.
    pub fn generate_nf(&self, cut: &BTreeMap<String, usize>, t: usize) -> Result<Nf> {
        let mut sizes = vec![t; self.doc.labels.len()];
        let bound = 2 * self.doc.k + self.signature.max_arity();
        for (label, &size) in cut {
            if size <= bound {
                return Err(Error::Precondition(format!("size {size} for `{label}` must exceed 2k + r = {bound}")));
            }
            if size >= t {
                return Err(Error::Precondition(format!("t = {t} must exceed every cut size, got {size}")));
            }
            sizes[self.label_index(label)?] = size;
        }
        if cut.values().duplicates().next().is_some() {
            return Err(Error::Precondition("cut sizes must be distinct".into()));
        }
        let (structure, layout) = self.instantiate(&sizes)?;
        for (q, members) in layout.members.iter().enumerate() {
            KClique::new(&structure, self.doc.k, members.iter().cloned()).map_err(|e| {
                Error::Verification(format!("clique `{}` of size {}: {e}", self.doc.labels[q], sizes[q]))
            })?;
        }
        let pool: Vec<Tuple> = layout.members.iter().flatten().cloned().collect();
        let family_census = clique_size_census(&structure, self.doc.k, Some(&pool))?;
        let expected: Vec<usize> = sizes.iter().copied().sorted().rev().collect();
        if family_census != expected {
            return Err(Error::Verification(format!(
                "family clique sizes {family_census:?} differ from requested {expected:?}"
            )));
        }
        Ok(Nf { structure, sizes, family_census })
    }
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}

fn patterns(ps: &[&str]) -> Vec<Pattern> {
    ps.iter().map(|s| s.parse().expect("static pattern")).collect()
}

/// New equivalence classes `A_q`, separated by `E` against the first member
/// of the lower class. Rank 0. For `k = 2` each member is a directed `P`-edge
/// and `E` relates all elements of one class.
pub fn rank0_eqrel(k: usize, labels: usize) -> Result<GridPresentation> {
    let (language, member_facts, cross_facts) = match k {
        1 => (vec!["E/2"], patterns(&["E p0 p0"]), patterns(&["E x0 y0"])),
        2 => (
            vec!["E/2", "P/2"],
            patterns(&["P p0 p1", "E p0 p0", "E p0 p1", "E p1 p0", "E p1 p1"]),
            patterns(&["E x0 y0", "E x0 y1", "E x1 y0", "E x1 y1"]),
        ),
        _ => return Err(Error::Precondition(format!("built-in grids have k = 1 or 2, got {k}"))),
    };
    GridPresentation::from_doc(GridDoc {
        schema_version: super::SCHEMA_VERSION,
        language: language.into_iter().map(String::from).collect(),
        base: StructureSpec::default(),
        k,
        labels: default_labels(labels),
        member_facts,
        cross_facts,
        witness: None,
        relation: "E p0 d0".parse()?,
        d: vec![Token::Anchor(0)],
    })
}

/// Members in `U`, one `V`-witness per clique, `R` from every member to its
/// witness. Rank 1.
pub fn rank1_uvr(k: usize, labels: usize, mode: WitnessMode) -> Result<GridPresentation> {
    let (language, member_facts, link_facts) = match k {
        1 => (vec!["U/1", "V/1", "R/2"], patterns(&["U p0"]), patterns(&["R p0 w0"])),
        2 => (
            vec!["U/1", "V/1", "R/2", "P/2"],
            patterns(&["U p0", "U p1", "P p0 p1"]),
            patterns(&["R p0 w0", "R p1 w0"]),
        ),
        _ => return Err(Error::Precondition(format!("built-in grids have k = 1 or 2, got {k}"))),
    };
    GridPresentation::from_doc(GridDoc {
        schema_version: super::SCHEMA_VERSION,
        language: language.into_iter().map(String::from).collect(),
        base: StructureSpec::default(),
        k,
        labels: default_labels(labels),
        member_facts,
        cross_facts: Vec::new(),
        witness: Some(WitnessTemplate { rank: 1, mode, facts: patterns(&["V w0"]), link_facts }),
        relation: "R p0 d0".parse()?,
        d: vec![Token::Witness(0)],
    })
}
