use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::Read as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use sibtool_core::cliques::{enumerate_maximal_kcliques, KClique};
use sibtool_core::embed::{age_up_to, census, find_embedding_with, is_isomorphic_with, same_age_up_to, SearchConfig};
use sibtool_core::mutalg::{
    component_census, ma_bound_named, ma_components, ma_report, max_disjoint_realizations, realizations, QfConjunction,
    DEFAULT_PACKING_CAP,
};
use sibtool_core::presentations::{builtin, Presentation, BUILTIN_NAMES};
use sibtool_core::structure::{parse_structure, serialize_structure};
use sibtool_core::{catalog, Signature, Structure, Tuple};

use crate::report::Failure;

#[derive(Parser, Debug)]
#[command(
    name = "sibtool",
    version,
    about = "Exchangeable tuples, k-cliques, embeddings and sibling families of finite structures"
)]
pub struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for data-parallel steps.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Seed for randomized generators.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Verb,
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// Parse a structure and print its canonical serialization.
    Parse { file: PathBuf },
    /// Maximal k-cliques of exchangeable disjoint tuples.
    Cliques {
        #[arg(long)]
        k: usize,
        /// Restrict candidates to the tuples listed one per line.
        #[arg(long)]
        pool: Option<PathBuf>,
        file: PathBuf,
    },
    /// Per-relation multiplicity bounds.
    Ma {
        file: PathBuf,
        #[arg(long)]
        relation: Option<String>,
    },
    /// MA-connected components and their isomorphism classes.
    Components { file: PathBuf },
    /// Largest number of pairwise disjoint realizations of a formula.
    Pack {
        file: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = DEFAULT_PACKING_CAP)]
        cap: usize,
    },
    /// Embedding of A into B.
    Embed { a: PathBuf, b: PathBuf },
    /// Isomorphism between A and B.
    Iso { a: PathBuf, b: PathBuf },
    /// Partition structures into bi-embeddability blocks.
    Census {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Compare the ages of A and B up to size S.
    Age {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        s: usize,
    },
    /// Brute-force validation of a presentation on its truncation.
    Validate {
        pres: String,
        #[arg(long)]
        t: usize,
    },
    /// Number of siblings: ONE, ALEPH0 or CONTINUUM.
    Classify { pres: String },
    /// Finite truncation of a presentation.
    Truncate {
        pres: String,
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Split cellular families until the partition is separated.
    Separate {
        pres: String,
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Structure generators.
    #[command(subcommand)]
    Generate(Generator),
}

#[derive(Args, Debug)]
pub struct Output {
    /// Write the main output to this file.
    #[arg(short = 'o', long = "out")]
    pub path: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Generator {
    /// Equivalence relation with classes of the given sizes.
    Eqrel {
        #[arg(long, value_delimiter = ',', required = true)]
        classes: Vec<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Grid truncation with some cliques cut to given sizes.
    Nf {
        #[arg(long)]
        spec: String,
        /// `label=size,...`
        #[arg(long, default_value = "")]
        cut: String,
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Cellular truncation with the first ℓ+1 members of a family stripped to one point.
    Mstar {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        family: usize,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Background plus the chain members indexed by S.
    Ns {
        #[arg(long)]
        spec: String,
        #[arg(long, value_delimiter = ',')]
        s: Vec<usize>,
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Random structure; every candidate fact is kept with probability `density`.
    Random {
        #[arg(long)]
        n: usize,
        /// Relations as `NAME/ARITY,...`.
        #[arg(long, value_delimiter = ',', default_value = "E/2")]
        language: Vec<String>,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[command(flatten)]
        out: Output,
    },
}

impl Verb {
    pub fn verb(&self) -> String {
        match self {
            Verb::Parse { .. } => "parse".into(),
            Verb::Cliques { .. } => "cliques".into(),
            Verb::Ma { .. } => "ma".into(),
            Verb::Components { .. } => "components".into(),
            Verb::Pack { .. } => "pack".into(),
            Verb::Embed { .. } => "embed".into(),
            Verb::Iso { .. } => "iso".into(),
            Verb::Census { .. } => "census".into(),
            Verb::Age { .. } => "age".into(),
            Verb::Validate { .. } => "validate".into(),
            Verb::Classify { .. } => "classify".into(),
            Verb::Truncate { .. } => "truncate".into(),
            Verb::Separate { .. } => "separate".into(),
            Verb::Generate(g) => match g {
                Generator::Eqrel { .. } => "generate eqrel".into(),
                Generator::Nf { .. } => "generate nf".into(),
                Generator::Mstar { .. } => "generate mstar".into(),
                Generator::Ns { .. } => "generate ns".into(),
                Generator::Random { .. } => "generate random".into(),
            },
        }
    }
}

pub struct Outcome {
    pub result: Value,
    pub text: String,
    pub warnings: Vec<String>,
}

impl Outcome {
    fn new(result: impl Serialize, text: String) -> Self {
        Outcome { result: serde_json::to_value(result).expect("results serialize"), text, warnings: Vec::new() }
    }
}

fn read_text(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Io(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn read_structure(path: &PathBuf) -> Result<Structure, Failure> {
    let text = read_text(path)?;
    parse_structure(&text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

/// A presentation file, or `builtin:NAME`.
fn load_presentation(arg: &str) -> Result<Presentation, Failure> {
    if let Some(name) = arg.strip_prefix("builtin:") {
        return builtin(name).map_err(|_| {
            Failure::Usage(format!("unknown built-in `{name}`; available: {}", BUILTIN_NAMES.join(", ")))
        });
    }
    let text = read_text(&PathBuf::from(arg))?;
    Presentation::from_json(&text).map_err(|e| Failure::Io(format!("{arg}: {e}")))
}

fn read_pool(path: &PathBuf) -> Result<Vec<Tuple>, Failure> {
    let text = read_text(path)?;
    let mut pool = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let t = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<usize>())
            .collect::<Result<Tuple, _>>()
            .map_err(|_| Failure::Io(format!("{}:{}: expected element indices", path.display(), i + 1)))?;
        pool.push(t);
    }
    Ok(pool)
}

fn emit_structure(s: &Structure, out: &Output, extra: Value) -> Result<Outcome, Failure> {
    let text = serialize_structure(s);
    let mut result = json!({ "size": s.size(), "structure": text });
    if let (Value::Object(map), Value::Object(more)) = (&mut result, extra) {
        map.extend(more);
    }
    match &out.path {
        Some(p) => {
            std::fs::write(p, &text).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
            result["written_to"] = json!(p.display().to_string());
            Ok(Outcome::new(&result, format!("wrote {} ({} elements)\n", p.display(), s.size())))
        }
        None => Ok(Outcome::new(&result, text)),
    }
}

fn show_tuple(t: &[usize]) -> String {
    match t {
        [x] => x.to_string(),
        _ => format!("({})", t.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")),
    }
}

fn show_map(map: &[usize]) -> String {
    map.iter().enumerate().map(|(a, b)| format!("{a}->{b}")).collect::<Vec<_>>().join(" ")
}

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let cfg = SearchConfig::from_env();
    match &cli.command {
        Verb::Parse { file } => {
            let m = read_structure(file)?;
            let text = serialize_structure(&m);
            let language: Vec<String> =
                m.signature().relations().iter().map(|r| format!("{}/{}", r.name, r.arity)).collect();
            let result = json!({ "size": m.size(), "language": language, "facts": m.facts().len(), "structure": text });
            Ok(Outcome::new(result, text))
        }
        Verb::Cliques { k, pool, file } => {
            let m = read_structure(file)?;
            let pool = pool.as_ref().map(read_pool).transpose()?;
            let cliques = enumerate_maximal_kcliques(&m, *k, pool.as_deref())?;
            let census: Vec<usize> = {
                let mut v: Vec<usize> = cliques.iter().map(KClique::size).collect();
                v.sort_unstable_by(|a, b| b.cmp(a));
                v
            };
            let mut text = format!(
                "{} maximal {k}-cliques; sizes {}\n",
                cliques.len(),
                census.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
            );
            for c in &cliques {
                let _ = writeln!(
                    text,
                    "{}: {}",
                    c.size(),
                    c.members.iter().map(|t| show_tuple(t)).collect::<Vec<_>>().join(" ")
                );
            }
            let list: Vec<Value> = cliques.iter().map(|c| json!({ "size": c.size(), "members": c.members })).collect();
            Ok(Outcome::new(json!({ "k": k, "count": cliques.len(), "census": census, "cliques": list }), text))
        }
        Verb::Ma { file, relation } => {
            let m = read_structure(file)?;
            let rows: Vec<(String, usize)> = match relation {
                Some(r) => vec![(r.clone(), ma_bound_named(&m, r)?)],
                None => ma_report(&m).relations.into_iter().map(|r| (r.relation, r.bound)).collect(),
            };
            let text: String = rows.iter().map(|(r, b)| format!("{r}: {b}\n")).collect();
            let relations: Vec<Value> = rows.iter().map(|(r, b)| json!({ "relation": r, "bound": b })).collect();
            Ok(Outcome::new(json!({ "relations": relations }), text))
        }
        Verb::Components { file } => {
            let m = read_structure(file)?;
            let comps = ma_components(&m);
            let classes = component_census(&m)?;
            let mut text = format!("{} components in {} classes\n", comps.len(), classes.len());
            for c in &classes {
                let _ = writeln!(
                    text,
                    "x{} size {}: {}",
                    c.multiplicity(),
                    c.representative.size(),
                    c.components.iter().map(|s| format!("{s:?}")).collect::<Vec<_>>().join(" ")
                );
            }
            let list: Vec<Value> = classes
                .iter()
                .map(|c| {
                    json!({
                        "representative": serialize_structure(&c.representative),
                        "multiplicity": c.multiplicity(),
                        "components": c.components,
                    })
                })
                .collect();
            Ok(Outcome::new(json!({ "components": comps, "classes": list }), text))
        }
        Verb::Pack { file, formula, cap } => {
            let m = read_structure(file)?;
            let phi = QfConjunction::parse(formula)?;
            let count = realizations(&m, &phi)?.len();
            let best = max_disjoint_realizations(&m, &phi, *cap)?;
            let text = format!("{count} realizations; {best} pairwise disjoint (cap {cap})\n");
            let result = json!({
                "formula": phi.to_string(),
                "arity": phi.arity(),
                "realizations": count,
                "max_disjoint": best,
                "cap": cap,
                "capped": best == *cap,
            });
            Ok(Outcome::new(result, text))
        }
        Verb::Embed { a, b } => {
            let (a, b) = (read_structure(a)?, read_structure(b)?);
            let w = find_embedding_with(&a, &b, &cfg)?;
            let text = match &w {
                Some(w) => format!("embeds: {}\n", show_map(&w.map)),
                None => "no embedding\n".into(),
            };
            Ok(Outcome::new(json!({ "embeds": w.is_some(), "map": w.map(|w| w.map) }), text))
        }
        Verb::Iso { a, b } => {
            let (a, b) = (read_structure(a)?, read_structure(b)?);
            let w = is_isomorphic_with(&a, &b, &cfg)?;
            let text = match &w {
                Some(w) => format!("isomorphic: {}\n", show_map(&w.map)),
                None => "not isomorphic\n".into(),
            };
            Ok(Outcome::new(json!({ "isomorphic": w.is_some(), "map": w.map(|w| w.map) }), text))
        }
        Verb::Census { files } => {
            let structures = files.iter().map(read_structure).collect::<Result<Vec<_>, _>>()?;
            let part = census(&structures)?;
            let name = |i: usize| files[i].display().to_string();
            let mut text = format!("{} blocks\n", part.block_count());
            let blocks: Vec<Value> = part
                .blocks
                .iter()
                .enumerate()
                .map(|(b, block)| {
                    let classes: Vec<Vec<String>> =
                        block.iso_classes.iter().map(|c| c.iter().map(|&i| name(i)).collect()).collect();
                    let shown: Vec<String> = classes.iter().map(|c| format!("{{{}}}", c.join(", "))).collect();
                    let _ = writeln!(text, "block {b}: {}", shown.join(" "));
                    json!({ "files": block.members().into_iter().map(name).collect::<Vec<_>>(), "iso_classes": classes })
                })
                .collect();
            Ok(Outcome::new(json!({ "block_count": part.block_count(), "blocks": blocks }), text))
        }
        Verb::Age { a, b, s } => {
            let (a, b) = (read_structure(a)?, read_structure(b)?);
            let same = same_age_up_to(&a, &b, *s)?;
            let (ta, tb) = (age_up_to(&a, *s)?.len(), age_up_to(&b, *s)?.len());
            let text = format!(
                "{} up to size {s} ({ta} and {tb} isomorphism types)\n",
                if same { "same age" } else { "different ages" }
            );
            Ok(Outcome::new(json!({ "s": s, "same_age": same, "types_a": ta, "types_b": tb }), text))
        }
        Verb::Validate { pres, t } => {
            let p = load_presentation(pres)?;
            let report = p.validate(*t)?;
            let mut text = if report.is_valid() {
                format!("valid: {} checks at t = {t}\n", report.checked)
            } else {
                format!("invalid: {} of {} checks failed at t = {t}\n", report.violations.len(), report.checked)
            };
            for v in &report.violations {
                let _ = writeln!(text, "  {v}");
            }
            let result = json!({
                "kind": p.kind(),
                "valid": report.is_valid(),
                "t": report.t,
                "checked": report.checked,
                "violations": report.violations,
            });
            Ok(Outcome::new(result, text))
        }
        Verb::Classify { pres } => {
            let p = load_presentation(pres)?;
            let v = p.classify()?;
            let text = format!("{} ({})\n", v.verdict, v.justification);
            Ok(Outcome::new(json!({ "kind": p.kind(), "verdict": v.verdict, "justification": v.justification }), text))
        }
        Verb::Truncate { pres, t, out } => {
            let p = load_presentation(pres)?;
            let m = p.truncate(*t)?;
            emit_structure(&m, out, json!({ "t": t }))
        }
        Verb::Separate { pres, t, out } => {
            let p = load_presentation(pres)?;
            let Presentation::Cellular(c) = &p else {
                return Err(Failure::Usage(format!("separate needs a cellular presentation, got {}", p.kind())));
            };
            let sep = c.separate(*t)?;
            let changed = &sep != c;
            let families: Vec<String> = sep.families().iter().map(|f| f.name.clone()).collect();
            let sep = Presentation::Cellular(sep);
            let doc = sep.to_json();
            let mut result = json!({
                "changed": changed,
                "families": families,
                "presentation": serde_json::to_value(sep.to_doc()).expect("documents serialize"),
            });
            let text = match &out.path {
                Some(path) => {
                    std::fs::write(path, &doc).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                    result["written_to"] = json!(path.display().to_string());
                    format!("wrote {} (families: {})\n", path.display(), families.join(", "))
                }
                None => format!("{doc}\n"),
            };
            Ok(Outcome::new(result, text))
        }
        Verb::Generate(g) => generate(g, cli.seed),
    }
}

fn parse_cut(s: &str) -> Result<BTreeMap<String, usize>, Failure> {
    let mut out = BTreeMap::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (label, size) =
            part.split_once('=').ok_or_else(|| Failure::Usage(format!("expected label=size, found `{part}`")))?;
        let size = size.trim().parse().map_err(|_| Failure::Usage(format!("bad size in `{part}`")))?;
        if out.insert(label.trim().to_string(), size).is_some() {
            return Err(Failure::Usage(format!("label `{label}` cut twice")));
        }
    }
    Ok(out)
}

fn generate(g: &Generator, seed: u64) -> Result<Outcome, Failure> {
    match g {
        Generator::Eqrel { classes, out } => {
            if classes.contains(&0) {
                return Err(Failure::Usage("class sizes must be positive".into()));
            }
            emit_structure(&catalog::eqrel(classes), out, json!({ "classes": classes }))
        }
        Generator::Nf { spec, cut, t, out } => {
            let Presentation::Grid(grid) = load_presentation(spec)? else {
                return Err(Failure::Usage("generate nf needs a grid presentation".into()));
            };
            let nf = grid.generate_nf(&parse_cut(cut)?, *t)?;
            emit_structure(&nf.structure, out, json!({ "sizes": nf.sizes, "family_census": nf.family_census }))
        }
        Generator::Mstar { spec, family, ell, t, out } => {
            let Presentation::Cellular(p) = load_presentation(spec)? else {
                return Err(Failure::Usage("generate mstar needs a cellular presentation".into()));
            };
            let ms = p.generate_mstar(*family, *ell, *t)?;
            let extra = json!({
                "ell": ms.ell,
                "t": ms.t,
                "stranded": ms.stranded,
                "removed_families": ms.removed_families,
                "stranded_clique_size": ms.stranded_clique_size,
                "largest_finite_clique": ms.largest_finite_clique,
                "bracket": [ms.bracket.0, ms.bracket.1],
            });
            emit_structure(&ms.structure, out, extra)
        }
        Generator::Ns { spec, s, t, out } => {
            let Presentation::Chain(chain) = load_presentation(spec)? else {
                return Err(Failure::Usage("generate ns needs a chain presentation".into()));
            };
            let set: BTreeSet<usize> = s.iter().copied().collect();
            let ns = chain.generate_ns(&set, *t)?;
            emit_structure(&ns.structure, out, json!({ "included": ns.included }))
        }
        Generator::Random { n, language, density, out } => {
            if !(0.0..=1.0).contains(density) {
                return Err(Failure::Usage(format!("density must lie in [0, 1], got {density}")));
            }
            let sig = sibtool_core::presentations::pattern::parse_language(language)?;
            let m = random_structure(&sig, *n, *density, seed)?;
            emit_structure(&m, out, json!({ "seed": seed, "density": density }))
        }
    }
}

fn random_structure(sig: &Signature, n: usize, density: f64, seed: u64) -> Result<Structure, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut facts = Vec::new();
    for r in sig.ids() {
        let arity = sig.arity(r);
        let total = n.checked_pow(arity as u32).filter(|&c| c <= 1_000_000).ok_or_else(|| {
            Failure::Usage(format!("{n}^{arity} candidate tuples is too many for a random structure"))
        })?;
        for code in 0..total {
            if rng.random_bool(density) {
                let mut c = code;
                let t: Tuple = (0..arity)
                    .map(|_| {
                        let e = c % n;
                        c /= n;
                        e
                    })
                    .collect();
                facts.push((r, t));
            }
        }
    }
    Ok(Structure::new(sig.clone(), n, facts)?)
}
