//! Verbs. Each produces a [`Report`]; input problems are [`CliError`]s.

use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use fincorr::envelope::{
    env_horizontal_cells, slice_objects, unital_env_filter, universal_property_roundtrip, SliceFlavor, TruncationBound,
};
use fincorr::fincat::{FinCategory, Functor};
use fincorr::generate::{random_functor, GenParams};
use fincorr::morita::{bar_coend_comparison, bar_relative_tensor, composite_check};
use fincorr::profunctor::coend_compose;
use fincorr::span::compose_spans;
use fincorr::straighten::{
    chain_to_total, check_lax_iso, conduche_check, counit, glue_chain, locally_cocartesian_check,
    restraighten_witness, straighten, unstraighten, Collage, LaxFunctorToCorr,
};

use crate::document::{raw_category, Document, Item};
use crate::error::CliError;
use crate::syntax::{parse_file, resolve_path};
use crate::{dot, print};

#[derive(Debug, Parser)]
#[command(name = "fincorr", version, about = "Exact straightening of finite categories")]
pub struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Input file; `@name` refers to the bundled fixtures.
    pub file: String,
    /// Item to use; defaults to the last one of the expected kind.
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Args)]
pub struct Pair {
    pub file: String,
    #[arg(long)]
    pub first: String,
    #[arg(long)]
    pub second: String,
    /// Name of the result.
    #[arg(long)]
    pub output: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Flavor {
    All,
    Idle,
    Active,
    Injective,
}

impl From<Flavor> for SliceFlavor {
    fn from(f: Flavor) -> Self {
        match f {
            Flavor::All => SliceFlavor::All,
            Flavor::Idle => SliceFlavor::Idle,
            Flavor::Active => SliceFlavor::Active,
            Flavor::Injective => SliceFlavor::Injective,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a category block.
    CheckCategory(Input),
    /// Straighten a functor into a lax functor to correspondences.
    Straighten(Input),
    /// Glue a lax functor into a total category over its base.
    Unstraighten(Input),
    /// Decide whether a functor is Conduché.
    Conduche(Input),
    /// Decide whether a functor is locally cocartesian.
    LocCocart(Input),
    /// Compose two correspondences by a coend.
    ComposeCorr(Pair),
    /// Relative tensor product of two bimodules.
    Tensor(Pair),
    /// Compose two spans of finite sets.
    SpanCompose(Pair),
    /// Check that every structure map of a chain is a composite.
    CompositeCheck(Input),
    /// Glue a chain cell into a category over `[n]`.
    ChainTotal {
        #[command(flatten)]
        input: Input,
        /// Glue even when the cell is not composite.
        #[arg(long)]
        glue: bool,
    },
    /// Count slices and cells of the truncated envelope of `[n]`.
    Envelope {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        kmax: usize,
        #[arg(long, value_enum, default_value = "all")]
        flavor: Flavor,
        /// Also build the horizontal cells.
        #[arg(long)]
        cells: bool,
        /// Also check closure of the injective cells.
        #[arg(long)]
        unital: bool,
    },
    /// Straighten and unstraighten, checking both round trips.
    Roundtrip {
        /// Functor file; omit with `--random` or `--universal`.
        file: Option<String>,
        #[arg(long)]
        name: Option<String>,
        /// Random functors from the generator.
        #[arg(long)]
        random: bool,
        /// Chain cells over `[n]` and back.
        #[arg(long)]
        universal: bool,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Largest total category, in morphisms.
        #[arg(long, default_value_t = 8)]
        size: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Graphviz drawing of an item.
    Dot(Input),
    /// Canonical text of every item in a file.
    Print { file: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub verb: String,
    pub verdict: Verdict,
    pub summary: String,
    pub witnesses: Vec<String>,
    /// Output in the input syntax, or DOT for `dot`.
    pub output: String,
    pub seed: Option<u64>,
    pub elapsed_ms: u128,
}

impl Report {
    fn new(verb: &str, verdict: Verdict, summary: impl Into<String>) -> Self {
        Report {
            verb: verb.to_string(),
            verdict,
            summary: summary.into(),
            witnesses: Vec::new(),
            output: String::new(),
            seed: None,
            elapsed_ms: 0,
        }
    }

    fn pass(verb: &str, summary: impl Into<String>) -> Self {
        Self::new(verb, Verdict::Pass, summary)
    }

    fn fail(verb: &str, summary: impl Into<String>) -> Self {
        Self::new(verb, Verdict::Fail, summary)
    }

    fn with_output(mut self, output: String) -> Self {
        self.output = output;
        self
    }

    fn witness(mut self, w: impl Into<String>) -> Self {
        self.witnesses.push(w.into());
        self
    }

    pub fn error(verb: &str, error: &CliError) -> Self {
        Self::new(verb, Verdict::Error, error.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Error => 2,
        }
    }

    /// Text form: the output, then `#` comment lines, so that the whole
    /// text can be read back as input.
    pub fn human(&self) -> String {
        if self.verb == "dot" && self.verdict == Verdict::Pass {
            return self.output.clone();
        }
        let mut out = self.output.clone();
        let verdict = match self.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Error => "error",
        };
        out.push_str(&format!("# verdict: {verdict}\n# {}\n", self.summary));
        if let Some(seed) = self.seed {
            out.push_str(&format!("# seed: {seed}\n"));
        }
        for w in &self.witnesses {
            out.push_str(&format!("# witness: {w}\n"));
        }
        out
    }
}

impl Command {
    pub fn verb(&self) -> &'static str {
        match self {
            Command::CheckCategory(_) => "check-category",
            Command::Straighten(_) => "straighten",
            Command::Unstraighten(_) => "unstraighten",
            Command::Conduche(_) => "conduche",
            Command::LocCocart(_) => "loc-cocart",
            Command::ComposeCorr(_) => "compose-corr",
            Command::Tensor(_) => "tensor",
            Command::SpanCompose(_) => "span-compose",
            Command::CompositeCheck(_) => "composite-check",
            Command::ChainTotal { .. } => "chain-total",
            Command::Envelope { .. } => "envelope",
            Command::Roundtrip { .. } => "roundtrip",
            Command::Dot(_) => "dot",
            Command::Print { .. } => "print",
        }
    }
}

fn load(file: &str) -> Result<Document, CliError> {
    Document::load(&resolve_path(file))
}

fn functor_of<'a>(doc: &'a Document, input: &Input) -> Result<(&'a str, &'a Functor, &'a str), CliError> {
    let e = doc.select("functor", input.name.as_deref())?;
    match &e.item {
        Item::Functor { functor, target, .. } => Ok((&e.name, functor, target)),
        _ => unreachable!("select returns the requested kind"),
    }
}

fn lax_of<'a>(doc: &'a Document, input: &Input) -> Result<(&'a str, &'a LaxFunctorToCorr, &'a str), CliError> {
    let e = doc.select("lax", input.name.as_deref())?;
    match &e.item {
        Item::Lax { lax, base, .. } => Ok((&e.name, lax, base)),
        _ => unreachable!("select returns the requested kind"),
    }
}

/// Runs a verb, timing it.
pub fn run(command: &Command) -> Result<Report, CliError> {
    let start = Instant::now();
    let mut report = dispatch(command)?;
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

fn dispatch(command: &Command) -> Result<Report, CliError> {
    let verb = command.verb();
    match command {
        Command::CheckCategory(input) => check_category(verb, input),
        Command::Straighten(input) => {
            let doc = load(&input.file)?;
            let (name, p, base_name) = functor_of(&doc, input)?;
            let lax = straighten(p).map_err(|e| CliError::Usage(e.to_string()))?;
            let out = straightened_document(name, base_name, &lax);
            let summary = format!(
                "straightened `{name}` over `{base_name}`: {} fibers, {} correspondences",
                lax.fibers().len(),
                lax.arrows().len()
            );
            Ok(Report::pass(verb, summary).with_output(print::render(&out)))
        }
        Command::Unstraighten(input) => {
            let doc = load(&input.file)?;
            let (name, lax, base_name) = lax_of(&doc, input)?;
            let collage = match unstraighten(lax) {
                Ok(c) => c,
                Err(e) => return Ok(Report::fail(verb, format!("`{name}` cannot be glued")).witness(e.to_string())),
            };
            let mut out = Document::default();
            let base_entry = doc.get(base_name).expect("the base was elaborated");
            out.push(base_name.to_string(), base_entry.location.clone(), base_entry.item.clone());
            push_collage(&mut out, name, base_name, &collage);
            let again = straighten(&collage.functor).map_err(|e| CliError::Usage(e.to_string()))?;
            let iso = restraighten_witness(&collage, lax)
                .map_err(|e| e.to_string())
                .and_then(|t| check_lax_iso(&again, lax, &t).map_err(|e| e.to_string()));
            let total = collage.total();
            let summary = format!(
                "glued `{name}` into {} objects and {} morphisms",
                total.num_objects(),
                total.num_morphisms()
            );
            let report = match iso {
                Ok(()) => Report::pass(verb, format!("{summary}; straightening it again is isomorphic to `{name}`")),
                Err(e) => Report::fail(verb, format!("{summary}; straightening it again is not isomorphic")).witness(e),
            };
            Ok(report.with_output(print::render(&out)))
        }
        Command::Conduche(input) => {
            let doc = load(&input.file)?;
            let (name, p, _) = functor_of(&doc, input)?;
            let report = conduche_check(p);
            let (base, d) = (p.target(), p.source());
            Ok(match report.failure {
                None => Report::pass(verb, format!("`{name}` is Conduché ({} composable pairs)", report.pairs_checked)),
                Some(f) => Report::fail(verb, format!("`{name}` is not Conduché")).witness(format!(
                    "f={} g={} x={} z={} injective={} surjective={}",
                    base.morphism_name(f.f),
                    base.morphism_name(f.g),
                    d.object_name(f.x),
                    d.object_name(f.z),
                    f.injective,
                    f.surjective
                )),
            })
        }
        Command::LocCocart(input) => {
            let doc = load(&input.file)?;
            let (name, p, _) = functor_of(&doc, input)?;
            let report = locally_cocartesian_check(p);
            let (base, d) = (p.target(), p.source());
            let mut out = match report.failure {
                None => Report::pass(
                    verb,
                    format!("`{name}` is locally cocartesian ({} lifts)", report.lifts.len()),
                ),
                Some((f, x)) => Report::fail(verb, format!("`{name}` is not locally cocartesian")).witness(format!(
                    "f={} x={} has no locally cocartesian lift",
                    base.morphism_name(f),
                    d.object_name(x)
                )),
            };
            for lift in &report.lifts {
                out = out.witness(format!(
                    "lift of {} at {} is {}",
                    base.morphism_name(lift.f),
                    d.object_name(lift.source),
                    d.morphism_name(lift.lift)
                ));
            }
            if !report.oracle_agrees {
                out.verdict = Verdict::Fail;
                out.summary.push_str("; the direct lift search disagrees");
            }
            Ok(out)
        }
        Command::ComposeCorr(pair) => {
            let doc = load(&pair.file)?;
            let (f, fs, _) = corr_of(&doc, &pair.first)?;
            let (g, _, gt) = corr_of(&doc, &pair.second)?;
            let coend = coend_compose(f, g).map_err(|e| CliError::Usage(e.to_string()))?;
            let name = pair.output.clone().unwrap_or_else(|| format!("{}.{}", pair.first, pair.second));
            let text = print::correspondence(&name, fs, gt, &coend.composite);
            let summary = format!("composite has {} elements", coend.composite.total_size());
            Ok(Report::pass(verb, summary).with_output(text))
        }
        Command::Tensor(pair) => {
            let doc = load(&pair.file)?;
            let (m, ml, _) = bimodule_of(&doc, &pair.first)?;
            let (n, _, nr) = bimodule_of(&doc, &pair.second)?;
            let tensor = bar_relative_tensor(m, n).map_err(|e| CliError::Usage(e.to_string()))?;
            let cats: Vec<Arc<FinCategory>> = [m.left_monoid(), m.right_monoid(), n.right_monoid()]
                .iter()
                .map(|x| Arc::new(x.to_category()))
                .collect();
            let coend = coend_compose(&n.to_correspondence(&cats[1], &cats[2]), &m.to_correspondence(&cats[0], &cats[1]))
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let agrees = bar_coend_comparison(&tensor, &coend).is_ok_and(|map| map.is_iso(&coend.composite));
            let name = pair.output.clone().unwrap_or_else(|| format!("{}.{}", pair.first, pair.second));
            let text = print::bimodule(&name, ml, nr, &tensor.module);
            let size = tensor.module.len();
            Ok(if agrees {
                Report::pass(verb, format!("tensor has {size} elements; the bar and coend constructions agree"))
            } else {
                Report::fail(verb, format!("tensor has {size} elements; the bar and coend constructions disagree"))
            }
            .with_output(text))
        }
        Command::SpanCompose(pair) => {
            let doc = load(&pair.file)?;
            let s = span_of(&doc, &pair.first)?;
            let t = span_of(&doc, &pair.second)?;
            let c = compose_spans(s, t).map_err(|e| CliError::Usage(e.to_string()))?;
            let name = pair.output.clone().unwrap_or_else(|| format!("{}.{}", pair.first, pair.second));
            let summary = format!("composite apex has {} elements", c.span.apex());
            Ok(Report::pass(verb, summary).with_output(print::span(&name, &c.span)))
        }
        Command::CompositeCheck(input) => {
            let doc = load(&input.file)?;
            let (name, cell, _) = chain_of(&doc, input)?;
            let report = composite_check(cell);
            let mut out = if report.passes() {
                Report::pass(verb, format!("`{name}` is composite"))
            } else {
                Report::fail(verb, format!("`{name}` is not composite"))
            };
            for f in &report.failures {
                out = out.witness(format!("{f:?}"));
            }
            Ok(out)
        }
        Command::ChainTotal { input, glue } => {
            let doc = load(&input.file)?;
            let (name, cell, _) = chain_of(&doc, input)?;
            let collage = if *glue { glue_chain(cell) } else { chain_to_total(cell) };
            let collage = match collage {
                Ok(c) => c,
                Err(e) => {
                    return Ok(Report::fail(verb, format!("`{name}` is not composite; pass --glue to glue it anyway"))
                        .witness(e.to_string()))
                }
            };
            let mut out = Document::default();
            let base_name = format!("{name}.base");
            let base = collage.functor.target().clone();
            out.push(base_name.clone(), doc.get(name).expect("selected").location.clone(), Item::Category(base));
            push_collage(&mut out, name, &base_name, &collage);
            let total = collage.total();
            let summary = format!("glued `{name}` into {} objects and {} morphisms", total.num_objects(), total.num_morphisms());
            Ok(Report::pass(verb, summary).with_output(print::render(&out)))
        }
        Command::Envelope {
            n,
            kmax,
            flavor,
            cells,
            unital,
        } => envelope(verb, *n, *kmax, *flavor, *cells, *unital),
        Command::Roundtrip {
            file,
            name,
            random,
            universal,
            n,
            samples,
            size,
            seed,
        } => {
            if *random || *universal {
                if *random && *universal {
                    return Err(CliError::Usage("choose one of --random and --universal".into()));
                }
                if file.is_some() {
                    return Err(CliError::Usage("a file cannot be combined with --random or --universal".into()));
                }
                let seed = seed.ok_or_else(|| CliError::Usage("--seed is required for sampled round trips".into()))?;
                let mut report = if *random {
                    random_round_trips(verb, *samples, *size, seed)
                } else {
                    universal_round_trips(verb, *n, *samples, *size, seed)?
                };
                report.seed = Some(seed);
                Ok(report)
            } else {
                let file = file
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("give a functor file, --random or --universal".into()))?;
                let doc = load(file)?;
                let input = Input {
                    file: file.clone(),
                    name: name.clone(),
                };
                let (fname, p, _) = functor_of(&doc, &input)?;
                Ok(match round_trip(p) {
                    Ok(()) => Report::pass(verb, format!("both round trips hold for `{fname}`")),
                    Err(e) => Report::fail(verb, format!("a round trip fails for `{fname}`")).witness(e),
                })
            }
        }
        Command::Dot(input) => {
            let doc = load(&input.file)?;
            let entry = match &input.name {
                Some(n) => doc.get(n).ok_or_else(|| CliError::Usage(format!("no item called `{n}`")))?,
                None => doc.entries.last().ok_or_else(|| CliError::Usage("the input is empty".into()))?,
            };
            Ok(Report::pass(verb, format!("drew `{}`", entry.name)).with_output(dot::entry(entry)?))
        }
        Command::Print { file } => {
            let doc = load(file)?;
            Ok(Report::pass(verb, format!("{} items", doc.entries.len())).with_output(print::render(&doc)))
        }
    }
}

fn check_category(verb: &str, input: &Input) -> Result<Report, CliError> {
    let blocks = parse_file(&resolve_path(&input.file))?;
    let block = match &input.name {
        Some(n) => blocks.iter().find(|b| b.kind == "category" && &b.name == n),
        None => blocks.iter().rev().find(|b| b.kind == "category"),
    }
    .ok_or_else(|| CliError::Usage("no such category in the input".into()))?;
    let raw = raw_category(block)?;
    Ok(match FinCategory::validate(&raw) {
        Ok(c) => Report::pass(
            verb,
            format!(
                "`{}` is a category with {} objects and {} morphisms",
                block.name,
                c.num_objects(),
                c.num_morphisms()
            ),
        ),
        Err(e) => {
            let mut r = Report::fail(verb, format!("{}: `{}` is not a category", block.location, block.name));
            for v in &e.violations {
                r = r.witness(v.to_string());
            }
            r
        }
    })
}

fn corr_of<'a>(
    doc: &'a Document,
    name: &str,
) -> Result<(&'a fincorr::profunctor::Correspondence, &'a str, &'a str), CliError> {
    match doc.get(name).map(|e| &e.item) {
        Some(Item::Correspondence { corr, source, target }) => Ok((corr, source, target)),
        _ => Err(CliError::Usage(format!("no correspondence called `{name}`"))),
    }
}

fn bimodule_of<'a>(doc: &'a Document, name: &str) -> Result<(&'a fincorr::morita::SetBimodule, &'a str, &'a str), CliError> {
    match doc.get(name).map(|e| &e.item) {
        Some(Item::Bimodule { module, left, right }) => Ok((module, left, right)),
        _ => Err(CliError::Usage(format!("no bimodule called `{name}`"))),
    }
}

fn span_of<'a>(doc: &'a Document, name: &str) -> Result<&'a fincorr::span::Span, CliError> {
    match doc.get(name).map(|e| &e.item) {
        Some(Item::Span(s)) => Ok(s),
        _ => Err(CliError::Usage(format!("no span called `{name}`"))),
    }
}

fn chain_of<'a>(doc: &'a Document, input: &Input) -> Result<(&'a str, &'a fincorr::morita::ChainCell, bool), CliError> {
    let e = doc.select("chain", input.name.as_deref())?;
    match &e.item {
        Item::Chain { cell, filled, .. } => Ok((&e.name, cell, *filled)),
        _ => unreachable!("select returns the requested kind"),
    }
}

/// Base, fibers `P.fiber.c`, correspondences `P.arrow.f` and the lax
/// functor `P.lax`.
pub fn straightened_document(name: &str, base_name: &str, lax: &LaxFunctorToCorr) -> Document {
    let mut doc = Document::default();
    let here = crate::error::Location {
        file: "<straighten>".into(),
        line: 0,
    };
    let base = lax.base();
    doc.push(base_name.to_string(), here.clone(), Item::Category(base.clone()));
    let fibers: Vec<String> = base.objects().map(|c| format!("{name}.fiber.{}", base.object_name(c))).collect();
    for c in base.objects() {
        doc.push(fibers[c].clone(), here.clone(), Item::Category(lax.fiber(c).clone()));
    }
    let arrows: Vec<String> = base.morphisms().map(|f| format!("{name}.arrow.{}", base.morphism_name(f))).collect();
    for f in base.morphisms() {
        let item = Item::Correspondence {
            corr: lax.arrow(f).clone(),
            source: fibers[base.src(f)].clone(),
            target: fibers[base.tgt(f)].clone(),
        };
        doc.push(arrows[f].clone(), here.clone(), item);
    }
    let item = Item::Lax {
        lax: lax.clone(),
        base: base_name.to_string(),
        fibers,
        arrows,
    };
    doc.push(format!("{name}.lax"), here, item);
    doc
}

fn push_collage(doc: &mut Document, name: &str, base_name: &str, collage: &Collage) {
    let here = crate::error::Location {
        file: "<glue>".into(),
        line: 0,
    };
    let total = format!("{name}.total");
    doc.push(total.clone(), here.clone(), Item::Category(collage.total().clone()));
    let item = Item::Functor {
        functor: collage.functor.clone(),
        source: total,
        target: base_name.to_string(),
    };
    doc.push(format!("{name}.projection"), here, item);
}

/// Both round trips: the counit is an isomorphism over the base, and
/// straightening the glued category gives back the lax functor.
pub fn round_trip(p: &Functor) -> Result<(), String> {
    let lax = straighten(p).map_err(|e| e.to_string())?;
    let collage = unstraighten(&lax).map_err(|e| e.to_string())?;
    let e = counit(p, &collage).map_err(|e| e.to_string())?;
    if !(e.is_bijective() && e.then(p).ok().as_ref() == Some(&collage.functor)) {
        return Err("the counit is not an isomorphism over the base".into());
    }
    let again = straighten(&collage.functor).map_err(|e| e.to_string())?;
    let witness = restraighten_witness(&collage, &lax).map_err(|e| e.to_string())?;
    check_lax_iso(&again, &lax, &witness).map_err(|e| format!("straightening again: {e}"))
}

fn random_round_trips(verb: &str, samples: usize, size: usize, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = GenParams::default().with_max_morphisms(size.max(1));
    let mut failures = Vec::new();
    for i in 0..samples {
        let p = random_functor(&mut rng, &params);
        if let Err(e) = round_trip(&p) {
            failures.push(format!("sample {i} ({} morphisms): {e}", p.source().num_morphisms()));
        }
    }
    let mut report = if failures.is_empty() {
        Report::pass(verb, format!("{samples} random functors round trip"))
    } else {
        Report::fail(verb, format!("{} of {samples} random functors fail", failures.len()))
    };
    report.witnesses = failures;
    report
}

fn universal_round_trips(verb: &str, n: usize, samples: usize, size: usize, seed: u64) -> Result<Report, CliError> {
    let r = universal_property_roundtrip(n, samples, size, seed).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut report = if r.passes() {
        Report::pass(
            verb,
            format!(
                "{samples} functors into [{n}] survive chains and gluing ({} Conduché)",
                r.conduche_samples
            ),
        )
    } else {
        Report::fail(verb, format!("{} of {samples} functors into [{n}] fail", r.failures.len()))
    };
    if let Some(f) = r.smallest_failure() {
        report = report.witness(format!(
            "sample {} fails at {:?} with {} morphisms",
            f.sample,
            f.stage,
            f.functor.source().num_morphisms()
        ));
    }
    Ok(report)
}

fn envelope(verb: &str, n: usize, kmax: usize, flavor: Flavor, cells: bool, unital: bool) -> Result<Report, CliError> {
    let bound = TruncationBound { kmax };
    let count = slice_objects(n, bound, flavor.into()).len();
    let mut report = Report::pass(verb, format!("count {count}: slices of [{n}] up to degree {kmax}"));
    if cells || unital {
        let env = env_horizontal_cells(n, bound);
        report
            .witnesses
            .push("convention: a morphism σ → σ' is an active α with σ' = σ∘α".to_string());
        report.witnesses.push(format!(
            "horizontal cells: {} objects, {} morphisms",
            env.objects().len(),
            env.morphisms().len()
        ));
        if unital {
            match unital_env_filter(&env) {
                Ok(u) => report.witnesses.push(format!(
                    "unital envelope: {} objects, {} morphisms, {} units and {} + {} concatenations checked",
                    u.cells.objects().len(),
                    u.cells.morphisms().len(),
                    u.report.units_checked,
                    u.report.object_compositions,
                    u.report.morphism_compositions
                )),
                Err(e) => {
                    report.verdict = Verdict::Fail;
                    report.witnesses.push(e.to_string());
                }
            }
        }
    }
    Ok(report)
}

/// Standard output, standard error and exit status of an invocation.
pub fn cli_output(cli: &Cli) -> (String, String, i32) {
    let verb = cli.command.verb();
    let report = run(&cli.command).unwrap_or_else(|e| Report::error(verb, &e));
    let code = report.exit_code();
    if cli.json {
        (serde_json::to_string_pretty(&report).expect("reports serialize") + "\n", String::new(), code)
    } else if report.verdict == Verdict::Error {
        (String::new(), format!("error: {}\n", report.summary), code)
    } else {
        (report.human(), String::new(), code)
    }
}
