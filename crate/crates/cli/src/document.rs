//! Elaboration of parsed blocks into library objects. Blocks may only refer
//! to names defined earlier.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;
use std::sync::Arc;

use fincorr::fincat::{FinCategory, Functor, RawCategory};
use fincorr::morita::{compose_chain, ChainCell, MonoidInSet, SetBimodule};
use fincorr::profunctor::{BilinearMap, Correspondence};
use fincorr::span::{FinSetMap, Span};
use fincorr::straighten::LaxFunctorToCorr;

use crate::error::{CliError, Location};
use crate::syntax::{parse_file, Block, Line};

/// Values of a bilinear map keyed by `(c, d, e, ξ, η)`.
type Table = HashMap<(usize, usize, usize, usize, usize), usize>;

#[derive(Debug, Clone)]
pub enum Item {
    Category(Arc<FinCategory>),
    Functor {
        functor: Functor,
        source: String,
        target: String,
    },
    Correspondence {
        corr: Correspondence,
        source: String,
        target: String,
    },
    Monoid(Arc<MonoidInSet>),
    Bimodule {
        module: SetBimodule,
        left: String,
        right: String,
    },
    Span(Span),
    Chain {
        cell: ChainCell,
        algebras: Vec<String>,
        /// Modules as written; only the spine when the cell was filled.
        modules: BTreeMap<(usize, usize), String>,
        filled: bool,
    },
    Lax {
        lax: LaxFunctorToCorr,
        base: String,
        fibers: Vec<String>,
        arrows: Vec<String>,
    },
}

impl Item {
    pub fn kind(&self) -> &'static str {
        match self {
            Item::Category(_) => "category",
            Item::Functor { .. } => "functor",
            Item::Correspondence { .. } => "correspondence",
            Item::Monoid(_) => "monoid",
            Item::Bimodule { .. } => "bimodule",
            Item::Span(_) => "span",
            Item::Chain { .. } => "chain",
            Item::Lax { .. } => "lax",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub name: String,
    pub location: Location,
    pub item: Item,
}

#[derive(Debug, Clone, Default)]
pub struct Document {
    pub entries: Vec<Entry>,
    index: HashMap<String, usize>,
}

/// Values of the `_` slots of `pattern`, which must match the record
/// exactly; literal slots must appear verbatim.
fn fields<'a>(line: &'a Line, pattern: &[&str]) -> Result<Vec<&'a str>, CliError> {
    let usage = || CliError::schema(&line.location, format!("expected `{}`", pattern.join(" ")));
    if line.tokens.len() != pattern.len() {
        return Err(usage());
    }
    let mut out = Vec::new();
    for (tok, pat) in line.tokens.iter().zip(pattern) {
        if *pat == "_" {
            out.push(tok.as_str());
        } else if tok != pat {
            return Err(usage());
        }
    }
    Ok(out)
}

fn header(block: &Block, pattern: &[&str]) -> Result<Vec<String>, CliError> {
    let line = Line {
        location: block.location.clone(),
        tokens: block.header.clone(),
    };
    Ok(fields(&line, pattern)?.into_iter().map(String::from).collect())
}

fn unknown(location: &Location, what: &str, name: &str) -> CliError {
    CliError::schema(location, format!("unknown {what} `{name}`"))
}

fn index_of(names: &[String], name: &str, location: &Location, what: &str) -> Result<usize, CliError> {
    names.iter().position(|n| n == name).ok_or_else(|| unknown(location, what, name))
}

fn push_unique(names: &mut Vec<String>, name: &str, location: &Location, what: &str) -> Result<(), CliError> {
    if names.iter().any(|n| n == name) {
        return Err(CliError::schema(location, format!("duplicate {what} `{name}`")));
    }
    names.push(name.to_string());
    Ok(())
}

fn parse_number(token: &str, location: &Location) -> Result<usize, CliError> {
    token
        .parse()
        .map_err(|_| CliError::schema(location, format!("expected a number, found `{token}`")))
}

/// Name-based category data from a `category` block, before validation.
pub fn raw_category(block: &Block) -> Result<RawCategory, CliError> {
    if !block.header.is_empty() {
        return Err(CliError::schema(&block.location, "a category header takes only a name"));
    }
    let mut raw = RawCategory::default();
    let mut morphisms = HashSet::new();
    let declare = |set: &mut HashSet<String>, name: &str, at: &Location| {
        if set.insert(name.to_string()) {
            Ok(())
        } else {
            Err(CliError::schema(at, format!("duplicate morphism `{name}`")))
        }
    };
    for line in &block.records {
        match line.tokens[0].as_str() {
            "object" => {
                let (name, identity) = match line.tokens.len() {
                    2 => (line.tokens[1].clone(), format!("id{}", line.tokens[1])),
                    3 => (line.tokens[1].clone(), line.tokens[2].clone()),
                    _ => return Err(CliError::schema(&line.location, "expected `object NAME [IDENTITY]`")),
                };
                if raw.objects.contains(&name) {
                    return Err(CliError::schema(&line.location, format!("duplicate object `{name}`")));
                }
                declare(&mut morphisms, &identity, &line.location)?;
                raw.objects.push(name.clone());
                raw.morphisms.push((identity.clone(), name.clone(), name.clone()));
                raw.identities.push((name, identity));
            }
            "morphism" => {
                let v = fields(line, &["morphism", "_", ":", "_", "->", "_"])?;
                for end in [v[1], v[2]] {
                    if !raw.objects.iter().any(|o| o == end) {
                        return Err(unknown(&line.location, "object", end));
                    }
                }
                declare(&mut morphisms, v[0], &line.location)?;
                raw.morphisms.push((v[0].into(), v[1].into(), v[2].into()));
            }
            "compose" => {
                let v = fields(line, &["compose", "_", "_", "=", "_"])?;
                for m in &v {
                    if !morphisms.contains(*m) {
                        return Err(unknown(&line.location, "morphism", m));
                    }
                }
                raw.compositions.push((v[1].into(), v[0].into(), v[2].into()));
            }
            other => return Err(CliError::schema(&line.location, format!("unknown category record `{other}`"))),
        }
    }
    Ok(raw)
}

impl Document {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        Self::from_blocks(&parse_file(path)?)
    }

    pub fn from_blocks(blocks: &[Block]) -> Result<Self, CliError> {
        let mut doc = Document::default();
        for block in blocks {
            if doc.index.contains_key(&block.name) {
                return Err(CliError::schema(&block.location, format!("`{}` is defined twice", block.name)));
            }
            let item = doc.elaborate(block)?;
            doc.push(block.name.clone(), block.location.clone(), item);
        }
        Ok(doc)
    }

    pub fn push(&mut self, name: String, location: Location, item: Item) {
        self.index.insert(name.clone(), self.entries.len());
        self.entries.push(Entry { name, location, item });
    }

    pub fn get(&self, name: &str) -> Option<&Entry> {
        self.index.get(name).map(|&i| &self.entries[i])
    }

    /// The entry called `name`, or the last entry of the kind.
    pub fn select(&self, kind: &str, name: Option<&str>) -> Result<&Entry, CliError> {
        let found = match name {
            Some(n) => self.get(n).filter(|e| e.item.kind() == kind),
            None => self.entries.iter().rev().find(|e| e.item.kind() == kind),
        };
        found.ok_or_else(|| match name {
            Some(n) => CliError::Usage(format!("no {kind} called `{n}`")),
            None => CliError::Usage(format!("the input defines no {kind}")),
        })
    }

    /// All entries of the kind, in order.
    pub fn all(&self, kind: &str) -> Vec<&Entry> {
        self.entries.iter().filter(|e| e.item.kind() == kind).collect()
    }

    fn category(&self, name: &str, location: &Location) -> Result<Arc<FinCategory>, CliError> {
        match self.get(name).map(|e| &e.item) {
            Some(Item::Category(c)) => Ok(c.clone()),
            _ => Err(unknown(location, "category", name)),
        }
    }

    fn correspondence(&self, name: &str, location: &Location) -> Result<&Correspondence, CliError> {
        match self.get(name).map(|e| &e.item) {
            Some(Item::Correspondence { corr, .. }) => Ok(corr),
            _ => Err(unknown(location, "correspondence", name)),
        }
    }

    fn monoid(&self, name: &str, location: &Location) -> Result<Arc<MonoidInSet>, CliError> {
        match self.get(name).map(|e| &e.item) {
            Some(Item::Monoid(m)) => Ok(m.clone()),
            _ => Err(unknown(location, "monoid", name)),
        }
    }

    fn elaborate(&self, block: &Block) -> Result<Item, CliError> {
        let at = &block.location;
        match block.kind.as_str() {
            "category" => {
                let raw = raw_category(block)?;
                let c = FinCategory::validate(&raw).map_err(|error| CliError::InvalidCategory {
                    location: at.clone(),
                    name: block.name.clone(),
                    error,
                })?;
                Ok(Item::Category(Arc::new(c)))
            }
            "functor" => self.functor(block),
            "correspondence" => self.correspondence_block(block),
            "monoid" => monoid(block),
            "bimodule" => self.bimodule(block),
            "span" => span(block),
            "chain" => self.chain(block),
            "lax" => self.lax(block),
            other => Err(CliError::schema(at, format!("unknown block kind `{other}`"))),
        }
    }

    fn functor(&self, block: &Block) -> Result<Item, CliError> {
        let at = &block.location;
        let h = header(block, &[":", "_", "->", "_"])?;
        let (source, target) = (self.category(&h[0], at)?, self.category(&h[1], at)?);
        let (mut objects, mut morphisms) = (Vec::new(), Vec::new());
        for line in &block.records {
            match line.tokens[0].as_str() {
                "object" => {
                    let v = fields(line, &["object", "_", "_"])?;
                    objects.push((v[0].to_string(), v[1].to_string()));
                }
                "morphism" => {
                    let v = fields(line, &["morphism", "_", "_"])?;
                    morphisms.push((v[0].to_string(), v[1].to_string()));
                }
                other => return Err(CliError::schema(&line.location, format!("unknown functor record `{other}`"))),
            }
        }
        let functor = Functor::from_names(source, target, &objects, &morphisms)
            .map_err(|e| CliError::schema(at, format!("functor `{}`: {e}", block.name)))?;
        Ok(Item::Functor {
            functor,
            source: h[0].clone(),
            target: h[1].clone(),
        })
    }

    fn correspondence_block(&self, block: &Block) -> Result<Item, CliError> {
        let at = &block.location;
        let h = header(block, &[":", "_", "->", "_"])?;
        let (c_cat, d_cat) = (self.category(&h[0], at)?, self.category(&h[1], at)?);
        let nd = d_cat.num_objects();
        let obj = |cat: &FinCategory, name: &str, l: &Location| {
            cat.object_index(name).ok_or_else(|| unknown(l, "object", name))
        };
        let mor = |cat: &FinCategory, name: &str, l: &Location| {
            cat.morphism_index(name).ok_or_else(|| unknown(l, "morphism", name))
        };
        let mut names = vec![Vec::new(); c_cat.num_objects() * nd];
        let mut left = HashMap::new();
        let mut right = HashMap::new();
        for line in &block.records {
            let l = &line.location;
            match line.tokens[0].as_str() {
                "element" => {
                    let v = fields(line, &["element", "_", "_", "_"])?;
                    let (c, d) = (obj(&c_cat, v[0], l)?, obj(&d_cat, v[1], l)?);
                    push_unique(&mut names[c * nd + d], v[2], l, "element")?;
                }
                "left" => {
                    let v = fields(line, &["left", "_", "_", "_", "=", "_"])?;
                    let (u, d) = (mor(&c_cat, v[0], l)?, obj(&d_cat, v[1], l)?);
                    let x = index_of(&names[c_cat.tgt(u) * nd + d], v[2], l, "element")?;
                    let y = index_of(&names[c_cat.src(u) * nd + d], v[3], l, "element")?;
                    if left.insert((u, d, x), y).is_some() {
                        return Err(CliError::schema(l, "left action given twice"));
                    }
                }
                "right" => {
                    let v = fields(line, &["right", "_", "_", "_", "=", "_"])?;
                    let (c, w) = (obj(&c_cat, v[0], l)?, mor(&d_cat, v[1], l)?);
                    let x = index_of(&names[c * nd + d_cat.src(w)], v[2], l, "element")?;
                    let y = index_of(&names[c * nd + d_cat.tgt(w)], v[3], l, "element")?;
                    if right.insert((c, w, x), y).is_some() {
                        return Err(CliError::schema(l, "right action given twice"));
                    }
                }
                other => {
                    return Err(CliError::schema(l, format!("unknown correspondence record `{other}`")));
                }
            }
        }
        let mut left_table = Vec::new();
        for u in c_cat.morphisms() {
            for d in d_cat.objects() {
                let size = names[c_cat.tgt(u) * nd + d].len();
                let row = (0..size)
                    .map(|x| match left.get(&(u, d, x)) {
                        Some(&y) => Ok(y),
                        None if c_cat.is_identity(u) => Ok(x),
                        None => Err(CliError::schema(
                            at,
                            format!(
                                "missing `left {} {} {}`",
                                c_cat.morphism_name(u),
                                d_cat.object_name(d),
                                names[c_cat.tgt(u) * nd + d][x]
                            ),
                        )),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                left_table.push(row);
            }
        }
        let mut right_table = Vec::new();
        for c in c_cat.objects() {
            for w in d_cat.morphisms() {
                let size = names[c * nd + d_cat.src(w)].len();
                let row = (0..size)
                    .map(|x| match right.get(&(c, w, x)) {
                        Some(&y) => Ok(y),
                        None if d_cat.is_identity(w) => Ok(x),
                        None => Err(CliError::schema(
                            at,
                            format!(
                                "missing `right {} {} {}`",
                                c_cat.object_name(c),
                                d_cat.morphism_name(w),
                                names[c * nd + d_cat.src(w)][x]
                            ),
                        )),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                right_table.push(row);
            }
        }
        let corr = Correspondence::from_tables(c_cat, d_cat, names, left_table, right_table)
            .map_err(|e| CliError::schema(at, format!("correspondence `{}`: {e}", block.name)))?;
        Ok(Item::Correspondence {
            corr,
            source: h[0].clone(),
            target: h[1].clone(),
        })
    }

    fn bimodule(&self, block: &Block) -> Result<Item, CliError> {
        let at = &block.location;
        let h = header(block, &["left", "_", "right", "_"])?;
        let (a, b) = (self.monoid(&h[0], at)?, self.monoid(&h[1], at)?);
        let mut names = Vec::new();
        let mut left = HashMap::new();
        let mut right = HashMap::new();
        for line in &block.records {
            let l = &line.location;
            match line.tokens[0].as_str() {
                "element" => {
                    let v = fields(line, &["element", "_"])?;
                    push_unique(&mut names, v[0], l, "element")?;
                }
                "left" => {
                    let v = fields(line, &["left", "_", "_", "=", "_"])?;
                    let key = (index_of(a.names(), v[0], l, "monoid element")?, index_of(&names, v[1], l, "element")?);
                    left.insert(key, index_of(&names, v[2], l, "element")?);
                }
                "right" => {
                    let v = fields(line, &["right", "_", "_", "=", "_"])?;
                    let key = (index_of(&names, v[0], l, "element")?, index_of(b.names(), v[1], l, "monoid element")?);
                    right.insert(key, index_of(&names, v[2], l, "element")?);
                }
                other => return Err(CliError::schema(l, format!("unknown bimodule record `{other}`"))),
            }
        }
        let n = names.len();
        let missing = |what: String| CliError::schema(at, format!("missing `{what}`"));
        let act_left = (0..a.len())
            .map(|x| {
                (0..n)
                    .map(|m| match left.get(&(x, m)) {
                        Some(&y) => Ok(y),
                        None if x == a.unit() => Ok(m),
                        None => Err(missing(format!("left {} {}", a.names()[x], names[m]))),
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let act_right = (0..n)
            .map(|m| {
                (0..b.len())
                    .map(|x| match right.get(&(m, x)) {
                        Some(&y) => Ok(y),
                        None if x == b.unit() => Ok(m),
                        None => Err(missing(format!("right {} {}", names[m], b.names()[x]))),
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let module = SetBimodule::new(a, b, names, act_left, act_right)
            .map_err(|e| CliError::schema(at, format!("bimodule `{}`: {e}", block.name)))?;
        Ok(Item::Bimodule {
            module,
            left: h[0].clone(),
            right: h[1].clone(),
        })
    }

    fn chain(&self, block: &Block) -> Result<Item, CliError> {
        let at = &block.location;
        header(block, &[])?;
        let mut algebras: Vec<(usize, String)> = Vec::new();
        let mut modules: BTreeMap<(usize, usize), String> = BTreeMap::new();
        let mut mu_lines = Vec::new();
        for line in &block.records {
            let l = &line.location;
            match line.tokens[0].as_str() {
                "algebra" => {
                    let v = fields(line, &["algebra", "_", "_"])?;
                    algebras.push((parse_number(v[0], l)?, v[1].to_string()));
                }
                "module" => {
                    let v = fields(line, &["module", "_", "_", "_"])?;
                    let key = (parse_number(v[0], l)?, parse_number(v[1], l)?);
                    if modules.insert(key, v[2].to_string()).is_some() {
                        return Err(CliError::schema(l, "module given twice"));
                    }
                }
                "mu" => mu_lines.push(line),
                other => return Err(CliError::schema(l, format!("unknown chain record `{other}`"))),
            }
        }
        if algebras.iter().enumerate().any(|(i, (k, _))| i != *k) {
            return Err(CliError::schema(at, "algebras must be numbered 0, 1, 2, … in order"));
        }
        if algebras.is_empty() {
            return Err(CliError::schema(at, "a chain needs at least one algebra"));
        }
        let names: Vec<String> = algebras.into_iter().map(|(_, n)| n).collect();
        let cats = names.iter().map(|n| self.category(n, at)).collect::<Result<Vec<_>, _>>()?;
        let n = cats.len() - 1;
        let mut corrs = BTreeMap::new();
        for (&(i, j), name) in &modules {
            if !(i < j && j <= n) {
                return Err(CliError::schema(at, format!("module index ({i}, {j}) out of range")));
            }
            corrs.insert((i, j), self.correspondence(name, at)?.clone());
        }
        let spine_only = modules.keys().all(|&(i, j)| j == i + 1) && mu_lines.is_empty();
        let lib = |e: fincorr::morita::MoritaError| CliError::schema(at, format!("chain `{}`: {e}", block.name));
        if spine_only {
            let spine = (0..n)
                .map(|i| corrs.remove(&(i, i + 1)).ok_or_else(|| CliError::schema(at, format!("missing module {i} {}", i + 1))))
                .collect::<Result<Vec<_>, _>>()?;
            let cell = compose_chain(cats, spine).map_err(lib)?;
            return Ok(Item::Chain {
                cell,
                algebras: names,
                modules,
                filled: true,
            });
        }
        let mut entries: HashMap<(usize, usize, usize), Table> = HashMap::new();
        for line in mu_lines {
            let l = &line.location;
            let v = fields(line, &["mu", "_", "_", "_", "_", "_", "_", "_", "_", "=", "_"])?;
            let (i, j, k) = (parse_number(v[0], l)?, parse_number(v[1], l)?, parse_number(v[2], l)?);
            let (Some(mij), Some(mjk), Some(mik)) = (corrs.get(&(i, j)), corrs.get(&(j, k)), corrs.get(&(i, k))) else {
                return Err(CliError::schema(l, format!("no modules for mu {i} {j} {k}")));
            };
            let a = cats[i].object_index(v[3]).ok_or_else(|| unknown(l, "object", v[3]))?;
            let b = cats[j].object_index(v[4]).ok_or_else(|| unknown(l, "object", v[4]))?;
            let c = cats[k].object_index(v[5]).ok_or_else(|| unknown(l, "object", v[5]))?;
            let x = mij.element_index(a, b, v[6]).ok_or_else(|| unknown(l, "element", v[6]))?;
            let y = mjk.element_index(b, c, v[7]).ok_or_else(|| unknown(l, "element", v[7]))?;
            let z = mik.element_index(a, c, v[8]).ok_or_else(|| unknown(l, "element", v[8]))?;
            entries.entry((i, j, k)).or_default().insert((a, b, c, x, y), z);
        }
        let mut mu = BTreeMap::new();
        for i in 0..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    let (Some(mij), Some(mjk), Some(mik)) = (corrs.get(&(i, j)), corrs.get(&(j, k)), corrs.get(&(i, k))) else {
                        return Err(CliError::schema(at, format!("missing modules for mu {i} {j} {k}")));
                    };
                    let table = entries.remove(&(i, j, k)).unwrap_or_default();
                    let map = bilinear_from_table(mij, mjk, mik, &table, at, &format!("mu {i} {j} {k}"))?;
                    mu.insert((i, j, k), map);
                }
            }
        }
        if let Some(&(i, j, k)) = entries.keys().next() {
            return Err(CliError::schema(at, format!("mu {i} {j} {k} is not a structure map of this chain")));
        }
        let cell = ChainCell::new(cats, corrs, mu).map_err(lib)?;
        Ok(Item::Chain {
            cell,
            algebras: names,
            modules,
            filled: false,
        })
    }

    fn lax(&self, block: &Block) -> Result<Item, CliError> {
        let at = &block.location;
        let h = header(block, &["over", "_"])?;
        let base = self.category(&h[0], at)?;
        let mut fiber_names: Vec<Option<String>> = vec![None; base.num_objects()];
        let mut arrow_names: Vec<Option<String>> = vec![None; base.num_morphisms()];
        let mut unit_lines = Vec::new();
        let mut comparator_lines = Vec::new();
        for line in &block.records {
            let l = &line.location;
            match line.tokens[0].as_str() {
                "fiber" => {
                    let v = fields(line, &["fiber", "_", "_"])?;
                    let c = base.object_index(v[0]).ok_or_else(|| unknown(l, "object", v[0]))?;
                    if fiber_names[c].replace(v[1].to_string()).is_some() {
                        return Err(CliError::schema(l, "fiber given twice"));
                    }
                }
                "arrow" => {
                    let v = fields(line, &["arrow", "_", "_"])?;
                    let f = base.morphism_index(v[0]).ok_or_else(|| unknown(l, "morphism", v[0]))?;
                    if arrow_names[f].replace(v[1].to_string()).is_some() {
                        return Err(CliError::schema(l, "arrow given twice"));
                    }
                }
                "unit" => unit_lines.push(line),
                "comparator" => comparator_lines.push(line),
                other => return Err(CliError::schema(l, format!("unknown lax record `{other}`"))),
            }
        }
        let fiber_names = fiber_names
            .into_iter()
            .enumerate()
            .map(|(c, n)| n.ok_or_else(|| CliError::schema(at, format!("missing fiber over `{}`", base.object_name(c)))))
            .collect::<Result<Vec<_>, _>>()?;
        let arrow_names = arrow_names
            .into_iter()
            .enumerate()
            .map(|(f, n)| n.ok_or_else(|| CliError::schema(at, format!("missing arrow for `{}`", base.morphism_name(f)))))
            .collect::<Result<Vec<_>, _>>()?;
        let fibers = fiber_names.iter().map(|n| self.category(n, at)).collect::<Result<Vec<_>, _>>()?;
        let arrows = arrow_names
            .iter()
            .map(|n| self.correspondence(n, at).cloned())
            .collect::<Result<Vec<_>, _>>()?;
        for f in base.morphisms() {
            let (s, t) = (base.src(f), base.tgt(f));
            if **arrows[f].source() != *fibers[s] || **arrows[f].target() != *fibers[t] {
                return Err(CliError::schema(
                    at,
                    format!("arrow for `{}` does not run between the fibers over its endpoints", base.morphism_name(f)),
                ));
            }
        }

        let mut units: Vec<HashMap<(usize, usize, usize), usize>> = vec![HashMap::new(); base.num_objects()];
        for line in unit_lines {
            let l = &line.location;
            let v = fields(line, &["unit", "_", "_", "_", "_", "=", "_"])?;
            let c = base.object_index(v[0]).ok_or_else(|| unknown(l, "object", v[0]))?;
            let fib = &fibers[c];
            let x = fib.object_index(v[1]).ok_or_else(|| unknown(l, "object", v[1]))?;
            let y = fib.object_index(v[2]).ok_or_else(|| unknown(l, "object", v[2]))?;
            let e = arrows[base.identity(c)].element_index(x, y, v[3]).ok_or_else(|| unknown(l, "element", v[3]))?;
            let m = fib.morphism_index(v[4]).filter(|&m| fib.src(m) == x && fib.tgt(m) == y);
            let m = m.ok_or_else(|| unknown(l, "morphism", v[4]))?;
            units[c].insert((x, y, e), fib.hom_position(m));
        }
        let unit_tables = base
            .objects()
            .map(|c| {
                let arrow = &arrows[base.identity(c)];
                let fib = &fibers[c];
                fib.objects()
                    .flat_map(|x| fib.objects().map(move |y| (x, y)))
                    .map(|(x, y)| {
                        (0..arrow.size(x, y))
                            .map(|e| {
                                units[c].get(&(x, y, e)).copied().ok_or_else(|| {
                                    CliError::schema(
                                        at,
                                        format!(
                                            "missing `unit {} {} {} {}`",
                                            base.object_name(c),
                                            fib.object_name(x),
                                            fib.object_name(y),
                                            arrow.element_name(x, y, e)
                                        ),
                                    )
                                })
                            })
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;

        let mut tables: HashMap<(usize, usize), Table> = HashMap::new();
        for line in comparator_lines {
            let l = &line.location;
            let v = fields(line, &["comparator", "_", "_", "_", "_", "_", "_", "_", "=", "_"])?;
            let f = base.morphism_index(v[0]).ok_or_else(|| unknown(l, "morphism", v[0]))?;
            let g = base.morphism_index(v[1]).ok_or_else(|| unknown(l, "morphism", v[1]))?;
            let Some(gf) = base.try_compose(g, f) else {
                return Err(CliError::schema(l, format!("`{}` and `{}` are not composable", v[0], v[1])));
            };
            let (fx, fy, fz) = (&fibers[base.src(f)], &fibers[base.tgt(f)], &fibers[base.tgt(g)]);
            let x = fx.object_index(v[2]).ok_or_else(|| unknown(l, "object", v[2]))?;
            let y = fy.object_index(v[3]).ok_or_else(|| unknown(l, "object", v[3]))?;
            let z = fz.object_index(v[4]).ok_or_else(|| unknown(l, "object", v[4]))?;
            let xi = arrows[f].element_index(x, y, v[5]).ok_or_else(|| unknown(l, "element", v[5]))?;
            let eta = arrows[g].element_index(y, z, v[6]).ok_or_else(|| unknown(l, "element", v[6]))?;
            let zeta = arrows[gf].element_index(x, z, v[7]).ok_or_else(|| unknown(l, "element", v[7]))?;
            tables.entry((f, g)).or_default().insert((x, y, z, xi, eta), zeta);
        }
        let mut comparators = BTreeMap::new();
        for (f, g) in base.composable_pairs() {
            let table = tables.remove(&(f, g)).unwrap_or_default();
            let what = format!("comparator {} {}", base.morphism_name(f), base.morphism_name(g));
            let map = bilinear_from_table(&arrows[f], &arrows[g], &arrows[base.compose(g, f)], &table, at, &what)?;
            comparators.insert((f, g), map);
        }
        let lax = LaxFunctorToCorr::new(base, fibers, arrows, unit_tables, comparators)
            .map_err(|e| CliError::schema(at, format!("lax functor `{}`: {e}", block.name)))?;
        Ok(Item::Lax {
            lax,
            base: h[0].clone(),
            fibers: fiber_names,
            arrows: arrow_names,
        })
    }
}

fn bilinear_from_table(
    f: &Correspondence,
    g: &Correspondence,
    h: &Correspondence,
    table: &Table,
    at: &Location,
    what: &str,
) -> Result<BilinearMap, CliError> {
    let mut missing = None;
    for c in f.source().objects() {
        for d in f.target().objects() {
            for e in g.target().objects() {
                for xi in 0..f.size(c, d) {
                    for eta in 0..g.size(d, e) {
                        if missing.is_none() && !table.contains_key(&(c, d, e, xi, eta)) {
                            missing = Some(format!(
                                "missing `{what} {} {} {} {} {}`",
                                f.source().object_name(c),
                                f.target().object_name(d),
                                g.target().object_name(e),
                                f.element_name(c, d, xi),
                                g.element_name(d, e, eta)
                            ));
                        }
                    }
                }
            }
        }
    }
    if let Some(m) = missing {
        return Err(CliError::schema(at, m));
    }
    BilinearMap::from_fn(f, g, h, |c, d, e, xi, eta| table[&(c, d, e, xi, eta)])
        .map_err(|e| CliError::schema(at, format!("{what}: {e}")))
}

fn monoid(block: &Block) -> Result<Item, CliError> {
    let at = &block.location;
    header(block, &[])?;
    let mut names = Vec::new();
    let mut unit = None;
    let mut products = HashMap::new();
    for line in &block.records {
        let l = &line.location;
        match line.tokens[0].as_str() {
            "element" => {
                let v = fields(line, &["element", "_"])?;
                push_unique(&mut names, v[0], l, "element")?;
            }
            "unit" => {
                let v = fields(line, &["unit", "_"])?;
                unit = Some(index_of(&names, v[0], l, "element")?);
            }
            "product" => {
                let v = fields(line, &["product", "_", "_", "=", "_"])?;
                let key = (index_of(&names, v[0], l, "element")?, index_of(&names, v[1], l, "element")?);
                products.insert(key, index_of(&names, v[2], l, "element")?);
            }
            other => return Err(CliError::schema(l, format!("unknown monoid record `{other}`"))),
        }
    }
    let unit = unit.ok_or_else(|| CliError::schema(at, "missing `unit`"))?;
    let n = names.len();
    let mul = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| match products.get(&(a, b)) {
                    Some(&c) => Ok(c),
                    None if a == unit => Ok(b),
                    None if b == unit => Ok(a),
                    None => Err(CliError::schema(at, format!("missing `product {} {}`", names[a], names[b]))),
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let m = MonoidInSet::new(names, unit, mul).map_err(|e| CliError::schema(at, format!("monoid `{}`: {e}", block.name)))?;
    Ok(Item::Monoid(Arc::new(m)))
}

fn span(block: &Block) -> Result<Item, CliError> {
    let at = &block.location;
    header(block, &[])?;
    let mut legs: [Option<FinSetMap>; 2] = [None, None];
    for line in &block.records {
        let l = &line.location;
        let side = match line.tokens[0].as_str() {
            "left" => 0,
            "right" => 1,
            other => return Err(CliError::schema(l, format!("unknown span record `{other}`"))),
        };
        if line.tokens.len() < 3 || line.tokens[2] != ":" {
            return Err(CliError::schema(l, format!("expected `{} SIZE : VALUES…`", line.tokens[0])));
        }
        let size = parse_number(&line.tokens[1], l)?;
        let values = line.tokens[3..].iter().map(|t| parse_number(t, l)).collect::<Result<Vec<_>, _>>()?;
        let map = FinSetMap::new(size, values).map_err(|e| CliError::schema(l, e.to_string()))?;
        if legs[side].replace(map).is_some() {
            return Err(CliError::schema(l, "leg given twice"));
        }
    }
    let [Some(left), Some(right)] = legs else {
        return Err(CliError::schema(at, "a span needs a `left` and a `right` leg"));
    };
    let s = Span::new(left, right).map_err(|e| CliError::schema(at, e.to_string()))?;
    Ok(Item::Span(s))
}

/// Distinct labels for a list of names: repeated names get a `~k` suffix.
pub fn distinct_labels(names: &[String]) -> Vec<String> {
    let mut seen: HashSet<String> = HashSet::new();
    let repeated: HashSet<&String> = {
        let mut once = HashSet::new();
        names.iter().filter(|n| !once.insert(*n)).collect()
    };
    names
        .iter()
        .map(|n| {
            let mut label = n.clone();
            let mut k = 0;
            while (repeated.contains(n) && k == 0) || seen.contains(&label) {
                k += 1;
                label = format!("{n}~{k}");
            }
            seen.insert(label.clone());
            label
        })
        .collect()
}
