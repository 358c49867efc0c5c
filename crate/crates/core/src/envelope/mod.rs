//! Truncated slices over `[n]`, the horizontal cells of the envelope of
//! `[n]ʰ`, the injective cells of the unital envelope, and sampled round
//! trips between categories over `[n]` and chain cells.
//!
//! Direction convention: a cell morphism `σ → σ'` is an active
//! `α: [k'] → [k]` with `σ' = σ ∘ α`, where `σ: [k] → [n]` and
//! `σ': [k'] → [n]`. Following `α: σ → σ'` by `β: σ' → σ''` gives
//! `α ∘ β: σ → σ''`. Every enumeration carries its [`TruncationBound`].

use std::collections::HashMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::fincat::{category_iso_search_over, FinCategory, Functor, InvalidCategory};
use crate::generate::{random_functor_over, GenParams};
use crate::morita::{algebra_to_category, category_to_algebra, composite_check};
use crate::simplex::{enumerate_operators, OperatorKind, SimplicialOperator};
use crate::straighten::{
    check_lax_iso, conduche_check, glue_chain, glue_spine, restraighten_witness, straighten, total_to_chain,
    LaxFunctorToCorr, StraightenError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvelopeError {
    #[error("closure condition ({condition}) fails: {detail}")]
    ClosureViolation { condition: ClosureCondition, detail: String },
    #[error("round trips are only run over [0], [1] and [2], not [{0}]")]
    DegreeTooLarge(usize),
    #[error("size bound must allow at least one morphism")]
    EmptySizeBound,
    #[error(transparent)]
    Category(#[from] InvalidCategory),
}

/// The three conditions making a choice of objects and horizontal cells a
/// locally full subcategory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureCondition {
    SourceTarget,
    Unit,
    Composition,
}

impl std::fmt::Display for ClosureCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ClosureCondition::SourceTarget => "source-target projection",
            ClosureCondition::Unit => "units",
            ClosureCondition::Composition => "horizontal composition",
        })
    }
}

/// Largest `k` such that slices `[k] → [n]` are enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationBound {
    pub kmax: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SliceFlavor {
    All,
    Idle,
    Active,
    Injective,
}

impl SliceFlavor {
    fn kind(self) -> OperatorKind {
        match self {
            SliceFlavor::All => OperatorKind::All,
            SliceFlavor::Idle => OperatorKind::Idle,
            SliceFlavor::Active => OperatorKind::Active,
            SliceFlavor::Injective => OperatorKind::Injective,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SliceObject {
    pub op: SimplicialOperator,
}

/// All `σ: [k] → [n]` of the flavor with `k ≤ kmax`, by `k` and then
/// lexicographically.
pub fn slice_objects(n: usize, bound: TruncationBound, flavor: SliceFlavor) -> Vec<SliceObject> {
    (0..=bound.kmax)
        .flat_map(|k| enumerate_operators(k, n, flavor.kind()))
        .map(|op| SliceObject { op })
        .collect()
}

/// Concatenation `σ ∨ τ: [k + l] → [n]`, defined when `σ` ends where `τ`
/// starts.
pub fn concatenate(sigma: &SimplicialOperator, tau: &SimplicialOperator) -> Option<SimplicialOperator> {
    if sigma.codomain() != tau.codomain() || sigma.last() != tau.first() {
        return None;
    }
    let values = sigma.values().iter().chain(&tau.values()[1..]).copied().collect();
    SimplicialOperator::new(sigma.codomain(), values).ok()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellMorphism {
    pub source: usize,
    pub target: usize,
    pub alpha: SimplicialOperator,
}

/// Objects and morphisms of a truncated category of horizontal cells.
/// Composition is computed on demand; [`EnvelopeCells::to_category`] builds
/// the full table for small bounds.
#[derive(Debug, Clone)]
pub struct EnvelopeCells {
    n: usize,
    bound: TruncationBound,
    objects: Vec<SliceObject>,
    object_index: HashMap<SimplicialOperator, usize>,
    morphisms: Vec<CellMorphism>,
    /// keyed by `(source, α)`, which determines the target
    morphism_index: HashMap<(usize, SimplicialOperator), usize>,
}

/// The horizontal cells of the envelope of `[n]ʰ`: all slices with
/// `k ≤ kmax` and the active morphisms between them.
pub fn env_horizontal_cells(n: usize, bound: TruncationBound) -> EnvelopeCells {
    let objects = slice_objects(n, bound, SliceFlavor::All);
    let actives: Vec<Vec<Vec<SimplicialOperator>>> = (0..=bound.kmax)
        .map(|k| (0..=bound.kmax).map(|k2| enumerate_operators(k2, k, OperatorKind::Active)).collect())
        .collect();
    EnvelopeCells::assemble(n, bound, objects, |sigma| actives[sigma.domain()].iter().flatten().cloned().collect())
}

impl EnvelopeCells {
    fn assemble(
        n: usize,
        bound: TruncationBound,
        objects: Vec<SliceObject>,
        candidates: impl Fn(&SimplicialOperator) -> Vec<SimplicialOperator>,
    ) -> Self {
        let object_index: HashMap<SimplicialOperator, usize> =
            objects.iter().enumerate().map(|(i, o)| (o.op.clone(), i)).collect();
        let mut morphisms = Vec::new();
        let mut morphism_index = HashMap::new();
        for (source, o) in objects.iter().enumerate() {
            for alpha in candidates(&o.op) {
                let image = o.op.compose(&alpha).expect("α lands in the domain of σ");
                let Some(&target) = object_index.get(&image) else { continue };
                morphism_index.insert((source, alpha.clone()), morphisms.len());
                morphisms.push(CellMorphism { source, target, alpha });
            }
        }
        EnvelopeCells {
            n,
            bound,
            objects,
            object_index,
            morphisms,
            morphism_index,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bound(&self) -> TruncationBound {
        self.bound
    }

    pub fn objects(&self) -> &[SliceObject] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[CellMorphism] {
        &self.morphisms
    }

    pub fn object_index(&self, op: &SimplicialOperator) -> Option<usize> {
        self.object_index.get(op).copied()
    }

    pub fn find(&self, source: usize, alpha: &SimplicialOperator) -> Option<usize> {
        self.morphism_index.get(&(source, alpha.clone())).copied()
    }

    pub fn identity(&self, object: usize) -> usize {
        let k = self.objects[object].op.domain();
        self.find(object, &SimplicialOperator::identity(k)).expect("identities are active")
    }

    /// `g` after `f`, if `f` ends where `g` starts.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        let (f, g) = (&self.morphisms[f], &self.morphisms[g]);
        if f.target != g.source {
            return None;
        }
        let alpha = f.alpha.compose(&g.alpha).ok()?;
        self.find(f.source, &alpha)
    }

    /// The cells as a [`FinCategory`], with every category law checked.
    /// The table is quadratic in the number of morphisms.
    pub fn to_category(&self) -> Result<FinCategory, EnvelopeError> {
        let objects = self.objects.iter().map(|o| o.op.to_string()).collect();
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| (format!("{} on {}", m.alpha, self.objects[m.source].op), m.source, m.target))
            .collect();
        let identity = (0..self.objects.len()).map(|o| self.identity(o)).collect();
        Ok(FinCategory::build(objects, morphisms, identity, |g, f| self.compose(g, f))?)
    }
}

/// What was verified by [`unital_env_filter`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureReport {
    pub bound: TruncationBound,
    pub morphisms_projected: usize,
    pub units_checked: usize,
    /// Pairs of composable cells, and pairs of morphisms between them,
    /// whose concatenation lies within the bound.
    pub object_compositions: usize,
    pub morphism_compositions: usize,
}

#[derive(Debug, Clone)]
pub struct UnitalEnvelope {
    pub cells: EnvelopeCells,
    pub report: ClosureReport,
}

/// Restricts to injective cells and verifies that they form a locally full
/// subcategory: morphisms keep endpoints, units are injective, and
/// concatenation of injective cells and of morphisms between them stays
/// inside.
pub fn unital_env_filter(cells: &EnvelopeCells) -> Result<UnitalEnvelope, EnvelopeError> {
    let objects: Vec<SliceObject> = cells.objects.iter().filter(|o| o.op.is_injective()).cloned().collect();
    let sub = EnvelopeCells::assemble(cells.n, cells.bound, objects, |sigma| {
        cells
            .object_index(sigma)
            .map(|s| {
                cells
                    .morphisms
                    .iter()
                    .filter(|m| m.source == s)
                    .map(|m| m.alpha.clone())
                    .collect()
            })
            .unwrap_or_default()
    });
    let violation = |condition, detail: String| Err(EnvelopeError::ClosureViolation { condition, detail });
    let mut report = ClosureReport {
        bound: cells.bound,
        morphisms_projected: 0,
        units_checked: 0,
        object_compositions: 0,
        morphism_compositions: 0,
    };

    for m in &sub.morphisms {
        let (s, t) = (&sub.objects[m.source].op, &sub.objects[m.target].op);
        if (s.first(), s.last()) != (t.first(), t.last()) {
            return violation(ClosureCondition::SourceTarget, format!("{} moves the endpoints of {s}", m.alpha));
        }
        let full_source = cells.object_index(s);
        if full_source.and_then(|fs| cells.find(fs, &m.alpha)).is_none() {
            return violation(ClosureCondition::SourceTarget, format!("{} on {s} is not a cell morphism", m.alpha));
        }
        report.morphisms_projected += 1;
    }
    for i in 0..=cells.n {
        let unit = SimplicialOperator::new(cells.n, vec![i]).expect("a vertex of [n]");
        if sub.object_index(&unit).is_none() {
            return violation(ClosureCondition::Unit, format!("the unit at {i} is missing"));
        }
        report.units_checked += 1;
    }
    let within = |op: &SimplicialOperator| op.domain() <= cells.bound.kmax;
    for s in &sub.objects {
        for t in &sub.objects {
            let Some(st) = concatenate(&s.op, &t.op).filter(within) else { continue };
            if sub.object_index(&st).is_none() {
                return violation(ClosureCondition::Composition, format!("{} ∨ {} = {st}", s.op, t.op));
            }
            report.object_compositions += 1;
        }
    }
    for f in &sub.morphisms {
        for g in &sub.morphisms {
            let (s, t) = (&sub.objects[f.source].op, &sub.objects[g.source].op);
            let Some(st) = concatenate(s, t).filter(within) else { continue };
            let (s2, t2) = (&sub.objects[f.target].op, &sub.objects[g.target].op);
            let Some(st2) = concatenate(s2, t2).filter(within) else { continue };
            let alpha = shifted_concatenation(&f.alpha, &g.alpha);
            let found = sub
                .object_index(&st)
                .and_then(|i| sub.find(i, &alpha))
                .map(|m| sub.morphisms[m].target);
            if found.is_none() || found != sub.object_index(&st2) {
                return violation(ClosureCondition::Composition, format!("{} ∨ {} on {st}", f.alpha, g.alpha));
            }
            report.morphism_compositions += 1;
        }
    }
    Ok(UnitalEnvelope { cells: sub, report })
}

/// `α ∨ β: [k' + l'] → [k + l]`, with `β` shifted by `k`.
fn shifted_concatenation(alpha: &SimplicialOperator, beta: &SimplicialOperator) -> SimplicialOperator {
    let k = alpha.codomain();
    let values = alpha
        .values()
        .iter()
        .copied()
        .chain(beta.values()[1..].iter().map(|&v| v + k))
        .collect();
    SimplicialOperator::new(k + beta.codomain(), values).expect("concatenated active maps are monotone")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundTripStage {
    /// `p` is not recovered from its cell.
    Forward,
    /// The cell is not recovered from its gluing.
    Backward,
    /// Gluing the spine disagrees with gluing the whole cell for a
    /// Conduché `p`.
    SpineGluing,
    /// Compositeness of the cell disagrees with the Conduché check.
    CompositeMismatch,
    /// Over `[0]`, the category does not survive the algebra round trip.
    Algebra,
}

#[derive(Debug, Clone)]
pub struct RoundTripFailure {
    pub sample: usize,
    pub stage: RoundTripStage,
    pub functor: Functor,
}

#[derive(Debug, Clone)]
pub struct UniversalPropertyReport {
    pub n: usize,
    pub samples: usize,
    pub size_bound: usize,
    pub seed: u64,
    pub conduche_samples: usize,
    pub failures: Vec<RoundTripFailure>,
}

impl UniversalPropertyReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }

    /// The failure with the smallest total category.
    pub fn smallest_failure(&self) -> Option<&RoundTripFailure> {
        self.failures.iter().min_by_key(|f| f.functor.source().num_morphisms())
    }
}

/// Samples functors into `[n]` with at most `size_bound` morphisms and
/// checks that passing to chain cells and gluing back is an equivalence.
pub fn universal_property_roundtrip(
    n: usize,
    samples: usize,
    size_bound: usize,
    seed: u64,
) -> Result<UniversalPropertyReport, EnvelopeError> {
    if n > 2 {
        return Err(EnvelopeError::DegreeTooLarge(n));
    }
    if size_bound == 0 {
        return Err(EnvelopeError::EmptySizeBound);
    }
    let base = Arc::new(FinCategory::ordinal(n));
    let params = GenParams::default().with_max_morphisms(size_bound);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = UniversalPropertyReport {
        n,
        samples,
        size_bound,
        seed,
        conduche_samples: 0,
        failures: Vec::new(),
    };
    for sample in 0..samples {
        let p = random_functor_over(&base, &mut rng, &params);
        let conduche = conduche_check(&p).passes();
        report.conduche_samples += usize::from(conduche);
        if let Err(stage) = round_trip(&p, conduche) {
            report.failures.push(RoundTripFailure {
                sample,
                stage,
                functor: p,
            });
        }
    }
    Ok(report)
}

fn round_trip(p: &Functor, conduche: bool) -> Result<(), RoundTripStage> {
    use RoundTripStage::*;
    let cell = total_to_chain(p).map_err(|_| Forward)?;
    let glued = glue_chain(&cell).map_err(|_| Forward)?;
    category_iso_search_over(&glued.functor, p).ok_or(Forward)?;

    let backward = || -> Result<(), StraightenError> {
        let lax = LaxFunctorToCorr::from_chain(&cell)?;
        let witness = restraighten_witness(&glued, &lax)?;
        check_lax_iso(&straighten(&glued.functor)?, &lax, &witness)
            .map_err(|e| StraightenError::Shape(format!("{e:?}")))
    };
    backward().map_err(|_| Backward)?;

    if composite_check(&cell).passes() != conduche {
        return Err(CompositeMismatch);
    }
    if conduche {
        let spine = glue_spine(&cell).map_err(|_| SpineGluing)?;
        category_iso_search_over(&spine.functor, &glued.functor).ok_or(SpineGluing)?;
    }
    if cell.n() == 0 {
        let d = &cell.algebras()[0];
        let back = algebra_to_category(&category_to_algebra(d)).map_err(|_| Algebra)?;
        if back != **d {
            return Err(Algebra);
        }
    }
    Ok(())
}
