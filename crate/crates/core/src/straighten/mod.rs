//! Unital lax functors from a finite category into correspondences.
//!
//! A functor `p: D → C` straightens to `P` with `P(c) = D_c`, `P(f)(x, y)` the
//! morphisms `x → y` over `f`, and comparators `P(f) ⊙ P(g) → P(gf)` given by
//! composition in `D`. The collage of a coherent `P` recovers a category over
//! `C`. The same data classifies Conduché fibrations (bijective comparators)
//! and locally cocartesian fibrations (representable `P(f)`).

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::fincat::{FinCategory, FincatError, Functor, InvalidCategory, Mor, Ob};
use crate::morita::{ChainCell, CompositeFailure, MoritaError};
use crate::profunctor::{hom_identity, same_category, BilinearMap, CorrMap, Correspondence, ProfunctorError};

mod chains;
mod fibrations;
mod grothendieck;

pub use chains::{chain_to_total, glue_chain, glue_spine, ordinal_length, total_to_chain};
pub use fibrations::{
    comparator_failure, conduche_check, conduche_oracle, locally_cocartesian_check, locally_cocartesian_oracle,
    CocartesianLift, ConducheFailure, ConducheReport, LocCocartReport,
};
pub use grothendieck::{
    check_lax_iso, counit, restraighten_witness, straighten, straighten_map, unstraighten, Collage, LaxMapFailure,
    LaxTransformation,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StraightenError {
    #[error("malformed lax functor: {0}")]
    Shape(String),
    #[error("lax functor is not coherent: {0}")]
    CoherenceRequired(CoherenceFailure),
    #[error("cell is not composite: {0:?}")]
    NonCompositeCell(Vec<CompositeFailure>),
    #[error("base category is not an ordinal [n]")]
    NotOverOrdinal,
    #[error("functors do not form a commuting square over the bases")]
    NotOverBase,
    #[error(transparent)]
    Profunctor(#[from] ProfunctorError),
    #[error(transparent)]
    Fincat(#[from] FincatError),
    #[error(transparent)]
    Category(#[from] InvalidCategory),
    #[error(transparent)]
    Morita(#[from] MoritaError),
}

/// First violated axiom of a normal lax functor. Objects are fiber-local.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoherenceFailure {
    #[error("unit comparison at object {object} is not invertible")]
    UnitNotInvertible { object: Ob },
    /// `μ(u, ξ) ≠ ξ · unit(u)` for `u ∈ P(id)(x, y)`, `ξ ∈ P(f)(y, z)`.
    #[error("left unit law fails for morphism {f} at {objects:?} on {elements:?}")]
    LeftUnit { f: Mor, objects: [Ob; 3], elements: [usize; 2] },
    /// `μ(ξ, v) ≠ unit(v) · ξ` for `ξ ∈ P(f)(x, y)`, `v ∈ P(id)(y, z)`.
    #[error("right unit law fails for morphism {f} at {objects:?} on {elements:?}")]
    RightUnit { f: Mor, objects: [Ob; 3], elements: [usize; 2] },
    #[error("associativity fails on ({f}, {g}, {h}) at {objects:?} on {elements:?}")]
    Associativity {
        f: Mor,
        g: Mor,
        h: Mor,
        objects: [Ob; 4],
        elements: [usize; 3],
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoherenceReport {
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub failure: Option<CoherenceFailure>,
}

impl CoherenceReport {
    pub fn passes(&self) -> bool {
        self.failure.is_none()
    }
}

/// `P: Cʰ → Corr` given by fiber categories, arrow correspondences, unit
/// comparisons `P(id_c) → Map_{P(c)}` and comparators `P(f) ⊙ P(g) → P(gf)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaxFunctorToCorr {
    base: Arc<FinCategory>,
    fibers: Vec<Arc<FinCategory>>,
    arrows: Vec<Correspondence>,
    homs: Vec<Correspondence>,
    units: Vec<CorrMap>,
    /// Keyed by composable `(f, g)` with `tgt f = src g`.
    comparators: BTreeMap<(Mor, Mor), BilinearMap>,
}

impl LaxFunctorToCorr {
    /// Checks shapes, naturality of the unit comparisons and bilinearity of
    /// every comparator. Coherence is checked separately.
    pub fn new(
        base: Arc<FinCategory>,
        fibers: Vec<Arc<FinCategory>>,
        arrows: Vec<Correspondence>,
        units: Vec<Vec<Vec<usize>>>,
        comparators: BTreeMap<(Mor, Mor), BilinearMap>,
    ) -> Result<Self, StraightenError> {
        if fibers.len() != base.num_objects() || units.len() != base.num_objects() {
            return Err(StraightenError::Shape(format!(
                "{} fibers and {} unit comparisons for {} objects",
                fibers.len(),
                units.len(),
                base.num_objects()
            )));
        }
        if arrows.len() != base.num_morphisms() {
            return Err(StraightenError::Shape(format!(
                "{} correspondences for {} morphisms",
                arrows.len(),
                base.num_morphisms()
            )));
        }
        for f in base.morphisms() {
            if !same_category(arrows[f].source(), &fibers[base.src(f)])
                || !same_category(arrows[f].target(), &fibers[base.tgt(f)])
            {
                return Err(StraightenError::Shape(format!(
                    "P({}) does not run between the fibers over its endpoints",
                    base.morphism_name(f)
                )));
            }
        }
        let homs: Vec<Correspondence> = fibers.iter().map(hom_identity).collect();
        let units = units
            .into_iter()
            .enumerate()
            .map(|(c, comps)| CorrMap::new(&arrows[base.identity(c)], &homs[c], comps))
            .collect::<Result<Vec<_>, _>>()?;
        let pairs = base.composable_pairs();
        if comparators.len() != pairs.len() {
            return Err(StraightenError::Shape(format!(
                "{} comparators for {} composable pairs",
                comparators.len(),
                pairs.len()
            )));
        }
        for (f, g) in pairs {
            let Some(mu) = comparators.get(&(f, g)) else {
                return Err(StraightenError::Shape(format!(
                    "missing comparator for ({}, {})",
                    base.morphism_name(f),
                    base.morphism_name(g)
                )));
            };
            mu.check(&arrows[f], &arrows[g], &arrows[base.compose(g, f)])?;
        }
        Ok(LaxFunctorToCorr {
            base,
            fibers,
            arrows,
            homs,
            units,
            comparators,
        })
    }

    /// The lax functor `[n]ʰ → Corr` of a chain cell: `i ≤ j` goes to `M_ij`
    /// (or `Map_{A_i}` when `i = j`), with the structure maps as comparators.
    pub fn from_chain(cell: &ChainCell) -> Result<Self, StraightenError> {
        let n = cell.n();
        let base = Arc::new(FinCategory::ordinal(n));
        let algebras = cell.algebras().to_vec();
        let arrows: Vec<Correspondence> = base
            .morphisms()
            .map(|m| {
                let (i, j) = (base.src(m), base.tgt(m));
                if i == j {
                    hom_identity(&algebras[i])
                } else {
                    cell.module(i, j).clone()
                }
            })
            .collect();
        let units = base
            .objects()
            .map(|i| CorrMap::identity(&arrows[base.identity(i)]).components().to_vec())
            .collect();
        let mut comparators = BTreeMap::new();
        for (f, g) in base.composable_pairs() {
            let (i, j, k) = (base.src(f), base.tgt(f), base.tgt(g));
            let (pf, pg, pgf) = (&arrows[f], &arrows[g], &arrows[base.compose(g, f)]);
            let mu = if i == j {
                let alg = &algebras[i];
                BilinearMap::from_fn(pf, pg, pgf, |x, y, z, u, xi| pg.act_left(alg.hom(x, y)[u], z, xi))?
            } else if j == k {
                let alg = &algebras[j];
                BilinearMap::from_fn(pf, pg, pgf, |x, y, z, xi, v| pf.act_right(x, alg.hom(y, z)[v], xi))?
            } else {
                cell.structure_map(i, j, k).clone()
            };
            comparators.insert((f, g), mu);
        }
        Self::new(base, algebras, arrows, units, comparators)
    }

    /// `P ∘ u` for `u: C' → C`.
    pub fn reindex(&self, u: &Functor) -> Result<Self, StraightenError> {
        if !same_category(u.target(), &self.base) {
            return Err(StraightenError::NotOverBase);
        }
        let base = u.source().clone();
        let fibers = base.objects().map(|c| self.fibers[u.on_object(c)].clone()).collect();
        let arrows = base.morphisms().map(|f| self.arrows[u.on_morphism(f)].clone()).collect();
        let units = base
            .objects()
            .map(|c| self.units[u.on_object(c)].components().to_vec())
            .collect();
        let comparators = base
            .composable_pairs()
            .into_iter()
            .map(|(f, g)| ((f, g), self.comparators[&(u.on_morphism(f), u.on_morphism(g))].clone()))
            .collect();
        Self::new(base, fibers, arrows, units, comparators)
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        &self.base
    }

    pub fn fiber(&self, c: Ob) -> &Arc<FinCategory> {
        &self.fibers[c]
    }

    pub fn fibers(&self) -> &[Arc<FinCategory>] {
        &self.fibers
    }

    pub fn arrow(&self, f: Mor) -> &Correspondence {
        &self.arrows[f]
    }

    pub fn arrows(&self) -> &[Correspondence] {
        &self.arrows
    }

    pub fn unit(&self, c: Ob) -> &CorrMap {
        &self.units[c]
    }

    pub fn comparator(&self, f: Mor, g: Mor) -> &BilinearMap {
        &self.comparators[&(f, g)]
    }

    pub fn comparators(&self) -> &BTreeMap<(Mor, Mor), BilinearMap> {
        &self.comparators
    }

    /// `μ_{f,g}(ξ, η)` for `ξ ∈ P(f)(x, y)`, `η ∈ P(g)(y, z)`.
    #[allow(clippy::too_many_arguments)]
    pub fn mu(&self, f: Mor, g: Mor, x: Ob, y: Ob, z: Ob, xi: usize, eta: usize) -> usize {
        self.comparators[&(f, g)].at(&self.arrows[g], x, y, z, xi, eta)
    }

    /// The fiber morphism assigned to `u ∈ P(id_c)(x, y)`.
    pub fn unit_morphism(&self, c: Ob, x: Ob, y: Ob, u: usize) -> Mor {
        self.fibers[c].hom(x, y)[self.units[c].apply(x, y, u)]
    }

    /// Unit invertibility, both unit laws and associativity, checked on
    /// every element.
    pub fn coherence_check(&self) -> CoherenceReport {
        let mut report = CoherenceReport::default();
        report.failure = self.coherence_failure(&mut report);
        report
    }

    fn coherence_failure(&self, report: &mut CoherenceReport) -> Option<CoherenceFailure> {
        let base = &*self.base;
        for c in base.objects() {
            if !self.units[c].is_iso(&self.homs[c]) {
                return Some(CoherenceFailure::UnitNotInvertible { object: c });
            }
        }
        let pairs = base.composable_pairs();
        for &(f, g) in &pairs {
            report.pairs_checked += 1;
            let (c, d, e) = (base.src(f), base.tgt(f), base.tgt(g));
            let (pf, pg) = (&self.arrows[f], &self.arrows[g]);
            for x in self.fibers[c].objects() {
                for y in self.fibers[d].objects() {
                    for z in self.fibers[e].objects() {
                        for xi in 0..pf.size(x, y) {
                            for eta in 0..pg.size(y, z) {
                                let value = self.mu(f, g, x, y, z, xi, eta);
                                if base.is_identity(f) {
                                    let u = self.unit_morphism(c, x, y, xi);
                                    if value != pg.act_left(u, z, eta) {
                                        return Some(CoherenceFailure::LeftUnit {
                                            f: g,
                                            objects: [x, y, z],
                                            elements: [xi, eta],
                                        });
                                    }
                                }
                                if base.is_identity(g) {
                                    let v = self.unit_morphism(d, y, z, eta);
                                    if value != pf.act_right(x, v, xi) {
                                        return Some(CoherenceFailure::RightUnit {
                                            f,
                                            objects: [x, y, z],
                                            elements: [xi, eta],
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        for &(f, g) in &pairs {
            let gf = base.compose(g, f);
            for h in base.out_of(base.tgt(g)) {
                report.triples_checked += 1;
                let hg = base.compose(h, g);
                let (pf, pg, ph) = (&self.arrows[f], &self.arrows[g], &self.arrows[h]);
                let fibers = [base.src(f), base.tgt(f), base.tgt(g), base.tgt(h)].map(|c| &self.fibers[c]);
                for w in fibers[0].objects() {
                    for x in fibers[1].objects() {
                        for y in fibers[2].objects() {
                            for z in fibers[3].objects() {
                                for a in 0..pf.size(w, x) {
                                    for b in 0..pg.size(x, y) {
                                        let ab = self.mu(f, g, w, x, y, a, b);
                                        for c in 0..ph.size(y, z) {
                                            let bc = self.mu(g, h, x, y, z, b, c);
                                            if self.mu(gf, h, w, y, z, ab, c) != self.mu(f, hg, w, x, z, a, bc) {
                                                return Some(CoherenceFailure::Associativity {
                                                    f,
                                                    g,
                                                    h,
                                                    objects: [w, x, y, z],
                                                    elements: [a, b, c],
                                                });
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests;
