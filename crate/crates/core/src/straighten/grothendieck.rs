//! Straightening by fibers and mapping sets over base morphisms, and the
//! collage construction in the other direction.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use crate::fincat::{fiber, map_over, Fiber, FinCategory, Functor, Mor, Ob, NONE};
use crate::profunctor::{same_category, BilinearMap, Correspondence};

use super::{LaxFunctorToCorr, StraightenError};

/// Fibers of `p` and the decomposition of every morphism of `D` by the base
/// morphism it lies over.
pub(super) struct Analysis {
    pub fibers: Vec<Fiber>,
    /// Fiber-local index of each object of `D`.
    pub local_obj: Vec<Ob>,
    /// Fiber-local index of each vertical morphism of `D`, `NONE` otherwise.
    pub local_mor: Vec<Mor>,
    /// `elements[f][x * |D_tgt f| + y]` lists `Map_{/f}(x, y)` in `D`.
    pub elements: Vec<Vec<Vec<Mor>>>,
    /// Index of each morphism of `D` within its mapping set.
    pub position: Vec<usize>,
}

impl Analysis {
    pub fn new(p: &Functor) -> Result<Self, StraightenError> {
        let (base, d) = (p.target(), p.source());
        let fibers = base.objects().map(|c| fiber(p, c)).collect::<Result<Vec<_>, _>>()?;
        let mut local_obj = vec![NONE; d.num_objects()];
        let mut local_mor = vec![NONE; d.num_morphisms()];
        for fib in &fibers {
            for (i, &x) in fib.objects.iter().enumerate() {
                local_obj[x] = i;
            }
            for (i, &u) in fib.morphisms.iter().enumerate() {
                local_mor[u] = i;
            }
        }
        let mut elements = Vec::with_capacity(base.num_morphisms());
        let mut position = vec![NONE; d.num_morphisms()];
        for f in base.morphisms() {
            let (src, tgt) = (&fibers[base.src(f)], &fibers[base.tgt(f)]);
            let mut per_pair = Vec::with_capacity(src.objects.len() * tgt.objects.len());
            for &x in &src.objects {
                for &y in &tgt.objects {
                    let over = map_over(p, f, x, y)?;
                    for (k, &u) in over.iter().enumerate() {
                        position[u] = k;
                    }
                    per_pair.push(over);
                }
            }
            elements.push(per_pair);
        }
        Ok(Analysis {
            fibers,
            local_obj,
            local_mor,
            elements,
            position,
        })
    }

    pub fn over(&self, base: &FinCategory, f: Mor, x: Ob, y: Ob) -> &[Mor] {
        let ny = self.fibers[base.tgt(f)].objects.len();
        &self.elements[f][x * ny + y]
    }
}

/// `P(c) = D_c`, `P(f)(x, y) = Map_{/f}(x, y)` with actions by composition in
/// `D`, unit comparisons identifying `P(id_c)` with the homs of `D_c`, and
/// comparators `(ξ, η) ↦ η ∘ ξ`.
pub fn straighten(p: &Functor) -> Result<LaxFunctorToCorr, StraightenError> {
    let (base, d) = (p.target().clone(), p.source());
    let a = Analysis::new(p)?;
    let fiber_cats: Vec<Arc<FinCategory>> = a.fibers.iter().map(|fib| Arc::new(fib.category.clone())).collect();
    let mut arrows = Vec::with_capacity(base.num_morphisms());
    for f in base.morphisms() {
        let (c, e) = (base.src(f), base.tgt(f));
        let (src, tgt) = (&a.fibers[c], &a.fibers[e]);
        let names = (0..src.objects.len())
            .flat_map(|x| (0..tgt.objects.len()).map(move |y| (x, y)))
            .map(|(x, y)| {
                a.over(&base, f, x, y)
                    .iter()
                    .map(|&u| d.morphism_name(u).to_string())
                    .collect()
            })
            .collect();
        let arrow = Correspondence::from_fn(
            fiber_cats[c].clone(),
            fiber_cats[e].clone(),
            names,
            |w, y, k| {
                let xi = a.over(&base, f, src.category.tgt(w), y)[k];
                a.position[d.compose(xi, src.morphisms[w])]
            },
            |x, v, k| {
                let xi = a.over(&base, f, x, tgt.category.src(v))[k];
                a.position[d.compose(tgt.morphisms[v], xi)]
            },
        )?;
        arrows.push(arrow);
    }
    let units = base
        .objects()
        .map(|c| {
            let cat = &fiber_cats[c];
            cat.objects()
                .flat_map(|x| cat.objects().map(move |y| (x, y)))
                .map(|(x, y)| {
                    a.over(&base, base.identity(c), x, y)
                        .iter()
                        .map(|&u| cat.hom_position(a.local_mor[u]))
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut comparators = BTreeMap::new();
    for (f, g) in base.composable_pairs() {
        let gf = base.compose(g, f);
        let mu = BilinearMap::from_fn(&arrows[f], &arrows[g], &arrows[gf], |x, y, z, xi, eta| {
            let (u1, u2) = (a.over(&base, f, x, y)[xi], a.over(&base, g, y, z)[eta]);
            a.position[d.compose(u2, u1)]
        })?;
        comparators.insert((f, g), mu);
    }
    LaxFunctorToCorr::new(base, fiber_cats, arrows, units, comparators)
}

/// The collage of a lax functor with its projection to the base.
#[derive(Debug, Clone)]
pub struct Collage {
    pub functor: Functor,
    /// `(c, x)` for each object of the total category.
    pub objects: Vec<(Ob, Ob)>,
    /// `(f, x, y, ξ)` with `ξ ∈ P(f)(x, y)` for each morphism.
    pub morphisms: Vec<(Mor, Ob, Ob, usize)>,
}

impl Collage {
    pub fn total(&self) -> &Arc<FinCategory> {
        self.functor.source()
    }
}

/// Objects `(c, x)` with `x ∈ P(c)`; morphisms `(c, x) → (c', y)` are pairs
/// `(f, ξ)` with `f: c → c'` and `ξ ∈ P(f)(x, y)`; composition applies the
/// comparators and identities come from the unit comparisons.
pub fn unstraighten(lax: &LaxFunctorToCorr) -> Result<Collage, StraightenError> {
    let report = lax.coherence_check();
    if let Some(failure) = report.failure {
        return Err(StraightenError::CoherenceRequired(failure));
    }
    let base = lax.base();
    let mut objects = Vec::new();
    let mut object_index = Vec::with_capacity(base.num_objects());
    for c in base.objects() {
        object_index.push(objects.len());
        objects.extend(lax.fiber(c).objects().map(|x| (c, x)));
    }
    let mut morphisms = Vec::new();
    let mut morphism_index: Vec<Vec<usize>> = Vec::with_capacity(base.num_morphisms());
    for f in base.morphisms() {
        let pf = lax.arrow(f);
        let mut offsets = Vec::new();
        for x in pf.source().objects() {
            for y in pf.target().objects() {
                offsets.push(morphisms.len());
                morphisms.extend((0..pf.size(x, y)).map(|xi| (f, x, y, xi)));
            }
        }
        morphism_index.push(offsets);
    }
    let index_of = |f: Mor, x: Ob, y: Ob, xi: usize| {
        let ny = lax.fiber(base.tgt(f)).num_objects();
        morphism_index[f][x * ny + y] + xi
    };
    let object_names: Vec<String> = objects
        .iter()
        .map(|&(c, x)| format!("({},{})", base.object_name(c), lax.fiber(c).object_name(x)))
        .collect();
    let morphism_names = collage_names(lax, &morphisms);
    let mors = morphisms
        .iter()
        .zip(morphism_names)
        .map(|(&(f, x, y, _), name)| (name, object_index[base.src(f)] + x, object_index[base.tgt(f)] + y))
        .collect();
    let identity = objects
        .iter()
        .map(|&(c, x)| {
            let id_c = base.identity(c);
            let target = lax.fiber(c).hom_position(lax.fiber(c).identity(x));
            let xi = (0..lax.arrow(id_c).size(x, x))
                .find(|&u| lax.unit(c).apply(x, x, u) == target)
                .expect("unit comparisons are invertible after the coherence check");
            index_of(id_c, x, x, xi)
        })
        .collect();
    let total = Arc::new(FinCategory::build(object_names, mors, identity, |h, k| {
        let (f, x, y, xi) = morphisms[k];
        let (g, y2, z, eta) = morphisms[h];
        debug_assert_eq!(y, y2);
        Some(index_of(base.compose(g, f), x, z, lax.mu(f, g, x, y, z, xi, eta)))
    })?);
    let functor = Functor::new(
        total,
        base.clone(),
        objects.iter().map(|o| o.0).collect(),
        morphisms.iter().map(|m| m.0).collect(),
    )
    .map_err(|e| StraightenError::Shape(e.to_string()))?;
    Ok(Collage {
        functor,
        objects,
        morphisms,
    })
}

/// `(f,ξ)` names, falling back to names qualified by endpoints when element
/// names repeat across mapping sets.
fn collage_names(lax: &LaxFunctorToCorr, morphisms: &[(Mor, Ob, Ob, usize)]) -> Vec<String> {
    let base = lax.base();
    let short: Vec<String> = morphisms
        .iter()
        .map(|&(f, x, y, xi)| format!("({},{})", base.morphism_name(f), lax.arrow(f).element_name(x, y, xi)))
        .collect();
    if all_distinct(&short) {
        return short;
    }
    let long: Vec<String> = morphisms
        .iter()
        .map(|&(f, x, y, xi)| {
            let pf = lax.arrow(f);
            format!(
                "({}:{}>{},{})",
                base.morphism_name(f),
                pf.source().object_name(x),
                pf.target().object_name(y),
                pf.element_name(x, y, xi)
            )
        })
        .collect();
    if all_distinct(&long) {
        return long;
    }
    long.into_iter().enumerate().map(|(i, s)| format!("{s}#{i}")).collect()
}

fn all_distinct(names: &[String]) -> bool {
    let mut seen = HashSet::new();
    names.iter().all(|n| seen.insert(n.as_str()))
}

/// The comparison `collage(straighten p) → D` over the base, sending `(c, x)`
/// to `x` and `(f, ξ)` to the morphism `ξ`.
pub fn counit(p: &Functor, collage: &Collage) -> Result<Functor, StraightenError> {
    let a = Analysis::new(p)?;
    let base = p.target();
    let mismatch = || StraightenError::Shape("collage does not come from straightening this functor".into());
    let objects = collage
        .objects
        .iter()
        .map(|&(c, x)| a.fibers.get(c).and_then(|fib| fib.objects.get(x)).copied().ok_or_else(mismatch))
        .collect::<Result<Vec<_>, _>>()?;
    let morphisms = collage
        .morphisms
        .iter()
        .map(|&(f, x, y, xi)| {
            if f >= base.num_morphisms()
                || x >= a.fibers[base.src(f)].objects.len()
                || y >= a.fibers[base.tgt(f)].objects.len()
            {
                return Err(mismatch());
            }
            a.over(base, f, x, y).get(xi).copied().ok_or_else(mismatch)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Functor::new(collage.total().clone(), p.source().clone(), objects, morphisms)
        .map_err(|e| StraightenError::Shape(e.to_string()))
}

/// A map of lax functors over a common base: functors `F_c: P(c) → Q(c)` and
/// maps `φ_f: P(f)(x, y) → Q(f)(F x, F y)`, stored per `x * |P(tgt f)| + y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaxTransformation {
    pub fibers: Vec<Functor>,
    pub arrows: Vec<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LaxMapFailure {
    #[error("lax functors live over different bases")]
    BaseMismatch,
    #[error("component at object {object} is not an isomorphism of fibers")]
    FiberNotIso { object: Ob },
    #[error("component at morphism {f} is not a bijection at ({x}, {y})")]
    ArrowNotBijective { f: Mor, x: Ob, y: Ob },
    #[error("component at morphism {f} does not commute with the fiber actions")]
    NotEquivariant { f: Mor },
    #[error("components do not commute with the comparator of ({f}, {g})")]
    Comparator { f: Mor, g: Mor },
    #[error("components do not commute with the unit comparison at {object}")]
    Unit { object: Ob },
}

/// Verifies that `t: P → Q` is an isomorphism of lax functors: invertible
/// components, compatible with actions, comparators and units.
pub fn check_lax_iso(p: &LaxFunctorToCorr, q: &LaxFunctorToCorr, t: &LaxTransformation) -> Result<(), LaxMapFailure> {
    let base = p.base();
    if !same_category(base, q.base()) || t.fibers.len() != base.num_objects() || t.arrows.len() != base.num_morphisms() {
        return Err(LaxMapFailure::BaseMismatch);
    }
    for c in base.objects() {
        let fc = &t.fibers[c];
        if !same_category(fc.source(), p.fiber(c)) || !same_category(fc.target(), q.fiber(c)) || !fc.is_bijective() {
            return Err(LaxMapFailure::FiberNotIso { object: c });
        }
    }
    for f in base.morphisms() {
        let (pf, qf) = (p.arrow(f), q.arrow(f));
        let (fs, ft) = (&t.fibers[base.src(f)], &t.fibers[base.tgt(f)]);
        let ny = pf.target().num_objects();
        let comps = &t.arrows[f];
        if comps.len() != pf.source().num_objects() * ny {
            return Err(LaxMapFailure::ArrowNotBijective { f, x: 0, y: 0 });
        }
        for x in pf.source().objects() {
            for y in pf.target().objects() {
                let comp = &comps[x * ny + y];
                let size = qf.size(fs.on_object(x), ft.on_object(y));
                let mut seen = vec![false; size];
                let bijective = comp.len() == pf.size(x, y)
                    && comp.len() == size
                    && comp.iter().all(|&e| e < size && !std::mem::replace(&mut seen[e], true));
                if !bijective {
                    return Err(LaxMapFailure::ArrowNotBijective { f, x, y });
                }
            }
        }
        let phi = |x: Ob, y: Ob, xi: usize| comps[x * ny + y][xi];
        for u in pf.source().morphisms() {
            for y in pf.target().objects() {
                for xi in 0..pf.size(pf.source().tgt(u), y) {
                    let lhs = phi(pf.source().src(u), y, pf.act_left(u, y, xi));
                    let rhs = qf.act_left(fs.on_morphism(u), ft.on_object(y), phi(pf.source().tgt(u), y, xi));
                    if lhs != rhs {
                        return Err(LaxMapFailure::NotEquivariant { f });
                    }
                }
            }
        }
        for x in pf.source().objects() {
            for v in pf.target().morphisms() {
                for xi in 0..pf.size(x, pf.target().src(v)) {
                    let lhs = phi(x, pf.target().tgt(v), pf.act_right(x, v, xi));
                    let rhs = qf.act_right(fs.on_object(x), ft.on_morphism(v), phi(x, pf.target().src(v), xi));
                    if lhs != rhs {
                        return Err(LaxMapFailure::NotEquivariant { f });
                    }
                }
            }
        }
    }
    let phi = |f: Mor, x: Ob, y: Ob, xi: usize| {
        let ny = p.fiber(base.tgt(f)).num_objects();
        t.arrows[f][x * ny + y][xi]
    };
    for (f, g) in base.composable_pairs() {
        let gf = base.compose(g, f);
        let fibs = [base.src(f), base.tgt(f), base.tgt(g)].map(|c| &t.fibers[c]);
        let (pf, pg) = (p.arrow(f), p.arrow(g));
        for x in pf.source().objects() {
            for y in pf.target().objects() {
                for z in pg.target().objects() {
                    let (fx, fy, fz) = (fibs[0].on_object(x), fibs[1].on_object(y), fibs[2].on_object(z));
                    for a in 0..pf.size(x, y) {
                        for b in 0..pg.size(y, z) {
                            let lhs = phi(gf, x, z, p.mu(f, g, x, y, z, a, b));
                            let rhs = q.mu(f, g, fx, fy, fz, phi(f, x, y, a), phi(g, y, z, b));
                            if lhs != rhs {
                                return Err(LaxMapFailure::Comparator { f, g });
                            }
                        }
                    }
                }
            }
        }
    }
    for c in base.objects() {
        let id = base.identity(c);
        let fc = &t.fibers[c];
        for x in p.fiber(c).objects() {
            for y in p.fiber(c).objects() {
                for u in 0..p.arrow(id).size(x, y) {
                    let lhs = fc.on_morphism(p.unit_morphism(c, x, y, u));
                    let rhs = q.unit_morphism(c, fc.on_object(x), fc.on_object(y), phi(id, x, y, u));
                    if lhs != rhs {
                        return Err(LaxMapFailure::Unit { object: c });
                    }
                }
            }
        }
    }
    Ok(())
}

/// The canonical map `straighten(collage P) → P`, sending the fiber object
/// `(c, x)` to `x` and the morphism `(f, ξ)` to `ξ`.
pub fn restraighten_witness(collage: &Collage, lax: &LaxFunctorToCorr) -> Result<LaxTransformation, StraightenError> {
    let q = &collage.functor;
    let a = Analysis::new(q)?;
    let base = q.target();
    let fibers = base
        .objects()
        .map(|c| {
            let fib = &a.fibers[c];
            let objects = fib.objects.iter().map(|&o| collage.objects[o].1).collect();
            let morphisms = fib
                .morphisms
                .iter()
                .map(|&m| {
                    let (_, x, y, xi) = collage.morphisms[m];
                    lax.unit_morphism(c, x, y, xi)
                })
                .collect();
            Functor::new(Arc::new(fib.category.clone()), lax.fiber(c).clone(), objects, morphisms)
                .map_err(|e| StraightenError::Shape(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let arrows = a
        .elements
        .iter()
        .map(|per_pair| {
            per_pair
                .iter()
                .map(|over| over.iter().map(|&m| collage.morphisms[m].3).collect())
                .collect()
        })
        .collect();
    Ok(LaxTransformation { fibers, arrows })
}

/// For a square `p ∘ g = u ∘ p'`, the induced map
/// `straighten(p') → straighten(p) ∘ u` applying `g` fiberwise and on mapping
/// sets. It is an isomorphism when the square is a pullback.
pub fn straighten_map(
    p_prime: &Functor,
    p: &Functor,
    g: &Functor,
    u: &Functor,
) -> Result<LaxTransformation, StraightenError> {
    if !same_category(g.source(), p_prime.source())
        || !same_category(g.target(), p.source())
        || !same_category(u.source(), p_prime.target())
        || !same_category(u.target(), p.target())
    {
        return Err(StraightenError::NotOverBase);
    }
    let d_prime = p_prime.source();
    let commutes = d_prime.objects().all(|x| p.on_object(g.on_object(x)) == u.on_object(p_prime.on_object(x)))
        && d_prime
            .morphisms()
            .all(|w| p.on_morphism(g.on_morphism(w)) == u.on_morphism(p_prime.on_morphism(w)));
    if !commutes {
        return Err(StraightenError::NotOverBase);
    }
    let (a_prime, a) = (Analysis::new(p_prime)?, Analysis::new(p)?);
    let base = p_prime.target();
    let fibers = base
        .objects()
        .map(|c| {
            let (src, tgt) = (&a_prime.fibers[c], &a.fibers[u.on_object(c)]);
            let objects = src.objects.iter().map(|&x| a.local_obj[g.on_object(x)]).collect();
            let morphisms = src.morphisms.iter().map(|&w| a.local_mor[g.on_morphism(w)]).collect();
            Functor::new(
                Arc::new(src.category.clone()),
                Arc::new(tgt.category.clone()),
                objects,
                morphisms,
            )
            .map_err(|e| StraightenError::Shape(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let arrows = a_prime
        .elements
        .iter()
        .map(|per_pair| {
            per_pair
                .iter()
                .map(|over| over.iter().map(|&w| a.position[g.on_morphism(w)]).collect())
                .collect()
        })
        .collect();
    Ok(LaxTransformation { fibers, arrows })
}
