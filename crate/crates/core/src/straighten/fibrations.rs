//! Conduché and locally cocartesian fibrations, each decided twice: through
//! the straightening and by a direct scan of the functor.

use std::collections::VecDeque;

use crate::fincat::{Functor, Mor, Ob};
use crate::profunctor::{coend_compose, representability_check};

use super::grothendieck::Analysis;
use super::{straighten, LaxFunctorToCorr};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConducheFailure {
    pub f: Mor,
    pub g: Mor,
    pub x: Ob,
    pub z: Ob,
    pub injective: bool,
    pub surjective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConducheReport {
    pub pairs_checked: usize,
    pub failure: Option<ConducheFailure>,
}

impl ConducheReport {
    pub fn passes(&self) -> bool {
        self.failure.is_none()
    }
}

/// The first comparator `P(f) ⊙ P(g) → P(gf)` that fails to be a bijection,
/// with fiber-local objects.
pub fn comparator_failure(lax: &LaxFunctorToCorr) -> ConducheReport {
    let base = lax.base();
    let mut report = ConducheReport::default();
    for (f, g) in base.composable_pairs() {
        report.pairs_checked += 1;
        let (pf, pg, pgf) = (lax.arrow(f), lax.arrow(g), lax.arrow(base.compose(g, f)));
        let coend = coend_compose(pf, pg).expect("consecutive arrows share a fiber");
        let map = lax
            .comparator(f, g)
            .descend(&coend, pg, pgf)
            .expect("comparators descend to the coend");
        for x in pf.source().objects() {
            for z in pg.target().objects() {
                let mut hits = vec![0usize; pgf.size(x, z)];
                for &y in map.component(x, z) {
                    hits[y] += 1;
                }
                let injective = hits.iter().all(|&h| h <= 1);
                let surjective = hits.iter().all(|&h| h >= 1);
                if !(injective && surjective) {
                    report.failure = Some(ConducheFailure {
                        f,
                        g,
                        x,
                        z,
                        injective,
                        surjective,
                    });
                    return report;
                }
            }
        }
    }
    report
}

/// Decides whether `p` is Conduché by checking that every comparator of its
/// straightening is a bijection. Objects in the report belong to `D`.
pub fn conduche_check(p: &Functor) -> ConducheReport {
    let lax = straighten(p).expect("a functor straightens");
    let mut report = comparator_failure(&lax);
    if let Some(failure) = &mut report.failure {
        let a = Analysis::new(p).expect("a functor has fibers");
        let base = p.target();
        failure.x = a.fibers[base.src(failure.f)].objects[failure.x];
        failure.z = a.fibers[base.tgt(failure.g)].objects[failure.z];
    }
    report
}

/// Factorization-graph criterion: for each `u: x → z` over `g ∘ f`, the
/// factorizations `u = u₂ ∘ u₁` over `(f, g)`, linked by vertical
/// mediating morphisms, must form a nonempty connected graph.
pub fn conduche_oracle(p: &Functor) -> ConducheReport {
    let (base, d) = (p.target(), p.source());
    let mut report = ConducheReport::default();
    for (f, g) in base.composable_pairs() {
        report.pairs_checked += 1;
        let gf = base.compose(g, f);
        let middle = base.tgt(f);
        let id_middle = base.identity(middle);
        let sources: Vec<Ob> = d.objects().filter(|&x| p.on_object(x) == base.src(f)).collect();
        let targets: Vec<Ob> = d.objects().filter(|&z| p.on_object(z) == base.tgt(g)).collect();
        for &x in &sources {
            for &z in &targets {
                let (mut injective, mut surjective) = (true, true);
                for &u in d.hom(x, z).iter().filter(|&&u| p.on_morphism(u) == gf) {
                    let mut vertices = Vec::new();
                    for y in d.objects().filter(|&y| p.on_object(y) == middle) {
                        for &u1 in d.hom(x, y).iter().filter(|&&u1| p.on_morphism(u1) == f) {
                            for &u2 in d.hom(y, z).iter().filter(|&&u2| p.on_morphism(u2) == g) {
                                if d.compose(u2, u1) == u {
                                    vertices.push((y, u1, u2));
                                }
                            }
                        }
                    }
                    if vertices.is_empty() {
                        surjective = false;
                        continue;
                    }
                    let linked = |a: (Ob, Mor, Mor), b: (Ob, Mor, Mor)| {
                        d.hom(a.0, b.0)
                            .iter()
                            .any(|&m| p.on_morphism(m) == id_middle && d.compose(m, a.1) == b.1 && d.compose(b.2, m) == a.2)
                    };
                    let mut seen = vec![false; vertices.len()];
                    let mut queue = VecDeque::from([0]);
                    seen[0] = true;
                    while let Some(i) = queue.pop_front() {
                        for j in 0..vertices.len() {
                            if !seen[j] && (linked(vertices[i], vertices[j]) || linked(vertices[j], vertices[i])) {
                                seen[j] = true;
                                queue.push_back(j);
                            }
                        }
                    }
                    if seen.contains(&false) {
                        injective = false;
                    }
                }
                if !(injective && surjective) {
                    report.failure = Some(ConducheFailure {
                        f,
                        g,
                        x,
                        z,
                        injective,
                        surjective,
                    });
                    return report;
                }
            }
        }
    }
    report
}

/// A locally cocartesian lift of `f` starting at `source`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocartesianLift {
    pub f: Mor,
    pub source: Ob,
    pub lift: Mor,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LocCocartReport {
    pub arrows_checked: usize,
    pub lifts: Vec<CocartesianLift>,
    /// First `(f, x)` for which `Map_{/f}(x, -)` is not representable.
    pub failure: Option<(Mor, Ob)>,
    /// Whether the direct lift search reached the same verdict and lifts.
    pub oracle_agrees: bool,
}

impl LocCocartReport {
    pub fn passes(&self) -> bool {
        self.failure.is_none()
    }
}

/// Decides local cocartesianness by representability of every `P(f)`, and
/// compares with [`locally_cocartesian_oracle`].
pub fn locally_cocartesian_check(p: &Functor) -> LocCocartReport {
    let lax = straighten(p).expect("a functor straightens");
    let a = Analysis::new(p).expect("a functor has fibers");
    let base = p.target();
    let mut report = LocCocartReport::default();
    for f in base.morphisms() {
        report.arrows_checked += 1;
        let src = &a.fibers[base.src(f)];
        match representability_check(lax.arrow(f)) {
            Ok(rep) => {
                for (x, &source) in src.objects.iter().enumerate() {
                    let y = rep.functor.on_object(x);
                    report.lifts.push(CocartesianLift {
                        f,
                        source,
                        lift: a.over(base, f, x, y)[rep.universal[x]],
                    });
                }
            }
            Err(e) => {
                report.failure = Some((f, src.objects[e.object]));
                break;
            }
        }
    }
    report.oracle_agrees = match (&report.failure, locally_cocartesian_oracle(p)) {
        (None, Ok(lifts)) => lifts == report.lifts,
        (Some(first), Err(other)) => *first == other,
        _ => false,
    };
    report
}

/// Searches, for each `f` and `x` over its source, the first `u: x → y` over
/// `f` through which every `u': x → y'` over `f` factors by a unique
/// vertical morphism `y → y'`.
pub fn locally_cocartesian_oracle(p: &Functor) -> Result<Vec<CocartesianLift>, (Mor, Ob)> {
    let (base, d) = (p.target(), p.source());
    let mut lifts = Vec::new();
    for f in base.morphisms() {
        let id_t = base.identity(base.tgt(f));
        let targets: Vec<Ob> = d.objects().filter(|&y| p.on_object(y) == base.tgt(f)).collect();
        for x in d.objects().filter(|&x| p.on_object(x) == base.src(f)) {
            let over = |y: Ob| d.hom(x, y).iter().copied().filter(move |&u| p.on_morphism(u) == f);
            let universal = |y: Ob, u: Mor| {
                targets.iter().all(|&y2| {
                    over(y2).all(|u2| {
                        d.hom(y, y2)
                            .iter()
                            .filter(|&&v| p.on_morphism(v) == id_t && d.compose(v, u) == u2)
                            .count()
                            == 1
                    })
                })
            };
            let found = targets
                .iter()
                .find_map(|&y| over(y).find(|&u| universal(y, u)));
            match found {
                Some(lift) => lifts.push(CocartesianLift { f, source: x, lift }),
                None => return Err((f, x)),
            }
        }
    }
    Ok(lifts)
}
