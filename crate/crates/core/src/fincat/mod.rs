//! Finite 1-categories given by explicit composition tables.
//!
//! Objects and morphisms carry string names (used by file formats and
//! reports) but all algorithms work on dense indices: objects are
//! `0..num_objects()` and morphisms `0..num_morphisms()`.

mod constructions;
mod functor;
mod iso;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

pub use constructions::{
    all_functors, chains_over, fiber, map_over, opposite, product, pullback_category,
    twisted_arrow, Fiber, Lift, PullbackCategory,
};
pub use functor::{Functor, FunctorError, NamePairs, NaturalTransformation};
pub use iso::{
    category_iso_search, category_iso_search_over, for_each_isomorphism, for_each_isomorphism_over,
};

pub type Ob = usize;
pub type Mor = usize;

pub(crate) const NONE: usize = usize::MAX;

/// A single broken law or reference, with the ids that witness it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LawViolation {
    #[error("duplicate id `{id}`")]
    DuplicateId { id: String },
    #[error("unknown id `{id}` in {context}")]
    UnknownId { id: String, context: String },
    #[error("composable pair ({g} after {f}) has no composite")]
    DanglingId { g: String, f: String },
    #[error("object `{object}` has no identity")]
    MissingIdentity { object: String },
    #[error("identity `{morphism}` of `{object}` is not an endomorphism of it")]
    IdentityNotEndo { object: String, morphism: String },
    #[error("composition entry ({g} after {f}) for a non-composable pair")]
    NotComposable { g: String, f: String },
    #[error("composite {g} after {f} = {composite} has the wrong source or target")]
    CompositeTyping {
        g: String,
        f: String,
        composite: String,
    },
    #[error("conflicting composites for ({g} after {f}): {first} and {second}")]
    ConflictingComposite {
        g: String,
        f: String,
        first: String,
        second: String,
    },
    #[error("unit law fails: {identity} and {morphism} compose to {composite}")]
    UnitLawViolation {
        identity: String,
        morphism: String,
        composite: String,
    },
    #[error("associativity fails for {h} after {g} after {f}")]
    AssociativityViolation { f: String, g: String, h: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct InvalidCategory {
    pub violations: Vec<LawViolation>,
}

impl fmt::Display for InvalidCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid category ({} violations)", self.violations.len())?;
        for v in self.violations.iter().take(5) {
            write!(f, "; {v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FincatError {
    #[error("unknown object index {0}")]
    UnknownObject(Ob),
    #[error("unknown morphism index {0}")]
    UnknownMorphism(Mor),
    #[error("objects do not lie over the source and target of the given morphism")]
    FiberMismatch,
    #[error("spine is not composable at position {0}")]
    NonComposableSpine(usize),
    #[error("functors do not share a codomain")]
    CodomainMismatch,
}

/// Unvalidated, name-based category data as read from a file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawCategory {
    pub objects: Vec<String>,
    /// `(id, source, target)`
    pub morphisms: Vec<(String, String, String)>,
    /// `(object, identity morphism)`
    pub identities: Vec<(String, String)>,
    /// `(f, g, g ∘ f)`
    pub compositions: Vec<(String, String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<String>,
    src: Vec<Ob>,
    tgt: Vec<Ob>,
    identity: Vec<Mor>,
    /// `comp[g * m + f] = g ∘ f`, or `NONE` when not composable.
    comp: Vec<Mor>,
    homs: Vec<Vec<Mor>>,
    hom_position: Vec<usize>,
}

impl FinCategory {
    /// Builds a category from index-based tables and checks every law.
    ///
    /// `compose(g, f)` is queried once for every pair with `tgt f = src g`.
    pub fn build(
        objects: Vec<String>,
        morphisms: Vec<(String, Ob, Ob)>,
        identity: Vec<Mor>,
        mut compose: impl FnMut(Mor, Mor) -> Option<Mor>,
    ) -> Result<Self, InvalidCategory> {
        let mut violations = Vec::new();
        let n = objects.len();
        let m = morphisms.len();
        let mut seen = HashMap::new();
        for o in &objects {
            if seen.insert(o.as_str(), ()).is_some() {
                violations.push(LawViolation::DuplicateId { id: o.clone() });
            }
        }
        let mut seen = HashMap::new();
        for (name, s, t) in &morphisms {
            if seen.insert(name.as_str(), ()).is_some() {
                violations.push(LawViolation::DuplicateId { id: name.clone() });
            }
            if *s >= n || *t >= n {
                violations.push(LawViolation::UnknownId {
                    id: name.clone(),
                    context: "morphism endpoints".into(),
                });
            }
        }
        if identity.len() != n {
            for o in objects.iter().skip(identity.len()) {
                violations.push(LawViolation::MissingIdentity { object: o.clone() });
            }
        }
        if !violations.is_empty() {
            return Err(InvalidCategory { violations });
        }
        let names: Vec<String> = morphisms.iter().map(|(nm, _, _)| nm.clone()).collect();
        let src: Vec<Ob> = morphisms.iter().map(|(_, s, _)| *s).collect();
        let tgt: Vec<Ob> = morphisms.iter().map(|(_, _, t)| *t).collect();
        for (o, &i) in identity.iter().enumerate() {
            if i >= m || src[i] != o || tgt[i] != o {
                violations.push(LawViolation::IdentityNotEndo {
                    object: objects[o].clone(),
                    morphism: names.get(i).cloned().unwrap_or_else(|| format!("#{i}")),
                });
            }
        }
        if !violations.is_empty() {
            return Err(InvalidCategory { violations });
        }
        let mut comp = vec![NONE; m * m];
        for f in 0..m {
            for g in 0..m {
                if tgt[f] != src[g] {
                    continue;
                }
                match compose(g, f) {
                    None => violations.push(LawViolation::DanglingId {
                        g: names[g].clone(),
                        f: names[f].clone(),
                    }),
                    Some(h) if h >= m || src[h] != src[f] || tgt[h] != tgt[g] => {
                        violations.push(LawViolation::CompositeTyping {
                            g: names[g].clone(),
                            f: names[f].clone(),
                            composite: names.get(h).cloned().unwrap_or_else(|| format!("#{h}")),
                        })
                    }
                    Some(h) => comp[g * m + f] = h,
                }
            }
        }
        if !violations.is_empty() {
            return Err(InvalidCategory { violations });
        }
        let mut homs = vec![Vec::new(); n * n];
        let mut hom_position = vec![0; m];
        for f in 0..m {
            let hom = &mut homs[src[f] * n + tgt[f]];
            hom_position[f] = hom.len();
            hom.push(f);
        }
        let cat = FinCategory {
            objects,
            morphisms: names,
            src,
            tgt,
            identity,
            comp,
            homs,
            hom_position,
        };
        let laws = cat.law_violations();
        if laws.is_empty() {
            Ok(cat)
        } else {
            Err(InvalidCategory { violations: laws })
        }
    }

    fn law_violations(&self) -> Vec<LawViolation> {
        let mut out = Vec::new();
        let m = self.num_morphisms();
        for f in 0..m {
            let left = self.comp[self.identity[self.tgt[f]] * m + f];
            if left != f {
                out.push(LawViolation::UnitLawViolation {
                    identity: self.morphisms[self.identity[self.tgt[f]]].clone(),
                    morphism: self.morphisms[f].clone(),
                    composite: self.morphisms[left].clone(),
                });
            }
            let right = self.comp[f * m + self.identity[self.src[f]]];
            if right != f {
                out.push(LawViolation::UnitLawViolation {
                    identity: self.morphisms[self.identity[self.src[f]]].clone(),
                    morphism: self.morphisms[f].clone(),
                    composite: self.morphisms[right].clone(),
                });
            }
        }
        for f in 0..m {
            for g in self.out_of(self.tgt[f]) {
                let gf = self.comp[g * m + f];
                for h in self.out_of(self.tgt[g]) {
                    let hg = self.comp[h * m + g];
                    if self.comp[h * m + gf] != self.comp[hg * m + f] {
                        out.push(LawViolation::AssociativityViolation {
                            f: self.morphisms[f].clone(),
                            g: self.morphisms[g].clone(),
                            h: self.morphisms[h].clone(),
                        });
                    }
                }
            }
        }
        out
    }

    /// Validates name-based data. Composites with an identity leg may be
    /// omitted; they are filled in by the unit laws.
    pub fn validate(raw: &RawCategory) -> Result<Self, InvalidCategory> {
        let mut violations = Vec::new();
        let obj_index: HashMap<&str, Ob> = raw
            .objects
            .iter()
            .enumerate()
            .map(|(i, o)| (o.as_str(), i))
            .collect();
        let mut morphisms = Vec::new();
        for (id, s, t) in &raw.morphisms {
            let lookup = |name: &String| {
                obj_index.get(name.as_str()).copied().ok_or_else(|| LawViolation::UnknownId {
                    id: name.clone(),
                    context: format!("endpoints of `{id}`"),
                })
            };
            match (lookup(s), lookup(t)) {
                (Ok(s), Ok(t)) => morphisms.push((id.clone(), s, t)),
                (a, b) => {
                    violations.extend(a.err());
                    violations.extend(b.err());
                }
            }
        }
        let mor_index: HashMap<&str, Mor> = morphisms
            .iter()
            .enumerate()
            .map(|(i, (nm, _, _))| (nm.as_str(), i))
            .collect();
        let mut identity = vec![NONE; raw.objects.len()];
        for (o, i) in &raw.identities {
            match (obj_index.get(o.as_str()), mor_index.get(i.as_str())) {
                (Some(&o), Some(&i)) => identity[o] = i,
                (None, _) => violations.push(LawViolation::UnknownId {
                    id: o.clone(),
                    context: "identity assignment".into(),
                }),
                (_, None) => violations.push(LawViolation::UnknownId {
                    id: i.clone(),
                    context: "identity assignment".into(),
                }),
            }
        }
        for (o, &i) in identity.iter().enumerate() {
            if i == NONE {
                violations.push(LawViolation::MissingIdentity {
                    object: raw.objects[o].clone(),
                });
            }
        }
        let m = morphisms.len();
        let mut table: HashMap<(Mor, Mor), Mor> = HashMap::new();
        for (f, g, h) in &raw.compositions {
            let ids: Vec<Option<Mor>> = [f, g, h]
                .iter()
                .map(|x| mor_index.get(x.as_str()).copied())
                .collect();
            for (name, id) in [f, g, h].iter().zip(&ids) {
                if id.is_none() {
                    violations.push(LawViolation::UnknownId {
                        id: (*name).clone(),
                        context: "composition table".into(),
                    });
                }
            }
            let (Some(fi), Some(gi), Some(hi)) = (ids[0], ids[1], ids[2]) else {
                continue;
            };
            if morphisms[fi].2 != morphisms[gi].1 {
                violations.push(LawViolation::NotComposable {
                    g: g.clone(),
                    f: f.clone(),
                });
                continue;
            }
            if let Some(&prev) = table.get(&(gi, fi)) {
                if prev != hi {
                    violations.push(LawViolation::ConflictingComposite {
                        g: g.clone(),
                        f: f.clone(),
                        first: morphisms[prev].0.clone(),
                        second: h.clone(),
                    });
                }
            }
            table.insert((gi, fi), hi);
        }
        if !violations.is_empty() {
            return Err(InvalidCategory { violations });
        }
        let is_identity: Vec<bool> = (0..m).map(|f| identity.contains(&f)).collect();
        FinCategory::build(raw.objects.clone(), morphisms, identity, |g, f| {
            table.get(&(g, f)).copied().or_else(|| {
                if is_identity[g] {
                    Some(f)
                } else if is_identity[f] {
                    Some(g)
                } else {
                    None
                }
            })
        })
    }

    /// Name-based view, with identity-leg composites omitted.
    pub fn to_raw(&self) -> RawCategory {
        let mut raw = RawCategory {
            objects: self.objects.clone(),
            ..Default::default()
        };
        for f in 0..self.num_morphisms() {
            raw.morphisms.push((
                self.morphisms[f].clone(),
                self.objects[self.src[f]].clone(),
                self.objects[self.tgt[f]].clone(),
            ));
        }
        for (o, &i) in self.identity.iter().enumerate() {
            raw.identities
                .push((self.objects[o].clone(), self.morphisms[i].clone()));
        }
        for f in 0..self.num_morphisms() {
            if self.is_identity(f) {
                continue;
            }
            for g in self.out_of(self.tgt[f]) {
                if self.is_identity(g) {
                    continue;
                }
                raw.compositions.push((
                    self.morphisms[f].clone(),
                    self.morphisms[g].clone(),
                    self.morphisms[self.compose(g, f)].clone(),
                ));
            }
        }
        raw
    }

    pub fn terminal() -> Self {
        Self::discrete(1)
    }

    pub fn empty() -> Self {
        Self::discrete(0)
    }

    pub fn discrete(k: usize) -> Self {
        let objects = (0..k).map(|i| i.to_string()).collect();
        let morphisms = (0..k).map(|i| (format!("id{i}"), i, i)).collect();
        FinCategory::build(objects, morphisms, (0..k).collect(), |g, f| {
            (g == f).then_some(f)
        })
        .expect("discrete category")
    }

    /// The poset `[n] = {0 < 1 < ... < n}`.
    pub fn ordinal(n: usize) -> Self {
        let objects: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
        let mut morphisms = Vec::new();
        let mut index = HashMap::new();
        for i in 0..=n {
            for j in i..=n {
                index.insert((i, j), morphisms.len());
                let name = if i == j {
                    format!("id{i}")
                } else {
                    format!("{i}>{j}")
                };
                morphisms.push((name, i, j));
            }
        }
        let identity = (0..=n).map(|i| index[&(i, i)]).collect();
        let ends: Vec<(Ob, Ob)> = morphisms.iter().map(|(_, s, t)| (*s, *t)).collect();
        FinCategory::build(objects, morphisms, identity, |g, f| {
            Some(index[&(ends[f].0, ends[g].1)])
        })
        .expect("ordinal category")
    }

    /// One-object category of a monoid whose elements are `0..k` with unit
    /// `unit` and `g ∘ f = mul(g, f)`.
    pub fn monoid(
        names: Vec<String>,
        unit: usize,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, InvalidCategory> {
        let morphisms = names.into_iter().map(|n| (n, 0, 0)).collect();
        FinCategory::build(vec!["*".into()], morphisms, vec![unit], |g, f| Some(mul(g, f)))
    }

    /// Cyclic group of order `k` as a one-object category.
    pub fn cyclic_group(k: usize) -> Self {
        let names = (0..k).map(|i| format!("r{i}")).collect();
        FinCategory::monoid(names, 0, |g, f| (g + f) % k).expect("cyclic group")
    }

    /// Two objects and two parallel non-identity arrows `a, b: 0 -> 1`.
    pub fn parallel_pair() -> Self {
        let morphisms = vec![
            ("id0".into(), 0, 0),
            ("id1".into(), 1, 1),
            ("a".into(), 0, 1),
            ("b".into(), 0, 1),
        ];
        FinCategory::build(
            vec!["0".into(), "1".into()],
            morphisms,
            vec![0, 1],
            |g, f| Some(if g <= 1 { f } else { g }),
        )
        .expect("parallel pair")
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> std::ops::Range<Ob> {
        0..self.objects.len()
    }

    pub fn morphisms(&self) -> std::ops::Range<Mor> {
        0..self.morphisms.len()
    }

    pub fn object_name(&self, x: Ob) -> &str {
        &self.objects[x]
    }

    pub fn morphism_name(&self, f: Mor) -> &str {
        &self.morphisms[f]
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn morphism_names(&self) -> &[String] {
        &self.morphisms
    }

    pub fn object_index(&self, name: &str) -> Option<Ob> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphism_index(&self, name: &str) -> Option<Mor> {
        self.morphisms.iter().position(|o| o == name)
    }

    pub fn src(&self, f: Mor) -> Ob {
        self.src[f]
    }

    pub fn tgt(&self, f: Mor) -> Ob {
        self.tgt[f]
    }

    pub fn identity(&self, x: Ob) -> Mor {
        self.identity[x]
    }

    pub fn is_identity(&self, f: Mor) -> bool {
        self.identity[self.src[f]] == f
    }

    /// `g ∘ f`; panics if `tgt f != src g`.
    pub fn compose(&self, g: Mor, f: Mor) -> Mor {
        let h = self.comp[g * self.num_morphisms() + f];
        assert!(h != NONE, "compose: {} after {} not composable", self.morphisms[g], self.morphisms[f]);
        h
    }

    pub fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        let h = self.comp[g * self.num_morphisms() + f];
        (h != NONE).then_some(h)
    }

    pub fn hom(&self, a: Ob, b: Ob) -> &[Mor] {
        &self.homs[a * self.num_objects() + b]
    }

    /// Index of `f` inside `hom(src f, tgt f)`.
    pub fn hom_position(&self, f: Mor) -> usize {
        self.hom_position[f]
    }

    /// Morphisms with source `a`.
    pub fn out_of(&self, a: Ob) -> impl Iterator<Item = Mor> + '_ {
        (0..self.num_objects()).flat_map(move |b| self.hom(a, b).iter().copied())
    }

    /// Morphisms with target `b`.
    pub fn into_object(&self, b: Ob) -> impl Iterator<Item = Mor> + '_ {
        (0..self.num_objects()).flat_map(move |a| self.hom(a, b).iter().copied())
    }

    /// Every composable pair `(f, g)` with `tgt f = src g`.
    pub fn composable_pairs(&self) -> Vec<(Mor, Mor)> {
        let mut out = Vec::new();
        for f in self.morphisms() {
            for g in self.out_of(self.tgt[f]) {
                out.push((f, g));
            }
        }
        out
    }

    /// Same category with renamed objects and morphisms.
    pub fn renamed(&self, objects: Vec<String>, morphisms: Vec<String>) -> Result<Self, InvalidCategory> {
        let mors = morphisms
            .into_iter()
            .enumerate()
            .map(|(f, n)| (n, self.src[f], self.tgt[f]))
            .collect();
        FinCategory::build(objects, mors, self.identity.clone(), |g, f| self.try_compose(g, f))
    }

    /// Same category with objects and morphisms listed in a permuted order:
    /// new object `i` is old object `objects[i]`, likewise for morphisms.
    pub fn permuted(&self, objects: &[Ob], morphisms: &[Mor]) -> Self {
        let mut obj_new = vec![0; objects.len()];
        for (i, &o) in objects.iter().enumerate() {
            obj_new[o] = i;
        }
        let mut mor_new = vec![0; morphisms.len()];
        for (i, &f) in morphisms.iter().enumerate() {
            mor_new[f] = i;
        }
        let obj_names = objects.iter().map(|&o| self.objects[o].clone()).collect();
        let mors = morphisms
            .iter()
            .map(|&f| (self.morphisms[f].clone(), obj_new[self.src[f]], obj_new[self.tgt[f]]))
            .collect();
        let identity = objects.iter().map(|&o| mor_new[self.identity[o]]).collect();
        FinCategory::build(obj_names, mors, identity, |g, f| {
            self.try_compose(morphisms[g], morphisms[f]).map(|h| mor_new[h])
        })
        .expect("permutation of a valid category")
    }
}
