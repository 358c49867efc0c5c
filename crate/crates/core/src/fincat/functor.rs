use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use super::{FinCategory, Mor, Ob};

/// `(source name, target name)` pairs.
pub type NamePairs = Vec<(String, String)>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctorError {
    #[error("object map has {got} entries, source has {expected} objects")]
    ObjectArity { expected: usize, got: usize },
    #[error("morphism map has {got} entries, source has {expected} morphisms")]
    MorphismArity { expected: usize, got: usize },
    #[error("image of `{0}` is out of range")]
    OutOfRange(String),
    #[error("unknown name `{0}` in functor data")]
    UnknownName(String),
    #[error("`{name}` has no image")]
    Unmapped { name: String },
    #[error("image of `{morphism}` has the wrong source or target")]
    Endpoints { morphism: String },
    #[error("identity of `{object}` is not sent to an identity")]
    Identity { object: String },
    #[error("composite {g} after {f} is not preserved")]
    Composition { f: String, g: String },
    #[error("functors are not parallel")]
    NotParallel,
    #[error("naturality fails at `{morphism}`")]
    Naturality { morphism: String },
    #[error("component at `{object}` has the wrong endpoints")]
    Component { object: String },
}

/// A functor between finite categories, given on objects and morphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Functor {
    source: Arc<FinCategory>,
    target: Arc<FinCategory>,
    objects: Vec<Ob>,
    morphisms: Vec<Mor>,
}

impl Functor {
    pub fn new(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        objects: Vec<Ob>,
        morphisms: Vec<Mor>,
    ) -> Result<Self, FunctorError> {
        if objects.len() != source.num_objects() {
            return Err(FunctorError::ObjectArity {
                expected: source.num_objects(),
                got: objects.len(),
            });
        }
        if morphisms.len() != source.num_morphisms() {
            return Err(FunctorError::MorphismArity {
                expected: source.num_morphisms(),
                got: morphisms.len(),
            });
        }
        for (x, &y) in objects.iter().enumerate() {
            if y >= target.num_objects() {
                return Err(FunctorError::OutOfRange(source.object_name(x).into()));
            }
        }
        for (f, &g) in morphisms.iter().enumerate() {
            if g >= target.num_morphisms() {
                return Err(FunctorError::OutOfRange(source.morphism_name(f).into()));
            }
        }
        let functor = Functor {
            source,
            target,
            objects,
            morphisms,
        };
        functor.check_laws()?;
        Ok(functor)
    }

    /// Builds a functor from name maps.
    pub fn from_names(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        objects: &[(String, String)],
        morphisms: &[(String, String)],
    ) -> Result<Self, FunctorError> {
        let mut obj = vec![usize::MAX; source.num_objects()];
        for (a, b) in objects {
            let x = source
                .object_index(a)
                .ok_or_else(|| FunctorError::UnknownName(a.clone()))?;
            let y = target
                .object_index(b)
                .ok_or_else(|| FunctorError::UnknownName(b.clone()))?;
            obj[x] = y;
        }
        let mut mor = vec![usize::MAX; source.num_morphisms()];
        for (a, b) in morphisms {
            let f = source
                .morphism_index(a)
                .ok_or_else(|| FunctorError::UnknownName(a.clone()))?;
            let g = target
                .morphism_index(b)
                .ok_or_else(|| FunctorError::UnknownName(b.clone()))?;
            mor[f] = g;
        }
        // identities may be left implicit
        for x in source.objects() {
            let i = source.identity(x);
            if mor[i] == usize::MAX && obj[x] != usize::MAX {
                mor[i] = target.identity(obj[x]);
            }
        }
        if let Some(x) = obj.iter().position(|&y| y == usize::MAX) {
            return Err(FunctorError::Unmapped {
                name: source.object_name(x).into(),
            });
        }
        if let Some(f) = mor.iter().position(|&g| g == usize::MAX) {
            return Err(FunctorError::Unmapped {
                name: source.morphism_name(f).into(),
            });
        }
        Functor::new(source, target, obj, mor)
    }

    fn check_laws(&self) -> Result<(), FunctorError> {
        let s = &self.source;
        let t = &self.target;
        for f in s.morphisms() {
            let g = self.morphisms[f];
            if t.src(g) != self.objects[s.src(f)] || t.tgt(g) != self.objects[s.tgt(f)] {
                return Err(FunctorError::Endpoints {
                    morphism: s.morphism_name(f).into(),
                });
            }
        }
        for x in s.objects() {
            if self.morphisms[s.identity(x)] != t.identity(self.objects[x]) {
                return Err(FunctorError::Identity {
                    object: s.object_name(x).into(),
                });
            }
        }
        for (f, g) in s.composable_pairs() {
            let lhs = self.morphisms[s.compose(g, f)];
            let rhs = t.compose(self.morphisms[g], self.morphisms[f]);
            if lhs != rhs {
                return Err(FunctorError::Composition {
                    f: s.morphism_name(f).into(),
                    g: s.morphism_name(g).into(),
                });
            }
        }
        Ok(())
    }

    pub fn identity(category: Arc<FinCategory>) -> Self {
        Functor {
            objects: category.objects().collect(),
            morphisms: category.morphisms().collect(),
            source: category.clone(),
            target: category,
        }
    }

    /// The unique functor to the terminal category.
    pub fn to_terminal(source: Arc<FinCategory>) -> Self {
        Functor {
            objects: vec![0; source.num_objects()],
            morphisms: vec![0; source.num_morphisms()],
            source,
            target: Arc::new(FinCategory::terminal()),
        }
    }

    pub fn source(&self) -> &Arc<FinCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCategory> {
        &self.target
    }

    pub fn on_object(&self, x: Ob) -> Ob {
        self.objects[x]
    }

    pub fn on_morphism(&self, f: Mor) -> Mor {
        self.morphisms[f]
    }

    pub fn object_map(&self) -> &[Ob] {
        &self.objects
    }

    pub fn morphism_map(&self) -> &[Mor] {
        &self.morphisms
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Functor) -> Result<Functor, FunctorError> {
        if *self.target != *other.source {
            return Err(FunctorError::NotParallel);
        }
        Ok(Functor {
            source: self.source.clone(),
            target: other.target.clone(),
            objects: self.objects.iter().map(|&y| other.objects[y]).collect(),
            morphisms: self.morphisms.iter().map(|&g| other.morphisms[g]).collect(),
        })
    }

    pub fn is_bijective(&self) -> bool {
        fn bijective(map: &[usize], n: usize) -> bool {
            if map.len() != n {
                return false;
            }
            let mut seen = vec![false; n];
            map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
        }
        bijective(&self.objects, self.target.num_objects())
            && bijective(&self.morphisms, self.target.num_morphisms())
    }

    /// Object and morphism name pairs, for serialization.
    pub fn name_maps(&self) -> (NamePairs, NamePairs) {
        let objs = self
            .source
            .objects()
            .map(|x| {
                (
                    self.source.object_name(x).to_string(),
                    self.target.object_name(self.objects[x]).to_string(),
                )
            })
            .collect();
        let mors = self
            .source
            .morphisms()
            .map(|f| {
                (
                    self.source.morphism_name(f).to_string(),
                    self.target.morphism_name(self.morphisms[f]).to_string(),
                )
            })
            .collect();
        (objs, mors)
    }

    /// Preimage counts, useful as a cheap invariant.
    pub fn fiber_sizes(&self) -> HashMap<Ob, usize> {
        let mut out = HashMap::new();
        for &y in &self.objects {
            *out.entry(y).or_insert(0) += 1;
        }
        out
    }
}

/// A natural transformation between parallel functors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaturalTransformation {
    source: Functor,
    target: Functor,
    components: Vec<Mor>,
}

impl NaturalTransformation {
    pub fn new(source: Functor, target: Functor, components: Vec<Mor>) -> Result<Self, FunctorError> {
        if source.source != target.source || source.target != target.target {
            return Err(FunctorError::NotParallel);
        }
        let dom = &source.source;
        let cod = &source.target;
        if components.len() != dom.num_objects() {
            return Err(FunctorError::ObjectArity {
                expected: dom.num_objects(),
                got: components.len(),
            });
        }
        for x in dom.objects() {
            let a = components[x];
            if a >= cod.num_morphisms()
                || cod.src(a) != source.on_object(x)
                || cod.tgt(a) != target.on_object(x)
            {
                return Err(FunctorError::Component {
                    object: dom.object_name(x).into(),
                });
            }
        }
        for f in dom.morphisms() {
            let lhs = cod.compose(target.on_morphism(f), components[dom.src(f)]);
            let rhs = cod.compose(components[dom.tgt(f)], source.on_morphism(f));
            if lhs != rhs {
                return Err(FunctorError::Naturality {
                    morphism: dom.morphism_name(f).into(),
                });
            }
        }
        Ok(NaturalTransformation {
            source,
            target,
            components,
        })
    }

    pub fn identity(functor: Functor) -> Self {
        let components = functor
            .source
            .objects()
            .map(|x| functor.target.identity(functor.on_object(x)))
            .collect();
        NaturalTransformation {
            source: functor.clone(),
            target: functor,
            components,
        }
    }

    pub fn component(&self, x: Ob) -> Mor {
        self.components[x]
    }

    pub fn source(&self) -> &Functor {
        &self.source
    }

    pub fn target(&self) -> &Functor {
        &self.target
    }

    /// Natural isomorphism iff every component is invertible.
    pub fn is_isomorphism(&self) -> bool {
        let cod = &self.source.target;
        self.components.iter().all(|&a| {
            cod.hom(cod.tgt(a), cod.src(a)).iter().any(|&b| {
                cod.compose(b, a) == cod.identity(cod.src(a))
                    && cod.compose(a, b) == cod.identity(cod.tgt(a))
            })
        })
    }
}
