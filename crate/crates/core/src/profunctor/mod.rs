//! Finite correspondences between finite categories.
//!
//! A correspondence `F: C ⇸ D` is a functor `Cᵒᵖ × D → FinSet`. An element
//! of `F(c, d)` can be pulled back along `u: c' → c` in `C` (the left action,
//! landing in `F(c', d)`) and pushed forward along `v: d → d'` in `D` (the
//! right action, landing in `F(c, d')`).
//!
//! Composition `F ⊙ G` of `F: C ⇸ D` and `G: D ⇸ E` is the coend over `D`; see
//! [`coend_compose`].

mod coend;
mod maps;
mod represent;

use std::sync::Arc;

use thiserror::Error;

use crate::fincat::{FinCategory, Functor, Mor, Ob};

pub use coend::{coend_compose, BilinearMap, Coend};
pub use maps::{corr_iso_search, CorrMap};
pub use represent::{representability_check, NotRepresentable, Representation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfunctorError {
    #[error("expected {expected} element lists, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("{side} action of `{morphism}` at `{object}` sends element {element} out of range")]
    ActionRange {
        side: &'static str,
        morphism: String,
        object: String,
        element: usize,
    },
    #[error("{side} action of the identity at `{object}` is not trivial")]
    UnitAction { side: &'static str, object: String },
    #[error("{side} action is not associative for `{g}` after `{f}`")]
    ActionAssociativity { side: &'static str, f: String, g: String },
    #[error("left action of `{u}` and right action of `{v}` do not commute")]
    ActionsDoNotCommute { u: String, v: String },
    #[error("middle categories differ")]
    MiddleMismatch,
    #[error("correspondences are not parallel")]
    NotParallel,
    #[error("component at ({c}, {d}) has the wrong size or range")]
    ComponentShape { c: String, d: String },
    #[error("map is not equivariant for the {side} action of `{morphism}`")]
    NotEquivariant { side: &'static str, morphism: String },
    #[error("bilinear map is not balanced at `{morphism}`")]
    NotBalanced { morphism: String },
    #[error("quotient is not well defined for the {side} action of `{morphism}`")]
    IllDefinedAction { side: &'static str, morphism: String },
}

/// A correspondence `C ⇸ D`, stored as dense tables indexed by objects and
/// morphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correspondence {
    source: Arc<FinCategory>,
    target: Arc<FinCategory>,
    /// Element names, indexed by `c * |Ob D| + d`.
    names: Vec<Vec<String>>,
    /// `left[u * |Ob D| + d]` maps `F(tgt u, d)` to `F(src u, d)`.
    left: Vec<Vec<usize>>,
    /// `right[c * |Mor D| + v]` maps `F(c, src v)` to `F(c, tgt v)`.
    right: Vec<Vec<usize>>,
}

impl Correspondence {
    /// Builds a correspondence from element names and action functions,
    /// checking all functoriality laws.
    pub fn from_fn(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        names: Vec<Vec<String>>,
        mut left: impl FnMut(Mor, Ob, usize) -> usize,
        mut right: impl FnMut(Ob, Mor, usize) -> usize,
    ) -> Result<Self, ProfunctorError> {
        let nd = target.num_objects();
        let expected = source.num_objects() * nd;
        if names.len() != expected {
            return Err(ProfunctorError::Shape {
                expected,
                got: names.len(),
            });
        }
        let mut left_table = Vec::with_capacity(source.num_morphisms() * nd);
        for u in source.morphisms() {
            for d in target.objects() {
                let size = names[source.tgt(u) * nd + d].len();
                left_table.push((0..size).map(|x| left(u, d, x)).collect());
            }
        }
        let mut right_table = Vec::with_capacity(source.num_objects() * target.num_morphisms());
        for c in source.objects() {
            for v in target.morphisms() {
                let size = names[c * nd + target.src(v)].len();
                right_table.push((0..size).map(|x| right(c, v, x)).collect());
            }
        }
        Self::from_tables(source, target, names, left_table, right_table)
    }

    pub fn from_tables(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        names: Vec<Vec<String>>,
        left: Vec<Vec<usize>>,
        right: Vec<Vec<usize>>,
    ) -> Result<Self, ProfunctorError> {
        let f = Correspondence {
            source,
            target,
            names,
            left,
            right,
        };
        f.check_laws()?;
        Ok(f)
    }

    fn check_laws(&self) -> Result<(), ProfunctorError> {
        let (c_cat, d_cat) = (&*self.source, &*self.target);
        let nd = d_cat.num_objects();
        let expected = c_cat.num_objects() * nd;
        if self.names.len() != expected {
            return Err(ProfunctorError::Shape {
                expected,
                got: self.names.len(),
            });
        }
        let expected = c_cat.num_morphisms() * nd;
        if self.left.len() != expected {
            return Err(ProfunctorError::Shape {
                expected,
                got: self.left.len(),
            });
        }
        let expected = c_cat.num_objects() * d_cat.num_morphisms();
        if self.right.len() != expected {
            return Err(ProfunctorError::Shape {
                expected,
                got: self.right.len(),
            });
        }
        for u in c_cat.morphisms() {
            for d in d_cat.objects() {
                let table = &self.left[u * nd + d];
                let (from, to) = (self.size(c_cat.tgt(u), d), self.size(c_cat.src(u), d));
                if table.len() != from || table.iter().any(|&y| y >= to) {
                    return Err(ProfunctorError::ActionRange {
                        side: "left",
                        morphism: c_cat.morphism_name(u).into(),
                        object: d_cat.object_name(d).into(),
                        element: table.iter().copied().find(|&y| y >= to).unwrap_or(table.len()),
                    });
                }
            }
        }
        for c in c_cat.objects() {
            for v in d_cat.morphisms() {
                let table = &self.right[c * d_cat.num_morphisms() + v];
                let (from, to) = (self.size(c, d_cat.src(v)), self.size(c, d_cat.tgt(v)));
                if table.len() != from || table.iter().any(|&y| y >= to) {
                    return Err(ProfunctorError::ActionRange {
                        side: "right",
                        morphism: d_cat.morphism_name(v).into(),
                        object: c_cat.object_name(c).into(),
                        element: table.iter().copied().find(|&y| y >= to).unwrap_or(table.len()),
                    });
                }
            }
        }
        for c in c_cat.objects() {
            for d in d_cat.objects() {
                let n = self.size(c, d);
                if (0..n).any(|x| self.act_left(c_cat.identity(c), d, x) != x) {
                    return Err(ProfunctorError::UnitAction {
                        side: "left",
                        object: c_cat.object_name(c).into(),
                    });
                }
                if (0..n).any(|x| self.act_right(c, d_cat.identity(d), x) != x) {
                    return Err(ProfunctorError::UnitAction {
                        side: "right",
                        object: d_cat.object_name(d).into(),
                    });
                }
            }
        }
        // (x · u₂) · u₁ = x · (u₂ ∘ u₁)
        for (u1, u2) in c_cat.composable_pairs() {
            let u = c_cat.compose(u2, u1);
            for d in d_cat.objects() {
                for x in 0..self.size(c_cat.tgt(u2), d) {
                    if self.act_left(u1, d, self.act_left(u2, d, x)) != self.act_left(u, d, x) {
                        return Err(ProfunctorError::ActionAssociativity {
                            side: "left",
                            f: c_cat.morphism_name(u1).into(),
                            g: c_cat.morphism_name(u2).into(),
                        });
                    }
                }
            }
        }
        for (v1, v2) in d_cat.composable_pairs() {
            let v = d_cat.compose(v2, v1);
            for c in c_cat.objects() {
                for x in 0..self.size(c, d_cat.src(v1)) {
                    if self.act_right(c, v2, self.act_right(c, v1, x)) != self.act_right(c, v, x) {
                        return Err(ProfunctorError::ActionAssociativity {
                            side: "right",
                            f: d_cat.morphism_name(v1).into(),
                            g: d_cat.morphism_name(v2).into(),
                        });
                    }
                }
            }
        }
        for u in c_cat.morphisms() {
            for v in d_cat.morphisms() {
                for x in 0..self.size(c_cat.tgt(u), d_cat.src(v)) {
                    let a = self.act_right(c_cat.src(u), v, self.act_left(u, d_cat.src(v), x));
                    let b = self.act_left(u, d_cat.tgt(v), self.act_right(c_cat.tgt(u), v, x));
                    if a != b {
                        return Err(ProfunctorError::ActionsDoNotCommute {
                            u: c_cat.morphism_name(u).into(),
                            v: d_cat.morphism_name(v).into(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<FinCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCategory> {
        &self.target
    }

    pub fn size(&self, c: Ob, d: Ob) -> usize {
        self.names[c * self.target.num_objects() + d].len()
    }

    pub fn total_size(&self) -> usize {
        self.names.iter().map(Vec::len).sum()
    }

    pub fn names(&self, c: Ob, d: Ob) -> &[String] {
        &self.names[c * self.target.num_objects() + d]
    }

    pub fn element_name(&self, c: Ob, d: Ob, x: usize) -> &str {
        &self.names(c, d)[x]
    }

    pub fn element_index(&self, c: Ob, d: Ob, name: &str) -> Option<usize> {
        self.names(c, d).iter().position(|n| n == name)
    }

    /// `x · u` for `x ∈ F(tgt u, d)`.
    pub fn act_left(&self, u: Mor, d: Ob, x: usize) -> usize {
        self.left[u * self.target.num_objects() + d][x]
    }

    /// `v · x` for `x ∈ F(c, src v)`.
    pub fn act_right(&self, c: Ob, v: Mor, x: usize) -> usize {
        self.right[c * self.target.num_morphisms() + v][x]
    }

    pub fn left_table(&self, u: Mor, d: Ob) -> &[usize] {
        &self.left[u * self.target.num_objects() + d]
    }

    pub fn right_table(&self, c: Ob, v: Mor) -> &[usize] {
        &self.right[c * self.target.num_morphisms() + v]
    }

    pub fn is_parallel(&self, other: &Correspondence) -> bool {
        same_category(&self.source, &other.source) && same_category(&self.target, &other.target)
    }

    /// Same tables with different element names.
    pub fn renamed(&self, names: Vec<Vec<String>>) -> Result<Self, ProfunctorError> {
        let expected: Vec<usize> = self.names.iter().map(Vec::len).collect();
        let got: Vec<usize> = names.iter().map(Vec::len).collect();
        if expected != got {
            return Err(ProfunctorError::Shape {
                expected: expected.len(),
                got: got.len(),
            });
        }
        Ok(Correspondence {
            names,
            ..self.clone()
        })
    }

    /// Pulls back along functors `s: C' → C` and `t: D' → D`:
    /// `(c', d') ↦ F(s c', t d')`.
    pub fn restrict(&self, s: &Functor, t: &Functor) -> Result<Self, ProfunctorError> {
        if !same_category(s.target(), &self.source) || !same_category(t.target(), &self.target) {
            return Err(ProfunctorError::NotParallel);
        }
        let names = s
            .source()
            .objects()
            .flat_map(|c| t.source().objects().map(move |d| (c, d)))
            .map(|(c, d)| self.names(s.on_object(c), t.on_object(d)).to_vec())
            .collect();
        Correspondence::from_fn(
            s.source().clone(),
            t.source().clone(),
            names,
            |u, d, x| self.act_left(s.on_morphism(u), t.on_object(d), x),
            |c, v, x| self.act_right(s.on_object(c), t.on_morphism(v), x),
        )
    }

    /// `F ⊔ G`, with the elements of `G` listed after those of `F`.
    pub fn disjoint_union(&self, other: &Correspondence) -> Result<Self, ProfunctorError> {
        if !self.is_parallel(other) {
            return Err(ProfunctorError::NotParallel);
        }
        let names = self
            .names
            .iter()
            .zip(&other.names)
            .map(|(a, b)| a.iter().chain(b).cloned().collect())
            .collect();
        let (c_cat, d_cat) = (&self.source, &self.target);
        Correspondence::from_fn(
            c_cat.clone(),
            d_cat.clone(),
            names,
            |u, d, x| {
                let n = self.size(c_cat.tgt(u), d);
                if x < n {
                    self.act_left(u, d, x)
                } else {
                    self.size(c_cat.src(u), d) + other.act_left(u, d, x - n)
                }
            },
            |c, v, x| {
                let n = self.size(c, d_cat.src(v));
                if x < n {
                    self.act_right(c, v, x)
                } else {
                    self.size(c, d_cat.tgt(v)) + other.act_right(c, v, x - n)
                }
            },
        )
    }

    /// The same correspondence seen as `Dᵒᵖ ⇸ Cᵒᵖ`.
    pub fn opposite(&self, source_op: Arc<FinCategory>, target_op: Arc<FinCategory>) -> Result<Self, ProfunctorError> {
        let names = target_op
            .objects()
            .flat_map(|d| source_op.objects().map(move |c| (d, c)))
            .map(|(d, c)| self.names(c, d).to_vec())
            .collect();
        Correspondence::from_fn(
            target_op,
            source_op,
            names,
            |v, c, x| self.act_right(c, v, x),
            |d, u, x| self.act_left(u, d, x),
        )
    }
}

pub(crate) fn same_category(a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// `(c, c') ↦ Map_C(c, c')` with actions by composition.
pub fn hom_identity(c: &Arc<FinCategory>) -> Correspondence {
    companion_of_functor(&Functor::identity(c.clone()))
}

/// `(c, d) ↦ Map_D(u c, d)`, with `C` acting through `u`.
pub fn companion_of_functor(u: &Functor) -> Correspondence {
    let (c_cat, d_cat) = (u.source().clone(), u.target().clone());
    let names = c_cat
        .objects()
        .flat_map(|c| d_cat.objects().map(move |d| (c, d)))
        .map(|(c, d)| {
            d_cat
                .hom(u.on_object(c), d)
                .iter()
                .map(|&f| d_cat.morphism_name(f).to_string())
                .collect()
        })
        .collect();
    let d2 = d_cat.clone();
    let d3 = d_cat.clone();
    Correspondence::from_fn(
        c_cat.clone(),
        d_cat,
        names,
        |w, d, x| {
            let f = d2.hom(u.on_object(c_cat.tgt(w)), d)[x];
            d2.hom_position(d2.compose(f, u.on_morphism(w)))
        },
        |c, v, x| {
            let f = d3.hom(u.on_object(c), d3.src(v))[x];
            d3.hom_position(d3.compose(v, f))
        },
    )
    .expect("companion of a functor is a correspondence")
}

#[cfg(test)]
mod tests;
