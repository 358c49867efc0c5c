//! Algebras, bimodules and relative tensor products at desk scale.
//!
//! Two settings are covered. Monoids in finite sets with their bimodules,
//! tensored by the bar coequalizer, and algebras in the span double category
//! of finite sets, which are exactly finite categories, tensored by coends.
//! The chain cells of [`chain`] collect algebras `A₀ … Aₙ` with modules
//! `M_ij` and bilinear structure maps `M_ij ⊙ M_jk → M_ik`.

pub mod chain;

use std::sync::Arc;

use thiserror::Error;

use crate::fincat::{FinCategory, InvalidCategory, Mor, Ob};
use crate::profunctor::{CorrMap, Correspondence, ProfunctorError};
use crate::simplex::SimplicialOperator;
use crate::span::{FinSetMap, Span};
use crate::union_find::UnionFind;

pub use chain::{compose_chain, composite_check, ChainCell, CompositeFailure, CompositeReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoritaError {
    #[error("invalid monoid: {0}")]
    InvalidMonoid(String),
    #[error("invalid bimodule: {0}")]
    InvalidBimodule(String),
    #[error("bimodules are not over a common middle monoid")]
    MiddleMonoidMismatch,
    #[error("bar shape needs i < j < k <= n, got ({i}, {j}, {k}) in [{n}]")]
    IndexOrderViolation { i: usize, j: usize, k: usize, n: usize },
    #[error("malformed chain cell: {0}")]
    MalformedCell(String),
    #[error("consecutive modules do not share their algebras: {0}")]
    ActionMismatch(String),
    #[error(transparent)]
    Category(#[from] InvalidCategory),
    #[error(transparent)]
    Profunctor(#[from] ProfunctorError),
}

/// A finite monoid `(X, e, ·)` with `mul[a][b] = a · b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidInSet {
    names: Vec<String>,
    unit: usize,
    mul: Vec<Vec<usize>>,
}

impl MonoidInSet {
    pub fn new(names: Vec<String>, unit: usize, mul: Vec<Vec<usize>>) -> Result<Self, MoritaError> {
        let n = names.len();
        if unit >= n {
            return Err(MoritaError::InvalidMonoid("unit out of range".into()));
        }
        if mul.len() != n || mul.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(MoritaError::InvalidMonoid("multiplication table has the wrong shape".into()));
        }
        for a in 0..n {
            if mul[unit][a] != a || mul[a][unit] != a {
                return Err(MoritaError::InvalidMonoid(format!("unit law fails at `{}`", names[a])));
            }
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(MoritaError::InvalidMonoid(format!(
                            "associativity fails at ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        Ok(MonoidInSet { names, unit, mul })
    }

    pub fn trivial() -> Self {
        MonoidInSet {
            names: vec!["1".into()],
            unit: 0,
            mul: vec![vec![0]],
        }
    }

    pub fn cyclic(k: usize) -> Self {
        let names = (0..k).map(|i| format!("r{i}")).collect();
        let mul = (0..k).map(|a| (0..k).map(|b| (a + b) % k).collect()).collect();
        MonoidInSet { names, unit: 0, mul }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    /// The one-object category whose composite `g ∘ f` is `g · f`.
    pub fn to_category(&self) -> FinCategory {
        FinCategory::monoid(self.names.clone(), self.unit, |g, f| self.mul[g][f]).expect("monoid laws checked")
    }
}

/// A set `M` with a left action of `A` and a commuting right action of `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetBimodule {
    left: Arc<MonoidInSet>,
    right: Arc<MonoidInSet>,
    names: Vec<String>,
    /// `act_left[a][m] = a · m`
    act_left: Vec<Vec<usize>>,
    /// `act_right[m][b] = m · b`
    act_right: Vec<Vec<usize>>,
}

impl SetBimodule {
    pub fn new(
        left: Arc<MonoidInSet>,
        right: Arc<MonoidInSet>,
        names: Vec<String>,
        act_left: Vec<Vec<usize>>,
        act_right: Vec<Vec<usize>>,
    ) -> Result<Self, MoritaError> {
        let n = names.len();
        let bad = |msg: &str| Err(MoritaError::InvalidBimodule(msg.into()));
        if act_left.len() != left.len() || act_left.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return bad("left action table has the wrong shape");
        }
        if act_right.len() != n || act_right.iter().any(|r| r.len() != right.len() || r.iter().any(|&x| x >= n)) {
            return bad("right action table has the wrong shape");
        }
        for m in 0..n {
            if act_left[left.unit][m] != m || act_right[m][right.unit] != m {
                return bad("units do not act trivially");
            }
            for a in 0..left.len() {
                for a2 in 0..left.len() {
                    if act_left[left.mul(a, a2)][m] != act_left[a][act_left[a2][m]] {
                        return bad("left action is not associative");
                    }
                }
                for b in 0..right.len() {
                    if act_right[act_left[a][m]][b] != act_left[a][act_right[m][b]] {
                        return bad("actions do not commute");
                    }
                }
            }
            for b in 0..right.len() {
                for b2 in 0..right.len() {
                    if act_right[m][right.mul(b, b2)] != act_right[act_right[m][b]][b2] {
                        return bad("right action is not associative");
                    }
                }
            }
        }
        Ok(SetBimodule {
            left,
            right,
            names,
            act_left,
            act_right,
        })
    }

    /// `A` acting on itself from both sides.
    pub fn regular(a: Arc<MonoidInSet>) -> Self {
        let n = a.len();
        let act_left = (0..n).map(|x| (0..n).map(|m| a.mul(x, m)).collect()).collect();
        let act_right = (0..n).map(|m| (0..n).map(|y| a.mul(m, y)).collect()).collect();
        SetBimodule {
            left: a.clone(),
            right: a.clone(),
            names: a.names.clone(),
            act_left,
            act_right,
        }
    }

    /// Reads a correspondence `B ⇸ A` between the one-object categories of
    /// the monoids as an `(A, B)`-bimodule.
    pub fn from_correspondence(
        left: Arc<MonoidInSet>,
        right: Arc<MonoidInSet>,
        corr: &Correspondence,
    ) -> Result<Self, MoritaError> {
        if corr.source().num_objects() != 1 || corr.target().num_objects() != 1 {
            return Err(MoritaError::InvalidBimodule("categories must have one object".into()));
        }
        let n = corr.size(0, 0);
        let act_left = (0..left.len())
            .map(|a| (0..n).map(|m| corr.act_right(0, a, m)).collect())
            .collect();
        let act_right = (0..n)
            .map(|m| (0..right.len()).map(|b| corr.act_left(b, 0, m)).collect())
            .collect();
        SetBimodule::new(left, right, corr.names(0, 0).to_vec(), act_left, act_right)
    }

    pub fn left_monoid(&self) -> &Arc<MonoidInSet> {
        &self.left
    }

    pub fn right_monoid(&self) -> &Arc<MonoidInSet> {
        &self.right
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn left_act(&self, a: usize, m: usize) -> usize {
        self.act_left[a][m]
    }

    pub fn right_act(&self, m: usize, b: usize) -> usize {
        self.act_right[m][b]
    }

    /// The bimodule as a correspondence `B ⇸ A` between one-object
    /// categories: `B` acts by precomposition, `A` by postcomposition.
    pub fn to_correspondence(&self, a_cat: &Arc<FinCategory>, b_cat: &Arc<FinCategory>) -> Correspondence {
        Correspondence::from_fn(
            b_cat.clone(),
            a_cat.clone(),
            vec![self.names.clone()],
            |b, _, m| self.act_right[m][b],
            |_, a, m| self.act_left[a][m],
        )
        .expect("bimodule laws give a correspondence")
    }
}

/// `M ⊗_B N` together with the projection `M × N → M ⊗_B N`, indexed by
/// `m * |N| + n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelativeTensor {
    pub module: SetBimodule,
    pub projection: Vec<usize>,
    /// least pair `(m, n)` of each class
    pub representatives: Vec<(usize, usize)>,
}

/// The coequalizer of `M × B × N ⇉ M × N`, which is the colimit of the bar
/// diagram in sets.
pub fn bar_relative_tensor(m: &SetBimodule, n: &SetBimodule) -> Result<RelativeTensor, MoritaError> {
    if m.right != n.left {
        return Err(MoritaError::MiddleMonoidMismatch);
    }
    let width = n.len();
    let mut uf = UnionFind::new(m.len() * width);
    for x in 0..m.len() {
        for b in 0..m.right.len() {
            for y in 0..width {
                uf.union(m.right_act(x, b) * width + y, x * width + n.left_act(b, y));
            }
        }
    }
    let (projection, firsts) = uf.canonical_classes();
    let representatives: Vec<(usize, usize)> = firsts.iter().map(|&p| (p / width, p % width)).collect();
    let names = representatives
        .iter()
        .map(|&(x, y)| format!("{}*{}", m.names[x], n.names[y]))
        .collect();
    let act_left = (0..m.left.len())
        .map(|a| {
            representatives
                .iter()
                .map(|&(x, y)| projection[m.left_act(a, x) * width + y])
                .collect()
        })
        .collect();
    let act_right = representatives
        .iter()
        .map(|&(x, y)| {
            (0..n.right.len())
                .map(|c| projection[x * width + n.right_act(y, c)])
                .collect()
        })
        .collect();
    // actions must not depend on the representative
    for x in 0..m.len() {
        for y in 0..width {
            let k = projection[x * width + y];
            let (rx, ry) = representatives[k];
            for a in 0..m.left.len() {
                if projection[m.left_act(a, x) * width + y] != projection[m.left_act(a, rx) * width + ry] {
                    return Err(MoritaError::InvalidBimodule("left action does not descend".into()));
                }
            }
            for c in 0..n.right.len() {
                if projection[x * width + n.right_act(y, c)] != projection[rx * width + n.right_act(ry, c)] {
                    return Err(MoritaError::InvalidBimodule("right action does not descend".into()));
                }
            }
        }
    }
    let module = SetBimodule::new(m.left.clone(), n.right.clone(), names, act_left, act_right)?;
    Ok(RelativeTensor {
        module,
        projection,
        representatives,
    })
}

/// An algebra in the span double category of finite sets over the object set
/// `c`: a span `c ← X → c` with a unit `c → X` and a multiplication
/// `X ×_c X → X`, presented by tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraInSpan {
    pub objects: Vec<String>,
    /// elements of `X` with their source and target in `c`
    pub morphisms: Vec<(String, Ob, Ob)>,
    pub unit: Vec<Mor>,
    /// `(f, g, g·f)` for every pair with `tgt f = src g`
    pub multiplication: Vec<(Mor, Mor, Mor)>,
}

impl AlgebraInSpan {
    /// The underlying span `c ← X → c`.
    pub fn underlying_span(&self) -> Span {
        let k = self.objects.len();
        Span {
            left: FinSetMap::new(k, self.morphisms.iter().map(|m| m.1).collect()).expect("sources in range"),
            right: FinSetMap::new(k, self.morphisms.iter().map(|m| m.2).collect()).expect("targets in range"),
        }
    }
}

pub fn category_to_algebra(c: &FinCategory) -> AlgebraInSpan {
    AlgebraInSpan {
        objects: c.object_names().to_vec(),
        morphisms: c
            .morphisms()
            .map(|f| (c.morphism_name(f).to_string(), c.src(f), c.tgt(f)))
            .collect(),
        unit: c.objects().map(|x| c.identity(x)).collect(),
        multiplication: c
            .composable_pairs()
            .into_iter()
            .map(|(f, g)| (f, g, c.compose(g, f)))
            .collect(),
    }
}

/// Checks the algebra laws (which are the category laws) and returns the
/// category.
pub fn algebra_to_category(a: &AlgebraInSpan) -> Result<FinCategory, MoritaError> {
    let m = a.morphisms.len();
    let mut table = vec![None; m * m];
    for &(f, g, h) in &a.multiplication {
        if f >= m || g >= m {
            return Err(MoritaError::InvalidMonoid(format!("multiplication entry ({f}, {g}) out of range")));
        }
        table[g * m + f] = Some(h);
    }
    Ok(FinCategory::build(
        a.objects.clone(),
        a.morphisms.clone(),
        a.unit.clone(),
        |g, f| table[g * m + f],
    )?)
}

/// The degree of a bar shape: the augmentation (`m = −1`) or a simplicial
/// level `m ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BarLevel {
    Augmentation,
    Level(usize),
}

/// `Q([m]): [m+2] → [n]` sending `0 ↦ i`, the interior to `j` and `m+2 ↦ k`;
/// the augmentation is `[1] → [n]`, `0 ↦ i`, `1 ↦ k`.
pub fn bar_shape(i: usize, j: usize, k: usize, n: usize, level: BarLevel) -> Result<SimplicialOperator, MoritaError> {
    if !(i < j && j < k && k <= n) {
        return Err(MoritaError::IndexOrderViolation { i, j, k, n });
    }
    let values = match level {
        BarLevel::Augmentation => vec![i, k],
        BarLevel::Level(m) => (0..=m + 2)
            .map(|t| match t {
                0 => i,
                t if t == m + 2 => k,
                _ => j,
            })
            .collect(),
    };
    Ok(SimplicialOperator::new(n, values).expect("bar shapes are monotone"))
}

/// A map of spans `(c ← a → d) ⇒ (c' ← a' → d')` in the arrow category of
/// the span double category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanSquare {
    pub source_foot: FinSetMap,
    pub apex: FinSetMap,
    pub target_foot: FinSetMap,
}

impl SpanSquare {
    pub fn is_square(&self, from: &Span, to: &Span) -> bool {
        self.apex.source() == from.apex()
            && self.apex.target() == to.apex()
            && self.source_foot.source() == from.source_foot()
            && self.source_foot.target() == to.source_foot()
            && self.target_foot.source() == from.target_foot()
            && self.target_foot.target() == to.target_foot()
            && to.left.after(&self.apex) == self.source_foot.after(&from.left)
            && to.right.after(&self.apex) == self.target_foot.after(&from.right)
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &SpanSquare) -> SpanSquare {
        SpanSquare {
            source_foot: self.source_foot.after(&inner.source_foot),
            apex: self.apex.after(&inner.apex),
            target_foot: self.target_foot.after(&inner.target_foot),
        }
    }
}

/// Pushes the feet of `s` forward along `f` and `g`, keeping the apex.
pub fn cocartesian_lift(s: &Span, f: &FinSetMap, g: &FinSetMap) -> (Span, SpanSquare) {
    let target = Span {
        left: f.after(&s.left),
        right: g.after(&s.right),
    };
    let square = SpanSquare {
        source_foot: f.clone(),
        apex: FinSetMap::identity(s.apex()),
        target_foot: g.clone(),
    };
    (target, square)
}

/// Pulls `s'` back along `f: c → c'` and `g: d → d'`, with apex
/// `c ×_{c'} a' ×_{d'} d` enumerated as sorted triples.
pub fn cartesian_lift(s: &Span, f: &FinSetMap, g: &FinSetMap) -> (Span, SpanSquare) {
    let mut triples = Vec::new();
    for x in 0..f.source() {
        for a in 0..s.apex() {
            if s.left.apply(a) != f.apply(x) {
                continue;
            }
            for y in 0..g.source() {
                if s.right.apply(a) == g.apply(y) {
                    triples.push((x, a, y));
                }
            }
        }
    }
    let lift = Span {
        left: FinSetMap::new(f.source(), triples.iter().map(|t| t.0).collect()).expect("in range"),
        right: FinSetMap::new(g.source(), triples.iter().map(|t| t.2).collect()).expect("in range"),
    };
    let square = SpanSquare {
        source_foot: f.clone(),
        apex: FinSetMap::new(s.apex(), triples.iter().map(|t| t.1).collect()).expect("in range"),
        target_foot: g.clone(),
    };
    (lift, square)
}

/// The comparison `M ⊗_B N → corr(N) ⊙ corr(M)` between the two tensor
/// implementations, sending the class of `(m, n)` to the class of `[n, m]`.
pub fn bar_coend_comparison(
    tensor: &RelativeTensor,
    coend: &crate::profunctor::Coend,
) -> Result<CorrMap, ProfunctorError> {
    let components = vec![tensor
        .representatives
        .iter()
        .map(|&(x, y)| coend.class(0, 0, 0, y, x))
        .collect()];
    let a = Arc::new(tensor.module.left.to_category());
    let c = Arc::new(tensor.module.right.to_category());
    let as_corr = tensor.module.to_correspondence(&a, &c);
    CorrMap::new(&as_corr, &coend.composite, components)
}
