//! Chain cells over `[n]`: algebras `A₀ … Aₙ` (finite categories), modules
//! `M_ij: A_i ⇸ A_j` for `i < j`, and bilinear maps `M_ij ⊙ M_jk → M_ik`.
//!
//! A cell is composite when every structure map exhibits `M_ik` as the
//! relative tensor product `M_ij ⊗_{A_j} M_jk`. Cells that are not composite
//! are still valid cells.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::fincat::{FinCategory, Ob};
use crate::profunctor::{coend_compose, same_category, BilinearMap, Coend, Correspondence};

use super::{category_to_algebra, AlgebraInSpan, MoritaError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainCell {
    n: usize,
    algebras: Vec<Arc<FinCategory>>,
    modules: BTreeMap<(usize, usize), Correspondence>,
    mu: BTreeMap<(usize, usize, usize), BilinearMap>,
}

impl ChainCell {
    /// Validates shapes, bilinearity of every structure map, and associativity
    /// `μ_ikl(μ_ijk(x, y), z) = μ_ijl(x, μ_jkl(y, z))` on all elements.
    pub fn new(
        algebras: Vec<Arc<FinCategory>>,
        modules: BTreeMap<(usize, usize), Correspondence>,
        mu: BTreeMap<(usize, usize, usize), BilinearMap>,
    ) -> Result<Self, MoritaError> {
        let Some(n) = algebras.len().checked_sub(1) else {
            return Err(MoritaError::MalformedCell("a cell needs at least one algebra".into()));
        };
        for i in 0..=n {
            for j in i + 1..=n {
                let m = modules
                    .get(&(i, j))
                    .ok_or_else(|| MoritaError::MalformedCell(format!("missing module M_{i}{j}")))?;
                if !same_category(m.source(), &algebras[i]) || !same_category(m.target(), &algebras[j]) {
                    return Err(MoritaError::MalformedCell(format!("M_{i}{j} is not over A_{i} and A_{j}")));
                }
                for k in j + 1..=n {
                    let map = mu
                        .get(&(i, j, k))
                        .ok_or_else(|| MoritaError::MalformedCell(format!("missing structure map μ_{i}{j}{k}")))?;
                    map.check(m, &modules[&(j, k)], &modules[&(i, k)])
                        .map_err(|e| MoritaError::MalformedCell(format!("μ_{i}{j}{k}: {e}")))?;
                }
            }
        }
        if modules.keys().any(|&(i, j)| i >= j || j > n) || mu.keys().any(|&(i, j, k)| !(i < j && j < k && k <= n)) {
            return Err(MoritaError::MalformedCell("stray indices".into()));
        }
        let cell = ChainCell {
            n,
            algebras,
            modules,
            mu,
        };
        if let Some((i, j, k, l)) = cell.associativity_failure() {
            return Err(MoritaError::MalformedCell(format!(
                "structure maps are not associative on ({i}, {j}, {k}, {l})"
            )));
        }
        Ok(cell)
    }

    fn associativity_failure(&self) -> Option<(usize, usize, usize, usize)> {
        let n = self.n;
        for i in 0..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    for l in k + 1..=n {
                        let (mij, mjk, mkl) = (self.module(i, j), self.module(j, k), self.module(k, l));
                        let (a, b, c, d) = (&self.algebras[i], &self.algebras[j], &self.algebras[k], &self.algebras[l]);
                        for w in a.objects() {
                            for x in b.objects() {
                                for y in c.objects() {
                                    for z in d.objects() {
                                        for p in 0..mij.size(w, x) {
                                            for q in 0..mjk.size(x, y) {
                                                let pq = self.mu(i, j, k, w, x, y, p, q);
                                                for r in 0..mkl.size(y, z) {
                                                    let qr = self.mu(j, k, l, x, y, z, q, r);
                                                    if self.mu(i, k, l, w, y, z, pq, r) != self.mu(i, j, l, w, x, z, p, qr) {
                                                        return Some((i, j, k, l));
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
            }
        }
        None
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn algebras(&self) -> &[Arc<FinCategory>] {
        &self.algebras
    }

    pub fn algebra(&self, i: usize) -> AlgebraInSpan {
        category_to_algebra(&self.algebras[i])
    }

    pub fn module(&self, i: usize, j: usize) -> &Correspondence {
        &self.modules[&(i, j)]
    }

    pub fn modules(&self) -> &BTreeMap<(usize, usize), Correspondence> {
        &self.modules
    }

    pub fn structure_map(&self, i: usize, j: usize, k: usize) -> &BilinearMap {
        &self.mu[&(i, j, k)]
    }

    pub fn structure_maps(&self) -> &BTreeMap<(usize, usize, usize), BilinearMap> {
        &self.mu
    }

    /// `μ_ijk(x, y)` for `x ∈ M_ij(a, b)`, `y ∈ M_jk(b, c)`.
    #[allow(clippy::too_many_arguments)]
    pub fn mu(&self, i: usize, j: usize, k: usize, a: Ob, b: Ob, c: Ob, x: usize, y: usize) -> usize {
        self.mu[&(i, j, k)].at(self.module(j, k), a, b, c, x, y)
    }

    /// The sub-cell on `{i, …, j}`.
    pub fn restrict_interval(&self, i: usize, j: usize) -> ChainCell {
        let shift2 = |&(a, b): &(usize, usize)| (a - i, b - i);
        ChainCell {
            n: j - i,
            algebras: self.algebras[i..=j].to_vec(),
            modules: self
                .modules
                .iter()
                .filter(|(&(a, b), _)| i <= a && b <= j)
                .map(|(k, m)| (shift2(k), m.clone()))
                .collect(),
            mu: self
                .mu
                .iter()
                .filter(|(&(a, _, c), _)| i <= a && c <= j)
                .map(|(&(a, b, c), m)| ((a - i, b - i, c - i), m.clone()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeFailure {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub injective: bool,
    pub surjective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CompositeReport {
    pub triples_checked: usize,
    pub failures: Vec<CompositeFailure>,
}

impl CompositeReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For every `i < j < k`, checks that `μ_ijk` induces a bijection
/// `M_ij ⊙ M_jk → M_ik`.
pub fn composite_check(cell: &ChainCell) -> CompositeReport {
    let mut report = CompositeReport::default();
    let n = cell.n;
    for i in 0..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                report.triples_checked += 1;
                let (mij, mjk, mik) = (cell.module(i, j), cell.module(j, k), cell.module(i, k));
                let coend = coend_compose(mij, mjk).expect("modules share their middle algebra");
                let map = cell.mu[&(i, j, k)]
                    .descend(&coend, mjk, mik)
                    .expect("bilinear maps descend to the coend");
                let (mut injective, mut surjective) = (true, true);
                for a in cell.algebras[i].objects() {
                    for c in cell.algebras[k].objects() {
                        let mut hits = vec![0usize; mik.size(a, c)];
                        for &y in map.component(a, c) {
                            hits[y] += 1;
                        }
                        injective &= hits.iter().all(|&h| h <= 1);
                        surjective &= hits.iter().all(|&h| h >= 1);
                    }
                }
                if !(injective && surjective) {
                    report.failures.push(CompositeFailure {
                        i,
                        j,
                        k,
                        injective,
                        surjective,
                    });
                }
            }
        }
    }
    report
}

/// A composable tuple `x_i, …, x_{j-1}` with `x_t ∈ M_{t,t+1}(o_t, o_{t+1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Tuple {
    objects: Vec<Ob>,
    elements: Vec<usize>,
}

struct Filling {
    spine: Vec<Correspondence>,
    /// `coends[(i, j)] = M_{i,i+1} ⊙ M_{i+1,j}` for `j ≥ i + 2`
    coends: BTreeMap<(usize, usize), Coend>,
}

impl Filling {
    fn module(&self, i: usize, j: usize) -> &Correspondence {
        if j == i + 1 {
            &self.spine[i]
        } else {
            &self.coends[&(i, j)].composite
        }
    }

    fn expand(&self, i: usize, j: usize, a: Ob, c: Ob, x: usize) -> Tuple {
        if j == i + 1 {
            return Tuple {
                objects: vec![a, c],
                elements: vec![x],
            };
        }
        let (b, xi, rest) = self.coends[&(i, j)].representative(a, c, x);
        let tail = self.expand(i + 1, j, b, c, rest);
        let mut objects = vec![a];
        objects.extend(tail.objects);
        let mut elements = vec![xi];
        elements.extend(tail.elements);
        Tuple { objects, elements }
    }

    fn classify(&self, i: usize, t: &[Ob], xs: &[usize]) -> usize {
        if xs.len() == 1 {
            return xs[0];
        }
        let j = i + xs.len();
        let rest = self.classify(i + 1, &t[1..], &xs[1..]);
        self.coends[&(i, j)].class(t[0], t[t.len() - 1], t[1], xs[0], rest)
    }
}

/// Fills a spine `M_{01}, …, M_{n-1,n}` to a composite cell, with
/// `M_ij = M_{i,i+1} ⊙ M_{i+1,j}` and structure maps given by concatenating
/// representative tuples.
pub fn compose_chain(algebras: Vec<Arc<FinCategory>>, spine: Vec<Correspondence>) -> Result<ChainCell, MoritaError> {
    if algebras.len() != spine.len() + 1 {
        return Err(MoritaError::MalformedCell(format!(
            "{} algebras for {} modules",
            algebras.len(),
            spine.len()
        )));
    }
    for (i, m) in spine.iter().enumerate() {
        if !same_category(m.source(), &algebras[i]) || !same_category(m.target(), &algebras[i + 1]) {
            return Err(MoritaError::ActionMismatch(format!("M_{}{} is not over A_{} and A_{}", i, i + 1, i, i + 1)));
        }
    }
    let n = spine.len();
    let mut filling = Filling {
        spine,
        coends: BTreeMap::new(),
    };
    for len in 2..=n {
        for i in 0..=n - len {
            let j = i + len;
            let coend = coend_compose(filling.module(i, i + 1), filling.module(i + 1, j))?;
            filling.coends.insert((i, j), coend);
        }
    }
    let mut modules = BTreeMap::new();
    for i in 0..=n {
        for j in i + 1..=n {
            modules.insert((i, j), filling.module(i, j).clone());
        }
    }
    let mut mu = BTreeMap::new();
    for i in 0..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                let map = BilinearMap::from_fn(&modules[&(i, j)], &modules[&(j, k)], &modules[&(i, k)], |a, b, c, x, y| {
                    let left = filling.expand(i, j, a, b, x);
                    let right = filling.expand(j, k, b, c, y);
                    let mut objects = left.objects;
                    objects.extend(&right.objects[1..]);
                    let mut elements = left.elements;
                    elements.extend(right.elements);
                    filling.classify(i, &objects, &elements)
                })?;
                mu.insert((i, j, k), map);
            }
        }
    }
    ChainCell::new(algebras, modules, mu)
}
