use crate::fincat::Ob;
use crate::union_find::UnionFind;

use super::{same_category, CorrMap, Correspondence, ProfunctorError};

/// The composite `F ⊙ G` together with its quotient map.
///
/// For each pair `(c, e)` the pre-quotient set is `⨿_d F(c,d) × G(d,e)`,
/// enumerated by `d`, then `ξ`, then `η`. Classes are numbered by first
/// appearance, so the representative of a class is its least member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coend {
    pub composite: Correspondence,
    /// Per `(c, e)`: the block `(offset, width)` of each middle object `d`.
    blocks: Vec<Vec<(usize, usize)>>,
    class_of: Vec<Vec<usize>>,
    reps: Vec<Vec<(Ob, usize, usize)>>,
}

impl Coend {
    fn slot(&self, c: Ob, e: Ob) -> usize {
        c * self.composite.target().num_objects() + e
    }

    /// Class of `[ξ, η]` with `ξ ∈ F(c,d)`, `η ∈ G(d,e)`.
    pub fn class(&self, c: Ob, e: Ob, d: Ob, xi: usize, eta: usize) -> usize {
        let s = self.slot(c, e);
        let (offset, width) = self.blocks[s][d];
        self.class_of[s][offset + xi * width + eta]
    }

    /// Least member `(d, ξ, η)` of a class.
    pub fn representative(&self, c: Ob, e: Ob, class: usize) -> (Ob, usize, usize) {
        self.reps[self.slot(c, e)][class]
    }

    /// Number of pre-quotient pairs over `(c, e)`.
    pub fn pair_count(&self, c: Ob, e: Ob) -> usize {
        self.class_of[self.slot(c, e)].len()
    }
}

/// Coend composite of `F: C ⇸ D` and `G: D ⇸ E`, identifying
/// `(v·ξ, η') ~ (ξ, η'·v)` for `v: d → d'`, `ξ ∈ F(c,d)`, `η' ∈ G(d',e)`.
pub fn coend_compose(f: &Correspondence, g: &Correspondence) -> Result<Coend, ProfunctorError> {
    if !same_category(f.target(), g.source()) {
        return Err(ProfunctorError::MiddleMismatch);
    }
    let (c_cat, d_cat, e_cat) = (f.source(), f.target(), g.target());
    let mut blocks = Vec::new();
    let mut class_of = Vec::new();
    let mut reps = Vec::new();
    let mut names = Vec::new();
    for c in c_cat.objects() {
        for e in e_cat.objects() {
            let mut block = Vec::with_capacity(d_cat.num_objects());
            let mut total = 0;
            for d in d_cat.objects() {
                let width = g.size(d, e);
                block.push((total, width));
                total += f.size(c, d) * width;
            }
            let index = |d: Ob, xi: usize, eta: usize| block[d].0 + xi * block[d].1 + eta;
            let mut uf = UnionFind::new(total);
            for v in d_cat.morphisms() {
                let (d, d2) = (d_cat.src(v), d_cat.tgt(v));
                for xi in 0..f.size(c, d) {
                    let pushed = f.act_right(c, v, xi);
                    for eta in 0..g.size(d2, e) {
                        uf.union(index(d2, pushed, eta), index(d, xi, g.act_left(v, e, eta)));
                    }
                }
            }
            let (classes, firsts) = uf.canonical_classes();
            let mut rep = Vec::with_capacity(firsts.len());
            for x in firsts {
                let d = (0..block.len())
                    .find(|&d| block[d].0 <= x && x < block[d].0 + f.size(c, d) * block[d].1)
                    .unwrap();
                let (offset, width) = block[d];
                rep.push((d, (x - offset) / width, (x - offset) % width));
            }
            names.push(
                rep.iter()
                    .map(|&(d, xi, eta)| {
                        format!(
                            "[{}|{}|{}]",
                            d_cat.object_name(d),
                            f.element_name(c, d, xi),
                            g.element_name(d, e, eta)
                        )
                    })
                    .collect(),
            );
            blocks.push(block);
            class_of.push(classes);
            reps.push(rep);
        }
    }
    let ne = e_cat.num_objects();
    // actions are computed on representatives and then verified on every
    // member of each class
    let left = |w: usize, e: Ob, k: usize| -> usize {
        let c = c_cat.tgt(w);
        let (d, xi, eta) = reps[c * ne + e][k];
        let c2 = c_cat.src(w);
        let (offset, width) = blocks[c2 * ne + e][d];
        class_of[c2 * ne + e][offset + f.act_left(w, d, xi) * width + eta]
    };
    let right = |c: Ob, v: usize, k: usize| -> usize {
        let e = e_cat.src(v);
        let (d, xi, eta) = reps[c * ne + e][k];
        let e2 = e_cat.tgt(v);
        let (offset, width) = blocks[c * ne + e2][d];
        class_of[c * ne + e2][offset + xi * width + g.act_right(d, v, eta)]
    };
    for c in c_cat.objects() {
        for e in e_cat.objects() {
            let s = c * ne + e;
            for d in d_cat.objects() {
                let (offset, width) = blocks[s][d];
                for xi in 0..f.size(c, d) {
                    for eta in 0..width {
                        let k = class_of[s][offset + xi * width + eta];
                        for w in c_cat.into_object(c) {
                            let c2 = c_cat.src(w);
                            let (o2, w2) = blocks[c2 * ne + e][d];
                            if class_of[c2 * ne + e][o2 + f.act_left(w, d, xi) * w2 + eta] != left(w, e, k) {
                                return Err(ProfunctorError::IllDefinedAction {
                                    side: "left",
                                    morphism: c_cat.morphism_name(w).into(),
                                });
                            }
                        }
                        for v in e_cat.out_of(e) {
                            let e2 = e_cat.tgt(v);
                            let (o2, w2) = blocks[c * ne + e2][d];
                            if class_of[c * ne + e2][o2 + xi * w2 + g.act_right(d, v, eta)] != right(c, v, k) {
                                return Err(ProfunctorError::IllDefinedAction {
                                    side: "right",
                                    morphism: e_cat.morphism_name(v).into(),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    let composite = Correspondence::from_fn(c_cat.clone(), e_cat.clone(), names, left, right)?;
    Ok(Coend {
        composite,
        blocks,
        class_of,
        reps,
    })
}

/// A map `F(c,d) × G(d,e) → H(c,e)` for all `c, d, e`, balanced over the
/// middle category and equivariant for the outer actions. It descends to a
/// [`CorrMap`] `F ⊙ G → H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearMap {
    nd: usize,
    ne: usize,
    /// Indexed by `(c * nd + d) * ne + e`, then `ξ * |G(d,e)| + η`.
    values: Vec<Vec<usize>>,
}

impl BilinearMap {
    pub fn from_fn(
        f: &Correspondence,
        g: &Correspondence,
        h: &Correspondence,
        mut value: impl FnMut(Ob, Ob, Ob, usize, usize) -> usize,
    ) -> Result<Self, ProfunctorError> {
        let (nc, nd, ne) = (
            f.source().num_objects(),
            f.target().num_objects(),
            g.target().num_objects(),
        );
        let mut values = Vec::with_capacity(nc * nd * ne);
        for c in 0..nc {
            for d in 0..nd {
                for e in 0..ne {
                    let mut table = Vec::with_capacity(f.size(c, d) * g.size(d, e));
                    for xi in 0..f.size(c, d) {
                        for eta in 0..g.size(d, e) {
                            table.push(value(c, d, e, xi, eta));
                        }
                    }
                    values.push(table);
                }
            }
        }
        let map = BilinearMap { nd, ne, values };
        map.check(f, g, h)?;
        Ok(map)
    }

    pub fn apply(&self, c: Ob, d: Ob, e: Ob, xi: usize, eta: usize, width: usize) -> usize {
        self.values[(c * self.nd + d) * self.ne + e][xi * width + eta]
    }

    /// Value at `(ξ, η)`, reading the width of `G(d, e)` from `g`.
    pub fn at(&self, g: &Correspondence, c: Ob, d: Ob, e: Ob, xi: usize, eta: usize) -> usize {
        self.apply(c, d, e, xi, eta, g.size(d, e))
    }

    #[allow(clippy::too_many_arguments)]
    pub fn set(&mut self, g: &Correspondence, c: Ob, d: Ob, e: Ob, xi: usize, eta: usize, value: usize) {
        let width = g.size(d, e);
        self.values[(c * self.nd + d) * self.ne + e][xi * width + eta] = value;
    }

    pub fn check(&self, f: &Correspondence, g: &Correspondence, h: &Correspondence) -> Result<(), ProfunctorError> {
        if !same_category(f.target(), g.source()) {
            return Err(ProfunctorError::MiddleMismatch);
        }
        if !same_category(h.source(), f.source()) || !same_category(h.target(), g.target()) {
            return Err(ProfunctorError::NotParallel);
        }
        let (c_cat, d_cat, e_cat) = (f.source(), f.target(), g.target());
        for c in c_cat.objects() {
            for d in d_cat.objects() {
                for e in e_cat.objects() {
                    let table = &self.values[(c * self.nd + d) * self.ne + e];
                    if table.len() != f.size(c, d) * g.size(d, e) || table.iter().any(|&z| z >= h.size(c, e)) {
                        return Err(ProfunctorError::ComponentShape {
                            c: c_cat.object_name(c).into(),
                            d: e_cat.object_name(e).into(),
                        });
                    }
                }
            }
        }
        for v in d_cat.morphisms() {
            let (d, d2) = (d_cat.src(v), d_cat.tgt(v));
            for c in c_cat.objects() {
                for e in e_cat.objects() {
                    for xi in 0..f.size(c, d) {
                        for eta in 0..g.size(d2, e) {
                            if self.at(g, c, d2, e, f.act_right(c, v, xi), eta)
                                != self.at(g, c, d, e, xi, g.act_left(v, e, eta))
                            {
                                return Err(ProfunctorError::NotBalanced {
                                    morphism: d_cat.morphism_name(v).into(),
                                });
                            }
                        }
                    }
                }
            }
        }
        for c in c_cat.objects() {
            for d in d_cat.objects() {
                for e in e_cat.objects() {
                    for xi in 0..f.size(c, d) {
                        for eta in 0..g.size(d, e) {
                            let z = self.at(g, c, d, e, xi, eta);
                            for w in c_cat.into_object(c) {
                                let c2 = c_cat.src(w);
                                if self.at(g, c2, d, e, f.act_left(w, d, xi), eta) != h.act_left(w, e, z) {
                                    return Err(ProfunctorError::NotEquivariant {
                                        side: "left",
                                        morphism: c_cat.morphism_name(w).into(),
                                    });
                                }
                            }
                            for v in e_cat.out_of(e) {
                                let e2 = e_cat.tgt(v);
                                if self.at(g, c, d, e2, xi, g.act_right(d, v, eta)) != h.act_right(c, v, z) {
                                    return Err(ProfunctorError::NotEquivariant {
                                        side: "right",
                                        morphism: e_cat.morphism_name(v).into(),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The induced map on the coend, evaluated on class representatives.
    pub fn descend(&self, coend: &Coend, g: &Correspondence, h: &Correspondence) -> Result<CorrMap, ProfunctorError> {
        let p = &coend.composite;
        let mut components = Vec::new();
        for c in p.source().objects() {
            for e in p.target().objects() {
                components.push(
                    (0..p.size(c, e))
                        .map(|k| {
                            let (d, xi, eta) = coend.representative(c, e, k);
                            self.at(g, c, d, e, xi, eta)
                        })
                        .collect(),
                );
            }
        }
        CorrMap::new(p, h, components)
    }
}
