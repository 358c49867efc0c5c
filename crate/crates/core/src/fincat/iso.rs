//! Isomorphism search between finite categories, optionally over a base.
//!
//! Objects are matched first (pruned by hom-size profiles), then morphisms
//! are assigned one hom-set at a time; every assignment is propagated
//! through composition with the morphisms already assigned, so a complete
//! assignment is a functor by construction.

use std::sync::Arc;

use super::{FinCategory, Functor, Mor, Ob, NONE};

struct Search<'a> {
    a: &'a FinCategory,
    b: &'a FinCategory,
    obj_label_a: Vec<usize>,
    obj_label_b: Vec<usize>,
    mor_label_a: Vec<usize>,
    mor_label_b: Vec<usize>,
    obj: Vec<Ob>,
    obj_inv: Vec<Ob>,
    mor: Vec<Mor>,
    mor_inv: Vec<Mor>,
    trail: Vec<Mor>,
    order: Vec<Mor>,
}

impl<'a> Search<'a> {
    fn hom_profile(cat: &FinCategory, labels: &[usize], x: Ob, y: Ob) -> Vec<usize> {
        let mut v: Vec<usize> = cat.hom(x, y).iter().map(|&f| labels[f]).collect();
        v.sort_unstable();
        v
    }

    fn signature(cat: &FinCategory, obj_labels: &[usize], labels: &[usize], x: Ob) -> Vec<usize> {
        let mut outs: Vec<usize> = cat.objects().map(|y| cat.hom(x, y).len()).collect();
        let mut ins: Vec<usize> = cat.objects().map(|y| cat.hom(y, x).len()).collect();
        outs.sort_unstable();
        ins.sort_unstable();
        let mut sig = vec![obj_labels[x]];
        sig.extend(Self::hom_profile(cat, labels, x, x));
        sig.push(usize::MAX);
        sig.extend(outs);
        sig.push(usize::MAX);
        sig.extend(ins);
        sig
    }

    fn run(&mut self, visit: &mut dyn FnMut(&[Ob], &[Mor]) -> bool) {
        let (a, b) = (self.a, self.b);
        if a.num_objects() != b.num_objects() || a.num_morphisms() != b.num_morphisms() {
            return;
        }
        let sig_a: Vec<Vec<usize>> = a
            .objects()
            .map(|x| Self::signature(a, &self.obj_label_a, &self.mor_label_a, x))
            .collect();
        let sig_b: Vec<Vec<usize>> = b
            .objects()
            .map(|x| Self::signature(b, &self.obj_label_b, &self.mor_label_b, x))
            .collect();
        let mut sa = sig_a.clone();
        let mut sb = sig_b.clone();
        sa.sort();
        sb.sort();
        if sa != sb {
            return;
        }
        let mut ma = self.mor_label_a.clone();
        let mut mb = self.mor_label_b.clone();
        ma.sort_unstable();
        mb.sort_unstable();
        if ma != mb {
            return;
        }
        let mut order: Vec<Mor> = a.morphisms().filter(|&f| !a.is_identity(f)).collect();
        order.sort_by_key(|&f| a.hom(a.src(f), a.tgt(f)).len());
        self.order = order;
        self.objects(0, &sig_a, &sig_b, visit);
    }

    fn objects(
        &mut self,
        i: usize,
        sig_a: &[Vec<usize>],
        sig_b: &[Vec<usize>],
        visit: &mut dyn FnMut(&[Ob], &[Mor]) -> bool,
    ) -> bool {
        let (a, b) = (self.a, self.b);
        if i == a.num_objects() {
            return self.start_morphisms(visit);
        }
        for y in b.objects() {
            if self.obj_inv[y] != NONE || sig_a[i] != sig_b[y] {
                continue;
            }
            let compatible = (0..i).all(|x| {
                let z = self.obj[x];
                Self::hom_profile(a, &self.mor_label_a, i, x)
                    == Self::hom_profile(b, &self.mor_label_b, y, z)
                    && Self::hom_profile(a, &self.mor_label_a, x, i)
                        == Self::hom_profile(b, &self.mor_label_b, z, y)
            });
            if !compatible {
                continue;
            }
            self.obj[i] = y;
            self.obj_inv[y] = i;
            let go_on = self.objects(i + 1, sig_a, sig_b, visit);
            self.obj[i] = NONE;
            self.obj_inv[y] = NONE;
            if !go_on {
                return false;
            }
        }
        true
    }

    fn start_morphisms(&mut self, visit: &mut dyn FnMut(&[Ob], &[Mor]) -> bool) -> bool {
        self.mor.iter_mut().for_each(|m| *m = NONE);
        self.mor_inv.iter_mut().for_each(|m| *m = NONE);
        self.trail.clear();
        let ok = self.a.objects().all(|x| {
            let f = self.a.identity(x);
            let g = self.b.identity(self.obj[x]);
            self.assign(f, g)
        });
        if !ok {
            return true;
        }
        let go_on = self.morphisms(0, visit);
        self.undo(0);
        go_on
    }

    fn morphisms(&mut self, k: usize, visit: &mut dyn FnMut(&[Ob], &[Mor]) -> bool) -> bool {
        let (a, b) = (self.a, self.b);
        let mut k = k;
        while k < self.order.len() && self.mor[self.order[k]] != NONE {
            k += 1;
        }
        if k == self.order.len() {
            return visit(&self.obj, &self.mor);
        }
        let f = self.order[k];
        let candidates: Vec<Mor> = b.hom(self.obj[a.src(f)], self.obj[a.tgt(f)]).to_vec();
        for g in candidates {
            if self.mor_inv[g] != NONE || self.mor_label_b[g] != self.mor_label_a[f] {
                continue;
            }
            let mark = self.trail.len();
            if self.assign(f, g) && !self.morphisms(k + 1, visit) {
                self.undo(mark);
                return false;
            }
            self.undo(mark);
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let f = self.trail.pop().expect("trail entry");
            self.mor_inv[self.mor[f]] = NONE;
            self.mor[f] = NONE;
        }
    }

    fn assign(&mut self, f: Mor, g: Mor) -> bool {
        let (a, b) = (self.a, self.b);
        let mut work = vec![(f, g)];
        while let Some((f, g)) = work.pop() {
            if self.mor[f] != NONE {
                if self.mor[f] != g {
                    return false;
                }
                continue;
            }
            if self.mor_inv[g] != NONE
                || self.mor_label_a[f] != self.mor_label_b[g]
                || b.src(g) != self.obj[a.src(f)]
                || b.tgt(g) != self.obj[a.tgt(f)]
            {
                return false;
            }
            self.mor[f] = g;
            self.mor_inv[g] = f;
            self.trail.push(f);
            for k in a.out_of(a.tgt(f)) {
                if self.mor[k] != NONE {
                    work.push((a.compose(k, f), b.compose(self.mor[k], g)));
                }
            }
            for k in a.into_object(a.src(f)) {
                if self.mor[k] != NONE {
                    work.push((a.compose(f, k), b.compose(g, self.mor[k])));
                }
            }
        }
        true
    }
}

/// Object labels of `a` and `b`, then morphism labels of `a` and `b`.
type Labels = (Vec<usize>, Vec<usize>, Vec<usize>, Vec<usize>);

fn search<'a>(
    a: &'a FinCategory,
    b: &'a FinCategory,
    labels: Option<Labels>,
) -> Search<'a> {
    let (obj_label_a, obj_label_b, mor_label_a, mor_label_b) = labels.unwrap_or_else(|| {
        (
            vec![0; a.num_objects()],
            vec![0; b.num_objects()],
            vec![0; a.num_morphisms()],
            vec![0; b.num_morphisms()],
        )
    });
    Search {
        a,
        b,
        obj_label_a,
        obj_label_b,
        mor_label_a,
        mor_label_b,
        obj: vec![NONE; a.num_objects()],
        obj_inv: vec![NONE; b.num_objects()],
        mor: vec![NONE; a.num_morphisms()],
        mor_inv: vec![NONE; b.num_morphisms()],
        trail: Vec::new(),
        order: Vec::new(),
    }
}

/// Calls `visit(objects, morphisms)` for every isomorphism `a -> b` until it
/// returns `false`.
pub fn for_each_isomorphism(
    a: &FinCategory,
    b: &FinCategory,
    mut visit: impl FnMut(&[Ob], &[Mor]) -> bool,
) {
    search(a, b, None).run(&mut visit);
}

/// Like [`for_each_isomorphism`], restricted to isomorphisms `φ` with
/// `q ∘ φ = p`.
pub fn for_each_isomorphism_over(
    p: &Functor,
    q: &Functor,
    mut visit: impl FnMut(&[Ob], &[Mor]) -> bool,
) {
    if p.target() != q.target() {
        return;
    }
    let labels = (
        p.object_map().to_vec(),
        q.object_map().to_vec(),
        p.morphism_map().to_vec(),
        q.morphism_map().to_vec(),
    );
    search(p.source(), q.source(), Some(labels)).run(&mut visit);
}

pub fn category_iso_search(a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> Option<Functor> {
    let mut found = None;
    for_each_isomorphism(a, b, |o, m| {
        found = Some((o.to_vec(), m.to_vec()));
        false
    });
    found.map(|(o, m)| {
        Functor::new(a.clone(), b.clone(), o, m).expect("search returns a functor")
    })
}

/// An isomorphism `φ: source(p) -> source(q)` with `q ∘ φ = p`.
pub fn category_iso_search_over(p: &Functor, q: &Functor) -> Option<Functor> {
    let mut found = None;
    for_each_isomorphism_over(p, q, |o, m| {
        found = Some((o.to_vec(), m.to_vec()));
        false
    });
    found.map(|(o, m)| {
        Functor::new(p.source().clone(), q.source().clone(), o, m)
            .expect("search returns a functor")
    })
}
