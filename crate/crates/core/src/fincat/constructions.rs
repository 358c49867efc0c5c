use std::collections::HashMap;
use std::sync::Arc;

use super::{FinCategory, FincatError, Functor, Mor, Ob};

/// The fiber `D_c` of `p: D -> C`, with its inclusion into `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fiber {
    pub category: FinCategory,
    /// `objects[i]` is the object of `D` for fiber object `i`.
    pub objects: Vec<Ob>,
    pub morphisms: Vec<Mor>,
}

impl Fiber {
    pub fn local_object(&self, x: Ob) -> Option<Ob> {
        self.objects.iter().position(|&y| y == x)
    }

    pub fn local_morphism(&self, f: Mor) -> Option<Mor> {
        self.morphisms.iter().position(|&g| g == f)
    }
}

pub fn fiber(p: &Functor, c: Ob) -> Result<Fiber, FincatError> {
    let base = p.target();
    if c >= base.num_objects() {
        return Err(FincatError::UnknownObject(c));
    }
    let d = p.source();
    let objects: Vec<Ob> = d.objects().filter(|&x| p.on_object(x) == c).collect();
    let id_c = base.identity(c);
    let morphisms: Vec<Mor> = d
        .morphisms()
        .filter(|&f| p.on_morphism(f) == id_c)
        .collect();
    let mut local_obj = HashMap::new();
    for (i, &x) in objects.iter().enumerate() {
        local_obj.insert(x, i);
    }
    let mut local_mor = HashMap::new();
    for (i, &f) in morphisms.iter().enumerate() {
        local_mor.insert(f, i);
    }
    let category = FinCategory::build(
        objects.iter().map(|&x| d.object_name(x).to_string()).collect(),
        morphisms
            .iter()
            .map(|&f| {
                (
                    d.morphism_name(f).to_string(),
                    local_obj[&d.src(f)],
                    local_obj[&d.tgt(f)],
                )
            })
            .collect(),
        objects.iter().map(|&x| local_mor[&d.identity(x)]).collect(),
        |g, f| local_mor.get(&d.compose(morphisms[g], morphisms[f])).copied(),
    )
    .expect("fiber of a functor is a subcategory");
    Ok(Fiber {
        category,
        objects,
        morphisms,
    })
}

/// `{ u: x -> y | p(u) = f }`.
pub fn map_over(p: &Functor, f: Mor, x: Ob, y: Ob) -> Result<Vec<Mor>, FincatError> {
    let base = p.target();
    let d = p.source();
    if f >= base.num_morphisms() {
        return Err(FincatError::UnknownMorphism(f));
    }
    if x >= d.num_objects() {
        return Err(FincatError::UnknownObject(x));
    }
    if y >= d.num_objects() {
        return Err(FincatError::UnknownObject(y));
    }
    if p.on_object(x) != base.src(f) || p.on_object(y) != base.tgt(f) {
        return Err(FincatError::FiberMismatch);
    }
    Ok(d.hom(x, y)
        .iter()
        .copied()
        .filter(|&u| p.on_morphism(u) == f)
        .collect())
}

/// A composable chain in `D` starting at `start`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lift {
    pub start: Ob,
    pub arrows: Vec<Mor>,
}

/// All lifts of a composable spine `f_1, ..., f_k` starting at `start`
/// (which is only consulted when the spine is empty).
pub fn chains_over(p: &Functor, start: Ob, spine: &[Mor]) -> Result<Vec<Lift>, FincatError> {
    let base = p.target();
    let d = p.source();
    for (i, w) in spine.windows(2).enumerate() {
        if base.tgt(w[0]) != base.src(w[1]) {
            return Err(FincatError::NonComposableSpine(i + 1));
        }
    }
    let c0 = match spine.first() {
        Some(&f) => base.src(f),
        None => {
            if start >= base.num_objects() {
                return Err(FincatError::UnknownObject(start));
            }
            start
        }
    };
    let mut partial: Vec<Lift> = d
        .objects()
        .filter(|&x| p.on_object(x) == c0)
        .map(|x| Lift {
            start: x,
            arrows: Vec::new(),
        })
        .collect();
    for &f in spine {
        let mut next = Vec::new();
        for lift in &partial {
            let end = lift.arrows.last().map_or(lift.start, |&u| d.tgt(u));
            for u in d.out_of(end) {
                if p.on_morphism(u) == f {
                    let mut arrows = lift.arrows.clone();
                    arrows.push(u);
                    next.push(Lift {
                        start: lift.start,
                        arrows,
                    });
                }
            }
        }
        partial = next;
    }
    Ok(partial)
}

/// Objects are the morphisms `a: d' -> d`; a morphism `a => b` (with
/// `b: e' -> e`) is a pair `(u: e' -> d', v: d -> e)` with `v ∘ a ∘ u = b`.
/// Composition: `(u2, v2) ∘ (u1, v1) = (u1 ∘ u2, v2 ∘ v1)`.
pub fn twisted_arrow(c: &FinCategory) -> FinCategory {
    let objects: Vec<String> = c.morphism_names().to_vec();
    let mut morphisms = Vec::new();
    let mut pairs = Vec::new();
    let mut index = HashMap::new();
    for a in c.morphisms() {
        for b in c.morphisms() {
            for &u in c.hom(c.src(b), c.src(a)) {
                for &v in c.hom(c.tgt(a), c.tgt(b)) {
                    if c.compose(v, c.compose(a, u)) == b {
                        index.insert((a, u, v), morphisms.len());
                        morphisms.push((
                            format!("{}:({},{})", c.morphism_name(a), c.morphism_name(u), c.morphism_name(v)),
                            a,
                            b,
                        ));
                        pairs.push((u, v));
                    }
                }
            }
        }
    }
    let identity = c
        .morphisms()
        .map(|a| index[&(a, c.identity(c.src(a)), c.identity(c.tgt(a)))])
        .collect();
    let sources: Vec<Mor> = morphisms.iter().map(|(_, a, _)| *a).collect();
    FinCategory::build(objects, morphisms, identity, |g, f| {
        let (u1, v1) = pairs[f];
        let (u2, v2) = pairs[g];
        index
            .get(&(sources[f], c.compose(u1, u2), c.compose(v2, v1)))
            .copied()
    })
    .expect("twisted arrow category")
}

pub fn opposite(c: &FinCategory) -> FinCategory {
    FinCategory::build(
        c.object_names().to_vec(),
        c.morphisms()
            .map(|f| (c.morphism_name(f).to_string(), c.tgt(f), c.src(f)))
            .collect(),
        c.objects().map(|x| c.identity(x)).collect(),
        |g, f| c.try_compose(f, g),
    )
    .expect("opposite category")
}

pub fn product(a: &FinCategory, b: &FinCategory) -> FinCategory {
    let nb = b.num_objects();
    let mb = b.num_morphisms();
    let mut objects = Vec::new();
    for x in a.objects() {
        for y in b.objects() {
            objects.push(format!("({},{})", a.object_name(x), b.object_name(y)));
        }
    }
    let mut morphisms = Vec::new();
    for f in a.morphisms() {
        for g in b.morphisms() {
            morphisms.push((
                format!("({},{})", a.morphism_name(f), b.morphism_name(g)),
                a.src(f) * nb + b.src(g),
                a.tgt(f) * nb + b.tgt(g),
            ));
        }
    }
    let identity = a
        .objects()
        .flat_map(|x| b.objects().map(move |y| (x, y)))
        .map(|(x, y)| a.identity(x) * mb + b.identity(y))
        .collect();
    FinCategory::build(objects, morphisms, identity, |g, f| {
        Some(a.compose(g / mb, f / mb) * mb + b.compose(g % mb, f % mb))
    })
    .expect("product category")
}

/// Strict pullback `A ×_C B` with its two projections.
#[derive(Debug, Clone)]
pub struct PullbackCategory {
    pub category: Arc<FinCategory>,
    pub left: Functor,
    pub right: Functor,
}

pub fn pullback_category(f: &Functor, g: &Functor) -> Result<PullbackCategory, FincatError> {
    if f.target() != g.target() {
        return Err(FincatError::CodomainMismatch);
    }
    let a = f.source();
    let b = g.source();
    let mut objects = Vec::new();
    let mut obj_pairs = Vec::new();
    let mut obj_index = HashMap::new();
    for x in a.objects() {
        for y in b.objects() {
            if f.on_object(x) == g.on_object(y) {
                obj_index.insert((x, y), objects.len());
                objects.push(format!("({},{})", a.object_name(x), b.object_name(y)));
                obj_pairs.push((x, y));
            }
        }
    }
    let mut morphisms = Vec::new();
    let mut mor_pairs = Vec::new();
    let mut mor_index = HashMap::new();
    for u in a.morphisms() {
        for v in b.morphisms() {
            if f.on_morphism(u) == g.on_morphism(v) {
                mor_index.insert((u, v), morphisms.len());
                morphisms.push((
                    format!("({},{})", a.morphism_name(u), b.morphism_name(v)),
                    obj_index[&(a.src(u), b.src(v))],
                    obj_index[&(a.tgt(u), b.tgt(v))],
                ));
                mor_pairs.push((u, v));
            }
        }
    }
    let identity = obj_pairs
        .iter()
        .map(|&(x, y)| mor_index[&(a.identity(x), b.identity(y))])
        .collect();
    let category = Arc::new(
        FinCategory::build(objects, morphisms, identity, |h, k| {
            let (u1, v1) = mor_pairs[k];
            let (u2, v2) = mor_pairs[h];
            mor_index.get(&(a.compose(u2, u1), b.compose(v2, v1))).copied()
        })
        .expect("strict pullback of categories"),
    );
    let left = Functor::new(
        category.clone(),
        a.clone(),
        obj_pairs.iter().map(|p| p.0).collect(),
        mor_pairs.iter().map(|p| p.0).collect(),
    )
    .expect("pullback projection");
    let right = Functor::new(
        category.clone(),
        b.clone(),
        obj_pairs.iter().map(|p| p.1).collect(),
        mor_pairs.iter().map(|p| p.1).collect(),
    )
    .expect("pullback projection");
    Ok(PullbackCategory {
        category,
        left,
        right,
    })
}

/// Every functor `source -> target`, by backtracking over object images and
/// then hom-set images with composition checks. Intended for small inputs.
pub fn all_functors(source: &Arc<FinCategory>, target: &Arc<FinCategory>) -> Vec<Functor> {
    let s = source.as_ref();
    let t = target.as_ref();
    let mut out = Vec::new();
    let mut obj = vec![0usize; s.num_objects()];
    // non-identity morphisms are assigned in order; identities are forced
    let free: Vec<Mor> = s.morphisms().filter(|&f| !s.is_identity(f)).collect();
    fn objects_rec(
        s: &FinCategory,
        t: &FinCategory,
        i: usize,
        obj: &mut Vec<Ob>,
        free: &[Mor],
        out: &mut Vec<(Vec<Ob>, Vec<Mor>)>,
    ) {
        if i == s.num_objects() {
            let mut mor = vec![usize::MAX; s.num_morphisms()];
            for x in s.objects() {
                mor[s.identity(x)] = t.identity(obj[x]);
            }
            morphisms_rec(s, t, 0, obj, free, &mut mor, out);
            return;
        }
        for y in t.objects() {
            obj[i] = y;
            objects_rec(s, t, i + 1, obj, free, out);
        }
    }
    fn morphisms_rec(
        s: &FinCategory,
        t: &FinCategory,
        k: usize,
        obj: &[Ob],
        free: &[Mor],
        mor: &mut Vec<Mor>,
        out: &mut Vec<(Vec<Ob>, Vec<Mor>)>,
    ) {
        if k == free.len() {
            out.push((obj.to_vec(), mor.clone()));
            return;
        }
        let f = free[k];
        for &g in t.hom(obj[s.src(f)], obj[s.tgt(f)]) {
            mor[f] = g;
            if consistent(s, t, f, mor) {
                morphisms_rec(s, t, k + 1, obj, free, mor, out);
            }
        }
        mor[f] = usize::MAX;
    }
    fn consistent(s: &FinCategory, t: &FinCategory, f: Mor, mor: &[Mor]) -> bool {
        let check = |a: Mor, b: Mor| {
            // a then b
            let c = s.compose(b, a);
            let (ia, ib, ic) = (mor[a], mor[b], mor[c]);
            ia == usize::MAX || ib == usize::MAX || ic == usize::MAX || t.compose(ib, ia) == ic
        };
        for g in s.out_of(s.tgt(f)) {
            if !check(f, g) {
                return false;
            }
        }
        for g in s.into_object(s.src(f)) {
            if !check(g, f) {
                return false;
            }
        }
        // f may appear as a composite
        for (a, b) in s.composable_pairs() {
            if s.compose(b, a) == f && !check(a, b) {
                return false;
            }
        }
        true
    }
    let mut raw = Vec::new();
    objects_rec(s, t, 0, &mut obj, &free, &mut raw);
    for (o, m) in raw {
        out.push(
            Functor::new(source.clone(), target.clone(), o, m).expect("enumerated functor"),
        );
    }
    out
}
