use crate::fincat::{Functor, Ob};

use super::{companion_of_functor, CorrMap, Correspondence};

/// A functor `r: C → D` with a chosen universal element `ξ₀(c) ∈ F(c, r c)`
/// and the induced isomorphism from the companion of `r` to `F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub functor: Functor,
    pub universal: Vec<usize>,
    pub iso: CorrMap,
}

/// The object of `C` at which no representing pair exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotRepresentable {
    pub object: Ob,
    /// Number of pairs `(d₀, ξ₀)` examined and rejected.
    pub candidates: usize,
}

/// Whether `v ↦ v·ξ₀` is a bijection `Map_D(d₀, d) → F(c, d)` for all `d`.
pub fn is_universal(f: &Correspondence, c: Ob, d0: Ob, xi0: usize) -> bool {
    let d_cat = f.target();
    d_cat.objects().all(|d| {
        let hom = d_cat.hom(d0, d);
        if hom.len() != f.size(c, d) {
            return false;
        }
        let mut seen = vec![false; hom.len()];
        hom.iter()
            .all(|&v| !std::mem::replace(&mut seen[f.act_right(c, v, xi0)], true))
    })
}

/// Decides whether `F: C ⇸ D` is isomorphic to the companion of a functor
/// `C → D`, and constructs that functor when it is.
pub fn representability_check(f: &Correspondence) -> Result<Representation, NotRepresentable> {
    let (c_cat, d_cat) = (f.source(), f.target());
    let mut objects = Vec::with_capacity(c_cat.num_objects());
    let mut universal = Vec::with_capacity(c_cat.num_objects());
    for c in c_cat.objects() {
        let mut candidates = 0;
        let found = d_cat.objects().find_map(|d0| {
            (0..f.size(c, d0)).find(|&xi0| {
                candidates += 1;
                is_universal(f, c, d0, xi0)
            })
            .map(|xi0| (d0, xi0))
        });
        let Some((d0, xi0)) = found else {
            return Err(NotRepresentable { object: c, candidates });
        };
        objects.push(d0);
        universal.push(xi0);
    }
    // r(u) for u: c' → c is the unique v: r c' → r c with v·ξ₀(c') = ξ₀(c)·u
    let morphisms = c_cat
        .morphisms()
        .map(|u| {
            let (c2, c) = (c_cat.src(u), c_cat.tgt(u));
            let target = f.act_left(u, objects[c], universal[c]);
            *d_cat
                .hom(objects[c2], objects[c])
                .iter()
                .find(|&&v| f.act_right(c2, v, universal[c2]) == target)
                .expect("universal element determines the lift")
        })
        .collect();
    let functor = Functor::new(c_cat.clone(), d_cat.clone(), objects.clone(), morphisms)
        .expect("lifts through universal elements are functorial");
    let companion = companion_of_functor(&functor);
    let components = c_cat
        .objects()
        .flat_map(|c| d_cat.objects().map(move |d| (c, d)))
        .map(|(c, d)| {
            d_cat
                .hom(objects[c], d)
                .iter()
                .map(|&v| f.act_right(c, v, universal[c]))
                .collect()
        })
        .collect();
    let iso = CorrMap::new(&companion, f, components).expect("universal elements induce a natural map");
    debug_assert!(iso.is_iso(f));
    Ok(Representation {
        functor,
        universal,
        iso,
    })
}
