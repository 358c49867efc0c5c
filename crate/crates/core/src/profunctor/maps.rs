use crate::fincat::Ob;

use super::{Correspondence, ProfunctorError};

/// A natural map between parallel correspondences, one function per
/// `(c, d)`, indexed by `c * |Ob D| + d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrMap {
    nd: usize,
    components: Vec<Vec<usize>>,
}

impl CorrMap {
    pub fn new(from: &Correspondence, to: &Correspondence, components: Vec<Vec<usize>>) -> Result<Self, ProfunctorError> {
        let map = CorrMap {
            nd: from.target().num_objects(),
            components,
        };
        map.check(from, to)?;
        Ok(map)
    }

    pub fn identity(f: &Correspondence) -> Self {
        let nd = f.target().num_objects();
        let components = f
            .source()
            .objects()
            .flat_map(|c| (0..nd).map(move |d| (c, d)))
            .map(|(c, d)| (0..f.size(c, d)).collect())
            .collect();
        CorrMap { nd, components }
    }

    pub fn check(&self, from: &Correspondence, to: &Correspondence) -> Result<(), ProfunctorError> {
        if !from.is_parallel(to) {
            return Err(ProfunctorError::NotParallel);
        }
        let (c_cat, d_cat) = (from.source(), from.target());
        if self.components.len() != c_cat.num_objects() * d_cat.num_objects() {
            return Err(ProfunctorError::Shape {
                expected: c_cat.num_objects() * d_cat.num_objects(),
                got: self.components.len(),
            });
        }
        for c in c_cat.objects() {
            for d in d_cat.objects() {
                let comp = self.component(c, d);
                if comp.len() != from.size(c, d) || comp.iter().any(|&y| y >= to.size(c, d)) {
                    return Err(ProfunctorError::ComponentShape {
                        c: c_cat.object_name(c).into(),
                        d: d_cat.object_name(d).into(),
                    });
                }
            }
        }
        for u in c_cat.morphisms() {
            for d in d_cat.objects() {
                for x in 0..from.size(c_cat.tgt(u), d) {
                    let a = self.apply(c_cat.src(u), d, from.act_left(u, d, x));
                    let b = to.act_left(u, d, self.apply(c_cat.tgt(u), d, x));
                    if a != b {
                        return Err(ProfunctorError::NotEquivariant {
                            side: "left",
                            morphism: c_cat.morphism_name(u).into(),
                        });
                    }
                }
            }
        }
        for c in c_cat.objects() {
            for v in d_cat.morphisms() {
                for x in 0..from.size(c, d_cat.src(v)) {
                    let a = self.apply(c, d_cat.tgt(v), from.act_right(c, v, x));
                    let b = to.act_right(c, v, self.apply(c, d_cat.src(v), x));
                    if a != b {
                        return Err(ProfunctorError::NotEquivariant {
                            side: "right",
                            morphism: d_cat.morphism_name(v).into(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn component(&self, c: Ob, d: Ob) -> &[usize] {
        &self.components[c * self.nd + d]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn apply(&self, c: Ob, d: Ob, x: usize) -> usize {
        self.components[c * self.nd + d][x]
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &CorrMap) -> CorrMap {
        CorrMap {
            nd: self.nd,
            components: inner
                .components
                .iter()
                .zip(&self.components)
                .map(|(a, b)| a.iter().map(|&x| b[x]).collect())
                .collect(),
        }
    }

    /// Whether every component is a bijection onto the matching component of `to`.
    pub fn is_iso(&self, to: &Correspondence) -> bool {
        self.components.iter().enumerate().all(|(k, comp)| {
            let size = to.size(k / self.nd, k % self.nd);
            let mut seen = vec![false; size];
            comp.len() == size && comp.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
        })
    }

    /// Inverse of a bijective map.
    pub fn inverse(&self) -> CorrMap {
        CorrMap {
            nd: self.nd,
            components: self
                .components
                .iter()
                .map(|comp| {
                    let mut inv = vec![0; comp.len()];
                    for (x, &y) in comp.iter().enumerate() {
                        inv[y] = x;
                    }
                    inv
                })
                .collect(),
        }
    }
}

struct IsoSearch<'a> {
    f: &'a Correspondence,
    g: &'a Correspondence,
    nd: usize,
    /// flat index of `(c, d, x)` in `F` / `G`
    offsets_f: Vec<usize>,
    offsets_g: Vec<usize>,
    forward: Vec<usize>,
    backward: Vec<usize>,
    trail: Vec<usize>,
    signatures_f: Vec<Vec<bool>>,
    signatures_g: Vec<Vec<bool>>,
}

const UNSET: usize = usize::MAX;

impl<'a> IsoSearch<'a> {
    fn new(f: &'a Correspondence, g: &'a Correspondence) -> Self {
        let nd = f.target().num_objects();
        let offsets = |h: &Correspondence| {
            let mut out = vec![0];
            for c in h.source().objects() {
                for d in h.target().objects() {
                    out.push(out.last().unwrap() + h.size(c, d));
                }
            }
            out
        };
        let offsets_f = offsets(f);
        let offsets_g = offsets(g);
        let total = *offsets_f.last().unwrap();
        let mut search = IsoSearch {
            f,
            g,
            nd,
            offsets_f,
            offsets_g,
            forward: vec![UNSET; total],
            backward: vec![UNSET; total],
            trail: Vec::new(),
            signatures_f: Vec::new(),
            signatures_g: Vec::new(),
        };
        search.signatures_f = search.signatures(f);
        search.signatures_g = search.signatures(g);
        search
    }

    /// Which endomorphism actions fix each element.
    fn signatures(&self, h: &Correspondence) -> Vec<Vec<bool>> {
        let (c_cat, d_cat) = (h.source(), h.target());
        let mut out = Vec::new();
        for c in c_cat.objects() {
            for d in d_cat.objects() {
                for x in 0..h.size(c, d) {
                    let mut sig: Vec<bool> = c_cat.hom(c, c).iter().map(|&u| h.act_left(u, d, x) == x).collect();
                    sig.extend(d_cat.hom(d, d).iter().map(|&v| h.act_right(c, v, x) == x));
                    out.push(sig);
                }
            }
        }
        out
    }

    fn locate(&self, flat: usize) -> (Ob, Ob, usize) {
        let k = self.offsets_f.partition_point(|&o| o <= flat) - 1;
        (k / self.nd, k % self.nd, flat - self.offsets_f[k])
    }

    fn flat_f(&self, c: Ob, d: Ob, x: usize) -> usize {
        self.offsets_f[c * self.nd + d] + x
    }

    fn flat_g(&self, c: Ob, d: Ob, y: usize) -> usize {
        self.offsets_g[c * self.nd + d] + y
    }

    /// Assigns `a ↦ b` and closes under all actions; false on conflict.
    fn assign(&mut self, a: usize, b: usize) -> bool {
        let mut queue = vec![(a, b)];
        while let Some((a, b)) = queue.pop() {
            if self.forward[a] == b {
                continue;
            }
            if self.forward[a] != UNSET || self.backward[b] != UNSET || self.signatures_f[a] != self.signatures_g[b] {
                return false;
            }
            self.forward[a] = b;
            self.backward[b] = a;
            self.trail.push(a);
            let (c, d, x) = self.locate(a);
            let y = b - self.offsets_g[c * self.nd + d];
            let (c_cat, d_cat) = (self.f.source(), self.f.target());
            for u in c_cat.into_object(c) {
                let c2 = c_cat.src(u);
                queue.push((
                    self.flat_f(c2, d, self.f.act_left(u, d, x)),
                    self.flat_g(c2, d, self.g.act_left(u, d, y)),
                ));
            }
            for v in d_cat.out_of(d) {
                let d2 = d_cat.tgt(v);
                queue.push((
                    self.flat_f(c, d2, self.f.act_right(c, v, x)),
                    self.flat_g(c, d2, self.g.act_right(c, v, y)),
                ));
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let a = self.trail.pop().unwrap();
            self.backward[self.forward[a]] = UNSET;
            self.forward[a] = UNSET;
        }
    }

    fn solve(&mut self, from: usize) -> bool {
        let Some(a) = (from..self.forward.len()).find(|&a| self.forward[a] == UNSET) else {
            return true;
        };
        let (c, d, _) = self.locate(a);
        for y in 0..self.g.size(c, d) {
            let b = self.flat_g(c, d, y);
            if self.backward[b] != UNSET {
                continue;
            }
            let mark = self.trail.len();
            if self.assign(a, b) && self.solve(a + 1) {
                return true;
            }
            self.undo(mark);
        }
        false
    }
}

/// An equivariant componentwise bijection `F → G`, if one exists.
pub fn corr_iso_search(f: &Correspondence, g: &Correspondence) -> Option<CorrMap> {
    if !f.is_parallel(g) {
        return None;
    }
    let (c_cat, d_cat) = (f.source(), f.target());
    if c_cat
        .objects()
        .any(|c| d_cat.objects().any(|d| f.size(c, d) != g.size(c, d)))
    {
        return None;
    }
    let mut search = IsoSearch::new(f, g);
    if !search.solve(0) {
        return None;
    }
    let components = c_cat
        .objects()
        .flat_map(|c| d_cat.objects().map(move |d| (c, d)))
        .map(|(c, d)| {
            (0..f.size(c, d))
                .map(|x| search.forward[search.flat_f(c, d, x)] - search.offsets_g[c * search.nd + d])
                .collect()
        })
        .collect();
    let map = CorrMap::new(f, g, components).ok()?;
    map.is_iso(g).then_some(map)
}
