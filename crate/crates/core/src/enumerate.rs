//! Exhaustive enumeration of small finite categories up to isomorphism.
//!
//! For each object count, hom-set sizes are distributed over ordered pairs of
//! objects (one representative per object relabeling), composition tables
//! are filled by backtracking with associativity pruning, and the results
//! are deduplicated by invariants followed by isomorphism search.

use std::collections::HashMap;
use std::sync::Arc;

use crate::fincat::{category_iso_search, FinCategory, Functor, Mor, Ob};
use crate::fincat::all_functors;

/// Every category with at most `max_morphisms` morphisms, one per
/// isomorphism class, ordered by morphism count.
pub fn categories_up_to_iso(max_morphisms: usize) -> Vec<Arc<FinCategory>> {
    (0..=max_morphisms).flat_map(categories_with_morphisms).collect()
}

/// One representative of each isomorphism class with exactly `m` morphisms.
pub fn categories_with_morphisms(m: usize) -> Vec<Arc<FinCategory>> {
    if m == 0 {
        return vec![Arc::new(FinCategory::empty())];
    }
    let mut classes: HashMap<Vec<Vec<usize>>, Vec<Arc<FinCategory>>> = HashMap::new();
    let mut order = Vec::new();
    for k in 1..=m {
        for counts in hom_distributions(k, m - k) {
            let shape = Shape::new(k, &counts);
            shape.fill(&mut |cat| {
                let key = invariants(&cat);
                let bucket = classes.entry(key).or_default();
                let cat = Arc::new(cat);
                if bucket.iter().all(|other| category_iso_search(other, &cat).is_none()) {
                    bucket.push(cat.clone());
                    order.push(cat);
                }
            });
        }
    }
    order
}

/// Every functor `D → C` for `D, C` in the given lists.
pub fn functor_corpus(sources: &[Arc<FinCategory>], targets: &[Arc<FinCategory>]) -> Vec<Functor> {
    let mut out = Vec::new();
    for d in sources {
        for c in targets {
            out.extend(all_functors(d, c));
        }
    }
    out
}

/// Matrices of non-identity hom-set sizes with total `r`, one per orbit under
/// relabeling of the `k` objects.
fn hom_distributions(k: usize, r: usize) -> Vec<Vec<Vec<usize>>> {
    let perms = permutations(k);
    let mut out = Vec::new();
    let mut flat = vec![0usize; k * k];
    fn rec(i: usize, left: usize, flat: &mut Vec<usize>, k: usize, perms: &[Vec<usize>], out: &mut Vec<Vec<Vec<usize>>>) {
        if i == flat.len() {
            if left == 0 && is_canonical(flat, k, perms) {
                out.push(flat.chunks(k).map(<[usize]>::to_vec).collect());
            }
            return;
        }
        for v in 0..=left {
            flat[i] = v;
            rec(i + 1, left - v, flat, k, perms, out);
        }
        flat[i] = 0;
    }
    rec(0, r, &mut flat, k, &perms, &mut out);
    out
}

fn is_canonical(flat: &[usize], k: usize, perms: &[Vec<usize>]) -> bool {
    perms.iter().all(|p| {
        let permuted: Vec<usize> = (0..k * k).map(|i| flat[p[i / k] * k + p[i % k]]).collect();
        permuted.as_slice() >= flat
    })
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for i in 0..k {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..=i).map(move |pos| {
                    let mut q = p.clone();
                    q.insert(pos, i);
                    q
                })
            })
            .collect();
    }
    out
}

/// Objects, identities and non-identity morphisms with fixed endpoints.
struct Shape {
    k: usize,
    /// `(src, tgt)` per morphism; the first `k` are identities.
    ends: Vec<(Ob, Ob)>,
    /// Morphisms per `(src, tgt)`, identities included.
    homs: Vec<Vec<Mor>>,
}

impl Shape {
    fn new(k: usize, counts: &[Vec<usize>]) -> Self {
        let mut ends: Vec<(Ob, Ob)> = (0..k).map(|a| (a, a)).collect();
        for (a, row) in counts.iter().enumerate() {
            for (b, &n) in row.iter().enumerate() {
                ends.extend(std::iter::repeat_n((a, b), n));
            }
        }
        let mut homs = vec![Vec::new(); k * k];
        for (f, &(a, b)) in ends.iter().enumerate() {
            homs[a * k + b].push(f);
        }
        Shape { k, ends, homs }
    }

    fn fill(&self, emit: &mut impl FnMut(FinCategory)) {
        let m = self.ends.len();
        let mut table = vec![None; m * m];
        for f in 0..m {
            let (a, b) = self.ends[f];
            table[f * m + a] = Some(f);
            table[b * m + f] = Some(f);
        }
        let pairs: Vec<(Mor, Mor)> = (self.k..m)
            .flat_map(|g| (self.k..m).map(move |f| (g, f)))
            .filter(|&(g, f)| self.ends[f].1 == self.ends[g].0)
            .collect();
        self.assign(0, &pairs, &mut table, emit);
    }

    fn assign(&self, i: usize, pairs: &[(Mor, Mor)], table: &mut Vec<Option<Mor>>, emit: &mut impl FnMut(FinCategory)) {
        let m = self.ends.len();
        if i == pairs.len() {
            let objects = (0..self.k).map(|a| a.to_string()).collect();
            let morphisms = self
                .ends
                .iter()
                .enumerate()
                .map(|(f, &(a, b))| (if f < self.k { format!("id{a}") } else { format!("m{}", f - self.k) }, a, b))
                .collect();
            let cat = FinCategory::build(objects, morphisms, (0..self.k).collect(), |g, f| table[g * m + f])
                .expect("associative tables define categories");
            emit(cat);
            return;
        }
        let (g, f) = pairs[i];
        let candidates = &self.homs[self.ends[f].0 * self.k + self.ends[g].1];
        for &h in candidates {
            table[g * m + f] = Some(h);
            if self.associative_so_far(table) {
                self.assign(i + 1, pairs, table, emit);
            }
        }
        table[g * m + f] = None;
    }

    fn associative_so_far(&self, table: &[Option<Mor>]) -> bool {
        let m = self.ends.len();
        for f in 0..m {
            for g in 0..m {
                let Some(gf) = table[g * m + f] else { continue };
                for h in 0..m {
                    let Some(hg) = table[h * m + g] else { continue };
                    if let (Some(a), Some(b)) = (table[h * m + gf], table[hg * m + f]) {
                        if a != b {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Isomorphism invariants: hom-size profile and, per morphism, endo and
/// idempotence flags with the number of morphisms it absorbs on each side.
fn invariants(c: &FinCategory) -> Vec<Vec<usize>> {
    let mut per_morphism: Vec<Vec<usize>> = c
        .morphisms()
        .map(|f| {
            let (a, b) = (c.src(f), c.tgt(f));
            let absorbs_left = c.into_object(a).filter(|&g| c.compose(f, g) == f).count();
            let absorbs_right = c.out_of(b).filter(|&g| c.compose(g, f) == f).count();
            let idempotent = a == b && c.compose(f, f) == f;
            vec![
                usize::from(c.is_identity(f)),
                usize::from(a == b),
                usize::from(idempotent),
                c.hom(a, b).len(),
                absorbs_left,
                absorbs_right,
            ]
        })
        .collect();
    per_morphism.sort_unstable();
    let mut objects: Vec<Vec<usize>> = c
        .objects()
        .map(|a| {
            let mut row: Vec<usize> = c.objects().map(|b| c.hom(a, b).len()).collect();
            row.sort_unstable();
            row.push(c.out_of(a).count());
            row.push(c.into_object(a).count());
            row
        })
        .collect();
    objects.sort_unstable();
    per_morphism.extend(objects);
    per_morphism
}
