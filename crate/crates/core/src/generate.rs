//! Seeded random categories and functors.
//!
//! Categories are free categories on random acyclic graphs, quotiented by
//! randomly chosen commuting relations between parallel paths and closed
//! under whiskering. Functors are built the same way over a base: every
//! vertex and edge is labeled by an object or morphism of the base, and only
//! paths with equal images are identified, so the labeling descends to a
//! functor on the quotient.

use std::collections::HashMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::fincat::{product, FinCategory, Functor, Mor, Ob};
use crate::profunctor::Correspondence;
use crate::union_find::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_relations: usize,
    pub max_morphisms: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            max_vertices: 4,
            max_edges: 5,
            max_relations: 3,
            max_morphisms: 12,
        }
    }
}

impl GenParams {
    pub fn with_max_morphisms(mut self, m: usize) -> Self {
        self.max_morphisms = m;
        self
    }
}

struct Graph {
    vertex_label: Vec<Ob>,
    /// `(source, target, label)`
    edges: Vec<(usize, usize, Mor)>,
}

/// Quotient of the free category on `graph` together with its labeling
/// functor to `base`, or `None` if it exceeds `max_morphisms`.
fn quotient_over(
    base: &Arc<FinCategory>,
    graph: &Graph,
    rng: &mut impl Rng,
    max_relations: usize,
    max_morphisms: usize,
) -> Option<Functor> {
    let nv = graph.vertex_label.len();
    // all paths, as edge sequences; identity paths first
    let mut paths: Vec<(usize, Vec<usize>)> = (0..nv).map(|v| (v, Vec::new())).collect();
    let mut frontier: Vec<usize> = (0..nv).collect();
    let path_end = |paths: &Vec<(usize, Vec<usize>)>, i: usize| -> usize {
        let (s, es) = &paths[i];
        es.last().map_or(*s, |&e| graph.edges[e].1)
    };
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for i in frontier {
            let end = path_end(&paths, i);
            for (e, edge) in graph.edges.iter().enumerate() {
                if edge.0 == end {
                    let mut es = paths[i].1.clone();
                    es.push(e);
                    next.push(paths.len());
                    paths.push((paths[i].0, es));
                    if paths.len() > 8 * max_morphisms + 64 {
                        return None;
                    }
                }
            }
        }
        frontier = next;
    }
    let index: HashMap<(usize, Vec<usize>), usize> = paths
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    let image: Vec<Mor> = paths
        .iter()
        .map(|(s, es)| {
            es.iter().fold(base.identity(graph.vertex_label[*s]), |acc, &e| {
                base.compose(graph.edges[e].2, acc)
            })
        })
        .collect();
    let ends: Vec<(usize, usize)> = (0..paths.len())
        .map(|i| (paths[i].0, path_end(&paths, i)))
        .collect();
    let mut uf = UnionFind::new(paths.len());
    let relations = rng.gen_range(0..=max_relations);
    for _ in 0..relations {
        let i = rng.gen_range(0..paths.len());
        let candidates: Vec<usize> = (0..paths.len())
            .filter(|&j| j != i && ends[j] == ends[i] && image[j] == image[i])
            .collect();
        if let Some(&j) = candidates.choose(rng) {
            uf.union(i, j);
        }
    }
    // congruence closure under whiskering by single edges
    loop {
        let mut changed = false;
        for (e, edge) in graph.edges.iter().enumerate() {
            let mut right: HashMap<usize, usize> = HashMap::new();
            let mut left: HashMap<usize, usize> = HashMap::new();
            for (i, (s, es)) in paths.iter().enumerate() {
                if ends[i].1 == edge.0 {
                    let mut ext = es.clone();
                    ext.push(e);
                    let j = index[&(*s, ext)];
                    let class = uf.find(i);
                    match right.get(&class) {
                        Some(&k) => changed |= uf.union(k, j),
                        None => {
                            right.insert(class, j);
                        }
                    }
                }
                if *s == edge.1 {
                    let mut ext = vec![e];
                    ext.extend(es.iter().copied());
                    let j = index[&(edge.0, ext)];
                    let class = uf.find(i);
                    match left.get(&class) {
                        Some(&k) => changed |= uf.union(k, j),
                        None => {
                            left.insert(class, j);
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let (class_of, reps) = uf.canonical_classes();
    if reps.len() > max_morphisms {
        return None;
    }
    let objects: Vec<String> = (0..nv).map(|v| format!("x{v}")).collect();
    let morphisms: Vec<(String, usize, usize)> = reps
        .iter()
        .enumerate()
        .map(|(k, &r)| {
            let name = if paths[r].1.is_empty() {
                format!("id_x{}", paths[r].0)
            } else {
                format!("m{k}")
            };
            (name, ends[r].0, ends[r].1)
        })
        .collect();
    let identity = (0..nv).map(|v| class_of[v]).collect();
    let category = FinCategory::build(objects, morphisms, identity, |g, f| {
        let (s, es) = &paths[reps[f]];
        let mut cat = es.clone();
        cat.extend(paths[reps[g]].1.iter().copied());
        index.get(&(*s, cat)).map(|&i| class_of[i])
    })
    .expect("quotient of a free category");
    let category = Arc::new(category);
    Functor::new(
        category,
        base.clone(),
        graph.vertex_label.clone(),
        reps.iter().map(|&r| image[r]).collect(),
    )
    .ok()
}

fn random_graph_over(base: &FinCategory, rng: &mut impl Rng, params: &GenParams) -> Graph {
    let nv = rng.gen_range(1..=params.max_vertices.max(1));
    let vertex_label: Vec<Ob> = (0..nv)
        .map(|_| rng.gen_range(0..base.num_objects()))
        .collect();
    let ne = rng.gen_range(0..=params.max_edges);
    let mut edges = Vec::new();
    for _ in 0..ne {
        let i = rng.gen_range(0..nv);
        let j = rng.gen_range(0..nv);
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        if i == j {
            continue;
        }
        let hom = base.hom(vertex_label[i], vertex_label[j]);
        if let Some(&f) = hom.choose(rng) {
            edges.push((i, j, f));
        }
    }
    Graph {
        vertex_label,
        edges,
    }
}

/// A random functor into a fixed base.
pub fn random_functor_over(
    base: &Arc<FinCategory>,
    rng: &mut impl Rng,
    params: &GenParams,
) -> Functor {
    assert!(base.num_objects() > 0, "cannot generate over an empty base");
    loop {
        let graph = random_graph_over(base, rng, params);
        if let Some(p) =
            quotient_over(base, &graph, rng, params.max_relations, params.max_morphisms)
        {
            return p;
        }
    }
}

pub fn random_category(rng: &mut impl Rng, params: &GenParams) -> Arc<FinCategory> {
    let base = Arc::new(FinCategory::terminal());
    random_functor_over(&base, rng, params).source().clone()
}

/// Small monoids used to add nontrivial endomorphisms.
pub fn small_monoids() -> Vec<FinCategory> {
    vec![
        FinCategory::cyclic_group(2),
        FinCategory::monoid(vec!["1".into(), "e".into()], 0, |g, f| g.max(f))
            .expect("idempotent monoid"),
    ]
}

/// A random functor drawn from a mixture: labeled-graph quotients over a
/// random base, products with a small monoid projected to the base,
/// identities, and functors to the terminal category.
pub fn random_functor(rng: &mut impl Rng, params: &GenParams) -> Functor {
    loop {
        let base_params = GenParams {
            max_vertices: params.max_vertices.min(3),
            max_edges: params.max_edges.min(4),
            max_relations: params.max_relations,
            max_morphisms: params.max_morphisms.min(8),
        };
        let kind = rng.gen_range(0..10);
        let p = match kind {
            0 => {
                let c = random_category(rng, params);
                Functor::identity(c)
            }
            1 => {
                let c = random_category(rng, params);
                Functor::to_terminal(c)
            }
            2 => {
                let base = random_category(rng, &base_params);
                let monoids = small_monoids();
                let m = monoids.choose(rng).expect("monoid list");
                let total = Arc::new(product(&base, m));
                if total.num_morphisms() > params.max_morphisms {
                    continue;
                }
                let mm = m.num_morphisms();
                let objects = (0..total.num_objects()).collect();
                let morphisms = (0..total.num_morphisms()).map(|f| f / mm).collect();
                Functor::new(total, base, objects, morphisms).expect("projection")
            }
            _ => {
                let base = random_category(rng, &base_params);
                random_functor_over(&base, rng, params)
            }
        };
        if p.source().num_morphisms() <= params.max_morphisms {
            return p;
        }
    }
}

/// A random correspondence `C ⇸ D`: a quotient of a coproduct of
/// representables `(c, d) ↦ Map_C(c, c₀) × Map_D(d₀, d)` by a random
/// relation closed under both actions. Gives up on generators that would
/// push the total element count past `max_total`.
pub fn random_correspondence(
    c_cat: &Arc<FinCategory>,
    d_cat: &Arc<FinCategory>,
    rng: &mut impl Rng,
    max_total: usize,
    max_generators: usize,
) -> Correspondence {
    let nd = d_cat.num_objects();
    // elements are (generator, a: c → c₀, b: d₀ → d)
    let mut elements: Vec<(usize, Mor, Mor)> = Vec::new();
    let mut generators = Vec::new();
    if c_cat.num_objects() > 0 && nd > 0 {
        for _ in 0..rng.gen_range(0..=max_generators) {
            let c0 = rng.gen_range(0..c_cat.num_objects());
            let d0 = rng.gen_range(0..nd);
            let count = c_cat.into_object(c0).count() * d_cat.out_of(d0).count();
            if elements.len() + count > max_total {
                continue;
            }
            let k = generators.len();
            generators.push((c0, d0));
            for a in c_cat.into_object(c0) {
                for b in d_cat.out_of(d0) {
                    elements.push((k, a, b));
                }
            }
        }
    }
    let index: HashMap<(usize, Mor, Mor), usize> =
        elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let at = |&(_, a, b): &(usize, Mor, Mor)| (c_cat.src(a), d_cat.tgt(b));
    let mut uf = UnionFind::new(elements.len());
    let relations = rng.gen_range(0..=elements.len().min(3));
    for _ in 0..relations {
        let x = rng.gen_range(0..elements.len());
        let same: Vec<usize> = (0..elements.len())
            .filter(|&y| at(&elements[y]) == at(&elements[x]))
            .collect();
        let &y = same.choose(rng).expect("x itself qualifies");
        uf.union(x, y);
    }
    // congruence closure under single actions
    loop {
        let mut changed = false;
        let mut first: HashMap<usize, usize> = HashMap::new();
        for x in 0..elements.len() {
            let root = uf.find(x);
            let y = *first.entry(root).or_insert(x);
            if y == x {
                continue;
            }
            let (kx, ax, bx) = elements[x];
            let (ky, ay, by) = elements[y];
            let (c, d) = at(&elements[x]);
            for u in c_cat.into_object(c) {
                let ix = index[&(kx, c_cat.compose(ax, u), bx)];
                let iy = index[&(ky, c_cat.compose(ay, u), by)];
                changed |= uf.union(ix, iy);
            }
            for v in d_cat.out_of(d) {
                let ix = index[&(kx, ax, d_cat.compose(v, bx))];
                let iy = index[&(ky, ay, d_cat.compose(v, by))];
                changed |= uf.union(ix, iy);
            }
        }
        if !changed {
            break;
        }
    }
    let (class_of, reps) = uf.canonical_classes();
    let mut names = vec![Vec::new(); c_cat.num_objects() * nd];
    let mut local = vec![0usize; reps.len()];
    for (k, &r) in reps.iter().enumerate() {
        let (c, d) = at(&elements[r]);
        let slot = &mut names[c * nd + d];
        local[k] = slot.len();
        let (g, a, b) = elements[r];
        slot.push(format!(
            "g{g}:{}|{}",
            c_cat.morphism_name(a),
            d_cat.morphism_name(b)
        ));
    }
    // local index -> class, per slot
    let mut members: HashMap<(Ob, Ob, usize), usize> = HashMap::new();
    for (k, &r) in reps.iter().enumerate() {
        let (c, d) = at(&elements[r]);
        members.insert((c, d, local[k]), r);
    }
    Correspondence::from_fn(
        c_cat.clone(),
        d_cat.clone(),
        names,
        |u, d, x| {
            let (g, a, b) = elements[members[&(c_cat.tgt(u), d, x)]];
            local[class_of[index[&(g, c_cat.compose(a, u), b)]]]
        },
        |c, v, x| {
            let (g, a, b) = elements[members[&(c, d_cat.src(v), x)]];
            local[class_of[index[&(g, a, d_cat.compose(v, b))]]]
        },
    )
    .expect("quotients of representables are correspondences")
}


/// A random functor whose base has composable pairs of non-identity
/// morphisms, so that factorization conditions are exercised.
pub fn random_functor_over_composites(rng: &mut impl Rng, params: &GenParams) -> Functor {
    let base_params = GenParams {
        max_vertices: params.max_vertices.min(3),
        max_edges: params.max_edges.min(4),
        max_relations: params.max_relations,
        max_morphisms: params.max_morphisms.min(8),
    };
    let base = match rng.gen_range(0..3) {
        0 => Arc::new(FinCategory::ordinal(2)),
        1 => Arc::new(FinCategory::ordinal(3)),
        _ => loop {
            let c = random_category(rng, &base_params);
            let nontrivial = c
                .composable_pairs()
                .iter()
                .any(|&(f, g)| !c.is_identity(f) && !c.is_identity(g));
            if nontrivial {
                break c;
            }
        },
    };
    random_functor_over(&base, rng, params)
}
