use std::collections::HashMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::fincat::{all_functors, category_iso_search_over, pullback_category, NaturalTransformation};
use crate::fixtures::{arrow_over_outer_composite, identity_of_ordinal, parallel_pair_over_arrow, two_points_over_point};
use crate::generate::{
    random_category, random_correspondence, random_functor, random_functor_over, random_functor_over_composites, GenParams,
};
use crate::morita::{compose_chain, composite_check};
use crate::profunctor::{companion_of_functor, representability_check};

/// The free category on an acyclic graph: morphisms are paths.
fn free_category(objects: usize, edges: &[(&str, Ob, Ob)]) -> Arc<FinCategory> {
    let mut paths: Vec<(Ob, Vec<usize>)> = (0..objects).map(|a| (a, vec![])).collect();
    let mut frontier = paths.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (a, path) in &frontier {
            let end = path.last().map_or(*a, |&e| edges[e].2);
            for (e, edge) in edges.iter().enumerate() {
                if edge.1 == end {
                    let mut p = path.clone();
                    p.push(e);
                    next.push((*a, p));
                }
            }
        }
        paths.extend(next.iter().cloned());
        frontier = next;
    }
    let index: HashMap<(Ob, Vec<usize>), usize> = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let name = |a: Ob, p: &[usize]| {
        if p.is_empty() {
            format!("id{a}")
        } else {
            p.iter().rev().map(|&e| edges[e].0).collect::<Vec<_>>().join("")
        }
    };
    let end = |a: Ob, p: &[usize]| p.last().map_or(a, |&e| edges[e].2);
    Arc::new(
        FinCategory::build(
            (0..objects).map(|a| a.to_string()).collect(),
            paths.iter().map(|(a, p)| (name(*a, p), *a, end(*a, p))).collect(),
            (0..objects).collect(),
            |g, f| {
                let (a, pf) = &paths[f];
                let mut p = pf.clone();
                p.extend(&paths[g].1);
                Some(index[&(*a, p)])
            },
        )
        .unwrap(),
    )
}

/// A functor from a free category to `[n]` sending vertex `a` to `level[a]`.
fn over_ordinal(d: &Arc<FinCategory>, n: usize, level: &[usize]) -> Functor {
    let c = Arc::new(FinCategory::ordinal(n));
    let objects: Vec<Ob> = d.objects().map(|a| level[a]).collect();
    let morphisms = d.morphisms().map(|f| c.hom(objects[d.src(f)], objects[d.tgt(f)])[0]).collect();
    Functor::new(d.clone(), c, objects, morphisms).unwrap()
}

fn params() -> GenParams {
    GenParams::default()
}

#[test]
fn straighten_examples() {
    let lax = straighten(&identity_of_ordinal(1)).unwrap();
    let arrow = lax.base().morphism_index("0>1").unwrap();
    assert!(lax.fibers().iter().all(|f| f.num_objects() == 1 && f.num_morphisms() == 1));
    assert_eq!(lax.arrow(arrow).size(0, 0), 1);

    let walking = Functor::identity(Arc::new(FinCategory::ordinal(1)));
    let lax = straighten(&walking).unwrap();
    assert_eq!(lax.arrow(arrow).names(0, 0), ["0>1"]);

    let lax = straighten(&parallel_pair_over_arrow()).unwrap();
    assert_eq!(lax.arrow(arrow).size(0, 0), 2);
    assert!(lax.coherence_check().passes());
}

#[test]
fn straightenings_are_coherent() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..100 {
        let p = random_functor(&mut rng, &params());
        let report = straighten(&p).unwrap().coherence_check();
        assert!(report.passes(), "{:?}", report.failure);
        assert_eq!(report.pairs_checked, p.target().composable_pairs().len());
    }
}

#[test]
fn rewired_comparator_breaks_associativity() {
    // a, b: 0 → 1, c: 1 → 2, e: 2 → 3 over [3]; fibers are points
    let d = free_category(4, &[("a", 0, 1), ("b", 0, 1), ("c", 1, 2), ("e", 2, 3)]);
    let p = over_ordinal(&d, 3, &[0, 1, 2, 3]);
    let mut lax = straighten(&p).unwrap();
    let base = lax.base().clone();
    let (f, g) = (base.morphism_index("0>1").unwrap(), base.morphism_index("1>2").unwrap());
    assert_eq!(lax.arrow(base.compose(g, f)).size(0, 0), 2);
    let value = lax.mu(f, g, 0, 0, 0, 0, 0);
    let g_arrow = lax.arrow(g).clone();
    lax.comparators.get_mut(&(f, g)).unwrap().set(&g_arrow, 0, 0, 0, 0, 0, 1 - value);
    let failure = lax.coherence_check().failure;
    assert!(matches!(failure, Some(CoherenceFailure::Associativity { f: ff, g: gg, .. }) if ff == f && gg == g));
    assert!(matches!(unstraighten(&lax), Err(StraightenError::CoherenceRequired(_))));
}

#[test]
fn non_invertible_unit_is_reported() {
    let p = two_points_over_point();
    let lax = straighten(&p).unwrap();
    assert!(lax.coherence_check().passes());
    let base = lax.base().clone();
    let fibers = lax.fibers().to_vec();
    let id = base.identity(0);
    // P(id) with two elements over (0, 0) mapping both to id₀
    let doubled = Correspondence::from_fn(
        fibers[0].clone(),
        fibers[0].clone(),
        vec![vec!["u".into(), "v".into()], vec![], vec![], vec!["w".into()]],
        |_, _, x| x,
        |_, _, x| x,
    )
    .unwrap();
    let mut comparators = BTreeMap::new();
    comparators.insert(
        (id, id),
        BilinearMap::from_fn(&doubled, &doubled, &doubled, |_, _, _, a, _| a).unwrap(),
    );
    let odd = LaxFunctorToCorr::new(
        base,
        fibers,
        vec![doubled],
        vec![vec![vec![0, 0], vec![], vec![], vec![0]]],
        comparators,
    )
    .unwrap();
    assert_eq!(
        odd.coherence_check().failure,
        Some(CoherenceFailure::UnitNotInvertible { object: 0 })
    );
}

#[test]
fn discrete_base_only_has_identity_pairs() {
    let d = Arc::new(FinCategory::discrete(3));
    let c = Arc::new(FinCategory::discrete(2));
    let p = Functor::new(d, c.clone(), vec![0, 1, 1], vec![c.identity(0), c.identity(1), c.identity(1)]).unwrap();
    let report = straighten(&p).unwrap().coherence_check();
    assert!(report.passes());
    assert_eq!((report.pairs_checked, report.triples_checked), (2, 2));
}

fn round_trip_a(p: &Functor) {
    let lax = straighten(p).unwrap();
    let collage = unstraighten(&lax).unwrap();
    let e = counit(p, &collage).unwrap();
    assert!(e.is_bijective());
    assert_eq!(e.then(p).unwrap(), collage.functor);
}

fn round_trip_b(lax: &LaxFunctorToCorr) {
    let collage = unstraighten(lax).unwrap();
    let again = straighten(&collage.functor).unwrap();
    let witness = restraighten_witness(&collage, lax).unwrap();
    check_lax_iso(&again, lax, &witness).unwrap();
}

#[test]
fn round_trips_on_fixtures() {
    for p in [
        identity_of_ordinal(0),
        identity_of_ordinal(2),
        arrow_over_outer_composite(),
        parallel_pair_over_arrow(),
        two_points_over_point(),
    ] {
        round_trip_a(&p);
        round_trip_b(&straighten(&p).unwrap());
    }
}

#[test]
fn round_trips_on_random_functors() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..150 {
        let p = random_functor(&mut rng, &params());
        round_trip_a(&p);
        let lax = straighten(&p).unwrap();
        round_trip_b(&lax);
        // the search oracle also finds an isomorphism over the base
        let collage = unstraighten(&lax).unwrap();
        assert!(category_iso_search_over(&collage.functor, &p).is_some());
    }
}

#[test]
fn round_trip_on_transported_functors() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..60 {
        let p = random_functor(&mut rng, &params());
        let d = p.source();
        let mut objects: Vec<Ob> = d.objects().collect();
        let mut morphisms: Vec<Mor> = d.morphisms().collect();
        objects.shuffle(&mut rng);
        morphisms.shuffle(&mut rng);
        let d2 = Arc::new(d.permuted(&objects, &morphisms));
        // g: D' → D undoing the permutation
        let g = Functor::new(
            d2.clone(),
            d.clone(),
            objects.clone(),
            morphisms.clone(),
        )
        .unwrap();
        let p2 = g.then(&p).unwrap();
        let lax2 = straighten(&p2).unwrap();
        round_trip_b(&lax2);
        let u = Functor::identity(p.target().clone());
        let t = straighten_map(&p2, &p, &g, &u).unwrap();
        check_lax_iso(&lax2, &straighten(&p).unwrap().reindex(&u).unwrap(), &t).unwrap();
    }
}

#[test]
fn lax_iso_check_rejects_broken_witnesses() {
    let p = parallel_pair_over_arrow();
    let lax = straighten(&p).unwrap();
    let collage = unstraighten(&lax).unwrap();
    let again = straighten(&collage.functor).unwrap();
    let mut witness = restraighten_witness(&collage, &lax).unwrap();
    let arrow = lax.base().morphism_index("0>1").unwrap();
    witness.arrows[arrow][0] = vec![0, 0];
    assert_eq!(
        check_lax_iso(&again, &lax, &witness),
        Err(LaxMapFailure::ArrowNotBijective { f: arrow, x: 0, y: 0 })
    );
    // swapping the two parallel arrows is an automorphism
    let mut witness = restraighten_witness(&collage, &lax).unwrap();
    witness.arrows[arrow][0].reverse();
    assert_eq!(check_lax_iso(&again, &lax, &witness), Ok(()));
}

fn random_base_change(rng: &mut impl Rng, c: &Arc<FinCategory>) -> Functor {
    let small = GenParams {
        max_vertices: 3,
        max_edges: 3,
        max_relations: 2,
        max_morphisms: 6,
    };
    loop {
        let c2 = random_category(rng, &small);
        let all = all_functors(&c2, c);
        if let Some(u) = all.choose(rng) {
            return u.clone();
        }
    }
}

#[test]
fn straightening_is_natural_in_the_base() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        let p = random_functor(&mut rng, &params());
        let u = random_base_change(&mut rng, p.target());
        let pb = pullback_category(&p, &u).unwrap();
        let t = straighten_map(&pb.right, &p, &pb.left, &u).unwrap();
        let lhs = straighten(&pb.right).unwrap();
        let rhs = straighten(&p).unwrap().reindex(&u).unwrap();
        check_lax_iso(&lhs, &rhs, &t).unwrap();
    }
}

#[test]
fn non_pullback_squares_are_not_isomorphisms() {
    // D = two points over a point, mapped to one of them: fibers differ
    let p = two_points_over_point();
    let point = Arc::new(FinCategory::terminal());
    let q = Functor::identity(point.clone());
    let g = Functor::new(point.clone(), p.source().clone(), vec![0], vec![0]).unwrap();
    let t = straighten_map(&q, &p, &g, &Functor::identity(point)).unwrap();
    let rhs = straighten(&p).unwrap();
    assert_eq!(
        check_lax_iso(&straighten(&q).unwrap(), &rhs, &t),
        Err(LaxMapFailure::FiberNotIso { object: 0 })
    );
    assert_eq!(
        straighten_map(&p, &q, &Functor::to_terminal(p.source().clone()), &Functor::identity(p.target().clone()))
            .map(|_| ()),
        Ok(())
    );
}

#[test]
fn conduche_examples() {
    let report = conduche_check(&arrow_over_outer_composite());
    let failure = report.failure.clone().unwrap();
    assert!(failure.injective && !failure.surjective);
    assert_eq!(conduche_oracle(&arrow_over_outer_composite()).failure, Some(failure));
    assert!(conduche_check(&identity_of_ordinal(3)).passes());
    assert!(conduche_oracle(&identity_of_ordinal(3)).passes());
    // discrete D: only identities of C lift
    let d = Arc::new(FinCategory::discrete(2));
    let c = Arc::new(FinCategory::ordinal(1));
    let p = Functor::new(d, c.clone(), vec![0, 1], vec![c.identity(0), c.identity(1)]).unwrap();
    assert!(conduche_check(&p).passes());
    assert!(conduche_oracle(&p).passes());
}

#[test]
fn injectivity_failure() {
    // a: 0 → 1, b, b': 1 → 2 over [2] with b ∘ a = b' ∘ a: two
    // factorizations of one composite, not linked by a vertical map
    let d = free_category(3, &[("a", 0, 1), ("b", 1, 2), ("c", 1, 2)]);
    let objects = vec!["0".to_string(), "1".into(), "2".into()];
    let names: Vec<(String, Ob, Ob)> = d
        .morphisms()
        .filter(|&f| d.morphism_name(f) != "ca")
        .map(|f| (d.morphism_name(f).to_string(), d.src(f), d.tgt(f)))
        .collect();
    let index = |n: &str| names.iter().position(|m| m.0 == n);
    let identity = (0..3).map(|a| index(&format!("id{a}")).unwrap()).collect();
    let quotient = Arc::new(
        FinCategory::build(objects, names.clone(), identity, |g, f| {
            let name = d.morphism_name(d.compose(
                d.morphism_index(&names[g].0).unwrap(),
                d.morphism_index(&names[f].0).unwrap(),
            ));
            index(if name == "ca" { "ba" } else { name })
        })
        .unwrap(),
    );
    let p = over_ordinal(&quotient, 2, &[0, 1, 2]);
    let failure = conduche_check(&p).failure.unwrap();
    assert!(!failure.injective && failure.surjective);
    assert_eq!(conduche_oracle(&p).failure, Some(failure));
}

#[test]
fn conduche_agrees_with_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut failures = 0;
    for i in 0..300 {
        let p = if i % 2 == 0 {
            random_functor(&mut rng, &params())
        } else {
            random_functor_over_composites(&mut rng, &params())
        };
        let (a, b) = (conduche_check(&p), conduche_oracle(&p));
        assert_eq!(a, b);
        failures += usize::from(!a.passes());
    }
    assert!(failures > 10, "only {failures} non-Conduché samples");
}

#[test]
fn everything_over_the_arrow_is_conduche() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let arrow = Arc::new(FinCategory::ordinal(1));
    for _ in 0..200 {
        let p = random_functor_over(&arrow, &mut rng, &params());
        assert!(conduche_check(&p).passes());
    }
}

#[test]
fn locally_cocartesian_examples() {
    let p = parallel_pair_over_arrow();
    let report = locally_cocartesian_check(&p);
    assert_eq!(report.failure, Some((p.target().morphism_index("0>1").unwrap(), 0)));
    assert!(report.oracle_agrees);
    let report = locally_cocartesian_check(&identity_of_ordinal(2));
    assert!(report.passes() && report.oracle_agrees);
    assert_eq!(report.lifts.len(), 6);
}

#[test]
fn locally_cocartesian_agrees_with_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let (mut pass, mut fail) = (0, 0);
    for _ in 0..300 {
        let p = random_functor(&mut rng, &params());
        let report = locally_cocartesian_check(&p);
        assert!(report.oracle_agrees, "{report:?}");
        if report.passes() {
            pass += 1;
        } else {
            fail += 1;
        }
    }
    assert!(pass > 20 && fail > 20, "{pass} passing, {fail} failing");
}

#[test]
fn companions_unstraighten_to_locally_cocartesian_fibrations() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let small = GenParams {
        max_vertices: 3,
        max_edges: 3,
        max_relations: 2,
        max_morphisms: 7,
    };
    let mut checked = 0;
    while checked < 40 {
        let a = random_category(&mut rng, &small);
        let b = random_category(&mut rng, &small);
        let Some(u) = all_functors(&a, &b).choose(&mut rng).cloned() else { continue };
        checked += 1;
        let m = companion_of_functor(&u);
        let cell = compose_chain(vec![a.clone(), b.clone()], vec![m.clone()]).unwrap();
        let collage = chain_to_total(&cell).unwrap();
        let report = locally_cocartesian_check(&collage.functor);
        assert!(report.passes() && report.oracle_agrees);
        // the representing functor is naturally isomorphic to u
        let rep = representability_check(&m).unwrap();
        let components = a
            .objects()
            .map(|x| b.hom(u.on_object(x), rep.functor.on_object(x))[rep.universal[x]])
            .collect();
        let iso = NaturalTransformation::new(u.clone(), rep.functor.clone(), components).unwrap();
        assert!(iso.is_isomorphism());
    }
}

#[test]
fn total_to_chain_of_the_outer_arrow_is_not_composite() {
    let cell = total_to_chain(&arrow_over_outer_composite()).unwrap();
    let report = composite_check(&cell);
    assert_eq!(report.failures.len(), 1);
    let failure = &report.failures[0];
    assert_eq!((failure.i, failure.j, failure.k), (0, 1, 2));
    assert!(failure.injective && !failure.surjective);
    assert!(matches!(chain_to_total(&cell), Err(StraightenError::NonCompositeCell(_))));
    // glued anyway, it recovers the functor
    let glued = glue_chain(&cell).unwrap();
    assert!(category_iso_search_over(&glued.functor, &arrow_over_outer_composite()).is_some());
}

#[test]
fn one_step_chains_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let arrow = Arc::new(FinCategory::ordinal(1));
    for _ in 0..50 {
        let p = random_functor_over(&arrow, &mut rng, &params());
        let cell = total_to_chain(&p).unwrap();
        let total = chain_to_total(&cell).unwrap();
        assert!(category_iso_search_over(&total.functor, &p).is_some());
    }
}

#[test]
fn composite_cells_glue_to_conduche_fibrations() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let small = GenParams {
        max_vertices: 3,
        max_edges: 3,
        max_relations: 2,
        max_morphisms: 5,
    };
    for n in 1..=3 {
        for _ in 0..15 {
            let algebras: Vec<_> = (0..=n).map(|_| random_category(&mut rng, &small)).collect();
            let spine = (0..n)
                .map(|i| random_correspondence(&algebras[i], &algebras[i + 1], &mut rng, 6, 3))
                .collect();
            let cell = compose_chain(algebras, spine).unwrap();
            let total = chain_to_total(&cell).unwrap();
            assert!(conduche_check(&total.functor).passes());
            let spine_glued = glue_spine(&cell).unwrap();
            assert!(category_iso_search_over(&total.functor, &spine_glued.functor).is_some());
            let back = total_to_chain(&total.functor).unwrap();
            assert!(composite_check(&back).passes());
        }
    }
}

#[test]
fn composite_iff_conduche_over_two() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let two = Arc::new(FinCategory::ordinal(2));
    let (mut yes, mut no) = (0, 0);
    for _ in 0..200 {
        let p = random_functor_over(&two, &mut rng, &params());
        let composite = composite_check(&total_to_chain(&p).unwrap()).passes();
        assert_eq!(composite, conduche_check(&p).passes());
        if composite {
            yes += 1;
        } else {
            no += 1;
        }
    }
    assert!(yes > 10 && no > 10, "{yes} composite, {no} not");
}

#[test]
fn total_to_chain_needs_an_ordinal_base() {
    let p = Functor::identity(Arc::new(FinCategory::cyclic_group(2)));
    assert_eq!(total_to_chain(&p).unwrap_err(), StraightenError::NotOverOrdinal);
    assert_eq!(ordinal_length(&FinCategory::ordinal(3)), Some(3));
    assert_eq!(ordinal_length(&FinCategory::empty()), None);
    assert_eq!(ordinal_length(&opposite_of_arrow()), None);
}

fn opposite_of_arrow() -> FinCategory {
    crate::fincat::opposite(&FinCategory::ordinal(1))
}

#[test]
fn reindexing_along_identity_is_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..30 {
        let lax = straighten(&random_functor(&mut rng, &params())).unwrap();
        let id = Functor::identity(lax.base().clone());
        assert_eq!(lax.reindex(&id).unwrap(), lax);
    }
}
