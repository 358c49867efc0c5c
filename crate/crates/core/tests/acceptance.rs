//! The acceptance suite: one line per criterion, exit status 1 if any fails.
//!
//! Run with `cargo test -p fincorr --test acceptance`.

mod common;

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fincorr::envelope::{
    env_horizontal_cells, slice_objects, unital_env_filter, universal_property_roundtrip, SliceFlavor,
    TruncationBound,
};
use fincorr::enumerate::{categories_up_to_iso, functor_corpus};
use fincorr::fincat::{all_functors, category_iso_search_over, pullback_category, NaturalTransformation};
use fincorr::fixtures::{arrow_over_outer_composite, identity_of_ordinal, parallel_pair_over_arrow, two_points_over_point};
use fincorr::generate::{
    random_category, random_correspondence, random_functor, random_functor_over, random_functor_over_composites,
    GenParams,
};
use fincorr::morita::{
    bar_coend_comparison, bar_relative_tensor, compose_chain, composite_check, MonoidInSet, SetBimodule,
};
use fincorr::profunctor::{
    coend_compose, companion_of_functor, corr_iso_search, hom_identity, representability_check, Correspondence,
};
use fincorr::simplex::{enumerate_operators, OperatorKind};
use fincorr::straighten::{
    chain_to_total, check_lax_iso, conduche_check, conduche_oracle, counit, locally_cocartesian_check,
    restraighten_witness, straighten, straighten_map, total_to_chain, unstraighten,
};
use fincorr::{FinCategory, Functor};

type Outcome = Result<String, String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn round_trip_a(p: &Functor) -> Result<(), String> {
    let lax = straighten(p).map_err(|e| e.to_string())?;
    let collage = unstraighten(&lax).map_err(|e| e.to_string())?;
    let e = counit(p, &collage).map_err(|e| e.to_string())?;
    ensure(e.is_bijective() && e.then(p).ok().as_ref() == Some(&collage.functor), || {
        format!("counit is not an isomorphism over the base for {p:?}")
    })
}

fn round_trip_b(p: &Functor) -> Result<(), String> {
    let lax = straighten(p).map_err(|e| e.to_string())?;
    let collage = unstraighten(&lax).map_err(|e| e.to_string())?;
    let again = straighten(&collage.functor).map_err(|e| e.to_string())?;
    let witness = restraighten_witness(&collage, &lax).map_err(|e| e.to_string())?;
    check_lax_iso(&again, &lax, &witness).map_err(|e| format!("{e:?} for {p:?}"))
}

fn criterion_1() -> Outcome {
    let sources = categories_up_to_iso(5);
    let mut targets = categories_up_to_iso(4);
    targets.push(Arc::new(FinCategory::ordinal(2)));
    let corpus = functor_corpus(&sources, &targets);
    for p in &corpus {
        round_trip_a(p)?;
        round_trip_b(p)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let random = 600;
    for i in 0..random {
        let p = if i % 3 == 0 {
            random_functor_over_composites(&mut rng, &GenParams::default())
        } else {
            random_functor(&mut rng, &GenParams::default())
        };
        round_trip_a(&p)?;
        round_trip_b(&p)?;
        let collage = unstraighten(&straighten(&p).unwrap()).unwrap();
        ensure(category_iso_search_over(&collage.functor, &p).is_some(), || {
            format!("iso search finds no isomorphism over the base for {p:?}")
        })?;
    }
    Ok(format!(
        "{} exhaustive functors ({} sources with ≤ 5 morphisms, {} bases) and {random} random with ≤ 12",
        corpus.len(),
        sources.len(),
        targets.len()
    ))
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
        if let Some(u) = all_functors(&c2, c).choose(rng) {
            return u.clone();
        }
    }
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1002);
    let samples = 250;
    for _ in 0..samples {
        let p = random_functor(&mut rng, &GenParams::default());
        let u = random_base_change(&mut rng, p.target());
        let pb = pullback_category(&p, &u).map_err(|e| e.to_string())?;
        let t = straighten_map(&pb.right, &p, &pb.left, &u).map_err(|e| e.to_string())?;
        let lhs = straighten(&pb.right).map_err(|e| e.to_string())?;
        let rhs = straighten(&p).unwrap().reindex(&u).map_err(|e| e.to_string())?;
        check_lax_iso(&lhs, &rhs, &t).map_err(|e| format!("{e:?} for {p:?} along {u:?}"))?;
    }
    Ok(format!("{samples} random (p, u)"))
}

/// `a: 0 → 1` and parallel `b, c: 1 → 2` over `[2]` with `b ∘ a = c ∘ a`.
fn merged_composites() -> Functor {
    let objects = vec!["0".to_string(), "1".into(), "2".into()];
    let morphisms = vec![
        ("id0".to_string(), 0, 0),
        ("id1".into(), 1, 1),
        ("id2".into(), 2, 2),
        ("a".into(), 0, 1),
        ("b".into(), 1, 2),
        ("c".into(), 1, 2),
        ("ba".into(), 0, 2),
    ];
    let d = Arc::new(
        FinCategory::build(objects, morphisms, vec![0, 1, 2], |g, f| match (g, f) {
            (g, f) if f < 3 => Some(g),
            (g, f) if g < 3 => Some(f),
            (4 | 5, 3) => Some(6),
            _ => None,
        })
        .unwrap(),
    );
    let c = Arc::new(FinCategory::ordinal(2));
    let over = |a: usize, b: usize| c.hom(a, b)[0];
    let m = vec![over(0, 0), over(1, 1), over(2, 2), over(0, 1), over(1, 2), over(1, 2), over(0, 2)];
    Functor::new(d, c, vec![0, 1, 2], m).unwrap()
}

/// Two parallel arrows `0 → 2` over the outer arrow of `[2]`, nothing over
/// the middle.
fn parallel_pair_over_outer_composite() -> Functor {
    let d = Arc::new(FinCategory::parallel_pair());
    let c = Arc::new(FinCategory::ordinal(2));
    let outer = c.hom(0, 2)[0];
    Functor::new(d, c.clone(), vec![0, 2], vec![c.identity(0), c.identity(2), outer, outer]).unwrap()
}

fn adversarial() -> Vec<Functor> {
    vec![
        arrow_over_outer_composite(),
        parallel_pair_over_outer_composite(),
        merged_composites(),
        parallel_pair_over_arrow(),
        two_points_over_point(),
        identity_of_ordinal(0),
        identity_of_ordinal(3),
    ]
}

fn mixed_corpus(seed: u64, count: usize) -> Vec<Functor> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two = Arc::new(FinCategory::ordinal(2));
    let mut out = adversarial();
    for i in 0..count {
        out.push(match i % 3 {
            0 => random_functor(&mut rng, &GenParams::default()),
            1 => random_functor_over_composites(&mut rng, &GenParams::default()),
            _ => random_functor_over(&two, &mut rng, &GenParams::default()),
        });
    }
    out
}

fn criterion_3() -> Outcome {
    let corpus = mixed_corpus(1003, 1200);
    let mut failing = 0;
    for p in &corpus {
        let (check, oracle) = (conduche_check(p), conduche_oracle(p));
        ensure(check == oracle, || format!("{check:?} vs {oracle:?} for {p:?}"))?;
        failing += usize::from(!check.passes());
    }
    let expected_failures = [true, true, true, false, false, false, false];
    for (p, fails) in adversarial().iter().zip(expected_failures) {
        ensure(conduche_check(p).passes() != fails, || format!("wrong verdict on fixture {p:?}"))?;
    }
    let arrow = Arc::new(FinCategory::ordinal(1));
    let mut over_arrow = 0;
    for d in categories_up_to_iso(5) {
        for p in all_functors(&d, &arrow) {
            ensure(conduche_check(&p).passes(), || format!("{p:?} into [1] is not Conduché"))?;
            over_arrow += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1013);
    for _ in 0..300 {
        let p = random_functor_over(&arrow, &mut rng, &GenParams::default());
        ensure(conduche_check(&p).passes(), || format!("{p:?} into [1] is not Conduché"))?;
        over_arrow += 1;
    }
    Ok(format!(
        "{} functors agree ({failing} not Conduché); {over_arrow} functors into [1] all Conduché",
        corpus.len()
    ))
}

fn criterion_4() -> Outcome {
    let corpus = mixed_corpus(1003, 1200);
    let mut failing = 0;
    for p in &corpus {
        let report = locally_cocartesian_check(p);
        ensure(report.oracle_agrees, || format!("{report:?} for {p:?}"))?;
        failing += usize::from(!report.passes());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1004);
    let small = GenParams {
        max_vertices: 3,
        max_edges: 3,
        max_relations: 2,
        max_morphisms: 7,
    };
    let mut companions = 0;
    while companions < 150 {
        let a = random_category(&mut rng, &small);
        let b = random_category(&mut rng, &small);
        let Some(u) = all_functors(&a, &b).choose(&mut rng).cloned() else { continue };
        companions += 1;
        let m = companion_of_functor(&u);
        let cell = compose_chain(vec![a.clone(), b.clone()], vec![m.clone()]).map_err(|e| e.to_string())?;
        let collage = chain_to_total(&cell).map_err(|e| e.to_string())?;
        let report = locally_cocartesian_check(&collage.functor);
        ensure(report.passes() && report.oracle_agrees, || format!("companion of {u:?}: {report:?}"))?;
        let rep = representability_check(&m).map_err(|e| format!("{e:?}"))?;
        let components = a
            .objects()
            .map(|x| b.hom(u.on_object(x), rep.functor.on_object(x))[rep.universal[x]])
            .collect();
        let iso = NaturalTransformation::new(u.clone(), rep.functor.clone(), components).map_err(|e| e.to_string())?;
        ensure(iso.is_isomorphism(), || format!("companion of {u:?} represents a different functor"))?;
    }
    Ok(format!(
        "{} functors agree ({failing} not locally cocartesian); {companions} companions recovered",
        corpus.len()
    ))
}

/// Classes of `∐_d F(c, d) × G(d, e)` by repeated relabeling to the least
/// label along each generating relation until nothing changes.
fn label_propagation_classes(f: &Correspondence, g: &Correspondence, c: usize, e: usize) -> usize {
    let mid = f.target();
    let mut vertices = Vec::new();
    for d in mid.objects() {
        for xi in 0..f.size(c, d) {
            for eta in 0..g.size(d, e) {
                vertices.push((d, xi, eta));
            }
        }
    }
    let position = |v: (usize, usize, usize)| vertices.iter().position(|&w| w == v).unwrap();
    let mut edges = Vec::new();
    for v in mid.morphisms() {
        let (d, d2) = (mid.src(v), mid.tgt(v));
        for xi in 0..f.size(c, d) {
            for eta in 0..g.size(d2, e) {
                edges.push((position((d2, f.act_right(c, v, xi), eta)), position((d, xi, g.act_left(v, e, eta)))));
            }
        }
    }
    let mut label: Vec<usize> = (0..vertices.len()).collect();
    loop {
        let mut changed = false;
        for &(a, b) in &edges {
            let m = label[a].min(label[b]);
            if label[a] != m || label[b] != m {
                label[a] = m;
                label[b] = m;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    label.sort_unstable();
    label.dedup();
    label.len()
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1005);
    let small = GenParams {
        max_vertices: 3,
        max_edges: 3,
        max_relations: 2,
        max_morphisms: 6,
    };
    let triples = 550;
    let mut classes_checked = 0;
    for _ in 0..triples {
        let cats: Vec<_> = (0..4).map(|_| random_category(&mut rng, &small)).collect();
        let f = random_correspondence(&cats[0], &cats[1], &mut rng, 6, 2);
        let g = random_correspondence(&cats[1], &cats[2], &mut rng, 6, 2);
        let h = random_correspondence(&cats[2], &cats[3], &mut rng, 6, 2);
        let fg = coend_compose(&f, &g).map_err(|e| e.to_string())?;
        let gh = coend_compose(&g, &h).map_err(|e| e.to_string())?;
        let fg_h = coend_compose(&fg.composite, &h).unwrap().composite;
        let f_gh = coend_compose(&f, &gh.composite).unwrap().composite;
        ensure(corr_iso_search(&fg_h, &f_gh).is_some(), || "associativity fails".into())?;
        let left = coend_compose(&hom_identity(&cats[0]), &f).unwrap().composite;
        let right = coend_compose(&f, &hom_identity(&cats[1])).unwrap().composite;
        ensure(corr_iso_search(&left, &f).is_some() && corr_iso_search(&right, &f).is_some(), || {
            "unitality fails".into()
        })?;
        for (x, y, coend) in [(&f, &g, &fg), (&g, &h, &gh)] {
            for c in x.source().objects() {
                for e in y.target().objects() {
                    let oracle = label_propagation_classes(x, y, c, e);
                    ensure(coend.composite.size(c, e) == oracle, || {
                        format!("{} classes, oracle {oracle}", coend.composite.size(c, e))
                    })?;
                    classes_checked += 1;
                }
            }
        }
    }
    Ok(format!("{triples} triples; {classes_checked} class counts match the oracle"))
}

fn monoid_pool() -> Vec<Arc<MonoidInSet>> {
    let idempotent = MonoidInSet::new(vec!["1".into(), "e".into()], 0, vec![vec![0, 1], vec![1, 1]]).unwrap();
    let with_zero = MonoidInSet::new(
        vec!["1".into(), "a".into(), "0".into()],
        0,
        vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 2]],
    )
    .unwrap();
    vec![
        Arc::new(MonoidInSet::trivial()),
        Arc::new(MonoidInSet::cyclic(2)),
        Arc::new(MonoidInSet::cyclic(3)),
        Arc::new(idempotent),
        Arc::new(with_zero),
    ]
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1006);
    let small = GenParams {
        max_vertices: 3,
        max_edges: 3,
        max_relations: 2,
        max_morphisms: 5,
    };
    let mut chains = 0;
    for n in 0..=3 {
        for _ in 0..40 {
            let algebras: Vec<_> = (0..=n).map(|_| random_category(&mut rng, &small)).collect();
            let spine = (0..n)
                .map(|i| random_correspondence(&algebras[i], &algebras[i + 1], &mut rng, 6, 3))
                .collect();
            let cell = compose_chain(algebras, spine).map_err(|e| e.to_string())?;
            let report = composite_check(&cell);
            ensure(report.passes(), || format!("compose_chain output not composite: {report:?}"))?;
            chains += 1;
        }
    }

    let pool = monoid_pool();
    let tensors = 320;
    for _ in 0..tensors {
        let [a, b, c] = [0, 1, 2].map(|_| pool.choose(&mut rng).unwrap().clone());
        let cats = [&a, &b, &c].map(|m| Arc::new(m.to_category()));
        let m = SetBimodule::from_correspondence(a.clone(), b.clone(), &random_correspondence(&cats[1], &cats[0], &mut rng, 9, 3))
            .map_err(|e| e.to_string())?;
        let n = SetBimodule::from_correspondence(b.clone(), c.clone(), &random_correspondence(&cats[2], &cats[1], &mut rng, 9, 3))
            .map_err(|e| e.to_string())?;
        let tensor = bar_relative_tensor(&m, &n).map_err(|e| e.to_string())?;
        let coend = coend_compose(&n.to_correspondence(&cats[1], &cats[2]), &m.to_correspondence(&cats[0], &cats[1]))
            .map_err(|e| e.to_string())?;
        let map = bar_coend_comparison(&tensor, &coend).map_err(|e| e.to_string())?;
        ensure(map.is_iso(&coend.composite), || "bar construction disagrees with the coend".into())?;
    }

    let two = Arc::new(FinCategory::ordinal(2));
    let mut over_two: Vec<Functor> = categories_up_to_iso(5)
        .iter()
        .flat_map(|d| all_functors(d, &two))
        .collect();
    let exhaustive = over_two.len();
    for _ in 0..300 {
        over_two.push(random_functor_over(&two, &mut rng, &GenParams::default()));
    }
    let mut composite = 0;
    for p in &over_two {
        let cell = total_to_chain(p).map_err(|e| e.to_string())?;
        let is_composite = composite_check(&cell).passes();
        ensure(is_composite == conduche_check(p).passes(), || format!("composite ≠ Conduché for {p:?}"))?;
        composite += usize::from(is_composite);
    }
    Ok(format!(
        "{chains} chains composite; {tensors} tensors agree; {} functors over [2] ({exhaustive} exhaustive, {composite} composite)",
        over_two.len()
    ))
}

fn criterion_7() -> Outcome {
    let mut spines = 0;
    let mut perturbed = 0;
    let mut failure = None;
    for (n, size) in [(1, 3), (2, 3), (3, 2)] {
        common::for_each_spine(n, size, &mut |spine| {
            if failure.is_some() {
                return;
            }
            spines += 1;
            match common::segal_round_trip(spine).and_then(|()| common::perturbations_rejected(spine)) {
                Ok(k) => perturbed += k,
                Err(e) => failure = Some(format!("{e} for {spine:?}")),
            }
        });
    }
    if let Some(e) = failure {
        return Err(e);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1007);
    let random = 3000;
    for _ in 0..random {
        let spine = common::random_spine(&mut rng, 3, 3);
        common::segal_round_trip(&spine)?;
        perturbed += common::perturbations_rejected(&spine)?;
    }
    Ok(format!(
        "{spines} exhaustive spines (n ≤ 2 with sets ≤ 3, n = 3 with sets ≤ 2) and {random} random at n = 3 with sets ≤ 3; {perturbed} perturbations rejected"
    ))
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn criterion_8() -> Outcome {
    for n in 0..=4 {
        for kmax in 0..=4 {
            let bound = TruncationBound { kmax };
            let all = slice_objects(n, bound, SliceFlavor::All).len();
            let closed: usize = (0..=kmax).map(|j| binomial(n + j + 1, j + 1)).sum();
            ensure(all == closed, || format!("{all} slices over [{n}] up to {kmax}, expected {closed}"))?;
            let injective = slice_objects(n, bound, SliceFlavor::Injective).len();
            let subsets: usize = (0..=kmax).map(|j| binomial(n + 1, j + 1)).sum();
            ensure(injective == subsets, || format!("{injective} injective slices, expected {subsets}"))?;
            ensure(kmax < n || injective == (1 << (n + 1)) - 1, || "injective count is not 2^(n+1) - 1".into())?;
            let cells = env_horizontal_cells(n, bound);
            let actives = |k2: usize, k: usize| enumerate_operators(k2, k, OperatorKind::Active).len();
            let expected: usize = (0..=kmax)
                .map(|k| binomial(n + k + 1, k + 1) * (0..=kmax).map(|k2| actives(k2, k)).sum::<usize>())
                .sum();
            ensure(cells.morphisms().len() == expected, || format!("{} cell morphisms, expected {expected}", cells.morphisms().len()))?;
            let unital = unital_env_filter(&cells).map_err(|e| e.to_string())?;
            ensure(unital.cells.objects().len() == subsets, || "unital envelope has the wrong cells".into())?;
        }
    }
    let mut closed_trips = 0;
    for n in 0..=2 {
        let report = universal_property_roundtrip(n, 200, 5, 1008 + n as u64).map_err(|e| e.to_string())?;
        ensure(report.passes(), || format!("round trip over [{n}] fails: {:?}", report.smallest_failure()))?;
        closed_trips += report.samples;
    }
    Ok(format!("counts and closure for n ≤ 4, k ≤ 4; {closed_trips} round trips over [0], [1], [2]"))
}

/// Name, time budget and check.
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 straightening round trips", Duration::from_secs(120), criterion_1),
        ("2 naturality in the base", Duration::from_secs(60), criterion_2),
        ("3 Conduché characterization", Duration::from_secs(120), criterion_3),
        ("4 locally cocartesian characterization", Duration::from_secs(60), criterion_4),
        ("5 coend calculus", Duration::from_secs(60), criterion_5),
        ("6 composite cells and relative tensors", Duration::from_secs(120), criterion_6),
        ("7 span cells", Duration::from_secs(60), criterion_7),
        ("8 envelope combinatorics", Duration::from_secs(120), criterion_8),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let timing = if elapsed > budget {
            format!("{elapsed:.1?}, over the {budget:?} target")
        } else {
            format!("{elapsed:.1?}")
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{timing}]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} [{timing}]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 8 criteria failed");
        std::process::exit(1);
    }
    println!("all 8 criteria passed");
}
