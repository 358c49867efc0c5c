//! Span enumeration, Segal round trips and single-element perturbations,
//! shared by the span integration test and the acceptance suite.

#![allow(dead_code)]

use std::collections::BTreeMap;

use fincorr::simplex::{Interval, SimplicialOperator};
use fincorr::span::{
    compose_spans, fill_from_spine, restrict_diagram, segal_comparison, FinSetMap, Span, SpanDiagram,
};

/// Spans `a ← X → b` with `|X| ≤ max_apex`, one per relabeling of `X`:
/// the apex is a sorted multiset of `(left, right)` pairs.
pub fn spans_up_to_apex(a: usize, b: usize, max_apex: usize) -> Vec<Span> {
    let mut out = Vec::new();
    let mut pairs = Vec::new();
    fn rec(start: usize, a: usize, b: usize, left: usize, pairs: &mut Vec<usize>, out: &mut Vec<Span>) {
        let left_map = FinSetMap::new(a, pairs.iter().map(|p| p / b.max(1)).collect()).unwrap();
        let right_map = FinSetMap::new(b, pairs.iter().map(|p| p % b.max(1)).collect()).unwrap();
        out.push(Span::new(left_map, right_map).unwrap());
        if left == 0 {
            return;
        }
        for p in start..a * b {
            pairs.push(p);
            rec(p, a, b, left - 1, pairs, out);
            pairs.pop();
        }
    }
    rec(0, a, b, max_apex, &mut pairs, &mut out);
    out
}

/// Calls `visit` on every spine of length `n` whose filled diagram has at
/// most `max_size` elements in every value, apexes taken up to relabeling.
pub fn for_each_spine(n: usize, max_size: usize, visit: &mut impl FnMut(&[Span])) {
    let table: Vec<Vec<Vec<Span>>> = (0..=max_size)
        .map(|a| (0..=max_size).map(|b| spans_up_to_apex(a, b, max_size)).collect())
        .collect();
    struct Walk<'a, V> {
        n: usize,
        max_size: usize,
        table: &'a [Vec<Vec<Span>>],
        visit: &'a mut V,
    }
    impl<V: FnMut(&[Span])> Walk<'_, V> {
        /// `suffixes[i]` is the composite of `spine[i..]`.
        fn rec(&mut self, foot: usize, spine: &mut Vec<Span>, suffixes: &[Span]) {
            if spine.len() == self.n {
                (self.visit)(spine);
                return;
            }
            for next in 0..=self.max_size {
                for s in &self.table[foot][next] {
                    let mut extended: Vec<Span> =
                        suffixes.iter().map(|c| compose_spans(c, s).unwrap().span).collect();
                    if extended.iter().any(|c| c.apex() > self.max_size) {
                        continue;
                    }
                    extended.push(s.clone());
                    spine.push(s.clone());
                    self.rec(next, spine, &extended);
                    spine.pop();
                }
            }
        }
    }
    let mut walk = Walk {
        n,
        max_size,
        table: &table,
        visit,
    };
    for foot in 0..=max_size {
        walk.rec(foot, &mut Vec::new(), &[]);
    }
}

/// Fills a spine, checks it is cartesian with the same spine, and checks
/// restrictions along interval inclusions and along the outer edge.
pub fn segal_round_trip(spine: &[Span]) -> Result<(), String> {
    let n = spine.len();
    let d = fill_from_spine(spine).map_err(|e| e.to_string())?;
    if d.spine() != spine {
        return Err("filling changed the spine".into());
    }
    let report = d.check_cartesian_squares().map_err(|e| e.to_string())?;
    if !report.passes() || report.squares_checked != n * (n.saturating_sub(1)) / 2 {
        return Err(format!("filling is not cartesian: {report:?}"));
    }
    if segal_comparison(&d).is_none() {
        return Err("no comparison with the filling of its own spine".into());
    }
    for i in 0..n {
        for j in i + 1..=n {
            let r = restrict_diagram(&SimplicialOperator::interval_inclusion(i, j, n), &d).map_err(|e| e.to_string())?;
            if r.spine() != spine[i..j] || !r.check_cartesian_squares().map_err(|e| e.to_string())?.passes() {
                return Err(format!("restriction to [{i},{j}] is not the sub-spine"));
            }
        }
    }
    let outer = SimplicialOperator::new(n, vec![0, n]).unwrap();
    let r = restrict_diagram(&outer, &d).map_err(|e| e.to_string())?;
    let composite = spine[1..]
        .iter()
        .fold(spine[0].clone(), |acc, s| compose_spans(&acc, s).unwrap().span);
    if r.size(Interval::new(0, 1)) != composite.apex() {
        return Err("outer restriction disagrees with the iterated composite".into());
    }
    Ok(())
}

fn intervals(n: usize) -> Vec<Interval> {
    (0..=n).flat_map(|i| (i..=n).map(move |j| Interval::new(i, j))).collect()
}

/// Rebuilds `d` with the elements of each interval replaced by a list of
/// old elements, possibly repeated. Every kept element's restrictions must
/// land on kept elements.
fn rebuild(d: &SpanDiagram, elements: &BTreeMap<Interval, Vec<usize>>) -> SpanDiagram {
    let n = d.n();
    let sizes = intervals(n).into_iter().map(|a| (a, elements[&a].len())).collect();
    let mut maps = BTreeMap::new();
    for a in intervals(n) {
        for b in intervals(n).into_iter().filter(|b| a.contains(b)) {
            let values = elements[&a]
                .iter()
                .enumerate()
                .map(|(e, &old)| {
                    if a == b {
                        return e;
                    }
                    let image = d.map(a, b).apply(old);
                    elements[&b].iter().position(|&o| o == image).expect("restrictions land on kept elements")
                })
                .collect();
            maps.insert((a, b), FinSetMap::new(elements[&b].len(), values).unwrap());
        }
    }
    SpanDiagram::from_parts(n, sizes, maps).unwrap()
}

/// Every single-element perturbation of a cartesian diagram:
/// duplicating an element of some `F[i,j]` with `j ≥ i + 2`, deleting one
/// (with every element above it), and, at the top interval, redirecting
/// an element to the restrictions of another.
pub fn perturbations(d: &SpanDiagram) -> Vec<(String, SpanDiagram)> {
    let n = d.n();
    let identity: BTreeMap<Interval, Vec<usize>> =
        intervals(n).into_iter().map(|a| (a, (0..d.size(a)).collect())).collect();
    let mut out = Vec::new();
    for a in intervals(n).into_iter().filter(|a| a.hi >= a.lo + 2) {
        for x in 0..d.size(a) {
            let mut dup = identity.clone();
            dup.get_mut(&a).unwrap().push(x);
            out.push((format!("duplicate {x} in {a}"), rebuild(d, &dup)));

            let mut del = identity.clone();
            for above in intervals(n).into_iter().filter(|k| k.contains(&a)) {
                del.get_mut(&above).unwrap().retain(|&e| d.map(above, a).apply(e) != x);
            }
            out.push((format!("delete {x} from {a}"), rebuild(d, &del)));
        }
    }
    let top = Interval::new(0, n);
    if n >= 2 {
        for x in 0..d.size(top) {
            for y in (0..d.size(top)).filter(|&y| y != x) {
                out.push((format!("redirect {x} to {y} in {top}"), redirect(d, x, y)));
            }
        }
    }
    out
}

/// `x` in the top interval takes over every restriction of `y`.
fn redirect(d: &SpanDiagram, x: usize, y: usize) -> SpanDiagram {
    let n = d.n();
    let top = Interval::new(0, n);
    let mut maps = d.maps().clone();
    for ((a, b), m) in maps.iter_mut() {
        if *a == top && *b != top {
            let mut values = m.values().to_vec();
            values[x] = values[y];
            *m = FinSetMap::new(m.target(), values).unwrap();
        }
    }
    SpanDiagram::from_parts(n, d.sizes().clone(), maps).unwrap()
}

/// Checks that the cartesian-square checker rejects every perturbation.
pub fn perturbations_rejected(spine: &[Span]) -> Result<usize, String> {
    let d = fill_from_spine(spine).map_err(|e| e.to_string())?;
    let mut count = 0;
    for (what, p) in perturbations(&d) {
        let report = p.check_cartesian_squares().map_err(|e| format!("{what}: {e}"))?;
        if report.passes() {
            return Err(format!("accepted after {what}"));
        }
        count += 1;
    }
    Ok(count)
}

/// A random spine of length `n` whose filled diagram has at most
/// `max_size` elements in every value.
pub fn random_spine(rng: &mut impl rand::Rng, n: usize, max_size: usize) -> Vec<Span> {
    loop {
        let feet: Vec<usize> = (0..=n).map(|_| rng.gen_range(0..=max_size)).collect();
        let spine: Vec<Span> = (0..n)
            .map(|i| {
                let apex = rng.gen_range(0..=max_size);
                let (a, b) = (feet[i], feet[i + 1]);
                let apex = if a * b == 0 { 0 } else { apex };
                let left = (0..apex).map(|_| rng.gen_range(0..a)).collect();
                let right = (0..apex).map(|_| rng.gen_range(0..b)).collect();
                Span::new(FinSetMap::new(a, left).unwrap(), FinSetMap::new(b, right).unwrap()).unwrap()
            })
            .collect();
        let d = fill_from_spine(&spine).unwrap();
        if d.sizes().values().all(|&s| s <= max_size) {
            return spine;
        }
    }
}
