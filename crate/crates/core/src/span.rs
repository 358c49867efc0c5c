//! Spans of finite sets and their Σⁿ-shaped diagrams.
//!
//! A finite set is identified with its cardinality `k` and has elements
//! `0..k`. A diagram over `[n]` assigns a set to every interval `[i, j]` and a
//! map to every pair of nested intervals; it is an `n`-cell of the span double
//! category when each unit square
//!
//! ```text
//! F[i,j]   ──▶ F[i+1,j]
//!   │             │
//!   ▼             ▼
//! F[i,j-1] ──▶ F[i+1,j-1]
//! ```
//!
//! is a pullback.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::simplex::{Interval, SimplicialOperator};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpanError {
    #[error("maps do not share a target ({0} vs {1})")]
    TargetMismatch(usize, usize),
    #[error("spans do not share a middle foot ({0} vs {1})")]
    MiddleMismatch(usize, usize),
    #[error("spine feet do not match between spans {0} and {1}")]
    FeetMismatch(usize, usize),
    #[error("map value {value} out of range for a set of size {size}")]
    ValueOutOfRange { value: usize, size: usize },
    #[error("a spine needs at least one span")]
    EmptySpine,
    #[error("diagram is not functorial: {0}")]
    NonFunctorialData(String),
}

/// A total function between finite sets `0..source` and `0..target`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinSetMap {
    target: usize,
    values: Vec<usize>,
}

impl FinSetMap {
    pub fn new(target: usize, values: Vec<usize>) -> Result<Self, SpanError> {
        if let Some(&value) = values.iter().find(|&&v| v >= target) {
            return Err(SpanError::ValueOutOfRange { value, size: target });
        }
        Ok(FinSetMap { target, values })
    }

    pub fn identity(k: usize) -> Self {
        FinSetMap {
            target: k,
            values: (0..k).collect(),
        }
    }

    pub fn source(&self) -> usize {
        self.values.len()
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &FinSetMap) -> FinSetMap {
        assert_eq!(inner.target, self.source(), "maps are not composable");
        FinSetMap {
            target: self.target,
            values: inner.values.iter().map(|&x| self.values[x]).collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target];
        self.values.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target];
        for &v in &self.values {
            seen[v] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_bijective(&self) -> bool {
        self.source() == self.target && self.is_injective()
    }
}

/// Fiber product of two maps with common target, as sorted pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pullback {
    pub pairs: Vec<(usize, usize)>,
    pub left: FinSetMap,
    pub right: FinSetMap,
}

impl Pullback {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn index_of(&self, x: usize, y: usize) -> Option<usize> {
        self.pairs.binary_search(&(x, y)).ok()
    }
}

pub fn pullback_set(f: &FinSetMap, g: &FinSetMap) -> Result<Pullback, SpanError> {
    if f.target != g.target {
        return Err(SpanError::TargetMismatch(f.target, g.target));
    }
    let mut over: Vec<Vec<usize>> = vec![Vec::new(); g.target];
    for (y, &z) in g.values.iter().enumerate() {
        over[z].push(y);
    }
    let mut pairs = Vec::new();
    for (x, &z) in f.values.iter().enumerate() {
        pairs.extend(over[z].iter().map(|&y| (x, y)));
    }
    let left = FinSetMap {
        target: f.source(),
        values: pairs.iter().map(|p| p.0).collect(),
    };
    let right = FinSetMap {
        target: g.source(),
        values: pairs.iter().map(|p| p.1).collect(),
    };
    Ok(Pullback { pairs, left, right })
}

/// `c ← x → d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    pub left: FinSetMap,
    pub right: FinSetMap,
}

impl Span {
    pub fn new(left: FinSetMap, right: FinSetMap) -> Result<Self, SpanError> {
        if left.source() != right.source() {
            return Err(SpanError::NonFunctorialData(format!(
                "legs have apexes of sizes {} and {}",
                left.source(),
                right.source()
            )));
        }
        Ok(Span { left, right })
    }

    pub fn identity(k: usize) -> Self {
        Span {
            left: FinSetMap::identity(k),
            right: FinSetMap::identity(k),
        }
    }

    pub fn apex(&self) -> usize {
        self.left.source()
    }

    pub fn source_foot(&self) -> usize {
        self.left.target
    }

    pub fn target_foot(&self) -> usize {
        self.right.target
    }
}

/// A composite span together with the pairs making up its apex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanComposite {
    pub span: Span,
    pub pairs: Vec<(usize, usize)>,
}

pub fn compose_spans(s: &Span, t: &Span) -> Result<SpanComposite, SpanError> {
    if s.target_foot() != t.source_foot() {
        return Err(SpanError::MiddleMismatch(s.target_foot(), t.source_foot()));
    }
    let pb = pullback_set(&s.right, &t.left)?;
    let span = Span {
        left: s.left.after(&pb.left),
        right: t.right.after(&pb.right),
    };
    Ok(SpanComposite {
        span,
        pairs: pb.pairs,
    })
}

/// The re-association bijection from the apex of `(s ∘ t) ∘ u` to the apex
/// of `s ∘ (t ∘ u)`.
pub fn associator(s: &Span, t: &Span, u: &Span) -> Result<FinSetMap, SpanError> {
    let st = compose_spans(s, t)?;
    let left = compose_spans(&st.span, u)?;
    let tu = compose_spans(t, u)?;
    let right = compose_spans(s, &tu.span)?;
    let index: HashMap<(usize, usize), usize> = right
        .pairs
        .iter()
        .enumerate()
        .map(|(k, &p)| (p, k))
        .collect();
    let inner: HashMap<(usize, usize), usize> =
        tu.pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let values = left
        .pairs
        .iter()
        .map(|&(ab, c)| {
            let (a, b) = st.pairs[ab];
            index[&(a, inner[&(b, c)])]
        })
        .collect();
    FinSetMap::new(right.pairs.len(), values)
}

/// Whether `phi` is a map of spans `s → t` over the same feet.
pub fn is_span_morphism(s: &Span, t: &Span, phi: &FinSetMap) -> bool {
    phi.source() == s.apex()
        && phi.target() == t.apex()
        && t.left.after(phi) == s.left
        && t.right.after(phi) == s.right
}

/// A functor `Σⁿ → FinSet`, all values and maps stored explicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanDiagram {
    n: usize,
    sizes: BTreeMap<Interval, usize>,
    maps: BTreeMap<(Interval, Interval), FinSetMap>,
}

/// A unit square whose comparison map to the fiber product is not a bijection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareFailure {
    pub lo: usize,
    pub hi: usize,
    pub injective: bool,
    pub surjective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CartesianReport {
    pub squares_checked: usize,
    pub failures: Vec<SquareFailure>,
}

impl CartesianReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

fn intervals(n: usize) -> impl Iterator<Item = Interval> {
    (0..=n).flat_map(move |i| (i..=n).map(move |j| Interval::new(i, j)))
}

impl SpanDiagram {
    /// Builds a diagram from explicit data, checking only shapes and ranges.
    /// `maps` must contain one entry per pair `a ⊇ b`, including `a = b`.
    pub fn from_parts(
        n: usize,
        sizes: BTreeMap<Interval, usize>,
        maps: BTreeMap<(Interval, Interval), FinSetMap>,
    ) -> Result<Self, SpanError> {
        for a in intervals(n) {
            let Some(&size) = sizes.get(&a) else {
                return Err(SpanError::NonFunctorialData(format!("no value at {a}")));
            };
            for b in intervals(n).filter(|b| a.contains(b)) {
                let Some(map) = maps.get(&(a, b)) else {
                    return Err(SpanError::NonFunctorialData(format!("no map {a} -> {b}")));
                };
                if map.source() != size || map.target() != sizes[&b] {
                    return Err(SpanError::NonFunctorialData(format!(
                        "map {a} -> {b} has the wrong shape"
                    )));
                }
            }
        }
        if sizes.len() != intervals(n).count() || maps.keys().any(|(a, b)| !a.contains(b) || a.hi > n) {
            return Err(SpanError::NonFunctorialData("stray intervals".into()));
        }
        Ok(SpanDiagram { n, sizes, maps })
    }

    /// The constant diagram over `[0]`.
    pub fn object(size: usize) -> Self {
        let point = Interval::new(0, 0);
        SpanDiagram {
            n: 0,
            sizes: BTreeMap::from([(point, size)]),
            maps: BTreeMap::from([((point, point), FinSetMap::identity(size))]),
        }
    }

    /// Assembles a diagram from the two face maps of every interval of
    /// length ≥ 1: `hi[[i,j]]: F[i,j] → F[i,j-1]` and
    /// `lo[[i,j]]: F[i,j] → F[i+1,j]`. Longer restrictions are composites that
    /// drop upper endpoints first.
    pub fn from_faces(
        n: usize,
        sizes: &BTreeMap<Interval, usize>,
        hi: &BTreeMap<Interval, FinSetMap>,
        lo: &BTreeMap<Interval, FinSetMap>,
    ) -> Result<Self, SpanError> {
        let mut maps = BTreeMap::new();
        for a in intervals(n) {
            for b in intervals(n).filter(|b| a.contains(b)) {
                let mut map = FinSetMap::identity(sizes[&a]);
                let mut cur = a;
                while cur.hi > b.hi {
                    map = hi[&cur].after(&map);
                    cur = Interval::new(cur.lo, cur.hi - 1);
                }
                while cur.lo < b.lo {
                    map = lo[&cur].after(&map);
                    cur = Interval::new(cur.lo + 1, cur.hi);
                }
                maps.insert((a, b), map);
            }
        }
        SpanDiagram::from_parts(n, sizes.clone(), maps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self, interval: Interval) -> usize {
        self.sizes[&interval]
    }

    pub fn sizes(&self) -> &BTreeMap<Interval, usize> {
        &self.sizes
    }

    /// The restriction `F[a] → F[b]` for `a ⊇ b`.
    pub fn map(&self, a: Interval, b: Interval) -> &FinSetMap {
        &self.maps[&(a, b)]
    }

    pub fn maps(&self) -> &BTreeMap<(Interval, Interval), FinSetMap> {
        &self.maps
    }

    /// Identity and composition laws over Σⁿ.
    pub fn check_functorial(&self) -> Result<(), SpanError> {
        for a in intervals(self.n) {
            if self.maps[&(a, a)] != FinSetMap::identity(self.sizes[&a]) {
                return Err(SpanError::NonFunctorialData(format!("map {a} -> {a} is not the identity")));
            }
            for b in intervals(self.n).filter(|b| a.contains(b)) {
                for c in intervals(self.n).filter(|c| b.contains(c)) {
                    if self.maps[&(b, c)].after(&self.maps[&(a, b)]) != self.maps[&(a, c)] {
                        return Err(SpanError::NonFunctorialData(format!(
                            "restrictions {a} -> {b} -> {c} disagree with {a} -> {c}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn check_cartesian_squares(&self) -> Result<CartesianReport, SpanError> {
        self.check_functorial()?;
        let mut report = CartesianReport::default();
        for len in 2..=self.n {
            for i in 0..=self.n - len {
                let j = i + len;
                let top = Interval::new(i, j);
                let left = Interval::new(i, j - 1);
                let right = Interval::new(i + 1, j);
                let bottom = Interval::new(i + 1, j - 1);
                let pb = pullback_set(self.map(left, bottom), self.map(right, bottom))?;
                let to_left = self.map(top, left);
                let to_right = self.map(top, right);
                let mut hit = vec![0usize; pb.len()];
                for x in 0..self.sizes[&top] {
                    let k = pb
                        .index_of(to_left.apply(x), to_right.apply(x))
                        .expect("square commutes by functoriality");
                    hit[k] += 1;
                }
                report.squares_checked += 1;
                let injective = hit.iter().all(|&h| h <= 1);
                let surjective = hit.iter().all(|&h| h >= 1);
                if !(injective && surjective) {
                    report.failures.push(SquareFailure {
                        lo: i,
                        hi: j,
                        injective,
                        surjective,
                    });
                }
            }
        }
        Ok(report)
    }

    /// The spans `F[i,i] ← F[i,i+1] → F[i+1,i+1]`.
    pub fn spine(&self) -> Vec<Span> {
        (0..self.n)
            .map(|i| {
                let edge = Interval::new(i, i + 1);
                Span {
                    left: self.map(edge, Interval::new(i, i)).clone(),
                    right: self.map(edge, Interval::new(i + 1, i + 1)).clone(),
                }
            })
            .collect()
    }

    /// Images of `x ∈ F[a]` in the edges `[k,k+1] ⊆ a` (or `x` itself when
    /// `a` is a point).
    pub fn spine_signature(&self, a: Interval, x: usize) -> Vec<usize> {
        if a.is_point() {
            return vec![x];
        }
        (a.lo..a.hi)
            .map(|k| self.map(a, Interval::new(k, k + 1)).apply(x))
            .collect()
    }
}

/// Reconstructs the unique (up to iso) cartesian diagram with the given spine
/// by iterated pullback `F[i,j] = F[i,j-1] ×_{F[i+1,j-1]} F[i+1,j]`.
pub fn fill_from_spine(spine: &[Span]) -> Result<SpanDiagram, SpanError> {
    if spine.is_empty() {
        return Err(SpanError::EmptySpine);
    }
    for (k, w) in spine.windows(2).enumerate() {
        if w[0].target_foot() != w[1].source_foot() {
            return Err(SpanError::FeetMismatch(k, k + 1));
        }
    }
    let n = spine.len();
    let mut sizes = BTreeMap::new();
    let mut hi = BTreeMap::new();
    let mut lo = BTreeMap::new();
    for (i, s) in spine.iter().enumerate() {
        sizes.insert(Interval::new(i, i), s.source_foot());
        sizes.insert(Interval::new(i, i + 1), s.apex());
        hi.insert(Interval::new(i, i + 1), s.left.clone());
        lo.insert(Interval::new(i, i + 1), s.right.clone());
    }
    sizes.insert(Interval::new(n, n), spine[n - 1].target_foot());
    for len in 2..=n {
        for i in 0..=n - len {
            let j = i + len;
            let left = Interval::new(i, j - 1);
            let right = Interval::new(i + 1, j);
            let pb = pullback_set(&lo[&left], &hi[&right])?;
            sizes.insert(Interval::new(i, j), pb.len());
            hi.insert(Interval::new(i, j), pb.left);
            lo.insert(Interval::new(i, j), pb.right);
        }
    }
    SpanDiagram::from_faces(n, &sizes, &hi, &lo)
}

/// Restriction along `op: [m] → [n]`: the value at `[i,j]` is the value at
/// `[op(i), op(j)]`.
pub fn restrict_diagram(op: &SimplicialOperator, d: &SpanDiagram) -> Result<SpanDiagram, SpanError> {
    if op.codomain() != d.n {
        return Err(SpanError::NonFunctorialData(format!(
            "operator lands in [{}] but the diagram lives over [{}]",
            op.codomain(),
            d.n
        )));
    }
    let m = op.domain();
    let push = |a: Interval| Interval::new(op.apply(a.lo), op.apply(a.hi));
    let sizes = intervals(m).map(|a| (a, d.size(push(a)))).collect();
    let maps = intervals(m)
        .flat_map(|a| intervals(m).filter(move |b| a.contains(b)).map(move |b| (a, b)))
        .map(|(a, b)| ((a, b), d.map(push(a), push(b)).clone()))
        .collect();
    SpanDiagram::from_parts(m, sizes, maps)
}

/// Componentwise bijections `a[I] → b[I]` commuting with every restriction.
pub fn is_diagram_isomorphism(a: &SpanDiagram, b: &SpanDiagram, components: &BTreeMap<Interval, FinSetMap>) -> bool {
    a.n == b.n
        && intervals(a.n).all(|i| {
            components.get(&i).is_some_and(|c| {
                c.source() == a.size(i) && c.target() == b.size(i) && c.is_bijective()
            })
        })
        && a
            .maps
            .iter()
            .all(|(&(x, y), map)| components[&y].after(map) == b.map(x, y).after(&components[&x]))
}

/// The comparison from a diagram to the filling of its own spine, matching
/// elements by spine signature. Returns `None` when some component is not a
/// bijection, which for a functorial diagram happens exactly when a unit
/// square fails to be cartesian.
pub fn segal_comparison(d: &SpanDiagram) -> Option<(SpanDiagram, BTreeMap<Interval, FinSetMap>)> {
    if d.n == 0 {
        let size = d.size(Interval::new(0, 0));
        return Some((
            d.clone(),
            BTreeMap::from([(Interval::new(0, 0), FinSetMap::identity(size))]),
        ));
    }
    let filled = fill_from_spine(&d.spine()).ok()?;
    let mut components = BTreeMap::new();
    for a in intervals(d.n) {
        let index: HashMap<Vec<usize>, usize> = (0..filled.size(a))
            .map(|y| (filled.spine_signature(a, y), y))
            .collect();
        let values: Option<Vec<usize>> = (0..d.size(a))
            .map(|x| index.get(&d.spine_signature(a, x)).copied())
            .collect();
        let map = FinSetMap::new(filled.size(a), values?).ok()?;
        if !map.is_bijective() {
            return None;
        }
        components.insert(a, map);
    }
    is_diagram_isomorphism(d, &filled, &components).then_some((filled, components))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(target: usize, values: &[usize]) -> FinSetMap {
        FinSetMap::new(target, values.to_vec()).unwrap()
    }

    #[test]
    fn pullback_examples() {
        let id = FinSetMap::identity(3);
        let pb = pullback_set(&id, &id).unwrap();
        assert_eq!(pb.pairs, vec![(0, 0), (1, 1), (2, 2)]);

        let f = map(2, &[0, 1]);
        let g = map(2, &[0]);
        assert_eq!(pullback_set(&f, &g).unwrap().pairs, vec![(0, 0)]);

        let empty = map(2, &[]);
        assert!(pullback_set(&f, &empty).unwrap().is_empty());
        assert_eq!(
            pullback_set(&f, &map(3, &[0])),
            Err(SpanError::TargetMismatch(2, 3))
        );
    }

    #[test]
    fn compose_examples() {
        let s = Span::new(map(2, &[0, 1]), map(1, &[0, 0])).unwrap();
        let unit = compose_spans(&s, &Span::identity(1)).unwrap();
        assert_eq!(unit.span, s);

        let a = Span::new(map(1, &[0]), map(1, &[0])).unwrap();
        assert_eq!(compose_spans(&a, &a).unwrap().span.apex(), 1);

        let t = Span::new(map(1, &[0, 0, 0]), map(2, &[0, 1, 1])).unwrap();
        assert_eq!(compose_spans(&s, &t).unwrap().span.apex(), 6);
        assert_eq!(compose_spans(&s, &s).unwrap_err(), SpanError::MiddleMismatch(1, 2));
    }

    #[test]
    fn fill_examples() {
        let s = Span::new(map(2, &[0, 1, 1]), map(2, &[1, 0, 1])).unwrap();
        let d = fill_from_spine(std::slice::from_ref(&s)).unwrap();
        assert_eq!(d.spine(), vec![s.clone()]);

        let point = Span::identity(1);
        let d = fill_from_spine(&[point.clone(), point]).unwrap();
        assert!(d.sizes().values().all(|&k| k == 1));

        // middle sets of sizes (2, 1, 2)
        let s = Span::new(map(2, &[0, 1]), map(1, &[0, 0])).unwrap();
        let t = Span::new(map(1, &[0, 0]), map(2, &[0, 1])).unwrap();
        let d = fill_from_spine(&[s, t]).unwrap();
        assert_eq!(d.size(Interval::new(0, 2)), 4);
        assert!(d.check_cartesian_squares().unwrap().passes());
    }

    #[test]
    fn enlarged_top_value_fails_its_square() {
        let s = Span::new(map(2, &[0, 1]), map(1, &[0, 0])).unwrap();
        let t = Span::new(map(1, &[0, 0]), map(2, &[0, 1])).unwrap();
        let d = fill_from_spine(&[s, t]).unwrap();
        // duplicate element 0 of F[0,2]
        let top = Interval::new(0, 2);
        let mut sizes = d.sizes().clone();
        *sizes.get_mut(&top).unwrap() += 1;
        let mut maps = d.maps().clone();
        for ((a, _), m) in maps.iter_mut() {
            if *a == top {
                let mut v = m.values().to_vec();
                v.push(v[0]);
                *m = FinSetMap::new(m.target(), v).unwrap();
            }
        }
        let size = sizes[&top];
        maps.insert((top, top), FinSetMap::identity(size));
        let bad = SpanDiagram::from_parts(2, sizes, maps).unwrap();
        let report = bad.check_cartesian_squares().unwrap();
        assert_eq!(
            report.failures,
            vec![SquareFailure {
                lo: 0,
                hi: 2,
                injective: false,
                surjective: true
            }]
        );
    }

    #[test]
    fn small_diagrams_pass_vacuously() {
        assert!(SpanDiagram::object(2).check_cartesian_squares().unwrap().passes());
        let s = Span::new(map(1, &[0, 0]), map(3, &[2, 2])).unwrap();
        let d = fill_from_spine(&[s]).unwrap();
        let report = d.check_cartesian_squares().unwrap();
        assert_eq!(report.squares_checked, 0);
    }

    #[test]
    fn restriction_examples() {
        let s = Span::new(map(2, &[0, 1, 1]), map(2, &[1, 0, 0])).unwrap();
        let t = Span::new(map(2, &[0, 0]), map(1, &[0, 0])).unwrap();
        let d = fill_from_spine(&[s.clone(), t.clone()]).unwrap();
        assert_eq!(restrict_diagram(&SimplicialOperator::identity(2), &d).unwrap(), d);
        let first = restrict_diagram(&SimplicialOperator::interval_inclusion(0, 1, 2), &d).unwrap();
        assert_eq!(first.spine(), vec![s.clone()]);
        let outer = SimplicialOperator::new(2, vec![0, 2]).unwrap();
        let composite = restrict_diagram(&outer, &d).unwrap();
        assert_eq!(composite.spine(), vec![compose_spans(&s, &t).unwrap().span]);
    }

    #[test]
    fn associator_is_a_span_isomorphism() {
        let s = Span::new(map(2, &[0, 1, 1]), map(2, &[1, 0, 1])).unwrap();
        let t = Span::new(map(2, &[0, 1, 1]), map(2, &[0, 0, 1])).unwrap();
        let u = Span::new(map(2, &[1, 1]), map(3, &[0, 2])).unwrap();
        let phi = associator(&s, &t, &u).unwrap();
        let left = compose_spans(&compose_spans(&s, &t).unwrap().span, &u).unwrap().span;
        let right = compose_spans(&s, &compose_spans(&t, &u).unwrap().span).unwrap().span;
        assert!(phi.is_bijective());
        assert!(is_span_morphism(&left, &right, &phi));
    }
}
