//! Monotone maps `[m] -> [n]` of the simplex category, their
//! active/inert/idle classification, and the interval posets `Σⁿ`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplexError {
    #[error("an operator needs at least one value")]
    EmptyDomain,
    #[error("value {value} at position {position} exceeds codomain [{codomain}]")]
    OutOfRange {
        position: usize,
        value: usize,
        codomain: usize,
    },
    #[error("values decrease at position {position}")]
    NonMonotone { position: usize },
    #[error("cannot compose {outer} after {inner}")]
    NotComposable { outer: String, inner: String },
}

/// A weakly monotone map `[m] -> [n]`, stored as its `m + 1` values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplicialOperator {
    codomain: usize,
    values: Vec<usize>,
}

impl SimplicialOperator {
    pub fn new(codomain: usize, values: Vec<usize>) -> Result<Self, SimplexError> {
        if values.is_empty() {
            return Err(SimplexError::EmptyDomain);
        }
        for (position, &value) in values.iter().enumerate() {
            if value > codomain {
                return Err(SimplexError::OutOfRange {
                    position,
                    value,
                    codomain,
                });
            }
            if position > 0 && values[position - 1] > value {
                return Err(SimplexError::NonMonotone { position });
            }
        }
        Ok(SimplicialOperator { codomain, values })
    }

    pub fn identity(n: usize) -> Self {
        SimplicialOperator {
            codomain: n,
            values: (0..=n).collect(),
        }
    }

    /// The subinterval inclusion `ρ_{i,j}: [j - i] -> [n]`.
    pub fn interval_inclusion(i: usize, j: usize, n: usize) -> Self {
        assert!(i <= j && j <= n, "interval [{i},{j}] not inside [{n}]");
        SimplicialOperator {
            codomain: n,
            values: (i..=j).collect(),
        }
    }

    pub fn domain(&self) -> usize {
        self.values.len() - 1
    }

    pub fn codomain(&self) -> usize {
        self.codomain
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, t: usize) -> usize {
        self.values[t]
    }

    pub fn first(&self) -> usize {
        self.values[0]
    }

    pub fn last(&self) -> usize {
        self.values[self.values.len() - 1]
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &SimplicialOperator) -> Result<Self, SimplexError> {
        if inner.codomain != self.domain() {
            return Err(SimplexError::NotComposable {
                outer: self.to_string(),
                inner: inner.to_string(),
            });
        }
        Ok(SimplicialOperator {
            codomain: self.codomain,
            values: inner.values.iter().map(|&t| self.values[t]).collect(),
        })
    }

    pub fn is_active(&self) -> bool {
        self.first() == 0 && self.last() == self.codomain
    }

    pub fn is_injective(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_surjective(&self) -> bool {
        self.first() == 0 && self.last() == self.codomain && self.has_convex_image()
    }

    /// The image of a monotone map is convex iff consecutive values never
    /// jump by more than one.
    pub fn has_convex_image(&self) -> bool {
        self.values.windows(2).all(|w| w[1] - w[0] <= 1)
    }

    pub fn is_idle(&self) -> bool {
        self.has_convex_image()
    }

    pub fn is_inert(&self) -> bool {
        self.is_idle() && self.is_injective()
    }

    pub fn classify(&self) -> OperatorClass {
        OperatorClass {
            active: self.is_active(),
            idle: self.is_idle(),
            inert: self.is_inert(),
            injective: self.is_injective(),
            surjective: self.is_surjective(),
        }
    }

    /// Splits `self` as `inert ∘ active`, where the active part is the
    /// corestriction to `[first, last]` and the inert part is `ρ_{first,last}`.
    pub fn factor_active_inert(&self) -> (SimplicialOperator, SimplicialOperator) {
        let lo = self.first();
        let hi = self.last();
        let active = SimplicialOperator {
            codomain: hi - lo,
            values: self.values.iter().map(|v| v - lo).collect(),
        };
        (active, Self::interval_inclusion(lo, hi, self.codomain))
    }
}

impl fmt::Display for SimplicialOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]->[{}]:(", self.domain(), self.codomain)?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OperatorClass {
    pub active: bool,
    pub idle: bool,
    pub inert: bool,
    pub injective: bool,
    pub surjective: bool,
}

/// Named filters for [`enumerate_operators`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    All,
    Active,
    Idle,
    Inert,
    Injective,
    Surjective,
}

impl OperatorKind {
    pub fn admits(self, class: OperatorClass) -> bool {
        match self {
            OperatorKind::All => true,
            OperatorKind::Active => class.active,
            OperatorKind::Idle => class.idle,
            OperatorKind::Inert => class.inert,
            OperatorKind::Injective => class.injective,
            OperatorKind::Surjective => class.surjective,
        }
    }
}

/// All monotone maps `[m] -> [n]` of the given kind, in lexicographic order
/// of their value lists.
pub fn enumerate_operators(m: usize, n: usize, kind: OperatorKind) -> Vec<SimplicialOperator> {
    enumerate_operators_where(m, n, |class| kind.admits(class))
}

pub fn enumerate_operators_where(
    m: usize,
    n: usize,
    mut keep: impl FnMut(OperatorClass) -> bool,
) -> Vec<SimplicialOperator> {
    let mut out = Vec::new();
    let mut values = vec![0usize; m + 1];
    loop {
        let op = SimplicialOperator {
            codomain: n,
            values: values.clone(),
        };
        if keep(op.classify()) {
            out.push(op);
        }
        // next weakly increasing sequence in lexicographic order
        let mut pos = m as isize;
        while pos >= 0 && values[pos as usize] == n {
            pos -= 1;
        }
        if pos < 0 {
            return out;
        }
        let p = pos as usize;
        values[p] += 1;
        let v = values[p];
        for slot in values.iter_mut().skip(p + 1) {
            *slot = v;
        }
    }
}

/// A nonempty convex subset `[lo, hi]` of some `[n]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
}

impl Interval {
    pub fn new(lo: usize, hi: usize) -> Self {
        assert!(lo <= hi, "empty interval [{lo},{hi}]");
        Interval { lo, hi }
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Number of steps `hi - lo`; a point has length zero.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.hi - self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Position in the lexicographic listing of intervals of `[n]`.
    pub fn index(&self, n: usize) -> usize {
        // intervals starting before lo: sum_{i<lo} (n + 1 - i)
        let before: usize = (0..self.lo).map(|i| n + 1 - i).sum();
        before + (self.hi - self.lo)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// The poset `Σⁿ` of nonempty intervals of `[n]` under reverse inclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaPoset {
    n: usize,
    intervals: Vec<Interval>,
}

impl SigmaPoset {
    pub fn new(n: usize) -> Self {
        let mut intervals = Vec::new();
        for lo in 0..=n {
            for hi in lo..=n {
                intervals.push(Interval { lo, hi });
            }
        }
        SigmaPoset { n, intervals }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// `a ≤ b` in `Σⁿ` iff `a ⊇ b`.
    pub fn le(&self, a: &Interval, b: &Interval) -> bool {
        a.contains(b)
    }

    pub fn minimum(&self) -> Interval {
        Interval { lo: 0, hi: self.n }
    }

    /// Pairs `(a, b)` with `a ≤ b`, including reflexive ones.
    pub fn relations(&self) -> Vec<(Interval, Interval)> {
        let mut out = Vec::new();
        for a in &self.intervals {
            for b in &self.intervals {
                if a.contains(b) {
                    out.push((*a, *b));
                }
            }
        }
        out
    }
}

pub fn sigma_poset(n: usize) -> SigmaPoset {
    SigmaPoset::new(n)
}

/// The order-preserving map `Σᵐ -> Σⁿ` induced by `op: [m] -> [n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaMap {
    domain: usize,
    codomain: usize,
    images: Vec<Interval>,
}

impl SigmaMap {
    pub fn apply(&self, interval: &Interval) -> Interval {
        self.images[interval.index(self.domain)]
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn codomain(&self) -> usize {
        self.codomain
    }

    pub fn images(&self) -> &[Interval] {
        &self.images
    }

    pub fn is_order_preserving(&self) -> bool {
        let source = SigmaPoset::new(self.domain);
        source
            .relations()
            .iter()
            .all(|(a, b)| self.apply(a).contains(&self.apply(b)))
    }
}

pub fn sigma_pushforward(op: &SimplicialOperator) -> SigmaMap {
    let source = SigmaPoset::new(op.domain());
    let images = source
        .intervals()
        .iter()
        .map(|iv| Interval {
            lo: op.apply(iv.lo),
            hi: op.apply(iv.hi),
        })
        .collect();
    SigmaMap {
        domain: op.domain(),
        codomain: op.codomain(),
        images,
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(n: usize, v: &[usize]) -> SimplicialOperator {
        SimplicialOperator::new(n, v.to_vec()).unwrap()
    }

    #[test]
    fn identity_is_in_every_class() {
        let c = SimplicialOperator::identity(2).classify();
        assert!(c.active && c.inert && c.idle && c.injective && c.surjective);
    }

    #[test]
    fn skipping_map_is_active_not_idle() {
        let c = op(2, &[0, 2]).classify();
        assert!(c.active);
        assert!(!c.idle);
        assert!(!c.inert);
    }

    #[test]
    fn degeneracy_is_active_idle_not_inert() {
        let c = op(1, &[0, 0, 1]).classify();
        assert!(c.active && c.idle);
        assert!(!c.inert);
        assert!(!c.injective);
    }

    #[test]
    fn malformed_values_are_rejected() {
        assert_eq!(
            SimplicialOperator::new(2, vec![1, 0]),
            Err(SimplexError::NonMonotone { position: 1 })
        );
        assert!(matches!(
            SimplicialOperator::new(1, vec![0, 2]),
            Err(SimplexError::OutOfRange { value: 2, .. })
        ));
        assert_eq!(
            SimplicialOperator::new(1, vec![]),
            Err(SimplexError::EmptyDomain)
        );
    }

    #[test]
    fn factorization_examples() {
        let (a, i) = op(3, &[1, 2]).factor_active_inert();
        assert_eq!(a, op(1, &[0, 1]));
        assert_eq!(i, SimplicialOperator::interval_inclusion(1, 2, 3));
        assert_eq!(i.compose(&a).unwrap(), op(3, &[1, 2]));

        let id = SimplicialOperator::identity(3);
        assert_eq!(id.factor_active_inert(), (id.clone(), id.clone()));

        let (a, i) = op(2, &[1]).factor_active_inert();
        assert_eq!(a, SimplicialOperator::identity(0));
        assert_eq!(i, op(2, &[1]));
    }

    #[test]
    fn enumeration_examples() {
        let all = enumerate_operators(1, 2, OperatorKind::All);
        assert_eq!(all.len(), 6);
        assert!(all.windows(2).all(|w| w[0].values() < w[1].values()));
        let idle = enumerate_operators(1, 2, OperatorKind::Idle);
        assert_eq!(idle.len(), 5);
        assert!(!idle.contains(&op(2, &[0, 2])));
        assert_eq!(enumerate_operators(0, 1, OperatorKind::Injective).len(), 2);
    }

    #[test]
    fn sigma_small_cases() {
        let s1 = sigma_poset(1);
        assert_eq!(s1.len(), 3);
        let min = s1.minimum();
        assert_eq!(min, Interval::new(0, 1));
        for iv in s1.intervals() {
            assert!(s1.le(&min, iv));
        }
        assert!(!s1.le(&Interval::new(0, 0), &Interval::new(1, 1)));
        assert!(!s1.le(&Interval::new(1, 1), &Interval::new(0, 0)));
        assert_eq!(sigma_poset(0).len(), 1);
        assert_eq!(sigma_poset(2).len(), 6);
    }

    #[test]
    fn interval_index_matches_listing() {
        for n in 0..6 {
            let s = sigma_poset(n);
            for (k, iv) in s.intervals().iter().enumerate() {
                assert_eq!(iv.index(n), k);
            }
        }
    }

    #[test]
    fn pushforward_examples() {
        let p = sigma_pushforward(&op(1, &[0, 0, 1]));
        assert_eq!(p.apply(&Interval::new(0, 1)), Interval::new(0, 0));
        assert_eq!(p.apply(&Interval::new(1, 2)), Interval::new(0, 1));
        assert_eq!(p.apply(&Interval::new(0, 2)), Interval::new(0, 1));
        assert!(p.is_order_preserving());

        let id = sigma_pushforward(&SimplicialOperator::identity(2));
        for iv in sigma_poset(2).intervals() {
            assert_eq!(id.apply(iv), *iv);
        }
        let q = sigma_pushforward(&op(2, &[0, 2]));
        assert_eq!(q.apply(&Interval::new(0, 1)), Interval::new(0, 2));
    }

    #[test]
    fn display_format() {
        assert_eq!(op(2, &[0, 2]).to_string(), "[1]->[2]:(0,2)");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(3, 5), 0);
    }
}
