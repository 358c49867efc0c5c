//! Small named functors that come up repeatedly in tests and examples.

use std::sync::Arc;

use crate::fincat::{FinCategory, Functor};

/// `[1]` over `[2]`, sending the arrow to the composite `0 -> 2`; the middle
/// fiber is empty.
pub fn arrow_over_outer_composite() -> Functor {
    let d = Arc::new(FinCategory::ordinal(1));
    let c = Arc::new(FinCategory::ordinal(2));
    let outer = c.morphism_index("0>2").expect("0>2");
    let id0 = c.identity(0);
    let id2 = c.identity(2);
    // [1] morphisms in order: id0, 0>1, id1
    Functor::new(d, c, vec![0, 2], vec![id0, outer, id2]).expect("arrow over 0>2")
}

/// Two parallel arrows over the single arrow of `[1]`.
pub fn parallel_pair_over_arrow() -> Functor {
    let d = Arc::new(FinCategory::parallel_pair());
    let c = Arc::new(FinCategory::ordinal(1));
    let arrow = c.morphism_index("0>1").expect("0>1");
    Functor::new(
        d,
        c.clone(),
        vec![0, 1],
        vec![c.identity(0), c.identity(1), arrow, arrow],
    )
    .expect("parallel pair over [1]")
}

/// Two points over one point.
pub fn two_points_over_point() -> Functor {
    Functor::to_terminal(Arc::new(FinCategory::discrete(2)))
}

pub fn identity_of_ordinal(n: usize) -> Functor {
    Functor::identity(Arc::new(FinCategory::ordinal(n)))
}
