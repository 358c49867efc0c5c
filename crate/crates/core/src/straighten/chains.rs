//! Chain cells over `[n]` and categories over `[n]`.
//!
//! A category over `[n]` gives the cell of its fibers, mapping sets over
//! `i → j` and composition. In the other direction a cell is glued by its
//! collage; for a composite cell this is the gluing of consecutive collages
//! along the inner fibers.

use std::collections::BTreeMap;

use crate::fincat::{FinCategory, Functor};
use crate::morita::{compose_chain, composite_check, ChainCell};

use super::{straighten, unstraighten, Collage, LaxFunctorToCorr, StraightenError};

/// `n` if `c` is `[n]` with its objects in order.
pub fn ordinal_length(c: &FinCategory) -> Option<usize> {
    let n = c.num_objects().checked_sub(1)?;
    let shaped = c
        .objects()
        .all(|i| c.objects().all(|j| c.hom(i, j).len() == usize::from(i <= j)));
    shaped.then_some(n)
}

pub fn total_to_chain(p: &Functor) -> Result<ChainCell, StraightenError> {
    let base = p.target();
    let n = ordinal_length(base).ok_or(StraightenError::NotOverOrdinal)?;
    let lax = straighten(p)?;
    let arrow = |i: usize, j: usize| base.hom(i, j)[0];
    let mut modules = BTreeMap::new();
    let mut mu = BTreeMap::new();
    for i in 0..=n {
        for j in i + 1..=n {
            modules.insert((i, j), lax.arrow(arrow(i, j)).clone());
            for k in j + 1..=n {
                mu.insert((i, j, k), lax.comparator(arrow(i, j), arrow(j, k)).clone());
            }
        }
    }
    Ok(ChainCell::new(lax.fibers().to_vec(), modules, mu)?)
}

/// The collage of a cell over `[n]`, composite or not.
pub fn glue_chain(cell: &ChainCell) -> Result<Collage, StraightenError> {
    unstraighten(&LaxFunctorToCorr::from_chain(cell)?)
}

/// Like [`glue_chain`], but only for composite cells, whose gluing is
/// Conduché over `[n]`.
pub fn chain_to_total(cell: &ChainCell) -> Result<Collage, StraightenError> {
    let report = composite_check(cell);
    if !report.passes() {
        return Err(StraightenError::NonCompositeCell(report.failures));
    }
    glue_chain(cell)
}

/// Glues only the spine `M_{01}, …, M_{n-1,n}`: the collage of its composite
/// filling.
pub fn glue_spine(cell: &ChainCell) -> Result<Collage, StraightenError> {
    let spine = (0..cell.n()).map(|i| cell.module(i, i + 1).clone()).collect();
    glue_chain(&compose_chain(cell.algebras().to_vec(), spine)?)
}
