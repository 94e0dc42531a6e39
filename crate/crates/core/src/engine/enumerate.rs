use std::collections::HashSet;

use rayon::prelude::*;

use super::EngineError;
use crate::lattice::{convex_hull, FiniteSite, LatticePoint};

/// Largest site searched exhaustively unless the caller raises the budget.
pub const DEFAULT_BUDGET: usize = 27;

/// Hard ceiling imposed by the bitmask representation.
pub const MAX_SITE_POINTS: usize = 64;

/// A lattice-convex subset `C = conv(C) ∩ S`, stored as bitmasks over the
/// site's sorted point list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ClosedSet {
    mask: u64,
    vertex_mask: u64,
}

impl ClosedSet {
    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_mask.count_ones() as usize
    }

    /// Points of `S ∩ conv(C)` that are not vertices of `conv(C)`.
    pub fn nonvertex_count(&self) -> usize {
        self.len() - self.vertex_count()
    }

    pub fn indices(&self) -> Vec<usize> {
        bits(self.mask)
    }

    pub fn points(&self, site: &FiniteSite) -> Vec<LatticePoint> {
        pick(site, self.mask)
    }

    pub fn vertices(&self, site: &FiniteSite) -> Vec<LatticePoint> {
        pick(site, self.vertex_mask)
    }
}

fn bits(mut m: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

fn pick(site: &FiniteSite, m: u64) -> Vec<LatticePoint> {
    bits(m)
        .into_iter()
        .map(|i| site.points()[i].clone())
        .collect()
}

fn close(site: &FiniteSite, mask: u64) -> Result<ClosedSet, EngineError> {
    let p = convex_hull(&pick(site, mask))?;
    let mut closed = 0u64;
    let mut vertex_mask = 0u64;
    for (i, x) in site.points().iter().enumerate() {
        if p.contains(x) {
            closed |= 1 << i;
            if p.is_vertex(x) {
                vertex_mask |= 1 << i;
            }
        }
    }
    Ok(ClosedSet {
        mask: closed,
        vertex_mask,
    })
}

pub fn enumerate_convex_subsets(site: &FiniteSite) -> Result<Vec<ClosedSet>, EngineError> {
    enumerate_convex_subsets_with(site, DEFAULT_BUDGET)
}

/// Every non-empty lattice-convex subset of `site` exactly once, ordered by
/// cardinality and then by the lexicographic order of index lists.
///
/// Sets are grown one point at a time and re-closed. Removing a vertex from
/// a closed set leaves a closed set, so every closed set is reached from a
/// singleton.
pub fn enumerate_convex_subsets_with(
    site: &FiniteSite,
    budget: usize,
) -> Result<Vec<ClosedSet>, EngineError> {
    let n = site.len();
    if n > budget.min(MAX_SITE_POINTS) {
        return Err(EngineError::BudgetExceeded {
            points: n,
            budget: budget.min(MAX_SITE_POINTS),
            subsets_upper_bound: (1u128 << n.min(127)) - 1,
        });
    }
    let mut frontier: Vec<ClosedSet> = (0..n)
        .map(|i| close(site, 1 << i))
        .collect::<Result<_, _>>()?;
    let mut seen: HashSet<u64> = frontier.iter().map(|c| c.mask).collect();
    let mut all = frontier.clone();
    while !frontier.is_empty() {
        let grown: Vec<Result<ClosedSet, EngineError>> = frontier
            .par_iter()
            .flat_map_iter(|c| {
                let m = c.mask;
                (0..n)
                    .filter(move |&i| m & (1 << i) == 0)
                    .map(move |i| close(site, m | (1 << i)))
            })
            .collect();
        let mut next = grown.into_iter().collect::<Result<Vec<_>, _>>()?;
        next.sort_unstable_by_key(|c| c.mask);
        next.dedup_by_key(|c| c.mask);
        next.retain(|c| seen.insert(c.mask));
        all.extend_from_slice(&next);
        frontier = next;
    }
    all.sort_by_cached_key(|c| (c.len(), c.indices()));
    Ok(all)
}
