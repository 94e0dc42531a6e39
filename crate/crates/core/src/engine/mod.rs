//! Profiles `g(S,·)` and `c(S,·)` of finite sites, computed by exhaustive
//! enumeration of lattice-convex subsets, plus derived quantities and bound
//! audits.

mod audit;
mod enumerate;
mod ext;
mod site;

pub use audit::{bound_audit, derived_quantities, BoundReport, DerivedRow};
pub use enumerate::{
    enumerate_convex_subsets, enumerate_convex_subsets_with, ClosedSet, DEFAULT_BUDGET,
    MAX_SITE_POINTS,
};
pub use ext::ExtInt;
pub use site::{SiteParseError, SiteSpec};

use serde::Serialize;
use thiserror::Error;

use crate::lattice::{FiniteSite, LatticeError, LatticePoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(
        "site has {points} points, above the budget {budget} (up to {subsets_upper_bound} subsets)"
    )]
    BudgetExceeded {
        points: usize,
        budget: usize,
        subsets_upper_bound: u128,
    },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("inconsistent profile: {0}")]
    Inconsistent(String),
}

/// `g(S,k)` and `c(S,k)` for `k = 0..=k_max`, with one witness vertex list
/// per finite `g` value. `site_cardinality` is `None` for infinite sites.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HellyProfile {
    pub site: String,
    pub dim: usize,
    pub k_max: usize,
    pub g: Vec<ExtInt>,
    pub c: Vec<ExtInt>,
    pub witnesses: Vec<Option<Vec<LatticePoint>>>,
    pub site_cardinality: Option<usize>,
}

impl HellyProfile {
    /// `h(S) = c(S,0) = g(S,0)`.
    pub fn helly_number(&self) -> ExtInt {
        self.g.first().copied().unwrap_or(ExtInt::NegInf)
    }
}

fn describe(site: &FiniteSite) -> String {
    format!("{}-point site in dimension {}", site.len(), site.dim())
}

/// `g(S,k)` from an enumeration; the first set in enumeration order attaining
/// the maximum is the witness.
pub fn g_profile_from(
    site: &FiniteSite,
    sets: &[ClosedSet],
    k_max: usize,
    label: Option<&str>,
) -> HellyProfile {
    let mut g = vec![ExtInt::NegInf; k_max + 1];
    let mut best: Vec<Option<&ClosedSet>> = vec![None; k_max + 1];
    for c in sets {
        let k = c.nonvertex_count();
        if k > k_max {
            continue;
        }
        let v = ExtInt::Fin(c.vertex_count() as i64);
        if v > g[k] {
            g[k] = v;
            best[k] = Some(c);
        }
    }
    HellyProfile {
        site: label.map_or_else(|| describe(site), str::to_string),
        dim: site.dim(),
        k_max,
        g,
        c: Vec::new(),
        witnesses: best
            .into_iter()
            .map(|c| c.map(|c| c.vertices(site)))
            .collect(),
        site_cardinality: Some(site.len()),
    }
}

pub fn g_profile(site: &FiniteSite, k_max: usize) -> Result<HellyProfile, EngineError> {
    let sets = enumerate_convex_subsets(site)?;
    Ok(g_profile_from(site, &sets, k_max, None))
}

/// Fills `c` by `c_0 = g_0` and `c_k = max(c_{k-1} - 1, g_k)` for
/// `0 < k <= |S|`; `c_k = -inf` beyond `|S|`.
pub fn c_from_g(profile: &HellyProfile) -> HellyProfile {
    let mut out = profile.clone();
    out.c = Vec::with_capacity(profile.g.len());
    for (k, &gk) in profile.g.iter().enumerate() {
        let v = if profile.site_cardinality.is_some_and(|n| k > n) {
            ExtInt::NegInf
        } else if k == 0 {
            gk
        } else {
            (out.c[k - 1] - 1).max(gk)
        };
        out.c.push(v);
    }
    out
}

/// `c(S,k) = max { |S∩P| - k : nonvert(P) <= k <= |S∩P| }` over the given
/// closed sets.
pub fn c_direct_from(sets: &[ClosedSet], k: usize) -> ExtInt {
    ExtInt::max_of(
        sets.iter()
            .filter(|c| c.nonvertex_count() <= k && k <= c.len())
            .map(|c| ExtInt::Fin(c.len() as i64 - k as i64)),
    )
}

pub fn c_direct(site: &FiniteSite, k: usize) -> Result<ExtInt, EngineError> {
    Ok(c_direct_from(&enumerate_convex_subsets(site)?, k))
}

/// Full profile of a finite site with both `g` and `c` filled.
pub fn helly_profile(
    site: &FiniteSite,
    k_max: usize,
    label: Option<&str>,
) -> Result<HellyProfile, EngineError> {
    let sets = enumerate_convex_subsets(site)?;
    Ok(c_from_g(&g_profile_from(site, &sets, k_max, label)))
}
