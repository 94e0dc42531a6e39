//! Exact lattice geometry: points, finite sites, hulls, point censuses and
//! planar normal forms.

mod canonical;
mod hull;
pub mod planar;
mod point;

pub use canonical::{canonical_form_2d, CanonicalPolygon};
pub use hull::{convex_hull, Facet, LatticePolytope, MAX_HULL_DIM};
pub use point::{FiniteSite, LatticePoint, COORD_LIMIT};

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("a lattice point needs at least one coordinate")]
    EmptyPoint,
    #[error("coordinate {0} exceeds the supported magnitude {COORD_LIMIT}")]
    CoordinateOutOfRange(i64),
    #[error("empty input")]
    EmptyInput,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("exact hulls are supported up to dimension {MAX_HULL_DIM}, got {0}")]
    UnsupportedDimension(usize),
    #[error("intermediate value overflowed 128-bit arithmetic")]
    ArithmeticOverflow,
    #[error("bounding box holds {points} lattice points, above the limit {limit}")]
    RegionTooLarge { points: u128, limit: u128 },
    #[error("point {0:?} is not in the site")]
    NotInSite(LatticePoint),
    #[error("polytope has affine dimension {found}, expected {expected}")]
    WrongAffineDimension { expected: usize, found: usize },
}

/// Largest bounding box scanned when enumerating `Z^n` points of a polytope.
pub const BOX_LIMIT: u128 = 50_000_000;

/// Where lattice points are counted: a finite site or all of `Z^n`.
#[derive(Clone, Copy, Debug)]
pub enum Region<'a> {
    Site(&'a FiniteSite),
    FullLattice,
}

/// Interior notion used by [`census_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum InteriorMode {
    /// Interior in the ambient space; lower-dimensional polytopes have none.
    #[default]
    Ambient,
    /// Interior relative to the affine hull.
    Relative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PointCensus {
    pub total: usize,
    pub vertex_count: usize,
    pub nonvertex_count: usize,
    pub interior_count: usize,
    pub boundary_nonvertex_count: usize,
}

/// Points of the region lying in `p`, lexicographically sorted.
pub fn lattice_points_in(
    p: &LatticePolytope,
    region: Region<'_>,
) -> Result<Vec<LatticePoint>, LatticeError> {
    match region {
        Region::Site(site) => {
            if site.dim() != p.dim_ambient() {
                return Err(LatticeError::DimensionMismatch {
                    expected: p.dim_ambient(),
                    found: site.dim(),
                });
            }
            Ok(site
                .points()
                .iter()
                .filter(|x| p.contains(x))
                .cloned()
                .collect())
        }
        Region::FullLattice => {
            let (lo, hi) = p.bounding_box();
            let volume = lo
                .iter()
                .zip(&hi)
                .map(|(a, b)| (b - a + 1) as u128)
                .try_fold(1u128, |acc, e| acc.checked_mul(e))
                .unwrap_or(u128::MAX);
            if volume > BOX_LIMIT {
                return Err(LatticeError::RegionTooLarge {
                    points: volume,
                    limit: BOX_LIMIT,
                });
            }
            let mut out = Vec::new();
            let mut cur = lo.clone();
            loop {
                let q = LatticePoint::new(cur.clone())?;
                if p.contains(&q) {
                    out.push(q);
                }
                let mut i = cur.len();
                loop {
                    if i == 0 {
                        return Ok(out);
                    }
                    i -= 1;
                    if cur[i] < hi[i] {
                        cur[i] += 1;
                        break;
                    }
                    cur[i] = lo[i];
                }
            }
        }
    }
}

/// `conv(X) ∩ S`, sorted. The empty set is closed.
pub fn closure(x: &[LatticePoint], s: &FiniteSite) -> Result<Vec<LatticePoint>, LatticeError> {
    if let Some(p) = x.iter().find(|p| !s.contains(p)) {
        return Err(LatticeError::NotInSite(p.clone()));
    }
    if x.is_empty() {
        return Ok(Vec::new());
    }
    let p = convex_hull(x)?;
    lattice_points_in(&p, Region::Site(s))
}

pub fn census(p: &LatticePolytope, region: Region<'_>) -> Result<PointCensus, LatticeError> {
    census_with(p, region, InteriorMode::Ambient)
}

pub fn census_with(
    p: &LatticePolytope,
    region: Region<'_>,
    mode: InteriorMode,
) -> Result<PointCensus, LatticeError> {
    let pts = lattice_points_in(p, region)?;
    let mut c = PointCensus {
        total: pts.len(),
        vertex_count: 0,
        nonvertex_count: 0,
        interior_count: 0,
        boundary_nonvertex_count: 0,
    };
    for x in &pts {
        if p.is_vertex(x) {
            c.vertex_count += 1;
            continue;
        }
        c.nonvertex_count += 1;
        let inside = match mode {
            InteriorMode::Ambient => p.in_interior(x),
            InteriorMode::Relative => p.in_relative_interior(x),
        };
        if inside {
            c.interior_count += 1;
        } else {
            c.boundary_nonvertex_count += 1;
        }
    }
    Ok(c)
}
