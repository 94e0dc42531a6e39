//! Lattice polygons by number of interior points, up to unimodular
//! equivalence, and the resulting values of `g(Z^2,k)` and `c(Z^2,k)`.

mod cache;
mod enumerate;
mod maximal;

pub use cache::{parse_census_file, CensusCache, CensusFile, CENSUS_COORD_LIMIT, FORMAT_VERSION};
pub use enumerate::{certified_box_bound, enumerate_from_lower, width_one_seeds};
pub use maximal::{
    expand_to_maximal, maximal_membership, FacetPolygon, MembershipReport, RationalPolygon,
    PUSH_RADIUS, Q,
};

use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

use crate::engine::{c_from_g, ExtInt, HellyProfile};
use crate::lattice::planar::P2;
use crate::lattice::{CanonicalPolygon, LatticeError, LatticePoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error(
        "box bound {requested} for interior {interior} is below the certified bound {certified}"
    )]
    BoxBelowCertified {
        interior: usize,
        requested: usize,
        certified: usize,
    },
    #[error("census for interior {interior} needs complete data for interior counts {missing:?}")]
    MissingLower {
        interior: usize,
        missing: Vec<usize>,
    },
    #[error("malformed census header: {0}")]
    Header(String),
    #[error("unsupported census format version {0:?}")]
    Version(String),
    #[error("census line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("census trailer declares {expected} polygons but {found} are present")]
    Checksum { expected: usize, found: usize },
    #[error("census file {0} not found")]
    NotFound(PathBuf),
    #[error("census for interior {0} is marked incomplete")]
    Incomplete(usize),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("not a polygon: {0}")]
    NotAPolygon(String),
    #[error("maximal sets with empty interior are unbounded in general and not supported")]
    ZeroInterior,
    #[error("polygon has {found} non-vertex lattice points, expected {expected}")]
    WrongNonvertexCount { expected: usize, found: usize },
    #[error("search limit reached: {0}")]
    SearchRadius(String),
}

impl From<std::io::Error> for CensusError {
    fn from(e: std::io::Error) -> Self {
        CensusError::Io(e.to_string())
    }
}

/// Complete class lists for interior counts `0..classes.len()`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PolygonCensus {
    classes: Vec<Vec<CanonicalPolygon>>,
}

impl PolygonCensus {
    pub fn max_interior(&self) -> Option<usize> {
        self.classes.len().checked_sub(1)
    }

    pub fn classes(&self, interior: usize) -> Option<&[CanonicalPolygon]> {
        self.classes.get(interior).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = &CanonicalPolygon> {
        self.classes.iter().flatten()
    }

    /// Extends the census by one interior count.
    pub fn extend_once(&mut self) -> Result<&[CanonicalPolygon], CensusError> {
        let i = self.classes.len();
        let next = enumerate_from_lower(i, certified_box_bound(i), &self.classes)?;
        self.classes.push(next);
        Ok(&self.classes[i])
    }

    /// Loads complete files for `0..=i_max` from the cache; any missing or
    /// incomplete one is an error naming every such interior count.
    pub fn from_cache(cache: &CensusCache, i_max: usize) -> Result<Self, CensusError> {
        let mut classes = Vec::new();
        let mut missing = Vec::new();
        for i in 0..=i_max {
            match cache.load(i) {
                Ok(f) => classes.push(f.polygons),
                Err(CensusError::NotFound(_) | CensusError::Incomplete(_)) => missing.push(i),
                Err(e) => return Err(e),
            }
        }
        if !missing.is_empty() {
            return Err(CensusError::MissingLower {
                interior: i_max,
                missing,
            });
        }
        Ok(Self { classes })
    }
}

/// Classes with exactly `i` interior points and lattice width at least two.
/// Smaller interior counts are enumerated first, in memory.
pub fn enumerate_polygons_interior(
    i: usize,
    box_bound: usize,
) -> Result<Vec<CanonicalPolygon>, CensusError> {
    let certified = certified_box_bound(i);
    if box_bound < certified {
        return Err(CensusError::BoxBelowCertified {
            interior: i,
            requested: box_bound,
            certified,
        });
    }
    let mut census = PolygonCensus::default();
    for _ in 0..i {
        census.extend_once()?;
    }
    enumerate_from_lower(i, box_bound, &census.classes)
}

/// Census for interior counts `0..=i_max`, reusing and filling the cache.
/// `progress` is called after each interior count with whether it was loaded.
pub fn census_up_to(
    i_max: usize,
    cache: Option<&CensusCache>,
    mut progress: impl FnMut(usize, usize, bool),
) -> Result<PolygonCensus, CensusError> {
    let mut census = PolygonCensus::default();
    for i in 0..=i_max {
        let loaded = match cache.map(|c| c.load(i)) {
            Some(Ok(f)) if f.box_bound >= certified_box_bound(i) => Some(f.polygons),
            Some(Ok(_) | Err(CensusError::NotFound(_) | CensusError::Incomplete(_))) | None => None,
            Some(Err(e)) => return Err(e),
        };
        let from_cache = loaded.is_some();
        match loaded {
            Some(p) => census.classes.push(p),
            None => {
                census.extend_once()?;
                if let Some(c) = cache {
                    c.save(&CensusFile {
                        interior: i,
                        box_bound: certified_box_bound(i),
                        complete: true,
                        polygons: census.classes[i].clone(),
                    })?;
                }
            }
        }
        progress(i, census.classes[i].len(), from_cache);
    }
    Ok(census)
}

/// Witness for a value of `g(Z^2,k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Z2Witness {
    Polygon(CanonicalPolygon),
    /// `conv{(0,0),(bottom-1,0),(0,1),(top-1,1)}`
    WidthOne {
        bottom: i64,
        top: i64,
    },
}

impl Z2Witness {
    pub fn vertices(&self) -> Vec<P2> {
        match self {
            Z2Witness::Polygon(p) => p.vertices().to_vec(),
            Z2Witness::WidthOne { bottom, top } => {
                crate::lattice::planar::hull(&[[0, 0], [bottom - 1, 0], [0, 1], [top - 1, 1]])
            }
        }
    }
}

/// Most vertices of a width-one lattice polygon with exactly `k` non-vertex
/// lattice points: the trapezoid with `k+2` and `2` points on its two lines.
pub fn width_one_contribution(k: usize) -> (i64, Z2Witness) {
    (
        4,
        Z2Witness::WidthOne {
            bottom: k as i64 + 2,
            top: 2,
        },
    )
}

/// `g(Z^2,k)`: the best census polygon with `k` non-vertex points, or the
/// width-one trapezoid when that is strictly better.
pub fn g_z2(k: usize, census: &PolygonCensus) -> Result<(i64, Z2Witness), CensusError> {
    if census.classes.len() <= k {
        return Err(CensusError::MissingLower {
            interior: k,
            missing: (census.classes.len()..=k).collect(),
        });
    }
    let best = census.classes[..=k]
        .iter()
        .flatten()
        .filter(|p| p.nonvertex_count() == k)
        .fold(None::<&CanonicalPolygon>, |acc, p| match acc {
            Some(q) if q.vertex_count() >= p.vertex_count() => Some(q),
            _ => Some(p),
        });
    let (w1, w1_witness) = width_one_contribution(k);
    Ok(match best {
        Some(p) if p.vertex_count() as i64 >= w1 => {
            (p.vertex_count() as i64, Z2Witness::Polygon(p.clone()))
        }
        _ => (w1, w1_witness),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Z2Profile {
    pub profile: HellyProfile,
    /// `k` with `g(k) = g(k-1) - 1`
    pub drops: Vec<usize>,
    /// `k` with `c(k) != g(k)`
    pub c_exceeds_g: Vec<usize>,
}

/// `g(Z^2,k)` and `c(Z^2,k)` for `k = 0..=k_max`.
pub fn c_z2_profile(k_max: usize, census: &PolygonCensus) -> Result<Z2Profile, CensusError> {
    let mut g = Vec::with_capacity(k_max + 1);
    let mut witnesses = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let (v, w) = g_z2(k, census)?;
        g.push(ExtInt::Fin(v));
        witnesses.push(Some(
            w.vertices()
                .iter()
                .map(|p| LatticePoint::from_slice(p))
                .collect(),
        ));
    }
    let profile = c_from_g(&HellyProfile {
        site: "z2".into(),
        dim: 2,
        k_max,
        g,
        c: Vec::new(),
        witnesses,
        site_cardinality: None,
    });
    let drops = (1..=k_max)
        .filter(|&k| profile.g[k] == profile.g[k - 1] - 1)
        .collect();
    let c_exceeds_g = (0..=k_max)
        .filter(|&k| profile.c[k] != profile.g[k])
        .collect();
    Ok(Z2Profile {
        profile,
        drops,
        c_exceeds_g,
    })
}
