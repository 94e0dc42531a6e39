//! Exact convex hulls in ambient dimension at most five.
//!
//! The affine hull is found first; points are then projected injectively onto
//! the pivot coordinates of their direction space, where a dimension-specific
//! algorithm runs (sorting in 1D, monotone chain in 2D, incremental
//! beneath-beyond with exact integer predicates in 3D to 5D). Facet normals are
//! lifted back by zero-padding, so each facet inequality is valid on the
//! affine hull.

use std::collections::HashMap;

use serde::Serialize;

use super::planar;
use super::{LatticeError, LatticePoint};
use crate::arith::{det_i128, integer_null_space, primitive_i128, rank_info};

pub const MAX_HULL_DIM: usize = 5;

/// `normal . x <= offset`, with `normal` primitive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Facet {
    pub fn value(&self, p: &LatticePoint) -> i128 {
        self.normal
            .iter()
            .zip(p.coords())
            .map(|(&a, &x)| i128::from(a) * i128::from(x))
            .sum()
    }

    pub fn slack(&self, p: &LatticePoint) -> i128 {
        i128::from(self.offset) - self.value(p)
    }
}

/// A polytope with lattice vertices: minimal vertex list plus facet
/// inequalities and affine-hull equations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LatticePolytope {
    vertices: Vec<LatticePoint>,
    dim_ambient: usize,
    dim_affine: usize,
    facets: Vec<Facet>,
    /// `normal . x = offset` for every equation.
    equations: Vec<Facet>,
}

impl LatticePolytope {
    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn dim_ambient(&self) -> usize {
        self.dim_ambient
    }

    pub fn dim_affine(&self) -> usize {
        self.dim_affine
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn equations(&self) -> &[Facet] {
        &self.equations
    }

    pub fn is_vertex(&self, p: &LatticePoint) -> bool {
        self.vertices.binary_search(p).is_ok()
    }

    pub fn in_affine_hull(&self, p: &LatticePoint) -> bool {
        p.dim() == self.dim_ambient && self.equations.iter().all(|e| e.slack(p) == 0)
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.in_affine_hull(p) && self.facets.iter().all(|f| f.slack(p) >= 0)
    }

    /// Strictly inside every facet, within the affine hull.
    pub fn in_relative_interior(&self, p: &LatticePoint) -> bool {
        self.in_affine_hull(p) && self.facets.iter().all(|f| f.slack(p) > 0)
    }

    /// Interior with respect to the ambient space; empty unless full-dimensional.
    pub fn in_interior(&self, p: &LatticePoint) -> bool {
        self.dim_affine == self.dim_ambient && self.in_relative_interior(p)
    }

    /// Vertices in counter-clockwise order, for full-dimensional polygons.
    pub fn polygon_cycle(&self) -> Option<Vec<planar::P2>> {
        if self.dim_ambient != 2 || self.dim_affine != 2 {
            return None;
        }
        let pts: Vec<planar::P2> = self.vertices.iter().map(|v| [v[0], v[1]]).collect();
        Some(planar::hull(&pts))
    }

    /// Inclusive bounding box of the vertices.
    pub fn bounding_box(&self) -> (Vec<i64>, Vec<i64>) {
        let d = self.dim_ambient;
        let mut lo = vec![i64::MAX; d];
        let mut hi = vec![i64::MIN; d];
        for v in &self.vertices {
            for i in 0..d {
                lo[i] = lo[i].min(v[i]);
                hi[i] = hi[i].max(v[i]);
            }
        }
        (lo, hi)
    }
}

fn to_facet(normal: Vec<i128>, offset: i128) -> Result<Facet, LatticeError> {
    let conv = |x: i128| i64::try_from(x).map_err(|_| LatticeError::ArithmeticOverflow);
    Ok(Facet {
        normal: normal.into_iter().map(conv).collect::<Result<_, _>>()?,
        offset: conv(offset)?,
    })
}

/// Exact convex hull of a non-empty point set in dimension at most five.
pub fn convex_hull(points: &[LatticePoint]) -> Result<LatticePolytope, LatticeError> {
    let Some(first) = points.first() else {
        return Err(LatticeError::EmptyInput);
    };
    let d = first.dim();
    if d > MAX_HULL_DIM {
        return Err(LatticeError::UnsupportedDimension(d));
    }
    if let Some(p) = points.iter().find(|p| p.dim() != d) {
        return Err(LatticeError::DimensionMismatch {
            expected: d,
            found: p.dim(),
        });
    }
    let mut pts: Vec<LatticePoint> = points.to_vec();
    pts.sort();
    pts.dedup();
    let base = pts[0].clone();
    let dirs: Vec<Vec<i128>> = pts
        .iter()
        .map(|p| {
            p.coords()
                .iter()
                .zip(base.coords())
                .map(|(&a, &b)| i128::from(a - b))
                .collect()
        })
        .collect();
    let info = rank_info(&dirs);
    let k = info.rank;

    let equations = integer_null_space(&dirs, d)
        .into_iter()
        .map(|mut n| {
            primitive_i128(&mut n);
            let off: i128 = n
                .iter()
                .zip(base.coords())
                .map(|(&a, &x)| a * i128::from(x))
                .sum();
            to_facet(n, off)
        })
        .collect::<Result<Vec<_>, _>>()?;

    if k == 0 {
        return Ok(LatticePolytope {
            vertices: vec![base],
            dim_ambient: d,
            dim_affine: 0,
            facets: Vec::new(),
            equations,
        });
    }

    let cols = &info.pivot_cols;
    let proj: Vec<Vec<i64>> = pts
        .iter()
        .map(|p| cols.iter().map(|&c| p[c]).collect())
        .collect();

    // Facets in projected coordinates and vertex indices into `pts`.
    let (proj_facets, vertex_idx): (Vec<(Vec<i128>, i128)>, Vec<usize>) = match k {
        1 => {
            let (imin, _) = proj.iter().enumerate().min_by_key(|(_, p)| p[0]).unwrap();
            let (imax, _) = proj.iter().enumerate().max_by_key(|(_, p)| p[0]).unwrap();
            let facets = vec![
                (vec![-1i128], -i128::from(proj[imin][0])),
                (vec![1i128], i128::from(proj[imax][0])),
            ];
            (facets, vec![imin, imax])
        }
        2 => {
            let p2: Vec<planar::P2> = proj.iter().map(|p| [p[0], p[1]]).collect();
            let cyc = planar::hull(&p2);
            let facets = planar::edge_inequalities(&cyc)
                .into_iter()
                .map(|(a, b)| (vec![i128::from(a[0]), i128::from(a[1])], i128::from(b)))
                .collect();
            let idx = cyc
                .iter()
                .map(|v| p2.iter().position(|p| p == v).unwrap())
                .collect();
            (facets, idx)
        }
        _ => {
            let seed: Vec<usize> = std::iter::once(0)
                .chain(info.independent_rows.iter().copied())
                .collect();
            incremental_hull(&proj, &seed)?
        }
    };

    let mut facets = proj_facets
        .into_iter()
        .map(|(a, b)| {
            let mut full = vec![0i128; d];
            for (i, &c) in cols.iter().enumerate() {
                full[c] = a[i];
            }
            to_facet(full, b)
        })
        .collect::<Result<Vec<_>, _>>()?;
    facets.sort();
    facets.dedup();

    let mut vertices: Vec<LatticePoint> = vertex_idx.into_iter().map(|i| pts[i].clone()).collect();
    vertices.sort();
    vertices.dedup();

    Ok(LatticePolytope {
        vertices,
        dim_ambient: d,
        dim_affine: k,
        facets,
        equations,
    })
}

struct SimplexFacet {
    verts: Vec<usize>,
    normal: Vec<i128>,
    offset: i128,
}

fn dot(a: &[i128], x: &[i64]) -> Option<i128> {
    a.iter().zip(x).try_fold(0i128, |acc, (&ai, &xi)| {
        acc.checked_add(ai.checked_mul(i128::from(xi))?)
    })
}

/// Hyperplane through `dim` points, oriented so that `inside` (scaled by
/// `scale`) lies strictly below it.
fn oriented_plane(
    pts: &[Vec<i64>],
    verts: &[usize],
    inside_scaled: &[i128],
    scale: i128,
) -> Result<(Vec<i128>, i128), LatticeError> {
    let dim = pts[0].len();
    let o = &pts[verts[0]];
    let rows: Vec<Vec<i128>> = verts[1..]
        .iter()
        .map(|&v| (0..dim).map(|j| i128::from(pts[v][j] - o[j])).collect())
        .collect();
    let mut normal = Vec::with_capacity(dim);
    for col in 0..dim {
        let minor: Vec<Vec<i128>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != col)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect();
        let det = det_i128(minor).ok_or(LatticeError::ArithmeticOverflow)?;
        normal.push(if col % 2 == 0 { det } else { -det });
    }
    primitive_i128(&mut normal);
    let mut offset = dot(&normal, o).ok_or(LatticeError::ArithmeticOverflow)?;
    let inside: i128 = normal
        .iter()
        .zip(inside_scaled)
        .try_fold(0i128, |acc, (&a, &x)| acc.checked_add(a.checked_mul(x)?))
        .ok_or(LatticeError::ArithmeticOverflow)?;
    let rhs = offset
        .checked_mul(scale)
        .ok_or(LatticeError::ArithmeticOverflow)?;
    if inside > rhs {
        for x in normal.iter_mut() {
            *x = -*x;
        }
        offset = -offset;
    }
    Ok((normal, offset))
}

/// Beneath-beyond hull of full-dimensional integer points; `seed` indexes an
/// affinely independent simplex. Returns distinct facets and vertex indices.
#[allow(clippy::type_complexity)]
fn incremental_hull(
    pts: &[Vec<i64>],
    seed: &[usize],
) -> Result<(Vec<(Vec<i128>, i128)>, Vec<usize>), LatticeError> {
    let dim = pts[0].len();
    debug_assert_eq!(seed.len(), dim + 1);
    let scale = (dim + 1) as i128;
    let inside: Vec<i128> = (0..dim)
        .map(|j| seed.iter().map(|&s| i128::from(pts[s][j])).sum())
        .collect();

    let mut facets: Vec<SimplexFacet> = Vec::new();
    for skip in 0..seed.len() {
        let verts: Vec<usize> = seed
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, &v)| v)
            .collect();
        let (normal, offset) = oriented_plane(pts, &verts, &inside, scale)?;
        facets.push(SimplexFacet {
            verts,
            normal,
            offset,
        });
    }

    for (pi, p) in pts.iter().enumerate() {
        if seed.contains(&pi) {
            continue;
        }
        let mut visible = Vec::with_capacity(facets.len());
        for f in &facets {
            let v = dot(&f.normal, p).ok_or(LatticeError::ArithmeticOverflow)?;
            visible.push(v > f.offset);
        }
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut ridges: HashMap<Vec<usize>, usize> = HashMap::new();
        for (f, _) in facets.iter().zip(&visible).filter(|(_, &v)| v) {
            for skip in 0..f.verts.len() {
                let mut r: Vec<usize> = f
                    .verts
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                r.sort_unstable();
                *ridges.entry(r).or_insert(0) += 1;
            }
        }
        // A ridge is on the horizon iff exactly one of its facets is visible.
        let mut horizon: Vec<Vec<usize>> = ridges
            .into_iter()
            .filter(|&(_, c)| c == 1)
            .map(|(r, _)| r)
            .collect();
        horizon.sort();
        let mut next: Vec<SimplexFacet> = facets
            .into_iter()
            .zip(visible)
            .filter(|(_, v)| !v)
            .map(|(f, _)| f)
            .collect();
        for mut r in horizon {
            r.push(pi);
            let (normal, offset) = oriented_plane(pts, &r, &inside, scale)?;
            next.push(SimplexFacet {
                verts: r,
                normal,
                offset,
            });
        }
        facets = next;
    }

    // Every vertex of the hull is a vertex of some simplicial facet.
    let mut candidates: Vec<usize> = facets
        .iter()
        .flat_map(|f| f.verts.iter().copied())
        .collect();
    candidates.sort_unstable();
    candidates.dedup();
    let mut distinct: Vec<(Vec<i128>, i128)> =
        facets.into_iter().map(|f| (f.normal, f.offset)).collect();
    distinct.sort();
    distinct.dedup();

    // A point is a vertex iff the normals of the facets through it have full rank.
    let mut vertices = Vec::new();
    for pi in candidates {
        let p = &pts[pi];
        let tight: Vec<Vec<i128>> = distinct
            .iter()
            .filter(|(n, b)| dot(n, p) == Some(*b))
            .map(|(n, _)| n.clone())
            .collect();
        if tight.len() >= dim && rank_info(&tight).rank == dim {
            vertices.push(pi);
        }
    }
    Ok((distinct, vertices))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pts(v: &[&[i64]]) -> Vec<LatticePoint> {
        v.iter().map(|c| LatticePoint::from_slice(c)).collect()
    }

    fn grid(n: usize, lo: i64, hi: i64) -> Vec<LatticePoint> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|p: Vec<i64>| {
                    (lo..=hi).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        out.into_iter()
            .map(LatticePoint::from_slice_owned)
            .collect()
    }

    impl LatticePoint {
        fn from_slice_owned(v: Vec<i64>) -> Self {
            LatticePoint::new(v).unwrap()
        }
    }

    #[test]
    fn square_from_grid() {
        let p = convex_hull(&grid(2, 0, 2)).unwrap();
        assert_eq!(
            p.vertices(),
            pts(&[&[0, 0], &[0, 2], &[2, 0], &[2, 2]]).as_slice()
        );
        assert_eq!(p.facets().len(), 4);
        assert_eq!(p.dim_affine(), 2);
    }

    #[test]
    fn hexagon_from_two_squares() {
        let mut v = grid(2, -1, 0);
        v.extend(grid(2, 0, 1));
        let p = convex_hull(&v).unwrap();
        assert_eq!(p.vertices().len(), 6);
        assert!(!p.is_vertex(&LatticePoint::from_slice(&[0, 0])));
    }

    #[test]
    fn single_point_has_no_facets() {
        let p = convex_hull(&pts(&[&[5, 7]])).unwrap();
        assert_eq!(p.dim_affine(), 0);
        assert!(p.facets().is_empty());
        assert_eq!(p.vertices().len(), 1);
        assert!(p.contains(&LatticePoint::from_slice(&[5, 7])));
        assert!(!p.contains(&LatticePoint::from_slice(&[5, 8])));
    }

    #[test]
    fn segment_in_space() {
        let p = convex_hull(&pts(&[&[0, 0, 0], &[1, 1, 1], &[3, 3, 3]])).unwrap();
        assert_eq!(p.dim_affine(), 1);
        assert_eq!(p.vertices(), pts(&[&[0, 0, 0], &[3, 3, 3]]).as_slice());
        assert!(p.contains(&LatticePoint::from_slice(&[2, 2, 2])));
        assert!(!p.contains(&LatticePoint::from_slice(&[2, 2, 1])));
        assert!(!p.contains(&LatticePoint::from_slice(&[4, 4, 4])));
    }

    #[test]
    fn cube_in_3d_with_lattice_points() {
        let p = convex_hull(&grid(3, 0, 2)).unwrap();
        assert_eq!(p.vertices().len(), 8);
        assert_eq!(p.facets().len(), 6);
    }

    #[test]
    fn square_in_space_is_two_dimensional() {
        let p = convex_hull(&pts(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]])).unwrap();
        assert_eq!(p.dim_affine(), 2);
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.equations().len(), 1);
    }

    #[test]
    fn cross_polytope_in_4d_and_5d() {
        for n in [4usize, 5] {
            let mut v = vec![LatticePoint::origin(n)];
            for i in 0..n {
                for s in [-1, 1] {
                    let mut c = vec![0; n];
                    c[i] = s;
                    v.push(LatticePoint::new(c).unwrap());
                }
            }
            let p = convex_hull(&v).unwrap();
            assert_eq!(p.vertices().len(), 2 * n);
            assert_eq!(p.facets().len(), 1 << n);
        }
    }

    #[test]
    fn dimension_six_rejected() {
        let err = convex_hull(&[LatticePoint::origin(6)]).unwrap_err();
        assert_eq!(err, LatticeError::UnsupportedDimension(6));
    }

    proptest! {
        #[test]
        fn hull_vertices_are_input_and_idempotent(
            raw in prop::collection::vec(prop::collection::vec(-3i64..4, 3), 1..14)
        ) {
            let input: Vec<LatticePoint> = raw.into_iter().map(|c| LatticePoint::new(c).unwrap()).collect();
            let p = convex_hull(&input).unwrap();
            for v in p.vertices() {
                prop_assert!(input.contains(v));
            }
            for x in &input {
                prop_assert!(p.contains(x));
            }
            let q = convex_hull(p.vertices()).unwrap();
            prop_assert_eq!(&q, &p);
        }

        #[test]
        fn planar_hull_matches_fast_path(
            raw in prop::collection::vec((-5i64..6, -5i64..6), 1..12)
        ) {
            let input: Vec<LatticePoint> = raw.iter().map(|&(x, y)| LatticePoint::from_slice(&[x, y])).collect();
            let p = convex_hull(&input).unwrap();
            let fast = planar::hull(&raw.iter().map(|&(x, y)| [x, y]).collect::<Vec<_>>());
            let mut fast_pts: Vec<LatticePoint> = fast.iter().map(|v| LatticePoint::from_slice(v)).collect();
            fast_pts.sort();
            prop_assert_eq!(p.vertices(), fast_pts.as_slice());
        }
    }
}
