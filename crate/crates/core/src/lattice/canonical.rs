use serde::Serialize;

use super::planar::{self, P2};
use super::{LatticeError, LatticePolytope, PointCensus};

/// Unimodular normal form of a lattice polygon together with its `Z^2`
/// census. Two polygons are unimodularly equivalent iff their forms agree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CanonicalPolygon {
    vertices: Vec<P2>,
    #[serde(skip)]
    census: CensusKey,
    width_at_most_one: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct CensusKey {
    boundary: i64,
    interior: i64,
}

impl CanonicalPolygon {
    /// Canonicalizes a counter-clockwise strictly convex cycle.
    pub fn from_cycle(cycle: &[P2]) -> Result<Self, LatticeError> {
        if cycle.len() < 3 {
            return Err(LatticeError::WrongAffineDimension {
                expected: 2,
                found: cycle.len().saturating_sub(1).min(1),
            });
        }
        let vertices = planar::normal_form(cycle);
        Ok(Self::from_normal_form(vertices))
    }

    /// Wraps a cycle that is already a normal form.
    pub(crate) fn from_normal_form(vertices: Vec<P2>) -> Self {
        let census = CensusKey {
            boundary: planar::boundary_count(&vertices),
            interior: planar::interior_count(&vertices),
        };
        let width_at_most_one = planar::width_at_most_one(&vertices);
        Self {
            vertices,
            census,
            width_at_most_one,
        }
    }

    pub fn vertices(&self) -> &[P2] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn interior_count(&self) -> usize {
        self.census.interior as usize
    }

    pub fn boundary_count(&self) -> usize {
        self.census.boundary as usize
    }

    pub fn total_count(&self) -> usize {
        self.interior_count() + self.boundary_count()
    }

    pub fn nonvertex_count(&self) -> usize {
        self.total_count() - self.vertex_count()
    }

    pub fn width_at_most_one(&self) -> bool {
        self.width_at_most_one
    }

    pub fn twice_area(&self) -> i128 {
        planar::twice_area(&self.vertices)
    }

    pub fn census(&self) -> PointCensus {
        let v = self.vertex_count();
        PointCensus {
            total: self.total_count(),
            vertex_count: v,
            nonvertex_count: self.nonvertex_count(),
            interior_count: self.interior_count(),
            boundary_nonvertex_count: self.boundary_count() - v,
        }
    }

    /// True when the stored cycle is its own normal form.
    pub fn is_fixed_point(&self) -> bool {
        planar::normal_form(&self.vertices) == self.vertices
    }
}

pub fn canonical_form_2d(p: &LatticePolytope) -> Result<CanonicalPolygon, LatticeError> {
    match p.polygon_cycle() {
        Some(cycle) => CanonicalPolygon::from_cycle(&cycle),
        None => Err(LatticeError::WrongAffineDimension {
            expected: 2,
            found: p.dim_affine(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{convex_hull, LatticePoint};
    use proptest::prelude::*;

    fn poly(v: &[P2]) -> LatticePolytope {
        convex_hull(
            &v.iter()
                .map(|p| LatticePoint::from_slice(p))
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    fn apply(m: [[i64; 2]; 2], t: P2, v: &[P2]) -> Vec<P2> {
        v.iter()
            .map(|p| {
                [
                    m[0][0] * p[0] + m[0][1] * p[1] + t[0],
                    m[1][0] * p[0] + m[1][1] * p[1] + t[1],
                ]
            })
            .collect()
    }

    #[test]
    fn shear_square() {
        let sq = [[0, 0], [1, 0], [0, 1], [1, 1]];
        let sheared = apply([[1, 1], [0, 1]], [0, 0], &sq);
        assert_eq!(
            canonical_form_2d(&poly(&sq)).unwrap(),
            canonical_form_2d(&poly(&sheared)).unwrap()
        );
    }

    #[test]
    fn hexagon_point_reflection() {
        let hex = [[-1, -1], [0, -1], [-1, 0], [1, 0], [0, 1], [1, 1]];
        let neg = apply([[-1, 0], [0, -1]], [0, 0], &hex);
        let a = canonical_form_2d(&poly(&hex)).unwrap();
        assert_eq!(a, canonical_form_2d(&poly(&neg)).unwrap());
        assert_eq!(a.census().interior_count, 1);
        assert_eq!(a.vertex_count(), 6);
    }

    #[test]
    fn translated_triangle() {
        let a = canonical_form_2d(&poly(&[[0, 0], [1, 0], [0, 1]])).unwrap();
        let b = canonical_form_2d(&poly(&[[5, 7], [6, 7], [5, 8]])).unwrap();
        assert_eq!(a, b);
        assert!(a.is_fixed_point());
    }

    #[test]
    fn inequivalent_polygons_differ() {
        let a = canonical_form_2d(&poly(&[[0, 0], [2, 0], [0, 2]])).unwrap();
        let b = canonical_form_2d(&poly(&[[0, 0], [1, 0], [0, 1], [1, 1]])).unwrap();
        let c = canonical_form_2d(&poly(&[[0, 0], [2, 0], [0, 1]])).unwrap();
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_ne!(b, c);
    }

    #[test]
    fn segment_rejected() {
        let seg = poly(&[[0, 0], [3, 0]]);
        assert!(canonical_form_2d(&seg).is_err());
    }

    fn arb_unimodular() -> impl Strategy<Value = [[i64; 2]; 2]> {
        prop::collection::vec((0u8..4, -3i64..=3), 1..6).prop_map(|ops| {
            let mut m = [[1i64, 0], [0, 1]];
            for (kind, c) in ops {
                let e = match kind {
                    0 => [[1, c], [0, 1]],
                    1 => [[1, 0], [c, 1]],
                    2 => [[0, 1], [1, 0]],
                    _ => [[-1, 0], [0, 1]],
                };
                m = [
                    [
                        e[0][0] * m[0][0] + e[0][1] * m[1][0],
                        e[0][0] * m[0][1] + e[0][1] * m[1][1],
                    ],
                    [
                        e[1][0] * m[0][0] + e[1][1] * m[1][0],
                        e[1][0] * m[0][1] + e[1][1] * m[1][1],
                    ],
                ];
            }
            m
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn invariant_under_unimodular_maps(
            raw in prop::collection::vec((-4i64..5, -4i64..5), 3..9),
            m in arb_unimodular(),
            t in (-50i64..50, -50i64..50),
        ) {
            let h = planar::hull(&raw.iter().map(|&(x, y)| [x, y]).collect::<Vec<_>>());
            prop_assume!(h.len() >= 3);
            let img = planar::hull(&apply(m, [t.0, t.1], &h));
            let a = CanonicalPolygon::from_cycle(&h).unwrap();
            let b = CanonicalPolygon::from_cycle(&img).unwrap();
            prop_assert!(a.is_fixed_point());
            prop_assert_eq!(a, b);
        }
    }
}
