use num_rational::Ratio;
use serde::Serialize;

use super::CensusError;
use crate::arith::gcd_i128;
use crate::lattice::planar::{self, P2};
use crate::lattice::{census, LatticePolytope, Region};

pub type Q = Ratio<i128>;

/// A convex polygon with rational vertices in counter-clockwise order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPolygon {
    vertices: Vec<[Q; 2]>,
}

impl RationalPolygon {
    /// Accepts a strictly convex counter-clockwise cycle of at least three
    /// vertices.
    pub fn new(vertices: Vec<[Q; 2]>) -> Result<Self, CensusError> {
        let n = vertices.len();
        if n < 3 {
            return Err(CensusError::NotAPolygon("fewer than three vertices".into()));
        }
        for i in 0..n {
            let (a, b, c) = (&vertices[i], &vertices[(i + 1) % n], &vertices[(i + 2) % n]);
            let cr = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
            if cr <= Q::from_integer(0) {
                return Err(CensusError::NotAPolygon(
                    "vertices are not strictly convex counter-clockwise".into(),
                ));
            }
        }
        Ok(Self { vertices })
    }

    pub fn from_lattice(cycle: &[P2]) -> Result<Self, CensusError> {
        Self::new(
            cycle
                .iter()
                .map(|p| [Q::from_integer(p[0].into()), Q::from_integer(p[1].into())])
                .collect(),
        )
    }

    pub fn vertices(&self) -> &[[Q; 2]] {
        &self.vertices
    }

    /// Edge `i` from vertex `i` to `i+1` as a primitive integer outward
    /// normal and rational offset.
    fn edges(&self) -> Vec<([i128; 2], Q)> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let (a, b) = (&self.vertices[i], &self.vertices[(i + 1) % n]);
                let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
                let l = num_integer::lcm(*dx.denom(), *dy.denom());
                let (ix, iy) = ((dx * l).to_integer(), (dy * l).to_integer());
                let g = gcd_i128(ix, iy);
                let normal = [iy / g, -ix / g];
                let off = a[0] * normal[0] + a[1] * normal[1];
                (normal, off)
            })
            .collect()
    }

    fn bbox(&self) -> (i128, i128, i128, i128) {
        let xs = self.vertices.iter().map(|v| v[0]);
        let ys = self.vertices.iter().map(|v| v[1]);
        (
            xs.clone().min().unwrap().floor().to_integer(),
            xs.max().unwrap().ceil().to_integer(),
            ys.clone().min().unwrap().floor().to_integer(),
            ys.max().unwrap().ceil().to_integer(),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    pub member: bool,
    pub facets: usize,
    pub interior: usize,
    pub facets_with_relint_point: usize,
}

/// Largest bounding box scanned by [`maximal_membership`].
const MEMBERSHIP_BOX_LIMIT: i128 = 4_000_000;

/// Whether `m` has exactly `k` interior lattice points and a lattice point in
/// the relative interior of every edge.
pub fn maximal_membership(m: &RationalPolygon, k: usize) -> Result<MembershipReport, CensusError> {
    if k == 0 {
        return Err(CensusError::ZeroInterior);
    }
    let edges = m.edges();
    let (x0, x1, y0, y1) = m.bbox();
    if (x1 - x0 + 1) * (y1 - y0 + 1) > MEMBERSHIP_BOX_LIMIT {
        return Err(CensusError::SearchRadius(
            "polygon bounding box too large".into(),
        ));
    }
    let n = edges.len();
    let mut interior = 0usize;
    let mut relint = vec![false; n];
    for x in x0..=x1 {
        for y in y0..=y1 {
            let vals: Vec<Q> = edges
                .iter()
                .map(|(a, b)| Q::from_integer(a[0] * x + a[1] * y) - b)
                .collect();
            if vals.iter().any(|v| *v > Q::from_integer(0)) {
                continue;
            }
            let zeros: Vec<usize> = (0..n).filter(|&j| vals[j] == Q::from_integer(0)).collect();
            match zeros.as_slice() {
                [] => interior += 1,
                [j] => relint[*j] = true,
                // on two edge lines: a vertex
                _ => {}
            }
        }
    }
    let with = relint.iter().filter(|&&b| b).count();
    Ok(MembershipReport {
        member: interior == k && with == n,
        facets: n,
        interior,
        facets_with_relint_point: with,
    })
}

/// A polygon `{x : a_j . x <= b_j}` with facets in counter-clockwise order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetPolygon {
    pub facets: Vec<([i64; 2], i64)>,
}

impl FacetPolygon {
    /// Vertices as intersections of consecutive facet lines.
    pub fn vertices(&self) -> Result<RationalPolygon, CensusError> {
        let n = self.facets.len();
        let mut v = Vec::with_capacity(n);
        for j in 0..n {
            let (a, b) = self.facets[(j + n - 1) % n];
            let (c, d) = self.facets[j];
            let (a, c) = ([a[0] as i128, a[1] as i128], [c[0] as i128, c[1] as i128]);
            let (b, d) = (b as i128, d as i128);
            let det = a[0] * c[1] - a[1] * c[0];
            if det == 0 {
                return Err(CensusError::NotAPolygon(
                    "parallel consecutive facets".into(),
                ));
            }
            v.push([
                Q::new(b * c[1] - d * a[1], det),
                Q::new(a[0] * d - c[0] * b, det),
            ]);
        }
        RationalPolygon::new(v)
    }

    fn value(&self, j: usize, x: P2) -> i128 {
        let a = self.facets[j].0;
        i128::from(a[0]) * i128::from(x[0]) + i128::from(a[1]) * i128::from(x[1])
    }
}

/// Guard radius (in the max norm, around the input polygon) of the facet
/// push search.
pub const PUSH_RADIUS: i64 = 64;

/// Enlarges a lattice polygon `P` with `k >= 1` non-vertex lattice points to
/// a polygon with exactly those `k` points in its interior and a lattice
/// point in the relative interior of every facet.
///
/// Facet `j` starts as the edge line from vertex `j`, tilted about that
/// vertex by the previous edge normal (`a_j = m n_j + n_{j-1}`), with `m`
/// doubled until no new lattice point is enclosed. Each facet is then pushed
/// in order to the largest offset that keeps the interior lattice set fixed.
pub fn expand_to_maximal(p: &LatticePolytope, k: usize) -> Result<FacetPolygon, CensusError> {
    if k == 0 {
        return Err(CensusError::ZeroInterior);
    }
    let cycle = p
        .polygon_cycle()
        .ok_or_else(|| CensusError::NotAPolygon("input is not two-dimensional".into()))?;
    let c = census(p, Region::FullLattice)?;
    if c.nonvertex_count != k {
        return Err(CensusError::WrongNonvertexCount {
            expected: k,
            found: c.nonvertex_count,
        });
    }
    let n = cycle.len();
    let edges = planar::edge_inequalities(&cycle);
    let inside = |x: P2| planar::contains(&cycle, x);
    let x_set: Vec<P2> = planar::box_points(&cycle, |x| inside(x) && !cycle.contains(&x));

    let (bx0, bx1, by0, by1) = {
        let xs = cycle.iter().map(|v| v[0]);
        let ys = cycle.iter().map(|v| v[1]);
        (
            xs.clone().min().unwrap() - PUSH_RADIUS,
            xs.max().unwrap() + PUSH_RADIUS,
            ys.clone().min().unwrap() - PUSH_RADIUS,
            ys.max().unwrap() + PUSH_RADIUS,
        )
    };
    let guard: Vec<P2> = (bx0..=bx1)
        .flat_map(|x| (by0..=by1).map(move |y| [x, y]))
        .collect();

    let mut m: i64 = 1;
    let mut poly = loop {
        let facets: Vec<([i64; 2], i64)> = (0..n)
            .map(|j| {
                let (nj, _) = edges[j];
                let (np, _) = edges[(j + n - 1) % n];
                let a = [m * nj[0] + np[0], m * nj[1] + np[1]];
                (a, planar::dot(a, cycle[j]))
            })
            .collect();
        let cand = FacetPolygon { facets };
        let bounded = cand.vertices().is_ok_and(|v| {
            v.vertices().iter().all(|q| {
                q[0] >= Q::from_integer(bx0.into())
                    && q[0] <= Q::from_integer(bx1.into())
                    && q[1] >= Q::from_integer(by0.into())
                    && q[1] <= Q::from_integer(by1.into())
            })
        });
        let extra = !bounded
            || guard.iter().any(|&z| {
                !inside(z) && (0..n).all(|j| cand.value(j, z) <= i128::from(cand.facets[j].1))
            });
        if !extra {
            break cand;
        }
        m *= 2;
        if m > 1 << 20 {
            return Err(CensusError::SearchRadius(format!(
                "tilt factor exceeded {} without isolating the polygon",
                1 << 20
            )));
        }
    };

    // Push facet j to min{a_j . z : z lattice, z not in X, z strictly inside
    // every other facet}; any larger offset would enclose such a z.
    for j in 0..n {
        let best = guard
            .iter()
            .filter(|z| !x_set.contains(z))
            .filter(|&&z| (0..n).all(|i| i == j || poly.value(i, z) < i128::from(poly.facets[i].1)))
            .map(|&z| poly.value(j, z))
            .min()
            .ok_or_else(|| {
                CensusError::SearchRadius(format!(
                    "facet {j} has no blocking point within radius {PUSH_RADIUS}"
                ))
            })?;
        let best =
            i64::try_from(best).map_err(|_| CensusError::SearchRadius("offset overflow".into()))?;
        if best < poly.facets[j].1 {
            return Err(CensusError::SearchRadius(format!(
                "facet {j} would have to move inward"
            )));
        }
        poly.facets[j].1 = best;
    }

    let report = maximal_membership(&poly.vertices()?, k)?;
    if !report.member {
        return Err(CensusError::SearchRadius(format!(
            "result failed the membership check: {report:?}"
        )));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{convex_hull, LatticePoint};

    fn lat(v: &[P2]) -> RationalPolygon {
        RationalPolygon::from_lattice(&planar::hull(v)).unwrap()
    }

    fn poly(v: &[P2]) -> LatticePolytope {
        convex_hull(
            &v.iter()
                .map(|p| LatticePoint::from_slice(p))
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    const HEX: [P2; 6] = [[-1, -1], [0, -1], [-1, 0], [1, 0], [0, 1], [1, 1]];

    #[test]
    fn membership_examples() {
        let sq = maximal_membership(&lat(&[[-1, -1], [1, -1], [1, 1], [-1, 1]]), 1).unwrap();
        assert!(sq.member);
        assert_eq!(sq.facets, 4);
        let hex = maximal_membership(&lat(&HEX), 1).unwrap();
        assert!(!hex.member);
        let tri = maximal_membership(&lat(&[[-1, -1], [2, -1], [-1, 2]]), 1).unwrap();
        assert!(tri.member);
        assert_eq!(tri.facets, 3);
        assert!(matches!(
            maximal_membership(&lat(&HEX), 0),
            Err(CensusError::ZeroInterior)
        ));
    }

    #[test]
    fn rational_vertices() {
        let h = Q::new(1, 2);
        let m = RationalPolygon::new(vec![
            [Q::from_integer(-2), Q::from_integer(-2)],
            [Q::from_integer(2) + h, Q::from_integer(-2)],
            [Q::from_integer(-2), Q::from_integer(2) + h],
        ])
        .unwrap();
        let r = maximal_membership(&m, 1).unwrap();
        assert_eq!(r.interior, 6);
        assert!(!r.member);
    }

    #[test]
    fn hexagon_expands_to_six_facets() {
        let m = expand_to_maximal(&poly(&HEX), 1).unwrap();
        assert_eq!(m.facets.len(), 6);
        assert!(
            maximal_membership(&m.vertices().unwrap(), 1)
                .unwrap()
                .member
        );
    }

    #[test]
    fn rejects_empty_interior() {
        let sq = poly(&[[0, 0], [1, 0], [0, 1], [1, 1]]);
        assert!(matches!(
            expand_to_maximal(&sq, 0),
            Err(CensusError::ZeroInterior)
        ));
        assert!(matches!(
            expand_to_maximal(&sq, 1),
            Err(CensusError::WrongNonvertexCount { .. })
        ));
    }
}
