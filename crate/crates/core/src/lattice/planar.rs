//! Planar fast paths on `[i64; 2]` points: hulls, Pick counts, edge
//! normals and the unimodular normal form.
//!
//! Polygons are vertex cycles in counter-clockwise order without collinear
//! vertices. Coordinates are assumed to be bounded by
//! [`COORD_LIMIT`](super::COORD_LIMIT) so that all products fit in `i128`.

use crate::arith::{ext_gcd, gcd_i64};

pub type P2 = [i64; 2];

#[inline]
pub fn cross(o: P2, a: P2, b: P2) -> i128 {
    let (ax, ay) = (i128::from(a[0] - o[0]), i128::from(a[1] - o[1]));
    let (bx, by) = (i128::from(b[0] - o[0]), i128::from(b[1] - o[1]));
    ax * by - ay * bx
}

/// Strict convex hull by Andrew's monotone chain, counter-clockwise, starting
/// at the lexicographically smallest point. Collinear input gives the two
/// endpoints; a single point gives itself.
pub fn hull(points: &[P2]) -> Vec<P2> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<P2> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<P2> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Twice the signed area of a counter-clockwise cycle.
pub fn twice_area(poly: &[P2]) -> i128 {
    if poly.len() < 3 {
        return 0;
    }
    let mut s = 0i128;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        s += i128::from(a[0]) * i128::from(b[1]) - i128::from(a[1]) * i128::from(b[0]);
    }
    s
}

/// Number of lattice points on the boundary.
pub fn boundary_count(poly: &[P2]) -> i64 {
    match poly.len() {
        0 => 0,
        1 => 1,
        2 => gcd_i64(poly[1][0] - poly[0][0], poly[1][1] - poly[0][1]) + 1,
        n => (0..n)
            .map(|i| {
                let a = poly[i];
                let b = poly[(i + 1) % n];
                gcd_i64(b[0] - a[0], b[1] - a[1])
            })
            .sum(),
    }
}

/// Interior lattice points of a full-dimensional polygon, by Pick's theorem.
pub fn interior_count(poly: &[P2]) -> i64 {
    if poly.len() < 3 {
        return 0;
    }
    let a2 = twice_area(poly);
    let b = i128::from(boundary_count(poly));
    i64::try_from((a2 - b + 2) / 2).expect("interior count fits in i64")
}

/// Total lattice points of a polygon, segment or point.
pub fn total_count(poly: &[P2]) -> i64 {
    boundary_count(poly) + interior_count(poly)
}

/// Edge `i` runs from `poly[i]` to `poly[i+1]`; returns its primitive outward
/// normal `a` and offset `b` so that the polygon is `{x : a.x <= b}`.
pub fn edge_inequalities(poly: &[P2]) -> Vec<(P2, i64)> {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let p = poly[i];
            let q = poly[(i + 1) % n];
            let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
            let g = gcd_i64(dx, dy);
            let a = [dy / g, -dx / g];
            (a, a[0] * p[0] + a[1] * p[1])
        })
        .collect()
}

#[inline]
pub fn dot(a: P2, x: P2) -> i64 {
    a[0] * x[0] + a[1] * x[1]
}

/// Closed containment test for a counter-clockwise polygon with at least
/// three vertices.
pub fn contains(poly: &[P2], x: P2) -> bool {
    let n = poly.len();
    (0..n).all(|i| cross(poly[i], poly[(i + 1) % n], x) >= 0)
}

/// Whether all lattice points of the polygon lie on two consecutive lattice
/// lines (or one line).
pub fn width_at_most_one(poly: &[P2]) -> bool {
    if poly.len() < 3 {
        return true;
    }
    // A width-one polygon has an edge on one of its two bounding lines.
    edge_inequalities(poly).iter().any(|&(a, b)| {
        let lo = poly.iter().map(|&v| dot(a, v)).min().unwrap();
        b - lo <= 1
    })
}

/// Lattice width: minimum over primitive directions of the extent.
///
/// With `e1`, `e2` two independent edge vectors at a vertex, any direction
/// `u` achieving extent `<= w` has `|u.e1|, |u.e2| <= w`, so it suffices to
/// solve for `u` over that finite box of values.
pub fn lattice_width(poly: &[P2]) -> i64 {
    if poly.len() < 3 {
        return 0;
    }
    let extent = |u: P2| {
        let (lo, hi) = poly
            .iter()
            .map(|&v| dot(u, v))
            .fold((i64::MAX, i64::MIN), |(l, h), x| (l.min(x), h.max(x)));
        hi - lo
    };
    let n = poly.len();
    let e1 = [poly[1][0] - poly[0][0], poly[1][1] - poly[0][1]];
    let e2 = [poly[n - 1][0] - poly[0][0], poly[n - 1][1] - poly[0][1]];
    let det = e1[0] * e2[1] - e1[1] * e2[0];
    let mut best = extent([1, 0]).min(extent([0, 1]));
    let bound = best;
    for alpha in -bound..=bound {
        for beta in -bound..=bound {
            // u = E^{-1} (alpha, beta) with E = [e1; e2].
            let ux = e2[1] * alpha - e1[1] * beta;
            let uy = -e2[0] * alpha + e1[0] * beta;
            if ux % det != 0 || uy % det != 0 {
                continue;
            }
            let u = [ux / det, uy / det];
            if u != [0, 0] {
                best = best.min(extent(u));
            }
        }
    }
    best
}

/// Unimodular normal form of a counter-clockwise polygon (>= 3 vertices).
///
/// For every vertex and both orientations, the unique unimodular map sending
/// the vertex to the origin, its outgoing primitive edge direction to
/// `(1, 0)`, the polygon into the upper half plane, and the incoming
/// neighbour `(a, b)` to `0 <= a < b` is applied; the result is translated to
/// the nonnegative quadrant and listed counter-clockwise from its
/// lexicographically smallest vertex. The smallest such cycle is returned.
pub fn normal_form(poly: &[P2]) -> Vec<P2> {
    let n = poly.len();
    debug_assert!(n >= 3);
    let mut best: Option<Vec<P2>> = None;
    let mut buf: Vec<P2> = Vec::with_capacity(n);
    for start in 0..n {
        for reversed in [false, true] {
            buf.clear();
            for j in 0..n {
                let idx = if reversed {
                    (start + n - j) % n
                } else {
                    (start + j) % n
                };
                let p = poly[idx];
                buf.push([p[0] - poly[start][0], p[1] - poly[start][1]]);
            }
            let e = buf[1];
            let g = gcd_i64(e[0], e[1]);
            let d = [e[0] / g, e[1] / g];
            let (_, s, t) = ext_gcd(d[0], d[1]);
            // [[s, t], [-d1, d0]] maps d to (1, 0) and has determinant 1.
            let flip = if reversed { -1 } else { 1 };
            for p in buf.iter_mut() {
                let x = s * p[0] + t * p[1];
                let y = flip * (-d[1] * p[0] + d[0] * p[1]);
                *p = [x, y];
            }
            let [a, b] = buf[n - 1];
            debug_assert!(b > 0);
            let m = -a.div_euclid(b);
            for p in buf.iter_mut() {
                p[0] += m * p[1];
            }
            let minx = buf.iter().map(|p| p[0]).min().unwrap();
            let miny = buf.iter().map(|p| p[1]).min().unwrap();
            for p in buf.iter_mut() {
                p[0] -= minx;
                p[1] -= miny;
            }
            let lead = (0..n).min_by_key(|&i| buf[i]).unwrap();
            buf.rotate_left(lead);
            if best.as_ref().is_none_or(|b| buf < *b) {
                best = Some(buf.clone());
            }
        }
    }
    best.unwrap()
}

/// Integral points of a polygon's bounding box that satisfy `pred`.
pub fn box_points(poly: &[P2], mut pred: impl FnMut(P2) -> bool) -> Vec<P2> {
    let (mut x0, mut x1, mut y0, mut y1) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
    for p in poly {
        x0 = x0.min(p[0]);
        x1 = x1.max(p[0]);
        y0 = y0.min(p[1]);
        y1 = y1.max(p[1]);
    }
    let mut out = Vec::new();
    for x in x0..=x1 {
        for y in y0..=y1 {
            if pred([x, y]) {
                out.push([x, y]);
            }
        }
    }
    out
}
