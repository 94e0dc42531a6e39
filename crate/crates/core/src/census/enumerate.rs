use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use rayon::prelude::*;

use super::CensusError;
use crate::lattice::planar::{self, P2};
use crate::lattice::CanonicalPolygon;

/// Upper bound on the number of boundary points of a lattice polygon with
/// `i` interior points and lattice width at least two (`2i + 6`, or 9 for
/// the triple unimodular triangle).
pub fn certified_box_bound(i: usize) -> usize {
    2 * i + 7
}

/// Width-one polygons `conv{(0,0),(p-1,0),(0,1),(q-1,1)}` with `p >= q >= 1`
/// and between 3 and `max_total` lattice points; one per class.
pub fn width_one_seeds(max_total: usize) -> Vec<Vec<P2>> {
    let mut out = Vec::new();
    for total in 3..=max_total as i64 {
        for q in 1..=total / 2 {
            let p = total - q;
            out.push(planar::hull(&[[0, 0], [p - 1, 0], [0, 1], [q - 1, 1]]));
        }
    }
    out
}

fn floor_ratio(r: Ratio<i128>) -> i128 {
    r.floor().to_integer()
}

fn ceil_ratio(r: Ratio<i128>) -> i128 {
    r.ceil().to_integer()
}

/// Bounding box of `{x : a_j . x <= b_j + 1}` from all pairwise line
/// intersections.
fn candidate_box(ineqs: &[(P2, i64)]) -> (i64, i64, i64, i64) {
    let (mut x0, mut x1, mut y0, mut y1) = (i128::MAX, i128::MIN, i128::MAX, i128::MIN);
    for (i, &(a, b)) in ineqs.iter().enumerate() {
        for &(c, d) in &ineqs[i + 1..] {
            let det = i128::from(a[0]) * i128::from(c[1]) - i128::from(a[1]) * i128::from(c[0]);
            if det == 0 {
                continue;
            }
            let (b, d) = (i128::from(b) + 1, i128::from(d) + 1);
            let x = Ratio::new(b * i128::from(c[1]) - d * i128::from(a[1]), det);
            let y = Ratio::new(i128::from(a[0]) * d - i128::from(c[0]) * b, det);
            x0 = x0.min(floor_ratio(x));
            x1 = x1.max(ceil_ratio(x));
            y0 = y0.min(floor_ratio(y));
            y1 = y1.max(ceil_ratio(y));
        }
    }
    let c = |v: i128| v as i64;
    (c(x0), c(x1), c(y0), c(y1))
}

/// All polygons obtained from `poly` by adjoining one lattice point so that
/// exactly one new lattice point enters and the interior count becomes
/// `interior`.
fn grow(poly: &[P2], interior: i64) -> Vec<Vec<P2>> {
    let old_total = planar::total_count(poly);
    let ineqs = planar::edge_inequalities(poly);
    let (x0, x1, y0, y1) = candidate_box(&ineqs);
    let mut out = Vec::new();
    let mut pts = Vec::with_capacity(poly.len() + 1);
    for x in x0..=x1 {
        for y in y0..=y1 {
            let w = [x, y];
            let mut outside = false;
            let mut near = true;
            for &(a, b) in &ineqs {
                let v = planar::dot(a, w);
                if v > b + 1 {
                    near = false;
                    break;
                }
                if v > b {
                    outside = true;
                }
            }
            if !near || !outside {
                continue;
            }
            pts.clear();
            pts.extend_from_slice(poly);
            pts.push(w);
            let h = planar::hull(&pts);
            if planar::total_count(&h) == old_total + 1 && planar::interior_count(&h) == interior {
                out.push(planar::normal_form(&h));
            }
        }
    }
    out
}

/// Equivalence classes of lattice polygons with exactly `interior` interior
/// points and lattice width at least two, given complete class lists for
/// every smaller interior count (`lower[j]` for `j < interior`).
///
/// Every such polygon is reached by adjoining points one at a time to either
/// a smaller-interior class or a width-one polygon: removing a vertex lowers
/// the lattice point count by one and never raises the interior count.
pub fn enumerate_from_lower(
    interior: usize,
    box_bound: usize,
    lower: &[Vec<CanonicalPolygon>],
) -> Result<Vec<CanonicalPolygon>, CensusError> {
    let needed = certified_box_bound(interior);
    if box_bound < needed {
        return Err(CensusError::BoxBelowCertified {
            interior,
            requested: box_bound,
            certified: needed,
        });
    }
    if lower.len() < interior {
        return Err(CensusError::MissingLower {
            interior,
            missing: (lower.len()..interior).collect(),
        });
    }
    let max_total = interior + box_bound;
    let target = interior as i64;

    let mut sources: BTreeMap<usize, BTreeSet<Vec<P2>>> = BTreeMap::new();
    for seed in width_one_seeds(max_total - 1) {
        let t = planar::total_count(&seed) as usize;
        sources
            .entry(t)
            .or_default()
            .insert(planar::normal_form(&seed));
    }
    for class in lower.iter().take(interior).flatten() {
        if class.total_count() < max_total {
            sources
                .entry(class.total_count())
                .or_default()
                .insert(class.vertices().to_vec());
        }
    }

    let mut found: BTreeSet<Vec<P2>> = BTreeSet::new();
    let first = sources.keys().next().copied().unwrap_or(max_total);
    for t in first..max_total {
        let Some(level) = sources.remove(&t) else {
            continue;
        };
        let level: Vec<Vec<P2>> = level.into_iter().collect();
        let mut grown: Vec<Vec<P2>> = level
            .par_iter()
            .flat_map_iter(|p| grow(p, target))
            .collect();
        grown.sort_unstable();
        grown.dedup();
        for g in grown {
            if found.insert(g.clone()) {
                sources.entry(t + 1).or_default().insert(g);
            }
        }
    }

    Ok(found
        .into_iter()
        .filter(|p| !planar::width_at_most_one(p))
        .map(CanonicalPolygon::from_normal_form)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_cover_each_width_one_class_once() {
        let s = width_one_seeds(5);
        // totals 3: (2,1); 4: (3,1),(2,2); 5: (4,1),(3,2)
        assert_eq!(s.len(), 5);
        let mut forms: Vec<Vec<P2>> = s.iter().map(|p| planar::normal_form(p)).collect();
        forms.sort();
        forms.dedup();
        assert_eq!(forms.len(), 5);
    }

    #[test]
    fn candidate_box_contains_expanded_square() {
        let sq = planar::hull(&[[0, 0], [1, 0], [0, 1], [1, 1]]);
        let (x0, x1, y0, y1) = candidate_box(&planar::edge_inequalities(&sq));
        assert_eq!((x0, x1, y0, y1), (-1, 2, -1, 2));
    }

    #[test]
    fn refuses_small_box() {
        let err = enumerate_from_lower(0, 3, &[]).unwrap_err();
        assert!(matches!(err, CensusError::BoxBelowCertified { .. }));
    }
}
