use std::fmt;

use serde::Serialize;

use super::LatticeError;

/// Coordinates are bounded so that every predicate up to dimension 5 is exact
/// in 128-bit arithmetic.
pub const COORD_LIMIT: i64 = 1 << 24;

/// A point of `Z^n`. Ordering is lexicographic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct LatticePoint(Vec<i64>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Result<Self, LatticeError> {
        if coords.is_empty() {
            return Err(LatticeError::EmptyPoint);
        }
        if let Some(&c) = coords.iter().find(|c| c.abs() > COORD_LIMIT) {
            return Err(LatticeError::CoordinateOutOfRange(c));
        }
        Ok(Self(coords))
    }

    /// Builds a point from trusted coordinates.
    ///
    /// # Panics
    /// Panics on an empty slice or a coordinate beyond [`COORD_LIMIT`].
    pub fn from_slice(coords: &[i64]) -> Self {
        Self::new(coords.to_vec()).expect("valid lattice point")
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn origin(dim: usize) -> Self {
        Self(vec![0; dim])
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl std::ops::Index<usize> for LatticePoint {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

/// A finite discrete point set: sorted, deduplicated, one ambient dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteSite {
    points: Vec<LatticePoint>,
    dim: usize,
}

impl FiniteSite {
    pub fn new(mut points: Vec<LatticePoint>) -> Result<Self, LatticeError> {
        let Some(first) = points.first() else {
            return Err(LatticeError::EmptyInput);
        };
        let dim = first.dim();
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(LatticeError::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
        points.sort();
        points.dedup();
        Ok(Self { points, dim })
    }

    /// The box `{0,..,d_1-1} x ... x {0,..,d_m-1}`.
    pub fn grid(dims: &[u32]) -> Result<Self, LatticeError> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(LatticeError::EmptyInput);
        }
        let mut points = Vec::new();
        let mut cur = vec![0i64; dims.len()];
        loop {
            points.push(LatticePoint::new(cur.clone())?);
            let mut i = dims.len();
            loop {
                if i == 0 {
                    return Self::new(points);
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < i64::from(dims[i]) {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.index_of(p).is_some()
    }

    pub fn index_of(&self, p: &LatticePoint) -> Option<usize> {
        self.points.binary_search(p).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_sorted_and_complete() {
        let s = FiniteSite::grid(&[3, 2]).unwrap();
        assert_eq!(s.len(), 6);
        assert_eq!(s.points()[0], LatticePoint::from_slice(&[0, 0]));
        assert_eq!(s.points()[1], LatticePoint::from_slice(&[0, 1]));
        assert_eq!(s.points()[5], LatticePoint::from_slice(&[2, 1]));
        assert!(s.contains(&LatticePoint::from_slice(&[1, 1])));
        assert!(!s.contains(&LatticePoint::from_slice(&[3, 0])));
    }

    #[test]
    fn site_rejects_mixed_dimensions() {
        let err = FiniteSite::new(vec![
            LatticePoint::from_slice(&[0, 0]),
            LatticePoint::from_slice(&[0, 0, 1]),
        ])
        .unwrap_err();
        assert!(matches!(err, LatticeError::DimensionMismatch { .. }));
    }

    #[test]
    fn site_deduplicates() {
        let p = LatticePoint::from_slice(&[1, 2]);
        let s = FiniteSite::new(vec![p.clone(), p.clone()]).unwrap();
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn coordinate_limit_enforced() {
        assert!(LatticePoint::new(vec![COORD_LIMIT + 1]).is_err());
        assert!(LatticePoint::new(vec![]).is_err());
    }
}
