use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::lattice::{FiniteSite, LatticeError, COORD_LIMIT, MAX_HULL_DIM};

/// A site given on the command line: a box grid such as `3x3` or `2x2x2`, or
/// the full lattice `z2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SiteSpec {
    Grid(Vec<u32>),
    Lattice(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SiteParseError {
    #[error("empty site specification")]
    Empty,
    #[error("invalid grid extent {0:?}")]
    BadExtent(String),
    #[error("dimension {0} outside 1..={MAX_HULL_DIM}")]
    Dimension(usize),
}

impl FromStr for SiteSpec {
    type Err = SiteParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(SiteParseError::Empty);
        }
        if let Some(rest) = s.strip_prefix(['z', 'Z']) {
            let n: usize = rest
                .parse()
                .map_err(|_| SiteParseError::BadExtent(rest.to_string()))?;
            if n == 0 || n > MAX_HULL_DIM {
                return Err(SiteParseError::Dimension(n));
            }
            return Ok(SiteSpec::Lattice(n));
        }
        let dims = s
            .split(['x', 'X'])
            .map(|part| match part.parse::<u32>() {
                Ok(d) if d >= 1 && i64::from(d) <= COORD_LIMIT => Ok(d),
                _ => Err(SiteParseError::BadExtent(part.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if dims.len() > MAX_HULL_DIM {
            return Err(SiteParseError::Dimension(dims.len()));
        }
        Ok(SiteSpec::Grid(dims))
    }
}

impl fmt::Display for SiteSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SiteSpec::Lattice(n) => write!(f, "z{n}"),
            SiteSpec::Grid(d) => {
                let parts: Vec<String> = d.iter().map(u32::to_string).collect();
                f.write_str(&parts.join("x"))
            }
        }
    }
}

impl SiteSpec {
    pub fn dim(&self) -> usize {
        match self {
            SiteSpec::Grid(d) => d.len(),
            SiteSpec::Lattice(n) => *n,
        }
    }

    /// The finite site, or `None` for a full lattice.
    pub fn to_site(&self) -> Result<Option<FiniteSite>, LatticeError> {
        match self {
            SiteSpec::Grid(d) => FiniteSite::grid(d).map(Some),
            SiteSpec::Lattice(_) => Ok(None),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_grids_and_lattices() {
        assert_eq!("3x3".parse(), Ok(SiteSpec::Grid(vec![3, 3])));
        assert_eq!("4X3".parse(), Ok(SiteSpec::Grid(vec![4, 3])));
        assert_eq!(" 2x2x2 ".parse(), Ok(SiteSpec::Grid(vec![2, 2, 2])));
        assert_eq!("z2".parse(), Ok(SiteSpec::Lattice(2)));
        assert_eq!("Z3".parse(), Ok(SiteSpec::Lattice(3)));
    }

    #[test]
    fn rejects_garbage() {
        for bad in [
            "",
            "x",
            "3x",
            "0x3",
            "3x-1",
            "z0",
            "z9",
            "2x2x2x2x2x2",
            "zz",
            "3 x 3",
        ] {
            assert!(bad.parse::<SiteSpec>().is_err(), "{bad}");
        }
    }

    proptest! {
        #[test]
        fn display_round_trips(dims in prop::collection::vec(1u32..50, 1..=5)) {
            let s = SiteSpec::Grid(dims);
            prop_assert_eq!(s.to_string().parse::<SiteSpec>(), Ok(s));
        }

        #[test]
        fn never_panics(s in "\\PC*") {
            let _ = s.parse::<SiteSpec>();
        }
    }
}
