use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use super::CensusError;
use crate::lattice::planar::{self, P2};
use crate::lattice::CanonicalPolygon;

pub const FORMAT_TAG: &str = "polygon-census";
pub const FORMAT_VERSION: &str = "v1";

/// Vertex counts above this are rejected while parsing.
const MAX_VERTICES: usize = 4096;

/// Census polygons are small; this keeps normal-form arithmetic far from
/// overflow on arbitrary input.
pub const CENSUS_COORD_LIMIT: i64 = 1 << 12;

/// The parsed contents of one census file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusFile {
    pub interior: usize,
    pub box_bound: usize,
    pub complete: bool,
    pub polygons: Vec<CanonicalPolygon>,
}

impl CensusFile {
    pub fn render(&self) -> String {
        let mut s = format!(
            "{FORMAT_TAG} {FORMAT_VERSION} interior={} box={} complete={}\n",
            self.interior,
            self.box_bound,
            u8::from(self.complete)
        );
        for p in &self.polygons {
            write!(s, "{}", p.vertex_count()).unwrap();
            for v in p.vertices() {
                write!(s, " {} {}", v[0], v[1]).unwrap();
            }
            s.push('\n');
        }
        writeln!(s, "count={}", self.polygons.len()).unwrap();
        s
    }
}

fn header_field<'a>(tok: Option<&'a str>, key: &str) -> Result<&'a str, CensusError> {
    tok.and_then(|t| t.strip_prefix(key))
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| CensusError::Header(format!("expected {key}=<value>")))
}

fn parse_usize(s: &str, what: &str) -> Result<usize, CensusError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) || (s.len() > 1 && s.starts_with('0'))
    {
        return Err(CensusError::Header(format!("bad {what} {s:?}")));
    }
    s.parse()
        .map_err(|_| CensusError::Header(format!("bad {what} {s:?}")))
}

fn parse_polygon(
    line: &str,
    lineno: usize,
    interior: usize,
) -> Result<CanonicalPolygon, CensusError> {
    let bad = |msg: &str| CensusError::Line {
        line: lineno,
        msg: msg.to_string(),
    };
    let mut nums = Vec::new();
    for tok in line.split(' ') {
        let v: i64 = tok.parse().map_err(|_| bad("non-integer token"))?;
        if v.to_string() != tok {
            return Err(bad("non-canonical integer"));
        }
        nums.push(v);
    }
    let v = usize::try_from(nums[0]).map_err(|_| bad("negative vertex count"))?;
    if !(3..=MAX_VERTICES).contains(&v) || nums.len() != 1 + 2 * v {
        return Err(bad("vertex count does not match coordinates"));
    }
    if nums[1..].iter().any(|c| c.abs() > CENSUS_COORD_LIMIT) {
        return Err(bad("coordinate out of range"));
    }
    let cycle: Vec<P2> = nums[1..].chunks(2).map(|c| [c[0], c[1]]).collect();
    if planar::hull(&cycle) != cycle {
        return Err(bad(
            "vertices are not a strictly convex counter-clockwise cycle",
        ));
    }
    let p = CanonicalPolygon::from_cycle(&cycle).map_err(|e| bad(&e.to_string()))?;
    if p.vertices() != cycle.as_slice() {
        return Err(bad("polygon is not in normal form"));
    }
    if p.interior_count() != interior {
        return Err(bad("interior count disagrees with header"));
    }
    if p.width_at_most_one() {
        return Err(bad("width-one polygon in census"));
    }
    Ok(p)
}

/// Parses and validates a census file. Every polygon must be a
/// counter-clockwise normal form with the header's interior count, listed in
/// strictly increasing order; the trailer must match the number of lines.
pub fn parse_census_file(text: &str) -> Result<CensusFile, CensusError> {
    let body = text
        .strip_suffix('\n')
        .ok_or_else(|| CensusError::Header("missing final newline".into()))?;
    let mut lines = body.split('\n');
    let header = lines.next().unwrap_or_default();
    let mut toks = header.split(' ');
    if toks.next() != Some(FORMAT_TAG) {
        return Err(CensusError::Header("not a census file".into()));
    }
    match toks.next() {
        Some(FORMAT_VERSION) => {}
        other => {
            return Err(CensusError::Version(other.unwrap_or_default().to_string()));
        }
    }
    let interior = parse_usize(header_field(toks.next(), "interior")?, "interior")?;
    let box_bound = parse_usize(header_field(toks.next(), "box")?, "box")?;
    let complete = match header_field(toks.next(), "complete")? {
        "0" => false,
        "1" => true,
        other => return Err(CensusError::Header(format!("bad complete flag {other:?}"))),
    };
    if toks.next().is_some() {
        return Err(CensusError::Header("trailing header fields".into()));
    }

    let rest: Vec<&str> = lines.collect();
    let Some((trailer, rows)) = rest.split_last() else {
        return Err(CensusError::Header("missing count trailer".into()));
    };
    let count = trailer
        .strip_prefix("count=")
        .ok_or_else(|| CensusError::Header("missing count trailer".into()))
        .and_then(|c| parse_usize(c, "count"))?;
    if count != rows.len() {
        return Err(CensusError::Checksum {
            expected: count,
            found: rows.len(),
        });
    }
    let mut polygons: Vec<CanonicalPolygon> = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let p = parse_polygon(row, i + 2, interior)?;
        if polygons
            .last()
            .is_some_and(|q| q.vertices() >= p.vertices())
        {
            return Err(CensusError::Line {
                line: i + 2,
                msg: "polygons out of order or duplicated".into(),
            });
        }
        polygons.push(p);
    }
    Ok(CensusFile {
        interior,
        box_bound,
        complete,
        polygons,
    })
}

/// A directory of per-interior-count census files.
#[derive(Clone, Debug)]
pub struct CensusCache {
    dir: PathBuf,
}

impl CensusCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, interior: usize) -> PathBuf {
        self.dir.join(format!("interior-{interior}.census"))
    }

    /// Writes through a temporary file and a rename.
    pub fn save(&self, file: &CensusFile) -> Result<(), CensusError> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(file.interior);
        let tmp = self.dir.join(format!(
            ".interior-{}.census.{}.tmp",
            file.interior,
            std::process::id()
        ));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(file.render().as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    /// Loads any file, complete or not.
    pub fn load_any(&self, interior: usize) -> Result<CensusFile, CensusError> {
        let path = self.path_for(interior);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => {
                return Err(CensusError::NotFound(path));
            }
            Err(e) => return Err(e.into()),
        };
        let f = parse_census_file(&text)?;
        if f.interior != interior {
            return Err(CensusError::Header(format!(
                "file for interior {interior} declares interior {}",
                f.interior
            )));
        }
        Ok(f)
    }

    /// Loads a complete file; an incomplete one is an error distinct from a
    /// missing one.
    pub fn load(&self, interior: usize) -> Result<CensusFile, CensusError> {
        let f = self.load_any(interior)?;
        if !f.complete {
            return Err(CensusError::Incomplete(interior));
        }
        Ok(f)
    }
}
