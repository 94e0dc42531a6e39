//! Explicit extremal polytopes: the small-`k` family for `Z^n` and the
//! parabolic construction giving `c(Z^n,k) >= t^{n-1}`, each re-verified by a
//! from-scratch lattice point census.

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::arith::nth_root_floor;
use crate::lattice::{
    census, convex_hull, lattice_points_in, LatticeError, LatticePoint, LatticePolytope, Region,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("{recipe:?} needs dimension at least {min}, got {n}")]
    Dimension {
        recipe: RecipeKind,
        n: usize,
        min: usize,
    },
    #[error("{what}: predicted {expected}, found {found}")]
    Mismatch {
        what: &'static str,
        expected: u128,
        found: u128,
    },
    #[error("realization box of {0} points is above the limit")]
    TooLarge(u128),
    #[error("arithmetic identity failed: {0}")]
    Arithmetic(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RecipeKind {
    /// `[0,1]^n`
    Cube,
    /// `conv([-1,0]^n ∪ [0,1]^n)`
    Pn,
    /// `conv((P_{n-1} × [0,1]) ∪ ({0}^{n-1} × [-1,k]))`
    PrismSpike(u8),
    /// `conv((P' × [0,1]) ∪ (X' × [-1,2]))` with `P'` the two-point prism
    /// spike in dimension `n-1` and `X'` its non-vertex points
    DoubleSpike,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ConstructionRecipe {
    pub kind: RecipeKind,
    pub n: usize,
}

impl ConstructionRecipe {
    /// The recipe realizing `g(Z^n,k)` for `k <= 4`.
    pub fn for_k(n: usize, k: usize) -> Option<Self> {
        let kind = match k {
            0 => RecipeKind::Cube,
            1 => RecipeKind::Pn,
            2 => RecipeKind::PrismSpike(2),
            3 => RecipeKind::PrismSpike(3),
            4 => RecipeKind::DoubleSpike,
            _ => return None,
        };
        Some(Self { kind, n })
    }

    pub fn expected_vertices(&self) -> u128 {
        let p = 1u128 << self.n;
        match self.kind {
            RecipeKind::Cube => p,
            RecipeKind::Pn | RecipeKind::PrismSpike(_) => 2 * p - 2,
            RecipeKind::DoubleSpike => 2 * p,
        }
    }

    pub fn expected_nonvertex(&self) -> u128 {
        match self.kind {
            RecipeKind::Cube => 0,
            RecipeKind::Pn => 1,
            RecipeKind::PrismSpike(k) => u128::from(k),
            RecipeKind::DoubleSpike => 4,
        }
    }
}

fn pt(c: Vec<i64>) -> Result<LatticePoint, LatticeError> {
    LatticePoint::new(c)
}

fn cube_points(n: usize, lo: i64) -> Vec<Vec<i64>> {
    (0..1u64 << n)
        .map(|m| (0..n).map(|i| lo + ((m >> i) & 1) as i64).collect())
        .collect()
}

/// Lattice points generating each construction (not necessarily minimal).
fn generators(kind: RecipeKind, n: usize) -> Result<Vec<Vec<i64>>, WitnessError> {
    let need = |min: usize| {
        if n < min {
            Err(WitnessError::Dimension {
                recipe: kind,
                n,
                min,
            })
        } else {
            Ok(())
        }
    };
    match kind {
        RecipeKind::Cube => {
            need(1)?;
            Ok(cube_points(n, 0))
        }
        RecipeKind::Pn => {
            need(1)?;
            let mut v = cube_points(n, -1);
            v.extend(cube_points(n, 0));
            Ok(v)
        }
        RecipeKind::PrismSpike(k) => {
            need(1)?;
            let k = i64::from(k);
            let mut v = Vec::new();
            if n >= 2 {
                for base in generators(RecipeKind::Pn, n - 1)? {
                    for h in [0, 1] {
                        let mut p = base.clone();
                        p.push(h);
                        v.push(p);
                    }
                }
            }
            for h in [-1, k] {
                let mut p = vec![0; n - 1];
                p.push(h);
                v.push(p);
            }
            Ok(v)
        }
        RecipeKind::DoubleSpike => {
            need(2)?;
            let base = build(RecipeKind::PrismSpike(2), n - 1)?;
            let mut v = Vec::new();
            for x in lattice_points_in(&base, Region::FullLattice)? {
                let spike = !base.is_vertex(&x);
                let heights: &[i64] = if spike { &[-1, 2] } else { &[0, 1] };
                for &h in heights {
                    let mut p = x.coords().to_vec();
                    p.push(h);
                    v.push(p);
                }
            }
            Ok(v)
        }
    }
}

fn build(kind: RecipeKind, n: usize) -> Result<LatticePolytope, WitnessError> {
    let pts = generators(kind, n)?
        .into_iter()
        .map(pt)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(convex_hull(&pts)?)
}

/// Builds the recipe's polytope and checks its census against the expected
/// counts.
pub fn small_k_witness(recipe: &ConstructionRecipe) -> Result<LatticePolytope, WitnessError> {
    let p = build(recipe.kind, recipe.n)?;
    verify_small_k(recipe, &p)?;
    Ok(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub vertices: u128,
    pub nonvertex: u128,
    pub total: u128,
}

/// Re-derives the counts from scratch: enumerate `P ∩ Z^n`, take the hull of
/// those points, and census it.
fn recount(p: &LatticePolytope) -> Result<VerificationReport, WitnessError> {
    let pts = lattice_points_in(p, Region::FullLattice)?;
    let q = convex_hull(&pts)?;
    let c = census(&q, Region::FullLattice)?;
    Ok(VerificationReport {
        vertices: c.vertex_count as u128,
        nonvertex: c.nonvertex_count as u128,
        total: c.total as u128,
    })
}

fn expect(what: &'static str, expected: u128, found: u128) -> Result<(), WitnessError> {
    if expected == found {
        Ok(())
    } else {
        Err(WitnessError::Mismatch {
            what,
            expected,
            found,
        })
    }
}

pub fn verify_small_k(
    recipe: &ConstructionRecipe,
    p: &LatticePolytope,
) -> Result<VerificationReport, WitnessError> {
    let r = recount(p)?;
    expect("vertices", recipe.expected_vertices(), r.vertices)?;
    expect(
        "non-vertex points",
        recipe.expected_nonvertex(),
        r.nonvertex,
    )?;
    Ok(r)
}

/// Largest bounding box realized point by point.
pub const REALIZATION_LIMIT: u128 = 10_000_000;

/// Parameters of the parabolic construction for `(n, k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowerBoundWitness {
    pub n: usize,
    pub k: u64,
    /// largest integer with `2n t^{n+1} <= k`
    pub t: u64,
    /// largest integer keeping the non-vertex count at most `k`
    pub s: u64,
    pub k_prime: u64,
    pub predicted_vertices: u64,
    /// `t^{n-1}`, a lower bound on `c(Z^n,k)`; 1 when degenerate
    pub helly_lower_bound: u64,
    /// `k < 2n`: a segment with `k` interior lattice points stands in
    pub degenerate: bool,
    #[serde(skip)]
    pub realized: Option<LatticePolytope>,
    pub verified: bool,
}

fn pow_u128(b: u64, e: usize) -> Option<u128> {
    u128::from(b).checked_pow(u32::try_from(e).ok()?)
}

/// `(n-1)(4t^2-3t-1) t^{n-1} / 3`, the non-vertex count at `s = 1`.
fn base_count(n: usize, t: u64) -> Result<u128, WitnessError> {
    let t = u128::from(t);
    let poly = (n as u128 - 1) * (4 * t * t - 3 * t - 1);
    let num = poly
        * pow_u128(t as u64, n - 1).ok_or_else(|| WitnessError::Arithmetic("overflow".into()))?;
    if !num.is_multiple_of(3) {
        return Err(WitnessError::Arithmetic(format!(
            "(n-1)(4t^2-3t-1)t^(n-1) = {num} is not divisible by 3"
        )));
    }
    Ok(num / 3)
}

/// Non-vertex count `(s + (n-1)(4t^2-3t-1)/3 - 1) t^{n-1}` for `s >= 1`.
pub fn nonvertex_formula(n: usize, t: u64, s: u64) -> Result<u128, WitnessError> {
    let tp = pow_u128(t, n - 1).ok_or_else(|| WitnessError::Arithmetic("overflow".into()))?;
    Ok((u128::from(s) - 1) * tp + base_count(n, t)?)
}

/// Lattice points of `C = {x in [1,t]^{n-1} x R : l(x') <= x_n <= u(x')}`,
/// or only the two ends of each vertical fibre when `ends_only`.
fn construction_points(
    n: usize,
    t: u64,
    s: u64,
    ends_only: bool,
) -> Result<Vec<LatticePoint>, WitnessError> {
    let t = t as i64;
    let s = s as i64;
    let mut pts = Vec::new();
    let mut x = vec![1i64; n - 1];
    loop {
        let sq: i64 = x.iter().map(|v| v * v - t * t).sum();
        let (lo, hi) = (sq, s - sq);
        let fibre: Vec<i64> = if ends_only {
            vec![lo, hi]
        } else {
            (lo..=hi).collect()
        };
        for h in fibre {
            let mut c = x.clone();
            c.push(h);
            pts.push(pt(c)?);
        }
        let mut i = n - 1;
        loop {
            if i == 0 {
                return Ok(pts);
            }
            i -= 1;
            if x[i] < t {
                x[i] += 1;
                break;
            }
            x[i] = 1;
        }
    }
}

fn realization_box(n: usize, t: u64, s: u64) -> u128 {
    let t = u128::from(t);
    let height = u128::from(s) + 2 * (n as u128 - 1) * (t * t - 1) + 1;
    t.saturating_pow(n as u32 - 1).saturating_mul(height)
}

/// Computes `t`, `s` and `k'` exactly, and realizes the polytope when its
/// bounding box has at most [`REALIZATION_LIMIT`] points.
pub fn lower_bound_witness(n: usize, k: u64) -> Result<LowerBoundWitness, WitnessError> {
    if n < 2 {
        return Err(WitnessError::Dimension {
            recipe: RecipeKind::Pn,
            n,
            min: 2,
        });
    }
    if k < 2 * n as u64 {
        let seg = convex_hull(&[
            pt(vec![0; n])?,
            pt(std::iter::once(k as i64 + 1)
                .chain(std::iter::repeat_n(0, n - 1))
                .collect())?,
        ])?;
        return Ok(LowerBoundWitness {
            n,
            k,
            t: 0,
            s: 0,
            k_prime: k,
            predicted_vertices: 2,
            helly_lower_bound: 1,
            degenerate: true,
            realized: Some(seg),
            verified: false,
        });
    }
    let t = u64::try_from(nth_root_floor(
        &BigUint::from(k / (2 * n as u64)),
        n as u32 + 1,
    ))
    .map_err(|_| WitnessError::Arithmetic("t overflow".into()))?;
    let tp = pow_u128(t, n - 1).ok_or_else(|| WitnessError::Arithmetic("overflow".into()))?;
    let base = base_count(n, t)?;
    let s = (u128::from(k) - base) / tp + 1;
    let s = u64::try_from(s).map_err(|_| WitnessError::Arithmetic("s overflow".into()))?;
    let k_prime = u64::try_from(nonvertex_formula(n, t, s)?)
        .map_err(|_| WitnessError::Arithmetic("k' overflow".into()))?;
    let mut w = LowerBoundWitness {
        n,
        k,
        t,
        s,
        k_prime,
        predicted_vertices: 2 * tp as u64,
        helly_lower_bound: tp as u64,
        degenerate: false,
        realized: None,
        verified: false,
    };
    check_invariants(&w)?;
    if realization_box(n, t, s) <= REALIZATION_LIMIT {
        w.realized = Some(convex_hull(&construction_points(n, t, s, true)?)?);
    }
    Ok(w)
}

/// Formula-level invariants: the range of `t`, `k' <= k`, `k - k' <= t^{n-1}`,
/// and maximality of `s`.
pub fn check_invariants(w: &LowerBoundWitness) -> Result<(), WitnessError> {
    if w.degenerate {
        return Ok(());
    }
    let n = w.n;
    let k = u128::from(w.k);
    let two_n = 2 * n as u128;
    let lo = two_n * pow_u128(w.t, n + 1).unwrap_or(u128::MAX);
    let hi = two_n.saturating_mul(pow_u128(w.t + 1, n + 1).unwrap_or(u128::MAX));
    if !(lo <= k && k < hi) {
        return Err(WitnessError::Arithmetic(format!(
            "t = {} does not satisfy 2n t^(n+1) <= k < 2n (t+1)^(n+1)",
            w.t
        )));
    }
    let tp = pow_u128(w.t, n - 1).unwrap_or(u128::MAX);
    let kp = u128::from(w.k_prime);
    if kp != nonvertex_formula(n, w.t, w.s)? || kp > k || k - kp > tp {
        return Err(WitnessError::Arithmetic(format!(
            "k' = {kp} out of range for k = {k}"
        )));
    }
    if nonvertex_formula(n, w.t, w.s + 1)? <= k {
        return Err(WitnessError::Arithmetic(format!(
            "s = {} is not maximal",
            w.s
        )));
    }
    Ok(())
}

/// Rebuilds `C ∩ Z^n` from `(n, t, s)`, takes its hull and compares vertex
/// and non-vertex counts with the stored predictions.
pub fn verify_witness(w: &LowerBoundWitness) -> Result<VerificationReport, WitnessError> {
    let p = if w.degenerate {
        w.realized
            .clone()
            .ok_or_else(|| WitnessError::Arithmetic("degenerate witness without segment".into()))?
    } else {
        let b = realization_box(w.n, w.t, w.s);
        if b > REALIZATION_LIMIT {
            return Err(WitnessError::TooLarge(b));
        }
        convex_hull(&construction_points(w.n, w.t, w.s, false)?)?
    };
    let r = recount(&p)?;
    expect("vertices", u128::from(w.predicted_vertices), r.vertices)?;
    expect("non-vertex points", u128::from(w.k_prime), r.nonvertex)?;
    Ok(r)
}
