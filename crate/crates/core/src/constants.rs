//! Certified interval evaluation of the constants in Andrews' volume bound
//! and the constant chain of the asymptotic upper bound.
//!
//! Every quantity is an interval with exact rational end points, rounded
//! outward to a fixed number of significant bits after each operation, so no
//! floating point enters a certification.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::census::PolygonCensus;
use crate::lattice::CanonicalPolygon;

pub const DEFAULT_PRECISION: u32 = 128;
pub const MIN_PRECISION: u32 = 64;
/// Inconclusive checks are retried with doubled precision up to this cap.
pub const MAX_PRECISION: u32 = 4096;

fn big(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn pow2(e: i64) -> BigRational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// `floor(log2 x)` for `x > 0`.
fn floor_log2(x: &BigRational) -> i64 {
    let mut e = x.numer().bits() as i64 - x.denom().bits() as i64;
    // 2^(e-1) < x < 2^(e+1)
    if *x < pow2(e) {
        e -= 1;
    }
    e
}

fn floor_int(x: &BigRational) -> BigInt {
    x.floor().to_integer()
}

/// Round `x` to `prec` significant bits, down (`up == false`) or up.
fn round(x: &BigRational, prec: u32, up: bool) -> BigRational {
    if x.is_zero() {
        return x.clone();
    }
    if x.is_negative() {
        return -round(&-x, prec, !up);
    }
    let shift = i64::from(prec) - 1 - floor_log2(x);
    let scaled = x * pow2(shift);
    let int = if up { scaled.ceil() } else { scaled.floor() };
    int * pow2(-shift)
}

/// `x^(1/q)` rounded to `prec` significant bits, for `x > 0`.
fn root_rounded(x: &BigRational, q: u32, prec: u32, up: bool) -> BigRational {
    assert!(x.is_positive() && q > 0);
    if q == 1 {
        return round(x, prec, up);
    }
    let e = floor_log2(x).div_euclid(i64::from(q));
    let shift = i64::from(prec) - 1 - e;
    let scaled = x * pow2(shift * i64::from(q));
    let to_uint = |v: BigInt| v.to_biguint().expect("positive");
    let y = if up {
        let c = to_uint(scaled.ceil().to_integer());
        let r = c.nth_root(q);
        if num_traits::pow(r.clone(), q as usize) == c {
            r
        } else {
            r + 1u32
        }
    } else {
        to_uint(floor_int(&scaled)).nth_root(q)
    };
    BigRational::from_integer(BigInt::from_biguint(Sign::Plus, y)) * pow2(-shift)
}

/// A closed interval `[lo, hi]` known to contain a real number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    lo: BigRational,
    hi: BigRational,
    prec: u32,
}

impl Enclosure {
    pub fn exact(x: BigRational, prec: u32) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
            prec,
        }
    }

    pub fn from_int(n: u64, prec: u32) -> Self {
        Self::exact(big(n), prec)
    }

    pub fn ratio(p: i64, q: i64, prec: u32) -> Self {
        Self::exact(BigRational::new(p.into(), q.into()), prec)
    }

    /// Panics when `lo > hi`.
    pub fn new(lo: BigRational, hi: BigRational, prec: u32) -> Self {
        assert!(lo <= hi, "empty enclosure");
        Self { lo, hi, prec }
    }

    fn rounded(lo: BigRational, hi: BigRational, prec: u32) -> Self {
        Self {
            lo: round(&lo, prec, false),
            hi: round(&hi, prec, true),
            prec,
        }
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn is_subset_of(&self, other: &Enclosure) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// `width / min |x|`, or `None` when the interval touches zero.
    pub fn relative_width(&self) -> Option<BigRational> {
        if self.lo.is_positive() {
            Some(self.width() / &self.lo)
        } else if self.hi.is_negative() {
            Some(self.width() / -&self.hi)
        } else {
            None
        }
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / big(2))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::rounded(&self.lo + &o.lo, &self.hi + &o.hi, self.prec.min(o.prec))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::rounded(&self.lo - &o.hi, &self.hi - &o.lo, self.prec.min(o.prec))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Self::rounded(lo, hi, self.prec.min(o.prec))
    }

    /// `None` when the interval contains zero.
    pub fn recip(&self) -> Option<Self> {
        if self.lo.is_positive() || self.hi.is_negative() {
            Some(Self::rounded(self.hi.recip(), self.lo.recip(), self.prec))
        } else {
            None
        }
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        Some(self.mul(&o.recip()?))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        self.mul(&Self::exact(q.clone(), self.prec))
    }

    /// Integer power; negative exponents need an interval away from zero.
    pub fn powi(&self, e: i32) -> Option<Self> {
        if e < 0 {
            return self.powi(-e)?.recip();
        }
        let mut acc = Self::exact(BigRational::one(), self.prec);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        Some(acc)
    }

    /// `x^(1/q)`; needs a positive interval.
    pub fn root(&self, q: u32) -> Option<Self> {
        if !self.lo.is_positive() || q == 0 {
            return None;
        }
        Some(Self {
            lo: root_rounded(&self.lo, q, self.prec, false),
            hi: root_rounded(&self.hi, q, self.prec, true),
            prec: self.prec,
        })
    }

    /// `x^(p/q)` for a positive interval.
    pub fn powq(&self, p: i32, q: u32) -> Option<Self> {
        if p >= 0 {
            self.powi(p)?.root(q)
        } else {
            self.powi(-p)?.root(q)?.recip()
        }
    }

    /// Three-valued `self <= other`.
    pub fn le(&self, other: &Self) -> Verdict {
        if self.hi <= other.lo {
            Verdict::Pass
        } else if self.lo > other.hi {
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        }
    }

    pub fn ge(&self, other: &Self) -> Verdict {
        other.le(self)
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = self.lo.to_f64().unwrap_or(f64::NAN);
        let hi = self.hi.to_f64().unwrap_or(f64::NAN);
        write!(f, "[{lo:.12e}, {hi:.12e}]")
    }
}

impl Serialize for Enclosure {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Enclosure", 3)?;
        st.serialize_field("lo", &self.lo.to_string())?;
        st.serialize_field("hi", &self.hi.to_string())?;
        st.serialize_field("approx", &self.midpoint_f64())?;
        st.end()
    }
}

/// Sum of the alternating series for `atan(1/x)`, bracketed by consecutive
/// partial sums.
fn atan_inv(x: u64, prec: u32) -> Enclosure {
    let x2 = big(x * x);
    let tol = pow2(-i64::from(prec) - 8);
    let mut power = big(x);
    let mut sum = BigRational::zero();
    let mut k = 0u64;
    loop {
        let term = (big(2 * k + 1) * &power).recip();
        let next = if k.is_multiple_of(2) {
            &sum + &term
        } else {
            &sum - &term
        };
        if term < tol {
            let (lo, hi) = if next < sum { (next, sum) } else { (sum, next) };
            return Enclosure::rounded(lo, hi, prec);
        }
        sum = next;
        power *= &x2;
        k += 1;
    }
}

/// `pi = 16 atan(1/5) - 4 atan(1/239)`.
pub fn pi(prec: u32) -> Enclosure {
    atan_inv(5, prec)
        .scale(&big(16))
        .sub(&atan_inv(239, prec).scale(&big(4)))
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |a, b| a * b)
}

fn double_factorial(n: u64) -> BigUint {
    (1..=n).rev().step_by(2).fold(BigUint::one(), |a, b| a * b)
}

fn uint(x: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from_biguint(Sign::Plus, x))
}

/// `Gamma(n/2)` for `n >= 1`.
pub fn gamma_half(n: u64, prec: u32) -> Enclosure {
    assert!(n >= 1);
    if n.is_multiple_of(2) {
        Enclosure::exact(uint(factorial(n / 2 - 1)), prec)
    } else {
        let df = if n >= 2 {
            double_factorial(n - 2)
        } else {
            BigUint::one()
        };
        pi(prec)
            .root(2)
            .unwrap()
            .scale(&(uint(df) * pow2(-((n as i64 - 1) / 2))))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn and(self, o: Verdict) -> Verdict {
        match (self, o) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::Pass,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// One certified comparison `lhs <= rhs`.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub n: usize,
    pub name: &'static str,
    pub lhs: Enclosure,
    pub rhs: Enclosure,
    pub verdict: Verdict,
}

fn check_le(n: usize, name: &'static str, lhs: Enclosure, rhs: Enclosure) -> Check {
    let verdict = lhs.le(&rhs);
    Check {
        n,
        name,
        lhs,
        rhs,
        verdict,
    }
}

fn ser_big<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Clone, Debug, Serialize)]
pub struct AndrewsReport {
    pub n: usize,
    pub precision: u32,
    pub xi: Enclosure,
    pub c1: Enclosure,
    pub kappa_prime: Enclosure,
    pub gamma: Enclosure,
    pub kappa: Enclosure,
    /// `kappa^{-(n-1)/(n+1)}`
    pub alpha_required: Enclosure,
    /// `n^{5/2}`
    pub phi: Enclosure,
    #[serde(serialize_with = "ser_big")]
    pub beta_n: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub beta_n_minus_1: BigUint,
    pub checks: Vec<Check>,
}

impl AndrewsReport {
    pub fn verdict(&self) -> Verdict {
        self.checks
            .iter()
            .fold(Verdict::Pass, |v, c| v.and(c.verdict))
    }
}

/// `(3n)^{5n}`
pub fn beta(n: u64) -> BigUint {
    num_traits::pow(BigUint::from(3 * n), 5 * n as usize)
}

/// Evaluates the constants of Andrews' bound for dimension `n` and checks
/// the estimates leading to `alpha(n) <= (3n)^{4n}`.
pub fn andrews_constants(n: usize, prec: u32) -> AndrewsReport {
    assert!(n >= 2, "dimension at least two");
    let prec = prec.max(MIN_PRECISION);
    let nu = n as u64;
    let ni = n as i32;
    let nq = n as u32;
    let int = |x: BigUint| Enclosure::exact(uint(x), prec);
    let num = |x: u64| Enclosure::from_int(x, prec);
    let pow_u = |b: u64, e: u64| int(num_traits::pow(BigUint::from(b), e as usize));
    let fact = |k: u64| int(factorial(k));

    // xi = (n-1)^{2n} (n! (n-1)! / n^{2n})^{1/(n-1)}
    let xi = pow_u(nu - 1, 2 * nu).mul(
        &fact(nu)
            .mul(&fact(nu - 1))
            .div(&pow_u(nu, 2 * nu))
            .unwrap()
            .root(nq - 1)
            .unwrap(),
    );

    // c1 = (1/n!) sqrt(n+1) ((n-2)!/sqrt(n))^{n/(n-1)}
    let sqrt_n = num(nu).root(2).unwrap();
    let c1 = num(nu + 1)
        .root(2)
        .unwrap()
        .mul(&fact(nu - 2).div(&sqrt_n).unwrap().powq(ni, nq - 1).unwrap())
        .div(&fact(nu))
        .unwrap();

    // kappa' = (n!)^{-(n-1)/n} xi^{-(n-1)/n} (2 pi^{n/2} / Gamma(n/2))^{-1/n}
    let pi_half_n = pi(prec).root(2).unwrap().powi(ni).unwrap();
    let surface = pi_half_n.scale(&big(2)).div(&gamma_half(nu, prec)).unwrap();
    let kappa_prime = fact(nu)
        .mul(&xi)
        .powq(-(ni - 1), nq)
        .unwrap()
        .mul(&surface.powq(-1, nq).unwrap());

    let gamma = c1.div(&pow_u(nu, nu)).unwrap();
    // kappa = 1/2 3^{-n} gamma kappa'^{n/(n-1)}
    let kappa = gamma
        .mul(&kappa_prime.powq(ni, nq - 1).unwrap())
        .div(&pow_u(3, nu).scale(&big(2)))
        .unwrap();
    let alpha_required = kappa.powq(-(ni - 1), nq + 1).unwrap();
    let phi = num(nu).powq(5, 2).unwrap();

    let n3n = pow_u(nu, 3 * nu);
    let mut checks = vec![
        check_le(n, "xi <= n^{2n}", xi.clone(), pow_u(nu, 2 * nu)),
        check_le(
            n,
            "1/(8 n! xi) <= kappa'",
            fact(nu).mul(&xi).scale(&big(8)).recip().unwrap(),
            kappa_prime.clone(),
        ),
        check_le(
            n,
            "1/(8 n^{3n}) <= 1/(8 n! xi)",
            n3n.scale(&big(8)).recip().unwrap(),
            fact(nu).mul(&xi).scale(&big(8)).recip().unwrap(),
        ),
        check_le(
            n,
            "1/n^2 <= c1",
            Enclosure::ratio(1, (nu * nu) as i64, prec),
            c1.clone(),
        ),
    ];
    let chain = pow_u(3 * nu, nu).mul(&n3n).scale(&big(16 * nu * nu));
    checks.push(check_le(
        n,
        "alpha_required <= 2 (3n)^n n^2 8 n^{3n}",
        alpha_required.clone(),
        chain.clone(),
    ));
    checks.push(check_le(
        n,
        "2 (3n)^n n^2 8 n^{3n} <= (3n)^{4n}",
        chain,
        pow_u(3 * nu, 4 * nu),
    ));

    AndrewsReport {
        n,
        precision: prec,
        xi,
        c1,
        kappa_prime,
        gamma,
        kappa,
        alpha_required,
        phi,
        beta_n: beta(nu),
        beta_n_minus_1: beta(nu - 1),
        checks,
    }
}

/// The three links of
/// `(2 phi(n)+1)(beta(n-1)+2^{n-1}) <= 3 n^{5/2} 2 beta(n-1) <= 6 n^3 (3n)^{5n-5} <= (3n)^{5n}`.
pub fn upper_chain_checks(n: usize, prec: u32) -> Vec<Check> {
    assert!(n >= 2, "dimension at least two");
    let prec = prec.max(MIN_PRECISION);
    let nu = n as u64;
    let int = |x: BigUint| Enclosure::exact(uint(x), prec);
    let phi = Enclosure::from_int(nu, prec).powq(5, 2).unwrap();
    let b1 = int(beta(nu - 1));
    let left = phi
        .scale(&big(2))
        .add(&Enclosure::from_int(1, prec))
        .mul(&b1.add(&int(BigUint::one() << (n - 1))));
    let mid = phi.scale(&big(6)).mul(&b1);
    let right = int(num_traits::pow(BigUint::from(3 * nu), 5 * n - 5) * 6u32 * nu.pow(3));
    vec![
        check_le(
            n,
            "(2 phi+1)(beta(n-1)+2^{n-1}) <= 3 n^{5/2} 2 beta(n-1)",
            left,
            mid.clone(),
        ),
        check_le(
            n,
            "3 n^{5/2} 2 beta(n-1) <= 6 n^3 (3n)^{5n-5}",
            mid,
            right.clone(),
        ),
        check_le(n, "6 n^3 (3n)^{5n-5} <= (3n)^{5n}", right, int(beta(nu))),
    ]
}

/// Results for a range of dimensions; `precision` is the highest used.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub precision: u32,
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn verdict(&self) -> Verdict {
        self.checks
            .iter()
            .fold(Verdict::Pass, |v, c| v.and(c.verdict))
    }

    pub fn inconclusive(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.verdict == Verdict::Inconclusive)
            .count()
    }
}

/// Reruns `f` with doubled precision while any check is inconclusive.
fn refine(n: usize, prec: u32, f: impl Fn(usize, u32) -> Vec<Check>) -> (u32, Vec<Check>) {
    let mut p = prec.max(MIN_PRECISION);
    loop {
        let checks = f(n, p);
        let open = checks.iter().any(|c| c.verdict == Verdict::Inconclusive);
        if !open || p >= MAX_PRECISION {
            return (p, checks);
        }
        p = (p * 2).min(MAX_PRECISION);
    }
}

fn over_range(
    ns: impl IntoIterator<Item = usize>,
    prec: u32,
    f: impl Fn(usize, u32) -> Vec<Check> + Sync,
) -> CheckReport {
    let ns: Vec<usize> = ns.into_iter().collect();
    let parts: Vec<(u32, Vec<Check>)> = ns.par_iter().map(|&n| refine(n, prec, &f)).collect();
    CheckReport {
        precision: parts.iter().map(|p| p.0).max().unwrap_or(prec),
        checks: parts.into_iter().flat_map(|p| p.1).collect(),
    }
}

/// The estimates bounding Andrews' constant, for every `n` in `ns` (each
/// at least two).
pub fn verify_andrews_estimates(ns: impl IntoIterator<Item = usize>, prec: u32) -> CheckReport {
    over_range(ns, prec, |n, p| andrews_constants(n, p).checks)
}

/// The upper-bound constant chain, for every `n` in `ns` (each at least two).
pub fn verify_upper_chain(ns: impl IntoIterator<Item = usize>, prec: u32) -> CheckReport {
    over_range(ns, prec, upper_chain_checks)
}

/// Andrews' bound in the plane, `vert(P)^3 <= (6^8)^3 area(P)`, over a census.
#[derive(Clone, Debug, Serialize)]
pub struct EmpiricalReport {
    pub polygons: usize,
    pub violations: Vec<CanonicalPolygon>,
    /// Largest `vert^3 / area` seen, as a float for display.
    pub max_ratio: f64,
}

pub fn andrews_bound_holds(p: &CanonicalPolygon) -> bool {
    let v = BigUint::from(p.vertex_count());
    let lhs = num_traits::pow(v, 3) * 2u32;
    let rhs =
        num_traits::pow(BigUint::from(6u32), 24) * BigUint::from(p.twice_area().unsigned_abs());
    lhs <= rhs
}

pub fn andrews_empirical(census: &PolygonCensus) -> EmpiricalReport {
    let mut polygons = 0;
    let mut violations = Vec::new();
    let mut max_ratio = 0f64;
    for p in census.iter() {
        polygons += 1;
        if !andrews_bound_holds(p) {
            violations.push(p.clone());
        }
        let r = 2.0 * (p.vertex_count() as f64).powi(3) / p.twice_area() as f64;
        max_ratio = max_ratio.max(r);
    }
    EmpiricalReport {
        polygons,
        violations,
        max_ratio,
    }
}

/// An inclusive range of dimensions written `A..B`, `A..=B` or `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DimRange {
    pub start: usize,
    pub end: usize,
}

/// Dimensions beyond this are rejected; `beta(n)` has about `25 n log n`
/// bits.
pub const MAX_RANGE_DIM: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DimRangeError {
    #[error("expected A..B, A..=B or A, got {0:?}")]
    Syntax(String),
    #[error("dimensions must satisfy 2 <= A <= B <= {MAX_RANGE_DIM}, got {0}..{1}")]
    Bounds(usize, usize),
}

impl std::str::FromStr for DimRange {
    type Err = DimRangeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let syntax = || DimRangeError::Syntax(s.to_string());
        let num = |t: &str| -> Result<usize, DimRangeError> {
            if t.is_empty() || t.len() > 6 || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(syntax());
            }
            t.parse().map_err(|_| syntax())
        };
        let (a, b) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let a = num(s)?;
                (a, a)
            }
        };
        if a < 2 || a > b || b > MAX_RANGE_DIM {
            return Err(DimRangeError::Bounds(a, b));
        }
        Ok(Self { start: a, end: b })
    }
}

impl fmt::Display for DimRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

impl DimRange {
    pub fn iter(&self) -> std::ops::RangeInclusive<usize> {
        self.start..=self.end
    }
}
