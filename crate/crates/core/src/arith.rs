//! Exact integer helpers shared by the geometry and constant layers.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Largest `r` with `r^n <= value`, by binary search on big integers.
///
/// # Panics
/// Panics if `n == 0`.
pub fn nth_root_floor(value: &BigUint, n: u32) -> BigUint {
    assert!(n > 0, "zeroth root is undefined");
    if n == 1 || value.is_zero() {
        return value.clone();
    }
    // 2^(ceil(bits/n)) is an upper bound for the root.
    let bits = value.bits();
    let mut lo = BigUint::zero();
    let mut hi = BigUint::one() << (bits.div_ceil(u64::from(n)) as usize);
    while lo < hi {
        let mid: BigUint = (&lo + &hi + 1u32) >> 1;
        if num_traits::pow(mid.clone(), n as usize) <= *value {
            lo = mid;
        } else {
            hi = mid - 1u32;
        }
    }
    lo
}

/// `u64` convenience wrapper around [`nth_root_floor`].
pub fn nth_root_floor_u64(value: u64, n: u32) -> u64 {
    let r = nth_root_floor(&BigUint::from(value), n);
    u64::try_from(r).expect("root of a u64 fits in u64")
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn gcd_i128(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Rank of an integer matrix together with the pivot columns of its row
/// echelon form and the indices of rows that raised the rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankInfo {
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
    pub independent_rows: Vec<usize>,
}

/// Exact rank by incremental rational elimination.
pub fn rank_info(rows: &[Vec<i128>]) -> RankInfo {
    let mut basis: Vec<(usize, Vec<BigRational>)> = Vec::new();
    let mut independent_rows = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        let mut v: Vec<BigRational> = row
            .iter()
            .map(|&x| BigRational::from_integer(BigInt::from(x)))
            .collect();
        for (pc, b) in &basis {
            if !v[*pc].is_zero() {
                let f = v[*pc].clone() / b[*pc].clone();
                for (vi, bi) in v.iter_mut().zip(b.iter()) {
                    *vi -= &f * bi;
                }
            }
        }
        if let Some(pc) = v.iter().position(|x| !x.is_zero()) {
            basis.push((pc, v));
            independent_rows.push(idx);
        }
    }
    let mut pivot_cols: Vec<usize> = basis.iter().map(|(pc, _)| *pc).collect();
    pivot_cols.sort_unstable();
    RankInfo {
        rank: basis.len(),
        pivot_cols,
        independent_rows,
    }
}

/// Integer basis of the (right) null space of `rows`, each vector primitive.
pub fn integer_null_space(rows: &[Vec<i128>], ncols: usize) -> Vec<Vec<i128>> {
    // Reduced row echelon form over the rationals.
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::new();
    for &f in &free {
        let mut v = vec![BigRational::zero(); ncols];
        v[f] = BigRational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[row][f].clone();
        }
        let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        out.push(
            ints.iter()
                .map(|x| i128::try_from(x / &g).expect("null space entry fits in i128"))
                .collect(),
        );
    }
    out
}

/// Determinant by Bareiss fraction-free elimination with overflow checks.
pub fn det_i128(mut m: Vec<Vec<i128>>) -> Option<i128> {
    let n = m.len();
    if n == 0 {
        return Some(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return Some(0);
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i][j].checked_mul(m[k][k])?;
                let b = m[i][k].checked_mul(m[k][j])?;
                m[i][j] = a.checked_sub(b)? / prev;
            }
        }
        prev = m[k][k];
    }
    m[n - 1][n - 1].checked_mul(sign)
}

/// Returns 0 when every entry is zero; callers treat that as degenerate.
pub fn primitive_i128(v: &mut [i128]) -> i128 {
    let g = v.iter().fold(0i128, |acc, &x| gcd_i128(acc, x));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn roots_at_perfect_powers() {
        assert_eq!(nth_root_floor_u64(8, 3), 2);
        assert_eq!(nth_root_floor_u64(7, 3), 1);
        assert_eq!(nth_root_floor_u64(125, 3), 5);
        assert_eq!(nth_root_floor_u64(124, 3), 4);
        assert_eq!(nth_root_floor_u64(0, 5), 0);
        assert_eq!(nth_root_floor_u64(1, 5), 1);
    }

    #[test]
    fn ext_gcd_identity() {
        for (a, b) in [(3, 5), (-4, 6), (0, 7), (7, 0), (-3, -9)] {
            let (g, x, y) = ext_gcd(a, b);
            assert_eq!(a * x + b * y, g);
            assert_eq!(g, gcd_i64(a, b));
        }
    }

    #[test]
    fn rank_and_null_space() {
        let rows = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        let info = rank_info(&rows);
        assert_eq!(info.rank, 2);
        assert_eq!(info.independent_rows, vec![0, 2]);
        let ns = integer_null_space(&rows, 3);
        assert_eq!(ns.len(), 1);
        for r in &rows {
            let dot: i128 = r.iter().zip(&ns[0]).map(|(a, b)| a * b).sum();
            assert_eq!(dot, 0);
        }
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let m = vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]];
        assert_eq!(det_i128(m), Some(4));
        let m = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(det_i128(m), Some(-1));
        let m = vec![vec![0, 1, 2], vec![0, 3, 4], vec![0, 5, 6]];
        assert_eq!(det_i128(m), Some(0));
    }

    proptest! {
        #[test]
        fn binary_search_root_agrees_with_newton(v in 0u64..u64::MAX, n in 1u32..8) {
            let ours = nth_root_floor(&BigUint::from(v), n);
            let theirs = BigUint::from(v).nth_root(n);
            prop_assert_eq!(ours, theirs);
        }
    }
}
