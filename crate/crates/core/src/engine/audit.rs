use serde::Serialize;

use super::{EngineError, ExtInt, HellyProfile};

/// `H(k+1) = max c[0..=k] = max g[0..=k]` computed both ways, and the
/// Tverberg-type bound `H(k)(m-1)kn + k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivedRow {
    pub k: usize,
    pub helly_next_from_c: ExtInt,
    pub helly_next_from_g: ExtInt,
    pub m: u64,
    pub tverberg_value: Option<i128>,
}

fn tverberg(h: ExtInt, m: u64, k: usize, n: usize) -> Option<i128> {
    if k == 0 || m <= 1 {
        return Some(k as i128);
    }
    let h = i128::from(h.finite()?);
    Some(h * (i128::from(m) - 1) * k as i128 * n as i128 + k as i128)
}

pub fn derived_quantities(
    profile: &HellyProfile,
    m: u64,
    n: usize,
) -> Result<Vec<DerivedRow>, EngineError> {
    if profile.c.len() != profile.g.len() {
        return Err(EngineError::Inconsistent("c has not been computed".into()));
    }
    let mut rows = Vec::with_capacity(profile.g.len());
    for k in 0..profile.g.len() {
        let from_c = ExtInt::max_of(profile.c[..=k].iter().copied());
        let from_g = ExtInt::max_of(profile.g[..=k].iter().copied());
        if from_c != from_g {
            return Err(EngineError::Inconsistent(format!(
                "H({}) is {from_c} from c but {from_g} from g",
                k + 1
            )));
        }
        let h_k = ExtInt::max_of(profile.c[..k].iter().copied());
        rows.push(DerivedRow {
            k,
            helly_next_from_c: from_c,
            helly_next_from_g: from_g,
            m,
            tverberg_value: tverberg(h_k, m, k, n),
        });
    }
    Ok(rows)
}

/// One row of the bound audit. The two lattice bounds are only evaluated
/// when the site is treated as a surrogate for `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub k: usize,
    pub c_value: ExtInt,
    pub h_value: i64,
    /// `floor((k+1)/2) (h-2) + h`
    pub halving_bound: i128,
    /// `(k+1) h`
    pub linear_bound: i128,
    /// `ceil(2(k+1)/3) (2^n - 2) + 2`
    pub aliev_bound: Option<i128>,
    /// `(k+2)^n`
    pub bell_bound: Option<i128>,
    pub m: u64,
    pub tverberg_value: Option<i128>,
    pub halving_pass: bool,
    pub linear_pass: bool,
    pub aliev_pass: Option<bool>,
    pub aliev_equal: Option<bool>,
    pub bell_pass: Option<bool>,
}

impl BoundReport {
    pub fn all_pass(&self) -> bool {
        self.halving_pass
            && self.linear_pass
            && self.aliev_pass != Some(false)
            && self.bell_pass != Some(false)
    }
}

fn le(c: ExtInt, bound: i128) -> bool {
    c.finite().is_none_or(|v| i128::from(v) <= bound)
}

pub fn bound_audit(
    profile: &HellyProfile,
    n: usize,
    m: u64,
    lattice_surrogate: bool,
) -> Result<Vec<BoundReport>, EngineError> {
    let derived = derived_quantities(profile, m, n)?;
    let h = profile
        .helly_number()
        .finite()
        .ok_or_else(|| EngineError::Inconsistent("h(S) is not finite".into()))?;
    let n32 = u32::try_from(n).map_err(|_| EngineError::Inconsistent("dimension".into()))?;
    let mut out = Vec::with_capacity(profile.c.len());
    for (k, (&c, d)) in profile.c.iter().zip(derived).enumerate() {
        let k1 = k as i128 + 1;
        let halving_bound = (k1 / 2) * (i128::from(h) - 2) + i128::from(h);
        let linear_bound = k1 * i128::from(h);
        let (aliev_bound, bell_bound) = if lattice_surrogate {
            let a = ((2 * k1 + 2) / 3) * ((1i128 << n) - 2) + 2;
            let b = (k1 + 1).checked_pow(n32);
            (Some(a), b)
        } else {
            (None, None)
        };
        out.push(BoundReport {
            k,
            c_value: c,
            h_value: h,
            halving_bound,
            linear_bound,
            aliev_bound,
            bell_bound,
            m,
            tverberg_value: d.tverberg_value,
            halving_pass: le(c, halving_bound),
            linear_pass: le(c, linear_bound),
            aliev_pass: aliev_bound.map(|b| le(c, b)),
            aliev_equal: aliev_bound.map(|b| c.finite().map(i128::from) == Some(b)),
            bell_pass: bell_bound.map(|b| le(c, b)),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{c_from_g, g_profile};
    use crate::lattice::FiniteSite;
    use ExtInt::Fin;

    fn grid_profile() -> HellyProfile {
        c_from_g(&g_profile(&FiniteSite::grid(&[3, 3]).unwrap(), 5).unwrap())
    }

    #[test]
    fn helly_and_tverberg() {
        let rows = derived_quantities(&grid_profile(), 2, 2).unwrap();
        assert_eq!(rows[3].helly_next_from_c, Fin(6));
        assert_eq!(rows[3].tverberg_value, Some(39));
        let rows = derived_quantities(&grid_profile(), 1, 2).unwrap();
        assert!(rows.iter().all(|r| r.tverberg_value == Some(r.k as i128)));
    }

    #[test]
    fn lattice_table_values() {
        let g: Vec<ExtInt> = [4, 6, 6, 6, 8, 7, 8, 9, 8, 8, 10].map(Fin).to_vec();
        let p = HellyProfile {
            site: "z2".into(),
            dim: 2,
            k_max: 10,
            c: g.clone(),
            g,
            witnesses: vec![None; 11],
            site_cardinality: None,
        };
        let r = bound_audit(&p, 2, 2, true).unwrap();
        assert!(r.iter().all(BoundReport::all_pass));
        assert_eq!(r[10].halving_bound, 14);
        assert_eq!(r[2].aliev_bound, Some(6));
        assert_eq!(r[1].linear_bound, 8);
        for k in 0..=2 {
            assert_eq!(r[k].aliev_equal, Some(true));
        }
        assert_eq!(r[3].aliev_equal, Some(false));
    }

    #[test]
    fn violated_bound_is_reported() {
        let mut p = grid_profile();
        p.c[1] = Fin(100);
        p.g[1] = Fin(100);
        let r = bound_audit(&p, 2, 2, true).unwrap();
        assert!(!r[1].halving_pass);
        assert!(!r[1].all_pass());
    }
}
