//! Weight regions, root numbers and the sign bookkeeping built on them.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegionError {
    #[error("weights ({0}, {1}, {2}) have odd sum")]
    ParityError(i64, i64, i64),
    #[error("weights must be at least 1")]
    BadWeight,
    #[error("sign must be +1 or -1, got {0}")]
    BadSign(i32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Region3 {
    Bal,
    F,
    G,
    H,
}

impl Region3 {
    pub fn label(self) -> &'static str {
        match self {
            Region3::Bal => "bal",
            Region3::F => "f",
            Region3::G => "g",
            Region3::H => "h",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "bal" => Some(Region3::Bal),
            "f" => Some(Region3::F),
            "g" => Some(Region3::G),
            "h" => Some(Region3::H),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Region2 {
    Ad,
    F,
}

impl Region2 {
    pub fn label(self) -> &'static str {
        match self {
            Region2::Ad => "ad",
            Region2::F => "f",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ad" => Some(Region2::Ad),
            "f" => Some(Region2::F),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub region: Region3,
    pub central_point: i64,
    /// Set when two weights tie for the maximum on the boundary.
    pub tie: bool,
}

fn check_sign(s: i32) -> Result<(), RegionError> {
    if s == 1 || s == -1 {
        Ok(())
    } else {
        Err(RegionError::BadSign(s))
    }
}

/// Balanced when `k + l + m > 2 max`, otherwise dominated by the largest
/// weight; the boundary belongs to the dominant region.
pub fn classify3(k: i64, l: i64, m: i64) -> Result<Classification, RegionError> {
    if k < 1 || l < 1 || m < 1 {
        return Err(RegionError::BadWeight);
    }
    let sum = k + l + m;
    if sum % 2 != 0 {
        return Err(RegionError::ParityError(k, l, m));
    }
    let central_point = sum / 2 - 1;
    let max = k.max(l).max(m);
    if sum > 2 * max {
        return Ok(Classification { region: Region3::Bal, central_point, tie: false });
    }
    let hits: Vec<Region3> = [(k, Region3::F), (l, Region3::G), (m, Region3::H)]
        .iter()
        .filter(|(w, _)| *w == max)
        .map(|&(_, r)| r)
        .collect();
    Ok(Classification { region: hits[0], central_point, tie: hits.len() > 1 })
}

/// `ad` when `2l > k`, `f` when `2l <= k`.
pub fn classify2(k: i64, l: i64) -> Region2 {
    if 2 * l > k {
        Region2::Ad
    } else {
        Region2::F
    }
}

/// Sign at infinity: `-1` on the balanced region.
pub fn archimedean_sign(region: Region3) -> i32 {
    if region == Region3::Bal {
        -1
    } else {
        1
    }
}

pub fn global_sign(region: Region3, finite_prod: i32) -> Result<i32, RegionError> {
    check_sign(finite_prod)?;
    Ok(archimedean_sign(region) * finite_prod)
}

/// The `p`-adic L-functions forced to vanish identically by the sign.
pub fn forced_vanishing(finite_prod: i32) -> Result<Vec<Region3>, RegionError> {
    check_sign(finite_prod)?;
    Ok(if finite_prod == 1 { vec![Region3::Bal] } else { vec![Region3::F, Region3::G, Region3::H] })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SelfDualSigns {
    pub triple: i32,
    pub adjoint: i32,
}

/// Signs of `f ⊗ g ⊗ g^c` and `f ⊗ ad^0 g` given `ε(f)`.
pub fn selfdual_table(region: Region2, eps_f: i32) -> Result<SelfDualSigns, RegionError> {
    check_sign(eps_f)?;
    Ok(match region {
        Region2::Ad => SelfDualSigns { triple: -1, adjoint: -eps_f },
        Region2::F => SelfDualSigns { triple: 1, adjoint: eps_f },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PanchishkinDefect {
    pub defect: u64,
    pub weakly_panchishkin: bool,
}

pub fn panchishkin_defect(rank_plus: u64, rank_fplus: u64) -> PanchishkinDefect {
    let defect = rank_plus.abs_diff(rank_fplus);
    PanchishkinDefect { defect, weakly_panchishkin: defect == 0 }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(classify3(2, 3, 3).unwrap().region, Region3::Bal);
        assert_eq!(classify3(6, 2, 2).unwrap().region, Region3::F);
        let c = classify3(2, 1, 1).unwrap();
        assert_eq!((c.region, c.central_point), (Region3::F, 1));
        assert!(classify3(2, 2, 1).is_err());
        assert_eq!(classify2(6, 2), Region2::F);
        assert_eq!(classify2(2, 2), Region2::Ad);
        assert_eq!(classify2(4, 2), Region2::F);
    }

    #[test]
    fn boundary_ties_need_a_zero_weight() {
        for k in 1..=20 {
            for l in 1..=20 {
                for m in 1..=20 {
                    if let Ok(c) = classify3(k, l, m) {
                        assert!(!c.tie);
                    }
                }
            }
        }
    }
}
