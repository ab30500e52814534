//! Mode indices: finite `(l, m)` pairs and the three symbolic families.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{MultiPoly, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// (l, l-1), l >= 4
    LMinus,
    /// (l, l), l >= 4
    Diag,
    /// (l, l+1), l >= 3
    LPlus,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::LMinus, Family::Diag, Family::LPlus];

    pub fn offset(self) -> i64 {
        match self {
            Family::LMinus => -1,
            Family::Diag => 0,
            Family::LPlus => 1,
        }
    }

    /// Smallest l covered by the family; smaller l are finite cases.
    pub fn threshold(self) -> u32 {
        match self {
            Family::LMinus | Family::Diag => 4,
            Family::LPlus => 3,
        }
    }

    /// l-shift used by the a_n / b_n bound certificates.
    pub fn bound_l_shift(self) -> u32 {
        self.threshold()
    }

    /// l-shift used by the e_{n0} certificate.
    pub fn esterror_l_shift(self) -> u32 {
        match self {
            Family::LMinus => 0,
            Family::Diag => 4,
            Family::LPlus => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModeCase {
    Finite { l: u32, m: u32 },
    Family(Family),
}

impl ModeCase {
    pub fn finite(l: i64, m: i64) -> Result<Self> {
        let valid = l >= 0 && m >= 0 && (l - m).abs() <= 1 && !(l == 0 && m != 1);
        if !valid {
            return Err(Error::InvalidIndex(l, m));
        }
        Ok(ModeCase::Finite { l: l as u32, m: m as u32 })
    }

    pub fn l_expr(&self) -> MultiPoly {
        match self {
            ModeCase::Finite { l, .. } => MultiPoly::int(*l as i64),
            ModeCase::Family(_) => MultiPoly::var(Var::L),
        }
    }

    pub fn m_expr(&self) -> MultiPoly {
        match self {
            ModeCase::Finite { m, .. } => MultiPoly::int(*m as i64),
            ModeCase::Family(f) => &MultiPoly::var(Var::L) + &MultiPoly::int(f.offset()),
        }
    }

    pub fn is_family(&self) -> bool {
        matches!(self, ModeCase::Family(_))
    }

    pub fn family(&self) -> Option<Family> {
        match self {
            ModeCase::Family(f) => Some(*f),
            ModeCase::Finite { .. } => None,
        }
    }

    pub fn lm(&self) -> Option<(u32, u32)> {
        match self {
            ModeCase::Finite { l, m } => Some((*l, *m)),
            ModeCase::Family(_) => None,
        }
    }

    /// File stem of the supplementary CSV: "11", "l1", ...
    pub fn stem(&self) -> String {
        match self {
            ModeCase::Finite { l, m } => format!("{l}{m}"),
            ModeCase::Family(Family::LMinus) => "l1".into(),
            ModeCase::Family(Family::Diag) => "l2".into(),
            ModeCase::Family(Family::LPlus) => "l3".into(),
        }
    }

    pub fn label(&self) -> String {
        self.to_string()
    }

    pub fn default_finite() -> Vec<ModeCase> {
        [(0, 1), (1, 0), (1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2), (3, 3)]
            .into_iter()
            .map(|(l, m)| ModeCase::Finite { l, m })
            .collect()
    }

    pub fn default_families() -> Vec<ModeCase> {
        Family::ALL.into_iter().map(ModeCase::Family).collect()
    }

    /// The case responsible for a concrete `(l, m)`.
    pub fn covering(l: i64, m: i64) -> Result<ModeCase> {
        let c = ModeCase::finite(l, m)?;
        if ModeCase::default_finite().contains(&c) {
            return Ok(c);
        }
        let f = match m - l {
            -1 => Family::LMinus,
            0 => Family::Diag,
            _ => Family::LPlus,
        };
        Ok(ModeCase::Family(f))
    }
}

impl fmt::Display for ModeCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModeCase::Finite { l, m } => write!(f, "({l},{m})"),
            ModeCase::Family(Family::LMinus) => f.write_str("(l>=4,l-1)"),
            ModeCase::Family(Family::Diag) => f.write_str("(l>=4,l)"),
            ModeCase::Family(Family::LPlus) => f.write_str("(l>=3,l+1)"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validity() {
        assert!(ModeCase::finite(0, 1).is_ok());
        assert!(ModeCase::finite(0, 0).is_err());
        assert!(ModeCase::finite(2, 4).is_err());
        assert!(ModeCase::finite(1, 0).is_ok());
    }

    #[test]
    fn coverage_tiles_without_overlap() {
        for l in 0..=12i64 {
            for m in (l - 1).max(0)..=l + 1 {
                if l == 0 && m != 1 {
                    continue;
                }
                let c = ModeCase::covering(l, m).unwrap();
                if let ModeCase::Family(f) = c {
                    assert!(l as u32 >= f.threshold(), "({l},{m})");
                    assert_eq!(m - l, f.offset());
                } else {
                    assert!(!ModeCase::default_families().iter().any(|fam| {
                        let f = fam.family().unwrap();
                        l as u32 >= f.threshold() && m - l == f.offset()
                    }));
                }
            }
        }
    }
}
