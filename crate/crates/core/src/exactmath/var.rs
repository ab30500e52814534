use std::fmt;

use serde::{Deserialize, Serialize};

/// Number of polynomial variables.
pub const NVARS: usize = 9;

/// The fixed, ordered variable set. `X` stands for the growth rate and `T`
/// for t² on the imaginary axis; `Y1..Y3` are Cartesian coordinates used
/// only by the angular computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    N,
    L,
    X,
    T,
    Z,
    R,
    Y1,
    Y2,
    Y3,
}

impl Var {
    pub const ALL: [Var; NVARS] = [
        Var::N,
        Var::L,
        Var::X,
        Var::T,
        Var::Z,
        Var::R,
        Var::Y1,
        Var::Y2,
        Var::Y3,
    ];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::N => "n",
            Var::L => "l",
            Var::X => "x",
            Var::T => "T",
            Var::Z => "z",
            Var::R => "r",
            Var::Y1 => "y1",
            Var::Y2 => "y2",
            Var::Y3 => "y3",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Var::ALL.iter().copied().find(|v| v.name() == s)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
