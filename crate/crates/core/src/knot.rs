use std::fmt;
use std::str::FromStr;

use crate::Error;

/// The three knots whose invariants are implemented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KnotId {
    /// Figure-eight knot.
    FourOne,
    FiveTwo,
    SixOne,
}

impl KnotId {
    pub const ALL: [KnotId; 3] = [KnotId::FourOne, KnotId::FiveTwo, KnotId::SixOne];

    /// Rolfsen table name, as used on the command line and in CSV files.
    pub fn name(self) -> &'static str {
        match self {
            KnotId::FourOne => "4_1",
            KnotId::FiveTwo => "5_2",
            KnotId::SixOne => "6_1",
        }
    }

    /// |Δ(−1)|, the value of |⟨L⟩| at N = 2.
    pub fn alexander_at_minus_one(self) -> u64 {
        match self {
            KnotId::FourOne => 5,
            KnotId::FiveTwo => 7,
            KnotId::SixOne => 9,
        }
    }

    /// Number of coordinates of the saddle-point potential.
    pub fn dimension(self) -> usize {
        match self {
            KnotId::FourOne => 1,
            KnotId::FiveTwo => 2,
            KnotId::SixOne => 3,
        }
    }
}

impl fmt::Display for KnotId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KnotId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "4_1" => Ok(KnotId::FourOne),
            "5_2" => Ok(KnotId::FiveTwo),
            "6_1" => Ok(KnotId::SixOne),
            other => Err(Error::Parse(format!(
                "unknown knot '{other}', expected one of 4_1, 5_2, 6_1"
            ))),
        }
    }
}
