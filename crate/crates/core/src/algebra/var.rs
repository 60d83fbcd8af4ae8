use std::fmt;

use serde::{Deserialize, Serialize};

/// Coordinate family: c, d or e.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    C,
    D,
    E,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::C, Family::D, Family::E];

    pub fn symbol(self) -> char {
        match self {
            Family::C => 'c',
            Family::D => 'd',
            Family::E => 'e',
        }
    }

    fn code(self) -> u32 {
        self as u32
    }

    fn from_code(code: u32) -> Family {
        match code {
            0 => Family::C,
            1 => Family::D,
            _ => Family::E,
        }
    }
}

const INDEX_BIAS: i64 = 1 << 27;

/// Indexed variable x_i packed as family-major key, so the derived order is (family, index).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(u32);

impl VarId {
    pub fn new(family: Family, index: i64) -> VarId {
        assert!(index.abs() < INDEX_BIAS, "variable index out of range");
        VarId((family.code() << 28) | (index + INDEX_BIAS) as u32)
    }

    pub fn c(index: i64) -> VarId {
        VarId::new(Family::C, index)
    }

    pub fn d(index: i64) -> VarId {
        VarId::new(Family::D, index)
    }

    pub fn e(index: i64) -> VarId {
        VarId::new(Family::E, index)
    }

    pub fn family(self) -> Family {
        Family::from_code(self.0 >> 28)
    }

    pub fn index(self) -> i64 {
        (self.0 & ((1 << 28) - 1)) as i64 - INDEX_BIAS
    }

    pub fn shifted(self, by: i64) -> VarId {
        VarId::new(self.family(), self.index() + by)
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.family().symbol(), self.index())
    }
}

impl fmt::Debug for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Inclusive interval [lo, hi] of live variable indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Window {
        Window { lo, hi }
    }

    /// A window with lo > hi holds no variables.
    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn contains(&self, i: i64) -> bool {
        self.lo <= i && i <= self.hi
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    pub fn extend_below(&self, by: i64) -> Window {
        Window::new(self.lo - by, self.hi)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}
