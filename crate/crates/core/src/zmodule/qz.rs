use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// An element `a/b` of Q/Z in lowest terms with `0 ≤ a < b`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QmodZ {
    num: u64,
    den: u64,
}

impl QmodZ {
    pub const ZERO: QmodZ = QmodZ { num: 0, den: 1 };

    pub fn new(num: i128, den: u64) -> QmodZ {
        assert!(den > 0, "zero denominator");
        let d = den as i128;
        let a = num.rem_euclid(d);
        let g = a.gcd(&d);
        QmodZ { num: (a / g) as u64, den: (d / g) as u64 }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Additive order in Q/Z.
    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn times(&self, k: i128) -> QmodZ {
        QmodZ::new(self.num as i128 * k, self.den)
    }
}

impl Default for QmodZ {
    fn default() -> Self {
        QmodZ::ZERO
    }
}

impl Add for QmodZ {
    type Output = QmodZ;
    fn add(self, rhs: QmodZ) -> QmodZ {
        let l = self.den.lcm(&rhs.den);
        let a = self.num as i128 * (l / self.den) as i128 + rhs.num as i128 * (l / rhs.den) as i128;
        QmodZ::new(a, l)
    }
}

impl AddAssign for QmodZ {
    fn add_assign(&mut self, rhs: QmodZ) {
        *self = *self + rhs;
    }
}

impl Neg for QmodZ {
    type Output = QmodZ;
    fn neg(self) -> QmodZ {
        QmodZ::new(-(self.num as i128), self.den)
    }
}

impl Sub for QmodZ {
    type Output = QmodZ;
    fn sub(self, rhs: QmodZ) -> QmodZ {
        self + (-rhs)
    }
}

impl std::iter::Sum for QmodZ {
    fn sum<I: Iterator<Item = QmodZ>>(iter: I) -> QmodZ {
        iter.fold(QmodZ::ZERO, Add::add)
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for QmodZ {
    type Err = Error;

    /// Accepts `"a/b"` (any integers, b > 0) or a bare integer.
    fn from_str(s: &str) -> Result<QmodZ, Error> {
        let bad = || Error::InvalidFraction(s.to_string());
        let t = s.trim();
        match t.split_once('/') {
            Some((a, b)) => {
                let a: i128 = a.trim().parse().map_err(|_| bad())?;
                let b: u64 = b.trim().parse().map_err(|_| bad())?;
                if b == 0 {
                    return Err(bad());
                }
                Ok(QmodZ::new(a, b))
            }
            None => {
                let a: i128 = t.parse().map_err(|_| bad())?;
                Ok(QmodZ::new(a, 1))
            }
        }
    }
}

impl Serialize for QmodZ {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for QmodZ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<QmodZ, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_form() {
        assert_eq!(QmodZ::new(3, 6), QmodZ::new(1, 2));
        assert_eq!(QmodZ::new(-1, 4).to_string(), "3/4");
        assert_eq!(QmodZ::new(5, 5), QmodZ::ZERO);
        assert_eq!("2/4".parse::<QmodZ>().unwrap(), QmodZ::new(1, 2));
        assert!("1/0".parse::<QmodZ>().is_err());
        assert!("x".parse::<QmodZ>().is_err());
    }

    #[test]
    fn n_times_one_over_n_vanishes() {
        for n in 1..=1000u64 {
            assert!(QmodZ::new(1, n).times(n as i128).is_zero());
            let s: QmodZ = std::iter::repeat_n(QmodZ::new(1, n), n as usize).sum();
            assert!(s.is_zero(), "n = {n}");
        }
    }

    proptest! {
        #[test]
        fn addition_is_associative(a in -50i128..50, b in 1u64..60, c in -50i128..50,
                                   d in 1u64..60, e in -50i128..50, f in 1u64..60) {
            let (x, y, z) = (QmodZ::new(a, b), QmodZ::new(c, d), QmodZ::new(e, f));
            prop_assert_eq!((x + y) + z, x + (y + z));
            prop_assert_eq!(x - x, QmodZ::ZERO);
        }
    }
}
