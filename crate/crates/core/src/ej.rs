//! Exact arithmetic on Eisenstein-Jacobi integers `x + y·ρ`, where
//! `ρ = (1 + i√3)/2` and therefore `ρ² = ρ - 1`.
//!
//! The six units `±1, ±ρ, ±ρ²` are the link directions of every EJ network.
//! They are exactly the powers `ρ^0 .. ρ^5`, which is how [`Unit`] indexes
//! them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element `x + y·ρ` of `Z[ρ]`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
pub struct EjInt {
    pub x: i64,
    pub y: i64,
}

impl EjInt {
    pub const ZERO: EjInt = EjInt { x: 0, y: 0 };
    pub const ONE: EjInt = EjInt { x: 1, y: 0 };
    pub const RHO: EjInt = EjInt { x: 0, y: 1 };

    pub const fn new(x: i64, y: i64) -> Self {
        EjInt { x, y }
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn checked_add(self, other: EjInt) -> Result<EjInt> {
        Ok(EjInt {
            x: self.x.checked_add(other.x).ok_or(Error::Overflow)?,
            y: self.y.checked_add(other.y).ok_or(Error::Overflow)?,
        })
    }

    pub fn checked_sub(self, other: EjInt) -> Result<EjInt> {
        Ok(EjInt {
            x: self.x.checked_sub(other.x).ok_or(Error::Overflow)?,
            y: self.y.checked_sub(other.y).ok_or(Error::Overflow)?,
        })
    }

    /// `(x1 + y1ρ)(x2 + y2ρ) = (x1x2 - y1y2) + (x1y2 + y1x2 + y1y2)ρ`
    pub fn checked_mul(self, other: EjInt) -> Result<EjInt> {
        let x = i128::from(self.x) * i128::from(other.x) - i128::from(self.y) * i128::from(other.y);
        let y = i128::from(self.x) * i128::from(other.y)
            + i128::from(self.y) * i128::from(other.x)
            + i128::from(self.y) * i128::from(other.y);
        Ok(EjInt {
            x: i64::try_from(x).map_err(|_| Error::Overflow)?,
            y: i64::try_from(y).map_err(|_| Error::Overflow)?,
        })
    }

    /// Field norm `x² + xy + y²`; zero only for zero.
    pub fn norm(self) -> Result<u64> {
        let (x, y) = (i128::from(self.x), i128::from(self.y));
        let n = (x * x)
            .checked_add(x * y)
            .and_then(|v| v.checked_add(y * y))
            .ok_or(Error::Overflow)?;
        u64::try_from(n).map_err(|_| Error::Overflow)
    }

    /// Complex conjugate. `conj(ρ) = 1 - ρ`.
    pub fn conj(self) -> EjInt {
        EjInt {
            x: self.x + self.y,
            y: -self.y,
        }
    }

    /// Hop length of the shortest path from 0 using the six unit steps in
    /// the infinite hexagonal lattice, i.e. `min |x'| + |y'| + |z'|` over all
    /// ways of writing `self = x' + y'ρ + z'ρ²`.
    pub fn hex_norm(self) -> u64 {
        let (x, y) = (self.x.unsigned_abs(), self.y.unsigned_abs());
        if (self.x >= 0) == (self.y >= 0) || self.x == 0 || self.y == 0 {
            x + y
        } else {
            x.max(y)
        }
    }
}

impl Add for EjInt {
    type Output = EjInt;
    fn add(self, rhs: EjInt) -> EjInt {
        self.checked_add(rhs)
            .expect("EJ integer addition overflowed")
    }
}

impl Sub for EjInt {
    type Output = EjInt;
    fn sub(self, rhs: EjInt) -> EjInt {
        self.checked_sub(rhs)
            .expect("EJ integer subtraction overflowed")
    }
}

impl Neg for EjInt {
    type Output = EjInt;
    fn neg(self) -> EjInt {
        EjInt::ZERO - self
    }
}

impl Mul for EjInt {
    type Output = EjInt;
    fn mul(self, rhs: EjInt) -> EjInt {
        self.checked_mul(rhs)
            .expect("EJ integer multiplication overflowed")
    }
}

impl From<Unit> for EjInt {
    fn from(u: Unit) -> EjInt {
        u.value()
    }
}

impl fmt::Display for EjInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rho = |f: &mut fmt::Formatter<'_>, y: i64, lead: bool| match (y, lead) {
            (1, true) => write!(f, "rho"),
            (-1, _) => write!(f, "-rho"),
            (1, false) => write!(f, "+rho"),
            (y, false) if y > 0 => write!(f, "+{y}rho"),
            (y, _) => write!(f, "{y}rho"),
        };
        match (self.x, self.y) {
            (x, 0) => write!(f, "{x}"),
            (0, y) => rho(f, y, true),
            (x, y) => {
                write!(f, "{x}")?;
                rho(f, y, false)
            }
        }
    }
}

/// One of the six units of `Z[ρ]`, stored as the exponent `k` of `ρ^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(u8)]
pub enum Unit {
    One = 0,
    Rho = 1,
    RhoSq = 2,
    NegOne = 3,
    NegRho = 4,
    NegRhoSq = 5,
}

impl Unit {
    /// `ρ^0, ρ^1, .., ρ^5` in order.
    pub const ALL: [Unit; 6] = [
        Unit::One,
        Unit::Rho,
        Unit::RhoSq,
        Unit::NegOne,
        Unit::NegRho,
        Unit::NegRhoSq,
    ];

    pub fn pow(k: i64) -> Unit {
        Unit::ALL[k.rem_euclid(6) as usize]
    }

    pub fn exponent(self) -> u8 {
        self as u8
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn negate(self) -> Unit {
        Unit::pow(i64::from(self.exponent()) + 3)
    }

    pub fn value(self) -> EjInt {
        match self {
            Unit::One => EjInt::new(1, 0),
            Unit::Rho => EjInt::new(0, 1),
            Unit::RhoSq => EjInt::new(-1, 1),
            Unit::NegOne => EjInt::new(-1, 0),
            Unit::NegRho => EjInt::new(0, -1),
            Unit::NegRhoSq => EjInt::new(1, -1),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Unit::One => "+1",
            Unit::Rho => "+rho",
            Unit::RhoSq => "+rho^2",
            Unit::NegOne => "-1",
            Unit::NegRho => "-rho",
            Unit::NegRhoSq => "-rho^2",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}
