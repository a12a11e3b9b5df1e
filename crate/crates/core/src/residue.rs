//! Residue classes of `Z[ρ]` modulo a generator `α = a + bρ`.
//!
//! The nodes of `EJ_α` are the `N(α) = a² + ab + b²` classes. Each class is
//! represented by its element of least hexagonal weight, ties broken by the
//! smaller `(x, y)`. With that choice the representatives form the hexagonal
//! "basic grid" centred on 0, and the weight of a representative is its hop
//! distance from node 0.

use std::collections::BTreeSet;

use num_rational::Ratio;
use serde::Serialize;

use crate::ej::EjInt;
use crate::error::{Error, Result};

/// Smallest accepted norm. Below 7 the six units do not reach six distinct
/// residues.
pub const MIN_NORM: u64 = 7;

/// Largest accepted norm.
pub const MAX_NORM: u64 = 1 << 31;

/// A validated generator `α = a + bρ` with `0 <= a <= b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Modulus {
    a: i64,
    b: i64,
    norm: u64,
}

/// Canonical representative of a residue class. Only [`Modulus::reduce`]
/// creates these.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Residue(EjInt);

impl Residue {
    pub fn value(self) -> EjInt {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0.is_zero()
    }

    /// Hop distance from node 0.
    pub fn weight(self) -> u64 {
        self.0.hex_norm()
    }
}

impl std::fmt::Display for Residue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl Modulus {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        let invalid = |reason| Error::InvalidModulus { a, b, reason };
        if a < 0 || b < a {
            return Err(invalid("need 0 <= a <= b"));
        }
        if a == 0 && b == 0 {
            return Err(invalid("generator must be non-zero"));
        }
        let norm = EjInt::new(a, b)
            .norm()
            .map_err(|_| invalid("norm exceeds 2^31"))?;
        if norm < MIN_NORM {
            return Err(invalid("norm below 7 does not give a 6-regular network"));
        }
        if norm > MAX_NORM {
            return Err(invalid("norm exceeds 2^31"));
        }
        Ok(Modulus { a, b, norm })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn generator(&self) -> EjInt {
        EjInt::new(self.a, self.b)
    }

    /// `N(α)`, the number of residue classes and nodes of `EJ_α`.
    pub fn norm(&self) -> u64 {
        self.norm
    }

    /// `T = (a + b) / 2`.
    pub fn t(&self) -> Ratio<i64> {
        Ratio::new(self.a + self.b, 2)
    }

    /// `M = (a + 2b) / 3`, an upper bound on the diameter.
    pub fn m(&self) -> Ratio<i64> {
        Ratio::new(self.a + 2 * self.b, 3)
    }

    /// Eccentricity of node 0, which is `floor(M)`.
    pub fn diameter(&self) -> u32 {
        ((self.a + 2 * self.b) / 3) as u32
    }

    /// True for the `b = a + 1` family the broadcast schedules are defined on.
    pub fn is_broadcast_shape(&self) -> bool {
        self.b == self.a + 1
    }

    pub fn require_broadcast_shape(&self) -> Result<()> {
        if self.is_broadcast_shape() {
            Ok(())
        } else {
            Err(Error::NotBroadcastShape {
                a: self.a,
                b: self.b,
            })
        }
    }

    /// Reduces `z` to the canonical representative of its class.
    pub fn reduce(&self, z: EjInt) -> Residue {
        let n = i128::from(self.norm);
        let (a, b) = (i128::from(self.a), i128::from(self.b));
        let (x, y) = (i128::from(z.x), i128::from(z.y));
        // z / α = z·conj(α) / N(α), with conj(a + bρ) = (a + b) - bρ
        let (ca, cb) = (a + b, -b);
        let px = x * ca - y * cb;
        let py = x * cb + y * ca + y * cb;
        let qx = (2 * px + n).div_euclid(2 * n);
        let qy = (2 * py + n).div_euclid(2 * n);

        let mut best: Option<(u64, i64, i64)> = None;
        for dx in -2..=2 {
            for dy in -2..=2 {
                let (kx, ky) = (qx + dx, qy + dy);
                // k·α
                let kax = kx * a - ky * b;
                let kay = kx * b + ky * a + ky * b;
                let rx = i64::try_from(x - kax).expect("remainder is bounded by the modulus");
                let ry = i64::try_from(y - kay).expect("remainder is bounded by the modulus");
                let key = (EjInt::new(rx, ry).hex_norm(), rx, ry);
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
            }
        }
        let (_, rx, ry) = best.expect("search window is non-empty");
        Residue(EjInt::new(rx, ry))
    }

    /// True iff `z ≡ 0 (mod α)`.
    pub fn divides(&self, z: EjInt) -> bool {
        // α | z  iff  N(α) divides both coordinates of z·conj(α)
        let n = i128::from(self.norm);
        let (a, b) = (i128::from(self.a), i128::from(self.b));
        let (x, y) = (i128::from(z.x), i128::from(z.y));
        let (ca, cb) = (a + b, -b);
        let px = x * ca - y * cb;
        let py = x * cb + y * ca + y * cb;
        px % n == 0 && py % n == 0
    }

    /// All `N(α)` canonical representatives, ordered by weight then `(x, y)`.
    /// Index 0 is always the zero class.
    pub fn residues(&self) -> Vec<Residue> {
        let r = self.diameter() as i64;
        let mut set = BTreeSet::new();
        for x in -r..=r {
            for y in -r..=r {
                let z = EjInt::new(x, y);
                if z.hex_norm() <= r as u64 {
                    let c = self.reduce(z);
                    if c.value() == z {
                        set.insert((c.weight(), c));
                    }
                }
            }
        }
        debug_assert_eq!(set.len() as u64, self.norm);
        set.into_iter().map(|(_, c)| c).collect()
    }

    /// Distance of `z` from 0 in `EJ_α`.
    pub fn weight(&self, z: EjInt) -> u64 {
        self.reduce(z).weight()
    }

    pub fn distance(&self, from: EjInt, to: EjInt) -> Result<u64> {
        Ok(self.weight(from.checked_sub(to)?))
    }

    /// Closed-form count of nodes at each distance from node 0, as
    /// `(distance, count)` pairs for every distance that has nodes.
    ///
    /// * `1` at `s = 0`
    /// * `6s` for `1 <= s < T`
    /// * `18(M - s)` for `T < s < M`
    /// * `2` at `s = M` when `b ≡ a (mod 3)`
    /// * the remainder `N(α) - R` at `s = T` when `T` is an integer
    pub fn weight_distribution(&self) -> Vec<(u32, u64)> {
        let t = self.t();
        let m = self.m();
        let mut out: Vec<(u32, Option<u64>)> = Vec::new();
        for s in 0..=m.to_integer() {
            let sr = Ratio::from_integer(s);
            let count = if s == 0 {
                Some(1)
            } else if t.is_integer() && sr == t {
                None
            } else if sr < t {
                Some(6 * s as u64)
            } else if sr < m {
                Some((Ratio::from_integer(18) * (m - sr)).to_integer() as u64)
            } else {
                // s == M, which is only reachable when b ≡ a (mod 3)
                Some(2)
            };
            out.push((s as u32, count));
        }
        let listed: u64 = out.iter().filter_map(|(_, c)| *c).sum();
        out.into_iter()
            .map(|(s, c)| (s, c.unwrap_or(self.norm - listed)))
            .filter(|&(_, c)| c > 0)
            .collect()
    }
}

impl std::fmt::Display for Modulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}+{}rho", self.a, self.b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: i64, b: i64) -> Modulus {
        Modulus::new(a, b).unwrap()
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(Modulus::new(0, 0).is_err());
        assert!(Modulus::new(3, 2).is_err());
        assert!(Modulus::new(-1, 2).is_err());
        assert!(Modulus::new(1, 1).is_err()); // N = 3
        assert!(Modulus::new(0, 2).is_err()); // N = 4
        assert!(Modulus::new(0, 1 << 20).is_err());
        assert!(Modulus::new(1, 2).is_ok());
        assert!(Modulus::new(0, 3).is_ok());
    }

    #[test]
    fn derived_quantities() {
        let q = m(3, 4);
        assert_eq!(q.norm(), 37);
        assert_eq!(q.t(), Ratio::new(7, 2));
        assert_eq!(q.m(), Ratio::new(11, 3));
        assert_eq!(q.diameter(), 3);
        for a in 1..10 {
            assert_eq!(m(a, a + 1).diameter() as i64, a);
        }
    }

    #[test]
    fn wraparound_example_identifications() {
        let q = m(3, 4);
        // 3 + ρ ≡ -3ρ
        assert_eq!(q.reduce(EjInt::new(3, 1)), q.reduce(EjInt::new(0, -3)));
        // 4 ≡ 3ρ²
        assert_eq!(q.reduce(EjInt::new(4, 0)), q.reduce(EjInt::new(-3, 3)));
        // 3 - ρ² ≡ -1 + 2ρ²
        assert_eq!(q.reduce(EjInt::new(4, -1)), q.reduce(EjInt::new(-3, 2)));
        assert_eq!(q.reduce(EjInt::ZERO).value(), EjInt::ZERO);
    }

    #[test]
    fn residue_counts() {
        assert_eq!(m(3, 4).residues().len(), 37);
        assert_eq!(m(2, 3).residues().len(), 19);
        assert_eq!(m(1, 2).residues().len(), 7);
        assert_eq!(m(3, 3).residues().len(), 27);
        assert_eq!(m(2, 4).residues().len(), 28);
        assert_eq!(m(0, 3).residues().len(), 9);
        assert!(m(3, 4).residues()[0].is_zero());
    }

    #[test]
    fn weights() {
        let q = m(3, 4);
        assert_eq!(q.weight(EjInt::ZERO), 0);
        assert_eq!(q.weight(EjInt::new(3, 0)), 3);
        // 1 - ρ² = 2 - ρ
        assert_eq!(q.weight(EjInt::new(2, -1)), 2);
        assert_eq!(q.distance(EjInt::ZERO, EjInt::new(3, 0)).unwrap(), 3);
        assert_eq!(q.distance(EjInt::new(5, 5), EjInt::new(5, 5)).unwrap(), 0);
    }

    #[test]
    fn divides_generator_multiples() {
        let q = m(3, 4);
        assert!(q.divides(q.generator()));
        assert!(q.divides(q.generator() * EjInt::new(-2, 5)));
        assert!(!q.divides(EjInt::ONE));
    }

    #[test]
    fn closed_form_distributions() {
        assert_eq!(
            m(3, 4).weight_distribution(),
            vec![(0, 1), (1, 6), (2, 12), (3, 18)]
        );
        assert_eq!(m(2, 3).weight_distribution(), vec![(0, 1), (1, 6), (2, 12)]);
        assert_eq!(
            m(3, 3).weight_distribution(),
            vec![(0, 1), (1, 6), (2, 12), (3, 8)]
        );
        assert_eq!(
            m(2, 4).weight_distribution(),
            vec![(0, 1), (1, 6), (2, 12), (3, 9)]
        );
        let total: u64 = m(4, 5).weight_distribution().iter().map(|p| p.1).sum();
        assert_eq!(total, 61);
    }
}
