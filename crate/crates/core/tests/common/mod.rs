//! Brute-force reference implementations used to check the library.
//!
//! Nothing here calls `Modulus::reduce` or the network adjacency; classes
//! are told apart only through divisibility.

#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use ejnet::ej::{EjInt, Unit};
use ejnet::residue::Modulus;

/// A key that is equal for two EJ integers iff they are congruent mod α:
/// the coordinates of `z·conj(α)` reduced mod `N(α)`.
pub fn class_key(m: &Modulus, z: EjInt) -> (i64, i64) {
    let n = m.norm() as i128;
    let (a, b) = (i128::from(m.a()), i128::from(m.b()));
    let (x, y) = (i128::from(z.x), i128::from(z.y));
    let (ca, cb) = (a + b, -b);
    let px = x * ca - y * cb;
    let py = x * cb + y * ca + y * cb;
    (px.rem_euclid(n) as i64, py.rem_euclid(n) as i64)
}

/// Number of residue classes, counted by pairwise divisibility over a box
/// that is large enough to meet every class.
pub fn count_classes(m: &Modulus) -> usize {
    let r = m.a() + m.b();
    let mut reps: Vec<EjInt> = Vec::new();
    for x in -r..=r {
        for y in -r..=r {
            let z = EjInt::new(x, y);
            if !reps.iter().any(|&c| m.divides(z - c)) {
                reps.push(z);
            }
        }
    }
    reps.len()
}

/// Minimum of `|x| + |y| + |z|` over `x + yρ + zρ² ≡ target (mod α)`.
pub fn min_weight(m: &Modulus, target: EjInt) -> u64 {
    let r = m.diameter() as i64 + 1;
    let mut best = u64::MAX;
    for x in -r..=r {
        for y in -r..=r {
            for z in -r..=r {
                // ρ² = ρ - 1
                let v = EjInt::new(x - z, y + z);
                if m.divides(v - target) {
                    best = best.min(x.unsigned_abs() + y.unsigned_abs() + z.unsigned_abs());
                }
            }
        }
    }
    best
}

/// BFS over residue classes of `EJ_α` from 0, stepping by the six units.
/// Returns the distance of every class, keyed by [`class_key`], together
/// with one representative.
pub fn layer_bfs(m: &Modulus) -> HashMap<(i64, i64), (EjInt, u32)> {
    let mut seen = HashMap::new();
    seen.insert(class_key(m, EjInt::ZERO), (EjInt::ZERO, 0));
    let mut queue = VecDeque::from([(EjInt::ZERO, 0u32)]);
    while let Some((z, d)) = queue.pop_front() {
        for u in Unit::ALL {
            let w = z + u.value();
            let key = class_key(m, w);
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(key) {
                e.insert((w, d + 1));
                queue.push_back((w, d + 1));
            }
        }
    }
    seen
}

pub fn layer_histogram(m: &Modulus) -> Vec<u64> {
    let dist = layer_bfs(m);
    let max = dist.values().map(|&(_, d)| d).max().unwrap_or(0) as usize;
    let mut hist = vec![0u64; max + 1];
    for (_, d) in dist.values() {
        hist[*d as usize] += 1;
    }
    hist
}

/// Distance distribution written out directly from its case formula,
/// working in sixths so `T = (a+b)/2` and `M = (a+2b)/3` stay integral.
pub fn closed_form_layer(a: i64, b: i64) -> Vec<u64> {
    let n = (a * a + a * b + b * b) as u64;
    let (t6, m6) = (3 * (a + b), 2 * (a + 2 * b));
    let mut hist = Vec::new();
    let mut listed = 0u64;
    let mut remainder_at = None;
    let mut s = 0i64;
    while 6 * s <= m6 {
        let c = if s == 0 {
            1
        } else if 6 * s == t6 {
            remainder_at = Some(s as usize);
            0
        } else if 6 * s < t6 {
            6 * s as u64
        } else if 6 * s < m6 {
            // 18(M - s)
            (3 * (m6 - 6 * s)) as u64
        } else {
            2
        };
        listed += c;
        hist.push(c);
        s += 1;
    }
    if let Some(i) = remainder_at {
        hist[i] = n - listed;
    }
    while hist.last() == Some(&0) {
        hist.pop();
    }
    hist
}

/// n-fold convolution of a layer histogram.
pub fn convolve_power(layer: &[u64], n: u32) -> Vec<u64> {
    let mut out = vec![1u64];
    for _ in 0..n {
        let mut next = vec![0u64; out.len() + layer.len() - 1];
        for (i, &p) in out.iter().enumerate() {
            for (j, &q) in layer.iter().enumerate() {
                next[i + j] += p * q;
            }
        }
        out = next;
    }
    out
}

/// Per-step (sending, receiving) of the previous schedule, straight from
/// its round structure.
pub fn previous_counts(norm: u64, diameter: u64, n: u32) -> Vec<(u64, u64)> {
    let mut rows = Vec::new();
    for r in 0..n {
        let roots = norm.pow(r);
        for d in 1..=diameter {
            let send = if d == 1 { roots } else { 6 * (d - 1) * roots };
            rows.push((send, 6 * d * roots));
        }
    }
    rows
}
