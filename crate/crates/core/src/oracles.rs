//! Exhaustive reference computations.
//!
//! Each function here answers the same question as a fast routine elsewhere
//! in the crate by plain enumeration, sharing as little code with it as
//! possible. They are slow by design and meant for cross-validation.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::arith::{gcd_all, prime_power, val};
use crate::orbits::{OrbitSpace, Point};
use crate::params::{ParamTuple, T123, T124, T125, T134, T135, T145, T235};
use crate::{Error, Result};

fn small(v: &BigInt, m: u64) -> u64 {
    v.mod_floor(&BigInt::from(m)).to_u64().expect("reduced")
}

/// Least `w ∈ [0, p^k)` with `p ∤ w` and `p^k | a·w - b`, by trying all of
/// them; `k = 0` gives `1`.
pub fn unit_congruence_brute(a: &BigInt, b: &BigInt, p: u64, k: u32) -> Option<BigInt> {
    if k == 0 {
        return Some(BigInt::one());
    }
    let q = prime_power(p, k).to_u64().expect("small modulus");
    let (a, b) = (small(a, q), small(b, q));
    (1..q).filter(|w| w % p != 0).find(|w| (a as u128 * *w as u128) % q as u128 == b as u128).map(BigInt::from)
}

/// All `(t124, t135, t125)` modulo `P = p^(α+β)` reachable from `s` through
/// the three congruences, over every `u` unit and `v, w, x, y, z` modulo `P`.
pub struct Reachable2111 {
    modulus: u64,
    /// Bit `c` of entry `a·P + b` is set when `(a, b, c)` is reachable.
    table: Vec<u64>,
}

impl Reachable2111 {
    pub fn new(s: &ParamTuple, p: u64) -> Result<Self> {
        let d3 = gcd_all([&s.get(T123), &s.get(T145), &s.get(T235)]);
        let k = val(&d3, p) + val(&s.get(T134), p);
        let m = prime_power(p, k).to_u64().filter(|&m| m <= 64).ok_or_else(|| {
            Error::Limit("reachability oracle supports moduli up to 64".into())
        })?;
        let r = |v: BigInt| small(&v, m);
        let [s123, s134, s145, s235, s124, s135, s125] =
            [T123, T134, T145, T235, T124, T135, T125].map(|tr| r(s.get(tr)));
        let d3 = r(d3);
        let mut table = vec![0u64; (m * m) as usize];
        for u in (1..m.max(2)).filter(|u| u % p != 0) {
            let uinv = (1..m.max(2)).find(|i| (u * i) % m == 1 % m).expect("unit");
            let uinv2 = uinv * uinv % m;
            for v in 0..m {
                for w in 0..m {
                    for x in 0..m {
                        let t124 = uinv * ((s124 + m * m - s123 * w % m + s134 * v) % m) % m;
                        let base135 = s135 + s145 * w + s134 * x;
                        let base125 = s125 + s135 * v + s124 * x + s134 * v % m * x;
                        let mut mask = 0u64;
                        for z in 0..m {
                            mask |= 1 << (uinv2 * ((base125 + d3 * z) % m) % m);
                        }
                        for y in 0..m {
                            let t135 = uinv * ((base135 + s235 * y) % m) % m;
                            table[(t124 * m + t135) as usize] |= mask;
                        }
                    }
                }
            }
        }
        Ok(Reachable2111 { modulus: m, table })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn contains(&self, t: &ParamTuple) -> bool {
        let m = self.modulus;
        let (a, b, c) = (small(&t.get(T124), m), small(&t.get(T135), m), small(&t.get(T125), m));
        self.table[(a * m + b) as usize] >> c & 1 == 1
    }
}

/// Direct six-fold search for `s ~ t` modulo `p^(α+β)`; returns the
/// lexicographically least `(u, v, w, x, y, z)`.
pub fn coupled_brute_pair(s: &ParamTuple, t: &ParamTuple, p: u64) -> Option<[u64; 6]> {
    let d3 = gcd_all([&s.get(T123), &s.get(T145), &s.get(T235)]);
    let k = val(&d3, p) + val(&s.get(T134), p);
    let m = prime_power(p, k).to_u64().expect("small modulus");
    let r = |v: BigInt| small(&v, m) as i128;
    let [s123, s134, s145, s235, s124, s135, s125] =
        [T123, T134, T145, T235, T124, T135, T125].map(|tr| r(s.get(tr)));
    let [t124, t135, t125] = [T124, T135, T125].map(|tr| r(t.get(tr)));
    let d3 = r(d3);
    let mi = m as i128;
    let zero = |e: i128| e.rem_euclid(mi) == 0;
    for u in (1..mi.max(2)).filter(|u| u % p as i128 != 0) {
        for v in 0..mi {
            for w in 0..mi {
                if !zero(t124 * u - s124 + s123 * w - s134 * v) {
                    continue;
                }
                for x in 0..mi {
                    for y in 0..mi {
                        if !zero(t135 * u - s135 - s145 * w - s134 * x - s235 * y) {
                            continue;
                        }
                        for z in 0..mi {
                            if zero(t125 * u * u - s125 - s135 * v - s124 * x - s134 * v * x - d3 * z) {
                                return Some([u, v, w, x, y, z].map(|c| c as u64));
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

/// Partition of `L` into `D_k(Z_p)`-orbits, computed from every matrix modulo
/// `p^e` (`e = max(ℓ, m, 1)`) with unit determinant and upper-right entry
/// divisible by `p^min(ν_p(k), e)`, acting on points reduced modulo
/// `(p^ℓ, p^m)`. Classes are ordered by least point.
pub fn orbit_closure_partition(space: &OrbitSpace, p: u64) -> Vec<Vec<Point>> {
    let (m1, m2) = space.moduli();
    let l = val(&BigInt::from(m1), p);
    let m = val(&BigInt::from(m2), p);
    let e = l.max(m).max(1);
    let q = p.pow(e);
    let (ql, qm) = (p.pow(l), p.pow(m));
    let kv = val(space.k(), p).min(e);
    let step = p.pow(kv);
    let mut mats = Vec::new();
    for a11 in 0..q {
        for a12 in (0..q).step_by(step as usize) {
            for a21 in 0..q {
                for a22 in 0..q {
                    let det = (a11 * a22 + q * q - a12 * a21 % (q * q)) % q;
                    if det % p != 0 {
                        mats.push([a11, a12, a21, a22]);
                    }
                }
            }
        }
    }
    let orbit_of = |x: u64, y: u64| -> BTreeSet<(u64, u64)> {
        mats.iter().map(|a| ((x * a[0] + y * a[2]) % ql, (x * a[1] + y * a[3]) % qm)).collect()
    };
    let mut key_of = std::collections::HashMap::new();
    let mut classes: Vec<(BTreeSet<(u64, u64)>, Vec<Point>)> = Vec::new();
    for pt in space.points() {
        let red = (pt.0 % ql, pt.1 % qm);
        let orbit = key_of.entry(red).or_insert_with(|| orbit_of(red.0, red.1)).clone();
        match classes.iter_mut().find(|(o, _)| *o == orbit) {
            Some((_, members)) => members.push(pt),
            None => classes.push((orbit, vec![pt])),
        }
    }
    classes.into_iter().map(|(_, v)| v).collect()
}

/// Bounded integral search for `s ~_Z t` in type `(2,1,1,1)`:
/// `u = ±1`, `v, w, x, y ∈ [-bound, bound]`, `z` solved exactly.
pub fn sweep_2111(s: &ParamTuple, t: &ParamTuple, bound: i64) -> bool {
    if !s.same_rigid(t) {
        return false;
    }
    let d3 = gcd_all([&s.get(T123), &s.get(T145), &s.get(T235)]);
    let g = |tr| s.get(tr);
    for u in [1i64, -1] {
        let u = BigInt::from(u);
        for v in -bound..=bound {
            for w in -bound..=bound {
                let (v, w) = (BigInt::from(v), BigInt::from(w));
                if t.get(T124) * &u != g(T124) - g(T123) * &w + g(T134) * &v {
                    continue;
                }
                for x in -bound..=bound {
                    let x = BigInt::from(x);
                    for y in -bound..=bound {
                        let y = BigInt::from(y);
                        if t.get(T135) * &u != g(T135) + g(T145) * &w + g(T134) * &x + g(T235) * &y {
                            continue;
                        }
                        let rest = t.get(T125) - g(T125) - g(T135) * &v - g(T124) * &x - g(T134) * &v * &x;
                        if rest.is_multiple_of(&d3) {
                            return true;
                        }
                    }
                }
            }
        }
    }
    false
}
