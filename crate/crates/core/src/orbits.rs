//! The rectangle `L(a,b,c)` and the action of the congruence subgroup `D_k`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Value};

use crate::arith::{prime_power, require_prime, val};
use crate::params::int_json;
use crate::unionfind::UnionFind;
use crate::{Error, Result};

/// Largest rectangle `|L|` handled.
const POINT_LIMIT: u64 = 1 << 20;
/// Window at which the doubling search for global orbits gives up.
pub const MAX_WINDOW: u64 = 128;

pub type Point = (u64, u64);

/// `L(a,b,c) = {(x,y) : 0 <= x < gcd(a,c), 0 <= y < gcd(b,c)}` with `a | b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSpace {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    k: BigInt,
    m1: u64,
    m2: u64,
}

pub fn build_orbit_space(a: &BigInt, b: &BigInt, c: &BigInt) -> Result<OrbitSpace> {
    for (name, v) in [("a", a), ("b", b), ("c", c)] {
        if !v.is_positive() {
            return Err(Error::InvalidArgument(format!("{name} = {v} must be positive")));
        }
    }
    if !b.is_multiple_of(a) {
        return Err(Error::InvalidArgument(format!("a = {a} must divide b = {b}")));
    }
    let m1 = a.gcd(c).to_u64();
    let m2 = b.gcd(c).to_u64();
    let (m1, m2) = match (m1, m2) {
        (Some(m1), Some(m2)) if m1.checked_mul(m2).is_some_and(|n| n <= POINT_LIMIT) => (m1, m2),
        _ => return Err(Error::Limit(format!("L({a},{b},{c}) has too many points"))),
    };
    Ok(OrbitSpace { a: a.clone(), b: b.clone(), c: c.clone(), k: b / a, m1, m2 })
}

impl OrbitSpace {
    pub fn from_u64(a: u64, b: u64, c: u64) -> Result<Self> {
        build_orbit_space(&a.into(), &b.into(), &c.into())
    }

    pub fn k(&self) -> &BigInt {
        &self.k
    }

    /// `(gcd(a,c), gcd(b,c))`.
    pub fn moduli(&self) -> (u64, u64) {
        (self.m1, self.m2)
    }

    pub fn len(&self) -> usize {
        (self.m1 * self.m2) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, pt: Point) -> bool {
        pt.0 < self.m1 && pt.1 < self.m2
    }

    /// Points in lexicographic order.
    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.m1).flat_map(move |x| (0..self.m2).map(move |y| (x, y)))
    }

    pub(crate) fn index(&self, pt: Point) -> usize {
        (pt.0 * self.m2 + pt.1) as usize
    }

    pub(crate) fn point(&self, i: usize) -> Point {
        (i as u64 / self.m2, i as u64 % self.m2)
    }

    fn check(&self, pt: Point) -> Result<()> {
        if self.contains(pt) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "point ({}, {}) is outside L: coordinates must be below ({}, {})",
                pt.0, pt.1, self.m1, self.m2
            )))
        }
    }

    /// `(x,y)M` with entries already reduced: `m11, m21` mod `m1` and
    /// `m12, m22` mod `m2`.
    fn act_reduced(&self, pt: Point, r: [u64; 4]) -> Point {
        let (x, y) = (pt.0 as u128, pt.1 as u128);
        let [a11, a12, a21, a22] = r.map(u128::from);
        (
            ((x * a11 + y * a21) % self.m1 as u128) as u64,
            ((x * a12 + y * a22) % self.m2 as u128) as u64,
        )
    }

    fn reduce(&self, m: &[[BigInt; 2]; 2]) -> [u64; 4] {
        let (m1, m2) = (BigInt::from(self.m1), BigInt::from(self.m2));
        let r = |v: &BigInt, q: &BigInt| v.mod_floor(q).to_u64().expect("reduced");
        [r(&m[0][0], &m1), r(&m[0][1], &m2), r(&m[1][0], &m1), r(&m[1][1], &m2)]
    }

    pub fn to_json(&self) -> Value {
        json!({
            "a": int_json(&self.a),
            "b": int_json(&self.b),
            "c": int_json(&self.c),
            "k": int_json(&self.k),
            "moduli": [self.m1, self.m2],
            "size": self.len(),
        })
    }
}

/// The row-vector action `(x,y) ↦ (x,y)M`, reduced independently modulo
/// `gcd(a,c)` and `gcd(b,c)`.
pub fn apply_dk_matrix(space: &OrbitSpace, pt: Point, m: &[[BigInt; 2]; 2]) -> Result<Point> {
    space.check(pt)?;
    if !m[0][1].is_multiple_of(&space.k) {
        return Err(Error::InvalidArgument(format!(
            "upper-right entry {} is not divisible by k = {}",
            m[0][1], space.k
        )));
    }
    Ok(space.act_reduced(pt, space.reduce(m)))
}

/// `(α, β, γ, δ)` giving `A = [[α, kβ], [γ, δ]]` with `pt1·A ≡ pt2` at `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitWitness {
    pub alpha: BigInt,
    pub beta: BigInt,
    pub gamma: BigInt,
    pub delta: BigInt,
    pub p: u64,
    pub l: u32,
    pub m: u32,
}

impl OrbitWitness {
    pub fn matrix(&self, k: &BigInt) -> [[BigInt; 2]; 2] {
        [[self.alpha.clone(), k * &self.beta], [self.gamma.clone(), self.delta.clone()]]
    }

    /// Check the three defining conditions for `pt1 → pt2` exactly.
    pub fn verifies(&self, space: &OrbitSpace, pt1: Point, pt2: Point) -> bool {
        let (d, e) = (BigInt::from(pt1.0), BigInt::from(pt1.1));
        let (f, g) = (BigInt::from(pt2.0), BigInt::from(pt2.1));
        let p = BigInt::from(self.p);
        let (pl, pm) = (prime_power(self.p, self.l), prime_power(self.p, self.m));
        (&d * &self.alpha + &e * &self.gamma - f).is_multiple_of(&pl)
            && (&d * &space.k * &self.beta + &e * &self.delta - g).is_multiple_of(&pm)
            && !(&self.alpha * &self.delta - &space.k * &self.beta * &self.gamma).is_multiple_of(&p)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "alpha": int_json(&self.alpha),
            "beta": int_json(&self.beta),
            "gamma": int_json(&self.gamma),
            "delta": int_json(&self.delta),
            "l": self.l,
            "m": self.m,
        })
    }
}

/// Whether `pt1` and `pt2` lie in one `D_k(Z_p)`-orbit.
///
/// With `ℓ = ν_p(gcd(a,c))` and `m = ν_p(gcd(b,c))` this searches for
/// `α, γ` modulo `p^max(ℓ,1)` and `β, δ` modulo `p^max(m,1)` with
/// `p^ℓ | dα + eγ - f`, `p^m | dkβ + eδ - g` and `p ∤ αδ - kβγ`, where
/// `pt1 = (d,e)` and `pt2 = (f,g)`. Equal points get the identity; otherwise
/// the lexicographically least `(α, β, γ, δ)` is returned.
pub fn local_orbit_equivalent(space: &OrbitSpace, pt1: Point, pt2: Point, p: u64) -> Result<Option<OrbitWitness>> {
    require_prime(p)?;
    space.check(pt1)?;
    space.check(pt2)?;
    let l = val(&BigInt::from(space.m1), p);
    let m = val(&BigInt::from(space.m2), p);
    let witness = |a: u64, b: u64, c: u64, d: u64| OrbitWitness {
        alpha: a.into(),
        beta: b.into(),
        gamma: c.into(),
        delta: d.into(),
        p,
        l,
        m,
    };
    if pt1 == pt2 {
        return Ok(Some(witness(1, 0, 0, 1)));
    }
    let ql = prime_power(p, l).to_u128().ok_or_else(|| Error::Limit("modulus too large".into()))?;
    let qm = prime_power(p, m).to_u128().ok_or_else(|| Error::Limit("modulus too large".into()))?;
    let ra = ql.max(p as u128);
    let rb = qm.max(p as u128);
    let pu = p as u128;
    let k = space.k.mod_floor(&BigInt::from(ra.max(rb) * pu)).to_u128().expect("reduced");
    let (d, e) = (pt1.0 as u128 % ql, pt1.1 as u128);
    let (f, g) = (pt2.0 as u128, pt2.1 as u128);
    // f, g and the coordinates only matter modulo p^ℓ and p^m
    let e1 = e % ql;
    let (f, g) = (f % ql, g % qm);
    let (d2, e2) = (pt1.0 as u128 % qm, e % qm);
    for alpha in 0..ra {
        for beta in 0..rb {
            for gamma in 0..ra {
                if (d * alpha + e1 * gamma) % ql != f {
                    continue;
                }
                for delta in 0..rb {
                    if (d2 * k % qm * beta + e2 * delta) % qm != g {
                        continue;
                    }
                    let det_p = (alpha % pu * (delta % pu) + pu * pu - k % pu * (beta % pu) * (gamma % pu) % pu) % pu;
                    if det_p != 0 {
                        return Ok(Some(witness(alpha as u64, beta as u64, gamma as u64, delta as u64)));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Orbits of `D_k(Z)` on `L`, as found by bounded-entry closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    /// Orbits ordered by their least point; points ascending.
    pub orbits: Vec<Vec<Point>>,
    /// Window at which the partition was accepted.
    pub window: u64,
    /// Whether two consecutive doublings left the partition unchanged.
    pub stable: bool,
}

impl OrbitPartition {
    pub fn orbit_of(&self, pt: Point) -> Option<&[Point]> {
        self.orbits.iter().find(|o| o.binary_search(&pt).is_ok()).map(Vec::as_slice)
    }

    /// The lexicographically least point in the orbit of `pt`.
    pub fn representative(&self, pt: Point) -> Option<Point> {
        self.orbit_of(pt).map(|o| o[0])
    }

    pub fn representatives(&self) -> Vec<Point> {
        self.orbits.iter().map(|o| o[0]).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "orbits": self.orbits,
            "count": self.orbits.len(),
            "window": self.window,
            "stable": self.stable,
        })
    }
}

/// Close `L` under all `M ∈ D_k(Z)` with entries in `[-B, B]`, doubling `B`
/// until the partition survives two consecutive doublings.
///
/// Every merge is witnessed by an integral matrix, so orbits are never
/// joined wrongly; a coarser true partition could in principle need a larger
/// window, which is why the final window is reported.
pub fn global_orbit_partition(space: &OrbitSpace, window: u64) -> Result<OrbitPartition> {
    if window == 0 {
        return Err(Error::InvalidArgument("window bound must be at least 1".into()));
    }
    let mut b = window.min(MAX_WINDOW);
    let mut current = partition_at(space, b);
    let mut unchanged = 0;
    while unchanged < 2 {
        if b >= MAX_WINDOW {
            return Ok(OrbitPartition { orbits: current, window: b, stable: false });
        }
        b = (2 * b).min(MAX_WINDOW);
        let next = partition_at(space, b);
        if next == current {
            unchanged += 1;
        } else {
            unchanged = 0;
            current = next;
        }
    }
    Ok(OrbitPartition { orbits: current, window: b, stable: true })
}

fn partition_at(space: &OrbitSpace, bound: u64) -> Vec<Vec<Point>> {
    let mut uf = UnionFind::new(space.len());
    for (r, _) in window_matrices(space, bound) {
        for pt in space.points() {
            let img = space.act_reduced(pt, r);
            uf.union(space.index(pt), space.index(img));
        }
    }
    uf.classes().into_iter().map(|c| c.into_iter().map(|i| space.point(i)).collect()).collect()
}

/// All determinant `±1` matrices in `D_k(Z)` with entries in `[-B, B]`,
/// one integral representative per reduction modulo `(m1, m2)`.
fn window_matrices(space: &OrbitSpace, bound: u64) -> Vec<([u64; 4], [i64; 4])> {
    let bnd = bound as i64;
    let (m1, m2) = (space.m1 as i64, space.m2 as i64);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut push = |a: [i64; 4]| {
        let r = [
            a[0].rem_euclid(m1) as u64,
            a[1].rem_euclid(m2) as u64,
            a[2].rem_euclid(m1) as u64,
            a[3].rem_euclid(m2) as u64,
        ];
        if seen.insert(r) {
            out.push((r, a));
        }
    };
    let a12_values: Vec<i64> = match space.k.to_i64().filter(|&k| k <= bnd) {
        Some(k) => (-bnd / k..=bnd / k).map(|j| j * k).collect(),
        None => vec![0],
    };
    for a11 in -bnd..=bnd {
        for &a12 in &a12_values {
            for a21 in -bnd..=bnd {
                for det in [1, -1] {
                    let num = det + a12 * a21;
                    if a11 != 0 {
                        if num % a11 == 0 && (num / a11).abs() <= bnd {
                            push([a11, a12, a21, num / a11]);
                        }
                    } else if num == 0 {
                        for a22 in -bnd..=bnd {
                            push([a11, a12, a21, a22]);
                        }
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// An integral matrix `A ∈ D_k(Z)` of determinant `±1` with `from·A = to`,
/// built as a product of window matrices along a shortest path.
pub fn global_orbit_witness(space: &OrbitSpace, from: Point, to: Point, window: u64) -> Result<Option<[[BigInt; 2]; 2]>> {
    space.check(from)?;
    space.check(to)?;
    let mats = window_matrices(space, window.max(1));
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; space.len()];
    let start = space.index(from);
    let mut seen = vec![false; space.len()];
    seen[start] = true;
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(i) = queue.pop_front() {
        if i == space.index(to) {
            break;
        }
        for (mi, (r, _)) in mats.iter().enumerate() {
            let j = space.index(space.act_reduced(space.point(i), *r));
            if !seen[j] {
                seen[j] = true;
                prev[j] = Some((i, mi));
                queue.push_back(j);
            }
        }
    }
    let mut at = space.index(to);
    if !seen[at] {
        return Ok(None);
    }
    let mut path = Vec::new();
    while let Some((i, mi)) = prev[at] {
        path.push(mats[mi].1);
        at = i;
    }
    let one = |v: i64| BigInt::from(v);
    let mut acc = [[one(1), one(0)], [one(0), one(1)]];
    for a in path.iter().rev() {
        let a = [[one(a[0]), one(a[1])], [one(a[2]), one(a[3])]];
        acc = [
            [&acc[0][0] * &a[0][0] + &acc[0][1] * &a[1][0], &acc[0][0] * &a[0][1] + &acc[0][1] * &a[1][1]],
            [&acc[1][0] * &a[0][0] + &acc[1][1] * &a[1][0], &acc[1][0] * &a[0][1] + &acc[1][1] * &a[1][1]],
        ];
    }
    Ok(Some(acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: [[i64; 2]; 2]) -> [[BigInt; 2]; 2] {
        rows.map(|r| r.map(BigInt::from))
    }

    #[test]
    fn spaces() {
        let s = OrbitSpace::from_u64(2, 4, 2).unwrap();
        assert_eq!(s.points().collect::<Vec<_>>(), vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert_eq!(OrbitSpace::from_u64(1, 1, 1).unwrap().points().collect::<Vec<_>>(), vec![(0, 0)]);
        assert_eq!(OrbitSpace::from_u64(5, 5, 5).unwrap().len(), 25);
        assert!(OrbitSpace::from_u64(2, 3, 1).is_err());
        assert!(build_orbit_space(&0.into(), &1.into(), &1.into()).is_err());
    }

    #[test]
    fn action_examples() {
        let s = OrbitSpace::from_u64(2, 4, 2).unwrap();
        for pt in s.points() {
            assert_eq!(apply_dk_matrix(&s, pt, &m([[1, 0], [0, 1]])).unwrap(), pt);
        }
        assert_eq!(apply_dk_matrix(&s, (1, 0), &m([[1, 2], [0, 1]])).unwrap(), (1, 0));
        assert!(apply_dk_matrix(&s, (1, 0), &m([[1, 1], [0, 1]])).is_err());
        let s = OrbitSpace::from_u64(5, 5, 5).unwrap();
        assert_eq!(apply_dk_matrix(&s, (1, 0), &m([[0, 1], [1, 0]])).unwrap(), (0, 1));
    }

    #[test]
    fn local_examples() {
        let s = OrbitSpace::from_u64(2, 4, 2).unwrap();
        let w = local_orbit_equivalent(&s, (1, 1), (1, 1), 2).unwrap().unwrap();
        assert_eq!((w.alpha, w.beta, w.gamma, w.delta), (1.into(), 0.into(), 0.into(), 1.into()));
        assert_eq!(local_orbit_equivalent(&s, (1, 0), (1, 1), 2).unwrap(), None);
        for a in s.points() {
            for b in s.points() {
                let w = local_orbit_equivalent(&s, a, b, 3).unwrap().unwrap();
                assert!(w.verifies(&s, a, b));
            }
        }
    }

    #[test]
    fn global_examples() {
        let s = OrbitSpace::from_u64(2, 4, 2).unwrap();
        let part = global_orbit_partition(&s, 1).unwrap();
        // [[1,0],[1,1]] lies in D_2(Z) and sends (0,1) to (1,1)
        assert_eq!(part.orbits, vec![vec![(0, 0)], vec![(0, 1), (1, 1)], vec![(1, 0)]]);
        assert!(part.stable);

        let s = OrbitSpace::from_u64(5, 5, 5).unwrap();
        let part = global_orbit_partition(&s, 1).unwrap();
        assert_eq!(part.orbits.len(), 2);
        assert_eq!(part.orbits[0], vec![(0, 0)]);
        assert_eq!(part.orbits[1].len(), 24);

        let s = OrbitSpace::from_u64(1, 1, 1).unwrap();
        assert_eq!(global_orbit_partition(&s, 1).unwrap().orbits, vec![vec![(0, 0)]]);
    }
}
