//! Integer helpers shared by every module: p-adic valuations, gcds over
//! several arguments, factorisation of the (small) governing moduli and
//! linear congruences.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::{Error, Result};

/// The p-adic valuation of an integer; zero has infinite valuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    /// `min(self, k)` as a plain exponent.
    pub fn capped(self, k: u32) -> u32 {
        match self {
            Valuation::Finite(e) => e.min(k),
            Valuation::Infinite => k,
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(e) => Some(e),
            Valuation::Infinite => None,
        }
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(e) => write!(f, "{e}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(e) => serializer.serialize_u32(*e),
            Valuation::Infinite => serializer.serialize_str("inf"),
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{p} is not a prime")))
    }
}

/// Largest `e` with `p^e | n`; infinite for `n = 0`.
pub fn p_valuation(n: &BigInt, p: u64) -> Result<Valuation> {
    require_prime(p)?;
    Ok(valuation_unchecked(n, p))
}

pub(crate) fn valuation_unchecked(n: &BigInt, p: u64) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut e = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Valuation::Finite(e);
        }
        n = q;
        e += 1;
    }
}

/// `ν_p` of a nonzero integer as a plain exponent.
pub(crate) fn val(n: &BigInt, p: u64) -> u32 {
    valuation_unchecked(n, p)
        .finite()
        .expect("valuation of a nonzero modulus")
}

/// Iterated nonnegative gcd with `gcd(x, 0) = |x|`.
pub fn gcd_all<'a, I>(values: I) -> BigInt
where
    I: IntoIterator<Item = &'a BigInt>,
{
    values
        .into_iter()
        .fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

pub fn lcm_all<'a, I>(values: I) -> BigInt
where
    I: IntoIterator<Item = &'a BigInt>,
{
    values.into_iter().fold(BigInt::one(), |acc, v| {
        if v.is_zero() {
            acc
        } else {
            acc.lcm(v)
        }
    })
}

/// Least nonnegative residue.
pub fn mod_floor(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

/// `p^k` as a big integer.
pub fn prime_power(p: u64, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), k as usize)
}

/// Inverse of `a` modulo `m`, if it exists (`m >= 1`).
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// All solutions of `a·x ≡ b (mod m)` as `x ≡ x0 (mod step)`, with
/// `0 <= x0 < step` and `step | m`. `None` when unsolvable.
pub fn solve_linear_congruence(a: &BigInt, b: &BigInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    let a = a.mod_floor(m);
    let b = b.mod_floor(m);
    let g = a.gcd(m);
    if g.is_zero() {
        // m = 0 never happens for valid moduli; treat as exact equation a x = b.
        return None;
    }
    if !b.is_multiple_of(&g) {
        return None;
    }
    let step = m / &g;
    let inv = mod_inverse(&(&a / &g), &step)?;
    let x0 = ((&b / &g) * inv).mod_floor(&step);
    Some((x0, step))
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_u64(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    for p in [2u64, 3, 5, 7, 11, 13] {
        if n % p == 0 {
            out.push(p);
            let mut m = n;
            while m % p == 0 {
                m /= p;
            }
            factor_u64(m, out);
            return;
        }
    }
    let d = pollard_rho(n);
    factor_u64(d, out);
    factor_u64(n / d, out);
}

/// Distinct prime divisors of `|n|` in ascending order; empty for `|n| <= 1`.
///
/// Moduli beyond `u64` are rejected: every modulus the deciders consume is a
/// gcd of structure constants and is small in practice.
pub fn prime_factors(n: &BigInt) -> Result<Vec<u64>> {
    if n.is_zero() {
        return Err(Error::InvalidArgument("cannot factor zero".into()));
    }
    let m = n
        .abs()
        .to_u64()
        .ok_or_else(|| Error::Limit(format!("modulus {n} exceeds the factorisation range")))?;
    let mut out = Vec::new();
    factor_u64(m, &mut out);
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Least element of `(r + mZ) ∪ (-r + mZ)` that is nonnegative, i.e.
/// `min(r mod m, m - r mod m)` with the convention that `0` maps to `0`.
pub fn symmetric_residue(r: &BigInt, m: &BigInt) -> BigInt {
    if m.is_zero() {
        return r.abs();
    }
    let a = r.mod_floor(m);
    if a.is_zero() {
        return a;
    }
    let b = m - &a;
    a.min(b)
}

#[cfg(test)]
pub(crate) fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(p_valuation(&big(12), 2).unwrap(), Valuation::Finite(2));
        assert_eq!(p_valuation(&big(0), 5).unwrap(), Valuation::Infinite);
        assert_eq!(p_valuation(&big(18), 3).unwrap(), Valuation::Finite(2));
        assert_eq!(p_valuation(&big(-18), 3).unwrap(), Valuation::Finite(2));
        assert!(matches!(p_valuation(&big(12), 4), Err(Error::InvalidArgument(_))));
        assert!(matches!(p_valuation(&big(12), 1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn valuation_order_puts_infinity_last() {
        assert!(Valuation::Finite(100) < Valuation::Infinite);
        assert_eq!(Valuation::Infinite.capped(3), 3);
        assert_eq!(Valuation::Finite(1).capped(3), 1);
    }

    #[test]
    fn primality_agrees_with_trial_division() {
        for n in 0u64..5000 {
            let trial = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), trial, "n = {n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
    }

    #[test]
    fn gcd_conventions() {
        assert_eq!(gcd_all([&big(3), &big(0)]), big(3));
        assert_eq!(gcd_all([&big(12), &big(18), &big(8)]), big(2));
        assert_eq!(gcd_all([&big(0), &big(0)]), big(0));
        assert_eq!(lcm_all([&big(4), &big(6), &big(0)]), big(12));
    }

    #[test]
    fn factorisation() {
        assert_eq!(prime_factors(&big(1)).unwrap(), Vec::<u64>::new());
        assert_eq!(prime_factors(&big(360)).unwrap(), vec![2, 3, 5]);
        assert_eq!(prime_factors(&big(-49)).unwrap(), vec![7]);
        assert_eq!(
            prime_factors(&BigInt::from(600_851_475_143u64)).unwrap(),
            vec![71, 839, 1471, 6857]
        );
        assert!(prime_factors(&big(0)).is_err());
    }

    #[test]
    fn linear_congruences() {
        // 4x ≡ 2 (mod 6): x ≡ 2 (mod 3)
        assert_eq!(
            solve_linear_congruence(&big(4), &big(2), &big(6)),
            Some((big(2), big(3)))
        );
        assert_eq!(solve_linear_congruence(&big(4), &big(1), &big(6)), None);
        assert_eq!(
            solve_linear_congruence(&big(0), &big(0), &big(4)),
            Some((big(0), big(1)))
        );
        for m in 1..30i64 {
            for a in -10..10i64 {
                for b in -10..10i64 {
                    let brute: Vec<i64> = (0..m).filter(|x| (a * x - b).rem_euclid(m) == 0).collect();
                    match solve_linear_congruence(&big(a), &big(b), &big(m)) {
                        None => assert!(brute.is_empty()),
                        Some((x0, step)) => {
                            let step = step.to_i64().unwrap();
                            let x0 = x0.to_i64().unwrap();
                            let fast: Vec<i64> = (0..m).filter(|x| (x - x0).rem_euclid(step) == 0).collect();
                            assert_eq!(fast, brute, "a={a} b={b} m={m}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn symmetric_residues() {
        assert_eq!(symmetric_residue(&big(7), &big(5)), big(2));
        assert_eq!(symmetric_residue(&big(4), &big(5)), big(1));
        assert_eq!(symmetric_residue(&big(10), &big(5)), big(0));
        assert_eq!(symmetric_residue(&big(3), &big(6)), big(3));
        assert_eq!(symmetric_residue(&big(-1), &big(6)), big(1));
    }
}
