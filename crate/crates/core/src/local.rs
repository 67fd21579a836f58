//! Per-prime solvability checks and the finite-quotient deciders.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::arith::{gcd_all, mod_inverse, prime_power, require_prime, val, valuation_unchecked, Valuation};
use crate::orbits::{local_orbit_equivalent, OrbitWitness, Point};
use crate::params::{
    int_json, profile_unchecked, validate_membership, GroupType, Moduli, ModulusProfile, ParamTuple, T123, T124,
    T125, T134, T135, T145, T235,
};
use crate::{Error, Result};

/// Largest modulus the coupled `(2,1,1,1)` search will enumerate.
const COUPLED_MODULUS_LIMIT: i128 = 1 << 20;

/// A named residue with its modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residue {
    pub name: &'static str,
    pub value: BigInt,
    pub modulus: BigInt,
}

/// Residues witnessing solvability of the congruences at one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessAssignment {
    pub p: u64,
    pub values: Vec<Residue>,
}

impl WitnessAssignment {
    pub fn get(&self, name: &str) -> Option<&BigInt> {
        self.values.iter().find(|r| r.name == name).map(|r| &r.value)
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("p".into(), json!(self.p));
        let mut moduli = Map::new();
        for r in &self.values {
            m.insert(r.name.into(), int_json(&r.value));
            moduli.insert(r.name.into(), int_json(&r.modulus));
        }
        m.insert("moduli".into(), Value::Object(moduli));
        Value::Object(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalWitness {
    Residues(WitnessAssignment),
    Matrix(OrbitWitness),
}

impl LocalWitness {
    pub fn to_json(&self) -> Value {
        match self {
            LocalWitness::Residues(w) => w.to_json(),
            LocalWitness::Matrix(w) => w.to_json(),
        }
    }
}

/// Outcome at one prime: a witness, or the reason none exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeCheck {
    pub p: u64,
    pub exponents: Vec<u32>,
    pub witness: Option<LocalWitness>,
    pub reason: Option<String>,
}

impl PrimeCheck {
    pub fn passed(&self) -> bool {
        self.witness.is_some()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "exponents": self.exponents,
            "witness": self.witness.as_ref().map(LocalWitness::to_json),
            "reason": self.reason,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub group_type: GroupType,
    pub equal: bool,
    pub rigid_match: bool,
    /// Checked primes in ascending order.
    pub per_prime: Vec<PrimeCheck>,
    pub caveats: Vec<String>,
}

impl Decision {
    pub fn failing_prime(&self) -> Option<u64> {
        self.per_prime.iter().find(|c| !c.passed()).map(|c| c.p)
    }

    pub fn witnesses(&self) -> Vec<&LocalWitness> {
        self.per_prime.iter().filter_map(|c| c.witness.as_ref()).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "type": self.group_type.label(),
            "equal": self.equal,
            "rigid_match": self.rigid_match,
            "failing_prime": self.failing_prime(),
            "per_prime": self.per_prime.iter().map(PrimeCheck::to_json).collect::<Vec<_>>(),
            "caveats": self.caveats,
        })
    }
}

/// Find the least unit `w` modulo `p^k` with `a·w ≡ b (mod p^k)`.
///
/// Such a `w` exists iff `min(ν_p(a), k) = min(ν_p(b), k)`. For `k = 0`
/// the answer is `w = 1`.
pub fn unit_congruence_solvable(a: &BigInt, b: &BigInt, p: u64, k: u32) -> Result<Option<BigInt>> {
    require_prime(p)?;
    Ok(unit_witness(a, b, p, k))
}

fn unit_witness(a: &BigInt, b: &BigInt, p: u64, k: u32) -> Option<BigInt> {
    let e = valuation_unchecked(a, p).capped(k);
    if e != valuation_unchecked(b, p).capped(k) {
        return None;
    }
    if e == k {
        return Some(BigInt::one());
    }
    let pe = prime_power(p, e);
    let modulus = prime_power(p, k - e);
    let a1 = (a / &pe).mod_floor(&modulus);
    let b1 = (b / &pe).mod_floor(&modulus);
    let inv = mod_inverse(&a1, &modulus).expect("p-free part is a unit");
    Some((b1 * inv).mod_floor(&modulus))
}

/// Search for `u, v, w, x, y, z` modulo `p^(α+β)` with `p ∤ u` solving
///
/// ```text
/// t124·u   ≡ s124 - s123·w + s134·v
/// t135·u   ≡ s135 + s145·w + s134·x + s235·y
/// t125·u²  ≡ s125 + s135·v + s124·x + s134·v·x + d3·z
/// ```
///
/// where `α = ν_p(d3(s))` and `β = ν_p(s134)`. Returns the lexicographically
/// least solution with every residue in `[0, p^(α+β))`.
pub fn coupled_system_solvable_2111(s: &ParamTuple, t: &ParamTuple, p: u64) -> Result<Option<WitnessAssignment>> {
    require_prime(p)?;
    for x in [s, t] {
        if x.group_type() != GroupType::T2111 {
            return Err(Error::TypeMismatch(GroupType::T2111.to_string(), x.group_type().to_string()));
        }
    }
    if !s.same_rigid(t) {
        return Err(Error::InvalidArgument("rigid entries 123, 134, 145, 235 differ".into()));
    }
    let d3 = gcd_all([&s.get(T123), &s.get(T145), &s.get(T235)]);
    coupled_search(s, t, p, &d3)
}

fn coupled_search(s: &ParamTuple, t: &ParamTuple, p: u64, d3: &BigInt) -> Result<Option<WitnessAssignment>> {
    let alpha = val(d3, p);
    let beta = val(&s.get(T134), p);
    let modulus = prime_power(p, alpha + beta);
    let big_p = modulus
        .to_i128()
        .filter(|m| *m <= COUPLED_MODULUS_LIMIT)
        .ok_or_else(|| Error::Limit(format!("local modulus {modulus} is too large to enumerate")))?;
    let pa = prime_power(p, alpha).to_i128().expect("divides the modulus");
    let r = |v: BigInt| v.mod_floor(&modulus).to_i128().expect("reduced");
    let [s123, s134, s145, s235, s124, s135, s125] =
        [T123, T134, T145, T235, T124, T135, T125].map(|tr| r(s.get(tr)));
    let [t124, t135, t125] = [T124, T135, T125].map(|tr| r(t.get(tr)));
    let d3 = r(d3.clone());
    let m = big_p;
    let red = |v: i128| v.rem_euclid(m);
    let pi = p as i128;

    for u in (1..m.max(2)).filter(|u| u % pi != 0) {
        for v in 0..pa {
            let rhs1 = red(s134 * v - t124 * u + s124);
            let Some((w0, w_step)) = solve_mod(s123, rhs1, m) else { continue };
            let mut w = w0;
            while w < m {
                for x in 0..pa {
                    let r3 = red(t125 * u % m * u - s125 - s124 * x - s134 * v % m * x - s135 * v);
                    let Some((z, _)) = solve_mod(d3, r3, m) else { continue };
                    let r2 = red(t135 * u - s135 - s145 * w - s134 * x);
                    let Some((y, _)) = solve_mod(s235, r2, m) else { continue };
                    let values = [("u", u), ("v", v), ("w", w), ("x", x), ("y", y), ("z", z)]
                        .into_iter()
                        .map(|(name, v)| Residue { name, value: BigInt::from(v), modulus: modulus.clone() })
                        .collect();
                    return Ok(Some(WitnessAssignment { p, values }));
                }
                w += w_step;
            }
        }
    }
    Ok(None)
}

/// Least nonnegative solution and period of `a·x ≡ b (mod m)`, `b` reduced.
fn solve_mod(a: i128, b: i128, m: i128) -> Option<(i128, i128)> {
    let a = a.rem_euclid(m);
    let g = a.gcd(&m);
    if b % g != 0 {
        return None;
    }
    let step = m / g;
    if step == 1 {
        return Some((0, 1));
    }
    let inv = inverse_mod(a / g, step);
    Some(((b / g) % step * inv % step, step))
}

fn inverse_mod(a: i128, m: i128) -> i128 {
    let (mut r0, mut r1, mut s0, mut s1) = (a, m, 1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(m)
}

/// Whether `G(s)` and `G(t)` have the same finite quotients.
///
/// Rigid entries must agree exactly; the remaining conditions are checked at
/// every prime dividing the governing moduli of `s`, since at any other prime
/// they hold trivially.
pub fn decide_same_finite_quotients(s: &ParamTuple, t: &ParamTuple) -> Result<Decision> {
    decide_inner(s, t, None, None)
}

/// As [`decide_same_finite_quotients`], but checking exactly `primes`.
pub fn decide_at_primes(s: &ParamTuple, t: &ParamTuple, primes: &[u64]) -> Result<Decision> {
    for &p in primes {
        require_prime(p)?;
    }
    decide_inner(s, t, Some(primes), None)
}

/// Decide against a supplied profile of `s` instead of a recomputed one.
pub(crate) fn decide_with_profile(s: &ParamTuple, t: &ParamTuple, profile: &ModulusProfile) -> Result<Decision> {
    decide_inner(s, t, None, Some(profile))
}

fn decide_inner(
    s: &ParamTuple,
    t: &ParamTuple,
    primes: Option<&[u64]>,
    profile: Option<&ModulusProfile>,
) -> Result<Decision> {
    let gt = s.group_type();
    if t.group_type() != gt {
        return Err(Error::TypeMismatch(gt.to_string(), t.group_type().to_string()));
    }
    let mut caveats = Vec::new();
    for (name, x) in [("s", s), ("t", t)] {
        let report = validate_membership(x, false);
        if !report.valid {
            return Err(Error::InvalidTuple(report));
        }
        if !validate_membership(x, true).valid {
            caveats.push(format!(
                "{name} is not the canonical representative of its class; the verdict is the stated local arithmetic relation"
            ));
        }
    }
    if !s.same_rigid(t) {
        return Ok(Decision { group_type: gt, equal: false, rigid_match: false, per_prime: Vec::new(), caveats });
    }
    let computed;
    let profile = match profile {
        Some(p) => p,
        None => {
            computed = profile_unchecked(s)?;
            &computed
        }
    };
    let primes: Vec<u64> = match primes {
        Some(ps) => {
            caveats.push(format!("prime set overridden: {ps:?}"));
            let mut ps = ps.to_vec();
            ps.sort_unstable();
            ps.dedup();
            ps
        }
        None => profile.relevant_primes.clone(),
    };
    let mut per_prime = Vec::with_capacity(primes.len());
    for p in primes {
        per_prime.push(check_prime(s, t, profile, p)?);
    }
    let equal = per_prime.iter().all(PrimeCheck::passed);
    Ok(Decision { group_type: gt, equal, rigid_match: true, per_prime, caveats })
}

fn check_prime(s: &ParamTuple, t: &ParamTuple, profile: &ModulusProfile, p: u64) -> Result<PrimeCheck> {
    let exponents = profile.exponents(p);
    let pk = |k: u32| prime_power(p, k);
    let (witness, reason) = match &profile.moduli {
        Moduli::T211 { .. } => {
            let k = exponents[0];
            match unit_witness(&t.get(T124), &s.get(T124), p, k) {
                Some(w) => (Some(residues(p, vec![("w", w, pk(k))])), None),
                None => (None, Some(format!("no unit w with {p}^{k} | t124·w - s124"))),
            }
        }
        Moduli::T311 { .. } => {
            let (k1, k2) = (exponents[0], exponents[1]);
            let w = unit_witness(&t.get(T135), &s.get(T135), p, k1);
            let v = unit_witness(&t.get(T125), &s.get(T125), p, k2);
            match (w, v) {
                (Some(w), Some(v)) => (Some(residues(p, vec![("w", w, pk(k1)), ("v", v, pk(k2))])), None),
                (None, _) => (None, Some(format!("no unit w with {p}^{k1} | t135·w - s135"))),
                (_, None) => (None, Some(format!("no unit v with {p}^{k2} | t125·v - s125"))),
            }
        }
        Moduli::T2111 { d3, .. } => match coupled_search(s, t, p, d3)? {
            Some(w) => (Some(LocalWitness::Residues(w)), None),
            None => (
                None,
                Some(format!("coupled congruences have no solution modulo {}", pk(exponents[0] + exponents[1]))),
            ),
        },
        Moduli::T212 { m1, m2, .. } => {
            let space = crate::params::orbit_space_of(t)?;
            let pt = |x: &ParamTuple| point_of(x, m1, m2);
            match local_orbit_equivalent(&space, pt(t), pt(s), p)? {
                Some(w) => (Some(LocalWitness::Matrix(w)), None),
                None => (None, Some(format!("points lie in different D_k(Z_{p})-orbits"))),
            }
        }
    };
    Ok(PrimeCheck { p, exponents, witness, reason })
}

/// `(t124 mod m1, t125 mod m2)`.
pub(crate) fn point_of(x: &ParamTuple, m1: &BigInt, m2: &BigInt) -> Point {
    let r = |v: BigInt, m: &BigInt| v.mod_floor(m).to_u64().expect("orbit space moduli fit in u64");
    (r(x.get(T124), m1), r(x.get(T125), m2))
}

fn residues(p: u64, values: Vec<(&'static str, BigInt, BigInt)>) -> LocalWitness {
    LocalWitness::Residues(WitnessAssignment {
        p,
        values: values.into_iter().map(|(name, value, modulus)| Residue { name, value, modulus }).collect(),
    })
}

/// Exact check of a `(2,1,1,1)` witness against the three congruences.
pub fn verify_coupled_witness(s: &ParamTuple, t: &ParamTuple, w: &WitnessAssignment) -> bool {
    let get = |n: &str| w.get(n).cloned().unwrap_or_default();
    let (u, v, wv, x, y, z) = (get("u"), get("v"), get("w"), get("x"), get("y"), get("z"));
    let modulus = match w.values.first() {
        Some(r) => r.modulus.clone(),
        None => return false,
    };
    let d3 = gcd_all([&s.get(T123), &s.get(T145), &s.get(T235)]);
    let g = |tr| s.get(tr);
    let divides = |e: BigInt| e.mod_floor(&modulus).is_zero();
    valuation_unchecked(&u, w.p) == Valuation::Finite(0)
        && divides(t.get(T124) * &u - g(T124) + g(T123) * &wv - g(T134) * &v)
        && divides(t.get(T135) * &u - g(T135) - g(T145) * &wv - g(T134) * &x - g(T235) * &y)
        && divides(
            t.get(T125) * &u * &u - g(T125) - g(T135) * &v - g(T124) * &x - g(T134) * &v * &x - &d3 * &z,
        )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn unit_congruence_examples() {
        assert_eq!(unit_congruence_solvable(&b(2), &b(1), 5, 1).unwrap(), Some(b(3)));
        assert_eq!(unit_congruence_solvable(&b(1), &b(0), 5, 1).unwrap(), None);
        assert_eq!(unit_congruence_solvable(&b(0), &b(0), 7, 2).unwrap(), Some(b(1)));
        assert_eq!(unit_congruence_solvable(&b(3), &b(9), 2, 0).unwrap(), Some(b(1)));
        assert!(unit_congruence_solvable(&b(1), &b(1), 6, 1).is_err());
    }

    #[test]
    fn coupled_examples() {
        let s = ParamTuple::t2111(2, 2, 2, 0, 0, 0, 3);
        let t = ParamTuple::t2111(2, 2, 2, 0, 0, 0, 1);
        let w = coupled_system_solvable_2111(&s, &t, 2).unwrap().unwrap();
        let vals: Vec<_> = ["u", "v", "w", "x", "y", "z"].iter().map(|n| w.get(n).unwrap().clone()).collect();
        assert_eq!(vals, [1, 0, 0, 0, 0, 1].map(b));
        assert_eq!(w.values[0].modulus, b(4));
        assert!(verify_coupled_witness(&s, &t, &w));

        let s = ParamTuple::t2111(2, 2, 2, 0, 0, 0, 1);
        let t = ParamTuple::t2111(2, 2, 2, 0, 0, 0, 0);
        assert_eq!(coupled_system_solvable_2111(&s, &t, 2).unwrap(), None);

        let w = coupled_system_solvable_2111(&s, &s, 2).unwrap().unwrap();
        assert_eq!(w.get("u"), Some(&b(1)));
        assert!(w.values[1..].iter().all(|r| r.value.is_zero()));

        let other = ParamTuple::t2111(4, 2, 2, 0, 0, 0, 0);
        assert!(matches!(coupled_system_solvable_2111(&s, &other, 2), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn decider_examples() {
        let d = decide_same_finite_quotients(&ParamTuple::t211(5, 5, 1), &ParamTuple::t211(5, 5, 2)).unwrap();
        assert!(d.equal);
        let LocalWitness::Residues(w) = d.per_prime[0].witness.as_ref().unwrap() else { panic!() };
        assert_eq!((w.p, w.get("w")), (5, Some(&b(3))));

        let d = decide_same_finite_quotients(&ParamTuple::t211(5, 5, 0), &ParamTuple::t211(5, 5, 1)).unwrap();
        assert!(!d.equal);
        assert_eq!(d.failing_prime(), Some(5));

        let d = decide_same_finite_quotients(&ParamTuple::t311(3, 2, 2, 0, 0), &ParamTuple::t311(6, 2, 2, 0, 0))
            .unwrap();
        assert!(!d.equal && !d.rigid_match);

        let d = decide_same_finite_quotients(
            &ParamTuple::t2111(2, 2, 2, 0, 0, 0, 3),
            &ParamTuple::t2111(2, 2, 2, 0, 0, 0, 1),
        )
        .unwrap();
        assert!(d.equal);
        assert_eq!(d.per_prime.iter().map(|c| c.p).collect::<Vec<_>>(), vec![2]);

        let d = decide_same_finite_quotients(&ParamTuple::t212(2, 2, 4, 1, 0), &ParamTuple::t212(2, 2, 4, 1, 1))
            .unwrap();
        assert!(!d.equal);
        assert_eq!(d.failing_prime(), Some(2));
    }

    #[test]
    fn type_mismatch_is_an_error() {
        let r = decide_same_finite_quotients(&ParamTuple::t211(5, 5, 1), &ParamTuple::t311(1, 1, 1, 0, 0));
        assert!(matches!(r, Err(Error::TypeMismatch(..))));
    }

    #[test]
    fn overridden_primes_are_flagged() {
        let s = ParamTuple::t211(5, 5, 1);
        let d = decide_at_primes(&s, &ParamTuple::t211(5, 5, 2), &[3, 5]).unwrap();
        assert!(d.equal);
        assert_eq!(d.per_prime.len(), 2);
        assert!(d.caveats.iter().any(|c| c.contains("overridden")));
    }
}
