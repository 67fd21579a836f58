//! Canonical representatives, isomorphism tests and genus enumeration.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::arith::{gcd_all, symmetric_residue};
use crate::local::{decide_at_primes, decide_same_finite_quotients, point_of, Decision};
use crate::orbits::{global_orbit_partition, global_orbit_witness, OrbitPartition};
use crate::params::{
    int_json, orbit_space_of, validate_membership, GroupType, ParamTuple, T123, T124, T125, T134, T135, T145, T235,
};
use crate::{Error, Result};

/// Initial window for the `D_k(Z)` closure when none is given.
pub const DEFAULT_WINDOW: u64 = 2;
/// Largest `d3` for which the `(2,1,1,1)` lattice search is attempted.
const D3_LIMIT: u64 = 1 << 12;
/// Largest candidate box scanned by genus enumeration.
const BOX_LIMIT: u64 = 1 << 22;

fn check_valid(t: &ParamTuple) -> Result<()> {
    let report = validate_membership(t, false);
    if report.valid {
        Ok(())
    } else {
        Err(Error::InvalidTuple(report))
    }
}

/// The chosen representative of the isomorphism class of `G(t)`.
pub fn canonicalize(t: &ParamTuple) -> Result<ParamTuple> {
    canonicalize_with_window(t, DEFAULT_WINDOW)
}

pub fn canonicalize_with_window(t: &ParamTuple, window: u64) -> Result<ParamTuple> {
    check_valid(t)?;
    let g = |tr| t.get(tr);
    Ok(match t.group_type() {
        GroupType::T211 => {
            let d = gcd_all([&g(T123), &g(T134)]);
            t.with(T124, symmetric_residue(&g(T124), &d))
        }
        GroupType::T311 => {
            let d1 = gcd_all([&g(T145), &g(T235)]);
            let t135 = symmetric_residue(&g(T135), &d1);
            let d2 = gcd_all([&g(T124), &t135, &d1]);
            t.with(T135, t135).with(T125, symmetric_residue(&g(T125), &d2))
        }
        GroupType::T2111 => {
            let (t124, t135, t125) = Lattice2111::new(t)?.canonical(t)?;
            t.with(T124, t124).with(T135, t135).with(T125, t125)
        }
        GroupType::T212 => {
            let space = orbit_space_of(t)?;
            let (m1, m2) = space.moduli();
            let pt = point_of(t, &m1.into(), &m2.into());
            let rep = global_orbit_partition(&space, window)?.representative(pt).expect("point lies in L");
            t.with(T124, rep.0.into()).with(T125, rep.1.into())
        }
    })
}

/// An exact isomorphism certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZWitness {
    /// Named integers solving the type's equations over `Z`.
    Integers(Vec<(&'static str, BigInt)>),
    /// `A ∈ D_k(Z)` with `det A = ±1` and `(t124, t125)·A ≡ (s124, s125)`.
    Matrix([[BigInt; 2]; 2]),
}

impl ZWitness {
    pub fn get(&self, name: &str) -> Option<&BigInt> {
        match self {
            ZWitness::Integers(v) => v.iter().find(|(n, _)| *n == name).map(|(_, v)| v),
            ZWitness::Matrix(_) => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            ZWitness::Integers(v) => Value::Object(v.iter().map(|(n, x)| (n.to_string(), int_json(x))).collect()),
            ZWitness::Matrix(m) => json!({
                "matrix": m.iter().map(|r| r.iter().map(int_json).collect::<Vec<_>>()).collect::<Vec<_>>()
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZEquivalence {
    pub equivalent: bool,
    pub witness: Option<ZWitness>,
    pub caveats: Vec<String>,
}

impl ZEquivalence {
    pub fn to_json(&self) -> Value {
        json!({
            "equivalent": self.equivalent,
            "witness": self.witness.as_ref().map(ZWitness::to_json),
            "caveats": self.caveats,
        })
    }
}

/// Whether `G(s) ≅ G(t)`, with an integral certificate when they are.
pub fn z_equivalent(s: &ParamTuple, t: &ParamTuple) -> Result<ZEquivalence> {
    z_equivalent_with_window(s, t, DEFAULT_WINDOW)
}

pub fn z_equivalent_with_window(s: &ParamTuple, t: &ParamTuple, window: u64) -> Result<ZEquivalence> {
    if s.group_type() != t.group_type() {
        return Err(Error::TypeMismatch(s.group_type().to_string(), t.group_type().to_string()));
    }
    check_valid(s)?;
    check_valid(t)?;
    let mut caveats = Vec::new();
    let no = |caveats| Ok(ZEquivalence { equivalent: false, witness: None, caveats });
    if !s.same_rigid(t) {
        return no(caveats);
    }
    let witness = match s.group_type() {
        GroupType::T211 => witness_211(s, t),
        GroupType::T311 => witness_311(s, t),
        GroupType::T2111 => Lattice2111::new(s)?.witness(s, t)?,
        GroupType::T212 => {
            let space = orbit_space_of(s)?;
            let partition = global_orbit_partition(&space, window)?;
            note_window(&partition, &mut caveats);
            let (m1, m2) = space.moduli();
            let (from, to) = (point_of(t, &m1.into(), &m2.into()), point_of(s, &m1.into(), &m2.into()));
            global_orbit_witness(&space, from, to, partition.window)?.map(ZWitness::Matrix)
        }
    };
    match witness {
        Some(w) => {
            assert!(verify_z_witness(s, t, &w), "isomorphism certificate failed exact verification");
            Ok(ZEquivalence { equivalent: true, witness: Some(w), caveats })
        }
        None => no(caveats),
    }
}

fn note_window(partition: &OrbitPartition, caveats: &mut Vec<String>) {
    if partition.stable {
        caveats.push(format!("D_k(Z) orbits from bounded-entry closure, stable at window {}", partition.window));
    } else {
        caveats.push(format!(
            "D_k(Z) orbits from bounded-entry closure did not stabilise by window {}; distinct orbits may merge at larger windows",
            partition.window
        ));
    }
}

/// Extended gcd over a list: `(g, c)` with `g = Σ c_i·a_i >= 0`.
fn bezout(values: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut g = BigInt::zero();
    let mut coeffs: Vec<BigInt> = Vec::with_capacity(values.len());
    for a in values {
        let e = g.extended_gcd(a);
        let (mut ng, mut x, mut y) = (e.gcd, e.x, e.y);
        if ng.is_negative() {
            ng = -ng;
            x = -x;
            y = -y;
        }
        for c in coeffs.iter_mut() {
            *c *= &x;
        }
        coeffs.push(y);
        g = ng;
    }
    (g, coeffs)
}

/// Coefficients `c` with `Σ c_i·a_i = target`, if any.
fn combination(values: &[BigInt], target: &BigInt) -> Option<Vec<BigInt>> {
    let (g, c) = bezout(values);
    if g.is_zero() {
        return target.is_zero().then(|| vec![BigInt::zero(); values.len()]);
    }
    if !target.is_multiple_of(&g) {
        return None;
    }
    let q = target / &g;
    Some(c.into_iter().map(|x| x * &q).collect())
}

fn signs() -> [BigInt; 2] {
    [BigInt::one(), -BigInt::one()]
}

/// `t124·u - s124 = s123·x + s134·y`.
fn witness_211(s: &ParamTuple, t: &ParamTuple) -> Option<ZWitness> {
    let gens = [s.get(T123), s.get(T134)];
    signs().into_iter().find_map(|u| {
        let c = combination(&gens, &(t.get(T124) * &u - s.get(T124)))?;
        let [x, y] = <[BigInt; 2]>::try_from(c).ok()?;
        Some(ZWitness::Integers(vec![("u", u), ("x", x), ("y", y)]))
    })
}

/// `t135·u - s135 = s145·x + s235·y` and
/// `t125·v - s125 = s124·c124 + s135·c135 + s145·c145 + s235·c235`.
fn witness_311(s: &ParamTuple, t: &ParamTuple) -> Option<ZWitness> {
    let first = signs().into_iter().find_map(|u| {
        let c = combination(&[s.get(T145), s.get(T235)], &(t.get(T135) * &u - s.get(T135)))?;
        Some((u, c))
    })?;
    let second = signs().into_iter().find_map(|v| {
        let gens = [s.get(T124), s.get(T135), s.get(T145), s.get(T235)];
        let c = combination(&gens, &(t.get(T125) * &v - s.get(T125)))?;
        Some((v, c))
    })?;
    let (u, c1) = first;
    let (v, c2) = second;
    let mut values = vec![("u", u), ("x", c1[0].clone()), ("y", c1[1].clone()), ("v", v)];
    for (name, c) in ["c124", "c135", "c145", "c235"].into_iter().zip(c2) {
        values.push((name, c));
    }
    Some(ZWitness::Integers(values))
}

/// Re-check an isomorphism certificate with exact integer arithmetic.
pub fn verify_z_witness(s: &ParamTuple, t: &ParamTuple, w: &ZWitness) -> bool {
    if !s.same_rigid(t) || s.group_type() != t.group_type() {
        return false;
    }
    let sg = |tr| s.get(tr);
    let tg = |tr| t.get(tr);
    let get = |n: &str| w.get(n).cloned();
    let unit = |u: &BigInt| u.abs().is_one();
    match (s.group_type(), w) {
        (GroupType::T211, ZWitness::Integers(_)) => (|| {
            let (u, x, y) = (get("u")?, get("x")?, get("y")?);
            Some(unit(&u) && tg(T124) * &u - sg(T124) == sg(T123) * x + sg(T134) * y)
        })()
        .unwrap_or(false),
        (GroupType::T311, ZWitness::Integers(_)) => (|| {
            let (u, x, y, v) = (get("u")?, get("x")?, get("y")?, get("v")?);
            let c = ["c124", "c135", "c145", "c235"].map(|n| get(n));
            let [c124, c135, c145, c235] = c.map(|v| v.unwrap_or_default());
            Some(
                unit(&u)
                    && unit(&v)
                    && tg(T135) * &u - sg(T135) == sg(T145) * x + sg(T235) * y
                    && tg(T125) * &v - sg(T125)
                        == sg(T124) * c124 + sg(T135) * c135 + sg(T145) * c145 + sg(T235) * c235,
            )
        })()
        .unwrap_or(false),
        (GroupType::T2111, ZWitness::Integers(_)) => (|| {
            let [u, v, wv, x, y, z] = ["u", "v", "w", "x", "y", "z"].map(|n| get(n));
            let (u, v, wv, x, y, z) = (u?, v?, wv?, x?, y?, z?);
            let d3 = gcd_all([&sg(T123), &sg(T145), &sg(T235)]);
            Some(
                unit(&u)
                    && tg(T124) * &u == sg(T124) - sg(T123) * &wv + sg(T134) * &v
                    && tg(T135) * &u == sg(T135) + sg(T145) * &wv + sg(T134) * &x + sg(T235) * y
                    && tg(T125) * &u * &u
                        == sg(T125) + sg(T135) * &v + sg(T124) * &x + sg(T134) * &v * &x + d3 * z,
            )
        })()
        .unwrap_or(false),
        (GroupType::T212, ZWitness::Matrix(a)) => {
            let Ok(space) = orbit_space_of(s) else { return false };
            let (m1, m2) = space.moduli();
            let (m1, m2) = (BigInt::from(m1), BigInt::from(m2));
            let det = &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0];
            let (x, y) = (tg(T124), tg(T125));
            det.abs().is_one()
                && a[0][1].is_multiple_of(space.k())
                && (&x * &a[0][0] + &y * &a[1][0] - sg(T124)).is_multiple_of(&m1)
                && (&x * &a[0][1] + &y * &a[1][1] - sg(T125)).is_multiple_of(&m2)
        }
        _ => false,
    }
}

/// Exact orbit computations for `~_Z` on `(2,1,1,1)` tuples with fixed rigid
/// entries.
///
/// The first congruence pins `t124` modulo `d = gcd(s123, s134)` and
/// parameterises `(v, w)` by one integer `n`; the second pins `t135` modulo
/// `g2 = gcd(s145·s134/d, s134, s235)` and leaves `(n, x, y)` on a rank two
/// affine lattice; the third is then a finite search modulo `d3`.
struct Lattice2111 {
    s123: BigInt,
    s134: BigInt,
    s145: BigInt,
    d: BigInt,
    d3: BigInt,
    g2: BigInt,
    /// Unimodular `U` with `(s145·s134/d, s134, s235)·U = (g2, 0, 0)`.
    basis: [[BigInt; 3]; 3],
    /// Bezout coefficients `s123·e - s134·f = d`.
    e: BigInt,
    f: BigInt,
}

impl Lattice2111 {
    fn new(rigid: &ParamTuple) -> Result<Self> {
        let g = |tr| rigid.get(tr);
        let (s123, s134, s145, s235) = (g(T123), g(T134), g(T145), g(T235));
        let (d, c) = bezout(&[s123.clone(), s134.clone()]);
        let (e, f) = (c[0].clone(), -c[1].clone());
        let d3 = gcd_all([&s123, &s145, &s235]);
        if d3.to_u64().map_or(true, |v| v > D3_LIMIT) {
            return Err(Error::Limit(format!("d3 = {d3} is too large for the lattice search")));
        }
        let a = [&s145 * &s134 / &d, s134.clone(), s235];
        let (g2, basis) = unimodular_reduction(a);
        Ok(Lattice2111 { s123, s134, s145, d, d3, g2, basis, e, f })
    }

    /// `(v, w)` at lattice parameter `n` for the fixed `(u, t124)`, or `None`
    /// when the first equation has no solution.
    fn vw_base(&self, s124: &BigInt, t124: &BigInt, u: &BigInt) -> Option<(BigInt, BigInt)> {
        // s123·w - s134·v = s124 - t124·u
        let c1 = s124 - t124 * u;
        if !c1.is_multiple_of(&self.d) {
            return None;
        }
        let q = &c1 / &self.d;
        Some((&self.f * &q, &self.e * &q))
    }

    /// Affine lattice `(n, x, y) = U·(c2/g2, i, j)`, or `None` if `g2 ∤ c2`.
    fn nxy(&self, c2: &BigInt, i: &BigInt, j: &BigInt) -> Option<[BigInt; 3]> {
        if !c2.is_multiple_of(&self.g2) {
            return None;
        }
        let coords = [c2 / &self.g2, i.clone(), j.clone()];
        Some(std::array::from_fn(|r| (0..3).map(|c| &self.basis[r][c] * &coords[c]).sum()))
    }

    /// Search the third equation over one period of the lattice; calls `f`
    /// with `(v, w, x, y, residual)` where `t125·u² - residual` is the
    /// right-hand side without the `d3·z` term.
    fn scan<F>(&self, s: &ParamTuple, u: &BigInt, t124: &BigInt, t135: &BigInt, mut f: F) -> Option<()>
    where
        F: FnMut([BigInt; 4], BigInt) -> bool,
    {
        let (v0, w0) = self.vw_base(&s.get(T124), t124, u)?;
        let c2 = t135 * u - s.get(T135) - &self.s145 * &w0;
        let (dv, dw) = (&self.s123 / &self.d, &self.s134 / &self.d);
        let n3 = self.d3.to_u64().expect("bounded");
        for i in 0..n3 {
            for j in 0..n3 {
                let [n, x, y] = self.nxy(&c2, &i.into(), &j.into())?;
                let v = &v0 + &n * &dv;
                let w = &w0 + &n * &dw;
                let rhs = s.get(T125) + s.get(T135) * &v + s.get(T124) * &x + &self.s134 * &v * &x;
                if f([v, w, x, y], rhs) {
                    return Some(());
                }
            }
        }
        None
    }

    fn canonical(&self, s: &ParamTuple) -> Result<(BigInt, BigInt, BigInt)> {
        let s124 = s.get(T124);
        let t124 = symmetric_residue(&s124, &self.d);
        let mut best: Option<(BigInt, BigInt)> = None;
        for u in signs() {
            let Some((_, w0)) = self.vw_base(&s124, &t124, &u) else { continue };
            let t135 = (&u * (s.get(T135) + &self.s145 * &w0)).mod_floor(&self.g2);
            let mut t125: Option<BigInt> = None;
            self.scan(s, &u, &t124, &t135, |_, rhs| {
                let r = rhs.mod_floor(&self.d3);
                let done = r.is_zero();
                if t125.as_ref().map_or(true, |b| r < *b) {
                    t125 = Some(r);
                }
                done
            });
            let cand = (t135, t125.expect("lattice is nonempty once t135 is reachable"));
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand);
            }
        }
        let (t135, t125) = best.expect("t124 is reachable for some sign");
        Ok((t124, t135, t125))
    }

    fn witness(&self, s: &ParamTuple, t: &ParamTuple) -> Result<Option<ZWitness>> {
        let (t124, t135, t125) = (t.get(T124), t.get(T135), t.get(T125));
        for u in signs() {
            let mut found = None;
            self.scan(s, &u, &t124, &t135, |[v, w, x, y], rhs| {
                let r = &t125 - rhs;
                if r.is_multiple_of(&self.d3) {
                    found = Some([v, w, x, y, r / &self.d3]);
                    true
                } else {
                    false
                }
            });
            if let Some([v, w, x, y, z]) = found {
                let vals = vec![("u", u), ("v", v), ("w", w), ("x", x), ("y", y), ("z", z)];
                return Ok(Some(ZWitness::Integers(vals)));
            }
        }
        Ok(None)
    }

    /// Bounds of the box that contains every canonical free triple.
    fn box_bounds(&self) -> [BigInt; 3] {
        [&self.d / 2 + 1, self.g2.clone(), self.d3.clone()]
    }
}

/// `(g, U)` with `U` unimodular and `a·U = (g, 0, 0)`, `g >= 0`.
fn unimodular_reduction(a: [BigInt; 3]) -> (BigInt, [[BigInt; 3]; 3]) {
    let mut b = a;
    let mut u: [[BigInt; 3]; 3] =
        std::array::from_fn(|r| std::array::from_fn(|c| if r == c { BigInt::one() } else { BigInt::zero() }));
    for j in 1..3 {
        if b[j].is_zero() {
            continue;
        }
        if b[0].is_zero() {
            b.swap(0, j);
            for row in u.iter_mut() {
                row.swap(0, j);
            }
            continue;
        }
        let e = b[0].extended_gcd(&b[j]);
        let (g, x, y) = (e.gcd, e.x, e.y);
        let (p, q) = (&b[j] / &g, &b[0] / &g);
        for row in u.iter_mut() {
            let (c0, cj) = (row[0].clone(), row[j].clone());
            row[0] = &x * &c0 + &y * &cj;
            row[j] = -&p * &c0 + &q * &cj;
        }
        b[0] = g;
        b[j] = BigInt::zero();
    }
    if b[0].is_negative() {
        b[0] = -b[0].clone();
        for row in u.iter_mut() {
            row[0] = -row[0].clone();
        }
    }
    (b[0].clone(), u)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenusResult {
    /// The canonicalized input.
    pub input: ParamTuple,
    /// Canonical members in ascending order of their free entries.
    pub members: Vec<ParamTuple>,
    /// The decision of `input` against each member.
    pub witnesses: Vec<Decision>,
    pub caveats: Vec<String>,
}

impl GenusResult {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "input": self.input.to_json(),
            "size": self.size(),
            "members": self.members.iter().map(ParamTuple::to_json).collect::<Vec<_>>(),
            "witnesses": self.witnesses.iter().map(Decision::to_json).collect::<Vec<_>>(),
            "caveats": self.caveats,
        })
    }
}

/// All isomorphism classes with the same finite quotients as `G(s)`.
pub fn enumerate_genus(s: &ParamTuple) -> Result<GenusResult> {
    enumerate_genus_with_window(s, DEFAULT_WINDOW)
}

pub fn enumerate_genus_with_window(s: &ParamTuple, window: u64) -> Result<GenusResult> {
    enumerate_genus_with(s, window, None)
}

/// As [`enumerate_genus_with_window`], but with `primes`, when given,
/// replacing the relevant primes in every decision.
pub fn enumerate_genus_with(s: &ParamTuple, window: u64, primes: Option<&[u64]>) -> Result<GenusResult> {
    let input = canonicalize_with_window(s, window)?;
    let mut caveats = Vec::new();
    let g = |tr| input.get(tr);
    let candidates: Vec<ParamTuple> = match input.group_type() {
        GroupType::T211 => {
            let d = gcd_all([&g(T123), &g(T134)]);
            let half = bounded(&d / 2 + 1)?;
            (0..half).map(|i| input.with(T124, i.into())).collect()
        }
        GroupType::T311 => {
            let d1 = gcd_all([&g(T145), &g(T235)]);
            let mut out = Vec::new();
            for a in 0..bounded(&d1 / 2 + 1)? {
                let t135 = BigInt::from(a);
                let d2 = gcd_all([&g(T124), &t135, &d1]);
                for b in 0..bounded(&d2 / 2 + 1)? {
                    out.push(input.with(T135, t135.clone()).with(T125, b.into()));
                }
            }
            out
        }
        GroupType::T2111 => {
            let lattice = Lattice2111::new(&input)?;
            let [n1, n2, n3] = lattice.box_bounds().map(|b| bounded(b));
            let (n1, n2, n3) = (n1?, n2?, n3?);
            if n1.saturating_mul(n2).saturating_mul(n3) > BOX_LIMIT {
                return Err(Error::Limit("candidate box for (2,1,1,1) is too large".into()));
            }
            let mut out = Vec::new();
            for a in 0..n1 {
                for b in 0..n2 {
                    for c in 0..n3 {
                        let cand = input.with(T124, a.into()).with(T135, b.into()).with(T125, c.into());
                        let (x, y, z) = lattice.canonical(&cand)?;
                        if (x, y, z) == (a.into(), b.into(), c.into()) {
                            out.push(cand);
                        }
                    }
                }
            }
            out
        }
        GroupType::T212 => {
            let space = orbit_space_of(&input)?;
            let partition = global_orbit_partition(&space, window)?;
            note_window(&partition, &mut caveats);
            partition
                .representatives()
                .into_iter()
                .map(|(x, y)| input.with(T124, x.into()).with(T125, y.into()))
                .collect()
        }
    };
    let mut members = Vec::new();
    let mut witnesses = Vec::new();
    for c in candidates {
        let d = match primes {
            Some(ps) => decide_at_primes(&input, &c, ps)?,
            None => decide_same_finite_quotients(&input, &c)?,
        };
        if d.equal {
            members.push(c);
            witnesses.push(d);
        }
    }
    if let Some(ps) = primes {
        caveats.push(format!("prime set overridden: {ps:?}"));
    }
    Ok(GenusResult { input, members, witnesses, caveats })
}

fn bounded(n: BigInt) -> Result<u64> {
    n.to_u64()
        .filter(|&v| v <= BOX_LIMIT)
        .ok_or_else(|| Error::Limit(format!("candidate range of size {n} is too large")))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenusTableRow {
    pub p: u64,
    pub size: usize,
}

/// Genus sizes of `G(t)` with `t123 = t134 = p`, `t124 = 1`.
pub fn genus_size_table(group_type: GroupType, primes: &[u64]) -> Result<Vec<GenusTableRow>> {
    if group_type != GroupType::T211 {
        return Err(Error::UnsupportedType(format!(
            "genus tables are defined for type (2,1,1) only; use `genus` for single ({group_type}) instances"
        )));
    }
    primes
        .iter()
        .map(|&p| {
            crate::arith::require_prime(p)?;
            let p_i = i64::try_from(p).map_err(|_| Error::Limit(format!("prime {p} too large")))?;
            let size = enumerate_genus(&ParamTuple::t211(p_i, p_i, 1))?.size();
            Ok(GenusTableRow { p, size })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_examples() {
        assert_eq!(canonicalize(&ParamTuple::t211(5, 5, 7)).unwrap(), ParamTuple::t211(5, 5, 2));
        assert_eq!(canonicalize(&ParamTuple::t211(5, 5, 4)).unwrap(), ParamTuple::t211(5, 5, 1));
        let c = ParamTuple::t211(6, 4, 1);
        assert_eq!(canonicalize(&c).unwrap(), c);
        assert_eq!(
            canonicalize(&ParamTuple::t2111(2, 2, 2, 0, 0, 0, 3)).unwrap(),
            ParamTuple::t2111(2, 2, 2, 0, 0, 0, 1)
        );
        assert_eq!(canonicalize(&ParamTuple::t311(2, 6, 4, 5, 3)).unwrap(), ParamTuple::t311(2, 6, 4, 1, 0));
    }

    #[test]
    fn z_equivalence_examples() {
        let (a, b, c) = (ParamTuple::t211(5, 5, 1), ParamTuple::t211(5, 5, 4), ParamTuple::t211(5, 5, 2));
        let r = z_equivalent(&a, &b).unwrap();
        assert!(r.equivalent);
        assert_eq!(r.witness.unwrap().get("u"), Some(&BigInt::from(-1)));
        assert!(!z_equivalent(&a, &c).unwrap().equivalent);
        assert!(decide_same_finite_quotients(&a, &c).unwrap().equal);
        assert!(z_equivalent(&a, &a).unwrap().equivalent);
    }

    #[test]
    fn witnesses_2111_verify() {
        let s = ParamTuple::t2111(6, 4, 2, 4, 3, 1, 5);
        let c = canonicalize(&s).unwrap();
        let r = z_equivalent(&s, &c).unwrap();
        assert!(r.equivalent);
        assert!(verify_z_witness(&s, &c, r.witness.as_ref().unwrap()));
    }

    #[test]
    fn unimodular_reduction_is_correct() {
        let a = [BigInt::from(12), BigInt::from(18), BigInt::from(0)];
        let (g, u) = unimodular_reduction(a.clone());
        assert_eq!(g, BigInt::from(6));
        for c in 0..3 {
            let dot: BigInt = (0..3).map(|r| &a[r] * &u[r][c]).sum();
            assert_eq!(dot, if c == 0 { g.clone() } else { BigInt::zero() });
        }
    }

    #[test]
    fn genus_examples() {
        let r = enumerate_genus(&ParamTuple::t211(5, 5, 1)).unwrap();
        assert_eq!(r.members, vec![ParamTuple::t211(5, 5, 1), ParamTuple::t211(5, 5, 2)]);
        assert_eq!(enumerate_genus(&ParamTuple::t211(2, 3, 0)).unwrap().size(), 1);
        assert_eq!(enumerate_genus(&ParamTuple::t211(4, 4, 1)).unwrap().members, vec![ParamTuple::t211(4, 4, 1)]);
    }

    #[test]
    fn table_examples() {
        let rows = genus_size_table(GroupType::T211, &[3, 5, 7, 11, 13]).unwrap();
        assert_eq!(rows.iter().map(|r| r.size).collect::<Vec<_>>(), vec![1, 2, 3, 5, 6]);
        assert!(genus_size_table(GroupType::T311, &[5]).is_err());
    }
}
