//! Group types, parameter tuples and the gcd/valuation profiles consumed by
//! the deciders.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::arith::{gcd_all, prime_factors, val};
use crate::{genus, orbits, Error, Result};

/// An index triple `(i, j, k)` with `1 <= i < j < k <= n`, naming the
/// exponent of `g_k` in `[g_j, g_i]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple(pub u8, pub u8, pub u8);

impl Triple {
    pub fn is_ordered(self, n: usize) -> bool {
        1 <= self.0 && self.0 < self.1 && self.1 < self.2 && (self.2 as usize) <= n
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.0, self.1, self.2)
    }
}

impl FromStr for Triple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits: Vec<u8> = s
            .chars()
            .filter(|c| !matches!(c, ',' | ' ' | '(' | ')'))
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::Parse(format!("bad triple {s:?}")))
            })
            .collect::<Result<_>>()?;
        match digits[..] {
            [i, j, k] => Ok(Triple(i, j, k)),
            _ => Err(Error::Parse(format!("bad triple {s:?}"))),
        }
    }
}

/// Shorthand for writing triples as `t(1, 2, 3)`.
pub const fn t(i: u8, j: u8, k: u8) -> Triple {
    Triple(i, j, k)
}

pub const T123: Triple = t(1, 2, 3);
pub const T124: Triple = t(1, 2, 4);
pub const T125: Triple = t(1, 2, 5);
pub const T134: Triple = t(1, 3, 4);
pub const T135: Triple = t(1, 3, 5);
pub const T145: Triple = t(1, 4, 5);
pub const T234: Triple = t(2, 3, 4);
pub const T235: Triple = t(2, 3, 5);

/// The four isolator types handled by the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupType {
    T211,
    T311,
    T2111,
    T212,
}

impl GroupType {
    pub const ALL: [GroupType; 4] = [GroupType::T211, GroupType::T311, GroupType::T2111, GroupType::T212];

    pub fn label(self) -> &'static str {
        match self {
            GroupType::T211 => "2,1,1",
            GroupType::T311 => "3,1,1",
            GroupType::T2111 => "2,1,1,1",
            GroupType::T212 => "2,1,2",
        }
    }

    pub fn hirsch_length(self) -> usize {
        self.isolator_type().iter().sum()
    }

    pub fn isolator_type(self) -> &'static [usize] {
        match self {
            GroupType::T211 => &[2, 1, 1],
            GroupType::T311 => &[3, 1, 1],
            GroupType::T2111 => &[2, 1, 1, 1],
            GroupType::T212 => &[2, 1, 2],
        }
    }

    /// Triples whose structure constant may be nonzero.
    pub fn supported_triples(self) -> &'static [Triple] {
        match self {
            GroupType::T211 => &[T123, T124, T134],
            GroupType::T311 => &[T124, T125, T135, T145, T235],
            GroupType::T2111 => &[T123, T124, T125, T134, T135, T145, T235],
            GroupType::T212 => &[T123, T124, T125, T134, T235],
        }
    }

    /// Structure constants preserved exactly by every local or global
    /// equivalence.
    pub fn rigid_triples(self) -> &'static [Triple] {
        match self {
            GroupType::T211 => &[T123, T134],
            GroupType::T311 => &[T124, T145, T235],
            GroupType::T2111 => &[T123, T134, T145, T235],
            GroupType::T212 => &[T123, T134, T235],
        }
    }

    pub fn free_triples(self) -> &'static [Triple] {
        match self {
            GroupType::T211 => &[T124],
            GroupType::T311 => &[T135, T125],
            GroupType::T2111 => &[T124, T135, T125],
            GroupType::T212 => &[T124, T125],
        }
    }

    /// Admissible entries `(row, col)` (0-based) of a generator-image matrix.
    ///
    /// Upper triangular, plus the two off-diagonal positions inside the
    /// rank-2 blocks of type `(2,1,2)`.
    pub fn shape_mask(self) -> Vec<Vec<bool>> {
        let n = self.hirsch_length();
        let mut mask = vec![vec![false; n]; n];
        for (i, row) in mask.iter_mut().enumerate() {
            for cell in row.iter_mut().skip(i) {
                *cell = true;
            }
        }
        if self == GroupType::T212 {
            mask[1][0] = true;
            mask[4][3] = true;
        }
        mask
    }

    pub fn descriptor(self) -> TypeDescriptor {
        TypeDescriptor {
            type_id: self,
            hirsch_length: self.hirsch_length(),
            isolator_type: self.isolator_type().to_vec(),
            supported_triples: self.supported_triples().to_vec(),
            shape_mask: self.shape_mask(),
        }
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for GroupType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches(['T', 't']).trim_matches(|c| c == '(' || c == ')');
        let ranks: Option<Vec<usize>> = if body.contains(',') || body.contains(' ') {
            body.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|p| !p.is_empty())
                .map(|p| p.parse().ok())
                .collect()
        } else {
            // Compact spelling such as "211".
            body.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
        };
        let ranks = ranks
            .filter(|r| !r.is_empty())
            .ok_or_else(|| Error::Parse(format!("bad type tag {s:?}")))?;
        match ranks[..] {
            [2, 1, 1] => Ok(GroupType::T211),
            [3, 1, 1] => Ok(GroupType::T311),
            [2, 1, 1, 1] => Ok(GroupType::T2111),
            [2, 1, 2] => Ok(GroupType::T212),
            _ => {
                let hirsch: usize = ranks.iter().sum();
                if !ranks.is_empty() && ranks.len() <= 2 && hirsch <= 5 {
                    Err(Error::UnsupportedType(format!(
                        "type ({s}) has class <= 2 and Hirsch length <= 5; such groups have trivial \
                         genus and are not handled here"
                    )))
                } else {
                    Err(Error::UnsupportedType(format!(
                        "type ({s}) is not one of (2,1,1), (3,1,1), (2,1,1,1), (2,1,2)"
                    )))
                }
            }
        }
    }
}

/// Static description of a supported type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeDescriptor {
    pub type_id: GroupType,
    pub hirsch_length: usize,
    pub isolator_type: Vec<usize>,
    pub supported_triples: Vec<Triple>,
    pub shape_mask: Vec<Vec<bool>>,
}

/// Structure constants `t_{ijk}` of a presentation, tagged with its type.
/// Unlisted triples are zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParamTuple {
    group_type: GroupType,
    entries: BTreeMap<Triple, BigInt>,
}

impl ParamTuple {
    pub fn new<I>(group_type: GroupType, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Triple, BigInt)>,
    {
        let n = group_type.hirsch_length();
        let mut map = BTreeMap::new();
        for (triple, value) in entries {
            if !triple.is_ordered(n) {
                return Err(Error::InvalidArgument(format!(
                    "triple {triple} is not of the form i<j<k<={n}"
                )));
            }
            if !value.is_zero() {
                map.insert(triple, value);
            }
        }
        Ok(ParamTuple { group_type, entries: map })
    }

    pub fn from_i64(group_type: GroupType, entries: &[(Triple, i64)]) -> Result<Self> {
        Self::new(group_type, entries.iter().map(|&(tr, v)| (tr, BigInt::from(v))))
    }

    /// `(t123, t134, t124)`.
    pub fn t211(t123: i64, t134: i64, t124: i64) -> Self {
        Self::from_i64(GroupType::T211, &[(T123, t123), (T134, t134), (T124, t124)]).expect("fixed triples")
    }

    /// `(t124, t145, t235, t135, t125)`.
    pub fn t311(t124: i64, t145: i64, t235: i64, t135: i64, t125: i64) -> Self {
        Self::from_i64(
            GroupType::T311,
            &[(T124, t124), (T145, t145), (T235, t235), (T135, t135), (T125, t125)],
        )
        .expect("fixed triples")
    }

    /// Rigid `(t123, t134, t145, t235)` followed by free `(t124, t135, t125)`.
    #[allow(clippy::too_many_arguments)]
    pub fn t2111(t123: i64, t134: i64, t145: i64, t235: i64, t124: i64, t135: i64, t125: i64) -> Self {
        Self::from_i64(
            GroupType::T2111,
            &[
                (T123, t123),
                (T134, t134),
                (T145, t145),
                (T235, t235),
                (T124, t124),
                (T135, t135),
                (T125, t125),
            ],
        )
        .expect("fixed triples")
    }

    /// Rigid `(t123, t134, t235)` followed by free `(t124, t125)`.
    pub fn t212(t123: i64, t134: i64, t235: i64, t124: i64, t125: i64) -> Self {
        Self::from_i64(
            GroupType::T212,
            &[(T123, t123), (T134, t134), (T235, t235), (T124, t124), (T125, t125)],
        )
        .expect("fixed triples")
    }

    pub fn group_type(&self) -> GroupType {
        self.group_type
    }

    pub fn hirsch_length(&self) -> usize {
        self.group_type.hirsch_length()
    }

    pub fn get(&self, triple: Triple) -> BigInt {
        self.entries.get(&triple).cloned().unwrap_or_default()
    }

    /// A copy with one entry replaced.
    pub fn with(&self, triple: Triple, value: BigInt) -> Self {
        let mut out = self.clone();
        if value.is_zero() {
            out.entries.remove(&triple);
        } else {
            out.entries.insert(triple, value);
        }
        out
    }

    /// Nonzero entries in triple order.
    pub fn entries(&self) -> impl Iterator<Item = (Triple, &BigInt)> {
        self.entries.iter().map(|(t, v)| (*t, v))
    }

    pub fn rigid_values(&self) -> Vec<BigInt> {
        self.group_type.rigid_triples().iter().map(|&t| self.get(t)).collect()
    }

    pub fn free_values(&self) -> Vec<BigInt> {
        self.group_type.free_triples().iter().map(|&t| self.get(t)).collect()
    }

    pub fn same_rigid(&self, other: &ParamTuple) -> bool {
        self.group_type == other.group_type && self.rigid_values() == other.rigid_values()
    }

    /// Replace the free entries (in [`GroupType::free_triples`] order).
    pub fn with_free(&self, values: &[BigInt]) -> Self {
        let mut out = self.clone();
        for (&tr, v) in self.group_type.free_triples().iter().zip(values) {
            out = out.with(tr, v.clone());
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut t = Map::new();
        for &tr in self.group_type.supported_triples() {
            t.insert(tr.to_string(), int_json(&self.get(tr)));
        }
        // Unsupported nonzero entries are echoed so reports stay faithful.
        for (tr, v) in &self.entries {
            t.entry(tr.to_string()).or_insert_with(|| int_json(v));
        }
        json!({ "type": self.group_type.label(), "t": Value::Object(t) })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Parse("parameter tuple must be a JSON object".into()))?;
        let tag = obj
            .get("type")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("missing string field \"type\"".into()))?;
        let group_type: GroupType = tag.parse()?;
        let entries = obj
            .get("t")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("missing object field \"t\"".into()))?;
        let mut parsed = Vec::with_capacity(entries.len());
        for (key, v) in entries {
            let triple: Triple = key.parse()?;
            parsed.push((triple, parse_int(v).map_err(|e| Error::Parse(format!("t{key}: {e}")))?));
        }
        ParamTuple::new(group_type, parsed)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&v)
    }
}

impl fmt::Display for ParamTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})[", self.group_type)?;
        for (i, &tr) in self.group_type.supported_triples().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "t{tr}={}", self.get(tr))?;
        }
        f.write_str("]")
    }
}

/// JSON rendering of an integer: a number when it fits `i64`, else a string.
pub fn int_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(n.to_string()),
    }
}

fn parse_int(v: &Value) -> std::result::Result<BigInt, String> {
    match v {
        Value::Number(num) => {
            if let Some(i) = num.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = num.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(format!("{num} is not an integer (use a JSON string for large values)"))
            }
        }
        Value::String(s) => s.trim().parse::<BigInt>().map_err(|e| format!("{s:?}: {e}")),
        other => Err(format!("expected integer, got {other}")),
    }
}

/// A single violated constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub constraint: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        ValidationReport { valid: violations.is_empty(), violations }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "valid": self.valid,
            "violations": self.violations.iter().map(|v| json!({
                "constraint": v.constraint,
                "value": v.value,
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.valid {
            return f.write_str("valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{} (got {})", v.constraint, v.value)?;
        }
        Ok(())
    }
}

struct Checker<'a> {
    t: &'a ParamTuple,
    violations: Vec<Violation>,
}

impl Checker<'_> {
    fn fail(&mut self, constraint: impl Into<String>, value: impl ToString) {
        self.violations.push(Violation { constraint: constraint.into(), value: value.to_string() });
    }

    fn positive(&mut self, tr: Triple) {
        let v = self.t.get(tr);
        if !v.is_positive() {
            self.fail(format!("t{tr} > 0"), v);
        }
    }

    fn nonnegative(&mut self, tr: Triple) {
        let v = self.t.get(tr);
        if v.is_negative() {
            self.fail(format!("t{tr} >= 0"), v);
        }
    }

    fn half_box(&mut self, tr: Triple, bound: &BigInt, name: &str) {
        let v = self.t.get(tr);
        if BigInt::from(2) * &v > *bound {
            self.fail(format!("2*t{tr} <= {name} = {bound}"), v);
        }
    }
}

/// Check a tuple against its type's parameter set.
///
/// Without `canonical`, only positivity, the zero pattern and (for `(2,1,2)`)
/// the divisibility `t134 | t235` are checked. With `canonical`, the tuple
/// must additionally be the chosen representative of its isomorphism class.
pub fn validate_membership(t: &ParamTuple, canonical: bool) -> ValidationReport {
    let gt = t.group_type();
    let mut c = Checker { t, violations: Vec::new() };
    for (tr, v) in t.entries() {
        if !gt.supported_triples().contains(&tr) {
            c.fail(format!("t{tr} = 0 for type ({gt})"), v);
        }
    }
    match gt {
        GroupType::T211 => {
            c.positive(T123);
            c.positive(T134);
            c.nonnegative(T124);
        }
        GroupType::T311 => {
            c.positive(T124);
            c.positive(T145);
            c.nonnegative(T235);
            c.nonnegative(T135);
            c.nonnegative(T125);
        }
        GroupType::T2111 => {
            for tr in [T123, T134, T145] {
                c.positive(tr);
            }
            for tr in [T124, T125, T135, T235] {
                c.nonnegative(tr);
            }
        }
        GroupType::T212 => {
            for tr in [T123, T134, T235] {
                c.positive(tr);
            }
            c.nonnegative(T124);
            c.nonnegative(T125);
            let (a, b) = (t.get(T134), t.get(T235));
            if a.is_positive() && !b.is_multiple_of(&a) {
                c.fail("t134 | t235", format!("{a} does not divide {b}"));
            }
        }
    }
    if canonical && c.violations.is_empty() {
        check_canonical(&mut c);
    }
    ValidationReport::from_violations(c.violations)
}

fn check_canonical(c: &mut Checker<'_>) {
    let t = c.t;
    let profile = match modulus_profile(t) {
        Ok(p) => p,
        Err(e) => {
            c.fail("modulus profile computable", e);
            return;
        }
    };
    match (t.group_type(), &profile.moduli) {
        (GroupType::T211, Moduli::T211 { d }) => c.half_box(T124, d, "d"),
        (GroupType::T311, Moduli::T311 { d1, d2 }) => {
            c.half_box(T135, d1, "d1");
            c.half_box(T125, d2, "d2");
        }
        (GroupType::T2111, _) => match genus::canonicalize(t) {
            Ok(rep) if rep == *t => {}
            Ok(rep) => c.fail(
                "lex-min representative of its isomorphism class",
                format!("class representative is {rep}"),
            ),
            Err(e) => c.fail("canonical form computable", e),
        },
        (GroupType::T212, Moduli::T212 { m1, m2, .. }) => {
            let (x, y) = (t.get(T124), t.get(T125));
            if x >= *m1 {
                c.fail(format!("t124 < gcd(t134, t123) = {m1}"), &x);
            }
            if y >= *m2 {
                c.fail(format!("t125 < gcd(t235, t123) = {m2}"), &y);
            }
            if x < *m1 && y < *m2 {
                match genus::canonicalize(t) {
                    Ok(rep) if rep == *t => {}
                    Ok(rep) => c.fail(
                        "lex-min representative of its D_k(Z)-orbit on L(t134, t235, t123)",
                        format!("orbit representative is ({}, {})", rep.get(T124), rep.get(T125)),
                    ),
                    Err(e) => c.fail("canonical form computable", e),
                }
            }
        }
        _ => unreachable!("profile type matches tuple type"),
    }
}

/// Type-specific governing moduli.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Moduli {
    /// `d = gcd(t123, t134)`.
    T211 { d: BigInt },
    /// `d1 = gcd(t145, t235)`, `d2 = gcd(t124, t135, d1)`.
    T311 { d1: BigInt, d2: BigInt },
    /// `d3 = gcd(t123, t145, t235)`; the local modulus at `p` is
    /// `p^(ν_p(d3) + ν_p(t134))`.
    T2111 { d3: BigInt, t134: BigInt },
    /// `m1 = gcd(t134, t123)`, `m2 = gcd(t235, t123)`, `k = t235 / t134`.
    T212 { m1: BigInt, m2: BigInt, k: BigInt },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulusProfile {
    pub group_type: GroupType,
    pub moduli: Moduli,
    /// Primes at which some governing exponent is positive, ascending.
    pub relevant_primes: Vec<u64>,
}

impl ModulusProfile {
    /// The governing exponents at `p`:
    /// `[ν(d)]`, `[ν(d1), ν(d2)]`, `[α, β]` or `[ℓ, m]` by type.
    pub fn exponents(&self, p: u64) -> Vec<u32> {
        match &self.moduli {
            Moduli::T211 { d } => vec![val(d, p)],
            Moduli::T311 { d1, d2 } => vec![val(d1, p), val(d2, p)],
            Moduli::T2111 { d3, t134 } => vec![val(d3, p), val(t134, p)],
            Moduli::T212 { m1, m2, .. } => vec![val(m1, p), val(m2, p)],
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        let mut put = |k: &str, v: &BigInt| {
            m.insert(k.to_string(), int_json(v));
        };
        match &self.moduli {
            Moduli::T211 { d } => put("d", d),
            Moduli::T311 { d1, d2 } => {
                put("d1", d1);
                put("d2", d2);
            }
            Moduli::T2111 { d3, t134 } => {
                put("d3", d3);
                put("t134", t134);
            }
            Moduli::T212 { m1, m2, k } => {
                put("m1", m1);
                put("m2", m2);
                put("k", k);
            }
        }
        let per_prime: Vec<Value> = self
            .relevant_primes
            .iter()
            .map(|&p| json!({ "p": p, "exponents": self.exponents(p) }))
            .collect();
        json!({
            "type": self.group_type.label(),
            "moduli": Value::Object(m),
            "relevant_primes": self.relevant_primes,
            "per_prime": per_prime,
        })
    }
}

/// Governing gcds and relevant primes of a (T_0-valid) tuple.
pub fn modulus_profile(t: &ParamTuple) -> Result<ModulusProfile> {
    let report = validate_membership(t, false);
    if !report.valid {
        return Err(Error::InvalidTuple(report));
    }
    profile_unchecked(t)
}

pub(crate) fn profile_unchecked(t: &ParamTuple) -> Result<ModulusProfile> {
    let g = |tr: Triple| t.get(tr);
    let (moduli, governing) = match t.group_type() {
        GroupType::T211 => {
            let d = gcd_all([&g(T123), &g(T134)]);
            (Moduli::T211 { d: d.clone() }, d)
        }
        GroupType::T311 => {
            let d1 = gcd_all([&g(T145), &g(T235)]);
            let d2 = gcd_all([&g(T124), &g(T135), &d1]);
            (Moduli::T311 { d1: d1.clone(), d2 }, d1)
        }
        GroupType::T2111 => {
            let d3 = gcd_all([&g(T123), &g(T145), &g(T235)]);
            let t134 = g(T134);
            let product = &d3 * &t134;
            (Moduli::T2111 { d3, t134 }, product)
        }
        GroupType::T212 => {
            let m1 = gcd_all([&g(T134), &g(T123)]);
            let m2 = gcd_all([&g(T235), &g(T123)]);
            let k = g(T235) / g(T134);
            let product = &m1 * &m2;
            (Moduli::T212 { m1, m2, k }, product)
        }
    };
    let relevant_primes = prime_factors(&governing)?;
    Ok(ModulusProfile { group_type: t.group_type(), moduli, relevant_primes })
}

/// `L(t134, t235, t123)` for a `(2,1,2)` tuple.
pub(crate) fn orbit_space_of(t: &ParamTuple) -> Result<orbits::OrbitSpace> {
    orbits::build_orbit_space(&t.get(T134), &t.get(T235), &t.get(T123))
}
