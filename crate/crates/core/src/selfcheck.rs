//! Cross-validation suites comparing each fast routine with its oracle.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::arith::val;
use crate::collection::equations::equations_hold;
use crate::collection::{check_candidate_map, CandidateMatrix, GroupElement, PcPresentation};
use crate::genus::genus_size_table;
use crate::local::{coupled_system_solvable_2111, decide_with_profile, unit_congruence_solvable, verify_coupled_witness};
use crate::oracles::{orbit_closure_partition, unit_congruence_brute, Reachable2111};
use crate::orbits::{local_orbit_equivalent, OrbitSpace, Point};
use crate::params::{profile_unchecked, GroupType, Moduli, ParamTuple, T134, T235};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Quick,
    Full,
}

impl std::str::FromStr for Scale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "quick" => Ok(Scale::Quick),
            "full" => Ok(Scale::Full),
            other => Err(format!("unknown scale '{other}', expected quick or full")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    /// Corrupt one gcd in the `(2,1,1)` decider suite.
    pub inject_fault: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        SuiteResult { name, cases: 0, failures: 0, first_failure: None }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.name,
            "cases": self.cases,
            "failures": self.failures,
            "passed": self.passed(),
            "first_failure": self.first_failure,
        })
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "ok" } else { "FAILED" };
        write!(f, "{:<20} {:>8} cases  {:>5} failures  {status}", self.name, self.cases, self.failures)?;
        if let Some(d) = &self.first_failure {
            write!(f, "\n    first failure: {d}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub suites: Vec<SuiteResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    pub fn failed_suites(&self) -> Vec<&'static str> {
        self.suites.iter().filter(|s| !s.passed()).map(|s| s.name).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "passed": self.passed(),
            "failed_suites": self.failed_suites(),
            "suites": self.suites.iter().map(SuiteResult::to_json).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            writeln!(f, "{s}")?;
        }
        write!(f, "{}", if self.passed() { "all suites passed" } else { "self-check FAILED" })
    }
}

pub fn run(scale: Scale, options: Options) -> Report {
    let q = scale == Scale::Quick;
    let suites = vec![
        unit_congruence_suite(if q { 40 } else { 200 }),
        decide_211_suite(if q { 8 } else { 12 }, options.inject_fault),
        coupled_2111_suite(if q { 3 } else { 7 }),
        orbits_212_suite(if q { 6 } else { 8 }),
        collection_laws_suite(if q { 200 } else { 1000 }, 7),
        equations_suite(if q { 50 } else { 200 }, 11),
        genus_table_suite(),
    ];
    Report { suites }
}

/// Valuation criterion against enumeration of all units, for
/// `0 <= a, b <= max`, `p ∈ {2,3,5,7}`, `k <= 3`.
pub fn unit_congruence_suite(max: i64) -> SuiteResult {
    let mut r = SuiteResult::new("unit-congruence");
    for p in [2u64, 3, 5, 7] {
        for k in 0..=3 {
            for a in 0..=max {
                for b in 0..=max {
                    let (a, b) = (BigInt::from(a), BigInt::from(b));
                    let fast = unit_congruence_solvable(&a, &b, p, k).expect("prime");
                    let slow = unit_congruence_brute(&a, &b, p, k);
                    r.record(fast == slow, || format!("a={a} b={b} p={p} k={k}: {fast:?} vs {slow:?}"));
                }
            }
        }
    }
    r
}

/// `(2,1,1)` decisions against unit enumeration on `[1..max]² × [0..max]`.
pub fn decide_211_suite(max: i64, inject_fault: bool) -> SuiteResult {
    let mut r = SuiteResult::new("decide-211");
    for a in 1..=max {
        for b in 1..=max {
            for x in 0..=max {
                let s = ParamTuple::t211(a, b, x);
                let mut profile = profile_unchecked(&s).expect("valid tuple");
                if inject_fault {
                    if let Moduli::T211 { d } = &mut profile.moduli {
                        *d += 1;
                    }
                }
                let d = num_integer::Integer::gcd(&a, &b);
                for y in 0..=max {
                    let t = ParamTuple::t211(a, b, y);
                    let fast = decide_with_profile(&s, &t, &profile).expect("valid pair").equal;
                    let slow = crate::arith::prime_factors(&d.into()).expect("small").into_iter().all(|p| {
                        unit_congruence_brute(&BigInt::from(y), &BigInt::from(x), p, val(&d.into(), p)).is_some()
                    });
                    r.record(fast == slow, || format!("s={s} t={t}: decider {fast}, enumeration {slow}"));
                }
            }
        }
    }
    r
}

/// Pruned `(2,1,1,1)` search against the unpruned reachable set, rigid
/// entries in `{1,2,4}`, free entries in `[0..max]`, `p ∈ {2,3}`.
pub fn coupled_2111_suite(max: i64) -> SuiteResult {
    let mut r = SuiteResult::new("coupled-2111");
    let rigid = [1i64, 2, 4];
    let frees: Vec<[i64; 3]> =
        (0..=max).flat_map(|a| (0..=max).flat_map(move |b| (0..=max).map(move |c| [a, b, c]))).collect();
    for &s123 in &rigid {
        for &s134 in &rigid {
            for &s145 in &rigid {
                for &s235 in &rigid {
                    let tuple = |f: &[i64; 3]| ParamTuple::t2111(s123, s134, s145, s235, f[0], f[1], f[2]);
                    let tuples: Vec<ParamTuple> = frees.iter().map(tuple).collect();
                    for p in [2u64, 3] {
                        for s in &tuples {
                            let reach = Reachable2111::new(s, p).expect("small modulus");
                            for t in &tuples {
                                let fast = coupled_system_solvable_2111(s, t, p).expect("same rigid entries");
                                let slow = reach.contains(t);
                                let ok = fast.is_some() == slow
                                    && fast.as_ref().map_or(true, |w| verify_coupled_witness(s, t, w));
                                r.record(ok, || format!("p={p} s={s} t={t}: pruned {}, unpruned {slow}", fast.is_some()));
                            }
                        }
                    }
                }
            }
        }
    }
    r
}

/// Local orbit test against closure under explicit matrices, for all
/// `a | b` and `a, b, c <= max`, `p ∈ {2,3}`.
pub fn orbits_212_suite(max: u64) -> SuiteResult {
    let mut r = SuiteResult::new("orbits-212");
    for a in 1..=max {
        for b in (a..=max).step_by(a as usize) {
            for c in 1..=max {
                let space = OrbitSpace::from_u64(a, b, c).expect("a | b");
                for p in [2u64, 3] {
                    let slow = orbit_closure_partition(&space, p);
                    let fast = local_partition(&space, p);
                    r.record(fast == slow, || format!("L({a},{b},{c}) at p={p}: {fast:?} vs {slow:?}"));
                }
            }
        }
    }
    r
}

/// Classes of the relation "`local_orbit_equivalent` finds a witness",
/// ordered by least point.
pub fn local_partition(space: &OrbitSpace, p: u64) -> Vec<Vec<Point>> {
    let mut classes: Vec<Vec<Point>> = Vec::new();
    for pt in space.points() {
        let home = classes.iter_mut().find(|c| {
            local_orbit_equivalent(space, c[0], pt, p).expect("points in L").is_some()
        });
        match home {
            Some(c) => c.push(pt),
            None => classes.push(vec![pt]),
        }
    }
    classes
}

fn random_tuple(rng: &mut ChaCha8Rng, gt: GroupType) -> ParamTuple {
    let mut pos = || rng.gen_range(1..=9i64);
    match gt {
        GroupType::T211 => ParamTuple::t211(pos(), pos(), pos() - 1),
        GroupType::T311 => ParamTuple::t311(pos(), pos(), pos() - 1, pos() - 1, pos() - 1),
        GroupType::T2111 => ParamTuple::t2111(pos(), pos(), pos(), pos() - 1, pos() - 1, pos() - 1, pos() - 1),
        GroupType::T212 => {
            let (t123, a, t124, t125) = (pos(), pos(), pos() - 1, pos() - 1);
            let k = rng.gen_range(1..=3);
            ParamTuple::t212(t123, a, a * k, t124, t125)
        }
    }
}

fn random_element(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> GroupElement {
    GroupElement::new((0..n).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect())
}

/// Associativity, inverse and power laws on random elements of random
/// presentations of every type.
pub fn collection_laws_suite(count: usize, seed: u64) -> SuiteResult {
    let mut r = SuiteResult::new("collection-laws");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..count {
        let gt = GroupType::ALL[i % 4];
        let t = random_tuple(&mut rng, gt);
        let pres = PcPresentation::from_params(&t).expect("valid presentation");
        let n = pres.n();
        let [x, y, z] = [(); 3].map(|_| random_element(&mut rng, n, 1_000_000));
        let assoc = pres.multiply(&pres.multiply(&x, &y).unwrap(), &z).unwrap()
            == pres.multiply(&x, &pres.multiply(&y, &z).unwrap()).unwrap();
        r.record(assoc, || format!("associativity fails in G({t}) on {x}, {y}, {z}"));
        let inv = pres.inverse(&x).unwrap();
        let ok = pres.multiply(&inv, &x).unwrap().is_identity() && pres.multiply(&x, &inv).unwrap().is_identity();
        r.record(ok, || format!("inverse law fails in G({t}) on {x}"));
        let small = random_element(&mut rng, n, 50);
        let (a, b) = (BigInt::from(rng.gen_range(-40..=40)), BigInt::from(rng.gen_range(-40..=40)));
        let lhs = pres.power(&small, &(&a + &b)).unwrap();
        let rhs = pres.multiply(&pres.power(&small, &a).unwrap(), &pres.power(&small, &b).unwrap()).unwrap();
        r.record(lhs == rhs, || format!("power law fails in G({t}) on {small} with {a}, {b}"));
    }
    r
}

/// A random shape-masked matrix with `±1` on the diagonal.
pub fn random_unit_diagonal_matrix(rng: &mut ChaCha8Rng, gt: GroupType, bound: i64) -> CandidateMatrix {
    let n = gt.hirsch_length();
    let mask = gt.shape_mask();
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match (i == j, mask[i][j]) {
                    (true, _) => if rng.gen_bool(0.5) { 1 } else { -1 },
                    (false, true) => rng.gen_range(-bound..=bound),
                    (false, false) => 0,
                })
                .collect()
        })
        .collect::<Vec<Vec<i64>>>();
    CandidateMatrix::from_i64(&rows, gt).expect("shape respected")
}

/// Collection-based relation checking against the closed-form equations,
/// on random matrices (mostly non-homomorphisms) and on matrices paired with
/// the structure constants they induce (always homomorphisms).
pub fn equations_suite(per_type: usize, seed: u64) -> SuiteResult {
    let mut r = SuiteResult::new("equations");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for gt in GroupType::ALL {
        for i in 0..per_type {
            let s = random_tuple(&mut rng, gt);
            let pres_s = PcPresentation::from_params(&s).unwrap();
            let m = random_unit_diagonal_matrix(&mut rng, gt, 4);
            let t = if i % 2 == 0 {
                random_tuple(&mut rng, gt)
            } else {
                let m = if gt == GroupType::T212 { unimodular_212(&mut rng, &s, &m) } else { m.clone() };
                let induced = pres_s.induced_structure_constants(&m).expect("unimodular blocks");
                let t = match ParamTuple::new(gt, induced.into_iter()) {
                    Ok(t) => t,
                    Err(e) => {
                        r.record(false, || format!("induced constants leave type ({gt}): {e}"));
                        continue;
                    }
                };
                check_pair(&mut r, &t, &s, &pres_s, &m);
                continue;
            };
            check_pair(&mut r, &t, &s, &pres_s, &m);
        }
    }
    r
}

fn check_pair(r: &mut SuiteResult, t: &ParamTuple, s: &ParamTuple, pres_s: &PcPresentation, m: &CandidateMatrix) {
    let pres_t = PcPresentation::from_params(t).unwrap();
    let report = check_candidate_map(&pres_t, pres_s, m).unwrap();
    let eq = equations_hold(t, s, m).unwrap();
    r.record(report.is_homomorphism == eq, || {
        format!(
            "t={t} s={s} M={}: collection says {}, equations say {eq}",
            m.to_json(),
            report.is_homomorphism
        )
    });
}

/// Replace the rank-2 diagonal blocks of `m` by a determinant `±1` block
/// `A` with `k | a21` and the block it forces on `⟨g4, g5⟩`, so that the
/// induced constants stay in type `(2,1,2)` with the same rigid entries.
fn unimodular_212(rng: &mut ChaCha8Rng, s: &ParamTuple, m: &CandidateMatrix) -> CandidateMatrix {
    let k = (s.get(T235) / s.get(T134)).to_i64().expect("small parameters");
    let mut rows: Vec<Vec<BigInt>> = m.rows().to_vec();
    let e1 = if rng.gen_bool(0.5) { 1i64 } else { -1 };
    let e2 = if rng.gen_bool(0.5) { 1i64 } else { -1 };
    let a = rng.gen_range(-3..=3i64);
    let c = rng.gen_range(-2..=2i64);
    // [[e1, a], [0, e2]] · [[1, 0], [c k, 1]]
    let [m11, m12, m21, m22] = [e1 + a * c * k, a, e2 * c * k, e2];
    let m33 = m.entry(2, 2).to_i64().expect("unit diagonal");
    let blocks = [(0, [m11, m12, m21, m22]), (3, [m33 * m11, m33 * m12 * k, m33 * m21 / k, m33 * m22])];
    for (start, [p, q, r, t]) in blocks {
        rows[start][start] = p.into();
        rows[start][start + 1] = q.into();
        rows[start + 1][start] = r.into();
        rows[start + 1][start + 1] = t.into();
    }
    CandidateMatrix::new(rows, GroupType::T212, GroupType::T212).expect("shape respected")
}

/// Genus sizes of the `t123 = t134 = p`, `t124 = 1` family against `⌊p/2⌋`.
pub fn genus_table_suite() -> SuiteResult {
    let mut r = SuiteResult::new("genus-table");
    let primes = [2u64, 3, 5, 7, 11, 13, 17, 19, 23];
    let rows = genus_size_table(GroupType::T211, &primes).expect("primes");
    for row in rows {
        let expected = (row.p / 2).max(1) as usize;
        r.record(row.size == expected, || format!("p={}: size {} expected {expected}", row.p, row.size));
    }
    r
}
