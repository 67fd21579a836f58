//! Acceptance run: one PASS/FAIL line per criterion, with timing.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nilgenus::selfcheck::{collection_laws_suite, coupled_2111_suite, decide_211_suite, equations_suite, orbits_212_suite};
use nilgenus::{canonicalize, decide_same_finite_quotients, enumerate_genus, genus_size_table, z_equivalent};
use nilgenus::{GroupType, ParamTuple};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn criterion(n: u32, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    let ok = out.ok && took <= limit;
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("criterion {n} {verdict}  {name}: {} [{:.2?} of {:?}]", out.detail, took, limit);
    ok
}

fn genus_growth() -> Outcome {
    let rows = genus_size_table(GroupType::T211, &[3, 5, 7, 11, 13]).expect("primes");
    let sizes: Vec<usize> = rows.iter().map(|r| r.size).collect();
    Outcome { ok: sizes == [1, 2, 3, 5, 6], detail: format!("sizes {sizes:?}, expected [1, 2, 3, 5, 6]") }
}

fn same_quotients_pair() -> Outcome {
    let s = ParamTuple::t211(5, 5, 1);
    let t = ParamTuple::t211(5, 5, 2);
    let local = decide_same_finite_quotients(&s, &t).expect("valid pair").equal;
    let global = z_equivalent(&s, &t).expect("valid pair").equivalent;
    let trivial = enumerate_genus(&ParamTuple::t211(3, 3, 1)).expect("valid tuple").size();
    Outcome {
        ok: local && !global && trivial == 1,
        detail: format!("decide-equal {local}, z-equivalent {global}, genus size at p=3 {trivial}"),
    }
}

fn suite_outcome(r: nilgenus::selfcheck::SuiteResult) -> Outcome {
    let detail = match &r.first_failure {
        Some(f) => format!("{} cases, {} disagreements; first: {f}", r.cases, r.failures),
        None => format!("{} cases, 0 disagreements", r.cases),
    };
    Outcome { ok: r.passed(), detail }
}

fn cross_validation() -> Outcome {
    let eq = equations_suite(200, 11);
    let laws = collection_laws_suite(1000, 7);
    let ok = eq.passed() && laws.passed();
    let first = eq.first_failure.clone().or(laws.first_failure.clone());
    let mut detail = format!(
        "{} matrices ({} mismatches), {} law checks ({} failures)",
        eq.cases, eq.failures, laws.cases, laws.failures
    );
    if let Some(f) = first {
        detail += &format!("; first: {f}");
    }
    Outcome { ok, detail }
}

/// Reflexivity, symmetry and transitivity of `decide` over a family of
/// tuples sharing rigid entries, plus idempotence and decide-equality of
/// `canonicalize`. Returns the number of triples checked and the first failure.
fn laws_on(family: &[ParamTuple], triples: &mut usize) -> Option<String> {
    let n = family.len();
    let mut rel = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            rel[i][j] = decide_same_finite_quotients(&family[i], &family[j]).expect("valid pair").equal;
        }
    }
    for i in 0..n {
        if !rel[i][i] {
            return Some(format!("not reflexive at {}", family[i]));
        }
        for j in 0..n {
            if rel[i][j] != rel[j][i] {
                return Some(format!("not symmetric on {}, {}", family[i], family[j]));
            }
            for k in 0..n {
                *triples += 1;
                if rel[i][j] && rel[j][k] && !rel[i][k] {
                    return Some(format!("not transitive on {}, {}, {}", family[i], family[j], family[k]));
                }
            }
        }
        let c = canonicalize(&family[i]).expect("valid tuple");
        if canonicalize(&c).expect("valid tuple") != c {
            return Some(format!("canonicalize not idempotent at {}", family[i]));
        }
        if !decide_same_finite_quotients(&family[i], &c).expect("valid pair").equal {
            return Some(format!("{} is not decide-equal to its canonical form {c}", family[i]));
        }
    }
    None
}

fn relation_laws() -> Outcome {
    let mut failures = Vec::new();
    let mut counts = Vec::new();
    let mut triples = 0;
    for a in 1..=10 {
        for b in 1..=10 {
            let family: Vec<_> = (0..=10).map(|x| ParamTuple::t211(a, b, x)).collect();
            failures.extend(laws_on(&family, &mut triples));
        }
    }
    counts.push(format!("(2,1,1) {triples}"));
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for gt in [GroupType::T311, GroupType::T2111, GroupType::T212] {
        let mut triples = 0;
        for _ in 0..6 {
            let family = sample_family(&mut rng, gt, 9);
            failures.extend(laws_on(&family, &mut triples));
        }
        counts.push(format!("({gt}) {triples}"));
    }
    Outcome {
        ok: failures.is_empty(),
        detail: match failures.first() {
            None => format!("triples checked: {}", counts.join(", ")),
            Some(f) => format!("{} failures; first: {f}", failures.len()),
        },
    }
}

/// `size` tuples of type `gt` with one random choice of rigid entries.
fn sample_family(rng: &mut ChaCha8Rng, gt: GroupType, size: usize) -> Vec<ParamTuple> {
    let mut pick = |v: &[i64]| v[rng.gen_range(0..v.len())];
    let rigid = [2, 3, 4, 6, 8, 9, 12];
    let family = match gt {
        GroupType::T311 => {
            let (a, b, c) = (pick(&rigid), pick(&rigid), pick(&rigid));
            (0..size).map(|_| ParamTuple::t311(a, b, c, rng.gen_range(0..12), rng.gen_range(0..12))).collect()
        }
        GroupType::T2111 => {
            let small = [1, 2, 3, 4, 6];
            let r = [pick(&small), pick(&small), pick(&small), pick(&small)];
            (0..size)
                .map(|_| {
                    let [x, y, z] = [(); 3].map(|_| rng.gen_range(0..12));
                    ParamTuple::t2111(r[0], r[1], r[2], r[3], x, y, z)
                })
                .collect()
        }
        GroupType::T212 => {
            let (c, a) = (pick(&rigid), pick(&[1, 2, 3, 4]));
            let b = a * pick(&[1, 2, 3]);
            (0..size).map(|_| ParamTuple::t212(c, a, b, rng.gen_range(0..8), rng.gen_range(0..8))).collect()
        }
        GroupType::T211 => unreachable!("exhaustive grid"),
    };
    family
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let results = [
        criterion(1, "genus growth for (2,1,1)", secs(1), genus_growth),
        criterion(2, "same finite quotients, not isomorphic", secs(1), same_quotients_pair),
        criterion(3, "(2,1,1) decider against unit enumeration", secs(60), || suite_outcome(decide_211_suite(12, false))),
        criterion(4, "(2,1,1,1) pruned search against full enumeration", secs(300), || {
            suite_outcome(coupled_2111_suite(7))
        }),
        criterion(5, "(2,1,2) local orbits against matrix closure", secs(60), || suite_outcome(orbits_212_suite(8))),
        criterion(6, "collection against equation systems", secs(60), cross_validation),
        criterion(7, "equivalence-relation laws", secs(120), relation_laws),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
