//! Acceptance criteria 1 to 9. Run with
//! `cargo test -p msslab --test acceptance -- --nocapture` to see one
//! PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use msslab_core::delta::{BuiltinDelta, DeltaPredicate};
use msslab_core::granules::{close_relation, BinaryRelation, ClosureFlags, Granulation};
use msslab_core::oracle::{oracle_check, COMPAT_OVERLAP_CLOSER};
use msslab_core::search::{enumerate_structures, find_witness, Family, SearchSpec};
use msslab_core::validation::{
    check_compatibility, check_proposition_all, lower_deficit, upper_deficit, validity_grades, Clustering,
    CompatibilityMode, ImageIndex,
};
use msslab_core::{
    AxiomId, CheckPlan, Coverage, DifferencePolicy, MssStructure, Partial, Status, Subset, Universe,
};

const GRANULE_LIMIT: Duration = Duration::from_secs(1);
const LAW_SUITE_LIMIT: Duration = Duration::from_secs(30);
const COHERENCE_LIMIT: Duration = Duration::from_secs(10);
const META_TABLES: usize = 1000;
const FIXTURE: &str = "examples/paper-example.json";

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn universe() -> Arc<Universe> {
    Arc::new(Universe::new(["x1", "x2", "x3", "x4"]).unwrap())
}

fn example_granulation() -> Granulation {
    let gens = BinaryRelation::new(4, [(0, 1), (1, 2)]).unwrap();
    Granulation::predecessor(&close_relation(&gens, ClosureFlags::TOLERANCE))
}

fn example() -> MssStructure {
    MssStructure::granular(universe(), example_granulation()).unwrap()
}

fn clustering(u: &Universe) -> Clustering {
    let c = [["x1", "x3"], ["x2", "x3"], ["x2", "x4"]].map(|names| u.subset(&names).unwrap());
    Clustering::new(4, c).unwrap()
}

fn three_element_structures() -> impl Iterator<Item = (u64, MssStructure)> {
    let u = Arc::new(Universe::numbered(3).unwrap());
    (0..1u64 << 9).map(move |code| {
        let g = Granulation::predecessor(&BinaryRelation::from_code(3, code));
        (code, MssStructure::granular(u.clone(), g).unwrap())
    })
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let g = example_granulation();
    let elapsed = start.elapsed();
    let u = universe();
    let got: BTreeSet<Vec<String>> = g.granules().iter().map(|&s| u.names_of(s)).collect();
    let want: BTreeSet<Vec<String>> = [&["x1", "x2"][..], &["x1", "x2", "x3"], &["x2", "x3"], &["x4"]]
        .iter()
        .map(|s| s.iter().map(|x| x.to_string()).collect())
        .collect();
    ensure(got == want, format!("granules {got:?}"))?;
    ensure(g.len() == 4, "duplicate granules reported")?;
    ensure(elapsed < GRANULE_LIMIT, format!("took {elapsed:?}"))?;
    Ok(format!("4 granules in {elapsed:?}"))
}

fn criterion_2() -> Outcome {
    let u = universe();
    let s = example();
    let ops = s.operators().unwrap();
    let c = u.subset(&["x2", "x4"]).unwrap();
    let want = Partial::Defined(u.subset(&["x1", "x2", "x3"]).unwrap());
    let (l, up) = (
        lower_deficit(c, ops, DifferencePolicy::Contained),
        upper_deficit(c, ops, DifferencePolicy::Contained),
    );
    ensure(l == want && up == want, format!("lower {l:?}, upper {up:?}"))?;
    Ok("both deficits are {x1,x2,x3}".into())
}

fn criterion_3() -> Outcome {
    let u = universe();
    let base = example();
    let ops = base.operators().cloned().unwrap();
    let granules = Clustering::new(4, base.granulation().unwrap().granules().to_vec()).unwrap();
    let cases = [
        (clustering(&u), BuiltinDelta::E0, true),
        (clustering(&u), BuiltinDelta::E1, true),
        (clustering(&u), BuiltinDelta::E2, false),
        (granules, BuiltinDelta::UE1, true),
    ];
    let mut parts = Vec::new();
    for (k, kind, expected) in cases {
        let d = DeltaPredicate::builtin(kind, 4, Some(ops.clone())).unwrap();
        let v = check_compatibility(&k, &d, CompatibilityMode::OverlapCloser, Some(&ops)).map_err(|e| e.to_string())?;
        let s = base.clone().with_delta(d).unwrap().with_kappa(k).unwrap();
        let oracle = oracle_check(&s, COMPAT_OVERLAP_CLOSER).map_err(|e| e.to_string())?;
        ensure(v.status.passed() == expected, format!("{kind}: {:?}", v.status))?;
        ensure(oracle == expected, format!("{kind}: oracle disagrees"))?;
        if !expected {
            ensure(v.witness().is_some(), format!("{kind}: no witness"))?;
            ensure(s.replay(&v).unwrap_or(false), format!("{kind}: witness does not replay"))?;
        }
        parts.push(format!("{kind}={}", if expected { "compatible" } else { "incompatible" }));
    }
    Ok(parts.join(", "))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let laws = [AxiomId::Ul1, AxiomId::Ul2, AxiomId::Ul3, AxiomId::Tb];
    let mut checked = 0;
    for (code, s) in three_element_structures() {
        for v in s.verify(Some(&laws)) {
            ensure(v.status == Status::Holds, format!("{} on relation {code}", v.check))?;
            ensure(v.coverage == Coverage::Exhaustive, format!("{} sampled", v.check))?;
        }
        let ops = s.operators().unwrap();
        for a in 0..8 {
            for b in 0..8 {
                let (a, b) = (Subset::from_bits(3, a), Subset::from_bits(3, b));
                ensure(
                    ops.upper(a.union(b)) == ops.upper(a).union(ops.upper(b)),
                    format!("additivity on relation {code}"),
                )?;
            }
        }
        checked += 1;
    }
    let elapsed = start.elapsed();
    ensure(checked == 512, "relation count")?;
    ensure(elapsed < LAW_SUITE_LIMIT, format!("took {elapsed:?}"))?;
    Ok(format!("512 structures, zero violations, {elapsed:?}"))
}

fn criterion_5() -> Outcome {
    let base = example();
    let ops = base.operators().cloned();
    let table = [
        (BuiltinDelta::E0, AxiomId::ICoh, Status::Holds),
        (BuiltinDelta::E0, AxiomId::ICoh2, Status::Fails),
        (BuiltinDelta::E1, AxiomId::ICoh2, Status::Holds),
        (BuiltinDelta::E1, AxiomId::StrictNCoh, Status::Holds),
        (BuiltinDelta::E1, AxiomId::Trans1, Status::Fails),
    ];
    let mut slowest = Duration::ZERO;
    for (kind, axiom, want) in table {
        let s = base.clone().with_delta(DeltaPredicate::builtin(kind, 4, ops.clone()).unwrap()).unwrap();
        let start = Instant::now();
        let v = s.check(axiom);
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        ensure(v.status == want, format!("{kind} {axiom}: {:?}", v.status))?;
        ensure(v.coverage == Coverage::Exhaustive, format!("{kind} {axiom} sampled"))?;
        ensure(elapsed < COHERENCE_LIMIT, format!("{kind} {axiom} took {elapsed:?}"))?;
        let oracle = oracle_check(&s, axiom.id()).map_err(|e| e.to_string())?;
        ensure(oracle == v.status.passed(), format!("{kind} {axiom}: oracle disagrees"))?;
        if want == Status::Fails {
            ensure(s.replay(&v).unwrap_or(false), format!("{kind} {axiom}: witness does not replay"))?;
        }
    }
    Ok(format!("5 verdicts match, slowest {slowest:?}"))
}

fn criterion_6() -> Outcome {
    let mut tables = 0;
    for (n, density, budget) in [(1, 0.5, 256), (2, 0.05, 200), (2, 0.5, 200), (3, 0.01, 200), (3, 0.2, 200)] {
        let mut spec = SearchSpec::new(n, Family::ExtensionalDeltas);
        spec.density = density;
        spec.budget = budget;
        spec.seed = 0x5eed + n as u64;
        for s in enumerate_structures(&spec).map_err(|e| e.to_string())? {
            let vs = s.verify(Some(&[AxiomId::StrictNCoh, AxiomId::ICoh2]));
            ensure(
                !(vs[0].status.passed() && vs[1].status == Status::Fails),
                format!("counterexample at n={n}"),
            )?;
            tables += 1;
        }
    }
    ensure(tables >= META_TABLES, format!("only {tables} tables"))?;
    for n in 1..=3 {
        let mut spec = SearchSpec::new(n, Family::ExtensionalDeltas);
        spec.required = vec![AxiomId::StrictNCoh];
        spec.forbidden = vec![AxiomId::ICoh2];
        spec.budget = 300;
        spec.seed = 7;
        let out = find_witness(&spec).map_err(|e| e.to_string())?;
        ensure(out.witness.is_none(), format!("find_witness returned a structure at n={n}"))?;
    }
    Ok(format!("{tables} tables, find_witness none"))
}

fn closed_form_agrees(s: &MssStructure) -> Result<(), String> {
    let ops = s.operators().unwrap();
    let index = ImageIndex::build(ops, &CheckPlan::default());
    let n = s.n();
    for c in 0..1u64 << n {
        let c = Subset::from_bits(n, c);
        let g = validity_grades(c, ops, DifferencePolicy::Contained, &index);
        let by_search = (0..1u64 << n).any(|v| ops.lower(Subset::from_bits(n, v)) == c);
        ensure(g.l_pre_valid == by_search, format!("search disagrees on {c:?}"))?;
        ensure(g.l_pre_valid_closed_form == by_search, format!("closed form disagrees on {c:?}"))?;
    }
    ensure(oracle_check(s, "l-pre-valid-closed-form") == Ok(true), "oracle disagrees")
}

fn criterion_7() -> Outcome {
    closed_form_agrees(&example()).map_err(|e| format!("example: {e}"))?;
    for (code, s) in three_element_structures() {
        closed_form_agrees(&s).map_err(|e| format!("relation {code}: {e}"))?;
    }
    Ok("16 subsets of the example and 512 structures agree".into())
}

fn criterion_8() -> Outcome {
    let mut subsets = 0;
    for (code, s) in three_element_structures() {
        let ops = s.operators().unwrap();
        for policy in [DifferencePolicy::Contained, DifferencePolicy::Total] {
            let v = check_proposition_all(ops, policy, &CheckPlan::default());
            ensure(v.status == Status::Holds, format!("relation {code} {policy:?}: {:?}", v.witness()))?;
        }
        ensure(oracle_check(&s, "proposition-def2") == Ok(true), format!("oracle on relation {code}"))?;
        subsets += 8;
    }
    Ok(format!("{subsets} subsets, no counterexample"))
}

fn run_validate(jobs: &str) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_msslab"))
        .args(["validate", FIXTURE, "--seed", "7", "--jobs", jobs])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), String::from_utf8_lossy(&out.stderr).into_owned())?;
    Ok(out.stdout)
}

fn criterion_9() -> Outcome {
    let a = run_validate("1")?;
    let b = run_validate("1")?;
    ensure(a == b, "single-threaded reports differ")?;
    let c = run_validate("4")?;
    let parse = |x: &[u8]| serde_json::from_slice::<serde_json::Value>(x).map_err(|e| e.to_string());
    ensure(parse(&a)? == parse(&c)?, "--jobs 4 report differs")?;
    Ok(format!("{} identical bytes", a.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("example granules", criterion_1),
        ("example deficits", criterion_2),
        ("compatibility", criterion_3),
        ("approximation laws", criterion_4),
        ("coherence table", criterion_5),
        ("strict-n-coh excludes i-coh-2 failure", criterion_6),
        ("closed form", criterion_7),
        ("proposition sweep", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail})", i + 1),
            Err(why) => {
                println!("FAIL criterion {}: {name} ({why})", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
