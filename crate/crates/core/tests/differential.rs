//! Every verdict on a universe of at most three elements must agree with the
//! brute-force oracle.

use std::sync::Arc;

use msslab_core::delta::{BuiltinDelta, DeltaPredicate, SumOperation, TripleTable, Trans1Reading};
use msslab_core::granules::{BinaryRelation, Granulation};
use msslab_core::oracle::{oracle_check, CLAIMS, COMPAT_OVERLAP_CLOSER};
use msslab_core::validation::{check_compatibility, Clustering, CompatibilityMode};
use msslab_core::{AxiomId, CheckOptions, MssStructure, Parthood, Status, Subset, Universe};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn agree(s: &MssStructure, label: &str) {
    for v in s.verify(None) {
        match v.status {
            Status::Deferred | Status::Unspecified => continue,
            status => {
                let oracle = oracle_check(s, &v.check).unwrap();
                assert_eq!(status.passed(), oracle, "{} on {label}", v.check);
            }
        }
    }
}

fn structure(n: usize, code: u64, sum: bool) -> MssStructure {
    let u = Arc::new(Universe::numbered(n).unwrap());
    let g = Granulation::predecessor(&BinaryRelation::from_code(n, code));
    let sum = if sum {
        SumOperation::GranularSum(g.clone())
    } else {
        SumOperation::TotalUnion
    };
    let k = Clustering::new(n, (1..1u64 << n).step_by(2).map(|b| Subset::from_bits(n, b))).unwrap();
    MssStructure::builder(u)
        .parthood(Parthood::Inclusion)
        .lattice()
        .bounds()
        .granulation(g)
        .sum(sum)
        .kappa(k)
        .build()
        .unwrap()
}

#[test]
fn relations_up_to_two_elements_with_every_builtin() {
    for n in 1..=2 {
        for code in 0..1u64 << (n * n) {
            for sum in [false, true] {
                let base = structure(n, code, sum);
                agree(&base, &format!("n={n} relation {code}"));
                for c in CLAIMS {
                    assert!(oracle_check(&base, c).unwrap(), "{c}");
                }
                for k in BuiltinDelta::ALL {
                    let d = DeltaPredicate::builtin(k, n, base.operators().cloned()).unwrap();
                    agree(&base.clone().with_delta(d).unwrap(), &format!("n={n} relation {code} {k}"));
                }
            }
        }
    }
}

#[test]
fn three_element_relations() {
    for code in 0..1u64 << 9 {
        let base = structure(3, code, code % 2 == 0);
        agree(&base, &format!("relation {code}"));
        // δ batteries are costlier; a stride still reaches every granulation shape class
        if code % 5 == 0 {
            for k in BuiltinDelta::ALL {
                let d = DeltaPredicate::builtin(k, 3, base.operators().cloned()).unwrap();
                agree(&base.clone().with_delta(d).unwrap(), &format!("relation {code} {k}"));
            }
        }
    }
}

#[test]
fn extensional_tables() {
    let one = Arc::new(Universe::numbered(1).unwrap());
    for code in 0..256 {
        let s = MssStructure::builder(one.clone())
            .sum(SumOperation::TotalUnion)
            .delta(DeltaPredicate::extensional(TripleTable::from_code(1, code).unwrap()))
            .build()
            .unwrap();
        agree(&s, &format!("table {code}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let two = Arc::new(Universe::numbered(2).unwrap());
    for i in 0..200 {
        let density = [0.02, 0.1, 0.5, 0.9][i % 4];
        let t = TripleTable::random(2, density, &mut rng).unwrap();
        let mut s = MssStructure::builder(two.clone())
            .sum(SumOperation::TotalUnion)
            .delta(DeltaPredicate::extensional(t))
            .build()
            .unwrap();
        agree(&s, &format!("sample {i}"));
        s.set_options(CheckOptions {
            trans1: Trans1Reading::Fixed(Subset::from_bits(2, 0b01)),
            ..CheckOptions::default()
        });
        assert_eq!(
            s.check(AxiomId::Trans1).status.passed(),
            oracle_check(&s, "trans-1").unwrap()
        );
    }
}

#[test]
fn overlap_closer_compatibility() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for code in (0..1u64 << 9).step_by(3) {
        let base = structure(3, code, false);
        for _ in 0..4 {
            let picks: Vec<Subset> = (1..8u64)
                .filter(|_| rand::RngExt::random_bool(&mut rng, 0.5))
                .map(|b| Subset::from_bits(3, b))
                .collect();
            let Ok(k) = Clustering::new(3, picks) else { continue };
            for kind in BuiltinDelta::ALL {
                let d = DeltaPredicate::builtin(kind, 3, base.operators().cloned()).unwrap();
                let v = check_compatibility(&k, &d, CompatibilityMode::OverlapCloser, base.operators().map(|o| &**o)).unwrap();
                let s = base.clone().with_delta(d).unwrap().with_kappa(k.clone()).unwrap();
                assert_eq!(v.status.passed(), oracle_check(&s, COMPAT_OVERLAP_CLOSER).unwrap(), "{kind} relation {code}");
            }
        }
    }
}
