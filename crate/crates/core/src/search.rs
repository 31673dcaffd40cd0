//! Finite model and counterexample search over small universes.

use std::str::FromStr;
use std::sync::Arc;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::delta::{BuiltinDelta, DeltaPredicate, DeltaSpec, SumOperation, TripleTable};
use crate::error::{Error, Result};
use crate::granules::{BinaryRelation, Granulation};
use crate::mss::{AxiomId, CheckOptions, MssStructure, Parthood};
use crate::sets::{Subset, Universe};
use crate::verdict::{CheckPlan, Status, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Granular structures from every binary relation (predecessor granules).
    Relations,
    /// Discrete granulation with a varying extensional δ.
    ExtensionalDeltas,
    /// Every family of nonempty granules.
    Granulations,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Relations => "relations",
            Self::ExtensionalDeltas => "extensional-deltas",
            Self::Granulations => "granulations",
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "relations" => Ok(Self::Relations),
            "extensional-deltas" | "extensional" => Ok(Self::ExtensionalDeltas),
            "granulations" => Ok(Self::Granulations),
            other => Err(Error::Config(format!("unknown structure family `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SumSpec {
    #[default]
    TotalUnion,
    GranularSum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpec {
    pub n: usize,
    pub family: Family,
    /// δ attached to relation and granulation structures; `None` leaves it unbound.
    pub delta: Option<DeltaSpec>,
    pub sum: SumSpec,
    pub required: Vec<AxiomId>,
    pub forbidden: Vec<AxiomId>,
    /// Maximum number of structures examined.
    pub budget: u64,
    pub seed: u64,
    /// Inclusion probability for sampled pairs or triples.
    pub density: f64,
    /// Demand exhaustive enumeration even past the usual size limits.
    pub exhaustive: bool,
    pub plan: CheckPlan,
}

impl SearchSpec {
    pub fn new(n: usize, family: Family) -> Self {
        Self {
            n,
            family,
            delta: Some(DeltaSpec::Builtin(BuiltinDelta::E0)),
            sum: SumSpec::TotalUnion,
            required: Vec::new(),
            forbidden: Vec::new(),
            budget: 100_000,
            seed: 0,
            density: 0.5,
            exhaustive: false,
            plan: CheckPlan::default(),
        }
    }

    /// Size of the full space, `None` if it does not fit in `u128`.
    pub fn space_size(&self) -> Option<u128> {
        let n = self.n as u32;
        let bits = match self.family {
            Family::Relations => n * n,
            Family::Granulations if n < 7 => (1 << n) - 1,
            Family::ExtensionalDeltas if n < 3 => 1 << (3 * n),
            _ => return None,
        };
        (bits < 128).then(|| 1u128 << bits)
    }

    fn exhaustive_by_default(&self) -> bool {
        match self.family {
            Family::Relations | Family::Granulations => self.n <= 3,
            Family::ExtensionalDeltas => self.n == 1,
        }
    }
}

/// A lazily generated sequence of structures.
pub struct Enumeration {
    pub exhaustive: bool,
    /// Number of structures the iterator will yield.
    pub total: u64,
    iter: Box<dyn Iterator<Item = MssStructure> + Send>,
}

impl Iterator for Enumeration {
    type Item = MssStructure;

    fn next(&mut self) -> Option<MssStructure> {
        self.iter.next()
    }
}

fn assemble(spec: &SearchSpec, u: &Arc<Universe>, g: Granulation) -> MssStructure {
    let sum = match spec.sum {
        SumSpec::TotalUnion => SumOperation::TotalUnion,
        SumSpec::GranularSum => SumOperation::GranularSum(g.clone()),
    };
    let mut s = MssStructure::builder(u.clone())
        .parthood(Parthood::Inclusion)
        .lattice()
        .bounds()
        .granulation(g)
        .sum(sum)
        .options(CheckOptions {
            plan: spec.plan,
            ..CheckOptions::default()
        })
        .build()
        .expect("same universe");
    if let Some(d) = &spec.delta {
        let d = d.build(spec.n, s.operators().cloned()).expect("validated up front");
        s = s.with_delta(d).expect("same universe");
    }
    s
}

fn with_table(spec: &SearchSpec, u: &Arc<Universe>, t: TripleTable) -> MssStructure {
    let bare = SearchSpec {
        delta: None,
        ..spec.clone()
    };
    assemble(&bare, u, Granulation::discrete(spec.n))
        .with_delta(DeltaPredicate::extensional(t))
        .expect("same universe")
}

fn random_relation(n: usize, density: f64, rng: &mut ChaCha8Rng) -> BinaryRelation {
    let pairs: Vec<(usize, usize)> = (0..n * n)
        .filter(|_| rng.random_bool(density))
        .map(|k| (k / n, k % n))
        .collect();
    BinaryRelation::new(n, pairs).expect("in range")
}

fn granulation_from_code(n: usize, code: u64) -> Granulation {
    let nonempty = 1..(1u64 << n);
    let gs = nonempty
        .filter(|&bits| code >> (bits - 1) & 1 == 1)
        .map(|bits| Subset::from_bits(n, bits));
    Granulation::new(n, gs).expect("nonempty granules")
}

/// Structures of `spec.family` in a fixed order: code order when exhaustive,
/// seeded draws otherwise.
pub fn enumerate_structures(spec: &SearchSpec) -> Result<Enumeration> {
    if spec.budget == 0 {
        return Err(Error::Config("search budget must be positive".into()));
    }
    if !(0.0..=1.0).contains(&spec.density) {
        return Err(Error::Config(format!("density {} outside [0, 1]", spec.density)));
    }
    if spec.family == Family::ExtensionalDeltas && spec.n > crate::delta::EXTENSIONAL_MAX {
        return Err(Error::ExtensionalTooLarge {
            size: spec.n,
            max: crate::delta::EXTENSIONAL_MAX,
        });
    }
    let u = Arc::new(Universe::numbered(spec.n)?);
    if let Some(d) = &spec.delta {
        // surface δ construction errors once, up front
        let probe = Arc::new(crate::granules::OperatorSuite::granular(Granulation::discrete(spec.n)));
        d.build(spec.n, Some(probe))?;
    }

    let exhaustive = spec.exhaustive || spec.exhaustive_by_default();
    let spec = spec.clone();
    if exhaustive {
        let size = spec.space_size();
        let total = match size {
            Some(t) if t <= u128::from(spec.budget) => t as u64,
            other => {
                return Err(Error::BudgetExceeded {
                    required: other.unwrap_or(u128::MAX),
                    budget: spec.budget,
                })
            }
        };
        let iter: Box<dyn Iterator<Item = MssStructure> + Send> = match spec.family {
            Family::Relations => Box::new((0..total).map(move |code| {
                assemble(&spec, &u, Granulation::predecessor(&BinaryRelation::from_code(spec.n, code)))
            })),
            Family::Granulations => Box::new(
                (0..total).map(move |code| assemble(&spec, &u, granulation_from_code(spec.n, code))),
            ),
            Family::ExtensionalDeltas => Box::new((0..total).map(move |code| {
                with_table(&spec, &u, TripleTable::from_code(spec.n, code).expect("n ≤ 2"))
            })),
        };
        return Ok(Enumeration {
            exhaustive: true,
            total,
            iter,
        });
    }

    let total = spec.budget;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let iter: Box<dyn Iterator<Item = MssStructure> + Send> = match spec.family {
        Family::Relations => Box::new((0..total).map(move |_| {
            let r = random_relation(spec.n, spec.density, &mut rng);
            assemble(&spec, &u, Granulation::predecessor(&r))
        })),
        Family::Granulations => Box::new((0..total).map(move |_| {
            let mut gs: Vec<Subset> = Vec::new();
            while gs.is_empty() {
                gs = (0..spec.n)
                    .map(|_| Subset::from_bits(spec.n, rng.random::<u64>()))
                    .filter(|s| !s.is_empty())
                    .collect();
            }
            assemble(&spec, &u, Granulation::new(spec.n, gs).expect("nonempty"))
        })),
        Family::ExtensionalDeltas => Box::new((0..total).map(move |_| {
            let t = TripleTable::random(spec.n, spec.density, &mut rng).expect("n checked");
            with_table(&spec, &u, t)
        })),
    };
    Ok(Enumeration {
        exhaustive: false,
        total,
        iter,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Found {
    /// Position in the enumeration.
    pub index: u64,
    pub structure: MssStructure,
    /// Verdicts for the required and forbidden axioms.
    pub verdicts: Vec<Verdict>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub examined: u64,
    pub exhaustive: bool,
    pub witness: Option<Found>,
}

/// First structure on which every required axiom passes and every forbidden
/// one fails.
pub fn find_witness(spec: &SearchSpec) -> Result<SearchOutcome> {
    let axioms: Vec<AxiomId> = spec.required.iter().chain(&spec.forbidden).copied().collect();
    let mut e = enumerate_structures(spec)?;
    let exhaustive = e.exhaustive;
    let mut examined = 0;
    for (index, s) in e.by_ref().enumerate() {
        examined += 1;
        let verdicts = s.verify(Some(&axioms));
        let (req, forb) = verdicts.split_at(spec.required.len());
        if req.iter().all(|v| v.status.passed()) && forb.iter().all(|v| v.status == Status::Fails) {
            return Ok(SearchOutcome {
                examined,
                exhaustive,
                witness: Some(Found {
                    index: index as u64,
                    structure: s,
                    verdicts,
                }),
            });
        }
    }
    Ok(SearchOutcome {
        examined,
        exhaustive,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_counts() {
        for (n, count) in [(1, 2), (2, 16), (3, 512)] {
            let e = enumerate_structures(&SearchSpec::new(n, Family::Relations)).unwrap();
            assert!(e.exhaustive);
            assert_eq!(e.total, count);
            assert_eq!(e.count() as u64, count);
        }
    }

    #[test]
    fn granulation_and_table_counts() {
        let e = enumerate_structures(&SearchSpec::new(2, Family::Granulations)).unwrap();
        assert_eq!(e.total, 8);
        let e = enumerate_structures(&SearchSpec::new(1, Family::ExtensionalDeltas)).unwrap();
        assert_eq!((e.exhaustive, e.total), (true, 256));
        let mut spec = SearchSpec::new(2, Family::ExtensionalDeltas);
        spec.budget = 10;
        let e = enumerate_structures(&spec).unwrap();
        assert_eq!((e.exhaustive, e.count()), (false, 10));
    }

    #[test]
    fn infeasible_requests_report_required_budget() {
        let mut spec = SearchSpec::new(3, Family::Relations);
        spec.budget = 100;
        assert!(matches!(
            enumerate_structures(&spec),
            Err(Error::BudgetExceeded { required: 512, budget: 100 })
        ));
        let mut spec = SearchSpec::new(2, Family::ExtensionalDeltas);
        spec.exhaustive = true;
        assert!(matches!(enumerate_structures(&spec), Err(Error::BudgetExceeded { .. })));
        spec.budget = 0;
        assert!(enumerate_structures(&spec).is_err());
    }

    #[test]
    fn sampled_enumeration_is_reproducible() {
        let mut spec = SearchSpec::new(4, Family::Relations);
        spec.budget = 20;
        spec.seed = 11;
        let a: Vec<_> = enumerate_structures(&spec).unwrap().collect();
        let b: Vec<_> = enumerate_structures(&spec).unwrap().collect();
        assert_eq!(a, b);
        spec.seed = 12;
        let c: Vec<_> = enumerate_structures(&spec).unwrap().collect();
        assert_ne!(a, c);
    }

    #[test]
    fn search_examples() {
        let mut spec = SearchSpec::new(2, Family::Relations);
        spec.required = vec![AxiomId::ICoh];
        let out = find_witness(&spec).unwrap();
        assert_eq!(out.witness.unwrap().index, 0);

        spec.delta = Some(DeltaSpec::Builtin(BuiltinDelta::E1));
        spec.required = vec![AxiomId::Trans1];
        let out = find_witness(&spec).unwrap();
        assert!(out.witness.is_none());
        assert_eq!((out.examined, out.exhaustive), (16, true));

        let mut spec = SearchSpec::new(2, Family::ExtensionalDeltas);
        spec.required = vec![AxiomId::StrictNCoh];
        spec.forbidden = vec![AxiomId::ICoh2];
        spec.budget = 500;
        for density in [0.02, 0.1, 0.5] {
            spec.density = density;
            assert!(find_witness(&spec).unwrap().witness.is_none());
        }
    }

    #[test]
    fn forbidden_axioms_must_fail() {
        let mut spec = SearchSpec::new(2, Family::Relations);
        spec.delta = Some(DeltaSpec::Builtin(BuiltinDelta::E0));
        spec.forbidden = vec![AxiomId::ICoh2];
        let w = find_witness(&spec).unwrap().witness.unwrap();
        assert_eq!(w.verdicts[0].status, Status::Fails);
    }
}
