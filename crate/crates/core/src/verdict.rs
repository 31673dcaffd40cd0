use std::fmt;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::sets::Subset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Holds,
    Fails,
    /// Every instance had a false antecedent.
    Vacuous,
    /// A slot the check needs is not bound.
    Deferred,
    /// The condition has no statement to evaluate.
    Unspecified,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Vacuous => "vacuous",
            Status::Deferred => "deferred",
            Status::Unspecified => "unspecified",
        }
    }

    /// Holds or vacuous.
    pub fn passed(self) -> bool {
        matches!(self, Status::Holds | Status::Vacuous)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coverage {
    Exhaustive,
    Sampled { seed: u64, samples: u64 },
    NotEvaluated,
}

/// Variable bindings for one instance of a check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub bindings: Vec<(String, Subset)>,
}

impl Witness {
    pub fn new(vars: &[&str], values: &[Subset]) -> Self {
        Self {
            bindings: vars
                .iter()
                .zip(values)
                .map(|(v, s)| (v.to_string(), *s))
                .collect(),
        }
    }

    pub fn values(&self) -> Vec<Subset> {
        self.bindings.iter().map(|(_, s)| *s).collect()
    }

    pub fn get(&self, var: &str) -> Option<Subset> {
        self.bindings.iter().find(|(v, _)| v == var).map(|(_, s)| *s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub check: String,
    pub status: Status,
    /// Counterexamples; nonempty exactly when the status is `Fails`.
    pub witnesses: Vec<Witness>,
    /// Existential support for a passing check (e.g. a definite superset).
    pub evidence: Vec<Witness>,
    pub instances_checked: u64,
    pub coverage: Coverage,
    pub note: Option<String>,
}

impl Verdict {
    pub fn deferred(check: impl Into<String>, missing: &str) -> Self {
        Self {
            check: check.into(),
            status: Status::Deferred,
            witnesses: Vec::new(),
            evidence: Vec::new(),
            instances_checked: 0,
            coverage: Coverage::NotEvaluated,
            note: Some(format!("needs unbound slot `{missing}`")),
        }
    }

    pub fn unspecified(check: impl Into<String>, note: &str) -> Self {
        Self {
            check: check.into(),
            status: Status::Unspecified,
            witnesses: Vec::new(),
            evidence: Vec::new(),
            instances_checked: 0,
            coverage: Coverage::NotEvaluated,
            note: Some(note.to_string()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn witness(&self) -> Option<&Witness> {
        self.witnesses.first()
    }
}

/// Outcome of a single instance of a universally quantified condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Instance {
    Satisfied,
    /// Antecedent false, or a partial term undefined.
    Vacuous,
    Violated,
}

impl Instance {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Instance::Satisfied
        } else {
            Instance::Violated
        }
    }

    /// `antecedent → consequent`.
    pub fn implication(antecedent: bool, consequent: impl FnOnce() -> bool) -> Self {
        if !antecedent {
            Instance::Vacuous
        } else {
            Self::from_bool(consequent())
        }
    }
}

/// How quantification over subset tuples is carried out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckPlan {
    /// Universes up to this size are always enumerated exhaustively.
    pub exhaustive_up_to: usize,
    /// Sample count for larger universes; also the instance budget under which
    /// a larger universe is still enumerated exhaustively.
    pub samples: u64,
    pub seed: u64,
}

impl Default for CheckPlan {
    fn default() -> Self {
        Self {
            exhaustive_up_to: 4,
            samples: 1_000_000,
            seed: 0,
        }
    }
}

impl CheckPlan {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    /// Exhaustive when the universe is small or `2^(n·arity)` fits the sample budget.
    pub fn is_exhaustive(&self, n: usize, arity: usize) -> bool {
        let bits = n * arity;
        bits < 64 && (n <= self.exhaustive_up_to || (1u64 << bits) <= self.samples)
    }
}

fn stream_seed(seed: u64, check: &str) -> u64 {
    // FNV-1a over the check id keeps streams distinct per check.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in check.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    seed ^ h
}

/// Runs a universally quantified condition over all `vars.len()`-tuples of
/// subsets of an `n`-element universe.
///
/// Exhaustive runs stop at the first violation, which is the minimal one in
/// canonical order. Sampled runs draw the full sample and report the minimal
/// violation seen.
pub fn check_tuples(
    check: &str,
    vars: &[&str],
    n: usize,
    plan: &CheckPlan,
    mut instance: impl FnMut(&[Subset]) -> Instance,
) -> Verdict {
    let arity = vars.len();
    let mut satisfied = false;
    let mut checked = 0u64;
    let mut worst: Option<Vec<Subset>> = None;
    let coverage;

    if plan.is_exhaustive(n, arity) {
        coverage = Coverage::Exhaustive;
        let total = 1u64 << (n * arity);
        let mask = (1u64 << n) - 1;
        let mut tuple = vec![Subset::empty(n); arity];
        // first variable in the most significant position gives canonical tuple order
        for code in 0..total {
            for (k, t) in tuple.iter_mut().enumerate() {
                *t = Subset::from_bits(n, (code >> (n * (arity - 1 - k))) & mask);
            }
            checked += 1;
            match instance(&tuple) {
                Instance::Satisfied => satisfied = true,
                Instance::Vacuous => {}
                Instance::Violated => {
                    worst = Some(tuple.clone());
                    break;
                }
            }
        }
    } else {
        coverage = Coverage::Sampled {
            seed: plan.seed,
            samples: plan.samples,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(plan.seed, check));
        let mut tuple = vec![Subset::empty(n); arity];
        for _ in 0..plan.samples {
            for t in tuple.iter_mut() {
                *t = Subset::from_bits(n, rng.random::<u64>());
            }
            checked += 1;
            match instance(&tuple) {
                Instance::Satisfied => satisfied = true,
                Instance::Vacuous => {}
                Instance::Violated => {
                    if worst.as_ref().is_none_or(|w| tuple < *w) {
                        worst = Some(tuple.clone());
                    }
                }
            }
        }
    }

    finish(check, vars, worst, satisfied, checked, coverage)
}

/// Same contract as [`check_tuples`] over an explicit, finite domain of tuples.
pub fn check_domain<I>(
    check: &str,
    vars: &[&str],
    domain: I,
    mut instance: impl FnMut(&[Subset]) -> Instance,
) -> Verdict
where
    I: IntoIterator<Item = Vec<Subset>>,
{
    let mut satisfied = false;
    let mut checked = 0u64;
    let mut worst = None;
    for tuple in domain {
        checked += 1;
        match instance(&tuple) {
            Instance::Satisfied => satisfied = true,
            Instance::Vacuous => {}
            Instance::Violated => {
                worst = Some(tuple);
                break;
            }
        }
    }
    finish(check, vars, worst, satisfied, checked, Coverage::Exhaustive)
}

fn finish(
    check: &str,
    vars: &[&str],
    worst: Option<Vec<Subset>>,
    satisfied: bool,
    checked: u64,
    coverage: Coverage,
) -> Verdict {
    let (status, witnesses) = match worst {
        Some(t) => (Status::Fails, vec![Witness::new(vars, &t)]),
        None if satisfied || checked == 0 => (Status::Holds, Vec::new()),
        None => (Status::Vacuous, Vec::new()),
    };
    Verdict {
        check: check.to_string(),
        status,
        witnesses,
        evidence: Vec::new(),
        instances_checked: checked,
        coverage,
        note: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_counts_all_tuples() {
        let v = check_tuples("t", &["a", "b"], 3, &CheckPlan::default(), |_| {
            Instance::Satisfied
        });
        assert_eq!(v.status, Status::Holds);
        assert_eq!(v.instances_checked, 64);
        assert_eq!(v.coverage, Coverage::Exhaustive);
    }

    #[test]
    fn first_violation_is_minimal() {
        let v = check_tuples("t", &["a", "b"], 2, &CheckPlan::default(), |t| {
            Instance::from_bool(!(t[0].len() == 1 && t[1].len() == 2))
        });
        assert_eq!(v.status, Status::Fails);
        let w = v.witness().unwrap();
        assert_eq!(w.get("a"), Some(Subset::from_bits(2, 0b01)));
        assert_eq!(w.get("b"), Some(Subset::from_bits(2, 0b11)));
    }

    #[test]
    fn all_vacuous_is_vacuous() {
        let v = check_tuples("t", &["a"], 2, &CheckPlan::default(), |_| Instance::Vacuous);
        assert_eq!(v.status, Status::Vacuous);
        assert!(v.status.passed());
    }

    #[test]
    fn sampling_is_seeded_and_reproducible() {
        let plan = CheckPlan {
            exhaustive_up_to: 0,
            samples: 500,
            seed: 7,
        };
        let run = || {
            check_tuples("t", &["a", "b", "c"], 12, &plan, |t| {
                Instance::from_bool(t[0].len() + t[1].len() < 16)
            })
        };
        let (x, y) = (run(), run());
        assert_eq!(x, y);
        assert_eq!(
            x.coverage,
            Coverage::Sampled {
                seed: 7,
                samples: 500
            }
        );
        assert_eq!(x.instances_checked, 500);
    }

    #[test]
    fn small_instance_spaces_stay_exhaustive() {
        let plan = CheckPlan::default();
        assert!(plan.is_exhaustive(4, 4));
        assert!(plan.is_exhaustive(6, 3));
        assert!(!plan.is_exhaustive(7, 3));
        assert!(plan.is_exhaustive(19, 1));
        assert!(!plan.is_exhaustive(20, 1));
    }
}
