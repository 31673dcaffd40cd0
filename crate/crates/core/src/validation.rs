//! Rough validation of clusterings: deficits, validity grades,
//! traceability and δ-compatibility.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::delta::DeltaPredicate;
use crate::error::{Error, Result};
use crate::granules::OperatorSuite;
use crate::sets::{DifferencePolicy, Partial, Powerset, Subset};
use crate::verdict::{check_domain, check_tuples, CheckPlan, Coverage, Instance, Verdict};

/// Brute-force preimage search is refused above this size.
pub const BRUTE_FORCE_MAX: usize = 20;

/// Distinct nonempty clusters. Clusters may overlap and need not cover ⊤.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    n: usize,
    clusters: Vec<Subset>,
}

impl Clustering {
    pub fn new(n: usize, clusters: impl IntoIterator<Item = Subset>) -> Result<Self> {
        let clusters: Vec<Subset> = clusters.into_iter().collect();
        if clusters.is_empty() {
            return Err(Error::InvalidClustering("no clusters".into()));
        }
        for (k, c) in clusters.iter().enumerate() {
            if c.universe_len() != n {
                return Err(Error::UniverseMismatch {
                    left: n,
                    right: c.universe_len(),
                });
            }
            if c.is_empty() {
                return Err(Error::InvalidClustering(format!("cluster {k} is empty")));
            }
            if clusters[..k].contains(c) {
                return Err(Error::InvalidClustering(format!("cluster {k} is a duplicate")));
            }
        }
        Ok(Self { n, clusters })
    }

    pub fn universe_len(&self) -> usize {
        self.n
    }

    pub fn clusters(&self) -> &[Subset] {
        &self.clusters
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// κ, read extensionally.
    pub fn contains(&self, s: Subset) -> bool {
        self.clusters.contains(&s)
    }

    /// Clusters in canonical order, independent of input order.
    pub fn sorted(&self) -> Vec<Subset> {
        let mut v = self.clusters.clone();
        v.sort();
        v
    }
}

/// `(C ∖ l(C))^u`
pub fn lower_deficit(c: Subset, ops: &OperatorSuite, policy: DifferencePolicy) -> Partial {
    policy.apply(c, ops.lower(c)).map(|d| ops.upper(d))
}

/// `(u(C) ∖ C)^u`
pub fn upper_deficit(c: Subset, ops: &OperatorSuite, policy: DifferencePolicy) -> Partial {
    policy.apply(ops.upper(c), c).map(|d| ops.upper(d))
}

/// Images of `l` and `u` over the powerset, each mapped to its least preimage.
#[derive(Debug, Clone)]
pub struct ImageIndex {
    lower: HashMap<Subset, Subset>,
    upper: HashMap<Subset, Subset>,
    coverage: Coverage,
}

impl ImageIndex {
    /// Exhaustive up to [`BRUTE_FORCE_MAX`] elements, seeded sampling beyond.
    /// A sampled index can miss preimages, never invent them.
    pub fn build(ops: &OperatorSuite, plan: &CheckPlan) -> Self {
        let n = ops.universe_len();
        let mut idx = Self {
            lower: HashMap::new(),
            upper: HashMap::new(),
            coverage: Coverage::Exhaustive,
        };
        let mut record = |v: Subset| {
            let l = idx.lower.entry(ops.lower(v)).or_insert(v);
            *l = (*l).min(v);
            let u = idx.upper.entry(ops.upper(v)).or_insert(v);
            *u = (*u).min(v);
        };
        if n <= BRUTE_FORCE_MAX {
            for i in 0..1u64 << n {
                record(Subset::from_bits(n, i));
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
            for _ in 0..plan.samples {
                record(Subset::from_bits(n, rng.random::<u64>()));
            }
            idx.coverage = Coverage::Sampled {
                seed: plan.seed,
                samples: plan.samples,
            };
        }
        idx
    }

    pub fn coverage(&self) -> Coverage {
        self.coverage
    }

    /// Least known `V` with `l(V) = c`.
    pub fn lower_preimage(&self, c: Subset) -> Option<Subset> {
        self.lower.get(&c).copied()
    }

    /// Least known `V` with `u(V) = c`.
    pub fn upper_preimage(&self, c: Subset) -> Option<Subset> {
        self.upper.get(&c).copied()
    }
}

/// `∃V ∈ ℘(H): V = x`, evaluated by search. With total operators every
/// image is a member of the carrier, so this only fails on foreign values.
pub fn traceable(x: Subset, n: usize) -> bool {
    if x.universe_len() != n {
        return false;
    }
    if n <= BRUTE_FORCE_MAX {
        Powerset::new(n)
            .map(|mut p| p.any(|v| v == x))
            .unwrap_or(false)
    } else {
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterGrades {
    pub cluster: Subset,
    pub lower: Subset,
    pub upper: Subset,
    pub lower_deficit: Partial,
    pub upper_deficit: Partial,
    /// `l(C) = u(C) = C`
    pub lu_valid: bool,
    /// `∃V: l(V) = C`, by search
    pub l_pre_valid: bool,
    /// `l(C) = C`
    pub l_pre_valid_closed_form: bool,
    pub l_pre_witness: Option<Subset>,
    /// `∃V: u(V) = C`, by search
    pub u_pre_valid: bool,
    pub u_pre_witness: Option<Subset>,
    /// `∃V: V = l(C)`
    pub l_traceable: bool,
    /// `∃V: V = u(C)`
    pub u_traceable: bool,
}

pub fn validity_grades(
    c: Subset,
    ops: &OperatorSuite,
    policy: DifferencePolicy,
    index: &ImageIndex,
) -> ClusterGrades {
    let n = ops.universe_len();
    let (lower, upper) = (ops.lower(c), ops.upper(c));
    let l_pre_witness = index.lower_preimage(c);
    let u_pre_witness = index.upper_preimage(c);
    ClusterGrades {
        cluster: c,
        lower,
        upper,
        lower_deficit: lower_deficit(c, ops, policy),
        upper_deficit: upper_deficit(c, ops, policy),
        lu_valid: lower == c && upper == c,
        l_pre_valid: l_pre_witness.is_some(),
        l_pre_valid_closed_form: lower == c,
        l_pre_witness,
        u_pre_valid: u_pre_witness.is_some(),
        u_pre_witness,
        l_traceable: traceable(lower, n),
        u_traceable: traceable(upper, n),
    }
}

/// A grade holds for a clustering iff it holds for every cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AggregateGrades {
    pub lu_valid: bool,
    pub l_pre_valid: bool,
    pub u_pre_valid: bool,
    pub l_traceable: bool,
    pub u_traceable: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidityReport {
    pub clusters: Vec<ClusterGrades>,
    pub aggregate: AggregateGrades,
    pub proposition: Verdict,
    pub coverage: Coverage,
    pub policy: DifferencePolicy,
}

pub fn validate(cl: &Clustering, ops: &OperatorSuite, policy: DifferencePolicy, plan: &CheckPlan) -> ValidityReport {
    let index = ImageIndex::build(ops, plan);
    let clusters: Vec<ClusterGrades> = cl
        .clusters()
        .iter()
        .map(|&c| validity_grades(c, ops, policy, &index))
        .collect();
    let all = |f: fn(&ClusterGrades) -> bool| clusters.iter().all(f);
    let aggregate = AggregateGrades {
        lu_valid: all(|g| g.lu_valid),
        l_pre_valid: all(|g| g.l_pre_valid),
        u_pre_valid: all(|g| g.u_pre_valid),
        l_traceable: all(|g| g.l_traceable),
        u_traceable: all(|g| g.u_traceable),
    };
    let proposition = check_proposition_on(cl.clusters(), ops, policy);
    ValidityReport {
        clusters,
        aggregate,
        proposition,
        coverage: index.coverage(),
        policy,
    }
}

pub const PROPOSITION: &str = "proposition";

/// `lower deficit defined ⇒ l-traceable` and `upper deficit defined ⇒ u-traceable`.
pub fn proposition_instance(c: Subset, ops: &OperatorSuite, policy: DifferencePolicy) -> Instance {
    let n = ops.universe_len();
    let l = lower_deficit(c, ops, policy).is_defined();
    let u = upper_deficit(c, ops, policy).is_defined();
    if !l && !u {
        return Instance::Vacuous;
    }
    Instance::from_bool(
        (!l || traceable(ops.lower(c), n)) && (!u || traceable(ops.upper(c), n)),
    )
}

pub fn check_proposition(c: Subset, ops: &OperatorSuite, policy: DifferencePolicy) -> Verdict {
    check_proposition_on(&[c], ops, policy)
}

pub fn check_proposition_on(cs: &[Subset], ops: &OperatorSuite, policy: DifferencePolicy) -> Verdict {
    check_domain(PROPOSITION, &["C"], cs.iter().map(|&c| vec![c]), |t| {
        proposition_instance(t[0], ops, policy)
    })
    .with_note("traceability is automatic for total operators")
}

/// Sweep over every subset of the carrier.
pub fn check_proposition_all(ops: &OperatorSuite, policy: DifferencePolicy, plan: &CheckPlan) -> Verdict {
    check_tuples(PROPOSITION, &["C"], ops.universe_len(), plan, |t| {
        proposition_instance(t[0], ops, policy)
    })
    .with_note("traceability is automatic for total operators")
}

/// Which sets play the roles of the "closer" and "farther" side of a cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetRule {
    Cluster,
    Complement,
    Lower,
    Upper,
    /// `H ∖ u(A)`
    UpperComplement,
    /// Union of every other cluster, minus `A`.
    Others,
}

impl SetRule {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Cluster => "cluster",
            Self::Complement => "complement",
            Self::Lower => "lower",
            Self::Upper => "upper",
            Self::UpperComplement => "upper-complement",
            Self::Others => "others",
        }
    }

    fn needs_operators(self) -> bool {
        matches!(self, Self::Lower | Self::Upper | Self::UpperComplement)
    }

    fn apply(self, a: Subset, all: &[Subset], ops: Option<&OperatorSuite>) -> Subset {
        match self {
            Self::Cluster => a,
            Self::Complement => a.complement(),
            Self::Lower => ops.expect("checked").lower(a),
            Self::Upper => ops.expect("checked").upper(a),
            Self::UpperComplement => ops.expect("checked").upper(a).complement(),
            Self::Others => all
                .iter()
                .filter(|&&c| c != a)
                .fold(Subset::empty(a.universe_len()), |acc, c| acc.union(*c))
                .minus(a),
        }
    }
}

impl FromStr for SetRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "cluster" => Self::Cluster,
            "complement" => Self::Complement,
            "lower" => Self::Lower,
            "upper" => Self::Upper,
            "upper-complement" => Self::UpperComplement,
            "others" => Self::Others,
            other => return Err(Error::Config(format!("unknown set rule `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CompatibilityMode {
    /// For every cluster `A`, `a, b ∈ A` and `c ∉ A`: `δ{a}{b}{c}`.
    CluSingleton,
    /// For distinct clusters with `A∩B ≠ ∅` and `A∩C = ∅`: `δABC`.
    #[default]
    OverlapCloser,
    /// For every cluster `A`, `a ∈ A`, `b ∈ B(A)`, `c ∈ E(A)`: `δ{a}{b}{c}`.
    Gclue { closer: SetRule, farther: SetRule },
}

impl CompatibilityMode {
    pub fn name(&self) -> String {
        match self {
            Self::CluSingleton => "clue-singleton".into(),
            Self::OverlapCloser => "overlap-closer".into(),
            Self::Gclue { closer, farther } => {
                format!("gclue({},{})", closer.as_str(), farther.as_str())
            }
        }
    }
}

impl fmt::Display for CompatibilityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for CompatibilityMode {
    type Err = Error;

    /// `clue-singleton`, `overlap-closer` or `gclue(<rule>,<rule>)`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "clue-singleton" => Ok(Self::CluSingleton),
            "overlap-closer" => Ok(Self::OverlapCloser),
            _ => {
                let inner = s
                    .strip_prefix("gclue(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::Config(format!("unknown compatibility mode `{s}`")))?;
                let (b, e) = inner
                    .split_once(',')
                    .ok_or_else(|| Error::Config(format!("gclue needs two rules: `{s}`")))?;
                Ok(Self::Gclue {
                    closer: b.trim().parse()?,
                    farther: e.trim().parse()?,
                })
            }
        }
    }
}

/// The triples `(A, B, C)` the overlap-closer mode quantifies over, in canonical order.
pub fn overlap_triples(clusters: &[Subset]) -> Vec<Vec<Subset>> {
    let mut sorted = clusters.to_vec();
    sorted.sort();
    let mut out = Vec::new();
    for &a in &sorted {
        for &b in &sorted {
            if b == a || !a.intersects(b) {
                continue;
            }
            for &c in &sorted {
                if c != a && c != b && !a.intersects(c) {
                    out.push(vec![a, b, c]);
                }
            }
        }
    }
    out
}

/// Singleton-level triples `(A, {a}, {b}, {c})` for the element-wise modes.
fn element_triples(
    clusters: &[Subset],
    closer: SetRule,
    farther: SetRule,
    ops: Option<&OperatorSuite>,
) -> Vec<Vec<Subset>> {
    let mut sorted = clusters.to_vec();
    sorted.sort();
    let mut out = Vec::new();
    for &a in &sorted {
        let bs = closer.apply(a, &sorted, ops);
        let es = farther.apply(a, &sorted, ops);
        for x in a.singletons() {
            for y in bs.singletons() {
                for z in es.singletons() {
                    out.push(vec![a, x, y, z]);
                }
            }
        }
    }
    out
}

/// Whether `cl` is compatible with `d` under `mode`.
///
/// Clusters are visited in canonical order, so the verdict and its witness do
/// not depend on the order clusters were listed in.
pub fn check_compatibility(
    cl: &Clustering,
    d: &DeltaPredicate,
    mode: CompatibilityMode,
    ops: Option<&OperatorSuite>,
) -> Result<Verdict> {
    if cl.universe_len() != d.universe_len() {
        return Err(Error::UniverseMismatch {
            left: d.universe_len(),
            right: cl.universe_len(),
        });
    }
    let check = format!("compat:{}:{}", mode.name(), d.name());
    let verdict = match mode {
        CompatibilityMode::OverlapCloser => check_domain(
            &check,
            &["A", "B", "C"],
            overlap_triples(cl.clusters()),
            |t| Instance::from_bool(d.eval(t[0], t[1], t[2])),
        ),
        CompatibilityMode::CluSingleton | CompatibilityMode::Gclue { .. } => {
            let (closer, farther) = match mode {
                CompatibilityMode::Gclue { closer, farther } => (closer, farther),
                _ => (SetRule::Cluster, SetRule::Complement),
            };
            if (closer.needs_operators() || farther.needs_operators()) && ops.is_none() {
                return Err(Error::MissingOperators("gclue rule"));
            }
            check_domain(
                &check,
                &["A", "a", "b", "c"],
                element_triples(cl.clusters(), closer, farther, ops),
                |t| Instance::from_bool(d.eval(t[1], t[2], t[3])),
            )
        }
    };
    Ok(if verdict.instances_checked == 0 {
        Verdict {
            status: crate::verdict::Status::Vacuous,
            ..verdict
        }
    } else {
        verdict
    })
}

/// Whether a failing compatibility verdict's witness is an admissible tuple
/// on which `d` is false.
pub fn replay_compatibility(
    cl: &Clustering,
    d: &DeltaPredicate,
    mode: CompatibilityMode,
    ops: Option<&OperatorSuite>,
    v: &Verdict,
) -> Result<bool> {
    if v.status != crate::verdict::Status::Fails {
        return Ok(true);
    }
    let w = v
        .witness()
        .ok_or_else(|| Error::Config(format!("{} fails without a witness", v.check)))?;
    let t = w.values();
    let (domain, args) = match mode {
        CompatibilityMode::OverlapCloser => (overlap_triples(cl.clusters()), 0),
        CompatibilityMode::CluSingleton => {
            (element_triples(cl.clusters(), SetRule::Cluster, SetRule::Complement, ops), 1)
        }
        CompatibilityMode::Gclue { closer, farther } => {
            if (closer.needs_operators() || farther.needs_operators()) && ops.is_none() {
                return Err(Error::MissingOperators("gclue rule"));
            }
            (element_triples(cl.clusters(), closer, farther, ops), 1)
        }
    };
    if t.len() != args + 3 || !domain.contains(&t) {
        return Ok(false);
    }
    Ok(!d.eval(t[args], t[args + 1], t[args + 2]))
}
