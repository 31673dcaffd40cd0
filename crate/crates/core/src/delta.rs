//! The ternary nearness predicate δ and the partial sum ⊕.
//!
//! `δabc` reads "a is closer to b than to c". Predicates are either one of the
//! set-theoretic builtins, induced by a nearness map `f` through
//! `δabc ⇔ f(a,b) ⊆ f(a,c)`, or given extensionally by a triple table.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, RngExt};

use crate::error::{Error, Result};
use crate::granules::{Granulation, OperatorSuite};
use crate::sets::{omega_equal, omega_star_equal, Partial, Subset};
use crate::verdict::{check_tuples, CheckPlan, Instance, Verdict};

/// Extensional tables are stored densely over `(2^n)^3` triples.
pub const EXTENSIONAL_MAX: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BuiltinDelta {
    /// `a∪b ⊆ a∪c`
    E0,
    /// `a∪b ⊊ a∪c`
    E1,
    /// `l(a∩c) ⊊ l(a∩b)`
    E2,
    /// `u(a∪b) ⊆ u(a∪c)`
    UE1,
}

impl BuiltinDelta {
    pub const ALL: [BuiltinDelta; 4] = [Self::E0, Self::E1, Self::E2, Self::UE1];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::E0 => "E0",
            Self::E1 => "E1",
            Self::E2 => "E2",
            Self::UE1 => "uE1",
        }
    }

    pub fn needs_operators(self) -> bool {
        matches!(self, Self::E2 | Self::UE1)
    }
}

impl FromStr for BuiltinDelta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "E0" => Ok(Self::E0),
            "E1" => Ok(Self::E1),
            "E2" => Ok(Self::E2),
            "uE1" | "UE1" => Ok(Self::UE1),
            other => Err(Error::Config(format!("unknown builtin delta `{other}`"))),
        }
    }
}

impl fmt::Display for BuiltinDelta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A map `f : S² → S` making δ explicit.
#[derive(Debug, Clone, PartialEq)]
pub enum NearnessMap {
    /// `f(a,b) = a ∪ b`
    Union,
    /// `f(a,b) = u(a ∪ b)`
    UpperOfUnion(Arc<OperatorSuite>),
    /// `values[a·2^n + b]`
    Table { n: usize, values: Vec<Subset> },
}

impl NearnessMap {
    pub fn table(n: usize, values: Vec<Subset>) -> Result<Self> {
        if n > EXTENSIONAL_MAX {
            return Err(Error::ExtensionalTooLarge {
                size: n,
                max: EXTENSIONAL_MAX,
            });
        }
        let expected = 1usize << (2 * n);
        if values.len() != expected {
            return Err(Error::TableSize {
                got: values.len(),
                expected,
            });
        }
        Ok(Self::Table { n, values })
    }

    pub fn apply(&self, a: Subset, b: Subset) -> Subset {
        match self {
            Self::Union => a.union(b),
            Self::UpperOfUnion(ops) => ops.upper(a.union(b)),
            Self::Table { n, values } => values[(a.index() << n) | b.index()],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Union => "union",
            Self::UpperOfUnion(_) => "upper-of-union",
            Self::Table { .. } => "table",
        }
    }
}

/// A set of subset triples, stored as a dense bitmap.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TripleTable {
    n: usize,
    words: Vec<u64>,
}

impl TripleTable {
    pub fn empty(n: usize) -> Result<Self> {
        if n > EXTENSIONAL_MAX {
            return Err(Error::ExtensionalTooLarge {
                size: n,
                max: EXTENSIONAL_MAX,
            });
        }
        let bits = 1usize << (3 * n);
        Ok(Self {
            n,
            words: vec![0; bits.div_ceil(64)],
        })
    }

    pub fn full(n: usize) -> Result<Self> {
        let mut t = Self::empty(n)?;
        for k in 0..t.capacity() {
            t.set_code(k);
        }
        Ok(t)
    }

    pub fn from_triples<I>(n: usize, triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Subset, Subset, Subset)>,
    {
        let mut t = Self::empty(n)?;
        for (a, b, c) in triples {
            for s in [a, b, c] {
                if s.universe_len() != n {
                    return Err(Error::UniverseMismatch {
                        left: n,
                        right: s.universe_len(),
                    });
                }
            }
            t.insert(a, b, c);
        }
        Ok(t)
    }

    /// Each triple is included independently with probability `density`.
    pub fn random<R: Rng + ?Sized>(n: usize, density: f64, rng: &mut R) -> Result<Self> {
        let mut t = Self::empty(n)?;
        let p = density.clamp(0.0, 1.0);
        for k in 0..t.capacity() {
            if rng.random_bool(p) {
                t.set_code(k);
            }
        }
        Ok(t)
    }

    /// Table number `code` in the enumeration of all tables over a 1-element universe.
    pub fn from_code(n: usize, code: u64) -> Result<Self> {
        let mut t = Self::empty(n)?;
        for k in 0..t.capacity().min(64) {
            if code >> k & 1 == 1 {
                t.set_code(k);
            }
        }
        Ok(t)
    }

    pub fn universe_len(&self) -> usize {
        self.n
    }

    fn capacity(&self) -> usize {
        1usize << (3 * self.n)
    }

    fn code(&self, a: Subset, b: Subset, c: Subset) -> usize {
        (((a.index() << self.n) | b.index()) << self.n) | c.index()
    }

    fn set_code(&mut self, k: usize) {
        self.words[k / 64] |= 1u64 << (k % 64);
    }

    pub fn insert(&mut self, a: Subset, b: Subset, c: Subset) {
        let k = self.code(a, b, c);
        self.set_code(k);
    }

    pub fn contains(&self, a: Subset, b: Subset, c: Subset) -> bool {
        let k = self.code(a, b, c);
        self.words[k / 64] >> (k % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Member triples in canonical order.
    pub fn triples(&self) -> impl Iterator<Item = (Subset, Subset, Subset)> + '_ {
        let n = self.n;
        let m = (1usize << n) - 1;
        (0..self.capacity())
            .filter(move |&k| self.words[k / 64] >> (k % 64) & 1 == 1)
            .map(move |k| {
                (
                    Subset::from_bits(n, (k >> (2 * n)) as u64),
                    Subset::from_bits(n, ((k >> n) & m) as u64),
                    Subset::from_bits(n, (k & m) as u64),
                )
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Rule {
    Builtin(BuiltinDelta),
    Def0(NearnessMap),
    Extensional(TripleTable),
}

/// A ternary predicate on the powerset of an `n`-element universe.
///
/// Predicates that read approximations (`E2`, `uE1`) capture the operator
/// suite they were built with, so the same formula over two granulations
/// yields two different predicates.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaPredicate {
    n: usize,
    rule: Rule,
    ops: Option<Arc<OperatorSuite>>,
}

impl DeltaPredicate {
    pub fn builtin(kind: BuiltinDelta, n: usize, ops: Option<Arc<OperatorSuite>>) -> Result<Self> {
        if kind.needs_operators() && ops.is_none() {
            return Err(Error::MissingOperators(kind.as_str()));
        }
        if let Some(o) = &ops {
            if o.universe_len() != n {
                return Err(Error::UniverseMismatch {
                    left: n,
                    right: o.universe_len(),
                });
            }
        }
        Ok(Self {
            n,
            rule: Rule::Builtin(kind),
            ops,
        })
    }

    pub fn def0(n: usize, f: NearnessMap) -> Result<Self> {
        match &f {
            NearnessMap::Table { n: m, .. } if *m != n => {
                return Err(Error::UniverseMismatch { left: n, right: *m })
            }
            NearnessMap::UpperOfUnion(ops) if ops.universe_len() != n => {
                return Err(Error::UniverseMismatch {
                    left: n,
                    right: ops.universe_len(),
                })
            }
            _ => {}
        }
        Ok(Self {
            n,
            rule: Rule::Def0(f),
            ops: None,
        })
    }

    pub fn extensional(table: TripleTable) -> Self {
        Self {
            n: table.universe_len(),
            rule: Rule::Extensional(table),
            ops: None,
        }
    }

    pub fn universe_len(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> String {
        match &self.rule {
            Rule::Builtin(k) => k.as_str().to_string(),
            Rule::Def0(f) => format!("def0({})", f.name()),
            Rule::Extensional(_) => "extensional".to_string(),
        }
    }

    pub fn builtin_kind(&self) -> Option<BuiltinDelta> {
        match self.rule {
            Rule::Builtin(k) => Some(k),
            _ => None,
        }
    }

    pub fn table(&self) -> Option<&TripleTable> {
        match &self.rule {
            Rule::Extensional(t) => Some(t),
            _ => None,
        }
    }

    pub fn nearness_map(&self) -> Option<&NearnessMap> {
        match &self.rule {
            Rule::Def0(f) => Some(f),
            _ => None,
        }
    }

    pub fn operators(&self) -> Option<&Arc<OperatorSuite>> {
        self.ops.as_ref()
    }

    pub fn eval(&self, a: Subset, b: Subset, c: Subset) -> bool {
        match &self.rule {
            Rule::Builtin(BuiltinDelta::E0) => a.union(b).is_subset_of(a.union(c)),
            Rule::Builtin(BuiltinDelta::E1) => a.union(b).is_proper_subset_of(a.union(c)),
            Rule::Builtin(BuiltinDelta::E2) => {
                let l = self.ops.as_ref().expect("E2 built with operators");
                l.lower(a.intersection(c))
                    .is_proper_subset_of(l.lower(a.intersection(b)))
            }
            Rule::Builtin(BuiltinDelta::UE1) => {
                let u = self.ops.as_ref().expect("uE1 built with operators");
                u.upper(a.union(b)).is_subset_of(u.upper(a.union(c)))
            }
            Rule::Def0(f) => f.apply(a, b).is_subset_of(f.apply(a, c)),
            Rule::Extensional(t) => t.contains(a, b, c),
        }
    }

    /// Checked evaluation for operands of unknown provenance.
    pub fn try_eval(&self, a: Subset, b: Subset, c: Subset) -> Result<bool> {
        for s in [a, b, c] {
            if s.universe_len() != self.n {
                return Err(Error::UniverseMismatch {
                    left: self.n,
                    right: s.universe_len(),
                });
            }
        }
        Ok(self.eval(a, b, c))
    }
}

/// Unbuilt description of a δ, resolved against a structure's operators.
#[derive(Debug, Clone, PartialEq)]
pub enum DeltaSpec {
    Builtin(BuiltinDelta),
    Def0(NearnessSpec),
    Extensional(TripleTable),
}

#[derive(Debug, Clone, PartialEq)]
pub enum NearnessSpec {
    Union,
    UpperOfUnion,
    Table(Vec<Subset>),
}

impl DeltaSpec {
    pub fn name(&self) -> String {
        match self {
            Self::Builtin(k) => k.as_str().to_string(),
            Self::Def0(NearnessSpec::Union) => "def0(union)".into(),
            Self::Def0(NearnessSpec::UpperOfUnion) => "def0(upper-of-union)".into(),
            Self::Def0(NearnessSpec::Table(_)) => "def0(table)".into(),
            Self::Extensional(_) => "extensional".into(),
        }
    }

    pub fn build(&self, n: usize, ops: Option<Arc<OperatorSuite>>) -> Result<DeltaPredicate> {
        match self {
            Self::Builtin(k) => DeltaPredicate::builtin(*k, n, ops),
            Self::Def0(f) => DeltaPredicate::def0(n, f.build(n, ops)?),
            Self::Extensional(t) => {
                if t.universe_len() != n {
                    return Err(Error::UniverseMismatch {
                        left: n,
                        right: t.universe_len(),
                    });
                }
                Ok(DeltaPredicate::extensional(t.clone()))
            }
        }
    }
}

impl NearnessSpec {
    pub fn build(&self, n: usize, ops: Option<Arc<OperatorSuite>>) -> Result<NearnessMap> {
        match self {
            Self::Union => Ok(NearnessMap::Union),
            Self::UpperOfUnion => ops
                .map(NearnessMap::UpperOfUnion)
                .ok_or(Error::MissingOperators("upper-of-union")),
            Self::Table(values) => NearnessMap::table(n, values.clone()),
        }
    }
}

/// The partial sum ⊕.
#[derive(Debug, Clone, PartialEq)]
pub enum SumOperation {
    /// Always defined, `a ∪ b`.
    TotalUnion,
    /// `a ∪ b` when that union is itself a union of granules.
    GranularSum(Granulation),
    /// `table[a·2^n + b]`, `None` where undefined.
    Extensional { n: usize, table: Vec<Option<Subset>> },
}

impl SumOperation {
    pub fn extensional(n: usize, table: Vec<Option<Subset>>) -> Result<Self> {
        if n > EXTENSIONAL_MAX {
            return Err(Error::ExtensionalTooLarge {
                size: n,
                max: EXTENSIONAL_MAX,
            });
        }
        let expected = 1usize << (2 * n);
        if table.len() != expected {
            return Err(Error::TableSize {
                got: table.len(),
                expected,
            });
        }
        Ok(Self::Extensional { n, table })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::TotalUnion => "total-union",
            Self::GranularSum(_) => "granular-sum",
            Self::Extensional { .. } => "extensional",
        }
    }

    pub fn eval(&self, a: Subset, b: Subset) -> Partial {
        match self {
            Self::TotalUnion => Partial::Defined(a.union(b)),
            Self::GranularSum(g) => {
                let s = a.union(b);
                if g.is_union_of_granules(s) {
                    Partial::Defined(s)
                } else {
                    Partial::Undefined
                }
            }
            Self::Extensional { n, table } => table[(a.index() << n) | b.index()].into(),
        }
    }
}

/// Conditions on δ alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coherence {
    /// `δbba`
    ICoh,
    /// `δabc → δbac`
    NCoh,
    /// `¬δabb`
    ICoh2,
    /// `δabc → ¬δacb`
    StrictNCoh,
    /// `δabc ∧ δaeb → ¬δaec`
    Trans1,
}

impl Coherence {
    pub const ALL: [Coherence; 5] = [
        Self::ICoh,
        Self::NCoh,
        Self::ICoh2,
        Self::StrictNCoh,
        Self::Trans1,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::ICoh => "i-coh",
            Self::NCoh => "n-coh",
            Self::ICoh2 => "i-coh-2",
            Self::StrictNCoh => "strict-n-coh",
            Self::Trans1 => "trans-1",
        }
    }

    pub fn vars(self) -> &'static [&'static str] {
        match self {
            Self::ICoh | Self::ICoh2 => &["a", "b"],
            Self::NCoh | Self::StrictNCoh => &["a", "b", "c"],
            Self::Trans1 => &["a", "b", "c", "e"],
        }
    }
}

/// How the variable `e` of trans-1 is quantified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Trans1Reading {
    /// `e` ranges over the carrier with `a, b, c`.
    #[default]
    Universal,
    /// `e` is a fixed parameter of the structure.
    Fixed(Subset),
}

pub fn coherence_instance(d: &DeltaPredicate, axiom: Coherence, t: &[Subset]) -> Instance {
    match axiom {
        Coherence::ICoh => Instance::from_bool(d.eval(t[1], t[1], t[0])),
        Coherence::ICoh2 => Instance::from_bool(!d.eval(t[0], t[1], t[1])),
        Coherence::NCoh => Instance::implication(d.eval(t[0], t[1], t[2]), || {
            d.eval(t[1], t[0], t[2])
        }),
        Coherence::StrictNCoh => Instance::implication(d.eval(t[0], t[1], t[2]), || {
            !d.eval(t[0], t[2], t[1])
        }),
        Coherence::Trans1 => {
            let (a, b, c, e) = (t[0], t[1], t[2], t[3]);
            Instance::implication(d.eval(a, b, c) && d.eval(a, e, b), || !d.eval(a, e, c))
        }
    }
}

pub fn check_coherence(
    d: &DeltaPredicate,
    axiom: Coherence,
    reading: Trans1Reading,
    plan: &CheckPlan,
) -> Verdict {
    match (axiom, reading) {
        (Coherence::Trans1, Trans1Reading::Fixed(e)) => {
            check_tuples(axiom.id(), &["a", "b", "c"], d.n, plan, |t| {
                coherence_instance(d, axiom, &[t[0], t[1], t[2], e])
            })
            .with_note(format!("e fixed to subset #{}", e.index()))
        }
        _ => check_tuples(axiom.id(), axiom.vars(), d.n, plan, |t| {
            coherence_instance(d, axiom, t)
        }),
    }
}

/// Laws of ⊕ and its interaction with δ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SumLaw {
    /// `a⊕b =ω* b⊕a`
    OmegaStarCom,
    /// `a⊕a =ω a`
    OmegaId,
    /// `a⊕(b⊕c) =ω (a⊕b)⊕c`
    OmegaAsso,
    /// `δabc → δ(a⊕a)bc`
    DeltaSum1,
    /// `δabc → δa(b⊕b)c`
    DeltaSum2,
    /// `δabc → δab(c⊕c)`
    DeltaSum3,
}

impl SumLaw {
    pub const ALL: [SumLaw; 6] = [
        Self::OmegaStarCom,
        Self::OmegaId,
        Self::OmegaAsso,
        Self::DeltaSum1,
        Self::DeltaSum2,
        Self::DeltaSum3,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::OmegaStarCom => "omega-star-com",
            Self::OmegaId => "omega-id",
            Self::OmegaAsso => "omega-asso",
            Self::DeltaSum1 => "delta-sum1",
            Self::DeltaSum2 => "delta-sum2",
            Self::DeltaSum3 => "delta-sum3",
        }
    }

    pub fn vars(self) -> &'static [&'static str] {
        match self {
            Self::OmegaStarCom => &["a", "b"],
            Self::OmegaId => &["a"],
            _ => &["a", "b", "c"],
        }
    }

    pub fn needs_delta(self) -> bool {
        matches!(self, Self::DeltaSum1 | Self::DeltaSum2 | Self::DeltaSum3)
    }
}

/// δ-sum instances whose doubled argument is undefined pass vacuously.
pub fn sum_instance(d: Option<&DeltaPredicate>, s: &SumOperation, law: SumLaw, t: &[Subset]) -> Instance {
    let def = |x: Partial| x.is_defined();
    match law {
        SumLaw::OmegaStarCom => {
            let (l, r) = (s.eval(t[0], t[1]), s.eval(t[1], t[0]));
            Instance::from_bool(omega_star_equal(l, r))
        }
        SumLaw::OmegaId => {
            let l = s.eval(t[0], t[0]);
            if def(l) {
                Instance::from_bool(omega_equal(l, Partial::Defined(t[0])))
            } else {
                Instance::Vacuous
            }
        }
        SumLaw::OmegaAsso => {
            let l = s.eval(t[1], t[2]).and_then(|bc| s.eval(t[0], bc));
            let r = s.eval(t[0], t[1]).and_then(|ab| s.eval(ab, t[2]));
            if def(l) && def(r) {
                Instance::from_bool(omega_equal(l, r))
            } else {
                Instance::Vacuous
            }
        }
        SumLaw::DeltaSum1 | SumLaw::DeltaSum2 | SumLaw::DeltaSum3 => {
            let d = d.expect("delta-sum laws need a predicate");
            let (a, b, c) = (t[0], t[1], t[2]);
            if !d.eval(a, b, c) {
                return Instance::Vacuous;
            }
            let pos = match law {
                SumLaw::DeltaSum1 => 0,
                SumLaw::DeltaSum2 => 1,
                _ => 2,
            };
            match s.eval(t[pos], t[pos]) {
                Partial::Undefined => Instance::Vacuous,
                Partial::Defined(doubled) => {
                    let mut u = [a, b, c];
                    u[pos] = doubled;
                    Instance::from_bool(d.eval(u[0], u[1], u[2]))
                }
            }
        }
    }
}

pub fn check_sum_law(d: Option<&DeltaPredicate>, s: &SumOperation, law: SumLaw, n: usize, plan: &CheckPlan) -> Verdict {
    check_tuples(law.id(), law.vars(), n, plan, |t| sum_instance(d, s, law, t))
}

/// All six laws: the three ⊕ identities and the three δ-sum implications.
pub fn check_sum_axioms(d: &DeltaPredicate, s: &SumOperation, plan: &CheckPlan) -> Vec<Verdict> {
    SumLaw::ALL
        .iter()
        .map(|&law| check_sum_law(Some(d), s, law, d.n, plan))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DefMode {
    /// `δabc → P f(a,b) f(a,c)`
    Def1,
    /// `P f(a,b) f(a,c) → δabc`
    Def2,
    /// both directions
    Def0,
}

impl DefMode {
    pub fn id(self) -> &'static str {
        match self {
            Self::Def1 => "def1",
            Self::Def2 => "def2",
            Self::Def0 => "def0",
        }
    }
}

impl FromStr for DefMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "def1" => Ok(Self::Def1),
            "def2" => Ok(Self::Def2),
            "def0" => Ok(Self::Def0),
            other => Err(Error::Config(format!("unknown def mode `{other}`"))),
        }
    }
}

pub fn def_instance(d: &DeltaPredicate, f: &NearnessMap, mode: DefMode, t: &[Subset]) -> Instance {
    let (a, b, c) = (t[0], t[1], t[2]);
    let delta = d.eval(a, b, c);
    let part = f.apply(a, b).is_subset_of(f.apply(a, c));
    match mode {
        DefMode::Def1 => Instance::implication(delta, || part),
        DefMode::Def2 => Instance::implication(part, || delta),
        DefMode::Def0 => Instance::from_bool(delta == part),
    }
}

pub fn check_def_compat(d: &DeltaPredicate, f: &NearnessMap, mode: DefMode, plan: &CheckPlan) -> Verdict {
    check_tuples(mode.id(), &["a", "b", "c"], d.n, plan, |t| {
        def_instance(d, f, mode, t)
    })
}
