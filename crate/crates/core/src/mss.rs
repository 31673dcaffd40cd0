//! Minimal soft clustering systems over a finite powerset.
//!
//! An [`MssStructure`] interprets the signature
//! `P, δ, ⊕, κ, ≤, ∨, ∧, l, u, ⊤, ⊥` (plus `γ` for the granular variant) on
//! `℘(H)`. Any symbol may be left unbound; checks that need an unbound
//! symbol report [`Status::Deferred`] instead of running.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::delta::{coherence_instance, sum_instance, Coherence, DeltaPredicate, SumLaw, SumOperation, Trans1Reading};
use crate::error::{Error, Result};
use crate::granules::{
    check_admissibility, definite_cover_instance, lower_definite_instance, representable_instance,
    Granulation, OperatorSuite,
};
use crate::sets::{omega_equal, DifferencePolicy, Partial, Subset, Universe};
use crate::validation::{replay_compatibility, Clustering};
use crate::verdict::{check_domain, check_tuples, CheckPlan, Instance, Status, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Carrier,
    Parthood,
    Granulation,
    Delta,
    Sum,
    Kappa,
    Order,
    Join,
    Meet,
    Lower,
    Upper,
    Top,
    Bottom,
}

impl Symbol {
    /// Everything but the carrier.
    pub const SIGNATURE: [Symbol; 12] = [
        Self::Parthood,
        Self::Granulation,
        Self::Delta,
        Self::Sum,
        Self::Kappa,
        Self::Order,
        Self::Join,
        Self::Meet,
        Self::Lower,
        Self::Upper,
        Self::Top,
        Self::Bottom,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Carrier => "carrier",
            Self::Parthood => "P",
            Self::Granulation => "gamma",
            Self::Delta => "delta",
            Self::Sum => "sum",
            Self::Kappa => "kappa",
            Self::Order => "leq",
            Self::Join => "join",
            Self::Meet => "meet",
            Self::Lower => "l",
            Self::Upper => "u",
            Self::Top => "top",
            Self::Bottom => "bottom",
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Symbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "carrier" | "S" => Self::Carrier,
            "P" => Self::Parthood,
            "gamma" | "γ" => Self::Granulation,
            "delta" | "δ" => Self::Delta,
            "sum" | "⊕" => Self::Sum,
            "kappa" | "κ" => Self::Kappa,
            "leq" | "≤" => Self::Order,
            "join" | "∨" => Self::Join,
            "meet" | "∧" => Self::Meet,
            "l" | "lower" => Self::Lower,
            "u" | "upper" => Self::Upper,
            "top" | "⊤" => Self::Top,
            "bottom" | "⊥" => Self::Bottom,
            other => return Err(Error::Config(format!("unknown signature symbol `{other}`"))),
        })
    }
}

/// A binary relation on subsets, used for parthood and order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Parthood {
    /// `⊆`
    Inclusion,
    /// Pairs `(a, b)` stored at bit `a·2^n + b`.
    Table { n: usize, words: Vec<u64> },
}

impl Parthood {
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (Subset, Subset)>) -> Result<Self> {
        if n > crate::delta::EXTENSIONAL_MAX {
            return Err(Error::ExtensionalTooLarge {
                size: n,
                max: crate::delta::EXTENSIONAL_MAX,
            });
        }
        let mut words = vec![0u64; (1usize << (2 * n)).div_ceil(64)];
        for (a, b) in pairs {
            let k = (a.index() << n) | b.index();
            words[k / 64] |= 1 << (k % 64);
        }
        Ok(Self::Table { n, words })
    }

    pub fn holds(&self, a: Subset, b: Subset) -> bool {
        match self {
            Self::Inclusion => a.is_subset_of(b),
            Self::Table { n, words } => {
                let k = (a.index() << n) | b.index();
                words[k / 64] >> (k % 64) & 1 == 1
            }
        }
    }

    fn universe_len(&self) -> Option<usize> {
        match self {
            Self::Inclusion => None,
            Self::Table { n, .. } => Some(*n),
        }
    }
}

/// Registered conditions, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomId {
    Pt1,
    Pt2,
    G1,
    G2,
    G3,
    G4,
    G5,
    Ul1,
    Ul2,
    Ul3,
    Tb,
    ICoh,
    NCoh,
    ICoh2,
    Trans1,
    Clos1,
    StrictNCoh,
    Lclu,
    OmegaStarCom,
    OmegaId,
    OmegaAsso,
    DeltaSum1,
    DeltaSum2,
    DeltaSum3,
    AdmRepresentable,
    AdmLowerDefinite,
    AdmDefiniteCover,
}

impl AxiomId {
    pub const ALL: [AxiomId; 27] = [
        Self::Pt1,
        Self::Pt2,
        Self::G1,
        Self::G2,
        Self::G3,
        Self::G4,
        Self::G5,
        Self::Ul1,
        Self::Ul2,
        Self::Ul3,
        Self::Tb,
        Self::ICoh,
        Self::NCoh,
        Self::ICoh2,
        Self::Trans1,
        Self::Clos1,
        Self::StrictNCoh,
        Self::Lclu,
        Self::OmegaStarCom,
        Self::OmegaId,
        Self::OmegaAsso,
        Self::DeltaSum1,
        Self::DeltaSum2,
        Self::DeltaSum3,
        Self::AdmRepresentable,
        Self::AdmLowerDefinite,
        Self::AdmDefiniteCover,
    ];

    /// The conditions an MSS must satisfy.
    pub const DEFINING: [AxiomId; 16] = [
        Self::ICoh,
        Self::NCoh,
        Self::ICoh2,
        Self::Trans1,
        Self::Clos1,
        Self::Pt1,
        Self::Pt2,
        Self::G1,
        Self::G2,
        Self::G3,
        Self::G4,
        Self::G5,
        Self::Ul1,
        Self::Ul2,
        Self::Ul3,
        Self::Tb,
    ];

    pub const ADMISSIBILITY: [AxiomId; 3] = [
        Self::AdmRepresentable,
        Self::AdmLowerDefinite,
        Self::AdmDefiniteCover,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::Pt1 => "PT1",
            Self::Pt2 => "PT2",
            Self::G1 => "G1",
            Self::G2 => "G2",
            Self::G3 => "G3",
            Self::G4 => "G4",
            Self::G5 => "G5",
            Self::Ul1 => "UL1",
            Self::Ul2 => "UL2",
            Self::Ul3 => "UL3",
            Self::Tb => "TB",
            Self::Clos1 => "clos1",
            Self::Lclu => "lclu",
            Self::AdmRepresentable => crate::granules::ADM_REPRESENTABLE,
            Self::AdmLowerDefinite => crate::granules::ADM_LOWER_DEFINITE,
            Self::AdmDefiniteCover => crate::granules::ADM_DEFINITE_COVER,
            other => match (other.coherence(), other.sum_law()) {
                (Some(c), _) => c.id(),
                (_, Some(s)) => s.id(),
                _ => unreachable!(),
            },
        }
    }

    pub fn coherence(self) -> Option<Coherence> {
        Some(match self {
            Self::ICoh => Coherence::ICoh,
            Self::NCoh => Coherence::NCoh,
            Self::ICoh2 => Coherence::ICoh2,
            Self::StrictNCoh => Coherence::StrictNCoh,
            Self::Trans1 => Coherence::Trans1,
            _ => return None,
        })
    }

    pub fn sum_law(self) -> Option<SumLaw> {
        Some(match self {
            Self::OmegaStarCom => SumLaw::OmegaStarCom,
            Self::OmegaId => SumLaw::OmegaId,
            Self::OmegaAsso => SumLaw::OmegaAsso,
            Self::DeltaSum1 => SumLaw::DeltaSum1,
            Self::DeltaSum2 => SumLaw::DeltaSum2,
            Self::DeltaSum3 => SumLaw::DeltaSum3,
            _ => return None,
        })
    }

    /// Symbols that must be bound for the check to run.
    pub fn requires(self) -> &'static [Symbol] {
        use Symbol::*;
        match self {
            Self::Pt1 | Self::Pt2 => &[Parthood],
            Self::G1 | Self::G2 | Self::G3 | Self::G4 => &[Join, Meet],
            Self::G5 => &[Order, Join, Meet],
            Self::Ul1 | Self::Ul2 => &[Parthood, Lower, Upper],
            Self::Ul3 => &[Parthood, Lower, Upper, Top, Bottom],
            Self::Tb => &[Parthood, Top, Bottom],
            Self::ICoh | Self::NCoh | Self::ICoh2 | Self::Trans1 | Self::StrictNCoh => &[Delta],
            Self::Clos1 => &[],
            Self::Lclu => &[Kappa, Lower],
            Self::OmegaStarCom | Self::OmegaId | Self::OmegaAsso => &[Sum],
            Self::DeltaSum1 | Self::DeltaSum2 | Self::DeltaSum3 => &[Delta, Sum],
            Self::AdmRepresentable | Self::AdmLowerDefinite | Self::AdmDefiniteCover => {
                &[Granulation, Lower, Upper]
            }
        }
    }

    pub fn vars(self) -> &'static [&'static str] {
        match self {
            Self::Pt1 | Self::Ul1 | Self::Tb => &["a"],
            Self::Pt2 | Self::G1 | Self::G2 | Self::G5 | Self::Ul2 => &["a", "b"],
            Self::G3 | Self::G4 => &["a", "b", "c"],
            Self::Ul3 | Self::Clos1 => &[],
            Self::Lclu => &["a"],
            Self::AdmRepresentable => &["A"],
            Self::AdmLowerDefinite => &["G"],
            Self::AdmDefiniteCover => &["G1", "G2"],
            other => match (other.coherence(), other.sum_law()) {
                (Some(c), _) => c.vars(),
                (_, Some(s)) => s.vars(),
                _ => unreachable!(),
            },
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for AxiomId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.replace('_', "-");
        Self::ALL
            .into_iter()
            .find(|a| a.id().eq_ignore_ascii_case(&norm) || (norm == "trans1" && *a == Self::Trans1))
            .ok_or_else(|| Error::UnknownAxiom(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CheckOptions {
    pub plan: CheckPlan,
    pub trans1: Trans1Reading,
    pub difference: DifferencePolicy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MssStructure {
    universe: Arc<Universe>,
    parthood: Parthood,
    order: Option<Parthood>,
    ops: Option<Arc<OperatorSuite>>,
    granulation: Option<Granulation>,
    delta: Option<DeltaPredicate>,
    sum: Option<SumOperation>,
    kappa: Option<Clustering>,
    bound: BTreeSet<Symbol>,
    options: CheckOptions,
}

/// Assembles an [`MssStructure`]; only the carrier is mandatory.
#[derive(Debug, Clone)]
pub struct MssBuilder {
    universe: Arc<Universe>,
    parthood: Option<Parthood>,
    order: Option<Parthood>,
    lattice: bool,
    bounds: bool,
    ops: Option<Arc<OperatorSuite>>,
    granulation: Option<Granulation>,
    delta: Option<DeltaPredicate>,
    sum: Option<SumOperation>,
    kappa: Option<Clustering>,
    options: CheckOptions,
}

impl MssBuilder {
    pub fn parthood(mut self, p: Parthood) -> Self {
        self.parthood = Some(p);
        self
    }

    /// Binds `≤` separately from `P`.
    pub fn order(mut self, o: Parthood) -> Self {
        self.order = Some(o);
        self
    }

    /// Binds `∨, ∧` as union and intersection.
    pub fn lattice(mut self) -> Self {
        self.lattice = true;
        self
    }

    /// Binds `⊤ = H`, `⊥ = ∅`.
    pub fn bounds(mut self) -> Self {
        self.bounds = true;
        self
    }

    pub fn operators(mut self, ops: Arc<OperatorSuite>) -> Self {
        self.ops = Some(ops);
        self
    }

    /// Binds `γ`; operators are derived from it unless given explicitly.
    pub fn granulation(mut self, g: Granulation) -> Self {
        self.granulation = Some(g);
        self
    }

    pub fn delta(mut self, d: DeltaPredicate) -> Self {
        self.delta = Some(d);
        self
    }

    pub fn sum(mut self, s: SumOperation) -> Self {
        self.sum = Some(s);
        self
    }

    pub fn kappa(mut self, k: Clustering) -> Self {
        self.kappa = Some(k);
        self
    }

    pub fn options(mut self, o: CheckOptions) -> Self {
        self.options = o;
        self
    }

    pub fn build(self) -> Result<MssStructure> {
        let n = self.universe.len();
        let same = |m: usize| {
            if m == n {
                Ok(())
            } else {
                Err(Error::UniverseMismatch { left: n, right: m })
            }
        };
        for p in [&self.parthood, &self.order].into_iter().flatten() {
            if let Some(m) = p.universe_len() {
                same(m)?;
            }
        }
        if let Some(g) = &self.granulation {
            same(g.universe_len())?;
        }
        let ops = match (self.ops, &self.granulation) {
            (Some(ops), Some(g)) => {
                same(ops.universe_len())?;
                if ops.granulation() != Some(g) {
                    return Err(Error::OperatorsNotGranular);
                }
                Some(ops)
            }
            (Some(ops), None) => {
                same(ops.universe_len())?;
                Some(ops)
            }
            (None, Some(g)) => Some(Arc::new(OperatorSuite::granular(g.clone()))),
            (None, None) => None,
        };
        if let Some(d) = &self.delta {
            same(d.universe_len())?;
        }
        if let Some(k) = &self.kappa {
            same(k.universe_len())?;
        }
        match &self.sum {
            Some(SumOperation::GranularSum(g)) => same(g.universe_len())?,
            Some(SumOperation::Extensional { n: m, .. }) => same(*m)?,
            _ => {}
        }

        let mut bound = BTreeSet::new();
        bound.insert(Symbol::Carrier);
        if self.parthood.is_some() {
            bound.insert(Symbol::Parthood);
            bound.insert(Symbol::Order);
        }
        if self.order.is_some() {
            bound.insert(Symbol::Order);
        }
        if self.lattice {
            bound.extend([Symbol::Join, Symbol::Meet]);
        }
        if self.bounds {
            bound.extend([Symbol::Top, Symbol::Bottom]);
        }
        if ops.is_some() {
            bound.extend([Symbol::Lower, Symbol::Upper]);
        }
        if self.granulation.is_some() {
            bound.insert(Symbol::Granulation);
        }
        if self.delta.is_some() {
            bound.insert(Symbol::Delta);
        }
        if self.sum.is_some() {
            bound.insert(Symbol::Sum);
        }
        if self.kappa.is_some() {
            bound.insert(Symbol::Kappa);
        }
        Ok(MssStructure {
            universe: self.universe,
            parthood: self.parthood.unwrap_or(Parthood::Inclusion),
            order: self.order,
            ops,
            granulation: self.granulation,
            delta: self.delta,
            sum: self.sum,
            kappa: self.kappa,
            bound,
            options: self.options,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flag {
    Yes,
    No,
    Deferred,
}

impl Flag {
    fn and(self, other: Flag) -> Flag {
        match (self, other) {
            (Flag::No, _) | (_, Flag::No) => Flag::No,
            (Flag::Deferred, _) | (_, Flag::Deferred) => Flag::Deferred,
            _ => Flag::Yes,
        }
    }

    fn of(status: Status) -> Flag {
        match status {
            Status::Fails => Flag::No,
            Status::Deferred => Flag::Deferred,
            // unspecified conditions cannot block a classification
            Status::Holds | Status::Vacuous | Status::Unspecified => Flag::Yes,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Flag::Yes => "yes",
            Flag::No => "no",
            Flag::Deferred => "deferred",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub is_mss: Flag,
    pub is_strict: Flag,
    pub is_rough: Flag,
    pub is_gmss: Flag,
}

const CLOS1_NOTE: &str = "condition is named but never stated; not evaluated";

impl MssStructure {
    pub fn builder(universe: Arc<Universe>) -> MssBuilder {
        MssBuilder {
            universe,
            parthood: None,
            order: None,
            lattice: false,
            bounds: false,
            ops: None,
            granulation: None,
            delta: None,
            sum: None,
            kappa: None,
            options: CheckOptions::default(),
        }
    }

    /// `⟨℘(H), ⊆, ⊕=∪, ⊆, ∪, ∩, l, u, H, ∅⟩` over `g`, with `δ` and `κ` deferred.
    pub fn granular(universe: Arc<Universe>, g: Granulation) -> Result<Self> {
        Self::builder(universe)
            .parthood(Parthood::Inclusion)
            .lattice()
            .bounds()
            .granulation(g)
            .sum(SumOperation::TotalUnion)
            .build()
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn n(&self) -> usize {
        self.universe.len()
    }

    pub fn signature(&self) -> &BTreeSet<Symbol> {
        &self.bound
    }

    pub fn is_bound(&self, s: Symbol) -> bool {
        self.bound.contains(&s)
    }

    pub fn options(&self) -> &CheckOptions {
        &self.options
    }

    pub fn set_options(&mut self, o: CheckOptions) {
        self.options = o;
    }

    fn slot<T>(&self, s: Symbol, v: Option<T>) -> Option<T> {
        if self.is_bound(s) {
            v
        } else {
            None
        }
    }

    pub fn operators(&self) -> Option<&Arc<OperatorSuite>> {
        if self.is_bound(Symbol::Lower) && self.is_bound(Symbol::Upper) {
            self.ops.as_ref()
        } else {
            None
        }
    }

    pub fn granulation(&self) -> Option<&Granulation> {
        self.slot(Symbol::Granulation, self.granulation.as_ref())
    }

    pub fn delta(&self) -> Option<&DeltaPredicate> {
        self.slot(Symbol::Delta, self.delta.as_ref())
    }

    pub fn sum(&self) -> Option<&SumOperation> {
        self.slot(Symbol::Sum, self.sum.as_ref())
    }

    pub fn kappa(&self) -> Option<&Clustering> {
        self.slot(Symbol::Kappa, self.kappa.as_ref())
    }

    pub fn parthood(&self) -> Option<&Parthood> {
        self.slot(Symbol::Parthood, Some(&self.parthood))
    }

    /// `≤`, falling back to `P` when not bound separately.
    pub fn order(&self) -> Option<&Parthood> {
        self.slot(Symbol::Order, Some(self.order.as_ref().unwrap_or(&self.parthood)))
    }

    pub fn lower(&self, a: Subset) -> Option<Subset> {
        self.slot(Symbol::Lower, self.ops.as_ref()).map(|o| o.lower(a))
    }

    pub fn upper(&self, a: Subset) -> Option<Subset> {
        self.slot(Symbol::Upper, self.ops.as_ref()).map(|o| o.upper(a))
    }

    pub fn join(&self, a: Subset, b: Subset) -> Partial {
        if self.is_bound(Symbol::Join) {
            Partial::Defined(a.union(b))
        } else {
            Partial::Undefined
        }
    }

    pub fn meet(&self, a: Subset, b: Subset) -> Partial {
        if self.is_bound(Symbol::Meet) {
            Partial::Defined(a.intersection(b))
        } else {
            Partial::Undefined
        }
    }

    /// Binds `δ`, replacing any previous one.
    pub fn with_delta(mut self, d: DeltaPredicate) -> Result<Self> {
        if d.universe_len() != self.n() {
            return Err(Error::UniverseMismatch {
                left: self.n(),
                right: d.universe_len(),
            });
        }
        self.delta = Some(d);
        self.bound.insert(Symbol::Delta);
        Ok(self)
    }

    /// Binds `κ` to the clusters of `k`.
    pub fn with_kappa(mut self, k: Clustering) -> Result<Self> {
        if k.universe_len() != self.n() {
            return Err(Error::UniverseMismatch {
                left: self.n(),
                right: k.universe_len(),
            });
        }
        self.kappa = Some(k);
        self.bound.insert(Symbol::Kappa);
        Ok(self)
    }

    /// Same carrier, only the symbols in `keep` interpreted.
    pub fn reduct(&self, keep: &[Symbol]) -> Result<Self> {
        if let Some(&s) = keep.iter().find(|s| !self.is_bound(**s)) {
            return Err(Error::NotBound(s));
        }
        let mut out = self.clone();
        out.bound = keep.iter().copied().collect();
        out.bound.insert(Symbol::Carrier);
        Ok(out)
    }

    /// The reduct without the symbols in `drop`.
    pub fn without(&self, drop: &[Symbol]) -> Result<Self> {
        if drop.contains(&Symbol::Carrier) {
            return Err(Error::CarrierDropped);
        }
        let keep: Vec<Symbol> = self
            .bound
            .iter()
            .copied()
            .filter(|s| !drop.contains(s))
            .collect();
        self.reduct(&keep)
    }

    fn missing(&self, axiom: AxiomId) -> Option<Symbol> {
        axiom.requires().iter().copied().find(|s| !self.is_bound(*s))
    }

    fn holds(p: &Parthood, a: Subset, b: Subset) -> bool {
        p.holds(a, b)
    }

    /// Evaluates one instance of `axiom`. Requires every slot the axiom needs.
    pub fn instance(&self, axiom: AxiomId, t: &[Subset]) -> Result<Instance> {
        if let Some(s) = self.missing(axiom) {
            return Err(Error::NotBound(s));
        }
        if t.len() != axiom.vars().len() {
            return Err(Error::Config(format!(
                "{axiom} takes {} arguments, got {}",
                axiom.vars().len(),
                t.len()
            )));
        }
        let p = &self.parthood;
        let ops = || self.ops.as_ref().expect("bound");
        let (j, m) = (|a, b| self.join(a, b), |a, b| self.meet(a, b));
        let def = Partial::Defined;
        Ok(match axiom {
            AxiomId::Pt1 => Instance::from_bool(Self::holds(p, t[0], t[0])),
            AxiomId::Pt2 => Instance::implication(
                Self::holds(p, t[0], t[1]) && Self::holds(p, t[1], t[0]),
                || t[0] == t[1],
            ),
            AxiomId::G1 => Instance::from_bool(
                omega_equal(j(t[0], t[1]), j(t[1], t[0])) && omega_equal(m(t[0], t[1]), m(t[1], t[0])),
            ),
            AxiomId::G2 => Instance::from_bool(
                omega_equal(j(t[0], t[1]).and_then(|x| m(x, t[0])), def(t[0]))
                    && omega_equal(m(t[0], t[1]).and_then(|x| j(x, t[0])), def(t[0])),
            ),
            AxiomId::G3 => {
                let (a, b, c) = (t[0], t[1], t[2]);
                let lhs = m(a, b).and_then(|x| j(x, c));
                let rhs = match (j(a, c), j(b, c)) {
                    (Partial::Defined(x), Partial::Defined(y)) => m(x, y),
                    _ => Partial::Undefined,
                };
                Instance::from_bool(omega_equal(lhs, rhs))
            }
            AxiomId::G4 => {
                let (a, b, c) = (t[0], t[1], t[2]);
                let lhs = j(a, b).and_then(|x| m(x, c));
                let rhs = match (m(a, c), m(b, c)) {
                    (Partial::Defined(x), Partial::Defined(y)) => j(x, y),
                    _ => Partial::Undefined,
                };
                Instance::from_bool(omega_equal(lhs, rhs))
            }
            AxiomId::G5 => {
                let (a, b) = (t[0], t[1]);
                let le = self.order().expect("bound").holds(a, b);
                let by_join = j(a, b) == def(b);
                let by_meet = m(a, b) == def(a);
                Instance::from_bool(le == by_join && by_join == by_meet)
            }
            AxiomId::Ul1 => {
                let o = ops();
                let a = t[0];
                let (l, u) = (o.lower(a), o.upper(a));
                Instance::from_bool(
                    Self::holds(p, l, a) && o.lower(l) == l && Self::holds(p, u, o.upper(u)),
                )
            }
            AxiomId::Ul2 => {
                let o = ops();
                let (a, b) = (t[0], t[1]);
                Instance::implication(Self::holds(p, a, b), || {
                    Self::holds(p, o.lower(a), o.lower(b)) && Self::holds(p, o.upper(a), o.upper(b))
                })
            }
            AxiomId::Ul3 => {
                let o = ops();
                let (bot, top) = (self.universe.empty(), self.universe.full());
                Instance::from_bool(
                    o.lower(bot) == bot
                        && o.upper(bot) == bot
                        && Self::holds(p, o.lower(top), top)
                        && Self::holds(p, o.upper(top), top),
                )
            }
            AxiomId::Tb => Instance::from_bool(
                Self::holds(p, self.universe.empty(), t[0]) && Self::holds(p, t[0], self.universe.full()),
            ),
            AxiomId::ICoh | AxiomId::NCoh | AxiomId::ICoh2 | AxiomId::StrictNCoh => {
                coherence_instance(self.delta.as_ref().expect("bound"), axiom.coherence().unwrap(), t)
            }
            AxiomId::Trans1 => {
                let d = self.delta.as_ref().expect("bound");
                let e = match self.options.trans1 {
                    Trans1Reading::Universal => t[3],
                    Trans1Reading::Fixed(e) => e,
                };
                coherence_instance(d, Coherence::Trans1, &[t[0], t[1], t[2], e])
            }
            AxiomId::Clos1 => Instance::Vacuous,
            AxiomId::Lclu => {
                let k = self.kappa.as_ref().expect("bound");
                Instance::implication(k.contains(t[0]), || k.contains(ops().lower(t[0])))
            }
            AxiomId::OmegaStarCom
            | AxiomId::OmegaId
            | AxiomId::OmegaAsso
            | AxiomId::DeltaSum1
            | AxiomId::DeltaSum2
            | AxiomId::DeltaSum3 => sum_instance(
                self.delta.as_ref(),
                self.sum.as_ref().expect("bound"),
                axiom.sum_law().unwrap(),
                t,
            ),
            AxiomId::AdmRepresentable => {
                representable_instance(self.granulation.as_ref().expect("bound"), ops(), t[0])
            }
            AxiomId::AdmLowerDefinite => lower_definite_instance(ops(), t[0]),
            AxiomId::AdmDefiniteCover => {
                definite_cover_instance(ops(), t[0], t[1], self.options.plan.samples)
            }
        })
    }

    /// Runs one check.
    pub fn check(&self, axiom: AxiomId) -> Verdict {
        if axiom == AxiomId::Clos1 {
            return Verdict::unspecified(axiom.id(), CLOS1_NOTE);
        }
        if let Some(s) = self.missing(axiom) {
            return Verdict::deferred(axiom.id(), s.as_str());
        }
        let plan = &self.options.plan;
        let n = self.n();
        let run = |t: &[Subset]| self.instance(axiom, t).expect("slots checked");
        match axiom {
            AxiomId::Trans1 => match self.options.trans1 {
                Trans1Reading::Universal => check_tuples(axiom.id(), axiom.vars(), n, plan, run),
                Trans1Reading::Fixed(e) => check_tuples(axiom.id(), &["a", "b", "c"], n, plan, |t| {
                    run(&[t[0], t[1], t[2], e])
                })
                .with_note(format!("e fixed to {}", self.universe.render(e))),
            },
            AxiomId::Lclu => {
                let k = self.kappa.as_ref().expect("bound");
                check_domain(axiom.id(), axiom.vars(), k.sorted().into_iter().map(|c| vec![c]), run)
            }
            AxiomId::AdmRepresentable | AxiomId::AdmLowerDefinite | AxiomId::AdmDefiniteCover => {
                let g = self.granulation.as_ref().expect("bound");
                let [i, ii, iii] = check_admissibility(g, self.ops.as_ref().expect("bound"), plan);
                match axiom {
                    AxiomId::AdmRepresentable => i,
                    AxiomId::AdmLowerDefinite => ii,
                    _ => iii,
                }
            }
            _ => check_tuples(axiom.id(), axiom.vars(), n, plan, run),
        }
    }

    /// One verdict per requested axiom (all registered axioms by default).
    pub fn verify(&self, axioms: Option<&[AxiomId]>) -> Vec<Verdict> {
        axioms
            .unwrap_or(&AxiomId::ALL)
            .iter()
            .map(|&a| self.check(a))
            .collect()
    }

    /// [`verify`](Self::verify) spread over `jobs` worker threads; output is
    /// identical to the sequential run.
    pub fn verify_parallel(&self, axioms: Option<&[AxiomId]>, jobs: usize) -> Vec<Verdict> {
        let list = axioms.unwrap_or(&AxiomId::ALL);
        if jobs <= 1 {
            return self.verify(Some(list));
        }
        match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(|| list.par_iter().map(|&a| self.check(a)).collect()),
            Err(_) => self.verify(Some(list)),
        }
    }

    pub fn classify(&self, verdicts: &[Verdict]) -> Classification {
        let status = |a: AxiomId| {
            verdicts
                .iter()
                .find(|v| v.check == a.id())
                .map(|v| v.status)
                .unwrap_or_else(|| self.check(a).status)
        };
        let is_mss = AxiomId::DEFINING
            .iter()
            .fold(Flag::Yes, |acc, &a| acc.and(Flag::of(status(a))));
        let is_strict = is_mss.and(Flag::of(status(AxiomId::StrictNCoh)));
        let is_rough = is_mss.and(Flag::of(status(AxiomId::Lclu)));
        let is_gmss = if self.is_bound(Symbol::Granulation) {
            AxiomId::ADMISSIBILITY
                .iter()
                .fold(is_mss, |acc, &a| acc.and(Flag::of(status(a))))
        } else {
            Flag::No
        };
        Classification {
            is_mss,
            is_strict,
            is_rough,
            is_gmss,
        }
    }

    /// Whether the first witness of a failing verdict is a genuine violation.
    /// Verdicts that did not fail replay trivially.
    pub fn replay(&self, v: &Verdict) -> Result<bool> {
        if v.status != Status::Fails {
            return Ok(true);
        }
        if let Some(rest) = v.check.strip_prefix("compat:") {
            let (mode, name) = rest
                .split_once(':')
                .ok_or_else(|| Error::Config(format!("malformed check `{}`", v.check)))?;
            let d = self.delta.as_ref().ok_or(Error::NotBound(Symbol::Delta))?;
            let k = self.kappa.as_ref().ok_or(Error::NotBound(Symbol::Kappa))?;
            if d.name() != name {
                return Err(Error::Config(format!("{} was not produced by δ {}", v.check, d.name())));
            }
            return replay_compatibility(k, d, mode.parse()?, self.operators().map(|o| &**o), v);
        }
        let axiom: AxiomId = v.check.parse()?;
        let w = v
            .witness()
            .ok_or_else(|| Error::Config(format!("{} fails without a witness", v.check)))?;
        let mut t = w.values();
        if axiom == AxiomId::Trans1 {
            if let Trans1Reading::Fixed(e) = self.options.trans1 {
                t.push(e);
            }
        }
        Ok(self.instance(axiom, &t)? == Instance::Violated)
    }
}
