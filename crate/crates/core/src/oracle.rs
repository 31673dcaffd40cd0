//! Independent brute-force evaluation of axioms and derived claims.
//!
//! Nothing here goes through the bitmask checkers: sets are `BTreeSet`s,
//! approximations are recomputed from the granules, and every quantifier is a
//! plain nested loop. Only raw data (granules, tables, bound slots) is read
//! from the structure.

use std::collections::BTreeSet;

use crate::delta::{BuiltinDelta, NearnessMap, SumOperation, Trans1Reading};
use crate::error::{Error, Result};
use crate::granules::OperatorSuite;
use crate::mss::{AxiomId, MssStructure, Parthood, Symbol};
use crate::sets::{DifferencePolicy, Partial, Subset};

type Set = BTreeSet<usize>;

pub const ORACLE_MAX: usize = 6;

pub const CLAIMS: [&str; 3] = ["l-pre-valid-closed-form", "upper-additivity", "proposition-def2"];

/// Needs δ and κ bound, so it is kept out of [`CLAIMS`].
pub const COMPAT_OVERLAP_CLOSER: &str = "compat-overlap-closer";

fn to_set(x: Subset) -> Set {
    (0..x.universe_len()).filter(|&i| x.contains(i)).collect()
}

fn to_subset(n: usize, s: &Set) -> Subset {
    Subset::from_indices(n, s.iter().copied())
}

fn union(a: &Set, b: &Set) -> Set {
    a.union(b).copied().collect()
}

fn inter(a: &Set, b: &Set) -> Set {
    a.intersection(b).copied().collect()
}

fn proper(a: &Set, b: &Set) -> bool {
    a.is_subset(b) && a != b
}

struct Naive<'a> {
    s: &'a MssStructure,
    n: usize,
    all: Vec<Set>,
    full: Set,
}

impl<'a> Naive<'a> {
    fn new(s: &'a MssStructure) -> Result<Self> {
        let n = s.n();
        if n > ORACLE_MAX {
            return Err(Error::ExhaustiveTooLarge { size: n, cap: ORACLE_MAX });
        }
        let mut all = Vec::new();
        for code in 0u32..(1 << n) {
            all.push((0..n).filter(|i| code >> i & 1 == 1).collect());
        }
        Ok(Self {
            s,
            n,
            all,
            full: (0..n).collect(),
        })
    }

    fn part(&self, p: &Parthood, a: &Set, b: &Set) -> bool {
        match p {
            Parthood::Inclusion => a.is_subset(b),
            table => table.holds(to_subset(self.n, a), to_subset(self.n, b)),
        }
    }

    fn p(&self, a: &Set, b: &Set) -> bool {
        self.part(self.s.parthood().expect("bound"), a, b)
    }

    fn granules_of(ops: &OperatorSuite) -> Option<Vec<Set>> {
        ops.granulation()
            .map(|g| g.granules().iter().map(|&x| to_set(x)).collect())
    }

    fn lower_with(&self, ops: &OperatorSuite, a: &Set) -> Set {
        match Self::granules_of(ops) {
            Some(gs) => {
                let mut out = Set::new();
                for g in gs.iter().filter(|g| g.is_subset(a)) {
                    out.extend(g);
                }
                out
            }
            None => to_set(ops.lower(to_subset(self.n, a))),
        }
    }

    fn upper_with(&self, ops: &OperatorSuite, a: &Set) -> Set {
        match Self::granules_of(ops) {
            Some(gs) => {
                let mut out = Set::new();
                for g in gs.iter().filter(|g| !g.is_disjoint(a)) {
                    out.extend(g);
                }
                out
            }
            None => to_set(ops.upper(to_subset(self.n, a))),
        }
    }

    fn l(&self, a: &Set) -> Set {
        self.lower_with(self.s.operators().expect("bound"), a)
    }

    fn u(&self, a: &Set) -> Set {
        self.upper_with(self.s.operators().expect("bound"), a)
    }

    fn delta(&self, a: &Set, b: &Set, c: &Set) -> bool {
        let d = self.s.delta().expect("bound");
        if let Some(k) = d.builtin_kind() {
            let ops = d.operators();
            return match k {
                BuiltinDelta::E0 => union(a, b).is_subset(&union(a, c)),
                BuiltinDelta::E1 => proper(&union(a, b), &union(a, c)),
                BuiltinDelta::E2 => {
                    let o = ops.expect("E2 has operators");
                    proper(&self.lower_with(o, &inter(a, c)), &self.lower_with(o, &inter(a, b)))
                }
                BuiltinDelta::UE1 => {
                    let o = ops.expect("uE1 has operators");
                    self.upper_with(o, &union(a, b)).is_subset(&self.upper_with(o, &union(a, c)))
                }
            };
        }
        let (sa, sb, sc) = (to_subset(self.n, a), to_subset(self.n, b), to_subset(self.n, c));
        if let Some(t) = d.table() {
            return t.contains(sa, sb, sc);
        }
        let f = |x: &Set, y: &Set| -> Set {
            match d.nearness_map().expect("def0 has a map") {
                NearnessMap::Union => union(x, y),
                NearnessMap::UpperOfUnion(o) => self.upper_with(o, &union(x, y)),
                table => to_set(table.apply(to_subset(self.n, x), to_subset(self.n, y))),
            }
        };
        f(a, b).is_subset(&f(a, c))
    }

    fn sum(&self, a: &Set, b: &Set) -> Option<Set> {
        match self.s.sum().expect("bound") {
            SumOperation::TotalUnion => Some(union(a, b)),
            SumOperation::GranularSum(g) => {
                let x = union(a, b);
                let mut cover = Set::new();
                for gr in g.granules().iter().map(|&s| to_set(s)).filter(|gr| gr.is_subset(&x)) {
                    cover.extend(gr);
                }
                (cover == x).then_some(x)
            }
            other => match other.eval(to_subset(self.n, a), to_subset(self.n, b)) {
                Partial::Defined(x) => Some(to_set(x)),
                Partial::Undefined => None,
            },
        }
    }

    fn granules(&self) -> Vec<Set> {
        self.s
            .granulation()
            .expect("bound")
            .granules()
            .iter()
            .map(|&x| to_set(x))
            .collect()
    }

    fn is_granule_union(&self, x: &Set) -> bool {
        let mut cover = Set::new();
        for g in self.granules().iter().filter(|g| g.is_subset(x)) {
            cover.extend(g);
        }
        &cover == x
    }

    fn definite(&self, x: &Set) -> bool {
        &self.l(x) == x && &self.u(x) == x
    }

    fn defined_difference(&self, a: &Set, b: &Set) -> bool {
        match self.s.options().difference {
            DifferencePolicy::Contained => b.is_subset(a),
            DifferencePolicy::Total => true,
            DifferencePolicy::ProperlyContained => proper(b, a),
        }
    }

    fn traceable(&self, x: &Set) -> bool {
        self.all.iter().any(|v| v == x)
    }

    fn forall1(&self, f: impl Fn(&Set) -> bool) -> bool {
        self.all.iter().all(f)
    }

    fn forall2(&self, f: impl Fn(&Set, &Set) -> bool) -> bool {
        self.all.iter().all(|a| self.all.iter().all(|b| f(a, b)))
    }

    fn forall3(&self, f: impl Fn(&Set, &Set, &Set) -> bool) -> bool {
        self.forall2(|a, b| self.all.iter().all(|c| f(a, b, c)))
    }

    fn forall4(&self, f: impl Fn(&Set, &Set, &Set, &Set) -> bool) -> bool {
        self.forall3(|a, b, c| self.all.iter().all(|e| f(a, b, c, e)))
    }

    fn axiom(&self, axiom: AxiomId) -> bool {
        let empty = Set::new();
        let h = &self.full;
        match axiom {
            AxiomId::Pt1 => self.forall1(|a| self.p(a, a)),
            AxiomId::Pt2 => self.forall2(|a, b| !(self.p(a, b) && self.p(b, a)) || a == b),
            AxiomId::G1 => self.forall2(|a, b| union(a, b) == union(b, a) && inter(a, b) == inter(b, a)),
            AxiomId::G2 => {
                self.forall2(|a, b| &inter(&union(a, b), a) == a && &union(&inter(a, b), a) == a)
            }
            AxiomId::G3 => {
                self.forall3(|a, b, c| union(&inter(a, b), c) == inter(&union(a, c), &union(b, c)))
            }
            AxiomId::G4 => {
                self.forall3(|a, b, c| inter(&union(a, b), c) == union(&inter(a, c), &inter(b, c)))
            }
            AxiomId::G5 => {
                let le = self.s.order().expect("bound");
                self.forall2(|a, b| {
                    let x = self.part(le, a, b);
                    x == (&union(a, b) == b) && x == (&inter(a, b) == a)
                })
            }
            AxiomId::Ul1 => self.forall1(|a| {
                let (l, u) = (self.l(a), self.u(a));
                self.p(&l, a) && self.l(&l) == l && self.p(&u, &self.u(&u))
            }),
            AxiomId::Ul2 => self.forall2(|a, b| {
                !self.p(a, b) || (self.p(&self.l(a), &self.l(b)) && self.p(&self.u(a), &self.u(b)))
            }),
            AxiomId::Ul3 => {
                self.l(&empty) == empty
                    && self.u(&empty) == empty
                    && self.p(&self.l(h), h)
                    && self.p(&self.u(h), h)
            }
            AxiomId::Tb => self.forall1(|a| self.p(&empty, a) && self.p(a, h)),
            AxiomId::ICoh => self.forall2(|a, b| self.delta(b, b, a)),
            AxiomId::ICoh2 => self.forall2(|a, b| !self.delta(a, b, b)),
            AxiomId::NCoh => self.forall3(|a, b, c| !self.delta(a, b, c) || self.delta(b, a, c)),
            AxiomId::StrictNCoh => {
                self.forall3(|a, b, c| !self.delta(a, b, c) || !self.delta(a, c, b))
            }
            AxiomId::Trans1 => {
                let t = |a: &Set, b: &Set, c: &Set, e: &Set| {
                    !(self.delta(a, b, c) && self.delta(a, e, b)) || !self.delta(a, e, c)
                };
                match self.s.options().trans1 {
                    Trans1Reading::Universal => self.forall4(t),
                    Trans1Reading::Fixed(e) => {
                        let e = to_set(e);
                        self.forall3(|a, b, c| t(a, b, c, &e))
                    }
                }
            }
            AxiomId::Clos1 => unreachable!("filtered by caller"),
            AxiomId::Lclu => {
                let k = self.s.kappa().expect("bound");
                let clusters: Vec<Set> = k.clusters().iter().map(|&c| to_set(c)).collect();
                clusters.iter().all(|c| clusters.contains(&self.l(c)))
            }
            AxiomId::OmegaStarCom => self.forall2(|a, b| self.sum(a, b) == self.sum(b, a)),
            AxiomId::OmegaId => self.forall1(|a| self.sum(a, a).is_none_or(|x| &x == a)),
            AxiomId::OmegaAsso => self.forall3(|a, b, c| {
                let l = self.sum(b, c).and_then(|bc| self.sum(a, &bc));
                let r = self.sum(a, b).and_then(|ab| self.sum(&ab, c));
                match (l, r) {
                    (Some(x), Some(y)) => x == y,
                    _ => true,
                }
            }),
            AxiomId::DeltaSum1 => self.forall3(|a, b, c| {
                !self.delta(a, b, c) || self.sum(a, a).is_none_or(|aa| self.delta(&aa, b, c))
            }),
            AxiomId::DeltaSum2 => self.forall3(|a, b, c| {
                !self.delta(a, b, c) || self.sum(b, b).is_none_or(|bb| self.delta(a, &bb, c))
            }),
            AxiomId::DeltaSum3 => self.forall3(|a, b, c| {
                !self.delta(a, b, c) || self.sum(c, c).is_none_or(|cc| self.delta(a, b, &cc))
            }),
            AxiomId::AdmRepresentable => {
                self.forall1(|a| self.is_granule_union(&self.l(a)) && self.is_granule_union(&self.u(a)))
            }
            AxiomId::AdmLowerDefinite => self.granules().iter().all(|g| &self.l(g) == g),
            AxiomId::AdmDefiniteCover => {
                let gs = self.granules();
                let mut ok = true;
                for i in 0..gs.len() {
                    for j in i + 1..gs.len() {
                        let x = union(&gs[i], &gs[j]);
                        ok &= self.all.iter().any(|d| x.is_subset(d) && self.definite(d));
                    }
                }
                ok
            }
        }
    }

    fn claim(&self, claim: &str) -> Result<bool> {
        match claim {
            "l-pre-valid-closed-form" => {
                self.need(AxiomId::Ul1)?;
                Ok(self.forall1(|c| {
                    let by_search = self.all.iter().any(|v| &self.l(v) == c);
                    by_search == (&self.l(c) == c)
                }))
            }
            "upper-additivity" => {
                self.need(AxiomId::Ul1)?;
                Ok(self.forall2(|a, b| self.u(&union(a, b)) == union(&self.u(a), &self.u(b))))
            }
            "proposition-def2" => {
                self.need(AxiomId::Ul1)?;
                let domain: Vec<Set> = match self.s.kappa() {
                    Some(k) => k.clusters().iter().map(|&c| to_set(c)).collect(),
                    None => self.all.clone(),
                };
                Ok(domain.iter().all(|c| {
                    let (l, u) = (self.l(c), self.u(c));
                    let lower_ok = !self.defined_difference(c, &l) || self.traceable(&l);
                    let upper_ok = !self.defined_difference(&u, c) || self.traceable(&u);
                    lower_ok && upper_ok
                }))
            }
            COMPAT_OVERLAP_CLOSER => {
                let Some(k) = self.s.kappa() else {
                    return Err(Error::NotBound(Symbol::Kappa));
                };
                if self.s.delta().is_none() {
                    return Err(Error::NotBound(Symbol::Delta));
                }
                let cs: Vec<Set> = k.clusters().iter().map(|&c| to_set(c)).collect();
                Ok(cs.iter().all(|a| {
                    cs.iter().all(|b| {
                        cs.iter().all(|c| {
                            let applies = a != b
                                && a != c
                                && b != c
                                && !inter(a, b).is_empty()
                                && inter(a, c).is_empty();
                            !applies || self.delta(a, b, c)
                        })
                    })
                }))
            }
            other => {
                let a: AxiomId = other.parse().map_err(|_| Error::UnknownClaim(other.to_string()))?;
                if a == AxiomId::Clos1 {
                    return Err(Error::Config("clos1 has no statement to evaluate".into()));
                }
                self.need(a)?;
                Ok(self.axiom(a))
            }
        }
    }

    fn need(&self, a: AxiomId) -> Result<()> {
        match a.requires().iter().find(|&&x| !self.s.is_bound(x)) {
            Some(&x) => Err(Error::NotBound(x)),
            None => Ok(()),
        }
    }
}

/// Evaluates `claim` on `s` by exhaustive enumeration. Axiom ids are accepted
/// as claims and answer "no violating instance exists".
pub fn oracle_check(s: &MssStructure, claim: &str) -> Result<bool> {
    Naive::new(s)?.claim(claim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delta::DeltaPredicate;
    use crate::granules::{close_relation, BinaryRelation, ClosureFlags, Granulation};
    use crate::sets::Universe;
    use crate::validation::Clustering;
    use std::sync::Arc;

    fn example() -> MssStructure {
        let u = Arc::new(Universe::numbered(4).unwrap());
        let gens = BinaryRelation::new(4, [(0, 1), (1, 2)]).unwrap();
        let g = Granulation::predecessor(&close_relation(&gens, ClosureFlags::TOLERANCE));
        let k = Clustering::new(4, [0b0101, 0b0110, 0b1010].map(|b| Subset::from_bits(4, b))).unwrap();
        MssStructure::granular(u, g).unwrap().with_kappa(k).unwrap()
    }

    #[test]
    fn example_claims() {
        let s = example();
        for c in CLAIMS {
            assert!(oracle_check(&s, c).unwrap(), "{c}");
        }
        assert!(matches!(oracle_check(&s, "nonsense"), Err(Error::UnknownClaim(_))));
        assert!(oracle_check(&s, "clos1").is_err());
        assert!(matches!(oracle_check(&s, "i-coh"), Err(Error::NotBound(_))));
        assert!(!oracle_check(&s, "lclu").unwrap());
        assert!(matches!(oracle_check(&s, COMPAT_OVERLAP_CLOSER), Err(Error::NotBound(Symbol::Delta))));
    }

    #[test]
    fn example_coherence() {
        let s = example();
        let ops = s.operators().cloned();
        let with = |k| s.clone().with_delta(DeltaPredicate::builtin(k, 4, ops.clone()).unwrap()).unwrap();
        let e0 = with(BuiltinDelta::E0);
        assert!(oracle_check(&e0, "i-coh").unwrap());
        assert!(!oracle_check(&e0, "i-coh-2").unwrap());
        let e1 = with(BuiltinDelta::E1);
        assert!(oracle_check(&e1, "i-coh-2").unwrap());
        assert!(oracle_check(&e1, "strict-n-coh").unwrap());
        assert!(!oracle_check(&e1, "trans-1").unwrap());
        assert!(oracle_check(&e1, COMPAT_OVERLAP_CLOSER).unwrap());
        assert!(!oracle_check(&with(BuiltinDelta::E2), COMPAT_OVERLAP_CLOSER).unwrap());
    }
}
