//! Relations, neighborhood granulations and the approximation operators
//! built from them.
//!
//! Granular approximations follow the usual construction: the lower
//! approximation of `A` is the union of granules contained in `A`, the upper
//! approximation is the union of granules that meet `A`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sets::{Subset, EXHAUSTIVE_CAP};
use crate::verdict::{check_domain, check_tuples, CheckPlan, Instance, Verdict, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryRelation {
    n: usize,
    pairs: BTreeSet<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClosureFlags {
    pub reflexive: bool,
    pub symmetric: bool,
    pub transitive: bool,
}

impl ClosureFlags {
    pub const TOLERANCE: ClosureFlags = ClosureFlags {
        reflexive: true,
        symmetric: true,
        transitive: false,
    };
}

impl BinaryRelation {
    pub fn new<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        if let Some(&(x, y)) = pairs.iter().find(|&&(x, y)| x >= n || y >= n) {
            return Err(Error::UnknownElement(format!("pair ({x}, {y})")));
        }
        Ok(Self { n, pairs })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            pairs: BTreeSet::new(),
        }
    }

    pub fn diagonal(n: usize) -> Self {
        Self {
            n,
            pairs: (0..n).map(|i| (i, i)).collect(),
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            n,
            pairs: (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect(),
        }
    }

    /// Relation number `code` in the enumeration of all `2^(n²)` relations;
    /// bit `i·n + j` stands for the pair `(i, j)`.
    pub fn from_code(n: usize, code: u64) -> Self {
        let pairs = (0..n * n)
            .filter(|k| code >> k & 1 == 1)
            .map(|k| (k / n, k % n))
            .collect();
        Self { n, pairs }
    }

    pub fn universe_len(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.pairs.contains(&(x, y))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|i| self.contains(i, i))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs.iter().all(|&(x, y)| self.contains(y, x))
    }

    pub fn is_transitive(&self) -> bool {
        self.pairs.iter().all(|&(x, y)| {
            self.pairs
                .range((y, 0)..(y + 1, 0))
                .all(|&(_, z)| self.contains(x, z))
        })
    }

    pub fn is_tolerance(&self) -> bool {
        self.is_reflexive() && self.is_symmetric()
    }

    /// `{y : (y, x) ∈ r}`.
    pub fn predecessors(&self, x: usize) -> Subset {
        Subset::from_indices(
            self.n,
            self.pairs.iter().filter(|p| p.1 == x).map(|p| p.0),
        )
    }
}

/// Smallest superset of `r` closed under the requested properties.
#[allow(clippy::needless_range_loop)]
pub fn close_relation(r: &BinaryRelation, flags: ClosureFlags) -> BinaryRelation {
    let n = r.n;
    let mut m = vec![vec![false; n]; n];
    for (x, y) in r.pairs() {
        m[x][y] = true;
    }
    if flags.reflexive {
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = true;
        }
    }
    if flags.symmetric {
        for x in 0..n {
            for y in 0..n {
                if m[x][y] {
                    m[y][x] = true;
                }
            }
        }
    }
    // Warshall; closing a symmetric (reflexive) relation keeps it so.
    if flags.transitive {
        for k in 0..n {
            for x in 0..n {
                if m[x][k] {
                    for y in 0..n {
                        if m[k][y] {
                            m[x][y] = true;
                        }
                    }
                }
            }
        }
    }
    let pairs = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter(|&(x, y)| m[x][y])
        .collect();
    BinaryRelation { n, pairs }
}

/// An ordered collection of distinct nonempty granules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Granulation {
    n: usize,
    granules: Vec<Subset>,
    /// Generating element of each granule, when built from a relation.
    generators: Vec<Option<usize>>,
    diagnostics: Vec<String>,
}

impl Granulation {
    /// Explicit granules. Duplicates collapse onto their first occurrence.
    pub fn new(n: usize, granules: impl IntoIterator<Item = Subset>) -> Result<Self> {
        let mut g = Self {
            n,
            granules: Vec::new(),
            generators: Vec::new(),
            diagnostics: Vec::new(),
        };
        for (k, s) in granules.into_iter().enumerate() {
            if s.universe_len() != n {
                return Err(Error::UniverseMismatch {
                    left: n,
                    right: s.universe_len(),
                });
            }
            if s.is_empty() {
                return Err(Error::Config(format!("granule {k} is empty")));
            }
            g.push(s, None);
        }
        Ok(g)
    }

    /// One granule per element: `n(x) = {y : (y, x) ∈ r}`, ordered by `x`.
    ///
    /// Empty neighborhoods (possible when `r` is not reflexive) are skipped
    /// with a diagnostic.
    pub fn predecessor(r: &BinaryRelation) -> Self {
        let mut g = Self {
            n: r.n,
            granules: Vec::new(),
            generators: Vec::new(),
            diagnostics: Vec::new(),
        };
        if !r.is_reflexive() {
            g.diagnostics
                .push("relation is not reflexive; some x may lie outside n(x)".into());
        }
        for x in 0..r.n {
            let nx = r.predecessors(x);
            if nx.is_empty() {
                g.diagnostics
                    .push(format!("element {x} has an empty neighborhood; skipped"));
                continue;
            }
            g.push(nx, Some(x));
        }
        g
    }

    /// All singletons, i.e. the granulation of the identity relation.
    pub fn discrete(n: usize) -> Self {
        Self::predecessor(&BinaryRelation::diagonal(n))
    }

    fn push(&mut self, s: Subset, generator: Option<usize>) {
        if let Some(k) = self.granules.iter().position(|&t| t == s) {
            self.diagnostics
                .push(format!("duplicate granule collapsed into granule {k}"));
            return;
        }
        self.granules.push(s);
        self.generators.push(generator);
    }

    pub fn universe_len(&self) -> usize {
        self.n
    }

    pub fn granules(&self) -> &[Subset] {
        &self.granules
    }

    pub fn generators(&self) -> &[Option<usize>] {
        &self.generators
    }

    pub fn diagnostics(&self) -> &[String] {
        &self.diagnostics
    }

    pub fn len(&self) -> usize {
        self.granules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.granules.is_empty()
    }

    pub fn lower(&self, a: Subset) -> Subset {
        self.granules
            .iter()
            .filter(|g| g.is_subset_of(a))
            .fold(Subset::empty(self.n), |acc, g| acc.union(*g))
    }

    pub fn upper(&self, a: Subset) -> Subset {
        self.granules
            .iter()
            .filter(|g| g.intersects(a))
            .fold(Subset::empty(self.n), |acc, g| acc.union(*g))
    }

    /// Whether `x` is exactly a union of (zero or more) granules.
    pub fn is_union_of_granules(&self, x: Subset) -> bool {
        self.lower(x) == x
    }
}

/// The bited upper approximation `u_b`.
#[derive(Clone, Default)]
pub enum BitedUpper {
    /// `u_b = u`.
    #[default]
    Upper,
    /// `u_b = l`, the degenerate lower bound of the admissible range.
    Lower,
    Custom(Arc<dyn Fn(Subset) -> Subset + Send + Sync>),
}

impl fmt::Debug for BitedUpper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BitedUpper::Upper => f.write_str("Upper"),
            BitedUpper::Lower => f.write_str("Lower"),
            BitedUpper::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Approximations {
    Granular(Granulation),
    /// `lower[i]`, `upper[i]` approximate the subset with index `i`.
    Tables { lower: Vec<Subset>, upper: Vec<Subset> },
}

/// The operators `l`, `u` and `u_b`, all total on the powerset.
#[derive(Debug, Clone)]
pub struct OperatorSuite {
    n: usize,
    approx: Approximations,
    bited: BitedUpper,
}

impl PartialEq for OperatorSuite {
    /// Custom bited plugins never compare equal.
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.approx == other.approx
            && matches!(
                (&self.bited, &other.bited),
                (BitedUpper::Upper, BitedUpper::Upper) | (BitedUpper::Lower, BitedUpper::Lower)
            )
    }
}

impl OperatorSuite {
    pub fn granular(g: Granulation) -> Self {
        Self {
            n: g.n,
            approx: Approximations::Granular(g),
            bited: BitedUpper::Upper,
        }
    }

    /// Arbitrary operators given as tables indexed by subset index.
    pub fn from_tables(n: usize, lower: Vec<Subset>, upper: Vec<Subset>) -> Result<Self> {
        if n > EXHAUSTIVE_CAP {
            return Err(Error::ExhaustiveTooLarge {
                size: n,
                cap: EXHAUSTIVE_CAP,
            });
        }
        let expected = 1usize << n;
        for t in [&lower, &upper] {
            if t.len() != expected {
                return Err(Error::TableSize {
                    got: t.len(),
                    expected,
                });
            }
            if let Some(s) = t.iter().find(|s| s.universe_len() != n) {
                return Err(Error::UniverseMismatch {
                    left: n,
                    right: s.universe_len(),
                });
            }
        }
        Ok(Self {
            n,
            approx: Approximations::Tables { lower, upper },
            bited: BitedUpper::Upper,
        })
    }

    /// Registers `u_b`, rejecting plugins outside `l(A) ⊆ u_b(A) ⊆ u(A)`.
    ///
    /// The bound is checked on every subset for universes up to
    /// [`EXHAUSTIVE_CAP`] elements and on a seeded sample beyond.
    pub fn with_bited_upper(mut self, plugin: BitedUpper) -> Result<Self> {
        self.bited = plugin;
        let ok = |s: Subset| {
            let b = self.bited_upper(s);
            self.lower(s).is_subset_of(b) && b.is_subset_of(self.upper(s))
        };
        if self.n <= EXHAUSTIVE_CAP {
            for i in 0..1u64 << self.n {
                if !ok(Subset::from_bits(self.n, i)) {
                    return Err(Error::PluginOutOfBounds(i));
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..100_000 {
                let s = Subset::from_bits(self.n, rng.random::<u64>());
                if !ok(s) {
                    return Err(Error::PluginOutOfBounds(s.bits()));
                }
            }
        }
        Ok(self)
    }

    pub fn universe_len(&self) -> usize {
        self.n
    }

    pub fn granulation(&self) -> Option<&Granulation> {
        match &self.approx {
            Approximations::Granular(g) => Some(g),
            Approximations::Tables { .. } => None,
        }
    }

    pub fn is_granular(&self) -> bool {
        self.granulation().is_some()
    }

    pub fn lower(&self, a: Subset) -> Subset {
        match &self.approx {
            Approximations::Granular(g) => g.lower(a),
            Approximations::Tables { lower, .. } => lower[a.index()],
        }
    }

    pub fn upper(&self, a: Subset) -> Subset {
        match &self.approx {
            Approximations::Granular(g) => g.upper(a),
            Approximations::Tables { upper, .. } => upper[a.index()],
        }
    }

    pub fn bited_upper(&self, a: Subset) -> Subset {
        match &self.bited {
            BitedUpper::Upper => self.upper(a),
            BitedUpper::Lower => self.lower(a),
            BitedUpper::Custom(f) => f(a),
        }
    }

    pub fn bited(&self) -> &BitedUpper {
        &self.bited
    }

    /// `l(A) = A` and `u(A) = A`.
    pub fn is_definite(&self, a: Subset) -> bool {
        self.lower(a) == a && self.upper(a) == a
    }

    /// `A ∼ B` iff `l(A) = l(B)` and `u_b(A) = u_b(B)`.
    pub fn rough_equal(&self, a: Subset, b: Subset) -> bool {
        self.lower(a) == self.lower(b) && self.bited_upper(a) == self.bited_upper(b)
    }
}

pub const ADM_REPRESENTABLE: &str = "adm-representable";
pub const ADM_LOWER_DEFINITE: &str = "adm-lower-definite";
pub const ADM_DEFINITE_COVER: &str = "adm-definite-cover";

/// Admissibility of `g` for `ops`, as three verdicts:
///
/// 1. every `l(A)` and `u(A)` is a union of granules,
/// 2. every granule is lower definite,
/// 3. every pair of distinct granules lies inside some definite object.
///
/// Check 3 reports the least definite superset of each pair as evidence.
pub fn check_admissibility(g: &Granulation, ops: &OperatorSuite, plan: &CheckPlan) -> [Verdict; 3] {
    [
        representable(g, ops, plan),
        lower_definite(g, ops),
        definite_cover(g, ops, plan),
    ]
}

pub fn representable_instance(g: &Granulation, ops: &OperatorSuite, a: Subset) -> Instance {
    Instance::from_bool(
        g.is_union_of_granules(ops.lower(a)) && g.is_union_of_granules(ops.upper(a)),
    )
}

fn representable(g: &Granulation, ops: &OperatorSuite, plan: &CheckPlan) -> Verdict {
    check_tuples(ADM_REPRESENTABLE, &["A"], g.n, plan, |t| {
        representable_instance(g, ops, t[0])
    })
}

pub fn lower_definite_instance(ops: &OperatorSuite, granule: Subset) -> Instance {
    Instance::from_bool(ops.lower(granule) == granule)
}

fn lower_definite(g: &Granulation, ops: &OperatorSuite) -> Verdict {
    check_domain(
        ADM_LOWER_DEFINITE,
        &["G"],
        g.granules.iter().map(|&s| vec![s]),
        |t| lower_definite_instance(ops, t[0]),
    )
}

/// Least definite `D ⊇ target` in canonical order, scanning at most `budget` candidates.
pub fn least_definite_superset(ops: &OperatorSuite, target: Subset, budget: u64) -> Option<Subset> {
    // supersets of `target` in canonical order are `target ∪ m` for increasing
    // submasks `m` of the complement
    let free: Vec<usize> = target.complement().elements().collect();
    let n = target.universe_len();
    let count = if free.len() >= 64 {
        u64::MAX
    } else {
        1u64 << free.len()
    };
    (0..count.min(budget.max(1))).find_map(|k| {
        let extra = Subset::from_indices(
            n,
            free.iter()
                .enumerate()
                .filter(|(bit, _)| k >> bit & 1 == 1)
                .map(|(_, &i)| i),
        );
        let d = target.union(extra);
        ops.is_definite(d).then_some(d)
    })
}

pub fn definite_cover_instance(ops: &OperatorSuite, g1: Subset, g2: Subset, budget: u64) -> Instance {
    Instance::from_bool(least_definite_superset(ops, g1.union(g2), budget).is_some())
}

fn definite_cover(g: &Granulation, ops: &OperatorSuite, plan: &CheckPlan) -> Verdict {
    let vars = ["G1", "G2"];
    let pairs: Vec<Vec<Subset>> = g
        .granules
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| g.granules[i + 1..].iter().map(move |&b| vec![a, b]))
        .collect();
    let mut evidence = Vec::new();
    let mut verdict = check_domain(ADM_DEFINITE_COVER, &vars, pairs, |t| {
        match least_definite_superset(ops, t[0].union(t[1]), plan.samples) {
            Some(d) => {
                evidence.push(Witness::new(&["G1", "G2", "D"], &[t[0], t[1], d]));
                Instance::Satisfied
            }
            None => Instance::Violated,
        }
    });
    if verdict.status.passed() {
        verdict.evidence = evidence;
    }
    verdict
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::Universe;
    use crate::verdict::Status;

    fn h() -> Universe {
        Universe::numbered(4).unwrap()
    }

    fn s(u: &Universe, names: &[&str]) -> Subset {
        u.subset(names).unwrap()
    }

    fn example_tolerance() -> BinaryRelation {
        let gens = BinaryRelation::new(4, [(0, 1), (1, 2)]).unwrap();
        close_relation(&gens, ClosureFlags::TOLERANCE)
    }

    fn example_ops() -> OperatorSuite {
        OperatorSuite::granular(Granulation::predecessor(&example_tolerance()))
    }

    #[test]
    fn tolerance_closure_of_generators() {
        let t = example_tolerance();
        let expected: BTreeSet<_> = [
            (0, 0),
            (1, 1),
            (2, 2),
            (3, 3),
            (0, 1),
            (1, 0),
            (1, 2),
            (2, 1),
        ]
        .into_iter()
        .collect();
        assert_eq!(t.pairs().collect::<BTreeSet<_>>(), expected);
        assert!(t.is_tolerance());
        assert!(!t.is_transitive());
    }

    #[test]
    fn reflexive_closure_of_empty_is_diagonal() {
        let r = close_relation(
            &BinaryRelation::empty(4),
            ClosureFlags {
                reflexive: true,
                ..Default::default()
            },
        );
        assert_eq!(r, BinaryRelation::diagonal(4));
    }

    #[test]
    fn symmetric_transitive_closure() {
        let r = close_relation(
            &BinaryRelation::new(4, [(0, 1)]).unwrap(),
            ClosureFlags {
                symmetric: true,
                transitive: true,
                ..Default::default()
            },
        );
        let got: BTreeSet<_> = r.pairs().collect();
        assert_eq!(got, [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().collect());
        assert!(r.is_symmetric() && r.is_transitive() && !r.is_reflexive());
    }

    #[test]
    fn relation_rejects_out_of_range_pairs() {
        assert!(BinaryRelation::new(2, [(0, 2)]).is_err());
    }

    #[test]
    fn example_predecessor_granules() {
        let u = h();
        let g = Granulation::predecessor(&example_tolerance());
        assert_eq!(
            g.granules(),
            &[
                s(&u, &["x1", "x2"]),
                s(&u, &["x1", "x2", "x3"]),
                s(&u, &["x2", "x3"]),
                s(&u, &["x4"]),
            ]
        );
        assert_eq!(g.generators(), &[Some(0), Some(1), Some(2), Some(3)]);
        assert!(g.diagnostics().is_empty());
    }

    #[test]
    fn diagonal_and_full_granulations() {
        let g = Granulation::discrete(4);
        assert_eq!(g.len(), 4);
        assert!(g.granules().iter().all(|x| x.len() == 1));
        let full = Granulation::predecessor(&BinaryRelation::full(4));
        assert_eq!(full.granules(), &[Subset::full(4)]);
        assert_eq!(full.diagnostics().len(), 3);
    }

    #[test]
    fn explicit_granulation_rejects_empty_and_collapses_duplicates() {
        let u = h();
        assert!(Granulation::new(4, [u.empty()]).is_err());
        let g = Granulation::new(4, [s(&u, &["x1"]), s(&u, &["x1"])]).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.diagnostics().len(), 1);
    }

    #[test]
    fn example_approximations() {
        let u = h();
        let ops = example_ops();
        let a = s(&u, &["x2", "x4"]);
        assert_eq!(ops.lower(a), s(&u, &["x4"]));
        assert_eq!(ops.upper(a), u.full());
        assert_eq!(ops.lower(u.empty()), u.empty());
        assert_eq!(ops.upper(u.empty()), u.empty());
        let b = s(&u, &["x1", "x2", "x3"]);
        assert_eq!(ops.lower(b), b);
        assert_eq!(ops.upper(b), b);
    }

    #[test]
    fn bited_upper_defaults_and_plugins() {
        let u = h();
        let a = s(&u, &["x2", "x4"]);
        let ops = example_ops();
        assert_eq!(ops.bited_upper(a), u.full());
        assert_eq!(ops.bited_upper(u.empty()), u.empty());
        let lowered = example_ops().with_bited_upper(BitedUpper::Lower).unwrap();
        assert_eq!(lowered.bited_upper(a), s(&u, &["x4"]));
        let bad = example_ops().with_bited_upper(BitedUpper::Custom(Arc::new(|s: Subset| {
            s.complement()
        })));
        assert!(matches!(bad, Err(Error::PluginOutOfBounds(_))));
    }

    #[test]
    fn definiteness() {
        let u = h();
        let ops = example_ops();
        assert!(ops.is_definite(s(&u, &["x4"])));
        assert!(ops.is_definite(s(&u, &["x1", "x2", "x3"])));
        assert!(!ops.is_definite(s(&u, &["x2", "x4"])));
    }

    #[test]
    fn rough_equality() {
        let u = h();
        let ops = example_ops();
        assert!(ops.rough_equal(s(&u, &["x2"]), s(&u, &["x3"])));
        assert!(ops.rough_equal(s(&u, &["x1", "x4"]), s(&u, &["x1", "x4"])));
        assert!(!ops.rough_equal(s(&u, &["x4"]), s(&u, &["x2"])));
    }

    #[test]
    fn example_granulation_is_admissible() {
        let u = h();
        let ops = example_ops();
        let g = ops.granulation().unwrap();
        let [i, ii, iii] = check_admissibility(g, &ops, &CheckPlan::default());
        assert_eq!(i.status, Status::Holds);
        assert_eq!(i.instances_checked, 16);
        assert_eq!(ii.status, Status::Holds);
        assert_eq!(iii.status, Status::Holds);
        let g1g4 = iii
            .evidence
            .iter()
            .find(|w| w.get("G1") == Some(s(&u, &["x1", "x2"])) && w.get("G2") == Some(s(&u, &["x4"])))
            .unwrap();
        assert_eq!(g1g4.get("D"), Some(u.full()));
    }

    #[test]
    fn nested_granules_on_three_elements() {
        let u = Universe::numbered(3).unwrap();
        let g = Granulation::new(3, [s(&u, &["x1"]), s(&u, &["x1", "x2"])]).unwrap();
        let ops = OperatorSuite::granular(g.clone());
        let [i, ii, iii] = check_admissibility(&g, &ops, &CheckPlan::default());
        assert!(i.status.passed() && ii.status.passed());
        // {x1,x2} is its own lower and upper approximation
        assert_eq!(iii.status, Status::Holds);
        assert_eq!(iii.evidence[0].get("D"), Some(s(&u, &["x1", "x2"])));
    }

    #[test]
    fn definite_cover_fails_without_definite_superset() {
        let u = Universe::numbered(3).unwrap();
        let g = Granulation::new(3, [s(&u, &["x1"]), s(&u, &["x2"])]).unwrap();
        let x3 = s(&u, &["x3"]);
        let lower: Vec<_> = (0..8).map(|i| g.lower(Subset::from_bits(3, i))).collect();
        let upper: Vec<_> = (0..8)
            .map(|i| {
                let a = Subset::from_bits(3, i);
                if a.is_empty() {
                    a
                } else {
                    a.union(x3)
                }
            })
            .collect();
        let ops = OperatorSuite::from_tables(3, lower, upper).unwrap();
        let [i, ii, iii] = check_admissibility(&g, &ops, &CheckPlan::default());
        assert_eq!(i.status, Status::Fails);
        assert_eq!(ii.status, Status::Holds);
        assert_eq!(iii.status, Status::Fails);
        let w = iii.witness().unwrap();
        assert_eq!(w.values(), vec![s(&u, &["x1"]), s(&u, &["x2"])]);
    }

    #[test]
    fn discrete_granulation_makes_everything_definite() {
        let ops = OperatorSuite::granular(Granulation::discrete(3));
        let g = ops.granulation().unwrap();
        assert!(check_admissibility(g, &ops, &CheckPlan::default())
            .iter()
            .all(|v| v.status == Status::Holds));
        assert!((0..8).all(|i| ops.is_definite(Subset::from_bits(3, i))));
    }

    #[test]
    fn table_operators_validate_shape() {
        assert!(matches!(
            OperatorSuite::from_tables(2, vec![Subset::empty(2); 3], vec![Subset::empty(2); 4]),
            Err(Error::TableSize { got: 3, expected: 4 })
        ));
    }
}
