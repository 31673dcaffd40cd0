//! Finite universes and their powerset algebra.
//!
//! A [`Subset`] is a characteristic vector packed into a `u64`, so universes
//! hold at most [`MAX_ELEMENTS`] names. Element `i` of the universe is bit `i`.
//! The canonical enumeration order of subsets is binary counting over that
//! packing: `∅, {x1}, {x2}, {x1,x2}, {x3}, ...`. Every "minimal witness" in
//! this crate is minimal with respect to this order (tuples compare
//! component by component, first variable first).

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Hard limit imposed by the `u64` packing.
pub const MAX_ELEMENTS: usize = 64;

/// Largest universe for which full powerset enumeration is allowed.
pub const EXHAUSTIVE_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Universe {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        if names.len() > MAX_ELEMENTS {
            return Err(Error::UniverseTooLarge {
                size: names.len(),
                max: MAX_ELEMENTS,
            });
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::EmptyElementName(i));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateElement(name.clone()));
            }
        }
        Ok(Self { names, index })
    }

    /// `x1, ..., xn`.
    pub fn numbered(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| format!("x{i}")))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn position(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn subset<S: AsRef<str>>(&self, names: &[S]) -> Result<Subset> {
        let mut s = self.empty();
        for name in names {
            s = s.with(self.position(name.as_ref())?);
        }
        Ok(s)
    }

    pub fn empty(&self) -> Subset {
        Subset::empty(self.len())
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }

    pub fn singleton(&self, i: usize) -> Subset {
        self.empty().with(i)
    }

    pub fn names_of(&self, s: Subset) -> Vec<String> {
        s.elements().map(|i| self.names[i].clone()).collect()
    }

    /// Renders a subset as `{x1,x3}`.
    pub fn render(&self, s: Subset) -> String {
        format!("{{{}}}", self.names_of(s).join(","))
    }

    /// Number of subsets, `2^n`.
    pub fn powerset_size(&self) -> u128 {
        1u128 << self.len()
    }

    /// All subsets in canonical order. Refuses universes above [`EXHAUSTIVE_CAP`].
    pub fn powerset(&self) -> Result<Powerset> {
        Powerset::new(self.len())
    }

    pub fn check(&self, s: Subset) -> Result<()> {
        if s.universe_len() == self.len() {
            Ok(())
        } else {
            Err(Error::UniverseMismatch {
                left: self.len(),
                right: s.universe_len(),
            })
        }
    }
}

/// Iterator over every subset of an `n`-element universe in canonical order.
#[derive(Debug, Clone)]
pub struct Powerset {
    n: usize,
    next: u64,
    end: u64,
}

impl Powerset {
    pub fn new(n: usize) -> Result<Self> {
        if n > EXHAUSTIVE_CAP {
            return Err(Error::ExhaustiveTooLarge {
                size: n,
                cap: EXHAUSTIVE_CAP,
            });
        }
        Ok(Self {
            n,
            next: 0,
            end: 1u64 << n,
        })
    }
}

impl Iterator for Powerset {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        if self.next >= self.end {
            return None;
        }
        let s = Subset::from_bits(self.n, self.next);
        self.next += 1;
        Some(s)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = (self.end - self.next) as usize;
        (rest, Some(rest))
    }
}

impl ExactSizeIterator for Powerset {}

fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A subset of a finite universe, stored as a characteristic vector.
///
/// Derived ordering is the canonical enumeration order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    bits: u64,
    n: u8,
}

impl Subset {
    pub fn empty(n: usize) -> Self {
        debug_assert!(n <= MAX_ELEMENTS);
        Self { bits: 0, n: n as u8 }
    }

    pub fn full(n: usize) -> Self {
        Self {
            bits: mask(n),
            n: n as u8,
        }
    }

    /// Bits outside the universe are discarded.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        Self {
            bits: bits & mask(n),
            n: n as u8,
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(n: usize, indices: I) -> Self {
        indices
            .into_iter()
            .fold(Self::empty(n), |s, i| s.with(i))
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    /// Position in the canonical enumeration order.
    pub fn index(self) -> usize {
        self.bits as usize
    }

    pub fn universe_len(self) -> usize {
        self.n as usize
    }

    pub fn with(self, i: usize) -> Self {
        assert!(i < self.universe_len(), "element {i} outside universe");
        Self {
            bits: self.bits | (1u64 << i),
            ..self
        }
    }

    pub fn contains(self, i: usize) -> bool {
        i < self.universe_len() && self.bits & (1u64 << i) != 0
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn is_full(self) -> bool {
        self.bits == mask(self.universe_len())
    }

    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mut rest = self.bits;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i)
            }
        })
    }

    pub fn singletons(self) -> impl Iterator<Item = Subset> {
        let n = self.universe_len();
        self.elements().map(move |i| Subset::empty(n).with(i))
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.bits & !other.bits == 0
    }

    pub fn is_proper_subset_of(self, other: Subset) -> bool {
        self.is_subset_of(other) && self.bits != other.bits
    }

    pub fn intersects(self, other: Subset) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.bits & other.bits != 0
    }

    pub fn union(self, other: Subset) -> Subset {
        debug_assert_eq!(self.n, other.n);
        Self {
            bits: self.bits | other.bits,
            ..self
        }
    }

    pub fn intersection(self, other: Subset) -> Subset {
        debug_assert_eq!(self.n, other.n);
        Self {
            bits: self.bits & other.bits,
            ..self
        }
    }

    /// Total set difference; see [`partial_difference`] for the partial operation.
    pub fn minus(self, other: Subset) -> Subset {
        debug_assert_eq!(self.n, other.n);
        Self {
            bits: self.bits & !other.bits,
            ..self
        }
    }

    pub fn complement(self) -> Subset {
        Self {
            bits: !self.bits & mask(self.universe_len()),
            ..self
        }
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.elements().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "x{}", i + 1)?;
        }
        f.write_str("}")
    }
}

/// Outcome of a partial operation. Undefinedness is a value, not an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Partial {
    Defined(Subset),
    Undefined,
}

impl Partial {
    pub fn is_defined(self) -> bool {
        matches!(self, Partial::Defined(_))
    }

    pub fn value(self) -> Option<Subset> {
        match self {
            Partial::Defined(s) => Some(s),
            Partial::Undefined => None,
        }
    }

    /// Applies `f` to a defined value; undefinedness propagates.
    pub fn and_then(self, f: impl FnOnce(Subset) -> Partial) -> Partial {
        match self {
            Partial::Defined(s) => f(s),
            Partial::Undefined => Partial::Undefined,
        }
    }

    pub fn map(self, f: impl FnOnce(Subset) -> Subset) -> Partial {
        self.and_then(|s| Partial::Defined(f(s)))
    }
}

impl From<Option<Subset>> for Partial {
    fn from(v: Option<Subset>) -> Self {
        v.map_or(Partial::Undefined, Partial::Defined)
    }
}

/// `s =ω t`: equal whenever both sides are defined.
pub fn omega_equal(s: Partial, t: Partial) -> bool {
    match (s, t) {
        (Partial::Defined(x), Partial::Defined(y)) => x == y,
        _ => true,
    }
}

/// `s =ω* t`: one side is defined exactly when the other is, and then they agree.
pub fn omega_star_equal(s: Partial, t: Partial) -> bool {
    match (s, t) {
        (Partial::Defined(x), Partial::Defined(y)) => x == y,
        (Partial::Undefined, Partial::Undefined) => true,
        _ => false,
    }
}

/// When `a ∖ b` is defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum DifferencePolicy {
    /// Defined iff `b ⊆ a`.
    #[default]
    Contained,
    /// Always defined.
    Total,
    /// Defined iff `b ⊊ a`.
    ProperlyContained,
}

impl DifferencePolicy {
    pub fn apply(self, a: Subset, b: Subset) -> Partial {
        let defined = match self {
            DifferencePolicy::Contained => b.is_subset_of(a),
            DifferencePolicy::Total => true,
            DifferencePolicy::ProperlyContained => b.is_proper_subset_of(a),
        };
        if defined {
            Partial::Defined(a.minus(b))
        } else {
            Partial::Undefined
        }
    }
}

fn same_universe(a: Subset, b: Subset) -> Result<()> {
    if a.universe_len() == b.universe_len() {
        Ok(())
    } else {
        Err(Error::UniverseMismatch {
            left: a.universe_len(),
            right: b.universe_len(),
        })
    }
}

/// Parthood under the inclusion instantiation.
pub fn part_of(a: Subset, b: Subset) -> Result<bool> {
    same_universe(a, b)?;
    Ok(a.is_subset_of(b))
}

pub fn join(a: Subset, b: Subset) -> Result<Subset> {
    same_universe(a, b)?;
    Ok(a.union(b))
}

pub fn meet(a: Subset, b: Subset) -> Result<Subset> {
    same_universe(a, b)?;
    Ok(a.intersection(b))
}

/// `a ∖ b` under the default policy: defined iff `b ⊆ a`.
pub fn partial_difference(a: Subset, b: Subset) -> Result<Partial> {
    partial_difference_with(a, b, DifferencePolicy::Contained)
}

pub fn partial_difference_with(a: Subset, b: Subset, policy: DifferencePolicy) -> Result<Partial> {
    same_universe(a, b)?;
    Ok(policy.apply(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h() -> Universe {
        Universe::numbered(4).unwrap()
    }

    fn s(u: &Universe, names: &[&str]) -> Subset {
        u.subset(names).unwrap()
    }

    #[test]
    fn universe_rejects_bad_names() {
        assert_eq!(Universe::new(Vec::<String>::new()), Err(Error::EmptyUniverse));
        assert_eq!(
            Universe::new(["a", "b", "a"]),
            Err(Error::DuplicateElement("a".into()))
        );
        assert_eq!(Universe::new(["a", ""]), Err(Error::EmptyElementName(1)));
        assert!(matches!(
            Universe::numbered(65),
            Err(Error::UniverseTooLarge { size: 65, .. })
        ));
        assert!(Universe::numbered(64).is_ok());
    }

    #[test]
    fn part_of_examples() {
        let u = h();
        assert!(part_of(s(&u, &["x4"]), s(&u, &["x4"])).unwrap());
        assert!(part_of(s(&u, &["x1", "x3"]), s(&u, &["x1", "x2", "x3"])).unwrap());
        assert!(!part_of(s(&u, &["x1", "x2"]), s(&u, &["x2", "x4"])).unwrap());
    }

    #[test]
    fn mismatched_universes_are_structural_errors() {
        let a = Subset::empty(3);
        let b = Subset::empty(4);
        assert_eq!(
            part_of(a, b),
            Err(Error::UniverseMismatch { left: 3, right: 4 })
        );
        assert!(join(a, b).is_err());
        assert!(meet(a, b).is_err());
        assert!(partial_difference(a, b).is_err());
    }

    #[test]
    fn partial_difference_examples() {
        let u = h();
        assert_eq!(
            partial_difference(s(&u, &["x2", "x4"]), s(&u, &["x4"])).unwrap(),
            Partial::Defined(s(&u, &["x2"]))
        );
        assert_eq!(
            partial_difference(s(&u, &["x1"]), s(&u, &["x2"])).unwrap(),
            Partial::Undefined
        );
        assert_eq!(
            partial_difference(u.full(), u.empty()).unwrap(),
            Partial::Defined(u.full())
        );
    }

    #[test]
    fn difference_policies() {
        let u = h();
        let a = s(&u, &["x1", "x2"]);
        assert_eq!(
            DifferencePolicy::Total.apply(s(&u, &["x1"]), s(&u, &["x2"])),
            Partial::Defined(s(&u, &["x1"]))
        );
        assert_eq!(DifferencePolicy::ProperlyContained.apply(a, a), Partial::Undefined);
        assert_eq!(
            DifferencePolicy::Contained.apply(a, a),
            Partial::Defined(u.empty())
        );
    }

    #[test]
    fn join_meet_examples() {
        let u = h();
        assert_eq!(
            join(s(&u, &["x1"]), s(&u, &["x3"])).unwrap(),
            s(&u, &["x1", "x3"])
        );
        assert_eq!(
            meet(s(&u, &["x1", "x3"]), s(&u, &["x2", "x3"])).unwrap(),
            s(&u, &["x3"])
        );
        assert_eq!(meet(s(&u, &["x1"]), s(&u, &["x2"])).unwrap(), u.empty());
    }

    #[test]
    fn omega_equalities() {
        let u = h();
        let x1 = Partial::Defined(s(&u, &["x1"]));
        let x2 = Partial::Defined(s(&u, &["x2"]));
        assert!(omega_equal(Partial::Undefined, x1));
        assert!(!omega_star_equal(Partial::Undefined, x1));
        assert!(omega_equal(x1, x1) && omega_star_equal(x1, x1));
        assert!(!omega_equal(x1, x2) && !omega_star_equal(x1, x2));
        assert!(omega_equal(Partial::Undefined, Partial::Undefined));
        assert!(omega_star_equal(Partial::Undefined, Partial::Undefined));
    }

    #[test]
    fn powerset_order_and_cap() {
        let all: Vec<_> = h().powerset().unwrap().collect();
        assert_eq!(all.len(), 16);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(format!("{:?}", all[5]), "{x1,x3}");
        assert!(matches!(
            Powerset::new(25),
            Err(Error::ExhaustiveTooLarge { size: 25, cap: 24 })
        ));
    }

    #[test]
    fn render_and_names() {
        let u = Universe::new(["a", "b", "c"]).unwrap();
        let x = u.subset(&["c", "a"]).unwrap();
        assert_eq!(u.render(x), "{a,c}");
        assert_eq!(u.names_of(x), vec!["a", "c"]);
        assert_eq!(u.subset(&["z"]), Err(Error::UnknownElement("z".into())));
        assert_eq!(x.complement(), u.subset(&["b"]).unwrap());
        assert!(u.full().is_full() && u.empty().is_empty());
    }

    #[test]
    fn exhaustive_lattice_laws_small() {
        let all: Vec<_> = h().powerset().unwrap().collect();
        for &a in &all {
            assert!(part_of(a, a).unwrap());
            for &b in &all {
                if a.is_subset_of(b) && b.is_subset_of(a) {
                    assert_eq!(a, b);
                }
                if let Partial::Defined(d) = partial_difference(a, b).unwrap() {
                    assert_eq!(d.union(b), a);
                    assert!(d.intersection(b).is_empty());
                }
                assert_eq!(a.union(b).intersection(a), a);
                assert_eq!(a.intersection(b).union(a), a);
                let le = a.is_subset_of(b);
                assert_eq!(le, a.union(b) == b);
                assert_eq!(le, a.intersection(b) == a);
                for &c in &all {
                    assert_eq!(
                        a.intersection(b).union(c),
                        a.union(c).intersection(b.union(c))
                    );
                    assert_eq!(
                        a.union(b).intersection(c),
                        a.intersection(c).union(b.intersection(c))
                    );
                }
            }
        }
    }
}
