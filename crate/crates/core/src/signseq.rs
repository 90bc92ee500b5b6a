//! Sign sequences and bracket-matching pairings.
//!
//! Positions are arbitrary integers. In a matching, openers play `(` and
//! closers play `)`; an element that is both an opener and a closer is
//! paired with itself and takes no further part in the matching.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Bound;

use crate::error::{Error, Result};

pub type PosSet = BTreeSet<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

/// `T = (T⁺, T⁻)`, two disjoint finite sets of positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct SignSequence {
    plus: PosSet,
    minus: PosSet,
}

impl SignSequence {
    pub fn new(plus: PosSet, minus: PosSet) -> Result<Self> {
        if let Some(x) = plus.intersection(&minus).next() {
            return Err(Error::Precondition(format!("position {x} is both + and -")));
        }
        Ok(SignSequence { plus, minus })
    }

    pub fn from_slices(plus: &[i64], minus: &[i64]) -> Result<Self> {
        Self::new(plus.iter().copied().collect(), minus.iter().copied().collect())
    }

    /// Builds a sequence on `1..=signs.len()` from a sign word.
    pub fn from_signs(signs: &[Sign]) -> Self {
        let mut t = SignSequence::default();
        for (i, s) in signs.iter().enumerate() {
            let pos = i as i64 + 1;
            match s {
                Sign::Plus => t.plus.insert(pos),
                Sign::Minus => t.minus.insert(pos),
            };
        }
        t
    }

    pub fn plus(&self) -> &PosSet {
        &self.plus
    }

    pub fn minus(&self) -> &PosSet {
        &self.minus
    }

    /// `|T| = |T⁺| - |T⁻|`.
    pub fn size(&self) -> i64 {
        self.plus.len() as i64 - self.minus.len() as i64
    }

    /// Number of positions, `|T⁺| + |T⁻|`.
    pub fn len(&self) -> usize {
        self.plus.len() + self.minus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plus.is_empty() && self.minus.is_empty()
    }

    pub fn sign(&self, x: i64) -> Option<Sign> {
        if self.plus.contains(&x) {
            Some(Sign::Plus)
        } else if self.minus.contains(&x) {
            Some(Sign::Minus)
        } else {
            None
        }
    }

    /// All positions in increasing order with their signs.
    pub fn signed_positions(&self) -> Vec<(i64, Sign)> {
        let mut v: Vec<(i64, Sign)> = self
            .plus
            .iter()
            .map(|&x| (x, Sign::Plus))
            .chain(self.minus.iter().map(|&x| (x, Sign::Minus)))
            .collect();
        v.sort_unstable();
        v
    }

    /// `T↑d`: `d` moves from `T⁻` to `T⁺`.
    pub fn raise(&self, d: i64) -> Result<SignSequence> {
        if !self.minus.contains(&d) {
            return Err(Error::Precondition(format!("{d} is not a - position")));
        }
        let mut t = self.clone();
        t.minus.remove(&d);
        t.plus.insert(d);
        Ok(t)
    }

    /// Positions within `(lower, upper)` with the given bound kinds.
    pub fn subsequence(&self, lower: Bound<i64>, upper: Bound<i64>) -> SignSequence {
        let keep = |x: &&i64| in_bounds(**x, lower, upper);
        SignSequence {
            plus: self.plus.iter().filter(keep).copied().collect(),
            minus: self.minus.iter().filter(keep).copied().collect(),
        }
    }

    /// `T^{>c}`.
    pub fn above(&self, c: i64) -> SignSequence {
        self.subsequence(Bound::Excluded(c), Bound::Unbounded)
    }

    /// `T_a^b`, the open window strictly between `a` and `b`.
    pub fn between(&self, a: i64, b: i64) -> SignSequence {
        self.subsequence(Bound::Excluded(a), Bound::Excluded(b))
    }

    /// Height of `Γ(T)` just after `x`: `#T⁺≤x - #T⁻≤x`.
    pub fn height_after(&self, x: i64) -> i64 {
        self.plus.range(..=x).count() as i64 - self.minus.range(..=x).count() as i64
    }
}

impl fmt::Display for SignSequence {
    /// `1- 2+ 3+`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (x, s)) in self.signed_positions().into_iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            let c = if s == Sign::Plus { '+' } else { '-' };
            write!(f, "{x}{c}")?;
        }
        Ok(())
    }
}

pub fn in_bounds(x: i64, lower: Bound<i64>, upper: Bound<i64>) -> bool {
    let lo = match lower {
        Bound::Included(a) => x >= a,
        Bound::Excluded(a) => x > a,
        Bound::Unbounded => true,
    };
    let hi = match upper {
        Bound::Included(b) => x <= b,
        Bound::Excluded(b) => x < b,
        Bound::Unbounded => true,
    };
    lo && hi
}

pub fn subsequence(t: &SignSequence, lower: Bound<i64>, upper: Bound<i64>) -> SignSequence {
    t.subsequence(lower, upper)
}

/// Result of bracket matching.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Matching {
    /// `(opener, closer)` pairs sorted by opener.
    pub pairs: Vec<(i64, i64)>,
    pub unpaired_openers: PosSet,
    pub unpaired_closers: PosSet,
    pub self_paired: PosSet,
}

impl Matching {
    /// `π(a)`; self-paired elements map to themselves.
    pub fn partner_of_opener(&self, a: i64) -> Option<i64> {
        if self.self_paired.contains(&a) {
            return Some(a);
        }
        self.pairs.iter().find(|p| p.0 == a).map(|p| p.1)
    }

    /// `π⁻¹(b)`; self-paired elements map to themselves.
    pub fn partner_of_closer(&self, b: i64) -> Option<i64> {
        if self.self_paired.contains(&b) {
            return Some(b);
        }
        self.pairs.iter().find(|p| p.1 == b).map(|p| p.0)
    }

    /// All pairs including self pairs, as an opener → closer map.
    pub fn partner_map(&self) -> BTreeMap<i64, i64> {
        self.pairs.iter().copied().chain(self.self_paired.iter().map(|&x| (x, x))).collect()
    }

    pub fn paired_openers(&self) -> PosSet {
        self.pairs.iter().map(|p| p.0).collect()
    }

    pub fn paired_closers(&self) -> PosSet {
        self.pairs.iter().map(|p| p.1).collect()
    }
}

pub fn match_pairs(openers: &PosSet, closers: &PosSet) -> Matching {
    let self_paired: PosSet = openers.intersection(closers).copied().collect();
    let mut events: Vec<(i64, bool)> = openers
        .difference(&self_paired)
        .map(|&x| (x, true))
        .chain(closers.difference(&self_paired).map(|&x| (x, false)))
        .collect();
    events.sort_unstable();
    let mut stack = Vec::new();
    let mut m = Matching { self_paired, ..Matching::default() };
    for (x, is_opener) in events {
        if is_opener {
            stack.push(x);
        } else if let Some(a) = stack.pop() {
            m.pairs.push((a, x));
        } else {
            m.unpaired_closers.insert(x);
        }
    }
    m.unpaired_openers = stack.into_iter().collect();
    m.pairs.sort_unstable();
    m
}

/// `A ↠ B`: every closer is paired.
pub fn onto(openers: &PosSet, closers: &PosSet) -> bool {
    match_pairs(openers, closers).unpaired_closers.is_empty()
}

/// `A ↔ B`: the matching is perfect.
pub fn bijective(openers: &PosSet, closers: &PosSet) -> bool {
    let m = match_pairs(openers, closers);
    m.unpaired_closers.is_empty() && m.unpaired_openers.is_empty()
}

/// `V(T)`: minus positions whose suffix is a Dyck path.
pub fn valley_set(t: &SignSequence) -> PosSet {
    t.minus()
        .iter()
        .copied()
        .filter(|&v| {
            let s = t.above(v);
            onto(s.plus(), s.minus())
        })
        .collect()
}

/// `U⁺(T)`: up-strokes of `Γ(T)` left unmatched.
pub fn unpaired_plus(t: &SignSequence) -> PosSet {
    match_pairs(t.plus(), t.minus()).unpaired_openers
}

/// `P⁺(T) = T⁺ ∖ U⁺(T)`.
pub fn paired_plus(t: &SignSequence) -> PosSet {
    match_pairs(t.plus(), t.minus()).paired_openers()
}

/// `(A, B) ≼ (C, D)`.
pub fn preceq(a: &PosSet, b: &PosSet, c: &PosSet, d: &PosSet) -> bool {
    if a.len() as i64 - b.len() as i64 != c.len() as i64 - d.len() as i64 {
        return false;
    }
    let bc: PosSet = b.union(c).copied().collect();
    let ad: PosSet = a.union(d).copied().collect();
    onto(&bc, &ad)
}

pub fn set(xs: &[i64]) -> PosSet {
    xs.iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    fn paper_t() -> SignSequence {
        SignSequence::from_slices(&[2, 3, 5, 9], &[1, 4, 6, 7, 8]).unwrap()
    }

    #[test]
    fn match_examples() {
        let m = match_pairs(&set(&[2, 3, 10]), &set(&[5, 6, 8]));
        assert_eq!(m.pairs, vec![(2, 6), (3, 5)]);
        assert_eq!(m.unpaired_openers, set(&[10]));
        assert_eq!(m.unpaired_closers, set(&[8]));
        assert_eq!(m.partner_of_opener(2), Some(6));
        assert_eq!(m.partner_of_opener(3), Some(5));

        let m = match_pairs(&set(&[1]), &set(&[1]));
        assert!(m.pairs.is_empty());
        assert_eq!(m.self_paired, set(&[1]));
        assert_eq!(m.partner_of_opener(1), Some(1));

        let m = match_pairs(&set(&[1, 2]), &set(&[4, 6]));
        assert_eq!(m.pairs, vec![(1, 6), (2, 4)]);
    }

    #[test]
    fn onto_and_bijective_examples() {
        assert!(!onto(&set(&[2, 3, 10]), &set(&[5, 6, 8])));
        assert!(onto(&set(&[]), &set(&[])));
        assert!(onto(&set(&[1]), &set(&[2])));
        assert!(bijective(&set(&[1, 2]), &set(&[4, 6])));
        assert!(!bijective(&set(&[2, 3, 10]), &set(&[5, 6, 8])));
        assert!(bijective(&set(&[]), &set(&[])));
    }

    #[test]
    fn valley_and_unpaired_examples() {
        assert_eq!(valley_set(&paper_t()), set(&[8]));
        assert!(valley_set(&SignSequence::from_slices(&[1], &[]).unwrap()).is_empty());
        assert_eq!(valley_set(&SignSequence::from_slices(&[2], &[1]).unwrap()), set(&[1]));

        assert_eq!(unpaired_plus(&paper_t()), set(&[9]));
        assert_eq!(paired_plus(&paper_t()), set(&[2, 3, 5]));
        assert_eq!(unpaired_plus(&SignSequence::from_slices(&[2], &[1]).unwrap()), set(&[2]));
        assert!(unpaired_plus(&SignSequence::from_slices(&[], &[1]).unwrap()).is_empty());
    }

    #[test]
    fn subsequence_examples() {
        let t = SignSequence::from_slices(&[2], &[1]).unwrap();
        assert!(t.subsequence(Bound::Excluded(1), Bound::Excluded(2)).is_empty());
        assert_eq!(
            t.subsequence(Bound::Excluded(1), Bound::Included(2)),
            SignSequence::from_slices(&[2], &[]).unwrap()
        );
        assert_eq!(paper_t().above(7), SignSequence::from_slices(&[9], &[8]).unwrap());
    }

    #[test]
    fn preceq_examples() {
        let (a, b) = (set(&[3]), set(&[1, 2]));
        assert!(preceq(&a, &b, &a, &b));
        assert!(preceq(&set(&[1]), &set(&[]), &set(&[1]), &set(&[])));
        let x4 = set(&[4]);
        let x6 = set(&[6]);
        let e = set(&[]);
        assert_ne!(preceq(&x4, &e, &x6, &e), preceq(&x6, &e, &x4, &e));
    }

    #[test]
    fn sign_sequence_basics() {
        assert!(SignSequence::from_slices(&[1], &[1]).is_err());
        let t = paper_t();
        assert_eq!(t.size(), -1);
        assert_eq!(t.len(), 9);
        assert_eq!(t.to_string(), "1- 2+ 3+ 4- 5+ 6- 7- 8- 9+");
        assert_eq!(t.raise(8).unwrap().plus(), &set(&[2, 3, 5, 8, 9]));
        assert!(t.raise(9).is_err());
        assert_eq!(t.height_after(3), 1);
    }

    fn arb_sets() -> impl Strategy<Value = (PosSet, PosSet)> {
        proptest::collection::vec(0u8..4, 0..14).prop_map(|v| {
            let mut a = PosSet::new();
            let mut b = PosSet::new();
            for (i, x) in v.into_iter().enumerate() {
                let i = i as i64;
                match x {
                    1 => {
                        a.insert(i);
                    }
                    2 => {
                        b.insert(i);
                    }
                    3 => {
                        a.insert(i);
                        b.insert(i);
                    }
                    _ => {}
                }
            }
            (a, b)
        })
    }

    proptest! {
        #[test]
        fn matching_is_a_non_crossing_partition((a, b) in arb_sets()) {
            let m = match_pairs(&a, &b);
            for &(x, y) in &m.pairs {
                prop_assert!(x < y && a.contains(&x) && b.contains(&y));
            }
            for &(x, y) in &m.pairs {
                for &(u, w) in &m.pairs {
                    let crossing = x < u && u < y && y < w;
                    prop_assert!(!crossing);
                }
            }
            let mut all: Vec<i64> = m.pairs.iter().flat_map(|p| [p.0, p.1]).collect();
            all.extend(m.unpaired_openers.iter());
            all.extend(m.unpaired_closers.iter());
            all.extend(m.self_paired.iter());
            all.extend(m.self_paired.iter());
            all.sort_unstable();
            let mut expect: Vec<i64> = a.iter().chain(b.iter()).copied().collect();
            expect.sort_unstable();
            prop_assert_eq!(all, expect);
        }

        #[test]
        fn onto_is_the_prefix_condition((a, b) in arb_sets()) {
            let prefix = (0..16).all(|n| a.range(..=n).count() >= b.range(..=n).count());
            prop_assert_eq!(onto(&a, &b), prefix);
            if bijective(&a, &b) {
                prop_assert_eq!(a.len(), b.len());
            }
        }
    }
}
