//! Closed formulas for same-residue moves `λ ↦ λ↑A↓B`: decomposition
//! polynomials as sums over well-nested latticed paths, branching
//! coefficients, and the two sides of the consistency identity.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;
use core::ops::Bound;

use crate::error::{check_e, check_residue, Error, Result};
use crate::laurent::{quantum_integer, LaurentPolynomial};
use crate::latticepath::enumerate_wellnested;
use crate::partition::{boundary_nodes, Node, Partition};
use crate::signseq::{bijective, onto, unpaired_plus, valley_set, PosSet, SignSequence};

/// A move `λ ↦ λ↑A↓B` at residue `r`; `A` and `B` are columns.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MoveSpec {
    pub lambda: Partition,
    pub e: usize,
    pub r: usize,
    pub a: PosSet,
    pub b: PosSet,
}

impl MoveSpec {
    pub fn new(lambda: Partition, e: usize, r: usize, a: PosSet, b: PosSet) -> Result<Self> {
        let m = MoveSpec { lambda, e, r, a, b };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        check_residue(self.e, self.r)?;
        let t = sign_sequence_of(&self.lambda, self.e, self.r)?;
        if let Some(x) = self.a.difference(&self.b).find(|x| !t.minus().contains(x)) {
            return Err(Error::Precondition(format!(
                "column {x} is not an indent {}-node of {}",
                self.r, self.lambda
            )));
        }
        if let Some(x) = self.b.difference(&self.a).find(|x| !t.plus().contains(x)) {
            return Err(Error::Precondition(format!(
                "column {x} is not a removable {}-node of {}",
                self.r, self.lambda
            )));
        }
        Ok(())
    }

    pub fn sign_sequence(&self) -> SignSequence {
        sign_sequence_of(&self.lambda, self.e, self.r).expect("validated residue")
    }

    /// Added and removed nodes of the net move `A∖B`, `B∖A`.
    pub fn nodes(&self) -> Result<(Vec<Node>, Vec<Node>)> {
        let (removable, indent) = boundary_nodes(&self.lambda, self.e, self.r)?;
        let added = indent.into_iter().filter(|n| self.a.contains(&(n.col as i64)) && !self.b.contains(&(n.col as i64)));
        let removed = removable.into_iter().filter(|n| self.b.contains(&(n.col as i64)) && !self.a.contains(&(n.col as i64)));
        Ok((added.collect(), removed.collect()))
    }

    /// `λ↑A↓B`.
    pub fn target(&self) -> Result<Partition> {
        let (added, removed) = self.nodes()?;
        let mut parts: Vec<usize> = self.lambda.parts().to_vec();
        for n in &added {
            if n.row > parts.len() {
                parts.push(0);
            }
            parts[n.row - 1] += 1;
        }
        for n in &removed {
            parts[n.row - 1] -= 1;
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition::new(parts)
    }

    pub fn is_empty(&self) -> bool {
        self.a.difference(&self.b).next().is_none() && self.b.difference(&self.a).next().is_none()
    }
}

/// `T_r(λ)`: removable `r`-nodes are `+`, indent `r`-nodes are `-`, by column.
pub fn sign_sequence_of(lambda: &Partition, e: usize, r: usize) -> Result<SignSequence> {
    let (removable, indent) = boundary_nodes(lambda, e, r)?;
    SignSequence::new(
        removable.iter().map(|n| n.col as i64).collect(),
        indent.iter().map(|n| n.col as i64).collect(),
    )
}

/// Recovers `(r, A, B)` with `ν = λ↑A↓B`, or `None` if no single residue works.
pub fn detect_move(lambda: &Partition, nu: &Partition, e: usize) -> Result<Option<MoveSpec>> {
    check_e(e)?;
    if lambda.size() != nu.size() {
        return Err(Error::SizeMismatch(lambda.size(), nu.size()));
    }
    let lam: BTreeSet<Node> = lambda.nodes().collect();
    let new: BTreeSet<Node> = nu.nodes().collect();
    let added: Vec<Node> = new.difference(&lam).copied().collect();
    let removed: Vec<Node> = lam.difference(&new).copied().collect();
    let Some(first) = added.first().or(removed.first()) else {
        return Ok(Some(MoveSpec { lambda: lambda.clone(), e, r: 0, a: PosSet::new(), b: PosSet::new() }));
    };
    let r = first.residue(e);
    let (removable, indent) = boundary_nodes(lambda, e, r)?;
    if !added.iter().all(|n| indent.contains(n)) || !removed.iter().all(|n| removable.contains(n)) {
        return Ok(None);
    }
    let a = added.iter().map(|n| n.col as i64).collect();
    let b = removed.iter().map(|n| n.col as i64).collect();
    Ok(Some(MoveSpec { lambda: lambda.clone(), e, r, a, b }))
}

/// `d_{λ↑A↓B, λ}(v) = Σ_{ω ∈ Ω(T_A^B)} v^{‖ω‖}`, zero unless `A ↔ B`.
pub fn v_decomposition(m: &MoveSpec) -> Result<LaurentPolynomial> {
    Ok(v_decomposition_with_count(m)?.0)
}

/// The polynomial together with `|Ω(T_A^B)|`.
pub fn v_decomposition_with_count(m: &MoveSpec) -> Result<(LaurentPolynomial, usize)> {
    m.validate()?;
    if !bijective(&m.a, &m.b) {
        return Ok((LaurentPolynomial::zero(), 0));
    }
    let omegas = enumerate_wellnested(&m.sign_sequence(), &m.a, &m.b)?;
    let poly = omegas.iter().map(|w| LaurentPolynomial::v_pow(w.norm())).sum();
    Ok((poly, omegas.len()))
}

/// `a_{λ↑A↓B, λ}(v)`: `[1 + |U⁺(T)^{>a}|]` for `A = {a} ⊆ V(T)`, `B = ∅`; else zero.
pub fn branching_coefficient(lambda: &Partition, e: usize, r: usize, a: &PosSet, b: &PosSet) -> Result<LaurentPolynomial> {
    let m = MoveSpec::new(lambda.clone(), e, r, a.clone(), b.clone())?;
    if a.len() != b.len() + 1 || !onto(a, b) {
        return Err(Error::Precondition(format!("need |A| = |B| + 1 and A ↠ B, got {a:?}, {b:?}")));
    }
    let t = m.sign_sequence();
    match (a.iter().next(), a.len(), b.is_empty()) {
        (Some(&x), 1, true) if valley_set(&t).contains(&x) => {
            let above = unpaired_plus(&t).range(x + 1..).count() as i64;
            quantum_integer(1 + above)
        }
        _ => Ok(LaurentPolynomial::zero()),
    }
}

fn check_consistency_input(t: &SignSequence, a: &PosSet, b: &PosSet) -> Result<()> {
    if !a.is_subset(t.minus()) || !b.is_subset(t.plus()) {
        return Err(Error::Precondition(format!("need A ⊆ T⁻ and B ⊆ T⁺ for T = {t}")));
    }
    if a.len() != b.len() + 1 || !onto(a, b) {
        return Err(Error::Precondition(format!("need |A| = |B| + 1 and A ↠ B, got {a:?}, {b:?}")));
    }
    Ok(())
}

/// Terms `(c, exponent shift)` of the left sum; each is paired with `Ω(T_A^{B∪{c}})`.
pub fn left_indices(t: &SignSequence, a: &PosSet, b: &PosSet) -> Result<Vec<(i64, i64)>> {
    check_consistency_input(t, a, b)?;
    let cs: PosSet = t.plus().union(a).filter(|c| !b.contains(c)).copied().collect();
    Ok(cs
        .into_iter()
        .filter_map(|c| {
            let mut bc = b.clone();
            bc.insert(c);
            onto(a, &bc).then(|| {
                let shift = 2 * (b.range(c + 1..).count() as i64 - a.range(c + 1..).count() as i64) - t.above(c).size();
                (c, shift)
            })
        })
        .collect())
}

/// Terms `(d, d', exponent shift)` of the right sum; each is paired with
/// `Ω((T↑d)_A^{B∪{d}})`.
pub fn right_indices(t: &SignSequence, a: &PosSet, b: &PosSet) -> Result<Vec<(i64, i64, i64)>> {
    check_consistency_input(t, a, b)?;
    let unpaired = unpaired_plus(t);
    let mut out = Vec::new();
    for d in valley_set(t) {
        let mut bd = b.clone();
        bd.insert(d);
        if !onto(a, &bd) {
            continue;
        }
        for dp in core::iter::once(d).chain(unpaired.range(d + 1..).copied()) {
            let mid = t.subsequence(Bound::Excluded(d), Bound::Included(dp)).size();
            out.push((d, dp, 2 * mid - t.above(d).size()));
        }
    }
    Ok(out)
}

/// Left and right sums of the consistency identity on an arbitrary sign sequence.
pub fn consistency_sums(t: &SignSequence, a: &PosSet, b: &PosSet) -> Result<(LaurentPolynomial, LaurentPolynomial)> {
    let mut left = LaurentPolynomial::zero();
    for (c, shift) in left_indices(t, a, b)? {
        let mut bc = b.clone();
        bc.insert(c);
        for w in enumerate_wellnested(t, a, &bc)? {
            left += &LaurentPolynomial::v_pow(shift + w.norm());
        }
    }
    let mut right = LaurentPolynomial::zero();
    for (d, _, shift) in right_indices(t, a, b)? {
        let mut bd = b.clone();
        bd.insert(d);
        for w in enumerate_wellnested(&t.raise(d)?, a, &bd)? {
            right += &LaurentPolynomial::v_pow(shift + w.norm());
        }
    }
    Ok((left, right))
}

/// Both sides of the consistency identity for `T = T_r(λ)`.
pub fn consistency_pair(lambda: &Partition, e: usize, r: usize, a: &PosSet, b: &PosSet) -> Result<(LaurentPolynomial, LaurentPolynomial)> {
    consistency_sums(&sign_sequence_of(lambda, e, r)?, a, b)
}

/// For a move touching no first-row node, the same move on `λ` without its
/// first row. `None` if a first-row node moves.
pub fn first_row_reduction(m: &MoveSpec) -> Result<Option<MoveSpec>> {
    let (added, removed) = m.nodes()?;
    if added.iter().chain(removed.iter()).any(|n| n.row == 1) || m.lambda.is_empty() {
        return Ok(None);
    }
    let target = m.target()?;
    let reduced = detect_move(&m.lambda.without_first_row(), &target.without_first_row(), m.e)?;
    match reduced {
        Some(mut x) => {
            if m.is_empty() {
                x.r = (m.r + 1) % m.e;
            }
            Ok(Some(x))
        }
        None => Err(Error::Invariant(format!("first-row reduction of {m:?} is not a move"))),
    }
}
