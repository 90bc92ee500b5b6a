//! The index sets `ℒ_A^B(T)` and `ℛ_A^B(T)` of the two sides of the
//! consistency identity, and a recursive norm-preserving bijection between
//! them.
//!
//! Every piece of the recursion is built as an explicit table over its whole
//! domain and checked against the enumerated target set, so a construction
//! that is not a bijection is reported rather than returned.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::closedform::{left_indices, right_indices};
use crate::error::Result;
use crate::latticepath::{enumerate_wellnested, LatticedPath, Step, WellNestedCollection};
use crate::signseq::{match_pairs, onto, paired_plus, unpaired_plus, valley_set, PosSet, SignSequence};

/// `(c, ω)` with `ω ∈ Ω(T_A^{B∪{c}})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LElement {
    pub c: i64,
    pub omega: WellNestedCollection,
    pub norm: i64,
}

/// `(d, d', ϖ)` with `ϖ ∈ Ω((T↑d)_A^{B∪{d}})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RElement {
    pub d: i64,
    pub dprime: i64,
    pub varpi: WellNestedCollection,
    pub norm: i64,
}

pub fn enumerate_l(t: &SignSequence, a: &PosSet, b: &PosSet) -> Result<Vec<LElement>> {
    let mut out = Vec::new();
    for (c, shift) in left_indices(t, a, b)? {
        for omega in enumerate_wellnested(t, a, &with(b, c))? {
            let norm = shift + omega.norm();
            out.push(LElement { c, omega, norm });
        }
    }
    Ok(out)
}

pub fn enumerate_r(t: &SignSequence, a: &PosSet, b: &PosSet) -> Result<Vec<RElement>> {
    let mut out = Vec::new();
    for (d, dprime, shift) in right_indices(t, a, b)? {
        for varpi in enumerate_wellnested(&t.raise(d)?, a, &with(b, d))? {
            let norm = shift + varpi.norm();
            out.push(RElement { d, dprime, varpi, norm });
        }
    }
    Ok(out)
}

fn sorted_norms<I: Iterator<Item = i64>>(it: I) -> Vec<i64> {
    let mut v: Vec<i64> = it.collect();
    v.sort_unstable();
    v
}

/// Sorted norms of `ℒ` and `ℛ`.
pub fn norm_multisets(t: &SignSequence, a: &PosSet, b: &PosSet) -> Result<(Vec<i64>, Vec<i64>)> {
    let l = sorted_norms(enumerate_l(t, a, b)?.iter().map(|x| x.norm));
    let r = sorted_norms(enumerate_r(t, a, b)?.iter().map(|x| x.norm));
    Ok((l, r))
}

pub fn verify_norm_multisets(t: &SignSequence, a: &PosSet, b: &PosSet) -> Result<bool> {
    let (l, r) = norm_multisets(t, a, b)?;
    Ok(l == r)
}

/// Which step of the construction broke.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FailureKind {
    /// Inadmissible input.
    Precondition,
    /// Base case: a descending path still has an up-stroke.
    BaseDescendingPath,
    /// Base case: an image is missing from `ℛ` or collides.
    BaseCase,
    /// Forced-pair case: `a₀` is not matched with `b₀` on the right.
    Case2Partner,
    /// Forced-pair case: a reduction is not a bijection.
    Case2,
    /// Minimal-pair case with no positions strictly between `b₁` and `b₀`:
    /// the single reduction is not onto.
    Case3EmptyInterior,
    /// Minimal-pair case: a reduction is not a bijection.
    Case3,
    /// The composed map is not a norm-preserving bijection.
    Composition,
}

impl FailureKind {
    /// Corners of the construction whose validity is only checked at runtime.
    pub fn is_documented_corner(self) -> bool {
        matches!(
            self,
            FailureKind::BaseDescendingPath | FailureKind::Case2Partner | FailureKind::Case3EmptyInterior
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BijectionError {
    pub kind: FailureKind,
    pub t: SignSequence,
    pub a: PosSet,
    pub b: PosSet,
    pub detail: String,
}

impl fmt::Display for BijectionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} at T = [{}], A = {:?}, B = {:?}: {}", self.kind, self.t, self.a, self.b, self.detail)
    }
}

pub type BijectionMap = BTreeMap<LElement, RElement>;

type BResult<T> = core::result::Result<T, Box<BijectionError>>;

struct Ctx<'a> {
    t: &'a SignSequence,
    a: &'a PosSet,
    b: &'a PosSet,
}

impl Ctx<'_> {
    fn fail(&self, kind: FailureKind, detail: String) -> Box<BijectionError> {
        Box::new(BijectionError { kind, t: self.t.clone(), a: self.a.clone(), b: self.b.clone(), detail })
    }

    fn lift<T>(&self, kind: FailureKind, r: Result<T>) -> BResult<T> {
        r.map_err(|e| self.fail(kind, format!("{e}")))
    }
}

fn with(s: &PosSet, x: i64) -> PosSet {
    let mut s = s.clone();
    s.insert(x);
    s
}

fn without(s: &PosSet, x: i64) -> PosSet {
    let mut s = s.clone();
    s.remove(&x);
    s
}

fn l_element(t: &SignSequence, a: &PosSet, b: &PosSet, c: i64, paths: BTreeMap<i64, LatticedPath>) -> LElement {
    let shift = 2 * (b.range(c + 1..).count() as i64 - a.range(c + 1..).count() as i64) - t.above(c).size();
    let omega = WellNestedCollection { pairs: match_pairs(a, &with(b, c)).partner_map(), paths };
    let norm = shift + omega.norm();
    LElement { c, omega, norm }
}

fn r_element(t: &SignSequence, a: &PosSet, b: &PosSet, d: i64, dprime: i64, paths: BTreeMap<i64, LatticedPath>) -> RElement {
    let mid = t.subsequence(core::ops::Bound::Excluded(d), core::ops::Bound::Included(dprime)).size();
    let shift = 2 * mid - t.above(d).size();
    let varpi = WellNestedCollection { pairs: match_pairs(a, &with(b, d)).partner_map(), paths };
    let norm = shift + varpi.norm();
    RElement { d, dprime, varpi, norm }
}

/// Path over `window` with the given steps, or the empty path when `x == y`.
fn path_over(ctx: &Ctx, kind: FailureKind, s: &SignSequence, x: i64, y: i64, steps: &[(i64, Step)]) -> BResult<LatticedPath> {
    if x == y {
        if !steps.is_empty() {
            return Err(ctx.fail(kind, format!("steps {steps:?} on the empty window at {x}")));
        }
        return Ok(LatticedPath::degenerate());
    }
    ctx.lift(kind, LatticedPath::from_steps(s.between(x, y), steps))
}

fn generic_steps_between(s: &SignSequence, x: i64, y: i64) -> Vec<(i64, Step)> {
    LatticedPath::generic(s.between(x, y)).steps()
}

/// Descending path of `T_x^y`: all matched pairs flattened, no up-stroke left.
fn descending_steps(ctx: &Ctx, x: i64, y: i64) -> BResult<Vec<(i64, Step)>> {
    let steps = LatticedPath::descending(ctx.t.between(x, y)).steps();
    if steps.iter().any(|s| s.1 == Step::Up) {
        return Err(ctx.fail(
            FailureKind::BaseDescendingPath,
            format!("descending path of ({x}, {y}) keeps an up-stroke"),
        ));
    }
    Ok(steps)
}

fn insert_flats(steps: &[(i64, Step)], xs: &[i64]) -> Vec<(i64, Step)> {
    let mut v: Vec<(i64, Step)> = steps.to_vec();
    v.extend(xs.iter().map(|&x| (x, Step::Flat)));
    v.sort_unstable();
    v
}

/// Images must land in `target`, be distinct, and cover it.
fn check_bijective<V: Ord + fmt::Debug>(
    ctx: &Ctx,
    kind: FailureKind,
    what: &str,
    images: impl Iterator<Item = V>,
    target: &BTreeSet<V>,
) -> BResult<()> {
    let mut seen = BTreeSet::new();
    for v in images {
        if !target.contains(&v) {
            return Err(ctx.fail(kind, format!("{what}: image {v:?} is outside the target set")));
        }
        if !seen.insert(v) {
            return Err(ctx.fail(kind, format!("{what}: two elements share an image")));
        }
    }
    if seen.len() != target.len() {
        return Err(ctx.fail(kind, format!("{what}: {} of {} targets reached", seen.len(), target.len())));
    }
    Ok(())
}

/// A norm-preserving bijection `ℒ_A^B(T) → ℛ_A^B(T)`.
pub fn bijection_map(t: &SignSequence, a: &PosSet, b: &PosSet) -> BResult<BijectionMap> {
    let ctx = Ctx { t, a, b };
    if !a.is_subset(t.minus()) || !b.is_subset(t.plus()) || a.len() != b.len() + 1 || !onto(a, b) {
        return Err(ctx.fail(FailureKind::Precondition, "need A ⊆ T⁻, B ⊆ T⁺, |A| = |B| + 1, A ↠ B".into()));
    }
    build(&ctx)
}

fn build(ctx: &Ctx) -> BResult<BijectionMap> {
    let ls: BTreeSet<LElement> = ctx.lift(FailureKind::Precondition, enumerate_l(ctx.t, ctx.a, ctx.b))?.into_iter().collect();
    let rs: BTreeSet<RElement> = ctx.lift(FailureKind::Precondition, enumerate_r(ctx.t, ctx.a, ctx.b))?.into_iter().collect();
    let map = if ctx.b.is_empty() {
        base_case(ctx, &ls, &rs)?
    } else if let Some((a0, b0)) = forced_pair(ctx) {
        forced_pair_case(ctx, &ls, &rs, a0, b0)?
    } else {
        minimal_pair_case(ctx, &ls, &rs)?
    };
    if map.len() != ls.len() {
        return Err(ctx.fail(FailureKind::Composition, "map is not total".into()));
    }
    if let Some((l, r)) = map.iter().find(|(l, r)| l.norm != r.norm) {
        return Err(ctx.fail(FailureKind::Composition, format!("norm {} maps to norm {}", l.norm, r.norm)));
    }
    check_bijective(ctx, FailureKind::Composition, "composition", map.values().cloned(), &rs)?;
    Ok(map)
}

fn base_case(ctx: &Ctx, ls: &BTreeSet<LElement>, rs: &BTreeSet<RElement>) -> BResult<BijectionMap> {
    let t = ctx.t;
    let a0 = *ctx.a.iter().next().expect("|A| = 1");
    let valleys = valley_set(t);
    let paired = paired_plus(t);
    let unpaired = unpaired_plus(t);
    let kind = FailureKind::BaseCase;
    let min_valley_above = |x: i64| {
        valleys
            .range(x + 1..)
            .next()
            .copied()
            .ok_or_else(|| ctx.fail(kind, format!("no valley above {x}")))
    };
    let mut map = BijectionMap::new();
    for l in ls {
        let c = l.c;
        let (d, dprime, path) = if c == a0 {
            if valleys.contains(&a0) {
                (a0, a0, LatticedPath::degenerate())
            } else {
                let d = min_valley_above(a0)?;
                let steps = descending_steps(ctx, a0, d)?;
                (d, d, path_over(ctx, kind, t, a0, d, &steps)?)
            }
        } else {
            let gamma = l.omega.paths[&a0].steps();
            if paired.contains(&c) {
                let d = min_valley_above(c)?;
                let mut steps = gamma;
                steps.push((c, Step::Up));
                steps.extend(descending_steps(ctx, c, d)?);
                (d, d, path_over(ctx, kind, t, a0, d, &steps)?)
            } else if unpaired.contains(&c) {
                // Cut at the last down-stroke of γ.
                let d = gamma.iter().rev().find(|s| s.1 == Step::Down).map_or(a0, |s| s.0);
                let steps: Vec<(i64, Step)> = gamma.into_iter().filter(|s| s.0 < d).collect();
                (d, c, path_over(ctx, kind, t, a0, d, &steps)?)
            } else {
                return Err(ctx.fail(kind, format!("c = {c} is neither a nor a + position")));
            }
        };
        let r = r_element(t, ctx.a, ctx.b, d, dprime, BTreeMap::from([(a0, path)]));
        map.insert(l.clone(), r);
    }
    check_bijective(ctx, kind, "base map", map.values().cloned(), rs)?;
    Ok(map)
}

/// `(a₀, b₀)` with no `+` strictly between and no element of `A` between.
fn forced_pair(ctx: &Ctx) -> Option<(i64, i64)> {
    ctx.b.iter().find_map(|&b0| {
        let a0 = *ctx.a.range(..b0).next_back()?;
        ctx.t.plus().range(a0 + 1..b0).next().is_none().then_some((a0, b0))
    })
}

fn forced_pair_case(ctx: &Ctx, ls: &BTreeSet<LElement>, rs: &BTreeSet<RElement>, a0: i64, b0: i64) -> BResult<BijectionMap> {
    let t = ctx.t;
    let kind = FailureKind::Case2;
    let a1 = without(ctx.a, a0);
    let b1 = without(ctx.b, b0);
    let sub_ctx = Ctx { t, a: &a1, b: &b1 };
    let sub = build(&sub_ctx)?;
    let ls1: BTreeSet<LElement> = sub.keys().cloned().collect();
    let rs1: BTreeSet<RElement> = sub.values().cloned().collect();

    let mut phi = BTreeMap::new();
    for l in ls {
        let mut paths = l.omega.paths.clone();
        paths.remove(&a0);
        let c = if l.c == a0 { b0 } else { l.c };
        phi.insert(l.clone(), l_element(t, &a1, &b1, c, paths));
    }
    check_bijective(ctx, kind, "φ", phi.values().cloned(), &ls1)?;

    // The position just before b₀ is the only valley that can split (a₀, b₀).
    let before_b0 = t.subsequence(core::ops::Bound::Unbounded, core::ops::Bound::Excluded(b0)).signed_positions().last().map(|p| p.0);
    let mut psi_inv = BTreeMap::new();
    for r in rs {
        let d = r.d;
        let pairing = match_pairs(ctx.a, &with(ctx.b, d));
        let mut paths = r.varpi.paths.clone();
        paths.remove(&a0);
        if pairing.partner_of_opener(a0) != Some(b0) {
            if Some(d) != before_b0 || d < a0 {
                return Err(ctx.fail(
                    FailureKind::Case2Partner,
                    format!("a₀ = {a0} is matched with {:?} for d = {d}", pairing.partner_of_opener(a0)),
                ));
            }
            let astar = pairing.partner_of_closer(b0).expect("b₀ is matched");
            let td = ctx.lift(kind, t.raise(d))?;
            let steps: Vec<(i64, Step)> = paths[&astar].steps().into_iter().filter(|s| s.0 < d).collect();
            let cut = path_over(ctx, kind, &td, astar, d, &steps)?;
            paths.insert(astar, cut);
        }
        let image = r_element(t, &a1, &b1, d, r.dprime, paths);
        if psi_inv.insert(image, r.clone()).is_some() {
            return Err(ctx.fail(kind, "ψ: two elements share an image".into()));
        }
    }
    check_bijective(ctx, kind, "ψ", psi_inv.keys().cloned(), &rs1)?;

    Ok(phi.into_iter().map(|(l, l1)| (l, psi_inv[&sub[&l1]].clone())).collect())
}

enum Source {
    Tilde(LElement),
    Reduced(LElement),
}

fn minimal_pair_case(ctx: &Ctx, ls: &BTreeSet<LElement>, rs: &BTreeSet<RElement>) -> BResult<BijectionMap> {
    let t = ctx.t;
    let (a, b) = (ctx.a, ctx.b);
    // For each b, the nearest a below it has the fewest + in between.
    let (b0, a0) = b
        .iter()
        .filter_map(|&bb| a.range(..bb).next_back().map(|&aa| (t.plus().range(aa + 1..bb).count(), bb, aa)))
        .min()
        .map(|(_, bb, aa)| (bb, aa))
        .ok_or_else(|| ctx.fail(FailureKind::Case3, "no pair a < b".into()))?;
    let b1 = *t.plus().range(a0 + 1..b0).next_back().ok_or_else(|| ctx.fail(FailureKind::Case3, "no + between a₀ and b₀".into()))?;
    let interior: Vec<i64> = t.between(b1, b0).signed_positions().into_iter().map(|p| p.0).collect();
    let empty_interior = interior.is_empty();
    let kind = if empty_interior { FailureKind::Case3EmptyInterior } else { FailureKind::Case3 };
    let btilde = with(&without(b, b0), b1);
    if !onto(a, &btilde) {
        return Err(ctx.fail(FailureKind::Case3, format!("A does not cover B̃ = {btilde:?}")));
    }

    let tilde_ctx = Ctx { t, a, b: &btilde };
    let sub_tilde = build(&tilde_ctx)?;
    let reduced = match interior.first() {
        Some(&a2) => {
            let mut plus = t.plus().clone();
            plus.remove(&b1);
            let mut minus = t.minus().clone();
            minus.remove(&a2);
            let t2 = SignSequence::new(plus, minus).expect("disjoint");
            Some((a2, t2))
        }
        None => None,
    };
    let sub_reduced = match &reduced {
        Some((_, t2)) => Some(build(&Ctx { t: t2, a, b })?),
        None => None,
    };

    // φ₁ ⊔ φ₂, stored inverted.
    let mut phi_inv: BTreeMap<LElement, Source> = BTreeMap::new();
    for l in sub_tilde.keys() {
        let image = if l.c == b0 {
            l_element(t, a, b, b1, l.omega.paths.clone())
        } else {
            let a1 = match_pairs(a, &with(&btilde, l.c)).partner_of_closer(b1).expect("b₁ is matched");
            let mut steps = l.omega.paths[&a1].steps();
            steps.push((b1, Step::Up));
            steps.extend(generic_steps_between(t, b1, b0));
            let mut paths = l.omega.paths.clone();
            paths.insert(a1, path_over(ctx, kind, t, a1, b0, &steps)?);
            l_element(t, a, b, l.c, paths)
        };
        if phi_inv.insert(image, Source::Tilde(l.clone())).is_some() {
            return Err(ctx.fail(kind, "φ₁: two elements share an image".into()));
        }
    }
    if let (Some((a2, _)), Some(sub)) = (&reduced, &sub_reduced) {
        for l in sub.keys() {
            let pairing = match_pairs(a, &with(b, l.c)).partner_map();
            let mut paths = BTreeMap::new();
            for (&x, p) in &l.omega.paths {
                let y = pairing[&x];
                let steps = if x < b1 && b1 < y { insert_flats(&p.steps(), &[b1, *a2]) } else { p.steps() };
                paths.insert(x, path_over(ctx, kind, t, x, y, &steps)?);
            }
            let image = l_element(t, a, b, l.c, paths);
            if phi_inv.insert(image, Source::Reduced(l.clone())).is_some() {
                return Err(ctx.fail(kind, "φ₁ and φ₂ images overlap".into()));
            }
        }
    }
    check_bijective(ctx, kind, "φ₁ ⊔ φ₂", phi_inv.keys().cloned(), ls)?;

    let before_b0 = interior.last().copied();
    let mut psi1 = BTreeMap::new();
    for r in sub_tilde.values() {
        let d = r.d;
        let td = ctx.lift(kind, t.raise(d))?;
        let pairing = match_pairs(a, &with(&btilde, d));
        let mut paths = r.varpi.paths.clone();
        if Some(d) != before_b0 {
            let a1 = pairing.partner_of_closer(b1).expect("b₁ is matched");
            let mut steps = paths[&a1].steps();
            steps.push((b1, Step::Up));
            steps.extend(generic_steps_between(&td, b1, b0));
            paths.insert(a1, path_over(ctx, kind, &td, a1, b0, &steps)?);
        } else {
            if pairing.partner_of_opener(a0) != Some(b1) {
                return Err(ctx.fail(kind, format!("ψ₁: a₀ = {a0} is not matched with b₁ = {b1}")));
            }
            let ap = pairing.partner_of_closer(d).expect("d is matched");
            let mut steps = paths[&a0].steps();
            steps.push((b1, Step::Up));
            steps.extend(generic_steps_between(&td, b1, d));
            paths.insert(a0, path_over(ctx, kind, &td, a0, d, &steps)?);
            let mut steps = paths[&ap].steps();
            steps.push((d, Step::Up));
            steps.extend(generic_steps_between(&td, d, b0));
            paths.insert(ap, path_over(ctx, kind, &td, ap, b0, &steps)?);
        }
        psi1.insert(r.clone(), r_element(t, a, b, d, r.dprime, paths));
    }
    let mut psi2 = BTreeMap::new();
    if let (Some((a2, _)), Some(sub)) = (&reduced, &sub_reduced) {
        for r in sub.values() {
            let d = r.d;
            let td = ctx.lift(kind, t.raise(d))?;
            let pairing = match_pairs(a, &with(b, d)).partner_map();
            let mut paths = BTreeMap::new();
            for (&x, p) in &r.varpi.paths {
                let y = pairing[&x];
                let steps = if x < b1 && b1 < y { insert_flats(&p.steps(), &[b1, *a2]) } else { p.steps() };
                paths.insert(x, path_over(ctx, kind, &td, x, y, &steps)?);
            }
            psi2.insert(r.clone(), r_element(t, a, b, d, r.dprime, paths));
        }
    }
    check_bijective(ctx, kind, "ψ₁ ⊔ ψ₂", psi1.values().chain(psi2.values()).cloned(), rs)?;

    let mut map = BijectionMap::new();
    for (l, src) in phi_inv {
        let r = match src {
            Source::Tilde(x) => psi1[&sub_tilde[&x]].clone(),
            Source::Reduced(x) => {
                let sub = sub_reduced.as_ref().expect("reduced instance exists");
                psi2[&sub[&x]].clone()
            }
        };
        map.insert(l, r);
    }
    Ok(map)
}
