//! Verification sweeps behind `fockpath verify` and the acceptance suite.
//!
//! Each sweep returns a report listing every failing instance in full.

use std::collections::BTreeSet;

use fockpath_core::closedform::{first_row_reduction, v_decomposition, MoveSpec};
use fockpath_core::{
    bijection_map, bijective, branching_coefficient, consistency_pair, enumerate_l, enumerate_r,
    onto, partitions_of, sign_sequence_of, CanonicalBasis, LaurentPolynomial, Partition, PosSet,
    RElement, Sign, SignSequence,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cache::{compute_columns, warm, CacheError, OracleCache};
use crate::json::{partition_to_json, poly_to_json, set_to_json, sign_sequence_to_json};

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error(transparent)]
    Core(#[from] fockpath_core::Error),
}

#[derive(Debug, Clone, Default)]
pub struct SweepReport {
    pub checked: usize,
    /// Instances inside the sweep's headline scope (e.g. bijective pairs).
    pub headline: usize,
    pub failures: Vec<Value>,
}

impl SweepReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn merge(mut self, other: SweepReport) -> SweepReport {
        self.checked += other.checked;
        self.headline += other.headline;
        self.failures.extend(other.failures);
        self
    }
}

pub fn subsets(s: &PosSet) -> Vec<PosSet> {
    let v: Vec<i64> = s.iter().copied().collect();
    (0..1u64 << v.len())
        .map(|m| v.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &x)| x).collect())
        .collect()
}

/// All `(A, B)` with `A ⊆ T⁻`, `B ⊆ T⁺` and `|A| = |B| + extra`.
fn pairs(t: &SignSequence, extra: usize) -> Vec<(PosSet, PosSet)> {
    let bs = subsets(t.plus());
    let mut out = Vec::new();
    for a in subsets(t.minus()) {
        for b in &bs {
            if a.len() == b.len() + extra {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// `(A, B)` admissible for the consistency identity and the bijection.
pub fn admissible(t: &SignSequence) -> Vec<(PosSet, PosSet)> {
    pairs(t, 1).into_iter().filter(|(a, b)| onto(a, b)).collect()
}

fn move_json(lambda: &Partition, e: usize, r: usize, a: &PosSet, b: &PosSet) -> Value {
    json!({ "lambda": partition_to_json(lambda), "e": e, "r": r, "A": set_to_json(a), "B": set_to_json(b) })
}

fn regular(n: usize, e: usize) -> impl Iterator<Item = Partition> {
    partitions_of(n).into_iter().filter(move |l| l.is_e_regular(e))
}

/// Computes (or loads) every column of size `≤ max_n`.
pub fn prepared_basis(e: usize, max_n: usize, cache: Option<&OracleCache>) -> Result<CanonicalBasis, SweepError> {
    let mut cb = CanonicalBasis::new(e)?;
    warm(cache, &mut cb, max_n)?;
    for n in 0..=max_n {
        compute_columns(&mut cb, n)?;
    }
    Ok(cb)
}

/// Closed formula against the oracle for every same-size move of every
/// e-regular `λ` with `|λ| ≤ max_n`. `headline` counts the bijective moves.
pub fn formula_sweep(e: usize, max_n: usize, cache: Option<&OracleCache>) -> Result<SweepReport, SweepError> {
    let cb = prepared_basis(e, max_n, cache)?;
    let lambdas: Vec<Partition> = (0..=max_n).flat_map(|n| regular(n, e)).collect();
    let reports = lambdas.par_iter().map(|lambda| -> Result<SweepReport, SweepError> {
        let mut rep = SweepReport::default();
        let g = cb.cached(lambda).expect("prepared");
        for r in 0..e {
            let t = sign_sequence_of(lambda, e, r)?;
            for (a, b) in pairs(&t, 0) {
                let m = MoveSpec::new(lambda.clone(), e, r, a.clone(), b.clone())?;
                let formula = v_decomposition(&m)?;
                let oracle = g.coeff(&m.target()?);
                rep.checked += 1;
                rep.headline += bijective(&a, &b) as usize;
                if formula != oracle {
                    let mut f = move_json(lambda, e, r, &a, &b);
                    f["formula"] = poly_to_json(&formula);
                    f["oracle"] = poly_to_json(&oracle);
                    rep.failures.push(f);
                }
            }
        }
        Ok(rep)
    });
    reports.try_reduce(SweepReport::default, |x, y| Ok(x.merge(y)))
}

/// The branching formula against `f_r G(λ)` re-expanded in canonical basis
/// vectors. Only e-regular targets have a coefficient to compare; `headline`
/// counts those.
pub fn branching_sweep(e: usize, max_n: usize, cache: Option<&OracleCache>) -> Result<SweepReport, SweepError> {
    let cb = prepared_basis(e, max_n + 1, cache)?;
    let lambdas: Vec<Partition> = (0..=max_n).flat_map(|n| regular(n, e)).collect();
    let reports = lambdas.par_iter().map(|lambda| -> Result<SweepReport, SweepError> {
        let mut cb = cb.clone();
        let mut rep = SweepReport::default();
        for r in 0..e {
            let t = sign_sequence_of(lambda, e, r)?;
            let expansion = cb.branching(lambda, r)?;
            for (a, b) in admissible(&t) {
                let m = MoveSpec::new(lambda.clone(), e, r, a.clone(), b.clone())?;
                let tau = m.target()?;
                let formula = branching_coefficient(lambda, e, r, &a, &b)?;
                rep.checked += 1;
                if !tau.is_e_regular(e) {
                    continue;
                }
                rep.headline += 1;
                let oracle = expansion.get(&tau).cloned().unwrap_or_else(LaurentPolynomial::zero);
                if formula != oracle {
                    let mut f = move_json(lambda, e, r, &a, &b);
                    f["formula"] = poly_to_json(&formula);
                    f["oracle"] = poly_to_json(&oracle);
                    rep.failures.push(f);
                }
            }
        }
        Ok(rep)
    });
    reports.try_reduce(SweepReport::default, |x, y| Ok(x.merge(y)))
}

/// Shape of the closed formula: nonzero off-diagonal values lie in `vN₀[v]`,
/// the diagonal is 1, and deleting an untouched first row changes nothing.
/// `headline` counts first-row reductions compared.
pub fn shape_sweep(e: usize, max_n: usize) -> Result<SweepReport, SweepError> {
    let lambdas: Vec<Partition> = (0..=max_n).flat_map(|n| regular(n, e)).collect();
    let reports = lambdas.par_iter().map(|lambda| -> Result<SweepReport, SweepError> {
        let mut rep = SweepReport::default();
        for r in 0..e {
            let t = sign_sequence_of(lambda, e, r)?;
            for (a, b) in pairs(&t, 0) {
                let m = MoveSpec::new(lambda.clone(), e, r, a.clone(), b.clone())?;
                let d = v_decomposition(&m)?;
                rep.checked += 1;
                let mut fail = |why: &str, extra: Value| {
                    let mut f = move_json(lambda, e, r, &a, &b);
                    f["violation"] = json!(why);
                    f["poly"] = poly_to_json(&d);
                    f["detail"] = extra;
                    rep.failures.push(f);
                };
                if m.is_empty() && !d.is_one() {
                    fail("diagonal is not 1", Value::Null);
                }
                if !m.is_empty() && !d.is_zero() && !d.in_v_n0_v() {
                    fail("not in vN0[v]", Value::Null);
                }
                if let Some(reduced) = first_row_reduction(&m)? {
                    let d2 = v_decomposition(&reduced)?;
                    if d2 != d {
                        fail("first-row removal changes the value", poly_to_json(&d2));
                    }
                    rep.headline += 1;
                }
            }
        }
        Ok(rep)
    });
    reports.try_reduce(SweepReport::default, |x, y| Ok(x.merge(y)))
}

/// Left and right sums of the consistency identity for every partition
/// (regular or not) with `|λ| ≤ max_n`, also against the norm generating
/// functions of the index sets `ℒ` and `ℛ`.
pub fn consistency_sweep(e: usize, max_n: usize) -> Result<SweepReport, SweepError> {
    let lambdas: Vec<Partition> = (0..=max_n).flat_map(partitions_of).collect();
    let reports = lambdas.par_iter().map(|lambda| -> Result<SweepReport, SweepError> {
        let mut rep = SweepReport::default();
        for r in 0..e {
            let t = sign_sequence_of(lambda, e, r)?;
            for (a, b) in admissible(&t) {
                let (left, right) = consistency_pair(lambda, e, r, &a, &b)?;
                let gl: LaurentPolynomial = enumerate_l(&t, &a, &b)?.iter().map(|x| LaurentPolynomial::v_pow(x.norm)).sum();
                let gr: LaurentPolynomial = enumerate_r(&t, &a, &b)?.iter().map(|x| LaurentPolynomial::v_pow(x.norm)).sum();
                rep.checked += 1;
                rep.headline += !lambda.is_e_regular(e) as usize;
                if left != right || gl != left || gr != right {
                    let mut f = move_json(lambda, e, r, &a, &b);
                    f["left"] = poly_to_json(&left);
                    f["right"] = poly_to_json(&right);
                    f["sumL"] = poly_to_json(&gl);
                    f["sumR"] = poly_to_json(&gr);
                    rep.failures.push(f);
                }
            }
        }
        Ok(rep)
    });
    reports.try_reduce(SweepReport::default, |x, y| Ok(x.merge(y)))
}

/// One `(T, A, B)` of the bijection sweep.
#[derive(Debug, Clone)]
pub struct BijectionRecord {
    pub t: SignSequence,
    pub a: PosSet,
    pub b: PosSet,
    pub sampled: bool,
    pub norms_l: Vec<i64>,
    pub norms_r: Vec<i64>,
    /// `None` when the constructed map checked out.
    pub construction: Option<ConstructionFailure>,
}

#[derive(Debug, Clone)]
pub struct ConstructionFailure {
    pub kind: String,
    pub documented_corner: bool,
    pub detail: String,
}

impl BijectionRecord {
    pub fn multiset_ok(&self) -> bool {
        self.norms_l == self.norms_r
    }

    /// A failure of the construction is acceptable only if the multisets
    /// disagree too or it sits in a documented corner.
    pub fn construction_explained(&self) -> bool {
        match &self.construction {
            None => true,
            Some(f) => !self.multiset_ok() || f.documented_corner,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "T": sign_sequence_to_json(&self.t),
            "A": set_to_json(&self.a),
            "B": set_to_json(&self.b),
            "ok": self.multiset_ok(),
            "normsL": self.norms_l,
            "normsR": self.norms_r,
        });
        if let Some(f) = &self.construction {
            v["construction"] = json!({ "kind": f.kind, "documented": f.documented_corner, "detail": f.detail });
        }
        v
    }
}

#[derive(Debug, Clone, Default)]
pub struct BijectionReport {
    pub records: Vec<BijectionRecord>,
}

impl BijectionReport {
    pub fn exhaustive(&self) -> usize {
        self.records.iter().filter(|r| !r.sampled).count()
    }

    pub fn sampled(&self) -> usize {
        self.records.iter().filter(|r| r.sampled).count()
    }

    pub fn multiset_failures(&self) -> impl Iterator<Item = &BijectionRecord> {
        self.records.iter().filter(|r| !r.multiset_ok())
    }

    pub fn construction_failures(&self) -> impl Iterator<Item = &BijectionRecord> {
        self.records.iter().filter(|r| r.construction.is_some())
    }

    pub fn ok(&self) -> bool {
        self.multiset_failures().next().is_none() && self.records.iter().all(BijectionRecord::construction_explained)
    }
}

pub fn word(n: usize, mask: u64) -> SignSequence {
    let signs: Vec<Sign> = (0..n).map(|i| if mask >> i & 1 == 1 { Sign::Plus } else { Sign::Minus }).collect();
    SignSequence::from_signs(&signs)
}

/// Independent check of a constructed map: total on `ℒ`, onto `ℛ`, injective
/// and norm-preserving.
fn check_map(t: &SignSequence, a: &PosSet, b: &PosSet) -> Result<(), ConstructionFailure> {
    let map = bijection_map(t, a, b).map_err(|e| ConstructionFailure {
        kind: format!("{:?}", e.kind),
        documented_corner: e.kind.is_documented_corner(),
        detail: e.to_string(),
    })?;
    let fail = |detail: &str| ConstructionFailure { kind: "Verification".into(), documented_corner: false, detail: detail.into() };
    let ls = enumerate_l(t, a, b).map_err(|e| fail(&e.to_string()))?;
    let rs: BTreeSet<RElement> = enumerate_r(t, a, b).map_err(|e| fail(&e.to_string()))?.into_iter().collect();
    if ls.len() != map.len() || ls.iter().any(|l| !map.contains_key(l)) {
        return Err(fail("map is not total on L"));
    }
    let images: BTreeSet<&RElement> = map.values().collect();
    if images.len() != map.len() {
        return Err(fail("map is not injective"));
    }
    if images.len() != rs.len() || images.iter().any(|r| !rs.contains(*r)) {
        return Err(fail("image is not R"));
    }
    if map.iter().any(|(l, r)| l.norm != r.norm) {
        return Err(fail("map does not preserve norms"));
    }
    Ok(())
}

fn record(t: SignSequence, a: PosSet, b: PosSet, sampled: bool) -> Result<BijectionRecord, SweepError> {
    let mut norms_l: Vec<i64> = enumerate_l(&t, &a, &b)?.iter().map(|x| x.norm).collect();
    let mut norms_r: Vec<i64> = enumerate_r(&t, &a, &b)?.iter().map(|x| x.norm).collect();
    norms_l.sort_unstable();
    norms_r.sort_unstable();
    let construction = check_map(&t, &a, &b).err();
    Ok(BijectionRecord { t, a, b, sampled, norms_l, norms_r, construction })
}

/// Every sign word on `≤ max_positions` positions with every admissible
/// `(A, B)`, then `samples` seeded random instances on `≤ sample_positions`.
pub fn bijection_sweep(max_positions: usize, samples: usize, sample_positions: usize, seed: u64) -> Result<BijectionReport, SweepError> {
    let mut instances = Vec::new();
    for n in 0..=max_positions {
        for mask in 0..1u64 << n {
            let t = word(n, mask);
            for (a, b) in admissible(&t) {
                instances.push((t.clone(), a, b, false));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut drawn = 0;
    while drawn < samples && sample_positions > 0 {
        let n = rng.gen_range(1..=sample_positions);
        let t = word(n, rng.gen_range(0..1u64 << n));
        let adm = admissible(&t);
        if adm.is_empty() {
            continue;
        }
        let (a, b) = adm[rng.gen_range(0..adm.len())].clone();
        instances.push((t, a, b, true));
        drawn += 1;
    }
    let records = instances
        .into_par_iter()
        .map(|(t, a, b, sampled)| record(t, a, b, sampled))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BijectionReport { records })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweeps_pass() {
        assert!(formula_sweep(2, 6, None).unwrap().ok());
        assert!(branching_sweep(2, 5, None).unwrap().ok());
        assert!(shape_sweep(3, 6).unwrap().ok());
        assert!(consistency_sweep(2, 5).unwrap().ok());
        let rep = bijection_sweep(5, 50, 8, 7).unwrap();
        assert!(rep.ok());
        assert_eq!(rep.sampled(), 50);
    }

    #[test]
    fn sampling_is_seeded() {
        let key = |r: &BijectionReport| r.records.iter().map(|x| x.to_json().to_string()).collect::<Vec<_>>();
        let x = bijection_sweep(0, 20, 10, 3).unwrap();
        assert_eq!(key(&x), key(&bijection_sweep(0, 20, 10, 3).unwrap()));
        assert_ne!(key(&x), key(&bijection_sweep(0, 20, 10, 4).unwrap()));
    }
}
