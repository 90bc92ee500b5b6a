//! The level-one Fock space: the `f_r` action, divided powers, and a
//! canonical-basis oracle for e-regular columns.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{check_e, check_residue, Error, Result};
use crate::laurent::{quantum_factorial, LaurentPolynomial};
use crate::partition::{boundary_nodes, dominates, Partition};

/// A finite sum `Σ c_λ λ` with Laurent coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FockVector {
    terms: BTreeMap<Partition, LaurentPolynomial>,
}

impl FockVector {
    pub fn zero() -> Self {
        FockVector::default()
    }

    pub fn basis(lambda: Partition) -> Self {
        let mut x = Self::zero();
        x.add_term(lambda, &LaurentPolynomial::one());
        x
    }

    /// The empty partition.
    pub fn vacuum() -> Self {
        Self::basis(Partition::empty())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Partition, LaurentPolynomial)>) -> Self {
        let mut x = Self::zero();
        for (l, c) in terms {
            x.add_term(l, &c);
        }
        x
    }

    pub fn add_term(&mut self, lambda: Partition, c: &LaurentPolynomial) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(lambda.clone()).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&lambda);
        }
    }

    /// `⟨x, λ⟩`.
    pub fn coeff(&self, lambda: &Partition) -> LaurentPolynomial {
        self.terms.get(lambda).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Partition, &LaurentPolynomial)> + '_ {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `self += c · y`.
    pub fn add_scaled(&mut self, c: &LaurentPolynomial, y: &FockVector) {
        for (l, d) in &y.terms {
            self.add_term(l.clone(), &(c * d));
        }
    }
}

/// `f_r`, extended linearly.
pub fn apply_f(x: &FockVector, e: usize, r: usize) -> Result<FockVector> {
    check_residue(e, r)?;
    let mut out = FockVector::zero();
    for (lambda, c) in x.terms() {
        let (removable, indent) = boundary_nodes(lambda, e, r)?;
        for node in &indent {
            let right = |ns: &[crate::partition::Node]| ns.iter().filter(|n| n.col > node.col).count() as i64;
            let n = right(&indent) - right(&removable);
            out.add_term(lambda.with_node_added(*node)?, &c.shift(n));
        }
    }
    Ok(out)
}

/// `f_r^{(k)} = f_r^k / [k]!`.
pub fn apply_f_divided(x: &FockVector, e: usize, r: usize, k: usize) -> Result<FockVector> {
    if k == 0 {
        return Err(Error::Precondition("divided power index must be positive".into()));
    }
    let mut y = x.clone();
    for _ in 0..k {
        y = apply_f(&y, e, r)?;
    }
    let fact = quantum_factorial(k as i64)?;
    let mut out = FockVector::zero();
    for (l, c) in y.terms() {
        out.add_term(l.clone(), &c.exact_divide(&fact)?);
    }
    Ok(out)
}

/// `(residue, multiplicity)` per ladder, in increasing ladder number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderMonomial {
    pub steps: Vec<(usize, usize)>,
}

impl LadderMonomial {
    pub fn apply(&self, x: &FockVector, e: usize) -> Result<FockVector> {
        let mut y = x.clone();
        for &(r, k) in &self.steps {
            y = apply_f_divided(&y, e, r, k)?;
        }
        Ok(y)
    }
}

/// Groups the nodes of `λ` by ladder `i + (e-1)(j-1)`.
pub fn ladder_monomial(lambda: &Partition, e: usize) -> Result<LadderMonomial> {
    check_e(e)?;
    let mut ladders: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for node in lambda.nodes() {
        let l = node.row + (e - 1) * (node.col - 1);
        let res = node.residue(e);
        let entry = ladders.entry(l).or_insert((res, 0));
        if entry.0 != res {
            return Err(Error::Invariant(format!("ladder {l} of {lambda} mixes residues")));
        }
        entry.1 += 1;
    }
    Ok(LadderMonomial { steps: ladders.into_values().collect() })
}

/// Memoised canonical basis `G(μ)` for e-regular `μ`.
#[derive(Debug, Clone)]
pub struct CanonicalBasis {
    e: usize,
    memo: BTreeMap<Partition, FockVector>,
}

impl CanonicalBasis {
    pub fn new(e: usize) -> Result<Self> {
        check_e(e)?;
        Ok(CanonicalBasis { e, memo: BTreeMap::new() })
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn cached(&self, mu: &Partition) -> Option<&FockVector> {
        self.memo.get(mu)
    }

    /// Seeds the memo, e.g. from a cache file.
    pub fn preload(&mut self, mu: Partition, g: FockVector) {
        self.memo.insert(mu, g);
    }

    pub fn memo(&self) -> &BTreeMap<Partition, FockVector> {
        &self.memo
    }

    /// `G(μ)`; e-singular `μ` is unsupported.
    pub fn get(&mut self, mu: &Partition) -> Result<FockVector> {
        if let Some(g) = self.memo.get(mu) {
            return Ok(g.clone());
        }
        if !mu.is_e_regular(self.e) {
            return Err(Error::Unsupported(format!("{mu} is not {}-regular", self.e)));
        }
        let mut x = ladder_monomial(mu, self.e)?.apply(&FockVector::vacuum(), self.e)?;
        if !x.coeff(mu).is_one() {
            return Err(Error::Invariant(format!("ladder seed of {mu} has coefficient {} at {mu}", x.coeff(mu))));
        }
        loop {
            // Lexicographically largest offender is dominance-maximal among offenders.
            let bad = x
                .terms()
                .rev()
                .find(|(l, c)| *l != mu && c.min_exp().is_some_and(|m| m <= 0))
                .map(|(l, c)| (l.clone(), c.clone()));
            let Some((nu, c)) = bad else { break };
            if !dominates(mu, &nu) {
                return Err(Error::Invariant(format!("{nu} in the support of A({mu}) is not dominated by it")));
            }
            if !nu.is_e_regular(self.e) {
                return Err(Error::Invariant(format!("elimination for {mu} needs singular {nu}")));
            }
            let (beta, _) = c.symmetric_split();
            let g = self.get(&nu)?;
            x.add_scaled(&-&beta, &g);
        }
        for (l, c) in x.terms() {
            if l != mu && !c.in_v_n0_v() {
                return Err(Error::Invariant(format!("G({mu}) has coefficient {c} at {l}")));
            }
        }
        self.memo.insert(mu.clone(), x.clone());
        Ok(x)
    }

    /// `d_{λμ}(v) = ⟨G(μ), λ⟩`.
    pub fn coefficient(&mut self, lambda: &Partition, mu: &Partition) -> Result<LaurentPolynomial> {
        if lambda.size() != mu.size() {
            return Err(Error::SizeMismatch(lambda.size(), mu.size()));
        }
        Ok(self.get(mu)?.coeff(lambda))
    }

    /// The coefficients `a_{τλ}(v)` in `f_r G(λ) = Σ_τ a_{τλ}(v) G(τ)`.
    pub fn branching(&mut self, lambda: &Partition, r: usize) -> Result<BTreeMap<Partition, LaurentPolynomial>> {
        let mut x = apply_f(&self.get(lambda)?, self.e, r)?;
        let mut out = BTreeMap::new();
        loop {
            let top = x.terms().next_back().map(|(l, c)| (l.clone(), c.clone()));
            let Some((tau, c)) = top else { break };
            if !tau.is_e_regular(self.e) {
                return Err(Error::Invariant(format!("f_{r} G({lambda}) has leading term at singular {tau}")));
            }
            let g = self.get(&tau)?;
            x.add_scaled(&-&c, &g);
            out.insert(tau, c);
        }
        Ok(out)
    }
}

/// `d_{λμ}(v)` with a throwaway memo.
pub fn oracle_coefficient(lambda: &Partition, mu: &Partition, e: usize) -> Result<LaurentPolynomial> {
    CanonicalBasis::new(e)?.coefficient(lambda, mu)
}

pub fn canonical_basis(mu: &Partition, e: usize) -> Result<FockVector> {
    CanonicalBasis::new(e)?.get(mu)
}
