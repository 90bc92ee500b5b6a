//! Sparse Laurent polynomials in `v` with arbitrary-precision integer
//! coefficients.

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// `Σ c_n v^n`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct LaurentPolynomial {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        LaurentPolynomial { coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `c v^n`.
    pub fn monomial(n: i64, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(n, c.into());
        p
    }

    /// `v^n`.
    pub fn v_pow(n: i64) -> Self {
        Self::monomial(n, 1)
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (n, c) in terms {
            p.add_term(n, c.into());
        }
        p
    }

    /// Adds `c v^n` in place.
    pub fn add_term(&mut self, n: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(n).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&n);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, n: i64) -> BigInt {
        self.coeffs.get(&n).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs.iter().map(|(&n, c)| (n, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// `p(v^{-1})`.
    pub fn bar(&self) -> Self {
        LaurentPolynomial { coeffs: self.coeffs.iter().map(|(&n, c)| (-n, c.clone())).collect() }
    }

    pub fn is_bar_symmetric(&self) -> bool {
        self.bar() == *self
    }

    /// Multiplication by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPolynomial { coeffs: self.coeffs.iter().map(|(&n, c)| (n + k, c.clone())).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPolynomial { coeffs: self.coeffs.iter().map(|(&n, x)| (n, x * c)).collect() }
    }

    /// Every coefficient is non-negative.
    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    /// Membership in `v N_0[v]`: non-negative coefficients, positive exponents.
    pub fn in_v_n0_v(&self) -> bool {
        self.is_nonnegative() && self.min_exp().is_none_or(|m| m >= 1)
    }

    /// Value at `v = 1`.
    pub fn eval_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    /// Exact quotient `p / q` by long division from the top exponent.
    pub fn exact_divide(&self, q: &LaurentPolynomial) -> Result<LaurentPolynomial> {
        let (q_top, q_lead) = match q.coeffs.iter().next_back() {
            Some((&n, c)) => (n, c.clone()),
            None => return Err(Error::DivisionByZero),
        };
        let (Some(p_min), Some(q_min)) = (self.min_exp(), q.min_exp()) else {
            return Ok(Self::zero());
        };
        let floor = p_min - q_min;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((&top, lead)) = rem.coeffs.iter().next_back() {
            let k = top - q_top;
            if k < floor || !(lead % &q_lead).is_zero() {
                return Err(Error::NotDivisible);
            }
            let c = lead / &q_lead;
            rem -= &q.shift(k).scale(&c);
            quot.add_term(k, c);
        }
        Ok(quot)
    }

    /// Splits `p = β + γ` with `β` bar-symmetric and `γ ∈ vZ[v]`.
    pub fn symmetric_split(&self) -> (LaurentPolynomial, LaurentPolynomial) {
        let mut beta = Self::zero();
        for (&n, c) in self.coeffs.range(..=0) {
            beta.add_term(n, c.clone());
            if n != 0 {
                beta.add_term(-n, c.clone());
            }
        }
        let gamma = self - &beta;
        (beta, gamma)
    }
}

/// `[k]_v = v^{-k+1} + v^{-k+3} + … + v^{k-1}`; `[0]_v = 0`.
pub fn quantum_integer(k: i64) -> Result<LaurentPolynomial> {
    if k < 0 {
        return Err(Error::NegativeQuantumIndex(k));
    }
    Ok(LaurentPolynomial::from_terms((0..k).map(|i| (-k + 1 + 2 * i, 1))))
}

/// `[k]! = [1][2]…[k]`, with `[0]! = 1`.
pub fn quantum_factorial(k: i64) -> Result<LaurentPolynomial> {
    if k < 0 {
        return Err(Error::NegativeQuantumIndex(k));
    }
    let mut acc = LaurentPolynomial::one();
    for i in 1..=k {
        acc = &acc * &quantum_integer(i)?;
    }
    Ok(acc)
}

impl From<i64> for LaurentPolynomial {
    fn from(c: i64) -> Self {
        Self::monomial(0, c)
    }
}

impl AddAssign<&LaurentPolynomial> for LaurentPolynomial {
    fn add_assign(&mut self, rhs: &LaurentPolynomial) {
        for (&n, c) in &rhs.coeffs {
            self.add_term(n, c.clone());
        }
    }
}

impl SubAssign<&LaurentPolynomial> for LaurentPolynomial {
    fn sub_assign(&mut self, rhs: &LaurentPolynomial) {
        for (&n, c) in &rhs.coeffs {
            self.add_term(n, -c.clone());
        }
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (&a, x) in &self.coeffs {
            for (&b, y) in &rhs.coeffs {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial { coeffs: self.coeffs.iter().map(|(&n, c)| (n, -c)).collect() }
    }
}

impl Add for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
        &self + &rhs
    }
}

impl Sub for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
        &self - &rhs
    }
}

impl Mul for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
        &self * &rhs
    }
}

impl core::iter::Sum for LaurentPolynomial {
    fn sum<I: Iterator<Item = LaurentPolynomial>>(iter: I) -> Self {
        let mut acc = LaurentPolynomial::zero();
        for p in iter {
            acc += &p;
        }
        acc
    }
}

fn monomial_text(n: i64) -> String {
    match n {
        0 => String::from("1"),
        1 => String::from("v"),
        _ => alloc::format!("v^{n}"),
    }
}

/// Ascending exponents, e.g. `v^-1 + v` or `2 - 3v^2`.
impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (&n, c)) in self.coeffs.iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            if n == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", monomial_text(n))?;
            } else {
                write!(f, "{mag}{}", monomial_text(n))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn lp(terms: &[(i64, i64)]) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(terms.iter().copied())
    }

    #[test]
    fn bar_examples() {
        assert_eq!(lp(&[(1, 1)]).bar(), lp(&[(-1, 1)]));
        assert_eq!(lp(&[(-1, 1), (1, 1)]).bar(), lp(&[(-1, 1), (1, 1)]));
        assert_eq!(lp(&[(0, 3), (2, 2)]).bar(), lp(&[(0, 3), (-2, 2)]));
    }

    #[test]
    fn quantum_examples() {
        assert_eq!(quantum_integer(1).unwrap(), LaurentPolynomial::one());
        assert_eq!(quantum_integer(3).unwrap(), lp(&[(-2, 1), (0, 1), (2, 1)]));
        assert_eq!(quantum_factorial(2).unwrap(), lp(&[(-1, 1), (1, 1)]));
        assert_eq!(quantum_factorial(0).unwrap(), LaurentPolynomial::one());
        assert!(quantum_integer(0).unwrap().is_zero());
        assert_eq!(quantum_integer(-1), Err(Error::NegativeQuantumIndex(-1)));
        assert_eq!(quantum_factorial(-2), Err(Error::NegativeQuantumIndex(-2)));
        for k in 0..8 {
            assert!(quantum_factorial(k).unwrap().is_bar_symmetric());
            assert_eq!(quantum_integer(k).unwrap().eval_one(), BigInt::from(k));
        }
    }

    #[test]
    fn divide_examples() {
        let two = quantum_integer(2).unwrap();
        assert_eq!(lp(&[(-1, 1), (1, 1)]).exact_divide(&two).unwrap(), LaurentPolynomial::one());
        assert_eq!((&two * &two).exact_divide(&two).unwrap(), two);
        assert_eq!(lp(&[(0, 1), (1, 1)]).exact_divide(&two), Err(Error::NotDivisible));
        assert_eq!(two.exact_divide(&LaurentPolynomial::zero()), Err(Error::DivisionByZero));
        assert_eq!(lp(&[(0, 3)]).exact_divide(&lp(&[(0, 2)])), Err(Error::NotDivisible));
        assert!(LaurentPolynomial::zero().exact_divide(&two).unwrap().is_zero());
    }

    #[test]
    fn split_examples() {
        let (b, g) = lp(&[(-1, 1), (1, 2)]).symmetric_split();
        assert_eq!(b, lp(&[(-1, 1), (1, 1)]));
        assert_eq!(g, lp(&[(1, 1)]));
        let (b, g) = lp(&[(3, 1)]).symmetric_split();
        assert!(b.is_zero());
        assert_eq!(g, lp(&[(3, 1)]));
        let (b, g) = lp(&[(0, 5)]).symmetric_split();
        assert_eq!(b, lp(&[(0, 5)]));
        assert!(g.is_zero());
    }

    #[test]
    fn display() {
        assert_eq!(lp(&[(-1, 1), (1, 1)]).to_string(), "v^-1 + v");
        assert_eq!(lp(&[(0, 2), (2, -3)]).to_string(), "2 - 3v^2");
        assert_eq!(lp(&[(1, -1)]).to_string(), "-v");
        assert_eq!(LaurentPolynomial::zero().to_string(), "0");
        assert_eq!(LaurentPolynomial::one().to_string(), "1");
    }

    #[test]
    fn big_coefficients_do_not_overflow() {
        let mut p = lp(&[(0, i64::MAX)]);
        p = &p * &p;
        assert_eq!(p.coeff(0), BigInt::from(i64::MAX) * BigInt::from(i64::MAX));
        assert_eq!(p.exact_divide(&lp(&[(0, i64::MAX)])).unwrap(), lp(&[(0, i64::MAX)]));
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPolynomial> {
        proptest::collection::vec((-6i64..=6, -5i64..=5), 0..6).prop_map(|t| lp(&t))
    }

    proptest! {
        #[test]
        fn bar_is_an_involutive_ring_map(p in arb_poly(), q in arb_poly()) {
            prop_assert_eq!(p.bar().bar(), p.clone());
            prop_assert_eq!((&p + &q).bar(), &p.bar() + &q.bar());
            prop_assert_eq!((&p * &q).bar(), &p.bar() * &q.bar());
        }

        #[test]
        fn split_is_the_unique_decomposition(p in arb_poly()) {
            let (b, g) = p.symmetric_split();
            prop_assert!(b.is_bar_symmetric());
            prop_assert!(g.min_exp().is_none_or(|m| m >= 1));
            prop_assert_eq!(&b + &g, p);
        }

        #[test]
        fn divide_inverts_multiply(p in arb_poly(), q in arb_poly()) {
            prop_assume!(!q.is_zero());
            prop_assert_eq!((&p * &q).exact_divide(&q).unwrap(), p);
        }
    }
}
