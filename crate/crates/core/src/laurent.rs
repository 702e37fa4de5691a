//! Sparse Laurent polynomials in one variable `v` with arbitrary-precision
//! integer coefficients.
//!
//! All Hecke-algebra arithmetic in this crate happens over `Z[v, v^-1]`, so
//! the ring operations here are exact. Polynomials are kept normalized: zero
//! coefficients are never stored.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// A Laurent polynomial `sum_e c_e v^e` with `c_e` in `Z`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        LaurentPoly {
            terms: BTreeMap::new(),
        }
    }

    /// The constant polynomial `1`.
    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// The monomial `c * v^e`.
    pub fn monomial(e: i64, c: i64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(e, BigInt::from(c));
        }
        LaurentPoly { terms }
    }

    /// The monomial `v^e`.
    pub fn v_pow(e: i64) -> Self {
        Self::monomial(e, 1)
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs.
    pub fn from_pairs(pairs: &[(i64, i64)]) -> Self {
        let mut p = Self::zero();
        for &(e, c) in pairs {
            p.add_term(e, &BigInt::from(c));
        }
        p
    }

    /// True iff this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff this is the constant polynomial `1`.
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(0).is_one()
    }

    /// The coefficient of `v^e`.
    pub fn coeff(&self, e: i64) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Iterates over `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (&i64, &BigInt)> {
        self.terms.iter()
    }

    /// Lowest exponent with nonzero coefficient, if any.
    pub fn min_deg(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Highest exponent with nonzero coefficient, if any.
    pub fn max_deg(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Adds `c * v^e` in place.
    pub fn add_term(&mut self, e: i64, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// `self + other`.
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms.iter() {
            out.add_term(*e, c);
        }
        out
    }

    /// `self - other`.
    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms.iter() {
            out.add_term(*e, &(-c));
        }
        out
    }

    /// `-self`.
    pub fn neg(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    /// `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in self.terms.iter() {
            for (e2, c2) in other.terms.iter() {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }

    /// `self * v^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// The bar involution `v -> v^-1`.
    pub fn bar(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// The part of the polynomial supported in strictly negative exponents.
    pub fn strictly_negative_part(&self) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| **e < 0)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// True iff every coefficient is nonnegative.
    pub fn is_nonneg(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// True iff every exponent is congruent to `parity` mod 2.
    pub fn has_parity(&self, parity: i64) -> bool {
        let parity = parity.rem_euclid(2);
        self.terms.keys().all(|e| e.rem_euclid(2) == parity)
    }

    /// True iff the polynomial is supported in exponents `<= bound`.
    pub fn max_deg_at_most(&self, bound: i64) -> bool {
        self.max_deg().is_none_or(|d| d <= bound)
    }

    /// Evaluates at a nonzero rational value of `v`.
    pub fn eval(&self, v0: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in self.terms.iter() {
            let pow = if *e >= 0 {
                num::pow::Pow::pow(v0.clone(), *e as u64)
            } else {
                num::pow::Pow::pow(v0.clone().recip(), (-e) as u64)
            };
            acc += BigRational::from(c.clone()) * pow;
        }
        acc
    }

    /// Substitutes `v -> v^k` for `k >= 1`.
    pub fn substitute_power(&self, k: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect(),
        }
    }

    /// Canonical machine-readable serialization: `e1:c1;e2:c2;...` in
    /// increasing exponent order, or `0` for the zero polynomial.
    pub fn serialize(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(e, c)| format!("{e}:{c}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter() {
            let (sign, abs) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            let show_coeff = !abs.is_one() || *e == 0;
            if show_coeff {
                write!(f, "{abs}")?;
            }
            if *e != 0 {
                if show_coeff {
                    write!(f, "*")?;
                }
                if *e == 1 {
                    write!(f, "v")?;
                } else {
                    write!(f, "v^{e}")?;
                }
            }
        }
        Ok(())
    }
}
