//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are keyed by exponent vectors and iterated in graded lexicographic
//! order, so equality, hashing and text serialization are all canonical.
//! Composition with a linear map substitutes each variable by a linear form
//! and expands fully; degrees stay small enough here (≤ 8) that direct
//! substitution with memoized powers is the right tool.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactq::{rational_string, QMatrix, Rational};

/// Exponent vector of a monomial. Ordered by total degree, then
/// lexicographically (grlex), which fixes the canonical term order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MPolyError {
    #[error("variable count mismatch: {0} vs {1}")]
    NvarsMismatch(usize, usize),
    #[error("composition matrix has {rows} rows, polynomial has {nvars} variables")]
    ShapeMismatch { rows: usize, nvars: usize },
}

/// Sparse multivariate polynomial. No zero coefficients are stored; the zero
/// polynomial has an empty term map.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial(vec![0; nvars]), c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(Monomial(exps), Rational::one());
        p
    }

    /// Degree-1 polynomial `Σ coeffs[i]·x_i`.
    pub fn linear_form(coeffs: &[Rational]) -> Self {
        let mut p = Self::zero(coeffs.len());
        for (i, c) in coeffs.iter().enumerate() {
            let mut exps = vec![0; coeffs.len()];
            exps[i] = 1;
            p.add_term(Monomial(exps), c.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::total_degree);
        let Some(first) = degs.next() else { return true };
        degs.all(|d| d == first)
    }

    /// Terms in graded lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        assert_eq!(m.0.len(), self.nvars, "exponent vector length mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get() + &c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, MPolyError> {
        self.check_nvars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MPolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MPolyError> {
        self.check_nvars(other)?;
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, q)| (m.clone(), q * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.nvars, Rational::one());
        for _ in 0..k {
            out = out.mul(self).expect("same nvars");
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational, MPolyError> {
        if point.len() != self.nvars {
            return Err(MPolyError::NvarsMismatch(point.len(), self.nvars));
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    term = &term * x;
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Self {
        assert!(i < self.nvars);
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] = e - 1;
            out.add_term(Monomial(exps), c * Rational::from(num_bigint::BigInt::from(e)));
        }
        out
    }

    /// Exact gradient at a point.
    pub fn gradient_at(&self, point: &[Rational]) -> Result<Vec<Rational>, MPolyError> {
        (0..self.nvars).map(|i| self.partial(i).eval(point)).collect()
    }

    /// `P(A·x)`, fully expanded. `A` must have `nvars` rows; its column count
    /// is the variable count of the result, so rectangular maps restrict the
    /// polynomial to a parameterized subspace.
    pub fn compose_linear(&self, a: &QMatrix) -> Result<Self, MPolyError> {
        if a.rows() != self.nvars {
            return Err(MPolyError::ShapeMismatch { rows: a.rows(), nvars: self.nvars });
        }
        let out_vars = a.cols();
        let images: Vec<MultiPoly> =
            (0..self.nvars).map(|i| MultiPoly::linear_form(a.row(i))).collect();
        // powers[i][e] = images[i]^e, filled lazily
        let mut powers: Vec<Vec<MultiPoly>> = (0..self.nvars)
            .map(|_| vec![MultiPoly::constant(out_vars, Rational::one())])
            .collect();
        let mut out = Self::zero(out_vars);
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(out_vars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= usize::from(e) {
                    let next = powers[i].last().unwrap().mul(&images[i]).expect("same nvars");
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][usize::from(e)]).expect("same nvars");
            }
            out = out.add(&term).expect("same nvars");
        }
        Ok(out)
    }

    /// If `self = c·other` for a nonzero scalar `c`, return `c`. Both zero
    /// gives `1` by convention; exactly one zero gives `None`.
    pub fn proportional(&self, other: &Self) -> Option<Rational> {
        if self.nvars != other.nvars {
            return None;
        }
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Some(Rational::one()),
            (true, false) | (false, true) => return None,
            _ => {}
        }
        let (m0, q0) = other.terms.iter().next().unwrap();
        let p0 = self.terms.get(m0)?;
        let c = p0 / q0;
        if self == &other.scale(&c) {
            Some(c)
        } else {
            None
        }
    }

    /// Canonical text form with the given variable names: terms in graded
    /// lexicographic order, highest first, exact rational coefficients.
    pub fn to_text(&self, names: &[&str]) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let mut mono = String::new();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !mono.is_empty() {
                    mono.push('*');
                }
                if e == 1 {
                    mono.push_str(names[i]);
                } else {
                    let _ = write!(mono, "{}^{}", names[i], e);
                }
            }
            let abs = if c < &Rational::zero() { -c } else { c.clone() };
            let sign = if c < &Rational::zero() { "-" } else { "+" };
            if k == 0 {
                if sign == "-" {
                    s.push('-');
                }
            } else {
                let _ = write!(s, " {sign} ");
            }
            if mono.is_empty() {
                s.push_str(&rational_string(&abs));
            } else if abs.is_one() {
                s.push_str(&mono);
            } else {
                let _ = write!(s, "{}*{}", rational_string(&abs), mono);
            }
        }
        s
    }

    fn check_nvars(&self, other: &Self) -> Result<(), MPolyError> {
        if self.nvars != other.nvars {
            return Err(MPolyError::NvarsMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        write!(f, "{}", self.to_text(&refs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::rat;

    fn x(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    #[test]
    fn product_of_sum_and_difference() {
        let p = x(2, 0).add(&x(2, 1)).unwrap();
        let q = x(2, 0).sub(&x(2, 1)).unwrap();
        let prod = p.mul(&q).unwrap();
        let expected = x(2, 0).pow(2).sub(&x(2, 1).pow(2)).unwrap();
        assert_eq!(prod, expected);
    }

    #[test]
    fn additive_inverse_gives_zero() {
        let p = x(3, 0).mul(&x(3, 2)).unwrap().add(&x(3, 1)).unwrap();
        assert!(p.add(&p.neg()).unwrap().is_zero());
    }

    #[test]
    fn compose_with_identity_is_identity() {
        let p = x(3, 0).mul(&x(3, 1)).unwrap().add(&x(3, 2).pow(3)).unwrap();
        assert_eq!(p.compose_linear(&QMatrix::identity(3)).unwrap(), p);
    }

    #[test]
    fn compose_with_swap_renames_variable() {
        let swap = QMatrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(x(2, 0).compose_linear(&swap).unwrap(), x(2, 1));
    }

    #[test]
    fn proportional_basics() {
        let two_x2 = x(2, 0).pow(2).scale(&rat(2));
        assert_eq!(two_x2.proportional(&x(2, 0).pow(2)), Some(rat(2)));
        assert_eq!(x(2, 0).pow(2).proportional(&x(2, 1).pow(2)), None);
        assert_eq!(
            MultiPoly::zero(2).proportional(&MultiPoly::zero(2)),
            Some(rat(1))
        );
        assert_eq!(MultiPoly::zero(2).proportional(&x(2, 0)), None);
    }

    #[test]
    fn eval_and_partial() {
        // p = x0^2*x1 + 3
        let p = x(2, 0)
            .pow(2)
            .mul(&x(2, 1))
            .unwrap()
            .add(&MultiPoly::constant(2, rat(3)))
            .unwrap();
        assert_eq!(p.eval(&[rat(2), rat(5)]).unwrap(), rat(23));
        assert_eq!(p.eval(&[rat(2)]), Err(MPolyError::NvarsMismatch(1, 2)));
        let dp = p.partial(0);
        assert_eq!(dp.eval(&[rat(2), rat(5)]).unwrap(), rat(20));
    }

    #[test]
    fn text_form_is_sorted_grlex() {
        let p = x(2, 1)
            .add(&x(2, 0).pow(2).scale(&rat(-2)))
            .unwrap()
            .add(&MultiPoly::constant(2, rat(1)))
            .unwrap();
        assert_eq!(p.to_text(&["a", "b"]), "-2*a^2 + b + 1");
    }
}
