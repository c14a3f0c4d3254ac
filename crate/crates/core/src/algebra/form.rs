use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;

use super::{Rat, Scalar};
use crate::error::{Error, Result};

/// Exponent vector. Ordered so that ascending `Ord` is graded-lex with
/// x1 > x2 > ... > xk, i.e. the order in which terms are printed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Every exponent vector of the given total degree, in canonical order.
pub fn all_monomials(arity: usize, degree: u32) -> Vec<Monomial> {
    fn go(arity: usize, degree: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == arity {
            prefix.push(degree);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=degree).rev() {
            prefix.push(e);
            go(arity, degree - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if arity == 0 {
        if degree == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    go(arity, degree, &mut Vec::new(), &mut out);
    out
}

/// Sparse homogeneous polynomial in `arity` variables. Only nonzero
/// coefficients are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Form<T> {
    arity: usize,
    degree: u32,
    terms: BTreeMap<Monomial, T>,
}

pub type HomogeneousForm = Form<Rat>;

impl<T: Scalar> Form<T> {
    pub fn zero(arity: usize, degree: u32) -> Self {
        Self {
            arity,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The degree-0 form `c`.
    pub fn constant(arity: usize, c: T) -> Self {
        let mut f = Self::zero(arity, 0);
        f.insert(Monomial(vec![0; arity]), c);
        f
    }

    /// `Σ coeffs[i]·x_{i+1}`.
    pub fn linear(coeffs: &[T]) -> Self {
        let arity = coeffs.len();
        let mut f = Self::zero(arity, 1);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; arity];
            e[i] = 1;
            f.insert(Monomial(e), c.clone());
        }
        f
    }

    /// Builds a form from explicit terms; rejects inconsistent exponents.
    pub fn from_terms(
        arity: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, T)>,
    ) -> Result<Self> {
        let mut f = Self::zero(arity, degree);
        for (e, c) in terms {
            if e.len() != arity || e.iter().sum::<u32>() != degree {
                return Err(Error::Dimension(format!(
                    "exponent {e:?} does not fit arity {arity}, degree {degree}"
                )));
            }
            let m = Monomial(e);
            let c = match f.terms.remove(&m) {
                Some(prev) => prev.plus(&c),
                None => c,
            };
            f.insert(m, c);
        }
        Ok(f)
    }

    fn insert(&mut self, m: Monomial, c: T) {
        if !c.is_zero_value() {
            self.terms.insert(m, c);
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> u32 {
        self.degree
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

    /// Stored terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> T {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(T::zero_elem)
    }

    /// Every monomial of the form's degree, zeros included.
    pub fn dense_terms(&self) -> Vec<(Monomial, T)> {
        all_monomials(self.arity, self.degree)
            .into_iter()
            .map(|m| {
                let c = self.terms.get(&m).cloned().unwrap_or_else(T::zero_elem);
                (m, c)
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, other.degree, "degree mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            let v = match out.terms.remove(m) {
                Some(prev) => prev.plus(c),
                None => c.clone(),
            };
            out.insert(m.clone(), v);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(T::negated)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map_coeffs(|v| v.times(c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        let mut acc: BTreeMap<Monomial, T> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let e = Monomial(ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect());
                let prod = ca.times(cb);
                match acc.get_mut(&e) {
                    Some(v) => *v = v.plus(&prod),
                    None => {
                        acc.insert(e, prod);
                    }
                }
            }
        }
        let mut out = Self::zero(self.arity, self.degree + other.degree);
        for (m, c) in acc {
            out.insert(m, c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(self.arity, T::one_elem());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn map_coeffs<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Form<U> {
        let mut out = Form::zero(self.arity, self.degree);
        for (m, c) in &self.terms {
            out.insert(m.clone(), f(c));
        }
        out
    }

    /// Exact value `Σ coeff·∏ point_i^{e_i}`.
    pub fn eval(&self, point: &[T]) -> Result<T> {
        if point.len() != self.arity {
            return Err(Error::Dimension(format!(
                "form of arity {} evaluated at a point of length {}",
                self.arity,
                point.len()
            )));
        }
        let mut total = T::zero_elem();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    term = term.times(x);
                }
            }
            total = total.plus(&term);
        }
        Ok(total)
    }
}

impl HomogeneousForm {
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// `Σ c·m` rendered as `c·x1²·x2 + ...`, always printing the coefficient.
    pub fn render(&self, dense: bool) -> String {
        let terms: Vec<(Monomial, Rat)> = if dense {
            self.dense_terms()
        } else {
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect()
        };
        if terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in terms.iter().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            s.push_str(&mag.to_string());
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    s.push('·');
                    s.push_str(&format!("x{}{}", v + 1, superscript(e)));
                }
            }
        }
        s
    }
}

/// Superscript digits for exponents > 1 (empty for 1).
pub fn superscript(e: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    if e == 1 {
        return String::new();
    }
    e.to_string()
        .chars()
        .map(|d| DIGITS[d.to_digit(10).unwrap() as usize])
        .collect()
}

impl fmt::Display for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

/// Expands `∏ (a_i · x)^{m_i}` into a single form of degree `Σ m_i`.
pub fn form_expand_product<T: Scalar>(factors: &[(Vec<T>, u32)]) -> Result<Form<T>> {
    let Some((first, _)) = factors.first() else {
        return Err(Error::Dimension("empty factor list".into()));
    };
    let arity = first.len();
    let mut acc = Form::constant(arity, T::one_elem());
    for (coeffs, mult) in factors {
        if coeffs.len() != arity {
            return Err(Error::Dimension(format!(
                "linear factor of length {} in a product of arity {arity}",
                coeffs.len()
            )));
        }
        acc = acc.mul(&Form::linear(coeffs).pow(*mult));
    }
    Ok(acc)
}
