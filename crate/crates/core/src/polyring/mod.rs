//! Exact polynomial arithmetic over the integers: dense univariate
//! polynomials, bivariate plane-curve models that are monic in `y`,
//! a small parser, resultants, factorization over Q and root counting
//! modulo integers.

mod factor;
pub(crate) mod modp;
mod parse;
mod resultant;
pub(crate) mod roots;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub use factor::{
    factor_over_q, factor_over_q_with, ladder_constants, radical, squarefree_decomposition,
    IrreducibleFactorization, DEFAULT_DEGREE_BOUND,
};
pub use parse::{parse_poly, Parsed};
pub use resultant::{discriminant, plane_discriminant, resultant};
pub use roots::roots_mod;

/// Dense univariate polynomial with integer coefficients, lowest degree first.
///
/// The coefficient vector never carries trailing zeros; the zero polynomial is
/// the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        IntPoly::from_i64(&[0, 1])
    }

    /// `x - r`.
    pub fn linear_root(r: BigInt) -> Self {
        IntPoly::new(vec![-r, BigInt::one()])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Leading coefficient, zero for the zero polynomial.
    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Horner evaluation.
    pub fn eval(&self, n: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * n + c;
        }
        acc
    }

    pub fn eval_i64(&self, n: i64) -> BigInt {
        self.eval(&BigInt::from(n))
    }

    /// Horner evaluation over Q.
    pub fn eval_rational(&self, r: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * r + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        IntPoly::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a * k).collect())
    }

    /// Divides every coefficient by `k`, which must divide all of them.
    pub fn div_scalar(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a / k).collect())
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        let mut acc = IntPoly::constant(BigInt::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient in Z[x], or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.degree() < d.degree() {
            return None;
        }
        let lc = d.leading();
        let mut rem = self.coeffs.clone();
        let dd = d.degree();
        let mut quot = vec![BigInt::zero(); self.degree() - dd + 1];
        for i in (0..quot.len()).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            for (j, c) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &q * c;
            }
            quot[i] = q;
        }
        rem.iter().all(|c| c.is_zero()).then(|| IntPoly::new(quot))
    }

    /// `lc(d)^(deg self - deg d + 1) * self mod d`.
    pub fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        let coeffs = resultant::prem(&self.coeffs, &d.coeffs);
        IntPoly::new(coeffs)
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() || a.is_zero() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part()
    }

    /// Coefficients as rationals, lowest degree first.
    pub fn to_rational(&self) -> Vec<BigRational> {
        self.coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }

    /// Sum of squares of the coefficients.
    pub fn norm_squared(&self) -> BigInt {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }

    /// Coefficients reduced into [0, m).
    pub(crate) fn reduce_mod(&self, m: u64) -> Vec<u64> {
        let mb = BigInt::from(m);
        let mut out: Vec<u64> = self
            .coeffs
            .iter()
            .map(|c| c.mod_floor(&mb).to_u64().unwrap())
            .collect();
        while out.last() == Some(&0) {
            out.pop();
        }
        out
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Writes `c * var^e` terms in the canonical order given, e.g. `3x^2 - x + 1`.
fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (&'a BigInt, String)>,
) -> fmt::Result {
    let mut first = true;
    for (c, mono) in terms {
        let neg = c.is_negative();
        let mag = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        if mono.is_empty() {
            write!(f, "{mag}")?;
        } else if mag.is_one() {
            write!(f, "{mono}")?;
        } else {
            write!(f, "{mag}{mono}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

fn monomial(var: char, e: u32) -> String {
    match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    }
}

/// Canonical printer: descending powers, no `*` between coefficient and monomial.
impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (c, monomial('x', i as u32))),
        )
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Bivariate integer polynomial `F(x, y)`, monic in `y` of `y`-degree at least 2.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PlanePoly {
    /// (x-degree, y-degree) -> nonzero coefficient
    terms: BTreeMap<(u32, u32), BigInt>,
    y_degree: u32,
}

impl PlanePoly {
    /// Validates the monic-in-`y` normal form; non-monic models are rejected.
    pub fn new(terms: BTreeMap<(u32, u32), BigInt>) -> Result<Self> {
        let terms: BTreeMap<_, _> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let y_degree = terms.keys().map(|&(_, j)| j).max().unwrap_or(0);
        if y_degree < 2 {
            return Err(Error::domain(
                "polyring",
                format!("plane polynomial must have y-degree >= 2, found {y_degree}"),
            ));
        }
        let top: Vec<_> = terms.iter().filter(|((_, j), _)| *j == y_degree).collect();
        if top.len() != 1 || *top[0].0 != (0, y_degree) || !top[0].1.is_one() {
            return Err(Error::domain(
                "polyring",
                "plane polynomial must be monic in y",
            ));
        }
        Ok(PlanePoly { terms, y_degree })
    }

    /// `y^p - g(x)`.
    pub fn pure(p: u32, g: &IntPoly) -> Result<Self> {
        let mut terms = BTreeMap::new();
        terms.insert((0, p), BigInt::one());
        for (i, c) in g.coeffs().iter().enumerate() {
            if !c.is_zero() {
                terms.insert((i as u32, 0), -c);
            }
        }
        PlanePoly::new(terms)
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), BigInt> {
        &self.terms
    }

    pub fn y_degree(&self) -> u32 {
        self.y_degree
    }

    pub fn x_degree(&self) -> u32 {
        self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    /// Coefficients as a polynomial in `y` over Z[x], lowest `y`-degree first.
    pub fn y_coefficients(&self) -> Vec<IntPoly> {
        let mut rows = vec![Vec::new(); self.y_degree as usize + 1];
        for (&(i, j), c) in &self.terms {
            let row = &mut rows[j as usize];
            if row.len() <= i as usize {
                row.resize(i as usize + 1, BigInt::zero());
            }
            row[i as usize] = c.clone();
        }
        rows.into_iter().map(IntPoly::new).collect()
    }

    /// `F(n, y)` as a univariate polynomial in `y`.
    pub fn specialize_x(&self, n: &BigInt) -> IntPoly {
        IntPoly::new(self.y_coefficients().iter().map(|c| c.eval(n)).collect())
    }

    /// If the model is `y^p - g(x)`, returns `(p, g)`.
    pub fn as_pure(&self) -> Option<(u32, IntPoly)> {
        let rows = self.y_coefficients();
        if rows[1..rows.len() - 1].iter().any(|r| !r.is_zero()) {
            return None;
        }
        Some((self.y_degree, -&rows[0]))
    }
}

impl fmt::Display for PlanePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<_> = self.terms.iter().collect();
        keys.sort_by(|a, b| (b.0 .1, b.0 .0).cmp(&(a.0 .1, a.0 .0)));
        write_terms(
            f,
            keys.into_iter().map(|(&(i, j), c)| {
                let mut mono = monomial('x', i);
                if i > 0 && j > 0 {
                    mono.push('*');
                }
                mono.push_str(&monomial('y', j));
                (c, mono)
            }),
        )
    }
}

impl fmt::Debug for PlanePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlanePoly({self})")
    }
}

impl Serialize for PlanePoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn eval_examples() {
        let f = p(&[0, -1, 0, 1]);
        assert_eq!(f.eval_i64(2), BigInt::from(6));
        assert_eq!(f.eval_i64(1), BigInt::from(0));
        assert_eq!(p(&[1, 0, 1]).eval_i64(10), BigInt::from(101));
    }

    #[test]
    fn printer_is_canonical() {
        assert_eq!(p(&[0, -1, 0, 1]).to_string(), "x^3 - x");
        assert_eq!(p(&[1, 0, 3]).to_string(), "3x^2 + 1");
        assert_eq!(p(&[-2, -1]).to_string(), "-x - 2");
        assert_eq!(IntPoly::zero().to_string(), "0");
        let plane = PlanePoly::pure(2, &p(&[0, -1, 0, 1])).unwrap();
        assert_eq!(plane.to_string(), "y^2 - x^3 + x");
    }

    #[test]
    fn exact_division_and_gcd() {
        let a = p(&[1, 1]);
        let b = p(&[-2, 0, 1]);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.div_exact(&p(&[1, 2])), None);
        assert_eq!((&prod * &a).gcd(&(&a * &a)), &a * &a);
        assert_eq!(prod.gcd(&(&a * &a)), a);
        assert_eq!(p(&[6, 12]).primitive_part(), p(&[1, 2]));
        assert_eq!(p(&[-6, -12]).content(), BigInt::from(6));
    }

    #[test]
    fn plane_poly_validation() {
        let mut terms = BTreeMap::new();
        terms.insert((0, 2), BigInt::from(2));
        terms.insert((1, 0), BigInt::from(1));
        assert!(PlanePoly::new(terms).is_err());
        let mut terms = BTreeMap::new();
        terms.insert((0, 2), BigInt::one());
        terms.insert((1, 2), BigInt::one());
        assert!(PlanePoly::new(terms).is_err());
        let mut terms = BTreeMap::new();
        terms.insert((0, 1), BigInt::one());
        assert!(PlanePoly::new(terms).is_err());
    }

    #[test]
    fn plane_specialization() {
        let plane = PlanePoly::pure(2, &p(&[0, -1, 0, 1])).unwrap();
        assert_eq!(plane.specialize_x(&BigInt::from(2)), p(&[-6, 0, 1]));
        assert_eq!(plane.as_pure(), Some((2, p(&[0, -1, 0, 1]))));
    }
}
