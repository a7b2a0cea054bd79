//! Resultants and discriminants via the subresultant pseudo-remainder sequence.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{IntPoly, PlanePoly};
use crate::error::{Error, Result};

/// Coefficient domain for the subresultant algorithm: an integral domain with
/// exact division.
pub(crate) trait Domain: Clone + PartialEq {
    fn zero_elem() -> Self;
    fn one_elem() -> Self;
    fn is_zero(&self) -> bool;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn div_exact(&self, other: &Self) -> Self;

    fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one_elem();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl Domain for BigInt {
    fn zero_elem() -> Self {
        Zero::zero()
    }
    fn one_elem() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, other: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % other)));
        self / other
    }
}

impl Domain for IntPoly {
    fn zero_elem() -> Self {
        IntPoly::zero()
    }
    fn one_elem() -> Self {
        IntPoly::constant(BigInt::one())
    }
    fn is_zero(&self) -> bool {
        IntPoly::is_zero(self)
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, other: &Self) -> Self {
        IntPoly::div_exact(self, other).expect("subresultant division is exact")
    }
}

fn trim<R: Domain>(v: &mut Vec<R>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a mod b`.
pub(crate) fn prem<R: Domain>(a: &[R], b: &[R]) -> Vec<R> {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    assert!(!b.is_empty(), "pseudo-division by zero");
    if r.len() < b.len() {
        return r;
    }
    let n = b.len() - 1;
    let lc = b[n].clone();
    let m = r.len() - 1;
    for i in (n..=m).rev() {
        let t = r[i].clone();
        for c in r.iter_mut().take(i + 1) {
            *c = c.mul(&lc);
        }
        for (j, bj) in b.iter().enumerate() {
            let k = i - n + j;
            r[k] = r[k].sub(&t.mul(bj));
        }
    }
    trim(&mut r);
    r
}

fn degree<R>(v: &[R]) -> usize {
    v.len() - 1
}

pub(crate) fn subresultant<R: Domain>(a: &[R], b: &[R]) -> R {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    if a.is_empty() || b.is_empty() {
        return R::zero_elem();
    }
    let mut negate = false;
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
        if degree(&a) % 2 == 1 && degree(&b) % 2 == 1 {
            negate = true;
        }
    }
    let sign = |x: R, negate: bool| if negate { x.neg() } else { x };
    if degree(&b) == 0 {
        return sign(b[0].pow(degree(&a)), negate);
    }
    let mut g = R::one_elem();
    let mut h = R::one_elem();
    loop {
        let delta = degree(&a) - degree(&b);
        if degree(&a) % 2 == 1 && degree(&b) % 2 == 1 {
            negate = !negate;
        }
        let r = prem(&a, &b);
        if r.is_empty() {
            return R::zero_elem();
        }
        a = b;
        let divisor = g.mul(&h.pow(delta));
        b = r.iter().map(|c| c.div_exact(&divisor)).collect();
        g = a[degree(&a)].clone();
        if delta > 0 {
            h = g.pow(delta).div_exact(&h.pow(delta - 1));
        }
        if degree(&b) == 0 {
            let da = degree(&a);
            let lb = b[0].pow(da);
            return sign(lb.div_exact(&h.pow(da - 1)), negate);
        }
    }
}

/// Resultant of two nonzero polynomials.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> Result<BigInt> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::domain(
            "polyring",
            "resultant of the zero polynomial",
        ));
    }
    Ok(subresultant(f.coeffs(), g.coeffs()))
}

fn disc_sign(d: usize) -> bool {
    (d * (d - 1) / 2) % 2 == 1
}

/// `(-1)^(d(d-1)/2) res(f, f') / lc(f)`.
pub fn discriminant(f: &IntPoly) -> Result<BigInt> {
    if f.is_zero() {
        return Err(Error::domain(
            "polyring",
            "discriminant of the zero polynomial",
        ));
    }
    let d = f.degree();
    if d == 0 {
        return Err(Error::domain("polyring", "discriminant needs degree >= 1"));
    }
    let r = subresultant(f.coeffs(), f.derivative().coeffs()) / f.leading();
    Ok(if disc_sign(d) { -r } else { r })
}

/// Discriminant of `F(x, y)` with respect to `y`, as a polynomial in `x`.
pub fn plane_discriminant(f: &PlanePoly) -> IntPoly {
    let rows = f.y_coefficients();
    let deriv: Vec<IntPoly> = rows
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| c.scale(&BigInt::from(j)))
        .collect();
    let r = subresultant(&rows, &deriv);
    // F is monic in y, so no division by the leading coefficient is needed.
    if disc_sign(f.y_degree() as usize) {
        -&r
    } else {
        r
    }
}
