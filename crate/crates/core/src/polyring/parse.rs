//! Recursive-descent parser for the ASCII polynomial grammar.
//!
//! ```text
//! expr    := ['+' | '-'] term (('+' | '-') term)*
//! term    := power ('*' ['-'] power)*
//! power   := primary ['^' INT]
//! primary := INT [VAR ['^' INT]] | VAR | '(' expr ')'
//! VAR     := 'x' | 'y'
//! ```
//!
//! Implicit multiplication is only accepted between an integer literal and
//! a monomial (`3x^2`).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{IntPoly, PlanePoly};
use crate::error::{Error, Result};

const MAX_EXPONENT: u32 = 256;

/// Bivariate polynomial: (x-degree, y-degree) -> coefficient.
type Terms = BTreeMap<(u32, u32), BigInt>;

/// Result of parsing: a polynomial in `x` alone, or a plane model in `x, y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Univariate(IntPoly),
    Plane(PlanePoly),
}

fn add_into(acc: &mut Terms, other: &Terms, sign: i32) {
    for (k, v) in other {
        let e = acc.entry(*k).or_insert_with(BigInt::zero);
        if sign < 0 {
            *e -= v;
        } else {
            *e += v;
        }
    }
    acc.retain(|_, v| !v.is_zero());
}

fn mul_terms(a: &Terms, b: &Terms) -> Terms {
    let mut out = Terms::new();
    for (&(i1, j1), c1) in a {
        for (&(i2, j2), c2) in b {
            *out.entry((i1 + i2, j1 + j2)).or_insert_with(BigInt::zero) += c1 * c2;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn constant(c: BigInt) -> Terms {
    let mut t = Terms::new();
    if !c.is_zero() {
        t.insert((0, 0), c);
    }
    t
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error<T>(&self, offset: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            offset,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn describe(&self) -> String {
        match self.peek() {
            Some(c) => format!("unexpected character '{}'", c as char),
            None => "unexpected end of input".to_string(),
        }
    }

    fn expr(&mut self) -> Result<Terms> {
        self.skip_ws();
        let mut sign = 1;
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                sign = -1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let mut acc = Terms::new();
        add_into(&mut acc, &self.term()?, sign);
        loop {
            self.skip_ws();
            let sign = match self.peek() {
                Some(b'+') => 1,
                Some(b'-') => -1,
                _ => return Ok(acc),
            };
            self.pos += 1;
            let t = self.term()?;
            add_into(&mut acc, &t, sign);
        }
    }

    fn term(&mut self) -> Result<Terms> {
        let mut acc = self.power()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    self.skip_ws();
                    let negate = self.peek() == Some(b'-');
                    if negate {
                        self.pos += 1;
                    }
                    let mut rhs = self.power()?;
                    if negate {
                        rhs = mul_terms(&rhs, &constant(-BigInt::one()));
                    }
                    acc = mul_terms(&acc, &rhs);
                }
                Some(b'(') | Some(b'x') | Some(b'y') | Some(b'0'..=b'9') => {
                    return self.error(self.pos, "implicit multiplication is not allowed here");
                }
                Some(b'/') | Some(b'.') => {
                    return self.error(self.pos, "non-integer coefficient");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn exponent(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error(
                start,
                format!("expected nonnegative integer exponent, {}", self.describe()),
            );
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match text.parse::<u32>() {
            Ok(e) if e <= MAX_EXPONENT => Ok(e),
            _ => self.error(start, format!("exponent {text} exceeds {MAX_EXPONENT}")),
        }
    }

    fn pow(base: &Terms, e: u32) -> Terms {
        let mut acc = constant(BigInt::one());
        for _ in 0..e {
            acc = mul_terms(&acc, base);
        }
        acc
    }

    fn power(&mut self) -> Result<Terms> {
        let base = self.primary()?;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.exponent()?;
            return Ok(Self::pow(&base, e));
        }
        Ok(base)
    }

    fn variable(&mut self) -> Option<Terms> {
        let key = match self.peek()? {
            b'x' => (1, 0),
            b'y' => (0, 1),
            _ => return None,
        };
        self.pos += 1;
        let mut t = Terms::new();
        t.insert(key, BigInt::one());
        Some(t)
    }

    fn primary(&mut self) -> Result<Terms> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                if matches!(self.peek(), Some(b'.') | Some(b'/')) {
                    return self.error(self.pos, "non-integer coefficient");
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let value: BigInt = text.parse().expect("digits");
                if let Some(var) = self.variable() {
                    // coefficient times monomial: 3x^2 = 3 * (x^2)
                    let mut mono = var;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        let e = self.exponent()?;
                        mono = Self::pow(&mono, e);
                    }
                    return Ok(mul_terms(&constant(value), &mono));
                }
                Ok(constant(value))
            }
            Some(b'x') | Some(b'y') => Ok(self.variable().unwrap()),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return self.error(self.pos, format!("expected ')', {}", self.describe()));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'.') | Some(b'/') => self.error(self.pos, "non-integer coefficient"),
            _ => self.error(self.pos, self.describe()),
        }
    }
}

fn parse_terms(text: &str) -> Result<Terms> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let terms = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return parser.error(parser.pos, parser.describe());
    }
    Ok(terms)
}

/// Parses polynomial text into an [`IntPoly`] (no `y`) or a [`PlanePoly`].
pub fn parse_poly(text: &str) -> Result<Parsed> {
    let terms = parse_terms(text)?;
    if terms.keys().all(|&(_, j)| j == 0) {
        let deg = terms.keys().map(|&(i, _)| i).max().unwrap_or(0) as usize;
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        for ((i, _), c) in terms {
            coeffs[i as usize] = c;
        }
        return Ok(Parsed::Univariate(IntPoly::new(coeffs)));
    }
    PlanePoly::new(terms).map(Parsed::Plane)
}

impl IntPoly {
    /// Parses text that must not mention `y`.
    pub fn parse(text: &str) -> Result<IntPoly> {
        match parse_poly(text)? {
            Parsed::Univariate(f) => Ok(f),
            Parsed::Plane(_) => Err(Error::domain(
                "polyring",
                format!("expected a polynomial in x only, got '{text}'"),
            )),
        }
    }
}

impl PlanePoly {
    /// Parses text into a plane model, monic in `y`.
    pub fn parse(text: &str) -> Result<PlanePoly> {
        let terms = parse_terms(text)?;
        PlanePoly::new(terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(
            parse_poly("x^3 - x").unwrap(),
            Parsed::Univariate(IntPoly::from_i64(&[0, -1, 0, 1]))
        );
        match parse_poly("y^2 - (x^3 - x)").unwrap() {
            Parsed::Plane(f) => {
                assert_eq!(f.y_degree(), 2);
                assert_eq!(f.as_pure(), Some((2, IntPoly::from_i64(&[0, -1, 0, 1]))));
            }
            other => panic!("expected plane polynomial, got {other:?}"),
        }
        match parse_poly("x^^2") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn coefficient_monomials_and_errors() {
        assert_eq!(
            IntPoly::parse("3x^2 + 2x - 1").unwrap(),
            IntPoly::from_i64(&[-1, 2, 3])
        );
        assert_eq!(
            IntPoly::parse("-(x+1)^2").unwrap(),
            IntPoly::from_i64(&[-1, -2, -1])
        );
        assert_eq!(
            IntPoly::parse("2 * -x").unwrap(),
            IntPoly::from_i64(&[0, -2])
        );
        assert!(matches!(
            parse_poly("1.5x"),
            Err(Error::Syntax { offset: 1, .. })
        ));
        assert!(matches!(
            parse_poly("x/2"),
            Err(Error::Syntax { offset: 1, .. })
        ));
        assert!(matches!(
            parse_poly("2(x+1)"),
            Err(Error::Syntax { offset: 1, .. })
        ));
        assert!(matches!(
            parse_poly("x y"),
            Err(Error::Syntax { offset: 2, .. })
        ));
        assert!(matches!(
            parse_poly("(x + 1"),
            Err(Error::Syntax { offset: 6, .. })
        ));
        assert!(matches!(
            parse_poly(""),
            Err(Error::Syntax { offset: 0, .. })
        ));
        assert!(matches!(parse_poly("2y^2 + x"), Err(Error::Domain { .. })));
        assert!(matches!(parse_poly("y + x"), Err(Error::Domain { .. })));
    }

    /// Random expression trees, printed as text and evaluated directly.
    #[derive(Clone, Debug)]
    enum Expr {
        Lit(i64),
        X,
        Add(Box<Expr>, Box<Expr>),
        Sub(Box<Expr>, Box<Expr>),
        Mul(Box<Expr>, Box<Expr>),
        Pow(Box<Expr>, u32),
        Neg(Box<Expr>),
    }

    impl Expr {
        fn text(&self) -> String {
            match self {
                Expr::Lit(n) => n.to_string(),
                Expr::X => "x".into(),
                Expr::Add(a, b) => format!("({} + {})", a.text(), b.text()),
                Expr::Sub(a, b) => format!("({} - {})", a.text(), b.text()),
                Expr::Mul(a, b) => format!("{} * {}", a.text(), b.text()),
                Expr::Pow(a, e) => format!("({})^{e}", a.text()),
                Expr::Neg(a) => format!("(-{})", a.text()),
            }
        }

        fn eval(&self, n: &BigInt) -> BigInt {
            match self {
                Expr::Lit(v) => BigInt::from(*v),
                Expr::X => n.clone(),
                Expr::Add(a, b) => a.eval(n) + b.eval(n),
                Expr::Sub(a, b) => a.eval(n) - b.eval(n),
                Expr::Mul(a, b) => a.eval(n) * b.eval(n),
                Expr::Pow(a, e) => a.eval(n).pow(*e),
                Expr::Neg(a) => -a.eval(n),
            }
        }
    }

    fn expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![(0i64..50).prop_map(Expr::Lit), Just(Expr::X)];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(a.into(), b.into())),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(a.into(), b.into())),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(a.into(), b.into())),
                (inner.clone(), 0u32..4).prop_map(|(a, e)| Expr::Pow(a.into(), e)),
                inner.prop_map(|a| Expr::Neg(a.into())),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn eval_after_parse_matches_direct_arithmetic(e in expr(), n in -1000i64..1000) {
            let f = IntPoly::parse(&e.text()).unwrap();
            let n = BigInt::from(n);
            prop_assert_eq!(f.eval(&n), e.eval(&n));
        }

        #[test]
        fn printer_round_trips(c in prop::collection::vec(-20i64..20, 0..8)) {
            let f = IntPoly::from_i64(&c);
            prop_assert_eq!(IntPoly::parse(&f.to_string()).unwrap(), f);
        }

        #[test]
        fn plane_printer_round_trips(g in prop::collection::vec(-20i64..20, 1..6), a in -5i64..5, p in 2u32..5) {
            let mut terms = BTreeMap::new();
            terms.insert((0, p), BigInt::one());
            terms.insert((1, 1), BigInt::from(a));
            for (i, c) in g.iter().enumerate() {
                terms.insert((i as u32, 0), BigInt::from(*c));
            }
            let f = PlanePoly::new(terms).unwrap();
            prop_assert_eq!(PlanePoly::parse(&f.to_string()).unwrap(), f);
        }
    }
}
