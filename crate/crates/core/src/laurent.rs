//! Exact multivariate Laurent polynomials with integer coefficients.
//!
//! One engine serves both one-variable Alexander polynomials and
//! Seiberg-Witten group-ring elements, whose monomials are exponent vectors
//! over a basis of second cohomology.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// A Laurent monomial: a finite map from variable name to a nonzero exponent.
///
/// The empty map is the unit monomial.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Monomial(BTreeMap<String, i64>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(name: &str, exponent: i64) -> Self {
        let mut m = Monomial::one();
        m.set(name, exponent);
        m
    }

    pub fn from_exponents<'a, I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (&'a str, i64)>,
    {
        let mut m = Monomial::one();
        for (v, e) in pairs {
            let cur = m.exponent(v);
            m.set(v, cur + e);
        }
        m
    }

    fn set(&mut self, name: &str, exponent: i64) {
        if exponent == 0 {
            self.0.remove(name);
        } else {
            self.0.insert(name.to_string(), exponent);
        }
    }

    pub fn exponent(&self, name: &str) -> i64 {
        self.0.get(name).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> i64 {
        self.0.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, i64)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.clone();
        for (v, e) in other.iter() {
            let cur = out.exponent(v);
            out.set(v, cur + e);
        }
        out
    }

    pub fn pow(&self, k: i64) -> Monomial {
        Monomial(self.0.iter().filter(|_| k != 0).map(|(v, &e)| (v.clone(), e * k)).collect())
    }

    pub fn inverse(&self) -> Monomial {
        self.pow(-1)
    }

    /// Removes `name` from the monomial, returning its exponent.
    fn take(&mut self, name: &str) -> i64 {
        self.0.remove(name).unwrap_or(0)
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then exponents compared
    /// variable by variable in name order.
    fn cmp(&self, other: &Self) -> Ordering {
        let by_degree = self.total_degree().cmp(&other.total_degree());
        if by_degree != Ordering::Equal {
            return by_degree;
        }
        let mut a = self.0.iter().peekable();
        let mut b = other.0.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                (Some((va, &ea)), Some((vb, &eb))) => match va.cmp(vb) {
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        a.next();
                        b.next();
                    }
                    Ordering::Less => return ea.cmp(&0),
                    Ordering::Greater => return 0.cmp(&eb),
                },
                (Some((_, &ea)), None) => return ea.cmp(&0),
                (None, Some((_, &eb))) => return 0.cmp(&eb),
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (i, (v, e)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{}", v)?;
            } else {
                write!(f, "{}^{}", v, e)?;
            }
        }
        Ok(())
    }
}

/// A Laurent polynomial in canonical form: no zero coefficients are stored,
/// so equal polynomials have identical term maps.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        LaurentPoly::term(Monomial::one(), BigInt::from(c))
    }

    pub fn var(name: &str) -> Self {
        LaurentPoly::term(Monomial::var(name, 1), BigInt::one())
    }

    pub fn term(m: Monomial, c: BigInt) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigInt)>,
    {
        let mut p = LaurentPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Shorthand for one-variable polynomials: `[(exponent, coefficient)]`.
    pub fn univariate(var: &str, terms: &[(i64, i64)]) -> Self {
        LaurentPoly::from_terms(
            terms
                .iter()
                .map(|&(e, c)| (Monomial::var(var, e), BigInt::from(c))),
        )
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == LaurentPoly::one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    /// Terms in printing order (descending graded-lex).
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter().rev()
    }

    pub fn variables(&self) -> Vec<String> {
        let mut vars: Vec<String> = self
            .terms
            .keys()
            .flat_map(|m| m.iter().map(|(v, _)| v.to_string()))
            .collect();
        vars.sort();
        vars.dedup();
        vars
    }

    pub fn max_exponent(&self, var: &str) -> Option<i64> {
        self.terms.keys().map(|m| m.exponent(var)).max()
    }

    pub fn min_exponent(&self, var: &str) -> Option<i64> {
        self.terms.keys().map(|m| m.exponent(var)).min()
    }

    pub fn scale_monomial(&self, m: &Monomial) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())))
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        (0..k).fold(LaurentPoly::one(), |acc, _| &acc * self)
    }

    /// Replaces every occurrence of `var^k` by `m^k`.
    pub fn substitute(&self, var: &str, m: &Monomial) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms.iter().map(|(k, c)| {
            let mut rest = k.clone();
            let e = rest.take(var);
            (rest.mul(&m.pow(e)), c.clone())
        }))
    }

    /// Sum of all coefficients, i.e. the value with every variable set to 1.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// True iff the coefficient of `m^-1` equals `(-1)^parity` times the
    /// coefficient of `m` for every monomial `m`.
    pub fn is_symmetric(&self, parity: i64) -> bool {
        let odd = parity.rem_euclid(2) == 1;
        self.terms.iter().all(|(m, c)| {
            let mirrored = self.coeff(&m.inverse());
            if odd {
                mirrored == -c
            } else {
                mirrored == *c
            }
        })
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $f(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$f(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({})", self)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms_desc(), |f, m| write!(f, "{}", m))
    }
}

/// Writes `terms` as a signed sum, delegating monomials to `mono`.
/// Unit coefficients in front of a non-unit monomial are elided.
pub(crate) fn write_terms<'a, I, F>(f: &mut fmt::Formatter<'_>, terms: I, mut mono: F) -> fmt::Result
where
    I: Iterator<Item = (&'a Monomial, &'a BigInt)>,
    F: FnMut(&mut fmt::Formatter<'_>, &Monomial) -> fmt::Result,
{
    let mut first = true;
    for (m, c) in terms {
        let neg = c.is_negative();
        match (first, neg) {
            (true, true) => write!(f, "-")?,
            (true, false) => {}
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
        }
        first = false;
        let abs = c.abs();
        if m.is_one() {
            write!(f, "{}", abs)?;
        } else {
            if !abs.is_one() {
                write!(f, "{}*", abs)?;
            }
            mono(f, m)?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl FromStr for LaurentPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Parser::new(s).parse()
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    src: String,
}

impl Parser {
    fn new(src: &str) -> Self {
        Parser {
            tokens: Vec::new(),
            pos: 0,
            src: src.to_string(),
        }
    }

    fn err(&self, at: usize, msg: &str) -> Error {
        Error::Parse(format!("polynomial {:?}, column {}: {}", self.src, at + 1, msg))
    }

    fn lex(&mut self) -> Result<()> {
        let bytes: Vec<char> = self.src.chars().collect();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            let start = i;
            let tok = match c {
                ' ' | '\t' | '\n' => {
                    i += 1;
                    continue;
                }
                '+' => Token::Plus,
                '-' => Token::Minus,
                '*' => Token::Star,
                '^' => Token::Caret,
                '0'..='9' => {
                    while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                        i += 1;
                    }
                    let digits: String = bytes[start..=i].iter().collect();
                    Token::Int(digits.parse().map_err(|_| self.err(start, "bad integer"))?)
                }
                c if c.is_ascii_alphabetic() => {
                    while i + 1 < bytes.len()
                        && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == '_')
                    {
                        i += 1;
                    }
                    Token::Ident(bytes[start..=i].iter().collect())
                }
                other => return Err(self.err(start, &format!("unexpected character {:?}", other))),
            };
            self.tokens.push((start, tok));
            i += 1;
        }
        Ok(())
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn at(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or(self.src.len())
    }

    fn parse(mut self) -> Result<LaurentPoly> {
        self.lex()?;
        if self.tokens.is_empty() {
            return Err(self.err(0, "empty polynomial"));
        }
        let mut out = LaurentPoly::zero();
        let mut sign = match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                -1
            }
            Some(Token::Plus) => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let (m, c) = self.term()?;
            out.add_term(m, c * sign);
            match self.peek() {
                None => break,
                Some(Token::Plus) => sign = 1,
                Some(Token::Minus) => sign = -1,
                Some(_) => return Err(self.err(self.at(), "expected '+' or '-'")),
            }
            self.pos += 1;
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Monomial, BigInt)> {
        let mut coeff = BigInt::one();
        let mut mono = Monomial::one();
        loop {
            match self.peek().cloned() {
                Some(Token::Int(n)) => {
                    self.pos += 1;
                    coeff *= n;
                }
                Some(Token::Ident(name)) => {
                    self.pos += 1;
                    let mut e = 1i64;
                    if self.peek() == Some(&Token::Caret) {
                        self.pos += 1;
                        let neg = match self.peek() {
                            Some(Token::Minus) => {
                                self.pos += 1;
                                true
                            }
                            _ => false,
                        };
                        match self.peek().cloned() {
                            Some(Token::Int(n)) => {
                                self.pos += 1;
                                let v: i64 = n
                                    .try_into()
                                    .map_err(|_| self.err(self.at(), "exponent out of range"))?;
                                e = if neg { -v } else { v };
                            }
                            _ => return Err(self.err(self.at(), "expected integer exponent")),
                        }
                    }
                    mono = mono.mul(&Monomial::var(&name, e));
                }
                _ => return Err(self.err(self.at(), "expected coefficient or variable")),
            }
            match self.peek() {
                Some(Token::Star) => self.pos += 1,
                // juxtaposition, as in `2t` or `A^2 B^-1`
                Some(Token::Int(_) | Token::Ident(_)) => {}
                _ => return Ok((mono, coeff)),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(&p("1") + &LaurentPoly::zero(), p("1"));
        assert_eq!(&p("t - 1") + &p("1 + t^-1"), p("t + t^-1"));
        let tref = p("t - 1 + t^-1");
        assert_eq!(&tref + &tref, p("2*t - 2 + 2*t^-1"));
    }

    #[test]
    fn mul_examples() {
        let tref = p("t - 1 + t^-1");
        assert_eq!(&tref * &LaurentPoly::one(), tref);
        assert_eq!(&tref * &tref, p("t^2 - 2*t + 3 - 2*t^-1 + t^-2"));
        assert_eq!(&p("T^2") * &p("T^-2"), LaurentPoly::one());
    }

    #[test]
    fn substitute_examples() {
        let tref = p("t - 1 + t^-1");
        assert_eq!(tref.substitute("t", &Monomial::var("u", 2)), p("u^2 - 1 + u^-2"));
        assert_eq!(LaurentPoly::one().substitute("t", &Monomial::var("u", 2)), LaurentPoly::one());
        assert_eq!(p("t + t^-1").substitute("t", &Monomial::one()), p("2"));
    }

    #[test]
    fn symmetry_examples() {
        assert!(p("t - 1 + t^-1").is_symmetric(0));
        assert!(p("t - t^-1").is_symmetric(1));
        assert!(!p("t + 2*t^-1").is_symmetric(0));
        // A nonzero constant term can never be antisymmetric.
        assert!(!p("t - 1 - t^-1").is_symmetric(1));
    }

    #[test]
    fn printing_is_graded_lex_descending() {
        assert_eq!(p("t^-1 + 1 + t").to_string(), "t + 1 + t^-1");
        assert_eq!(p("3*t^2 - 2*t^-1 + 1").to_string(), "3*t^2 + 1 - 2*t^-1");
        assert_eq!(p("-t + 3 - t^-1").to_string(), "-t + 3 - t^-1");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(p("x*y^2 - y*x").to_string(), "x*y^2 - x*y");
    }

    #[test]
    fn parse_errors() {
        assert!("".parse::<LaurentPoly>().is_err());
        assert!("t^".parse::<LaurentPoly>().is_err());
        assert!("t + ".parse::<LaurentPoly>().is_err());
        assert!("t $ 1".parse::<LaurentPoly>().is_err());
        assert!("t ^ ^ 2".parse::<LaurentPoly>().is_err());
        assert_eq!(p("t t"), p("t^2"));
        assert_eq!(p("2t - 3 + 2 t^-1"), p("2*t - 3 + 2*t^-1"));
    }

    #[test]
    fn zero_coefficients_are_not_stored() {
        let q = p("t - t + 0*u");
        assert!(q.is_zero());
        assert_eq!(q.len(), 0);
    }

    #[test]
    fn monomial_order_is_total_and_graded() {
        let a = Monomial::var("t", 1);
        let b = Monomial::var("u", 1);
        assert!(a > Monomial::one());
        assert!(Monomial::one() > Monomial::var("t", -1));
        assert_ne!(a.cmp(&b), Ordering::Equal);
        assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
    }
}
