//! Integer Laurent polynomials in finitely many named variables.
//!
//! Terms are stored sparsely as a map from exponent vectors to nonzero
//! `BigInt` coefficients. Two polynomials can only be combined when their
//! variable lists agree; use [`LaurentPoly::with_variables`] to align them.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Exponents = Vec<i32>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("polynomial is not divisible by the given divisor")]
    NonDivisible,
    #[error("variable {0} was assigned zero")]
    ZeroAssignment(String),
    #[error("no value assigned to variable {0}")]
    MissingAssignment(String),
    #[error("variable lists differ: {0:?} vs {1:?}")]
    VariableMismatch(Vec<String>, Vec<String>),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    vars: Vec<String>,
    terms: BTreeMap<Exponents, BigInt>,
}

impl LaurentPoly {
    pub fn zero<S: AsRef<str>>(vars: &[S]) -> Self {
        Self {
            vars: vars.iter().map(|s| s.as_ref().to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one<S: AsRef<str>>(vars: &[S]) -> Self {
        Self::constant(vars, 1)
    }

    pub fn constant<S: AsRef<str>, C: Into<BigInt>>(vars: &[S], c: C) -> Self {
        let n = vars.len();
        Self::monomial(vars, vec![0; n], c)
    }

    pub fn monomial<S: AsRef<str>, C: Into<BigInt>>(vars: &[S], exps: Exponents, c: C) -> Self {
        let mut p = Self::zero(vars);
        assert_eq!(exps.len(), p.vars.len(), "exponent vector length");
        let c = c.into();
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// The single variable `vars[i]`.
    pub fn var<S: AsRef<str>>(vars: &[S], i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, e, 1)
    }

    pub fn from_terms<S, I, C>(vars: &[S], terms: I) -> Self
    where
        S: AsRef<str>,
        I: IntoIterator<Item = (Exponents, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), p.vars.len(), "exponent vector length");
            p.add_term(e, c.into());
        }
        p
    }

    /// Univariate polynomial `sum c_k t^(lowest + k)`.
    pub fn univariate<C: Into<BigInt> + Clone>(var: &str, lowest: i32, coeffs: &[C]) -> Self {
        Self::from_terms(
            &[var],
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (vec![lowest + k as i32], c.clone())),
        )
    }

    fn add_term(&mut self, e: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[i32]) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(e, c)| c.is_one() && e.iter().all(|&x| x == 0))
    }

    /// True for `±x^v`.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().all(|c| c.abs().is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Constant term coefficient if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            if e.iter().all(|&x| x == 0) {
                return Some(c.clone());
            }
        }
        None
    }

    fn check_same_vars(&self, other: &Self) -> Result<(), LaurentError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(LaurentError::VariableMismatch(self.vars.clone(), other.vars.clone()))
        }
    }

    /// Re-express `self` over a new variable list. Every variable that
    /// actually occurs in `self` must be present in `vars`.
    pub fn with_variables<S: AsRef<str>>(&self, vars: &[S]) -> Result<Self, LaurentError> {
        let names: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            match names.iter().position(|n| n == v) {
                Some(j) => index.push(Some(j)),
                None => {
                    if self.terms.keys().any(|e| e[i] != 0) {
                        return Err(LaurentError::UnknownVariable(v.clone()));
                    }
                    index.push(None);
                }
            }
        }
        let mut out = Self::zero(&names);
        for (e, c) in &self.terms {
            let mut ne = vec![0; names.len()];
            for (i, j) in index.iter().enumerate() {
                if let Some(j) = j {
                    ne[*j] = e[i];
                }
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Rename variables positionally.
    pub fn renamed<S: AsRef<str>>(&self, vars: &[S]) -> Self {
        assert_eq!(vars.len(), self.vars.len());
        Self {
            vars: vars.iter().map(|s| s.as_ref().to_string()).collect(),
            terms: self.terms.clone(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_same_vars(other)?;
        let mut out = Self::zero(&self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale<C: Into<BigInt>>(&self, c: C) -> Self {
        let c = c.into();
        let mut out = Self::zero(&self.vars);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x * &c);
        }
        out
    }

    /// Multiply by `x^shift`.
    pub fn shift(&self, shift: &[i32]) -> Self {
        assert_eq!(shift.len(), self.vars.len());
        Self {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(&self.vars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// `p(x) -> p(x^-1)` in every variable.
    pub fn invert_variables(&self) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().map(|x| -x).collect(), c.clone()))
                .collect(),
        }
    }

    /// `p(x_1, ..., x_n) -> p(x_1^k, ..., x_n^k)`.
    pub fn substitute_powers(&self, k: i32) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().map(|x| x * k).collect(), c.clone()))
                .collect(),
        }
    }

    /// Substitute a monomial `x^img[i]` (over `target` variables) for each variable.
    pub fn substitute_monomials<S: AsRef<str>>(&self, target: &[S], img: &[Exponents]) -> Self {
        assert_eq!(img.len(), self.vars.len());
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut ne = vec![0; target.len()];
            for (k, &x) in e.iter().enumerate() {
                assert_eq!(img[k].len(), target.len());
                for (slot, y) in ne.iter_mut().zip(&img[k]) {
                    *slot += x * y;
                }
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    pub fn min_exponents(&self) -> Option<Exponents> {
        let n = self.vars.len();
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |mut acc, e| {
            for i in 0..n {
                acc[i] = acc[i].min(e[i]);
            }
            acc
        }))
    }

    pub fn max_exponents(&self) -> Option<Exponents> {
        let n = self.vars.len();
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |mut acc, e| {
            for i in 0..n {
                acc[i] = acc[i].max(e[i]);
            }
            acc
        }))
    }

    /// Multiply by the unit that makes every minimal exponent zero.
    fn shift_to_polynomial(&self) -> (Self, Exponents) {
        match self.min_exponents() {
            None => (self.clone(), vec![0; self.vars.len()]),
            Some(m) => {
                let neg: Vec<i32> = m.iter().map(|x| -x).collect();
                (self.shift(&neg), m)
            }
        }
    }

    /// Canonical representative of the unit class `{±x^v · self}`:
    /// every minimal exponent is zero and the lexicographically least
    /// monomial has a positive coefficient.
    pub fn normalize_units(&self) -> Self {
        let (p, _) = self.shift_to_polynomial();
        match p.terms.values().next() {
            Some(c) if c.is_negative() => -&p,
            _ => p,
        }
    }

    pub fn associates(&self, other: &Self) -> bool {
        self.vars == other.vars && self.normalize_units() == other.normalize_units()
    }

    /// Associates, allowing the global inversion `x -> x^-1` as well.
    pub fn associates_up_to_inversion(&self, other: &Self) -> bool {
        self.associates(other) || self.associates(&other.invert_variables())
    }

    pub fn is_inversion_symmetric(&self) -> bool {
        self.associates(&self.invert_variables())
    }

    /// The unit multiple with `max + min = 0` in every variable, if the
    /// exponent span of every variable is even.
    pub fn centered(&self) -> Option<Self> {
        let (Some(lo), Some(hi)) = (self.min_exponents(), self.max_exponents()) else {
            return Some(self.clone());
        };
        let mut shift = Vec::with_capacity(lo.len());
        for (a, b) in lo.iter().zip(&hi) {
            if (a + b) % 2 != 0 {
                return None;
            }
            shift.push(-(a + b) / 2);
        }
        Some(self.shift(&shift))
    }

    /// Symmetric representative: [`Self::centered`] when possible, otherwise
    /// the centered form of `p(x^2)`. The flag reports whether squaring was used.
    pub fn symmetric_form(&self) -> (Self, bool) {
        match self.centered() {
            Some(c) => (c, false),
            None => (
                self.substitute_powers(2)
                    .centered()
                    .expect("doubled exponents always have even span"),
                true,
            ),
        }
    }

    pub fn degree_in(&self, v: usize) -> i32 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    /// Coefficient of `x_v^d`, as a polynomial with `x_v` exponent zero.
    pub fn coeff_in(&self, v: usize, d: i32) -> Self {
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[v] == d {
                let mut ne = e.clone();
                ne[v] = 0;
                out.terms.insert(ne, c.clone());
            }
        }
        out
    }

    fn coefficients_in(&self, v: usize) -> BTreeMap<i32, Self> {
        let mut out: BTreeMap<i32, Self> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            ne[v] = 0;
            out.entry(e[v])
                .or_insert_with(|| Self::zero(&self.vars))
                .terms
                .insert(ne, c.clone());
        }
        out
    }

    /// Exact quotient in the Laurent ring.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self, LaurentError> {
        self.check_same_vars(divisor)?;
        if divisor.is_zero() {
            return Err(LaurentError::NonDivisible);
        }
        if self.is_zero() {
            return Ok(Self::zero(&self.vars));
        }
        let (p, pshift) = self.shift_to_polynomial();
        let (q, qshift) = divisor.shift_to_polynomial();
        let quot = poly_div_exact(&p, &q)?;
        let shift: Vec<i32> = pshift.iter().zip(&qshift).map(|(a, b)| a - b).collect();
        Ok(quot.shift(&shift))
    }

    /// Greatest common divisor in the Laurent ring, in [`Self::normalize_units`] form.
    pub fn gcd(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_same_vars(other)?;
        let (p, _) = self.shift_to_polynomial();
        let (q, _) = other.shift_to_polynomial();
        Ok(poly_gcd(&p, &q).normalize_units())
    }

    /// Exact evaluation at a point with nonzero integer coordinates.
    pub fn eval_integers(&self, point: &BTreeMap<String, i64>) -> Result<BigRational, LaurentError> {
        let mut vals = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            let x = *point
                .get(v)
                .ok_or_else(|| LaurentError::MissingAssignment(v.clone()))?;
            if x == 0 {
                return Err(LaurentError::ZeroAssignment(v.clone()));
            }
            vals.push(BigRational::from_integer(BigInt::from(x)));
        }
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = BigRational::from_integer(c.clone());
            for (x, &k) in vals.iter().zip(e) {
                term *= num_traits::pow::Pow::pow(x, k);
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Sum of all coefficients (evaluation at `x = 1`).
    pub fn coefficient_sum(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Text form without spaces and with implicit coefficient products,
    /// e.g. `3t-7+3t^-1`.
    pub fn to_compact_string(&self) -> String {
        self.render(true)
    }

    fn render(&self, compact: bool) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono = e
                .iter()
                .zip(&self.vars)
                .filter(|(x, _)| **x != 0)
                .map(|(x, v)| if *x == 1 { v.clone() } else { format!("{v}^{x}") })
                .join("*");
            let neg = c.is_negative();
            let abs = c.abs();
            let body = if mono.is_empty() {
                abs.to_string()
            } else if abs.is_one() {
                mono
            } else if compact {
                format!("{abs}{mono}")
            } else {
                format!("{abs}*{mono}")
            };
            match (k, neg, compact) {
                (0, true, _) => out.push('-'),
                (0, false, _) => {}
                (_, true, true) => out.push('-'),
                (_, false, true) => out.push('+'),
                (_, true, false) => out.push_str(" - "),
                (_, false, false) => out.push_str(" + "),
            }
            out.push_str(&body);
        }
        out
    }

    /// Parse over a fixed variable list.
    pub fn parse_with_vars<S: AsRef<str>>(s: &str, vars: &[S]) -> Result<Self, LaurentError> {
        let names: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        let mut parser = Parser { src: s.as_bytes(), pos: 0, vars: &names };
        let p = parser.expr()?;
        parser.skip_ws();
        if parser.pos != s.len() {
            return Err(parser.error("trailing input"));
        }
        Ok(p)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly[{}]({})", self.vars.join(","), self)
    }
}

/// Parses with the variable list taken from the identifiers in the text, sorted.
impl FromStr for LaurentPoly {
    type Err = LaurentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let vars = scan_identifiers(s);
        Self::parse_with_vars(s, &vars)
    }
}

fn scan_identifiers(s: &str) -> Vec<String> {
    let bytes = s.as_bytes();
    let mut out = std::collections::BTreeSet::new();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.insert(s[start..i].to_string());
        } else {
            i += 1;
        }
    }
    out.into_iter().collect()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> LaurentError {
        LaurentError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<LaurentPoly, LaurentError> {
        let mut acc = LaurentPoly::zero(self.vars);
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                _ if first => 1,
                _ => break,
            };
            let t = self.term()?;
            acc = if sign > 0 { &acc + &t } else { &acc - &t };
            first = false;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<LaurentPoly, LaurentError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some(c) if c.is_ascii_alphanumeric() || c == b'(' => {
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<LaurentPoly, LaurentError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.signed_int()?;
            if k >= 0 {
                return Ok(base.pow(k as u32));
            }
            if !base.is_monomial() {
                return Err(self.error("negative power of a non-monomial"));
            }
            let (e, c) = base.terms.iter().next().unwrap();
            if !c.abs().is_one() {
                return Err(self.error("negative power of a non-unit"));
            }
            let ne: Vec<i32> = e.iter().map(|x| x * k).collect();
            let nc = if c.is_negative() && k % 2 != 0 { -1 } else { 1 };
            return Ok(LaurentPoly::monomial(self.vars, ne, nc));
        }
        Ok(base)
    }

    fn signed_int(&mut self) -> Result<i32, LaurentError> {
        let mut neg = false;
        match self.peek() {
            Some(b'-') => {
                neg = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer exponent"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let v: i32 = text.parse().map_err(|_| self.error("exponent out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn atom(&mut self) -> Result<LaurentPoly, LaurentError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let n: BigInt = text.parse().map_err(|_| self.error("bad integer"))?;
                Ok(LaurentPoly::constant(self.vars, n))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let i = self
                    .vars
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| LaurentError::UnknownVariable(name.to_string()))?;
                Ok(LaurentPoly::var(self.vars, i))
            }
            _ => Err(self.error("expected a term")),
        }
    }
}

// Polynomial helpers: inputs have nonnegative exponents.

fn poly_div_exact(p: &LaurentPoly, q: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
    let (lq_e, lq_c) = q.terms.iter().next_back().expect("nonzero divisor");
    let mut rem = p.clone();
    let mut quot = LaurentPoly::zero(&p.vars);
    while let Some((le, lc)) = rem.terms.iter().next_back() {
        let e: Vec<i32> = le.iter().zip(lq_e).map(|(a, b)| a - b).collect();
        if e.iter().any(|&x| x < 0) {
            return Err(LaurentError::NonDivisible);
        }
        let (c, r) = lc.div_rem(lq_c);
        if !r.is_zero() {
            return Err(LaurentError::NonDivisible);
        }
        let m = LaurentPoly::monomial(&p.vars, e, c);
        rem = &rem - &(&m * q);
        quot = &quot + &m;
    }
    Ok(quot)
}

fn highest_var(a: &LaurentPoly, b: &LaurentPoly) -> Option<usize> {
    (0..a.nvars())
        .rev()
        .find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0)
}

fn content_in(p: &LaurentPoly, v: usize) -> LaurentPoly {
    p.coefficients_in(v)
        .values()
        .fold(LaurentPoly::zero(&p.vars), |g, c| poly_gcd(&g, c))
}

fn primitive_part(p: &LaurentPoly, v: usize) -> LaurentPoly {
    let c = content_in(p, v);
    poly_div_exact(p, &c).expect("content divides")
}

fn pseudo_rem(p: &LaurentPoly, q: &LaurentPoly, v: usize) -> LaurentPoly {
    let dq = q.degree_in(v);
    let lcq = q.coeff_in(v, dq);
    let mut r = p.clone();
    while !r.is_zero() && r.degree_in(v) >= dq {
        let dr = r.degree_in(v);
        let lcr = r.coeff_in(v, dr);
        let mut shift = vec![0; r.nvars()];
        shift[v] = dr - dq;
        r = &(&r * &lcq) - &(&lcr * &q.shift(&shift));
    }
    r
}

fn poly_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let Some(v) = highest_var(a, b) else {
        let g = a.as_constant().unwrap().gcd(&b.as_constant().unwrap());
        return LaurentPoly::constant(&a.vars, g);
    };
    if a.degree_in(v) == 0 {
        return poly_gcd(a, &content_in(b, v));
    }
    if b.degree_in(v) == 0 {
        return poly_gcd(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = poly_gcd(&ca, &cb);
    let mut p = poly_div_exact(a, &ca).expect("content divides");
    let mut q = poly_div_exact(b, &cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        let r = pseudo_rem(&p, &q, v);
        p = q;
        q = if r.is_zero() { r } else { primitive_part(&r, v) };
    }
    &c * &primitive_part(&p, v)
}

macro_rules! impl_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a> $tr<&'a LaurentPoly> for &'a LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &'a LaurentPoly) -> LaurentPoly {
                self.$checked(rhs).expect("operands must share a variable list")
            }
        }
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}

impl_binop!(Add, add, checked_add);
impl_binop!(Sub, sub, checked_sub);
impl_binop!(Mul, mul, checked_mul);

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, vars: &[&str]) -> LaurentPoly {
        LaurentPoly::parse_with_vars(s, vars).unwrap()
    }

    #[test]
    fn ring_examples() {
        let t = ["t"];
        let a = p("1 - t", &t);
        assert_eq!(&a * &LaurentPoly::one(&t), a);
        assert_eq!(&a * &p("1 - t^-1", &t), p("2 - t - t^-1", &t));

        let v = ["t1", "t2"];
        let q = p("t1^2*t2^2 - 1", &v).exact_div(&p("t1*t2 - 1", &v)).unwrap();
        assert_eq!(q, p("t1*t2 + 1", &v));
    }

    #[test]
    fn exact_div_rejects_remainder() {
        let t = ["t"];
        assert_eq!(
            p("t^2 + 1", &t).exact_div(&p("t - 1", &t)),
            Err(LaurentError::NonDivisible)
        );
        assert_eq!(p("3*t", &t).exact_div(&p("2", &t)), Err(LaurentError::NonDivisible));
        assert_eq!(p("t^3 - t^-1", &t).exact_div(&p("t^2 + 1", &t)).unwrap(), p("t - t^-1", &t));
    }

    #[test]
    fn normalize_examples() {
        let t = ["t"];
        assert_eq!(p("t - 3 + t^-1", &t).normalize_units(), p("t^2 - 3t + 1", &t));
        let v = ["t1", "t2"];
        assert_eq!(
            p("-t1*t2 - t1^-1*t2^-1", &v).normalize_units(),
            p("t1^2*t2^2 + 1", &v)
        );
        assert!(LaurentPoly::zero(&t).normalize_units().is_zero());
    }

    #[test]
    fn gcd_examples() {
        let t = ["t"];
        let x = p("t^2 - 3 + t^-1", &t);
        assert_eq!(x.gcd(&LaurentPoly::zero(&t)).unwrap(), x.normalize_units());
        assert_eq!(p("t^2 - 1", &t).gcd(&p("t^3 - 1", &t)).unwrap(), p("t - 1", &t).normalize_units());
        let v = ["t1", "t2"];
        assert!(p("t1*t2 - 1", &v).gcd(&p("t1 - 1", &v)).unwrap().is_one());
        assert!(LaurentPoly::zero(&v).gcd(&LaurentPoly::zero(&v)).unwrap().is_zero());
    }

    #[test]
    fn gcd_multivariate_common_factor() {
        let v = ["x", "y", "z"];
        let f = p("x*y - z + 2", &v);
        let a = &f * &p("x + y^2*z - 1", &v);
        let b = &f * &p("3*x*z + y", &v);
        assert_eq!(a.gcd(&b).unwrap(), f.normalize_units());
        let c = p("6*x^2 - 6", &v);
        let d = p("4*x + 4", &v);
        assert_eq!(c.gcd(&d).unwrap(), p("2*x + 2", &v));
    }

    #[test]
    fn eval_examples() {
        let t = ["t"];
        let pt: BTreeMap<String, i64> = [("t".to_string(), 1)].into();
        assert_eq!(p("t - 3 + t^-1", &t).eval_integers(&pt).unwrap(), BigRational::from_integer((-1).into()));
        assert!(LaurentPoly::zero(&t).eval_integers(&pt).unwrap().is_zero());
        let v = ["t1", "t2"];
        let pt2: BTreeMap<String, i64> = [("t1".to_string(), 1), ("t2".to_string(), 1)].into();
        assert_eq!(p("t1*t2 + t1^-1*t2^-1", &v).eval_integers(&pt2).unwrap(), BigRational::from_integer(2.into()));
        let half: BTreeMap<String, i64> = [("t".to_string(), 2)].into();
        assert_eq!(
            p("t^-1", &t).eval_integers(&half).unwrap(),
            BigRational::new(1.into(), 2.into())
        );
        let zero: BTreeMap<String, i64> = [("t".to_string(), 0)].into();
        assert_eq!(p("t", &t).eval_integers(&zero), Err(LaurentError::ZeroAssignment("t".into())));
    }

    #[test]
    fn display_and_parse() {
        let v = ["t1", "t2"];
        let x = p("3*t1^2*t2^-1 - 1", &v);
        assert_eq!(x.to_string(), "3*t1^2*t2^-1 - 1");
        assert_eq!(p("t - 3 + t^-1", &["t"]).to_string(), "t - 3 + t^-1");
        assert_eq!(p("3t - 7 + 3t^-1", &["t"]).to_compact_string(), "3t-7+3t^-1");
        assert_eq!("3t-7+3t^-1".parse::<LaurentPoly>().unwrap(), p("3*t - 7 + 3*t^-1", &["t"]));
        assert_eq!(p("-(t-1)^2", &["t"]).to_string(), "-t^2 + 2*t - 1");
        assert!(LaurentPoly::parse_with_vars("t +", &["t"]).is_err());
        assert!(LaurentPoly::parse_with_vars("u", &["t"]).is_err());
        assert!(LaurentPoly::parse_with_vars("(t+1)^-1", &["t"]).is_err());
    }

    #[test]
    fn symmetric_forms() {
        let t = ["t"];
        assert_eq!(p("t^2 - 3t + 1", &t).symmetric_form(), (p("t - 3 + t^-1", &t), false));
        let v = ["t1", "t2"];
        assert_eq!(p("1 + t1*t2", &v).symmetric_form(), (p("t1*t2 + t1^-1*t2^-1", &v), true));
    }
}
