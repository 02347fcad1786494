//! Exact coefficient arithmetic.
//!
//! [`QSqrt2`] is the field Q(√2); every structure constant, tensor entry and
//! form coefficient lives there. [`ScalarExpr`] is an α-linear Laurent
//! polynomial in ℓ with `QSqrt2` coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = Ratio<i128>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("product of two alpha-dependent terms ({0} and {1}) is not alpha-linear")]
    NonLinearAlpha(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
}

pub fn rat(n: i128, d: i128) -> Rational {
    Ratio::new(n, d)
}

pub fn parse_rational(s: &str) -> Result<Rational, ScalarError> {
    let s = s.trim();
    let err = || ScalarError::Parse(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i128 = n.trim().parse().map_err(|_| err())?;
            let d: i128 = d.trim().parse().map_err(|_| err())?;
            if d == 0 {
                return Err(err());
            }
            Ok(Ratio::new(n, d))
        }
        None => Ok(Ratio::from_integer(s.parse().map_err(|_| err())?)),
    }
}

/// `r + s·√2` with rational `r`, `s`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QSqrt2 {
    pub r: Rational,
    pub s: Rational,
}

impl QSqrt2 {
    pub const fn from_rational(r: Rational) -> Self {
        QSqrt2 { r, s: Ratio::new_raw(0, 1) }
    }
    pub fn int(n: i128) -> Self {
        Self::from_rational(Ratio::from_integer(n))
    }
    pub fn frac(n: i128, d: i128) -> Self {
        Self::from_rational(Ratio::new(n, d))
    }
    pub fn sqrt2() -> Self {
        QSqrt2 { r: Rational::zero(), s: Rational::one() }
    }
    pub fn is_rational(&self) -> bool {
        self.s.is_zero()
    }
    pub fn conj(&self) -> Self {
        QSqrt2 { r: self.r, s: -self.s }
    }
    /// `r² − 2s²`
    pub fn norm(&self) -> Rational {
        self.r * self.r - Rational::from_integer(2) * self.s * self.s
    }
    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if self.is_rational() {
            return Ok(Self::from_rational(self.r.recip()));
        }
        let n = self.norm();
        Ok(QSqrt2 { r: self.r / n, s: -self.s / n })
    }
    /// Sign in the real embedding √2 > 0.
    /// Largest absolute numerator or denominator of the two parts.
    pub fn height(&self) -> i128 {
        [self.r, self.s].iter().map(|x| x.numer().abs().max(*x.denom())).max().unwrap_or(0)
    }

    pub fn signum(&self) -> i32 {
        let sr = sign_of(&self.r);
        let ss = sign_of(&self.s);
        if ss == 0 {
            return sr;
        }
        if sr == 0 || sr == ss {
            return ss;
        }
        // opposite signs: compare r² with 2s²
        match (self.r * self.r).cmp(&(Rational::from_integer(2) * self.s * self.s)) {
            Ordering::Greater => sr,
            Ordering::Less => ss,
            Ordering::Equal => 0,
        }
    }
}

fn sign_of(x: &Rational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

impl Zero for QSqrt2 {
    fn zero() -> Self {
        QSqrt2 { r: Rational::zero(), s: Rational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero()
    }
}

impl One for QSqrt2 {
    fn one() -> Self {
        Self::int(1)
    }
}

impl From<Rational> for QSqrt2 {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl From<i64> for QSqrt2 {
    fn from(n: i64) -> Self {
        Self::int(n as i128)
    }
}

impl Add for QSqrt2 {
    type Output = QSqrt2;
    fn add(self, o: QSqrt2) -> QSqrt2 {
        QSqrt2 { r: self.r + o.r, s: self.s + o.s }
    }
}
impl Sub for QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, o: QSqrt2) -> QSqrt2 {
        QSqrt2 { r: self.r - o.r, s: self.s - o.s }
    }
}
impl Neg for QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2 { r: -self.r, s: -self.s }
    }
}
impl Mul for QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, o: QSqrt2) -> QSqrt2 {
        if self.s.is_zero() && o.s.is_zero() {
            return Self::from_rational(self.r * o.r);
        }
        let two = Rational::from_integer(2);
        QSqrt2 {
            r: self.r * o.r + two * self.s * o.s,
            s: self.r * o.s + self.s * o.r,
        }
    }
}
#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for QSqrt2 {
    type Output = QSqrt2;
    fn div(self, o: QSqrt2) -> QSqrt2 {
        self * o.inv().expect("division by zero in Q(sqrt2)")
    }
}
impl AddAssign for QSqrt2 {
    fn add_assign(&mut self, o: QSqrt2) {
        *self = *self + o;
    }
}
impl SubAssign for QSqrt2 {
    fn sub_assign(&mut self, o: QSqrt2) {
        *self = *self - o;
    }
}

fn fmt_rat(r: &Rational) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QSqrt2 {
    /// `p/q`, `p/q*sqrt2` or `p/q+p'/q'*sqrt2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.r.is_zero(), self.s.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rat(&self.r)),
            (true, false) => write!(f, "{}*sqrt2", fmt_rat(&self.s)),
            (false, false) => {
                let sign = if self.s.is_negative() { "" } else { "+" };
                write!(f, "{}{}{}*sqrt2", fmt_rat(&self.r), sign, fmt_rat(&self.s))
            }
        }
    }
}

impl fmt::Debug for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for QSqrt2 {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, ScalarError> {
        let t = s.trim();
        let Some(body) = t.strip_suffix("*sqrt2") else {
            return Ok(Self::from_rational(parse_rational(t)?));
        };
        // split off the rational part at the last top-level sign
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(i, c)| (c == '+' || c == '-') && !body[..i].ends_with('/'))
            .map(|(i, _)| i)
            .last();
        match split {
            Some(i) => {
                let r = parse_rational(&body[..i])?;
                let sp = body[i..].trim_start_matches('+');
                Ok(QSqrt2 { r, s: parse_rational(sp)? })
            }
            None => Ok(QSqrt2 { r: Rational::zero(), s: parse_rational(body)? }),
        }
    }
}

/// Key of one [`ScalarExpr`] term: optional α index and power of ℓ.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TermKey {
    pub alpha: Option<u8>,
    pub ell_pow: i32,
}

/// Sum of `coeff · α_i^{0|1} · ℓ^p` terms, sorted by key, zero terms pruned.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct ScalarExpr {
    terms: Vec<(TermKey, QSqrt2)>,
}

impl ScalarExpr {
    pub fn zero() -> Self {
        ScalarExpr { terms: Vec::new() }
    }
    pub fn one() -> Self {
        Self::constant(QSqrt2::one())
    }
    pub fn constant(c: QSqrt2) -> Self {
        Self::term(None, 0, c)
    }
    pub fn rational(n: i128, d: i128) -> Self {
        Self::constant(QSqrt2::frac(n, d))
    }
    pub fn int(n: i128) -> Self {
        Self::constant(QSqrt2::int(n))
    }
    pub fn alpha(i: u8) -> Self {
        Self::term(Some(i), 0, QSqrt2::one())
    }
    pub fn ell(p: i32) -> Self {
        Self::term(None, p, QSqrt2::one())
    }
    pub fn term(alpha: Option<u8>, ell_pow: i32, c: QSqrt2) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ScalarExpr { terms: vec![(TermKey { alpha, ell_pow }, c)] }
    }
    pub fn from_terms(it: impl IntoIterator<Item = (TermKey, QSqrt2)>) -> Self {
        let mut v: Vec<(TermKey, QSqrt2)> = it.into_iter().collect();
        v.sort_by_key(|t| t.0);
        let mut out: Vec<(TermKey, QSqrt2)> = Vec::with_capacity(v.len());
        for (k, c) in v {
            match out.last_mut() {
                Some((lk, lc)) if *lk == k => *lc += c,
                _ => out.push((k, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        ScalarExpr { terms: out }
    }
    pub fn terms(&self) -> &[(TermKey, QSqrt2)] {
        &self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn has_alpha(&self) -> bool {
        self.terms.iter().any(|(k, _)| k.alpha.is_some())
    }
    /// The constant part if the expression is a plain number.
    pub fn as_constant(&self) -> Option<QSqrt2> {
        match self.terms.as_slice() {
            [] => Some(QSqrt2::zero()),
            [(TermKey { alpha: None, ell_pow: 0 }, c)] => Some(*c),
            _ => None,
        }
    }
    pub fn scale(&self, c: QSqrt2) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ScalarExpr { terms: self.terms.iter().map(|(k, v)| (*k, *v * c)).collect() }
    }

    pub fn try_mul(&self, o: &ScalarExpr) -> Result<ScalarExpr, ScalarError> {
        if let Some(c) = o.as_constant() {
            return Ok(self.scale(c));
        }
        if let Some(c) = self.as_constant() {
            return Ok(o.scale(c));
        }
        let mut v = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (ka, ca) in &self.terms {
            for (kb, cb) in &o.terms {
                let alpha = match (ka.alpha, kb.alpha) {
                    (Some(_), Some(_)) => {
                        return Err(ScalarError::NonLinearAlpha(self.to_string(), o.to_string()))
                    }
                    (a, None) | (None, a) => a,
                };
                v.push((TermKey { alpha, ell_pow: ka.ell_pow + kb.ell_pow }, *ca * *cb));
            }
        }
        Ok(Self::from_terms(v))
    }

    /// Substitutes each α_i by `map[i]` (which must be α-free or α-linear).
    pub fn substitute_alphas(&self, map: &[ScalarExpr]) -> ScalarExpr {
        let mut acc = ScalarExpr::zero();
        for (k, c) in &self.terms {
            let base = ScalarExpr::term(None, k.ell_pow, *c);
            match k.alpha {
                None => acc += &base,
                Some(i) => {
                    let m = map
                        .get(i as usize)
                        .unwrap_or_else(|| panic!("no substitution for alpha_{i}"));
                    acc += &(&base * m);
                }
            }
        }
        acc
    }

    /// Splits into components by α index, each α-free.
    pub fn alpha_components(&self) -> Vec<(Option<u8>, ScalarExpr)> {
        let mut out: Vec<(Option<u8>, ScalarExpr)> = Vec::new();
        for (k, c) in &self.terms {
            let t = (TermKey { alpha: None, ell_pow: k.ell_pow }, *c);
            match out.last_mut() {
                Some((a, e)) if *a == k.alpha => e.terms.push(t),
                _ => out.push((k.alpha, ScalarExpr { terms: vec![t] })),
            }
        }
        out
    }

    /// `s` with `self = s · other`, when `s` is a single `c·ℓ^p` term.
    pub fn ratio(&self, other: &ScalarExpr) -> Option<ScalarExpr> {
        let (ka, ca) = self.terms.first()?;
        let (kb, cb) = other.terms.first()?;
        if ka.alpha != kb.alpha {
            return None;
        }
        let s = ScalarExpr::term(None, ka.ell_pow - kb.ell_pow, *ca / *cb);
        if &(&s * other) == self {
            Some(s)
        } else {
            None
        }
    }
}

impl From<QSqrt2> for ScalarExpr {
    fn from(c: QSqrt2) -> Self {
        ScalarExpr::constant(c)
    }
}

impl Add<&ScalarExpr> for &ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, o: &ScalarExpr) -> ScalarExpr {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            let (ka, ca) = self.terms[i];
            let (kb, cb) = o.terms[j];
            match ka.cmp(&kb) {
                Ordering::Less => {
                    out.push((ka, ca));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((kb, cb));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = ca + cb;
                    if !c.is_zero() {
                        out.push((ka, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&o.terms[j..]);
        ScalarExpr { terms: out }
    }
}

impl Add for ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, o: ScalarExpr) -> ScalarExpr {
        &self + &o
    }
}

impl AddAssign<&ScalarExpr> for ScalarExpr {
    fn add_assign(&mut self, o: &ScalarExpr) {
        if o.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = o.clone();
            return;
        }
        *self = &*self + o;
    }
}

impl SubAssign<&ScalarExpr> for ScalarExpr {
    fn sub_assign(&mut self, o: &ScalarExpr) {
        *self += &-o;
    }
}

impl Neg for &ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        ScalarExpr { terms: self.terms.iter().map(|(k, c)| (*k, -*c)).collect() }
    }
}

impl Neg for ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        -&self
    }
}

impl Sub<&ScalarExpr> for &ScalarExpr {
    type Output = ScalarExpr;
    fn sub(self, o: &ScalarExpr) -> ScalarExpr {
        self + &-o
    }
}

impl Sub for ScalarExpr {
    type Output = ScalarExpr;
    fn sub(self, o: ScalarExpr) -> ScalarExpr {
        &self - &o
    }
}

impl Mul<&ScalarExpr> for &ScalarExpr {
    type Output = ScalarExpr;
    /// Panics when both factors depend on α.
    fn mul(self, o: &ScalarExpr) -> ScalarExpr {
        self.try_mul(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, o: ScalarExpr) -> ScalarExpr {
        &self * &o
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (k, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            if let Some(a) = k.alpha {
                write!(f, "*a{a}")?;
            }
            if k.ell_pow != 0 {
                write!(f, "*l^{}", k.ell_pow)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Least common multiple of the denominators of all rational parts.
pub fn common_denominator(xs: impl IntoIterator<Item = QSqrt2>) -> i128 {
    xs.into_iter()
        .fold(1i128, |acc, x| acc.lcm(x.r.denom()).lcm(x.s.denom()))
}
