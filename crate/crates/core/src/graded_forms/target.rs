//! Symbolic Lagrangians in the curvature basis, expanded over concrete
//! Lorentz indices.
//!
//! A target file holds directives and terms, one per line:
//!
//! ```text
//! # comment
//! dim 5
//! RRe: 3/4 * (a0+a1) * l^-1 | eps_abcde R^ab R^cd e^e
//! ```
//!
//! The coefficient is a product of rationals, `aN`, `l^p`, `sqrt2` and
//! parenthesized sums. Factors are `eps`, `R`, `T`, `Dk`, `Dh`, `w`, `e`,
//! `k`, `h` and `dw`, `de`, `dk`, `dh`, each followed by index groups `^…`
//! or `_…` in slot order (`k^e_f` is `k^{e}{}_{f}`). Letters are summed
//! over `0..dim`, digits are fixed. Fields carry upper indices and `eps`
//! lower ones, with `ε_{01…} = +1`; the other position costs a factor
//! `η_{ii}`, `η = diag(−1, +1, …)`.
//!
//! Definitions used for the composite factors:
//! `R^{ab} = dω^{ab} + ω^a_c ω^{cb}`, `T^a = de^a + ω^a_c e^c`,
//! `Dk^{ab} = dk^{ab} + ω^a_c k^{cb} + ω^b_c k^{ac}`, `Dh^a = dh^a + ω^a_c h^c`.

use std::collections::HashMap;

use itertools::Itertools;
use rayon::prelude::*;

use super::{wedge, Field, FormSymbol, ScalarForm};
use crate::error::{Error, Result};
use crate::invariant_tensor::levi_civita;
use crate::lie_algebra::metric;
use crate::scalar::{parse_rational, QSqrt2, ScalarExpr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FactorKind {
    Eps,
    Curvature,
    Torsion,
    Dk,
    Dh,
    Field(Field),
    DField(Field),
}

impl FactorKind {
    fn parse(name: &str) -> Option<FactorKind> {
        Some(match name {
            "eps" => FactorKind::Eps,
            "R" => FactorKind::Curvature,
            "T" => FactorKind::Torsion,
            "Dk" => FactorKind::Dk,
            "Dh" => FactorKind::Dh,
            _ => match name.strip_prefix('d') {
                Some(f) => FactorKind::DField(field_of(f)?),
                None => FactorKind::Field(field_of(name)?),
            },
        })
    }
    fn arity(self) -> Option<usize> {
        match self {
            FactorKind::Eps => None,
            FactorKind::Curvature | FactorKind::Dk => Some(2),
            FactorKind::Torsion | FactorKind::Dh => Some(1),
            FactorKind::Field(f) | FactorKind::DField(f) => Some(if f.is_pair() { 2 } else { 1 }),
        }
    }
    fn canonical_upper(self) -> bool {
        self != FactorKind::Eps
    }
}

fn field_of(s: &str) -> Option<Field> {
    match s {
        "w" => Some(Field::Omega),
        "e" => Some(Field::E),
        "k" => Some(Field::K),
        "h" => Some(Field::H),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Index {
    Var(char),
    Fixed(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub kind: FactorKind,
    /// `(index, upper)` in slot order.
    pub indices: Vec<(Index, bool)>,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetTerm {
    pub label: String,
    pub coeff: ScalarExpr,
    pub factors: Vec<Factor>,
    pub line: usize,
}

impl TargetTerm {
    pub fn factors_text(&self) -> String {
        self.factors.iter().map(|f| f.text.as_str()).join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Target {
    pub dim: usize,
    pub terms: Vec<TargetTerm>,
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

pub fn parse_target(src: &str) -> Result<Target> {
    let mut dim = None;
    let mut terms = Vec::new();
    for (ln, raw) in src.lines().enumerate() {
        let line = ln + 1;
        let text = raw.split('#').next().unwrap_or("");
        if text.trim().is_empty() {
            continue;
        }
        if let Some(rest) = text.trim_start().strip_prefix("dim ") {
            let d: usize = rest.trim().parse().map_err(|_| perr(line, 1, "bad dimension"))?;
            if !(2..=9).contains(&d) {
                return Err(perr(line, 1, format!("dimension {d} out of range")));
            }
            dim = Some(d);
            continue;
        }
        let Some(bar) = text.find('|') else {
            return Err(perr(line, 1, "expected `coefficient | factors`"));
        };
        let (head, factors_src) = (&text[..bar], &text[bar + 1..]);
        let (label, coeff_src, coeff_col) = match head.find(':') {
            Some(c) => (head[..c].trim().to_string(), &head[c + 1..], c + 2),
            None => (format!("line{line}"), head, 1),
        };
        let coeff = CoeffParser { s: coeff_src.as_bytes(), pos: 0, line, col0: coeff_col }.parse()?;
        let factors = parse_factors(factors_src, line, bar + 2)?;
        if factors.is_empty() {
            return Err(perr(line, bar + 2, "no factors"));
        }
        terms.push(TargetTerm { label, coeff, factors, line });
    }
    let dim = dim.ok_or_else(|| perr(1, 1, "missing `dim` directive"))?;
    for t in &terms {
        check_term(t, dim)?;
    }
    Ok(Target { dim, terms })
}

/// Parses a coefficient expression such as `-3/4 * (a0+a1) * l^-3`.
pub fn parse_scalar(src: &str) -> Result<ScalarExpr> {
    CoeffParser { s: src.as_bytes(), pos: 0, line: 1, col0: 1 }.parse()
}

fn check_term(t: &TargetTerm, dim: usize) -> Result<()> {
    let mut counts: HashMap<char, usize> = HashMap::new();
    for f in &t.factors {
        if let Some(n) = f.kind.arity() {
            if f.indices.len() != n {
                return Err(perr(t.line, 1, format!("`{}` needs {n} indices", f.text)));
            }
        } else if f.indices.len() != dim {
            return Err(perr(t.line, 1, format!("`{}` needs {dim} indices", f.text)));
        }
        for (ix, _) in &f.indices {
            match ix {
                Index::Var(c) => *counts.entry(*c).or_default() += 1,
                Index::Fixed(v) if *v >= dim => {
                    return Err(perr(t.line, 1, format!("index {v} out of range in `{}`", f.text)))
                }
                Index::Fixed(_) => {}
            }
        }
    }
    if let Some((c, _)) = counts.iter().find(|(_, &n)| n != 2) {
        return Err(perr(t.line, 1, format!("index `{c}` must appear exactly twice")));
    }
    Ok(())
}

fn parse_factors(src: &str, line: usize, col0: usize) -> Result<Vec<Factor>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for tok in src.split_whitespace() {
        let start = src[offset..].find(tok).map_or(offset, |p| p + offset);
        offset = start + tok.len();
        let col = col0 + start;
        let split = tok.find(['^', '_']).ok_or_else(|| perr(line, col, format!("`{tok}` has no indices")))?;
        let kind = FactorKind::parse(&tok[..split]).ok_or_else(|| perr(line, col, format!("unknown factor `{}`", &tok[..split])))?;
        let mut indices = Vec::new();
        let chars: Vec<char> = tok[split..].chars().collect();
        let mut i = 0;
        let mut upper = true;
        let mut braced = false;
        while i < chars.len() {
            match chars[i] {
                '^' | '_' if !braced => upper = chars[i] == '^',
                '{' if !braced => braced = true,
                '}' if braced => braced = false,
                c if c.is_ascii_lowercase() => indices.push((Index::Var(c), upper)),
                c if c.is_ascii_digit() => indices.push((Index::Fixed(c as usize - '0' as usize), upper)),
                c => return Err(perr(line, col + split + i, format!("unexpected `{c}` in `{tok}`"))),
            }
            i += 1;
        }
        if braced {
            return Err(perr(line, col, format!("unclosed brace in `{tok}`")));
        }
        out.push(Factor { kind, indices, text: tok.to_string() });
    }
    Ok(out)
}

struct CoeffParser<'a> {
    s: &'a [u8],
    pos: usize,
    line: usize,
    col0: usize,
}

impl CoeffParser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        perr(self.line, self.col0 + self.pos, msg)
    }
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }
    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }
    fn parse(mut self) -> Result<ScalarExpr> {
        let v = self.sum()?;
        if let Some(c) = self.peek() {
            return Err(self.err(format!("unexpected `{}`", c as char)));
        }
        Ok(v)
    }
    fn sum(&mut self) -> Result<ScalarExpr> {
        let mut acc = ScalarExpr::zero();
        let mut sign = 1;
        if let Some(c @ (b'+' | b'-')) = self.peek() {
            sign = if c == b'-' { -1 } else { 1 };
            self.pos += 1;
        }
        loop {
            let p = self.product()?;
            acc += &p.scale(QSqrt2::int(sign));
            match self.peek() {
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }
    fn product(&mut self) -> Result<ScalarExpr> {
        let mut acc = self.atom()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let at = self.pos;
            let x = self.atom()?;
            acc = acc.try_mul(&x).map_err(|e| perr(self.line, self.col0 + at, e.to_string()))?;
        }
        Ok(acc)
    }
    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).expect("ascii")
    }
    fn atom(&mut self) -> Result<ScalarExpr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.atom()?)
            }
            Some(b'a') => {
                self.pos += 1;
                let d = self.digits();
                let i: u8 = d.parse().map_err(|_| self.err("expected alpha index"))?;
                Ok(ScalarExpr::alpha(i))
            }
            Some(b'l') => {
                self.pos += 1;
                if self.peek() != Some(b'^') {
                    return Ok(ScalarExpr::ell(1));
                }
                self.pos += 1;
                let neg = self.peek() == Some(b'-');
                if neg {
                    self.pos += 1;
                }
                let d = self.digits();
                let p: i32 = d.parse().map_err(|_| self.err("expected exponent"))?;
                Ok(ScalarExpr::ell(if neg { -p } else { p }))
            }
            Some(b's') if self.s[self.pos..].starts_with(b"sqrt2") => {
                self.pos += 5;
                Ok(ScalarExpr::constant(QSqrt2::sqrt2()))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                self.digits();
                if self.s.get(self.pos) == Some(&b'/') {
                    self.pos += 1;
                    self.digits();
                }
                let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
                let r = parse_rational(text).map_err(|e| perr(self.line, self.col0 + start, e.to_string()))?;
                Ok(ScalarExpr::constant(r.into()))
            }
            Some(c) => Err(self.err(format!("unexpected `{}`", c as char))),
            None => Err(self.err("unexpected end of coefficient")),
        }
    }
}

fn eta(a: usize) -> i128 {
    metric(a)
}

fn sym(field: Field, ix: &[usize]) -> ScalarForm {
    match ix {
        [a] => ScalarForm::symbol(FormSymbol::vector(field, *a)),
        [a, b] => match FormSymbol::pair(field, *a, *b) {
            Some((s, x)) => ScalarForm::symbol(x).scale(&ScalarExpr::int(s)),
            None => ScalarForm::zero(),
        },
        _ => unreachable!("arity checked at parse time"),
    }
}

fn dsym(field: Field, ix: &[usize]) -> ScalarForm {
    super::exterior_d(&sym(field, ix))
}

/// `Σ_c ω^{ac} η_cc X^{c…}`-type contraction.
fn omega_times(a: usize, dim: usize, x: impl Fn(usize) -> ScalarForm) -> ScalarForm {
    let mut out = ScalarForm::zero();
    for c in 0..dim {
        let w = sym(Field::Omega, &[a, c]);
        if w.is_zero() {
            continue;
        }
        out.add_scaled(&wedge(&w, &x(c)), &ScalarExpr::int(eta(c)));
    }
    out
}

/// Value with all indices in canonical position.
fn factor_value(kind: FactorKind, ix: &[usize], dim: usize) -> ScalarForm {
    match kind {
        FactorKind::Eps => ScalarForm::constant(ScalarExpr::int(levi_civita(ix))),
        FactorKind::Field(f) => sym(f, ix),
        FactorKind::DField(f) => dsym(f, ix),
        FactorKind::Curvature => {
            let mut r = dsym(Field::Omega, ix);
            r.add_assign(&omega_times(ix[0], dim, |c| sym(Field::Omega, &[c, ix[1]])));
            r
        }
        FactorKind::Torsion => {
            let mut t = dsym(Field::E, ix);
            t.add_assign(&omega_times(ix[0], dim, |c| sym(Field::E, &[c])));
            t
        }
        FactorKind::Dh => {
            let mut t = dsym(Field::H, ix);
            t.add_assign(&omega_times(ix[0], dim, |c| sym(Field::H, &[c])));
            t
        }
        FactorKind::Dk => {
            let mut t = dsym(Field::K, ix);
            t.add_assign(&omega_times(ix[0], dim, |c| sym(Field::K, &[c, ix[1]])));
            t.add_assign(&omega_times(ix[1], dim, |c| sym(Field::K, &[ix[0], c])));
            t
        }
    }
}

type Cache = HashMap<(FactorKind, Vec<usize>), ScalarForm>;

fn concrete(f: &Factor, assign: &HashMap<char, usize>, dim: usize, cache: &mut Cache) -> ScalarForm {
    let mut ix = Vec::with_capacity(f.indices.len());
    let mut sign = 1i128;
    for (i, upper) in &f.indices {
        let v = match i {
            Index::Var(c) => assign[c],
            Index::Fixed(v) => *v,
        };
        if *upper != f.kind.canonical_upper() {
            sign *= eta(v);
        }
        ix.push(v);
    }
    let val = cache.entry((f.kind, ix.clone())).or_insert_with(|| factor_value(f.kind, &ix, dim));
    if sign == 1 {
        val.clone()
    } else {
        val.neg()
    }
}

fn expand_rec(
    order: &[&Factor],
    k: usize,
    assign: &mut HashMap<char, usize>,
    acc: ScalarForm,
    dim: usize,
    cache: &mut Cache,
    out: &mut ScalarForm,
) {
    if acc.is_zero() {
        return;
    }
    if k == order.len() {
        out.add_assign(&acc);
        return;
    }
    let f = order[k];
    let free: Vec<char> = f
        .indices
        .iter()
        .filter_map(|(i, _)| match i {
            Index::Var(c) if !assign.contains_key(c) => Some(*c),
            _ => None,
        })
        .unique()
        .collect();
    for vals in std::iter::repeat(0..dim).take(free.len()).multi_cartesian_product() {
        for (c, v) in free.iter().zip(&vals) {
            assign.insert(*c, *v);
        }
        let val = concrete(f, assign, dim, cache);
        if !val.is_zero() {
            let next = if f.kind == FactorKind::Eps { acc.scale(&val.coefficient(&Default::default())) } else { wedge(&acc, &val) };
            expand_rec(order, k + 1, assign, next, dim, cache, out);
        }
    }
    for c in &free {
        assign.remove(c);
    }
}

/// Expansion of one term, with or without its coefficient.
pub fn expand_term(t: &TargetTerm, dim: usize, with_coeff: bool) -> ScalarForm {
    // ε is a 0-form: evaluating it first prunes the index sum
    let order: Vec<&Factor> = t
        .factors
        .iter()
        .filter(|f| f.kind == FactorKind::Eps)
        .chain(t.factors.iter().filter(|f| f.kind != FactorKind::Eps))
        .collect();
    let mut out = ScalarForm::zero();
    let mut cache = Cache::new();
    let start = ScalarForm::constant(if with_coeff { t.coeff.clone() } else { ScalarExpr::one() });
    expand_rec(&order, 0, &mut HashMap::new(), start, dim, &mut cache, &mut out);
    out
}

pub fn expand_target(t: &Target) -> ScalarForm {
    t.terms.par_iter().map(|term| expand_term(term, t.dim, true)).reduce(ScalarForm::zero, |mut a, b| {
        a.add_assign(&b);
        a
    })
}
