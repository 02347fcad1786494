//! Graded-commutative algebra of concrete differential-form symbols.
//!
//! Degree-1 generators are `ω^{ab}` (a < b), `e^a`, `k^{ab}`, `h^a` and
//! Maurer–Cartan forms `m^{A}`; each has a degree-2 image under `d`. The
//! algebra is free, so a form is exact iff it is closed (see
//! [`exactness`]).

pub mod compare;
pub mod dual_mc;
pub mod exactness;
pub mod target;
pub mod transgression;

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use smallvec::SmallVec;

use crate::error::{invalid, Result};
use crate::lie_algebra::LieAlgebra;
use crate::scalar::ScalarExpr;

pub use compare::{compare_mod_exact, fit_terms, ModExactComparison, TermFit};
pub use dual_mc::{dual_mc_check, DualMcReport};
pub use exactness::{exact_by_solving, homotopy_primitive, ExactnessVerdict};
pub use target::{expand_target, expand_term, parse_scalar, parse_target, Target, TargetTerm};
pub use transgression::{chern_simons, contract, subspace_separation, transgression};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Omega,
    E,
    K,
    H,
    /// Maurer–Cartan form dual to a generator.
    Mc,
}

impl Field {
    pub fn token(self) -> &'static str {
        match self {
            Field::Omega => "w",
            Field::E => "e",
            Field::K => "k",
            Field::H => "h",
            Field::Mc => "m",
        }
    }
    fn latex(self) -> &'static str {
        match self {
            Field::Omega => "\\omega",
            Field::E => "e",
            Field::K => "k",
            Field::H => "h",
            Field::Mc => "\\theta",
        }
    }
    pub fn from_token(s: &str) -> Option<Field> {
        Some(match s {
            "w" => Field::Omega,
            "e" => Field::E,
            "k" => Field::K,
            "h" => Field::H,
            "m" => Field::Mc,
            _ => return None,
        })
    }
    /// Two antisymmetric Lorentz indices.
    pub fn is_pair(self) -> bool {
        matches!(self, Field::Omega | Field::K)
    }
}

pub const NO_INDEX: u8 = u8::MAX;

/// One generator of the exterior algebra. Pair fields keep `idx[0] < idx[1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FormSymbol {
    pub field: Field,
    pub idx: [u8; 2],
    pub differentiated: bool,
}

impl FormSymbol {
    pub fn vector(field: Field, a: usize) -> FormSymbol {
        FormSymbol { field, idx: [a as u8, NO_INDEX], differentiated: false }
    }
    /// `field^{ab}` as `(sign, symbol)`, or `None` when `a == b`.
    pub fn pair(field: Field, a: usize, b: usize) -> Option<(i128, FormSymbol)> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => {
                Some((1, FormSymbol { field, idx: [a as u8, b as u8], differentiated: false }))
            }
            std::cmp::Ordering::Greater => {
                Some((-1, FormSymbol { field, idx: [b as u8, a as u8], differentiated: false }))
            }
            std::cmp::Ordering::Equal => None,
        }
    }
    pub fn mc(g: usize) -> FormSymbol {
        assert!(g < NO_INDEX as usize, "generator index {g} too large for a form symbol");
        FormSymbol { field: Field::Mc, idx: [g as u8, NO_INDEX], differentiated: false }
    }
    pub fn d(self) -> FormSymbol {
        FormSymbol { differentiated: true, ..self }
    }
    pub fn undifferentiated(self) -> FormSymbol {
        FormSymbol { differentiated: false, ..self }
    }
    pub fn degree(self) -> usize {
        if self.differentiated {
            2
        } else {
            1
        }
    }
    pub fn is_odd(self) -> bool {
        !self.differentiated
    }
    fn indices(&self) -> impl Iterator<Item = u8> + '_ {
        self.idx.iter().copied().filter(|&i| i != NO_INDEX)
    }
    pub fn token(&self) -> String {
        let d = if self.differentiated { "d" } else { "" };
        format!("{d}{}^{{{}}}", self.field.token(), self.indices().join(","))
    }
    pub fn from_token(s: &str) -> Result<FormSymbol> {
        let bad = || invalid(format!("bad form symbol `{s}`"));
        let (head, rest) = s.split_once("^{").ok_or_else(bad)?;
        let body = rest.strip_suffix('}').ok_or_else(bad)?;
        let (differentiated, name) = match head.strip_prefix('d') {
            Some(n) if !n.is_empty() => (true, n),
            _ => (false, head),
        };
        let field = Field::from_token(name).ok_or_else(bad)?;
        let ix: Vec<u8> = body.split(',').map(|x| x.parse::<u8>().map_err(|_| bad())).collect::<Result<_>>()?;
        let idx = match (field.is_pair(), ix.as_slice()) {
            (true, [a, b]) if a < b => [*a, *b],
            (false, [a]) => [*a, NO_INDEX],
            _ => return Err(bad()),
        };
        Ok(FormSymbol { field, idx, differentiated })
    }
    pub fn latex(&self) -> String {
        let d = if self.differentiated { "d" } else { "" };
        let ix: String = self.indices().join(if self.field == Field::Mc { "," } else { "" });
        format!("{d}{}^{{{ix}}}", self.field.latex())
    }
}

impl Ord for FormSymbol {
    /// Degree-2 symbols first, then by field and indices.
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        (!self.differentiated, self.field, self.idx).cmp(&(!o.differentiated, o.field, o.idx))
    }
}
impl PartialOrd for FormSymbol {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

/// Sorted product of symbols; odd symbols appear at most once.
pub type Monomial = SmallVec<[FormSymbol; 6]>;

/// Sorts a word of symbols, returning the Koszul sign, or `None` when an odd
/// symbol repeats.
pub fn canonicalize(word: &[FormSymbol]) -> Option<(i128, Monomial)> {
    let mut v: Monomial = word.iter().copied().collect();
    let mut sign = 1i128;
    // insertion sort counting odd-odd transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            if v[j - 1].is_odd() && v[j].is_odd() {
                sign = -sign;
            }
            v.swap(j - 1, j);
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1] && w[0].is_odd()) {
        return None;
    }
    Some((sign, v))
}

/// Product of two canonical monomials.
pub fn mul_monomials(a: &Monomial, b: &Monomial) -> Option<(i128, Monomial)> {
    let mut out = Monomial::with_capacity(a.len() + b.len());
    let mut odd_left_in_a = a.iter().filter(|s| s.is_odd()).count();
    let mut sign = 1i128;
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i] <= b[j]);
        if take_a {
            if j < b.len() && a[i] == b[j] && a[i].is_odd() {
                return None;
            }
            if a[i].is_odd() {
                odd_left_in_a -= 1;
            }
            out.push(a[i]);
            i += 1;
        } else {
            if b[j].is_odd() && odd_left_in_a % 2 == 1 {
                sign = -sign;
            }
            out.push(b[j]);
            j += 1;
        }
    }
    Some((sign, out))
}

pub fn monomial_degree(m: &Monomial) -> usize {
    m.iter().map(|s| s.degree()).sum()
}

/// Linear combination of monomials with [`ScalarExpr`] coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScalarForm {
    terms: BTreeMap<Monomial, ScalarExpr>,
}

impl ScalarForm {
    pub fn zero() -> ScalarForm {
        ScalarForm::default()
    }
    pub fn constant(c: ScalarExpr) -> ScalarForm {
        let mut f = ScalarForm::zero();
        f.add_term(Monomial::new(), c);
        f
    }
    pub fn symbol(s: FormSymbol) -> ScalarForm {
        Self::monomial(&[s], ScalarExpr::one())
    }
    /// Canonicalized product of `word` with coefficient `c`.
    pub fn monomial(word: &[FormSymbol], c: ScalarExpr) -> ScalarForm {
        let mut f = ScalarForm::zero();
        if let Some((s, m)) = canonicalize(word) {
            f.add_term(m, c.scale(s.into_q()));
        }
        f
    }
    pub fn add_term(&mut self, m: Monomial, c: ScalarExpr) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ScalarExpr)> {
        self.terms.iter()
    }
    pub fn coefficient(&self, m: &Monomial) -> ScalarExpr {
        self.terms.get(m).cloned().unwrap_or_default()
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    /// Common degree, `None` if empty or inhomogeneous.
    pub fn degree(&self) -> Option<usize> {
        let degs: Vec<usize> = self.terms.keys().map(monomial_degree).unique().collect();
        match degs.as_slice() {
            [d] => Some(*d),
            _ => None,
        }
    }
    pub fn add_assign(&mut self, o: &ScalarForm) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
    pub fn add_scaled(&mut self, o: &ScalarForm, c: &ScalarExpr) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &o.terms {
            self.add_term(m.clone(), x * c);
        }
    }
    pub fn scale(&self, c: &ScalarExpr) -> ScalarForm {
        let mut f = ScalarForm::zero();
        f.add_scaled(self, c);
        f
    }
    pub fn neg(&self) -> ScalarForm {
        self.scale(&ScalarExpr::int(-1))
    }
    pub fn sub(&self, o: &ScalarForm) -> ScalarForm {
        let mut f = self.clone();
        f.add_scaled(o, &ScalarExpr::int(-1));
        f
    }
    pub fn map_coefficients(&self, g: impl Fn(&ScalarExpr) -> ScalarExpr) -> ScalarForm {
        let mut f = ScalarForm::zero();
        for (m, c) in &self.terms {
            f.add_term(m.clone(), g(c));
        }
        f
    }
    /// Drops every monomial containing a symbol (or its `d`) of `fields`.
    pub fn without_fields(&self, fields: &[Field]) -> ScalarForm {
        ScalarForm {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !m.iter().any(|s| fields.contains(&s.field)))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
    /// Keeps the monomials of one weight (number of symbols).
    pub fn weight_component(&self, w: usize) -> ScalarForm {
        ScalarForm {
            terms: self.terms.iter().filter(|(m, _)| m.len() == w).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn json_value(&self) -> serde_json::Value {
        let items: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                serde_json::json!({
                    "monomial": m.iter().map(|s| s.token()).collect::<Vec<_>>(),
                    "coeff": c.terms().iter().map(|(k, q)| serde_json::json!({
                        "alpha": k.alpha, "ell_pow": k.ell_pow, "q": q.to_string()
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::Value::Array(items)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.json_value()).expect("form serializes")
    }

    pub fn from_json(s: &str) -> Result<ScalarForm> {
        #[derive(serde::Deserialize)]
        struct Coeff {
            alpha: Option<u8>,
            ell_pow: i32,
            q: String,
        }
        #[derive(serde::Deserialize)]
        struct Item {
            monomial: Vec<String>,
            coeff: Vec<Coeff>,
        }
        let items: Vec<Item> = serde_json::from_str(s)?;
        let mut f = ScalarForm::zero();
        for it in items {
            let word: Vec<FormSymbol> =
                it.monomial.iter().map(|t| FormSymbol::from_token(t)).collect::<Result<_>>()?;
            let terms = it
                .coeff
                .into_iter()
                .map(|c| {
                    Ok((crate::scalar::TermKey { alpha: c.alpha, ell_pow: c.ell_pow }, c.q.parse()?))
                })
                .collect::<Result<Vec<_>>>()?;
            let c = ScalarExpr::from_terms(terms);
            let (sign, m) = canonicalize(&word).ok_or_else(|| invalid("repeated odd symbol"))?;
            f.add_term(m, c.scale(sign.into_q()));
        }
        Ok(f)
    }

    pub fn latex(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                let body = m.iter().map(|s| s.latex()).join("\\wedge ");
                format!("{}\\,{}", crate::invariant_tensor::latex_scalar(c), body)
            })
            .join("\n+ ")
            .replace("+ -", "- ")
    }
}

impl fmt::Display for ScalarForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{c}] {}", m.iter().map(|s| s.token()).join(" "))?;
        }
        Ok(())
    }
}

pub(crate) trait IntoQ {
    fn into_q(self) -> crate::scalar::QSqrt2;
}
impl IntoQ for i128 {
    fn into_q(self) -> crate::scalar::QSqrt2 {
        crate::scalar::QSqrt2::int(self)
    }
}

pub fn wedge(a: &ScalarForm, b: &ScalarForm) -> ScalarForm {
    let mut acc: BTreeMap<Monomial, ScalarExpr> = BTreeMap::new();
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            if let Some((s, m)) = mul_monomials(ma, mb) {
                let c = ca * cb;
                let c = if s < 0 { -c } else { c };
                *acc.entry(m).or_default() += &c;
            }
        }
    }
    acc.retain(|_, c| !c.is_zero());
    ScalarForm { terms: acc }
}

/// Graded Leibniz derivation with `d(x) = dx` and `d(dx) = 0`.
pub fn exterior_d(f: &ScalarForm) -> ScalarForm {
    let mut out = ScalarForm::zero();
    for (m, c) in &f.terms {
        let mut before_odd = 0usize;
        for (i, s) in m.iter().enumerate() {
            if !s.differentiated {
                let mut word: Monomial = m.clone();
                word[i] = s.d();
                // sign (−1)^{degree of the prefix} = (−1)^{odd symbols before i}
                let sign: i128 = if before_odd % 2 == 0 { 1 } else { -1 };
                if let Some((s2, mm)) = canonicalize(&word) {
                    out.add_term(mm, c.scale((sign * s2).into_q()));
                }
                before_odd += 1;
            }
        }
    }
    out
}

/// Generator-indexed family of forms of one degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LieValuedForm {
    pub dim: usize,
    comps: BTreeMap<usize, ScalarForm>,
}

impl LieValuedForm {
    pub fn zero(dim: usize) -> LieValuedForm {
        LieValuedForm { dim, comps: BTreeMap::new() }
    }
    pub fn component(&self, a: usize) -> Option<&ScalarForm> {
        self.comps.get(&a)
    }
    pub fn components(&self) -> impl Iterator<Item = (&usize, &ScalarForm)> {
        self.comps.iter()
    }
    pub fn add_to(&mut self, a: usize, f: &ScalarForm) {
        assert!(a < self.dim, "generator {a} out of range");
        let e = self.comps.entry(a).or_default();
        e.add_assign(f);
        if e.is_zero() {
            self.comps.remove(&a);
        }
    }
    pub fn add_assign(&mut self, o: &LieValuedForm) {
        for (a, f) in &o.comps {
            self.add_to(*a, f);
        }
    }
    pub fn scale(&self, c: &ScalarExpr) -> LieValuedForm {
        let mut out = LieValuedForm::zero(self.dim);
        for (a, f) in &self.comps {
            out.add_to(*a, &f.scale(c));
        }
        out
    }
    pub fn sub(&self, o: &LieValuedForm) -> LieValuedForm {
        let mut out = self.clone();
        out.add_assign(&o.scale(&ScalarExpr::int(-1)));
        out
    }
    pub fn d(&self) -> LieValuedForm {
        let mut out = LieValuedForm::zero(self.dim);
        for (a, f) in &self.comps {
            out.add_to(*a, &exterior_d(f));
        }
        out
    }
    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }
    pub fn degree(&self) -> Option<usize> {
        let degs: Vec<usize> = self.comps.values().filter_map(|f| f.degree()).unique().collect();
        match degs.as_slice() {
            [d] => Some(*d),
            _ => None,
        }
    }
}

/// `[f, g]^C = Σ C_{AB}^C f^A ∧ g^B`.
pub fn lie_bracket_form(f: &LieValuedForm, g: &LieValuedForm, l: &LieAlgebra) -> LieValuedForm {
    let mut out = LieValuedForm::zero(l.dim());
    for (&a, fa) in &f.comps {
        for (&b, gb) in &g.comps {
            let br = l.basis_bracket(a, b);
            if br.is_empty() {
                continue;
            }
            let w = wedge(fa, gb);
            if w.is_zero() {
                continue;
            }
            for (c, v) in br {
                out.add_to(c, &w.scale(&ScalarExpr::constant(v)));
            }
        }
    }
    out
}

/// Which generators carry which field in a connection.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct FieldSlot {
    pub field: String,
    /// Root symbol of the generator label (`J` or `P`).
    pub symbol: String,
    /// Semigroup tag of the generator, if expanded.
    pub tag: Option<usize>,
}

/// Connection `Σ` over the chosen slots: pair fields enter as
/// `½ X^{ab} T_ab` (unit coefficient on `a < b`), vector fields as
/// `ℓ⁻¹ X^a T_a`.
pub fn connection(l: &LieAlgebra, slots: &[(Field, &str, Option<usize>)]) -> Result<LieValuedForm> {
    let mut a = LieValuedForm::zero(l.dim());
    for (g, label) in l.labels().iter().enumerate() {
        let (sym, idx) = label.root();
        let tag = label.as_expanded().map(|e| e.tag);
        for &(field, s, t) in slots {
            if s != sym || t != tag {
                continue;
            }
            let form = match (field.is_pair(), idx) {
                (true, [x, y]) => {
                    let (sign, s) = FormSymbol::pair(field, *x as usize, *y as usize)
                        .ok_or_else(|| invalid(format!("degenerate pair label {label}")))?;
                    ScalarForm::symbol(s).scale(&ScalarExpr::int(sign))
                }
                (false, [x]) => ScalarForm::symbol(FormSymbol::vector(field, *x as usize)).scale(&ScalarExpr::ell(-1)),
                _ => return Err(invalid(format!("label {label} does not fit field {field:?}"))),
            };
            a.add_to(g, &form);
        }
    }
    Ok(a)
}

/// Connection with one Maurer–Cartan form per generator.
pub fn maurer_cartan_connection(dim: usize) -> LieValuedForm {
    let mut a = LieValuedForm::zero(dim);
    for g in 0..dim {
        a.add_to(g, &ScalarForm::symbol(FormSymbol::mc(g)));
    }
    a
}

/// Curvature `dA + ½[A, A]`.
pub fn curvature(a: &LieValuedForm, l: &LieAlgebra) -> LieValuedForm {
    let mut f = a.d();
    f.add_assign(&lie_bracket_form(a, a, l).scale(&ScalarExpr::rational(1, 2)));
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_algebra::make_named;

    fn e(a: usize) -> FormSymbol {
        FormSymbol::vector(Field::E, a)
    }

    #[test]
    fn odd_symbols_anticommute() {
        let ab = ScalarForm::monomial(&[e(0), e(1)], ScalarExpr::one());
        let ba = ScalarForm::monomial(&[e(1), e(0)], ScalarExpr::one());
        assert_eq!(ab, ba.neg());
        assert!(ScalarForm::monomial(&[e(0), e(0)], ScalarExpr::one()).is_zero());
        let dd = ScalarForm::monomial(&[e(0).d(), e(0).d()], ScalarExpr::one());
        assert_eq!(dd.len(), 1);
    }

    #[test]
    fn merge_product_matches_canonicalize() {
        let w1 = [e(3), e(0).d(), e(1)];
        let w2 = [e(2), FormSymbol::vector(Field::H, 0), e(4).d()];
        let (s1, m1) = canonicalize(&w1).unwrap();
        let (s2, m2) = canonicalize(&w2).unwrap();
        let (s, m) = mul_monomials(&m1, &m2).unwrap();
        let all: Vec<FormSymbol> = w1.iter().chain(w2.iter()).copied().collect();
        let (sa, ma) = canonicalize(&all).unwrap();
        assert_eq!(m, ma);
        assert_eq!(s1 * s2 * s, sa);
    }

    #[test]
    fn d_squares_to_zero() {
        let f = ScalarForm::monomial(&[e(0), e(1), FormSymbol::vector(Field::H, 2)], ScalarExpr::alpha(1));
        let df = exterior_d(&f);
        assert_eq!(df.len(), 3);
        assert!(exterior_d(&df).is_zero());
    }

    #[test]
    fn token_round_trip() {
        for s in [
            FormSymbol::pair(Field::Omega, 3, 1).unwrap().1.d(),
            e(4),
            FormSymbol::vector(Field::H, 0),
            FormSymbol::mc(17),
        ] {
            assert_eq!(FormSymbol::from_token(&s.token()).unwrap(), s);
        }
        assert!(FormSymbol::from_token("w^{2,1}").is_err());
    }

    #[test]
    fn maurer_cartan_curvature_is_closed_under_d() {
        // dF + [A, F] = 0
        let l = make_named("so3").unwrap();
        let a = maurer_cartan_connection(3);
        let f = curvature(&a, &l);
        let mut bianchi = f.d();
        bianchi.add_assign(&lie_bracket_form(&a, &f, &l));
        assert!(bianchi.is_zero());
    }
}
