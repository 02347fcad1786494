//! Symmetric invariant tensors with α-linear coefficients, their lifts to
//! expanded algebras, invariance checks and basis rotations.
//!
//! Entries are stored once per sorted index tuple; every permutation of a
//! stored tuple has the same value.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::lie_algebra::{Label, LieAlgebra};
use crate::linalg::Matrix;
use crate::scalar::{QSqrt2, ScalarExpr, TermKey};
use crate::semigroup::Semigroup;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantTensor {
    pub rank: usize,
    pub dim: usize,
    entries: BTreeMap<Vec<usize>, ScalarExpr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceReport {
    pub ok: bool,
    /// `(A0, tuple, value)` of the first nonzero component.
    pub first_failure: Option<(usize, Vec<usize>, ScalarExpr)>,
}

/// Sign of the permutation of `0..n` spelled by `idx`, 0 on repeats.
pub fn levi_civita(idx: &[usize]) -> i128 {
    let n = idx.len();
    if idx.iter().any(|&i| i >= n) || idx.iter().duplicates().next().is_some() {
        return 0;
    }
    let inversions = (0..n).tuple_combinations().filter(|&(i, j)| idx[i] > idx[j]).count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

impl InvariantTensor {
    pub fn new(rank: usize, dim: usize) -> InvariantTensor {
        InvariantTensor { rank, dim, entries: BTreeMap::new() }
    }

    /// Sets the value of every permutation of `idx`. A second assignment to
    /// the same sorted tuple must agree with the first.
    pub fn set(&mut self, idx: &[usize], v: ScalarExpr) -> Result<()> {
        if idx.len() != self.rank || idx.iter().any(|&i| i >= self.dim) {
            return Err(invalid(format!("index tuple {idx:?} does not fit rank {} dim {}", self.rank, self.dim)));
        }
        let key: Vec<usize> = idx.iter().copied().sorted().collect();
        if v.is_zero() {
            if self.entries.get(&key).is_some_and(|old| !old.is_zero()) {
                return Err(invalid(format!("conflicting values at {key:?}")));
            }
            return Ok(());
        }
        match self.entries.get(&key) {
            Some(old) if *old != v => Err(invalid(format!("conflicting values at {key:?}: {old} vs {v}"))),
            _ => {
                self.entries.insert(key, v);
                Ok(())
            }
        }
    }

    pub fn get(&self, idx: &[usize]) -> ScalarExpr {
        let key: Vec<usize> = idx.iter().copied().sorted().collect();
        self.entries.get(&key).cloned().unwrap_or_default()
    }

    /// Sorted representatives with nonzero value.
    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &ScalarExpr)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Every ordered tuple with nonzero value.
    pub fn ordered_entries(&self) -> Vec<(Vec<usize>, ScalarExpr)> {
        let mut out = Vec::new();
        for (k, v) in &self.entries {
            for p in k.iter().copied().permutations(self.rank).unique() {
                out.push((p, v.clone()));
            }
        }
        out
    }

    pub fn map_values(&self, f: impl Fn(&ScalarExpr) -> ScalarExpr) -> InvariantTensor {
        let entries = self
            .entries
            .iter()
            .map(|(k, v)| (k.clone(), f(v)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        InvariantTensor { rank: self.rank, dim: self.dim, entries }
    }

    pub fn scale(&self, c: QSqrt2) -> InvariantTensor {
        self.map_values(|v| v.scale(c))
    }

    pub fn substitute_alphas(&self, map: &[ScalarExpr]) -> InvariantTensor {
        self.map_values(|v| v.substitute_alphas(map))
    }

    pub fn to_json(&self) -> String {
        let entries = self
            .entries
            .iter()
            .flat_map(|(k, v)| {
                v.terms().iter().map(move |(key, c)| EntryDoc {
                    indices: k.clone(),
                    coeff: CoeffDoc { alpha: key.alpha, ell_pow: key.ell_pow, q: c.to_string() },
                })
            })
            .collect();
        serde_json::to_string_pretty(&TensorDoc { rank: self.rank, dim: self.dim, entries })
            .expect("tensor serializes")
    }

    pub fn from_json(s: &str) -> Result<InvariantTensor> {
        let doc: TensorDoc = serde_json::from_str(s)?;
        let mut acc: BTreeMap<Vec<usize>, Vec<(TermKey, QSqrt2)>> = BTreeMap::new();
        for e in doc.entries {
            let q: QSqrt2 = e.coeff.q.parse()?;
            acc.entry(e.indices)
                .or_default()
                .push((TermKey { alpha: e.coeff.alpha, ell_pow: e.coeff.ell_pow }, q));
        }
        let mut t = InvariantTensor::new(doc.rank, doc.dim);
        for (k, terms) in acc {
            if !k.windows(2).all(|w| w[0] <= w[1]) {
                return Err(invalid(format!("tensor key {k:?} is not sorted")));
            }
            t.set(&k, ScalarExpr::from_terms(terms))?;
        }
        Ok(t)
    }

    /// One row per family of generator symbols, written against
    /// `ε_{abc…}` when the family is a multiple of it.
    pub fn latex_table(&self, labels: &[Label]) -> String {
        let family = |i: usize| -> (String, usize) {
            let (s, idx) = display_root(&labels[i]);
            (s, idx.len())
        };
        let mut groups: BTreeMap<Vec<(String, usize)>, Vec<(&Vec<usize>, &ScalarExpr)>> = BTreeMap::new();
        for (k, v) in &self.entries {
            let fam: Vec<(String, usize)> = k.iter().map(|&i| family(i)).collect();
            groups.entry(fam).or_default().push((k, v));
        }
        let mut out = String::from("\\begin{align}\n");
        for (fam, rows) in &groups {
            let mut letters = "abcdefghijklmnopqrstuvwxyz".chars();
            let slots: Vec<String> = fam
                .iter()
                .map(|(s, n)| {
                    let ix: String = letters.by_ref().take(*n).collect();
                    if ix.is_empty() {
                        s.clone()
                    } else {
                        format!("{s}_{{{ix}}}")
                    }
                })
                .collect();
            let all: String = "abcdefghijklmnopqrstuvwxyz".chars().take(fam.iter().map(|f| f.1).sum()).collect();
            let mut coeff: Option<ScalarExpr> = None;
            let mut eps_family = true;
            for (k, v) in rows {
                let lor: Vec<usize> =
                    k.iter().flat_map(|&i| labels[i].root().1.iter().map(|&x| x as usize)).collect();
                let s = levi_civita(&lor);
                if s == 0 {
                    eps_family = false;
                    break;
                }
                let c = v.scale(QSqrt2::int(s));
                match &coeff {
                    None => coeff = Some(c),
                    Some(prev) if *prev == c => {}
                    Some(_) => {
                        eps_family = false;
                        break;
                    }
                }
            }
            let lhs = format!("\\langle {} \\rangle", slots.join(", "));
            match (eps_family, coeff) {
                (true, Some(c)) => {
                    out.push_str(&format!("{lhs} &= {}\\,\\epsilon_{{{all}}} \\\\\n", latex_scalar(&c)))
                }
                _ => out.push_str(&format!("{lhs} &: \\text{{{} entries}} \\\\\n", rows.len())),
            }
        }
        out.push_str("\\end{align}\n");
        out
    }
}

/// Display symbol of a label: tag 0 keeps the base symbol, higher tags
/// append `^{(α)}`.
fn display_root(l: &Label) -> (String, Vec<u32>) {
    match l {
        Label::Named { symbol, indices } => (symbol.clone(), indices.clone()),
        Label::Expanded(e) => {
            let (s, idx) = display_root(&e.base);
            (format!("{s}^{{({})}}", e.tag), idx)
        }
    }
}

pub fn latex_scalar(e: &ScalarExpr) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let terms: Vec<String> = e
        .terms()
        .iter()
        .map(|(k, c)| {
            let mut s = latex_number(c);
            if let Some(a) = k.alpha {
                s.push_str(&format!("\\alpha_{{{a}}}"));
            }
            if k.ell_pow != 0 {
                s.push_str(&format!("\\ell^{{{}}}", k.ell_pow));
            }
            if s.is_empty() || s == "-" {
                s.push('1');
            }
            s
        })
        .collect();
    let joined = terms.join(" + ").replace("+ -", "- ");
    if terms.len() > 1 {
        format!("({joined})")
    } else {
        joined
    }
}

fn latex_number(c: &QSqrt2) -> String {
    if *c == QSqrt2::int(1) {
        return String::new();
    }
    if *c == QSqrt2::int(-1) {
        return "-".into();
    }
    let r = |x: &crate::scalar::Rational| {
        if x.is_integer() {
            format!("{}", x.numer())
        } else {
            let sign = if *x.numer() < 0 { "-" } else { "" };
            format!("{sign}\\frac{{{}}}{{{}}}", x.numer().abs(), x.denom())
        }
    };
    match (c.r.is_zero(), c.s.is_zero()) {
        (_, true) => r(&c.r),
        (true, false) => format!("{}\\sqrt{{2}}", r(&c.s)),
        _ => format!("({}+{}\\sqrt{{2}})", r(&c.r), r(&c.s)),
    }
}

#[derive(Serialize, Deserialize)]
struct TensorDoc {
    rank: usize,
    dim: usize,
    entries: Vec<EntryDoc>,
}

#[derive(Serialize, Deserialize)]
struct EntryDoc {
    indices: Vec<usize>,
    coeff: CoeffDoc,
}

#[derive(Serialize, Deserialize)]
struct CoeffDoc {
    alpha: Option<u8>,
    ell_pow: i32,
    q: String,
}

/// `⟨J_{a1 b1}, …, J_{ak bk}, P_c⟩ = ε_{a1 b1 … c}` on the AdS algebra in
/// odd dimension `d`, with unit normalization.
pub fn ads_epsilon(ads: &LieAlgebra) -> Result<InvariantTensor> {
    let np = ads.labels().iter().filter(|l| l.root().0 == "P").count();
    let d = np;
    if d % 2 == 0 || ads.dim() != d * (d + 1) / 2 {
        return Err(invalid(format!("{} is not an odd-dimensional AdS algebra", ads.name)));
    }
    let rank = d.div_ceil(2);
    let js: Vec<(usize, usize, usize)> = ads
        .labels()
        .iter()
        .enumerate()
        .filter(|(_, l)| l.root().0 == "J")
        .map(|(i, l)| (i, l.root().1[0] as usize, l.root().1[1] as usize))
        .collect();
    let ps: Vec<(usize, usize)> = ads
        .labels()
        .iter()
        .enumerate()
        .filter(|(_, l)| l.root().0 == "P")
        .map(|(i, l)| (i, l.root().1[0] as usize))
        .collect();
    let mut t = InvariantTensor::new(rank, ads.dim());
    for combo in js.iter().combinations_with_replacement(rank - 1) {
        for &(pi, c) in &ps {
            let lor: Vec<usize> = combo.iter().flat_map(|&&(_, a, b)| [a, b]).chain([c]).collect();
            let s = levi_civita(&lor);
            if s != 0 {
                let idx: Vec<usize> = combo.iter().map(|j| j.0).chain([pi]).collect();
                t.set(&idx, ScalarExpr::int(s))?;
            }
        }
    }
    Ok(t)
}

/// Lift to the 0_S-reduced expansion: `α_γ K_{i1…ir}^γ ⟨T_{A1} … T_{Ar}⟩`
/// for nonzero tags, with `alphas[γ]` the coefficient of `λ_γ`.
pub fn lift_0s(s: &Semigroup, t: &InvariantTensor, alphas: &[ScalarExpr]) -> Result<InvariantTensor> {
    let z = s.zero.ok_or_else(|| Error::NoZero(s.name.clone()))?;
    let tags = s.nonzero_elements();
    let d = t.dim;
    let mut out = InvariantTensor::new(t.rank, tags.len() * d);
    for (key, v) in &t.entries {
        for pick in std::iter::repeat(0..tags.len()).take(t.rank).multi_cartesian_product() {
            let elems: Vec<usize> = pick.iter().map(|&k| tags[k]).collect();
            let g = s.product(&elems);
            if g == z {
                continue;
            }
            let a = alphas.get(g).ok_or_else(|| invalid(format!("no alpha for lambda_{g}")))?;
            let idx: Vec<usize> = pick.iter().zip(key).map(|(&k, &a)| k * d + a).collect();
            out.set(&idx, a * v)?;
        }
    }
    Ok(out)
}

/// Lift to the H-reduced algebra on tags `0..n`:
/// `⟨T_(A1,i1) … T_(Ar,ir)⟩ = α_γ ⟨T_{A1} … T_{Ar}⟩` with `γ = Σ i mod 2n`.
pub fn lift_h(n: usize, t: &InvariantTensor, alphas: &[ScalarExpr]) -> Result<InvariantTensor> {
    if n == 0 {
        return Err(invalid("lift_h needs n >= 1"));
    }
    let d = t.dim;
    let mut out = InvariantTensor::new(t.rank, n * d);
    for (key, v) in &t.entries {
        for tags in std::iter::repeat(0..n).take(t.rank).multi_cartesian_product() {
            let g = tags.iter().sum::<usize>() % (2 * n);
            let a = alphas.get(g).ok_or_else(|| invalid(format!("no alpha for lambda_{g}")))?;
            let idx: Vec<usize> = tags.iter().zip(key).map(|(&i, &a)| i * d + a).collect();
            out.set(&idx, a * v)?;
        }
    }
    Ok(out)
}

/// `α_0, α_1, …` as symbols.
pub fn alpha_symbols(count: usize) -> Vec<ScalarExpr> {
    (0..count).map(|i| ScalarExpr::alpha(i as u8)).collect()
}

/// `Σ_p C_{A0 Ap}^B ⟨T_{A1} … T_B … T_{Ar}⟩ = 0` for all `A0` and tuples.
pub fn verify_invariance(l: &LieAlgebra, t: &InvariantTensor) -> InvarianceReport {
    use rayon::prelude::*;
    let n = l.dim();
    if t.dim != n {
        return InvarianceReport { ok: false, first_failure: None };
    }
    let ordered = t.ordered_entries();
    let failures: Vec<(usize, Vec<usize>, ScalarExpr)> = (0..n)
        .into_par_iter()
        .filter_map(|a0| {
            let ad = l.ad(a0);
            // inv[B] = [(A, C_{A0 A}^B)]
            let inv: Vec<Vec<(usize, QSqrt2)>> = (0..n)
                .map(|b| (0..n).filter(|&a| !ad[b][a].is_zero()).map(|a| (a, ad[b][a])).collect())
                .collect();
            let mut acc: BTreeMap<Vec<usize>, ScalarExpr> = BTreeMap::new();
            for (tuple, v) in &ordered {
                for p in 0..t.rank {
                    for &(a, c) in &inv[tuple[p]] {
                        let mut k = tuple.clone();
                        k[p] = a;
                        *acc.entry(k).or_default() += &v.scale(c);
                    }
                }
            }
            acc.into_iter().find(|(_, v)| !v.is_zero()).map(|(k, v)| (a0, k, v))
        })
        .collect();
    match failures.into_iter().min_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1))) {
        None => InvarianceReport { ok: true, first_failure: None },
        Some(f) => InvarianceReport { ok: false, first_failure: Some(f) },
    }
}

/// `T'(i1 … ir) = Σ M_{i1 a1} ⋯ M_{ir ar} T(a1 … ar)` for the basis
/// `T'_i = Σ_a M_ia T_a`.
pub fn rotate_tensor(t: &InvariantTensor, m: &Matrix) -> Result<InvariantTensor> {
    let n = t.dim;
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(invalid("rotation matrix has wrong shape"));
    }
    let cols: Vec<Vec<(usize, QSqrt2)>> = (0..n)
        .map(|a| (0..n).filter(|&i| !m[i][a].is_zero()).map(|i| (i, m[i][a])).collect())
        .collect();
    let mut acc: BTreeMap<Vec<usize>, ScalarExpr> = BTreeMap::new();
    for (tuple, v) in t.ordered_entries() {
        let choices = tuple.iter().map(|&a| cols[a].iter()).multi_cartesian_product();
        for pick in choices {
            let idx: Vec<usize> = pick.iter().map(|(i, _)| *i).collect();
            if !idx.windows(2).all(|w| w[0] <= w[1]) {
                continue;
            }
            let c = pick.iter().fold(QSqrt2::from(1i64), |acc, (_, x)| acc * *x);
            *acc.entry(idx).or_default() += &v.scale(c);
        }
    }
    let entries = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
    Ok(InvariantTensor { rank: t.rank, dim: n, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::{h_reduce, s_expand, zero_reduce};
    use crate::lie_algebra::make_named;
    use crate::semigroup::make_se;

    #[test]
    fn epsilon_sign() {
        assert_eq!(levi_civita(&[0, 1, 2]), 1);
        assert_eq!(levi_civita(&[1, 0, 2]), -1);
        assert_eq!(levi_civita(&[2, 0, 1]), 1);
        assert_eq!(levi_civita(&[0, 0, 2]), 0);
    }

    #[test]
    fn ads_tensors_are_invariant() {
        for name in ["ads3", "ads5"] {
            let l = make_named(name).unwrap();
            let t = ads_epsilon(&l).unwrap();
            let r = verify_invariance(&l, &t);
            assert!(r.ok, "{name}: {:?}", r.first_failure);
        }
    }

    #[test]
    fn ads5_epsilon_entry_count() {
        // 5 choices of P times 6 ordered splits of the other four indices,
        // halved by the J-J symmetry
        let t = ads_epsilon(&make_named("ads5").unwrap()).unwrap();
        assert_eq!(t.len(), 15);
        assert_eq!(t.get(&[10, 0, 7]), t.get(&[7, 10, 0]));
    }

    #[test]
    fn non_invariant_tensor_is_caught() {
        let l = make_named("so3").unwrap();
        let mut t = InvariantTensor::new(2, 3);
        t.set(&[0, 0], ScalarExpr::int(1)).unwrap();
        let r = verify_invariance(&l, &t);
        assert!(!r.ok);
        assert!(r.first_failure.is_some());
    }

    #[test]
    fn lift_h_ads3_families() {
        let ads3 = make_named("ads3").unwrap();
        let t = lift_h(2, &ads_epsilon(&ads3).unwrap(), &alpha_symbols(4)).unwrap();
        // J_01 = 0, P_2 = 5; tag 1 shifts by 6
        assert_eq!(t.get(&[0, 5]), ScalarExpr::alpha(0));
        assert_eq!(t.get(&[0, 11]), ScalarExpr::alpha(1));
        assert_eq!(t.get(&[6, 5]), ScalarExpr::alpha(1));
        assert_eq!(t.get(&[6, 11]), ScalarExpr::alpha(2));
        assert!(!verify_invariance(&h_reduce(2, &ads3).unwrap(), &t).ok);
        // invariant once α_{γ+n} = −α_γ, i.e. the tensor vanishes on the quotient ideal
        let a = alpha_symbols(2);
        let paired = [a[0].clone(), a[1].clone(), -a[0].clone(), -a[1].clone()];
        let t = lift_h(2, &ads_epsilon(&ads3).unwrap(), &paired).unwrap();
        assert!(verify_invariance(&h_reduce(2, &ads3).unwrap(), &t).ok);
    }

    #[test]
    fn lift_0s_families_with_two_alphas() {
        let ads5 = make_named("ads5").unwrap();
        let se3 = make_se(3);
        let mut alphas = alpha_symbols(4);
        alphas[2] = ScalarExpr::zero();
        alphas[3] = ScalarExpr::zero();
        let t = lift_0s(&se3, &ads_epsilon(&ads5).unwrap(), &alphas).unwrap();
        let mut tag_patterns: Vec<Vec<usize>> = t
            .entries()
            .map(|(k, _)| {
                let mut j: Vec<usize> = k.iter().filter(|&&i| i % 15 < 10).map(|&i| i / 15).collect();
                j.sort();
                j.extend(k.iter().filter(|&&i| i % 15 >= 10).map(|&i| i / 15));
                j
            })
            .unique()
            .collect();
        tag_patterns.sort();
        assert_eq!(tag_patterns, vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 0]]);
        let g = zero_reduce(&s_expand(&se3, &ads5), &se3).unwrap();
        let full = lift_0s(&se3, &ads_epsilon(&ads5).unwrap(), &alpha_symbols(4)).unwrap();
        assert!(verify_invariance(&g, &full).ok);
    }

    #[test]
    fn json_round_trip() {
        let ads3 = make_named("ads3").unwrap();
        let t = lift_h(2, &ads_epsilon(&ads3).unwrap(), &alpha_symbols(4)).unwrap();
        let t = t.map_values(|v| v + &ScalarExpr::ell(-2));
        assert_eq!(InvariantTensor::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn rotation_by_identity_is_trivial() {
        let ads3 = make_named("ads3").unwrap();
        let t = ads_epsilon(&ads3).unwrap();
        assert_eq!(rotate_tensor(&t, &crate::linalg::identity(6)).unwrap(), t);
    }
}
