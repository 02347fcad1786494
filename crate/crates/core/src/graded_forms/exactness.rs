//! Exactness of forms in the free algebra.
//!
//! The derivation `h` with `h(dx) = x`, `h(x) = 0` satisfies
//! `dh + hd = w` on monomials with `w` symbols, so a closed form of weight
//! `w > 0` equals `d(h(ω)/w)`. [`exact_by_solving`] finds a primitive by
//! linear algebra instead and serves as an independent check on small inputs.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use super::{canonicalize, exterior_d, FormSymbol, IntoQ, Monomial, ScalarForm};
use crate::linalg::{solve, Matrix};
use crate::scalar::{QSqrt2, ScalarExpr, TermKey};
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactnessVerdict {
    Exact(ScalarForm),
    NotExact,
    /// Candidate space larger than the cap.
    Undetermined { candidates: usize },
}

fn homotopy(f: &ScalarForm) -> ScalarForm {
    let mut out = ScalarForm::zero();
    for (m, c) in f.terms() {
        let mut before_odd = 0usize;
        for (i, s) in m.iter().enumerate() {
            if s.differentiated {
                let mut word: Monomial = m.clone();
                word[i] = s.undifferentiated();
                let sign: i128 = if before_odd % 2 == 0 { 1 } else { -1 };
                if let Some((s2, mm)) = canonicalize(&word) {
                    out.add_term(mm, c.scale((sign * s2).into_q()));
                }
            } else {
                before_odd += 1;
            }
        }
    }
    out
}

/// Primitive `β` with `dβ = f`, or `None` when `f` is not closed or has a
/// constant part.
pub fn homotopy_primitive(f: &ScalarForm) -> Option<ScalarForm> {
    if !exterior_d(f).is_zero() {
        return None;
    }
    let weights: BTreeSet<usize> = f.terms().map(|(m, _)| m.len()).collect();
    if weights.contains(&0) {
        return None;
    }
    let mut beta = ScalarForm::zero();
    for w in weights {
        let hw = homotopy(&f.weight_component(w));
        beta.add_scaled(&hw, &ScalarExpr::constant(QSqrt2::frac(1, w as i128)));
    }
    Some(beta)
}

/// Monomials of the given degree and weight over `alphabet` (degree-1
/// symbols; their differentials are included automatically).
fn candidates(alphabet: &[FormSymbol], degree: usize, weight: usize, cap: usize) -> Option<Vec<Monomial>> {
    let mut out = Vec::new();
    // n_odd + n_even = weight, n_odd + 2 n_even = degree
    if degree < weight || degree > 2 * weight {
        return Some(out);
    }
    let n_even = degree - weight;
    let n_odd = weight - n_even;
    for odd in alphabet.iter().combinations(n_odd) {
        for even in alphabet.iter().combinations_with_replacement(n_even) {
            let word: Vec<FormSymbol> = odd.iter().map(|s| **s).chain(even.iter().map(|s| s.d())).collect();
            if let Some((_, m)) = canonicalize(&word) {
                out.push(m);
                if out.len() > cap {
                    return None;
                }
            }
        }
    }
    Some(out)
}

/// Decides exactness by solving `dβ = f` over all candidate monomials
/// built from the symbols of `f`.
pub fn exact_by_solving(f: &ScalarForm, cap: usize) -> ExactnessVerdict {
    if f.is_zero() {
        return ExactnessVerdict::Exact(ScalarForm::zero());
    }
    let Some(degree) = f.degree() else {
        return ExactnessVerdict::NotExact;
    };
    if degree == 0 {
        return ExactnessVerdict::NotExact;
    }
    let alphabet: Vec<FormSymbol> =
        f.terms().flat_map(|(m, _)| m.iter().map(|s| s.undifferentiated())).collect::<BTreeSet<_>>().into_iter().collect();
    let weights: BTreeSet<usize> = f.terms().map(|(m, _)| m.len()).collect();
    let mut cands = Vec::new();
    for w in weights {
        match candidates(&alphabet, degree - 1, w, cap.saturating_sub(cands.len())) {
            Some(c) => cands.extend(c),
            None => return ExactnessVerdict::Undetermined { candidates: cap + 1 },
        }
    }
    let images: Vec<ScalarForm> = cands.iter().map(|m| exterior_d(&ScalarForm::monomial(m, ScalarExpr::one()))).collect();
    let rows: Vec<Monomial> = images
        .iter()
        .flat_map(|im| im.terms().map(|(m, _)| m.clone()))
        .chain(f.terms().map(|(m, _)| m.clone()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let row_of: BTreeMap<&Monomial, usize> = rows.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut mat: Matrix = vec![vec![QSqrt2::zero(); cands.len()]; rows.len()];
    for (j, im) in images.iter().enumerate() {
        for (m, c) in im.terms() {
            mat[row_of[m]][j] = c.as_constant().expect("unit-coefficient image");
        }
    }
    let mut by_key: BTreeMap<TermKey, Vec<QSqrt2>> = BTreeMap::new();
    for (m, c) in f.terms() {
        for (k, q) in c.terms() {
            by_key.entry(*k).or_insert_with(|| vec![QSqrt2::zero(); rows.len()])[row_of[m]] = *q;
        }
    }
    let mut beta = ScalarForm::zero();
    for (k, rhs) in by_key {
        let Some(x) = solve(&mat, &rhs) else {
            return ExactnessVerdict::NotExact;
        };
        for (m, xi) in cands.iter().zip(x) {
            if !xi.is_zero() {
                beta.add_term(m.clone(), ScalarExpr::term(k.alpha, k.ell_pow, xi));
            }
        }
    }
    ExactnessVerdict::Exact(beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_forms::Field;

    fn e(a: usize) -> FormSymbol {
        FormSymbol::vector(Field::E, a)
    }

    #[test]
    fn homotopy_recovers_primitive() {
        let beta = ScalarForm::monomial(&[e(0), e(1).d(), e(2)], ScalarExpr::ell(-1))
            .sub(&ScalarForm::monomial(&[e(3).d(), e(1)], ScalarExpr::alpha(2)));
        let f = exterior_d(&beta);
        let p = homotopy_primitive(&f).unwrap();
        assert_eq!(exterior_d(&p), f);
        assert!(homotopy_primitive(&ScalarForm::monomial(&[e(0), e(1)], ScalarExpr::one())).is_none());
    }

    #[test]
    fn solver_agrees_with_closedness() {
        let beta = ScalarForm::monomial(&[e(0), e(1)], ScalarExpr::rational(3, 2));
        let f = exterior_d(&beta);
        match exact_by_solving(&f, 1000) {
            ExactnessVerdict::Exact(p) => assert_eq!(exterior_d(&p), f),
            v => panic!("{v:?}"),
        }
        let g = ScalarForm::monomial(&[e(0).d(), e(1)], ScalarExpr::one());
        assert_eq!(exact_by_solving(&g, 1000), ExactnessVerdict::NotExact);
        assert!(matches!(exact_by_solving(&f, 0), ExactnessVerdict::Undetermined { .. }));
    }
}
