//! Equality of forms modulo exact forms, up to one overall `c·ℓ^p` factor.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use super::{exterior_d, Monomial, ScalarForm};
use crate::linalg::{row_reduce, solve, Matrix};
use crate::scalar::{QSqrt2, ScalarExpr, TermKey};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModExactComparison {
    /// `s` with `computed ≃ s · target`, when one exists.
    pub scalar: Option<ScalarExpr>,
    pub equal: bool,
    /// `computed − s·target` (or `computed − target` without a scalar).
    pub residual: ScalarForm,
}

fn scale_checked(f: &ScalarForm, s: &ScalarExpr) -> Option<ScalarForm> {
    let mut out = ScalarForm::zero();
    for (m, c) in f.terms() {
        out.add_term(m.clone(), c.try_mul(s).ok()?);
    }
    Some(out)
}

/// Compares `d(computed)` with `s·d(target)`; the free algebra is acyclic,
/// so equal differentials mean the forms differ by an exact form.
pub fn compare_mod_exact(computed: &ScalarForm, target: &ScalarForm) -> ModExactComparison {
    let dc = exterior_d(computed);
    let dt = exterior_d(target);
    let scalar = match dt.terms().next() {
        None => None,
        Some((m, ct)) => dc.coefficient(m).ratio(ct),
    };
    let scaled = scalar.as_ref().and_then(|s| scale_checked(target, s));
    match scaled {
        Some(st) => {
            let residual = computed.sub(&st);
            let equal = exterior_d(&residual).is_zero();
            ModExactComparison { scalar, equal, residual }
        }
        None => {
            let residual = computed.sub(target);
            let equal = dt.is_zero() && dc.is_zero();
            ModExactComparison { scalar: None, equal, residual }
        }
    }
}

/// Least-assumption fit `d(computed) = Σ x_i d(basis_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermFit {
    pub coefficients: Vec<ScalarExpr>,
    /// Basis terms whose differentials are dependent on earlier ones (set to 0).
    pub undetermined: Vec<usize>,
    pub consistent: bool,
    /// Whether each coefficient is known. When the system is inconsistent
    /// a term is estimated from a monomial only its differential reaches.
    pub estimated: Vec<bool>,
}

/// Basis forms must have constant coefficients.
pub fn fit_terms(computed: &ScalarForm, basis: &[ScalarForm]) -> TermFit {
    let dc = exterior_d(computed);
    let images: Vec<ScalarForm> = basis.iter().map(exterior_d).collect();
    let rows: Vec<Monomial> = images
        .iter()
        .flat_map(|f| f.terms().map(|(m, _)| m.clone()))
        .chain(dc.terms().map(|(m, _)| m.clone()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let row_of: BTreeMap<&Monomial, usize> = rows.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut mat: Matrix = vec![vec![QSqrt2::zero(); basis.len()]; rows.len()];
    for (j, im) in images.iter().enumerate() {
        for (m, c) in im.terms() {
            mat[row_of[m]][j] = c.as_constant().expect("basis forms have constant coefficients");
        }
    }
    let pivots = row_reduce(&mut mat.clone());
    let undetermined = (0..basis.len()).filter(|j| !pivots.contains(j)).collect();
    let mut by_key: BTreeMap<TermKey, Vec<QSqrt2>> = BTreeMap::new();
    for (m, c) in dc.terms() {
        for (k, q) in c.terms() {
            by_key.entry(*k).or_insert_with(|| vec![QSqrt2::zero(); rows.len()])[row_of[m]] = *q;
        }
    }
    let witness: Vec<Option<usize>> = (0..basis.len())
        .map(|j| (0..rows.len()).find(|&r| !mat[r][j].is_zero() && (0..basis.len()).all(|i| i == j || mat[r][i].is_zero())))
        .collect();
    let mut coefficients = vec![ScalarExpr::zero(); basis.len()];
    let mut estimated = vec![true; basis.len()];
    let mut consistent = true;
    for (k, rhs) in by_key {
        let x = solve(&mat, &rhs).unwrap_or_else(|| {
            consistent = false;
            witness
                .iter()
                .zip(&mut estimated)
                .enumerate()
                .map(|(j, (w, known))| match w {
                    Some(r) => rhs[*r] / mat[*r][j],
                    None => {
                        *known = false;
                        QSqrt2::zero()
                    }
                })
                .collect()
        });
        for (c, xi) in coefficients.iter_mut().zip(x) {
            *c += &ScalarExpr::term(k.alpha, k.ell_pow, xi);
        }
    }
    TermFit { coefficients, undetermined, consistent, estimated }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_forms::{Field, FormSymbol};

    fn e(a: usize) -> FormSymbol {
        FormSymbol::vector(Field::E, a)
    }

    #[test]
    fn scalar_found_modulo_exact() {
        let t = ScalarForm::monomial(&[e(0).d(), e(1)], ScalarExpr::one());
        let exact = exterior_d(&ScalarForm::monomial(&[e(0), e(2)], ScalarExpr::one()));
        let c = t.scale(&ScalarExpr::term(None, -3, QSqrt2::frac(-1, 2)));
        let mut computed = c.clone();
        computed.add_assign(&exact);
        let r = compare_mod_exact(&computed, &t);
        assert!(r.equal);
        assert_eq!(r.scalar.unwrap(), ScalarExpr::term(None, -3, QSqrt2::frac(-1, 2)));
        let other = ScalarForm::monomial(&[e(2).d(), e(1)], ScalarExpr::one());
        assert!(!compare_mod_exact(&computed, &other).equal);
    }

    #[test]
    fn fit_recovers_coefficients() {
        let b0 = ScalarForm::monomial(&[e(0).d(), e(1)], ScalarExpr::one());
        let b1 = ScalarForm::monomial(&[e(1).d(), e(2)], ScalarExpr::one());
        let mut computed = b0.scale(&ScalarExpr::alpha(0));
        computed.add_assign(&b1.scale(&ScalarExpr::ell(2)));
        let fit = fit_terms(&computed, &[b0, b1]);
        assert!(fit.consistent);
        assert_eq!(fit.coefficients, vec![ScalarExpr::alpha(0), ScalarExpr::ell(2)]);
    }
}
