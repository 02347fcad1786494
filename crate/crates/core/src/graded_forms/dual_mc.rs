//! Reduction of `Z_{2n} × L` on the dual side: substitute
//! `θ^{(A,i+n)} = −θ^{(A,i)}` into the Maurer–Cartan equations and read off
//! the constants of the reduced algebra.

use super::{wedge, FormSymbol, ScalarForm};
use crate::error::Result;
use crate::expansion::{h_reduce, s_expand};
use crate::lie_algebra::LieAlgebra;
use crate::linalg::scalar_matrix;
use crate::scalar::{QSqrt2, ScalarExpr};
use crate::semigroup::make_cyclic;

#[derive(Clone, Debug)]
pub struct DualMcReport {
    /// Constants read from `dθ^C = −½ C'_{AB}^C θ^A θ^B` after substitution.
    pub dual: LieAlgebra,
    pub reduced: LieAlgebra,
    pub equals_reduced: bool,
    /// `dual` equals `reduced` after `T' = 2T`.
    pub equals_doubled_reduced: bool,
}

pub fn dual_mc_check(n: usize, l: &LieAlgebra) -> Result<DualMcReport> {
    let reduced = h_reduce(n, l)?;
    let full = s_expand(&make_cyclic(2 * n)?, l);
    let d = l.dim();
    let half = n * d;
    // θ^X for X = tag·d + A
    let theta = |x: usize| -> ScalarForm {
        let (sign, y) = if x < half { (1, x) } else { (-1, x - half) };
        ScalarForm::symbol(FormSymbol::mc(y)).scale(&ScalarExpr::int(sign))
    };
    let mut triples = Vec::new();
    for z in 0..half {
        let mut rhs = ScalarForm::zero();
        for (&(a, b), br) in full.stored() {
            for &(c, v) in br {
                if c == z {
                    // both orders of the antisymmetric pair cancel the ½
                    rhs.add_scaled(&wedge(&theta(a), &theta(b)), &ScalarExpr::constant(-v));
                }
            }
        }
        // dθ^z = −Σ_{X<Y} C'_{XY}^z θ^X θ^Y
        for (m, c) in rhs.terms() {
            let (x, y) = (m[0].idx[0] as usize, m[1].idx[0] as usize);
            let v = c.as_constant().expect("constant structure coefficients");
            triples.push((x, y, z, -v));
        }
    }
    let dual = LieAlgebra::from_triples(format!("{}_dual", reduced.name), reduced.labels().to_vec(), triples)?;
    let doubled = reduced.change_basis(&scalar_matrix(reduced.dim(), QSqrt2::int(2)))?;
    Ok(DualMcReport {
        equals_reduced: dual.same_constants(&reduced),
        equals_doubled_reduced: dual.same_constants(&doubled),
        dual,
        reduced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_algebra::make_ads;

    #[test]
    fn dual_route_gives_twice_the_constants() {
        let r = dual_mc_check(2, &make_ads(3)).unwrap();
        assert!(!r.equals_reduced);
        assert!(r.equals_doubled_reduced);
    }
}
