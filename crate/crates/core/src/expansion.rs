//! S-expansion, 0_S-reduction, resonant subalgebras, the H-condition
//! reduction on `Z_{2n}` and general sign identifications.
//!
//! Expanded generators `(A, α)` of an algebra of dimension `d` sit at index
//! `α·d + A`. Reductions keep the surviving generators in that order and
//! re-index densely; labels keep `(A, α)`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::lie_algebra::{ExpandedLabel, Label, LieAlgebra};
use crate::linalg;
use crate::scalar::QSqrt2;
use crate::semigroup::{make_cyclic, Semigroup};

/// Partition of the base generators into subspaces `V_p` and the subsets
/// `S_p` of semigroup elements kept over each.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResonanceSpec {
    pub subspace_partition: Vec<Vec<usize>>,
    pub subset_cover: Vec<Vec<usize>>,
}

fn expanded_labels(l: &LieAlgebra, tags: impl Iterator<Item = usize>) -> Vec<Label> {
    let d = l.dim();
    tags.flat_map(|t| (0..d).map(move |a| (t, a)))
        .map(|(t, a)| Label::expanded(&l.labels()[a], a, t))
        .collect()
}

/// `[T_(A,α), T_(B,β)] = K_{αβ}^γ C_{AB}^C T_(C,γ)`.
pub fn s_expand(s: &Semigroup, l: &LieAlgebra) -> LieAlgebra {
    let d = l.dim();
    let mut triples = Vec::new();
    for (&(a, b), br) in l.stored() {
        for i in 0..s.order {
            for j in 0..s.order {
                let g = s.mul(i, j);
                for &(c, v) in br {
                    triples.push((i * d + a, j * d + b, g * d + c, v));
                }
            }
        }
    }
    LieAlgebra::from_triples(
        format!("{}x{}", s.name, l.name),
        expanded_labels(l, 0..s.order),
        triples,
    )
    .expect("expansion of a valid algebra")
}

fn expanded_parts(g: &LieAlgebra) -> Result<Vec<&ExpandedLabel>> {
    g.labels()
        .iter()
        .map(|l| l.as_expanded().ok_or_else(|| invalid(format!("label {l} carries no semigroup tag"))))
        .collect()
}

/// Restriction to the generators selected by `keep`, discarding bracket
/// components that leave the kept set when `quotient` is true.
fn restrict(g: &LieAlgebra, keep: &[bool], quotient: bool, name: String) -> Result<LieAlgebra> {
    let mut map = vec![usize::MAX; g.dim()];
    let mut labels = Vec::new();
    for (i, _) in keep.iter().enumerate().filter(|(_, k)| **k) {
        map[i] = labels.len();
        labels.push(g.labels()[i].clone());
    }
    let mut triples = Vec::new();
    for (&(a, b), br) in g.stored() {
        if !keep[a] || !keep[b] {
            continue;
        }
        for &(c, v) in br {
            if keep[c] {
                triples.push((map[a], map[b], map[c], v));
            } else if !quotient {
                return Err(invalid(format!(
                    "[{}, {}] leaves the subspace through {}",
                    g.labels()[a],
                    g.labels()[b],
                    g.labels()[c]
                )));
            }
        }
    }
    LieAlgebra::from_triples(name, labels, triples)
}

/// Removes every generator tagged by the zero of `s`.
pub fn zero_reduce(g: &LieAlgebra, s: &Semigroup) -> Result<LieAlgebra> {
    let z = s.zero.ok_or_else(|| Error::NoZero(s.name.clone()))?;
    let parts = expanded_parts(g)?;
    let keep: Vec<bool> = parts.iter().map(|e| e.tag != z).collect();
    restrict(g, &keep, true, format!("{}/0", g.name))
}

/// Resonant subalgebra of an expanded algebra: `(A, α)` is kept iff
/// `α ∈ S_p` for the part `p` containing `A`.
pub fn resonant_subalgebra(g: &LieAlgebra, s: &Semigroup, spec: &ResonanceSpec) -> Result<LieAlgebra> {
    let parts = expanded_parts(g)?;
    let base_dim = parts.iter().map(|e| e.base_index + 1).max().unwrap_or(0);
    if spec.subspace_partition.len() != spec.subset_cover.len() {
        return Err(invalid("partition and subset cover have different lengths"));
    }
    let mut part_of = vec![usize::MAX; base_dim];
    for (p, members) in spec.subspace_partition.iter().enumerate() {
        for &a in members {
            if a >= base_dim || part_of[a] != usize::MAX {
                return Err(invalid(format!("generator {a} is out of range or in two parts")));
            }
            part_of[a] = p;
        }
    }
    if let Some(a) = part_of.iter().position(|&p| p == usize::MAX) {
        return Err(invalid(format!("generator {a} is in no part")));
    }
    if spec.subset_cover.iter().flatten().any(|&x| x >= s.order) {
        return Err(invalid("subset element out of range"));
    }
    let np = spec.subspace_partition.len();
    // i(p,q) from the structure constants
    let mut targets = vec![vec![BTreeSet::new(); np]; np];
    for (&(a, b), br) in g.stored() {
        let (p, q) = (part_of[parts[a].base_index], part_of[parts[b].base_index]);
        for &(c, _) in br {
            let r = part_of[parts[c].base_index];
            targets[p][q].insert(r);
            targets[q][p].insert(r);
        }
    }
    for p in 0..np {
        for q in 0..np {
            if targets[p][q].is_empty() {
                continue;
            }
            let allowed: BTreeSet<usize> =
                targets[p][q].iter().flat_map(|&r| spec.subset_cover[r].iter().copied()).collect();
            for &x in &spec.subset_cover[p] {
                for &y in &spec.subset_cover[q] {
                    let e = s.mul(x, y);
                    if !allowed.contains(&e) {
                        return Err(Error::ResonanceViolated { p, q, element: e });
                    }
                }
            }
        }
    }
    let keep: Vec<bool> = parts
        .iter()
        .map(|e| spec.subset_cover[part_of[e.base_index]].contains(&e.tag))
        .collect();
    restrict(g, &keep, false, format!("{}_R", g.name))
}

/// Brackets of the reduction on tags `0..n` of `Z_{2n} × L`:
/// `(K_{ij}^k − K_{ij}^{k+n}) C_{AB}^C`.
pub fn h_reduce(n: usize, l: &LieAlgebra) -> Result<LieAlgebra> {
    if n == 0 {
        return Err(invalid("h_reduce needs n >= 1"));
    }
    let d = l.dim();
    let mut triples = Vec::new();
    for (&(a, b), br) in l.stored() {
        for i in 0..n {
            for j in 0..n {
                let k = (i + j) % (2 * n);
                let (tag, sign) = if k < n { (k, 1) } else { (k - n, -1) };
                for &(c, v) in br {
                    triples.push((i * d + a, j * d + b, tag * d + c, v * QSqrt2::int(sign)));
                }
            }
        }
    }
    LieAlgebra::from_triples(format!("({}x{})_H", make_cyclic(2 * n)?.name, l.name), expanded_labels(l, 0..n), triples)
}

#[derive(Clone, Debug)]
pub struct GreaterInterval {
    /// Generators `(A, i+n)` for `i < n`.
    pub algebra: LieAlgebra,
    /// `T' = −T` maps it onto [`h_reduce`].
    pub matches_h_reduce: bool,
}

/// Brackets on tags `n..2n`: `−(K_{ij}^k − K_{ij}^{k+n}) C_{AB}^C` into
/// `(C, k+n)`.
pub fn greater_interval_algebra(n: usize, l: &LieAlgebra) -> Result<GreaterInterval> {
    if n == 0 {
        return Err(invalid("greater_interval_algebra needs n >= 1"));
    }
    let d = l.dim();
    let mut triples = Vec::new();
    for (&(a, b), br) in l.stored() {
        for i in 0..n {
            for j in 0..n {
                // (i+n)+(j+n) = i+j mod 2n; λ_k with k < n is −T_(C,k+n)
                let g = (i + j) % (2 * n);
                let (pos, sign) = if g < n { (g, -1) } else { (g - n, 1) };
                for &(c, v) in br {
                    triples.push((i * d + a, j * d + b, pos * d + c, v * QSqrt2::int(sign)));
                }
            }
        }
    }
    let algebra = LieAlgebra::from_triples(
        format!("({}x{})_H>", make_cyclic(2 * n)?.name, l.name),
        expanded_labels(l, n..2 * n),
        triples,
    )?;
    let flipped = algebra.change_basis(&linalg::scalar_matrix(algebra.dim(), -QSqrt2::one()))?;
    let matches_h_reduce = flipped.same_constants(&h_reduce(n, l)?);
    Ok(GreaterInterval { algebra, matches_h_reduce })
}

/// Checks that `pairing` is a fixed-point-free involution compatible with
/// the product, returning the representative and sign of every element.
pub fn signed_quotient(s: &Semigroup, pairing: &[usize]) -> Result<Vec<(usize, i128)>> {
    if pairing.len() != s.order {
        return Err(invalid("pairing length differs from semigroup order"));
    }
    for (a, &b) in pairing.iter().enumerate() {
        if b >= s.order || pairing[b] != a || a == b {
            return Err(invalid(format!("pairing is not a fixed-point-free involution at {a}")));
        }
    }
    let rs: Vec<(usize, i128)> =
        (0..s.order).map(|a| if a < pairing[a] { (a, 1) } else { (pairing[a], -1) }).collect();
    for a in 0..s.order {
        for b in 0..s.order {
            let direct = rs[s.mul(a, b)];
            let via = rs[s.mul(rs[a].0, rs[b].0)];
            if direct.0 != via.0 || direct.1 != rs[a].1 * rs[b].1 * via.1 {
                return Err(Error::InconsistentPairing { a, b });
            }
        }
    }
    Ok(rs)
}

/// Imposes `T_(A, pair(α)) = −T_(A, α)` on an expansion of `s`; the smaller
/// element of each pair is kept.
pub fn impose_sign_identification(g: &LieAlgebra, s: &Semigroup, pairing: &[usize]) -> Result<LieAlgebra> {
    let rs = signed_quotient(s, pairing)?;
    let parts = expanded_parts(g)?;
    let index: BTreeMap<(usize, usize), usize> =
        parts.iter().enumerate().map(|(i, e)| ((e.base_index, e.tag), i)).collect();
    let reps: Vec<usize> = (0..s.order).filter(|&a| rs[a].1 == 1).collect();
    let rank: BTreeMap<usize, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let d = parts.len() / s.order;
    if d * s.order != parts.len() {
        return Err(invalid("algebra is not an expansion of this semigroup"));
    }
    let mut labels = vec![None; d * reps.len()];
    for e in &parts {
        if let Some(&k) = rank.get(&e.tag) {
            labels[k * d + e.base_index] = Some(Label::Expanded((*e).clone()));
        }
    }
    let labels: Vec<Label> =
        labels.into_iter().map(|l| l.ok_or_else(|| invalid("missing expanded generator"))).collect::<Result<_>>()?;
    let mut triples = Vec::new();
    for (&ra, &ka) in &rank {
        for (&rb, &kb) in &rank {
            for a in 0..d {
                for b in 0..d {
                    let (Some(&x), Some(&y)) = (index.get(&(a, ra)), index.get(&(b, rb))) else {
                        return Err(invalid("missing expanded generator"));
                    };
                    for (z, v) in g.basis_bracket(x, y) {
                        let e = parts[z];
                        let (rep, sign) = rs[e.tag];
                        triples.push((ka * d + a, kb * d + b, rank[&rep] * d + e.base_index, v * QSqrt2::int(sign)));
                    }
                }
            }
        }
    }
    // each unordered pair was visited in both orders
    let triples: Vec<_> = triples.into_iter().filter(|(x, y, _, _)| x < y).collect();
    LieAlgebra::from_triples(format!("{}_sign", g.name), labels, triples)
}

/// Pairing `i ↔ i+n` on `Z_{2n}`.
pub fn half_turn_pairing(n: usize) -> Vec<usize> {
    (0..2 * n).map(|i| (i + n) % (2 * n)).collect()
}

/// Basis change `T' = c·T`.
pub fn uniform_scaling(g: &LieAlgebra, c: QSqrt2) -> Result<LieAlgebra> {
    if c.is_zero() {
        return Err(Error::SingularMatrix);
    }
    g.change_basis(&linalg::scalar_matrix(g.dim(), c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_algebra::{make_abelian, make_named};
    use crate::semigroup::{make_klein, make_se};

    #[test]
    fn z2_expansion_of_so3_looks_like_so4() {
        let so3 = make_named("so3").unwrap();
        let g = s_expand(&make_cyclic(2).unwrap(), &so3);
        assert_eq!(g.dim(), 6);
        assert_eq!(g.killing_profile(), make_named("so4").unwrap().killing_profile());
    }

    #[test]
    fn h_reduce_two_gives_lorentz() {
        let so3 = make_named("so3").unwrap();
        let h = h_reduce(2, &so3).unwrap();
        assert!(h.same_constants(&make_named("so31").unwrap()));
    }

    #[test]
    fn h_reduce_one_is_identity() {
        let so3 = make_named("so3").unwrap();
        assert!(h_reduce(1, &so3).unwrap().same_constants(&so3));
    }

    #[test]
    fn h_reduce_ads5_vector_bracket() {
        // [Z_a, Z_b] = −J_ab with Z_a = (P_a, 1)
        let ads5 = make_named("ads5").unwrap();
        let h = h_reduce(2, &ads5).unwrap();
        let (p0, p1, j01) = (10, 11, 0);
        assert_eq!(h.constant(15 + p0, 15 + p1, j01), -QSqrt2::one());
        assert_eq!(h.constant(p0, p1, j01), QSqrt2::one());
    }

    #[test]
    fn zero_reduce_dimensions() {
        let so3 = make_named("so3").unwrap();
        let se1 = make_se(1);
        let g = zero_reduce(&s_expand(&se1, &so3), &se1).unwrap();
        assert_eq!(g.dim(), 6);
        let only_zero = Semigroup::new("zero", vec![vec![0]], Some(0)).unwrap();
        assert_eq!(zero_reduce(&s_expand(&only_zero, &so3), &only_zero).unwrap().dim(), 0);
        let z2 = make_cyclic(2).unwrap();
        assert!(matches!(zero_reduce(&s_expand(&z2, &so3), &z2), Err(Error::NoZero(_))));
    }

    fn b5_spec() -> ResonanceSpec {
        ResonanceSpec {
            subspace_partition: vec![(0..10).collect(), (10..15).collect()],
            subset_cover: vec![vec![0, 2, 4], vec![1, 3, 4]],
        }
    }

    #[test]
    fn b5_from_resonance() {
        let ads5 = make_named("ads5").unwrap();
        let se3 = make_se(3);
        let g = s_expand(&se3, &ads5);
        let r = resonant_subalgebra(&g, &se3, &b5_spec()).unwrap();
        assert_eq!(r.dim(), 45);
        let b5 = zero_reduce(&r, &se3).unwrap();
        assert_eq!(b5.dim(), 30);
        assert!(b5.check_axioms().ok);
    }

    #[test]
    fn broken_resonance_is_reported() {
        let ads5 = make_named("ads5").unwrap();
        let se3 = make_se(3);
        let g = s_expand(&se3, &ads5);
        let mut spec = b5_spec();
        spec.subset_cover[0] = vec![0, 1, 2, 4];
        let err = resonant_subalgebra(&g, &se3, &spec).unwrap_err();
        assert!(matches!(err, Error::ResonanceViolated { p: 0, q: 0, element: 3 }), "{err:?}");
    }

    #[test]
    fn greater_interval_maps_by_negation() {
        for name in ["so3", "ads3"] {
            let l = make_named(name).unwrap();
            for n in 1..=3 {
                assert!(greater_interval_algebra(n, &l).unwrap().matches_h_reduce);
            }
        }
    }

    #[test]
    fn klein_identification_gives_z2_expansion() {
        let so3 = make_named("so3").unwrap();
        let k = make_klein();
        let g = s_expand(&k, &so3);
        let q = impose_sign_identification(&g, &k, &[2, 3, 0, 1]).unwrap();
        let z2 = s_expand(&make_cyclic(2).unwrap(), &so3);
        assert!(q.same_constants(&z2));
        assert_eq!(q.labels(), z2.labels());
    }

    #[test]
    fn half_turn_identification_is_h_reduce() {
        let ads3 = make_named("ads3").unwrap();
        for n in 1..=3 {
            let z = make_cyclic(2 * n).unwrap();
            let q = impose_sign_identification(&s_expand(&z, &ads3), &z, &half_turn_pairing(n)).unwrap();
            assert!(q.same_constants(&h_reduce(n, &ads3).unwrap()), "n={n}");
        }
    }

    #[test]
    fn incompatible_pairing_fails() {
        let so3 = make_named("so3").unwrap();
        let z4 = make_cyclic(4).unwrap();
        let g = s_expand(&z4, &so3);
        let r = impose_sign_identification(&g, &z4, &[1, 0, 3, 2]);
        assert!(matches!(r, Err(Error::InconsistentPairing { .. })));
        assert!(signed_quotient(&z4, &[0, 1, 2, 3]).is_err());
    }

    #[test]
    fn abelian_stays_abelian() {
        let a = make_abelian(3);
        assert!(h_reduce(3, &a).unwrap().is_abelian());
    }
}
