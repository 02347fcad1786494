//! Transgression forms `Q(A, Ā) = r ∫₀¹ ⟨Δ, F_t, …, F_t⟩ dt` for a
//! symmetric rank-`r` tensor, with `Δ = A − Ā` and `A_t = Ā + tΔ`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{curvature, lie_bracket_form, wedge, LieValuedForm, ScalarForm};
use crate::error::{invalid, Result};
use crate::invariant_tensor::InvariantTensor;
use crate::lie_algebra::LieAlgebra;
use crate::scalar::{QSqrt2, ScalarExpr};

/// Polynomial in `t` with form coefficients, indexed by power.
type TPoly = Vec<ScalarForm>;

fn poly_add_scaled(acc: &mut TPoly, p: &TPoly, c: &ScalarExpr) {
    if acc.len() < p.len() {
        acc.resize(p.len(), ScalarForm::zero());
    }
    for (a, x) in acc.iter_mut().zip(p) {
        a.add_scaled(x, c);
    }
}

fn poly_add(acc: &mut TPoly, p: &TPoly) {
    if acc.len() < p.len() {
        acc.resize(p.len(), ScalarForm::zero());
    }
    for (a, x) in acc.iter_mut().zip(p) {
        a.add_assign(x);
    }
}

fn poly_wedge(a: &TPoly, b: &TPoly) -> TPoly {
    let mut out = vec![ScalarForm::zero(); (a.len() + b.len()).saturating_sub(1)];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j].add_assign(&wedge(x, y));
            }
        }
    }
    out
}

/// Generator index to `t`-polynomial of forms.
type Slot = BTreeMap<usize, TPoly>;

fn slot_from(parts: &[&LieValuedForm]) -> Slot {
    let mut s = Slot::new();
    for (power, f) in parts.iter().enumerate() {
        for (&a, form) in f.components() {
            let e = s.entry(a).or_insert_with(|| vec![ScalarForm::zero(); parts.len()]);
            e[power] = form.clone();
        }
    }
    s
}

/// `Σ T_{A1…Ar} X1^{A1} ∧ … ∧ Xr^{Ar}` over ordered entries, evaluated
/// right to left so each shared prefix is wedged once.
fn contract_slots(entries: &[(Vec<usize>, ScalarExpr)], slots: &[Slot], level: usize) -> TPoly {
    let last = slots.len() - 1;
    if level == last {
        let mut acc = TPoly::new();
        for (idx, v) in entries {
            if let Some(p) = slots[last].get(&idx[last]) {
                poly_add_scaled(&mut acc, p, v);
            }
        }
        return acc;
    }
    let groups: Vec<&[(Vec<usize>, ScalarExpr)]> = entries.chunk_by(|x, y| x.0[level] == y.0[level]).collect();
    let eval = |g: &&[(Vec<usize>, ScalarExpr)]| -> TPoly {
        let a = g[0].0[level];
        match slots[level].get(&a) {
            Some(p) => {
                let inner = contract_slots(g, slots, level + 1);
                poly_wedge(p, &inner)
            }
            None => TPoly::new(),
        }
    };
    if level == 0 {
        groups.par_iter().map(eval).reduce(TPoly::new, |mut a, b| {
            poly_add(&mut a, &b);
            a
        })
    } else {
        let mut acc = TPoly::new();
        for g in &groups {
            poly_add(&mut acc, &eval(g));
        }
        acc
    }
}

/// Full contraction `⟨X1, …, Xr⟩` of Lie-valued forms.
pub fn contract(t: &InvariantTensor, forms: &[&LieValuedForm]) -> Result<ScalarForm> {
    let slots: Vec<Slot> = forms.iter().map(|f| slot_from(&[f])).collect();
    let p = contract_poly(t, &slots)?;
    Ok(p.into_iter().next().unwrap_or_default())
}

fn contract_poly(t: &InvariantTensor, slots: &[Slot]) -> Result<TPoly> {
    if slots.len() != t.rank {
        return Err(invalid(format!("rank {} tensor contracted with {} forms", t.rank, slots.len())));
    }
    let mut entries = t.ordered_entries();
    entries.retain(|(idx, _)| idx.iter().zip(slots).all(|(a, s)| s.contains_key(a)));
    entries.sort();
    if entries.is_empty() {
        return Ok(TPoly::new());
    }
    Ok(contract_slots(&entries, slots, 0))
}

/// `Q(A, Ā)`; `Ā = 0` gives the Chern–Simons form.
pub fn transgression(a: &LieValuedForm, abar: &LieValuedForm, l: &LieAlgebra, t: &InvariantTensor) -> Result<ScalarForm> {
    if t.dim != l.dim() || a.dim != l.dim() || abar.dim != l.dim() {
        return Err(invalid("connection, tensor and algebra dimensions differ"));
    }
    let delta = a.sub(abar);
    let f0 = curvature(abar, l);
    let mut f1 = delta.d();
    f1.add_assign(&lie_bracket_form(abar, &delta, l));
    let f2 = lie_bracket_form(&delta, &delta, l).scale(&ScalarExpr::rational(1, 2));
    let mut slots = vec![slot_from(&[&delta])];
    let ft = slot_from(&[&f0, &f1, &f2]);
    slots.extend(std::iter::repeat(ft).take(t.rank - 1));
    let poly = contract_poly(t, &slots)?;
    let mut q = ScalarForm::zero();
    for (m, f) in poly.iter().enumerate() {
        q.add_scaled(f, &ScalarExpr::constant(QSqrt2::frac(t.rank as i128, m as i128 + 1)));
    }
    Ok(q)
}

pub fn chern_simons(a: &LieValuedForm, l: &LieAlgebra, t: &InvariantTensor) -> Result<ScalarForm> {
    transgression(a, &LieValuedForm::zero(l.dim()), l, t)
}

/// Pieces `Q(A_i, A_{i+1})` of a chain `A_0 → A_1 → … → A_k`; they sum to
/// `Q(A_0, A_k)` up to an exact form.
pub fn subspace_separation(chain: &[LieValuedForm], l: &LieAlgebra, t: &InvariantTensor) -> Result<Vec<ScalarForm>> {
    if chain.len() < 2 {
        return Err(invalid("separation chain needs at least two connections"));
    }
    chain.par_windows(2).map(|w| transgression(&w[0], &w[1], l, t)).collect()
}
