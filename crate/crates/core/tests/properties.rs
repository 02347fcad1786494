use itertools::Itertools;
use proptest::prelude::*;

use liexp_core::expansion::{h_reduce, half_turn_pairing, impose_sign_identification, s_expand, zero_reduce};
use liexp_core::graded_forms::{
    canonicalize, connection, curvature, exterior_d, homotopy_primitive, lie_bracket_form, transgression, wedge, Field,
    FormSymbol, LieValuedForm, ScalarForm,
};
use liexp_core::invariant_tensor::{ads_epsilon, alpha_symbols, lift_h, rotate_tensor, verify_invariance};
use liexp_core::lie_algebra::{make_named, random_algebra_of_dim};
use liexp_core::linalg::{identity, mat_mul, Matrix};
use liexp_core::pipeline::{run_algebra, run_tensor};
use liexp_core::semigroup::{by_name, make_cyclic, selector};
use liexp_core::{fixtures, InvariantTensor, LieAlgebra, QSqrt2, ScalarExpr, SelectorQuery, Semigroup};

const SEMIGROUPS: &[&str] = &["Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "D4", "SE1", "SE2", "SE3", "SE6", "Z2 x Z4", "Z2 x SE1", "SE1 x SE1"];

fn rational() -> impl Strategy<Value = QSqrt2> {
    (-6i128..=6, 1i128..=4).prop_map(|(n, d)| QSqrt2::frac(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = QSqrt2> {
    (prop_oneof![-5i128..=-1, 1i128..=5], 1i128..=3).prop_map(|(n, d)| QSqrt2::frac(n, d))
}

/// Unit lower triangular times upper triangular with nonzero diagonal.
/// `L·U` with small integer off-diagonal entries and diagonal in {±1, ±2, ±1/2},
/// so rebased structure constants stay well inside i128.
fn invertible(n: usize) -> impl Strategy<Value = Matrix> {
    let small = || proptest::collection::vec((-1i128..=1).prop_map(QSqrt2::int), n * n);
    let diag = proptest::sample::select(vec![(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2)]);
    (small(), small(), proptest::collection::vec(diag, n))
        .prop_map(move |(lo, up, diag)| {
            let mut l = identity(n);
            let mut u = identity(n);
            for i in 0..n {
                for j in 0..n {
                    if j < i {
                        l[i][j] = lo[i * n + j];
                    } else if j > i {
                        u[i][j] = up[i * n + j];
                    }
                }
                u[i][i] = QSqrt2::frac(diag[i].0, diag[i].1);
            }
            mat_mul(&l, &u)
        })
}

fn vector(n: usize) -> impl Strategy<Value = Vec<QSqrt2>> {
    proptest::collection::vec(rational(), n)
}

fn small_algebra() -> impl Strategy<Value = LieAlgebra> {
    prop_oneof![
        Just(make_named("so3").unwrap()),
        Just(make_named("so31").unwrap()),
        Just(make_named("ads3").unwrap()),
        (1u64..40).prop_map(|s| random_algebra_of_dim(s, 4, 3, 2, false)),
    ]
}

fn symbol() -> impl Strategy<Value = FormSymbol> {
    let base = prop_oneof![
        (0usize..3).prop_map(|a| FormSymbol::vector(Field::E, a)),
        (0usize..3).prop_map(|a| FormSymbol::vector(Field::H, a)),
        (0usize..3, 0usize..3).prop_filter_map("distinct indices", |(a, b)| FormSymbol::pair(Field::Omega, a, b).map(|p| p.1)),
        (0usize..3, 0usize..3).prop_filter_map("distinct indices", |(a, b)| FormSymbol::pair(Field::K, a, b).map(|p| p.1)),
    ];
    (base, any::<bool>()).prop_map(|(s, d)| if d { s.d() } else { s })
}

fn word() -> impl Strategy<Value = Vec<FormSymbol>> {
    proptest::collection::vec(symbol(), 1..5)
}

fn form() -> impl Strategy<Value = ScalarForm> {
    proptest::collection::vec((word(), nonzero_rational()), 1..5).prop_map(|terms| {
        let mut f = ScalarForm::zero();
        for (w, c) in terms {
            f.add_assign(&ScalarForm::monomial(&w, ScalarExpr::constant(c)));
        }
        f
    })
}

fn word_degree(w: &[FormSymbol]) -> usize {
    w.iter().map(|s| s.degree()).sum()
}

const C3_SLOTS: [(Field, &str, Option<usize>); 4] =
    [(Field::Omega, "J", Some(0)), (Field::E, "P", Some(0)), (Field::K, "J", Some(1)), (Field::H, "P", Some(1))];

/// C_3 with the α pairing under which its lifted tensor is invariant.
fn c3_paired() -> (LieAlgebra, InvariantTensor) {
    let cfg = fixtures::pipeline("c3_paired").unwrap();
    let run = run_algebra(&cfg, None).unwrap();
    let t = run_tensor(&run, cfg.tensor.as_ref().unwrap()).unwrap().tensor;
    let a = alpha_symbols(2);
    let paired = [a[0].clone(), a[1].clone(), -&a[0], -&a[1]];
    (run.algebra, t.substitute_alphas(&paired))
}

fn c3_connection(l: &LieAlgebra, mask: u8) -> LieValuedForm {
    let slots: Vec<_> = C3_SLOTS.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, s)| *s).collect();
    connection(l, &slots).unwrap()
}

// ---------- semigroups ----------

#[test]
fn constructed_semigroups_validate() {
    for n in SEMIGROUPS {
        by_name(n).unwrap().validate().unwrap();
    }
}

#[test]
fn chain_identity_exhaustive() {
    for n in SEMIGROUPS {
        let s = by_name(n).unwrap();
        let k = |lower: Vec<usize>, upper| selector(&s, &SelectorQuery { lower, upper }).unwrap();
        for (a, b, c, d) in (0..s.order).cartesian_product(0..s.order).cartesian_product(0..s.order).cartesian_product(0..s.order).map(|(((a, b), c), d)| (a, b, c, d)) {
            let sum: u8 = (0..s.order).map(|e| k(vec![a, b], e) * k(vec![e, c], d)).sum();
            assert_eq!(k(vec![a, b, c], d), sum, "{n}: ({a},{b},{c}) -> {d}");
        }
    }
}

proptest! {
    #[test]
    fn selector_complete_and_symmetric(
        name in proptest::sample::select(SEMIGROUPS),
        raw in proptest::collection::vec(0usize..64, 2..5),
        perm_seed in any::<u64>(),
    ) {
        let s = by_name(name).unwrap();
        let lower: Vec<usize> = raw.iter().map(|x| x % s.order).collect();
        let values: Vec<u8> = (0..s.order).map(|g| selector(&s, &SelectorQuery { lower: lower.clone(), upper: g }).unwrap()).collect();
        prop_assert_eq!(values.iter().map(|&v| v as usize).sum::<usize>(), 1);
        let mut shuffled = lower.clone();
        let r = shuffled.len();
        shuffled.rotate_left((perm_seed as usize) % r);
        shuffled.swap(0, (perm_seed as usize / 7) % r);
        for g in 0..s.order {
            prop_assert_eq!(selector(&s, &SelectorQuery { lower: shuffled.clone(), upper: g }).unwrap(), values[g]);
        }
    }

    #[test]
    fn semigroup_json_round_trip(name in proptest::sample::select(SEMIGROUPS)) {
        let s = by_name(name).unwrap();
        prop_assert_eq!(Semigroup::from_json(&s.to_json()).unwrap(), s);
    }
}

// ---------- Lie algebras ----------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn killing_profile_is_basis_invariant(l in small_algebra(), m in invertible(6)) {
        let n = l.dim();
        let m: Matrix = m.into_iter().take(n).map(|r| r.into_iter().take(n).collect()).collect();
        prop_assume!(liexp_core::linalg::rank(&m) == n);
        let changed = l.change_basis(&m).unwrap();
        prop_assert!(changed.check_axioms().ok);
        prop_assert_eq!(changed.killing_profile(), l.killing_profile());
    }

    #[test]
    fn bracket_is_bilinear(a in rational(), b in rational(), x in vector(6), y in vector(6), z in vector(6)) {
        let l = make_named("ads3").unwrap();
        let ax_by: Vec<QSqrt2> = x.iter().zip(&y).map(|(p, q)| a * *p + b * *q).collect();
        let lhs = l.bracket(&ax_by, &z).unwrap();
        let bx = l.bracket(&x, &z).unwrap();
        let by = l.bracket(&y, &z).unwrap();
        let rhs: Vec<QSqrt2> = bx.iter().zip(&by).map(|(p, q)| a * *p + b * *q).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn algebra_json_round_trip(l in small_algebra()) {
        prop_assert_eq!(LieAlgebra::from_json(&l.to_json()).unwrap(), l);
    }
}

// ---------- expansions ----------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn s_expand_satisfies_axioms(l in small_algebra(), name in proptest::sample::select(&SEMIGROUPS[..12])) {
        let s = by_name(name).unwrap();
        let g = s_expand(&s, &l);
        prop_assert_eq!(g.dim(), s.order * l.dim());
        prop_assert!(g.check_axioms().ok);
        if s.zero.is_some() {
            let r = zero_reduce(&g, &s).unwrap();
            prop_assert_eq!(r.dim(), (s.order - 1) * l.dim());
            prop_assert!(r.check_axioms().ok);
        }
    }

    #[test]
    fn h_reduce_axioms_dimension_and_sign_identification(l in small_algebra(), n in 1usize..=4) {
        let h = h_reduce(n, &l).unwrap();
        prop_assert_eq!(h.dim(), n * l.dim());
        prop_assert!(h.check_axioms().ok);
        let z = make_cyclic(2 * n).unwrap();
        let signed = impose_sign_identification(&s_expand(&z, &l), &z, &half_turn_pairing(n)).unwrap();
        prop_assert!(signed.same_constants(&h));
    }
}

// ---------- invariant tensors ----------

#[test]
fn lift_h_with_n_one_scales_the_base_tensor() {
    for name in ["ads3", "ads5"] {
        let l = make_named(name).unwrap();
        let eps = ads_epsilon(&l).unwrap();
        let lifted = lift_h(1, &eps, &[ScalarExpr::alpha(0), ScalarExpr::alpha(0)]).unwrap();
        assert_eq!(lifted, eps.map_values(|v| v.try_mul(&ScalarExpr::alpha(0)).unwrap()));
        assert!(verify_invariance(&h_reduce(1, &l).unwrap(), &lifted).ok);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rotation_commutes_with_invariance(m in invertible(6), broken in any::<bool>()) {
        let l = make_named("ads3").unwrap();
        let mut t = ads_epsilon(&l).unwrap();
        if broken {
            t.set(&[0, 3], ScalarExpr::one()).unwrap();
        }
        let before = verify_invariance(&l, &t).ok;
        prop_assert_eq!(before, !broken);
        let inv = liexp_core::linalg::inverse(&m).unwrap();
        // generators T'_i = Σ M_ia T_a: constants by change_basis, tensor by rotate_tensor
        let l2 = l.change_basis(&m).unwrap();
        let t2 = rotate_tensor(&t, &m).unwrap();
        prop_assert_eq!(verify_invariance(&l2, &t2).ok, before);
        prop_assert_eq!(rotate_tensor(&t2, &inv).unwrap(), t);
    }

    #[test]
    fn paired_alpha_lift_is_invariant(a in nonzero_rational(), b in rational()) {
        let l = make_named("ads3").unwrap();
        let eps = ads_epsilon(&l).unwrap();
        let alphas = [a, b, -a, -b].map(ScalarExpr::constant);
        let t = lift_h(2, &eps, &alphas).unwrap();
        prop_assert!(verify_invariance(&h_reduce(2, &l).unwrap(), &t).ok);
    }

    #[test]
    fn tensor_json_round_trip(a in nonzero_rational(), n in 1usize..=3) {
        let eps = ads_epsilon(&make_named("ads3").unwrap()).unwrap();
        let mut alphas = alpha_symbols(2 * n);
        alphas[0] = ScalarExpr::constant(a);
        let t = lift_h(n, &eps, &alphas).unwrap();
        prop_assert_eq!(InvariantTensor::from_json(&t.to_json()).unwrap(), t);
    }
}

// ---------- graded forms ----------

proptest! {
    #[test]
    fn d_squared_vanishes(f in form()) {
        prop_assert!(exterior_d(&exterior_d(&f)).is_zero());
    }

    #[test]
    fn graded_commutativity(x in word(), y in word(), c in nonzero_rational()) {
        let fx = ScalarForm::monomial(&x, ScalarExpr::constant(c));
        let fy = ScalarForm::monomial(&y, ScalarExpr::one());
        let sign = if word_degree(&x) * word_degree(&y) % 2 == 1 { -1 } else { 1 };
        prop_assert_eq!(wedge(&fx, &fy), wedge(&fy, &fx).scale(&ScalarExpr::int(sign)));
    }

    #[test]
    fn leibniz_rule(x in word(), y in word()) {
        let fx = ScalarForm::monomial(&x, ScalarExpr::one());
        let fy = ScalarForm::monomial(&y, ScalarExpr::one());
        let sign = if word_degree(&x) % 2 == 1 { -1 } else { 1 };
        let mut rhs = wedge(&exterior_d(&fx), &fy);
        rhs.add_assign(&wedge(&fx, &exterior_d(&fy)).scale(&ScalarExpr::int(sign)));
        prop_assert_eq!(exterior_d(&wedge(&fx, &fy)), rhs);
    }

    #[test]
    fn canonicalization_is_idempotent(f in form()) {
        for (m, _) in f.terms() {
            let (sign, again) = canonicalize(m).expect("stored monomials are nonzero");
            prop_assert_eq!(sign, 1);
            prop_assert_eq!(&again, m);
        }
    }

    #[test]
    fn form_json_round_trip(f in form()) {
        prop_assert_eq!(ScalarForm::from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn homotopy_inverts_d_on_closed_forms(f in form()) {
        let df = exterior_d(&f);
        prop_assume!(!df.is_zero());
        let p = homotopy_primitive(&df).expect("exact forms have primitives");
        prop_assert_eq!(exterior_d(&p), df);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(15))]

    #[test]
    fn bianchi_identity_on_c3(mask in 1u8..16) {
        let (l, _) = c3_paired();
        let a = c3_connection(&l, mask);
        let f = curvature(&a, &l);
        let mut lhs = f.d();
        lhs.add_assign(&lie_bracket_form(&a, &f, &l));
        prop_assert!(lhs.is_zero());
    }

    #[test]
    fn transgression_vanishes_on_the_diagonal(mask in 1u8..16) {
        let (l, t) = c3_paired();
        let a = c3_connection(&l, mask);
        prop_assert!(transgression(&a, &a, &l, &t).unwrap().is_zero());
    }

    #[test]
    fn transgression_antisymmetric_modulo_exact(m1 in 1u8..16, m2 in 0u8..16) {
        let (l, t) = c3_paired();
        let (a, b) = (c3_connection(&l, m1), c3_connection(&l, m2));
        let mut sum = transgression(&a, &b, &l, &t).unwrap();
        sum.add_assign(&transgression(&b, &a, &l, &t).unwrap());
        prop_assert!(exterior_d(&sum).is_zero());
        if !sum.is_zero() {
            let p = homotopy_primitive(&sum).unwrap();
            prop_assert_eq!(exterior_d(&p), sum);
        }
        for (m, _) in transgression(&a, &b, &l, &t).unwrap().terms() {
            prop_assert_eq!(canonicalize(m).unwrap(), (1, m.clone()));
        }
    }
}

#[test]
fn bianchi_identity_on_b5() {
    let cfg = fixtures::pipeline("b5").unwrap();
    let run = run_algebra(&cfg, None).unwrap();
    let slots: Vec<(Field, &str, Option<usize>)> =
        vec![(Field::Omega, "J", Some(0)), (Field::E, "P", Some(1)), (Field::K, "J", Some(2)), (Field::H, "P", Some(3))];
    let a = connection(&run.algebra, &slots).unwrap();
    let f = curvature(&a, &run.algebra);
    let mut lhs = f.d();
    lhs.add_assign(&lie_bracket_form(&a, &f, &run.algebra));
    assert!(lhs.is_zero());
}
