mod common;

use common::*;
use lievec_core::realize::{realize_sl, DEFAULT_SEED};
use lievec_core::{ad_eigenvalue, closure_generate, generic_rank, parse_field, parse_fields, Error, Expr, VectorField};
use proptest::prelude::*;

fn xy() -> lievec_core::Chart {
    chart(&["x", "y"])
}

fn f(s: &str) -> VectorField {
    parse_field(s, &xy(), &[]).unwrap()
}

#[test]
fn brackets_of_planar_fields() {
    assert_eq!(f("D[x]").bracket(&f("x*D[y]")).unwrap(), f("D[y]"));
    assert_eq!(f("x*D[x]").bracket(&f("x^2*D[x]")).unwrap(), f("x^2*D[x]"));
    assert_eq!(f("exp(x)*D[x]").bracket(&f("exp(-x)*D[x]")).unwrap(), f("-2*D[x]"));
}

#[test]
fn projective_line_closes_in_dimension_three() {
    let gens = parse_fields("chart: x\nE = D[x]\nF = x^2*D[x]").unwrap();
    let b = closure_generate(&gens.fields, 10).unwrap();
    assert_eq!(b.len(), 3);
    let sc = b.structure_constants().unwrap();
    assert!(sc.is_antisymmetric());
    assert!(sc.satisfies_jacobi());
}

#[test]
fn closure_respects_budget() {
    let gens = parse_fields("chart: x\nA = D[x]\nB = x^3*D[x]").unwrap();
    assert_eq!(closure_generate(&gens.fields, 6).unwrap_err(), Error::BudgetExceeded(6));
}

#[test]
fn express_picks_the_sum_root() {
    let r = realize_sl(4, 1).unwrap();
    let b = r.basis().unwrap();
    let xa = b.get("Xa").unwrap();
    let xb = b.get("Xb").unwrap();
    let coeffs = b.express(&xa.bracket(xb).unwrap()).unwrap();
    let k = b.index_of("Xab").unwrap();
    for (i, c) in coeffs.iter().enumerate() {
        assert_eq!(*c != q(0), i == k, "coefficient {i} = {c}");
    }
    assert!(matches!(b.express(&xa.scale(&Expr::named("x"))), Err(Error::NotInSpan(_))));
}

#[test]
fn cartan_eigenvalues_in_sl3() {
    let r = realize_sl(3, 1).unwrap();
    let h = r.cartan().unwrap();
    let pos = r.generators();
    let xa = &pos.iter().find(|g| g.0 == "Xa").unwrap().1;
    let xb = &pos.iter().find(|g| g.0 == "Xb").unwrap().1;
    let raw = [
        ad_eigenvalue(&h[0], xa).unwrap(),
        ad_eigenvalue(&h[0], xb).unwrap(),
        ad_eigenvalue(&h[1], xa).unwrap(),
        ad_eigenvalue(&h[1], xb).unwrap(),
    ];
    // H_i = [X_ai, X_-ai] acts by minus the Cartan matrix
    assert_eq!(raw.to_vec(), vec![q(-2), q(1), q(1), q(-2)]);
    assert!(matches!(ad_eigenvalue(&h[0], &f("x*D[y]")), Err(Error::ChartMismatch(_) | Error::NotEigenvector(_))));
}

#[test]
fn generic_rank_examples() {
    assert_eq!(generic_rank(&[f("D[x]"), f("x*D[x]")], 5, DEFAULT_SEED).unwrap(), 1);
    assert_eq!(generic_rank(&[f("D[x]"), f("x*D[y]")], 5, DEFAULT_SEED).unwrap(), 2);
    assert_eq!(generic_rank(&[f("exp(x)*D[x]"), f("exp(y)*(D[y] - D[x])")], 5, DEFAULT_SEED).unwrap(), 2);
    assert_eq!(generic_rank(&[f("y*D[x] - x*D[y]"), f("x*D[x] + y*D[y]")], 5, 1).unwrap(), 2);
    assert_eq!(generic_rank(&[f("y*D[x]"), f("y^2*D[x]")], 5, 1).unwrap(), 1);
}

fn constant_field() -> impl Strategy<Value = VectorField> {
    proptest::collection::vec(-3i64..=3, 3)
        .prop_map(|cs| VectorField::new(chart(&VARS), cs.into_iter().map(Expr::int).collect()).unwrap())
}

fn linear_poly_field() -> impl Strategy<Value = VectorField> {
    proptest::collection::vec(proptest::collection::vec(-2i64..=2, 4), 3).prop_map(|rows| {
        let comps = rows
            .into_iter()
            .map(|r| {
                VARS.iter().zip(&r[1..]).fold(Expr::int(r[0]), |acc, (v, c)| acc.add(&Expr::named(v).scale(&q(*c))))
            })
            .collect();
        VectorField::new(chart(&VARS), comps).unwrap()
    })
}

proptest! {
    #![proptest_config(cases(200))]

    #[test]
    fn bracket_is_antisymmetric(a in exp_field(), b in exp_field()) {
        let ab = a.bracket(&b).unwrap();
        let ba = b.bracket(&a).unwrap();
        prop_assert_eq!(ab, ba.neg());
        prop_assert!(a.bracket(&a).unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(cases(100))]

    #[test]
    fn jacobi_identity(a in poly_field(), b in exp_field(), c in poly_field()) {
        let t1 = a.bracket(&b.bracket(&c).unwrap()).unwrap();
        let t2 = b.bracket(&c.bracket(&a).unwrap()).unwrap();
        let t3 = c.bracket(&a.bracket(&b).unwrap()).unwrap();
        prop_assert!(t1.add(&t2).unwrap().add(&t3).unwrap().is_zero());
    }

    #[test]
    fn exp_conjugation(
        chi in linear_form_in(&VARS),
        psi in linear_form_in(&VARS),
        u in constant_field(),
        v in constant_field(),
    ) {
        let (ec, ep) = (exp_of(&chi), exp_of(&psi));
        let chi_e = chi.iter().fold(Expr::zero(), |a, (w, c)| a.add(&Expr::var(w).scale(c)));
        let psi_e = psi.iter().fold(Expr::zero(), |a, (w, c)| a.add(&Expr::var(w).scale(c)));
        let lhs = u.scale(&ec).bracket(&v.scale(&ep)).unwrap();
        let inner = v
            .scale(&u.apply(&psi_e))
            .sub(&u.scale(&v.apply(&chi_e)))
            .unwrap()
            .add(&u.bracket(&v).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, inner.scale(&ec.mul(&ep)));
    }

    #[test]
    fn exp_conjugation_with_linear_fields(
        chi in linear_form_in(&VARS),
        psi in linear_form_in(&VARS),
        u in linear_poly_field(),
        v in linear_poly_field(),
    ) {
        let (ec, ep) = (exp_of(&chi), exp_of(&psi));
        let chi_e = chi.iter().fold(Expr::zero(), |a, (w, c)| a.add(&Expr::var(w).scale(c)));
        let psi_e = psi.iter().fold(Expr::zero(), |a, (w, c)| a.add(&Expr::var(w).scale(c)));
        let lhs = u.scale(&ec).bracket(&v.scale(&ep)).unwrap();
        let inner = v
            .scale(&u.apply(&psi_e))
            .sub(&u.scale(&v.apply(&chi_e)))
            .unwrap()
            .add(&u.bracket(&v).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, inner.scale(&ec.mul(&ep)));
    }

    #[test]
    fn bracket_leibniz(a in poly_field(), b in poly_field(), g in rational()) {
        let lhs = a.bracket(&b.scale(&g)).unwrap();
        let rhs = b.scale(&a.apply(&g)).add(&a.bracket(&b).unwrap().scale(&g)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn field_print_then_parse(a in exp_field()) {
        prop_assert_eq!(parse_field(&a.to_string(), a.chart(), &[]).unwrap(), a);
    }
}
