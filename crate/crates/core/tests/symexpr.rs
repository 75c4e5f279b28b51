mod common;

use std::collections::BTreeMap;

use common::*;
use lievec_core::{parse_expr, Bindings, Error, Expr, Rational, Var};
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn p(s: &str) -> Expr {
    parse_expr(s, None).unwrap()
}

#[test]
fn canonical_forms() {
    assert_eq!(p("(x^2 - 1)/(x - 1)"), p("x + 1"));
    assert_eq!(p("exp(x)*exp(y)"), p("exp(x+y)"));
    assert_eq!(p("exp(x)*exp(-x)"), Expr::one());
    assert_eq!(p("x/2 + x/2"), p("x"));
    assert_eq!(p("(2*x)/(4*y)").to_string(), "1/2*x/y");
    assert_eq!(p("exp(x+y)*(2*x - 1/3)").to_string(), "2*x*exp(x+y) - 1/3*exp(x+y)");
}

#[test]
fn derivatives() {
    let x = Var::new("x");
    assert_eq!(p("x^3*exp(2*x)").differentiate(&x), p("3*x^2*exp(2*x) + 2*x^3*exp(2*x)"));
    assert_eq!(p("1/x").differentiate(&x), p("-1/x^2"));
    assert_eq!(p("exp(y)").differentiate(&x), Expr::zero());
}

#[test]
fn division_rules() {
    assert_eq!(p("1").try_div(&Expr::zero()), Err(Error::DivisionByZero));
    assert!(matches!(p("1").try_div(&p("exp(x) + exp(y)")), Err(Error::NonUnitDenominator(_))));
    assert_eq!(p("exp(x)/exp(x)"), Expr::one());
    assert_eq!(p("1/(x*exp(y))"), p("exp(-y)/x"));
}

#[test]
fn substitution_rules() {
    let x = Var::new("x");
    let y = Var::new("y");
    let b = Bindings::new().var(&x, p("u + 2*v"));
    assert_eq!(p("x^2*exp(x)").substitute(&b).unwrap(), p("(u + 2*v)^2*exp(u + 2*v)"));
    let b = Bindings::new().exp(&x, p("-1/u"));
    assert_eq!(p("exp(2*x)").substitute(&b).unwrap(), p("1/u^2"));
    assert_eq!(p("exp(-x)").substitute(&b).unwrap(), p("-u"));
    assert!(matches!(p("exp(x/2)").substitute(&b), Err(Error::FractionalExponent { .. })));
    assert!(matches!(p("x*exp(x)").substitute(&b), Err(Error::UnboundVariable(_))));
    let b = Bindings::new().var(&y, p("y^2"));
    assert!(matches!(p("exp(y)").substitute(&b), Err(Error::NonLinearExpBinding { .. })));
}

#[test]
fn substitution_with_shared_denominators() {
    let b = Bindings::new()
        .var(&Var::new("u"), p("-exp(-x-y)"))
        .var(&Var::new("v"), p("-exp(-y)"))
        .var(&Var::new("w"), p("exp(x)*a/(1 + a)"));
    assert_eq!(p("u*w - v").substitute(&b).unwrap(), p("exp(-y)/(1 + a)"));
    assert_eq!(p("-u*v*w/(u*w - v)^2").substitute(&b).unwrap(), p("-a^2 - a"));
}

#[test]
fn exact_evaluation() {
    let point: BTreeMap<Var, Rational> = [(Var::new("x"), q(2)), (Var::new("y"), q(-1))].into_iter().collect();
    let exps: BTreeMap<Var, Rational> = [(Var::new("x"), q(3))].into_iter().collect();
    assert_eq!(p("x*y/(x + y) + exp(2*x)").eval_at(&point, &exps).unwrap(), q(7));
    assert_eq!(p("1/(x - 2)").eval_at(&point, &exps), Err(Error::SingularPoint));
}

#[test]
fn float_evaluation() {
    let point: BTreeMap<Var, f64> = [(Var::new("x"), 2.0), (Var::new("y"), -1.0)].into_iter().collect();
    let v = p("x*y/(x + y) + exp(2*x)").eval_f64(&point).unwrap();
    assert!((v - (4f64.exp() - 2.0)).abs() < 1e-12);
    assert_eq!(p("1/(x - 2)").eval_f64(&point), None);
    assert_eq!(p("z").eval_f64(&point), None);
}

fn sample_point() -> impl Strategy<Value = (BTreeMap<Var, Rational>, BTreeMap<Var, Rational>)> {
    (proptest::collection::vec(-7i64..=7, 3), proptest::collection::vec(1i64..=5, 3)).prop_map(|(a, e)| {
        let vars: Vec<Var> = VARS.iter().map(|v| Var::new(v)).collect();
        (vars.iter().cloned().zip(a.into_iter().map(q)).collect(), vars.into_iter().zip(e.into_iter().map(q)).collect())
    })
}

proptest! {
    #![proptest_config(cases(200))]

    #[test]
    fn field_axioms(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.sub(&a), Expr::zero());
        prop_assert_eq!(a.add(&Expr::zero()), a.clone());
        prop_assert_eq!(a.mul(&Expr::one()), a.clone());
        if let Ok(inv) = a.inv() {
            prop_assert_eq!(a.mul(&inv), Expr::one());
        }
    }

    #[test]
    fn leibniz_rule(a in rational(), b in rational(), i in 0usize..3) {
        let v = Var::new(VARS[i]);
        let lhs = a.mul(&b).differentiate(&v);
        let rhs = a.differentiate(&v).mul(&b).add(&a.mul(&b.differentiate(&v)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn partials_commute(a in rational(), i in 0usize..3, j in 0usize..3) {
        let (u, v) = (Var::new(VARS[i]), Var::new(VARS[j]));
        prop_assert_eq!(a.differentiate(&u).differentiate(&v), a.differentiate(&v).differentiate(&u));
    }

    #[test]
    fn print_then_parse(a in rational()) {
        prop_assert_eq!(parse_expr(&a.to_string(), None).unwrap(), a);
    }

    #[test]
    fn substitution_agrees_with_evaluation(
        a in plain_rational(),
        images in proptest::collection::vec(poly(), 3),
        (pt, ex) in sample_point(),
    ) {
        let mut b = Bindings::new();
        for (v, e) in VARS.iter().zip(&images) {
            b = b.var(&Var::new(v), e.clone());
        }
        let Ok(s) = a.substitute(&b) else { return Ok(()); };
        let inner: Option<BTreeMap<Var, Rational>> = VARS
            .iter()
            .zip(&images)
            .map(|(v, e)| e.eval_at(&pt, &ex).ok().map(|r| (Var::new(v), r)))
            .collect();
        let inner = inner.unwrap();
        if let (Ok(l), Ok(r)) = (s.eval_at(&pt, &ex), a.eval_at(&inner, &ex)) {
            prop_assert_eq!(l, r);
        }
    }

    #[test]
    fn float_evaluation_tracks_exact(a in plain_rational(), (pt, _) in sample_point()) {
        let exact = pt.keys().map(|v| (v.clone(), Rational::from_integer(1.into()))).collect();
        let fp: BTreeMap<Var, f64> = pt.iter().map(|(v, r)| (v.clone(), r.to_f64().unwrap())).collect();
        if let Ok(e) = a.eval_at(&pt, &exact) {
            let f = a.eval_f64(&fp).unwrap();
            let e = e.to_f64().unwrap();
            prop_assert!((f - e).abs() <= 1e-9 * (1.0 + e.abs()), "{} vs {}", f, e);
        }
    }

    #[test]
    fn common_factors_cancel(p in poly(), q in poly(), r in poly()) {
        prop_assume!(!p.is_zero() && !r.is_zero());
        let lhs = p.mul(&q).try_div(&p.mul(&p).mul(&r)).unwrap();
        let rhs = q.try_div(&p.mul(&r)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
