#![allow(dead_code)]

use lievec_core::symexpr::ExpMonomial;
use lievec_core::{Chart, Expr, Rational, Var, VectorField};
use proptest::prelude::*;
use proptest::test_runner::Config;

pub const VARS: [&str; 3] = ["x", "y", "z"];

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn chart(names: &[&str]) -> Chart {
    Chart::from_names(names).unwrap()
}

/// `c * x^i * y^j * z^k` with small data.
fn term(vars: &'static [&'static str]) -> impl Strategy<Value = Expr> {
    (-5i64..=5, proptest::collection::vec(0u32..=2, vars.len())).prop_map(move |(c, ks)| {
        vars.iter().zip(ks).fold(Expr::int(c), |acc, (v, k)| acc.mul(&Expr::named(v).pow(k as i64).unwrap()))
    })
}

pub fn poly_in(vars: &'static [&'static str]) -> impl Strategy<Value = Expr> {
    proptest::collection::vec(term(vars), 1..4).prop_map(|ts| ts.iter().fold(Expr::zero(), |a, t| a.add(t)))
}

pub fn poly() -> impl Strategy<Value = Expr> {
    poly_in(&VARS)
}

pub fn linear_form_in(vars: &'static [&'static str]) -> impl Strategy<Value = Vec<(Var, Rational)>> {
    proptest::collection::vec(-2i64..=2, vars.len())
        .prop_map(move |cs| vars.iter().zip(cs).map(|(v, c)| (Var::new(v), q(c))).collect())
}

pub fn exp_of(form: &[(Var, Rational)]) -> Expr {
    Expr::exp(ExpMonomial::from_pairs(form.iter().filter(|(_, c)| *c != q(0)).cloned().collect()))
}

/// Polynomials with an optional exponential factor per summand.
pub fn exp_poly() -> impl Strategy<Value = Expr> {
    proptest::collection::vec((term(&VARS), linear_form_in(&VARS)), 1..4)
        .prop_map(|ts| ts.iter().fold(Expr::zero(), |a, (t, f)| a.add(&t.mul(&exp_of(f)))))
}

/// `p / d` with an exp-free denominator that is not identically zero.
pub fn rational() -> impl Strategy<Value = Expr> {
    (exp_poly(), poly()).prop_filter_map("zero denominator", |(p, d)| p.try_div(&d).ok())
}

pub fn field_in(vars: &'static [&'static str], comp: BoxedStrategy<Expr>) -> impl Strategy<Value = VectorField> {
    proptest::collection::vec(comp, vars.len()).prop_map(move |cs| VectorField::new(chart(vars), cs).unwrap())
}

pub fn poly_field() -> impl Strategy<Value = VectorField> {
    field_in(&VARS, poly().boxed())
}

pub fn exp_field() -> impl Strategy<Value = VectorField> {
    field_in(&VARS, exp_poly().boxed())
}

/// Point fields on the base `(x, y, z)` of a jet space with dependents `y, z`.
pub fn point_field() -> impl Strategy<Value = VectorField> {
    poly_field()
}

/// Property config with a fixed case count and no regression files.
pub fn cases(n: u32) -> Config {
    Config { cases: n, failure_persistence: None, ..Config::default() }
}

/// Rational functions without exponential factors.
pub fn plain_rational() -> impl Strategy<Value = Expr> {
    (poly(), poly()).prop_filter_map("zero denominator", |(p, d)| p.try_div(&d).ok())
}
