mod common;

use common::*;
use lievec_core::{parse_field, parse_map, Chart, Coord, Error, Expr, PointMap, VectorField};
use proptest::prelude::*;

fn shear() -> PointMap {
    parse_map("source: x, y\ntarget: s, t\ns = x\nt = y + x^2").unwrap()
}

fn exp_map() -> PointMap {
    parse_map(
        "source: x, y, z\ntarget: u, v, w\n\
         u = -exp(-x-y-z)\nv = -exp(-y-z)\nw = -exp(-z)\n\
         exp(x) = v/u\nexp(y) = w/v\nexp(z) = -1/w",
    )
    .unwrap()
}

#[test]
fn chart_rules() {
    assert!(matches!(Chart::from_names(&["x", "x"]), Err(Error::InvalidChart(_))));
    assert!(matches!(Chart::from_names(&[]), Err(Error::InvalidChart(_))));
    let c = chart(&["x", "y"]);
    assert_eq!(c.to_string(), "x, y");
    assert!(matches!(VectorField::new(c, vec![Expr::one()]), Err(Error::ChartMismatch(_))));
}

#[test]
fn display_is_canonical() {
    let c = chart(&["x", "y"]);
    assert_eq!(VectorField::zero(&c).to_string(), "0");
    assert_eq!(parse_field("D[y] - x*D[x] + 2*D[x]", &c, &[]).unwrap().to_string(), "-(x - 2)*D[x] + D[y]");
}

#[test]
fn maps_are_verified() {
    let bad = parse_map("source: x, y\ntarget: s, t\ns = x\nt = y + x^2\nx = s\ny = t + s^2");
    assert!(matches!(bad, Err(Error::NotInvertible(_))));
    let m = exp_map();
    assert!(matches!(m.inverse()[2], Coord::Exp(_)));
    assert_eq!(parse_map(&m.to_string()).unwrap(), m);
}

#[test]
fn inverse_is_inferred() {
    let m = shear();
    assert_eq!(m.inverse()[1].expr().to_string(), "-s^2 + t");
    let e = parse_map("source: x, y\ntarget: u, v\nu = -exp(-x)\nv = -exp(-x-y)").unwrap();
    assert_eq!(
        e.to_string(),
        "source: x, y\ntarget: u, v\nu = -exp(-x)\nv = -exp(-x-y)\nexp(x) = -1/u\nexp(y) = u/v\n"
    );
}

#[test]
fn exponential_chain_straightens() {
    let c = chart(&["x", "y", "z"]);
    let m = exp_map();
    let f = |s: &str| parse_field(s, &c, &[]).unwrap();
    let target = m.target().clone();
    let g = |s: &str| parse_field(s, &target, &[]).unwrap();
    assert_eq!(m.pushforward(&f("exp(x+y+z)*D[x]")).unwrap(), g("D[u]"));
    assert_eq!(m.pushforward(&f("exp(y+z)*(D[y] - D[x])")).unwrap(), g("D[v]"));
    assert_eq!(m.pushforward(&f("exp(z)*(D[z] - D[y])")).unwrap(), g("D[w]"));
}

#[test]
fn composition_and_inversion() {
    let m = shear();
    let back = m.inverted();
    let id = m.then(&back).unwrap();
    assert_eq!(id, PointMap::identity(m.source()));
    let twice = m.then(&parse_map("source: s, t\ntarget: u, v\nu = s\nv = t + s^2").unwrap()).unwrap();
    assert_eq!(twice.forward()[1].expr().to_string(), "2*x^2 + y");
}

fn exp_sum() -> impl Strategy<Value = Expr> {
    proptest::collection::vec((-3i64..=3, linear_form_in(&VARS)), 1..3)
        .prop_map(|ts| ts.iter().fold(Expr::zero(), |acc, (c, f)| acc.add(&exp_of(f).scale(&q(*c)))))
}

proptest! {
    #![proptest_config(cases(100))]

    #[test]
    fn pushforward_is_a_homomorphism(a in field_in(&["x", "y"], poly_in(&["x", "y"]).boxed()),
                                     b in field_in(&["x", "y"], poly_in(&["x", "y"]).boxed())) {
        let m = shear();
        let lhs = m.pushforward(&a.bracket(&b).unwrap()).unwrap();
        let rhs = m.pushforward(&a).unwrap().bracket(&m.pushforward(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    // polynomial coefficients would need log(u) after the exponential map
    #[test]
    fn exponential_pushforward_is_a_homomorphism(
        a in field_in(&VARS, exp_sum().boxed()),
        b in field_in(&VARS, exp_sum().boxed()),
    ) {
        let m = exp_map();
        let lhs = m.pushforward(&a.bracket(&b).unwrap()).unwrap();
        let rhs = m.pushforward(&a).unwrap().bracket(&m.pushforward(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
