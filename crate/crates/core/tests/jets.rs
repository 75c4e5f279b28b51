mod common;

use common::*;
use lievec_core::realize::realize_sl;
use lievec_core::{
    closure_generate, parse_field, parse_map, parse_system, Error, Expr, JetChart, OdeSystem, Var, VectorField,
};
use proptest::prelude::*;

fn plane() -> JetChart {
    JetChart::from_names("x", &["y"], 2).unwrap()
}

fn space() -> JetChart {
    JetChart::from_names("x", &["y", "z"], 2).unwrap()
}

/// Prolongs `field` and compares canonical strings with `expected`.
fn golden(jet: &JetChart, field: &str, expected: &str) {
    let x = parse_field(field, jet.base_chart(), &[]).unwrap();
    let got = jet.prolong(&x).unwrap();
    let want = parse_field(expected, jet.chart(), &[]).unwrap();
    assert_eq!(got.to_string(), want.to_string(), "prolongation of {field}");
}

#[test]
fn total_derivative_examples() {
    let j = plane();
    let p = |s: &str| lievec_core::parse_expr(s, None).unwrap();
    assert_eq!(j.total_derivative(&p("y")), p("y_1"));
    assert_eq!(j.total_derivative(&p("x*y_1")), p("y_1 + x*y_2"));
    assert_eq!(j.total_derivative(&p("7/3")), Expr::zero());
}

#[test]
fn planar_prolongations() {
    let j = plane();
    golden(&j, "D[x]", "D[x]");
    golden(&j, "x*D[y]", "x*D[y] + D[y_1]");
    golden(&j, "x^2*D[x]", "x^2*D[x] - 2*x*y_1*D[y_1] - 2*(y_1 + 2*x*y_2)*D[y_2]");
    golden(&j, "x*y*D[y]", "x*y*D[y] + (y + x*y_1)*D[y_1] + (2*y_1 + x*y_2)*D[y_2]");
    golden(&j, "x*(x*D[x] + y*D[y])", "x^2*D[x] + x*y*D[y] + (y - x*y_1)*D[y_1] - 3*x*y_2*D[y_2]");
    golden(&j, "y*D[x]", "y*D[x] - y_1^2*D[y_1] - 3*y_1*y_2*D[y_2]");
}

#[test]
fn spatial_prolongations() {
    let j = space();
    golden(&j, "y*D[x]", "y*D[x] - y_1^2*D[y_1] - y_1*z_1*D[z_1] - 3*y_1*y_2*D[y_2] - (y_2*z_1 + 2*y_1*z_2)*D[z_2]");
    golden(&j, "z*D[y]", "z*D[y] + z_1*D[y_1] + z_2*D[y_2]");
    golden(&j, "x*D[y]", "x*D[y] + D[y_1]");
    golden(&j, "y*D[z]", "y*D[z] + y_1*D[z_1] + y_2*D[z_2]");
    golden(&j, "D[z]", "D[z]");
    golden(
        &j,
        "z*x*D[x]",
        "z*x*D[x] - y_1*(x*z_1 + z)*D[y_1] - z_1*(x*z_1 + z)*D[z_1] \
         - (2*y_2*(x*z_1 + z) + y_1*(x*z_2 + 2*z_1))*D[y_2] - (3*x*z_1*z_2 + 2*z_1^2 + 2*z*z_2)*D[z_2]",
    );
    golden(&j, "z*y*D[y]", "y*z*D[y] + (y_1*z + y*z_1)*D[y_1] + (y_2*z + 2*y_1*z_1 + y*z_2)*D[y_2]");
    golden(&j, "z^2*D[z]", "z^2*D[z] + 2*z*z_1*D[z_1] + 2*(z_1^2 + z*z_2)*D[z_2]");
}

#[test]
fn component_sum_vanishes_on_free_locus() {
    let j = space();
    let free = OdeSystem::free(j.clone());
    let parts = ["z*x*D[x]", "z*y*D[y]", "z^2*D[z]"];
    let mut sum = VectorField::zero(j.chart());
    for p in parts {
        sum = sum.add(&j.prolong(&parse_field(p, j.base_chart(), &[]).unwrap()).unwrap()).unwrap();
    }
    assert!(free.invariance(&sum).unwrap().iter().all(Expr::is_zero));
    // the sum is the prolongation of z (x D[x] + y D[y] + z D[z])
    let whole = j.prolong(&parse_field("z*(x*D[x] + y*D[y] + z*D[z])", j.base_chart(), &[]).unwrap()).unwrap();
    assert_eq!(sum, whole);
}

#[test]
fn prolongation_restricts_to_the_field() {
    let j = space();
    let x = parse_field("x*y*D[x] + z^2*D[y] - D[z]", j.base_chart(), &[]).unwrap();
    assert_eq!(j.restrict(&j.prolong(&x).unwrap()).unwrap(), x);
    let jetty = parse_field("y_1*D[x]", j.chart(), &[]).unwrap();
    assert!(j.prolong(&jetty).is_err());
}

#[test]
fn invariance_examples() {
    let j = plane();
    let sys = |s: &str| parse_system(s).unwrap();
    let f = |s: &str| parse_field(s, j.base_chart(), &[]).unwrap();
    assert_eq!(sys("y_2 = 0").invariance(&j.prolong(&f("D[x]")).unwrap()).unwrap(), vec![Expr::zero()]);
    let k_sys = sys("params: k\ny_2 = k");
    assert!(k_sys.is_invariant_under(&f("x*D[y]")).unwrap());
    assert_eq!(sys("y_2 = y_1").invariance(&j.prolong(&f("x*D[y]")).unwrap()).unwrap(), vec![Expr::int(-1)]);
    // x (x D[x] + y D[y]) forces k = 0
    let res = k_sys.invariance(&j.prolong(&f("x^2*D[x] + x*y*D[y]")).unwrap()).unwrap();
    assert_eq!(res, vec![lievec_core::parse_expr("-3*x*k", Some(&[Var::new("x"), Var::new("k")])).unwrap()]);
}

#[test]
fn free_systems_are_invariant_under_full_algebras() {
    for (k, sys) in [(3, "y_2 = 0"), (4, "y_2 = 0; z_2 = 0")] {
        let r = realize_sl(k, 1).unwrap();
        let s = parse_system(sys).unwrap();
        let b = closure_generate(&r.generators(), k * k).unwrap();
        let pushed = lievec_core::linearize::canonical_coordinates(
            &r.default_chain(1).unwrap().into_iter().map(|c| c.1).collect::<Vec<_>>(),
            Some(s.jet().base_chart()),
            1,
        )
        .unwrap();
        for x in b.fields() {
            let y = pushed.pushforward(x).unwrap();
            assert!(s.is_invariant_under(&y).unwrap(), "{y}");
        }
    }
}

#[test]
fn transform_examples() {
    let free = parse_system("y_2 = 0").unwrap();
    let id = lievec_core::PointMap::identity(free.jet().base_chart());
    assert_eq!(free.transform(&id).unwrap().to_string(), "y_2 = 0");
    let shear = parse_map("source: x, y\ntarget: s, t\ns = x\nt = y + x^2\nx = s\ny = t - s^2").unwrap();
    assert_eq!(free.transform(&shear).unwrap().to_string(), "t_2 = 2");
    let swap = parse_map("source: x, y\ntarget: s, t\ns = y\nt = x\nx = t\ny = s").unwrap();
    assert_eq!(free.transform(&swap).unwrap().to_string(), "t_2 = 0");
    // chain rule oracle for the swap: t'' = -y''/(y')^3
    let curved = parse_system("y_2 = y_1^3").unwrap();
    assert_eq!(curved.transform(&swap).unwrap().to_string(), "t_2 = -1");
}

#[test]
fn transform_rejects_foreign_chart() {
    let free = parse_system("y_2 = 0").unwrap();
    let wrong = parse_map("source: u, v\ntarget: s, t\ns = u\nt = v\nu = s\nv = t").unwrap();
    assert!(matches!(free.transform(&wrong), Err(Error::ChartMismatch(_))));
}

fn jet_point_field() -> impl Strategy<Value = VectorField> {
    field_in(&VARS, poly().boxed())
}

proptest! {
    #![proptest_config(cases(100))]

    #[test]
    fn prolongation_is_a_homomorphism(a in jet_point_field(), b in jet_point_field()) {
        let j = space();
        let lhs = j.prolong(&a.bracket(&b).unwrap()).unwrap();
        let rhs = j.prolong(&a).unwrap().bracket(&j.prolong(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(cases(40))]

    #[test]
    fn transform_composes(
        f in poly_in(&["x", "y"]),
        a in -2i64..=2,
        b in 1i64..=2,
        c in -2i64..=2,
    ) {
        let sys = OdeSystem::new(plane(), vec![f.clone()]).unwrap();
        let m1 = parse_map(&format!("source: x, y\ntarget: s, t\ns = x\nt = y + {a}*x^2")).unwrap();
        let m2 = parse_map(&format!("source: s, t\ntarget: u, v\nu = {b}*s + {c}*t\nv = t")).unwrap();
        let both = m1.then(&m2).unwrap();
        let direct = sys.transform(&both);
        let staged = sys.transform(&m1).and_then(|s| s.transform(&m2));
        match (direct, staged) {
            (Ok(d), Ok(s)) => prop_assert_eq!(d.rhs(), s.rhs()),
            (Err(_), Err(_)) => {}
            (d, s) => prop_assert!(false, "one side failed: {:?} vs {:?}", d.map(|x| x.to_string()), s.map(|x| x.to_string())),
        }
    }
}
