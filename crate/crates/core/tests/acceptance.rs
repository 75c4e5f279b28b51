//! One PASS/FAIL line per acceptance criterion. Exits nonzero on failure.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::*;
use lievec_core::linearize::{
    canonical_coordinates, exp_model, linearize_pipeline, random_supported_map, scramble, Verdict,
};
use lievec_core::realize::{cartan_spans_translations, realize_sl, sl3_parameter_scan, standard_chart, DEFAULT_SEED};
use lievec_core::{
    closure_generate, generic_rank, parse_expr, parse_field, parse_system, Bindings, Expr, JetChart, Var, VectorField,
};
use proptest::prelude::*;
use proptest::test_runner::TestRunner;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CLOSURE_LIMIT: Duration = Duration::from_secs(5);
const END_TO_END_LIMIT: Duration = Duration::from_secs(60);
const RANDOM_MAPS: u64 = 20;
const RANK_TRIALS: usize = 5;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn closure() -> Outcome {
    let mut out = Vec::new();
    for k in 2..=5 {
        for form in [1, 2] {
            let t = Instant::now();
            let r = realize_sl(k, form).map_err(|e| e.to_string())?;
            let b = closure_generate(&r.generators(), k * k).map_err(|e| e.to_string())?;
            let dt = t.elapsed();
            check(b.len() == k * k - 1, format!("sl({k}) form {form}: dimension {}", b.len()))?;
            check(dt < CLOSURE_LIMIT, format!("sl({k}) form {form}: {dt:?}"))?;
            if form == 1 {
                out.push(format!("{}", b.len()));
            }
        }
    }
    Ok(format!("dimensions {} in both forms", out.join(", ")))
}

fn scan() -> Outcome {
    let s = sl3_parameter_scan().map_err(|e| e.to_string())?;
    let want: BTreeSet<_> = [(q(0), q(-1)), (q(-1), q(0))].into_iter().collect();
    check(s.solutions == want, format!("solutions {:?}", s.solutions))?;
    Ok("{(0, -1), (-1, 0)}".into())
}

fn golden_prolongations() -> Outcome {
    let plane = JetChart::from_names("x", &["y"], 2).unwrap();
    let space = JetChart::from_names("x", &["y", "z"], 2).unwrap();
    let cases: &[(&JetChart, &str, &str)] = &[
        (&plane, "x^2*D[x]", "x^2*D[x] - 2*x*y_1*D[y_1] - 2*(y_1 + 2*x*y_2)*D[y_2]"),
        (&plane, "x*y*D[y]", "x*y*D[y] + (y + x*y_1)*D[y_1] + (2*y_1 + x*y_2)*D[y_2]"),
        (&plane, "x*(x*D[x] + y*D[y])", "x^2*D[x] + x*y*D[y] + (y - x*y_1)*D[y_1] - 3*x*y_2*D[y_2]"),
        (&plane, "y*D[x]", "y*D[x] - y_1^2*D[y_1] - 3*y_1*y_2*D[y_2]"),
        (&space, "y*D[x]", "y*D[x] - y_1^2*D[y_1] - y_1*z_1*D[z_1] - 3*y_1*y_2*D[y_2] - (y_2*z_1 + 2*y_1*z_2)*D[z_2]"),
        (&space, "z*D[y]", "z*D[y] + z_1*D[y_1] + z_2*D[y_2]"),
        (&space, "x*D[y]", "x*D[y] + D[y_1]"),
        (&space, "y*D[z]", "y*D[z] + y_1*D[z_1] + y_2*D[z_2]"),
        (&space, "D[z]", "D[z]"),
        (
            &space,
            "z*x*D[x]",
            "z*x*D[x] - y_1*(x*z_1 + z)*D[y_1] - z_1*(x*z_1 + z)*D[z_1] \
             - (2*y_2*(x*z_1 + z) + y_1*(x*z_2 + 2*z_1))*D[y_2] - (3*x*z_1*z_2 + 2*z_1^2 + 2*z*z_2)*D[z_2]",
        ),
        (&space, "z*y*D[y]", "y*z*D[y] + (y_1*z + y*z_1)*D[y_1] + (y_2*z + 2*y_1*z_1 + y*z_2)*D[y_2]"),
        (&space, "z^2*D[z]", "z^2*D[z] + 2*z*z_1*D[z_1] + 2*(z_1^2 + z*z_2)*D[z_2]"),
    ];
    for (jet, field, expected) in cases {
        let x = parse_field(field, jet.base_chart(), &[]).map_err(|e| e.to_string())?;
        let got = jet.prolong(&x).map_err(|e| e.to_string())?.to_string();
        let want = parse_field(expected, jet.chart(), &[]).map_err(|e| e.to_string())?.to_string();
        check(got == want, format!("{field}: got {got}, want {want}"))?;
    }
    Ok(format!("{} formulas", cases.len()))
}

/// The closed sl(k) basis pushed to polynomial coordinates named like the
/// system's base chart.
fn polynomial_basis(k: usize, names: &lievec_core::Chart) -> Result<Vec<VectorField>, String> {
    let r = realize_sl(k, 1).map_err(|e| e.to_string())?;
    let b = closure_generate(&r.generators(), k * k).map_err(|e| e.to_string())?;
    let chain: Vec<VectorField> =
        r.default_chain(DEFAULT_SEED).map_err(|e| e.to_string())?.into_iter().map(|c| c.1).collect();
    let m = canonical_coordinates(&chain, Some(names), DEFAULT_SEED).map_err(|e| e.to_string())?;
    b.fields().iter().map(|x| m.pushforward(x).map_err(|e| e.to_string())).collect()
}

fn invariance() -> Outcome {
    for (k, sys) in [(3, "y_2 = 0"), (4, "y_2 = 0; z_2 = 0")] {
        let s = parse_system(sys).map_err(|e| e.to_string())?;
        let basis = polynomial_basis(k, s.jet().base_chart())?;
        check(basis.len() == k * k - 1, format!("sl({k}) basis has {} fields", basis.len()))?;
        for x in &basis {
            let res = s.invariance(&s.jet().prolong(x).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            check(res.iter().all(Expr::is_zero), format!("{sys} under {x}: {res:?}"))?;
        }
    }
    let s = parse_system("params: k\ny_2 = k").map_err(|e| e.to_string())?;
    let x = parse_field("x*(x*D[x] + y*D[y])", s.jet().base_chart(), &[]).unwrap();
    let res = s.invariance(&s.jet().prolong(&x).unwrap()).unwrap();
    let k = Var::new("k");
    let want = parse_expr("-3*x*k", None).unwrap();
    check(res == vec![want.clone()], format!("y_2 = k residual {res:?}"))?;
    for (val, zero) in [(0, true), (1, false), (-2, false)] {
        let r = want.substitute(&Bindings::new().var(&k, Expr::int(val))).unwrap();
        check(r.is_zero() == zero, format!("k = {val}: residual {r}"))?;
    }
    Ok("8 sl(3) and 15 sl(4) fields leave y'' = 0 (= z'') invariant; y'' = k needs k = 0".into())
}

fn theorem_instances() -> Outcome {
    for k in 2..=4 {
        let r = realize_sl(k, 1).map_err(|e| e.to_string())?;
        let h = r.cartan().map_err(|e| e.to_string())?;
        let rank = generic_rank(&h, RANK_TRIALS, DEFAULT_SEED).map_err(|e| e.to_string())?;
        check(rank == k - 1, format!("n = {}: rank {rank}", k - 1))?;
        check(cartan_spans_translations(&r).map_err(|e| e.to_string())?, format!("n = {}: span check", k - 1))?;
    }
    Ok("rank H = n for n = 1, 2, 3; span{H} = span{D[x_i]}".into())
}

fn canonical() -> Outcome {
    let r = realize_sl(4, 1).map_err(|e| e.to_string())?;
    let chain: Vec<VectorField> =
        r.default_chain(DEFAULT_SEED).map_err(|e| e.to_string())?.into_iter().map(|c| c.1).collect();
    let m = canonical_coordinates(&chain, None, DEFAULT_SEED).map_err(|e| e.to_string())?;
    let fwd: Vec<String> = m.forward().iter().map(|c| c.expr().to_string()).collect();
    check(fwd == ["-exp(-x-y-z)", "-exp(-y-z)", "-exp(-z)"], format!("A3 coordinates {fwd:?}"))?;
    let t = m.target().clone();
    let want = ["v*D[u]", "w*D[v]", "D[w]", "u*D[v]", "v*D[w]", "w*(u*D[u] + v*D[v] + w*D[w])"];
    for ((name, x), w) in r.generators().iter().zip(want) {
        let w = parse_field(w, &t, &[]).unwrap();
        let p = m.pushforward(x).map_err(|e| e.to_string())?;
        check(p == w || p == w.neg(), format!("{name} -> {p}"))?;
    }

    let r = realize_sl(3, 2).map_err(|e| e.to_string())?;
    let chain: Vec<VectorField> =
        r.default_chain(DEFAULT_SEED).map_err(|e| e.to_string())?.into_iter().map(|c| c.1).collect();
    let m = canonical_coordinates(&chain, None, DEFAULT_SEED).map_err(|e| e.to_string())?;
    let fwd: Vec<String> = m.forward().iter().map(|c| c.expr().to_string()).collect();
    check(fwd == ["-exp(-x)", "-exp(-x-y)"], format!("A2 coordinates {fwd:?}"))?;
    let t = m.target().clone();
    let want = ["D[u]", "u*D[v]", "u*(u*D[u] + v*D[v])", "v*D[u]"];
    for ((name, x), w) in r.generators().iter().zip(want) {
        let w = parse_field(w, &t, &[]).unwrap();
        let p = m.pushforward(x).map_err(|e| e.to_string())?;
        check(p == w || p == w.neg(), format!("{name} -> {p}"))?;
    }
    Ok("A3 -> (-exp(-x-y-z), -exp(-y-z), -exp(-z)); A2 -> projective quadruple".into())
}

fn end_to_end() -> Outcome {
    let t = Instant::now();
    let linearized = |sys: &lievec_core::OdeSystem, gens: &[(String, VectorField)], chain: &[String], what: &str| {
        let rep = linearize_pipeline(sys, gens, chain, DEFAULT_SEED).map_err(|e| e.to_string())?;
        check(rep.verdict == Verdict::Linearized, format!("{what}: {:?}", rep.stages))?;
        let tr = rep.transformed.ok_or("no transformed system")?;
        check(tr.rhs().iter().all(Expr::is_zero), format!("{what}: {tr}"))
    };
    let m53 = exp_model(4, 1, DEFAULT_SEED).map_err(|e| e.to_string())?;
    linearized(&m53.system, &m53.generators, &m53.chain, "exponential sl(4) system")?;
    for seed in 0..RANDOM_MAPS {
        let k = if seed % 2 == 0 { 3 } else { 4 };
        let model = exp_model(k, 1, DEFAULT_SEED).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_supported_map(model.free.jet().base_chart(), &standard_chart(k - 1), &mut rng)
            .map_err(|e| e.to_string())?;
        let (s, gens) = scramble(&model.free, &g, &model.free_generators).map_err(|e| e.to_string())?;
        linearized(&s, &gens, &model.chain, &format!("seed {seed}"))?;
    }
    let dt = t.elapsed();
    check(dt < END_TO_END_LIMIT, format!("took {dt:?}"))?;
    Ok(format!("{RANDOM_MAPS} random maps plus the exponential map, {dt:.2?}"))
}

fn run_property<S: Strategy>(
    name: &str,
    n: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new_with_rng(
        cases(n),
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))
}

fn properties() -> Outcome {
    run_property("antisymmetry", 200, (exp_field(), exp_field()), |(a, b)| {
        prop_assert_eq!(a.bracket(&b).unwrap(), b.bracket(&a).unwrap().neg());
        Ok(())
    })?;
    run_property("jacobi", 100, (poly_field(), exp_field(), poly_field()), |(a, b, c)| {
        let t1 = a.bracket(&b.bracket(&c).unwrap()).unwrap();
        let t2 = b.bracket(&c.bracket(&a).unwrap()).unwrap();
        let t3 = c.bracket(&a.bracket(&b).unwrap()).unwrap();
        prop_assert!(t1.add(&t2).unwrap().add(&t3).unwrap().is_zero());
        Ok(())
    })?;
    let space = JetChart::from_names("x", &["y", "z"], 2).unwrap();
    run_property("prolongation homomorphism", 100, (poly_field(), poly_field()), |(a, b)| {
        let lhs = space.prolong(&a.bracket(&b).unwrap()).unwrap();
        let rhs = space.prolong(&a).unwrap().bracket(&space.prolong(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })?;
    let constant = || {
        proptest::collection::vec(-3i64..=3, 3)
            .prop_map(|cs| VectorField::new(chart(&VARS), cs.into_iter().map(Expr::int).collect()).unwrap())
    };
    let strat = (linear_form_in(&VARS), linear_form_in(&VARS), constant(), constant());
    run_property("exp-conjugation", 100, strat, |(chi, psi, u, v)| {
        let form =
            |f: &[(Var, lievec_core::Rational)]| f.iter().fold(Expr::zero(), |a, (w, c)| a.add(&Expr::var(w).scale(c)));
        let (ec, ep) = (exp_of(&chi), exp_of(&psi));
        let lhs = u.scale(&ec).bracket(&v.scale(&ep)).unwrap();
        let inner = v
            .scale(&u.apply(&form(&psi)))
            .sub(&u.scale(&v.apply(&form(&chi))))
            .unwrap()
            .add(&u.bracket(&v).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, inner.scale(&ec.mul(&ep)));
        Ok(())
    })?;
    Ok("antisymmetry 200, Jacobi 100, prolongation 100, exp-conjugation 100".into())
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 realization closure", closure),
        ("2 parameter scan", scan),
        ("3 golden prolongations", golden_prolongations),
        ("4 invariance", invariance),
        ("5 cartan rank", theorem_instances),
        ("6 canonical coordinates", canonical),
        ("7 end-to-end linearization", end_to_end),
        ("8 property suites", properties),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let t = Instant::now();
        match f() {
            Ok(msg) => println!("PASS {name}: {msg} ({:.2?})", t.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("FAIL {name}: {msg}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
