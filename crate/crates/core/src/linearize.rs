//! Canonical coordinates of commuting root-vector chains and the
//! linearization pipeline for ODE systems with a known symmetry algebra.

use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jets::OdeSystem;
use crate::liealg::generic_rank;
use crate::linalg;
use crate::symexpr::{Binding, Bindings, ExpMonomial, Expr, Monomial, Poly, PowerProduct, Rational, Var};
use crate::vectorfield::{Chart, Coord, PointMap, VectorField};

/// One new coordinate as a function of the old ones:
/// `a . x + b` or `c * exp(l . x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Row {
    Linear { a: Vec<Rational>, b: Rational },
    Exp { l: Vec<Rational>, c: Rational },
}

impl Row {
    pub fn expr(&self, chart: &Chart) -> Expr {
        match self {
            Row::Linear { a, b } => chart
                .vars()
                .iter()
                .zip(a)
                .fold(Expr::constant(b.clone()), |acc, (v, q)| acc.add(&Expr::var(v).scale(q))),
            Row::Exp { l, c } => Expr::exp(linear_exp(chart, l)).scale(c),
        }
    }
}

fn linear_exp(chart: &Chart, l: &[Rational]) -> ExpMonomial {
    ExpMonomial::from_pairs(
        chart.vars().iter().zip(l).filter(|(_, q)| !q.is_zero()).map(|(v, q)| (v.clone(), q.clone())).collect(),
    )
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Inverts `t_j = row_j(s)` for the old coordinates `s` without logarithms:
/// `s_i` is linear in `t` when no exponential row feeds it, otherwise
/// `exp(s_i)` is a product of integer powers of `t_j / c_j` times an
/// exponential of the linear rows.
pub fn invert_rows(rows: &[Row], target: &Chart) -> Result<Vec<Coord>> {
    let n = rows.len();
    let m: linalg::Matrix = rows
        .iter()
        .map(|r| match r {
            Row::Linear { a, .. } => a.clone(),
            Row::Exp { l, .. } => l.clone(),
        })
        .collect();
    let inv = linalg::inverse(&m).ok_or_else(|| Error::NotInvertible("linear part is singular".into()))?;
    let t = target.vars();
    let mut out = Vec::with_capacity(n);
    for row in &inv {
        let feeds_exp = rows.iter().zip(row).any(|(r, c)| matches!(r, Row::Exp { .. }) && !c.is_zero());
        if !feeds_exp {
            let mut e = Expr::zero();
            for (j, (r, c)) in rows.iter().zip(row).enumerate() {
                if let Row::Linear { b, .. } = r {
                    if !c.is_zero() {
                        e = e.add(&Expr::var(&t[j]).sub(&Expr::constant(b.clone())).scale(c));
                    }
                }
            }
            out.push(Coord::Value(e));
            continue;
        }
        let mut e = Expr::one();
        let mut lin = Vec::new();
        for (j, (r, c)) in rows.iter().zip(row).enumerate() {
            if c.is_zero() {
                continue;
            }
            match r {
                Row::Linear { b, .. } => {
                    if !b.is_zero() {
                        return Err(Error::NotInvertible("translation mixed with exponential rows".into()));
                    }
                    lin.push((t[j].clone(), c.clone()));
                }
                Row::Exp { c: k, .. } => {
                    if !c.is_integer() {
                        return Err(Error::NotInvertible(format!("fractional power {c} of {}", t[j])));
                    }
                    let p = c.to_integer().to_i64().ok_or_else(|| Error::NotInvertible("exponent overflow".into()))?;
                    e = e.mul(&Expr::var(&t[j]).scale(&k.recip()).pow(p)?);
                }
            }
        }
        if !lin.is_empty() {
            e = e.mul(&Expr::exp(ExpMonomial::from_pairs(lin)));
        }
        out.push(Coord::Exp(e));
    }
    Ok(out)
}

/// Builds the verified map `s -> t` with `t_j = row_j(s)`.
pub fn map_from_rows(source: &Chart, target: &Chart, rows: &[Row]) -> Result<PointMap> {
    let forward = rows.iter().map(|r| Coord::Value(r.expr(source))).collect();
    let inverse = invert_rows(rows, target)?;
    PointMap::new(source.clone(), target.clone(), forward, inverse)
}

/// Default names of canonical coordinates: `u, v, w`, then `u1..uN`;
/// `s1..sN` if those clash with the source chart.
pub fn coordinate_names(source: &Chart) -> Chart {
    let n = source.len();
    let pick = |names: Vec<String>| Chart::new(names.iter().map(|s| Var::new(s)).collect()).expect("distinct");
    let first = if n <= 3 {
        ["u", "v", "w"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("u{i}")).collect::<Vec<_>>()
    };
    let c = pick(first);
    if c.vars().iter().any(|v| source.contains(v)) {
        pick((1..=n).map(|i| format!("s{i}")).collect())
    } else {
        c
    }
}

/// `Y = exp(l) * sum_k c_k D[x_k]` with polynomial `c_k`; returns `(l, c)`.
fn split_field(y: &VectorField) -> Result<(ExpMonomial, Vec<Poly>)> {
    let mut ell: Option<ExpMonomial> = None;
    let mut comps = Vec::with_capacity(y.chart().len());
    for c in y.components() {
        if c.is_zero() {
            comps.push(Poly::zero());
            continue;
        }
        let class = c.denominator().is_one().then(|| c.numerator().single_exp_class()).flatten();
        let (e, p) = class.ok_or_else(|| {
            Error::UnsupportedField(format!("{y}: component {c} is not a polynomial times one exponential"))
        })?;
        match &ell {
            None => ell = Some(e),
            Some(prev) if *prev == e => {}
            Some(_) => return Err(Error::UnsupportedField(format!("{y}: components carry different exponentials"))),
        }
        comps.push(p);
    }
    let ell = ell.ok_or_else(|| Error::UnsupportedField("zero field".into()))?;
    if ell.iter().any(|(v, _)| !y.chart().contains(v)) {
        return Err(Error::UnsupportedField(format!("{y}: exponential of a non-coordinate")));
    }
    Ok((ell, comps))
}

/// Monomials of total degree at most `d` in `vars`.
fn monomials(vars: &[Var], d: u32) -> Vec<PowerProduct> {
    let mut out = vec![PowerProduct::one()];
    for v in vars {
        let mut next = Vec::new();
        for m in &out {
            for k in 0..=d - m.total_degree() {
                next.push(m.mul(&PowerProduct::var(v, k)));
            }
        }
        out = next;
    }
    out
}

/// Solves `Y_i(exp(-l_j) * P) = delta_ij` for `P` of degree at most `d`.
fn solve_ansatz(fields: &[(ExpMonomial, Vec<Poly>)], chart: &Chart, j: usize, d: u32) -> Option<Poly> {
    let vars = chart.vars();
    let basis = monomials(vars, d);
    let lj: Vec<Rational> = vars.iter().map(|v| fields[j].0.coefficient(v)).collect();
    let one = Monomial::one();
    let mut mat = Vec::new();
    let mut rhs = Vec::new();
    for (i, (_, c)) in fields.iter().enumerate() {
        let shift = c.iter().zip(&lj).fold(Poly::zero(), |acc, (ck, q)| &acc + &ck.scale(q));
        let images: Vec<Poly> = basis
            .iter()
            .map(|m| {
                let mono = Poly::term(Rational::one(), Monomial::new(m.clone(), ExpMonomial::one()));
                let mut img = -&(&shift * &mono);
                for (ck, v) in c.iter().zip(vars) {
                    img = &img + &(ck * &mono.derivative(v));
                }
                img
            })
            .collect();
        let mut support: Vec<&Monomial> = images.iter().flat_map(|p| p.terms().map(|(m, _)| m)).collect();
        if i == j {
            support.push(&one);
        }
        support.sort();
        support.dedup();
        for m in support {
            mat.push(
                images
                    .iter()
                    .map(|p| p.terms().find(|(n, _)| *n == m).map_or_else(Rational::zero, |(_, c)| c.clone()))
                    .collect(),
            );
            rhs.push(if i == j && m.is_one() { Rational::one() } else { Rational::zero() });
        }
    }
    let sol = linalg::solve(&mat, &rhs)?;
    let mut p = Poly::zero();
    for (m, c) in basis.iter().zip(sol) {
        p.add_term(Monomial::new(m.clone(), ExpMonomial::one()), c);
    }
    Some(p)
}

/// Inverts polynomial coordinates `t_j = f_j(s)` that can be solved one
/// old coordinate at a time, each occurring linearly.
fn invert_triangular(source: &Chart, target: &Chart, forward: &[Expr]) -> Result<Vec<Coord>> {
    let n = forward.len();
    let mut solved: Vec<Option<Expr>> = vec![None; n];
    let mut used = vec![false; n];
    loop {
        let mut progress = false;
        for (j, f) in forward.iter().enumerate() {
            if used[j] {
                continue;
            }
            let mut b = Bindings::new();
            for (k, s) in solved.iter().enumerate() {
                if let Some(e) = s {
                    b.insert(Binding::Var(source.vars()[k].clone()), e.clone());
                }
            }
            let g = f.substitute(&b)?;
            let vars = g.variables();
            let free: Vec<usize> =
                (0..n).filter(|&k| solved[k].is_none() && vars.contains(&source.vars()[k])).collect();
            if free.len() != 1 {
                continue;
            }
            let xk = &source.vars()[free[0]];
            let coef = g.differentiate(xk);
            if coef.is_zero() || coef.variables().contains(xk) {
                continue;
            }
            let rest = g.sub(&coef.mul(&Expr::var(xk)));
            solved[free[0]] = Some(Expr::var(&target.vars()[j]).sub(&rest).try_div(&coef)?);
            used[j] = true;
            progress = true;
        }
        if !progress {
            break;
        }
    }
    solved
        .into_iter()
        .map(|s| s.map(Coord::Value).ok_or_else(|| Error::NotInvertible("coordinates are not triangular".into())))
        .collect()
}

/// Coordinates `u_j` with `Y_i(u_j) = delta_ij` for a commuting family of
/// full rank whose members have the form `exp(l_i) * (polynomial field)`.
///
/// Each `u_j` is sought as `exp(-l_j) * P_j` with `P_j` a polynomial of
/// degree 1, 2 or 3; the result is verified symbolically before it is
/// returned. When the coordinates are the chart itself the identity map is
/// returned.
pub fn canonical_coordinates(chain: &[VectorField], target: Option<&Chart>, seed: u64) -> Result<PointMap> {
    let first = chain.first().ok_or_else(|| Error::Invalid("empty chain".into()))?;
    let chart = first.chart().clone();
    let n = chart.len();
    for y in chain {
        if y.chart() != &chart {
            return Err(Error::ChartMismatch(format!("({}) vs ({chart})", y.chart())));
        }
    }
    for (i, a) in chain.iter().enumerate() {
        for b in &chain[i + 1..] {
            if !a.bracket(b)?.is_zero() {
                return Err(Error::Chain(format!("[{a}, {b}] is not zero")));
            }
        }
    }
    let r = generic_rank(chain, 5, seed)?;
    if chain.len() != n || r != n {
        return Err(Error::RankDeficient { expected: n, found: r });
    }
    let split: Vec<(ExpMonomial, Vec<Poly>)> = chain.iter().map(split_field).collect::<Result<_>>()?;
    let mut forward = Vec::with_capacity(n);
    let mut rows = Vec::with_capacity(n);
    for j in 0..n {
        let p = (1..=3)
            .find_map(|d| solve_ansatz(&split, &chart, j, d))
            .ok_or_else(|| Error::AnsatzUnsolvable(format!("no coordinate straightens field {}", j + 1)))?;
        let ell = &split[j].0;
        forward.push(Expr::from_poly(p.clone()).mul(&Expr::exp(ell.inverse())));
        let row = if let Some(c) = p.constant_value() {
            Some(Row::Exp { l: chart.vars().iter().map(|v| -ell.coefficient(v)).collect(), c })
        } else if ell.is_one() && p.terms().all(|(m, _)| m.powers.total_degree() <= 1) {
            let a =
                chart.vars().iter().map(|v| p.derivative(v).constant_value().unwrap_or_else(Rational::zero)).collect();
            let b = p.terms().find(|(m, _)| m.is_one()).map_or_else(Rational::zero, |(_, c)| c.clone());
            Some(Row::Linear { a, b })
        } else {
            None
        };
        rows.push(row);
    }
    for (i, y) in chain.iter().enumerate() {
        for (j, u) in forward.iter().enumerate() {
            let got = y.apply(u);
            let want = if i == j { Expr::one() } else { Expr::zero() };
            if got != want {
                return Err(Error::AnsatzUnsolvable(format!("Y{}(u{}) = {got}", i + 1, j + 1)));
            }
        }
    }
    if target.is_none() && forward.iter().zip(chart.vars()).all(|(u, v)| *u == Expr::var(v)) {
        return Ok(PointMap::identity(&chart));
    }
    let target = target.cloned().unwrap_or_else(|| coordinate_names(&chart));
    if target.len() != n {
        return Err(Error::ChartMismatch("wrong number of target names".into()));
    }
    if rows.iter().all(Option::is_some) {
        let rows: Vec<Row> = rows.into_iter().flatten().collect();
        return map_from_rows(&chart, &target, &rows);
    }
    if split.iter().any(|(e, _)| !e.is_one()) {
        return Err(Error::AnsatzUnsolvable("coordinates mix polynomial and exponential parts".into()));
    }
    let inverse = invert_triangular(&chart, &target, &forward)?;
    PointMap::new(chart, target, forward.into_iter().map(Coord::Value).collect(), inverse)
}

fn as_row(e: &Expr, chart: &Chart) -> Option<Row> {
    if let Some((c, ell)) = e.as_scaled_exp() {
        if !ell.is_one() {
            if ell.iter().any(|(v, _)| !chart.contains(v)) {
                return None;
            }
            return Some(Row::Exp { l: chart.vars().iter().map(|v| ell.coefficient(v)).collect(), c });
        }
    }
    let lf = e.is_polynomial().then(|| e.numerator().clone())?;
    if lf.has_exp() || lf.terms().any(|(m, _)| m.powers.total_degree() > 1) {
        return None;
    }
    let a = chart.vars().iter().map(|v| lf.derivative(v).constant_value().unwrap_or_else(Rational::zero)).collect();
    let b = lf.terms().find(|(m, _)| m.is_one()).map_or_else(Rational::zero, |(_, c)| c.clone());
    if e.variables().iter().any(|v| !chart.contains(v)) {
        return None;
    }
    Some(Row::Linear { a, b })
}

/// Computes the inverse of a forward map given by plain coordinate
/// values: linear and exponential rows, or polynomial rows solvable one
/// coordinate at a time.
pub fn infer_inverse(source: &Chart, target: &Chart, forward: &[Coord]) -> Result<Vec<Coord>> {
    let values: Vec<Expr> = forward
        .iter()
        .map(|c| match c {
            Coord::Value(e) => Ok(e.clone()),
            Coord::Exp(_) => Err(Error::NotInvertible("cannot infer the inverse of an exp(...) row".into())),
        })
        .collect::<Result<_>>()?;
    if values.len() != source.len() {
        return Err(Error::NotInvertible("source and target dimensions differ".into()));
    }
    let rows: Option<Vec<Row>> = values.iter().map(|e| as_row(e, source)).collect();
    match rows {
        Some(rows) => invert_rows(&rows, target),
        None => invert_triangular(source, target, &values),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetryRow {
    pub name: String,
    pub residuals: Vec<String>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stage {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Linearized,
    Failed,
}

#[derive(Clone, Debug)]
pub struct LinearizationReport {
    pub symmetries: Vec<SymmetryRow>,
    pub chain: Vec<String>,
    pub stages: Vec<Stage>,
    pub map: Option<PointMap>,
    pub transformed: Option<OdeSystem>,
    pub verdict: Verdict,
}

impl LinearizationReport {
    pub fn failed_stage(&self) -> Option<&str> {
        self.stages.iter().find(|s| !s.ok).map(|s| s.name.as_str())
    }
}

/// Checks the generators, straightens the chain and transforms the system.
/// Mathematical failures end up in the report; only malformed input (an
/// unknown chain label) is an error.
pub fn linearize_pipeline(
    system: &OdeSystem,
    generators: &[(String, VectorField)],
    chain_labels: &[String],
    seed: u64,
) -> Result<LinearizationReport> {
    let mut chain = Vec::new();
    for l in chain_labels {
        let f = generators
            .iter()
            .find(|(n, _)| n == l)
            .ok_or_else(|| Error::Invalid(format!("chain label `{l}` names no generator")))?;
        chain.push(f.1.clone());
    }
    let mut report = LinearizationReport {
        symmetries: Vec::new(),
        chain: chain_labels.to_vec(),
        stages: Vec::new(),
        map: None,
        transformed: None,
        verdict: Verdict::Failed,
    };

    let jet = system.jet();
    let mut all_ok = true;
    let mut first_bad = String::new();
    for (name, x) in generators {
        let row = match jet.prolong(x).and_then(|x2| system.invariance(&x2)) {
            Ok(res) => {
                let ok = res.iter().all(Expr::is_zero);
                SymmetryRow { name: name.clone(), residuals: res.iter().map(Expr::to_string).collect(), ok }
            }
            Err(e) => SymmetryRow { name: name.clone(), residuals: vec![e.to_string()], ok: false },
        };
        if !row.ok && all_ok {
            all_ok = false;
            first_bad = format!("{} leaves residual {}", row.name, row.residuals.join(", "));
        }
        report.symmetries.push(row);
    }
    report.stages.push(Stage { name: "symmetry".into(), ok: all_ok, detail: first_bad });
    if !all_ok {
        return Ok(report);
    }

    let map = match canonical_coordinates(&chain, None, seed) {
        Ok(m) => m,
        Err(e) => {
            report.stages.push(Stage { name: "coordinates".into(), ok: false, detail: e.to_string() });
            return Ok(report);
        }
    };
    report.stages.push(Stage { name: "coordinates".into(), ok: true, detail: String::new() });
    report.map = Some(map.clone());

    let t = match system.transform(&map) {
        Ok(t) => t,
        Err(e) => {
            report.stages.push(Stage { name: "transform".into(), ok: false, detail: e.to_string() });
            return Ok(report);
        }
    };
    report.stages.push(Stage { name: "transform".into(), ok: true, detail: String::new() });
    let free = t.is_free();
    report.stages.push(Stage {
        name: "verdict".into(),
        ok: free,
        detail: if free { String::new() } else { format!("transformed system {t} is not free") },
    });
    report.transformed = Some(t);
    if free {
        report.verdict = Verdict::Linearized;
    }
    Ok(report)
}

/// Transforms `system` by `m` and pushes every generator forward.
pub fn scramble(
    system: &OdeSystem,
    m: &PointMap,
    generators: &[(String, VectorField)],
) -> Result<(OdeSystem, Vec<(String, VectorField)>)> {
    let s = system.transform(m)?;
    let g = generators.iter().map(|(n, x)| Ok((n.clone(), m.pushforward(x)?))).collect::<Result<_>>()?;
    Ok((s, g))
}

/// A random invertible map from `free` coordinates to `scrambled` ones
/// whose inverse has the rows of [`Row`]: lower triangular linear part with
/// unit diagonal up to sign, each row exponential or linear, translations
/// only when every row is linear.
pub fn random_supported_map<R: Rng>(free: &Chart, scrambled: &Chart, rng: &mut R) -> Result<PointMap> {
    let n = free.len();
    let scales =
        [q(1), q(-1), q(2), q(-2), Rational::new(1.into(), 2.into()), q(3), Rational::new((-1).into(), 3.into())];
    loop {
        let all_linear = rng.gen_bool(0.2);
        let mut rows = Vec::with_capacity(n);
        for k in 0..n {
            let mut m = vec![Rational::zero(); n];
            for entry in m.iter_mut().take(k) {
                *entry = q(rng.gen_range(-2..=2));
            }
            m[k] = if rng.gen_bool(0.5) { q(1) } else { q(-1) };
            let exp_row = !all_linear && rng.gen_bool(0.7);
            rows.push(if exp_row {
                Row::Exp { l: m, c: scales.choose(rng).unwrap().clone() }
            } else {
                let b = if all_linear { q(rng.gen_range(-3..=3)) } else { Rational::zero() };
                Row::Linear { a: m, b }
            });
        }
        match map_from_rows(scrambled, free, &rows) {
            Ok(g) => return Ok(g.inverted()),
            Err(Error::NotInvertible(_)) => continue,
            Err(e) => return Err(e),
        }
    }
}

/// The free system and the sl(k) realization seen from both sides of the
/// canonical coordinates of the default chain.
#[derive(Clone, Debug)]
pub struct ExpModel {
    /// Realization generators plus the chain members, in exponential coordinates.
    pub generators: Vec<(String, VectorField)>,
    pub chain: Vec<String>,
    /// Exponential coordinates to canonical coordinates.
    pub coords: PointMap,
    /// The free system pulled back to exponential coordinates.
    pub system: OdeSystem,
    pub free: OdeSystem,
    pub free_generators: Vec<(String, VectorField)>,
}

pub fn exp_model(k: usize, form: u8, seed: u64) -> Result<ExpModel> {
    let r = crate::realize::realize_sl(k, form)?;
    if r.n < 2 {
        return Err(Error::Invalid("the free system needs at least one dependent variable".into()));
    }
    let chain = r.default_chain(seed)?;
    let fields: Vec<VectorField> = chain.iter().map(|c| c.1.clone()).collect();
    let coords = canonical_coordinates(&fields, None, seed)?;
    let mut generators = r.generators();
    for (n, f) in &chain {
        if !generators.iter().any(|g| &g.0 == n) {
            generators.push((n.clone(), f.clone()));
        }
    }
    let free = OdeSystem::free(crate::jets::JetChart::over(coords.target(), 2)?);
    let system = free.transform(&coords.inverted())?;
    let free_generators =
        generators.iter().map(|(n, f)| Ok((n.clone(), coords.pushforward(f)?))).collect::<Result<_>>()?;
    Ok(ExpModel { generators, chain: chain.into_iter().map(|c| c.0).collect(), coords, system, free, free_generators })
}
