//! Realizations of sl(n+1) by vector fields on R^n, Serre relations, the
//! sl(3) parameter scan and abelian chains of root vectors.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::liealg::{ad_eigenvalue, generic_rank, LieBasis, RootDatum};
use crate::polysolve::solve2;
use crate::symexpr::{Bindings, ExpMonomial, Expr, Monomial, Poly, PowerProduct, Rational, Var};
use crate::vectorfield::{Chart, VectorField};

/// Default seed for rank sampling.
pub const DEFAULT_SEED: u64 = 0x5eed_1ec5;

/// Coordinate names: `x`, `x, y`, `x, y, z`, then `x1..xn`.
pub fn standard_chart(n: usize) -> Chart {
    let names: Vec<String> = match n {
        1 => vec!["x".into()],
        2 => vec!["x".into(), "y".into()],
        3 => vec!["x".into(), "y".into(), "z".into()],
        _ => (1..=n).map(|i| format!("x{i}")).collect(),
    };
    Chart::new(names.iter().map(|s| Var::new(s)).collect()).expect("distinct names")
}

/// Label of the `i`-th simple root: `a, b, c, ...`.
pub fn root_letter(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("r{}", i + 1)
    }
}

/// Label of the root `alpha_i + ... + alpha_j`.
pub fn root_label(i: usize, j: usize) -> String {
    (i..=j).map(root_letter).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum End {
    Left,
    Right,
}

/// Simple root vectors `X_{a_i}` and their negatives `X_{-a_i}`.
#[derive(Clone, Debug)]
pub struct Realization {
    pub n: usize,
    pub form: u8,
    pub chart: Chart,
    pub pos: Vec<VectorField>,
    pub neg: Vec<VectorField>,
}

fn exp_var(v: &Var, sign: i64) -> Expr {
    Expr::exp(ExpMonomial::from_pairs(vec![(v.clone(), Rational::from_integer(sign.into()))]))
}

/// `exp(s * x_i) * (D[x_i] - D[x_j])`, or `exp(s * x_i) * D[x_i]` without `j`.
fn root_field(chart: &Chart, i: usize, other: Option<usize>, s: i64) -> VectorField {
    let mut f = VectorField::coordinate(chart, i);
    if let Some(j) = other {
        f = f.sub(&VectorField::coordinate(chart, j)).expect("same chart");
    }
    f.scale(&exp_var(&chart.vars()[i], s))
}

/// The realization of sl(k) on R^(k-1) in the given form (1 or 2).
pub fn realize_sl(k: usize, form: u8) -> Result<Realization> {
    if k < 2 {
        return Err(Error::Invalid("sl(k) needs k >= 2".into()));
    }
    if form != 1 && form != 2 {
        return Err(Error::Invalid(format!("unknown form {form}; expected 1 or 2")));
    }
    let n = k - 1;
    let chart = standard_chart(n);
    let mut pos = Vec::with_capacity(n);
    let mut neg = Vec::with_capacity(n);
    for i in 0..n {
        let (p, m) = if n == 1 {
            (None, None)
        } else if form == 1 {
            (i.checked_sub(1), (i + 1 < n).then_some(i + 1))
        } else {
            ((i + 1 < n).then_some(i + 1), i.checked_sub(1))
        };
        pos.push(root_field(&chart, i, p, 1));
        neg.push(root_field(&chart, i, m, -1));
    }
    Ok(Realization { n, form: if n == 1 { 1 } else { form }, chart, pos, neg })
}

impl Realization {
    /// Wraps arbitrary fields, for checking candidate realizations.
    pub fn from_fields(pos: Vec<VectorField>, neg: Vec<VectorField>) -> Result<Self> {
        if pos.len() != neg.len() || pos.is_empty() {
            return Err(Error::Invalid("need as many negative as positive simple root vectors".into()));
        }
        let chart = pos[0].chart().clone();
        for f in pos.iter().chain(&neg) {
            if f.chart() != &chart {
                return Err(Error::ChartMismatch(format!("({}) vs ({chart})", f.chart())));
            }
        }
        Ok(Realization { n: pos.len(), form: 0, chart, pos, neg })
    }

    /// `X_{a_i}` and `X_{-a_i}` in the order `Xa, Xb, ..., X-a, X-b, ...`.
    pub fn generators(&self) -> Vec<(String, VectorField)> {
        let mut out = Vec::new();
        for (i, f) in self.pos.iter().enumerate() {
            out.push((format!("X{}", root_letter(i)), f.clone()));
        }
        for (i, f) in self.neg.iter().enumerate() {
            out.push((format!("X-{}", root_letter(i)), f.clone()));
        }
        out
    }

    /// `H_i = [X_{a_i}, X_{-a_i}]`.
    pub fn cartan(&self) -> Result<Vec<VectorField>> {
        self.pos.iter().zip(&self.neg).map(|(p, m)| p.bracket(m)).collect()
    }

    /// `E_{i..j} = [X_{a_i}, E_{i+1..j}]`.
    pub fn positive(&self, i: usize, j: usize) -> Result<VectorField> {
        let mut cur = self.pos[j].clone();
        for t in (i..j).rev() {
            cur = self.pos[t].bracket(&cur)?;
        }
        Ok(cur)
    }

    /// `F_{i..j} = [X_{-a_i}, F_{i+1..j}]`.
    pub fn negative(&self, i: usize, j: usize) -> Result<VectorField> {
        let mut cur = self.neg[j].clone();
        for t in (i..j).rev() {
            cur = self.neg[t].bracket(&cur)?;
        }
        Ok(cur)
    }

    /// Full named basis: positive root vectors by height, negatives, then
    /// the Cartan fields.
    pub fn basis(&self) -> Result<LieBasis> {
        let mut named = Vec::new();
        for h in 0..self.n {
            for i in 0..self.n - h {
                named.push((format!("X{}", root_label(i, i + h)), self.positive(i, i + h)?));
            }
        }
        for h in 0..self.n {
            for i in 0..self.n - h {
                named.push((format!("X-{}", root_label(i, i + h)), self.negative(i, i + h)?));
            }
        }
        for (i, hf) in self.cartan()?.into_iter().enumerate() {
            named.push((format!("H{}", root_letter(i)), hf));
        }
        LieBasis::new(&self.chart, named)
    }

    /// Root datum of [`Realization::basis`] with the `H_i` as Cartan fields.
    pub fn root_datum(&self, basis: &LieBasis) -> Result<RootDatum> {
        let simple: Vec<usize> = (0..self.n)
            .map(|i| {
                basis
                    .index_of(&format!("X{}", root_letter(i)))
                    .ok_or_else(|| Error::Roots("missing simple root".into()))
            })
            .collect::<Result<_>>()?;
        crate::liealg::root_decomposition(basis, &self.cartan()?, &simple)
    }

    /// Commuting root vectors whose roots contain the chosen end node, built
    /// as `[X_next, current]` starting from the end simple root vector.
    /// Verified to commute pairwise and to have generic rank `n`.
    pub fn abelian_chain(&self, end: End, seed: u64) -> Result<Vec<(String, VectorField)>> {
        let n = self.n;
        let mut out = Vec::with_capacity(n);
        match end {
            End::Right => {
                let mut cur = self.pos[n - 1].clone();
                out.push((format!("X{}", root_label(n - 1, n - 1)), cur.clone()));
                for i in (0..n - 1).rev() {
                    cur = self.pos[i].bracket(&cur)?;
                    out.push((format!("X{}", root_label(i, n - 1)), cur.clone()));
                }
                out.reverse();
            }
            End::Left => {
                let mut cur = self.pos[0].clone();
                out.push((format!("X{}", root_label(0, 0)), cur.clone()));
                for i in 1..n {
                    cur = self.pos[i].bracket(&cur)?;
                    out.push((format!("X{}", root_label(0, i)), cur.clone()));
                }
            }
        }
        check_chain(&out, n, seed)?;
        Ok(out)
    }

    /// The right chain when it has full rank, otherwise the left one.
    pub fn default_chain(&self, seed: u64) -> Result<Vec<(String, VectorField)>> {
        self.abelian_chain(End::Right, seed).or_else(|_| self.abelian_chain(End::Left, seed))
    }
}

fn check_chain(chain: &[(String, VectorField)], n: usize, seed: u64) -> Result<()> {
    for (i, (a, x)) in chain.iter().enumerate() {
        if x.is_zero() {
            return Err(Error::Chain(format!("{a} vanishes")));
        }
        for (b, y) in &chain[i + 1..] {
            if !x.bracket(y)?.is_zero() {
                return Err(Error::Chain(format!("[{a}, {b}] is not zero")));
            }
        }
    }
    let fields: Vec<VectorField> = chain.iter().map(|c| c.1.clone()).collect();
    let r = generic_rank(&fields, 5, seed)?;
    if r != n {
        return Err(Error::Chain(format!("generic rank {r}, expected {n}")));
    }
    Ok(())
}

/// Commuting root vectors from a root datum of type A_n: the roots
/// `a_i + ... + a_n` (right) or `a_1 + ... + a_i` (left).
pub fn abelian_chain_in(
    basis: &LieBasis,
    datum: &RootDatum,
    end: End,
    seed: u64,
) -> Result<Vec<(String, VectorField)>> {
    let n = datum.rank();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let root: Vec<i64> = (0..n)
            .map(|t| match end {
                End::Right => i64::from(t >= i),
                End::Left => i64::from(t <= n - 1 - i),
            })
            .collect();
        let k = datum.index_of_root(&root).ok_or_else(|| Error::Chain(format!("no root vector for {root:?}")))?;
        out.push((basis.names()[k].clone(), basis.field(k).clone()));
    }
    if end == End::Left {
        out.reverse();
    }
    check_chain(&out, n, seed)?;
    Ok(out)
}

/// One named pass/fail line of a relation check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub relation: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SerreReport {
    pub checks: Vec<Check>,
    /// Global sign relating the eigenvalue table to the A_n Cartan matrix.
    pub sign: Option<i64>,
}

impl SerreReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

fn a_n(i: usize, j: usize) -> i64 {
    if i == j {
        2
    } else if i.abs_diff(j) == 1 {
        -1
    } else {
        0
    }
}

/// Checks the defining relations of sl(n+1) on the simple root vectors.
pub fn verify_serre(r: &Realization) -> SerreReport {
    let n = r.n;
    let mut checks = Vec::new();
    let mut push = |relation: String, res: Result<bool>, detail: String| {
        let (ok, detail) = match res {
            Ok(ok) => (ok, detail),
            Err(e) => (false, e.to_string()),
        };
        checks.push(Check { relation, ok, detail });
    };
    let l = root_letter;
    for i in 0..n {
        push(format!("X{} != 0", l(i)), Ok(!r.pos[i].is_zero()), String::new());
        push(format!("X-{} != 0", l(i)), Ok(!r.neg[i].is_zero()), String::new());
    }
    let zero = |a: &VectorField, b: &VectorField| -> (Result<bool>, String) {
        match a.bracket(b) {
            Ok(z) => (Ok(z.is_zero()), z.to_string()),
            Err(e) => (Err(e), String::new()),
        }
    };
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let (res, d) = zero(&r.pos[i], &r.neg[j]);
                push(format!("[X{}, X-{}] = 0", l(i), l(j)), res, d);
            }
        }
    }
    for i in 0..n {
        for j in i + 2..n {
            let (res, d) = zero(&r.pos[i], &r.pos[j]);
            push(format!("[X{}, X{}] = 0", l(i), l(j)), res, d);
            let (res, d) = zero(&r.neg[i], &r.neg[j]);
            push(format!("[X-{}, X-{}] = 0", l(i), l(j)), res, d);
        }
    }
    for i in 0..n {
        if i + 1 < n {
            for (a, b) in [(i, i + 1), (i + 1, i)] {
                let res = r.pos[a].bracket(&r.pos[b]).and_then(|z| r.pos[a].bracket(&z)).map(|z| z.is_zero());
                push(format!("ad(X{})^2 X{} = 0", l(a), l(b)), res, String::new());
                let res = r.neg[a].bracket(&r.neg[b]).and_then(|z| r.neg[a].bracket(&z)).map(|z| z.is_zero());
                push(format!("ad(X-{})^2 X-{} = 0", l(a), l(b)), res, String::new());
            }
        }
    }
    let hs = r.cartan();
    let mut sign = None;
    match &hs {
        Ok(hs) => {
            for i in 0..n {
                push(format!("H{} != 0", l(i)), Ok(!hs[i].is_zero()), hs[i].to_string());
                for j in i + 1..n {
                    let (res, d) = zero(&hs[i], &hs[j]);
                    push(format!("[H{}, H{}] = 0", l(i), l(j)), res, d);
                }
            }
            // eigenvalue table against the Cartan matrix, one global sign
            let mut table = Vec::new();
            let mut ok = true;
            let mut detail = String::new();
            for (i, h) in hs.iter().enumerate() {
                let mut row = Vec::new();
                for j in 0..n {
                    let p = ad_eigenvalue(h, &r.pos[j]);
                    let m = ad_eigenvalue(h, &r.neg[j]);
                    match (p, m) {
                        (Ok(p), Ok(m)) if p == -m.clone() => row.push(p),
                        (Ok(p), Ok(m)) => {
                            ok = false;
                            detail = format!("H{} acts by {} on X{} but {} on X-{}", l(i), p, l(j), m, l(j));
                            row.push(p);
                        }
                        (Err(e), _) | (_, Err(e)) => {
                            ok = false;
                            detail = e.to_string();
                            row.push(Rational::zero());
                        }
                    }
                }
                table.push(row);
            }
            if ok {
                let eps = if table[0][0] == Rational::from_integer(2.into()) { 1 } else { -1 };
                ok = (0..n).all(|i| (0..n).all(|j| table[i][j] == Rational::from_integer((eps * a_n(i, j)).into())));
                if ok {
                    sign = Some(eps);
                } else {
                    detail = format!("eigenvalue table {:?} is not a signed A_{n} Cartan matrix", fmt_table(&table));
                }
            }
            push("ad eigenvalues = ±Cartan(A_n)".into(), Ok(ok), detail);
        }
        Err(e) => push("H_i defined".into(), Ok(false), e.to_string()),
    }
    SerreReport { checks, sign }
}

fn fmt_table(t: &[Vec<Rational>]) -> Vec<Vec<String>> {
    t.iter().map(|r| r.iter().map(|q| q.to_string()).collect()).collect()
}

/// Outcome of the sl(3) parameter scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanResult {
    /// Polynomial constraints in `lambda, mu`.
    pub constraints: Vec<Poly>,
    /// Common zeros of the constraints.
    pub candidates: BTreeSet<(Rational, Rational)>,
    /// Candidates with `[X_a, X_b] != 0`.
    pub solutions: BTreeSet<(Rational, Rational)>,
}

/// `X_a = exp(x)(D[x] + lambda D[y])`, `X_b = exp(y)(mu D[x] + D[y])` with
/// symbolic `lambda`, `mu`.
pub fn sl3_family() -> (Chart, Var, Var, VectorField, VectorField) {
    let chart = standard_chart(2);
    let lambda = Var::new("lambda");
    let mu = Var::new("mu");
    let x = &chart.vars()[0];
    let y = &chart.vars()[1];
    let one = Expr::one();
    let xa = VectorField::new(chart.clone(), vec![one.clone(), Expr::var(&lambda)]).unwrap().scale(&exp_var(x, 1));
    let xb = VectorField::new(chart.clone(), vec![Expr::var(&mu), one]).unwrap().scale(&exp_var(y, 1));
    (chart, lambda, mu, xa, xb)
}

/// Coefficient polynomials in `params` of every component, grouped by the
/// remaining monomial.
fn parameter_coefficients(f: &VectorField, params: &[&Var]) -> Result<Vec<Poly>> {
    let mut out = Vec::new();
    for c in f.components() {
        if !c.denominator().is_one() {
            return Err(Error::PolySystem(format!("non-polynomial component {c}")));
        }
        let mut groups: BTreeMap<Monomial, Poly> = BTreeMap::new();
        for (m, q) in c.numerator().terms() {
            let mut rest = Vec::new();
            let mut par = Vec::new();
            for (v, k) in m.powers.iter() {
                if params.contains(&v) {
                    par.push((v.clone(), *k));
                } else {
                    rest.push((v.clone(), *k));
                }
            }
            let key = Monomial::new(PowerProduct::from_pairs(rest), m.exp.clone());
            groups
                .entry(key)
                .or_default()
                .add_term(Monomial::new(PowerProduct::from_pairs(par), ExpMonomial::one()), q.clone());
        }
        out.extend(groups.into_values());
    }
    Ok(out)
}

/// All rational `(lambda, mu)` for which `W = [X_a, X_b]` commutes with both
/// `X_a` and `X_b` while `W != 0`.
pub fn sl3_parameter_scan() -> Result<ScanResult> {
    let (_, lambda, mu, xa, xb) = sl3_family();
    let w = xa.bracket(&xb)?;
    let mut constraints = parameter_coefficients(&w.bracket(&xa)?, &[&lambda, &mu])?;
    constraints.extend(parameter_coefficients(&w.bracket(&xb)?, &[&lambda, &mu])?);
    constraints.retain(|p| !p.is_zero());
    let candidates = solve2(&constraints, &lambda, &mu)?;
    let mut solutions = BTreeSet::new();
    for (a, b) in &candidates {
        let bind = Bindings::new().var(&lambda, Expr::constant(a.clone())).var(&mu, Expr::constant(b.clone()));
        if !w.substitute(&bind)?.is_zero() {
            solutions.insert((a.clone(), b.clone()));
        }
    }
    Ok(ScanResult { constraints, candidates, solutions })
}

/// Checks `span{H_i} = span{D[x_1], ..., D[x_n]}`: every `H_i` has constant
/// coefficients and the coefficient matrix has rank `n`.
pub fn cartan_spans_translations(r: &Realization) -> Result<bool> {
    let hs = r.cartan()?;
    let mut m = Vec::new();
    for h in &hs {
        let row: Option<Vec<Rational>> = h.components().iter().map(Expr::constant_value).collect();
        match row {
            Some(row) => m.push(row),
            None => return Ok(false),
        }
    }
    Ok(crate::linalg::rank(&m) == r.chart.len())
}
