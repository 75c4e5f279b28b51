//! Finite-dimensional Lie algebras of vector fields: spans, closure,
//! structure constants, root decomposition and generic rank.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::symexpr::{lcm, Expr, Monomial, Poly, Rational, Var};
use crate::vectorfield::{Chart, VectorField};

type Key = (usize, Monomial);
type Vector = BTreeMap<Key, Rational>;

#[derive(Clone, Debug)]
struct Row {
    vec: Vector,
    pivot: Key,
    combo: BTreeMap<usize, Rational>,
}

/// Incremental echelon form of a list of fields over Q. Component `c` of
/// every field is scaled by a common denominator so that all entries are
/// polynomial; coefficients of canonical monomials are the coordinates.
#[derive(Clone, Debug)]
struct LinearSpan {
    chart: Chart,
    elems: Vec<VectorField>,
    dens: Vec<Poly>,
    rows: Vec<Row>,
}

fn axpy(v: &mut Vector, f: &Rational, w: &Vector) {
    for (k, x) in w {
        let e = v.entry(k.clone()).or_insert_with(Rational::zero);
        *e -= f * x;
        if e.is_zero() {
            v.remove(k);
        }
    }
}

impl LinearSpan {
    fn new(chart: &Chart) -> Self {
        LinearSpan { chart: chart.clone(), elems: Vec::new(), dens: vec![Poly::one(); chart.len()], rows: Vec::new() }
    }

    /// Grows the common denominators to cover `x`; true if they changed.
    fn widen(&mut self, x: &VectorField) -> bool {
        let mut changed = false;
        for (c, e) in x.components().iter().enumerate() {
            if e.denominator().is_one() {
                continue;
            }
            let l = lcm(&self.dens[c], e.denominator());
            if l != self.dens[c] {
                self.dens[c] = l;
                changed = true;
            }
        }
        changed
    }

    fn vector(&self, x: &VectorField) -> Vector {
        let mut v = Vector::new();
        for (c, e) in x.components().iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            let scaled = e.mul(&Expr::from_poly(self.dens[c].clone()));
            debug_assert!(scaled.is_polynomial());
            for (m, q) in scaled.numerator().terms() {
                v.insert((c, m.clone()), q.clone());
            }
        }
        v
    }

    fn reduce(&self, mut v: Vector) -> (Vector, BTreeMap<usize, Rational>) {
        let mut combo: BTreeMap<usize, Rational> = BTreeMap::new();
        for row in &self.rows {
            if let Some(x) = v.get(&row.pivot).cloned() {
                let f = x / &row.vec[&row.pivot];
                axpy(&mut v, &f, &row.vec);
                for (j, c) in &row.combo {
                    *combo.entry(*j).or_insert_with(Rational::zero) += &f * c;
                }
            }
        }
        combo.retain(|_, c| !c.is_zero());
        (v, combo)
    }

    fn rebuild(&mut self) {
        let elems = std::mem::take(&mut self.elems);
        self.rows.clear();
        for x in elems {
            let ok = self.insert_unchecked(x);
            debug_assert!(ok);
        }
    }

    fn insert_unchecked(&mut self, x: VectorField) -> bool {
        let (res, combo) = self.reduce(self.vector(&x));
        if res.is_empty() {
            return false;
        }
        let idx = self.elems.len();
        let mut combo: BTreeMap<usize, Rational> = combo.into_iter().map(|(j, c)| (j, -c)).collect();
        combo.insert(idx, Rational::one());
        let pivot = res.keys().next_back().unwrap().clone();
        self.rows.push(Row { vec: res, pivot, combo });
        self.elems.push(x);
        true
    }

    /// Appends `x` if independent of the current elements.
    fn insert(&mut self, x: &VectorField) -> Result<bool> {
        if x.chart() != &self.chart {
            return Err(Error::ChartMismatch(format!("({}) vs ({})", x.chart(), self.chart)));
        }
        if self.widen(x) {
            self.rebuild();
        }
        Ok(self.insert_unchecked(x.clone()))
    }

    /// Coefficients of `x` in the elements, or the residual as a field.
    fn express(&self, x: &VectorField) -> Result<std::result::Result<Vec<Rational>, VectorField>> {
        if x.chart() != &self.chart {
            return Err(Error::ChartMismatch(format!("({}) vs ({})", x.chart(), self.chart)));
        }
        let covered = x
            .components()
            .iter()
            .zip(&self.dens)
            .all(|(e, d)| e.denominator().is_one() || d.try_div(e.denominator()).is_some());
        let widened;
        let probe = if covered {
            self
        } else {
            let mut p = self.clone();
            p.widen(x);
            p.rebuild();
            widened = p;
            &widened
        };
        let (res, combo) = probe.reduce(probe.vector(x));
        if !res.is_empty() {
            let mut comps = vec![Poly::zero(); self.chart.len()];
            for ((c, m), q) in res {
                comps[c].add_term(m, q);
            }
            let comps = comps
                .into_iter()
                .zip(&probe.dens)
                .map(|(p, d)| Expr::from_parts(p, d.clone()))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Err(VectorField::new(self.chart.clone(), comps)?));
        }
        let mut out = vec![Rational::zero(); self.elems.len()];
        for (j, c) in combo {
            out[j] = c;
        }
        Ok(Ok(out))
    }
}

/// Named, linearly independent fields on one chart.
#[derive(Clone, Debug)]
pub struct LieBasis {
    names: Vec<String>,
    span: LinearSpan,
}

impl LieBasis {
    pub fn new(chart: &Chart, named: Vec<(String, VectorField)>) -> Result<Self> {
        let mut b = LieBasis { names: Vec::new(), span: LinearSpan::new(chart) };
        for (n, x) in named {
            b.push(n, x)?;
        }
        Ok(b)
    }

    pub fn push(&mut self, name: String, x: VectorField) -> Result<()> {
        if !self.span.insert(&x)? {
            return Err(Error::DependentGenerator(name));
        }
        self.names.push(name);
        Ok(())
    }

    pub fn chart(&self) -> &Chart {
        &self.span.chart
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn fields(&self) -> &[VectorField] {
        &self.span.elems
    }

    pub fn field(&self, i: usize) -> &VectorField {
        &self.span.elems[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn get(&self, name: &str) -> Option<&VectorField> {
        self.index_of(name).map(|i| self.field(i))
    }

    /// Unique coordinates of `x` in this basis.
    pub fn express(&self, x: &VectorField) -> Result<Vec<Rational>> {
        match self.span.express(x)? {
            Ok(c) => Ok(c),
            Err(res) => Err(Error::NotInSpan(res.to_string())),
        }
    }

    pub fn contains(&self, x: &VectorField) -> Result<bool> {
        Ok(self.span.express(x)?.is_ok())
    }

    pub fn structure_constants(&self) -> Result<StructureConstants> {
        structure_constants(self)
    }
}

/// Brackets generators pairwise until the span is closed. New elements are
/// named `[A,B]` after the pair that produced them.
pub fn closure_generate(generators: &[(String, VectorField)], max_dim: usize) -> Result<LieBasis> {
    let chart =
        generators.first().map(|g| g.1.chart().clone()).ok_or_else(|| Error::Invalid("no generators".into()))?;
    if generators.len() > max_dim {
        return Err(Error::BudgetExceeded(max_dim));
    }
    let mut b = LieBasis::new(&chart, generators.to_vec())?;
    let mut j = 1;
    while j < b.len() {
        for i in 0..j {
            let z = b.field(i).bracket(b.field(j))?;
            if z.is_zero() || b.contains(&z)? {
                continue;
            }
            if b.len() == max_dim {
                return Err(Error::BudgetExceeded(max_dim));
            }
            let name = format!("[{},{}]", b.names[i], b.names[j]);
            b.push(name, z)?;
        }
        j += 1;
    }
    Ok(b)
}

/// `c[i][j][k]` with `[X_i, X_j] = sum_k c[i][j][k] X_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureConstants {
    pub dim: usize,
    #[serde(serialize_with = "ser_tensor")]
    pub c: Vec<Vec<Vec<Rational>>>,
}

fn ser_tensor<S: serde::Serializer>(t: &[Vec<Vec<Rational>>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strs: Vec<Vec<Vec<String>>> =
        t.iter().map(|a| a.iter().map(|b| b.iter().map(|q| q.to_string()).collect()).collect()).collect();
    strs.serialize(s)
}

impl StructureConstants {
    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.c[i][j][k]
    }

    /// `(i, j, k, c)` with `i < j` and `c != 0`.
    pub fn nonzero(&self) -> Vec<(usize, usize, usize, Rational)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in 0..self.dim {
                    if !self.c[i][j][k].is_zero() {
                        out.push((i, j, k, self.c[i][j][k].clone()));
                    }
                }
            }
        }
        out
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| (0..self.dim).all(|k| self.c[i][j][k] == -self.c[j][i][k].clone())))
    }

    /// Jacobi identity on the tensor.
    pub fn satisfies_jacobi(&self) -> bool {
        let n = self.dim;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for m in 0..n {
                        let mut s = Rational::zero();
                        for l in 0..n {
                            s += &self.c[i][j][l] * &self.c[l][k][m];
                            s += &self.c[j][k][l] * &self.c[l][i][m];
                            s += &self.c[k][i][l] * &self.c[l][j][m];
                        }
                        if !s.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

#[allow(clippy::needless_range_loop)]
pub fn structure_constants(b: &LieBasis) -> Result<StructureConstants> {
    let n = b.len();
    let mut c = vec![vec![vec![Rational::zero(); n]; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let z = b.field(i).bracket(b.field(j))?;
            let v = match b.span.express(&z)? {
                Ok(v) => v,
                Err(res) => {
                    return Err(Error::NotClosed(format!(
                        "[{}, {}] leaves the span by {}",
                        b.names[i], b.names[j], res
                    )))
                }
            };
            for (k, q) in v.into_iter().enumerate() {
                c[j][i][k] = -q.clone();
                c[i][j][k] = q;
            }
        }
    }
    let sc = StructureConstants { dim: n, c };
    if !sc.satisfies_jacobi() {
        return Err(Error::NotClosed("structure constants violate the Jacobi identity".into()));
    }
    Ok(sc)
}

/// `lambda` with `[H, X] = lambda X`.
pub fn ad_eigenvalue(h: &VectorField, x: &VectorField) -> Result<Rational> {
    if x.is_zero() {
        return Err(Error::NotEigenvector("zero field".into()));
    }
    let z = h.bracket(x)?;
    let i = x.components().iter().position(|c| !c.is_zero()).unwrap();
    let ratio = z.component(i).try_div(x.component(i))?;
    let lambda = ratio
        .constant_value()
        .ok_or_else(|| Error::NotEigenvector(format!("[H, X] = {z} is not a multiple of X = {x}")))?;
    if z != x.scale_rational(&lambda) {
        return Err(Error::NotEigenvector(format!("[H, X] = {z} is not a multiple of X = {x}")));
    }
    Ok(lambda)
}

/// Root assignment of a basis relative to commuting Cartan fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    /// Basis indices of the designated simple roots.
    pub simple: Vec<usize>,
    /// `(basis index, coordinates over the simple roots)` for every root vector.
    pub roots: Vec<(usize, Vec<i64>)>,
    /// Basis indices lying in the span of the Cartan fields.
    pub cartan_span: Vec<usize>,
    /// `raw[i][j]`: eigenvalue of `ad H_i` on the `j`-th simple root vector.
    pub raw_cartan: Vec<Vec<Rational>>,
    /// Global sign making the diagonal of `raw_cartan` positive.
    pub sign: i64,
}

impl RootDatum {
    pub fn rank(&self) -> usize {
        self.simple.len()
    }

    /// `sign * raw_cartan`, as integers when possible.
    pub fn cartan_matrix(&self) -> Option<Vec<Vec<i64>>> {
        self.raw_cartan
            .iter()
            .map(|row| {
                row.iter()
                    .map(|q| {
                        let q = q * Rational::from_integer(self.sign.into());
                        q.is_integer().then(|| q.to_integer().to_i64()).flatten()
                    })
                    .collect()
            })
            .collect()
    }

    pub fn root_of(&self, basis_index: usize) -> Option<&[i64]> {
        self.roots.iter().find(|(i, _)| *i == basis_index).map(|(_, r)| r.as_slice())
    }

    pub fn index_of_root(&self, root: &[i64]) -> Option<usize> {
        self.roots.iter().find(|(_, r)| r == root).map(|(i, _)| *i)
    }

    pub fn positive_roots(&self) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> =
            self.roots.iter().map(|(_, r)| r.clone()).filter(|r| r.iter().all(|c| *c >= 0)).collect();
        out.sort();
        out
    }
}

/// Decomposes `b` under `cartan`, with root coordinates taken over the basis
/// elements listed in `simple`.
pub fn root_decomposition(b: &LieBasis, cartan: &[VectorField], simple: &[usize]) -> Result<RootDatum> {
    for (i, h) in cartan.iter().enumerate() {
        for g in &cartan[i + 1..] {
            if !h.bracket(g)?.is_zero() {
                return Err(Error::Roots("Cartan fields do not commute".into()));
            }
        }
    }
    let hspan =
        LieBasis::new(b.chart(), cartan.iter().enumerate().map(|(i, h)| (format!("H{i}"), h.clone())).collect())?;
    let mut eig: BTreeMap<usize, Vec<Rational>> = BTreeMap::new();
    let mut cartan_span = Vec::new();
    for (k, x) in b.fields().iter().enumerate() {
        if hspan.contains(x)? {
            cartan_span.push(k);
            continue;
        }
        let v = cartan
            .iter()
            .map(|h| ad_eigenvalue(h, x))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::Roots(format!("{}: {e}", b.names()[k])))?;
        eig.insert(k, v);
    }
    let n = cartan.len();
    let raw: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            simple
                .iter()
                .map(|s| {
                    eig.get(s)
                        .map(|v| v[i].clone())
                        .ok_or_else(|| Error::Roots(format!("simple element {s} is not a root vector")))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut roots = Vec::new();
    let mut seen = BTreeSet::new();
    for (k, v) in &eig {
        let c = linalg::solve(&raw, v)
            .filter(|c| (0..n).all(|i| (0..simple.len()).fold(Rational::zero(), |a, j| a + &raw[i][j] * &c[j]) == v[i]))
            .ok_or_else(|| Error::Roots(format!("{} is not in the root lattice", b.names()[*k])))?;
        let ints = c
            .iter()
            .map(|q| if q.is_integer() { q.to_integer().to_i64() } else { None })
            .collect::<Option<Vec<i64>>>()
            .ok_or_else(|| Error::Roots(format!("{} has non-integer root coordinates", b.names()[*k])))?;
        if ints.iter().all(|c| *c == 0) || !(ints.iter().all(|c| *c >= 0) || ints.iter().all(|c| *c <= 0)) {
            return Err(Error::Roots(format!("{} has root {:?}", b.names()[*k], ints)));
        }
        if !seen.insert(ints.clone()) {
            return Err(Error::RootMultiplicity(format!("{:?}", ints)));
        }
        roots.push((*k, ints));
    }
    let diag: Vec<&Rational> = (0..n.min(simple.len())).map(|i| &raw[i][i]).collect();
    let sign = if diag.iter().all(|q| q.is_positive()) {
        1
    } else if diag.iter().all(|q| q.is_negative()) {
        -1
    } else {
        return Err(Error::Roots("diagonal of the Cartan table has mixed signs".into()));
    };
    Ok(RootDatum { simple: simple.to_vec(), roots, cartan_span, raw_cartan: raw, sign })
}

fn sample_rational(rng: &mut ChaCha8Rng, nonzero: bool) -> Rational {
    loop {
        let p: i64 = rng.gen_range(-30..=30);
        let q: i64 = rng.gen_range(1..=11);
        if nonzero && p == 0 {
            continue;
        }
        return Rational::new(BigInt::from(p), BigInt::from(q));
    }
}

/// Generic rank of the coefficient matrix: the maximum exact rank over
/// `trials` random rational points, with exponential atoms sampled as
/// independent nonzero rationals.
pub fn generic_rank(fields: &[VectorField], trials: usize, seed: u64) -> Result<usize> {
    const RETRIES: usize = 25;
    let Some(first) = fields.first() else {
        return Ok(0);
    };
    let chart = first.chart();
    for f in fields {
        if f.chart() != chart {
            return Err(Error::ChartMismatch(format!("({}) vs ({})", f.chart(), chart)));
        }
    }
    let mut vars: BTreeSet<Var> = chart.vars().iter().cloned().collect();
    for f in fields {
        for c in f.components() {
            vars.extend(c.variables());
        }
    }
    let full = chart.len().min(fields.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    let mut done = 0;
    let mut failures = 0;
    while done < trials.max(1) {
        let point: BTreeMap<Var, Rational> =
            vars.iter().map(|v| (v.clone(), sample_rational(&mut rng, false))).collect();
        let exps: BTreeMap<Var, Rational> = vars.iter().map(|v| (v.clone(), sample_rational(&mut rng, true))).collect();
        let rows: std::result::Result<Vec<Vec<Rational>>, Error> =
            fields.iter().map(|f| f.eval_at(&point, &exps)).collect();
        match rows {
            Ok(m) => {
                best = best.max(linalg::rank(&m));
                done += 1;
                if best == full {
                    break;
                }
            }
            Err(Error::SingularPoint) => {
                failures += 1;
                if failures >= RETRIES {
                    return Err(Error::SamplingFailed(RETRIES));
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(best)
}
