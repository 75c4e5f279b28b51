//! Jet spaces, total derivatives, prolongation, invariance of solved ODE
//! systems and their transformation under point maps.

use std::fmt;

use crate::error::{Error, Result};
use crate::symexpr::{Binding, Bindings, Expr, Var};
use crate::vectorfield::{Chart, Coord, PointMap, VectorField};

/// One independent variable, several dependents, jets up to `order`.
/// Jet symbols are named `y_1, y_2, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetChart {
    independent: Var,
    dependents: Vec<Var>,
    order: usize,
    base: Chart,
    chart: Chart,
}

impl JetChart {
    pub fn new(independent: Var, dependents: Vec<Var>, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidChart("jet order must be at least 1".into()));
        }
        if dependents.is_empty() {
            return Err(Error::InvalidChart("no dependent variables".into()));
        }
        let mut base = vec![independent.clone()];
        base.extend(dependents.iter().cloned());
        let mut all = base.clone();
        for k in 1..=order {
            all.extend(dependents.iter().map(|d| Var::jet(d, k)));
        }
        Ok(JetChart { independent, dependents, order, base: Chart::new(base)?, chart: Chart::new(all)? })
    }

    pub fn from_names(independent: &str, dependents: &[&str], order: usize) -> Result<Self> {
        Self::new(Var::new(independent), dependents.iter().map(|d| Var::new(d)).collect(), order)
    }

    /// First coordinate independent, the rest dependent.
    pub fn over(base: &Chart, order: usize) -> Result<Self> {
        let vars = base.vars();
        Self::new(vars[0].clone(), vars[1..].to_vec(), order)
    }

    pub fn independent(&self) -> &Var {
        &self.independent
    }

    pub fn dependents(&self) -> &[Var] {
        &self.dependents
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn base_chart(&self) -> &Chart {
        &self.base
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    /// `y^a_k`; `k = 0` is the dependent itself.
    pub fn jet(&self, a: usize, k: usize) -> Var {
        Var::jet(&self.dependents[a], k)
    }

    /// `(a, k)` when `v` is a dependent (`k = 0`) or one of its jets of any order.
    fn jet_index(&self, v: &Var) -> Option<(usize, usize)> {
        if let Some(a) = self.dependents.iter().position(|d| d == v) {
            return Some((a, 0));
        }
        let (base, k) = v.jet_parts()?;
        let a = self.dependents.iter().position(|d| d.name() == base)?;
        Some((a, k))
    }

    /// `D = d/dx + sum y^a_{k+1} d/dy^a_k`, extended past the chart order as needed.
    pub fn total_derivative(&self, f: &Expr) -> Expr {
        let mut acc = f.differentiate(&self.independent);
        for v in f.variables() {
            if let Some((a, k)) = self.jet_index(&v) {
                let d = f.differentiate(&v);
                if !d.is_zero() {
                    acc = acc.add(&d.mul(&Expr::var(&self.jet(a, k + 1))));
                }
            }
        }
        acc
    }

    /// Prolongation of a point field on the base chart to the full jet chart.
    pub fn prolong(&self, x: &VectorField) -> Result<VectorField> {
        if x.chart() != &self.base {
            return Err(Error::ChartMismatch(format!("field on ({}) prolonged over base ({})", x.chart(), self.base)));
        }
        for c in x.components() {
            if c.variables().iter().any(|v| matches!(self.jet_index(v), Some((_, k)) if k > 0)) {
                return Err(Error::Invalid(format!("point field depends on jet variables: {c}")));
            }
        }
        let m = self.dependents.len();
        let xi = x.component(0).clone();
        let dxi = self.total_derivative(&xi);
        let mut comps = x.components().to_vec();
        let mut prev: Vec<Expr> = x.components()[1..].to_vec();
        for k in 1..=self.order {
            let mut next = Vec::with_capacity(m);
            for (a, zeta) in prev.iter().enumerate() {
                let yk = Expr::var(&self.jet(a, k));
                next.push(self.total_derivative(zeta).sub(&yk.mul(&dxi)));
            }
            comps.extend(next.iter().cloned());
            prev = next;
        }
        VectorField::new(self.chart.clone(), comps)
    }

    /// Restriction of a jet field to the base coordinates.
    pub fn restrict(&self, x: &VectorField) -> Result<VectorField> {
        VectorField::new(self.base.clone(), x.components()[..self.base.len()].to_vec())
    }
}

/// `y^a_K = f^a(x, y, ..., y_{K-1})`, one equation per dependent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OdeSystem {
    jet: JetChart,
    rhs: Vec<Expr>,
    params: Vec<Var>,
}

impl OdeSystem {
    pub fn new(jet: JetChart, rhs: Vec<Expr>) -> Result<Self> {
        Self::with_params(jet, rhs, Vec::new())
    }

    /// Symbols listed in `params` are constants.
    pub fn with_params(jet: JetChart, rhs: Vec<Expr>, params: Vec<Var>) -> Result<Self> {
        if rhs.len() != jet.dependents.len() {
            return Err(Error::ChartMismatch(format!(
                "{} equations for {} dependents",
                rhs.len(),
                jet.dependents.len()
            )));
        }
        for f in &rhs {
            for v in f.variables() {
                match jet.jet_index(&v) {
                    Some((_, k)) if k >= jet.order => {
                        return Err(Error::Invalid(format!("right side {f} contains the top derivative {v}")))
                    }
                    Some(_) => {}
                    None if v == jet.independent || params.contains(&v) => {}
                    None => return Err(Error::Undeclared { name: v.to_string(), pos: 0 }),
                }
            }
        }
        Ok(OdeSystem { jet, rhs, params })
    }

    /// `y^a_K = 0` for every dependent.
    pub fn free(jet: JetChart) -> Self {
        let n = jet.dependents.len();
        OdeSystem { jet, rhs: vec![Expr::zero(); n], params: Vec::new() }
    }

    pub fn jet(&self) -> &JetChart {
        &self.jet
    }

    pub fn rhs(&self) -> &[Expr] {
        &self.rhs
    }

    pub fn params(&self) -> &[Var] {
        &self.params
    }

    pub fn is_free(&self) -> bool {
        self.rhs.iter().all(Expr::is_zero)
    }

    fn top_bindings(&self) -> Bindings {
        let mut b = Bindings::new();
        for (a, f) in self.rhs.iter().enumerate() {
            b.insert(Binding::Var(self.jet.jet(a, self.jet.order)), f.clone());
        }
        b
    }

    /// `X2(y^a_K - f^a)` restricted to the solution locus, per equation.
    pub fn invariance(&self, x2: &VectorField) -> Result<Vec<Expr>> {
        if x2.chart() != self.jet.chart() {
            return Err(Error::ChartMismatch(format!(
                "jet field on ({}) checked against system on ({})",
                x2.chart(),
                self.jet.chart()
            )));
        }
        let locus = self.top_bindings();
        self.rhs
            .iter()
            .enumerate()
            .map(|(a, f)| {
                let eq = Expr::var(&self.jet.jet(a, self.jet.order)).sub(f);
                x2.apply(&eq).substitute(&locus)
            })
            .collect()
    }

    /// Prolongs `x` and checks invariance.
    pub fn is_invariant_under(&self, x: &VectorField) -> Result<bool> {
        let x2 = self.jet.prolong(x)?;
        Ok(self.invariance(&x2)?.iter().all(Expr::is_zero))
    }

    /// Rewrites the system in the target coordinates of `m`, whose first
    /// target coordinate becomes the new independent variable.
    pub fn transform(&self, m: &PointMap) -> Result<OdeSystem> {
        if m.source() != self.jet.base_chart() {
            return Err(Error::ChartMismatch(format!(
                "map from ({}) applied to a system on ({})",
                m.source(),
                self.jet.base_chart()
            )));
        }
        let jet = &self.jet;
        let order = jet.order;
        let new_jet = JetChart::over(m.target(), order)?;

        let d_coord = |c: &Coord| -> Result<Expr> {
            match c {
                Coord::Value(e) => Ok(jet.total_derivative(e)),
                Coord::Exp(e) => jet.total_derivative(e).try_div(e),
            }
        };
        let dphi = d_coord(&m.forward()[0])?;
        if dphi.is_zero() || dphi.substitute(&self.top_bindings())?.is_zero() {
            return Err(Error::DegenerateIndependent(format!("D({}) vanishes", m.forward()[0].expr())));
        }
        let locus = self.top_bindings();
        let mut tops = Vec::with_capacity(jet.dependents.len());
        for c in &m.forward()[1..] {
            let mut p = d_coord(c)?.try_div(&dphi)?;
            for _ in 1..order {
                p = jet.total_derivative(&p).try_div(&dphi)?;
            }
            tops.push(p.substitute(&locus)?);
        }

        // old jets through new ones, by prolonging the inverse map
        let mut back = m.inverse_bindings();
        let inv = m.inverse();
        let d_new = |c: &Coord| -> Result<Expr> {
            match c {
                Coord::Value(e) => Ok(new_jet.total_derivative(e)),
                Coord::Exp(e) => new_jet.total_derivative(e).try_div(e),
            }
        };
        let dtheta = d_new(&inv[0])?;
        if dtheta.is_zero() {
            return Err(Error::DegenerateIndependent(format!("D({}) vanishes", inv[0].expr())));
        }
        for (a, c) in inv[1..].iter().enumerate() {
            let mut q = d_new(c)?.try_div(&dtheta)?;
            for k in 1..order {
                back.insert(Binding::Var(jet.jet(a, k)), q.clone());
                q = new_jet.total_derivative(&q).try_div(&dtheta)?;
            }
        }
        let rhs = tops
            .iter()
            .map(|t| t.substitute(&back))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::NotSolvable(e.to_string()))?;
        OdeSystem::with_params(new_jet, rhs, self.params.clone())
    }
}

impl fmt::Display for OdeSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, r) in self.rhs.iter().enumerate() {
            if a > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{} = {}", self.jet.jet(a, self.jet.order), r)?;
        }
        Ok(())
    }
}
