//! Vector fields on coordinate charts, Lie brackets and point maps.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::symexpr::{leading_negative, Bindings, ExpMonomial, Expr, Rational, Var};

/// Ordered list of distinct coordinate names.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Chart {
    vars: Arc<[Var]>,
}

impl Chart {
    pub fn new(vars: Vec<Var>) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::InvalidChart("empty chart".into()));
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::InvalidChart(format!("duplicate coordinate `{v}`")));
            }
        }
        Ok(Chart { vars: vars.into() })
    }

    pub fn from_names(names: &[&str]) -> Result<Self> {
        Self::new(names.iter().map(|n| Var::new(n)).collect())
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn index_of(&self, v: &Var) -> Option<usize> {
        self.vars.iter().position(|w| w == v)
    }

    pub fn contains(&self, v: &Var) -> bool {
        self.index_of(v).is_some()
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vars.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chart({self})")
    }
}

/// `sum_i c_i D[x_i]` with one coefficient per chart coordinate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VectorField {
    chart: Chart,
    comps: Vec<Expr>,
}

impl VectorField {
    pub fn new(chart: Chart, comps: Vec<Expr>) -> Result<Self> {
        if comps.len() != chart.len() {
            return Err(Error::ChartMismatch(format!(
                "{} components for a chart of dimension {}",
                comps.len(),
                chart.len()
            )));
        }
        Ok(VectorField { chart, comps })
    }

    pub fn zero(chart: &Chart) -> Self {
        VectorField { chart: chart.clone(), comps: vec![Expr::zero(); chart.len()] }
    }

    /// The coordinate field `D[x_i]`.
    pub fn coordinate(chart: &Chart, i: usize) -> Self {
        let mut f = Self::zero(chart);
        f.comps[i] = Expr::one();
        f
    }

    pub fn from_pairs(chart: &Chart, pairs: &[(&str, Expr)]) -> Result<Self> {
        let mut f = Self::zero(chart);
        for (name, c) in pairs {
            let i = chart
                .index_of(&Var::new(name))
                .ok_or_else(|| Error::ChartMismatch(format!("`{name}` is not a coordinate of ({chart})")))?;
            f.comps[i] = f.comps[i].add(c);
        }
        Ok(f)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn components(&self) -> &[Expr] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &Expr {
        &self.comps[i]
    }

    pub fn component_of(&self, v: &Var) -> Option<&Expr> {
        self.chart.index_of(v).map(|i| &self.comps[i])
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Expr::is_zero)
    }

    /// Directional derivative `X(f)`; symbols outside the chart are constants.
    pub fn apply(&self, f: &Expr) -> Expr {
        let mut acc = Expr::zero();
        for (v, c) in self.chart.vars.iter().zip(&self.comps) {
            if c.is_zero() {
                continue;
            }
            let d = f.differentiate(v);
            if !d.is_zero() {
                acc = acc.add(&c.mul(&d));
            }
        }
        acc
    }

    fn check_chart(&self, other: &VectorField) -> Result<()> {
        if self.chart != other.chart {
            return Err(Error::ChartMismatch(format!("({}) vs ({})", self.chart, other.chart)));
        }
        Ok(())
    }

    pub fn bracket(&self, other: &VectorField) -> Result<VectorField> {
        self.check_chart(other)?;
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| self.apply(b).sub(&other.apply(a))).collect();
        Ok(VectorField { chart: self.chart.clone(), comps })
    }

    pub fn add(&self, other: &VectorField) -> Result<VectorField> {
        self.check_chart(other)?;
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect();
        Ok(VectorField { chart: self.chart.clone(), comps })
    }

    pub fn sub(&self, other: &VectorField) -> Result<VectorField> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> VectorField {
        VectorField { chart: self.chart.clone(), comps: self.comps.iter().map(Expr::neg).collect() }
    }

    pub fn scale(&self, s: &Expr) -> VectorField {
        VectorField { chart: self.chart.clone(), comps: self.comps.iter().map(|c| c.mul(s)).collect() }
    }

    pub fn scale_rational(&self, s: &Rational) -> VectorField {
        VectorField { chart: self.chart.clone(), comps: self.comps.iter().map(|c| c.scale(s)).collect() }
    }

    /// Multiplies every component by `exp(e)`.
    pub fn mul_exp(&self, e: &ExpMonomial) -> VectorField {
        self.scale(&Expr::exp(e.clone()))
    }

    pub fn substitute(&self, b: &Bindings) -> Result<VectorField> {
        let comps = self.comps.iter().map(|c| c.substitute(b)).collect::<Result<_>>()?;
        Ok(VectorField { chart: self.chart.clone(), comps })
    }

    /// Same components read on another chart of equal dimension.
    pub fn with_chart(&self, chart: &Chart) -> Result<VectorField> {
        VectorField::new(chart.clone(), self.comps.clone())
    }

    pub fn eval_at(
        &self,
        point: &BTreeMap<Var, Rational>,
        exp_values: &BTreeMap<Var, Rational>,
    ) -> Result<Vec<Rational>> {
        self.comps.iter().map(|c| c.eval_at(point, exp_values)).collect()
    }
}

fn single_term(c: &Expr) -> bool {
    c.is_polynomial() && c.numerator().len() == 1
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in self.chart.vars.iter().zip(&self.comps) {
            if c.is_zero() {
                continue;
            }
            let neg = leading_negative(c);
            let mag = if neg { c.neg() } else { c.clone() };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            if mag.is_one() {
                write!(f, "D[{v}]")?;
            } else if single_term(&mag) {
                write!(f, "{mag}*D[{v}]")?;
            } else {
                write!(f, "({mag})*D[{v}]")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField({self})")
    }
}

/// One coordinate of a point map: either `t = e` or `exp(t) = e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coord {
    Value(Expr),
    Exp(Expr),
}

impl Coord {
    pub fn expr(&self) -> &Expr {
        match self {
            Coord::Value(e) | Coord::Exp(e) => e,
        }
    }

    fn binding(&self, v: &Var, b: &mut Bindings) {
        match self {
            Coord::Value(e) => b.insert(crate::symexpr::Binding::Var(v.clone()), e.clone()),
            Coord::Exp(e) => b.insert(crate::symexpr::Binding::Exp(v.clone()), e.clone()),
        }
    }

    /// The expression this coordinate must reduce to after a round trip.
    fn identity(&self, v: &Var) -> Expr {
        match self {
            Coord::Value(_) => Expr::var(v),
            Coord::Exp(_) => Expr::exp(ExpMonomial::from_pairs(vec![(v.clone(), Rational::from_integer(1.into()))])),
        }
    }

    fn fmt_with(&self, v: &Var, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Value(e) => write!(f, "{v} = {e}"),
            Coord::Exp(e) => write!(f, "exp({v}) = {e}"),
        }
    }
}

/// Invertible change of coordinates given in both directions. Construction
/// verifies that each direction undoes the other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointMap {
    source: Chart,
    target: Chart,
    forward: Vec<Coord>,
    inverse: Vec<Coord>,
}

impl PointMap {
    pub fn new(source: Chart, target: Chart, forward: Vec<Coord>, inverse: Vec<Coord>) -> Result<Self> {
        if forward.len() != target.len() || inverse.len() != source.len() {
            return Err(Error::ChartMismatch("point map arity does not match its charts".into()));
        }
        if source.len() != target.len() {
            return Err(Error::NotInvertible("source and target dimensions differ".into()));
        }
        let m = PointMap { source, target, forward, inverse };
        m.verify()?;
        Ok(m)
    }

    pub fn identity(chart: &Chart) -> Self {
        let coords = chart.vars().iter().map(|v| Coord::Value(Expr::var(v))).collect::<Vec<_>>();
        PointMap { source: chart.clone(), target: chart.clone(), forward: coords.clone(), inverse: coords }
    }

    fn verify(&self) -> Result<()> {
        let inv = self.inverse_bindings();
        for (v, c) in self.target.vars().iter().zip(&self.forward) {
            let back = c.expr().substitute(&inv).map_err(|e| Error::NotInvertible(e.to_string()))?;
            if back != c.identity(v) {
                return Err(Error::NotInvertible(format!("forward {v} becomes {back}")));
            }
        }
        let fwd = self.forward_bindings();
        for (v, c) in self.source.vars().iter().zip(&self.inverse) {
            let back = c.expr().substitute(&fwd).map_err(|e| Error::NotInvertible(e.to_string()))?;
            if back != c.identity(v) {
                return Err(Error::NotInvertible(format!("inverse {v} becomes {back}")));
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Chart {
        &self.source
    }

    pub fn target(&self) -> &Chart {
        &self.target
    }

    pub fn forward(&self) -> &[Coord] {
        &self.forward
    }

    pub fn inverse(&self) -> &[Coord] {
        &self.inverse
    }

    /// Bindings expressing target coordinates through source coordinates.
    pub fn forward_bindings(&self) -> Bindings {
        let mut b = Bindings::new();
        for (v, c) in self.target.vars().iter().zip(&self.forward) {
            c.binding(v, &mut b);
        }
        b
    }

    /// Bindings expressing source coordinates through target coordinates.
    pub fn inverse_bindings(&self) -> Bindings {
        let mut b = Bindings::new();
        for (v, c) in self.source.vars().iter().zip(&self.inverse) {
            c.binding(v, &mut b);
        }
        b
    }

    pub fn inverted(&self) -> PointMap {
        PointMap {
            source: self.target.clone(),
            target: self.source.clone(),
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }

    /// `X(t_j)` for the target coordinate `j`, as a function of the source.
    pub fn apply_coord(&self, x: &VectorField, j: usize) -> Result<Expr> {
        match &self.forward[j] {
            Coord::Value(e) => Ok(x.apply(e)),
            Coord::Exp(e) => x.apply(e).try_div(e),
        }
    }

    /// Rewrites a source-chart scalar in target coordinates.
    pub fn transform_expr(&self, f: &Expr) -> Result<Expr> {
        f.substitute(&self.inverse_bindings())
    }

    pub fn pushforward(&self, x: &VectorField) -> Result<VectorField> {
        if x.chart() != &self.source {
            return Err(Error::ChartMismatch(format!(
                "field on ({}) pushed through a map from ({})",
                x.chart(),
                self.source
            )));
        }
        let inv = self.inverse_bindings();
        let comps = (0..self.target.len()).map(|j| self.apply_coord(x, j)?.substitute(&inv)).collect::<Result<_>>()?;
        VectorField::new(self.target.clone(), comps)
    }

    /// `other ∘ self`: first this map, then `other`.
    pub fn then(&self, other: &PointMap) -> Result<PointMap> {
        if other.source != self.target {
            return Err(Error::ChartMismatch("maps do not compose".into()));
        }
        let fb = self.forward_bindings();
        let ib = other.inverse_bindings();
        let forward = other.forward.iter().map(|c| compose_coord(c, &fb)).collect::<Result<_>>()?;
        let inverse = self.inverse.iter().map(|c| compose_coord(c, &ib)).collect::<Result<_>>()?;
        PointMap::new(self.source.clone(), other.target.clone(), forward, inverse)
    }
}

fn compose_coord(c: &Coord, b: &Bindings) -> Result<Coord> {
    Ok(match c {
        Coord::Value(e) => Coord::Value(e.substitute(b)?),
        Coord::Exp(e) => Coord::Exp(e.substitute(b)?),
    })
}

impl fmt::Display for PointMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "source: {}", self.source)?;
        writeln!(f, "target: {}", self.target)?;
        for (v, c) in self.target.vars().iter().zip(&self.forward) {
            c.fmt_with(v, f)?;
            f.write_str("\n")?;
        }
        for (v, c) in self.source.vars().iter().zip(&self.inverse) {
            c.fmt_with(v, f)?;
            f.write_str("\n")?;
        }
        Ok(())
    }
}
