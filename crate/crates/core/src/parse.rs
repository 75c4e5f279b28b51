//! Recursive-descent parser for expressions, vector fields, ODE systems and
//! point maps.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | ident '\''* | 'exp' '(' expr ')' | 'D' '[' ident ']' | '(' expr ')'
//! ```
//!
//! `y'` and `y''` are accepted as spellings of the jet symbols `y_1`, `y_2`.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::jets::{JetChart, OdeSystem};
use crate::symexpr::{ExpMonomial, Expr, Rational, Var};
use crate::vectorfield::{Chart, Coord, PointMap, VectorField};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Sym(char),
}

fn lex(text: &str, offset: usize) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let pos = offset + i;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let int_part = &text[start..i];
            let value = if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                let fs = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let frac = &text[fs..i];
                let digits = format!("{int_part}{frac}");
                let n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).unwrap();
                Rational::new(n, num_traits::pow(BigInt::from(10), frac.len()))
            } else {
                Rational::from_integer(BigInt::from_str(int_part).unwrap())
            };
            out.push((Tok::Num(value), pos));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let mut name = text[start..i].to_string();
            let mut primes = 0;
            while i < bytes.len() && bytes[i] == b'\'' {
                primes += 1;
                i += 1;
            }
            if primes > 0 {
                name = format!("{name}_{primes}");
            }
            out.push((Tok::Ident(name), pos));
        } else if "+-*/^()[],".contains(c) {
            out.push((Tok::Sym(c), pos));
            i += 1;
        } else {
            return Err(Error::Syntax { pos, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Val {
    Scalar(Expr),
    Field(BTreeMap<Var, Expr>),
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
    allowed: Option<&'a BTreeSet<Var>>,
    fields: bool,
    /// `D[...]` targets in order of first appearance.
    seen_d: Vec<Var>,
}

impl<'a> Parser<'a> {
    fn new(text: &str, offset: usize, allowed: Option<&'a BTreeSet<Var>>, fields: bool) -> Result<Self> {
        Ok(Parser { toks: lex(text, offset)?, at: 0, end: offset + text.len(), allowed, fields, seen_d: Vec::new() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.0)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.1)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|t| t.0.clone());
        self.at += 1;
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.syntax(format!("expected `{c}`")))
        }
    }

    fn syntax(&self, msg: String) -> Error {
        Error::Syntax { pos: self.pos(), msg }
    }

    fn finish(&self) -> Result<()> {
        if self.at < self.toks.len() {
            return Err(self.syntax("unexpected trailing input".into()));
        }
        Ok(())
    }

    fn declared(&self, name: &str, pos: usize) -> Result<Var> {
        let v = Var::new(name);
        match self.allowed {
            Some(set) if !set.contains(&v) => Err(Error::Undeclared { name: name.into(), pos }),
            _ => Ok(v),
        }
    }

    fn expr(&mut self) -> Result<Val> {
        let mut acc = self.term()?;
        loop {
            let pos = self.pos();
            if self.eat('+') {
                let rhs = self.term()?;
                acc = combine(acc, rhs, '+', pos)?;
            } else if self.eat('-') {
                let rhs = self.term()?;
                acc = combine(acc, rhs, '-', pos)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Val> {
        let mut acc = self.unary()?;
        loop {
            let pos = self.pos();
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = combine(acc, rhs, '*', pos)?;
            } else if self.eat('/') {
                let rhs = self.unary()?;
                acc = combine(acc, rhs, '/', pos)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Val> {
        if self.eat('-') {
            return Ok(match self.unary()? {
                Val::Scalar(e) => Val::Scalar(e.neg()),
                Val::Field(m) => Val::Field(m.into_iter().map(|(k, v)| (k, v.neg())).collect()),
            });
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Val> {
        let base = self.atom()?;
        let pos = self.pos();
        if !self.eat('^') {
            return Ok(base);
        }
        let epos = self.pos();
        let k = match self.unary()? {
            Val::Scalar(e) => e.constant_value(),
            Val::Field(_) => None,
        };
        let k = k
            .filter(|q| q.denom().is_one())
            .and_then(|q| num_traits::ToPrimitive::to_i64(q.numer()))
            .ok_or(Error::Syntax { pos: epos, msg: "exponent must be an integer".into() })?;
        match base {
            Val::Scalar(e) => Ok(Val::Scalar(e.pow(k).map_err(|err| at(err, pos))?)),
            Val::Field(_) => Err(Error::Syntax { pos, msg: "cannot raise a vector field to a power".into() }),
        }
    }

    fn atom(&mut self) -> Result<Val> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Num(q)) => Ok(Val::Scalar(Expr::constant(q))),
            Some(Tok::Sym('(')) => {
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(Tok::Ident(name)) if name == "exp" && self.peek() == Some(&Tok::Sym('(')) => {
                self.at += 1;
                let apos = self.pos();
                let arg = self.expr()?;
                self.expect(')')?;
                let Val::Scalar(arg) = arg else {
                    return Err(Error::Syntax { pos: apos, msg: "exp of a vector field".into() });
                };
                if arg.is_zero() {
                    return Ok(Val::Scalar(Expr::one()));
                }
                let form = arg.as_linear_form().ok_or_else(|| Error::NonLinearExp(arg.to_string()))?;
                Ok(Val::Scalar(Expr::exp(ExpMonomial::from_pairs(form))))
            }
            Some(Tok::Ident(name)) if name == "D" && self.peek() == Some(&Tok::Sym('[')) => {
                if !self.fields {
                    return Err(Error::Syntax { pos, msg: "D[...] is only allowed in vector fields".into() });
                }
                self.at += 1;
                let vpos = self.pos();
                let v = match self.bump() {
                    Some(Tok::Ident(n)) => self.declared(&n, vpos)?,
                    _ => return Err(Error::Syntax { pos: vpos, msg: "expected a coordinate".into() }),
                };
                self.expect(']')?;
                if !self.seen_d.contains(&v) {
                    self.seen_d.push(v.clone());
                }
                Ok(Val::Field(BTreeMap::from([(v, Expr::one())])))
            }
            Some(Tok::Ident(name)) => Ok(Val::Scalar(Expr::var(&self.declared(&name, pos)?))),
            Some(t) => Err(Error::Syntax { pos, msg: format!("unexpected `{}`", tok_str(&t)) }),
            None => Err(Error::Syntax { pos, msg: "unexpected end of input".into() }),
        }
    }
}

fn tok_str(t: &Tok) -> String {
    match t {
        Tok::Num(q) => q.to_string(),
        Tok::Ident(s) => s.clone(),
        Tok::Sym(c) => c.to_string(),
    }
}

fn at(err: Error, pos: usize) -> Error {
    match err {
        Error::DivisionByZero | Error::NonUnitDenominator(_) => Error::Syntax { pos, msg: err.to_string() },
        e => e,
    }
}

fn combine(a: Val, b: Val, op: char, pos: usize) -> Result<Val> {
    use Val::{Field, Scalar};
    let mismatch = |what: &str| Error::Syntax { pos, msg: format!("cannot {what} a scalar and a vector field") };
    Ok(match (a, b, op) {
        (Scalar(x), Scalar(y), '+') => Scalar(x.add(&y)),
        (Scalar(x), Scalar(y), '-') => Scalar(x.sub(&y)),
        (Scalar(x), Scalar(y), '*') => Scalar(x.mul(&y)),
        (Scalar(x), Scalar(y), '/') => {
            if y.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Scalar(x.try_div(&y).map_err(|e| at(e, pos))?)
        }
        (Field(mut x), Field(y), '+') | (Field(mut x), Field(y), '-') => {
            for (k, v) in y {
                let v = if op == '-' { v.neg() } else { v };
                let e = x.entry(k).or_insert_with(Expr::zero);
                *e = e.add(&v);
            }
            Field(x)
        }
        (Scalar(s), Field(f), '*') | (Field(f), Scalar(s), '*') => {
            Field(f.into_iter().map(|(k, v)| (k, v.mul(&s))).collect())
        }
        (Field(f), Scalar(s), '/') => {
            if s.is_zero() {
                return Err(Error::DivisionByZero);
            }
            let inv = s.inv().map_err(|e| at(e, pos))?;
            Field(f.into_iter().map(|(k, v)| (k, v.mul(&inv))).collect())
        }
        (_, _, '+') | (_, _, '-') => return Err(mismatch("add")),
        _ => return Err(Error::Syntax { pos, msg: "cannot multiply or divide two vector fields".into() }),
    })
}

fn var_set(vars: &[Var]) -> BTreeSet<Var> {
    vars.iter().cloned().collect()
}

/// Parses a scalar. With `vars = Some(..)` every identifier must be declared.
pub fn parse_expr(text: &str, vars: Option<&[Var]>) -> Result<Expr> {
    let set = vars.map(var_set);
    let mut p = Parser::new(text, 0, set.as_ref(), false)?;
    let v = p.expr()?;
    p.finish()?;
    match v {
        Val::Scalar(e) => Ok(e),
        Val::Field(_) => unreachable!("fields are disabled"),
    }
}

fn field_from(map: BTreeMap<Var, Expr>, chart: &Chart) -> Result<VectorField> {
    let mut comps = vec![Expr::zero(); chart.len()];
    for (v, c) in map {
        let i = chart
            .index_of(&v)
            .ok_or_else(|| Error::ChartMismatch(format!("D[{v}] is not a direction of ({chart})")))?;
        comps[i] = c;
    }
    VectorField::new(chart.clone(), comps)
}

fn parse_field_at(
    text: &str,
    offset: usize,
    allowed: Option<&BTreeSet<Var>>,
) -> Result<(BTreeMap<Var, Expr>, Vec<Var>)> {
    let mut p = Parser::new(text, offset, allowed, true)?;
    let v = p.expr()?;
    p.finish()?;
    match v {
        Val::Field(m) => Ok((m, p.seen_d)),
        Val::Scalar(e) if e.is_zero() => Ok((BTreeMap::new(), p.seen_d)),
        Val::Scalar(_) => Err(Error::Syntax { pos: offset, msg: "expected a vector field".into() }),
    }
}

/// Parses `c1*D[x] + c2*D[y] + ...` on a given chart. Coefficients may use
/// the chart coordinates and the extra symbols in `params`.
pub fn parse_field(text: &str, chart: &Chart, params: &[Var]) -> Result<VectorField> {
    let mut allowed = var_set(chart.vars());
    allowed.extend(params.iter().cloned());
    let (m, _) = parse_field_at(text, 0, Some(&allowed))?;
    field_from(m, chart)
}

/// A named list of fields on one chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSet {
    pub chart: Chart,
    pub params: Vec<Var>,
    pub fields: Vec<(String, VectorField)>,
}

impl FieldSet {
    pub fn get(&self, name: &str) -> Option<&VectorField> {
        self.fields.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    pub fn names(&self) -> Vec<String> {
        self.fields.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn vectors(&self) -> Vec<VectorField> {
        self.fields.iter().map(|(_, f)| f.clone()).collect()
    }

    /// Field DSL text that parses back to this set.
    pub fn to_dsl(&self) -> String {
        let mut s = format!("chart: {}\n", self.chart);
        if !self.params.is_empty() {
            let names: Vec<String> = self.params.iter().map(Var::to_string).collect();
            s.push_str(&format!("params: {}\n", names.join(", ")));
        }
        for (n, f) in &self.fields {
            s.push_str(&format!("{n} = {f}\n"));
        }
        s
    }
}

/// Splits DSL text into `(byte offset, statement)` pairs on newlines and
/// semicolons, dropping comments and blank statements.
fn statements(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut line_start = 0;
    for line in text.split_inclusive('\n') {
        let body = line.split('#').next().unwrap_or("");
        let mut start = line_start;
        for part in body.split(';') {
            let trimmed = part.trim_start();
            let lead = part.len() - trimmed.len();
            let trimmed = trimmed.trim_end();
            if !trimmed.is_empty() {
                out.push((start + lead, trimmed));
            }
            start += part.len() + 1;
        }
        line_start += line.len();
    }
    out
}

fn header<'t>(stmt: &'t str, key: &str) -> Option<&'t str> {
    let rest = stmt.strip_prefix(key)?.trim_start();
    rest.strip_prefix(':').map(str::trim)
}

fn name_list(s: &str, pos: usize) -> Result<Vec<Var>> {
    s.split(',')
        .map(str::trim)
        .filter(|n| !n.is_empty())
        .map(|n| {
            if n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                && n.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            {
                Ok(Var::new(n))
            } else {
                Err(Error::Syntax { pos, msg: format!("invalid name `{n}`") })
            }
        })
        .collect()
}

fn split_assign(stmt: &str, pos: usize) -> Result<(&str, &str, usize)> {
    let eq = stmt.find('=').ok_or(Error::Syntax { pos, msg: "expected `name = ...`".into() })?;
    let lhs = stmt[..eq].trim();
    if lhs.is_empty() {
        return Err(Error::Syntax { pos, msg: "missing name before `=`".into() });
    }
    let rhs = &stmt[eq + 1..];
    let lead = rhs.len() - rhs.trim_start().len();
    Ok((lhs, rhs.trim(), pos + eq + 1 + lead))
}

/// Parses a field file:
///
/// ```text
/// chart: x, y
/// Xa = exp(x)*(D[x] - D[y])
/// ```
///
/// Without a `chart:` line the chart is the `D[...]` directions in order of
/// first appearance followed by any remaining coefficient symbols.
pub fn parse_fields(text: &str) -> Result<FieldSet> {
    let mut chart: Option<Chart> = None;
    let mut params = Vec::new();
    let mut raw = Vec::new();
    for (pos, stmt) in statements(text) {
        if let Some(rest) = header(stmt, "chart") {
            chart = Some(Chart::new(name_list(rest, pos)?)?);
        } else if let Some(rest) = header(stmt, "params") {
            params = name_list(rest, pos)?;
        } else {
            let (name, rhs, rpos) = split_assign(stmt, pos)?;
            if name.chars().any(char::is_whitespace) {
                return Err(Error::Syntax { pos, msg: format!("invalid field name `{name}`") });
            }
            raw.push((name.to_string(), rhs, rpos));
        }
    }
    let mut fields = Vec::new();
    match chart {
        Some(chart) => {
            let mut allowed = var_set(chart.vars());
            allowed.extend(params.iter().cloned());
            for (name, rhs, rpos) in raw {
                let (m, _) = parse_field_at(rhs, rpos, Some(&allowed))?;
                fields.push((name, field_from(m, &chart)?));
            }
            Ok(FieldSet { chart, params, fields })
        }
        None => {
            let mut order: Vec<Var> = Vec::new();
            let mut extra: BTreeSet<Var> = BTreeSet::new();
            let mut parsed = Vec::new();
            for (name, rhs, rpos) in raw {
                let (m, seen) = parse_field_at(rhs, rpos, None)?;
                for v in seen {
                    if !order.contains(&v) {
                        order.push(v);
                    }
                }
                for c in m.values() {
                    extra.extend(c.variables());
                }
                parsed.push((name, m));
            }
            for v in extra {
                if !order.contains(&v) && !params.contains(&v) {
                    order.push(v);
                }
            }
            if order.is_empty() {
                return Err(Error::InvalidChart("no coordinates found; add a `chart:` line".into()));
            }
            let chart = Chart::new(order)?;
            for (name, m) in parsed {
                fields.push((name, field_from(m, &chart)?));
            }
            Ok(FieldSet { chart, params, fields })
        }
    }
}

/// Parses a solved system such as `y_2 = 0; z_2 = y_1*z_1`.
///
/// Optional header statements: `independent: t`, `params: k, l`.
/// Dependents are the left-hand sides in order; all must have the same order.
pub fn parse_system(text: &str) -> Result<OdeSystem> {
    let mut independent = None;
    let mut params = Vec::new();
    let mut eqs = Vec::new();
    for (pos, stmt) in statements(text) {
        if let Some(rest) = header(stmt, "independent") {
            let mut v = name_list(rest, pos)?;
            if v.len() != 1 {
                return Err(Error::Syntax { pos, msg: "exactly one independent variable".into() });
            }
            independent = v.pop();
        } else if let Some(rest) = header(stmt, "params") {
            params = name_list(rest, pos)?;
        } else {
            let (lhs, rhs, rpos) = split_assign(stmt, pos)?;
            let toks = lex(lhs, pos)?;
            let name = match toks.as_slice() {
                [(Tok::Ident(n), _)] => Var::new(n),
                _ => return Err(Error::Syntax { pos, msg: "left side must be a jet symbol like y_2".into() }),
            };
            let (base, k) =
                name.jet_parts().ok_or(Error::Syntax { pos, msg: format!("`{name}` is not a jet symbol") })?;
            eqs.push((Var::new(base), k, rhs, rpos, pos));
        }
    }
    if eqs.is_empty() {
        return Err(Error::Syntax { pos: 0, msg: "no equations".into() });
    }
    let order = eqs[0].1;
    if let Some(e) = eqs.iter().find(|e| e.1 != order) {
        return Err(Error::Syntax { pos: e.4, msg: "all equations must have the same order".into() });
    }
    let deps: Vec<Var> = eqs.iter().map(|e| e.0.clone()).collect();
    let independent = independent.unwrap_or_else(|| Var::new("x"));
    let jet = JetChart::new(independent, deps, order)?;
    let mut allowed = var_set(jet.chart().vars());
    allowed.extend(params.iter().cloned());
    let mut rhs = Vec::new();
    for (_, _, text, rpos, _) in &eqs {
        let mut p = Parser::new(text, *rpos, Some(&allowed), false)?;
        let v = p.expr()?;
        p.finish()?;
        match v {
            Val::Scalar(e) => rhs.push(e),
            Val::Field(_) => unreachable!("fields are disabled"),
        }
    }
    OdeSystem::with_params(jet, rhs, params)
}

/// Text form of a system that [`parse_system`] reads back.
pub fn system_to_dsl(s: &OdeSystem) -> String {
    let mut out = String::new();
    if s.jet().independent().name() != "x" {
        out.push_str(&format!("independent: {}\n", s.jet().independent()));
    }
    if !s.params().is_empty() {
        let names: Vec<String> = s.params().iter().map(Var::to_string).collect();
        out.push_str(&format!("params: {}\n", names.join(", ")));
    }
    for (a, r) in s.rhs().iter().enumerate() {
        out.push_str(&format!("{} = {}\n", s.jet().jet(a, s.jet().order()), r));
    }
    out
}

/// Parses a point map:
///
/// ```text
/// source: x, y
/// target: u, v
/// u = -exp(-x)
/// exp(x) = -1/u
/// ...
/// ```
///
/// Left sides in the target chart give the forward map, those in the source
/// chart the inverse; `exp(t) = e` declares a logarithmic coordinate. The
/// inverse may be omitted when it can be computed (see
/// [`infer_inverse`](crate::linearize::infer_inverse)).
pub fn parse_map(text: &str) -> Result<PointMap> {
    let mut source = None;
    let mut target = None;
    let mut rows = Vec::new();
    for (pos, stmt) in statements(text) {
        if let Some(rest) = header(stmt, "source") {
            source = Some(Chart::new(name_list(rest, pos)?)?);
        } else if let Some(rest) = header(stmt, "target") {
            target = Some(Chart::new(name_list(rest, pos)?)?);
        } else {
            let (lhs, rhs, rpos) = split_assign(stmt, pos)?;
            let toks = lex(lhs, pos)?;
            let (name, is_exp) = match toks.as_slice() {
                [(Tok::Ident(n), _)] => (Var::new(n), false),
                [(Tok::Ident(e), _), (Tok::Sym('('), _), (Tok::Ident(n), _), (Tok::Sym(')'), _)] if e == "exp" => {
                    (Var::new(n), true)
                }
                _ => return Err(Error::Syntax { pos, msg: "left side must be `t` or `exp(t)`".into() }),
            };
            rows.push((name, is_exp, rhs, rpos, pos));
        }
    }
    let source = source.ok_or(Error::Syntax { pos: 0, msg: "missing `source:` line".into() })?;
    let target = target.ok_or(Error::Syntax { pos: 0, msg: "missing `target:` line".into() })?;
    let mut fwd: Vec<Option<Coord>> = vec![None; target.len()];
    let mut inv: Vec<Option<Coord>> = vec![None; source.len()];
    let src_set = var_set(source.vars());
    let tgt_set = var_set(target.vars());
    for (name, is_exp, rhs, rpos, pos) in rows {
        let (slot, allowed) = if let Some(j) = target.index_of(&name) {
            (&mut fwd[j], &src_set)
        } else if let Some(i) = source.index_of(&name) {
            (&mut inv[i], &tgt_set)
        } else {
            return Err(Error::Undeclared { name: name.to_string(), pos });
        };
        let mut p = Parser::new(rhs, rpos, Some(allowed), false)?;
        let v = p.expr()?;
        p.finish()?;
        let Val::Scalar(e) = v else { unreachable!("fields are disabled") };
        if slot.is_some() {
            return Err(Error::Syntax { pos, msg: format!("`{name}` defined twice") });
        }
        *slot = Some(if is_exp { Coord::Exp(e) } else { Coord::Value(e) });
    }
    if inv.iter().all(Option::is_none) && fwd.iter().all(Option::is_some) {
        let fwd: Vec<Coord> = fwd.into_iter().map(Option::unwrap).collect();
        let inv = crate::linearize::infer_inverse(&source, &target, &fwd)?;
        return PointMap::new(source, target, fwd, inv);
    }
    let missing =
        |c: &Chart, v: &[Option<Coord>]| c.vars().iter().zip(v).find(|(_, c)| c.is_none()).map(|(n, _)| n.clone());
    if let Some(n) = missing(&target, &fwd).or_else(|| missing(&source, &inv)) {
        return Err(Error::Syntax { pos: text.len(), msg: format!("no equation for `{n}`") });
    }
    PointMap::new(
        source,
        target,
        fwd.into_iter().map(Option::unwrap).collect(),
        inv.into_iter().map(Option::unwrap).collect(),
    )
}
