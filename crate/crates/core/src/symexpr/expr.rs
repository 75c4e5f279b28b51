use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::gcd::gcd;
use super::monomial::{ExpMonomial, Monomial, PowerProduct, Var};
use super::poly::Poly;
use super::Rational;
use crate::error::{Error, Result};

/// Exact scalar: a rational function over Q whose numerator terms may carry
/// exponentials of linear forms.
///
/// Canonical form: the denominator is nonzero, free of exponentials and
/// monic; numerator and denominator share no polynomial factor. Two
/// expressions are equal iff their canonical forms are identical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Expr {
    num: Poly,
    den: Poly,
}

/// Key of a substitution: either a variable or the exponential atom `exp(v)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Binding {
    Var(Var),
    Exp(Var),
}

/// Simultaneous substitution map.
#[derive(Clone, Debug, Default)]
pub struct Bindings {
    map: BTreeMap<Binding, Expr>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn var(mut self, v: &Var, value: Expr) -> Self {
        self.map.insert(Binding::Var(v.clone()), value);
        self
    }

    pub fn exp(mut self, v: &Var, value: Expr) -> Self {
        self.map.insert(Binding::Exp(v.clone()), value);
        self
    }

    pub fn insert(&mut self, key: Binding, value: Expr) {
        self.map.insert(key, value);
    }

    pub fn get(&self, key: &Binding) -> Option<&Expr> {
        self.map.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Binding, &Expr)> {
        self.map.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

fn reduce_pair(num: Poly, den: Poly) -> Expr {
    debug_assert!(!den.is_zero() && !den.has_exp());
    if num.is_zero() {
        return Expr::zero();
    }
    if let Some(c) = den.constant_value() {
        return Expr { num: num.scale(&c.recip()), den: Poly::one() };
    }
    let g = common_factor(&num, &den);
    let (num, den) = if g.is_one() {
        (num, den)
    } else {
        (num.try_div(&g).expect("gcd divides numerator"), den.try_div(&g).expect("gcd divides denominator"))
    };
    let (lc, den) = den.monic();
    let num = if lc.is_one() { num } else { num.scale(&lc.recip()) };
    Expr { num, den }
}

/// GCD of an exp-free polynomial `d` with a polynomial `n` whose terms may
/// carry exponentials. Exponential atoms are independent of the base
/// variables, so this is the GCD of `d` with every exponential class of `n`.
fn common_factor(n: &Poly, d: &Poly) -> Poly {
    if d.is_constant() || n.is_zero() {
        return Poly::one();
    }
    if d.len() == 1 {
        let (m, _) = d.leading().unwrap();
        let g = m.powers.gcd(&n.monomial_content());
        return Poly::term(Rational::one(), Monomial::new(g, ExpMonomial::one()));
    }
    let mut g = d.clone();
    for class in n.exp_classes().values() {
        g = gcd(&g, class);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g
}

impl Expr {
    pub fn zero() -> Self {
        Expr { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Expr { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Rational::from_integer(n.into()))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Self::constant(Rational::new(p.into(), q.into()))
    }

    pub fn var(v: &Var) -> Self {
        Expr { num: Poly::var(v), den: Poly::one() }
    }

    pub fn named(name: &str) -> Self {
        Self::var(&Var::new(name))
    }

    pub fn exp(e: ExpMonomial) -> Self {
        Expr { num: Poly::term(Rational::one(), Monomial::new(PowerProduct::one(), e)), den: Poly::one() }
    }

    /// `exp(sum c_i v_i)`.
    pub fn exp_of(pairs: &[(&Var, Rational)]) -> Self {
        Self::exp(ExpMonomial::from_pairs(pairs.iter().map(|(v, q)| ((*v).clone(), q.clone())).collect()))
    }

    pub fn from_poly(p: Poly) -> Self {
        Expr { num: p, den: Poly::one() }
    }

    /// Builds `num / den` in canonical form.
    pub fn from_parts(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !den.has_exp() {
            return Ok(reduce_pair(num, den));
        }
        match den.single_exp_class() {
            Some((e, d0)) => Ok(reduce_pair(num.mul_exp(&e.inverse()), d0)),
            None => Err(Error::NonUnitDenominator(den.to_string())),
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    /// Every symbol occurring, polynomially or inside an exponential.
    pub fn variables(&self) -> BTreeSet<Var> {
        let mut s = self.num.poly_vars();
        s.extend(self.num.exp_vars());
        s.extend(self.den.poly_vars());
        s
    }

    /// `Some(pairs)` when this is a homogeneous linear form `sum c_i v_i`.
    pub fn as_linear_form(&self) -> Option<Vec<(Var, Rational)>> {
        if !self.den.is_one() {
            return None;
        }
        let mut out = Vec::new();
        for (m, c) in self.num.terms() {
            if !m.exp.is_one() || m.powers.total_degree() != 1 {
                return None;
            }
            let (v, _) = m.powers.iter().next().unwrap();
            out.push((v.clone(), c.clone()));
        }
        Some(out)
    }

    /// `Some((c, E))` when this is `c * exp(E)` with rational `c`.
    pub fn as_scaled_exp(&self) -> Option<(Rational, ExpMonomial)> {
        if !self.den.is_one() || self.num.len() != 1 {
            return None;
        }
        let (m, c) = self.num.leading().unwrap();
        m.powers.is_one().then(|| (c.clone(), m.exp.clone()))
    }

    pub fn scale(&self, s: &Rational) -> Expr {
        if s.is_zero() {
            return Expr::zero();
        }
        Expr { num: self.num.scale(s), den: self.den.clone() }
    }

    pub fn add(&self, rhs: &Expr) -> Expr {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Expr { num: &self.num + &rhs.num, den: Poly::one() };
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            return reduce_pair(num, self.den.clone());
        }
        let g = gcd(&self.den, &rhs.den);
        let da = self.den.try_div(&g).expect("gcd divides");
        let db = rhs.den.try_div(&g).expect("gcd divides");
        let num = &(&self.num * &db) + &(&rhs.num * &da);
        if num.is_zero() {
            return Expr::zero();
        }
        let den = &(&da * &db) * &g;
        let h = common_factor(&num, &g);
        if h.is_one() {
            let (lc, den) = den.monic();
            return Expr { num: num.scale(&lc.recip()), den };
        }
        reduce_pair(num.try_div(&h).expect("gcd divides"), den.try_div(&h).expect("gcd divides"))
    }

    pub fn sub(&self, rhs: &Expr) -> Expr {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Expr {
        Expr { num: -&self.num, den: self.den.clone() }
    }

    pub fn mul(&self, rhs: &Expr) -> Expr {
        if self.is_zero() || rhs.is_zero() {
            return Expr::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Expr { num: &self.num * &rhs.num, den: Poly::one() };
        }
        let g1 = common_factor(&self.num, &rhs.den);
        let g2 = common_factor(&rhs.num, &self.den);
        let na = self.num.try_div(&g1).expect("gcd divides");
        let db = rhs.den.try_div(&g1).expect("gcd divides");
        let nb = rhs.num.try_div(&g2).expect("gcd divides");
        let da = self.den.try_div(&g2).expect("gcd divides");
        let (lc, den) = (&da * &db).monic();
        let num = &na * &nb;
        Expr { num: if lc.is_one() { num } else { num.scale(&lc.recip()) }, den }
    }

    /// Multiplicative inverse; the numerator must be a single exponential
    /// class times a polynomial.
    pub fn inv(&self) -> Result<Expr> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let Some((e, p)) = self.num.single_exp_class() else {
            return Err(Error::NonUnitDenominator(self.num.to_string()));
        };
        let (lc, p) = p.monic();
        Ok(Expr { num: self.den.mul_exp(&e.inverse()).scale(&lc.recip()), den: p })
    }

    pub fn try_div(&self, rhs: &Expr) -> Result<Expr> {
        Ok(self.mul(&rhs.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<Expr> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let k = u32::try_from(k).map_err(|_| Error::Invalid("exponent too large".into()))?;
        Ok(Expr { num: self.num.pow(k), den: self.den.pow(k) })
    }

    /// Exact partial derivative; exponential atoms obey
    /// `d/dv exp(l) = l_v * exp(l)` and all other symbols are independent.
    pub fn differentiate(&self, v: &Var) -> Expr {
        let dn = self.num.derivative(v);
        if self.den.is_one() {
            return Expr { num: dn, den: Poly::one() };
        }
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return reduce_pair(dn, self.den.clone());
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        // gcd(den, den') divides both parts
        let g = gcd(&self.den, &dd);
        if g.is_constant() {
            return reduce_pair(num, &self.den * &self.den);
        }
        let num = num.try_div(&g).expect("gcd divides the numerator");
        let rest = self.den.try_div(&g).expect("gcd divides the denominator");
        reduce_pair(num, &self.den * &rest)
    }

    /// Simultaneous substitution followed by canonicalisation.
    ///
    /// `exp(q v)` is rewritten from an `Exp(v)` binding (integer `q` only) or,
    /// failing that, from a `Var(v)` binding whose value is a homogeneous
    /// linear form.
    pub fn substitute(&self, b: &Bindings) -> Result<Expr> {
        if b.is_empty() {
            return Ok(self.clone());
        }
        let mut sub = Substituter::new(b)?;
        let (n1, d1) = sub.poly(&self.num)?;
        if self.den.is_one() {
            return Expr::from_parts(n1, d1);
        }
        let (n2, d2) = sub.poly(&self.den)?;
        if n2.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Expr::from_parts(&n1 * &d2, &d1 * &n2)
    }

    /// Exact evaluation; `exp_values[v]` stands for the value of `exp(v)`.
    pub fn eval_at(&self, point: &BTreeMap<Var, Rational>, exp_values: &BTreeMap<Var, Rational>) -> Result<Rational> {
        let d = eval_poly(&self.den, point, exp_values)?;
        if d.is_zero() {
            return Err(Error::SingularPoint);
        }
        Ok(eval_poly(&self.num, point, exp_values)? / d)
    }

    /// Floating-point value, `None` at a pole or when a variable is missing.
    pub fn eval_f64(&self, point: &BTreeMap<Var, f64>) -> Option<f64> {
        let d = eval_poly_f64(&self.den, point)?;
        if d == 0.0 {
            return None;
        }
        Some(eval_poly_f64(&self.num, point)? / d)
    }
}

fn eval_poly_f64(p: &Poly, point: &BTreeMap<Var, f64>) -> Option<f64> {
    let mut sum = 0.0;
    for (m, c) in p.terms() {
        let mut t = c.to_f64()?;
        for (v, k) in m.powers.iter() {
            t *= point.get(v)?.powi(*k as i32);
        }
        let mut arg = 0.0;
        for (v, q) in m.exp.iter() {
            arg += q.to_f64()? * point.get(v)?;
        }
        sum += t * arg.exp();
    }
    Some(sum)
}

fn rational_pow(q: &Rational, k: i64) -> Result<Rational> {
    if k < 0 {
        if q.is_zero() {
            return Err(Error::SingularPoint);
        }
        Ok(num_traits::pow(q.recip(), (-k) as usize))
    } else {
        Ok(num_traits::pow(q.clone(), k as usize))
    }
}

fn integer_exponent(v: &Var, q: &Rational) -> Result<i64> {
    if !q.denom().is_one() {
        return Err(Error::FractionalExponent { var: v.to_string(), exponent: super::monomial::fmt_rational(q) });
    }
    q.numer().to_i64().ok_or_else(|| Error::Invalid("exponent out of range".into()))
}

pub(crate) fn eval_poly(
    p: &Poly,
    point: &BTreeMap<Var, Rational>,
    exp_values: &BTreeMap<Var, Rational>,
) -> Result<Rational> {
    let mut acc = Rational::zero();
    for (m, c) in p.terms() {
        let mut t = c.clone();
        for (v, k) in m.powers.iter() {
            let x = point.get(v).ok_or_else(|| Error::UnboundVariable(v.to_string()))?;
            t *= num_traits::pow(x.clone(), *k as usize);
        }
        for (v, q) in m.exp.iter() {
            let k = integer_exponent(v, q)?;
            let x = exp_values.get(v).ok_or_else(|| Error::UnboundVariable(format!("exp({v})")))?;
            t *= rational_pow(x, k)?;
        }
        acc += t;
    }
    Ok(acc)
}

enum Factor {
    /// Variable bound to `top / bot`.
    Var { top: Poly, bot: Poly, max: u32 },
    /// `exp(v)` bound to `exp(e) * p / bot`; negative powers need `p` inverted.
    Exp { top: Poly, e: ExpMonomial, p: Option<Poly>, bot: Poly, max_pos: u32, max_neg: u32 },
}

struct Substituter<'a> {
    bindings: &'a Bindings,
    factors: HashMap<Var, Factor>,
    exp_factors: HashMap<Var, Factor>,
    linear: HashMap<Var, ExpLinear>,
    cache: HashMap<(bool, Var, i64, u32), Poly>,
}

enum ExpLinear {
    Form(Vec<(Var, Rational)>),
    Bad(String),
}

impl<'a> Substituter<'a> {
    fn new(bindings: &'a Bindings) -> Result<Self> {
        let mut factors = HashMap::new();
        let mut exp_factors = HashMap::new();
        let mut linear = HashMap::new();
        for (k, val) in bindings.iter() {
            match k {
                Binding::Var(v) => {
                    factors.insert(v.clone(), Factor::Var { top: val.num.clone(), bot: val.den.clone(), max: 0 });
                    let lf = match val.as_linear_form() {
                        Some(f) => ExpLinear::Form(f),
                        None => ExpLinear::Bad(val.to_string()),
                    };
                    linear.insert(v.clone(), lf);
                }
                Binding::Exp(v) => {
                    let (e, p) = match val.num.single_exp_class() {
                        Some((e, p)) => (e, Some(p)),
                        None => (ExpMonomial::one(), None),
                    };
                    exp_factors.insert(
                        v.clone(),
                        Factor::Exp { top: val.num.clone(), e, p, bot: val.den.clone(), max_pos: 0, max_neg: 0 },
                    );
                }
            }
        }
        Ok(Substituter { bindings, factors, exp_factors, linear, cache: HashMap::new() })
    }

    /// Records the largest power of each bound factor used in `p`.
    fn scan(&mut self, p: &Poly) -> Result<()> {
        for (m, _) in p.terms() {
            for (v, k) in m.powers.iter() {
                if let Some(Factor::Var { max, .. }) = self.factors.get_mut(v) {
                    *max = (*max).max(*k);
                } else if self.exp_factors.contains_key(v) {
                    return Err(Error::UnboundVariable(v.to_string()));
                }
            }
            for (v, q) in m.exp.iter() {
                if let Some(Factor::Exp { p: inv, max_pos, max_neg, top, .. }) = self.exp_factors.get_mut(v) {
                    let k = integer_exponent(v, q)?;
                    if k >= 0 {
                        *max_pos = (*max_pos).max(k as u32);
                    } else {
                        if inv.is_none() {
                            return Err(Error::NonUnitDenominator(top.to_string()));
                        }
                        if top.is_zero() {
                            return Err(Error::DivisionByZero);
                        }
                        *max_neg = (*max_neg).max((-k) as u32);
                    }
                } else if let Some(ExpLinear::Bad(value)) = self.linear.get(v) {
                    return Err(Error::NonLinearExpBinding { var: v.to_string(), value: value.clone() });
                }
            }
        }
        Ok(())
    }

    fn power(&mut self, key: (bool, Var, i64, u32), base: &Poly) -> Poly {
        if let Some(p) = self.cache.get(&key) {
            return p.clone();
        }
        let p = base.pow(key.3);
        self.cache.insert(key, p.clone());
        p
    }

    fn poly(&mut self, p: &Poly) -> Result<(Poly, Poly)> {
        for f in self.factors.values_mut() {
            if let Factor::Var { max, .. } = f {
                *max = 0;
            }
        }
        for f in self.exp_factors.values_mut() {
            if let Factor::Exp { max_pos, max_neg, .. } = f {
                *max_pos = 0;
                *max_neg = 0;
            }
        }
        self.cache.clear();
        self.scan(p)?;

        let mut den = Poly::one();
        let mut vars: Vec<Var> = self.factors.keys().cloned().collect();
        vars.sort();
        for v in &vars {
            if let Some(Factor::Var { bot, max, .. }) = self.factors.get(v) {
                if *max > 0 && !bot.is_one() {
                    den = &den * &bot.pow(*max);
                }
            }
        }
        let mut evars: Vec<Var> = self.exp_factors.keys().cloned().collect();
        evars.sort();
        for v in &evars {
            if let Some(Factor::Exp { bot, p, max_pos, max_neg, .. }) = self.exp_factors.get(v) {
                if *max_pos > 0 && !bot.is_one() {
                    den = &den * &bot.pow(*max_pos);
                }
                if *max_neg > 0 {
                    den = &den * &p.as_ref().unwrap().pow(*max_neg);
                }
            }
        }

        let mut num = Poly::zero();
        for (m, c) in p.terms() {
            let mut kept = Vec::new();
            let mut t = Poly::constant(c.clone());
            for (v, k) in m.powers.iter() {
                let info = match self.factors.get(v) {
                    Some(Factor::Var { top, bot, max }) => Some((top.clone(), bot.clone(), *max)),
                    _ => None,
                };
                match info {
                    Some((top, _, _)) => {
                        let a = self.power((true, v.clone(), 0, *k), &top);
                        t = &t * &a;
                    }
                    None => kept.push((v.clone(), *k)),
                }
            }
            for v in &vars {
                if let Some(Factor::Var { bot, max, .. }) = self.factors.get(v) {
                    let k = m.powers.degree_in(v);
                    if *max > k && !bot.is_one() {
                        let (bot, missing) = (bot.clone(), max - k);
                        let b = self.power((false, v.clone(), 0, missing), &bot);
                        t = &t * &b;
                    }
                }
            }
            let mut exp_kept = Vec::new();
            let mut extra = ExpMonomial::one();
            let mut used_pos: HashMap<Var, u32> = HashMap::new();
            let mut used_neg: HashMap<Var, u32> = HashMap::new();
            for (v, q) in m.exp.iter() {
                if self.exp_factors.contains_key(v) {
                    let k = integer_exponent(v, q)?;
                    let (top, e, pinv) = match self.exp_factors.get(v) {
                        Some(Factor::Exp { top, e, p, .. }) => (top.clone(), e.clone(), p.clone()),
                        _ => unreachable!(),
                    };
                    if k >= 0 {
                        let a = self.power((true, v.clone(), 1, k as u32), &top);
                        t = &t * &a;
                        used_pos.insert(v.clone(), k as u32);
                    } else {
                        let n = (-k) as u32;
                        let bot = match self.exp_factors.get(v) {
                            Some(Factor::Exp { bot, .. }) => bot.clone(),
                            _ => unreachable!(),
                        };
                        let a = self.power((false, v.clone(), 1, n), &bot);
                        t = &t * &a;
                        extra = extra.mul(&e.scale(&Rational::from_integer(k.into())));
                        used_neg.insert(v.clone(), n);
                        let _ = pinv;
                    }
                } else if let Some(ExpLinear::Form(f)) = self.linear.get(v) {
                    for (w, a) in f {
                        exp_kept.push((w.clone(), q * a));
                    }
                } else {
                    exp_kept.push((v.clone(), q.clone()));
                }
            }
            // complete each exponential factor to the common denominator
            for v in &evars {
                if let Some(Factor::Exp { bot, p: pinv, max_pos, max_neg, .. }) = self.exp_factors.get(v) {
                    let (bot, pinv, max_pos, max_neg) = (bot.clone(), pinv.clone(), *max_pos, *max_neg);
                    let up = used_pos.get(v).copied().unwrap_or(0);
                    let un = used_neg.get(v).copied().unwrap_or(0);
                    // positive powers consumed `up` copies of bot; negative powers
                    // brought `un` copies of bot into the numerator instead
                    let bot_missing = max_pos - up;
                    if bot_missing > 0 && !bot.is_one() {
                        let b = self.power((false, v.clone(), 1, bot_missing), &bot);
                        t = &t * &b;
                    }
                    let p_missing = max_neg - un;
                    if p_missing > 0 {
                        let pp = pinv.expect("checked in scan");
                        let b = self.power((false, v.clone(), 2, p_missing), &pp);
                        t = &t * &b;
                    }
                }
            }
            let mono = Monomial::new(PowerProduct::from_pairs(kept), ExpMonomial::from_pairs(exp_kept).mul(&extra));
            num = &num + &t.mul_monomial(&mono, &Rational::one());
        }
        let _ = self.bindings;
        Ok((num, den))
    }
}

impl Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        Expr::add(self, rhs)
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        Expr::sub(self, rhs)
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        Expr::mul(self, rhs)
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::add(&self, &rhs)
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::sub(&self, &rhs)
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::mul(&self, &rhs)
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(&self)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl From<Rational> for Expr {
    fn from(q: Rational) -> Self {
        Expr::constant(q)
    }
}

impl From<BigInt> for Expr {
    fn from(n: BigInt) -> Self {
        Expr::constant(Rational::from_integer(n))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.len() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        let simple_den = self.den.len() == 1 && {
            let (m, c) = self.den.leading().unwrap();
            c.is_one() && m.powers.iter().count() == 1
        };
        if simple_den {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({})", self)
    }
}

/// True when the expression has no negative leading coefficient; used to
/// factor signs out when printing vector fields.
pub(crate) fn leading_negative(e: &Expr) -> bool {
    e.num.leading().is_some_and(|(_, c)| c.is_negative())
}
