use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::monomial::{fmt_rational, ExpMonomial, Monomial, PowerProduct, Var};
use super::Rational;

/// Sparse polynomial over Q whose monomials may carry an exponential factor.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn var(v: &Var) -> Self {
        Self::term(Rational::one(), Monomial::var(v))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(it: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// Terms in ascending term order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(n, d)| (n.mul(m), d * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn has_exp(&self) -> bool {
        self.terms.keys().any(|m| !m.exp.is_one())
    }

    /// Groups terms by their exponential factor; each class is exp-free.
    pub fn exp_classes(&self) -> BTreeMap<ExpMonomial, Poly> {
        let mut out: BTreeMap<ExpMonomial, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.exp.clone())
                .or_default()
                .add_term(Monomial::new(m.powers.clone(), ExpMonomial::one()), c.clone());
        }
        out
    }

    /// `Some((E, P))` when `self = exp(E) * P` with `P` exp-free.
    pub fn single_exp_class(&self) -> Option<(ExpMonomial, Poly)> {
        let classes = self.exp_classes();
        if classes.len() == 1 {
            classes.into_iter().next()
        } else {
            None
        }
    }

    pub fn mul_exp(&self, e: &ExpMonomial) -> Poly {
        if e.is_one() {
            return self.clone();
        }
        self.mul_monomial(&Monomial::new(PowerProduct::one(), e.clone()), &Rational::one())
    }

    /// Variables occurring polynomially.
    pub fn poly_vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.powers.iter().map(|(v, _)| v.clone())).collect()
    }

    /// Variables occurring inside exponentials.
    pub fn exp_vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.exp.iter().map(|(v, _)| v.clone())).collect()
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.terms.keys().map(|m| m.powers.degree_in(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.powers.total_degree()).max().unwrap_or(0)
    }

    /// Coefficients with respect to `v`: `self = sum_k coeffs[k] * v^k`.
    pub fn coeffs_in(&self, v: &Var) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (k, rest) = m.powers.split_var(v);
            out.entry(k).or_default().add_term(Monomial::new(rest, m.exp.clone()), c.clone());
        }
        out
    }

    pub fn from_coeffs(v: &Var, coeffs: &BTreeMap<u32, Poly>) -> Poly {
        let mut out = Poly::zero();
        for (k, p) in coeffs {
            let vk = Monomial::new(PowerProduct::var(v, *k), ExpMonomial::one());
            for (m, c) in &p.terms {
                out.add_term(m.mul(&vk), c.clone());
            }
        }
        out
    }

    pub fn derivative(&self, v: &Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let (k, rest) = m.powers.split_var(v);
            if k > 0 {
                let powers = rest.mul(&PowerProduct::var(v, k - 1));
                out.add_term(Monomial::new(powers, m.exp.clone()), c * Rational::from_integer(k.into()));
            }
            let q = m.exp.coefficient(v);
            if !q.is_zero() {
                out.add_term(m.clone(), c * q);
            }
        }
        out
    }

    /// Divides by the leading coefficient; returns that coefficient too.
    pub fn monic(&self) -> (Rational, Poly) {
        match self.leading() {
            None => (Rational::one(), Poly::zero()),
            Some((_, lc)) if lc.is_one() => (Rational::one(), self.clone()),
            Some((_, lc)) => {
                let lc = lc.clone();
                (lc.clone(), self.scale(&lc.recip()))
            }
        }
    }

    /// GCD of the power parts of all terms.
    pub fn monomial_content(&self) -> PowerProduct {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return PowerProduct::one();
        };
        let mut g = first.powers.clone();
        for m in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(&m.powers);
        }
        g
    }

    /// Divides every term by the power product `d`, which must divide each.
    pub fn div_powers(&self, d: &PowerProduct) -> Poly {
        if d.is_one() {
            return self.clone();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let powers = m.powers.try_div(d).expect("power product must divide");
                    (Monomial::new(powers, m.exp.clone()), c.clone())
                })
                .collect(),
        }
    }

    /// Exact division. The divisor must consist of a single exponential
    /// class; returns `None` when the division leaves a remainder.
    pub fn try_div(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (e, d0) = d.single_exp_class()?;
        let (lm, lc) = d0.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        if d0.len() == 1 {
            let mut terms = BTreeMap::new();
            let inv = lc.recip();
            for (m, c) in &self.terms {
                terms.insert(m.try_div(&lm)?, c * &inv);
            }
            return Some(Poly { terms }.mul_exp(&e.inverse()));
        }
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some((rm, rc)) = r.leading() {
            let m = rm.try_div(&lm)?;
            let c = rc / &lc;
            r = &r - &d0.mul_monomial(&m, &c);
            q.add_term(m, c);
        }
        Some(q.mul_exp(&e.inverse()))
    }

    /// Replaces every occurrence of the variable `v` (polynomial or
    /// exponential) by the rational `value` in the polynomial part only.
    /// Exponential occurrences are kept.
    pub fn eval_poly_var(&self, v: &Var, value: &Rational) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let (k, rest) = m.powers.split_var(v);
            let f = num_traits::pow(value.clone(), k as usize);
            out.add_term(Monomial::new(rest, m.exp.clone()), c * f);
        }
        out
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (big, small) = if self.len() >= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

fn fmt_term(m: &Monomial, c: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if m.is_one() {
        return write!(f, "{}", fmt_rational(c));
    }
    if c.is_one() {
        write!(f, "{}", m)
    } else if (-c).is_one() {
        write!(f, "-{}", m)
    } else {
        write!(f, "{}*{}", fmt_rational(c), m)
    }
}

/// Terms are printed in descending term order.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i == 0 {
                fmt_term(m, c, f)?;
            } else if c.is_negative() {
                f.write_str(" - ")?;
                fmt_term(m, &-c, f)?;
            } else {
                f.write_str(" + ")?;
                fmt_term(m, c, f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(&Var::new("x"))
    }
    fn y() -> Poly {
        Poly::var(&Var::new("y"))
    }
    fn c(n: i64) -> Poly {
        Poly::constant(Rational::from_integer(n.into()))
    }

    #[test]
    fn exact_division() {
        let a = &(&x() + &c(1)) * &(&x() - &y());
        assert_eq!(a.try_div(&(&x() - &y())), Some(&x() + &c(1)));
        assert_eq!(a.try_div(&(&x() + &c(2))), None);
    }

    #[test]
    fn display_orders_terms() {
        let p = &(&(&x() * &x()) - &(&c(2) * &y())) + &c(3);
        assert_eq!(p.to_string(), "x^2 - 2*y + 3");
    }

    #[test]
    fn derivative_of_exponential_term() {
        let e = Poly::term(
            Rational::one(),
            Monomial::new(
                PowerProduct::var(&Var::new("x"), 1),
                ExpMonomial::from_pairs(vec![(Var::new("x"), Rational::from_integer(2.into()))]),
            ),
        );
        assert_eq!(e.derivative(&Var::new("x")).to_string(), "2*x*exp(2*x) + exp(2*x)");
    }
}
