use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::Rational;

/// A named symbol: a base coordinate, a jet coordinate (`y_1`, `y_2`, ...)
/// or a free parameter.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Self {
        Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// The jet symbol of order `k` over the dependent variable `base`.
    pub fn jet(base: &Var, k: usize) -> Var {
        if k == 0 {
            base.clone()
        } else {
            Var::new(&format!("{}_{}", base.0, k))
        }
    }

    /// Splits `y_2` into `("y", 2)`. Plain names return `None`.
    pub fn jet_parts(&self) -> Option<(&str, usize)> {
        let (base, order) = self.0.rsplit_once('_')?;
        if base.is_empty() || order.is_empty() || !order.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        order.parse().ok().filter(|k| *k >= 1).map(|k| (base, k))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::new(s)
    }
}

/// Lexicographic comparison of two sparse exponent vectors sorted by
/// variable. The first variable (in name order) where the exponents differ
/// decides; an absent entry counts as zero.
fn lex_cmp<E: Ord + Zero>(a: &[(Var, E)], b: &[(Var, E)]) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some((_, ea)), None) => return ea.cmp(&E::zero()),
            (None, Some((_, eb))) => return E::zero().cmp(eb),
            (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                Ordering::Equal => match ea.cmp(eb) {
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                    }
                    o => return o,
                },
                Ordering::Less => return ea.cmp(&E::zero()),
                Ordering::Greater => return E::zero().cmp(eb),
            },
        }
    }
}

fn merge_add<E: Clone + Zero + for<'a> std::ops::Add<&'a E, Output = E>>(
    a: &[(Var, E)],
    b: &[(Var, E)],
) -> Vec<(Var, E)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), None) => {
                out.push(x.clone());
                i += 1;
            }
            (None, Some(y)) => {
                out.push(y.clone());
                j += 1;
            }
            (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                Ordering::Less => {
                    out.push((va.clone(), ea.clone()));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((vb.clone(), eb.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let e = ea.clone() + eb;
                    if !e.is_zero() {
                        out.push((va.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            },
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Product of non-negative integer powers of variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PowerProduct(Vec<(Var, u32)>);

impl PowerProduct {
    pub fn one() -> Self {
        PowerProduct(Vec::new())
    }

    pub fn var(v: &Var, k: u32) -> Self {
        if k == 0 {
            Self::one()
        } else {
            PowerProduct(vec![(v.clone(), k)])
        }
    }

    pub fn from_pairs(mut pairs: Vec<(Var, u32)>) -> Self {
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(pairs.len());
        for (v, k) in pairs {
            match out.last_mut() {
                Some((lv, lk)) if *lv == v => *lk += k,
                _ => out.push((v, k)),
            }
        }
        out.retain(|(_, k)| *k > 0);
        PowerProduct(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Var, u32)> {
        self.0.iter()
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.0.binary_search_by(|(w, _)| w.cmp(v)).map(|i| self.0[i].1).unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, k)| k).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        PowerProduct(merge_add(&self.0, &other.0))
    }

    /// `self / other` when every exponent of `other` is dominated.
    pub fn try_div(&self, other: &Self) -> Option<Self> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (v, k) in &self.0 {
            if j < other.0.len() && other.0[j].0 < *v {
                return None;
            }
            let mut sub = 0;
            if j < other.0.len() && other.0[j].0 == *v {
                sub = other.0[j].1;
                j += 1;
            }
            if sub > *k {
                return None;
            }
            if *k > sub {
                out.push((v.clone(), k - sub));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(PowerProduct(out))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for (v, k) in &self.0 {
            let m = other.degree_in(v).min(*k);
            if m > 0 {
                out.push((v.clone(), m));
            }
        }
        PowerProduct(out)
    }

    /// Removes `v` entirely, returning its exponent and the remainder.
    pub fn split_var(&self, v: &Var) -> (u32, Self) {
        let mut k = 0;
        let rest = self
            .0
            .iter()
            .filter(|(w, e)| {
                if w == v {
                    k = *e;
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        (k, PowerProduct(rest))
    }
}

impl PartialOrd for PowerProduct {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PowerProduct {
    fn cmp(&self, other: &Self) -> Ordering {
        lex_cmp(&self.0, &other.0)
    }
}

/// `exp(l)` for a homogeneous linear form `l` with rational coefficients.
/// The empty form is the constant 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ExpMonomial(Vec<(Var, Rational)>);

impl ExpMonomial {
    pub fn one() -> Self {
        ExpMonomial(Vec::new())
    }

    pub fn from_pairs(mut pairs: Vec<(Var, Rational)>) -> Self {
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Var, Rational)> = Vec::with_capacity(pairs.len());
        for (v, q) in pairs {
            match out.last_mut() {
                Some((lv, lq)) if *lv == v => *lq += q,
                _ => out.push((v, q)),
            }
        }
        out.retain(|(_, q)| !q.is_zero());
        ExpMonomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Var, Rational)> {
        self.0.iter()
    }

    pub fn coefficient(&self, v: &Var) -> Rational {
        self.0.binary_search_by(|(w, _)| w.cmp(v)).map(|i| self.0[i].1.clone()).unwrap_or_else(|_| Rational::zero())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        ExpMonomial(merge_add(&self.0, &other.0))
    }

    pub fn inverse(&self) -> Self {
        ExpMonomial(self.0.iter().map(|(v, q)| (v.clone(), -q)).collect())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::one();
        }
        ExpMonomial(self.0.iter().map(|(v, q)| (v.clone(), q * s)).collect())
    }

    pub fn split_var(&self, v: &Var) -> (Rational, Self) {
        let mut q = Rational::zero();
        let rest = self
            .0
            .iter()
            .filter(|(w, e)| {
                if w == v {
                    q = e.clone();
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        (q, ExpMonomial(rest))
    }
}

impl PartialOrd for ExpMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExpMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        lex_cmp(&self.0, &other.0)
    }
}

/// A power product times an exponential monomial. Ordered by powers first,
/// then by the exponential part; the order is compatible with multiplication.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Monomial {
    pub powers: PowerProduct,
    pub exp: ExpMonomial,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn new(powers: PowerProduct, exp: ExpMonomial) -> Self {
        Monomial { powers, exp }
    }

    pub fn var(v: &Var) -> Self {
        Monomial::new(PowerProduct::var(v, 1), ExpMonomial::one())
    }

    pub fn is_one(&self) -> bool {
        self.powers.is_one() && self.exp.is_one()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Monomial { powers: self.powers.mul(&other.powers), exp: self.exp.mul(&other.exp) }
    }

    /// Exact division; exponential parts are units and always divide.
    pub fn try_div(&self, other: &Self) -> Option<Self> {
        Some(Monomial { powers: self.powers.try_div(&other.powers)?, exp: self.exp.mul(&other.exp.inverse()) })
    }
}

pub(crate) fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for ExpMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("exp(")?;
        for (i, (v, q)) in self.0.iter().enumerate() {
            let mag = q.abs();
            if q.is_negative() {
                f.write_str("-")?;
            } else if i > 0 {
                f.write_str("+")?;
            }
            if !mag.is_one() {
                write!(f, "{}*", fmt_rational(&mag))?;
            }
            write!(f, "{}", v)?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, k) in self.powers.iter() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if *k == 1 {
                write!(f, "{}", v)?;
            } else {
                write!(f, "{}^{}", v, k)?;
            }
        }
        if !self.exp.is_one() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "{}", self.exp)?;
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}
