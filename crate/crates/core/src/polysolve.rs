//! Rational solutions of zero-dimensional polynomial systems in two
//! variables, by factor splitting, resultants and the rational root test.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::symexpr::{gcd, Poly, Rational, Var};

/// All rational common zeros `(a, b)` of `eqs` in the variables `(x, y)`.
/// Fails if the zero set is not finite or has non-rational points.
pub fn solve2(eqs: &[Poly], x: &Var, y: &Var) -> Result<BTreeSet<(Rational, Rational)>> {
    for p in eqs {
        if p.has_exp() || p.poly_vars().iter().any(|v| v != x && v != y) {
            return Err(Error::PolySystem(format!("{p} is not a polynomial in {x}, {y}")));
        }
    }
    let mut out = BTreeSet::new();
    split(normalize(eqs), x, y, &mut out)?;
    Ok(out)
}

fn normalize(eqs: &[Poly]) -> Vec<Poly> {
    let mut v: Vec<Poly> = eqs.iter().filter(|p| !p.is_zero()).map(|p| p.monic().1).collect();
    v.sort_by_key(|p| p.to_string());
    v.dedup();
    v
}

fn split(eqs: Vec<Poly>, x: &Var, y: &Var, out: &mut BTreeSet<(Rational, Rational)>) -> Result<()> {
    if eqs.iter().any(Poly::is_constant) {
        return Ok(());
    }
    if eqs.is_empty() {
        return Err(Error::PolySystem("solution set is not finite".into()));
    }
    for i in 0..eqs.len() {
        for j in i + 1..eqs.len() {
            let g = gcd(&eqs[i], &eqs[j]);
            if g.is_constant() {
                continue;
            }
            let rest: Vec<Poly> =
                eqs.iter().enumerate().filter(|(k, _)| *k != i && *k != j).map(|(_, p)| p.clone()).collect();
            let mut with_g = rest.clone();
            with_g.push(g.clone());
            split(normalize(&with_g), x, y, out)?;
            let mut cof = rest;
            cof.push(eqs[i].try_div(&g).expect("gcd divides"));
            cof.push(eqs[j].try_div(&g).expect("gcd divides"));
            return split(normalize(&cof), x, y, out);
        }
    }
    // pairwise coprime: eliminate y
    let ux = match eqs.iter().find(|p| p.degree_in(y) == 0) {
        Some(p) => p.clone(),
        None if eqs.len() >= 2 => resultant(&eqs[0], &eqs[1], y),
        None => return Err(Error::PolySystem("solution set is not finite".into())),
    };
    if ux.is_zero() {
        return Err(Error::PolySystem("solution set is not finite".into()));
    }
    for a in rational_roots(&ux, x)? {
        let mut g = Poly::zero();
        for p in &eqs {
            g = gcd(&g, &p.eval_poly_var(x, &a));
        }
        if g.is_zero() {
            return Err(Error::PolySystem(format!("solution set is not finite over {x} = {a}")));
        }
        for b in rational_roots(&g, y)? {
            out.insert((a.clone(), b));
        }
    }
    Ok(())
}

/// Resultant of `f` and `g` with respect to `v`, by a fraction-free
/// determinant of the Sylvester matrix.
pub fn resultant(f: &Poly, g: &Poly, v: &Var) -> Poly {
    let m = f.degree_in(v) as usize;
    let n = g.degree_in(v) as usize;
    let size = m + n;
    if size == 0 {
        return Poly::one();
    }
    let fc = f.coeffs_in(v);
    let gc = g.coeffs_in(v);
    let coeff = |c: &std::collections::BTreeMap<u32, Poly>, k: usize| c.get(&(k as u32)).cloned().unwrap_or_default();
    let mut a: Vec<Vec<Poly>> = vec![vec![Poly::zero(); size]; size];
    for r in 0..n {
        for k in 0..=m {
            a[r][r + (m - k)] = coeff(&fc, k);
        }
    }
    for r in 0..m {
        for k in 0..=n {
            a[n + r][r + (n - k)] = coeff(&gc, k);
        }
    }
    bareiss(a)
}

fn bareiss(mut a: Vec<Vec<Poly>>) -> Poly {
    let n = a.len();
    let mut sign = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Poly::zero();
            };
            a.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.try_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -&d
    } else {
        d
    }
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let n = n.abs();
    let small = n
        .to_u64()
        .filter(|v| *v <= 1_000_000_000_000)
        .ok_or_else(|| Error::PolySystem("coefficients too large for the rational root test".into()))?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= small {
        if small % d == 0 {
            out.push(BigInt::from(d));
            if d * d != small {
                out.push(BigInt::from(small / d));
            }
        }
        d += 1;
    }
    Ok(out)
}

/// Distinct rational roots of a univariate polynomial; fails if a factor
/// without rational roots remains.
pub fn rational_roots(p: &Poly, v: &Var) -> Result<Vec<Rational>> {
    if p.poly_vars().iter().any(|w| w != v) {
        return Err(Error::PolySystem(format!("{p} is not univariate in {v}")));
    }
    let coeffs = p.coeffs_in(v);
    let deg = p.degree_in(v) as usize;
    let mut c: Vec<Rational> = (0..=deg)
        .map(|k| coeffs.get(&(k as u32)).and_then(|q| q.constant_value()).unwrap_or_else(Rational::zero))
        .collect();
    let mut roots = Vec::new();
    // strip zero roots
    let lead_zero = c.iter().take_while(|q| q.is_zero()).count();
    if lead_zero > 0 {
        roots.push(Rational::zero());
        c.drain(..lead_zero);
    }
    if c.len() > 1 {
        let l = c.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let ints: Vec<BigInt> = c.iter().map(|q| (q * Rational::from_integer(l.clone())).to_integer()).collect();
        let ps = divisors(&ints[0])?;
        let qs = divisors(ints.last().unwrap())?;
        let mut cands = BTreeSet::new();
        for p in &ps {
            for q in &qs {
                let r = Rational::new(p.clone(), q.clone());
                cands.insert(r.clone());
                cands.insert(-r);
            }
        }
        for r in cands {
            while c.len() > 1 && horner(&c, &r).is_zero() {
                if !roots.contains(&r) {
                    roots.push(r.clone());
                }
                c = deflate(&c, &r);
            }
        }
    }
    if c.len() > 1 {
        return Err(Error::PolySystem(format!("{p} has roots that are not rational")));
    }
    roots.sort();
    Ok(roots)
}

fn horner(c: &[Rational], r: &Rational) -> Rational {
    c.iter().rev().fold(Rational::zero(), |acc, a| acc * r + a)
}

/// Divides by `(v - r)`; coefficients in ascending order.
fn deflate(c: &[Rational], r: &Rational) -> Vec<Rational> {
    let n = c.len() - 1;
    let mut q = vec![Rational::zero(); n];
    let mut carry = Rational::zero();
    for k in (0..n).rev() {
        carry = &c[k + 1] + carry * r;
        q[k] = carry.clone();
    }
    q
}
