//! Multivariate polynomial GCD over Q: a modular coprimality test, the
//! heuristic integer GCD, then recursive primitive remainder sequences.
//! Inputs must be free of exponential factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::monomial::{ExpMonomial, Monomial, PowerProduct, Var};
use super::poly::Poly;
use super::Rational;

/// Monic greatest common divisor. `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    debug_assert!(!a.has_exp() && !b.has_exp());
    if a.is_zero() {
        return b.monic().1;
    }
    if b.is_zero() {
        return a.monic().1;
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let m = ma.gcd(&mb);
    let g = gcd_rec(&a.div_powers(&ma), &b.div_powers(&mb));
    let mono = Poly::term(Rational::one(), Monomial::new(m, ExpMonomial::one()));
    (&mono * &g).monic().1
}

fn single_term_gcd(t: &Poly, other: &Poly) -> Poly {
    let (m, _) = t.leading().expect("nonzero");
    let g = m.powers.gcd(&other.monomial_content());
    Poly::term(Rational::one(), Monomial::new(g, ExpMonomial::one()))
}

fn gcd_rec(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.len() == 1 {
        return single_term_gcd(a, b);
    }
    if b.len() == 1 {
        return single_term_gcd(b, a);
    }
    if a == b {
        return a.clone();
    }
    let (small, big) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if big.try_div(small).is_some() {
        return small.clone();
    }

    let va = a.poly_vars();
    let vb = b.poly_vars();
    if let Some(v) = va.difference(&vb).next() {
        return gcd_rec(&content(a, v), b);
    }
    if let Some(v) = vb.difference(&va).next() {
        return gcd_rec(a, &content(b, v));
    }
    let v = va
        .iter()
        .min_by_key(|v| (a.degree_in(v).max(b.degree_in(v)), (*v).clone()))
        .expect("non-constant polynomial has a variable")
        .clone();

    let ca = content(a, &v);
    let cb = content(b, &v);
    let c = gcd_rec(&ca, &cb);
    let pa = a.try_div(&ca).expect("content divides");
    let pb = b.try_div(&cb).expect("content divides");
    let g = prs(pa, pb, &v);
    &c * &g
}

/// GCD of the coefficients of `p` viewed as a polynomial in `v`.
fn content(p: &Poly, v: &Var) -> Poly {
    let mut g = Poly::zero();
    for c in p.coeffs_in(v).values() {
        g = gcd_rec(&g, c);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g.monic().1
}

fn primitive_part(p: &Poly, v: &Var) -> Poly {
    let c = content(p, v);
    p.try_div(&c).expect("content divides").monic().1
}

fn leading_coeff_in(p: &Poly, v: &Var) -> (u32, Poly) {
    let mut coeffs = p.coeffs_in(v);
    coeffs.pop_last().expect("nonzero polynomial")
}

/// Sparse pseudo-remainder of `f` by `g` in the variable `v`.
fn prem(f: &Poly, g: &Poly, v: &Var) -> Poly {
    let (dg, lcg) = leading_coeff_in(g, v);
    let mut r = f.clone();
    while !r.is_zero() {
        let (dr, lcr) = leading_coeff_in(&r, v);
        if dr < dg {
            break;
        }
        let shift = Poly::term(Rational::one(), Monomial::new(PowerProduct::var(v, dr - dg), ExpMonomial::one()));
        r = &(&lcg * &r) - &(&(&lcr * &shift) * g);
    }
    r
}

fn prs(a: Poly, b: Poly, v: &Var) -> Poly {
    if coprime_mod_p(&a, &b, v) {
        return Poly::one();
    }
    if let Some(g) = heuristic_gcd(&a, &b) {
        return g;
    }
    let (mut f, mut g) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    loop {
        let r = prem(&f, &g, v);
        if r.is_zero() {
            return primitive_part(&g, v);
        }
        if r.degree_in(v) == 0 {
            return Poly::one();
        }
        f = g;
        g = primitive_part(&r, v);
    }
}

/// Scales `p` to integer coefficients with content 1.
fn integer_primitive(p: &Poly) -> Poly {
    let mut l = BigInt::one();
    let mut g = BigInt::zero();
    for (_, c) in p.terms() {
        l = l.lcm(c.denom());
    }
    for (_, c) in p.terms() {
        g = g.gcd(&(c * Rational::from_integer(l.clone())).to_integer());
    }
    if g.is_zero() {
        return p.clone();
    }
    p.scale(&Rational::new(l, g))
}

fn max_norm(p: &Poly) -> BigInt {
    p.terms().map(|(_, c)| c.numer().abs()).max().unwrap_or_default()
}

/// GCD of integer polynomials by evaluation at a large integer and
/// `xi`-adic reconstruction, confirmed by exact division.
fn heuristic_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    let a = integer_primitive(a);
    let b = integer_primitive(b);
    let mut vars: Vec<Var> = a.poly_vars().union(&b.poly_vars()).cloned().collect();
    vars.sort();
    let g = heu(&a, &b, &vars)?;
    Some(g.monic().1)
}

const HEU_TRIES: usize = 6;
const HEU_MAX_BITS: u64 = 4096;

fn integer_content(p: &Poly) -> BigInt {
    p.terms().fold(BigInt::zero(), |g, (_, c)| g.gcd(c.numer()))
}

/// Full GCD (content included) of two integer polynomials.
fn heu(a: &Poly, b: &Poly, vars: &[Var]) -> Option<Poly> {
    let Some((x, rest)) = vars.split_last() else {
        let (p, q) = (a.constant_value()?, b.constant_value()?);
        return Some(Poly::constant(Rational::from_integer(p.numer().gcd(q.numer()))));
    };
    if a.degree_in(x) == 0 && b.degree_in(x) == 0 {
        return heu(a, b, rest);
    }
    let (ca, cb) = (integer_content(a), integer_content(b));
    let c = ca.gcd(&cb);
    let a = a.scale(&Rational::new(BigInt::one(), ca));
    let b = b.scale(&Rational::new(BigInt::one(), cb));
    let mut xi = BigInt::from(2) * max_norm(&a).min(max_norm(&b)) + BigInt::from(29);
    for _ in 0..HEU_TRIES {
        if xi.bits() > HEU_MAX_BITS {
            return None;
        }
        let q = Rational::from_integer(xi.clone());
        let (ae, be) = (a.eval_poly_var(x, &q), b.eval_poly_var(x, &q));
        if !ae.is_zero() && !be.is_zero() {
            if let Some(h) = heu(&ae, &be, rest) {
                let g = integer_primitive(&reconstruct(h, x, &xi));
                if !g.is_zero() && a.try_div(&g).is_some() && b.try_div(&g).is_some() {
                    return Some(g.scale(&Rational::from_integer(c)));
                }
            }
        }
        xi = xi * BigInt::from(73794) / BigInt::from(27011);
    }
    None
}

fn symmetric_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * BigInt::from(2) > *m {
        r - m
    } else {
        r
    }
}

/// `sum_i g_i x^i` from `h = sum_i g_i xi^i` with symmetric digits.
fn reconstruct(mut h: Poly, x: &Var, xi: &BigInt) -> Poly {
    let mut out = Poly::zero();
    let mut i = 0;
    let inv = Rational::new(BigInt::one(), xi.clone());
    while !h.is_zero() {
        let mut digit = Poly::zero();
        for (m, c) in h.terms() {
            let d = symmetric_mod(&c.to_integer(), xi);
            if !d.is_zero() {
                digit.add_term(m.clone(), Rational::from_integer(d));
            }
        }
        let shift = Poly::term(Rational::one(), Monomial::new(PowerProduct::var(x, i), ExpMonomial::one()));
        out = &out + &(&digit * &shift);
        h = (&h - &digit).scale(&inv);
        i += 1;
    }
    out
}

const P: u64 = 2_147_483_647;

fn mod_pow(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    acc
}

fn rational_mod_p(q: &Rational) -> Option<u64> {
    let p = BigInt::from(P);
    let n = q.numer().mod_floor(&p).to_u64()?;
    let d = q.denom().mod_floor(&p).to_u64()?;
    (d != 0).then(|| n * mod_pow(d, P - 2) % P)
}

/// Image of `p` as a dense polynomial in `v` after evaluating the other
/// variables at `point` modulo `P`.
fn image(p: &Poly, v: &Var, point: &dyn Fn(&Var) -> u64) -> Option<Vec<u64>> {
    let mut out = vec![0u64; p.degree_in(v) as usize + 1];
    for (m, c) in p.terms() {
        let mut t = rational_mod_p(c)?;
        let mut k = 0;
        for (w, e) in m.powers.iter() {
            if w == v {
                k = *e as usize;
            } else {
                t = t * mod_pow(point(w), u64::from(*e)) % P;
            }
        }
        out[k] = (out[k] + t) % P;
    }
    Some(out)
}

fn trim(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn univariate_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    trim(&mut a);
    trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        // a mod b
        let inv = mod_pow(*b.last().unwrap(), P - 2);
        while a.len() >= b.len() && !(a.len() == 1 && a[0] == 0) {
            let f = *a.last().unwrap() * inv % P;
            let shift = a.len() - b.len();
            for (i, bi) in b.iter().enumerate() {
                a[shift + i] = (a[shift + i] + P - f * bi % P) % P;
            }
            a.pop();
            if a.is_empty() {
                a.push(0);
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len() - 1
}

/// Sufficient test for `gcd(a, b) = 1` when both are primitive in `v`: a
/// common factor of positive degree in `v` survives any evaluation of the
/// other variables that keeps both leading coefficients nonzero.
fn coprime_mod_p(a: &Poly, b: &Poly, v: &Var) -> bool {
    for attempt in 0u64..2 {
        let point = |w: &Var| {
            let h = w.name().bytes().fold(1_469_598_103u64 ^ attempt.wrapping_mul(0x9e37), |h, c| {
                h.wrapping_mul(1_099_511_628_211).wrapping_add(u64::from(c))
            });
            h % (P - 2) + 2
        };
        let (Some(ia), Some(ib)) = (image(a, v, &point), image(b, v, &point)) else {
            return false;
        };
        if *ia.last().unwrap() == 0 || *ib.last().unwrap() == 0 {
            continue;
        }
        return univariate_gcd_degree(ia, ib) == 0;
    }
    false
}

/// Least common multiple, monic.
pub fn lcm(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let g = gcd(a, b);
    (&a.try_div(&g).expect("gcd divides") * b).monic().1
}
