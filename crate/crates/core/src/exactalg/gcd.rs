//! Multivariate polynomial GCD over the rationals by recursive
//! content/primitive-part splitting and the subresultant remainder sequence.

use super::{Monomial, Poly};

/// Greatest common divisor, normalized to integer-primitive content with a
/// positive leading coefficient. `gcd(0, 0) = 0`.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mg = ma.gcd(&mb);
    let a = strip_monomial(a, &ma);
    let b = strip_monomial(b, &mb);
    let g = gcd_no_monomial(&a, &b);
    let mono = Poly::from_terms(vec![(mg, super::Rational::one())]);
    g.mul(&mono).normalized()
}

fn strip_monomial(p: &Poly, m: &Monomial) -> Poly {
    if m.is_one() {
        return p.clone();
    }
    let mp = Poly::from_terms(vec![(m.clone(), super::Rational::one())]);
    p.div_exact(&mp).expect("monomial content divides")
}

fn gcd_no_monomial(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.div_exact(b).is_some() {
        return b.normalized();
    }
    if b.div_exact(a).is_some() {
        return a.normalized();
    }
    let ma = a.var_mask();
    let mb = b.var_mask();
    if modular::certainly_coprime(a, b, ma & mb) {
        return Poly::one();
    }
    // A variable present in only one argument: the gcd divides that argument's content in it.
    if let Some(v) = first_bit(ma & !mb) {
        return gcd_no_monomial(&content_in(a, v), b);
    }
    if let Some(v) = first_bit(mb & !ma) {
        return gcd_no_monomial(a, &content_in(b, v));
    }
    let common = ma & mb;
    if common == 0 {
        return Poly::one();
    }
    // Main variable: the common one of smallest combined degree.
    let mut best = 0u32;
    let mut best_deg = u32::MAX;
    for i in 0..64u32 {
        if common & (1 << i) != 0 {
            let v = i + 1;
            let d = a.degree_in(v) as u32 + b.degree_in(v) as u32;
            if d < best_deg {
                best_deg = d;
                best = v;
            }
        }
    }
    univariate_gcd(a, b, best)
}

fn first_bit(mask: u64) -> Option<u32> {
    if mask == 0 {
        None
    } else {
        Some(mask.trailing_zeros() + 1)
    }
}

/// GCD of the coefficients of `p` viewed as a polynomial in `var`.
fn content_in(p: &Poly, var: u32) -> Poly {
    let cs = p.coeffs_in(var);
    let mut g = Poly::zero();
    for c in cs.iter().filter(|c| !c.is_zero()) {
        g = poly_gcd(&g, c);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g
}

fn content_of(cs: &[Poly]) -> Poly {
    let mut g = Poly::zero();
    for c in cs.iter().filter(|c| !c.is_zero()) {
        g = poly_gcd(&g, c);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g
}

fn div_all(cs: &[Poly], d: &Poly) -> Vec<Poly> {
    cs.iter()
        .map(|c| c.div_exact(d).expect("exact coefficient division"))
        .collect()
}

fn trim(cs: &mut Vec<Poly>) {
    while cs.len() > 1 && cs.last().is_some_and(|c| c.is_zero()) {
        cs.pop();
    }
}

fn deg(cs: &[Poly]) -> usize {
    cs.len() - 1
}

/// Pseudo-remainder of `u` by `v` in `R[x]`, coefficient vectors indexed by degree.
fn prem(u: &[Poly], v: &[Poly]) -> Vec<Poly> {
    let n = deg(v);
    let l = &v[n];
    let mut r: Vec<Poly> = u.to_vec();
    let m = deg(u);
    for i in (n..=m).rev() {
        let c = r[i].clone();
        for x in r.iter_mut() {
            *x = x.mul(l);
        }
        if !c.is_zero() {
            for j in 0..=n {
                let t = c.mul(&v[j]);
                r[i - n + j] = r[i - n + j].sub(&t);
            }
        }
        r.pop();
    }
    if r.is_empty() {
        r.push(Poly::zero());
    }
    trim(&mut r);
    r
}

fn univariate_gcd(a: &Poly, b: &Poly, var: u32) -> Poly {
    let mut u = a.coeffs_in(var);
    let mut v = b.coeffs_in(var);
    let cu = content_of(&u);
    let cv = content_of(&v);
    u = div_all(&u, &cu);
    v = div_all(&v, &cv);
    let c = poly_gcd(&cu, &cv);
    if deg(&u) < deg(&v) {
        std::mem::swap(&mut u, &mut v);
    }
    let mut g = Poly::one();
    let mut h = Poly::one();
    let last = loop {
        let delta = (deg(&u) - deg(&v)) as u32;
        let r = prem(&u, &v);
        if r.len() == 1 && r[0].is_zero() {
            break v;
        }
        if deg(&r) == 0 {
            return c.normalized();
        }
        let divisor = g.mul(&h.pow(delta));
        u = v;
        v = div_all(&r, &divisor);
        g = u[deg(&u)].clone();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta)
                .div_exact(&h.pow(delta - 1))
                .expect("subresultant h update is exact")
        };
    };
    let cl = content_of(&last);
    let pp = div_all(&last, &cl);
    Poly::from_coeffs_in(var, &pp).mul(&c).normalized()
}

/// Coprimality certificates from univariate images modulo a prime.
///
/// If `g = gcd(a, b)` has positive degree in `v`, then substituting values for
/// the other variables (keeping both leading coefficients in `v` nonzero mod
/// p) leaves an image of `g` of the same degree dividing both images. A
/// constant image gcd for every common variable therefore proves `g` is constant.
mod modular {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;

    use crate::exactalg::{Poly, Rational};

    const P: u64 = (1 << 61) - 1;

    fn mul(a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % P as u128) as u64
    }

    fn add(a: u64, b: u64) -> u64 {
        (a + b) % P
    }

    fn sub(a: u64, b: u64) -> u64 {
        (a + P - b) % P
    }

    fn pow(mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        r
    }

    fn inv(a: u64) -> u64 {
        pow(a, P - 2)
    }

    fn big_mod(n: &BigInt) -> u64 {
        let m = BigInt::from(P);
        let r = ((n % &m) + &m) % &m;
        r.to_u64().expect("residue fits")
    }

    fn rat_mod(r: &Rational) -> Option<u64> {
        let (n, d) = match r.as_small() {
            Some((n, d)) => (n.rem_euclid(P as i64) as u64, d.rem_euclid(P as i64) as u64),
            None => (big_mod(&r.numer()), big_mod(&r.denom())),
        };
        if d == 0 {
            None
        } else {
            Some(mul(n, inv(d)))
        }
    }

    /// Coefficients of `p` in `var` after substituting `point` for the other variables.
    fn image(p: &Poly, var: u32, point: &[u64]) -> Option<Vec<u64>> {
        let mut out = vec![0u64; p.degree_in(var) as usize + 1];
        for (m, c) in p.terms() {
            let mut t = rat_mod(c)?;
            for (i, &e) in m.exps().iter().enumerate() {
                if i as u32 + 1 != var && e > 0 {
                    t = mul(t, pow(point[i], e as u64));
                }
            }
            let k = m.exp(var) as usize;
            out[k] = add(out[k], t);
        }
        Some(out)
    }

    fn trim(v: &mut Vec<u64>) {
        while v.len() > 1 && v.last() == Some(&0) {
            v.pop();
        }
    }

    /// Degree of the monic gcd of two univariate polynomials mod P.
    fn gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
        trim(&mut a);
        trim(&mut b);
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !(b.len() == 1 && b[0] == 0) {
            let lb = inv(*b.last().unwrap());
            let n = b.len() - 1;
            while a.len() >= b.len() && !(a.len() == 1 && a[0] == 0) {
                let q = mul(*a.last().unwrap(), lb);
                let shift = a.len() - 1 - n;
                for j in 0..=n {
                    a[shift + j] = sub(a[shift + j], mul(q, b[j]));
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

    pub(super) fn certainly_coprime(a: &Poly, b: &Poly, common: u64) -> bool {
        let nvars = a.max_var().max(b.max_var()) as usize;
        let mut seed: u64 = 0x9e37_79b9_7f4a_7c15;
        let mut next = || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed % P
        };
        for i in 0..64u32 {
            if common & (1 << i) == 0 {
                continue;
            }
            let var = i + 1;
            let (da, db) = (a.degree_in(var) as usize, b.degree_in(var) as usize);
            let mut certified = false;
            for _ in 0..2 {
                let point: Vec<u64> = (0..nvars).map(|_| next()).collect();
                let (Some(ia), Some(ib)) = (image(a, var, &point), image(b, var, &point)) else {
                    continue;
                };
                if ia[da] == 0 || ib[db] == 0 {
                    continue;
                }
                if gcd_degree(ia, ib) == 0 {
                    certified = true;
                    break;
                }
            }
            if !certified {
                return false;
            }
        }
        true
    }
}
