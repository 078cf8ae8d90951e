use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use super::Rational;

/// Exponent vector; slot `i` holds the exponent of `x_{i+1}`. Trailing zeros are trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: SmallVec<[u16; 6]>,
    deg: u32,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(i: u32) -> Self {
        Self::from_exps((0..i).map(|k| u16::from(k + 1 == i)).collect())
    }

    pub fn from_exps(mut exps: SmallVec<[u16; 6]>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        let deg = exps.iter().map(|&e| e as u32).sum();
        Monomial { exps, deg }
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn exp(&self, var: u32) -> u16 {
        self.exps.get(var as usize - 1).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn max_var(&self) -> u32 {
        self.exps.len() as u32
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (long, short) = if self.exps.len() >= other.exps.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut exps = long.exps.clone();
        for (e, s) in exps.iter_mut().zip(short.exps.iter()) {
            *e += *s;
        }
        Monomial {
            exps,
            deg: self.deg + other.deg,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.len() <= other.exps.len()
            && self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn div_into(&self, other: &Monomial) -> Monomial {
        let mut exps = other.exps.clone();
        for (e, s) in exps.iter_mut().zip(self.exps.iter()) {
            *e -= *s;
        }
        Self::from_exps(exps)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Self::from_exps(
            self.exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    fn without_var(&self, var: u32) -> Monomial {
        let mut exps = self.exps.clone();
        if let Some(e) = exps.get_mut(var as usize - 1) {
            *e = 0;
        }
        Self::from_exps(exps)
    }

    fn with_var_exp(&self, var: u32, e: u16) -> Monomial {
        let mut exps = self.exps.clone();
        let idx = var as usize - 1;
        if exps.len() <= idx {
            exps.resize(idx + 1, 0);
        }
        exps[idx] = e;
        Self::from_exps(exps)
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then the larger exponent of the
    /// lowest-index variable wins.
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg.cmp(&other.deg).then_with(|| {
            let n = self.exps.len().max(other.exps.len());
            for i in 0..n {
                let a = self.exps.get(i).copied().unwrap_or(0);
                let b = other.exps.get(i).copied().unwrap_or(0);
                if a != b {
                    return a.cmp(&b);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Debug for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())
    }
}

/// Sparse multivariate polynomial over the rationals. Terms are kept sorted
/// in decreasing graded-lex order, so the first term is the leading term.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Monomial, Rational)>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: vec![(Monomial::one(), c)],
        }
    }

    pub fn var(i: u32) -> Self {
        Poly {
            terms: vec![(Monomial::var(i), Rational::one())],
        }
    }

    /// `Σ c_v x_v + c0`.
    pub fn linear<I: IntoIterator<Item = (u32, Rational)>>(it: I, c0: Rational) -> Self {
        let mut terms: Vec<(Monomial, Rational)> = it
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(v, c)| (Monomial::var(v), c))
            .collect();
        if !c0.is_zero() {
            terms.push((Monomial::one(), c0));
        }
        Self::from_terms(terms)
    }

    /// Builds a polynomial from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms(terms: Vec<(Monomial, Rational)>) -> Self {
        let mut map: FxHashMap<Monomial, Rational> = FxHashMap::default();
        for (m, c) in terms {
            accumulate(&mut map, m, c);
        }
        Self::from_map(map)
    }

    fn from_map(map: FxHashMap<Monomial, Rational>) -> Self {
        let mut terms: Vec<(Monomial, Rational)> =
            map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly { terms }
    }

    fn from_sorted(terms: Vec<(Monomial, Rational)>) -> Self {
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading(&self) -> Option<&(Monomial, Rational)> {
        self.terms.first()
    }

    pub fn lc(&self) -> Rational {
        self.terms.first().map_or(Rational::zero(), |t| t.1.clone())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map_or(0, |t| t.0.degree())
    }

    pub fn max_var(&self) -> u32 {
        self.terms.iter().map(|t| t.0.max_var()).max().unwrap_or(0)
    }

    /// Bitmask of variables that occur (bit `i-1` for `x_i`, saturating at 64).
    pub fn var_mask(&self) -> u64 {
        let mut mask = 0u64;
        for (m, _) in &self.terms {
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 && i < 64 {
                    mask |= 1 << i;
                }
            }
        }
        mask
    }

    pub fn degree_in(&self, var: u32) -> u16 {
        self.terms.iter().map(|t| t.0.exp(var)).max().unwrap_or(0)
    }

    pub fn neg(&self) -> Poly {
        Poly::from_sorted(self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        if k.is_one() {
            return self.clone();
        }
        Poly::from_sorted(self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.merge(other, true)
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for (m, c) in &b[j..] {
            out.push((m.clone(), if negate { -c } else { c.clone() }));
        }
        Poly::from_sorted(out)
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::from_sorted(
            self.terms
                .iter()
                .map(|(tm, tc)| (tm.mul(m), tc * c))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.constant_value() {
            return other.scale(&c);
        }
        if let Some(c) = other.constant_value() {
            return self.scale(&c);
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, &other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut map: FxHashMap<Monomial, Rational> =
            FxHashMap::with_capacity_and_hasher(self.terms.len() * other.terms.len(), Default::default());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                accumulate(&mut map, m1.mul(m2), c1 * c2);
            }
        }
        Poly::from_map(map)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip().ok()?));
        }
        if d.terms.len() == 1 {
            let (dm, dc) = &d.terms[0];
            let inv = dc.recip().ok()?;
            let mut out = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                if !dm.divides(m) {
                    return None;
                }
                out.push((dm.div_into(m), c * &inv));
            }
            return Some(Poly::from_sorted(out));
        }
        if self.total_degree() < d.total_degree() {
            return None;
        }
        let (dlm, dlc) = d.terms[0].clone();
        let dlc_inv = dlc.recip().ok()?;
        let mut rem: BTreeMap<Monomial, Rational> = self.terms.iter().cloned().collect();
        let mut quot = Vec::new();
        while let Some((lm, lc)) = rem.pop_last() {
            if !dlm.divides(&lm) {
                return None;
            }
            let qm = dlm.div_into(&lm);
            let qc = &lc * &dlc_inv;
            for (m, c) in &d.terms[1..] {
                let key = m.mul(&qm);
                let delta = c * &qc;
                match rem.entry(key) {
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let v = e.get() - &delta;
                        if v.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = v;
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-delta);
                    }
                }
            }
            quot.push((qm, qc));
        }
        Some(Poly::from_sorted(quot))
    }

    /// Splits `self = k · p` where `p` has coprime integer coefficients and a
    /// positive leading coefficient. Returns `(k, p)`; zero maps to `(0, 0)`.
    pub fn primitive(&self) -> (Rational, Poly) {
        if self.is_zero() {
            return (Rational::zero(), Poly::zero());
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        let mut small = true;
        let (mut sg, mut sl) = (0i64, 1i64);
        for (_, c) in &self.terms {
            if small {
                if let Some((n, d)) = c.as_small() {
                    let g = sg.gcd(&n.abs());
                    let l = sl / sl.gcd(&d);
                    if let Some(l) = l.checked_mul(d) {
                        sg = g;
                        sl = l;
                        continue;
                    }
                }
                small = false;
                num_gcd = BigInt::from(sg);
                den_lcm = BigInt::from(sl);
            }
            num_gcd = num_gcd.gcd(&c.numer());
            den_lcm = den_lcm.lcm(&c.denom());
        }
        let mut k = if small {
            Rational::new(sg, sl)
        } else {
            Rational::from_big(num_gcd, den_lcm)
        };
        if self.lc().signum() < 0 {
            k = -k;
        }
        if k.is_one() {
            return (k, self.clone());
        }
        let inv = k.recip().expect("nonzero content");
        (k, self.scale(&inv))
    }

    /// Makes the polynomial primitive with positive leading coefficient.
    pub fn normalized(&self) -> Poly {
        self.primitive().1
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = &t * &point[i].pow(e as u32);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Substitutes `x_i ↦ map[i-1]` for every variable that occurs.
    pub fn subst(&self, map: &[Poly]) -> Poly {
        let mut powers: FxHashMap<(usize, u16), Poly> = FxHashMap::default();
        let mut acc: FxHashMap<Monomial, Rational> = FxHashMap::default();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = powers
                    .entry((i, e))
                    .or_insert_with(|| map[i].pow(e as u32));
                t = t.mul(p);
            }
            for (tm, tc) in t.terms {
                accumulate(&mut acc, tm, tc);
            }
        }
        Poly::from_map(acc)
    }

    /// Injective renaming `x_i ↦ x_{map[i-1]}`.
    pub fn rename(&self, map: &[u32]) -> Poly {
        let width = map.iter().copied().max().unwrap_or(0) as usize;
        let mut terms: Vec<(Monomial, Rational)> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps: SmallVec<[u16; 6]> = SmallVec::from_elem(0, width);
                for (i, &e) in m.exps().iter().enumerate() {
                    if e > 0 {
                        exps[map[i] as usize - 1] = e;
                    }
                }
                (Monomial::from_exps(exps), c.clone())
            })
            .collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly::from_sorted(terms)
    }

    /// `x_i ↦ x_{i+k}`; order preserving, so no re-sort is needed.
    pub fn shift(&self, k: u32) -> Poly {
        if k == 0 {
            return self.clone();
        }
        Poly::from_sorted(
            self.terms
                .iter()
                .map(|(m, c)| {
                    if m.is_one() {
                        return (m.clone(), c.clone());
                    }
                    let mut exps: SmallVec<[u16; 6]> = SmallVec::from_elem(0, k as usize);
                    exps.extend_from_slice(m.exps());
                    (Monomial::from_exps(exps), c.clone())
                })
                .collect(),
        )
    }

    /// Greatest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return Monomial::one();
        };
        let mut g = first.clone();
        for (m, _) in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    /// Coefficients of `self` viewed as a polynomial in `var`, indexed by degree.
    pub fn coeffs_in(&self, var: u32) -> Vec<Poly> {
        let d = self.degree_in(var) as usize;
        let mut buckets: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            buckets[m.exp(var) as usize].push((m.without_var(var), c.clone()));
        }
        buckets.into_iter().map(Poly::from_sorted_subset).collect()
    }

    /// Inverse of [`Poly::coeffs_in`].
    pub fn from_coeffs_in(var: u32, coeffs: &[Poly]) -> Poly {
        let mut terms = Vec::new();
        for (e, c) in coeffs.iter().enumerate() {
            for (m, k) in &c.terms {
                terms.push((m.with_var_exp(var, e as u16), k.clone()));
            }
        }
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly::from_sorted(terms)
    }

    fn from_sorted_subset(terms: Vec<(Monomial, Rational)>) -> Poly {
        // Removing one variable from a graded-lex sorted list can break the order.
        let mut terms = terms;
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly::from_sorted(terms)
    }
}

fn accumulate(map: &mut FxHashMap<Monomial, Rational>, m: Monomial, c: Rational) {
    match map.entry(m) {
        std::collections::hash_map::Entry::Occupied(mut e) => {
            let v = e.get() + &c;
            *e.get_mut() = v;
        }
        std::collections::hash_map::Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", super::text::render_poly(self, super::Family::X))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x(i: u32) -> Poly {
        Poly::var(i)
    }

    fn c(n: i64) -> Poly {
        Poly::constant(Rational::from_int(n))
    }

    #[test]
    fn graded_lex_order() {
        let m = |v: &[u16]| Monomial::from_exps(v.iter().copied().collect());
        assert!(m(&[0, 2]) > m(&[1]));
        assert!(m(&[1]) > m(&[0, 1]));
        assert!(m(&[1, 1]) > m(&[0, 2]));
        assert!(m(&[2]) > m(&[1, 1]));
    }

    #[test]
    fn expand_and_divide() {
        let a = x(1).add(&x(2));
        let b = x(1).sub(&x(2));
        let p = a.mul(&b);
        assert_eq!(p, x(1).mul(&x(1)).sub(&x(2).mul(&x(2))));
        assert_eq!(p.div_exact(&a), Some(b.clone()));
        assert_eq!(p.div_exact(&x(3)), None);
        assert_eq!(p.add(&c(1)).div_exact(&a), None);
    }

    #[test]
    fn primitive_part() {
        let p = x(1).scale(&Rational::new(-2, 3)).add(&c(4));
        let (k, q) = p.primitive();
        assert_eq!(k, Rational::new(-2, 3));
        assert_eq!(q, x(1).sub(&c(6)));
    }

    #[test]
    fn rename_and_shift() {
        let p = x(1).mul(&x(1)).add(&x(2));
        assert_eq!(p.rename(&[2, 1]), x(2).mul(&x(2)).add(&x(1)));
        assert_eq!(p.shift(2), x(3).mul(&x(3)).add(&x(4)));
    }

    #[test]
    fn univariate_view_round_trip() {
        let p = x(1).mul(&x(2)).add(&x(2).pow(3)).add(&x(3));
        let cs = p.coeffs_in(2);
        assert_eq!(cs.len(), 4);
        assert_eq!(Poly::from_coeffs_in(2, &cs), p);
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec((0u16..3, 0u16..3, 0u16..2, -4i64..5), 0..5).prop_map(|ts| {
            Poly::from_terms(
                ts.into_iter()
                    .map(|(a, b, c, k)| {
                        (Monomial::from_exps([a, b, c].into_iter().collect()), Rational::from_int(k))
                    })
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert!(a.sub(&a).is_zero());
        }

        #[test]
        fn division_inverts_multiplication(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!(a.mul(&b).div_exact(&b), Some(a));
        }

        #[test]
        fn eval_is_a_ring_map(a in arb_poly(), b in arb_poly(), p in -3i64..4, q in -3i64..4, r in 1i64..4) {
            let pt = [Rational::from_int(p), Rational::new(q, r), Rational::from_int(r)];
            prop_assert_eq!(a.mul(&b).eval(&pt), &a.eval(&pt) * &b.eval(&pt));
            prop_assert_eq!(a.add(&b).eval(&pt), &a.eval(&pt) + &b.eval(&pt));
        }
    }
}
