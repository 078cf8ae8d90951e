use std::cmp::Ordering;
use std::fmt;

use rustc_hash::FxHashMap;

use super::gcd::poly_gcd;
use super::{ExactError, Family, LinForm, Poly, Rational};

/// Reduced rational function `num / den`.
///
/// The denominator is kept as a list of pairwise coprime factors, each
/// integer-primitive with a positive leading coefficient. Affine factors are
/// irreducible, so as long as every factor is affine, reduction only needs
/// trial division; non-affine factors fall back to full polynomial GCDs.
#[derive(Clone)]
pub struct RatFun {
    num: Poly,
    factors: Vec<(Poly, u32)>,
    general: bool,
}

fn cmp_poly(a: &Poly, b: &Poly) -> Ordering {
    for (x, y) in a.terms().iter().zip(b.terms().iter()) {
        let o = x.0.cmp(&y.0).then_with(|| x.1.cmp(&y.1));
        if o != Ordering::Equal {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

fn is_affine(p: &Poly) -> bool {
    p.total_degree() == 1
}

fn mask_subset(sub: u64, sup: u64) -> bool {
    sub & !sup == 0
}

/// Divides out as many copies of `f` from `num` as possible, up to `max`.
fn strip_factor(num: &mut Poly, f: &Poly, max: u32) -> u32 {
    if num.is_zero() || !mask_subset(f.var_mask(), num.var_mask()) {
        return 0;
    }
    let mut k = 0;
    while k < max {
        if num.total_degree() < f.total_degree() {
            break;
        }
        match num.div_exact(f) {
            Some(q) => {
                *num = q;
                k += 1;
            }
            None => break,
        }
    }
    k
}

impl RatFun {
    pub fn zero() -> Self {
        RatFun {
            num: Poly::zero(),
            factors: Vec::new(),
            general: false,
        }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun {
            num: p,
            factors: Vec::new(),
            general: false,
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(Rational::from_int(n))
    }

    pub fn var(i: u32) -> Self {
        Self::from_poly(Poly::var(i))
    }

    pub fn from_linform(f: &LinForm) -> Self {
        Self::from_poly(f.to_poly())
    }

    /// `1 / f` for a nonzero linear form.
    pub fn inv_linform(f: &LinForm) -> Result<Self, ExactError> {
        Self::one().div(&Self::from_linform(f))
    }

    /// Canonical `num / den`.
    pub fn new(num: Poly, den: Poly) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::canonical_slow(num, den, &[]))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    /// Expanded denominator.
    pub fn den(&self) -> Poly {
        let mut d = Poly::one();
        for (f, e) in &self.factors {
            d = d.mul(&f.pow(*e));
        }
        d
    }

    /// The coprime factorization of the denominator.
    pub fn den_factors(&self) -> &[(Poly, u32)] {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty() && self.num.is_one()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.factors.is_empty() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn max_var(&self) -> u32 {
        self.factors
            .iter()
            .map(|f| f.0.max_var())
            .chain(std::iter::once(self.num.max_var()))
            .max()
            .unwrap_or(0)
    }

    pub fn var_mask(&self) -> u64 {
        self.factors
            .iter()
            .fold(self.num.var_mask(), |m, f| m | f.0.var_mask())
    }

    fn from_factors(num: Poly, mut factors: Vec<(Poly, u32)>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        factors.retain(|f| f.1 > 0);
        factors.sort_by(|a, b| cmp_poly(&a.0, &b.0));
        let general = factors.iter().any(|f| !is_affine(&f.0));
        RatFun {
            num,
            factors,
            general,
        }
    }

    /// Canonical form of `num / den` for an arbitrary denominator. `hints`
    /// are affine polynomials that are tried as denominator factors.
    fn canonical_slow(num: Poly, den: Poly, hints: &[Poly]) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (k, d) = den.primitive();
        let mut num = num.scale(&k.recip().expect("nonzero denominator"));
        let mut factors = split_denominator(d, hints);
        cancel_common(&mut num, &mut factors);
        Self::from_factors(num, factors)
    }

    /// Sum or product when some denominator factor is not affine.
    fn combine_general(&self, other: &Self, add: bool) -> Self {
        let pieces = refine_coprime(
            merge_factors(&self.factors, &other.factors)
                .into_iter()
                .map(|(p, a, b)| (p, [a, b]))
                .collect(),
        );
        let (mut num, mut factors): (Poly, Vec<(Poly, u32)>) = if add {
            let mut cof_a = Poly::one();
            let mut cof_b = Poly::one();
            for (p, [ea, eb]) in &pieces {
                let l = (*ea).max(*eb);
                cof_a = cof_a.mul(&p.pow(l - ea));
                cof_b = cof_b.mul(&p.pow(l - eb));
            }
            let num = self.num.mul(&cof_a).add(&other.num.mul(&cof_b));
            (num, pieces.into_iter().map(|(p, [a, b])| (p, a.max(b))).collect())
        } else {
            let num = self.num.mul(&other.num);
            (num, pieces.into_iter().map(|(p, [a, b])| (p, a + b)).collect())
        };
        if num.is_zero() {
            return Self::zero();
        }
        cancel_common(&mut num, &mut factors);
        Self::from_factors(num, factors)
    }

    pub fn neg(&self) -> Self {
        RatFun {
            num: self.num.neg(),
            factors: self.factors.clone(),
            general: self.general,
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        RatFun {
            num: self.num.scale(k),
            factors: self.factors.clone(),
            general: self.general,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.factors.is_empty() && other.factors.is_empty() {
            return Self::from_poly(self.num.add(&other.num));
        }
        if self.general || other.general {
            return self.combine_general(other, true);
        }
        if self.factors == other.factors {
            let mut num = self.num.add(&other.num);
            let mut factors = self.factors.clone();
            for (f, e) in factors.iter_mut() {
                let k = strip_factor(&mut num, f, *e);
                *e -= k;
            }
            return Self::from_factors(num, factors);
        }
        let merged = merge_factors(&self.factors, &other.factors);
        let mut cof_a = Poly::one();
        let mut cof_b = Poly::one();
        for (f, ea, eb) in &merged {
            let l = (*ea).max(*eb);
            if l > *ea {
                cof_a = cof_a.mul(&f.pow(l - ea));
            }
            if l > *eb {
                cof_b = cof_b.mul(&f.pow(l - eb));
            }
        }
        let mut num = self.num.mul(&cof_a).add(&other.num.mul(&cof_b));
        let mut factors = Vec::with_capacity(merged.len());
        for (f, ea, eb) in merged {
            let mut e = ea.max(eb);
            if ea == eb {
                e -= strip_factor(&mut num, &f, e);
            }
            factors.push((f, e));
        }
        Self::from_factors(num, factors)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some(c) = self.constant_value() {
            return other.scale(&c);
        }
        if let Some(c) = other.constant_value() {
            return self.scale(&c);
        }
        if self.general || other.general {
            return self.combine_general(other, false);
        }
        let mut a = self.num.clone();
        let mut b = other.num.clone();
        let mut fa = self.factors.clone();
        let mut fb = other.factors.clone();
        for (f, e) in fb.iter_mut() {
            let k = strip_factor(&mut a, f, *e);
            *e -= k;
        }
        for (f, e) in fa.iter_mut() {
            let k = strip_factor(&mut b, f, *e);
            *e -= k;
        }
        let merged = merge_factors(&fa, &fb)
            .into_iter()
            .map(|(f, x, y)| (f, x + y))
            .collect();
        Self::from_factors(a.mul(&b), merged)
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let (k, p) = self.num.primitive();
        let num = self.den().scale(&k.recip()?);
        let factors = split_denominator(p, &[]);
        Ok(Self::from_factors(num, factors))
    }

    pub fn div(&self, other: &Self) -> Result<Self, ExactError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Sum of many terms; terms sharing a denominator are combined first.
    pub fn sum<'a, I: IntoIterator<Item = &'a RatFun>>(terms: I) -> Self {
        let mut groups: FxHashMap<&[(Poly, u32)], Poly> = FxHashMap::default();
        let mut order: Vec<&[(Poly, u32)]> = Vec::new();
        let mut generals: Vec<&RatFun> = Vec::new();
        for t in terms {
            if t.is_zero() {
                continue;
            }
            if t.general {
                generals.push(t);
                continue;
            }
            let key = t.factors.as_slice();
            match groups.get_mut(key) {
                Some(n) => *n = n.add(&t.num),
                None => {
                    order.push(key);
                    groups.insert(key, t.num.clone());
                }
            }
        }
        let mut acc = Self::zero();
        for key in order {
            let mut num = groups.remove(key).expect("group present");
            if num.is_zero() {
                continue;
            }
            let mut factors = key.to_vec();
            for (f, e) in factors.iter_mut() {
                let k = strip_factor(&mut num, f, *e);
                *e -= k;
            }
            acc = acc.add(&Self::from_factors(num, factors));
        }
        for g in generals {
            acc = acc.add(g);
        }
        acc
    }

    /// Substitutes `x_i ↦ map[i-1]`.
    pub fn subst(&self, map: &[LinForm]) -> Result<Self, ExactError> {
        let polys: Vec<Poly> = map.iter().map(|f| f.to_poly()).collect();
        self.subst_poly(&polys)
    }

    /// Substitutes `x_i ↦ map[i-1]` where each image is a polynomial of degree at most one.
    pub fn subst_poly(&self, map: &[Poly]) -> Result<Self, ExactError> {
        if let Some(ren) = as_injective_renaming(map, self.max_var()) {
            return Ok(self.rename(&ren));
        }
        let num = self.num.subst(map);
        let mut scalar = Rational::one();
        let mut acc: Vec<(Poly, u32)> = Vec::new();
        let mut general = false;
        for (f, e) in &self.factors {
            let g = f.subst(map);
            if g.is_zero() {
                return Err(ExactError::PoleAtSubstitution);
            }
            let (k, p) = g.primitive();
            scalar = &scalar * &k.pow(*e);
            if p.is_constant() {
                continue;
            }
            let parts = if is_affine(&p) {
                vec![(p, 1)]
            } else {
                general = true;
                split_denominator(p, &[])
            };
            for (q, m) in parts {
                match acc.iter_mut().find(|x| x.0 == q) {
                    Some(x) => x.1 += e * m,
                    None => acc.push((q, e * m)),
                }
            }
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let mut num = num.scale(&scalar.recip()?);
        if general {
            acc = refine_coprime(acc.into_iter().map(|(p, e)| (p, [e, 0])).collect())
                .into_iter()
                .map(|(p, [e, _])| (p, e))
                .collect();
            cancel_common(&mut num, &mut acc);
        } else {
            for (f, e) in acc.iter_mut() {
                let k = strip_factor(&mut num, f, *e);
                *e -= k;
            }
        }
        Ok(Self::from_factors(num, acc))
    }

    /// Injective variable renaming `x_i ↦ x_{map[i-1]}`.
    pub fn rename(&self, map: &[u32]) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut num = self.num.rename(map);
        let mut factors = Vec::with_capacity(self.factors.len());
        let mut flip = false;
        for (f, e) in &self.factors {
            let mut g = f.rename(map);
            if g.lc().signum() < 0 {
                g = g.neg();
                if e % 2 == 1 {
                    flip = !flip;
                }
            }
            factors.push((g, *e));
        }
        if flip {
            num = num.neg();
        }
        Self::from_factors(num, factors)
    }

    /// `x_i ↦ x_{i+k}`.
    pub fn shift(&self, k: u32) -> Self {
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        RatFun {
            num: self.num.shift(k),
            factors: self.factors.iter().map(|(f, e)| (f.shift(k), *e)).collect(),
            general: self.general,
        }
    }

    /// Value at a rational point (`point[i-1]` for `x_i`), or `None` at a pole.
    pub fn eval(&self, point: &[Rational]) -> Option<Rational> {
        let mut d = Rational::one();
        for (f, e) in &self.factors {
            let v = f.eval(point);
            if v.is_zero() {
                return None;
            }
            d = &d * &v.pow(*e);
        }
        Some(&self.num.eval(point) / &d)
    }

    pub fn render(&self, family: Family) -> String {
        super::text::render_ratfun(self, family)
    }
}

/// Recognizes maps that send distinct variables to distinct variables.
fn as_injective_renaming(map: &[Poly], upto: u32) -> Option<Vec<u32>> {
    let mut out = Vec::with_capacity(upto as usize);
    let mut seen = 0u64;
    for p in map.iter().take(upto as usize) {
        let [(m, c)] = p.terms() else {
            return None;
        };
        if !c.is_one() || m.degree() != 1 {
            return None;
        }
        let v = m.max_var();
        if v > 64 || seen & (1 << (v - 1)) != 0 {
            return None;
        }
        seen |= 1 << (v - 1);
        out.push(v);
    }
    if out.len() < upto as usize {
        return None;
    }
    Some(out)
}

/// Merges two sorted factor lists into `(factor, exp_a, exp_b)`.
fn merge_factors(a: &[(Poly, u32)], b: &[(Poly, u32)]) -> Vec<(Poly, u32, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match cmp_poly(&a[i].0, &b[j].0) {
            Ordering::Less => {
                out.push((a[i].0.clone(), a[i].1, 0));
                i += 1;
            }
            Ordering::Greater => {
                out.push((b[j].0.clone(), 0, b[j].1));
                j += 1;
            }
            Ordering::Equal => {
                out.push((a[i].0.clone(), a[i].1, b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().map(|f| (f.0.clone(), f.1, 0)));
    out.extend(b[j..].iter().map(|f| (f.0.clone(), 0, f.1)));
    out
}

/// Turns a list of normalized factors (with exponents for two operands) into
/// a pairwise coprime basis expressing the same products.
fn refine_coprime(mut ps: Vec<(Poly, [u32; 2])>) -> Vec<(Poly, [u32; 2])> {
    'outer: loop {
        for i in 0..ps.len() {
            for j in (i + 1)..ps.len() {
                let (a, b) = (&ps[i].0, &ps[j].0);
                let g = match (is_affine(a), is_affine(b)) {
                    (true, true) => {
                        if a == b {
                            a.clone()
                        } else {
                            continue;
                        }
                    }
                    (true, false) => {
                        if b.div_exact(a).is_none() {
                            continue;
                        }
                        a.clone()
                    }
                    (false, true) => {
                        if a.div_exact(b).is_none() {
                            continue;
                        }
                        b.clone()
                    }
                    (false, false) => poly_gcd(a, b),
                };
                if g.is_constant() {
                    continue;
                }
                let (ei, ej) = (ps[i].1, ps[j].1);
                let qi = ps[i].0.div_exact(&g).expect("gcd divides");
                let qj = ps[j].0.div_exact(&g).expect("gcd divides");
                ps.swap_remove(j);
                ps.swap_remove(i);
                ps.push((g, [ei[0] + ej[0], ei[1] + ej[1]]));
                if !qi.is_constant() {
                    ps.push((qi, ei));
                }
                if !qj.is_constant() {
                    ps.push((qj, ej));
                }
                continue 'outer;
            }
        }
        return ps;
    }
}

/// Removes every common factor of `num` and `∏ factors`, keeping the factor list coprime.
fn cancel_common(num: &mut Poly, factors: &mut Vec<(Poly, u32)>) {
    let mut idx = 0;
    while idx < factors.len() {
        if num.is_constant() {
            return;
        }
        let (p, e) = (factors[idx].0.clone(), factors[idx].1);
        if e == 0 {
            idx += 1;
            continue;
        }
        if is_affine(&p) {
            factors[idx].1 -= strip_factor(num, &p, e);
            idx += 1;
            continue;
        }
        let h = poly_gcd(num, &p);
        if h.is_constant() {
            idx += 1;
            continue;
        }
        *num = num.div_exact(&h).expect("gcd divides numerator");
        if h == p {
            factors[idx].1 -= 1;
            continue;
        }
        let rest = p.div_exact(&h).expect("gcd divides factor");
        factors.swap_remove(idx);
        let mut local = vec![(h, [e - 1, 0]), (rest, [e, 0])];
        local.retain(|x| x.1[0] > 0);
        for (q, [m, _]) in refine_coprime(local) {
            factors.push((q, m));
        }
        idx = 0;
    }
}

/// Splits a primitive denominator into pairwise coprime factors: variables,
/// hinted and discovered affine factors, and at most one non-affine remainder.
fn split_denominator(d: Poly, hints: &[Poly]) -> Vec<(Poly, u32)> {
    let mut out: Vec<(Poly, u32)> = Vec::new();
    if d.is_constant() {
        return out;
    }
    let mono = d.monomial_content();
    let mut rest = d;
    if !mono.is_one() {
        let mp = Poly::from_terms(vec![(mono.clone(), Rational::one())]);
        rest = rest.div_exact(&mp).expect("monomial content divides");
        for (i, &e) in mono.exps().iter().enumerate() {
            if e > 0 {
                out.push((Poly::var(i as u32 + 1), e as u32));
            }
        }
    }
    let try_factor = |rest: &mut Poly, f: &Poly, out: &mut Vec<(Poly, u32)>| {
        if rest.is_constant() || out.iter().any(|x| &x.0 == f) {
            return;
        }
        let k = strip_factor(rest, f, u32::MAX);
        if k > 0 {
            out.push((f.clone(), k));
        }
    };
    for h in hints {
        try_factor(&mut rest, h, &mut out);
    }
    if rest.total_degree() > 1 {
        for f in candidate_linear_factors(rest.max_var()) {
            if rest.total_degree() <= 1 {
                break;
            }
            try_factor(&mut rest, &f, &mut out);
        }
    }
    let (k, rest) = rest.primitive();
    debug_assert!(k.signum() > 0);
    if !rest.is_constant() {
        out.push((rest, 1));
    }
    out
}

/// Affine forms commonly produced by flexions: `x_i ± x_j` and runs `x_i + … + x_j`.
fn candidate_linear_factors(n: u32) -> Vec<Poly> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            out.push(Poly::var(i).sub(&Poly::var(j)));
            out.push(Poly::var(i).add(&Poly::var(j)));
        }
    }
    for i in 1..=n {
        let mut s = Poly::var(i);
        for j in (i + 1)..=n {
            s = s.add(&Poly::var(j));
            if j > i + 1 {
                out.push(s.clone());
            }
        }
    }
    out
}

impl PartialEq for RatFun {
    fn eq(&self, other: &Self) -> bool {
        if self.num != other.num {
            return false;
        }
        if !self.general && !other.general {
            return self.factors == other.factors;
        }
        self.den() == other.den()
    }
}

impl Eq for RatFun {}

impl Default for RatFun {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Rational> for RatFun {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl From<Poly> for RatFun {
    fn from(p: Poly) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Family::V))
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Family::X))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(i: u32) -> RatFun {
        RatFun::var(i)
    }

    fn lf(t: &[(u32, i64)]) -> LinForm {
        LinForm::from_terms(t.iter().copied())
    }

    fn inv(f: &RatFun) -> RatFun {
        f.inv().unwrap()
    }

    #[test]
    fn common_denominator() {
        let s = inv(&v(1)).add(&inv(&v(2)));
        assert_eq!(s.render(Family::V), "(v1+v2)/(v1*v2)");
    }

    #[test]
    fn inverse_cancels() {
        assert!(v(1).mul(&inv(&v(1))).is_one());
        assert_eq!(RatFun::zero().inv(), Err(ExactError::DivisionByZero));
    }

    #[test]
    fn antisymmetric_pair_cancels() {
        let a = RatFun::inv_linform(&lf(&[(2, 1), (1, -1)])).unwrap();
        let b = RatFun::inv_linform(&lf(&[(1, 1), (2, -1)])).unwrap();
        assert!(a.add(&b).is_zero());
    }

    #[test]
    fn substitution_cases() {
        let f = inv(&v(1));
        let g = f.subst(&[lf(&[(2, 1), (1, -1)])]).unwrap();
        assert_eq!(g.render(Family::V), "-1/(v1-v2)");
        let p = inv(&v(1).mul(&v(2)));
        let q = p.subst(&[LinForm::var(1), LinForm::var(1)]).unwrap();
        assert_eq!(q.render(Family::V), "1/v1^2");
        let h = RatFun::inv_linform(&lf(&[(2, 1), (1, -1)])).unwrap();
        assert_eq!(
            h.subst(&[LinForm::var(1), LinForm::var(1)]),
            Err(ExactError::PoleAtSubstitution)
        );
    }

    #[test]
    fn cancellation_after_substitution() {
        let f = RatFun::from_linform(&lf(&[(1, 1), (2, 1)]))
            .div(&v(1).mul(&RatFun::from_linform(&lf(&[(1, 1), (2, 3)]))))
            .unwrap();
        let g = f.subst(&[LinForm::var(1), lf(&[(1, -1)])]).unwrap();
        assert_eq!(g, RatFun::zero());
        let h = f.subst(&[LinForm::var(1), LinForm::var(1)]).unwrap();
        assert_eq!(h.render(Family::V), "(1/2)/v1");
    }

    #[test]
    fn general_factor_path() {
        let q = Poly::var(1).mul(&Poly::var(1)).add(&Poly::var(2));
        let f = RatFun::new(Poly::one(), q.clone()).unwrap();
        let g = RatFun::new(Poly::var(3), q.clone()).unwrap();
        let s = f.add(&g);
        assert_eq!(s, RatFun::new(Poly::var(3).add(&Poly::one()), q.clone()).unwrap());
        let back = s.mul(&RatFun::from_poly(q));
        assert_eq!(back, RatFun::from_poly(Poly::var(3).add(&Poly::one())));
    }

    #[test]
    fn equality_independent_of_factor_discovery() {
        let d = Poly::var(1).sub(&Poly::var(2)).mul(&Poly::var(1).add(&Poly::var(2)));
        let a = RatFun::new(Poly::one(), d).unwrap();
        let b = inv(&RatFun::from_linform(&lf(&[(1, 1), (2, -1)])))
            .mul(&inv(&RatFun::from_linform(&lf(&[(1, 1), (2, 1)]))));
        assert_eq!(a, b);
    }

    fn arb_lin() -> impl Strategy<Value = RatFun> {
        (-2i64..3, -2i64..3, -2i64..3, -1i64..2).prop_map(|(a, b, c, k)| {
            RatFun::from_poly(
                LinForm::from_terms([(1, a), (2, b), (3, c)])
                    .to_poly()
                    .add(&Poly::constant(Rational::from_int(k))),
            )
        })
    }

    fn arb_rf() -> impl Strategy<Value = RatFun> {
        (arb_lin(), arb_lin(), arb_lin(), -3i64..4).prop_map(|(n, d1, d2, c)| {
            let mut f = n.add(&RatFun::from_int(c));
            for d in [d1, d2] {
                if !d.is_zero() {
                    f = f.div(&d).unwrap();
                }
            }
            f
        })
    }

    /// Denominators with a non-affine factor.
    fn arb_general() -> impl Strategy<Value = RatFun> {
        (arb_lin(), arb_lin(), arb_lin(), 1i64..3).prop_map(|(n, d1, d2, c)| {
            let den = d1.mul(&d2).add(&RatFun::from_int(c));
            n.div(&den).unwrap_or(n)
        })
    }

    fn den_rebuild(f: &RatFun) -> RatFun {
        RatFun::new(f.num().clone(), f.den()).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]
        #[test]
        fn field_axioms(a in arb_rf(), b in arb_rf(), c in arb_rf()) {
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert!(a.sub(&a).is_zero());
            if !a.is_zero() {
                prop_assert!(a.mul(&a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn normalization_is_idempotent(a in arb_rf(), b in arb_rf()) {
            let s = a.add(&b);
            prop_assert_eq!(den_rebuild(&s), s.clone());
            let (k, d) = s.den().primitive();
            prop_assert!(k.is_one());
            prop_assert_eq!(d, s.den());
            prop_assert!(poly_gcd(s.num(), &s.den()).is_one());
        }

        #[test]
        fn substitution_is_a_homomorphism(a in arb_rf(), b in arb_rf(), p in -2i64..3, q in -2i64..3) {
            let map = [lf(&[(1, 1), (4, p)]), lf(&[(2, 1), (4, q)]), lf(&[(3, 1), (1, 1)])];
            let (Ok(sa), Ok(sb)) = (a.subst(&map), b.subst(&map)) else { return Ok(()); };
            if let Ok(s) = a.add(&b).subst(&map) {
                prop_assert_eq!(s, sa.add(&sb));
            }
            if let Ok(m) = a.mul(&b).subst(&map) {
                prop_assert_eq!(m, sa.mul(&sb));
            }
        }

        #[test]
        fn general_factors_obey_field_axioms(a in arb_general(), b in arb_general(), c in arb_rf()) {
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert!(a.add(&b).sub(&b).sub(&a).is_zero());
            let s = a.add(&b).add(&c);
            prop_assert_eq!(den_rebuild(&s), s.clone());
            prop_assert!(poly_gcd(s.num(), &s.den()).is_one());
        }

        #[test]
        fn sum_matches_fold(xs in proptest::collection::vec(arb_rf(), 0..6)) {
            let folded = xs.iter().fold(RatFun::zero(), |acc, x| acc.add(x));
            prop_assert_eq!(RatFun::sum(xs.iter()), folded);
        }

        #[test]
        fn rename_matches_subst(a in arb_rf()) {
            let map = [3u32, 1, 2];
            let forms: Vec<LinForm> = map.iter().map(|&i| LinForm::var(i)).collect();
            let polys: Vec<Poly> = forms.iter().map(|f| f.to_poly()).collect();
            let slow = RatFun::new(a.num().subst(&polys), a.den().subst(&polys)).unwrap();
            prop_assert_eq!(a.rename(&map), slow);
            prop_assert_eq!(a.shift(2), a.rename(&[3, 4, 5]));
        }
    }
}
