//! The flexion derivation `arit`, `preari_k`, the exponential `expari` and its
//! expansion through the coefficient families `Ex` and `C`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactalg::{RatFun, Rational};
use crate::flexion_ganit::{u_absorb_left, u_absorb_right, u_lower_by_first, u_lower_by_last};
use crate::mould::{Convention, Mould};
use crate::words::{interleavings, Word};
use crate::{Error, Result};

/// Which sign convention `arit` uses; the flipped one is a negative control.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AritVariant {
    #[default]
    Standard,
    /// Adds the second flexion sum instead of subtracting it.
    SignFlipped,
}

/// `arit(B)(A)(w) = Σ_{w=abc, b,c≠∅} A(a·⌈c) B(b⌋) − Σ_{w=abc, a,b≠∅} A(a⌉·c) B(⌊b)` in the U convention.
pub fn arit(b: &Mould, a: &Mould, variant: AritVariant) -> Result<Mould> {
    if a.convention() != Convention::U || b.convention() != Convention::U {
        return Err(Error::ConventionMismatch { expected: "U" });
    }
    if a.spec() != b.spec() || a.depth() != b.depth() {
        return Err(Error::SpecMismatch);
    }
    if !b.is_ari() {
        return Err(Error::NotInARI);
    }
    let second_sign = match variant {
        AritVariant::Standard => -1,
        AritVariant::SignFlipped => 1,
    };
    let out = a.map_cells(|r, sigmas, _| {
        let w = Word::generic(sigmas, 0);
        let mut parts = Vec::new();
        for i in 0..r {
            for j in i + 1..=r {
                let (x, y, z) = (w.slice(0, i), w.slice(i, j), w.slice(j, r));
                if j < r {
                    let bv = b.evaluate(&u_lower_by_first(&y, &z)?)?;
                    if !bv.is_zero() {
                        let av = a.evaluate(&x.concat(&u_absorb_left(&y, &z)?))?;
                        parts.push(av.mul(&bv));
                    }
                }
                if i > 0 {
                    let bv = b.evaluate(&u_lower_by_last(&x, &y)?)?;
                    if !bv.is_zero() {
                        let av = a.evaluate(&u_absorb_right(&x, &y)?.concat(&z))?;
                        parts.push(av.mul(&bv).scale(&Rational::from_int(second_sign)));
                    }
                }
            }
        }
        Ok(RatFun::sum(parts.iter()))
    })?;
    Ok(out.with_empty(Rational::zero()))
}

/// `preari(A, B) = arit(B)(A) + A × B`.
pub fn preari(a: &Mould, b: &Mould, variant: AritVariant) -> Result<Mould> {
    arit(b, a, variant)?.add(&a.mu(b)?)
}

/// `preari_0(M) = I`, `preari_k(M) = preari(preari_{k−1}(M), M)`.
pub fn preari_k(m: &Mould, k: usize, variant: AritVariant) -> Result<Mould> {
    let mut acc = Mould::identity(m.convention(), m.spec(), m.depth());
    for _ in 0..k {
        acc = preari(&acc, m, variant)?;
    }
    Ok(acc)
}

/// `expari(M) = Σ_k preari_k(M)/k!`, exact at depth `≤ R` for `M ∈ ARI`.
pub fn expari(m: &Mould, variant: AritVariant) -> Result<Mould> {
    if !m.is_ari() {
        return Err(Error::NotInARI);
    }
    let mut acc = Mould::identity(m.convention(), m.spec(), m.depth());
    let mut term = acc.clone();
    for k in 1..=m.depth() {
        term = preari(&term, m, variant)?;
        acc = acc.add(&term.scale(&Rational::factorial(k as u32).recip()?))?;
    }
    Ok(acc)
}

/// `A_m = arit(A)^{m−1}(A)` for `m = 1..=max`.
pub fn arit_powers(a: &Mould, max: usize, variant: AritVariant) -> Result<Vec<Mould>> {
    let mut out = Vec::with_capacity(max);
    if max == 0 {
        return Ok(out);
    }
    out.push(a.clone());
    for _ in 1..max {
        let next = arit(a, out.last().expect("nonempty"), variant)?;
        out.push(next);
    }
    Ok(out)
}

/// `A_{m_1} × ⋯ × A_{m_r}` from precomputed powers.
fn product_of_powers(powers: &[Mould], c: &Composition) -> Result<Mould> {
    let first = &powers[0];
    let mut acc = Mould::identity(first.convention(), first.spec(), first.depth());
    for &m in &c.0 {
        acc = acc.mu(&powers[m as usize - 1])?;
    }
    Ok(acc)
}

/// `I + Σ_m Ex(m) A_{m_1} × ⋯ × A_{m_r}` over compositions of weight `≤ R`.
pub fn expari_expansion(a: &Mould, variant: AritVariant) -> Result<Mould> {
    if !a.is_ari() {
        return Err(Error::NotInARI);
    }
    let depth = a.depth();
    let powers = arit_powers(a, depth, variant)?;
    let mut acc = Mould::identity(a.convention(), a.spec(), depth);
    for k in 1..=depth {
        for c in compositions(k) {
            acc = acc.add(&product_of_powers(&powers, &c)?.scale(&ex_coeff(&c)))?;
        }
    }
    Ok(acc)
}

/// The series inverse of `expari`, solved one depth at a time.
pub fn logari(s: &Mould, variant: AritVariant) -> Result<Mould> {
    if !s.is_gari() {
        return Err(Error::NotInGARI);
    }
    let mut a = Mould::zero(s.convention(), s.spec(), s.depth());
    for r in 1..=s.depth() {
        // expari(A)_r = A_r + (terms in A_1..A_{r−1}).
        let lower = expari(&a, variant)?;
        let table: Vec<RatFun> = s
            .table(r)
            .iter()
            .zip(lower.table(r))
            .map(|(x, y)| x.sub(y))
            .collect();
        let mut tables: Vec<Vec<RatFun>> = (1..=s.depth()).map(|d| a.table(d).to_vec()).collect();
        tables[r - 1] = table;
        a = Mould::from_tables(s.convention(), s.spec(), Rational::zero(), tables)?;
    }
    Ok(a)
}

/// A sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition(pub Vec<u32>);

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::Parse(format!("composition parts must be positive: {parts:?}")));
        }
        Ok(Composition(parts))
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Composition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad composition `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Composition::new(parts)
    }
}

/// All compositions of `k ≥ 1`, ordered lexicographically.
pub fn compositions(k: usize) -> Vec<Composition> {
    fn go(rest: u32, cur: &mut Vec<u32>, out: &mut Vec<Composition>) {
        if rest == 0 {
            out.push(Composition(cur.clone()));
            return;
        }
        for first in 1..=rest {
            cur.push(first);
            go(rest - first, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        go(k as u32, &mut Vec::new(), &mut out);
    }
    out
}

/// `Ex(n) = 1/Π(n_i − 1)! · 1/((n_1+⋯+n_r)(n_2+⋯+n_r)⋯n_r)`.
pub fn ex_coeff(c: &Composition) -> Rational {
    let mut den = Rational::one();
    let mut tail = 0u32;
    for &n in c.0.iter().rev() {
        tail += n;
        den = &den * &Rational::factorial(n - 1);
        den = &den * &Rational::from_int(tail as i64);
    }
    den.recip().expect("positive denominator")
}

/// `C(m)` from its recurrence, with `C(1) = 1` and `C = 0` on any zero part.
pub fn c_coeff(c: &Composition) -> Rational {
    fn go(m: &[u32], memo: &mut HashMap<Vec<u32>, Rational>) -> Rational {
        if m.iter().any(|&x| x == 0) {
            return Rational::zero();
        }
        if m == [1] {
            return Rational::one();
        }
        if let Some(v) = memo.get(m) {
            return v.clone();
        }
        let v = if m.len() == 1 {
            go(&[m[0] - 1], memo)
        } else {
            let mut acc = Rational::zero();
            for i in 0..m.len() {
                let mut n = m.to_vec();
                n[i] -= 1;
                acc = &acc + &go(&n, memo);
            }
            if m[m.len() - 1] == 1 {
                acc = &acc + &go(&m[..m.len() - 1], memo);
            }
            acc
        };
        memo.insert(m.to_vec(), v.clone());
        v
    }
    go(&c.0, &mut HashMap::new())
}

/// Checks `Σ_k Sh(m,n;k) f(k) = f(m) f(n)` for nonempty `m, n` with total weight `≤ max_weight`.
/// Returns the first failing pair.
pub fn symmetral_family_failure<F>(f: F, max_weight: usize) -> Option<(Composition, Composition)>
where
    F: Fn(&Composition) -> Rational,
{
    for total in 2..=max_weight {
        for wm in 1..total {
            for m in compositions(wm) {
                for n in compositions(total - wm) {
                    let mut lhs = Rational::zero();
                    for pos in interleavings(m.0.len(), n.0.len()) {
                        let (mut i, mut j) = (0, 0);
                        let mut k = Vec::with_capacity(m.0.len() + n.0.len());
                        for p in 0..m.0.len() + n.0.len() {
                            if i < pos.len() && pos[i] == p {
                                k.push(m.0[i]);
                                i += 1;
                            } else {
                                k.push(n.0[j]);
                                j += 1;
                            }
                        }
                        lhs = &lhs + &f(&Composition(k));
                    }
                    if lhs != &f(&m) * &f(&n) {
                        return Some((m, n));
                    }
                }
            }
        }
    }
    None
}

pub fn is_symmetral_family<F>(f: F, max_weight: usize) -> bool
where
    F: Fn(&Composition) -> Rational,
{
    symmetral_family_failure(f, max_weight).is_none()
}

/// Solves `preari_k(A) = Σ_{|m|=k} C(m) A_{m_1}×⋯×A_{m_r}` for the coefficients by
/// evaluating every component at random rational points. `None` if the system is not
/// uniquely solvable or is inconsistent.
pub fn solve_c_coefficients(
    a: &Mould,
    k: usize,
    seed: u64,
    variant: AritVariant,
) -> Result<Option<Vec<(Composition, Rational)>>> {
    let comps = compositions(k);
    let powers = arit_powers(a, k.max(1), variant)?;
    let basis = comps
        .iter()
        .map(|c| product_of_powers(&powers, c))
        .collect::<Result<Vec<_>>>()?;
    let target = preari_k(a, k, variant)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for r in 1..=a.depth() {
        for idx in 0..a.spec().vector_count(r) {
            for _ in 0..3 {
                let point: Vec<Rational> = (0..r)
                    .map(|_| Rational::new(rng.gen_range(-97..=97), rng.gen_range(1..=31)))
                    .collect();
                let row: Option<Vec<Rational>> = basis.iter().map(|m| m.cell(r, idx).eval(&point)).collect();
                let (Some(row), Some(t)) = (row, target.cell(r, idx).eval(&point)) else {
                    continue;
                };
                rows.push(row);
                rhs.push(t);
            }
        }
    }
    Ok(solve_exact(rows, rhs).map(|x| comps.into_iter().zip(x).collect()))
}

/// The unique solution of an overdetermined consistent system over `Q`, by Gauss–Jordan elimination.
pub fn solve_exact(mut rows: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = rows.first().map_or(0, Vec::len);
    let mut pivot_row = 0;
    for col in 0..n {
        let p = (pivot_row..rows.len()).find(|&i| !rows[i][col].is_zero())?;
        rows.swap(pivot_row, p);
        rhs.swap(pivot_row, p);
        let inv = rows[pivot_row][col].recip().expect("nonzero pivot");
        for x in rows[pivot_row].iter_mut() {
            *x = &*x * &inv;
        }
        rhs[pivot_row] = &rhs[pivot_row] * &inv;
        for i in 0..rows.len() {
            if i != pivot_row && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for j in 0..n {
                    let d = &factor * &rows[pivot_row][j];
                    rows[i][j] = &rows[i][j] - &d;
                }
                let d = &factor * &rhs[pivot_row];
                rhs[i] = &rhs[i] - &d;
            }
        }
        pivot_row += 1;
    }
    if rhs[pivot_row..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(rhs[..n].to_vec())
}
