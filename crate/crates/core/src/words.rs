//! Decorated letters and words, formal word sums, the shuffle product and the
//! contracting shuffle product `⧢*` with their coefficient families.

use std::collections::btree_map::{BTreeMap, Entry};
use std::fmt;

use smallvec::SmallVec;

use crate::exactalg::{Family, LinForm, RatFun, Rational};
use crate::gamma::{GammaElem, GammaSpec};
use crate::{Error, Result};

/// A decoration `σ` paired with an integer linear form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub sigma: GammaElem,
    pub form: LinForm,
}

impl Letter {
    pub fn new(sigma: GammaElem, form: LinForm) -> Self {
        Letter { sigma, form }
    }

    pub fn render(&self, family: Family) -> String {
        format!("({}|{})", self.sigma, self.form.render(family))
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Family::V))
    }
}

/// A finite sequence of letters, ordered by length and then letterwise.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: SmallVec<[Letter; 4]>,
}

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(it: I) -> Self {
        Word {
            letters: it.into_iter().collect(),
        }
    }

    pub fn single(l: Letter) -> Self {
        Self::from_letters([l])
    }

    /// The word `((σ_1, x_{k+1}), …, (σ_r, x_{k+r}))` in fresh variables starting after `k`.
    pub fn generic(sigmas: &[GammaElem], offset: u32) -> Self {
        Self::from_letters(
            sigmas
                .iter()
                .enumerate()
                .map(|(i, s)| Letter::new(s.clone(), LinForm::var(offset + i as u32 + 1))),
        )
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn first(&self) -> Option<&Letter> {
        self.letters.first()
    }

    pub fn last(&self) -> Option<&Letter> {
        self.letters.last()
    }

    pub fn sigmas(&self) -> Vec<GammaElem> {
        self.letters.iter().map(|l| l.sigma.clone()).collect()
    }

    pub fn forms(&self) -> Vec<LinForm> {
        self.letters.iter().map(|l| l.form.clone()).collect()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Word { letters }
    }

    pub fn prepend(&self, l: &Letter) -> Word {
        let mut letters: SmallVec<[Letter; 4]> = SmallVec::with_capacity(self.len() + 1);
        letters.push(l.clone());
        letters.extend(self.letters.iter().cloned());
        Word { letters }
    }

    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word::from_letters(self.letters[from..to].iter().cloned())
    }

    /// `(self[..k], self[k..])`.
    pub fn split_at(&self, k: usize) -> (Word, Word) {
        (self.slice(0, k), self.slice(k, self.len()))
    }

    /// Drops the first letter (the word written `ω'`).
    pub fn tail(&self) -> Word {
        if self.is_empty() {
            Word::empty()
        } else {
            self.slice(1, self.len())
        }
    }

    pub fn reversed(&self) -> Word {
        Word::from_letters(self.letters.iter().rev().cloned())
    }

    pub fn render(&self, family: Family) -> String {
        let parts: Vec<String> = self.letters.iter().map(|l| l.render(family)).collect();
        format!("[{}]", parts.join(","))
    }

    /// Parses `[(0|v1),(1|v2-v1)]` against a decoration group.
    pub fn parse(s: &str, spec: &GammaSpec) -> Result<Word> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("word literal must be bracketed: `{s}`")))?
            .trim();
        let mut letters = Vec::new();
        let mut rest = inner;
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected `(` in word literal `{s}`")))?;
            let bar = body
                .find('|')
                .ok_or_else(|| Error::Parse(format!("expected `|` in word literal `{s}`")))?;
            let close = body[bar..]
                .find(')')
                .map(|k| k + bar)
                .ok_or_else(|| Error::Parse(format!("unclosed letter in `{s}`")))?;
            let sigma = spec.parse_element(&body[..bar])?;
            let form = parse_linform(&body[bar + 1..close])?;
            letters.push(Letter::new(sigma, form));
            rest = body[close + 1..].trim_start();
            if let Some(r) = rest.strip_prefix(',') {
                rest = r.trim_start();
            } else if !rest.is_empty() {
                return Err(Error::Parse(format!("expected `,` in word literal `{s}`")));
            }
        }
        Ok(Word::from_letters(letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.as_slice().cmp(other.letters.as_slice()))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Family::V))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Family::V))
    }
}

/// Parses an integer linear form such as `v2-v1`, `2*u3+u1` or `0`.
pub fn parse_linform(s: &str) -> Result<LinForm> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s == "0" {
        return Ok(LinForm::zero());
    }
    let bad = || Error::Parse(format!("bad linear form `{s}`"));
    let mut terms = Vec::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = 1i64;
        if bytes[i] == b'+' || bytes[i] == b'-' {
            if bytes[i] == b'-' {
                sign = -1;
            }
            i += 1;
        } else if i > 0 {
            return Err(bad());
        }
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let mut coeff = 1i64;
        if i > start {
            coeff = s[start..i].parse().map_err(|_| bad())?;
            if i < bytes.len() && bytes[i] == b'*' {
                i += 1;
            } else {
                return Err(bad());
            }
        }
        if i >= bytes.len() || !matches!(bytes[i], b'x' | b'u' | b'v') {
            return Err(bad());
        }
        i += 1;
        let vstart = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let var: u32 = s[vstart..i].parse().map_err(|_| bad())?;
        if var == 0 {
            return Err(bad());
        }
        terms.push((var, sign * coeff));
    }
    if terms.is_empty() {
        return Err(bad());
    }
    Ok(LinForm::from_terms(terms))
}

/// Finite linear combination of words with rational-function coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct FormalWordSum {
    terms: BTreeMap<Word, RatFun>,
}

impl FormalWordSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, RatFun::one())
    }

    pub fn term(w: Word, c: RatFun) -> Self {
        let mut s = Self::zero();
        s.add_term(w, c);
        s
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

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &RatFun)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> RatFun {
        self.terms.get(w).cloned().unwrap_or_else(RatFun::zero)
    }

    pub fn add_term(&mut self, w: Word, c: RatFun) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &FormalWordSum) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c.clone());
        }
    }

    /// Adds `k · other`.
    pub fn add_scaled(&mut self, other: &FormalWordSum, k: &RatFun) {
        if k.is_zero() {
            return;
        }
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c.mul(k));
        }
    }

    pub fn add(&self, other: &FormalWordSum) -> FormalWordSum {
        let mut s = self.clone();
        s.add_assign(other);
        s
    }

    pub fn sub(&self, other: &FormalWordSum) -> FormalWordSum {
        let mut s = self.clone();
        s.add_scaled(other, &RatFun::from_int(-1));
        s
    }

    pub fn scale(&self, k: &RatFun) -> FormalWordSum {
        let mut s = FormalWordSum::zero();
        s.add_scaled(self, k);
        s
    }

    /// `u · self` for a word `u`, concatenated on the left.
    pub fn left_mul(&self, u: &Word) -> FormalWordSum {
        FormalWordSum {
            terms: self.terms.iter().map(|(w, c)| (u.concat(w), c.clone())).collect(),
        }
    }

    /// `self · u` for a word `u`, concatenated on the right.
    pub fn right_mul(&self, u: &Word) -> FormalWordSum {
        FormalWordSum {
            terms: self.terms.iter().map(|(w, c)| (w.concat(u), c.clone())).collect(),
        }
    }

    /// Concatenation product of two sums.
    pub fn concat(&self, other: &FormalWordSum) -> FormalWordSum {
        let mut out = FormalWordSum::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1.mul(c2));
            }
        }
        out
    }

    /// Applies a linear map given on words.
    pub fn map_linear<F: FnMut(&Word) -> FormalWordSum>(&self, mut f: F) -> FormalWordSum {
        let mut out = FormalWordSum::zero();
        for (w, c) in &self.terms {
            out.add_scaled(&f(w), c);
        }
        out
    }

    /// `Σ c_w · f(w)`.
    pub fn pair<F: FnMut(&Word) -> Result<RatFun>>(&self, mut f: F) -> Result<RatFun> {
        let mut parts = Vec::with_capacity(self.terms.len());
        for (w, c) in &self.terms {
            let v = f(w)?;
            if !v.is_zero() {
                parts.push(v.mul(c));
            }
        }
        Ok(RatFun::sum(parts.iter()))
    }

    pub fn shuffle(&self, other: &FormalWordSum) -> FormalWordSum {
        self.bilinear(other, shuffle)
    }

    pub fn shuffle_star(&self, other: &FormalWordSum) -> FormalWordSum {
        self.bilinear(other, shuffle_star)
    }

    fn bilinear(
        &self,
        other: &FormalWordSum,
        op: fn(&Word, &Word) -> FormalWordSum,
    ) -> FormalWordSum {
        let mut out = FormalWordSum::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_scaled(&op(w1, w2), &c1.mul(c2));
            }
        }
        out
    }

    pub fn render(&self, family: Family) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("{} {}", c.render(family), w.render(family)))
            .collect();
        parts.join("\n")
    }
}

impl fmt::Debug for FormalWordSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("({c}){w}"))
            .collect();
        write!(f, "{{{}}}", parts.join(" + "))
    }
}

/// `w1 ⧢ w2`, an integer combination of all interleavings.
pub fn shuffle(w1: &Word, w2: &Word) -> FormalWordSum {
    suffix_table(w1, w2, |a, b, i, j, t| {
        let mut s = t[i + 1][j].left_mul(&Word::single(a[i].clone()));
        s.add_assign(&t[i][j + 1].left_mul(&Word::single(b[j].clone())));
        s
    })
}

/// `w1 ⧢* w2`: the shuffle with contraction terms
/// `1/(v-v') · {(σσ', v)(ω ⧢* η) − (σσ', v')(ω ⧢* η)}`, and zero whenever the
/// two head letters carry identical forms.
pub fn shuffle_star(w1: &Word, w2: &Word) -> FormalWordSum {
    suffix_table(w1, w2, |a, b, i, j, t| {
        let (x, y) = (&a[i], &b[j]);
        if x.form == y.form {
            return FormalWordSum::zero();
        }
        let mut s = t[i + 1][j].left_mul(&Word::single(x.clone()));
        s.add_assign(&t[i][j + 1].left_mul(&Word::single(y.clone())));
        let inner = &t[i + 1][j + 1];
        if !inner.is_zero() {
            let k = RatFun::inv_linform(&x.form.sub(&y.form)).expect("distinct forms");
            let sigma = x.sigma.mul(&y.sigma);
            let cx = Word::single(Letter::new(sigma.clone(), x.form.clone()));
            let cy = Word::single(Letter::new(sigma, y.form.clone()));
            s.add_scaled(&inner.left_mul(&cx), &k);
            s.add_scaled(&inner.left_mul(&cy), &k.neg());
        }
        s
    })
}

/// Fills `t[i][j] = w1[i..] ∘ w2[j..]` from the back, with the given step.
fn suffix_table<F>(w1: &Word, w2: &Word, step: F) -> FormalWordSum
where
    F: Fn(&[Letter], &[Letter], usize, usize, &Vec<Vec<FormalWordSum>>) -> FormalWordSum,
{
    let (a, b) = (w1.letters(), w2.letters());
    let (n, m) = (a.len(), b.len());
    let mut t = vec![vec![FormalWordSum::zero(); m + 1]; n + 1];
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            t[i][j] = if i == n {
                FormalWordSum::word(w2.slice(j, m))
            } else if j == m {
                FormalWordSum::word(w1.slice(i, n))
            } else {
                step(a, b, i, j, &t)
            };
        }
    }
    std::mem::take(&mut t[0][0])
}

/// `Sh(w1, w2; target)`: the number of ways `target` interleaves `w1` and `w2`.
pub fn sh_coeff(w1: &Word, w2: &Word, target: &Word) -> u64 {
    let (a, b, t) = (w1.letters(), w2.letters(), target.letters());
    let (n, m) = (a.len(), b.len());
    if n + m != t.len() {
        return 0;
    }
    let mut ways = vec![vec![0u64; m + 1]; n + 1];
    ways[n][m] = 1;
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            if i == n && j == m {
                continue;
            }
            let k = i + j;
            let mut c = 0;
            if i < n && a[i] == t[k] {
                c += ways[i + 1][j];
            }
            if j < m && b[j] == t[k] {
                c += ways[i][j + 1];
            }
            ways[i][j] = c;
        }
    }
    ways[0][0]
}

/// `Sh*(w1, w2; target)`.
pub fn shstar_coeff(w1: &Word, w2: &Word, target: &Word) -> RatFun {
    shuffle_star(w1, w2).coeff(target)
}

/// All interleavings of lengths `n` and `m`, as the sorted positions taken by the first word.
pub fn interleavings(n: usize, m: usize) -> Vec<SmallVec<[usize; 8]>> {
    fn go(
        n: usize,
        m: usize,
        pos: usize,
        cur: &mut SmallVec<[usize; 8]>,
        out: &mut Vec<SmallVec<[usize; 8]>>,
    ) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let placed_b = pos - cur.len();
        if placed_b < m {
            go(n, m, pos + 1, cur, out);
        }
        cur.push(pos);
        go(n, m, pos + 1, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    go(n, m, 0, &mut SmallVec::new(), &mut out);
    out
}

/// `Σ_α Sh(w1,w2;α) α` built from integer multiplicities, as a list of words (with repeats).
pub fn shuffle_words(w1: &Word, w2: &Word) -> Vec<Word> {
    let (a, b) = (w1.letters(), w2.letters());
    interleavings(a.len(), b.len())
        .into_iter()
        .map(|pos| {
            let mut ia = 0;
            let mut ib = 0;
            let mut letters: SmallVec<[Letter; 4]> = SmallVec::new();
            for k in 0..a.len() + b.len() {
                if ia < pos.len() && pos[ia] == k {
                    letters.push(a[ia].clone());
                    ia += 1;
                } else {
                    letters.push(b[ib].clone());
                    ib += 1;
                }
            }
            Word { letters }
        })
        .collect()
}

/// Integer scalar as a coefficient.
pub fn int_coeff(n: i64) -> RatFun {
    RatFun::constant(Rational::from_int(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z2() -> GammaSpec {
        GammaSpec::cyclic(2)
    }

    fn l(s: u32, v: u32) -> Letter {
        Letter::new(z2().element_at(s), LinForm::var(v))
    }

    fn w(ls: &[Letter]) -> Word {
        Word::from_letters(ls.iter().cloned())
    }

    /// Direct transcription of the recursive definition, used as an oracle.
    fn shuffle_oracle(x: &[Letter], y: &[Letter]) -> Vec<Vec<Letter>> {
        if x.is_empty() {
            return vec![y.to_vec()];
        }
        if y.is_empty() {
            return vec![x.to_vec()];
        }
        let mut out = Vec::new();
        for mut t in shuffle_oracle(&x[1..], y) {
            t.insert(0, x[0].clone());
            out.push(t);
        }
        for mut t in shuffle_oracle(x, &y[1..]) {
            t.insert(0, y[0].clone());
            out.push(t);
        }
        out
    }

    #[test]
    fn reference_shuffles() {
        let (a, b, c) = (l(0, 1), l(1, 2), l(0, 3));
        let s = shuffle(&w(&[a.clone()]), &w(&[b.clone()]));
        assert_eq!(s.len(), 2);
        assert!(s.coeff(&w(&[a.clone(), b.clone()])).is_one());
        assert!(s.coeff(&w(&[b.clone(), a.clone()])).is_one());
        let aa = shuffle(&w(&[a.clone()]), &w(&[a.clone()]));
        assert_eq!(aa.coeff(&w(&[a.clone(), a.clone()])), int_coeff(2));
        assert_eq!(shuffle(&Word::empty(), &w(&[a.clone(), b.clone()])), FormalWordSum::word(w(&[a.clone(), b.clone()])));
        assert_eq!(sh_coeff(&w(&[a.clone()]), &w(&[b.clone()]), &w(&[a.clone(), b.clone()])), 1);
        assert_eq!(sh_coeff(&w(&[a.clone()]), &w(&[a.clone()]), &w(&[a.clone(), a.clone()])), 2);
        let ab = w(&[a.clone(), b.clone()]);
        let all = shuffle_oracle(ab.letters(), &[c.clone()]);
        assert_eq!(all.len(), 3);
        assert_eq!(sh_coeff(&ab, &w(&[c.clone()]), &w(&[a, c, b])), 1);
    }

    #[test]
    fn reference_shuffle_star() {
        let (x, y) = (l(0, 1), l(1, 2));
        let s = shuffle_star(&w(&[x.clone()]), &w(&[y.clone()]));
        let k = RatFun::inv_linform(&LinForm::var(1).sub(&LinForm::var(2))).unwrap();
        let mut expected = FormalWordSum::zero();
        expected.add_term(w(&[x.clone(), y.clone()]), RatFun::one());
        expected.add_term(w(&[y.clone(), x.clone()]), RatFun::one());
        expected.add_term(w(&[l(1, 1)]), k.clone());
        expected.add_term(w(&[l(1, 2)]), k.neg());
        assert_eq!(s, expected);
        assert_eq!(shstar_coeff(&w(&[x.clone()]), &w(&[y.clone()]), &w(&[l(1, 1)])), k);
        assert!(shstar_coeff(&w(&[x.clone()]), &w(&[y.clone()]), &w(&[y.clone(), x.clone()])).is_one());
        assert!(shstar_coeff(&w(&[x.clone()]), &w(&[y.clone()]), &w(&[l(0, 2)])).is_zero());
        // Equal forms annihilate the product.
        assert!(shuffle_star(&w(&[x.clone()]), &w(&[l(1, 1)])).is_zero());
        let u = w(&[x.clone(), y.clone()]);
        assert_eq!(shuffle_star(&Word::empty(), &u), FormalWordSum::word(u));
    }

    #[test]
    fn shuffle_star_is_not_associative() {
        // Distinct letters give an associative triple; a repeated form breaks it.
        let (a, b, c) = (w(&[l(0, 1)]), w(&[l(0, 1)]), w(&[l(0, 2)]));
        let assoc = |a: &Word, b: &Word, c: &Word| {
            let (fa, fb, fc) = (
                FormalWordSum::word(a.clone()),
                FormalWordSum::word(b.clone()),
                FormalWordSum::word(c.clone()),
            );
            fa.shuffle_star(&fb).shuffle_star(&fc) == fa.shuffle_star(&fb.shuffle_star(&fc))
        };
        assert!(!assoc(&a, &b, &c));
        assert!(assoc(&w(&[l(0, 1)]), &w(&[l(1, 2)]), &w(&[l(0, 3)])));
    }

    #[test]
    fn word_literals_round_trip() {
        let spec = z2();
        let word = Word::parse("[(0|v1), (1|v2-v1)]", &spec).unwrap();
        assert_eq!(word.len(), 2);
        assert_eq!(word.letters()[1].form, LinForm::from_terms([(2, 1), (1, -1)]));
        assert_eq!(word.render(Family::V), "[(0|v1),(1|-v1+v2)]");
        assert_eq!(Word::parse(&word.render(Family::V), &spec).unwrap(), word);
        assert_eq!(Word::parse("[]", &spec).unwrap(), Word::empty());
        assert!(Word::parse("[(0|v1)", &spec).is_err());
        assert!(Word::parse("[(0|v0)]", &spec).is_err());
        assert_eq!(parse_linform("2*u3+u1").unwrap(), LinForm::from_terms([(1, 1), (3, 2)]));
    }

    #[test]
    fn word_order_is_length_then_letters() {
        let short = w(&[l(1, 5)]);
        let long = w(&[l(0, 1), l(0, 2)]);
        assert!(short < long);
        assert!(w(&[l(0, 1)]) < w(&[l(1, 1)]));
        assert!(w(&[l(0, 1)]) < w(&[l(0, 2)]));
    }

    /// All splittings of a word into `r` consecutive (possibly empty) pieces.
    fn splittings(word: &Word, r: usize) -> Vec<Vec<Word>> {
        if r == 1 {
            return vec![vec![word.clone()]];
        }
        let mut out = Vec::new();
        for k in 0..=word.len() {
            let (head, rest) = word.split_at(k);
            for mut tail in splittings(&rest, r - 1) {
                tail.insert(0, head.clone());
                out.push(tail);
            }
        }
        out
    }

    fn check_factorization(omega: &Word, eta: &Word, star: bool) {
        let product = if star { shuffle_star(omega, eta) } else { shuffle(omega, eta) };
        let coeff = |a: &Word, b: &Word, t: &Word| -> RatFun {
            if star {
                shstar_coeff(a, b, t)
            } else {
                int_coeff(sh_coeff(a, b, t) as i64)
            }
        };
        for (target, c) in product.terms() {
            for r in 2..=3 {
                for alphas in splittings(target, r) {
                    let mut total = RatFun::zero();
                    for os in splittings(omega, r) {
                        for es in splittings(eta, r) {
                            let mut t = RatFun::one();
                            for i in 0..r {
                                t = t.mul(&coeff(&os[i], &es[i], &alphas[i]));
                                if t.is_zero() {
                                    break;
                                }
                            }
                            total = total.add(&t);
                        }
                    }
                    assert_eq!(&total, c, "{omega:?} {eta:?} -> {alphas:?}");
                }
            }
        }
    }

    #[test]
    fn coefficient_factorization() {
        let spec = z2();
        for n in 1..=2 {
            for m in 1..=(4 - n) {
                for sv in spec.vectors(n + m) {
                    let omega = Word::generic(&sv[..n], 0);
                    let eta = Word::generic(&sv[n..], n as u32);
                    check_factorization(&omega, &eta, false);
                    check_factorization(&omega, &eta, true);
                }
            }
        }
        // Repeated letters exercise integer multiplicities.
        let a = l(0, 1);
        check_factorization(&w(&[a.clone(), a.clone()]), &w(&[a.clone(), l(1, 2)]), false);
    }

    fn arb_word(max_len: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec((0u32..2, 1u32..4), 0..=max_len)
            .prop_map(|v| w(&v.into_iter().map(|(s, x)| l(s, x)).collect::<Vec<_>>()))
    }

    fn arb_distinct_words() -> impl Strategy<Value = (Word, Word, Word)> {
        (proptest::collection::vec(0u32..2, 3..=6), 1usize..3, 1usize..3).prop_map(|(sv, n, m)| {
            let spec = z2();
            let sig: Vec<GammaElem> = sv.iter().map(|&s| spec.element_at(s)).collect();
            let k = sig.len();
            let n = n.min(k - 2);
            let m = m.min(k - n - 1);
            (
                Word::generic(&sig[..n], 0),
                Word::generic(&sig[n..n + m], n as u32),
                Word::generic(&sig[n + m..], (n + m) as u32),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn shuffle_matches_oracle(a in arb_word(3), b in arb_word(3)) {
            let mut expected = FormalWordSum::zero();
            for t in shuffle_oracle(a.letters(), b.letters()) {
                expected.add_term(Word::from_letters(t), RatFun::one());
            }
            let s = shuffle(&a, &b);
            prop_assert_eq!(&s, &expected);
            let mass: u64 = s.terms().map(|(t, _)| sh_coeff(&a, &b, t)).sum();
            let n = (a.len() + b.len()) as u64;
            let binom = (1..=a.len() as u64).fold(1u64, |acc, i| acc * (n - i + 1) / i);
            prop_assert_eq!(mass, binom);
        }

        #[test]
        fn shuffle_is_commutative_and_associative(a in arb_word(3), b in arb_word(3), c in arb_word(3)) {
            let (fa, fb, fc) = (FormalWordSum::word(a), FormalWordSum::word(b), FormalWordSum::word(c));
            prop_assert_eq!(fa.shuffle(&fb), fb.shuffle(&fa));
            prop_assert_eq!(fa.shuffle(&fb).shuffle(&fc), fa.shuffle(&fb.shuffle(&fc)));
        }

        #[test]
        fn shuffle_star_is_commutative((a, b, _c) in arb_distinct_words()) {
            prop_assert_eq!(shuffle_star(&a, &b), shuffle_star(&b, &a));
        }

        #[test]
        fn shuffle_star_commutes_on_arbitrary_words(a in arb_word(3), b in arb_word(3)) {
            prop_assert_eq!(shuffle_star(&a, &b), shuffle_star(&b, &a));
        }
    }
}
