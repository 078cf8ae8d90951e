//! The two flexion markers in the V convention, and the U-convention markers used by `arit`.

use crate::exactalg::LinForm;
use crate::gamma::GammaElem;
use crate::words::{Letter, Word};
use crate::{Error, Result};

/// Which flexion marker to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flexion {
    /// `⌈a;b`: the last letter of `a` absorbs the decorations of `b`.
    UpperUl,
    /// `⌊a;b`: the forms of `b` measured relative to the last form of `a`.
    LowerLr,
}

fn product_of_sigmas(b: &Word, identity: &GammaElem) -> GammaElem {
    b.letters()
        .iter()
        .fold(identity.clone(), |acc, l| acc.mul(&l.sigma))
}

/// `⌈a;b` in the V convention: `a` with its last decoration multiplied by `Π σ(b)`.
pub fn upper_flex(a: &Word, b: &Word) -> Result<Word> {
    let last = a.last().ok_or(Error::EmptyAbsorber)?;
    if b.is_empty() {
        return Ok(a.clone());
    }
    let sigma = last.sigma.mul(&product_of_sigmas(b, &last.sigma.spec().identity()));
    let mut letters = a.letters().to_vec();
    let n = letters.len();
    letters[n - 1] = Letter::new(sigma, last.form.clone());
    Ok(Word::from_letters(letters))
}

/// `⌊a;b` in the V convention: `b` with every form replaced by `form − (last form of a)`.
pub fn lower_flex(a: &Word, b: &Word) -> Result<Word> {
    let last = a.last().ok_or(Error::EmptyAbsorber)?;
    Ok(Word::from_letters(
        b.letters()
            .iter()
            .map(|l| Letter::new(l.sigma.clone(), l.form.sub(&last.form))),
    ))
}

pub fn flex(a: &Word, b: &Word, which: Flexion) -> Result<Word> {
    match which {
        Flexion::UpperUl => upper_flex(a, b),
        Flexion::LowerLr => lower_flex(a, b),
    }
}

fn form_sum(b: &Word) -> LinForm {
    b.letters()
        .iter()
        .fold(LinForm::zero(), |acc, l| acc.add(&l.form))
}

/// U convention: `c` with its first form increased by the sum of the forms of its left neighbour `b`.
pub fn u_absorb_left(b: &Word, c: &Word) -> Result<Word> {
    let first = c.first().ok_or(Error::EmptyAbsorber)?;
    let mut letters = c.letters().to_vec();
    letters[0] = Letter::new(first.sigma.clone(), first.form.add(&form_sum(b)));
    Ok(Word::from_letters(letters))
}

/// U convention: `a` with its last form increased by the sum of the forms of its right neighbour `b`.
pub fn u_absorb_right(a: &Word, b: &Word) -> Result<Word> {
    let last = a.last().ok_or(Error::EmptyAbsorber)?;
    let mut letters = a.letters().to_vec();
    let n = letters.len();
    letters[n - 1] = Letter::new(last.sigma.clone(), last.form.add(&form_sum(b)));
    Ok(Word::from_letters(letters))
}

/// U convention: `b` with every decoration divided by the first decoration of its right neighbour `c`.
pub fn u_lower_by_first(b: &Word, c: &Word) -> Result<Word> {
    let s = &c.first().ok_or(Error::EmptyAbsorber)?.sigma;
    Ok(divide_sigmas(b, s))
}

/// U convention: `b` with every decoration divided by the last decoration of its left neighbour `a`.
pub fn u_lower_by_last(a: &Word, b: &Word) -> Result<Word> {
    let s = &a.last().ok_or(Error::EmptyAbsorber)?.sigma;
    Ok(divide_sigmas(b, s))
}

fn divide_sigmas(b: &Word, s: &GammaElem) -> Word {
    Word::from_letters(
        b.letters()
            .iter()
            .map(|l| Letter::new(l.sigma.div(s), l.form.clone())),
    )
}
