//! The substitution operator `ganit_v(B)`, its word expansion `g_B`, and the identities
//! relating `g` to the shuffle products.

use crate::exactalg::RatFun;
use crate::mould::{Convention, Mould};
use crate::words::{shuffle_words, FormalWordSum, Word};
use crate::{Error, Result};

use super::decomp::{decompositions, DecompositionKind, HeadFilter};
use super::flexion::{lower_flex, upper_flex};
use super::named::WordFunction;

/// `W_B(a_1;b_1;…;a_s;b_s) = Π B(⌊a_i;b_i) · (⌈a_1;b_1 ⋯ ⌈a_s;b_s)`; `None` when a weight vanishes.
pub fn w_term<B: WordFunction + ?Sized>(b: &B, parts: &[Word]) -> Result<Option<(Word, RatFun)>> {
    debug_assert!(parts.len() % 2 == 0);
    let mut coeff = RatFun::one();
    let mut word = Word::empty();
    for pair in parts.chunks(2) {
        let low = lower_flex(&pair[0], &pair[1])?;
        if !low.is_empty() {
            let c = b.eval_word(&low)?;
            if c.is_zero() {
                return Ok(None);
            }
            coeff = coeff.mul(&c);
        }
        word = word.concat(&upper_flex(&pair[0], &pair[1])?);
    }
    Ok(Some((word, coeff)))
}

/// `g_B(w) = Σ_{s≥1} Σ_{u ∈ D_{2s}(w)} W_B(u)`, with `g_B(∅) = ∅`.
pub fn g_expand<B: WordFunction + ?Sized>(b: &B, w: &Word) -> Result<FormalWordSum> {
    if w.is_empty() {
        return Ok(FormalWordSum::word(Word::empty()));
    }
    let mut out = FormalWordSum::zero();
    for s in 1..=w.len() {
        for d in decompositions(w, 2 * s, DecompositionKind::D, HeadFilter::Any) {
            if let Some((word, c)) = w_term(b, &d.parts)? {
                out.add_term(word, c);
            }
        }
    }
    Ok(out)
}

/// `g_B` extended linearly to formal sums.
pub fn g_linear<B: WordFunction + ?Sized>(b: &B, sum: &FormalWordSum) -> Result<FormalWordSum> {
    let mut out = FormalWordSum::zero();
    for (w, c) in sum.terms() {
        out.add_scaled(&g_expand(b, w)?, c);
    }
    Ok(out)
}

/// `ganit_v(B)` with the word expansions of every generic cell precomputed.
pub struct Ganit {
    b: Mould,
    /// `expansions[r-1][idx]` is `g_B` at the generic word of decoration `idx`.
    expansions: Vec<Vec<FormalWordSum>>,
}

impl Ganit {
    pub fn new(b: &Mould) -> Result<Ganit> {
        if b.convention() != Convention::V {
            return Err(Error::ConventionMismatch { expected: "V" });
        }
        if !b.is_gari() {
            return Err(Error::NotInGARI);
        }
        let spec = b.spec();
        let mut expansions = Vec::with_capacity(b.depth());
        for r in 1..=b.depth() {
            let t = spec
                .vectors(r)
                .map(|s| g_expand(b, &Word::generic(&s, 0)))
                .collect::<Result<Vec<_>>>()?;
            expansions.push(t);
        }
        Ok(Ganit {
            b: b.clone(),
            expansions,
        })
    }

    pub fn weight(&self) -> &Mould {
        &self.b
    }

    /// `g_B` at the generic word of the `idx`-th decoration vector of length `r`.
    pub fn expansion(&self, r: usize, idx: usize) -> &FormalWordSum {
        &self.expansions[r - 1][idx]
    }

    pub fn apply(&self, a: &Mould) -> Result<Mould> {
        if a.convention() != Convention::V {
            return Err(Error::ConventionMismatch { expected: "V" });
        }
        if a.spec() != self.b.spec() || a.depth() != self.b.depth() {
            return Err(Error::SpecMismatch);
        }
        a.map_cells(|r, sigmas, _| {
            let idx = a.spec().vector_index(sigmas);
            self.expansions[r - 1][idx].pair(|u| a.evaluate(u))
        })
    }
}

/// `ganit_v(B)(A)`.
pub fn ganit_apply(b: &Mould, a: &Mould) -> Result<Mould> {
    Ganit::new(b)?.apply(a)
}

/// Right side of `g(ω_1,ω_2,w'') = (ω_1) g(ω_2,w'') + B(⌊ω_1;ω_2) g(⌈ω_1;ω_2, w'')`.
pub fn g_recurrence_rhs<B: WordFunction + ?Sized>(b: &B, w: &Word) -> Result<FormalWordSum> {
    assert!(w.len() >= 2, "the recurrence needs two letters");
    let (w1, rest) = w.split_at(1);
    let (w2, tail) = rest.split_at(1);
    let mut out = g_expand(b, &rest)?.left_mul(&w1);
    let c = b.eval_word(&lower_flex(&w1, &w2)?)?;
    let merged = upper_flex(&w1, &w2)?.concat(&tail);
    out.add_scaled(&g_expand(b, &merged)?, &c);
    Ok(out)
}

/// Right side of `g(w) = g(ω_1..ω_{r−1})(ω_r) + B(⌊ω_{r−1};ω_r) g(ω_1..ω_{r−2}, ⌈ω_{r−1};ω_r)`.
pub fn g_recurrence_rhs_right<B: WordFunction + ?Sized>(b: &B, w: &Word) -> Result<FormalWordSum> {
    let r = w.len();
    assert!(r >= 2, "the recurrence needs two letters");
    let (head, last) = w.split_at(r - 1);
    let (front, prev) = head.split_at(r - 2);
    let mut out = g_expand(b, &head)?.right_mul(&last);
    let c = b.eval_word(&lower_flex(&prev, &last)?)?;
    let merged = front.concat(&upper_flex(&prev, &last)?);
    out.add_scaled(&g_expand(b, &merged)?, &c);
    Ok(out)
}

/// `Σ_{s≥0} Σ_{(b_0;u) ∈ E_{2s+1}(w')} B(⌊ω_1;b_0) (⌈ω_1;b_0) W_B(u)`.
pub fn g_via_e<B: WordFunction + ?Sized>(b: &B, w: &Word) -> Result<FormalWordSum> {
    let (w1, wp) = w.split_at(1);
    let mut out = FormalWordSum::zero();
    for s in 0..=wp.len() {
        for d in decompositions(&wp, 2 * s + 1, DecompositionKind::E, HeadFilter::Any) {
            let head = [w1.clone(), d.parts[0].clone()];
            let Some((hw, hc)) = w_term(b, &head)? else { continue };
            let Some((tw, tc)) = w_term(b, &d.parts[1..])? else { continue };
            out.add_term(hw.concat(&tw), hc.mul(&tc));
        }
    }
    Ok(out)
}

/// Which shuffle the transfer formula applies to the inner mould.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerShuffle {
    Plain,
    Star,
}

/// `Σ_{p,q≥1} Σ_{D_{2p}(α)×D_{2q}(β)} Π B(⌊·) Π B(⌊·) · X(M)(⌈⋯; ⌈⋯)` with `X = Sh` or `Sh*`.
pub fn transfer_rhs<B: WordFunction + ?Sized>(
    b: &B,
    m: &Mould,
    alpha: &Word,
    beta: &Word,
    inner: InnerShuffle,
) -> Result<RatFun> {
    let side = |w: &Word| -> Result<Vec<(Word, RatFun)>> {
        let mut v = Vec::new();
        for p in 1..=w.len() {
            for d in decompositions(w, 2 * p, DecompositionKind::D, HeadFilter::Any) {
                if let Some(t) = w_term(b, &d.parts)? {
                    v.push(t);
                }
            }
        }
        Ok(v)
    };
    let (left, right) = (side(alpha)?, side(beta)?);
    let mut parts = Vec::new();
    for (x, c) in &left {
        for (y, d) in &right {
            let inner_value = match inner {
                InnerShuffle::Plain => {
                    let vals = shuffle_words(x, y)
                        .iter()
                        .map(|g| m.evaluate(g))
                        .collect::<Result<Vec<_>>>()?;
                    RatFun::sum(vals.iter())
                }
                InnerShuffle::Star => crate::words::shuffle_star(x, y).pair(|g| m.evaluate(g))?,
            };
            if !inner_value.is_zero() {
                parts.push(c.mul(d).mul(&inner_value));
            }
        }
    }
    Ok(RatFun::sum(parts.iter()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{LinForm, Rational};
    use crate::flexion_ganit::named::{anti, pari, NamedMould};
    use crate::gamma::GammaSpec;
    use crate::mould::random_mould;
    use crate::symmetry::{shstar_map, sh_map};
    use crate::words::{shuffle, shuffle_star};

    fn z2() -> GammaSpec {
        GammaSpec::cyclic(2)
    }

    fn generic(sig: &[u32], offset: u32) -> Word {
        let spec = z2();
        let s: Vec<_> = sig.iter().map(|&i| spec.element_at(i)).collect();
        Word::generic(&s, offset)
    }

    #[test]
    fn small_expansions_match_the_displays() {
        let pic = NamedMould::Pic;
        let w1 = generic(&[1], 0);
        assert_eq!(g_expand(&pic, &w1).unwrap(), FormalWordSum::word(w1.clone()));
        let w = generic(&[1, 1], 0);
        let (a, b) = w.split_at(1);
        let mut expected = FormalWordSum::word(w.clone());
        expected.add_term(
            upper_flex(&a, &b).unwrap(),
            RatFun::inv_linform(&LinForm::from_terms([(2, 1), (1, -1)])).unwrap(),
        );
        assert_eq!(g_expand(&pic, &w).unwrap(), expected);
        // The four schemes at depth 3.
        let w3 = generic(&[0, 1, 1], 0);
        let g3 = g_expand(&pic, &w3).unwrap();
        assert_eq!(g3.len(), 4);
        let mass = g3.terms().filter(|(u, _)| u.len() == 3).count();
        assert_eq!(mass, 1);
        assert!(g3.coeff(&w3).is_one());
        assert_eq!(g_expand(&pic, &Word::empty()).unwrap(), FormalWordSum::word(Word::empty()));
    }

    #[test]
    fn ganit_depth_two_and_unit() {
        let spec = z2();
        let b = random_mould(Convention::V, &spec, 3, Rational::one(), 1);
        let a = random_mould(Convention::V, &spec, 3, Rational::new(1, 2), 2);
        let g = ganit_apply(&b, &a).unwrap();
        assert_eq!(g.empty_value(), a.empty_value());
        for idx in 0..2 {
            assert_eq!(g.cell(1, idx), a.cell(1, idx));
        }
        for idx in 0..4 {
            let w = Word::generic(&spec.vector_at(2, idx), 0);
            let (w1, w2) = w.split_at(1);
            let expected = a.evaluate(&w).unwrap().add(
                &b.evaluate(&lower_flex(&w1, &w2).unwrap())
                    .unwrap()
                    .mul(&a.evaluate(&upper_flex(&w1, &w2).unwrap()).unwrap()),
            );
            assert_eq!(g.cell(2, idx), &expected);
        }
        let i = Mould::identity(Convention::V, &spec, 3);
        assert_eq!(ganit_apply(&b, &i).unwrap(), i);
        assert_eq!(ganit_apply(&a, &i), Err(Error::NotInGARI));
    }

    #[test]
    fn ganit_poc_inverts_ganit_pic() {
        let spec = z2();
        let pic = NamedMould::Pic.tabulate(&spec, 4);
        let poc = NamedMould::Poc.tabulate(&spec, 4);
        assert_eq!(pari(&anti(&NamedMould::Pij.tabulate(&spec, 4))), poc);
        let m = random_mould(Convention::V, &spec, 4, Rational::zero(), 5);
        let there = ganit_apply(&pic, &m).unwrap();
        assert_eq!(ganit_apply(&poc, &there).unwrap(), m);
        assert_eq!(ganit_apply(&pic, &ganit_apply(&poc, &m).unwrap()).unwrap(), m);
    }

    #[test]
    fn recurrences_and_equivalent_equation() {
        for sig in [&[0, 1][..], &[1, 1, 0], &[0, 1, 1, 0], &[1, 0, 1, 1]] {
            let w = generic(sig, 0);
            let g = g_expand(&NamedMould::Pic, &w).unwrap();
            assert_eq!(g_recurrence_rhs(&NamedMould::Pic, &w).unwrap(), g);
            let gp = g_expand(&NamedMould::Poc, &w).unwrap();
            assert_eq!(g_recurrence_rhs_right(&NamedMould::Poc, &w).unwrap(), gp);
            assert_eq!(g_via_e(&NamedMould::Pic, &w).unwrap(), g);
            let b = random_mould(Convention::V, &z2(), 4, Rational::one(), 3);
            assert_eq!(g_via_e(&b, &w).unwrap(), g_expand(&b, &w).unwrap());
        }
        // The left recurrence is specific to pic.
        let w = generic(&[0, 0, 0], 0);
        assert_ne!(
            g_recurrence_rhs(&NamedMould::Poc, &w).unwrap(),
            g_expand(&NamedMould::Poc, &w).unwrap()
        );
    }

    #[test]
    fn g_intertwines_the_shuffles() {
        let pic = NamedMould::Pic;
        let poc = NamedMould::Poc;
        for (sa, sb) in [(&[1][..], &[0][..]), (&[0, 1][..], &[1][..]), (&[1, 1][..], &[0, 1][..])] {
            let a = generic(sa, 0);
            let b = generic(sb, sa.len() as u32);
            let lhs = g_linear(&pic, &shuffle_star(&a, &b)).unwrap();
            let rhs = g_expand(&pic, &a).unwrap().shuffle(&g_expand(&pic, &b).unwrap());
            assert_eq!(lhs, rhs);
            let lhs = g_linear(&poc, &shuffle(&a, &b)).unwrap();
            let rhs = g_expand(&poc, &a).unwrap().shuffle_star(&g_expand(&poc, &b).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn transfer_formula_matches_direct_computation() {
        let spec = z2();
        let pic = NamedMould::Pic.tabulate(&spec, 4);
        let poc = NamedMould::Poc.tabulate(&spec, 4);
        let m = random_mould(Convention::V, &spec, 4, Rational::zero(), 8);
        let lhs = shstar_map(&ganit_apply(&pic, &m).unwrap()).unwrap();
        let lhs_poc = sh_map(&ganit_apply(&poc, &m).unwrap()).unwrap();
        for (r, s) in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3)] {
            for idx in (0..spec.vector_count(r + s)).step_by(3) {
                let sig = spec.vector_at(r + s, idx);
                let a = Word::generic(&sig[..r], 0);
                let b = Word::generic(&sig[r..], r as u32);
                let rhs = transfer_rhs(&pic, &m, &a, &b, InnerShuffle::Plain).unwrap();
                assert_eq!(lhs.entry(r, s, idx), &rhs);
                let rhs = transfer_rhs(&poc, &m, &a, &b, InnerShuffle::Star).unwrap();
                assert_eq!(lhs_poc.entry(r, s, idx), &rhs);
            }
        }
    }
}
