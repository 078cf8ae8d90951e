//! The registered checks, in report order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Ctx, Outcome, Suite, Tracker};
use crate::ari_exp::{
    arit, c_coeff, compositions, ex_coeff, expari, expari_expansion, logari, solve_c_coefficients,
    symmetral_family_failure,
};
use crate::exactalg::{LinForm, RatFun, Rational};
use crate::flexion_ganit::{
    decompositions, drop_head, g_expand, g_linear, g_recurrence_rhs, g_recurrence_rhs_right, g_via_e,
    lower_flex, prepend_head, strip_head, transfer_rhs, upper_flex, Decomposition, DecompositionKind, Ganit,
    HeadFilter, InnerShuffle, NamedMould, WordFunction,
};
use crate::gamma::{render_vector, GammaSpec};
use crate::mould::{random_mould, Convention, Mould};
use crate::symmetry::{
    check_symmetry_via_dimould, random_structured, sh_map, shstar_map, tensor, Dimould, StructuredKind,
    SymmetryKind,
};
use crate::words::{shuffle, shuffle_star, Letter, Word};
use crate::{Error, Result};

type CheckFn = fn(&Ctx, &mut Tracker) -> Result<Outcome>;

pub(super) struct Check {
    pub id: &'static str,
    pub suite: Suite,
    pub run: CheckFn,
}

macro_rules! registry {
    ($($suite:ident $id:literal => $f:path,)*) => {
        pub(super) static REGISTRY: &[Check] = &[$(Check { id: $id, suite: Suite::$suite, run: $f },)*];
    };
}

registry! {
    Examples "examples/A-alternal" => example_a,
    Examples "examples/paj-symmetral" => example_paj,
    Examples "examples/C-alternil" => example_c,
    Examples "examples/pic-symmetril" => example_pic,
    Examples "examples/pij-symmetral" => example_pij,
    Examples "examples/pic-not-symmetral" => example_pic_not_symmetral,
    Examples "examples/pic-identity-upperflex" => pic_upperflex,
    Examples "examples/pic-identity-lowerflex" => pic_lowerflex,
    Examples "examples/pic-identity-fay" => pic_fay,
    Examples "examples/pic-identity-decomposition" => pic_decomposition,
    Dimould "dimould/sh-homomorphism" => sh_homomorphism,
    Dimould "dimould/shstar-homomorphism" => shstar_homomorphism,
    Dimould "dimould/tensor-law" => tensor_law,
    Dimould "dimould/sh-unit" => sh_unit,
    Dimould "dimould/routes-agree" => routes_agree,
    Dimould "closure/mu-symmetral" => closure_mu_symmetral,
    Dimould "closure/mu-symmetril" => closure_mu_symmetril,
    Dimould "closure/lu-alternal" => closure_lu_alternal,
    Dimould "closure/lu-alternil" => closure_lu_alternil,
    Exp "exp/alternal-to-symmetral" => exp_alternal,
    Exp "exp/alternil-to-symmetril" => exp_alternil,
    Exp "exp/log-roundtrip" => exp_log_roundtrip,
    Ganit "ganit/morphism-pic" => morphism_pic,
    Ganit "ganit/morphism-poc" => morphism_poc,
    Ganit "ganit/morphism-random" => morphism_random,
    Ganit "ganit/inverse" => ganit_inverse,
    Ganit "ganit/exp-diagram" => ganit_diagram,
    Ganit "ganit/alternal-to-alternil" => ganit_al_il,
    Ganit "ganit/symmetral-to-symmetril" => ganit_as_is,
    Ganit "ganit/alternil-to-alternal" => ganit_il_al,
    Ganit "ganit/symmetril-to-symmetral" => ganit_is_as,
    Recurrences "recurrences/decomposition-partitions" => decomposition_partitions,
    Recurrences "recurrences/decomposition-bijections" => decomposition_bijections,
    Recurrences "recurrences/equivalent-equation" => equivalent_equation,
    Recurrences "recurrences/g-recurrence-pic" => g_recurrence_pic,
    Recurrences "recurrences/g-recurrence-poc" => g_recurrence_poc,
    Recurrences "recurrences/intertwine-pic" => intertwine_pic,
    Recurrences "recurrences/intertwine-poc" => intertwine_poc,
    Recurrences "recurrences/transfer-pic" => transfer_pic,
    Recurrences "recurrences/transfer-poc" => transfer_poc,
    Appendix "appendix/ex-symmetral" => ex_symmetral,
    Appendix "appendix/c-recurrence" => c_recurrence,
    Appendix "appendix/c-independent" => c_independent,
    Appendix "appendix/arit-derivation" => arit_derivation,
    Appendix "appendix/arit-alternal" => arit_alternal,
    Appendix "appendix/expari-expansion" => expari_is_expansion,
    Appendix "appendix/expari-symmetral" => expari_symmetral,
    Appendix "appendix/logari-roundtrip" => logari_roundtrip,
}

/// Every registered check id with its suite, in report order.
pub fn check_ids() -> Vec<(&'static str, Suite)> {
    REGISTRY.iter().map(|c| (c.id, c.suite)).collect()
}

/// Pairs per closure check and samples per structured-image check.
const STRUCTURED_SAMPLES: usize = 20;
const EXP_SAMPLES: usize = 5;
const MORPHISM_SAMPLES: usize = 3;
const PIC_SAMPLES: usize = 100;
const PIC_MAX_LEN: usize = 3;
const WEIGHT_BOUND: usize = 6;

// Seed tags; each random input family draws from its own stream.
const TAG_DIMOULD: u64 = 10;
const TAG_ROUTES: u64 = 11;
const TAG_MORPHISM: u64 = 12;
const TAG_INVERSE: u64 = 13;
const TAG_DIAGRAM: u64 = 14;
const TAG_RECURRENCE: u64 = 15;
const TAG_TRANSFER: u64 = 16;
const TAG_PIC: u64 = 17;
const TAG_APPENDIX: u64 = 20;

fn random_v(ctx: &Ctx, empty: Rational, tag: u64, i: u64) -> Mould {
    random_mould(Convention::V, ctx.spec(), ctx.depth(), empty, ctx.seed(tag, i))
}

fn random_u(ctx: &Ctx, empty: Rational, tag: u64, i: u64) -> Mould {
    random_mould(Convention::U, ctx.spec(), ctx.depth(), empty, ctx.seed(tag, i))
}

fn alternal_u(ctx: &Ctx, i: u64) -> Mould {
    random_structured(
        StructuredKind::Alternal,
        Convention::U,
        ctx.spec(),
        ctx.depth(),
        ctx.seed(TAG_APPENDIX, i),
    )
}

fn tagged(label: impl std::fmt::Display, w: Option<String>) -> Option<String> {
    w.map(|w| format!("{label} {w}"))
}

fn dimould_diff(a: &Dimould, b: &Dimould) -> Option<String> {
    a.first_difference(b)
        .map(|(r, s, sig)| format!("r={} s={} sigma={}", r, s, render_vector(&sig)))
}

/// Runs `f` on each index until the first witness.
fn first_witness(n: usize, mut f: impl FnMut(usize) -> Result<Option<String>>) -> Result<Option<String>> {
    for i in 0..n {
        if let Some(w) = f(i)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

// ---- named moulds ----

fn example(ctx: &Ctx, t: &mut Tracker, name: NamedMould, kind: SymmetryKind) -> Result<Outcome> {
    let m = name.tabulate(ctx.spec(), ctx.depth());
    t.track(&m);
    Ok(Outcome::from_witness(ctx.depth(), ctx.symmetry_failure(&m, kind)?))
}

fn example_a(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    example(ctx, t, NamedMould::A, SymmetryKind::Alternal)
}

fn example_paj(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    example(ctx, t, NamedMould::Paj, SymmetryKind::Symmetral)
}

fn example_c(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    example(ctx, t, NamedMould::C, SymmetryKind::Alternil)
}

fn example_pic(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    example(ctx, t, NamedMould::Pic, SymmetryKind::Symmetril)
}

fn example_pij(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    example(ctx, t, NamedMould::Pij, SymmetryKind::Symmetral)
}

/// Negative control: passes when a residual is found, and reports it.
fn example_pic_not_symmetral(ctx: &Ctx, _: &mut Tracker) -> Result<Outcome> {
    let m = NamedMould::Pic.tabulate(ctx.spec(), ctx.depth());
    Ok(match ctx.symmetry_failure(&m, SymmetryKind::Symmetral)? {
        Some(w) => Outcome {
            passed: true,
            depth: ctx.depth(),
            witness: Some(w),
        },
        None => Outcome::fail(ctx.depth(), "pic satisfied every symmetral identity".into()),
    })
}

// ---- pic identities on random letters ----

const PIC_VARS: u32 = 6;

fn random_letter(rng: &mut ChaCha8Rng, spec: &GammaSpec) -> Letter {
    let sigma = spec.element_at(rng.gen_range(0..spec.order()));
    loop {
        let form = LinForm::from_terms((1..=PIC_VARS).map(|v| (v, rng.gen_range(-3..=3))));
        if !form.is_zero() {
            return Letter::new(sigma, form);
        }
    }
}

fn random_word(rng: &mut ChaCha8Rng, spec: &GammaSpec, len: usize) -> Word {
    Word::from_letters((0..len).map(|_| random_letter(rng, spec)))
}

fn pic(w: &Word) -> Result<RatFun> {
    NamedMould::Pic.eval_word(w)
}

/// Draws 100 samples, redrawing any that hit a pole; `f` returns the residual and a label.
fn pic_identity(
    ctx: &Ctx,
    stream: u64,
    f: impl Fn(&mut ChaCha8Rng, &GammaSpec) -> Result<(RatFun, String)>,
) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed(TAG_PIC, stream));
    let mut done = 0;
    let mut poles = 0;
    while done < PIC_SAMPLES {
        match f(&mut rng, ctx.spec()) {
            Ok((residual, label)) => {
                if !ctx.is_zero(&residual) {
                    return Ok(Outcome::fail(
                        PIC_MAX_LEN,
                        format!("sample={done} {label} residual={}", residual.render(crate::exactalg::Family::V)),
                    ));
                }
                done += 1;
            }
            Err(Error::Exact(_)) => {
                poles += 1;
                if poles > 100 * PIC_SAMPLES {
                    return Ok(Outcome::fail(PIC_MAX_LEN, "too many samples hit a pole".into()));
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Outcome::pass(PIC_MAX_LEN))
}

fn pic_upperflex(ctx: &Ctx, _: &mut Tracker) -> Result<Outcome> {
    pic_identity(ctx, 1, |rng, spec| {
        let (a, b) = (random_word(rng, spec, 1), random_word(rng, spec, 1));
        let residual = pic(&upper_flex(&a, &b)?)?.sub(&pic(&a)?);
        Ok((residual, format!("omega1={a} omega2={b}")))
    })
}

fn pic_lowerflex(ctx: &Ctx, _: &mut Tracker) -> Result<Outcome> {
    pic_identity(ctx, 2, |rng, spec| {
        let (a, b) = (random_word(rng, spec, 1), random_word(rng, spec, 1));
        let residual = pic(&lower_flex(&a, &b)?)?.add(&pic(&lower_flex(&b, &a)?)?);
        Ok((residual, format!("omega1={a} omega2={b}")))
    })
}

fn pic_fay(ctx: &Ctx, _: &mut Tracker) -> Result<Outcome> {
    pic_identity(ctx, 3, |rng, spec| {
        let a = random_word(rng, spec, 1);
        let b = random_word(rng, spec, 1);
        let c = random_word(rng, spec, 1);
        let residual = RatFun::sum(
            [
                pic(&lower_flex(&a, &b.concat(&c))?)?,
                pic(&lower_flex(&b, &c.concat(&a))?)?,
                pic(&lower_flex(&c, &a.concat(&b))?)?,
            ]
            .iter(),
        );
        Ok((residual, format!("omega1={a} omega2={b} omega3={c}")))
    })
}

fn pic_decomposition(ctx: &Ctx, _: &mut Tracker) -> Result<Outcome> {
    pic_identity(ctx, 4, |rng, spec| {
        let (p, q) = (rng.gen_range(0..=PIC_MAX_LEN), rng.gen_range(0..=PIC_MAX_LEN));
        let (a, b) = (random_word(rng, spec, p), random_word(rng, spec, q));
        let residual = pic(&a)?.mul(&pic(&b)?).sub(&pic(&a.concat(&b))?);
        Ok((residual, format!("omega={a} eta={b}")))
    })
}

// ---- dimoulds ----

fn pair_empty(i: usize) -> (Rational, Rational) {
    (Rational::new(i as i64 + 1, 2), Rational::new(2 - i as i64, 3))
}

fn sh_homomorphism(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    let w = first_witness(MORPHISM_SAMPLES * 2, |i| {
        let conv = if i % 2 == 0 { Convention::V } else { Convention::U };
        let (e1, e2) = pair_empty(i);
        let m = random_mould(conv, ctx.spec(), ctx.depth(), e1, ctx.seed(TAG_DIMOULD, 2 * i as u64));
        let n = random_mould(conv, ctx.spec(), ctx.depth(), e2, ctx.seed(TAG_DIMOULD, 2 * i as u64 + 1));
        let mn = m.mu(&n)?;
        t.track(&mn);
        let lhs = sh_map(&mn)?;
        let rhs = sh_map(&m)?.mu(&sh_map(&n)?)?;
        Ok(tagged(format!("sample={i} convention={conv}"), dimould_diff(&lhs, &rhs)))
    })?;
    Ok(Outcome::from_witness(ctx.depth(), w))
}

fn shstar_homomorphism(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    let w = first_witness(MORPHISM_SAMPLES * 2, |i| {
        let (e1, e2) = pair_empty(i);
        let m = random_v(ctx, e1, TAG_DIMOULD + 100, 2 * i as u64);
        let n = random_v(ctx, e2, TAG_DIMOULD + 100, 2 * i as u64 + 1);
        let mn = m.mu(&n)?;
        t.track(&mn);
        let lhs = shstar_map(&mn)?;
        let rhs = shstar_map(&m)?.mu(&shstar_map(&n)?)?;
        Ok(tagged(format!("sample={i}"), dimould_diff(&lhs, &rhs)))
    })?;
    Ok(Outcome::from_witness(ctx.depth(), w))
}

fn tensor_law(ctx: &Ctx, _: &mut Tracker) -> Result<Outcome> {
    let w = first_witness(MORPHISM_SAMPLES, |i| {
        let ms: Vec<Mould> = (0..4)
            .map(|k| random_v(ctx, Rational::new(k as i64 - 1, 2), TAG_DIMOULD + 200, (4 * i + k) as u64))
            .collect();
        let lhs = tensor(&ms[0], &ms[1])?.mu(&tensor(&ms[2], &ms[3])?)?;
        let rhs = tensor(&ms[0].mu(&ms[2])?, &ms[1].mu(&ms[3])?)?;
        Ok(tagged(format!("sample={i}"), dimould_diff(&lhs, &rhs)))
    })?;
    Ok(Outcome::from_witness(ctx.depth(), w))
}

fn sh_unit(ctx: &Ctx, _: &mut Tracker) -> Result<Outcome> {
    let mut w = None;
    for conv in [Convention::V, Convention::U] {
        let i = Mould::identity(conv, ctx.spec(), ctx.depth());
        let ii = tensor(&i, &i)?;
        w = w.or(tagged(format!("Sh convention={conv}"), dimould_diff(&sh_map(&i)?, &ii)));
        if conv == Convention::V {
            w = w.or(tagged("Sh*", dimould_diff(&shstar_map(&i)?, &ii)));
        }
    }
    Ok(Outcome::from_witness(ctx.depth(), w))
}

fn routes_agree(ctx: &Ctx, _: &mut Tracker) -> Result<Outcome> {
    let w = first_witness(STRUCTURED_SAMPLES, |i| {
        let m = match i % 5 {
            0 => random_v(ctx, Rational::new(i as i64 % 3, 1), TAG_ROUTES, i as u64),
            1 => ctx.alternal()[i].clone(),
            2 => ctx.symmetral()[i].clone(),
            3 => ctx.alternil()[i].clone(),
            _ => ctx.symmetril()[i].clone(),
        };
        for kind in SymmetryKind::ALL {
            let direct = ctx.symmetry_failure(&m, kind)?.is_none();
            let via = check_symmetry_via_dimould(&m, kind)?;
            if direct != via {
                return Ok(Some(format!("sample={i} kind={kind} direct={direct} dimould={via}")));
            }
        }
        Ok(None)
    })?;
    Ok(Outcome::from_witness(ctx.depth(), w))
}

fn closure(
    ctx: &Ctx,
    t: &mut Tracker,
    pool: &[Mould],
    kind: SymmetryKind,
    op: fn(&Mould, &Mould) -> Result<Mould>,
) -> Result<Outcome> {
    let w = first_witness(STRUCTURED_SAMPLES, |i| {
        let m = op(&pool[i], &pool[i + 1])?;
        t.track(&m);
        Ok(tagged(format!("pair={i}"), ctx.symmetry_failure(&m, kind)?))
    })?;
    Ok(Outcome::from_witness(ctx.depth(), w))
}

fn closure_mu_symmetral(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    closure(ctx, t, ctx.symmetral(), SymmetryKind::Symmetral, Mould::mu)
}

fn closure_mu_symmetril(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    closure(ctx, t, ctx.symmetril(), SymmetryKind::Symmetril, Mould::mu)
}

fn closure_lu_alternal(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    closure(ctx, t, ctx.alternal(), SymmetryKind::Alternal, Mould::lu)
}

fn closure_lu_alternil(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    closure(ctx, t, ctx.alternil(), SymmetryKind::Alternil, Mould::lu)
}

// ---- exp and log ----

fn exp_alternal(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    let w = first_witness(EXP_SAMPLES, |i| {
        let s = ctx.alternal()[i].exp()?;
        t.track(&s);
        Ok(tagged(format!("sample={i}"), ctx.symmetry_failure(&s, SymmetryKind::Symmetral)?))
    })?;
    Ok(Outcome::from_witness(ctx.depth(), w))
}

fn exp_alternil(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    let w = first_witness(EXP_SAMPLES, |i| {
        let s = ctx.alternil()[i].exp()?;
        t.track(&s);
        Ok(tagged(format!("sample={i}"), ctx.symmetry_failure(&s, SymmetryKind::Symmetril)?))
    })?;
    Ok(Outcome::from_witness(ctx.depth(), w))
}

fn exp_log_roundtrip(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    let w = first_witness(EXP_SAMPLES, |i| {
        for (name, a) in [("alternal", &ctx.alternal()[i]), ("alternil", &ctx.alternil()[i])] {
            let back = a.exp()?.log()?;
            t.track(&back);
            if let Some(w) = ctx.mould_diff(&back, a)? {
                return Ok(Some(format!("sample={i} log(exp({name})) {w}")));
            }
        }
        for (name, s) in [("symmetral", &ctx.symmetral()[i]), ("symmetril", &ctx.symmetril()[i])] {
            let back = s.log()?.exp()?;
            if let Some(w) = ctx.mould_diff(&back, s)? {
                return Ok(Some(format!("sample={i} exp(log({name})) {w}")));
            }
        }
        Ok(None)
    })?;
    Ok(Outcome::from_witness(ctx.depth(), w))
}

// ---- ganit ----

fn morphism(ctx: &Ctx, t: &mut Tracker, g: &Ganit, stream: u64) -> Result<Outcome> {
    let w = first_witness(MORPHISM_SAMPLES, |i| {
        let (e1, e2) = pair_empty(i);
        let a1 = random_v(ctx, e1, TAG_MORPHISM, 10 * stream + 2 * i as u64);
        let a2 = random_v(ctx, e2, TAG_MORPHISM, 10 * stream + 2 * i as u64 + 1);
        let lhs = g.apply(&a1.mu(&a2)?)?;
        t.track(&lhs);
        let rhs = g.apply(&a1)?.mu(&g.apply(&a2)?)?;
        Ok(tagged(format!("sample={i}"), ctx.mould_diff(&lhs, &rhs)?))
    })?;
    Ok(Outcome::from_witness(ctx.depth(), w))
}

fn random_gari(ctx: &Ctx) -> Result<Ganit> {
    Ganit::new(&random_v(ctx, Rational::one(), TAG_MORPHISM, 1000))
}

fn morphism_pic(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    morphism(ctx, t, ctx.ganit_pic(), 1)
}

fn morphism_poc(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    morphism(ctx, t, ctx.ganit_poc(), 2)
}

fn morphism_random(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    morphism(ctx, t, &random_gari(ctx)?, 3)
}

fn ganit_inverse(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    let (pic, poc) = (ctx.ganit_pic(), ctx.ganit_poc());
    let w = first_witness(MORPHISM_SAMPLES, |i| {
        let m = random_v(ctx, Rational::new(i as i64, 1), TAG_INVERSE, i as u64);
        let there = pic.apply(&m)?;
        t.track(&there);
        if let Some(w) = ctx.mould_diff(&poc.apply(&there)?, &m)? {
            return Ok(Some(format!("sample={i} poc after pic {w}")));
        }
        Ok(tagged(format!("sample={i} pic after poc"), ctx.mould_diff(&pic.apply(&poc.apply(&m)?)?, &m)?))
    })?;
    Ok(Outcome::from_witness(ctx.depth(), w))
}

fn ganit_diagram(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    let random = random_gari(ctx)?;
    let gs = [("pic", ctx.ganit_pic()), ("poc", ctx.ganit_poc()), ("random", &random)];
    let w = first_witness(MORPHISM_SAMPLES, |i| {
        let a = random_v(ctx, Rational::zero(), TAG_DIAGRAM, i as u64);
        for (name, g) in gs {
            let lhs = g.apply(&a.exp()?)?;
            t.track(&lhs);
            let rhs = g.apply(&a)?.exp()?;
            if let Some(w) = ctx.mould_diff(&lhs, &rhs)? {
                return Ok(Some(format!("sample={i} B={name} {w}")));
            }
        }
        Ok(None)
    })?;
    Ok(Outcome::from_witness(ctx.depth(), w))
}

fn image_has(ctx: &Ctx, t: &mut Tracker, images: &[Mould], kind: SymmetryKind) -> Result<Outcome> {
    let w = first_witness(STRUCTURED_SAMPLES, |i| {
        t.track(&images[i]);
        Ok(tagged(format!("sample={i}"), ctx.symmetry_failure(&images[i], kind)?))
    })?;
    Ok(Outcome::from_witness(ctx.depth(), w))
}

fn ganit_al_il(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    image_has(ctx, t, ctx.alternil(), SymmetryKind::Alternil)
}

fn ganit_as_is(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    image_has(ctx, t, ctx.symmetril(), SymmetryKind::Symmetril)
}

/// `ganit(poc)` sends each image back to its preimage, which has the source symmetry.
fn pulled_back(ctx: &Ctx, t: &mut Tracker, images: &[Mould], sources: &[Mould], kind: SymmetryKind) -> Result<Outcome> {
    let w = first_witness(STRUCTURED_SAMPLES, |i| {
        let back = ctx.ganit_poc().apply(&images[i])?;
        t.track(&back);
        if let Some(w) = ctx.symmetry_failure(&back, kind)? {
            return Ok(Some(format!("sample={i} {w}")));
        }
        Ok(tagged(format!("sample={i} preimage"), ctx.mould_diff(&back, &sources[i])?))
    })?;
    Ok(Outcome::from_witness(ctx.depth(), w))
}

fn ganit_il_al(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    pulled_back(ctx, t, ctx.alternil(), ctx.alternal(), SymmetryKind::Alternal)
}

fn ganit_is_as(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    pulled_back(ctx, t, ctx.symmetril(), ctx.symmetral(), SymmetryKind::Symmetral)
}

// ---- decomposition combinatorics and g ----

/// Generic words of every decoration with length in `lo..=hi`.
fn words(spec: &GammaSpec, lo: usize, hi: usize) -> Vec<Word> {
    (lo..=hi)
        .flat_map(|r| spec.vectors(r).map(|s| Word::generic(&s, 0)).collect::<Vec<_>>())
        .collect()
}

/// Generic pairs `(α; β)` with `|α|, |β| ≥ 1` and `|α| + |β| ≤ R`, in disjoint variables.
fn word_pairs(spec: &GammaSpec, depth: usize) -> Vec<(Word, Word)> {
    let mut out = Vec::new();
    for total in 2..=depth {
        for r in 1..total {
            for s in spec.vectors(total) {
                out.push((Word::generic(&s[..r], 0), Word::generic(&s[r..], r as u32)));
            }
        }
    }
    out
}

fn dset(w: &Word, t: usize, kind: DecompositionKind, filter: HeadFilter) -> Result<std::collections::BTreeSet<Decomposition>> {
    let v = decompositions(w, t, kind, filter);
    let n = v.len();
    let s: std::collections::BTreeSet<_> = v.into_iter().collect();
    if s.len() != n {
        return Err(Error::Parse(format!("duplicate decompositions of {w} into {t} parts")));
    }
    Ok(s)
}

fn decomposition_partitions(ctx: &Ctx, _: &mut Tracker) -> Result<Outcome> {
    use DecompositionKind::{D, E};
    let mut witness = None;
    'outer: for w in words(ctx.spec(), 0, ctx.depth()) {
        for t in 1..=ctx.depth() {
            let d = dset(&w, t, D, HeadFilter::Any)?;
            let e = dset(&w, t, E, HeadFilter::Any)?;
            if d.iter().chain(&e).any(|x| x.concat() != w || x.parts.len() != t) {
                witness = Some(format!("word={w} t={t} bad concatenation"));
                break 'outer;
            }
            if t >= 2 {
                let ge2 = dset(&w, t, D, HeadFilter::AtLeastTwo)?;
                let one = dset(&w, t, D, HeadFilter::One)?;
                if !ge2.is_disjoint(&one) || ge2.len() + one.len() != d.len() || !ge2.union(&one).all(|x| d.contains(x)) {
                    witness = Some(format!("word={w} t={t} D is not D^>=2 + D^1"));
                    break 'outer;
                }
                let lifted: std::collections::BTreeSet<_> = dset(&w, t - 1, D, HeadFilter::Any)?
                    .into_iter()
                    .map(|x| {
                        let mut parts = vec![Word::empty()];
                        parts.extend(x.parts);
                        Decomposition { parts }
                    })
                    .collect();
                if !lifted.is_disjoint(&d) || lifted.len() + d.len() != e.len() || !lifted.union(&d).all(|x| e.contains(x)) {
                    witness = Some(format!("word={w} t={t} E is not D + (empty; D_(t-1))"));
                    break 'outer;
                }
            }
        }
    }
    Ok(Outcome::from_witness(ctx.depth(), witness))
}

fn decomposition_bijections(ctx: &Ctx, _: &mut Tracker) -> Result<Outcome> {
    use DecompositionKind::{D, E};
    let mut witness = None;
    'outer: for w in words(ctx.spec(), 1, ctx.depth()) {
        let wp = w.tail();
        for t in 2..=ctx.depth() {
            let maps: [(&str, Vec<Decomposition>, std::collections::BTreeSet<Decomposition>); 3] = [
                (
                    "D^>=2(w) -> D(w')",
                    dset(&w, t, D, HeadFilter::AtLeastTwo)?.iter().map(strip_head).collect(),
                    dset(&wp, t, D, HeadFilter::Any)?,
                ),
                (
                    "D^1(w) -> D_(t-1)(w')",
                    dset(&w, t, D, HeadFilter::One)?.iter().map(drop_head).collect(),
                    dset(&wp, t - 1, D, HeadFilter::Any)?,
                ),
                (
                    "E(w') -> D(w)",
                    dset(&wp, t, E, HeadFilter::Any)?.iter().map(|x| prepend_head(&w, x)).collect(),
                    dset(&w, t, D, HeadFilter::Any)?,
                ),
            ];
            for (name, image, target) in maps {
                let n = image.len();
                let image: std::collections::BTreeSet<_> = image.into_iter().collect();
                if image.len() != n || image != target {
                    witness = Some(format!("word={w} t={t} {name} is not a bijection"));
                    break 'outer;
                }
            }
        }
    }
    Ok(Outcome::from_witness(ctx.depth(), witness))
}

fn equivalent_equation(ctx: &Ctx, _: &mut Tracker) -> Result<Outcome> {
    let random = random_v(ctx, Rational::one(), TAG_RECURRENCE, 0);
    let bs: [(&str, &dyn WordFunction); 3] = [("pic", &NamedMould::Pic), ("poc", &NamedMould::Poc), ("random", &random)];
    for w in words(ctx.spec(), 1, ctx.depth()) {
        for (name, b) in bs {
            if g_via_e(b, &w)? != g_expand(b, &w)? {
                return Ok(Outcome::fail(ctx.depth(), format!("B={name} word={w}")));
            }
        }
    }
    Ok(Outcome::pass(ctx.depth()))
}

fn g_recurrence_pic(ctx: &Ctx, _: &mut Tracker) -> Result<Outcome> {
    for w in words(ctx.spec(), 2, ctx.depth()) {
        if g_recurrence_rhs(&NamedMould::Pic, &w)? != g_expand(&NamedMould::Pic, &w)? {
            return Ok(Outcome::fail(ctx.depth(), format!("word={w}")));
        }
    }
    Ok(Outcome::pass(ctx.depth()))
}

fn g_recurrence_poc(ctx: &Ctx, _: &mut Tracker) -> Result<Outcome> {
    for w in words(ctx.spec(), 2, ctx.depth()) {
        if g_recurrence_rhs_right(&NamedMould::Poc, &w)? != g_expand(&NamedMould::Poc, &w)? {
            return Ok(Outcome::fail(ctx.depth(), format!("word={w}")));
        }
    }
    Ok(Outcome::pass(ctx.depth()))
}

fn intertwine_pic(ctx: &Ctx, _: &mut Tracker) -> Result<Outcome> {
    let b = NamedMould::Pic;
    for (x, y) in word_pairs(ctx.spec(), ctx.depth()) {
        let lhs = g_linear(&b, &shuffle_star(&x, &y))?;
        let rhs = g_expand(&b, &x)?.shuffle(&g_expand(&b, &y)?);
        if lhs != rhs {
            return Ok(Outcome::fail(ctx.depth(), format!("alpha={x} beta={y}")));
        }
    }
    Ok(Outcome::pass(ctx.depth()))
}

fn intertwine_poc(ctx: &Ctx, _: &mut Tracker) -> Result<Outcome> {
    let b = NamedMould::Poc;
    for (x, y) in word_pairs(ctx.spec(), ctx.depth()) {
        let lhs = g_linear(&b, &shuffle(&x, &y))?;
        let rhs = g_expand(&b, &x)?.shuffle_star(&g_expand(&b, &y)?);
        if lhs != rhs {
            return Ok(Outcome::fail(ctx.depth(), format!("alpha={x} beta={y}")));
        }
    }
    Ok(Outcome::pass(ctx.depth()))
}

fn transfer(ctx: &Ctx, t: &mut Tracker, b: NamedMould, stream: u64) -> Result<Outcome> {
    let m = random_v(ctx, Rational::zero(), TAG_TRANSFER, stream);
    let (image, inner) = match b {
        NamedMould::Pic => (ctx.ganit_pic().apply(&m)?, InnerShuffle::Plain),
        _ => (ctx.ganit_poc().apply(&m)?, InnerShuffle::Star),
    };
    t.track(&image);
    let lhs = match inner {
        InnerShuffle::Plain => shstar_map(&image)?,
        InnerShuffle::Star => sh_map(&image)?,
    };
    for (x, y) in word_pairs(ctx.spec(), ctx.depth()) {
        let (r, s) = (x.len(), y.len());
        let idx = ctx.spec().vector_index(&x.concat(&y).sigmas());
        let rhs = transfer_rhs(&b, &m, &x, &y, inner)?;
        if !ctx.is_zero(&lhs.entry(r, s, idx).sub(&rhs)) {
            return Ok(Outcome::fail(ctx.depth(), format!("alpha={x} beta={y}")));
        }
    }
    Ok(Outcome::pass(ctx.depth()))
}

fn transfer_pic(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    transfer(ctx, t, NamedMould::Pic, 0)
}

fn transfer_poc(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    transfer(ctx, t, NamedMould::Poc, 1)
}

// ---- appendix ----

fn ex_symmetral(_: &Ctx, _: &mut Tracker) -> Result<Outcome> {
    let w = symmetral_family_failure(ex_coeff, WEIGHT_BOUND).map(|(m, n)| format!("m=({m}) n=({n})"));
    Ok(Outcome::from_witness(WEIGHT_BOUND, w))
}

fn c_recurrence(_: &Ctx, _: &mut Tracker) -> Result<Outcome> {
    for k in 1..=WEIGHT_BOUND {
        for c in compositions(k) {
            let closed = &Rational::factorial(c.weight()) * &ex_coeff(&c);
            let rec = c_coeff(&c);
            if rec != closed {
                return Ok(Outcome::fail(WEIGHT_BOUND, format!("m=({c}) recurrence={rec} closed={closed}")));
            }
        }
    }
    Ok(Outcome::pass(WEIGHT_BOUND))
}

fn c_independent(ctx: &Ctx, _: &mut Tracker) -> Result<Outcome> {
    let variant = ctx.cfg.arit;
    for k in 1..=ctx.depth() {
        let a = random_u(ctx, Rational::zero(), TAG_APPENDIX + 1, 2 * k as u64);
        let b = random_u(ctx, Rational::zero(), TAG_APPENDIX + 1, 2 * k as u64 + 1);
        let ca = solve_c_coefficients(&a, k, ctx.seed(TAG_APPENDIX + 2, k as u64), variant)?;
        let cb = solve_c_coefficients(&b, k, ctx.seed(TAG_APPENDIX + 3, k as u64), variant)?;
        let (Some(ca), Some(cb)) = (ca, cb) else {
            return Ok(Outcome::fail(ctx.depth(), format!("k={k} coefficients not uniquely determined")));
        };
        for ((c, x), (_, y)) in ca.iter().zip(&cb) {
            if x != y {
                return Ok(Outcome::fail(ctx.depth(), format!("k={k} m=({c}) first={x} second={y}")));
            }
            let expected = c_coeff(c);
            if *x != expected {
                return Ok(Outcome::fail(ctx.depth(), format!("k={k} m=({c}) solved={x} recurrence={expected}")));
            }
        }
    }
    Ok(Outcome::pass(ctx.depth()))
}

fn arit_derivation(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    let variant = ctx.cfg.arit;
    let w = first_witness(MORPHISM_SAMPLES, |i| {
        let b = random_u(ctx, Rational::zero(), TAG_APPENDIX + 4, 3 * i as u64);
        let (e1, e2) = pair_empty(i);
        let a1 = random_u(ctx, e1, TAG_APPENDIX + 4, 3 * i as u64 + 1);
        let a2 = random_u(ctx, e2, TAG_APPENDIX + 4, 3 * i as u64 + 2);
        let lhs = arit(&b, &a1.mu(&a2)?, variant)?;
        t.track(&lhs);
        let rhs = arit(&b, &a1, variant)?.mu(&a2)?.add(&a1.mu(&arit(&b, &a2, variant)?)?)?;
        if let Some(w) = ctx.mould_diff(&lhs, &rhs)? {
            return Ok(Some(format!("sample={i} {w}")));
        }
        let unit = arit(&b, &Mould::identity(Convention::U, ctx.spec(), ctx.depth()), variant)?;
        Ok((!unit.is_zero()).then(|| format!("sample={i} arit(B)(I) is not zero")))
    })?;
    Ok(Outcome::from_witness(ctx.depth(), w))
}

fn arit_alternal(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    let variant = ctx.cfg.arit;
    let named = NamedMould::A.tabulate(ctx.spec(), ctx.depth());
    let w = first_witness(EXP_SAMPLES, |i| {
        let a = alternal_u(ctx, 2 * i as u64);
        let b = if i == 0 { named.clone() } else { alternal_u(ctx, 2 * i as u64 + 1) };
        let out = arit(&b, &a, variant)?;
        t.track(&out);
        if !out.is_ari() {
            return Ok(Some(format!("sample={i} arit(B)(A) has nonzero empty value")));
        }
        Ok(tagged(format!("sample={i}"), ctx.symmetry_failure(&out, SymmetryKind::Alternal)?))
    })?;
    Ok(Outcome::from_witness(ctx.depth(), w))
}

fn expari_is_expansion(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    let variant = ctx.cfg.arit;
    let w = first_witness(MORPHISM_SAMPLES, |i| {
        let a = if i == 0 {
            random_u(ctx, Rational::zero(), TAG_APPENDIX + 5, 0)
        } else {
            alternal_u(ctx, 100 + i as u64)
        };
        let series = expari(&a, variant)?;
        t.track(&series);
        Ok(tagged(format!("sample={i}"), ctx.mould_diff(&series, &expari_expansion(&a, variant)?)?))
    })?;
    Ok(Outcome::from_witness(ctx.depth(), w))
}

fn expari_symmetral(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    let variant = ctx.cfg.arit;
    let w = first_witness(EXP_SAMPLES, |i| {
        let s = expari(&alternal_u(ctx, 200 + i as u64), variant)?;
        t.track(&s);
        Ok(tagged(format!("sample={i}"), ctx.symmetry_failure(&s, SymmetryKind::Symmetral)?))
    })?;
    Ok(Outcome::from_witness(ctx.depth(), w))
}

fn logari_roundtrip(ctx: &Ctx, t: &mut Tracker) -> Result<Outcome> {
    let variant = ctx.cfg.arit;
    let w = first_witness(EXP_SAMPLES, |i| {
        let a = alternal_u(ctx, 200 + i as u64);
        let back = logari(&expari(&a, variant)?, variant)?;
        t.track(&back);
        if let Some(w) = ctx.mould_diff(&back, &a)? {
            return Ok(Some(format!("sample={i} {w}")));
        }
        Ok(tagged(format!("sample={i}"), ctx.symmetry_failure(&back, SymmetryKind::Alternal)?))
    })?;
    Ok(Outcome::from_witness(ctx.depth(), w))
}
