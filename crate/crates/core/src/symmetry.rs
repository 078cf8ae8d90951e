//! Dimoulds, the `Sh` and `Sh*` maps, the tensor embedding, the four symmetry
//! predicates and generators of random alternal and symmetral moulds.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactalg::{RatFun, Rational};
use crate::gamma::{render_vector, GammaElem, GammaSpec};
use crate::mould::{random_component, Convention, Mould};
use crate::words::{shuffle_star, shuffle_words, Word};
use crate::{Error, Result};

/// A two-argument mould truncated at total depth `R`.
///
/// The `(r, s)` table is indexed by decoration vectors of length `r + s`; its
/// components use `x_1..x_r` for the first word and `x_{r+1}..x_{r+s}` for the second.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Dimould {
    convention: Convention,
    spec: GammaSpec,
    depth: usize,
    /// `tables[r][s]`, present for `r + s ≤ depth`; `tables[0][0]` holds the single constant.
    tables: Vec<Vec<Vec<RatFun>>>,
}

impl Dimould {
    pub fn make<F>(convention: Convention, spec: &GammaSpec, depth: usize, mut f: F) -> Result<Dimould>
    where
        F: FnMut(usize, usize, &[GammaElem]) -> Result<RatFun>,
    {
        let mut tables = Vec::with_capacity(depth + 1);
        for r in 0..=depth {
            let mut row = Vec::with_capacity(depth + 1 - r);
            for s in 0..=depth - r {
                let mut t = Vec::with_capacity(spec.vector_count(r + s));
                for sigmas in spec.vectors(r + s) {
                    t.push(f(r, s, &sigmas)?);
                }
                row.push(t);
            }
            tables.push(row);
        }
        Ok(Dimould {
            convention,
            spec: spec.clone(),
            depth,
            tables,
        })
    }

    /// The unit `I ⊗ I`.
    pub fn identity(convention: Convention, spec: &GammaSpec, depth: usize) -> Dimould {
        Self::make(convention, spec, depth, |r, s, _| {
            Ok(if r + s == 0 { RatFun::one() } else { RatFun::zero() })
        })
        .expect("infallible")
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn entry(&self, r: usize, s: usize, idx: usize) -> &RatFun {
        &self.tables[r][s][idx]
    }

    fn check_compatible(&self, other: &Dimould) -> Result<()> {
        if self.spec != other.spec || self.depth != other.depth {
            return Err(Error::SpecMismatch);
        }
        if self.convention != other.convention {
            return Err(Error::ConventionMismatch {
                expected: self.convention.name(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Dimould) -> Result<Dimould> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (r, row) in out.tables.iter_mut().enumerate() {
            for (s, t) in row.iter_mut().enumerate() {
                for (idx, f) in t.iter_mut().enumerate() {
                    *f = f.add(&other.tables[r][s][idx]);
                }
            }
        }
        Ok(out)
    }

    /// `(A × B)(ω;η) = Σ_{i,j} A(ω_{≤i}; η_{≤j}) B(ω_{>i}; η_{>j})`.
    pub fn mu(&self, other: &Dimould) -> Result<Dimould> {
        self.check_compatible(other)?;
        Dimould::make(self.convention, &self.spec, self.depth, |r, s, sigmas| {
            let (om, et) = sigmas.split_at(r);
            let mut parts = Vec::new();
            for i in 0..=r {
                for j in 0..=s {
                    let a_sig: Vec<GammaElem> = om[..i].iter().chain(&et[..j]).cloned().collect();
                    let a = &self.tables[i][j][self.spec.vector_index(&a_sig)];
                    if a.is_zero() {
                        continue;
                    }
                    let b_sig: Vec<GammaElem> = om[i..].iter().chain(&et[j..]).cloned().collect();
                    let b = &other.tables[r - i][s - j][self.spec.vector_index(&b_sig)];
                    if b.is_zero() {
                        continue;
                    }
                    // Place A's variables at x_1..x_i and x_{r+1}..x_{r+j}.
                    let a_map: Vec<u32> = (1..=i as u32).chain(r as u32 + 1..=(r + j) as u32).collect();
                    // Place B's variables at x_{i+1}..x_r and x_{r+j+1}..x_{r+s}.
                    let b_map: Vec<u32> = (i as u32 + 1..=r as u32)
                        .chain((r + j) as u32 + 1..=(r + s) as u32)
                        .collect();
                    parts.push(a.rename(&a_map).mul(&b.rename(&b_map)));
                }
            }
            Ok(RatFun::sum(parts.iter()))
        })
    }

    /// First differing entry as `(r, s, σ-vector)`.
    pub fn first_difference(&self, other: &Dimould) -> Option<(usize, usize, Vec<GammaElem>)> {
        for (r, row) in self.tables.iter().enumerate() {
            for (s, t) in row.iter().enumerate() {
                for (idx, f) in t.iter().enumerate() {
                    if f != &other.tables[r][s][idx] {
                        return Some((r, s, self.spec.vector_at(r + s, idx)));
                    }
                }
            }
        }
        None
    }
}

/// The pair of generic words `(ω; η)` in `x_1..x_r` and `x_{r+1}..x_{r+s}`.
fn generic_pair(r: usize, sigmas: &[GammaElem]) -> (Word, Word) {
    (
        Word::generic(&sigmas[..r], 0),
        Word::generic(&sigmas[r..], r as u32),
    )
}

/// `(ω;η) ↦ Σ_α Sh(ω,η;α) M(α)`.
pub fn sh_map(m: &Mould) -> Result<Dimould> {
    Dimould::make(m.convention(), m.spec(), m.depth(), |r, _, sigmas| {
        let (om, et) = generic_pair(r, sigmas);
        let vals = shuffle_words(&om, &et)
            .iter()
            .map(|a| m.evaluate(a))
            .collect::<Result<Vec<_>>>()?;
        Ok(RatFun::sum(vals.iter()))
    })
}

/// `(ω;η) ↦ Σ_α Sh*(ω,η;α) M(α)`; V convention only.
pub fn shstar_map(m: &Mould) -> Result<Dimould> {
    require_v(m)?;
    Dimould::make(m.convention(), m.spec(), m.depth(), |r, _, sigmas| {
        let (om, et) = generic_pair(r, sigmas);
        shuffle_star(&om, &et).pair(|a| m.evaluate(a))
    })
}

/// `(ω;η) ↦ M(ω) N(η)`.
pub fn tensor(m: &Mould, n: &Mould) -> Result<Dimould> {
    if m.spec() != n.spec() || m.depth() != n.depth() {
        return Err(Error::SpecMismatch);
    }
    Dimould::make(m.convention(), m.spec(), m.depth(), |r, _, sigmas| {
        let a = m.component(&sigmas[..r]);
        if a.is_zero() {
            return Ok(a);
        }
        Ok(a.mul(&n.component(&sigmas[r..]).shift(r as u32)))
    })
}

fn require_v(m: &Mould) -> Result<()> {
    if m.convention() != Convention::V {
        return Err(Error::ConventionMismatch { expected: "V" });
    }
    Ok(())
}

/// The four symmetry types of moulds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymmetryKind {
    Alternal,
    Symmetral,
    Alternil,
    Symmetril,
}

impl SymmetryKind {
    pub const ALL: [SymmetryKind; 4] = [
        SymmetryKind::Alternal,
        SymmetryKind::Symmetral,
        SymmetryKind::Alternil,
        SymmetryKind::Symmetril,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SymmetryKind::Alternal => "alternal",
            SymmetryKind::Symmetral => "symmetral",
            SymmetryKind::Alternil => "alternil",
            SymmetryKind::Symmetril => "symmetril",
        }
    }

    /// Whether the contracting product `⧢*` is used.
    pub fn is_star(self) -> bool {
        matches!(self, SymmetryKind::Alternil | SymmetryKind::Symmetril)
    }

    /// Whether the right-hand side is `M(ω)M(η)` rather than `0`.
    pub fn is_group_like(self) -> bool {
        matches!(self, SymmetryKind::Symmetral | SymmetryKind::Symmetril)
    }
}

impl fmt::Display for SymmetryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SymmetryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown symmetry `{s}`")))
    }
}

/// One checked instance of a symmetry identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckLine {
    /// `(0, 0)` stands for the condition on `M(∅)`.
    pub p: usize,
    pub q: usize,
    pub sigmas: Vec<GammaElem>,
    /// Left side minus right side; zero when the identity holds.
    pub residual: RatFun,
}

impl CheckLine {
    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }

    pub fn render(&self, convention: Convention) -> String {
        format!(
            "{} p={} q={} sigma={} residual={}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.p,
            self.q,
            render_vector(&self.sigmas),
            self.residual.render(convention.family())
        )
    }
}

/// The outcome of [`check_symmetry`] over all `(p, q, σ)`.
#[derive(Clone, Debug)]
pub struct SymmetryReport {
    pub kind: SymmetryKind,
    pub lines: Vec<CheckLine>,
}

impl SymmetryReport {
    pub fn holds(&self) -> bool {
        self.lines.iter().all(CheckLine::passed)
    }

    pub fn first_failure(&self) -> Option<&CheckLine> {
        self.lines.iter().find(|l| !l.passed())
    }
}

/// Checks the defining identity for every `p, q ≥ 1` with `p + q ≤ R` and every decoration,
/// on the generic word `x_1..x_{p+q}`.
pub fn check_symmetry(m: &Mould, kind: SymmetryKind) -> Result<SymmetryReport> {
    check_symmetry_upto(m, kind, m.depth())
}

/// As [`check_symmetry`] but only up to total depth `max`.
pub fn check_symmetry_upto(m: &Mould, kind: SymmetryKind, max: usize) -> Result<SymmetryReport> {
    if max > m.depth() {
        return Err(Error::DepthExceeded {
            len: max,
            depth: m.depth(),
        });
    }
    if kind.is_star() {
        require_v(m)?;
    }
    let spec = m.spec();
    let mut lines = Vec::new();
    let want_empty = if kind.is_group_like() { Rational::one() } else { Rational::zero() };
    lines.push(CheckLine {
        p: 0,
        q: 0,
        sigmas: Vec::new(),
        residual: RatFun::constant(m.empty_value() - &want_empty),
    });
    for total in 2..=max {
        for p in 1..total {
            let q = total - p;
            for sigmas in spec.vectors(total) {
                let (om, et) = generic_pair(p, &sigmas);
                let lhs = if kind.is_star() {
                    shuffle_star(&om, &et).pair(|a| m.evaluate(a))?
                } else {
                    let vals = shuffle_words(&om, &et)
                        .iter()
                        .map(|a| m.evaluate(a))
                        .collect::<Result<Vec<_>>>()?;
                    RatFun::sum(vals.iter())
                };
                let residual = if kind.is_group_like() {
                    lhs.sub(&m.evaluate(&om)?.mul(&m.evaluate(&et)?))
                } else {
                    lhs
                };
                lines.push(CheckLine {
                    p,
                    q,
                    sigmas,
                    residual,
                });
            }
        }
    }
    Ok(SymmetryReport { kind, lines })
}

/// The dimould characterization: `Sh(M) = M⊗I + I⊗M` (Lie-like) or `Sh(M) = M⊗M`
/// (group-like), with `Sh*` for the contracting kinds.
pub fn check_symmetry_via_dimould(m: &Mould, kind: SymmetryKind) -> Result<bool> {
    let lhs = if kind.is_star() { shstar_map(m)? } else { sh_map(m)? };
    let i = Mould::identity(m.convention(), m.spec(), m.depth());
    let rhs = if kind.is_group_like() {
        tensor(m, m)?
    } else {
        tensor(m, &i)?.add(&tensor(&i, m)?)?
    };
    let empty_ok = if kind.is_group_like() { m.is_gari() } else { m.is_ari() };
    Ok(empty_ok && lhs == rhs)
}

/// A random ARI mould supported in depth 1.
pub fn random_depth_one(convention: Convention, spec: &GammaSpec, depth: usize, rng: &mut ChaCha8Rng) -> Mould {
    Mould::make(convention, spec, depth, Rational::zero(), |r, _| {
        Ok(if r == 1 { random_component(rng, 1) } else { RatFun::zero() })
    })
    .expect("depth-one components use x1")
}

/// A random rational combination of iterated lu-brackets of random depth-1 moulds.
///
/// Depth-1 moulds are alternal and brackets preserve alternality, so the result is alternal.
pub fn random_alternal(convention: Convention, spec: &GammaSpec, depth: usize, seed: u64) -> Mould {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens: Vec<Mould> = (0..3)
        .map(|_| random_depth_one(convention, spec, depth, &mut rng))
        .collect();
    let mut acc = Mould::zero(convention, spec, depth);
    for d in 1..=depth {
        for _ in 0..2 {
            let mut term = gens[rng.gen_range(0..gens.len())].clone();
            for _ in 1..d {
                let g = &gens[rng.gen_range(0..gens.len())];
                term = g.lu(&term).expect("same specs");
            }
            let c = Rational::new(rng.gen_range(-4..=4), rng.gen_range(1..=3));
            acc = acc.add(&term.scale(&c)).expect("same specs");
        }
    }
    acc
}

/// Which structured random mould to generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructuredKind {
    Alternal,
    Symmetral,
}

/// Random alternal mould, or the exponential of one (which is symmetral).
pub fn random_structured(kind: StructuredKind, convention: Convention, spec: &GammaSpec, depth: usize, seed: u64) -> Mould {
    let a = random_alternal(convention, spec, depth, seed);
    match kind {
        StructuredKind::Alternal => a,
        StructuredKind::Symmetral => a.exp().expect("alternal moulds lie in ARI"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::LinForm;
    use crate::mould::random_mould;
    use proptest::prelude::*;

    fn z2() -> GammaSpec {
        GammaSpec::cyclic(2)
    }

    fn pic(depth: usize) -> Mould {
        Mould::make(Convention::V, &z2(), depth, Rational::one(), |r, _| {
            let mut f = RatFun::one();
            for i in 1..=r as u32 {
                f = f.mul(&RatFun::inv_linform(&LinForm::var(i)).unwrap());
            }
            Ok(f)
        })
        .unwrap()
    }

    #[test]
    fn sh_maps_of_unit_and_small_entries() {
        let spec = z2();
        let i = Mould::identity(Convention::V, &spec, 3);
        let unit = Dimould::identity(Convention::V, &spec, 3);
        assert_eq!(sh_map(&i).unwrap(), unit);
        assert_eq!(shstar_map(&i).unwrap(), unit);
        assert_eq!(tensor(&i, &i).unwrap(), unit);
        let m = random_mould(Convention::V, &spec, 3, Rational::new(1, 3), 4);
        let sh = sh_map(&m).unwrap();
        let shs = shstar_map(&m).unwrap();
        let t = tensor(&m, &i).unwrap();
        for r in 1..=3 {
            for idx in 0..spec.vector_count(r) {
                assert_eq!(sh.entry(r, 0, idx), m.cell(r, idx));
                assert_eq!(shs.entry(r, 0, idx), m.cell(r, idx));
                assert_eq!(t.entry(r, 0, idx), m.cell(r, idx));
            }
        }
        // (1;1): M(x1,x2) + M(x2,x1).
        for idx in 0..4 {
            let s = spec.vector_at(2, idx);
            let swapped = spec.vector_index(&[s[1].clone(), s[0].clone()]);
            let expected = m.cell(2, idx).add(&m.cell(2, swapped).rename(&[2, 1]));
            assert_eq!(sh.entry(1, 1, idx), &expected);
        }
        let p = pic(3);
        let ps = shstar_map(&p).unwrap();
        for idx in 0..4 {
            let expected = RatFun::inv_linform(&LinForm::var(1))
                .unwrap()
                .mul(&RatFun::inv_linform(&LinForm::var(2)).unwrap());
            assert_eq!(ps.entry(1, 1, idx), &expected);
        }
        let u = m.with_convention(Convention::U);
        assert_eq!(shstar_map(&u), Err(Error::ConventionMismatch { expected: "V" }));
    }

    #[test]
    fn dimould_products() {
        let spec = z2();
        let m = random_mould(Convention::V, &spec, 3, Rational::one(), 1);
        let n = random_mould(Convention::V, &spec, 3, Rational::new(2, 1), 2);
        let p = random_mould(Convention::V, &spec, 3, Rational::zero(), 3);
        let q = random_mould(Convention::V, &spec, 3, Rational::new(-1, 2), 4);
        let unit = Dimould::identity(Convention::V, &spec, 3);
        let d = sh_map(&m).unwrap();
        assert_eq!(unit.mu(&d).unwrap(), d);
        assert_eq!(d.mu(&unit).unwrap(), d);
        let lhs = tensor(&m, &n).unwrap().mu(&tensor(&p, &q).unwrap()).unwrap();
        let rhs = tensor(&m.mu(&p).unwrap(), &n.mu(&q).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        let mn = m.mu(&n).unwrap();
        assert_eq!(sh_map(&mn).unwrap(), sh_map(&m).unwrap().mu(&sh_map(&n).unwrap()).unwrap());
        assert_eq!(tensor(&m, &n).unwrap().entry(1, 1, 3), &m.cell(1, 1).mul(&n.cell(1, 1).shift(1)));
    }

    #[test]
    fn pic_is_symmetril_but_not_symmetral() {
        let p = pic(4);
        assert!(check_symmetry(&p, SymmetryKind::Symmetril).unwrap().holds());
        assert!(check_symmetry_via_dimould(&p, SymmetryKind::Symmetril).unwrap());
        let report = check_symmetry(&p, SymmetryKind::Symmetral).unwrap();
        let fail = report.first_failure().unwrap();
        assert_eq!((fail.p, fail.q), (1, 1));
        // 2/(v1 v2) − 1/(v1 v2).
        let expected = RatFun::inv_linform(&LinForm::var(1))
            .unwrap()
            .mul(&RatFun::inv_linform(&LinForm::var(2)).unwrap());
        assert_eq!(fail.residual, expected);
        assert!(fail.render(Convention::V).starts_with("FAIL p=1 q=1 sigma=(0,0) residual="));
        assert!(!check_symmetry_via_dimould(&p, SymmetryKind::Symmetral).unwrap());
        assert!(matches!(
            check_symmetry_upto(&p, SymmetryKind::Alternal, 5),
            Err(Error::DepthExceeded { .. })
        ));
    }

    #[test]
    fn random_structured_moulds_have_their_symmetry() {
        let spec = z2();
        let a = random_structured(StructuredKind::Alternal, Convention::V, &spec, 4, 9);
        assert!(check_symmetry(&a, SymmetryKind::Alternal).unwrap().holds());
        assert!(!a.homogeneous_part(4).is_zero());
        let s = random_structured(StructuredKind::Symmetral, Convention::V, &spec, 4, 9);
        assert!(check_symmetry(&s, SymmetryKind::Symmetral).unwrap().holds());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let d1 = random_depth_one(Convention::V, &spec, 1, &mut rng);
        let r = check_symmetry(&d1, SymmetryKind::Alternal).unwrap();
        assert!(r.holds());
        assert_eq!(r.lines.len(), 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(6))]
        #[test]
        fn both_routes_agree(seed in 0u64..10_000) {
            let spec = z2();
            let candidates = [
                random_structured(StructuredKind::Alternal, Convention::V, &spec, 3, seed),
                random_structured(StructuredKind::Symmetral, Convention::V, &spec, 3, seed),
                random_mould(Convention::V, &spec, 3, Rational::zero(), seed),
                random_mould(Convention::V, &spec, 3, Rational::one(), seed),
                pic(3),
            ];
            for m in &candidates {
                for kind in SymmetryKind::ALL {
                    prop_assert_eq!(
                        check_symmetry(m, kind).unwrap().holds(),
                        check_symmetry_via_dimould(m, kind).unwrap()
                    );
                }
            }
        }

        #[test]
        fn closure_under_products_and_brackets(seed in 0u64..10_000) {
            let spec = z2();
            let a = random_structured(StructuredKind::Alternal, Convention::V, &spec, 4, seed);
            let b = random_structured(StructuredKind::Alternal, Convention::V, &spec, 4, seed + 1);
            prop_assert!(check_symmetry(&a.lu(&b).unwrap(), SymmetryKind::Alternal).unwrap().holds());
            let s = a.exp().unwrap();
            let t = b.exp().unwrap();
            let st = s.mu(&t).unwrap();
            prop_assert!(check_symmetry(&st, SymmetryKind::Symmetral).unwrap().holds());
            prop_assert!(check_symmetry(&st.log().unwrap(), SymmetryKind::Alternal).unwrap().holds());
        }
    }
}
