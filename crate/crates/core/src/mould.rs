//! Depth-truncated moulds tabulated over `Γ^r`, the mu product and lu bracket,
//! `exp_×`, `log_×`, the GARI inverse and evaluation at decorated words.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactalg::text::parse_ratfun;
use crate::exactalg::{Family, LinForm, RatFun, Rational};
use crate::gamma::{render_vector, GammaElem, GammaSpec};
use crate::words::Word;
use crate::{Error, Result};

/// Which row of a bimould carries the variables: upper forms `u` or lower forms `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Convention {
    U,
    V,
}

impl Convention {
    pub fn family(self) -> Family {
        match self {
            Convention::U => Family::U,
            Convention::V => Family::V,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Convention::U => "U",
            Convention::V => "V",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "U" | "u" => Ok(Convention::U),
            "V" | "v" => Ok(Convention::V),
            _ => Err(Error::Parse(format!("unknown convention `{s}`"))),
        }
    }
}

/// A mould truncated at depth `R`: `M(∅)` plus one table `Γ^r → Q(x_1..x_r)` per depth.
#[derive(Clone, PartialEq, Eq)]
pub struct Mould {
    convention: Convention,
    spec: GammaSpec,
    empty: Rational,
    /// `tables[r-1][i]` is the component at the `i`-th decoration vector of length `r`.
    tables: Vec<Vec<RatFun>>,
}

impl Mould {
    /// Tabulates a generator; components at depth `r` may only use `x_1..x_r`.
    pub fn make<F>(
        convention: Convention,
        spec: &GammaSpec,
        depth: usize,
        empty: Rational,
        mut generator: F,
    ) -> Result<Mould>
    where
        F: FnMut(usize, &[GammaElem]) -> Result<RatFun>,
    {
        let mut tables = Vec::with_capacity(depth);
        for r in 1..=depth {
            let mut table = Vec::with_capacity(spec.vector_count(r));
            for sigmas in spec.vectors(r) {
                let f = generator(r, &sigmas)?;
                check_vars(&f, r)?;
                table.push(f);
            }
            tables.push(table);
        }
        Ok(Mould {
            convention,
            spec: spec.clone(),
            empty,
            tables,
        })
    }

    /// Builds a mould from raw tables, validating shape and variables.
    pub fn from_tables(
        convention: Convention,
        spec: &GammaSpec,
        empty: Rational,
        tables: Vec<Vec<RatFun>>,
    ) -> Result<Mould> {
        for (i, t) in tables.iter().enumerate() {
            if t.len() != spec.vector_count(i + 1) {
                return Err(Error::SpecMismatch);
            }
            for f in t {
                check_vars(f, i + 1)?;
            }
        }
        Ok(Mould {
            convention,
            spec: spec.clone(),
            empty,
            tables,
        })
    }

    /// The unit `I = (1, 0, 0, …)`.
    pub fn identity(convention: Convention, spec: &GammaSpec, depth: usize) -> Mould {
        Self::constant_empty(convention, spec, depth, Rational::one())
    }

    pub fn zero(convention: Convention, spec: &GammaSpec, depth: usize) -> Mould {
        Self::constant_empty(convention, spec, depth, Rational::zero())
    }

    fn constant_empty(convention: Convention, spec: &GammaSpec, depth: usize, empty: Rational) -> Mould {
        Mould {
            convention,
            spec: spec.clone(),
            empty,
            tables: (1..=depth)
                .map(|r| vec![RatFun::zero(); spec.vector_count(r)])
                .collect(),
        }
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn spec(&self) -> &GammaSpec {
        &self.spec
    }

    pub fn depth(&self) -> usize {
        self.tables.len()
    }

    pub fn empty_value(&self) -> &Rational {
        &self.empty
    }

    pub fn is_ari(&self) -> bool {
        self.empty.is_zero()
    }

    pub fn is_gari(&self) -> bool {
        self.empty.is_one()
    }

    pub fn table(&self, r: usize) -> &[RatFun] {
        &self.tables[r - 1]
    }

    /// Component at depth `r` and decoration index `idx`, in `x_1..x_r`.
    pub fn cell(&self, r: usize, idx: usize) -> &RatFun {
        &self.tables[r - 1][idx]
    }

    /// Component at a decoration vector, in `x_1..x_r`; `M(∅)` for the empty vector.
    pub fn component(&self, sigmas: &[GammaElem]) -> RatFun {
        if sigmas.is_empty() {
            return RatFun::constant(self.empty.clone());
        }
        self.tables[sigmas.len() - 1][self.spec.vector_index(sigmas)].clone()
    }

    /// Same mould read in the other convention.
    pub fn with_convention(&self, convention: Convention) -> Mould {
        Mould {
            convention,
            ..self.clone()
        }
    }

    pub fn with_empty(&self, empty: Rational) -> Mould {
        Mould {
            empty,
            ..self.clone()
        }
    }

    /// Keeps depths `≤ depth`, padding with zero tables if needed.
    pub fn truncate(&self, depth: usize) -> Mould {
        let mut tables: Vec<Vec<RatFun>> = self.tables.iter().take(depth).cloned().collect();
        for r in tables.len() + 1..=depth {
            tables.push(vec![RatFun::zero(); self.spec.vector_count(r)]);
        }
        Mould {
            tables,
            ..self.clone()
        }
    }

    /// Keeps only the depth-`r` component (and `∅` if `r = 0`).
    pub fn homogeneous_part(&self, r: usize) -> Mould {
        let mut out = Mould::zero(self.convention, &self.spec, self.depth());
        if r == 0 {
            out.empty = self.empty.clone();
        } else if r <= self.depth() {
            out.tables[r - 1] = self.tables[r - 1].clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.empty.is_zero() && self.tables.iter().all(|t| t.iter().all(RatFun::is_zero))
    }

    /// Evaluates at a decorated word by substituting the letters' forms for `x_1..x_r`.
    pub fn evaluate(&self, w: &Word) -> Result<RatFun> {
        let r = w.len();
        if r == 0 {
            return Ok(RatFun::constant(self.empty.clone()));
        }
        if r > self.depth() {
            return Err(Error::DepthExceeded {
                len: r,
                depth: self.depth(),
            });
        }
        let n = self.spec.order() as usize;
        let mut idx = 0usize;
        let mut forms = Vec::with_capacity(r);
        for l in w.letters() {
            if l.sigma.spec() != &self.spec {
                return Err(Error::SpecMismatch);
            }
            idx = idx * n + l.sigma.index() as usize;
            forms.push(l.form.clone());
        }
        let f = &self.tables[r - 1][idx];
        if f.is_zero() || f.constant_value().is_some() {
            return Ok(f.clone());
        }
        Ok(f.subst(&forms)?)
    }

    fn check_compatible(&self, other: &Mould) -> Result<()> {
        if self.spec != other.spec || self.depth() != other.depth() {
            return Err(Error::SpecMismatch);
        }
        if self.convention != other.convention {
            return Err(Error::ConventionMismatch {
                expected: self.convention.name(),
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Mould, f: impl Fn(&RatFun, &RatFun) -> RatFun) -> Result<Mould> {
        self.check_compatible(other)?;
        Ok(Mould {
            convention: self.convention,
            spec: self.spec.clone(),
            empty: f(
                &RatFun::constant(self.empty.clone()),
                &RatFun::constant(other.empty.clone()),
            )
            .constant_value()
            .expect("constant"),
            tables: self
                .tables
                .iter()
                .zip(&other.tables)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(x, y)).collect())
                .collect(),
        })
    }

    pub fn add(&self, other: &Mould) -> Result<Mould> {
        self.zip_with(other, RatFun::add)
    }

    pub fn sub(&self, other: &Mould) -> Result<Mould> {
        self.zip_with(other, RatFun::sub)
    }

    pub fn scale(&self, k: &Rational) -> Mould {
        Mould {
            convention: self.convention,
            spec: self.spec.clone(),
            empty: &self.empty * k,
            tables: self
                .tables
                .iter()
                .map(|t| t.iter().map(|f| f.scale(k)).collect())
                .collect(),
        }
    }

    pub fn neg(&self) -> Mould {
        self.scale(&Rational::from_int(-1))
    }

    /// Applies `f` to every component, keeping `M(∅)`.
    pub fn map_cells(&self, mut f: impl FnMut(usize, &[GammaElem], &RatFun) -> Result<RatFun>) -> Result<Mould> {
        let mut tables = Vec::with_capacity(self.depth());
        for (i, t) in self.tables.iter().enumerate() {
            let r = i + 1;
            let mut out = Vec::with_capacity(t.len());
            for (idx, cell) in t.iter().enumerate() {
                let g = f(r, &self.spec.vector_at(r, idx), cell)?;
                check_vars(&g, r)?;
                out.push(g);
            }
            tables.push(out);
        }
        Ok(Mould {
            tables,
            ..self.clone()
        })
    }

    /// `(A × B)(w) = Σ_{w = w'w''} A(w') B(w'')`.
    pub fn mu(&self, other: &Mould) -> Result<Mould> {
        self.check_compatible(other)?;
        let n = self.spec.order() as usize;
        let mut tables = Vec::with_capacity(self.depth());
        for r in 1..=self.depth() {
            let count = self.spec.vector_count(r);
            let mut table = Vec::with_capacity(count);
            for idx in 0..count {
                let mut parts = Vec::with_capacity(r + 1);
                let mut radix = 1usize;
                // Split after position i: prefix index idx / n^{r-i}, suffix idx % n^{r-i}.
                for i in (0..=r).rev() {
                    let (pre, suf) = (idx / radix, idx % radix);
                    let a = if i == 0 {
                        RatFun::constant(self.empty.clone())
                    } else {
                        self.tables[i - 1][pre].clone()
                    };
                    if !a.is_zero() {
                        let b = if i == r {
                            RatFun::constant(other.empty.clone())
                        } else {
                            other.tables[r - i - 1][suf].shift(i as u32)
                        };
                        if !b.is_zero() {
                            parts.push(a.mul(&b));
                        }
                    }
                    radix *= n;
                }
                table.push(RatFun::sum(parts.iter()));
            }
            tables.push(table);
        }
        Ok(Mould {
            convention: self.convention,
            spec: self.spec.clone(),
            empty: &self.empty * &other.empty,
            tables,
        })
    }

    /// `[A, B] = A × B − B × A`.
    pub fn lu(&self, other: &Mould) -> Result<Mould> {
        self.mu(other)?.sub(&other.mu(self)?)
    }

    /// `A^{×k}`.
    pub fn power(&self, k: usize) -> Result<Mould> {
        let mut acc = Mould::identity(self.convention, &self.spec, self.depth());
        for _ in 0..k {
            acc = acc.mu(self)?;
        }
        Ok(acc)
    }

    /// `exp_×(A) = Σ_k A^{×k}/k!`, exact at depth `≤ R` for `A ∈ ARI`.
    pub fn exp(&self) -> Result<Mould> {
        if !self.is_ari() {
            return Err(Error::NotInARI);
        }
        let mut acc = Mould::identity(self.convention, &self.spec, self.depth());
        let mut term = acc.clone();
        for k in 1..=self.depth() {
            term = term.mu(self)?.scale(&Rational::new(1, k as i64));
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// `log_×(S) = Σ_{k≥1} (−1)^{k−1}/k (S − I)^{×k}` for `S ∈ GARI`.
    pub fn log(&self) -> Result<Mould> {
        if !self.is_gari() {
            return Err(Error::NotInGARI);
        }
        let d = self.sub(&Mould::identity(self.convention, &self.spec, self.depth()))?;
        let mut acc = Mould::zero(self.convention, &self.spec, self.depth());
        let mut power = Mould::identity(self.convention, &self.spec, self.depth());
        for k in 1..=self.depth() {
            power = power.mu(&d)?;
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&power.scale(&Rational::new(sign, k as i64)))?;
        }
        Ok(acc)
    }

    /// Two-sided inverse in GARI, solving `(M × N)(w) = 0` depth by depth.
    pub fn inverse(&self) -> Result<Mould> {
        if !self.is_gari() {
            return Err(Error::NotInGARI);
        }
        let n = self.spec.order() as usize;
        let mut inv = Mould::identity(self.convention, &self.spec, self.depth());
        for r in 1..=self.depth() {
            let count = self.spec.vector_count(r);
            let mut table = Vec::with_capacity(count);
            for idx in 0..count {
                let mut parts = Vec::with_capacity(r);
                let mut radix = 1usize;
                // N(w) = −Σ_{i≥1} M(w[..i]) N(w[i..]).
                for i in (1..=r).rev() {
                    let (pre, suf) = (idx / radix, idx % radix);
                    let a = &self.tables[i - 1][pre];
                    if !a.is_zero() {
                        let b = if i == r {
                            RatFun::one()
                        } else {
                            inv.tables[r - i - 1][suf].shift(i as u32)
                        };
                        if !b.is_zero() {
                            parts.push(a.mul(&b));
                        }
                    }
                    radix *= n;
                }
                table.push(RatFun::sum(parts.iter()).neg());
            }
            inv.tables[r - 1] = table;
        }
        Ok(inv)
    }

    /// The first cell where two compatible moulds differ: `(depth, σ-index)`, depth 0 for `∅`.
    pub fn first_difference(&self, other: &Mould) -> Option<(usize, usize)> {
        if self.empty != other.empty {
            return Some((0, 0));
        }
        for (i, (a, b)) in self.tables.iter().zip(&other.tables).enumerate() {
            if let Some(idx) = a.iter().zip(b).position(|(x, y)| x != y) {
                return Some((i + 1, idx));
            }
        }
        None
    }

    /// Serializes to the line format
    /// `mould convention=V group=z2 depth=R empty=e` then `r (σ…) : f` per cell.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "mould convention={} group={} depth={} empty={}\n",
            self.convention,
            self.spec,
            self.depth(),
            self.empty
        );
        for (i, t) in self.tables.iter().enumerate() {
            let r = i + 1;
            for (idx, f) in t.iter().enumerate() {
                out.push_str(&format!(
                    "{} {} : {}\n",
                    r,
                    render_vector(&self.spec.vector_at(r, idx)),
                    f.render(Family::X)
                ));
            }
        }
        out
    }

    /// Parses the format produced by [`Mould::to_text`]; missing cells are zero.
    pub fn from_text(s: &str) -> Result<Mould> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty mould file".into()))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("mould") {
            return Err(Error::Parse(format!("bad mould header `{header}`")));
        }
        let (mut conv, mut spec, mut depth, mut empty) = (None, None, None, None);
        for kv in fields {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header field `{kv}`")))?;
            match k {
                "convention" => conv = Some(v.parse::<Convention>()?),
                "group" => spec = Some(v.parse::<GammaSpec>()?),
                "depth" => {
                    depth = Some(
                        v.parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad depth `{v}`")))?,
                    )
                }
                "empty" => empty = Some(v.parse::<Rational>().map_err(Error::Exact)?),
                _ => return Err(Error::Parse(format!("unknown header field `{k}`"))),
            }
        }
        let missing = |f: &str| Error::Parse(format!("mould header lacks `{f}`"));
        let conv = conv.ok_or_else(|| missing("convention"))?;
        let spec = spec.ok_or_else(|| missing("group"))?;
        let depth = depth.ok_or_else(|| missing("depth"))?;
        let empty = empty.ok_or_else(|| missing("empty"))?;
        let mut m = Mould::constant_empty(conv, &spec, depth, empty);
        for line in lines {
            let (lhs, rhs) = line
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("bad mould line `{line}`")))?;
            let lhs = lhs.trim();
            let (r, vec) = lhs
                .split_once(char::is_whitespace)
                .ok_or_else(|| Error::Parse(format!("bad mould line `{line}`")))?;
            let r: usize = r
                .parse()
                .map_err(|_| Error::Parse(format!("bad depth in `{line}`")))?;
            if r == 0 || r > depth {
                return Err(Error::DepthExceeded { len: r, depth });
            }
            let sigmas = parse_vector(vec.trim(), &spec)?;
            if sigmas.len() != r {
                return Err(Error::Parse(format!("decoration length mismatch in `{line}`")));
            }
            let f = parse_ratfun(rhs.trim())?;
            check_vars(&f, r)?;
            m.tables[r - 1][spec.vector_index(&sigmas)] = f;
        }
        Ok(m)
    }
}

/// Parses a decoration vector `(a,b,…)` whose entries are elements of `spec`.
pub fn parse_vector(s: &str, spec: &GammaSpec) -> Result<Vec<GammaElem>> {
    let inner = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("bad decoration vector `{s}`")))?;
    if spec.moduli().len() == 1 {
        return inner.split(',').map(|t| spec.parse_element(t)).collect();
    }
    // Entries are themselves parenthesized tuples.
    let mut out = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        let close = rest
            .find(')')
            .ok_or_else(|| Error::Parse(format!("bad decoration vector `{s}`")))?;
        out.push(spec.parse_element(&rest[..=close])?);
        rest = rest[close + 1..].trim_start();
        rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
    }
    Ok(out)
}

impl fmt::Debug for Mould {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn check_vars(f: &RatFun, r: usize) -> Result<()> {
    let top = f.max_var();
    if top as usize > r {
        return Err(Error::VariableEscape { depth: r, var: top });
    }
    Ok(())
}

/// A random component in `x_1..x_r`: `a + b·x_k + c/(x_i + d·x_j)` with small integers.
pub fn random_component(rng: &mut ChaCha8Rng, r: usize) -> RatFun {
    let small = |rng: &mut ChaCha8Rng| Rational::from_int(rng.gen_range(-3..=3));
    let mut f = RatFun::constant(small(rng));
    let k = rng.gen_range(1..=r as u32);
    f = f.add(&RatFun::var(k).scale(&small(rng)));
    let i = rng.gen_range(1..=r as u32);
    let j = rng.gen_range(1..=r as u32);
    let d = rng.gen_range(0..=2i64);
    let form = if i == j {
        LinForm::var(i)
    } else {
        LinForm::from_terms([(i, 1), (j, d)])
    };
    let c = small(rng);
    if !c.is_zero() {
        f = f.add(&RatFun::inv_linform(&form).expect("nonzero form").scale(&c));
    }
    f
}

/// A mould with random components, seeded.
pub fn random_mould(
    convention: Convention,
    spec: &GammaSpec,
    depth: usize,
    empty: Rational,
    seed: u64,
) -> Mould {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Mould::make(convention, spec, depth, empty, |r, _| Ok(random_component(&mut rng, r)))
        .expect("random components stay in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Letter;
    use proptest::prelude::*;

    fn z2() -> GammaSpec {
        GammaSpec::cyclic(2)
    }

    fn x(i: u32) -> RatFun {
        RatFun::var(i)
    }

    fn pic(spec: &GammaSpec, depth: usize) -> Mould {
        Mould::make(Convention::V, spec, depth, Rational::one(), |r, _| {
            let mut f = RatFun::one();
            for i in 1..=r as u32 {
                f = f.mul(&RatFun::inv_linform(&LinForm::var(i)).unwrap());
            }
            Ok(f)
        })
        .unwrap()
    }

    fn rnd(seed: u64, empty: i64) -> Mould {
        random_mould(Convention::V, &z2(), 3, Rational::from_int(empty), seed)
    }

    #[test]
    fn make_rejects_escaping_variables() {
        let e = Mould::make(Convention::V, &z2(), 2, Rational::one(), |r, _| Ok(x(r as u32 + 1)));
        assert_eq!(e, Err(Error::VariableEscape { depth: 1, var: 2 }));
        let i = Mould::make(Convention::V, &z2(), 3, Rational::one(), |_, _| Ok(RatFun::zero())).unwrap();
        assert_eq!(i, Mould::identity(Convention::V, &z2(), 3));
        let t = Mould::make(Convention::V, &z2(), 0, Rational::one(), |_, _| Ok(RatFun::zero())).unwrap();
        assert_eq!(t.depth(), 0);
        assert!(t.is_gari());
    }

    #[test]
    fn mu_reference_values() {
        let p = pic(&GammaSpec::trivial(), 2);
        let pp = p.mu(&p).unwrap();
        let expected = RatFun::from_int(3).div(&x(1).mul(&x(2))).unwrap();
        assert_eq!(pp.cell(2, 0), &expected);
        // The three-split expansion at depth 2.
        let a = random_mould(Convention::V, &GammaSpec::trivial(), 2, Rational::new(2, 3), 7);
        let b = random_mould(Convention::V, &GammaSpec::trivial(), 2, Rational::new(-1, 2), 8);
        let ab = a.mu(&b).unwrap();
        let direct = RatFun::constant(a.empty_value().clone())
            .mul(b.cell(2, 0))
            .add(&a.cell(1, 0).mul(&b.cell(1, 0).shift(1)))
            .add(&a.cell(2, 0).scale(b.empty_value()));
        assert_eq!(ab.cell(2, 0), &direct);
        let i = Mould::identity(Convention::V, &z2(), 3);
        let m = rnd(3, 5);
        assert_eq!(i.mu(&m).unwrap(), m);
        assert_eq!(m.mu(&i).unwrap(), m);
    }

    #[test]
    fn lu_reference_values() {
        let m = rnd(11, 0);
        assert!(m.lu(&m).unwrap().is_zero());
        let i = Mould::identity(Convention::V, &z2(), 3);
        assert!(i.lu(&m).unwrap().is_zero());
        let t = GammaSpec::trivial();
        let p = random_mould(Convention::V, &t, 1, Rational::zero(), 1).truncate(2);
        let q = random_mould(Convention::V, &t, 1, Rational::zero(), 2).truncate(2);
        let b = p.lu(&q).unwrap();
        let expected = p.cell(1, 0).mul(&q.cell(1, 0).shift(1)).sub(&q.cell(1, 0).mul(&p.cell(1, 0).shift(1)));
        assert_eq!(b.cell(2, 0), &expected);
    }

    #[test]
    fn exp_and_log_reference_values() {
        let spec = z2();
        let zero = Mould::zero(Convention::V, &spec, 3);
        assert_eq!(zero.exp().unwrap(), Mould::identity(Convention::V, &spec, 3));
        let i = Mould::identity(Convention::V, &spec, 3);
        assert!(i.log().unwrap().is_zero());
        let a = rnd(21, 0);
        let e = a.exp().unwrap();
        for idx in 0..2 {
            assert_eq!(e.cell(1, idx), a.cell(1, idx));
        }
        for idx in 0..4 {
            let s = spec.vector_at(2, idx);
            let half = a
                .component(&s[..1])
                .mul(&a.component(&s[1..]).shift(1))
                .scale(&Rational::new(1, 2));
            assert_eq!(e.cell(2, idx), &a.cell(2, idx).add(&half));
        }
        assert_eq!(e.log().unwrap(), a);
        let s = rnd(22, 1);
        let l = s.log().unwrap();
        assert_eq!(l.cell(1, 1), s.cell(1, 1));
        assert_eq!(l.exp().unwrap(), s);
        assert_eq!(a.log(), Err(Error::NotInGARI));
        assert_eq!(s.exp(), Err(Error::NotInARI));
    }

    #[test]
    fn evaluate_substitutes_forms() {
        let spec = z2();
        let p = pic(&spec, 2);
        let w = Word::single(Letter::new(spec.element_at(1), LinForm::from_terms([(1, 1), (2, -1)])));
        assert_eq!(
            p.evaluate(&w).unwrap(),
            RatFun::inv_linform(&LinForm::from_terms([(1, 1), (2, -1)])).unwrap()
        );
        assert!(Mould::identity(Convention::V, &spec, 2).evaluate(&Word::empty()).unwrap().is_one());
        let long = Word::generic(&spec.vector_at(3, 0), 0);
        assert_eq!(p.evaluate(&long), Err(Error::DepthExceeded { len: 3, depth: 2 }));
        let collide = Word::from_letters([
            Letter::new(spec.identity(), LinForm::var(1)),
            Letter::new(spec.identity(), LinForm::var(1)),
        ]);
        let m = Mould::make(Convention::V, &spec, 2, Rational::one(), |r, _| {
            Ok(if r == 2 {
                RatFun::inv_linform(&LinForm::from_terms([(2, 1), (1, -1)])).unwrap()
            } else {
                RatFun::zero()
            })
        })
        .unwrap();
        assert!(m.evaluate(&collide).is_err());
    }

    #[test]
    fn text_round_trip_is_bit_exact() {
        for spec in [z2(), "z2xz3".parse().unwrap()] {
            let m = random_mould(Convention::U, &spec, 3, Rational::new(-2, 7), 5);
            let text = m.to_text();
            let back = Mould::from_text(&text).unwrap();
            assert_eq!(back, m);
            assert_eq!(back.to_text(), text);
        }
        let p = pic(&z2(), 2).to_text();
        assert!(p.starts_with("mould convention=V group=z2 depth=2 empty=1\n"));
        assert!(p.contains("2 (0,1) : 1/(x1*x2)\n"));
        assert!(Mould::from_text("mould convention=V group=z2 depth=1 empty=1\n1 (0) : 1/x2\n").is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn mu_is_associative(s in 0u64..1000) {
            let (a, b, c) = (rnd(s, 1), rnd(s + 1, 0), rnd(s + 2, -2));
            prop_assert_eq!(a.mu(&b).unwrap().mu(&c).unwrap(), a.mu(&b.mu(&c).unwrap()).unwrap());
        }

        #[test]
        fn gari_inverse_is_two_sided(s in 0u64..1000) {
            let m = rnd(s, 1);
            let n = m.inverse().unwrap();
            let i = Mould::identity(Convention::V, &z2(), 3);
            prop_assert_eq!(m.mu(&n).unwrap(), i.clone());
            prop_assert_eq!(n.mu(&m).unwrap(), i);
        }

        #[test]
        fn lu_satisfies_jacobi(s in 0u64..1000) {
            let (a, b, c) = (rnd(s, 0), rnd(s + 1, 0), rnd(s + 2, 0));
            let j = a.lu(&b.lu(&c).unwrap()).unwrap()
                .add(&b.lu(&c.lu(&a).unwrap()).unwrap()).unwrap()
                .add(&c.lu(&a.lu(&b).unwrap()).unwrap()).unwrap();
            prop_assert!(j.is_zero());
        }

        #[test]
        fn exp_of_commuting_sum_factorizes(s in 0u64..1000, k in -3i64..=3) {
            let m = rnd(s, 0);
            let n = m.scale(&Rational::new(k, 2));
            prop_assert_eq!(
                m.add(&n).unwrap().exp().unwrap(),
                m.exp().unwrap().mu(&n.exp().unwrap()).unwrap()
            );
        }
    }
}
