//! The named moulds `A`, `paj`, `C`, `pic`, `pij`, `poc`, and the involutions `pari`, `anti`.

use std::fmt;
use std::str::FromStr;

use crate::exactalg::{LinForm, RatFun, Rational};
use crate::gamma::GammaSpec;
use crate::mould::{Convention, Mould};
use crate::words::Word;
use crate::{Error, Result};

/// Anything that can be evaluated at a decorated word.
pub trait WordFunction {
    fn eval_word(&self, w: &Word) -> Result<RatFun>;
}

impl WordFunction for Mould {
    fn eval_word(&self, w: &Word) -> Result<RatFun> {
        self.evaluate(w)
    }
}

/// The closed-form example moulds; none depends on the decorations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedMould {
    A,
    Paj,
    C,
    Pic,
    Pij,
    Poc,
}

impl NamedMould {
    pub const ALL: [NamedMould; 6] = [
        NamedMould::A,
        NamedMould::Paj,
        NamedMould::C,
        NamedMould::Pic,
        NamedMould::Pij,
        NamedMould::Poc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedMould::A => "A",
            NamedMould::Paj => "paj",
            NamedMould::C => "C",
            NamedMould::Pic => "pic",
            NamedMould::Pij => "pij",
            NamedMould::Poc => "poc",
        }
    }

    pub fn convention(self) -> Convention {
        match self {
            NamedMould::A | NamedMould::Paj => Convention::U,
            _ => Convention::V,
        }
    }

    pub fn empty_value(self) -> Rational {
        match self {
            NamedMould::A | NamedMould::C => Rational::zero(),
            _ => Rational::one(),
        }
    }

    /// Tabulates the mould up to depth `depth`.
    pub fn tabulate(self, spec: &GammaSpec, depth: usize) -> Mould {
        Mould::make(self.convention(), spec, depth, self.empty_value(), |_, sigmas| {
            self.eval_word(&Word::generic(sigmas, 0))
        })
        .expect("closed forms are regular on generic words")
    }
}

fn inv_product(factors: &[LinForm]) -> Result<RatFun> {
    let mut f = RatFun::one();
    for l in factors {
        f = f.mul(&RatFun::inv_linform(l)?);
    }
    Ok(f)
}

impl WordFunction for NamedMould {
    /// Evaluates the closed form at any word length.
    fn eval_word(&self, w: &Word) -> Result<RatFun> {
        let f = w.forms();
        let r = f.len();
        if r == 0 {
            return Ok(RatFun::constant(self.empty_value()));
        }
        let diffs = |g: &dyn Fn(usize) -> LinForm| -> Vec<LinForm> { (1..r).map(g).collect() };
        match self {
            NamedMould::A => {
                if r < 2 {
                    return Ok(RatFun::zero());
                }
                inv_product(&diffs(&|i| f[i].sub(&f[i - 1])))
            }
            NamedMould::Paj => {
                let mut partial = LinForm::zero();
                let sums: Vec<LinForm> = f
                    .iter()
                    .map(|x| {
                        partial = partial.add(x);
                        partial.clone()
                    })
                    .collect();
                inv_product(&sums)
            }
            NamedMould::C => inv_product(&diffs(&|i| f[i].sub(&f[0]))),
            NamedMould::Pic => inv_product(&f),
            NamedMould::Pij => {
                let mut fs = diffs(&|i| f[i - 1].sub(&f[i]));
                fs.push(f[r - 1].clone());
                inv_product(&fs)
            }
            NamedMould::Poc => {
                let mut fs = vec![f[0].clone()];
                fs.extend(diffs(&|i| f[i - 1].sub(&f[i])));
                Ok(inv_product(&fs)?.neg())
            }
        }
    }
}

impl fmt::Display for NamedMould {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedMould {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown named mould `{s}`")))
    }
}

/// `pari(M)` multiplies the depth-`r` component by `(−1)^r`.
pub fn pari(m: &Mould) -> Mould {
    m.map_cells(|r, _, f| Ok(if r % 2 == 1 { f.neg() } else { f.clone() }))
        .expect("sign changes keep variables")
}

/// `anti(M)(σ_1..σ_r; x_1..x_r) = M(σ_r..σ_1; x_r..x_1)`.
pub fn anti(m: &Mould) -> Mould {
    m.map_cells(|r, sigmas, _| {
        let rev: Vec<_> = sigmas.iter().rev().cloned().collect();
        let map: Vec<u32> = (1..=r as u32).rev().collect();
        Ok(m.component(&rev).rename(&map))
    })
    .expect("reversal keeps variables")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mould::random_mould;

    fn lf(terms: &[(u32, i64)]) -> LinForm {
        LinForm::from_terms(terms.iter().copied())
    }

    fn inv(terms: &[(u32, i64)]) -> RatFun {
        RatFun::inv_linform(&lf(terms)).unwrap()
    }

    #[test]
    fn reference_components() {
        let spec = GammaSpec::cyclic(2);
        let pic = NamedMould::Pic.tabulate(&spec, 3);
        assert_eq!(pic.cell(2, 1), &inv(&[(1, 1)]).mul(&inv(&[(2, 1)])));
        let poc = NamedMould::Poc.tabulate(&spec, 3);
        assert_eq!(poc.cell(1, 0), &inv(&[(1, 1)]).neg());
        let pij = NamedMould::Pij.tabulate(&spec, 3);
        assert_eq!(pij.cell(2, 0), &inv(&[(1, 1), (2, -1)]).mul(&inv(&[(2, 1)])));
        let a = NamedMould::A.tabulate(&spec, 3);
        assert!(a.cell(1, 0).is_zero());
        assert_eq!(a.cell(2, 3), &inv(&[(2, 1), (1, -1)]));
        let paj = NamedMould::Paj.tabulate(&spec, 3);
        assert_eq!(paj.cell(2, 2), &inv(&[(1, 1)]).mul(&inv(&[(1, 1), (2, 1)])));
        let c = NamedMould::C.tabulate(&spec, 3);
        assert!(c.cell(1, 1).is_one());
        assert_eq!(c.cell(3, 0), &inv(&[(2, 1), (1, -1)]).mul(&inv(&[(3, 1), (1, -1)])));
        assert!(NamedMould::A.tabulate(&spec, 0).is_ari());
        assert_eq!("pij".parse::<NamedMould>().unwrap(), NamedMould::Pij);
    }

    #[test]
    fn poc_is_pari_anti_pij() {
        let spec = GammaSpec::cyclic(2);
        let pij = NamedMould::Pij.tabulate(&spec, 3);
        assert_eq!(pari(&anti(&pij)), NamedMould::Poc.tabulate(&spec, 3));
        let m = random_mould(Convention::V, &spec, 3, Rational::one(), 3);
        assert_eq!(anti(&anti(&m)), m);
        assert_eq!(pari(&pari(&m)), m);
        assert_eq!(anti(&pari(&m)), pari(&anti(&m)));
    }
}
