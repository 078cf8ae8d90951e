//! The finite abelian decoration group `Γ = Z/n_1 × … × Z/n_k`, written multiplicatively.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::Error;

/// A product of cyclic groups, given by its moduli.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GammaSpec {
    moduli: Arc<[u32]>,
}

impl GammaSpec {
    pub fn new(moduli: &[u32]) -> Result<Self, Error> {
        if moduli.is_empty() || moduli.contains(&0) {
            return Err(Error::Parse(format!("invalid group moduli {moduli:?}")));
        }
        let order = moduli.iter().try_fold(1u32, |acc, &n| acc.checked_mul(n));
        if order.is_none() {
            return Err(Error::Parse("group order too large".into()));
        }
        Ok(GammaSpec {
            moduli: moduli.into(),
        })
    }

    /// The trivial group, `moduli = (1)`.
    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: u32) -> Self {
        Self::new(&[n]).expect("positive modulus")
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    pub fn order(&self) -> u32 {
        self.moduli.iter().product()
    }

    pub fn identity(&self) -> GammaElem {
        self.element_at(0)
    }

    /// Element with the given residues, reduced componentwise.
    pub fn element(&self, residues: &[i64]) -> Result<GammaElem, Error> {
        if residues.len() != self.moduli.len() {
            return Err(Error::SpecMismatch);
        }
        let mut index = 0u32;
        for (&r, &n) in residues.iter().zip(self.moduli.iter()) {
            index = index * n + r.rem_euclid(n as i64) as u32;
        }
        Ok(self.element_at(index))
    }

    /// Element number `index` in mixed-radix order (first component most significant).
    pub fn element_at(&self, index: u32) -> GammaElem {
        assert!(index < self.order(), "element index out of range");
        GammaElem {
            spec: self.clone(),
            index,
        }
    }

    /// All elements in mixed-radix order.
    pub fn elements(&self) -> impl Iterator<Item = GammaElem> + '_ {
        (0..self.order()).map(|i| self.element_at(i))
    }

    /// Number of decoration vectors of length `r`.
    pub fn vector_count(&self, r: usize) -> usize {
        (self.order() as usize).pow(r as u32)
    }

    /// Decoration vector number `index` of length `r`, position 0 most significant.
    pub fn vector_at(&self, r: usize, mut index: usize) -> Vec<GammaElem> {
        let n = self.order() as usize;
        let mut out = vec![self.identity(); r];
        for slot in out.iter_mut().rev() {
            *slot = self.element_at((index % n) as u32);
            index /= n;
        }
        out
    }

    /// Inverse of [`GammaSpec::vector_at`].
    pub fn vector_index(&self, sigmas: &[GammaElem]) -> usize {
        let n = self.order() as usize;
        sigmas.iter().fold(0, |acc, s| acc * n + s.index as usize)
    }

    /// All decoration vectors of length `r` in counting order.
    pub fn vectors(&self, r: usize) -> impl Iterator<Item = Vec<GammaElem>> + '_ {
        (0..self.vector_count(r)).map(move |i| self.vector_at(r, i))
    }

    fn residues_of(&self, mut index: u32) -> SmallVec<[u32; 4]> {
        let mut out: SmallVec<[u32; 4]> = SmallVec::from_elem(0, self.moduli.len());
        for (slot, &n) in out.iter_mut().zip(self.moduli.iter()).rev() {
            *slot = index % n;
            index /= n;
        }
        out
    }

    fn index_of(&self, residues: &[u32]) -> u32 {
        residues
            .iter()
            .zip(self.moduli.iter())
            .fold(0, |acc, (&r, &n)| acc * n + r)
    }

    /// Parses an element: a bare residue for cyclic groups, `(a,b,…)` otherwise.
    pub fn parse_element(&self, s: &str) -> Result<GammaElem, Error> {
        let s = s.trim();
        let inner = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(s);
        let residues = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad group element `{s}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.element(&residues)
    }
}

impl fmt::Display for GammaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.moduli.iter().map(|n| format!("z{n}")).collect();
        f.write_str(&parts.join("x"))
    }
}

impl fmt::Debug for GammaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for GammaSpec {
    type Err = Error;

    /// Parses `z2`, `z3xz4`, ….
    fn from_str(s: &str) -> Result<Self, Error> {
        let moduli = s
            .trim()
            .split('x')
            .map(|part| {
                part.strip_prefix('z')
                    .and_then(|n| n.parse::<u32>().ok())
                    .ok_or_else(|| Error::Parse(format!("bad group `{s}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(&moduli)
    }
}

/// An element of a [`GammaSpec`], stored as its mixed-radix index.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GammaElem {
    spec: GammaSpec,
    index: u32,
}

impl GammaElem {
    pub fn spec(&self) -> &GammaSpec {
        &self.spec
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn residues(&self) -> Vec<u32> {
        self.spec.residues_of(self.index).to_vec()
    }

    pub fn is_identity(&self) -> bool {
        self.index == 0
    }

    fn check(&self, other: &GammaElem) -> Result<(), Error> {
        if Arc::ptr_eq(&self.spec.moduli, &other.spec.moduli) || self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    pub fn try_mul(&self, other: &GammaElem) -> Result<GammaElem, Error> {
        self.check(other)?;
        if self.index == 0 {
            return Ok(other.clone());
        }
        if other.index == 0 {
            return Ok(self.clone());
        }
        let a = self.spec.residues_of(self.index);
        let b = self.spec.residues_of(other.index);
        let c: SmallVec<[u32; 4]> = a
            .iter()
            .zip(b.iter())
            .zip(self.spec.moduli.iter())
            .map(|((x, y), n)| (x + y) % n)
            .collect();
        Ok(self.spec.element_at(self.spec.index_of(&c)))
    }

    /// Group product; panics on mismatched groups.
    pub fn mul(&self, other: &GammaElem) -> GammaElem {
        self.try_mul(other).expect("elements of the same group")
    }

    pub fn inv(&self) -> GammaElem {
        if self.index == 0 {
            return self.clone();
        }
        let a = self.spec.residues_of(self.index);
        let c: SmallVec<[u32; 4]> = a
            .iter()
            .zip(self.spec.moduli.iter())
            .map(|(x, n)| (n - x) % n)
            .collect();
        self.spec.element_at(self.spec.index_of(&c))
    }

    /// `self · other⁻¹`.
    pub fn div(&self, other: &GammaElem) -> GammaElem {
        self.mul(&other.inv())
    }
}

impl PartialOrd for GammaElem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GammaElem {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.index
            .cmp(&other.index)
            .then_with(|| self.spec.cmp(&other.spec))
    }
}

impl fmt::Display for GammaElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.spec.residues_of(self.index);
        if r.len() == 1 {
            write!(f, "{}", r[0])
        } else {
            let parts: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(","))
        }
    }
}

impl fmt::Debug for GammaElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Renders a decoration vector as `(a,b,…)`.
pub fn render_vector(sigmas: &[GammaElem]) -> String {
    let parts: Vec<String> = sigmas.iter().map(|s| s.to_string()).collect();
    format!("({})", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_specs_up_to_12() -> Vec<GammaSpec> {
        let mut out = Vec::new();
        for n in 1..=12 {
            out.push(GammaSpec::cyclic(n));
        }
        for (a, b) in [(2, 2), (2, 3), (2, 4), (3, 3), (2, 6), (3, 4)] {
            out.push(GammaSpec::new(&[a, b]).unwrap());
        }
        out.push(GammaSpec::new(&[2, 2, 2]).unwrap());
        out
    }

    #[test]
    fn reference_products() {
        let z2 = GammaSpec::cyclic(2);
        let one = z2.element(&[1]).unwrap();
        assert!(one.mul(&one).is_identity());
        let z6 = GammaSpec::cyclic(6);
        assert_eq!(z6.element(&[2]).unwrap().inv(), z6.element(&[4]).unwrap());
        let g = z6.element(&[5]).unwrap();
        assert_eq!(g.mul(&z6.identity()), g);
    }

    #[test]
    fn mismatched_groups_are_rejected() {
        let a = GammaSpec::cyclic(2).identity();
        let b = GammaSpec::cyclic(3).identity();
        assert_eq!(a.try_mul(&b), Err(Error::SpecMismatch));
    }

    #[test]
    fn abelian_group_axioms_by_exhaustion() {
        for spec in all_specs_up_to_12() {
            assert!(spec.order() <= 12);
            let els: Vec<GammaElem> = spec.elements().collect();
            let e = spec.identity();
            for a in &els {
                assert_eq!(a.mul(&e), *a);
                assert!(a.mul(&a.inv()).is_identity());
                for b in &els {
                    assert_eq!(a.mul(b), b.mul(a));
                    for c in &els {
                        assert_eq!(a.mul(b).mul(c), a.mul(&b.mul(c)));
                    }
                }
            }
        }
    }

    #[test]
    fn text_forms_round_trip() {
        let spec: GammaSpec = "z3xz4".parse().unwrap();
        assert_eq!(spec.moduli(), &[3, 4]);
        assert_eq!(spec.to_string(), "z3xz4");
        let g = spec.parse_element("(2,3)").unwrap();
        assert_eq!(g.residues(), vec![2, 3]);
        assert_eq!(g.to_string(), "(2,3)");
        let z2: GammaSpec = "z2".parse().unwrap();
        assert_eq!(z2.parse_element("1").unwrap().to_string(), "1");
        assert!("y2".parse::<GammaSpec>().is_err());
        assert!("z0".parse::<GammaSpec>().is_err());
    }

    #[test]
    fn vector_indexing_is_mixed_radix() {
        let z2 = GammaSpec::cyclic(2);
        let vs: Vec<String> = z2.vectors(2).map(|v| render_vector(&v)).collect();
        assert_eq!(vs, ["(0,0)", "(0,1)", "(1,0)", "(1,1)"]);
        for (i, v) in z2.vectors(3).enumerate() {
            assert_eq!(z2.vector_index(&v), i);
        }
    }
}
