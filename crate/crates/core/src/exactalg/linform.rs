use std::fmt;

use smallvec::SmallVec;

use super::{Family, Poly, Rational};

/// Integer linear combination of variables, stored sorted by variable index
/// with no zero coefficients. The empty form is zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LinForm {
    terms: SmallVec<[(u32, i64); 3]>,
}

impl LinForm {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The single variable `x_i` (indices start at 1).
    pub fn var(i: u32) -> Self {
        assert!(i >= 1, "variable indices start at 1");
        let mut terms = SmallVec::new();
        terms.push((i, 1));
        LinForm { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, i64)>>(it: I) -> Self {
        let mut terms: SmallVec<[(u32, i64); 3]> = SmallVec::new();
        for (v, c) in it {
            assert!(v >= 1, "variable indices start at 1");
            match terms.binary_search_by_key(&v, |t| t.0) {
                Ok(pos) => terms[pos].1 += c,
                Err(pos) => terms.insert(pos, (v, c)),
            }
        }
        terms.retain(|t| t.1 != 0);
        LinForm { terms }
    }

    pub fn terms(&self) -> &[(u32, i64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(i)` when the form is exactly `x_i`.
    pub fn as_single_var(&self) -> Option<u32> {
        match self.terms.as_slice() {
            [(v, 1)] => Some(*v),
            _ => None,
        }
    }

    pub fn max_var(&self) -> u32 {
        self.terms.last().map_or(0, |t| t.0)
    }

    pub fn coeff(&self, v: u32) -> i64 {
        self.terms
            .binary_search_by_key(&v, |t| t.0)
            .map_or(0, |p| self.terms[p].1)
    }

    pub fn add(&self, other: &LinForm) -> LinForm {
        Self::from_terms(self.terms.iter().chain(other.terms.iter()).copied())
    }

    pub fn sub(&self, other: &LinForm) -> LinForm {
        Self::from_terms(
            self.terms
                .iter()
                .copied()
                .chain(other.terms.iter().map(|&(v, c)| (v, -c))),
        )
    }

    pub fn neg(&self) -> LinForm {
        LinForm {
            terms: self.terms.iter().map(|&(v, c)| (v, -c)).collect(),
        }
    }

    /// Substitutes `x_i ↦ map[i-1]`.
    pub fn compose(&self, map: &[LinForm]) -> LinForm {
        let mut acc = LinForm::zero();
        for &(v, c) in &self.terms {
            let img = &map[v as usize - 1];
            acc = Self::from_terms(
                acc.terms
                    .iter()
                    .copied()
                    .chain(img.terms.iter().map(|&(w, d)| (w, c * d))),
            );
        }
        acc
    }

    pub fn to_poly(&self) -> Poly {
        Poly::linear(
            self.terms
                .iter()
                .map(|&(v, c)| (v, Rational::from_int(c))),
            Rational::zero(),
        )
    }

    /// Renders as e.g. `v2-v1`-style text with terms in increasing index order.
    pub fn render(&self, family: Family) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, &(v, c)) in self.terms.iter().enumerate() {
            if c < 0 {
                out.push('-');
            } else if k > 0 {
                out.push('+');
            }
            if c.abs() != 1 {
                out.push_str(&format!("{}*", c.abs()));
            }
            out.push_str(&format!("{}{}", family.letter(), v));
        }
        out
    }
}

impl fmt::Display for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Family::V))
    }
}

impl fmt::Debug for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combines_and_drops_zeros() {
        let a = LinForm::from_terms([(2, 1), (1, -1), (2, -1)]);
        assert_eq!(a, LinForm::from_terms([(1, -1)]));
        assert!(LinForm::var(3).sub(&LinForm::var(3)).is_zero());
        assert_eq!(LinForm::var(4).as_single_var(), Some(4));
        assert_eq!(LinForm::from_terms([(1, 2)]).as_single_var(), None);
    }

    #[test]
    fn renders_in_index_order() {
        let f = LinForm::var(2).sub(&LinForm::var(1));
        assert_eq!(f.render(Family::V), "-v1+v2");
        assert_eq!(LinForm::from_terms([(3, 2), (1, 1)]).render(Family::U), "u1+2*u3");
    }

    #[test]
    fn compose_substitutes() {
        let f = LinForm::from_terms([(1, 1), (2, 1)]);
        let map = [LinForm::var(3), LinForm::var(3).neg()];
        assert!(f.compose(&map).is_zero());
    }
}
