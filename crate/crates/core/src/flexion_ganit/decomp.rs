//! The decomposition sets `D_t(ω)` and `E_t(ω)` with their partitions and bijections.

use crate::words::Word;

/// `D_t`: `c_1..c_{t−1}` nonempty. `E_t`: `c_2..c_{t−1}` nonempty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecompositionKind {
    D,
    E,
}

/// Restriction on the length of the first part.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeadFilter {
    Any,
    AtLeastTwo,
    One,
}

/// A tuple `(c_1; …; c_t)` of words.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Decomposition {
    pub parts: Vec<Word>,
}

impl Decomposition {
    pub fn concat(&self) -> Word {
        self.parts.iter().fold(Word::empty(), |acc, p| acc.concat(p))
    }
}

/// Every decomposition of `w` into `t ≥ 1` parts of the given kind, in cut-position order.
pub fn decompositions(w: &Word, t: usize, kind: DecompositionKind, filter: HeadFilter) -> Vec<Decomposition> {
    assert!(t >= 1, "decompositions need at least one part");
    let n = w.len();
    let mut out = Vec::new();
    let mut cuts = vec![0usize; t + 1];
    cuts[t] = n;
    fn rec(
        w: &Word,
        t: usize,
        kind: DecompositionKind,
        filter: HeadFilter,
        k: usize,
        cuts: &mut Vec<usize>,
        out: &mut Vec<Decomposition>,
    ) {
        if k == t {
            let lens: Vec<usize> = (0..t).map(|i| cuts[i + 1] - cuts[i]).collect();
            let lo = match kind {
                DecompositionKind::D => 0,
                DecompositionKind::E => 1,
            };
            if (lo..t.saturating_sub(1)).any(|i| lens[i] == 0) {
                return;
            }
            let head_ok = match filter {
                HeadFilter::Any => true,
                HeadFilter::AtLeastTwo => lens[0] >= 2,
                HeadFilter::One => lens[0] == 1,
            };
            if head_ok {
                out.push(Decomposition {
                    parts: (0..t).map(|i| w.slice(cuts[i], cuts[i + 1])).collect(),
                });
            }
            return;
        }
        for c in cuts[k - 1]..=w.len() {
            cuts[k] = c;
            rec(w, t, kind, filter, k + 1, cuts, out);
        }
        cuts[k] = w.len();
    }
    if t == 1 {
        cuts[1] = n;
        rec(w, t, kind, filter, t, &mut cuts, &mut out);
    } else {
        rec(w, t, kind, filter, 1, &mut cuts, &mut out);
    }
    out
}

/// `D_t^{≥2}(ω) → D_t(ω')`: removes the first letter of `c_1`.
pub fn strip_head(d: &Decomposition) -> Decomposition {
    let mut parts = d.parts.clone();
    parts[0] = parts[0].tail();
    Decomposition { parts }
}

/// `D_t^1(ω) → D_{t−1}(ω')`: drops the one-letter part `c_1`.
pub fn drop_head(d: &Decomposition) -> Decomposition {
    Decomposition {
        parts: d.parts[1..].to_vec(),
    }
}

/// `E_t(ω') → D_t(ω)`: `(b_0; u) ↦ (α_1 b_0; u)` where `α_1` is the first letter of `ω`.
pub fn prepend_head(w: &Word, d: &Decomposition) -> Decomposition {
    let head = w.first().expect("nonempty word");
    let mut parts = d.parts.clone();
    parts[0] = parts[0].prepend(head);
    Decomposition { parts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::GammaSpec;
    use std::collections::BTreeSet;

    fn word(n: usize) -> Word {
        let spec = GammaSpec::cyclic(2);
        let sig: Vec<_> = (0..n).map(|i| spec.element_at((i % 2) as u32)).collect();
        Word::generic(&sig, 0)
    }

    fn set(v: Vec<Decomposition>) -> BTreeSet<Decomposition> {
        let n = v.len();
        let s: BTreeSet<_> = v.into_iter().collect();
        assert_eq!(s.len(), n, "duplicate decompositions");
        s
    }

    #[test]
    fn reference_sets() {
        let w = word(2);
        let d2 = decompositions(&w, 2, DecompositionKind::D, HeadFilter::Any);
        assert_eq!(d2.len(), 2);
        assert!(d2.contains(&Decomposition { parts: vec![w.slice(0, 1), w.slice(1, 2)] }));
        assert!(d2.contains(&Decomposition { parts: vec![w.clone(), Word::empty()] }));
        let e = Word::empty();
        assert_eq!(
            decompositions(&e, 1, DecompositionKind::E, HeadFilter::Any),
            vec![Decomposition { parts: vec![Word::empty()] }]
        );
        // With no constraint on c_1 or c_2, E_2(∅) holds the single pair (∅;∅).
        assert_eq!(decompositions(&e, 2, DecompositionKind::E, HeadFilter::Any).len(), 1);
        assert!(decompositions(&e, 3, DecompositionKind::E, HeadFilter::Any).is_empty());
        assert!(decompositions(&e, 2, DecompositionKind::D, HeadFilter::Any).is_empty());
        for n in 0..=4 {
            let w = word(n);
            for t in 1..=4 {
                assert_eq!(
                    decompositions(&w, t, DecompositionKind::E, HeadFilter::Any).len() >= 1,
                    t <= n + 2
                );
            }
        }
    }

    #[test]
    fn partitions_and_bijections() {
        for n in 0..=4 {
            let w = word(n);
            for t in 1..=4 {
                let d = set(decompositions(&w, t, DecompositionKind::D, HeadFilter::Any));
                let e = set(decompositions(&w, t, DecompositionKind::E, HeadFilter::Any));
                for x in d.iter().chain(&e) {
                    assert_eq!(x.concat(), w);
                    assert_eq!(x.parts.len(), t);
                }
                if t >= 2 {
                    let ge2 = set(decompositions(&w, t, DecompositionKind::D, HeadFilter::AtLeastTwo));
                    let one = set(decompositions(&w, t, DecompositionKind::D, HeadFilter::One));
                    assert!(ge2.is_disjoint(&one));
                    assert_eq!(ge2.union(&one).cloned().collect::<BTreeSet<_>>(), d);
                    let prev = set(decompositions(&w, t - 1, DecompositionKind::D, HeadFilter::Any));
                    let lifted: BTreeSet<_> = prev
                        .iter()
                        .map(|x| {
                            let mut parts = vec![Word::empty()];
                            parts.extend(x.parts.iter().cloned());
                            Decomposition { parts }
                        })
                        .collect();
                    assert!(lifted.is_disjoint(&d));
                    assert_eq!(lifted.union(&d).cloned().collect::<BTreeSet<_>>(), e);
                    if n >= 1 {
                        let wp = w.tail();
                        let img: BTreeSet<_> = ge2.iter().map(strip_head).collect();
                        assert_eq!(img.len(), ge2.len());
                        assert_eq!(img, set(decompositions(&wp, t, DecompositionKind::D, HeadFilter::Any)));
                        let img: BTreeSet<_> = one.iter().map(drop_head).collect();
                        assert_eq!(img.len(), one.len());
                        assert_eq!(img, set(decompositions(&wp, t - 1, DecompositionKind::D, HeadFilter::Any)));
                        let ew = set(decompositions(&wp, t, DecompositionKind::E, HeadFilter::Any));
                        let img: BTreeSet<_> = ew.iter().map(|x| prepend_head(&w, x)).collect();
                        assert_eq!(img.len(), ew.len());
                        assert_eq!(img, d);
                    }
                }
            }
        }
    }
}
