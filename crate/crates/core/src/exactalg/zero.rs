use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{RatFun, Rational};

/// How to decide whether an expression vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroTest {
    /// Exact: combine into canonical form and compare.
    Canonical,
    /// Evaluate at random rational points; a nonzero value proves nonvanishing.
    Probabilistic { trials: u32, seed: u64 },
}

const BOUND: i64 = 1 << 20;
const POLE_RETRIES: u32 = 16;

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| Rational::new(rng.gen_range(-BOUND..=BOUND), rng.gen_range(1..=BOUND)))
        .collect()
}

/// Whether `Σ terms` is identically zero.
///
/// The probabilistic strategy can only err by calling a nonzero sum zero, with
/// probability at most `deg / (2·BOUND)` per trial.
pub fn sum_is_zero(terms: &[RatFun], strategy: ZeroTest) -> bool {
    match strategy {
        ZeroTest::Canonical => RatFun::sum(terms.iter()).is_zero(),
        ZeroTest::Probabilistic { trials, seed } => {
            let n = terms.iter().map(|t| t.max_var()).max().unwrap_or(0) as usize;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut done = 0;
            let mut misses = 0;
            while done < trials.max(1) {
                let pt = random_point(&mut rng, n);
                let mut acc = Rational::zero();
                let mut pole = false;
                for t in terms {
                    match t.eval(&pt) {
                        Some(v) => acc = &acc + &v,
                        None => {
                            pole = true;
                            break;
                        }
                    }
                }
                if pole {
                    misses += 1;
                    if misses > POLE_RETRIES * trials.max(1) {
                        return RatFun::sum(terms.iter()).is_zero();
                    }
                    continue;
                }
                if !acc.is_zero() {
                    return false;
                }
                done += 1;
            }
            true
        }
    }
}

impl RatFun {
    pub fn is_zero_by(&self, strategy: ZeroTest) -> bool {
        sum_is_zero(std::slice::from_ref(self), strategy)
    }
}
