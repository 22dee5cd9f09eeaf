use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::tester::Oracle;
use crate::error::Result;
use crate::field::{Field, FieldElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trial {
    pub point: Vec<FieldElement>,
    pub value: FieldElement,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RandomOutcome {
    NonZero { trial: usize },
    /// Every trial vanished; a nonzero polynomial of degree `d` does so with probability at
    /// most `bound = (d / |T|)^trials`.
    ProbablyZero { bound: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RandomVerdict {
    pub outcome: RandomOutcome,
    pub trials: Vec<Trial>,
}

impl RandomVerdict {
    pub fn is_nonzero(&self) -> bool {
        matches!(self.outcome, RandomOutcome::NonZero { .. })
    }

    pub fn witness(&self) -> Option<&Trial> {
        match self.outcome {
            RandomOutcome::NonZero { trial } => self.trials.get(trial),
            RandomOutcome::ProbablyZero { .. } => None,
        }
    }
}

/// Evaluates at `trials` points drawn uniformly from `T^n`, where `T` is the first
/// `sample_set_size` elements of the canonical enumeration. The stream is ChaCha8 seeded
/// with `seed`, one `random_range(0..|T|)` draw per coordinate.
pub fn schwartz_zippel_test(
    oracle: &dyn Oracle,
    field: &Field,
    n: usize,
    d: usize,
    sample_set_size: u128,
    trials: usize,
    seed: u64,
) -> Result<RandomVerdict> {
    let t = field.first_elements(sample_set_size)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut log = Vec::with_capacity(trials);
    for trial in 0..trials {
        let point: Vec<FieldElement> = (0..n).map(|_| t[rng.random_range(0..t.len())].clone()).collect();
        let value = oracle.evaluate(&point)?;
        let hit = !value.is_zero();
        log.push(Trial { point, value });
        if hit {
            return Ok(RandomVerdict { outcome: RandomOutcome::NonZero { trial }, trials: log });
        }
    }
    let bound = (d as f64 / sample_set_size as f64).min(1.0).powi(trials as i32);
    Ok(RandomVerdict { outcome: RandomOutcome::ProbablyZero { bound }, trials: log })
}

/// Number of zeros of the oracle on the full grid `T^n`, together with `|T|^n`.
pub fn grid_zero_count(oracle: &dyn Oracle, n: usize, t: &[FieldElement]) -> Result<(u128, u128)> {
    let mut grid = super::Grid::new(n, t.len());
    let mut changed = Vec::new();
    let mut point: Vec<FieldElement> = vec![t[0].clone(); n];
    let (mut zeros, mut total) = (0u128, 0u128);
    loop {
        for (x, &a) in point.iter_mut().zip(grid.digits()) {
            *x = t[a].clone();
        }
        total += 1;
        if oracle.evaluate(&point)?.is_zero() {
            zeros += 1;
        }
        if !grid.advance(&mut changed) {
            return Ok((zeros, total));
        }
    }
}
