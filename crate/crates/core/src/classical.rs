//! Exact and Monte Carlo evolution of the classical capital-dependent games.
//!
//! Game A wins with probability `1/2 - eps`. Game B depends on the current
//! capital: on multiples of three it wins with `1/10 - eps`, otherwise with
//! `3/4 - eps`. Capital is an exact integer distribution here; there is no
//! register and no wrap-around, and negative capitals count as multiples of
//! three via the Euclidean remainder.

use crate::series::{GainRecord, GainSeries, RunMeta};
use crate::strategy::{GameToken, Strategy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ClassicalError {
    #[error("epsilon {epsilon} makes `{name}` = {value}, which is not a probability")]
    InvalidEpsilon {
        epsilon: f64,
        name: &'static str,
        value: f64,
    },
    #[error("trials must be at least 1")]
    ZeroTrials,
    #[error("steps must be at least 1")]
    ZeroSteps,
}

/// The bias `eps` and the three win probabilities derived from it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalParams {
    epsilon: f64,
}

impl ClassicalParams {
    pub fn new(epsilon: f64) -> Result<Self, ClassicalError> {
        let params = Self { epsilon };
        for (name, value) in [
            ("p_a", params.p_a()),
            ("p_b_multiple_of_three", params.p_b_multiple_of_three()),
            ("p_b_otherwise", params.p_b_otherwise()),
        ] {
            if !(0.0..=1.0).contains(&value) || !value.is_finite() {
                return Err(ClassicalError::InvalidEpsilon {
                    epsilon,
                    name,
                    value,
                });
            }
        }
        Ok(params)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn p_a(&self) -> f64 {
        0.5 - self.epsilon
    }

    pub fn p_b_multiple_of_three(&self) -> f64 {
        0.1 - self.epsilon
    }

    pub fn p_b_otherwise(&self) -> f64 {
        0.75 - self.epsilon
    }

    pub fn win_probability(&self, game: GameToken, capital: i64) -> f64 {
        match game {
            GameToken::A => self.p_a(),
            GameToken::B => {
                if capital.rem_euclid(3) == 0 {
                    self.p_b_multiple_of_three()
                } else {
                    self.p_b_otherwise()
                }
            }
        }
    }
}

impl Default for ClassicalParams {
    fn default() -> Self {
        Self { epsilon: 0.005 }
    }
}

/// Exact probability distribution over integer capital.
#[derive(Clone, Debug, PartialEq)]
pub struct CapitalDistribution {
    probs: BTreeMap<i64, f64>,
}

impl CapitalDistribution {
    pub fn point_mass(capital: i64) -> Self {
        let mut probs = BTreeMap::new();
        probs.insert(capital, 1.0);
        Self { probs }
    }

    pub fn probability(&self, capital: i64) -> f64 {
        self.probs.get(&capital).copied().unwrap_or(0.0)
    }

    pub fn total_probability(&self) -> f64 {
        self.probs.values().sum()
    }

    pub fn expected_capital(&self) -> f64 {
        self.probs.iter().map(|(&v, &p)| v as f64 * p).sum()
    }

    pub fn support(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.probs.iter().map(|(&v, &p)| (v, p))
    }
}

/// One game: every capital value splits its mass into win (+1) and
/// loss (-1) branches.
pub fn classical_step(
    dist: &CapitalDistribution,
    game: GameToken,
    params: &ClassicalParams,
) -> CapitalDistribution {
    let mut probs: BTreeMap<i64, f64> = BTreeMap::new();
    for (&capital, &p) in &dist.probs {
        if p == 0.0 {
            continue;
        }
        let p_win = params.win_probability(game, capital);
        *probs.entry(capital + 1).or_insert(0.0) += p * p_win;
        *probs.entry(capital - 1).or_insert(0.0) += p * (1.0 - p_win);
    }
    CapitalDistribution { probs }
}

fn classical_meta(
    kind: &str,
    strategy: &Strategy,
    steps: usize,
    params: &ClassicalParams,
    initial_capital: i64,
) -> RunMeta {
    RunMeta::new(kind, strategy.to_string(), steps, steps / strategy.len())
        .with_param("epsilon", params.epsilon())
        .with_param("initial_capital", initial_capital)
}

/// Exact distribution evolution: iterates [`classical_step`] cyclically and
/// records `E[capital] - initial_capital` after every game.
pub fn expected_gain_exact(
    strategy: &Strategy,
    steps: usize,
    params: &ClassicalParams,
    initial_capital: i64,
) -> Result<GainSeries, ClassicalError> {
    if steps == 0 {
        return Err(ClassicalError::ZeroSteps);
    }
    let mut dist = CapitalDistribution::point_mass(initial_capital);
    let mut records = Vec::with_capacity(steps);
    for step in 0..steps {
        dist = classical_step(&dist, strategy.token_at(step), params);
        records.push(GainRecord {
            step: step + 1,
            expected_gain: dist.expected_capital() - initial_capital as f64,
            std_error: None,
        });
    }
    Ok(GainSeries {
        meta: classical_meta("classical-exact", strategy, steps, params, initial_capital),
        records,
    })
}

/// Seeded trajectory sampling; trial `t` uses seed `seed + t`, so any
/// partition of the trial range reproduces the same trajectories.
pub fn monte_carlo(
    strategy: &Strategy,
    steps: usize,
    trials: u64,
    seed: u64,
    params: &ClassicalParams,
    initial_capital: i64,
) -> Result<GainSeries, ClassicalError> {
    if steps == 0 {
        return Err(ClassicalError::ZeroSteps);
    }
    if trials == 0 {
        return Err(ClassicalError::ZeroTrials);
    }
    let mut sum = vec![0.0f64; steps];
    let mut sum_sq = vec![0.0f64; steps];
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial));
        let mut capital = initial_capital;
        for step in 0..steps {
            let p_win = params.win_probability(strategy.token_at(step), capital);
            if rng.random::<f64>() < p_win {
                capital += 1;
            } else {
                capital -= 1;
            }
            let gain = (capital - initial_capital) as f64;
            sum[step] += gain;
            sum_sq[step] += gain * gain;
        }
    }
    let n = trials as f64;
    let records = (0..steps)
        .map(|step| {
            let mean = sum[step] / n;
            let std_error = if trials > 1 {
                let variance = (sum_sq[step] - n * mean * mean) / (n - 1.0);
                Some((variance.max(0.0) / n).sqrt())
            } else {
                None
            };
            GainRecord {
                step: step + 1,
                expected_gain: mean,
                std_error,
            }
        })
        .collect();
    let meta = classical_meta("classical-monte-carlo", strategy, steps, params, initial_capital)
        .with_param("trials", trials)
        .with_param("seed", seed);
    Ok(GainSeries { meta, records })
}
