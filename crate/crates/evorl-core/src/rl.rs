//! Tabular Q-learning.
//!
//! The update rule is kept in its interpolation form,
//! `Q(s,a) <- (1 - alpha) * Q(s,a) + alpha * (R + gamma * max_a' Q(s',a'))`,
//! and applied functionally: [`q_update`] consumes a table and returns the
//! table with exactly one entry changed.

use alloc::boxed::Box;
use alloc::vec::Vec;

use rand::Rng;
// Re-exported so downstream Environment implementations name the same trait
// without taking their own rand dependency.
pub use rand::RngCore;

use crate::error::{Error, Result};

/// Dense state-action value table, row-major by state. New tables are
/// all-zero, which makes the greedy tie-break (lowest action index) the
/// initial policy.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable {
    states: usize,
    actions: usize,
    values: Vec<f64>,
}

impl QTable {
    /// All-zero table.
    ///
    /// # Panics
    ///
    /// Panics if either dimension is zero.
    pub fn new(states: usize, actions: usize) -> Self {
        assert!(states >= 1, "need at least one state");
        assert!(actions >= 1, "need at least one action");
        QTable {
            states,
            actions,
            values: alloc::vec![0.0; states * actions],
        }
    }

    /// Number of states.
    pub fn states(&self) -> usize {
        self.states
    }

    /// Number of actions.
    pub fn actions(&self) -> usize {
        self.actions
    }

    fn check(&self, s: usize, a: usize) -> Result<usize> {
        if s >= self.states {
            return Err(Error::StateOutOfRange {
                state: s,
                count: self.states,
            });
        }
        if a >= self.actions {
            return Err(Error::ActionOutOfRange {
                action: a,
                count: self.actions,
            });
        }
        Ok(s * self.actions + a)
    }

    /// The value at `(s, a)`.
    pub fn get(&self, s: usize, a: usize) -> Result<f64> {
        Ok(self.values[self.check(s, a)?])
    }

    /// The action row for `s`.
    pub fn row(&self, s: usize) -> Result<&[f64]> {
        let start = self.check(s, 0)?;
        Ok(&self.values[start..start + self.actions])
    }

    /// `max_a Q(s, a)`.
    pub fn row_max(&self, s: usize) -> Result<f64> {
        Ok(self
            .row(s)?
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max))
    }
}

/// Q-learning hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LearningParams {
    /// Learning rate in `[0, 1]`. Zero freezes the table, which is useful
    /// for ablations.
    pub alpha: f64,
    /// Discount factor in `[0, 1)`.
    pub gamma: f64,
    /// Exploration probability in `[0, 1]`.
    pub epsilon: f64,
}

impl Default for LearningParams {
    fn default() -> Self {
        LearningParams {
            alpha: 0.1,
            gamma: 0.9,
            epsilon: 0.1,
        }
    }
}

impl LearningParams {
    /// Range checks with field-naming errors.
    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() || !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::config(
                "alpha",
                alloc::format!("must lie in [0, 1], got {}", self.alpha),
            ));
        }
        if !self.gamma.is_finite() || !(0.0..1.0).contains(&self.gamma) {
            return Err(Error::config(
                "gamma",
                alloc::format!("must lie in [0, 1), got {}", self.gamma),
            ));
        }
        if !self.epsilon.is_finite() || !(0.0..=1.0).contains(&self.epsilon) {
            return Err(Error::config(
                "epsilon",
                alloc::format!("must lie in [0, 1], got {}", self.epsilon),
            ));
        }
        Ok(())
    }
}

/// One observed transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    /// Where the environment landed.
    pub next_state: usize,
    /// Immediate reward.
    pub reward: f64,
    /// True when `next_state` ends the episode.
    pub terminal: bool,
}

/// A discrete environment a Q-learner can act in.
pub trait Environment {
    /// Number of states.
    fn states(&self) -> usize;
    /// Number of actions.
    fn actions(&self) -> usize;
    /// Starts an episode and returns the initial state.
    fn reset(&mut self) -> usize;
    /// Performs `action` in `state`.
    fn transition(&mut self, state: usize, action: usize, rng: &mut dyn RngCore)
        -> Result<Transition>;
}

fn backup(mut q: QTable, s: usize, a: usize, reward: f64, bootstrap: f64, alpha: f64) -> QTable {
    let idx = s * q.actions + a;
    q.values[idx] = (1.0 - alpha) * q.values[idx] + alpha * (reward + bootstrap);
    q
}

/// The Q-learning update:
/// `Q(s,a) <- (1 - alpha) * Q(s,a) + alpha * (R + gamma * max_a' Q(s',a'))`.
///
/// Returns the table with only the `(s, a)` entry changed.
pub fn q_update(
    q: QTable,
    s: usize,
    a: usize,
    reward: f64,
    s_next: usize,
    params: &LearningParams,
) -> Result<QTable> {
    q.check(s, a)?;
    let max_next = q.row_max(s_next)?;
    Ok(backup(q, s, a, reward, params.gamma * max_next, params.alpha))
}

/// [`q_update`] for a transition into a terminal state: the bootstrap term
/// is zero because no further reward follows.
pub fn q_update_terminal(
    q: QTable,
    s: usize,
    a: usize,
    reward: f64,
    params: &LearningParams,
) -> Result<QTable> {
    q.check(s, a)?;
    Ok(backup(q, s, a, reward, 0.0, params.alpha))
}

/// The greedy action for `s`, breaking ties toward the lowest action index.
///
/// # Panics
///
/// Panics if `s` is out of range.
pub fn greedy_action(q: &QTable, s: usize) -> usize {
    let row = q.row(s).expect("state in range");
    let mut best = 0;
    for (a, &v) in row.iter().enumerate().skip(1) {
        if v > row[best] {
            best = a;
        }
    }
    best
}

/// Epsilon-greedy action selection.
///
/// Always consumes exactly two draws, in a fixed order: one uniform for the
/// explore/exploit branch, then one for the candidate random action. This
/// keeps stream positions independent of which branch is taken.
///
/// # Panics
///
/// Panics if `s` is out of range.
pub fn epsilon_greedy_action<R: Rng + ?Sized>(
    q: &QTable,
    s: usize,
    params: &LearningParams,
    rng: &mut R,
) -> usize {
    let explore = rng.random::<f64>() < params.epsilon;
    let candidate = rng.random_range(0..q.actions());
    if explore {
        candidate
    } else {
        greedy_action(q, s)
    }
}

/// Monte-Carlo estimate of `E[R | s, a]` from `n` repeated transitions.
///
/// The environment is used as a reward oracle here: the query is repeated
/// from the same `(s, a)` pair each time.
pub fn estimate_reward<E: Environment + ?Sized, R: Rng>(
    env: &mut E,
    s: usize,
    a: usize,
    n: usize,
    rng: &mut R,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroSamples);
    }
    let mut sum = 0.0;
    for _ in 0..n {
        sum += env.transition(s, a, rng)?.reward;
    }
    Ok(sum / n as f64)
}

/// Result of a training run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainResult {
    /// The learned table.
    pub q: QTable,
    /// Undiscounted return of each episode.
    pub episode_returns: Vec<f64>,
}

fn fault(episode: usize, step: usize, source: Error) -> Error {
    Error::Environment {
        episode,
        step,
        source: Box::new(source),
    }
}

/// Trains a fresh all-zero table with epsilon-greedy exploration.
///
/// Episodes end on a terminal transition or after `max_steps` steps;
/// truncation performs no terminal update. Environment faults are wrapped
/// with the episode and step at which they occurred.
pub fn train<E: Environment + ?Sized, R: Rng>(
    env: &mut E,
    params: &LearningParams,
    episodes: usize,
    max_steps: usize,
    rng: &mut R,
) -> Result<TrainResult> {
    params.validate()?;
    if env.states() == 0 || env.actions() == 0 {
        return Err(Error::config(
            "environment",
            "needs at least one state and one action",
        ));
    }
    let mut q = QTable::new(env.states(), env.actions());
    let mut episode_returns = Vec::with_capacity(episodes);

    for episode in 0..episodes {
        let mut s = env.reset();
        if s >= q.states {
            return Err(fault(
                episode,
                0,
                Error::StateOutOfRange {
                    state: s,
                    count: q.states,
                },
            ));
        }
        let mut ret = 0.0;
        for step in 0..max_steps {
            let a = epsilon_greedy_action(&q, s, params, rng);
            let t = env
                .transition(s, a, rng)
                .map_err(|e| fault(episode, step, e))?;
            if t.next_state >= q.states {
                return Err(fault(
                    episode,
                    step,
                    Error::StateOutOfRange {
                        state: t.next_state,
                        count: q.states,
                    },
                ));
            }
            q = if t.terminal {
                q_update_terminal(q, s, a, t.reward, params)?
            } else {
                q_update(q, s, a, t.reward, t.next_state, params)?
            };
            ret += t.reward;
            if t.terminal {
                break;
            }
            s = t.next_state;
        }
        episode_returns.push(ret);
    }

    Ok(TrainResult { q, episode_returns })
}
