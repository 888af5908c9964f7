//! Iterated prisoner's dilemma with memory-one strategies and a Q-learning
//! player.
//!
//! The learner sees five states: the opening round, plus the four
//! `(own last move, opponent last move)` pairs. Action 0 is cooperate,
//! action 1 is defect, so an all-zero table opens with cooperation through
//! the lowest-index tie-break.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::rl::{
    epsilon_greedy_action, greedy_action, q_update, q_update_terminal, LearningParams, QTable,
};

/// A move in one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    /// Cooperate.
    Cooperate,
    /// Defect.
    Defect,
}

/// Shorthand for [`Move::Cooperate`].
pub const C: Move = Move::Cooperate;
/// Shorthand for [`Move::Defect`].
pub const D: Move = Move::Defect;

/// Number of learner states: the opening state plus four move pairs.
pub const STATE_COUNT: usize = 5;
/// Learner state for the opening round.
pub const STATE_START: usize = 0;
/// Number of learner actions.
pub const ACTION_COUNT: usize = 2;

fn move_index(m: Move) -> usize {
    match m {
        Move::Cooperate => 0,
        Move::Defect => 1,
    }
}

/// The learner action index for a move (cooperate is 0).
pub fn action_of_move(m: Move) -> usize {
    move_index(m)
}

/// The move for a learner action index.
///
/// # Panics
///
/// Panics if `a` is not 0 or 1.
pub fn move_of_action(a: usize) -> Move {
    match a {
        0 => Move::Cooperate,
        1 => Move::Defect,
        other => panic!("no move for action index {other}"),
    }
}

/// The learner state for a remembered `(own, opponent)` move pair, or the
/// opening state when there is no history yet.
pub fn learner_state(last: Option<(Move, Move)>) -> usize {
    match last {
        None => STATE_START,
        Some((own, opp)) => 1 + 2 * move_index(own) + move_index(opp),
    }
}

/// Prisoner's dilemma payoffs. Construction enforces `T > R > P > S` and
/// `2R > T + S`, so a value of this type is always a genuine dilemma.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameMatrix {
    t: f64,
    r: f64,
    p: f64,
    s: f64,
}

impl GameMatrix {
    /// Validated constructor.
    pub fn new(t: f64, r: f64, p: f64, s: f64) -> Result<Self> {
        if ![t, r, p, s].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidPayoffs {
                reason: "payoffs must be finite",
            });
        }
        if !(t > r && r > p && p > s) {
            return Err(Error::InvalidPayoffs {
                reason: "payoffs must satisfy T > R > P > S",
            });
        }
        if !(2.0 * r > t + s) {
            return Err(Error::InvalidPayoffs {
                reason: "payoffs must satisfy 2R > T + S",
            });
        }
        Ok(GameMatrix { t, r, p, s })
    }

    /// The textbook matrix `(T, R, P, S) = (5, 3, 1, 0)`.
    pub fn classic() -> Self {
        GameMatrix {
            t: 5.0,
            r: 3.0,
            p: 1.0,
            s: 0.0,
        }
    }

    /// Temptation payoff `T`.
    pub fn temptation(&self) -> f64 {
        self.t
    }

    /// Mutual-cooperation payoff `R`.
    pub fn reward(&self) -> f64 {
        self.r
    }

    /// Mutual-defection payoff `P`.
    pub fn punishment(&self) -> f64 {
        self.p
    }

    /// Sucker payoff `S`.
    pub fn sucker(&self) -> f64 {
        self.s
    }

    /// Payoff pair `(mine, theirs)` for one simultaneous round.
    pub fn payoff(&self, mine: Move, theirs: Move) -> (f64, f64) {
        match (mine, theirs) {
            (Move::Cooperate, Move::Cooperate) => (self.r, self.r),
            (Move::Cooperate, Move::Defect) => (self.s, self.t),
            (Move::Defect, Move::Cooperate) => (self.t, self.s),
            (Move::Defect, Move::Defect) => (self.p, self.p),
        }
    }
}

/// A deterministic memory-one policy: an opening move plus one response per
/// `(own last, opponent last)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemoryOnePolicy {
    /// Opening move.
    pub first: Move,
    /// Responses indexed by `2 * own + opponent` with cooperate = 0.
    pub responses: [Move; 4],
}

impl MemoryOnePolicy {
    /// The response to a remembered move pair.
    pub fn respond(&self, own_last: Move, opp_last: Move) -> Move {
        self.responses[2 * move_index(own_last) + move_index(opp_last)]
    }

    /// The move played from a learner-state view of history.
    pub fn decide(&self, last: Option<(Move, Move)>) -> Move {
        match last {
            None => self.first,
            Some((own, opp)) => self.respond(own, opp),
        }
    }
}

/// A tournament entrant.
#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    /// Cooperates unconditionally.
    AlwaysCooperate,
    /// Defects unconditionally.
    AlwaysDefect,
    /// Opens with cooperation, then mirrors the opponent's last move.
    TitForTat,
    /// Cooperates until the opponent defects once, then defects forever.
    GrimTrigger,
    /// Tabular Q-learner over the five-state encoding.
    QLearner {
        /// Value table, `STATE_COUNT` by `ACTION_COUNT`.
        q: QTable,
        /// Learning and exploration parameters.
        params: LearningParams,
    },
}

impl Strategy {
    /// A fresh learner with an all-zero table.
    pub fn q_learner(params: LearningParams) -> Self {
        Strategy::QLearner {
            q: QTable::new(STATE_COUNT, ACTION_COUNT),
            params,
        }
    }

    /// The memory-one view of this strategy. For the learner this is its
    /// greedy policy; exploration is ignored.
    pub fn memory_one(&self) -> MemoryOnePolicy {
        match self {
            Strategy::AlwaysCooperate => MemoryOnePolicy {
                first: C,
                responses: [C, C, C, C],
            },
            Strategy::AlwaysDefect => MemoryOnePolicy {
                first: D,
                responses: [D, D, D, D],
            },
            Strategy::TitForTat => MemoryOnePolicy {
                first: C,
                responses: [C, D, C, D],
            },
            Strategy::GrimTrigger => MemoryOnePolicy {
                first: C,
                responses: [C, D, D, D],
            },
            Strategy::QLearner { q, .. } => MemoryOnePolicy {
                first: move_of_action(greedy_action(q, STATE_START)),
                responses: [
                    move_of_action(greedy_action(q, learner_state(Some((C, C))))),
                    move_of_action(greedy_action(q, learner_state(Some((C, D))))),
                    move_of_action(greedy_action(q, learner_state(Some((D, C))))),
                    move_of_action(greedy_action(q, learner_state(Some((D, D))))),
                ],
            },
        }
    }
}

/// Outcome of one match.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    /// Moves per round as `(a, b)`.
    pub moves: Vec<(Move, Move)>,
    /// Total payoff collected by `a`.
    pub score_a: f64,
    /// Total payoff collected by `b`.
    pub score_b: f64,
}

fn decide<R: Rng + ?Sized>(
    strategy: &Strategy,
    last: Option<(Move, Move)>,
    rng: &mut R,
) -> Move {
    match strategy {
        Strategy::AlwaysCooperate => C,
        Strategy::AlwaysDefect => D,
        Strategy::TitForTat => last.map(|(_, opp)| opp).unwrap_or(C),
        Strategy::GrimTrigger => match last {
            None => C,
            Some((own, opp)) => {
                if own == D || opp == D {
                    D
                } else {
                    C
                }
            }
        },
        Strategy::QLearner { q, params } => {
            move_of_action(epsilon_greedy_action(q, learner_state(last), params, rng))
        }
    }
}

fn learn(
    strategy: &mut Strategy,
    prev: Option<(Move, Move)>,
    own: Move,
    reward: f64,
    now: (Move, Move),
    terminal: bool,
) -> Result<()> {
    if let Strategy::QLearner { q, params } = strategy {
        let s = learner_state(prev);
        let a = action_of_move(own);
        let table = core::mem::replace(q, QTable::new(1, 1));
        *q = if terminal {
            q_update_terminal(table, s, a, reward, params)?
        } else {
            q_update(table, s, a, reward, learner_state(Some(now)), params)?
        };
    }
    Ok(())
}

/// Plays one match of simultaneous rounds.
///
/// Each round both sides choose from their own remembered `(own, opponent)`
/// pair, payoffs are applied, and any learner updates its table with its own
/// round payoff as the reward; the final round performs a terminal update.
/// Memory is fresh at the start of every match, but a learner's table
/// persists across matches through the `&mut` borrow.
///
/// Random draws happen in a fixed order: side `a` decides before side `b`,
/// and only learners draw.
pub fn play_match<R: Rng + ?Sized>(
    a: &mut Strategy,
    b: &mut Strategy,
    rounds: u32,
    matrix: &GameMatrix,
    rng: &mut R,
) -> Result<MatchResult> {
    if rounds < 1 {
        return Err(Error::config("rounds", "must be at least 1"));
    }
    for side in [&*a, &*b] {
        if let Strategy::QLearner { q, params } = side {
            if q.states() != STATE_COUNT || q.actions() != ACTION_COUNT {
                return Err(Error::config(
                    "q_table",
                    alloc::format!(
                        "learner table must be {STATE_COUNT} states by {ACTION_COUNT} actions"
                    ),
                ));
            }
            params.validate()?;
        }
    }

    let mut last_a: Option<(Move, Move)> = None;
    let mut last_b: Option<(Move, Move)> = None;
    let mut score_a = 0.0;
    let mut score_b = 0.0;
    let mut moves = Vec::with_capacity(rounds as usize);

    for round in 0..rounds {
        let terminal = round + 1 == rounds;
        let ma = decide(a, last_a, rng);
        let mb = decide(b, last_b, rng);
        let (pa, pb) = matrix.payoff(ma, mb);
        score_a += pa;
        score_b += pb;
        learn(a, last_a, ma, pa, (ma, mb), terminal)?;
        learn(b, last_b, mb, pb, (mb, ma), terminal)?;
        last_a = Some((ma, mb));
        last_b = Some((mb, ma));
        moves.push((ma, mb));
    }

    Ok(MatchResult {
        moves,
        score_a,
        score_b,
    })
}

/// The joint payoff trajectory of two deterministic memory-one policies,
/// split into its transient prefix and repeating cycle. Payoffs are from
/// `policy`'s point of view.
///
/// Two memory-one players occupy at most five joint states (no history plus
/// four move pairs), so the cycle appears within five rounds.
pub fn joint_payoff_cycle(
    policy: &MemoryOnePolicy,
    opponent: &MemoryOnePolicy,
    matrix: &GameMatrix,
) -> (Vec<f64>, Vec<f64>) {
    let mut seen: Vec<(Option<(Move, Move)>, usize)> = Vec::new();
    let mut payoffs: Vec<f64> = Vec::new();
    let mut state: Option<(Move, Move)> = None;

    loop {
        if let Some(&(_, first_at)) = seen.iter().find(|(s, _)| *s == state) {
            let cycle = payoffs.split_off(first_at);
            return (payoffs, cycle);
        }
        seen.push((state, payoffs.len()));
        let (ma, mb) = match state {
            None => (policy.first, opponent.first),
            Some((ma_prev, mb_prev)) => (
                policy.respond(ma_prev, mb_prev),
                opponent.respond(mb_prev, ma_prev),
            ),
        };
        payoffs.push(matrix.payoff(ma, mb).0);
        state = Some((ma, mb));
    }
}

/// Interprets a finite float at its shortest round-trip decimal value, e.g.
/// `0.9` becomes exactly `9/10` rather than its binary approximation.
fn decimal_ratio(x: f64) -> BigRational {
    debug_assert!(x.is_finite());
    let s = alloc::format!("{x}");
    let (int_part, frac_part) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s.as_str(), ""),
    };
    let mut digits = alloc::string::String::with_capacity(int_part.len() + frac_part.len());
    digits.push_str(int_part);
    digits.push_str(frac_part);
    let numer = BigInt::parse_bytes(digits.as_bytes(), 10).expect("digits parse");
    let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
    BigRational::new(numer, denom)
}

/// Exact discounted value of `policy` against `opponent`.
///
/// The payoff stream of two deterministic memory-one policies is eventually
/// periodic, so the infinite discounted sum reduces to the transient prefix
/// plus a geometric closed form over one cycle. The sum is evaluated in
/// exact rational arithmetic, with payoffs and `gamma` interpreted at their
/// shortest round-trip decimal values; integral payoffs with a decimal
/// discount like 0.9 therefore come out exact.
///
/// # Panics
///
/// Panics unless `0 <= gamma < 1`, which is what makes the sum converge.
pub fn discounted_policy_value(
    policy: &MemoryOnePolicy,
    opponent: &MemoryOnePolicy,
    matrix: &GameMatrix,
    gamma: f64,
) -> f64 {
    assert!(
        gamma.is_finite() && (0.0..1.0).contains(&gamma),
        "discount must lie in [0, 1), got {gamma}"
    );
    let (prefix, cycle) = joint_payoff_cycle(policy, opponent, matrix);

    let g = decimal_ratio(gamma);
    let mut gpow = BigRational::one();
    let mut value = BigRational::zero();
    for p in &prefix {
        value += decimal_ratio(*p) * &gpow;
        gpow *= &g;
    }
    // gpow is now gamma^(prefix length).
    let mut cycle_sum = BigRational::zero();
    let mut cpow = BigRational::one();
    for p in &cycle {
        cycle_sum += decimal_ratio(*p) * &cpow;
        cpow *= &g;
    }
    // cpow is now gamma^(cycle length), strictly below one.
    value += gpow * cycle_sum / (BigRational::one() - cpow);
    value.to_f64().expect("finite rational")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::StreamTree;
    use alloc::vec;

    #[test]
    fn classic_matrix_is_valid() {
        let m = GameMatrix::classic();
        assert_eq!(
            (m.temptation(), m.reward(), m.punishment(), m.sucker()),
            (5.0, 3.0, 1.0, 0.0)
        );
        assert!(GameMatrix::new(5.0, 3.0, 1.0, 0.0).is_ok());
    }

    #[test]
    fn ordering_violations_are_rejected() {
        assert_eq!(
            GameMatrix::new(3.0, 5.0, 1.0, 0.0),
            Err(Error::InvalidPayoffs {
                reason: "payoffs must satisfy T > R > P > S"
            })
        );
        assert!(GameMatrix::new(5.0, 5.0, 1.0, 0.0).is_err());
        // 2R = T + S exactly: alternating exploitation would tie mutual
        // cooperation, so it is not an iterated dilemma.
        assert_eq!(
            GameMatrix::new(6.0, 4.0, 3.0, 2.0),
            Err(Error::InvalidPayoffs {
                reason: "payoffs must satisfy 2R > T + S"
            })
        );
        assert!(GameMatrix::new(f64::NAN, 3.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn payoff_cells() {
        let m = GameMatrix::classic();
        assert_eq!(m.payoff(C, C), (3.0, 3.0));
        assert_eq!(m.payoff(C, D), (0.0, 5.0));
        assert_eq!(m.payoff(D, C), (5.0, 0.0));
        assert_eq!(m.payoff(D, D), (1.0, 1.0));
    }

    #[test]
    fn state_encoding_is_distinct() {
        let mut states = vec![learner_state(None)];
        for own in [C, D] {
            for opp in [C, D] {
                states.push(learner_state(Some((own, opp))));
            }
        }
        states.sort_unstable();
        assert_eq!(states, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn all_cooperate_versus_all_defect_scores() {
        let mut a = Strategy::AlwaysCooperate;
        let mut b = Strategy::AlwaysDefect;
        let mut rng = StreamTree::new(0).stream("pd", 0);
        let result = play_match(&mut a, &mut b, 10, &GameMatrix::classic(), &mut rng).unwrap();
        assert_eq!(result.score_a, 0.0);
        assert_eq!(result.score_b, 50.0);
    }

    #[test]
    fn tit_for_tat_punishes_from_the_second_round() {
        let mut a = Strategy::TitForTat;
        let mut b = Strategy::AlwaysDefect;
        let mut rng = StreamTree::new(0).stream("pd", 1);
        let result = play_match(&mut a, &mut b, 10, &GameMatrix::classic(), &mut rng).unwrap();
        assert_eq!(result.score_a, 9.0);
        assert_eq!(result.score_b, 14.0);
        assert_eq!(result.moves[0], (C, D));
        assert!(result.moves[1..].iter().all(|&m| m == (D, D)));
    }

    #[test]
    fn grim_never_forgives() {
        let mut a = Strategy::GrimTrigger;
        let mut b = Strategy::AlwaysDefect;
        let mut rng = StreamTree::new(0).stream("pd", 2);
        let result = play_match(&mut a, &mut b, 6, &GameMatrix::classic(), &mut rng).unwrap();
        assert_eq!(result.moves[0].0, C);
        assert!(result.moves[1..].iter().all(|&(ma, _)| ma == D));
    }

    #[test]
    fn grim_against_defector_trace() {
        let mut a = Strategy::GrimTrigger;
        let mut b = Strategy::AlwaysDefect;
        let mut rng = StreamTree::new(0).stream("pd", 9);
        let result = play_match(&mut a, &mut b, 3, &GameMatrix::classic(), &mut rng).unwrap();
        assert_eq!(result.moves, alloc::vec![(C, D), (D, D), (D, D)]);
        assert_eq!(result.score_a, 2.0);
        assert_eq!(result.score_b, 7.0);
    }

    #[test]
    fn mutual_tit_for_tat_cooperates_forever() {
        let mut a = Strategy::TitForTat;
        let mut b = Strategy::TitForTat;
        let mut rng = StreamTree::new(0).stream("pd", 3);
        let result = play_match(&mut a, &mut b, 8, &GameMatrix::classic(), &mut rng).unwrap();
        assert!(result.moves.iter().all(|&m| m == (C, C)));
        assert_eq!(result.score_a, 24.0);
        assert_eq!(result.score_b, 24.0);
    }

    #[test]
    fn score_conservation_is_exact_for_integral_payoffs() {
        let matrix = GameMatrix::classic();
        let strategies = [
            Strategy::AlwaysCooperate,
            Strategy::AlwaysDefect,
            Strategy::TitForTat,
            Strategy::GrimTrigger,
        ];
        for sa in &strategies {
            for sb in &strategies {
                let mut a = sa.clone();
                let mut b = sb.clone();
                let mut rng = StreamTree::new(1).stream("pd", 4);
                let result = play_match(&mut a, &mut b, 50, &matrix, &mut rng).unwrap();
                let per_round: f64 = result
                    .moves
                    .iter()
                    .map(|&(ma, mb)| {
                        let (pa, pb) = matrix.payoff(ma, mb);
                        pa + pb
                    })
                    .sum();
                assert_eq!(result.score_a + result.score_b, per_round);
            }
        }
    }

    #[test]
    fn zero_rounds_rejected() {
        let mut a = Strategy::AlwaysCooperate;
        let mut b = Strategy::AlwaysDefect;
        let mut rng = StreamTree::new(0).stream("pd", 5);
        assert!(play_match(&mut a, &mut b, 0, &GameMatrix::classic(), &mut rng).is_err());
    }

    #[test]
    fn fresh_learner_opens_with_cooperation_seed_independent() {
        for seed in [0u64, 1, 99, 4096] {
            let mut learner = Strategy::q_learner(LearningParams {
                alpha: 0.5,
                gamma: 0.9,
                epsilon: 0.0,
            });
            let mut opp = Strategy::TitForTat;
            let mut rng = StreamTree::new(seed).stream("pd", 6);
            let result =
                play_match(&mut learner, &mut opp, 5, &GameMatrix::classic(), &mut rng).unwrap();
            assert!(
                result.moves.iter().all(|&m| m == (C, C)),
                "greedy zero-table play must cooperate, seed {seed}"
            );
        }
    }

    #[test]
    fn learner_table_persists_across_matches() {
        let mut learner = Strategy::q_learner(LearningParams {
            alpha: 0.5,
            gamma: 0.0,
            epsilon: 0.0,
        });
        let mut opp = Strategy::AlwaysCooperate;
        let mut rng = StreamTree::new(2).stream("pd", 7);
        play_match(&mut learner, &mut opp, 3, &GameMatrix::classic(), &mut rng).unwrap();
        if let Strategy::QLearner { q, .. } = &learner {
            assert!(q.get(STATE_START, 0).unwrap() > 0.0, "opening value learned");
        } else {
            unreachable!();
        }
    }

    #[test]
    fn wrongly_sized_learner_table_is_rejected() {
        let mut learner = Strategy::QLearner {
            q: QTable::new(3, 2),
            params: LearningParams::default(),
        };
        let mut opp = Strategy::TitForTat;
        let mut rng = StreamTree::new(0).stream("pd", 8);
        assert!(matches!(
            play_match(&mut learner, &mut opp, 3, &GameMatrix::classic(), &mut rng),
            Err(Error::InvalidConfig { .. })
        ));
    }

    #[test]
    fn discounted_values_are_exact() {
        let matrix = GameMatrix::classic();
        let all_c = Strategy::AlwaysCooperate.memory_one();
        let all_d = Strategy::AlwaysDefect.memory_one();
        let tft = Strategy::TitForTat.memory_one();
        let grim = Strategy::GrimTrigger.memory_one();

        // Perpetual mutual cooperation: 3 / (1 - 0.9) = 30.
        assert_eq!(discounted_policy_value(&all_c, &tft, &matrix, 0.9), 30.0);
        // One temptation payoff, then mutual defection: 5 + 0.9 * 1 / 0.1 = 14.
        assert_eq!(discounted_policy_value(&all_d, &tft, &matrix, 0.9), 14.0);
        // Cooperation dominates defection against a reciprocator.
        assert!(30.0 > 14.0);
        // Sucker once, then mutual defection: 0 + 0.9 * 1 / 0.1 = 9.
        assert_eq!(discounted_policy_value(&grim, &all_d, &matrix, 0.9), 9.0);
        // Myopic discounting sees only the first round.
        assert_eq!(discounted_policy_value(&all_d, &all_c, &matrix, 0.0), 5.0);
    }

    #[test]
    fn cycle_analysis_matches_simulated_play() {
        let matrix = GameMatrix::classic();
        let strategies = [
            Strategy::AlwaysCooperate,
            Strategy::AlwaysDefect,
            Strategy::TitForTat,
            Strategy::GrimTrigger,
        ];
        for sa in &strategies {
            for sb in &strategies {
                let (prefix, cycle) = joint_payoff_cycle(
                    &sa.memory_one(),
                    &sb.memory_one(),
                    &matrix,
                );
                assert!(!cycle.is_empty());
                assert!(prefix.len() + cycle.len() <= 5);

                // Simulate enough rounds for the prefix plus 60 cycles,
                // then compare steady-state per-round payoff.
                let n = prefix.len() + 60 * cycle.len();
                let mut a = sa.clone();
                let mut b = sb.clone();
                let mut rng = StreamTree::new(3).stream("pd", 9);
                let result = play_match(&mut a, &mut b, n as u32, &matrix, &mut rng).unwrap();
                let steady: f64 = result.moves[prefix.len()..]
                    .iter()
                    .map(|&(ma, mb)| matrix.payoff(ma, mb).0)
                    .sum::<f64>()
                    / (60 * cycle.len()) as f64;
                let cycle_mean: f64 = cycle.iter().sum::<f64>() / cycle.len() as f64;
                assert!(
                    (steady - cycle_mean).abs() < 1e-6,
                    "{sa:?} vs {sb:?}: {steady} vs {cycle_mean}"
                );
            }
        }
    }

    #[test]
    fn greedy_extraction_reads_the_table() {
        let mut q = QTable::new(STATE_COUNT, ACTION_COUNT);
        // Favor defection in the mutual-cooperation state only.
        let p = LearningParams {
            alpha: 1.0,
            gamma: 0.0,
            epsilon: 0.0,
        };
        q = q_update(q, learner_state(Some((C, C))), 1, 2.0, 0, &p).unwrap();
        let policy = Strategy::QLearner {
            q,
            params: LearningParams::default(),
        }
        .memory_one();
        assert_eq!(policy.first, C);
        assert_eq!(policy.respond(C, C), D);
        assert_eq!(policy.respond(D, D), C);
    }

    #[test]
    fn decimal_ratio_reads_shortest_decimals() {
        use num_traits::ToPrimitive;
        assert_eq!(decimal_ratio(0.9).to_f64().unwrap(), 0.9);
        assert_eq!(
            decimal_ratio(0.9),
            BigRational::new(BigInt::from(9), BigInt::from(10))
        );
        assert_eq!(decimal_ratio(-1.5), BigRational::new(BigInt::from(-3), BigInt::from(2)));
        assert_eq!(decimal_ratio(5.0), BigRational::from(BigInt::from(5)));
    }
}
