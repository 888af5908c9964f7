//! Packaged experiments: antibiotic dosing, mimicry evolution, and learned
//! cooperation.
//!
//! Each runner fans out over replicates, drawing replicate `k`'s randomness
//! from `streams.stream(<scenario>, k)` so trajectories are reproducible and
//! independent of how many replicates run. Observables are recorded for
//! every `(replicate, step)` with no gaps, ordered by replicate then step.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use crate::dynamics::{allele_frequency, step_generation, EvolutionConfig};
use crate::error::{Error, Result};
use crate::fitness::{FitnessLandscape, Genotype, Individual, LandscapeMap, Population};
use crate::games::{play_match, GameMatrix, MemoryOnePolicy, Move, Strategy};
use crate::rl::LearningParams;
use crate::stream::StreamTree;

/// Which packaged experiment to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    /// Resistance evolution under a drug schedule.
    Antibiotic,
    /// Convergence toward a model pattern.
    Mimicry,
    /// A Q-learner discovering reciprocity against tit-for-tat.
    Cooperation,
}

impl ScenarioKind {
    /// Stable lowercase name, used for stream labels and config files.
    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::Antibiotic => "antibiotic",
            ScenarioKind::Mimicry => "mimicry",
            ScenarioKind::Cooperation => "cooperation",
        }
    }
}

/// Half-open generation range `[from, to)` with the drug either on or off.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScheduleSpan {
    /// First generation the span covers.
    pub from: u64,
    /// One past the last generation the span covers.
    pub to: u64,
    /// Whether the drug is applied during the span.
    pub drug: bool,
}

/// Antibiotic scenario knobs. Survival values are defaults chosen to give a
/// strong, visible selection response; all are overridable in config files.
#[derive(Debug, Clone, PartialEq)]
pub struct AntibioticParams {
    /// Which locus carries resistance.
    pub resistant_locus: usize,
    /// Founder frequency of the resistant allele.
    pub initial_resistant_freq: f64,
    /// Survival of resistant genotypes while the drug is on.
    pub resistant_on: f64,
    /// Survival of susceptible genotypes while the drug is on.
    pub susceptible_on: f64,
    /// Survival of resistant genotypes while the drug is off (the cost of
    /// resistance makes this lower than susceptible survival).
    pub resistant_off: f64,
    /// Survival of susceptible genotypes while the drug is off.
    pub susceptible_off: f64,
}

impl Default for AntibioticParams {
    fn default() -> Self {
        AntibioticParams {
            resistant_locus: 0,
            initial_resistant_freq: 0.1,
            resistant_on: 0.9,
            susceptible_on: 0.3,
            resistant_off: 0.55,
            susceptible_off: 0.65,
        }
    }
}

/// Mimicry scenario knobs.
#[derive(Debug, Clone, PartialEq)]
pub struct MimicryParams {
    /// The model pattern being imitated.
    pub target: Genotype,
    /// Survival at zero similarity.
    pub base_survival: f64,
    /// Survival slope with respect to similarity.
    pub survival_gain: f64,
    /// Founder per-locus frequency of the 1-allele.
    pub initial_one_freq: f64,
    /// Found every member as an exact copy of the target instead of drawing
    /// founders at `initial_one_freq`.
    pub start_at_target: bool,
    /// When set, survival ignores the genotype entirely and uses this
    /// constant: the feedback-ablation switch.
    pub constant_survival: Option<f64>,
}

impl MimicryParams {
    /// Alternating `1010...` model pattern of the given length.
    pub fn default_target(locus_count: usize) -> Genotype {
        Genotype::new((0..locus_count).map(|i| i % 2 == 0).collect())
    }

    /// Defaults for a given locus count.
    pub fn default_for(locus_count: usize) -> Self {
        MimicryParams {
            target: Self::default_target(locus_count),
            base_survival: 0.4,
            survival_gain: 0.5,
            initial_one_freq: 0.5,
            start_at_target: false,
            constant_survival: None,
        }
    }
}

/// Cooperation scenario knobs.
#[derive(Debug, Clone, PartialEq)]
pub struct CooperationParams {
    /// Training episodes; each episode is one match.
    pub episodes: u32,
    /// Rounds per match.
    pub rounds: u32,
    /// Payoff matrix.
    pub matrix: GameMatrix,
}

impl Default for CooperationParams {
    fn default() -> Self {
        CooperationParams {
            episodes: 6000,
            rounds: 50,
            matrix: GameMatrix::classic(),
        }
    }
}

/// Full description of one scenario run.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    /// Which experiment to run.
    pub scenario: ScenarioKind,
    /// Population dynamics knobs.
    pub evolution: EvolutionConfig,
    /// Q-learning knobs (cooperation only).
    pub learning: LearningParams,
    /// Drug schedule (antibiotic only); must cover `[0, generations)`.
    pub schedule: Vec<ScheduleSpan>,
    /// Number of independent replicates, at least 1.
    pub replicates: u32,
    /// Root random seed.
    pub seed: u64,
    /// Antibiotic knobs.
    pub antibiotic: AntibioticParams,
    /// Mimicry knobs.
    pub mimicry: MimicryParams,
    /// Cooperation knobs.
    pub cooperation: CooperationParams,
}

impl ScenarioConfig {
    /// A fully-populated config with documented defaults for `kind`.
    pub fn defaults(kind: ScenarioKind) -> Self {
        let evolution = match kind {
            ScenarioKind::Antibiotic => EvolutionConfig {
                population_size: 500,
                locus_count: 1,
                mutation_rate: 0.001,
                generations: 40,
                ..EvolutionConfig::default()
            },
            ScenarioKind::Mimicry => EvolutionConfig {
                population_size: 500,
                locus_count: 20,
                mutation_rate: 0.005,
                generations: 60,
                ..EvolutionConfig::default()
            },
            ScenarioKind::Cooperation => EvolutionConfig::default(),
        };
        let schedule = alloc::vec![ScheduleSpan {
            from: 0,
            to: evolution.generations,
            drug: true,
        }];
        // The small default learning rate matters: the margin between
        // always-cooperating and defect-then-recover against tit-for-tat is
        // thin (30 vs 29.3 discounted), and a coarser alpha leaves enough
        // bootstrap noise to flip the greedy choice between runs.
        ScenarioConfig {
            scenario: kind,
            learning: LearningParams {
                alpha: 0.005,
                gamma: 0.9,
                epsilon: 0.1,
            },
            schedule,
            replicates: 1,
            seed: 0,
            antibiotic: AntibioticParams::default(),
            mimicry: MimicryParams::default_for(evolution.locus_count),
            cooperation: CooperationParams::default(),
            evolution,
        }
    }

    /// Field-by-field validation with dotted paths.
    pub fn validate(&self) -> Result<()> {
        self.evolution.validate().map_err(|e| prefixed("evolution", e))?;
        self.learning.validate().map_err(|e| prefixed("learning", e))?;
        if self.replicates < 1 {
            return Err(Error::config("replicates", "must be at least 1"));
        }
        match self.scenario {
            ScenarioKind::Antibiotic => self.validate_antibiotic(),
            ScenarioKind::Mimicry => self.validate_mimicry(),
            ScenarioKind::Cooperation => self.validate_cooperation(),
        }
    }

    fn validate_antibiotic(&self) -> Result<()> {
        let p = &self.antibiotic;
        if p.resistant_locus >= self.evolution.locus_count {
            return Err(Error::config(
                "antibiotic.resistant_locus",
                alloc::format!(
                    "locus {} out of range for {} loci",
                    p.resistant_locus,
                    self.evolution.locus_count
                ),
            ));
        }
        check_unit("antibiotic.initial_resistant_freq", p.initial_resistant_freq)?;
        check_unit("antibiotic.resistant_on", p.resistant_on)?;
        check_unit("antibiotic.susceptible_on", p.susceptible_on)?;
        check_unit("antibiotic.resistant_off", p.resistant_off)?;
        check_unit("antibiotic.susceptible_off", p.susceptible_off)?;
        validate_schedule(&self.schedule, self.evolution.generations)
    }

    fn validate_mimicry(&self) -> Result<()> {
        let p = &self.mimicry;
        if p.target.len() != self.evolution.locus_count {
            return Err(Error::config(
                "mimicry.target",
                alloc::format!(
                    "pattern length {} does not match locus_count {}",
                    p.target.len(),
                    self.evolution.locus_count
                ),
            ));
        }
        check_unit("mimicry.base_survival", p.base_survival)?;
        let top = p.base_survival + p.survival_gain;
        if !top.is_finite() || !(0.0..=1.0).contains(&top) {
            return Err(Error::config(
                "mimicry.survival_gain",
                alloc::format!("base_survival + survival_gain must lie in [0, 1], got {top}"),
            ));
        }
        check_unit("mimicry.initial_one_freq", p.initial_one_freq)?;
        if let Some(c) = p.constant_survival {
            check_unit("mimicry.constant_survival", c)?;
        }
        Ok(())
    }

    fn validate_cooperation(&self) -> Result<()> {
        if self.cooperation.episodes < 1 {
            return Err(Error::config("cooperation.episodes", "must be at least 1"));
        }
        if self.cooperation.rounds < 1 {
            return Err(Error::config("cooperation.rounds", "must be at least 1"));
        }
        Ok(())
    }
}

fn prefixed(prefix: &str, e: Error) -> Error {
    match e {
        Error::InvalidConfig { field, reason } => Error::InvalidConfig {
            field: alloc::format!("{prefix}.{field}"),
            reason,
        },
        other => other,
    }
}

fn check_unit(field: &str, v: f64) -> Result<()> {
    if !v.is_finite() || !(0.0..=1.0).contains(&v) {
        return Err(Error::config(
            field,
            alloc::format!("must lie in [0, 1], got {v}"),
        ));
    }
    Ok(())
}

fn validate_schedule(schedule: &[ScheduleSpan], generations: u64) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::config("schedule", "must have at least one span"));
    }
    if schedule[0].from != 0 {
        return Err(Error::config(
            "schedule[0].from",
            alloc::format!("spans must start at generation 0, got {}", schedule[0].from),
        ));
    }
    for (i, span) in schedule.iter().enumerate() {
        if span.from >= span.to {
            return Err(Error::config(
                alloc::format!("schedule[{i}]"),
                alloc::format!("span [{}, {}) is empty", span.from, span.to),
            ));
        }
        if i > 0 && span.from != schedule[i - 1].to {
            return Err(Error::config(
                alloc::format!("schedule[{i}].from"),
                alloc::format!(
                    "spans must be contiguous: previous span ends at {}, this one starts at {}",
                    schedule[i - 1].to,
                    span.from
                ),
            ));
        }
    }
    let end = schedule.last().unwrap().to;
    if end != generations {
        return Err(Error::config(
            "schedule",
            alloc::format!("spans must cover [0, {generations}), but end at {end}"),
        ));
    }
    Ok(())
}

/// One recorded observation row.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    /// Replicate index, 0-based.
    pub replicate: u32,
    /// Generation or episode index.
    pub step: u64,
    /// Observable values, matching [`TrajectorySet::observables`] by position.
    pub values: Vec<f64>,
}

/// All records of a scenario run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySet {
    /// What a step means here: `"generation"` or `"episode"`.
    pub step_label: &'static str,
    /// Observable column names.
    pub observables: Vec<&'static str>,
    /// Rows ordered by `(replicate, step)`.
    pub records: Vec<TrajectoryRecord>,
}

/// Trajectories plus the per-replicate greedy policies a cooperation run
/// ends with.
#[derive(Debug, Clone, PartialEq)]
pub struct CooperationRun {
    /// Per-episode records.
    pub trajectories: TrajectorySet,
    /// The learner's final greedy memory-one policy, one per replicate.
    pub final_policies: Vec<MemoryOnePolicy>,
}

fn ensure_kind(cfg: &ScenarioConfig, expected: ScenarioKind) -> Result<()> {
    if cfg.scenario != expected {
        return Err(Error::config(
            "scenario",
            alloc::format!("expected {}, got {}", expected.as_str(), cfg.scenario.as_str()),
        ));
    }
    Ok(())
}

fn founders_with<R: Rng + ?Sized>(
    size: usize,
    locus_count: usize,
    p_one_at: impl Fn(usize) -> f64,
    rng: &mut R,
) -> Population {
    let members = (0..size)
        .map(|_| {
            Individual::new(Genotype::new(
                (0..locus_count)
                    .map(|locus| rng.random::<f64>() < p_one_at(locus))
                    .collect(),
            ))
        })
        .collect();
    Population::new(members, 0)
}

// Running mean instead of sum-then-divide: a population with identical
// survival values then averages to exactly that value, which keeps the
// ablation observable constant bit-for-bit.
fn mean_survival(pop: &Population, land: &FitnessLandscape) -> Result<f64> {
    let mut mean = 0.0;
    for (i, m) in pop.members.iter().enumerate() {
        let s = land.survival_probability(&m.genotype)?;
        mean += (s - mean) / (i + 1) as f64;
    }
    Ok(mean)
}

fn replicate_step<R: Rng + ?Sized>(
    pop: &Population,
    land: &FitnessLandscape,
    evolution: &EvolutionConfig,
    replicate: u32,
    rng: &mut R,
) -> Result<Population> {
    match step_generation(pop, land, evolution, rng) {
        Ok(out) => Ok(out.next),
        Err(Error::Extinct { generation }) => Err(Error::ReplicateExtinct {
            replicate,
            generation,
        }),
        Err(other) => Err(other),
    }
}

/// Runs the antibiotic scenario.
///
/// Per generation `g`, the row records the resistant-allele frequency and
/// the population's mean survival probability under the environment in
/// force for the step out of `g` (the final row reuses the last span's
/// environment). The schedule selects the `"on"`/`"off"` table of an
/// environment-dependent landscape.
pub fn run_antibiotic(cfg: &ScenarioConfig, streams: &StreamTree) -> Result<TrajectorySet> {
    ensure_kind(cfg, ScenarioKind::Antibiotic)?;
    cfg.validate()?;
    let p = &cfg.antibiotic;
    let generations = cfg.evolution.generations;

    let mut tables = BTreeMap::new();
    tables.insert(
        String::from("on"),
        LandscapeMap::SingleLocus {
            locus: p.resistant_locus,
            when_zero: p.susceptible_on,
            when_one: p.resistant_on,
        },
    );
    tables.insert(
        String::from("off"),
        LandscapeMap::SingleLocus {
            locus: p.resistant_locus,
            when_zero: p.susceptible_off,
            when_one: p.resistant_off,
        },
    );
    let base = FitnessLandscape::EnvironmentDependent {
        tables,
        state: String::from("on"),
    };
    let tag_for = |g: u64| -> &'static str {
        let g = g.min(generations - 1);
        let span = cfg
            .schedule
            .iter()
            .find(|s| s.from <= g && g < s.to)
            .expect("validated schedule covers every generation");
        if span.drug {
            "on"
        } else {
            "off"
        }
    };

    let mut records = Vec::new();
    for rep in 0..cfg.replicates {
        let mut rng = streams.stream(ScenarioKind::Antibiotic.as_str(), u64::from(rep));
        let mut pop = founders_with(
            cfg.evolution.population_size,
            cfg.evolution.locus_count,
            |locus| {
                if locus == p.resistant_locus {
                    p.initial_resistant_freq
                } else {
                    0.5
                }
            },
            &mut rng,
        );
        for g in 0..=generations {
            let land = base.with_environment(tag_for(g))?;
            records.push(TrajectoryRecord {
                replicate: rep,
                step: g,
                values: alloc::vec![
                    allele_frequency(&pop, p.resistant_locus)?,
                    mean_survival(&pop, &land)?,
                ],
            });
            if g < generations {
                pop = replicate_step(&pop, &land, &cfg.evolution, rep, &mut rng)?;
            }
        }
    }

    Ok(TrajectorySet {
        step_label: "generation",
        observables: alloc::vec!["allele_freq", "mean_survival"],
        records,
    })
}

/// Runs the mimicry scenario: survival is `base + gain * similarity` to a
/// fixed model pattern, or a genotype-independent constant when feedback is
/// ablated. Rows record mean similarity and mean survival probability.
pub fn run_mimicry(cfg: &ScenarioConfig, streams: &StreamTree) -> Result<TrajectorySet> {
    ensure_kind(cfg, ScenarioKind::Mimicry)?;
    cfg.validate()?;
    let p = &cfg.mimicry;
    let generations = cfg.evolution.generations;

    let land = FitnessLandscape::Bernoulli(match p.constant_survival {
        Some(c) => LandscapeMap::Uniform(c),
        None => LandscapeMap::PatternMatch {
            target: p.target.clone(),
            base: p.base_survival,
            gain: p.survival_gain,
        },
    });

    let mut records = Vec::new();
    for rep in 0..cfg.replicates {
        let mut rng = streams.stream(ScenarioKind::Mimicry.as_str(), u64::from(rep));
        let mut pop = if p.start_at_target {
            Population::new(
                (0..cfg.evolution.population_size)
                    .map(|_| Individual::new(p.target.clone()))
                    .collect(),
                0,
            )
        } else {
            founders_with(
                cfg.evolution.population_size,
                cfg.evolution.locus_count,
                |_| p.initial_one_freq,
                &mut rng,
            )
        };
        for g in 0..=generations {
            let mut mean_similarity = 0.0;
            for (i, m) in pop.members.iter().enumerate() {
                let s = p.target.matching_loci(&m.genotype)? as f64 / p.target.len() as f64;
                mean_similarity += (s - mean_similarity) / (i + 1) as f64;
            }
            records.push(TrajectoryRecord {
                replicate: rep,
                step: g,
                values: alloc::vec![mean_similarity, mean_survival(&pop, &land)?],
            });
            if g < generations {
                pop = replicate_step(&pop, &land, &cfg.evolution, rep, &mut rng)?;
            }
        }
    }

    Ok(TrajectorySet {
        step_label: "generation",
        observables: alloc::vec!["mean_similarity", "mean_survival"],
        records,
    })
}

/// Runs the cooperation scenario: a Q-learner trains against tit-for-tat,
/// one match per episode, with its own round payoffs as rewards. Rows record
/// the learner's cooperation rate and total payoff per episode.
pub fn run_cooperation(cfg: &ScenarioConfig, streams: &StreamTree) -> Result<CooperationRun> {
    ensure_kind(cfg, ScenarioKind::Cooperation)?;
    cfg.validate()?;
    let p = &cfg.cooperation;

    let mut records = Vec::new();
    let mut final_policies = Vec::with_capacity(cfg.replicates as usize);
    for rep in 0..cfg.replicates {
        let mut rng = streams.stream(ScenarioKind::Cooperation.as_str(), u64::from(rep));
        let mut learner = Strategy::q_learner(cfg.learning);
        let mut opponent = Strategy::TitForTat;
        for episode in 0..p.episodes {
            let result = play_match(&mut learner, &mut opponent, p.rounds, &p.matrix, &mut rng)?;
            let cooperation_rate = result
                .moves
                .iter()
                .filter(|(own, _)| *own == Move::Cooperate)
                .count() as f64
                / result.moves.len() as f64;
            records.push(TrajectoryRecord {
                replicate: rep,
                step: u64::from(episode),
                values: alloc::vec![cooperation_rate, result.score_a],
            });
        }
        final_policies.push(learner.memory_one());
    }

    Ok(CooperationRun {
        trajectories: TrajectorySet {
            step_label: "episode",
            observables: alloc::vec!["cooperation_rate", "episode_return"],
            records,
        },
        final_policies,
    })
}

/// Dispatches on the configured scenario and returns its trajectories.
pub fn run_scenario(cfg: &ScenarioConfig, streams: &StreamTree) -> Result<TrajectorySet> {
    match cfg.scenario {
        ScenarioKind::Antibiotic => run_antibiotic(cfg, streams),
        ScenarioKind::Mimicry => run_mimicry(cfg, streams),
        ScenarioKind::Cooperation => Ok(run_cooperation(cfg, streams)?.trajectories),
    }
}
