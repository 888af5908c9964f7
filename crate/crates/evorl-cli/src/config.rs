//! JSON config parsing, defaulting, validation, and resolved snapshots.
//!
//! A config file names a scenario and overrides whichever knobs it cares
//! about; everything else comes from [`ScenarioConfig::defaults`]. Unknown
//! keys are rejected so typos cannot silently fall back to defaults. The
//! fully resolved config is serialized back into the run manifest, and that
//! snapshot parses to an identical [`ScenarioConfig`].

use std::fs;
use std::path::Path;

use evorl_core::dynamics::ReproductionWeighting;
use evorl_core::fitness::Genotype;
use evorl_core::games::GameMatrix;
use evorl_core::scenarios::{
    AntibioticParams, CooperationParams, MimicryParams, ScenarioConfig, ScenarioKind, ScheduleSpan,
};
use evorl_core::Error;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Top-level config file shape. Every field except `scenario` is optional.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    /// One of `antibiotic`, `mimicry`, `cooperation`.
    pub scenario: String,
    /// Root random seed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Independent replicate count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replicates: Option<u32>,
    /// Population dynamics knobs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evolution: Option<RawEvolution>,
    /// Q-learning knobs (cooperation only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub learning: Option<RawLearning>,
    /// Drug schedule (antibiotic only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<RawSpan>>,
    /// Antibiotic knobs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub antibiotic: Option<RawAntibiotic>,
    /// Mimicry knobs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mimicry: Option<RawMimicry>,
    /// Cooperation knobs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cooperation: Option<RawCooperation>,
}

/// `evolution` section.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawEvolution {
    /// Population size N.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub population_size: Option<usize>,
    /// Loci per genotype.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub locus_count: Option<usize>,
    /// Per-locus flip probability.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mutation_rate: Option<f64>,
    /// Generations to run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generations: Option<u64>,
    /// `landscape_value` or `uniform_among_survivors`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reproduction: Option<String>,
}

/// `learning` section.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawLearning {
    /// Learning rate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Discount factor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Exploration probability.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

/// One `schedule` entry; all fields are required.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpan {
    /// First generation covered.
    pub from: u64,
    /// One past the last generation covered.
    pub to: u64,
    /// Drug on or off.
    pub drug: bool,
}

/// `antibiotic` section.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawAntibiotic {
    /// Which locus carries resistance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resistant_locus: Option<usize>,
    /// Founder frequency of the resistant allele.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_resistant_freq: Option<f64>,
    /// Resistant survival with the drug on.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resistant_on: Option<f64>,
    /// Susceptible survival with the drug on.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub susceptible_on: Option<f64>,
    /// Resistant survival with the drug off.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resistant_off: Option<f64>,
    /// Susceptible survival with the drug off.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub susceptible_off: Option<f64>,
}

/// `mimicry` section.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMimicry {
    /// Model pattern as a bitstring such as `"10110"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    /// Survival at zero similarity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_survival: Option<f64>,
    /// Survival slope with respect to similarity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub survival_gain: Option<f64>,
    /// Founder per-locus 1-allele frequency.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_one_freq: Option<f64>,
    /// Found every member at the target pattern.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_at_target: Option<bool>,
    /// Genotype-independent survival override (feedback ablation).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant_survival: Option<f64>,
}

/// `cooperation` section.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCooperation {
    /// Training episodes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub episodes: Option<u32>,
    /// Rounds per match.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rounds: Option<u32>,
    /// Payoff matrix.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payoffs: Option<RawPayoffs>,
}

/// Payoff values; all four are required when the section is present.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPayoffs {
    /// Temptation.
    pub t: f64,
    /// Mutual-cooperation reward.
    pub r: f64,
    /// Mutual-defection punishment.
    pub p: f64,
    /// Sucker payoff.
    pub s: f64,
}

fn config_error(field: &str, reason: impl Into<String>) -> Error {
    Error::config(field, reason.into())
}

/// Builds a [`ScenarioConfig`] from raw file contents: defaults for the
/// named scenario, overridden field by field, then validated.
pub fn resolve(raw: &RawConfig) -> Result<ScenarioConfig, Error> {
    let kind = match raw.scenario.as_str() {
        "antibiotic" => ScenarioKind::Antibiotic,
        "mimicry" => ScenarioKind::Mimicry,
        "cooperation" => ScenarioKind::Cooperation,
        other => {
            return Err(config_error(
                "scenario",
                format!("unknown scenario `{other}`; expected antibiotic, mimicry, or cooperation"),
            ))
        }
    };
    let mut cfg = ScenarioConfig::defaults(kind);

    if let Some(seed) = raw.seed {
        cfg.seed = seed;
    }
    if let Some(replicates) = raw.replicates {
        cfg.replicates = replicates;
    }
    if let Some(e) = &raw.evolution {
        if let Some(n) = e.population_size {
            cfg.evolution.population_size = n;
        }
        if let Some(l) = e.locus_count {
            cfg.evolution.locus_count = l;
        }
        if let Some(mu) = e.mutation_rate {
            cfg.evolution.mutation_rate = mu;
        }
        if let Some(g) = e.generations {
            cfg.evolution.generations = g;
        }
        if let Some(r) = &e.reproduction {
            cfg.evolution.reproduction = match r.as_str() {
                "landscape_value" => ReproductionWeighting::LandscapeValue,
                "uniform_among_survivors" => ReproductionWeighting::UniformAmongSurvivors,
                other => {
                    return Err(config_error(
                        "evolution.reproduction",
                        format!(
                            "unknown weighting `{other}`; expected landscape_value or uniform_among_survivors"
                        ),
                    ))
                }
            };
        }
    }

    // Dependent defaults track the resolved evolution block: the default
    // schedule covers the resolved generation count and the default mimicry
    // target matches the resolved locus count.
    cfg.schedule = vec![ScheduleSpan {
        from: 0,
        to: cfg.evolution.generations,
        drug: true,
    }];
    if cfg.mimicry.target.len() != cfg.evolution.locus_count {
        cfg.mimicry.target = MimicryParams::default_target(cfg.evolution.locus_count);
    }

    if let Some(l) = &raw.learning {
        if let Some(alpha) = l.alpha {
            cfg.learning.alpha = alpha;
        }
        if let Some(gamma) = l.gamma {
            cfg.learning.gamma = gamma;
        }
        if let Some(epsilon) = l.epsilon {
            cfg.learning.epsilon = epsilon;
        }
    }
    if let Some(spans) = &raw.schedule {
        cfg.schedule = spans
            .iter()
            .map(|s| ScheduleSpan {
                from: s.from,
                to: s.to,
                drug: s.drug,
            })
            .collect();
    }
    if let Some(a) = &raw.antibiotic {
        if let Some(locus) = a.resistant_locus {
            cfg.antibiotic.resistant_locus = locus;
        }
        if let Some(f) = a.initial_resistant_freq {
            cfg.antibiotic.initial_resistant_freq = f;
        }
        if let Some(v) = a.resistant_on {
            cfg.antibiotic.resistant_on = v;
        }
        if let Some(v) = a.susceptible_on {
            cfg.antibiotic.susceptible_on = v;
        }
        if let Some(v) = a.resistant_off {
            cfg.antibiotic.resistant_off = v;
        }
        if let Some(v) = a.susceptible_off {
            cfg.antibiotic.susceptible_off = v;
        }
    }
    if let Some(m) = &raw.mimicry {
        if let Some(t) = &m.target {
            cfg.mimicry.target = t
                .parse::<Genotype>()
                .map_err(|e| config_error("mimicry.target", e.to_string()))?;
        }
        if let Some(v) = m.base_survival {
            cfg.mimicry.base_survival = v;
        }
        if let Some(v) = m.survival_gain {
            cfg.mimicry.survival_gain = v;
        }
        if let Some(v) = m.initial_one_freq {
            cfg.mimicry.initial_one_freq = v;
        }
        if let Some(v) = m.start_at_target {
            cfg.mimicry.start_at_target = v;
        }
        if let Some(v) = m.constant_survival {
            cfg.mimicry.constant_survival = Some(v);
        }
    }
    if let Some(c) = &raw.cooperation {
        if let Some(e) = c.episodes {
            cfg.cooperation.episodes = e;
        }
        if let Some(r) = c.rounds {
            cfg.cooperation.rounds = r;
        }
        if let Some(p) = &c.payoffs {
            cfg.cooperation.matrix = GameMatrix::new(p.t, p.r, p.p, p.s)
                .map_err(|e| config_error("cooperation.payoffs", e.to_string()))?;
        }
    }

    cfg.validate()?;
    Ok(cfg)
}

/// Serializes a resolved config back into the file schema with every field
/// spelled out, for embedding in manifests.
pub fn snapshot(cfg: &ScenarioConfig) -> RawConfig {
    let ScenarioConfig {
        scenario,
        evolution,
        learning,
        schedule,
        replicates,
        seed,
        antibiotic,
        mimicry,
        cooperation,
    } = cfg;
    let AntibioticParams {
        resistant_locus,
        initial_resistant_freq,
        resistant_on,
        susceptible_on,
        resistant_off,
        susceptible_off,
    } = antibiotic;
    let MimicryParams {
        target,
        base_survival,
        survival_gain,
        initial_one_freq,
        start_at_target,
        constant_survival,
    } = mimicry;
    let CooperationParams {
        episodes,
        rounds,
        matrix,
    } = cooperation;
    RawConfig {
        scenario: scenario.as_str().to_string(),
        seed: Some(*seed),
        replicates: Some(*replicates),
        evolution: Some(RawEvolution {
            population_size: Some(evolution.population_size),
            locus_count: Some(evolution.locus_count),
            mutation_rate: Some(evolution.mutation_rate),
            generations: Some(evolution.generations),
            reproduction: Some(
                match evolution.reproduction {
                    ReproductionWeighting::LandscapeValue => "landscape_value",
                    ReproductionWeighting::UniformAmongSurvivors => "uniform_among_survivors",
                }
                .to_string(),
            ),
        }),
        learning: Some(RawLearning {
            alpha: Some(learning.alpha),
            gamma: Some(learning.gamma),
            epsilon: Some(learning.epsilon),
        }),
        schedule: Some(
            schedule
                .iter()
                .map(|s| RawSpan {
                    from: s.from,
                    to: s.to,
                    drug: s.drug,
                })
                .collect(),
        ),
        antibiotic: Some(RawAntibiotic {
            resistant_locus: Some(*resistant_locus),
            initial_resistant_freq: Some(*initial_resistant_freq),
            resistant_on: Some(*resistant_on),
            susceptible_on: Some(*susceptible_on),
            resistant_off: Some(*resistant_off),
            susceptible_off: Some(*susceptible_off),
        }),
        mimicry: Some(RawMimicry {
            target: Some(target.to_string()),
            base_survival: Some(*base_survival),
            survival_gain: Some(*survival_gain),
            initial_one_freq: Some(*initial_one_freq),
            start_at_target: Some(*start_at_target),
            constant_survival: *constant_survival,
        }),
        cooperation: Some(RawCooperation {
            episodes: Some(*episodes),
            rounds: Some(*rounds),
            payoffs: Some(RawPayoffs {
                t: matrix.temptation(),
                r: matrix.reward(),
                p: matrix.punishment(),
                s: matrix.sucker(),
            }),
        }),
    }
}

/// Reads, parses, resolves, and validates a config file.
pub fn parse_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let raw = load_raw(path)?;
    resolve(&raw).map_err(|e| CliError::Config {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Reads and parses a config file without resolving defaults.
pub fn load_raw(path: &Path) -> Result<RawConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Config {
        path: path.display().to_string(),
        message: format!("cannot read config: {e}"),
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Config {
        path: path.display().to_string(),
        message: format!("malformed config: {e}"),
    })
}
