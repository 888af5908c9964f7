//! Population dynamics: binary survival feedback, mutation as exploration,
//! and the synchronous Wright-Fisher-style generation step.
//!
//! The loop implemented by [`step_generation`] is the learning update of the
//! whole engine: the environment grades each genotype with a live/die draw,
//! survivors reproduce in proportion to their landscape value, and mutation
//! injects fresh variation into the offspring.

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::fitness::{FitnessLandscape, Genotype, Individual, Population};

/// Outcome of one binary survival trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum SurvivalOutcome {
    /// The individual died (reward 0).
    Die = 0,
    /// The individual lived (reward 1).
    Live = 1,
}

impl SurvivalOutcome {
    /// 1.0 for live, 0.0 for die.
    pub fn as_f64(self) -> f64 {
        match self {
            SurvivalOutcome::Live => 1.0,
            SurvivalOutcome::Die => 0.0,
        }
    }

    /// True when the individual lived.
    pub fn is_live(self) -> bool {
        matches!(self, SurvivalOutcome::Live)
    }
}

impl From<bool> for SurvivalOutcome {
    fn from(alive: bool) -> Self {
        if alive {
            SurvivalOutcome::Live
        } else {
            SurvivalOutcome::Die
        }
    }
}

/// Inputs to the breeder's-equation response.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionParams {
    /// Narrow-sense heritability, in `[0, 1]`.
    pub heritability: f64,
    /// Selection coefficient.
    pub selection_coefficient: f64,
    /// Population mean fitness the trait value is measured against.
    pub mean_fitness: f64,
}

impl SelectionParams {
    /// Validated constructor.
    pub fn new(heritability: f64, selection_coefficient: f64, mean_fitness: f64) -> Result<Self> {
        let params = SelectionParams {
            heritability,
            selection_coefficient,
            mean_fitness,
        };
        params.validate()?;
        Ok(params)
    }

    /// Checks heritability lies in `[0, 1]` and everything is finite.
    pub fn validate(&self) -> Result<()> {
        if !self.heritability.is_finite() || !(0.0..=1.0).contains(&self.heritability) {
            return Err(Error::config(
                "heritability",
                alloc::format!("must lie in [0, 1], got {}", self.heritability),
            ));
        }
        if !self.selection_coefficient.is_finite() {
            return Err(Error::NonFinite {
                what: "selection_coefficient",
                value: self.selection_coefficient,
            });
        }
        if !self.mean_fitness.is_finite() {
            return Err(Error::NonFinite {
                what: "mean_fitness",
                value: self.mean_fitness,
            });
        }
        Ok(())
    }
}

/// How survivors are weighted when drawing parents for the next generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReproductionWeighting {
    /// Weight each survivor by its landscape value.
    #[default]
    LandscapeValue,
    /// Every survivor is equally likely.
    UniformAmongSurvivors,
}

/// Knobs for the generation step.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionConfig {
    /// Offspring population size `N`, at least 2.
    pub population_size: usize,
    /// Loci per genotype `L`, at least 1.
    pub locus_count: usize,
    /// Per-locus flip probability `mu`, in `[0, 1]`.
    pub mutation_rate: f64,
    /// Number of generation steps `G`, at least 1.
    pub generations: u64,
    /// Reproduction weighting switch.
    pub reproduction: ReproductionWeighting,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        EvolutionConfig {
            population_size: 100,
            locus_count: 1,
            mutation_rate: 0.001,
            generations: 50,
            reproduction: ReproductionWeighting::LandscapeValue,
        }
    }
}

impl EvolutionConfig {
    /// Field-by-field validation.
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::config(
                "population_size",
                alloc::format!("must be at least 2, got {}", self.population_size),
            ));
        }
        if self.locus_count < 1 {
            return Err(Error::config("locus_count", "must be at least 1"));
        }
        if !self.mutation_rate.is_finite() || !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(Error::config(
                "mutation_rate",
                alloc::format!("must lie in [0, 1], got {}", self.mutation_rate),
            ));
        }
        if self.generations < 1 {
            return Err(Error::config("generations", "must be at least 1"));
        }
        Ok(())
    }
}

/// Expected per-generation change in a selected trait:
/// `delta = heritability * selection_coefficient * (p - mean_fitness)`.
///
/// This is the analytic counterpart of what the simulation does by sampling;
/// it is exposed for analysis and never drives [`step_generation`].
pub fn selection_delta(p: f64, params: &SelectionParams) -> Result<f64> {
    if !p.is_finite() {
        return Err(Error::NonFinite {
            what: "trait value",
            value: p,
        });
    }
    params.validate()?;
    Ok(params.heritability * params.selection_coefficient * (p - params.mean_fitness))
}

/// One binary survival trial: live with probability equal to the genotype's
/// landscape value. Returns the individual with `alive` set to the outcome.
///
/// Consumes exactly one uniform draw.
pub fn survival_trial<R: Rng + ?Sized>(
    ind: &Individual,
    land: &FitnessLandscape,
    rng: &mut R,
) -> Result<(Individual, SurvivalOutcome)> {
    let p = land.survival_probability(&ind.genotype)?;
    let outcome = SurvivalOutcome::from(rng.random::<f64>() < p);
    let mut out = ind.clone();
    out.alive = outcome.is_live();
    Ok((out, outcome))
}

/// Independently flips each locus with probability `mu`.
///
/// Consumes one uniform draw per locus regardless of `mu`, so stream
/// positions do not depend on the rate.
///
/// # Panics
///
/// Panics if `mu` is not in `[0, 1]`.
pub fn mutate<R: Rng + ?Sized>(g: &Genotype, mu: f64, rng: &mut R) -> Genotype {
    assert!(
        mu.is_finite() && (0.0..=1.0).contains(&mu),
        "mutation rate must lie in [0, 1], got {mu}"
    );
    Genotype::new(
        g.bits()
            .iter()
            .map(|&b| {
                if rng.random::<f64>() < mu {
                    !b
                } else {
                    b
                }
            })
            .collect(),
    )
}

/// Result of one generation step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    /// The input members with survival outcomes and realized offspring
    /// counts filled in. Dead members keep an offspring count of 0.
    pub parents: Population,
    /// The offspring generation: exactly `population_size` newborns with the
    /// generation counter incremented.
    pub next: Population,
}

/// One synchronous generation step.
///
/// In order: (1) every member takes a survival trial, in stored order;
/// (2) if nobody survives the step fails with [`Error::Extinct`] carrying the
/// generation the step would have produced; (3) `population_size` parents are
/// drawn from the survivors by cumulative-sum inversion over stored order,
/// weighted by landscape value (or uniformly, per the config switch); (4)
/// each offspring is a mutated copy of its parent.
///
/// Draw order is fixed: one survival draw per member, then per offspring one
/// parent draw followed by one mutation draw per locus.
pub fn step_generation<R: Rng + ?Sized>(
    pop: &Population,
    land: &FitnessLandscape,
    cfg: &EvolutionConfig,
    rng: &mut R,
) -> Result<StepOutcome> {
    cfg.validate()?;
    if pop.is_empty() {
        return Err(Error::EmptyPopulation);
    }

    let mut parents = Vec::with_capacity(pop.len());
    for ind in &pop.members {
        let (mut graded, _) = survival_trial(ind, land, rng)?;
        graded.offspring_count = 0;
        parents.push(graded);
    }

    let next_generation = pop.generation + 1;
    if parents.iter().all(|m| !m.alive) {
        return Err(Error::Extinct {
            generation: next_generation,
        });
    }

    // Cumulative weights over survivors, in stored order.
    let mut survivor_indices = Vec::new();
    let mut cumulative = Vec::new();
    let mut total = 0.0f64;
    for (i, member) in parents.iter().enumerate() {
        if !member.alive {
            continue;
        }
        let w = match cfg.reproduction {
            ReproductionWeighting::LandscapeValue => {
                land.survival_probability(&member.genotype)?
            }
            ReproductionWeighting::UniformAmongSurvivors => 1.0,
        };
        total += w;
        survivor_indices.push(i);
        cumulative.push(total);
    }
    debug_assert!(total > 0.0, "survivors always carry positive weight");

    let mut offspring = Vec::with_capacity(cfg.population_size);
    for _ in 0..cfg.population_size {
        let u = rng.random::<f64>() * total;
        let k = cumulative
            .partition_point(|&c| c <= u)
            .min(survivor_indices.len() - 1);
        let parent = survivor_indices[k];
        parents[parent].offspring_count += 1;
        let child = mutate(&parents[parent].genotype, cfg.mutation_rate, rng);
        offspring.push(Individual::new(child));
    }

    Ok(StepOutcome {
        parents: Population::new(parents, pop.generation),
        next: Population::new(offspring, next_generation),
    })
}

/// Frequency of the 1-allele at `locus`.
pub fn allele_frequency(pop: &Population, locus: usize) -> Result<f64> {
    if pop.is_empty() {
        return Err(Error::EmptyPopulation);
    }
    let mut ones = 0usize;
    for member in &pop.members {
        if member.genotype.bit(locus)? {
            ones += 1;
        }
    }
    Ok(ones as f64 / pop.len() as f64)
}
