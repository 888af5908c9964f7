//! Genotypes, populations, fitness landscapes, and the relative-fitness
//! algebra.
//!
//! Fitness is treated as an expected reward: a landscape maps each genotype
//! to a base value in `[0, 1]` which doubles as its survival probability and
//! its reproduction weight. Realized fitness is an offspring count, and
//! relative fitness `W = r / r_bar` normalizes it against the population
//! mean.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// Ordered sequence of binary loci. Always at least one locus long.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Genotype {
    bits: Vec<bool>,
}

impl Genotype {
    /// Wraps a bit vector.
    ///
    /// # Panics
    ///
    /// Panics if `bits` is empty; a genotype needs at least one locus.
    pub fn new(bits: Vec<bool>) -> Self {
        assert!(!bits.is_empty(), "genotype needs at least one locus");
        Genotype { bits }
    }

    /// All-zero genotype of the given length.
    pub fn zeros(len: usize) -> Self {
        Genotype::new(alloc::vec![false; len])
    }

    /// All-one genotype of the given length.
    pub fn ones(len: usize) -> Self {
        Genotype::new(alloc::vec![true; len])
    }

    /// Random genotype with each locus independently 1 with probability `p_one`.
    pub fn random<R: Rng + ?Sized>(len: usize, p_one: f64, rng: &mut R) -> Self {
        Genotype::new((0..len).map(|_| rng.random::<f64>() < p_one).collect())
    }

    /// Number of loci.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    /// The allele at `locus`.
    pub fn bit(&self, locus: usize) -> Result<bool> {
        self.bits
            .get(locus)
            .copied()
            .ok_or(Error::LocusOutOfRange {
                locus,
                len: self.bits.len(),
            })
    }

    /// All loci in order.
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Number of 1-alleles.
    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Number of loci at which `self` and `other` agree.
    pub fn matching_loci(&self, other: &Genotype) -> Result<usize> {
        if self.len() != other.len() {
            return Err(Error::GenotypeLengthMismatch {
                expected: self.len(),
                actual: other.len(),
            });
        }
        Ok(self
            .bits
            .iter()
            .zip(other.bits.iter())
            .filter(|(a, b)| a == b)
            .count())
    }
}

impl fmt::Display for Genotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Genotype {
    type Err = Error;

    /// Parses a bitstring such as `"10110"`.
    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::config("genotype", "needs at least one locus"));
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::config(
                    "genotype",
                    alloc::format!("expected only '0' and '1', got '{other}'"),
                )),
            })
            .collect::<Result<Vec<bool>>>()
            .map(Genotype::new)
    }
}

/// One population member: a genotype plus its most recent trial outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    /// Heritable state.
    pub genotype: Genotype,
    /// Realized offspring count from the most recent completed generation step.
    pub offspring_count: u32,
    /// Outcome of the most recent survival trial. Newborns start alive.
    pub alive: bool,
}

impl Individual {
    /// A newborn individual: alive, no offspring yet.
    pub fn new(genotype: Genotype) -> Self {
        Individual {
            genotype,
            offspring_count: 0,
            alive: true,
        }
    }
}

/// A synchronous generation of individuals.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    /// Members in stored order. Order is meaningful: reproduction sampling
    /// walks it deterministically.
    pub members: Vec<Individual>,
    /// Generation counter, starting at 0 for founders.
    pub generation: u64,
}

impl Population {
    /// Wraps members at the given generation.
    pub fn new(members: Vec<Individual>, generation: u64) -> Self {
        Population {
            members,
            generation,
        }
    }

    /// Founder population of `size` random genotypes, generation 0.
    pub fn founders<R: Rng + ?Sized>(
        size: usize,
        locus_count: usize,
        p_one: f64,
        rng: &mut R,
    ) -> Self {
        let members = (0..size)
            .map(|_| Individual::new(Genotype::random(locus_count, p_one, rng)))
            .collect();
        Population::new(members, 0)
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// True when there are no members.
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Genotype-to-value mapping used by landscapes. Values are base reward
/// parameters in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub enum LandscapeMap {
    /// Same value for every genotype.
    Uniform(f64),
    /// Value decided by the allele at a single locus.
    SingleLocus {
        /// Which locus to read.
        locus: usize,
        /// Value when the allele is 0.
        when_zero: f64,
        /// Value when the allele is 1.
        when_one: f64,
    },
    /// `base + gain * similarity`, where similarity is the fraction of loci
    /// matching the target pattern.
    PatternMatch {
        /// The model pattern being imitated.
        target: Genotype,
        /// Value at zero similarity.
        base: f64,
        /// Slope with respect to similarity.
        gain: f64,
    },
    /// Explicit per-genotype table with a default for unlisted genotypes.
    Table {
        /// Explicit entries.
        entries: BTreeMap<Genotype, f64>,
        /// Value for genotypes not in `entries`.
        default: f64,
    },
}

impl LandscapeMap {
    /// The mapped value for `g`.
    pub fn value(&self, g: &Genotype) -> Result<f64> {
        match self {
            LandscapeMap::Uniform(v) => Ok(*v),
            LandscapeMap::SingleLocus {
                locus,
                when_zero,
                when_one,
            } => Ok(if g.bit(*locus)? { *when_one } else { *when_zero }),
            LandscapeMap::PatternMatch { target, base, gain } => {
                let matches = target.matching_loci(g)?;
                let similarity = matches as f64 / target.len() as f64;
                Ok(base + gain * similarity)
            }
            LandscapeMap::Table { entries, default } => {
                Ok(entries.get(g).copied().unwrap_or(*default))
            }
        }
    }

    /// Checks every value this map can emit lies in `[0, 1]`.
    pub fn validate(&self) -> Result<()> {
        fn check(v: f64) -> Result<()> {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::SurvivalOutOfRange { value: v });
            }
            Ok(())
        }
        match self {
            LandscapeMap::Uniform(v) => check(*v),
            LandscapeMap::SingleLocus {
                when_zero, when_one, ..
            } => {
                check(*when_zero)?;
                check(*when_one)
            }
            LandscapeMap::PatternMatch { base, gain, .. } => {
                check(*base)?;
                check(*base + *gain)
            }
            LandscapeMap::Table { entries, default } => {
                for v in entries.values() {
                    check(*v)?;
                }
                check(*default)
            }
        }
    }
}

/// A fitness landscape: where rewards come from.
///
/// The mapped value plays two roles. It is the survival probability used by
/// generation steps, and it parameterizes the reward draws used when fitness
/// is estimated as an expected reward.
#[derive(Debug, Clone, PartialEq)]
pub enum FitnessLandscape {
    /// Reward draws return the mapped value itself.
    Deterministic(LandscapeMap),
    /// Reward draws are Bernoulli survival trials with the mapped value as
    /// success probability.
    Bernoulli(LandscapeMap),
    /// Bernoulli rewards with the map chosen by an opaque environment tag.
    EnvironmentDependent {
        /// One map per environment tag.
        tables: BTreeMap<String, LandscapeMap>,
        /// The currently active tag.
        state: String,
    },
}

impl FitnessLandscape {
    /// The active map.
    fn map(&self) -> Result<&LandscapeMap> {
        match self {
            FitnessLandscape::Deterministic(m) | FitnessLandscape::Bernoulli(m) => Ok(m),
            FitnessLandscape::EnvironmentDependent { tables, state } => {
                tables.get(state).ok_or_else(|| Error::UnknownEnvironment {
                    tag: state.clone(),
                })
            }
        }
    }

    /// The base value for `g` under the current environment, unchecked.
    pub fn value(&self, g: &Genotype) -> Result<f64> {
        self.map()?.value(g)
    }

    /// The base value for `g`, checked to lie in `[0, 1]` so it can be used
    /// as a probability.
    pub fn survival_probability(&self, g: &Genotype) -> Result<f64> {
        let v = self.value(g)?;
        if !v.is_finite() || !(0.0..=1.0).contains(&v) {
            return Err(Error::SurvivalOutOfRange { value: v });
        }
        Ok(v)
    }

    /// One reward draw for `g`: the value itself for deterministic
    /// landscapes, a 0/1 Bernoulli draw otherwise.
    pub fn sample_reward<R: Rng + ?Sized>(&self, g: &Genotype, rng: &mut R) -> Result<f64> {
        let p = self.survival_probability(g)?;
        match self {
            FitnessLandscape::Deterministic(_) => Ok(p),
            FitnessLandscape::Bernoulli(_) | FitnessLandscape::EnvironmentDependent { .. } => {
                Ok(if rng.random::<f64>() < p { 1.0 } else { 0.0 })
            }
        }
    }

    /// Copy of this landscape with the environment switched to `tag`.
    ///
    /// Only environment-dependent landscapes have environments; asking any
    /// other kind (or asking for an unknown tag) is an error.
    pub fn with_environment(&self, tag: &str) -> Result<Self> {
        match self {
            FitnessLandscape::EnvironmentDependent { tables, .. } => {
                if !tables.contains_key(tag) {
                    return Err(Error::UnknownEnvironment {
                        tag: String::from(tag),
                    });
                }
                Ok(FitnessLandscape::EnvironmentDependent {
                    tables: tables.clone(),
                    state: String::from(tag),
                })
            }
            _ => Err(Error::UnknownEnvironment {
                tag: String::from(tag),
            }),
        }
    }

    /// The current environment tag, if this landscape has one.
    pub fn environment(&self) -> Option<&str> {
        match self {
            FitnessLandscape::EnvironmentDependent { state, .. } => Some(state),
            _ => None,
        }
    }

    /// Validates every table this landscape can select.
    pub fn validate(&self) -> Result<()> {
        match self {
            FitnessLandscape::Deterministic(m) | FitnessLandscape::Bernoulli(m) => m.validate(),
            FitnessLandscape::EnvironmentDependent { tables, state } => {
                if !tables.contains_key(state) {
                    return Err(Error::UnknownEnvironment { tag: state.clone() });
                }
                for m in tables.values() {
                    m.validate()?;
                }
                Ok(())
            }
        }
    }
}

/// Monte-Carlo estimate of expected fitness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitnessEstimate {
    /// Sample mean of the reward draws.
    pub mean: f64,
    /// Standard error of the mean; 0 by convention for a single sample.
    pub standard_error: f64,
}

/// Relative fitness `W = r / r_bar`.
///
/// Exactly zero when `r` is zero, exactly one when `r` equals `r_bar`.
pub fn relative_fitness(r: f64, r_bar: f64) -> Result<f64> {
    if !r_bar.is_finite() || r_bar <= 0.0 {
        return Err(Error::SterilePopulation { r_bar });
    }
    if !r.is_finite() || r < 0.0 {
        return Err(Error::InvalidOffspringCount { r });
    }
    Ok(r / r_bar)
}

/// Mean offspring count over a population's members.
pub fn population_mean_offspring(pop: &Population) -> Result<f64> {
    if pop.is_empty() {
        return Err(Error::EmptyPopulation);
    }
    let total: u64 = pop.members.iter().map(|m| u64::from(m.offspring_count)).sum();
    Ok(total as f64 / pop.len() as f64)
}

/// Monte-Carlo estimate of a genotype's expected fitness from `n` reward
/// draws.
///
/// Uses Welford's running moments, so a constant reward stream reports its
/// value exactly with zero standard error. The standard error is the sample
/// standard deviation over `sqrt(n)`; with `n = 1` it is 0 by convention.
pub fn estimate_expected_fitness<R: Rng + ?Sized>(
    g: &Genotype,
    land: &FitnessLandscape,
    n: usize,
    rng: &mut R,
) -> Result<FitnessEstimate> {
    if n == 0 {
        return Err(Error::ZeroSamples);
    }
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for i in 1..=n {
        let x = land.sample_reward(g, rng)?;
        let d = x - mean;
        mean += d / i as f64;
        m2 += d * (x - mean);
    }
    let standard_error = if n > 1 {
        crate::sqrt(m2 / (n - 1) as f64 / n as f64)
    } else {
        0.0
    };
    Ok(FitnessEstimate {
        mean,
        standard_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::StreamTree;
    use alloc::vec;

    fn g(s: &str) -> Genotype {
        s.parse().unwrap()
    }

    fn counts(cs: &[u32]) -> Population {
        let members = cs
            .iter()
            .map(|&c| {
                let mut ind = Individual::new(Genotype::zeros(1));
                ind.offspring_count = c;
                ind
            })
            .collect();
        Population::new(members, 0)
    }

    #[test]
    fn relative_fitness_direct_substitution() {
        assert_eq!(relative_fitness(3.0, 3.0).unwrap(), 1.0);
        assert_eq!(relative_fitness(4.0, 2.0).unwrap(), 2.0);
        assert_eq!(relative_fitness(0.0, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn relative_fitness_rejects_sterile_mean() {
        assert!(matches!(
            relative_fitness(1.0, 0.0),
            Err(Error::SterilePopulation { .. })
        ));
        assert!(matches!(
            relative_fitness(1.0, -2.0),
            Err(Error::SterilePopulation { .. })
        ));
        assert!(matches!(
            relative_fitness(1.0, f64::NAN),
            Err(Error::SterilePopulation { .. })
        ));
    }

    #[test]
    fn relative_fitness_rejects_bad_count() {
        assert!(matches!(
            relative_fitness(-1.0, 2.0),
            Err(Error::InvalidOffspringCount { .. })
        ));
    }

    #[test]
    fn mean_offspring_direct() {
        assert_eq!(
            population_mean_offspring(&counts(&[1, 2, 3, 6])).unwrap(),
            3.0
        );
    }

    #[test]
    fn mean_offspring_empty_population() {
        let pop = Population::new(vec![], 0);
        assert_eq!(population_mean_offspring(&pop), Err(Error::EmptyPopulation));
    }

    #[test]
    fn deterministic_estimate_is_exact() {
        let land = FitnessLandscape::Deterministic(LandscapeMap::Uniform(0.7));
        let mut rng = StreamTree::new(0).stream("est", 0);
        let est = estimate_expected_fitness(&g("0"), &land, 5, &mut rng).unwrap();
        assert_eq!(est.mean, 0.7);
        assert_eq!(est.standard_error, 0.0);
    }

    #[test]
    fn certain_survival_estimate_is_exact() {
        let land = FitnessLandscape::Bernoulli(LandscapeMap::Uniform(1.0));
        let mut rng = StreamTree::new(1).stream("est", 0);
        let est = estimate_expected_fitness(&g("0"), &land, 100, &mut rng).unwrap();
        assert_eq!(est.mean, 1.0);
        assert_eq!(est.standard_error, 0.0);
    }

    #[test]
    fn fair_coin_estimate_matches_brute_force_redraw() {
        // Oracle: replay the identical stream by hand and count successes.
        let tree = StreamTree::new(2024);
        let mut oracle_rng = tree.stream("fitness", 0);
        let mut successes = 0u32;
        let n = 10_000;
        for _ in 0..n {
            if oracle_rng.random::<f64>() < 0.5 {
                successes += 1;
            }
        }
        let oracle_mean = f64::from(successes) / n as f64;

        let land = FitnessLandscape::Bernoulli(LandscapeMap::Uniform(0.5));
        let mut rng = tree.stream("fitness", 0);
        let est = estimate_expected_fitness(&g("0"), &land, n as usize, &mut rng).unwrap();

        assert!(
            (est.mean - oracle_mean).abs() < 1e-15,
            "same stream must give same mean: {} vs {}",
            est.mean,
            oracle_mean
        );
        // 3 sigma for a fair coin at n = 10000 is 0.015.
        assert!(
            (est.mean - 0.5).abs() < 0.015,
            "mean {} strayed from 0.5",
            est.mean
        );
    }

    #[test]
    fn zero_samples_rejected() {
        let land = FitnessLandscape::Deterministic(LandscapeMap::Uniform(0.5));
        let mut rng = StreamTree::new(0).stream("est", 1);
        assert_eq!(
            estimate_expected_fitness(&g("0"), &land, 0, &mut rng),
            Err(Error::ZeroSamples)
        );
    }

    #[test]
    fn quadrupling_samples_halves_standard_error() {
        let land = FitnessLandscape::Bernoulli(LandscapeMap::Uniform(0.5));
        let tree = StreamTree::new(99);
        let small = estimate_expected_fitness(&g("0"), &land, 10_000, &mut tree.stream("a", 0))
            .unwrap()
            .standard_error;
        let large = estimate_expected_fitness(&g("0"), &land, 40_000, &mut tree.stream("b", 0))
            .unwrap()
            .standard_error;
        let ratio = small / large;
        assert!(
            (ratio - 2.0).abs() < 0.3,
            "expected ratio near 2, got {ratio}"
        );
    }

    #[test]
    fn single_locus_map_reads_the_locus() {
        let map = LandscapeMap::SingleLocus {
            locus: 1,
            when_zero: 0.3,
            when_one: 0.9,
        };
        assert_eq!(map.value(&g("00")).unwrap(), 0.3);
        assert_eq!(map.value(&g("01")).unwrap(), 0.9);
        assert!(matches!(
            map.value(&g("1")),
            Err(Error::LocusOutOfRange { locus: 1, len: 1 })
        ));
    }

    #[test]
    fn pattern_match_map_is_linear_in_similarity() {
        let map = LandscapeMap::PatternMatch {
            target: g("1010"),
            base: 0.4,
            gain: 0.5,
        };
        assert_eq!(map.value(&g("1010")).unwrap(), 0.9);
        assert_eq!(map.value(&g("0101")).unwrap(), 0.4);
        assert_eq!(map.value(&g("1011")).unwrap(), 0.4 + 0.5 * 0.75);
    }

    #[test]
    fn table_map_falls_back_to_default() {
        let mut entries = BTreeMap::new();
        entries.insert(g("11"), 0.8);
        let map = LandscapeMap::Table {
            entries,
            default: 0.25,
        };
        assert_eq!(map.value(&g("11")).unwrap(), 0.8);
        assert_eq!(map.value(&g("00")).unwrap(), 0.25);
    }

    #[test]
    fn environment_switching() {
        let mut tables = BTreeMap::new();
        tables.insert(String::from("on"), LandscapeMap::Uniform(0.9));
        tables.insert(String::from("off"), LandscapeMap::Uniform(0.55));
        let land = FitnessLandscape::EnvironmentDependent {
            tables,
            state: String::from("on"),
        };
        assert_eq!(land.value(&g("1")).unwrap(), 0.9);
        let off = land.with_environment("off").unwrap();
        assert_eq!(off.value(&g("1")).unwrap(), 0.55);
        assert_eq!(land.value(&g("1")).unwrap(), 0.9, "original unchanged");
        assert!(matches!(
            land.with_environment("rainy"),
            Err(Error::UnknownEnvironment { .. })
        ));
    }

    #[test]
    fn deterministic_landscape_never_touches_the_rng() {
        let land = FitnessLandscape::Deterministic(LandscapeMap::Uniform(0.4));
        let tree = StreamTree::new(5);
        let mut rng = tree.stream("det", 0);
        let _ = land.sample_reward(&g("0"), &mut rng).unwrap();
        let after: u64 = rng.random();
        let fresh: u64 = tree.stream("det", 0).random();
        assert_eq!(after, fresh);
    }

    #[test]
    fn out_of_range_values_rejected() {
        assert!(LandscapeMap::Uniform(1.5).validate().is_err());
        assert!(LandscapeMap::Uniform(-0.1).validate().is_err());
        assert!(LandscapeMap::Uniform(f64::NAN).validate().is_err());
        let land = FitnessLandscape::Bernoulli(LandscapeMap::Uniform(1.5));
        let mut rng = StreamTree::new(0).stream("bad", 0);
        assert!(matches!(
            land.sample_reward(&g("0"), &mut rng),
            Err(Error::SurvivalOutOfRange { .. })
        ));
    }

    #[test]
    fn genotype_parsing_and_display() {
        let geno = g("10110");
        assert_eq!(alloc::format!("{geno}"), "10110");
        assert_eq!(geno.len(), 5);
        assert_eq!(geno.count_ones(), 3);
        assert!("".parse::<Genotype>().is_err());
        assert!("10x".parse::<Genotype>().is_err());
    }

    #[test]
    fn matching_loci_requires_equal_lengths() {
        assert_eq!(g("1010").matching_loci(&g("1001")).unwrap(), 2);
        assert!(matches!(
            g("10").matching_loci(&g("100")),
            Err(Error::GenotypeLengthMismatch { .. })
        ));
    }
}
