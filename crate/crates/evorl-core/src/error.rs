//! Error type shared across the engine.

use alloc::boxed::Box;
use alloc::string::String;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Anything the engine can reject at runtime.
///
/// Extinction is modelled as an error variant on purpose: a generation step
/// that kills every member has no output population, and callers decide
/// whether that ends the experiment or the replicate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Mean offspring count was zero or negative, so relative fitness is undefined.
    #[error("mean offspring count must be positive and finite, got {r_bar}")]
    SterilePopulation {
        /// The offending mean.
        r_bar: f64,
    },

    /// An offspring count was negative or not finite.
    #[error("offspring count must be finite and non-negative, got {r}")]
    InvalidOffspringCount {
        /// The offending count.
        r: f64,
    },

    /// An operation that needs members was handed an empty population.
    #[error("population is empty")]
    EmptyPopulation,

    /// A Monte-Carlo estimate was requested with zero samples.
    #[error("sample count must be at least 1")]
    ZeroSamples,

    /// A numeric input was NaN or infinite.
    #[error("{what} must be finite, got {value}")]
    NonFinite {
        /// Which input was rejected.
        what: &'static str,
        /// The offending value.
        value: f64,
    },

    /// A locus index fell outside the genotype.
    #[error("locus {locus} out of range for genotype length {len}")]
    LocusOutOfRange {
        /// Requested locus.
        locus: usize,
        /// Genotype length.
        len: usize,
    },

    /// Two genotypes that had to share a length did not.
    #[error("genotype length mismatch: expected {expected}, got {actual}")]
    GenotypeLengthMismatch {
        /// Expected locus count.
        expected: usize,
        /// Actual locus count.
        actual: usize,
    },

    /// A landscape produced a survival probability outside [0, 1].
    #[error("landscape value {value} outside [0, 1]")]
    SurvivalOutOfRange {
        /// The offending value.
        value: f64,
    },

    /// An environment-dependent landscape was asked about a tag it has no table for.
    #[error("no landscape table for environment `{tag}`")]
    UnknownEnvironment {
        /// The missing tag.
        tag: String,
    },

    /// Every member died during a generation step.
    #[error("population went extinct at generation {generation}")]
    Extinct {
        /// Generation the step would have produced.
        generation: u64,
    },

    /// Extinction inside a replicated scenario run.
    #[error("replicate {replicate} went extinct at generation {generation}")]
    ReplicateExtinct {
        /// Which replicate died.
        replicate: u32,
        /// Generation the step would have produced.
        generation: u64,
    },

    /// A state index fell outside a Q-table or environment.
    #[error("state {state} out of range for {count} states")]
    StateOutOfRange {
        /// Requested state.
        state: usize,
        /// Number of states.
        count: usize,
    },

    /// An action index fell outside a Q-table or environment.
    #[error("action {action} out of range for {count} actions")]
    ActionOutOfRange {
        /// Requested action.
        action: usize,
        /// Number of actions.
        count: usize,
    },

    /// An environment failed mid-training; the episode and step are attached.
    #[error("environment fault at episode {episode}, step {step}: {source}")]
    Environment {
        /// Episode in which the fault occurred.
        episode: usize,
        /// Step within the episode.
        step: usize,
        /// The underlying fault.
        #[source]
        source: Box<Error>,
    },

    /// A payoff matrix violated the dilemma orderings.
    #[error("invalid payoff matrix: {reason}")]
    InvalidPayoffs {
        /// Which ordering failed.
        reason: &'static str,
    },

    /// A configuration field failed validation.
    #[error("invalid value for `{field}`: {reason}")]
    InvalidConfig {
        /// Dotted path of the offending field.
        field: String,
        /// Human-readable reason.
        reason: String,
    },
}

impl Error {
    /// Shorthand for [`Error::InvalidConfig`].
    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
