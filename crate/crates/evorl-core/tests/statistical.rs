//! Replicated Monte-Carlo checks on population dynamics. Tolerances are
//! stated per test; drift checks use 3 standard errors, ordering checks 2.

use evorl_core::dynamics::{allele_frequency, mutate, step_generation, EvolutionConfig};
use evorl_core::fitness::{FitnessLandscape, Genotype, LandscapeMap, Population};
use evorl_core::scenarios::{run_mimicry, ScenarioConfig, ScenarioKind};
use evorl_core::stream::StreamTree;

struct Summary {
    mean: f64,
    se: f64,
}

fn summarize(values: &[f64]) -> Summary {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Summary {
        mean,
        se: (var / n).sqrt(),
    }
}

fn terminal_frequencies(
    label: &str,
    landscape: &FitnessLandscape,
    cfg: &EvolutionConfig,
    p0: f64,
    replicates: u32,
) -> Vec<f64> {
    let streams = StreamTree::new(0xd1f7);
    (0..replicates)
        .map(|rep| {
            let mut rng = streams.stream(label, u64::from(rep));
            let mut pop = Population::founders(cfg.population_size, cfg.locus_count, p0, &mut rng);
            for _ in 0..cfg.generations {
                pop = step_generation(&pop, landscape, cfg, &mut rng).unwrap().next;
            }
            allele_frequency(&pop, 0).unwrap()
        })
        .collect()
}

#[test]
fn neutral_drift_is_a_martingale() {
    let cfg = EvolutionConfig {
        population_size: 100,
        locus_count: 1,
        mutation_rate: 0.0,
        generations: 50,
        ..EvolutionConfig::default()
    };
    let land = FitnessLandscape::Bernoulli(LandscapeMap::Uniform(0.8));
    let p0 = 0.3;
    let summary = summarize(&terminal_frequencies("drift", &land, &cfg, p0, 500));
    assert!(
        (summary.mean - p0).abs() <= 3.0 * summary.se,
        "drifted mean {} vs p0 {} (se {})",
        summary.mean,
        p0,
        summary.se
    );
}

#[test]
fn stronger_advantage_never_lowers_terminal_frequency() {
    let cfg = EvolutionConfig {
        population_size: 100,
        locus_count: 1,
        mutation_rate: 0.0,
        generations: 15,
        ..EvolutionConfig::default()
    };
    let summaries: Vec<Summary> = [0.55, 0.65, 0.75]
        .iter()
        .map(|&when_one| {
            let land = FitnessLandscape::Bernoulli(LandscapeMap::SingleLocus {
                locus: 0,
                when_zero: 0.5,
                when_one,
            });
            summarize(&terminal_frequencies("grid", &land, &cfg, 0.3, 500))
        })
        .collect();
    for pair in summaries.windows(2) {
        let slack = 2.0 * (pair[0].se.powi(2) + pair[1].se.powi(2)).sqrt();
        assert!(
            pair[1].mean >= pair[0].mean - slack,
            "ordering violated: {} then {} (slack {slack})",
            pair[0].mean,
            pair[1].mean
        );
    }
}

#[test]
fn selection_enriches_the_favored_allele() {
    let cfg = EvolutionConfig {
        population_size: 200,
        locus_count: 1,
        mutation_rate: 0.0,
        generations: 20,
        ..EvolutionConfig::default()
    };
    let land = FitnessLandscape::Bernoulli(LandscapeMap::SingleLocus {
        locus: 0,
        when_zero: 0.5,
        when_one: 0.9,
    });
    let summary = summarize(&terminal_frequencies("enrich", &land, &cfg, 0.5, 200));
    assert!(
        summary.mean > 0.5 + 0.2,
        "expected enrichment margin of 0.2, got mean {}",
        summary.mean
    );
}

#[test]
fn mutation_flip_count_matches_rate() {
    let mut rng = StreamTree::new(7).stream("flips", 0);
    let g = Genotype::zeros(100);
    let mut mean_flips = 0.0;
    for i in 0..10_000 {
        let child = mutate(&g, 0.01, &mut rng);
        mean_flips += (child.count_ones() as f64 - mean_flips) / (i + 1) as f64;
    }
    assert!(
        (mean_flips - 1.0).abs() <= 0.05,
        "mean flips per genotype {mean_flips}"
    );
}

#[test]
fn ablated_mimicry_similarity_is_a_martingale() {
    let mut cfg = ScenarioConfig::defaults(ScenarioKind::Mimicry);
    cfg.evolution.population_size = 60;
    cfg.evolution.locus_count = 8;
    cfg.evolution.mutation_rate = 0.0;
    cfg.evolution.generations = 50;
    cfg.mimicry = evorl_core::scenarios::MimicryParams {
        constant_survival: Some(0.7),
        ..evorl_core::scenarios::MimicryParams::default_for(8)
    };
    cfg.replicates = 500;
    cfg.seed = 42;
    let set = run_mimicry(&cfg, &StreamTree::new(cfg.seed)).unwrap();
    let last = cfg.evolution.generations;
    let initial: Vec<f64> = set
        .records
        .iter()
        .filter(|r| r.step == 0)
        .map(|r| r.values[0])
        .collect();
    let terminal: Vec<f64> = set
        .records
        .iter()
        .filter(|r| r.step == last)
        .map(|r| r.values[0])
        .collect();
    let start = summarize(&initial);
    let end = summarize(&terminal);
    assert!(
        (end.mean - start.mean).abs() <= 3.0 * (start.se.powi(2) + end.se.powi(2)).sqrt(),
        "ablated similarity moved: {} -> {} (se {} / {})",
        start.mean,
        end.mean,
        start.se,
        end.se
    );
}

#[test]
fn mimicry_similarity_rises_steadily() {
    let mut cfg = ScenarioConfig::defaults(ScenarioKind::Mimicry);
    cfg.replicates = 100;
    cfg.seed = 2;
    let set = run_mimicry(&cfg, &StreamTree::new(cfg.seed)).unwrap();
    let mean_at = |step: u64| -> f64 {
        let vals: Vec<f64> = set
            .records
            .iter()
            .filter(|r| r.step == step)
            .map(|r| r.values[0])
            .collect();
        summarize(&vals).mean
    };
    let start = mean_at(0);
    assert!((start - 0.5).abs() < 0.05, "founders sit near 0.5, got {start}");
    let checkpoints: Vec<f64> = [0, 15, 30, 45, 60].iter().map(|&g| mean_at(g)).collect();
    for pair in checkpoints.windows(2) {
        assert!(
            pair[1] > pair[0],
            "similarity should rise through checkpoints: {checkpoints:?}"
        );
    }
    let terminal = mean_at(60);
    assert!(terminal > 0.8, "terminal similarity {terminal}");
}
