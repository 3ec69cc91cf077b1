#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "langbench/corpus.hpp"
#include "langbench/language.hpp"
#include "langbench/mdl.hpp"
#include "langbench/rnn.hpp"

namespace langbench {

struct MutationWeights {
    double add_unit = 1.0;
    double remove_unit = 1.0;
    double add_connection = 2.0;
    double remove_connection = 2.0;
    double perturb_weight = 4.0;
    double replace_weight = 2.0;
    double change_activation = 1.0;
    double toggle_connection_kind = 1.0;

    double total() const {
        return add_unit + remove_unit + add_connection + remove_connection + perturb_weight +
               replace_weight + change_activation + toggle_connection_kind;
    }
};

struct EvolutionConfig {
    std::size_t population_size = 500;
    std::size_t island_size = 250;
    long long generations = 25000;
    std::size_t tournament_size = 2;
    double elite_ratio = 0.001;
    long long migration_interval_generations = 1000;
    double migration_interval_seconds = 1800.0;  // 0 disables the clock trigger
    double stagnation_seconds = 7200.0;          // 0 disables early stop
    MutationWeights mutation_weights;
    std::uint64_t seed = 100;
    int jobs = 1;

    std::size_t islands() const { return population_size / island_size; }
    void validate() const;
};

struct TraceRow {
    long long generation = 0;
    double best_total = 0.0;
    double grammar_bits = 0.0;
    double data_bits = 0.0;
};

struct EvolveResult {
    RnnGenome best;
    MdlScore best_score;
    std::vector<TraceRow> trace;  // one row per generation, best-so-far
    long long generations_run = 0;
    bool stopped_by_stagnation = false;
};

struct EvolveOptions {
    std::string resume_checkpoint;   // checkpoint file to continue from
    std::string checkpoint_path;     // where to write checkpoints
    long long checkpoint_every = 0;  // generations between checkpoints; 0 = final only
    // Overrides the built-in initialization (used by tests and by resume).
    std::vector<RnnGenome> initial_population;
};

// Island-model mutation-only genetic search minimizing MdlScore::total.
// Deterministic for a fixed seed and config when the wall-clock triggers
// (migration_interval_seconds, stagnation_seconds) are disabled.
EvolveResult evolve(const LanguageSpec& lang, const Corpus& train, const EvolutionConfig& cfg,
                    const EvolveOptions& opts = {});

std::string trace_tsv(const std::vector<TraceRow>& trace);

}  // namespace langbench
