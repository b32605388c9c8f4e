#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cgpc/dataset.hpp"
#include "cgpc/genotype.hpp"
#include "cgpc/matrix.hpp"
#include "cgpc/rng.hpp"

namespace cgpc {

// Search hyperparameters for the (1+lambda) strategy.
struct EvolutionConfig {
    int n_nodes = 50;
    double mutation_rate = 0.1;          // per-gene resample probability
    int max_iterations = 15000;
    int offspring_count = 4;             // lambda
    double recurrence_probability = 0.0; // 0.1 for recurrent runs
    double decision_threshold = 0.0;     // output > threshold -> class 1
    int static_update_passes = 1;        // sweeps per sample on flat data
    std::uint64_t seed = 0;

    void validate() const; // throws ConfigError
};

// Evaluates one genotype, touching only active nodes. Node state is
// zeroed before every sample; within a sweep, a reference to a node at the
// same or a later address reads that node's previous-sweep value.
class Evaluator {
public:
    Evaluator() = default;
    explicit Evaluator(const Genotype& genotype,
                       const FunctionSet& fs = FunctionSet::standard());

    void bind(const Genotype& genotype); // rebind, reusing buffers
    const std::vector<int>& active() const { return active_; }

    double eval_static(std::span<const double> inputs, int passes = 1);
    double eval_sequential(const Matrix& input_matrix);

private:
    const Genotype* g_ = nullptr;
    const FunctionSet* fs_ = nullptr;
    std::vector<int> active_;
    std::vector<double> state_;

    void reset_state();
    void sweep(std::span<const double> inputs);
    double read(int address, std::span<const double> inputs) const;
};

// Connection genes are drawn from the feed-forward range, or with
// probability cfg.recurrence_probability from the full address range. The
// output gene always draws from the full range.
Genotype random_genotype(const EvolutionConfig& cfg, int n_inputs, Rng& rng,
                         const FunctionSet& fs = FunctionSet::standard());

struct MutationStats {
    int genes_resampled = 0;
};

// Per-gene resampling at the given rate; a resampled gene draws uniformly
// from its legal range (the old value may recur). Connection genes re-apply
// the recurrence rule used at initialization.
Genotype mutate(const Genotype& parent, double rate, double recurrence_probability,
                Rng& rng, const FunctionSet& fs = FunctionSet::standard(),
                MutationStats* stats = nullptr);

double raw_output(const Genotype& genotype, const Sample& sample, const Layout& layout,
                  const EvolutionConfig& cfg, const FunctionSet& fs = FunctionSet::standard());

int predict(const Genotype& genotype, const Sample& sample, const Layout& layout,
            const EvolutionConfig& cfg, const FunctionSet& fs = FunctionSet::standard());

// Proportion of samples whose prediction matches the label. Throws
// std::invalid_argument on an empty span.
double fitness(const Genotype& genotype, std::span<const Sample> samples,
               const Layout& layout, const EvolutionConfig& cfg,
               const FunctionSet& fs = FunctionSet::standard());

struct ImprovementEvent {
    int iteration = 0;
    double fitness = 0.0;
};

// (1+lambda) engine over an arbitrary fitness (maximised). selection_fn,
// when given, scores every parent encountered; the best-scoring parent
// (ties to the fitter, then the earlier one) is returned alongside the
// final parent.
struct EngineResult {
    Genotype final_parent;
    double final_fitness = 0.0;
    Genotype best_selected;
    double best_selected_fitness = 0.0;
    double best_selected_score = 0.0;
    std::vector<ImprovementEvent> history; // [0] is the initial parent
    int iterations_run = 0;
};

EngineResult evolve_engine(int n_inputs, const EvolutionConfig& cfg,
                           const std::function<double(const Genotype&)>& fitness_fn,
                           double target_fitness,
                           const std::function<double(const Genotype&)>& selection_fn = nullptr,
                           const FunctionSet& fs = FunctionSet::standard());

struct EvolutionResult {
    Genotype best_genotype;
    double best_train_accuracy = 0.0;
    std::optional<double> best_validation_accuracy;
    std::vector<ImprovementEvent> history;
    int iterations_run = 0;
};

// Classification evolution: fitness is accuracy on train; if validation is
// non-empty the returned genotype is the parent with the best validation
// accuracy, otherwise the final (train-best) parent.
EvolutionResult evolve(std::span<const Sample> train, std::span<const Sample> validation,
                       const Layout& layout, const EvolutionConfig& cfg,
                       const FunctionSet& fs = FunctionSet::standard());

} // namespace cgpc
